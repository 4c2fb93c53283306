//! Minimal SVG line plots drawn from CSV tables.
//!
//! A plot reads only the table it depicts, so it can be regenerated from the
//! CSV file. Coordinates are printed with fixed precision, which keeps the
//! output byte-stable.

use std::fmt::Write;

use uc_kit::io::Table;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Linear,
    Log,
}

impl Axis {
    fn map(self, v: f64) -> Option<f64> {
        match self {
            Axis::Linear if v.is_finite() => Some(v),
            Axis::Log if v > 0.0 && v.is_finite() => Some(v.log10()),
            _ => None,
        }
    }

    fn label(self, t: f64) -> String {
        match self {
            Axis::Linear => format!("{t:.3}"),
            Axis::Log => format!("1e{t:.1}"),
        }
    }
}

pub struct PlotSpec<'a> {
    pub title: &'a str,
    pub x: &'a str,
    pub ys: &'a [&'a str],
    pub x_axis: Axis,
    pub y_axis: Axis,
}

/// Polylines of columns `ys` against column `x`. Points that the axis
/// cannot show (non-positive on a log axis, non-finite) are dropped.
pub fn line_plot(table: &Table, spec: &PlotSpec) -> Option<String> {
    let xs = table.column(spec.x).ok()?;
    let mut series = Vec::new();
    for name in spec.ys {
        let Ok(ys) = table.column(name) else { continue };
        let pts: Vec<(f64, f64)> =
            xs.iter().zip(&ys).filter_map(|(x, y)| Some((spec.x_axis.map(*x)?, spec.y_axis.map(*y)?))).collect();
        if !pts.is_empty() {
            series.push((*name, pts));
        }
    }
    let all = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !x0.is_finite() {
        return None;
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let pw = W - MARGIN_L - MARGIN_R;
    let ph = H - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(spec.title)
    );
    let _ =
        writeln!(s, r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (tx, ty) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(tx),
            H - MARGIN_B + 18.0,
            spec.x_axis.label(tx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            MARGIN_L - 6.0,
            sy(ty) + 4.0,
            spec.y_axis.label(ty)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        MARGIN_L + pw / 2.0,
        H - 10.0,
        escape(spec.x)
    );
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
        let _ =
            writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            MARGIN_L + 10.0,
            MARGIN_T + 16.0 * (i as f64 + 1.0),
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_points_a_log_axis_cannot_show() {
        let mut t = Table::new(&["k", "gap"]);
        t.push(vec![0usize.into(), 1.0.into()]);
        t.push(vec![1usize.into(), 0.5.into()]);
        t.push(vec![2usize.into(), 0.0.into()]);
        let spec = PlotSpec { title: "gap", x: "k", ys: &["gap"], x_axis: Axis::Log, y_axis: Axis::Log };
        let svg = line_plot(&t, &spec).unwrap();
        // Only k = 1 survives the log x axis.
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("points=\"70.00,"));
        assert!(line_plot(&t, &PlotSpec { ys: &["missing"], ..spec }).is_none());
    }
}
