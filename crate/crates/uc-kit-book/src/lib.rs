//! The guide in `book/` compiled as doctests: one module per chapter, so a
//! failing listing points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/bodies.md")]
pub mod bodies {}
#[doc = include_str!("../../../book/src/moduli.md")]
pub mod moduli {}
#[doc = include_str!("../../../book/src/transfers.md")]
pub mod transfers {}
#[doc = include_str!("../../../book/src/solvers.md")]
pub mod solvers {}
#[doc = include_str!("../../../book/src/rademacher.md")]
pub mod rademacher {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
