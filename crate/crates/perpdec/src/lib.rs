//! Orthogonal decompositions of Hermitian bilinear maps over `GF(p)` and
//! central decompositions of the `p`-groups of class two they describe.
//!
//! Start with [`structure::StarStructure`] for the adjoint algebra of a map,
//! [`frames::frame`] for a fully refined decomposition and
//! [`address::invariants`] for what survives a change of frame. The guide in
//! `book/` walks through each step.

pub mod address;
pub mod adjoint;
pub mod algebra;
pub mod bilinear;
pub mod error;
pub mod frames;
pub mod groups;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod structure;

pub use error::{Error, ErrorKind, Result};

// The guide's snippets run as doctests of these modules.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/adjoint.md")]
    mod adjoint {}
    #[doc = include_str!("../../../book/src/frames.md")]
    mod frames {}
    #[doc = include_str!("../../../book/src/addresses.md")]
    mod addresses {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
