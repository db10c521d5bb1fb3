//! Exact homological algebra for finitely presented representations of the
//! grid `ℕ^∞`, the Young lattice and the orbit category of `ℤ`.
//!
//! Start with [`fpmod::Presentation`], compute with [`homology::report`] or
//! [`homology::resolution`], and see the guide in `book/` for the rest.
//!
//! ```
//! use ninf::verify::registry;
//!
//! let e = registry("grid-simple", "3")?;
//! assert!(e.check()?.iter().all(|c| c.passed));
//! # Ok::<(), ninf::Error>(())
//! ```

pub mod error;
pub mod field;
pub mod fpmod;
pub mod homology;
pub mod linalg;
pub mod orbit;
pub mod poset;
pub mod shift;

pub use error::{Error, Result};
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/posets.md")]
    mod posets {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/shifts.md")]
    mod shifts {}
    #[doc = include_str!("../../../book/src/orbit.md")]
    mod orbit {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
