//! Exact torsion linking forms over `K[t, t^-1]` for cyclotomic `K`, with
//! their local invariants: the counts `n_j^±`, height numbers, Novikov-Shubin
//! capacities, torsion signatures, metabolizers and excess.
//!
//! ```
//! use l2link::blocks::{synthesize, BlockForm};
//! use l2link::invariants::signature_counts;
//! use l2link::linking::gram_at_point;
//! use l2link::scalars::Field;
//!
//! let field = Field::new(4)?;
//! let form = BlockForm::new(0, &[(2, 1, 1), (1, -1, 1)])?;
//! let l = gram_at_point(&synthesize(&form, &field, 0)?, 0)?;
//! assert_eq!(signature_counts(&l)?.counts, form.counts());
//! # Ok::<(), l2link::Error>(())
//! ```

pub mod blocks;
pub mod circle;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod linking;
pub mod pairs;
pub mod scalars;
pub mod trace;

pub use error::{Error, Result};
pub use trace::TraceSpec;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/linking.md")]
    mod linking {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/blocks.md")]
    mod blocks {}
    #[doc = include_str!("../../../book/src/circle.md")]
    mod circle {}
    #[doc = include_str!("../../../book/src/pairs.md")]
    mod pairs {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
