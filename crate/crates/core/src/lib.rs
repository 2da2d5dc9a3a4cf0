//! Families of permutations that shatter k-tuples.
//!
//! A family of permutations of `[n]` *shatters* a k-tuple `X` when every one
//! of the `k!` relative orders of `X` appears in some member. This crate
//! provides the building blocks to work with such families:
//!
//! * [`perm`], [`tuple`], [`family`]: permutations, pattern ranks, k-tuples
//!   and the family container with its text file format.
//! * [`checkers`]: per-tuple order counts, total and partial shattering,
//!   shattered fractions, fixed-pattern coverage and the monotone-subsequence
//!   extractor.
//! * [`separators`]: two-part partition systems that separate every
//!   (ordered or unordered) pair.
//! * [`constructions`]: explicit families (blockwise iterations, lattice
//!   projections, level-wise ascending/descending orders).
//! * [`oracle`]: exact exhaustive search for minimal family sizes and
//!   maximal shattered counts on tiny ground sets.

pub mod checkers;
pub mod constructions;
pub mod error;
pub mod family;
pub mod oracle;
pub mod perm;
pub mod separators;
pub mod tuple;

pub use error::{Error, Result};
pub use family::Family;
pub use perm::{factorial, PatternRank, Permutation};
pub use tuple::{binomial, ktuples, KTuple};

/// Outcome of a property check: either it holds, or the first failing witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}
