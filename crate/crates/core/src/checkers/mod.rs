//! Shattering checkers.
//!
//! Every checker sweeps the k-subsets of `[n]` in lexicographic order. The
//! sweep is split by first element and run data-parallel; partial results are
//! merged in chunk order, so witnesses and counts do not depend on the number
//! of worker threads.

mod mask;
mod monotone;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::perm::{factorial, rank_from_positions, PatternRank};
use crate::tuple::{binomial, lex_index, next_combination, KTuple};
use crate::Verdict;

pub use mask::{PatternMask, MAX_MASK_K};
pub use monotone::{
    es_guaranteed_size, es_witness, longest_decreasing, longest_increasing, longest_monotone, EsWitness,
    Monotone,
};

/// Default cap on `C(n,k)` above which per-tuple counts are not kept.
pub const DEFAULT_MATERIALIZE_CAP: u64 = 10_000_000;
/// Default number of unshattered witnesses kept in a report.
pub const DEFAULT_WITNESS_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct CoverageOptions {
    pub materialize_cap: u64,
    pub witness_limit: usize,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions {
            materialize_cap: DEFAULT_MATERIALIZE_CAP,
            witness_limit: DEFAULT_WITNESS_LIMIT,
        }
    }
}

/// Aggregated per-tuple order counts of a family.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub min_count: u32,
    pub shattered_count: u64,
    pub total_tuples: u64,
    /// First unshattered tuples in lexicographic order, at most
    /// `witness_limit` of them.
    pub unshattered_witnesses: Vec<KTuple>,
    #[serde(skip)]
    per_tuple_counts: Option<Vec<u16>>,
}

impl CoverageReport {
    pub fn unshattered_count(&self) -> u64 {
        self.total_tuples - self.shattered_count
    }

    /// Fraction of k-tuples that are totally shattered.
    pub fn fraction(&self) -> Ratio<u64> {
        Ratio::new(self.shattered_count, self.total_tuples)
    }

    pub fn is_materialized(&self) -> bool {
        self.per_tuple_counts.is_some()
    }

    /// Count of distinct orders of `x`, when counts were materialized.
    pub fn count_for(&self, x: &KTuple) -> Option<u32> {
        if x.len() != self.k || x.max() as usize > self.n {
            return None;
        }
        let counts = self.per_tuple_counts.as_ref()?;
        counts.get(lex_index(x.elements(), self.n as u32) as usize).map(|&c| c as u32)
    }

    /// Per-tuple counts in lexicographic tuple order, when materialized.
    pub fn counts(&self) -> Option<&[u16]> {
        self.per_tuple_counts.as_deref()
    }
}

/// Precomputed position tables for fast per-tuple pattern ranking.
struct Scanner<'a> {
    positions: Vec<&'a [u32]>,
    k: usize,
}

impl<'a> Scanner<'a> {
    fn new(family: &'a Family, k: usize) -> Result<Self> {
        if k == 0 || k > family.n() {
            return Err(Error::domain(format!("tuple size {k} outside 1..={}", family.n())));
        }
        if k > MAX_MASK_K {
            return Err(Error::Unsupported(format!(
                "pattern sets are tracked for k <= {MAX_MASK_K}, got k = {k}"
            )));
        }
        Ok(Scanner {
            positions: family.members().iter().map(|p| p.positions()).collect(),
            k,
        })
    }

    #[inline]
    fn rank(&self, member: usize, tuple: &[u32]) -> u32 {
        let pos = self.positions[member];
        let mut buf = [0u32; MAX_MASK_K];
        for (slot, &a) in buf.iter_mut().zip(tuple) {
            *slot = pos[a as usize];
        }
        rank_from_positions(&buf[..self.k])
    }

    #[inline]
    fn mask(&self, tuple: &[u32]) -> PatternMask {
        let mut mask = PatternMask::new();
        for member in 0..self.positions.len() {
            mask.insert(self.rank(member, tuple));
        }
        mask
    }

    /// Calls `f` on every tuple whose first element is `first`, in
    /// lexicographic order; stops early when `f` returns `false`.
    fn for_each_starting_with(&self, n: u32, first: u32, mut f: impl FnMut(&[u32]) -> bool) {
        let k = self.k;
        let mut buf = [0u32; MAX_MASK_K];
        for (i, slot) in buf[..k].iter_mut().enumerate() {
            *slot = first + i as u32;
        }
        loop {
            if !f(&buf[..k]) {
                return;
            }
            if !next_combination(&mut buf[..k], n) || buf[0] != first {
                return;
            }
        }
    }

    fn first_elements(&self, n: usize) -> std::ops::RangeInclusive<u32> {
        1..=(n - self.k + 1) as u32
    }
}

fn require_nonempty(family: &Family) -> Result<()> {
    if family.is_empty() {
        return Err(Error::domain("the family is empty"));
    }
    Ok(())
}

/// Number of distinct patterns `{P_X : P in S}`.
pub fn count_orders(family: &Family, x: &KTuple) -> Result<u32> {
    require_nonempty(family)?;
    x.check_within(family.n())?;
    let scanner = Scanner::new(family, x.len())?;
    Ok(scanner.mask(x.elements()).count())
}

/// The set of patterns realized on `x` across the family.
pub fn realized_patterns(family: &Family, x: &KTuple) -> Result<Vec<PatternRank>> {
    require_nonempty(family)?;
    x.check_within(family.n())?;
    let k = x.len();
    let scanner = Scanner::new(family, k)?;
    let mask = scanner.mask(x.elements());
    Ok(mask
        .iter()
        .map(|r| PatternRank::new(k, r).expect("rank below k!"))
        .collect())
}

pub fn coverage(family: &Family, k: usize) -> Result<CoverageReport> {
    coverage_with(family, k, CoverageOptions::default())
}

pub fn coverage_with(family: &Family, k: usize, opts: CoverageOptions) -> Result<CoverageReport> {
    require_nonempty(family)?;
    let scanner = Scanner::new(family, k)?;
    let n = family.n();
    let full = factorial(k);
    let total = binomial(n as u64, k as u64);
    let materialize = total <= opts.materialize_cap;

    struct Chunk {
        min: u32,
        shattered: u64,
        witnesses: Vec<KTuple>,
        counts: Vec<u16>,
    }

    let chunks: Vec<Chunk> = scanner
        .first_elements(n)
        .into_par_iter()
        .map(|first| {
            let mut chunk = Chunk {
                min: u32::MAX,
                shattered: 0,
                witnesses: Vec::new(),
                counts: Vec::new(),
            };
            scanner.for_each_starting_with(n as u32, first, |t| {
                let c = scanner.mask(t).count();
                chunk.min = chunk.min.min(c);
                if c == full {
                    chunk.shattered += 1;
                } else if chunk.witnesses.len() < opts.witness_limit {
                    chunk.witnesses.push(KTuple::from_sorted(t));
                }
                if materialize {
                    chunk.counts.push(c as u16);
                }
                true
            });
            chunk
        })
        .collect();

    let mut report = CoverageReport {
        n,
        k,
        m: family.len(),
        min_count: u32::MAX,
        shattered_count: 0,
        total_tuples: total,
        unshattered_witnesses: Vec::new(),
        per_tuple_counts: materialize.then(|| Vec::with_capacity(total as usize)),
    };
    for chunk in chunks {
        report.min_count = report.min_count.min(chunk.min);
        report.shattered_count += chunk.shattered;
        let room = opts.witness_limit - report.unshattered_witnesses.len();
        report.unshattered_witnesses.extend(chunk.witnesses.into_iter().take(room));
        if let Some(counts) = report.per_tuple_counts.as_mut() {
            counts.extend(chunk.counts);
        }
    }
    Ok(report)
}

/// Lexicographically least tuple accepted by `bad`, if any.
fn first_tuple_where(scanner: &Scanner<'_>, n: usize, bad: impl Fn(&[u32]) -> bool + Sync) -> Option<KTuple> {
    scanner.first_elements(n).into_par_iter().find_map_first(|first| {
        let mut found = None;
        scanner.for_each_starting_with(n as u32, first, |t| {
            if bad(t) {
                found = Some(KTuple::from_sorted(t));
                false
            } else {
                true
            }
        });
        found
    })
}

/// Does every k-tuple see at least `t` distinct orders?
pub fn satisfies_partial(family: &Family, k: usize, t: u32) -> Result<Verdict<KTuple>> {
    if k == 0 || k > MAX_MASK_K {
        return Err(Error::domain(format!("tuple size {k} outside 1..={MAX_MASK_K}")));
    }
    if t == 0 || t > factorial(k) {
        return Err(Error::domain(format!("t = {t} outside 1..={}", factorial(k))));
    }
    require_nonempty(family)?;
    let scanner = Scanner::new(family, k)?;
    Ok(match first_tuple_where(&scanner, family.n(), |tup| scanner.mask(tup).count() < t) {
        None => Verdict::Holds,
        Some(w) => Verdict::Fails(w),
    })
}

/// Is every k-tuple totally shattered?
pub fn satisfies_total(family: &Family, k: usize) -> Result<Verdict<KTuple>> {
    satisfies_partial(family, k, factorial(k.min(MAX_MASK_K)))
}

/// Does every k-tuple follow the pattern `r` in at least one member?
pub fn follows_everywhere(family: &Family, r: PatternRank) -> Result<Verdict<KTuple>> {
    let k = r.k();
    if k > family.n() {
        return Err(Error::domain(format!("pattern length {k} exceeds ground size {}", family.n())));
    }
    let scanner = Scanner::new(family, k)?;
    let target = r.rank();
    let m = family.len();
    Ok(
        match first_tuple_where(&scanner, family.n(), |tup| (0..m).all(|i| scanner.rank(i, tup) != target)) {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails(w),
        },
    )
}
