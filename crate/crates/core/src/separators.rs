//! Systems of two-part partitions `(A, B)` of `[n]` that separate pairs.
//!
//! * [`binary_splits`] separates every unordered pair with `ceil(log2 n)`
//!   partitions, which is optimal.
//! * [`separating_system`] serves every *ordered* pair `(x, y)` with some
//!   partition having `x in A` and `y in B`. Elements receive distinct
//!   `floor(r/2)`-subsets of `[r]` as codes; since no code contains another,
//!   every ordered pair is served.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tuple::binomial;
use crate::Verdict;

/// One partition, stored by its sorted `A` side; `B` is the complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bipartition {
    a_side: Vec<u32>,
}

impl Bipartition {
    pub fn new(mut a_side: Vec<u32>) -> Self {
        a_side.sort_unstable();
        a_side.dedup();
        Bipartition { a_side }
    }

    pub fn a_side(&self) -> &[u32] {
        &self.a_side
    }

    pub fn in_a(&self, x: u32) -> bool {
        self.a_side.binary_search(&x).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSystem {
    ground: usize,
    parts: Vec<Bipartition>,
}

impl PartitionSystem {
    pub fn new(ground: usize, parts: Vec<Bipartition>) -> Result<Self> {
        if let Some(p) = parts.iter().find(|p| p.a_side.iter().any(|&x| x == 0 || x as usize > ground)) {
            return Err(Error::domain(format!("partition side {:?} not within [{ground}]", p.a_side)));
        }
        for (i, p) in parts.iter().enumerate() {
            if parts[..i].contains(p) {
                return Err(Error::domain(format!("duplicate partition {:?}", p.a_side)));
            }
        }
        Ok(PartitionSystem { ground, parts })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn parts(&self) -> &[Bipartition] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Bit `i` of `signature(x)` is set when `x` lies in the `A` side of
    /// partition `i`.
    fn signatures(&self) -> Vec<Vec<u64>> {
        let words = self.parts.len().div_ceil(64).max(1);
        let mut sig = vec![vec![0u64; words]; self.ground + 1];
        for (i, p) in self.parts.iter().enumerate() {
            for &x in &p.a_side {
                sig[x as usize][i / 64] |= 1 << (i % 64);
            }
        }
        sig
    }
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Partition `i` puts `x` in `A` iff bit `i` of `x - 1` is clear.
pub fn binary_splits(n: usize) -> Result<PartitionSystem> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    let parts = (0..ceil_log2(n))
        .map(|bit| Bipartition::new((1..=n as u32).filter(|x| (x - 1) >> bit & 1 == 0).collect()))
        .collect();
    PartitionSystem::new(n, parts)
}

/// Least `r` with `C(r, floor(r/2)) >= n`.
pub fn separating_system_size(n: usize) -> usize {
    let mut r = 1;
    while binomial(r as u64, (r / 2) as u64) < n as u64 {
        r += 1;
    }
    r
}

/// Sperner-antichain codes: element `x` gets the `x`-th `floor(r/2)`-subset
/// of `[r]` in colexicographic order, and partition `i` puts `x` in `A` iff
/// `i` belongs to that code.
pub fn separating_system(n: usize) -> Result<PartitionSystem> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    let r = separating_system_size(n);
    let h = r / 2;
    let codes = colex_subsets(r, h).take(n);
    let mut sides: Vec<Vec<u32>> = vec![Vec::new(); r];
    for (x, code) in codes.enumerate() {
        for (i, side) in sides.iter_mut().enumerate() {
            if code >> i & 1 == 1 {
                side.push(x as u32 + 1);
            }
        }
    }
    PartitionSystem::new(n, sides.into_iter().map(Bipartition::new).collect())
}

/// `h`-subsets of `[r]` as bitmasks, in increasing numeric (= colex) order.
fn colex_subsets(r: usize, h: usize) -> impl Iterator<Item = u64> {
    assert!(r < 64);
    let limit = 1u64 << r;
    let first = if h == 0 { 0 } else { (1u64 << h) - 1 };
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let rr = cur + c;
            let succ = (((rr ^ cur) >> 2) / c) | rr;
            (succ < limit).then_some(succ)
        };
        Some(cur)
    })
}

/// Checks that every pair is separated. With `ordered`, every `(x, y)` with
/// `x != y` needs a partition with `x in A` and `y in B`; otherwise every
/// `x < y` needs a partition splitting them. On failure the lexicographically
/// least uncovered pair is returned.
pub fn verify_separating(sys: &PartitionSystem, ordered: bool) -> Verdict<(u32, u32)> {
    let n = sys.ground;
    let sig = sys.signatures();
    let found = (1..=n as u32).into_par_iter().find_map_first(|x| {
        let sx = &sig[x as usize];
        let start = if ordered { 1 } else { x + 1 };
        (start..=n as u32).find(|&y| {
            if y == x {
                return false;
            }
            let sy = &sig[y as usize];
            if ordered {
                // x in A and y in B somewhere <=> sig(x) is not a subset of sig(y)
                sx.iter().zip(sy).all(|(a, b)| a & !b == 0)
            } else {
                sx == sy
            }
        })
        .map(|y| (x, y))
    });
    match found {
        None => Verdict::Holds,
        Some(pair) => Verdict::Fails(pair),
    }
}
