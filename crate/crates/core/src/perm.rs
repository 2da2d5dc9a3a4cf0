//! Permutations in one-line notation and pattern ranks.
//!
//! Elements are 1-based throughout. A [`Permutation`] keeps both its one-line
//! order and the inverse position table, so `position` is O(1).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tuple::KTuple;

/// Largest pattern length whose factorial fits a `u32` rank.
pub const MAX_PATTERN_LEN: usize = 12;

const FACT: [u32; MAX_PATTERN_LEN + 1] = {
    let mut f = [1u32; MAX_PATTERN_LEN + 1];
    let mut i = 1;
    while i <= MAX_PATTERN_LEN {
        f[i] = f[i - 1] * i as u32;
        i += 1;
    }
    f
};

/// `k!` for `k <= 12`.
pub fn factorial(k: usize) -> u32 {
    FACT[k]
}

/// A linear order of `[n]`.
#[derive(Clone)]
pub struct Permutation {
    order: Vec<u32>,
    // pos[a] is the 1-based position of a; pos[0] is unused.
    pos: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its one-line notation.
    pub fn new(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::domain("a permutation needs at least one element"));
        }
        if n > u32::MAX as usize - 1 {
            return Err(Error::domain("ground set too large"));
        }
        let mut pos = vec![0u32; n + 1];
        for (i, &a) in order.iter().enumerate() {
            if a == 0 || a as usize > n {
                return Err(Error::domain(format!("value {a} outside 1..={n}")));
            }
            if pos[a as usize] != 0 {
                return Err(Error::domain(format!("value {a} repeated")));
            }
            pos[a as usize] = i as u32 + 1;
        }
        Ok(Permutation { order, pos })
    }

    /// Builds a permutation from a position table: `positions[a-1]` is the
    /// 1-based position of `a`.
    pub fn from_positions(positions: &[u32]) -> Result<Self> {
        let n = positions.len();
        let mut order = vec![0u32; n];
        for (i, &p) in positions.iter().enumerate() {
            if p == 0 || p as usize > n || order[p as usize - 1] != 0 {
                return Err(Error::domain(format!("invalid position table entry {p}")));
            }
            order[p as usize - 1] = i as u32 + 1;
        }
        Permutation::new(order)
    }

    pub fn identity(n: usize) -> Self {
        Permutation::new((1..=n as u32).collect()).expect("identity is a permutation")
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation::new((1..=n as u32).rev().collect()).expect("decreasing is a permutation")
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// Position table indexed by element; entry 0 is unused.
    pub fn positions(&self) -> &[u32] {
        &self.pos
    }

    /// 1-based index `i` with `order[i] = a`.
    pub fn position(&self, a: u32) -> Result<usize> {
        if a == 0 || a as usize > self.n() {
            return Err(Error::domain(format!("element {a} outside 1..={}", self.n())));
        }
        Ok(self.pos[a as usize] as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &a)| a as usize == i + 1)
    }

    /// The reverse order: `position(rev, a) = n + 1 - position(self, a)`.
    pub fn reverse(&self) -> Permutation {
        let mut order = self.order.clone();
        order.reverse();
        Permutation::new(order).expect("reverse of a permutation")
    }

    /// The pattern in `S_k` followed by the tuple `x` in this permutation.
    pub fn pattern_of(&self, x: &KTuple) -> Result<PatternRank> {
        let k = x.len();
        if k > MAX_PATTERN_LEN {
            return Err(Error::domain(format!("pattern length {k} exceeds {MAX_PATTERN_LEN}")));
        }
        let mut positions = [0u32; MAX_PATTERN_LEN];
        for (slot, &a) in positions.iter_mut().zip(x.elements()) {
            *slot = self.position(a)? as u32;
        }
        Ok(PatternRank {
            k: k as u8,
            rank: rank_from_positions(&positions[..k]),
        })
    }

    /// Deletes every element not accepted by `keep` and relabels the
    /// survivors order-preservingly onto `1..=m`.
    pub fn restrict(&self, keep: impl Fn(u32) -> bool) -> Result<Permutation> {
        let mut label = vec![0u32; self.n() + 1];
        let mut next = 0;
        for a in 1..=self.n() as u32 {
            if keep(a) {
                next += 1;
                label[a as usize] = next;
            }
        }
        let order = self
            .order
            .iter()
            .filter(|&&a| label[a as usize] != 0)
            .map(|&a| label[a as usize])
            .collect();
        Permutation::new(order)
    }

    /// Deletes all elements larger than `m`.
    pub fn restrict_to_prefix(&self, m: usize) -> Result<Permutation> {
        if m == 0 || m > self.n() {
            return Err(Error::domain(format!("cannot restrict [{}] to [{m}]", self.n())));
        }
        self.restrict(|a| a as usize <= m)
    }

    /// Applies the bijection `map` (1-based, `map[a-1]` is the new name of
    /// `a`) to every element.
    pub fn relabel(&self, map: &[u32]) -> Result<Permutation> {
        if map.len() != self.n() {
            return Err(Error::domain("relabeling has the wrong length"));
        }
        Permutation::new(self.order.iter().map(|&a| map[a as usize - 1]).collect())
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for Permutation {}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.order)
    }
}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.order)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.order.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All permutations of `[n]` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation::new(cur.clone()).expect("permutation"));
        if !next_permutation(&mut cur) {
            return out;
        }
    }
}

/// Lexicographic successor in place; `false` after the last permutation.
pub(crate) fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Canonical id of a pattern in `S_k`: its Lehmer code read in the
/// factorial number system. Rank 0 is the increasing pattern and ranks follow
/// the lexicographic order of one-line notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternRank {
    k: u8,
    rank: u32,
}

impl PatternRank {
    pub fn new(k: usize, rank: u32) -> Result<Self> {
        if k == 0 || k > MAX_PATTERN_LEN {
            return Err(Error::domain(format!("pattern length {k} outside 1..={MAX_PATTERN_LEN}")));
        }
        if rank >= factorial(k) {
            return Err(Error::domain(format!("rank {rank} outside 0..{}", factorial(k))));
        }
        Ok(PatternRank { k: k as u8, rank })
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn pattern(&self) -> Vec<u32> {
        unrank_pattern(self.k(), self.rank).expect("valid rank")
    }

    /// The rank of the pattern read right to left.
    pub fn reversed(&self) -> PatternRank {
        let mut p = self.pattern();
        p.reverse();
        rank_pattern(&p).expect("reversal of a pattern")
    }

    pub fn is_monotone(&self) -> bool {
        self.rank == 0 || self.rank == factorial(self.k()) - 1
    }
}

/// Rank of a one-line pattern of `1..=k` in lexicographic order.
pub fn rank_pattern(p: &[u32]) -> Result<PatternRank> {
    let k = p.len();
    if k == 0 || k > MAX_PATTERN_LEN {
        return Err(Error::domain(format!("pattern length {k} outside 1..={MAX_PATTERN_LEN}")));
    }
    let mut seen = [false; MAX_PATTERN_LEN + 1];
    for &v in p {
        if v == 0 || v as usize > k || seen[v as usize] {
            return Err(Error::domain(format!("{p:?} is not a permutation of 1..={k}")));
        }
        seen[v as usize] = true;
    }
    let mut rank = 0;
    for i in 0..k {
        let smaller_after = p[i + 1..].iter().filter(|&&v| v < p[i]).count();
        rank += smaller_after as u32 * factorial(k - 1 - i);
    }
    Ok(PatternRank { k: k as u8, rank })
}

/// Inverse of [`rank_pattern`].
pub fn unrank_pattern(k: usize, rank: u32) -> Result<Vec<u32>> {
    PatternRank::new(k, rank)?;
    let mut pool: Vec<u32> = (1..=k as u32).collect();
    let mut r = rank;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let f = factorial(k - 1 - i);
        let digit = (r / f) as usize;
        r %= f;
        out.push(pool.remove(digit));
    }
    Ok(out)
}

/// Pattern rank of a tuple `x_1 < ... < x_k` given `positions[i] = pos(P, x_{i+1})`.
///
/// The element `x_i` appears at index `#{j : pos_j < pos_i}` of the pattern,
/// and its Lehmer digit counts the smaller elements appearing after it.
#[inline]
pub fn rank_from_positions(positions: &[u32]) -> u32 {
    let k = positions.len();
    let mut rank = 0;
    for i in 0..k {
        let pi = positions[i];
        let mut before = 0;
        let mut smaller_after = 0;
        for (j, &pj) in positions.iter().enumerate() {
            if pj < pi {
                before += 1;
            } else if j < i && pj > pi {
                smaller_after += 1;
            }
        }
        rank += smaller_after * FACT[k - 1 - before];
    }
    rank
}
