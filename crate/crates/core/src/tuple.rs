use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing selection `a_1 < ... < a_k` from `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KTuple {
    elements: Vec<u32>,
}

impl KTuple {
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::domain("a tuple needs at least one element"));
        }
        if elements[0] == 0 {
            return Err(Error::domain("tuple elements are 1-based"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!("{elements:?} is not strictly increasing")));
        }
        Ok(KTuple { elements })
    }

    pub(crate) fn from_sorted(elements: &[u32]) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        KTuple {
            elements: elements.to_vec(),
        }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> u32 {
        *self.elements.last().expect("non-empty")
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        if self.max() as usize > n {
            return Err(Error::domain(format!("tuple {self} not contained in [{n}]")));
        }
        Ok(())
    }
}

impl fmt::Display for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Advances `buf` (a strictly increasing selection from `[n]`) to its
/// lexicographic successor. Returns `false` when `buf` was the last one.
#[inline]
pub(crate) fn next_combination(buf: &mut [u32], n: u32) -> bool {
    let k = buf.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        let limit = n - (k - 1 - i) as u32;
        if buf[i] < limit {
            buf[i] += 1;
            for j in i + 1..k {
                buf[j] = buf[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Index of `t` in the lexicographic enumeration of k-subsets of `[n]`.
pub fn lex_index(t: &[u32], n: u32) -> u64 {
    let k = t.len() as u64;
    let mut idx = 0u64;
    let mut prev = 0u32;
    for (i, &c) in t.iter().enumerate() {
        let rest = k - i as u64 - 1;
        for v in prev + 1..c {
            idx += binomial((n - v) as u64, rest);
        }
        prev = c;
    }
    idx
}

/// Iterator over all k-subsets of `[n]` in lexicographic order.
pub struct KTuples {
    buf: Vec<u32>,
    n: u32,
    done: bool,
}

impl Iterator for KTuples {
    type Item = KTuple;

    fn next(&mut self) -> Option<KTuple> {
        if self.done {
            return None;
        }
        let out = KTuple::from_sorted(&self.buf);
        self.done = !next_combination(&mut self.buf, self.n);
        Some(out)
    }
}

pub fn ktuples(n: usize, k: usize) -> Result<KTuples> {
    if k == 0 {
        return Err(Error::domain("tuple size must be at least 1"));
    }
    if k > n {
        return Err(Error::domain(format!("tuple size {k} exceeds ground size {n}")));
    }
    Ok(KTuples {
        buf: (1..=k as u32).collect(),
        n: n as u32,
        done: false,
    })
}
