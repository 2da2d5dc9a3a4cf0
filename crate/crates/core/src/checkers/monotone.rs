//! Longest monotone subsequences and the iterated extraction of a set that
//! every member of a family orders monotonically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::tuple::KTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotone {
    Increasing,
    Decreasing,
}

/// Patience sorting: a longest subsequence that is strictly increasing
/// under `less`, in O(len log len).
fn longest_by(seq: &[u32], less: impl Fn(u32, u32) -> bool) -> Vec<u32> {
    // tails[j] indexes the smallest possible tail of a chain of length j+1
    let mut tails: Vec<usize> = Vec::new();
    let mut prev = vec![usize::MAX; seq.len()];
    for (i, &v) in seq.iter().enumerate() {
        let j = tails.partition_point(|&t| less(seq[t], v));
        if j > 0 {
            prev[i] = tails[j - 1];
        }
        if j == tails.len() {
            tails.push(i);
        } else {
            tails[j] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(seq[i]);
        cur = (prev[i] != usize::MAX).then_some(prev[i]);
    }
    out.reverse();
    out
}

pub fn longest_increasing(seq: &[u32]) -> Vec<u32> {
    longest_by(seq, |a, b| a < b)
}

pub fn longest_decreasing(seq: &[u32]) -> Vec<u32> {
    longest_by(seq, |a, b| a > b)
}

/// The longer of the longest increasing and longest decreasing
/// subsequences; ties go to the increasing one.
pub fn longest_monotone(seq: &[u32]) -> (Monotone, Vec<u32>) {
    let inc = longest_increasing(seq);
    let dec = longest_decreasing(seq);
    if inc.len() >= dec.len() {
        (Monotone::Increasing, inc)
    } else {
        (Monotone::Decreasing, dec)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EsStep {
    pub direction: Monotone,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EsWitness {
    /// The terminal set, sorted ascending.
    pub elements: Vec<u32>,
    pub steps: Vec<EsStep>,
    /// `floor((n-1)^(1/2^m)) + 1`, the size the extraction always reaches.
    pub guaranteed_size: usize,
    /// The `k` smallest terminal elements, when there are at least `k`.
    pub tuple: Option<KTuple>,
}

/// `floor((n-1)^(1/2^m)) + 1`, by `m` nested integer square roots.
pub fn es_guaranteed_size(n: usize, m: usize) -> usize {
    let mut x = n.saturating_sub(1) as u64;
    for _ in 0..m {
        if x <= 1 {
            break;
        }
        x = x.isqrt();
    }
    x as usize + 1
}

/// Processes the members in order: starting from `[n]`, each step keeps the
/// elements of a longest monotone subsequence of the current member
/// restricted to the surviving set. Every member orders the terminal set
/// monotonically, so each of its tuples realizes at most two orders.
pub fn es_witness(family: &Family, k: usize) -> Result<EsWitness> {
    if family.is_empty() {
        return Err(Error::domain("the family is empty"));
    }
    let n = family.n();
    let mut alive = vec![true; n + 1];
    alive[0] = false;
    let mut steps = Vec::with_capacity(family.len());
    let mut survivors = n;
    for p in family.members() {
        let seq: Vec<u32> = p.order().iter().copied().filter(|&a| alive[a as usize]).collect();
        let (direction, kept) = longest_monotone(&seq);
        alive.iter_mut().for_each(|a| *a = false);
        for &a in &kept {
            alive[a as usize] = true;
        }
        survivors = kept.len();
        steps.push(EsStep {
            direction,
            size: survivors,
        });
    }
    let elements: Vec<u32> = (1..=n as u32).filter(|&a| alive[a as usize]).collect();
    debug_assert_eq!(elements.len(), survivors);
    let tuple = (k >= 1 && elements.len() >= k).then(|| KTuple::from_sorted(&elements[..k]));
    Ok(EsWitness {
        elements,
        steps,
        guaranteed_size: es_guaranteed_size(n, family.len()),
        tuple,
    })
}
