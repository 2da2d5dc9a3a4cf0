//! Exact exhaustive search on tiny ground sets.
//!
//! Families are searched up to relabeling of `[n]`: the first member is the
//! identity, and further members are distinct permutations in strictly
//! increasing lexicographic order. Per-tuple pattern masks give the bounds
//! that cut the tree. Among optimal families the lexicographically least one
//! is reported, independent of the number of worker threads.

mod replay;
mod search;

use std::time::Instant;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::checkers::{coverage, satisfies_partial};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::perm::factorial;
use crate::tuple::binomial;

use search::{best_shattering, first_partial, Budget, Tables};

pub use replay::{insertion_replay, perfect_families_on_four, ReplayReport};

/// Largest ground set the oracle enumerates (`6! = 720` candidates).
pub const MAX_N: usize = 6;
/// Largest tuple size (`5! = 120` patterns fit one mask word).
pub const MAX_K: usize = 5;
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Search nodes (partial families) visited before giving up.
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Problem {
    /// Fewest members giving every k-tuple at least `t` orders.
    Min { n: usize, k: usize, t: u32 },
    /// Most shattered k-tuples with exactly `m` members.
    Max { n: usize, k: usize, m: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub problem: Problem,
    /// Minimal size or maximal shattered count; for a budget-limited max
    /// search, the best value found.
    pub optimum: Option<u64>,
    #[serde(serialize_with = "inline_family")]
    pub witness: Option<Family>,
    pub nodes_explored: u64,
    /// The enumeration covered the whole reduced space.
    pub proof_of_optimality: bool,
    /// Seconds.
    pub wall_time: Option<f64>,
}

fn inline_family<S: Serializer>(f: &Option<Family>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match f {
        Some(f) => s.serialize_str(&f.to_string()),
        None => s.serialize_none(),
    }
}

/// Rough count of families the unpruned search would visit.
fn estimate(n: usize, m: usize) -> f64 {
    let candidates: f64 = (1..=n).map(|i| i as f64).product();
    let r = m.saturating_sub(1) as f64;
    let mut ln = 0.0;
    let mut i = 0.0;
    while i < r {
        ln += (candidates - 1.0 - i).ln() - (i + 1.0).ln();
        i += 1.0;
    }
    ln.exp()
}

fn check_instance(n: usize, k: usize, m_hint: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if n > MAX_N || k > MAX_K {
        return Err(Error::Infeasible {
            reason: format!("exhaustive search supports n <= {MAX_N} and k <= {MAX_K}, got n = {n}, k = {k}"),
            estimate: estimate(n, m_hint),
        });
    }
    Ok(())
}

/// `f_k(n, t)`: the fewest permutations of `[n]` such that every k-tuple
/// sees at least `t` of its orders.
pub fn min_family_size(n: usize, k: usize, t: u32, config: &SearchConfig) -> Result<SearchReport> {
    check_instance(n, k, t as usize)?;
    if t == 0 || t > factorial(k) {
        return Err(Error::domain(format!("need 1 <= t <= {}, got t = {t}", factorial(k))));
    }
    let start = Instant::now();
    let tables = Tables::new(n, k);
    let budget = Budget::new(config.node_budget);
    // t orders need t members; all n! members always suffice
    let mut found = None;
    for m in t as usize..=tables.candidates.len() {
        if let Some(chosen) = first_partial(&tables, m, t, &budget) {
            found = Some(chosen);
            break;
        }
        if budget.aborted() {
            break;
        }
    }
    let proof = !budget.aborted() && found.is_some();
    let witness = match found {
        Some(chosen) if proof => {
            let family = Family::new(n, tables.family_of(&chosen))?;
            if !satisfies_partial(&family, k, t)?.holds() {
                return Err(Error::Verification(format!("search witness for f_{k}({n},{t}) fails the checker")));
            }
            Some(family)
        }
        _ => None,
    };
    Ok(SearchReport {
        problem: Problem::Min { n, k, t },
        optimum: witness.as_ref().map(|w| w.len() as u64),
        witness,
        nodes_explored: budget.used(),
        proof_of_optimality: proof,
        wall_time: Some(start.elapsed().as_secs_f64()),
    })
}

/// The largest number of k-tuples of `[n]` shattered by `m` distinct
/// permutations (`F_k(n, m)` times `C(n, k)`).
pub fn max_shattered(n: usize, k: usize, m: usize, config: &SearchConfig) -> Result<SearchReport> {
    check_instance(n, k, m)?;
    let nc = factorial(n) as usize;
    if m == 0 || m > nc {
        return Err(Error::domain(format!("need 1 <= m <= {nc} distinct permutations, got m = {m}")));
    }
    let start = Instant::now();
    let tables = Tables::new(n, k);
    let problem = Problem::Max { n, k, m };
    if m < factorial(k) as usize {
        // fewer members than orders: nothing is shattered
        let family = Family::new(n, tables.candidates[..m].to_vec())?;
        return Ok(SearchReport {
            problem,
            optimum: Some(0),
            witness: Some(family),
            nodes_explored: 0,
            proof_of_optimality: true,
            wall_time: Some(start.elapsed().as_secs_f64()),
        });
    }
    let budget = Budget::new(config.node_budget);
    let best = best_shattering(&tables, k, m, &budget);
    let (optimum, witness) = match best {
        Some((value, chosen)) => {
            let family = Family::new(n, tables.family_of(&chosen))?;
            let measured = coverage(&family, k)?.shattered_count;
            if measured != value as u64 {
                return Err(Error::Verification(format!(
                    "search witness shatters {measured} tuples, search claimed {value}"
                )));
            }
            (Some(value as u64), Some(family))
        }
        None => (None, None),
    };
    Ok(SearchReport {
        problem,
        optimum,
        witness,
        nodes_explored: budget.used(),
        proof_of_optimality: !budget.aborted() && optimum.is_some(),
        wall_time: Some(start.elapsed().as_secs_f64()),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeEntry {
    pub n: usize,
    /// Maximal shattered count, `None` when the instance was refused.
    pub shattered: Option<u64>,
    pub total: u64,
    pub proof_of_optimality: bool,
    /// `shattered / total` in lowest terms.
    pub fraction: Option<String>,
}

impl ProbeEntry {
    pub fn ratio(&self) -> Option<Ratio<u64>> {
        self.shattered.map(|s| Ratio::new(s, self.total))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub k: usize,
    pub m: usize,
    pub entries: Vec<ProbeEntry>,
    /// The computed fractions never increase with `n`.
    pub non_increasing: bool,
    /// Every `n` in the range was solved to optimality.
    pub complete: bool,
}

/// `F_k(n, m)` for each `n` in the range, with a check that it does not
/// increase. Instances the oracle refuses are reported without a value.
pub fn monotonicity_probe(
    k: usize,
    m: usize,
    ns: impl IntoIterator<Item = usize>,
    config: &SearchConfig,
) -> Result<ProbeReport> {
    let mut entries = Vec::new();
    for n in ns {
        if n < k {
            return Err(Error::domain(format!("n = {n} is below k = {k}")));
        }
        let total = binomial(n as u64, k as u64);
        let entry = match max_shattered(n, k, m, config) {
            Ok(r) => ProbeEntry {
                n,
                shattered: r.optimum.filter(|_| r.proof_of_optimality),
                total,
                proof_of_optimality: r.proof_of_optimality,
                fraction: None,
            },
            Err(Error::Infeasible { .. }) => ProbeEntry {
                n,
                shattered: None,
                total,
                proof_of_optimality: false,
                fraction: None,
            },
            Err(e) => return Err(e),
        };
        entries.push(entry);
    }
    for e in &mut entries {
        e.fraction = e.ratio().map(|r| r.to_string());
    }
    let known: Vec<Ratio<u64>> = entries.iter().filter_map(ProbeEntry::ratio).collect();
    Ok(ProbeReport {
        k,
        m,
        non_increasing: known.windows(2).all(|w| w[0] >= w[1]),
        complete: entries.iter().all(|e| e.proof_of_optimality),
        entries,
    })
}
