use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::checkers::{coverage, satisfies_partial, satisfies_total};
use crate::error::Result;
use crate::family::Family;
use crate::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recipe {
    Q34,
    Perfect,
    Little,
    Kcube,
    Shatter,
    Fractional,
}

/// What an emitted family is claimed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Guarantee {
    /// Every k-tuple sees all `k!` orders.
    TotalShatter { k: usize },
    /// Every k-tuple sees at least `t` orders.
    Partial { k: usize, t: u32 },
    /// At least `shattered_at_least` of the `total` k-tuples are shattered.
    Fraction {
        k: usize,
        shattered_at_least: u64,
        total: u64,
    },
}

/// Provenance attached to every constructed family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub recipe: Recipe,
    pub parameters: Value,
    pub claimed_guarantee: Guarantee,
}

impl ConstructionTrace {
    pub fn new(recipe: Recipe, parameters: Value, claimed_guarantee: Guarantee) -> Self {
        ConstructionTrace {
            recipe,
            parameters,
            claimed_guarantee,
        }
    }

    /// Re-checks the claimed guarantee on `family` with the checkers.
    pub fn verify(&self, family: &Family) -> Result<Verdict<String>> {
        let describe = |v: Verdict<_>| match v {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(t) => Verdict::Fails(format!("tuple {t}")),
        };
        Ok(match self.claimed_guarantee {
            Guarantee::TotalShatter { k } => describe(satisfies_total(family, k)?),
            Guarantee::Partial { k, t } => describe(satisfies_partial(family, k, t)?),
            Guarantee::Fraction {
                k,
                shattered_at_least,
                ..
            } => {
                let report = coverage(family, k)?;
                if report.shattered_count >= shattered_at_least {
                    Verdict::Holds
                } else {
                    Verdict::Fails(format!(
                        "only {} of {} tuples shattered, claimed at least {shattered_at_least}",
                        report.shattered_count, report.total_tuples
                    ))
                }
            }
        })
    }
}

/// A family together with the trace of how it was built.
#[derive(Debug, Clone)]
pub struct Constructed {
    pub family: Family,
    pub trace: ConstructionTrace,
}
