//! Explicit family constructions.
//!
//! All constructions are deterministic. Each returns the family together with
//! a [`ConstructionTrace`] whose claimed guarantee can be re-checked with
//! [`ConstructionTrace::verify`].

mod coded;
mod lattice;
mod trace;

use serde_json::json;

use crate::checkers::satisfies_partial;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::oracle::{min_family_size, SearchConfig};
use crate::perm::{factorial, Permutation};
use crate::separators::separating_system;
use crate::tuple::binomial;
use crate::Verdict;

pub use coded::{CodedGround, Lattice, MAX_GROUND};
pub use lattice::{choose_sides, greedy_shattering_family, kcube_step, kcube_step_sides, shatter_family};
pub use trace::{Constructed, ConstructionTrace, Guarantee, Recipe};

/// The six members of the perfect family on `[4]`, in their listed order.
pub const Q_PATTERNS: [[u32; 4]; 6] = [
    [1, 2, 3, 4],
    [2, 4, 1, 3],
    [3, 4, 1, 2],
    [1, 4, 3, 2],
    [4, 2, 3, 1],
    [3, 2, 1, 4],
];

/// Six permutations of `[4]` shattering all four triples.
pub fn q34() -> Family {
    Family::from_rows(&Q_PATTERNS).expect("constant table")
}

pub fn q34_trace() -> ConstructionTrace {
    ConstructionTrace::new(Recipe::Q34, json!({ "n": 4 }), Guarantee::TotalShatter { k: 3 })
}

/// `k!` permutations of `[k+1]` shattering every k-tuple, found by
/// exhaustive search (lexicographically least such family).
pub fn perfect_family(k: usize) -> Result<Constructed> {
    if !(2..=4).contains(&k) {
        return Err(Error::Unsupported(format!("perfect families are searched for k in 2..=4, got {k}")));
    }
    let report = min_family_size(k + 1, k, factorial(k), &SearchConfig::default())?;
    let family = report
        .witness
        .filter(|w| w.len() == factorial(k) as usize)
        .ok_or_else(|| Error::Unsupported(format!("search for a perfect family with k = {k} did not finish")))?;
    Ok(Constructed {
        family,
        trace: ConstructionTrace::new(
            Recipe::Perfect,
            json!({ "k": k, "n": k + 1, "nodes_explored": report.nodes_explored }),
            Guarantee::TotalShatter { k },
        ),
    })
}

/// Builds a family on `[n^n]` in which every triple sees at least 4 orders
/// from a family on `[n]` with the same property.
///
/// Elements of `[n^n]` are coded as strings in `[n]^n`; block levels are the
/// code positions. The output holds, in order:
///
/// 1. one blockwise copy of each base member (the increasing permutation is
///    put first when the base lacks it): `x` precedes `y` iff
///    `x_d` precedes `y_d` in the member, `d` the first differing level;
/// 2. one permutation per partition `(I, D)` of the levels from
///    [`separating_system`]: level `d` ascending when `d` is in `I`,
///    descending otherwise;
/// 3. the decreasing permutation.
///
/// Members may repeat when a base member is itself decreasing.
pub fn little_construction(base: &Family) -> Result<Constructed> {
    let n = base.n();
    if n < 3 {
        return Err(Error::domain(format!("base ground must be at least 3, got {n}")));
    }
    let ground = CodedGround::new(n as u32, n as u32)?;
    if let Verdict::Fails(w) = satisfies_partial(base, 3, 4)? {
        return Err(Error::Precondition {
            reason: "base family does not give every triple 4 orders".into(),
            witness: Some(w),
        });
    }

    let mut base_members: Vec<Permutation> = base.members().to_vec();
    let inserted_identity = !base_members.iter().any(Permutation::is_identity);
    if inserted_identity {
        base_members.insert(0, Permutation::identity(n));
    }

    let levels = n;
    let ascending: Vec<u32> = (1..=n as u32).collect();
    let descending: Vec<u32> = (1..=n as u32).rev().collect();

    let mut members = Vec::new();
    for p in &base_members {
        let ranks: Vec<u32> = (1..=n as u32).map(|d| p.positions()[d as usize]).collect();
        members.push(ground.order_by_levels(&vec![ranks; levels])?);
    }
    let system = separating_system(levels)?;
    for part in system.parts() {
        let level_orders: Vec<Vec<u32>> = (1..=levels as u32)
            .map(|l| if part.in_a(l) { ascending.clone() } else { descending.clone() })
            .collect();
        members.push(ground.order_by_levels(&level_orders)?);
    }
    members.push(ground.order_by_levels(&vec![descending; levels])?);

    let family = Family::new(ground.size(), members)?;
    Ok(Constructed {
        family,
        trace: ConstructionTrace::new(
            Recipe::Little,
            json!({
                "base_n": n,
                "base_size": base.len(),
                "inserted_identity": inserted_identity,
                "ground": ground.size(),
                "separating_parts": system.len(),
                "type1": base_members.len(),
                "type2": system.len(),
                "decreasing": 1,
            }),
            Guarantee::Partial { k: 3, t: 4 },
        ),
    })
}

/// Shattered triples guaranteed by [`fractional_family`]: `n(n^2-1)/15`
/// with `n = 4^r`.
pub fn fractional_guarantee(r: u32) -> u64 {
    let n = 4u64.pow(r);
    n * (n * n - 1) / 15
}

/// Number of guaranteed triples through one fixed element:
/// `sum_{i=1..r} 3 (n/4^i)^2 = (n^2 - 1)/5`.
pub fn fractional_per_element(r: u32) -> u64 {
    let n = 4u64.pow(r);
    (1..=r).map(|i| 3 * (n / 4u64.pow(i)).pow(2)).sum()
}

/// Does the triple have codes that agree before some level and take three
/// distinct values there?
pub fn splits_at_common_level(ground: &CodedGround, triple: [u32; 3]) -> Result<bool> {
    let codes = triple.map(|x| ground.encode(x));
    let [a, b, c] = codes;
    let (a, b, c) = (a?, b?, c?);
    for l in 0..ground.length() as usize {
        let same_ab = a[l] == b[l];
        let same_ac = a[l] == c[l];
        let same_bc = b[l] == c[l];
        if same_ab && same_ac {
            continue;
        }
        return Ok(!same_ab && !same_ac && !same_bc);
    }
    Ok(false)
}

/// Six permutations of `[4^r]`: member `i` orders the blocks of every level
/// by the `i`-th member of the perfect family on `[4]`.
pub fn fractional_family(r: u32) -> Result<Constructed> {
    if r == 0 {
        return Err(Error::domain("need r >= 1"));
    }
    let ground = CodedGround::new(4, r)?;
    let members = Q_PATTERNS
        .iter()
        .map(|q| {
            let p = Permutation::new(q.to_vec()).expect("constant table");
            let ranks: Vec<u32> = (1..=4).map(|d| p.positions()[d as usize]).collect();
            ground.order_by_levels(&vec![ranks; r as usize])
        })
        .collect::<Result<Vec<_>>>()?;
    let n = ground.size();
    let family = Family::new(n, members)?;
    Ok(Constructed {
        family,
        trace: ConstructionTrace::new(
            Recipe::Fractional,
            json!({ "r": r, "n": n }),
            Guarantee::Fraction {
                k: 3,
                shattered_at_least: fractional_guarantee(r),
                total: binomial(n as u64, 3),
            },
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::{coverage, satisfies_total};

    #[test]
    fn q34_is_perfect() {
        let q = q34();
        assert_eq!(q.len(), 6);
        assert_eq!(q.members()[1].order(), &[2, 4, 1, 3]);
        assert_eq!(coverage(&q, 3).unwrap().min_count, 6);
        assert!(q34_trace().verify(&q).unwrap().holds());
    }

    #[test]
    fn fractional_r1_is_q34() {
        let c = fractional_family(1).unwrap();
        assert_eq!(c.family, q34());
        assert_eq!(fractional_guarantee(1), 4);
    }

    #[test]
    fn fractional_counts() {
        assert_eq!(fractional_guarantee(2), 272);
        assert_eq!(fractional_per_element(2), 51);
        for r in 1..=6 {
            let n = 4u64.pow(r);
            assert_eq!(fractional_per_element(r), (n * n - 1) / 5);
            assert_eq!(fractional_guarantee(r) * 3, n * fractional_per_element(r));
        }
    }

    #[test]
    fn fractional_split_triples_are_shattered() {
        let c = fractional_family(2).unwrap();
        let ground = CodedGround::new(4, 2).unwrap();
        let report = coverage(&c.family, 3).unwrap();
        let mut split = 0;
        for t in crate::tuple::ktuples(16, 3).unwrap() {
            let e = t.elements();
            if splits_at_common_level(&ground, [e[0], e[1], e[2]]).unwrap() {
                split += 1;
                assert_eq!(report.count_for(&t), Some(6), "{t}");
            }
        }
        assert_eq!(split, 272);
        assert!(report.shattered_count >= 272);
    }

    #[test]
    fn little_rejects_weak_base() {
        let weak = Family::new(4, vec![Permutation::identity(4), Permutation::decreasing(4)]).unwrap();
        match little_construction(&weak) {
            Err(Error::Precondition { witness: Some(w), .. }) => assert_eq!(w.elements(), &[1, 2, 3]),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn little_on_three() {
        let base = min_family_size(3, 3, 4, &SearchConfig::default()).unwrap().witness.unwrap();
        assert_eq!(base.len(), 4);
        let c = little_construction(&base).unwrap();
        assert_eq!(c.family.n(), 27);
        assert_eq!(c.family.len(), base.len() + separating_system(3).unwrap().len() + 1);
        assert!(satisfies_partial(&c.family, 3, 4).unwrap().holds());
        assert!(c.trace.verify(&c.family).unwrap().holds());
    }

    #[test]
    fn little_inserts_identity() {
        // S_3 without the identity still gives every triple 5 orders
        let rows: Vec<Vec<u32>> = crate::perm::all_permutations(3)
            .into_iter()
            .skip(1)
            .map(|p| p.order().to_vec())
            .collect();
        let base = Family::from_rows(&rows).unwrap();
        let c = little_construction(&base).unwrap();
        assert_eq!(c.family.len(), 6 + 3 + 1);
        assert!(c.family.members()[0].is_identity());
        assert_eq!(c.trace.parameters["inserted_identity"], true);
        assert!(satisfies_partial(&c.family, 3, 4).unwrap().holds());
    }

    #[test]
    fn perfect_small() {
        let p2 = perfect_family(2).unwrap();
        assert_eq!(p2.family, Family::from_rows(&[[1, 2, 3], [3, 2, 1]]).unwrap());
        let p3 = perfect_family(3).unwrap();
        assert_eq!(p3.family.len(), 6);
        assert!(satisfies_total(&p3.family, 3).unwrap().holds());
        assert!(perfect_family(5).is_err());
        assert!(perfect_family(1).is_err());
    }
}
