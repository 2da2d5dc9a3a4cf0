//! Lattice projections: from a family shattering every k-tuple of a ground
//! set of size `g`, build one on a k-dimensional lattice whose projections
//! fit into `[g]`.
//!
//! Any k points of a k-dimensional lattice have a direction `j` along which
//! their projections (coordinate `j` omitted) are pairwise distinct. Ordering
//! the lattice points by the position of their `j`-projection in a base
//! member therefore transfers every order of the projected tuple.

use rayon::prelude::*;
use serde_json::json;

use super::coded::Lattice;
use super::trace::{Constructed, ConstructionTrace, Guarantee, Recipe};
use super::perfect_family;
use crate::checkers::satisfies_total;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::perm::{all_permutations, factorial, rank_from_positions, Permutation};
use crate::tuple::{binomial, ktuples};
use crate::Verdict;

/// `k |base|` permutations of `[n^k]` from a family shattering every
/// k-tuple of `[n^(k-1)]`.
pub fn kcube_step(base: &Family, n: u32, k: usize) -> Result<Constructed> {
    if k < 2 || n < 1 {
        return Err(Error::domain(format!("need k >= 2 and n >= 1, got k = {k}, n = {n}")));
    }
    let expected = (n as u128).checked_pow(k as u32 - 1);
    if expected != Some(base.n() as u128) {
        return Err(Error::domain(format!(
            "base ground {} is not {n}^{}",
            base.n(),
            k - 1
        )));
    }
    kcube_step_sides(base, &vec![n; k])
}

/// Generalization of [`kcube_step`] to a lattice with sides `sides`; the
/// base must shatter every k-tuple of a ground set at least as large as each
/// projection.
pub fn kcube_step_sides(base: &Family, sides: &[u32]) -> Result<Constructed> {
    let k = sides.len();
    if k < 2 {
        return Err(Error::domain("lattice needs at least two directions"));
    }
    if base.n() < k {
        return Err(Error::domain(format!("base ground {} smaller than k = {k}", base.n())));
    }
    if let Verdict::Fails(w) = satisfies_total(base, k)? {
        return Err(Error::Precondition {
            reason: format!("base family does not shatter every {k}-tuple"),
            witness: Some(w),
        });
    }
    let lattice = Lattice::new(sides.to_vec())?;
    let family = lattice_step(base, &lattice)?;
    Ok(Constructed {
        family,
        trace: ConstructionTrace::new(
            Recipe::Kcube,
            json!({ "base_n": base.n(), "base_size": base.len(), "sides": sides, "ground": lattice.size() }),
            Guarantee::TotalShatter { k },
        ),
    })
}

/// For each base member `P` and direction `j`, the permutation ordering
/// points by the position of their `j`-projection in `P`; points with equal
/// projections keep ascending element order.
fn lattice_step(base: &Family, lattice: &Lattice) -> Result<Family> {
    let k = lattice.dim();
    for j in 0..k {
        if lattice.projection_size(j) > base.n() {
            return Err(Error::domain(format!(
                "projection of {:?} along direction {} has {} points, base ground is {}",
                lattice.sides(),
                j + 1,
                lattice.projection_size(j),
                base.n()
            )));
        }
    }
    let size = lattice.size();
    // projections[j][x - 1]
    let projections: Vec<Vec<u32>> = (0..k)
        .map(|j| {
            (1..=size as u32)
                .map(|x| lattice.project(&lattice.coords(x), j))
                .collect()
        })
        .collect();
    let members: Vec<Permutation> = base
        .members()
        .par_iter()
        .flat_map_iter(|p| {
            let pos = p.positions();
            projections.iter().map(move |proj| {
                let mut order: Vec<u32> = (1..=size as u32).collect();
                order.sort_by_key(|&x| (pos[proj[x as usize - 1] as usize], x));
                Permutation::new(order).expect("sorted ground is a permutation")
            })
        })
        .collect();
    Family::new(size, members)
}

/// Sides for one lattice step from a shattering family on `[g]`:
/// `(b_1, b_1, b_2, ..., b_{k-1})` with `b_1 <= ... <= b_{k-1}`,
/// `b_1 >= 2` and `b_1 ... b_{k-1} <= g`, so every projection fits into
/// `[g]`. Picks the smallest lattice with at least `target` points, or the
/// largest lattice when none reaches `target`. `None` when no lattice grows.
pub fn choose_sides(g: usize, k: usize, target: usize) -> Option<Vec<u32>> {
    fn walk(prefix: &mut Vec<u32>, len: usize, budget: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let lo = prefix.last().copied().unwrap_or(2);
        let slots = (len - prefix.len()) as u32;
        let mut b = lo;
        // remaining factors are all >= b
        while (b as u128).pow(slots) <= budget as u128 {
            prefix.push(b);
            walk(prefix, len, budget / b as usize, out);
            prefix.pop();
            b += 1;
        }
    }
    if k < 2 {
        return None;
    }
    let mut tuples = Vec::new();
    walk(&mut Vec::new(), k - 1, g, &mut tuples);
    let size = |b: &Vec<u32>| b[0] as u128 * b.iter().map(|&x| x as u128).product::<u128>();
    let reaching = tuples.iter().filter(|b| size(b) >= target as u128).min_by_key(|b| (size(b), (*b).clone()));
    let best = match reaching {
        Some(b) => b,
        None => tuples.iter().max_by_key(|b| (size(b), std::cmp::Reverse((*b).clone())))?,
    };
    let mut sides = vec![best[0]];
    sides.extend_from_slice(best);
    Some(sides)
}

/// Greedy covering: repeatedly adds the permutation of `[s]` (lexicographic
/// scan, first maximum wins) realizing the most not-yet-seen (tuple, order)
/// pairs, until every k-tuple of `[s]` is shattered.
pub fn greedy_shattering_family(s: usize, k: usize) -> Result<Family> {
    if !(2..=5).contains(&k) || k > s || s > 8 {
        return Err(Error::Unsupported(format!("greedy seed needs 2 <= k <= min(5, s) and s <= 8, got k = {k}, s = {s}")));
    }
    let candidates = all_permutations(s);
    let tuples: Vec<Vec<u32>> = ktuples(s, k)?.map(|t| t.elements().to_vec()).collect();
    let tcount = tuples.len();
    let table: Vec<u8> = candidates
        .par_iter()
        .flat_map_iter(|p| {
            let pos = p.positions();
            tuples.iter().map(move |t| {
                let buf: Vec<u32> = t.iter().map(|&a| pos[a as usize]).collect();
                rank_from_positions(&buf) as u8
            })
        })
        .collect();
    let full = factorial(k);
    let mut covered = vec![0u128; tcount];
    let mut missing = tcount as u64 * full as u64;
    let mut chosen = Vec::new();
    while missing > 0 {
        let gain = |c: usize| -> u64 {
            let row = &table[c * tcount..(c + 1) * tcount];
            row.iter()
                .zip(&covered)
                .filter(|(&r, &mask)| mask >> r & 1 == 0)
                .count() as u64
        };
        let (best, g) = (0..candidates.len())
            .into_par_iter()
            .map(|c| (c, gain(c)))
            .reduce(|| (usize::MAX, 0), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
        debug_assert!(g > 0);
        for (mask, &r) in covered.iter_mut().zip(&table[best * tcount..(best + 1) * tcount]) {
            *mask |= 1u128 << r;
        }
        missing -= g;
        chosen.push(candidates[best].clone());
    }
    Family::new(s, chosen)
}

/// A family on `[target]` shattering every k-tuple, for `k` in `{3, 4}`.
///
/// Starts from the perfect family on `[k+1]`, applies lattice steps (see
/// [`choose_sides`]) until the ground reaches `target`, then deletes the
/// elements above `target`. For `k = 4` the perfect family on `[5]` admits no
/// growing lattice, so the chain starts from a greedy shattering family on
/// `[8]` instead.
pub fn shatter_family(k: usize, target: usize) -> Result<Constructed> {
    if !(3..=4).contains(&k) {
        return Err(Error::Unsupported(format!("shatter_family supports k in 3..=4, got {k}")));
    }
    if target < k {
        return Err(Error::domain(format!("ground {target} below k = {k}")));
    }
    let seed = perfect_family(k)?.family;
    let mut seed_name = "perfect";
    let mut family = seed;
    if target > family.n() && choose_sides(family.n(), k, target).is_none() {
        family = greedy_shattering_family(1 << (k - 1), k)?;
        seed_name = "greedy";
    }
    let seed_n = family.n();
    let seed_size = family.len();
    let mut steps = Vec::new();
    while family.n() < target {
        let sides = choose_sides(family.n(), k, target).ok_or_else(|| {
            Error::Unsupported(format!("no lattice step grows a ground of {}", family.n()))
        })?;
        let lattice = Lattice::new(sides.clone())?;
        family = lattice_step(&family, &lattice)?;
        steps.push(json!({ "sides": sides, "ground": family.n(), "size": family.len() }));
    }
    let built_ground = family.n();
    if family.n() > target {
        family = family.restrict_to_prefix(target)?;
    }
    Ok(Constructed {
        family,
        trace: ConstructionTrace::new(
            Recipe::Shatter,
            json!({
                "k": k,
                "n": target,
                "seed": seed_name,
                "seed_n": seed_n,
                "seed_size": seed_size,
                "steps": steps,
                "built_ground": built_ground,
                "total_tuples": binomial(target as u64, k as u64),
            }),
            Guarantee::TotalShatter { k },
        ),
    })
}
