//! Independent confirmation that six permutations of `[5]` shatter at most
//! eight triples.
//!
//! A 6-family on `[5]` leaving at most one triple unshattered restricts,
//! after deleting an element of that triple, to a family shattering every
//! triple of the other four elements. Such a family is a relabeled copy of
//! the perfect family on `[4]`, so it suffices to check that (a) every
//! perfect 6-family on `[4]` is a relabeling of it and (b) every way of
//! inserting element 5 into its members leaves two triples unshattered.

use rayon::prelude::*;
use serde::Serialize;

use crate::checkers::{coverage, satisfies_total};
use crate::constructions::q34;
use crate::error::Result;
use crate::family::Family;
use crate::perm::{all_permutations, Permutation};
use crate::tuple::next_combination;

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    /// Families obtained by inserting 5 into each member (`5^6`).
    pub insertions_checked: u64,
    /// Fewest unshattered triples over all insertions.
    pub min_unshattered: u64,
    /// Insertions attaining `min_unshattered`.
    pub families_at_min: u64,
    /// Perfect 6-families on `[4]` with the identity as first member.
    pub perfect_families_on_four: u64,
    /// All of them are relabelings of the reference perfect family.
    pub all_isomorphic: bool,
    /// Both halves of the argument hold: at most 8 of 10 triples.
    pub confirms_at_most_eight: bool,
}

fn insert_five(p: &Permutation, slot: usize) -> Permutation {
    let mut order = p.order().to_vec();
    order.insert(slot, 5);
    Permutation::new(order).expect("insertion of a new element")
}

/// Replays the insertion argument on the reference perfect family on `[4]`.
pub fn insertion_replay() -> Result<ReplayReport> {
    let base = q34();
    let per_digit: Vec<Vec<Permutation>> = base
        .members()
        .iter()
        .map(|p| (0..5).map(|s| insert_five(p, s)).collect())
        .collect();
    let total = 5u64.pow(6);
    let unshattered: Vec<u64> = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut rest = code;
            let members = per_digit
                .iter()
                .map(|options| {
                    let p = options[(rest % 5) as usize].clone();
                    rest /= 5;
                    p
                })
                .collect();
            let family = Family::new(5, members)?;
            Ok(coverage(&family, 3)?.unshattered_count())
        })
        .collect::<Result<_>>()?;
    let min_unshattered = unshattered.iter().copied().min().unwrap_or(0);
    let families_at_min = unshattered.iter().filter(|&&u| u == min_unshattered).count() as u64;
    let (perfect, all_isomorphic) = perfect_families_on_four()?;
    Ok(ReplayReport {
        insertions_checked: total,
        min_unshattered,
        families_at_min,
        perfect_families_on_four: perfect,
        all_isomorphic,
        confirms_at_most_eight: min_unshattered >= 2 && all_isomorphic,
    })
}

/// Counts the 6-families on `[4]` (identity first, other members in
/// increasing order) shattering every triple, and checks each is a
/// relabeling of the reference family.
pub fn perfect_families_on_four() -> Result<(u64, bool)> {
    let candidates = all_permutations(4);
    let mut reference: Vec<Permutation> = q34().into_members();
    reference.sort();
    let relabelings = all_permutations(4);
    let mut count = 0;
    let mut all_iso = true;
    let mut pick: Vec<u32> = (1..=5).collect();
    loop {
        let mut members = vec![candidates[0].clone()];
        members.extend(pick.iter().map(|&i| candidates[i as usize].clone()));
        let family = Family::new(4, members)?;
        if satisfies_total(&family, 3)?.holds() {
            count += 1;
            let iso = relabelings.iter().any(|sigma| {
                let mut image: Vec<Permutation> = family
                    .members()
                    .iter()
                    .map(|p| p.relabel(sigma.order()).expect("bijection"))
                    .collect();
                image.sort();
                image == reference
            });
            all_iso &= iso;
        }
        if !next_combination(&mut pick, 23) {
            break;
        }
    }
    Ok((count, all_iso))
}
