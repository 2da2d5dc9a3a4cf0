use std::collections::HashSet;

use permshatter::checkers::{coverage, satisfies_partial, satisfies_total};
use permshatter::oracle::{
    max_shattered, min_family_size, monotonicity_probe, Problem, SearchConfig, SearchReport,
};
use permshatter::perm::all_permutations;
use permshatter::{Error, Family};

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn min(n: usize, k: usize, t: u32) -> SearchReport {
    let r = min_family_size(n, k, t, &cfg()).unwrap();
    assert!(r.proof_of_optimality, "({n},{k},{t}) not proven");
    r
}

fn max(n: usize, k: usize, m: usize) -> SearchReport {
    let r = max_shattered(n, k, m, &cfg()).unwrap();
    assert!(r.proof_of_optimality, "({n},{k},{m}) not proven");
    r
}

// Independent brute force: orders as strings, every subset of candidates.
fn order_of(p: &[u32], x: &[u32]) -> Vec<u32> {
    p.iter().copied().filter(|a| x.contains(a)).collect()
}

fn triples(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn distinct_orders(fam: &[&[u32]], x: &[u32]) -> usize {
    fam.iter().map(|p| order_of(p, x)).collect::<HashSet<_>>().len()
}

fn subsets(len: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, len: usize, size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i + 1, len, size, cur, f);
            cur.pop();
        }
    }
    go(0, len, size, &mut Vec::new(), f);
}

fn brute_min(n: u32, t: usize) -> usize {
    let perms: Vec<Vec<u32>> = all_permutations(n as usize).iter().map(|p| p.order().to_vec()).collect();
    let ts = triples(n);
    for m in 1..=perms.len() {
        let mut found = false;
        subsets(perms.len(), m, &mut |idx| {
            if !found {
                let fam: Vec<&[u32]> = idx.iter().map(|&i| perms[i].as_slice()).collect();
                found = ts.iter().all(|x| distinct_orders(&fam, x) >= t);
            }
        });
        if found {
            return m;
        }
    }
    unreachable!()
}

fn brute_max(n: u32, m: usize) -> usize {
    let perms: Vec<Vec<u32>> = all_permutations(n as usize).iter().map(|p| p.order().to_vec()).collect();
    let ts = triples(n);
    let mut best = 0;
    subsets(perms.len(), m, &mut |idx| {
        let fam: Vec<&[u32]> = idx.iter().map(|&i| perms[i].as_slice()).collect();
        best = best.max(ts.iter().filter(|x| distinct_orders(&fam, x) == 6).count());
    });
    best
}

#[test]
fn min_sizes_match_brute_force_on_four() {
    for t in 1..=6u32 {
        assert_eq!(min(4, 3, t).optimum, Some(brute_min(4, t as usize) as u64), "t={t}");
    }
    assert_eq!(min(4, 3, 6).optimum, Some(6));
    assert_eq!(min(4, 3, 4).optimum, Some(4));
}

#[test]
fn max_counts_match_brute_force_on_four() {
    for m in 1..=8 {
        assert_eq!(max(4, 3, m).optimum, Some(brute_max(4, m) as u64), "m={m}");
    }
}

#[test]
fn documented_values() {
    assert_eq!(min(3, 3, 6).optimum, Some(6));
    for n in 3..=6 {
        assert_eq!(min(n, 3, 1).optimum, Some(1));
        assert_eq!(min(n, 3, 2).optimum, Some(2));
        assert_eq!(max(n, 3, 5).optimum, Some(0));
    }
    assert_eq!(max(5, 3, 6).optimum, Some(8));
    assert_eq!(max(4, 3, 6).optimum, Some(4));
    assert_eq!(max(5, 4, 24).optimum, Some(5));
    assert_eq!(min(5, 4, 24).optimum, Some(24));
}

#[test]
fn witnesses_pass_checkers() {
    let r = max(5, 3, 6);
    let w = r.witness.unwrap();
    assert_eq!(w.len(), 6);
    assert!(!w.has_duplicates());
    assert_eq!(coverage(&w, 3).unwrap().shattered_count, 8);
    let r = min(5, 3, 6);
    let w = r.witness.unwrap();
    assert_eq!(w.len() as u64, r.optimum.unwrap());
    assert!(satisfies_total(&w, 3).unwrap().holds());
    assert!(w.members()[0].is_identity());
}

#[test]
fn relabeling_preserves_optimum() {
    let w = max(5, 3, 6).witness.unwrap();
    for sigma in all_permutations(5) {
        let image = w.relabel(sigma.order()).unwrap();
        assert_eq!(coverage(&image, 3).unwrap().shattered_count, 8, "sigma {sigma}");
    }
    let w = min(4, 3, 4).witness.unwrap();
    for sigma in all_permutations(4) {
        assert!(satisfies_partial(&w.relabel(sigma.order()).unwrap(), 3, 4).unwrap().holds());
    }
}

#[test]
fn reversal_preserves_counts() {
    let w = max(5, 3, 6).witness.unwrap();
    let rev = w.reversed();
    let a = coverage(&w, 3).unwrap();
    let b = coverage(&rev, 3).unwrap();
    assert_eq!(a.shattered_count, b.shattered_count);
    assert_eq!(a.counts(), b.counts());
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            [max(5, 3, 6), max(5, 3, 7), min(5, 3, 6), min(5, 3, 5), min(4, 3, 4)]
                .into_iter()
                .map(|r| (r.optimum, r.witness.map(|w| w.to_string())))
                .collect::<Vec<_>>()
        })
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn minimum_is_monotone_in_t_and_n() {
    let mut prev_n: Option<Vec<u64>> = None;
    for n in 3..=5 {
        let row: Vec<u64> = (1..=6).map(|t| min(n, 3, t).optimum.unwrap()).collect();
        assert!(row.windows(2).all(|w| w[0] <= w[1]), "n={n}: {row:?}");
        if let Some(prev) = &prev_n {
            assert!(prev.iter().zip(&row).all(|(a, b)| a <= b), "{prev:?} vs {row:?}");
        }
        // doubling by reversal
        for t in (1..6).step_by(2) {
            assert!(row[t] <= 2 * row[t - 1]);
        }
        prev_n = Some(row);
    }
}

#[test]
fn lower_bound_on_minimum() {
    for t in 1..=6u32 {
        assert!(min(5, 3, t).optimum.unwrap() >= t as u64);
    }
}

#[test]
fn probe_values() {
    let p = monotonicity_probe(3, 6, 4..=5, &cfg()).unwrap();
    let f: Vec<String> = p.entries.iter().map(|e| e.fraction.clone().unwrap()).collect();
    assert_eq!(f, ["1", "4/5"]);
    assert!(p.non_increasing && p.complete);
}

#[test]
fn report_json_shape() {
    let r = min(4, 3, 6);
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["problem"]["kind"], "min");
    assert_eq!(v["optimum"], 6);
    assert_eq!(v["proof_of_optimality"], true);
    let text = v["witness"].as_str().unwrap();
    assert_eq!(Family::parse(text).unwrap(), r.witness.unwrap());
    assert!(matches!(r.problem, Problem::Min { n: 4, k: 3, t: 6 }));
}

#[test]
fn infeasible_refusal_carries_estimate() {
    match max_shattered(8, 3, 6, &cfg()) {
        Err(Error::Infeasible { estimate, .. }) => assert!(estimate > 1e10),
        other => panic!("{other:?}"),
    }
}
