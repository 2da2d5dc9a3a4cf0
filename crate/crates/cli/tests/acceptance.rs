//! One pass/fail line per acceptance criterion, printed in order. Lines go
//! straight to the stdout handle, so they show without `--nocapture`.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use permshatter::checkers::{count_orders, coverage, es_guaranteed_size, es_witness, satisfies_partial, satisfies_total};
use permshatter::constructions::{
    fractional_family, fractional_guarantee, kcube_step, little_construction, q34, shatter_family,
};
use permshatter::oracle::{insertion_replay, max_shattered, min_family_size, monotonicity_probe, SearchConfig};
use permshatter::separators::{binary_splits, separating_system, separating_system_size, verify_separating};
use permshatter::{binomial, Family, KTuple, Permutation};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn criterion_1() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("q34.txt");
    q34().write(&path).map_err(|e| e.to_string())?;
    let o = Command::new(env!("CARGO_BIN_EXE_permshatter"))
        .args(["verify", path.to_str().unwrap(), "--mode", "total", "-k", "3"])
        .env_remove("SHATTER_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.code() == Some(0), format!("verify exited with {:?}", o.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    let (min, total) = (&v["report"]["min_count"], &v["report"]["total_tuples"]);
    ensure(*min == 6 && *total == 4, format!("min_count {min}, tuples {total}"))?;
    let start = Instant::now();
    let r = coverage(&q34(), 3).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.min_count == 6 && r.shattered_count == 4, "library coverage disagrees")?;
    within(elapsed, Duration::from_millis(50), "coverage")?;
    Ok(format!("min_count 6 over all 4 triples (library sweep {elapsed:?})"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let r = min_family_size(4, 3, 6, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.optimum == Some(6), format!("optimum {:?}", r.optimum))?;
    ensure(r.proof_of_optimality, "not proven optimal")?;
    within(elapsed, Duration::from_secs(60), "search")?;
    Ok(format!("f_3(4) = 6, proven, {} nodes, {elapsed:?}", r.nodes_explored))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let r = max_shattered(5, 3, 6, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let search_time = start.elapsed();
    ensure(r.optimum == Some(8), format!("optimum {:?}", r.optimum))?;
    ensure(r.proof_of_optimality, "not proven optimal")?;
    let w = r.witness.ok_or("no witness")?;
    ensure(coverage(&w, 3).map_err(|e| e.to_string())?.shattered_count == 8, "witness re-check")?;
    let replay = insertion_replay().map_err(|e| e.to_string())?;
    ensure(replay.min_unshattered >= 2, format!("an insertion leaves {} unshattered", replay.min_unshattered))?;
    ensure(replay.all_isomorphic, "a perfect family on [4] is not a relabeling of the reference")?;
    within(start.elapsed(), Duration::from_secs(1800), "search and replay")?;
    Ok(format!(
        "max = 8 of 10 (F = 4/5), proven in {search_time:?}; replay: {} insertions, min unshattered {}, {} perfect families on [4] all isomorphic",
        replay.insertions_checked, replay.min_unshattered, replay.perfect_families_on_four
    ))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let c = fractional_family(2).map_err(|e| e.to_string())?;
    ensure(c.family.n() == 16 && c.family.len() == 6, "wrong shape")?;
    let r = coverage(&c.family, 3).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(fractional_guarantee(2) == 272, "guarantee formula")?;
    ensure(r.shattered_count >= 272, format!("measured {}", r.shattered_count))?;
    ensure(r.fraction() * 5 >= 2.into(), format!("fraction {}", r.fraction()))?;
    within(elapsed, Duration::from_secs(1), "construction and sweep")?;
    Ok(format!(
        "measured {} of 560 (fraction {}), guaranteed 272, exactly 272: {}",
        r.shattered_count,
        r.fraction(),
        r.shattered_count == 272
    ))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let base = min_family_size(4, 3, 4, &SearchConfig::default())
        .map_err(|e| e.to_string())?
        .witness
        .ok_or("no base")?;
    ensure(base.len() == 4, format!("base size {}", base.len()))?;
    let c = little_construction(&base).map_err(|e| e.to_string())?;
    let sep = separating_system(4).map_err(|e| e.to_string())?.len();
    ensure(c.family.n() == 256 && c.family.len() == 9, format!("{} members on [{}]", c.family.len(), c.family.n()))?;
    ensure(base.len() + sep + 1 == 9, "size identity")?;
    ensure(binomial(256, 3) == 2_763_520, "tuple count")?;
    ensure(satisfies_partial(&c.family, 3, 4).map_err(|e| e.to_string())?.holds(), "a triple sees fewer than 4 orders")?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "construction and sweep")?;
    Ok(format!("9 = 4 + {sep} + 1 members on [256], all 2763520 triples see >= 4 orders, {elapsed:?}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let c = kcube_step(&q34(), 2, 3).map_err(|e| e.to_string())?;
    ensure(c.family.n() == 8 && c.family.len() == 18, "wrong shape")?;
    ensure(coverage(&c.family, 3).map_err(|e| e.to_string())?.shattered_count == 56, "not all 56 triples")?;
    within(start.elapsed(), Duration::from_secs(1), "kcube step")?;
    let start = Instant::now();
    let s = shatter_family(3, 64).map_err(|e| e.to_string())?;
    ensure(satisfies_total(&s.family, 3).map_err(|e| e.to_string())?.holds(), "iterated family misses an order")?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(300), "iterated family")?;
    Ok(format!("18 members shatter all 56 triples of [8]; iterated family on [64] has {} members, total shatter in {elapsed:?}", s.family.len()))
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

fn criterion_7() -> Check {
    let start = Instant::now();
    for n in 2..=1000 {
        let b = binary_splits(n).map_err(|e| e.to_string())?;
        ensure(b.len() == ceil_log2(n), format!("binary_splits({n}) has {} parts", b.len()))?;
        ensure(verify_separating(&b, false).holds(), format!("binary_splits({n}) fails"))?;
        let s = separating_system(n).map_err(|e| e.to_string())?;
        ensure(verify_separating(&s, true).holds(), format!("separating_system({n}) fails"))?;
        let r = (1..).find(|&r| binomial(r, r / 2) >= n as u64).unwrap() as usize;
        ensure(s.len() == r && separating_system_size(n) == r, format!("separating_system({n}) has {} parts, want {r}", s.len()))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "sweep")?;
    Ok(format!("n = 2..1000 all verified, sizes exact, {elapsed:?}"))
}

fn affine(p: u32, a: u32, b: u32) -> Permutation {
    let mut keyed: Vec<(u32, u32)> = (1..p).map(|x| ((a * x + b) % p, x)).collect();
    keyed.sort_unstable();
    Permutation::new(keyed.into_iter().map(|(_, x)| x).collect()).unwrap()
}

/// Members of the blockwise family on `[n - 1]` with `n` appended.
fn blockwise_members(n: usize) -> Vec<Permutation> {
    let r = if n == 17 { 2 } else { 4 };
    fractional_family(r)
        .unwrap()
        .family
        .members()
        .iter()
        .map(|p| {
            let mut o = p.order().to_vec();
            o.push(n as u32);
            Permutation::new(o).unwrap()
        })
        .collect()
}

fn es_family(index: usize, n: usize) -> Family {
    let p = n as u32 + 1;
    let mult = [2u32, 3, 5, 6, 7, 10, 11, 12];
    let blockwise = blockwise_members(n);
    let size = 1 + index % 4;
    let members = (0..size)
        .map(|j| {
            let affine_member = affine(p, mult[(index + 3 * j) % mult.len()], (index * 7 + j) as u32 % p);
            let source = if (index + j).is_multiple_of(3) {
                // skip the increasing member, which keeps all of [n]
                blockwise[1 + (index + j) % (blockwise.len() - 1)].clone()
            } else {
                affine_member.clone()
            };
            match (index / 3 + j) % 3 {
                0 => source,
                1 => source.reverse(),
                _ => source.relabel(affine_member.order()).unwrap(),
            }
        })
        .collect();
    Family::new(n, members).unwrap()
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    let mut smallest_margin = usize::MAX;
    for n in [17usize, 257] {
        for index in 0..100 {
            let fam = es_family(index, n);
            let w = es_witness(&fam, 3).map_err(|e| e.to_string())?;
            let need = es_guaranteed_size(n, fam.len());
            ensure(w.elements.len() >= need, format!("n={n} family {index}: {} < {need}", w.elements.len()))?;
            smallest_margin = smallest_margin.min(w.elements.len() - need);
            let s = &w.elements;
            for a in 0..s.len() {
                for b in a + 1..s.len() {
                    for c in b + 1..s.len() {
                        let t = KTuple::new(vec![s[a], s[b], s[c]]).unwrap();
                        let orders = count_orders(&fam, &t).map_err(|e| e.to_string())?;
                        ensure(orders <= 2, format!("n={n} family {index}: {t} sees {orders} orders"))?;
                    }
                }
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "property suite")?;
    Ok(format!("{checked} families, all sets large enough (smallest slack {smallest_margin}) with <= 2 orders per triple, {elapsed:?}"))
}

fn criterion_9() -> Check {
    let cfg = SearchConfig::default();
    let p = monotonicity_probe(3, 6, 4..=5, &cfg).map_err(|e| e.to_string())?;
    let fr: Vec<String> = p.entries.iter().map(|e| e.fraction.clone().unwrap_or_default()).collect();
    ensure(fr == ["1", "4/5"], format!("fractions {fr:?}"))?;
    ensure(p.non_increasing && p.complete, "probe not monotone or incomplete")?;
    let mut rows = Vec::new();
    for n in [4, 5] {
        let mut row = Vec::new();
        for t in 1..=6 {
            let r = min_family_size(n, 3, t, &cfg).map_err(|e| e.to_string())?;
            ensure(r.proof_of_optimality, format!("f_3({n},{t}) not proven"))?;
            row.push(r.optimum.unwrap());
        }
        ensure(row.windows(2).all(|w| w[0] <= w[1]), format!("n={n}: {row:?} not non-decreasing"))?;
        rows.push(format!("n={n}: {row:?}"));
    }
    Ok(format!("F_3(4,6) = 1 >= F_3(5,6) = 4/5; f_3(n,t) for t=1..6: {}", rows.join(", ")))
}

fn criterion_10() -> Check {
    // per-step size identities of the iterated constructions, each output checked
    let s = shatter_family(3, 64).map_err(|e| e.to_string())?;
    let mut prev = s.trace.parameters["seed_size"].as_u64().ok_or("seed size")?;
    for step in s.trace.parameters["steps"].as_array().ok_or("steps")? {
        let size = step["size"].as_u64().ok_or("step size")?;
        ensure(size == 3 * prev, format!("step size {size} != 3 * {prev}"))?;
        prev = size;
    }
    ensure(s.trace.verify(&s.family).map_err(|e| e.to_string())?.holds(), "iterated family guarantee")?;
    let f3 = fractional_family(3).map_err(|e| e.to_string())?;
    ensure(f3.trace.verify(&f3.family).map_err(|e| e.to_string())?.holds(), "fractional r=3 guarantee")?;
    Ok("asymptotic claims not measurable at this scale; covered by per-step size identities (k * S) and checker-certified guarantees".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, fn() -> Check); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (id, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => writeln!(out, "criterion {id:>2}: PASS  {detail}").unwrap(),
            Err(why) => {
                writeln!(out, "criterion {id:>2}: FAIL  {why}").unwrap();
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
