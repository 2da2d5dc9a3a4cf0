//! Branch-and-bound engine over families `identity < c_1 < ... < c_{m-1}`
//! of candidate indices (candidates are all permutations of `[n]` in
//! lexicographic order, so index order is lexicographic order).

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::perm::{all_permutations, factorial, rank_from_positions, Permutation};
use crate::tuple::ktuples;

/// Tuple counts stay within `C(6, 3)`.
pub(crate) const MAX_TUPLES: usize = 20;
const FLUSH_EVERY: u64 = 4096;

pub(crate) struct Tables {
    pub candidates: Vec<Permutation>,
    pub tuples: usize,
    /// `pattern[c * tuples + i]`
    pattern: Vec<u8>,
    /// Patterns realized by some candidate with index `>= s`:
    /// `avail[s * tuples + i]`, with one extra all-empty row at the end.
    avail: Vec<u128>,
}

impl Tables {
    pub fn new(n: usize, k: usize) -> Tables {
        let candidates = all_permutations(n);
        let tuples: Vec<Vec<u32>> = ktuples(n, k)
            .expect("k <= n")
            .map(|t| t.elements().to_vec())
            .collect();
        let tc = tuples.len();
        debug_assert!(tc <= MAX_TUPLES);
        let mut pattern = Vec::with_capacity(candidates.len() * tc);
        let mut buf = vec![0u32; k];
        for p in &candidates {
            let pos = p.positions();
            for t in &tuples {
                for (b, &a) in buf.iter_mut().zip(t) {
                    *b = pos[a as usize];
                }
                pattern.push(rank_from_positions(&buf) as u8);
            }
        }
        let nc = candidates.len();
        let mut avail = vec![0u128; (nc + 1) * tc];
        for c in (0..nc).rev() {
            for i in 0..tc {
                avail[c * tc + i] = avail[(c + 1) * tc + i] | 1u128 << pattern[c * tc + i];
            }
        }
        Tables {
            candidates,
            tuples: tc,
            pattern,
            avail,
        }
    }

    #[inline]
    fn add(&self, masks: &Masks, c: usize) -> Masks {
        let mut out = *masks;
        let row = &self.pattern[c * self.tuples..(c + 1) * self.tuples];
        for (m, &r) in out.iter_mut().zip(row) {
            *m |= 1u128 << r;
        }
        out
    }

    /// Best number of orders tuple `i` can still reach with `remaining`
    /// further members drawn from indices `>= from`.
    #[inline]
    fn reachable(&self, masks: &Masks, i: usize, remaining: usize, from: usize) -> u32 {
        let have = masks[i].count_ones();
        let extra = (self.avail[from * self.tuples + i] & !masks[i]).count_ones();
        have + extra.min(remaining as u32)
    }

    pub fn family_of(&self, chosen: &[u32]) -> Vec<Permutation> {
        chosen.iter().map(|&c| self.candidates[c as usize].clone()).collect()
    }
}

pub(crate) type Masks = [u128; MAX_TUPLES];

/// Shared node accounting with a global budget.
pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
    aborted: AtomicBool,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget {
            limit,
            used: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }
}

/// Per-task node counter flushing into the shared budget.
struct Meter<'a> {
    budget: &'a Budget,
    pending: u64,
}

impl<'a> Meter<'a> {
    fn new(budget: &'a Budget) -> Self {
        Meter { budget, pending: 0 }
    }

    /// Counts one node; `false` once the budget is exhausted.
    #[inline]
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending < FLUSH_EVERY {
            return true;
        }
        self.flush()
    }

    fn flush(&mut self) -> bool {
        let total = self.budget.used.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if total > self.budget.limit {
            self.budget.aborted.store(true, Ordering::Relaxed);
        }
        !self.budget.aborted()
    }
}

impl Drop for Meter<'_> {
    fn drop(&mut self) {
        self.flush();
    }
}

/// Work units: prefixes of `depth` indices after the identity, in
/// lexicographic order, each leaving room for the rest of the family.
fn prefixes(nc: usize, m: usize, depth: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(depth);
    fn walk(cur: &mut Vec<u32>, depth: usize, last: usize, limit: usize, out: &mut Vec<Vec<u32>>) {
        if cur.len() == depth {
            out.push(cur.clone());
            return;
        }
        // room for the members still to come after this one
        let room = limit - (depth - cur.len() - 1);
        for c in last + 1..room {
            cur.push(c as u32);
            walk(cur, depth, c, limit, out);
            cur.pop();
        }
    }
    let after_prefix = m - 1 - depth;
    walk(&mut cur, depth, 0, nc - after_prefix, &mut out);
    out
}

fn prefix_depth(m: usize) -> usize {
    (m - 1).min(2)
}

/// Lexicographically least family of `m` members (identity first) in which
/// every tuple sees at least `t` orders. `None` when there is none or the
/// budget ran out (check [`Budget::aborted`]).
pub(crate) fn first_partial(tables: &Tables, m: usize, t: u32, budget: &Budget) -> Option<Vec<u32>> {
    let nc = tables.candidates.len();
    if m > nc {
        return None;
    }
    let root = tables.add(&[0; MAX_TUPLES], 0);
    if !partial_viable(tables, &root, m - 1, 1, t) {
        return None;
    }
    let depth = prefix_depth(m);
    prefixes(nc, m, depth).par_iter().find_map_first(|prefix| {
        if budget.aborted() {
            return None;
        }
        let mut meter = Meter::new(budget);
        let mut masks = root;
        let mut chosen = vec![0u32];
        let mut remaining = m - 1;
        for &c in prefix {
            masks = tables.add(&masks, c as usize);
            chosen.push(c);
            remaining -= 1;
            if !meter.tick() || !partial_viable(tables, &masks, remaining, c as usize + 1, t) {
                return None;
            }
        }
        let last = chosen.last().copied().unwrap_or(0) as usize;
        if remaining == 0 {
            return Some(chosen);
        }
        partial_dfs(tables, &masks, &mut chosen, last, remaining, t, &mut meter).then_some(chosen)
    })
}

#[inline]
fn partial_viable(tables: &Tables, masks: &Masks, remaining: usize, from: usize, t: u32) -> bool {
    (0..tables.tuples).all(|i| tables.reachable(masks, i, remaining, from) >= t)
}

fn partial_dfs(
    tables: &Tables,
    masks: &Masks,
    chosen: &mut Vec<u32>,
    last: usize,
    remaining: usize,
    t: u32,
    meter: &mut Meter,
) -> bool {
    let nc = tables.candidates.len();
    for c in last + 1..=nc - remaining {
        if !meter.tick() {
            return false;
        }
        let next = tables.add(masks, c);
        if !partial_viable(tables, &next, remaining - 1, c + 1, t) {
            continue;
        }
        chosen.push(c as u32);
        if remaining == 1 || partial_dfs(tables, &next, chosen, c, remaining - 1, t, meter) {
            return true;
        }
        chosen.pop();
        if meter.budget.aborted() {
            return false;
        }
    }
    false
}

/// Shared best value, packed so that a larger value wins and, among equal
/// values, the earlier task wins.
struct SharedBest(AtomicU64);

impl SharedBest {
    fn pack(value: u32, task: usize) -> u64 {
        ((value as u64 + 1) << 32) | (u32::MAX - task as u32) as u64
    }

    /// `(value, task)` of the best leaf published so far.
    fn get(&self) -> Option<(u32, usize)> {
        let v = self.0.load(Ordering::Relaxed);
        (v != 0).then(|| (((v >> 32) - 1) as u32, (u32::MAX - v as u32) as usize))
    }

    fn publish(&self, value: u32, task: usize) {
        self.0.fetch_max(Self::pack(value, task), Ordering::Relaxed);
    }
}

struct MaxTask<'a> {
    tables: &'a Tables,
    full: u32,
    task: usize,
    shared: &'a SharedBest,
    best: Option<(u32, Vec<u32>)>,
    meter: Meter<'a>,
}

impl MaxTask<'_> {
    fn upper_bound(&self, masks: &Masks, remaining: usize, from: usize) -> u32 {
        (0..self.tables.tuples)
            .filter(|&i| self.tables.reachable(masks, i, remaining, from) >= self.full)
            .count() as u32
    }

    /// Could a leaf with at most `ub` shattered tuples still change the
    /// final answer?
    fn worth(&self, ub: u32) -> bool {
        if let Some((v, _)) = &self.best {
            if ub <= *v {
                return false;
            }
        }
        match self.shared.get() {
            Some((v, task)) => ub > v || (ub == v && task >= self.task),
            None => true,
        }
    }

    fn leaf(&mut self, masks: &Masks, chosen: &[u32]) {
        let value = masks[..self.tables.tuples]
            .iter()
            .filter(|m| m.count_ones() == self.full)
            .count() as u32;
        if self.best.as_ref().is_none_or(|(v, _)| value > *v) {
            self.best = Some((value, chosen.to_vec()));
            self.shared.publish(value, self.task);
        }
    }

    fn dfs(&mut self, masks: &Masks, chosen: &mut Vec<u32>, last: usize, remaining: usize) -> bool {
        if remaining == 0 {
            self.leaf(masks, chosen);
            return true;
        }
        let nc = self.tables.candidates.len();
        for c in last + 1..=nc - remaining {
            if !self.meter.tick() {
                return false;
            }
            let next = self.tables.add(masks, c);
            if !self.worth(self.upper_bound(&next, remaining - 1, c + 1)) {
                continue;
            }
            chosen.push(c as u32);
            let ok = self.dfs(&next, chosen, c, remaining - 1);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Largest number of shattered tuples over families of `m` members
/// (identity first) and the lexicographically least family reaching it.
pub(crate) fn best_shattering(tables: &Tables, k: usize, m: usize, budget: &Budget) -> Option<(u32, Vec<u32>)> {
    let nc = tables.candidates.len();
    let full = factorial(k);
    let root = tables.add(&[0; MAX_TUPLES], 0);
    let shared = SharedBest(AtomicU64::new(0));
    let depth = prefix_depth(m);
    let results: Vec<Option<(u32, Vec<u32>)>> = prefixes(nc, m, depth)
        .par_iter()
        .enumerate()
        .map(|(task, prefix)| {
            if budget.aborted() {
                return None;
            }
            let mut run = MaxTask {
                tables,
                full,
                task,
                shared: &shared,
                best: None,
                meter: Meter::new(budget),
            };
            let mut masks = root;
            let mut chosen = vec![0u32];
            for (i, &c) in prefix.iter().enumerate() {
                masks = tables.add(&masks, c as usize);
                chosen.push(c);
                let remaining = m - 2 - i;
                if !run.meter.tick() || !run.worth(run.upper_bound(&masks, remaining, c as usize + 1)) {
                    return None;
                }
            }
            let last = *chosen.last().expect("identity") as usize;
            let remaining = m - chosen.len();
            run.dfs(&masks, &mut chosen, last, remaining);
            run.best.take()
        })
        .collect();
    // larger value wins; ties go to the earliest task
    results.into_iter().flatten().fold(None, |acc, (v, fam)| match acc {
        Some((bv, _)) if bv >= v => acc,
        _ => Some((v, fam)),
    })
}
