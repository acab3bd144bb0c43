//! Exact maximin share by branch and bound.
//!
//! Goods are placed in decreasing value order. At each node the candidate
//! bundles are tried least-loaded first, and bundles whose current load equals
//! that of an earlier candidate are skipped (identical bundles are
//! interchangeable, which also covers the "first empty bundle only" rule).
//! A node is pruned when the remaining value cannot lift every bundle to one
//! more than the incumbent.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::value::Value;

/// Greedy list partition: each good (largest first) goes to the lightest bundle.
pub(crate) fn greedy_partition(values: &[Value], k: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
    let mut bundles = vec![Vec::new(); k];
    let mut lightest: BinaryHeap<Reverse<(u64, usize)>> = (0..k).map(|b| Reverse((0, b))).collect();
    for g in order {
        let Reverse((load, b)) = lightest.pop().unwrap();
        bundles[b].push(g);
        lightest.push(Reverse((load + values[g].get(), b)));
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    bundles
}

pub(crate) fn min_bundle(values: &[Value], bundles: &[Vec<usize>]) -> Value {
    bundles
        .iter()
        .map(|b| b.iter().map(|&g| values[g]).sum::<Value>())
        .min()
        .unwrap_or(Value::ZERO)
}

struct Search<'a> {
    sorted: &'a [u64],
    suffix: Vec<u64>,
    k: usize,
    loads: Vec<u64>,
    assign: Vec<usize>,
    best: u64,
    best_assign: Option<Vec<usize>>,
    upper: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize) {
        if self.best >= self.upper {
            return;
        }
        if i == self.sorted.len() {
            let low = *self.loads.iter().min().unwrap();
            if low > self.best {
                self.best = low;
                self.best_assign = Some(self.assign.clone());
            }
            return;
        }
        // every bundle must reach best + 1 for an improvement
        let goal = self.best + 1;
        let deficit: u64 = self.loads.iter().map(|&l| goal.saturating_sub(l)).sum();
        if deficit > self.suffix[i] {
            return;
        }
        let mut order: Vec<usize> = (0..self.k).collect();
        order.sort_by_key(|&b| (self.loads[b], b));
        let item = self.sorted[i];
        let mut last_load = None;
        for b in order {
            if last_load == Some(self.loads[b]) {
                continue;
            }
            last_load = Some(self.loads[b]);
            self.loads[b] += item;
            self.assign[i] = b;
            self.run(i + 1);
            self.loads[b] -= item;
            if self.best >= self.upper {
                return;
            }
        }
    }
}

/// Optimal `k`-partition of `values` maximizing the minimum bundle.
/// Returns the optimum and a witness (bundles of indices into `values`).
pub(crate) fn solve(values: &[Value], k: usize) -> (Value, Vec<Vec<usize>>) {
    debug_assert!(k >= 1);
    let m = values.len();
    if k > m {
        let mut witness: Vec<Vec<usize>> = (0..m).map(|g| vec![g]).collect();
        witness.resize(k, Vec::new());
        return (Value::ZERO, witness);
    }
    let greedy = greedy_partition(values, k);
    let greedy_min = min_bundle(values, &greedy);
    let total: u64 = values.iter().map(|v| v.get()).sum();
    let upper = total / k as u64;
    if greedy_min.get() >= upper || k == 1 {
        return (greedy_min, greedy);
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
    let sorted: Vec<u64> = order.iter().map(|&g| values[g].get()).collect();
    let mut suffix = vec![0u64; m + 1];
    for i in (0..m).rev() {
        suffix[i] = suffix[i + 1] + sorted[i];
    }
    let mut search = Search {
        sorted: &sorted,
        suffix,
        k,
        loads: vec![0; k],
        assign: vec![0; m],
        best: greedy_min.get(),
        best_assign: None,
        upper,
    };
    search.run(0);
    match search.best_assign {
        None => (greedy_min, greedy),
        Some(assign) => {
            let mut bundles = vec![Vec::new(); k];
            for (pos, &b) in assign.iter().enumerate() {
                bundles[b].push(order[pos]);
            }
            for b in &mut bundles {
                b.sort_unstable();
            }
            (Value(search.best), bundles)
        }
    }
}
