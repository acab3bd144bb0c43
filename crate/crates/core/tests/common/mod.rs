#![allow(dead_code)]

use maximin_core::{Instance, Value};
use proptest::prelude::*;

/// Max-min over every assignment of goods to `k` labeled bundles.
pub fn brute_mms(values: &[u64], k: usize) -> u64 {
    let m = values.len();
    let mut loads = vec![0u64; k];
    let mut best = 0;
    fn go(i: usize, values: &[u64], loads: &mut [u64], best: &mut u64) {
        if i == values.len() {
            *best = (*best).max(*loads.iter().min().unwrap());
            return;
        }
        for b in 0..loads.len() {
            loads[b] += values[i];
            go(i + 1, values, loads, best);
            loads[b] -= values[i];
        }
    }
    if m == 0 {
        return 0;
    }
    go(0, values, &mut loads, &mut best);
    best
}

pub fn raw(row: &[Value]) -> Vec<u64> {
    row.iter().map(|v| v.get()).collect()
}

/// Instances with `n` agents in `agents`, `m` goods in `goods`, values below `hi`.
pub fn instances(
    agents: std::ops::RangeInclusive<usize>,
    goods: std::ops::RangeInclusive<usize>,
    hi: u64,
) -> impl Strategy<Value = Instance> {
    (agents, goods).prop_flat_map(move |(n, m)| {
        proptest::collection::vec(proptest::collection::vec(0..hi, m), n)
            .prop_map(|rows| Instance::new(rows, 1).unwrap())
    })
}

pub fn exact_mu(instance: &Instance, agent: usize, k: usize) -> Value {
    maximin_core::mms_exact(instance.row(agent), k).unwrap().value
}
