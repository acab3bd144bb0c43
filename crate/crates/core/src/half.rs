//! Half-approximation: hand out single goods worth at least half an agent's
//! proportional share of what is left, then round-robin the residual.
//!
//! The single-good phase stops once one agent is left; she takes the rest.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{Allocation, Instance};
use crate::round_robin::round_robin_into;
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Singleton {
    pub agent: usize,
    pub good_value: Value,
    pub good_index: usize,
    /// `v_i(S)` at allocation time.
    pub remaining_value: Value,
    /// Agents still active at allocation time.
    pub active: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfRun {
    pub allocation: Allocation,
    pub singletons: Vec<Singleton>,
}

pub fn apx_mms_half(instance: &Instance) -> Allocation {
    apx_mms_half_traced(instance).allocation
}

pub fn apx_mms_half_traced(instance: &Instance) -> HalfRun {
    let n = instance.agents();
    let m = instance.goods();
    let mut active: Vec<usize> = (0..n).collect();
    let mut free = vec![true; m];
    let mut remaining: Vec<Value> = (0..n).map(|i| instance.total(i)).collect();
    let mut bundles = vec![Vec::new(); n];
    let mut singletons = Vec::new();

    // 2 |N| v_ij >= v_i(S), i.e. v_ij >= alpha_i / 2
    'phase: while active.len() > 1 {
        let k = active.len() as u128;
        for (slot, &i) in active.iter().enumerate() {
            let row = instance.row(i);
            let need = remaining[i].get() as u128;
            let hit = (0..m).find(|&g| free[g] && 2 * k * row[g].get() as u128 >= need);
            if let Some(g) = hit {
                singletons.push(Singleton {
                    agent: i,
                    good_value: row[g],
                    good_index: g,
                    remaining_value: remaining[i],
                    active: active.len(),
                });
                free[g] = false;
                bundles[i].push(g);
                active.remove(slot);
                for &a in &active {
                    remaining[a] = remaining[a] - instance.value(a, g);
                }
                continue 'phase;
            }
        }
        break;
    }
    let goods: Vec<usize> = (0..m).filter(|&g| free[g]).collect();
    round_robin_into(instance, &active, &goods, &mut bundles);
    HalfRun {
        allocation: Allocation::new(bundles),
        singletons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_agent_takes_everything() {
        let inst = Instance::from_rows(&[&[2, 3, 5]]).unwrap();
        let run = apx_mms_half_traced(&inst);
        assert!(run.singletons.is_empty());
        assert_eq!(run.allocation.bundle(0), &[0, 1, 2]);
    }

    #[test]
    fn big_good_goes_first() {
        let inst = Instance::from_rows(&[&[10, 1, 1], &[10, 1, 1]]).unwrap();
        let run = apx_mms_half_traced(&inst);
        assert_eq!(run.allocation.bundle(0), &[0]);
        assert_eq!(run.allocation.bundle(1), &[1, 2]);
        assert_eq!(run.singletons[0].agent, 0);
        assert_eq!(run.singletons[0].good_index, 0);
        assert_eq!(run.singletons[0].remaining_value, Value(12));
    }

    #[test]
    fn binary_values_without_big_goods_are_round_robin() {
        let row: &[u64] = &[1, 0, 1, 1, 0, 1, 1, 1, 0, 1];
        let inst = Instance::from_rows(&[row, row, row]).unwrap();
        let run = apx_mms_half_traced(&inst);
        assert!(run.singletons.is_empty());
        assert_eq!(run.allocation, crate::round_robin::round_robin(&inst));
    }
}
