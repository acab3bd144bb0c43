//! Greedy round-robin picking and its randomized variant for short instances.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};

/// Goods of `row` restricted to `goods`, best first, ties to the lower index.
fn preference_order(instance: &Instance, agent: usize, goods: &[usize]) -> Vec<usize> {
    let row = instance.row(agent);
    let mut order = goods.to_vec();
    order.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
    order
}

/// Round-robin over `agents` (in picking order) and the goods in `goods`.
/// Picks are appended to `bundles`, indexed by agent id.
pub(crate) fn round_robin_into(
    instance: &Instance,
    agents: &[usize],
    goods: &[usize],
    bundles: &mut [Vec<usize>],
) {
    if agents.is_empty() {
        return;
    }
    let prefs: Vec<Vec<usize>> = agents
        .iter()
        .map(|&a| preference_order(instance, a, goods))
        .collect();
    let mut cursor = vec![0usize; agents.len()];
    let mut taken = vec![false; instance.goods()];
    for turn in 0..goods.len() {
        let slot = turn % agents.len();
        let pref = &prefs[slot];
        let c = &mut cursor[slot];
        while taken[pref[*c]] {
            *c += 1;
        }
        let g = pref[*c];
        taken[g] = true;
        bundles[agents[slot]].push(g);
    }
}

/// Greedy round-robin with agents picking in `order`.
pub fn greedy_round_robin(instance: &Instance, order: &[usize]) -> Result<Allocation> {
    let n = instance.agents();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::input("order must list every agent once"));
    }
    for &a in order {
        if a >= n || seen[a] {
            return Err(Error::input("order must be a permutation of the agents"));
        }
        seen[a] = true;
    }
    let goods: Vec<usize> = (0..instance.goods()).collect();
    let mut bundles = vec![Vec::new(); n];
    round_robin_into(instance, order, &goods, &mut bundles);
    Ok(Allocation::new(bundles))
}

/// Round-robin with agents in index order.
pub fn round_robin(instance: &Instance) -> Allocation {
    let order: Vec<usize> = (0..instance.agents()).collect();
    greedy_round_robin(instance, &order).expect("identity order")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedRun {
    pub allocation: Allocation,
    /// `(agent, good)` for each agent that left early with a single good.
    pub early: Vec<(usize, usize)>,
}

/// While fewer than two goods remain per remaining agent, a uniformly random
/// agent takes her favourite good and leaves; the rest run round-robin in
/// index order.
pub fn modified_greedy_round_robin(instance: &Instance, seed: u64) -> Allocation {
    modified_greedy_round_robin_traced(instance, seed).allocation
}

pub fn modified_greedy_round_robin_traced(instance: &Instance, seed: u64) -> ModifiedRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = instance.agents();
    let mut agents: Vec<usize> = (0..n).collect();
    let mut goods: Vec<usize> = (0..instance.goods()).collect();
    let mut bundles = vec![Vec::new(); n];
    let mut early = Vec::new();
    while !agents.is_empty() && goods.len() < 2 * agents.len() {
        let a = agents.remove(rng.gen_range(0..agents.len()));
        if let Some(pos) = best_position(instance, a, &goods) {
            let g = goods.remove(pos);
            bundles[a].push(g);
            early.push((a, g));
        }
    }
    round_robin_into(instance, &agents, &goods, &mut bundles);
    ModifiedRun {
        allocation: Allocation::new(bundles),
        early,
    }
}

fn best_position(instance: &Instance, agent: usize, goods: &[usize]) -> Option<usize> {
    let row = instance.row(agent);
    // goods stay sorted, so the first maximum is the lowest index
    let mut best: Option<usize> = None;
    for (pos, &g) in goods.iter().enumerate() {
        if best.is_none_or(|b| row[g] > row[goods[b]]) {
            best = Some(pos);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Value;

    #[test]
    fn single_agent_takes_everything() {
        let inst = Instance::from_rows(&[&[3, 1, 2]]).unwrap();
        assert_eq!(round_robin(&inst).bundle(0), &[0, 1, 2]);
    }

    #[test]
    fn identical_two_agents() {
        let inst = Instance::from_rows(&[&[4, 3, 2, 1], &[4, 3, 2, 1]]).unwrap();
        let a = greedy_round_robin(&inst, &[0, 1]).unwrap();
        assert_eq!(a.bundle(0), &[0, 2]);
        assert_eq!(a.bundle(1), &[1, 3]);
        assert_eq!(a.values(&inst), vec![Value(6), Value(4)]);
        let b = greedy_round_robin(&inst, &[1, 0]).unwrap();
        assert_eq!(b.bundle(1), &[0, 2]);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let inst = Instance::from_rows(&[&[1, 1, 1], &[1, 1, 1]]).unwrap();
        let a = round_robin(&inst);
        assert_eq!(a.bundle(0), &[0, 2]);
        assert_eq!(a.bundle(1), &[1]);
    }

    #[test]
    fn order_must_be_permutation() {
        let inst = Instance::from_rows(&[&[1], &[1]]).unwrap();
        assert!(greedy_round_robin(&inst, &[0, 0]).is_err());
        assert!(greedy_round_robin(&inst, &[0]).is_err());
        assert!(greedy_round_robin(&inst, &[0, 2]).is_err());
    }

    #[test]
    fn modified_matches_plain_when_goods_are_plentiful() {
        let inst = Instance::from_rows(&[&[5, 1, 3, 2, 4], &[1, 2, 3, 4, 5]]).unwrap();
        for seed in 0..5 {
            let run = modified_greedy_round_robin_traced(&inst, seed);
            assert!(run.early.is_empty());
            assert_eq!(run.allocation, round_robin(&inst));
        }
    }

    #[test]
    fn modified_phase_one_length() {
        // 4 goods, 3 agents: two agents leave early, the last takes two goods
        let inst = Instance::from_rows(&[&[4, 3, 2, 1], &[1, 2, 3, 4], &[2, 2, 2, 2]]).unwrap();
        for seed in 0..10 {
            let run = modified_greedy_round_robin_traced(&inst, seed);
            assert_eq!(run.early.len(), 2);
            run.allocation.validate(3, 4).unwrap();
            let last = (0..3).find(|a| run.early.iter().all(|e| e.0 != *a)).unwrap();
            assert_eq!(run.allocation.bundle(last).len(), 2);
        }
    }

    #[test]
    fn modified_single_good_two_agents() {
        let inst = Instance::from_rows(&[&[3], &[5]]).unwrap();
        let run = modified_greedy_round_robin_traced(&inst, 7);
        run.allocation.validate(2, 1).unwrap();
        assert_eq!(run.early.len(), 1);
        assert_eq!(run.early[0].1, 0);
    }

    #[test]
    fn modified_is_seed_deterministic() {
        let inst = Instance::from_rows(&[&[4, 3, 2], &[1, 2, 3], &[2, 2, 2]]).unwrap();
        assert_eq!(
            modified_greedy_round_robin(&inst, 42),
            modified_greedy_round_robin(&inst, 42)
        );
    }
}
