//! `(2/3 - eps)`-approximation by recursive partition and matching.
//!
//! The lowest-indexed active agent splits the unallocated goods into one
//! bundle per active agent. Every agent that values some bundle above her
//! threshold and is not part of a Hall violator gets one through a matching;
//! the violators recurse on whatever is left.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::matching::{build_preference_graph, compute_x_plus, maximum_matching};
use crate::oracle::{xi_vector, Oracle};
use crate::value::{Epsilon, Ratio, Value};

/// How single-agent shares are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Exact branch and bound; limited to small good counts.
    Exact,
    /// Polynomial-time approximation with an algorithm-specific accuracy.
    Ptas,
}

/// `2 o / (3 o - 1)` with `o` the largest odd number not above `n`.
pub fn rho(n: usize) -> Result<Ratio> {
    if n < 2 {
        return Err(Error::input("the density parameter needs at least two agents"));
    }
    let odd = if n % 2 == 1 { n } else { n - 1 } as u128;
    Ratio::new(2 * odd, 3 * odd - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    /// Active agents, ascending; the first one partitions.
    pub agents: Vec<usize>,
    /// Unallocated goods at the start of the level.
    pub goods: Vec<usize>,
    pub partition: Vec<Vec<usize>>,
    /// `(agent, bundle index)` pairs.
    pub edges: Vec<(usize, usize)>,
    /// Pairs actually allocated at this level.
    pub matching: Vec<(usize, usize)>,
    pub x_plus: Vec<usize>,
    pub gamma: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoThirdsRun {
    pub allocation: Allocation,
    pub xi: Vec<Value>,
    pub thresholds: Vec<Ratio>,
    pub levels: Vec<Level>,
}

fn check_eps(eps: Epsilon) -> Result<()> {
    if eps.ratio() >= Ratio::new(1, 3)? {
        return Err(Error::input("eps must be below 1/3"));
    }
    Ok(())
}

pub fn apx_mms(instance: &Instance, eps: Epsilon, mode: OracleMode) -> Result<Allocation> {
    apx_mms_traced(instance, eps, mode).map(|r| r.allocation)
}

pub fn apx_mms_traced(instance: &Instance, eps: Epsilon, mode: OracleMode) -> Result<TwoThirdsRun> {
    check_eps(eps)?;
    let n = instance.agents();
    let m = instance.goods();
    if n == 1 {
        return Ok(TwoThirdsRun {
            allocation: Allocation::new(vec![(0..m).collect()]),
            xi: vec![instance.total(0)],
            thresholds: vec![instance.total(0).as_ratio()],
            levels: Vec::new(),
        });
    }
    let rho_n = rho(n)?;
    // exact shares need no (1 - eps') slack
    let (oracle, factor) = match mode {
        OracleMode::Exact => (Oracle::exact(), rho_n),
        OracleMode::Ptas => {
            let eps_prime = eps.scaled(Ratio::new(3, 4)?)?;
            (Oracle::Ptas(eps_prime), eps_prime.keep().mul(rho_n))
        }
    };
    let xi: Vec<Value> = xi_vector(instance, n, oracle)?
        .into_iter()
        .map(|c| c.value)
        .collect();
    let thresholds: Vec<Ratio> = xi.iter().map(|x| factor.mul(x.as_ratio())).collect();

    let mut bundles = vec![Vec::new(); n];
    let mut levels = Vec::new();
    let mut agents: Vec<usize> = (0..n).collect();
    let mut goods: Vec<usize> = (0..m).collect();
    while agents.len() > 1 {
        let k = agents.len();
        let partition = oracle.certify_goods(instance, agents[0], &goods, k)?.witness;
        let local: Vec<Ratio> = agents.iter().map(|&a| thresholds[a]).collect();
        let graph = build_preference_graph(instance, &agents, &partition, &local)?;
        let matching = maximum_matching(&graph);
        let split = compute_x_plus(&graph, &matching)?;
        if split.x_plus.first() == Some(&0) {
            return Err(Error::invariant(
                "the partitioning agent is not matched to her own bundle",
            ));
        }
        let mut used = vec![false; k];
        for &(x, y) in &split.matching {
            bundles[agents[x]].extend_from_slice(&partition[y]);
            used[y] = true;
        }
        let rest: Vec<usize> = partition
            .iter()
            .enumerate()
            .filter(|&(y, _)| !used[y])
            .flat_map(|(_, b)| b.iter().copied())
            .collect();
        let next: Vec<usize> = split.x_plus.iter().map(|&x| agents[x]).collect();
        levels.push(Level {
            agents: agents.clone(),
            goods: goods.clone(),
            edges: graph.edges().into_iter().map(|(x, y)| (agents[x], y)).collect(),
            matching: split.matching.iter().map(|&(x, y)| (agents[x], y)).collect(),
            x_plus: next.clone(),
            gamma: split.gamma,
            partition,
        });
        goods = rest;
        goods.sort_unstable();
        agents = next;
        if agents.is_empty() {
            break;
        }
    }
    if let [last] = agents[..] {
        bundles[last].extend_from_slice(&goods);
        goods.clear();
    }
    debug_assert!(goods.is_empty());
    Ok(TwoThirdsRun {
        allocation: Allocation::new(bundles),
        xi,
        thresholds,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::mms_exact;

    fn eps() -> Epsilon {
        Epsilon::new(1, 10).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(2).unwrap(), Ratio::ONE);
        assert_eq!(rho(3).unwrap(), Ratio::new(3, 4).unwrap());
        assert_eq!(rho(4).unwrap(), Ratio::new(3, 4).unwrap());
        assert_eq!(rho(5).unwrap(), Ratio::new(5, 7).unwrap());
        assert!(rho(1).is_err());
        let two_thirds = Ratio::new(2, 3).unwrap();
        assert!((2..200).all(|n| rho(n).unwrap() > two_thirds));
    }

    #[test]
    fn eps_bound_is_enforced() {
        let inst = Instance::from_rows(&[&[1, 1], &[1, 1]]).unwrap();
        let big = Epsilon::new(1, 3).unwrap();
        assert!(apx_mms(&inst, big, OracleMode::Exact).is_err());
    }

    #[test]
    fn single_agent_gets_everything() {
        let inst = Instance::from_rows(&[&[3, 0, 2]]).unwrap();
        let a = apx_mms(&inst, eps(), OracleMode::Ptas).unwrap();
        assert_eq!(a.bundle(0), &[0, 1, 2]);
    }

    #[test]
    fn symmetric_four_agents() {
        let row = [1u64; 12];
        let inst = Instance::from_rows(&[&row, &row, &row, &row]).unwrap();
        let run = apx_mms_traced(&inst, eps(), OracleMode::Exact).unwrap();
        assert_eq!(run.levels.len(), 1);
        assert!(run.levels[0].x_plus.is_empty());
        assert!(run.allocation.bundles().iter().all(|b| b.len() == 3));
    }

    #[test]
    fn two_agents_exact_mode_reaches_full_share() {
        let inst = Instance::from_rows(&[&[7, 5, 4, 4, 3], &[1, 6, 2, 5, 5]]).unwrap();
        let run = apx_mms_traced(&inst, eps(), OracleMode::Exact).unwrap();
        run.allocation.validate(2, 5).unwrap();
        for (i, v) in run.allocation.values(&inst).into_iter().enumerate() {
            assert!(v >= mms_exact(inst.row(i), 2).unwrap().value);
        }
    }

    #[test]
    fn zero_shares_still_partition() {
        let inst = Instance::from_rows(&[&[1, 1, 1], &[3, 0, 0], &[3, 0, 0]]).unwrap();
        let run = apx_mms_traced(&inst, eps(), OracleMode::Exact).unwrap();
        run.allocation.validate(3, 3).unwrap();
        assert_eq!(run.xi, vec![Value(1), Value(0), Value(0)]);
        assert!(run.allocation.values(&inst)[0] >= Value(1));
    }
}
