//! `(7/8 - eps)`-approximation for exactly three agents.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{bundle_value, Allocation, Instance};
use crate::oracle::{xi_vector, Oracle};
use crate::two_thirds::OracleMode;
use crate::value::{Epsilon, Ratio, Value};

/// Which branch produced the allocation, with its intermediate sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Branch {
    /// `agent` valued `good` at `7/8 xi` or more and took it alone; the others
    /// split the rest by cut and choose.
    BigGood {
        agent: usize,
        good: usize,
        cutter: usize,
        chooser: usize,
        halves: [Vec<usize>; 2],
    },
    /// Agent 0's 3-partition served agents 1 and 2 directly.
    Matched {
        partition: Vec<Vec<usize>>,
        /// Parts given to agents 1 and 2.
        parts: (usize, usize),
    },
    /// Agent 1 re-split the part she likes together with one other part.
    Repartition {
        partition: Vec<Vec<usize>>,
        /// The one part agent 1 values at `7/8 xi`.
        liked: usize,
        /// The part merged with `liked`.
        merged: usize,
        halves: [Vec<usize>; 2],
        kept_min: Value,
        discarded_min: Value,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeAgentRun {
    pub allocation: Allocation,
    pub xi: Vec<Value>,
    pub branch: Branch,
}

pub fn apx_3_mms(instance: &Instance, eps: Epsilon, mode: OracleMode) -> Result<Allocation> {
    apx_3_mms_traced(instance, eps, mode).map(|r| r.allocation)
}

fn two_halves(witness: Vec<Vec<usize>>) -> [Vec<usize>; 2] {
    let mut it = witness.into_iter();
    [it.next().unwrap_or_default(), it.next().unwrap_or_default()]
}

pub fn apx_3_mms_traced(instance: &Instance, eps: Epsilon, mode: OracleMode) -> Result<ThreeAgentRun> {
    if instance.agents() != 3 {
        return Err(Error::input("the three-agent algorithm needs exactly three agents"));
    }
    let seven_eighths = Ratio::new(7, 8)?;
    if eps.ratio() >= seven_eighths {
        return Err(Error::input("eps must be below 7/8"));
    }
    let (oracle, fine) = match mode {
        OracleMode::Exact => (Oracle::exact(), Oracle::exact()),
        OracleMode::Ptas => (
            Oracle::Ptas(eps),
            Oracle::Ptas(eps.scaled(Ratio::new(8, 7)?)?),
        ),
    };
    let m = instance.goods();
    let all: Vec<usize> = (0..m).collect();
    let xi: Vec<Value> = xi_vector(instance, 3, oracle)?
        .into_iter()
        .map(|c| c.value)
        .collect();
    let bar: Vec<Ratio> = xi.iter().map(|x| seven_eighths.mul(x.as_ratio())).collect();
    let likes = |agent: usize, set: &[usize]| -> Result<bool> {
        Ok(bundle_value(instance, agent, set)?.meets(bar[agent]))
    };

    let big = (0..3).find_map(|i| (0..m).find(|&g| instance.value(i, g).meets(bar[i])).map(|g| (i, g)));
    if let Some((agent, good)) = big {
        let others: Vec<usize> = (0..3).filter(|&a| a != agent).collect();
        let (cutter, chooser) = (others[0], others[1]);
        let rest: Vec<usize> = all.iter().copied().filter(|&g| g != good).collect();
        let halves = two_halves(oracle.certify_goods(instance, cutter, &rest, 2)?.witness);
        let first = bundle_value(instance, chooser, &halves[0])?;
        let second = bundle_value(instance, chooser, &halves[1])?;
        let pick = usize::from(second > first);
        let mut bundles = vec![Vec::new(); 3];
        bundles[agent] = vec![good];
        bundles[chooser] = halves[pick].clone();
        bundles[cutter] = halves[1 - pick].clone();
        return Ok(ThreeAgentRun {
            allocation: Allocation::new(bundles),
            xi,
            branch: Branch::BigGood {
                agent,
                good,
                cutter,
                chooser,
                halves,
            },
        });
    }

    let partition = oracle.certify_goods(instance, 0, &all, 3)?.witness;
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
    for (j2, j3) in PAIRS {
        if likes(1, &partition[j2])? && likes(2, &partition[j3])? {
            let leftover = 3 - j2 - j3;
            let bundles = vec![
                partition[leftover].clone(),
                partition[j2].clone(),
                partition[j3].clone(),
            ];
            return Ok(ThreeAgentRun {
                allocation: Allocation::new(bundles),
                xi,
                branch: Branch::Matched {
                    partition,
                    parts: (j2, j3),
                },
            });
        }
    }

    let liked: Vec<usize> = (0..3)
        .filter(|&j| likes(1, &partition[j]).unwrap_or(false))
        .collect();
    let [liked] = liked[..] else {
        return Err(Error::invariant(alloc::format!(
            "agent 2 likes {} parts of an unmatched partition",
            liked.len()
        )));
    };
    let others: Vec<usize> = (0..3).filter(|&j| j != liked).collect();
    let mut candidates = Vec::with_capacity(2);
    for &other in &others {
        let mut union = partition[liked].clone();
        union.extend_from_slice(&partition[other]);
        union.sort_unstable();
        let cert = fine.certify_goods(instance, 1, &union, 2)?;
        candidates.push((other, cert.value, two_halves(cert.witness)));
    }
    let keep = usize::from(candidates[1].1 > candidates[0].1);
    let discarded_min = candidates[1 - keep].1;
    let (merged, kept_min, halves) = candidates.swap_remove(keep);
    let untouched = 3 - liked - merged;

    let first = bundle_value(instance, 2, &halves[0])?;
    let second = bundle_value(instance, 2, &halves[1])?;
    let pick = usize::from(second > first);
    let bundles = vec![
        partition[untouched].clone(),
        halves[1 - pick].clone(),
        halves[pick].clone(),
    ];
    Ok(ThreeAgentRun {
        allocation: Allocation::new(bundles),
        xi,
        branch: Branch::Repartition {
            partition,
            liked,
            merged,
            halves,
            kept_min,
            discarded_min,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps() -> Epsilon {
        Epsilon::new(1, 20).unwrap()
    }

    #[test]
    fn wrong_agent_count() {
        let inst = Instance::from_rows(&[&[1], &[1]]).unwrap();
        assert!(apx_3_mms(&inst, eps(), OracleMode::Exact).is_err());
    }

    #[test]
    fn eps_bound() {
        let inst = Instance::from_rows(&[&[1], &[1], &[1]]).unwrap();
        let big = Epsilon::new(7, 8).unwrap();
        assert!(apx_3_mms(&inst, big, OracleMode::Exact).is_err());
    }

    #[test]
    fn one_big_good() {
        let row: &[u64] = &[7, 1, 1, 1, 1, 1, 1, 1];
        let inst = Instance::from_rows(&[row, row, row]).unwrap();
        let run = apx_3_mms_traced(&inst, eps(), OracleMode::Exact).unwrap();
        // the two bundles without the 7 share seven units, so mu is 3
        assert_eq!(run.xi, vec![Value(3); 3]);
        match &run.branch {
            Branch::BigGood {
                agent, good, cutter, chooser, ..
            } => {
                assert_eq!((*agent, *good, *cutter, *chooser), (0, 0, 1, 2));
            }
            other => panic!("unexpected branch {other:?}"),
        }
        let values = run.allocation.values(&inst);
        assert_eq!(values[0], Value(7));
        assert_eq!(values[2], Value(4));
        assert_eq!(values[1], Value(3));
    }

    #[test]
    fn nine_unit_goods_match_directly() {
        let row = [1u64; 9];
        let inst = Instance::from_rows(&[&row, &row, &row]).unwrap();
        let run = apx_3_mms_traced(&inst, eps(), OracleMode::Ptas).unwrap();
        assert!(matches!(run.branch, Branch::Matched { parts: (0, 1), .. }));
        assert!(run.allocation.values(&inst).iter().all(|&v| v == Value(3)));
    }

    #[test]
    fn two_goods_three_agents() {
        let inst = Instance::from_rows(&[&[1, 2], &[2, 1], &[1, 1]]).unwrap();
        let run = apx_3_mms_traced(&inst, eps(), OracleMode::Exact).unwrap();
        run.allocation.validate(3, 2).unwrap();
        assert_eq!(run.xi, vec![Value(0); 3]);
    }
}
