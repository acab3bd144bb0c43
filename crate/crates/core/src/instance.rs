//! Instances, allocations and the proportional upper bound.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::value::{Ratio, Value};

/// `n` agents with additive valuations over `m` goods.
///
/// Goods and agents are 0-based in memory. File formats shift goods to 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    scale: u64,
    // row-major, n * m
    valuations: Vec<Value>,
}

impl Instance {
    pub fn new(valuations: Vec<Vec<u64>>, scale: u64) -> Result<Self> {
        let n = valuations.len();
        if n == 0 {
            return Err(Error::input("an instance needs at least one agent"));
        }
        let m = valuations[0].len();
        if let Some(i) = valuations.iter().position(|row| row.len() != m) {
            return Err(Error::input(alloc::format!(
                "valuation row {} has {} entries, expected {m}",
                i + 1,
                valuations[i].len()
            )));
        }
        let flat = valuations.into_iter().flatten().map(Value).collect();
        Self::from_flat(n, m, flat, scale)
    }

    pub fn from_flat(n: usize, m: usize, valuations: Vec<Value>, scale: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("an instance needs at least one agent"));
        }
        if scale == 0 {
            return Err(Error::input("scale must be positive"));
        }
        if valuations.len() != n * m {
            return Err(Error::input("valuation matrix does not have n * m entries"));
        }
        Ok(Instance {
            n,
            m,
            scale,
            valuations,
        })
    }

    /// Unit-scale instance from small integer rows; convenient in tests.
    pub fn from_rows(rows: &[&[u64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.to_vec()).collect(), 1)
    }

    #[inline]
    pub fn agents(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn goods(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn scale(&self) -> u64 {
        self.scale
    }

    #[inline]
    pub fn value(&self, agent: usize, good: usize) -> Value {
        self.valuations[agent * self.m + good]
    }

    #[inline]
    pub fn row(&self, agent: usize) -> &[Value] {
        &self.valuations[agent * self.m..(agent + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Value]> + '_ {
        (0..self.n).map(move |i| self.row(i))
    }

    /// Agent `agent`'s values restricted to `goods`, in the order given.
    pub fn restricted(&self, agent: usize, goods: &[usize]) -> Vec<Value> {
        let row = self.row(agent);
        goods.iter().map(|&g| row[g]).collect()
    }

    /// `v_i(M)`.
    pub fn total(&self, agent: usize) -> Value {
        self.row(agent).iter().sum()
    }

    /// Largest single-good value over all agents.
    pub fn v_max(&self) -> Value {
        self.valuations.iter().copied().max().unwrap_or(Value::ZERO)
    }

    /// Same instance with every value multiplied by `factor`.
    pub fn scaled_by(&self, factor: u64) -> Result<Self> {
        let valuations = self
            .valuations
            .iter()
            .map(|v| {
                v.checked_mul(factor)
                    .ok_or_else(|| Error::input("scaling overflows"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_flat(self.n, self.m, valuations, self.scale)
    }

    /// True if every agent ranks the goods in index order (non-increasing rows).
    pub fn is_fully_correlated(&self) -> bool {
        self.rows().all(|row| row.windows(2).all(|w| w[0] >= w[1]))
    }

    pub(crate) fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.n {
            return Err(Error::input(alloc::format!(
                "agent {agent} out of range (n = {})",
                self.n
            )));
        }
        Ok(())
    }
}

/// `v_i(bundle)`.
pub fn bundle_value(instance: &Instance, agent: usize, bundle: &[usize]) -> Result<Value> {
    instance.check_agent(agent)?;
    let row = instance.row(agent);
    bundle
        .iter()
        .map(|&g| {
            row.get(g).copied().ok_or_else(|| {
                Error::input(alloc::format!(
                    "good {g} out of range (m = {})",
                    instance.goods()
                ))
            })
        })
        .sum()
}

/// `v_i(subset) / k`, an upper bound on `mu_i(k, subset)`.
pub fn proportional_upper_bound(
    instance: &Instance,
    agent: usize,
    subset: &[usize],
    k: usize,
) -> Result<Ratio> {
    if k == 0 {
        return Err(Error::input("bundle count k must be at least 1"));
    }
    let total = bundle_value(instance, agent, subset)?;
    Ratio::from(total).div_int(k as u128)
}

/// A partition of the goods into one labeled bundle per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    /// Bundles are sorted internally; validity is checked separately by
    /// [`Allocation::validate`].
    pub fn new(mut bundles: Vec<Vec<usize>>) -> Self {
        for b in &mut bundles {
            b.sort_unstable();
        }
        Allocation { bundles }
    }

    pub fn empty(n: usize) -> Self {
        Allocation {
            bundles: vec![Vec::new(); n],
        }
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn into_bundles(self) -> Vec<Vec<usize>> {
        self.bundles
    }

    /// Checks disjointness and coverage of `0..m`, plus one bundle per agent.
    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if self.bundles.len() != n {
            return Err(Error::structure(alloc::format!(
                "{} bundles for {n} agents",
                self.bundles.len()
            )));
        }
        let mut owner = vec![usize::MAX; m];
        for (agent, bundle) in self.bundles.iter().enumerate() {
            for &g in bundle {
                if g >= m {
                    return Err(Error::structure(alloc::format!(
                        "good {} does not exist",
                        g + 1
                    )));
                }
                if owner[g] != usize::MAX {
                    return Err(Error::structure(alloc::format!(
                        "good {} assigned to agents {} and {}",
                        g + 1,
                        owner[g] + 1,
                        agent + 1
                    )));
                }
                owner[g] = agent;
            }
        }
        if let Some(g) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::structure(alloc::format!(
                "good {} is not allocated",
                g + 1
            )));
        }
        Ok(())
    }

    pub fn values(&self, instance: &Instance) -> Vec<Value> {
        self.bundles
            .iter()
            .enumerate()
            .map(|(i, b)| b.iter().map(|&g| instance.value(i, g)).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_value_examples() {
        let inst = Instance::from_rows(&[&[2, 3, 5]]).unwrap();
        assert_eq!(bundle_value(&inst, 0, &[]).unwrap(), Value(0));
        assert_eq!(bundle_value(&inst, 0, &[0, 1, 2]).unwrap(), Value(10));

        let inst = Instance::from_rows(&[&[1, 1, 1, 1], &[4, 3, 2, 1]]).unwrap();
        // goods {1,3} in 1-based terms
        assert_eq!(bundle_value(&inst, 1, &[0, 2]).unwrap(), Value(6));
    }

    #[test]
    fn bundle_value_rejects_out_of_range() {
        let inst = Instance::from_rows(&[&[1, 2]]).unwrap();
        assert!(matches!(bundle_value(&inst, 1, &[0]), Err(Error::Input(_))));
        assert!(matches!(bundle_value(&inst, 0, &[2]), Err(Error::Input(_))));
    }

    #[test]
    fn proportional_bound_examples() {
        let all = [0, 1, 2, 3];
        let inst = Instance::from_rows(&[&[1, 1, 1, 1]]).unwrap();
        assert_eq!(
            proportional_upper_bound(&inst, 0, &all, 2).unwrap(),
            Ratio::integer(2)
        );
        let inst = Instance::from_rows(&[&[3, 1, 1, 1]]).unwrap();
        assert_eq!(
            proportional_upper_bound(&inst, 0, &all, 2).unwrap(),
            Ratio::integer(3)
        );
        let inst = Instance::from_rows(&[&[5, 1]]).unwrap();
        assert_eq!(
            proportional_upper_bound(&inst, 0, &[0, 1], 2).unwrap(),
            Ratio::integer(3)
        );
        assert!(proportional_upper_bound(&inst, 0, &[0, 1], 0).is_err());
    }

    #[test]
    fn instance_shape_is_checked() {
        assert!(Instance::new(vec![vec![1, 2], vec![3]], 1).is_err());
        assert!(Instance::new(vec![], 1).is_err());
        assert!(Instance::new(vec![vec![1]], 0).is_err());
        let zero_goods = Instance::new(vec![vec![], vec![]], 1).unwrap();
        assert_eq!(zero_goods.goods(), 0);
        assert_eq!(zero_goods.rows().count(), 2);
    }

    #[test]
    fn partition_validation() {
        assert!(Allocation::new(vec![vec![0, 3], vec![1, 2]]).validate(2, 4).is_ok());
        let overlap = Allocation::new(vec![vec![0, 1], vec![1, 2, 3]]);
        assert!(matches!(overlap.validate(2, 4), Err(Error::Structure(_))));
        let missing = Allocation::new(vec![vec![0], vec![1, 2]]);
        assert!(matches!(missing.validate(2, 4), Err(Error::Structure(_))));
        let wrong_count = Allocation::new(vec![vec![0, 1, 2, 3]]);
        assert!(wrong_count.validate(2, 4).is_err());
        assert!(Allocation::empty(3).validate(3, 0).is_ok());
    }
}
