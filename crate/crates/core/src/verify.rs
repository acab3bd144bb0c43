use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::Allocation;
use crate::instance::Instance;
use crate::value::{Ratio, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentCheck {
    pub agent: usize,
    pub value: Value,
    pub threshold: Ratio,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub agents: Vec<AgentCheck>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &AgentCheck> {
        self.agents.iter().filter(|c| !c.pass)
    }
}

/// Checks that `allocation` is a partition and that each agent's bundle
/// reaches her threshold. Structural problems are reported as errors before
/// any value is compared.
pub fn verify_allocation(
    instance: &Instance,
    allocation: &Allocation,
    thresholds: &[Ratio],
) -> Result<VerificationReport> {
    if thresholds.len() != instance.agents() {
        return Err(Error::input("one threshold per agent is required"));
    }
    allocation.validate(instance.agents(), instance.goods())?;
    let agents: Vec<AgentCheck> = allocation
        .values(instance)
        .into_iter()
        .zip(thresholds)
        .enumerate()
        .map(|(agent, (value, &threshold))| AgentCheck {
            agent,
            value,
            threshold,
            pass: value.meets(threshold),
        })
        .collect();
    let pass = agents.iter().all(|c| c.pass);
    Ok(VerificationReport { agents, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_agent_full_value_passes() {
        let inst = Instance::from_rows(&[&[2, 3, 5]]).unwrap();
        let alloc = Allocation::new(vec![vec![0, 1, 2]]);
        let report = verify_allocation(&inst, &alloc, &[Ratio::integer(10)]).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn two_agent_examples() {
        let inst = Instance::from_rows(&[&[4, 3, 2, 1], &[4, 3, 2, 1]]).unwrap();
        let five = [Ratio::integer(5), Ratio::integer(5)];
        let good = Allocation::new(vec![vec![0, 3], vec![1, 2]]);
        assert!(verify_allocation(&inst, &good, &five).unwrap().pass);

        let bad = Allocation::new(vec![vec![0], vec![1, 2, 3]]);
        let report = verify_allocation(&inst, &bad, &five).unwrap();
        assert!(!report.pass);
        let failed: Vec<_> = report.failures().map(|c| c.agent).collect();
        assert_eq!(failed, vec![0]);
        assert_eq!(report.agents[0].value, Value(4));
    }

    #[test]
    fn structure_checked_before_values() {
        let inst = Instance::from_rows(&[&[4, 3], &[4, 3]]).unwrap();
        let overlap = Allocation::new(vec![vec![0, 1], vec![1]]);
        let err = verify_allocation(&inst, &overlap, &[Ratio::ZERO, Ratio::ZERO]).unwrap_err();
        assert!(matches!(err, Error::Structure(_)));
    }

    #[test]
    fn empty_bundles_pass_zero_thresholds() {
        let inst = Instance::from_rows(&[&[5], &[5], &[5]]).unwrap();
        let alloc = Allocation::new(vec![vec![0], vec![], vec![]]);
        let report = verify_allocation(&inst, &alloc, &[Ratio::ZERO; 3]).unwrap();
        assert!(report.pass);
    }
}
