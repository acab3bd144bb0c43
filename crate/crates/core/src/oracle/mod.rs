//! Single-agent maximin share oracles.
//!
//! `mu_i(k, S)` is the best worst-bundle value agent `i` can force by splitting
//! `S` into `k` bundles herself. [`mms_exact`] computes it by branch and bound
//! for small good counts; [`mms_approx`] returns a `(1 - eps)`-approximation
//! for any size. Both return a [`MaximinCertificate`] carrying the partition
//! that attains the reported value.

mod exact;
mod ptas;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::value::{Epsilon, Ratio, Value};

/// Largest good count the exact oracle accepts by default.
pub const DEFAULT_EXACT_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMode {
    Exact,
    Ptas(Epsilon),
    /// Longest-processing-time split; a lower bound with no ratio guarantee.
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximinCertificate {
    /// Worst bundle of `witness`, which is also the reported share.
    pub value: Value,
    /// `k` bundles of indices into the queried value sequence.
    pub witness: Vec<Vec<usize>>,
    pub mode: CertificateMode,
}

impl MaximinCertificate {
    /// Re-derives the worst witness bundle from `values`.
    pub fn witness_min(&self, values: &[Value]) -> Value {
        exact::min_bundle(values, &self.witness)
    }

    /// Rewrites witness indices through `goods` (position -> good id).
    pub fn relabel(mut self, goods: &[usize]) -> Self {
        for bundle in &mut self.witness {
            for g in bundle.iter_mut() {
                *g = goods[*g];
            }
            bundle.sort_unstable();
        }
        self
    }
}

/// Exact `k`-maximin share with the default good cap.
pub fn mms_exact(values: &[Value], k: usize) -> Result<MaximinCertificate> {
    mms_exact_with_cap(values, k, DEFAULT_EXACT_CAP)
}

pub fn mms_exact_with_cap(values: &[Value], k: usize, cap: usize) -> Result<MaximinCertificate> {
    if k == 0 {
        return Err(Error::input("bundle count k must be at least 1"));
    }
    if values.len() > cap {
        return Err(Error::TooManyGoods {
            goods: values.len(),
            cap,
        });
    }
    let (value, witness) = exact::solve(values, k);
    Ok(MaximinCertificate {
        value,
        witness,
        mode: CertificateMode::Exact,
    })
}

/// Lower bound on the `k`-maximin share from one greedy pass, for inputs too
/// large for either oracle to be worth running.
pub fn mms_greedy(values: &[Value], k: usize) -> Result<MaximinCertificate> {
    if k == 0 {
        return Err(Error::input("bundle count k must be at least 1"));
    }
    let witness = exact::greedy_partition(values, k);
    Ok(MaximinCertificate {
        value: exact::min_bundle(values, &witness),
        witness,
        mode: CertificateMode::Greedy,
    })
}

/// `(1 - eps)`-approximate `k`-maximin share.
pub fn mms_approx(values: &[Value], k: usize, eps: Epsilon) -> Result<MaximinCertificate> {
    if k == 0 {
        return Err(Error::input("bundle count k must be at least 1"));
    }
    let (value, witness) = if k > values.len() {
        exact::solve(values, k)
    } else {
        ptas::approximate(values, k, eps)
    };
    Ok(MaximinCertificate {
        value,
        witness,
        mode: CertificateMode::Ptas(eps),
    })
}

/// A `k`-partition whose every bundle is worth at least `target`, if the
/// rounded search finds one. It always finds one when
/// `target <= (1 - eps) * mu(k)`.
pub fn feasible_cover(
    values: &[Value],
    k: usize,
    target: Value,
    eps: Epsilon,
) -> Result<Option<Vec<Vec<usize>>>> {
    if k == 0 {
        return Err(Error::input("bundle count k must be at least 1"));
    }
    if target == Value::ZERO {
        let mut parts = alloc::vec![Vec::new(); k];
        parts[0] = (0..values.len()).collect();
        return Ok(Some(parts));
    }
    let goal = target.as_ratio();
    let lifted = ratio_over(goal, eps.keep());
    for t in [lifted, goal] {
        if let ptas::Dual::Cover(p) = ptas::dual_cover(values, k, t, eps) {
            if exact::min_bundle(values, &p) >= target {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

fn ratio_over(a: Ratio, b: Ratio) -> Ratio {
    a.mul(Ratio::new(b.denom(), b.numer()).expect("nonzero"))
}

/// How the single-agent shares are computed inside the allocation algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Exact { cap: usize },
    Ptas(Epsilon),
}

impl Oracle {
    pub fn exact() -> Self {
        Oracle::Exact {
            cap: DEFAULT_EXACT_CAP,
        }
    }

    pub fn certify(&self, values: &[Value], k: usize) -> Result<MaximinCertificate> {
        match *self {
            Oracle::Exact { cap } => mms_exact_with_cap(values, k, cap),
            Oracle::Ptas(eps) => mms_approx(values, k, eps),
        }
    }

    /// Certificate for `agent` over `goods`, witness relabeled to good ids.
    pub fn certify_goods(
        &self,
        instance: &Instance,
        agent: usize,
        goods: &[usize],
        k: usize,
    ) -> Result<MaximinCertificate> {
        let values = instance.restricted(agent, goods);
        Ok(self.certify(&values, k)?.relabel(goods))
    }

    /// The guaranteed fraction of the true share: `1` or `1 - eps`.
    pub fn keep(&self) -> Ratio {
        match self {
            Oracle::Exact { .. } => Ratio::ONE,
            Oracle::Ptas(eps) => eps.keep(),
        }
    }
}

/// One certificate per agent for `k` bundles over all goods.
pub fn xi_vector(instance: &Instance, k: usize, oracle: Oracle) -> Result<Vec<MaximinCertificate>> {
    (0..instance.agents())
        .map(|i| oracle.certify(instance.row(i), k))
        .collect()
}
