//! Runs one algorithm and checks its advertised guarantee against the shares.

use maximin_core::{
    apx_3_mms_traced, apx_mms_half_traced, apx_mms_traced, exact_mms_012_traced,
    greedy_round_robin, mms_exact, mms_greedy, modified_greedy_round_robin_traced, rho,
    verify_allocation, Allocation, Branch, Epsilon, Error, Instance, OracleMode, Ratio,
    VerificationReport, DEFAULT_EXACT_CAP,
};
use serde_json::{json, Value as Json};

use crate::io::{one_based, AllocationFile, Certificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    Rr,
    RrModified,
    Half,
    Twothirds,
    Three78,
    Ternary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub eps: Epsilon,
    pub oracle: OracleMode,
    /// 0-based picking order for `rr`; identity when absent.
    pub order: Option<Vec<usize>>,
    pub seed: u64,
    pub trace: bool,
}

impl SolveOptions {
    pub fn new(algorithm: Algorithm) -> Self {
        SolveOptions {
            algorithm,
            eps: Epsilon::new(1, 20).expect("1/20 is a valid eps"),
            oracle: OracleMode::Ptas,
            order: None,
            seed: 0,
            trace: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub file: AllocationFile,
    pub report: VerificationReport,
}

/// Per-agent thresholds the algorithm promises, plus a note when they rest on
/// a greedy lower bound because the instance is beyond the exact cap.
pub fn guarantee_thresholds(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<(Vec<Ratio>, Option<String>), Error> {
    let n = instance.agents();
    if matches!(options.algorithm, Algorithm::Rr | Algorithm::RrModified) {
        let vmax = instance.v_max().as_ratio();
        let thresholds = (0..n)
            .map(|i| {
                let fair = instance.total(i).as_ratio().div_int(n as u128)?;
                Ok(fair.checked_sub(vmax).unwrap_or(Ratio::ZERO))
            })
            .collect::<Result<_, Error>>()?;
        return Ok((thresholds, None));
    }
    let eps = options.eps.ratio();
    let factor = match (options.algorithm, options.oracle) {
        (Algorithm::Half, _) => Ratio::new(1, 2)?,
        (Algorithm::Twothirds, _) if n == 1 => Ratio::ONE,
        (Algorithm::Twothirds, OracleMode::Exact) => rho(n)?,
        (Algorithm::Twothirds, OracleMode::Ptas) => below(Ratio::new(2, 3)?, eps),
        (Algorithm::Three78, OracleMode::Exact) => Ratio::new(7, 8)?,
        (Algorithm::Three78, OracleMode::Ptas) => below(Ratio::new(7, 8)?, eps),
        _ => Ratio::ONE,
    };
    let exact = instance.goods() <= DEFAULT_EXACT_CAP;
    let shares = (0..n)
        .map(|i| {
            let row = instance.row(i);
            Ok(if exact { mms_exact(row, n)? } else { mms_greedy(row, n)? }.value)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let note = (!exact).then(|| {
        format!(
            "{} goods exceed the exact cap of {DEFAULT_EXACT_CAP}; thresholds use a greedy lower bound on each share",
            instance.goods()
        )
    });
    Ok((shares.iter().map(|mu| factor.mul(mu.as_ratio())).collect(), note))
}

fn below(a: Ratio, b: Ratio) -> Ratio {
    a.checked_sub(b).unwrap_or(Ratio::ZERO)
}

fn pairs(p: &[(usize, usize)]) -> Json {
    json!(p.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>())
}

fn ids(v: &[usize]) -> Json {
    json!(v.iter().map(|x| x + 1).collect::<Vec<_>>())
}

fn values(v: &[maximin_core::Value]) -> Json {
    json!(v.iter().map(|x| x.get()).collect::<Vec<_>>())
}

fn run(instance: &Instance, options: &SolveOptions) -> Result<(Allocation, Json), Error> {
    let n = instance.agents();
    Ok(match options.algorithm {
        Algorithm::Rr => {
            let order = options.order.clone().unwrap_or_else(|| (0..n).collect());
            let a = greedy_round_robin(instance, &order)?;
            (a, json!({ "order": ids(&order) }))
        }
        Algorithm::RrModified => {
            let run = modified_greedy_round_robin_traced(instance, options.seed);
            let trace = json!({ "seed": options.seed, "early": pairs(&run.early) });
            (run.allocation, trace)
        }
        Algorithm::Half => {
            let run = apx_mms_half_traced(instance);
            let singletons: Vec<Json> = run
                .singletons
                .iter()
                .map(|s| {
                    json!({
                        "agent": s.agent + 1,
                        "good": s.good_index + 1,
                        "good_value": s.good_value.get(),
                        "remaining_value": s.remaining_value.get(),
                        "active": s.active,
                    })
                })
                .collect();
            (run.allocation, json!({ "singletons": singletons }))
        }
        Algorithm::Twothirds => {
            let run = apx_mms_traced(instance, options.eps, options.oracle)?;
            let levels: Vec<Json> = run
                .levels
                .iter()
                .map(|l| {
                    json!({
                        "agents": ids(&l.agents),
                        "goods": ids(&l.goods),
                        "partition": one_based(&l.partition),
                        "edges": pairs(&l.edges),
                        "matching": pairs(&l.matching),
                        "x_plus": ids(&l.x_plus),
                        "gamma": ids(&l.gamma),
                    })
                })
                .collect();
            let thresholds: Vec<String> = run.thresholds.iter().map(|t| t.to_string()).collect();
            let trace = json!({ "xi": values(&run.xi), "thresholds": thresholds, "levels": levels });
            (run.allocation, trace)
        }
        Algorithm::Three78 => {
            let run = apx_3_mms_traced(instance, options.eps, options.oracle)?;
            let branch = match &run.branch {
                Branch::BigGood {
                    agent,
                    good,
                    cutter,
                    chooser,
                    halves,
                } => json!({
                    "tag": "b",
                    "agent": agent + 1,
                    "good": good + 1,
                    "cutter": cutter + 1,
                    "chooser": chooser + 1,
                    "halves": one_based(halves),
                }),
                Branch::Matched { partition, parts } => json!({
                    "tag": "c",
                    "partition": one_based(partition),
                    "parts": [parts.0 + 1, parts.1 + 1],
                }),
                Branch::Repartition {
                    partition,
                    liked,
                    merged,
                    halves,
                    kept_min,
                    discarded_min,
                } => json!({
                    "tag": "d",
                    "partition": one_based(partition),
                    "liked": liked + 1,
                    "merged": merged + 1,
                    "halves": one_based(halves),
                    "kept_min": kept_min.get(),
                    "discarded_min": discarded_min.get(),
                }),
            };
            (run.allocation, json!({ "xi": values(&run.xi), "branch": branch }))
        }
        Algorithm::Ternary => {
            let run = exact_mms_012_traced(instance)?;
            let edges: Vec<Json> = run
                .edges
                .iter()
                .map(|e| json!({ "agent": e.agent + 1, "one_zero": e.one_zero + 1, "two_one": e.two_one + 1 }))
                .collect();
            let classes: Vec<String> = run.classes.iter().map(|c| format!("{c:?}").to_lowercase()).collect();
            let trace = json!({
                "rows": run.rows,
                "edges": edges,
                "reversed": ids(&run.reversed),
                "classes": classes,
                "buckets": ids(&run.buckets),
                "lifted": run.lifted,
            });
            (run.allocation, trace)
        }
    })
}

/// Runs the algorithm and verifies every agent against her guarantee.
pub fn solve(instance: &Instance, options: &SolveOptions) -> Result<Solved, Error> {
    if options.algorithm == Algorithm::Three78 && instance.agents() != 3 {
        return Err(Error::Input(format!(
            "three78 needs exactly 3 agents, got {}",
            instance.agents()
        )));
    }
    let (allocation, trace) = run(instance, options)?;
    let (thresholds, guarantee) = guarantee_thresholds(instance, options)?;
    let report = verify_allocation(instance, &allocation, &thresholds)?;
    let certificates = report
        .agents
        .iter()
        .map(|c| Certificate {
            agent: c.agent + 1,
            value: c.value.get(),
            threshold: c.threshold.ceil_value().get(),
        })
        .collect();
    let file = AllocationFile {
        bundles: one_based(allocation.bundles()),
        certificates,
        guarantee,
        trace: options.trace.then_some(trace),
    };
    Ok(Solved { file, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_robin_example() {
        let inst = Instance::from_rows(&[&[4, 3, 2, 1], &[4, 3, 2, 1]]).unwrap();
        let solved = solve(&inst, &SolveOptions::new(Algorithm::Rr)).unwrap();
        assert_eq!(solved.file.bundles, vec![vec![1, 3], vec![2, 4]]);
        assert!(solved.report.pass);
        // 10/2 - 4 = 1
        assert!(solved.file.certificates.iter().all(|c| c.threshold == 1));
        assert!(solved.file.trace.is_none());
    }

    #[test]
    fn three78_rejects_other_agent_counts() {
        let row: &[u64] = &[1, 1];
        let inst = Instance::from_rows(&[row, row, row, row]).unwrap();
        let err = solve(&inst, &SolveOptions::new(Algorithm::Three78)).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn exact_two_thirds_threshold_uses_rho() {
        let row: &[u64] = &[1; 6];
        let inst = Instance::from_rows(&[row, row, row]).unwrap();
        let mut options = SolveOptions::new(Algorithm::Twothirds);
        options.oracle = OracleMode::Exact;
        let (t, note) = guarantee_thresholds(&inst, &options).unwrap();
        // mu = 2, rho_3 = 3/4
        assert_eq!(t, vec![Ratio::new(3, 2).unwrap(); 3]);
        assert!(note.is_none());
    }

    #[test]
    fn large_instances_use_the_greedy_basis() {
        let row = vec![1u64; 30];
        let inst = Instance::new(vec![row.clone(), row], 1).unwrap();
        let (t, note) = guarantee_thresholds(&inst, &SolveOptions::new(Algorithm::Half)).unwrap();
        assert_eq!(t, vec![Ratio::integer(15).div_int(2).unwrap(); 2]);
        assert!(note.unwrap().contains("greedy"));
    }

    #[test]
    fn trace_is_attached_on_request() {
        let inst = Instance::from_rows(&[&[2, 1, 0], &[0, 1, 2]]).unwrap();
        let mut options = SolveOptions::new(Algorithm::Ternary);
        options.trace = true;
        let solved = solve(&inst, &options).unwrap();
        assert!(solved.report.pass);
        assert!(solved.file.trace.unwrap().get("classes").is_some());
    }
}
