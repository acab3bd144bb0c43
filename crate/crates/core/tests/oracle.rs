mod common;

use common::{brute_mms, instances};
use maximin_core::{
    feasible_cover, mms_approx, mms_exact, proportional_upper_bound, CertificateMode, Epsilon,
    Ratio, Value,
};
use proptest::prelude::*;

fn values() -> impl Strategy<Value = Vec<Value>> {
    proptest::collection::vec(0u64..20, 0..=8).prop_map(|v| v.into_iter().map(Value).collect())
}

fn is_k_partition(witness: &[Vec<usize>], k: usize, m: usize) -> bool {
    let mut all: Vec<usize> = witness.concat();
    all.sort_unstable();
    witness.len() == k && all == (0..m).collect::<Vec<_>>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exact_matches_enumeration(v in values(), k in 1usize..=4) {
        let raw: Vec<u64> = v.iter().map(|x| x.get()).collect();
        let cert = mms_exact(&v, k).unwrap();
        prop_assert_eq!(cert.value.get(), brute_mms(&raw, k));
        prop_assert_eq!(cert.mode, CertificateMode::Exact);
        prop_assert!(is_k_partition(&cert.witness, k, v.len()));
        prop_assert_eq!(cert.witness_min(&v), cert.value);
    }

    #[test]
    fn approx_is_sandwiched(v in values(), k in 1usize..=4, q in 2u64..=20) {
        let eps = Epsilon::new(1, q).unwrap();
        let exact = mms_exact(&v, k).unwrap().value;
        let cert = mms_approx(&v, k, eps).unwrap();
        prop_assert!(cert.value <= exact);
        prop_assert!(cert.value.meets(eps.keep().mul(exact.as_ratio())));
        prop_assert!(is_k_partition(&cert.witness, k, v.len()));
        prop_assert_eq!(cert.witness_min(&v), cert.value);
    }

    #[test]
    fn feasible_cover_finds_reachable_targets(v in values(), k in 1usize..=3, q in 2u64..=10) {
        let eps = Epsilon::new(1, q).unwrap();
        let exact = mms_exact(&v, k).unwrap().value;
        let reachable = eps.keep().mul(exact.as_ratio()).floor() as u64;
        for target in 0..=exact.get() + 1 {
            let cover = feasible_cover(&v, k, Value(target), eps).unwrap();
            if let Some(p) = &cover {
                prop_assert!(is_k_partition(p, k, v.len()));
                let low = p.iter().map(|b| b.iter().map(|&g| v[g]).sum::<Value>()).min().unwrap();
                prop_assert!(low >= Value(target));
            }
            if target <= reachable {
                prop_assert!(cover.is_some(), "target {} not covered", target);
            }
            if target > exact.get() {
                prop_assert!(cover.is_none());
            }
        }
    }

    #[test]
    fn proportional_bound_dominates(inst in instances(1..=3, 0..=8, 10), k in 1usize..=3) {
        let all: Vec<usize> = (0..inst.goods()).collect();
        for i in 0..inst.agents() {
            let bound = proportional_upper_bound(&inst, i, &all, k).unwrap();
            let mu = mms_exact(inst.row(i), k).unwrap().value;
            prop_assert!(mu.as_ratio() <= bound);
        }
    }

    #[test]
    fn removing_a_good_and_a_bundle_keeps_the_share(v in values(), k in 2usize..=4) {
        let mu = mms_exact(&v, k).unwrap().value;
        for j in 0..v.len() {
            let mut rest = v.clone();
            rest.remove(j);
            prop_assert!(mms_exact(&rest, k - 1).unwrap().value >= mu);
        }
    }

    #[test]
    fn scaling_values_scales_the_share(v in values(), k in 1usize..=3, c in 1u64..=7) {
        let scaled: Vec<Value> = v.iter().map(|x| Value(x.get() * c)).collect();
        let mu = mms_exact(&v, k).unwrap().value;
        prop_assert_eq!(mms_exact(&scaled, k).unwrap().value, Value(mu.get() * c));
    }
}

#[test]
fn approx_handles_large_inputs() {
    // far beyond the exact cap
    let v: Vec<Value> = (0..200u64).map(|g| Value((g * 7919) % 1000 + 1)).collect();
    let eps = Epsilon::new(1, 10).unwrap();
    let cert = mms_approx(&v, 7, eps).unwrap();
    let total: u64 = v.iter().map(|x| x.get()).sum();
    assert!(cert.value.get() <= total / 7);
    // a near-even split of many small goods is easy to certify
    assert!(cert.value.meets(eps.keep().mul(Ratio::integer((total / 7 - 1000) as u128))));
    assert!(is_k_partition(&cert.witness, 7, v.len()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn approx_tracks_exact_on_wider_inputs(
        v in proptest::collection::vec(0u64..1000, 10..=18),
        k in 2usize..=5,
        q in 4u64..=20,
    ) {
        let v: Vec<Value> = v.into_iter().map(Value).collect();
        let eps = Epsilon::new(1, q).unwrap();
        let exact = mms_exact(&v, k).unwrap().value;
        let approx = mms_approx(&v, k, eps).unwrap().value;
        prop_assert!(approx <= exact);
        prop_assert!(approx.meets(eps.keep().mul(exact.as_ratio())));
    }
}
