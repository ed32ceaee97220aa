use proptest::prelude::*;
use weylmax::maximal::{
    build_e, default_tolerance, lower_bound_ratio, lower_bound_rows, lower_bound_sample, maximize_t, v_of_x,
    MaximizerConfig, MaximizerPlan,
};
use weylmax::numeric::DoubleDouble;
use weylmax::oracle::grid_max_abs;
use weylmax::oscillatory::{i_beta, FreqPair};
use weylmax::weyl::{t_lipschitz, weyl_sum, weyl_sum_dd};

#[test]
fn enclosure_contains_a_dense_grid_maximum() {
    let nt = 10_000_000u64;
    let nx = 1000u64;
    for (n, js) in [
        (2u64, &[0u64, 200, 371][..]),
        (5, &[17, 500]),
        (13, &[1, 250, 613]),
        (32, &[3, 499, 777]),
    ] {
        let plan = MaximizerPlan::new(n, MaximizerConfig::default()).unwrap();
        for &j in js {
            let x = DoubleDouble::from_ratio(j as i64, nx).unwrap();
            let r = plan.maximize(x, default_tolerance(n)).unwrap();
            let oracle = grid_max_abs(j, nx, n, nt);
            let spacing_slack = t_lipschitz(n) / (2.0 * nt as f64);
            assert!(
                oracle <= r.value_upper + 1e-12,
                "N={n} x={j}/{nx}: {oracle} > {}",
                r.value_upper
            );
            assert!(
                r.value_lower <= oracle + spacing_slack,
                "N={n} x={j}/{nx}: {} > {oracle}",
                r.value_lower
            );
            assert!(r.value_upper - r.value_lower <= default_tolerance(n) + 1e-9);
        }
    }
}

#[test]
fn lower_bound_ratio_on_e() {
    for n in [10_000u64, 30_000, 100_000] {
        let e = build_e(n).unwrap();
        let sampled = lower_bound_sample(&e, 300, n).unwrap();
        let mids = lower_bound_rows(&e, 0.5).unwrap();
        let c4 = sampled
            .iter()
            .chain(&mids)
            .map(|r| r.ratio)
            .fold(f64::INFINITY, f64::min);
        assert!(c4 >= 0.1, "N = {n}: c4 = {c4}");
    }
    let n = 10_000u64;
    let nf = n as f64;
    assert!(lower_bound_ratio(n, 3, 1, 1.0 / 3.0 + 15.5 / nf).unwrap() >= 0.1);
    assert!(lower_bound_ratio(n, 15, 2, 2.0 / 15.0 + 15.5 / nf).unwrap() >= 0.1);
    assert!(lower_bound_ratio(n, 17, 1, 1.0 / 17.0 + 15.5 / nf).is_err());
}

fn i_over_n_on_window(n: u64, steps: u32) -> f64 {
    let nf = n as f64;
    (0..=steps)
        .map(|k| {
            let b1 = (15.0 + k as f64 / steps as f64) / nf;
            i_beta(FreqPair::new(b1, -b1 / nf).unwrap(), n).unwrap().norm() / nf
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn oscillatory_factor_on_e_is_bounded_below() {
    // the verified floor is 0.1588; N/6 is not reached on the whole window
    for n in [10_000u64, 100_000, 1_000_000] {
        let m = i_over_n_on_window(n, 1000);
        assert!(m >= 0.155, "N = {n}: {m}");
        assert!(m < 1.0 / 6.0, "N = {n}: {m}");
    }
}

#[test]
fn e_is_disjoint_up_to_one_hundred_thousand() {
    for n in 1..=100_000u64 {
        let e = build_e(n).unwrap();
        assert!(e.is_disjoint(), "N = {n}: {} overlaps", e.overlaps);
    }
}

#[test]
fn probe_times_at_the_endpoints() {
    let n = 10_000u64;
    let nf = n as f64;
    let p = v_of_x(1.0 / 3.0 + 15.0 / nf, 3, 1, n).unwrap();
    assert!((p.v - (1.0 / 3.0 - 15.0 / (nf * nf))).abs() < 1e-15);
    let p = v_of_x(1.0 / 3.0 + 16.0 / nf, 3, 1, n).unwrap();
    assert!((p.v - (1.0 / 3.0 - 16.0 / (nf * nf))).abs() < 1e-15);
}

#[test]
fn maximum_dominates_the_probe_on_e() {
    let n = 400u64;
    let plan = MaximizerPlan::new(n, MaximizerConfig::default()).unwrap();
    let e = build_e(n).unwrap();
    for iv in &e.intervals {
        for s in [0.0, 0.37, 1.0] {
            let (x, _) = iv.point(s);
            let p = v_of_x(x.to_f64(), iv.q, iv.a1, n).unwrap();
            let probe = weyl_sum_dd(x, p.v_dd(), n).unwrap().norm();
            let r = plan.maximize(x, default_tolerance(n)).unwrap();
            assert!(probe <= r.value_upper, "{iv:?} s={s}: {probe} > {}", r.value_upper);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn maximum_dominates_samples(x in 0.0f64..1.0, n in 2u64..48, ts in prop::collection::vec(0.0f64..1.0, 8)) {
        let r = maximize_t(x, n, default_tolerance(n)).unwrap();
        prop_assert!(r.value_lower <= r.value_upper && r.value_upper <= n as f64);
        prop_assert!((0.0..1.0).contains(&r.t_star));
        let at_star = weyl_sum(x, r.t_star, n).unwrap().norm();
        prop_assert!(r.value_lower <= at_star + 1e-9 && at_star <= r.value_upper + 1e-9);
        for t in std::iter::once(0.0).chain(ts) {
            let v = weyl_sum(x, t, n).unwrap().norm();
            prop_assert!(v <= r.value_upper, "t={}: {} > {}", t, v, r.value_upper);
        }
    }
}
