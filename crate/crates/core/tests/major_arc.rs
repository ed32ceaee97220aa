use num_complex::Complex64;
use proptest::prelude::*;
use weylmax::arith::gcd;
use weylmax::major_arc::{
    anchored_sweep, approx_at_anchor, approx_weyl, complete_sum_rows, find_rational_approx, RationalApprox,
};

/// Exhaustive scan: every `q <= q_max`, every candidate integer near `q x`.
/// Returns the first `q`, or `None` when some `q` sits too close to a window
/// edge for `f64` to decide.
fn scan(x: f64, t: f64, q_max: u64, eps1: f64, eps2: f64) -> Option<Option<(u64, i64, i64)>> {
    for q in 1..=q_max {
        let (qx, qt) = (q as f64 * x, q as f64 * t);
        let hit = |v: f64, eps: f64| -> Option<Option<i64>> {
            let mut found = None;
            for a in (v.floor() as i64 - 1)..=(v.ceil() as i64 + 1) {
                let d = (v - a as f64).abs();
                if (d - eps).abs() < 1e-9 * eps.max(1e-9) {
                    return None;
                }
                if d <= eps {
                    // windows are below 1/2, so at most one integer qualifies
                    assert!(found.is_none());
                    found = Some(a);
                }
            }
            Some(found)
        };
        match (hit(qx, eps1)?, hit(qt, eps2)?) {
            (Some(a1), Some(a2)) => return Some(Some((q, a1, a2))),
            _ => continue,
        }
    }
    Some(None)
}

#[test]
fn documented_values() {
    let r = RationalApprox::new(1, 0, 0, 0.0, 0.0).unwrap();
    let res = approx_weyl(0.0, 0.0, 500, &r).unwrap();
    assert_eq!(res.truth, Complex64::new(500.0, 0.0));
    assert!((res.approx - Complex64::new(500.0, 0.0)).norm() < 1e-9 && res.delta.norm() < 1e-9);

    let r = RationalApprox::new(3, 1, 1, 0.0, 0.0).unwrap();
    let res = approx_at_anchor(300, &r).unwrap();
    assert!((res.truth - Complex64::new(150.0, -86.60254037844386)).norm() < 1e-9);
    assert!(res.delta.norm() < 1e-9);

    let r = RationalApprox::new(7, 3, 5, 1e-5, 1e-9).unwrap();
    let res = approx_at_anchor(10_000, &r).unwrap();
    assert!(res.delta.norm() <= 10.0 * res.delta_budget, "{}", res.ratio());
}

#[test]
fn delta_stays_within_ten_budgets() {
    for n in [400u64, 2_500, 10_000] {
        let q_max = (n as f64).sqrt().min(20.0) as u64;
        let rows = anchored_sweep(n, q_max, 300, n).unwrap();
        let sup = rows.iter().map(|r| r.result.ratio()).fold(0.0, f64::max);
        assert!(sup <= 10.0, "N = {n}: sup ratio {sup}");
    }
}

#[test]
fn complete_sums_reproduce_exactly() {
    for n in [60u64, 360, 2520] {
        for r in complete_sum_rows(n, 20).unwrap() {
            assert!(r.result.delta.norm() <= 1e-8 * n as f64, "N = {n}, {:?}", r.anchor);
        }
    }
}

fn near_rational() -> impl Strategy<Value = (f64, f64)> {
    (1u64..60, 0u64..1000, 0u64..1000, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(q, a1, a2, u, v)| {
        let qf = q as f64;
        ((a1 % q) as f64 / qf + u * 1e-6, (a2 % q) as f64 / qf + v * 1e-6)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn search_returns_the_least_q((x, t) in near_rational(), q_max in 1u64..1000, e in 0u32..3) {
        let eps = [1e-6, 3e-5, 1e-3][e as usize];
        let want = scan(x, t, q_max, eps, eps);
        prop_assume!(want.is_some());
        let got = find_rational_approx(x, t, q_max, eps, eps);
        match (want.unwrap(), got) {
            (None, None) => {}
            (Some((q, a1, a2)), Some(r)) => {
                prop_assert_eq!((r.q, r.a1, r.a2), (q, a1, a2));
                prop_assert_eq!(gcd(gcd(r.q, r.a1.unsigned_abs()), r.a2.unsigned_abs()), 1);
                prop_assert!((x - r.a1 as f64 / r.q as f64 - r.beta1).abs() < 1e-15);
                prop_assert!((t - r.a2 as f64 / r.q as f64 - r.beta2).abs() < 1e-15);
            }
            (w, g) => prop_assert!(false, "scan {:?} vs search {:?}", w, g),
        }
    }
}
