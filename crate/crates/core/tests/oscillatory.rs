use num_complex::Complex64;
use proptest::prelude::*;
use weylmax::oscillatory::{
    fresnel_integral, fresnel_main_term, fresnel_residual, i_beta, i_beta_quadrature, i_bound_ratio,
    quadrature_interval, FreqPair,
};
use weylmax::weyl::weyl_sum;

fn pair(b1: f64, b2: f64) -> FreqPair {
    FreqPair::new(b1, b2).unwrap()
}

#[test]
fn fresnel_documented_values() {
    assert_eq!(fresnel_integral(1.0, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    let v = fresnel_integral(1.0, 10.0).unwrap();
    let main = Complex64::from_polar(0.5f64.sqrt(), std::f64::consts::TAU / 8.0);
    assert!((fresnel_main_term(1.0) - main).norm() < 1e-15);
    assert!((v - main).norm() <= 0.0584, "{v}");
    // an independent path: panel quadrature of e(A y^2) on [-X, X]
    let q = quadrature_interval(pair(0.0, 1.0), -10.0, 10.0, 1e-13);
    assert!((v - q).norm() < 1e-10, "{v} vs {q}");
    let scaled = fresnel_integral(1.0, 10.0 * 0.3f64.sqrt()).unwrap() / 0.3f64.sqrt();
    assert!((fresnel_integral(0.3, 10.0).unwrap() - scaled).norm() < 1e-12);
    assert!(fresnel_residual(1.0, 10.0).unwrap() <= 7.0 / 12.0);
    assert!(fresnel_residual(1e-4, 1e4).unwrap() <= 7.0 / 12.0);
}

#[test]
fn i_beta_documented_values() {
    let n = 10_000u64;
    let nf = n as f64;
    assert!((i_beta(pair(0.0, 0.0), n).unwrap() - Complex64::new(nf, 0.0)).norm() < 1e-9);
    assert!((i_bound_ratio(pair(0.0, 0.0), 100).unwrap() - 1.0).abs() < 1e-14);
    let r = i_bound_ratio(pair(0.0, 1e-4), 100).unwrap();
    assert!(r <= 3.0, "{r}");

    // beta = (15/N, -15/N^2): the leading term sqrt(N^2/30) ignores the
    // lambda/(AX) correction, which is about 8% at A X = 7.5; the value
    // itself is pinned by quadrature
    let beta = pair(15.0 / nf, -15.0 / (nf * nf));
    let v = i_beta(beta, n).unwrap();
    let q = i_beta_quadrature(beta, n);
    assert!((v - q).norm() <= 1e-6 * nf, "{v} vs {q}");
    assert!((v.norm() / nf - 0.16862).abs() < 5e-5, "{}", v.norm() / nf);
    let leading = (nf * nf / 30.0).sqrt();
    assert!((v.norm() - leading).abs() > 0.05 * leading);
}

/// `beta` in the major-arc box for a random `q <= 20` and `N`.
fn major_arc_beta() -> impl Strategy<Value = (u64, FreqPair)> {
    (100u64..=10_000, 1u64..=20, -1.0f64..=1.0, -1.0f64..=1.0).prop_map(|(n, q, u, v)| {
        let (nf, qf) = (n as f64, q as f64);
        (n, pair(u / (qf * nf.sqrt()), v / (qf * nf * nf.sqrt())))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn completed_square_matches_quadrature((n, beta) in major_arc_beta()) {
        let a = i_beta(beta, n).unwrap();
        let b = i_beta_quadrature(beta, n);
        prop_assert!((a - b).norm() <= 1e-6 * n as f64, "{:?}: {} vs {}", beta, a, b);
    }

    #[test]
    fn conjugation_and_trivial_bound(b1 in -0.1f64..0.1, b2 in -1e-3f64..1e-3, n in 1u64..100_000) {
        let v = i_beta(pair(b1, b2), n).unwrap();
        let w = i_beta(pair(-b1, -b2), n).unwrap();
        prop_assert!((v.conj() - w).norm() <= 1e-12 * n as f64);
        prop_assert!(v.norm() <= n as f64 * (1.0 + 1e-9));
    }

    #[test]
    fn riemann_sum_consistency(n in 10u64..5000, u in 0.0f64..1.0, s in -1.0f64..1.0, sign in prop::bool::ANY) {
        // |beta1| N + |beta2| N^2 <= 1/10
        let nf = n as f64;
        let b1 = if sign { 1.0 } else { -1.0 } * u * 0.05 / nf;
        let b2 = s * 0.05 / (nf * nf);
        let sum = weyl_sum(b1, b2, n).unwrap();
        let int = i_beta(pair(b1, b2), n).unwrap();
        prop_assert!((sum - int).norm() <= 10.0, "{} vs {}", sum, int);
    }
}
