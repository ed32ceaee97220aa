//! The oscillatory integral `I(beta) = int_0^N e(beta1 g + beta2 g^2) dg`,
//! Fresnel integrals `int_{-X}^{X} e(A g^2) dg`, and an adaptive
//! Gauss–Kronrod path used to cross-check both.

use crate::error::{Error, Result};
use crate::numeric::{unit_phase, ComplexSum, DoubleDouble};
use crate::rng::sample_stream;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

/// Frequencies `(beta1, beta2)` of the phase `beta1 g + beta2 g^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqPair {
    pub beta1: f64,
    pub beta2: f64,
}

impl FreqPair {
    pub fn new(beta1: f64, beta2: f64) -> Result<Self> {
        if !beta1.is_finite() || !beta2.is_finite() {
            return Err(Error::OutOfRange(format!(
                "frequencies must be finite: ({beta1}, {beta2})"
            )));
        }
        Ok(Self { beta1, beta2 })
    }

    pub fn conj(self) -> Self {
        Self {
            beta1: -self.beta1,
            beta2: -self.beta2,
        }
    }

    /// `1 + |beta1| N + |beta2| N^2`.
    pub fn major_arc_scale(&self, n: u64) -> f64 {
        let nf = n as f64;
        1.0 + self.beta1.abs() * nf + self.beta2.abs() * nf * nf
    }
}

// ---------------------------------------------------------------------------
// Fresnel function G(z) = int_0^z e(u^2) du
// ---------------------------------------------------------------------------

/// `G(+inf) = e(1/8) / (2 sqrt 2) = (1 + i) / 4`.
pub const FRESNEL_LIMIT: Complex64 = Complex64::new(0.25, 0.25);

/// Below this argument `G` is summed from its power series; above it the
/// tail is taken from a continued fraction.
const SERIES_CUTOFF: f64 = 0.75;

fn fresnel_series(z: f64) -> Complex64 {
    // sum_k (2 pi i z^2)^k / k! * z / (2k + 1)
    let w = Complex64::new(0.0, TAU * z * z);
    let mut power = Complex64::new(z, 0.0);
    let mut acc = Complex64::new(z, 0.0);
    for k in 1..200 {
        power = power * w / k as f64;
        let term = power / (2 * k + 1) as f64;
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1e-300) {
            break;
        }
    }
    acc
}

/// `H(z)` with `G(z) = G(inf) - e(z^2) H(z)` for `z >= SERIES_CUTOFF`;
/// `|H(z)|` is about `1 / (4 pi z)`.
fn fresnel_tail(z: f64) -> Complex64 {
    // Modified Lentz evaluation of the continued fraction for the
    // complementary error function along the Fresnel ray, in the variable
    // x = 2 z of the classical C(x), S(x).
    let x = 2.0 * z;
    let pix2 = PI * x * x;
    let tiny = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, -pix2);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0f64;
    for _ in 2..10_000 {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += Complex64::new(4.0, 0.0);
        d = one / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h * z
}

/// `int_0^z e(u^2) du` for real `z` (odd in `z`).
pub fn fresnel_g(z: f64) -> Complex64 {
    let a = z.abs();
    let v = if a < SERIES_CUTOFF {
        fresnel_series(a)
    } else {
        FRESNEL_LIMIT - unit_phase(a * a) * fresnel_tail(a)
    };
    if z < 0.0 {
        -v
    } else {
        v
    }
}

/// `int_{-X}^{X} e(A g^2) dg = 2 G(X sqrt A) / sqrt A`.
pub fn fresnel_integral(a: f64, x: f64) -> Result<Complex64> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "Fresnel coefficient A must be positive, got {a}"
        )));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::OutOfRange(format!("half-width X must be nonnegative, got {x}")));
    }
    let s = a.sqrt();
    Ok(fresnel_g(x * s) * (2.0 / s))
}

/// Main term `e(1/8) (2A)^(-1/2)` of `int_{-X}^{X} e(A g^2) dg`.
pub fn fresnel_main_term(a: f64) -> Complex64 {
    let e8 = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    e8 / (2.0 * a).sqrt()
}

/// Both normalised residuals `|F(A, X) - main| * A X`: against the corrected
/// main term `e(1/8)(2A)^(-1/2)` and against the real value `1/(2 sqrt A)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelResidual {
    pub a: f64,
    pub x: f64,
    pub value: Complex64,
    pub corrected: f64,
    pub stated: f64,
}

pub fn fresnel_residuals(a: f64, x: f64) -> Result<FresnelResidual> {
    let value = fresnel_integral(a, x)?;
    let ax = a * x;
    if ax < 1.0 {
        return Err(Error::OutOfRange(format!(
            "A X = {ax} < 1 makes the error bound vacuous"
        )));
    }
    let corrected = (value - fresnel_main_term(a)).norm() * ax;
    let stated = (value - Complex64::new(0.5 / a.sqrt(), 0.0)).norm() * ax;
    Ok(FresnelResidual {
        a,
        x,
        value,
        corrected,
        stated,
    })
}

/// Empirical `|lambda|` against the corrected main term.
pub fn fresnel_residual(a: f64, x: f64) -> Result<f64> {
    Ok(fresnel_residuals(a, x)?.corrected)
}

/// Default sweep: `A = 10^(-4 + k/2)` for `k = 0..=8` and `A X^2 = 10^(1 + m/8)`
/// for `m = 0..=24`, keeping only points with `A X >= 1`.
pub fn fresnel_sweep() -> Vec<FresnelResidual> {
    let mut grid = Vec::new();
    for k in 0..=8 {
        let a = 10f64.powf(-4.0 + k as f64 / 2.0);
        for m in 0..=24 {
            let ax2 = 10f64.powf(1.0 + m as f64 / 8.0);
            let x = (ax2 / a).sqrt();
            if a * x >= 1.0 {
                grid.push((a, x));
            }
        }
    }
    grid.into_par_iter()
        .map(|(a, x)| fresnel_residuals(a, x).expect("sweep points satisfy A X >= 1"))
        .collect()
}

// ---------------------------------------------------------------------------
// I(beta)
// ---------------------------------------------------------------------------

/// Below this value of `|beta1| N + |beta2| N^2` a cubic Taylor expansion of
/// the integrand is exact to double precision.
const TAYLOR_LIMIT: f64 = 1e-6;

fn i_beta_taylor(b1: f64, b2: f64, n: f64) -> Complex64 {
    // phi = 2 pi (b1 g + b2 g^2); int (1 + i phi - phi^2/2 - i phi^3/6)
    let m1 = TAU * (b1 * n * n / 2.0 + b2 * n.powi(3) / 3.0);
    let m2 = TAU * TAU * (b1 * b1 * n.powi(3) / 3.0 + b1 * b2 * n.powi(4) / 2.0 + b2 * b2 * n.powi(5) / 5.0);
    let m3 = TAU.powi(3)
        * (b1.powi(3) * n.powi(4) / 4.0
            + 3.0 * b1 * b1 * b2 * n.powi(5) / 5.0
            + b1 * b2 * b2 * n.powi(6) / 2.0
            + b2.powi(3) * n.powi(7) / 7.0);
    Complex64::new(n - m2 / 2.0, m1 - m3 / 6.0)
}

fn i_beta_linear(b1: f64, n: f64) -> Complex64 {
    let half = DoubleDouble::from_f64(b1).mul_f64(n / 2.0).frac_centered().to_f64();
    unit_phase(half) * ((PI * b1 * n).sin() / (PI * b1))
}

/// `(beta1 N + beta2 N^2) mod 1`.
fn end_phase(b1: f64, b2: f64, n: f64) -> f64 {
    (DoubleDouble::from_f64(b1).mul_f64(n) + DoubleDouble::from_f64(b2).mul_f64(n * n))
        .frac_centered()
        .to_f64()
}

/// Completed-square evaluation for `beta2 > 0`.
///
/// With `s = sqrt(beta2)`, `z1 = beta1 / (2 s)` and `z2 = z1 + s N`,
/// `I = e(-z1^2) (G(z2) - G(z1)) / s`. Where the arguments are large the
/// tail form of `G` is used and the common `G(inf)` parts are cancelled
/// analytically, so no phase larger than `beta1 N + beta2 N^2` is ever formed.
fn i_beta_fresnel(b1: f64, b2: f64, n: f64) -> Complex64 {
    let s = b2.sqrt();
    let z1 = b1 / (2.0 * s);
    let z2 = z1 + s * n;
    let big = SERIES_CUTOFF;
    let e_end = unit_phase(end_phase(b1, b2, n));
    let scaled = if z1 >= big {
        fresnel_tail(z1) - e_end * fresnel_tail(z2)
    } else if z2 <= -big {
        e_end * fresnel_tail(-z2) - fresnel_tail(-z1)
    } else {
        let rot = unit_phase(-(z1 * z1));
        // e(-z1^2) G(z) for either endpoint; `shift` is e(z^2 - z1^2).
        let term = |z: f64, shift: Complex64| -> Complex64 {
            let a = z.abs();
            let v = if a < big {
                rot * fresnel_series(a)
            } else {
                FRESNEL_LIMIT * rot - shift * fresnel_tail(a)
            };
            if z < 0.0 {
                -v
            } else {
                v
            }
        };
        term(z2, e_end) - term(z1, Complex64::new(1.0, 0.0))
    };
    scaled / s
}

/// `I(beta) = int_0^N e(beta1 g + beta2 g^2) dg`.
pub fn i_beta(beta: FreqPair, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::OutOfRange("N must be positive".into()));
    }
    let nf = n as f64;
    let (b1, b2) = (beta.beta1, beta.beta2);
    let v = if b1.abs() * nf + b2.abs() * nf * nf <= TAYLOR_LIMIT {
        i_beta_taylor(b1, b2, nf)
    } else if b2 == 0.0 {
        i_beta_linear(b1, nf)
    } else if b2 > 0.0 {
        i_beta_fresnel(b1, b2, nf)
    } else {
        i_beta_fresnel(-b1, -b2, nf).conj()
    };
    assert!(
        v.is_finite() && v.norm() <= nf * (1.0 + 1e-9),
        "|I({b1}, {b2})| = {} exceeds N = {n}",
        v.norm()
    );
    Ok(v)
}

/// `|I(beta)| (1 + |beta1| N + |beta2| N^2)^(1/2) / N`.
pub fn i_bound_ratio(beta: FreqPair, n: u64) -> Result<f64> {
    let v = i_beta(beta, n)?;
    Ok(v.norm() * beta.major_arc_scale(n).sqrt() / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IBoundRow {
    pub n: u64,
    pub beta: FreqPair,
    pub abs_i: f64,
    pub ratio: f64,
}

/// Ratios over `|beta1| <= 10/N`, `|beta2| <= 10/N^2`: the nine corner/edge
/// points of that box followed by `samples` seeded uniform draws, per `N`.
pub fn ibound_sweep(ns: &[u64], samples: u64, seed: u64) -> Result<Vec<IBoundRow>> {
    let mut jobs = Vec::new();
    for (k, &n) in ns.iter().enumerate() {
        let nf = n as f64;
        let (r1, r2) = (10.0 / nf, 10.0 / (nf * nf));
        for i in -1..=1 {
            for j in -1..=1 {
                jobs.push((
                    n,
                    FreqPair {
                        beta1: i as f64 * r1,
                        beta2: j as f64 * r2,
                    },
                ));
            }
        }
        for s in 0..samples {
            let mut rng = sample_stream(seed, ((k as u64) << 40) | s);
            let b1 = rng.random_range(-r1..=r1);
            let b2 = rng.random_range(-r2..=r2);
            jobs.push((n, FreqPair { beta1: b1, beta2: b2 }));
        }
    }
    jobs.into_par_iter()
        .map(|(n, beta)| {
            let v = i_beta(beta, n)?;
            Ok(IBoundRow {
                n,
                beta,
                abs_i: v.norm(),
                ratio: v.norm() * beta.major_arc_scale(n).sqrt() / n as f64,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Adaptive Gauss–Kronrod quadrature
// ---------------------------------------------------------------------------

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

fn adapt<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32, acc: &mut ComplexSum) {
    let (v, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        acc.add(v);
        return;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, tol / 2.0, depth - 1, acc);
    adapt(f, m, b, tol / 2.0, depth - 1, acc);
}

/// `int_lo^hi e(beta1 g + beta2 g^2) dg` by Gauss–Kronrod panels no wider
/// than a quarter of the local oscillation period, with the stationary point
/// `-beta1 / (2 beta2)` as a forced panel boundary.
pub fn quadrature_interval(beta: FreqPair, lo: f64, hi: f64, panel_tol: f64) -> Complex64 {
    let (b1, b2) = (beta.beta1, beta.beta2);
    let f = |g: f64| unit_phase(b1 * g + b2 * g * g);
    let mut cuts = vec![lo];
    if b2 != 0.0 {
        let g0 = -b1 / (2.0 * b2);
        if g0 > lo && g0 < hi {
            cuts.push(g0);
        }
    }
    cuts.push(hi);
    let floor = 1.0 / (hi - lo).max(1e-300);
    let mut acc = ComplexSum::new();
    for seg in cuts.windows(2) {
        let (mut a, end) = (seg[0], seg[1]);
        while a < end {
            // local frequency |b1 + 2 b2 g| is linear in g: choose w with
            // (|freq(a)| + 2|b2| w + floor) w <= 1/4
            let fa = (b1 + 2.0 * b2 * a).abs() + floor;
            let k = 2.0 * b2.abs();
            let w = 0.5 / (fa + (fa * fa + k).sqrt());
            let w = w.max(1e-12 * (hi - lo));
            let b = (a + w).min(end);
            adapt(&f, a, b, panel_tol, 30, &mut acc);
            a = b;
        }
    }
    acc.value()
}

/// Quadrature path for `I(beta)`.
pub fn i_beta_quadrature(beta: FreqPair, n: u64) -> Complex64 {
    quadrature_interval(beta, 0.0, n as f64, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresnel_matches_reference_values() {
        // C(x), S(x) classical values at x = 1.5, 4: G(z) = (C(2z) + i S(2z)) / 2
        let g = fresnel_g(0.75);
        assert!((2.0 * g.re - 0.445_261_176_039_821).abs() < 1e-12, "{g}");
        assert!((2.0 * g.im - 0.697_504_960_082_093).abs() < 1e-12, "{g}");
        let g = fresnel_g(2.0);
        assert!((2.0 * g.re - 0.498_426_033_038_178_1).abs() < 1e-12, "{g}");
        assert!((2.0 * g.im - 0.420_515_754_246_928_6).abs() < 1e-12, "{g}");
        assert!((fresnel_g(-2.0) + fresnel_g(2.0)).norm() < 1e-15);
    }

    #[test]
    fn series_and_tail_agree_at_cutoff() {
        for z in [0.7, 0.75, 0.8, 1.0] {
            let a = fresnel_series(z);
            let b = FRESNEL_LIMIT - unit_phase(z * z) * fresnel_tail(z);
            assert!((a - b).norm() < 1e-13, "z = {z}: {a} vs {b}");
        }
    }

    #[test]
    fn fresnel_integral_basics() {
        assert_eq!(fresnel_integral(1.0, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        assert!(fresnel_integral(0.0, 1.0).is_err());
        assert!(fresnel_integral(-1.0, 1.0).is_err());
        let v = fresnel_integral(1.0, 10.0).unwrap();
        assert!((v - fresnel_main_term(1.0)).norm() <= 7.0 / 12.0 / 10.0);
        for (a, x) in [(0.3, 2.0), (1e-3, 50.0), (4.0, 0.1)] {
            let lhs = fresnel_integral(a, x).unwrap();
            let rhs = fresnel_integral(1.0, x * a.sqrt()).unwrap() / a.sqrt();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn residual_rejects_vacuous_bound() {
        assert!(fresnel_residual(0.01, 10.0).is_err());
        assert!(fresnel_residual(1.0, 10.0).unwrap() <= 7.0 / 12.0);
        assert!(fresnel_residual(1e-4, 1e4).unwrap() <= 7.0 / 12.0);
    }

    #[test]
    fn i_beta_closed_forms() {
        let n = 1000;
        let v = i_beta(FreqPair::new(0.0, 0.0).unwrap(), n).unwrap();
        assert!((v - Complex64::new(1000.0, 0.0)).norm() < 1e-12);
        let b1 = 0.0123;
        let v = i_beta(FreqPair::new(b1, 0.0).unwrap(), n).unwrap();
        let want = unit_phase(b1 * 500.0) * ((PI * b1 * 1000.0).sin() / (PI * b1));
        assert!((v - want).norm() < 1e-10);
        let v = i_beta(FreqPair::new(3e-10, 0.0).unwrap(), n).unwrap();
        let want = unit_phase(3e-10 * 500.0) * ((PI * 3e-7).sin() / (PI * 3e-10));
        assert!((v - want).norm() < 1e-10);
    }

    #[test]
    fn i_beta_against_quadrature() {
        let n = 500;
        let cases = [
            (0.01, 1e-5),
            (-0.02, 3e-5),
            (0.0, 2e-5),
            (1e-4, -4e-5),
            (0.3, 1e-9),
            (1e-7, 1e-12),
            (0.05, -1e-4),
        ];
        for (b1, b2) in cases {
            let beta = FreqPair::new(b1, b2).unwrap();
            let a = i_beta(beta, n).unwrap();
            let b = i_beta_quadrature(beta, n);
            assert!((a - b).norm() < 1e-8 * n as f64, "{beta:?}: {a} vs {b}");
        }
    }

    #[test]
    fn bound_ratio_at_zero() {
        let r = i_bound_ratio(FreqPair::new(0.0, 0.0).unwrap(), 77).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
    }
}
