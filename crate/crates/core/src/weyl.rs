//! Quadratic Weyl sums `S(x, t) = sum_{n=1}^N e(n x + n^2 t)`.
//!
//! Three evaluation paths share this module:
//!
//! * arbitrary real `(x, t)` held as double-doubles, with phases reduced
//!   modulo one before any trigonometric call and a two-multiplier
//!   recurrence between resynchronisation points;
//! * exact rational grid points, where every phase is an integer residue;
//! * batch evaluation over `x = j / M` for a fixed rational `t` through one
//!   FFT of the folded coefficient vector.

use crate::error::{Error, Result};
use crate::numeric::{unit_phase, unit_phase_ratio, ComplexSum, DoubleDouble};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

pub type ComplexValue = Complex64;

/// Largest supported number of terms.
pub const MAX_TERMS: u64 = 1 << 31;

/// The recurrence is restarted from a directly reduced phase this often;
/// the phase drift inside a block stays below `RESYNC_BLOCK^2` ulps.
pub const RESYNC_BLOCK: u64 = 64;

/// Bound on the floating-point error of one evaluation of `S` with `n` terms.
pub fn evaluation_error_bound(n: u64) -> f64 {
    1e-12 * n as f64
}

/// Exact point `num / den` of the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalGridPoint {
    num: u64,
    den: u64,
}

impl RationalGridPoint {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num >= den {
            return Err(Error::InvalidGridPoint { num: num as i64, den });
        }
        Ok(Self { num, den })
    }

    /// The representative of `num / den` modulo one.
    pub fn wrapped(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidGridPoint { num, den });
        }
        let r = (num as i128).rem_euclid(den as i128) as u64;
        Ok(Self { num: r, den })
    }

    pub const ZERO: Self = Self { num: 0, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Double-double image; `None` when the denominator is too large for an
    /// exact remainder.
    pub fn to_dd(&self) -> Option<DoubleDouble> {
        DoubleDouble::from_ratio(self.num as i64, self.den)
    }
}

fn check_terms(n: u64) -> Result<()> {
    if n == 0 || n > MAX_TERMS {
        return Err(Error::OutOfRange(format!(
            "number of terms must lie in [1, 2^31], got {n}"
        )));
    }
    Ok(())
}

fn check_finite(v: f64, name: &str) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::OutOfRange(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

/// `(n x + n^2 t) mod 1` in `[-1/2, 1/2]`.
#[inline]
fn reduced_phase(x: DoubleDouble, t: DoubleDouble, n: u64) -> f64 {
    let a = x.mul_u64_mod1(n);
    let b = t.mul_u64_mod1(n * n);
    (a + b).frac_centered().to_f64()
}

/// Shared kernel: `S` and optionally `sum n^2 e(theta_n)`.
fn kernel(x: DoubleDouble, t: DoubleDouble, n_terms: u64, want_moment: bool) -> (Complex64, Complex64) {
    let step2 = unit_phase(t.mul_u64_mod1(2).to_f64());
    let x_red = x.frac_centered();
    let mut acc = ComplexSum::new();
    let mut moment = ComplexSum::new();
    let mut k = 1u64;
    while k <= n_terms {
        let end = (k + RESYNC_BLOCK - 1).min(n_terms);
        let mut z = unit_phase(reduced_phase(x, t, k));
        let inc = (x_red + t.mul_u64_mod1(2 * k + 1)).frac_centered().to_f64();
        let mut r = unit_phase(inc);
        for m in k..=end {
            acc.add(z);
            if want_moment {
                let w = (m as f64) * (m as f64);
                moment.add(z * w);
            }
            z *= r;
            r *= step2;
        }
        k = end + 1;
    }
    (acc.value(), moment.value())
}

/// `S(x, t)` for real arguments.
pub fn weyl_sum(x: f64, t: f64, n: u64) -> Result<ComplexValue> {
    check_finite(x, "x")?;
    check_finite(t, "t")?;
    weyl_sum_dd(DoubleDouble::from_f64(x), DoubleDouble::from_f64(t), n)
}

/// `S(x, t)` with double-double arguments (used for rational points whose
/// decimal expansion does not terminate).
pub fn weyl_sum_dd(x: DoubleDouble, t: DoubleDouble, n: u64) -> Result<ComplexValue> {
    check_terms(n)?;
    Ok(kernel(x, t, n, false).0)
}

/// `S(x, t)` together with `dS/dt = 2 pi i sum n^2 e(n x + n^2 t)`.
pub fn weyl_sum_and_t_derivative_dd(x: DoubleDouble, t: DoubleDouble, n: u64) -> Result<(ComplexValue, ComplexValue)> {
    check_terms(n)?;
    let (s, m) = kernel(x, t, n, true);
    Ok((s, Complex64::new(0.0, TAU) * m))
}

pub fn weyl_t_derivative(x: f64, t: f64, n: u64) -> Result<ComplexValue> {
    check_finite(x, "x")?;
    check_finite(t, "t")?;
    Ok(weyl_sum_and_t_derivative_dd(DoubleDouble::from_f64(x), DoubleDouble::from_f64(t), n)?.1)
}

/// `sum_{n <= N} n^2 = N(N+1)(2N+1)/6` as a float.
pub fn sum_of_squares(n: u64) -> f64 {
    let n = n as f64;
    n * (n + 1.0) * (2.0 * n + 1.0) / 6.0
}

/// Lipschitz constant of `t -> S(x, t)`: `2 pi sum n^2`.
pub fn t_lipschitz(n: u64) -> f64 {
    TAU * sum_of_squares(n)
}

/// Lipschitz constant of `x -> |S(x, t)|`.
///
/// The derivative of `|S|` is unchanged when `n` is replaced by `n - c`
/// (the extra term is orthogonal to `S`), so
/// `2 pi sum |n - (N+1)/2|` bounds it.
pub fn x_lipschitz_abs(n: u64) -> f64 {
    let nf = n as f64;
    let centred = if n.is_multiple_of(2) {
        nf * nf / 4.0
    } else {
        (nf * nf - 1.0) / 4.0
    };
    TAU * centred
}

/// `S(xp, tp)` using exact integer residues for every phase.
pub fn weyl_sum_exact_grid(xp: RationalGridPoint, tp: RationalGridPoint, n: u64) -> Result<ComplexValue> {
    check_terms(n)?;
    let d = xp.den as u128 * tp.den as u128;
    if d > u64::MAX as u128 {
        return Err(Error::DenominatorOverflow(d));
    }
    // theta_n * D = n * xn * td + n^2 * tn * xd
    let lin = (xp.num as u128 * tp.den as u128) % d;
    let quad = (tp.num as u128 * xp.den as u128) % d;
    let two_quad = (2 * quad) % d;
    // residue of theta_1 and of theta_2 - theta_1 = lin + 3 quad
    let mut phase = (lin + quad) % d;
    let mut step = (lin + 3 * quad) % d;
    let mut acc = ComplexSum::new();
    for _ in 0..n {
        acc.add(unit_phase_ratio(phase, d));
        phase += step;
        if phase >= d {
            phase -= d;
        }
        step += two_quad;
        if step >= d {
            step -= d;
        }
    }
    Ok(acc.value())
}

/// `S(j / M, t)` for `j = 0 .. M` through one inverse FFT of length `M`.
///
/// `S(j/M, t) = sum_r d_r e(r j / M)` with `d_r = sum_{n = r mod M} e(n^2 t)`.
pub fn batch_weyl_over_x(t: RationalGridPoint, n: u64, m: usize) -> Result<Vec<ComplexValue>> {
    check_terms(n)?;
    if m == 0 {
        return Err(Error::OutOfRange("grid size M must be positive".into()));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let td = t.den as u128;
    for k in 1..=n {
        let sq = (k as u128 * k as u128) % td;
        let c = unit_phase_ratio(sq * t.num as u128 % td, td);
        buf[(k % m as u64) as usize] += c;
    }
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(m);
    fft.process(&mut buf);
    Ok(buf)
}

/// Same values as [`batch_weyl_over_x`], one exact-grid sum per node.
pub fn batch_weyl_over_x_naive(t: RationalGridPoint, n: u64, m: usize) -> Result<Vec<ComplexValue>> {
    if m == 0 {
        return Err(Error::OutOfRange("grid size M must be positive".into()));
    }
    (0..m)
        .map(|j| weyl_sum_exact_grid(RationalGridPoint::new(j as u64, m as u64)?, t, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn all_phases_zero() {
        for n in [1u64, 7, 1000, 5000] {
            let s = weyl_sum(0.0, 0.0, n).unwrap();
            assert!(close(s, Complex64::new(n as f64, 0.0), 1e-9));
        }
    }

    #[test]
    fn half_half_is_integral() {
        let s = weyl_sum(0.5, 0.5, 4).unwrap();
        assert!(close(s, Complex64::new(4.0, 0.0), 1e-14));
    }

    #[test]
    fn exact_grid_examples() {
        let z = RationalGridPoint::ZERO;
        let s = weyl_sum_exact_grid(z, z, 5).unwrap();
        assert!(close(s, Complex64::new(5.0, 0.0), 1e-15));
        let third = RationalGridPoint::new(1, 3).unwrap();
        let s = weyl_sum_exact_grid(third, third, 3).unwrap();
        // e(2/3) + e(6/3) + e(12/3) = e(2/3) + 2
        assert!(close(s, Complex64::new(1.5, -(0.75f64).sqrt()), 1e-14), "{s}");
    }

    #[test]
    fn grid_point_validation() {
        assert!(RationalGridPoint::new(3, 3).is_err());
        assert!(RationalGridPoint::new(0, 0).is_err());
        assert_eq!(RationalGridPoint::wrapped(-1, 3).unwrap().num(), 2);
        let big = RationalGridPoint::new(1, u64::MAX).unwrap();
        assert!(matches!(
            weyl_sum_exact_grid(big, RationalGridPoint::new(1, 3).unwrap(), 4),
            Err(Error::DenominatorOverflow(_))
        ));
    }

    #[test]
    fn term_count_is_checked() {
        assert!(weyl_sum(0.1, 0.2, 0).is_err());
        assert!(weyl_sum(0.1, 0.2, MAX_TERMS + 1).is_err());
        assert!(weyl_sum(f64::NAN, 0.2, 3).is_err());
    }

    #[test]
    fn derivative_at_origin() {
        for n in [1u64, 10, 100] {
            let d = weyl_t_derivative(0.0, 0.0, n).unwrap();
            let want = TAU * sum_of_squares(n);
            assert!(d.re.abs() < 1e-9 * want && (d.im - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn fft_batch_at_zero_time() {
        let v = batch_weyl_over_x(RationalGridPoint::ZERO, 4, 4).unwrap();
        assert!(close(v[0], Complex64::new(4.0, 0.0), 1e-14));
        for (j, s) in v.iter().enumerate() {
            let direct: Complex64 = (1..=4).map(|n| unit_phase((n * j) as f64 / 4.0)).sum();
            assert!(close(*s, direct, 1e-13));
        }
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(x_lipschitz_abs(1), 0.0);
        assert!((x_lipschitz_abs(2) - TAU).abs() < 1e-15);
        // 2 pi sum |n - 8.5| for n <= 16 = 2 pi * 64
        assert!((x_lipschitz_abs(16) - TAU * 64.0).abs() < 1e-12);
        assert!((x_lipschitz_abs(3) - TAU * 2.0).abs() < 1e-12);
    }
}
