//! Major-arc anchors: the approximation `S(x, t) ~ q^-1 S(q, a) I(beta)`, a
//! brute-force simultaneous rational approximation search, and the sampling
//! experiments built on both.

use crate::arith::{gcd, gcd3};
use crate::error::{Error, Result};
use crate::gauss::{gauss_sum_direct, GaussSpec};
use crate::numeric::DoubleDouble;
use crate::oscillatory::{i_beta, FreqPair};
use crate::rng::sample_stream;
use crate::weyl::{weyl_sum_dd, weyl_sum_exact_grid, ComplexValue, RationalGridPoint};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

/// A rational point `(a1/q, a2/q)` together with the offsets of `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalApprox {
    pub q: u64,
    pub a1: i64,
    pub a2: i64,
    pub beta1: f64,
    pub beta2: f64,
}

impl RationalApprox {
    pub fn new(q: u64, a1: i64, a2: i64, beta1: f64, beta2: f64) -> Result<Self> {
        if q == 0 {
            return Err(Error::OutOfRange("anchor denominator must be positive".into()));
        }
        if gcd3(q, a1.unsigned_abs(), a2.unsigned_abs()) != 1 {
            return Err(Error::InconsistentAnchor(format!("gcd({q}, {a1}, {a2}) != 1")));
        }
        if !beta1.is_finite() || !beta2.is_finite() {
            return Err(Error::InconsistentAnchor("offsets must be finite".into()));
        }
        Ok(Self {
            q,
            a1,
            a2,
            beta1,
            beta2,
        })
    }

    pub fn beta(&self) -> FreqPair {
        FreqPair {
            beta1: self.beta1,
            beta2: self.beta2,
        }
    }

    /// `a1/q + beta1` and `a2/q + beta2` in double-double.
    pub fn point_dd(&self) -> Result<(DoubleDouble, DoubleDouble)> {
        let r1 = DoubleDouble::from_ratio(self.a1, self.q)
            .ok_or_else(|| Error::InconsistentAnchor(format!("a1/q = {}/{} too large", self.a1, self.q)))?;
        let r2 = DoubleDouble::from_ratio(self.a2, self.q)
            .ok_or_else(|| Error::InconsistentAnchor(format!("a2/q = {}/{} too large", self.a2, self.q)))?;
        Ok((
            r1 + DoubleDouble::from_f64(self.beta1),
            r2 + DoubleDouble::from_f64(self.beta2),
        ))
    }

    pub fn gauss(&self) -> Complex64 {
        let q = self.q as i64;
        let spec = GaussSpec {
            q: self.q,
            a1: self.a1.rem_euclid(q) as u64,
            a2: self.a2.rem_euclid(q) as u64,
        };
        gauss_sum_direct(spec)
    }

    /// `q (1 + |beta1| N + |beta2| N^2)`.
    pub fn delta_budget(&self, n: u64) -> f64 {
        self.q as f64 * self.beta().major_arc_scale(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxResult {
    pub approx: ComplexValue,
    pub truth: ComplexValue,
    pub delta: ComplexValue,
    pub delta_budget: f64,
}

impl ApproxResult {
    pub fn ratio(&self) -> f64 {
        self.delta.norm() / self.delta_budget
    }
}

const ANCHOR_TOLERANCE: f64 = 1e-15;

/// Compare `truth = S(x, t)` with `q^-1 S(q, a) I(beta)`.
pub fn approx_weyl(x: f64, t: f64, n: u64, anchor: &RationalApprox) -> Result<ApproxResult> {
    let (xa, ta) = anchor.point_dd()?;
    let dx = (DoubleDouble::from_f64(x) - xa).to_f64();
    let dt = (DoubleDouble::from_f64(t) - ta).to_f64();
    if dx.abs() > ANCHOR_TOLERANCE || dt.abs() > ANCHOR_TOLERANCE {
        return Err(Error::InconsistentAnchor(format!(
            "(x, t) differs from a/q + beta by ({dx:e}, {dt:e})"
        )));
    }
    let truth = weyl_sum_dd(DoubleDouble::from_f64(x), DoubleDouble::from_f64(t), n)?;
    finish(truth, n, anchor)
}

/// As [`approx_weyl`] at the point `a/q + beta` itself, formed in
/// double-double so no rounding of `x` or `t` enters.
pub fn approx_at_anchor(n: u64, anchor: &RationalApprox) -> Result<ApproxResult> {
    let truth = if anchor.beta1 == 0.0 && anchor.beta2 == 0.0 {
        let xp = RationalGridPoint::wrapped(anchor.a1, anchor.q)?;
        let tp = RationalGridPoint::wrapped(anchor.a2, anchor.q)?;
        weyl_sum_exact_grid(xp, tp, n)?
    } else {
        let (x, t) = anchor.point_dd()?;
        weyl_sum_dd(x, t, n)?
    };
    finish(truth, n, anchor)
}

fn finish(truth: Complex64, n: u64, anchor: &RationalApprox) -> Result<ApproxResult> {
    let approx = anchor.gauss() / anchor.q as f64 * i_beta(anchor.beta(), n)?;
    Ok(ApproxResult {
        approx,
        truth,
        delta: truth - approx,
        delta_budget: anchor.delta_budget(n),
    })
}

/// Smallest `q <= q_max` with `||q x|| <= eps1` and `||q t|| <= eps2`.
///
/// `a1`, `a2` are the nearest integers to `q x`, `q t`. The minimal `q`
/// already has `gcd(q, a1, a2) = 1` (a common factor `g` would make `q / g`
/// qualify too), so no normalisation is needed beyond a check.
pub fn find_rational_approx(x: f64, t: f64, q_max: u64, eps1: f64, eps2: f64) -> Option<RationalApprox> {
    let xd = DoubleDouble::from_f64(x);
    let td = DoubleDouble::from_f64(t);
    for q in 1..=q_max {
        let r1 = xd.mul_u64_mod1(q).to_f64();
        if r1.abs() > eps1 {
            continue;
        }
        let r2 = td.mul_u64_mod1(q).to_f64();
        if r2.abs() > eps2 {
            continue;
        }
        let qf = q as f64;
        let a1 = (qf * x - r1).round() as i64;
        let a2 = (qf * t - r2).round() as i64;
        debug_assert_eq!(gcd(gcd(q, a1.unsigned_abs()), a2.unsigned_abs()), 1);
        return Some(RationalApprox {
            q,
            a1,
            a2,
            beta1: r1 / qf,
            beta2: r2 / qf,
        });
    }
    None
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// Search windows `Qmax = C (N/P)^2 N^0.01`, `eps1 = Qmax / N`,
/// `eps2 = Qmax / N^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorWindows {
    pub q_max: u64,
    pub eps1: f64,
    pub eps2: f64,
}

pub fn anchor_windows(n: u64, p: f64, c: f64) -> AnchorWindows {
    let nf = n as f64;
    let base = c * (nf / p).powi(2) * nf.powf(0.01);
    AnchorWindows {
        q_max: base.floor().max(1.0) as u64,
        eps1: base / nf,
        eps2: base / (nf * nf),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Row {
    pub index: u64,
    pub x: f64,
    pub t: f64,
    pub abs_s: f64,
    pub anchor: Option<RationalApprox>,
    pub result: Option<ApproxResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    pub n: u64,
    pub p: f64,
    pub c: f64,
    pub windows: AnchorWindows,
    pub draws: u64,
    pub rows: Vec<Lemma1Row>,
}

impl Lemma1Report {
    pub fn kept(&self) -> usize {
        self.rows.len()
    }

    pub fn successes(&self) -> usize {
        self.rows.iter().filter(|r| r.anchor.is_some()).count()
    }

    pub fn success_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.successes() as f64 / self.rows.len() as f64
    }
}

/// Constant multiplying the search windows in [`lemma1_experiment`].
pub const LEMMA1_C: f64 = 10.0;

/// Draw sample `index`: a quarter of the draws are uniform on the unit
/// square, the rest sit within `4/N`, `4/N^2` of a random `a/q` with
/// `q <= 4 (N/P)^2`, where large values of `|S|` actually occur.
fn draw_point(seed: u64, index: u64, n: u64, p: f64) -> (f64, f64) {
    let mut rng = sample_stream(seed, index);
    let nf = n as f64;
    if rng.random_range(0..4u32) == 0 {
        return (rng.random::<f64>(), rng.random::<f64>());
    }
    let q_hi = (4.0 * (nf / p).powi(2)).floor().max(1.0) as u64;
    let q = rng.random_range(1..=q_hi);
    let a1 = rng.random_range(0..q);
    let a2 = rng.random_range(0..q);
    let b1 = rng.random_range(-4.0..=4.0) / nf;
    let b2 = rng.random_range(-4.0..=4.0) / (nf * nf);
    let x = (a1 as f64 / q as f64 + b1).rem_euclid(1.0);
    let t = (a2 as f64 / q as f64 + b2).rem_euclid(1.0);
    (x, t)
}

/// Keeps sampled `(x, t)` with `|S(x, t)| >= P` until `samples` are kept (or
/// `max_draws` are exhausted) and searches an anchor for each inside the
/// windows of [`anchor_windows`].
pub fn lemma1_experiment(n: u64, p: f64, samples: u64, seed: u64, max_draws: u64) -> Result<Lemma1Report> {
    if n == 0 || n > 100_000 {
        return Err(Error::OutOfRange(format!("experiment needs 1 <= N <= 1e5, got {n}")));
    }
    if p < (n as f64).sqrt() {
        return Err(Error::OutOfRange(format!("threshold P = {p} is below N^(1/2)")));
    }
    let windows = anchor_windows(n, p, LEMMA1_C);
    let mut rows = Vec::new();
    let mut next = 0u64;
    // draw in fixed-size chunks; the kept set depends only on the seed
    const CHUNK: u64 = 256;
    while (rows.len() as u64) < samples && next < max_draws {
        let end = (next + CHUNK).min(max_draws);
        let chunk: Vec<Option<Lemma1Row>> = (next..end)
            .into_par_iter()
            .map(|i| {
                let (x, t) = draw_point(seed, i, n, p);
                let s = weyl_sum_dd(DoubleDouble::from_f64(x), DoubleDouble::from_f64(t), n)?;
                if s.norm() < p {
                    return Ok(None);
                }
                let anchor = find_rational_approx(x, t, windows.q_max, windows.eps1, windows.eps2);
                let result = anchor.as_ref().map(|a| approx_weyl(x, t, n, a)).transpose()?;
                Ok(Some(Lemma1Row {
                    index: i,
                    x,
                    t,
                    abs_s: s.norm(),
                    anchor,
                    result,
                }))
            })
            .collect::<Result<_>>()?;
        for row in chunk.into_iter().flatten() {
            if (rows.len() as u64) < samples {
                rows.push(row);
            }
        }
        next = end;
    }
    Ok(Lemma1Report {
        n,
        p,
        c: LEMMA1_C,
        windows,
        draws: next,
        rows,
    })
}

/// One anchored comparison of the approximation sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchoredRow {
    pub anchor: RationalApprox,
    pub result: ApproxResult,
}

/// Random anchors with `q <= q_max`, primitive `(a1, a2)`, and offsets
/// `|beta1| <= q^-1 N^-1/2`, `|beta2| <= q^-1 N^-3/2`.
pub fn anchored_sweep(n: u64, q_max: u64, samples: u64, seed: u64) -> Result<Vec<AnchoredRow>> {
    let nf = n as f64;
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(seed, i);
            let q = rng.random_range(1..=q_max);
            let (a1, a2) = loop {
                let a1 = rng.random_range(0..q);
                let a2 = rng.random_range(0..q);
                if gcd3(q, a1, a2) == 1 {
                    break (a1, a2);
                }
            };
            let qf = q as f64;
            let b1 = rng.random_range(-1.0..=1.0) / (qf * nf.sqrt());
            let b2 = rng.random_range(-1.0..=1.0) / (qf * nf * nf.sqrt());
            let anchor = RationalApprox::new(q, a1 as i64, a2 as i64, b1, b2)?;
            Ok(AnchoredRow {
                anchor,
                result: approx_at_anchor(n, &anchor)?,
            })
        })
        .collect()
}

/// Every primitive `a/q` with `q | N`, `q <= q_max` and `beta = 0`.
pub fn complete_sum_rows(n: u64, q_max: u64) -> Result<Vec<AnchoredRow>> {
    let mut anchors = Vec::new();
    for q in (1..=q_max).filter(|q| n.is_multiple_of(*q)) {
        for a1 in 0..q {
            for a2 in 0..q {
                if gcd3(q, a1, a2) == 1 {
                    anchors.push(RationalApprox::new(q, a1 as i64, a2 as i64, 0.0, 0.0)?);
                }
            }
        }
    }
    anchors
        .into_par_iter()
        .map(|anchor| {
            Ok(AnchoredRow {
                anchor,
                result: approx_at_anchor(n, &anchor)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_anchor() {
        let a = RationalApprox::new(1, 0, 0, 0.0, 0.0).unwrap();
        let r = approx_weyl(0.0, 0.0, 50, &a).unwrap();
        assert!((r.truth - Complex64::new(50.0, 0.0)).norm() < 1e-12);
        assert!((r.approx - Complex64::new(50.0, 0.0)).norm() < 1e-12);
        assert!(r.delta.norm() < 1e-12);
    }

    #[test]
    fn complete_periodicity() {
        let a = RationalApprox::new(3, 1, 1, 0.0, 0.0).unwrap();
        let r = approx_at_anchor(300, &a).unwrap();
        assert!((r.truth - Complex64::new(150.0, -86.602_540_378_443_86)).norm() < 1e-9);
        assert!(r.delta.norm() < 1e-9);
    }

    #[test]
    fn inconsistent_anchor_rejected() {
        let a = RationalApprox::new(3, 1, 1, 0.0, 0.0).unwrap();
        assert!(matches!(
            approx_weyl(0.5, 1.0 / 3.0, 10, &a),
            Err(Error::InconsistentAnchor(_))
        ));
        assert!(RationalApprox::new(4, 2, 2, 0.0, 0.0).is_err());
    }

    #[test]
    fn search_examples() {
        let r = find_rational_approx(1.0 / 3.0, 0.4, 20, 1e-9, 1e-9).unwrap();
        assert_eq!((r.q, r.a1, r.a2), (15, 5, 6));
        assert!(r.beta1.abs() < 1e-15 && r.beta2.abs() < 1e-15);
        let r = find_rational_approx(0.0, 0.0, 5, 1e-9, 1e-9).unwrap();
        assert_eq!((r.q, r.a1, r.a2), (1, 0, 0));
        let r = find_rational_approx(0.5 + 1e-9, 1.0 / 3.0, 10, 1e-7, 1e-7).unwrap();
        assert_eq!((r.q, r.a1, r.a2), (6, 3, 2));
        assert!((r.beta1 - 1e-9).abs() < 2e-16, "{}", r.beta1);
        assert!(find_rational_approx(0.123_456_7, 0.765_432_1, 10, 1e-9, 1e-9).is_none());
    }

    #[test]
    fn windows_shape() {
        let w = anchor_windows(10_000, 10_000f64.powf(0.85), 10.0);
        assert!(w.q_max >= 170 && w.q_max <= 175, "{w:?}");
        assert!((w.eps1 * 1e4 - w.eps2 * 1e8).abs() < 1e-9);
    }
}
