//! Complete quadratic Gauss sums `S(q, a) = sum_{y=1}^q e((y a1 + y^2 a2) / q)`.

use crate::arith::{gcd, gcd3, mod_inverse};
use crate::error::{Error, Result};
use crate::numeric::{unit_phase_ratio, ComplexSum};
use num_complex::Complex64;
use rayon::prelude::*;

/// Largest modulus accepted by [`gauss_ratio_scan`].
pub const MAX_SCAN_MODULUS: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussSpec {
    pub q: u64,
    pub a1: u64,
    pub a2: u64,
}

impl GaussSpec {
    /// Residues are reduced modulo `q`.
    pub fn new(q: u64, a1: u64, a2: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::OutOfRange("Gauss sum modulus must be positive".into()));
        }
        Ok(Self {
            q,
            a1: a1 % q,
            a2: a2 % q,
        })
    }

    pub fn is_primitive(&self) -> bool {
        gcd3(self.q, self.a1, self.a2) == 1
    }
}

/// Table of `e(k / q)` for `k = 0 .. q`, each entry from its exact angle.
pub struct RootTable {
    q: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(q: u64) -> Self {
        let roots = (0..q).map(|k| unit_phase_ratio(k as u128, q as u128)).collect();
        Self { q, roots }
    }

    /// `S(q, a1, a2)` with phases advanced residue by residue.
    pub fn sum(&self, a1: u64, a2: u64) -> Complex64 {
        let q = self.q;
        let (a1, a2) = (a1 % q, a2 % q);
        // phase(y) = y a1 + y^2 a2; phase(y+1) - phase(y) = a1 + (2y+1) a2
        let two_a2 = (2 * a2) % q;
        let mut phase = (a1 + a2) % q;
        let mut step = (a1 + 3 * a2) % q;
        let mut acc = ComplexSum::new();
        for _ in 0..q {
            acc.add(self.roots[phase as usize]);
            phase += step;
            if phase >= q {
                phase -= q;
            }
            step += two_a2;
            if step >= q {
                step -= q;
            }
        }
        acc.value()
    }

    /// Plain (uncompensated) magnitude, adequate for ratio scans.
    fn abs_fast(&self, a1: u64, a2: u64) -> f64 {
        let q = self.q;
        let two_a2 = (2 * a2) % q;
        let mut phase = (a1 + a2) % q;
        let mut step = (a1 + 3 * a2) % q;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for _ in 0..q {
            let z = self.roots[phase as usize];
            re += z.re;
            im += z.im;
            phase += step;
            if phase >= q {
                phase -= q;
            }
            step += two_a2;
            if step >= q {
                step -= q;
            }
        }
        re.hypot(im)
    }
}

pub fn gauss_sum_direct(spec: GaussSpec) -> Complex64 {
    RootTable::new(spec.q).sum(spec.a1, spec.a2)
}

/// Closed form of `S(q, a1, 1)` for odd `q` and `gcd(a1, q) = 1`:
/// `e(-[4,q] a1^2 / q) sqrt(q)`, times `i` when `q = 3 mod 4`.
pub fn gauss_sum_closed(q: u64, a1: u64) -> Result<Complex64> {
    if q == 0 || q.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!("closed form needs odd q, got {q}")));
    }
    if gcd(a1 % q, q) != 1 {
        return Err(Error::OutOfRange(format!(
            "closed form needs gcd(a1, q) = 1, got a1 = {a1}, q = {q}"
        )));
    }
    let inv4 = mod_inverse(4, q)? as u128;
    let a = (a1 % q) as u128;
    let qq = q as u128;
    let residue = inv4 * (a * a % qq) % qq;
    // e(-r/q) = e((q - r)/q)
    let phase = unit_phase_ratio((qq - residue) % qq, qq);
    let root = (q as f64).sqrt();
    let unit = if q % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    };
    Ok(phase * unit * root)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioScan {
    pub max_ratio: f64,
    pub witness: GaussSpec,
}

/// Ratios closer than this (relatively) count as ties.
const TIE_TOLERANCE: f64 = 1e-12;

fn strictly_greater(a: f64, b: f64) -> bool {
    a > b * (1.0 + TIE_TOLERANCE)
}

/// Per-modulus maximum of `|S(q, a)| / sqrt(q)` over primitive `(a1, a2)`.
/// Ties keep the smallest `a1`, then the smallest `a2`.
pub fn max_ratio_for_modulus(q: u64) -> RatioScan {
    let table = RootTable::new(q);
    let root = (q as f64).sqrt();
    let mut best = RatioScan {
        max_ratio: f64::NEG_INFINITY,
        witness: GaussSpec { q, a1: 0, a2: 0 },
    };
    for a1 in 0..q {
        let g1 = gcd(a1, q);
        for a2 in 0..q {
            if gcd(g1, a2) != 1 {
                continue;
            }
            let r = table.abs_fast(a1, a2) / root;
            if best.max_ratio == f64::NEG_INFINITY || strictly_greater(r, best.max_ratio) {
                best = RatioScan {
                    max_ratio: r,
                    witness: GaussSpec { q, a1, a2 },
                };
            }
        }
    }
    best
}

/// Maximum of `|S(q, a)| / sqrt(q)` over `q <= q_max` and primitive `a`.
///
/// Runs in parallel over `q`; the reduction keeps the smallest `q` (then
/// `a1`, then `a2`) among ratios equal to within a relative `1e-12`, so the
/// result does not depend on the thread count or on last-bit noise.
pub fn gauss_ratio_scan(q_max: u64) -> Result<RatioScan> {
    if q_max == 0 || q_max > MAX_SCAN_MODULUS {
        return Err(Error::OutOfRange(format!(
            "scan modulus bound must lie in [1, {MAX_SCAN_MODULUS}], got {q_max}"
        )));
    }
    let per_q: Vec<RatioScan> = (1..=q_max).into_par_iter().map(max_ratio_for_modulus).collect();
    Ok(per_q
        .into_iter()
        .reduce(|best, cur| {
            if strictly_greater(cur.max_ratio, best.max_ratio) {
                cur
            } else {
                best
            }
        })
        .expect("non-empty scan"))
}
