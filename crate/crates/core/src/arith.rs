//! Integer arithmetic: gcd, modular inverses, a linear totient sieve and the
//! summatory functions of Euler's totient restricted to odd arguments.

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use std::f64::consts::PI;

/// Largest sieve accepted unless a caller raises the cap explicitly.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// Density of the odd-argument totient sum: `2 / pi^2`.
pub const ODD_PHI_DENSITY: f64 = 2.0 / (PI * PI);

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    gcd(gcd(a, b), c)
}

/// Inverse of `a` modulo `q`, in `[0, q)`.
pub fn mod_inverse(a: i64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::OutOfRange("modulus must be positive".into()));
    }
    let m = q as i128;
    let a_red = (a as i128).rem_euclid(m);
    let (mut r0, mut r1) = (m, a_red);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { a, q });
    }
    Ok(s0.rem_euclid(m) as u64)
}

/// Immutable table of `phi(1) ..= phi(limit)`.
#[derive(Debug, Clone)]
pub struct TotientTable {
    // index 0 is a placeholder so that values[n] = phi(n)
    values: Vec<u32>,
}

impl TotientTable {
    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn phi(&self, n: u64) -> u64 {
        assert!(n >= 1 && n <= self.limit(), "phi({n}) outside the table");
        self.values[n as usize] as u64
    }

    /// `phi(1), phi(2), ...` in order.
    pub fn values(&self) -> &[u32] {
        &self.values[1..]
    }

    /// Exact `sum_{y <= y_max, y odd} phi(y)` and its deviation from
    /// `(2/pi^2) y_max^2`.
    pub fn odd_phi_sum(&self, y_max: u64) -> Result<OddPhiSum> {
        if y_max < 2 {
            return Err(Error::OutOfRange(format!("odd_phi_sum needs Y >= 2, got {y_max}")));
        }
        self.check_covers(y_max)?;
        let exact_sum: u64 = (1..=y_max).step_by(2).map(|y| self.values[y as usize] as u64).sum();
        Ok(OddPhiSum::new(y_max, exact_sum))
    }

    /// `sum phi(y) / y^alpha` over odd `y`, either on the dyadic block
    /// `(Y/2, Y]` or on all of `[1, Y]`.
    pub fn odd_phi_weighted_sum(&self, y_max: u64, alpha: f64, mode: WeightRange) -> Result<f64> {
        if y_max < 4 {
            return Err(Error::OutOfRange(format!("weighted sum needs Y >= 4, got {y_max}")));
        }
        self.check_covers(y_max)?;
        let start = match mode {
            WeightRange::Dyadic => y_max / 2 + 1,
            WeightRange::Full => 1,
        };
        let first_odd = start | 1;
        let mut acc = CompensatedSum::new();
        for y in (first_odd..=y_max).step_by(2) {
            let phi = self.values[y as usize] as f64;
            acc.add(phi / (y as f64).powf(alpha));
        }
        Ok(acc.value())
    }

    fn check_covers(&self, y: u64) -> Result<()> {
        if y > self.limit() {
            return Err(Error::OutOfRange(format!(
                "Y = {y} exceeds the sieved range {}",
                self.limit()
            )));
        }
        Ok(())
    }
}

/// Summation range for [`TotientTable::odd_phi_weighted_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRange {
    /// odd `y` in `(Y/2, Y]`
    Dyadic,
    /// odd `y` in `[1, Y]`
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddPhiSum {
    pub y: u64,
    pub exact_sum: u64,
    pub residual: f64,
}

impl OddPhiSum {
    fn new(y: u64, exact_sum: u64) -> Self {
        let yf = y as f64;
        Self {
            y,
            exact_sum,
            residual: exact_sum as f64 - ODD_PHI_DENSITY * yf * yf,
        }
    }

    pub fn main_term(&self) -> f64 {
        let yf = self.y as f64;
        ODD_PHI_DENSITY * yf * yf
    }

    /// `|residual| / (Y log Y)`, the normalised error of the asymptotic.
    pub fn residual_over_y_log_y(&self) -> f64 {
        let yf = self.y as f64;
        self.residual / (yf * yf.ln())
    }
}

pub fn totient_sieve(limit: u64) -> Result<TotientTable> {
    totient_sieve_with_cap(limit, DEFAULT_SIEVE_CAP)
}

/// Linear (Euler) sieve; every composite is visited once through its least
/// prime factor.
pub fn totient_sieve_with_cap(limit: u64, cap: u64) -> Result<TotientTable> {
    if limit == 0 {
        return Err(Error::OutOfRange("sieve limit must be positive".into()));
    }
    if limit > cap {
        return Err(Error::SieveCap { limit, cap });
    }
    let n = limit as usize;
    let mut phi = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    phi[1] = 1;
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let p = p as usize;
            let m = i * p;
            if m > n {
                break;
            }
            if i % p == 0 {
                phi[m] = phi[i] * p as u32;
                break;
            }
            phi[m] = phi[i] * (p as u32 - 1);
        }
    }
    Ok(TotientTable { values: phi })
}

pub fn odd_phi_sum(y_max: u64) -> Result<OddPhiSum> {
    totient_sieve(y_max.max(1))?.odd_phi_sum(y_max)
}

pub fn odd_phi_weighted_sum(y_max: u64, alpha: f64, mode: WeightRange) -> Result<f64> {
    totient_sieve(y_max.max(1))?.odd_phi_weighted_sum(y_max, alpha, mode)
}

/// Log-spaced checkpoints `round(10^(k/4))` from 10 up to `y_max`, always
/// ending at `y_max` itself.
pub fn sweep_points(y_max: u64) -> Vec<u64> {
    let mut pts = Vec::new();
    let mut k = 4;
    loop {
        let y = 10f64.powf(k as f64 / 4.0).round() as u64;
        if y > y_max {
            break;
        }
        if pts.last() != Some(&y) {
            pts.push(y);
        }
        k += 1;
    }
    if y_max >= 2 && pts.last() != Some(&y_max) {
        pts.push(y_max);
    }
    pts
}

/// Odd-totient sums at every checkpoint of [`sweep_points`], computed in one
/// pass over a single sieve.
pub fn totient_sweep(y_max: u64) -> Result<Vec<OddPhiSum>> {
    if y_max < 2 {
        return Err(Error::OutOfRange(format!("sweep needs Y >= 2, got {y_max}")));
    }
    let table = totient_sieve(y_max)?;
    let points = sweep_points(y_max);
    let mut out = Vec::with_capacity(points.len());
    let mut running = 0u64;
    let mut y = 1u64;
    for &target in &points {
        while y <= target {
            running += table.values[y as usize] as u64;
            y += 2;
        }
        out.push(OddPhiSum::new(target, running));
    }
    Ok(out)
}
