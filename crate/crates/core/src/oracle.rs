//! Brute-force references used to cross-check the fast paths.

use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, unit_phase_ratio};
use num_complex::Complex64;
use rayon::prelude::*;

/// Steps between exact restarts of the per-term rotation in [`grid_max_abs`].
const RESTART: u64 = 4096;

/// `max_k |S(j / nx, k / nt)|` over the whole `t` grid, by rotating every
/// term one grid step at a time.
pub fn grid_max_abs(j: u64, nx: u64, n: u64, nt: u64) -> f64 {
    let nn = n as usize;
    let nx128 = nx as u128;
    let nt128 = nt as u128;
    let base: Vec<Complex64> = (1..=n)
        .map(|m| unit_phase_ratio((m as u128 * j as u128) % nx128, nx128))
        .collect();
    let sq: Vec<u128> = (1..=n).map(|m| (m as u128 * m as u128) % nt128).collect();
    let step: Vec<Complex64> = sq.iter().map(|&s| unit_phase_ratio(s, nt128)).collect();
    let mut z = vec![Complex64::new(0.0, 0.0); nn];
    let mut best = 0.0f64;
    let mut k = 0u64;
    while k < nt {
        for i in 0..nn {
            z[i] = base[i] * unit_phase_ratio(sq[i] * k as u128 % nt128, nt128);
        }
        let end = (k + RESTART).min(nt);
        for _ in k..end {
            let mut s = Complex64::new(0.0, 0.0);
            for (zi, wi) in z.iter_mut().zip(&step) {
                s += *zi;
                *zi *= wi;
            }
            best = best.max(s.norm_sqr());
        }
        k = end;
    }
    best.sqrt()
}

/// `(1/nx) sum_j (max_k |S(j/nx, k/nt)|)^p` for each `p`, using the
/// symmetries of `x -> max_t |S(x, t)|` to visit only `j <= nx/4`.
pub fn dense_grid_moments(n: u64, nx: u64, nt: u64, ps: &[f64]) -> Result<Vec<f64>> {
    if n == 0 || nx == 0 || !nx.is_multiple_of(4) || nt == 0 {
        return Err(Error::OutOfRange(format!(
            "dense grid needs N >= 1, nx a positive multiple of 4, nt >= 1; got {n}, {nx}, {nt}"
        )));
    }
    let quarter = nx / 4;
    let maxima: Vec<f64> = (0..=quarter)
        .into_par_iter()
        .map(|j| grid_max_abs(j, nx, n, nt))
        .collect();
    let weights: Vec<f64> = (0..=quarter)
        .map(|j| if j == 0 || j == quarter { 2.0 } else { 4.0 })
        .collect();
    Ok(ps
        .iter()
        .map(|&p| {
            let terms: Vec<f64> = maxima.iter().zip(&weights).map(|(v, w)| w * v.powf(p)).collect();
            pairwise_sum(&terms) / nx as f64
        })
        .collect())
}

/// `S(x, t)` summed term by term with `f64` phases; only for small `N`.
pub fn naive_weyl(x: f64, t: f64, n: u64) -> Complex64 {
    (1..=n)
        .map(|m| {
            let mf = m as f64;
            let theta = std::f64::consts::TAU * (mf * x + mf * mf * t);
            Complex64::new(theta.cos(), theta.sin())
        })
        .sum()
}
