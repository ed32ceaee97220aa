//! `max_t |S(x, t)|` with a certified enclosure, and the lower-bound set `E`
//! built from the intervals `[a1/q + 15/N, a1/q + 16/N]`.

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::numeric::{unit_phase, unit_phase_ratio, DoubleDouble};
use crate::oscillatory::{i_beta, FreqPair};
use crate::rng::sample_stream;
use crate::weyl::{evaluation_error_bound, t_lipschitz, weyl_sum_and_t_derivative_dd, weyl_sum_dd};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

/// Largest `N` for which the certified maximiser is offered.
pub const MAX_CERTIFIED_TERMS: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizerConfig {
    /// Coarse points per unit of trigonometric degree.
    pub k: u64,
    /// Largest coarse grid.
    pub max_grid: u64,
    /// Largest number of refinement evaluations per call.
    pub max_evals: u64,
}

impl Default for MaximizerConfig {
    fn default() -> Self {
        Self {
            k: 8,
            max_grid: 1 << 27,
            max_evals: 1 << 22,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizerResult {
    pub t_star: f64,
    pub value_lower: f64,
    pub value_upper: f64,
}

/// Reusable state for maximising over `t` at fixed `N`.
///
/// The coarse stage samples `t = i / L` with `L = R B`, `B` the power of two
/// at or above `N^2`. For each residue `r < R` the values at
/// `t = r/L + k/B` come from one inverse FFT of length `B` applied to
/// `c_n e(n^2 r / L)` folded into bins `n^2 mod B`.
///
/// `|S|^2` is a real trigonometric polynomial of degree `D = N^2 - 1`, so a
/// grid point within `1/(2L)` of a maximiser carries at least
/// `(1 - kappa)` of the maximum, `kappa = (2 pi D / L)^2 / 8`. Every cell
/// passing that test is searched by branch and bound, each subinterval
/// bounded by the smaller of the Lipschitz bound `|S| + L w / 2` and the
/// second-order bound on `|S|^2` from its value, slope and the curvature
/// limit `(2 pi D)^2 max |S|^2`.
pub struct MaximizerPlan {
    n: u64,
    cfg: MaximizerConfig,
    b: usize,
    r: usize,
    l: u64,
    kappa: f64,
    lipschitz: f64,
    bins: Vec<usize>,
    twiddles: Vec<Complex64>,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for MaximizerPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MaximizerPlan")
            .field("n", &self.n)
            .field("b", &self.b)
            .field("r", &self.r)
            .field("l", &self.l)
            .finish()
    }
}

#[derive(Clone, Copy)]
struct Node {
    bound: f64,
    mid: f64,
    width: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger bound first; among equal bounds the smaller t
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.mid.total_cmp(&self.mid))
    }
}

#[derive(Clone, Copy)]
struct Sample {
    t: f64,
    abs: f64,
    g: f64,
    dg: f64,
}

/// Per-call buffers so a plan can be shared across threads.
pub struct Workspace {
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    norms: Vec<f64>,
}

impl MaximizerPlan {
    pub fn new(n: u64, cfg: MaximizerConfig) -> Result<Self> {
        if n == 0 || n > MAX_CERTIFIED_TERMS {
            return Err(Error::OutOfRange(format!(
                "certified maximiser needs 1 <= N <= {MAX_CERTIFIED_TERMS}, got {n}"
            )));
        }
        if cfg.k < 8 {
            return Err(Error::OutOfRange(format!(
                "coarse factor K must be >= 8, got {}",
                cfg.k
            )));
        }
        let n2 = n * n;
        let b = n2.next_power_of_two();
        let r = (cfg.k * n2).div_ceil(b);
        let l = r * b;
        if l > cfg.max_grid {
            return Err(Error::Tolerance {
                tol: f64::NAN,
                reason: format!("coarse grid {l} exceeds the cap {}", cfg.max_grid),
            });
        }
        let degree = (n2 - 1) as f64;
        let kappa = (std::f64::consts::TAU * degree / l as f64).powi(2) / 8.0;
        let bins = (1..=n).map(|m| ((m * m) % b) as usize).collect();
        let mut twiddles = Vec::with_capacity((r * n) as usize);
        for ri in 0..r {
            for m in 1..=n {
                let num = (m as u128 * m as u128 * ri as u128) % l as u128;
                twiddles.push(unit_phase_ratio(num, l as u128));
            }
        }
        let fft = if n > 1 {
            Some(FftPlanner::<f64>::new().plan_fft_inverse(b as usize))
        } else {
            None
        };
        Ok(Self {
            n,
            cfg,
            b: b as usize,
            r: r as usize,
            l,
            kappa,
            lipschitz: t_lipschitz(n),
            bins,
            twiddles,
            fft,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coarse_len(&self) -> u64 {
        self.l
    }

    pub fn config(&self) -> MaximizerConfig {
        self.cfg
    }

    pub fn workspace(&self) -> Workspace {
        let scratch = self.fft.as_ref().map_or(0, |f| f.get_inplace_scratch_len());
        Workspace {
            buf: vec![Complex64::new(0.0, 0.0); if self.n > 1 { self.b } else { 0 }],
            scratch: vec![Complex64::new(0.0, 0.0); scratch],
            coeffs: Vec::with_capacity(self.n as usize),
            norms: Vec::with_capacity(self.b),
        }
    }

    pub fn maximize(&self, x: DoubleDouble, tol: f64) -> Result<MaximizerResult> {
        self.maximize_with(x, tol, &mut self.workspace())
    }

    pub fn maximize_with(&self, x: DoubleDouble, tol: f64, ws: &mut Workspace) -> Result<MaximizerResult> {
        let n = self.n;
        let nf = n as f64;
        if !tol.is_finite() || tol < 1e-6 * nf {
            return Err(Error::Tolerance {
                tol,
                reason: format!("tolerance must be at least 1e-6 N = {}", 1e-6 * nf),
            });
        }
        if n == 1 {
            return Ok(MaximizerResult {
                t_star: 0.0,
                value_lower: 1.0,
                value_upper: 1.0,
            });
        }
        let candidates = self.coarse_candidates(x, ws);
        self.refine(x, tol, candidates)
    }

    /// Coarse values `|S(x, i/L)|^2` that could belong to the maximiser's
    /// cell, in descending order.
    fn coarse_candidates(&self, x: DoubleDouble, ws: &mut Workspace) -> Vec<(f64, u64)> {
        let n = self.n as usize;
        let fft = self.fft.as_ref().expect("plan has an FFT for N > 1");
        ws.coeffs.clear();
        ws.coeffs
            .extend((1..=self.n).map(|m| unit_phase(x.mul_u64_mod1(m).to_f64())));
        let slack = self.coarse_slack();
        let keep = 1.0 - self.kappa;
        let mut running = 0.0f64;
        let mut kept: Vec<(f64, u64)> = Vec::new();
        for ri in 0..self.r {
            ws.buf.fill(Complex64::new(0.0, 0.0));
            let tw = &self.twiddles[ri * n..(ri + 1) * n];
            for ((c, w), &bin) in ws.coeffs.iter().zip(tw).zip(&self.bins) {
                ws.buf[bin] += c * w;
            }
            fft.process_with_scratch(&mut ws.buf, &mut ws.scratch);
            ws.norms.clear();
            ws.norms.extend(ws.buf.iter().map(|z| z.norm_sqr()));
            running = ws.norms.iter().fold(running, |a, &g| a.max(g));
            let thr = keep * running - slack;
            for (k, &g) in ws.norms.iter().enumerate() {
                if g >= thr {
                    kept.push((g, (ri + self.r * k) as u64));
                }
            }
        }
        let thr = keep * running - slack;
        kept.retain(|&(g, _)| g >= thr);
        kept.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        kept
    }

    fn coarse_slack(&self) -> f64 {
        let nf = self.n as f64;
        1e-9 * nf * nf
    }

    fn refine(&self, x: DoubleDouble, tol: f64, candidates: Vec<(f64, u64)>) -> Result<MaximizerResult> {
        let n = self.n;
        let fp = evaluation_error_bound(n);
        let eval = |t: f64| -> Result<Sample> {
            let (s, ds) = weyl_sum_and_t_derivative_dd(x, DoubleDouble::from_f64(t), n)?;
            Ok(Sample {
                t,
                abs: s.norm(),
                g: s.norm_sqr(),
                dg: 2.0 * (s.conj() * ds).re,
            })
        };
        let keep = 1.0 - self.kappa;
        let slack = self.coarse_slack();
        // every value of |S|^2 is at most this, so its second derivative is
        // at most (2 pi D)^2 times it
        let g_sup = match candidates.first() {
            Some(&(g, _)) => (g + slack) / keep,
            None => {
                return Err(Error::Tolerance {
                    tol,
                    reason: "empty coarse grid".into(),
                })
            }
        };
        let degree = (n * n - 1) as f64;
        let curvature = (std::f64::consts::TAU * degree).powi(2) * g_sup;
        let bound = |smp: &Sample, w: f64| -> f64 {
            let lip = smp.abs + self.lipschitz * w / 2.0;
            let taylor = (smp.g + smp.dg.abs() * w / 2.0 + curvature * w * w / 8.0).sqrt();
            lip.min(taylor)
        };
        let half = 0.5 / self.l as f64 * (1.0 + 1e-12);
        let mut best = 0.0f64;
        let mut upper = 0.0f64;
        let mut evals = 0u64;
        // (t, value, width of the finest interval around it)
        let mut locals: Vec<(f64, f64, f64)> = Vec::new();
        for (g, j) in candidates {
            let lb = (best - fp).max(0.0);
            if g + slack < keep * lb * lb {
                break;
            }
            let centre = j as f64 / self.l as f64;
            let s0 = eval(centre)?;
            evals += 1;
            best = best.max(s0.abs);
            if j == 0 {
                locals.push((0.0, s0.abs, 0.0));
            }
            let mut cell_best = (centre, s0.abs, 2.0 * half);
            let mut heap = BinaryHeap::new();
            heap.push(Node {
                bound: bound(&s0, 2.0 * half),
                mid: centre,
                width: 2.0 * half,
            });
            while let Some(node) = heap.pop() {
                if node.bound <= best + tol / 2.0 {
                    upper = upper.max(node.bound);
                    break;
                }
                let w = node.width / 2.0;
                for mid in [node.mid - w / 2.0, node.mid + w / 2.0] {
                    let smp = eval(mid)?;
                    evals += 1;
                    if smp.abs > cell_best.1 {
                        cell_best = (mid, smp.abs, w);
                    }
                    best = best.max(smp.abs);
                    heap.push(Node {
                        bound: bound(&smp, w),
                        mid: smp.t,
                        width: w,
                    });
                }
                if evals > self.cfg.max_evals {
                    return Err(Error::Tolerance {
                        tol,
                        reason: format!("refinement exceeded {} evaluations", self.cfg.max_evals),
                    });
                }
            }
            locals.push(cell_best);
        }
        for item in locals.iter_mut() {
            if item.1 >= best - tol && item.2 > 0.0 {
                let polished = self.polish(x, item.0, item.2)?;
                if polished.1 > item.1 {
                    item.0 = polished.0;
                    item.1 = polished.1;
                }
                best = best.max(item.1);
            }
        }
        let wrap = |t: f64| -> f64 {
            if t < 0.0 {
                t + 1.0
            } else if t >= 1.0 {
                t - 1.0
            } else {
                t
            }
        };
        let (t_star, v_star) = locals
            .iter()
            .filter(|l| l.1 >= best - tol / 4.0)
            .map(|l| (wrap(l.0), l.1))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("at least one refined cell");
        let nf = n as f64;
        Ok(MaximizerResult {
            t_star,
            value_lower: (v_star - fp).max(0.0),
            value_upper: (upper.max(best) + fp).min(nf),
        })
    }

    /// Bisection on the sign of `d|S|^2/dt` inside `[t - w, t + w]`.
    fn polish(&self, x: DoubleDouble, t: f64, w: f64) -> Result<(f64, f64)> {
        let n = self.n;
        let slope = |t: f64| -> Result<f64> {
            let (s, ds) = weyl_sum_and_t_derivative_dd(x, DoubleDouble::from_f64(t), n)?;
            Ok((s.conj() * ds).re)
        };
        let (mut a, mut b) = (t - w, t + w);
        if !(slope(a)? > 0.0 && slope(b)? < 0.0) {
            return Ok((t, weyl_sum_dd(x, DoubleDouble::from_f64(t), n)?.norm()));
        }
        for _ in 0..64 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if slope(m)? > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let m = 0.5 * (a + b);
        Ok((m, weyl_sum_dd(x, DoubleDouble::from_f64(m), n)?.norm()))
    }
}

/// Default `t` tolerance: `1e-4 N`.
pub fn default_tolerance(n: u64) -> f64 {
    1e-4 * n as f64
}

/// `max_t |S(x, t)|` for a single real `x`.
pub fn maximize_t(x: f64, n: u64, tol: f64) -> Result<MaximizerResult> {
    if !x.is_finite() {
        return Err(Error::OutOfRange(format!("x must be finite, got {x}")));
    }
    MaximizerPlan::new(n, MaximizerConfig::default())?.maximize(DoubleDouble::from_f64(x), tol)
}

// ---------------------------------------------------------------------------
// The set E
// ---------------------------------------------------------------------------

/// `J(q, a1) = [a1/q + 15/N, a1/q + 16/N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LowerBoundInterval {
    pub q: u64,
    pub a1: u64,
    pub n: u64,
}

impl LowerBoundInterval {
    /// Endpoints as `(numerator, denominator)` over the common `q N`.
    pub fn lo_exact(&self) -> (u128, u128) {
        let (q, a1, n) = (self.q as u128, self.a1 as u128, self.n as u128);
        (a1 * n + 15 * q, q * n)
    }

    pub fn hi_exact(&self) -> (u128, u128) {
        let (q, a1, n) = (self.q as u128, self.a1 as u128, self.n as u128);
        (a1 * n + 16 * q, q * n)
    }

    pub fn lo(&self) -> f64 {
        self.a1 as f64 / self.q as f64 + 15.0 / self.n as f64
    }

    pub fn hi(&self) -> f64 {
        self.a1 as f64 / self.q as f64 + 16.0 / self.n as f64
    }

    /// The point with `beta1 N = 15 + s`, `0 <= s <= 1`, in double-double,
    /// and its offset `beta1`.
    pub fn point(&self, s: f64) -> (DoubleDouble, f64) {
        let beta1 = (15.0 + s) / self.n as f64;
        let base = DoubleDouble::from_ratio(self.a1 as i64, self.q).expect("small interval data");
        (base + DoubleDouble::from_f64(beta1), beta1)
    }
}

fn cmp_ratio(a: (u128, u128), b: (u128, u128)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundSet {
    pub n: u64,
    pub intervals: Vec<LowerBoundInterval>,
    /// Pairs with a common interior point.
    pub overlaps: usize,
    /// Pairs sharing exactly one endpoint.
    pub touching: usize,
}

impl LowerBoundSet {
    pub fn measure(&self) -> f64 {
        self.intervals.len() as f64 / self.n as f64
    }

    pub fn is_disjoint(&self) -> bool {
        self.overlaps == 0
    }
}

/// Largest admissible `q`: the largest `q` with `36 q^2 <= N`.
pub fn lower_bound_q_max(n: u64) -> u64 {
    let mut q = ((n as f64).sqrt() / 6.0) as u64 + 1;
    while q > 0 && 36 * q * q > n {
        q -= 1;
    }
    q
}

/// All `J(q, a1)` with odd `3 <= q <= N^(1/2)/6` and `gcd(a1, q) = 1`, in
/// order of `q` then `a1`, with overlaps counted in exact arithmetic.
pub fn build_e(n: u64) -> Result<LowerBoundSet> {
    if n == 0 {
        return Err(Error::OutOfRange("N must be positive".into()));
    }
    let q_max = lower_bound_q_max(n);
    let mut intervals = Vec::new();
    for q in (3..=q_max).step_by(2) {
        for a1 in 1..q {
            if gcd(a1, q) == 1 {
                intervals.push(LowerBoundInterval { q, a1, n });
            }
        }
    }
    let mut by_lo = intervals.clone();
    by_lo.sort_by(|a, b| cmp_ratio(a.lo_exact(), b.lo_exact()));
    let mut overlaps = 0;
    let mut touching = 0;
    for pair in by_lo.windows(2) {
        match cmp_ratio(pair[0].hi_exact(), pair[1].lo_exact()) {
            Ordering::Greater => overlaps += 1,
            Ordering::Equal => touching += 1,
            Ordering::Less => {}
        }
    }
    Ok(LowerBoundSet {
        n,
        intervals,
        overlaps,
        touching,
    })
}

/// `v(x) = 1/q - beta1 / N` with the implied `beta2 = -beta1 / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeTime {
    pub v: f64,
    pub beta1: f64,
    pub beta2: f64,
    v_dd: DoubleDouble,
}

impl ProbeTime {
    pub fn v_dd(&self) -> DoubleDouble {
        self.v_dd
    }
}

/// Points within this many units of `beta1 N` outside `[15, 16]` are
/// treated as rounding of an endpoint.
const MEMBERSHIP_SLACK: f64 = 1e-9;

fn probe(x: DoubleDouble, q: u64, a1: u64, n: u64) -> Result<ProbeTime> {
    let centre = DoubleDouble::from_ratio(a1 as i64, q)
        .ok_or_else(|| Error::OutOfRange(format!("a1/q = {a1}/{q} out of range")))?;
    let beta = x - centre;
    let scaled = beta.mul_f64(n as f64).to_f64();
    if !(15.0 - MEMBERSHIP_SLACK..=16.0 + MEMBERSHIP_SLACK).contains(&scaled) {
        let iv = LowerBoundInterval { q, a1, n };
        return Err(Error::OutsideInterval {
            x: x.to_f64(),
            q,
            a1,
            lo: iv.lo(),
            hi: iv.hi(),
        });
    }
    let beta1 = beta.to_f64();
    let inv_q = DoubleDouble::from_ratio(1, q).expect("small modulus");
    let v_dd = inv_q - beta.mul_f64(1.0 / n as f64);
    Ok(ProbeTime {
        v: v_dd.to_f64(),
        beta1,
        beta2: -beta1 / n as f64,
        v_dd,
    })
}

pub fn v_of_x(x: f64, q: u64, a1: u64, n: u64) -> Result<ProbeTime> {
    if q == 0 || n == 0 {
        return Err(Error::OutOfRange("q and N must be positive".into()));
    }
    probe(DoubleDouble::from_f64(x), q, a1, n)
}

fn check_lower_bound_modulus(n: u64, q: u64, a1: u64) -> Result<()> {
    if q < 3 || q.is_multiple_of(2) || 36 * q * q > n {
        return Err(Error::OutOfRange(format!(
            "need odd 3 <= q <= N^(1/2)/6, got q = {q}, N = {n}"
        )));
    }
    if gcd(a1, q) != 1 {
        return Err(Error::OutOfRange(format!(
            "need gcd(a1, q) = 1, got a1 = {a1}, q = {q}"
        )));
    }
    Ok(())
}

/// `|S(x, v(x))| q^(1/2) / N`.
pub fn lower_bound_ratio(n: u64, q: u64, a1: u64, x: f64) -> Result<f64> {
    check_lower_bound_modulus(n, q, a1)?;
    ratio_at(n, q, a1, DoubleDouble::from_f64(x)).map(|r| r.ratio)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundRow {
    pub q: u64,
    pub a1: u64,
    pub x: f64,
    pub v: f64,
    pub abs_s: f64,
    pub ratio: f64,
    pub abs_i_over_n: f64,
}

fn ratio_at(n: u64, q: u64, a1: u64, x: DoubleDouble) -> Result<LowerBoundRow> {
    let p = probe(x, q, a1, n)?;
    let s = weyl_sum_dd(x, p.v_dd, n)?;
    let i = i_beta(FreqPair::new(p.beta1, p.beta2)?, n)?;
    let nf = n as f64;
    Ok(LowerBoundRow {
        q,
        a1,
        x: x.to_f64(),
        v: p.v,
        abs_s: s.norm(),
        ratio: s.norm() * (q as f64).sqrt() / nf,
        abs_i_over_n: i.norm() / nf,
    })
}

/// Evaluate at the point of `J(q, a1)` with `beta1 N = 15 + s`.
pub fn lower_bound_row(iv: &LowerBoundInterval, s: f64) -> Result<LowerBoundRow> {
    check_lower_bound_modulus(iv.n, iv.q, iv.a1)?;
    let (x, _) = iv.point(s);
    ratio_at(iv.n, iv.q, iv.a1, x)
}

/// One row per interval of `E`, each at `beta1 N = 15 + s`.
pub fn lower_bound_rows(e: &LowerBoundSet, s: f64) -> Result<Vec<LowerBoundRow>> {
    e.intervals.par_iter().map(|iv| lower_bound_row(iv, s)).collect()
}

/// `k` seeded draws of an interval of `E` and a uniform `s` in `[0, 1]`.
pub fn lower_bound_sample(e: &LowerBoundSet, k: u64, seed: u64) -> Result<Vec<LowerBoundRow>> {
    if e.intervals.is_empty() {
        return Err(Error::OutOfRange(format!("E is empty for N = {}", e.n)));
    }
    (0..k)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(seed, i);
            let iv = &e.intervals[rng.random_range(0..e.intervals.len())];
            lower_bound_row(iv, rng.random_range(0.0..=1.0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::weyl_sum;

    #[test]
    fn trivial_maxima() {
        let r = maximize_t(0.0, 64, default_tolerance(64)).unwrap();
        assert_eq!(r.t_star, 0.0);
        assert!(r.value_lower <= 64.0 && r.value_upper >= 64.0 - 1e-9);
        assert!(r.value_lower >= 64.0 - 1e-6);
        for x in [0.0, 0.3, 0.77] {
            let r = maximize_t(x, 1, 1e-4).unwrap();
            assert_eq!((r.t_star, r.value_lower, r.value_upper), (0.0, 1.0, 1.0));
        }
    }

    #[test]
    fn two_terms_align() {
        let r = maximize_t(0.2, 2, 2e-4).unwrap();
        assert!((r.t_star - 0.8 / 3.0).abs() < 1e-6, "{r:?}");
        assert!(r.value_lower <= 2.0 && r.value_upper >= 2.0 - 1e-12);
        assert!(r.value_upper - r.value_lower <= 2e-4);
    }

    #[test]
    fn tolerance_is_validated() {
        assert!(maximize_t(0.1, 10, 1e-7).is_err());
        assert!(maximize_t(0.1, 5000, 1.0).is_err());
    }

    #[test]
    fn maximum_dominates_probes() {
        let n = 24;
        for x in [0.1234, 0.5, 0.987] {
            let r = maximize_t(x, n, default_tolerance(n)).unwrap();
            for k in 0..200 {
                let t = k as f64 / 200.0;
                let v = weyl_sum(x, t, n).unwrap().norm();
                assert!(v <= r.value_upper, "x={x} t={t}: {v} > {}", r.value_upper);
            }
            let at = weyl_sum(x, r.t_star, n).unwrap().norm();
            assert!(r.value_lower <= at && at <= r.value_upper);
        }
    }

    #[test]
    fn e_thresholds() {
        assert!(build_e(323).unwrap().intervals.is_empty());
        let e = build_e(324).unwrap();
        let pairs: Vec<_> = e.intervals.iter().map(|i| (i.q, i.a1)).collect();
        assert_eq!(pairs, vec![(3, 1), (3, 2)]);
        let e = build_e(10_000).unwrap();
        assert_eq!(e.intervals.len(), 48);
        assert!(e.is_disjoint());
        assert!((e.measure() - 48e-4).abs() < 1e-15);
        let iv = e.intervals[0];
        let (lo, hi) = (iv.lo_exact(), iv.hi_exact());
        assert_eq!(hi.0 - lo.0, iv.q as u128);
        assert_eq!(lo.1, iv.q as u128 * 10_000);
    }

    #[test]
    fn probe_time_values() {
        let n = 10_000;
        let p = v_of_x(1.0 / 3.0 + 15.5 / n as f64, 3, 1, n).unwrap();
        assert!((p.v - (1.0 / 3.0 - 1.55e-7)).abs() < 1e-15);
        assert!((p.beta2 + p.beta1 / n as f64).abs() < 1e-25);
        let iv = LowerBoundInterval { q: 3, a1: 1, n };
        let (x, _) = iv.point(0.0);
        let p = probe(x, 3, 1, n).unwrap();
        assert!((p.v - (1.0 / 3.0 - 15e-8)).abs() < 1e-15);
        assert!(v_of_x(0.5, 3, 1, n).is_err());
    }
}
