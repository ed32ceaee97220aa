//! Enclosures of `M_p(N) = int_0^1 max_t |S(x, t)|^p dx`, dyadic sweeps and
//! exponent fits.

use crate::arith::totient_sieve;
use crate::error::{Error, Result};
use crate::maximal::{lower_bound_q_max, MaximizerConfig, MaximizerPlan};
use crate::numeric::{pairwise_sum, DoubleDouble};
use crate::weyl::x_lipschitz_abs;
use rayon::prelude::*;
use std::time::Instant;

/// Exponents of `N^a (log N)^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    pub a: f64,
    pub b: f64,
}

pub fn exponents(p: f64) -> Result<ExponentPair> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::OutOfRange(format!("moment p must be >= 1, got {p}")));
    }
    let a = if p <= 4.0 { 0.75 * p } else { p - 1.0 };
    let b = if p == 4.0 { 1.0 } else { 0.0 };
    Ok(ExponentPair { a, b })
}

/// `N^a (log N)^b`.
pub fn predicted(n: u64, p: f64) -> Result<f64> {
    let e = exponents(p)?;
    let nf = n as f64;
    Ok(nf.powf(e.a) * nf.ln().powf(e.b))
}

/// Largest `N` accepted by [`estimate_mp`].
pub const MAX_MP_TERMS: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpConfig {
    /// Nodes per `N^2` on the `x` grid.
    pub xfactor: u64,
    /// Fewest `x` nodes.
    pub min_nodes: u64,
    /// Most `x` nodes.
    pub max_nodes: u64,
    /// `t` tolerance as a multiple of `N`.
    pub tol_factor: f64,
    pub maximizer: MaximizerConfig,
    /// Largest accepted `upper / lower`.
    pub max_slack_ratio: f64,
}

impl Default for MpConfig {
    fn default() -> Self {
        Self {
            xfactor: 8,
            min_nodes: 1 << 14,
            max_nodes: 1 << 22,
            tol_factor: 1e-4,
            maximizer: MaximizerConfig::default(),
            max_slack_ratio: 2.0,
        }
    }
}

impl MpConfig {
    /// Number of `x` nodes for `N` terms, a multiple of four.
    pub fn nodes(&self, n: u64) -> u64 {
        let m = (self.xfactor * n * n).clamp(self.min_nodes, self.max_nodes);
        m.div_ceil(4) * 4
    }

    pub fn describe(&self, n: u64) -> String {
        format!(
            "K={};tol={:.3e};M={};xfactor={}",
            self.maximizer.k,
            self.tol_factor * n as f64,
            self.nodes(n),
            self.xfactor
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpEstimate {
    pub n: u64,
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    pub x_grid: u64,
    pub t_config: String,
}

impl MpEstimate {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// Bounds on `max_t |S(x, t)|` over the cell of each `x` node, already
/// widened by the `x`-Lipschitz slack and clipped to `[N^(1/2), N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalProfile {
    pub n: u64,
    pub m: u64,
    pub cfg: MpConfig,
    /// Nodes `j = 0 ..= M/4`; the rest follow from `f(1 - x) = f(x)` and
    /// `f(x + 1/2) = f(x)`.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MaximalProfile {
    pub fn compute(n: u64, cfg: &MpConfig) -> Result<Self> {
        if n == 0 || n > MAX_MP_TERMS {
            return Err(Error::OutOfRange(format!(
                "M_p needs 1 <= N <= {MAX_MP_TERMS}, got {n}"
            )));
        }
        let m = cfg.nodes(n);
        let quarter = m / 4;
        let plan = MaximizerPlan::new(n, cfg.maximizer)?;
        let tol = cfg.tol_factor * n as f64;
        let slack = x_lipschitz_abs(n) / (2.0 * m as f64);
        let nf = n as f64;
        let floor = nf.sqrt();
        let bounds: Vec<(f64, f64)> = (0..=quarter)
            .into_par_iter()
            .map_init(
                || plan.workspace(),
                |ws, j| {
                    let x = DoubleDouble::from_ratio(j as i64, m).expect("grid denominators are small");
                    let r = plan.maximize_with(x, tol, ws)?;
                    Ok(((r.value_lower - slack).max(floor), (r.value_upper + slack).min(nf)))
                },
            )
            .collect::<Result<_>>()?;
        let weights = (0..=quarter)
            .map(|j| if j == 0 || j == quarter { 2.0 } else { 4.0 })
            .collect();
        let (lower, upper) = bounds.into_iter().unzip();
        Ok(Self {
            n,
            m,
            cfg: *cfg,
            lower,
            upper,
            weights,
        })
    }

    pub fn estimate(&self, p: f64) -> Result<MpEstimate> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::OutOfRange(format!("moment p must be >= 1, got {p}")));
        }
        let mf = self.m as f64;
        let moment = |vals: &[f64]| -> f64 {
            let terms: Vec<f64> = vals.iter().zip(&self.weights).map(|(v, w)| w * v.powf(p)).collect();
            pairwise_sum(&terms) / mf
        };
        let lower = moment(&self.lower);
        let upper = moment(&self.upper);
        let ratio = upper / lower;
        if ratio > self.cfg.max_slack_ratio {
            return Err(Error::SlackExceeded {
                ratio,
                limit: self.cfg.max_slack_ratio,
            });
        }
        Ok(MpEstimate {
            n: self.n,
            p,
            lower,
            upper,
            x_grid: self.m,
            t_config: self.cfg.describe(self.n),
        })
    }
}

pub fn estimate_mp(n: u64, p: f64, cfg: &MpConfig) -> Result<MpEstimate> {
    exponents(p)?;
    MaximalProfile::compute(n, cfg)?.estimate(p)
}

/// Least-squares line `y = slope x + intercept` and the Pearson correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub correlation: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::OutOfRange("a line fit needs at least two paired points".into()));
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let correlation = if syy == 0.0 { 0.0 } else { sxy / (sxx * syy).sqrt() };
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
        correlation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub p: f64,
    pub estimates: Vec<MpEstimate>,
    /// `N` values used in the slope fit (upper half of the dyadic range).
    pub fit_ns: Vec<u64>,
    /// Fit of `log2(mid)` against `log2 N`.
    pub fit: LineFit,
    /// Fit of `mid / N^3` against `ln N` over every `N`, for `p = 4`.
    pub log_fit: Option<LineFit>,
    pub settings: Vec<String>,
}

/// Dyadic values `nmin, 2 nmin, ..., nmax`.
pub fn dyadic_range(nmin: u64, nmax: u64) -> Result<Vec<u64>> {
    if !nmin.is_power_of_two() || !nmax.is_power_of_two() || nmin < 8 || nmax < nmin {
        return Err(Error::OutOfRange(format!(
            "dyadic sweep needs powers of two 8 <= nmin <= nmax, got {nmin}, {nmax}"
        )));
    }
    let mut v = Vec::new();
    let mut n = nmin;
    while n <= nmax {
        v.push(n);
        n *= 2;
    }
    Ok(v)
}

/// Fit the estimates of one `p`. The slope uses the `N` with
/// `log2 N >= (log2 nmin + log2 nmax) / 2`.
pub fn fit_sweep(p: f64, estimates: Vec<MpEstimate>, settings: Vec<String>) -> Result<SweepReport> {
    let ns: Vec<u64> = estimates.iter().map(|e| e.n).collect();
    let (lo, hi) = match (ns.first(), ns.last()) {
        (Some(a), Some(b)) => ((*a as f64).log2(), (*b as f64).log2()),
        _ => return Err(Error::OutOfRange("empty sweep".into())),
    };
    let cut = 0.5 * (lo + hi);
    let top: Vec<&MpEstimate> = estimates.iter().filter(|e| (e.n as f64).log2() >= cut).collect();
    let xs: Vec<f64> = top.iter().map(|e| (e.n as f64).log2()).collect();
    let ys: Vec<f64> = top.iter().map(|e| e.mid().log2()).collect();
    let fit = fit_line(&xs, &ys)?;
    let log_fit = if p == 4.0 {
        let xs: Vec<f64> = estimates.iter().map(|e| (e.n as f64).ln()).collect();
        let ys: Vec<f64> = estimates.iter().map(|e| e.mid() / (e.n as f64).powi(3)).collect();
        Some(fit_line(&xs, &ys)?)
    } else {
        None
    };
    Ok(SweepReport {
        p,
        fit_ns: top.iter().map(|e| e.n).collect(),
        estimates,
        fit,
        log_fit,
        settings,
    })
}

/// Sweeps several moments at once, computing each maximal profile once.
///
/// With a wall-clock `budget`, the per-`N` cost is extrapolated from the
/// previous (N^4 growth) and `xfactor` is halved until the projection fits;
/// the coarse factor `K` is never lowered below 8. The settings actually
/// used are reported.
pub fn dyadic_sweep_multi(
    ps: &[f64],
    nmin: u64,
    nmax: u64,
    cfg: &MpConfig,
    budget_seconds: Option<f64>,
) -> Result<Vec<SweepReport>> {
    for &p in ps {
        exponents(p)?;
    }
    let ns = dyadic_range(nmin, nmax)?;
    let start = Instant::now();
    let mut cfg = *cfg;
    let mut last: Option<(u64, f64, u64)> = None;
    let mut per_p: Vec<Vec<MpEstimate>> = vec![Vec::new(); ps.len()];
    let mut settings = Vec::new();
    for &n in &ns {
        if let (Some(budget), Some((prev_n, secs, prev_m))) = (budget_seconds, last) {
            let remaining = budget - start.elapsed().as_secs_f64();
            let scale = |m: u64| secs * (m as f64 / prev_m as f64) * (n as f64 / prev_n as f64).powi(2);
            while cfg.xfactor > 1 && scale(cfg.nodes(n)) > remaining {
                cfg.xfactor /= 2;
            }
        }
        let t0 = Instant::now();
        let profile = MaximalProfile::compute(n, &cfg)?;
        last = Some((n, t0.elapsed().as_secs_f64(), cfg.nodes(n)));
        settings.push(format!("N={n};{}", cfg.describe(n)));
        for (k, &p) in ps.iter().enumerate() {
            per_p[k].push(profile.estimate(p)?);
        }
    }
    ps.iter()
        .zip(per_p)
        .map(|(&p, est)| fit_sweep(p, est, settings.clone()))
        .collect()
}

pub fn dyadic_sweep(p: f64, nmin: u64, nmax: u64, cfg: &MpConfig) -> Result<SweepReport> {
    Ok(dyadic_sweep_multi(&[p], nmin, nmax, cfg, None)?.remove(0))
}

/// `N^(p-1) sum phi(q) q^(-p/2)` over odd `3 <= q <= N^(1/2)/6`.
pub fn lower_bound_sum(n: u64, p: f64) -> Result<f64> {
    if n < 324 {
        return Err(Error::OutOfRange(format!("lower-bound sum needs N >= 324, got {n}")));
    }
    exponents(p)?;
    let q_max = lower_bound_q_max(n);
    let table = totient_sieve(q_max)?;
    let terms: Vec<f64> = (3..=q_max)
        .step_by(2)
        .map(|q| table.phi(q) as f64 * (q as f64).powf(-p / 2.0))
        .collect();
    Ok((n as f64).powf(p - 1.0) * pairwise_sum(&terms))
}
