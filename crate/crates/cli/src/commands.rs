//! Subcommand definitions and handlers.

use crate::config::{parse_budget, parse_threads, Format, RunConfig};
use crate::output::{json_array, json_object, Cell, Table};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::time::Instant;
use weylmax::arith::{gcd, gcd3, totient_sweep};
use weylmax::gauss::{gauss_sum_closed, max_ratio_for_modulus, RootTable, MAX_SCAN_MODULUS};
use weylmax::major_arc::lemma1_experiment;
use weylmax::maximal::{build_e, lower_bound_rows, lower_bound_sample, MaximizerConfig, MaximizerPlan};
use weylmax::numeric::DoubleDouble;
use weylmax::oscillatory::{fresnel_residuals, fresnel_sweep, i_beta, i_bound_ratio, ibound_sweep, FreqPair};
use weylmax::scaling::{
    dyadic_sweep_multi, exponents, predicted, LineFit, MaximalProfile, MpConfig, MpEstimate, SweepReport,
};
use weylmax::verify::{self, VerifyConfig, CRITERIA, IBOUND_SAMPLES};
use weylmax::weyl::{weyl_sum_dd, weyl_sum_exact_grid, RationalGridPoint};

#[derive(Debug, Parser)]
#[command(
    name = "weylmax",
    version,
    about = "Numerical checks for maximal quadratic Weyl sums"
)]
pub struct Cli {
    /// key=value configuration file; flags given here take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_threads)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write results here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Wall-clock budget in seconds (sweep, verify-all)
    #[arg(long, global = true, value_parser = parse_budget)]
    pub budget: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Odd-totient sums against 2Y^2/pi^2 at log-spaced Y
    TotientCheck {
        #[arg(long)]
        ymax: u64,
    },
    /// One Weyl sum S(x, t); x and t accept a/b or decimals
    WeylEval {
        #[arg(long, allow_hyphen_values = true)]
        x: Number,
        #[arg(long, allow_hyphen_values = true)]
        t: Number,
        #[arg(long)]
        n: u64,
    },
    /// Complete Gauss sums for q <= qmax (extreme and closed-form rows per modulus, or every pair with --full)
    GaussCheck {
        #[arg(long)]
        qmax: u64,
        #[arg(long)]
        full: bool,
    },
    /// Fresnel integral residuals
    FresnelCheck(FresnelArgs),
    /// |I(beta)| against the major-arc scale
    IboundCheck(IboundArgs),
    /// Rational anchors for large Weyl sums, as JSON lines
    MajorArcCheck {
        #[arg(long)]
        n: u64,
        #[arg(long = "p-thresh")]
        p_thresh: f64,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        /// Stop after this many draws even if fewer samples were kept
        #[arg(long, default_value_t = 200_000)]
        max_draws: u64,
    },
    /// Certified max over t of |S(x, t)|
    Maximize {
        #[arg(long, allow_hyphen_values = true)]
        x: Number,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 8)]
        k: u64,
    },
    /// Evaluate the lower-bound construction on E
    LowerBoundCheck {
        #[arg(long)]
        n: u64,
        /// Every interval at its midpoint (the default)
        #[arg(long, conflicts_with = "sample")]
        all: bool,
        /// Random intervals and offsets instead
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Enclosure of M_p(N)
    Mp {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Dyadic sweep of M_p(N) with exponent fits
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 16)]
        nmin: u64,
        #[arg(long, default_value_t = 256)]
        nmax: u64,
        /// Where to write the JSON fit summary
        #[arg(long)]
        fit_json: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the acceptance criteria
    VerifyAll {
        /// Comma-separated criterion ids (default: all)
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Debug, Args)]
pub struct FresnelArgs {
    #[arg(long, conflicts_with_all = ["a", "x"])]
    sweep: bool,
    #[arg(long, requires = "x")]
    a: Option<f64>,
    #[arg(long, requires = "a")]
    x: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IboundArgs {
    #[arg(long, conflicts_with_all = ["beta1", "beta2"])]
    sweep: bool,
    /// Values of N for the sweep, or the single N
    #[arg(long, value_delimiter = ',', default_values_t = [100u64, 1000, 10_000])]
    n: Vec<u64>,
    #[arg(long, default_value_t = IBOUND_SAMPLES)]
    samples: u64,
    #[arg(long, allow_hyphen_values = true, requires = "beta2")]
    beta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "beta1")]
    beta2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// x nodes per N^2
    #[arg(long, default_value_t = 8)]
    xfactor: u64,
    /// Coarse t points per unit of degree (at least 8)
    #[arg(long, default_value_t = 8)]
    k: u64,
}

impl GridArgs {
    fn mp_config(&self) -> MpConfig {
        let mut cfg = MpConfig {
            xfactor: self.xfactor,
            ..MpConfig::default()
        };
        cfg.maximizer.k = self.k;
        cfg
    }
}

/// A rational `a/b` or a decimal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Ratio(i64, u64),
    Real(f64),
}

impl std::str::FromStr for Number {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
            let b: u64 = b.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
            if b == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            let g = gcd(a.unsigned_abs(), b).max(1);
            return Ok(Number::Ratio(a / g as i64, b / g));
        }
        let v: f64 = s.trim().parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
        if !v.is_finite() {
            return Err(format!("{s:?} is not finite"));
        }
        Ok(Number::Real(v))
    }
}

impl Number {
    fn to_dd(self) -> Result<DoubleDouble, CommandError> {
        match self {
            Number::Ratio(a, b) => DoubleDouble::from_ratio(a, b)
                .ok_or_else(|| CommandError::Usage(format!("denominator {b} too large for double-double"))),
            Number::Real(v) => Ok(DoubleDouble::from_f64(v)),
        }
    }

    fn to_f64(self) -> f64 {
        match self {
            Number::Ratio(a, b) => a as f64 / b as f64,
            Number::Real(v) => v,
        }
    }

    fn describe(self) -> String {
        match self {
            Number::Ratio(a, b) => format!("{a}/{b}"),
            Number::Real(v) => weylmax::format::sig17(v),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] weylmax::Error),
    #[error("{0}")]
    Io(String),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Usage(_) => 2,
            CommandError::Core(weylmax::Error::SlackExceeded { .. } | weylmax::Error::Tolerance { .. }) => 1,
            CommandError::Core(_) => 2,
            CommandError::Io(_) => 1,
        }
    }
}

/// What a handler produced: the main output, an optional side document,
/// a human summary for standard error, and whether every checked bound held.
pub struct Report {
    pub text: String,
    pub side: Option<(Option<PathBuf>, String)>,
    pub note: String,
    pub ok: bool,
}

impl Report {
    fn new(text: String, note: String, ok: bool) -> Self {
        Self {
            text,
            side: None,
            note,
            ok,
        }
    }
}

type Outcome = Result<Report, CommandError>;

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Outcome {
    match cmd {
        Command::TotientCheck { ymax } => totient_check(*ymax, cfg.format),
        Command::WeylEval { x, t, n } => weyl_eval(*x, *t, *n),
        Command::GaussCheck { qmax, full } => gauss_check(*qmax, *full, cfg.format),
        Command::FresnelCheck(args) => fresnel_check(args, cfg.format),
        Command::IboundCheck(args) => ibound_check(args, cfg),
        Command::MajorArcCheck {
            n,
            p_thresh,
            samples,
            max_draws,
        } => major_arc_check(*n, *p_thresh, *samples, *max_draws, cfg.seed),
        Command::Maximize { x, n, tol, k } => maximize(*x, *n, *tol, *k, cfg.format),
        Command::LowerBoundCheck { n, all: _, sample } => lower_bound_check(*n, *sample, cfg),
        Command::Mp { n, p, grid } => mp(*n, p, grid, cfg.format),
        Command::Sweep {
            p,
            nmin,
            nmax,
            fit_json,
            grid,
        } => sweep(p, *nmin, *nmax, fit_json.clone(), grid, cfg),
        Command::VerifyAll { only } => verify_all(only, cfg),
    }
}

fn totient_check(ymax: u64, format: Format) -> Outcome {
    let rows = totient_sweep(ymax)?;
    let mut table = Table::new(&["Y", "exact_sum", "main_term", "residual", "residual_over_YlogY"]);
    let mut worst = 0.0f64;
    for r in &rows {
        let scaled = r.residual_over_y_log_y();
        if r.y >= 10 {
            worst = worst.max(scaled.abs());
        }
        table.push(vec![
            r.y.into(),
            r.exact_sum.into(),
            r.main_term().into(),
            r.residual.into(),
            scaled.into(),
        ]);
    }
    let note = format!("max |residual|/(Y log Y) over Y >= 10: {worst:.4} (bound 1)");
    Ok(Report::new(table.render(format), note, worst <= 1.0))
}

fn weyl_eval(x: Number, t: Number, n: u64) -> Outcome {
    let exact = match (x, t) {
        (Number::Ratio(a, b), Number::Ratio(c, d)) if (b as u128) * (d as u128) <= u64::MAX as u128 => Some(
            weyl_sum_exact_grid(RationalGridPoint::wrapped(a, b)?, RationalGridPoint::wrapped(c, d)?, n)?,
        ),
        _ => None,
    };
    let (s, method) = match exact {
        Some(s) => (s, "exact-grid"),
        None => (weyl_sum_dd(x.to_dd()?, t.to_dd()?, n)?, "double-double"),
    };
    let line = json_object(&[
        ("x", x.describe().into()),
        ("t", t.describe().into()),
        ("n", n.into()),
        ("re", s.re.into()),
        ("im", s.im.into()),
        ("abs", s.norm().into()),
        ("method", method.into()),
    ]);
    Ok(Report::new(format!("{line}\n"), String::new(), true))
}

/// `|S(q, a1, 1)|` from the closed form when it applies.
fn closed_abs(q: u64, a1: u64, a2: u64) -> Option<f64> {
    (q % 2 == 1 && a2 == 1 && gcd(a1, q) == 1).then(|| gauss_sum_closed(q, a1).map(|z| z.norm()).ok())?
}

fn gauss_check(qmax: u64, full: bool, format: Format) -> Outcome {
    if qmax == 0 || qmax > MAX_SCAN_MODULUS {
        return Err(CommandError::Usage(format!(
            "--qmax must lie in [1, {MAX_SCAN_MODULUS}]"
        )));
    }
    let mut table = Table::new(&["q", "a1", "a2", "abs_direct", "abs_closed", "ratio_to_sqrt_q"]);
    let mut max_ratio = 0.0f64;
    let mut max_err = 0.0f64;
    for q in 1..=qmax {
        let tables = RootTable::new(q);
        let root = (q as f64).sqrt();
        // the closed form is checked for every a1 even when only extremes are printed
        if q % 2 == 1 {
            for a1 in (0..q).filter(|&a| gcd(a, q) == 1) {
                let err = (gauss_sum_closed(q, a1)? - tables.sum(a1, 1)).norm() / root;
                max_err = max_err.max(err);
            }
        }
        let mut emit = |a1: u64, a2: u64| {
            let direct = tables.sum(a1, a2).norm();
            max_ratio = max_ratio.max(direct / root);
            table.push(vec![
                q.into(),
                a1.into(),
                a2.into(),
                direct.into(),
                closed_abs(q, a1, a2).into(),
                (direct / root).into(),
            ]);
        };
        if full {
            for a1 in 0..q {
                for a2 in (0..q).filter(|&a2| gcd3(q, a1, a2) == 1) {
                    emit(a1, a2);
                }
            }
        } else {
            let w = max_ratio_for_modulus(q).witness;
            emit(w.a1, w.a2);
            // one row per odd modulus where the closed form is defined
            if q % 2 == 1 && q > 1 && (w.a1, w.a2) != (1, 1) {
                emit(1, 1);
            }
        }
    }
    let note = format!(
        "max |S|/sqrt(q) = {max_ratio:.6} (bound 2); max |closed - direct|/sqrt(q) = {max_err:.3e} (bound 1e-9)"
    );
    Ok(Report::new(
        table.render(format),
        note,
        max_ratio <= 2.0 && max_err <= 1e-9,
    ))
}

/// Largest accepted `|lambda|` in the Fresnel check.
const FRESNEL_BOUND: f64 = 0.59;

fn fresnel_check(args: &FresnelArgs, format: Format) -> Outcome {
    let rows = match (args.sweep, args.a, args.x) {
        (true, _, _) => fresnel_sweep(),
        (false, Some(a), Some(x)) => vec![fresnel_residuals(a, x)?],
        _ => {
            return Err(CommandError::Usage(
                "fresnel-check needs --sweep or both --a and --x".into(),
            ))
        }
    };
    let mut table = Table::new(&["A", "X", "AX", "re", "im", "residual", "residual_real_main"]);
    let mut sup = 0.0f64;
    for r in &rows {
        sup = sup.max(r.corrected);
        table.push(vec![
            r.a.into(),
            r.x.into(),
            (r.a * r.x).into(),
            r.value.re.into(),
            r.value.im.into(),
            r.corrected.into(),
            r.stated.into(),
        ]);
    }
    let note = format!(
        "sup |lambda| = {sup:.4} over {} points (bound {FRESNEL_BOUND})",
        rows.len()
    );
    Ok(Report::new(table.render(format), note, sup <= FRESNEL_BOUND))
}

/// Largest accepted `|I(beta)| / min(N, |beta1|^-1, |beta2|^-1/2)`.
const IBOUND_LIMIT: f64 = 3.0;

fn ibound_check(args: &IboundArgs, cfg: &RunConfig) -> Outcome {
    let mut table = Table::new(&["N", "beta1", "beta2", "absI", "ratio"]);
    let rows = match (args.sweep, args.beta1, args.beta2) {
        (true, _, _) => ibound_sweep(&args.n, args.samples, cfg.seed)?
            .into_iter()
            .map(|r| (r.n, r.beta, r.abs_i, r.ratio))
            .collect(),
        (false, Some(b1), Some(b2)) => {
            let [n] = args.n[..] else {
                return Err(CommandError::Usage("a single point needs exactly one --n".into()));
            };
            let beta = FreqPair::new(b1, b2)?;
            let abs_i = i_beta(beta, n)?.norm();
            vec![(n, beta, abs_i, i_bound_ratio(beta, n)?)]
        }
        _ => {
            return Err(CommandError::Usage(
                "ibound-check needs --sweep or both --beta1 and --beta2".into(),
            ))
        }
    };
    let mut sup = 0.0f64;
    for (n, beta, abs_i, ratio) in rows {
        sup = sup.max(ratio);
        table.push(vec![
            n.into(),
            beta.beta1.into(),
            beta.beta2.into(),
            abs_i.into(),
            ratio.into(),
        ]);
    }
    let note = format!("sup ratio = {sup:.4} (bound {IBOUND_LIMIT})");
    Ok(Report::new(table.render(cfg.format), note, sup <= IBOUND_LIMIT))
}

fn major_arc_check(n: u64, p: f64, samples: u64, max_draws: u64, seed: u64) -> Outcome {
    let rep = lemma1_experiment(n, p, samples, seed, max_draws)?;
    let mut text = String::new();
    for r in &rep.rows {
        let a = r.anchor.as_ref();
        let res = r.result.as_ref();
        let line = json_object(&[
            ("x", r.x.into()),
            ("t", r.t.into()),
            ("absS", r.abs_s.into()),
            ("q", a.map(|a| a.q).into()),
            ("a1", a.map(|a| a.a1).into()),
            ("a2", a.map(|a| a.a2).into()),
            ("beta1", a.map(|a| a.beta1).into()),
            ("beta2", a.map(|a| a.beta2).into()),
            ("abs_delta", res.map(|r| r.delta.norm()).into()),
            ("delta_budget", res.map(|r| r.delta_budget).into()),
            ("ratio", res.map(|r| r.ratio()).into()),
        ]);
        text.push_str(&line);
        text.push('\n');
    }
    let note = format!(
        "{}/{} kept samples anchored from {} draws (Qmax = {})",
        rep.successes(),
        rep.kept(),
        rep.draws,
        rep.windows.q_max
    );
    let ok = rep.kept() as u64 == samples && rep.successes() == rep.kept();
    Ok(Report::new(text, note, ok))
}

fn maximize(x: Number, n: u64, tol: Option<f64>, k: u64, format: Format) -> Outcome {
    let tol = tol.unwrap_or_else(|| weylmax::maximal::default_tolerance(n));
    let plan = MaximizerPlan::new(
        n,
        MaximizerConfig {
            k,
            ..MaximizerConfig::default()
        },
    )?;
    let r = plan.maximize(x.to_dd()?, tol)?;
    let mut table = Table::new(&["x", "N", "tol", "t_star", "value_lower", "value_upper"]);
    table.push(vec![
        x.to_f64().into(),
        n.into(),
        tol.into(),
        r.t_star.into(),
        r.value_lower.into(),
        r.value_upper.into(),
    ]);
    let ok = r.value_lower <= r.value_upper;
    Ok(Report::new(table.render(format), String::new(), ok))
}

/// Smallest accepted `|S(x, v(x))| q^(1/2) / N` on `E`.
const LOWER_BOUND_RATIO: f64 = 0.1;

fn lower_bound_check(n: u64, sample: Option<u64>, cfg: &RunConfig) -> Outcome {
    let e = build_e(n)?;
    if e.intervals.is_empty() {
        return Err(CommandError::Usage(format!("E is empty for N = {n}; need N >= 324")));
    }
    let rows = match sample {
        Some(k) => lower_bound_sample(&e, k, cfg.seed)?,
        None => lower_bound_rows(&e, 0.5)?,
    };
    let mut table = Table::new(&["q", "a1", "x", "v", "absS", "ratio", "absI_over_N"]);
    let mut min_ratio = f64::INFINITY;
    let mut min_i = f64::INFINITY;
    for r in &rows {
        min_ratio = min_ratio.min(r.ratio);
        min_i = min_i.min(r.abs_i_over_n);
        table.push(vec![
            r.q.into(),
            r.a1.into(),
            r.x.into(),
            r.v.into(),
            r.abs_s.into(),
            r.ratio.into(),
            r.abs_i_over_n.into(),
        ]);
    }
    let note = format!(
        "{} intervals, {} overlapping pairs; min ratio {min_ratio:.4} (bound {LOWER_BOUND_RATIO}); min |I|/N {min_i:.4}",
        e.intervals.len(),
        e.overlaps
    );
    Ok(Report::new(
        table.render(cfg.format),
        note,
        e.is_disjoint() && min_ratio >= LOWER_BOUND_RATIO,
    ))
}

fn mp_table() -> Table {
    Table::new(&["N", "p", "lower", "mid", "upper", "predicted", "ratio"])
}

fn push_estimate(table: &mut Table, e: &MpEstimate) -> Result<(), CommandError> {
    let pred = predicted(e.n, e.p)?;
    table.push(vec![
        e.n.into(),
        e.p.into(),
        e.lower.into(),
        e.mid().into(),
        e.upper.into(),
        pred.into(),
        (e.mid() / pred).into(),
    ]);
    Ok(())
}

fn mp(n: u64, ps: &[f64], grid: &GridArgs, format: Format) -> Outcome {
    for &p in ps {
        exponents(p)?;
    }
    let profile = MaximalProfile::compute(n, &grid.mp_config())?;
    let mut table = mp_table();
    for &p in ps {
        push_estimate(&mut table, &profile.estimate(p)?)?;
    }
    Ok(Report::new(table.render(format), grid.mp_config().describe(n), true))
}

fn fit_summary(reports: &[SweepReport]) -> Result<String, CommandError> {
    let fit = |f: &LineFit| {
        Cell::Raw(json_object(&[
            ("slope", f.slope.into()),
            ("intercept", f.intercept.into()),
            ("correlation", f.correlation.into()),
        ]))
    };
    let mut fits = Vec::new();
    for r in reports {
        let ns: Vec<Cell> = r.fit_ns.iter().map(|&n| n.into()).collect();
        fits.push(Cell::Raw(json_object(&[
            ("p", r.p.into()),
            ("target_slope", exponents(r.p)?.a.into()),
            ("fit_ns", Cell::Raw(json_array(&ns))),
            ("fit", fit(&r.fit)),
            ("log_fit", r.log_fit.as_ref().map_or(Cell::Null, fit)),
        ])));
    }
    let settings: Vec<Cell> = reports
        .first()
        .map(|r| r.settings.iter().map(|s| s.as_str().into()).collect())
        .unwrap_or_default();
    let doc = json_object(&[
        ("fits", Cell::Raw(json_array(&fits))),
        ("settings", Cell::Raw(json_array(&settings))),
    ]);
    Ok(format!("{doc}\n"))
}

fn sweep(ps: &[f64], nmin: u64, nmax: u64, fit_json: Option<PathBuf>, grid: &GridArgs, cfg: &RunConfig) -> Outcome {
    let reports = dyadic_sweep_multi(ps, nmin, nmax, &grid.mp_config(), cfg.budget_seconds)?;
    let mut table = mp_table();
    for r in &reports {
        for e in &r.estimates {
            push_estimate(&mut table, e)?;
        }
    }
    let note = reports
        .iter()
        .map(|r| format!("p={}: slope {:.4}", r.p, r.fit.slope))
        .collect::<Vec<_>>()
        .join("; ");
    let side_path = fit_json.or_else(|| {
        cfg.output_path.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".fit.json");
            PathBuf::from(s)
        })
    });
    Ok(Report {
        text: table.render(cfg.format),
        side: Some((side_path, fit_summary(&reports)?)),
        note,
        ok: true,
    })
}

fn verify_all(only: &[u32], cfg: &RunConfig) -> Outcome {
    let ids: Vec<u32> = if only.is_empty() {
        CRITERIA.collect()
    } else {
        only.to_vec()
    };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.contains(id)) {
        return Err(CommandError::Usage(format!("no criterion {bad}")));
    }
    let start = Instant::now();
    let mut table = Table::new(&["id", "title", "passed", "limit_seconds", "summary"]);
    let mut lines = Vec::new();
    let mut ok = true;
    for id in ids {
        let mut vc = VerifyConfig {
            seed: cfg.seed,
            ..VerifyConfig::default()
        };
        // only the scaling sweep can trade accuracy for time
        if let Some(b) = cfg.budget_seconds {
            vc.sweep_budget = Some((b - start.elapsed().as_secs_f64()).max(1.0));
        }
        let r = verify::run(id, &vc)?;
        eprintln!("{}", r.line());
        ok &= r.passed;
        table.push(vec![
            r.id.into(),
            r.title.into(),
            r.passed.into(),
            r.limit_seconds.into(),
            r.summary.clone().into(),
        ]);
        lines.push(r);
    }
    let failed: Vec<String> = lines.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    let note = format!(
        "{} of {} criteria pass; failing [{}]",
        lines.len() - failed.len(),
        lines.len(),
        failed.join(",")
    );
    Ok(Report::new(table.render(cfg.format), note, ok))
}
