//! Command execution. Each command builds its inputs from flags, calls the
//! library, writes its report files, prints a short human summary, and
//! returns an [`Outcome`] — verification failures are outcomes, not errors.

use std::path::Path;

use matrix_tails::bounds::GridSpec;
use matrix_tails::ensembles::sample_batch;
use matrix_tails::linalg::io::{load_family, read_matrix_csv};
use matrix_tails::verify::{
    check_dominance, khintchine_check, lemma_suite, mean_norm_study, monte_carlo_tail, tail_csv,
    variance_comparison, DominanceReport, KhintchineRow, LemmaVerdict, MeanNormStudy, Statistic,
    TailReport, VarianceComparison,
};
use matrix_tails::{BoundCurve, EnsembleSpec};
use serde::Serialize;

use crate::args::{
    BoundArgs, Cli, Command, CompareVarianceArgs, EnsembleArgs, EnsembleKind, GridArgs,
    KhintchineArgs, MeanStudyArgs, SimulateArgs, StatArg, VerifyLemmasArgs,
};
use crate::error::CliError;
use crate::report::{curves_csv, write_csv, write_json};
use crate::theorems::build_curves;

pub enum Outcome {
    Success,
    VerificationFailure,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let Cli {
        out,
        deterministic,
        command,
    } = cli;
    match command {
        Command::Bound(args) => bound(&out, deterministic, args),
        Command::Simulate(args) => simulate(&out, deterministic, args),
        Command::VerifyLemmas(args) => verify_lemmas(&out, deterministic, args),
        Command::Khintchine(args) => khintchine(&out, deterministic, args),
        Command::CompareVariance(args) => compare_variance(&out, deterministic, args),
        Command::MeanStudy(args) => mean_study(&out, deterministic, args),
    }
}

fn build_grid(grid: &GridArgs) -> Result<Vec<f64>, CliError> {
    let max = grid
        .t_max
        .ok_or_else(|| CliError::Config("--t-max is required (or pass a single --t)".into()))?;
    let spec = GridSpec {
        min: grid.t_min,
        max,
        count: grid.t_count,
        log_spaced: grid.log_grid,
    };
    Ok(spec.build()?)
}

fn build_spec(args: &EnsembleArgs) -> Result<EnsembleSpec, CliError> {
    if let Some(path) = &args.spec_json {
        let text = std::fs::read_to_string(path)?;
        return Ok(serde_json::from_str(&text)?);
    }
    let kind = args
        .ensemble
        .expect("clap guarantees --ensemble unless --spec-json is given");
    let dim = |flag: &str| {
        args.dim
            .ok_or_else(|| CliError::Config(format!("--ensemble {flag} requires --dim")))
    };
    let n = |flag: &str| {
        args.n
            .ok_or_else(|| CliError::Config(format!("--ensemble {flag} requires --n")))
    };
    let family = |flag: &str| -> Result<_, CliError> {
        let path = args.family.as_deref().ok_or_else(|| {
            CliError::Config(format!("--ensemble {flag} requires --family <dir or json>"))
        })?;
        Ok(load_family(path, true)?)
    };
    Ok(match kind {
        EnsembleKind::Goe => EnsembleSpec::Goe { dim: dim("goe")? },
        EnsembleKind::DiagGaussian => EnsembleSpec::DiagGaussian {
            dim: dim("diag-gaussian")?,
        },
        EnsembleKind::Coupon => EnsembleSpec::Coupon {
            dim: dim("coupon")?,
            n_summands: n("coupon")?,
        },
        EnsembleKind::RankOnePsd => EnsembleSpec::RankOnePsd {
            dim: dim("rank-one-psd")?,
            n_summands: n("rank-one-psd")?,
        },
        EnsembleKind::GaussianSeries => EnsembleSpec::GaussianSeries {
            coefficients: family("gaussian-series")?,
        },
        EnsembleKind::RademacherSeries => EnsembleSpec::RademacherSeries {
            coefficients: family("rademacher-series")?,
        },
        EnsembleKind::SignModulated => EnsembleSpec::SignModulated {
            coefficients: family("sign-modulated")?,
        },
        EnsembleKind::NonuniformGaussian => {
            let path = args.base.as_deref().ok_or_else(|| {
                CliError::Config("--ensemble nonuniform-gaussian requires --base <csv>".into())
            })?;
            EnsembleSpec::NonuniformGaussian {
                base: read_matrix_csv(path)?,
            }
        }
    })
}

fn statistic_of(stat: StatArg) -> Statistic {
    match stat {
        StatArg::LambdaMax => Statistic::LambdaMax,
        StatArg::LambdaMin => Statistic::LambdaMin,
        StatArg::Norm => Statistic::SpectralNorm,
    }
}

// --- bound ------------------------------------------------------------------

#[derive(Serialize)]
struct BoundReport {
    curves: Vec<BoundCurve>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_star: Option<Vec<f64>>,
}

fn bound(out: &Path, deterministic: bool, args: BoundArgs) -> Result<Outcome, CliError> {
    let single = args.t;
    let grid = match single {
        Some(t) => {
            if !t.is_finite() {
                return Err(CliError::Config("--t must be finite".into()));
            }
            vec![t]
        }
        None => build_grid(&args.grid)?,
    };
    let set = build_curves(args.theorem, &args.params, args.n, grid)?;
    let csv_path = write_csv(out, "bound", &curves_csv(&set.curves))?;
    let json_path = write_json(
        out,
        "bound",
        deterministic,
        &args,
        BoundReport {
            curves: set.curves.clone(),
            theta_star: set.theta_star,
        },
    )?;
    if single.is_some() {
        println!("{}", set.curves[0].values[0]);
    } else {
        println!(
            "evaluated {} on {} thresholds",
            set.curves[0].label,
            set.curves[0].t_grid.len()
        );
    }
    eprintln!("report: {} curves: {}", json_path.display(), csv_path.display());
    Ok(Outcome::Success)
}

// --- simulate -----------------------------------------------------------------

#[derive(Serialize)]
struct SimulateReport {
    tail: TailReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    curves: Vec<BoundCurve>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_star: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dominance: Option<DominanceReport>,
}

/// Default grid when `--t-max` is absent: span of the statistic over a
/// small pilot batch (deterministic in the seed), floored at zero so
/// psd lower tails always include `t = 0`.
fn pilot_grid(
    spec: &EnsembleSpec,
    stat: Statistic,
    args: &SimulateArgs,
) -> Result<Vec<f64>, CliError> {
    let count = args.trials.min(1_000) as usize;
    let batch = sample_batch(spec, args.seed, 0, count)?;
    let values: Vec<f64> = batch.realizations.iter().map(|m| stat.evaluate(m)).collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min).min(0.0);
    let mut hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    let spec = GridSpec {
        min: lo,
        max: hi,
        count: args.grid.t_count,
        log_spaced: args.grid.log_grid,
    };
    Ok(spec.build()?)
}

fn simulate(out: &Path, deterministic: bool, args: SimulateArgs) -> Result<Outcome, CliError> {
    let spec = build_spec(&args.ensemble)?;
    let stat = statistic_of(args.stat);
    let grid = if args.grid.t_max.is_some() {
        build_grid(&args.grid)?
    } else {
        pilot_grid(&spec, stat, &args)?
    };
    let tail = monte_carlo_tail(&spec, stat, &grid, args.trials, args.seed)?;

    let mut curves = Vec::new();
    let mut theta_star = None;
    let mut dominance = None;
    if let Some(theorem) = args.theorem {
        let set = build_curves(theorem, &args.params, args.ensemble.n, grid)?;
        dominance = Some(check_dominance(&tail, &set.curves[0])?);
        curves = set.curves;
        theta_star = set.theta_star;
    }

    let csv = tail_csv(&tail, curves.first())?;
    let csv_path = write_csv(out, "simulate", &csv)?;
    let pass = dominance.as_ref().map_or(true, |d| d.pass);
    println!(
        "{} over {} trials: tail at t = {} is {} [{}, {}]",
        tail.statistic.label(),
        tail.trials,
        tail.t_grid[0],
        tail.empirical[0],
        tail.ci_low[0],
        tail.ci_high[0],
    );
    if let Some(d) = &dominance {
        println!(
            "dominance vs {}: {}",
            d.curve_label,
            if d.pass { "PASS" } else { "FAIL" }
        );
    }
    let json_path = write_json(
        out,
        "simulate",
        deterministic,
        &args,
        SimulateReport {
            tail,
            curves,
            theta_star,
            dominance,
        },
    )?;
    eprintln!("report: {} curves: {}", json_path.display(), csv_path.display());
    Ok(if pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailure
    })
}

// --- verify-lemmas ---------------------------------------------------------------

#[derive(Serialize)]
struct LemmaReport {
    verdicts: Vec<LemmaVerdict>,
    all_pass: bool,
}

fn verify_lemmas(
    out: &Path,
    deterministic: bool,
    args: VerifyLemmasArgs,
) -> Result<Outcome, CliError> {
    let verdicts = lemma_suite(args.dim, args.instances, args.seed, args.tol)?;
    let all_pass = verdicts.iter().all(|v| v.pass);
    for v in &verdicts {
        println!(
            "{:<11} instances {:>5}  worst {:>13.4e}  {}",
            v.lemma_id,
            v.instances,
            v.worst_violation,
            if v.pass { "pass" } else { "FAIL" }
        );
    }
    println!(
        "lemma suite: {}",
        if all_pass { "all pass" } else { "FAILURES" }
    );
    write_json(
        out,
        "verify-lemmas",
        deterministic,
        &args,
        LemmaReport { verdicts, all_pass },
    )?;
    Ok(if all_pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailure
    })
}

// --- khintchine --------------------------------------------------------------------

#[derive(Serialize)]
struct KhintchineReport {
    rows: Vec<KhintchineRow>,
    max_ratio: f64,
    pass: bool,
}

fn khintchine(out: &Path, deterministic: bool, args: KhintchineArgs) -> Result<Outcome, CliError> {
    let family = load_family(&args.family, true)?;
    let members = family.as_self_adjoint()?;
    let rows = khintchine_check(members, args.p_max)?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let pass = rows.iter().all(|r| r.ratio <= 1.0 + args.tol);
    for r in &rows {
        println!(
            "2p = {:>2}  moment {:>14.6e}  ceiling {:>14.6e}  ratio {:.12}",
            2 * r.p,
            r.lhs,
            r.rhs,
            r.ratio
        );
    }
    write_json(
        out,
        "khintchine",
        deterministic,
        &args,
        KhintchineReport {
            rows,
            max_ratio,
            pass,
        },
    )?;
    Ok(if pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailure
    })
}

// --- compare-variance ------------------------------------------------------------------

#[derive(Serialize)]
struct VarianceReport {
    comparison: VarianceComparison,
    pass: bool,
}

fn compare_variance(
    out: &Path,
    deterministic: bool,
    args: CompareVarianceArgs,
) -> Result<Outcome, CliError> {
    let family = load_family(&args.family, true)?;
    let cmp = variance_comparison(&family, args.restarts, args.seed)?;
    let pass = cmp.chain_ok;
    println!(
        "dim {}  members {}  weak {:.6e}  pooled {:.6e}  summed {:.6e}  summed/pooled {:.4}  chain {}",
        cmp.dim,
        cmp.n_members,
        cmp.weak_estimate,
        cmp.sigma2,
        cmp.sigma2_aw,
        cmp.aw_over_sigma2,
        if pass { "ok" } else { "VIOLATED" }
    );
    write_json(
        out,
        "compare-variance",
        deterministic,
        &args,
        VarianceReport {
            comparison: cmp,
            pass,
        },
    )?;
    Ok(if pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailure
    })
}

// --- mean-study ----------------------------------------------------------------------------

#[derive(Serialize)]
struct MeanStudyReport {
    study: MeanNormStudy,
    pass: bool,
}

fn mean_study(out: &Path, deterministic: bool, args: MeanStudyArgs) -> Result<Outcome, CliError> {
    let spec = build_spec(&args.ensemble)?;
    let study = mean_norm_study(&spec, args.trials, args.seed)?;
    let pass = study.lower_ok && study.upper_ok;
    println!(
        "{} (dim {}): mean norm {:.6} +- {:.6} over {} trials",
        study.tag, study.dim, study.mean_norm, study.stderr_norm, study.trials
    );
    println!(
        "references: floor {:.6}  ceiling {:.6}{}",
        study.lower_reference,
        study.upper_reference,
        match study.sharp_upper {
            Some(s) => format!("  sharp {s:.6}"),
            None => String::new(),
        }
    );
    println!("bracket: {}", if pass { "ok" } else { "VIOLATED" });
    write_json(
        out,
        "mean-study",
        deterministic,
        &args,
        MeanStudyReport { study, pass },
    )?;
    Ok(if pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailure
    })
}
