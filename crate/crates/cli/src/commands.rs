use std::fs;
use std::io::Write;
use std::path::Path;

use arcwidom::asymptotics::{
    predict_lemniscate_limit, predict_pointwise_limit, residual_modulus_profile, richardson_extrapolate,
    szego_widom_bounds,
};
use arcwidom::lemniscate::{direct_vs_reduced, reduce};
use arcwidom::minimax::{default_grid_size, residual_widom_factor, solve_minimax, widom_factor, SolutionExport};
use arcwidom::potential::{c_r_alpha, green_inf, harmonic_measure_log_integral, mu_log_integral};
use arcwidom::{
    ArcDomain, ComplexPoint, Error, Grid, LemniscateSpec, Normalization, PolySolution, SolverConfig, WeightSpec,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{GridArgs, LemniscateArgs, PotentialArgs, PredictArgs, SolveArgs, SweepArgs, WeightArgs};
use crate::error::{CliError, CliResult};
use crate::svg;

/// Largest acceptable fit residual for `sweep --extrapolate`.
const EXTRAPOLATION_RESIDUAL: f64 = 1e-2;
/// Slack in the per-row Szegő check.
const SZEGO_SLACK: f64 = 1e-3;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Prints a line to stdout; a closed pipe is not an error.
fn emit(text: impl std::fmt::Display) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

fn load_weight(path: &Path) -> CliResult<WeightSpec> {
    Ok(WeightSpec::from_json(&read(path)?)?)
}

fn weight_of(args: &WeightArgs) -> CliResult<WeightSpec> {
    match &args.weight {
        Some(p) => load_weight(p),
        None => Ok(WeightSpec::unit()),
    }
}

fn arc_grid(
    domain: &ArcDomain,
    n: usize,
    grid: &GridArgs,
    weight: &WeightSpec,
    allow_singular: bool,
) -> CliResult<Grid> {
    let size = grid.grid.unwrap_or_else(|| default_grid_size(n));
    Ok(Grid::weighted(
        domain,
        size,
        grid.strategy.into(),
        weight,
        allow_singular,
    )?)
}

#[derive(Serialize)]
struct Scalar {
    quantity: &'static str,
    value: f64,
}

pub fn potential(args: &PotentialArgs) -> CliResult<()> {
    let domain = ArcDomain::new(args.angle.radians())?;
    let check = |w: &WeightSpec| w.validate(&domain, args.allow_singular);
    let out = if let Some(z) = args.green {
        Scalar {
            quantity: "green",
            value: green_inf(z, &domain)?,
        }
    } else if args.cap {
        Scalar {
            quantity: "capacity",
            value: domain.capacity(),
        }
    } else if let Some(r) = args.c_r {
        Scalar {
            quantity: "c_r_alpha",
            value: c_r_alpha(r, &domain)?,
        }
    } else if let Some(path) = &args.mu_log_int {
        let w = load_weight(path)?;
        check(&w)?;
        Scalar {
            quantity: "mu_log_integral",
            value: mu_log_integral(&w, &domain)?,
        }
    } else if let Some(path) = &args.omega_log_int {
        let w = load_weight(path)?;
        check(&w)?;
        let u0 = args.point.expect("clap requires --point");
        Scalar {
            quantity: "omega_log_integral",
            value: harmonic_measure_log_integral(&w, u0, &domain)?,
        }
    } else {
        unreachable!("clap requires one quantity")
    };
    emit(serde_json::to_string(&out).expect("serializable output"))?;
    Ok(())
}

/// Widom factor `e^{n g(u0)} ‖w T_n(·, u0)‖`, which is `‖w T_n‖ / Cap^n` at infinity.
fn widom_of(sol: &PolySolution, domain: &ArcDomain) -> CliResult<f64> {
    Ok(match sol.normalization.point() {
        ComplexPoint::Infinity => widom_factor(sol, domain.capacity()),
        u0 => residual_widom_factor(sol, green_inf(u0, domain)?),
    })
}

#[derive(Serialize)]
struct SolveOutput {
    alpha: f64,
    grid: usize,
    widom: f64,
    solution: SolutionExport,
}

/// Runs a solve, keeping the best iterate when the solver gives up.
fn solve_keeping_partial(grid: &Grid, n: usize, normalization: Normalization) -> CliResult<(PolySolution, bool)> {
    match solve_minimax(grid, n, normalization, &SolverConfig::default()) {
        Ok(sol) => Ok((sol, true)),
        Err(Error::NoConvergence { solution }) => Ok((*solution, false)),
        Err(e) => Err(e.into()),
    }
}

pub fn solve(args: &SolveArgs) -> CliResult<()> {
    let domain = ArcDomain::new(args.angle.radians())?;
    let weight = weight_of(&args.weight)?;
    let grid = arc_grid(&domain, args.n, &args.grid, &weight, args.weight.allow_singular)?;
    let (sol, converged) = solve_keeping_partial(&grid, args.n, Normalization::from_point(args.point))?;
    let out = SolveOutput {
        alpha: domain.alpha(),
        grid: grid.len(),
        widom: widom_of(&sol, &domain)?,
        solution: sol.export(),
    };
    let text = to_json(&out);
    match &args.out {
        Some(path) => {
            write(path, &text)?;
            emit(
                serde_json::json!({"norm": sol.norm, "widom": out.widom, "certificate": sol.certificate, "converged": converged, "out": path}),
            )?;
        }
        None => emit(&text)?,
    }
    if converged {
        Ok(())
    } else {
        Err(CliError::NoConvergence(format!(
            "degree {} did not converge; best iterate written with converged = false",
            args.n
        )))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub grid: usize,
    pub norm: f64,
    pub widom: f64,
    pub certificate: f64,
    pub predicted: f64,
    /// Fit of this row and all earlier ones, once there are three.
    pub extrapolated: Option<f64>,
    pub converged: bool,
    /// Certificate above tolerance, or the Widom factor below the Szegő bound.
    pub flagged: bool,
}

#[derive(Serialize)]
struct SweepSummary {
    alpha: f64,
    point: ComplexPoint,
    predicted: f64,
    lower_bound: Option<f64>,
    upper_bound: Option<f64>,
    extrapolated: Option<f64>,
    fit_residual: Option<f64>,
    rows: Vec<SweepRecord>,
}

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    let domain = ArcDomain::new(args.angle.radians())?;
    let weight = weight_of(&args.weight)?;
    weight.validate(&domain, args.weight.allow_singular)?;
    let prediction = predict_pointwise_limit(&weight, args.point, &domain)?;
    let szego = match args.point {
        ComplexPoint::Infinity => Some(szego_widom_bounds(&weight, &domain)?),
        _ => None,
    };
    let normalization = Normalization::from_point(args.point);
    let tolerance = SolverConfig::default().certificate_tolerance;

    // Results are collected in degree order whatever the completion order.
    let mut rows = args
        .n
        .values()
        .par_iter()
        .map(|&n| -> CliResult<SweepRecord> {
            let grid = arc_grid(&domain, n, &args.grid, &weight, args.weight.allow_singular)?;
            let (sol, converged) = solve_keeping_partial(&grid, n, normalization)?;
            let widom = widom_of(&sol, &domain)?;
            let certified = sol.certificate <= tolerance;
            let below_szego = szego.is_some_and(|(lo, _)| widom < lo - SZEGO_SLACK);
            Ok(SweepRecord {
                n,
                grid: grid.len(),
                norm: sol.norm,
                widom,
                certificate: sol.certificate,
                predicted: prediction.value,
                extrapolated: None,
                converged,
                flagged: !converged || !certified || below_szego,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let ws: Vec<f64> = rows.iter().map(|r| r.widom).collect();
    for i in 2..rows.len() {
        rows[i].extrapolated = richardson_extrapolate(&ns[..=i], &ws[..=i]).ok().map(|f| f.limit);
    }
    let fit = if args.extrapolate {
        Some(richardson_extrapolate(&ns, &ws)?)
    } else {
        None
    };

    if let Some(path) = &args.csv {
        write(path, &sweep_csv(&rows)?)?;
    }
    if let Some(path) = &args.svg {
        write(
            path,
            &svg::widom_chart(&rows, prediction.value, fit.as_ref().map(|f| f.limit)),
        )?;
    }
    let summary = SweepSummary {
        alpha: domain.alpha(),
        point: args.point,
        predicted: prediction.value,
        lower_bound: szego.map(|b| b.0),
        upper_bound: szego.map(|b| b.1),
        extrapolated: fit.as_ref().map(|f| f.limit),
        fit_residual: fit.as_ref().map(|f| f.residual),
        rows,
    };
    emit(to_json(&summary))?;

    if let Some(r) = summary.rows.iter().find(|r| !r.converged) {
        return Err(CliError::NoConvergence(format!(
            "degree {} did not converge; its row is flagged",
            r.n
        )));
    }
    if let Some(f) = fit {
        if f.residual > EXTRAPOLATION_RESIDUAL {
            return Err(CliError::Extrapolation {
                residual: f.residual,
                limit: EXTRAPOLATION_RESIDUAL,
            });
        }
    }
    Ok(())
}

pub fn sweep_csv(rows: &[SweepRecord]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Parse(e.to_string());
    w.write_record(["n", "grid", "norm", "widom", "certificate", "predicted", "extrapolated"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.grid.to_string(),
            r.norm.to_string(),
            r.widom.to_string(),
            r.certificate.to_string(),
            r.predicted.to_string(),
            r.extrapolated.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

#[derive(Serialize)]
struct LemniscateOutput {
    m: u32,
    r: f64,
    alpha: f64,
    l: u32,
    n: usize,
    degree: usize,
    capacity: f64,
    /// `r^n · ‖w T_n‖` on the arc, equal to the sup norm on the lemniscate.
    norm: f64,
    reduced_norm: f64,
    scale: f64,
    widom: f64,
    widom_predicted: f64,
    near_singular: bool,
}

pub fn lemniscate(args: &LemniscateArgs) -> CliResult<()> {
    let spec = LemniscateSpec::new(args.m, args.r, args.angle.radians(), args.l)?;
    let size = args.grid.grid.unwrap_or_else(|| default_grid_size(args.n));
    let strategy = args.grid.strategy.into();
    let cfg = SolverConfig::default();
    if spec.near_singular() {
        eprintln!("widom: warning: r is within 1e-3 of 1; the set is nearly singular at 0");
    }
    if args.compare {
        let record = direct_vs_reduced(&spec, args.n, size, strategy, &cfg)?;
        emit(to_json(&record))?;
        return Ok(());
    }
    let lifted = reduce(&spec, args.n, size, strategy, &cfg)?;
    let out = LemniscateOutput {
        m: spec.m,
        r: spec.r,
        alpha: spec.alpha,
        l: spec.l,
        n: args.n,
        degree: spec.degree(args.n),
        capacity: spec.capacity(),
        norm: lifted.norm,
        reduced_norm: lifted.reduced.norm,
        scale: spec.r.powi(args.n as i32),
        widom: lifted.widom_factor(),
        widom_predicted: predict_lemniscate_limit(&spec)?.value,
        near_singular: spec.near_singular(),
    };
    emit(to_json(&out))?;
    Ok(())
}

pub fn predict(args: &PredictArgs) -> CliResult<()> {
    let alpha = args.angle.radians();
    let domain = ArcDomain::new(alpha)?;
    let report = if let Some(t) = args.lemniscate {
        predict_lemniscate_limit(&LemniscateSpec::new(t.m, t.r, alpha, t.l)?)?
    } else {
        let weight = weight_of(&args.weight)?;
        weight.validate(&domain, args.weight.allow_singular)?;
        let u0 = args.point.unwrap_or(ComplexPoint::Infinity);
        if args.profile.is_empty() {
            match u0 {
                ComplexPoint::Infinity => arcwidom::asymptotics::predict_widom_limit(&weight, &domain)?,
                _ => predict_pointwise_limit(&weight, u0, &domain)?,
            }
        } else {
            residual_modulus_profile(&weight, u0, &args.profile, &domain)?
        }
    };
    emit(to_json(&report))?;
    Ok(())
}
