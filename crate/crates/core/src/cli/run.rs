use std::f64::consts::PI;

use thiserror::Error;

use crate::analytic::{
    compare_means, ehrenfest_check_for, marginal_density, mean_postselected, port_mean_momenta,
    port_probabilities, postselected_norm, reduced_state, term_decomposition,
};
use crate::error::Error;
use crate::experiment::{derive_setup, tune_separation_for_alpha, DerivedSetup};
use crate::model::{Electron, InterferometerParams, PortPair};
use crate::numeric::{Distribution1D, MomentumGrid};

use super::config::{AxisSpec, Branch, ConfigError, Job, RunConfig, SweepSpec, VerifySpec};
use super::table::{write_table, Cell, Table, WriteError};
use super::verify::run_suites;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] Error),
    #[error(transparent)]
    Write(#[from] WriteError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Model(_) => 3,
            RunError::Write(_) => 4,
        }
    }
}

/// Result of one run: the data table, human-readable summary lines, and
/// whether every requested check passed (only `verify` can fail here).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
    pub passed: bool,
}

/// Compute the artifact for a configuration without touching the filesystem.
pub fn execute(config: &RunConfig) -> Result<Outcome, RunError> {
    let outcome = match &config.job {
        Job::Distributions {
            params,
            branch,
            axis,
        } => distributions(params, *branch, axis)?,
        Job::Decompose { params, axis } => decompose(params, axis)?,
        Job::Sweep(spec) => sweep(spec)?,
        Job::Ports { params } => ports(params),
        Job::Design { inputs, tune } => {
            let setup = derive_setup(inputs)?;
            let tuned = tune
                .map(|mode| tune_separation_for_alpha(inputs, mode))
                .transpose()?;
            design(
                &setup,
                tuned.as_ref().map(|t| (t.multiple, t.separation, t.alpha)),
            )
        }
        Job::Verify(spec) => verify(spec)?,
    };
    Ok(outcome)
}

/// [`execute`], then write the table to `config.out` when one is set.
pub fn run(config: &RunConfig) -> Result<Outcome, RunError> {
    let outcome = execute(config)?;
    if let Some(path) = &config.out {
        write_table(&outcome.table, config.format, path)?;
    }
    Ok(outcome)
}

fn axis_points(axis: &AxisSpec) -> Result<Vec<f64>, Error> {
    Ok(MomentumGrid::symmetric(axis.half_width, axis.points)?.points())
}

/// Simpson quadrature of the normalized closed-form marginal on a grid wide
/// enough for both branches.
fn quadrature_mean(params: &InterferometerParams, electron: Electron) -> Result<f64, Error> {
    let grid = MomentumGrid::symmetric(8.0 + params.delta_over_width(), 2001)?;
    let values = grid
        .points()
        .iter()
        .map(|&p| marginal_density(params, electron, p, true))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Distribution1D::new(grid, values)?.mean())
}

fn fmt(v: f64) -> String {
    format!("{v:+.6}")
}

fn distributions(
    params: &InterferometerParams,
    branch: Branch,
    axis: &AxisSpec,
) -> Result<Outcome, Error> {
    let mut table = Table::new(["p_over_W", "P1", "P2"]);
    let mut summary = vec![format!(
        "distributions: delta/W = {}, phi = {:.6} rad ({:.4} pi), alpha = {:.6} rad",
        params.delta_over_width(),
        params.phi(),
        params.phi() / PI,
        params.alpha()
    )];
    let kicked1 = params.kicked_packet(Electron::One);
    let kicked2 = params.kicked_packet(Electron::Two);
    let plain = params.packet();
    for p in axis_points(axis)? {
        let (p1, p2) = match branch {
            Branch::Unshifted => (plain.eval(p)?.powi(2), plain.eval(p)?.powi(2)),
            Branch::Shifted => (kicked1.eval(p)?.powi(2), kicked2.eval(p)?.powi(2)),
            Branch::PostSelected => (
                marginal_density(params, Electron::One, p, true)?,
                marginal_density(params, Electron::Two, p, true)?,
            ),
        };
        table.push(vec![p.into(), p1.into(), p2.into()]);
    }
    match branch {
        Branch::Unshifted => summary.push("branch: unshifted packets |Phi|^2, mean 0".into()),
        Branch::Shifted => summary.push(format!(
            "branch: kicked packets, mean_p1_over_W = {}, mean_p2_over_W = {}",
            fmt(kicked1.center()),
            fmt(kicked2.center())
        )),
        Branch::PostSelected => {
            let means = compare_means(params);
            let quad = quadrature_mean(params, Electron::One)?;
            let quad2 = quadrature_mean(params, Electron::Two)?;
            summary.push("branch: post-selected (D1, C2) marginals".into());
            summary.push(format!(
                "mean_p1_over_W (quadrature of marginal)  = {}",
                fmt(quad)
            ));
            summary.push(format!(
                "mean_p2_over_W (quadrature of marginal)  = {}",
                fmt(quad2)
            ));
            summary.push(format!(
                "mean_p1_over_W (consistent closed form, I^2) = {}",
                fmt(mean_postselected(params, Electron::One)?)
            ));
            match means {
                Ok(m) => {
                    summary.push(format!(
                        "mean_p1_over_W (printed form, I)            = {}",
                        fmt(m.printed)
                    ));
                    summary.push(format!(
                        "printed minus consistent                   = {}",
                        fmt(m.difference())
                    ));
                }
                Err(e) => summary.push(format!("printed form: undefined ({e})")),
            }
            let purity = reduced_state(params, Electron::One)?.purity();
            summary.push(format!(
                "reduced-state purity                       = {purity:.6}"
            ));
        }
    }
    Ok(Outcome {
        table,
        summary,
        passed: true,
    })
}

fn decompose(params: &InterferometerParams, axis: &AxisSpec) -> Result<Outcome, Error> {
    let mut table = Table::new(["p_over_W", "T_a", "T_b", "P1_unnormalized"]);
    for p in axis_points(axis)? {
        let terms = term_decomposition(params, p);
        let total = marginal_density(params, Electron::One, p, false)?;
        table.push(vec![
            p.into(),
            terms.diagonal.into(),
            terms.interference.into(),
            total.into(),
        ]);
    }
    let summary = vec![
        format!(
            "decompose: delta/W = {}, phi = {:.6} rad, alpha = {:.6} rad",
            params.delta_over_width(),
            params.phi(),
            params.alpha()
        ),
        format!(
            "norm of P1 (1 + cos^2 phi + 2 cos phi cos alpha I^2) = {:.6}",
            postselected_norm(params)
        ),
        format!(
            "mean_p1_over_W = {}",
            fmt(mean_postselected(params, Electron::One)?)
        ),
    ];
    Ok(Outcome {
        table,
        summary,
        passed: true,
    })
}

fn sweep(spec: &SweepSpec) -> Result<Outcome, Error> {
    let mut table = Table::new([
        "delta_over_W",
        "phi_rad",
        "mean_p1_over_W",
        "mean_p1_printed_over_W",
        "difference_over_W",
    ]);
    let (mut anomalous, mut anomalous_printed, mut dark) = (0usize, 0usize, 0usize);
    let mut best = f64::NEG_INFINITY;
    let phis = spec.phi.values();
    for delta in spec.delta_over_w.values() {
        for &phi in &phis {
            let params = InterferometerParams::new(spec.r, phi, spec.alpha, delta, 1.0)?;
            let consistent = mean_postselected(&params, Electron::One).ok();
            let printed = crate::analytic::mean_eq14_printed(&params).ok();
            if consistent.is_none() {
                dark += 1;
            }
            if let Some(m) = consistent {
                anomalous += usize::from(m > 0.0);
                best = best.max(m);
            }
            anomalous_printed += usize::from(printed.is_some_and(|m| m > 0.0));
            let diff = consistent.zip(printed).map(|(a, b)| b - a);
            table.push(vec![
                delta.into(),
                phi.into(),
                consistent.into(),
                printed.into(),
                diff.into(),
            ]);
        }
    }
    let total = table.rows().len();
    let summary = vec![
        format!(
            "sweep: {} x {} points, r = {}, alpha = {} rad",
            spec.delta_over_w.steps, spec.phi.steps, spec.r, spec.alpha
        ),
        format!("anomalous (positive) mean, consistent form: {anomalous} of {total}"),
        format!("anomalous (positive) mean, printed form: {anomalous_printed} of {total}"),
        format!("largest consistent mean_p1_over_W: {}", fmt(best)),
        format!("dark points (undefined mean): {dark}"),
    ];
    Ok(Outcome {
        table,
        summary,
        passed: true,
    })
}

fn ports(params: &InterferometerParams) -> Outcome {
    let probs = port_probabilities(params);
    let m1 = port_mean_momenta(params, Electron::One);
    let m2 = port_mean_momenta(params, Electron::Two);
    let e1 = ehrenfest_check_for(params, Electron::One);
    let e2 = ehrenfest_check_for(params, Electron::Two);
    let mut table = Table::new(["port", "probability", "mean_p1_over_W", "mean_p2_over_W"]);
    let mut summary = vec![format!(
        "ports: r = {:.6}, t = {:.6}, delta/W = {}, phi = {:.6} rad, alpha = {:.6} rad",
        params.r(),
        params.t(),
        params.delta_over_width(),
        params.phi(),
        params.alpha()
    )];
    for port in PortPair::ALL {
        table.push(vec![
            port.label().into(),
            probs.get(port).into(),
            m1.get(port).into(),
            m2.get(port).into(),
        ]);
        let show = |m: Option<f64>| m.map_or("undefined".to_string(), fmt);
        summary.push(format!(
            "{port}: P = {:.6}, <p1>/W = {}, <p2>/W = {}",
            probs.get(port),
            show(m1.get(port)),
            show(m2.get(port))
        ));
    }
    let sum: f64 = PortPair::ALL.iter().map(|&p| probs.get(p)).sum();
    table.push(vec![
        "total".into(),
        sum.into(),
        e1.weighted_sum.into(),
        e2.weighted_sum.into(),
    ]);
    summary.push(format!("sum of probabilities = {sum:.15}"));
    summary.push(format!(
        "Ehrenfest (electron 1): -2 t^2 r^2 delta/W = {}, weighted sum = {}, deviation = {:.3e}",
        fmt(e1.closed_form),
        fmt(e1.weighted_sum),
        e1.deviation()
    ));
    summary.push(format!(
        "total two-electron mean momentum / W = {:.3e}",
        e1.weighted_sum + e2.weighted_sum
    ));
    Outcome {
        table,
        summary,
        passed: true,
    }
}

fn design(setup: &DerivedSetup, tuned: Option<(i64, f64, f64)>) -> Outcome {
    let mut columns = vec![
        "separation_m",
        "t_transit_s",
        "force_N",
        "delta_kg_m_per_s",
        "width_W_kg_m_per_s",
        "delta_over_W",
        "alpha_rad",
        "alpha_over_pi",
        "fringe_spacing_m",
        "spread_longitudinal_m",
        "spread_transverse_relative",
        "kinetic_scale_J",
        "potential_scale_J",
    ];
    let mut row: Vec<Cell> = [
        setup.inputs.separation,
        setup.t_transit,
        setup.force,
        setup.delta,
        setup.width_w,
        setup.delta_over_w,
        setup.alpha,
        setup.alpha_over_pi(),
        setup.fringe_spacing,
        setup.spread_longitudinal,
        setup.spread_transverse_relative,
        setup.kinetic_scale,
        setup.potential_scale,
    ]
    .into_iter()
    .map(Cell::from)
    .collect();

    let mut summary = vec![
        format!(
            "design: d = {:.4e} m, L = {:.4e} m, v = {:.4e} m/s",
            setup.inputs.separation, setup.inputs.length, setup.inputs.speed
        ),
        format!("transit time           t   = {:.4e} s", setup.t_transit),
        format!("Coulomb force          F   = {:.4e} N", setup.force),
        format!("momentum kick          delta = {:.4e} kg m/s", setup.delta),
        format!("momentum width         W   = {:.4e} kg m/s", setup.width_w),
        format!("delta_over_W               = {:.4}", setup.delta_over_w),
        format!(
            "alpha                      = {:.4} rad = {:.4} pi",
            setup.alpha,
            setup.alpha_over_pi()
        ),
        format!(
            "fringe spacing h/delta     = {:.4e} m",
            setup.fringe_spacing
        ),
        format!(
            "longitudinal width at exit = {:.4e} m",
            setup.spread_longitudinal
        ),
        format!(
            "transverse relative growth = {:.4e}",
            setup.spread_transverse_relative
        ),
        format!("kinetic scale (2W)^2/2m    = {:.4e} J", setup.kinetic_scale),
        format!(
            "potential scale            = {:.4e} J",
            setup.potential_scale
        ),
    ];
    let mut names = Vec::new();
    for check in &setup.validity {
        names.push((
            format!("{}_ratio", check.name),
            format!("{}_pass", check.name),
        ));
        row.push(check.ratio.into());
        row.push(if check.passed { "pass" } else { "fail" }.into());
        summary.push(format!(
            "check {:<36} ratio = {:.4e} ({} {:.1e}) {}",
            check.name,
            check.ratio,
            if check.at_least { ">=" } else { "<=" },
            check.threshold,
            if check.passed { "PASS" } else { "FAIL" }
        ));
    }
    if let Some((multiple, separation, alpha)) = tuned {
        row.push(separation.into());
        row.push(alpha.into());
        summary.push(format!(
            "tuned separation for |alpha| = {}pi: d = {:.4e} m, alpha = {:.6} pi",
            2 * multiple,
            separation,
            alpha / PI
        ));
    }
    let mut all_columns: Vec<String> = columns.drain(..).map(String::from).collect();
    for (ratio, pass) in names {
        all_columns.push(ratio);
        all_columns.push(pass);
    }
    if tuned.is_some() {
        all_columns.push("tuned_separation_m".into());
        all_columns.push("tuned_alpha_rad".into());
    }
    let mut table = Table::new(all_columns);
    table.push(row);
    Outcome {
        table,
        summary,
        passed: true,
    }
}

fn verify(spec: &VerifySpec) -> Result<Outcome, Error> {
    let results = run_suites(spec)?;
    let mut table = Table::new(["suite", "max_deviation", "tolerance", "result"]);
    let mut summary = vec![format!(
        "verify: seed = {}, oracle draws = {}, algebra draws = {}",
        spec.seed, spec.oracle_draws, spec.algebra_draws
    )];
    for r in &results {
        table.push(vec![
            r.name.into(),
            r.max_deviation.into(),
            r.tolerance.into(),
            if r.passed { "pass" } else { "fail" }.into(),
        ]);
        summary.push(format!(
            "{} {:<34} max deviation {:.3e} (tolerance {:.1e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.max_deviation,
            r.tolerance
        ));
    }
    Ok(Outcome {
        table,
        summary,
        passed: results.iter().all(|r| r.passed),
    })
}
