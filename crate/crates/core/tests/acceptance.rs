//! Acceptance suite: one check per headline claim, each printing a single
//! PASS/FAIL line. Run with `cargo test -p qif-mzi --test acceptance`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qif_mzi::analytic::{
    ehrenfest_check, ehrenfest_check_for, marginal_density, mean_eq14_printed, mean_postselected,
    port_probabilities, reduced_state,
};
use qif_mzi::cli::verify::{random_params, sign_structure_mismatches, NEAR_DARK};
use qif_mzi::cli::{execute, parse_config, Cell, Format, RunError};
use qif_mzi::experiment::{derive_setup, tune_separation_for_alpha, ExperimentInputs, TuneMode};
use qif_mzi::numeric::{joint_marginal_oracle, kernel_purity, momentum_kick_oracle, MomentumGrid};
use qif_mzi::{Electron, Error, GaussianPacket, InterferometerParams, PortPair};

struct Criterion {
    id: u8,
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u8, name: &'static str) -> Self {
        Self {
            id,
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn close(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        self.check(
            (value - target).abs() <= tol,
            format!("{label}: {value:.10e} vs {target:.10e} (tol {tol:.1e})"),
        );
    }

    fn runtime(&mut self, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.check(took < limit, format!("runtime {took:?} over {limit:?}"));
    }

    /// Writes past the test harness capture so the lines always show.
    fn report(&self) -> bool {
        let ok = self.failures.is_empty();
        let mut out = std::io::stdout().lock();
        let _ = writeln!(
            out,
            "[{}] criterion {} {}",
            if ok { "PASS" } else { "FAIL" },
            self.id,
            self.name
        );
        for f in &self.failures {
            let _ = writeln!(out, "         {f}");
        }
        ok
    }
}

fn fig2c() -> InterferometerParams {
    InterferometerParams::balanced(0.75 * PI, 0.0, 0.3, 1.0).unwrap()
}

fn preset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("presets")
        .join(name)
}

fn effective_attraction() -> Criterion {
    let mut c = Criterion::new(1, "post-selected mean of electron 1 is positive");
    let started = Instant::now();
    let params = fig2c();
    let grid = MomentumGrid::joint_default_for(1.0).unwrap();
    let m1 = joint_marginal_oracle(&params, &grid, Electron::One)
        .unwrap()
        .mean();
    let m2 = joint_marginal_oracle(&params, &grid, Electron::Two)
        .unwrap()
        .mean();
    c.runtime(started, Duration::from_secs(1));
    c.close("quadrature <p1>/W", m1, 0.3567, 1e-3);
    c.check(m1 > 0.0, "<p1> not strictly positive");
    c.close("<p2> + <p1>", m2 + m1, 0.0, 1e-12);
    let printed = mean_eq14_printed(&params).unwrap();
    c.close("printed closed form", printed, 0.4897, 1e-3);

    let out =
        execute(&parse_config(&std::fs::read_to_string(preset("fig2c.conf")).unwrap()).unwrap())
            .unwrap();
    let summary = out.summary.join("\n");
    c.check(
        summary.contains("+0.356704") && summary.contains("+0.489654"),
        "CLI summary does not report both closed forms",
    );
    c.check(
        summary.contains("printed minus consistent"),
        "difference not reported",
    );
    c
}

fn oracle_equivalence() -> Criterion {
    let mut c = Criterion::new(2, "joint-state marginal matches the closed form");
    let started = Instant::now();
    let grid = MomentumGrid::joint_default_for(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut draws, mut worst) = (0, 0.0_f64);
    while draws < 100 {
        let params = random_params(&mut rng, 3.0);
        if params.r() * params.t() == 0.0
            || qif_mzi::analytic::postselected_norm(&params) <= NEAR_DARK
        {
            continue;
        }
        draws += 1;
        for electron in [Electron::One, Electron::Two] {
            let oracle = joint_marginal_oracle(&params, &grid, electron).unwrap();
            for (p, v) in grid.points().iter().zip(oracle.values()) {
                let closed = marginal_density(&params, electron, *p, true).unwrap();
                worst = worst.max((v - closed).abs());
            }
        }
    }
    c.runtime(started, Duration::from_secs(30));
    c.close("max pointwise deviation", worst, 0.0, 1e-9);
    c
}

fn ehrenfest_and_unitarity() -> (Criterion, Criterion) {
    let mut e = Criterion::new(3, "port-weighted mean equals -2 t^2 r^2 delta");
    let mut u = Criterion::new(4, "port probabilities sum to one");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut dev, mut total, mut unit) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let params = random_params(&mut rng, 4.0);
        let e1 = ehrenfest_check_for(&params, Electron::One);
        let e2 = ehrenfest_check_for(&params, Electron::Two);
        dev = dev.max(e1.deviation());
        total = total.max((e1.weighted_sum + e2.weighted_sum).abs());
        let probs = port_probabilities(&params);
        let sum: f64 = PortPair::ALL.iter().map(|&p| probs.get(p)).sum();
        unit = unit.max((sum - 1.0).abs());
    }
    e.close("max Ehrenfest deviation", dev, 0.0, 1e-10);
    e.close("max total two-electron mean", total, 0.0, 1e-12);
    let balanced = ehrenfest_check(&fig2c());
    e.close("balanced closed form", balanced.closed_form, -0.15, 1e-12);
    e.close("balanced weighted sum", balanced.weighted_sum, -0.15, 1e-12);
    u.close("max |sum P - 1|", unit, 0.0, 1e-12);
    (e, u)
}

fn momentum_kick() -> Criterion {
    let mut c = Criterion::new(5, "position-space phase shifts the momentum density");
    // 4096 intervals; Simpson needs an odd point count.
    let grid = MomentumGrid::symmetric(8.0, 4097).unwrap();
    let packet = GaussianPacket::new(1.0).unwrap();
    for delta in [0.3, 1.0, 2.5] {
        let r = momentum_kick_oracle(&packet, delta, &grid).unwrap();
        c.close(
            &format!("density deviation, delta {delta}"),
            r.max_density_deviation,
            0.0,
            1e-8,
        );
        c.close(
            &format!("mean shift, delta {delta}"),
            r.mean_shift,
            -delta,
            1e-8,
        );
    }
    let id = momentum_kick_oracle(&packet, 0.0, &grid).unwrap();
    c.close(
        "identity density deviation",
        id.max_density_deviation,
        0.0,
        1e-12,
    );
    c.close("identity norm change", id.parseval_error, 0.0, 1e-12);
    c
}

fn design_numbers() -> Criterion {
    let mut c = Criterion::new(6, "SI design numbers for the reference beam");
    let started = Instant::now();
    let inputs = ExperimentInputs::REFERENCE;
    let setup = derive_setup(&inputs).unwrap();
    let tuned = tune_separation_for_alpha(&inputs, TuneMode::Target(3)).unwrap();
    let out = execute(
        &parse_config(&std::fs::read_to_string(preset("design_reference.conf")).unwrap()).unwrap(),
    )
    .unwrap();
    c.runtime(started, Duration::from_secs(1));
    c.close("delta/W", setup.delta_over_w, 0.22, 0.05);
    c.close("|alpha|/pi", setup.alpha_over_pi().abs(), 6.96, 0.1);
    c.close(
        "tuned separation for 6 pi [m]",
        tuned.separation,
        2.32e-3,
        0.05e-3,
    );
    c.close("tuned |alpha|/pi", tuned.alpha.abs() / PI, 6.0, 1e-9);
    c.close(
        "longitudinal spread [m]",
        setup.spread_longitudinal,
        6e-6,
        0.15 * 6e-6,
    );
    c.check(
        setup.spread_transverse_relative <= 2e-4,
        format!(
            "transverse relative spread {:.3e}",
            setup.spread_transverse_relative
        ),
    );
    c.close("fringe spacing [m]", setup.fringe_spacing, 6e-4, 0.1 * 6e-4);
    c.check(setup.validity.len() == 5, "expected five validity checks");
    for check in &setup.validity {
        c.check(
            check.passed,
            format!("validity check {} failed", check.name),
        );
    }
    let passes = out.table.rows()[0]
        .iter()
        .filter(|cell| **cell == Cell::Text("pass".into()))
        .count();
    c.check(
        passes == 5,
        format!("design table reports {passes} passing checks"),
    );
    c
}

fn sweep_structure() -> Criterion {
    let mut c = Criterion::new(7, "sign structure of the mean over the sweep plane");
    let started = Instant::now();
    let mismatches = sign_structure_mismatches(101, 101).unwrap();
    let out =
        execute(&parse_config(&std::fs::read_to_string(preset("fig4.conf")).unwrap()).unwrap())
            .unwrap();
    c.runtime(started, Duration::from_secs(10));
    c.check(
        mismatches == 0,
        format!("{mismatches} sign-rule mismatches"),
    );
    c.check(
        out.table.rows().len() == 10201,
        "sweep does not have 101 x 101 rows",
    );
    for delta in [0.0, 0.7, 1.9, 3.0] {
        let zero = InterferometerParams::balanced(0.0, 0.0, delta, 1.0).unwrap();
        c.close(
            "phi = 0 slice",
            mean_postselected(&zero, Electron::One).unwrap(),
            -delta / 2.0,
            1e-15,
        );
        let quarter = InterferometerParams::balanced(FRAC_PI_2, 0.0, delta, 1.0).unwrap();
        c.close(
            "phi = pi/2 slice",
            mean_postselected(&quarter, Electron::One).unwrap(),
            0.0,
            1e-15,
        );
    }
    c
}

fn purity() -> Criterion {
    let mut c = Criterion::new(8, "reduced-state purity from two routes");
    let grid = MomentumGrid::symmetric(8.0, 201).unwrap();
    let params = fig2c();
    let gram = reduced_state(&params, Electron::One).unwrap().purity();
    let kernel = kernel_purity(&params, &grid, Electron::One).unwrap();
    c.close("Gram purity", gram, 0.9117, 1e-3);
    c.close("kernel purity", kernel, 0.9117, 1e-3);
    c.close("Gram vs kernel", gram - kernel, 0.0, 1e-6);
    for (label, p) in [
        (
            "delta = 0",
            InterferometerParams::balanced(0.75 * PI, 0.0, 0.0, 1.0).unwrap(),
        ),
        (
            "phi = pi/2",
            InterferometerParams::balanced(FRAC_PI_2, 0.0, 0.3, 1.0).unwrap(),
        ),
    ] {
        c.close(
            label,
            reduced_state(&p, Electron::One).unwrap().purity(),
            1.0,
            1e-12,
        );
        c.close(
            label,
            kernel_purity(&p, &grid, Electron::One).unwrap(),
            1.0,
            1e-12,
        );
    }
    c
}

fn determinism_and_errors() -> Criterion {
    let mut c = Criterion::new(9, "deterministic output and structured dark-port errors");
    let bin = env!("CARGO_BIN_EXE_qif-mzi");
    let dir = tempfile::tempdir().unwrap();
    for (name, format) in [
        ("fig2c.conf", "csv"),
        ("fig3.conf", "json"),
        ("ports.conf", "csv"),
    ] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{name}.{run}.{format}"));
            let status = Command::new(bin)
                .arg("--config")
                .arg(preset(name))
                .arg("--format")
                .arg(format)
                .arg("--out")
                .arg(&path)
                .output()
                .unwrap()
                .status;
            c.check(status.success(), format!("{name} exited with {status}"));
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        c.check(
            !outputs[0].is_empty() && outputs[0] == outputs[1],
            format!("{name} not byte-identical"),
        );
    }

    let dark = InterferometerParams::balanced(PI, 0.0, 0.0, 1.0).unwrap();
    let zero_prob = |r: Result<f64, Error>| matches!(r, Err(Error::ZeroProbability { .. }));
    c.check(
        zero_prob(mean_postselected(&dark, Electron::One)),
        "mean on dark port",
    );
    c.check(
        zero_prob(marginal_density(&dark, Electron::One, 0.1, true)),
        "marginal on dark port",
    );
    c.check(
        matches!(
            reduced_state(&dark, Electron::One),
            Err(Error::ZeroProbability { .. })
        ),
        "reduced state on dark port",
    );
    let cfg = parse_config("mode = distributions\ndelta_over_w = 0\nphi = pi\nalpha = 0").unwrap();
    c.check(
        matches!(
            execute(&cfg),
            Err(RunError::Model(Error::ZeroProbability { .. }))
        ),
        "execute on dark port",
    );
    let output = Command::new(bin)
        .args([
            "distributions",
            "--delta-over-w",
            "0",
            "--phi",
            "pi",
            "--alpha=0",
        ])
        .output()
        .unwrap();
    let stderr = String::from_utf8_lossy(&output.stderr);
    let stdout = String::from_utf8_lossy(&output.stdout);
    c.check(
        !output.status.success(),
        "dark-port run exited successfully",
    );
    c.check(
        stderr.contains("zero post-selection probability"),
        "no explanatory message",
    );
    c.check(!stdout.to_lowercase().contains("nan"), "NaN in output");

    let sweep =
        execute(&parse_config("mode = sweep\nphi_steps = 3\ndelta_over_w_steps = 3").unwrap())
            .unwrap();
    let rendered = sweep.table.render(Format::Json) + &sweep.table.render(Format::Csv);
    c.check(
        !rendered.to_lowercase().contains("nan"),
        "NaN in sweep output",
    );
    c
}

#[test]
fn acceptance_suite() {
    let (ehrenfest, unitarity) = ehrenfest_and_unitarity();
    let results = [
        effective_attraction(),
        oracle_equivalence(),
        ehrenfest,
        unitarity,
        momentum_kick(),
        design_numbers(),
        sweep_structure(),
        purity(),
        determinism_and_errors(),
    ];
    let passed = results
        .iter()
        .map(Criterion::report)
        .filter(|ok| *ok)
        .count();
    let _ = writeln!(
        std::io::stdout(),
        "acceptance: {passed}/{} criteria passed",
        results.len()
    );
    assert_eq!(passed, results.len(), "acceptance criteria failed");
}
