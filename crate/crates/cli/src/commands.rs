//! One function per subcommand. Each returns the report and the data files it
//! produced; writing them to disk is left to the caller.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qclock_core::classical::{
    default_fd_step, fundamental_pair, integrate_oscillator, poisson_bracket_fd, wronskian_charges,
    ChargeFunctions,
};
use qclock_core::ermakov::{
    ermakov_invariant, fit_harmonic, frequency_transform_residual, reparametrize_trajectory,
    schwarzian, solve_eta_ode, symmetry_residual, synchronizing_clock, ClosedFormMap, Composition,
    EtaSolution, SampledFunction, TimeMap,
};
use qclock_core::gaussian::{
    alpha_as_eta, alpha_clock, casimir_ermakov_identity, effective_hamiltonian, evolve_gaussian,
    mean_trajectory, moments_of_gaussian, uncertainty_algebra_check, GaussianState,
};
use qclock_core::schrodinger::{
    compare_effective_vs_pde, init_gaussian_wavefunction, SpatialGrid, SplitStep,
};
use qclock_core::{PhysicalParams, TimeGrid};

use crate::config::{Resolved, ScenarioConfig};
use crate::error::CliError;
use crate::report::{Csv, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classical,
    Gaussian,
    Pde,
    Synchronize,
    Invariants,
    Compare,
    Brackets,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classical => "classical",
            Command::Gaussian => "gaussian",
            Command::Pde => "pde",
            Command::Synchronize => "synchronize",
            Command::Invariants => "invariants",
            Command::Compare => "compare",
            Command::Brackets => "brackets",
        }
    }
}

pub const CLASSICAL_HEADER: [&str; 5] = ["t", "q", "qdot", "W1", "W2"];
pub const CLASSICAL_ETA_HEADER: [&str; 6] = ["t", "q", "qdot", "W1", "W2", "I_eta"];
pub const GAUSSIAN_HEADER: [&str; 10] = [
    "t", "q", "p", "alpha", "beta", "gamma", "C", "I_alpha", "H_eff", "tau",
];
pub const PDE_HEADER: [&str; 9] = [
    "t",
    "x1",
    "p1",
    "x2",
    "p2",
    "d",
    "C",
    "norm",
    "excess_kurtosis",
];
pub const DENSITY_HEADER: [&str; 3] = ["t", "x", "density"];
pub const SYNCHRONIZE_HEADER: [&str; 5] = ["t", "tau", "h", "Q", "dQ_dtau"];
pub const COMPARE_HEADER: [&str; 14] = [
    "t",
    "x1_eff",
    "p1_eff",
    "x2_eff",
    "p2_eff",
    "d_eff",
    "x1_pde",
    "p1_pde",
    "x2_pde",
    "p2_pde",
    "d_pde",
    "fidelity",
    "norm",
    "excess_kurtosis",
];

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub report: Report,
    /// (file name, contents)
    pub files: Vec<(String, String)>,
}

pub fn run(command: Command, cfg: &ScenarioConfig) -> Result<Artifacts, CliError> {
    let r = cfg.resolve()?;
    let mut report = Report::new(&cfg.name, command.name());
    report.select(cfg.checks.clone());
    let files = match command {
        Command::Classical => classical(cfg, &r, &mut report)?,
        Command::Gaussian => gaussian(cfg, &r, &mut report)?,
        Command::Pde => pde(cfg, &r, &mut report)?,
        Command::Synchronize => synchronize(cfg, &r, &mut report)?,
        Command::Invariants => invariants(cfg, &r, &mut report)?,
        Command::Compare => compare(cfg, &r, &mut report)?,
        Command::Brackets => brackets(cfg, &r, &mut report)?,
    };
    let unmatched = report.unmatched_selection();
    if !unmatched.is_empty() {
        return Err(CliError::config(
            "checks",
            format!(
                "`{}` not produced by the `{}` command with this config",
                unmatched.join("`, `"),
                command.name()
            ),
        ));
    }
    Ok(Artifacts { report, files })
}

fn need<T: Copy>(v: Option<T>, section: &str, command: Command) -> Result<T, CliError> {
    v.ok_or_else(|| {
        CliError::config(
            section,
            format!("required by the `{}` command", command.name()),
        )
    })
}

fn eta_for(
    cfg: &ScenarioConfig,
    r: &Resolved,
    grid: &TimeGrid,
) -> Result<Option<EtaSolution>, CliError> {
    r.eta
        .map(|e| {
            solve_eta_ode(
                &r.profile,
                e.omega,
                (e.eta0, e.eta_dot0),
                grid,
                cfg.solver.rel_tol,
            )
        })
        .transpose()
        .map_err(CliError::from)
}

/// max |x − x₀| / |x₀|, or the absolute drift when x₀ = 0.
fn relative_drift(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut it = values.into_iter();
    let Some(first) = it.next() else { return 0.0 };
    let scale = if first == 0.0 { 1.0 } else { first.abs() };
    it.fold(0.0f64, |m, v| m.max((v - first).abs() / scale))
}

fn classical(
    cfg: &ScenarioConfig,
    r: &Resolved,
    report: &mut Report,
) -> Result<Vec<(String, String)>, CliError> {
    let init = need(r.classical, "classical", Command::Classical)?;
    let rel_tol = cfg.solver.rel_tol;
    let tol = &cfg.tolerances;
    let traj = integrate_oscillator(&r.profile, init, &r.grid, rel_tol)?;
    let pair = fundamental_pair(&r.profile, r.grid.t_start(), &r.grid, rel_tol)?;
    let eta = eta_for(cfg, r, &r.grid)?;

    let mut csv = match eta {
        Some(_) => Csv::new(&CLASSICAL_ETA_HEADER),
        None => Csv::new(&CLASSICAL_HEADER),
    };
    let (mut w1s, mut w2s, mut invariants) = (Vec::new(), Vec::new(), Vec::new());
    for s in traj.samples() {
        let (w1, w2) = wronskian_charges(&pair, s)?;
        w1s.push(w1);
        w2s.push(w2);
        match &eta {
            Some(e) => {
                let i = ermakov_invariant(e, s)?;
                invariants.push(i);
                csv.row(&[s.t, s.q, s.qdot, w1, w2, i]);
            }
            None => csv.row(&[s.t, s.q, s.qdot, w1, w2]),
        }
    }

    let w_drift = pair
        .wronskian_series()
        .iter()
        .fold(0.0f64, |m, &(_, w)| m.max((w - pair.wronskian).abs()));
    report.below("wronskian_drift", w_drift, tol.wronskian_drift);
    let scale = w1s[0].abs().max(w2s[0].abs());
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let charge_drift = w1s.iter().zip(&w2s).fold(0.0f64, |m, (a, b)| {
        m.max((a - w1s[0]).abs()).max((b - w2s[0]).abs())
    }) / scale;
    report.below("charge_drift", charge_drift, tol.charge_drift);
    if eta.is_some() {
        report.below(
            "invariant_drift",
            relative_drift(invariants),
            tol.invariant_drift,
        );
    }
    Ok(vec![("classical.csv".into(), csv.as_str().into())])
}

fn gaussian(
    cfg: &ScenarioConfig,
    r: &Resolved,
    report: &mut Report,
) -> Result<Vec<(String, String)>, CliError> {
    let init = need(r.gaussian, "gaussian", Command::Gaussian)?;
    let rel_tol = cfg.solver.rel_tol;
    let tol = &cfg.tolerances;
    let run = evolve_gaussian(&r.profile, &init, &r.grid, rel_tol)?;
    let clock = alpha_clock(&run)?;

    let mut csv = Csv::new(&GAUSSIAN_HEADER);
    let (mut identity, mut casimirs) = (0.0f64, Vec::new());
    for s in &run {
        let ce = casimir_ermakov_identity(s);
        identity = identity.max(ce.relative_residual());
        casimirs.push(ce.casimir);
        csv.row(&[
            s.t,
            s.q,
            s.p,
            s.alpha,
            s.beta,
            s.gamma,
            ce.casimir,
            ce.i_alpha,
            effective_hamiltonian(s, &r.profile)?,
            clock.tau_at(s.t)?,
        ]);
    }
    report.below("casimir_identity", identity, tol.casimir_identity);
    report.below("casimir_drift", relative_drift(casimirs), tol.casimir_drift);

    // α against an independent solve of the auxiliary equation with Ω = ħ/2m.
    let m = r.params.mass();
    let eta = solve_eta_ode(
        &r.profile,
        r.params.quantum_omega(),
        (init.alpha, init.beta / m),
        &r.grid,
        rel_tol,
    )?;
    let alpha_eta = run
        .iter()
        .zip(eta.samples().samples())
        .fold(0.0f64, |w, (s, e)| w.max((s.alpha - e.q).abs() / e.q.abs()));
    report.below("alpha_eta", alpha_eta, tol.alpha_eta);
    Ok(vec![("gaussian.csv".into(), csv.as_str().into())])
}

/// Step counts from the grid start to each output time.
fn aligned_steps(grid: &TimeGrid, dt: f64) -> Result<Vec<usize>, CliError> {
    grid.times()
        .iter()
        .map(|&t| {
            let s = (t - grid.t_start()) / dt;
            if (s - s.round()).abs() > 1e-6 {
                Err(CliError::config(
                    "solver.dt",
                    format!("output time {t} is not a whole number of steps from the start"),
                ))
            } else {
                Ok(s.round() as usize)
            }
        })
        .collect()
}

fn sized_grid(
    cfg: &ScenarioConfig,
    r: &Resolved,
    init: &GaussianState,
) -> Result<SpatialGrid, CliError> {
    let dense = TimeGrid::new(
        r.grid.t_start(),
        r.grid.t_end(),
        r.grid.n_output().max(2001),
    )?;
    let dry = evolve_gaussian(&r.profile, init, &dense, cfg.solver.rel_tol)?;
    Ok(SpatialGrid::auto_size(&dry, cfg.solver.grid_points)?)
}

fn pde(
    cfg: &ScenarioConfig,
    r: &Resolved,
    report: &mut Report,
) -> Result<Vec<(String, String)>, CliError> {
    let init = need(r.gaussian, "gaussian", Command::Pde)?;
    let tol = &cfg.tolerances;
    let dt = cfg.solver.dt;
    let steps = aligned_steps(&r.grid, dt)?;
    let spatial = sized_grid(cfg, r, &init)?;
    report.note("grid_points", spatial.n() as f64);
    report.note("dx", spatial.dx());
    report.note("x_min", spatial.x_min());

    let mut psi = init_gaussian_wavefunction(&init, &spatial)?;
    let mut prop = SplitStep::new(&r.profile, r.params, spatial, dt)?;
    let mut csv = Csv::new(&PDE_HEADER);
    let mut density = cfg.output.snapshots.then(|| Csv::new(&DENSITY_HEADER));
    let (mut norms, mut casimirs, mut kurtosis) = (Vec::new(), Vec::new(), 0.0f64);
    let mut done = 0;
    for (&k, t) in steps.iter().zip(r.grid.times()) {
        prop.advance(&mut psi, k - done)?;
        done = k;
        let m = prop.moments(&psi);
        let (norm, ek) = (psi.norm(), psi.excess_kurtosis());
        kurtosis = kurtosis.max(ek.abs());
        norms.push(norm);
        casimirs.push(m.casimir());
        csv.row(&[t, m.x1, m.p1, m.x2, m.p2, m.d, m.casimir(), norm, ek]);
        if let Some(d) = density.as_mut() {
            for (x, rho) in psi
                .density()
                .into_iter()
                .step_by(cfg.output.snapshot_stride)
            {
                d.row(&[t, x, rho]);
            }
        }
    }
    let total = *steps.last().expect("grid has outputs");
    let norm_drift = norms
        .iter()
        .fold(0.0f64, |w, n| w.max((n - norms[0]).abs()));
    report.note("steps", total as f64);
    report.note("max_excess_kurtosis", kurtosis);
    report.below(
        "norm_drift_per_1000",
        norm_drift * 1000.0 / total.max(1) as f64,
        tol.norm_drift_per_1000,
    );
    report.below(
        "pde_casimir_drift",
        relative_drift(casimirs),
        tol.pde_casimir_drift,
    );

    if let Some(coarse) = cfg.solver.convergence_steps {
        let span = r.grid.span();
        let exact = moments_of_gaussian(
            &evolve_gaussian(
                &r.profile,
                &init,
                &TimeGrid::new(r.grid.t_start(), r.grid.t_end(), 2)?,
                cfg.solver.rel_tol,
            )?[1],
        )
        .x2;
        let mut errors = [0.0; 2];
        for (e, n) in errors.iter_mut().zip([coarse, 2 * coarse]) {
            let mut psi = init_gaussian_wavefunction(&init, &spatial)?;
            let mut prop = SplitStep::new(&r.profile, r.params, spatial, span / n as f64)?;
            prop.advance(&mut psi, n)?;
            *e = (prop.moments(&psi).x2 - exact).abs();
        }
        report.note("x2_error_coarse", errors[0]);
        report.note("x2_error_fine", errors[1]);
        report.below(
            "convergence_ratio_offset",
            (errors[0] / errors[1] - 4.0).abs(),
            tol.convergence_band,
        );
    }

    let mut files = vec![("pde.csv".to_string(), csv.as_str().to_string())];
    if let Some(d) = density {
        files.push(("density.csv".into(), d.as_str().into()));
    }
    Ok(files)
}

fn synchronize(
    cfg: &ScenarioConfig,
    r: &Resolved,
    report: &mut Report,
) -> Result<Vec<(String, String)>, CliError> {
    let rel_tol = cfg.solver.rel_tol;
    let (traj, eta, clock) = match (r.classical, r.eta, r.gaussian) {
        (Some(init), Some(_), _) => {
            let eta = eta_for(cfg, r, &r.grid)?.expect("eta spec present");
            let clock = synchronizing_clock(&eta)?;
            let traj = integrate_oscillator(&r.profile, init, &r.grid, rel_tol)?;
            (traj, eta, clock)
        }
        (_, _, Some(init)) => {
            let run = evolve_gaussian(&r.profile, &init, &r.grid, rel_tol)?;
            (
                mean_trajectory(&run)?,
                alpha_as_eta(&run)?,
                alpha_clock(&run)?,
            )
        }
        _ => {
            return Err(CliError::config(
                "classical",
                "synchronize needs `classical` together with `eta`, or a `gaussian` packet",
            ))
        }
    };
    let q_tau = reparametrize_trajectory(&traj, &eta, &clock)?;
    let mut csv = Csv::new(&SYNCHRONIZE_HEADER);
    for (s, x) in traj.samples().iter().zip(q_tau.samples()) {
        let (e, _) = eta.at(s.t)?;
        csv.row(&[s.t, x.t, 1.0 / (e * e), x.q, x.qdot]);
    }
    let fit = fit_harmonic(&q_tau, eta.omega())?;
    let (ta, tb) = clock.tau_range();
    report.note("omega", eta.omega());
    report.note("amplitude", fit.amplitude);
    report.note("phase", fit.phase);
    report.note("max_residual", fit.max_residual);
    report.note("residual_over_amplitude", fit.relative_to_amplitude());
    report.note(
        "target_periods",
        (tb - ta) * eta.omega() / (2.0 * std::f64::consts::PI),
    );
    report.below("clock_fit", fit.relative_to_max(), cfg.tolerances.clock_fit);
    Ok(vec![("synchronize.csv".into(), csv.as_str().into())])
}

fn random_state(rng: &mut ChaCha8Rng, params: PhysicalParams) -> Result<GaussianState, CliError> {
    Ok(GaussianState::new(
        0.0,
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(0.3..2.0),
        rng.gen_range(-1.0..1.0),
        0.0,
        params,
    )?)
}

fn invariants(
    cfg: &ScenarioConfig,
    r: &Resolved,
    report: &mut Report,
) -> Result<Vec<(String, String)>, CliError> {
    let tol = &cfg.tolerances;
    let rel_tol = cfg.solver.rel_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.solver.seed);
    let n = cfg.solver.sample_points;

    let mut mobius = 0.0f64;
    let mut drawn = 0;
    while drawn < n {
        let (a, b, c): (f64, f64, f64) = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-0.5..0.5),
        );
        let d: f64 = rng.gen_range(2.0..3.0);
        if (a * d - b * c).abs() < 0.1 {
            continue;
        }
        drawn += 1;
        let map = ClosedFormMap::Mobius { a, b, c, d };
        mobius = mobius.max(schwarzian(&map, rng.gen_range(-1.0..1.0))?.abs());
    }
    report.below("schwarzian_mobius", mobius, tol.mobius);

    let mut cocycle = 0.0f64;
    for i in 0..n {
        let outer = match i % 3 {
            0 => ClosedFormMap::Exp {
                rate: rng.gen_range(-1.0..1.0),
            },
            1 => ClosedFormMap::Arctan {
                freq: rng.gen_range(0.5..2.0),
            },
            _ => ClosedFormMap::Tan {
                freq: rng.gen_range(0.1..0.3),
            },
        };
        let inner = match i % 2 {
            0 => ClosedFormMap::Tan {
                freq: rng.gen_range(0.2..1.0),
            },
            _ => ClosedFormMap::Exp {
                rate: rng.gen_range(-0.5..0.5),
            },
        };
        let t = rng.gen_range(-1.0..1.0);
        let lhs = schwarzian(&Composition::new(outer, inner), t)?;
        let g = inner.jet(t)?;
        let rhs = g[1] * g[1] * schwarzian(&outer, g[0])? + schwarzian(&inner, t)?;
        cocycle = cocycle.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
    }
    report.below("schwarzian_cocycle", cocycle, tol.cocycle);

    let pair = fundamental_pair(&r.profile, r.grid.t_start(), &r.grid, rel_tol)?;
    let (a, b) = (&pair.traj1, &pair.traj2);
    let mut symmetry = 0.0f64;
    for f in [
        |x: f64, _: f64| x * x,
        |_: f64, y: f64| y * y,
        |x: f64, y: f64| x * y,
    ] {
        let x = SampledFunction::from_trajectories(a, b, f)?;
        symmetry = symmetry.max(symmetry_residual(&r.profile, &x)?.normalized);
    }
    report.below("symmetry_solutions", symmetry, tol.symmetry);
    let wrong = SampledFunction::from_trajectories(a, b, |x, _| x)?;
    report.above(
        "symmetry_non_solution",
        symmetry_residual(&r.profile, &wrong)?.normalized,
        tol.non_solution,
    );

    let choices = [0.5, 1.0, 2.0];
    let mut identity = 0.0f64;
    for _ in 0..n {
        let params =
            PhysicalParams::new(choices[rng.gen_range(0..3)], choices[rng.gen_range(0..3)])?;
        identity = identity
            .max(casimir_ermakov_identity(&random_state(&mut rng, params)?).relative_residual());
    }
    report.below("casimir_identity_random", identity, tol.casimir_identity);

    if let Some(eta) = eta_for(cfg, r, &r.grid)? {
        if let Some(init) = r.classical {
            let traj = integrate_oscillator(&r.profile, init, &r.grid, rel_tol)?;
            let values = traj
                .samples()
                .iter()
                .map(|s| ermakov_invariant(&eta, s))
                .collect::<Result<Vec<_>, _>>()?;
            report.below(
                "invariant_drift",
                relative_drift(values),
                tol.invariant_drift,
            );
        }
        let clock = synchronizing_clock(&eta)?;
        let target = eta.omega() * eta.omega();
        let residual =
            frequency_transform_residual(&r.profile, &clock, |_| target, clock.interior(), 500)?;
        report.below("clock_transform", residual, tol.clock_transform);
    }

    if let Some(init) = r.gaussian {
        let run = evolve_gaussian(&r.profile, &init, &r.grid, rel_tol)?;
        let identities: Vec<_> = run.iter().map(casimir_ermakov_identity).collect();
        let along = identities
            .iter()
            .fold(0.0f64, |m, c| m.max(c.relative_residual()));
        report.below("casimir_identity", along, tol.casimir_identity);
        report.below(
            "casimir_drift",
            relative_drift(identities.iter().map(|c| c.casimir)),
            tol.casimir_drift,
        );
    }
    Ok(Vec::new())
}

fn compare(
    cfg: &ScenarioConfig,
    r: &Resolved,
    report: &mut Report,
) -> Result<Vec<(String, String)>, CliError> {
    let init = need(r.gaussian, "gaussian", Command::Compare)?;
    let tol = &cfg.tolerances;
    aligned_steps(&r.grid, cfg.solver.dt)?;
    let spatial = sized_grid(cfg, r, &init)?;
    let dev = compare_effective_vs_pde(&r.profile, &init, &r.grid, &spatial, cfg.solver.dt)?;

    let mut csv = Csv::new(&COMPARE_HEADER);
    for s in &dev.samples {
        let (e, p) = (s.effective, s.pde);
        csv.row(&[
            s.t,
            e.x1,
            e.p1,
            e.x2,
            e.p2,
            e.d,
            p.x1,
            p.p1,
            p.x2,
            p.p2,
            p.d,
            s.fidelity,
            s.norm,
            s.excess_kurtosis,
        ]);
    }
    report.note("grid_points", spatial.n() as f64);
    report.note("dx", spatial.dx());
    report.note("steps", dev.steps as f64);
    for (k, v) in [
        ("deviation_x1", dev.x1),
        ("deviation_p1", dev.p1),
        ("deviation_x2", dev.x2),
        ("deviation_p2", dev.p2),
        ("deviation_d", dev.d),
        ("deviation_casimir", dev.casimir),
        ("effective_casimir_drift", dev.effective_casimir_drift),
        ("max_norm_drift", dev.max_norm_drift),
        ("max_excess_kurtosis", dev.max_excess_kurtosis),
    ] {
        report.note(k, v);
    }
    report.below(
        "moment_deviation",
        dev.max_moment_deviation(),
        tol.moment_deviation,
    );
    report.below("fidelity_loss", 1.0 - dev.min_fidelity, tol.fidelity_loss);
    report.below(
        "pde_casimir_drift",
        dev.pde_casimir_drift,
        tol.pde_casimir_drift,
    );
    Ok(vec![("compare.csv".into(), csv.as_str().into())])
}

fn brackets(
    cfg: &ScenarioConfig,
    r: &Resolved,
    report: &mut Report,
) -> Result<Vec<(String, String)>, CliError> {
    let tol = cfg.tolerances.bracket;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.solver.seed);
    let pair = fundamental_pair(&r.profile, r.grid.t_start(), &r.grid, cfg.solver.rel_tol)?;
    let m = r.params.mass();
    let (t0, t1) = (r.grid.t_start(), r.grid.t_end());
    let (mut w12, mut sl2, mut algebra) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.solver.sample_points {
        let charges = ChargeFunctions::at(&pair, rng.gen_range(t0..t1), m)?;
        let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let h = default_fd_step(&x);
        let w = charges.wronskian();
        let lambda = 2.0 * w / m;
        w12 = w12
            .max((poisson_bracket_fd(|y| charges.w1(y), |y| charges.w2(y), &x, h)? - w / m).abs());
        let sq1 = |y: &[f64]| charges.w1(y).powi(2);
        let sq2 = |y: &[f64]| charges.w2(y).powi(2);
        let mixed = |y: &[f64]| charges.w1(y) * charges.w2(y);
        let (a, b) = (charges.w1(&x), charges.w2(&x));
        sl2 = sl2
            .max((poisson_bracket_fd(sq1, sq2, &x, h)? - 2.0 * lambda * a * b).abs())
            .max((poisson_bracket_fd(mixed, sq1, &x, h)? + lambda * a * a).abs())
            .max((poisson_bracket_fd(mixed, sq2, &x, h)? - lambda * b * b).abs());
        algebra = algebra.max(uncertainty_algebra_check(&random_state(
            &mut rng, r.params,
        )?)?);
    }
    report.below("wronskian_bracket", w12, tol);
    report.below("sl2_relations", sl2, tol);
    report.below("uncertainty_algebra", algebra, tol);
    Ok(Vec::new())
}
