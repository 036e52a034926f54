//! Scenario configuration: JSON schema, defaults and validation.

use std::path::Path;

use qclock_core::gaussian::GaussianState;
use qclock_core::{ClassicalState, FrequencyProfile, PhysicalParams, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub profile: ProfileSpec,
    #[serde(default)]
    pub physics: PhysicsSpec,
    #[serde(default)]
    pub classical: Option<ClassicalSpec>,
    #[serde(default)]
    pub gaussian: Option<GaussianSpec>,
    #[serde(default)]
    pub eta: Option<EtaSpec>,
    pub time: TimeSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
    /// Names of the checks to evaluate; null keeps every check of the command.
    #[serde(default)]
    pub checks: Option<Vec<String>>,
}

fn default_name() -> String {
    "scenario".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant { omega0: f64 },
    Floquet { omega0: f64, epsilon: f64, nu: f64 },
    LinearRamp { omega0_sq: f64, slope: f64 },
    Tabulated { times: Vec<f64>, omega_sq: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSpec {
    pub mass: f64,
    pub hbar: f64,
}

impl Default for PhysicsSpec {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

/// Initial (q, q̇) at `time.t_start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSpec {
    pub q: f64,
    pub qdot: f64,
}

/// Initial packet parameters at `time.t_start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    pub q: f64,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
}

/// Auxiliary solution η with constant Ω, started from (η₀, η̇₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaSpec {
    pub omega: f64,
    pub eta0: f64,
    #[serde(default)]
    pub eta_dot0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub n_output: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    /// Accuracy target of the adaptive ODE integrator.
    pub rel_tol: f64,
    /// Split-step time step.
    pub dt: f64,
    /// Lower bound on the number of spatial grid points.
    pub grid_points: usize,
    /// Step count of the coarse run in the dt-halving check; off when null.
    pub convergence_steps: Option<usize>,
    /// Random sample points for bracket and identity checks.
    pub sample_points: usize,
    pub seed: u64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            dt: 1e-3,
            grid_points: 1024,
            convergence_steps: None,
            sample_points: 20,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub wronskian_drift: f64,
    pub charge_drift: f64,
    pub invariant_drift: f64,
    pub alpha_eta: f64,
    pub clock_fit: f64,
    pub casimir_identity: f64,
    pub casimir_drift: f64,
    pub moment_deviation: f64,
    pub fidelity_loss: f64,
    pub pde_casimir_drift: f64,
    pub bracket: f64,
    pub mobius: f64,
    pub cocycle: f64,
    pub clock_transform: f64,
    pub symmetry: f64,
    /// Lower bound the residual of a non-solution must exceed.
    pub non_solution: f64,
    pub norm_drift_per_1000: f64,
    /// Allowed distance of the dt-halving error ratio from 4.
    pub convergence_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            wronskian_drift: 1e-8,
            charge_drift: 1e-7,
            invariant_drift: 1e-6,
            alpha_eta: 1e-8,
            clock_fit: 1e-5,
            casimir_identity: 1e-12,
            casimir_drift: 1e-7,
            moment_deviation: 1e-5,
            fidelity_loss: 1e-6,
            pde_casimir_drift: 1e-6,
            bracket: 1e-5,
            mobius: 1e-6,
            cocycle: 1e-5,
            clock_transform: 1e-4,
            symmetry: 1e-4,
            non_solution: 1e-1,
            norm_drift_per_1000: 1e-9,
            convergence_band: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: String,
    /// Write |ψ|² at every output time (pde only).
    pub snapshots: bool,
    /// Keep every k-th grid point in the snapshots.
    pub snapshot_stride: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            snapshots: false,
            snapshot_stride: 1,
        }
    }
}

/// Core objects built from a validated config.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub profile: FrequencyProfile,
    pub params: PhysicalParams,
    pub grid: TimeGrid,
    pub classical: Option<ClassicalState>,
    pub gaussian: Option<GaussianState>,
    pub eta: Option<EtaSpec>,
}

fn field(section: &str) -> impl Fn(qclock_core::Error) -> CliError + '_ {
    move |e| match e {
        qclock_core::Error::InvalidParameter { name, reason } => {
            CliError::config(format!("{section}.{name}"), reason)
        }
        other => CliError::config(section, other.to_string()),
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(
            name,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Applies `KEY=VAL` to the tolerance table.
    pub fn override_tolerance(&mut self, spec: &str) -> Result<(), CliError> {
        let (key, val) = spec.split_once('=').ok_or_else(|| {
            CliError::config(
                "--tolerance-override",
                format!("expected KEY=VAL, got `{spec}`"),
            )
        })?;
        let key = key.trim();
        let val: f64 = val.trim().parse().map_err(|_| {
            CliError::config(
                format!("tolerances.{key}"),
                format!("`{}` is not a number", val.trim()),
            )
        })?;
        let mut table = serde_json::to_value(self.tolerances).expect("tolerances serialize");
        let map = table.as_object_mut().expect("tolerances are a map");
        if !map.contains_key(key) {
            return Err(CliError::config(
                format!("tolerances.{key}"),
                "unknown tolerance",
            ));
        }
        map.insert(key.into(), val.into());
        self.tolerances = serde_json::from_value(table)
            .map_err(|e| CliError::config(format!("tolerances.{key}"), e.to_string()))?;
        Ok(())
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let profile = match &self.profile {
            ProfileSpec::Constant { omega0 } => FrequencyProfile::constant(*omega0),
            ProfileSpec::Floquet {
                omega0,
                epsilon,
                nu,
            } => FrequencyProfile::floquet(*omega0, *epsilon, *nu),
            ProfileSpec::LinearRamp { omega0_sq, slope } => {
                FrequencyProfile::linear_ramp(*omega0_sq, *slope)
            }
            ProfileSpec::Tabulated { times, omega_sq } => {
                FrequencyProfile::tabulated(times.clone(), omega_sq.clone())
            }
        }
        .map_err(field("profile"))?;
        let params =
            PhysicalParams::new(self.physics.mass, self.physics.hbar).map_err(field("physics"))?;
        let grid = TimeGrid::new(self.time.t_start, self.time.t_end, self.time.n_output)
            .map_err(field("time"))?;
        profile
            .check_interval(grid.t_start(), grid.t_end())
            .map_err(field("time"))?;
        let classical = self
            .classical
            .map(|c| ClassicalState::new(grid.t_start(), c.q, c.qdot))
            .transpose()
            .map_err(field("classical"))?;
        let gaussian = self
            .gaussian
            .map(|g| GaussianState::new(grid.t_start(), g.q, g.p, g.alpha, g.beta, g.gamma, params))
            .transpose()
            .map_err(field("gaussian"))?;
        if let Some(e) = &self.eta {
            positive("eta.omega", e.omega)?;
            positive("eta.eta0", e.eta0)?;
            if !e.eta_dot0.is_finite() {
                return Err(CliError::config("eta.eta_dot0", "must be finite"));
            }
        }
        let s = &self.solver;
        if !(qclock_core::classical::MIN_REL_TOL..=qclock_core::classical::MAX_REL_TOL)
            .contains(&s.rel_tol)
        {
            return Err(CliError::config(
                "solver.rel_tol",
                format!("must lie in [1e-14, 1e-3], got {:e}", s.rel_tol),
            ));
        }
        positive("solver.dt", s.dt)?;
        if s.sample_points == 0 {
            return Err(CliError::config(
                "solver.sample_points",
                "must be at least 1",
            ));
        }
        if s.convergence_steps == Some(0) {
            return Err(CliError::config(
                "solver.convergence_steps",
                "must be at least 1",
            ));
        }
        if self.output.snapshot_stride == 0 {
            return Err(CliError::config(
                "output.snapshot_stride",
                "must be at least 1",
            ));
        }
        let tol = serde_json::to_value(self.tolerances).expect("tolerances serialize");
        for (k, v) in tol.as_object().expect("tolerances are a map") {
            positive(&format!("tolerances.{k}"), v.as_f64().unwrap_or(f64::NAN))?;
        }
        Ok(Resolved {
            profile,
            params,
            grid,
            classical,
            gaussian,
            eta: self.eta,
        })
    }
}
