//! Gaussian wave-packet dynamics in a time-dependent harmonic well.
//!
//! The packet ψ = N e^{iγ} e^{ixp/ħ} e^{−A(x−q)²} with
//! A = (1 − 2iαβ/ħ)/(4α²) stays Gaussian under a quadratic potential; its
//! parameters (q, p, α, β, γ) follow
//!
//! ```text
//! q̇ = p/m          ṗ = −mω²q
//! α̇ = β/m          β̇ = −mω²α + ħ²/(4mα³)
//! γ̇ = −L/ħ − ħ/(4mα²),   L = p²/2m − ½mω²q²
//! ```
//!
//! so α obeys the auxiliary equation with Ω = ħ/2m.

use num_complex::Complex64;

use crate::classical::{check_rel_tol, default_fd_step, poisson_bracket_fd};
use crate::ermakov::{synchronizing_clock, EtaSolution, ReparamMap};
use crate::error::{Error, Result};
use crate::ode::{integrate, IntegratorOptions, OdeSystem};
use crate::physics::{ClassicalState, PhysicalParams, TimeGrid};
use crate::profile::FrequencyProfile;
use crate::trajectory::Trajectory;

/// Fraction of α₀ below which the width is treated as collapsed.
pub const ALPHA_COLLAPSE_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub t: f64,
    /// Mean position.
    pub q: f64,
    /// Mean momentum.
    pub p: f64,
    /// Position spread, ⟨x²⟩ − ⟨x⟩² = α².
    pub alpha: f64,
    /// Momentum conjugate to α.
    pub beta: f64,
    /// Global phase.
    pub gamma: f64,
    pub params: PhysicalParams,
}

impl GaussianState {
    pub fn new(
        t: f64,
        q: f64,
        p: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        params: PhysicalParams,
    ) -> Result<Self> {
        for (name, v) in [
            ("t", t),
            ("q", q),
            ("p", p),
            ("beta", beta),
            ("gamma", gamma),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(
                    "gaussian state",
                    format!("{name} = {v} is not finite"),
                ));
            }
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must be positive, got {alpha}"),
            ));
        }
        Ok(Self {
            t,
            q,
            p,
            alpha,
            beta,
            gamma,
            params,
        })
    }

    /// Stationary width √(ħ/2mω₀) of a constant well, centred and at rest.
    pub fn coherent(t: f64, omega0: f64, params: PhysicalParams) -> Result<Self> {
        if !(omega0 > 0.0) {
            return Err(Error::invalid("omega0", "coherent state needs omega0 > 0"));
        }
        let alpha = (params.hbar() / (2.0 * params.mass() * omega0)).sqrt();
        Self::new(t, 0.0, 0.0, alpha, 0.0, 0.0, params)
    }

    /// Complex width A = (1/4α²)(1 − i·2αβ/ħ).
    pub fn width(&self) -> Complex64 {
        Complex64::new(1.0, -2.0 * self.alpha * self.beta / self.params.hbar())
            / (4.0 * self.alpha * self.alpha)
    }

    /// N = (α√(2π))^(−½).
    pub fn normalization(&self) -> f64 {
        (self.alpha * (2.0 * std::f64::consts::PI).sqrt()).powf(-0.5)
    }

    /// ψ(x) of the packet.
    pub fn amplitude(&self, x: f64) -> Complex64 {
        let hbar = self.params.hbar();
        let dx = x - self.q;
        let exponent = Complex64::new(0.0, self.gamma + x * self.p / hbar) - self.width() * dx * dx;
        self.normalization() * exponent.exp()
    }

    fn to_array(self) -> [f64; 5] {
        [self.q, self.p, self.alpha, self.beta, self.gamma]
    }

    fn from_array(t: f64, y: &[f64; 5], params: PhysicalParams) -> Self {
        Self {
            t,
            q: y[0],
            p: y[1],
            alpha: y[2],
            beta: y[3],
            gamma: y[4],
            params,
        }
    }
}

fn vector_field(omega_sq: f64, y: &[f64; 5], params: &PhysicalParams) -> [f64; 5] {
    let (m, hbar) = (params.mass(), params.hbar());
    let [q, p, alpha, beta, _] = *y;
    let lagrangian = p * p / (2.0 * m) - 0.5 * m * omega_sq * q * q;
    [
        p / m,
        -m * omega_sq * q,
        beta / m,
        -m * omega_sq * alpha + hbar * hbar / (4.0 * m * alpha.powi(3)),
        -lagrangian / hbar - hbar / (4.0 * m * alpha * alpha),
    ]
}

/// Time derivatives (q̇, ṗ, α̇, β̇, γ̇) of the effective dynamics.
pub fn gaussian_vector_field(
    profile: &FrequencyProfile,
    state: &GaussianState,
) -> Result<[f64; 5]> {
    Ok(vector_field(
        profile.omega_sq(state.t)?,
        &state.to_array(),
        &state.params,
    ))
}

struct Effective<'a> {
    profile: &'a FrequencyProfile,
    params: PhysicalParams,
    floor: f64,
}

impl OdeSystem<5> for Effective<'_> {
    fn rhs(&self, t: f64, y: &[f64; 5]) -> Result<[f64; 5]> {
        Ok(vector_field(self.profile.omega_sq(t)?, y, &self.params))
    }

    fn error_scale(&self, y: &[f64; 5]) -> [f64; 5] {
        let mean = y[0].abs() + y[1].abs();
        let spread = y[2].abs() + y[3].abs();
        [mean, mean, spread, spread, y[4].abs() + 1.0]
    }

    fn check_step(&self, t: f64, y: &[f64; 5]) -> Result<()> {
        if y[2] < self.floor {
            Err(Error::AlphaCollapse { t, value: y[2] })
        } else {
            Ok(())
        }
    }
}

/// Integrates the effective equations from `init` and samples them on `grid`.
pub fn evolve_gaussian(
    profile: &FrequencyProfile,
    init: &GaussianState,
    grid: &TimeGrid,
    rel_tol: f64,
) -> Result<Vec<GaussianState>> {
    check_rel_tol(rel_tol)?;
    if init.t != grid.t_start() {
        return Err(Error::invalid(
            "init.t",
            format!(
                "must equal the grid start {} (got {})",
                grid.t_start(),
                init.t
            ),
        ));
    }
    if !(init.alpha > 0.0) {
        return Err(Error::invalid("alpha", "must be positive"));
    }
    profile.check_interval(grid.t_start(), grid.t_end())?;
    let system = Effective {
        profile,
        params: init.params,
        floor: ALPHA_COLLAPSE_FRACTION * init.alpha,
    };
    let sol = integrate(
        &system,
        init.t,
        init.to_array(),
        &grid.times(),
        &IntegratorOptions::for_accuracy(rel_tol),
    )?;
    Ok(sol
        .times
        .iter()
        .zip(&sol.values)
        .map(|(&t, y)| GaussianState::from_array(t, y, init.params))
        .collect())
}

/// Linear and quadratic expectation values ⟨x̂⟩, ⟨p̂⟩, ⟨x̂²⟩, ⟨p̂²⟩, ⟨D̂⟩
/// with D̂ = ½(x̂p̂ + p̂x̂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub x1: f64,
    pub p1: f64,
    pub x2: f64,
    pub p2: f64,
    pub d: f64,
}

impl Moments {
    /// C = ⟨x̂²⟩⟨p̂²⟩ − ⟨D̂⟩².
    pub fn casimir(&self) -> f64 {
        uncertainty_casimir(self)
    }

    /// Casimir of the centred moments; ħ²/4 for every pure Gaussian.
    pub fn centered_casimir(&self) -> f64 {
        let vx = self.x2 - self.x1 * self.x1;
        let vp = self.p2 - self.p1 * self.p1;
        let cov = self.d - self.x1 * self.p1;
        vx * vp - cov * cov
    }

    pub fn position_variance(&self) -> f64 {
        self.x2 - self.x1 * self.x1
    }

    pub fn momentum_variance(&self) -> f64 {
        self.p2 - self.p1 * self.p1
    }
}

pub fn moments_of_gaussian(state: &GaussianState) -> Moments {
    let GaussianState {
        q, p, alpha, beta, ..
    } = *state;
    let hbar = state.params.hbar();
    Moments {
        x1: q,
        p1: p,
        x2: q * q + alpha * alpha,
        p2: p * p + beta * beta + hbar * hbar / (4.0 * alpha * alpha),
        d: p * q + alpha * beta,
    }
}

pub fn uncertainty_casimir(m: &Moments) -> f64 {
    m.x2 * m.p2 - m.d * m.d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirErmakov {
    pub casimir: f64,
    /// I_α = (1/2m²)[(αp − βq)² + ħ²q²/4α²].
    pub i_alpha: f64,
    /// |C − (2m²I_α + ħ²/4)|.
    pub residual: f64,
}

impl CasimirErmakov {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.casimir.abs()
    }
}

/// Ermakov-Lewis invariant of the mean trajectory measured with η = α.
pub fn ermakov_invariant_of_alpha(state: &GaussianState) -> f64 {
    let GaussianState {
        q, p, alpha, beta, ..
    } = *state;
    let (m, hbar) = (state.params.mass(), state.params.hbar());
    let w = alpha * p - beta * q;
    (w * w + hbar * hbar * q * q / (4.0 * alpha * alpha)) / (2.0 * m * m)
}

pub fn casimir_ermakov_identity(state: &GaussianState) -> CasimirErmakov {
    let casimir = moments_of_gaussian(state).casimir();
    let i_alpha = ermakov_invariant_of_alpha(state);
    let (m, hbar) = (state.params.mass(), state.params.hbar());
    CasimirErmakov {
        casimir,
        i_alpha,
        residual: (casimir - (2.0 * m * m * i_alpha + 0.25 * hbar * hbar)).abs(),
    }
}

/// H_eff = p²/2m + ½mω²q² + β²/2m + ½mω²α² + ħ²/(8mα²).
pub fn effective_hamiltonian(state: &GaussianState, profile: &FrequencyProfile) -> Result<f64> {
    let w2 = profile.omega_sq(state.t)?;
    Ok(effective_hamiltonian_at(
        w2,
        [state.q, state.p, state.alpha, state.beta],
        &state.params,
    ))
}

/// H_eff at a doubled phase-space point `[q, p, α, β]` for a given ω².
pub fn effective_hamiltonian_at(omega_sq: f64, x: [f64; 4], params: &PhysicalParams) -> f64 {
    let (m, hbar) = (params.mass(), params.hbar());
    let [q, p, alpha, beta] = x;
    p * p / (2.0 * m)
        + 0.5 * m * omega_sq * q * q
        + beta * beta / (2.0 * m)
        + 0.5 * m * omega_sq * alpha * alpha
        + hbar * hbar / (8.0 * m * alpha * alpha)
}

/// Largest deviation of the finite-difference brackets on (q, p, α, β) from
/// {⟨x²⟩,⟨p²⟩} = 4⟨D⟩, {⟨D⟩,⟨x²⟩} = −2⟨x²⟩ and {⟨D⟩,⟨p²⟩} = 2⟨p²⟩.
pub fn uncertainty_algebra_check(state: &GaussianState) -> Result<f64> {
    let at = |x: &[f64]| {
        moments_of_gaussian(&GaussianState {
            q: x[0],
            p: x[1],
            alpha: x[2],
            beta: x[3],
            ..*state
        })
    };
    let x2 = |x: &[f64]| at(x).x2;
    let p2 = |x: &[f64]| at(x).p2;
    let d = |x: &[f64]| at(x).d;
    let point = [state.q, state.p, state.alpha, state.beta];
    let h = default_fd_step(&point);
    let m = moments_of_gaussian(state);
    let r1 = (poisson_bracket_fd(x2, p2, &point, h)? - 4.0 * m.d).abs();
    let r2 = (poisson_bracket_fd(d, x2, &point, h)? + 2.0 * m.x2).abs();
    let r3 = (poisson_bracket_fd(d, p2, &point, h)? - 2.0 * m.p2).abs();
    Ok(r1.max(r2).max(r3))
}

/// α(t) as a solution of the auxiliary equation with Ω = ħ/2m (η = α, η̇ = β/m).
pub fn alpha_as_eta(series: &[GaussianState]) -> Result<EtaSolution> {
    let first = series
        .first()
        .ok_or(Error::InsufficientSamples { needed: 2, got: 0 })?;
    let m = first.params.mass();
    let samples = series
        .iter()
        .map(|s| ClassicalState {
            t: s.t,
            q: s.alpha,
            qdot: s.beta / m,
        })
        .collect();
    EtaSolution::new(Trajectory::new(samples)?, first.params.quantum_omega())
}

/// Mean trajectory (t, q, q̇ = p/m).
pub fn mean_trajectory(series: &[GaussianState]) -> Result<Trajectory> {
    Trajectory::new(
        series
            .iter()
            .map(|s| ClassicalState {
                t: s.t,
                q: s.q,
                qdot: s.p / s.params.mass(),
            })
            .collect(),
    )
}

/// Clock τ = ∫dt/α² = 4∫dt Re(A) of a Gaussian run.
pub fn alpha_clock(series: &[GaussianState]) -> Result<ReparamMap> {
    for s in series {
        let lhs = 4.0 * s.width().re;
        let rhs = 1.0 / (s.alpha * s.alpha);
        if (lhs - rhs).abs() > 1e-12 * rhs {
            return Err(Error::NonFinite(format!(
                "4 Re(A) = {lhs} disagrees with 1/alpha^2 = {rhs} at t = {}",
                s.t
            )));
        }
    }
    synchronizing_clock(&alpha_as_eta(series)?)
}
