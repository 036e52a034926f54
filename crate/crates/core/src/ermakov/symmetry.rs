//! Residual of the symmetry equation X⁽³⁾ + 4ω²Ẋ + 2(ω²)˙X = 0.
//!
//! Time reparametrizations generated by X(t)∂ₜ are symmetries of the
//! oscillator exactly when X solves this equation; q₁², q₂² and q₁q₂ do.

use crate::error::{Error, Result};
use crate::fd::{d1_7pt, d3_7pt};
use crate::profile::FrequencyProfile;
use crate::trajectory::Trajectory;

/// Uniform samples X(t₀ + i·dt).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        Ok(Self { t0, dt, values })
    }

    pub fn from_fn(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(t0, dt, (0..n).map(|i| f(t0 + i as f64 * dt)).collect())
    }

    /// Combines two trajectories sampled on the same uniform grid.
    pub fn from_trajectories(
        a: &Trajectory,
        b: &Trajectory,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let (sa, sb) = (a.samples(), b.samples());
        if sa.len() != sb.len() || sa.len() < 2 {
            return Err(Error::invalid("trajectories", "need equal lengths >= 2"));
        }
        let dt = (sa[sa.len() - 1].t - sa[0].t) / (sa.len() - 1) as f64;
        Self::new(
            sa[0].t,
            dt,
            sa.iter().zip(sb).map(|(x, y)| f(x.q, y.q)).collect(),
        )
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryResidual {
    /// max |X⁽³⁾ + 4ω²Ẋ + 2(ω²)˙X| over interior points.
    pub max_abs: f64,
    /// `max_abs` divided by max |X⁽³⁾| + 1.
    pub normalized: f64,
}

/// Evaluates the symmetry-equation residual with 7-point stencils.
pub fn symmetry_residual(
    profile: &FrequencyProfile,
    x: &SampledFunction,
) -> Result<SymmetryResidual> {
    let n = x.values.len();
    if n < 7 {
        return Err(Error::InsufficientSamples { needed: 7, got: n });
    }
    let mut max_abs = 0.0f64;
    let mut max_third = 0.0f64;
    for i in 3..n - 3 {
        let t = x.time(i);
        let d1 = d1_7pt(&x.values, i, x.dt);
        let d3 = d3_7pt(&x.values, i, x.dt);
        let r = d3 + 4.0 * profile.omega_sq(t)? * d1 + 2.0 * profile.omega_sq_dot(t)? * x.values[i];
        max_abs = max_abs.max(r.abs());
        max_third = max_third.max(d3.abs());
    }
    Ok(SymmetryResidual {
        max_abs,
        normalized: max_abs / (max_third + 1.0),
    })
}
