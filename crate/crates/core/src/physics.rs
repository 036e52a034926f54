//! Physical constants, classical states and output time grids.

use crate::error::{Error, Result};

/// Mass and reduced Planck constant of the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    mass: f64,
    hbar: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::invalid(
                "mass",
                format!("must be positive, got {mass}"),
            ));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::invalid(
                "hbar",
                format!("must be positive, got {hbar}"),
            ));
        }
        Ok(Self { mass, hbar })
    }

    /// m = 1, ħ = 1.
    pub fn natural() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Frequency ħ/(2m) of the auxiliary equation obeyed by a Gaussian width.
    pub fn quantum_omega(&self) -> f64 {
        self.hbar / (2.0 * self.mass)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural()
    }
}

/// Uniformly spaced output times on `[t_start, t_end]`.
///
/// Output times only control where solutions are reported; adaptive
/// integrators choose their own substeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_output: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_output: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::invalid("time grid", "bounds must be finite"));
        }
        if t_end <= t_start {
            return Err(Error::invalid(
                "t_end",
                format!("must exceed t_start ({t_end} <= {t_start})"),
            ));
        }
        if n_output < 2 {
            return Err(Error::invalid(
                "n_output",
                format!("must be >= 2, got {n_output}"),
            ));
        }
        Ok(Self {
            t_start,
            t_end,
            n_output,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_output(&self) -> usize {
        self.n_output
    }

    pub fn span(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn spacing(&self) -> f64 {
        self.span() / (self.n_output - 1) as f64
    }

    /// The i-th output time; the last one is `t_end` exactly.
    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.n_output {
            self.t_end
        } else {
            self.t_start + i as f64 * self.spacing()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_output).map(|i| self.time(i)).collect()
    }
}

/// Position and velocity of the classical particle at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub t: f64,
    pub q: f64,
    pub qdot: f64,
}

impl ClassicalState {
    pub fn new(t: f64, q: f64, qdot: f64) -> Result<Self> {
        if !(t.is_finite() && q.is_finite() && qdot.is_finite()) {
            return Err(Error::NonFinite(format!(
                "classical state (t={t}, q={q}, qdot={qdot})"
            )));
        }
        Ok(Self { t, q, qdot })
    }

    /// Oscillator energy per unit mass for a constant frequency.
    pub fn energy(&self, omega_sq: f64) -> f64 {
        0.5 * (self.qdot * self.qdot + omega_sq * self.q * self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_reject_non_positive() {
        assert!(PhysicalParams::new(0.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0).is_err());
        let p = PhysicalParams::new(2.0, 0.5).unwrap();
        assert_eq!(p.quantum_omega(), 0.125);
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = TimeGrid::new(0.0, 0.3, 4).unwrap();
        let t = g.times();
        assert_eq!(t[0], 0.0);
        assert_eq!(t[3], 0.3);
        assert!((t[1] - 0.1).abs() < 1e-16);
        assert!(TimeGrid::new(1.0, 1.0, 5).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }
}
