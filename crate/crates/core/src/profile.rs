//! Time-dependent squared frequency ω²(t) of the harmonic well.
//!
//! ω² may be negative (inverted well); nothing here clamps it.

use crate::error::{Error, Result};

/// Closed-form and tabulated families for ω²(t).
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyProfile {
    /// ω²(t) = ω₀².
    Constant { omega0: f64 },
    /// ω²(t) = ω₀²(1 + ε cos νt).
    Floquet { omega0: f64, epsilon: f64, nu: f64 },
    /// ω²(t) = ω₀² + slope·t.
    LinearRampOfOmegaSq { omega0_sq: f64, slope: f64 },
    /// Natural cubic spline through tabulated ω² samples.
    Tabulated(TabulatedProfile),
}

impl FrequencyProfile {
    pub fn constant(omega0: f64) -> Result<Self> {
        check_omega0(omega0)?;
        Ok(Self::Constant { omega0 })
    }

    pub fn floquet(omega0: f64, epsilon: f64, nu: f64) -> Result<Self> {
        check_omega0(omega0)?;
        if !(epsilon.is_finite() && epsilon.abs() < 1.0) {
            return Err(Error::invalid(
                "epsilon",
                format!("need |epsilon| < 1, got {epsilon}"),
            ));
        }
        if !nu.is_finite() {
            return Err(Error::invalid("nu", "must be finite"));
        }
        Ok(Self::Floquet {
            omega0,
            epsilon,
            nu,
        })
    }

    pub fn linear_ramp(omega0_sq: f64, slope: f64) -> Result<Self> {
        if !(omega0_sq.is_finite() && slope.is_finite()) {
            return Err(Error::invalid("ramp", "parameters must be finite"));
        }
        Ok(Self::LinearRampOfOmegaSq { omega0_sq, slope })
    }

    pub fn tabulated(times: Vec<f64>, omega_sq: Vec<f64>) -> Result<Self> {
        Ok(Self::Tabulated(TabulatedProfile::new(times, omega_sq)?))
    }

    /// ω²(t).
    pub fn omega_sq(&self, t: f64) -> Result<f64> {
        Ok(match self {
            Self::Constant { omega0 } => omega0 * omega0,
            Self::Floquet {
                omega0,
                epsilon,
                nu,
            } => omega0 * omega0 * (1.0 + epsilon * (nu * t).cos()),
            Self::LinearRampOfOmegaSq { omega0_sq, slope } => omega0_sq + slope * t,
            Self::Tabulated(tab) => {
                tab.check(t)?;
                tab.spline.eval(t)
            }
        })
    }

    /// d(ω²)/dt. Analytic for closed forms, central difference for tables.
    pub fn omega_sq_dot(&self, t: f64) -> Result<f64> {
        Ok(match self {
            Self::Constant { .. } => 0.0,
            Self::Floquet {
                omega0,
                epsilon,
                nu,
            } => -omega0 * omega0 * epsilon * nu * (nu * t).sin(),
            Self::LinearRampOfOmegaSq { slope, .. } => *slope,
            Self::Tabulated(tab) => {
                tab.check(t)?;
                let h = tab.span() * 1e-6;
                (tab.spline.eval(t + h) - tab.spline.eval(t - h)) / (2.0 * h)
            }
        })
    }

    /// Interval on which the profile may be evaluated, if bounded.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            Self::Tabulated(tab) => Some((tab.t_min(), tab.t_max())),
            _ => None,
        }
    }

    /// Errors unless `[t0, t1]` lies inside the profile's domain.
    pub fn check_interval(&self, t0: f64, t1: f64) -> Result<()> {
        if let Some((lo, hi)) = self.domain() {
            for t in [t0, t1] {
                if t < lo || t > hi {
                    return Err(Error::OutOfRange { t, lo, hi });
                }
            }
        }
        Ok(())
    }
}

fn check_omega0(omega0: f64) -> Result<()> {
    if omega0.is_finite() && omega0 >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "omega0",
            format!("must be finite and >= 0, got {omega0}"),
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    spline: NaturalCubicSpline,
}

impl TabulatedProfile {
    pub fn new(times: Vec<f64>, omega_sq: Vec<f64>) -> Result<Self> {
        Ok(Self {
            spline: NaturalCubicSpline::new(times, omega_sq)?,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.spline.x
    }

    pub fn values(&self) -> &[f64] {
        &self.spline.y
    }

    pub fn t_min(&self) -> f64 {
        self.spline.x[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.spline.x.last().unwrap()
    }

    fn span(&self) -> f64 {
        self.t_max() - self.t_min()
    }

    fn check(&self, t: f64) -> Result<()> {
        let (lo, hi) = (self.t_min(), self.t_max());
        if t >= lo && t <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange { t, lo, hi })
        }
    }
}

/// Cubic spline with zero second derivative at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalCubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl NaturalCubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::invalid(
                "tabulated profile",
                format!("{} times but {} values", n, y.len()),
            ));
        }
        if n < 2 {
            return Err(Error::InsufficientSamples { needed: 2, got: n });
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tabulated profile sample".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "tabulated profile",
                "times must be strictly increasing",
            ));
        }

        // Tridiagonal solve for interior second derivatives (Thomas algorithm).
        let mut m = vec![0.0; n];
        if n > 2 {
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for j in 0..k {
                let i = j + 1;
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[j] = 2.0 * (h0 + h1);
                upper[j] = h1;
                rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for j in 1..k {
                let lower = x[j + 1] - x[j];
                let w = lower / diag[j - 1];
                diag[j] -= w * upper[j - 1];
                rhs[j] -= w * rhs[j - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for j in (0..k - 1).rev() {
                m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
            }
        }
        Ok(Self { x, y, m })
    }

    /// Evaluates the spline; outside the knots the end cubic is extended.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = 1.0 - a;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}
