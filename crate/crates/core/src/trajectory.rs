//! Time-ordered samples of (q, q̇) with cubic Hermite dense output.

use crate::error::{Error, Result};
use crate::physics::ClassicalState;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<ClassicalState>,
}

impl Trajectory {
    pub fn new(samples: Vec<ClassicalState>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientSamples { needed: 1, got: 0 });
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].t <= w[0].t) {
            return Err(Error::invalid(
                "trajectory",
                format!(
                    "times must be strictly increasing ({} then {})",
                    w[0].t, w[1].t
                ),
            ));
        }
        if samples
            .iter()
            .any(|s| !(s.t.is_finite() && s.q.is_finite() && s.qdot.is_finite()))
        {
            return Err(Error::NonFinite("trajectory sample".into()));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[ClassicalState] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &ClassicalState {
        &self.samples[0]
    }

    pub fn last(&self) -> &ClassicalState {
        self.samples.last().unwrap()
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.first().t, self.last().t)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.t_range();
        t >= lo && t <= hi
    }

    /// State at `t`. Node times return the stored sample unchanged; between
    /// nodes q is the cubic Hermite interpolant and q̇ its derivative.
    pub fn interpolate(&self, t: f64) -> Result<ClassicalState> {
        let (lo, hi) = self.t_range();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        let idx = self.samples.partition_point(|s| s.t < t);
        if idx < self.samples.len() && self.samples[idx].t == t {
            return Ok(self.samples[idx]);
        }
        let (a, b) = (&self.samples[idx - 1], &self.samples[idx]);
        let (q, qdot) = hermite(a, b, t);
        Ok(ClassicalState { t, q, qdot })
    }

    /// Applies `f` to every sample, keeping the time stamps.
    pub fn map(&self, mut f: impl FnMut(&ClassicalState) -> (f64, f64)) -> Result<Self> {
        Self::new(
            self.samples
                .iter()
                .map(|s| {
                    let (q, qdot) = f(s);
                    ClassicalState { t: s.t, q, qdot }
                })
                .collect(),
        )
    }
}

pub(crate) fn hermite(a: &ClassicalState, b: &ClassicalState, t: f64) -> (f64, f64) {
    let h = b.t - a.t;
    let s = (t - a.t) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let q = h00 * a.q + h10 * h * a.qdot + h01 * b.q + h11 * h * b.qdot;
    let d00 = 6.0 * s2 - 6.0 * s;
    let d10 = 3.0 * s2 - 4.0 * s + 1.0;
    let d01 = -d00;
    let d11 = 3.0 * s2 - 2.0 * s;
    let qdot = (d00 * a.q + d01 * b.q) / h + d10 * a.qdot + d11 * b.qdot;
    (q, qdot)
}
