//! Time reparametrizations and their Schwarzian derivative.

use crate::error::{Error, Result};

/// A smooth reparametrization t ↦ f(t).
pub trait TimeMap {
    /// (f, ḟ, f̈, f⃛) at `t`. The Jacobian of the map is h = ḟ.
    fn jet(&self, t: f64) -> Result<[f64; 4]>;

    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?[0])
    }

    fn jacobian(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?[1])
    }

    /// Schw[f] = d²ln h − ½(d ln h)² = ḧ/h − (3/2)(ḣ/h)².
    fn schwarzian(&self, t: f64) -> Result<f64> {
        let [_, h, hd, hdd] = self.jet(t)?;
        if h == 0.0 || !h.is_finite() {
            return Err(Error::Domain(format!(
                "map is not locally invertible at t = {t}"
            )));
        }
        let r = hd / h;
        Ok(hdd / h - 1.5 * r * r)
    }
}

/// Evaluates Schw[f](t).
pub fn schwarzian(map: &impl TimeMap, t: f64) -> Result<f64> {
    map.schwarzian(t)
}

/// Reparametrizations with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormMap {
    /// f = scale·t + shift.
    Affine { scale: f64, shift: f64 },
    /// f = (a t + b)/(c t + d).
    Mobius { a: f64, b: f64, c: f64, d: f64 },
    /// f = e^{rate·t}.
    Exp { rate: f64 },
    /// f = tan(freq·t).
    Tan { freq: f64 },
    /// f = arctan(t)/freq, the inverse of `Tan`.
    Arctan { freq: f64 },
}

impl ClosedFormMap {
    pub fn identity() -> Self {
        Self::Affine {
            scale: 1.0,
            shift: 0.0,
        }
    }
}

impl TimeMap for ClosedFormMap {
    fn jet(&self, t: f64) -> Result<[f64; 4]> {
        Ok(match *self {
            Self::Affine { scale, shift } => [scale * t + shift, scale, 0.0, 0.0],
            Self::Mobius { a, b, c, d } => {
                let den = c * t + d;
                if den == 0.0 {
                    return Err(Error::Domain(format!("Mobius map has a pole at t = {t}")));
                }
                let det = a * d - b * c;
                [
                    (a * t + b) / den,
                    det / (den * den),
                    -2.0 * c * det / den.powi(3),
                    6.0 * c * c * det / den.powi(4),
                ]
            }
            Self::Exp { rate } => {
                let e = (rate * t).exp();
                [e, rate * e, rate * rate * e, rate.powi(3) * e]
            }
            Self::Tan { freq } => {
                let u = (freq * t).tan();
                let s = 1.0 + u * u;
                [
                    u,
                    freq * s,
                    2.0 * freq * freq * u * s,
                    2.0 * freq.powi(3) * s * (1.0 + 3.0 * u * u),
                ]
            }
            Self::Arctan { freq } => {
                let s = 1.0 + t * t;
                [
                    t.atan() / freq,
                    1.0 / (freq * s),
                    -2.0 * t / (freq * s * s),
                    (6.0 * t * t - 2.0) / (freq * s * s * s),
                ]
            }
        })
    }
}

/// The composite map `outer ∘ inner`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Composition<F, G> {
    pub outer: F,
    pub inner: G,
}

impl<F, G> Composition<F, G> {
    pub fn new(outer: F, inner: G) -> Self {
        Self { outer, inner }
    }
}

impl<F: TimeMap, G: TimeMap> TimeMap for Composition<F, G> {
    fn jet(&self, t: f64) -> Result<[f64; 4]> {
        let [g0, g1, g2, g3] = self.inner.jet(t)?;
        let [f0, f1, f2, f3] = self.outer.jet(g0)?;
        Ok([
            f0,
            f1 * g1,
            f2 * g1 * g1 + f1 * g2,
            f3 * g1.powi(3) + 3.0 * f2 * g1 * g2 + f1 * g3,
        ])
    }
}
