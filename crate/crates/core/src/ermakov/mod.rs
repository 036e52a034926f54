//! Auxiliary equation η̈ + ω²η = Ω²/η³ and the Ermakov-Lewis invariant.
//!
//! A positive solution η gives the conserved quantity
//! 2I = (ηq̇ − η̇q)² + Ω²q²/η² for every solution q of q̈ + ω²q = 0, and the
//! clock τ = ∫dt/η² in which q/η oscillates at the constant frequency Ω.

mod clock;
mod schwarzian;
mod symmetry;

pub use clock::{
    constant_frequency_residual, fit_harmonic, frequency_transform_residual,
    reparametrize_trajectory, synchronizing_clock, HarmonicFit, ReparamMap,
};
pub use schwarzian::{schwarzian, ClosedFormMap, Composition, TimeMap};
pub use symmetry::{symmetry_residual, SampledFunction, SymmetryResidual};

use crate::classical::{check_rel_tol, FundamentalPair};
use crate::error::{Error, Result};
use crate::fd::d1_staggered;
use crate::ode::{integrate, IntegratorOptions, OdeSystem};
use crate::physics::{ClassicalState, TimeGrid};
use crate::profile::FrequencyProfile;
use crate::trajectory::Trajectory;

/// Solutions closer to zero than this fraction of η₀ abort the integration.
pub const COLLAPSE_FRACTION: f64 = 1e-8;

/// Samples of a positive solution (η, η̇) of the auxiliary equation and its Ω.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSolution {
    samples: Trajectory,
    omega: f64,
}

impl EtaSolution {
    /// `samples` stores η in `q` and η̇ in `qdot`.
    pub fn new(samples: Trajectory, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::invalid(
                "Omega",
                format!("must be >= 0, got {omega}"),
            ));
        }
        if let Some(s) = samples.samples().iter().find(|s| s.q <= 0.0) {
            return Err(Error::Domain(format!(
                "eta must stay positive, got {} at t = {}",
                s.q, s.t
            )));
        }
        Ok(Self { samples, omega })
    }

    pub fn samples(&self) -> &Trajectory {
        &self.samples
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.samples.t_range()
    }

    /// (η, η̇) at `t`.
    pub fn at(&self, t: f64) -> Result<(f64, f64)> {
        let s = self.samples.interpolate(t)?;
        Ok((s.q, s.qdot))
    }

    /// Largest normalized residual of η̈ + ω²η − Ω²/η³ at sample midpoints.
    ///
    /// η̈ comes from a fourth-order staggered difference of the stored η̇, so
    /// the samples must be uniformly spaced. Each residual is divided by
    /// |Ω²/η³| + |ω²η| at the midpoint.
    pub fn max_residual(&self, profile: &FrequencyProfile) -> Result<f64> {
        let s = self.samples.samples();
        if s.len() < 4 {
            return Err(Error::InsufficientSamples {
                needed: 4,
                got: s.len(),
            });
        }
        let dt = (s[s.len() - 1].t - s[0].t) / (s.len() - 1) as f64;
        if s.windows(2)
            .any(|w| ((w[1].t - w[0].t) - dt).abs() > 1e-9 * dt)
        {
            return Err(Error::invalid(
                "eta samples",
                "residual check needs uniform spacing",
            ));
        }
        let etadot: Vec<f64> = s.iter().map(|x| x.qdot).collect();
        let mut worst = 0.0f64;
        for i in 1..s.len() - 2 {
            let tm = 0.5 * (s[i].t + s[i + 1].t);
            let (eta, _) = self.at(tm)?;
            let eta_ddot = d1_staggered(&etadot, i, dt);
            let w2 = profile.omega_sq(tm)?;
            let source = self.omega * self.omega / eta.powi(3);
            let r = (eta_ddot + w2 * eta - source).abs() / (source.abs() + (w2 * eta).abs());
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

struct Auxiliary<'a> {
    profile: &'a FrequencyProfile,
    omega_sq: f64,
    floor: f64,
}

impl OdeSystem<2> for Auxiliary<'_> {
    fn rhs(&self, t: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        let eta = y[0];
        Ok([
            y[1],
            -self.profile.omega_sq(t)? * eta + self.omega_sq / (eta * eta * eta),
        ])
    }

    fn check_step(&self, t: f64, y: &[f64; 2]) -> Result<()> {
        if y[0] < self.floor {
            Err(Error::EtaCollapse { t, value: y[0] })
        } else {
            Ok(())
        }
    }
}

/// Integrates the auxiliary equation from (η₀, η̇₀) at the grid start.
pub fn solve_eta_ode(
    profile: &FrequencyProfile,
    omega: f64,
    init: (f64, f64),
    grid: &TimeGrid,
    rel_tol: f64,
) -> Result<EtaSolution> {
    check_rel_tol(rel_tol)?;
    let (eta0, etadot0) = init;
    if !(eta0.is_finite() && eta0 > 0.0) {
        return Err(Error::invalid(
            "eta0",
            format!("must be positive, got {eta0}"),
        ));
    }
    if !etadot0.is_finite() {
        return Err(Error::invalid("eta_dot0", "must be finite"));
    }
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::invalid(
            "Omega",
            format!("must be >= 0, got {omega}"),
        ));
    }
    profile.check_interval(grid.t_start(), grid.t_end())?;
    let system = Auxiliary {
        profile,
        omega_sq: omega * omega,
        floor: COLLAPSE_FRACTION * eta0,
    };
    let sol = integrate(
        &system,
        grid.t_start(),
        [eta0, etadot0],
        &grid.times(),
        &IntegratorOptions::for_accuracy(rel_tol),
    )?;
    let samples = Trajectory::new(
        sol.times
            .iter()
            .zip(&sol.values)
            .map(|(&t, y)| ClassicalState {
                t,
                q: y[0],
                qdot: y[1],
            })
            .collect(),
    )?;
    EtaSolution::new(samples, omega)
}

/// Algebraic solution η = (a q₁² + b q₂² + 2c q₁q₂)^½ with Ω = √(ab − c²)·|W|.
pub fn eta_from_pair(pair: &FundamentalPair, a: f64, b: f64, c: f64) -> Result<EtaSolution> {
    let det = a * b - c * c;
    if !(a > 0.0 && det > 0.0) {
        return Err(Error::Domain(format!(
            "quadratic form needs a > 0 and ab - c^2 > 0 (a = {a}, ab - c^2 = {det})"
        )));
    }
    let samples = pair
        .traj1
        .samples()
        .iter()
        .zip(pair.traj2.samples())
        .map(|(s1, s2)| {
            let eta_sq = a * s1.q * s1.q + b * s2.q * s2.q + 2.0 * c * s1.q * s2.q;
            if !(eta_sq > 0.0) {
                return Err(Error::Domain(format!(
                    "eta^2 = {eta_sq} is not positive at t = {}",
                    s1.t
                )));
            }
            let eta = eta_sq.sqrt();
            let half_deriv =
                a * s1.q * s1.qdot + b * s2.q * s2.qdot + c * (s1.qdot * s2.q + s1.q * s2.qdot);
            Ok(ClassicalState {
                t: s1.t,
                q: eta,
                qdot: half_deriv / eta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    EtaSolution::new(Trajectory::new(samples)?, det.sqrt() * pair.wronskian.abs())
}

/// Coefficients (a, b, c) of the algebraic construction that reproduce the
/// initial data (η₀, η̇₀) and Ω at the base time of a canonical pair.
pub fn coefficients_for_initial_data(
    eta0: f64,
    etadot0: f64,
    omega: f64,
    wronskian: f64,
) -> (f64, f64, f64) {
    let a = eta0 * eta0;
    let c = eta0 * etadot0;
    let b = (omega * omega / (wronskian * wronskian) + c * c) / a;
    (a, b, c)
}

/// Initial data (η₀, η̇₀) = (√a, c/√a) of the algebraic solution at the base time.
pub fn initial_data_for_coefficients(a: f64, c: f64) -> (f64, f64) {
    let eta0 = a.sqrt();
    (eta0, c / eta0)
}

/// I_η = ½[(ηq̇ − η̇q)² + Ω²q²/η²].
pub fn ermakov_invariant(eta: &EtaSolution, state: &ClassicalState) -> Result<f64> {
    let (e, ed) = eta.at(state.t)?;
    Ok(ermakov_invariant_at(
        e,
        ed,
        eta.omega(),
        state.q,
        state.qdot,
    ))
}

pub(crate) fn ermakov_invariant_at(eta: f64, etadot: f64, omega: f64, q: f64, qdot: f64) -> f64 {
    let w = eta * qdot - etadot * q;
    let r = omega * q / eta;
    0.5 * (w * w + r * r)
}

/// The invariant written through the Wronskian charges:
/// 2I = aW₁² + bW₂² + 2cW₁W₂, matching η² = a q₁² + b q₂² + 2c q₁q₂.
pub fn invariant_from_wronskians(a: f64, b: f64, c: f64, w1: f64, w2: f64) -> f64 {
    0.5 * (a * w1 * w1 + b * w2 * w2 + 2.0 * c * w1 * w2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::fundamental_pair;

    fn grid(t_end: f64, n: usize) -> TimeGrid {
        TimeGrid::new(0.0, t_end, n).unwrap()
    }

    #[test]
    fn fixed_point_stays_put() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &grid(10.0, 101), 1e-12).unwrap();
        for s in eta.samples().samples() {
            assert!((s.q - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn free_auxiliary_solution() {
        let p = FrequencyProfile::constant(0.0).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &grid(10.0, 101), 1e-12).unwrap();
        for s in eta.samples().samples() {
            assert!((s.q - (1.0 + s.t * s.t).sqrt()).abs() < 1e-8, "t = {}", s.t);
        }
    }

    #[test]
    fn rejects_non_positive_eta0() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        assert!(solve_eta_ode(&p, 1.0, (0.0, 0.0), &grid(1.0, 3), 1e-10).is_err());
        assert!(solve_eta_ode(&p, -1.0, (1.0, 0.0), &grid(1.0, 3), 1e-10).is_err());
    }

    #[test]
    fn collapse_is_reported() {
        // Ω = 0 reduces to the linear oscillator, whose solution cos t hits zero.
        let p = FrequencyProfile::constant(1.0).unwrap();
        let err = solve_eta_ode(&p, 0.0, (1.0, 0.0), &grid(3.0, 31), 1e-10).unwrap_err();
        match err {
            Error::EtaCollapse { t, .. } => assert!(t > 1.5 && t < 1.7, "t = {t}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn algebraic_free_solutions() {
        let pair = fundamental_pair(
            &FrequencyProfile::constant(0.0).unwrap(),
            0.0,
            &grid(5.0, 51),
            1e-12,
        )
        .unwrap();
        let eta = eta_from_pair(&pair, 1.0, 1.0, 0.0).unwrap();
        assert!((eta.omega() - 1.0).abs() < 1e-15);
        for s in eta.samples().samples() {
            assert!((s.q - (1.0 + s.t * s.t).sqrt()).abs() < 1e-11);
        }
        let eta = eta_from_pair(&pair, 1.0, 1.0, 0.5).unwrap();
        assert!((eta.omega() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        for s in eta.samples().samples() {
            assert!((s.q - (1.0 + s.t + s.t * s.t).sqrt()).abs() < 1e-11);
            let i = ermakov_invariant(
                &eta,
                &ClassicalState {
                    t: s.t,
                    q: s.t,
                    qdot: 1.0,
                },
            )
            .unwrap();
            assert!((i - 0.5).abs() < 1e-11, "t = {}, I = {i}", s.t);
        }
    }

    #[test]
    fn algebraic_constant_frequency_fixed_point() {
        let pair = fundamental_pair(
            &FrequencyProfile::constant(1.0).unwrap(),
            0.0,
            &grid(5.0, 51),
            1e-12,
        )
        .unwrap();
        let eta = eta_from_pair(&pair, 1.0, 1.0, 0.0).unwrap();
        assert!((eta.omega() - 1.0).abs() < 1e-15);
        for s in eta.samples().samples() {
            assert!((s.q - 1.0).abs() < 1e-10);
            assert!(s.qdot.abs() < 1e-10);
        }
    }

    #[test]
    fn indefinite_form_is_a_domain_error() {
        let pair = fundamental_pair(
            &FrequencyProfile::constant(1.0).unwrap(),
            0.0,
            &grid(1.0, 11),
            1e-10,
        )
        .unwrap();
        assert!(matches!(
            eta_from_pair(&pair, 1.0, 1.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eta_from_pair(&pair, -1.0, -1.0, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unit_oscillator_invariant_is_half() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &grid(6.0, 61), 1e-12).unwrap();
        for s in eta.samples().samples() {
            let st = ClassicalState {
                t: s.t,
                q: s.t.cos(),
                qdot: -s.t.sin(),
            };
            assert!((ermakov_invariant(&eta, &st).unwrap() - 0.5).abs() < 1e-12);
        }
        let late = ClassicalState {
            t: 7.0,
            q: 0.0,
            qdot: 0.0,
        };
        assert!(matches!(
            ermakov_invariant(&eta, &late),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn wronskian_form_values() {
        assert_eq!(invariant_from_wronskians(1.0, 1.0, 0.0, 1.0, 0.0), 0.5);
        assert_eq!(invariant_from_wronskians(1.0, 1.0, 0.5, 1.0, 0.0), 0.5);
    }

    #[test]
    fn initial_data_round_trip() {
        let (a, b, c) = coefficients_for_initial_data(2.0, 0.3, 1.5, 1.0);
        let (e0, ed0) = initial_data_for_coefficients(a, c);
        assert!((e0 - 2.0).abs() < 1e-15);
        assert!((ed0 - 0.3).abs() < 1e-15);
        assert!(((a * b - c * c).sqrt() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn residual_of_ode_solution_is_small() {
        let p = FrequencyProfile::floquet(1.0, 0.2, 1.0).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.2, 0.1), &grid(20.0, 2001), 1e-12).unwrap();
        let r = eta.max_residual(&p).unwrap();
        assert!(r < 1e-8, "residual {r}");
        // a mismatched Ω is detected
        let wrong = EtaSolution::new(eta.samples().clone(), 1.1).unwrap();
        assert!(wrong.max_residual(&p).unwrap() > 1e-2);
    }
}
