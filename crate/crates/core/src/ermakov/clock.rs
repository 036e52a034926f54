//! Synchronizing clocks τ(t) = ∫dt/η² and the map (t, q) ↦ (τ, Q = q/η).

use super::schwarzian::TimeMap;
use super::EtaSolution;
use crate::error::{Error, Result};
use crate::fd::{d1_5pt, d2_5pt};
use crate::physics::ClassicalState;
use crate::profile::FrequencyProfile;
use crate::trajectory::Trajectory;

/// Refinement factor of the composite Simpson rule per output interval.
const SIMPSON_REFINEMENT: usize = 8;

/// Sampled monotone reparametrization t ↦ τ with Jacobian h = 1/η².
///
/// Both directions use cubic Hermite interpolation with the exact slopes
/// (h forward, η² backward).
#[derive(Debug, Clone, PartialEq)]
pub struct ReparamMap {
    eta: EtaSolution,
    forward: Trajectory,
    inverse: Trajectory,
}

impl ReparamMap {
    pub fn eta(&self) -> &EtaSolution {
        &self.eta
    }

    /// Samples (t, τ, h) at the nodes of the underlying η solution.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.forward.samples().iter().map(|s| (s.t, s.q, s.qdot))
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.forward.t_range()
    }

    pub fn tau_range(&self) -> (f64, f64) {
        self.inverse.t_range()
    }

    pub fn tau_at(&self, t: f64) -> Result<f64> {
        Ok(self.forward.interpolate(t)?.q)
    }

    pub fn time_at(&self, tau: f64) -> Result<f64> {
        Ok(self.inverse.interpolate(tau)?.q)
    }

    /// Finite-difference step used for derivatives of h: 10⁻⁴ of the time range.
    pub fn fd_step(&self) -> f64 {
        let (a, b) = self.t_range();
        1e-4 * (b - a)
    }

    /// Sub-interval on which the 5-point stencils fit.
    pub fn interior(&self) -> (f64, f64) {
        let (a, b) = self.t_range();
        let m = 2.0 * self.fd_step();
        (a + m, b - m)
    }

    fn ln_jacobian(&self, t: f64) -> f64 {
        // only called inside the range checked by `stencil_room`
        let eta = self
            .eta
            .samples()
            .interpolate(t)
            .map(|s| s.q)
            .unwrap_or(f64::NAN);
        -2.0 * eta.ln()
    }

    fn stencil_room(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.interior();
        if t >= lo && t <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange { t, lo, hi })
        }
    }
}

impl TimeMap for ReparamMap {
    fn jet(&self, t: f64) -> Result<[f64; 4]> {
        let s = self.forward.interpolate(t)?;
        self.stencil_room(t)?;
        let step = self.fd_step();
        let h = |x: f64| self.ln_jacobian(x).exp();
        Ok([s.q, s.qdot, d1_5pt(h, t, step), d2_5pt(h, t, step)])
    }

    fn jacobian(&self, t: f64) -> Result<f64> {
        let (eta, _) = self.eta.at(t)?;
        Ok(1.0 / (eta * eta))
    }

    /// 5-point differences of ln h with step 10⁻⁴·(time range).
    fn schwarzian(&self, t: f64) -> Result<f64> {
        self.stencil_room(t)?;
        let step = self.fd_step();
        let f = |x: f64| self.ln_jacobian(x);
        let d1 = d1_5pt(f, t, step);
        let d2 = d2_5pt(f, t, step);
        Ok(d2 - 0.5 * d1 * d1)
    }
}

/// Builds τ(t) = ∫dt/η² with τ(t_start) = 0.
///
/// Each output interval is integrated with composite Simpson on 8 sub-intervals,
/// η between nodes coming from the Hermite interpolant.
pub fn synchronizing_clock(eta: &EtaSolution) -> Result<ReparamMap> {
    let samples = eta.samples().samples();
    let mut forward = Vec::with_capacity(samples.len());
    let mut tau = 0.0;
    forward.push(ClassicalState {
        t: samples[0].t,
        q: 0.0,
        qdot: 1.0 / (samples[0].q * samples[0].q),
    });
    for w in samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let hs = (b.t - a.t) / SIMPSON_REFINEMENT as f64;
        let mut acc = 0.0;
        for j in 0..=SIMPSON_REFINEMENT {
            let s = match j {
                0 => *a,
                j if j == SIMPSON_REFINEMENT => *b,
                _ => {
                    let (q, qdot) = crate::trajectory::hermite(a, b, a.t + j as f64 * hs);
                    ClassicalState {
                        t: a.t + j as f64 * hs,
                        q,
                        qdot,
                    }
                }
            };
            if !(s.q > 0.0) {
                return Err(Error::Domain(format!(
                    "eta is not positive near t = {}",
                    s.t
                )));
            }
            let weight = if j == 0 || j == SIMPSON_REFINEMENT {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += weight / (s.q * s.q);
        }
        let next = tau + acc * hs / 3.0;
        if !(next > tau) {
            return Err(Error::NonMonotone { t: b.t });
        }
        tau = next;
        forward.push(ClassicalState {
            t: b.t,
            q: tau,
            qdot: 1.0 / (b.q * b.q),
        });
    }
    let inverse = forward
        .iter()
        .map(|s| ClassicalState {
            t: s.q,
            q: s.t,
            qdot: 1.0 / s.qdot,
        })
        .collect();
    Ok(ReparamMap {
        eta: eta.clone(),
        forward: Trajectory::new(forward)?,
        inverse: Trajectory::new(inverse)?,
    })
}

/// Maps samples of q(t) to (τ, Q = q/η, dQ/dτ = ηq̇ − η̇q).
pub fn reparametrize_trajectory(
    traj: &Trajectory,
    eta: &EtaSolution,
    map: &ReparamMap,
) -> Result<Trajectory> {
    traj.samples()
        .iter()
        .map(|s| {
            let (e, ed) = eta.at(s.t)?;
            Ok(ClassicalState {
                t: map.tau_at(s.t)?,
                q: s.q / e,
                qdot: e * s.qdot - ed * s.q,
            })
        })
        .collect::<Result<Vec<_>>>()
        .and_then(Trajectory::new)
}

/// Least-squares fit of Q(τ) ≈ A cos(Ωτ + φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicFit {
    pub amplitude: f64,
    pub phase: f64,
    /// max |Q − A cos(Ωτ + φ)| over the samples.
    pub max_residual: f64,
    /// max |Q| over the samples.
    pub q_max: f64,
}

impl HarmonicFit {
    pub fn relative_to_amplitude(&self) -> f64 {
        self.max_residual / self.amplitude
    }

    pub fn relative_to_max(&self) -> f64 {
        self.max_residual / self.q_max
    }
}

/// Fits the samples of a τ-parametrized trajectory (τ stored in `t`, Q in `q`).
pub fn fit_harmonic(traj_tau: &Trajectory, omega: f64) -> Result<HarmonicFit> {
    let s = traj_tau.samples();
    if s.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: s.len(),
        });
    }
    let (mut cc, mut cs, mut ss, mut qc, mut qs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for x in s {
        let (sn, cn) = (omega * x.t).sin_cos();
        cc += cn * cn;
        cs += cn * sn;
        ss += sn * sn;
        qc += x.q * cn;
        qs += x.q * sn;
    }
    let det = cc * ss - cs * cs;
    if det.abs() <= 1e-12 * (cc * ss).max(f64::MIN_POSITIVE) {
        return Err(Error::Domain(
            "samples do not resolve the oscillation".into(),
        ));
    }
    let c = (qc * ss - qs * cs) / det;
    let d = (qs * cc - qc * cs) / det;
    let mut max_residual = 0.0f64;
    let mut q_max = 0.0f64;
    for x in s {
        let (sn, cn) = (omega * x.t).sin_cos();
        max_residual = max_residual.max((x.q - c * cn - d * sn).abs());
        q_max = q_max.max(x.q.abs());
    }
    Ok(HarmonicFit {
        amplitude: c.hypot(d),
        phase: (-d).atan2(c),
        max_residual,
        q_max,
    })
}

/// max |d²Q/dτ² + Ω²Q| / ‖Q‖∞ from second differences on `n` uniform τ points.
pub fn constant_frequency_residual(traj_tau: &Trajectory, omega: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: n });
    }
    let (a, b) = traj_tau.t_range();
    let dtau = (b - a) / (n - 1) as f64;
    let q: Vec<f64> = (0..n)
        .map(|i| {
            let tau = if i + 1 == n { b } else { a + i as f64 * dtau };
            traj_tau.interpolate(tau).map(|s| s.q)
        })
        .collect::<Result<_>>()?;
    let q_max = q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let d2 = (q[i + 1] - 2.0 * q[i] + q[i - 1]) / (dtau * dtau);
        worst = worst.max((d2 + omega * omega * q[i]).abs());
    }
    Ok(worst / q_max)
}

/// max over `n` uniform points of |ω²(t) − h²·ω̃²(f(t)) − ½Schw[f](t)| on `[t_a, t_b]`.
pub fn frequency_transform_residual(
    profile: &FrequencyProfile,
    map: &impl TimeMap,
    target_omega_sq: impl Fn(f64) -> f64,
    (t_a, t_b): (f64, f64),
    n: usize,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        let t = t_a + (t_b - t_a) * i as f64 / (n - 1) as f64;
        let f = map.value(t)?;
        let h = map.jacobian(t)?;
        let r = profile.omega_sq(t)? - h * h * target_omega_sq(f) - 0.5 * map.schwarzian(t)?;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::super::{eta_from_pair, solve_eta_ode, ClosedFormMap};
    use super::*;
    use crate::classical::{fundamental_pair, integrate_oscillator};
    use crate::physics::TimeGrid;
    use std::f64::consts::PI;

    #[test]
    fn identity_clock() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        let g = TimeGrid::new(1.0, 5.0, 41).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &g, 1e-12).unwrap();
        let map = synchronizing_clock(&eta).unwrap();
        for (t, tau, h) in map.nodes() {
            assert!((tau - (t - 1.0)).abs() < 1e-12);
            assert!((h - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn arctan_clock_for_free_auxiliary() {
        let p = FrequencyProfile::constant(0.0).unwrap();
        let g = TimeGrid::new(0.0, 10.0, 1001).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &g, 1e-13).unwrap();
        let map = synchronizing_clock(&eta).unwrap();
        for (t, tau, _) in map.nodes() {
            assert!((tau - t.atan()).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn period_integral() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        let g = TimeGrid::new(0.0, 2.0 * PI, 629).unwrap();
        let pair = fundamental_pair(&p, 0.0, &g, 1e-13).unwrap();
        let eta = eta_from_pair(&pair, 4.0, 1.0, 0.0).unwrap();
        let map = synchronizing_clock(&eta).unwrap();
        let tau = map.tau_at(2.0 * PI).unwrap() - map.tau_at(0.0).unwrap();
        assert!((tau - PI).abs() < 1e-7, "tau = {tau}");
    }

    #[test]
    fn round_trip_and_monotonicity() {
        let p = FrequencyProfile::floquet(1.0, 0.2, 1.0).unwrap();
        let g = TimeGrid::new(0.0, 20.0, 2001).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.3, -0.2), &g, 1e-12).unwrap();
        let map = synchronizing_clock(&eta).unwrap();
        let taus: Vec<f64> = map.nodes().map(|n| n.1).collect();
        assert!(taus.windows(2).all(|w| w[1] > w[0]));
        for k in 0..200 {
            let t = 0.0137 + k as f64 * 0.0995;
            let back = map.time_at(map.tau_at(t).unwrap()).unwrap();
            assert!((back - t).abs() < 1e-9 * 20.0, "t = {t}, back = {back}");
        }
    }

    #[test]
    fn identity_reparametrization_for_fixed_point() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        let g = TimeGrid::new(0.0, 5.0, 51).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &g, 1e-12).unwrap();
        let map = synchronizing_clock(&eta).unwrap();
        let q = integrate_oscillator(
            &p,
            ClassicalState {
                t: 0.0,
                q: 0.3,
                qdot: 0.8,
            },
            &g,
            1e-12,
        )
        .unwrap();
        let big_q = reparametrize_trajectory(&q, &eta, &map).unwrap();
        for (a, b) in q.samples().iter().zip(big_q.samples()) {
            assert!((a.t - b.t).abs() < 1e-12);
            assert!((a.q - b.q).abs() < 1e-12);
            assert!((a.qdot - b.qdot).abs() < 1e-12);
        }
    }

    #[test]
    fn free_particle_becomes_a_sine() {
        let p = FrequencyProfile::constant(0.0).unwrap();
        let g = TimeGrid::new(0.0, 10.0, 1001).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &g, 1e-13).unwrap();
        let map = synchronizing_clock(&eta).unwrap();
        let q = integrate_oscillator(
            &p,
            ClassicalState {
                t: 0.0,
                q: 0.0,
                qdot: 1.0,
            },
            &g,
            1e-12,
        )
        .unwrap();
        let big_q = reparametrize_trajectory(&q, &eta, &map).unwrap();
        for s in big_q.samples() {
            assert!((s.q - s.t.sin()).abs() < 1e-8, "tau = {}", s.t);
        }
    }

    #[test]
    fn fit_recovers_known_sinusoid() {
        let tr = Trajectory::new(
            (0..200)
                .map(|i| {
                    let t = i as f64 * 0.05;
                    ClassicalState {
                        t,
                        q: 1.5 * (2.0 * t + 0.4).cos(),
                        qdot: 0.0,
                    }
                })
                .collect(),
        )
        .unwrap();
        let fit = fit_harmonic(&tr, 2.0).unwrap();
        assert!((fit.amplitude - 1.5).abs() < 1e-12);
        assert!((fit.phase - 0.4).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
    }

    #[test]
    fn transform_residual_trivial_cases() {
        let g = TimeGrid::new(0.0, 1.0, 2).unwrap();
        let _ = g;
        let free = FrequencyProfile::constant(0.0).unwrap();
        let m = ClosedFormMap::Mobius {
            a: 2.0,
            b: 1.0,
            c: 1.0,
            d: 3.0,
        };
        let r = frequency_transform_residual(&free, &m, |_| 0.0, (0.0, 10.0), 101).unwrap();
        assert!(r < 1e-6);

        let fl = FrequencyProfile::floquet(1.0, 0.4, 1.7).unwrap();
        let id = ClosedFormMap::identity();
        let r =
            frequency_transform_residual(&fl, &id, |t| fl.omega_sq(t).unwrap(), (0.0, 10.0), 101)
                .unwrap();
        assert!(r < 1e-15);
    }

    #[test]
    fn schwarzian_needs_stencil_room() {
        let p = FrequencyProfile::constant(0.0).unwrap();
        let g = TimeGrid::new(0.0, 1.0, 101).unwrap();
        let eta = solve_eta_ode(&p, 1.0, (1.0, 0.0), &g, 1e-12).unwrap();
        let map = synchronizing_clock(&eta).unwrap();
        assert!(matches!(map.schwarzian(0.0), Err(Error::OutOfRange { .. })));
        assert!(map.schwarzian(0.5).is_ok());
    }
}
