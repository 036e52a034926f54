//! Classical trajectories of q̈ + ω(t)²q = 0.
//!
//! Phase-space conventions: momentum is p = m·q̇ and the canonical bracket
//! is {q, p} = 1, so {q, q̇} = 1/m.

use crate::error::{Error, Result};
use crate::ode::{integrate, IntegratorOptions, OdeSystem};
use crate::physics::{ClassicalState, TimeGrid};
use crate::profile::FrequencyProfile;
use crate::trajectory::Trajectory;

pub const MIN_REL_TOL: f64 = 1e-14;
pub const MAX_REL_TOL: f64 = 1e-3;

pub(crate) fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if (MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
        Ok(())
    } else {
        Err(Error::invalid(
            "rel_tol",
            format!("must lie in [{MIN_REL_TOL:e}, {MAX_REL_TOL:e}], got {rel_tol:e}"),
        ))
    }
}

struct Oscillator<'a> {
    profile: &'a FrequencyProfile,
}

impl OdeSystem<2> for Oscillator<'_> {
    fn rhs(&self, t: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], -self.profile.omega_sq(t)? * y[0]])
    }
}

/// Integrates the oscillator from `init` and samples it on `grid`.
pub fn integrate_oscillator(
    profile: &FrequencyProfile,
    init: ClassicalState,
    grid: &TimeGrid,
    rel_tol: f64,
) -> Result<Trajectory> {
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
    profile.check_interval(grid.t_start(), grid.t_end())?;
    let sol = integrate(
        &Oscillator { profile },
        init.t,
        [init.q, init.qdot],
        &grid.times(),
        &IntegratorOptions::for_accuracy(rel_tol),
    )?;
    Trajectory::new(
        sol.times
            .iter()
            .zip(&sol.values)
            .map(|(&t, y)| ClassicalState {
                t,
                q: y[0],
                qdot: y[1],
            })
            .collect(),
    )
}

/// Two solutions with q₁(t₀)=1, q̇₁(t₀)=0 and q₂(t₀)=0, q̇₂(t₀)=1.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalPair {
    pub traj1: Trajectory,
    pub traj2: Trajectory,
    pub base_time: f64,
    /// q₁q̇₂ − q̇₁q₂, exactly 1 at the base time.
    pub wronskian: f64,
}

impl FundamentalPair {
    /// Wronskian q₁q̇₂ − q̇₁q₂ at every stored sample.
    pub fn wronskian_series(&self) -> Vec<(f64, f64)> {
        self.traj1
            .samples()
            .iter()
            .zip(self.traj2.samples())
            .map(|(a, b)| (a.t, a.q * b.qdot - a.qdot * b.q))
            .collect()
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.traj1.t_range()
    }

    /// (q₁, q̇₁, q₂, q̇₂) at `t`.
    pub fn at(&self, t: f64) -> Result<(ClassicalState, ClassicalState)> {
        Ok((self.traj1.interpolate(t)?, self.traj2.interpolate(t)?))
    }
}

pub fn fundamental_pair(
    profile: &FrequencyProfile,
    t0: f64,
    grid: &TimeGrid,
    rel_tol: f64,
) -> Result<FundamentalPair> {
    let traj1 = integrate_oscillator(
        profile,
        ClassicalState {
            t: t0,
            q: 1.0,
            qdot: 0.0,
        },
        grid,
        rel_tol,
    )?;
    let traj2 = integrate_oscillator(
        profile,
        ClassicalState {
            t: t0,
            q: 0.0,
            qdot: 1.0,
        },
        grid,
        rel_tol,
    )?;
    Ok(FundamentalPair {
        traj1,
        traj2,
        base_time: t0,
        wronskian: 1.0,
    })
}

/// Wronskian charges W_a = q_a q̇ − q̇_a q of `state` against the pair.
pub fn wronskian_charges(pair: &FundamentalPair, state: &ClassicalState) -> Result<(f64, f64)> {
    let (s1, s2) = pair.at(state.t)?;
    Ok((
        s1.q * state.qdot - s1.qdot * state.q,
        s2.q * state.qdot - s2.qdot * state.q,
    ))
}

/// The charges W₁, W₂ as functions on the (q, p = mq̇) plane at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeFunctions {
    pub first: ClassicalState,
    pub second: ClassicalState,
    pub mass: f64,
}

impl ChargeFunctions {
    /// Freezes the pair at `t`.
    pub fn at(pair: &FundamentalPair, t: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::invalid("mass", "must be positive"));
        }
        let (first, second) = pair.at(t)?;
        Ok(Self {
            first,
            second,
            mass,
        })
    }

    /// W₁ at `x = [q, p]`.
    pub fn w1(&self, x: &[f64]) -> f64 {
        self.first.q * x[1] / self.mass - self.first.qdot * x[0]
    }

    /// W₂ at `x = [q, p]`.
    pub fn w2(&self, x: &[f64]) -> f64 {
        self.second.q * x[1] / self.mass - self.second.qdot * x[0]
    }

    /// q₁q̇₂ − q̇₁q₂ of the frozen pair.
    pub fn wronskian(&self) -> f64 {
        self.first.q * self.second.qdot - self.first.qdot * self.second.q
    }
}

/// Default central-difference step 10⁻⁵·(1 + ‖x‖∞).
pub fn default_fd_step(point: &[f64]) -> f64 {
    1e-5 * (1.0 + point.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Finite-difference Poisson bracket {F, G} = Σᵢ ∂F/∂qᵢ ∂G/∂pᵢ − ∂F/∂pᵢ ∂G/∂qᵢ.
///
/// `point` lists canonical pairs interleaved: `[q₁, p₁, q₂, p₂, …]`.
/// Each partial derivative uses a two-point central difference with step `h`.
pub fn poisson_bracket_fd<F, G>(f: F, g: G, point: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
{
    if point.is_empty() || !point.len().is_multiple_of(2) {
        return Err(Error::invalid(
            "point",
            format!(
                "need an even, non-zero number of coordinates, got {}",
                point.len()
            ),
        ));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("h", format!("must be positive, got {h}")));
    }
    let mut x = point.to_vec();
    let mut partial = |func: &dyn Fn(&[f64]) -> f64, k: usize| -> Result<f64> {
        let x0 = x[k];
        x[k] = x0 + h;
        let fp = func(&x);
        x[k] = x0 - h;
        let fm = func(&x);
        x[k] = x0;
        if !(fp.is_finite() && fm.is_finite()) {
            return Err(Error::NonFinite(format!(
                "function value near coordinate {k}"
            )));
        }
        Ok((fp - fm) / (2.0 * h))
    };
    let mut total = 0.0;
    for pair in 0..point.len() / 2 {
        let (iq, ip) = (2 * pair, 2 * pair + 1);
        let fq = partial(&f, iq)?;
        let fp = partial(&f, ip)?;
        let gq = partial(&g, iq)?;
        let gp = partial(&g, ip)?;
        total += fq * gp - fp * gq;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_returns_after_one_period() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        let g = TimeGrid::new(0.0, 2.0 * PI, 101).unwrap();
        let tr = integrate_oscillator(
            &p,
            ClassicalState {
                t: 0.0,
                q: 1.0,
                qdot: 0.0,
            },
            &g,
            1e-12,
        )
        .unwrap();
        let end = tr.last();
        assert!((end.q - 1.0).abs() < 1e-8);
        assert!(end.qdot.abs() < 1e-8);
    }

    #[test]
    fn free_particle_is_linear() {
        let p = FrequencyProfile::constant(0.0).unwrap();
        let g = TimeGrid::new(0.0, 3.0, 4).unwrap();
        let tr = integrate_oscillator(
            &p,
            ClassicalState {
                t: 0.0,
                q: 0.0,
                qdot: 1.0,
            },
            &g,
            1e-10,
        )
        .unwrap();
        assert!((tr.last().q - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance_and_start() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        let g = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let s = ClassicalState {
            t: 0.0,
            q: 1.0,
            qdot: 0.0,
        };
        assert!(integrate_oscillator(&p, s, &g, 1e-2).is_err());
        assert!(integrate_oscillator(&p, s, &g, 1e-15).is_err());
        assert!(integrate_oscillator(&p, ClassicalState { t: 0.5, ..s }, &g, 1e-8).is_err());
    }

    #[test]
    fn tabulated_profile_outside_domain_is_rejected() {
        let p = FrequencyProfile::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 1.0]).unwrap();
        let g = TimeGrid::new(0.0, 3.0, 4).unwrap();
        let s = ClassicalState {
            t: 0.0,
            q: 1.0,
            qdot: 0.0,
        };
        assert!(matches!(
            integrate_oscillator(&p, s, &g, 1e-8),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn textbook_pairs() {
        let g = TimeGrid::new(0.0, 10.0, 201).unwrap();
        let pair =
            fundamental_pair(&FrequencyProfile::constant(1.0).unwrap(), 0.0, &g, 1e-12).unwrap();
        assert_eq!(pair.wronskian, 1.0);
        for (a, b) in pair.traj1.samples().iter().zip(pair.traj2.samples()) {
            assert!((a.q - a.t.cos()).abs() < 1e-9);
            assert!((b.q - b.t.sin()).abs() < 1e-9);
        }
        let free =
            fundamental_pair(&FrequencyProfile::constant(0.0).unwrap(), 0.0, &g, 1e-12).unwrap();
        for (a, b) in free.traj1.samples().iter().zip(free.traj2.samples()) {
            assert!((a.q - 1.0).abs() < 1e-12);
            assert!((b.q - b.t).abs() < 1e-11);
        }
    }

    #[test]
    fn free_particle_charges() {
        let g = TimeGrid::new(0.0, 4.0, 5).unwrap();
        let pair =
            fundamental_pair(&FrequencyProfile::constant(0.0).unwrap(), 0.0, &g, 1e-12).unwrap();
        let (w1, w2) = wronskian_charges(
            &pair,
            &ClassicalState {
                t: 2.0,
                q: 2.0,
                qdot: 1.0,
            },
        )
        .unwrap();
        assert!((w1 - 1.0).abs() < 1e-12);
        assert!(w2.abs() < 1e-11);
        assert!(wronskian_charges(
            &pair,
            &ClassicalState {
                t: 5.0,
                q: 0.0,
                qdot: 0.0
            }
        )
        .is_err());
    }

    #[test]
    fn charges_of_the_first_solution() {
        let g = TimeGrid::new(0.0, 5.0, 51).unwrap();
        let pair = fundamental_pair(
            &FrequencyProfile::floquet(1.0, 0.2, 1.0).unwrap(),
            0.0,
            &g,
            1e-12,
        )
        .unwrap();
        for (s, (_, w)) in pair.traj1.samples().iter().zip(pair.wronskian_series()) {
            let (w1, w2) = wronskian_charges(&pair, s).unwrap();
            assert_eq!(w1, 0.0);
            assert!((w2 + w).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_bracket() {
        let b = poisson_bracket_fd(|x| x[0], |x| x[1], &[0.3, -1.2], 1e-5).unwrap();
        assert!((b - 1.0).abs() < 1e-10);
        assert!(poisson_bracket_fd(|x| x[0], |x| x[1], &[0.3], 1e-5).is_err());
        assert!(poisson_bracket_fd(|x| x[0], |x| x[1], &[0.3, 1.0], 0.0).is_err());
        let blowup = |x: &[f64]| if x[0] > 0.3 { f64::INFINITY } else { 0.0 };
        assert!(matches!(
            poisson_bracket_fd(blowup, |x| x[1], &[0.3, 1.0], 1e-5),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let f = |x: &[f64]| x[0] * x[0] * x[1] + x[2].sin();
        let g = |x: &[f64]| x[1] * x[3] - x[0].exp();
        let pt = [0.4, -0.7, 1.1, 0.2];
        let h = default_fd_step(&pt);
        let a = poisson_bracket_fd(f, g, &pt, h).unwrap();
        let b = poisson_bracket_fd(g, f, &pt, h).unwrap();
        assert_eq!(a, -b);
    }
}
