//! Time-dependent harmonic oscillator at three levels of description.
//!
//! * [`classical`]: trajectories of q̈ + ω(t)²q = 0, fundamental solution
//!   pairs, Wronskian charges and finite-difference Poisson brackets.
//! * [`ermakov`]: the auxiliary equation η̈ + ω²η = Ω²/η³, Ermakov-Lewis
//!   invariants, synchronizing clocks τ = ∫dt/η², Schwarzian derivatives and
//!   the third-order symmetry equation.
//! * [`gaussian`]: effective dynamics of a Gaussian wave packet (q, p, α, β, γ),
//!   its moments, the uncertainty Casimir and the α clock.
//! * [`schrodinger`]: a split-step Fourier propagator for the full
//!   Schrödinger equation used as an independent reference.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod ermakov;
pub mod error;
pub mod fd;
pub mod gaussian;
pub mod ode;
pub mod physics;
pub mod profile;
pub mod schrodinger;
pub mod trajectory;

pub use error::{Error, Result};
pub use physics::{ClassicalState, PhysicalParams, TimeGrid};
pub use profile::FrequencyProfile;
pub use trajectory::Trajectory;
