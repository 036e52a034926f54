//! Split-step Fourier propagation of iħ∂ₜψ = −(ħ²/2m)∂ₓ²ψ + ½mω(t)²x²ψ.
//!
//! Each step applies half a potential phase evaluated at the step midpoint,
//! a full kinetic phase in Fourier space and the second potential half.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::gaussian::{evolve_gaussian, moments_of_gaussian, GaussianState, Moments};
use crate::physics::{PhysicalParams, TimeGrid};
use crate::profile::FrequencyProfile;

pub const MIN_POINTS: usize = 256;
/// Largest tolerated |ψ| at either end of the box, relative to max |ψ|.
pub const BOUNDARY_RATIO: f64 = 1e-10;
/// Largest tolerated change of the norm when sampling an initial packet.
pub const INIT_NORM_TOLERANCE: f64 = 1e-8;
/// Number of widths kept between the packet centre and the box edge.
pub const WIDTH_MARGIN: f64 = 10.0;
const BOUNDARY_CHECK_EVERY: usize = 100;
const EFFECTIVE_REL_TOL: f64 = 1e-12;

/// Uniform grid x_j = x_min + j·dx, j = 0..n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    dx: f64,
    n: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, dx: f64, n: usize) -> Result<Self> {
        if !x_min.is_finite() {
            return Err(Error::invalid("x_min", "must be finite"));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::invalid("dx", format!("must be positive, got {dx}")));
        }
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::invalid(
                "n",
                format!("must be a power of two >= {MIN_POINTS}, got {n}"),
            ));
        }
        Ok(Self { x_min, dx, n })
    }

    /// Grid of `n` points centred on `center` covering [center − half_width, center + half_width].
    pub fn centered(center: f64, half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::invalid("half_width", "must be positive"));
        }
        Self::new(
            center - half_width,
            2.0 * half_width / (n - 1).max(1) as f64,
            n,
        )
    }

    /// Sizes a grid around an effective-dynamics run so that every packet
    /// keeps [`WIDTH_MARGIN`] widths of clearance, dx ≤ α_min/8 and the
    /// momentum distribution stays well inside the Nyquist band.
    pub fn auto_size(series: &[GaussianState], min_points: usize) -> Result<Self> {
        let first = series
            .first()
            .ok_or(Error::InsufficientSamples { needed: 1, got: 0 })?;
        let hbar = first.params.hbar();
        let (mut q_lo, mut q_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut a_min, mut a_max, mut k_max) = (f64::INFINITY, 0.0f64, 0.0f64);
        for s in series {
            q_lo = q_lo.min(s.q);
            q_hi = q_hi.max(s.q);
            a_min = a_min.min(s.alpha);
            a_max = a_max.max(s.alpha);
            let sigma_p = (s.beta * s.beta + hbar * hbar / (4.0 * s.alpha * s.alpha)).sqrt();
            k_max = k_max.max((s.p.abs() + WIDTH_MARGIN * sigma_p) / hbar);
        }
        let half_width = 0.5 * (q_hi - q_lo) + WIDTH_MARGIN * a_max;
        let dx_max = (a_min / 8.0).min(PI / k_max);
        let needed = (2.0 * half_width / dx_max).ceil() as usize + 1;
        let n = needed.max(min_points).max(MIN_POINTS).next_power_of_two();
        Self::centered(0.5 * (q_lo + q_hi), half_width, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n;
        let dk = 2.0 * PI / (n as f64 * self.dx);
        (0..n)
            .map(|j| if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * dk)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub grid: SpatialGrid,
    pub amplitudes: Vec<Complex64>,
    pub t: f64,
}

impl WaveFunction {
    pub fn new(grid: SpatialGrid, amplitudes: Vec<Complex64>, t: f64) -> Result<Self> {
        if amplitudes.len() != grid.n() {
            return Err(Error::invalid(
                "amplitudes",
                format!("expected {} values, got {}", grid.n(), amplitudes.len()),
            ));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("wave-function amplitude".into()));
        }
        Ok(Self {
            grid,
            amplitudes,
            t,
        })
    }

    /// ∫|ψ|²dx by the trapezoid rule.
    pub fn norm(&self) -> f64 {
        let a = &self.amplitudes;
        let sum: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        (sum - 0.5 * (a[0].norm_sqr() + a[a.len() - 1].norm_sqr())) * self.grid.dx()
    }

    /// max(|ψ(x_min)|, |ψ(x_max)|) / max|ψ|.
    pub fn boundary_ratio(&self) -> f64 {
        let a = &self.amplitudes;
        let peak = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        a[0].norm().max(a[a.len() - 1].norm()) / peak
    }

    /// ⟨φ|ψ⟩ on the shared grid.
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        let sum: Complex64 = other
            .amplitudes
            .iter()
            .zip(&self.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        sum * self.grid.dx()
    }

    /// |⟨φ|ψ⟩|² / (‖φ‖²‖ψ‖²), insensitive to a global phase.
    pub fn fidelity(&self, other: &WaveFunction) -> f64 {
        self.inner(other).norm_sqr() / (self.inner(self).re * other.inner(other).re)
    }

    /// Pairs (x, |ψ(x)|²).
    pub fn density(&self) -> Vec<(f64, f64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(j, z)| (self.grid.x(j), z.norm_sqr()))
            .collect()
    }

    /// Excess kurtosis of |ψ|² seen as a distribution in x; zero for a Gaussian.
    pub fn excess_kurtosis(&self) -> f64 {
        let rho = self.density();
        let w: f64 = rho.iter().map(|&(_, r)| r).sum();
        let mean = rho.iter().map(|&(x, r)| x * r).sum::<f64>() / w;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &(x, r) in &rho {
            let d2 = (x - mean) * (x - mean);
            m2 += d2 * r;
            m4 += d2 * d2 * r;
        }
        m2 /= w;
        m4 /= w;
        m4 / (m2 * m2) - 3.0
    }

    fn check_boundary(&self) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio < BOUNDARY_RATIO {
            Ok(())
        } else {
            Err(Error::BoundaryContamination { t: self.t, ratio })
        }
    }
}

/// Samples the Gaussian packet of `state` on `grid` and renormalizes it.
pub fn init_gaussian_wavefunction(
    state: &GaussianState,
    grid: &SpatialGrid,
) -> Result<WaveFunction> {
    if grid.dx() > state.alpha / 8.0 {
        return Err(Error::PacketTooWide(format!(
            "dx = {} does not resolve alpha = {} (need dx <= alpha/8)",
            grid.dx(),
            state.alpha
        )));
    }
    let amplitudes = (0..grid.n()).map(|j| state.amplitude(grid.x(j))).collect();
    let mut psi = WaveFunction::new(*grid, amplitudes, state.t)?;
    let ratio = psi.boundary_ratio();
    if !(ratio < BOUNDARY_RATIO) {
        return Err(Error::PacketTooWide(format!(
            "edge amplitude ratio {ratio:e} on [{}, {}]",
            grid.x_min(),
            grid.x_max()
        )));
    }
    let norm = psi.norm();
    if !((norm - 1.0).abs() < INIT_NORM_TOLERANCE) {
        return Err(Error::PacketTooWide(format!(
            "discrete norm {norm} differs from 1"
        )));
    }
    let scale = norm.sqrt().recip();
    psi.amplitudes.iter_mut().for_each(|z| *z *= scale);
    Ok(psi)
}

/// Reusable split-step propagator for one grid, profile and time step.
pub struct SplitStep<'a> {
    profile: &'a FrequencyProfile,
    params: PhysicalParams,
    dt: f64,
    grid: SpatialGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    kinetic: Vec<Complex64>,
    x_sq: Vec<f64>,
    constant_phase: Option<Vec<Complex64>>,
    phase: Vec<Complex64>,
}

impl fmt::Debug for SplitStep<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SplitStep")
            .field("dt", &self.dt)
            .field("grid", &self.grid)
            .finish_non_exhaustive()
    }
}

impl<'a> SplitStep<'a> {
    pub fn new(
        profile: &'a FrequencyProfile,
        params: PhysicalParams,
        grid: SpatialGrid,
        dt: f64,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        let n = grid.n();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let (m, hbar) = (params.mass(), params.hbar());
        let inv_n = 1.0 / n as f64;
        let kinetic = grid
            .wavenumbers()
            .into_iter()
            .map(|k| Complex64::cis(-hbar * k * k * dt / (2.0 * m)) * inv_n)
            .collect();
        let x_sq: Vec<f64> = grid.xs().into_iter().map(|x| x * x).collect();
        let mut step = Self {
            profile,
            params,
            dt,
            grid,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
            kinetic,
            x_sq,
            constant_phase: None,
            phase: vec![Complex64::default(); n],
        };
        if let FrequencyProfile::Constant { omega0 } = *profile {
            step.fill_phase(omega0 * omega0);
            step.constant_phase = Some(step.phase.clone());
        }
        Ok(step)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn fill_phase(&mut self, omega_sq: f64) {
        // e^{−iV dt/2ħ} with V = ½mω²x².
        let c = -0.5 * self.params.mass() * omega_sq * self.dt / (2.0 * self.params.hbar());
        for (ph, &x2) in self.phase.iter_mut().zip(&self.x_sq) {
            *ph = Complex64::cis(c * x2);
        }
    }

    /// Advances `psi` by `n_steps` steps of size dt.
    pub fn advance(&mut self, psi: &mut WaveFunction, n_steps: usize) -> Result<()> {
        if psi.grid != self.grid {
            return Err(Error::invalid(
                "psi",
                "grid differs from the propagator grid",
            ));
        }
        let t0 = psi.t;
        for step in 0..n_steps {
            let t = t0 + step as f64 * self.dt;
            let phase = match &self.constant_phase {
                Some(p) => p,
                None => {
                    let w2 = self.profile.omega_sq(t + 0.5 * self.dt)?;
                    self.fill_phase(w2);
                    &self.phase
                }
            };
            let amps = &mut psi.amplitudes;
            amps.iter_mut().zip(phase).for_each(|(z, p)| *z *= p);
            self.forward.process_with_scratch(amps, &mut self.scratch);
            amps.iter_mut()
                .zip(&self.kinetic)
                .for_each(|(z, k)| *z *= k);
            self.inverse.process_with_scratch(amps, &mut self.scratch);
            amps.iter_mut().zip(phase).for_each(|(z, p)| *z *= p);
            psi.t = t0 + (step + 1) as f64 * self.dt;
            if (step + 1) % BOUNDARY_CHECK_EVERY == 0 || step + 1 == n_steps {
                psi.check_boundary()?;
            }
        }
        Ok(())
    }

    /// Moments of `psi` reusing this propagator's transforms.
    pub fn moments(&mut self, psi: &WaveFunction) -> Moments {
        spectral_moments(
            psi,
            self.params.hbar(),
            &*self.forward,
            &*self.inverse,
            &mut self.scratch,
        )
    }
}

/// Propagates `psi` through `n_steps` Strang steps of size `dt`.
pub fn split_step_propagate(
    psi: WaveFunction,
    profile: &FrequencyProfile,
    dt: f64,
    n_steps: usize,
    params: PhysicalParams,
) -> Result<WaveFunction> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps", "must be positive"));
    }
    profile.check_interval(psi.t, psi.t + n_steps as f64 * dt)?;
    let mut prop = SplitStep::new(profile, params, psi.grid, dt)?;
    let mut psi = psi;
    prop.advance(&mut psi, n_steps)?;
    Ok(psi)
}

/// ⟨x̂⟩, ⟨x̂²⟩ by quadrature; ⟨p̂⟩, ⟨p̂²⟩ spectrally; ⟨D̂⟩ = Re⟨ψ|x̂p̂|ψ⟩.
pub fn moments(psi: &WaveFunction, params: &PhysicalParams) -> Moments {
    let n = psi.grid.n();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut scratch = vec![
        Complex64::default();
        forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len())
    ];
    spectral_moments(psi, params.hbar(), &*forward, &*inverse, &mut scratch)
}

fn spectral_moments(
    psi: &WaveFunction,
    hbar: f64,
    forward: &dyn Fft<f64>,
    inverse: &dyn Fft<f64>,
    scratch: &mut [Complex64],
) -> Moments {
    let grid = psi.grid;
    let n = grid.n();
    let dx = grid.dx();
    let norm: f64 = psi.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx;

    let (mut x1, mut x2) = (0.0, 0.0);
    for (j, z) in psi.amplitudes.iter().enumerate() {
        let x = grid.x(j);
        let r = z.norm_sqr();
        x1 += x * r;
        x2 += x * x * r;
    }
    x1 *= dx / norm;
    x2 *= dx / norm;

    let mut spec = psi.amplitudes.clone();
    forward.process_with_scratch(&mut spec, scratch);
    let mut hk = grid.wavenumbers();
    // The Nyquist mode has no odd derivative.
    hk[n / 2] = 0.0;
    hk.iter_mut().for_each(|k| *k *= hbar);
    let total: f64 = spec.iter().map(|z| z.norm_sqr()).sum();
    let (mut p1, mut p2) = (0.0, 0.0);
    for (z, &p) in spec.iter().zip(&hk) {
        let r = z.norm_sqr();
        p1 += p * r;
        p2 += p * p * r;
    }
    p1 /= total;
    p2 /= total;

    spec.iter_mut()
        .zip(&hk)
        .for_each(|(z, &p)| *z *= p / n as f64);
    inverse.process_with_scratch(&mut spec, scratch);
    let d: f64 = psi
        .amplitudes
        .iter()
        .zip(&spec)
        .enumerate()
        .map(|(j, (a, pa))| grid.x(j) * (a.conj() * pa).re)
        .sum::<f64>()
        * dx
        / norm;

    Moments { x1, p1, x2, p2, d }
}

/// Snapshot of both descriptions at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonSample {
    pub t: f64,
    pub effective: Moments,
    pub pde: Moments,
    /// Overlap fidelity between ψ(t) and the reconstructed Gaussian.
    pub fidelity: f64,
    pub norm: f64,
    pub excess_kurtosis: f64,
}

/// Maxima over output times of the effective-vs-PDE discrepancies.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub x1: f64,
    pub p1: f64,
    pub x2: f64,
    pub p2: f64,
    pub d: f64,
    pub casimir: f64,
    pub min_fidelity: f64,
    /// max |C(t) − C(t₀)| / |C(t₀)| of the PDE moments.
    pub pde_casimir_drift: f64,
    /// Same for the effective moments.
    pub effective_casimir_drift: f64,
    pub max_norm_drift: f64,
    pub max_excess_kurtosis: f64,
    pub steps: usize,
    pub samples: Vec<ComparisonSample>,
}

impl DeviationReport {
    pub fn max_moment_deviation(&self) -> f64 {
        [self.x1, self.p1, self.x2, self.p2, self.d]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Step counts from the grid start to each output time; every output time
/// must sit on a multiple of `dt`.
fn output_steps(grid: &TimeGrid, dt: f64) -> Result<Vec<usize>> {
    grid.times()
        .iter()
        .map(|&t| {
            let s = (t - grid.t_start()) / dt;
            let k = s.round();
            if (s - k).abs() > 1e-6 {
                Err(Error::invalid(
                    "dt",
                    format!("output time {t} is not a multiple of dt = {dt} from the start"),
                ))
            } else {
                Ok(k as usize)
            }
        })
        .collect()
}

/// Runs the effective equations and the split-step propagator from the same
/// packet and compares their moments at every output time of `grid`.
pub fn compare_effective_vs_pde(
    profile: &FrequencyProfile,
    init: &GaussianState,
    grid: &TimeGrid,
    spatial: &SpatialGrid,
    dt: f64,
) -> Result<DeviationReport> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    let steps = output_steps(grid, dt)?;
    let effective = evolve_gaussian(profile, init, grid, EFFECTIVE_REL_TOL)?;
    let mut prop = SplitStep::new(profile, init.params, *spatial, dt)?;
    let mut psi = init_gaussian_wavefunction(init, spatial)?;
    let t0 = psi.t;

    let mut samples = Vec::with_capacity(steps.len());
    let mut done = 0;
    for (state, &target) in effective.iter().zip(&steps) {
        if target > done {
            prop.advance(&mut psi, target - done)?;
            done = target;
        }
        psi.t = t0 + target as f64 * dt;
        let pde = prop.moments(&psi);
        let reference = WaveFunction::new(
            *spatial,
            (0..spatial.n())
                .map(|j| state.amplitude(spatial.x(j)))
                .collect(),
            state.t,
        )?;
        samples.push(ComparisonSample {
            t: state.t,
            effective: moments_of_gaussian(state),
            pde,
            fidelity: psi.fidelity(&reference),
            norm: psi.norm(),
            excess_kurtosis: psi.excess_kurtosis(),
        });
    }

    let c_eff0 = samples[0].effective.casimir();
    let c_pde0 = samples[0].pde.casimir();
    let norm0 = samples[0].norm;
    let mut report = DeviationReport {
        x1: 0.0,
        p1: 0.0,
        x2: 0.0,
        p2: 0.0,
        d: 0.0,
        casimir: 0.0,
        min_fidelity: 1.0,
        pde_casimir_drift: 0.0,
        effective_casimir_drift: 0.0,
        max_norm_drift: 0.0,
        max_excess_kurtosis: 0.0,
        steps: done,
        samples: Vec::new(),
    };
    for s in &samples {
        let (e, p) = (&s.effective, &s.pde);
        report.x1 = report.x1.max((e.x1 - p.x1).abs());
        report.p1 = report.p1.max((e.p1 - p.p1).abs());
        report.x2 = report.x2.max((e.x2 - p.x2).abs());
        report.p2 = report.p2.max((e.p2 - p.p2).abs());
        report.d = report.d.max((e.d - p.d).abs());
        report.casimir = report.casimir.max((e.casimir() - p.casimir()).abs());
        report.min_fidelity = report.min_fidelity.min(s.fidelity);
        report.pde_casimir_drift = report
            .pde_casimir_drift
            .max((p.casimir() - c_pde0).abs() / c_pde0.abs());
        report.effective_casimir_drift = report
            .effective_casimir_drift
            .max((e.casimir() - c_eff0).abs() / c_eff0.abs());
        report.max_norm_drift = report.max_norm_drift.max((s.norm - norm0).abs());
        report.max_excess_kurtosis = report.max_excess_kurtosis.max(s.excess_kurtosis.abs());
    }
    report.samples = samples;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural() -> PhysicalParams {
        PhysicalParams::natural()
    }

    fn packet(q: f64, p: f64, alpha: f64, beta: f64, params: PhysicalParams) -> GaussianState {
        GaussianState::new(0.0, q, p, alpha, beta, 0.0, params).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(SpatialGrid::new(0.0, 0.1, 128).is_err());
        assert!(SpatialGrid::new(0.0, 0.1, 300).is_err());
        assert!(SpatialGrid::new(0.0, 0.0, 256).is_err());
        let g = SpatialGrid::new(-1.0, 0.01, 256).unwrap();
        assert_eq!(g.x(0), -1.0);
        let k = g.wavenumbers();
        assert_eq!(k[0], 0.0);
        assert!(k[255] < 0.0);
    }

    #[test]
    fn peak_of_real_gaussian() {
        let s = packet(0.0, 0.0, 1.0, 0.0, natural());
        let g = SpatialGrid::centered(0.0, 12.0, 1024).unwrap();
        let psi = init_gaussian_wavefunction(&s, &g).unwrap();
        let expected = (2.0 * PI).sqrt().powf(-0.5);
        let peak = psi.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((peak - expected).abs() < 1e-4);
        assert!(psi.amplitudes.iter().all(|z| z.im == 0.0 && z.re >= 0.0));
        assert!((psi.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn initial_moments_match_closed_forms() {
        let params = PhysicalParams::new(1.3, 0.7).unwrap();
        let s = packet(0.5, 1.2, 0.8, -0.4, params);
        let g = SpatialGrid::centered(0.5, 12.0, 2048).unwrap();
        let psi = init_gaussian_wavefunction(&s, &g).unwrap();
        let m = moments(&psi, &params);
        let e = moments_of_gaussian(&s);
        assert!((m.p1 - 1.2).abs() < 1e-8);
        for (a, b) in [
            (m.x1, e.x1),
            (m.p1, e.p1),
            (m.x2, e.x2),
            (m.p2, e.p2),
            (m.d, e.d),
        ] {
            assert!((a - b).abs() < 1e-7, "{m:?} vs {e:?}");
        }
    }

    #[test]
    fn centred_moments_with_hbar_two() {
        let params = PhysicalParams::new(1.0, 2.0).unwrap();
        let s = packet(0.0, 0.0, 1.0, 0.0, params);
        let g = SpatialGrid::centered(0.0, 12.0, 1024).unwrap();
        let m = moments(&init_gaussian_wavefunction(&s, &g).unwrap(), &params);
        assert!(m.x1.abs() < 1e-14 && m.p1.abs() < 1e-14 && m.d.abs() < 1e-14);
        assert!((m.x2 - 1.0).abs() < 1e-10);
        assert!((m.p2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn too_wide_or_unresolved() {
        let s = packet(0.0, 0.0, 1.0, 0.0, natural());
        let narrow = SpatialGrid::centered(0.0, 5.0, 256).unwrap();
        assert!(matches!(
            init_gaussian_wavefunction(&s, &narrow),
            Err(Error::PacketTooWide(_))
        ));
        let coarse = SpatialGrid::centered(0.0, 60.0, 256).unwrap();
        assert!(matches!(
            init_gaussian_wavefunction(&s, &coarse),
            Err(Error::PacketTooWide(_))
        ));
    }

    #[test]
    fn coherent_state_returns_after_one_period() {
        let params = natural();
        let omega0 = 1.0;
        let s = GaussianState::coherent(0.0, omega0, params).unwrap();
        let s = GaussianState { q: 1.0, ..s };
        let prof = FrequencyProfile::constant(omega0).unwrap();
        let g = SpatialGrid::centered(0.0, 12.0, 512).unwrap();
        let psi0 = init_gaussian_wavefunction(&s, &g).unwrap();
        let n = 2000;
        let dt = 2.0 * PI / n as f64;
        let psi = split_step_propagate(psi0.clone(), &prof, dt, n, params).unwrap();
        assert!(psi.fidelity(&psi0) > 1.0 - 1e-6);
        assert!((psi.norm() - psi0.norm()).abs() < 1e-12);
    }

    #[test]
    fn free_spreading() {
        let params = natural();
        let a0 = 1.0;
        let s = packet(0.0, 0.0, a0, 0.0, params);
        let prof = FrequencyProfile::constant(0.0).unwrap();
        let g = SpatialGrid::centered(0.0, 40.0, 2048).unwrap();
        let psi = init_gaussian_wavefunction(&s, &g).unwrap();
        let t = 3.0;
        let psi = split_step_propagate(psi, &prof, 0.01, 300, params).unwrap();
        let m = moments(&psi, &params);
        let alpha = (m.x2 - m.x1 * m.x1).sqrt();
        let exact = a0 * (1.0 + (t / (2.0 * a0 * a0)).powi(2)).sqrt();
        assert!((alpha - exact).abs() < 1e-6, "{alpha} vs {exact}");
    }

    #[test]
    fn boundary_contamination_detected() {
        let params = natural();
        let s = packet(0.0, 0.0, 1.0, 0.0, params);
        let prof = FrequencyProfile::constant(0.0).unwrap();
        let g = SpatialGrid::centered(0.0, 12.0, 512).unwrap();
        let psi = init_gaussian_wavefunction(&s, &g).unwrap();
        let r = split_step_propagate(psi, &prof, 0.01, 2000, params);
        assert!(matches!(r, Err(Error::BoundaryContamination { .. })));
    }

    #[test]
    fn even_real_state_has_no_odd_moments() {
        let params = natural();
        let g = SpatialGrid::centered(0.0, 10.0, 512).unwrap();
        let amps = g
            .xs()
            .iter()
            .map(|&x| Complex64::new((-x * x).exp() * (1.0 + 0.3 * x * x), 0.0))
            .collect();
        let psi = WaveFunction::new(g, amps, 0.0).unwrap();
        let m = moments(&psi, &params);
        assert!(
            m.x1.abs() < 1e-14 && m.p1.abs() < 1e-14 && m.d.abs() < 1e-13,
            "{m:?}"
        );
    }

    #[test]
    fn misaligned_output_times_rejected() {
        let params = natural();
        let s = GaussianState::coherent(0.0, 1.0, params).unwrap();
        let prof = FrequencyProfile::constant(1.0).unwrap();
        let tg = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let g = SpatialGrid::centered(0.0, 12.0, 512).unwrap();
        assert!(compare_effective_vs_pde(&prof, &s, &tg, &g, 0.1).is_err());
    }

    #[test]
    fn auto_size_fits_the_run() {
        let params = natural();
        let s = packet(2.0, 0.5, 0.7, 0.1, params);
        let prof = FrequencyProfile::floquet(1.0, 0.2, 1.7).unwrap();
        let tg = TimeGrid::new(0.0, 10.0, 101).unwrap();
        let run = evolve_gaussian(&prof, &s, &tg, 1e-10).unwrap();
        let g = SpatialGrid::auto_size(&run, 256).unwrap();
        for r in &run {
            let psi = init_gaussian_wavefunction(r, &g).unwrap();
            assert!(psi.boundary_ratio() < BOUNDARY_RATIO);
        }
    }
}
