//! Adaptive Dormand–Prince 5(4) integrator with continuous output.
//!
//! Step sizes are chosen from the embedded error estimate alone; the
//! requested output times are filled in from the order-4 dense output of
//! whichever step covers them, so they never influence the step sequence.

use crate::error::{Error, Result};

/// An explicit first-order system y' = f(t, y) of fixed dimension.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;

    /// Per-component magnitude against which the local error is measured.
    /// The default uses the 1-norm of the whole state for every component.
    fn error_scale(&self, y: &[f64; N]) -> [f64; N] {
        [y.iter().map(|v| v.abs()).sum(); N]
    }

    /// Called on every accepted step; an error aborts the integration.
    fn check_step(&self, _t: f64, _y: &[f64; N]) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    /// Added to the error scale so that a vanishing state still has a finite tolerance.
    pub scale_floor: f64,
    pub max_steps: usize,
    pub safety: f64,
    pub fac_min: f64,
    pub fac_max: f64,
}

/// Ratio between the per-step error target and a requested global accuracy.
pub const LOCAL_TOLERANCE_FACTOR: f64 = 1.0 / 32.0;
/// Smallest per-step target; below it the error estimate is rounding noise.
pub const MIN_LOCAL_TOLERANCE: f64 = 1e-15;

impl IntegratorOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// Per-step target for a requested accuracy `rel_tol` over long runs.
    pub fn for_accuracy(rel_tol: f64) -> Self {
        Self::with_rel_tol((rel_tol * LOCAL_TOLERANCE_FACTOR).max(MIN_LOCAL_TOLERANCE))
    }
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            scale_floor: 1e-12,
            max_steps: 50_000_000,
            safety: 0.9,
            fac_min: 0.2,
            fac_max: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub times: Vec<f64>,
    pub values: Vec<[f64; N]>,
    pub stats: IntegrationStats,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn lin<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn check_finite<const N: usize>(t: f64, y: &[f64; N]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::IntegrationFailure {
            t,
            reason: "state became non-finite".into(),
        })
    }
}

/// Integrates from `(t0, y0)` and reports the state at each of `outputs`.
///
/// `outputs` must be non-decreasing and start at or after `t0`.
pub fn integrate<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    opts: &IntegratorOptions,
) -> Result<Solution<N>> {
    if !(opts.rel_tol > 0.0 && opts.rel_tol.is_finite()) {
        return Err(Error::invalid("rel_tol", "must be positive"));
    }
    if outputs.is_empty() {
        return Ok(Solution {
            times: vec![],
            values: vec![],
            stats: IntegrationStats::default(),
        });
    }
    if outputs[0] < t0 || outputs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(
            "output times",
            "must be sorted and not precede the initial time",
        ));
    }
    check_finite(t0, &y0)?;
    system.check_step(t0, &y0)?;

    let t_end = *outputs.last().unwrap();
    let mut stats = IntegrationStats::default();
    let mut values = Vec::with_capacity(outputs.len());
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] == t0 {
        values.push(y0);
        next_out += 1;
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = system.rhs(t, &y)?;
    stats.rhs_evals += 1;
    let mut h = initial_step(system, t, &y, &k1, t_end - t0, opts)?;
    stats.rhs_evals += 1;
    let mut last_rejected = false;

    while next_out < outputs.len() {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::IntegrationFailure {
                t,
                reason: format!("exceeded {} steps", opts.max_steps),
            });
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < h_min {
            return Err(Error::IntegrationFailure {
                t,
                reason: format!("step size underflow (h = {h:e})"),
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let k2 = system.rhs(t + C2 * h, &lin(&y, h, &[(A21, &k1)]))?;
        let k3 = system.rhs(t + C3 * h, &lin(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = system.rhs(
            t + C4 * h,
            &lin(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )?;
        let k5 = system.rhs(
            t + C5 * h,
            &lin(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let t_new = if last { t_end } else { t + h };
        let k6 = system.rhs(
            t_new,
            &lin(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )?;
        let y_new = lin(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = system.rhs(t_new, &y_new)?;
        stats.rhs_evals += 6;

        let sc_old = system.error_scale(&y);
        let sc_new = system.error_scale(&y_new);
        let mut err = 0.0f64;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.rel_tol * (sc_old[i].max(sc_new[i]) + opts.scale_floor);
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            // treat as a hard rejection and retry with a much smaller step
            stats.rejected += 1;
            h *= opts.fac_min;
            last_rejected = true;
            continue;
        }

        if err <= 1.0 {
            check_finite(t_new, &y_new)?;
            system.check_step(t_new, &y_new)?;
            stats.accepted += 1;

            if next_out < outputs.len() && outputs[next_out] <= t_new {
                let mut r5 = [0.0; N];
                let mut r2 = [0.0; N];
                let mut r3 = [0.0; N];
                let mut r4 = [0.0; N];
                for i in 0..N {
                    r2[i] = y_new[i] - y[i];
                    r3[i] = h * k1[i] - r2[i];
                    r4[i] = r2[i] - h * k7[i] - r3[i];
                    r5[i] = h
                        * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i]);
                }
                while next_out < outputs.len() && outputs[next_out] <= t_new {
                    let to = outputs[next_out];
                    if to == t_new {
                        values.push(y_new);
                    } else {
                        let th = (to - t) / h;
                        let th1 = 1.0 - th;
                        let mut v = [0.0; N];
                        for i in 0..N {
                            v[i] = y[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
                        }
                        values.push(v);
                    }
                    next_out += 1;
                }
            }

            t = t_new;
            y = y_new;
            k1 = k7;
            let mut fac = opts.safety * err.max(1e-10).powf(-0.2);
            fac = fac.clamp(opts.fac_min, opts.fac_max);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac;
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let fac = (opts.safety * err.powf(-0.2)).max(opts.fac_min);
            h *= fac;
            last_rejected = true;
        }
    }

    Ok(Solution {
        times: outputs.to_vec(),
        values,
        stats,
    })
}

fn initial_step<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    span: f64,
    opts: &IntegratorOptions,
) -> Result<f64> {
    let sc = system.error_scale(y);
    let norm = |v: &[f64; N]| -> f64 {
        (0..N)
            .map(|i| {
                let s = opts.rel_tol * (sc[i] + opts.scale_floor);
                (v[i] / s).powi(2)
            })
            .sum::<f64>()
            .sqrt()
            / (N as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
    .min(span);
    let y1 = lin(y, h0, &[(1.0, f0)]);
    let f1 = system.rhs(t + h0, &y1)?;
    let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(span))
}
