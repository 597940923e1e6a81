//! Adaptive Dormand–Prince 5(4) with first-same-as-last reuse.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub t_end: f64,
    pub sample_interval: f64,
    /// Pair separation below which integration aborts.
    pub min_separation: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        IntegratorSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: 1.0,
            min_step: 1e-14,
            t_end: 10.0,
            sample_interval: 0.1,
            min_separation: 1e-9,
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive"));
        }
        if !(self.min_step > 0.0 && self.min_step <= self.max_step) {
            return Err(Error::Domain("need 0 < min_step <= max_step"));
        }
        if !self.t_end.is_finite() {
            return Err(Error::Domain("t_end must be finite"));
        }
        Ok(())
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_sample_interval(mut self, dt: f64) -> Self {
        self.sample_interval = dt;
        self
    }

    pub fn with_tolerances(mut self, rel: f64, abs: f64) -> Self {
        self.rel_tol = rel;
        self.abs_tol = abs;
        self
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn err_norm(y: &[f64], y_new: &[f64], e: &[f64], s: &IntegratorSettings) -> f64 {
    let mut acc = 0.0;
    for i in 0..y.len() {
        let sc = s.abs_tol + s.rel_tol * libm::fabs(y[i]).max(libm::fabs(y_new[i]));
        let r = e[i] / sc;
        acc += r * r;
    }
    libm::sqrt(acc / y.len().max(1) as f64)
}

fn sample_times(t0: f64, s: &IntegratorSettings) -> Vec<f64> {
    let mut out = Vec::new();
    let span = s.t_end - t0;
    if span <= 0.0 {
        return out;
    }
    let dt = s.sample_interval;
    if dt > 0.0 && dt.is_finite() {
        let mut k = 1u64;
        loop {
            let tk = t0 + k as f64 * dt;
            if tk >= s.t_end - 1e-12 * span {
                break;
            }
            out.push(tk);
            k += 1;
        }
    }
    out.push(s.t_end);
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `settings.t_end`.
///
/// `sample` sees the state at `t0`, at every multiple of the sample
/// interval and at `t_end`; steps are shortened to land on those times.
pub fn dopri5<F, S>(
    t0: f64,
    y0: &[f64],
    settings: &IntegratorSettings,
    mut rhs: F,
    mut sample: S,
) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    S: FnMut(f64, &[f64]) -> Result<()>,
{
    settings.validate()?;
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut e = vec![0.0; n];

    rhs(t, &y, &mut k[0])?;
    sample(t, &y)?;
    let targets = sample_times(t0, settings);
    if targets.is_empty() {
        return Ok(());
    }
    let mut h = initial_step(t, &y, &k[0], settings, &mut rhs)?;

    for &target in &targets {
        while t < target {
            let mut step = h.min(settings.max_step);
            let clamped = t + step >= target - 1e-14 * libm::fabs(target).max(1.0);
            if clamped {
                step = target - t;
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for j in 0..s {
                        acc += A[s][j] * k[j][i];
                    }
                    tmp[i] = y[i] + step * acc;
                }
                let (_, tail) = k.split_at_mut(s);
                rhs(t + C[s] * step, &tmp, &mut tail[0])?;
                if s == 6 {
                    y_new.copy_from_slice(&tmp);
                }
            }
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..7 {
                    acc += E[j] * k[j][i];
                }
                e[i] = step * acc;
            }
            let err = err_norm(&y, &y_new, &e, settings);
            if err <= 1.0 {
                t = if clamped { target } else { t + step };
                y.copy_from_slice(&y_new);
                k.swap(0, 6);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0) };
                let proposal = step * fac;
                h = if clamped { h.max(proposal) } else { proposal };
            } else {
                let fac = if err.is_finite() { (0.9 * libm::pow(err, -0.2)).max(0.2) } else { 0.2 };
                h = step * fac;
                if h < settings.min_step {
                    return Err(Error::StepUnderflow { t, step: h });
                }
            }
        }
        sample(t, &y)?;
    }
    Ok(())
}

fn initial_step<F>(t: f64, y: &[f64], f0: &[f64], s: &IntegratorSettings, rhs: &mut F) -> Result<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    let scale = |i: usize| s.abs_tol + s.rel_tol * libm::fabs(y[i]);
    let rms = |v: &dyn Fn(usize) -> f64| {
        let mut a = 0.0;
        for i in 0..n {
            let r = v(i) / scale(i);
            a += r * r;
        }
        libm::sqrt(a / n.max(1) as f64)
    };
    let d0 = rms(&|i| y[i]);
    let d1 = rms(&|i| f0[i]);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<f64> = (0..n).map(|i| y[i] + h0 * f0[i]).collect();
    let mut f1 = vec![0.0; n];
    rhs(t + h0, &y1, &mut f1)?;
    let d2 = rms(&|i| f1[i] - f0[i]) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { libm::pow(0.01 / dm, 0.2) };
    Ok((100.0 * h0).min(h1).min(s.max_step).max(s.min_step))
}
