//! Algebraic conditions for rigidly rotating configurations and their
//! solvers.
//!
//! Config I: charges 1 and 2 circle charge 3 (which is at rest or on its
//! own Larmor circle). Config II: all charges on one rotating line on the
//! same side of the centre, `v₁ < v₂ < v₃`. Config III (case a): charge 3
//! sits on the opposite side. Velocities are tangential speeds; radii are
//! `v_i/ω`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::model::SystemSpec;
use crate::{Error, Result};

mod config_i;
mod config_ii;
mod initial;
mod nbody;
mod p6;

pub use config_i::*;
pub use config_ii::*;
pub use initial::build_initial_state;
pub use nbody::*;
pub use p6::*;

/// Certification threshold on [`ConfigSolution::residual_norm`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfigTag {
    IV3Zero,
    IV3Nonzero,
    II,
    IIIa,
    NbodyII,
}

impl ConfigTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConfigTag::IV3Zero => "I-v3zero",
            ConfigTag::IV3Nonzero => "I-v3nonzero",
            ConfigTag::II => "II",
            ConfigTag::IIIa => "III-a",
            ConfigTag::NbodyII => "nbody-II",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::IV3Zero, Self::IV3Nonzero, Self::II, Self::IIIa, Self::NbodyII]
            .into_iter()
            .find(|t| t.as_str() == s)
    }
}

impl core::fmt::Display for ConfigTag {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A solved parameter set together with its residual certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigSolution {
    pub config: ConfigTag,
    /// `"+"`/`"-"` for two-root formulas, `"rK"` for the K-th grid root,
    /// `":ccw"` appended when the motion is counterclockwise.
    pub branch: String,
    pub v: Vec<f64>,
    pub omega: f64,
    /// Config I only.
    pub omega3: Option<f64>,
    pub b: f64,
    /// Largest per-equation `|Σ terms| / Σ |terms|`.
    pub residual_norm: f64,
    /// `Σ e_i v_i / Σ m_i v_i` (Config II family).
    pub kappa: Option<f64>,
}

impl ConfigSolution {
    /// The system with the field set to the solved `B`.
    pub fn system(&self, spec: &SystemSpec) -> SystemSpec {
        spec.with_field(self.b)
    }

    pub fn is_ccw(&self) -> bool {
        self.branch.ends_with(":ccw")
    }

    /// Longest rotation period involved.
    pub fn period(&self) -> f64 {
        let two_pi = 2.0 * core::f64::consts::PI;
        let mut p = two_pi / self.omega.abs();
        if let Some(w3) = self.omega3 {
            if w3 != 0.0 && self.v.get(2).is_some_and(|v| *v != 0.0) {
                p = p.max(two_pi / w3.abs());
            }
        }
        p
    }

    pub fn certified(&self) -> bool {
        self.residual_norm < RESIDUAL_TOLERANCE
    }
}

/// Outer sweep over the free velocity (`v₃` for n=3, `v_n` otherwise) with
/// `v₂ = 1` fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSettings {
    pub v_min: f64,
    pub v_max: f64,
    pub points: usize,
    /// Inner `v₁` scan density.
    pub v1_points_per_decade: usize,
}

impl GridSettings {
    pub fn config_ii() -> Self {
        GridSettings { v_min: 1.02, v_max: 20.0, points: 40, v1_points_per_decade: 40 }
    }

    pub fn config_iii() -> Self {
        GridSettings { v_min: 0.02, v_max: 0.98, points: 40, v1_points_per_decade: 40 }
    }

    /// Log-spaced sweep values.
    pub fn values(&self) -> Vec<f64> {
        if self.points <= 1 || self.v_max <= self.v_min {
            return alloc::vec![self.v_min];
        }
        let (a, b) = (libm::log(self.v_min), libm::log(self.v_max));
        let last = (self.points - 1) as f64;
        (0..self.points).map(|k| libm::exp(a + (b - a) * k as f64 / last)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_min > 0.0 && self.v_max >= self.v_min && self.v_max.is_finite()) || self.points == 0 {
            return Err(Error::Domain("grid bounds must satisfy 0 < min <= max"));
        }
        if self.v1_points_per_decade == 0 {
            return Err(Error::Domain("v1 scan density must be positive"));
        }
        Ok(())
    }
}

/// Sorts by (last velocity, branch, v₁), drops duplicates, and turns an
/// empty list into `NoSolution`.
pub fn merge_solutions(mut sols: Vec<ConfigSolution>, why: &'static str) -> Result<Vec<ConfigSolution>> {
    sols.sort_by(|a, b| {
        let ka = a.v.last().copied().unwrap_or(0.0);
        let kb = b.v.last().copied().unwrap_or(0.0);
        ka.total_cmp(&kb)
            .then_with(|| a.branch.cmp(&b.branch))
            .then_with(|| a.v[0].total_cmp(&b.v[0]))
    });
    sols.dedup_by(|a, b| {
        a.config == b.config
            && a.branch == b.branch
            && a.v.iter().zip(&b.v).all(|(x, y)| (x - y).abs() <= 1e-9 * x.abs().max(1.0))
    });
    if sols.is_empty() {
        Err(Error::NoSolution(why))
    } else {
        Ok(sols)
    }
}

/// Largest per-equation ratio `|Σ t| / Σ |t|`; non-finite input gives infinity.
pub(crate) fn scaled_residual(eqs: &[&[f64]]) -> f64 {
    let mut worst = 0.0f64;
    for terms in eqs {
        let r: f64 = terms.iter().sum();
        let s: f64 = terms.iter().map(|t| t.abs()).sum();
        let q = if s == 0.0 { libm::fabs(r) } else { libm::fabs(r) / s };
        if !q.is_finite() {
            return f64::INFINITY;
        }
        worst = worst.max(q);
    }
    worst
}

/// `lo, lo·10^(1/k), …` strictly below `hi`, then `hi` itself.
pub(crate) fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let step = 1.0 / per_decade as f64;
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let x = lo * libm::pow(10.0, k as f64 * step);
        if x >= hi * (1.0 - 1e-12) {
            break;
        }
        out.push(x);
        k += 1;
    }
    out.push(hi);
    out
}

/// Bisection on every sign change of `f` along `grid`, then Newton steps
/// with `df` kept inside the bracket.
pub(crate) fn bracketed_roots<F, D>(f: F, df: D, grid: &[f64]) -> Vec<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut roots = Vec::new();
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    for k in 0..grid.len().saturating_sub(1) {
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let (mut fa, fb) = (vals[k], vals[k + 1]);
        if !(fa.is_finite() && fb.is_finite()) {
            continue;
        }
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb > 0.0 || fb == 0.0 && k + 2 < grid.len() {
            continue;
        }
        if fb == 0.0 {
            roots.push(b);
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m);
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        let (lo, hi) = (grid[k], grid[k + 1]);
        let mut x = 0.5 * (a + b);
        for _ in 0..4 {
            let d = df(x);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let nx = x - f(x) / d;
            if !(nx > lo && nx < hi) || (nx - x).abs() <= 1e-15 * x.abs() {
                break;
            }
            x = nx;
        }
        roots.push(x);
    }
    roots
}

pub(crate) fn require_three(spec: &SystemSpec) -> Result<()> {
    if spec.len() == 3 {
        Ok(())
    } else {
        Err(Error::Domain("this configuration needs exactly three particles"))
    }
}

pub(crate) fn require_charged(spec: &SystemSpec) -> Result<()> {
    if spec.particles.iter().any(|p| p.charge == 0.0) {
        Err(Error::InvalidSpec("configuration solvers need every charge nonzero"))
    } else {
        Ok(())
    }
}
