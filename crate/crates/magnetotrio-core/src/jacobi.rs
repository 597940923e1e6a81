//! Jacobi variables for three charges, coupling and effective charges,
//! the canonical shift that absorbs `A(R)`, the transformed Hamiltonian
//! and the Jacobi-frame equations of motion.
//!
//! Conventions: `R = Σ μ_i ρ_i`, `τ₁ = ρ₂ − ρ₁`, `τ₂ = ρ₃ − (ν₁ρ₁ + ν₂ρ₂)`
//! with `μ_i = m_i/M`, `ν_i = m_i/(m₁+m₂)`. This `τ₂` is the one conjugate to
//! `p_τ₂ = (μ₁+μ₂)p₃ − μ₃(p₁+p₂)` for any masses.

use alloc::vec::Vec;

use crate::dynamics::{IntegratorSettings, Trajectory};
use crate::model::{vector_potential, PhaseState, SystemSpec};
use crate::ode::dopri5;
use crate::scalar::{gradient, Dual, Real};
use crate::vector::{cross_with_b, PlanarVector};
use crate::{linalg, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChargeCoefficients {
    pub ec1: f64,
    pub ec2: f64,
    pub e1eff: f64,
    pub e2eff: f64,
    pub mu: [f64; 3],
    pub nu: [f64; 2],
    pub total_mass: f64,
    /// `m̃₁ = m₁m₂/(m₁+m₂)`.
    pub reduced1: f64,
    /// `m̃₂ = (m₁+m₂)m₃/M`.
    pub reduced2: f64,
    pub total_charge: f64,
    pub alpha: Option<f64>,
}

fn require_three(spec: &SystemSpec) -> Result<()> {
    if spec.len() == 3 {
        Ok(())
    } else {
        Err(Error::Domain("Jacobi variables need exactly three particles"))
    }
}

pub fn charge_coefficients(spec: &SystemSpec) -> Result<ChargeCoefficients> {
    require_three(spec)?;
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let m = m1 + m2 + m3;
    let m12 = m1 + m2;
    let mu = [m1 / m, m2 / m, m3 / m];
    let nu = [m1 / m12, m2 / m12];
    Ok(ChargeCoefficients {
        ec1: m1 * m2 / m12 * (e1 / m1 - e2 / m2),
        ec2: m12 * m3 / m * ((e1 + e2) / m12 - e3 / m3),
        e1eff: e2 * nu[0] * nu[0] + e1 * nu[1] * nu[1],
        e2eff: e3 * (mu[0] + mu[1]) * (mu[0] + mu[1]) + (e1 + e2) * mu[2] * mu[2],
        mu,
        nu,
        total_mass: m,
        reduced1: m1 * m2 / m12,
        reduced2: m12 * m3 / m,
        total_charge: e1 + e2 + e3,
        alpha: spec.common_larmor_ratio(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    PreCc,
    PostCc,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiState {
    pub t: f64,
    pub r: PlanarVector,
    pub tau1: PlanarVector,
    pub tau2: PlanarVector,
    pub p: PlanarVector,
    pub p_tau1: PlanarVector,
    pub p_tau2: PlanarVector,
    pub frame: Frame,
}

fn positions_to_jacobi(c: &ChargeCoefficients, q: &[PlanarVector]) -> [PlanarVector; 3] {
    let r = q[0] * c.mu[0] + q[1] * c.mu[1] + q[2] * c.mu[2];
    let tau1 = q[1] - q[0];
    let tau2 = q[2] - (q[0] * c.nu[0] + q[1] * c.nu[1]);
    [r, tau1, tau2]
}

fn positions_from_jacobi(c: &ChargeCoefficients, r: PlanarVector, t1: PlanarVector, t2: PlanarVector) -> [PlanarVector; 3] {
    [
        r - t1 * c.nu[1] - t2 * c.mu[2],
        r + t1 * c.nu[0] - t2 * c.mu[2],
        r + t2 * (c.mu[0] + c.mu[1]),
    ]
}

/// Pre-CC Jacobi state of a Cartesian state.
pub fn to_jacobi(spec: &SystemSpec, state: &PhaseState) -> Result<JacobiState> {
    let c = charge_coefficients(spec)?;
    let p = state.canonical_momenta(spec);
    let [r, tau1, tau2] = positions_to_jacobi(&c, &state.positions);
    Ok(JacobiState {
        t: state.t,
        r,
        tau1,
        tau2,
        p: p[0] + p[1] + p[2],
        p_tau1: p[1] * c.nu[0] - p[0] * c.nu[1],
        p_tau2: p[2] * (c.mu[0] + c.mu[1]) - (p[0] + p[1]) * c.mu[2],
        frame: Frame::PreCc,
    })
}

/// Inverse of [`to_jacobi`]; post-CC input is shifted back first.
pub fn from_jacobi(spec: &SystemSpec, js: &JacobiState) -> Result<PhaseState> {
    let c = charge_coefficients(spec)?;
    let js = if js.frame == Frame::PostCc { invert_cc(spec, js)? } else { *js };
    let q = positions_from_jacobi(&c, js.r, js.tau1, js.tau2);
    let p = [
        js.p * c.mu[0] - js.p_tau1 - js.p_tau2 * c.nu[0],
        js.p * c.mu[1] + js.p_tau1 - js.p_tau2 * c.nu[1],
        js.p * c.mu[2] + js.p_tau2,
    ];
    Ok(PhaseState::from_canonical(spec, js.t, q.to_vec(), &p))
}

/// `P' = P − e_c1 A(τ₁) − e_c2 A(τ₂)`, `p'_τi = p_τi + e_ci A(R)`.
pub fn apply_cc(spec: &SystemSpec, js: &JacobiState) -> Result<JacobiState> {
    if js.frame != Frame::PreCc {
        return Err(Error::Domain("state is already in the shifted frame"));
    }
    shift(spec, js, 1.0, Frame::PostCc)
}

pub fn invert_cc(spec: &SystemSpec, js: &JacobiState) -> Result<JacobiState> {
    if js.frame != Frame::PostCc {
        return Err(Error::Domain("state is not in the shifted frame"));
    }
    shift(spec, js, -1.0, Frame::PreCc)
}

fn shift(spec: &SystemSpec, js: &JacobiState, s: f64, frame: Frame) -> Result<JacobiState> {
    let c = charge_coefficients(spec)?;
    let a = |v| vector_potential(v, spec.b);
    Ok(JacobiState {
        p: js.p - (a(js.tau1) * c.ec1 + a(js.tau2) * c.ec2) * s,
        p_tau1: js.p_tau1 + a(js.r) * (c.ec1 * s),
        p_tau2: js.p_tau2 + a(js.r) * (c.ec2 * s),
        frame,
        ..*js
    })
}

/// Coefficients of the shifted-frame Hamiltonian.
///
/// The two `A²` terms and the two `A·p` terms come from expanding
/// `|p_τ1 − e_1eff A₁ − μ₃e_c1 A₂|²/2m̃₁ + |p_τ2 − e_2eff A₂ − μ₃e_c1 A₁|²/2m̃₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HcCoefficients {
    pub cc: ChargeCoefficients,
    pub b: f64,
    /// coefficient of `A(τ₁)²`
    pub c11: f64,
    /// coefficient of `A(τ₂)²`
    pub c22: f64,
    /// coefficient of `A(τ₁)·p_τ₂`
    pub c1: f64,
    /// coefficient of `A(τ₂)·p_τ₁`
    pub c2: f64,
    /// coefficient of `A(τ₁)·A(τ₂)`
    pub c12: f64,
    pub e12: f64,
    pub e13: f64,
    pub e23: f64,
}

impl HcCoefficients {
    pub fn new(spec: &SystemSpec) -> Result<Self> {
        let cc = charge_coefficients(spec)?;
        let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
        let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
        let [mu1, mu2, mu3] = cc.mu;
        let [nu1, nu2] = cc.nu;
        let m12 = m1 + m2;
        let ec1 = cc.ec1;
        Ok(HcCoefficients {
            cc,
            b: spec.b,
            c11: ec1 * ec1 * mu3 / (2.0 * m12),
            c22: ec1 * ec1 * mu3 * mu3 / (2.0 * nu1 * nu2 * m12),
            c1: -ec1 / m12,
            c2: -ec1 * m3 * m12 / (m1 * m2 * cc.total_mass),
            c12: ec1 / (m1 * m2)
                * (e3 * mu1 * mu2 * m12 + e2 * mu1 * mu3 * (m1 + m3) + e1 * mu2 * mu3 * (m2 + m3)),
            e12: e1 * e2,
            e13: e1 * e3,
            e23: e2 * e3,
        })
    }

    /// Hamiltonian at `z = [R, τ₁, τ₂, P, p_τ₁, p_τ₂]` (x, y pairs).
    pub fn eval<T: Real>(&self, z: &[T]) -> T {
        let k = |v: f64| T::cst(v);
        let v2 = |i: usize| (z[2 * i], z[2 * i + 1]);
        let (r, t1, t2, p, q1, q2) = (v2(0), v2(1), v2(2), v2(3), v2(4), v2(5));
        let half_b = k(0.5 * self.b);
        let a = |v: (T, T)| (-(half_b * v.1), half_b * v.0);
        let lin = |u: (T, T), s: f64, w: (T, T)| (u.0 + k(s) * w.0, u.1 + k(s) * w.1);
        let dot = |u: (T, T), w: (T, T)| u.0 * w.0 + u.1 * w.1;
        let c = &self.cc;
        let (ar, a1, a2) = (a(r), a(t1), a(t2));

        let pcm = lin(lin(lin(p, -c.total_charge, ar), 2.0 * c.ec1, a1), 2.0 * c.ec2, a2);
        let pi1 = lin(q1, -c.e1eff, a1);
        let pi2 = lin(q2, -c.e2eff, a2);
        let kinetic = dot(pcm, pcm) / k(2.0 * c.total_mass)
            + dot(pi1, pi1) / k(2.0 * c.reduced1)
            + dot(pi2, pi2) / k(2.0 * c.reduced2);
        let mixed = k(self.c11) * dot(a1, a1)
            + k(self.c22) * dot(a2, a2)
            + k(self.c1) * dot(a1, q2)
            + k(self.c2) * dot(a2, q1)
            + k(self.c12) * dot(a1, a2);

        let inv = |u: (T, T)| T::cst(1.0) / dot(u, u).sqrt();
        let d13 = lin(t2, c.nu[1], t1);
        let d23 = lin(t2, -c.nu[0], t1);
        let coulomb = k(self.e12) * inv(t1) + k(self.e13) * inv(d13) + k(self.e23) * inv(d23);
        kinetic + mixed + coulomb
    }

    fn check_separation(&self, z: &[f64], min_sep: f64) -> Result<()> {
        let t1 = PlanarVector::new(z[2], z[3]);
        let t2 = PlanarVector::new(z[4], z[5]);
        let pairs = [
            (0, 1, t1),
            (0, 2, t2 + t1 * self.cc.nu[1]),
            (1, 2, t2 - t1 * self.cc.nu[0]),
        ];
        for (i, j, d) in pairs {
            let s = d.norm();
            if !(s > min_sep) {
                return Err(Error::Collision { i, j, separation: s });
            }
        }
        Ok(())
    }

    /// `(∂H/∂z)` by forward-mode differentiation.
    fn grad(&self, z: &[f64], min_sep: f64) -> Result<[f64; 12]> {
        self.check_separation(z, min_sep)?;
        let mut g = [0.0; 12];
        gradient(z, |w: &[Dual]| self.eval(w), &mut g);
        Ok(g)
    }

    /// Hamilton's equations: `ż = (∂H/∂p, −∂H/∂q)`.
    fn flow(&self, z: &[f64], min_sep: f64, out: &mut [f64]) -> Result<()> {
        let g = self.grad(z, min_sep)?;
        for k in 0..6 {
            out[k] = g[6 + k];
            out[6 + k] = -g[k];
        }
        Ok(())
    }
}

fn pack_js(js: &JacobiState) -> [f64; 12] {
    let v = [js.r, js.tau1, js.tau2, js.p, js.p_tau1, js.p_tau2];
    let mut z = [0.0; 12];
    for (k, w) in v.iter().enumerate() {
        z[2 * k] = w.x;
        z[2 * k + 1] = w.y;
    }
    z
}

fn unpack_js(t: f64, z: &[f64], frame: Frame) -> JacobiState {
    let v = |k: usize| PlanarVector::new(z[2 * k], z[2 * k + 1]);
    JacobiState { t, r: v(0), tau1: v(1), tau2: v(2), p: v(3), p_tau1: v(4), p_tau2: v(5), frame }
}

/// Shifted-frame Hamiltonian evaluated term by term.
pub fn hamiltonian_jacobi(spec: &SystemSpec, js: &JacobiState) -> Result<f64> {
    if js.frame != Frame::PostCc {
        return Err(Error::Domain("expected a shifted-frame state"));
    }
    let hc = HcCoefficients::new(spec)?;
    let z = pack_js(js);
    hc.check_separation(&z, 0.0)?;
    Ok(hc.eval(&z))
}

/// Positions and velocities in Jacobi form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiKinematics {
    pub t: f64,
    pub r: PlanarVector,
    pub tau1: PlanarVector,
    pub tau2: PlanarVector,
    pub r_dot: PlanarVector,
    pub tau1_dot: PlanarVector,
    pub tau2_dot: PlanarVector,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiAccelerations {
    pub r: PlanarVector,
    pub tau1: PlanarVector,
    pub tau2: PlanarVector,
}

pub fn to_jacobi_kinematics(spec: &SystemSpec, state: &PhaseState) -> Result<JacobiKinematics> {
    let c = charge_coefficients(spec)?;
    let [r, tau1, tau2] = positions_to_jacobi(&c, &state.positions);
    let [r_dot, tau1_dot, tau2_dot] = positions_to_jacobi(&c, &state.velocities);
    Ok(JacobiKinematics { t: state.t, r, tau1, tau2, r_dot, tau1_dot, tau2_dot })
}

pub fn from_jacobi_kinematics(spec: &SystemSpec, k: &JacobiKinematics) -> Result<PhaseState> {
    let c = charge_coefficients(spec)?;
    let q = positions_from_jacobi(&c, k.r, k.tau1, k.tau2);
    let v = positions_from_jacobi(&c, k.r_dot, k.tau1_dot, k.tau2_dot);
    Ok(PhaseState::new(k.t, q.to_vec(), v.to_vec()))
}

/// `K = M Ṙ − Q R×B + e_c1 τ₁×B + e_c2 τ₂×B`.
pub fn pseudomomentum_jacobi(spec: &SystemSpec, k: &JacobiKinematics) -> Result<PlanarVector> {
    let c = charge_coefficients(spec)?;
    let x = |v: PlanarVector| cross_with_b(v, spec.b);
    Ok(k.r_dot * c.total_mass - x(k.r) * c.total_charge + x(k.tau1) * c.ec1 + x(k.tau2) * c.ec2)
}

/// Which form of the Jacobi-frame equations to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EomMode {
    /// The electric-field form with its `B²/2M` coefficients taken at face value.
    Literal,
    /// Hamilton's equations of the shifted-frame Hamiltonian, differentiated
    /// automatically.
    Derived,
}

fn coulomb_fields(spec: &SystemSpec, c: &ChargeCoefficients, t1: PlanarVector, t2: PlanarVector) -> Result<(PlanarVector, PlanarVector)> {
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let [nu1, nu2] = c.nu;
    let f = |d: PlanarVector, i: usize, j: usize| -> Result<PlanarVector> {
        let r = d.norm();
        if !(r > 0.0) {
            return Err(Error::Collision { i, j, separation: r });
        }
        Ok(d / (r * r * r))
    };
    let s12 = f(t1, 0, 1)?;
    let s23 = f(t2 - t1 * nu1, 1, 2)?;
    let s13 = f(t2 + t1 * nu2, 0, 2)?;
    let v1 = s12 * (e1 * e2) - s23 * (nu1 * e2 * e3) + s13 * (nu2 * e1 * e3);
    let v2 = s23 * (e2 * e3) + s13 * (e1 * e3);
    Ok((v1, v2))
}

fn rhs_literal(spec: &SystemSpec, k: &JacobiKinematics) -> Result<JacobiAccelerations> {
    let c = charge_coefficients(spec)?;
    let b = spec.b;
    let x = |v: PlanarVector| cross_with_b(v, b);
    let m = c.total_mass;
    let b2m = b * b / (2.0 * m);
    let kk = pseudomomentum_jacobi(spec, k)?;
    let (v1, v2) = coulomb_fields(spec, &c, k.tau1, k.tau2)?;
    let e_r = x(k.tau1_dot) * c.ec1 + x(k.tau2_dot) * c.ec2;
    let e_1 = k.r * (c.ec1 * c.total_charge * b2m) - x(kk) * (c.ec1 / m) - k.tau2 * (c.ec1 * c.ec2 * b2m)
        + x(k.tau2_dot) * (c.mu[2] * c.ec1);
    let e_2 = k.r * (c.ec2 * c.total_charge * b2m) - x(kk) * (c.ec2 / m) - k.tau1 * (c.ec1 * c.ec2 * b2m)
        + x(k.tau1_dot) * (c.mu[2] * c.ec1);
    Ok(JacobiAccelerations {
        r: (x(k.r_dot) * c.total_charge - e_r) / m,
        tau1: (x(k.tau1_dot) * c.e1eff - k.tau1 * (c.ec1 * c.ec1 * b2m) + e_1 + v1) / c.reduced1,
        tau2: (x(k.tau2_dot) * c.e2eff - k.tau2 * (c.ec2 * c.ec2 * b2m) + e_2 + v2) / c.reduced2,
    })
}

fn velocity_map(hc: &HcCoefficients, z: &[f64]) -> Result<[f64; 6]> {
    let g = hc.grad(z, 0.0)?;
    let mut v = [0.0; 6];
    v.copy_from_slice(&g[6..]);
    Ok(v)
}

fn rhs_derived(spec: &SystemSpec, k: &JacobiKinematics) -> Result<JacobiAccelerations> {
    let hc = HcCoefficients::new(spec)?;
    let q = [k.r, k.tau1, k.tau2];
    let qdot = [k.r_dot.x, k.r_dot.y, k.tau1_dot.x, k.tau1_dot.y, k.tau2_dot.x, k.tau2_dot.y];
    let mut z = [0.0; 12];
    for i in 0..3 {
        z[2 * i] = q[i].x;
        z[2 * i + 1] = q[i].y;
    }
    // ∂H/∂p is affine in p: recover the momenta from the velocities
    let v0 = velocity_map(&hc, &z)?;
    let mut w = [0.0; 36];
    for col in 0..6 {
        let mut zc = z;
        zc[6 + col] = 1.0;
        let vc = velocity_map(&hc, &zc)?;
        for row in 0..6 {
            w[row * 6 + col] = vc[row] - v0[row];
        }
    }
    let mut p: Vec<f64> = (0..6).map(|i| qdot[i] - v0[i]).collect();
    linalg::solve(&mut w, &mut p)?;
    z[6..].copy_from_slice(&p);
    let mut zdot = [0.0; 12];
    hc.flow(&z, 0.0, &mut zdot)?;
    // ∂H/∂p is also linear in q, so a symmetric difference along the flow is exact
    let mut zp = z;
    let mut zm = z;
    for i in 0..12 {
        zp[i] += zdot[i];
        zm[i] -= zdot[i];
    }
    let (vp, vm) = (velocity_map(&hc, &zp)?, velocity_map(&hc, &zm)?);
    let acc = |i: usize| PlanarVector::new(0.5 * (vp[2 * i] - vm[2 * i]), 0.5 * (vp[2 * i + 1] - vm[2 * i + 1]));
    Ok(JacobiAccelerations { r: acc(0), tau1: acc(1), tau2: acc(2) })
}

/// Second time derivatives of `(R, τ₁, τ₂)`.
pub fn rhs_jacobi(spec: &SystemSpec, k: &JacobiKinematics, mode: EomMode) -> Result<JacobiAccelerations> {
    match mode {
        EomMode::Literal => rhs_literal(spec, k),
        EomMode::Derived => rhs_derived(spec, k),
    }
}

/// Integrates in the Jacobi frame and maps every sample back to Cartesian
/// coordinates.
pub fn integrate_jacobi(
    spec: &SystemSpec,
    state0: &PhaseState,
    settings: &IntegratorSettings,
    mode: EomMode,
) -> Result<Trajectory> {
    require_three(spec)?;
    crate::model::check_separation(&state0.positions, settings.min_separation)?;
    let mut samples = Vec::new();
    match mode {
        EomMode::Derived => {
            let hc = HcCoefficients::new(spec)?;
            let js = apply_cc(spec, &to_jacobi(spec, state0)?)?;
            dopri5(
                state0.t,
                &pack_js(&js),
                settings,
                |_, z, dz| hc.flow(z, settings.min_separation, dz),
                |t, z| {
                    samples.push(from_jacobi(spec, &unpack_js(t, z, Frame::PostCc))?);
                    Ok(())
                },
            )?;
        }
        EomMode::Literal => {
            let k0 = to_jacobi_kinematics(spec, state0)?;
            let v = [k0.r, k0.tau1, k0.tau2, k0.r_dot, k0.tau1_dot, k0.tau2_dot];
            let mut y = [0.0; 12];
            for (i, w) in v.iter().enumerate() {
                y[2 * i] = w.x;
                y[2 * i + 1] = w.y;
            }
            let kin = |t: f64, y: &[f64]| {
                let g = |i: usize| PlanarVector::new(y[2 * i], y[2 * i + 1]);
                JacobiKinematics { t, r: g(0), tau1: g(1), tau2: g(2), r_dot: g(3), tau1_dot: g(4), tau2_dot: g(5) }
            };
            let hc = HcCoefficients::new(spec)?;
            dopri5(
                state0.t,
                &y,
                settings,
                |t, y, dy| {
                    hc.check_separation(&[0.0, 0.0, y[2], y[3], y[4], y[5]], settings.min_separation)?;
                    let a = rhs_literal(spec, &kin(t, y))?;
                    dy[..6].copy_from_slice(&y[6..]);
                    let acc = [a.r, a.tau1, a.tau2];
                    for i in 0..3 {
                        dy[6 + 2 * i] = acc[i].x;
                        dy[6 + 2 * i + 1] = acc[i].y;
                    }
                    Ok(())
                },
                |t, y| {
                    samples.push(from_jacobi_kinematics(spec, &kin(t, y))?);
                    Ok(())
                },
            )?;
        }
    }
    Ok(Trajectory { samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::acceleration;
    use crate::invariants::{hamiltonian, pseudomomentum};
    use alloc::vec;

    fn pv(x: f64, y: f64) -> PlanarVector {
        PlanarVector::new(x, y)
    }

    fn sample_state() -> (SystemSpec, PhaseState) {
        let spec = SystemSpec::from_slices(&[1.0, -2.0, 0.5], &[1.0, 3.0, 0.7], -1.3).unwrap();
        let st = PhaseState::new(
            0.0,
            vec![pv(0.1, 0.2), pv(-1.0, 0.4), pv(0.7, -0.9)],
            vec![pv(0.3, -0.2), pv(0.0, 1.1), pv(-0.5, 0.25)],
        );
        (spec, st)
    }

    #[test]
    fn coefficient_examples() {
        let s = SystemSpec::from_slices(&[-1.0; 3], &[1.0; 3], 1.0).unwrap();
        let c = charge_coefficients(&s).unwrap();
        assert_eq!((c.ec1, c.ec2), (0.0, 0.0));
        assert!((c.e1eff + 0.5).abs() < 1e-15);
        assert!((c.e2eff + 2.0 / 3.0).abs() < 1e-15);

        let s = SystemSpec::from_slices(&[2.0, -1.0, -1.0], &[4.0, 1.0, 1.0], 1.0).unwrap();
        assert!((charge_coefficients(&s).unwrap().ec1 - 1.2).abs() < 1e-15);

        let s = SystemSpec::from_slices(&[1.0, 2.0, 1.0], &[1.0, 2.0, 3.0], 1.0).unwrap();
        let c = charge_coefficients(&s).unwrap();
        assert_eq!(c.ec1, 0.0);
        assert!(c.ec2.abs() > 0.1);
        assert!((c.mu.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_mass_example() {
        let s = SystemSpec::from_slices(&[1.0; 3], &[1.0; 3], 1.0).unwrap();
        let st = PhaseState::new(0.0, vec![pv(-1.0, 0.0), pv(1.0, 0.0), pv(0.0, 0.0)], vec![pv(0.0, 0.0); 3]);
        let js = to_jacobi(&s, &st).unwrap();
        assert_eq!((js.r, js.tau1, js.tau2), (pv(0.0, 0.0), pv(2.0, 0.0), pv(0.0, 0.0)));
    }

    #[test]
    fn cc_is_identity_without_coupling_or_field() {
        let (spec, st) = sample_state();
        let flat = spec.with_field(0.0);
        let js = to_jacobi(&flat, &st).unwrap();
        let post = apply_cc(&flat, &js).unwrap();
        assert_eq!((post.p, post.p_tau1, post.p_tau2), (js.p, js.p_tau1, js.p_tau2));
        let el = SystemSpec::from_slices(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 2.0).unwrap();
        let js = to_jacobi(&el, &st).unwrap();
        let post = apply_cc(&el, &js).unwrap();
        assert_eq!((post.p, post.p_tau1, post.p_tau2), (js.p, js.p_tau1, js.p_tau2));
    }

    #[test]
    fn shifted_hamiltonian_matches_cartesian() {
        let (spec, st) = sample_state();
        let js = apply_cc(&spec, &to_jacobi(&spec, &st).unwrap()).unwrap();
        let h = hamiltonian(&spec, &st).unwrap();
        let hj = hamiltonian_jacobi(&spec, &js).unwrap();
        assert!((h - hj).abs() < 1e-12 * h.abs().max(1.0), "{h} vs {hj}");
    }

    #[test]
    fn jacobi_pseudomomentum_matches() {
        let (spec, st) = sample_state();
        let k = to_jacobi_kinematics(&spec, &st).unwrap();
        let kj = pseudomomentum_jacobi(&spec, &k).unwrap();
        assert!((kj - pseudomomentum(&spec, &st)).norm() < 1e-13);
        let js = apply_cc(&spec, &to_jacobi(&spec, &st).unwrap()).unwrap();
        let kp = js.p + vector_potential(js.r, spec.b) * spec.total_charge();
        assert!((kp - kj).norm() < 1e-13);
    }

    fn cartesian_jacobi_acc(spec: &SystemSpec, st: &PhaseState) -> [PlanarVector; 3] {
        let c = charge_coefficients(spec).unwrap();
        let a = acceleration(spec, st).unwrap();
        positions_to_jacobi(&c, &a)
    }

    #[test]
    fn derived_mode_matches_newton() {
        let (spec, st) = sample_state();
        let want = cartesian_jacobi_acc(&spec, &st);
        let k = to_jacobi_kinematics(&spec, &st).unwrap();
        let got = rhs_jacobi(&spec, &k, EomMode::Derived).unwrap();
        for (g, w) in [got.r, got.tau1, got.tau2].iter().zip(&want) {
            assert!((*g - *w).norm() < 1e-11 * (1.0 + w.norm()), "{g:?} vs {w:?}");
        }
    }

    #[test]
    fn literal_mode_centre_of_mass_equation_holds() {
        let (spec, st) = sample_state();
        let want = cartesian_jacobi_acc(&spec, &st);
        let k = to_jacobi_kinematics(&spec, &st).unwrap();
        let got = rhs_jacobi(&spec, &k, EomMode::Literal).unwrap();
        assert!((got.r - want[0]).norm() < 1e-12);
    }

    #[test]
    fn modes_agree_for_equal_ratios() {
        let spec = SystemSpec::from_slices(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 1.7).unwrap();
        let (_, st) = sample_state();
        let k = to_jacobi_kinematics(&spec, &st).unwrap();
        let a = rhs_jacobi(&spec, &k, EomMode::Literal).unwrap();
        let b = rhs_jacobi(&spec, &k, EomMode::Derived).unwrap();
        let want = cartesian_jacobi_acc(&spec, &st);
        for (x, w) in [a.r, a.tau1, a.tau2].iter().zip(&want) {
            assert!((*x - *w).norm() < 1e-12 * (1.0 + w.norm()));
        }
        for (x, w) in [b.r, b.tau1, b.tau2].iter().zip(&want) {
            assert!((*x - *w).norm() < 1e-11 * (1.0 + w.norm()));
        }
        // centre of mass: M R̈ = Q Ṙ × B
        let c = charge_coefficients(&spec).unwrap();
        let cm = cross_with_b(k.r_dot, spec.b) * (c.total_charge / c.total_mass);
        assert!((a.r - cm).norm() < 1e-13);
    }
}
