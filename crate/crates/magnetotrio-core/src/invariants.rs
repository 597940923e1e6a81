//! Integrals, particular constants and a finite-difference Poisson bracket.
//!
//! Canonical coordinates are packed as `[x1, y1, …, xn, yn, px1, py1, …]`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::Trajectory;
use crate::model::{vector_potential, PhaseState, SystemSpec};
use crate::vector::PlanarVector;
use crate::{Error, Result};

pub fn canonical_coordinates(spec: &SystemSpec, state: &PhaseState) -> Vec<f64> {
    let n = state.len();
    let p = state.canonical_momenta(spec);
    let mut z = vec![0.0; 4 * n];
    for i in 0..n {
        z[2 * i] = state.positions[i].x;
        z[2 * i + 1] = state.positions[i].y;
        z[2 * n + 2 * i] = p[i].x;
        z[2 * n + 2 * i + 1] = p[i].y;
    }
    z
}

pub fn state_from_canonical(spec: &SystemSpec, t: f64, z: &[f64]) -> PhaseState {
    let n = z.len() / 4;
    let q: Vec<PlanarVector> = (0..n).map(|i| qi(z, i)).collect();
    let p: Vec<PlanarVector> = (0..n).map(|i| pi(z, n, i)).collect();
    PhaseState::from_canonical(spec, t, q, &p)
}

fn qi(z: &[f64], i: usize) -> PlanarVector {
    PlanarVector::new(z[2 * i], z[2 * i + 1])
}

fn pi(z: &[f64], n: usize, i: usize) -> PlanarVector {
    PlanarVector::new(z[2 * n + 2 * i], z[2 * n + 2 * i + 1])
}

fn coulomb(spec: &SystemSpec, q: &dyn Fn(usize) -> PlanarVector) -> Result<f64> {
    let mut u = 0.0;
    for i in 0..spec.len() {
        for j in i + 1..spec.len() {
            let r = (q(i) - q(j)).norm();
            if !(r > 0.0) {
                return Err(Error::Collision { i, j, separation: r });
            }
            u += spec.charge(i) * spec.charge(j) / r;
        }
    }
    Ok(u)
}

/// `Σ |p_i − e_i A(ρ_i)|²/2m_i + Σ_{i<j} e_i e_j/|ρ_i − ρ_j|`.
pub fn hamiltonian(spec: &SystemSpec, state: &PhaseState) -> Result<f64> {
    let kin: f64 = (0..spec.len())
        .map(|i| 0.5 * spec.mass(i) * state.velocities[i].norm_sq())
        .sum();
    Ok(kin + coulomb(spec, &|i| state.positions[i])?)
}

pub fn hamiltonian_canonical(spec: &SystemSpec, z: &[f64]) -> Result<f64> {
    let n = spec.len();
    let mut kin = 0.0;
    for i in 0..n {
        let pi_kin = pi(z, n, i) - vector_potential(qi(z, i), spec.b) * spec.charge(i);
        kin += pi_kin.norm_sq() / (2.0 * spec.mass(i));
    }
    Ok(kin + coulomb(spec, &|i| qi(z, i))?)
}

/// `K = Σ (m_i v_i + 2 e_i A(ρ_i))`.
pub fn pseudomomentum(spec: &SystemSpec, state: &PhaseState) -> PlanarVector {
    let mut k = PlanarVector::ZERO;
    for i in 0..spec.len() {
        k += individual_pseudomomentum(spec, state, i);
    }
    k
}

pub fn individual_pseudomomentum(spec: &SystemSpec, state: &PhaseState, i: usize) -> PlanarVector {
    state.velocities[i] * spec.mass(i) + vector_potential(state.positions[i], spec.b) * (2.0 * spec.charge(i))
}

fn pseudomomentum_canonical(spec: &SystemSpec, z: &[f64]) -> PlanarVector {
    let n = spec.len();
    let mut k = PlanarVector::ZERO;
    for i in 0..n {
        k += pi(z, n, i) + vector_potential(qi(z, i), spec.b) * spec.charge(i);
    }
    k
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngularMomentum {
    pub total: f64,
    pub per_particle: Vec<f64>,
}

/// `ℓ_i = ρ_i × p_i` with canonical `p_i`.
pub fn angular_momentum(spec: &SystemSpec, state: &PhaseState) -> AngularMomentum {
    let p = state.canonical_momenta(spec);
    let per: Vec<f64> = state.positions.iter().zip(&p).map(|(r, p)| r.cross(*p)).collect();
    AngularMomentum { total: per.iter().sum(), per_particle: per }
}

/// `𝒞 = K_x² + K_y² − 2 Q B L_z`.
pub fn casimir(spec: &SystemSpec, k: PlanarVector, lz: f64) -> f64 {
    k.norm_sq() - 2.0 * spec.total_charge() * spec.b * lz
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParticularConstants {
    pub kinetic: Vec<f64>,
    pub angular: Vec<f64>,
    /// x-component of particle 3's own pseudomomentum.
    pub k3x: Option<f64>,
    /// `τ₁ · p_τ₁` (three particles only).
    pub tau_dot_p: Option<f64>,
}

pub fn particular_constants(spec: &SystemSpec, state: &PhaseState) -> ParticularConstants {
    let kinetic = (0..spec.len())
        .map(|i| 0.5 * spec.mass(i) * state.velocities[i].norm_sq())
        .collect();
    let angular = angular_momentum(spec, state).per_particle;
    let k3x = (spec.len() >= 3).then(|| individual_pseudomomentum(spec, state, 2).x);
    let tau_dot_p = (spec.len() == 3).then(|| {
        let p = state.canonical_momenta(spec);
        tau_dot_p_tau(spec, &state.positions, &p)
    });
    ParticularConstants { kinetic, angular, k3x, tau_dot_p }
}

fn tau_dot_p_tau(spec: &SystemSpec, q: &[PlanarVector], p: &[PlanarVector]) -> f64 {
    let m12 = spec.mass(0) + spec.mass(1);
    let (nu1, nu2) = (spec.mass(0) / m12, spec.mass(1) / m12);
    let tau1 = q[1] - q[0];
    let p_tau1 = p[1] * nu1 - p[0] * nu2;
    tau1.dot(p_tau1)
}

/// Phase-space functions known to the bracket engine and the reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    H,
    Kx,
    Ky,
    /// `K_x² + K_y²`.
    K2,
    Lz,
    Casimir,
    /// Angular momentum of one particle (0-based).
    Ell(usize),
    /// Kinetic energy of one particle (0-based).
    T(usize),
    K3x,
    I,
}

impl Quantity {
    pub fn label(&self) -> String {
        match self {
            Quantity::H => "H".into(),
            Quantity::Kx => "Kx".into(),
            Quantity::Ky => "Ky".into(),
            Quantity::K2 => "K2".into(),
            Quantity::Lz => "Lz".into(),
            Quantity::Casimir => "Casimir".into(),
            Quantity::Ell(i) => format!("l{}", i + 1),
            Quantity::T(i) => format!("T{}", i + 1),
            Quantity::K3x => "k3x".into(),
            Quantity::I => "I".into(),
        }
    }

    /// Value at canonical point `z`; NaN where undefined (collisions).
    pub fn eval(&self, spec: &SystemSpec, z: &[f64]) -> f64 {
        let n = spec.len();
        let kinetic = |i: usize| {
            let k = pi(z, n, i) - vector_potential(qi(z, i), spec.b) * spec.charge(i);
            k.norm_sq() / (2.0 * spec.mass(i))
        };
        let lz = || (0..n).map(|i| qi(z, i).cross(pi(z, n, i))).sum::<f64>();
        match *self {
            Quantity::H => hamiltonian_canonical(spec, z).unwrap_or(f64::NAN),
            Quantity::Kx => pseudomomentum_canonical(spec, z).x,
            Quantity::Ky => pseudomomentum_canonical(spec, z).y,
            Quantity::K2 => pseudomomentum_canonical(spec, z).norm_sq(),
            Quantity::Lz => lz(),
            Quantity::Casimir => casimir(spec, pseudomomentum_canonical(spec, z), lz()),
            Quantity::Ell(i) if i < n => qi(z, i).cross(pi(z, n, i)),
            Quantity::T(i) if i < n => kinetic(i),
            Quantity::K3x if n >= 3 => (pi(z, n, 2) + vector_potential(qi(z, 2), spec.b) * spec.charge(2)).x,
            Quantity::I if n == 3 => {
                let q: Vec<PlanarVector> = (0..3).map(|i| qi(z, i)).collect();
                let p: Vec<PlanarVector> = (0..3).map(|i| pi(z, n, i)).collect();
                tau_dot_p_tau(spec, &q, &p)
            }
            _ => f64::NAN,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketSettings {
    /// Base relative step.
    pub h: f64,
    /// Allowed disagreement between the half-step and extrapolated estimates.
    pub tolerance: f64,
}

impl Default for BracketSettings {
    fn default() -> Self {
        BracketSettings { h: 1e-5, tolerance: 1e-4 }
    }
}

/// Central differences with step `h·max(1,|z_k|)`, one Richardson level.
pub fn gradient_fd<F: Fn(&[f64]) -> f64>(f: &F, z: &[f64], s: &BracketSettings) -> Result<Vec<f64>> {
    let mut w = z.to_vec();
    let mut g = vec![0.0; z.len()];
    for k in 0..z.len() {
        let hk = s.h * libm::fabs(z[k]).max(1.0);
        let mut central = |h: f64| {
            w[k] = z[k] + h;
            let fp = f(&w);
            w[k] = z[k] - h;
            let fm = f(&w);
            w[k] = z[k];
            (fp - fm) / (2.0 * h)
        };
        let d1 = central(hk);
        let d2 = central(0.5 * hk);
        let rich = (4.0 * d2 - d1) / 3.0;
        if !rich.is_finite() || libm::fabs(rich - d2) > s.tolerance * (1.0 + libm::fabs(rich)) {
            return Err(Error::NumericalInstability { coarse: d2, extrapolated: rich });
        }
        g[k] = rich;
    }
    Ok(g)
}

fn bracket_from_gradients(gf: &[f64], gg: &[f64]) -> f64 {
    let half = gf.len() / 2;
    let mut acc = 0.0;
    for k in 0..half {
        acc += gf[k] * gg[half + k] - gf[half + k] * gg[k];
    }
    acc
}

/// `{f, g} = Σ ∂f/∂q·∂g/∂p − ∂f/∂p·∂g/∂q` at canonical point `z`.
pub fn poisson_bracket<F, G>(f: F, g: G, z: &[f64], s: &BracketSettings) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
{
    let gf = gradient_fd(&f, z, s)?;
    let gg = gradient_fd(&g, z, s)?;
    Ok(bracket_from_gradients(&gf, &gg))
}

pub fn quantity_bracket(spec: &SystemSpec, a: Quantity, b: Quantity, z: &[f64]) -> Result<f64> {
    poisson_bracket(|w| a.eval(spec, w), |w| b.eval(spec, w), z, &BracketSettings::default())
}

/// Largest `|{q_a, q_b}|` over all pairs and all samples.
pub fn involution_check(quantities: &[Quantity], spec: &SystemSpec, traj: &Trajectory) -> Result<f64> {
    let s = BracketSettings::default();
    let mut worst: f64 = 0.0;
    for sample in &traj.samples {
        let z = canonical_coordinates(spec, sample);
        let grads = quantities
            .iter()
            .map(|q| gradient_fd(&|w: &[f64]| q.eval(spec, w), &z, &s))
            .collect::<Result<Vec<_>>>()?;
        for a in 0..grads.len() {
            for b in a + 1..grads.len() {
                worst = worst.max(libm::fabs(bracket_from_gradients(&grads[a], &grads[b])));
            }
        }
    }
    Ok(worst)
}

/// One row of the invariant table.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantRow {
    pub t: f64,
    pub h: f64,
    pub k: PlanarVector,
    pub lz: f64,
    pub casimir: f64,
    pub ell: Vec<f64>,
    pub kinetic: Vec<f64>,
    pub k3x: f64,
    pub i: f64,
}

impl InvariantRow {
    pub fn evaluate(spec: &SystemSpec, state: &PhaseState) -> Result<Self> {
        let h = hamiltonian(spec, state)?;
        let k = pseudomomentum(spec, state);
        let am = angular_momentum(spec, state);
        let pc = particular_constants(spec, state);
        Ok(InvariantRow {
            t: state.t,
            h,
            k,
            lz: am.total,
            casimir: casimir(spec, k, am.total),
            ell: am.per_particle,
            kinetic: pc.kinetic,
            k3x: pc.k3x.unwrap_or(f64::NAN),
            i: pc.tau_dot_p.unwrap_or(f64::NAN),
        })
    }

    /// Values in the order of [`invariant_columns`], without `t`.
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![self.h, self.k.x, self.k.y, self.lz, self.casimir];
        v.extend_from_slice(&self.ell);
        v.extend_from_slice(&self.kinetic);
        v.push(self.k3x);
        v.push(self.i);
        v
    }
}

/// Column names after `t`.
pub fn invariant_columns(n: usize) -> Vec<String> {
    let mut c: Vec<String> = ["H", "Kx", "Ky", "Lz", "Casimir"].iter().map(|s| String::from(*s)).collect();
    c.extend((1..=n).map(|i| format!("l{}", i)));
    c.extend((1..=n).map(|i| format!("T{}", i)));
    c.push("k3x".into());
    c.push("I".into());
    c
}

#[derive(Clone, Debug, PartialEq)]
pub struct Drift {
    pub name: String,
    pub initial: f64,
    /// `max_t |q(t) − q(0)|`.
    pub max_abs: f64,
}

impl Drift {
    /// Drift measured against `max(1, |q(0)|)`.
    pub fn scaled(&self) -> f64 {
        self.max_abs / libm::fabs(self.initial).max(1.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct InvariantReport {
    pub rows: Vec<InvariantRow>,
}

impl InvariantReport {
    pub fn from_trajectory(spec: &SystemSpec, traj: &Trajectory) -> Result<Self> {
        let rows = traj.samples.iter().map(|s| InvariantRow::evaluate(spec, s)).collect::<Result<Vec<_>>>()?;
        Ok(InvariantReport { rows })
    }

    pub fn drifts(&self) -> Vec<Drift> {
        let Some(first) = self.rows.first() else { return Vec::new() };
        let names = invariant_columns(first.ell.len());
        let v0 = first.values();
        let mut worst = vec![0.0f64; v0.len()];
        for r in &self.rows {
            for (k, v) in r.values().iter().enumerate() {
                let d = libm::fabs(v - v0[k]);
                if d.is_finite() {
                    worst[k] = worst[k].max(d);
                }
            }
        }
        names
            .into_iter()
            .zip(v0)
            .zip(worst)
            .filter(|((_, v0), _)| v0.is_finite())
            .map(|((name, initial), max_abs)| Drift { name, initial, max_abs })
            .collect()
    }

    pub fn drift(&self, name: &str) -> Option<Drift> {
        self.drifts().into_iter().find(|d| d.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(x: f64, y: f64) -> PlanarVector {
        PlanarVector::new(x, y)
    }

    #[test]
    fn static_coulomb_energy() {
        let spec = SystemSpec::from_slices(&[1.0, 1.0], &[1.0, 1.0], 3.0).unwrap();
        let st = PhaseState::new(0.0, vec![pv(-1.0, 0.0), pv(1.0, 0.0)], vec![pv(0.0, 0.0); 2]);
        assert_eq!(hamiltonian(&spec, &st).unwrap(), 0.5);
        let z = canonical_coordinates(&spec, &st);
        assert!((hamiltonian_canonical(&spec, &z).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_field_pseudomomentum_is_momentum() {
        let spec = SystemSpec::from_slices(&[1.0, -1.0], &[2.0, 3.0], 0.0).unwrap();
        let st = PhaseState::new(0.0, vec![pv(1.0, 2.0), pv(0.0, 0.5)], vec![pv(1.0, 0.0), pv(0.0, 1.0)]);
        assert_eq!(pseudomomentum(&spec, &st), pv(2.0, 3.0));
    }

    #[test]
    fn particle_at_origin_has_no_angular_momentum() {
        let spec = SystemSpec::from_slices(&[1.0, 1.0], &[1.0, 1.0], 2.0).unwrap();
        let st = PhaseState::new(0.0, vec![pv(0.0, 0.0), pv(1.0, 0.0)], vec![pv(3.0, 1.0); 2]);
        assert_eq!(angular_momentum(&spec, &st).per_particle[0], 0.0);
    }

    #[test]
    fn orthogonal_pair_has_zero_tau_dot_p() {
        let spec = SystemSpec::from_slices(&[-1.0; 3], &[1.0; 3], 0.0).unwrap();
        let st = PhaseState::new(
            0.0,
            vec![pv(-1.0, 0.0), pv(1.0, 0.0), pv(0.0, 5.0)],
            vec![pv(0.0, -1.0), pv(0.0, 1.0), pv(0.0, 0.0)],
        );
        assert_eq!(particular_constants(&spec, &st).tau_dot_p, Some(0.0));
    }

    #[test]
    fn quantity_eval_matches_state_functions() {
        let spec = SystemSpec::from_slices(&[1.0, -2.0, 0.5], &[1.0, 3.0, 0.7], -1.3).unwrap();
        let st = PhaseState::new(
            0.0,
            vec![pv(0.1, 0.2), pv(-1.0, 0.4), pv(0.7, -0.9)],
            vec![pv(0.3, -0.2), pv(0.0, 1.1), pv(-0.5, 0.25)],
        );
        let z = canonical_coordinates(&spec, &st);
        let row = InvariantRow::evaluate(&spec, &st).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-13 * (1.0 + b.abs());
        assert!(close(Quantity::H.eval(&spec, &z), row.h));
        assert!(close(Quantity::Kx.eval(&spec, &z), row.k.x));
        assert!(close(Quantity::Casimir.eval(&spec, &z), row.casimir));
        assert!(close(Quantity::T(1).eval(&spec, &z), row.kinetic[1]));
        assert!(close(Quantity::Ell(2).eval(&spec, &z), row.ell[2]));
        assert!(close(Quantity::K3x.eval(&spec, &z), row.k3x));
        assert!(close(Quantity::I.eval(&spec, &z), row.i));
        let back = state_from_canonical(&spec, 0.0, &z);
        for (a, b) in back.velocities.iter().zip(&st.velocities) {
            assert!((*a - *b).norm() < 1e-14);
        }
    }

    #[test]
    fn canonical_pair_brackets() {
        let spec = SystemSpec::from_slices(&[1.0, 1.0], &[1.0, 1.0], 1.0).unwrap();
        let z = [0.3, -0.2, 1.0, 0.5, 0.1, 0.2, -0.3, 0.4];
        let s = BracketSettings::default();
        let b = poisson_bracket(|w| w[0], |w| w[4], &z, &s).unwrap();
        assert!((b - 1.0).abs() < 1e-9);
        let b = poisson_bracket(|w| w[0], |w| w[5], &z, &s).unwrap();
        assert!(b.abs() < 1e-9);
        let _ = spec;
    }

    #[test]
    fn kx_ky_bracket_is_minus_qb() {
        let spec = SystemSpec::from_slices(&[-1.0; 3], &[1.0; 3], 2.0).unwrap();
        let z = [0.1, 0.2, -1.0, 0.3, 0.8, -0.6, 0.5, 0.1, -0.2, 0.3, 0.4, -0.7];
        let b = quantity_bracket(&spec, Quantity::Kx, Quantity::Ky, &z).unwrap();
        assert!((b - 6.0).abs() < 1e-8);
    }

    #[test]
    fn unstable_difference_is_reported() {
        let z = [1e-3, 0.0];
        let s = BracketSettings::default();
        let r = gradient_fd(&|w: &[f64]| libm::sin(1e6 * w[0]), &z, &s);
        assert!(matches!(r, Err(Error::NumericalInstability { .. })));
    }
}
