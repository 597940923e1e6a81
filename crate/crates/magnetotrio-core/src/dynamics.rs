//! Newton equations in Cartesian coordinates, integration and rigidity.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{check_separation, PhaseState, SystemSpec};
use crate::ode::dopri5;
pub use crate::ode::IntegratorSettings;
use crate::vector::{cross_with_b, PlanarVector};
use crate::{Error, Result};

pub const DEFAULT_MIN_SEPARATION: f64 = 1e-9;

/// `m_i a_i = e_i v_i × B ẑ + Σ_{j≠i} e_i e_j (ρ_i − ρ_j)/|ρ_i − ρ_j|³`.
pub fn acceleration(spec: &SystemSpec, state: &PhaseState) -> Result<Vec<PlanarVector>> {
    let mut out = vec![PlanarVector::ZERO; spec.len()];
    accelerations_into(spec, &state.positions, &state.velocities, DEFAULT_MIN_SEPARATION, &mut out)?;
    Ok(out)
}

pub(crate) fn accelerations_into(
    spec: &SystemSpec,
    pos: &[PlanarVector],
    vel: &[PlanarVector],
    min_sep: f64,
    out: &mut [PlanarVector],
) -> Result<()> {
    let n = spec.len();
    if pos.len() != n || vel.len() != n {
        return Err(Error::Domain("state size does not match the system"));
    }
    for i in 0..n {
        out[i] = cross_with_b(vel[i], spec.b) * spec.charge(i);
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = pos[i] - pos[j];
            let r2 = d.norm_sq();
            let r = libm::sqrt(r2);
            if !(r > min_sep) {
                return Err(Error::Collision { i, j, separation: r });
            }
            let f = d * (spec.charge(i) * spec.charge(j) / (r2 * r));
            out[i] += f;
            out[j] -= f;
        }
    }
    for (i, a) in out.iter_mut().enumerate() {
        *a = *a / spec.mass(i);
    }
    Ok(())
}

/// Three-body accelerations written out pair by pair, used as a cross-check
/// of the general n-body sum.
pub fn acceleration_three_body(spec: &SystemSpec, state: &PhaseState) -> Result<[PlanarVector; 3]> {
    if spec.len() != 3 {
        return Err(Error::Domain("three particles required"));
    }
    check_separation(&state.positions, DEFAULT_MIN_SEPARATION)?;
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (r1, r2, r3) = (state.positions[0], state.positions[1], state.positions[2]);
    let v = &state.velocities;
    let c = |d: PlanarVector, q: f64| d * (q / (d.norm_sq() * d.norm()));
    let f12 = c(r1 - r2, e1 * e2);
    let f13 = c(r1 - r3, e1 * e3);
    let f23 = c(r2 - r3, e2 * e3);
    let a1 = (cross_with_b(v[0], spec.b) * e1 + (f12 + f13)) / spec.mass(0);
    let a2 = (cross_with_b(v[1], spec.b) * e2 - (f12 - f23)) / spec.mass(1);
    let a3 = (cross_with_b(v[2], spec.b) * e3 - (f13 + f23)) / spec.mass(2);
    Ok([a1, a2, a3])
}

/// Ordered samples of one run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> Option<&PhaseState> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&PhaseState> {
        self.samples.last()
    }
}

pub(crate) fn pack(state: &PhaseState) -> Vec<f64> {
    let n = state.len();
    let mut y = vec![0.0; 4 * n];
    for i in 0..n {
        y[4 * i] = state.positions[i].x;
        y[4 * i + 1] = state.positions[i].y;
        y[4 * i + 2] = state.velocities[i].x;
        y[4 * i + 3] = state.velocities[i].y;
    }
    y
}

pub(crate) fn unpack(t: f64, y: &[f64]) -> PhaseState {
    let n = y.len() / 4;
    let mut pos = Vec::with_capacity(n);
    let mut vel = Vec::with_capacity(n);
    for i in 0..n {
        pos.push(PlanarVector::new(y[4 * i], y[4 * i + 1]));
        vel.push(PlanarVector::new(y[4 * i + 2], y[4 * i + 3]));
    }
    PhaseState::new(t, pos, vel)
}

/// Integrates the Newton equations with samples every `sample_interval`.
pub fn integrate(spec: &SystemSpec, state0: &PhaseState, settings: &IntegratorSettings) -> Result<Trajectory> {
    let n = spec.len();
    if state0.len() != n {
        return Err(Error::Domain("state size does not match the system"));
    }
    check_separation(&state0.positions, settings.min_separation)?;
    let mut pos = vec![PlanarVector::ZERO; n];
    let mut vel = vec![PlanarVector::ZERO; n];
    let mut acc = vec![PlanarVector::ZERO; n];
    let mut samples = Vec::new();
    dopri5(
        state0.t,
        &pack(state0),
        settings,
        |_, y, dy| {
            for i in 0..n {
                pos[i] = PlanarVector::new(y[4 * i], y[4 * i + 1]);
                vel[i] = PlanarVector::new(y[4 * i + 2], y[4 * i + 3]);
            }
            accelerations_into(spec, &pos, &vel, settings.min_separation, &mut acc)?;
            for i in 0..n {
                dy[4 * i] = vel[i].x;
                dy[4 * i + 1] = vel[i].y;
                dy[4 * i + 2] = acc[i].x;
                dy[4 * i + 3] = acc[i].y;
            }
            Ok(())
        },
        |t, y| {
            samples.push(unpack(t, y));
            Ok(())
        },
    )?;
    Ok(Trajectory { samples })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairDeviation {
    pub i: usize,
    pub j: usize,
    pub initial: f64,
    pub max_relative_deviation: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RigidityReport {
    pub pairs: Vec<PairDeviation>,
}

impl RigidityReport {
    pub fn max(&self) -> f64 {
        self.pairs.iter().map(|p| p.max_relative_deviation).fold(0.0, f64::max)
    }
}

/// Largest relative change of each pair distance over the run.
pub fn rigidity_report(traj: &Trajectory) -> Result<RigidityReport> {
    let first = traj.first().ok_or(Error::Domain("empty trajectory"))?;
    let n = first.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d0 = (first.positions[i] - first.positions[j]).norm();
            let mut worst: f64 = 0.0;
            for s in &traj.samples {
                let d = (s.positions[i] - s.positions[j]).norm();
                worst = worst.max(libm::fabs(d - d0) / d0);
            }
            pairs.push(PairDeviation { i, j, initial: d0, max_relative_deviation: worst });
        }
    }
    Ok(RigidityReport { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(x: f64, y: f64) -> PlanarVector {
        PlanarVector::new(x, y)
    }

    #[test]
    fn no_charges_no_force() {
        let spec = SystemSpec::from_slices(&[0.0; 3], &[1.0, 2.0, 3.0], 4.0).unwrap();
        let st = PhaseState::new(0.0, vec![pv(0.0, 0.0), pv(1.0, 0.0), pv(0.0, 1.0)], vec![pv(1.0, 2.0); 3]);
        for a in acceleration(&spec, &st).unwrap() {
            assert_eq!(a.norm(), 0.0);
        }
    }

    #[test]
    fn nbody_matches_pairwise_transcription() {
        let spec = SystemSpec::from_slices(&[1.0, -2.0, 0.5], &[1.0, 3.0, 0.7], -1.3).unwrap();
        let st = PhaseState::new(
            0.0,
            vec![pv(0.1, 0.2), pv(-1.0, 0.4), pv(0.7, -0.9)],
            vec![pv(0.3, -0.2), pv(0.0, 1.1), pv(-0.5, 0.25)],
        );
        let a = acceleration(&spec, &st).unwrap();
        let b = acceleration_three_body(&spec, &st).unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).norm() <= 1e-15 * (1.0 + b[i].norm()));
        }
    }

    #[test]
    fn coincident_positions_collide() {
        let spec = SystemSpec::from_slices(&[1.0, 1.0], &[1.0, 1.0], 1.0).unwrap();
        let st = PhaseState::new(0.0, vec![pv(1.0, 1.0), pv(1.0, 1.0)], vec![pv(0.0, 0.0); 2]);
        assert!(matches!(acceleration(&spec, &st), Err(Error::Collision { .. })));
        assert!(matches!(
            integrate(&spec, &st, &IntegratorSettings::default()),
            Err(Error::Collision { .. })
        ));
    }

    #[test]
    fn larmor_circle_closes() {
        // e = −1, m = 1, B = −2: radius ½, period π
        let spec = SystemSpec::from_slices(&[-1.0], &[1.0], -2.0).unwrap();
        let st = PhaseState::new(0.0, vec![pv(0.0, 0.0)], vec![pv(1.0, 0.0)]);
        let s = IntegratorSettings::default().with_t_end(core::f64::consts::PI).with_sample_interval(0.01);
        let traj = integrate(&spec, &st, &s).unwrap();
        let end = traj.last().unwrap();
        assert!((end.positions[0] - st.positions[0]).norm() < 1e-8);
        assert!((end.velocities[0] - st.velocities[0]).norm() < 1e-8);
        // a ⟂ v with |a| = |v|²/r
        let a = acceleration(&spec, &st).unwrap()[0];
        assert!((a.norm() - 2.0).abs() < 1e-15);
        let centre = pv(0.0, -0.5);
        for s in &traj.samples {
            assert!(((s.positions[0] - centre).norm() - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn single_sample_is_rigid() {
        let st = PhaseState::new(0.0, vec![pv(0.0, 0.0), pv(1.0, 0.0)], vec![pv(0.0, 0.0); 2]);
        let r = rigidity_report(&Trajectory { samples: vec![st] }).unwrap();
        assert_eq!(r.max(), 0.0);
        assert_eq!(r.pairs.len(), 1);
    }
}
