//! Problem definition: charges, masses, field and phase states.

use alloc::vec::Vec;

use crate::vector::PlanarVector;
use crate::{Error, Result};

/// Relative spread of `e_i/m_i` under which ratios count as equal.
pub const LARMOR_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParticleSpec {
    pub charge: f64,
    pub mass: f64,
}

impl ParticleSpec {
    pub const fn new(charge: f64, mass: f64) -> Self {
        ParticleSpec { charge, mass }
    }

    pub fn ratio(&self) -> f64 {
        self.charge / self.mass
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub particles: Vec<ParticleSpec>,
    /// Signed field strength along +ẑ.
    pub b: f64,
}

impl SystemSpec {
    pub fn new(particles: Vec<ParticleSpec>, b: f64) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::InvalidSpec("at least one particle is required"));
        }
        if particles.iter().any(|p| !(p.mass > 0.0) || !p.mass.is_finite()) {
            return Err(Error::InvalidSpec("masses must be positive and finite"));
        }
        if particles.iter().any(|p| !p.charge.is_finite()) || !b.is_finite() {
            return Err(Error::InvalidSpec("charges and field must be finite"));
        }
        Ok(SystemSpec { particles, b })
    }

    /// Builds a spec from parallel charge and mass slices.
    pub fn from_slices(charges: &[f64], masses: &[f64], b: f64) -> Result<Self> {
        if charges.len() != masses.len() {
            return Err(Error::InvalidSpec("charge and mass counts differ"));
        }
        let ps = charges
            .iter()
            .zip(masses)
            .map(|(&e, &m)| ParticleSpec::new(e, m))
            .collect();
        SystemSpec::new(ps, b)
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn charge(&self, i: usize) -> f64 {
        self.particles[i].charge
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.particles[i].mass
    }

    pub fn total_charge(&self) -> f64 {
        self.particles.iter().map(|p| p.charge).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.particles.iter().map(|p| p.mass).sum()
    }

    pub fn is_neutral(&self) -> bool {
        let scale: f64 = self.particles.iter().map(|p| libm::fabs(p.charge)).sum();
        libm::fabs(self.total_charge()) <= LARMOR_TOLERANCE * scale.max(f64::MIN_POSITIVE)
    }

    /// Common charge-to-mass ratio when all ratios agree.
    pub fn common_larmor_ratio(&self) -> Option<f64> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.particles {
            let r = p.ratio();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let scale = libm::fabs(lo).max(libm::fabs(hi));
        if hi - lo <= LARMOR_TOLERANCE * scale {
            Some(0.5 * (lo + hi))
        } else {
            None
        }
    }

    pub fn equal_larmor(&self) -> bool {
        self.common_larmor_ratio().is_some()
    }

    pub fn with_field(&self, b: f64) -> SystemSpec {
        SystemSpec { particles: self.particles.clone(), b }
    }
}

/// Relative equality used for "identical particle" tests.
pub(crate) fn close(a: f64, b: f64) -> bool {
    libm::fabs(a - b) <= LARMOR_TOLERANCE * libm::fabs(a).max(libm::fabs(b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub positions: Vec<PlanarVector>,
    pub velocities: Vec<PlanarVector>,
}

impl PhaseState {
    pub fn new(t: f64, positions: Vec<PlanarVector>, velocities: Vec<PlanarVector>) -> Self {
        debug_assert_eq!(positions.len(), velocities.len());
        PhaseState { t, positions, velocities }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `p_i = m_i v_i + e_i A(ρ_i)`.
    pub fn canonical_momenta(&self, spec: &SystemSpec) -> Vec<PlanarVector> {
        self.positions
            .iter()
            .zip(&self.velocities)
            .zip(&spec.particles)
            .map(|((&r, &v), p)| v * p.mass + vector_potential(r, spec.b) * p.charge)
            .collect()
    }

    /// Inverse of [`PhaseState::canonical_momenta`].
    pub fn from_canonical(
        spec: &SystemSpec,
        t: f64,
        positions: Vec<PlanarVector>,
        momenta: &[PlanarVector],
    ) -> Self {
        let velocities = positions
            .iter()
            .zip(momenta)
            .zip(&spec.particles)
            .map(|((&r, &p), s)| (p - vector_potential(r, spec.b) * s.charge) / s.mass)
            .collect();
        PhaseState { t, positions, velocities }
    }

    /// Smallest pairwise separation as `(i, j, distance)`.
    pub fn min_separation(&self) -> Option<(usize, usize, f64)> {
        min_separation(&self.positions)
    }

    pub fn check_separation(&self, threshold: f64) -> Result<()> {
        check_separation(&self.positions, threshold)
    }
}

pub(crate) fn min_separation(pos: &[PlanarVector]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let d = (pos[i] - pos[j]).norm();
            if best.map_or(true, |b| d < b.2) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

pub(crate) fn check_separation(pos: &[PlanarVector], threshold: f64) -> Result<()> {
    match min_separation(pos) {
        Some((i, j, d)) if !(d > threshold) => Err(Error::Collision { i, j, separation: d }),
        _ => Ok(()),
    }
}

/// Symmetric gauge: `A(r) = ½ B ẑ × r = ½(−B r_y, B r_x)`.
pub fn vector_potential(r: PlanarVector, b: f64) -> PlanarVector {
    PlanarVector::new(-0.5 * b * r.y, 0.5 * b * r.x)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    /// Case (i): `Q = 0`.
    pub neutral: bool,
    /// Case (ii): every `e_i/m_i` equal; the coupling charges vanish.
    pub equal_larmor: bool,
    /// Case (iii): three particles, neutral, particles 2 and 3 identical.
    pub neutral_identical_pair: bool,
    /// Common ratio α when case (ii) holds.
    pub alpha: Option<f64>,
}

pub fn classify_system(spec: &SystemSpec) -> Classification {
    let neutral = spec.is_neutral();
    let alpha = spec.common_larmor_ratio();
    let pair = spec.len() == 3
        && neutral
        && close(spec.charge(1), spec.charge(2))
        && close(spec.mass(1), spec.mass(2));
    Classification { neutral, equal_larmor: alpha.is_some(), neutral_identical_pair: pair, alpha }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// `B → −B`, `e_i → −e_i`; state untouched.
    ChargeFieldFlip,
    /// `ρ_i → −ρ_i`, `v_i → −v_i`; spec untouched.
    Reflection,
}

pub fn apply_symmetry(
    spec: &SystemSpec,
    state: &PhaseState,
    which: Symmetry,
) -> (SystemSpec, PhaseState) {
    match which {
        Symmetry::ChargeFieldFlip => {
            let particles = spec
                .particles
                .iter()
                .map(|p| ParticleSpec::new(-p.charge, p.mass))
                .collect();
            (SystemSpec { particles, b: -spec.b }, state.clone())
        }
        Symmetry::Reflection => {
            let s = PhaseState {
                t: state.t,
                positions: state.positions.iter().map(|&r| -r).collect(),
                velocities: state.velocities.iter().map(|&v| -v).collect(),
            };
            (spec.clone(), s)
        }
    }
}
