//! The sixth-order polynomial left after eliminating `ω` and `B` from the
//! collinear force balance.

use crate::model::SystemSpec;
use crate::Result;

use super::require_three;

/// Coefficients `a[i][j]` of `v₁^i v₂^j v₃^(6−i−j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolynomialP6 {
    pub a: [[f64; 7]; 7],
}

impl PolynomialP6 {
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> f64 {
        if i + j + k != 6 {
            return 0.0;
        }
        self.a[i][j]
    }

    /// Monomials with a nonzero coefficient.
    pub fn nonzero_terms(&self) -> usize {
        self.a.iter().flatten().filter(|c| **c != 0.0).count()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.a.iter().flatten().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, v1: f64, v2: f64, v3: f64) -> f64 {
        let c = self.in_v1(v2, v3);
        horner(&c, v1)
    }

    /// Coefficients of the univariate restriction in `v₁` (index = power).
    pub fn in_v1(&self, v2: f64, v3: f64) -> [f64; 7] {
        let mut c = [0.0; 7];
        for (i, ci) in c.iter_mut().enumerate() {
            let mut s = 0.0;
            for j in 0..=6 - i {
                let k = 6 - i - j;
                s += self.a[i][j] * libm::pow(v2, j as f64) * libm::pow(v3, k as f64);
            }
            *ci = s;
        }
        c
    }
}

pub(crate) fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ci| acc * x + ci)
}

pub(crate) fn horner_derivative(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, ci)| acc * x + i as f64 * ci)
}

/// Natural size of a single coefficient: `max|e|³ · max m`.
pub fn p6_magnitude(spec: &SystemSpec) -> f64 {
    let e = spec.particles.iter().fold(0.0f64, |m, p| m.max(p.charge.abs()));
    let m = spec.particles.iter().fold(0.0f64, |a, p| a.max(p.mass));
    e * e * e * m
}

pub fn p6_coefficients(spec: &SystemSpec) -> Result<PolynomialP6> {
    require_three(spec)?;
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let mut a = [[0.0; 7]; 7];
    a[5][1] = -e2 * e3 * (e1 * m2 - e2 * m1);
    a[5][0] = -e2 * e3 * (e1 * m3 - e3 * m1);
    a[4][2] = 2.0 * e2 * e3 * (e1 * m2 - e2 * m1);
    a[4][1] = 2.0 * e2 * e3 * (e1 * m2 + e1 * m3 - e2 * m1 - e3 * m1);
    a[4][0] = 2.0 * e2 * e3 * (e1 * m3 - e3 * m1);
    a[3][3] = -e3 * (e1 + e2) * (e1 * m2 - e2 * m1);
    a[3][2] = e1 * e1 * e2 * m3 + 2.0 * e1 * e1 * e3 * m2 - 3.0 * e1 * e2 * e3 * m1 - 4.0 * e1 * e2 * e3 * m2 - e1 * e2 * e3 * m3 + 4.0 * e2 * e2 * e3 * m1 + e2 * e3 * e3 * m1;
    a[3][1] = -2.0 * e1 * e1 * e2 * m3 - e1 * e1 * e3 * m2 + 3.0 * e1 * e2 * e3 * m1 - e1 * e2 * e3 * m2 - 4.0 * e1 * e2 * e3 * m3 + e2 * e2 * e3 * m1 + 4.0 * e2 * e3 * e3 * m1;
    a[3][0] = e2 * (e1 - e3) * (e1 * m3 - e3 * m1);
    a[2][4] = 2.0 * e1 * e3 * (e1 * m2 - e2 * m1);
    a[2][3] = -4.0 * e1 * e1 * e3 * m2 + e1 * e2 * e2 * m3 + 4.0 * e1 * e2 * e3 * m1 + e1 * e2 * e3 * m2 + e1 * e2 * e3 * m3 - e1 * e3 * e3 * m2 - 2.0 * e2 * e2 * e3 * m1;
    a[2][2] = -2.0 * (e1 * e1 * e2 * m3 - e1 * e1 * e3 * m2 + e1 * e2 * e2 * m3 - 2.0 * e1 * e2 * e3 * m2 - e1 * e3 * e3 * m2 + e2 * e2 * e3 * m1 + e2 * e3 * e3 * m1);
    a[2][1] = 4.0 * e1 * e1 * e2 * m3 + e1 * e2 * e2 * m3 - 4.0 * e1 * e2 * e3 * m1 - e1 * e2 * e3 * m2 + 3.0 * e1 * e2 * e3 * m3 - e1 * e3 * e3 * m2 - 2.0 * e2 * e3 * e3 * m1;
    a[2][0] = -2.0 * e1 * e2 * (e1 * m3 - e3 * m1);
    a[1][5] = -e1 * e3 * (e1 * m2 - e2 * m1);
    a[1][4] = 2.0 * e1 * e3 * (e1 * m2 - e2 * m1 - e2 * m3 + e3 * m2);
    a[1][3] = -e1 * e1 * e3 * m2 - 2.0 * e1 * e2 * e2 * m3 + e1 * e2 * e3 * m1 + e1 * e2 * e3 * m2 + 4.0 * e1 * e2 * e3 * m3 - 4.0 * e1 * e3 * e3 * m2 + e2 * e2 * e3 * m1;
    a[1][2] = e1 * e1 * e2 * m3 + 4.0 * e1 * e2 * e2 * m3 - e1 * e2 * e3 * m1 - 4.0 * e1 * e2 * e3 * m2 - 3.0 * e1 * e2 * e3 * m3 + 2.0 * e1 * e3 * e3 * m2 + e2 * e3 * e3 * m1;
    a[1][1] = -2.0 * e1 * e2 * (e1 * m3 + e2 * m3 - e3 * m1 - e3 * m2);
    a[1][0] = e1 * e2 * (e1 * m3 - e3 * m1);
    a[0][5] = e1 * e3 * (e2 * m3 - e3 * m2);
    a[0][4] = -2.0 * e1 * e3 * (e2 * m3 - e3 * m2);
    a[0][3] = e1 * (e2 + e3) * (e2 * m3 - e3 * m2);
    a[0][2] = -2.0 * e1 * e2 * (e2 * m3 - e3 * m2);
    a[0][1] = e1 * e2 * (e2 * m3 - e3 * m2);
    Ok(PolynomialP6 { a })
}

pub fn evaluate_p6(spec: &SystemSpec, v1: f64, v2: f64, v3: f64) -> Result<f64> {
    Ok(p6_coefficients(spec)?.eval(v1, v2, v3))
}
