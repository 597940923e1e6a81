//! Collinear configurations: all charges on one side of the centre
//! (Config II, `v₁ < v₂ < v₃`) or charge 3 opposite (Config III case a,
//! `v₁ > v₂ > v₃`). Both reduce to roots of the sextic with `v₂ = 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::SystemSpec;
use crate::{Error, Result};

use super::p6::{horner, horner_derivative, p6_coefficients};
use super::{
    bracketed_roots, log_grid, merge_solutions, require_charged, require_three, scaled_residual, ConfigSolution,
    ConfigTag, GridSettings, RESIDUAL_TOLERANCE,
};

const EQUAL_LARMOR_NO_GO: &str =
    "all charge-to-mass ratios are equal; the centre of mass then decouples and no collinear rigid rotation exists";

fn terms_config_ii(spec: &SystemSpec, v: [f64; 3], w: f64, b: f64) -> [[f64; 4]; 3] {
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let [v1, v2, v3] = v;
    let w2 = w * w;
    let (d12, d13, d23) = ((v1 - v2) * (v1 - v2), (v1 - v3) * (v1 - v3), (v2 - v3) * (v2 - v3));
    [
        [b * e1 * v1, -m1 * v1 * w, e1 * w2 * e2 / d12, e1 * w2 * e3 / d13],
        [b * e2 * v2, -m2 * v2 * w, e2 * w2 * e3 / d23, -e2 * w2 * e1 / d12],
        [b * e3 * v3, -m3 * v3 * w, -e3 * w2 * e1 / d13, -e3 * w2 * e2 / d23],
    ]
}

fn terms_config_iii(spec: &SystemSpec, v: [f64; 3], w: f64, b: f64) -> [[f64; 4]; 3] {
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let [v1, v2, v3] = v;
    let w2 = w * w;
    let (d12, d13, d23) = ((v1 - v2) * (v1 - v2), (v1 + v3) * (v1 + v3), (v2 + v3) * (v2 + v3));
    [
        [b * e1 * v1, -m1 * v1 * w, -e1 * w2 * e2 / d12, -e1 * w2 * e3 / d13],
        [b * e2 * v2, -m2 * v2 * w, -e2 * w2 * e3 / d23, e2 * w2 * e1 / d12],
        [-b * e3 * v3, m3 * v3 * w, e3 * w2 * e1 / d13, e3 * w2 * e2 / d23],
    ]
}

fn check_distinct(v: &[f64]) -> Result<()> {
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return Err(Error::Domain("coincident speeds put two charges at the same point"));
            }
        }
    }
    Ok(())
}

fn sum_rows(t: [[f64; 4]; 3]) -> [f64; 3] {
    t.map(|row| row.iter().sum())
}

fn norm_rows(t: &[[f64; 4]; 3]) -> f64 {
    scaled_residual(&[&t[0], &t[1], &t[2]])
}

/// Radial force balance for each charge on the rotating line.
pub fn residuals_config_ii(spec: &SystemSpec, v: [f64; 3], w: f64, b: f64) -> Result<[f64; 3]> {
    require_three(spec)?;
    check_distinct(&v)?;
    Ok(sum_rows(terms_config_ii(spec, v, w, b)))
}

pub fn residual_norm_config_ii(spec: &SystemSpec, v: [f64; 3], w: f64, b: f64) -> Result<f64> {
    require_three(spec)?;
    check_distinct(&v)?;
    Ok(norm_rows(&terms_config_ii(spec, v, w, b)))
}

/// Same balance with charge 3 on the far side at radius `v₃/ω`.
pub fn residuals_config_iii(spec: &SystemSpec, v: [f64; 3], w: f64, b: f64) -> Result<[f64; 3]> {
    require_three(spec)?;
    check_distinct(&[v[0], v[1], -v[2]])?;
    Ok(sum_rows(terms_config_iii(spec, v, w, b)))
}

pub fn residual_norm_config_iii(spec: &SystemSpec, v: [f64; 3], w: f64, b: f64) -> Result<f64> {
    require_three(spec)?;
    check_distinct(&[v[0], v[1], -v[2]])?;
    Ok(norm_rows(&terms_config_iii(spec, v, w, b)))
}

/// `κ = Σ e_i v_i / Σ m_i v_i`; the summed balance forces `ω = κB`.
pub fn kappa(spec: &SystemSpec, v: &[f64]) -> f64 {
    let (mut ev, mut mv) = (0.0, 0.0);
    for (p, vi) in spec.particles.iter().zip(v) {
        ev += p.charge * vi;
        mv += p.mass * vi;
    }
    ev / mv
}

/// Field that makes the balance of charge 2 hold once `ω = κB`.
pub fn field_config_ii(spec: &SystemSpec, v: [f64; 3]) -> f64 {
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let [v1, v2, v3] = v;
    let mv = m1 * v1 + m2 * v2 + m3 * v3;
    let ev = e1 * v1 + e2 * v2 + e3 * v3;
    let num = (v1 - v2) * (v1 - v2) * v2 * (v2 - v3) * (v2 - v3) * mv * (e2 * (m1 * v1 + m3 * v3) - m2 * (e1 * v1 + e3 * v3));
    let den = e2 * (e1 * (v2 - v3) * (v2 - v3) - e3 * (v1 - v2) * (v1 - v2)) * ev * ev;
    num / den
}

pub fn field_config_iii(spec: &SystemSpec, v: [f64; 3]) -> f64 {
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let [v1, v2, v3] = v;
    let mv = m1 * v1 + m2 * v2 - m3 * v3;
    let ev = e1 * v1 + e2 * v2 - e3 * v3;
    let num = (v1 - v2) * (v1 - v2) * v2 * (v2 + v3) * (v2 + v3) * mv * (e2 * (m1 * v1 - m3 * v3) + m2 * (e3 * v3 - e1 * v1));
    let den = e2 * (e1 * (v2 + v3) * (v2 + v3) - e3 * (v1 - v2) * (v1 - v2)) * ev * ev;
    -num / den
}

/// Balance of charge 3 after substituting `ω = κB` and the field from
/// [`field_config_ii`]. Its zeros are those of the sextic.
pub fn elimination_residual(spec: &SystemSpec, v: [f64; 3]) -> f64 {
    let b = field_config_ii(spec, v);
    let w = kappa(spec, &v) * b;
    terms_config_ii(spec, v, w, b)[2].iter().sum()
}

fn certify(
    spec: &SystemSpec,
    tag: ConfigTag,
    branch: String,
    v: [f64; 3],
) -> Option<ConfigSolution> {
    let (ordered, b, k) = match tag {
        ConfigTag::IIIa => {
            let vm = [v[0], v[1], -v[2]];
            (v[0] > v[1] && v[1] > v[2] && v[2] > 0.0, field_config_iii(spec, v), kappa(spec, &vm))
        }
        _ => (v[2] > v[1] && v[1] > v[0] && v[0] > 0.0, field_config_ii(spec, v), kappa(spec, &v)),
    };
    let w = k * b;
    if !ordered || !(b.is_finite() && b != 0.0) || !(w > 0.0 && w.is_finite()) {
        return None;
    }
    let res = match tag {
        ConfigTag::IIIa => norm_rows(&terms_config_iii(spec, v, w, b)),
        _ => norm_rows(&terms_config_ii(spec, v, w, b)),
    };
    (res < RESIDUAL_TOLERANCE).then(|| ConfigSolution {
        config: tag,
        branch,
        v: v.to_vec(),
        omega: w,
        omega3: None,
        b,
        residual_norm: res,
        kappa: Some(k),
    })
}

fn precheck(spec: &SystemSpec) -> Result<()> {
    require_three(spec)?;
    require_charged(spec)?;
    if spec.equal_larmor() {
        return Err(Error::NoSolution(EQUAL_LARMOR_NO_GO));
    }
    Ok(())
}

/// Config II roots with `v₂ = 1` and the given `v₃ > 1`: every sign change
/// of the sextic in `v₁ ∈ [10⁻³, 1)`, certified against the raw balances.
pub fn solve_config_ii_at(spec: &SystemSpec, v3: f64, v1_points_per_decade: usize) -> Result<Vec<ConfigSolution>> {
    precheck(spec)?;
    let c = p6_coefficients(spec)?.in_v1(1.0, v3);
    let grid = log_grid(1e-3, 1.0, v1_points_per_decade);
    let roots = bracketed_roots(|x| horner(&c, x), |x| horner_derivative(&c, x), &grid);
    Ok(label(roots.into_iter().filter_map(|v1| certify(spec, ConfigTag::II, String::new(), [v1, 1.0, v3]))))
}

/// Config III (case a) with `v₂ = 1` and `0 < v₃ < 1`: the sextic at
/// `(v₁, 1, −v₃)` scanned over `v₁ ∈ (1, 10³]`.
pub fn solve_config_iii_at(spec: &SystemSpec, v3: f64, v1_points_per_decade: usize) -> Result<Vec<ConfigSolution>> {
    precheck(spec)?;
    let c = p6_coefficients(spec)?.in_v1(1.0, -v3);
    let mut grid = log_grid(1.0, 1e3, v1_points_per_decade);
    grid[0] = 1.0 + 1e-9;
    let roots = bracketed_roots(|x| horner(&c, x), |x| horner_derivative(&c, x), &grid);
    Ok(label(roots.into_iter().filter_map(|v1| certify(spec, ConfigTag::IIIa, String::new(), [v1, 1.0, v3]))))
}

fn label(sols: impl Iterator<Item = ConfigSolution>) -> Vec<ConfigSolution> {
    sols.enumerate()
        .map(|(k, mut s)| {
            s.branch = format!("r{}", k + 1);
            s
        })
        .collect()
}

/// Sequential sweep over `grid.values()`.
pub fn solve_config_ii(spec: &SystemSpec, grid: &GridSettings) -> Result<Vec<ConfigSolution>> {
    precheck(spec)?;
    grid.validate()?;
    let mut all = Vec::new();
    for v3 in grid.values() {
        all.extend(solve_config_ii_at(spec, v3, grid.v1_points_per_decade)?);
    }
    merge_solutions(all, "no certified Config II root on the grid")
}

pub fn solve_config_iii(spec: &SystemSpec, grid: &GridSettings) -> Result<Vec<ConfigSolution>> {
    precheck(spec)?;
    grid.validate()?;
    let mut all = Vec::new();
    for v3 in grid.values() {
        all.extend(solve_config_iii_at(spec, v3, grid.v1_points_per_decade)?);
    }
    merge_solutions(all, "no certified Config III root on the grid")
}

/// `v₃/v₂` at which charge 1 has the same ratio as the composite of 2 and 3.
pub fn composite_ratio_v3(spec: &SystemSpec, v2: f64) -> Result<f64> {
    require_three(spec)?;
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let den = e1 * m3 - e3 * m1;
    if den == 0.0 {
        return Err(Error::Degenerate("charges 1 and 3 have equal ratios"));
    }
    Ok(v2 * (e2 * m1 - e1 * m2) / den)
}

/// The two closed-form `v₁` of the composite-ratio case (`+` then `−`);
/// `None` where the square root is imaginary or the denominator vanishes.
pub fn composite_ratio_v1(spec: &SystemSpec, v2: f64, v3: f64) -> [Option<f64>; 2] {
    let (e1, e3) = (spec.charge(0), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let mv = m2 * v2 + m3 * v3;
    let disc = e3 * m1 * v2 * (e3 * m1 * v3 - e1 * mv);
    let den = e3 * m1 * (v2 - v3) + e1 * mv;
    if disc < 0.0 || den == 0.0 {
        return [None, None];
    }
    let base = e1 * v3 * mv + e3 * m1 * (v2 * v2 - v3 * v3);
    let root = (v2 - v3) * libm::sqrt(disc);
    [Some((base + root) / den), Some((base - root) / den)]
}

/// Config II from the composite-ratio closed form (`v₂ = 1`).
pub fn solve_config_ii_composite(spec: &SystemSpec) -> Result<Vec<ConfigSolution>> {
    precheck(spec)?;
    let v3 = composite_ratio_v3(spec, 1.0)?;
    let mut out = Vec::new();
    for (v1, tag) in composite_ratio_v1(spec, 1.0, v3).into_iter().zip(["wf+", "wf-"]) {
        if let Some(s) = v1.and_then(|v1| certify(spec, ConfigTag::II, String::from(tag), [v1, 1.0, v3])) {
            out.push(s);
        }
    }
    merge_solutions(out, "composite-ratio roots violate the Config II ordering")
}

/// Config III counterpart: the condition and the closed form with `v₃ → −v₃`.
pub fn solve_config_iii_composite(spec: &SystemSpec) -> Result<Vec<ConfigSolution>> {
    precheck(spec)?;
    let v3 = -composite_ratio_v3(spec, 1.0)?;
    let mut out = Vec::new();
    for (v1, tag) in composite_ratio_v1(spec, 1.0, -v3).into_iter().zip(["wf+", "wf-"]) {
        if let Some(s) = v1.and_then(|v1| certify(spec, ConfigTag::IIIa, String::from(tag), [v1, 1.0, v3])) {
            out.push(s);
        }
    }
    merge_solutions(out, "composite-ratio roots violate the Config III ordering")
}

/// `(e, m, m₁)` when charges 2 and 3 are identical and `e₁ = −2e`.
pub fn helium_parameters(spec: &SystemSpec) -> Option<(f64, f64, f64)> {
    if spec.len() != 3 {
        return None;
    }
    let (e, m) = (spec.charge(1), spec.mass(1));
    (spec.charge(2) == e && spec.mass(2) == m && spec.charge(0) == -2.0 * e).then_some((e, m, spec.mass(0)))
}

pub fn helium_cubic(l: f64) -> f64 {
    ((l - 117.0) * l - 81.0) * l - 27.0
}

/// Real root of [`helium_cubic`] by bisection.
pub fn helium_lambda() -> f64 {
    let (mut a, mut b) = (100.0f64, 200.0f64);
    while b - a > 1e-13 * b {
        let m = 0.5 * (a + b);
        if helium_cubic(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

pub fn helium_quartic(v1: f64, v2: f64, v3: f64) -> f64 {
    let (a, b) = (v3, v2);
    let p = |x: f64, n: i32| libm::pow(x, n as f64);
    p(v1, 4) * (a + b) - 2.0 * p(v1, 3) * (a * a + 2.0 * a * b + b * b)
        + v1 * v1 * (3.0 * p(a, 3) - a * a * b + 11.0 * a * b * b - p(b, 3))
        + 2.0 * v1 * (3.0 * p(a, 3) * b - 2.0 * a * a * b * b - 5.0 * a * p(b, 3) + 2.0 * p(b, 4) - 2.0 * p(a, 4))
        + (2.0 * p(a, 5) - 4.0 * p(a, 4) * b + 3.0 * p(a, 3) * b * b - a * a * p(b, 3) + 4.0 * a * p(b, 4) - 2.0 * p(b, 5))
}

fn helium_common(v: [f64; 3]) -> (f64, f64) {
    let [v1, v2, v3] = v;
    let q = v1 * v1 - 2.0 * v2 * v1 + 3.0 * v2 * v2 + 2.0 * v3 * v3 - 4.0 * v2 * v3;
    let s = 2.0 * v1 - v2 - v3;
    (q, s)
}

/// Closed-form field for the helium-like system.
pub fn helium_field(e: f64, m: f64, m1: f64, v: [f64; 3]) -> f64 {
    let [v1, v2, v3] = v;
    let (q, s) = helium_common(v);
    (2.0 * m + m1) * v1 * v2 * (v1 - v2) * (v1 - v2) * (v2 - v3) * (v2 - v3) * (m1 * v1 + m * (v2 + v3))
        / (e * e * e * s * s * q)
}

pub fn helium_omega(e: f64, m: f64, m1: f64, v: [f64; 3]) -> f64 {
    let [v1, v2, v3] = v;
    let (q, s) = helium_common(v);
    (2.0 * m + m1) * v1 * (v1 - v2) * (v1 - v2) * v2 * (v2 - v3) * (v2 - v3) / (e * e * s * q)
}

/// Real roots of the helium quartic in `v₁` on `(lo, hi)`.
pub fn helium_quartic_roots(v2: f64, v3: f64, lo: f64, hi: f64) -> Vec<f64> {
    let grid = log_grid(lo, hi, 200);
    let h = |x: f64| helium_quartic(x, v2, v3);
    let dh = |x: f64| {
        let d = 1e-7 * x.abs().max(1e-3);
        (h(x + d) - h(x - d)) / (2.0 * d)
    };
    bracketed_roots(h, dh, &grid)
}

/// Helium-like Config II at `v₂ = 1`: admissible quartic roots with the
/// closed-form field and angular velocity, certified against the raw balances.
pub fn solve_helium(spec: &SystemSpec, v3: f64) -> Result<Vec<ConfigSolution>> {
    precheck(spec)?;
    let (e, m, m1) = helium_parameters(spec).ok_or(Error::Domain("not a helium-like system"))?;
    let mut out = Vec::new();
    for (k, v1) in helium_quartic_roots(1.0, v3, 1e-6, 1.0).into_iter().enumerate() {
        let v = [v1, 1.0, v3];
        let b = helium_field(e, m, m1, v);
        let w = helium_omega(e, m, m1, v);
        if !(w > 0.0 && b.is_finite() && b != 0.0) {
            continue;
        }
        let res = residual_norm_config_ii(spec, v, w, b)?;
        if res < RESIDUAL_TOLERANCE {
            out.push(ConfigSolution {
                config: ConfigTag::II,
                branch: format!("he{}", k + 1),
                v: vec![v1, 1.0, v3],
                omega: w,
                omega3: None,
                b,
                residual_norm: res,
                kappa: Some(kappa(spec, &v)),
            });
        }
    }
    merge_solutions(out, "no admissible helium root below v2")
}
