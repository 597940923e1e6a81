//! Charges 1 and 2 on opposite sides of charge 3, rotating rigidly about it.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::jacobi::charge_coefficients;
use crate::model::SystemSpec;
use crate::{Error, Result};

use super::{require_charged, require_three, scaled_residual, ConfigSolution, ConfigTag};

/// Discriminants with magnitude below this are treated as a double root.
const DOUBLE_ROOT_TOLERANCE: f64 = 64.0 * f64::EPSILON;

fn terms_config_i(spec: &SystemSpec, v1: f64, v2: f64, v3: f64, w: f64, w3: f64, b: f64) -> [Vec<f64>; 6] {
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2) = (spec.mass(0), spec.mass(1));
    let m3 = spec.mass(2);
    let s = v1 + v2;
    let w2 = w * w;
    [
        vec![v3 * b * e1, -v3 * m1 * w3],
        vec![v3 * b * e2, -v3 * m2 * w3],
        vec![v3 * b * e3, -v3 * m3 * w3],
        vec![e3 * e1 * w2 / (v1 * v1), -e3 * e2 * w2 / (v2 * v2)],
        vec![b * e1 * v1, -w * m1 * v1, -e1 * e2 * w2 / (s * s), -e1 * e3 * w2 / (v1 * v1)],
        vec![b * e2 * v2, -w * m2 * v2, -e2 * e1 * w2 / (s * s), -e2 * e3 * w2 / (v2 * v2)],
    ]
}

/// The three `v₃`-proportional conditions, the balance on charge 3 and the
/// two radial force balances.
pub fn residuals_config_i(spec: &SystemSpec, v1: f64, v2: f64, v3: f64, w: f64, w3: f64, b: f64) -> Result<[f64; 6]> {
    require_three(spec)?;
    if !(v1 > 0.0 && v2 > 0.0) {
        return Err(Error::Domain("v1 and v2 must be positive"));
    }
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2, m3) = (spec.mass(0), spec.mass(1), spec.mass(2));
    let s = v1 + v2;
    Ok([
        v3 * (b * e1 - m1 * w3),
        v3 * (b * e2 - m2 * w3),
        v3 * (b * e3 - m3 * w3),
        e3 * (e1 / (v1 * v1) - e2 / (v2 * v2)) * w * w,
        b * e1 * v1 - w * (m1 * v1 + e1 * (e2 * v1 * v1 + e3 * s * s) * w / (v1 * v1 * s * s)),
        b * e2 * v2 - w * (m2 * v2 + e2 * (e1 * v2 * v2 + e3 * s * s) * w / (v2 * v2 * s * s)),
    ])
}

/// Scale-relative norm of [`residuals_config_i`].
pub fn residual_norm_config_i(spec: &SystemSpec, v1: f64, v2: f64, v3: f64, w: f64, w3: f64, b: f64) -> Result<f64> {
    let raw = residuals_config_i(spec, v1, v2, v3, w, w3, b)?;
    let t = terms_config_i(spec, v1, v2, v3, w, w3, b);
    // factored and expanded forms share a scale; take the larger mismatch
    let split = scaled_residual(&[&t[0], &t[1], &t[2], &t[3], &t[4], &t[5]]);
    let mut factored = 0.0f64;
    for (r, terms) in raw.iter().zip(&t) {
        let s: f64 = terms.iter().map(|x| x.abs()).sum();
        let q = if s == 0.0 { r.abs() } else { r.abs() / s };
        factored = factored.max(q);
    }
    Ok(split.max(factored))
}

/// The equal-ratio form used when charge 3 moves: `ω₃ − Bα`,
/// `e₁/v₁² − e₂/v₂²` and the two reduced force balances.
pub fn residuals_config_i_equal_ratio(
    spec: &SystemSpec,
    v1: f64,
    v2: f64,
    w: f64,
    w3: f64,
    b: f64,
) -> Result<[f64; 4]> {
    require_three(spec)?;
    let alpha = spec
        .common_larmor_ratio()
        .ok_or(Error::Domain("moving third charge needs a common charge-to-mass ratio"))?;
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2) = (spec.mass(0), spec.mass(1));
    let s2 = (v1 + v2) * (v1 + v2);
    Ok([
        w3 - b * alpha,
        e1 / (v1 * v1) - e2 / (v2 * v2),
        b * alpha - w * (1.0 + e1 * (e2 * v1 * v1 + e3 * s2) * w / (m1 * v1 * v1 * v1 * s2)),
        b * alpha - w * (1.0 + e2 * (e1 * v2 * v2 + e3 * s2) * w / (m2 * v2 * v2 * v2 * s2)),
    ])
}

/// `v₂ = v₁ √(e₂/e₁)`, defined for like-signed charges 1 and 2.
pub fn config_i_v2(spec: &SystemSpec, v1: f64) -> Result<f64> {
    require_three(spec)?;
    let (e1, e2) = (spec.charge(0), spec.charge(1));
    if !(e1 * e2 > 0.0) {
        return Err(Error::Domain("charges 1 and 2 must have the same sign"));
    }
    Ok(v1 * libm::sqrt(e2 / e1))
}

/// Field and angular velocity for given `v₁` with charge 3 at rest.
/// Returns `(B, ω)`.
pub fn config_i_field(spec: &SystemSpec, v1: f64) -> Result<(f64, f64)> {
    let (e1, e2, e3) = (spec.charge(0), spec.charge(1), spec.charge(2));
    let (m1, m2) = (spec.mass(0), spec.mass(1));
    let r = libm::sqrt(e2 / e1);
    let g = (1.0 + r) * (1.0 + r);
    let d = e2 + e3 * g;
    let num = (e2 * m1 - e1 * m2) * r * g * v1 * v1 * v1;
    let b = num * (m1 - m2 * r) / (e1 * (e1 - r * e2) * (e1 - r * e2) * d);
    let w = num / (e1 * (e1 - r * e2) * d);
    Ok((b, w))
}

pub fn solve_config_i_v3zero(spec: &SystemSpec, v1: f64) -> Result<ConfigSolution> {
    require_three(spec)?;
    require_charged(spec)?;
    if !(v1 > 0.0) {
        return Err(Error::Domain("v1 must be positive"));
    }
    let v2 = config_i_v2(spec, v1)?;
    if charge_coefficients(spec)?.ec1 == 0.0 {
        return Err(Error::Degenerate("charges 1 and 2 have equal ratios; use the identical-pair branch"));
    }
    let (b, w) = config_i_field(spec, v1)?;
    if !(b.is_finite() && w.is_finite()) || b == 0.0 {
        return Err(Error::Validity("field is zero or undefined"));
    }
    if !(w > 0.0) {
        return Err(Error::Validity("angular velocity is not positive"));
    }
    Ok(ConfigSolution {
        config: ConfigTag::IV3Zero,
        branch: String::new(),
        v: vec![v1, v2, 0.0],
        omega: w,
        omega3: None,
        b,
        residual_norm: residual_norm_config_i(spec, v1, v2, 0.0, w, 0.0, b)?,
        kappa: None,
    })
}

/// `(8m(e + 4e₃)/(eB²))^{1/3}` for an identical pair.
pub fn config_i_rho_min(spec: &SystemSpec, b: f64) -> Result<f64> {
    let (e, m, e3) = identical_pair(spec)?;
    let x = 8.0 * m * (e + 4.0 * e3) / (e * b * b);
    if !(x > 0.0) {
        return Err(Error::Domain("no minimal radius: the pair is bound for every field"));
    }
    Ok(libm::cbrt(x))
}

fn identical_pair(spec: &SystemSpec) -> Result<(f64, f64, f64)> {
    require_three(spec)?;
    require_charged(spec)?;
    let (e, m) = (spec.charge(0), spec.mass(0));
    if spec.charge(1) != e || spec.mass(1) != m {
        return Err(Error::Domain("charges 1 and 2 must be identical"));
    }
    Ok((e, m, spec.charge(2)))
}

/// Both roots `v = (|eB|ρ₁₂/4m)(1 ± √d)` for an identical pair at
/// separation `rho12` in field `spec.b`. With `v3 = Some(_)` charge 3 is
/// placed on its own Larmor circle, which requires a common ratio.
pub fn solve_config_i_identical(spec: &SystemSpec, rho12: f64, v3: Option<f64>) -> Result<Vec<ConfigSolution>> {
    let (e, m, e3) = identical_pair(spec)?;
    let b = spec.b;
    if !(rho12 > 0.0) {
        return Err(Error::Domain("separation must be positive"));
    }
    if b == 0.0 {
        return Err(Error::NoSolution("a rotating pair needs a nonzero field"));
    }
    let (tag, v3, w3) = match v3 {
        None | Some(0.0) => (ConfigTag::IV3Zero, 0.0, None),
        Some(v3) => {
            if !(v3 > 0.0) {
                return Err(Error::Domain("v3 must be positive"));
            }
            let alpha = spec
                .common_larmor_ratio()
                .ok_or(Error::NoSolution("a moving third charge needs the same charge-to-mass ratio"))?;
            (ConfigTag::IV3Nonzero, v3, Some(b * alpha))
        }
    };
    let mut d = 1.0 - 8.0 * m * (e + 4.0 * e3) / (e * b * b * rho12 * rho12 * rho12);
    if d.abs() < DOUBLE_ROOT_TOLERANCE {
        d = 0.0;
    }
    if d < 0.0 {
        return Err(Error::NoSolution("field below the allowed range for this separation"));
    }
    let ccw = e * b < 0.0;
    let base = (e * b).abs() * rho12 / (4.0 * m);
    let mut out = Vec::new();
    for (sign, tag_s) in [(1.0, "+"), (-1.0, "-")] {
        let v = base * (1.0 + sign * libm::sqrt(d));
        if !(v > 0.0) {
            continue;
        }
        let w = 2.0 * v / rho12;
        // the mirrored motion satisfies the clockwise equations with e B → |e B|
        let bb = if ccw { -b } else { b };
        let w3s = w3.map(|x| if ccw { -x } else { x });
        let residual_norm = residual_norm_config_i(spec, v, v, v3, w, w3s.unwrap_or(0.0), bb)?;
        let mut branch = String::from(tag_s);
        if ccw {
            branch.push_str(":ccw");
        }
        out.push(ConfigSolution {
            config: tag,
            branch,
            v: vec![v, v, v3],
            omega: w,
            omega3: w3,
            b,
            residual_norm,
            kappa: None,
        });
    }
    if out.is_empty() {
        return Err(Error::NoSolution("both roots have non-positive speed"));
    }
    Ok(out)
}
