//! `n` charges on one rotating line, `v₁ < v₂ < … < v_n`.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::SystemSpec;
use crate::{linalg, Error, Result};

use super::config_ii::{kappa, solve_config_ii_at};
use super::{merge_solutions, require_charged, scaled_residual, ConfigSolution, ConfigTag, GridSettings, RESIDUAL_TOLERANCE};

fn terms_nbody(spec: &SystemSpec, v: &[f64], w: f64, b: f64) -> Vec<Vec<f64>> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (ei, mi) = (spec.charge(i), spec.mass(i));
            let mut t = vec![b * ei * v[i], -mi * v[i] * w];
            for j in (0..n).filter(|&j| j != i) {
                let s = if j > i { 1.0 } else { -1.0 };
                let d = v[i] - v[j];
                t.push(s * ei * w * w * spec.charge(j) / (d * d));
            }
            t
        })
        .collect()
}

fn check_input(spec: &SystemSpec, v: &[f64]) -> Result<()> {
    if v.len() != spec.len() {
        return Err(Error::Domain("one speed per particle is required"));
    }
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return Err(Error::Domain("coincident speeds put two charges at the same point"));
            }
        }
    }
    Ok(())
}

/// Radial balance of every charge; the Coulomb sum carries `+` for outer
/// partners (`j > i`) and `−` for inner ones.
pub fn residuals_nbody_ii(spec: &SystemSpec, v: &[f64], w: f64, b: f64) -> Result<Vec<f64>> {
    check_input(spec, v)?;
    Ok(terms_nbody(spec, v, w, b).iter().map(|t| t.iter().sum()).collect())
}

pub fn residual_norm_nbody_ii(spec: &SystemSpec, v: &[f64], w: f64, b: f64) -> Result<f64> {
    check_input(spec, v)?;
    let t = terms_nbody(spec, v, w, b);
    let rows: Vec<&[f64]> = t.iter().map(|r| r.as_slice()).collect();
    Ok(scaled_residual(&rows))
}

/// Field from the balance of charge 2 with `ω = κB`.
pub fn field_nbody_ii(spec: &SystemSpec, v: &[f64]) -> f64 {
    let k = kappa(spec, v);
    let (e2, m2) = (spec.charge(1), spec.mass(1));
    let mut s = 0.0;
    for (j, vj) in v.iter().enumerate().skip(2) {
        s += spec.charge(j) / ((v[1] - vj) * (v[1] - vj));
    }
    s -= spec.charge(0) / ((v[1] - v[0]) * (v[1] - v[0]));
    v[1] * (m2 * k - e2) / (e2 * k * k * s)
}

/// Outcome of a seeded Newton search.
#[derive(Clone, Debug, PartialEq)]
pub struct NbodySearch {
    pub solutions: Vec<ConfigSolution>,
    pub seeds: usize,
    /// Seeds whose Newton iteration stopped without reaching a root.
    pub stalled: usize,
}

fn full_speeds(x: &[f64], vn: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(x.len() + 2);
    v.push(x[0]);
    v.push(1.0);
    v.extend_from_slice(&x[1..]);
    v.push(vn);
    v
}

fn ordered(v: &[f64]) -> bool {
    v[0] > 0.0 && v.windows(2).all(|w| w[1] > w[0])
}

/// Scaled balances of charges 3..n after eliminating `ω` and `B`.
fn reduced(spec: &SystemSpec, x: &[f64], vn: f64) -> Option<Vec<f64>> {
    let v = full_speeds(x, vn);
    if !ordered(&v) {
        return None;
    }
    let b = field_nbody_ii(spec, &v);
    let w = kappa(spec, &v) * b;
    let t = terms_nbody(spec, &v, w, b);
    let f: Vec<f64> = t[2..]
        .iter()
        .map(|row| {
            let s: f64 = row.iter().map(|x| x.abs()).sum();
            row.iter().sum::<f64>() / s
        })
        .collect();
    f.iter().all(|x| x.is_finite()).then_some(f)
}

fn max_abs(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn newton(spec: &SystemSpec, mut x: Vec<f64>, vn: f64) -> Option<Vec<f64>> {
    let dim = x.len();
    let mut f = reduced(spec, &x, vn)?;
    for _ in 0..80 {
        if max_abs(&f) < 1e-14 {
            return Some(x);
        }
        let mut jac = vec![0.0; dim * dim];
        for c in 0..dim {
            let h = 1e-7 * x[c].abs().max(1e-3);
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[c] += h;
            xm[c] -= h;
            let (fp, fm) = (reduced(spec, &xp, vn)?, reduced(spec, &xm, vn)?);
            for r in 0..dim {
                jac[r * dim + c] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        let mut step: Vec<f64> = f.iter().map(|v| -v).collect();
        linalg::solve(&mut jac, &mut step).ok()?;
        let mut lambda = 1.0;
        let current = max_abs(&f);
        loop {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + lambda * d).collect();
            if let Some(ft) = reduced(spec, &trial, vn) {
                if max_abs(&ft) < current {
                    x = trial;
                    f = ft;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return (current < 1e-12).then_some(x);
            }
        }
    }
    (max_abs(&f) < 1e-12).then_some(x)
}

fn certify(spec: &SystemSpec, v: Vec<f64>) -> Option<ConfigSolution> {
    let b = field_nbody_ii(spec, &v);
    let k = kappa(spec, &v);
    let w = k * b;
    if !ordered(&v) || !(b.is_finite() && b != 0.0) || !(w > 0.0 && w.is_finite()) {
        return None;
    }
    let res = residual_norm_nbody_ii(spec, &v, w, b).ok()?;
    (res < RESIDUAL_TOLERANCE).then(|| ConfigSolution {
        config: ConfigTag::NbodyII,
        branch: alloc::string::String::new(),
        v,
        omega: w,
        omega3: None,
        b,
        residual_norm: res,
        kappa: Some(k),
    })
}

fn interior_seeds(slots: usize, vn: f64) -> Vec<Vec<f64>> {
    const FRACTIONS: [f64; 5] = [0.15, 0.35, 0.5, 0.65, 0.85];
    let ln = libm::log(vn);
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..slots {
        let mut next = Vec::new();
        for combo in &out {
            let start = combo.last().map_or(0, |k| k + 1);
            for k in start..FRACTIONS.len() {
                let mut c = combo.clone();
                c.push(k);
                next.push(c);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|c| c.into_iter().map(|k| libm::exp(FRACTIONS[k] * ln)).collect())
        .collect()
}

/// Newton search at fixed outermost speed `vn > 1` (with `v₂ = 1`). For
/// three charges this is the one-dimensional sextic scan.
pub fn solve_nbody_ii_at(spec: &SystemSpec, vn: f64, v1_points_per_decade: usize) -> Result<NbodySearch> {
    let n = spec.len();
    if n < 3 {
        return Err(Error::Domain("need at least three particles"));
    }
    require_charged(spec)?;
    if spec.equal_larmor() {
        return Err(Error::NoSolution(
            "all charge-to-mass ratios are equal; no collinear rigid rotation exists",
        ));
    }
    if !(vn > 1.0) {
        return Err(Error::Domain("outermost speed must exceed v2 = 1"));
    }
    if n == 3 {
        let mut sols = solve_config_ii_at(spec, vn, v1_points_per_decade)?;
        for s in &mut sols {
            s.config = ConfigTag::NbodyII;
        }
        return Ok(NbodySearch { solutions: sols, seeds: 1, stalled: 0 });
    }
    let v1_seeds: Vec<f64> = (0..8).map(|k| libm::pow(10.0, -2.0 + 2.0 * k as f64 / 8.0) * 0.95).collect();
    let mut search = NbodySearch { solutions: Vec::new(), seeds: 0, stalled: 0 };
    for inner in interior_seeds(n - 3, vn) {
        for &v1 in &v1_seeds {
            search.seeds += 1;
            let mut x = vec![v1];
            x.extend_from_slice(&inner);
            match newton(spec, x, vn).and_then(|x| certify(spec, full_speeds(&x, vn))) {
                Some(s) => search.solutions.push(s),
                None => search.stalled += 1,
            }
        }
    }
    Ok(search)
}

/// Sweep of `v_n` over the grid; `NonConvergence` when every seed stalls,
/// `NoSolution` when seeds converged only to rejected points.
pub fn solve_nbody_ii(spec: &SystemSpec, grid: &GridSettings) -> Result<NbodySearch> {
    grid.validate()?;
    let mut all = NbodySearch { solutions: Vec::new(), seeds: 0, stalled: 0 };
    for vn in grid.values() {
        let s = solve_nbody_ii_at(spec, vn, grid.v1_points_per_decade)?;
        all.seeds += s.seeds;
        all.stalled += s.stalled;
        all.solutions.extend(s.solutions);
    }
    finish_nbody(all)
}

pub fn finish_nbody(mut search: NbodySearch) -> Result<NbodySearch> {
    if search.solutions.is_empty() && search.seeds > 0 && search.stalled == search.seeds && search.seeds > 1 {
        return Err(Error::NonConvergence("Newton stalled from every seed"));
    }
    search.solutions = merge_solutions(search.solutions, "no certified n-body root on the grid")?;
    Ok(search)
}
