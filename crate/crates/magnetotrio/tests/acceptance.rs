//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Measured numbers are printed so the log is the record.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use magnetotrio::commands::{bracket_deviations, random_canonical_states};
use magnetotrio::parallel;
use magnetotrio_core::dynamics::{integrate, rigidity_report, Trajectory};
use magnetotrio_core::invariants::{state_from_canonical, InvariantReport, InvariantRow};
use magnetotrio_core::jacobi::{apply_cc, hamiltonian_jacobi, integrate_jacobi, to_jacobi, EomMode};
use magnetotrio_core::ode::IntegratorSettings;
use magnetotrio_core::solvers::{
    build_initial_state, config_i_rho_min, evaluate_p6, field_config_ii, field_config_iii, helium_cubic,
    helium_field, helium_lambda, helium_omega, helium_parameters, helium_quartic_roots, p6_magnitude,
    residual_norm_config_i, residual_norm_config_ii, solve_config_i_identical, solve_config_i_v3zero,
    solve_config_ii, solve_helium, solve_nbody_ii, ConfigSolution, GridSettings,
};
use magnetotrio_core::{Error, PhaseState, PlanarVector, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn tight(t_end: f64, dt: f64) -> IntegratorSettings {
    IntegratorSettings::default().with_t_end(t_end).with_sample_interval(dt).with_tolerances(1e-13, 1e-13)
}

fn electrons(b: f64) -> SystemSpec {
    SystemSpec::from_slices(&[-1.0; 3], &[1.0; 3], b).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn rel1(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn integral_drift(spec: &SystemSpec, traj: &Trajectory) -> f64 {
    let rep = InvariantReport::from_trajectory(spec, traj).unwrap();
    ["H", "Kx", "Ky", "Lz", "Casimir"].iter().map(|n| rep.drift(n).unwrap().scaled()).fold(0.0, f64::max)
}

fn particular_drift(spec: &SystemSpec, traj: &Trajectory) -> (String, f64) {
    let rep = InvariantReport::from_trajectory(spec, traj).unwrap();
    let mut names: Vec<String> = (1..=spec.len()).flat_map(|i| [format!("l{i}"), format!("T{i}")]).collect();
    names.push("I".into());
    names
        .into_iter()
        .filter_map(|n| rep.drift(&n).map(|d| (n, d.scaled())))
        .fold((String::new(), 0.0), |a, b| if b.1 > a.1 { b } else { a })
}

/// The three-electron solution with ω = 1, ω₃ = 2.
fn electron_trio_solution() -> (SystemSpec, ConfigSolution) {
    let spec = electrons(-2.0);
    let rho = config_i_rho_min(&spec, -2.0).unwrap();
    let sols = solve_config_i_identical(&spec, rho, Some(1.0)).unwrap();
    let sol = sols.into_iter().min_by(|a, b| (a.omega - 1.0).abs().total_cmp(&(b.omega - 1.0).abs())).unwrap();
    (spec, sol)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let spec = electrons(-2.0);
    let v = 1.25f64.cbrt();
    let res = residual_norm_config_i(&spec, v, v, 1.0, 1.0, 2.0, -2.0).unwrap();
    let (spec_b, sol) = electron_trio_solution();
    let matches = (sol.v[0] - v).abs() < 1e-12 && (sol.omega - 1.0).abs() < 1e-12 && sol.omega3 == Some(2.0);
    let sys = sol.system(&spec_b);
    let traj = integrate(&sys, &build_initial_state(&sol, &sys), &IntegratorSettings::default().with_t_end(10.0)).unwrap();
    let rig = rigidity_report(&traj).unwrap().max();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        res < 1e-12 && matches && rig < 1e-6 && secs < 5.0,
        format!("residual {res:.2e}, solver reproduces values {matches}, rigidity {rig:.2e}, {secs:.3} s"),
    )
}

fn criterion_2() -> Outcome {
    let spec = electrons(2.0);
    let rho = config_i_rho_min(&spec, 2.0).unwrap();
    let rho_err = rel(rho, 10f64.cbrt());
    let sols = solve_config_i_identical(&spec, rho, None).unwrap();
    let v = 1.25f64.cbrt();
    let coincide = sols.len() == 2 && sols.iter().all(|s| (s.v[0] - v).abs() < 1e-10);
    let below = matches!(solve_config_i_identical(&spec, rho * (1.0 - 1e-6), None), Err(Error::NoSolution(_)));
    outcome(
        rho_err < 1e-10 && coincide && below,
        format!("rho_min rel err {rho_err:.1e}, branches at rho_min {:?}, below rho_min NoSolution {below}", sols.iter().map(|s| s.v[0]).collect::<Vec<_>>()),
    )
}

fn criterion_3() -> Outcome {
    let specs = [
        ("electrons B=2", electrons(2.0), false),
        ("unequal", SystemSpec::from_slices(&[1.0, -2.0, 0.5], &[1.0, 3.0, 0.7], 1.3).unwrap(), false),
        ("neutral trio", SystemSpec::from_slices(&[2.0, -1.0, -1.0], &[4.0, 1.0, 1.0], 1.0).unwrap(), true),
        ("four charges", SystemSpec::from_slices(&[1.0, 2.0, -0.5, 1.5], &[1.0, 2.0, 0.5, 3.0], -0.8).unwrap(), false),
    ];
    let mut worst = 0.0f64;
    let mut neutral_kk = 0.0f64;
    for (k, (_, spec, neutral)) in specs.iter().enumerate() {
        let states = random_canonical_states(spec, 100, 1000 + k as u64);
        let devs = bracket_deviations(spec, &states).unwrap();
        worst = devs.iter().fold(worst, |m, d| m.max(d.1));
        if *neutral {
            // deviation of {Kx,Ky} from the prediction −QB = 0
            neutral_kk = devs[0].1;
        }
    }
    outcome(worst <= 1e-6 && neutral_kk <= 1e-6, format!("4 systems x 100 states, worst deviation {worst:.2e}, neutral {{Kx,Ky}} {neutral_kk:.2e}"))
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> (SystemSpec, PhaseState) {
    loop {
        let e: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
        let b = rng.gen_range(0.5..2.0);
        let spec = SystemSpec::from_slices(&e, &m, b).unwrap();
        let q = (0..n).map(|_| PlanarVector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let v = (0..n).map(|_| PlanarVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let st = PhaseState::new(0.0, q, v);
        if st.min_separation().is_some_and(|(_, _, d)| d > 0.5) {
            return (spec, st);
        }
    }
}

/// Runs with an encounter closer than this are redrawn: near-collisions
/// are roundoff-limited for any unregularized explicit scheme.
const ENCOUNTER: f64 = 1e-2;

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let (mut kept, mut redrawn) = (0, 0);
    while kept < 10 {
        let (spec, st) = random_system(&mut rng, 3);
        let mut set = tight(50.0, 0.5);
        set.min_separation = ENCOUNTER;
        match integrate(&spec, &st, &set) {
            Ok(traj) => {
                worst = worst.max(integral_drift(&spec, &traj));
                kept += 1;
            }
            Err(Error::Collision { .. }) => redrawn += 1,
            Err(e) => return outcome(false, format!("integration failed: {e}")),
        }
    }
    outcome(
        worst < 1e-8,
        format!("10 seeded runs to t=50, worst scaled drift {worst:.2e} ({redrawn} draws with an encounter below {ENCOUNTER:e} redrawn)"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_h = 0.0f64;
    for k in 0..100 {
        let (spec, _) = random_system(&mut rng, 3);
        let z = &random_canonical_states(&spec, 1, 500 + k)[0];
        let st = state_from_canonical(&spec, 0.0, z);
        let h = InvariantRow::evaluate(&spec, &st).unwrap().h;
        let hc = hamiltonian_jacobi(&spec, &apply_cc(&spec, &to_jacobi(&spec, &st).unwrap()).unwrap()).unwrap();
        worst_h = worst_h.max(rel1(h, hc));
    }
    // a stable rigid orbit and a strong-field generic one, each over 10 periods
    let worked = SystemSpec::from_slices(&[1.0, 4.0, 1.0], &[1.0, 5.0, 2.0], 1.0).unwrap();
    let wsol = solve_config_i_v3zero(&worked, 1.0).unwrap();
    let wsys = wsol.system(&worked);
    let generic = SystemSpec::from_slices(&[1.0, -2.0, 0.5], &[1.0, 3.0, 0.7], 3.0).unwrap();
    let cyclotron = (0..3).map(|i| 2.0 * PI * generic.mass(i) / (generic.charge(i) * generic.b).abs()).fold(0.0, f64::max);
    let p = |x, y| PlanarVector::new(x, y);
    let gstate = PhaseState::new(0.0, vec![p(1.0, 0.2), p(-0.8, 0.5), p(0.1, -1.4)], vec![p(0.1, 0.3), p(-0.2, 0.0), p(0.05, 0.2)]);
    let mut worst_x = 0.0f64;
    for (sys, st, period) in [(wsys.clone(), build_initial_state(&wsol, &wsys), wsol.period()), (generic, gstate, cyclotron)] {
        let set = tight(10.0 * period, period / 20.0);
        let cart = integrate(&sys, &st, &set).unwrap();
        let jac = integrate_jacobi(&sys, &st, &set, EomMode::Derived).unwrap();
        let scale = st.positions.iter().fold(1.0f64, |m, q| m.max(q.norm()));
        for (a, b) in cart.samples.iter().zip(&jac.samples) {
            for (x, y) in a.positions.iter().zip(&b.positions) {
                worst_x = worst_x.max((*x - *y).norm() / scale);
            }
        }
    }
    outcome(worst_h < 1e-10 && worst_x < 1e-6, format!("HC vs H worst rel {worst_h:.2e} at 100 states; Jacobi vs Cartesian over 10 periods worst {worst_x:.2e}"))
}

fn criterion_6() -> Outcome {
    let specs = [
        electrons(1.0),
        SystemSpec::from_slices(&[2.0, 1.0, 3.0], &[2.0, 1.0, 3.0], 0.7).unwrap(),
        SystemSpec::from_slices(&[-1.0, -0.5, -2.0], &[4.0, 2.0, 8.0], -1.5).unwrap(),
    ];
    let mut all_refused = true;
    let mut worst = 0.0f64;
    for spec in &specs {
        all_refused &= matches!(solve_config_ii(spec, &GridSettings::config_ii()), Err(Error::NoSolution(m)) if m.contains("ratio"));
        let scale = p6_magnitude(spec);
        for i in 1..=12 {
            for j in 1..=12 {
                let (v1, v3) = (0.25 * i as f64, 0.3 * j as f64);
                worst = worst.max(evaluate_p6(spec, v1, 1.0, v3).unwrap().abs() / scale);
            }
        }
    }
    outcome(all_refused && worst < 1e-14, format!("NoSolution for all {} specs {all_refused}, max |P6|/scale {worst:.1e}", specs.len()))
}

fn criterion_7() -> Outcome {
    // independent Newton solve of the cubic as the oracle
    let mut l = 120.0f64;
    for _ in 0..50 {
        l -= helium_cubic(l) / ((3.0 * l - 234.0) * l - 81.0);
    }
    let lambda = helium_lambda();
    let lambda_ok = (lambda - l).abs() < 1e-9;
    let spec = SystemSpec::from_slices(&[2.0, -1.0, -1.0], &[4.0, 1.0, 1.0], 1.0).unwrap();
    let (e, m, m1) = helium_parameters(&spec).unwrap();
    let mut certified = 0;
    let mut rigid = 0;
    let mut notes = Vec::new();
    for f in [1.0, 1.1, 1.5, 2.0] {
        let v3 = f * lambda;
        let roots = helium_quartic_roots(1.0, v3, 1e-6, 1e4);
        let best = roots
            .iter()
            .map(|&v1| {
                let v = [v1, 1.0, v3];
                let (b, w) = (helium_field(e, m, m1, v), helium_omega(e, m, m1, v));
                residual_norm_config_ii(&spec, v, w, b).unwrap_or(f64::INFINITY)
            })
            .fold(f64::INFINITY, f64::min);
        notes.push(format!("v3={v3:.1}: roots [{}] best residual {best:.1e}", roots.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", ")));
        if let Ok(sols) = solve_helium(&spec, v3) {
            for s in sols {
                certified += 1;
                let sys = s.system(&spec);
                let traj = integrate(&sys, &build_initial_state(&s, &sys), &tight(10.0, 0.1)).unwrap();
                rigid += usize::from(rigidity_report(&traj).unwrap().max() < 1e-6);
            }
        }
    }
    outcome(
        lambda_ok && certified > 0 && rigid == certified,
        format!("lambda {lambda:.9} (oracle {l:.9}); certified {certified}, rigid {rigid}; {}", notes.join("; ")),
    )
}

/// Tabulated Config I closed forms against direct evaluation.
fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    let mut mismatched = Vec::new();
    let mut check = |name: &str, tabulated: f64, direct: f64| {
        let d = (tabulated - direct).abs() / direct.abs().max(1.0);
        if d > 1e-8 {
            mismatched.push(format!("{name} tabulated {tabulated:.6} direct {direct:.6}"));
        }
        lines.push(d);
    };

    // v₃ = 0: e = (1, 4, 1), m = (1, 5, 2), v₁ = 1
    let spec = SystemSpec::from_slices(&[1.0, 4.0, 1.0], &[1.0, 5.0, 2.0], 1.0).unwrap();
    let sol = solve_config_i_v3zero(&spec, 1.0).unwrap();
    let worked_ok = rel(sol.omega, 18.0 / 91.0) < 1e-12 && rel(sol.b, 162.0 / 637.0) < 1e-12;
    let res = residual_norm_config_i(&spec, sol.v[0], sol.v[1], 0.0, sol.omega, 0.0, sol.b).unwrap();
    let sys = sol.system(&spec);
    let row = InvariantRow::evaluate(&sys, &build_initial_state(&sol, &sys)).unwrap();
    let (e1, e3, m1, m2, v1) = (1.0f64, 1.0f64, 1.0f64, 5.0f64, 1.0f64);
    let r = 2.0f64;
    let den = (e1 * (r.powi(3) - 1.0) * (e1 * r * r + e3 * (1.0 + r))).abs();
    let h = 0.5 * v1 * v1
        * (m1 + m2 * r * r
            + 2.0 * e1 * r * r * (1.0 + r) * (m2 - m1 * r * r).abs() / den * (e1 * r + e3 * (1.0 + r))
            + 2.0 * e1 * e3 * (1.0 + r).powi(2) * (m2 * r - m1 * r.powi(3)).abs() / den);
    let bi = r * (1.0 + r).powi(2) * (m1 - m2 * r) * (m1 * r * r - m2) * v1.powi(3)
        / (e1 * e1 * (r.powi(3) - 1.0).powi(2) * (e1 * r * r + e3 * (1.0 + r).powi(2)));
    let q = e1 * r * r + e3 * (1.0 + r).powi(2);
    let lz = e1 * (r.powi(3) - 1.0) * q
        * (bi * e1 * e1 * (r.powi(3) - 1.0 - r.powi(4) + r.powi(7)) * q
            + 2.0 * r * (1.0 + r).powi(2) * v1.powi(3) * (m1 * r * r - m2) * (m2 * r * r + m1))
        / (2.0 * r * r * (1.0 + r).powi(4) * v1.powi(4) * (m2 - m1 * r * r).powi(2));
    check("I0:B_I", bi, sol.b);
    check("I0:H", h, row.h);
    check("I0:K2", 0.0, row.k.norm_sq());
    check("I0:Lz", lz, row.lz);
    check("I0:T1", 0.5 * m1 * v1 * v1, row.kinetic[0]);
    check("I0:T2", 0.5 * m1 * r * r * v1 * v1, row.kinetic[1]);
    check("I0:l3", 0.0, row.ell[2]);
    check("I0:I", 0.0, row.i);

    // v₃ ≠ 0: electrons at B = −2, every separation on the default sweep
    let spec = electrons(-2.0);
    let rho_min = config_i_rho_min(&spec, -2.0).unwrap();
    let (e, m, e3, m3, b) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64, -2.0f64);
    let mut n_states = 0;
    for k in 0..5 {
        let rho = rho_min * (1.0 + 0.25 * k as f64);
        for sol in solve_config_i_identical(&spec, rho, Some(1.0)).unwrap() {
            n_states += 1;
            let sys = sol.system(&spec);
            let row = InvariantRow::evaluate(&sys, &build_initial_state(&sol, &sys)).unwrap();
            let v3 = sol.v[2];
            let sign = if sol.branch.starts_with('-') { -1.0 } else { 1.0 };
            // 8m(e+4e₃)/(eB²) is ρ_min³; written that way the root is exactly 0 at ρ_min
            debug_assert!(rel(8.0 * m * (e + 4.0 * e3) / (e * b * b), rho_min.powi(3)) < 1e-14);
            let root = (1.0 - (rho_min / rho).powi(3)).max(0.0).sqrt();
            let h = 0.5 * m3 * v3 * v3 + e * e * b * b * rho * rho / (16.0 * m) * (1.0 + sign * root).powi(2) + e * (e + 4.0 * e3) / rho;
            let lz = e * b * rho * rho / 4.0 - (2.0 * m + m3) * m3 * v3 * v3 / (2.0 * e3 * b) - e * b * rho * rho / 4.0 * (1.0 + sign * root);
            let tag = format!("I{}:", sol.branch);
            check(&format!("{tag}H"), h, row.h);
            check(&format!("{tag}K2"), 0.0, row.k.norm_sq());
            check(&format!("{tag}Lz"), lz, row.lz);
            check(&format!("{tag}l3"), -m3 * m3 * v3 * v3 / (2.0 * e3 * b), row.ell[2]);
            check(&format!("{tag}T3"), 0.5 * m3 * v3 * v3, row.kinetic[2]);
            check(&format!("{tag}k3"), 0.0, row.k3x);
            check(&format!("{tag}I"), 0.0, row.i);
        }
    }
    mismatched.dedup_by(|a, b| a.split(' ').next() == b.split(' ').next());
    let pass = worked_ok && res < 1e-12 && mismatched.is_empty();
    outcome(
        pass,
        format!(
            "worked example exact {worked_ok}, residual {res:.1e}; {} tabulated values on {} states, mismatches: {}",
            lines.len(),
            n_states + 1,
            if mismatched.is_empty() { "none".to_string() } else { mismatched.join("; ") }
        ),
    )
}

fn criterion_9() -> Outcome {
    let (spec, sol) = electron_trio_solution();
    let sys = sol.system(&spec);
    let mut st = build_initial_state(&sol, &sys);
    st.velocities[0].y *= 1.01;
    let traj = integrate(&sys, &st, &tight(10.0 * sol.period(), 0.1)).unwrap();
    let integrals = integral_drift(&sys, &traj);
    let (name, part) = particular_drift(&sys, &traj);
    outcome(integrals < 1e-8 && part > 1e-3, format!("integrals drift {integrals:.2e}, largest particular drift {name} {part:.2e}"))
}

fn criterion_10() -> Outcome {
    // n = 3 against the dedicated solver
    let spec = SystemSpec::from_slices(&[1.0, 2.0, 3.0], &[1.0; 3], 1.0).unwrap();
    let grid = GridSettings::config_ii();
    let a = solve_config_ii(&spec, &grid).unwrap();
    let b = solve_nbody_ii(&spec, &grid).unwrap().solutions;
    let same = a.len() == b.len()
        && a.iter().zip(&b).all(|(x, y)| x.v == y.v && x.omega == y.omega && x.b == y.b && x.branch == y.branch);

    // equal ratios, four charges: centre of mass on a circle at αB
    let (alpha, bf) = (-0.5, 1.7);
    let spec4 = SystemSpec::from_slices(&[-0.5, -1.0, -1.5, -2.0], &[1.0, 2.0, 3.0, 4.0], bf).unwrap();
    let p = |x, y| PlanarVector::new(x, y);
    let st = PhaseState::new(
        0.0,
        vec![p(1.0, 0.0), p(-1.0, 0.5), p(0.3, -1.2), p(-0.4, 1.5)],
        vec![p(0.2, 0.1), p(-0.3, 0.4), p(0.0, -0.2), p(0.5, 0.1)],
    );
    let traj = integrate(&spec4, &st, &tight(10.0 * 2.0 * PI / (alpha * bf).abs(), 0.1)).unwrap();
    let cm = |s: &PhaseState, vel: bool| {
        let mut c = PlanarVector::new(0.0, 0.0);
        for i in 0..4 {
            c += (if vel { s.velocities[i] } else { s.positions[i] }) * spec4.mass(i);
        }
        c / spec4.total_mass()
    };
    let (r0, v0) = (cm(&st, false), cm(&st, true));
    let w = alpha * bf;
    let j = |v: PlanarVector| PlanarVector::new(v.y, -v.x);
    let mut cm_err = 0.0f64;
    for s in &traj.samples {
        let t = s.t;
        let want = r0 + v0 * ((w * t).sin() / w) + j(v0) * ((1.0 - (w * t).cos()) / w);
        cm_err = cm_err.max((cm(s, false) - want).norm());
    }

    // four unequal charges: whatever the search certifies must stay rigid
    let spec4b = SystemSpec::from_slices(&[1.0, 2.0, 3.0, 4.0], &[1.0; 4], 1.0).unwrap();
    let grid4 = GridSettings { v_min: 1.5, v_max: 20.0, points: 10, v1_points_per_decade: 40 };
    let found = parallel::find_nbody_ii(&spec4b, &grid4).map(|s| s.solutions).unwrap_or_default();
    let mut rigidity = Vec::new();
    let mut short = Vec::new();
    for s in &found {
        let sys = s.system(&spec4b);
        let p = s.period();
        let rig = |periods: f64| {
            integrate(&sys, &build_initial_state(s, &sys), &tight(periods * p, p / 50.0))
                .map(|t| rigidity_report(&t).unwrap().max())
                .unwrap_or(f64::INFINITY)
        };
        rigidity.push(rig(10.0));
        short.push(rig(0.1));
    }
    let fmt = |v: &[f64]| v.iter().map(|r| format!("{r:.1e}")).collect::<Vec<_>>().join(", ");
    let rigid = !found.is_empty() && rigidity.iter().all(|r| *r < 1e-6);
    outcome(
        same && cm_err < 1e-6 && rigid,
        format!(
            "n=3 catalogs identical {same} ({} roots); CM circle error {cm_err:.1e}; n=4 solutions {} with rigidity over 10 periods [{}] (over 0.1 period [{}])",
            a.len(),
            found.len(),
            fmt(&rigidity),
            fmt(&short)
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 1000 {
        let e: Vec<f64> = (0..3).map(|_| rng.gen_range(0.2..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        let m: Vec<f64> = (0..3).map(|_| rng.gen_range(0.2..5.0)).collect();
        let spec = SystemSpec::from_slices(&e, &m, 1.0).unwrap();
        let v2 = rng.gen_range(0.1..5.0);
        let v = [v2 * rng.gen_range(1.01..10.0), v2, v2 * rng.gen_range(0.01..0.99)];
        let (b3, b2) = (field_config_iii(&spec, v), field_config_ii(&spec, [v[0], v[1], -v[2]]));
        if !(b3.is_finite() && b2.is_finite()) {
            continue;
        }
        worst = worst.max(rel(b3, -b2));
        n += 1;
    }
    outcome(worst < 1e-12, format!("1000 seeded triples, worst relative error {worst:.1e}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("electron trio rigid rotation", criterion_1),
        ("minimum pair separation", criterion_2),
        ("bracket algebra", criterion_3),
        ("integrals and Casimir", criterion_4),
        ("Jacobi frame equivalence", criterion_5),
        ("equal-ratio no-go", criterion_6),
        ("helium-like pipeline", criterion_7),
        ("Config I closed forms", criterion_8),
        ("particular constants discriminate", criterion_9),
        ("n-body checks", criterion_10),
        ("field duality", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += usize::from(!o.pass);
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
