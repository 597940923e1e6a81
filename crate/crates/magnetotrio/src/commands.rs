//! The four subcommands, callable in-process. Reports go to `out`; files
//! go to the requested directories.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use magnetotrio_core::dynamics::{integrate, rigidity_report, Trajectory};
use magnetotrio_core::invariants::{canonical_coordinates, quantity_bracket, InvariantReport, Quantity};
use magnetotrio_core::jacobi::{integrate_jacobi, EomMode};
use magnetotrio_core::ode::IntegratorSettings;
use magnetotrio_core::solvers::{
    build_initial_state, config_i_rho_min, helium_lambda, helium_parameters, merge_solutions,
    solve_config_i_identical, solve_config_i_v3zero, solve_config_ii_composite, solve_config_iii_composite,
    solve_helium, ConfigSolution, ConfigTag, GridSettings,
};
use magnetotrio_core::{Error, PhaseState, PlanarVector, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::{
    format_float, format_system, parse_system, parse_trajectory_csv, write_catalog_csv, write_invariant_csv,
    write_trajectory_csv, ParseError, SystemFile,
};
use crate::manifest::RunManifest;
use crate::parallel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_COLLISION: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NO_SOLUTION: i32 = 4;
pub const EXIT_CHECK_FAILED: i32 = 5;

#[derive(Debug)]
pub enum CliError {
    Parse { path: PathBuf, err: ParseError },
    Core(Error),
    Io { path: PathBuf, err: io::Error },
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Core(e) => match e {
                Error::Collision { .. } => EXIT_COLLISION,
                Error::NoSolution(_) | Error::NonConvergence(_) => EXIT_NO_SOLUTION,
                Error::Domain(_) | Error::InvalidSpec(_) => EXIT_PARSE,
                Error::NumericalInstability { .. } => EXIT_CHECK_FAILED,
                _ => EXIT_OTHER,
            },
            CliError::Io { .. } => EXIT_OTHER,
            CliError::Failed(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { path, err } => write!(f, "{}: {}", path.display(), err),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, err } => write!(f, "{}: {}", path.display(), err),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|err| CliError::Io { path: path.into(), err })
}

fn write_file(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> CliResult {
    let mut buf = Vec::new();
    f(&mut buf).and_then(|_| fs::write(path, &buf)).map_err(|err| CliError::Io { path: path.into(), err })
}

fn create_dir(path: &Path) -> CliResult {
    fs::create_dir_all(path).map_err(|err| CliError::Io { path: path.into(), err })
}

fn report(out: &mut dyn Write, line: impl fmt::Display) -> CliResult {
    writeln!(out, "{line}").map_err(|err| CliError::Io { path: "<stdout>".into(), err })
}

pub fn load_system(path: &Path) -> CliResult<SystemFile> {
    parse_system(&read(path)?).map_err(|err| CliError::Parse { path: path.into(), err })
}

#[derive(Clone, Debug)]
pub struct SimulateOptions {
    pub system: PathBuf,
    pub out_dir: PathBuf,
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub sample_every: f64,
    /// Integrate in Jacobi variables instead of Cartesian ones.
    pub mode: Option<EomMode>,
}

impl SimulateOptions {
    pub fn new(system: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        let d = IntegratorSettings::default();
        SimulateOptions {
            system: system.into(),
            out_dir: out_dir.into(),
            t_end: d.t_end,
            rel_tol: d.rel_tol,
            abs_tol: d.abs_tol,
            sample_every: d.sample_interval,
            mode: None,
        }
    }

    pub fn settings(&self) -> IntegratorSettings {
        IntegratorSettings::default()
            .with_t_end(self.t_end)
            .with_sample_interval(self.sample_every)
            .with_tolerances(self.rel_tol, self.abs_tol)
    }
}

fn mode_name(m: Option<EomMode>) -> &'static str {
    match m {
        None => "cartesian",
        Some(EomMode::Literal) => "paper-literal",
        Some(EomMode::Derived) => "derived",
    }
}

pub fn simulate(opts: &SimulateOptions, out: &mut dyn Write) -> CliResult {
    let start = Instant::now();
    let file = load_system(&opts.system)?;
    let state = file.initial_state().map_err(|err| CliError::Parse { path: opts.system.clone(), err })?;
    let settings = opts.settings();
    settings.validate()?;
    let traj = match opts.mode {
        None => integrate(&file.spec, &state, &settings)?,
        Some(m) => integrate_jacobi(&file.spec, &state, &settings, m)?,
    };
    create_dir(&opts.out_dir)?;
    let tpath = opts.out_dir.join("trajectory.csv");
    write_file(&tpath, |b| write_trajectory_csv(b, &traj))?;
    let inv = InvariantReport::from_trajectory(&file.spec, &traj)?;
    let ipath = opts.out_dir.join("invariants.csv");
    write_file(&ipath, |b| write_invariant_csv(b, &inv.rows, file.spec.len()))?;

    let mut m = RunManifest::new("simulate");
    m.input(&opts.system);
    m.set("t_end", opts.t_end);
    m.set("rel_tol", opts.rel_tol);
    m.set("abs_tol", opts.abs_tol);
    m.set("sample_every", opts.sample_every);
    m.set("frame", mode_name(opts.mode));
    m.output(&tpath);
    m.output(&ipath);
    let mpath = m
        .write(&opts.out_dir, start.elapsed())
        .map_err(|err| CliError::Io { path: opts.out_dir.clone(), err })?;

    report(out, format_args!("samples {}", traj.len()))?;
    if file.spec.len() > 1 {
        report(out, format_args!("max relative pair deviation {}", format_float(rigidity_report(&traj)?.max())))?;
    }
    for name in ["H", "Kx", "Ky", "Lz", "Casimir"] {
        if let Some(d) = inv.drift(name) {
            report(out, format_args!("drift {name} {}", format_float(d.scaled())))?;
        }
    }
    report(out, format_args!("wrote {} {} {}", tpath.display(), ipath.display(), mpath.display()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FindConfig {
    I,
    II,
    III,
    NbodyII,
}

#[derive(Clone, Debug)]
pub struct FindOptions {
    pub system: PathBuf,
    pub out_dir: PathBuf,
    pub config: FindConfig,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_points: Option<usize>,
    /// Config I: speed of the third charge (0 keeps it at rest).
    pub v3: Option<f64>,
    pub emit_states: Option<PathBuf>,
}

impl FindOptions {
    pub fn new(system: impl Into<PathBuf>, out_dir: impl Into<PathBuf>, config: FindConfig) -> Self {
        FindOptions {
            system: system.into(),
            out_dir: out_dir.into(),
            config,
            grid_min: None,
            grid_max: None,
            grid_points: None,
            v3: None,
            emit_states: None,
        }
    }

    fn grid(&self, default: GridSettings) -> GridSettings {
        GridSettings {
            v_min: self.grid_min.unwrap_or(default.v_min),
            v_max: self.grid_max.unwrap_or(default.v_max),
            points: self.grid_points.unwrap_or(default.points),
            ..default
        }
    }
}

/// Solver failures that only say "nothing valid here" become `NoSolution`.
fn as_no_solution(e: Error) -> Error {
    match e {
        Error::Domain(m) | Error::Validity(m) | Error::Degenerate(m) => Error::NoSolution(m),
        other => other,
    }
}

fn find_config_i(spec: &SystemSpec, opts: &FindOptions) -> Result<(Vec<ConfigSolution>, GridSettings), Error> {
    let identical = spec.len() == 3 && spec.charge(0) == spec.charge(1) && spec.mass(0) == spec.mass(1);
    let mut sols = Vec::new();
    let mut last_err = Error::NoSolution("empty grid");
    if identical {
        // sweep the pair separation upward from the smallest allowed one
        let lo = config_i_rho_min(spec, spec.b).unwrap_or(1.0);
        let grid = opts.grid(GridSettings { v_min: lo, v_max: 2.0 * lo, points: 5, v1_points_per_decade: 40 });
        grid.validate()?;
        for rho in grid.values() {
            match solve_config_i_identical(spec, rho, opts.v3) {
                Ok(s) => sols.extend(s),
                Err(e) => last_err = as_no_solution(e),
            }
        }
        return merge_solutions(sols, "no admissible separation on the grid")
            .map(|s| (s, grid))
            .map_err(|e| if let Error::NoSolution(_) = last_err { last_err } else { e });
    }
    let grid = opts.grid(GridSettings { v_min: 1.0, v_max: 1.0, points: 1, v1_points_per_decade: 40 });
    grid.validate()?;
    for v1 in grid.values() {
        match solve_config_i_v3zero(spec, v1) {
            Ok(s) => sols.push(s),
            Err(e) => last_err = as_no_solution(e),
        }
    }
    if sols.is_empty() {
        return Err(last_err);
    }
    Ok((merge_solutions(sols, "")?, grid))
}

/// Adds closed-form families to a grid result; `NoSolution` from either
/// side alone is not an error.
fn with_extras(grid: Result<Vec<ConfigSolution>, Error>, extras: Vec<ConfigSolution>) -> Result<Vec<ConfigSolution>, Error> {
    match grid {
        Ok(mut s) => {
            s.extend(extras);
            merge_solutions(s, "")
        }
        Err(Error::NoSolution(m)) => merge_solutions(extras, m),
        Err(e) => Err(e),
    }
}

pub fn find(opts: &FindOptions, out: &mut dyn Write) -> CliResult {
    let start = Instant::now();
    let file = load_system(&opts.system)?;
    let spec = &file.spec;
    let (sols, grid, note) = match opts.config {
        FindConfig::I => {
            let (s, g) = find_config_i(spec, opts)?;
            (s, g, String::new())
        }
        FindConfig::II => {
            let g = opts.grid(GridSettings::config_ii());
            let mut extras = solve_config_ii_composite(spec).unwrap_or_default();
            if helium_parameters(spec).is_some() {
                let lambda = helium_lambda();
                for v3 in g.values().into_iter().filter(|v| *v >= lambda) {
                    extras.extend(solve_helium(spec, v3).unwrap_or_default());
                }
            }
            (with_extras(parallel::find_config_ii(spec, &g), extras)?, g, String::new())
        }
        FindConfig::III => {
            let g = opts.grid(GridSettings::config_iii());
            let extras = solve_config_iii_composite(spec).unwrap_or_default();
            (with_extras(parallel::find_config_iii(spec, &g), extras)?, g, String::new())
        }
        FindConfig::NbodyII => {
            let g = opts.grid(GridSettings { v_min: 1.5, v_max: 20.0, points: 10, v1_points_per_decade: 40 });
            let s = parallel::find_nbody_ii(spec, &g)?;
            let note = format!("newton seeds {} stalled {}", s.seeds, s.stalled);
            (s.solutions, g, note)
        }
    };

    create_dir(&opts.out_dir)?;
    let cpath = opts.out_dir.join("catalog.csv");
    write_file(&cpath, |b| write_catalog_csv(b, &sols))?;
    let mut m = RunManifest::new("find");
    m.input(&opts.system);
    m.set("config", format!("{:?}", opts.config));
    m.set("grid_min", grid.v_min);
    m.set("grid_max", grid.v_max);
    m.set("grid_points", grid.points);
    m.set("v1_points_per_decade", grid.v1_points_per_decade);
    if let Some(v3) = opts.v3 {
        m.set("v3", v3);
    }
    if let Some(n) = parallel::thread_cap() {
        m.set("threads", n);
    }
    m.output(&cpath);
    if let Some(dir) = &opts.emit_states {
        create_dir(dir)?;
        for (k, s) in sols.iter().enumerate() {
            let path = dir.join(format!("{}-{:03}.sys", s.config.as_str(), k + 1));
            let sys = s.system(spec);
            let st = build_initial_state(s, &sys);
            let comments = vec![
                format!("config {} branch {}", s.config.as_str(), if s.branch.is_empty() { "-" } else { &s.branch }),
                format!("omega {} period {}", format_float(s.omega), format_float(s.period())),
                format!("residual_norm {}", format_float(s.residual_norm)),
            ];
            let text = format_system(&sys, Some(&st), &comments);
            fs::write(&path, text).map_err(|err| CliError::Io { path: path.clone(), err })?;
            m.output(&path);
        }
    }
    m.write(&opts.out_dir, start.elapsed())
        .map_err(|err| CliError::Io { path: opts.out_dir.clone(), err })?;
    report(out, format_args!("{} certified solution(s) -> {}", sols.len(), cpath.display()))?;
    if !note.is_empty() {
        report(out, note)?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub system: PathBuf,
    pub trajectory: PathBuf,
    /// Configuration tag; adds rigidity and the configuration's particular
    /// constants to the checks. `I` picks the variant from the data.
    pub config: Option<String>,
    pub tol: f64,
}

/// Columns checked for each configuration on top of the integrals.
pub fn particular_set(tag: ConfigTag, n: usize) -> Vec<String> {
    match tag {
        ConfigTag::IV3Zero => ["l3", "T1", "T2", "I"].map(String::from).to_vec(),
        ConfigTag::IV3Nonzero => ["l3", "T3", "k3x", "I"].map(String::from).to_vec(),
        ConfigTag::II | ConfigTag::IIIa => {
            let mut v: Vec<String> = (1..=3).map(|i| format!("l{i}")).collect();
            v.extend((1..=3).map(|i| format!("T{i}")));
            v.push("I".into());
            v
        }
        ConfigTag::NbodyII => {
            let mut v: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
            v.extend((1..=n).map(|i| format!("T{i}")));
            v
        }
    }
}

fn resolve_tag(name: &str, first: &PhaseState) -> Option<ConfigTag> {
    match name {
        "I" => Some(if first.velocities.get(2).is_some_and(|v| v.norm() > 0.0) {
            ConfigTag::IV3Nonzero
        } else {
            ConfigTag::IV3Zero
        }),
        "III" => Some(ConfigTag::IIIa),
        other => ConfigTag::parse(other),
    }
}

pub fn verify(opts: &VerifyOptions, out: &mut dyn Write) -> CliResult {
    let file = load_system(&opts.system)?;
    let spec = &file.spec;
    let traj = parse_trajectory_csv(&read(&opts.trajectory)?, spec.len())
        .map_err(|err| CliError::Parse { path: opts.trajectory.clone(), err })?;
    let inv = InvariantReport::from_trajectory(spec, &traj)?;
    let mut failures = 0;
    let mut check = |out: &mut dyn Write, name: &str, value: f64, extra: String| -> CliResult {
        let ok = value <= opts.tol;
        if !ok {
            failures += 1;
        }
        report(out, format_args!("{} {name} {}{extra}", if ok { "PASS" } else { "FAIL" }, format_float(value)))
    };
    let drift_line = |d: &magnetotrio_core::invariants::Drift| format!(" (initial {})", format_float(d.initial));
    for name in ["H", "Kx", "Ky", "Lz", "Casimir"] {
        if let Some(d) = inv.drift(name) {
            check(out, name, d.scaled(), drift_line(&d))?;
        }
    }
    if let Some(name) = &opts.config {
        let first = traj.first().expect("parser rejects empty trajectories");
        let tag = resolve_tag(name, first).ok_or_else(|| CliError::Parse {
            path: opts.system.clone(),
            err: ParseError { line: 0, message: format!("unknown configuration `{name}`") },
        })?;
        check(out, "rigidity", rigidity_report(&traj)?.max(), String::new())?;
        for col in particular_set(tag, spec.len()) {
            match inv.drift(&col) {
                Some(d) => check(out, &col, d.scaled(), drift_line(&d))?,
                None => report(out, format_args!("SKIP {col} undefined for this system"))?,
            }
        }
    }
    if failures > 0 {
        return Err(CliError::Failed(format!("{failures} check(s) above tolerance {}", format_float(opts.tol))));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct BracketOptions {
    pub system: PathBuf,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Seeded canonical points: positions in `[−2, 2]²`, momenta in `[−1, 1]²`,
/// every pair at least 0.3 apart.
pub fn random_canonical_states(spec: &SystemSpec, samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.len();
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let q: Vec<PlanarVector> =
            (0..n).map(|_| PlanarVector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let p: Vec<PlanarVector> =
            (0..n).map(|_| PlanarVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let st = PhaseState::from_canonical(spec, 0.0, q, &p);
        if st.min_separation().is_some_and(|(_, _, d)| d < 0.3) {
            continue;
        }
        out.push(canonical_coordinates(spec, &st));
    }
    out
}

/// The bracket identities checked, with their predicted value at `z`.
pub fn bracket_identities(spec: &SystemSpec, z: &[f64]) -> Vec<(&'static str, Quantity, Quantity, f64)> {
    let kx = Quantity::Kx.eval(spec, z);
    let ky = Quantity::Ky.eval(spec, z);
    let qb = spec.total_charge() * spec.b;
    vec![
        ("{Kx,Ky}", Quantity::Kx, Quantity::Ky, -qb),
        ("{Lz,Kx}", Quantity::Lz, Quantity::Kx, ky),
        ("{Lz,Ky}", Quantity::Lz, Quantity::Ky, -kx),
        ("{H,Kx}", Quantity::H, Quantity::Kx, 0.0),
        ("{H,Ky}", Quantity::H, Quantity::Ky, 0.0),
        ("{H,Lz}", Quantity::H, Quantity::Lz, 0.0),
    ]
}

/// Largest deviation per identity, scaled by `max(1, |prediction|)`.
pub fn bracket_deviations(spec: &SystemSpec, states: &[Vec<f64>]) -> Result<Vec<(&'static str, f64)>, Error> {
    let mut worst: Vec<(&'static str, f64)> = Vec::new();
    for z in states {
        for (k, (name, a, b, want)) in bracket_identities(spec, z).into_iter().enumerate() {
            let got = quantity_bracket(spec, a, b, z)?;
            let dev = (got - want).abs() / want.abs().max(1.0);
            if worst.len() <= k {
                worst.push((name, dev));
            } else {
                worst[k].1 = worst[k].1.max(dev);
            }
        }
    }
    Ok(worst)
}

pub fn brackets(opts: &BracketOptions, out: &mut dyn Write) -> CliResult {
    let file = load_system(&opts.system)?;
    let spec = &file.spec;
    let states = random_canonical_states(spec, opts.samples, opts.seed);
    let worst = bracket_deviations(spec, &states)?;
    report(out, format_args!("samples {} seed {} -QB {}", opts.samples, opts.seed, format_float(-spec.total_charge() * spec.b + 0.0)))?;
    let mut failures = 0;
    for (name, dev) in &worst {
        let ok = *dev <= opts.tol;
        failures += usize::from(!ok);
        report(out, format_args!("{} {name} max deviation {}", if ok { "PASS" } else { "FAIL" }, format_float(*dev)))?;
    }
    if failures > 0 {
        return Err(CliError::Failed(format!("{failures} bracket identity(ies) above tolerance")));
    }
    Ok(())
}

/// Whole trajectory from a solution, for library users and tests.
pub fn simulate_solution(spec: &SystemSpec, sol: &ConfigSolution, settings: &IntegratorSettings) -> Result<Trajectory, Error> {
    let sys = sol.system(spec);
    integrate(&sys, &build_initial_state(sol, &sys), settings)
}
