//! Text formats: system files, trajectory/invariant CSV, solution catalogs.

use std::fmt;
use std::io::{self, Write};

use magnetotrio_core::dynamics::Trajectory;
use magnetotrio_core::invariants::{invariant_columns, InvariantRow};
use magnetotrio_core::solvers::{ConfigSolution, ConfigTag};
use magnetotrio_core::{ParticleSpec, PhaseState, PlanarVector, SystemSpec};

/// A malformed input, with the 1-based line it was found on (0 when the
/// problem is not tied to a line).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        format!("{}", x)
    }
}

fn parse_real(tok: &str, line: usize, what: &str) -> Result<f64, ParseError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| ParseError::new(line, format!("cannot read {what} from `{tok}`")))?;
    if !v.is_finite() {
        return Err(ParseError::new(line, format!("{what} must be finite")));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
struct ParticleEntry {
    line: usize,
    spec: ParticleSpec,
    position: Option<PlanarVector>,
    velocity: Option<PlanarVector>,
}

/// Parsed system file. Positions and velocities are optional per particle.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub spec: SystemSpec,
    entries: Vec<ParticleEntry>,
}

impl SystemFile {
    pub fn has_state(&self) -> bool {
        self.entries.iter().all(|e| e.position.is_some() && e.velocity.is_some())
    }

    /// The `t = 0` state; every particle needs a position and a velocity.
    pub fn initial_state(&self) -> Result<PhaseState, ParseError> {
        let mut q = Vec::new();
        let mut v = Vec::new();
        for (k, e) in self.entries.iter().enumerate() {
            let missing = |what: &str| ParseError::new(e.line, format!("particle {} has no {what}", k + 1));
            q.push(e.position.ok_or_else(|| missing("position"))?);
            v.push(e.velocity.ok_or_else(|| missing("velocity"))?);
        }
        Ok(PhaseState::new(0.0, q, v))
    }
}

/// Reads `B <real>`, `particle <charge> <mass>` and the optional
/// `position`/`velocity` lines that follow a particle. `#` starts a comment.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut b: Option<f64> = None;
    let mut entries: Vec<ParticleEntry> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let args = |n: usize| -> Result<(), ParseError> {
            if toks.len() == n + 1 {
                Ok(())
            } else {
                Err(ParseError::new(line, format!("`{}` takes {n} value(s), found {}", toks[0], toks.len() - 1)))
            }
        };
        match toks[0] {
            "B" => {
                args(1)?;
                if b.is_some() {
                    return Err(ParseError::new(line, "field given twice"));
                }
                b = Some(parse_real(toks[1], line, "field")?);
            }
            "particle" => {
                args(2)?;
                let charge = parse_real(toks[1], line, "charge")?;
                let mass = parse_real(toks[2], line, "mass")?;
                if mass <= 0.0 {
                    return Err(ParseError::new(line, "mass must be positive"));
                }
                entries.push(ParticleEntry {
                    line,
                    spec: ParticleSpec::new(charge, mass),
                    position: None,
                    velocity: None,
                });
            }
            kw @ ("position" | "velocity") => {
                args(2)?;
                let v = PlanarVector::new(parse_real(toks[1], line, "x")?, parse_real(toks[2], line, "y")?);
                let e = entries
                    .last_mut()
                    .ok_or_else(|| ParseError::new(line, format!("`{kw}` before any particle")))?;
                let slot = if kw == "position" { &mut e.position } else { &mut e.velocity };
                if slot.is_some() {
                    return Err(ParseError::new(line, format!("{kw} given twice for one particle")));
                }
                *slot = Some(v);
            }
            other => return Err(ParseError::new(line, format!("unknown keyword `{other}`"))),
        }
    }
    let b = b.ok_or_else(|| ParseError::new(0, "missing `B` line"))?;
    if entries.is_empty() {
        return Err(ParseError::new(0, "no particles"));
    }
    let spec = SystemSpec::new(entries.iter().map(|e| e.spec).collect(), b)
        .map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(SystemFile { spec, entries })
}

/// Writes a system file; `state` adds position and velocity lines.
pub fn format_system(spec: &SystemSpec, state: Option<&PhaseState>, comments: &[String]) -> String {
    let mut s = String::new();
    for c in comments {
        s.push_str("# ");
        s.push_str(c);
        s.push('\n');
    }
    s.push_str(&format!("B {}\n", format_float(spec.b)));
    for (i, p) in spec.particles.iter().enumerate() {
        s.push_str(&format!("particle {} {}\n", format_float(p.charge), format_float(p.mass)));
        if let Some(st) = state {
            let (q, v) = (st.positions[i], st.velocities[i]);
            s.push_str(&format!("position {} {}\n", format_float(q.x), format_float(q.y)));
            s.push_str(&format!("velocity {} {}\n", format_float(v.x), format_float(v.y)));
        }
    }
    s
}

pub fn trajectory_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for i in 1..=n {
        h.extend([format!("x{i}"), format!("y{i}"), format!("vx{i}"), format!("vy{i}")]);
    }
    h
}

pub fn write_trajectory_csv<W: Write>(out: W, traj: &Trajectory) -> io::Result<()> {
    let n = traj.first().map_or(0, |s| s.len());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trajectory_header(n))?;
    for s in &traj.samples {
        let mut row = vec![format_float(s.t)];
        for (q, v) in s.positions.iter().zip(&s.velocities) {
            row.extend([q.x, q.y, v.x, v.y].map(format_float));
        }
        w.write_record(&row)?;
    }
    w.flush()
}

/// Reads a trajectory CSV; `n` fixes the expected particle count. Every
/// record must be newline-terminated, so a file cut mid-number is rejected.
pub fn parse_trajectory_csv(text: &str, n: usize) -> Result<Trajectory, ParseError> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(ParseError::new(text.lines().count(), "truncated record (missing line terminator)"));
    }
    let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut records = r.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(ParseError::new(1, e.to_string())),
        None => return Err(ParseError::new(0, "empty trajectory file")),
    };
    let want = trajectory_header(n);
    if header.iter().map(str::trim).ne(want.iter().map(String::as_str)) {
        return Err(ParseError::new(1, format!("header does not match a {n}-particle trajectory")));
    }
    let mut samples = Vec::new();
    for (k, rec) in records.enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| ParseError::new(line, e.to_string()))?;
        if rec.len() != want.len() {
            return Err(ParseError::new(line, format!("expected {} fields, found {}", want.len(), rec.len())));
        }
        let vals = rec
            .iter()
            .map(|t| parse_real(t.trim(), line, "value"))
            .collect::<Result<Vec<_>, _>>()?;
        let mut q = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let b = 1 + 4 * i;
            q.push(PlanarVector::new(vals[b], vals[b + 1]));
            v.push(PlanarVector::new(vals[b + 2], vals[b + 3]));
        }
        samples.push(PhaseState::new(vals[0], q, v));
    }
    if samples.is_empty() {
        return Err(ParseError::new(0, "trajectory has no samples"));
    }
    Ok(Trajectory { samples })
}

pub fn write_invariant_csv<W: Write>(out: W, rows: &[InvariantRow], n: usize) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(invariant_columns(n));
    w.write_record(&header)?;
    for r in rows {
        let mut row = vec![format_float(r.t)];
        row.extend(r.values().into_iter().map(format_float));
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn catalog_header(n: usize) -> Vec<String> {
    let mut h = vec!["config".to_string(), "branch".to_string()];
    h.extend((1..=n.max(3)).map(|i| format!("v{i}")));
    h.extend(["omega", "omega3", "B", "residual_norm"].map(String::from));
    h
}

/// Columns `config,branch,v1..vn,omega,omega3,B,residual_norm`; `omega3`
/// is empty outside Config I.
pub fn write_catalog_csv<W: Write>(out: W, sols: &[ConfigSolution]) -> io::Result<()> {
    let n = sols.iter().map(|s| s.v.len()).max().unwrap_or(3);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(catalog_header(n))?;
    for s in sols {
        let mut row = vec![s.config.as_str().to_string(), s.branch.clone()];
        row.extend(s.v.iter().copied().map(format_float));
        row.extend((s.v.len()..n.max(3)).map(|_| String::new()));
        row.push(format_float(s.omega));
        row.push(s.omega3.map(format_float).unwrap_or_default());
        row.push(format_float(s.b));
        row.push(format_float(s.residual_norm));
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn parse_catalog_csv(text: &str) -> Result<Vec<ConfigSolution>, ParseError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut records = r.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        _ => return Err(ParseError::new(0, "empty catalog")),
    };
    let nv = header.len().saturating_sub(6);
    if nv < 3 || header.iter().ne(catalog_header(nv).iter().map(String::as_str)) {
        return Err(ParseError::new(1, "not a solution catalog header"));
    }
    let mut out = Vec::new();
    for (k, rec) in records.enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| ParseError::new(line, e.to_string()))?;
        let config = ConfigTag::parse(&rec[0]).ok_or_else(|| ParseError::new(line, "unknown configuration tag"))?;
        let v = (0..nv)
            .map(|i| &rec[2 + i])
            .filter(|t| !t.is_empty())
            .map(|t| parse_real(t, line, "speed"))
            .collect::<Result<Vec<_>, _>>()?;
        let at = |i: usize, what: &str| parse_real(&rec[2 + nv + i], line, what);
        let omega3 = match &rec[3 + nv] {
            "" => None,
            t => Some(parse_real(t, line, "omega3")?),
        };
        let sol = ConfigSolution {
            config,
            branch: rec[1].to_string(),
            omega: at(0, "omega")?,
            omega3,
            b: at(2, "B")?,
            residual_norm: at(3, "residual_norm")?,
            kappa: None,
            v,
        };
        out.push(sol);
    }
    Ok(out)
}
