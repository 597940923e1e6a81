use core::fmt;

/// Failure classes shared by every module.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Two particles closer than the separation threshold.
    Collision { i: usize, j: usize, separation: f64 },
    /// The step controller asked for a step below `min_step`.
    StepUnderflow { t: f64, step: f64 },
    /// Richardson estimate and half-step estimate disagree.
    NumericalInstability { coarse: f64, extrapolated: f64 },
    /// Arguments outside the domain of a formula.
    Domain(&'static str),
    /// A solution was produced but violates a physical requirement.
    Validity(&'static str),
    /// The requested branch degenerates for this system.
    Degenerate(&'static str),
    NoSolution(&'static str),
    NonConvergence(&'static str),
    InvalidSpec(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Collision { i, j, separation } => write!(
                f,
                "collision between particles {} and {} (separation {:e})",
                i + 1,
                j + 1,
                separation
            ),
            Error::StepUnderflow { t, step } => {
                write!(f, "step underflow at t={} (step {:e})", t, step)
            }
            Error::NumericalInstability { coarse, extrapolated } => write!(
                f,
                "finite differences unstable: {} vs extrapolated {}",
                coarse, extrapolated
            ),
            Error::Domain(m) => write!(f, "domain error: {}", m),
            Error::Validity(m) => write!(f, "invalid solution: {}", m),
            Error::Degenerate(m) => write!(f, "degenerate case: {}", m),
            Error::NoSolution(m) => write!(f, "no solution: {}", m),
            Error::NonConvergence(m) => write!(f, "no convergence: {}", m),
            Error::InvalidSpec(m) => write!(f, "invalid system: {}", m),
        }
    }
}

impl core::error::Error for Error {}
