//! Dense Gaussian elimination for the handful of small systems the
//! solvers need (at most a few dozen unknowns).

use alloc::vec::Vec;

use crate::{Error, Result};

/// Solves `a x = b` in place; `a` is row-major `n × n`.
pub fn solve(a: &mut [f64], b: &mut [f64]) -> Result<()> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let scale = a.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    for c in 0..n {
        let mut piv = c;
        for r in c + 1..n {
            if libm::fabs(a[r * n + c]) > libm::fabs(a[piv * n + c]) {
                piv = r;
            }
        }
        if !(libm::fabs(a[piv * n + c]) > 1e-300 + 1e-15 * scale) {
            return Err(Error::Degenerate("singular linear system"));
        }
        if piv != c {
            for k in 0..n {
                a.swap(c * n + k, piv * n + k);
            }
            b.swap(c, piv);
        }
        for r in c + 1..n {
            let f = a[r * n + c] / a[c * n + c];
            if f != 0.0 {
                for k in c..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    for c in (0..n).rev() {
        let mut acc = b[c];
        for k in c + 1..n {
            acc -= a[c * n + k] * b[k];
        }
        b[c] = acc / a[c * n + c];
    }
    Ok(())
}

pub fn mat_vec(a: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..a.len() / n).map(|r| (0..n).map(|k| a[r * n + k] * x[k]).sum()).collect()
}
