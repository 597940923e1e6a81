//! Minimal real-number abstraction so the Jacobi Hamiltonian can be
//! evaluated on plain floats and on forward-mode dual numbers.

use core::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Self;
    fn value(self) -> f64;
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }
    fn value(self) -> f64 {
        self
    }
}

/// `v + d ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub const fn new(v: f64, d: f64) -> Self {
        Dual { v, d }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

impl Real for Dual {
    fn cst(v: f64) -> Self {
        Dual::new(v, 0.0)
    }
    fn sqrt(self) -> Self {
        let s = libm::sqrt(self.v);
        Dual::new(s, self.d / (2.0 * s))
    }
    fn value(self) -> f64 {
        self.v
    }
}

/// Gradient of `f` at `x` by one dual pass per coordinate.
pub fn gradient<F>(x: &[f64], f: F, out: &mut [f64])
where
    F: Fn(&[Dual]) -> Dual,
{
    let mut xs: alloc::vec::Vec<Dual> = x.iter().map(|&v| Dual::cst(v)).collect();
    for k in 0..x.len() {
        xs[k].d = 1.0;
        out[k] = f(&xs).d;
        xs[k].d = 0.0;
    }
}
