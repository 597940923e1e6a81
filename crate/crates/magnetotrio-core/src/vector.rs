use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A vector in the plane of motion.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PlanarVector {
    pub x: f64,
    pub y: f64,
}

impl PlanarVector {
    pub const ZERO: PlanarVector = PlanarVector { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        PlanarVector { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of `self × o`.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    /// `self × (B ẑ)` projected on the plane.
    pub fn cross_with_b(self, b: f64) -> Self {
        cross_with_b(self, b)
    }
}

/// `v × (B ẑ) = (v.y B, −v.x B)`.
pub fn cross_with_b(v: PlanarVector, b: f64) -> PlanarVector {
    PlanarVector::new(v.y * b, -v.x * b)
}

impl Add for PlanarVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PlanarVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanarVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        PlanarVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanarVector {
    type Output = Self;
    fn neg(self) -> Self {
        PlanarVector::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanarVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        PlanarVector::new(self.x * s, self.y * s)
    }
}

impl Mul<PlanarVector> for f64 {
    type Output = PlanarVector;
    fn mul(self, v: PlanarVector) -> PlanarVector {
        v * self
    }
}

impl Div<f64> for PlanarVector {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        PlanarVector::new(self.x / s, self.y / s)
    }
}

impl AddAssign for PlanarVector {
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl SubAssign for PlanarVector {
    fn sub_assign(&mut self, o: Self) {
        self.x -= o.x;
        self.y -= o.y;
    }
}
