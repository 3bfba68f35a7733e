//! Second-order forward-mode derivatives.
//!
//! A [`Jet`] carries `(f, f', f'')` of a quantity with respect to the
//! physical coordinate x. Arithmetic applies the product, quotient and chain
//! rules, which is how the analytic x-derivatives of phi and of the
//! eigenfunctions are assembled from the z-derivatives of the polynomials.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet { v, d1, d2 }
    }

    pub const fn constant(c: f64) -> Self {
        Jet::new(c, 0.0, 0.0)
    }

    /// The independent variable itself.
    pub const fn var(x: f64) -> Self {
        Jet::new(x, 1.0, 0.0)
    }

    /// Apply a scalar function given its value and first two derivatives at `self.v`.
    pub fn compose(self, f: [f64; 3]) -> Self {
        Jet::new(
            f[0],
            f[1] * self.d1,
            f[2] * self.d1 * self.d1 + f[1] * self.d2,
        )
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.compose([r, -r * r, 2.0 * r * r * r])
    }

    pub fn powf(self, p: f64) -> Self {
        let v = self.v;
        let a = v.powf(p);
        self.compose([a, p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0)])
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose([e, e, e])
    }

    pub fn ln(self) -> Self {
        let r = 1.0 / self.v;
        self.compose([self.v.ln(), r, -r * r])
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose([s, c, -s])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose([c, -s, -c])
    }

    pub fn tan(self) -> Self {
        let t = self.v.tan();
        let sec2 = 1.0 + t * t;
        self.compose([t, sec2, 2.0 * t * sec2])
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.compose([s, c, s])
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.compose([c, s, c])
    }

    pub fn scale(self, c: f64) -> Self {
        Jet::new(self.v * c, self.d1 * c, self.d2 * c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet::new(self.v + c, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet::new(self.v - c, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, j: Jet) -> Jet {
        j.scale(self)
    }
}
