//! Extended-range complex numbers.
//!
//! A [`Scaled`] value stores `mantissa * exp(scale)` so that moduli such as
//! `exp(t^2)` at `t = 2^40` or `exp(-2 * 1024)` stay representable. Only the
//! logarithm of the modulus ever leaves this type in analysis code.

use num_complex::Complex64;

const RENORM_HI: f64 = 1e150;
const RENORM_LO: f64 = 1e-150;
// exp(-800) is far below f64::EPSILON relative to anything we add it to.
const NEGLIGIBLE_SCALE_GAP: f64 = -800.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mantissa: Complex64,
    scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: Complex64::new(0.0, 0.0),
        scale: 0.0,
    };

    pub fn from_complex(z: Complex64) -> Self {
        Scaled {
            mantissa: z,
            scale: 0.0,
        }
        .normalized()
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.re.is_finite() && self.mantissa.im.is_finite() && self.scale.is_finite()
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `ln |self|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.scale + self.mantissa.norm().ln()
        }
    }

    /// Collapse into an ordinary complex number. May over- or underflow.
    pub fn to_complex(&self) -> Complex64 {
        if self.scale == 0.0 {
            self.mantissa
        } else {
            self.mantissa * self.scale.exp()
        }
    }

    fn normalized(mut self) -> Self {
        let r = self.mantissa.norm();
        if r == 0.0 {
            return Scaled::ZERO;
        }
        if !(RENORM_LO..=RENORM_HI).contains(&r) && r.is_finite() {
            self.mantissa /= r;
            self.scale += r.ln();
        }
        self
    }

    pub fn neg(self) -> Self {
        Scaled {
            mantissa: -self.mantissa,
            scale: self.scale,
        }
    }

    pub fn add(self, other: Scaled) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.scale >= other.scale {
            (self, other)
        } else {
            (other, self)
        };
        let gap = small.scale - big.scale;
        let m = if gap == 0.0 {
            big.mantissa + small.mantissa
        } else if gap < NEGLIGIBLE_SCALE_GAP {
            big.mantissa
        } else {
            big.mantissa + small.mantissa * gap.exp()
        };
        Scaled {
            mantissa: m,
            scale: big.scale,
        }
        .normalized()
    }

    pub fn sub(self, other: Scaled) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Scaled) -> Self {
        if self.is_zero() || other.is_zero() {
            return Scaled::ZERO;
        }
        Scaled {
            mantissa: self.mantissa * other.mantissa,
            scale: self.scale + other.scale,
        }
        .normalized()
    }

    /// Division; the caller is responsible for rejecting a zero divisor.
    pub fn div(self, other: Scaled) -> Self {
        if self.is_zero() {
            return Scaled::ZERO;
        }
        Scaled {
            mantissa: self.mantissa / other.mantissa,
            scale: self.scale - other.scale,
        }
        .normalized()
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Scaled::from_real(1.0);
        }
        if self.is_zero() {
            return if n > 0 {
                Scaled::ZERO
            } else {
                Scaled {
                    mantissa: Complex64::new(f64::INFINITY, 0.0),
                    scale: 0.0,
                }
            };
        }
        if self.scale == 0.0 {
            let direct = self.mantissa.powi(n);
            let r = direct.norm();
            if r.is_finite() && r > 0.0 {
                return Scaled::from_complex(direct);
            }
        }
        // Keep the mantissa on the unit circle so m^n cannot overflow.
        let r = self.mantissa.norm();
        let unit = self.mantissa / r;
        Scaled {
            mantissa: unit.powi(n),
            scale: n as f64 * (self.scale + r.ln()),
        }
        .normalized()
    }

    pub fn exp(self) -> Self {
        let u = self.to_complex();
        Scaled {
            mantissa: Complex64::new(u.im.cos(), u.im.sin()),
            scale: u.re,
        }
    }
}
