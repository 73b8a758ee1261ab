//! Complex numbers in extended-exponent form.
//!
//! The expansion multiplies factors such as χ(s) and η^{s-1}e^{-πiη²} whose
//! moduli are far outside the binary64 range, even when their product is an
//! ordinary number. [`ExtComplex`] keeps a normalized complex mantissa and a
//! separate binary exponent, so products and quotients never overflow and
//! sums align on the larger operand. The public view is the pair
//! (`log_modulus`, `phase`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

const LN2_HI: f64 = 6.931_471_803_691_238_2e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

/// `z = mantissa · 2^exponent` with `max(|re|, |im|)` of the mantissa in [0.5, 1).
/// The zero value has a zero mantissa.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "LogPolar", from = "LogPolar")]
pub struct ExtComplex {
    mantissa: Complex64,
    exponent: i64,
}

/// Serialized form; `log_modulus` is `None` for zero.
#[derive(Serialize, Deserialize)]
struct LogPolar {
    log_modulus: Option<f64>,
    phase: f64,
}

impl From<ExtComplex> for LogPolar {
    fn from(z: ExtComplex) -> Self {
        LogPolar {
            log_modulus: (!z.is_zero()).then(|| z.log_modulus()),
            phase: z.phase(),
        }
    }
}

impl From<LogPolar> for ExtComplex {
    fn from(p: LogPolar) -> Self {
        match p.log_modulus {
            Some(l) => ExtComplex::new(l, p.phase),
            None => ExtComplex::ZERO,
        }
    }
}

/// Reduce an angle into (-π, π].
pub fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase % TAU;
    if p <= -PI {
        p += TAU;
    } else if p > PI {
        p -= TAU;
    }
    p
}

/// x · 2^k without intermediate overflow or premature underflow.
fn ldexp(x: f64, k: i64) -> f64 {
    let mut x = x;
    let mut k = k.clamp(-2200, 2200) as i32;
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k)
}

/// Exponent k with |x| = f·2^k, f in [0.5, 1); x finite and nonzero.
fn frexp_exponent(x: f64) -> i64 {
    let bits = x.abs().to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        // subnormal
        return frexp_exponent(x * 2f64.powi(64)) - 64;
    }
    biased - 1022
}

impl ExtComplex {
    pub const ZERO: Self = Self {
        mantissa: Complex64::new(0.0, 0.0),
        exponent: 0,
    };
    pub const ONE: Self = Self {
        mantissa: Complex64::new(0.5, 0.0),
        exponent: 1,
    };

    fn normalized(m: Complex64, exponent: i64) -> Self {
        if m.re == 0.0 && m.im == 0.0 {
            return Self::ZERO;
        }
        let top = m.re.abs().max(m.im.abs());
        if !top.is_finite() {
            // |m| overflowed: halve and retry
            let half = Complex64::new(m.re * 0.5, m.im * 0.5);
            if half.re.is_finite() && half.im.is_finite() {
                return Self::normalized(half, exponent + 1);
            }
            panic!("non-finite mantissa in ExtComplex");
        }
        let k = frexp_exponent(top);
        Self {
            mantissa: Complex64::new(ldexp(m.re, -k), ldexp(m.im, -k)),
            exponent: exponent + k,
        }
    }

    /// `exp(log_modulus + i·phase)`; `log_modulus = -inf` gives zero.
    pub fn new(log_modulus: f64, phase: f64) -> Self {
        Self::exp(Complex64::new(log_modulus, phase))
    }

    /// `exp(w)` for a complex exponent `w`.
    pub fn exp(w: Complex64) -> Self {
        if w.re == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let k = (w.re / LN_2).round();
        let r = (w.re - k * LN2_HI) - k * LN2_LO;
        let m = Complex64::from_polar(r.exp(), w.im);
        Self::normalized(m, k as i64)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::normalized(z, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn log_modulus(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().ln() + self.exponent as f64 * LN_2
    }

    /// Argument in (-π, π]; 0 for zero.
    pub fn phase(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.mantissa.im.atan2(self.mantissa.re)
    }

    /// Principal logarithm; `-inf` real part for zero.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_modulus(), self.phase())
    }

    pub fn log10_abs(&self) -> f64 {
        self.log_modulus() / std::f64::consts::LN_10
    }

    /// Modulus as an ordinary float (may overflow to `inf` or underflow to 0).
    pub fn abs(&self) -> f64 {
        ldexp(self.mantissa.norm(), self.exponent)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            ldexp(self.mantissa.re, self.exponent),
            ldexp(self.mantissa.im, self.exponent),
        )
    }

    /// `z · e^{-log_ref}` as an ordinary complex number.
    pub fn scaled(&self, log_ref: f64) -> Complex64 {
        (*self * Self::exp(Complex64::new(-log_ref, 0.0))).to_complex()
    }

    pub fn conj(&self) -> Self {
        Self {
            mantissa: self.mantissa.conj(),
            exponent: self.exponent,
        }
    }

    pub fn recip(&self) -> Self {
        if self.is_zero() {
            panic!("reciprocal of zero ExtComplex");
        }
        Self::normalized(self.mantissa.inv(), -self.exponent)
    }

    pub fn mul_real(&self, x: f64) -> Self {
        *self * Self::from_real(x)
    }

    /// Relative distance `|a - b| / max(|a|, |b|)`.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let diff = *self - *other;
        let top = if self.exponent >= other.exponent && !self.is_zero() || other.is_zero() {
            *self
        } else {
            *other
        };
        (diff.abs_ext() / top.abs_ext()).to_complex().re
    }

    fn abs_ext(&self) -> Self {
        Self::normalized(Complex64::new(self.mantissa.norm(), 0.0), self.exponent)
    }

    pub fn sum<I: IntoIterator<Item = ExtComplex>>(items: I) -> Self {
        let items: Vec<ExtComplex> = items.into_iter().filter(|z| !z.is_zero()).collect();
        let Some(top) = items.iter().map(|z| z.exponent).max() else {
            return Self::ZERO;
        };
        let acc: Complex64 = items
            .iter()
            .map(|z| {
                let shift = z.exponent - top;
                Complex64::new(ldexp(z.mantissa.re, shift), ldexp(z.mantissa.im, shift))
            })
            .sum();
        Self::normalized(acc, top)
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl Mul for ExtComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for ExtComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl Neg for ExtComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Add for ExtComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::sum([self, rhs])
    }
}

impl Sub for ExtComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}
