use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Below this modulus the argument is shifted upward before Stirling.
const SHIFT_THRESHOLD: f64 = 10.0;

/// B_{2k} / (2k(2k-1)), k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const HALF_LN_TAU: f64 = 0.918_938_533_204_672_8;

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TAU + series
}

/// Principal logarithm of sin(πz), stable for large |Im z|.
pub fn log_sin_pi(z: Complex64) -> Complex64 {
    // sin(π(z - 2n)) = sin(πz)
    let x = z.re - 2.0 * (z.re / 2.0).round();
    let w = Complex64::new(x, z.im);
    let i = Complex64::i();
    let v = if w.im.abs() < 15.0 {
        return (w * PI).sin().ln();
    } else if w.im > 0.0 {
        let e = (i * 2.0 * PI * w).exp();
        -i * PI * w + ((e - 1.0) / (2.0 * i)).ln()
    } else {
        let e = (-i * 2.0 * PI * w).exp();
        i * PI * w + ((1.0 - e) / (2.0 * i)).ln()
    };
    Complex64::new(v.re, crate::ext::wrap_phase(v.im))
}

/// Log-gamma on the branch that is continuous off the negative real axis
/// (the branch satisfying `ln Γ(z+1) = ln z + ln Γ(z)`).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole {
            function: "log_gamma",
            at: z,
        });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            function: "log_gamma",
            at: z,
            reason: "non-finite argument".into(),
        });
    }
    if z.re < 0.0 {
        // ln Γ(z) = ln π - ln sin(πz) - ln Γ(1-z), with the 2πi correction
        // that keeps the result on the continuous branch.
        let turn = (0.5 * z.re + 0.25).floor() * (2.0 * PI).copysign(z.im);
        let reflected = log_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), turn) - log_sin_pi(z) - reflected);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < SHIFT_THRESHOLD {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}
