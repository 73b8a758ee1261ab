//! The saddle-point expansion of R(s) around η = √((s-1)/(2πi)).
//!
//! With P = η^{s-1}e^{-πiη²} and an integer k ≥ m = ⌊η₁+η₂⌋,
//!
//! ```text
//! R(s) = χ(s)·P·{ D - T - S - Rem }
//!   D   = e^{πiη²} Σ_{n>k} (n/η)^{s-1}
//!   T   = (√2e^{3πi/8} sin πη - (-1)^k e^{2πiη - 2πi(η-k)²}) / (2cos 2πη)
//!   S   = Σ_{j=m+1}^{k} (-1)^{j-1} e^{-2πi(j-η)²} w(j-η)
//!   Rem = ∫_{m↘m+1} e^{-2πi(x-η)²} w(x-η) / (e^{πix} - e^{-πix}) dx
//! ```
//!
//! and equivalently R(s) = -χ·P·Q·(1 + U) with Q = √2e^{3πi/8} sin πη / (2cos 2πη).
//! Every factor is carried as an [`ExtComplex`]: for |η| in the hundreds the
//! individual pieces reach e^{±1500}.

use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use crate::oracle::saddle_eta;
use crate::quadrature::{default_half_length, line_quadrature_ext, LinePath, QuadratureResult};
use crate::special::{chi, hurwitz_tail, log_sin_pi};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, LN_2, PI, TAU};

/// Relative size of 1 + e^{±4πiη} below which cos 2πη counts as zero.
const POLE_GUARD: f64 = 1e-12;
/// Below this σ the tail Σ_{n>k} n^{s-1} is summed directly.
const DIRICHLET_SIGMA: f64 = -10.0;

/// Saddle coordinates attached to a point s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaFrame {
    pub s: Complex64,
    pub eta: Complex64,
    pub eta1: f64,
    pub eta2: f64,
    pub m: u64,
    pub arg_eta: f64,
}

impl EtaFrame {
    pub fn abs_eta(&self) -> f64 {
        self.eta.norm()
    }
}

/// Build the η-frame; requires 0 < arg(s-1) < 2π, i.e. s is not on [1, ∞).
pub fn eta_frame(s: Complex64) -> Result<EtaFrame> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain {
            function: "eta_frame",
            at: s,
            reason: "non-finite argument".into(),
        });
    }
    if s.im == 0.0 && s.re >= 1.0 {
        return Err(Error::Branch {
            at: s,
            reason: "arg(s-1) must lie in (0, 2pi); s is on [1, inf)".into(),
        });
    }
    let eta = saddle_eta(s);
    let sum = eta.re + eta.im;
    if sum < 0.0 {
        return Err(Error::Domain {
            function: "eta_frame",
            at: s,
            reason: format!("m = floor({sum}) is negative"),
        });
    }
    Ok(EtaFrame {
        s,
        eta,
        eta1: eta.re,
        eta2: eta.im,
        m: sum.floor() as u64,
        arg_eta: eta.im.atan2(eta.re),
    })
}

/// exp(z) - 1 without cancellation for small |z|.
fn expm1(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * z.im.cos() - 2.0 * half * half, z.re.exp() * z.im.sin())
}

/// log(1+u) - u + u²/2, by its power series near 0.
fn log_cubic(u: Complex64) -> Complex64 {
    if u.norm() < 0.1 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = u * u * u;
        for n in 3..60 {
            let term = pow / n as f64;
            acc += if n % 2 == 1 { term } else { -term };
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
            pow *= u;
        }
        acc
    } else {
        (u + 1.0).ln() - u + u * u * 0.5
    }
}

fn check_cut(z: Complex64, eta: Complex64) -> Result<Complex64> {
    let u = z / eta;
    let one_plus = u + 1.0;
    if one_plus.im == 0.0 && one_plus.re <= 0.0 {
        return Err(Error::Cut { arg: one_plus });
    }
    Ok(u)
}

/// Exponent 2πiη²(log(1+z/η) - z/η + (z/η)²/2) of w.
fn w_exponent(z: Complex64, eta: Complex64) -> Result<Complex64> {
    let u = check_cut(z, eta)?;
    Ok(Complex64::new(0.0, TAU) * eta * eta * log_cubic(u))
}

/// w(z) = exp{2πiη²(log(1+z/η) - z/η + (z/η)²/2)} - 1, principal log.
pub fn w_factor(z: Complex64, eta: Complex64) -> Result<Complex64> {
    Ok(expm1(w_exponent(z, eta)?))
}

/// w(z) in extended form, for arguments where the exponent is large.
pub fn w_factor_ext(z: Complex64, eta: Complex64) -> Result<ExtComplex> {
    let e = w_exponent(z, eta)?;
    if e.re < 1.0 {
        Ok(ExtComplex::from_complex(expm1(e)))
    } else {
        Ok(ExtComplex::exp(e) - ExtComplex::ONE)
    }
}

/// (sin πη, cos 2πη) in extended form. Errors if cos 2πη is within the guard of zero.
fn sin_cos(eta: Complex64) -> Result<(ExtComplex, ExtComplex)> {
    let i = Complex64::i();
    // factor out the dominant exponential so the bracket is O(1)
    let sigma = if eta.im >= 0.0 { 1.0 } else { -1.0 };
    // sin πη = ∓e^{∓iπη}(1 - e^{±2πiη})/(2i)
    let sin = ExtComplex::exp(-i * PI * eta * sigma)
        * ExtComplex::from_complex(expm1(i * TAU * eta * sigma) / (i * 2.0 * sigma));
    // cos 2πη = e^{∓2πiη}(1 + e^{±4πiη})/2
    let bracket = (i * 2.0 * TAU * eta * sigma).exp() + 1.0;
    if bracket.norm() < POLE_GUARD {
        return Err(Error::Pole {
            function: "trig_term (cos 2 pi eta)",
            at: eta,
        });
    }
    let cos = ExtComplex::exp(-i * TAU * eta * sigma) * ExtComplex::from_complex(bracket * 0.5);
    Ok((sin, cos))
}

/// √2·e^{3πi/8}.
fn q_const() -> ExtComplex {
    ExtComplex::new(0.5 * LN_2, 3.0 * FRAC_PI_8)
}

fn sign(k: u64) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// (-1)^k e^{2πiη - 2πi(η-k)²}.
fn boundary_term(eta: Complex64, k: u64) -> ExtComplex {
    let i = Complex64::i();
    let d = eta - k as f64;
    ExtComplex::exp(i * TAU * eta - i * TAU * d * d).mul_real(sign(k))
}

/// The explicitly integrable part
/// (√2e^{3πi/8} sin πη - (-1)^k e^{2πiη-2πi(η-k)²}) / (2cos 2πη).
pub fn trig_term(frame: &EtaFrame, k: u64) -> Result<ExtComplex> {
    let (sin, cos) = sin_cos(frame.eta)?;
    let num = q_const() * sin - boundary_term(frame.eta, k);
    Ok(num / cos.mul_real(2.0))
}

/// Individual terms (-1)^{j-1} e^{-2πi(j-η)²} w(j-η), j = m+1..=k.
pub fn correction_terms(frame: &EtaFrame, k: u64) -> Result<Vec<ExtComplex>> {
    let i = Complex64::i();
    ((frame.m + 1)..=k)
        .map(|j| {
            let z = Complex64::new(j as f64, 0.0) - frame.eta;
            let g = ExtComplex::exp(-i * TAU * z * z);
            Ok(g * w_factor_ext(z, frame.eta)?.mul_real(-sign(j)))
        })
        .collect()
}

/// Σ_{j=m+1}^{k} (-1)^{j-1} e^{-2πi(j-η)²} w(j-η); zero for k = m.
pub fn correction_sum(frame: &EtaFrame, k: u64) -> Result<ExtComplex> {
    Ok(ExtComplex::sum(correction_terms(frame, k)?))
}

/// The line m↘m+1 used for the remainder integral.
pub fn remainder_path(frame: &EtaFrame, tol: f64) -> Result<LinePath> {
    let crossing = frame.m as f64 + 0.5;
    let probe = LinePath::searrow(crossing, 1.0)?;
    LinePath::searrow(crossing, default_half_length(tol, probe.project(frame.eta)))
}

/// Integrand of the remainder at x, in extended form.
pub fn remainder_integrand(frame: &EtaFrame, x: Complex64) -> Result<ExtComplex> {
    let i = Complex64::i();
    let z = x - frame.eta;
    let w = w_factor_ext(z, frame.eta)?;
    let log_den = log_sin_pi(x) + Complex64::new(LN_2, FRAC_PI_2);
    Ok(ExtComplex::exp(-i * TAU * z * z - log_den) * w)
}

/// R = ∫_{m↘m+1} e^{-2πi(x-η)²} w(x-η) / (e^{πix} - e^{-πix}) dx.
/// The tolerance is relative to |R|.
pub fn remainder_r(frame: &EtaFrame, tol: f64) -> Result<QuadratureResult> {
    let path = remainder_path(frame, tol)?;
    // the path never meets the cut of w when σ < 1; surface it if it does
    let failure = std::cell::Cell::new(None);
    let result = line_quadrature_ext(
        &path,
        |x| match remainder_integrand(frame, x) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                ExtComplex::ZERO
            }
        },
        tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    result
}

/// η^{s-1} e^{-πiη²} with the principal log of η.
pub fn power_factor(frame: &EtaFrame) -> ExtComplex {
    let i = Complex64::i();
    let eta = frame.eta;
    ExtComplex::exp((frame.s - 1.0) * eta.ln() - i * PI * eta * eta)
}

/// Σ_{n≥start} n^{s-1} for σ < 0, summed termwise in extended form with an
/// Euler–Maclaurin remainder once the terms are negligible.
fn power_tail_direct(s: Complex64, start: u64, tol: f64) -> ExtComplex {
    let sm1 = s - 1.0;
    let term = |n: u64| ExtComplex::exp(sm1 * (n as f64).ln());
    let mut acc = ExtComplex::ZERO;
    let mut n = start.max(1);
    let cutoff = tol.min(1e-17);
    loop {
        let t = term(n);
        acc = acc + t;
        n += 1;
        // n^{σ-1} decays at least like n^{-11}; stop once the next term and
        // the integral of the rest are far below the partial sum
        let next = term(n);
        let rest_ratio = (n as f64) / (-s.re).max(1.0) + 1.0;
        if next.log_modulus() + rest_ratio.ln() < acc.log_modulus() + cutoff.ln() || n - start > 1_000_000 {
            break;
        }
    }
    // Σ_{j≥n} j^{s-1} ≈ -n^s/s + n^{s-1}/2 - (s-1)n^{s-2}/12
    let nf = n as f64;
    let base = term(n);
    let em = base * ExtComplex::from_complex(-nf / s + 0.5 - (s - 1.0) / (12.0 * nf));
    acc + em
}

/// D = e^{πiη²} Σ_{n>k} (n/η)^{s-1} = (Σ_{n>k} n^{s-1}) / P.
pub fn dirichlet_tail(frame: &EtaFrame, k: u64, tol: f64) -> Result<ExtComplex> {
    let s = frame.s;
    let tail = if s.re <= DIRICHLET_SIGMA {
        power_tail_direct(s, k + 1, tol)
    } else {
        ExtComplex::from_complex(hurwitz_tail(Complex64::new(1.0, 0.0) - s, k + 1)?)
    };
    Ok(tail / power_factor(frame))
}

/// Every term of the expansion at (s, k), with U and the assembled R(s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionBreakdown {
    pub frame: EtaFrame,
    pub k: u64,
    pub chi_factor: ExtComplex,
    /// η^{s-1} e^{-πiη²}
    pub power_factor: ExtComplex,
    pub trig_term: ExtComplex,
    pub correction_sum: ExtComplex,
    pub remainder: QuadratureResult,
    pub dirichlet_tail: ExtComplex,
    pub u_value: Complex64,
    pub r_value: ExtComplex,
}

impl ExpansionBreakdown {
    /// -χ·P·Q·(1+U), which must reproduce `r_value`.
    pub fn r_from_u(&self) -> Result<ExtComplex> {
        let (sin, cos) = sin_cos(self.frame.eta)?;
        let q = q_const() * sin / cos.mul_real(2.0);
        Ok(-(self.chi_factor * self.power_factor * q) * ExtComplex::from_complex(self.u_value + 1.0))
    }
}

/// Assemble the expansion at s with summation index k ≥ m. Requires σ < 1.
pub fn assemble(s: Complex64, k: u64, tol: f64) -> Result<ExpansionBreakdown> {
    if !(s.re < 1.0) {
        return Err(Error::Domain {
            function: "assemble",
            at: s,
            reason: "the expansion is evaluated for sigma < 1 only".into(),
        });
    }
    let frame = eta_frame(s)?;
    if k < frame.m {
        return Err(Error::Precondition(format!("k = {k} must be at least m = {}", frame.m)));
    }
    let tol = if tol > 0.0 { tol } else { crate::special::DEFAULT_TOL };
    let chi_factor = chi(s)?;
    let p = power_factor(&frame);
    let (sin, cos) = sin_cos(frame.eta)?;
    let q_sin = q_const() * sin;
    if q_sin.is_zero() {
        return Err(Error::Pole {
            function: "U (sin pi eta)",
            at: frame.eta,
        });
    }
    let two_cos = cos.mul_real(2.0);
    let boundary = boundary_term(frame.eta, k);
    let t = (q_sin - boundary) / two_cos;
    let corr = correction_sum(&frame, k)?;
    let rem = remainder_r(&frame, tol)?;
    let d = dirichlet_tail(&frame, k, tol)?;

    let bracket = ExtComplex::sum([d, -t, -corr, -rem.ext()]);
    let r_value = chi_factor * p * bracket;
    let u = (two_cos / q_sin) * ExtComplex::sum([-d, corr, rem.ext()]) - boundary / q_sin;

    Ok(ExpansionBreakdown {
        frame,
        k,
        chi_factor,
        power_factor: p,
        trig_term: t,
        correction_sum: corr,
        remainder: rem,
        dirichlet_tail: d,
        u_value: u.to_complex(),
        r_value,
    })
}

/// (e^{-πi/8}/√2)·χ(s)·η^{s-1}·e^{πi(η-η²)}.
pub fn leading_term(s: Complex64) -> Result<ExtComplex> {
    let frame = eta_frame(s)?;
    let chi_factor = chi(s)?;
    let i = Complex64::i();
    let c = ExtComplex::new(-0.5 * LN_2, -FRAC_PI_8);
    Ok(c * chi_factor * power_factor(&frame) * ExtComplex::exp(i * PI * frame.eta))
}

/// (1/√2)e^{7πi/8}e^{πiη}: the limit of the trig term as η₂ → ∞.
pub fn trig_term_limit(frame: &EtaFrame) -> ExtComplex {
    ExtComplex::new(-0.5 * LN_2, 7.0 * FRAC_PI_8) * ExtComplex::exp(Complex64::i() * PI * frame.eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::r_defining;
    use crate::quadrature::line_quadrature;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frame_examples() {
        let f = eta_frame(c(1.0 - 4.0 * PI, 0.0)).unwrap();
        assert!((f.eta - c(1.0, 1.0)).norm() < 1e-14);
        assert_eq!(f.m, 2);
        let f = eta_frame(c(1.0, -TAU)).unwrap();
        assert!((f.eta - c(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(f.m, 1);
        assert!((f.arg_eta - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn frame_by_radicals() {
        let s = c(-20000.0, 100.0);
        let f = eta_frame(s).unwrap();
        let a = 100.0 / TAU;
        let b = 20001.0 / TAU;
        let r = a.hypot(b);
        let eta1 = ((r + a) / 2.0).sqrt();
        let eta2 = b / (2.0 * eta1);
        assert!((f.eta1 - eta1).abs() < 1e-13 * eta1);
        assert!((f.eta2 - eta2).abs() < 1e-13 * eta2);
        assert!((f.eta1 * f.eta1 - f.eta2 * f.eta2 - a).abs() < 1e-12 * r);
        assert!((2.0 * f.eta1 * f.eta2 - b).abs() < 1e-12 * b);
    }

    #[test]
    fn frame_invariants_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let s = c(rng.gen_range(-1e5..1e3), rng.gen_range(-1e5..1e5));
            let f = eta_frame(s).unwrap();
            let sq = f.eta * f.eta;
            let target = (s - 1.0) / c(0.0, TAU);
            assert!((sq - target).norm() <= 1e-13 * target.norm());
            assert!(f.arg_eta > -PI / 4.0 && f.arg_eta <= 3.0 * PI / 4.0);
            assert_eq!(f.m, (f.eta1 + f.eta2).floor() as u64);
        }
    }

    #[test]
    fn frame_rejects_cut() {
        assert!(matches!(eta_frame(c(1.0, 0.0)), Err(Error::Branch { .. })));
        assert!(matches!(eta_frame(c(5.0, 0.0)), Err(Error::Branch { .. })));
        assert!(eta_frame(c(5.0, 1e-9)).is_ok());
    }

    #[test]
    fn w_basic() {
        assert_eq!(w_factor(c(0.0, 0.0), c(3.0, 2.0)).unwrap(), c(0.0, 0.0));
        // z = -η puts 1 + z/η at 0
        assert!(matches!(w_factor(c(-3.0, -2.0), c(3.0, 2.0)), Err(Error::Cut { .. })));
        assert!(matches!(w_factor(c(-6.0, -4.0), c(3.0, 2.0)), Err(Error::Cut { .. })));
    }

    #[test]
    fn w_matches_series_oracle() {
        let z = c(0.3, 0.1);
        let eta = c(5.0, 5.0);
        let u = z / eta;
        let mut series = c(0.0, 0.0);
        for n in 3..=30 {
            let term = u.powi(n) / n as f64;
            series += if n % 2 == 1 { term } else { -term };
        }
        let expect = (c(0.0, TAU) * eta * eta * series).exp() - 1.0;
        let got = w_factor(z, eta).unwrap();
        assert!((got - expect).norm() < 1e-13 * expect.norm(), "{got} {expect}");
        // same point through the direct logarithm branch (|u| > 0.1)
        let z = c(1.2, -0.7);
        let u = z / eta;
        let expect = (c(0.0, TAU) * eta * eta * ((u + 1.0).ln() - u + u * u / 2.0)).exp() - 1.0;
        assert!((w_factor(z, eta).unwrap() - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn w_restricted_bound() {
        let eta = c(6.0, 4.0);
        for i in 0..40 {
            let z = Complex64::from_polar(0.5 * eta.norm() * (i as f64 + 1.0) / 40.0, 0.37 * i as f64);
            let w = w_factor(z, eta).unwrap();
            let bound = (4.0 * PI / 3.0 * z.norm().powi(3) / eta.norm()).exp() - 1.0;
            assert!(w.norm() <= bound * (1.0 + 1e-12), "{z}");
        }
    }

    #[test]
    fn trig_term_pole() {
        let mut f = eta_frame(c(1.0 - 4.0 * PI, 0.0)).unwrap();
        f.eta = c(0.25, 0.0);
        assert!(matches!(trig_term(&f, 0), Err(Error::Pole { .. })));
    }

    #[test]
    fn trig_term_matches_quadrature() {
        let f = eta_frame(c(1.0 - 4.0 * PI, 0.0)).unwrap();
        let k = 2;
        let t = trig_term(&f, k).unwrap().to_complex();
        let path = LinePath::searrow(k as f64 + 0.5, 9.0).unwrap();
        let i = Complex64::i();
        let q = line_quadrature(
            &path,
            |x| (-i * TAU * (x - f.eta) * (x - f.eta)).exp() / ((x * PI).sin() * c(0.0, 2.0)),
            1e-14,
        )
        .unwrap();
        assert!((t - q.value).norm() < 1e-12 * t.norm(), "{t} vs {}", q.value);
    }

    #[test]
    fn trig_term_large_imaginary_part() {
        for eta2 in [10.0, 20.0, 40.0] {
            let eta = c(3.3, eta2);
            let s = c(0.0, TAU) * eta * eta + 1.0;
            let f = eta_frame(s).unwrap();
            let t = trig_term(&f, f.m).unwrap();
            let ratio = (t / trig_term_limit(&f)).to_complex();
            assert!((ratio - 1.0).norm() < 1e-12, "{eta2}: {ratio}");
        }
    }

    #[test]
    fn leading_term_is_trig_limit() {
        let eta = c(3.3, 40.0);
        let s = c(0.0, TAU) * eta * eta + 1.0;
        let f = eta_frame(s).unwrap();
        let via_trig = -(chi(s).unwrap() * power_factor(&f) * trig_term(&f, f.m).unwrap());
        let lead = leading_term(s).unwrap();
        assert!(via_trig.rel_diff(&lead) < 1e-6);
    }

    #[test]
    fn leading_term_vanishes_at_trivial_zero() {
        assert!(leading_term(c(-40000.0, 0.0)).unwrap().is_zero());
    }

    #[test]
    fn remainder_with_zero_w_vanishes() {
        let f = eta_frame(c(-30.0, 40.0)).unwrap();
        let path = remainder_path(&f, 1e-12).unwrap();
        let r = line_quadrature(&path, |_| c(0.0, 0.0), 1e-12).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
    }

    #[test]
    fn remainder_against_bound_at_forty_forty() {
        let eta = c(40.0, 40.0);
        let s = c(0.0, TAU) * eta * eta + 1.0;
        assert!((s - c(1.0 - 6400.0 * PI, 0.0)).norm() < 1e-9);
        let f = eta_frame(c(1.0 - 6400.0 * PI, 0.0)).unwrap();
        let r = remainder_r(&f, 1e-10).unwrap();
        let bound = 4.0 / eta.norm() + 15.0 * (-PI * eta.norm_sqr() / 32.0).exp() / eta.norm();
        assert!((bound - 0.070_710_678).abs() < 1e-8);
        assert!(r.ext().abs() <= bound);
    }

    #[test]
    fn generic_w_bound_on_path_nodes() {
        for s in [c(-30.0, 40.0), c(-500.0, -200.0), c(0.5, 80.0)] {
            let f = eta_frame(s).unwrap();
            let path = remainder_path(&f, 1e-12).unwrap();
            for j in 0..=200 {
                let v = -path.half_length + j as f64 * path.half_length / 100.0;
                let z = path.point(v) - f.eta;
                let w = w_factor_ext(z, f.eta).unwrap();
                assert!(w.log_modulus() <= 1.5 * PI * z.norm_sqr() + 1e-12, "{s} {v}");
            }
        }
    }

    #[test]
    fn correction_terms_dominated_by_w() {
        for s in [c(-30.0, 40.0), c(-800.0, 300.0), c(-2000.0, -500.0)] {
            let f = eta_frame(s).unwrap();
            let k = f.m + 6;
            let terms = correction_terms(&f, k).unwrap();
            for (idx, term) in terms.iter().enumerate() {
                let j = f.m + 1 + idx as u64;
                let w = w_factor_ext(c(j as f64, 0.0) - f.eta, f.eta).unwrap();
                assert!(term.log_modulus() <= w.log_modulus() + 1e-12);
            }
        }
    }

    #[test]
    fn assemble_matches_oracle_and_is_k_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..6 {
            let s = c(rng.gen_range(-60.0..-20.0), rng.gen_range(10.0..100.0));
            let base = assemble(s, eta_frame(s).unwrap().m, 1e-13).unwrap();
            let oracle = r_defining(s, 1e-13).unwrap().ext();
            assert!(base.r_value.rel_diff(&oracle) < 1e-8, "{s}");
            for extra in [1, 2, 5] {
                let other = assemble(s, base.k + extra, 1e-13).unwrap();
                assert!(other.r_value.rel_diff(&base.r_value) < 1e-9, "{s} k+{extra}");
            }
            assert!(base.r_from_u().unwrap().rel_diff(&base.r_value) < 1e-10);
        }
    }

    #[test]
    fn assemble_in_mid_strip_uses_continued_zeta() {
        for s in [c(-3.0, 25.0), c(0.5, 60.0), c(-8.0, -40.0)] {
            let b = assemble(s, eta_frame(s).unwrap().m, 1e-13).unwrap();
            let oracle = r_defining(s, 1e-13).unwrap().ext();
            assert!(b.r_value.rel_diff(&oracle) < 1e-8, "{s}");
        }
    }

    #[test]
    fn assemble_rejects_bad_input() {
        assert!(matches!(assemble(c(1.5, 3.0), 0, 1e-12), Err(Error::Domain { .. })));
        let s = c(-40.0, 50.0);
        let m = eta_frame(s).unwrap().m;
        assert!(matches!(assemble(s, m - 1, 1e-12), Err(Error::Precondition(_))));
    }

    #[test]
    fn u_small_in_region_g() {
        // |η| = 52, η₂ = 5
        let eta = c((52.0f64 * 52.0 - 25.0).sqrt(), 5.0);
        let s = c(0.0, TAU) * eta * eta + 1.0;
        let b = assemble(s, eta_frame(s).unwrap().m, 1e-12).unwrap();
        assert!(b.u_value.norm() < 0.9, "{}", b.u_value);
    }
}
