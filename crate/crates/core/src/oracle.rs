//! Direct evaluation of R(s) and of conj R(1 - s̄) by quadrature along
//! slanted lines.
//!
//! Orientation: the defining integral runs along `N↙N+1`, a line of slope +1
//! traversed towards the lower left (direction e^{-3πi/4}); the reflected one
//! runs along `N↘N+1`, slope -1, direction e^{-πi/4}. Moving the line from
//! crossing 1/2 to N + 1/2 picks up the residues at 1, ..., N, which appear as
//! the finite Dirichlet sums below. N is chosen so the line passes within
//! about one unit of the saddle point, which keeps the integrand free of
//! cancellation.

use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use crate::quadrature::{default_half_length, line_quadrature_ext, LinePath, QuadratureResult};
use crate::special::log_sin_pi;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};

/// Beyond this height the oracle refuses to evaluate.
pub const MAX_ABS_T: f64 = 300.0;

/// √((s-1)/(2πi)) on the branch -π/4 ≤ arg < 3π/4, i.e. with arg(s-1) taken in [0, 2π).
pub fn saddle_eta(s: Complex64) -> Complex64 {
    let z = s - 1.0;
    let mut theta = z.arg();
    if theta < 0.0 {
        theta += TAU;
    }
    Complex64::from_polar((z.norm() / TAU).sqrt(), 0.5 * (theta - FRAC_PI_2))
}

/// ln(e^{πix} - e^{-πix}) = ln 2 + iπ/2 + ln sin πx (up to 2πi).
fn log_denominator(x: Complex64) -> Complex64 {
    log_sin_pi(x) + Complex64::new(LN_2, FRAC_PI_2)
}

fn check_height(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) || s.im.abs() > MAX_ABS_T {
        return Err(Error::OutOfRange(s));
    }
    Ok(())
}

/// Σ_{n=1}^{N} n^{exponent}, in extended form.
fn power_sum(exponent: Complex64, n_max: u64) -> ExtComplex {
    ExtComplex::sum((1..=n_max).map(|n| ExtComplex::exp(exponent * (n as f64).ln())))
}

fn combine(sum: ExtComplex, integral: QuadratureResult, n_max: u64) -> QuadratureResult {
    let value = sum + integral.ext();
    let mut err = integral.error_ext();
    if !sum.is_zero() {
        // rounding in the finite sum
        let rounding = (4.0 * f64::EPSILON * (n_max as f64 + 1.0)).ln();
        err = err + ExtComplex::new(sum.log_modulus() + rounding, 0.0);
    }
    QuadratureResult::from_ext(value, err, integral.nodes_used)
}

/// R(s) = ∫_{0↙1} x^{-s} e^{πix²} / (e^{πix} - e^{-πix}) dx evaluated on the
/// line through `crossing` (any non-integer c > 0); the residues at
/// 1, ..., ⌊c⌋ are added back.
pub fn r_defining_on(s: Complex64, crossing: f64, tol: f64) -> Result<QuadratureResult> {
    check_height(s)?;
    if !(crossing > 0.0) {
        return Err(Error::InvalidPath(format!(
            "crossing {crossing} must be positive so the line avoids the branch cut of x^-s"
        )));
    }
    let xi = saddle_eta(Complex64::new(1.0, 0.0) - s.conj()).conj();
    let probe = LinePath::swarrow(crossing, 1.0)?;
    let half = default_half_length(tol, probe.project(xi));
    let path = LinePath::swarrow(crossing, half)?;
    let i_pi = Complex64::new(0.0, PI);
    let integral = line_quadrature_ext(
        &path,
        |x| ExtComplex::exp(-s * x.ln() + i_pi * x * x - log_denominator(x)),
        tol,
    )?;
    let n_max = crossing.floor() as u64;
    Ok(combine(power_sum(-s, n_max), integral, n_max))
}

/// R(s) from its defining integral; the line is shifted to cross at N + 1/2
/// next to the saddle point of x^{-s}e^{πix²}.
///
/// Accuracy is relative: `est_error ≤ tol·max(1, |R(s)|)` up to a rounding
/// floor set by the size of the integrand. Refuses |t| > 300.
pub fn r_defining(s: Complex64, tol: f64) -> Result<QuadratureResult> {
    check_height(s)?;
    let xi = saddle_eta(Complex64::new(1.0, 0.0) - s.conj()).conj();
    let n = (xi.re - xi.im).floor().max(0.0);
    r_defining_on(s, n + 0.5, tol)
}

/// conj R(1 - s̄) = ∫_{0↘1} x^{s-1} e^{-πix²} / (e^{πix} - e^{-πix}) dx on the
/// line through `crossing`.
pub fn r_reflected_on(s: Complex64, crossing: f64, tol: f64) -> Result<QuadratureResult> {
    check_height(s)?;
    if !(crossing > 0.0) {
        return Err(Error::InvalidPath(format!(
            "crossing {crossing} must be positive so the line avoids the branch cut of x^(s-1)"
        )));
    }
    let eta = saddle_eta(s);
    let probe = LinePath::searrow(crossing, 1.0)?;
    let half = default_half_length(tol, probe.project(eta));
    let path = LinePath::searrow(crossing, half)?;
    let i_pi = Complex64::new(0.0, PI);
    let sm1 = s - 1.0;
    let integral = line_quadrature_ext(
        &path,
        |x| ExtComplex::exp(sm1 * x.ln() - i_pi * x * x - log_denominator(x)),
        tol,
    )?;
    let n_max = crossing.floor() as u64;
    Ok(combine(power_sum(sm1, n_max), integral, n_max))
}

/// conj R(1 - s̄) on the line `m↘m+1`, m = ⌊η₁ + η₂⌋.
pub fn r_reflected(s: Complex64, tol: f64) -> Result<QuadratureResult> {
    check_height(s)?;
    let eta = saddle_eta(s);
    let m = (eta.re + eta.im).floor().max(0.0);
    r_reflected_on(s, m + 0.5, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{chi, zeta_reference};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const TOL: f64 = 1e-13;

    #[test]
    fn value_at_zero_from_zeta_identity() {
        // ζ(0) = R(0) + χ(0)·conj R(1) with χ(0) = 0
        let r = r_defining(c(0.0, 0.0), TOL).unwrap();
        let zeta0 = zeta_reference(c(0.0, 0.0)).unwrap();
        assert!((r.ext().to_complex() - zeta0).norm() < 1e-12);
    }

    #[test]
    fn trivial_zero_at_minus_two() {
        let r = r_defining(c(-2.0, 0.0), TOL).unwrap();
        assert!(r.ext().abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn symmetry_point() {
        let r = r_defining(c(0.5, 0.0), TOL).unwrap().ext().to_complex();
        let half_zeta = zeta_reference(c(0.5, 0.0)).unwrap().re / 2.0;
        assert!((r.re - half_zeta).abs() < 1e-12);
        assert!((r.re + 0.730_177_254_4).abs() < 1e-9);
    }

    #[test]
    fn reflected_at_one() {
        let r = r_reflected(c(1.0, 0.0), TOL).unwrap().ext().to_complex();
        assert!((r - c(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn matches_high_precision_reference() {
        // mpmath at 50 digits on shifted lines (path independence checked there)
        let cases = [
            (c(-40.0, 50.0), c(-1.5257076288533424e17, 3.7241885947297318e16)),
            (c(3.0, 10.0), c(0.88262565249560431, 0.072437933615422933)),
            (c(0.5, 100.0), c(1.3441163028095491, -0.29993255138317669)),
            (c(10.0, -3.0), c(-4.4482464524619171, -1.7829417461377)),
        ];
        for (s, expect) in cases {
            let got = r_defining(s, TOL).unwrap().ext().to_complex();
            assert!((got - expect).norm() <= 1e-11 * expect.norm(), "R({s}) = {got}, expected {expect}");
        }
        // beyond binary64 range
        let big = r_defining(c(-150.0, -250.0), TOL).unwrap();
        let expect = ExtComplex::from_complex(c(1.5406482186961644, -0.28617002889953731))
            * ExtComplex::exp(c(283.0 * std::f64::consts::LN_10, 0.0));
        assert!(big.ext().rel_diff(&expect) < 1e-10);
        assert!(big.log_scale > 600.0);
        let big = r_defining(c(-200.0, 300.0), TOL).unwrap();
        let expect = ExtComplex::from_complex(c(0.26362115900924719, 3.9966216259983014))
            * ExtComplex::exp(c(167.0 * std::f64::consts::LN_10, 0.0));
        assert!(big.ext().rel_diff(&expect) < 1e-10);
    }

    #[test]
    fn refuses_large_height() {
        assert!(matches!(r_defining(c(0.5, 300.5), TOL), Err(Error::OutOfRange(_))));
        assert!(matches!(r_reflected(c(0.5, -301.0), TOL), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn reflected_real_axis() {
        for x in [-3.5, -1.0, 0.25, 2.0, 4.75] {
            let a = r_reflected(c(x, 0.0), TOL).unwrap().ext().to_complex();
            let b = r_defining(c(1.0 - x, 0.0), TOL).unwrap().ext().to_complex().conj();
            assert!((a - b).norm() < 1e-11 * a.norm().max(1.0));
        }
    }

    #[test]
    fn reflected_is_conjugate_of_defining() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let s = c(rng.gen_range(-5.0..5.0), rng.gen_range(-20.0..20.0));
            let a = r_reflected(s, TOL).unwrap().ext().to_complex();
            let b = r_defining(c(1.0, 0.0) - s.conj(), TOL).unwrap().ext().to_complex().conj();
            assert!((a - b).norm() < 1e-11 * a.norm().max(1.0), "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn functional_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut done = 0;
        while done < 50 {
            let s = Complex64::from_polar(rng.gen_range(0.0..30.0f64).sqrt() * 30f64.sqrt(), rng.gen_range(-PI..PI));
            if (s - 1.0).norm() < 0.1 {
                continue;
            }
            let Ok(chi_s) = chi(s) else { continue };
            let r = r_defining(s, TOL).unwrap().ext();
            let rr = r_reflected(s, TOL).unwrap().ext();
            let rhs = r + chi_s * rr;
            let zeta = zeta_reference(s).unwrap();
            let scale = 1f64.max(r.abs()).max((chi_s * rr).abs());
            assert!((rhs.to_complex() - zeta).norm() <= 1e-8 * scale, "{s}");
            done += 1;
        }
    }

    #[test]
    fn path_independence() {
        for s in [c(0.3, 2.0), c(-4.0, 7.0), c(2.0, -1.0)] {
            let a = r_defining_on(s, 0.5, TOL).unwrap();
            let b = r_defining_on(s, 0.25, TOL).unwrap();
            let diff = (a.ext() - b.ext()).abs();
            assert!(diff <= a.est_error.max(b.est_error) + 1e-14 * a.ext().abs().max(1.0));
        }
    }

    #[test]
    fn integer_crossing_rejected() {
        assert!(matches!(r_defining_on(c(0.5, 1.0), 2.0, TOL), Err(Error::InvalidPath(_))));
    }
}
