//! Complex special functions: log-gamma, the functional-equation factor χ,
//! and ζ on the regions the rest of the crate needs.

mod gamma;
mod zeta;

pub use gamma::{log_gamma, log_sin_pi};
pub use zeta::{hurwitz_tail, zeta_dirichlet, zeta_reference};

use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default absolute tolerance for callers that do not supply one.
pub const DEFAULT_TOL: f64 = 1e-12;

/// χ(s) = π^{s-1/2} Γ((1-s)/2) / Γ(s/2), so that ζ(s) = χ(s)ζ(1-s).
///
/// Evaluated entirely in log space. The zeros at s = 0, -2, -4, ... are
/// returned exactly; the poles at s = 1, 3, 5, ... are errors.
pub fn chi(s: Complex64) -> Result<ExtComplex> {
    if s.im == 0.0 && s.re.fract() == 0.0 {
        let n = s.re;
        if n <= 0.0 && (n / 2.0).fract() == 0.0 {
            return Ok(ExtComplex::ZERO);
        }
        if n >= 1.0 && (n / 2.0).fract() != 0.0 {
            return Err(Error::Pole {
                function: "chi",
                at: s,
            });
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let log_chi = (s - 0.5) * PI.ln() + log_gamma((one - s) * 0.5)? - log_gamma(s * 0.5)?;
    Ok(ExtComplex::exp(log_chi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chi_symmetry_point() {
        let v = chi(c(0.5, 0.0)).unwrap().to_complex();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn chi_exact_zeros_and_poles() {
        for n in [0.0, -2.0, -4.0, -100.0] {
            assert!(chi(c(n, 0.0)).unwrap().is_zero());
        }
        for n in [1.0, 3.0, 5.0, 41.0] {
            assert!(matches!(chi(c(n, 0.0)), Err(Error::Pole { .. })));
        }
        // odd negative integers and even positive ones are regular
        assert!(!chi(c(-1.0, 0.0)).unwrap().is_zero());
        assert!(!chi(c(4.0, 0.0)).unwrap().is_zero());
    }

    #[test]
    fn chi_two_from_independent_zeta_values() {
        // χ(2) = ζ(2)/ζ(-1), with ζ(2) by the Dirichlet series and ζ(-1) = -1/12
        let zeta_two = zeta_dirichlet(c(2.0, 0.0), 1e-15).unwrap().re;
        let expect = zeta_two / (-1.0 / 12.0);
        assert!((expect + 2.0 * PI * PI).abs() < 1e-12);
        let v = chi(c(2.0, 0.0)).unwrap().to_complex();
        assert!((v.re - expect).abs() < 1e-12 * expect.abs());
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn chi_reflection_product_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c41);
        let mut checked = 0;
        while checked < 100 {
            let s = c(rng.gen_range(-30.0..30.0), rng.gen_range(-60.0..60.0));
            if s.im.abs() < 0.5 {
                continue;
            }
            let p = chi(s).unwrap() * chi(c(1.0, 0.0) - s).unwrap();
            assert!(
                (p.to_complex() - c(1.0, 0.0)).norm() < 1e-9,
                "chi(s)chi(1-s) = {} at {s}",
                p.to_complex()
            );
            checked += 1;
        }
    }

    #[test]
    fn chi_large_arguments_stay_in_log_space() {
        // |χ(-20000+100i)| ~ 10^{70000}
        let v = chi(c(-20000.0, 100.0)).unwrap();
        assert!(v.log_modulus() > 1.0e5);
        let w = chi(c(20001.0, -100.0)).unwrap();
        assert!(((v * w).to_complex() - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn log_gamma_recurrence_on_grid() {
        // 200 points on a polar grid inside |z| <= 30
        for i in 0..10 {
            for j in 0..20 {
                let r = 1.3 + 2.8 * i as f64;
                let theta = (j as f64 + 0.3) * PI / 10.0;
                let z = Complex64::from_polar(r, theta);
                let lhs = log_gamma(z + 1.0).unwrap();
                let rhs = z.ln() + log_gamma(z).unwrap();
                assert!((lhs - rhs).norm() < 1e-11 * lhs.norm().max(1.0), "{z}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn exp_log_gamma_matches_gamma() {
        // Γ(z+1) = zΓ(z) chained from Γ(1) = 1 gives exact integer factorials
        let mut fact = 1.0f64;
        for n in 1..=20 {
            let g = log_gamma(c(n as f64 + 1.0, 0.0)).unwrap().exp();
            fact *= n as f64;
            assert!((g.re - fact).abs() <= 1e-12 * fact);
        }
    }
}
