//! One entry point for R(s), dispatching to the oracle or the expansion.

use crate::error::{Error, Result};
use crate::expansion::{assemble, eta_frame, leading_term};
use crate::ext::ExtComplex;
use crate::oracle::{r_defining, MAX_ABS_T};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Below this σ the automatic choice prefers the expansion.
pub const AUTO_SIGMA_FLOOR: f64 = -200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    Expansion,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    Oracle,
    Expansion,
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evaluator::Oracle => "oracle",
            Evaluator::Expansion => "expansion",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "expansion" => Ok(Method::Expansion),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub s: Complex64,
    pub value: ExtComplex,
    /// Absolute error estimate, as a nonnegative real in extended form.
    pub est_error: ExtComplex,
    pub method_used: Evaluator,
}

fn oracle_applies(s: Complex64) -> bool {
    s.im.abs() <= MAX_ABS_T
}

fn expansion_applies(s: Complex64) -> bool {
    s.re < 1.0 && eta_frame(s).is_ok()
}

/// The evaluator `Auto` would use at s.
pub fn auto_choice(s: Complex64) -> Result<Evaluator> {
    if oracle_applies(s) && s.re >= AUTO_SIGMA_FLOOR {
        Ok(Evaluator::Oracle)
    } else if expansion_applies(s) {
        Ok(Evaluator::Expansion)
    } else if oracle_applies(s) {
        Ok(Evaluator::Oracle)
    } else {
        Err(Error::OutOfRange(s))
    }
}

/// The evaluator other than `used` when it also covers s.
pub fn alternate(s: Complex64, used: Evaluator) -> Option<Evaluator> {
    match used {
        Evaluator::Oracle if expansion_applies(s) => Some(Evaluator::Expansion),
        Evaluator::Expansion if oracle_applies(s) => Some(Evaluator::Oracle),
        _ => None,
    }
}

fn modulus(z: &ExtComplex) -> ExtComplex {
    if z.is_zero() {
        ExtComplex::ZERO
    } else {
        ExtComplex::new(z.log_modulus(), 0.0)
    }
}

pub fn evaluate_with(s: Complex64, evaluator: Evaluator, tol: f64) -> Result<Evaluation> {
    match evaluator {
        Evaluator::Oracle => {
            let q = r_defining(s, tol)?;
            Ok(Evaluation {
                s,
                value: q.ext(),
                est_error: q.error_ext(),
                method_used: Evaluator::Oracle,
            })
        }
        Evaluator::Expansion => {
            let frame = eta_frame(s)?;
            let b = assemble(s, frame.m, tol)?;
            let outer = b.chi_factor * b.power_factor;
            // quadrature error plus rounding in the four-term bracket
            let terms = [b.dirichlet_tail, b.trig_term, b.correction_sum, b.remainder.ext()];
            let size = ExtComplex::sum(terms.iter().map(modulus));
            let err = modulus(&outer) * (b.remainder.error_ext() + size.mul_real(16.0 * f64::EPSILON));
            Ok(Evaluation {
                s,
                value: b.r_value,
                est_error: err,
                method_used: Evaluator::Expansion,
            })
        }
    }
}

pub fn evaluate(s: Complex64, method: Method, tol: f64) -> Result<Evaluation> {
    let evaluator = match method {
        Method::Oracle => Evaluator::Oracle,
        Method::Expansion => Evaluator::Expansion,
        Method::Auto => auto_choice(s)?,
    };
    evaluate_with(s, evaluator, tol)
}

/// ln of max(1, |leading term|) over the four points s ± 1/4, s ± i/4.
///
/// The leading term carries the size of R away from its zeros, so it
/// normalizes residuals and the boundary guard of the zero scanner. Probes
/// where the term is undefined are skipped.
pub fn log_local_scale(s: Complex64) -> f64 {
    let probes = [0.25, -0.25].map(|d| s + d).into_iter().chain([0.25, -0.25].map(|d| s + Complex64::new(0.0, d)));
    probes
        .filter_map(|p| leading_term(p).ok())
        .filter(|v| !v.is_zero())
        .map(|v| v.log_modulus())
        .fold(0.0, f64::max)
}

/// |R(s)| / local scale.
pub fn normalized_residual(value: &ExtComplex, s: Complex64) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    (value.log_modulus() - log_local_scale(s)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::zeta_reference;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn auto_dispatch() {
        assert_eq!(auto_choice(c(0.5, 10.0)).unwrap(), Evaluator::Oracle);
        assert_eq!(auto_choice(c(-500.0, 10.0)).unwrap(), Evaluator::Expansion);
        assert_eq!(auto_choice(c(-50.0, 2000.0)).unwrap(), Evaluator::Expansion);
        assert!(matches!(auto_choice(c(3.0, 500.0)), Err(Error::OutOfRange(_))));
        assert_eq!(alternate(c(-30.0, 20.0), Evaluator::Oracle), Some(Evaluator::Expansion));
        assert_eq!(alternate(c(3.0, 20.0), Evaluator::Oracle), None);
        assert!("bogus".parse::<Method>().is_err());
        assert_eq!("auto".parse::<Method>().unwrap(), Method::Auto);
    }

    #[test]
    fn methods_agree() {
        for s in [c(-30.0, 20.0), c(-45.0, 80.0), c(-250.0, 40.0)] {
            let a = evaluate(s, Method::Oracle, 1e-12).unwrap();
            let b = evaluate(s, Method::Expansion, 1e-12).unwrap();
            assert!(a.value.rel_diff(&b.value) < 1e-8, "{s}");
            assert!(b.est_error.abs() <= 1e-8 * b.value.abs());
        }
    }

    #[test]
    fn half_zeta_at_one_half() {
        let e = evaluate(c(0.5, 0.0), Method::Auto, 1e-12).unwrap();
        let z = zeta_reference(c(0.5, 0.0)).unwrap();
        assert!((e.value.to_complex().re - z.re / 2.0).abs() < 1e-11);
        assert_eq!(e.method_used, Evaluator::Oracle);
    }

    #[test]
    fn local_scale_is_at_least_one() {
        assert!(log_local_scale(c(0.5, 14.0)) >= 0.0);
        assert!(log_local_scale(c(2.0, 0.0)) >= 0.0);
        // large in the far left half plane
        assert!(log_local_scale(c(-100.0, 5.0)) > 50.0);
        let v = evaluate(c(-100.0, 5.0), Method::Auto, 1e-12).unwrap().value;
        let r = normalized_residual(&v, c(-100.0, 5.0));
        assert!(r > 1e-3 && r < 1e3, "{r}");
    }
}
