//! Quadrature along slanted lines in the complex plane, plus an adaptive
//! Gauss–Kronrod rule for the real integrals of the audit.

use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

const MAX_NODES: usize = 1 << 18;
const MAX_EXTENSIONS: usize = 8;
/// Minimum number of doublings before convergence is accepted.
const MIN_REFINEMENTS: usize = 2;

/// A straight line `crossing + v·direction`, `v ∈ [-half_length, half_length]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinePath {
    pub crossing: f64,
    pub direction: Complex64,
    pub half_length: f64,
    /// Initial number of trapezoid intervals.
    pub nodes: usize,
}

impl LinePath {
    pub fn new(crossing: f64, direction: Complex64, half_length: f64, nodes: usize) -> Result<Self> {
        if !crossing.is_finite() || crossing.fract() == 0.0 {
            return Err(Error::InvalidPath(format!(
                "crossing {crossing} is an integer; 1/sin(pi x) has a pole there"
            )));
        }
        if (direction.norm() - 1.0).abs() > 1e-15 {
            return Err(Error::InvalidPath(format!(
                "direction {direction} is not of unit modulus"
            )));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidPath(format!("half_length {half_length} must be positive")));
        }
        if nodes < 2 {
            return Err(Error::InvalidPath("at least two nodes are required".into()));
        }
        Ok(Self {
            crossing,
            direction,
            half_length,
            nodes: nodes + nodes % 2,
        })
    }

    /// Line of the `a↙b` type: direction e^{-3πi/4}, slope +1.
    pub fn swarrow(crossing: f64, half_length: f64) -> Result<Self> {
        Self::new(crossing, Complex64::from_polar(1.0, -3.0 * FRAC_PI_4), half_length, 64)
    }

    /// Line of the `a↘b` type: direction e^{-πi/4}, slope -1.
    pub fn searrow(crossing: f64, half_length: f64) -> Result<Self> {
        Self::new(crossing, Complex64::from_polar(1.0, -FRAC_PI_4), half_length, 64)
    }

    pub fn point(&self, v: f64) -> Complex64 {
        self.direction * v + self.crossing
    }

    /// Arclength coordinate of the orthogonal projection of `z` onto the line.
    pub fn project(&self, z: Complex64) -> f64 {
        ((z - self.crossing) * self.direction.conj()).re
    }
}

/// Truncation half-length for a Gaussian-decay integrand whose peak sits
/// `shift` along the line from the crossing.
pub fn default_half_length(tol: f64, shift: f64) -> f64 {
    let tol = tol.clamp(1e-300, 0.5);
    (tol.recip().ln() / (2.0 * PI)).sqrt() + shift.abs() + 2.0
}

/// Integral value `value · e^{log_scale}` with error `est_error · e^{log_scale}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub est_error: f64,
    pub nodes_used: usize,
    /// Zero unless the value is outside the comfortable binary64 range.
    pub log_scale: f64,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            nodes_used: 0,
            log_scale: 0.0,
        }
    }

    /// Build from extended values, keeping `log_scale = 0` when possible.
    pub fn from_ext(value: ExtComplex, est_error: ExtComplex, nodes_used: usize) -> Self {
        let lv = value.log_modulus().max(est_error.log_modulus());
        let log_scale = if lv.is_finite() && lv.abs() > 500.0 { lv } else { 0.0 };
        Self {
            value: value.scaled(log_scale),
            est_error: est_error.scaled(log_scale).re.abs(),
            nodes_used,
            log_scale,
        }
    }

    pub fn ext(&self) -> ExtComplex {
        ExtComplex::from_complex(self.value) * ExtComplex::new(self.log_scale, 0.0)
    }

    pub fn error_ext(&self) -> ExtComplex {
        ExtComplex::from_real(self.est_error) * ExtComplex::new(self.log_scale, 0.0)
    }
}

/// Trapezoid rule with node doubling on the truncated line, for an integrand
/// given as an ordinary complex function. Converges when the last refinement
/// changes the value by at most `tol·max(1, |value|)`.
pub fn line_quadrature<F>(path: &LinePath, integrand: F, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> Complex64,
{
    let r = trapezoid(path, |x| ExtComplex::from_complex(integrand(x)), tol, 0.0)?;
    Ok(QuadratureResult::from_ext(r.0, r.1, r.2))
}

/// As [`line_quadrature`], for an integrand returned in extended form. The
/// tolerance is purely relative (with a rounding floor proportional to
/// ∫|f|), so integrands far below 1 in modulus are still resolved.
pub fn line_quadrature_ext<F>(path: &LinePath, integrand: F, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> ExtComplex,
{
    let r = trapezoid(path, integrand, tol, f64::NEG_INFINITY)?;
    Ok(QuadratureResult::from_ext(r.0, r.1, r.2))
}

/// Returns (value, error, nodes). `log_abs_floor` is the log of the modulus
/// below which the tolerance becomes absolute.
fn trapezoid<F>(
    path: &LinePath,
    integrand: F,
    tol: f64,
    log_abs_floor: f64,
) -> Result<(ExtComplex, ExtComplex, usize)>
where
    F: Fn(Complex64) -> ExtComplex,
{
    let tol = if tol > 0.0 { tol } else { crate::special::DEFAULT_TOL };
    let d = ExtComplex::from_complex(path.direction);
    let eval = |v: f64| integrand(path.point(v)) * d;
    let mut half = path.half_length;
    let mut total_nodes = 0usize;

    for _ in 0..MAX_EXTENSIONS {
        let mut n = path.nodes;
        let mut h = 2.0 * half / n as f64;
        let first: Vec<ExtComplex> = (0..=n).map(|j| eval(-half + j as f64 * h)).collect();
        total_nodes += n + 1;
        let Some(mut scale) = first
            .iter()
            .filter(|z| !z.is_zero())
            .map(|z| z.log_modulus())
            .reduce(f64::max)
        else {
            // identically zero on the starting grid: check one refinement
            let probe: Vec<ExtComplex> = (0..n).map(|j| eval(-half + (j as f64 + 0.5) * h)).collect();
            total_nodes += n;
            if probe.iter().all(|z| z.is_zero()) {
                return Ok((ExtComplex::ZERO, ExtComplex::ZERO, total_nodes));
            }
            return Err(Error::NonConvergence(
                "integrand vanishes on the starting grid but not between nodes".into(),
            ));
        };

        // Gaussian tail beyond the truncation points
        let tail_of = |end: ExtComplex, inner: ExtComplex| -> Option<f64> {
            if end.is_zero() {
                return Some(0.0);
            }
            if inner.is_zero() {
                return None;
            }
            let slope = (inner.log_modulus() - end.log_modulus()) / h;
            (slope > 0.0).then(|| (end.log_modulus() - scale).exp() / slope)
        };
        let tails = (tail_of(first[0], first[1]), tail_of(first[n], first[n - 1]));
        let mut tail = match tails {
            (Some(a), Some(b)) => a + b,
            _ => f64::INFINITY,
        };

        let mut sum = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (j, z) in first.iter().enumerate() {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            let v = z.scaled(scale);
            sum += v * w;
            mass += v.norm() * w;
        }
        let mut value = sum * h;
        let mut prev_delta = f64::INFINITY;
        let mut strikes = 0;
        let mut refinements = 0;
        let mut tail_ok = None;

        loop {
            if n >= MAX_NODES {
                return Err(Error::NonConvergence(format!(
                    "no convergence with {n} trapezoid intervals on half-length {half:.3}"
                )));
            }
            let mids: Vec<ExtComplex> = (0..n).map(|j| eval(-half + (j as f64 + 0.5) * h)).collect();
            total_nodes += n;
            if let Some(top) = mids
                .iter()
                .filter(|z| !z.is_zero())
                .map(|z| z.log_modulus())
                .reduce(f64::max)
            {
                if top > scale + 300.0 {
                    let factor = (scale - top).exp();
                    sum *= factor;
                    mass *= factor;
                    value *= factor;
                    tail *= factor;
                    scale = top;
                }
            }
            for z in &mids {
                let v = z.scaled(scale);
                sum += v;
                mass += v.norm();
            }
            n *= 2;
            h /= 2.0;
            let next = sum * h;
            let delta = (next - value).norm();
            value = next;
            refinements += 1;

            let abs_floor = (log_abs_floor - scale).exp();
            let target = (tol * value.norm().max(abs_floor)).max(8.0 * f64::EPSILON * mass * h);
            if tail_ok.is_none() {
                tail_ok = Some(tail <= 0.5 * target.max(tol * 1e-300));
            }
            if tail_ok == Some(false) {
                break;
            }
            if refinements >= MIN_REFINEMENTS && delta <= target {
                let err = ExtComplex::from_real(delta + tail) * ExtComplex::new(scale, 0.0);
                let val = ExtComplex::from_complex(value) * ExtComplex::new(scale, 0.0);
                return Ok((val, err, total_nodes));
            }
            if n >= 256 && delta > 0.5 * prev_delta {
                strikes += 1;
                if strikes >= 3 {
                    return Err(Error::NonConvergence(format!(
                        "refinements stopped contracting at {n} intervals (delta {delta:e}, target {target:e})"
                    )));
                }
            }
            prev_delta = delta;
        }
        half = 1.5 * half + 1.0;
    }
    Err(Error::NonConvergence(format!(
        "integrand still significant at the truncation point after extending to half-length {half:.3}"
    )))
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let x = r * GK_NODES[i];
        let pair = f(c - x) + f(c + x);
        kronrod += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * r, ((kronrod - gauss) * r).abs())
}

/// Adaptive Gauss–Kronrod (7/15) on [a, b]. Returns (value, error estimate).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    integrate_with_limit(f, a, b, tol, 2000)
}

/// As [`integrate`], with an explicit cap on the number of subintervals.
pub fn integrate_with_limit<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<(f64, f64)> {
    let mut pieces = vec![(a, b, gk15(&f, a, b))];
    loop {
        let value: f64 = pieces.iter().map(|p| p.2 .0).sum();
        let error: f64 = pieces.iter().map(|p| p.2 .1).sum();
        if error <= tol.max(4.0 * f64::EPSILON * value.abs()) {
            return Ok((value, error));
        }
        if pieces.len() >= max_intervals {
            return Err(Error::NonConvergence(format!(
                "Gauss-Kronrod on [{a}, {b}] reached {max_intervals} intervals with error {error:e}"
            )));
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty");
        let (lo, hi, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        pieces.push((lo, mid, gk15(&f, lo, mid)));
        pieces.push((mid, hi, gk15(&f, mid, hi)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_paths() {
        let d = Complex64::from_polar(1.0, -FRAC_PI_4);
        assert!(matches!(LinePath::new(1.0, d, 5.0, 64), Err(Error::InvalidPath(_))));
        assert!(matches!(
            LinePath::new(0.5, Complex64::new(1.0, 1.0), 5.0, 64),
            Err(Error::InvalidPath(_))
        ));
        assert!(LinePath::new(0.5, d, -1.0, 64).is_err());
        assert!(LinePath::new(0.5, d, 5.0, 64).is_ok());
    }

    #[test]
    fn gaussian_along_slant() {
        // ∫ e^{-2π(z-c)²} dz along direction d: d·∫e^{-2πd²v²}dv = d/√(2d²)
        for path in [LinePath::swarrow(0.5, 8.0).unwrap(), LinePath::searrow(2.5, 8.0).unwrap()] {
            let c = path.crossing;
            let d = path.direction;
            // d² = ±i, so Re(2πd²) = 0: use a real Gaussian in the arclength variable
            let r = line_quadrature(&path, |z| (-2.0 * PI * ((z - c) * d.conj()).powi(2)).exp(), 1e-14).unwrap();
            let expect = d / 2f64.sqrt();
            assert!((r.value - expect).norm() < 1e-13, "{} vs {expect}", r.value);
            assert!(r.est_error < 1e-12);
        }
    }

    #[test]
    fn zero_integrand() {
        let path = LinePath::swarrow(0.5, 6.0).unwrap();
        let r = line_quadrature(&path, |_| Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert_eq!(r.est_error, 0.0);
    }

    #[test]
    fn doubling_nodes_stays_within_error() {
        let f = |z: Complex64| (Complex64::i() * PI * z * z).exp() / ((z * PI).sin() * Complex64::new(0.0, 2.0));
        let a = line_quadrature(&LinePath::swarrow(0.5, 7.0).unwrap(), f, 1e-13).unwrap();
        let mut fine = LinePath::swarrow(0.5, 7.0).unwrap();
        fine.nodes *= 2;
        let b = line_quadrature(&fine, f, 1e-13).unwrap();
        assert!((a.value - b.value).norm() <= a.est_error.max(b.est_error) + 1e-15);
        // classical value: ∫_{0↙1} e^{πix²}/(2i sin πx) dx = R(0) = -1/2
        assert!((a.value - Complex64::new(-0.5, 0.0)).norm() < 1e-12, "{}", a.value);
    }

    #[test]
    fn ext_integrand_far_below_underflow() {
        let path = LinePath::searrow(0.5, 8.0).unwrap();
        let d = path.direction;
        let r = line_quadrature_ext(
            &path,
            |z| ExtComplex::exp(-2.0 * PI * ((z - 0.5) * d.conj()).powi(2) - 2000.0),
            1e-13,
        )
        .unwrap();
        let v = r.ext();
        let expect = ExtComplex::from_complex(d / 2f64.sqrt()) * ExtComplex::new(-2000.0, 0.0);
        assert!(v.rel_diff(&expect) < 1e-12);
        assert!(r.log_scale < -1000.0);
    }

    #[test]
    fn gauss_kronrod_polynomial_and_gaussian() {
        let (v, _) = integrate(|x| x * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
        let (g, _) = integrate(|x| (-x * x).exp(), -10.0, 10.0, 1e-14).unwrap();
        assert!((g - PI.sqrt()).abs() < 1e-13);
    }
}
