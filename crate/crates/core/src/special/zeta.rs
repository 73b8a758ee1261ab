use crate::error::{Error, Result};
use crate::special::chi;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

/// Euler–Maclaurin correction terms used by the reference evaluator.
const EM_TERMS: usize = 20;

/// B_{2k}/(2k)! for k = 1..=EM_TERMS, from B_{2k}/(2k)! = (-1)^{k+1} 2ζ(2k)/(2π)^{2k}.
fn bernoulli_ratios() -> &'static [f64; EM_TERMS] {
    static TABLE: OnceLock<[f64; EM_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; EM_TERMS];
        for (idx, slot) in out.iter_mut().enumerate() {
            let k = idx + 1;
            let two_k = 2 * k as i32;
            let zeta_2k = match k {
                1 => PI.powi(2) / 6.0,
                2 => PI.powi(4) / 90.0,
                3 => PI.powi(6) / 945.0,
                4 => PI.powi(8) / 9450.0,
                // tail below 200^{1-2k} < 1e-20
                _ => (1..=200u32).rev().map(|n| (n as f64).powi(-two_k)).sum(),
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta_2k / TAU.powi(two_k);
        }
        out
    })
}

fn npow(n: f64, z: Complex64) -> Complex64 {
    (-z * n.ln()).exp()
}

/// Euler–Maclaurin remainder Σ_{n≥N} n^{-z} using `terms` Bernoulli corrections.
fn em_remainder(z: Complex64, n: f64, terms: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let n_pow = npow(n, z);
    let mut acc = n_pow * n / (z - one) + n_pow * 0.5;
    // rising factorial z(z+1)...(z+2k-2) times N^{-z-2k+1}
    let mut rising = z;
    let mut term_pow = n_pow / n;
    let ratios = bernoulli_ratios();
    for (k, ratio) in ratios.iter().enumerate().take(terms) {
        acc += rising * term_pow * *ratio;
        let a = z + (2 * k + 1) as f64;
        let b = z + (2 * k + 2) as f64;
        rising = rising * a * b;
        term_pow /= n * n;
    }
    acc
}

/// Σ_{n≥start} n^{-z} for Re z > 0, z ≠ 1, by Euler–Maclaurin.
pub fn hurwitz_tail(z: Complex64, start: u64) -> Result<Complex64> {
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: z,
        });
    }
    // |z + 2M| / (2πN) <= 1/4 makes the omitted term ~ 4^{-2M}
    let cutoff = (2.0 * (z.norm() + 2.0 * EM_TERMS as f64) / PI).ceil() as u64 + 1;
    let big_n = cutoff.max(start).max(2);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in (start.max(1)..big_n).rev() {
        acc += npow(n as f64, z);
    }
    Ok(acc + em_remainder(z, big_n as f64, EM_TERMS))
}

/// ζ(z) on the whole plane minus z = 1: Euler–Maclaurin for Re z ≥ 0,
/// the functional equation ζ(z) = χ(z)ζ(1-z) for Re z < 0.
pub fn zeta_reference(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta_reference",
            at: z,
        });
    }
    if z.re < 0.0 {
        let chi_z = chi(z)?;
        let mirror = hurwitz_tail(Complex64::new(1.0, 0.0) - z, 1)?;
        return Ok((chi_z * mirror.into()).to_complex());
    }
    hurwitz_tail(z, 1)
}

/// ζ(z) for Re z ≥ 2 from the Dirichlet series. Terms are summed until the
/// integral bound ∫_N^∞ x^{-Re z} dx drops below `tol` (capped at 2000 terms),
/// and the remaining tail is added through its integral plus three
/// Euler–Maclaurin boundary corrections.
pub fn zeta_dirichlet(z: Complex64, tol: f64) -> Result<Complex64> {
    if !(z.re >= 2.0) {
        return Err(Error::Domain {
            function: "zeta_dirichlet",
            at: z,
            reason: "Dirichlet series requires Re z >= 2".into(),
        });
    }
    let tol = if tol > 0.0 { tol } else { 1e-12 };
    let sigma = z.re;
    // N^{1-σ}/(σ-1) <= tol
    let needed = (1.0 / ((sigma - 1.0) * tol)).powf(1.0 / (sigma - 1.0)).ceil();
    let big_n = needed.clamp(8.0, 2000.0) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in (1..big_n).rev() {
        acc += npow(n as f64, z);
    }
    Ok(acc + em_remainder(z, big_n as f64, 3))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_reference_values() {
        assert!((zeta_reference(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((zeta_reference(c(-1.0, 0.0)).unwrap() - c(-1.0 / 12.0, 0.0)).norm() < 1e-14);
        assert!((zeta_reference(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        assert!(zeta_reference(c(-2.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(matches!(zeta_reference(c(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn reference_matches_mpmath() {
        // mpmath.zeta at 40 digits
        let cases = [
            (c(0.5, 0.0), c(-1.4603545088095868, 0.0)),
            (c(0.5, 100.0), c(2.6926198856813241, -0.020386029602598162)),
            (c(-3.5, 20.0), c(-37.456719829206896, -98.992307129261624)),
            (c(2.0, 1.0), c(1.1503557032549027, -0.43753086591960788)),
            (c(0.2, -60.0), c(0.84369904168192867, -0.48635817571698351)),
        ];
        for (z, expect) in cases {
            let got = zeta_reference(z).unwrap();
            assert!(
                (got - expect).norm() <= 1e-10 * expect.norm(),
                "zeta({z}) = {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn near_first_zero() {
        // 1/2 + 14.134725141734693790i is the first nontrivial zero
        let v = zeta_reference(c(0.5, 14.134725141734694)).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn dirichlet_domain() {
        assert!(matches!(
            zeta_dirichlet(c(1.9, 0.0), 1e-12),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn dirichlet_dominated_tail() {
        let v = zeta_dirichlet(c(200.0, 3.0), 1e-15).unwrap();
        assert!((v - c(1.0, 0.0)).norm() <= 2f64.powi(-190));
    }

    #[test]
    fn dirichlet_euler_closed_form() {
        // ζ(12) = 691π¹²/638512875
        let expect = 691.0 * PI.powi(12) / 638_512_875.0;
        let v = zeta_dirichlet(c(12.0, 0.0), 1e-15).unwrap();
        assert!((v.re - expect).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn dirichlet_conjugate_symmetry() {
        for &(re, im) in &[(2.0, 5.0), (3.5, -40.0), (11.0, 80.0)] {
            let a = zeta_dirichlet(c(re, im), 1e-13).unwrap();
            let b = zeta_dirichlet(c(re, -im), 1e-13).unwrap();
            assert!((a - b.conj()).norm() < 1e-15 * a.norm().max(1.0));
        }
    }

    #[test]
    fn dirichlet_and_reference_agree() {
        for i in 0..=28 {
            for &t in &[-90.0, -7.5, 0.0, 3.0, 55.0] {
                let z = c(2.0 + i as f64, t);
                let a = zeta_dirichlet(z, 1e-14).unwrap();
                let b = zeta_reference(z).unwrap();
                assert!((a - b).norm() <= 1e-10, "{z}: {a} vs {b}");
            }
        }
    }
}
