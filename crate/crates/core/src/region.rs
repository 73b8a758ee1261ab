//! Region predicates and the explicit bounds for the remainder and for U.

use crate::error::{Error, Result};
use crate::expansion::{eta_frame, EtaFrame};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, LN_10, LN_2, PI};
use std::fmt;
use std::path::Path;

/// Tunable constants of the regions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionParams {
    /// G requires |s-1| ≥ radius_g.
    #[serde(rename = "radius_G")]
    pub radius_g: f64,
    /// The wedge requires |s-1| ≥ radius_wedge.
    pub radius_wedge: f64,
    /// G requires t ≥ -slope·(1-σ).
    pub slope: f64,
    /// G requires (1-σ)² ≥ parabola·t.
    pub parabola: f64,
    /// G_α is |t|·tan 2α ≤ 1-σ.
    pub alpha: f64,
    /// Subpolynomial region: t ≥ t0 and 1-σ ≥ A·t^{2/5}·log t.
    #[serde(rename = "A")]
    pub a: f64,
    pub t0: f64,
}

impl Default for RegionParams {
    fn default() -> Self {
        Self {
            radius_g: 5408.0 * PI,
            radius_wedge: 3528.0 * PI,
            slope: 99.0 / 20.0,
            parabola: 225.0 * PI,
            alpha: FRAC_PI_8,
            // unverified defaults: only existence of A and t0 is known
            a: 1.0,
            t0: 1e6,
        }
    }
}

pub const CONFIG_KEYS: [&str; 7] = ["radius_G", "radius_wedge", "slope", "parabola", "alpha", "A", "t0"];

/// Parse `1.5`, `pi`, `5408pi` or `5408*pi`.
fn parse_value(raw: &str) -> Option<f64> {
    let v = raw.trim();
    let (num, times_pi) = match v.strip_suffix("pi") {
        Some(rest) => (rest.trim_end_matches('*').trim(), true),
        None => (v, false),
    };
    let base = if times_pi && num.is_empty() { 1.0 } else { num.parse::<f64>().ok()? };
    base.is_finite().then_some(if times_pi { base * PI } else { base })
}

impl RegionParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("radius_G", self.radius_g),
            ("radius_wedge", self.radius_wedge),
            ("slope", self.slope),
            ("parabola", self.parabola),
            ("alpha", self.alpha),
            ("A", self.a),
            ("t0", self.t0),
        ];
        for (name, v) in named {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.alpha >= FRAC_PI_4 {
            return Err(Error::Config(format!("alpha must be below pi/4, got {}", self.alpha)));
        }
        Ok(())
    }

    /// Parse `key = value` lines (`#` starts a comment). Missing keys keep
    /// their defaults; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Self::default();
        let mut seen = BTreeSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected key=value", lineno + 1)));
            };
            let key = key.trim();
            let Some(v) = parse_value(value) else {
                return Err(Error::Config(format!("line {}: bad number {:?}", lineno + 1, value.trim())));
            };
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key {key}", lineno + 1)));
            }
            match key {
                "radius_G" => p.radius_g = v,
                "radius_wedge" => p.radius_wedge = v,
                "slope" => p.slope = v,
                "parabola" => p.parabola = v,
                "alpha" => p.alpha = v,
                "A" => p.a = v,
                "t0" => p.t0 = v,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key {other:?} (expected one of {})",
                        lineno + 1,
                        CONFIG_KEYS.join(", ")
                    )))
                }
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// |η| threshold equivalent to |s-1| ≥ radius: radius = 2π|η|².
    pub fn eta_radius(radius: f64) -> f64 {
        (radius / (2.0 * PI)).sqrt()
    }

    /// The ratio a with (t ≥ -slope(1-σ)) ⇔ (η₂ ≤ a·η₁) for η in the first quadrant.
    pub fn slope_ratio(&self) -> f64 {
        1.0 / (0.5 * (1.0 / self.slope).atan()).tan()
    }

    /// φ(t) = A·t^{2/5}·log t, the left boundary of the subpolynomial region.
    pub fn phi(&self, t: f64) -> f64 {
        self.a * t.powf(0.4) * t.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    G,
    #[serde(rename = "G_alpha")]
    GAlpha,
    Wedge,
    Subpoly,
    H,
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionLabel::G => "G",
            RegionLabel::GAlpha => "G_alpha",
            RegionLabel::Wedge => "Wedge",
            RegionLabel::Subpoly => "Subpoly",
            RegionLabel::H => "H",
        })
    }
}

pub fn in_g(s: Complex64, p: &RegionParams) -> bool {
    let (sigma, t) = (s.re, s.im);
    let one_minus = 1.0 - sigma;
    sigma < 0.0 && (s - 1.0).norm() >= p.radius_g && t >= -p.slope * one_minus && one_minus * one_minus >= p.parabola * t
}

pub fn in_g_alpha(s: Complex64, p: &RegionParams) -> bool {
    s.im.abs() * (2.0 * p.alpha).tan() <= 1.0 - s.re
}

pub fn in_wedge(s: Complex64, p: &RegionParams) -> bool {
    1.0 - s.re > s.im.abs() && (s - 1.0).norm() >= p.radius_wedge
}

pub fn in_subpoly(s: Complex64, p: &RegionParams) -> bool {
    s.im >= p.t0 && 1.0 - s.re >= p.phi(s.im)
}

pub fn in_h(s: Complex64) -> bool {
    eta_frame(s).map(|f| f.eta1 >= 2.0 && f.eta2 >= 2.0).unwrap_or(false)
}

/// Every region containing s, from the literal s-plane inequalities.
pub fn classify(s: Complex64, p: &RegionParams) -> BTreeSet<RegionLabel> {
    let mut out = BTreeSet::new();
    if in_g(s, p) {
        out.insert(RegionLabel::G);
    }
    if in_g_alpha(s, p) {
        out.insert(RegionLabel::GAlpha);
    }
    if in_wedge(s, p) {
        out.insert(RegionLabel::Wedge);
    }
    if in_subpoly(s, p) {
        out.insert(RegionLabel::Subpoly);
    }
    if in_h(s) {
        out.insert(RegionLabel::H);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    ZeroFree,
    TrivialOnly,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::ZeroFree => "zero_free",
            VerdictKind::TrivialOnly => "trivial_only",
            VerdictKind::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    pub labels: BTreeSet<RegionLabel>,
    /// True when the verdict rests on the unverified (A, t0) defaults or caller values.
    pub conditional: bool,
    /// n when s = -2n is a trivial zero inside a trivial-only region.
    pub trivial_zero_index: Option<u64>,
}

pub fn zero_free_verdict(s: Complex64, p: &RegionParams) -> Verdict {
    let labels = classify(s, p);
    let (verdict, conditional) = if labels.contains(&RegionLabel::G) || labels.contains(&RegionLabel::Wedge) {
        (VerdictKind::TrivialOnly, false)
    } else if labels.contains(&RegionLabel::Subpoly) {
        (VerdictKind::ZeroFree, true)
    } else {
        (VerdictKind::Unknown, false)
    };
    let trivial_zero_index = (verdict == VerdictKind::TrivialOnly
        && s.im == 0.0
        && s.re < 0.0
        && (s.re / 2.0).fract() == 0.0)
        .then(|| (-s.re / 2.0) as u64);
    Verdict {
        verdict,
        labels,
        conditional,
        trivial_zero_index,
    }
}

/// Evaluated right-hand sides of the remainder bound and the U bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub r_bound: f64,
    pub u_bound: f64,
    pub components: BTreeMap<String, f64>,
    /// log₁₀ of each component; finite even where the component underflows.
    pub log10_components: BTreeMap<String, f64>,
    /// "4" or "29exp(-pi eta2)": the branch chosen in min(4, 29e^{-πη₂}).
    pub remainder_branch: String,
    pub log_space: bool,
}

fn check_remainder_domain(frame: &EtaFrame) -> Result<()> {
    let s = frame.s;
    if !(s.re < 1.0) || (s - 1.0).norm() < 4.0 * PI {
        return Err(Error::Precondition(format!(
            "remainder bound needs sigma < 1 and |s-1| >= 4 pi, got s = {s}"
        )));
    }
    Ok(())
}

/// Natural logs of (min-term, gauss-term) of the remainder bound, and the branch.
fn remainder_logs(frame: &EtaFrame) -> (f64, f64, &'static str) {
    let abs_eta = frame.abs_eta();
    let log29 = 29f64.ln() - PI * frame.eta2;
    let four = 4f64.ln();
    let (min_log, branch) = if log29 < four { (log29, "29exp(-pi eta2)") } else { (four, "4") };
    (
        min_log - abs_eta.ln(),
        15f64.ln() - PI * abs_eta * abs_eta / 32.0 - abs_eta.ln(),
        branch,
    )
}

/// ln(4/|η| + gauss term): the bound with the min replaced by 4.
fn coarse_log(frame: &EtaFrame, log_gauss: f64) -> f64 {
    log_add(4f64.ln() - frame.abs_eta().ln(), log_gauss)
}

fn log_add(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// min(4, 29e^{-πη₂})/|η| + 15e^{-π|η|²/32}/|η|, for σ < 1 and |s-1| ≥ 4π.
pub fn bound_remainder(frame: &EtaFrame) -> Result<f64> {
    check_remainder_domain(frame)?;
    let (a, b, _) = remainder_logs(frame);
    Ok(a.exp() + b.exp())
}

/// ln sinh x for x > 0.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

/// The three-summand bound on |U| (with the remainder bound inside), for η₁, η₂ ≥ 2.
#[allow(non_snake_case)]
pub fn bound_U(frame: &EtaFrame) -> Result<BoundCertificate> {
    if !(frame.eta1 >= 2.0 && frame.eta2 >= 2.0) {
        return Err(Error::Precondition(format!(
            "U bound needs eta1 >= 2 and eta2 >= 2, got eta = {}",
            frame.eta
        )));
    }
    check_remainder_domain(frame)?;
    let (e1, e2) = (frame.eta1, frame.eta2);
    let abs2 = e1 * e1 + e2 * e2;
    let pe2 = PI * e2;
    // √2/(πη₂)·(1+πη₂)·e^{πη₂}
    let log_factor = 0.5 * LN_2 - pe2.ln() + pe2.ln_1p() + pe2;
    let (r_min, r_gauss, branch) = remainder_logs(frame);
    let log_r = log_add(r_min, r_gauss);

    let log_first = 1.10942f64.ln() + log_factor - 2.0 * PI * e1 * e1 * e2 * e2 / abs2;
    let log_second = log_factor + log_r;
    let log_third = -4.0 * PI * (e2 - 0.5) * e2 - 0.5 * LN_2 - ln_sinh(pe2);
    let log_total = log_add(log_add(log_first, log_second), log_third);

    let logs = [
        ("remainder_coarse", coarse_log(frame, r_gauss)),
        ("factor", log_factor),
        ("first_summand", log_first),
        ("second_summand", log_second),
        ("third_summand", log_third),
        ("remainder_min_term", r_min),
        ("remainder_gauss_term", r_gauss),
        ("r_bound", log_r),
        ("u_bound", log_total),
    ];
    let components = logs.iter().map(|(k, v)| (k.to_string(), v.exp())).collect();
    let log10_components = logs.iter().map(|(k, v)| (k.to_string(), v / LN_10)).collect();
    Ok(BoundCertificate {
        r_bound: r_min.exp() + r_gauss.exp(),
        u_bound: log_total.exp(),
        components,
        log10_components,
        remainder_branch: branch.to_string(),
        log_space: true,
    })
}

/// Remainder-only certificate for points outside H (u_bound is NaN there).
pub fn remainder_certificate(frame: &EtaFrame) -> Result<BoundCertificate> {
    check_remainder_domain(frame)?;
    let (a, b, branch) = remainder_logs(frame);
    let logs = [
        ("remainder_coarse", coarse_log(frame, b)),
        ("remainder_min_term", a), ("remainder_gauss_term", b), ("r_bound", log_add(a, b))];
    Ok(BoundCertificate {
        r_bound: a.exp() + b.exp(),
        u_bound: f64::NAN,
        components: logs.iter().map(|(k, v)| (k.to_string(), v.exp())).collect(),
        log10_components: logs.iter().map(|(k, v)| (k.to_string(), v / LN_10)).collect(),
        remainder_branch: branch.to_string(),
        log_space: true,
    })
}
