//! Zeros of R(s) in rectangles: argument-principle counts and Newton refinement.

use crate::error::{Error, Result};
use crate::evaluate::{alternate, evaluate, evaluate_with, normalized_residual, Evaluator, Method};
use crate::ext::{wrap_phase, ExtComplex};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::io::{self, Write};

/// |R| below this multiple of the local scale counts as a zero on the contour.
pub const BOUNDARY_GUARD: f64 = 1e-9;
/// Outward shift applied per retry when the contour meets a zero.
pub const PERTURBATION: f64 = 0.01;
pub const MAX_RETRIES: usize = 3;
pub const DEDUP_TOL: f64 = 1e-6;
pub const TRIVIAL_TOL: f64 = 1e-4;
pub const MAX_NEWTON_ITERS: usize = 50;
/// Largest normalized residual accepted for a refined zero.
pub const RESIDUAL_LIMIT: f64 = 1e-6;
/// Interior tile lines sit this fraction of a step off the regular grid, so
/// they miss lattice points such as the even integers.
const TILE_JITTER: f64 = 0.0371;
const EVAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rectangle {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let all_finite = [sigma_min, sigma_max, t_min, t_max].iter().all(|v| v.is_finite());
        if !all_finite || sigma_min >= sigma_max || t_min >= t_max {
            return Err(Error::Precondition(format!(
                "rectangle needs sigma_min < sigma_max and t_min < t_max, got [{sigma_min}, {sigma_max}] x [{t_min}, {t_max}]"
            )));
        }
        Ok(Self {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        })
    }

    /// Square of half-width `r` around `c`.
    pub fn around(c: Complex64, r: f64) -> Result<Self> {
        Self::new(c.re - r, c.re + r, c.im - r, c.im + r)
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min && s.re <= self.sigma_max && s.im >= self.t_min && s.im <= self.t_max
    }

    pub fn expanded(&self, d: f64) -> Self {
        Self {
            sigma_min: self.sigma_min - d,
            sigma_max: self.sigma_max + d,
            t_min: self.t_min - d,
            t_max: self.t_max + d,
        }
    }

    /// Corners in counterclockwise order starting at the lower left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma_min, self.t_min),
            Complex64::new(self.sigma_max, self.t_min),
            Complex64::new(self.sigma_max, self.t_max),
            Complex64::new(self.sigma_min, self.t_max),
        ]
    }

    fn tile_error(&self, source: Error) -> Error {
        Error::Tile {
            sigma_min: self.sigma_min,
            sigma_max: self.sigma_max,
            t_min: self.t_min,
            t_max: self.t_max,
            source: Box::new(source),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    Trivial,
    Nontrivial,
}

impl fmt::Display for ZeroKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroKind::Trivial => "trivial",
            ZeroKind::Nontrivial => "nontrivial",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub re: f64,
    pub im: f64,
    pub kind: ZeroKind,
    /// |R| at the location over the local scale.
    pub residual: f64,
    pub evaluator: Evaluator,
    pub newton_iters: usize,
    /// The same residual under the other evaluator, where it applies.
    pub cross_residual: Option<f64>,
}

impl ZeroRecord {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Within `TRIVIAL_TOL` of some -2n, n ≥ 1.
pub fn is_trivial_location(s: Complex64) -> bool {
    let n = (-s.re / 2.0).round();
    n >= 1.0 && (s - Complex64::new(-2.0 * n, 0.0)).norm() <= TRIVIAL_TOL
}

struct Sample {
    s: Complex64,
    phase: f64,
}

fn sample(s: Complex64, tol: f64) -> Result<Sample> {
    let v = evaluate(s, Method::Auto, tol)?.value;
    if normalized_residual(&v, s) < BOUNDARY_GUARD {
        return Err(Error::BoundaryZero { at: s });
    }
    Ok(Sample { s, phase: v.phase() })
}

/// Phase change from `a` to `b`, bisecting until each step turns by < π/2.
fn edge_phase(a: &Sample, b: &Sample, tol: f64, depth: usize) -> Result<f64> {
    let d = wrap_phase(b.phase - a.phase);
    if d.abs() < FRAC_PI_2 {
        return Ok(d);
    }
    if depth > 40 || (b.s - a.s).norm() < 1e-12 * (1.0 + a.s.norm()) {
        return Err(Error::NonConvergence(format!(
            "argument walk step underflow between {} and {}",
            a.s, b.s
        )));
    }
    let m = sample(0.5 * (a.s + b.s), tol)?;
    Ok(edge_phase(a, &m, tol, depth + 1)? + edge_phase(&m, b, tol, depth + 1)?)
}

fn winding_once(rect: &Rectangle, tol: f64) -> Result<i64> {
    let corners = rect.corners();
    let mut total = 0.0;
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        let pieces = ((q - p).norm() / 0.05).ceil().max(4.0) as usize;
        let mut prev = sample(p, tol)?;
        for j in 1..=pieces {
            let next = sample(p + (q - p) * (j as f64 / pieces as f64), tol)?;
            total += edge_phase(&prev, &next, tol, 0)?;
            prev = next;
        }
    }
    let turns = total / TAU;
    let count = turns.round();
    if (turns - count).abs() > 0.05 {
        return Err(Error::NonConvergence(format!("winding number {turns} is not near an integer")));
    }
    Ok(count as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub count: i64,
    /// The contour actually walked, after any perturbation.
    pub rect: Rectangle,
    pub perturbations: usize,
}

/// Argument-principle count, enlarging the rectangle by 0.01 per retry when
/// the contour passes through (or next to) a zero.
pub fn winding_count_detailed(rect: &Rectangle, tol: f64) -> Result<WindingResult> {
    let mut attempt = *rect;
    for k in 0..=MAX_RETRIES {
        match winding_once(&attempt, tol) {
            Ok(count) => {
                return Ok(WindingResult {
                    count,
                    rect: attempt,
                    perturbations: k,
                })
            }
            Err(e @ Error::BoundaryZero { .. }) if k == MAX_RETRIES => return Err(e),
            Err(Error::BoundaryZero { .. }) => attempt = attempt.expanded(PERTURBATION),
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop returns on the last retry")
}

pub fn winding_count(rect: &Rectangle, tol: f64) -> Result<i64> {
    Ok(winding_count_detailed(rect, tol)?.count)
}

fn value_at(s: Complex64, tol: f64) -> Result<(ExtComplex, Evaluator)> {
    let e = evaluate(s, Method::Auto, tol)?;
    Ok((e.value, e.method_used))
}

/// Newton's method with a central-difference derivative and step halving.
pub fn refine_zero(seed: Complex64, tol: f64) -> Result<ZeroRecord> {
    let newton_err = |reason: String| Error::Newton { seed, reason };
    let mut s = seed;
    let (mut f, _) = value_at(s, EVAL_TOL)?;
    for iter in 1..=MAX_NEWTON_ITERS {
        if f.is_zero() {
            return finish(seed, s, iter - 1);
        }
        let h = 1e-5 * s.norm().max(1.0);
        let (fp, _) = value_at(s + h, EVAL_TOL)?;
        let (fm, _) = value_at(s - h, EVAL_TOL)?;
        let deriv = (fp - fm).mul_real(0.5 / h);
        if deriv.is_zero() {
            return Err(newton_err(format!("derivative underflow at {s}")));
        }
        let step = (f / deriv).to_complex();
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(newton_err(format!("non-finite step at {s}")));
        }
        if step.norm() < tol {
            return finish(seed, s - step, iter);
        }
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = s - step * lambda;
            if let Ok((fc, _)) = value_at(cand, EVAL_TOL) {
                if fc.is_zero() || fc.log_modulus() < f.log_modulus() {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((cand, fc)) = accepted else {
            return Err(newton_err(format!("no descent from {s}; seed outside the basin")));
        };
        if (cand - s).norm() < tol {
            return finish(seed, cand, iter);
        }
        s = cand;
        f = fc;
    }
    Err(newton_err(format!("no convergence in {MAX_NEWTON_ITERS} iterations (last {s})")))
}

fn finish(seed: Complex64, s: Complex64, iters: usize) -> Result<ZeroRecord> {
    let (v, evaluator) = value_at(s, EVAL_TOL)?;
    let residual = normalized_residual(&v, s);
    if !(residual <= RESIDUAL_LIMIT) {
        return Err(Error::Newton {
            seed,
            reason: format!("stopped at {s} with residual {residual:e}"),
        });
    }
    let cross_residual = alternate(s, evaluator)
        .and_then(|other| evaluate_with(s, other, EVAL_TOL).ok())
        .map(|e| normalized_residual(&e.value, s));
    Ok(ZeroRecord {
        re: s.re,
        im: s.im,
        kind: if is_trivial_location(s) { ZeroKind::Trivial } else { ZeroKind::Nontrivial },
        residual,
        evaluator,
        newton_iters: iters,
        cross_residual,
    })
}

fn grid_lines(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step - 1e-9).ceil().max(1.0) as usize;
    let mut lines = vec![a];
    for i in 1..n {
        let x = a + (i as f64 + TILE_JITTER) * step;
        if x < b - 0.5 * TILE_JITTER * step {
            lines.push(x);
        }
    }
    lines.push(b);
    lines
}

/// Tiles of roughly `step` by `step` covering `rect` exactly.
pub fn tiles(rect: &Rectangle, step: f64) -> Result<Vec<Rectangle>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Precondition(format!("grid step must be positive, got {step}")));
    }
    let xs = grid_lines(rect.sigma_min, rect.sigma_max, step);
    let ys = grid_lines(rect.t_min, rect.t_max, step);
    let mut out = Vec::new();
    for x in xs.windows(2) {
        for y in ys.windows(2) {
            out.push(Rectangle::new(x[0], x[1], y[0], y[1])?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileReport {
    pub tile: Rectangle,
    pub count: i64,
    pub perturbations: usize,
    /// Counted zeros Newton failed to locate.
    pub unresolved: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub zeros: Vec<ZeroRecord>,
    pub tiles: Vec<TileReport>,
    pub total_count: i64,
}

impl ScanReport {
    pub fn trivial_count(&self) -> usize {
        self.zeros.iter().filter(|z| z.kind == ZeroKind::Trivial).count()
    }

    pub fn nontrivial_count(&self) -> usize {
        self.zeros.len() - self.trivial_count()
    }

    pub fn unresolved(&self) -> usize {
        self.tiles.iter().map(|t| t.unresolved).sum()
    }
}

fn push_unique(found: &mut Vec<ZeroRecord>, z: ZeroRecord) -> bool {
    if found.iter().any(|k| (k.location() - z.location()).norm() < DEDUP_TOL) {
        return false;
    }
    found.push(z);
    true
}

fn scan_tile(tile: &Rectangle, tol: f64) -> Result<(TileReport, Vec<ZeroRecord>)> {
    let w = winding_count_detailed(tile, tol)?;
    let mut found = Vec::new();
    if w.count > 0 {
        let r = w.rect;
        // seeds: the 5x5 cell centres, most promising first
        let mut seeds = Vec::with_capacity(25);
        for i in 0..5 {
            for j in 0..5 {
                let s = Complex64::new(
                    r.sigma_min + (i as f64 + 0.5) * (r.sigma_max - r.sigma_min) / 5.0,
                    r.t_min + (j as f64 + 0.5) * (r.t_max - r.t_min) / 5.0,
                );
                let v = evaluate(s, Method::Auto, tol)?.value;
                seeds.push((normalized_residual(&v, s), s));
            }
        }
        seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, seed) in seeds {
            if found.len() as i64 >= w.count {
                break;
            }
            if let Ok(z) = refine_zero(seed, 1e-12) {
                if r.contains(z.location()) {
                    push_unique(&mut found, z);
                }
            }
        }
    }
    let report = TileReport {
        tile: *tile,
        count: w.count,
        perturbations: w.perturbations,
        unresolved: (w.count.max(0) as usize).saturating_sub(found.len()),
    };
    Ok((report, found))
}

/// Tile `rect`, count zeros per tile, refine them, and merge.
///
/// Zeros are deduplicated within 1e-6 and sorted by (re, im). Per-tile counts
/// add up to the count of `rect` whenever no tile needed perturbing.
pub fn scan_region_report(rect: &Rectangle, grid_step: f64, tol: f64) -> Result<ScanReport> {
    let tiles = tiles(rect, grid_step)?;
    let results = tiles
        .par_iter()
        .map(|t| scan_tile(t, tol).map_err(|e| t.tile_error(e)))
        .collect::<Result<Vec<_>>>()?;
    let mut zeros = Vec::new();
    let mut reports = Vec::with_capacity(results.len());
    for (report, found) in results {
        reports.push(report);
        for z in found {
            push_unique(&mut zeros, z);
        }
    }
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let total_count = reports.iter().map(|r| r.count).sum();
    Ok(ScanReport {
        zeros,
        tiles: reports,
        total_count,
    })
}

pub fn scan_region(rect: &Rectangle, grid_step: f64) -> Result<Vec<ZeroRecord>> {
    Ok(scan_region_report(rect, grid_step, EVAL_TOL)?.zeros)
}

pub const CSV_HEADER: &str = "re,im,kind,residual,evaluator,newton_iters";

pub fn write_csv<W: Write>(w: W, zeros: &[ZeroRecord]) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER.split(','))?;
    for z in zeros {
        out.write_record([
            format!("{:.16e}", z.re),
            format!("{:.16e}", z.im),
            z.kind.to_string(),
            format!("{:.16e}", z.residual),
            z.evaluator.to_string(),
            z.newton_iters.to_string(),
        ])?;
    }
    out.flush()
}

pub fn write_jsonl<W: Write>(mut w: W, zeros: &[ZeroRecord]) -> io::Result<()> {
    for z in zeros {
        serde_json::to_writer(&mut w, z)?;
        writeln!(w)?;
    }
    Ok(())
}
