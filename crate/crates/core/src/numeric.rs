//! Floating-point cross-checks: point evaluation, a seeded residual
//! spot-check and a growth-order estimator.
//!
//! The spot-check only evaluates the candidate `f` itself. Shifts are taken
//! by evaluating at `z + c`, and derivatives by a trapezoid-rule Cauchy
//! integral, so the symbolic derivative and shift code is not involved.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::pdde::Problem;

/// Default seed for sampling.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
/// Relative residual tolerance of the spot-check.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor below which a residual always passes.
pub const ABS_FLOOR: f64 = 1e-12;
/// Relative size below which a denominator counts as vanishing.
pub const POLE_TOL: f64 = 1e-12;
/// Default radii of the order estimator.
pub const DEFAULT_RADII: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];
/// Default number of sphere samples per radius.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Rise of the local slope across the grid that flags unresolved growth.
pub const SLOPE_DRIFT: f64 = 1.0;

const CAUCHY_NODES: usize = 32;

/// Value of `e` at `z`.
pub fn eval_point(e: &ExpPoly, z: &[Complex64]) -> Result<Complex64> {
    if z.len() != e.arity() {
        return Err(Error::ArityMismatch { left: e.arity(), right: z.len() });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for t in e.terms() {
        let (num, den, scale) = t.coeff.eval_parts(z);
        if den.norm() <= POLE_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::PoleAtPoint);
        }
        let mut phase = t.residual.to_complex();
        if let Some(p) = &t.phase {
            phase += eval_point(p.body(), z)?;
        }
        acc += num / den * (Complex64::i() * phase).exp();
    }
    Ok(acc)
}

/// `ln |e(z)|`, computed term-wise in log space so that large phases do not
/// overflow. Returns `+inf` when a phase itself is not representable.
pub fn log_abs_point(e: &ExpPoly, z: &[Complex64]) -> Result<f64> {
    let mut parts = Vec::with_capacity(e.terms().len());
    for t in e.terms() {
        let (num, den, scale) = t.coeff.eval_parts(z);
        if den.norm() <= POLE_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::PoleAtPoint);
        }
        let c = num / den;
        if c.norm() == 0.0 {
            continue;
        }
        let mut phase = t.residual.to_complex();
        if let Some(p) = &t.phase {
            phase += eval_point(p.body(), z)?;
        }
        if !phase.re.is_finite() || !phase.im.is_finite() {
            return Ok(f64::INFINITY);
        }
        parts.push((c.norm().ln() - phase.im, c.arg() + phase.re));
    }
    let Some(top) = parts.iter().map(|p| p.0).reduce(f64::max) else { return Ok(f64::NEG_INFINITY) };
    let sum: Complex64 = parts.iter().map(|(l, a)| Complex64::from_polar((l - top).exp(), *a)).sum();
    Ok(top + sum.norm().ln())
}

/// `d f / d z_j` at `z` by the trapezoid rule on a circle whose radius is
/// shrunk until `|f|` varies by at most a fixed factor on it.
pub fn numeric_partial(f: &ExpPoly, z: &[Complex64], j: usize) -> Result<Complex64> {
    let f0 = eval_point(f, z)?.norm();
    let mut r = 0.5;
    let mut w = z.to_vec();
    loop {
        let mut vals = Vec::with_capacity(CAUCHY_NODES);
        for k in 0..CAUCHY_NODES {
            let u = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / CAUCHY_NODES as f64);
            w[j - 1] = z[j - 1] + u * r;
            vals.push((u, eval_point(f, &w)?));
        }
        let max = vals.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        let min = vals.iter().map(|(_, v)| v.norm()).fold(f64::INFINITY, f64::min);
        if max <= 16.0 * f0.max(min) || r < 1e-8 || !max.is_finite() {
            let s: Complex64 = vals.iter().map(|(u, v)| v / u).sum();
            return Ok(s / (CAUCHY_NODES as f64 * r));
        }
        r *= 0.5;
    }
}

/// Residual of the problem at one point with its magnitude scale.
fn residual_at(prob: &Problem, f: &ExpPoly, z: &[Complex64]) -> Result<(f64, f64)> {
    let fz = eval_point(f, z)?;
    let zc: Vec<Complex64> = z.iter().zip(&prob.c).map(|(a, c)| a + c.to_complex()).collect();
    let fb = eval_point(f, &zc)?;
    let mut lf = Complex64::new(0.0, 0.0);
    for (j, q) in prob.l.entries() {
        lf += q.eval(z) * numeric_partial(f, z, *j)?;
    }
    let ev = |p: &crate::polyalg::MultiPoly| p.eval(z);
    let terms = [
        ev(&prob.p1) * lf,
        ev(&prob.p2) * fb,
        ev(&prob.p5) * fz,
        ev(&prob.p3) * lf,
        ev(&prob.p4) * fb,
        ev(&prob.p6) * fz,
    ];
    let x = terms[0] + terms[1] + terms[2];
    let y = terms[3] + terms[4] + terms[5];
    let pz = ev(&prob.p);
    let res = (x * x + y * y - pz).norm();
    let scale = terms.iter().map(|t| t.norm_sqr()).fold(pz.norm(), f64::max);
    Ok((res, scale))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpotCheckReport {
    pub seed: u64,
    pub radius: f64,
    pub points: usize,
    pub skipped_poles: usize,
    /// Largest absolute residual.
    pub max_abs: f64,
    /// Largest residual relative to the scale of the squared terms.
    pub max_rel: f64,
    /// Point attaining `max_rel`, as `(re, im)` pairs.
    pub argmax: Vec<(f64, f64)>,
    /// Every point satisfied `|res| <= max(REL_TOL * scale, ABS_FLOOR)`.
    pub passed: bool,
}

fn polydisc_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            Complex64::from_polar(radius * u.sqrt(), 2.0 * std::f64::consts::PI * v)
        })
        .collect()
}

/// Evaluates the residual at `points` seeded uniform points of the polydisc
/// of the given radius. Points where a denominator vanishes are skipped and
/// replaced.
pub fn spot_check(prob: &Problem, f: &ExpPoly, points: usize, seed: u64, radius: f64) -> Result<SpotCheckReport> {
    if f.arity() != prob.n {
        return Err(Error::ArityMismatch { left: prob.n, right: f.arity() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut skipped = 0;
    let mut results: Vec<(Vec<Complex64>, f64, f64)> = Vec::with_capacity(points);
    let max_attempts = points.saturating_mul(20).max(20);
    let mut attempts = 0;
    while results.len() < points && attempts < max_attempts {
        let batch: Vec<Vec<Complex64>> =
            (0..points - results.len()).map(|_| polydisc_point(&mut rng, prob.n, radius)).collect();
        attempts += batch.len();
        let evals: Vec<Result<(f64, f64)>> = batch.par_iter().map(|z| residual_at(prob, f, z)).collect();
        for (z, r) in batch.into_iter().zip(evals) {
            match r {
                Ok((res, scale)) => results.push((z, res, scale)),
                Err(Error::PoleAtPoint) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    let mut report = SpotCheckReport {
        seed,
        radius,
        points: results.len(),
        skipped_poles: skipped,
        max_abs: 0.0,
        max_rel: 0.0,
        argmax: Vec::new(),
        passed: results.len() == points,
    };
    for (z, res, scale) in &results {
        let rel = if *scale > 0.0 {
            res / scale
        } else if *res > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        if !res.is_finite() || *res > (REL_TOL * scale).max(ABS_FLOOR) {
            report.passed = false;
        }
        report.max_abs = report.max_abs.max(*res);
        if rel > report.max_rel || report.argmax.is_empty() || rel.is_nan() {
            report.max_rel = if rel.is_nan() { f64::INFINITY } else { rel };
            report.argmax = z.iter().map(|c| (c.re, c.im)).collect();
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub radii: Vec<f64>,
    /// Mean of `log+ |f|` over the sphere of each radius.
    pub means: Vec<f64>,
    /// Least-squares slope of `log mean` against `log r`.
    pub slope: f64,
    /// Root-mean-square deviation of the fitted line.
    pub fit_residual: f64,
    pub samples: usize,
    pub seed: u64,
    /// `true` when `f` has no exponential factor.
    pub polynomial: bool,
    /// Order reported: 0 for polynomials, the slope otherwise.
    pub order: f64,
    /// Some sample overflowed; growth is beyond what the grid resolves.
    pub exceeds_resolution: bool,
}

fn sphere_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    let v: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c * (radius / norm)).collect()
}

/// Estimates the order of growth of an entire candidate from the mean of
/// `log+ |f|` on spheres of increasing radius. The slope only certifies
/// finite growth up to the grid; a flag reports overflowing samples.
pub fn estimate_order(f: &ExpPoly, radii: &[f64], samples: usize, seed: u64) -> Result<OrderEstimate> {
    if !f.has_constant_denominators() {
        return Err(Error::NotEntireCandidate);
    }
    let polynomial = f.terms().iter().all(|t| t.phase.is_none());
    let n = f.arity();
    let mut means = Vec::with_capacity(radii.len());
    let mut exceeds = false;
    for (idx, &r) in radii.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let pts: Vec<Vec<Complex64>> = (0..samples).map(|_| sphere_point(&mut rng, n, r)).collect();
        let vals: Vec<f64> =
            pts.par_iter().map(|z| log_abs_point(f, z).map(|v| v.max(0.0)).unwrap_or(f64::INFINITY)).collect();
        let finite: Vec<f64> = vals.iter().copied().filter(|v| v.is_finite()).collect();
        if finite.len() < vals.len() {
            exceeds = true;
        }
        let m = if finite.is_empty() { f64::INFINITY } else { finite.iter().sum::<f64>() / finite.len() as f64 };
        means.push(m);
    }
    let pts: Vec<(f64, f64)> =
        radii.iter().zip(&means).filter(|(_, m)| m.is_finite() && **m > 0.0).map(|(r, m)| (r.ln(), m.ln())).collect();
    let (slope, fit_residual) = if pts.len() < 2 {
        (0.0, 0.0)
    } else {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let ss: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
        (slope, (ss / k).sqrt())
    };
    // Local slopes that keep rising mean faster than polynomial growth of
    // the characteristic on this grid.
    let local: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    if let (Some(first), Some(last)) = (local.first(), local.last()) {
        if last - first > SLOPE_DRIFT {
            exceeds = true;
        }
    }
    Ok(OrderEstimate {
        radii: radii.to_vec(),
        means,
        slope,
        fit_residual,
        samples,
        seed,
        polynomial,
        order: if polynomial { 0.0 } else { slope },
        exceeds_resolution: exceeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprio::parse_expr;

    #[test]
    fn eval_matches_closed_form() {
        let e = parse_expr("z1^2*E(z2) + 1/2", 2).unwrap();
        let z = [Complex64::new(0.3, -0.2), Complex64::new(1.1, 0.4)];
        let want = z[0] * z[0] * (Complex64::i() * z[1]).exp() + 0.5;
        assert!((eval_point(&e, &z).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn pole_detected() {
        let e = parse_expr("1/(z1 - 1)", 1).unwrap();
        assert_eq!(eval_point(&e, &[Complex64::new(1.0, 0.0)]), Err(Error::PoleAtPoint));
    }

    #[test]
    fn cauchy_derivative_of_steep_exponential() {
        let e = parse_expr("E(50*z1)", 1).unwrap();
        let z = [Complex64::new(0.2, -0.3)];
        let d = numeric_partial(&e, &z, 1).unwrap();
        let want = Complex64::new(0.0, 50.0) * (Complex64::new(0.0, 50.0) * z[0]).exp();
        assert!((d - want).norm() / want.norm() < 1e-12);
    }

    #[test]
    fn non_entire_rejected() {
        let e = parse_expr("1/z1", 1).unwrap();
        assert_eq!(estimate_order(&e, &[4.0, 8.0], 16, 1), Err(Error::NotEntireCandidate));
    }
}
