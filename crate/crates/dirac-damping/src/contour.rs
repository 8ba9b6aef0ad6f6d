//! Eigenvalue location for arbitrary damping placement.
//!
//! `S(λ)` is entire, so the number of zeros inside a rectangle equals its
//! boundary winding number.  The winding is computed by adaptive phase
//! tracking (no integration of `S'/S`): the boundary is sampled until every
//! step turns the phase by less than π/2, and the accumulated turn divided by
//! 2π is the count, with multiplicity.  Rectangles are then bisected until
//! each holds at most one zero and the zero is polished by Newton's method on
//! `F = λS`, switching to the multiplicity-2 step near double roots.
//!
//! Real parts of the spectrum live in a fixed strip; [`default_strip`] grows
//! the real extent from the empirical bound `max(4, 2|α|)` until the count
//! stabilizes.

use crate::charfn::{self, CharFnError, DampingParams, SERIES_RADIUS};
use crate::rational::{self, EigenvalueRecord, SpectrumError, DOUBLE_TOL, TRIPLE_GUARD};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Rectangle in the spectral plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SpectralWindow {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, ContourError> {
        let fine = re_min.is_finite() && re_max.is_finite() && im_min.is_finite() && im_max.is_finite();
        if !fine || re_min >= re_max || im_min >= im_max {
            return Err(ContourError::InvalidWindow);
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn diameter(&self) -> f64 {
        let w = self.re_max - self.re_min;
        let h = self.im_max - self.im_min;
        (w * w + h * h).sqrt()
    }

    pub fn contains(&self, z: Complex64, margin: f64) -> bool {
        self.re_min - margin <= z.re
            && z.re <= self.re_max + margin
            && self.im_min - margin <= z.im
            && z.im <= self.im_max + margin
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn dilated(&self, factor: f64) -> Self {
        let c = self.center();
        let hw = 0.5 * (self.re_max - self.re_min) * factor;
        let hh = 0.5 * (self.im_max - self.im_min) * factor;
        Self {
            re_min: c.re - hw,
            re_max: c.re + hw,
            im_min: c.im - hh,
            im_max: c.im + hh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("window bounds must be finite with re_min < re_max and im_min < im_max")]
    InvalidWindow,
    #[error("a zero of S sits on the window boundary after {0} dilation attempts")]
    BoundaryZero(u32),
    #[error("phase tracking exceeded the refinement budget")]
    PhaseStepExceeded,
    #[error("window subdivision failed: no zero-free cut found")]
    NoCleanCut,
    #[error("Newton iteration did not converge from seed {0}")]
    NewtonDidNotConverge(Complex64),
    #[error("Newton iterate escaped its isolation cell near {0}")]
    NewtonEscaped(Complex64),
    #[error("seed rejected: F' and F'' both vanish at {0}")]
    SeedDegenerate(Complex64),
    #[error("winding count {count} does not match located multiplicity {located}")]
    CountMismatch { count: u32, located: u32 },
    #[error("a cell reports {0} coincident zeros, contradicting the at-most-double bound")]
    MultiplicityTooHigh(u32),
    #[error(transparent)]
    CharFn(#[from] CharFnError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

const MAX_DILATIONS: u32 = 8;
const DILATION: f64 = 1.0 + 1e-3;
/// Per-edge budget of boundary samples (spec'd refinement cap).
const EDGE_BUDGET: usize = 1 << 14;
/// Boundary samples this close to a zero (relative) trigger dilation.
const BOUNDARY_REL_TOL: f64 = 1e-10;
/// Cells smaller than this are treated as one (possibly multiple) zero.
const MIN_CELL: f64 = 1e-6;
const NEWTON_MAX_ITER: u32 = 60;

/// Direction (phase) of `S(λ)` and its relative residual; the positive real
/// scale factor from the overflow-safe evaluation drops out of both.
fn boundary_probe(lambda: Complex64, params: &DampingParams) -> (Complex64, f64) {
    if lambda.norm() < SERIES_RADIUS {
        // S ≈ π near the origin; never small there
        let v = charfn::eval_s(lambda, params).expect("series evaluation is total");
        (v, v.norm() / PI)
    } else {
        let (f, _, _, scale) = charfn::f_derivatives_scaled(lambda, params);
        (f.mantissa / lambda, f.mantissa.norm() / scale)
    }
}

enum WalkFailure {
    BoundaryZero,
    BudgetExceeded,
}

/// Accumulated phase turn of `S` along the segment, refined until every step
/// is below π/2.
fn edge_phase_turn(
    from: Complex64,
    to: Complex64,
    params: &DampingParams,
) -> Result<f64, WalkFailure> {
    let probe = |t: f64| {
        let z = from + (to - from) * t;
        boundary_probe(z, params)
    };
    let check = |v: &(Complex64, f64)| -> Result<(), WalkFailure> {
        if v.1 < BOUNDARY_REL_TOL {
            Err(WalkFailure::BoundaryZero)
        } else {
            Ok(())
        }
    };

    let mut budget = EDGE_BUDGET as isize;
    let v0 = probe(0.0);
    let v1 = probe(1.0);
    check(&v0)?;
    check(&v1)?;
    let mut total = 0.0;
    // (t0, dir0, t1, dir1) segments awaiting a small-enough phase step
    let mut stack = vec![(0.0, v0.0, 1.0, v1.0)];
    while let Some((t0, d0, t1, d1)) = stack.pop() {
        let step = (d1 / d0).arg();
        if step.abs() < 0.5 * PI {
            total += step;
            continue;
        }
        budget -= 1;
        if budget <= 0 {
            return Err(WalkFailure::BudgetExceeded);
        }
        let tm = 0.5 * (t0 + t1);
        let vm = probe(tm);
        check(&vm)?;
        stack.push((t0, d0, tm, vm.0));
        stack.push((tm, vm.0, t1, d1));
    }
    Ok(total)
}

/// Winding number of `S` around the rectangle, without boundary dilation.
fn winding(window: &SpectralWindow, params: &DampingParams) -> Result<u32, WalkFailure> {
    let corners = window.corners();
    let mut total = 0.0;
    for i in 0..4 {
        total += edge_phase_turn(corners[i], corners[(i + 1) % 4], params)?;
    }
    let count = total / (2.0 * PI);
    let rounded = count.round();
    if (count - rounded).abs() > 0.25 || rounded < -0.25 {
        // phase bookkeeping failed; treat like a budget problem
        return Err(WalkFailure::BudgetExceeded);
    }
    Ok(rounded as u32)
}

/// Count zeros of `S` (with multiplicity) in `window`.
///
/// A zero detected on the boundary dilates the window by 1 + 1e-3 and
/// retries, up to 8 attempts.
pub fn count_zeros(window: &SpectralWindow, params: &DampingParams) -> Result<u32, ContourError> {
    Ok(count_with_dilation(window, params)?.1)
}

fn count_with_dilation(
    window: &SpectralWindow,
    params: &DampingParams,
) -> Result<(SpectralWindow, u32), ContourError> {
    let mut current = *window;
    for attempt in 0..MAX_DILATIONS {
        match winding(&current, params) {
            Ok(count) => return Ok((current, count)),
            Err(WalkFailure::BoundaryZero) => current = current.dilated(DILATION),
            Err(WalkFailure::BudgetExceeded) => {
                if attempt + 1 == MAX_DILATIONS {
                    return Err(ContourError::PhaseStepExceeded);
                }
                current = current.dilated(DILATION);
            }
        }
    }
    Err(ContourError::BoundaryZero(MAX_DILATIONS))
}

/// Outcome of a Newton polish.
#[derive(Debug, Clone, Copy)]
pub struct NewtonOutcome {
    pub record: EigenvalueRecord,
    pub iterations: u32,
}

/// Newton's method on `F`, with the multiplicity-2 step `λ -= 2F/F'` when
/// the derivative signature indicates a double root.
pub fn newton_refine(
    seed: Complex64,
    params: &DampingParams,
) -> Result<NewtonOutcome, ContourError> {
    let (_, f1, f2, scale) = charfn::f_derivatives_scaled(seed, params);
    if f1.mantissa.norm() <= 1e-12 * PI * scale && f2.mantissa.norm() <= 1e-12 * PI * PI * scale {
        return Err(ContourError::SeedDegenerate(seed));
    }
    let mut lambda = seed;
    for iter in 0..NEWTON_MAX_ITER {
        let (f, f1, f2, _) = charfn::f_derivatives_scaled(lambda, params);
        let fv = f.mantissa.norm();
        let f1v = f1.mantissa.norm();
        let step = if f1v * f1v > 1.5 * fv * f2.mantissa.norm() {
            f.mantissa / f1.mantissa
        } else if f1v > 1e-300 {
            2.0 * f.mantissa / f1.mantissa
        } else {
            // F' vanished away from a root: walk down F' instead
            f1.mantissa / f2.mantissa
        };
        lambda -= step;
        if !lambda.is_finite() {
            return Err(ContourError::NewtonDidNotConverge(seed));
        }
        if step.norm() <= 1e-15 * (1.0 + lambda.norm()) {
            let (f, f1, f2, scale) = charfn::f_derivatives_scaled(lambda, params);
            if f.mantissa.norm() > 1e-12 * scale {
                return Err(ContourError::NewtonDidNotConverge(seed));
            }
            let double = f.mantissa.norm() <= DOUBLE_TOL * scale
                && f1.mantissa.norm() <= DOUBLE_TOL * PI * scale;
            if double && f2.mantissa.norm() < TRIPLE_GUARD * PI * PI * scale {
                return Err(ContourError::Spectrum(SpectrumError::TripleRoot(lambda)));
            }
            let residual = charfn::eval_s(lambda, params).map(|v| v.norm()).unwrap_or(f64::INFINITY);
            return Ok(NewtonOutcome {
                record: EigenvalueRecord {
                    lambda,
                    family: 0,
                    branch: 0,
                    alg_multiplicity: if double { 2 } else { 1 },
                    geo_multiplicity: 1,
                    residual,
                },
                iterations: iter + 1,
            });
        }
        let _ = (fv, scale);
    }
    Err(ContourError::NewtonDidNotConverge(seed))
}

/// Split a cell at a zero-free cut, trying nudged positions when a zero sits
/// on the proposed line.
fn split_cell(
    cell: &SpectralWindow,
    count: u32,
    params: &DampingParams,
) -> Result<[(SpectralWindow, u32); 2], ContourError> {
    let vertical = (cell.re_max - cell.re_min) >= (cell.im_max - cell.im_min);
    for fraction in [0.5, 0.53, 0.47, 0.56, 0.44, 0.59, 0.41, 0.62] {
        let (left, right) = if vertical {
            let cut = cell.re_min + fraction * (cell.re_max - cell.re_min);
            (
                SpectralWindow { re_max: cut, ..*cell },
                SpectralWindow { re_min: cut, ..*cell },
            )
        } else {
            let cut = cell.im_min + fraction * (cell.im_max - cell.im_min);
            (
                SpectralWindow { im_max: cut, ..*cell },
                SpectralWindow { im_min: cut, ..*cell },
            )
        };
        let Ok(n_left) = winding(&left, params) else { continue };
        let Ok(n_right) = winding(&right, params) else { continue };
        if n_left + n_right == count {
            return Ok([(left, n_left), (right, n_right)]);
        }
    }
    Err(ContourError::NoCleanCut)
}

/// Resolve a minimum-size cell reported to hold `count` zeros: either a
/// genuine double or two nearly-coincident simple zeros.
fn resolve_cluster(
    cell: &SpectralWindow,
    count: u32,
    params: &DampingParams,
    out: &mut Vec<EigenvalueRecord>,
) -> Result<(), ContourError> {
    if count > 2 {
        return Err(ContourError::MultiplicityTooHigh(count));
    }
    let outcome = newton_refine(cell.center(), params)?;
    if count == 1 || outcome.record.alg_multiplicity == 2 {
        let mut record = outcome.record;
        record.alg_multiplicity = record.alg_multiplicity.max(count as u8);
        out.push(record);
        return Ok(());
    }
    // count == 2 but the λ-level test says simple: two distinct zeros.
    // Branch off the local quadratic model F + F'Δ + F''Δ²/2 = 0.
    let z = outcome.record.lambda;
    let v = charfn::eval_f_derivatives(z, params)?;
    let disc = (v.f1 * v.f1 - 2.0 * v.f * v.f2).sqrt();
    for sign in [1.0, -1.0] {
        let seed = z + (-v.f1 + sign * disc) / v.f2;
        out.push(newton_refine(seed, params)?.record);
    }
    Ok(())
}

/// All eigenvalues of `A(a, α)` in `window`, located by bisection of the
/// winding count and polished by Newton's method.
///
/// Total multiplicity is checked against the winding count of the whole
/// window.  Records carry `family = 0` (no rational attribution).
pub fn locate_eigenvalues(
    window: &SpectralWindow,
    params: &DampingParams,
) -> Result<Vec<EigenvalueRecord>, ContourError> {
    let (root_window, total) = count_with_dilation(window, params)?;
    let mut records: Vec<EigenvalueRecord> = Vec::with_capacity(total as usize);
    let mut stack = vec![(root_window, total)];
    while let Some((cell, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if cell.diameter() < MIN_CELL {
            resolve_cluster(&cell, count, params, &mut records)?;
            continue;
        }
        if count == 1 {
            let outcome = newton_refine(cell.center(), params).or_else(|_| {
                // perturbed restarts from the cell quarter points
                let c = cell.center();
                let dx = 0.25 * (cell.re_max - cell.re_min);
                let dy = 0.25 * (cell.im_max - cell.im_min);
                [(dx, dy), (-dx, dy), (dx, -dy), (-dx, -dy)]
                    .iter()
                    .find_map(|(ex, ey)| newton_refine(c + Complex64::new(*ex, *ey), params).ok())
                    .ok_or(ContourError::NewtonDidNotConverge(c))
            })?;
            if !cell.contains(outcome.record.lambda, 1e-7 * (1.0 + outcome.record.lambda.norm())) {
                // a polished zero must stay in its isolation cell; a slip
                // only happens right next to a cut, so keep bisecting
                stack.extend(split_cell(&cell, count, params)?);
                continue;
            }
            records.push(outcome.record);
            continue;
        }
        let halves = split_cell(&cell, count, params)?;
        stack.extend(halves);
    }

    // merge duplicates (possible when a zero sits close to a cut)
    rational::sort_records(&mut records);
    let mut merged: Vec<EigenvalueRecord> = Vec::with_capacity(records.len());
    for rec in records {
        if let Some(last) = merged.last_mut() {
            if (last.lambda - rec.lambda).norm() <= 1e-9 * (1.0 + rec.lambda.norm()) {
                last.alg_multiplicity = last.alg_multiplicity.max(rec.alg_multiplicity);
                continue;
            }
        }
        merged.push(rec);
    }
    let located: u32 = merged.iter().map(|r| r.alg_multiplicity as u32).sum();
    if located != total {
        return Err(ContourError::CountMismatch { count: total, located });
    }
    Ok(merged)
}

/// A window covering `Im λ ∈ [im_min, im_max]` whose real extent starts at
/// the empirical bound `c₁ = max(4, 2|α|)` and widens until the zero count
/// stabilizes.  Returns the window and the final `c₁`.
pub fn default_strip(
    params: &DampingParams,
    im_min: f64,
    im_max: f64,
) -> Result<(SpectralWindow, f64), ContourError> {
    let mut c1 = 4.0f64.max(2.0 * params.alpha().norm());
    let mut window = SpectralWindow::new(-c1, c1, im_min, im_max)?;
    let mut count = count_zeros(&window, params)?;
    for _ in 0..6 {
        let wider_c1 = 1.5 * c1;
        let wider = SpectralWindow::new(-wider_c1, wider_c1, im_min, im_max)?;
        let wider_count = count_zeros(&wider, params)?;
        if wider_count == count {
            return Ok((window, c1));
        }
        c1 = wider_c1;
        window = wider;
        count = wider_count;
    }
    Ok((window, c1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn count_undamped_single_zero() {
        let params = DampingParams::new(1.0, c(0.0, 0.0)).unwrap();
        let window = SpectralWindow::new(-1.0, 1.0, 0.5, 1.5).unwrap();
        assert_eq!(count_zeros(&window, &params).unwrap(), 1);
    }

    #[test]
    fn count_central_critical() {
        // a = π/2, α = 2: zeros at 2ik; window catches only 2i
        let params = DampingParams::rational(1, 2, c(2.0, 0.0)).unwrap();
        let window = SpectralWindow::new(-1.0, 1.0, 1.0, 3.0).unwrap();
        assert_eq!(count_zeros(&window, &params).unwrap(), 1);
    }

    #[test]
    fn count_empty_far_strip() {
        let params = DampingParams::new(1.3, c(1.0, 0.5)).unwrap();
        let window = SpectralWindow::new(9.5, 10.5, -3.0, 3.0).unwrap();
        assert_eq!(count_zeros(&window, &params).unwrap(), 0);
    }

    #[test]
    fn count_is_additive_over_partitions() {
        let params = DampingParams::new(0.9, c(1.5, -0.7)).unwrap();
        let window = SpectralWindow::new(-2.1, 2.2, -5.3, 5.4).unwrap();
        let total = count_zeros(&window, &params).unwrap();
        assert!(total > 0);
        for cut_fraction in [0.37, 0.5, 0.71] {
            let cut = window.im_min + cut_fraction * (window.im_max - window.im_min);
            let lower = SpectralWindow::new(window.re_min, window.re_max, window.im_min, cut).unwrap();
            let upper = SpectralWindow::new(window.re_min, window.re_max, cut, window.im_max).unwrap();
            let sum = count_zeros(&lower, &params).unwrap() + count_zeros(&upper, &params).unwrap();
            assert_eq!(sum, total, "partition at fraction {cut_fraction}");
        }
    }

    #[test]
    fn newton_converges_to_undamped_eigenvalue() {
        let params = DampingParams::new(1.0, c(0.0, 0.0)).unwrap();
        let out = newton_refine(c(0.05, 0.99), &params).unwrap();
        assert_relative_eq!(out.record.lambda.im, 1.0, max_relative = 1e-13);
        assert!(out.record.lambda.re.abs() < 1e-13);
        assert_eq!(out.record.alg_multiplicity, 1);
        assert!(out.iterations > 0);
    }

    #[test]
    fn newton_double_step_at_sqrt3_double_root() {
        let alpha = c(3.0f64.sqrt(), 0.0);
        let params = DampingParams::rational(1, 3, alpha).unwrap();
        let expected = c(-(3.0 / (2.0 * PI)) * (2.0 + 3.0f64.sqrt()).ln(), -1.5);
        let out = newton_refine(expected + c(3e-3, -2e-3), &params).unwrap();
        assert!((out.record.lambda - expected).norm() < 1e-9);
        assert_eq!(out.record.alg_multiplicity, 2);
    }

    #[test]
    fn locate_matches_central_critical_ladder() {
        // a = π/2, α = 2: spectrum {2ik}; Im ∈ [-7, 7] → ±2i, ±4i, ±6i
        let params = DampingParams::rational(1, 2, c(2.0, 0.0)).unwrap();
        let window = SpectralWindow::new(-2.0, 2.0, -7.0, 7.0).unwrap();
        let records = locate_eigenvalues(&window, &params).unwrap();
        let ims: Vec<i64> = records.iter().map(|r| (r.lambda.im / 2.0).round() as i64).collect();
        assert_eq!(ims, vec![-3, -2, -1, 1, 2, 3]);
        for r in &records {
            assert!((r.lambda.im - 2.0 * (r.lambda.im / 2.0).round()).abs() < 1e-11);
            assert!(r.lambda.re.abs() < 1e-11);
        }
    }

    #[test]
    fn locate_agrees_with_rational_path() {
        let params = DampingParams::rational(2, 5, c(1.3, 0.4)).unwrap();
        let window = SpectralWindow::new(-3.0, 3.0, -8.2, 8.2).unwrap();
        let by_contour = locate_eigenvalues(&window, &params).unwrap();
        let by_roots = rational::spectrum(&params, &window).unwrap();
        assert_eq!(by_contour.len(), by_roots.eigenvalues.len());
        for (a, b) in by_contour.iter().zip(by_roots.eigenvalues.iter()) {
            assert!(
                (a.lambda - b.lambda).norm() < 1e-9,
                "contour {} vs rational {}",
                a.lambda,
                b.lambda
            );
            assert_eq!(a.alg_multiplicity, b.alg_multiplicity);
        }
    }

    #[test]
    fn default_strip_stabilizes() {
        let params = DampingParams::new(1.9, c(1.0, 0.0)).unwrap();
        let (window, c1) = default_strip(&params, -4.5, 4.5).unwrap();
        assert!(c1 >= 4.0);
        assert_eq!(window.im_min, -4.5);
        // the stabilized strip count is consistent with full location
        let count = count_zeros(&window, &params).unwrap();
        let located = locate_eigenvalues(&window, &params).unwrap();
        let mult: u32 = located.iter().map(|r| r.alg_multiplicity as u32).sum();
        assert_eq!(count, mult);
        assert!(count >= 6);
    }
}
