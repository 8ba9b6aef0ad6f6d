//! Explicit spectra for rational damping placement.
//!
//! At `a = pπ/q` (coprime) the characteristic function factors through the
//! damping polynomial `P_α(z) = (2-α)z^q + αz^p + αz^(q-p) - (2+α)` via
//! `z = exp(-2λπ/q)`.  Each root `ζ = |ζ|e^(iθ)` of `P_α` therefore generates
//! a full ladder of eigenvalues
//!
//! ```text
//! λ_{1,n} = iqn                                  (ζ = 1, n ∈ ℤ∖{0})
//! λ_{k,n} = -(q/2π)(ln|ζ_k| + i(θ_k + 2πn))      (n ∈ ℤ)
//! ```
//!
//! `ζ = 1` is always a simple root (`P_α'(1) = 2q` for every α), so the
//! purely imaginary family exists for every rational placement.  The leading
//! coefficient vanishes at the critical damping α = 2 (the degree drops to
//! `r = max(p, q-p)` and one ladder escapes to `Re λ = -∞`), and the constant
//! term vanishes at α = -2 (roots at `ζ = 0`, which correspond to no finite
//! eigenvalue and are reported separately).

use crate::charfn::{self, CharFnError, DampingParams};
use crate::contour::SpectralWindow;
use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::PI;
use thiserror::Error;

/// |α ∓ 2| (or |α ∓ n| on the graph) below this is treated as exactly
/// critical when trimming polynomial degrees.
pub const CRITICAL_SNAP: f64 = 1e-9;
/// Roots closer than this (relative) are clustered into one double root.
const CLUSTER_TOL: f64 = 1e-7;
/// Double-root confirmation threshold on |F| and |F'| relative to scale.
pub const DOUBLE_TOL: f64 = 1e-9;
/// |F''| must stay above this (relative) or a triple root is reported.
pub const TRIPLE_GUARD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("placement fraction {p}/{q} must satisfy 0 < p < q with gcd(p, q) = 1")]
    InvalidFraction { p: u32, q: u32 },
    #[error("root iteration did not converge within the sweep limit")]
    RootIterationDiverged,
    #[error("root cluster of size {0} contradicts the at-most-double multiplicity bound")]
    RootClusterTooLarge(usize),
    #[error("apparent triple root at λ = {0}: F, F', F'' all below tolerance")]
    TripleRoot(Complex64),
    #[error("characteristic function evaluation failed: {0}")]
    CharFn(#[from] CharFnError),
}

/// Regime classification of the damping constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingRegime {
    Subcritical,
    CriticalPlus,
    CriticalMinus,
}

impl DampingRegime {
    /// Classify α against the critical values ±c (c = 2 on the interval,
    /// c = n on the star graph), snapping within [`CRITICAL_SNAP`].
    pub fn classify(alpha: Complex64, critical: f64) -> Self {
        if (alpha - critical).norm() < CRITICAL_SNAP {
            DampingRegime::CriticalPlus
        } else if (alpha + critical).norm() < CRITICAL_SNAP {
            DampingRegime::CriticalMinus
        } else {
            DampingRegime::Subcritical
        }
    }

    pub fn is_critical(self) -> bool {
        self != DampingRegime::Subcritical
    }
}

/// Which model a [`DampingPolynomial`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolynomialKind {
    /// Interval placement `a = pπ/q`; the substitution is `z = exp(-2λπ/q)`.
    Interval { p: u32, q: u32 },
    /// Star graph with `n` edges; the substitution is `z = exp(-2λπ)`.
    StarGraph { n: u32 },
}

impl PolynomialKind {
    /// Denominator of the exponential substitution `z = exp(-2λπ/q)`.
    pub fn exponent_scale(self) -> u32 {
        match self {
            PolynomialKind::Interval { q, .. } => q,
            PolynomialKind::StarGraph { .. } => 1,
        }
    }
}

/// The damping polynomial with degenerate leading/constant coefficients
/// trimmed off.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingPolynomial {
    /// Ascending coefficients, leading entry nonzero.
    pub coeffs: Vec<Complex64>,
    pub alpha: Complex64,
    pub kind: PolynomialKind,
    /// Degree after trimming the degenerate leading coefficient.
    pub effective_degree: usize,
    pub regime: DampingRegime,
}

/// A root `ζ = |ζ| e^(iθ)` of the damping polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootRecord {
    pub zeta: Complex64,
    pub modulus: f64,
    /// Principal argument in (-π, π].
    pub theta: f64,
    pub multiplicity: u8,
}

impl RootRecord {
    fn new(zeta: Complex64, multiplicity: u8) -> Self {
        let theta = if zeta.im == 0.0 && zeta.re < 0.0 {
            PI // pin the branch to +π on the negative real axis
        } else {
            zeta.arg()
        };
        Self { zeta, modulus: zeta.norm(), theta, multiplicity }
    }

    pub fn is_unit_root(&self) -> bool {
        (self.zeta - 1.0).norm() < 1e-12
    }

    pub fn is_zero(&self) -> bool {
        self.zeta == Complex64::new(0.0, 0.0)
    }
}

/// One eigenvalue with its family/branch bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueRecord {
    pub lambda: Complex64,
    /// Root index `k ≥ 1` in the paper's convention (`ζ_1 = 1` is the
    /// imaginary family); 0 when located by contour methods without a
    /// rational factorization to attribute it to.
    pub family: u32,
    pub branch: i32,
    /// Algebraic multiplicity, 1 or 2.
    pub alg_multiplicity: u8,
    /// Always 1 for these operators.
    pub geo_multiplicity: u8,
    /// `|S(λ)|` at the stored point.
    pub residual: f64,
}

/// Eigenvalues found in a window plus the roots that generate none
/// (`ζ = 0` ladders escaped to `Re λ = -∞`).
#[derive(Debug, Clone, Default)]
pub struct WindowSpectrum {
    pub eigenvalues: Vec<EigenvalueRecord>,
    pub escaped_roots: Vec<RootRecord>,
}

/// Build `P_α` for the interval placement `a = pπ/q`.
///
/// At α = 2 (within [`CRITICAL_SNAP`]) the vanishing leading coefficient is
/// trimmed so the effective degree is `r = max(p, q-p)`; at α = -2 the
/// constant term is snapped to exactly zero so the `ζ = 0` root is exact.
pub fn build_polynomial(
    p: u32,
    q: u32,
    alpha: Complex64,
) -> Result<DampingPolynomial, SpectrumError> {
    if p == 0 || p >= q || p.gcd(&q) != 1 {
        return Err(SpectrumError::InvalidFraction { p, q });
    }
    let regime = DampingRegime::classify(alpha, 2.0);
    let mut coeffs = charfn::damping_poly_coeffs(p, q, alpha);
    if regime == DampingRegime::CriticalPlus {
        coeffs.pop(); // leading coefficient 2 - α ≈ 0
    }
    if regime == DampingRegime::CriticalMinus {
        coeffs[0] = Complex64::new(0.0, 0.0); // constant -(2 + α) ≈ 0
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
        coeffs.pop();
    }
    let effective_degree = coeffs.len() - 1;
    Ok(DampingPolynomial { coeffs, alpha, kind: PolynomialKind::Interval { p, q }, effective_degree, regime })
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn horner_deriv(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + i as f64 * c;
    }
    acc
}

/// Magnitude of the largest term of `P` at `z`; the natural residual scale.
fn eval_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut pow = 1.0;
    let mut scale = 0.0f64;
    for c in coeffs {
        scale = scale.max(c.norm() * pow);
        pow *= r;
    }
    scale.max(f64::MIN_POSITIVE)
}

/// Synthetic division by `(z - 1)`; the remainder (≈ 0 since `P(1) = 0`
/// structurally) is discarded.
fn deflate_unit_root(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut quotient = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut carry = Complex64::new(0.0, 0.0);
    for i in (1..n).rev() {
        carry += coeffs[i];
        quotient[i - 1] = carry;
    }
    quotient
}

fn solve_quadratic(c0: Complex64, c1: Complex64, c2: Complex64) -> [Complex64; 2] {
    // stable variant: the larger root from the sign-matched formula,
    // the other from the product c0/(c2 r1)
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    let s = if (c1 + disc).norm() >= (c1 - disc).norm() { c1 + disc } else { c1 - disc };
    if s.norm() == 0.0 {
        // c1 = 0 and disc = 0: double root at the origin of the shifted eq.
        let r = (-c0 / c2).sqrt();
        return [r, -r];
    }
    let r1 = -2.0 * c0 / s;
    let r2 = -s / (2.0 * c2);
    [r1, r2]
}

/// Aberth–Ehrlich simultaneous iteration for the (tiny) deflated polynomials.
fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>, SpectrumError> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    // initial points on a circle of radius from the coefficient bound,
    // at asymmetric angles
    let radius = (coeffs[0].norm() / lead.norm()).powf(1.0 / degree as f64).max(0.5);
    let mut zs: Vec<Complex64> = (0..degree)
        .map(|i| Complex64::from_polar(radius, 0.4 + 2.0 * PI * i as f64 / degree as f64))
        .collect();
    for _sweep in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let z = zs[i];
            let pv = horner(coeffs, z);
            let dv = horner_deriv(coeffs, z);
            let newton = if dv.norm() == 0.0 { pv } else { pv / dv };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &other) in zs.iter().enumerate() {
                if j != i {
                    let diff = z - other;
                    if diff.norm() > 1e-300 {
                        repulsion += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            zs[i] = z - step;
            max_step = max_step.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if max_step < 1e-14 {
            return Ok(zs);
        }
    }
    // accept if residuals are already fine (clustered roots stall the
    // step-size criterion without being wrong)
    if zs
        .iter()
        .all(|&z| horner(coeffs, z).norm() <= 1e-10 * eval_scale(coeffs, z))
    {
        return Ok(zs);
    }
    Err(SpectrumError::RootIterationDiverged)
}

/// All roots of the damping polynomial.
///
/// `ζ = 1` is deflated exactly by synthetic division and returned first;
/// `ζ = 0` roots (critical α = -2, or α = -n on the graph) come last.  Roots
/// closer than a relative `1e-7` are clustered into one record of
/// multiplicity 2; every root is Newton-polished on the full polynomial.
pub fn find_roots(poly: &DampingPolynomial) -> Result<Vec<RootRecord>, SpectrumError> {
    let full = &poly.coeffs;
    let mut work: &[Complex64] = full;

    // exact zero roots at the origin
    let mut zero_mult = 0usize;
    while work.len() > 1 && work[0].norm() == 0.0 {
        zero_mult += 1;
        work = &work[1..];
    }
    let reduced: Vec<Complex64> = work.to_vec();

    // ζ = 1 is structurally simple; deflate it exactly.
    let deflated = deflate_unit_root(&reduced);
    let degree = deflated.len() - 1;

    let mut others: Vec<Complex64> = if degree == 0 {
        Vec::new()
    } else if degree == 1 {
        vec![-deflated[0] / deflated[1]]
    } else if degree == 2 {
        solve_quadratic(deflated[0], deflated[1], deflated[2]).to_vec()
    } else {
        aberth(&deflated)?
    };

    // one Newton polish per root on the full polynomial
    for z in others.iter_mut() {
        let dv = horner_deriv(&reduced, *z);
        if dv.norm() > 1e-300 {
            *z -= horner(&reduced, *z) / dv;
        }
    }

    // cluster near-coincident roots into double records
    let mut used = vec![false; others.len()];
    let mut records = vec![RootRecord::new(Complex64::new(1.0, 0.0), 1)];
    let mut clustered: Vec<RootRecord> = Vec::new();
    for i in 0..others.len() {
        if used[i] {
            continue;
        }
        let mut cluster = vec![others[i]];
        for j in (i + 1)..others.len() {
            if !used[j] && (others[i] - others[j]).norm() <= CLUSTER_TOL * (1.0 + others[i].norm()) {
                used[j] = true;
                cluster.push(others[j]);
            }
        }
        match cluster.len() {
            1 => clustered.push(RootRecord::new(cluster[0], 1)),
            2 => {
                let mut center = 0.5 * (cluster[0] + cluster[1]);
                // multiplicity-2 Newton step sharpens the cluster center
                let dv = horner_deriv(&reduced, center);
                if dv.norm() > 1e-300 {
                    let step = 2.0 * horner(&reduced, center) / dv;
                    if step.norm() < 1.0 + center.norm() {
                        center -= step;
                    }
                }
                clustered.push(RootRecord::new(center, 2));
            }
            n => return Err(SpectrumError::RootClusterTooLarge(n)),
        }
    }
    clustered.sort_by(|a, b| {
        a.theta
            .partial_cmp(&b.theta)
            .unwrap()
            .then(a.modulus.partial_cmp(&b.modulus).unwrap())
    });
    records.extend(clustered);

    // residual validation against the term-magnitude scale
    for r in &records {
        let resid = horner(&reduced, r.zeta).norm();
        if resid > 1e-10 * eval_scale(&reduced, r.zeta) {
            return Err(SpectrumError::RootIterationDiverged);
        }
    }

    if zero_mult > 0 {
        records.push(RootRecord {
            zeta: Complex64::new(0.0, 0.0),
            modulus: 0.0,
            theta: 0.0,
            multiplicity: zero_mult as u8,
        });
    }
    Ok(records)
}

/// Map polynomial roots to the eigenvalues inside `window`.
///
/// `q` is the exponent denominator of the substitution `z = exp(-2λπ/q)`
/// (the placement denominator on the interval, 1 on the star graph);
/// `residual` evaluates `|S(λ)|` for the record bookkeeping.  Roots at
/// `ζ = 0` generate no finite eigenvalue and land in `escaped_roots`.
pub(crate) fn map_roots(
    roots: &[RootRecord],
    q: u32,
    window: &SpectralWindow,
    residual: impl Fn(Complex64) -> f64,
) -> WindowSpectrum {
    let qf = q as f64;
    let mut out = WindowSpectrum::default();
    let re_ok = |re: f64| window.re_min <= re && re <= window.re_max;

    for (idx, root) in roots.iter().enumerate() {
        let family = idx as u32 + 1;
        if root.is_zero() {
            out.escaped_roots.push(*root);
            continue;
        }
        if root.is_unit_root() {
            // λ = iqn, n ≠ 0
            if !re_ok(0.0) {
                continue;
            }
            let n_min = (window.im_min / qf).ceil() as i64;
            let n_max = (window.im_max / qf).floor() as i64;
            for n in n_min..=n_max {
                if n == 0 {
                    continue;
                }
                let lambda = Complex64::new(0.0, qf * n as f64);
                out.eigenvalues.push(EigenvalueRecord {
                    lambda,
                    family,
                    branch: n as i32,
                    alg_multiplicity: root.multiplicity,
                    geo_multiplicity: 1,
                    residual: residual(lambda),
                });
            }
            continue;
        }
        let re = -qf / (2.0 * PI) * root.modulus.ln();
        if !re_ok(re) {
            continue;
        }
        // Im λ = -(q/2π)(θ + 2πn) ∈ [im_min, im_max]
        let lo = (-2.0 * PI * window.im_max / qf - root.theta) / (2.0 * PI);
        let hi = (-2.0 * PI * window.im_min / qf - root.theta) / (2.0 * PI);
        let n_min = lo.ceil() as i64;
        let n_max = hi.floor() as i64;
        for n in n_min..=n_max {
            let lambda = Complex64::new(re, -qf / (2.0 * PI) * (root.theta + 2.0 * PI * n as f64));
            out.eigenvalues.push(EigenvalueRecord {
                lambda,
                family,
                branch: n as i32,
                alg_multiplicity: root.multiplicity,
                geo_multiplicity: 1,
                residual: residual(lambda),
            });
        }
    }
    sort_records(&mut out.eigenvalues);
    out
}

/// Order: ascending Im λ, then Re λ, then family.
pub(crate) fn sort_records(records: &mut [EigenvalueRecord]) {
    records.sort_by(|a, b| {
        a.lambda
            .im
            .partial_cmp(&b.lambda.im)
            .unwrap()
            .then(a.lambda.re.partial_cmp(&b.lambda.re).unwrap())
            .then(a.family.cmp(&b.family))
    });
}

/// Eigenvalues of the interval model generated by `roots` inside `window`.
pub fn roots_to_eigenvalues(
    roots: &[RootRecord],
    q: u32,
    window: &SpectralWindow,
    params: &DampingParams,
) -> WindowSpectrum {
    let p = *params;
    map_roots(roots, q, window, move |lam| {
        charfn::eval_s(lam, &p).map(|v| v.norm()).unwrap_or(f64::INFINITY)
    })
}

/// All branches `|n| ≤ n_trunc` of every family, regardless of window.
///
/// Used by the trace identities, which need complete branch coverage rather
/// than a spectral window.
pub fn enumerate_branches(
    roots: &[RootRecord],
    q: u32,
    n_trunc: u32,
    params: &DampingParams,
) -> WindowSpectrum {
    let qf = q as f64;
    // a window high enough to contain every branch |n| ≤ N of every family
    let im_span = qf * (n_trunc as f64 + 1.0);
    let mut re_lo = -1.0f64;
    let mut re_hi = 1.0f64;
    for r in roots {
        if !r.is_zero() {
            let re = -qf / (2.0 * PI) * r.modulus.ln();
            re_lo = re_lo.min(re - 1.0);
            re_hi = re_hi.max(re + 1.0);
        }
    }
    let window = SpectralWindow::new(re_lo, re_hi, -im_span, im_span).expect("valid window");
    let mut spectrum = roots_to_eigenvalues(roots, q, &window, params);
    spectrum.eigenvalues.retain(|rec| rec.branch.unsigned_abs() <= n_trunc);
    spectrum
}

/// Confirm algebraic multiplicities at the λ level.
///
/// A record is double exactly when `|F|` and `|F'|` both fall below
/// [`DOUBLE_TOL`] relative to the local term scale; `|F''|` must then stay
/// above [`TRIPLE_GUARD`], otherwise the at-most-double bound is violated and
/// a hard error is returned.
pub fn detect_double_eigenvalues(
    records: &[EigenvalueRecord],
    params: &DampingParams,
) -> Result<Vec<EigenvalueRecord>, SpectrumError> {
    let mut out = Vec::with_capacity(records.len());
    for rec in records {
        let mut rec = *rec;
        let (f, f1, f2, scale) = charfn::f_derivatives_scaled(rec.lambda, params);
        let f_small = f.mantissa.norm() <= DOUBLE_TOL * scale;
        let f1_small = f1.mantissa.norm() <= DOUBLE_TOL * scale * PI;
        let f2_small = f2.mantissa.norm() < TRIPLE_GUARD * scale * PI * PI;
        if f_small && f1_small && f2_small {
            return Err(SpectrumError::TripleRoot(rec.lambda));
        }
        rec.alg_multiplicity = if f_small && f1_small { 2 } else { 1 };
        out.push(rec);
    }
    Ok(out)
}

/// Full rational-placement pipeline: polynomial, roots, window enumeration,
/// multiplicity confirmation.
pub fn spectrum(
    params: &DampingParams,
    window: &SpectralWindow,
) -> Result<WindowSpectrum, SpectrumError> {
    let (p, q) = params
        .rational_placement()
        .ok_or(SpectrumError::InvalidFraction { p: 0, q: 0 })?;
    let poly = build_polynomial(p, q, params.alpha())?;
    let roots = find_roots(&poly)?;
    let mut spec = roots_to_eigenvalues(&roots, q, window, params);
    spec.eigenvalues = detect_double_eigenvalues(&spec.eigenvalues, params)?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polynomial_coefficients() {
        // (1,3,0) → 2z³ - 2
        let poly = build_polynomial(1, 3, c(0.0, 0.0)).unwrap();
        assert_eq!(poly.effective_degree, 3);
        assert_relative_eq!(poly.coeffs[0].re, -2.0);
        assert_relative_eq!(poly.coeffs[3].re, 2.0);
        assert_relative_eq!(poly.coeffs[1].norm(), 0.0);
        // (1,2,2) → 4z - 4 after trimming
        let poly = build_polynomial(1, 2, c(2.0, 0.0)).unwrap();
        assert_eq!(poly.effective_degree, 1);
        assert_relative_eq!(poly.coeffs[0].re, -4.0);
        assert_relative_eq!(poly.coeffs[1].re, 4.0);
        assert_eq!(poly.regime, DampingRegime::CriticalPlus);
        // P(1) = 0 always
        for (p, q, alpha) in [(1, 2, c(0.3, -7.0)), (2, 5, c(2.0, 0.0)), (3, 7, c(-2.0, 0.0))] {
            let poly = build_polynomial(p, q, alpha).unwrap();
            let at_one: Complex64 = poly.coeffs.iter().sum();
            assert!(at_one.norm() <= 1e-14 * (1.0 + alpha.norm()));
        }
        assert!(build_polynomial(2, 4, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn roots_of_simple_cases() {
        // (1,2,0): roots {1, -1}
        let poly = build_polynomial(1, 2, c(0.0, 0.0)).unwrap();
        let roots = find_roots(&poly).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].is_unit_root());
        assert_relative_eq!(roots[1].zeta.re, -1.0, max_relative = 1e-12);
        assert_relative_eq!(roots[1].theta, PI);
        // (1,2,2): only ζ = 1
        let poly = build_polynomial(1, 2, c(2.0, 0.0)).unwrap();
        let roots = find_roots(&poly).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].is_unit_root());
        // (1,2,-2): ζ ∈ {1, 0}
        let poly = build_polynomial(1, 2, c(-2.0, 0.0)).unwrap();
        let roots = find_roots(&poly).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].is_unit_root());
        assert!(roots[1].is_zero());
    }

    #[test]
    fn double_root_of_sqrt3_case() {
        let alpha = c(3.0f64.sqrt(), 0.0);
        let poly = build_polynomial(1, 3, alpha).unwrap();
        let roots = find_roots(&poly).unwrap();
        assert_eq!(roots.len(), 2);
        let double = &roots[1];
        assert_eq!(double.multiplicity, 2);
        assert_relative_eq!(double.zeta.re, -(2.0 + 3.0f64.sqrt()), max_relative = 1e-9);
        assert_relative_eq!(double.theta, PI);
    }

    #[test]
    fn family_one_ladder() {
        let params = DampingParams::rational(1, 3, c(0.5, 0.2)).unwrap();
        let roots = vec![RootRecord::new(c(1.0, 0.0), 1)];
        let window = SpectralWindow::new(-1.0, 1.0, -10.0, 10.0).unwrap();
        let spec = roots_to_eigenvalues(&roots, 3, &window, &params);
        let ims: Vec<f64> = spec.eigenvalues.iter().map(|r| r.lambda.im).collect();
        assert_eq!(ims, vec![-9.0, -6.0, -3.0, 3.0, 6.0, 9.0]);
        assert!(spec.eigenvalues.iter().all(|r| r.lambda.re == 0.0));
        assert!(spec.eigenvalues.iter().all(|r| r.residual < 1e-9));
    }

    #[test]
    fn undamped_cube_roots_give_full_imaginary_ladder() {
        // (1,3,0): the three cube roots of unity generate iℤ∖{0}
        let params = DampingParams::rational(1, 3, c(0.0, 0.0)).unwrap();
        let window = SpectralWindow::new(-1.0, 1.0, -5.5, 5.5).unwrap();
        let spec = spectrum(&params, &window).unwrap();
        let ims: Vec<i64> = spec.eigenvalues.iter().map(|r| r.lambda.im.round() as i64).collect();
        assert_eq!(ims, vec![-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]);
        for rec in &spec.eigenvalues {
            assert!(rec.lambda.re.abs() < 1e-12);
            assert_eq!(rec.alg_multiplicity, 1);
        }
        // ζ = e^(2πi/3), n = 0 → λ = -i
        let poly = build_polynomial(1, 3, c(0.0, 0.0)).unwrap();
        let roots = find_roots(&poly).unwrap();
        let zeta = roots.iter().find(|r| r.theta > 1.0 && r.theta < 2.5).unwrap();
        let spec = roots_to_eigenvalues(&[*zeta], 3, &window, &params);
        let at_zero = spec.eigenvalues.iter().find(|r| r.branch == 0).unwrap();
        assert_relative_eq!(at_zero.lambda.im, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn double_family_confirmed_at_lambda_level() {
        let alpha = c(3.0f64.sqrt(), 0.0);
        let params = DampingParams::rational(1, 3, alpha).unwrap();
        let window = SpectralWindow::new(-2.0, 2.0, -8.0, 8.0).unwrap();
        let spec = spectrum(&params, &window).unwrap();
        let doubles: Vec<_> = spec
            .eigenvalues
            .iter()
            .filter(|r| r.alg_multiplicity == 2)
            .collect();
        assert!(!doubles.is_empty());
        let expected_re = -(3.0 / (2.0 * PI)) * (2.0 + 3.0f64.sqrt()).ln();
        for d in &doubles {
            assert_relative_eq!(d.lambda.re, expected_re, max_relative = 1e-9);
        }
        // the imaginary family stays simple
        for r in spec.eigenvalues.iter().filter(|r| r.family == 1) {
            assert_eq!(r.alg_multiplicity, 1);
        }
    }

    #[test]
    fn conjugate_pairs_for_real_alpha() {
        let params = DampingParams::rational(2, 5, c(1.7, 0.0)).unwrap();
        let window = SpectralWindow::new(-3.0, 3.0, -12.0, 12.0).unwrap();
        let spec = spectrum(&params, &window).unwrap();
        for rec in &spec.eigenvalues {
            let partner = rec.lambda.conj();
            assert!(
                spec.eigenvalues
                    .iter()
                    .any(|r| (r.lambda - partner).norm() < 1e-9),
                "missing conjugate of {}",
                rec.lambda
            );
        }
    }

    #[test]
    fn branch_enumeration_is_complete() {
        let params = DampingParams::rational(2, 5, c(1.0, -0.5)).unwrap();
        let poly = build_polynomial(2, 5, params.alpha()).unwrap();
        let roots = find_roots(&poly).unwrap();
        let spec = enumerate_branches(&roots, 5, 4, &params);
        // family 1: branches ±1..±4; families 2..5: branches -4..4
        let f1 = spec.eigenvalues.iter().filter(|r| r.family == 1).count();
        assert_eq!(f1, 8);
        for fam in 2..=5u32 {
            let count = spec.eigenvalues.iter().filter(|r| r.family == fam).count();
            assert_eq!(count, 9, "family {fam}");
        }
    }
}
