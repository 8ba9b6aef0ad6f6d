//! Eigenfunctions, Green kernels and energy-space diagnostics.
//!
//! Displacement components of all modes are piecewise combinations of
//! `sinh(λ·)/cosh(λ·)` measured from either end of the interval, with the
//! coordinate-weighted variants `x cosh(λx)` needed by generalized
//! eigenvectors; [`PiecewiseSinhFn`] carries them with analytic derivatives.
//! The energy inner product `⟨φ, ψ⟩ = ⟨φ₁', ψ₁'⟩ + ⟨φ₂, ψ₂⟩` (conjugation on
//! the first argument) is evaluated by composite Gauss–Legendre panels split
//! at the damping point, with the panel count scaled to the oscillation rate
//! of the integrand.
//!
//! The eigenfunction at an eigenvalue λ is
//!
//! ```text
//! u(x) = sinh(λ(π-a)) sinh(λx)       on [0, a]
//!        sinh(λa) sinh(λ(π-x))       on [a, π]
//! ```
//!
//! except on the purely imaginary (harmonic) family, where both prefactors
//! vanish and the mode degenerates to `sinh(λx)` globally.  At an
//! algebraically double eigenvalue the generalized eigenvector is the
//! coordinate-weighted mirror pair
//! `sinh(λ(π-a))·x·cosh(λx) + B sinh(λx)` /
//! `sinh(λa)·(π-x)·cosh(λ(π-x)) + D sinh(λ(π-x))`, with `(B, D)` solved from
//! continuity and the jump condition; the linear system is singular exactly
//! on the spectrum and consistent exactly at double eigenvalues, which is
//! verified in residual form.

use crate::charfn::{self, CharFnError, DampingParams};
use crate::contour::{self, ContourError, SpectralWindow};
use crate::rational::{self, EigenvalueRecord, SpectrumError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

/// Relative `|F|` gate for accepting λ as an eigenvalue.
const EIGEN_GATE: f64 = 1e-6;
/// Relative `|F|` below this means λ is too close to the spectrum for a
/// resolvent kernel.
const POLE_GATE: f64 = 1e-8;
/// Harmonic-family detection: both `sinh(λa)` and `sinh(λ(π-a))` below this
/// relative threshold.
const HARMONIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeError {
    #[error("λ is not an eigenvalue (relative |F| = {residual:.3e})")]
    NotAnEigenvalue { residual: f64 },
    #[error("λ is not an algebraically double eigenvalue")]
    NotDouble,
    #[error("λ is within tolerance of the spectrum; Green kernel has a pole")]
    PoleNearSpectrum,
    #[error("modes have different breakpoints")]
    BreakpointMismatch,
    #[error("adjoint pairing is degenerate at this eigenvalue")]
    DegeneratePairing,
    #[error("Gram matrix is numerically singular (worst pair {i}, {j})")]
    SingularGram { i: usize, j: usize },
    #[error(transparent)]
    CharFn(#[from] CharFnError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Contour(#[from] ContourError),
}

// ---------------------------------------------------------------------------
// Gauss–Legendre panels
// ---------------------------------------------------------------------------

const GL_POINTS: usize = 32;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0f64;
            let mut p1 = 0.0f64;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_POINTS))
}

/// Composite quadrature of `f` over `[lo, hi]` with `panels` equal panels.
fn integrate(lo: f64, hi: f64, panels: usize, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
    let (nodes, weights) = gl32();
    let mut acc = Complex64::new(0.0, 0.0);
    let width = (hi - lo) / panels as f64;
    for p in 0..panels {
        let center = lo + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        for (x, w) in nodes.iter().zip(weights) {
            acc += *w * half * f(center + half * x);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Piecewise hyperbolic functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum BasisKind {
    Sinh,
    Cosh,
}

/// Whether the argument of the term is `x` or `π - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Orient {
    FromLeft,
    FromRight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    coeff: Complex64,
    /// Multiply by the oriented coordinate (`x` or `π - x`).
    weighted: bool,
    kind: BasisKind,
    orient: Orient,
}

impl Term {
    fn new(coeff: Complex64, weighted: bool, kind: BasisKind, orient: Orient) -> Self {
        Self { coeff, weighted, kind, orient }
    }

    fn eval(&self, lambda: Complex64, x: f64) -> Complex64 {
        let t = match self.orient {
            Orient::FromLeft => x,
            Orient::FromRight => PI - x,
        };
        let z = lambda * t;
        let b = match self.kind {
            BasisKind::Sinh => z.sinh(),
            BasisKind::Cosh => z.cosh(),
        };
        let w = if self.weighted { t } else { 1.0 };
        self.coeff * w * b
    }

    fn deriv(&self, lambda: Complex64, x: f64) -> Complex64 {
        let (t, sign) = match self.orient {
            Orient::FromLeft => (x, 1.0),
            Orient::FromRight => (PI - x, -1.0),
        };
        let z = lambda * t;
        let (b, bp) = match self.kind {
            BasisKind::Sinh => (z.sinh(), z.cosh()),
            BasisKind::Cosh => (z.cosh(), z.sinh()),
        };
        if self.weighted {
            self.coeff * sign * (b + lambda * t * bp)
        } else {
            self.coeff * sign * lambda * bp
        }
    }
}

/// A function on `[0, π]` that is a short combination of (possibly
/// coordinate-weighted) `sinh`/`cosh` terms on each side of the breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSinhFn {
    lambda: Complex64,
    breakpoint: f64,
    left: Vec<Term>,
    right: Vec<Term>,
}

impl PiecewiseSinhFn {
    fn new(lambda: Complex64, breakpoint: f64, left: Vec<Term>, right: Vec<Term>) -> Self {
        Self { lambda, breakpoint, left, right }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn breakpoint(&self) -> f64 {
        self.breakpoint
    }

    fn side(&self, x: f64) -> &[Term] {
        if x <= self.breakpoint {
            &self.left
        } else {
            &self.right
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.side(x).iter().map(|t| t.eval(self.lambda, x)).sum()
    }

    /// Analytic derivative (no differencing).
    pub fn deriv(&self, x: f64) -> Complex64 {
        self.side(x).iter().map(|t| t.deriv(self.lambda, x)).sum()
    }

    /// One-sided values at the breakpoint.
    pub fn left_eval(&self, x: f64) -> Complex64 {
        self.left.iter().map(|t| t.eval(self.lambda, x)).sum()
    }

    pub fn right_eval(&self, x: f64) -> Complex64 {
        self.right.iter().map(|t| t.eval(self.lambda, x)).sum()
    }

    pub fn left_deriv(&self, x: f64) -> Complex64 {
        self.left.iter().map(|t| t.deriv(self.lambda, x)).sum()
    }

    pub fn right_deriv(&self, x: f64) -> Complex64 {
        self.right.iter().map(|t| t.deriv(self.lambda, x)).sum()
    }

    fn scaled(&self, c: Complex64) -> Self {
        let scale = |terms: &[Term]| {
            terms
                .iter()
                .map(|t| Term { coeff: c * t.coeff, ..*t })
                .collect()
        };
        Self::new(self.lambda, self.breakpoint, scale(&self.left), scale(&self.right))
    }

    /// Term-list sum; both parts must share λ and breakpoint.
    fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.lambda, other.lambda);
        debug_assert_eq!(self.breakpoint, other.breakpoint);
        let mut left = self.left.clone();
        left.extend_from_slice(&other.left);
        let mut right = self.right.clone();
        right.extend_from_slice(&other.right);
        Self::new(self.lambda, self.breakpoint, left, right)
    }
}

/// Role of a [`ModePair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Eigen,
    Generalized,
    Adjoint,
}

/// A two-component state `(u, v)` in the energy space.
#[derive(Debug, Clone, PartialEq)]
pub struct ModePair {
    pub first: PiecewiseSinhFn,
    pub second: PiecewiseSinhFn,
    pub lambda: Complex64,
    pub kind: ModeKind,
}

impl ModePair {
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            first: self.first.scaled(c),
            second: self.second.scaled(c),
            lambda: self.lambda,
            kind: self.kind,
        }
    }

    /// Damping constant the jump condition must use: the adjoint domain
    /// carries `-conj(α)`.
    fn jump_alpha(&self, params: &DampingParams) -> Complex64 {
        match self.kind {
            ModeKind::Adjoint => -params.alpha().conj(),
            _ => params.alpha(),
        }
    }

    /// Relative residual of the derivative-jump domain condition
    /// `u'(a+) - u'(a-) = α_eff · v(a)`.
    pub fn jump_residual(&self, params: &DampingParams) -> f64 {
        let a = self.first.breakpoint();
        let jump = self.first.right_deriv(a) - self.first.left_deriv(a);
        let want = self.jump_alpha(params) * self.second.left_eval(a);
        let scale = jump
            .norm()
            .max(want.norm())
            .max(self.first.left_deriv(a).norm())
            .max(1e-300);
        (jump - want).norm() / scale
    }
}

// ---------------------------------------------------------------------------
// Mode construction
// ---------------------------------------------------------------------------

fn eigen_gate(lambda: Complex64, params: &DampingParams) -> Result<(), ModeError> {
    let residual = charfn::f_relative_residual(lambda, params);
    if residual > EIGEN_GATE {
        return Err(ModeError::NotAnEigenvalue { residual });
    }
    Ok(())
}

/// Rewrites `sinh(λx)` in the right-oriented basis:
/// `sinh(λx) = sinh(λπ)cosh(λ(π-x)) - cosh(λπ)sinh(λ(π-x))`.
fn sinh_from_left_rebased(coeff: Complex64, lambda: Complex64) -> Vec<Term> {
    let zp = lambda * PI;
    vec![
        Term::new(coeff * zp.sinh(), false, BasisKind::Cosh, Orient::FromRight),
        Term::new(-coeff * zp.cosh(), false, BasisKind::Sinh, Orient::FromRight),
    ]
}

/// The eigenfunction pair `(u, λu)` at an eigenvalue λ.
///
/// On the harmonic family (purely imaginary λ with `sinh(λa) ≈ 0`, present
/// for rational placements) the generic prefactors vanish and the mode is
/// `sinh(λx)` globally; both cases satisfy the jump condition
/// `u'(a+) - u'(a-) = αλ u(a)` to the tested tolerance.
pub fn eigenfunction(lambda: Complex64, params: &DampingParams) -> Result<ModePair, ModeError> {
    eigen_gate(lambda, params)?;
    let a = params.a();
    let s_a = (lambda * a).sinh();
    let s_b = (lambda * (PI - a)).sinh();
    let scale_a = (lambda.re.abs() * a).exp();
    let scale_b = (lambda.re.abs() * (PI - a)).exp();

    let one = Complex64::new(1.0, 0.0);
    let first = if s_a.norm() <= HARMONIC_TOL * scale_a && s_b.norm() <= HARMONIC_TOL * scale_b {
        // harmonic mode: u = sinh(λx) on all of [0, π]
        PiecewiseSinhFn::new(
            lambda,
            a,
            vec![Term::new(one, false, BasisKind::Sinh, Orient::FromLeft)],
            sinh_from_left_rebased(one, lambda),
        )
    } else {
        PiecewiseSinhFn::new(
            lambda,
            a,
            vec![Term::new(s_b, false, BasisKind::Sinh, Orient::FromLeft)],
            vec![Term::new(s_a, false, BasisKind::Sinh, Orient::FromRight)],
        )
    };
    let second = first.scaled(lambda);
    Ok(ModePair { first, second, lambda, kind: ModeKind::Eigen })
}

/// The generalized eigenvector pair `(ũ, u + λũ)` at an algebraically double
/// eigenvalue, satisfying `(A - λ)ψ̃ = ψ`.
///
/// The coefficients `(B, D)` of the homogeneous parts solve a 2×2 system
/// whose determinant is `F(λ)` (zero on the spectrum); consistency of the
/// remaining equation is exactly the double-root condition and is verified
/// in residual form.
pub fn generalized_eigenfunction(
    lambda: Complex64,
    params: &DampingParams,
) -> Result<ModePair, ModeError> {
    eigen_gate(lambda, params)?;
    let (_, f1, _, scale) = charfn::f_derivatives_scaled(lambda, params);
    if f1.mantissa.norm() > EIGEN_GATE * PI * scale {
        return Err(ModeError::NotDouble);
    }
    let a = params.a();
    let alpha = params.alpha();
    let cl = (lambda * (PI - a)).sinh();
    let cr = (lambda * a).sinh();
    let ch_a = (lambda * a).cosh();
    let ch_b = (lambda * (PI - a)).cosh();

    // continuity: B sinh(λa) - D sinh(λ(π-a)) = cr(π-a)cosh(λ(π-a)) - cl·a·cosh(λa)
    let a11 = cr;
    let a12 = -cl;
    let b1 = cr * (PI - a) * ch_b - cl * a * ch_a;
    // jump: B(-λ cosh(λa) - αλ sinh(λa)) - D λ cosh(λ(π-a)) = αu(a) + αλ cl a cosh(λa) - known
    let a21 = -lambda * ch_a - alpha * lambda * cr;
    let a22 = -lambda * ch_b;
    let known = cr * (-ch_b - lambda * (PI - a) * cl) - cl * (ch_a + lambda * a * cr);
    let b2 = alpha * cl * cr + alpha * lambda * cl * a * ch_a - known;

    // The system is rank-deficient on the spectrum; pick the better pivot
    // and check the remaining equation as the double-root certificate.
    let (b_coef, d_coef) = if a11.norm() >= a12.norm() {
        (b1 / a11, Complex64::new(0.0, 0.0))
    } else {
        (Complex64::new(0.0, 0.0), b1 / a12)
    };
    let residual = (a21 * b_coef + a22 * d_coef - b2).norm();
    let consistency_scale = b2
        .norm()
        .max((a21 * b_coef).norm())
        .max((a22 * d_coef).norm())
        .max(1e-300);
    if residual > 1e-8 * consistency_scale {
        return Err(ModeError::NotDouble);
    }

    let first = PiecewiseSinhFn::new(
        lambda,
        a,
        vec![
            Term::new(cl, true, BasisKind::Cosh, Orient::FromLeft),
            Term::new(b_coef, false, BasisKind::Sinh, Orient::FromLeft),
        ],
        vec![
            Term::new(cr, true, BasisKind::Cosh, Orient::FromRight),
            Term::new(d_coef, false, BasisKind::Sinh, Orient::FromRight),
        ],
    );
    let parent = eigenfunction(lambda, params)?;
    let second = parent.first.plus(&first.scaled(lambda));
    Ok(ModePair { first, second, lambda, kind: ModeKind::Generalized })
}

/// Eigenvector of the adjoint `A*(a, α)` at `conj(λ)`, constructed as the
/// eigenfunction of `A(a, -conj(α))` at `-conj(λ)`.
pub fn adjoint_eigenfunction(
    lambda: Complex64,
    params: &DampingParams,
) -> Result<ModePair, ModeError> {
    let mut mode = eigenfunction(-lambda.conj(), &params.adjoint())?;
    mode.kind = ModeKind::Adjoint;
    Ok(mode)
}

// ---------------------------------------------------------------------------
// Energy inner product
// ---------------------------------------------------------------------------

fn panels_for(len: f64, freq: f64) -> usize {
    1 + (len * freq / (2.0 * PI) / 4.0).ceil() as usize
}

pub(crate) fn inner_product_with_oversampling(
    x: &ModePair,
    y: &ModePair,
    oversample: usize,
) -> Result<Complex64, ModeError> {
    let a = x.first.breakpoint();
    if (a - y.first.breakpoint()).abs() > 1e-12 {
        return Err(ModeError::BreakpointMismatch);
    }
    let freq = x.lambda.norm().max(y.lambda.norm()).max(1.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (lo, hi) in [(0.0, a), (a, PI)] {
        let panels = panels_for(hi - lo, freq) * oversample;
        acc += integrate(lo, hi, panels, |t| {
            x.first.deriv(t).conj() * y.first.deriv(t) + x.second.eval(t).conj() * y.second.eval(t)
        });
    }
    Ok(acc)
}

/// Energy inner product `⟨x₁', y₁'⟩ + ⟨x₂, y₂⟩`, conjugating `x`.
///
/// Derivatives come from the analytic piecewise forms; the quadrature is
/// composite Gauss–Legendre split at the breakpoint.
pub fn energy_inner_product(x: &ModePair, y: &ModePair) -> Result<Complex64, ModeError> {
    inner_product_with_oversampling(x, y, 1)
}

pub fn energy_norm(x: &ModePair) -> Result<f64, ModeError> {
    Ok(energy_inner_product(x, x)?.re.max(0.0).sqrt())
}

/// Unit-normalized mode plus its biorthogonal adjoint partner:
/// `⟨φ̃, ψ̂⟩ = 1`.  Returns `(ψ̂, φ̃, pairing)` where `pairing` is the raw
/// `⟨φ, ψ̂⟩` before rescaling (it degenerates at critical damping).
pub fn biorthogonal_pair(
    lambda: Complex64,
    params: &DampingParams,
) -> Result<(ModePair, ModePair, Complex64), ModeError> {
    let psi = eigenfunction(lambda, params)?;
    let norm = energy_norm(&psi)?;
    if norm < 1e-300 {
        return Err(ModeError::DegeneratePairing);
    }
    let psi_hat = psi.scaled(Complex64::new(1.0 / norm, 0.0));
    let phi = adjoint_eigenfunction(lambda, params)?;
    let pairing = energy_inner_product(&phi, &psi_hat)?;
    if pairing.norm() < 1e-12 {
        return Err(ModeError::DegeneratePairing);
    }
    // ⟨cφ, ψ̂⟩ = conj(c)⟨φ, ψ̂⟩, so c = conj(1/pairing)
    let phi_tilde = phi.scaled((1.0 / pairing).conj());
    Ok((psi_hat, phi_tilde, pairing))
}

// ---------------------------------------------------------------------------
// Green kernel
// ---------------------------------------------------------------------------

/// The resolvent kernel data at a point of the resolvent set.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    pub lambda: Complex64,
    /// Shooting solution with `u₁(0) = 0`, `u₁'(0) = 1` (jump included).
    pub u1: PiecewiseSinhFn,
    /// Mirror shooting solution with `u₂(π) = 0`, `u₂'(π) = -1`.
    pub u2: PiecewiseSinhFn,
    /// `u₁(π) = S(λ)`, the characteristic value.
    pub s_value: Complex64,
}

impl GreenKernel {
    /// `𝒢_λ(x, y) = -u₁(min) u₂(max) / S(λ)`; symmetric by construction.
    pub fn kernel(&self, x: f64, y: f64) -> Complex64 {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        -self.u1.eval(lo) * self.u2.eval(hi) / self.s_value
    }
}

/// Build the Green kernel at λ in the resolvent set.
///
/// `u₁(x) = sinh(λx)/λ` below the damping point and picks up
/// `α sinh(λa) sinh(λ(x-a))/λ` above it; `u₂` is its mirror.  At λ = 0 this
/// reduces to `u₁ = x`, `u₂ = π - x` and `𝒢₀(x,y) = -x(π-y)/π`.
pub fn green_kernel(lambda: Complex64, params: &DampingParams) -> Result<GreenKernel, ModeError> {
    let s_value = charfn::eval_s(lambda, params)?;
    if lambda.norm() >= charfn::SERIES_RADIUS
        && charfn::f_relative_residual(lambda, params) <= POLE_GATE
    {
        return Err(ModeError::PoleNearSpectrum);
    }
    let a = params.a();
    let alpha = params.alpha();
    let one = Complex64::new(1.0, 0.0);

    let (u1, u2) = if lambda.norm() < 1e-8 {
        // λ = 0 limit: u₁ = x, u₂ = π - x (weighted cosh(0·t) terms)
        (
            PiecewiseSinhFn::new(
                lambda,
                a,
                vec![Term::new(one, true, BasisKind::Cosh, Orient::FromLeft)],
                vec![Term::new(one, true, BasisKind::Cosh, Orient::FromLeft)],
            ),
            PiecewiseSinhFn::new(
                lambda,
                a,
                vec![Term::new(one, true, BasisKind::Cosh, Orient::FromRight)],
                vec![Term::new(one, true, BasisKind::Cosh, Orient::FromRight)],
            ),
        )
    } else {
        let inv = one / lambda;
        let sh_a = (lambda * a).sinh();
        let ch_a = (lambda * a).cosh();
        let sh_b = (lambda * (PI - a)).sinh();
        let ch_b = (lambda * (PI - a)).cosh();
        // sinh(λ(x-a)) = sinh(λx)cosh(λa) - cosh(λx)sinh(λa)
        let u1 = PiecewiseSinhFn::new(
            lambda,
            a,
            vec![Term::new(inv, false, BasisKind::Sinh, Orient::FromLeft)],
            vec![
                Term::new(inv * (one + alpha * sh_a * ch_a), false, BasisKind::Sinh, Orient::FromLeft),
                Term::new(-inv * alpha * sh_a * sh_a, false, BasisKind::Cosh, Orient::FromLeft),
            ],
        );
        // mirror: sinh(λ(a-x)) = sinh(λ(π-x))cosh(λ(π-a)) - cosh(λ(π-x))sinh(λ(π-a))
        let u2 = PiecewiseSinhFn::new(
            lambda,
            a,
            vec![
                Term::new(inv * (one + alpha * sh_b * ch_b), false, BasisKind::Sinh, Orient::FromRight),
                Term::new(-inv * alpha * sh_b * sh_b, false, BasisKind::Cosh, Orient::FromRight),
            ],
            vec![Term::new(inv, false, BasisKind::Sinh, Orient::FromRight)],
        );
        (u1, u2)
    };
    Ok(GreenKernel { lambda, u1, u2, s_value })
}

// ---------------------------------------------------------------------------
// Undamped basis modes and the Hilbert–Schmidt norm
// ---------------------------------------------------------------------------

/// Normalized eigenmode `ω_n = (1/(n√π)) sin(nx) (1, in)` of the undamped
/// operator; `{ω_n}` is an orthonormal basis of the energy space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisMode {
    pub index: i32,
}

impl BasisMode {
    pub fn new(index: i32) -> Self {
        assert!(index != 0, "basis modes are indexed by nonzero integers");
        Self { index }
    }

    pub fn lambda(&self) -> Complex64 {
        Complex64::new(0.0, self.index as f64)
    }

    /// Materialize as a [`ModePair`] with the given breakpoint (the
    /// breakpoint only controls quadrature splitting).
    pub fn to_mode_pair(&self, breakpoint: f64) -> ModePair {
        let n = self.index as f64;
        let lambda = self.lambda();
        // sin(nx) = -i sinh(inx)
        let c = Complex64::new(0.0, -1.0 / (n * PI.sqrt()));
        let first = PiecewiseSinhFn::new(
            lambda,
            breakpoint,
            vec![Term::new(c, false, BasisKind::Sinh, Orient::FromLeft)],
            sinh_from_left_rebased(c, lambda),
        );
        let second = first.scaled(lambda);
        ModePair { first, second, lambda, kind: ModeKind::Eigen }
    }
}

/// Closed bound, truncated mode sum and a-independent bound for
/// `‖A⁻¹‖²_HS`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsNormReport {
    /// `(|α| a(π-a)/π)² + π²/3`.
    pub closed_bound: f64,
    /// `Σ_{0<|n|≤N} ‖A⁻¹ω_n‖²` from the explicit per-mode formula.
    pub truncated_sum: f64,
    /// `π²(|α|²/16 + 1/3)`; equality with the closed bound iff a = π/2.
    pub a_independent_bound: f64,
}

/// Hilbert–Schmidt norm of `A⁻¹` : closed form and truncated mode sum.
///
/// Per mode,
/// `‖A⁻¹ω_n‖² = (|α|² sin²(na) a(π-a)/π + π/2 + (2/n) Im α sin²(na))/(πn²) + 1/(2n²)`;
/// the odd cross term cancels between `±n`, so the symmetric truncation
/// increases monotonically to the closed bound.
pub fn hs_norm(params: &DampingParams, n_trunc: u32) -> HsNormReport {
    let a = params.a();
    let alpha = params.alpha();
    let am = alpha.norm();
    let closed_bound = (am * a * (PI - a) / PI).powi(2) + PI * PI / 3.0;
    let a_independent_bound = PI * PI * (am * am / 16.0 + 1.0 / 3.0);
    let mode_norm_sq = |n: f64| -> f64 {
        let s2 = (n * a).sin().powi(2);
        (am * am * s2 * a * (PI - a) / PI + PI / 2.0 + 2.0 / n * alpha.im * s2) / (PI * n * n)
            + 0.5 / (n * n)
    };
    let mut truncated_sum = 0.0;
    for n in 1..=n_trunc {
        truncated_sum += mode_norm_sq(n as f64) + mode_norm_sq(-(n as f64));
    }
    HsNormReport { closed_bound, truncated_sum, a_independent_bound }
}

// ---------------------------------------------------------------------------
// Gram conditioning
// ---------------------------------------------------------------------------

/// Order eigenvalue records by `|Im λ|`, ties by `Re λ` then family — the
/// truncation order for Gram ladders.
pub fn sort_for_gram(records: &mut [EigenvalueRecord]) {
    records.sort_by(|x, y| {
        x.lambda
            .im
            .abs()
            .partial_cmp(&y.lambda.im.abs())
            .unwrap()
            .then(x.lambda.re.partial_cmp(&y.lambda.re).unwrap())
            .then(x.lambda.im.partial_cmp(&y.lambda.im).unwrap())
            .then(x.family.cmp(&y.family))
    });
}

/// λ-normalized, unit-energy mode system for a record list: `ψ/λ` (the
/// Bessel normalization) scaled to unit energy norm; double eigenvalues
/// contribute their eigen/generalized pair.
pub fn mode_system(
    records: &[EigenvalueRecord],
    params: &DampingParams,
) -> Result<Vec<ModePair>, ModeError> {
    let mut modes = Vec::with_capacity(records.len());
    for rec in records {
        let mut add = |mode: ModePair| -> Result<(), ModeError> {
            let scaled = mode.scaled(1.0 / rec.lambda);
            let norm = energy_norm(&scaled)?;
            if norm < 1e-300 {
                return Err(ModeError::DegeneratePairing);
            }
            modes.push(scaled.scaled(Complex64::new(1.0 / norm, 0.0)));
            Ok(())
        };
        add(eigenfunction(rec.lambda, params)?)?;
        if rec.alg_multiplicity == 2 {
            add(generalized_eigenfunction(rec.lambda, params)?)?;
        }
    }
    Ok(modes)
}

/// 2-norm condition number of the Hermitian Gram matrix of `modes`.
pub fn gram_condition_of(modes: &[ModePair]) -> Result<f64, ModeError> {
    let n = modes.len();
    assert!(n > 0, "empty mode system");
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = energy_inner_product(&modes[i], &modes[j])?;
            gram[i][j] = v;
            gram[j][i] = v.conj();
        }
    }
    // real symmetric embedding [[Re, -Im], [Im, Re]]: eigenvalues doubled
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = gram[i][j].re;
            m[(i, j + n)] = -gram[i][j].im;
            m[(i + n, j)] = gram[i][j].im;
            m[(i + n, j + n)] = gram[i][j].re;
        }
    }
    let eigen = m.symmetric_eigen();
    let max = eigen.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let min = eigen.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
    if min <= 1e-14 * max {
        // locate the dominant pair of the near-null direction
        let idx = eigen
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let v = eigen.eigenvectors.column(idx);
        let mut weights: Vec<(usize, f64)> = (0..n)
            .map(|i| (i, (v[i] * v[i] + v[i + n] * v[i + n]).sqrt()))
            .collect();
        weights.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        return Err(ModeError::SingularGram { i: weights[0].0, j: weights.get(1).map_or(0, |w| w.0) });
    }
    Ok(max / min)
}

/// Condition number of the Gram matrix of all (λ-normalized, unit-norm)
/// modes in `window`, a quantitative Riesz-sequence diagnostic.
pub fn gram_condition(params: &DampingParams, window: &SpectralWindow) -> Result<f64, ModeError> {
    let mut records = if params.rational_placement().is_some() {
        rational::spectrum(params, window)?.eigenvalues
    } else {
        contour::locate_eigenvalues(window, params)?
    };
    sort_for_gram(&mut records);
    let modes = mode_system(&records, params)?;
    gram_condition_of(&modes)
}
