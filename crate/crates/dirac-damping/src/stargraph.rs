//! The damped wave operator on a compact star graph.
//!
//! `n` copies of `[0, π]` are glued at the central vertex `x = 0` with
//! continuity and the damped flux condition `Σ_j u_j'(0) = α v(0)`; the outer
//! ends are Dirichlet.  The characteristic function factors as
//! `λ S_n(λ) = -(e^(2λπ)/4) P_{n,α}(e^(-2λπ))` with the quadratic
//! `P_{n,α}(z) = (n-α)z² + 2αz - (n+α)`, so the whole rational-placement
//! machinery applies with exponent denominator 1.
//!
//! The two roots are `ζ₁ = 1` (the ladder `λ = ik`) and
//! `ζ₂ = (α+n)/(α-n)`.  At the critical damping α = n the degree drops and
//! the second ladder disappears; at α = -n it degenerates to `ζ₂ = 0`, whose
//! ladder escapes to `Re λ = -∞`.  Both ways the spectrum becomes purely
//! imaginary, which is precisely where the graph loses the Riesz-basis
//! property (the interval criticality α = ±2 is the case n = 2 in disguise).

use crate::charfn::{self, CharFnError};
use crate::contour::SpectralWindow;
use crate::rational::{
    self, DampingPolynomial, DampingRegime, PolynomialKind, SpectrumError, WindowSpectrum,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("star graph needs at least one edge")]
    NoEdges,
    #[error("λ is not in the spectrum of the graph operator (residual {0:.3e})")]
    NotAnEigenvalue(f64),
    #[error(
        "the imaginary family of the single-edge graph carries no vertex-compatible eigenfunction"
    )]
    DegenerateSingleEdgeMode,
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    CharFn(#[from] CharFnError),
}

/// Star-graph configuration: edge count and damping constant at the vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarConfig {
    n: u32,
    alpha: Complex64,
}

impl StarConfig {
    pub fn new(n: u32, alpha: Complex64) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoEdges);
        }
        Ok(Self { n, alpha })
    }

    pub fn edges(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn regime(&self) -> DampingRegime {
        DampingRegime::classify(self.alpha, self.n as f64)
    }
}

/// An eigenfunction of the graph operator: per-edge multiples of the common
/// profile `sinh(λ(π-x))`, paired with the velocity `λu`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMode {
    pub lambda: Complex64,
    /// Edge coefficients `c_j`; the mode on edge `j` is `c_j sinh(λ(π-x))`.
    pub coefficients: Vec<Complex64>,
}

impl GraphMode {
    /// Displacement on edge `j` at `x`.
    pub fn eval_edge(&self, j: usize, x: f64) -> Complex64 {
        self.coefficients[j] * (self.lambda * (PI - x)).sinh()
    }

    /// Velocity component `λu` on edge `j`.
    pub fn eval_edge_velocity(&self, j: usize, x: f64) -> Complex64 {
        self.lambda * self.eval_edge(j, x)
    }

    pub fn edge_deriv(&self, j: usize, x: f64) -> Complex64 {
        -self.coefficients[j] * self.lambda * (self.lambda * (PI - x)).cosh()
    }

    /// Relative residual of the vertex condition `Σ u_j'(0) = α v(0)`.
    pub fn vertex_residual(&self, cfg: &StarConfig) -> f64 {
        let flux: Complex64 = (0..self.coefficients.len())
            .map(|j| self.edge_deriv(j, 0.0))
            .sum();
        let value = cfg.alpha() * self.eval_edge_velocity(0, 0.0);
        let scale = self
            .coefficients
            .iter()
            .map(|c| (c * self.lambda * (self.lambda * PI).cosh()).norm())
            .fold(1e-300, f64::max);
        (flux - value).norm() / scale
    }
}

/// The quadratic `P_{n,α}(z) = (n-α)z² + 2αz - (n+α)`, with degree trimming
/// at α = n and the exact `ζ = 0` root at α = -n.
pub fn build_graph_polynomial(cfg: &StarConfig) -> DampingPolynomial {
    let n = cfg.edges() as f64;
    let alpha = cfg.alpha();
    let regime = cfg.regime();
    let mut coeffs = vec![
        Complex64::new(-n, 0.0) - alpha,
        2.0 * alpha,
        Complex64::new(n, 0.0) - alpha,
    ];
    if regime == DampingRegime::CriticalPlus {
        coeffs.pop(); // leading n - α ≈ 0
    }
    if regime == DampingRegime::CriticalMinus {
        coeffs[0] = Complex64::new(0.0, 0.0); // constant -(n + α) ≈ 0
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
        coeffs.pop();
    }
    let effective_degree = coeffs.len() - 1;
    DampingPolynomial {
        coeffs,
        alpha,
        kind: PolynomialKind::StarGraph { n: cfg.edges() },
        effective_degree,
        regime,
    }
}

/// Eigenvalues of `A_n(α)` in `window`.
///
/// Family 1 is the ladder `λ = ik`, `k ∈ ℤ∖{0}`, from the `sinh(λπ)` factor;
/// family 2 (absent at α = ±n) comes from `ζ₂ = (α+n)/(α-n)`.  All records
/// are algebraically simple; residuals are relative to the natural scale of
/// `λ S_n`.
pub fn graph_eigenvalues(
    cfg: &StarConfig,
    window: &SpectralWindow,
) -> Result<WindowSpectrum, GraphError> {
    let poly = build_graph_polynomial(cfg);
    let roots = rational::find_roots(&poly)?;
    let (n, alpha) = (cfg.edges(), cfg.alpha());
    let spectrum = rational::map_roots(&roots, 1, window, move |lambda| {
        charfn::eval_s_graph(lambda, n, alpha)
            .map(|v| v.norm())
            .unwrap_or(f64::INFINITY)
    });
    // index ≤ 1 on the graph: every record stays simple
    debug_assert!(spectrum.eigenvalues.iter().all(|r| r.alg_multiplicity == 1));
    Ok(spectrum)
}

/// The eigenfunction at a graph eigenvalue.
///
/// Family 2 carries the common profile (all coefficients 1); family-1 modes
/// have `sinh(λπ) = 0` and live in the mean-zero coefficient space
/// `Σ c_j = 0` (the returned representative is `(1, -1, 0, …)`), which is
/// what the vertex condition degenerates to there.  A single-edge graph has
/// no mean-zero space, hence no family-1 eigenfunction.
pub fn graph_mode(lambda: Complex64, cfg: &StarConfig) -> Result<GraphMode, GraphError> {
    let residual = charfn::graph_relative_residual(lambda, cfg.edges(), cfg.alpha());
    if residual > 1e-6 {
        return Err(GraphError::NotAnEigenvalue(residual));
    }
    let n = cfg.edges() as usize;
    let sh = (lambda * PI).sinh();
    let harmonic = sh.norm() <= 1e-8 * (lambda.re.abs() * PI).exp();
    let coefficients = if harmonic {
        if n == 1 {
            return Err(GraphError::DegenerateSingleEdgeMode);
        }
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[0] = Complex64::new(1.0, 0.0);
        c[1] = Complex64::new(-1.0, 0.0);
        c
    } else {
        vec![Complex64::new(1.0, 0.0); n]
    };
    Ok(GraphMode { lambda, coefficients })
}
