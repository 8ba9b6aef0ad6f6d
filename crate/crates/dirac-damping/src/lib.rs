//! Spectral toolkit for the wave equation with a point (Dirac) damping.
//!
//! The model is the string equation `u_tt = u_xx - α δ(x-a) u_t` on `(0, π)`
//! with Dirichlet ends, viewed as a first-order block operator `A(a, α)` on
//! displacement/velocity pairs, together with its analogue `A_n(α)` on a
//! compact star graph of `n` equal edges damped at the central vertex.
//!
//! Everything the crate computes flows from one object: the entire
//! characteristic function `S(λ)` whose zeros, with multiplicity, are the
//! eigenvalues of the operator.  On top of it sit
//!
//! * [`charfn`] — evaluation of `S`, of `F = λS` and its λ-derivatives, of
//!   the star-graph analogue, and of the polynomial factorization available
//!   when the damping sits at a rational multiple of π;
//! * [`rational`] — the damping polynomial `P_α`, its roots, and the explicit
//!   eigenvalue families they generate;
//! * [`contour`] — argument-principle zero counting and Newton polishing for
//!   arbitrary damping placement;
//! * [`modes`] — closed-form eigenfunctions, generalized and adjoint
//!   eigenvectors, Green kernels, energy inner products, Hilbert–Schmidt
//!   norms and Gram conditioning diagnostics;
//! * [`trace`] — both sides of the Livšic comparison `Tr Re A⁻¹` versus
//!   `Σ Re(1/λ)`, in closed form and truncated, and the resulting
//!   Riesz-basis verdict (the transition sits at α = ±2 on the interval and
//!   α = ±n on the star graph);
//! * [`stargraph`] — the star-graph spectrum and vertex modes;
//! * [`cli`] — a batch front end emitting machine-readable reports.
//!
//! The `examples/` directory has one runnable program per capability; start
//! with `interval_spectrum` and `trace_identity`.

pub mod charfn;
pub mod cli;
pub mod contour;
pub mod modes;
pub mod rational;
pub mod stargraph;
pub mod trace;

pub use charfn::{CharFnError, CharValue, DampingParams};
pub use contour::SpectralWindow;
pub use rational::{DampingPolynomial, DampingRegime, EigenvalueRecord, RootRecord, WindowSpectrum};
pub use stargraph::StarConfig;
pub use trace::TraceReport;
