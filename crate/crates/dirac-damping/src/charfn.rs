//! The characteristic functions of the damped wave operators.
//!
//! For the interval model the spectrum of `A(a, α)` is exactly the zero set
//! (with multiplicities) of the entire function
//!
//! ```text
//! S(λ) = (sinh(λπ) + α sinh(λa) sinh(λ(π-a))) / λ ,
//! ```
//!
//! and `F(λ) = λ S(λ)` has the compact form
//! `F = sinh(λπ) + (α/2) cosh(λπ) - (α/2) cosh(λ(π-2a))` whose first two
//! λ-derivatives are also hard-coded here.  On the star graph the analogue is
//! `S_n(λ) = sinh(λπ)(n cosh(λπ) + α sinh(λπ)) / λ`.
//!
//! The division by λ is a removable singularity: below [`SERIES_RADIUS`] all
//! evaluations switch to an explicit power series, so `S(0) = π` (and
//! `S_n(0) = nπ`) come out exactly rather than as `0/0`.  For large `|Re λ|`
//! the hyperbolic terms are evaluated in scaled form (a common factor
//! `exp(|Re λ|π)` is split off) and the public functions report an
//! [`CharFnError::Overflow`] only when the final value itself leaves the
//! double-precision range.

use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::PI;
use thiserror::Error;

/// Below this modulus the closed forms for `S` switch to power series.
pub const SERIES_RADIUS: f64 = 1e-2;
/// Number of series terms kept inside [`SERIES_RADIUS`] (error ~ (π r)^(2K)/(2K)!).
const SERIES_TERMS: usize = 12;
/// `exp` of anything above this is outside f64 range.
const EXP_LIMIT: f64 = 709.0;

/// Evaluation failures of the characteristic functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharFnError {
    #[error("spectral parameter is not finite")]
    NonFinite,
    #[error("value overflows double precision (scale exponent {0:.1})")]
    Overflow(f64),
    #[error("placement fraction {p}/{q} must satisfy 0 < p < q with gcd(p, q) = 1")]
    InvalidFraction { p: u32, q: u32 },
}

/// Errors constructing [`DampingParams`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("damping position a = {0} must lie strictly inside (0, π)")]
    PlacementOutOfRange(f64),
    #[error("placement fraction {p}/{q} must satisfy 0 < p < q with gcd(p, q) = 1")]
    InvalidFraction { p: u32, q: u32 },
    #[error("damping constant must be finite")]
    NonFiniteAlpha,
}

/// Damping position and strength for the interval model.
///
/// When constructed through [`DampingParams::rational`] the position is
/// derived from the fraction `p/q` and never stored independently, so
/// `a = pπ/q` holds at the representation level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    a: f64,
    alpha: Complex64,
    rational: Option<(u32, u32)>,
}

impl DampingParams {
    /// Damping of strength `alpha` at an arbitrary position `a ∈ (0, π)`.
    pub fn new(a: f64, alpha: Complex64) -> Result<Self, ParamError> {
        if !(a.is_finite() && 0.0 < a && a < PI) {
            return Err(ParamError::PlacementOutOfRange(a));
        }
        if !alpha.is_finite() {
            return Err(ParamError::NonFiniteAlpha);
        }
        Ok(Self { a, alpha, rational: None })
    }

    /// Damping of strength `alpha` at the exact rational position `a = pπ/q`.
    pub fn rational(p: u32, q: u32, alpha: Complex64) -> Result<Self, ParamError> {
        if p == 0 || p >= q || p.gcd(&q) != 1 {
            return Err(ParamError::InvalidFraction { p, q });
        }
        if !alpha.is_finite() {
            return Err(ParamError::NonFiniteAlpha);
        }
        Ok(Self {
            a: PI * p as f64 / q as f64,
            alpha,
            rational: Some((p, q)),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// The `(p, q)` pair when the position was declared rational.
    pub fn rational_placement(&self) -> Option<(u32, u32)> {
        self.rational
    }

    /// Parameters of the formal adjoint: same position, damping `-conj(α)`.
    pub fn adjoint(&self) -> Self {
        Self {
            a: self.a,
            alpha: -self.alpha.conj(),
            rational: self.rational,
        }
    }
}

/// `S`, `F = λS`, `F'` and `F''` evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharValue {
    /// `S(λ)`.
    pub s: Complex64,
    /// `F(λ) = λ S(λ)`.
    pub f: Complex64,
    /// `F'(λ)`.
    pub f1: Complex64,
    /// `F''(λ)`.
    pub f2: Complex64,
}

/// A complex value kept as `mantissa · exp(exponent)` with `|mantissa|` of
/// order one, so quantities like `sinh(200π)` stay representable.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub mantissa: Complex64,
    pub exponent: f64,
}

impl Scaled {
    pub fn magnitude_ln(&self) -> f64 {
        self.mantissa.norm().ln() + self.exponent
    }

    /// Collapse to a plain complex number, or report overflow.
    pub fn to_complex(&self) -> Result<Complex64, CharFnError> {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if self.magnitude_ln() > EXP_LIMIT {
            return Err(CharFnError::Overflow(self.exponent));
        }
        // Split the exponent so each factor stays in range.
        let half = (self.exponent / 2.0).exp();
        let value = self.mantissa * half * half;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(CharFnError::Overflow(self.exponent))
        }
    }
}

/// `sinh(z) · exp(-s)` for `s ≥ |Re z|`; both exponentials stay bounded.
fn scaled_sinh(z: Complex64, s: f64) -> Complex64 {
    0.5 * ((z - s).exp() - (-z - s).exp())
}

/// `cosh(z) · exp(-s)` for `s ≥ |Re z|`.
fn scaled_cosh(z: Complex64, s: f64) -> Complex64 {
    0.5 * ((z - s).exp() + (-z - s).exp())
}

fn ensure_finite(lambda: Complex64) -> Result<(), CharFnError> {
    if lambda.is_finite() {
        Ok(())
    } else {
        Err(CharFnError::NonFinite)
    }
}

/// `F`, `F'`, `F''` (each times `exp(-E)`) and the natural cancellation scale
/// of `F`, with `E = |Re λ|π`.
pub(crate) fn f_derivatives_scaled(
    lambda: Complex64,
    params: &DampingParams,
) -> (Scaled, Scaled, Scaled, f64) {
    let a = params.a();
    let alpha = params.alpha();
    let e = lambda.re.abs() * PI;
    let zp = lambda * PI;
    let zm = lambda * (PI - 2.0 * a);

    let sh_p = scaled_sinh(zp, e);
    let ch_p = scaled_cosh(zp, e);
    let sh_m = scaled_sinh(zm, e);
    let ch_m = scaled_cosh(zm, e);
    let half_alpha = 0.5 * alpha;

    let f = sh_p + half_alpha * (ch_p - ch_m);
    let f1 = PI * ch_p + half_alpha * (PI * sh_p - (PI - 2.0 * a) * sh_m);
    let f2 = PI * PI * sh_p + half_alpha * (PI * PI * ch_p - (PI - 2.0 * a) * (PI - 2.0 * a) * ch_m);

    let scale = sh_p
        .norm()
        .max((half_alpha * ch_p).norm())
        .max((half_alpha * ch_m).norm())
        .max((-e).exp());

    (
        Scaled { mantissa: f, exponent: e },
        Scaled { mantissa: f1, exponent: e },
        Scaled { mantissa: f2, exponent: e },
        scale,
    )
}

/// Relative residual of `F` at `λ`: `|F| / scale` with the cancellation scale
/// of the three hyperbolic terms.  Zero exactly at eigenvalues.
pub(crate) fn f_relative_residual(lambda: Complex64, params: &DampingParams) -> f64 {
    let (f, _, _, scale) = f_derivatives_scaled(lambda, params);
    f.mantissa.norm() / scale
}

/// Power series of `S` around λ = 0:
/// `S = Σ_k π^(2k+1)/(2k+1)! λ^(2k) + (α/2) Σ_{k≥1} (π^(2k) - (π-2a)^(2k))/(2k)! λ^(2k-1)`.
///
/// The linear part is `π + α a(π-a) λ`.
fn series_s(lambda: Complex64, a: f64, alpha: Complex64) -> Complex64 {
    let b = PI - 2.0 * a;
    let lam2 = lambda * lambda;
    let mut acc = Complex64::new(PI, 0.0); // k = 0 term
    let mut pi_odd = PI; // π^(2k+1)
    let mut pi_even = 1.0; // π^(2k)
    let mut b_even = 1.0; // (π-2a)^(2k)
    let mut fact_odd = 1.0; // (2k+1)!
    let mut fact_even = 1.0; // (2k)!
    let mut lam_even = Complex64::new(1.0, 0.0); // λ^(2k)
    let mut lam_odd = lambda; // λ^(2k-1)
    for k in 1..SERIES_TERMS {
        let k2 = (2 * k) as f64;
        fact_even *= (k2 - 1.0) * k2;
        fact_odd *= k2 * (k2 + 1.0);
        pi_odd *= PI * PI;
        pi_even *= PI * PI;
        b_even *= b * b;
        lam_even *= lam2;
        acc += pi_odd / fact_odd * lam_even;
        acc += 0.5 * alpha * (pi_even - b_even) / fact_even * lam_odd;
        lam_odd *= lam2;
    }
    acc
}

/// `S(λ; a, α)`, the interval characteristic function.
///
/// Zeros (with multiplicity) are exactly the eigenvalues of `A(a, α)`.
pub fn eval_s(lambda: Complex64, params: &DampingParams) -> Result<Complex64, CharFnError> {
    ensure_finite(lambda)?;
    if lambda.norm() < SERIES_RADIUS {
        return Ok(series_s(lambda, params.a(), params.alpha()));
    }
    let (f, _, _, _) = f_derivatives_scaled(lambda, params);
    Scaled {
        mantissa: f.mantissa / lambda,
        exponent: f.exponent,
    }
    .to_complex()
}

/// `F`, `F'`, `F''` and `S` at one point.
///
/// The derivative formulas are hard-coded; they satisfy the identity
/// `F'' = π²F + 2aα(π-a) cosh(λ(π-2a))`.
pub fn eval_f_derivatives(
    lambda: Complex64,
    params: &DampingParams,
) -> Result<CharValue, CharFnError> {
    ensure_finite(lambda)?;
    let (f, f1, f2, _) = f_derivatives_scaled(lambda, params);
    let s = eval_s(lambda, params)?;
    Ok(CharValue {
        s,
        f: f.to_complex()?,
        f1: f1.to_complex()?,
        f2: f2.to_complex()?,
    })
}

/// Star-graph characteristic function
/// `S_n(λ; α) = sinh(λπ)(n cosh(λπ) + α sinh(λπ)) / λ`, with `S_n(0) = nπ`.
///
/// Panics if `n == 0`; construct through [`crate::StarConfig`] to enforce that.
pub fn eval_s_graph(lambda: Complex64, n: u32, alpha: Complex64) -> Result<Complex64, CharFnError> {
    assert!(n >= 1, "star graph needs at least one edge");
    ensure_finite(lambda)?;
    let nf = n as f64;
    if lambda.norm() < SERIES_RADIUS {
        // sinh(λπ)/λ by series, the remaining factor directly.
        let mut sinc = Complex64::new(0.0, 0.0);
        let mut pi_pow = PI;
        let mut fact = 1.0;
        let mut lam_even = Complex64::new(1.0, 0.0);
        for k in 0..SERIES_TERMS {
            if k > 0 {
                let k2 = (2 * k) as f64;
                fact *= k2 * (k2 + 1.0);
                pi_pow *= PI * PI;
                lam_even *= lambda * lambda;
            }
            sinc += pi_pow / fact * lam_even;
        }
        let zp = lambda * PI;
        return Ok(sinc * (nf * zp.cosh() + alpha * zp.sinh()));
    }
    let e = lambda.re.abs() * PI;
    let zp = lambda * PI;
    let sh = scaled_sinh(zp, e);
    let ch = scaled_cosh(zp, e);
    Scaled {
        mantissa: sh * (nf * ch + alpha * sh) / lambda,
        exponent: 2.0 * e,
    }
    .to_complex()
}

/// Relative residual of `λ S_n` against the natural scale of its two factors;
/// small exactly when `sinh(λπ) ≈ 0` (family 1) or `n cosh + α sinh ≈ 0`
/// (family 2).
pub(crate) fn graph_relative_residual(lambda: Complex64, n: u32, alpha: Complex64) -> f64 {
    let nf = n as f64;
    if lambda.norm() < SERIES_RADIUS {
        // never a zero near the origin: S_n(0) = nπ
        return 1.0;
    }
    let e = lambda.re.abs() * PI;
    let zp = lambda * PI;
    let sh = scaled_sinh(zp, e);
    let ch = scaled_cosh(zp, e);
    let floor = (-e).exp();
    let value = (sh * (nf * ch + alpha * sh)).norm();
    let scale = sh.norm().max(floor) * (nf * ch.norm()).max((alpha * sh).norm()).max(floor);
    value / scale
}

/// Ascending coefficients of the damping polynomial
/// `P_α(z) = (2-α) z^q + α z^p + α z^(q-p) - (2+α)`.
pub(crate) fn damping_poly_coeffs(p: u32, q: u32, alpha: Complex64) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); q as usize + 1];
    coeffs[0] -= 2.0 + alpha;
    coeffs[p as usize] += alpha;
    coeffs[(q - p) as usize] += alpha;
    coeffs[q as usize] += 2.0 - alpha;
    coeffs
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// `S` evaluated through the rational-placement factorization
/// `S(λ; pπ/q, α) = -(1/4λ) e^(λπ) P_α(e^(-2λπ/q))`.
///
/// Agrees with [`eval_s`] at `a = pπ/q`.  For `Re λ < 0` the reciprocal
/// symmetry `z^q P_α(1/z) = -P_{-α}(z)` is used so the argument of `P` stays
/// inside the unit disc.
pub fn eval_s_via_polynomial(
    lambda: Complex64,
    p: u32,
    q: u32,
    alpha: Complex64,
) -> Result<Complex64, CharFnError> {
    if p == 0 || p >= q || p.gcd(&q) != 1 {
        return Err(CharFnError::InvalidFraction { p, q });
    }
    ensure_finite(lambda)?;
    if lambda.norm() < SERIES_RADIUS {
        let params = DampingParams::rational(p, q, alpha)
            .map_err(|_| CharFnError::InvalidFraction { p, q })?;
        return eval_s(lambda, &params);
    }
    let (coeffs, sign, exp_arg) = if lambda.re >= 0.0 {
        (damping_poly_coeffs(p, q, alpha), -1.0, lambda * PI)
    } else {
        (damping_poly_coeffs(p, q, -alpha), 1.0, -lambda * PI)
    };
    let w = (-2.0 * exp_arg / q as f64).exp();
    let poly = horner(&coeffs, w);
    // exp_arg has non-negative real part; split its modulus off as the scale.
    let e = exp_arg.re;
    Scaled {
        mantissa: sign * (exp_arg - e).exp() * poly / (4.0 * lambda),
        exponent: e,
    }
    .to_complex()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(a: f64, alpha: Complex64) -> DampingParams {
        DampingParams::new(a, alpha).unwrap()
    }

    #[test]
    fn s_at_zero_is_pi() {
        for (a, alpha) in [(1.0, c(0.0, 0.0)), (0.3, c(5.0, -2.0)), (2.9, c(-7.0, 11.0))] {
            let s = eval_s(c(0.0, 0.0), &params(a, alpha)).unwrap();
            assert_relative_eq!(s.re, PI, max_relative = 1e-15);
            assert_eq!(s.im, 0.0);
        }
    }

    #[test]
    fn undamped_zero_at_i() {
        let s = eval_s(c(0.0, 1.0), &params(1.0, c(0.0, 0.0))).unwrap();
        assert!(s.norm() < 1e-15, "|S(i)| = {}", s.norm());
    }

    #[test]
    fn central_critical_value_at_one() {
        // a = π/2, α = 2 gives λS = e^(λπ) - 1, so S(1) = e^π - 1.
        let p = DampingParams::rational(1, 2, c(2.0, 0.0)).unwrap();
        let s = eval_s(c(1.0, 0.0), &p).unwrap();
        assert_relative_eq!(s.re, 22.140692632779269, max_relative = 1e-14);
        assert_relative_eq!(s.im, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn f_derivative_values_at_zero() {
        for (a, alpha) in [(1.0, c(1.0, 1.0)), (0.4, c(-3.0, 0.5))] {
            let v = eval_f_derivatives(c(0.0, 0.0), &params(a, alpha)).unwrap();
            assert!(v.f.norm() < 1e-14);
            assert_relative_eq!(v.f1.re, PI, max_relative = 1e-14);
            assert_relative_eq!(v.f1.im, 0.0, epsilon = 1e-14);
            // F''(0) = 2aα(π-a)
            let want = 2.0 * a * alpha * (PI - a);
            assert_relative_eq!(v.f2.re, want.re, max_relative = 1e-12);
            assert_relative_eq!(v.f2.im, want.im, max_relative = 1e-12);
        }
    }

    #[test]
    fn second_derivative_identity() {
        // F''(λ) - π²F(λ) = 2aα(π-a) cosh(λ(π-2a)), both sides independent.
        let a = 1.0;
        let alpha = c(1.0, 1.0);
        let lam = c(0.7, 0.3);
        let v = eval_f_derivatives(lam, &params(a, alpha)).unwrap();
        let lhs = v.f2 - PI * PI * v.f;
        let rhs = 2.0 * a * alpha * (PI - a) * (lam * (PI - 2.0 * a)).cosh();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn graph_values() {
        assert!(eval_s_graph(c(0.0, 2.0), 4, c(3.0, 1.0)).unwrap().norm() < 1e-12);
        let v = eval_s_graph(c(0.0, 0.0), 3, c(5.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 3.0 * PI, max_relative = 1e-15);
        // n = 2, α = 2: S_n ∝ sinh(λπ) e^(λπ), zero at λ = i.
        let v = eval_s_graph(c(0.0, 1.0), 2, c(2.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn polynomial_route_examples() {
        // p=1, q=2, α=2: S(1) = e^π - 1.
        let v = eval_s_via_polynomial(c(1.0, 0.0), 1, 2, c(2.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 22.140692632779269, max_relative = 1e-13);
        // P_α(1) = 0 forces zeros at λ = iqm.
        let v = eval_s_via_polynomial(c(0.0, 6.0), 1, 3, c(4.0, -1.0)).unwrap();
        assert!(v.norm() < 1e-12, "|S(6i)| = {}", v.norm());
        // invalid fractions rejected
        assert!(matches!(
            eval_s_via_polynomial(c(1.0, 0.0), 2, 4, c(0.0, 0.0)),
            Err(CharFnError::InvalidFraction { .. })
        ));
    }

    #[test]
    fn polynomial_route_matches_direct_on_grid() {
        let (p, q) = (1u32, 3u32);
        let alpha = c(1.0, 2.0);
        let dp = DampingParams::rational(p, q, alpha).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let lam = c(-2.0 + 4.0 * i as f64 / 9.0, -10.0 + 20.0 * j as f64 / 9.0);
                if lam.norm() < SERIES_RADIUS {
                    continue;
                }
                let direct = eval_s(lam, &dp).unwrap();
                let poly = eval_s_via_polynomial(lam, p, q, alpha).unwrap();
                assert!(
                    (direct - poly).norm() <= 1e-12 * (1.0 + direct.norm()),
                    "mismatch at {lam}: {direct} vs {poly}"
                );
            }
        }
    }

    #[test]
    fn scaled_evaluation_far_out() {
        // |Re λ|π ≈ 628: direct sinh would overflow nothing here, but the
        // magnitude check still has to hold against the mirrored formula.
        let lam = c(200.0, 3.0);
        let dp = params(1.3, c(4.0, -1.0));
        let v = eval_s(lam, &dp).unwrap();
        assert!(v.is_finite());
        let w = eval_s(-lam, &dp).unwrap();
        assert!(w.is_finite());
        // genuine overflow reported as an error, not as inf
        let too_far = c(300.0, 0.0);
        assert!(matches!(eval_s(too_far, &dp), Err(CharFnError::Overflow(_))));
    }

    #[test]
    fn non_finite_rejected() {
        let dp = params(1.0, c(1.0, 0.0));
        assert_eq!(eval_s(c(f64::NAN, 0.0), &dp), Err(CharFnError::NonFinite));
        assert_eq!(eval_s(c(f64::INFINITY, 1.0), &dp), Err(CharFnError::NonFinite));
    }

    #[test]
    fn param_validation() {
        assert!(DampingParams::new(0.0, c(1.0, 0.0)).is_err());
        assert!(DampingParams::new(PI, c(1.0, 0.0)).is_err());
        assert!(DampingParams::rational(2, 4, c(1.0, 0.0)).is_err());
        assert!(DampingParams::rational(3, 2, c(1.0, 0.0)).is_err());
        assert!(DampingParams::rational(0, 2, c(1.0, 0.0)).is_err());
        let p = DampingParams::rational(2, 5, c(1.0, 0.0)).unwrap();
        assert_relative_eq!(p.a(), 2.0 * PI / 5.0);
    }

    proptest! {
        /// Adjoint symmetry of the function itself:
        /// S(-conj λ; a, -conj α) = conj(S(λ; a, α)).
        #[test]
        fn adjoint_symmetry(
            re in -3.0f64..3.0,
            im in -12.0f64..12.0,
            a in 0.05f64..3.09,
            are in -6.0f64..6.0,
            aim in -6.0f64..6.0,
        ) {
            let lam = c(re, im);
            let alpha = c(are, aim);
            let s = eval_s(lam, &params(a, alpha)).unwrap();
            let t = eval_s(-lam.conj(), &params(a, alpha).adjoint()).unwrap();
            prop_assert!((t - s.conj()).norm() <= 1e-13 * (1.0 + s.norm()));
        }

        /// The formula is symmetric under a ↔ π - a.
        #[test]
        fn placement_symmetry(
            re in -3.0f64..3.0,
            im in -12.0f64..12.0,
            a in 0.05f64..3.09,
            are in -6.0f64..6.0,
            aim in -6.0f64..6.0,
        ) {
            let lam = c(re, im);
            let alpha = c(are, aim);
            let s1 = eval_s(lam, &params(a, alpha)).unwrap();
            let s2 = eval_s(lam, &params(PI - a, alpha)).unwrap();
            prop_assert!((s1 - s2).norm() <= 1e-13 * (1.0 + s1.norm()));
        }

        /// |S(λ) - (π + α a(π-a) λ)| ≤ C|λ|² on |λ| ≤ 0.1; C frozen from a
        /// one-off fit over |α| ≤ 10 (worst observed 7.74).
        #[test]
        fn small_lambda_consistency(
            r in 1e-6f64..0.1,
            th in 0.0f64..6.283,
            a in 0.05f64..3.09,
            are in -10.0f64..10.0,
            aim in -10.0f64..10.0,
        ) {
            let lam = Complex64::from_polar(r, th);
            let alpha = c(are, aim);
            let s = eval_s(lam, &params(a, alpha)).unwrap();
            let lin = Complex64::new(PI, 0.0) + alpha * a * (PI - a) * lam;
            prop_assert!((s - lin).norm() <= 8.0 * r * r);
        }

        /// F = λ·S away from the series disc.
        #[test]
        fn f_s_consistency(
            re in -3.0f64..3.0,
            im in -12.0f64..12.0,
            a in 0.05f64..3.09,
            are in -6.0f64..6.0,
            aim in -6.0f64..6.0,
        ) {
            let lam = c(re, im);
            prop_assume!(lam.norm() >= SERIES_RADIUS);
            let alpha = c(are, aim);
            let v = eval_f_derivatives(lam, &params(a, alpha)).unwrap();
            prop_assert!((v.f - lam * v.s).norm() <= 1e-13 * (1.0 + v.f.norm()));
        }
    }
}
