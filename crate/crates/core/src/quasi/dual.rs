//! The de Boor–Fix dual functional and the extrapolation weights built on it.

use nalgebra::{DMatrix, DVector};

use super::poly::{newton_coeffs_about, segment_to_power, PowerPolynomial, TaylorSegment};
use crate::error::{Result, SplineError};
use crate::spline::basis::span_polynomials;
use crate::spline::KnotVector;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Default evaluation point of `λ_j`: the midpoint of the support of `B_j`.
pub fn default_dual_point(kv: &KnotVector, j: usize) -> Result<f64> {
    let n = kv.basis_count();
    if j >= n {
        return Err(SplineError::IndexOutOfRange { index: j, count: n });
    }
    let (a, b) = kv.support(j);
    Ok(0.5 * (a + b))
}

/// `λ_{j,p}(f) = 1/p! Σ_k (-1)^k N_j^(p-k)(λ) f^(k)(λ)`.
///
/// `f_derivs[k]` is `f^(k)(λ)` for `k = 0..=p`. For `f` in the spline space
/// the value does not depend on `λ`.
pub fn dual_functional(kv: &KnotVector, j: usize, f_derivs: &[f64], lambda: f64) -> Result<f64> {
    let p = kv.degree();
    let n = kv.basis_count();
    if j >= n {
        return Err(SplineError::IndexOutOfRange { index: j, count: n });
    }
    let (lower, upper) = kv.support(j);
    if !(lambda >= lower && lambda <= upper) {
        return Err(SplineError::DualPointOutOfSupport { index: j, lambda, lower, upper });
    }
    if f_derivs.len() < p + 1 {
        return Err(SplineError::DimensionMismatch(format!(
            "dual functional of degree {p} needs {} derivatives, got {}",
            p + 1,
            f_derivs.len()
        )));
    }
    // Horner about the support midpoint; same values, less cancellation
    let mid = 0.5 * (lower + upper);
    let nd = newton_coeffs_about(kv, j, mid).horner_derivatives(lambda - mid);
    let sum: f64 = (0..=p)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * nd[p - k] * f_derivs[k]
        })
        .sum();
    Ok(sum / factorial(p))
}

/// Evaluation of the dual functional at the origin, where only the
/// coefficients of `N_j` (`beta`) and of the polynomial `f` (`pi`) enter:
/// `1/p! Σ_k (-1)^k (p-k)! β_{p-k} k! π_k`.
pub fn dual_functional_indirect(beta: &PowerPolynomial, pi: &PowerPolynomial, p: usize) -> Result<f64> {
    if beta.degree() > p || pi.degree() > p {
        return Err(SplineError::DimensionMismatch(format!(
            "polynomials of degree {} and {} exceed {p}",
            beta.degree(),
            pi.degree()
        )));
    }
    let beta = beta.padded(p);
    let pi = pi.padded(p);
    let sum: f64 = (0..=p)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial(p - k) * beta.coeffs()[p - k] * factorial(k) * pi.coeffs()[k]
        })
        .sum();
    Ok(sum / factorial(p))
}

/// Coefficients of the `p + 1` functions active on span `sigma` that
/// interpolate `f` at `p + 1` equidistant points of the span (ends
/// included). For a polynomial `f` of degree `p` these are its dual
/// functionals, since the local basis reproduces polynomials.
pub fn interpolation_coefficients(kv: &KnotVector, sigma: usize, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    let p = kv.degree();
    let span = kv.span(sigma)?;
    let anchors: Vec<f64> = (0..=p)
        .map(|q| if p == 0 { span.midpoint() } else { span.lower + span.length() * q as f64 / p as f64 })
        .collect();
    let mut a = DMatrix::zeros(p + 1, p + 1);
    for (r, &x) in anchors.iter().enumerate() {
        for (c, v) in span_polynomials(kv, sigma, x).into_iter().enumerate() {
            a[(r, c)] = v;
        }
    }
    let rhs = DVector::from_iterator(p + 1, anchors.iter().map(|&x| f(x)));
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or(SplineError::SingularSystem { kappa: f64::INFINITY })?;
    Ok(sol.iter().copied().collect())
}

/// How `λ_j(b)` is evaluated for a polynomial piece `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightRoute {
    /// Horner derivatives of `N_j` and `b` at the dual point.
    Direct,
    /// Coefficient formula, independent of the dual point.
    #[default]
    Indirect,
    /// Local interpolation on the first non-empty span of `supp B_j`.
    Interpolation,
}

/// Extrapolation weight `λ_j(b^s_i)`, where `b^s_i` is the polynomial piece
/// of `B_i` on span `s`, continued to the whole real line.
///
/// `lambda` only affects [`WeightRoute::Direct`]; it defaults to the support
/// midpoint of `B_j`.
pub fn extrapolation_weight(
    kv: &KnotVector,
    j: usize,
    i: usize,
    s: usize,
    route: WeightRoute,
    lambda: Option<f64>,
) -> Result<f64> {
    let p = kv.degree();
    let span = kv.span(s)?;
    if !span.nonzero_indices().contains(&i) {
        return Err(SplineError::IndexOutOfRange { index: i, count: kv.basis_count() });
    }
    let center = default_dual_point(kv, j)?;
    match route {
        WeightRoute::Direct => {
            let lambda = lambda.unwrap_or(center);
            let piece = segment_to_power(&TaylorSegment::from_basis(kv, i, s, span.midpoint())?);
            dual_functional(kv, j, &piece.horner_derivatives(lambda), lambda)
        }
        WeightRoute::Indirect => {
            // the formula is translation invariant; working about the support
            // midpoint of B_j avoids cancellation far from the origin
            let mut seg = TaylorSegment::from_basis(kv, i, s, span.midpoint())?;
            seg.center -= center;
            dual_functional_indirect(&newton_coeffs_about(kv, j, center), &segment_to_power(&seg), p)
        }
        WeightRoute::Interpolation => {
            let sigma = (j..=j + p)
                .find(|&q| q >= p && q < kv.basis_count() && kv.knots()[q] < kv.knots()[q + 1])
                .ok_or(SplineError::IndexOutOfRange { index: j, count: kv.basis_count() })?;
            let local = i + p - s;
            let coeffs = interpolation_coefficients(kv, sigma, |x| span_polynomials(kv, s, x)[local])?;
            Ok(coeffs[j + p - sigma])
        }
    }
}
