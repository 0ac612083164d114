//! Quadrature rules over valid domains and relative L2 errors.

use crate::error::{Result, SplineError};
use crate::extension::{CurveTrimmedBasis, ValidDomain1D};
use crate::spline::{KnotVector, Point};
use crate::trimming::{element_quadrature, gauss_legendre_on};

/// Gauss rule with `n` points on every knot span clipped to the valid
/// interval.
pub fn quadrature_1d(kv: &KnotVector, domain: &ValidDomain1D, n: usize) -> Vec<(Point<1>, f64)> {
    let mut out = Vec::new();
    for span in kv.spans() {
        if let Some((a, b)) = domain.clip(span.lower, span.upper) {
            out.extend(gauss_legendre_on(n, a, b).into_iter().map(|(x, w)| ([x], w)));
        }
    }
    out
}

/// Tensor Gauss rule on every clipped element of a tensor trim.
pub fn quadrature_tensor(
    kv_u: &KnotVector,
    dom_u: &ValidDomain1D,
    kv_v: &KnotVector,
    dom_v: &ValidDomain1D,
    n: usize,
) -> Vec<(Point<2>, f64)> {
    let qu = quadrature_1d(kv_u, dom_u, n);
    let qv = quadrature_1d(kv_v, dom_v, n);
    qu.iter().flat_map(|(x, wx)| qv.iter().map(move |(y, wy)| ([x[0], y[0]], wx * wy))).collect()
}

/// Rule over the valid part of a curve-trimmed patch: tensor Gauss on
/// regular elements, Coons patches on cut ones.
pub fn quadrature_curve(tb: &CurveTrimmedBasis, n: usize) -> Result<Vec<(Point<2>, f64)>> {
    let mut out = Vec::new();
    for el in tb.elements().elements() {
        out.extend(element_quadrature(tb.curve(), el, n)?);
    }
    Ok(out)
}

/// `‖f − f_h‖ / ‖f‖` in L2 under the given quadrature rule.
pub fn relative_l2_error<const D: usize>(
    rule: &[(Point<D>, f64)],
    f: impl Fn(&Point<D>) -> f64,
    fh: impl Fn(&Point<D>) -> Result<f64>,
) -> Result<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, w) in rule {
        let fx = f(x);
        let d = fx - fh(x)?;
        num += w * d * d;
        den += w * fx * fx;
    }
    if den <= 0.0 {
        return Err(SplineError::ZeroNorm);
    }
    Ok((num / den).sqrt())
}
