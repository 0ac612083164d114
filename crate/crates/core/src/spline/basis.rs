//! Cox–de Boor evaluation of B-spline basis functions and their derivatives.

use super::knots::KnotVector;
use crate::error::{Result, SplineError};

/// Which one-sided limit to take when a parameter coincides with a knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    /// Right-continuous evaluation (half-open spans `[u_s, u_{s+1})`).
    #[default]
    Right,
    /// Left limit (spans `(u_s, u_{s+1}]`).
    Left,
}

fn check_span(kv: &KnotVector, span: usize, u: f64) -> Result<()> {
    let n = kv.basis_count();
    let p = kv.degree();
    if span < p || span >= n {
        return Err(SplineError::SpanOutOfRange { span, count: n });
    }
    let k = kv.knots();
    if !(k[span] < k[span + 1]) {
        return Err(SplineError::InvalidKnots(format!("knot span {span} is empty")));
    }
    if !(u >= k[span] && u <= k[span + 1]) {
        return Err(SplineError::ParameterOutOfRange { u, lower: k[span], upper: k[span + 1] });
    }
    Ok(())
}

/// Values `B_{s-p,p}(u), ..., B_{s,p}(u)` of the functions that do not vanish
/// on span `s`. `u` may equal the right end of the span, which yields the
/// left limit there.
pub fn eval_basis(kv: &KnotVector, span: usize, u: f64) -> Result<Vec<f64>> {
    check_span(kv, span, u)?;
    Ok(span_polynomials(kv, span, u))
}

/// Evaluates the polynomial pieces of span `span` at `u` without range
/// checks; outside the span this extrapolates the pieces.
pub(crate) fn span_polynomials(kv: &KnotVector, span: usize, u: f64) -> Vec<f64> {
    let p = kv.degree();
    let k = kv.knots();
    let mut values = vec![0.0; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    values[0] = 1.0;
    for j in 1..=p {
        left[j] = u - k[span + 1 - j];
        right[j] = k[span + j] - u;
        let mut saved = 0.0;
        for r in 0..j {
            let den = right[r + 1] + left[j - r];
            let temp = if den == 0.0 { 0.0 } else { values[r] / den };
            values[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        values[j] = saved;
    }
    values
}

/// Derivatives of orders `0..=order` of the `p + 1` functions non-zero on
/// `span`. Row `k` holds the `k`th derivatives; rows beyond `p` are zero.
pub fn eval_basis_derivatives(kv: &KnotVector, span: usize, u: f64, order: usize) -> Result<Vec<Vec<f64>>> {
    check_span(kv, span, u)?;
    Ok(span_polynomial_derivatives(kv, span, u, order))
}

pub(crate) fn span_polynomial_derivatives(kv: &KnotVector, span: usize, u: f64, order: usize) -> Vec<Vec<f64>> {
    let p = kv.degree();
    let k = kv.knots();
    let div = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };

    // ndu: upper triangle holds basis values, lower triangle knot differences
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = u - k[span + 1 - j];
        right[j] = k[span + j] - u;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = div(ndu[r][j - 1], ndu[j][r]);
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = vec![vec![0.0; p + 1]; order + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let top = order.min(p);
    // a_{k,g} recursion, two alternating rows
    let mut a = vec![vec![0.0; p + 1]; 2];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0].iter_mut().for_each(|x| *x = 0.0);
        a[0][0] = 1.0;
        for kk in 1..=top {
            let mut d = 0.0;
            let rk = r as isize - kk as isize;
            let pk = p - kk;
            if r >= kk {
                let rk = rk as usize;
                a[s2][0] = div(a[s1][0], ndu[pk + 1][rk]);
                d = a[s2][0] * ndu[rk][pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if r + 1 <= pk + 1 { kk - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = div(a[s1][j] - a[s1][j - 1], ndu[pk + 1][idx]);
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][kk] = div(-a[s1][kk - 1], ndu[pk + 1][r]);
                d += a[s2][kk] * ndu[r][pk];
            }
            ders[kk][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = p as f64;
    for kk in 1..=top {
        for v in ders[kk].iter_mut() {
            *v *= factor;
        }
        factor *= (p - kk) as f64;
    }
    ders
}

/// Span index for `u` honouring the requested one-sided limit.
pub fn locate(kv: &KnotVector, u: f64, side: Side) -> Result<usize> {
    match side {
        Side::Right => kv.find_span(u),
        Side::Left => kv.find_span_left(u),
    }
}

/// Values of all `n` basis functions at `u` (dense, mostly zeros).
pub fn eval_all(kv: &KnotVector, u: f64, side: Side) -> Result<Vec<f64>> {
    let span = locate(kv, u, side)?;
    let local = span_polynomials(kv, span, u);
    let mut out = vec![0.0; kv.basis_count()];
    out[span - kv.degree()..=span].copy_from_slice(&local);
    Ok(out)
}

/// `k`th derivatives of all `n` basis functions at `u`.
pub fn eval_all_derivative(kv: &KnotVector, u: f64, k: usize, side: Side) -> Result<Vec<f64>> {
    let span = locate(kv, u, side)?;
    let ders = span_polynomial_derivatives(kv, span, u, k);
    let mut out = vec![0.0; kv.basis_count()];
    out[span - kv.degree()..=span].copy_from_slice(&ders[k]);
    Ok(out)
}
