//! Power-basis and Taylor-form polynomials.

use crate::error::{Result, SplineError};
use crate::spline::basis::span_polynomial_derivatives;
use crate::spline::net::binomial;
use crate::spline::KnotVector;

/// Polynomial `π_0 + π_1 u + ... + π_p u^p` in ascending power basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPolynomial {
    coeffs: Vec<f64>,
}

impl PowerPolynomial {
    /// An empty coefficient list is treated as the zero constant.
    pub fn new(coeffs: Vec<f64>) -> Self {
        if coeffs.is_empty() {
            return Self { coeffs: vec![0.0] };
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nominal degree, i.e. `coeffs.len() - 1` (trailing zeros included).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Pads with zeros to the given nominal degree; never truncates.
    pub fn padded(&self, degree: usize) -> Self {
        let mut c = self.coeffs.clone();
        if c.len() < degree + 1 {
            c.resize(degree + 1, 0.0);
        }
        Self { coeffs: c }
    }

    /// `f(x), f'(x), ..., f^(p)(x)` by repeated synthetic division.
    ///
    /// Row `d + 1` of the Horner table holds the coefficients of the quotient
    /// after `d + 1` divisions by `(u - x)`; its entry `d` is `f^(d)(x) / d!`.
    pub fn horner_derivatives(&self, x: f64) -> Vec<f64> {
        let p = self.degree();
        let mut m = vec![vec![0.0; p + 1]; p + 2];
        m[0].copy_from_slice(&self.coeffs);
        for d in 0..=p {
            m[d + 1][p] = m[d][p];
            for e in (d..p).rev() {
                m[d + 1][e] = x * m[d + 1][e + 1] + m[d][e];
            }
        }
        let mut fact = 1.0;
        (0..=p)
            .map(|d| {
                if d > 0 {
                    fact *= d as f64;
                }
                fact * m[d + 1][d]
            })
            .collect()
    }
}

/// Taylor expansion `Σ α_k (u - τ)^k` of one polynomial piece of a basis
/// function.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSegment {
    pub center: f64,
    pub coeffs: Vec<f64>,
}

impl TaylorSegment {
    /// Piece of `B_{i,p}` on span `s`, expanded about `center ∈ [u_s, u_{s+1})`.
    pub fn from_basis(kv: &KnotVector, i: usize, s: usize, center: f64) -> Result<Self> {
        let p = kv.degree();
        let span = kv.span(s)?;
        if !span.nonzero_indices().contains(&i) {
            return Err(SplineError::IndexOutOfRange { index: i, count: kv.basis_count() });
        }
        if !(center >= span.lower && center < span.upper) {
            return Err(SplineError::ParameterOutOfRange { u: center, lower: span.lower, upper: span.upper });
        }
        let ders = span_polynomial_derivatives(kv, s, center, p);
        let local = i + p - s;
        let mut fact = 1.0;
        let coeffs = (0..=p)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                ders[k][local] / fact
            })
            .collect();
        Ok(Self { center, coeffs })
    }

    pub fn eval(&self, u: f64) -> f64 {
        let x = u - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Expands a Taylor segment into the power basis:
/// `π_k = Σ_{ν ≥ k} C(ν, k) α_ν (-τ)^(ν - k)`.
pub fn segment_to_power(seg: &TaylorSegment) -> PowerPolynomial {
    let p = seg.coeffs.len() - 1;
    let shift = -seg.center;
    let coeffs = (0..=p)
        .map(|k| {
            (k..=p)
                .map(|nu| binomial(nu, k) * seg.coeffs[nu] * shift.powi((nu - k) as i32))
                .sum()
        })
        .collect();
    PowerPolynomial::new(coeffs)
}

/// Power form of the piece of `B_{i,p}` on span `s`. The expansion point is
/// the span midpoint, which keeps the conversion well conditioned.
pub fn basis_segment(kv: &KnotVector, i: usize, s: usize) -> Result<PowerPolynomial> {
    let mid = kv.span(s)?.midpoint();
    Ok(segment_to_power(&TaylorSegment::from_basis(kv, i, s, mid)?))
}

/// Coefficients of `N_{j,p}(u) = Π_{ν=1..p} (u - u_{j+ν})` in ascending
/// power basis.
///
/// The coefficient of `u^k` is `(-1)^(p-k)` times the elementary symmetric
/// sum over all `(p-k)`-subsets of the knot positions `j+1..=j+p`; subsets
/// are visited in lexicographic order. Equal knot values at different
/// positions count as distinct members.
pub fn newton_basis_coeffs(kv: &KnotVector, j: usize) -> Result<PowerPolynomial> {
    let n = kv.basis_count();
    if j >= n {
        return Err(SplineError::IndexOutOfRange { index: j, count: n });
    }
    Ok(newton_coeffs_about(kv, j, 0.0))
}

/// Coefficients of `N_j` in the shifted variable `w = u - origin`.
pub(crate) fn newton_coeffs_about(kv: &KnotVector, j: usize, origin: f64) -> PowerPolynomial {
    let p = kv.degree();
    let roots: Vec<f64> = kv.knots()[j + 1..=j + p].iter().map(|r| r - origin).collect();
    let mut coeffs = vec![0.0; p + 1];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let m = p - k;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *c = sign * elementary_symmetric(&roots, m);
    }
    PowerPolynomial::new(coeffs)
}

/// Sum of products over all `m`-subsets of `x`, enumerated lexicographically.
fn elementary_symmetric(x: &[f64], m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let len = x.len();
    if m > len {
        return 0.0;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    let mut total = 0.0;
    loop {
        total += idx.iter().map(|&i| x[i]).product::<f64>();
        // advance to the next combination
        let mut pos = m;
        while pos > 0 && idx[pos - 1] == len - m + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return total;
        }
        idx[pos - 1] += 1;
        for q in pos..m {
            idx[q] = idx[q - 1] + 1;
        }
    }
}
