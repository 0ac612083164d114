//! Tensor-product trims `𝒜^v = 𝒜^v_u × 𝒜^v_v`.

use super::matrix::ExtensionMatrix;
use super::univariate::{univariate_weights, Role, TrimmedBasis1D};
use super::ValidDomain1D;
use crate::error::{Result, SplineError};
use crate::spline::basis::span_polynomials;
use crate::spline::KnotVector;

/// Bivariate basis trimmed to a rectangle. The flat index of `(i1, i2)` is
/// `i1 * n_v + i2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorTrimmedBasis {
    u: TrimmedBasis1D,
    v: TrimmedBasis1D,
}

impl TensorTrimmedBasis {
    pub fn new(kv_u: &KnotVector, dom_u: ValidDomain1D, kv_v: &KnotVector, dom_v: ValidDomain1D) -> Result<Self> {
        Ok(Self { u: TrimmedBasis1D::new(kv_u, dom_u)?, v: TrimmedBasis1D::new(kv_v, dom_v)? })
    }

    pub fn from_factors(u: TrimmedBasis1D, v: TrimmedBasis1D) -> Self {
        Self { u, v }
    }

    pub fn factor_u(&self) -> &TrimmedBasis1D {
        &self.u
    }

    pub fn factor_v(&self) -> &TrimmedBasis1D {
        &self.v
    }

    pub fn basis_count(&self) -> usize {
        self.u.knot_vector().basis_count() * self.v.knot_vector().basis_count()
    }

    pub fn flat(&self, i1: usize, i2: usize) -> usize {
        i1 * self.v.knot_vector().basis_count() + i2
    }

    pub fn unflat(&self, k: usize) -> (usize, usize) {
        let nv = self.v.knot_vector().basis_count();
        (k / nv, k % nv)
    }

    /// Exterior if either direction is exterior, stable if both are stable,
    /// degenerated otherwise.
    pub fn role(&self, i1: usize, i2: usize) -> Role {
        match (self.u.role(i1), self.v.role(i2)) {
            (Role::Exterior, _) | (_, Role::Exterior) => Role::Exterior,
            (Role::Stable, Role::Stable) => Role::Stable,
            _ => Role::Degenerated,
        }
    }

    fn with(&self, pred: impl Fn(Role) -> bool) -> Vec<usize> {
        (0..self.basis_count())
            .filter(|&k| {
                let (a, b) = self.unflat(k);
                pred(self.role(a, b))
            })
            .collect()
    }

    pub fn stable(&self) -> Vec<usize> {
        self.with(|r| r == Role::Stable)
    }

    pub fn degenerated(&self) -> Vec<usize> {
        self.with(|r| r == Role::Degenerated)
    }

    pub fn exterior(&self) -> Vec<usize> {
        self.with(|r| r == Role::Exterior)
    }

    pub fn non_exterior(&self) -> Vec<usize> {
        self.with(|r| r != Role::Exterior)
    }

    /// Anchor `(γ_{i1}, γ_{i2})` of a flat index.
    pub fn anchor(&self, k: usize) -> (f64, f64) {
        let (a, b) = self.unflat(k);
        (self.u.anchors()[a], self.v.anchors()[b])
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        self.u.domain().contains(u) && self.v.domain().contains(v)
    }

    /// `E_u ⊗ E_v`.
    pub fn extension_matrix(&self) -> Result<ExtensionMatrix> {
        Ok(self.u.extension_matrix()?.kron(&self.v.extension_matrix()?))
    }

    /// Stable extended functions at `(u, v)`, in the order of [`Self::stable`].
    pub fn eval_extended(&self, e: &ExtensionMatrix, u: f64, v: f64) -> Result<Vec<f64>> {
        if !self.contains(u, v) {
            return Err(SplineError::OutsideValidDomain { u, v });
        }
        let (ku, kv) = (self.u.knot_vector(), self.v.knot_vector());
        let (su, sv) = (ku.find_span(u)?, kv.find_span(v)?);
        let (bu, bv) = (span_polynomials(ku, su, u), span_polynomials(kv, sv, v));
        let mut full = vec![0.0; self.basis_count()];
        for (a, x) in bu.iter().enumerate() {
            for (b, y) in bv.iter().enumerate() {
                full[self.flat(su - ku.degree() + a, sv - kv.degree() + b)] = x * y;
            }
        }
        Ok(e.apply_to_global(&full))
    }
}

/// Weights of a degenerated bivariate function towards the stable functions
/// of its donor element: products of the univariate weights, with a
/// Kronecker delta in a direction where the index is stable.
pub fn bivariate_weights(tb: &TensorTrimmedBasis, j1: usize, j2: usize) -> Result<Vec<((usize, usize), f64)>> {
    if tb.role(j1, j2) != Role::Degenerated {
        return Err(SplineError::NotDegenerated { index: tb.flat(j1, j2) });
    }
    let factor = |b: &TrimmedBasis1D, j: usize| -> Result<Vec<(usize, f64)>> {
        match b.donor_span(j) {
            Some(s) => univariate_weights(b.knot_vector(), j, s),
            None => Ok(vec![(j, 1.0)]),
        }
    };
    let wu = factor(&tb.u, j1)?;
    let wv = factor(&tb.v, j2)?;
    Ok(wu.iter().flat_map(|&(a, x)| wv.iter().map(move |&(b, y)| ((a, b), x * y))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn appendix() -> KnotVector {
        KnotVector::new(vec![1., 1., 1., 2., 3., 4., 4., 4.], 2).unwrap()
    }

    fn corner_trim() -> TensorTrimmedBasis {
        let d = ValidDomain1D::trimmed_below(1.4, 4.0).unwrap();
        TensorTrimmedBasis::new(&appendix(), d, &appendix(), d).unwrap()
    }

    #[test]
    fn corner_function_weights_are_products() {
        let tb = corner_trim();
        let w = bivariate_weights(&tb, 0, 0).unwrap();
        assert_eq!(w.len(), 9);
        let get = |a: usize, b: usize| w.iter().find(|(k, _)| *k == (a, b)).unwrap().1;
        assert_abs_diff_eq!(get(1, 1), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(get(1, 2), -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(get(2, 2), 2.25, epsilon = 1e-12);
        assert_abs_diff_eq!(get(3, 3), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn edge_function_weights_are_univariate() {
        let tb = corner_trim();
        let w = bivariate_weights(&tb, 0, 2).unwrap();
        assert_eq!(w.len(), 3);
        let expected = [((1, 2), 2.0), ((2, 2), -1.5), ((3, 2), 0.5)];
        for ((k, v), (ek, ev)) in w.iter().zip(expected) {
            assert_eq!(*k, ek);
            assert_abs_diff_eq!(*v, ev, epsilon = 1e-12);
        }
        assert!(bivariate_weights(&tb, 2, 2).is_err());
    }

    #[test]
    fn swapping_directions_transposes_weights() {
        let kv_u = KnotVector::open_uniform(2, -1.0, 1.0, 8).unwrap();
        let kv_v = KnotVector::open(3, -1.0, 1.0, [-0.5, -0.2, 0.1, 0.1, 0.6]).unwrap();
        let du = ValidDomain1D::trimmed_above(-1.0, 0.33).unwrap();
        let dv = ValidDomain1D::trimmed_above(-1.0, 0.45).unwrap();
        let a = TensorTrimmedBasis::new(&kv_u, du, &kv_v, dv).unwrap();
        let b = TensorTrimmedBasis::new(&kv_v, dv, &kv_u, du).unwrap();
        for k in a.degenerated() {
            let (j1, j2) = a.unflat(k);
            let wa = bivariate_weights(&a, j1, j2).unwrap();
            let wb = bivariate_weights(&b, j2, j1).unwrap();
            assert_eq!(wa.len(), wb.len());
            for ((i, x), _) in wa.iter().zip(&wb) {
                let y = wb.iter().find(|(m, _)| *m == (i.1, i.0)).unwrap().1;
                assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn extension_matrix_rows_match_bivariate_weights() {
        let tb = corner_trim();
        let e = tb.extension_matrix().unwrap();
        assert_eq!(e.nrows(), tb.non_exterior().len());
        assert_eq!(e.col_indices(), &tb.stable()[..]);
        for k in tb.degenerated() {
            let (j1, j2) = tb.unflat(k);
            for ((a, b), w) in bivariate_weights(&tb, j1, j2).unwrap() {
                assert_abs_diff_eq!(e.get(k, tb.flat(a, b)), w, epsilon = 1e-14);
            }
        }
        for k in tb.stable() {
            assert_eq!(e.get(k, k), 1.0);
        }
    }

    #[test]
    fn extended_basis_is_partition_of_unity() {
        let tb = corner_trim();
        let e = tb.extension_matrix().unwrap();
        for (u, v) in [(1.6, 1.6), (2.5, 1.7), (3.9, 3.1), (4.0, 4.0)] {
            let s: f64 = tb.eval_extended(&e, u, v).unwrap().iter().sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        }
        assert!(tb.eval_extended(&e, 1.2, 2.0).is_err());
    }
}
