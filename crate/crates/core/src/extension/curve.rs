//! Bases trimmed by a curve in the parameter plane.

use std::collections::BTreeMap;

use super::matrix::ExtensionMatrix;
use super::univariate::{univariate_weights, Role};
use crate::error::{Result, SplineError};
use crate::spline::basis::span_polynomials;
use crate::spline::{KnotVector, Point};
use crate::trimming::{classify_spans, point_in_valid, ElementGrid, ElementType, Location, TrimRegion, TrimmingCurve};

const TIE_TOLERANCE: f64 = 1e-12;

/// Bivariate basis on the valid side of a trimming curve. Flat indices are
/// `i1 * n_v + i2` as for tensor trims.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrimmedBasis {
    kv_u: KnotVector,
    kv_v: KnotVector,
    curve: TrimmingCurve,
    grid: ElementGrid,
    roles: Vec<Role>,
    /// Donor element `(a, b)` (positions in the element grid) per
    /// degenerated flat index.
    donors: BTreeMap<usize, (usize, usize)>,
}

impl CurveTrimmedBasis {
    /// Classifies with Greville anchors: a function is exterior when every
    /// element of its support is outside, stable when its anchor is inside
    /// or on the curve.
    pub fn new(kv_u: &KnotVector, kv_v: &KnotVector, curve: TrimmingCurve) -> Result<Self> {
        let grid = classify_spans(&curve, kv_u, kv_v)?;
        let (gu, gv) = (kv_u.greville(), kv_v.greville());
        let (nu, nv) = (kv_u.basis_count(), kv_v.basis_count());
        let (pu, pv) = (kv_u.degree(), kv_v.degree());
        let region = TrimRegion::Curve(curve.clone());
        let mut roles = vec![Role::Exterior; nu * nv];
        for el in grid.elements() {
            if el.kind == ElementType::Outside {
                continue;
            }
            for i1 in el.span_u.index - pu..=el.span_u.index {
                for i2 in el.span_v.index - pv..=el.span_v.index {
                    roles[i1 * nv + i2] = Role::Degenerated;
                }
            }
        }
        for (k, r) in roles.iter_mut().enumerate() {
            if *r == Role::Degenerated && point_in_valid(&region, [gu[k / nv], gv[k % nv]]) != Location::Outside {
                *r = Role::Stable;
            }
        }
        let mut tb = Self { kv_u: kv_u.clone(), kv_v: kv_v.clone(), curve, grid, roles, donors: BTreeMap::new() };
        for k in tb.degenerated() {
            let d = tb.find_donor_element(k)?;
            tb.donors.insert(k, d);
        }
        Ok(tb)
    }

    pub fn knot_vectors(&self) -> (&KnotVector, &KnotVector) {
        (&self.kv_u, &self.kv_v)
    }

    pub fn curve(&self) -> &TrimmingCurve {
        &self.curve
    }

    pub fn elements(&self) -> &ElementGrid {
        &self.grid
    }

    pub fn basis_count(&self) -> usize {
        self.roles.len()
    }

    pub fn flat(&self, i1: usize, i2: usize) -> usize {
        i1 * self.kv_v.basis_count() + i2
    }

    pub fn unflat(&self, k: usize) -> (usize, usize) {
        let nv = self.kv_v.basis_count();
        (k / nv, k % nv)
    }

    pub fn role(&self, k: usize) -> Role {
        self.roles[k]
    }

    pub fn anchor(&self, k: usize) -> Point<2> {
        let (a, b) = self.unflat(k);
        [self.kv_u.greville()[a], self.kv_v.greville()[b]]
    }

    fn with(&self, pred: impl Fn(Role) -> bool) -> Vec<usize> {
        (0..self.roles.len()).filter(|&k| pred(self.roles[k])).collect()
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

    /// Donor element of a degenerated function as element-grid positions.
    pub fn donor_element(&self, k: usize) -> Option<(usize, usize)> {
        self.donors.get(&k).copied()
    }

    /// Nearest regular element whose active functions are all stable, by
    /// distance from the anchor to the element midpoint; ties go to the
    /// lexicographically smallest `(a, b)`.
    fn find_donor_element(&self, k: usize) -> Result<(usize, usize)> {
        let x = self.anchor(k);
        let (pu, pv) = (self.kv_u.degree(), self.kv_v.degree());
        let (nu, nv) = self.grid.shape();
        let mut best: Option<(f64, (usize, usize))> = None;
        for a in 0..nu {
            for b in 0..nv {
                let el = self.grid.get(a, b);
                if el.kind != ElementType::Regular {
                    continue;
                }
                let all_stable = (el.span_u.index - pu..=el.span_u.index)
                    .all(|i1| (el.span_v.index - pv..=el.span_v.index).all(|i2| self.roles[self.flat(i1, i2)] == Role::Stable));
                if !all_stable {
                    continue;
                }
                let m = el.midpoint();
                let d = ((m[0] - x[0]).powi(2) + (m[1] - x[1]).powi(2)).sqrt();
                match best {
                    Some((bd, _)) if d >= bd - TIE_TOLERANCE => {}
                    _ => best = Some((d, (a, b))),
                }
            }
        }
        best.map(|(_, e)| e).ok_or(SplineError::NoDonorSpan { index: k })
    }

    /// Weights of a degenerated function towards the functions of its
    /// donor element, products of univariate extrapolation weights.
    pub fn weights(&self, k: usize) -> Result<Vec<(usize, f64)>> {
        let (a, b) = self.donor_element(k).ok_or(SplineError::NotDegenerated { index: k })?;
        let el = self.grid.get(a, b);
        let (j1, j2) = self.unflat(k);
        let wu = univariate_weights(&self.kv_u, j1, el.span_u.index)?;
        let wv = univariate_weights(&self.kv_v, j2, el.span_v.index)?;
        Ok(wu.iter().flat_map(|&(i1, x)| wv.iter().map(move |&(i2, y)| (self.flat(i1, i2), x * y))).collect())
    }

    pub fn extension_matrix(&self) -> Result<ExtensionMatrix> {
        let cols = self.stable();
        let mut entries: Vec<(usize, usize, f64)> = cols.iter().map(|&i| (i, i, 1.0)).collect();
        for k in self.degenerated() {
            entries.extend(self.weights(k)?.into_iter().map(|(i, w)| (k, i, w)));
        }
        ExtensionMatrix::from_global(self.basis_count(), self.non_exterior(), cols, entries)
    }

    /// Stable extended functions at a valid point, in the order of
    /// [`Self::stable`].
    pub fn eval_extended(&self, e: &ExtensionMatrix, u: f64, v: f64) -> Result<Vec<f64>> {
        if point_in_valid(&TrimRegion::Curve(self.curve.clone()), [u, v]) == Location::Outside {
            return Err(SplineError::OutsideValidDomain { u, v });
        }
        Ok(e.apply_to_global(&self.eval_conventional(u, v)?))
    }

    /// All conventional tensor-product functions at `(u, v)`.
    pub fn eval_conventional(&self, u: f64, v: f64) -> Result<Vec<f64>> {
        let (su, sv) = (self.kv_u.find_span(u)?, self.kv_v.find_span(v)?);
        let (bu, bv) = (span_polynomials(&self.kv_u, su, u), span_polynomials(&self.kv_v, sv, v));
        let mut full = vec![0.0; self.basis_count()];
        for (a, x) in bu.iter().enumerate() {
            for (b, y) in bv.iter().enumerate() {
                full[self.flat(su - self.kv_u.degree() + a, sv - self.kv_v.degree() + b)] = x * y;
            }
        }
        Ok(full)
    }
}
