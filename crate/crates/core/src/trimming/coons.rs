//! Local Coons mapping of trimmed elements onto the reference square.
//!
//! A cut element is mapped from `[-1, 1]²` by blending its curved edge
//! `τ_b` (at `ξ2 = -1`) linearly with the opposite straight edge `τ_e` (at
//! `ξ2 = +1`):
//!
//! `x(ξ1, ξ2) = (1 - ξ2)/2 · τ_b(ξ1) + (1 + ξ2)/2 · τ_e(ξ1)`.

use super::curve::TrimmingCurve;
use super::elements::{Element, ElementType};
use super::quadrature::gauss_legendre_on;
use crate::error::{Result, SplineError};
use crate::spline::{Curve, KnotVector, Point};

/// Ruled patch between a curved bottom edge and a straight (or collapsed)
/// top edge, both on `[-1, 1]` with the same degree and knot vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CoonsElement {
    bottom: Curve<2>,
    top: Curve<2>,
}

impl CoonsElement {
    /// Builds the patch from a bottom curve on any interval and the end
    /// points `a`, `b` of the top edge (`a` opposite the start of the
    /// bottom curve). The top edge is raised to the degree of the bottom one
    /// and refined to its knot vector.
    pub fn new(bottom: &Curve<2>, a: Point<2>, b: Point<2>) -> Result<Self> {
        let bottom = bottom.reparameterized(-1.0, 1.0)?;
        let p = bottom.degree();
        if p == 0 {
            return Err(SplineError::InvalidKnots("trimming curve must have degree at least one".into()));
        }
        let line = Curve::new(KnotVector::new(vec![-1.0, -1.0, 1.0, 1.0], 1)?, vec![a, b])?;
        let mut top = line.elevate_degree_by(p - 1)?;
        let knots = bottom.knot_vector().knots();
        for &k in &knots[p + 1..knots.len() - p - 1] {
            top = top.insert_knot(k)?;
        }
        debug_assert_eq!(top.knot_vector(), bottom.knot_vector());
        Ok(Self { bottom, top })
    }

    pub fn bottom(&self) -> &Curve<2> {
        &self.bottom
    }

    pub fn top(&self) -> &Curve<2> {
        &self.top
    }

    /// Control grid `C_{i,j}`: row `j = 0` from the bottom edge, `j = 1`
    /// from the top edge.
    pub fn control_grid(&self) -> [&[Point<2>]; 2] {
        [self.bottom.points(), self.top.points()]
    }

    pub fn map(&self, xi1: f64, xi2: f64) -> Result<Point<2>> {
        let (b, t) = (self.bottom.eval(xi1)?, self.top.eval(xi1)?);
        let (wb, wt) = (0.5 * (1.0 - xi2), 0.5 * (1.0 + xi2));
        Ok([wb * b[0] + wt * t[0], wb * b[1] + wt * t[1]])
    }

    /// Jacobian determinant `det ∂x/∂ξ`.
    pub fn jacobian_det(&self, xi1: f64, xi2: f64) -> Result<f64> {
        let (b, t) = (self.bottom.eval(xi1)?, self.top.eval(xi1)?);
        let (db, dt) = (self.bottom.derivative(xi1, 1)?, self.top.derivative(xi1, 1)?);
        let (wb, wt) = (0.5 * (1.0 - xi2), 0.5 * (1.0 + xi2));
        let d1 = [wb * db[0] + wt * dt[0], wb * db[1] + wt * dt[1]];
        let d2 = [0.5 * (t[0] - b[0]), 0.5 * (t[1] - b[1])];
        Ok(d1[0] * d2[1] - d1[1] * d2[0])
    }

    /// Quadrature points and weights (including `|det J|`) with `n` Gauss
    /// points per direction on every knot span of the bottom edge.
    pub fn quadrature(&self, n: usize) -> Result<Vec<(Point<2>, f64)>> {
        let eta = gauss_legendre_on(n, -1.0, 1.0);
        let mut out = Vec::new();
        for span in self.bottom.knot_vector().spans() {
            for (xi1, w1) in gauss_legendre_on(n, span.lower, span.upper) {
                for &(xi2, w2) in &eta {
                    out.push((self.map(xi1, xi2)?, w1 * w2 * self.jacobian_det(xi1, xi2)?.abs()));
                }
            }
        }
        Ok(out)
    }
}

/// Coons patches covering the valid part of a cut element: one for a
/// triangle or quadrilateral, three triangles for a pentagon.
///
/// A pentagon with valid corners `c1, c2, c3` (counter-clockwise from the
/// exit point) is split at `c2`, the corner farthest from the cut, into the
/// curved triangle `(entry → exit, c2)` and the straight triangles
/// `(exit → c1, c2)` and `(c3 → entry, c2)`.
pub fn build_coons(curve: &TrimmingCurve, elem: &Element) -> Result<Vec<CoonsElement>> {
    let ElementType::Cut { entry, exit, corners } = &elem.kind else {
        return Err(SplineError::NotTrimmedElement(elem.kind.tag()));
    };
    let bottom = curve.curve().subcurve(entry.param, exit.param)?;
    match corners.len() {
        1 => Ok(vec![CoonsElement::new(&bottom, corners[0], corners[0])?]),
        2 => Ok(vec![CoonsElement::new(&bottom, corners[1], corners[0])?]),
        3 => {
            let (c1, c2, c3) = (corners[0], corners[1], corners[2]);
            let line = |a: Point<2>, b: Point<2>| -> Result<Curve<2>> {
                Curve::new(KnotVector::new(vec![0.0, 0.0, 1.0, 1.0], 1)?, vec![a, b])
            };
            Ok(vec![
                CoonsElement::new(&bottom, c2, c2)?,
                CoonsElement::new(&line(exit.point, c1)?, c2, c2)?,
                CoonsElement::new(&line(c3, entry.point)?, c2, c2)?,
            ])
        }
        _ => Err(SplineError::NotTrimmedElement(elem.kind.tag())),
    }
}

/// Quadrature points and weights over the valid part of any element: a
/// tensor Gauss rule on regular spans, Coons patches on cut spans, nothing
/// outside.
pub fn element_quadrature(curve: &TrimmingCurve, elem: &Element, n: usize) -> Result<Vec<(Point<2>, f64)>> {
    match &elem.kind {
        ElementType::Outside => Ok(Vec::new()),
        ElementType::Regular => {
            let gu = gauss_legendre_on(n, elem.span_u.lower, elem.span_u.upper);
            let gv = gauss_legendre_on(n, elem.span_v.lower, elem.span_v.upper);
            Ok(gv.iter().flat_map(|&(v, wv)| gu.iter().map(move |&(u, wu)| ([u, v], wu * wv))).collect())
        }
        ElementType::Cut { .. } => {
            let mut out = Vec::new();
            for c in build_coons(curve, elem)? {
                out.extend(c.quadrature(n)?);
            }
            Ok(out)
        }
    }
}
