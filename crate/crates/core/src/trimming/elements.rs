//! Classification of knot spans of a trimmed patch into element types.

use std::fmt::Write as _;

use super::curve::{intersect_with_grid, point_in_valid, GridCrossing, Location, TrimRegion, TrimmingCurve};
use crate::error::{Result, SplineError};
use crate::spline::{BasisSpan, KnotVector, Point};

/// A crossing of the trimming curve with the boundary of one element, with
/// its position along the element boundary: `0..1` bottom, `1..2` right,
/// `2..3` top, `3..4` left (counter-clockwise from the lower-left corner).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint {
    pub param: f64,
    pub point: Point<2>,
    pub perimeter: f64,
}

/// Element type of a knot span.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementType {
    /// Entirely outside the valid region (tag −1).
    Outside,
    /// Entirely inside (tag 1).
    Regular,
    /// Cut once by the trimming curve; `corners` are the valid corners of
    /// the span in counter-clockwise order starting after `exit`.
    Cut { entry: CutPoint, exit: CutPoint, corners: Vec<Point<2>> },
}

impl ElementType {
    /// −1, 1, or 2 + number of valid corners (3 triangle, 4 quadrilateral,
    /// 5 pentagon).
    pub fn tag(&self) -> i32 {
        match self {
            ElementType::Outside => -1,
            ElementType::Regular => 1,
            ElementType::Cut { corners, .. } => 2 + corners.len() as i32,
        }
    }
}

/// One knot span of the patch with its element type.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub span_u: BasisSpan,
    pub span_v: BasisSpan,
    pub kind: ElementType,
}

impl Element {
    pub fn corners(&self) -> [Point<2>; 4] {
        let (u0, u1, v0, v1) = (self.span_u.lower, self.span_u.upper, self.span_v.lower, self.span_v.upper);
        [[u0, v0], [u1, v0], [u1, v1], [u0, v1]]
    }

    pub fn midpoint(&self) -> Point<2> {
        [self.span_u.midpoint(), self.span_v.midpoint()]
    }

    pub fn area(&self) -> f64 {
        self.span_u.length() * self.span_v.length()
    }
}

/// Element types of all non-empty knot spans, `u` index running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementGrid {
    nu: usize,
    nv: usize,
    elements: Vec<Element>,
}

impl ElementGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.nu, self.nv)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Element in the `a`-th non-empty `u` span and `b`-th non-empty `v` span.
    pub fn get(&self, a: usize, b: usize) -> &Element {
        &self.elements[b * self.nu + a]
    }

    pub fn tags(&self) -> Vec<i32> {
        self.elements.iter().map(|e| e.kind.tag()).collect()
    }

    /// Tags as a text matrix: one line per `v` span from top (largest `v`)
    /// to bottom, entries separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in (0..self.nv).rev() {
            let row: Vec<String> = (0..self.nu).map(|a| format!("{:>2}", self.get(a, b).kind.tag())).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Position of `x` along the boundary of the rectangle, or `None` if `x` is
/// not on it.
fn perimeter_coordinate(el: &Element, x: Point<2>) -> Option<f64> {
    let (u0, u1, v0, v1) = (el.span_u.lower, el.span_u.upper, el.span_v.lower, el.span_v.upper);
    let tol = 1e-10 * (u1 - u0).max(v1 - v0);
    let (du, dv) = (u1 - u0, v1 - v0);
    if (x[1] - v0).abs() <= tol && x[0] < u1 - tol {
        Some(((x[0] - u0) / du).clamp(0.0, 1.0))
    } else if (x[0] - u1).abs() <= tol && x[1] < v1 - tol {
        Some(1.0 + ((x[1] - v0) / dv).clamp(0.0, 1.0))
    } else if (x[1] - v1).abs() <= tol && x[0] > u0 + tol {
        Some(2.0 + ((u1 - x[0]) / du).clamp(0.0, 1.0))
    } else if (x[0] - u0).abs() <= tol {
        Some(3.0 + ((v1 - x[1]) / dv).clamp(0.0, 1.0))
    } else {
        None
    }
}

fn cut_point(el: &Element, c: &GridCrossing, reason: &str) -> Result<CutPoint> {
    let perimeter = perimeter_coordinate(el, c.point).ok_or_else(|| SplineError::InvalidCuttingPattern {
        span_u: el.span_u.index,
        span_v: el.span_v.index,
        reason: reason.to_string(),
    })?;
    Ok(CutPoint { param: c.param, point: c.point, perimeter })
}

/// Element types for a curve-trimmed patch.
///
/// Uncut spans are tagged by testing their midpoint; a cut span must be
/// crossed exactly once, entering and leaving through different edges. Its
/// valid corners are those met when walking counter-clockwise along the span
/// boundary from the exit point back to the entry point.
pub fn classify_spans(curve: &TrimmingCurve, kv_u: &KnotVector, kv_v: &KnotVector) -> Result<ElementGrid> {
    let spans_u: Vec<BasisSpan> = kv_u.spans().collect();
    let spans_v: Vec<BasisSpan> = kv_v.spans().collect();
    let (nu, nv) = (spans_u.len(), spans_v.len());
    let mut elements: Vec<Element> = spans_v
        .iter()
        .flat_map(|sv| spans_u.iter().map(move |su| Element { span_u: *su, span_v: *sv, kind: ElementType::Regular }))
        .collect();
    let locate = |spans: &[BasisSpan], x: f64| -> usize {
        spans.iter().position(|s| x <= s.upper).unwrap_or(spans.len() - 1)
    };

    let crossings = intersect_with_grid(curve, kv_u, kv_v)?;
    let (a, b) = curve.domain();
    let mut cut = vec![false; nu * nv];
    // the curve must start and end on the patch boundary
    for &s in &[a, b] {
        if !crossings.iter().any(|c| (c.param - s).abs() < 1e-10) {
            let x = curve.eval(s);
            let (ia, ib) = (locate(&spans_u, x[0]), locate(&spans_v, x[1]));
            return Err(SplineError::InvalidCuttingPattern {
                span_u: spans_u[ia].index,
                span_v: spans_v[ib].index,
                reason: "trimming curve ends inside the span".into(),
            });
        }
    }
    for w in crossings.windows(2) {
        let (entry, exit) = (&w[0], &w[1]);
        let mid = curve.eval(0.5 * (entry.param + exit.param));
        let (ia, ib) = (locate(&spans_u, mid[0]), locate(&spans_v, mid[1]));
        let k = ib * nu + ia;
        let el = &elements[k];
        let fail = |reason: &str| SplineError::InvalidCuttingPattern {
            span_u: el.span_u.index,
            span_v: el.span_v.index,
            reason: reason.to_string(),
        };
        if cut[k] {
            return Err(fail("more than two intersections"));
        }
        let entry = cut_point(el, entry, "entry point off the span boundary")?;
        let exit = cut_point(el, exit, "exit point off the span boundary")?;
        let edge = |p: f64| (p.floor() as i32).min(3);
        let on_corner = |p: f64| (p - p.round()).abs() < 1e-12;
        if edge(entry.perimeter) == edge(exit.perimeter) && !on_corner(entry.perimeter) && !on_corner(exit.perimeter) {
            return Err(fail("entry and exit on the same edge"));
        }
        // corners strictly between exit and entry, counter-clockwise
        let span = (entry.perimeter - exit.perimeter).rem_euclid(4.0);
        let mut corners = Vec::new();
        let all = el.corners();
        for step in 1..=4 {
            let c = (exit.perimeter.floor() + step as f64).rem_euclid(4.0);
            let along = (c - exit.perimeter).rem_euclid(4.0);
            if along > 1e-12 && along < span - 1e-12 {
                corners.push(all[c as usize]);
            }
        }
        if corners.is_empty() || corners.len() > 3 {
            return Err(fail("no valid cutting pattern"));
        }
        cut[k] = true;
        elements[k].kind = ElementType::Cut { entry, exit, corners };
    }
    let region = TrimRegion::Curve(curve.clone());
    for (k, el) in elements.iter_mut().enumerate() {
        if !cut[k] {
            el.kind = match point_in_valid(&region, el.midpoint()) {
                Location::Outside => ElementType::Outside,
                _ => ElementType::Regular,
            };
        }
    }
    Ok(ElementGrid { nu, nv, elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spline::Curve;

    const SQUARE: ((f64, f64), (f64, f64)) = ((0.0, 1.0), (0.0, 1.0));

    fn grid() -> KnotVector {
        KnotVector::open_uniform(2, 0.0, 1.0, 4).unwrap()
    }

    #[test]
    fn axis_aligned_trim_gives_quadrilaterals() {
        // upward line u = 0.6: valid region u < 0.6
        let line = TrimmingCurve::line([0.6, 0.0], [0.6, 1.0], SQUARE).unwrap();
        let g = classify_spans(&line, &grid(), &grid()).unwrap();
        let text = g.to_text();
        for row in text.lines() {
            assert_eq!(row, " 1  1  4 -1");
        }
    }

    #[test]
    fn corner_cutting_line_gives_triangle_or_pentagon() {
        // line through the lower-left span from its bottom edge to its left edge
        let cut = |a: Point<2>, b: Point<2>| {
            let kv = KnotVector::new(vec![0., 0., 1., 1.], 1).unwrap();
            // extend to the patch boundary; the curve only needs to start and end there
            let c = Curve::new(kv, vec![a, b]).unwrap();
            classify_spans(&TrimmingCurve::new(c, SQUARE).unwrap(), &grid(), &grid()).unwrap()
        };
        // valid region left of (0.2, 0) -> (0, 0.2): the corner triangle
        let g = cut([0.2, 0.0], [0.0, 0.2]);
        assert_eq!(g.get(0, 0).kind.tag(), 3);
        assert_eq!(g.get(1, 1).kind.tag(), -1);
        // reversed orientation: the span minus the triangle
        let g = cut([0.0, 0.2], [0.2, 0.0]);
        assert_eq!(g.get(0, 0).kind.tag(), 5);
        assert_eq!(g.get(1, 1).kind.tag(), 1);
    }

    #[test]
    fn mixed_configuration() {
        // polyline from the bottom edge up and across to the right edge
        let kv = KnotVector::new(vec![0., 0., 1., 2., 2.], 1).unwrap();
        let c = Curve::new(kv, vec![[0.6, 0.0], [0.4, 0.6], [1.0, 0.9]]).unwrap();
        let g = classify_spans(&TrimmingCurve::new(c, SQUARE).unwrap(), &grid(), &grid()).unwrap();
        let text = g.to_text();
        // legs u = 0.6 - v/3 and v = 0.6 + (u - 0.4)/2, classified by hand
        let expected = " 1  1  5  4\n 1  5  3 -1\n 1  5  3 -1\n 1  1  4 -1\n";
        assert_eq!(text, expected, "\n{text}");
    }

    #[test]
    fn same_edge_double_crossing_fails() {
        // a bump entering and leaving the lower-left span through its bottom edge
        let kv = KnotVector::new(vec![0., 0., 1., 2., 2.], 1).unwrap();
        let c = Curve::new(kv, vec![[0.1, 0.0], [0.15, 0.2], [0.2, 0.0]]).unwrap();
        let r = classify_spans(&TrimmingCurve::new(c, SQUARE).unwrap(), &grid(), &grid());
        assert!(
            matches!(&r, Err(SplineError::InvalidCuttingPattern { span_u: 2, span_v: 2, reason }) if reason.contains("same edge")),
            "{r:?}"
        );
    }

    #[test]
    fn second_visit_to_a_span_fails() {
        // loops through the three neighbours of the lower-left span and re-enters it
        let kv = KnotVector::new(vec![0., 0., 1., 2., 3., 4., 5., 5.], 1).unwrap();
        let pts = vec![[0.2, 0.0], [0.3, 0.1], [0.3, 0.3], [0.2, 0.3], [0.2, 0.2], [0.0, 0.2]];
        let c = Curve::new(kv, pts).unwrap();
        let r = classify_spans(&TrimmingCurve::new(c, SQUARE).unwrap(), &grid(), &grid());
        assert!(
            matches!(&r, Err(SplineError::InvalidCuttingPattern { reason, .. }) if reason.contains("more than two")),
            "{r:?}"
        );
    }

    #[test]
    fn curve_ending_inside_fails() {
        let r = classify_spans(&TrimmingCurve::line([0.0, 0.4], [0.6, 0.4], SQUARE).unwrap(), &grid(), &grid());
        assert!(matches!(&r, Err(SplineError::InvalidCuttingPattern { reason, .. }) if reason.contains("ends inside")), "{r:?}");
    }

    #[test]
    fn translating_the_trim_keeps_uncut_tags() {
        let a = classify_spans(&TrimmingCurve::line([0.55, 0.0], [0.55, 1.0], SQUARE).unwrap(), &grid(), &grid()).unwrap();
        let b = classify_spans(&TrimmingCurve::line([0.7, 0.0], [0.7, 1.0], SQUARE).unwrap(), &grid(), &grid()).unwrap();
        assert_eq!(a.tags(), b.tags());
    }
}
