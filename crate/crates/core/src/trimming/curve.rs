//! Trimming curves in the parameter plane and their intersections with the
//! knot grid.

use crate::error::{Result, SplineError};
use crate::extension::ValidDomain1D;
use crate::spline::basis::Side;
use crate::spline::{Curve, Direction, KnotVector, Point};

/// Samples per curve knot span used to bracket roots and closest points.
const SAMPLES_PER_SPAN: usize = 32;
/// Parameter tolerance for located crossings.
const PARAM_TOL: f64 = 1e-12;
/// Distance below which a point counts as lying on the curve.
const BOUNDARY_TOL: f64 = 1e-12;

/// A curve in the `(u, v)` parameter plane; the valid region lies to its
/// left.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimmingCurve {
    curve: Curve<2>,
}

/// The knot line `u = value` ([`Direction::U`]) or `v = value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLine {
    pub dir: Direction,
    pub value: f64,
}

impl std::fmt::Display for GridLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.dir {
            Direction::U => "u",
            Direction::V => "v",
        };
        write!(f, "{name} = {}", self.value)
    }
}

/// A point where the curve meets one knot line, or two at a grid corner.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCrossing {
    pub param: f64,
    pub point: Point<2>,
    pub lines: Vec<GridLine>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    Boundary,
}

/// Valid region of a patch: a rectangle of two intervals or the left side
/// of a trimming curve.
#[derive(Debug, Clone, PartialEq)]
pub enum TrimRegion {
    Tensor { u: ValidDomain1D, v: ValidDomain1D },
    Curve(TrimmingCurve),
}

impl TrimmingCurve {
    /// The control polygon must lie in the closed parameter rectangle
    /// `rect = ((u0, u1), (v0, v1))`, which confines the curve to it.
    pub fn new(curve: Curve<2>, rect: ((f64, f64), (f64, f64))) -> Result<Self> {
        let ((u0, u1), (v0, v1)) = rect;
        let tol = 1e-12 * (1.0 + (u1 - u0).abs().max((v1 - v0).abs()));
        for p in curve.points() {
            if p[0] < u0 - tol || p[0] > u1 + tol || p[1] < v0 - tol || p[1] > v1 + tol {
                return Err(SplineError::OutsideValidDomain { u: p[0], v: p[1] });
            }
        }
        Ok(Self { curve })
    }

    /// Straight segment from `a` to `b` as a degree-one curve on `[0, 1]`.
    pub fn line(a: Point<2>, b: Point<2>, rect: ((f64, f64), (f64, f64))) -> Result<Self> {
        let kv = KnotVector::new(vec![0.0, 0.0, 1.0, 1.0], 1)?;
        Self::new(Curve::new(kv, vec![a, b])?, rect)
    }

    pub fn curve(&self) -> &Curve<2> {
        &self.curve
    }

    pub fn domain(&self) -> (f64, f64) {
        self.curve.domain()
    }

    pub fn eval(&self, s: f64) -> Point<2> {
        self.curve.eval(s).expect("parameter inside the curve domain")
    }

    fn tangent(&self, s: f64, side: Side) -> Point<2> {
        self.curve.derivative_sided(s, 1, side).expect("parameter inside the curve domain")
    }

    /// Sample parameters: `SAMPLES_PER_SPAN` per non-empty curve span.
    fn samples(&self) -> Vec<f64> {
        let kv = self.curve.knot_vector();
        let mut out = Vec::new();
        for span in kv.spans() {
            for q in 0..SAMPLES_PER_SPAN {
                out.push(span.lower + span.length() * q as f64 / SAMPLES_PER_SPAN as f64);
            }
        }
        out.push(self.domain().1);
        out
    }

    /// Closest curve parameter to `x`.
    pub fn closest_param(&self, x: Point<2>) -> f64 {
        let (a, b) = self.domain();
        let dist2 = |s: f64| {
            let c = self.eval(s);
            (c[0] - x[0]).powi(2) + (c[1] - x[1]).powi(2)
        };
        let samples = self.samples();
        let (k, _) = samples
            .iter()
            .enumerate()
            .map(|(k, &s)| (k, dist2(s)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        // golden-section search on the neighbouring sample interval
        let lo = samples[k.saturating_sub(1)].max(a);
        let hi = samples[(k + 1).min(samples.len() - 1)].min(b);
        let (mut l, mut r) = (lo, hi);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut m1 = r - g * (r - l);
        let mut m2 = l + g * (r - l);
        let (mut f1, mut f2) = (dist2(m1), dist2(m2));
        for _ in 0..200 {
            if r - l < 1e-15 * (1.0 + r.abs()) {
                break;
            }
            if f1 < f2 {
                r = m2;
                m2 = m1;
                f2 = f1;
                m1 = r - g * (r - l);
                f1 = dist2(m1);
            } else {
                l = m1;
                m1 = m2;
                f1 = f2;
                m2 = l + g * (r - l);
                f2 = dist2(m2);
            }
        }
        let s = 0.5 * (l + r);
        [lo, s, hi].into_iter().fold(s, |best, c| if dist2(c) < dist2(best) { c } else { best })
    }

    /// Side of `x` relative to the curve; the valid region is on the left.
    pub fn locate(&self, x: Point<2>) -> Location {
        let s = self.closest_param(x);
        let c = self.eval(s);
        let d = [x[0] - c[0], x[1] - c[1]];
        if d[0].hypot(d[1]) < BOUNDARY_TOL {
            return Location::Boundary;
        }
        // at a kink, the sum of the one-sided unit tangents separates the sides
        let (a, b) = self.domain();
        let unit = |t: Point<2>| {
            let n = t[0].hypot(t[1]);
            if n > 0.0 { [t[0] / n, t[1] / n] } else { [0.0, 0.0] }
        };
        let right = if s < b { unit(self.tangent(s, Side::Right)) } else { [0.0, 0.0] };
        let left = if s > a { unit(self.tangent(s, Side::Left)) } else { [0.0, 0.0] };
        let t = [left[0] + right[0], left[1] + right[1]];
        let cross = t[0] * d[1] - t[1] * d[0];
        if cross > 0.0 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Curve parameters where coordinate `dir` equals `value`.
    fn crossings_with(&self, line: GridLine) -> Result<Vec<f64>> {
        let d = match line.dir {
            Direction::U => 0,
            Direction::V => 1,
        };
        let g = |s: f64| self.eval(s)[d] - line.value;
        let dg = |s: f64| self.tangent(s, Side::Right)[d];
        let samples = self.samples();
        let vals: Vec<f64> = samples.iter().map(|&s| g(s)).collect();
        let scale = 1.0 + line.value.abs();
        let mut roots = Vec::new();
        for k in 0..samples.len() {
            if vals[k] == 0.0 {
                roots.push(samples[k]);
            }
            if k + 1 < samples.len() && vals[k] * vals[k + 1] < 0.0 {
                roots.push(bracketed_root(&g, &dg, samples[k], samples[k + 1], vals[k]));
            }
        }
        // grazing contact: |g| has an interior local minimum near zero without a sign change
        for k in 1..samples.len() - 1 {
            let (ga, gb, gc) = (vals[k - 1], vals[k], vals[k + 1]);
            if gb == 0.0 || ga * gb <= 0.0 || gb * gc <= 0.0 {
                continue;
            }
            if gb.abs() > ga.abs() || gb.abs() > gc.abs() {
                continue;
            }
            let (s, v) = minimise_abs(&g, samples[k - 1], samples[k + 1]);
            if v.abs() < 1e-9 * scale {
                return Err(SplineError::TangentialContact { line: line.to_string(), param: s });
            }
        }
        // a root at an interior sample where the curve does not cross
        let (a, b) = self.domain();
        for &r in &roots {
            if r > a && r < b {
                let h = 1e-7 * (b - a);
                let (l, rr) = (g((r - h).max(a)), g((r + h).min(b)));
                if l * rr > 0.0 {
                    return Err(SplineError::TangentialContact { line: line.to_string(), param: r });
                }
                if l == 0.0 && rr == 0.0 {
                    return Err(SplineError::TangentialContact { line: line.to_string(), param: r });
                }
            }
        }
        Ok(roots)
    }
}

/// Safeguarded Newton iteration inside a sign-changing bracket.
fn bracketed_root(g: &impl Fn(f64) -> f64, dg: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, glo: f64) -> f64 {
    let lo_sign = glo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo < PARAM_TOL * 1e-2 {
            break;
        }
        let d = dg(x);
        let newton = if d != 0.0 { x - gx / d } else { f64::NAN };
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (x - lo).min(hi - x) < PARAM_TOL * 1e-3 && hi - lo < PARAM_TOL {
            break;
        }
    }
    x
}

/// Golden-section minimisation of `|g|` on `[a, b]`.
fn minimise_abs(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut l, mut r) = (a, b);
    for _ in 0..200 {
        let m1 = r - ratio * (r - l);
        let m2 = l + ratio * (r - l);
        if g(m1).abs() < g(m2).abs() {
            r = m2;
        } else {
            l = m1;
        }
        if r - l < 1e-14 {
            break;
        }
    }
    let s = 0.5 * (l + r);
    (s, g(s))
}

/// All points where the curve meets a knot line of the grid (domain
/// boundaries included), sorted along the curve. Crossings at one parameter
/// are merged, so a grid corner yields a single crossing with two lines.
pub fn intersect_with_grid(curve: &TrimmingCurve, kv_u: &KnotVector, kv_v: &KnotVector) -> Result<Vec<GridCrossing>> {
    let mut hits: Vec<(f64, GridLine)> = Vec::new();
    for (dir, kv) in [(Direction::U, kv_u), (Direction::V, kv_v)] {
        for value in kv.breakpoints() {
            let line = GridLine { dir, value };
            for s in curve.crossings_with(line)? {
                hits.push((s, line));
            }
        }
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<GridCrossing> = Vec::new();
    for (s, line) in hits {
        match out.last_mut() {
            Some(last) if (last.param - s).abs() < 1e-10 => {
                if !last.lines.contains(&line) {
                    last.lines.push(line);
                }
            }
            _ => {
                let mut point = curve.eval(s);
                match line.dir {
                    Direction::U => point[0] = line.value,
                    Direction::V => point[1] = line.value,
                }
                out.push(GridCrossing { param: s, point, lines: vec![line] });
            }
        }
    }
    // snap both coordinates at corners
    for c in &mut out {
        for l in &c.lines {
            match l.dir {
                Direction::U => c.point[0] = l.value,
                Direction::V => c.point[1] = l.value,
            }
        }
    }
    Ok(out)
}

/// Membership test for a valid region.
///
/// Tensor regions report [`Location::Boundary`] within `1e-12` of an
/// interval end; curve regions within `1e-12` of the curve.
pub fn point_in_valid(region: &TrimRegion, x: Point<2>) -> Location {
    match region {
        TrimRegion::Tensor { u, v } => {
            let near = |d: &ValidDomain1D, c: f64| (c - d.lower()).abs() < BOUNDARY_TOL || (c - d.upper()).abs() < BOUNDARY_TOL;
            let within = |d: &ValidDomain1D, c: f64| c > d.lower() - BOUNDARY_TOL && c < d.upper() + BOUNDARY_TOL;
            if within(u, x[0]) && within(v, x[1]) && (near(u, x[0]) || near(v, x[1])) {
                Location::Boundary
            } else if u.contains(x[0]) && v.contains(x[1]) {
                Location::Inside
            } else {
                Location::Outside
            }
        }
        TrimRegion::Curve(c) => c.locate(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: ((f64, f64), (f64, f64)) = ((0.0, 1.0), (0.0, 1.0));

    fn grid() -> KnotVector {
        KnotVector::open_uniform(2, 0.0, 1.0, 4).unwrap()
    }

    #[test]
    fn diagonal_line_crossings() {
        // x(s) = (0.1 + 0.8 s, 0.05 + 0.85 s), missing every grid corner
        let line = TrimmingCurve::line([0.1, 0.05], [0.9, 0.9], SQUARE).unwrap();
        let hits = intersect_with_grid(&line, &grid(), &grid()).unwrap();
        let mut expected: Vec<f64> = Vec::new();
        for k in [0.25, 0.5, 0.75] {
            expected.push((k - 0.1) / 0.8);
            expected.push((k - 0.05) / 0.85);
        }
        expected.sort_by(f64::total_cmp);
        assert_eq!(hits.len(), expected.len());
        for (h, e) in hits.iter().zip(&expected) {
            assert!((h.param - e).abs() < 1e-12, "{} vs {e}", h.param);
        }
        assert!(hits.windows(2).all(|w| w[0].param < w[1].param));
    }

    #[test]
    fn axis_aligned_trim_hits_only_perpendicular_lines() {
        let line = TrimmingCurve::line([0.6, 0.0], [0.6, 1.0], SQUARE).unwrap();
        let hits = intersect_with_grid(&line, &grid(), &grid()).unwrap();
        assert_eq!(hits.len(), 5);
        for h in &hits {
            assert!(h.lines.iter().all(|l| l.dir == Direction::V));
            assert!((h.point[0] - 0.6).abs() < 1e-15);
        }
    }

    #[test]
    fn curve_inside_one_span_has_no_crossings() {
        let line = TrimmingCurve::line([0.3, 0.3], [0.45, 0.4], SQUARE).unwrap();
        assert!(intersect_with_grid(&line, &grid(), &grid()).unwrap().is_empty());
    }

    #[test]
    fn corner_crossing_is_merged() {
        let line = TrimmingCurve::line([0.0, 0.0], [1.0, 1.0], SQUARE).unwrap();
        let hits = intersect_with_grid(&line, &grid(), &grid()).unwrap();
        assert_eq!(hits.len(), 5);
        assert!(hits.iter().all(|h| h.lines.len() == 2));
        assert_eq!(hits[2].point, [0.5, 0.5]);
    }

    #[test]
    fn grazing_contact_is_reported() {
        // parabola touching v = 0.5 at s = 0.5 from above
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        let c = Curve::new(kv, vec![[0.1, 0.7], [0.5, 0.3], [0.9, 0.7]]).unwrap();
        let tc = TrimmingCurve::new(c, SQUARE).unwrap();
        let r = intersect_with_grid(&tc, &grid(), &grid());
        assert!(matches!(r, Err(SplineError::TangentialContact { .. })), "{r:?}");
    }

    #[test]
    fn curve_must_stay_in_rectangle() {
        assert!(TrimmingCurve::line([0.0, 0.0], [1.2, 1.0], SQUARE).is_err());
    }

    #[test]
    fn half_plane_membership() {
        // valid region left of the upward diagonal, i.e. v > u
        let line = TrimmingCurve::line([0.0, 0.0], [1.0, 1.0], SQUARE).unwrap();
        let region = TrimRegion::Curve(line);
        for (x, want) in [([0.2, 0.7], Location::Inside), ([0.7, 0.2], Location::Outside), ([0.4, 0.4], Location::Boundary)] {
            assert_eq!(point_in_valid(&region, x), want);
        }
        // a bent polyline: valid region above both legs
        let kv = KnotVector::new(vec![0., 0., 0.5, 1., 1.], 1).unwrap();
        let c = Curve::new(kv, vec![[0.0, 0.6], [0.5, 0.2], [1.0, 0.6]]).unwrap();
        let region = TrimRegion::Curve(TrimmingCurve::new(c, SQUARE).unwrap());
        assert_eq!(point_in_valid(&region, [0.5, 0.19]), Location::Outside);
        assert_eq!(point_in_valid(&region, [0.5, 0.21]), Location::Inside);
        assert_eq!(point_in_valid(&region, [0.5, 0.0]), Location::Outside);
    }

    #[test]
    fn tensor_membership() {
        let region = TrimRegion::Tensor {
            u: ValidDomain1D::trimmed_below(0.3, 1.0).unwrap(),
            v: ValidDomain1D::closed(0.0, 1.0).unwrap(),
        };
        assert_eq!(point_in_valid(&region, [0.3 + 1e-9, 0.5]), Location::Inside);
        assert_eq!(point_in_valid(&region, [0.3 - 1e-9, 0.5]), Location::Outside);
        assert_eq!(point_in_valid(&region, [0.3, 0.5]), Location::Boundary);
    }
}
