//! Control nets: B-spline curves and tensor-product surfaces with
//! geometry-preserving refinement.

use super::basis::{locate, span_polynomial_derivatives, Side};
use super::knots::KnotVector;
use crate::error::{Result, SplineError};

pub type Point<const D: usize> = [f64; D];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    U,
    V,
}

fn axpy<const D: usize>(a: f64, x: &Point<D>, y: &mut Point<D>) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn lerp<const D: usize>(alpha: f64, a: &Point<D>, b: &Point<D>) -> Point<D> {
    // (1 - alpha) a + alpha b
    let mut out = [0.0; D];
    for d in 0..D {
        out[d] = (1.0 - alpha) * a[d] + alpha * b[d];
    }
    out
}

/// B-spline curve `x(u) = sum_i B_{i,p}(u) P_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<const D: usize> {
    kv: KnotVector,
    points: Vec<Point<D>>,
}

impl<const D: usize> Curve<D> {
    pub fn new(kv: KnotVector, points: Vec<Point<D>>) -> Result<Self> {
        if points.len() != kv.basis_count() {
            return Err(SplineError::ControlNetMismatch { expected: kv.basis_count(), found: points.len() });
        }
        Ok(Self { kv, points })
    }

    pub fn knot_vector(&self) -> &KnotVector {
        &self.kv
    }

    pub fn degree(&self) -> usize {
        self.kv.degree()
    }

    pub fn points(&self) -> &[Point<D>] {
        &self.points
    }

    pub fn domain(&self) -> (f64, f64) {
        self.kv.domain()
    }

    pub fn eval(&self, u: f64) -> Result<Point<D>> {
        self.derivative(u, 0)
    }

    /// Tangent `dx/du`.
    pub fn jacobian(&self, u: f64) -> Result<Point<D>> {
        self.derivative(u, 1)
    }

    pub fn derivative(&self, u: f64, k: usize) -> Result<Point<D>> {
        self.derivative_sided(u, k, Side::Right)
    }

    pub fn derivative_sided(&self, u: f64, k: usize, side: Side) -> Result<Point<D>> {
        let span = locate(&self.kv, u, side)?;
        let ders = span_polynomial_derivatives(&self.kv, span, u, k);
        let first = span - self.kv.degree();
        let mut out = [0.0; D];
        for (j, w) in ders[k].iter().enumerate() {
            axpy(*w, &self.points[first + j], &mut out);
        }
        Ok(out)
    }

    /// Inserts `u_new` once (Boehm). The domain must contain `u_new` in its
    /// interior and the resulting multiplicity may not exceed `p`.
    pub fn insert_knot(&self, u_new: f64) -> Result<Self> {
        let (kv, points) = insert_knot_coeffs(&self.kv, &self.points, u_new)?;
        Ok(Self { kv, points })
    }

    /// Raises the degree by one without changing the geometry.
    pub fn elevate_degree(&self) -> Result<Self> {
        let (kv, points) = elevate_degree_coeffs(&self.kv, &self.points, 1)?;
        Ok(Self { kv, points })
    }

    /// Raises the degree by `times` in a single pass.
    pub fn elevate_degree_by(&self, times: usize) -> Result<Self> {
        if times == 0 {
            return Ok(self.clone());
        }
        let (kv, points) = elevate_degree_coeffs(&self.kv, &self.points, times)?;
        Ok(Self { kv, points })
    }

    /// The piece of the curve over `[a, b]` as a clamped curve on that
    /// interval, obtained by raising the multiplicity of `a` and `b` to `p`.
    pub fn subcurve(&self, a: f64, b: f64) -> Result<Self> {
        let (lo, hi) = self.domain();
        if !(lo <= a && a < b && b <= hi) {
            return Err(SplineError::ParameterOutOfRange { u: if a < lo { a } else { b }, lower: lo, upper: hi });
        }
        if (a == lo || b == hi) && !self.kv.is_clamped() {
            return Err(SplineError::NotClamped);
        }
        let p = self.degree();
        let mut curve = self.clone();
        for &x in &[a, b] {
            if x > lo && x < hi {
                while curve.kv.multiplicity(x) < p {
                    curve = curve.insert_knot(x)?;
                }
            }
        }
        // functions sa-p ..= sb are the ones alive on [a, b]; with a and b of
        // multiplicity >= p their knots inside [a, b] already form a clamped
        // sequence once the outermost knot on each side is replaced
        let sa = curve.kv.find_span(a)?;
        let sb = curve.kv.find_span_left(b)?;
        let knots = curve.kv.knots();
        let mut sub = Vec::with_capacity(sb - sa + 2 * p + 2);
        sub.push(a);
        sub.extend_from_slice(&knots[sa + 1 - p..=sb + p]);
        sub.push(b);
        let kv = KnotVector::new(sub, p)?;
        Self::new(kv, curve.points[sa - p..=sb].to_vec())
    }

    /// Affine reparameterisation of the domain onto `[a, b]`.
    pub fn reparameterized(&self, a: f64, b: f64) -> Result<Self> {
        let (lo, hi) = self.domain();
        let scale = (b - a) / (hi - lo);
        let knots = self
            .kv
            .knots()
            .iter()
            .map(|&k| if k == lo { a } else if k == hi { b } else { a + (k - lo) * scale })
            .collect();
        Self::new(KnotVector::new(knots, self.degree())?, self.points.clone())
    }
}

/// Boehm single-knot insertion on a coefficient sequence.
pub(crate) fn insert_knot_coeffs<const D: usize>(
    kv: &KnotVector,
    points: &[Point<D>],
    u: f64,
) -> Result<(KnotVector, Vec<Point<D>>)> {
    let (a, b) = kv.domain();
    if !(u > a && u < b) {
        return Err(SplineError::ParameterOutOfRange { u, lower: a, upper: b });
    }
    let p = kv.degree();
    let mult = kv.multiplicity(u);
    if mult >= p {
        return Err(SplineError::MultiplicityOverflow { u, multiplicity: mult, degree: p });
    }
    let knots = kv.knots();
    let k = kv.find_span(u)?;
    let mut out = Vec::with_capacity(points.len() + 1);
    out.extend_from_slice(&points[..=k - p]);
    for i in (k - p + 1)..=(k - mult) {
        let alpha = (u - knots[i]) / (knots[i + p] - knots[i]);
        out.push(lerp(alpha, &points[i - 1], &points[i]));
    }
    out.extend_from_slice(&points[k - mult..]);
    Ok((kv.with_knot(u), out))
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Degree elevation by `t` via Bézier decomposition: each segment is
/// extracted by knot insertion, elevated, and the superfluous knots are
/// removed again so every distinct knot gains multiplicity `t`.
pub(crate) fn elevate_degree_coeffs<const D: usize>(
    kv: &KnotVector,
    pw: &[Point<D>],
    t: usize,
) -> Result<(KnotVector, Vec<Point<D>>)> {
    if !kv.is_clamped() {
        return Err(SplineError::NotClamped);
    }
    let p = kv.degree();
    let u = kv.knots();
    let n = pw.len() - 1;
    let m = n + p + 1;
    let ph = p + t;
    let ph2 = ph / 2;
    let zero = [0.0; D];

    let mut bezalfs = vec![vec![0.0; p + 1]; ph + 1];
    bezalfs[0][0] = 1.0;
    bezalfs[ph][p] = 1.0;
    for i in 1..=ph2 {
        let inv = 1.0 / binomial(ph, i);
        for j in i.saturating_sub(t)..=p.min(i) {
            bezalfs[i][j] = inv * binomial(p, j) * binomial(t, i - j);
        }
    }
    for i in ph2 + 1..ph {
        for j in i.saturating_sub(t)..=p.min(i) {
            bezalfs[i][j] = bezalfs[ph - i][p - j];
        }
    }

    let distinct = kv.breakpoints().len();
    let cap = (n + 1) + (distinct + 1) * t + 1;
    let mut qw: Vec<Point<D>> = vec![zero; cap];
    let mut uh: Vec<f64> = vec![0.0; cap + ph + 1];
    let mut bpts = vec![zero; p + 1];
    let mut ebpts = vec![zero; ph + 1];
    let mut next_bpts = vec![zero; p.saturating_sub(1).max(1)];
    let mut alfs = vec![0.0; p.saturating_sub(1).max(1)];

    let mut mh = ph;
    let mut kind = ph + 1;
    let mut r: isize = -1;
    let mut a = p;
    let mut b = p + 1;
    let mut cind = 1;
    let mut ua = u[0];
    qw[0] = pw[0];
    for x in uh.iter_mut().take(ph + 1) {
        *x = ua;
    }
    bpts[..=p].copy_from_slice(&pw[..=p]);

    while b < m {
        let i0 = b;
        while b < m && u[b] == u[b + 1] {
            b += 1;
        }
        let mul = b - i0 + 1;
        mh += mul + t;
        let ub = u[b];
        let oldr = r;
        r = p as isize - mul as isize;
        let lbz = if oldr > 0 { ((oldr + 2) / 2) as usize } else { 1 };
        let rbz = if r > 0 { ph - ((r + 1) / 2) as usize } else { ph };

        if r > 0 {
            // insert ub r times into the current Bézier segment
            let numer = ub - ua;
            for k in (mul + 1..=p).rev() {
                alfs[k - mul - 1] = numer / (u[a + k] - ua);
            }
            for j in 1..=r as usize {
                let save = r as usize - j;
                let s = mul + j;
                for k in (s..=p).rev() {
                    let alpha = alfs[k - s];
                    bpts[k] = lerp(1.0 - alpha, &bpts[k], &bpts[k - 1]);
                }
                next_bpts[save] = bpts[p];
            }
        }

        for i in lbz..=ph {
            let mut acc = zero;
            for j in i.saturating_sub(t)..=p.min(i) {
                axpy(bezalfs[i][j], &bpts[j], &mut acc);
            }
            ebpts[i] = acc;
        }

        if oldr > 1 {
            // remove the knot ua (oldr - 1) times
            let mut first = kind as isize - 2;
            let mut last = kind as isize;
            let den = ub - ua;
            let bet = (ub - uh[kind - 1]) / den;
            for tr in 1..oldr {
                let mut i = first;
                let mut j = last;
                let mut kj = j - kind as isize + 1;
                while j - i > tr {
                    if i < cind as isize {
                        let iu = i as usize;
                        let alf = (ub - uh[iu]) / (ua - uh[iu]);
                        qw[iu] = lerp(1.0 - alf, &qw[iu], &qw[iu - 1]);
                    }
                    if j >= lbz as isize {
                        let k = kj as usize;
                        if j - tr <= kind as isize - ph as isize + oldr {
                            let gam = (ub - uh[(j - tr) as usize]) / den;
                            ebpts[k] = lerp(1.0 - gam, &ebpts[k], &ebpts[k + 1]);
                        } else {
                            ebpts[k] = lerp(1.0 - bet, &ebpts[k], &ebpts[k + 1]);
                        }
                    }
                    i += 1;
                    j -= 1;
                    kj -= 1;
                }
                first -= 1;
                last += 1;
            }
        }

        if a != p {
            for _ in 0..(ph as isize - oldr) {
                uh[kind] = ua;
                kind += 1;
            }
        }
        for j in lbz..=rbz {
            qw[cind] = ebpts[j];
            cind += 1;
        }

        if b < m {
            let rr = r.max(0) as usize;
            bpts[..rr].copy_from_slice(&next_bpts[..rr]);
            for j in rr..=p {
                bpts[j] = pw[b - p + j];
            }
            a = b;
            b += 1;
            ua = ub;
        } else {
            for i in 0..=ph {
                uh[kind + i] = ub;
            }
        }
    }

    let nh = mh - ph - 1;
    uh.truncate(nh + ph + 2);
    qw.truncate(nh + 1);
    Ok((KnotVector::new(uh, ph)?, qw))
}

/// Tensor-product B-spline surface. Control points are stored row-major with
/// the `u` index outermost: `points[i * n_v + j] = P_{i,j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface<const D: usize> {
    kv_u: KnotVector,
    kv_v: KnotVector,
    points: Vec<Point<D>>,
}

impl<const D: usize> Surface<D> {
    pub fn new(kv_u: KnotVector, kv_v: KnotVector, points: Vec<Point<D>>) -> Result<Self> {
        let expected = kv_u.basis_count() * kv_v.basis_count();
        if points.len() != expected {
            return Err(SplineError::ControlNetMismatch { expected, found: points.len() });
        }
        Ok(Self { kv_u, kv_v, points })
    }

    pub fn knot_vector(&self, dir: Direction) -> &KnotVector {
        match dir {
            Direction::U => &self.kv_u,
            Direction::V => &self.kv_v,
        }
    }

    pub fn points(&self) -> &[Point<D>] {
        &self.points
    }

    pub fn point(&self, i: usize, j: usize) -> &Point<D> {
        &self.points[i * self.kv_v.basis_count() + j]
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<Point<D>> {
        self.derivative(u, v, 0, 0)
    }

    /// Partial derivatives `(dx/du, dx/dv)`.
    pub fn jacobian(&self, u: f64, v: f64) -> Result<(Point<D>, Point<D>)> {
        Ok((self.derivative(u, v, 1, 0)?, self.derivative(u, v, 0, 1)?))
    }

    /// Mixed partial derivative of orders `k` in `u` and `l` in `v`.
    pub fn derivative(&self, u: f64, v: f64, k: usize, l: usize) -> Result<Point<D>> {
        let su = self.kv_u.find_span(u)?;
        let sv = self.kv_v.find_span(v)?;
        let du = span_polynomial_derivatives(&self.kv_u, su, u, k);
        let dv = span_polynomial_derivatives(&self.kv_v, sv, v, l);
        let (fu, fv) = (su - self.kv_u.degree(), sv - self.kv_v.degree());
        let mut out = [0.0; D];
        for (a, wu) in du[k].iter().enumerate() {
            for (b, wv) in dv[l].iter().enumerate() {
                axpy(wu * wv, self.point(fu + a, fv + b), &mut out);
            }
        }
        Ok(out)
    }

    pub fn insert_knot(&self, dir: Direction, u_new: f64) -> Result<Self> {
        self.map_lines(dir, |kv, line| insert_knot_coeffs(kv, line, u_new))
    }

    pub fn elevate_degree(&self, dir: Direction) -> Result<Self> {
        self.map_lines(dir, |kv, line| elevate_degree_coeffs(kv, line, 1))
    }

    /// Applies a curve refinement to every row (`U`) or column (`V`) of the net.
    fn map_lines<F>(&self, dir: Direction, refine: F) -> Result<Self>
    where
        F: Fn(&KnotVector, &[Point<D>]) -> Result<(KnotVector, Vec<Point<D>>)>,
    {
        let (nu, nv) = (self.kv_u.basis_count(), self.kv_v.basis_count());
        match dir {
            Direction::U => {
                let mut new_kv = None;
                let mut columns = Vec::with_capacity(nv);
                for j in 0..nv {
                    let line: Vec<_> = (0..nu).map(|i| *self.point(i, j)).collect();
                    let (kv, pts) = refine(&self.kv_u, &line)?;
                    new_kv = Some(kv);
                    columns.push(pts);
                }
                let kv_u = new_kv.expect("at least one control column");
                let nu2 = kv_u.basis_count();
                let points = (0..nu2).flat_map(|i| columns.iter().map(move |c| c[i])).collect();
                Self::new(kv_u, self.kv_v.clone(), points)
            }
            Direction::V => {
                let mut new_kv = None;
                let mut points = Vec::new();
                for i in 0..nu {
                    let (kv, pts) = refine(&self.kv_v, &self.points[i * nv..(i + 1) * nv])?;
                    new_kv = Some(kv);
                    points.extend(pts);
                }
                Self::new(self.kv_u.clone(), new_kv.expect("at least one control row"), points)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn appendix_curve() -> Curve<2> {
        let kv = KnotVector::new(vec![1., 1., 1., 2., 3., 4., 4., 4.], 2).unwrap();
        Curve::new(kv, vec![[0., 0.], [1., 2.], [2., -1.], [3., 0.5], [4., 1.]]).unwrap()
    }

    fn samples(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
    }

    fn assert_same_geometry<const D: usize>(c1: &Curve<D>, c2: &Curve<D>, tol: f64) {
        let (a, b) = c1.domain();
        for u in samples(a, b, 20) {
            let (x, y) = (c1.eval(u).unwrap(), c2.eval(u).unwrap());
            for d in 0..D {
                assert_abs_diff_eq!(x[d], y[d], epsilon = tol);
            }
        }
    }

    #[test]
    fn insert_knot_preserves_geometry() {
        let c = appendix_curve();
        let r = c.insert_knot(2.5).unwrap();
        assert_eq!(r.points().len(), c.points().len() + 1);
        assert_same_geometry(&c, &r, 1e-12);
        // raise an existing knot to multiplicity p
        let r2 = c.insert_knot(2.0).unwrap();
        assert_eq!(r2.knot_vector().multiplicity(2.0), 2);
        assert_same_geometry(&c, &r2, 1e-12);
    }

    #[test]
    fn insert_knot_rejects_overflow_and_outside() {
        let c = appendix_curve().insert_knot(2.0).unwrap();
        assert!(matches!(c.insert_knot(2.0), Err(SplineError::MultiplicityOverflow { .. })));
        assert!(matches!(c.insert_knot(4.5), Err(SplineError::ParameterOutOfRange { .. })));
        assert!(matches!(c.insert_knot(1.0), Err(SplineError::ParameterOutOfRange { .. })));
    }

    #[test]
    fn elevate_line_twice() {
        let kv = KnotVector::new(vec![-1., -1., 1., 1.], 1).unwrap();
        let line = Curve::new(kv, vec![[-1.0], [1.0]]).unwrap();
        let cubic = line.elevate_degree().unwrap().elevate_degree().unwrap();
        assert_eq!(cubic.knot_vector().knots(), &[-1., -1., -1., -1., 1., 1., 1., 1.]);
        for u in samples(-1., 1., 20) {
            assert_abs_diff_eq!(cubic.eval(u).unwrap()[0], u, epsilon = 1e-14);
        }
        let direct = line.elevate_degree_by(2).unwrap();
        assert_eq!(direct.knot_vector(), cubic.knot_vector());
        assert_same_geometry(&direct, &cubic, 1e-13);
    }

    #[test]
    fn elevate_with_interior_knots() {
        let c = appendix_curve();
        let e = c.elevate_degree().unwrap();
        assert_eq!(e.degree(), 3);
        assert_eq!(e.knot_vector().knots(), &[1., 1., 1., 1., 2., 2., 3., 3., 4., 4., 4., 4.]);
        assert_same_geometry(&c, &e, 1e-12);
        let e2 = c.elevate_degree_by(2).unwrap();
        assert_same_geometry(&e.elevate_degree().unwrap(), &e2, 1e-12);
    }

    #[test]
    fn elevate_constant_curve() {
        let c = Curve::new(
            KnotVector::new(vec![0., 0., 0., 0.4, 1., 1., 1.], 2).unwrap(),
            vec![[3.0, -2.0]; 4],
        )
        .unwrap();
        let e = c.elevate_degree().unwrap();
        assert!(e.points().iter().all(|p| (p[0] - 3.0).abs() < 1e-14 && (p[1] + 2.0).abs() < 1e-14));
    }

    #[test]
    fn elevation_requires_clamped() {
        let kv = KnotVector::new(vec![0., 1., 2., 3., 4., 5.], 2).unwrap();
        let c = Curve::new(kv, vec![[0.0]; 3]).unwrap();
        assert_eq!(c.elevate_degree().unwrap_err(), SplineError::NotClamped);
    }

    #[test]
    fn greville_control_points_give_identity_map() {
        let kv = KnotVector::new(vec![0., 0., 0., 0., 0.3, 0.5, 0.5, 0.9, 1., 1., 1., 1.], 3).unwrap();
        let pts = kv.greville().into_iter().map(|g| [g, 0.0]).collect();
        let c = Curve::new(kv, pts).unwrap();
        for u in samples(0., 1., 20) {
            let x = c.eval(u).unwrap();
            assert_abs_diff_eq!(x[0], u, epsilon = 1e-12);
            assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(c.jacobian(u).unwrap()[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn subcurve_matches_original() {
        let c = appendix_curve();
        for &(a, b) in &[(1.5, 3.2), (1.0, 2.0), (2.0, 4.0), (1.2, 1.7), (3.0, 3.5)] {
            let s = c.subcurve(a, b).unwrap();
            assert_eq!(s.domain(), (a, b));
            assert!(s.knot_vector().is_clamped());
            for u in samples(a, b, 15) {
                let (x, y) = (c.eval(u).unwrap(), s.eval(u).unwrap());
                assert_abs_diff_eq!(x[0], y[0], epsilon = 1e-12);
                assert_abs_diff_eq!(x[1], y[1], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn surface_tensor_consistency() {
        let ku = KnotVector::new(vec![0., 0., 0., 0.5, 1., 1., 1.], 2).unwrap();
        let kv = KnotVector::new(vec![0., 0., 0.3, 0.6, 1., 1.], 1).unwrap();
        let a = [1.0, -2.0, 0.5, 3.0];
        let b = [2.0, 0.5, -1.0, 1.5];
        let cu = Curve::new(ku.clone(), a.iter().map(|&x| [x]).collect()).unwrap();
        let cv = Curve::new(kv.clone(), b.iter().map(|&x| [x]).collect()).unwrap();
        let pts = a.iter().flat_map(|&x| b.iter().map(move |&y| [x * y])).collect();
        let s = Surface::new(ku, kv, pts).unwrap();
        for u in samples(0., 1., 7) {
            for v in samples(0., 1., 7) {
                let expect = cu.eval(u).unwrap()[0] * cv.eval(v).unwrap()[0];
                assert_abs_diff_eq!(s.eval(u, v).unwrap()[0], expect, epsilon = 1e-13);
                let (du, dv) = s.jacobian(u, v).unwrap();
                assert_abs_diff_eq!(du[0], cu.jacobian(u).unwrap()[0] * cv.eval(v).unwrap()[0], epsilon = 1e-12);
                assert_abs_diff_eq!(dv[0], cu.eval(u).unwrap()[0] * cv.jacobian(v).unwrap()[0], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn surface_refinement_preserves_geometry() {
        let ku = KnotVector::new(vec![0., 0., 0., 0.5, 1., 1., 1.], 2).unwrap();
        let kv = KnotVector::new(vec![0., 0., 1., 1.], 1).unwrap();
        let pts: Vec<Point<3>> = (0..4)
            .flat_map(|i| (0..2).map(move |j| [i as f64, j as f64, ((i * 7 + j * 3) % 5) as f64]))
            .collect();
        let s = Surface::new(ku, kv, pts).unwrap();
        let r = s
            .insert_knot(Direction::U, 0.3)
            .unwrap()
            .elevate_degree(Direction::V)
            .unwrap()
            .insert_knot(Direction::V, 0.7)
            .unwrap()
            .elevate_degree(Direction::U)
            .unwrap();
        assert_eq!(r.knot_vector(Direction::U).degree(), 3);
        assert_eq!(r.knot_vector(Direction::V).degree(), 2);
        for u in samples(0., 1., 9) {
            for v in samples(0., 1., 9) {
                let (x, y) = (s.eval(u, v).unwrap(), r.eval(u, v).unwrap());
                for d in 0..3 {
                    assert_abs_diff_eq!(x[d], y[d], epsilon = 1e-12);
                }
            }
        }
    }
}
