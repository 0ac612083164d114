use crate::error::{Result, SplineError};

/// Non-decreasing knot sequence together with the polynomial degree of the
/// basis it defines.
///
/// The parametric domain is `[u_p, u_n]` with `n` the number of basis
/// functions; for open knot vectors this is `[u_0, u_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
    degree: usize,
}

/// A non-empty knot span `[u_s, u_{s+1})` and the `p + 1` basis functions
/// that do not vanish on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpan {
    pub index: usize,
    pub lower: f64,
    pub upper: f64,
    pub degree: usize,
}

impl BasisSpan {
    pub fn first_function(&self) -> usize {
        self.index - self.degree
    }

    pub fn nonzero_indices(&self) -> std::ops::RangeInclusive<usize> {
        self.first_function()..=self.index
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, u: f64) -> bool {
        self.lower <= u && u <= self.upper
    }
}

impl KnotVector {
    pub fn new(knots: Vec<f64>, degree: usize) -> Result<Self> {
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(SplineError::InvalidKnots("knots must be finite".into()));
        }
        if knots.len() < 2 * (degree + 1) {
            return Err(SplineError::InvalidKnots(format!(
                "degree {degree} needs at least {} knots, got {}",
                2 * (degree + 1),
                knots.len()
            )));
        }
        if let Some(w) = knots.windows(2).find(|w| w[0] > w[1]) {
            return Err(SplineError::InvalidKnots(format!(
                "knots decrease from {} to {}",
                w[0], w[1]
            )));
        }
        let mut run = 1;
        for w in knots.windows(2) {
            run = if w[0] == w[1] { run + 1 } else { 1 };
            if run > degree + 1 {
                return Err(SplineError::InvalidKnots(format!(
                    "knot {} exceeds multiplicity {}",
                    w[0],
                    degree + 1
                )));
            }
        }
        let kv = Self { knots, degree };
        let (a, b) = kv.domain();
        if a >= b {
            return Err(SplineError::InvalidKnots("empty parametric domain".into()));
        }
        Ok(kv)
    }

    /// Open knot vector on `[a, b]` with `spans` uniform knot spans.
    pub fn open_uniform(degree: usize, a: f64, b: f64, spans: usize) -> Result<Self> {
        if spans == 0 || !(a < b) {
            return Err(SplineError::InvalidKnots(format!(
                "cannot build {spans} spans on [{a}, {b}]"
            )));
        }
        let interior = (1..spans).map(|k| a + (b - a) * k as f64 / spans as f64);
        Self::open(degree, a, b, interior)
    }

    /// Open knot vector on `[a, b]` with the given interior knots.
    pub fn open(degree: usize, a: f64, b: f64, interior: impl IntoIterator<Item = f64>) -> Result<Self> {
        let mut knots = vec![a; degree + 1];
        knots.extend(interior);
        knots.extend(std::iter::repeat(b).take(degree + 1));
        Self::new(knots, degree)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Number of basis functions `n = len - p - 1`.
    pub fn basis_count(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.degree], self.knots[self.basis_count()])
    }

    pub fn is_clamped(&self) -> bool {
        let p = self.degree;
        let k = &self.knots;
        let last = k.len() - 1;
        (0..p).all(|i| k[i] == k[p] && k[last - i] == k[last - p])
    }

    pub fn multiplicity(&self, u: f64) -> usize {
        self.knots.iter().filter(|&&k| k == u).count()
    }

    /// Support `[u_i, u_{i+p+1}]` of basis function `i`.
    pub fn support(&self, i: usize) -> (f64, f64) {
        (self.knots[i], self.knots[i + self.degree + 1])
    }

    /// Distinct knot values inside the domain, in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.domain();
        let mut out: Vec<f64> = Vec::new();
        for &k in &self.knots[self.degree..=self.basis_count()] {
            if k >= a && k <= b && out.last() != Some(&k) {
                out.push(k);
            }
        }
        out
    }

    /// All non-empty knot spans of the domain.
    pub fn spans(&self) -> impl Iterator<Item = BasisSpan> + '_ {
        (self.degree..self.basis_count())
            .filter(|&s| self.knots[s] < self.knots[s + 1])
            .map(|s| self.span_unchecked(s))
    }

    pub fn span(&self, s: usize) -> Result<BasisSpan> {
        if s < self.degree || s >= self.basis_count() {
            return Err(SplineError::SpanOutOfRange { span: s, count: self.basis_count() });
        }
        if self.knots[s] >= self.knots[s + 1] {
            return Err(SplineError::InvalidKnots(format!("knot span {s} is empty")));
        }
        Ok(self.span_unchecked(s))
    }

    fn span_unchecked(&self, s: usize) -> BasisSpan {
        BasisSpan { index: s, lower: self.knots[s], upper: self.knots[s + 1], degree: self.degree }
    }

    /// Index `s` of the non-empty span with `u_s <= u < u_{s+1}`. The right
    /// end of the domain belongs to the last non-empty span.
    pub fn find_span(&self, u: f64) -> Result<usize> {
        let (a, b) = self.domain();
        if !(u >= a && u <= b) {
            return Err(SplineError::ParameterOutOfRange { u, lower: a, upper: b });
        }
        let n = self.basis_count();
        if u == b {
            return Ok(self.last_span());
        }
        // largest s in [p, n-1] with u_s <= u
        let (mut lo, mut hi) = (self.degree, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.knots[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Index `s` of the non-empty span with `u_s < u <= u_{s+1}`; used for
    /// left limits at knots. The left end of the domain belongs to the first
    /// non-empty span.
    pub fn find_span_left(&self, u: f64) -> Result<usize> {
        let (a, b) = self.domain();
        if !(u >= a && u <= b) {
            return Err(SplineError::ParameterOutOfRange { u, lower: a, upper: b });
        }
        if u == a {
            return self.find_span(u);
        }
        let n = self.basis_count();
        // smallest s in [p, n-1] with u <= u_{s+1}
        let (mut lo, mut hi) = (self.degree, n - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if u <= self.knots[mid + 1] {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    fn last_span(&self) -> usize {
        let mut s = self.basis_count() - 1;
        while self.knots[s] == self.knots[s + 1] {
            s -= 1;
        }
        s
    }

    /// Greville abscissae `(u_{i+1} + ... + u_{i+p}) / p`. For `p = 0` the
    /// midpoint of the support is used instead.
    pub fn greville(&self) -> Vec<f64> {
        let p = self.degree;
        (0..self.basis_count())
            .map(|i| {
                if p == 0 {
                    0.5 * (self.knots[i] + self.knots[i + 1])
                } else {
                    // a mean of the knots, clamped against round-off
                    let mean = self.knots[i + 1..=i + p].iter().sum::<f64>() / p as f64;
                    mean.clamp(self.knots[i + 1], self.knots[i + p])
                }
            })
            .collect()
    }

    /// Copy of the knot vector with `u` inserted, without multiplicity checks.
    pub(crate) fn with_knot(&self, u: f64) -> Self {
        let pos = self.knots.partition_point(|&k| k <= u);
        let mut knots = self.knots.clone();
        knots.insert(pos, u);
        Self { knots, degree: self.degree }
    }

    /// Copy of the knot vector where every knot is replaced by `min(u_i, cap)`.
    pub fn truncated_above(&self, cap: f64) -> Vec<f64> {
        self.knots.iter().map(|&k| k.min(cap)).collect()
    }

    /// Bisects the non-empty span `s`, returning the refined knot vector.
    pub fn bisect_span(&self, s: usize) -> Result<Self> {
        let span = self.span(s)?;
        Ok(self.with_knot(span.midpoint()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn appendix() -> KnotVector {
        KnotVector::new(vec![1., 1., 1., 2., 3., 4., 4., 4.], 2).unwrap()
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(KnotVector::new(vec![0., 1., 0.5, 2.], 1).is_err());
        assert!(KnotVector::new(vec![0., 0., 1.], 1).is_err());
        assert!(KnotVector::new(vec![0., 0., 0., 1., 1.], 1).is_err());
        assert!(KnotVector::new(vec![0., f64::NAN, 1., 1.], 1).is_err());
        assert!(KnotVector::new(vec![1., 1., 1., 1.], 1).is_err());
    }

    #[test]
    fn counts_and_domain() {
        let kv = appendix();
        assert_eq!(kv.basis_count(), 5);
        assert_eq!(kv.domain(), (1.0, 4.0));
        assert!(kv.is_clamped());
        assert_eq!(kv.multiplicity(1.0), 3);
        assert_eq!(kv.breakpoints(), vec![1., 2., 3., 4.]);
        let spans: Vec<usize> = kv.spans().map(|s| s.index).collect();
        assert_eq!(spans, vec![2, 3, 4]);
    }

    #[test]
    fn span_lookup() {
        let kv = appendix();
        assert_eq!(kv.find_span(1.0).unwrap(), 2);
        assert_eq!(kv.find_span(1.5).unwrap(), 2);
        assert_eq!(kv.find_span(2.0).unwrap(), 3);
        assert_eq!(kv.find_span(4.0).unwrap(), 4);
        assert_eq!(kv.find_span_left(2.0).unwrap(), 2);
        assert_eq!(kv.find_span_left(1.0).unwrap(), 2);
        assert_eq!(kv.find_span_left(2.5).unwrap(), 3);
        assert!(kv.find_span(4.0 + 1e-9).is_err());
        assert!(kv.find_span(0.999).is_err());
    }

    #[test]
    fn span_lookup_with_interior_multiplicity() {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 2., 2., 2.], 2).unwrap();
        assert_eq!(kv.find_span(1.0).unwrap(), 4);
        assert_eq!(kv.find_span_left(1.0).unwrap(), 2);
        assert_eq!(kv.find_span(0.5).unwrap(), 2);
    }

    #[test]
    fn greville_of_appendix_basis() {
        assert_eq!(appendix().greville(), vec![1., 1.5, 2.5, 3.5, 4.]);
    }

    #[test]
    fn greville_open_uniform_endpoints() {
        let kv = KnotVector::open_uniform(2, -1., 1., 16).unwrap();
        let g = kv.greville();
        assert_eq!(g.len(), 18);
        assert_eq!(g[0], -1.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn greville_degree_zero_uses_midpoints() {
        let kv = KnotVector::new(vec![0., 1., 3.], 0).unwrap();
        assert_eq!(kv.greville(), vec![0.5, 2.0]);
    }

    #[test]
    fn anchors_inside_support() {
        let kv = KnotVector::new(vec![0., 0., 0., 0.2, 0.2, 0.7, 1., 1., 1.], 2).unwrap();
        for (i, g) in kv.greville().into_iter().enumerate() {
            let (a, b) = kv.support(i);
            assert!(a <= g && g <= b);
        }
    }
}
