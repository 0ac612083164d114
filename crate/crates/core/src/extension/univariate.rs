//! Trimmed univariate bases: classification, donor spans and weights.

use std::collections::BTreeMap;

use super::domain::ValidDomain1D;
use super::matrix::ExtensionMatrix;
use crate::error::{Result, SplineError};
use crate::quasi::{extrapolation_weight, WeightRoute};
use crate::spline::basis::span_polynomials;
use crate::spline::KnotVector;

/// Two span midpoints closer than this count as equally far from an anchor.
const TIE_TOLERANCE: f64 = 1e-12;

/// Role of a basis function with respect to a valid domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Anchor inside the valid domain.
    Stable,
    /// Support reaches into the valid domain but the anchor does not.
    Degenerated,
    /// Support does not meet the valid domain.
    Exterior,
}

/// A univariate basis restricted to a valid domain.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimmedBasis1D {
    kv: KnotVector,
    domain: ValidDomain1D,
    anchors: Vec<f64>,
    roles: Vec<Role>,
    donors: BTreeMap<usize, usize>,
}

/// Labels every basis function as stable, degenerated or exterior. Donor
/// spans are not assigned.
pub fn classify(kv: &KnotVector, anchors: &[f64], domain: ValidDomain1D) -> Result<TrimmedBasis1D> {
    let n = kv.basis_count();
    if anchors.len() != n {
        return Err(SplineError::DimensionMismatch(format!("{} anchors for {n} basis functions", anchors.len())));
    }
    let (a, b) = kv.domain();
    if !domain.overlaps(a, b) {
        return Err(SplineError::EmptyDomain);
    }
    let roles = (0..n)
        .map(|i| {
            let (lo, hi) = kv.support(i);
            if !domain.overlaps(lo, hi) {
                Role::Exterior
            } else if domain.contains(anchors[i]) {
                Role::Stable
            } else {
                Role::Degenerated
            }
        })
        .collect();
    Ok(TrimmedBasis1D { kv: kv.clone(), domain, anchors: anchors.to_vec(), roles, donors: BTreeMap::new() })
}

/// Nearest non-empty span lying in the closure of the valid domain whose
/// `p + 1` active functions are all stable. Distance is measured from the
/// anchor of `j` to the span midpoint; ties go to the lower span index.
pub fn find_donor_span(tb: &TrimmedBasis1D, j: usize) -> Result<usize> {
    if tb.roles.get(j) != Some(&Role::Degenerated) {
        return Err(SplineError::NotDegenerated { index: j });
    }
    let anchor = tb.anchors[j];
    let mut best: Option<(f64, usize)> = None;
    for span in tb.kv.spans() {
        if !tb.domain.covers(span.lower, span.upper) {
            continue;
        }
        if !span.nonzero_indices().all(|i| tb.roles[i] == Role::Stable) {
            continue;
        }
        let dist = (span.midpoint() - anchor).abs();
        match best {
            Some((d, _)) if dist >= d - TIE_TOLERANCE => {}
            _ => best = Some((dist, span.index)),
        }
    }
    best.map(|(_, s)| s).ok_or(SplineError::NoDonorSpan { index: j })
}

/// Weights `e_{i,j} = λ_j(b^s_i)` for the `p + 1` functions `i` active on
/// donor span `s`, as `(i, e_{i,j})` pairs.
pub fn univariate_weights(kv: &KnotVector, j: usize, s: usize) -> Result<Vec<(usize, f64)>> {
    univariate_weights_with(kv, j, s, WeightRoute::default())
}

pub fn univariate_weights_with(kv: &KnotVector, j: usize, s: usize, route: WeightRoute) -> Result<Vec<(usize, f64)>> {
    let span = kv.span(s)?;
    span.nonzero_indices()
        .map(|i| Ok((i, extrapolation_weight(kv, j, i, s, route, None)?)))
        .collect()
}

impl TrimmedBasis1D {
    /// Classifies with Greville anchors and assigns donor spans.
    pub fn new(kv: &KnotVector, domain: ValidDomain1D) -> Result<Self> {
        let mut tb = classify(kv, &kv.greville(), domain)?;
        tb.assign_donors()?;
        Ok(tb)
    }

    pub fn assign_donors(&mut self) -> Result<()> {
        let mut donors = BTreeMap::new();
        for j in self.degenerated() {
            donors.insert(j, find_donor_span(self, j)?);
        }
        self.donors = donors;
        Ok(())
    }

    pub fn knot_vector(&self) -> &KnotVector {
        &self.kv
    }

    pub fn domain(&self) -> ValidDomain1D {
        self.domain
    }

    pub fn anchors(&self) -> &[f64] {
        &self.anchors
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, i: usize) -> Role {
        self.roles[i]
    }

    fn with_role(&self, role: Role) -> Vec<usize> {
        (0..self.roles.len()).filter(|&i| self.roles[i] == role).collect()
    }

    pub fn stable(&self) -> Vec<usize> {
        self.with_role(Role::Stable)
    }

    pub fn degenerated(&self) -> Vec<usize> {
        self.with_role(Role::Degenerated)
    }

    pub fn exterior(&self) -> Vec<usize> {
        self.with_role(Role::Exterior)
    }

    pub fn non_exterior(&self) -> Vec<usize> {
        (0..self.roles.len()).filter(|&i| self.roles[i] != Role::Exterior).collect()
    }

    pub fn donor_span(&self, j: usize) -> Option<usize> {
        self.donors.get(&j).copied()
    }

    /// For each stable `i`, the degenerated functions `J_i` it absorbs.
    pub fn donor_assignment(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut map: BTreeMap<usize, Vec<usize>> = self.stable().into_iter().map(|i| (i, Vec::new())).collect();
        for (&j, &s) in &self.donors {
            for i in s - self.kv.degree()..=s {
                map.entry(i).or_default().push(j);
            }
        }
        map
    }

    pub fn extension_matrix(&self) -> Result<ExtensionMatrix> {
        build_extension_matrix(self)
    }

    /// Values of the stable extended functions at `u ∈ 𝒜^v`, in the order
    /// of [`Self::stable`].
    pub fn eval_extended(&self, e: &ExtensionMatrix, u: f64) -> Result<Vec<f64>> {
        if !self.domain.contains(u) {
            return Err(SplineError::OutsideValidInterval { u });
        }
        let s = self.kv.find_span(u)?;
        let p = self.kv.degree();
        let local = span_polynomials(&self.kv, s, u);
        let mut full = vec![0.0; self.kv.basis_count()];
        full[s - p..=s].copy_from_slice(&local);
        Ok(e.apply_to_global(&full))
    }
}

/// Sparse extension matrix `E`: rows are the non-exterior functions,
/// columns the stable ones. Stable rows carry the identity and each
/// degenerated row holds the weights towards its donor span functions.
pub fn build_extension_matrix(tb: &TrimmedBasis1D) -> Result<ExtensionMatrix> {
    let rows = tb.non_exterior();
    let cols = tb.stable();
    let mut entries = Vec::new();
    for &i in &cols {
        entries.push((i, i, 1.0));
    }
    for j in tb.degenerated() {
        let s = match tb.donor_span(j) {
            Some(s) => s,
            None => find_donor_span(tb, j)?,
        };
        for (i, w) in univariate_weights(&tb.kv, j, s)? {
            entries.push((j, i, w));
        }
    }
    ExtensionMatrix::from_global(tb.kv.basis_count(), rows, cols, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::{dual_functional, interpolation_coefficients, PowerPolynomial};
    use crate::testutil::knot_vectors_with_min_gap;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn appendix() -> KnotVector {
        KnotVector::new(vec![1., 1., 1., 2., 3., 4., 4., 4.], 2).unwrap()
    }

    #[test]
    fn appendix_classification_and_donor() {
        let kv = appendix();
        let tb = TrimmedBasis1D::new(&kv, ValidDomain1D::trimmed_below(1.4, 4.0).unwrap()).unwrap();
        assert_eq!(tb.degenerated(), vec![0]);
        assert_eq!(tb.stable(), vec![1, 2, 3, 4]);
        assert!(tb.exterior().is_empty());
        assert_eq!(tb.donor_span(0), Some(3));
        let map = tb.donor_assignment();
        assert_eq!(map[&1], vec![0]);
        assert_eq!(map[&3], vec![0]);
        assert!(map[&4].is_empty());
    }

    #[test]
    fn appendix_weights_and_matrix() {
        let kv = appendix();
        let w = univariate_weights(&kv, 0, 3).unwrap();
        let expected = [(1, 2.0), (2, -1.5), (3, 0.5)];
        for ((i, v), (ei, ev)) in w.iter().zip(expected) {
            assert_eq!(*i, ei);
            assert_abs_diff_eq!(*v, ev, epsilon = 1e-12);
        }
        let tb = TrimmedBasis1D::new(&kv, ValidDomain1D::trimmed_below(1.4, 4.0).unwrap()).unwrap();
        let e = tb.extension_matrix().unwrap();
        assert_eq!((e.nrows(), e.ncols()), (5, 4));
        assert_abs_diff_eq!(e.get(0, 1), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.get(1, 1), 1.0);
        assert_abs_diff_eq!(e.get(0, 4), 0.0);
    }

    #[test]
    fn untrimmed_is_identity() {
        let kv = KnotVector::open_uniform(3, -1.0, 1.0, 5).unwrap();
        let tb = TrimmedBasis1D::new(&kv, ValidDomain1D::closed(-1.0, 1.0).unwrap()).unwrap();
        assert!(tb.degenerated().is_empty() && tb.exterior().is_empty());
        let e = tb.extension_matrix().unwrap().to_dense();
        assert_eq!(e, nalgebra::DMatrix::identity(8, 8));
    }

    #[test]
    fn anchor_on_open_end_is_degenerated() {
        // γ_1 = 1.5 lies on the open end of (1.5, 4]
        let tb = TrimmedBasis1D::new(&appendix(), ValidDomain1D::trimmed_below(1.5, 4.0).unwrap()).unwrap();
        assert_eq!(tb.degenerated(), vec![0, 1]);
        assert_eq!(tb.donor_span(0), Some(4));
        assert_eq!(tb.donor_span(1), Some(4));
        // closing that end makes B_1 stable again
        let tb = TrimmedBasis1D::new(&appendix(), ValidDomain1D::closed(1.5, 4.0).unwrap()).unwrap();
        assert_eq!(tb.degenerated(), vec![0]);
    }

    #[test]
    fn far_trim_makes_functions_exterior() {
        let tb = classify(&appendix(), &appendix().greville(), ValidDomain1D::trimmed_below(3.9, 4.0).unwrap()).unwrap();
        // supports [1,2] and [1,3] miss (3.9, 4]
        assert_eq!(tb.exterior(), vec![0, 1]);
        assert_eq!(tb.role(0), Role::Exterior);
        assert_eq!(tb.degenerated(), vec![2, 3]);
        assert_eq!(tb.stable(), vec![4]);
        assert!(matches!(find_donor_span(&tb, 3), Err(SplineError::NoDonorSpan { index: 3 })));
        assert!(matches!(find_donor_span(&tb, 4), Err(SplineError::NotDegenerated { index: 4 })));
    }

    #[test]
    fn disjoint_domain_is_an_error() {
        let kv = appendix();
        let r = classify(&kv, &kv.greville(), ValidDomain1D::closed(5.0, 6.0).unwrap());
        assert_eq!(r, Err(SplineError::EmptyDomain));
    }

    #[test]
    fn mirrored_trim_mirrors_donors_and_weights() {
        let kv = KnotVector::open_uniform(3, -1.0, 1.0, 8).unwrap();
        let left = TrimmedBasis1D::new(&kv, ValidDomain1D::trimmed_above(-1.0, 0.37).unwrap()).unwrap();
        let right = TrimmedBasis1D::new(&kv, ValidDomain1D::trimmed_above(-1.0, 0.37).unwrap().reflected(0.0)).unwrap();
        let n = kv.basis_count();
        let mirror = |i: usize| n - 1 - i;
        let mut mirrored: Vec<usize> = right.degenerated().into_iter().map(mirror).collect();
        mirrored.sort();
        assert_eq!(left.degenerated(), mirrored);
        let el = left.extension_matrix().unwrap();
        let er = right.extension_matrix().unwrap();
        for j in left.degenerated() {
            let s = left.donor_span(j).unwrap();
            // span s = [u_s, u_{s+1}] mirrors to span index (n + p - 1) - s
            assert_eq!(right.donor_span(mirror(j)), Some(n + 3 - 1 - s));
            for i in s - 3..=s {
                assert_abs_diff_eq!(el.get(j, i), er.get(mirror(j), mirror(i)), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn extended_values_by_direct_summation() {
        let kv = appendix();
        let tb = TrimmedBasis1D::new(&kv, ValidDomain1D::trimmed_below(1.4, 4.0).unwrap()).unwrap();
        let e = tb.extension_matrix().unwrap();
        for u in [1.7, 2.5, 3.2] {
            let got = tb.eval_extended(&e, u).unwrap();
            let b = crate::spline::eval_all(&kv, u, Default::default()).unwrap();
            let weights = [0.0, 2.0, -1.5, 0.5, 0.0];
            for (c, i) in (1..=4).enumerate() {
                assert_abs_diff_eq!(got[c], b[i] + weights[i] * b[0], epsilon = 1e-14);
            }
            assert_abs_diff_eq!(got.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
        // away from the trim the extended function is the conventional one
        assert_eq!(tb.donor_assignment()[&4], Vec::<usize>::new());
        assert!(matches!(tb.eval_extended(&e, 1.2), Err(SplineError::OutsideValidInterval { .. })));
    }

    /// Random trims of random knot vectors, with the trim on either side.
    fn trimmed_strategy() -> impl Strategy<Value = (KnotVector, ValidDomain1D)> {
        (knot_vectors_with_min_gap(0.25), 0.0f64..1.0, any::<bool>()).prop_filter_map(
            "needs a donor span",
            |(kv, s, from_left)| {
                let (a, b) = kv.domain();
                let t = a + (b - a) * (0.2 + 0.6 * s);
                let dom = if from_left {
                    ValidDomain1D::trimmed_below(t, b).ok()?
                } else {
                    ValidDomain1D::trimmed_above(a, t).ok()?
                };
                TrimmedBasis1D::new(&kv, dom).ok().map(|_| (kv, dom))
            },
        )
    }

    proptest! {
        #[test]
        fn weights_match_linear_solve_oracle((kv, dom) in trimmed_strategy()) {
            let tb = TrimmedBasis1D::new(&kv, dom).unwrap();
            let p = kv.degree();
            for j in tb.degenerated() {
                let s = tb.donor_span(j).unwrap();
                // oracle: interpolate each donor piece on the first span of supp B_j
                let sigma = (j..=j + p).find(|&q| kv.span(q).is_ok()).unwrap();
                for (i, w) in univariate_weights(&kv, j, s).unwrap() {
                    let local = i + p - s;
                    let c = interpolation_coefficients(&kv, sigma, |x| span_polynomials(&kv, s, x)[local]).unwrap();
                    let oracle = c[j + p - sigma];
                    // size of the extrapolated piece over the support of B_j
                    let (a, b) = kv.support(j);
                    let scale = (0..=8)
                        .map(|q| span_polynomials(&kv, s, a + (b - a) * q as f64 / 8.0)[local].abs())
                        .fold(1.0, f64::max);
                    prop_assert!((w - oracle).abs() < 1e-9 * scale, "{w} vs {oracle}");
                }
            }
        }

        #[test]
        fn extended_functions_reproduce_donor_pieces((kv, dom) in trimmed_strategy()) {
            let tb = TrimmedBasis1D::new(&kv, dom).unwrap();
            let e = tb.extension_matrix().unwrap();
            let p = kv.degree();
            let stable = tb.stable();
            for span in kv.spans() {
                let Some((a, b)) = dom.clip(span.lower, span.upper) else { continue };
                let active: Vec<usize> = span.nonzero_indices().collect();
                let degen: Vec<usize> = active.iter().copied().filter(|&g| tb.role(g) == Role::Degenerated).collect();
                let Some(&first) = degen.first() else { continue };
                let s = tb.donor_span(first).unwrap();
                // on this span B^e_i is the donor piece when every degenerated
                // function uses s and every stable one is active on s
                let consistent = degen.iter().all(|&j| tb.donor_span(j) == Some(s))
                    && active.iter().all(|&g| tb.role(g) != Role::Stable || (s - p..=s).contains(&g));
                if !consistent {
                    continue;
                }
                for q in 0..10 {
                    let u = a + (b - a) * (q as f64 + 0.5) / 10.0;
                    let ext = tb.eval_extended(&e, u).unwrap();
                    for i in s - p..=s {
                        let c = stable.iter().position(|&g| g == i).unwrap();
                        let want = span_polynomials(&kv, s, u)[i + p - s];
                        prop_assert!((ext[c] - want).abs() < 1e-10 * (1.0 + want.abs()),
                            "B^e_{i}({u}) = {} vs piece {want}", ext[c]);
                    }
                }
            }
        }

        #[test]
        fn polynomial_reproduction(
            (kv, dom) in trimmed_strategy(),
            coeffs in prop::collection::vec(-1.0f64..1.0, 5),
            deg in 0usize..=4,
        ) {
            let p = kv.degree();
            let deg = deg.min(p);
            let f = PowerPolynomial::new(coeffs[..=deg].to_vec()).padded(p);
            let tb = TrimmedBasis1D::new(&kv, dom).unwrap();
            let e = tb.extension_matrix().unwrap();
            // coefficients of f: dual functionals of the stable functions
            let c: Vec<f64> = tb.stable().iter().map(|&i| {
                let (a, b) = kv.support(i);
                let lam = 0.5 * (a + b);
                dual_functional(&kv, i, &f.horner_derivatives(lam), lam).unwrap()
            }).collect();
            let (a, b) = (dom.lower(), dom.upper());
            for q in 0..25 {
                let u = a + (b - a) * (q as f64 + 0.5) / 25.0;
                let vals = tb.eval_extended(&e, u).unwrap();
                let fh: f64 = vals.iter().zip(&c).map(|(v, c)| v * c).sum();
                prop_assert!((fh - f.eval(u)).abs() < 1e-9, "{fh} vs {}", f.eval(u));
            }
        }
    }
}
