//! Collocation systems on conventional, extended and naively trimmed bases.

use nalgebra::{DMatrix, DVector};

use super::conditioning::condition_number_1;
use crate::error::{Result, SplineError};
use crate::extension::{CurveTrimmedBasis, ExtensionMatrix, TensorTrimmedBasis, TrimmedBasis1D, ValidDomain1D};
use crate::spline::{eval_all, KnotVector, Point, Side};

/// Relative residual above which a solve is reported as singular.
const RESIDUAL_TOL: f64 = 1e-10;
/// Diagonal entries below this violate the Schoenberg–Whitney condition.
const SW_TOL: f64 = 1e-14;

/// Square system `A c = f(γ)`: row `k` collocates at `anchors[k]`, column
/// `k` is the function anchored there.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSystem<const D: usize> {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub anchors: Vec<Point<D>>,
    /// Global indices of the unknowns (stable functions for extended
    /// systems, non-exterior functions otherwise).
    pub columns: Vec<usize>,
    /// Present for systems over an extended basis.
    pub extension: Option<ExtensionMatrix>,
}

/// How the naive baseline moves degenerated anchors into the valid domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NaiveAnchors {
    /// Greville abscissae of the knot vector clamped to the valid interval:
    /// anchors stay distinct and the outermost one lies on the trim.
    #[default]
    TruncatedGreville,
    /// Every degenerated anchor is moved onto the trimming boundary.
    ClampToBoundary,
}

/// Which one-sided limit to use for an anchor: the left limit on the upper
/// end of the valid interval, the right limit otherwise.
fn side_for(domain: &ValidDomain1D, x: f64) -> Side {
    if x >= domain.upper() {
        Side::Left
    } else {
        Side::Right
    }
}

/// Conventional collocation matrix `A[k, i] = B_i(x_k)`.
pub fn collocation_matrix(kv: &KnotVector, anchors: &[f64]) -> Result<DMatrix<f64>> {
    let n = kv.basis_count();
    let mut a = DMatrix::zeros(anchors.len(), n);
    for (k, &x) in anchors.iter().enumerate() {
        let row = eval_all(kv, x, Side::Right)?;
        for i in 0..n {
            a[(k, i)] = row[i];
        }
    }
    Ok(a)
}

/// Checks `B_i(γ_i) ≠ 0` for every function and its own anchor.
pub fn check_schoenberg_whitney(kv: &KnotVector, anchors: &[f64]) -> Result<()> {
    if anchors.len() != kv.basis_count() {
        return Err(SplineError::DimensionMismatch(format!("{} anchors for {} basis functions", anchors.len(), kv.basis_count())));
    }
    for (i, &x) in anchors.iter().enumerate() {
        let left = eval_all(kv, x, Side::Left)?[i];
        let right = eval_all(kv, x, Side::Right)?[i];
        if left.abs().max(right.abs()) <= SW_TOL {
            return Err(SplineError::SchoenbergWhitney { index: i });
        }
    }
    Ok(())
}

/// Spline interpolant of `f` at `anchors`, one per basis function.
pub fn interpolate(kv: &KnotVector, anchors: &[f64], f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    check_schoenberg_whitney(kv, anchors)?;
    let system = CollocationSystem {
        matrix: collocation_matrix(kv, anchors)?,
        rhs: DVector::from_iterator(anchors.len(), anchors.iter().map(|&x| f(x))),
        anchors: anchors.iter().map(|&x| [x]).collect(),
        columns: (0..kv.basis_count()).collect(),
        extension: None,
    };
    system.solve()
}

impl<const D: usize> CollocationSystem<D> {
    pub fn size(&self) -> usize {
        self.columns.len()
    }

    /// One-norm condition number.
    pub fn condition_number(&self) -> f64 {
        condition_number_1(&self.matrix)
    }

    /// Flags a vanishing diagonal, i.e. a function that does not see its
    /// own anchor.
    pub fn check_schoenberg_whitney(&self) -> Result<()> {
        for k in 0..self.matrix.nrows().min(self.matrix.ncols()) {
            if self.matrix[(k, k)].abs() <= SW_TOL {
                return Err(SplineError::SchoenbergWhitney { index: self.columns[k] });
            }
        }
        Ok(())
    }

    /// Coefficients by LU with partial pivoting. Fails when the system is
    /// singular or the relative residual exceeds `1e-10`.
    pub fn solve(&self) -> Result<Vec<f64>> {
        if !self.matrix.is_square() || self.matrix.nrows() != self.rhs.len() {
            return Err(SplineError::DimensionMismatch(format!(
                "{}x{} system with {} right-hand sides",
                self.matrix.nrows(),
                self.matrix.ncols(),
                self.rhs.len()
            )));
        }
        let c = self
            .matrix
            .clone()
            .lu()
            .solve(&self.rhs)
            .ok_or(SplineError::SingularSystem { kappa: f64::INFINITY })?;
        let residual = (&self.matrix * &c - &self.rhs).amax();
        let scale = self.rhs.amax();
        if !residual.is_finite() || residual > RESIDUAL_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(SplineError::SingularSystem { kappa: self.condition_number() });
        }
        Ok(c.iter().copied().collect())
    }

    /// Value of the solution `coeffs` at a point where the conventional
    /// basis takes the values `full`.
    pub fn combine(&self, coeffs: &[f64], full: &[f64]) -> f64 {
        match &self.extension {
            Some(e) => e.apply_to_global(full).iter().zip(coeffs).map(|(b, c)| b * c).sum(),
            None => self.columns.iter().zip(coeffs).map(|(&i, c)| full[i] * c).sum(),
        }
    }
}

/// Rows at the anchors restricted to the rows of `E`, times `E`.
fn extended_matrix(rows_full: &[Vec<f64>], e: &ExtensionMatrix) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(rows_full.len(), e.ncols());
    for (k, full) in rows_full.iter().enumerate() {
        for (c, v) in e.apply_to_global(full).into_iter().enumerate() {
            a[(k, c)] = v;
        }
    }
    a
}

fn restricted_matrix(rows_full: &[Vec<f64>], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows_full.len(), cols.len(), |k, c| rows_full[k][cols[c]])
}

/// Interpolation with the extended basis at the anchors of the stable
/// functions.
pub fn stabilized_system(tb: &TrimmedBasis1D, e: &ExtensionMatrix, f: impl Fn(f64) -> f64) -> Result<CollocationSystem<1>> {
    let cols = tb.stable();
    let anchors: Vec<f64> = cols.iter().map(|&i| tb.anchors()[i]).collect();
    let rows = anchors
        .iter()
        .map(|&x| eval_all(tb.knot_vector(), x, side_for(&tb.domain(), x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CollocationSystem {
        matrix: extended_matrix(&rows, e),
        rhs: DVector::from_iterator(anchors.len(), anchors.iter().map(|&x| f(x))),
        anchors: anchors.iter().map(|&x| [x]).collect(),
        columns: cols,
        extension: Some(e.clone()),
    })
}

/// Anchors of the naive baseline for every non-exterior function: stable
/// functions keep their Greville abscissa, degenerated ones are shifted
/// into the valid interval.
pub fn naive_anchors(tb: &TrimmedBasis1D, rule: NaiveAnchors) -> Vec<f64> {
    let d = tb.domain();
    let (lo, hi) = (d.lower(), d.upper());
    let clamped_greville = {
        let p = tb.knot_vector().degree();
        let knots: Vec<f64> = tb.knot_vector().knots().iter().map(|k| k.clamp(lo, hi)).collect();
        let n = tb.knot_vector().basis_count();
        (0..n)
            .map(|i| if p == 0 { 0.5 * (knots[i] + knots[i + 1]) } else { knots[i + 1..=i + p].iter().sum::<f64>() / p as f64 })
            .collect::<Vec<f64>>()
    };
    tb.non_exterior()
        .into_iter()
        .map(|i| {
            let g = tb.anchors()[i];
            if tb.role(i) == crate::extension::Role::Stable {
                g
            } else {
                match rule {
                    NaiveAnchors::TruncatedGreville => clamped_greville[i],
                    NaiveAnchors::ClampToBoundary => g.clamp(lo, hi),
                }
            }
        })
        .collect()
}

/// Conventional basis restricted to the non-exterior functions, with the
/// degenerated anchors shifted into the valid interval.
pub fn naive_system(tb: &TrimmedBasis1D, rule: NaiveAnchors, f: impl Fn(f64) -> f64) -> Result<CollocationSystem<1>> {
    let cols = tb.non_exterior();
    let anchors = naive_anchors(tb, rule);
    let rows = anchors
        .iter()
        .map(|&x| eval_all(tb.knot_vector(), x, side_for(&tb.domain(), x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CollocationSystem {
        matrix: restricted_matrix(&rows, &cols),
        rhs: DVector::from_iterator(anchors.len(), anchors.iter().map(|&x| f(x))),
        anchors: anchors.iter().map(|&x| [x]).collect(),
        columns: cols,
        extension: None,
    })
}

fn tensor_row(tb: &TensorTrimmedBasis, x: Point<2>) -> Result<Vec<f64>> {
    let (fu, fv) = (tb.factor_u(), tb.factor_v());
    let bu = eval_all(fu.knot_vector(), x[0], side_for(&fu.domain(), x[0]))?;
    let bv = eval_all(fv.knot_vector(), x[1], side_for(&fv.domain(), x[1]))?;
    Ok(bu.iter().flat_map(|a| bv.iter().map(move |b| a * b)).collect())
}

/// Extended-basis system for a tensor trim.
pub fn tensor_stabilized_system(
    tb: &TensorTrimmedBasis,
    e: &ExtensionMatrix,
    f: impl Fn(f64, f64) -> f64,
) -> Result<CollocationSystem<2>> {
    let cols = tb.stable();
    let anchors: Vec<Point<2>> = cols.iter().map(|&k| tb.anchor(k).into()).collect();
    let rows = anchors.iter().map(|&x| tensor_row(tb, x)).collect::<Result<Vec<_>>>()?;
    Ok(CollocationSystem {
        matrix: extended_matrix(&rows, e),
        rhs: DVector::from_iterator(anchors.len(), anchors.iter().map(|x| f(x[0], x[1]))),
        anchors,
        columns: cols,
        extension: Some(e.clone()),
    })
}

/// Naive system for a tensor trim, anchors shifted per direction.
pub fn tensor_naive_system(tb: &TensorTrimmedBasis, rule: NaiveAnchors, f: impl Fn(f64, f64) -> f64) -> Result<CollocationSystem<2>> {
    let (fu, fv) = (tb.factor_u(), tb.factor_v());
    let (au, av) = (naive_anchors(fu, rule), naive_anchors(fv, rule));
    let (iu, iv) = (fu.non_exterior(), fv.non_exterior());
    let mut cols = Vec::with_capacity(iu.len() * iv.len());
    let mut anchors = Vec::with_capacity(cols.capacity());
    for (a, &i1) in iu.iter().enumerate() {
        for (b, &i2) in iv.iter().enumerate() {
            cols.push(tb.flat(i1, i2));
            anchors.push([au[a], av[b]]);
        }
    }
    let rows = anchors.iter().map(|&x| tensor_row(tb, x)).collect::<Result<Vec<_>>>()?;
    Ok(CollocationSystem {
        matrix: restricted_matrix(&rows, &cols),
        rhs: DVector::from_iterator(anchors.len(), anchors.iter().map(|x| f(x[0], x[1]))),
        anchors,
        columns: cols,
        extension: None,
    })
}

/// Extended-basis system for a curve trim.
pub fn curve_stabilized_system(
    tb: &CurveTrimmedBasis,
    e: &ExtensionMatrix,
    f: impl Fn(f64, f64) -> f64,
) -> Result<CollocationSystem<2>> {
    let cols = tb.stable();
    let anchors: Vec<Point<2>> = cols.iter().map(|&k| tb.anchor(k)).collect();
    let rows = anchors.iter().map(|x| tb.eval_conventional(x[0], x[1])).collect::<Result<Vec<_>>>()?;
    Ok(CollocationSystem {
        matrix: extended_matrix(&rows, e),
        rhs: DVector::from_iterator(anchors.len(), anchors.iter().map(|x| f(x[0], x[1]))),
        anchors,
        columns: cols,
        extension: Some(e.clone()),
    })
}
