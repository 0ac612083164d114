use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::extension::{TrimmedBasis1D, ValidDomain1D};
use crate::quasi::{
    basis_segment, dual_functional, dual_functional_indirect, extrapolation_weight, interpolation_coefficients,
    newton_basis_coeffs, PowerPolynomial, WeightRoute,
};
use crate::spline::basis::span_polynomials;
use crate::spline::KnotVector;

/// Weights of the worked example by every route, plus the intermediate
/// quantities of each.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightsDemo {
    pub knots: Vec<f64>,
    pub degenerated: usize,
    pub donor_span: usize,
    pub beta: Vec<f64>,
    /// Power coefficients of the donor-span pieces, one per stable function.
    pub segments: Vec<(usize, Vec<f64>)>,
    pub dual_point: f64,
    /// Horner derivative vectors of the pieces, then of `N_j`.
    pub horner: Vec<Vec<f64>>,
    pub interpolation_matrix: DMatrix<f64>,
    pub direct: Vec<f64>,
    pub indirect: Vec<f64>,
    pub interpolation: Vec<f64>,
}

/// Runs the example `Ξ = {1,1,1,2,3,4,4,4}`, `p = 2`, valid domain `(1.4, 4]`.
pub fn weights_demo() -> Result<WeightsDemo> {
    let kv = KnotVector::new(vec![1., 1., 1., 2., 3., 4., 4., 4.], 2)?;
    let p = kv.degree();
    let tb = TrimmedBasis1D::new(&kv, ValidDomain1D::trimmed_below(1.4, 4.0)?)?;
    let j = tb.degenerated()[0];
    let s = tb.donor_span(j).expect("degenerated functions have donors");
    let stable: Vec<usize> = kv.span(s)?.nonzero_indices().collect();
    let beta = newton_basis_coeffs(&kv, j)?;
    let lambda = kv.knots()[j + p];
    let segments: Vec<PowerPolynomial> = stable.iter().map(|&i| basis_segment(&kv, i, s)).collect::<Result<_>>()?;
    let mut horner: Vec<Vec<f64>> = segments.iter().map(|b| b.horner_derivatives(lambda)).collect();
    horner.push(beta.horner_derivatives(lambda));

    // row per donor piece: its coefficients in the functions of the first
    // span of supp B_j, so the first column holds the weights
    let first = kv.spans().find(|sp| sp.index >= j).expect("supports contain a non-empty span").index;
    let mut m = DMatrix::zeros(stable.len(), p + 1);
    for (c, &i) in stable.iter().enumerate() {
        let piece = |u: f64| span_polynomials(&kv, s, u)[i + p - s];
        for (r, v) in interpolation_coefficients(&kv, first, piece)?.into_iter().enumerate() {
            m[(c, r)] = v;
        }
    }
    let direct = horner[..stable.len()]
        .iter()
        .map(|h| dual_functional(&kv, j, h, lambda))
        .collect::<Result<Vec<_>>>()?;
    let indirect = segments.iter().map(|b| dual_functional_indirect(&beta, b, p)).collect::<Result<Vec<_>>>()?;
    let interpolation = stable
        .iter()
        .map(|&i| extrapolation_weight(&kv, j, i, s, WeightRoute::Interpolation, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightsDemo {
        knots: kv.knots().to_vec(),
        degenerated: j,
        donor_span: s,
        beta: beta.coeffs().to_vec(),
        segments: stable.iter().copied().zip(segments.iter().map(|b| b.coeffs().to_vec())).collect(),
        dual_point: lambda,
        horner,
        interpolation_matrix: m,
        direct,
        indirect,
        interpolation,
    })
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", (x * 1e12).round() / 1e12 + 0.0)).collect();
    format!("({})", parts.join(", "))
}

impl std::fmt::Display for WeightsDemo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        let _ = writeln!(s, "knot vector {}  degree 2", list(&self.knots));
        let _ = writeln!(s, "degenerated function j = {}, donor span s = {}", self.degenerated, self.donor_span);
        let _ = writeln!(s, "beta (ascending powers) = {}", list(&self.beta));
        for (i, c) in &self.segments {
            let _ = writeln!(s, "piece of B_{i} on span {}: {}", self.donor_span, list(c));
        }
        let _ = writeln!(s, "\nHorner vectors at lambda = {}:", self.dual_point);
        let n = self.segments.len();
        for (k, h) in self.horner.iter().enumerate() {
            let label = if k < n { format!("b_{}", self.segments[k].0) } else { format!("N_{}", self.degenerated) };
            let _ = writeln!(s, "  {label}: {}", list(h));
        }
        let _ = writeln!(s, "\ninterpolation matrix M:");
        for r in 0..self.interpolation_matrix.nrows() {
            let row: Vec<f64> = self.interpolation_matrix.row(r).iter().copied().collect();
            let _ = writeln!(s, "  {}", list(&row));
        }
        let _ = writeln!(s, "\n{:>6} {:>14} {:>14} {:>14}", "i", "direct", "indirect", "interpolation");
        for k in 0..n {
            let _ = writeln!(
                s,
                "{:>6} {:>14} {:>14} {:>14}",
                self.segments[k].0,
                list(&[self.direct[k]]),
                list(&[self.indirect[k]]),
                list(&[self.interpolation[k]])
            );
        }
        f.write_str(&s)
    }
}
