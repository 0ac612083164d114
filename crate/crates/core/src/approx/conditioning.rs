//! Condition numbers of dense square matrices.

use nalgebra::DMatrix;

fn norm_1(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `‖A‖₁ ‖A⁻¹‖₁`; infinite for singular or non-square matrices.
pub fn condition_number_1(a: &DMatrix<f64>) -> f64 {
    if !a.is_square() || a.nrows() == 0 {
        return f64::INFINITY;
    }
    match a.clone().lu().try_inverse() {
        Some(inv) => {
            let k = norm_1(a) * norm_1(&inv);
            if k.is_finite() {
                k
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

/// Ratio of the extreme singular values; infinite when the smallest
/// vanishes.
pub fn condition_number_2(a: &DMatrix<f64>) -> f64 {
    if !a.is_square() || a.nrows() == 0 {
        return f64::INFINITY;
    }
    let s = a.singular_values();
    let max = s.max();
    let min = s.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
