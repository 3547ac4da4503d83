//! Exact rational null spaces and the limit sets they describe.
//!
//! The k-mer frequency process of a tandem model converges almost surely
//! to the null space of its rate matrix, so the limit candidates are
//! computed symbolically: Gauss–Jordan elimination over arbitrary-
//! precision rationals, no pivots lost to rounding. A floating-point
//! fallback with an explicit singularity threshold exists for matrices
//! whose entries are only available as floats.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kmer::KmerFrequencies;
use crate::tds::RateMatrix;
use crate::Rational;

/// Largest dimension we densify for exact elimination. Beyond this the
/// cubic BigRational cost and the dense memory footprint are impractical.
const MAX_EXACT_DIM: usize = 1024;

/// Reduces `mat` to reduced row echelon form in place; returns the pivot
/// columns in order.
fn rref(mat: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for e in &mut mat[r][c..] {
            *e *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let factor = std::mem::replace(&mut mat[i][c], Rational::zero());
                for cc in (c + 1)..cols {
                    let delta = &factor * &mat[r][cc];
                    mat[i][cc] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Exact basis of the null space of a dense rational matrix.
///
/// One basis vector per free column: the free coordinate is set to 1 and
/// each pivot coordinate to the negated reduced entry in that column.
pub fn null_space_rational(mut mat: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    let pivots = rref(&mut mat);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -mat[row][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Floating-point null-space basis with an explicit singularity
/// threshold: a column whose best remaining pivot is at most `tol` in
/// absolute value is treated as free.
pub fn null_space_f64(mut mat: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let rows = mat.len();
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let (p, best) = (r..rows)
            .map(|i| (i, mat[i][c].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((r, 0.0));
        if best <= tol {
            continue;
        }
        mat.swap(r, p);
        let inv = 1.0 / mat[r][c];
        for e in &mut mat[r][c..] {
            *e *= inv;
        }
        for i in 0..rows {
            if i != r && mat[i][c] != 0.0 {
                let factor = std::mem::take(&mut mat[i][c]);
                for cc in (c + 1)..cols {
                    mat[i][cc] -= factor * mat[r][cc];
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0.0; cols];
        v[f] = 1.0;
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -mat[row][f];
        }
        basis.push(v);
    }
    basis
}

/// Every possible limit of the k-mer frequency process: the null space
/// of a rate matrix, plus the normalized stationary vector when the
/// limit is unique.
#[derive(Debug, Clone)]
pub struct LimitSet {
    pub nullity: usize,
    /// Exact null-space basis vectors, one per free column.
    pub basis: Vec<Vec<Rational>>,
    /// Present exactly when `nullity == 1`: the unique null direction
    /// normalized to a probability vector.
    pub stationary: Option<KmerFrequencies>,
}

/// Computes the null space of a rate matrix exactly and, when it is
/// one-dimensional, the unique frequency vector in it.
///
/// Every returned basis vector is re-verified against the sparse rows
/// (`A b = 0` exactly); a failure would be a solver bug and surfaces as
/// an internal error. With nullity above one the limit depends on the
/// initial string, so no single stationary vector is designated.
pub fn null_space_limit(matrix: &RateMatrix) -> Result<LimitSet> {
    let n = matrix.dim();
    if n > MAX_EXACT_DIM {
        return Err(Error::InvalidParameter(format!(
            "exact elimination capped at dimension {MAX_EXACT_DIM}, got {n}"
        )));
    }
    let basis = null_space_rational(matrix.to_dense());
    for b in &basis {
        for (r, row) in matrix.rows().iter().enumerate() {
            let mut acc = Rational::zero();
            for (col, c) in row.terms() {
                acc += c * &b[col];
            }
            if !acc.is_zero() {
                return Err(Error::Internal(format!(
                    "null-space residual at row {r} is {acc}, expected 0"
                )));
            }
        }
    }
    let nullity = basis.len();
    let stationary = if nullity == 1 {
        let sum: Rational = basis[0].iter().sum();
        if sum.is_zero() {
            return Err(Error::Internal(
                "one-dimensional null space with zero total mass".into(),
            ));
        }
        let values: Vec<Rational> = basis[0].iter().map(|v| v / &sum).collect();
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::Internal(
                "stationary direction has mixed signs".into(),
            ));
        }
        Some(KmerFrequencies::from_values(matrix.index().clone(), values)?)
    } else {
        None
    };
    Ok(LimitSet {
        nullity,
        basis,
        stationary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::kmer::KmerIndex;
    use crate::model::MutationModel;
    use crate::tds::build_rate_matrix;
    use crate::{rat, Rational};

    fn binary_matrix(alpha: Rational) -> RateMatrix {
        let one = rat(1, 1);
        let model = MutationModel::tds(vec![alpha.clone(), one - alpha]).unwrap();
        let index = KmerIndex::new(&Alphabet::binary(), 2).unwrap();
        build_rate_matrix(&model, &index).unwrap()
    }

    #[test]
    fn stationary_matches_closed_form_at_one_quarter() {
        let limit = null_space_limit(&binary_matrix(rat(1, 4))).unwrap();
        assert_eq!(limit.nullity, 1);
        let stationary = limit.stationary.unwrap();
        assert_eq!(
            stationary.values(),
            &[rat(5, 14), rat(1, 7), rat(1, 7), rat(5, 14)]
        );
    }

    #[test]
    fn stationary_matches_closed_form_on_a_grid() {
        // (a+1, 2a, 2a, a+1) / (2 (1 + 3a)) for a = n/10, n = 1..9.
        for n in 1..=9 {
            let alpha = rat(n, 10);
            let limit = null_space_limit(&binary_matrix(alpha.clone())).unwrap();
            let stationary = limit.stationary.unwrap();
            let denom = rat(2, 1) * (rat(1, 1) + rat(3, 1) * alpha.clone());
            let expected = [
                (alpha.clone() + rat(1, 1)) / denom.clone(),
                rat(2, 1) * alpha.clone() / denom.clone(),
                rat(2, 1) * alpha.clone() / denom.clone(),
                (alpha.clone() + rat(1, 1)) / denom.clone(),
            ];
            assert_eq!(stationary.values(), &expected, "alpha = {alpha}");
            assert!(stationary.is_shift_invariant());
        }
    }

    #[test]
    fn pure_duplication_has_a_two_dimensional_null_space() {
        // Without substitutions the all-0 and all-1 strings are absorbing
        // in the 2-mer statistics: null space spanned by e_00 and e_11.
        let limit = null_space_limit(&binary_matrix(rat(0, 1))).unwrap();
        assert_eq!(limit.nullity, 2);
        assert!(limit.stationary.is_none());
        let e00: Vec<Rational> = vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
        let e11: Vec<Rational> = vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)];
        for target in [e00, e11] {
            assert!(
                limit.basis.contains(&target),
                "basis {:?} misses a unit vector",
                limit.basis
            );
        }
    }

    #[test]
    fn float_path_agrees_with_exact_path() {
        use num_traits::ToPrimitive;
        let matrix = binary_matrix(rat(1, 4));
        let dense: Vec<Vec<f64>> = matrix
            .to_dense()
            .iter()
            .map(|row| row.iter().map(|e| e.to_f64().unwrap()).collect())
            .collect();
        let basis = null_space_f64(dense, 1e-10);
        assert_eq!(basis.len(), 1);
        let sum: f64 = basis[0].iter().sum();
        let expected = [5.0 / 14.0, 1.0 / 7.0, 1.0 / 7.0, 5.0 / 14.0];
        for (v, e) in basis[0].iter().zip(expected) {
            assert!((v / sum - e).abs() < 1e-12);
        }
    }

    #[test]
    fn null_space_of_identity_is_trivial() {
        let mut mat = vec![vec![Rational::zero(); 3]; 3];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = rat(1, 1);
        }
        assert!(null_space_rational(mat).is_empty());
    }
}
