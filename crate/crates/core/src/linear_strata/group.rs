use super::{LinearStratification, Subset};
use crate::arith::Scalar;
use crate::error::{Error, Result};

type Matrix<T> = Vec<Vec<T>>;

fn check_square<T>(a: &[Vec<T>]) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(format!("matrix is not {n}x{n}")));
    }
    Ok(n)
}

pub fn determinant<T: Scalar>(a: &[Vec<T>]) -> Result<T> {
    let n = check_square(a)?;
    let mut m: Matrix<T> = a.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(T::zero());
        };
        if p != col {
            m.swap(p, col);
            det = det.neg();
        }
        let pivot = m[col][col].clone();
        det = det.mul(&pivot);
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].div(&pivot);
            for c in col..n {
                let v = m[r][c].sub(&f.mul(&m[col][c]));
                m[r][c] = v;
            }
        }
    }
    Ok(det)
}

pub fn inverse<T: Scalar>(a: &[Vec<T>]) -> Result<Matrix<T>> {
    let n = check_square(a)?;
    let mut m: Matrix<T> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(p, col);
        let pivot = m[col][col].clone();
        for c in 0..2 * n {
            m[col][c] = m[col][c].div(&pivot);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..2 * n {
                let v = m[r][c].sub(&f.mul(&m[col][c]));
                m[r][c] = v;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(T::zero(), |acc, k| acc.add(&row[k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// Membership in the stratified general linear group.
///
/// The image of V^I is spanned by the columns indexed by I; it is a
/// coordinate subspace exactly when the union J(I) of their supports has
/// |I| elements. The map preserves the stratification iff every J(I) exists
/// and lies in the class of I.
pub fn preserves_stratification<T: Scalar>(a: &[Vec<T>], strat: &LinearStratification) -> Result<bool> {
    let n = check_square(a)?;
    if n != strat.m() {
        return Err(Error::Dimension(format!("matrix is {n}x{n}, stratification has m = {}", strat.m())));
    }
    if determinant(a)?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let column_support: Vec<Subset> = (0..n)
        .map(|j| (0..n).filter(|&i| !a[i][j].is_zero()).fold(0, |acc, i| acc | 1 << i))
        .collect();
    for i in 0..(1u64 << n) {
        let j = (0..n).filter(|k| i >> k & 1 == 1).fold(0, |acc, k| acc | column_support[k]);
        if j.count_ones() != i.count_ones() || strat.class_of(j) != strat.class_of(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A^* W A = W for the diagonal metric W = diag(weights).
pub fn is_metric_orthogonal<T: Scalar>(a: &[Vec<T>], weights: &[T]) -> Result<bool> {
    let n = check_square(a)?;
    if weights.len() != n {
        return Err(Error::Dimension(format!("{} weights for a {n}x{n} matrix", weights.len())));
    }
    for i in 0..n {
        for j in 0..n {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc.add(&a[k][i].conj().mul(&weights[k]).mul(&a[k][j]));
            }
            let want = if i == j { weights[i].clone() } else { T::zero() };
            if acc != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Stratification-preserving, metric-orthogonal, determinant one.
pub fn special_orthogonal<T: Scalar>(a: &[Vec<T>], weights: &[T], strat: &LinearStratification) -> Result<bool> {
    Ok(preserves_stratification(a, strat)? && is_metric_orthogonal(a, weights)? && determinant(a)? == T::one())
}
