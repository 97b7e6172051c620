//! Fraction-free (Bareiss) elimination for exact square systems.
//!
//! The one-step Bareiss recurrence keeps every intermediate entry equal to a
//! minor of the original matrix, so the divisions are exact in any integral
//! domain and intermediate growth stays polynomial. Pivoting takes the first
//! nonzero entry in row order; exact arithmetic needs no numerical pivoting.

use crate::scalar::Scalar;

/// Solve A·x = b for square A. Returns None when A is singular.
pub fn bareiss_solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    if n == 0 {
        return Some(vec![]);
    }
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prev = S::one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        for i in col + 1..n {
            for j in col + 1..=n {
                let t = m[col][col].clone() * m[i][j].clone()
                    - m[i][col].clone() * m[col][j].clone();
                m[i][j] = t / prev.clone();
            }
            m[i][col] = S::zero();
        }
        prev = m[col][col].clone();
    }
    // Back substitution in the field.
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc / m[i][i].clone();
    }
    Some(x)
}

/// Exact determinant by the same elimination.
pub fn bareiss_det<S: Scalar>(a: &[Vec<S>]) -> S {
    let n = a.len();
    if n == 0 {
        return S::one();
    }
    let mut m: Vec<Vec<S>> = a.to_vec();
    let mut sign_flip = false;
    let mut prev = S::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return S::zero(),
        };
        if piv != col {
            m.swap(col, piv);
            sign_flip = !sign_flip;
        }
        for i in col + 1..n {
            for j in col + 1..n {
                let t = m[col][col].clone() * m[i][j].clone()
                    - m[i][col].clone() * m[col][j].clone();
                m[i][j] = t / prev.clone();
            }
            m[i][col] = S::zero();
        }
        prev = m[col][col].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}
