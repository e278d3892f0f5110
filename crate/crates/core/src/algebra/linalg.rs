//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::Rational;

/// Outcome of solving `A v = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// A solution; free variables are set to zero. `rank < unknowns` means
    /// the solution is not unique.
    Solved { values: Vec<Rational>, rank: usize },
    /// Row `row` of the echelon form reads `0 = nonzero`.
    Inconsistent { rank: usize, row: usize },
}

/// Solves `matrix * v = rhs`. Rows of `matrix` must all have `unknowns`
/// entries.
pub fn solve_linear(matrix: &[Vec<Rational>], rhs: &[Rational], unknowns: usize) -> LinearSolution {
    assert_eq!(matrix.len(), rhs.len());
    let mut rows: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            assert_eq!(r.len(), unknowns);
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let prow = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row[col..=unknowns].iter_mut().zip(&prow[col..=unknowns]) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if let Some(row) = (rank..rows.len()).find(|&i| !rows[i][unknowns].is_zero()) {
        return LinearSolution::Inconsistent { rank, row };
    }
    let mut values = vec![Rational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        values[col] = rows[i][unknowns].clone();
    }
    LinearSolution::Solved { values, rank }
}

/// Determinant of a square matrix; 1 for the empty matrix.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        let inv = pivot.recip();
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] * &inv;
            let (top, rest) = m.split_at_mut(i);
            for (v, p) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *v -= &factor * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
            .collect()
    }

    #[test]
    fn unique_solution() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![rat(3, 1), rat(5, 1)];
        match solve_linear(&a, &b, 2) {
            LinearSolution::Solved { values, rank } => {
                assert_eq!(rank, 2);
                assert_eq!(values, vec![rat(4, 5), rat(7, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistent_overdetermined() {
        // the local system of 12/(x+1)^3 against y' + 2y: a = -6, b = 2a, 2b = 0
        let a = m(&[&[-2, 0], &[2, -1], &[0, 2]]);
        let b = vec![rat(12, 1), rat(0, 1), rat(0, 1)];
        assert!(matches!(
            solve_linear(&a, &b, 2),
            LinearSolution::Inconsistent { rank: 2, .. }
        ));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&m(&[&[1, 2], &[3, 4]])), rat(-2, 1));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), rat(-1, 1));
        assert_eq!(determinant(&[]), rat(1, 1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), rat(0, 1));
    }
}
