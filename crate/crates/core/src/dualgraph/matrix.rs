//! Exact integer matrix arithmetic: Bareiss determinants, leading principal
//! minors, negative-definiteness by Sylvester's criterion, and Cramer solves
//! over the rationals. Everything is i128; overflow panics rather than
//! rounding.

use crate::error::{K3Error, Result};
use num_rational::Ratio;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    a: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            a: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        let a = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| x as i128))
            .collect();
        IntMatrix { n, a }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> i128 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.a[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i128>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j)).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Leading principal k x k submatrix.
    pub fn leading(&self, k: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.at(i, j));
            }
        }
        m
    }
}

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b)
        .expect("exact determinant arithmetic overflowed i128")
}

/// Fraction-free Bareiss elimination with row pivoting.
pub fn determinant(m: &IntMatrix) -> i128 {
    let n = m.size();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a.at(k, k) == 0 {
            let Some(r) = ((k + 1)..n).find(|&r| a.at(r, k) != 0) else {
                return 0;
            };
            for j in 0..n {
                let (x, y) = (a.at(k, j), a.at(r, j));
                a.set(k, j, y);
                a.set(r, j, x);
            }
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (mul(a.at(i, j), a.at(k, k)) - mul(a.at(i, k), a.at(k, j))) / prev;
                a.set(i, j, v);
            }
            a.set(i, k, 0);
        }
        prev = a.at(k, k);
    }
    sign * a.at(n - 1, n - 1)
}

/// All leading principal minors det(A_1), ..., det(A_n).
pub fn leading_minors(m: &IntMatrix) -> Vec<i128> {
    (1..=m.size()).map(|k| determinant(&m.leading(k))).collect()
}

/// Sylvester's criterion: a symmetric matrix is negative definite iff its
/// leading principal minors alternate in sign starting negative,
/// i.e. (-1)^k det(A_k) > 0 for all k.
pub fn is_negative_definite(m: &IntMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(K3Error::NonSymmetric);
    }
    if m.size() == 0 {
        return Ok(true);
    }
    for (k, d) in leading_minors(m).iter().enumerate() {
        let wanted_positive = (k + 1) % 2 == 0;
        let ok = if wanted_positive { *d > 0 } else { *d < 0 };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact solution of M x = b by Cramer's rule. `None` if M is singular.
pub fn solve_exact(m: &IntMatrix, b: &[i128]) -> Option<Vec<Ratio<i128>>> {
    let n = m.size();
    assert_eq!(b.len(), n);
    let det = determinant(m);
    if det == 0 {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut mk = m.clone();
        for (i, &bi) in b.iter().enumerate() {
            mk.set(i, k, bi);
        }
        out.push(Ratio::new(determinant(&mk), det));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_n(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, -2);
            if i + 1 < n {
                m.set(i, i + 1, 1);
                m.set(i + 1, i, 1);
            }
        }
        m
    }

    /// Independent oracle: Laplace expansion along the first remaining row,
    /// memoized over column subsets. Exponential state space, fine to n = 20.
    pub fn det_laplace(m: &IntMatrix) -> i128 {
        fn go(
            m: &IntMatrix,
            row: usize,
            cols: u32,
            memo: &mut std::collections::HashMap<(usize, u32), i128>,
        ) -> i128 {
            if cols == 0 {
                return 1;
            }
            if let Some(&v) = memo.get(&(row, cols)) {
                return v;
            }
            let mut acc: i128 = 0;
            let mut sign: i128 = 1;
            for j in 0..m.size() {
                if cols & (1 << j) == 0 {
                    continue;
                }
                let entry = m.at(row, j);
                if entry != 0 {
                    acc += sign * entry * go(m, row + 1, cols & !(1 << j), memo);
                }
                sign = -sign;
            }
            memo.insert((row, cols), acc);
            acc
        }
        let mut memo = std::collections::HashMap::new();
        go(m, 0, (1u32 << m.size()) - 1, &mut memo)
    }

    #[test]
    fn det_an_is_n_plus_1_in_abs() {
        for n in 1..=19usize {
            let d = determinant(&a_n(n));
            assert_eq!(d.unsigned_abs(), (n as u128) + 1, "A_{n}");
            assert_eq!(d, det_laplace(&a_n(n)), "A_{n} oracle");
        }
    }

    #[test]
    fn zero_and_singular() {
        let m = IntMatrix::from_rows(vec![vec![0]]);
        assert!(!is_negative_definite(&m).unwrap());
        // I3 cycle of (-2)-curves: determinant 0, semidefinite
        let m = IntMatrix::from_rows(vec![vec![-2, 1, 1], vec![1, -2, 1], vec![1, 1, -2]]);
        assert_eq!(determinant(&m), 0);
        assert!(!is_negative_definite(&m).unwrap());
    }

    #[test]
    fn minus_two_is_negative_definite() {
        let m = IntMatrix::from_rows(vec![vec![-2]]);
        assert!(is_negative_definite(&m).unwrap());
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = IntMatrix::from_rows(vec![vec![-2, 1], vec![0, -2]]);
        assert!(matches!(
            is_negative_definite(&m),
            Err(K3Error::NonSymmetric)
        ));
    }

    #[test]
    fn cramer_solves_exactly() {
        // [-3 1; 1 -2] x = (-1, 0) has x = (2/5, 1/5)
        let m = IntMatrix::from_rows(vec![vec![-3, 1], vec![1, -2]]);
        let x = solve_exact(&m, &[-1, 0]).unwrap();
        assert_eq!(x[0], Ratio::new(2, 5));
        assert_eq!(x[1], Ratio::new(1, 5));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&m), -1);
    }

    #[test]
    fn one_by_one() {
        let m = IntMatrix::from_rows(vec![vec![-4]]);
        assert_eq!(determinant(&m), -4);
        assert!(is_negative_definite(&m).unwrap());
    }
}
