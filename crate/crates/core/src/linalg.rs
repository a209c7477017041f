//! Gaussian elimination over exact fields (rationals and Gaussian rationals)
//! plus solving rational systems whose right-hand side carries parameters.

use num_rational::BigRational;
use num_traits::{Num, Zero};

use crate::scalar::Scalar;

/// Dense row-major matrix.
pub type Mat<T> = Vec<Vec<T>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: Clone + Num>(m: &mut Mat<T>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Clone + Num>(m: &Mat<T>) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of `{x : m x = 0}`.
pub fn kernel<T: Clone + Num>(m: &Mat<T>) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero() - a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse<T: Clone + Num>(m: &Mat<T>) -> Option<Mat<T>> {
    let n = m.len();
    let mut aug: Mat<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul<T: Clone + Num>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let k = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..k).fold(T::zero(), |acc, l| acc + row[l].clone() * b[l][j].clone()))
                .collect()
        })
        .collect()
}

/// Solve `a x = b` for a rational matrix and a parameter-dependent
/// right-hand side. Returns `None` when the system is inconsistent; free
/// variables are set to zero.
pub fn solve_scalar(a: &Mat<BigRational>, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert_eq!(rows, b.len());
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] = rhs[r].scale(&inv);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
                let sub = rhs[r].scale(&f);
                rhs[i] -= &sub;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = rhs[row].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Sym};
    use num_complex::Complex;

    fn q(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn rank_kernel_inverse() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m), 2);
        let k = kernel(&m);
        assert_eq!(k.len(), 1);
        for row in &m {
            let s: BigRational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        assert!(inverse(&m).is_none());
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn gaussian_rank() {
        let i = Complex::new(q(0), q(1));
        let one = Complex::new(q(1), q(0));
        let m = vec![vec![one.clone(), i.clone()], vec![i.clone(), Complex::new(q(-1), q(0))]];
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn parametric_solve() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
        let al = Scalar::sym(Sym::Alpha);
        let de = Scalar::sym(Sym::Delta);
        let b = vec![&al + &de, &al - &de, al.scale(&q(2))];
        let x = solve_scalar(&a, &b).unwrap();
        assert_eq!(x, vec![al.clone(), de.clone()]);
        let bad = vec![al.clone(), de.clone(), de];
        assert!(solve_scalar(&a, &bad).is_none());
    }
}
