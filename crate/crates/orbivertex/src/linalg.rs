//! Exact linear algebra: rational elimination, integer Hermite normal form,
//! integral kernels, and a Phase-I simplex feasibility test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::qi;
use crate::{Error, Result, Q};

/// Rational matrix stored row-major.
pub type QMatrix = Vec<Vec<Q>>;

/// Converts an integer matrix to rationals.
pub fn to_q(m: &[Vec<i64>]) -> QMatrix {
    m.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
}

/// Transpose of a rectangular matrix.
pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form; returns (rref, pivot columns).
pub fn rref(m: &[Vec<Q>]) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank over ℚ.
pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m).1.len()
}

/// Inverse of a square matrix.
pub fn inverse(m: &[Vec<Q>]) -> Result<QMatrix> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n, "inverse needs a square matrix");
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return Err(Error::Singular(format!("{n}×{n} matrix is not invertible")));
    }
    Ok(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Matrix product.
pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> QMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &r[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Matrix-vector product.
pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|r| r.iter().zip(x).fold(Q::zero(), |acc, (p, q)| acc + p * q))
        .collect()
}

/// Determinant by elimination.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>> {
    let inv = inverse(a)?;
    Ok(mat_vec(&inv, b))
}

/// Row-style Hermite normal form of the lattice spanned by `rows` (zero rows removed).
///
/// The result is upper triangular with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`; equal lattices give identical output.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let cols = if m == 0 { 0 } else { a[0].len() };
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        // Euclid on column c among rows r..m
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).expect("nonempty");
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if !a[i][c].is_zero() {
                    let f = a[i][c].div_floor(&a[r][c]);
                    for j in c..cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let f = a[i][c].div_floor(&a[r][c]);
            if !f.is_zero() {
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Converts an `i64` matrix to big integers.
pub fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// A ℤ-basis of the integer kernel `{x ∈ ℤⁿ : A x = 0}` of an integer matrix.
///
/// Column operations reduce `A` to echelon form while tracking a unimodular
/// matrix `U`; the columns of `U` beyond the rank span the kernel.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    let n = if rows == 0 { 0 } else { a[0].len() };
    // Work on the transpose augmented with the identity: [Aᵀ | I].
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut r: Vec<BigInt> = (0..rows).map(|i| BigInt::from(a[i][j])).collect();
            r.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let h = {
        // Echelonize only on the first `rows` columns; unimodular row ops keep [Aᵀ|I] consistent.
        let mut r = 0;
        for c in 0..rows {
            if r == n {
                break;
            }
            loop {
                let nz: Vec<usize> = (r..n).filter(|&i| !t[i][c].is_zero()).collect();
                if nz.is_empty() {
                    break;
                }
                let p = *nz.iter().min_by_key(|&&i| t[i][c].abs()).expect("nonempty");
                t.swap(r, p);
                let mut done = true;
                for i in r + 1..n {
                    if !t[i][c].is_zero() {
                        let f = t[i][c].div_floor(&t[r][c]);
                        for j in 0..rows + n {
                            let v = &f * &t[r][j];
                            t[i][j] -= v;
                        }
                        if !t[i][c].is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if r < n && !t[r][c].is_zero() {
                r += 1;
            }
        }
        r
    };
    t[h..]
        .iter()
        .map(|row| row[rows..].iter().map(|x| x.to_i64().expect("kernel entry fits i64")).collect())
        .collect()
}

/// Outcome of a feasibility search.
#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    /// A point satisfying every constraint.
    Feasible(Vec<Q>),
    Infeasible,
}

/// Decides whether `{x ∈ ℚⁿ : A x ≥ b}` is nonempty with an exact Phase-I simplex
/// (Bland's rule), returning a witness when it is.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q]) -> Feasibility {
    let m = a.len();
    if m == 0 {
        return Feasibility::Feasible(Vec::new());
    }
    let n = a[0].len();
    // Columns: p (n), q (n), slack (m), artificial (m), rhs.
    let width = 2 * n + 2 * m + 1;
    let mut tab: QMatrix = Vec::with_capacity(m + 1);
    for i in 0..m {
        let sign = if b[i].is_negative() { -Q::one() } else { Q::one() };
        let mut row = vec![Q::zero(); width];
        for j in 0..n {
            row[j] = &sign * &a[i][j];
            row[n + j] = -&sign * &a[i][j];
        }
        row[2 * n + i] = -sign.clone();
        row[2 * n + m + i] = Q::one();
        row[width - 1] = &sign * &b[i];
        tab.push(row);
    }
    // Objective: minimize Σ artificials ⇒ reduced costs = −Σ rows on non-artificial columns.
    let mut obj = vec![Q::zero(); width];
    for row in &tab {
        for j in 0..width {
            if !(2 * n + m..2 * n + 2 * m).contains(&j) {
                obj[j] -= &row[j];
            }
        }
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + m + i).collect();
    while let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width - 1] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        let piv = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x /= &piv;
        }
        for i in 0..m {
            if i != r && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..width {
                    let d = &f * &tab[r][j];
                    tab[i][j] -= d;
                }
            }
        }
        let f = obj[enter].clone();
        for j in 0..width {
            let d = &f * &tab[r][j];
            obj[j] -= d;
        }
        basis[r] = enter;
    }
    if !obj[width - 1].is_zero() {
        return Feasibility::Infeasible;
    }
    let mut vals = vec![Q::zero(); 2 * n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < 2 * n {
            vals[bv] = tab[i][width - 1].clone();
        }
    }
    let x: Vec<Q> = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    let ok = a
        .iter()
        .zip(b)
        .all(|(row, bi)| row.iter().zip(&x).fold(Q::zero(), |s, (p, q)| s + p * q) >= *bi);
    if ok {
        Feasibility::Feasible(x)
    } else {
        Feasibility::Infeasible
    }
}
