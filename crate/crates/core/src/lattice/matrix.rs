//! Exact integer and rational matrix kernels used by the lattice code.
//!
//! Matrices are plain `Vec<Vec<_>>` in row-major order. Everything here is
//! exact: determinants go through fraction-free (Bareiss) elimination, and
//! Smith/Hermite forms keep their unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Bilinear form `u^T G v` for integer vectors.
pub fn bilinear(g: &[Vec<BigInt>], u: &[BigInt], v: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !g[i][j].is_zero() {
                s += ui * &g[i][j] * vj;
            }
        }
    }
    s
}

/// Bilinear form for rational vectors.
pub fn bilinear_rat(g: &[Vec<BigInt>], u: &[BigRational], v: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !g[i][j].is_zero() {
                s += ui * BigRational::from_integer(g[i][j].clone()) * vj;
            }
        }
    }
    s
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Smith normal form `U * M * V = D` with unimodular `U`, `V`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith(m: &[Vec<BigInt>]) -> Smith {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: IntMatrix = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let n = rows.min(cols);

    for t in 0..n {
        // choose the smallest nonzero entry of the remaining block as pivot
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // remaining block is zero
                return finish(a, u, v, n);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pivot must divide the whole remaining block
            let mut fixed = true;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        // add row i to row t and restart the pivot loop
                        let one = BigInt::from(-1);
                        row_axpy(&mut a, t, i, &one);
                        row_axpy(&mut u, t, i, &one);
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(a, u, v, n)
}

fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix, n: usize) -> Smith {
    let diagonal = (0..n).map(|i| a[i][i].clone()).collect();
    Smith { diagonal, u, v }
}

/// row[dst] -= q * row[src]
fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    let src_row = a[src].clone();
    for (x, s) in a[dst].iter_mut().zip(src_row) {
        *x -= q * s;
    }
}

/// col[dst] -= q * col[src]
fn col_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `generators`.
/// Returns a basis (nonzero rows only), upper triangular with positive pivots.
pub fn hermite_rows(generators: &[Vec<BigInt>]) -> IntMatrix {
    if generators.is_empty() {
        return Vec::new();
    }
    let cols = generators[0].len();
    let mut a: IntMatrix = generators.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.len() {
                if !a[i][c].is_zero()
                    && best.map_or(true, |b| a[i][c].abs() < a[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                row_axpy(&mut a, i, r, &q);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                if !q.is_zero() {
                    row_axpy(&mut a, i, r, &q);
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Inverse over Q; `None` when singular.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[i][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix,
/// computed by symmetric elimination over Q.
pub fn inertia(m: &[Vec<BigInt>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = to_rational(m);
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                sym_swap(&mut a, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // congruence e_k <- e_k + e_j makes the pivot 2 a_kj
                for i in 0..n {
                    let t = a[j][i].clone();
                    a[k][i] += t;
                }
                for i in 0..n {
                    let t = a[i][j].clone();
                    a[i][k] += t;
                }
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            for j in k..n {
                let t = &f * &a[j][k];
                a[j][i] -= t;
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

fn sym_swap(a: &mut RatMatrix, i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let a = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(det(&a), BigInt::from(4));
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&b), BigInt::from(-1));
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a);
        let d = mul(&mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(d[i][j], expect);
            }
        }
        let diag: Vec<i64> = s.diagonal.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(diag, vec![2, 6, 12]);
        assert_eq!(det(&s.u).abs(), BigInt::one());
        assert_eq!(det(&s.v).abs(), BigInt::one());
    }

    #[test]
    fn hermite_of_redundant_generators() {
        let g = m(&[&[2, 0], &[0, 2], &[1, 1]]);
        let h = hermite_rows(&g);
        assert_eq!(h.len(), 2);
        assert_eq!(det(&h).abs(), BigInt::from(2));
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        assert_eq!(inertia(&m(&[&[0, 1], &[1, 0]])), (1, 1, 0));
        assert_eq!(inertia(&m(&[&[-2, 1], &[1, -2]])), (0, 2, 0));
    }
}
