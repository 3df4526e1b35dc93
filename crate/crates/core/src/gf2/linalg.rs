//! Subspaces of `GF(2^m)^n` in reduced row-echelon form.

use serde::{Deserialize, Serialize};

use super::field::{Elem, ExtensionField};

pub type Vector = Vec<Elem>;

/// Reduce `rows` in place to reduced row-echelon form and drop zero rows.
pub fn rref(f: &ExtensionField, rows: &mut Vec<Vector>) -> Vec<usize> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let s = rows[i][c];
                let (a, b) = if i < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&mut lo[i], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&mut hi[0], &lo[r])
                };
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= f.mul(s, *y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A subspace of `k^n` with its canonical echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: ExtensionField,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

/// JSON form: `{ambient_dim, field_degree, rows}` with entries as `m`-bit integers
/// (bit `i` is the coefficient of `x^i`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub field_degree: u32,
    pub rows: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn span(field: ExtensionField, ambient: usize, vectors: &[Vector]) -> Self {
        let mut rows: Vec<Vector> = vectors.to_vec();
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length must equal the ambient dimension");
        }
        let pivots = rref(&field, &mut rows);
        Subspace { field, ambient, rows, pivots }
    }

    pub fn zero(field: ExtensionField, ambient: usize) -> Self {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(field: ExtensionField, ambient: usize) -> Self {
        let rows: Vec<Vector> = (0..ambient).map(|i| unit(ambient, i)).collect();
        Self::span(field, ambient, &rows)
    }

    /// Span of `F2` vectors given as bitmasks.
    pub fn from_bits(field: ExtensionField, ambient: usize, bits: &[u32]) -> Self {
        let rows: Vec<Vector> = bits.iter().map(|&b| (0..ambient).map(|i| (b >> i) & 1).collect()).collect();
        Self::span(field, ambient, &rows)
    }

    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p] != 0 {
                let s = w[p];
                for (x, y) in w.iter_mut().zip(r) {
                    *x ^= self.field.mul(s, *y);
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Self::span(self.field, self.ambient, &v)
    }

    /// Zassenhaus: reduce `[u | u]` and `[w | 0]`; rows with zero left half
    /// span the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let n = self.ambient;
        let mut rows: Vec<Vector> = Vec::with_capacity(self.dim() + other.dim());
        for u in &self.rows {
            let mut r = u.clone();
            r.extend_from_slice(u);
            rows.push(r);
        }
        for w in &other.rows {
            let mut r = w.clone();
            r.extend(std::iter::repeat(0).take(n));
            rows.push(r);
        }
        rref(&self.field, &mut rows);
        let inter: Vec<Vector> =
            rows.into_iter().filter(|r| r[..n].iter().all(|&x| x == 0)).map(|r| r[n..].to_vec()).collect();
        Self::span(self.field, n, &inter)
    }

    /// Coefficient-wise Frobenius; the result of squaring an echelon basis is echelon.
    pub fn frobenius(&self) -> Subspace {
        let rows: Vec<Vector> = self.rows.iter().map(|r| r.iter().map(|&x| self.field.square(x)).collect()).collect();
        Subspace { field: self.field, ambient: self.ambient, rows, pivots: self.pivots.clone() }
    }

    pub fn frobenius_power(&self, k: u32) -> Subspace {
        (0..k).fold(self.clone(), |s, _| s.frobenius())
    }

    /// `S_inf = S n F(S) n F^2(S) n ...`, the largest `F`-stable subspace of `S`.
    pub fn frobenius_core(&self) -> Subspace {
        let mut t = self.clone();
        loop {
            let next = t.intersect(&t.frobenius());
            if next.dim() == t.dim() {
                return t;
            }
            t = next;
        }
    }

    /// The largest `F2`-rational subspace, as an `F2` basis (bitmasks). The echelon
    /// basis of an `F`-stable space is fixed by squaring, hence has entries in `F2`.
    pub fn rational_part(&self) -> Vec<u32> {
        let core = self.frobenius_core();
        core.rows
            .iter()
            .map(|r| {
                r.iter().enumerate().fold(0u32, |acc, (i, &x)| {
                    assert!(x <= 1, "F-stable echelon basis must be rational");
                    acc | (x << i)
                })
            })
            .collect()
    }

    /// Restrict vectors to the listed coordinates and span the images.
    pub fn project(&self, coords: &[usize]) -> Subspace {
        let rows: Vec<Vector> = self.rows.iter().map(|r| coords.iter().map(|&c| r[c]).collect()).collect();
        Self::span(self.field, coords.len(), &rows)
    }

    /// Vectors of the subspace supported on `coords` (others zero).
    pub fn restrict_to(&self, coords: &[usize]) -> Subspace {
        let support: Vec<Vector> = coords.iter().map(|&c| unit(self.ambient, c)).collect();
        self.intersect(&Self::span(self.field, self.ambient, &support))
    }

    /// Change the field to an extension of the same prime field, for rational subspaces.
    pub fn with_field(&self, field: ExtensionField) -> Subspace {
        assert!(self.rows.iter().flatten().all(|&x| x <= 1), "only rational subspaces can be transported");
        Subspace { field, ambient: self.ambient, rows: self.rows.clone(), pivots: self.pivots.clone() }
    }

    pub fn to_json(&self) -> SubspaceJson {
        SubspaceJson { ambient_dim: self.ambient, field_degree: self.field.degree(), rows: self.rows.clone() }
    }

    pub fn from_json(j: &SubspaceJson) -> crate::error::Result<Self> {
        let f = ExtensionField::new(j.field_degree)?;
        for r in &j.rows {
            if r.len() != j.ambient_dim {
                return Err(crate::error::Error::Dimension { expected: j.ambient_dim, got: r.len() });
            }
        }
        Ok(Self::span(f, j.ambient_dim, &j.rows))
    }
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Rank of a list of vectors.
pub fn rank(f: &ExtensionField, vectors: &[Vector]) -> usize {
    let mut rows = vectors.to_vec();
    rref(f, &mut rows).len()
}
