//! Quadratic spaces over `F2`, with vectors packed into `u32` bitmasks.

use rand::Rng;
use serde::Serialize;

use super::field::{Elem, ExtensionField};
use crate::error::{Error, Result};

/// Largest dimension representable by the bitmask encoding.
pub const MAX_DIM: usize = 32;

fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

/// A quadratic function `q` on `F2^dim` refining the alternating form `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct F2QuadraticSpace {
    dim: usize,
    /// row `i` has bit `j` set iff `b(e_i, e_j) = 1`
    bilinear: Vec<u32>,
    /// bit `i` is `q(e_i)`
    q_values: u32,
}

impl F2QuadraticSpace {
    pub fn new(bilinear: Vec<u32>, q_values: u32) -> Result<Self> {
        let dim = bilinear.len();
        if dim > MAX_DIM {
            return Err(Error::Dimension { expected: MAX_DIM, got: dim });
        }
        for i in 0..dim {
            if (bilinear[i] >> i) & 1 == 1 {
                return Err(Error::DiscriminantForm(format!("b(e_{i}, e_{i}) != 0")));
            }
            for j in 0..dim {
                if (bilinear[i] >> j) & 1 != (bilinear[j] >> i) & 1 {
                    return Err(Error::DiscriminantForm(format!("b not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(F2QuadraticSpace { dim, bilinear, q_values })
    }

    /// The hyperbolic plane `q(e) = q(f) = 0`, `b(e, f) = 1`.
    pub fn hyperbolic_plane() -> Self {
        F2QuadraticSpace::new(vec![0b10, 0b01], 0).unwrap()
    }

    /// The anisotropic plane `q(e) = q(f) = b(e, f) = 1`.
    pub fn anisotropic_plane() -> Self {
        F2QuadraticSpace::new(vec![0b10, 0b01], 0b11).unwrap()
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        let s = self.dim;
        let mut bilinear = self.bilinear.clone();
        bilinear.extend(other.bilinear.iter().map(|r| r << s));
        F2QuadraticSpace::new(bilinear, self.q_values | (other.q_values << s)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bilinear_rows(&self) -> &[u32] {
        &self.bilinear
    }

    pub fn q_values(&self) -> u32 {
        self.q_values
    }

    pub fn b(&self, u: u32, v: u32) -> u32 {
        let mut acc = 0;
        let mut x = u;
        while x != 0 {
            let i = x.trailing_zeros() as usize;
            acc ^= parity(self.bilinear[i] & v);
            x &= x - 1;
        }
        acc
    }

    pub fn q(&self, v: u32) -> u32 {
        let mut acc = parity(v & self.q_values);
        let mut x = v;
        while x != 0 {
            let i = x.trailing_zeros();
            // pairs (j, i) with j < i
            acc ^= parity(self.bilinear[i as usize] & v & ((1u32 << i) - 1));
            x &= x - 1;
        }
        acc
    }

    /// `q` extended to `k^dim`: `sum z_i^2 q(e_i) + sum_{i<j} z_i z_j b(e_i, e_j)`.
    pub fn q_ext(&self, f: &ExtensionField, z: &[Elem]) -> Elem {
        let mut acc = 0;
        for i in 0..self.dim {
            if z[i] == 0 {
                continue;
            }
            if (self.q_values >> i) & 1 == 1 {
                acc ^= f.square(z[i]);
            }
            for j in i + 1..self.dim {
                if (self.bilinear[i] >> j) & 1 == 1 {
                    acc ^= f.mul(z[i], z[j]);
                }
            }
        }
        acc
    }

    /// `b` extended bilinearly to `k^dim`.
    pub fn b_ext(&self, f: &ExtensionField, u: &[Elem], v: &[Elem]) -> Elem {
        let mut acc = 0;
        for i in 0..self.dim {
            if u[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                if (self.bilinear[i] >> j) & 1 == 1 {
                    acc ^= f.mul(u[i], v[j]);
                }
            }
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        bit_rank(&self.bilinear) == self.dim
    }

    /// Arf invariant and Witt index over `F2`, by symplectic reduction.
    pub fn arf_and_witt(&self) -> Result<(u32, usize)> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let mut rest: Vec<u32> = (0..self.dim).map(|i| 1u32 << i).collect();
        let mut arf = 0;
        while let Some(e) = rest.pop() {
            let k = rest.iter().position(|&v| self.b(e, v) == 1).expect("nondegenerate");
            let f = rest.swap_remove(k);
            arf ^= self.q(e) & self.q(f);
            for v in rest.iter_mut() {
                *v ^= if self.b(*v, f) == 1 { e } else { 0 } ^ if self.b(*v, e) == 1 { f } else { 0 };
            }
        }
        let n = self.dim / 2;
        Ok((arf, if arf == 0 { n } else { n - 1 }))
    }

    /// Arf invariant and Witt index after extending scalars to `GF(2^m)`: the
    /// Arf class of a rational form survives iff `Tr(1) = m mod 2` is nonzero.
    pub fn arf_and_witt_over(&self, f: &ExtensionField) -> Result<(u32, usize)> {
        let (arf, _) = self.arf_and_witt()?;
        let arf = arf & f.trace(1);
        let n = self.dim / 2;
        Ok((arf, if arf == 0 { n } else { n - 1 }))
    }

    /// Nonzero vectors with `q = 0`.
    pub fn isotropic_vectors(&self) -> Vec<u32> {
        (1u32..(1u32 << self.dim)).filter(|&v| self.q(v) == 0).collect()
    }

    /// Images of the unit vectors under a random isometry `self -> target`
    /// extending the partial map. Each step picks a random image satisfying the
    /// constraints so far; Witt's theorem guarantees one exists whenever the
    /// two spaces are isometric.
    pub fn extend_isometry<R: Rng + ?Sized>(
        &self,
        target: &F2QuadraticSpace,
        partial: &[(u32, u32)],
        rng: &mut R,
    ) -> Result<Vec<u32>> {
        if target.dim != self.dim {
            return Err(Error::NotIsometric("dimensions differ".into()));
        }
        let xs: Vec<u32> = partial.iter().map(|p| p.0).collect();
        let ys: Vec<u32> = partial.iter().map(|p| p.1).collect();
        if bit_rank(&xs) != xs.len() || bit_rank(&ys) != ys.len() {
            return Err(Error::NotIsometric("partial map is not injective".into()));
        }
        for (i, &(x, y)) in partial.iter().enumerate() {
            if self.q(x) != target.q(y) {
                return Err(Error::NotIsometric(format!("q differs on pair {i}")));
            }
            for &(x2, y2) in &partial[i + 1..] {
                if self.b(x, x2) != target.b(y, y2) {
                    return Err(Error::NotIsometric(format!("b differs on pair {i}")));
                }
            }
        }
        // basis of the source starting with the partial domain
        let mut basis = xs.clone();
        for i in 0..self.dim {
            if basis.len() == self.dim {
                break;
            }
            let mut cand = basis.clone();
            cand.push(1 << i);
            if bit_rank(&cand) == cand.len() {
                basis = cand;
            }
        }
        let mut images = ys.clone();
        for idx in partial.len()..self.dim {
            let v = basis[idx];
            let w = target
                .find_image(&basis[..idx], &images, v, self, rng)
                .ok_or_else(|| Error::NotIsometric("no extension exists".into()))?;
            images.push(w);
        }
        // convert from the adapted basis to unit vectors
        let inv = bit_inverse(&basis, self.dim).expect("basis");
        Ok((0..self.dim)
            .map(|i| {
                let coeffs = inv[i];
                (0..self.dim).filter(|&k| (coeffs >> k) & 1 == 1).fold(0, |acc, k| acc ^ images[k])
            })
            .collect())
    }

    fn find_image<R: Rng + ?Sized>(
        &self,
        src_done: &[u32],
        dst_done: &[u32],
        v: u32,
        src: &F2QuadraticSpace,
        rng: &mut R,
    ) -> Option<u32> {
        // w with b(w, y_i) = b(v, x_i): rows are the functionals b(., y_i)
        let rows: Vec<u32> = dst_done.iter().map(|&y| (0..self.dim).fold(0, |acc, j| acc | (self.b(1 << j, y) << j))).collect();
        let rhs: Vec<u32> = src_done.iter().map(|&x| src.b(v, x)).collect();
        let (w0, kernel) = solve_affine(&rows, &rhs, self.dim)?;
        let target_q = src.q(v);
        let ok = |w: u32| -> bool {
            let mut cand = dst_done.to_vec();
            cand.push(w);
            self.q(w) == target_q && bit_rank(&cand) == cand.len()
        };
        for _ in 0..256 {
            let mut w = w0;
            for &k in &kernel {
                if rng.gen::<bool>() {
                    w ^= k;
                }
            }
            if ok(w) {
                return Some(w);
            }
        }
        (0u64..(1u64 << kernel.len())).map(|c| {
            (0..kernel.len()).filter(|&i| (c >> i) & 1 == 1).fold(w0, |acc, i| acc ^ kernel[i])
        }).find(|&w| ok(w))
    }

    /// Check that `images` (of the unit vectors) define an isometry onto `target`.
    pub fn is_isometry(&self, target: &F2QuadraticSpace, images: &[u32]) -> bool {
        images.len() == self.dim
            && bit_rank(images) == self.dim
            && (0..self.dim).all(|i| {
                target.q(images[i]) == self.q(1 << i)
                    && (0..self.dim).all(|j| target.b(images[i], images[j]) == self.b(1 << i, 1 << j))
            })
    }
}

/// An isometry of `space` extending the rational partial map, as images of
/// the unit vectors. Being rational it is also an isometry of `space (x) k`.
pub fn witt_extend<R: Rng + ?Sized>(space: &F2QuadraticSpace, partial: &[(u32, u32)], rng: &mut R) -> Result<Vec<u32>> {
    space.extend_isometry(space, partial, rng)
}

/// Apply a linear map given by images of unit vectors.
pub fn apply_map(images: &[u32], v: u32) -> u32 {
    let mut acc = 0;
    let mut x = v;
    while x != 0 {
        acc ^= images[x.trailing_zeros() as usize];
        x &= x - 1;
    }
    acc
}

/// Rank of a set of bitmask vectors.
pub fn bit_rank(vs: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vs {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Echelon basis (by leading bit) of the span, with `reduce` for membership.
#[derive(Debug, Clone, Default)]
pub struct BitSpan {
    basis: Vec<u32>,
}

impl BitSpan {
    pub fn new() -> Self {
        BitSpan { basis: Vec::new() }
    }

    pub fn reduce(&self, v: u32) -> u32 {
        let mut x = v;
        for &b in &self.basis {
            x = x.min(x ^ b);
        }
        x
    }

    /// Insert `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: u32) -> bool {
        let x = self.reduce(v);
        if x == 0 {
            return false;
        }
        self.basis.push(x);
        self.basis.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// All elements of the span.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = vec![0u32];
        for &b in &self.basis {
            let more: Vec<u32> = out.iter().map(|x| x ^ b).collect();
            out.extend(more);
        }
        out
    }
}

/// Solve `parity(rows[i] & w) = rhs[i]`; returns a particular solution and a kernel basis.
pub fn solve_affine(rows: &[u32], rhs: &[u32], dim: usize) -> Option<(u32, Vec<u32>)> {
    let mut m: Vec<(u32, u32)> = rows.iter().zip(rhs).map(|(&r, &c)| (r, c)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| (m[i].0 >> c) & 1 == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && (m[i].0 >> c) & 1 == 1 {
                m[i].0 ^= m[r].0;
                m[i].1 ^= m[r].1;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|x| x.1 == 1) {
        return None;
    }
    let mut w0 = 0u32;
    for (i, &c) in pivots.iter().enumerate() {
        w0 |= m[i].1 << c;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = 1u32 << fc;
            for (i, &c) in pivots.iter().enumerate() {
                if (m[i].0 >> fc) & 1 == 1 {
                    v |= 1 << c;
                }
            }
            v
        })
        .collect();
    Some((w0, kernel))
}

/// Rows `inv[i]` with `e_i = sum_k (inv[i])_k basis[k]`.
pub fn bit_inverse(basis: &[u32], dim: usize) -> Option<Vec<u32>> {
    // solve for each unit vector: sum_k c_k basis[k] = e_i, i.e. columns are basis vectors
    let rows: Vec<u32> = (0..dim).map(|j| (0..basis.len()).fold(0, |acc, k| acc | (((basis[k] >> j) & 1) << k))).collect();
    (0..dim)
        .map(|i| {
            let rhs: Vec<u32> = (0..dim).map(|j| (i == j) as u32).collect();
            solve_affine(&rows, &rhs, basis.len()).map(|(x, _)| x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// The value taken by `q` on the majority of vectors.
    fn democratic_arf(s: &F2QuadraticSpace) -> u32 {
        let zeros = (0u32..(1 << s.dim())).filter(|&v| s.q(v) == 0).count();
        (zeros < (1 << (s.dim() - 1))) as u32
    }

    #[test]
    fn planes() {
        assert_eq!(F2QuadraticSpace::hyperbolic_plane().arf_and_witt().unwrap(), (0, 1));
        assert_eq!(F2QuadraticSpace::anisotropic_plane().arf_and_witt().unwrap(), (1, 0));
        let two = F2QuadraticSpace::anisotropic_plane().orthogonal_sum(&F2QuadraticSpace::anisotropic_plane());
        assert_eq!(two.arf_and_witt().unwrap(), (0, 2));
        assert_eq!(democratic_arf(&two), 0);
        let f4 = ExtensionField::new(2).unwrap();
        assert_eq!(F2QuadraticSpace::anisotropic_plane().arf_and_witt_over(&f4).unwrap(), (0, 1));
        assert_eq!(F2QuadraticSpace::new(vec![0], 0).unwrap().arf_and_witt(), Err(Error::DegenerateForm));
    }

    #[test]
    fn symplectic_arf_matches_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let n = 6;
            let mut bil = vec![0u32; n];
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen::<bool>() {
                        bil[i] |= 1 << j;
                        bil[j] |= 1 << i;
                    }
                }
            }
            let s = F2QuadraticSpace::new(bil, rng.gen::<u32>() & 0b111111).unwrap();
            if s.is_nondegenerate() {
                assert_eq!(s.arf_and_witt().unwrap().0, democratic_arf(&s));
            }
        }
    }

    #[test]
    fn random_isometries() {
        let s = F2QuadraticSpace::hyperbolic_plane()
            .orthogonal_sum(&F2QuadraticSpace::hyperbolic_plane())
            .orthogonal_sum(&F2QuadraticSpace::anisotropic_plane());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let id: Vec<u32> = (0..6).map(|i| 1 << i).collect();
        let all: Vec<(u32, u32)> = id.iter().map(|&x| (x, x)).collect();
        assert_eq!(s.extend_isometry(&s, &all, &mut rng).unwrap(), id);
        for _ in 0..20 {
            let g = s.extend_isometry(&s, &[], &mut rng).unwrap();
            assert!(s.is_isometry(&s, &g));
        }
        // send e_1 (q = 0) to e_1 + e_2 (q = 1): refused
        assert!(s.extend_isometry(&s, &[(0b1, 0b11)], &mut rng).is_err());
        let g = s.extend_isometry(&s, &[(0b110000, 0b110001)], &mut rng).unwrap();
        assert!(s.is_isometry(&s, &g));
        assert_eq!(apply_map(&g, 0b110000), 0b110001);
    }
}
