//! `N0 = 2N^v / 2N` with `q(x) = x^2/4 mod 2`, split into the `M`-part and the
//! `E`-part, and the twelve-point space used for tangent computations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::field::ExtensionField;
use super::linalg::{Subspace, Vector};
use super::quadratic::{solve_affine, F2QuadraticSpace};
use crate::error::{Error, Result};
use crate::lattice::builders::{e_two, m_coords, m_lattice, M_RANK};
use crate::lattice::{matrix, GramLattice, IntVector};

/// One orthogonal block: its rank, offset in the ambient coordinates and the
/// rows of `U G` at the positions with elementary divisor 2.
#[derive(Debug, Clone)]
struct Block {
    offset: usize,
    rank: usize,
    coordinate_rows: Vec<Vec<BigInt>>,
    basis: Vec<IntVector>,
}

impl Block {
    fn new(l: &GramLattice, offset: usize) -> Result<Self> {
        let s = matrix::smith(l.gram());
        let ug = matrix::mul(&s.u, l.gram());
        let mut coordinate_rows = Vec::new();
        let mut basis = Vec::new();
        for (k, d) in s.diagonal.iter().enumerate() {
            let d = d.magnitude().to_u64().unwrap_or(u64::MAX);
            match d {
                1 => {}
                2 => {
                    coordinate_rows.push(ug[k].clone());
                    basis.push(s.v.iter().map(|row| row[k].to_i64().expect("small")).collect());
                }
                _ => return Err(Error::DiscriminantForm(format!("elementary divisor {d} is not 1 or 2"))),
            }
        }
        Ok(Block { offset, rank: l.rank(), coordinate_rows, basis })
    }
}

/// `N0` for an orthogonal sum of 2-elementary blocks.
#[derive(Debug, Clone)]
pub struct DiscriminantSpace {
    lattice: GramLattice,
    blocks: Vec<Block>,
    space: F2QuadraticSpace,
    lifts: Vec<IntVector>,
}

/// JSON summary of `N0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantSummary {
    pub dim: usize,
    pub m_part_dim: usize,
    pub e_part_dim: usize,
    pub arf: u32,
    pub witt_index: usize,
    pub parts_orthogonal: bool,
    pub e_pair_q_values: Vec<u32>,
}

impl DiscriminantSpace {
    /// The space for `blocks[0] + blocks[1] + ...`, in that coordinate order.
    pub fn from_blocks(blocks: &[GramLattice]) -> Result<Self> {
        let mut lattice = blocks[0].clone();
        for b in &blocks[1..] {
            lattice = lattice.direct_sum(b);
        }
        let mut parts = Vec::new();
        let mut offset = 0;
        let mut lifts = Vec::new();
        let n = lattice.rank();
        for b in blocks {
            let block = Block::new(b, offset)?;
            for v in &block.basis {
                let mut x = vec![0i64; n];
                x[offset..offset + b.rank()].copy_from_slice(v);
                lifts.push(x);
            }
            offset += b.rank();
            parts.push(block);
        }
        let dim = lifts.len();
        if dim > 32 {
            return Err(Error::Dimension { expected: 32, got: dim });
        }
        let four = BigInt::from(4);
        let mut bilinear = vec![0u32; dim];
        let mut q_values = 0u32;
        for i in 0..dim {
            let nx = lattice.norm(&lifts[i]);
            if !nx.is_multiple_of(&four) {
                return Err(Error::DiscriminantForm(format!("x^2 = {nx} is not 0 mod 4 on generator {i}")));
            }
            if (nx / &four).is_odd() {
                q_values |= 1 << i;
            }
            for j in 0..dim {
                let xy = lattice.inner(&lifts[i], &lifts[j]);
                if !xy.is_even() {
                    return Err(Error::DiscriminantForm(format!("x.y odd on generators {i}, {j}")));
                }
                if (xy / BigInt::from(2)).is_odd() {
                    bilinear[i] |= 1 << j;
                }
            }
        }
        let space = F2QuadraticSpace::new(bilinear, q_values)?;
        Ok(DiscriminantSpace { lattice, blocks: parts, space, lifts })
    }

    /// `N0` of `N = M + E(2)`: coordinates `0..10` are the `M`-part, `10..20` the `E`-part.
    pub fn n0() -> Result<Self> {
        Self::from_blocks(&[m_lattice(), e_two()])
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn space(&self) -> &F2QuadraticSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Bitmask of the coordinates coming from block `k`.
    pub fn part_mask(&self, k: usize) -> u32 {
        let start: usize = self.blocks[..k].iter().map(|b| b.basis.len()).sum();
        let len = self.blocks[k].basis.len();
        ((1u64 << (start + len)) - (1u64 << start)) as u32
    }

    pub fn part_coords(&self, k: usize) -> Vec<usize> {
        let m = self.part_mask(k);
        (0..self.dim()).filter(|i| (m >> i) & 1 == 1).collect()
    }

    pub fn m_part(&self) -> u32 {
        self.part_mask(0)
    }

    pub fn e_part(&self) -> u32 {
        self.part_mask(1)
    }

    /// Class of an integral vector of `2N^v`; `None` if `x` is not in `2N^v`.
    pub fn coords(&self, x: &[i64]) -> Option<u32> {
        let xb: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
        if matrix::mul_vec(self.lattice.gram(), &xb).iter().any(|v| v.is_odd()) {
            return None;
        }
        let mut out = 0u32;
        let mut bit = 0;
        for b in &self.blocks {
            let part = &xb[b.offset..b.offset + b.rank];
            // (U G x)_k = 2 w_k where x = V w
            for row in &b.coordinate_rows {
                let s: BigInt = row.iter().zip(part).map(|(a, c)| a * c).sum();
                debug_assert!(s.is_even());
                if (s / BigInt::from(2)).is_odd() {
                    out |= 1 << bit;
                }
                bit += 1;
            }
        }
        Some(out)
    }

    /// An integral lift of a class.
    pub fn lift(&self, class: u32) -> IntVector {
        let n = self.lattice.rank();
        let mut x = vec![0i64; n];
        for (i, l) in self.lifts.iter().enumerate() {
            if (class >> i) & 1 == 1 {
                for (a, b) in x.iter_mut().zip(l) {
                    *a += b;
                }
            }
        }
        x
    }

    /// `q` computed from an integral representative: `x^2/4 mod 2`.
    pub fn q_of_vector(&self, x: &[i64]) -> u32 {
        let nx = self.lattice.norm(x);
        debug_assert!((&nx % BigInt::from(4)).is_zero());
        (nx / BigInt::from(4)).mod_floor(&BigInt::from(2)).to_u32().unwrap()
    }

    /// `e_i + e_j` in `N`, `0 <= i < j < 12`.
    pub fn e_pair_vector(&self, i: usize, j: usize) -> IntVector {
        let mut c = vec![0i64; M_RANK];
        c[i] += 1;
        c[j] += 1;
        let mut x = m_coords(&c);
        x.resize(self.lattice.rank(), 0);
        x
    }

    /// The class of `e_i + e_j`.
    pub fn e_pair(&self, i: usize, j: usize) -> u32 {
        self.coords(&self.e_pair_vector(i, j)).expect("e_i + e_j lies in 2N^v")
    }

    /// All 66 classes keyed by `(i, j)`, `i < j`.
    pub fn e_pairs(&self) -> BTreeMap<(usize, usize), u32> {
        let mut out = BTreeMap::new();
        for i in 0..M_RANK {
            for j in i + 1..M_RANK {
                out.insert((i, j), self.e_pair(i, j));
            }
        }
        out
    }

    pub fn extend_scalars(&self, field: ExtensionField) -> ExtendedSpace {
        ExtendedSpace { space: self.space.clone(), field }
    }

    pub fn summary(&self) -> Result<DiscriminantSummary> {
        let (arf, witt_index) = self.space.arf_and_witt()?;
        let m = self.m_part();
        let e = self.e_part();
        let parts_orthogonal = (0..self.dim())
            .filter(|i| (m >> i) & 1 == 1)
            .all(|i| (0..self.dim()).filter(|j| (e >> j) & 1 == 1).all(|j| self.space.b(1 << i, 1 << j) == 0));
        Ok(DiscriminantSummary {
            dim: self.dim(),
            m_part_dim: m.count_ones() as usize,
            e_part_dim: e.count_ones() as usize,
            arf,
            witt_index,
            parts_orthogonal,
            e_pair_q_values: self.e_pairs().values().map(|&v| self.space.q(v)).collect(),
        })
    }

    /// The quadratic space restricted to the coordinates of block `k`.
    pub fn part_space(&self, k: usize) -> F2QuadraticSpace {
        let coords = self.part_coords(k);
        let pack = |v: u32| coords.iter().enumerate().fold(0u32, |acc, (t, &c)| acc | (((v >> c) & 1) << t));
        let bilinear = coords.iter().map(|&c| pack(self.space.bilinear_rows()[c])).collect();
        F2QuadraticSpace::new(bilinear, pack(self.space.q_values())).expect("restriction of an alternating form")
    }
}

/// `N0 (x) k` with the scalar-extended form.
#[derive(Debug, Clone)]
pub struct ExtendedSpace {
    space: F2QuadraticSpace,
    field: ExtensionField,
}

impl ExtendedSpace {
    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn space(&self) -> &F2QuadraticSpace {
        &self.space
    }

    pub fn q(&self, v: &[u32]) -> u32 {
        self.space.q_ext(&self.field, v)
    }

    pub fn b(&self, u: &[u32], v: &[u32]) -> u32 {
        self.space.b_ext(&self.field, u, v)
    }

    /// `q` vanishes on `s`: on a basis and on all pairs of basis vectors.
    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        let rows = s.basis();
        rows.iter().enumerate().all(|(i, u)| self.q(u) == 0 && rows[i + 1..].iter().all(|v| self.b(u, v) == 0))
    }

    /// `b`-orthogonal complement of `s` inside the subspace `within`.
    pub fn orthogonal_within(&self, s: &Subspace, within: &Subspace) -> Subspace {
        let n = self.space.dim();
        // functionals b(row, .) as coefficient vectors
        let funcs: Vec<Vector> = s
            .basis()
            .iter()
            .map(|u| (0..n).map(|j| self.b(u, &super::linalg::unit(n, j))).collect())
            .collect();
        let kernel = kernel(&self.field, &funcs, n);
        kernel.intersect(within)
    }

    pub fn arf_and_witt(&self) -> Result<(u32, usize)> {
        self.space.arf_and_witt_over(&self.field)
    }
}

/// `{z : f.z = 0 for all rows f}` over `k`.
pub fn kernel(field: &ExtensionField, rows: &[Vector], n: usize) -> Subspace {
    if rows.is_empty() {
        return Subspace::whole(*field, n);
    }
    let s = Subspace::span(*field, n, rows);
    let pivots = s.pivots().to_vec();
    let basis: Vec<Vector> = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0; n];
            v[fc] = 1;
            for (r, &p) in s.basis().iter().zip(&pivots) {
                v[p] = r[fc];
            }
            v
        })
        .collect();
    Subspace::span(*field, n, &basis)
}

/// Twelve marked points plus the `E`-part: `k^12 + (E/2E) (x) k`. Vectors of
/// coordinate sum zero in `k^12` map onto the `M`-part of `N0` by
/// `c -> sum c_i e_i`, with kernel spanned by the all-ones vector. The space
/// carries no form; it is used for linear computations only.
#[derive(Debug, Clone)]
pub struct WorkingSpace {
    /// class of `e_i + e_12` for `i < 11`
    images: Vec<u32>,
    /// for each `M`-part coordinate, a preimage in the first 11 coordinates
    section: Vec<u32>,
    m_coords: Vec<usize>,
    e_coords: Vec<usize>,
}

impl WorkingSpace {
    pub const POINTS: usize = M_RANK;

    pub fn new(d: &DiscriminantSpace) -> Result<Self> {
        let images: Vec<u32> = (0..M_RANK - 1).map(|i| d.e_pair(i, M_RANK - 1)).collect();
        let m_coords = d.part_coords(0);
        let e_coords = d.part_coords(1);
        // solve sum_i s_i images[i] = unit(c) for each M-part coordinate c
        let rows: Vec<u32> =
            (0..d.dim()).map(|c| images.iter().enumerate().fold(0u32, |acc, (i, &v)| acc | (((v >> c) & 1) << i))).collect();
        let section = m_coords
            .iter()
            .map(|&c| {
                let rhs: Vec<u32> = (0..d.dim()).map(|r| (r == c) as u32).collect();
                solve_affine(&rows, &rhs, M_RANK - 1).map(|(x, _)| x)
            })
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::DiscriminantForm("the e_i do not span the M-part".into()))?;
        Ok(WorkingSpace { images, section, m_coords, e_coords })
    }

    pub fn dim(&self) -> usize {
        M_RANK + self.e_coords.len()
    }

    /// Image in `N0` of an `F2` vector `c` of even weight on the twelve points.
    pub fn project_bits(&self, c: u32) -> Option<u32> {
        if c.count_ones() % 2 == 1 {
            return None;
        }
        let last = (c >> (M_RANK - 1)) & 1;
        let mut out = 0;
        for i in 0..M_RANK - 1 {
            if ((c >> i) & 1) ^ last == 1 {
                out ^= self.images[i];
            }
        }
        Some(out)
    }

    /// Preimage of a subspace `s` of `N0 (x) k`, inside `k^12 + E (x) k`.
    pub fn preimage(&self, s: &Subspace) -> Subspace {
        let f = *s.field();
        let dim = self.dim();
        let mut rows: Vec<Vector> = Vec::with_capacity(s.dim() + 1);
        for v in s.basis() {
            let mut w = vec![0; dim];
            for (t, &c) in self.m_coords.iter().enumerate() {
                if v[c] == 0 {
                    continue;
                }
                for i in 0..M_RANK - 1 {
                    if (self.section[t] >> i) & 1 == 1 {
                        w[i] ^= v[c];
                    }
                }
            }
            w[M_RANK - 1] = w[..M_RANK - 1].iter().fold(0, |a, b| a ^ b);
            for (t, &c) in self.e_coords.iter().enumerate() {
                w[M_RANK + t] = v[c];
            }
            rows.push(w);
        }
        let mut ones = vec![0; dim];
        ones[..M_RANK].iter_mut().for_each(|x| *x = 1);
        rows.push(ones);
        Subspace::span(f, dim, &rows)
    }

    /// Coordinates of the twelve points.
    pub fn point_coords(&self) -> Vec<usize> {
        (0..M_RANK).collect()
    }
}
