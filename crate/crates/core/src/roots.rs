//! Dynkin catalogs, the labelled E10 diagram, fundamental weights and A-vectors.
//!
//! Node conventions:
//! - `A_n`: a chain `1 - 2 - ... - n`.
//! - `D_n`: a chain `1 - ... - (n-2)` with the fork `n-1`, `n` attached to `n-2`.
//! - `E_6, E_7, E_8`: the chain `1 - 2 - 3 - 5 - 6 - ...` with node `4` attached to `3`.
//! - `E10`: `a1 - a2 - a4 - a5 - ... - a10` with `a3` attached to the branch node `a4`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate, matrix, GramLattice, IntVector, DEFAULT_BOX, MAX_BOX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
    E10,
}

/// A connected simply laced Dynkin type, serialized by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct DynkinType {
    pub family: Family,
    pub rank: usize,
}

impl DynkinType {
    pub const fn a(n: usize) -> Self {
        DynkinType { family: Family::A, rank: n }
    }
    pub const fn d(n: usize) -> Self {
        DynkinType { family: Family::D, rank: n }
    }
    pub const fn e(n: usize) -> Self {
        DynkinType { family: Family::E, rank: n }
    }
    pub const fn e10() -> Self {
        DynkinType { family: Family::E10, rank: 10 }
    }

    pub fn is_legal(&self) -> bool {
        match self.family {
            Family::A => self.rank >= 1,
            Family::D => self.rank >= 4,
            Family::E => (6..=8).contains(&self.rank),
            Family::E10 => self.rank == 10,
        }
    }

    fn check(&self) -> Result<()> {
        if self.is_legal() {
            Ok(())
        } else {
            Err(Error::IllegalType(self.to_string()))
        }
    }

    pub fn diagram(&self) -> Result<LabelledDiagram> {
        self.check()?;
        let n = self.rank;
        let mut edges = Vec::new();
        match self.family {
            Family::A => edges.extend((1..n).map(|i| (i, i + 1))),
            Family::D => {
                edges.extend((1..n - 2).map(|i| (i, i + 1)));
                edges.push((n - 2, n - 1));
                edges.push((n - 2, n));
            }
            Family::E => {
                edges.extend([(1, 2), (2, 3), (3, 4), (3, 5)]);
                edges.extend((5..n).map(|i| (i, i + 1)));
            }
            Family::E10 => {
                edges.extend([(1, 2), (2, 4), (3, 4), (4, 5)]);
                edges.extend((5..10).map(|i| (i, i + 1)));
            }
        }
        Ok(LabelledDiagram { rank: n, edges })
    }

    /// Parse names like `A1`, `D4`, `E8`, `E10`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::IllegalType(s.to_owned());
        let (head, tail) = s.split_at(1.min(s.len()));
        let n: usize = tail.parse().map_err(|_| bad())?;
        let t = match (head, n) {
            ("E", 10) => DynkinType::e10(),
            ("A", _) => DynkinType::a(n),
            ("D", _) => DynkinType::d(n),
            ("E", _) => DynkinType::e(n),
            _ => return Err(bad()),
        };
        t.check()?;
        Ok(t)
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            Family::A => 'A',
            Family::D => 'D',
            Family::E | Family::E10 => 'E',
        };
        write!(f, "{c}{}", self.rank)
    }
}

impl From<DynkinType> for String {
    fn from(t: DynkinType) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for DynkinType {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        DynkinType::parse(&s)
    }
}

/// Nodes `1..=rank` and unordered edges `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledDiagram {
    pub rank: usize,
    pub edges: Vec<(usize, usize)>,
}

impl LabelledDiagram {
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let mut g = vec![vec![0i64; self.rank]; self.rank];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -2;
        }
        for &(i, j) in &self.edges {
            g[i - 1][j - 1] = 1;
            g[j - 1][i - 1] = 1;
        }
        g
    }
}

/// Negated Cartan matrix of `t`, labelled by the type name.
pub fn build_root_lattice(t: DynkinType) -> Result<GramLattice> {
    let g = t.diagram()?.gram();
    GramLattice::from_i64(&g, Some(&t.to_string()))
}

/// `E = E10(-1)` with the labelled basis of simple roots.
pub fn e10() -> GramLattice {
    build_root_lattice(DynkinType::e10()).expect("E10 is a legal type")
}

/// Coefficients in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    pub coefficients: Vec<i64>,
}

/// Dual basis `w_i . a_j = delta_ij`, which must be integral.
pub fn fundamental_weights(l: &GramLattice) -> Result<Vec<WeightVector>> {
    let inv = matrix::inverse(l.gram()).ok_or(Error::Degenerate)?;
    let mut out = Vec::with_capacity(l.rank());
    for (i, row) in inv.iter().enumerate() {
        let mut coefficients = Vec::with_capacity(row.len());
        for x in row {
            if !x.is_integer() {
                return Err(Error::NonIntegralWeight(i + 1));
            }
            coefficients.push(x.to_integer().to_i64().expect("small weight"));
        }
        out.push(WeightVector { coefficients });
    }
    Ok(out)
}

/// Matrix of pairings `w_i . w_j`.
pub fn weight_pairings(l: &GramLattice, weights: &[WeightVector]) -> Vec<Vec<i64>> {
    weights
        .iter()
        .map(|u| weights.iter().map(|v| l.inner(&u.coefficients, &v.coefficients).to_i64().unwrap()).collect())
        .collect()
}

/// Self-pairings of the E10 fundamental weights, keyed by node (1-based).
pub fn weight_norm_table() -> Vec<(usize, i64)> {
    let e = e10();
    let w = fundamental_weights(&e).expect("E10 is unimodular");
    w.iter().enumerate().map(|(i, v)| (i + 1, e.norm(&v.coefficients).to_i64().unwrap())).collect()
}

/// A dominant weight `H = sum n_i w_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominantWeight {
    pub multiplicities: Vec<u64>,
    pub coefficients: Vec<i64>,
}

/// All dominant `H` in E10 with `H^2 = 4`.
///
/// Every pairing `w_i . w_j` is nonnegative, so `H^2 >= n_i^2 w_i^2` and partial
/// sums only grow. For a node with `w_i^2 = 0` the bound comes from its smallest
/// pairing with another weight, which must then be positive.
pub fn enumerate_dominant_norm4() -> Vec<DominantWeight> {
    const TARGET: i64 = 4;
    let e = e10();
    let w = fundamental_weights(&e).expect("E10 is unimodular");
    let p = weight_pairings(&e, &w);
    let n = p.len();
    assert!(p.iter().flatten().all(|&x| x >= 0), "weight pairings must be nonnegative");
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            if p[i][i] > 0 {
                (0..).take_while(|k| k * k * p[i][i] <= TARGET).last().unwrap()
            } else {
                let m = (0..n).filter(|&j| j != i).map(|j| p[i][j]).min().unwrap();
                assert!(m > 0, "isotropic weight with a zero pairing");
                // n_i > 0 with another n_j > 0 gives H^2 >= 2 n_i m
                TARGET / (2 * m)
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut mult = vec![0i64; n];
    fn rec(i: usize, value: i64, mult: &mut Vec<i64>, p: &[Vec<i64>], bounds: &[i64], out: &mut Vec<Vec<i64>>) {
        if value > 4 {
            return;
        }
        if i == p.len() {
            if value == 4 {
                out.push(mult.clone());
            }
            return;
        }
        for k in 0..=bounds[i] {
            mult[i] = k;
            let mut add = k * k * p[i][i];
            for j in 0..i {
                add += 2 * k * mult[j] * p[i][j];
            }
            rec(i + 1, value + add, mult, p, bounds, out);
        }
        mult[i] = 0;
    }
    let mut found = Vec::new();
    rec(0, 0, &mut mult, &p, &bounds, &mut found);
    for m in found {
        let mut coefficients = vec![0i64; n];
        for (k, wk) in m.iter().zip(&w) {
            for (c, x) in coefficients.iter_mut().zip(&wk.coefficients) {
                *c += k * x;
            }
        }
        out.push(DominantWeight { multiplicities: m.iter().map(|&x| x as u64).collect(), coefficients });
    }
    out
}

/// `-c_1` of the lifted foliation: a sum of orthogonal positive roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AVector {
    #[serde(rename = "type")]
    pub ty: DynkinType,
    pub coefficients: Vec<i64>,
}

/// Tabulated A-vectors for `A1`, `D_2n`, `E7`, `E8`.
pub fn a_vector(t: DynkinType) -> Result<AVector> {
    let coefficients = match (t.family, t.rank) {
        (Family::A, 1) => vec![1],
        (Family::E, 7) => vec![2, 6, 8, 5, 7, 4, 3],
        (Family::E, 8) => vec![4, 10, 14, 8, 12, 8, 6, 2],
        (Family::D, r) if r >= 4 && r % 2 == 0 => {
            let n = (r / 2) as i64;
            let mut v: Vec<i64> = (1..n).flat_map(|k| [2 * k, 2 * k]).collect();
            v.extend([n, n]);
            v
        }
        _ => return Err(Error::NoAVector(t.to_string())),
    };
    Ok(AVector { ty: t, coefficients })
}

/// All coordinates even, so that `A/2` lies in the root lattice.
pub fn is_even_in_lattice(v: &AVector) -> bool {
    v.coefficients.iter().all(|c| c % 2 == 0)
}

/// Pairwise orthogonal roots summing to the A-vector, by backtracking over the
/// roots `b` with `A.b = -2` (every summand of an orthogonal decomposition
/// satisfies this). `variant = 0` orders candidates by coefficient sum
/// descending; other variants use a seeded shuffle.
pub fn orthogonal_root_decomposition(t: DynkinType, variant: u64) -> Result<Vec<IntVector>> {
    let l = build_root_lattice(t)?;
    let a = a_vector(t)?.coefficients;
    let mut cands: Vec<IntVector> = l
        .roots()?
        .into_iter()
        .filter(|r| l.inner(&a, r) == BigInt::from(-2))
        .collect();
    order_candidates(&mut cands, variant);
    let frame = find_frame(&l, &cands, t.rank).ok_or_else(|| Error::NoDecomposition(t.to_string()))?;
    let sum = frame.iter().fold(vec![0i64; t.rank], |acc, r| acc.iter().zip(r).map(|(x, y)| x + y).collect());
    if sum != a {
        return Err(Error::NoDecomposition(t.to_string()));
    }
    Ok(frame)
}

/// Any maximal set of `rank` pairwise orthogonal roots, signs included.
/// Different variants explore the roots in different orders.
pub fn orthogonal_frame(t: DynkinType, variant: u64) -> Result<Vec<IntVector>> {
    let l = build_root_lattice(t)?;
    let mut cands = l.roots()?;
    order_candidates(&mut cands, variant);
    find_frame(&l, &cands, t.rank).ok_or_else(|| Error::NoDecomposition(t.to_string()))
}

fn order_candidates(cands: &mut [IntVector], variant: u64) {
    cands.sort_by(|x, y| {
        let sx: i64 = x.iter().sum();
        let sy: i64 = y.iter().sum();
        sy.cmp(&sx).then_with(|| y.cmp(x))
    });
    if variant != 0 {
        cands.shuffle(&mut ChaCha8Rng::seed_from_u64(variant));
    }
}

fn find_frame(l: &GramLattice, cands: &[IntVector], size: usize) -> Option<Vec<IntVector>> {
    let n = cands.len();
    let ortho: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| l.inner(&cands[i], &cands[j]).is_zero()).collect()).collect();
    fn rec(start: usize, chosen: &mut Vec<usize>, size: usize, ortho: &[Vec<bool>]) -> bool {
        if chosen.len() == size {
            return true;
        }
        for i in start..ortho.len() {
            if chosen.iter().all(|&c| ortho[c][i]) {
                chosen.push(i);
                if rec(i + 1, chosen, size, ortho) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    rec(0, &mut chosen, size, &ortho).then(|| chosen.iter().map(|&i| cands[i].clone()).collect())
}

/// Pairs `(d1^2, d2^2)` with `d1` in `M^v`, `d2` in `E(2)^v` nonzero,
/// `d1^2 + d2^2 = -2`, `d2^2` integral, `d1^2 <= 0 > d2^2`, and both norms
/// represented. Candidates run over half-integers so that the integrality
/// filter is exercised.
pub fn good_subchamber_cases() -> BTreeSet<(i64, i64)> {
    let m = crate::lattice::builders::m_lattice();
    let e2 = crate::lattice::builders::e_two();
    let mut out = BTreeSet::new();
    for k in 1..=4i64 {
        // d2^2 = -k/2
        let d2 = BigRational::new((-k).into(), 2.into());
        let d1 = BigRational::from_integer((-2).into()) - &d2;
        if !d2.is_integer() {
            continue;
        }
        if dual_represents(&m, &d1) && dual_represents(&e2, &d2) {
            out.insert((d1.to_integer().to_i64().unwrap(), d2.to_integer().to_i64().unwrap()));
        }
    }
    out
}

/// Whether the dual lattice represents `norm` (the zero vector counts for 0).
/// Definite lattices are searched completely; indefinite ones within the box.
pub fn dual_represents(l: &GramLattice, norm: &BigRational) -> bool {
    let inv = matrix::inverse(l.gram()).expect("nondegenerate");
    let exp = l
        .discriminant_group()
        .elementary_divisors
        .last()
        .cloned()
        .unwrap_or_else(|| BigInt::from(1));
    // exp * G^-1 is the integral Gram of the dual scaled by exp
    let scaled: Vec<Vec<BigInt>> = inv
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(exp.clone())).to_integer()).collect())
        .collect();
    let t = norm * BigRational::from_integer(exp.clone());
    if !t.is_integer() {
        return false;
    }
    let t = t.to_integer();
    let prob = enumerate::QuadraticProblem::homogeneous(&scaled);
    if let Some(found) = enumerate::solve_definite_with(&prob, &t, &mut |_| false) {
        return found;
    }
    let mut bound = DEFAULT_BOX;
    loop {
        if enumerate::search_indefinite(&prob, &t, bound, &mut |_| false) {
            return true;
        }
        if bound >= MAX_BOX {
            return false;
        }
        bound *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagrams_and_determinants() {
        assert_eq!(build_root_lattice(DynkinType::a(1)).unwrap().gram()[0][0], BigInt::from(-2));
        assert_eq!(build_root_lattice(DynkinType::d(4)).unwrap().det(), BigInt::from(4));
        let e = e10();
        assert_eq!(e.det(), BigInt::from(-1));
        assert_eq!(e.signature(), (1, 9));
        assert!(DynkinType::parse("E9").is_err());
        assert_eq!(build_root_lattice(DynkinType::d(3)), Err(Error::IllegalType("D3".into())));
    }

    #[test]
    fn e10_weights() {
        let w = fundamental_weights(&e10()).unwrap();
        assert_eq!(w[0].coefficients, vec![4, 9, 7, 14, 12, 10, 8, 6, 4, 2]);
        assert_eq!(w[9].coefficients, vec![2, 4, 3, 6, 5, 4, 3, 2, 1, 0]);
        let e = e10();
        for (i, wi) in w.iter().enumerate() {
            for j in 0..10 {
                let mut a = vec![0; 10];
                a[j] = 1;
                assert_eq!(e.inner(&wi.coefficients, &a), BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn wrong_adjacency_gives_nonintegral_weights() {
        // A2 has determinant 3
        let l = build_root_lattice(DynkinType::a(2)).unwrap();
        assert_eq!(fundamental_weights(&l), Err(Error::NonIntegralWeight(1)));
    }

    #[test]
    fn norm_table() {
        let t = weight_norm_table();
        assert_eq!(t[0], (1, 4));
        assert_eq!(t[8], (9, 2));
        assert_eq!(t[9], (10, 0));
        assert!(t.iter().filter(|(i, _)| ![1, 9, 10].contains(i)).all(|&(_, v)| v > 4));
    }

    #[test]
    fn a_vectors_have_expected_norm() {
        for t in [DynkinType::a(1), DynkinType::d(4), DynkinType::d(6), DynkinType::e(7), DynkinType::e(8)] {
            let l = build_root_lattice(t).unwrap();
            let a = a_vector(t).unwrap();
            assert_eq!(l.norm(&a.coefficients), BigInt::from(-2 * t.rank as i64), "{t}");
        }
        assert_eq!(a_vector(DynkinType::d(6)).unwrap().coefficients, vec![2, 2, 4, 4, 3, 3]);
        assert!(a_vector(DynkinType::a(2)).is_err());
        assert!(a_vector(DynkinType::d(5)).is_err());
    }

    #[test]
    fn d4_decomposition() {
        let f = orthogonal_root_decomposition(DynkinType::d(4), 0).unwrap();
        assert_eq!(f.len(), 4);
    }
}
