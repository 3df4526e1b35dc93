//! Rank-12 configurations of 2-elementary root lattices and their admissibility.
//!
//! A configuration `Gamma` is admissible when `L = Lambda + Z h` is integral,
//! even, and has no roots outside `Lambda`, where `Lambda` is the root lattice
//! of `Gamma` and `2h` is a sum of a maximal orthogonal root frame.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::builders::root_lattice_sum;
use crate::lattice::{matrix, GramLattice, IntVector};
use crate::roots::{self, build_root_lattice, DynkinType, Family};

/// Total rank of the configurations considered.
pub const TOTAL_RANK: usize = 12;

/// The connected types that may occur: the 2-elementary simply laced ones up to rank 12.
pub fn component_types() -> Vec<DynkinType> {
    let mut v = vec![DynkinType::a(1)];
    v.extend((2..=6).map(|n| DynkinType::d(2 * n)));
    v.extend([DynkinType::e(7), DynkinType::e(8)]);
    v
}

/// A multiset of connected Dynkin types, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    components: Vec<DynkinType>,
}

impl Configuration {
    pub fn new(mut components: Vec<DynkinType>) -> Self {
        components.sort();
        Configuration { components }
    }

    pub fn components(&self) -> &[DynkinType] {
        &self.components
    }

    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|t| t.rank).sum()
    }

    /// Parse names like `8A1+D4` or `3D4`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let split = part.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(|| Error::IllegalType(part.into()))?;
            let (count, name) = part.split_at(split);
            let count: usize = if count.is_empty() {
                1
            } else {
                count.parse().map_err(|_| Error::IllegalType(part.into()))?
            };
            let t = DynkinType::parse(name)?;
            comps.extend(std::iter::repeat(t).take(count));
        }
        Ok(Configuration::new(comps))
    }

    pub fn count(&self, t: DynkinType) -> usize {
        self.components.iter().filter(|&&c| c == t).count()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut counts: BTreeMap<DynkinType, usize> = BTreeMap::new();
        for t in &self.components {
            *counts.entry(*t).or_default() += 1;
        }
        let parts: Vec<String> = counts
            .iter()
            .map(|(t, &k)| if k == 1 { t.to_string() } else { format!("{k}{t}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All multisets of [`component_types`] of total rank 12, sorted.
pub fn enumerate_candidates() -> Vec<Configuration> {
    let types = component_types();
    let mut out = Vec::new();
    fn rec(types: &[DynkinType], start: usize, left: usize, cur: &mut Vec<DynkinType>, out: &mut Vec<Configuration>) {
        if left == 0 {
            out.push(Configuration::new(cur.clone()));
            return;
        }
        for (i, t) in types.iter().enumerate().skip(start) {
            if t.rank <= left {
                cur.push(*t);
                rec(types, i, left - t.rank, cur, out);
                cur.pop();
            }
        }
    }
    rec(&types, 0, TOTAL_RANK, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Every component is `D_4n` or `E8`.
pub fn is_even_configuration(c: &Configuration) -> bool {
    c.components.iter().all(|t| match t.family {
        Family::D => t.rank % 4 == 0,
        Family::E => t.rank == 8,
        _ => false,
    })
}

/// Outcome of the admissibility predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub config: Configuration,
    /// `2h` in simple-root coordinates of `Lambda`.
    pub twice_h: IntVector,
    pub half_sum_in_lattice: bool,
    pub integral: bool,
    pub even: bool,
    /// Roots of `h + Lambda`, as doubled coordinates `2r` (at most one is reported).
    pub new_roots: Vec<IntVector>,
    pub verdict: bool,
}

/// The frame used for `2h`: `variant = 0` takes the A-vector decomposition of
/// each component; other variants take arbitrary maximal orthogonal frames.
pub fn realization(c: &Configuration, variant: u64) -> Result<Vec<Vec<IntVector>>> {
    c.components
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            if variant == 0 {
                roots::orthogonal_root_decomposition(t, 0)
            } else {
                roots::orthogonal_frame(t, variant.wrapping_mul(1000).wrapping_add(k as u64))
            }
        })
        .collect()
}

/// `2h` from a realization: the concatenation of per-component frame sums.
pub fn twice_half_sum(c: &Configuration, frames: &[Vec<IntVector>]) -> IntVector {
    let mut out = Vec::with_capacity(c.total_rank());
    for (t, frame) in c.components.iter().zip(frames) {
        let mut s = vec![0i64; t.rank];
        for r in frame {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        out.extend(s);
    }
    out
}

pub fn admissibility(c: &Configuration, variant: u64) -> Result<AdmissibilityReport> {
    let lambda = root_lattice_sum(c.components());
    let frames = realization(c, variant)?;
    let x = twice_half_sum(c, &frames);
    let xb: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
    let half_sum_in_lattice = x.iter().all(|v| v % 2 == 0);
    // h.Lambda in Z  <=>  G (2h) = 0 mod 2
    let integral = matrix::mul_vec(lambda.gram(), &xb).iter().all(|v| v.is_even());
    // h^2 even  <=>  (2h)^2 = 0 mod 8
    let even = matrix::bilinear(lambda.gram(), &xb, &xb).mod_floor(&BigInt::from(8)) == BigInt::from(0);
    let mut new_roots = Vec::new();
    if !half_sum_in_lattice {
        let class: Vec<u8> = x.iter().map(|v| v.rem_euclid(2) as u8).collect();
        if let Some(z) = lambda.represent_class_with_norm(&class, -8, 0) {
            new_roots.push(z);
        }
    }
    let verdict = integral && even && new_roots.is_empty();
    Ok(AdmissibilityReport { config: c.clone(), twice_h: x, half_sum_in_lattice, integral, even, new_roots, verdict })
}

/// Admissible candidates split into `(odd, even)`.
pub fn classify() -> Result<(Vec<Configuration>, Vec<Configuration>)> {
    let reports: Vec<AdmissibilityReport> =
        enumerate_candidates().par_iter().map(|c| admissibility(c, 0)).collect::<Result<_>>()?;
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for r in reports.into_iter().filter(|r| r.verdict) {
        if is_even_configuration(&r.config) {
            even.push(r.config);
        } else {
            odd.push(r.config);
        }
    }
    Ok((odd, even))
}

/// All reports for the candidate list, in candidate order.
pub fn all_reports(variant: u64) -> Result<Vec<AdmissibilityReport>> {
    enumerate_candidates().par_iter().map(|c| admissibility(c, variant)).collect()
}

/// `|disc|` of `Lambda + Z h`, or of `Lambda` when `h` lies in it.
pub fn disc_report(c: &Configuration) -> Result<BigInt> {
    let r = admissibility(c, 0)?;
    if !r.integral {
        return Err(Error::DiscriminantForm(format!("{c}: h is not integral")));
    }
    let lambda = root_lattice_sum(c.components());
    if r.half_sum_in_lattice {
        return Ok(lambda.det().abs());
    }
    let class: IntVector = r.twice_h.iter().map(|v| v.rem_euclid(2)).collect();
    let (l, _) = lambda.overlattice_by_halves(&[class])?;
    Ok(l.det().abs())
}

/// Nodes with odd coefficient in `2h` for the A-vector realization. These are
/// pairwise orthogonal roots whose sum is divisible by 2 in `Lambda + Z h`.
pub fn odd_support(c: &Configuration) -> Result<Vec<usize>> {
    let r = admissibility(c, 0)?;
    Ok(r.twice_h.iter().enumerate().filter(|(_, v)| *v % 2 != 0).map(|(i, _)| i).collect())
}

/// `c_2` of the singular K3 after contracting `r` curves.
pub fn chern_bookkeeping(r: u32) -> Result<i64> {
    if r > TOTAL_RANK as u32 {
        return Err(Error::Dimension { expected: TOTAL_RANK, got: r as usize });
    }
    Ok(24 - 2 * r as i64)
}

/// 2-elementary connected types among `A_n, D_n (n <= 12)` and `E6, E7, E8`.
pub fn two_elementary_scan() -> Vec<DynkinType> {
    let mut types: Vec<DynkinType> = (1..=12).map(DynkinType::a).collect();
    types.extend((4..=12).map(DynkinType::d));
    types.extend((6..=8).map(DynkinType::e));
    types.into_iter().filter(|&t| build_root_lattice(t).unwrap().is_two_elementary()).collect()
}

/// Counts for embeddings of `M` into `D4 + D4 + D4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingCount {
    /// Orbits of image sublattices under `Aut(D4^3)`.
    pub orbit_count: usize,
    /// Unsigned 12-frames of pairwise orthogonal roots.
    pub frames: usize,
    /// Ordered signed frames whose half-sum lies in `D4^3`, i.e. embeddings of `M`.
    #[serde(with = "crate::lattice::decimal")]
    pub raw_embeddings: BigInt,
    #[serde(with = "crate::lattice::decimal")]
    pub automorphism_order: BigInt,
    /// Orbits of embedding maps; the action is free.
    #[serde(with = "crate::lattice::decimal")]
    pub embedding_orbits: BigInt,
    pub half_sum_norm: i64,
}

type Mat = Vec<Vec<i64>>;

fn apply(m: &Mat, v: &[i64]) -> IntVector {
    // v in simple-root coordinates, m acts on coordinates: (m v)_i = sum_j m[i][j] v_j
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn compose(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// All isometries of `D4` in simple-root coordinates, generated by simple
/// reflections and the diagram symmetries permuting the outer nodes.
pub fn d4_automorphisms() -> Vec<Mat> {
    let g = DynkinType::d(4).diagram().unwrap().gram();
    let n = 4;
    let mut gens: Vec<Mat> = Vec::new();
    for k in 0..n {
        // s_k(v) = v - (v.a_k)/(a_k.a_k) * 2 a_k = v + (v.a_k) a_k
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            m[j][j] = 1;
            m[k][j] += g[j][k];
        }
        gens.push(m);
    }
    // centre node is 2 (0-based 1); outer nodes 0, 2, 3
    for (a, b) in [(0usize, 2usize), (2, 3)] {
        let mut m = vec![vec![0i64; n]; n];
        for (j, row) in m.iter_mut().enumerate() {
            let src = if j == a { b } else if j == b { a } else { j };
            row[src] = 1;
        }
        gens.push(m);
    }
    let id: Mat = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = compose(s, &x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Mat> = seen.into_iter().collect();
    out.sort();
    out
}

fn normalize_root(v: &[i64]) -> IntVector {
    let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    if first < 0 {
        v.iter().map(|x| -x).collect()
    } else {
        v.to_vec()
    }
}

/// Count embeddings `M -> D4^3` by enumerating frames and orbit-counting under
/// `Aut(D4)^3` extended by factor permutations.
pub fn embeddings_m_into_3d4() -> Result<EmbeddingCount> {
    let d4 = build_root_lattice(DynkinType::d(4))?;
    let roots: Vec<IntVector> = d4.roots()?.iter().map(|r| normalize_root(r)).collect::<BTreeSet<_>>().into_iter().collect();
    // unsigned orthogonal 4-frames of one factor
    let mut factor_frames: Vec<Vec<IntVector>> = Vec::new();
    for a in 0..roots.len() {
        for b in a + 1..roots.len() {
            for c in b + 1..roots.len() {
                for d in c + 1..roots.len() {
                    let f = [&roots[a], &roots[b], &roots[c], &roots[d]];
                    let ok = (0..4).all(|i| (i + 1..4).all(|j| d4.inner(f[i], f[j]) == BigInt::from(0)));
                    if ok {
                        factor_frames.push(f.iter().map(|v| v.to_vec()).collect());
                    }
                }
            }
        }
    }
    // a 12-frame of D4^3 has 4 roots in each factor, since each root lies in one factor
    let target = crate::lattice::builders::d4_cubed();
    let mut frames: Vec<[usize; 3]> = Vec::new();
    for i in 0..factor_frames.len() {
        for j in 0..factor_frames.len() {
            for k in 0..factor_frames.len() {
                frames.push([i, j, k]);
            }
        }
    }
    let embed = |f: &[usize; 3]| -> Vec<IntVector> {
        let mut out = Vec::new();
        for (slot, &idx) in f.iter().enumerate() {
            for r in &factor_frames[idx] {
                let mut v = vec![0i64; 12];
                v[4 * slot..4 * slot + 4].copy_from_slice(r);
                out.push(v);
            }
        }
        out
    };
    // every sign choice gives a half-sum in the lattice iff one does, since
    // flipping r moves the half-sum by r
    let mut half_sum_norm = 0;
    let mut valid = 0usize;
    for f in &frames {
        let vs = embed(f);
        let s: IntVector = (0..12).map(|i| vs.iter().map(|v| v[i]).sum()).collect();
        if s.iter().all(|x| x % 2 == 0) {
            valid += 1;
            let h: IntVector = s.iter().map(|x| x / 2).collect();
            half_sum_norm = target.norm(&h).to_i64().unwrap();
        }
    }
    // orbits of unsigned frames: Aut(D4)^3 acts factorwise, S3 permutes slots
    let auts = d4_automorphisms();
    let index_of: BTreeMap<BTreeSet<IntVector>, usize> = factor_frames
        .iter()
        .enumerate()
        .map(|(i, f)| (f.iter().cloned().collect(), i))
        .collect();
    // action of Aut(D4) on the factor frames, as index permutations
    let factor_action: Vec<Vec<usize>> = auts
        .iter()
        .map(|m| {
            factor_frames
                .iter()
                .map(|f| {
                    let img: BTreeSet<IntVector> = f.iter().map(|r| normalize_root(&apply(m, r))).collect();
                    index_of[&img]
                })
                .collect()
        })
        .collect();
    let mut seen: HashSet<[usize; 3]> = HashSet::new();
    let mut orbit_count = 0;
    for f in &frames {
        if seen.contains(f) {
            continue;
        }
        orbit_count += 1;
        let mut queue = VecDeque::from([*f]);
        seen.insert(*f);
        while let Some(x) = queue.pop_front() {
            let mut next = Vec::new();
            for slot in 0..3 {
                for act in &factor_action {
                    let mut y = x;
                    y[slot] = act[x[slot]];
                    next.push(y);
                }
            }
            next.push([x[1], x[0], x[2]]);
            next.push([x[1], x[2], x[0]]);
            for y in next {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    let fact12: BigInt = (1..=12u32).map(BigInt::from).product();
    let raw_embeddings: BigInt = BigInt::from(valid) * fact12 * (BigInt::from(1) << 12usize);
    let aut1 = BigInt::from(auts.len());
    let automorphism_order = &aut1 * &aut1 * &aut1 * 6;
    let (embedding_orbits, rem) = raw_embeddings.div_rem(&automorphism_order);
    if rem != BigInt::from(0) {
        return Err(Error::DiscriminantForm("automorphism action on embeddings is not free".into()));
    }
    Ok(EmbeddingCount {
        orbit_count,
        frames: valid,
        raw_embeddings,
        automorphism_order,
        embedding_orbits,
        half_sum_norm,
    })
}

/// Gram of `Lambda` for a configuration (exposed for reports).
pub fn configuration_lattice(c: &Configuration) -> GramLattice {
    root_lattice_sum(c.components()).with_label(&c.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naming_round_trip() {
        for s in ["12A1", "8A1+D4", "5A1+E7", "3D4", "D4+E8", "D12"] {
            assert_eq!(Configuration::parse(s).unwrap().to_string(), s);
        }
        assert!(Configuration::parse("2X3").is_err());
    }

    #[test]
    fn candidates() {
        let c = enumerate_candidates();
        assert_eq!(c.len(), 15);
        assert!(c.iter().all(|x| x.total_rank() == 12));
        assert!(c.contains(&Configuration::parse("2A1+D10").unwrap()));
    }

    #[test]
    fn evenness() {
        assert!(is_even_configuration(&Configuration::parse("3D4").unwrap()));
        assert!(!is_even_configuration(&Configuration::parse("8A1+D4").unwrap()));
        assert!(is_even_configuration(&Configuration::parse("D4+D8").unwrap()));
    }

    #[test]
    fn chern() {
        assert_eq!(chern_bookkeeping(12).unwrap(), 0);
        assert_eq!(chern_bookkeeping(0).unwrap(), 24);
        assert_eq!(chern_bookkeeping(6).unwrap(), 12);
        assert!(chern_bookkeeping(13).is_err());
    }

    #[test]
    fn d4_automorphism_group() {
        assert_eq!(d4_automorphisms().len(), 1152);
    }

    #[test]
    fn twelve_a1_is_admissible() {
        let r = admissibility(&Configuration::parse("12A1").unwrap(), 0).unwrap();
        assert!(r.verdict);
        assert!(!r.half_sum_in_lattice);
    }

    #[test]
    fn rejected_examples() {
        for s in ["2A1+D10", "4A1+D8"] {
            let r = admissibility(&Configuration::parse(s).unwrap(), 0).unwrap();
            assert!(!r.verdict, "{s}");
        }
    }
}
