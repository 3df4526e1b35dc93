//! Period points: maximal `q`-isotropic subspaces `V` of `N0 (x) k` with
//! `dim(V n F(V)) = 9`, and the loci and tangent data attached to them.

mod sampler;

use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use sampler::{sample_many, sample_period, sample_with_stats, Constraint, SampleStats, DEFAULT_BUDGET, MIN_M1_DEGREE};

use crate::error::{Error, Result};
use crate::gf2::disc::{DiscriminantSpace, ExtendedSpace, WorkingSpace};
use crate::gf2::field::ExtensionField;
use crate::gf2::linalg::{Subspace, SubspaceJson};
use crate::gf2::quadratic::BitSpan;
use crate::lattice::builders::M_RANK;
use crate::lattice::{GramLattice, IntVector, DEFAULT_BOX};
use crate::roots::e10;

/// Dimension of `N0`.
pub const AMBIENT: usize = 20;
/// `sigma(N)`, the dimension of a period.
pub const SIGMA: usize = 10;

/// `N0` with its parts, marked pairs and the twelve-point space, built once.
#[derive(Debug)]
pub struct PeriodContext {
    pub disc: DiscriminantSpace,
    pub working: WorkingSpace,
    /// `((i, j), class of e_i + e_j)` for `i < j`
    pub pairs: Vec<((usize, usize), u32)>,
    pub m_coords: Vec<usize>,
    pub e_coords: Vec<usize>,
}

pub fn context() -> &'static PeriodContext {
    static CTX: OnceLock<PeriodContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let disc = DiscriminantSpace::n0().expect("N is 2-elementary");
        let working = WorkingSpace::new(&disc).expect("the e_i span the M-part");
        let pairs = disc.e_pairs().into_iter().collect();
        let m_coords = disc.part_coords(0);
        let e_coords = disc.part_coords(1);
        PeriodContext { disc, working, pairs, m_coords, e_coords }
    })
}

impl PeriodContext {
    pub fn extended(&self, field: ExtensionField) -> ExtendedSpace {
        self.disc.extend_scalars(field)
    }

    fn coordinate_space(&self, field: ExtensionField, coords: &[usize]) -> Subspace {
        let bits: Vec<u32> = coords.iter().map(|&c| 1u32 << c).collect();
        Subspace::from_bits(field, AMBIENT, &bits)
    }

    pub fn m_space(&self, field: ExtensionField) -> Subspace {
        self.coordinate_space(field, &self.m_coords)
    }

    pub fn e_space(&self, field: ExtensionField) -> Subspace {
        self.coordinate_space(field, &self.e_coords)
    }
}

/// Outcome of the period-point test; `failure` names the first failed condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodDiagnostics {
    pub valid: bool,
    pub dim: usize,
    pub totally_isotropic: bool,
    pub frobenius_overlap: usize,
    pub failure: Option<String>,
}

pub fn is_period_point(s: &Subspace) -> Result<PeriodDiagnostics> {
    if s.ambient() != AMBIENT {
        return Err(Error::WrongAmbient { expected: AMBIENT, got: s.ambient() });
    }
    let ext = context().extended(*s.field());
    let dim = s.dim();
    let totally_isotropic = ext.is_totally_isotropic(s);
    let frobenius_overlap = s.intersect(&s.frobenius()).dim();
    let failure = if dim != SIGMA {
        Some(format!("dimension {dim}, expected {SIGMA}"))
    } else if !totally_isotropic {
        Some("q does not vanish on the subspace".to_string())
    } else if frobenius_overlap != SIGMA - 1 {
        Some(format!("dim(V n F V) = {frobenius_overlap}, expected {}", SIGMA - 1))
    } else {
        None
    };
    Ok(PeriodDiagnostics { valid: failure.is_none(), dim, totally_isotropic, frobenius_overlap, failure })
}

/// A validated period point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPoint {
    subspace: Subspace,
    frobenius_overlap: usize,
    rational_part: Vec<u32>,
}

/// Serialized period: the subspace plus the cached invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodJson {
    pub subspace: SubspaceJson,
    pub frobenius_overlap: usize,
    pub rational_dim: usize,
}

impl PeriodPoint {
    pub fn new(subspace: Subspace) -> Result<Self> {
        let d = is_period_point(&subspace)?;
        if let Some(f) = d.failure {
            return Err(Error::PeriodPrecondition(f));
        }
        let rational_part = subspace.rational_part();
        Ok(PeriodPoint { subspace, frobenius_overlap: d.frobenius_overlap, rational_part })
    }

    pub fn field(&self) -> &ExtensionField {
        self.subspace.field()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn frobenius_overlap(&self) -> usize {
        self.frobenius_overlap
    }

    /// `F2` basis (bitmasks over `N0`) of the largest rational subspace.
    pub fn rational_part(&self) -> &[u32] {
        &self.rational_part
    }

    pub fn to_json(&self) -> PeriodJson {
        PeriodJson {
            subspace: self.subspace.to_json(),
            frobenius_overlap: self.frobenius_overlap,
            rational_dim: self.rational_part.len(),
        }
    }

    pub fn from_json(j: &PeriodJson) -> Result<Self> {
        PeriodPoint::new(Subspace::from_json(&j.subspace)?)
    }
}

/// Membership in `M0` with a root witness when it fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct M0Report {
    pub in_m0: bool,
    /// a nonzero rational class in the `E`-part, as a bitmask over `N0`
    pub rational_e_class: Option<u32>,
    /// `z` in `E` (coordinates of `E10`) with `z^2 = -4` in the class; `z/2` is a
    /// root of the saturation of `E(2)`
    pub witness: Option<IntVector>,
}

pub fn in_m0(v: &PeriodPoint) -> M0Report {
    let ctx = context();
    let span = rational_span(v);
    let m = ctx.disc.m_part();
    let class = span.elements().into_iter().find(|&x| x != 0 && x & m == 0);
    let witness = class.and_then(|c| e_root_witness(c));
    M0Report { in_m0: class.is_none(), rational_e_class: class, witness }
}

/// `z` in `E` with `z = lift (mod 2E)` and `z^2 = -4`.
pub fn e_root_witness(class: u32) -> Option<IntVector> {
    let ctx = context();
    let lift = ctx.disc.lift(class);
    let bits: Vec<u8> = lift[M_RANK..].iter().map(|x| x.rem_euclid(2) as u8).collect();
    e10().represent_class_with_norm(&bits, -4, DEFAULT_BOX)
}

fn rational_span(v: &PeriodPoint) -> BitSpan {
    let mut s = BitSpan::new();
    for &r in &v.rational_part {
        s.insert(r);
    }
    s
}

/// The projection of `V` onto the `M`-part is onto.
pub fn is_12a1(v: &PeriodPoint) -> bool {
    v.subspace.project(&context().m_coords).dim() == SIGMA
}

/// Membership in `M1` with the list of pairs `(i, j)` for which `V` contains
/// some `alpha + e_ij` with `alpha` in the `E`-part. Such a vector is rational,
/// so the pairs are found by comparing the rank of `R n (E + <e_ij>)` with that
/// of `R n E`, `R` the rational part of `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct M1Report {
    pub in_m1: bool,
    pub meets_m_part: bool,
    pub defects: Vec<(usize, usize)>,
}

/// `F2`-dimension of the elements of a span supported on `mask`.
fn bit_dim_within(elems: &[u32], mask: u32) -> usize {
    elems.iter().filter(|&&x| x & !mask == 0).count().trailing_zeros() as usize
}

pub fn in_m1(v: &PeriodPoint) -> M1Report {
    let ctx = context();
    let f = *v.field();
    let meets_m_part = v.subspace.intersect(&ctx.m_space(f)).dim() > 0;
    let elems = rational_span(v).elements();
    let e = ctx.disc.e_part();
    let base = bit_dim_within(&elems, e);
    let defects: Vec<(usize, usize)> = ctx
        .pairs
        .iter()
        .filter(|(_, cls)| {
            // elements of R n (E + <e_ij>): x or x + e_ij lies in E
            let n = elems.iter().filter(|&&x| x & !e == 0 || (x ^ cls) & !e == 0).count();
            n.trailing_zeros() as usize > base
        })
        .map(|(p, _)| *p)
        .collect();
    M1Report { in_m1: !meets_m_part && defects.is_empty(), meets_m_part, defects }
}

/// `N + (1/2)(lifts of the rational part)` and its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicardReport {
    pub index_exponent: usize,
    #[serde(with = "crate::lattice::decimal")]
    pub det: BigInt,
    pub even: bool,
    pub two_elementary: bool,
    #[serde(skip)]
    pub lattice: GramLattice,
}

pub fn picard_overlattice(v: &PeriodPoint) -> Result<PicardReport> {
    let ctx = context();
    let halves: Vec<IntVector> = v.rational_part.iter().map(|&c| ctx.disc.lift(c)).collect();
    let (lattice, _) = ctx.disc.lattice().overlattice_by_halves(&halves)?;
    Ok(PicardReport {
        index_exponent: halves.len(),
        det: lattice.det(),
        even: lattice.is_even(),
        two_elementary: lattice.is_two_elementary(),
        lattice,
    })
}

/// `T`: vectors `c` of `k^12` with `sum c_i e_i` in `V + F(V)`. Errors unless `dim T = 2`.
pub fn tangent_space(v: &PeriodPoint) -> Result<Subspace> {
    let ctx = context();
    let w = v.subspace.sum(&v.subspace.frobenius());
    let pre = ctx.working.preimage(&w);
    let points = ctx.working.point_coords();
    let t = pre.restrict_to(&points).project(&points);
    if t.dim() != 2 {
        return Err(Error::TangentDimension(t.dim()));
    }
    Ok(t)
}

/// Rank of the projections of `T` to pairs of points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonFreeReport {
    pub injective: bool,
    pub failing_pairs: Vec<(usize, usize)>,
    /// every failing projection is the diagonal `k (1, 1)`
    pub diagonal_images: bool,
    pub min_point_rank: usize,
}

pub fn nonfree_map_injective(t: &Subspace) -> NonFreeReport {
    let f = *t.field();
    let diagonal = Subspace::span(f, 2, &[vec![1, 1]]);
    let mut failing_pairs = Vec::new();
    let mut diagonal_images = true;
    for i in 0..M_RANK {
        for j in i + 1..M_RANK {
            let p = t.project(&[i, j]);
            if p.dim() < 2 {
                failing_pairs.push((i, j));
                diagonal_images &= p == diagonal;
            }
        }
    }
    let min_point_rank = (0..M_RANK).map(|i| t.project(&[i]).dim()).min().unwrap_or(0);
    NonFreeReport { injective: failing_pairs.is_empty(), failing_pairs, diagonal_images, min_point_rank }
}

/// The two sides of the equivalence: non-free map injective versus `V` in `M1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EtaleCheck {
    pub lhs: bool,
    pub rhs: bool,
    pub agree: bool,
}

pub fn etale_equivalence_check(v: &PeriodPoint) -> Result<EtaleCheck> {
    if !in_m0(v).in_m0 || !is_12a1(v) {
        return Err(Error::PeriodPrecondition("the equivalence needs V in M0 with a 12A1 configuration".into()));
    }
    let lhs = nonfree_map_injective(&tangent_space(v)?).injective;
    let rhs = in_m1(v).in_m1;
    Ok(EtaleCheck { lhs, rhs, agree: lhs == rhs })
}

/// The two rationality statements: the projection of `V` to the `M`-part is
/// `F`-stable, and `V` contains its orthogonal complement inside the `M`-part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalityReport {
    pub projection_rational: bool,
    pub contains_complement: bool,
}

pub fn rationality_check(v: &PeriodPoint) -> RationalityReport {
    let ctx = context();
    let f = *v.field();
    let proj = v.subspace.project(&ctx.m_coords);
    let projection_rational = proj.frobenius() == proj;
    // lift the projection back into N0 with zero E-part and take its complement in the M-part
    let lifted: Vec<Vec<u32>> = proj
        .basis()
        .iter()
        .map(|r| {
            let mut x = vec![0; AMBIENT];
            for (t, &c) in ctx.m_coords.iter().enumerate() {
                x[c] = r[t];
            }
            x
        })
        .collect();
    let lifted = Subspace::span(f, AMBIENT, &lifted);
    let complement = ctx.extended(f).orthogonal_within(&lifted, &ctx.m_space(f));
    RationalityReport { projection_rational, contains_complement: v.subspace.contains_space(&complement) }
}

/// Everything reported per period; fields that need `M0` and `12A1` are
/// absent otherwise. Pairs are labelled `1..=12`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    pub valid: bool,
    pub field_degree: u32,
    pub rational_dim: usize,
    #[serde(rename = "in_M0")]
    pub in_m0: bool,
    #[serde(rename = "is_12A1")]
    pub is_12a1: bool,
    #[serde(rename = "in_M1")]
    pub in_m1: bool,
    pub defects: Vec<(usize, usize)>,
    pub tangent_dim: Option<usize>,
    pub nonfree_failing_pairs: Option<Vec<(usize, usize)>>,
    pub diagonal_images: Option<bool>,
    pub etale_lhs: Option<bool>,
    pub etale_rhs: bool,
    pub agree: Option<bool>,
    pub projection_rational: bool,
    pub contains_complement: bool,
    pub picard_even: bool,
    #[serde(with = "crate::lattice::decimal")]
    pub picard_det: BigInt,
}

fn one_based(v: &[(usize, usize)]) -> Vec<(usize, usize)> {
    v.iter().map(|&(i, j)| (i + 1, j + 1)).collect()
}

pub fn report(v: &PeriodPoint) -> Result<PeriodReport> {
    let m0 = in_m0(v).in_m0;
    let twelve = is_12a1(v);
    let m1 = in_m1(v);
    let rat = rationality_check(v);
    let pic = picard_overlattice(v)?;
    let (tangent_dim, nonfree) = if m0 && twelve {
        match tangent_space(v) {
            Ok(t) => (Some(t.dim()), Some(nonfree_map_injective(&t))),
            Err(Error::TangentDimension(d)) => (Some(d), None),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };
    let etale_lhs = nonfree.as_ref().map(|n| n.injective);
    Ok(PeriodReport {
        valid: true,
        field_degree: v.field().degree(),
        rational_dim: v.rational_part.len(),
        in_m0: m0,
        is_12a1: twelve,
        in_m1: m1.in_m1,
        defects: one_based(&m1.defects),
        tangent_dim,
        nonfree_failing_pairs: nonfree.as_ref().map(|n| one_based(&n.failing_pairs)),
        diagonal_images: nonfree.as_ref().map(|n| n.diagonal_images),
        etale_lhs,
        etale_rhs: m1.in_m1,
        agree: etale_lhs.map(|l| l == m1.in_m1),
        projection_rational: rat.projection_rational,
        contains_complement: rat.contains_complement,
        picard_even: pic.even,
        picard_det: pic.det,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_maximal_isotropic_is_not_a_period() {
        // rational isotropic subspaces have dim at most 9 and are F-fixed
        let f = ExtensionField::new(2).unwrap();
        let v = sample_period(3, f, &Constraint::Any).unwrap();
        let r = v.rational_part().to_vec();
        assert_eq!(r.len(), 9);
        let w = Subspace::from_bits(f, AMBIENT, &r);
        let d = is_period_point(&w).unwrap();
        assert!(!d.valid);
        assert_eq!(d.dim, 9);
        assert!(d.totally_isotropic);
        assert!(is_period_point(&Subspace::zero(f, 3)).is_err());
    }

    #[test]
    fn sampled_periods_are_valid() {
        let f = ExtensionField::new(8).unwrap();
        let v = sample_period(1, f, &Constraint::Generic).unwrap();
        assert!(is_period_point(v.subspace()).unwrap().valid);
        assert_eq!(v.frobenius_overlap(), 9);
        assert_eq!(v.rational_part().len(), 6);
        assert!(is_12a1(&v));
        assert!(in_m0(&v).in_m0);
        let m1 = in_m1(&v);
        assert!(m1.in_m1, "{m1:?}");
        let t = tangent_space(&v).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.frobenius().dim(), 2);
    }

    #[test]
    fn picard_of_a_period_without_rational_part() {
        let f = ExtensionField::new(20).unwrap();
        let v = sample_period(2, f, &Constraint::Generic).unwrap();
        assert!(v.rational_part().is_empty());
        let p = picard_overlattice(&v).unwrap();
        assert_eq!(p.det, BigInt::from(-(1i64 << 20)));
        assert!(in_m0(&v).in_m0);
    }
}
