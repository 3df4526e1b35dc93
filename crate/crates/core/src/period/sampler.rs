//! Constructive sampler. Over `k = GF(2^m)`, `m = 2s`, a period is built as
//! `R (x) k + iota(L)`: `R` a random rational isotropic subspace of dimension
//! `10 - s`, `C` a complement of `R` in `R^perp`, `iota` a random isometry from
//! the norm-trace model `(GF(2^2s), Tr(z^(2^s + 1)))` onto `C`, and `L` the
//! subspace of the model cut out by `s` consecutive conjugate coordinates.
//! Frobenius shifts those coordinates, so `dim(V n F V) = 9` and the rational
//! part of `V` is exactly `R`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{context, in_m0, in_m1, is_12a1, PeriodContext, PeriodPoint, AMBIENT, SIGMA};
use crate::error::{Error, Result};
use crate::gf2::disc::kernel;
use crate::gf2::field::{Elem, ExtensionField};
use crate::gf2::linalg::{Subspace, Vector};
use crate::gf2::quadratic::{solve_affine, BitSpan, F2QuadraticSpace};

/// Default number of candidate constructions before giving up.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Smallest field degree over which `M1` has points.
pub const MIN_M1_DEGREE: u32 = 8;

/// Tries per step when growing the rational part.
const STEP_TRIES: usize = 200;

/// What the sample must satisfy beyond being a period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    /// no further condition
    Any,
    /// in `M0`, `12A1` and `M1`
    Generic,
    /// in `M0`, `12A1`, meets the `M`-part trivially, and the only pair `(i, j)`
    /// with some `alpha + e_ij` in `V` is the given one (0-based, `i < j`)
    Defect(usize, usize),
    /// in `M0` but not `12A1`: `V` contains a rational isotropic `M`-part vector
    NonTwelveA1,
    /// contains the given rational vector of `N0`
    Contains(u32),
}

/// Rejection statistics of one sampling run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub attempts: usize,
    pub rational_restarts: usize,
    pub rejected_constraint: usize,
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new() -> Self {
        Bitset(vec![0; (1 << AMBIENT) / 64])
    }
    fn set(&mut self, x: u32) {
        self.0[(x >> 6) as usize] |= 1 << (x & 63);
    }
    fn get(&self, x: u32) -> bool {
        (self.0[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }
}

fn span_elements(mask: u32) -> Vec<u32> {
    let bits: Vec<u32> = (0..32).filter(|i| (mask >> i) & 1 == 1).map(|i| 1 << i).collect();
    let mut s = BitSpan::new();
    for b in bits {
        s.insert(b);
    }
    s.elements()
}

fn bad_set(ctx: &PeriodContext, c: &Constraint) -> Bitset {
    let mut bad = Bitset::new();
    let q = ctx.disc.space();
    let e_elems = span_elements(ctx.disc.e_part());
    let m_elems = span_elements(ctx.disc.m_part());
    let forbid_parts = |bad: &mut Bitset, with_m: bool| {
        for &x in e_elems.iter().skip(1) {
            bad.set(x);
        }
        if with_m {
            for &x in m_elems.iter().skip(1) {
                bad.set(x);
            }
        }
    };
    match c {
        Constraint::Any | Constraint::Contains(_) => {}
        Constraint::NonTwelveA1 => forbid_parts(&mut bad, false),
        Constraint::Generic | Constraint::Defect(..) => {
            forbid_parts(&mut bad, true);
            let alphas: Vec<u32> = e_elems.iter().copied().filter(|&a| q.q(a) == 1).collect();
            for &(pair, cls) in &ctx.pairs {
                if *c == Constraint::Defect(pair.0, pair.1) {
                    continue;
                }
                for &a in &alphas {
                    bad.set(a ^ cls);
                }
            }
        }
    }
    bad
}

fn forced_vectors<R: Rng>(ctx: &PeriodContext, c: &Constraint, rng: &mut R) -> Vec<u32> {
    let q = ctx.disc.space();
    let random_in = |mask: u32, want_q: u32, rng: &mut R| loop {
        let x = rng.gen::<u32>() & mask;
        if x != 0 && q.q(x) == want_q {
            return x;
        }
    };
    match c {
        Constraint::Defect(i, j) => {
            let cls = ctx.pairs.iter().find(|(p, _)| *p == (*i, *j)).expect("pair").1;
            vec![random_in(ctx.disc.e_part(), 1, rng) ^ cls]
        }
        Constraint::NonTwelveA1 => vec![random_in(ctx.disc.m_part(), 0, rng)],
        Constraint::Contains(w) => vec![*w],
        _ => Vec::new(),
    }
}

/// Basis of `{v : b(v, y) = 0 for y in ys}`.
fn perp_basis(q: &F2QuadraticSpace, ys: &[u32]) -> Vec<u32> {
    let rows: Vec<u32> =
        ys.iter().map(|&y| (0..q.dim()).filter(|&i| (y >> i) & 1 == 1).fold(0, |acc, i| acc ^ q.bilinear_rows()[i])).collect();
    let zeros = vec![0; rows.len()];
    solve_affine(&rows, &zeros, q.dim()).expect("homogeneous").1
}

fn random_combination<R: Rng>(basis: &[u32], rng: &mut R) -> u32 {
    basis.iter().filter(|_| rng.gen::<bool>()).fold(0, |a, b| a ^ b)
}

/// A random totally isotropic rational subspace of dimension `r`, containing
/// `forced`, no coset of which meets `bad`.
fn rational_part<R: Rng>(q: &F2QuadraticSpace, r: usize, forced: &[u32], bad: &Bitset, rng: &mut R) -> Option<Vec<u32>> {
    let mut span = BitSpan::new();
    let mut basis: Vec<u32> = Vec::new();
    let mut elems = vec![0u32];
    let try_add = |v: u32, span: &mut BitSpan, basis: &mut Vec<u32>, elems: &mut Vec<u32>| -> bool {
        if q.q(v) != 0 || span.contains(v) || basis.iter().any(|&y| q.b(v, y) != 0) {
            return false;
        }
        if elems.iter().any(|&e| bad.get(e ^ v)) {
            return false;
        }
        span.insert(v);
        basis.push(v);
        let more: Vec<u32> = elems.iter().map(|e| e ^ v).collect();
        elems.extend(more);
        true
    };
    for &f in forced {
        if !try_add(f, &mut span, &mut basis, &mut elems) {
            return None;
        }
    }
    if basis.len() > r {
        return None;
    }
    while basis.len() < r {
        let perp = perp_basis(q, &basis);
        let added = (0..STEP_TRIES).any(|_| {
            let v = random_combination(&perp, rng);
            try_add(v, &mut span, &mut basis, &mut elems)
        });
        if !added {
            return None;
        }
    }
    Some(basis)
}

/// The model `(GF(2^2s), Tr_{GF(2^s)}(z^(2^s + 1)))` on the polynomial basis.
fn model_space(k: &ExtensionField, s: u32) -> F2QuadraticSpace {
    let n = 2 * s as usize;
    let qm = |z: Elem| -> u32 {
        let w = k.mul(k.frob(z, s), z);
        let t = (0..s).fold(0, |acc, j| acc ^ k.frob(w, j));
        debug_assert!(t <= 1);
        t
    };
    let mut bilinear = vec![0u32; n];
    let mut q_values = 0u32;
    for l in 0..n {
        q_values |= qm(1 << l) << l;
        for l2 in 0..n {
            if l != l2 && (qm((1 << l) ^ (1 << l2)) ^ qm(1 << l) ^ qm(1 << l2)) == 1 {
                bilinear[l] |= 1 << l2;
            }
        }
    }
    F2QuadraticSpace::new(bilinear, q_values).expect("polarization is alternating")
}

fn build_candidate<R: Rng>(
    ctx: &PeriodContext,
    k: &ExtensionField,
    rational: &[u32],
    rng: &mut R,
) -> Result<Subspace> {
    let q = ctx.disc.space();
    let s = k.degree() / 2;
    let n = 2 * s as usize;
    // complement of R in R^perp
    let perp = perp_basis(q, rational);
    let mut span = BitSpan::new();
    for &x in rational {
        span.insert(x);
    }
    let mut comp: Vec<u32> = Vec::with_capacity(n);
    while comp.len() < n {
        let v = random_combination(&perp, rng);
        if span.insert(v) {
            comp.push(v);
        }
    }
    let mut bilinear = vec![0u32; n];
    let mut q_values = 0u32;
    for i in 0..n {
        q_values |= q.q(comp[i]) << i;
        for j in 0..n {
            bilinear[i] |= q.b(comp[i], comp[j]) << j;
        }
    }
    let cspace = F2QuadraticSpace::new(bilinear, q_values)?;
    let model = model_space(k, s);
    let images = model.extend_isometry(&cspace, &[], rng)?;
    let iota: Vec<u32> =
        images.iter().map(|&im| (0..n).filter(|&t| (im >> t) & 1 == 1).fold(0, |acc, t| acc ^ comp[t])).collect();
    // L: conjugate coordinates y_j = sigma^j(z) vanish off a cyclic interval of length s
    let start = rng.gen_range(0..n);
    let off: Vec<usize> = (s as usize..n).map(|t| (start + t) % n).collect();
    let rows: Vec<Vector> = off.iter().map(|&j| (0..n).map(|l| k.frob(1 << l, j as u32)).collect()).collect();
    let l_space = kernel(k, &rows, n);
    let mut basis: Vec<Vector> = rational.iter().map(|&x| (0..AMBIENT).map(|p| (x >> p) & 1).collect()).collect();
    for c in l_space.basis() {
        let mut x = vec![0; AMBIENT];
        for (l, &cl) in c.iter().enumerate() {
            if cl == 0 {
                continue;
            }
            for (p, xp) in x.iter_mut().enumerate() {
                if (iota[l] >> p) & 1 == 1 {
                    *xp ^= cl;
                }
            }
        }
        basis.push(x);
    }
    Ok(Subspace::span(*k, AMBIENT, &basis))
}

fn satisfies(v: &PeriodPoint, c: &Constraint) -> bool {
    match c {
        Constraint::Any => true,
        Constraint::Contains(w) => v.rational_part_contains(*w),
        Constraint::Generic => in_m0(v).in_m0 && is_12a1(v) && in_m1(v).in_m1,
        Constraint::Defect(i, j) => {
            let m1 = in_m1(v);
            in_m0(v).in_m0 && is_12a1(v) && !m1.meets_m_part && m1.defects == [(*i, *j)]
        }
        Constraint::NonTwelveA1 => in_m0(v).in_m0 && !is_12a1(v),
    }
}

impl PeriodPoint {
    fn rational_part_contains(&self, w: u32) -> bool {
        let mut s = BitSpan::new();
        for &r in self.rational_part() {
            s.insert(r);
        }
        s.contains(w)
    }
}

/// A period over `field` satisfying `constraint`, deterministic in `seed`.
pub fn sample_period(seed: u64, field: ExtensionField, constraint: &Constraint) -> Result<PeriodPoint> {
    sample_with_stats(seed, field, constraint, DEFAULT_BUDGET).map(|(v, _)| v)
}

pub fn sample_with_stats(
    seed: u64,
    field: ExtensionField,
    constraint: &Constraint,
    budget: usize,
) -> Result<(PeriodPoint, SampleStats)> {
    let m = field.degree();
    if m % 2 == 1 {
        return Err(Error::PeriodPrecondition(format!(
            "N0 has no 10-dimensional isotropic subspace over GF(2^{m}) for odd m"
        )));
    }
    if let Constraint::Defect(i, j) = constraint {
        if !(i < j && *j < 12) {
            return Err(Error::PeriodPrecondition(format!("pair ({i}, {j}) is not 0 <= i < j < 12")));
        }
    }
    if matches!(constraint, Constraint::Generic | Constraint::Defect(..)) && m < MIN_M1_DEGREE {
        // R has dimension >= 10 - m/2 and its M-projection has codimension m/2;
        // missing all (or all but one of) the 66 classes e_ij needs 2^(m/2) >= 11
        return Err(Error::PeriodPrecondition(format!(
            "M1 has no points over GF(2^{m}): the rational part has dimension >= {} and meets some alpha + e_ij",
            SIGMA - (m / 2) as usize
        )));
    }
    let ctx = context();
    let q = ctx.disc.space();
    let r = SIGMA - (m / 2) as usize;
    let bad = bad_set(ctx, constraint);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SampleStats::default();
    while stats.attempts < budget {
        stats.attempts += 1;
        let forced = forced_vectors(ctx, constraint, &mut rng);
        let Some(mut rational) = rational_part(q, r, &forced, &bad, &mut rng) else {
            stats.rational_restarts += 1;
            continue;
        };
        rational.shuffle(&mut rng);
        let v = PeriodPoint::new(build_candidate(ctx, &field, &rational, &mut rng)?)?;
        debug_assert_eq!(v.rational_part().len(), r);
        if satisfies(&v, constraint) {
            return Ok((v, stats));
        }
        stats.rejected_constraint += 1;
    }
    Err(Error::SamplerExhausted {
        attempts: stats.attempts,
        reason: format!(
            "{} rational-part restarts, {} constraint rejections",
            stats.rational_restarts, stats.rejected_constraint
        ),
    })
}

/// Samples for the given seeds, in parallel, returned in seed order.
pub fn sample_many(seeds: &[u64], field: ExtensionField, constraint: &Constraint) -> Result<Vec<PeriodPoint>> {
    seeds.par_iter().map(|&s| sample_period(s, field, constraint)).collect()
}
