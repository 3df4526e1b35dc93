//! Integral lattices presented by Gram matrices.
//!
//! Sign convention: roots have norm `-2`. Definite root lattices are stored
//! negative definite, and `E = E10(-1)` has signature `(1, 9)`.

pub mod builders;
pub mod decimal;
pub mod enumerate;
pub mod matrix;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use enumerate::QuadraticProblem;
use matrix::IntMatrix;

pub type IntVector = Vec<i64>;

/// Default coefficient box for indefinite searches, and its doubling cap.
pub const DEFAULT_BOX: i64 = 6;
pub const MAX_BOX: i64 = 24;

/// A nondegenerate integral lattice given by a symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    label: Option<String>,
}

/// JSON form: `{rank, gram: row-major integers, label}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GramLatticeJson {
    pub rank: usize,
    #[serde(with = "decimal::vec")]
    pub gram: Vec<BigInt>,
    pub label: Option<String>,
}

impl GramLattice {
    pub fn new(gram: IntMatrix, label: Option<&str>) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        if matrix::det(&gram).is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(GramLattice { gram, label: label.map(str::to_owned) })
    }

    pub fn from_i64(gram: &[Vec<i64>], label: Option<&str>) -> Result<Self> {
        Self::new(matrix::from_i64(gram), label)
    }

    /// Construct and additionally require every diagonal entry to be even.
    pub fn new_even(gram: IntMatrix, label: Option<&str>) -> Result<Self> {
        let l = Self::new(gram, label)?;
        if let Some(i) = (0..l.rank()).find(|&i| l.gram[i][i].is_odd()) {
            return Err(Error::NotEven(i));
        }
        Ok(l)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_owned());
        self
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i].is_even())
    }

    /// Signed determinant of the Gram matrix.
    pub fn det(&self) -> BigInt {
        matrix::det(&self.gram)
    }

    /// `(positive, negative)` inertia.
    pub fn signature(&self) -> (usize, usize) {
        let (p, n, _) = matrix::inertia(&self.gram);
        (p, n)
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().0 == 0
    }

    pub fn inner(&self, u: &[i64], v: &[i64]) -> BigInt {
        let ub: Vec<BigInt> = u.iter().map(|&x| x.into()).collect();
        let vb: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
        matrix::bilinear(&self.gram, &ub, &vb)
    }

    pub fn norm(&self, v: &[i64]) -> BigInt {
        self.inner(v, v)
    }

    pub fn inner_rational(&self, u: &RationalVector, v: &RationalVector) -> BigRational {
        matrix::bilinear_rat(&self.gram, &u.to_rationals(), &v.to_rationals())
    }

    pub fn rescale(&self, n: i64) -> Result<GramLattice> {
        if n == 0 {
            return Err(Error::ZeroScale);
        }
        let f = BigInt::from(n);
        let gram = self.gram.iter().map(|r| r.iter().map(|x| x * &f).collect()).collect();
        let label = self.label.as_ref().map(|l| format!("{l}({n})"));
        Ok(GramLattice { gram, label })
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let (a, b) = (self.rank(), other.rank());
        let mut gram = vec![vec![BigInt::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                gram[a + i][a + j] = other.gram[i][j].clone();
            }
        }
        let label = match (&self.label, &other.label) {
            (Some(x), Some(y)) => Some(format!("{x}+{y}")),
            _ => None,
        };
        GramLattice { gram, label }
    }

    pub fn to_json(&self) -> GramLatticeJson {
        GramLatticeJson {
            rank: self.rank(),
            gram: self.gram.iter().flatten().cloned().collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_json(j: &GramLatticeJson) -> Result<Self> {
        if j.gram.len() != j.rank * j.rank {
            return Err(Error::Dimension { expected: j.rank * j.rank, got: j.gram.len() });
        }
        let gram = j.gram.chunks(j.rank.max(1)).map(|c| c.to_vec()).collect();
        Self::new(gram, j.label.as_deref())
    }

    /// Elementary divisors (> 1) of the Gram matrix with coset generators of `L^v / L`.
    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let s = matrix::smith(&self.gram);
        // generator k of L^v/L is (column k of V) / d_k
        let mut divisors = Vec::new();
        let mut generators = Vec::new();
        for (k, d) in s.diagonal.iter().enumerate() {
            let d = d.abs();
            if d.is_one() {
                continue;
            }
            let num: Vec<BigInt> = s.v.iter().map(|row| row[k].clone()).collect();
            let g = RationalVector::new(num, d.clone()).reduce_mod_lattice();
            divisors.push(d);
            generators.push(g);
        }
        DiscriminantGroup { elementary_divisors: divisors, generators }
    }

    pub fn is_two_elementary(&self) -> bool {
        self.discriminant_group().elementary_divisors.iter().all(|d| d == &BigInt::from(2))
    }

    /// `sigma` with `dim_F2 (2 L^v / 2 L) = 2 sigma`, for 2-elementary lattices.
    pub fn sigma(&self) -> Option<usize> {
        let dg = self.discriminant_group();
        if !self.is_two_elementary() || dg.elementary_divisors.len() % 2 != 0 {
            return None;
        }
        Some(dg.elementary_divisors.len() / 2)
    }

    /// Vectors of norm `target`. Complete for negative definite lattices; for
    /// indefinite lattices a box search (existence evidence only), and an
    /// error if `require_complete` is set.
    pub fn short_vectors(&self, target: i64, box_bound: i64, require_complete: bool) -> Result<ShortVectors> {
        let t = BigInt::from(target);
        let prob = QuadraticProblem::homogeneous(&self.gram);
        if self.is_negative_definite() {
            let mut vectors = enumerate::solve_definite(&prob, &t).expect("negative definite");
            vectors.sort();
            return Ok(ShortVectors { vectors, complete: true });
        }
        if require_complete {
            return Err(Error::CompletenessUnavailable);
        }
        let mut vectors = Vec::new();
        enumerate::search_indefinite(&prob, &t, box_bound, &mut |w| {
            vectors.push(w.to_vec());
            true
        });
        vectors.sort();
        Ok(ShortVectors { vectors, complete: false })
    }

    /// Roots (norm -2 vectors) of a negative definite lattice.
    pub fn roots(&self) -> Result<Vec<IntVector>> {
        Ok(self.short_vectors(-2, 0, true)?.vectors)
    }

    /// A vector `z = class (mod 2L)` with `z.z = target`. For indefinite
    /// lattices the box starts at `box_bound` and doubles up to [`MAX_BOX`].
    pub fn represent_class_with_norm(&self, class: &[u8], target: i64, box_bound: i64) -> Option<IntVector> {
        let base: Vec<BigInt> = class.iter().map(|&b| BigInt::from(b & 1)).collect();
        let prob = QuadraticProblem::coset_of_two(&self.gram, &base);
        let t = BigInt::from(target);
        let lift = |w: &[i64]| -> IntVector { w.iter().zip(class).map(|(&x, &c)| 2 * x + (c & 1) as i64).collect() };
        if self.is_negative_definite() {
            let mut found = None;
            enumerate::solve_definite_with(&prob, &t, &mut |w| {
                found = Some(lift(w));
                false
            });
            return found;
        }
        let mut bound = box_bound.max(1);
        loop {
            let mut found = None;
            enumerate::search_indefinite(&prob, &t, bound, &mut |w| {
                found = Some(lift(w));
                false
            });
            if found.is_some() || bound >= MAX_BOX {
                return found;
            }
            bound = (bound * 2).min(MAX_BOX);
        }
    }

    /// All even integral overlattices `L + Z x/2`, one per nonzero class of `L/2L`.
    pub fn index2_even_superlattices(&self) -> Vec<Superlattice> {
        let n = self.rank();
        assert!(n < 31, "class enumeration is exponential in the rank");
        let mut out = Vec::new();
        for bits in 1u32..(1u32 << n) {
            let x: IntVector = (0..n).map(|i| ((bits >> i) & 1) as i64).collect();
            // integrality: (x/2).L in Z  <=>  G x = 0 mod 2
            let xb: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
            let gx = matrix::mul_vec(&self.gram, &xb);
            if gx.iter().any(|v| v.is_odd()) {
                continue;
            }
            // evenness: (x/2)^2 = x^2/4 even  <=>  x^2 = 0 mod 8
            let nx = matrix::bilinear(&self.gram, &xb, &xb);
            if !nx.mod_floor(&BigInt::from(8)).is_zero() {
                continue;
            }
            out.push(Superlattice { class: x, half_norm: (nx / BigInt::from(4)).to_i64().unwrap() });
        }
        out
    }

    /// Gram matrix of `L + sum Z (x_k / 2)` in a Hermite basis.
    pub fn overlattice_by_halves(&self, halves: &[IntVector]) -> Result<(GramLattice, IntMatrix)> {
        let n = self.rank();
        let mut gens: IntMatrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::from(2) } else { BigInt::zero() }).collect())
            .collect();
        for h in halves {
            gens.push(h.iter().map(|&x| x.into()).collect());
        }
        // basis of 2 * overlattice
        let b = matrix::hermite_rows(&gens);
        let bg = matrix::mul(&b, &self.gram);
        let g2 = matrix::mul(&bg, &matrix::transpose(&b));
        let four = BigInt::from(4);
        let mut gram = Vec::with_capacity(n);
        for row in g2 {
            let mut r = Vec::with_capacity(n);
            for x in row {
                if !x.is_multiple_of(&four) {
                    return Err(Error::DiscriminantForm("overlattice is not integral".into()));
                }
                r.push(x / &four);
            }
            gram.push(r);
        }
        Ok((GramLattice::new(gram, None)?, b))
    }
}

/// Result of a norm search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVectors {
    pub vectors: Vec<IntVector>,
    /// `true` when the enumeration is provably complete.
    pub complete: bool,
}

/// An index-2 even overlattice `L + Z x/2`, recorded by `x` in `{0,1}^n` and `(x/2)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Superlattice {
    pub class: IntVector,
    pub half_norm: i64,
}

/// Rational vector `numerators / denominator` in a lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalVector {
    #[serde(with = "decimal::vec")]
    numerators: Vec<BigInt>,
    #[serde(with = "decimal")]
    denominator: BigInt,
}

impl RationalVector {
    pub fn new(numerators: Vec<BigInt>, denominator: BigInt) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        let mut g = denominator.abs();
        for x in &numerators {
            g = g.gcd(x);
        }
        let sign = if denominator.is_negative() { -BigInt::one() } else { BigInt::one() };
        let numerators = numerators.into_iter().map(|x| x * &sign / &g).collect();
        RationalVector { numerators, denominator: denominator.abs() / &g }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| x.into()).collect(), BigInt::one())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.numerators.iter().map(|x| BigRational::new(x.clone(), self.denominator.clone())).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.numerators.iter().map(|x| x * k).collect(), self.denominator.clone())
    }

    /// Representative with every coordinate in `[0, 1)`.
    pub fn reduce_mod_lattice(&self) -> Self {
        let nums = self.numerators.iter().map(|x| x.mod_floor(&self.denominator)).collect();
        Self::new(nums, self.denominator.clone())
    }
}

/// `L^v / L` with elementary divisors in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub elementary_divisors: Vec<BigInt>,
    pub generators: Vec<RationalVector>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.elementary_divisors.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn divisors_i64(&self) -> Vec<i64> {
        self.elementary_divisors.iter().map(|d| d.to_i64().unwrap()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_lattice, DynkinType};

    fn a1() -> GramLattice {
        GramLattice::from_i64(&[vec![-2]], Some("A1")).unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(GramLattice::from_i64(&[vec![0, 1], vec![2, 0]], None), Err(Error::NotSymmetric(0, 1)));
        assert_eq!(GramLattice::from_i64(&[vec![1, 1], vec![1, 1]], None), Err(Error::Degenerate));
        assert_eq!(
            GramLattice::new_even(matrix::from_i64(&[vec![-3]]), None),
            Err(Error::NotEven(0))
        );
    }

    #[test]
    fn a1_basics() {
        let l = a1();
        assert_eq!(l.det(), BigInt::from(-2));
        assert_eq!(l.discriminant_group().divisors_i64(), vec![2]);
        assert_eq!(l.short_vectors(-2, 0, true).unwrap().vectors, vec![vec![-1], vec![1]]);
        assert!(l.index2_even_superlattices().is_empty());
        assert_eq!(l.represent_class_with_norm(&[1], -4, 6), None);
        assert_eq!(l.rescale(1).unwrap().gram(), l.gram());
        assert_eq!(l.rescale(0), Err(Error::ZeroScale));
    }

    #[test]
    fn discriminant_generators_have_the_right_order() {
        for t in [DynkinType::a(3), DynkinType::d(4), DynkinType::d(5), DynkinType::e(7)] {
            let l = build_root_lattice(t).unwrap();
            let dg = l.discriminant_group();
            assert_eq!(dg.order(), l.det().abs());
            for (g, d) in dg.generators.iter().zip(&dg.elementary_divisors) {
                let scaled = g.scale(d.to_i64().unwrap());
                assert!(scaled.is_integral());
                // g is in the dual: G g integral
                let gv = matrix::mul_vec(l.gram(), g.numerators());
                assert!(gv.iter().all(|x| x.is_multiple_of(g.denominator())));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let l = build_root_lattice(DynkinType::d(4)).unwrap();
        let j = serde_json::to_string(&l.to_json()).unwrap();
        let back: GramLatticeJson = serde_json::from_str(&j).unwrap();
        assert_eq!(GramLattice::from_json(&back).unwrap(), l);
    }

    #[test]
    fn indefinite_completeness_is_refused() {
        let u = GramLattice::from_i64(&[vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(u.short_vectors(0, 2, true), Err(Error::CompletenessUnavailable));
        let sv = u.short_vectors(-2, 3, false).unwrap();
        assert!(!sv.complete);
        assert!(sv.vectors.iter().all(|v| u.norm(v) == BigInt::from(-2)));
        assert!(sv.vectors.contains(&vec![1, -1]));
    }
}
