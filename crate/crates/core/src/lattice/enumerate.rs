//! Fincke–Pohst enumeration with exact rational arithmetic.
//!
//! The general problem solved here is: find integer `w` with
//! `w^T A w + 2 l.w + c = target`. When `A` is negative definite the
//! solution set is finite and the enumeration is complete. When `A` has
//! signature `(1, n-1)` one coordinate is fixed inside a box and the
//! remaining negative-definite slice is enumerated completely.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::{self, IntMatrix, RatMatrix};

/// Quadratic function `w -> w^T A w + 2 l.w + c` on `Z^n`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    pub a: IntMatrix,
    pub l: Vec<BigInt>,
    pub c: BigInt,
}

impl QuadraticProblem {
    pub fn homogeneous(a: &IntMatrix) -> Self {
        let n = a.len();
        QuadraticProblem { a: a.clone(), l: vec![BigInt::zero(); n], c: BigInt::zero() }
    }

    /// The function `z -> z^T G z` restricted to the coset `base + 2 Z^n`,
    /// re-expressed in the coordinate `w` of `z = base + 2 w`.
    pub fn coset_of_two(g: &IntMatrix, base: &[BigInt]) -> Self {
        let four = BigInt::from(4);
        let a = g.iter().map(|r| r.iter().map(|x| x * &four).collect()).collect();
        let gb = matrix::mul_vec(g, base);
        let l = gb.iter().map(|x| x * 2).collect();
        let c = matrix::bilinear(g, base, base);
        QuadraticProblem { a, l, c }
    }

    pub fn value(&self, w: &[i64]) -> BigInt {
        let wb: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
        let mut v = matrix::bilinear(&self.a, &wb, &wb) + &self.c;
        for (li, wi) in self.l.iter().zip(&wb) {
            v += li * wi * 2;
        }
        v
    }

    /// Fix coordinate `j` to `a_j` and return the problem on the other coordinates.
    fn slice(&self, j: usize, aj: i64) -> QuadraticProblem {
        let n = self.a.len();
        let keep: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let x = BigInt::from(aj);
        let a = keep.iter().map(|&r| keep.iter().map(|&s| self.a[r][s].clone()).collect()).collect();
        let l = keep.iter().map(|&r| &self.l[r] + &self.a[r][j] * &x).collect();
        let c = &self.c + &self.l[j] * &x * 2 + &self.a[j][j] * &x * &x;
        QuadraticProblem { a, l, c }
    }
}

/// Precomputed Fincke–Pohst data for a positive definite form.
struct Ellipsoid {
    /// diagonal of the LDL^T style decomposition
    d: Vec<BigRational>,
    /// strictly upper coefficients `u[i][j]` for `j > i`
    u: RatMatrix,
}

impl Ellipsoid {
    fn new(p: &RatMatrix) -> Option<Self> {
        let n = p.len();
        let mut q = p.clone();
        for i in 0..n {
            if !q[i][i].is_positive() {
                return None;
            }
            for j in i + 1..n {
                let t = q[i][j].clone();
                q[j][i] = t;
                q[i][j] = &q[i][j] / &q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    let t = &q[k][i] * &q[i][l];
                    q[k][l] -= t;
                }
            }
        }
        let d = (0..n).map(|i| q[i][i].clone()).collect();
        Some(Ellipsoid { d, u: q })
    }

    /// Visit all integer `x` with `(x - center)^T P (x - center) <= bound`.
    fn for_each<F: FnMut(&[i64], &BigRational)>(&self, center: &[BigRational], bound: &BigRational, f: &mut F) {
        let n = self.d.len();
        if bound.is_negative() {
            return;
        }
        if n == 0 {
            f(&[], &BigRational::zero());
            return;
        }
        let mut x = vec![0i64; n];
        self.rec(n - 1, center, bound, &mut x, f);
    }

    fn rec<F: FnMut(&[i64], &BigRational)>(
        &self,
        i: usize,
        center: &[BigRational],
        remaining: &BigRational,
        x: &mut Vec<i64>,
        f: &mut F,
    ) {
        let n = self.d.len();
        let mut t = BigRational::zero();
        for j in i + 1..n {
            let yj = BigRational::from_integer(BigInt::from(x[j])) - &center[j];
            t += &self.u[i][j] * yj;
        }
        let c = &center[i] - &t;
        let ratio = remaining / &self.d[i];
        let s = ratio.floor().to_integer().sqrt();
        let s = s.to_i64().expect("enumeration radius overflow");
        let fl = c.floor().to_integer().to_i64().expect("center overflow");
        let lo = fl - s - 1;
        let hi = fl + s + 2;
        for xi in lo..=hi {
            let y = BigRational::from_integer(BigInt::from(xi)) - &c;
            let used = &self.d[i] * &y * &y;
            if &used > remaining {
                continue;
            }
            x[i] = xi;
            let rest = remaining - used;
            if i == 0 {
                f(x, &rest);
            } else {
                self.rec(i - 1, center, &rest, x, f);
            }
        }
        x[i] = 0;
    }
}

/// Data needed to enumerate a negative definite problem.
struct DefiniteSetup {
    ellipsoid: Ellipsoid,
    center: Vec<BigRational>,
    /// `w^T A w + 2 l.w + c = base - (w - center)^T P (w - center)` where `P = -A`
    base: BigRational,
}

fn definite_setup(prob: &QuadraticProblem) -> Option<DefiniteSetup> {
    let n = prob.a.len();
    let p: IntMatrix = prob.a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let prat = matrix::to_rational(&p);
    let ellipsoid = Ellipsoid::new(&prat)?;
    let center = if n == 0 {
        Vec::new()
    } else {
        let pinv = matrix::inverse(&p)?;
        let lr: Vec<BigRational> = prob.l.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        pinv.iter()
            .map(|row| row.iter().zip(&lr).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect::<Vec<_>>()
    };
    // value = -(w-c)^T P (w-c) + c^T P c + const
    let mut cpc = BigRational::zero();
    for i in 0..n {
        for j in 0..n {
            cpc += &center[i] * BigRational::from_integer(p[i][j].clone()) * &center[j];
        }
    }
    let base = cpc + BigRational::from_integer(prob.c.clone());
    Some(DefiniteSetup { ellipsoid, center, base })
}

/// All solutions of `prob(w) = target` for negative definite `A`.
/// Returns `None` if `A` is not negative definite.
pub fn solve_definite(prob: &QuadraticProblem, target: &BigInt) -> Option<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    solve_definite_with(prob, target, &mut |w| {
        out.push(w.to_vec());
        true
    })?;
    Some(out)
}

/// Like [`solve_definite`] but streams solutions; the callback returns
/// `false` to stop early. Returns `Some(stopped_early)`.
pub fn solve_definite_with<F: FnMut(&[i64]) -> bool>(
    prob: &QuadraticProblem,
    target: &BigInt,
    f: &mut F,
) -> Option<bool> {
    let setup = definite_setup(prob)?;
    let t = BigRational::from_integer(target.clone());
    let bound = &setup.base - &t;
    let mut stop = false;
    setup.ellipsoid.for_each(&setup.center, &bound, &mut |x, rest| {
        if stop {
            return;
        }
        // exact value reached when the residual budget is zero
        if rest.is_zero() && !f(x) {
            stop = true;
        }
    });
    Some(stop)
}

/// All `w` with `prob(w) >= floor` (values are <= base since A is negative definite),
/// reported with their values.
pub fn values_above(prob: &QuadraticProblem, floor: &BigInt) -> Option<Vec<(Vec<i64>, BigInt)>> {
    let setup = definite_setup(prob)?;
    let bound = &setup.base - BigRational::from_integer(floor.clone());
    let mut out = Vec::new();
    setup.ellipsoid.for_each(&setup.center, &bound, &mut |x, _| {
        out.push((x.to_vec(), prob.value(x)));
    });
    Some(out)
}

/// Index `j` such that deleting row/column `j` leaves a negative definite form.
pub fn hyperbolic_slice_index(a: &IntMatrix) -> Option<usize> {
    let n = a.len();
    (0..n).find(|&j| {
        let keep: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let sub: IntMatrix = keep.iter().map(|&r| keep.iter().map(|&s| a[r][s].clone()).collect()).collect();
        let (pos, _, zero) = matrix::inertia(&sub);
        pos == 0 && zero == 0
    })
}

/// Order `0, 1, -1, 2, -2, ...` up to `bound`.
pub fn centered_range(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]))
}

/// Search an indefinite problem: the hyperbolic coordinate ranges over a box,
/// the complementary slice is enumerated completely. Falls back to a plain
/// box when no negative definite slice exists. The callback returns `false`
/// to stop.
pub fn search_indefinite<F: FnMut(&[i64]) -> bool>(
    prob: &QuadraticProblem,
    target: &BigInt,
    box_bound: i64,
    f: &mut F,
) -> bool {
    let n = prob.a.len();
    if let Some(j) = hyperbolic_slice_index(&prob.a) {
        for aj in centered_range(box_bound) {
            let sub = prob.slice(j, aj);
            let stopped = solve_definite_with(&sub, target, &mut |w| {
                let mut full = Vec::with_capacity(n);
                full.extend_from_slice(&w[..j]);
                full.push(aj);
                full.extend_from_slice(&w[j..]);
                f(&full)
            })
            .expect("slice is negative definite");
            if stopped {
                return true;
            }
        }
        false
    } else {
        let mut w = vec![-box_bound; n];
        loop {
            if &prob.value(&w) == target && !f(&w) {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                if w[k] < box_bound {
                    w[k] += 1;
                    break;
                }
                w[k] = -box_bound;
                k += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::from_i64;

    #[test]
    fn a2_roots() {
        let g = from_i64(&[vec![-2, 1], vec![1, -2]]);
        let sols = solve_definite(&QuadraticProblem::homogeneous(&g), &BigInt::from(-2)).unwrap();
        assert_eq!(sols.len(), 6);
    }

    #[test]
    fn shifted_coset_in_a1() {
        // z = 1 + 2w in A1, z^2 = -2 z^2 ... values -2, -18, ...
        let g = from_i64(&[vec![-2]]);
        let p = QuadraticProblem::coset_of_two(&g, &[BigInt::from(1)]);
        let sols = solve_definite(&p, &BigInt::from(-2)).unwrap();
        assert_eq!(sols, vec![vec![-1], vec![0]]);
        assert!(solve_definite(&p, &BigInt::from(-4)).unwrap().is_empty());
    }

    #[test]
    fn hyperbolic_plane_isotropic_vectors_in_box() {
        let u = from_i64(&[vec![0, 1], vec![1, 0]]);
        // no negative definite slice of size 1: [0] is degenerate
        assert_eq!(hyperbolic_slice_index(&u), None);
        let mut count = 0;
        search_indefinite(&QuadraticProblem::homogeneous(&u), &BigInt::zero(), 2, &mut |_| {
            count += 1;
            true
        });
        // (x, 0) and (0, y) with |x|,|y| <= 2, origin counted once
        assert_eq!(count, 9);
    }
}
