//! The fields `GF(2^m)` for `1 <= m <= 20`, elements as bit-packed polynomials.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 20;

/// Lexicographically smallest irreducible polynomial of each degree `1..=20`.
pub const MODULI: [u64; MAX_DEGREE as usize] = [
    0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003, 0x1002b,
    0x20009, 0x40009, 0x80027, 0x100009,
];

pub type Elem = u32;

/// `GF(2^m) = F2[x] / (modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionField {
    degree: u32,
    modulus: u64,
}

fn clmul(a: u64, b: u64) -> u64 {
    let mut r = 0u64;
    let mut b = b;
    let mut a = a;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

fn poly_mod(mut a: u64, p: u64) -> u64 {
    let dp = 63 - p.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= dp {
        a ^= p << (63 - a.leading_zeros() - dp);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `p` of degree `d` is irreducible iff `x^(2^d) = x mod p` and
/// `gcd(x^(2^(d/l)) - x, p) = 1` for each prime `l | d`.
pub fn is_irreducible(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let d = 63 - p.leading_zeros();
    let sq = |a: u64| poly_mod(clmul(a, a), p);
    let x_pow_2k = |k: u32| (0..k).fold(poly_mod(2, p), |acc, _| sq(acc));
    if x_pow_2k(d) != poly_mod(2, p) {
        return false;
    }
    let mut n = d;
    let mut l = 2;
    while n > 1 {
        if n % l == 0 {
            while n % l == 0 {
                n /= l;
            }
            if poly_gcd(p, x_pow_2k(d / l) ^ poly_mod(2, p)) != 1 {
                return false;
            }
        }
        l += 1;
    }
    true
}

impl ExtensionField {
    pub fn new(degree: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::FieldDegree(degree));
        }
        let modulus = MODULI[degree as usize - 1];
        assert!(is_irreducible(modulus), "tabulated modulus must be irreducible");
        Ok(ExtensionField { degree, modulus })
    }

    pub fn prime() -> Self {
        ExtensionField::new(1).unwrap()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        poly_mod(clmul(a as u64, b as u64), self.modulus) as Elem
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut r: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `inv(0)` panics.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.order() - 2)
    }

    /// `a^(2^k)`.
    pub fn frob(&self, a: Elem, k: u32) -> Elem {
        (0..k % self.degree).fold(a, |acc, _| self.square(acc))
    }

    /// Absolute trace to `F2`.
    pub fn trace(&self, a: Elem) -> Elem {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.degree {
            t ^= x;
            x = self.square(x);
        }
        debug_assert!(t <= 1);
        t
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.order()) as Elem
    }

    /// A root `t` of `a t^2 + b t + c = 0`, if one exists.
    pub fn solve_quadratic(&self, a: Elem, b: Elem, c: Elem) -> Option<Elem> {
        if a == 0 {
            if b == 0 {
                return (c == 0).then_some(0);
            }
            return Some(self.mul(c, self.inv(b)));
        }
        if b == 0 {
            // t^2 = c / a, square roots are unique
            let s = self.mul(c, self.inv(a));
            return Some(self.frob(s, self.degree - 1));
        }
        // t = (b/a) u with u^2 + u = a c / b^2
        let d = self.mul(self.mul(a, c), self.inv(self.square(b)));
        let u = self.artin_schreier(d)?;
        Some(self.mul(self.mul(b, self.inv(a)), u))
    }

    /// A solution of `u^2 + u = d`, found by Gaussian elimination of the
    /// `F2`-linear map `u -> u^2 + u`.
    pub fn artin_schreier(&self, d: Elem) -> Option<Elem> {
        let m = self.degree as usize;
        // columns: images of basis vectors x^k
        let cols: Vec<Elem> = (0..m).map(|k| self.square(1 << k) ^ (1 << k)).collect();
        // solve sum u_k cols[k] = d over F2, augmented row reduction on bit columns
        let mut rows: Vec<(u64, u8)> = (0..m)
            .map(|i| {
                let mut r = 0u64;
                for (k, c) in cols.iter().enumerate() {
                    if (c >> i) & 1 == 1 {
                        r |= 1 << k;
                    }
                }
                (r, ((d >> i) & 1) as u8)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m {
            if let Some(p) = (row..m).find(|&r| (rows[r].0 >> col) & 1 == 1) {
                rows.swap(row, p);
                for r in 0..m {
                    if r != row && (rows[r].0 >> col) & 1 == 1 {
                        rows[r].0 ^= rows[row].0;
                        rows[r].1 ^= rows[row].1;
                    }
                }
                pivots.push(col);
                row += 1;
            }
        }
        if rows[row..].iter().any(|r| r.1 == 1) {
            return None;
        }
        let mut u: Elem = 0;
        for (r, &col) in pivots.iter().enumerate() {
            if rows[r].1 == 1 {
                u |= 1 << col;
            }
        }
        debug_assert_eq!(self.square(u) ^ u, d);
        Some(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moduli_are_smallest_irreducible() {
        for (i, &p) in MODULI.iter().enumerate() {
            assert!(is_irreducible(p));
            let d = i as u32 + 1;
            assert_eq!(63 - p.leading_zeros(), d);
            assert!(((1u64 << d)..p).all(|q| !is_irreducible(q)));
        }
    }

    #[test]
    fn field_axioms_gf256() {
        let f = ExtensionField::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            assert_eq!(f.frob(a, 8), a);
        }
    }

    #[test]
    fn quadratic_solver() {
        let f = ExtensionField::new(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            let brute = (0..64).find(|&t| f.mul(a, f.square(t)) ^ f.mul(b, t) ^ c == 0);
            let got = f.solve_quadratic(a, b, c);
            assert_eq!(got.is_some(), brute.is_some());
            if let Some(t) = got {
                assert_eq!(f.mul(a, f.square(t)) ^ f.mul(b, t) ^ c, 0);
            }
        }
    }

    #[test]
    fn trace_of_one_is_degree_parity() {
        for m in 1..=MAX_DEGREE {
            assert_eq!(ExtensionField::new(m).unwrap().trace(1), m % 2);
        }
        assert!(ExtensionField::new(0).is_err());
        assert!(ExtensionField::new(21).is_err());
    }
}
