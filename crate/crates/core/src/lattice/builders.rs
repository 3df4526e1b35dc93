//! The fixed lattices: `M`, `E(2)`, `N = M + E(2)`, `E1` and `D4^3`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{matrix, GramLattice, IntVector};
use crate::roots::{build_root_lattice, e10, DynkinType};

/// Rank of `M`.
pub const M_RANK: usize = 12;

/// `M = sum Z e_i + Z h` with `e_i.e_j = -2 delta_ij`, `h = (e_1 + ... + e_12)/2`,
/// in the basis `e_1, ..., e_11, h`.
pub fn m_lattice() -> GramLattice {
    let n = M_RANK;
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate().take(n - 1) {
        row[i] = -2;
        row[n - 1] = -1;
    }
    for j in 0..n - 1 {
        g[n - 1][j] = -1;
    }
    g[n - 1][n - 1] = -6;
    GramLattice::from_i64(&g, Some("M")).expect("M is nondegenerate")
}

/// Coordinates of `sum c_i e_i` in the basis of [`m_lattice`].
pub fn m_coords(c: &[i64]) -> IntVector {
    assert_eq!(c.len(), M_RANK);
    // v = sum_{i<12} (c_i - c_12) e_i + 2 c_12 h
    let last = c[M_RANK - 1];
    let mut out: IntVector = c[..M_RANK - 1].iter().map(|x| x - last).collect();
    out.push(2 * last);
    out
}

/// Coordinates of `(1/2) sum c_i e_i`, if it lies in `M`.
pub fn m_coords_half(c: &[i64]) -> Option<IntVector> {
    assert_eq!(c.len(), M_RANK);
    // (1/2) sum c_i e_i = sum_{i<12} (c_i - c_12)/2 e_i + c_12 h
    let last = c[M_RANK - 1];
    let mut out = Vec::with_capacity(M_RANK);
    for x in &c[..M_RANK - 1] {
        let d = x - last;
        if d % 2 != 0 {
            return None;
        }
        out.push(d / 2);
    }
    out.push(last);
    Some(out)
}

/// `E(2)`: the labelled `E10(-1)` with its form doubled.
pub fn e_two() -> GramLattice {
    e10().rescale(2).expect("nonzero scale").with_label("E(2)")
}

/// `N = M + E(2)`, rank 22, with `M` in coordinates `0..12`.
pub fn n_lattice() -> GramLattice {
    m_lattice().direct_sum(&e_two()).with_label("N")
}

/// A vector `x` in `E` with `x^2 = -4`: `a1 + a3`, two orthogonal simple roots.
pub fn e1_glue() -> IntVector {
    let mut x = vec![0i64; 10];
    x[0] = 1;
    x[2] = 1;
    x
}

/// `E1 = E(2) + Z (x/2)` for `x` in `E` with `x^2 = -4`, so `x/2` is a root.
pub fn e1_lattice() -> GramLattice {
    let (l, _) = e_two().overlattice_by_halves(&[e1_glue()]).expect("x/2 is integral");
    l.with_label("E1")
}

/// `D4 + D4 + D4`.
pub fn d4_cubed() -> GramLattice {
    let d4 = build_root_lattice(DynkinType::d(4)).expect("legal");
    d4.direct_sum(&d4).direct_sum(&d4).with_label("3D4")
}

/// Direct sum of root lattices in the given order.
pub fn root_lattice_sum(types: &[DynkinType]) -> GramLattice {
    let mut it = types.iter();
    let first = build_root_lattice(*it.next().expect("nonempty")).expect("legal");
    it.fold(first, |acc, t| acc.direct_sum(&build_root_lattice(*t).expect("legal")))
}

/// Determinant after adjoining the given halves; checks `[L':L] = 2^k`.
pub fn det_after_halves(l: &GramLattice, halves: &[IntVector]) -> BigInt {
    let (o, b) = l.overlattice_by_halves(halves).expect("integral");
    debug_assert!(!matrix::det(&b).is_zero());
    o.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn constants() {
        assert_eq!(m_lattice().det(), BigInt::from(1 << 10));
        assert_eq!(e_two().det(), -BigInt::from(1 << 10));
        assert_eq!(n_lattice().det(), -BigInt::from(1 << 20));
        assert_eq!(n_lattice().rank(), 22);
        assert_eq!(e1_lattice().det(), -BigInt::from(1 << 8));
        assert!(e1_lattice().is_two_elementary());
        assert!(n_lattice().is_two_elementary());
        assert_eq!(n_lattice().sigma(), Some(10));
    }

    #[test]
    fn m_coordinates() {
        let m = m_lattice();
        let mut c = vec![0i64; 12];
        c[0] = 1;
        c[1] = 1;
        let v = m_coords(&c);
        assert_eq!(m.norm(&v), BigInt::from(-4));
        let mut j = vec![0i64; 12];
        for x in j.iter_mut().take(4) {
            *x = 1;
        }
        // (e1+e2+e3+e4)/2 is not in M
        assert_eq!(m_coords_half(&j), None);
        let all = m_coords_half(&[1; 12]).unwrap();
        assert_eq!(m.norm(&all), BigInt::from(-6));
    }
}
