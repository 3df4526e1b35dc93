use lattice_lab::gf2::disc::{DiscriminantSpace, WorkingSpace};
use lattice_lab::gf2::field::ExtensionField;
use lattice_lab::gf2::linalg::Subspace;
use lattice_lab::gf2::quadratic::{apply_map, witt_extend, F2QuadraticSpace};
use lattice_lab::lattice::builders::{m_coords, n_lattice};
use lattice_lab::period::{sample_period, Constraint};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn n0() -> DiscriminantSpace {
    DiscriminantSpace::n0().unwrap()
}

/// `e_i + e_j` in the coordinates of `N`, built from the `M` basis directly.
fn pair_in_n(i: usize, j: usize) -> Vec<i64> {
    let mut c = vec![0i64; 12];
    c[i] += 1;
    c[j] += 1;
    let mut v = m_coords(&c);
    v.extend([0; 10]);
    v
}

/// Isometry check by brute force on basis vectors and pairs.
fn preserves_form(s: &F2QuadraticSpace, images: &[u32]) -> bool {
    let n = s.dim();
    (0..n).all(|i| s.q(images[i]) == s.q(1 << i))
        && (0..n).all(|i| (0..n).all(|j| s.b(images[i], images[j]) == s.b(1 << i, 1 << j)))
}

#[test]
fn n0_dimensions_and_parts() {
    let d = n0();
    let s = d.summary().unwrap();
    assert_eq!(s.dim, 20);
    assert_eq!((s.m_part_dim, s.e_part_dim), (10, 10));
    assert_eq!(d.m_part() | d.e_part(), (1 << 20) - 1);
    assert_eq!(d.m_part() & d.e_part(), 0);
    for a in d.part_coords(0) {
        for b in d.part_coords(1) {
            assert_eq!(d.space().b(1 << a, 1 << b), 0);
        }
    }
}

#[test]
fn pair_classes_have_q_one() {
    let d = n0();
    let n = n_lattice();
    for i in 0..12 {
        for j in i + 1..12 {
            let x = pair_in_n(i, j);
            assert_eq!(n.norm(&x), BigInt::from(-4));
            let cls = d.coords(&x).unwrap();
            assert_eq!(cls, d.e_pair(i, j));
            assert_eq!(d.space().q(cls), 1);
            assert_eq!(cls & d.e_part(), 0);
        }
    }
}

#[test]
fn arf_by_counting_zeros() {
    let d = n0();
    let s = d.space();
    let zeros = (0u32..1 << 20).filter(|&v| s.q(v) == 0).count();
    // 2^19 - 2^9 zeros for the minus type
    assert_eq!(zeros, (1 << 19) - (1 << 9));
    assert_eq!(s.arf_and_witt().unwrap(), (1, 9));
}

#[test]
fn split_over_even_degree() {
    let d = n0();
    for m in [2, 4, 6] {
        let f = ExtensionField::new(m).unwrap();
        assert_eq!(d.space().arf_and_witt_over(&f).unwrap(), (0, 10));
    }
    for m in [1, 3] {
        let f = ExtensionField::new(m).unwrap();
        assert_eq!(d.space().arf_and_witt_over(&f).unwrap(), (1, 9));
    }
    // a witness over GF(4): ten independent vectors on which q and b vanish
    let f = ExtensionField::new(2).unwrap();
    let v = sample_period(11, f, &Constraint::Any).unwrap();
    let basis = v.subspace().basis();
    assert_eq!(basis.len(), 10);
    for x in basis {
        assert_eq!(d.space().q_ext(&f, x), 0);
        for y in basis {
            assert_eq!(d.space().b_ext(&f, x, y), 0);
        }
    }
}

#[test]
fn witt_extension_to_a_pair_class() {
    let d = n0();
    let s = d.space();
    let target = d.e_pair(0, 1);
    let alpha = (1u32..1 << 20).find(|&x| x & !d.e_part() == 0 && s.q(x) == 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = witt_extend(s, &[(alpha, target)], &mut rng).unwrap();
    assert_eq!(apply_map(&g, alpha), target);
    assert!(preserves_form(s, &g));
    let id: Vec<u32> = (0..20).map(|i| 1 << i).collect();
    let pinned: Vec<(u32, u32)> = id.iter().map(|&x| (x, x)).collect();
    assert_eq!(witt_extend(s, &pinned, &mut rng).unwrap(), id);
    let zero_q = (1u32..).find(|&x| s.q(x) == 0).unwrap();
    assert!(witt_extend(s, &[(alpha, zero_q)], &mut rng).is_err());
}

#[test]
fn working_space_carries_pairs_to_pairs() {
    let d = n0();
    let w = WorkingSpace::new(&d).unwrap();
    for i in 0..12 {
        for j in i + 1..12 {
            assert_eq!(w.project_bits((1 << i) | (1 << j)), d.coords(&pair_in_n(i, j)));
        }
    }
}

#[test]
fn frobenius_on_subspaces() {
    let f = ExtensionField::new(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<u32>> = (0..4).map(|_| (0..20).map(|_| f.random(&mut rng)).collect()).collect();
    let s = Subspace::span(f, 20, &rows);
    assert_eq!(s.frobenius().dim(), s.dim());
    assert_eq!(s.frobenius_power(8), s);
    assert_ne!(s.frobenius(), s);
    let r = Subspace::from_bits(f, 20, &[0b1011, 1 << 19]);
    assert_eq!(r.frobenius(), r);
    assert_eq!(Subspace::whole(f, 20).rational_part().len(), 20);
    // x generates GF(256) over F2, so the line through (1, x) has no rational point
    let line = Subspace::span(f, 20, &[[vec![1, 2], vec![0; 18]].concat()]);
    assert!(line.rational_part().is_empty());
    // semilinearity: F(lambda v) spans the same line as F(v)
    let lam = f.random(&mut rng) | 1;
    let scaled: Vec<u32> = rows[0].iter().map(|&x| f.mul(lam, x)).collect();
    assert_eq!(Subspace::span(f, 20, &[scaled]).frobenius(), Subspace::span(f, 20, &rows[..1]).frobenius());
}

#[test]
fn periods_are_maximal_isotropic() {
    let d = n0();
    let f = ExtensionField::new(8).unwrap();
    let ext = d.extend_scalars(f);
    for seed in 0..3 {
        let v = sample_period(seed, f, &Constraint::Any).unwrap();
        assert!(ext.is_totally_isotropic(v.subspace()));
        assert_eq!(ext.orthogonal_within(v.subspace(), &Subspace::whole(f, 20)), *v.subspace());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witt_extension_is_an_isometry(seed in any::<u64>()) {
        let d = n0();
        let s = d.space();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: u32 = rng.gen_range(1..1 << 20);
        let y = loop {
            let y: u32 = rng.gen_range(1..1 << 20);
            if s.q(y) == s.q(x) {
                break y;
            }
        };
        let g = witt_extend(s, &[(x, y)], &mut rng).unwrap();
        prop_assert_eq!(apply_map(&g, x), y);
        prop_assert!(preserves_form(s, &g));
    }

    #[test]
    fn rational_part_matches_frobenius_core(seed in any::<u64>(), k in 1usize..6, r in 0usize..4) {
        let f = ExtensionField::new(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<Vec<u32>> = (0..k).map(|_| (0..12).map(|_| f.random(&mut rng)).collect()).collect();
        rows.extend((0..r).map(|_| (0..12).map(|_| rng.gen_range(0..2)).collect::<Vec<u32>>()));
        let s = Subspace::span(f, 12, &rows);
        let core = s.frobenius_core();
        prop_assert_eq!(s.rational_part().len(), core.dim());
        prop_assert!(s.contains_space(&Subspace::from_bits(f, 12, &s.rational_part())));
    }

    #[test]
    fn q_is_a_quadratic_refinement(x in 0u32..1 << 20, y in 0u32..1 << 20) {
        let d = n0();
        let s = d.space();
        prop_assert_eq!(s.q(x ^ y), s.q(x) ^ s.q(y) ^ s.b(x, y));
        prop_assert_eq!(s.b(x, x), 0);
    }
}
