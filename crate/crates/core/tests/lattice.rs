use lattice_lab::lattice::builders::{e1_lattice, e_two, m_lattice, n_lattice};
use lattice_lab::lattice::GramLattice;
use lattice_lab::roots::{build_root_lattice, e10, DynkinType};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

#[test]
fn root_counts() {
    for (t, n) in [(DynkinType::a(1), 2), (DynkinType::d(4), 24), (DynkinType::e(8), 240), (DynkinType::e(7), 126)] {
        let roots = build_root_lattice(t).unwrap().roots().unwrap();
        assert_eq!(roots.len(), n, "{t}");
        for r in &roots {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            assert!(roots.contains(&neg));
        }
    }
}

#[test]
fn discriminant_groups() {
    let e8 = build_root_lattice(DynkinType::e(8)).unwrap();
    assert!(e8.discriminant_group().elementary_divisors.is_empty());
    let d4 = build_root_lattice(DynkinType::d(4)).unwrap();
    assert_eq!(d4.discriminant_group().divisors_i64(), vec![2, 2]);
    assert!(d4.is_two_elementary());
    let a3 = build_root_lattice(DynkinType::a(3)).unwrap();
    assert_eq!(a3.discriminant_group().divisors_i64(), vec![4]);
    assert!(!a3.is_two_elementary());
}

#[test]
fn rescaled_e10_determinant() {
    assert_eq!(e_two().det(), pow2(10) * e10().det());
    assert_eq!(n_lattice().det(), -pow2(20));
    assert_eq!(e1_lattice().det(), -pow2(8));
}

#[test]
fn index_two_steps_divide_determinant_by_four() {
    for l in [m_lattice(), e_two()] {
        let sup = l.index2_even_superlattices();
        for s in sup.iter().take(20) {
            let (o, _) = l.overlattice_by_halves(&[s.class.clone()]).unwrap();
            assert_eq!(o.det() * 4, l.det());
            assert!(o.is_even());
        }
    }
}

/// Classes of `M/2M` giving even superlattices, counted from the description
/// by subsets `J` of size 4 or 8 (a class and its complement coincide).
fn m_class_oracle() -> usize {
    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    // |J| in {4, 8}, J ~ complement(J); |J| = 0, 12 is the trivial class
    (binom(12, 4) + binom(12, 8)) / 2
}

#[test]
fn m_superlattices_contain_roots() {
    let m = m_lattice();
    let sup = m.index2_even_superlattices();
    assert_eq!(sup.len(), m_class_oracle());
    for s in &sup {
        let class: Vec<u8> = s.class.iter().map(|&x| x as u8).collect();
        let z = m.represent_class_with_norm(&class, -8, 0).expect("coset root");
        assert_eq!(m.norm(&z), BigInt::from(-8));
    }
}

/// Nonzero isotropic vectors of a split 10-dimensional F2 quadratic form.
fn split_isotropic_count(n: u32) -> usize {
    (pow2(2 * n - 1) + pow2(n - 1) - 1u32).try_into().unwrap()
}

#[test]
fn e2_superlattices_contain_roots() {
    let e = e10();
    let sup = e_two().index2_even_superlattices();
    assert_eq!(sup.len(), split_isotropic_count(5));
    for s in &sup {
        let class: Vec<u8> = s.class.iter().map(|&x| x as u8).collect();
        let z = e.represent_class_with_norm(&class, -4, 6).expect("norm -4 lift within the box");
        assert_eq!(e.norm(&z), BigInt::from(-4));
        for (a, b) in z.iter().zip(&class) {
            assert_eq!(a.rem_euclid(2), *b as i64);
        }
    }
}

#[test]
fn simple_root_class_represents_itself() {
    let e = e10();
    let mut class = vec![0u8; 10];
    class[4] = 1;
    let z = e.represent_class_with_norm(&class, -2, 6).unwrap();
    assert_eq!(e.norm(&z), BigInt::from(-2));
}

fn small_definite() -> impl Strategy<Value = GramLattice> {
    prop::sample::select(vec![
        DynkinType::a(1),
        DynkinType::a(2),
        DynkinType::a(4),
        DynkinType::d(4),
        DynkinType::d(5),
        DynkinType::e(6),
    ])
    .prop_map(|t| build_root_lattice(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn det_equals_disc_order(a in small_definite(), b in small_definite()) {
        let l = a.direct_sum(&b);
        prop_assert_eq!(l.det().magnitude().clone(), l.discriminant_group().order().magnitude().clone());
    }

    #[test]
    fn rescale_multiplies_det(l in small_definite(), n in 1i64..5) {
        let r = l.rescale(n).unwrap();
        prop_assert_eq!(r.det(), l.det() * BigInt::from(n).pow(l.rank() as u32));
    }

    #[test]
    fn short_vectors_closed_under_negation(l in small_definite(), k in 1i64..4) {
        let sv = l.short_vectors(-2 * k, 0, true).unwrap();
        prop_assert!(sv.complete);
        for v in &sv.vectors {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            prop_assert!(sv.vectors.contains(&neg));
            prop_assert_eq!(l.norm(v), BigInt::from(-2 * k));
        }
    }
}
