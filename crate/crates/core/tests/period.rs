use lattice_lab::gf2::disc::DiscriminantSpace;
use lattice_lab::gf2::field::ExtensionField;
use lattice_lab::gf2::linalg::Subspace;
use lattice_lab::gf2::quadratic::BitSpan;
use lattice_lab::period::{
    context, etale_equivalence_check, in_m0, in_m1, is_12a1, is_period_point, nonfree_map_injective,
    picard_overlattice, rationality_check, report, sample_period, sample_with_stats, tangent_space, Constraint,
    PeriodJson, PeriodPoint, DEFAULT_BUDGET,
};
use lattice_lab::roots::e10;
use lattice_lab::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn field(m: u32) -> ExtensionField {
    ExtensionField::new(m).unwrap()
}

fn rational_elements(v: &PeriodPoint) -> Vec<u32> {
    let mut s = BitSpan::new();
    for &r in v.rational_part() {
        s.insert(r);
    }
    s.elements()
}

/// `det N(V)` for a rational part of dimension `r`: `-2^20 / 4^r`.
fn expected_det(r: usize) -> BigInt {
    -(BigInt::from(1) << (20 - 2 * r))
}

#[test]
fn generic_samples_satisfy_every_clause() {
    let f = field(8);
    for seed in 0..6 {
        let v = sample_period(seed, f, &Constraint::Generic).unwrap();
        assert!(is_period_point(v.subspace()).unwrap().valid);
        assert!(in_m0(&v).in_m0);
        assert!(is_12a1(&v));
        let m1 = in_m1(&v);
        assert!(m1.in_m1 && m1.defects.is_empty() && !m1.meets_m_part);
        let t = tangent_space(&v).unwrap();
        assert_eq!(t.dim(), 2);
        let nf = nonfree_map_injective(&t);
        assert!(nf.injective);
        assert!(nf.min_point_rank >= 1);
        let e = etale_equivalence_check(&v).unwrap();
        assert!(e.lhs && e.rhs && e.agree);
        let rat = rationality_check(&v);
        assert!(rat.projection_rational && rat.contains_complement);
        // a generic sample meets neither part: it is the graph of an isometry
        let ctx = context();
        assert_eq!(v.subspace().intersect(&ctx.e_space(f)).dim(), 0);
        assert_eq!(v.subspace().intersect(&ctx.m_space(f)).dim(), 0);
    }
}

#[test]
fn defect_samples_fail_at_the_forced_pair() {
    let f = field(8);
    for (seed, pair) in [(0, (0, 1)), (1, (3, 7)), (2, (10, 11))] {
        let v = sample_period(seed, f, &Constraint::Defect(pair.0, pair.1)).unwrap();
        assert!(is_period_point(v.subspace()).unwrap().valid);
        let m1 = in_m1(&v);
        assert!(!m1.in_m1);
        assert!(m1.defects.contains(&pair));
        // the defect vector alpha + e_ij is rational with q(alpha) = 1
        let d = &context().disc;
        let cls = d.e_pair(pair.0, pair.1);
        let alpha = rational_elements(&v).into_iter().find(|x| (x ^ cls) & !d.e_part() == 0).unwrap() ^ cls;
        assert_eq!(d.space().q(alpha), 1);
        let nf = nonfree_map_injective(&tangent_space(&v).unwrap());
        assert!(!nf.injective);
        assert!(nf.failing_pairs.contains(&pair));
        assert_eq!(nf.failing_pairs, m1.defects);
        assert!(nf.diagonal_images);
        let e = etale_equivalence_check(&v).unwrap();
        assert_eq!((e.lhs, e.rhs, e.agree), (false, false, true));
    }
}

#[test]
fn non_12a1_samples_have_rational_m_vectors() {
    let f = field(8);
    let m = context().disc.m_part();
    for seed in 0..3 {
        let v = sample_period(seed, f, &Constraint::NonTwelveA1).unwrap();
        assert!(is_period_point(v.subspace()).unwrap().valid);
        assert!(!is_12a1(&v));
        assert!(rational_elements(&v).iter().any(|&x| x != 0 && x & !m == 0));
        let m1 = in_m1(&v);
        assert!(m1.meets_m_part && !m1.in_m1);
        assert!(matches!(etale_equivalence_check(&v), Err(Error::PeriodPrecondition(_))));
        assert!(rationality_check(&v).contains_complement);
    }
}

#[test]
fn rational_e_classes_give_root_witnesses() {
    let d = DiscriminantSpace::n0().unwrap();
    let w = (1u32..1 << 20).find(|&x| x & !d.e_part() == 0 && d.space().q(x) == 0).unwrap();
    let v = sample_period(4, field(8), &Constraint::Contains(w)).unwrap();
    assert!(v.subspace().contains(&(0..20).map(|i| (w >> i) & 1).collect::<Vec<u32>>()));
    let r = in_m0(&v);
    assert!(!r.in_m0);
    let cls = r.rational_e_class.unwrap();
    let z = r.witness.unwrap();
    assert_eq!(e10().norm(&z), BigInt::from(-4));
    let lift = d.lift(cls);
    for (a, b) in z.iter().zip(&lift[12..]) {
        assert_eq!((a - b).rem_euclid(2), 0);
    }
}

#[test]
fn picard_lattices_are_even_and_two_elementary() {
    for (m, seed) in [(4, 0), (6, 1), (8, 2), (12, 3)] {
        let v = sample_period(seed, field(m), &Constraint::Any).unwrap();
        let p = picard_overlattice(&v).unwrap();
        assert!(p.even && p.two_elementary);
        assert_eq!(p.index_exponent, v.rational_part().len());
        assert_eq!(p.index_exponent, 10 - m as usize / 2);
        assert_eq!(p.det, expected_det(p.index_exponent));
    }
}

#[test]
fn invalid_subspaces_are_diagnosed() {
    let f = field(4);
    let d = is_period_point(&Subspace::whole(f, 20)).unwrap();
    assert!(!d.valid && d.failure.is_some());
    let v = sample_period(0, f, &Constraint::Any).unwrap();
    let r = Subspace::from_bits(f, 20, v.rational_part());
    let d = is_period_point(&r).unwrap();
    assert!(!d.valid && d.totally_isotropic);
    assert!(matches!(is_period_point(&Subspace::zero(f, 22)), Err(Error::WrongAmbient { .. })));
}

#[test]
fn sampler_refusals() {
    assert!(sample_period(0, field(5), &Constraint::Any).is_err());
    assert!(sample_period(0, field(6), &Constraint::Generic).is_err());
    assert!(sample_period(0, field(8), &Constraint::Defect(3, 3)).is_err());
    let (_, stats) = sample_with_stats(0, field(8), &Constraint::Generic, DEFAULT_BUDGET).unwrap();
    assert!(stats.attempts >= 1);
}

#[test]
fn samples_are_deterministic_and_serializable() {
    let f = field(8);
    let a = sample_period(42, f, &Constraint::Defect(2, 5)).unwrap();
    let b = sample_period(42, f, &Constraint::Defect(2, 5)).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let text = serde_json::to_string(&a.to_json()).unwrap();
    let back: PeriodJson = serde_json::from_str(&text).unwrap();
    let c = PeriodPoint::from_json(&back).unwrap();
    assert_eq!(c.subspace(), a.subspace());
    assert_eq!(report(&c).unwrap(), report(&a).unwrap());
    assert_ne!(sample_period(43, f, &Constraint::Defect(2, 5)).unwrap().to_json(), a.to_json());
}

#[test]
fn projection_rationality_needs_m0() {
    let v = sample_period(18218615110269865373, field(4), &Constraint::Any).unwrap();
    assert!(!in_m0(&v).in_m0);
    assert!(!rationality_check(&v).projection_rational);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalence_holds_on_random_periods(seed in any::<u64>(), m in prop::sample::select(vec![4u32, 6, 8, 10])) {
        let v = sample_period(seed, field(m), &Constraint::Any).unwrap();
        let r = report(&v).unwrap();
        prop_assert!(r.contains_complement);
        if r.in_m0 {
            prop_assert!(r.projection_rational);
        }
        prop_assert!(r.picard_even);
        if r.in_m0 && r.is_12a1 {
            prop_assert_eq!(r.tangent_dim, Some(2));
            prop_assert_eq!(r.agree, Some(true));
            prop_assert_eq!(r.nonfree_failing_pairs.clone(), Some(r.defects.clone()));
        }
        if r.in_m0 && !r.is_12a1 {
            prop_assert!(!r.in_m1);
        }
    }
}
