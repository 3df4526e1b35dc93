use lattice_lab::configs::*;
use lattice_lab::lattice::builders::root_lattice_sum;
use lattice_lab::roots::{a_vector, build_root_lattice, is_even_in_lattice, orthogonal_root_decomposition, DynkinType};
use num_bigint::BigInt;

fn names(v: &[Configuration]) -> Vec<String> {
    let mut s: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    s.sort();
    s
}

fn sorted(v: &[&str]) -> Vec<String> {
    let mut s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    s.sort();
    s
}

#[test]
fn classification_matches_the_lists() {
    let (odd, even) = classify().unwrap();
    assert_eq!(names(&odd), sorted(&["12A1", "8A1+D4", "6A1+D6", "5A1+E7"]));
    assert_eq!(names(&even), sorted(&["3D4", "D4+D8", "D4+E8", "D12"]));
    let rejected = enumerate_candidates().len() - odd.len() - even.len();
    assert_eq!(rejected, 7);
}

#[test]
fn evenness_coherence() {
    for r in all_reports(0).unwrap() {
        assert_eq!(is_even_configuration(&r.config), r.half_sum_in_lattice, "{}", r.config);
        let by_parity = r
            .config
            .components()
            .iter()
            .all(|&t| a_vector(t).map(|a| is_even_in_lattice(&a)).unwrap_or(false));
        assert_eq!(by_parity, r.half_sum_in_lattice, "{}", r.config);
    }
}

#[test]
fn predicate_invariance_across_realizations() {
    let base: Vec<bool> = all_reports(0).unwrap().iter().map(|r| r.verdict).collect();
    for variant in 1..=3 {
        let v: Vec<bool> = all_reports(variant).unwrap().iter().map(|r| r.verdict).collect();
        assert_eq!(v, base, "variant {variant}");
    }
}

#[test]
fn rejection_witnesses_are_coset_roots() {
    for s in ["2A1+D10", "4A1+D8"] {
        let c = Configuration::parse(s).unwrap();
        let r = admissibility(&c, 0).unwrap();
        assert!(!r.verdict);
        let l = root_lattice_sum(c.components());
        let z = &r.new_roots[0];
        assert_eq!(l.norm(z), BigInt::from(-8));
        for (a, b) in z.iter().zip(&r.twice_h) {
            assert_eq!((a - b).rem_euclid(2), 0);
        }
    }
}

/// `|disc(Lambda)|` from the component determinants, divided by 4 when `h` is new.
fn disc_oracle(c: &Configuration) -> u64 {
    let det = |t: &DynkinType| -> u64 {
        match (t.to_string().as_str(), t.rank) {
            ("A1", _) => 2,
            ("E7", _) => 2,
            ("E8", _) => 1,
            _ => 4,
        }
    };
    let d: u64 = c.components().iter().map(det).product();
    if is_even_configuration(c) {
        d
    } else {
        d / 4
    }
}

#[test]
fn discriminants() {
    let (odd, even) = classify().unwrap();
    for c in odd.iter().chain(&even) {
        assert_eq!(disc_report(c).unwrap(), BigInt::from(disc_oracle(c)), "{c}");
    }
    let twelve = Configuration::parse("12A1").unwrap();
    assert_eq!(disc_report(&twelve).unwrap(), BigInt::from(1 << 10));
    let eight = Configuration::parse("8A1+D4").unwrap();
    assert_eq!(disc_report(&eight).unwrap(), BigInt::from(1 << 8));
    for c in odd.iter().chain(&even).filter(|c| *c != &twelve && *c != &eight) {
        assert!(disc_report(c).unwrap() <= BigInt::from(1 << 6), "{c}");
    }
}

#[test]
fn even_sets_in_odd_configurations() {
    let (odd, _) = classify().unwrap();
    for c in &odd {
        let s = odd_support(c).unwrap();
        assert_eq!(s.len() % 4, 0, "{c}");
        assert!(s.len() >= 8, "{c}");
        let l = root_lattice_sum(c.components());
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                let mut u = vec![0i64; 12];
                let mut v = vec![0i64; 12];
                u[a] = 1;
                v[b] = 1;
                assert_eq!(l.inner(&u, &v), BigInt::from(0));
            }
        }
    }
}

#[test]
fn a_vector_decompositions() {
    for t in [
        DynkinType::a(1),
        DynkinType::d(4),
        DynkinType::d(6),
        DynkinType::d(8),
        DynkinType::d(10),
        DynkinType::d(12),
        DynkinType::e(7),
        DynkinType::e(8),
    ] {
        let l = build_root_lattice(t).unwrap();
        let a = a_vector(t).unwrap();
        assert_eq!(l.norm(&a.coefficients), BigInt::from(-2 * t.rank as i64));
        let f = orthogonal_root_decomposition(t, 0).unwrap();
        assert_eq!(f.len(), t.rank);
        let mut sum = vec![0i64; t.rank];
        for (i, r) in f.iter().enumerate() {
            assert_eq!(l.norm(r), BigInt::from(-2));
            for s in &f[i + 1..] {
                assert_eq!(l.inner(r, s), BigInt::from(0));
            }
            for (x, y) in sum.iter_mut().zip(r) {
                *x += y;
            }
        }
        assert_eq!(sum, a.coefficients, "{t}");
    }
}

#[test]
fn two_elementary_types() {
    let got: Vec<String> = two_elementary_scan().iter().map(|t| t.to_string()).collect();
    assert_eq!(got, ["A1", "D4", "D6", "D8", "D10", "D12", "E7", "E8"]);
}

#[test]
fn m_into_three_d4() {
    let e = embeddings_m_into_3d4().unwrap();
    assert_eq!(e.orbit_count, 1);
    assert_eq!(e.half_sum_norm, -6);
    // 3 unsigned 4-frames per factor
    assert_eq!(e.frames, 27);
    assert_eq!(e.automorphism_order, BigInt::from(1152u64.pow(3) * 6));
    assert_eq!(e.embedding_orbits, BigInt::from(5775));
}
