use std::collections::BTreeSet;
use std::sync::OnceLock;

use lattice_lab::perm::census::{census, census_cached, ramification_table, version_hash, Census, STATED_LIST};
use lattice_lab::perm::s9::{self, Sub, P9};
use lattice_lab::perm::{are_conjugate_subgroups, PermGroup, Permutation, SignedPermGroup};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fresh() -> &'static Census {
    static C: OnceLock<Census> = OnceLock::new();
    C.get_or_init(|| census(None))
}

fn cyc(n: usize, cycles: &[&[u8]]) -> Permutation {
    Permutation::from_cycles(n, cycles).unwrap()
}

fn group(gens: &[P9]) -> PermGroup {
    PermGroup::new(9, gens.iter().map(s9::to_permutation).collect()).unwrap()
}

#[test]
fn group_orders() {
    let s9 = PermGroup::new(9, vec![cyc(9, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]), cyc(9, &[&[0, 1]])]).unwrap();
    assert_eq!(s9.order(), 362_880);
    assert_eq!(PermGroup::trivial(9).order(), 1);
    let w = SignedPermGroup::weyl_d(9);
    assert_eq!(w.group().order(), 256 * 362_880);
}

#[test]
fn forgetting_signs_is_a_homomorphism_onto_s9() {
    let w = SignedPermGroup::weyl_d(9);
    let gens = w.group().generators().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut random = || {
        (0..30).fold(Permutation::identity(18), |acc, _| acc.mul(gens.choose(&mut rng).unwrap()))
    };
    for _ in 0..50 {
        let (a, b) = (random(), random());
        assert_eq!(w.forget_signs(&a.mul(&b)), w.forget_signs(&a).mul(&w.forget_signs(&b)));
        assert_eq!(w.sign_changes(&a) % 2, 0);
    }
    let image = PermGroup::new(9, gens.iter().map(|g| w.forget_signs(g)).collect()).unwrap();
    assert_eq!(image.order(), 362_880);
    assert_eq!(w.group().order() / image.order(), 256);
    // the kernel: even sign changes, generated by flipping e_0 with each e_i
    let flips: Vec<Permutation> = (1..9u8).map(|i| cyc(18, &[&[0, 1], &[2 * i, 2 * i + 1]])).collect();
    let kernel = PermGroup::new(18, flips).unwrap();
    assert_eq!(kernel.order(), 256);
    assert!(kernel.is_subgroup_of(w.group()));
    assert!(kernel.generators().iter().all(|g| w.forget_signs(g).is_identity()));
}

#[test]
fn subgroup_conjugacy_examples() {
    let s9 = PermGroup::symmetric(9);
    let one = |c: &[&[u8]]| PermGroup::new(9, vec![cyc(9, c)]).unwrap();
    let a = one(&[&[0, 1]]);
    let b = one(&[&[2, 3]]);
    assert!(are_conjugate_subgroups(&a, &a, &s9).is_some());
    let g = are_conjugate_subgroups(&a, &b, &s9).unwrap();
    assert!(b.contains(&a.generators()[0].conjugate_by(&g)));
    assert!(are_conjugate_subgroups(&one(&[&[0, 1], &[2, 3]]), &a, &s9).is_none());
    // same order and orbit lengths, different cycle types: <(123)(456)(789)> vs <(123)>
    let x = one(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]);
    let y = one(&[&[0, 1, 2]]);
    assert!(are_conjugate_subgroups(&x, &y, &s9).is_none());
}

#[test]
fn census_counts() {
    let c = fresh();
    let s = &c.summary;
    assert_eq!(s.class_count, 171);
    assert_eq!(s.class_count_without_trivial, 170);
    assert_eq!(s.global_conjugate_pairs, 0);
    assert!(c.records.iter().any(|r| r.order == 1));
    assert!(c.records.iter().any(|r| r.h_order == 128));
    let max: BTreeSet<u64> = s.maximal_orders.iter().copied().collect();
    assert_eq!(max, STATED_LIST.into_iter().collect());
    assert!(s.matches_stated_list && !s.matches_sigma);
    assert_eq!(s.resolved_entry, Some(60));
    for r in &c.records {
        assert!(s.maximal_orders.iter().any(|m| m % r.order == 0));
    }
}

#[test]
fn census_records_are_split_extensions() {
    for r in &fresh().records {
        assert_eq!(r.order, r.h_order * r.c_order);
        assert!(r.h_order.is_power_of_two());
        assert_eq!(r.c_order % 2, 1);
        let split = r.h_generators.len();
        let g = group(&r.gens);
        let h = group(&r.gens[..split]);
        assert_eq!(g.order() as u64, r.order);
        assert_eq!(h.order() as u64, r.h_order);
        for x in g.generators() {
            for y in h.generators() {
                assert!(h.contains(&y.conjugate_by(x)));
            }
        }
        if r.c_order > 1 {
            assert_eq!(s9::order(&r.gens[split]), r.c_order);
        }
    }
}

#[test]
fn census_is_relabelling_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pi = s9::ID;
    pi.shuffle(&mut rng);
    let other = census(Some(pi));
    let base = fresh();
    assert_eq!(other.summary, base.summary);
    // every class of the relabelled run matches exactly one class of the first run
    let all = s9::all();
    let subs: Vec<Sub> = base.records.iter().map(|r| Sub::generated(r.gens.clone())).collect();
    let invs: Vec<_> = subs.iter().map(|s| s.invariant()).collect();
    for r in &other.records {
        let a = Sub::generated(r.gens.clone());
        let inv = a.invariant();
        let hits = subs
            .iter()
            .zip(&invs)
            .filter(|(_, i)| **i == inv)
            .filter(|(b, _)| all.iter().any(|g| a.gens.iter().all(|x| b.contains(&s9::conj(x, g)))))
            .count();
        assert_eq!(hits, 1);
    }
}

#[test]
fn ramification_table_entries() {
    let t = ramification_table(fresh());
    assert!(t.contains(&(1 << 16)));
    assert!(t.contains(&(512 * 9)));
    assert!(t.iter().all(|x| x % 512 == 0));
}

#[test]
fn census_cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("lattice-lab-census-{}", std::process::id()));
    let path = dir.join("census.json");
    let text = serde_json::to_string(fresh()).unwrap();
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(&path, text).unwrap();
    let loaded = census_cached(&path).unwrap();
    assert_eq!(loaded.summary, fresh().summary);
    assert_eq!(loaded.version_hash, version_hash());
    assert_eq!(loaded.records.len(), 171);
    std::fs::remove_dir_all(&dir).unwrap();
}
