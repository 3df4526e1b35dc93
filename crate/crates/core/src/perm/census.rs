//! Conjugacy classes of subgroups `G = H x| C` of `S9` with `H` a 2-group and
//! `C` cyclic of odd order.
//!
//! `H` is the normal Sylow 2-subgroup of `G` and complements of `H` are
//! conjugate under `H`, so the classes of `G` correspond to pairs (class of
//! `H`, `N(H)`-class of an odd cyclic subgroup of `N(H)`). A global
//! `S9`-conjugacy pass over the resulting groups confirms that no two of them
//! are conjugate.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::s9::{self, Sub, P9};
use crate::error::{Error, Result};

/// Bumped whenever the enumeration changes; the cache is keyed by its hash.
pub const ALGORITHM_VERSION: &str = "s9-h-by-c-census/1";

/// The set of maximal orders as printed in the ramification statement.
pub const SIGMA: [u64; 6] = [192, 128, 30, 56, 40, 9];
/// The same list in the form quoted for the ramification bound, with 60.
pub const STATED_LIST: [u64; 6] = [192, 128, 60, 56, 40, 9];

/// One conjugacy class of `G = H x| C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub id: usize,
    pub order: u64,
    pub factorization: String,
    pub h_order: u64,
    pub c_order: u64,
    /// generators of `H` in cycle notation on `1..=9`
    pub h_generators: Vec<String>,
    /// generator of `C`
    pub c_generator: String,
    #[serde(skip)]
    pub gens: Vec<P9>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub class_count: usize,
    pub class_count_without_trivial: usize,
    pub two_subgroup_classes: usize,
    pub maximal_orders: Vec<u64>,
    pub all_orders_divide_maximal: bool,
    pub matches_sigma: bool,
    pub matches_stated_list: bool,
    /// 30 or 60, whichever is a maximal order
    pub resolved_entry: Option<u64>,
    pub global_conjugate_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub version_hash: String,
    pub records: Vec<CensusRecord>,
    pub summary: CensusSummary,
}

pub fn version_hash() -> String {
    let d = Sha256::digest(ALGORITHM_VERSION.as_bytes());
    d.iter().map(|b| format!("{b:02x}")).collect()
}

fn factorization(mut n: u64) -> String {
    let mut parts = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e == 1 {
            parts.push(format!("{p}"));
        } else if e > 1 {
            parts.push(format!("{p}^{e}"));
        }
        p += 1;
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Elements of `S9` normalizing `h`.
fn normalizer(all: &[P9], h: &Sub) -> Vec<P9> {
    all.par_iter().filter(|g| h.normalized_by(g)).copied().collect()
}

/// One representative per orbit of `gens` acting by conjugation on the given
/// subgroups (as sorted element keys), in first-seen order.
fn conjugation_orbit_reps(subgroups: Vec<Vec<u64>>, gens: &[P9]) -> Vec<Vec<u64>> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut reps = Vec::new();
    for s in subgroups {
        if seen.contains(&s) {
            continue;
        }
        seen.insert(s.clone());
        let mut stack = vec![s.clone()];
        while let Some(x) = stack.pop() {
            for g in gens {
                let mut y: Vec<u64> = x.iter().map(|&k| s9::key(&s9::conj(&s9::from_key(k), g))).collect();
                y.sort_unstable();
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        reps.push(s);
    }
    reps
}

/// Some `g` in `S9` with `g^-1 A g = B`.
fn conjugator(all: &[P9], a: &Sub, b: &Sub) -> Option<P9> {
    all.par_iter().find_first(|g| a.gens.iter().all(|x| b.contains(&s9::conj(x, g)))).copied()
}

type Invariant = (usize, Vec<usize>, Vec<(u64, u64, u64, u32)>);

/// Keep one group per `S9`-class: bucket by invariant, then test exactly.
/// Returns the kept groups and the number of conjugate pairs found.
fn dedupe(all: &[P9], groups: Vec<Sub>) -> (Vec<Sub>, usize) {
    let invs: Vec<Invariant> = groups.par_iter().map(|g| g.invariant()).collect();
    let mut buckets: BTreeMap<Invariant, Vec<usize>> = BTreeMap::new();
    for (i, inv) in invs.into_iter().enumerate() {
        buckets.entry(inv).or_default().push(i);
    }
    let mut keep = vec![false; groups.len()];
    let mut merged = 0;
    for members in buckets.values() {
        let mut reps: Vec<usize> = Vec::new();
        for &i in members {
            if reps.iter().any(|&r| conjugator(all, &groups[i], &groups[r]).is_some()) {
                merged += 1;
            } else {
                reps.push(i);
            }
        }
        for r in reps {
            keep[r] = true;
        }
    }
    let kept = groups.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();
    (kept, merged)
}

fn sub_from_keys(keys: Vec<u64>, gens: Vec<P9>) -> Sub {
    Sub { gens, elems: keys }
}

/// Representatives of the `S9`-classes of 2-subgroups, each with its normalizer.
/// Every 2-group of order `2^(k+1)` has a normal subgroup of order `2^k`, so
/// extending each class by elements `g` of `N(H)` with `g^2` in `H` reaches all classes.
pub fn two_subgroups(all: &[P9]) -> Vec<(Sub, Vec<P9>)> {
    let mut out: Vec<(Sub, Vec<P9>)> = Vec::new();
    let mut layer = vec![Sub::trivial()];
    while !layer.is_empty() {
        let with_norm: Vec<(Sub, Vec<P9>)> = layer.into_iter().map(|h| {
            let n = normalizer(all, &h);
            (h, n)
        }).collect();
        let mut next: Vec<Sub> = Vec::new();
        for (h, n) in &with_norm {
            let mut cands: Vec<(Vec<u64>, P9)> = Vec::new();
            let mut seen: HashSet<Vec<u64>> = HashSet::new();
            for g in n {
                if h.contains(g) || !h.contains(&s9::mul(g, g)) {
                    continue;
                }
                let mut k: Vec<u64> = h.elems.clone();
                k.extend(h.elems.iter().map(|&x| s9::key(&s9::mul(&s9::from_key(x), g))));
                k.sort_unstable();
                if seen.insert(k.clone()) {
                    cands.push((k, *g));
                }
            }
            let gen_of: HashMap<Vec<u64>, P9> = cands.iter().cloned().collect();
            let ngens = s9::generating_set(n);
            for k in conjugation_orbit_reps(cands.into_iter().map(|c| c.0).collect(), &ngens) {
                let mut gens = h.gens.clone();
                gens.push(gen_of[&k]);
                next.push(sub_from_keys(k, gens));
            }
        }
        out.extend(with_norm);
        let (kept, _) = dedupe(all, next);
        layer = kept;
    }
    out
}

/// Odd-order cyclic subgroups of `N(H)` up to `N(H)`-conjugacy, as generators.
fn odd_cyclic_reps(n: &[P9]) -> Vec<P9> {
    let mut subs: Vec<Vec<u64>> = Vec::new();
    let mut gen_of: HashMap<Vec<u64>, P9> = HashMap::new();
    for c in n {
        if s9::order(c) % 2 == 0 {
            continue;
        }
        let k = s9::closure(&[*c]);
        if !gen_of.contains_key(&k) {
            gen_of.insert(k.clone(), *c);
            subs.push(k);
        }
    }
    let ngens = s9::generating_set(n);
    conjugation_orbit_reps(subs, &ngens).into_iter().map(|k| gen_of[&k]).collect()
}

fn maximal_under_divisibility(orders: &BTreeSet<u64>) -> Vec<u64> {
    let mut m: Vec<u64> = orders.iter().copied().filter(|&a| !orders.iter().any(|&b| b != a && b % a == 0)).collect();
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Run the census; `relabel` conjugates the listing of `S9` by a permutation
/// of the points, which changes every representative but no invariant.
pub fn census(relabel: Option<P9>) -> Census {
    let mut all = s9::all();
    if let Some(p) = relabel {
        all = all.iter().map(|g| s9::conj(g, &p)).collect();
    }
    let hs = two_subgroups(&all);
    let two_subgroup_classes = hs.len();
    let mut groups: Vec<(Sub, u64, u64)> = hs
        .par_iter()
        .flat_map_iter(|(h, n)| {
            odd_cyclic_reps(n).into_iter().map(move |c| {
                let c_order = s9::order(&c);
                let mut gens = h.gens.clone();
                if c_order > 1 {
                    gens.push(c);
                }
                (Sub::generated(gens), h.order() as u64, c_order)
            })
        })
        .collect();
    for (g, ho, co) in &groups {
        debug_assert_eq!(g.order() as u64, ho * co);
    }
    let n_before = groups.len();
    let (kept, global_conjugate_pairs) = dedupe(&all, groups.iter().map(|g| g.0.clone()).collect());
    debug_assert_eq!(kept.len() + global_conjugate_pairs, n_before);
    let kept_keys: HashSet<Vec<u64>> = kept.into_iter().map(|g| g.elems).collect();
    groups.retain(|g| kept_keys.contains(&g.0.elems));
    groups.sort_by(|a, b| (a.0.order(), &a.0.gens).cmp(&(b.0.order(), &b.0.gens)));
    let records: Vec<CensusRecord> = groups
        .into_iter()
        .enumerate()
        .map(|(id, (g, h_order, c_order))| {
            let split = if c_order > 1 { g.gens.len() - 1 } else { g.gens.len() };
            CensusRecord {
                id,
                order: g.order() as u64,
                factorization: factorization(g.order() as u64),
                h_order,
                c_order,
                h_generators: g.gens[..split].iter().map(|p| s9::to_permutation(p).to_string()).collect(),
                c_generator: if c_order > 1 { s9::to_permutation(&g.gens[split]).to_string() } else { "()".into() },
                gens: g.gens,
            }
        })
        .collect();
    let summary = summarize(&records, two_subgroup_classes, global_conjugate_pairs);
    Census { version_hash: version_hash(), records, summary }
}

fn summarize(records: &[CensusRecord], two_subgroup_classes: usize, global_conjugate_pairs: usize) -> CensusSummary {
    let orders: BTreeSet<u64> = records.iter().map(|r| r.order).collect();
    let maximal_orders = maximal_under_divisibility(&orders);
    let as_set = |v: &[u64]| v.iter().copied().collect::<BTreeSet<u64>>();
    let max_set = as_set(&maximal_orders);
    CensusSummary {
        class_count: records.len(),
        class_count_without_trivial: records.iter().filter(|r| r.order > 1).count(),
        two_subgroup_classes,
        all_orders_divide_maximal: records.iter().all(|r| maximal_orders.iter().any(|m| m % r.order == 0)),
        matches_sigma: max_set == as_set(&SIGMA),
        matches_stated_list: max_set == as_set(&STATED_LIST),
        resolved_entry: [30, 60].into_iter().find(|x| max_set.contains(x)),
        maximal_orders,
        global_conjugate_pairs,
    }
}

/// `2^9 N` for each maximal order `N`.
pub fn ramification_table(c: &Census) -> Vec<u64> {
    c.summary.maximal_orders.iter().map(|n| 512 * n).collect()
}

/// Load the census from `path` if it was written by this algorithm version,
/// otherwise compute it and write it there.
pub fn census_cached(path: &Path) -> Result<Census> {
    if let Ok(text) = std::fs::read_to_string(path) {
        if let Ok(c) = serde_json::from_str::<Census>(&text) {
            if c.version_hash == version_hash() {
                return Ok(c);
            }
        }
    }
    let c = census(None);
    let text = serde_json::to_string_pretty(&c).map_err(|e| Error::Cache(e.to_string()))?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    }
    std::fs::write(path, text).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(c)
}
