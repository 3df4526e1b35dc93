//! The acceptance matrix behind `verify-paper`.
//!
//! Each criterion is a list of named checks. A check may be marked as an
//! expected failure: a requirement that cannot hold as stated. Such a check
//! must still fail; if it starts passing the criterion is reported as failed
//! so that the mark gets revisited.

use std::collections::BTreeSet;

use lattice_lab::configs::{
    all_reports, classify, embeddings_m_into_3d4, enumerate_candidates, is_even_configuration, two_elementary_scan,
};
use lattice_lab::gf2::disc::DiscriminantSpace;
use lattice_lab::gf2::field::ExtensionField;
use lattice_lab::lattice::builders::{e1_lattice, e_two, m_lattice, n_lattice};
use lattice_lab::lattice::DEFAULT_BOX;
use lattice_lab::perm::census::{census, census_cached, Census, SIGMA};
use lattice_lab::perm::s9;
use lattice_lab::period::{report, sample_many, sample_period, Constraint, PeriodReport, MIN_M1_DEGREE};
use lattice_lab::roots::{
    a_vector, build_root_lattice, e10, fundamental_weights, orthogonal_root_decomposition, weight_norm_table,
};
use lattice_lab::Result;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::canonical;
use crate::commands::{a_vector_types, decomposition_holds};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected_failure: bool,
    pub detail: Value,
}

fn check(name: &str, pass: bool, detail: Value) -> Check {
    Check { name: name.into(), pass, expected_failure: false, detail }
}

fn known_defect(name: &str, pass: bool, detail: Value) -> Check {
    Check { name: name.into(), pass, expected_failure: true, detail }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    KnownDefect,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub key: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Criterion {
    fn new(id: u32, key: &'static str, checks: Vec<Check>) -> Self {
        let status = if checks.iter().any(|c| c.pass == c.expected_failure) {
            Status::Fail
        } else if checks.iter().any(|c| c.expected_failure) {
            Status::KnownDefect
        } else {
            Status::Pass
        };
        Criterion { id, key, status, checks }
    }

    fn skipped(id: u32, key: &'static str) -> Self {
        Criterion { id, key, status: Status::Skipped, checks: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub quick: bool,
    pub seed: u64,
    pub criteria: Vec<Criterion>,
    /// sha256 of the canonical JSON of `criteria`
    pub digest: String,
    pub ok: bool,
}

pub struct Options<'a> {
    pub quick: bool,
    pub seed: u64,
    pub cache: Option<&'a std::path::Path>,
}

pub fn run(opts: &Options) -> Result<Verification> {
    let mut criteria = vec![
        weight_calculus()?,
        lattice_constants()?,
        two_elementary_types(),
        configurations()?,
        a_vector_embeddings()?,
        superlattice_roots(),
        three_d4()?,
    ];
    let twelve = twelve_a1_equivalence(opts.seed)?;
    let first = canonical::digest(&canonical::to_string(&twelve));
    criteria.push(twelve);
    criteria.push(if opts.quick { Criterion::skipped(9, "census") } else { census_criterion(opts.cache)? });
    let again = canonical::digest(&canonical::to_string(&twelve_a1_equivalence(opts.seed)?));
    criteria.push(Criterion::new(
        10,
        "determinism",
        vec![check("stochastic suite reproduces its digest", first == again, json!({"digest": first}))],
    ));
    let digest = canonical::digest(&canonical::to_string(&criteria));
    let ok = criteria.iter().all(|c| c.status != Status::Fail);
    Ok(Verification { quick: opts.quick, seed: opts.seed, criteria, digest, ok })
}

fn weight_calculus() -> Result<Criterion> {
    let w = fundamental_weights(&e10())?;
    let e = e10();
    let norms = weight_norm_table();
    let others_above_four = norms.iter().filter(|(i, _)| ![1, 9, 10].contains(i)).all(|&(_, n)| n > 4);
    Ok(Criterion::new(
        1,
        "weight-calculus",
        vec![
            check("w1 coefficients", w[0].coefficients == [4, 9, 7, 14, 12, 10, 8, 6, 4, 2], json!(w[0].coefficients)),
            check("w10 coefficients", w[9].coefficients == [2, 4, 3, 6, 5, 4, 3, 2, 1, 0], json!(w[9].coefficients)),
            check("w1^2 = 4", norms[0].1 == 4, json!(norms[0].1)),
            check("w10^2 = 0", norms[9].1 == 0, json!(norms[9].1)),
            check("w1.w10 = 2", e.inner(&w[0].coefficients, &w[9].coefficients) == 2.into(), json!(null)),
            check("w9^2 = 2", norms[8].1 == 2, json!(norms[8].1)),
            check("wj^2 > 4 otherwise", others_above_four, json!(norms)),
        ],
    ))
}

fn lattice_constants() -> Result<Criterion> {
    let n = n_lattice();
    let d = DiscriminantSpace::n0()?;
    let (arf, witt) = d.space().arf_and_witt()?;
    let f4 = ExtensionField::new(2)?;
    let (arf_k, witt_k) = d.space().arf_and_witt_over(&f4)?;
    let e1 = e1_lattice();
    Ok(Criterion::new(
        2,
        "lattice-constants",
        vec![
            check("det N = -2^20", n.det() == -(BigInt::from(1) << 20usize), json!(n.det().to_string())),
            check("N 2-elementary with sigma 10", n.is_two_elementary() && n.sigma() == Some(10), json!(n.sigma())),
            check("dim N0 = 20", d.dim() == 20, json!(d.dim())),
            known_defect("N0 split with Arf 0 over F2", (arf, witt) == (0, 10), json!({"arf": arf, "witt_index": witt})),
            check("N0 split with Arf 0 over GF(4)", (arf_k, witt_k) == (0, 10), json!({"arf": arf_k, "witt_index": witt_k})),
            check("|disc E1| = 2^8", e1.det().magnitude() == &(num_bigint::BigUint::from(1u32) << 8), json!(e1.det().to_string())),
            check("E1 2-elementary", e1.is_two_elementary(), json!(null)),
        ],
    ))
}

fn two_elementary_types() -> Criterion {
    let got: Vec<String> = two_elementary_scan().iter().map(|t| t.to_string()).collect();
    let want = ["A1", "D4", "D6", "D8", "D10", "D12", "E7", "E8"];
    Criterion::new(3, "two-elementary-types", vec![check("A1, D2n, E7, E8", got == want, json!(got))])
}

fn configurations() -> Result<Criterion> {
    let names = |v: &[lattice_lab::configs::Configuration]| -> BTreeSet<String> {
        v.iter().map(|c| c.to_string()).collect()
    };
    let set = |v: &[&str]| -> BTreeSet<String> { v.iter().map(|s| s.to_string()).collect() };
    let (odd, even) = classify()?;
    let base = all_reports(0)?;
    let flag = base.iter().all(|r| is_even_configuration(&r.config) == r.half_sum_in_lattice);
    let parity = base.iter().all(|r| {
        let by_parity = r
            .config
            .components()
            .iter()
            .all(|&t| a_vector(t).map(|a| lattice_lab::roots::is_even_in_lattice(&a)).unwrap_or(false));
        by_parity == r.half_sum_in_lattice
    });
    let verdicts: Vec<bool> = base.iter().map(|r| r.verdict).collect();
    let mut invariant = true;
    for variant in 1..=3 {
        invariant &= all_reports(variant)?.iter().map(|r| r.verdict).collect::<Vec<_>>() == verdicts;
    }
    let n = enumerate_candidates().len();
    Ok(Criterion::new(
        4,
        "configurations",
        vec![
            check("15 candidates", n == 15, json!(n)),
            check("odd list", names(&odd) == set(&["12A1", "8A1+D4", "6A1+D6", "5A1+E7"]), json!(names(&odd))),
            check("even list", names(&even) == set(&["3D4", "D4+D8", "D4+E8", "D12"]), json!(names(&even))),
            check("evenness matches the h in Lambda flag", flag, json!(null)),
            check("evenness matches A-vector parity", parity, json!(null)),
            check("verdicts agree across 3 further realizations", invariant, json!(null)),
        ],
    ))
}

fn a_vector_embeddings() -> Result<Criterion> {
    let mut checks = Vec::new();
    for t in a_vector_types() {
        let l = build_root_lattice(t)?;
        let a = a_vector(t)?.coefficients;
        let frame = orthogonal_root_decomposition(t, 0)?;
        let ok = decomposition_holds(&l, &frame, &a) && l.norm(&a) == (-2 * t.rank as i64).into();
        checks.push(check(&format!("{t}: orthogonal roots sum to A, A^2 = -2 rank"), ok, json!(a)));
    }
    Ok(Criterion::new(5, "a-vector-embeddings", checks))
}

fn superlattice_roots() -> Criterion {
    let m = m_lattice();
    let sup = m.index2_even_superlattices();
    let m_ok = sup.iter().all(|s| {
        let c: Vec<u8> = s.class.iter().map(|&x| x as u8).collect();
        m.represent_class_with_norm(&c, -8, 0).is_some()
    });
    let e = e10();
    let sup2 = e_two().index2_even_superlattices();
    let e_ok = sup2.iter().all(|s| {
        let c: Vec<u8> = s.class.iter().map(|&x| x as u8).collect();
        e.represent_class_with_norm(&c, -4, DEFAULT_BOX).is_some()
    });
    Criterion::new(
        6,
        "superlattices",
        vec![
            check("M: 495 classes, each with a root", sup.len() == 495 && m_ok, json!(sup.len())),
            check("E(2): 527 classes, each with a root", sup2.len() == 527 && e_ok, json!(sup2.len())),
        ],
    )
}

fn three_d4() -> Result<Criterion> {
    let c = embeddings_m_into_3d4()?;
    Ok(Criterion::new(7, "three-d4", vec![check("one orbit", c.orbit_count == 1, canonical::to_value(&c))]))
}

fn all_reports_for(seeds: &[u64], m: u32, c: &Constraint) -> Result<Vec<PeriodReport>> {
    let f = ExtensionField::new(m)?;
    sample_many(seeds, f, c)?.iter().map(report).collect()
}

fn seeds(base: u64, offset: u64, n: u64) -> Vec<u64> {
    (0..n).map(|k| base.wrapping_mul(1_000_003).wrapping_add(offset + k)).collect()
}

/// The `k`-th forced pair, walking through all 66 pairs.
fn forced_pair(k: usize) -> (usize, usize) {
    let pairs: Vec<(usize, usize)> = (0..12).flat_map(|i| (i + 1..12).map(move |j| (i, j))).collect();
    pairs[(7 * k) % pairs.len()]
}

fn twelve_a1_equivalence(seed: u64) -> Result<Criterion> {
    let mut checks = Vec::new();
    for m in [4u32, 6, 8] {
        let f = ExtensionField::new(m)?;
        let non = all_reports_for(&seeds(seed, 2000, 10), m, &Constraint::NonTwelveA1)?;
        let non_ok = non.iter().all(|r| r.valid && r.in_m0 && !r.is_12a1 && !r.in_m1 && r.projection_rational && r.contains_complement);
        if m >= MIN_M1_DEGREE {
            let gen = all_reports_for(&seeds(seed, 0, 100), m, &Constraint::Generic)?;
            let gen_ok = gen.iter().all(|r| {
                r.valid
                    && r.in_m0
                    && r.is_12a1
                    && r.in_m1
                    && r.tangent_dim == Some(2)
                    && r.etale_lhs == Some(true)
                    && r.agree == Some(true)
                    && r.projection_rational
                    && r.contains_complement
            });
            checks.push(check(&format!("m={m}: 100 generic samples in M1 with injective non-free map"), gen_ok, json!(gen.len())));
            let mut defect_ok = true;
            for (k, s) in seeds(seed, 1000, 20).into_iter().enumerate() {
                let (i, j) = forced_pair(k);
                let r = report(&sample_period(s, f, &Constraint::Defect(i, j))?)?;
                let pair = (i + 1, j + 1);
                defect_ok &= r.valid
                    && !r.in_m1
                    && r.defects.contains(&pair)
                    && r.nonfree_failing_pairs.as_ref().is_some_and(|p| p.contains(&pair) && *p == r.defects)
                    && r.diagonal_images == Some(true)
                    && r.agree == Some(true)
                    && r.projection_rational;
            }
            checks.push(check(&format!("m={m}: 20 forced defects fail at the pair with diagonal image"), defect_ok, json!(20)));
        } else {
            let gen = sample_period(seed, f, &Constraint::Generic);
            let def = sample_period(seed, f, &Constraint::Defect(0, 1));
            known_defect_pair(&mut checks, m, gen.is_ok(), def.is_ok());
            let any = all_reports_for(&seeds(seed, 3000, 120), m, &Constraint::Any)?;
            let checked: Vec<&PeriodReport> = any.iter().filter(|r| r.in_m0 && r.is_12a1).collect();
            let agree = checked.iter().all(|r| r.agree == Some(true) && r.tangent_dim == Some(2));
            let rational = any.iter().filter(|r| r.in_m0).all(|r| r.projection_rational);
            checks.push(check(
                &format!("m={m}: agreement on unconstrained M0 12A1 samples"),
                agree && !checked.is_empty(),
                json!({"samples": any.len(), "checked": checked.len()}),
            ));
            checks.push(check(&format!("m={m}: projection rational on M0 samples"), rational, json!(null)));
        }
        checks.push(check(&format!("m={m}: 10 non-12A1 samples"), non_ok, json!(non.len())));
    }
    Ok(Criterion::new(8, "twelve-a1-equivalence", checks))
}

fn known_defect_pair(checks: &mut Vec<Check>, m: u32, generic: bool, defect: bool) {
    let why = json!({"reason": "M1 has no points over this field", "min_degree": MIN_M1_DEGREE});
    checks.push(known_defect(&format!("m={m}: generic samples in M1"), generic, why.clone()));
    checks.push(known_defect(&format!("m={m}: forced-defect samples"), defect, why));
}

fn census_criterion(cache: Option<&std::path::Path>) -> Result<Criterion> {
    let c: Census = match cache {
        Some(p) => census_cached(p)?,
        None => census(None),
    };
    let s = &c.summary;
    let computed: BTreeSet<u64> = s.maximal_orders.iter().copied().collect();
    let sigma: BTreeSet<u64> = SIGMA.into_iter().collect();
    let up_to_third: bool = computed.iter().filter(|&&x| x != 60 && x != 30).collect::<BTreeSet<_>>()
        == sigma.iter().filter(|&&x| x != 30).collect::<BTreeSet<_>>();
    let mut pi = s9::ID;
    pi.rotate_left(4);
    pi.swap(0, 7);
    let relabelled = census(Some(pi));
    Ok(Criterion::new(
        9,
        "census",
        vec![
            check("171 classes", s.class_count == 171, json!(s.class_count)),
            check("every order divides a maximal order", s.all_orders_divide_maximal, json!(s.maximal_orders)),
            check("maximal orders match up to the third entry", up_to_third, json!({"resolved_entry": s.resolved_entry})),
            check("relabelling invariance", relabelled.summary == c.summary, json!(null)),
        ],
    ))
}
