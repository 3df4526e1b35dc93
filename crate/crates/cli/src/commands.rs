//! One function per subcommand. Each returns the JSON result, a table for
//! `--tsv`, and whether every internal check held.

use std::path::Path;

use lattice_lab::configs::{
    all_reports, classify, enumerate_candidates, is_even_configuration, Configuration,
};
use lattice_lab::gf2::disc::DiscriminantSpace;
use lattice_lab::gf2::field::ExtensionField;
use lattice_lab::lattice::builders::{e1_lattice, e_two, m_lattice, n_lattice};
use lattice_lab::lattice::{GramLattice, DEFAULT_BOX};
use lattice_lab::perm::census::{census, census_cached, ramification_table};
use lattice_lab::period::{report, sample_many, Constraint, PeriodJson, PeriodPoint};
use lattice_lab::roots::{
    a_vector, build_root_lattice, e10, enumerate_dominant_norm4, fundamental_weights, is_even_in_lattice,
    orthogonal_root_decomposition, weight_pairings, DynkinType,
};
use lattice_lab::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::canonical;

pub struct Outcome {
    pub value: Value,
    pub rows: Vec<Vec<Value>>,
    pub ok: bool,
}

impl Outcome {
    fn new(value: Value, rows: Vec<Vec<Value>>, ok: bool) -> Self {
        Outcome { value, rows, ok }
    }
}

fn header(names: &[&str]) -> Vec<Value> {
    names.iter().map(|n| json!(n)).collect()
}

pub fn weights() -> Result<Outcome> {
    let e = e10();
    let w = fundamental_weights(&e)?;
    let p = weight_pairings(&e, &w);
    let list: Vec<Value> = w
        .iter()
        .enumerate()
        .map(|(i, x)| json!({"node": i + 1, "coefficients": x.coefficients, "norm": p[i][i]}))
        .collect();
    let mut rows = vec![header(&["node", "norm", "coefficients"])];
    rows.extend(w.iter().enumerate().map(|(i, x)| vec![json!(i + 1), json!(p[i][i]), json!(x.coefficients)]));
    Ok(Outcome::new(json!({"weights": list, "pairings": p}), rows, true))
}

pub fn norm4() -> Result<Outcome> {
    let found = enumerate_dominant_norm4();
    let mut rows = vec![header(&["multiplicities", "coefficients"])];
    rows.extend(found.iter().map(|d| vec![json!(d.multiplicities), json!(d.coefficients)]));
    Ok(Outcome::new(json!({"count": found.len(), "weights": found}), rows, true))
}

/// The types with a tabulated A-vector, up to rank 12.
pub fn a_vector_types() -> Vec<DynkinType> {
    let mut v = vec![DynkinType::a(1)];
    v.extend((2..=6).map(|n| DynkinType::d(2 * n)));
    v.extend([DynkinType::e(7), DynkinType::e(8)]);
    v
}

/// Checks an orthogonal decomposition: norms `-2`, pairwise orthogonal, sum `A`.
pub fn decomposition_holds(l: &GramLattice, frame: &[Vec<i64>], a: &[i64]) -> bool {
    let norms = frame.iter().all(|r| l.norm(r) == (-2).into());
    let ortho = frame.iter().enumerate().all(|(i, r)| frame[i + 1..].iter().all(|s| l.inner(r, s) == 0.into()));
    let sum = frame.iter().fold(vec![0i64; a.len()], |acc, r| acc.iter().zip(r).map(|(x, y)| x + y).collect());
    norms && ortho && sum == a
}

pub fn avectors() -> Result<Outcome> {
    let mut list = Vec::new();
    let mut rows = vec![header(&["type", "coefficients", "norm", "even", "decomposes"])];
    let mut ok = true;
    for t in a_vector_types() {
        let l = build_root_lattice(t)?;
        let a = a_vector(t)?;
        let norm = l.norm(&a.coefficients);
        let frame = orthogonal_root_decomposition(t, 0)?;
        let decomposes = decomposition_holds(&l, &frame, &a.coefficients);
        ok &= decomposes && norm == (-2 * t.rank as i64).into();
        rows.push(vec![json!(t), json!(a.coefficients), json!(norm.to_string()), json!(is_even_in_lattice(&a)), json!(decomposes)]);
        list.push(json!({
            "type": t,
            "coefficients": a.coefficients,
            "norm": norm.to_string(),
            "even": is_even_in_lattice(&a),
            "decomposition": frame,
            "decomposes": decomposes,
        }));
    }
    Ok(Outcome::new(json!({"a_vectors": list}), rows, ok))
}

pub fn classify_configs() -> Result<Outcome> {
    let candidates = enumerate_candidates();
    let (odd, even) = classify()?;
    let base = all_reports(0)?;
    let coherent = base.iter().all(|r| is_even_configuration(&r.config) == r.half_sum_in_lattice);
    let verdicts: Vec<bool> = base.iter().map(|r| r.verdict).collect();
    let mut invariant = true;
    for variant in 1..=3 {
        invariant &= all_reports(variant)?.iter().map(|r| r.verdict).collect::<Vec<_>>() == verdicts;
    }
    let names = |v: &[Configuration]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let mut rows = vec![header(&["configuration", "admissible", "even"])];
    rows.extend(base.iter().map(|r| vec![json!(r.config), json!(r.verdict), json!(r.half_sum_in_lattice)]));
    let value = json!({
        "candidates": candidates.len(),
        "odd": names(&odd),
        "even": names(&even),
        "evenness_coherent": coherent,
        "realization_invariant": invariant,
        "reports": base,
    });
    Ok(Outcome::new(value, rows, coherent && invariant))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SuperLattice {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "E2", alias = "e2")]
    E2,
}

pub fn superlattices(which: SuperLattice) -> Result<Outcome> {
    let (name, base, search, target, bound) = match which {
        // M is definite, so the search for z = 2r with z^2 = -8 is complete
        SuperLattice::M => ("M", m_lattice(), m_lattice(), -8, 0),
        // classes of E(2) are classes of E; a norm -4 lift z gives the root z/2
        SuperLattice::E2 => ("E(2)", e_two(), e10(), -4, DEFAULT_BOX),
    };
    let sup = base.index2_even_superlattices();
    let mut rows = vec![header(&["class", "witness"])];
    let mut found = 0;
    let mut classes = Vec::with_capacity(sup.len());
    for s in &sup {
        let class: Vec<u8> = s.class.iter().map(|&x| x as u8).collect();
        let w = search.represent_class_with_norm(&class, target, bound);
        found += w.is_some() as usize;
        rows.push(vec![json!(s.class), json!(w)]);
        classes.push(json!({"class": s.class, "witness": w}));
    }
    let all = found == sup.len();
    let value = json!({
        "lattice": name,
        "classes": sup.len(),
        "with_root": found,
        "all_contain_root": all,
        "witness_norm": target,
        "superlattices": classes,
    });
    Ok(Outcome::new(value, rows, all))
}

fn named_lattice(name: &str) -> Result<GramLattice> {
    Ok(match name {
        "N" => n_lattice(),
        "E1" => e1_lattice(),
        "M" => m_lattice(),
        "E2" | "E(2)" => e_two(),
        "E10" | "E" => e10(),
        other => build_root_lattice(DynkinType::parse(other)?)?,
    })
}

pub fn disc(name: &str) -> Result<Outcome> {
    let l = named_lattice(name)?;
    let g = l.discriminant_group();
    let divisors: Vec<String> = g.elementary_divisors.iter().map(|d| d.to_string()).collect();
    let mut value = json!({
        "lattice": name,
        "rank": l.rank(),
        "det": l.det().to_string(),
        "signature": l.signature(),
        "even": l.is_even(),
        "elementary_divisors": divisors,
        "order": g.order().to_string(),
        "two_elementary": l.is_two_elementary(),
        "sigma": l.sigma(),
    });
    let mut rows = vec![header(&["key", "value"])];
    if name == "N" {
        let d = DiscriminantSpace::n0()?;
        let s = d.summary()?;
        let f4 = ExtensionField::new(2)?;
        let (arf_k, witt_k) = d.space().arf_and_witt_over(&f4)?;
        value["n0"] = canonical::to_value(&s);
        value["n0"]["over_gf4"] = json!({"arf": arf_k, "witt_index": witt_k});
    }
    if let Value::Object(m) = &value {
        rows.extend(m.iter().map(|(k, v)| vec![json!(k), v.clone()]));
    }
    Ok(Outcome::new(value, rows, true))
}

/// On-disk form of a batch of sampled periods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodFile {
    pub field_degree: u32,
    pub constraint: Constraint,
    pub seeds: Vec<u64>,
    pub periods: Vec<PeriodJson>,
}

pub fn period_sample(field_degree: u32, seed: u64, count: u64, constraint: Constraint) -> Result<(PeriodFile, Outcome)> {
    let f = ExtensionField::new(field_degree)?;
    let seeds: Vec<u64> = (seed..seed + count).collect();
    let points = sample_many(&seeds, f, &constraint)?;
    let file = PeriodFile {
        field_degree,
        constraint,
        seeds: seeds.clone(),
        periods: points.iter().map(|p| p.to_json()).collect(),
    };
    let mut rows = vec![header(&["seed", "frobenius_overlap", "rational_dim"])];
    rows.extend(
        seeds.iter().zip(&file.periods).map(|(s, p)| vec![json!(s), json!(p.frobenius_overlap), json!(p.rational_dim)]),
    );
    let value = canonical::to_value(&file);
    Ok((file, Outcome::new(value, rows, true)))
}

pub fn period_check(file: &PeriodFile) -> Result<Outcome> {
    let mut reports = Vec::with_capacity(file.periods.len());
    let mut rows = vec![header(&["seed", "valid", "in_M0", "is_12A1", "in_M1", "defects", "tangent_dim", "agree"])];
    let mut ok = true;
    for (seed, j) in file.seeds.iter().zip(&file.periods) {
        let v = PeriodPoint::from_json(j)?;
        let r = report(&v)?;
        ok &= r.valid && r.agree != Some(false);
        rows.push(vec![
            json!(seed),
            json!(r.valid),
            json!(r.in_m0),
            json!(r.is_12a1),
            json!(r.in_m1),
            json!(r.defects),
            json!(r.tangent_dim),
            json!(r.agree),
        ]);
        let mut value = canonical::to_value(&r);
        value["seed"] = json!(seed);
        reports.push(value);
    }
    Ok(Outcome::new(json!({"field_degree": file.field_degree, "reports": reports}), rows, ok))
}

pub fn read_period_file(path: &Path) -> Result<PeriodFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

pub fn census_command(cache: Option<&Path>, full: bool) -> Result<Outcome> {
    let c = match cache {
        Some(p) => census_cached(p)?,
        None => census(None),
    };
    let ok = c.summary.all_orders_divide_maximal && c.summary.global_conjugate_pairs == 0;
    let mut rows = vec![header(&["id", "order", "factorization", "h_order", "c_order", "h_generators", "c_generator"])];
    rows.extend(c.records.iter().map(|r| {
        vec![
            json!(r.id),
            json!(r.order),
            json!(r.factorization),
            json!(r.h_order),
            json!(r.c_order),
            json!(r.h_generators.join(" ")),
            json!(r.c_generator),
        ]
    }));
    let value = if full {
        canonical::to_value(&c)
    } else {
        json!({
            "version_hash": c.version_hash,
            "summary": c.summary,
            "ramification_table": ramification_table(&c),
        })
    };
    Ok(Outcome::new(value, rows, ok))
}
