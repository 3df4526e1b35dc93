use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lattice_lab::period::Constraint;
use lattice_lab_cli::commands::{self, Outcome, SuperLattice};
use lattice_lab_cli::manifest::RunManifest;
use lattice_lab_cli::{canonical, verify};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lattice-lab", version, about = "Exact lattice, period and census computations")]
struct Cli {
    /// write tab-separated rows instead of JSON
    #[arg(long, global = true)]
    tsv: bool,
    /// seed for every stochastic path
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// worker threads for parallel kernels
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// write a run manifest to this path
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// fundamental weights of E10 and their pairings
    Weights,
    /// dominant weights of norm 4
    Norm4,
    /// A-vectors and their orthogonal root decompositions
    Avectors,
    /// admissible root configurations in M
    ClassifyConfigs {
        /// accepted for symmetry; JSON is the default
        #[arg(long)]
        json: bool,
    },
    /// even index-2 superlattices and their roots
    Superlattices {
        #[arg(long, value_enum)]
        lattice: SuperLattice,
    },
    /// discriminant data of a named lattice (N, E1, M, E2, E10 or a Dynkin type)
    Disc {
        #[arg(long)]
        lattice: String,
    },
    /// sample or check period points
    Period {
        #[command(subcommand)]
        command: PeriodCommand,
    },
    /// conjugacy classes of 2-group by odd cyclic subgroups of S9
    Census {
        /// cache file; defaults to $LATTICE_LAB_CACHE when set
        #[arg(long)]
        cache: Option<PathBuf>,
        /// print every record, not only the summary
        #[arg(long)]
        json: bool,
    },
    /// run the acceptance matrix
    VerifyPaper {
        /// skip the census
        #[arg(long)]
        quick: bool,
        /// census cache file; defaults to $LATTICE_LAB_CACHE when set
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PeriodCommand {
    Sample {
        #[arg(long)]
        field_degree: u32,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// force a defect at the pair i,j (1-based)
        #[arg(long, value_parser = parse_pair, conflicts_with = "non_12a1")]
        defect: Option<(usize, usize)>,
        #[arg(long = "non-12a1")]
        non_12a1: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let i: usize = a.trim().parse().map_err(|_| format!("bad index {a}"))?;
    let j: usize = b.trim().parse().map_err(|_| format!("bad index {b}"))?;
    if !(1..=12).contains(&i) || !(1..=12).contains(&j) || i == j {
        return Err("indices must be distinct and in 1..=12".into());
    }
    Ok((i.min(j), i.max(j)))
}

fn cache_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os("LATTICE_LAB_CACHE").map(PathBuf::from))
}

fn run(cli: Cli) -> lattice_lab::Result<(String, Value, Outcome)> {
    Ok(match cli.command {
        Command::Weights => ("weights".into(), json!({}), commands::weights()?),
        Command::Norm4 => ("norm4".into(), json!({}), commands::norm4()?),
        Command::Avectors => ("avectors".into(), json!({}), commands::avectors()?),
        Command::ClassifyConfigs { .. } => ("classify-configs".into(), json!({}), commands::classify_configs()?),
        Command::Superlattices { lattice } => {
            let name = format!("{lattice:?}");
            ("superlattices".into(), json!({ "lattice": name }), commands::superlattices(lattice)?)
        }
        Command::Disc { lattice } => ("disc".into(), json!({ "lattice": lattice }), commands::disc(&lattice)?),
        Command::Period { command: PeriodCommand::Sample { field_degree, count, defect, non_12a1, out } } => {
            let constraint = match (defect, non_12a1) {
                (Some((i, j)), _) => Constraint::Defect(i - 1, j - 1),
                (None, true) => Constraint::NonTwelveA1,
                (None, false) => Constraint::Generic,
            };
            let params = json!({"field_degree": field_degree, "count": count, "constraint": constraint});
            let (file, outcome) = commands::period_sample(field_degree, cli.seed, count, constraint)?;
            if let Some(path) = out {
                std::fs::write(&path, canonical::to_string(&file) + "\n")
                    .map_err(|e| lattice_lab::Error::Cache(format!("{}: {e}", path.display())))?;
            }
            ("period sample".into(), params, outcome)
        }
        Command::Period { command: PeriodCommand::Check { input } } => {
            let file = commands::read_period_file(&input)?;
            ("period check".into(), json!({ "in": input }), commands::period_check(&file)?)
        }
        Command::Census { cache, json } => {
            let path = cache_path(cache);
            let outcome = commands::census_command(path.as_deref(), json)?;
            ("census".into(), json!({ "cache": path, "json": json }), outcome)
        }
        Command::VerifyPaper { quick, cache } => {
            let path = cache_path(cache);
            let v = verify::run(&verify::Options { quick, seed: cli.seed, cache: path.as_deref() })?;
            for c in &v.criteria {
                eprintln!("{:>2} {:<22} {}", c.id, c.key, canonical::to_value(&c.status).as_str().unwrap_or(""));
            }
            let mut rows = vec![vec![json!("id"), json!("criterion"), json!("status"), json!("check"), json!("pass")]];
            for c in &v.criteria {
                for k in &c.checks {
                    rows.push(vec![json!(c.id), json!(c.key), json!(c.status), json!(k.name), json!(k.pass)]);
                }
            }
            let ok = v.ok;
            ("verify-paper".into(), json!({ "quick": quick }), Outcome { value: canonical::to_value(&v), rows, ok })
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (tsv, seed, manifest) = (cli.tsv, cli.seed, cli.manifest.clone());
    let (command, params, outcome) = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = if tsv { canonical::tsv(&outcome.rows) } else { canonical::to_string(&outcome.value) + "\n" };
    print!("{text}");
    if let Some(path) = manifest {
        if let Err(e) = RunManifest::new(&command, params, seed, &text).write(&path) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(if outcome.ok { 0 } else { 1 })
}
