//! `cluster-int`: builds each family, runs its certificates and writes a JSON report.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use clusterint::bfz::{
    build_bfz_capped, choose_integrable_system_bfz, degcas_check, gexp_check, kostant_cascade, mu_low_probe,
    stabilizer_dimension, DoubleWord,
};
use clusterint::cluster::{log_volume_invariance, skew_symmetrizer, Seed, SeedJson};
use clusterint::dualgl::{
    build_dual_chart, build_staircase, casimir_binomial_check, choose_integrable_system_from, lambda_relations,
    log_volume_identity_check,
};
use clusterint::exec::Settings;
use clusterint::schubert::{
    build_cell, choose_integrable_system, flow_structure_check, index_and_magic, pfaffian_check, solid_minor_check_cell,
};
use clusterint::typea::ReducedWord;
use clusterint::Error;

#[derive(Parser, Debug)]
#[command(name = "cluster-int", version, about = "Integrable systems from cluster structures, certified exactly")]
struct Cli {
    /// PRNG seed for every randomized rank test (goes before the subcommand)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sample points per rank test
    #[arg(long, global = true, default_value_t = 8)]
    samples: usize,
    /// Worker threads; 1 runs everything sequentially
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Jet order cap (default 4n)
    #[arg(long, global = true)]
    jet_cap: Option<u32>,
    /// Write the JSON report here
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Schubert cell of SL(m) from a reduced word
    Schubert {
        #[arg(long)]
        m: usize,
        /// Comma-separated letters, e.g. 1,2,3,1,2,1
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
    },
    /// BFZ cluster on SL(n+1) with the staircase double word
    Bfz {
        #[arg(long)]
        n: usize,
    },
    /// Staircase system on the dual Poisson-Lie group GL(n)*
    Dualgl {
        #[arg(long)]
        n: usize,
        /// Also verify the closed log-volume form (n <= 3; about half a minute at n = 3)
        #[arg(long)]
        full_mu: bool,
    },
    /// Kostant cascade of sl(n+1) and the stabilizer dimension
    Cascade {
        #[arg(long)]
        n: usize,
    },
    /// Mutate a seed read from JSON along a path of 1-based directions
    Mutate {
        #[arg(long = "seed")]
        seed_file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
    },
    /// Re-run the invocation stored in a report and compare the output
    Verify { file: PathBuf },
}

enum Failure {
    Lib(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Lib(e) => match e {
                Error::TruncationInsufficient { .. } => 3,
                Error::NotReduced(_)
                | Error::InvalidWord(_)
                | Error::Input(_)
                | Error::Parse(_)
                | Error::DimensionMismatch(_)
                | Error::WrongWord
                | Error::NotMutable(_)
                | Error::NotSkewSymmetrizable
                | Error::BadTruncation(_)
                | Error::SingularLocus => 1,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(s) => s.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

struct Outcome {
    report: Value,
    summary: String,
    passes: bool,
}

fn settings(cli: &Cli) -> Settings {
    let s = Settings { seed: cli.seed, samples: cli.samples, ..Settings::default() };
    if cli.threads == Some(1) {
        s.sequential()
    } else {
        s
    }
}

/// Canonical argument list that reproduces the report (thread count and output path left out).
fn invocation(cli: &Cli) -> Vec<String> {
    let mut a = vec!["--seed".to_string(), cli.seed.to_string(), "--samples".into(), cli.samples.to_string()];
    if let Some(c) = cli.jet_cap {
        a.extend(["--jet-cap".into(), c.to_string()]);
    }
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    match &cli.command {
        Command::Schubert { m, word } => {
            a.extend(["schubert".into(), "--m".into(), m.to_string(), "--word".into(), join(word)])
        }
        Command::Bfz { n } => a.extend(["bfz".into(), "--n".into(), n.to_string()]),
        Command::Dualgl { n, full_mu } => {
            a.extend(["dualgl".into(), "--n".into(), n.to_string()]);
            if *full_mu {
                a.push("--full-mu".into());
            }
        }
        Command::Cascade { n } => a.extend(["cascade".into(), "--n".into(), n.to_string()]),
        Command::Mutate { seed_file, path } => {
            a.extend(["mutate".into(), "--seed".into(), seed_file.display().to_string(), "--path".into(), join(path)])
        }
        Command::Verify { file } => a.extend(["verify".into(), file.display().to_string()]),
    }
    a
}

fn pass_word(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_schubert(m: usize, word: &[usize], st: &Settings) -> Result<Outcome, Failure> {
    let cell = build_cell(m, word)?;
    let system = choose_integrable_system(&cell, st)?;
    let im = index_and_magic(&cell, st)?;
    let pf = pfaffian_check(&cell)?;
    let pi = cell.property_i(st)?;
    let solid = if cell.word == ReducedWord::staircase(m) { Some(solid_minor_check_cell(&cell)?) } else { None };
    let mut flow = true;
    for j in 1..=cell.len() {
        match flow_structure_check(&cell, j) {
            Ok(_) => {}
            Err(Error::StructureViolated { .. }) => flow = false,
            Err(e) => return Err(e.into()),
        }
    }
    let passes = system.passes() && im.rank_check && pf.holds && pi.holds && solid != Some(false) && flow;
    let summary = format!(
        "schubert m={m} word={}: {} functions, independent {}/{}, d_w={} ind={}, pfaffian {}, property I {{{},{}}}: {}",
        word.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        system.functions.len(),
        system.independent_count,
        system.magic_number,
        im.d_w,
        im.ind,
        pass_word(pf.holds),
        pi.deg_mu_low,
        pi.half_rank,
        pass_word(passes)
    );
    let report = json!({
        "command": "schubert",
        "m": m,
        "word": word,
        "phis": cell.phis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "lows": cell.lows.iter().map(|l| l.term.to_string()).collect::<Vec<_>>(),
        "frozen": cell.frozen().iter().map(|k| k + 1).collect::<Vec<_>>(),
        "system": system,
        "independent_count": system.independent_count,
        "index": im,
        "pfaffian": { "holds": pf.holds, "low_degree": pf.low_degree, "frozen_product": pf.frozen_product.to_string() },
        "property_i": pi,
        "solid_minor": solid,
        "flow_structure": flow,
        "passes": passes,
    });
    Ok(Outcome { report, summary, passes })
}

fn run_bfz(n: usize, cap: Option<u32>, st: &Settings) -> Result<Outcome, Failure> {
    if n < 2 {
        return Err(Failure::Input("bfz needs n >= 2".into()));
    }
    let cap = cap.unwrap_or(4 * n as u32);
    let c = build_bfz_capped(n, &DoubleWord::staircase(n), n as u32, cap, st)?;
    let system = choose_integrable_system_bfz(&c, st)?;
    let gexp = gexp_check(&c)?;
    let degcas = degcas_check(&c);
    let degcas_ok =
        degcas.iter().all(|r| r.twin_equal && r.difference_degree.is_none_or(|d| d == r.product_degree + 1));
    let probe = mu_low_probe(&c, true, st)?;
    let passes = system.passes() && gexp.all() && degcas_ok && probe.certified;
    let summary = format!(
        "bfz n={n}: {} functions, independent {}/{}, lowest-term formulas {}, deg mu^low {} vs half rank {}: {}",
        system.functions.len(),
        system.independent_count,
        system.magic_number,
        pass_word(gexp.all()),
        probe.upper_bound,
        probe.half_rank,
        pass_word(passes)
    );
    let report = json!({
        "command": "bfz",
        "n": n,
        "l0": c.l0(),
        "jet_order": c.order,
        "system": system,
        "independent_count": system.independent_count,
        "gexp": gexp,
        "degcas": degcas,
        "modified_mu_low": probe,
        "passes": passes,
    });
    Ok(Outcome { report, summary, passes })
}

fn run_dualgl(n: usize, full_mu: bool, st: &Settings) -> Result<Outcome, Failure> {
    if full_mu && n > 3 {
        return Err(Failure::Input("--full-mu is limited to n <= 3".into()));
    }
    let chart = build_dual_chart(n)?;
    let s = build_staircase(&chart);
    let system = choose_integrable_system_from(&chart, &s, st)?;
    let binomial = casimir_binomial_check(&s);
    let lam = lambda_relations(&chart, &s);
    let mu = if full_mu { Some(log_volume_identity_check(&chart, &s)?) } else { None };
    let passes = system.passes() && binomial && lam.tail && lam.phi && mu.as_ref().is_none_or(|m| m.holds());
    let summary = format!(
        "dualgl n={n}: {} functions, independent {}/{}, casimir identity {}, lambda relations {}{}: {}",
        system.functions.len(),
        system.independent_count,
        system.magic_number,
        pass_word(binomial),
        pass_word(lam.tail && lam.phi),
        mu.as_ref()
            .map(|m| format!(", log volume {} (deg {})", pass_word(m.holds()), m.deg_mu_low))
            .unwrap_or_default(),
        pass_word(passes)
    );
    let report = json!({
        "command": "dualgl",
        "n": n,
        "labels": s.labels,
        "system": system,
        "independent_count": system.independent_count,
        "casimir_binomial": binomial,
        "lambda_relations": lam,
        "log_volume": mu,
        "passes": passes,
    });
    Ok(Outcome { report, summary, passes })
}

fn run_cascade(n: usize) -> Result<Outcome, Failure> {
    if n < 1 {
        return Err(Failure::Input("cascade needs n >= 1".into()));
    }
    let c = kostant_cascade(n);
    let dim = stabilizer_dimension(n);
    let passes = dim == n;
    let roots = c.roots.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(", ");
    let summary = format!("cascade n={n}: {{{roots}}}, stabilizer dimension {dim}: {}", pass_word(passes));
    let report = json!({
        "command": "cascade",
        "n": n,
        "roots": c.roots,
        "e_plus": c.e_plus,
        "e_minus": c.e_minus,
        "stabilizer_dimension": dim,
        "passes": passes,
    });
    Ok(Outcome { report, summary, passes })
}

fn run_mutate(file: &PathBuf, path: &[usize]) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let sj: SeedJson = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let seed = Seed::from_json(&sj)?;
    if let Some(bad) = path.iter().find(|&&k| k == 0 || !seed.ex.contains(&(k - 1))) {
        return Err(Failure::Input(format!("direction {bad} is not a 1-based exchangeable index")));
    }
    let dirs: Vec<usize> = path.iter().map(|k| k - 1).collect();
    let out = seed.mutate_path(&dirs)?;
    let invariant = if seed.len() == seed.vars.len() { Some(log_volume_invariance(&seed, &dirs)?) } else { None };
    let before = skew_symmetrizer(&seed.principal_part());
    let after = skew_symmetrizer(&out.principal_part());
    let passes = invariant != Some(false) && before == after;
    let summary = format!(
        "mutate path={:?}: log volume {}, symmetrizer {:?}: {}",
        path,
        match invariant {
            Some(b) => pass_word(b),
            None => "not square",
        },
        after.as_deref().unwrap_or(&[]),
        pass_word(passes)
    );
    let report = json!({
        "command": "mutate",
        "path": path,
        "seed": out.to_json(),
        "log_volume_invariant": invariant,
        "symmetrizer": after,
        "passes": passes,
    });
    Ok(Outcome { report, summary, passes })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let st = settings(cli);
    let mut out = match &cli.command {
        Command::Schubert { m, word } => run_schubert(*m, word, &st)?,
        Command::Bfz { n } => run_bfz(*n, cli.jet_cap, &st)?,
        Command::Dualgl { n, full_mu } => run_dualgl(*n, *full_mu, &st)?,
        Command::Cascade { n } => run_cascade(*n)?,
        Command::Mutate { seed_file, path } => run_mutate(seed_file, path)?,
        Command::Verify { file } => return verify(file),
    };
    out.report["invocation"] = json!(invocation(cli));
    Ok(out)
}

fn verify(file: &PathBuf) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let saved: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let args: Vec<String> = saved
        .get("invocation")
        .and_then(|v| serde_json::from_value(v.clone()).ok())
        .ok_or_else(|| Failure::Input("report has no invocation".into()))?;
    let cli = Cli::try_parse_from(std::iter::once("cluster-int".to_string()).chain(args))
        .map_err(|e| Failure::Input(e.to_string()))?;
    if matches!(cli.command, Command::Verify { .. }) {
        return Err(Failure::Input("nested verify".into()));
    }
    let fresh = execute(&cli)?;
    let identical = fresh.report == saved;
    let passes = identical && fresh.passes;
    let summary = format!(
        "verify {}: {}, {}",
        file.display(),
        if identical { "identical" } else { "differs" },
        pass_word(passes)
    );
    let report = json!({ "command": "verify", "identical": identical, "passes": passes });
    Ok(Outcome { report, summary, passes })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        #[cfg(feature = "parallel")]
        Some(t) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
        _ => {}
    }
    match execute(&cli) {
        Ok(out) => {
            println!("{}", out.summary);
            if let Some(path) = &cli.report {
                let text = serde_json::to_string_pretty(&out.report).expect("report serializes") + "\n";
                if let Err(e) = fs::write(path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            if out.passes {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
