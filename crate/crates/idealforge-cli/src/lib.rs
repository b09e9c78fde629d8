//! Command-line pipeline: build certified families, re-verify artifacts,
//! report bounds, emit formula files, tabulate the exhaustive oracle and
//! benchmark the stages.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification or
//! certificate mismatch, 3 no verifier applicable within budgets.

pub mod expr;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use idealforge::combinators::{recount_with_family, BuildTrace, GroupAllocator};
use idealforge::constructions::{build_best, build_block, build_sqrt};
use idealforge::family::{ideal_count_ie, SetFamily};
use idealforge::formula::{
    cnf_brute_falsifying_count, cnf_falsifying_count, cnf_to_dimacs, cnf_to_json, cnf_to_text,
    dnf_brute_count, dnf_count, dnf_to_dimacs, dnf_to_json, dnf_to_text, family_to_cnf,
    family_to_dnf, parse_exact_count, parse_formula, Cnf, Dnf, Formula,
};
use idealforge::numeric::{block_count, lower_bound_terms, upper_bound_terms, Nat};
use idealforge::oracle::{alpha_exhaustive, write_alpha_csv};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_NO_VERIFIER: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "idealforge",
    about = "Builds set families and monotone DNF/CNF formulas with exactly k satisfying assignments, certified"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Member ceiling for the inclusion-exclusion counters.
    #[arg(long, global = true, env = "IDEALFORGE_IE_BUDGET", default_value_t = 30)]
    pub ie_budget: usize,

    /// Variable ceiling for brute-force model counting.
    #[arg(long, global = true, default_value_t = 24)]
    pub brute_vars: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Block,
    Sqrt,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dimacs,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a certified family for k; writes family.json and trace.json.
    Build {
        /// Target count: decimal, 0xHEX, or 2^a[+b|-b].
        #[arg(long)]
        k: String,
        #[arg(long, value_enum, default_value_t = Strategy::Best)]
        strategy: Strategy,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Re-verify a family, trace or formula file against its exact-count line.
    Verify { path: PathBuf },
    /// Report bl(k), the lower bound, both upper bounds and (for tiny k) the true alpha.
    Bounds {
        #[arg(long)]
        k: String,
    },
    /// Build and export the monotone DNF (or CNF) for k.
    Emit {
        #[arg(long)]
        k: String,
        #[arg(long, value_enum, default_value_t = Strategy::Best)]
        strategy: Strategy,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Emit the CNF (k falsifying assignments) instead of the DNF.
        #[arg(long)]
        cnf: bool,
        /// Add a dummy variable to every term so empty terms become
        /// representable; the count is unchanged.
        #[arg(long)]
        pad: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Tabulate the exhaustive alpha oracle as CSV.
    Oracle {
        #[arg(long, default_value_t = 32)]
        max_k: u64,
        #[arg(long, default_value_t = 12)]
        max_universe: u32,
        #[arg(long, default_value_t = 4)]
        max_members: usize,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the pipeline stages for a given k.
    Bench {
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 3)]
        iters: u32,
    },
}

pub fn run(cfg: RunConfig) -> u8 {
    if cfg.ie_budget == 0 || cfg.brute_vars == 0 {
        eprintln!("error: budgets must be positive");
        return EXIT_USAGE;
    }
    let ie_budget = cfg.ie_budget;
    let brute_vars = cfg.brute_vars;
    match cfg.command {
        Command::Build { k, strategy, out } => cmd_build(&k, strategy, &out),
        Command::Verify { path } => cmd_verify(&path, ie_budget, brute_vars),
        Command::Bounds { k } => cmd_bounds(&k),
        Command::Emit { k, strategy, format, cnf, pad, out } => {
            cmd_emit(&k, strategy, format, cnf, pad, &out)
        }
        Command::Oracle { max_k, max_universe, max_members, out } => {
            cmd_oracle(max_k, max_universe, max_members, out.as_deref())
        }
        Command::Bench { k, iters } => cmd_bench(&k, iters),
    }
}

fn parse_positive_k(text: &str) -> Result<Nat, String> {
    let k = expr::parse_k_expr(text)?;
    if k.is_zero() {
        return Err(
            "k = 0 is outside the supported range: constructions and bounds are defined for k >= 1"
                .into(),
        );
    }
    Ok(k)
}

fn build_with(k: &Nat, strategy: Strategy) -> idealforge::combinators::CertifiedFamily {
    match strategy {
        Strategy::Block => build_block(k, &GroupAllocator::new()),
        Strategy::Sqrt if *k >= Nat::from(3u32) => build_sqrt(k, &GroupAllocator::new()),
        Strategy::Sqrt => build_block(k, &GroupAllocator::new()),
        Strategy::Best => build_best(k),
    }
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Block => "block",
        Strategy::Sqrt => "sqrt",
        Strategy::Best => "best",
    }
}

fn display_bound(b: Option<u64>) -> String {
    b.map_or_else(|| "na".to_string(), |v| v.to_string())
}

/// `sqrt` when the square-root bound undercuts the block bound, `block`
/// otherwise (including ties).
fn active_bound(k: &Nat) -> &'static str {
    let (block, sqrt) = upper_bound_terms(k);
    match sqrt {
        Some(s) if s < block => "sqrt",
        _ => "block",
    }
}

fn cmd_build(k_text: &str, strategy: Strategy, out: &Path) -> u8 {
    let k = match parse_positive_k(k_text) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let built = build_with(&k, strategy);
    if let Err(e) = built.verify() {
        eprintln!("certificate error: {e}");
        return EXIT_MISMATCH;
    }
    if let Err(e) = fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return EXIT_USAGE;
    }
    let family_path = out.join("family.json");
    let trace_path = out.join("trace.json");
    let family_file = format!("{}\nc exact-count {k}\n", built.family.to_canonical_json());
    let trace_file = format!("{}\nc exact-count {k}\n", built.trace.to_json());
    if let Err(e) = fs::write(&family_path, family_file).and_then(|_| fs::write(&trace_path, trace_file)) {
        eprintln!("error: cannot write artifacts: {e}");
        return EXIT_USAGE;
    }
    let (block_bound, sqrt) = upper_bound_terms(&k);
    println!(
        "build k={k} strategy={} members={} universe={} count_verified=true bl={} lower_bound={} block_bound={} sqrt_bound={} active_bound={} family={} trace={}",
        strategy_name(strategy),
        built.members(),
        built.family.universe().len(),
        block_count(&k),
        lower_bound_terms(&k),
        block_bound,
        display_bound(sqrt),
        active_bound(&k),
        family_path.display(),
        trace_path.display(),
    );
    EXIT_OK
}

fn strip_comment_lines(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("c ") && l.trim() != "c")
        .collect::<Vec<_>>()
        .join("\n")
}

enum Artifact {
    Family(SetFamily),
    Trace(BuildTrace),
    FormulaFile(Formula),
}

fn classify(text: &str) -> Result<Artifact, String> {
    let body = strip_comment_lines(text);
    let trimmed = body.trim_start();
    if trimmed.starts_with('{') {
        let json = trimmed.trim_end();
        // Canonical artifacts announce their kind in the first field;
        // deep traces must not pass through a depth-limited Value parse.
        if json.starts_with(r#"{"node":"#) {
            let trace =
                BuildTrace::from_json(json).map_err(|e| format!("invalid trace JSON: {e}"))?;
            return Ok(Artifact::Trace(trace));
        }
        if json.starts_with(r#"{"members":"#) {
            let family =
                SetFamily::from_json(json).map_err(|e| format!("invalid family JSON: {e}"))?;
            return Ok(Artifact::Family(family));
        }
        let value: serde_json::Value =
            serde_json::from_str(json).map_err(|e| format!("invalid JSON: {e}"))?;
        if value.get("node").is_some() {
            let trace =
                BuildTrace::from_json(json).map_err(|e| format!("invalid trace JSON: {e}"))?;
            return Ok(Artifact::Trace(trace));
        }
        if value.get("members").is_some() {
            let family =
                SetFamily::from_json(json).map_err(|e| format!("invalid family JSON: {e}"))?;
            return Ok(Artifact::Family(family));
        }
        if value.get("vars").is_some() {
            let (formula, _) = parse_formula(text).map_err(|e| e.to_string())?;
            return Ok(Artifact::FormulaFile(formula));
        }
        return Err("JSON object is not a family, trace or formula".into());
    }
    if trimmed.starts_with("p ") || body.contains("\np ") {
        let (formula, _) = parse_formula(text).map_err(|e| e.to_string())?;
        return Ok(Artifact::FormulaFile(formula));
    }
    Err("unrecognized artifact format".into())
}

fn family_verifiers(
    fam: &SetFamily,
    ie_budget: usize,
    brute_vars: u32,
    results: &mut Vec<(&'static str, Nat)>,
) {
    if let Ok(count) = ideal_count_ie(fam, ie_budget) {
        results.push(("ideal_count_ie", count));
    }
    let dnf = family_to_dnf(fam);
    if let Ok(count) = dnf_count(&dnf, ie_budget) {
        results.push(("dnf_count", count));
    }
    if let Ok(count) = dnf_brute_count(&dnf, brute_vars) {
        results.push(("dnf_brute_count", count));
    }
}

fn dnf_verifiers(
    dnf: &Dnf,
    ie_budget: usize,
    brute_vars: u32,
    results: &mut Vec<(&'static str, Nat)>,
) {
    if let Ok(count) = dnf_count(dnf, ie_budget) {
        results.push(("dnf_count", count));
    }
    if let Ok(count) = dnf_brute_count(dnf, brute_vars) {
        results.push(("dnf_brute_count", count));
    }
}

fn cnf_verifiers(
    cnf: &Cnf,
    ie_budget: usize,
    brute_vars: u32,
    results: &mut Vec<(&'static str, Nat)>,
) {
    if let Ok(count) = cnf_falsifying_count(cnf, ie_budget) {
        results.push(("cnf_falsifying_count", count));
    }
    if let Ok(count) = cnf_brute_falsifying_count(cnf, brute_vars) {
        results.push(("cnf_brute_falsifying_count", count));
    }
}

fn cmd_verify(path: &Path, ie_budget: usize, brute_vars: u32) -> u8 {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let Some(claimed) = parse_exact_count(&text) else {
        eprintln!("error: {} carries no 'c exact-count' claim", path.display());
        return EXIT_USAGE;
    };
    let artifact = match classify(&text) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut results: Vec<(&'static str, Nat)> = Vec::new();
    let kind = match artifact {
        Artifact::Trace(trace) => {
            match recount_with_family(&trace) {
                Ok((count, as_built)) => {
                    results.push(("recount", count));
                    family_verifiers(&as_built.normalize(), ie_budget, brute_vars, &mut results);
                }
                Err(e) => {
                    eprintln!("certificate error: {e}");
                    return EXIT_MISMATCH;
                }
            }
            "trace"
        }
        Artifact::Family(family) => {
            family_verifiers(&family, ie_budget, brute_vars, &mut results);
            "family"
        }
        Artifact::FormulaFile(Formula::Dnf(dnf)) => {
            dnf_verifiers(&dnf, ie_budget, brute_vars, &mut results);
            "dnf"
        }
        Artifact::FormulaFile(Formula::Cnf(cnf)) => {
            cnf_verifiers(&cnf, ie_budget, brute_vars, &mut results);
            "cnf"
        }
    };
    if results.is_empty() {
        println!(
            "verify path={} kind={kind} claimed={claimed} verifiers=none status=no-verifier-applicable",
            path.display()
        );
        return EXIT_NO_VERIFIER;
    }
    let names: Vec<&str> = results.iter().map(|(n, _)| *n).collect();
    let mismatches: Vec<String> = results
        .iter()
        .filter(|(_, v)| *v != claimed)
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    if mismatches.is_empty() {
        println!(
            "verify path={} kind={kind} claimed={claimed} verifiers={} status=ok",
            path.display(),
            names.join(",")
        );
        EXIT_OK
    } else {
        println!(
            "verify path={} kind={kind} claimed={claimed} verifiers={} status=mismatch {}",
            path.display(),
            names.join(","),
            mismatches.join(" ")
        );
        EXIT_MISMATCH
    }
}

fn cmd_bounds(k_text: &str) -> u8 {
    let k = match parse_positive_k(k_text) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let (block_bound, sqrt) = upper_bound_terms(&k);
    let alpha = alpha_exhaustive(&k, 12, 4)
        .map(|r| r.alpha.to_string())
        .unwrap_or_else(|_| "na".to_string());
    println!(
        "bounds k={k} bl={} lower_bound={} block_bound={} sqrt_bound={} active_bound={} alpha={}",
        block_count(&k),
        lower_bound_terms(&k),
        block_bound,
        display_bound(sqrt),
        active_bound(&k),
        alpha,
    );
    EXIT_OK
}

fn cmd_emit(
    k_text: &str,
    strategy: Strategy,
    format: Format,
    want_cnf: bool,
    pad: bool,
    out: &Path,
) -> u8 {
    let k = match parse_positive_k(k_text) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let built = build_with(&k, strategy);
    if let Err(e) = built.verify() {
        eprintln!("certificate error: {e}");
        return EXIT_MISMATCH;
    }
    let (kind, vars, sets, content, ext) = if want_cnf {
        let mut cnf = family_to_cnf(&built.family);
        if pad {
            cnf = cnf.pad();
        }
        let content = match format {
            Format::Json => Ok(cnf_to_json(&cnf, &k)),
            Format::Dimacs => cnf_to_dimacs(&cnf, &k),
            Format::Text => Ok(cnf_to_text(&cnf, &k)),
        };
        match content {
            Ok(c) => (
                "cnf",
                cnf.num_vars,
                cnf.clauses.len(),
                c,
                match format {
                    Format::Json => "json",
                    Format::Dimacs => "cnf",
                    Format::Text => "txt",
                },
            ),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    } else {
        let mut dnf = family_to_dnf(&built.family);
        if pad {
            dnf = dnf.pad();
        }
        let content = match format {
            Format::Json => Ok(dnf_to_json(&dnf, &k)),
            Format::Dimacs => dnf_to_dimacs(&dnf, &k),
            Format::Text => Ok(dnf_to_text(&dnf, &k)),
        };
        match content {
            Ok(c) => (
                "dnf",
                dnf.num_vars,
                dnf.terms.len(),
                c,
                match format {
                    Format::Json => "json",
                    Format::Dimacs => "dnf",
                    Format::Text => "txt",
                },
            ),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    };
    if let Err(e) = fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return EXIT_USAGE;
    }
    let path = out.join(format!("formula.{ext}"));
    if let Err(e) = fs::write(&path, content) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return EXIT_USAGE;
    }
    println!(
        "emit k={k} kind={kind} format={} vars={vars} sets={sets} padded={pad} file={}",
        match format {
            Format::Json => "json",
            Format::Dimacs => "dimacs",
            Format::Text => "text",
        },
        path.display(),
    );
    EXIT_OK
}

fn cmd_oracle(max_k: u64, max_universe: u32, max_members: usize, out: Option<&Path>) -> u8 {
    let result = match out {
        Some(path) => {
            let file = match fs::File::create(path) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: cannot create {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            };
            write_alpha_csv(file, max_k, max_universe, max_members)
        }
        None => write_alpha_csv(std::io::stdout().lock(), max_k, max_universe, max_members),
    };
    match result {
        Ok(()) => {
            if let Some(path) = out {
                println!("oracle max_k={max_k} file={}", path.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn time_ms<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed().as_secs_f64() * 1e3)
}

fn cmd_bench(k_text: &str, iters: u32) -> u8 {
    let k = match parse_positive_k(k_text) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let iters = iters.max(1);
    let mut block_ms = f64::MAX;
    let mut best_ms = f64::MAX;
    let mut recount_ms = f64::MAX;
    let mut built = None;
    for _ in 0..iters {
        let (b, ms) = time_ms(|| build_block(&k, &GroupAllocator::new()));
        block_ms = block_ms.min(ms);
        drop(b);
        let (b, ms) = time_ms(|| build_best(&k));
        best_ms = best_ms.min(ms);
        let (_, ms) = time_ms(|| idealforge::combinators::recount(&b.trace));
        recount_ms = recount_ms.min(ms);
        built = Some(b);
    }
    let built = built.expect("at least one iteration");
    let ie_ms = ideal_count_ie(&built.family, 30)
        .ok()
        .map(|_| time_ms(|| ideal_count_ie(&built.family, 30)).1);
    println!(
        "bench k={k} iters={iters} build_block_ms={block_ms:.3} build_best_ms={best_ms:.3} recount_ms={recount_ms:.3} ideal_count_ie_ms={}",
        ie_ms.map_or_else(|| "na".to_string(), |v| format!("{v:.3}")),
    );
    EXIT_OK
}
