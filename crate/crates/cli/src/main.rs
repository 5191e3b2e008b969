mod io;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;
use treepattern::moments::MomentReport;
use treepattern::montecarlo::{convergence_experiment, ConvergenceRow};
use treepattern::oracle::{self, verify_labelled_rooted_count, verify_moment_formulas, LABELLED_COUNT_CAP};
use treepattern::{
    aut_rooted, aut_unrooted, estimate_pattern_stats, find_patterns, labelled_rooted_count,
    prufer_decode, prufer_encode, rootify, sample_tree, tree_center, CenterResult,
    SplitMix64,
};

use io::{csv_text, read_prufer, read_tree, resolve_pattern, CliError, CliResult, Output};

/// Patterns in uniform random labelled trees.
#[derive(Parser)]
#[command(name = "treepattern", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write output to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a uniform labelled tree
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tree file (or stdin) to Prüfer sequence
    Encode {
        #[arg(long, value_name = "FILE")]
        tree: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Prüfer sequence file (or stdin) to tree
    Decode {
        #[arg(value_name = "FILE")]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Count and list the occurrences of a pattern in a tree
    Count {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_name = "FILE|NAME")]
        pattern: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Automorphism group orders of a tree or a rooted pattern
    Aut {
        #[arg(long, value_name = "FILE", conflicts_with = "pattern", required_unless_present = "pattern")]
        tree: Option<PathBuf>,
        #[arg(long, value_name = "FILE|NAME")]
        pattern: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Centre of a tree
    Center {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Root a tree at its centre, subdividing a central edge; writes a pattern file
    Rootify {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact mean, second moment and Chebyshev bound of the pattern count
    Moments {
        #[arg(long, value_name = "FILE|NAME")]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the closed forms against exhaustive enumeration
    Verify {
        #[arg(long, value_name = "FILE|NAME")]
        pattern: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Monte Carlo estimate at one tree size
    Mc {
        #[arg(long, value_name = "FILE|NAME")]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Monte Carlo estimates over several tree sizes, with exact bounds
    Converge {
        #[arg(long, value_name = "FILE|NAME")]
        pattern: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn center_json(c: CenterResult) -> serde_json::Value {
    match c {
        CenterResult::Vertex(v) => json!({ "kind": "vertex", "vertices": [v] }),
        CenterResult::Edge(u, v) => json!({ "kind": "edge", "vertices": [u, v] }),
    }
}

fn center_text(c: CenterResult) -> String {
    match c {
        CenterResult::Vertex(v) => format!("vertex {v}\n"),
        CenterResult::Edge(u, v) => format!("edge {u} {v}\n"),
    }
}

fn cmd_count(tree: PathBuf, pattern: &str, as_json: bool, out: Output) -> CliResult {
    let tree = read_tree(Some(&tree))?;
    let pat = resolve_pattern(pattern)?;
    let found = find_patterns(&tree, &pat);
    if as_json {
        let occ: Vec<_> = found
            .iter()
            .map(|o| json!({ "root": o.root(), "others": o.others() }))
            .collect();
        return out.json(&json!({ "count": found.len(), "occurrences": occ }));
    }
    let mut text = format!("{}\n", found.len());
    for o in &found {
        let others: Vec<String> = o.others().iter().map(ToString::to_string).collect();
        writeln!(text, "root {}: {}", o.root(), others.join(" ")).unwrap();
    }
    out.write(&text)
}

fn cmd_aut(tree: Option<PathBuf>, pattern: Option<String>, as_json: bool, out: Output) -> CliResult {
    if let Some(spec) = pattern {
        let pat = resolve_pattern(&spec)?;
        let aut_tree = aut_unrooted(pat.shape().tree());
        let rooted = pat.aut_root_order();
        let labelled = labelled_rooted_count(&pat);
        if as_json {
            return out.json(&json!({
                "p": pat.p(),
                "aut_root_order": rooted.to_string(),
                "aut_order": aut_tree.to_string(),
                "labelled_rooted_count": labelled.to_string(),
                "canonical": pat.canonical().to_string(),
            }));
        }
        return out.write(&format!(
            "p {}\naut_root_order {rooted}\naut_order {aut_tree}\nlabelled_rooted_count {labelled}\ncanonical {}\n",
            pat.p(),
            pat.canonical()
        ));
    }
    let tree = read_tree(tree.as_deref())?;
    let order = aut_unrooted(&tree);
    let centre_rooted = rootify(&tree);
    let rooted = aut_rooted(&centre_rooted);
    let centre = tree_center(&tree);
    if as_json {
        return out.json(&json!({
            "n": tree.n(),
            "aut_order": order.to_string(),
            "center": center_json(centre),
            "rootified_aut_root_order": rooted.to_string(),
        }));
    }
    out.write(&format!(
        "aut_order {order}\ncenter {}rootified_aut_root_order {rooted}\n",
        center_text(centre)
    ))
}

fn cmd_verify(pattern: &str, n_max: usize, workers: usize, as_json: bool, out: Output) -> CliResult {
    let pat = resolve_pattern(pattern)?;
    let first = pat.p() + 2;
    if n_max < first {
        return Err(usage(format!("--n-max must be at least p + 2 = {first}")));
    }
    if n_max > oracle::DEFAULT_CAP {
        return Err(usage(format!("--n-max above the enumeration cap {}", oracle::DEFAULT_CAP)));
    }
    let labelled = if pat.p() < LABELLED_COUNT_CAP {
        Some(verify_labelled_rooted_count(&pat).expect("within cap"))
    } else {
        None
    };
    let mut runs = Vec::new();
    for n in first..=n_max {
        runs.push(verify_moment_formulas(&pat, n, workers).map_err(|e| usage(e.to_string()))?);
    }
    let passed = labelled.as_ref().is_none_or(|l| l.equal) && runs.iter().all(|r| r.passed());

    if as_json {
        let runs_json: Vec<_> = runs
            .iter()
            .map(|r| {
                let checks: Vec<_> = r
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "name": c.name,
                            "oracle": c.oracle.to_string(),
                            "formula": c.formula.as_ref().map(ToString::to_string),
                            "outcome": c.outcome,
                        })
                    })
                    .collect();
                json!({ "n": r.n, "passed": r.passed(), "checks": checks })
            })
            .collect();
        out.json(&json!({
            "pattern": pat.canonical().to_string(),
            "p": pat.p(),
            "labelled_rooted_count": labelled,
            "runs": runs_json,
            "passed": passed,
        }))?;
    } else {
        let mut text = format!("pattern {} (p = {})\n", pat.canonical(), pat.p());
        if let Some(l) = &labelled {
            writeln!(
                text,
                "labelled rooted count: enumerated {} formula {} {}",
                l.enumerated,
                l.formula,
                if l.equal { "equal" } else { "UNEQUAL" }
            )
            .unwrap();
        }
        for r in &runs {
            writeln!(text, "n = {}", r.n).unwrap();
            for c in &r.checks {
                let formula = c.formula.as_ref().map_or_else(|| "-".to_string(), ToString::to_string);
                writeln!(text, "  {:<26} oracle {:<14} formula {:<14} {}", c.name, c.oracle, formula, c.outcome)
                    .unwrap();
            }
        }
        writeln!(text, "{}", if passed { "all checks passed" } else { "VERIFICATION FAILED" }).unwrap();
        out.write(&text)?;
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn rows_text(rows: &[ConvergenceRow]) -> String {
    let mut text = format!(
        "{:>6} {:>9} {:>9} {:>9} {:>19} {:>10} {:>9} {:>12} {:>12}\n",
        "n", "samples", "hits", "p_hat", "95% CI", "mean_hat", "stderr", "exact_mean", "cheb_bound"
    );
    for row in rows {
        let e = &row.estimate;
        let exact = |r: &Option<treepattern::Rational>| {
            r.as_ref().map_or_else(|| "-".to_string(), |v| {
                format!("{:.6}", v.to_f64().unwrap_or(f64::NAN))
            })
        };
        writeln!(
            text,
            "{:>6} {:>9} {:>9} {:>9.5} [{:.5}, {:.5}] {:>10.5} {:>9.5} {:>12} {:>12}",
            e.n,
            e.samples,
            e.hits_ge1,
            e.p_hat,
            e.p_ci_low,
            e.p_ci_high,
            e.mean_hat,
            e.stderr_mean,
            exact(&row.exact_mean),
            exact(&row.cheb_bound)
        )
        .unwrap();
    }
    text
}

fn emit_rows(rows: &[ConvergenceRow], as_json: bool, as_csv: bool, out: Output) -> CliResult {
    if as_csv {
        let recs: Vec<_> = rows.iter().map(ConvergenceRow::csv_record).collect();
        return out.write(&csv_text(&recs));
    }
    if as_json {
        let recs: Vec<_> = rows
            .iter()
            .map(|r| {
                json!({
                    "estimate": r.estimate,
                    "stderr_p": r.estimate.stderr_p(),
                    "exact_mean": r.exact_mean.as_ref().map(ToString::to_string),
                    "cheb_bound": r.cheb_bound.as_ref().map(ToString::to_string),
                })
            })
            .collect();
        return out.json(&recs);
    }
    out.write(&rows_text(rows))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen { n, seed, out } => {
            if n == 0 {
                return Err(usage("--n must be positive"));
            }
            let tree = sample_tree(n, &mut SplitMix64::new(seed));
            Output::new(out.out).write(&tree.to_text())
        }
        Command::Encode { tree, out } => {
            let tree = read_tree(tree.as_deref())?;
            let code = prufer_encode(&tree).map_err(|e| CliError::Input(e.to_string()))?;
            Output::new(out.out).write(&code.to_text())
        }
        Command::Decode { input, out } => {
            let code = read_prufer(input.as_deref())?;
            Output::new(out.out).write(&prufer_decode(&code).to_text())
        }
        Command::Count { tree, pattern, json, out } => cmd_count(tree, &pattern, json, Output::new(out.out)),
        Command::Aut { tree, pattern, json, out } => cmd_aut(tree, pattern, json, Output::new(out.out)),
        Command::Center { tree, json, out } => {
            let tree = read_tree(Some(&tree))?;
            let centre = tree_center(&tree);
            let out = Output::new(out.out);
            if json {
                out.json(&center_json(centre))
            } else {
                out.write(&center_text(centre))
            }
        }
        Command::Rootify { tree, out } => {
            let tree = read_tree(Some(&tree))?;
            let rooted = rootify(&tree);
            let text = format!("{}root {}\n", rooted.tree().to_text(), rooted.root());
            Output::new(out.out).write(&text)
        }
        Command::Moments { pattern, n, json, out } => {
            let pat = resolve_pattern(&pattern)?;
            let report = MomentReport::compute(&pat, n).map_err(|e| usage(e.to_string()))?;
            let rec = report.record();
            let out = Output::new(out.out);
            if json {
                return out.json(&rec);
            }
            let opt = |v: &Option<String>| v.clone().unwrap_or_else(|| "undefined".into());
            out.write(&format!(
                "n {}\np {}\naut_root_order {}\nmean {} (~{:.6})\nsecond_moment {}\nvariance {}\ncheb_bound {}\nasymptotic_slope {:.7}\n",
                rec.n,
                rec.p,
                rec.aut_root_order,
                rec.mean,
                rec.mean_f64,
                opt(&rec.second_moment),
                opt(&rec.variance),
                opt(&rec.cheb_bound),
                rec.asymptotic_slope
            ))
        }
        Command::Verify { pattern, n_max, workers, json, out } => {
            cmd_verify(&pattern, n_max, workers, json, Output::new(out.out))
        }
        Command::Mc { pattern, n, samples, seed, workers, json, csv, out } => {
            let pat = resolve_pattern(&pattern)?;
            let estimate =
                estimate_pattern_stats(&pat, n, samples, seed, workers).map_err(|e| usage(e.to_string()))?;
            let row = ConvergenceRow {
                estimate,
                exact_mean: treepattern::moments::mean_pattern_count(&pat, n).ok(),
                cheb_bound: treepattern::moments::chebyshev_zero_bound(&pat, n).ok(),
            };
            emit_rows(&[row], json, csv, Output::new(out.out))
        }
        Command::Converge { pattern, n_list, samples, seed, workers, json, csv, out } => {
            let pat = resolve_pattern(&pattern)?;
            let rows = convergence_experiment(&pat, &n_list, samples, seed, workers)
                .map_err(|e| usage(e.to_string()))?;
            emit_rows(&rows, json, csv, Output::new(out.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Input(msg) => eprintln!("error: {msg}"),
                CliError::Verification => eprintln!("error: verification failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
