mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use schubert_core::audit::{check_invariants, run_audit};
use schubert_core::chains::{
    enumerate_chains, greedy_chain, grothendieck_via_chains, interpolating_marked, leaping_chain, nested_chain,
    schubert_via_chains, staircase_chain,
};
use schubert_core::polynomial::{grothendieck, schubert};
use schubert_core::statistics::{leads, orr, rajchgot_code, rajchgot_index};
use schubert_core::verify::{run_check, Check, CheckReport, SweepConfig};
use schubert_core::{ClimbingChain, EnumerationGuard, IntPolynomial, MarkedChain, Permutation, TermOrder};
use serde_json::json;

#[derive(Parser)]
#[command(name = "schubert", version, about = "Schubert and Grothendieck polynomials via climbing chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep S_n and check a leading-term or chain result for every permutation.
    Verify {
        /// Check name, or `all`.
        check: String,
        #[arg(long)]
        n: usize,
        /// Sample this many permutations when n! exceeds the exhaustive threshold.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 720)]
        threshold: usize,
        /// Write the JSON report(s) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a one-line CSV summary per check here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a Grothendieck or Schubert polynomial.
    Expand {
        perm: Permutation,
        #[arg(long, value_enum, default_value_t = Pipeline::Divdiff)]
        pipeline: Pipeline,
        /// asc, desc, asc-deglex or desc-deglex.
        #[arg(long, default_value = "asc-deglex")]
        order: TermOrder,
        #[arg(long, value_enum, default_value_t = Kind::Grothendieck)]
        kind: Kind,
        #[arg(long)]
        json: bool,
    },
    /// Print distinguished climbing chains with their markings and weights.
    Chains {
        perm: Permutation,
        /// greedy, nested, leaping, staircase, interp:k, all, or every (all climbing chains).
        #[arg(long, default_value = "all")]
        construction: String,
        #[arg(long)]
        json: bool,
    },
    /// Draw the Rothe diagram and list the code vectors.
    Diagram {
        perm: Permutation,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the Ψ/Ω audit on a climbing chain and print the trace as JSON.
    Audit {
        perm: Permutation,
        /// Links as `i,j;i,j;...`.
        #[arg(long)]
        chain: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pipeline {
    Chains,
    Divdiff,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Grothendieck,
    Schubert,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            check,
            n,
            sample,
            seed,
            threshold,
            out,
            csv,
        } => verify(&check, n, sample, seed, threshold, out, csv),
        Command::Expand {
            perm,
            pipeline,
            order,
            kind,
            json,
        } => {
            let guard = EnumerationGuard::from_env();
            let poly = match (pipeline, kind) {
                (Pipeline::Divdiff, Kind::Grothendieck) => grothendieck(&perm)?,
                (Pipeline::Divdiff, Kind::Schubert) => schubert(&perm)?,
                (Pipeline::Chains, Kind::Grothendieck) => grothendieck_via_chains(&perm, guard)?,
                (Pipeline::Chains, Kind::Schubert) => schubert_via_chains(&perm, guard)?,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&expansion_json(&perm, &poly, order)?)?);
            } else {
                println!("{}", poly.pretty(order));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Chains {
            perm,
            construction,
            json,
        } => {
            let marked = constructions(&perm, &construction)?;
            if json {
                let rows: Vec<_> = marked
                    .iter()
                    .map(|(name, mc)| {
                        json!({
                            "construction": name,
                            "links": mc.chain(),
                            "marked": mc.marked().iter().map(|p| p + 1).collect::<Vec<_>>(),
                            "weight": mc.weight(),
                            "dual_weight": mc.dual_weight(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                for (name, mc) in &marked {
                    println!("{name}: {mc}");
                    println!("  {}", mc.chain().arrow_notation());
                    println!("  weight {}  sign {}", mc.weight(), mc.sign());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Diagram { perm, svg } => {
            print!("{}", render::ascii(&perm));
            println!("length {}", perm.length());
            println!("c   {}", perm.lehmer_code());
            println!("orr {}", orr(&perm));
            println!("r   {}", rajchgot_code(&perm));
            println!("raj {}", rajchgot_index(&perm));
            if let Some(path) = svg {
                fs::write(&path, render::svg(&perm)).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit { perm, chain } => {
            let chain = ClimbingChain::parse(perm, &chain).map_err(anyhow::Error::msg)?;
            let trace = run_audit(&chain);
            println!("{}", serde_json::to_string_pretty(&trace)?);
            let violations = check_invariants(&trace);
            for v in &violations {
                eprintln!("violation: {v}");
            }
            Ok(if violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn verify(
    check: &str,
    n: usize,
    sample: Option<usize>,
    seed: u64,
    threshold: usize,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<ExitCode> {
    let checks: Vec<Check> = if check == "all" {
        Check::ALL.to_vec()
    } else {
        vec![check.parse().map_err(anyhow::Error::msg)?]
    };
    let config = SweepConfig {
        sample,
        seed,
        exhaustive_threshold: threshold,
        ..SweepConfig::exhaustive(n)
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for c in checks {
        let report = run_check(c, &config)?;
        println!("{}", report.summary());
        reports.push(report);
    }
    if let Some(path) = out {
        let text = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])?
        } else {
            serde_json::to_string_pretty(&reports)?
        };
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = csv {
        let mut text = String::new();
        if !path.exists() {
            text.push_str(CheckReport::CSV_HEADER);
            text.push('\n');
        }
        for r in &reports {
            text.push_str(&r.csv_row());
            text.push('\n');
        }
        use std::io::Write;
        fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if reports.iter().any(|r| r.conjecture_counterexample) {
        println!("NOTE: conjecture counterexample found; see the report");
    }
    Ok(if reports.iter().any(CheckReport::is_theorem_failure) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn expansion_json(w: &Permutation, poly: &IntPolynomial, order: TermOrder) -> Result<serde_json::Value> {
    Ok(json!({
        "permutation": w,
        "degree": poly.degree().ok(),
        "terms": poly.to_json_terms(order),
        "leads": leads(w),
    }))
}

fn constructions(w: &Permutation, which: &str) -> Result<Vec<(String, MarkedChain)>> {
    let named = |name: &str| -> Result<(String, MarkedChain)> {
        let mc = match name {
            "greedy" => MarkedChain::full(greedy_chain(w)),
            "nested" => MarkedChain::minimal(nested_chain(w)),
            "leaping" => MarkedChain::full(leaping_chain(w)),
            "staircase" => MarkedChain::minimal(staircase_chain(w)),
            other => match other.strip_prefix("interp:") {
                Some(k) => {
                    let k: usize = k.parse().with_context(|| format!("bad index in {other:?}"))?;
                    interpolating_marked(w, k)?
                }
                None => bail!("unknown construction {other:?}"),
            },
        };
        Ok((name.to_string(), mc))
    };
    match which {
        "all" => ["greedy", "nested", "leaping", "staircase"].into_iter().map(named).collect(),
        "every" => Ok(enumerate_chains(w, EnumerationGuard::from_env())?
            .into_iter()
            .enumerate()
            .map(|(k, c)| (format!("chain {}", k + 1), MarkedChain::minimal(c)))
            .collect()),
        other => Ok(vec![named(other)?]),
    }
}
