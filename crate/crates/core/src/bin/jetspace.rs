use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jetspace::cases::{self, CaseReport, CaseVerdict, Fixture};
use jetspace::groebner::{Budget, BUDGET_ENV};
use jetspace::jets;

#[derive(Parser)]
#[command(name = "jetspace", version, about = "Jet-scheme and wedge certificates for surface singularities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone)]
struct Common {
    #[arg(long)]
    fixture: PathBuf,
    /// Budget in term operations per Groebner computation.
    #[arg(long, env = BUDGET_ENV)]
    budget: Option<u64>,
    /// Write JSON output here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the family equations of one divisor.
    Jets {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        k: u32,
    },
    /// Valuative stage: residual pairs and the partial order.
    Valuative {
        #[command(flatten)]
        common: Common,
    },
    /// Run the case script of one pair.
    Wedge {
        #[command(flatten)]
        common: Common,
        /// J,I for the claim that N_J is not inside the closure of N_I.
        #[arg(long)]
        pair: String,
    },
    /// Jets, valuative stage and every wedge case.
    RunAll {
        #[command(flatten)]
        common: Common,
    },
    /// Recompute the saturations stored in a certificate.
    ValidateCert {
        cert: PathBuf,
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<u64>,
    },
}

fn budget(b: Option<u64>) -> Budget {
    b.map(Budget::steps).unwrap_or_default()
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> Result<(), String> {
    let s = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    std::fs::write(path, s + "\n").map_err(|e| format!("{}: {}", path.display(), e))
}

fn print_case(r: &CaseReport) {
    println!("pair {} ({} not in closure of {}): {:?}", r.pair, r.source, r.target, r.verdict);
    for b in &r.branches {
        let mark = if b.closed { "closed" } else { "open" };
        let exp = match b.matches_expectation {
            Some(true) => " [as expected]",
            Some(false) => " [differs from expectation]",
            None => "",
        };
        println!("  {:?} {} ({}): {} - {}{}", b.role, b.name, b.method, mark, b.summary, exp);
        if let Some(a) = &b.audit {
            println!("    audit: {} over {} configurations", if a.passed { "passed" } else { "FAILED" }, a.configurations);
            for f in &a.failures {
                println!("      {}", f);
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Jets { common, divisor, k } => {
            let fx = Fixture::load(&common.fixture).map_err(|e| e.to_string())?;
            let d = fx.divisor(&divisor).map_err(|e| e.to_string())?;
            let eq = fx.surface_equation().map_err(|e| e.to_string())?;
            let js = jets::expand_jet(&eq, k);
            let fam = jets::reduce_to_family(&js, d).map_err(|e| e.to_string())?;
            let digits = d.name.trim_start_matches('E');
            let mut rows = Vec::new();
            for (u, f) in &fam.reduced {
                println!("f_{},{} = {}", digits, u, f);
                rows.push((format!("f{}_{}", digits, u), f.to_string()));
            }
            if let Some(o) = &common.out {
                let v = serde_json::json!({"schema_version": cases::SCHEMA_VERSION, "divisor": d.name, "k": k, "o_i": fam.o_i, "equations": rows});
                write_json(o, &v)?;
            }
            Ok(0)
        }
        Cmd::Valuative { common } => {
            let fx = Fixture::load(&common.fixture).map_err(|e| e.to_string())?;
            let (rep, _) = cases::valuative_stage(&fx).map_err(|e| e.to_string())?;
            println!("residual pairs: {}", rep.residual_full.join(" "));
            println!("after symmetry: {}", rep.residual_reduced.join(" "));
            let po: Vec<String> = rep.partial_order.iter().map(|(a, b)| format!("{}<{}", a, b)).collect();
            println!("partial order: {}", po.join(" "));
            if let Some(m) = &rep.lipman_vector {
                println!("lipman vector: {:?}", m);
            }
            if let Some(o) = &common.out {
                write_json(o, &serde_json::json!({"schema_version": cases::SCHEMA_VERSION, "valuative": rep}))?;
            }
            Ok(0)
        }
        Cmd::Wedge { common, pair } => {
            let fx = Fixture::load(&common.fixture).map_err(|e| e.to_string())?;
            let case = fx.case(&pair).map_err(|e| e.to_string())?;
            let gb = budget(common.budget);
            let r = cases::run_cases(&fx, &[case], gb, common.jobs).map_err(|e| e.to_string())?.remove(0);
            print_case(&r);
            if let Some(o) = &common.out {
                write_json(o, &r)?;
            }
            Ok(if r.verdict == CaseVerdict::Certified { 0 } else { 2 })
        }
        Cmd::RunAll { common } => {
            let fx = Fixture::load(&common.fixture).map_err(|e| e.to_string())?;
            let gb = budget(common.budget);
            let r = cases::run_all(&fx, gb, common.jobs).map_err(|e| e.to_string())?;
            for j in &r.jets {
                println!("{}: o = {}, leading {} = {}", j.divisor, j.o_i, j.leading, j.factors.join(" * "));
            }
            println!("residual pairs after symmetry: {}", r.valuative.residual_reduced.join(" "));
            for c in &r.cases {
                print_case(c);
            }
            println!("{}", r.verdict);
            if !r.open_pairs.is_empty() {
                println!("open: {}", r.open_pairs.join(" "));
            }
            if let Some(o) = &common.out {
                write_json(o, &r)?;
            }
            Ok(if r.certified { 0 } else { 2 })
        }
        Cmd::ValidateCert { cert, budget: b } => {
            let text = std::fs::read_to_string(&cert).map_err(|e| format!("{}: {}", cert.display(), e))?;
            let rep: CaseReport = serde_json::from_str(&text).map_err(|e| format!("line {}, column {}: {}", e.line(), e.column(), e))?;
            let v = cases::validate_certificate(&rep, budget(b)).map_err(|e| e.to_string())?;
            for f in &v.failures {
                println!("invalid: {}", f);
            }
            println!("{} records rechecked; {}", v.records, if v.ok() { "all consistent" } else { "inconsistent" });
            if !v.ok() {
                return Ok(1);
            }
            Ok(if v.certified { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
