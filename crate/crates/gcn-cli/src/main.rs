//! Command-line front end: generate family instances, analyze and verify
//! them, query line usage, and export JSON/CSV reports and SVG figures.
//!
//! Exit codes: 0 success; 1 verification failure; 2 generation failure,
//! malformed input, or write failure; 3 invalid arguments; 4 input set not
//! correct for its degree; 5 queried line through fewer than two nodes.

// library errors carry exact geometric witnesses and are worth their size
#![allow(clippy::result_large_err)]

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use gcn::usage::{used_line_catalog, used_nodes_pipeline};
use gcn::{
    carnicer_gasca, chung_yao, defect_three, defect_two, principal_lattice, run_checks, AffineMap,
    Context, Error, GeomLine as Line, Instance, Rat,
};

#[derive(Parser)]
#[command(
    name = "gcn",
    about = "Construct and analyze GC interpolation node sets exactly",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a family instance and write it as JSON with provenance.
    Generate {
        /// chung-yao | carnicer-gasca | defect-2 | defect-3 | principal
        #[arg(long)]
        family: String,
        #[arg(long)]
        degree: usize,
        /// Defaults to the GCN_SEED environment variable, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Affine map for the principal family: six rationals
        /// m00,m01,m10,m11,t0,t1.
        #[arg(long)]
        transform: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze a node-set file: maximal lines, defect, node classes, used
    /// lines, and the usage census.
    Analyze {
        input: PathBuf,
        /// Report JSON destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-line usage table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Usage report for one line: users, classification, reduction trace.
    Usage {
        input: PathBuf,
        /// Line coefficients a,b,c.
        #[arg(long, conflicts_with = "through")]
        line: Option<String>,
        /// Two points x1,y1,x2,y2 spanning the line.
        #[arg(long)]
        through: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the structural checkers and write the report bundle.
    Verify {
        input: PathBuf,
        /// "all" or a comma-separated list of check ids.
        #[arg(long, default_value = "all")]
        theorems: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the configuration as a deterministic SVG figure.
    Export {
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load_instance(path: &Path) -> Result<Instance, String> {
    let data = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&data).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, data: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, data).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{data}");
            Ok(())
        }
    }
}

fn parse_transform(raw: &str) -> Result<AffineMap, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 6 {
        return Err("transform needs six comma-separated rationals".into());
    }
    let mut vals = Vec::with_capacity(6);
    for p in parts {
        vals.push(Rat::from_str(p.trim()).map_err(|e| format!("bad transform entry: {e}"))?);
    }
    Ok(AffineMap {
        linear: [
            [vals[0].clone(), vals[1].clone()],
            [vals[2].clone(), vals[3].clone()],
        ],
        translation: [vals[4].clone(), vals[5].clone()],
    })
}

fn parse_line_arg(raw: &str) -> Result<Line, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 3 {
        return Err("--line needs three comma-separated integers a,b,c".into());
    }
    let nums: Result<Vec<i64>, _> = parts.iter().map(|p| p.trim().parse::<i64>()).collect();
    let nums = nums.map_err(|e| format!("bad line coefficient: {e}"))?;
    Line::from_ints(nums[0], nums[1], nums[2]).map_err(|e| e.to_string())
}

fn parse_through_arg(raw: &str) -> Result<Line, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 4 {
        return Err("--through needs four comma-separated rationals x1,y1,x2,y2".into());
    }
    let mut vals = Vec::with_capacity(4);
    for p in parts {
        vals.push(Rat::from_str(p.trim()).map_err(|e| format!("bad coordinate: {e}"))?);
    }
    let p = gcn::GeomPoint::new(vals[0].clone(), vals[1].clone());
    let q = gcn::GeomPoint::new(vals[2].clone(), vals[3].clone());
    gcn::line_through(&p, &q).map_err(|e| e.to_string())
}

fn cmd_generate(
    family: &str,
    degree: usize,
    seed: Option<u64>,
    transform: Option<&str>,
    out: &Path,
) -> ExitCode {
    let seed = seed.unwrap_or_else(|| {
        std::env::var("GCN_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    });
    let built = match family {
        "chung-yao" => chung_yao(degree, seed),
        "carnicer-gasca" => carnicer_gasca(degree, seed),
        "defect-2" => defect_two(degree, seed),
        "defect-3" => defect_three(degree, seed),
        "principal" => match transform.map(parse_transform).transpose() {
            Ok(t) => principal_lattice(degree, t),
            Err(e) => return fail(3, e),
        },
        other => return fail(3, format!("unknown family '{other}'")),
    };
    let instance = match built {
        Ok(i) => i,
        Err(e @ Error::DegreeOutOfRange { .. }) => return fail(3, e),
        Err(e) => return fail(2, e),
    };
    let mut ctx = match instance.context() {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let (m, defect) = match ctx.analyze() {
        Ok(r) => (r.maximal_lines.len(), r.defect),
        Err(e) => return fail(2, e),
    };
    let json = serde_json::to_string_pretty(&instance).expect("instances serialize");
    if let Err(e) = fs::write(out, json) {
        return fail(2, format!("{}: {e}", out.display()));
    }
    println!(
        "{family} n={degree} seed={seed}: N={} #M={m} defect={defect} -> {}",
        instance.set.len(),
        out.display()
    );
    ExitCode::SUCCESS
}

fn usage_reports_csv(ctx: &mut Context) -> Result<String, Error> {
    let lines: Vec<Line> = ctx.catalog().iter().map(|e| e.line.clone()).collect();
    let mut out = String::from("a,b,c,class,k,r,r_hat,s,users\n");
    for l in &lines {
        let rep = used_nodes_pipeline(ctx, l)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            l.a(),
            l.b(),
            l.c(),
            rep.classification.variant,
            rep.k,
            rep.r,
            rep.r_hat,
            rep.s,
            rep.users.len()
        ));
    }
    Ok(out)
}

fn cmd_analyze(input: &Path, out: Option<&Path>, csv: Option<&Path>) -> ExitCode {
    let instance = match load_instance(input) {
        Ok(i) => i,
        Err(e) => return fail(2, e),
    };
    let mut ctx = match instance.context() {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    match ctx.n_correct() {
        Ok(true) => {}
        // a line with more than degree+1 nodes also proves incorrectness
        Ok(false) | Err(Error::TooManyCollinear { .. }) => {
            return fail(4, "node set is not correct for its degree")
        }
        Err(e) => return fail(2, e),
    }
    let report = match ctx.analyze() {
        Ok(r) => r,
        Err(e) => return fail(2, e),
    };
    let (catalog, census) = if report.is_gc {
        let catalog = match used_line_catalog(&mut ctx) {
            Ok(c) => c,
            Err(e) => return fail(2, e),
        };
        let census = match gcn::usage_census(&mut ctx) {
            Ok(c) => c,
            Err(e) => return fail(2, e),
        };
        (Some(catalog), Some(census))
    } else {
        (None, None)
    };
    let doc = serde_json::json!({
        "analysis": report,
        "used_lines": catalog,
        "census": census,
    });
    let body = serde_json::to_string_pretty(&doc).expect("reports serialize");
    if let Err(e) = write_output(out, &body) {
        return fail(2, e);
    }
    if let Some(csv_path) = csv {
        if !report.is_gc {
            return fail(2, "cannot write a usage CSV: the set is not GC");
        }
        let table = match usage_reports_csv(&mut ctx) {
            Ok(t) => t,
            Err(e) => return fail(2, e),
        };
        if let Err(e) = fs::write(csv_path, table) {
            return fail(2, format!("{}: {e}", csv_path.display()));
        }
    }
    let total = census.as_ref().map(|c| c.total).unwrap_or(0);
    eprintln!(
        "n={} N={} #M={} defect={} n_correct={} is_gc={} usages={}",
        instance.set.degree(),
        instance.set.len(),
        report.maximal_lines.len(),
        report.defect,
        report.n_correct,
        report.is_gc,
        total,
    );
    ExitCode::SUCCESS
}

fn cmd_usage(
    input: &Path,
    line: Option<&str>,
    through: Option<&str>,
    out: Option<&Path>,
) -> ExitCode {
    let parsed = match (line, through) {
        (Some(raw), None) => parse_line_arg(raw),
        (None, Some(raw)) => parse_through_arg(raw),
        _ => return fail(3, "exactly one of --line or --through is required"),
    };
    let l = match parsed {
        Ok(l) => l,
        Err(e) => return fail(3, e),
    };
    let instance = match load_instance(input) {
        Ok(i) => i,
        Err(e) => return fail(2, e),
    };
    let mut ctx = match instance.context() {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let report = match used_nodes_pipeline(&mut ctx, &l) {
        Ok(r) => r,
        Err(e @ Error::TooFewNodes { .. }) => return fail(5, e),
        Err(e) => return fail(2, e),
    };
    let body = serde_json::to_string_pretty(&report).expect("reports serialize");
    if let Err(e) = write_output(out, &body) {
        return fail(2, e);
    }
    eprintln!(
        "line {} k={} class={} users={} oracle_agrees={}",
        l,
        report.k,
        report.classification.variant,
        report.users.len(),
        report.oracle_agrees
    );
    ExitCode::SUCCESS
}

fn cmd_verify(input: &Path, theorems: &str, out: Option<&Path>) -> ExitCode {
    let instance = match load_instance(input) {
        Ok(i) => i,
        Err(e) => return fail(2, e),
    };
    let mut ctx = match instance.context() {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let selection: Option<Vec<String>> = if theorems == "all" {
        None
    } else {
        Some(theorems.split(',').map(|s| s.trim().to_string()).collect())
    };
    let bundle = match run_checks(&mut ctx, selection.as_deref()) {
        Ok(b) => b,
        Err(e @ Error::UnknownCheck { .. }) => return fail(3, e),
        Err(e) => return fail(2, e),
    };
    let body = serde_json::to_string_pretty(&bundle).expect("reports serialize");
    if let Err(e) = write_output(out, &body) {
        return fail(2, e);
    }
    for r in &bundle.reports {
        eprintln!(
            "{}: {} ({} cases, {} violations)",
            r.theorem_id,
            match r.status {
                gcn::CheckStatus::Pass => "pass",
                gcn::CheckStatus::Fail => "FAIL",
                gcn::CheckStatus::Skipped => "skipped",
            },
            r.cases,
            r.violations
        );
    }
    if bundle.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_export(input: &Path, svg_path: &Path) -> ExitCode {
    let instance = match load_instance(input) {
        Ok(i) => i,
        Err(e) => return fail(2, e),
    };
    let mut ctx = match instance.context() {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let body = match svg::render(&mut ctx) {
        Ok(b) => b,
        Err(e) => return fail(2, e),
    };
    if let Err(e) = fs::write(svg_path, body) {
        return fail(2, format!("{}: {e}", svg_path.display()));
    }
    println!("wrote {}", svg_path.display());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not argument errors
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(3);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match cli.cmd {
        Cmd::Generate {
            family,
            degree,
            seed,
            transform,
            out,
        } => cmd_generate(&family, degree, seed, transform.as_deref(), &out),
        Cmd::Analyze { input, out, csv } => cmd_analyze(&input, out.as_deref(), csv.as_deref()),
        Cmd::Usage {
            input,
            line,
            through,
            out,
        } => cmd_usage(&input, line.as_deref(), through.as_deref(), out.as_deref()),
        Cmd::Verify {
            input,
            theorems,
            out,
        } => cmd_verify(&input, &theorems, out.as_deref()),
        Cmd::Export { input, svg } => cmd_export(&input, &svg),
    }
}
