use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

use crossfold::arc_diagram::{
    build_gamma, count_crossings, cover_profile, gamma_cover_sum_formula, gamma_crossing_formula,
    validate_good, MAX_GAMMA_DIM, MAX_PAIRWISE_DIM,
};
use crossfold::bounds::{bound_report, BoundReport};
use crossfold::folded_upper::{fq_upper_count, fq_upper_formula, neighborhood_breakdown};
use crossfold::render::{d3_svg, gamma_svg, MAX_RENDER_DIM};
use crossfold::routing::{
    audit_from_census, claimed_global_bound, class_formula, congestion_census, EdgeClass,
};
use crossfold::verify::run_verify;

#[derive(Parser)]
#[command(name = "crossfold", version, about = "Exact crossing and congestion counts for hypercube drawings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the arc drawing Γ_n of Q_n and count its crossings and cover sums
    Gamma {
        /// Dimension, 1..=16 (1..=10 with --check-good)
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
        /// Also write an SVG rendering (n <= 8)
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Validate the good-drawing conditions
        #[arg(long)]
        check_good: bool,
    },
    /// Assemble the crossing count of the D_n drawing of FQ_n
    FqUpper {
        /// Dimension, 3..=19
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Edge congestion of canonical routing in FQ_n
    Congestion {
        /// Dimension, >= 2 (<= 12 with --census)
        #[arg(long)]
        n: u32,
        /// Route every ordered pair instead of using the closed forms
        #[arg(long)]
        census: bool,
        #[arg(long)]
        json: bool,
    },
    /// Every crossing bound for FQ_n and Q_n
    Bounds {
        /// Dimension, 2..=64
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Write an SVG of Γ_n or D_3
    #[command(group(ArgGroup::new("target").required(true).args(["gamma", "d3"])))]
    Render {
        /// Render Γ_N (N <= 8)
        #[arg(long, value_name = "N")]
        gamma: Option<u32>,
        /// Render the D_3 drawing of FQ_3
        #[arg(long)]
        d3: bool,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Run the verification suite
    Verify {
        /// Largest dimension, 3..=12
        #[arg(long, default_value_t = 8)]
        max_n: u32,
        #[arg(long)]
        json: bool,
    },
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_gamma(n: u32, json: bool, svg: Option<PathBuf>, check_good: bool) -> Result<()> {
    if check_good && n > MAX_PAIRWISE_DIM {
        bail!("--check-good supports n <= {MAX_PAIRWISE_DIM}, got {n}");
    }
    if n == 0 || n > MAX_GAMMA_DIM {
        bail!("n must be in 1..={MAX_GAMMA_DIM}, got {n}");
    }
    let d = build_gamma(n)?;
    let report = count_crossings(&d);
    let cover = cover_profile(&d);
    let f_cross = gamma_crossing_formula(n)?;
    let f_cover = gamma_cover_sum_formula(n)?;
    let matches = f_cross == report.total.into()
        && f_cover == cover.upper_sum.into()
        && f_cover == cover.lower_sum.into();
    let good = check_good.then(|| validate_good(&d, &report));

    if let Some(path) = &svg {
        write_file(path, &gamma_svg(n)?)?;
    }
    if json {
        let mut v = json!({
            "n": n,
            "edges": d.edges().len(),
            "segments": d.segments().len(),
            "crossings": report.total,
            "cover_sum_upper": cover.upper_sum,
            "cover_sum_lower": cover.lower_sum,
            "formula_crossings": f_cross.to_string(),
            "formula_cover_sum": f_cover.to_string(),
            "matches": matches,
        });
        if let Some(g) = &good {
            v["good"] = match g {
                Ok(()) => json!({ "ok": true, "violations": [] }),
                Err(vs) => json!({ "ok": false, "violations": vs }),
            };
        }
        print_json(&v)?;
    } else {
        println!("Gamma_{n}: {} edges, {} segments", d.edges().len(), d.segments().len());
        println!("crossings      = {} (closed form {f_cross})", report.total);
        println!(
            "cover sums     = ({}, {}) (closed form {f_cover})",
            cover.upper_sum, cover.lower_sum
        );
        println!("formulas match = {matches}");
        match &good {
            Some(Ok(())) => println!("good drawing   = yes"),
            Some(Err(vs)) => {
                println!("good drawing   = NO, {} violations", vs.len());
                for v in vs {
                    println!("  {v:?}");
                }
            }
            None => {}
        }
    }
    if !matches || matches!(good, Some(Err(_))) {
        std::process::exit(1);
    }
    Ok(())
}

fn cmd_fq_upper(n: u32, json: bool) -> Result<()> {
    let count = fq_upper_count(n)?;
    let formula = fq_upper_formula(n)?;
    let hood = if n >= 4 { Some(neighborhood_breakdown(n)?) } else { None };
    if json {
        print_json(&json!({
            "n": n,
            "assembled": count.to_string(),
            "formula": formula.to_string(),
            "matches": count == formula,
            "neighborhood": hood,
        }))?;
    } else {
        println!("D_{n}: assembled crossings = {count}, closed form = {formula}");
        if let Some(h) = hood {
            println!(
                "per neighborhood: red {} + blue {} + mixed {} = {}",
                h.nu_red, h.nu_blue, h.nu_mixed, h.total
            );
            let m = 1u64 << (n - 3);
            println!("total = 8 x {} + {m} x {m} x 4", h.total);
        }
    }
    Ok(())
}

fn cmd_congestion(n: u32, census: bool, json: bool) -> Result<()> {
    if census {
        let c = congestion_census(n)?;
        let audit = audit_from_census(&c);
        if json {
            print_json(&c.to_json())?;
        } else {
            println!("FQ_{n} census over {} ordered pairs", (1u64 << n) * ((1u64 << n) - 1));
            println!("{:>5} {:>8} {:>8} {:>8}", "dim", "min", "max", "edges");
            for s in &c.class_summary {
                println!("{:>5} {:>8} {:>8} {:>8}", s.dim, s.min, s.max, s.count);
            }
            println!("max congestion = {}", c.max_congestion);
            println!("sum of loads = {}, sum of path lengths = {}", c.total_load, c.total_path_length);
            print_audit(n, audit.holds, audit.max_measured.to_string(), audit.bound.to_string());
            if let Some(w) = audit.witness {
                println!("witness edge: {w}");
            }
        }
    } else {
        if n > 64 {
            bail!("closed-form congestion supports n <= 64, got {n}");
        }
        let dim0 = class_formula(n, EdgeClass::Dim0)?;
        let dimt = class_formula(n, EdgeClass::DimT)?;
        let max = dim0.clone().max(dimt.clone());
        let bound = claimed_global_bound(n)?;
        let holds = max <= bound;
        if json {
            print_json(&json!({
                "n": n,
                "classes": {
                    "0": { "cg": dim0.to_string(), "count": (1u128 << (n - 1)).to_string() },
                    "t": { "cg": dimt.to_string(), "count": (n as u128 * (1u128 << (n - 1))).to_string() },
                },
                "max": max.to_string(),
                "bound1": bound.to_string(),
                "bound1_holds": holds,
            }))?;
        } else {
            println!("FQ_{n} closed-form loads: dim 0 -> {dim0}, dim t>=1 -> {dimt}");
            print_audit(n, holds, max.to_string(), bound.to_string());
        }
    }
    Ok(())
}

fn print_audit(n: u32, holds: bool, measured: String, bound: String) {
    let verdict = match (holds, n % 2 == 1) {
        (true, _) => "holds",
        (false, true) => "violated (expected erratum for odd n)",
        (false, false) => "VIOLATED",
    };
    println!("inequality (1): max {measured} vs bound {bound}: {verdict}");
}

fn print_bounds(r: &BoundReport) {
    fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
        v.as_ref().map_or("-".to_string(), |x| x.to_string())
    }
    println!("n = {}", r.n);
    println!("upper bound cr(FQ_n)           = {}", opt(&r.upper_fq));
    if let Some(x) = r.small_case_exact {
        println!("exact cr(FQ_n)                 = {x}");
    }
    println!("closed-form lower bound        = {} (rounded down)", r.lower_fq_paper.to_digits());
    println!(
        "assembled lower bound (cg={})  = {}",
        r.congestion, r.lower_fq_assembled
    );
    println!("Q_n conjectured upper bound    = {}", opt(&r.qn_upper_conj));
    println!("Q_n lower bound                = {}", r.qn_lower_sv);
    let a1 = &r.audits.inequality_1;
    println!(
        "inequality (1): {} vs {} -> {}",
        a1.measured,
        a1.bound,
        if a1.holds { "holds" } else { "violated" }
    );
    let a2 = &r.audits.inequality_2;
    println!(
        "inequality (2): {} vs {:.6} -> {}",
        a2.lhs,
        a2.rhs,
        if a2.holds { "holds" } else { "violated" }
    );
}

fn cmd_render(gamma: Option<u32>, d3: bool, out: PathBuf) -> Result<()> {
    let svg = match (gamma, d3) {
        (Some(n), false) => {
            if n == 0 || n > MAX_RENDER_DIM {
                bail!("render supports Gamma_n for 1 <= n <= {MAX_RENDER_DIM}, got {n}");
            }
            gamma_svg(n)?
        }
        (None, true) => d3_svg()?,
        _ => bail!("choose exactly one of --gamma N or --d3"),
    };
    write_file(&out, &svg)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_verify(max_n: u32, json: bool) -> Result<i32> {
    let r = run_verify(max_n)?;
    if json {
        print_json(&serde_json::to_value(&r)?)?;
    } else {
        for c in &r.checks {
            println!("[{}] {} (n = {}): {}", c.status, c.name, c.n_range, c.details);
        }
        println!("exit code {}", r.exit_code);
    }
    Ok(r.exit_code)
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gamma { n, json, svg, check_good } => cmd_gamma(n, json, svg, check_good)?,
        Command::FqUpper { n, json } => cmd_fq_upper(n, json)?,
        Command::Congestion { n, census, json } => cmd_congestion(n, census, json)?,
        Command::Bounds { n, json } => {
            let r = bound_report(n)?;
            if json {
                print_json(&serde_json::to_value(&r)?)?;
            } else {
                print_bounds(&r);
            }
        }
        Command::Render { gamma, d3, out } => cmd_render(gamma, d3, out)?,
        Command::Verify { max_n, json } => {
            let code = cmd_verify(max_n, json)?;
            std::process::exit(code);
        }
    }
    Ok(())
}
