use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use stratglue::arith::{format_q, parse_q, GaussianRational};
use stratglue::dm_strata::{dm_report, AtlasCache};
use stratglue::gluing_engine::{run, ModelJson, SampleSpec};
use stratglue::linear_strata::{validate_json, StratificationJson};
use stratglue::plumbing::{plumb, Fixture};
use stratglue::stable_graphs::{build_poset, enumerate_stable_graphs, GraphJson};

/// Overrides the number of grid values per axis used by atlas checks.
const GRID_ENV: &str = "STRATGLUE_GRID";

#[derive(Parser)]
#[command(name = "stratglue", version, about = "Stable graphs, linear stratifications and gluing atlases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stable dual graphs of type (g, n)
    #[command(subcommand)]
    Graphs(GraphsCommand),
    /// Linear stratifications
    #[command(subcommand)]
    Strata(StrataCommand),
    /// Gluing atlases on coordinate models
    #[command(subcommand)]
    Glue(GlueCommand),
    /// Evaluate the plumbing map w = t / z
    Plumb(PlumbArgs),
    /// Boundary strata of the moduli of curves
    #[command(subcommand)]
    Dm(DmCommand),
}

#[derive(Subcommand)]
enum GraphsCommand {
    /// List the isomorphism classes
    Enumerate {
        g: u32,
        n: u32,
        #[arg(long, conflicts_with = "count")]
        json: bool,
        /// Print only the number of classes
        #[arg(long)]
        count: bool,
    },
    /// The contraction poset
    Poset {
        g: u32,
        n: u32,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum StrataCommand {
    /// Check a stratification file and print the report
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
enum GlueCommand {
    /// Build the atlas of a model and check it
    Run {
        model: PathBuf,
        /// Write the full JSON report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PlumbArgs {
    /// Gluing parameter as re,im
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long)]
    delta: String,
    /// Point as re,im
    #[arg(long, allow_hyphen_values = true)]
    z: String,
}

#[derive(Subcommand)]
enum DmCommand {
    /// Run every check on every class of type (g, n), as JSON
    Report { g: u32, n: u32 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            // library errors are validation failures; the rest is bad input
            if e.downcast_ref::<stratglue::Error>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Graphs(GraphsCommand::Enumerate { g, n, json, count }) => enumerate(g, n, json, count),
        Command::Graphs(GraphsCommand::Poset { g, n, dot, json }) => poset(g, n, dot, json),
        Command::Strata(StrataCommand::Validate { file }) => validate_file(&file),
        Command::Glue(GlueCommand::Run { model, report }) => glue(&model, report.as_deref()),
        Command::Plumb(args) => plumbing(&args),
        Command::Dm(DmCommand::Report { g, n }) => dm(g, n),
    }
}

fn grid_override() -> Result<Option<SampleSpec>> {
    match std::env::var(GRID_ENV) {
        Ok(v) => {
            let per_axis: usize = v.trim().parse().with_context(|| format!("{GRID_ENV}={v} is not a count"))?;
            Ok(Some(SampleSpec::Full { per_axis }))
        }
        Err(_) => Ok(None),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn enumerate(g: u32, n: u32, json: bool, count: bool) -> Result<bool> {
    let classes = enumerate_stable_graphs(g, n)?;
    if count {
        println!("{}", classes.len());
    } else if json {
        let graphs: Vec<GraphJson> = classes.iter().map(|c| c.representative().to_json()).collect();
        println!("{}", serde_json::to_string_pretty(&graphs)?);
    } else {
        for (i, c) in classes.iter().enumerate() {
            let rep = c.representative();
            println!("{i}\tdim {}\t{rep}", rep.dimension()?);
        }
    }
    Ok(true)
}

fn poset(g: u32, n: u32, dot: bool, json: bool) -> Result<bool> {
    let p = build_poset(g, n)?;
    if dot {
        print!("{}", p.to_dot());
    } else if json {
        println!("{}", serde_json::to_string_pretty(&p.to_json())?);
    } else {
        println!("({g},{n}): {} classes", p.len());
        for (i, c) in p.elements().iter().enumerate() {
            println!("{i}\tdim {}\t{}", p.dimension(i), c.representative());
        }
        for (k, layer) in p.layers().iter().enumerate() {
            let ids: Vec<String> = layer.iter().map(|i| i.to_string()).collect();
            println!("layer {}: {}", k + 1, ids.join(" "));
        }
        for (lo, hi) in p.covers() {
            println!("{lo} < {hi}");
        }
    }
    Ok(true)
}

fn validate_file(path: &Path) -> Result<bool> {
    let json: StratificationJson =
        serde_json::from_str(&read(path)?).with_context(|| format!("{} is not a stratification", path.display()))?;
    let report = validate_json(&json);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report.valid)
}

fn glue(path: &Path, out: Option<&Path>) -> Result<bool> {
    let input: ModelJson =
        serde_json::from_str(&read(path)?).with_context(|| format!("{} is not a model", path.display()))?;
    let model = input.model()?;
    let spec = match grid_override()? {
        Some(spec) => spec,
        None => input.samples.clone().unwrap_or_else(|| SampleSpec::default_for(&model)),
    };
    let report = run(&model, &spec)?;
    let yes = |b: bool| if b { "yes" } else { "no" };
    println!("m {}, {} strata, {} passes, {} samples", report.m, report.strata, report.passes, report.samples);
    for d in &report.data {
        println!(
            "stratum {}\teps {}\tboxes {}\tmetric {}\tchart {}",
            d.stratum, d.epsilon, d.boxes, d.metric, d.chart
        );
    }
    println!("compatible: {}", yes(report.compatible));
    for p in &report.incompatible {
        println!("  {:?}: {}", p.pair, p.reason.as_deref().unwrap_or(""));
    }
    println!("separated: {}", yes(report.separated));
    println!("covered: {}", yes(report.cover.ok));
    if let Some(w) = &report.cover.witness {
        println!("  uncovered point ({})", w.join(", "));
    }
    println!("{}", if report.ok { "ok" } else { "FAILED" });
    if let Some(out) = out {
        fs::write(out, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("cannot write {}", out.display()))?;
    }
    Ok(report.ok)
}

fn plumbing(args: &PlumbArgs) -> Result<bool> {
    let t = GaussianRational::parse(&args.t)?;
    let delta = parse_q(&args.delta)?;
    let z = GaussianRational::parse(&args.z)?;
    let fixture = Fixture::new(t, delta)?;
    let d2 = &fixture.delta * &fixture.delta;
    let radii = format!(
        "(|t|/delta)^2 = {}, |z|^2 = {}, delta^2 = {}",
        format_q(&fixture.inner_radius_sqr()),
        format_q(&z.norm_sqr()),
        format_q(&d2)
    );
    match plumb(&z, &fixture) {
        Ok(w) => {
            println!("w = {w}");
            println!("annulus: inside ({radii})");
            Ok(true)
        }
        Err(_) => {
            println!("annulus: outside ({radii})");
            Ok(false)
        }
    }
}

fn dm(g: u32, n: u32) -> Result<bool> {
    let mut cache = AtlasCache::new(grid_override()?);
    let report = dm_report(g, n, &mut cache)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report.ok)
}
