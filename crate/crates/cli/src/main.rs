//! `looptree`: sampling, experiments and layouts for stable looptrees.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stable_looptrees::dissection::{sample_boltzmann, Dissection};
use stable_looptrees::excursion_metric::JumpPath;
use stable_looptrees::experiments::{Experiment, ExperimentConfig};
use stable_looptrees::gw_tree::{stable_offspring, ConditionedSampler, OffspringLaw, PlaneTree, Variant};
use stable_looptrees::header::{strip_comments, Header};
use stable_looptrees::looptree::{build_loop, build_loop_prime, layout_svg, LoopKind, LoopPrimeMetric};
use stable_looptrees::metric_analysis::FiniteMetric;
use stable_looptrees::rng::stream;

/// Largest looptree for which `--format csv` writes all pairwise distances.
const MAX_DISTANCE_VERTICES: usize = 4000;

#[derive(Parser, Debug)]
#[command(name = "looptree", version, about = "Random stable looptrees: samplers, metrics and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw one random object and write it to --out-dir.
    Sample {
        kind: SampleKind,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Which discrete looptree to build.
        #[arg(long = "loop", value_enum, default_value = "loop-prime")]
        kind_of_loop: LoopChoice,
        /// Write distances as `i,j,d` triplets instead of a matrix.
        #[arg(long)]
        triplets: bool,
    },
    /// Run a Monte-Carlo experiment; exits non-zero unless every check passes.
    Experiment {
        name: ExperimentName,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        replicates: Option<usize>,
        /// Radius window `lo,hi` for the dimension fit.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Draw a tree, looptree or dissection JSON file as SVG.
    Layout {
        input: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Stability index in (1, 2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of vertices (leaves for dissections).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Offspring law `∝ k^{-1-α}` restricted to `k = 0` and `k ≥ k_min`.
    #[arg(long)]
    k_min: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleKind {
    Tree,
    Looptree,
    Dissection,
    Path,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Edgelist,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LoopChoice {
    Loop,
    LoopPrime,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentName {
    Dimension,
    InterpolationCircle,
    InterpolationCrt,
    MaxJump,
    GhSandwich,
    LaplaceCheck,
}

impl From<ExperimentName> for Experiment {
    fn from(e: ExperimentName) -> Self {
        match e {
            ExperimentName::Dimension => Experiment::Dimension,
            ExperimentName::InterpolationCircle => Experiment::InterpolationCircle,
            ExperimentName::InterpolationCrt => Experiment::InterpolationCrt,
            ExperimentName::MaxJump => Experiment::MaxJump,
            ExperimentName::GhSandwich => Experiment::GhSandwich,
            ExperimentName::LaplaceCheck => Experiment::LaplaceCheck,
        }
    }
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower radius: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper radius: {e}"))?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("LOOPTREE_THREADS") else { return Ok(()) };
    let threads: usize = raw.trim().parse().with_context(|| format!("LOOPTREE_THREADS={raw:?} is not a count"))?;
    if threads == 0 {
        bail!("LOOPTREE_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sample { kind, common, format, kind_of_loop, triplets } => {
            sample(kind, &common, format, kind_of_loop, triplets)?;
            Ok(true)
        }
        Command::Experiment { name, common, replicates, window, tolerance } => {
            let exp: Experiment = name.into();
            let defaults = exp.defaults();
            let config = ExperimentConfig {
                alpha: common.alpha.unwrap_or(defaults.alpha),
                n: common.n.unwrap_or(defaults.n),
                replicates: replicates.unwrap_or(defaults.replicates),
                seed: common.seed,
                window: window.or(defaults.window),
                tolerance: tolerance.unwrap_or(defaults.tolerance),
                k_min: common.k_min.or(defaults.k_min),
            };
            experiment(exp, &config, &common.out_dir)
        }
        Command::Layout { input, out_dir } => {
            layout(&input, &out_dir)?;
            Ok(true)
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_json(dir: &Path, name: &str, header: &Header, body: Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&header.wrap_json(body))?;
    text.push('\n');
    write(dir, name, &text)
}

fn law(alpha: f64, k_min: Option<u64>, variant: Variant) -> Result<OffspringLaw> {
    Ok(match k_min {
        Some(k) => OffspringLaw::power_law(alpha, k)?,
        None => stable_offspring(alpha, variant)?,
    })
}

fn sample(kind: SampleKind, common: &Common, format: Option<Format>, choice: LoopChoice, triplets: bool) -> Result<()> {
    let alpha = common.alpha.unwrap_or(1.5);
    let n = common.n.unwrap_or(1000);
    let dir = &common.out_dir;
    let name = match kind {
        SampleKind::Tree => "tree",
        SampleKind::Looptree => "looptree",
        SampleKind::Dissection => "dissection",
        SampleKind::Path => "path",
    };
    let config = json!({
        "kind": name,
        "alpha": alpha,
        "n": n,
        "k_min": common.k_min,
        "format": format.map(|f| format!("{f:?}").to_lowercase()),
        "loop": format!("{choice:?}"),
        "triplets": triplets,
    });
    let header = Header::new(format!("sample {name}"), common.seed, config);
    let mut rng = stream(common.seed, 0);
    let unsupported = |f: Format| anyhow::anyhow!("sample {name} does not support --format {f:?}");

    if let SampleKind::Dissection = kind {
        let law = law(alpha, common.k_min.map(|k| k.max(2)), Variant::NoUnary)?;
        let d = sample_boltzmann(&law, n, &mut rng).context("sampling the dissection")?;
        let format = format.map_or(vec![Format::Json, Format::Svg], |f| vec![f]);
        for f in format {
            match f {
                Format::Json => write_json(dir, "dissection.json", &header, d.to_json())?,
                Format::Svg => write(dir, "dissection.svg", &(header.svg_comment() + &d.to_svg()))?,
                Format::Edgelist => write(dir, "dissection.edges", &(header.comment_block() + &edge_lines(&d.edges())))?,
                f => return Err(unsupported(f)),
            }
        }
        return Ok(());
    }

    let law = law(alpha, common.k_min, Variant::Generic)?;
    let sampler = ConditionedSampler::new(&law, n)?;
    let tree = sampler.sample(&mut rng).context("sampling the conditioned tree")?;
    match kind {
        SampleKind::Tree => match format.unwrap_or(Format::Json) {
            Format::Json => write_json(dir, "tree.json", &header, json!({ "children_counts": tree.children_counts() })),
            Format::Edgelist => {
                let edges: Vec<(usize, usize)> =
                    tree.parents().iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v))).collect();
                write(dir, "tree.edges", &(header.comment_block() + &edge_lines(&edges)))
            }
            Format::Svg => write(dir, "tree.svg", &(header.svg_comment() + &layout_svg(&tree))),
            f => Err(unsupported(f)),
        },
        SampleKind::Path => {
            let path = tree.encode();
            match format.unwrap_or(Format::Json) {
                Format::Json => write_json(dir, "path.json", &header, json!({ "steps": path.steps() })),
                Format::Csv => {
                    let jp = JumpPath::new(&path, law.scaling(n as f64))?;
                    let mut buf = Vec::new();
                    jp.write_csv(&mut buf)?;
                    write(dir, "path.csv", &(header.comment_block() + &String::from_utf8(buf)?))
                }
                f => Err(unsupported(f)),
            }
        }
        SampleKind::Looptree => {
            let graph = match choice {
                LoopChoice::Loop => build_loop(&tree),
                LoopChoice::LoopPrime => build_loop_prime(&tree),
            };
            let mut origin = graph.origin_json();
            origin["children_counts"] = json!(tree.children_counts());
            match format.unwrap_or(Format::Edgelist) {
                Format::Edgelist => {
                    let mut buf = Vec::new();
                    graph.write_edge_list(&mut buf)?;
                    write(dir, "looptree.edges", &(header.comment_block() + &String::from_utf8(buf)?))?;
                    write_json(dir, "looptree.origin.json", &header, origin)
                }
                Format::Json => {
                    origin["edges"] = json!(graph.edges());
                    write_json(dir, "looptree.json", &header, origin)
                }
                Format::Svg => write(dir, "looptree.svg", &(header.svg_comment() + &layout_svg(&tree))),
                Format::Csv => {
                    let size = graph.vertex_count();
                    if size > MAX_DISTANCE_VERTICES {
                        bail!("distance output is limited to {MAX_DISTANCE_VERTICES} vertices, the looptree has {size}");
                    }
                    let metric = match (graph.kind(), size) {
                        // Loop' distances come from the coding path; Loop
                        // distances from breadth-first search.
                        (LoopKind::LoopPrime, _) => FiniteMetric::of(&LoopPrimeMetric::new(&tree.encode())),
                        (LoopKind::Loop, 0) => FiniteMetric::new(0, Vec::new())?,
                        (LoopKind::Loop, _) => stable_looptrees::metric_analysis::graph_metric(graph.graph())?,
                    };
                    let mut buf = Vec::new();
                    if triplets {
                        metric.write_triplets_csv(&mut buf)?;
                    } else {
                        metric.write_matrix_csv(&mut buf)?;
                    }
                    write(dir, "looptree.distances.csv", &(header.comment_block() + &String::from_utf8(buf)?))
                }
            }
        }
        SampleKind::Dissection => unreachable!(),
    }
}

fn edge_lines(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

fn experiment(exp: Experiment, config: &ExperimentConfig, dir: &Path) -> Result<bool> {
    let report = exp.run(config).with_context(|| format!("experiment {}", exp.name()))?;
    let header = Header::new(format!("experiment {}", exp.name()), config.seed, serde_json::to_value(config)?);
    write_json(dir, &format!("{}.report.json", exp.name()), &header, serde_json::to_value(&report)?)?;
    for series in &report.series {
        write(dir, &format!("{}.{}.csv", exp.name(), series.name), &(header.comment_block() + &series.to_csv()))?;
    }
    for check in &report.checks {
        println!(
            "{} {}: {} = {:.6} (target {}, tolerance {}, rule {})",
            if check.pass { "PASS" } else { "FAIL" },
            exp.name(),
            check.name,
            check.statistic,
            check.target,
            check.tolerance,
            check.rule
        );
    }
    Ok(report.pass)
}

fn layout(input: &Path, dir: &Path) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let value: Value = serde_json::from_str(&strip_comments(&text))
        .with_context(|| format!("{} is not JSON", input.display()))?;
    let seed = value.pointer("/header/seed").and_then(Value::as_u64).unwrap_or(0);
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("layout");
    let header = Header::new("layout", seed, json!({ "input": input.display().to_string() }));
    let svg = if value.get("n_sides").is_some() {
        let d: Dissection = serde_json::from_value(json!({ "n_sides": value["n_sides"], "chords": value["chords"] }))
            .with_context(|| format!("{} is not a valid dissection", input.display()))?;
        d.to_svg()
    } else if let Some(counts) = value.get("children_counts") {
        let counts: Vec<usize> = serde_json::from_value(counts.clone())
            .with_context(|| format!("{}: children_counts must be a list of counts", input.display()))?;
        layout_svg(&PlaneTree::new(counts).with_context(|| format!("{} is not a valid tree", input.display()))?)
    } else {
        bail!("{} has neither children_counts nor n_sides", input.display());
    };
    write(dir, &format!("{stem}.svg"), &(header.svg_comment() + &svg))
}
