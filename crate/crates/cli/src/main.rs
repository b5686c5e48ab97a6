//! `periodica` command-line tool.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use periodica::format::Document;
use periodica::projection::{project, tridiagram_from_net, DEFAULT_EPS, DEFAULT_TRIES};
use periodica::render::{render_svg, render_tridiagram_svg, RenderStyle};
use periodica::search::{
    crossing_bound, untangle_bfs, untangle_fixed_shadow, untangle_tridiagram, Search,
    TridiagramUntangling,
};
use periodica::tridiagram::check_tridiagram;
use periodica::{
    canonical_code, load_net, parse, serialize, serialize_tridiagram, validate_diagram, Axis,
    CrossingTriplet, SimplifyBudget, SquareDiagram, Tridiagram, UntanglingResult,
};
use serde::Serialize;
use serde_json::{json, Value};

mod table;

#[derive(Parser)]
#[command(
    name = "periodica",
    version,
    about = "Diagrams and untangling numbers of 3-periodic tangled networks"
)]
struct Cli {
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a pdg document against the diagram rules.
    Validate { path: PathBuf },
    /// Project a net onto its tridiagram (or one diagram with --axis).
    Project {
        net: PathBuf,
        #[arg(long, env = "PERIODICA_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_axis)]
        axis: Option<Axis>,
        /// Simplify each diagram after projecting.
        #[arg(long)]
        simplify: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simplify every diagram of a pdg document.
    Simplify {
        path: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bound the untangling number of a diagram or tridiagram.
    Untangle {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Bfs)]
        method: Method,
        #[arg(long, default_value_t = 2)]
        max_changes: usize,
        /// Only this diagram of a tridiagram.
        #[arg(long, value_parser = parse_axis)]
        axis: Option<Axis>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Draw a pdg document as SVG.
    Render {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write one SVG per diagram into this directory.
        #[arg(long, conflicts_with = "output")]
        split: Option<PathBuf>,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Crossing bounds (and optionally untangling bounds) for many inputs.
    Batch {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, env = "PERIODICA_SEED", default_value_t = 0)]
        seed: u64,
        /// Also run the layered untangling search with this many changes.
        #[arg(long)]
        untangle: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fixed,
    Bfs,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    max_states: Option<usize>,
    #[arg(long)]
    max_extra_crossings: Option<usize>,
    #[arg(long)]
    max_extra_markers: Option<usize>,
    #[arg(long)]
    max_extra_punctures: Option<usize>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> SimplifyBudget {
        let d = SimplifyBudget::default();
        SimplifyBudget {
            max_states: self.max_states.unwrap_or(d.max_states),
            max_extra_crossings: self.max_extra_crossings.unwrap_or(d.max_extra_crossings),
            max_extra_markers: self.max_extra_markers.unwrap_or(d.max_extra_markers),
            max_extra_punctures: self.max_extra_punctures.unwrap_or(d.max_extra_punctures),
            time_limit: self.time_limit,
            ceiling: None,
        }
    }
}

#[derive(Args)]
struct StyleArgs {
    #[arg(long)]
    size: Option<f64>,
    #[arg(long)]
    stroke: Option<f64>,
    #[arg(long)]
    gap: Option<f64>,
    #[arg(long)]
    dot_radius: Option<f64>,
    #[arg(long)]
    circle_radius: Option<f64>,
}

impl StyleArgs {
    fn style(&self) -> Result<RenderStyle> {
        let d = RenderStyle::default();
        let s = RenderStyle {
            size: self.size.unwrap_or(d.size),
            stroke: self.stroke.unwrap_or(d.stroke),
            gap: self.gap.unwrap_or(d.gap),
            dot_radius: self.dot_radius.unwrap_or(d.dot_radius),
            circle_radius: self.circle_radius.unwrap_or(d.circle_radius),
            ..d
        };
        s.check()?;
        Ok(s)
    }
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let n = match s {
        "1" | "x" => 1,
        "2" | "y" => 2,
        "3" | "z" => 3,
        _ => return Err(format!("axis must be 1, 2 or 3, got `{s}`")),
    };
    Ok(Axis::new(n).expect("axis in range"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_doc(path: &Path) -> Result<Document> {
    parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// JSON on one line, or a table under `--pretty`.
fn emit(pretty: bool, value: &impl Serialize, table: impl FnOnce() -> String) -> Result<()> {
    if pretty {
        print!("{}", table());
    } else {
        println!("{}", serde_json::to_string(value)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Validate { path } => validate(&path, pretty),
        Command::Project {
            net,
            seed,
            axis,
            simplify,
            budget,
            output,
        } => {
            let e = load_net(&read(&net)?).with_context(|| format!("parsing {}", net.display()))?;
            let text = match axis {
                Some(a) => {
                    let g = periodica::projection::perturb_generic(
                        &e,
                        seed,
                        DEFAULT_EPS,
                        DEFAULT_TRIES,
                    )?;
                    let mut d = project(&g, a)?;
                    if simplify {
                        d = periodica::search::simplify(&d, &budget.budget())?;
                        d.axis = Some(a);
                    }
                    serialize(&d)
                }
                None => {
                    let mut t = tridiagram_from_net(&e, seed)?;
                    if simplify {
                        t = simplified(&t, &budget.budget())?.1;
                    }
                    serialize_tridiagram(&t)
                }
            };
            write_out(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simplify {
            path,
            budget,
            output,
        } => {
            let b = budget.budget();
            let text = match read_doc(&path)? {
                Document::Diagram(d) => {
                    let mut s = periodica::search::simplify(&d, &b)?;
                    s.axis = d.axis;
                    serialize(&s)
                }
                Document::Tridiagram(t) => serialize_tridiagram(&simplified(&t, &b)?.1),
            };
            write_out(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Untangle {
            path,
            method,
            max_changes,
            axis,
            budget,
        } => {
            let b = budget.budget();
            let one = |d: &SquareDiagram| -> Result<UntanglingResult> {
                Ok(match method {
                    Method::Bfs => untangle_bfs(d, max_changes, &b)?,
                    Method::Fixed => untangle_fixed_shadow(d, &b)?,
                })
            };
            match (read_doc(&path)?, axis) {
                (Document::Diagram(d), None) => {
                    let r = one(&d)?;
                    emit(pretty, &r, || table::untangling(&[&r]))?;
                }
                (Document::Diagram(_), Some(_)) => {
                    bail!("--axis applies to tridiagram documents only")
                }
                (Document::Tridiagram(t), Some(a)) => {
                    let r = one(t.diagram(a))?;
                    emit(pretty, &r, || table::untangling(&[&r]))?;
                }
                (Document::Tridiagram(t), None) => {
                    let r = match method {
                        Method::Bfs => untangle_tridiagram(&t, max_changes, &b)?,
                        Method::Fixed => fixed_tridiagram(&t, &b)?,
                    };
                    emit(pretty, &r, || {
                        let rows: Vec<&UntanglingResult> = r.axes.iter().collect();
                        table::untangling(&rows)
                    })?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render {
            path,
            output,
            split,
            style,
        } => {
            let style = style.style()?;
            let doc = read_doc(&path)?;
            match split {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                    let diagrams: Vec<&SquareDiagram> = match &doc {
                        Document::Diagram(d) => vec![d],
                        Document::Tridiagram(t) => t.diagrams.iter().collect(),
                    };
                    for (i, d) in diagrams.into_iter().enumerate() {
                        let name = d
                            .axis
                            .map_or(format!("diagram-{i}.svg"), |a| format!("axis-{a}.svg"));
                        write_out(Some(&dir.join(name)), &render_svg(d, &style)?)?;
                    }
                }
                None => {
                    let svg = match &doc {
                        Document::Diagram(d) => render_svg(d, &style)?,
                        Document::Tridiagram(t) => render_tridiagram_svg(t, &style)?,
                    };
                    write_out(output.as_deref(), &svg)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Batch {
            paths,
            seed,
            untangle,
            budget,
        } => {
            let b = budget.budget();
            let mut rows = Vec::new();
            let mut failed = false;
            for p in &paths {
                let row = match batch_one(p, seed, untangle, &b) {
                    Ok(v) => v,
                    Err(e) => {
                        failed = true;
                        json!({ "path": p.display().to_string(), "error": format!("{e:#}") })
                    }
                };
                rows.push(row);
            }
            emit(pretty, &rows, || table::batch(&rows))?;
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn validate(path: &Path, pretty: bool) -> Result<ExitCode> {
    let (valid, value) = match read_doc(path)? {
        Document::Diagram(d) => {
            let r = validate_diagram(&d);
            (
                r.is_valid(),
                json!({ "valid": r.is_valid(), "diagrams": [r] }),
            )
        }
        Document::Tridiagram(t) => {
            let reports: Vec<_> = t.diagrams.iter().map(validate_diagram).collect();
            let consistency = check_tridiagram(&t);
            let valid = reports.iter().all(|r| r.is_valid()) && consistency.consistent;
            let value = json!({
                "valid": valid,
                "diagrams": reports,
                "consistent": consistency.consistent,
            });
            (valid, value)
        }
    };
    emit(pretty, &value, || table::validation(&value))?;
    Ok(if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Simplified tridiagram, keeping provenance.
fn simplified(t: &Tridiagram, b: &SimplifyBudget) -> Result<(CrossingTriplet, Tridiagram)> {
    let r = crossing_bound(t, b)?;
    let out = r.diagrams.expect("crossing_bound returns diagrams");
    Ok((r.triplet, out))
}

fn fixed_tridiagram(t: &Tridiagram, b: &SimplifyBudget) -> Result<TridiagramUntangling> {
    let search = Search::new(b);
    let [x, y, z] = periodica::parallel::map3(|a| search.untangle_fixed_shadow(t.diagram(a)));
    let axes = [x?, y?, z?];
    let best_triplet = CrossingTriplet::new(
        axes[0].min_crossings,
        axes[1].min_crossings,
        axes[2].min_crossings,
    );
    let ground = axes.iter().all(|r| r.u_upper == 0);
    Ok(TridiagramUntangling {
        axes,
        best_triplet,
        ground,
    })
}

fn batch_one(path: &Path, seed: u64, untangle: Option<usize>, b: &SimplifyBudget) -> Result<Value> {
    let text = read(path)?;
    let is_net = path.extension().is_some_and(|e| e == "net");
    let t = if is_net {
        tridiagram_from_net(&load_net(&text)?, seed)?
    } else {
        match parse(&text)? {
            Document::Tridiagram(t) => t,
            Document::Diagram(d) => {
                let mut ds: [SquareDiagram; 3] = Default::default();
                let i = d.axis.map_or(0, Axis::index);
                ds[i] = d;
                Tridiagram::new(ds)
            }
        }
    };
    let bound = crossing_bound(&t, b)?;
    let codes: Vec<String> = t
        .diagrams
        .iter()
        .map(|d| canonical_code(d).map(|c| c.to_hex()))
        .collect::<Result<_, _>>()?;
    let mut row = json!({
        "path": path.display().to_string(),
        "triplet": t.triplet(),
        "simplified": bound.triplet,
        "exhaustive": bound.exhaustive,
        "codes": codes,
    });
    if let Some(k) = untangle {
        let u = untangle_tridiagram(&t, k, b)?;
        row["u_upper"] = json!(u.axes.iter().map(|r| r.u_upper).collect::<Vec<_>>());
        row["best_triplet"] = json!(u.best_triplet);
        row["ground"] = json!(u.ground);
    }
    Ok(row)
}
