//! `recomb`: validate, transform, explore and sample balanced connected
//! partitions under recombination moves.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use recomb_core::format::{
    parse_cycle, parse_graph, parse_ncl, parse_partition, to_dot, write_cycle, write_graph, write_map_jsonl,
    write_moves, write_partition, write_trace,
};
use recomb_core::generate::{
    gen_cycle, gen_grid, gen_hamiltonian, gen_negative, gen_path, gen_random_connected, random_partition, seeded,
};
use recomb_core::hamiltonian::{transform_hamiltonian, CycleOrder};
use recomb_core::ncl::reduce_ncl;
use recomb_core::oracle::{
    build_space_with, decide_br_with, recom_walk, space_stats, Limits, DEFAULT_NODE_CAP,
};
use recomb_core::partition::replay;
use recomb_core::unbounded::transform_unbounded;
use recomb_core::{validate, Graph, Partition, SlackBound};

#[derive(Parser)]
#[command(name = "recomb", version, about = "Reconfigure balanced connected graph partitions by recombination")]
struct Cli {
    /// Also write a DOT rendering (districts as fill colors) of the command's result.
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Instance {
    /// Graph file (`p n m` header, `e u v` lines).
    #[arg(long)]
    graph: PathBuf,
    /// Number of districts.
    #[arg(long)]
    k: usize,
    /// Allowed deviation from n/k: a nonnegative integer or `inf`.
    #[arg(long)]
    slack: SlackBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// At most 6(k-1) moves, no size constraint.
    Unbounded,
    /// Along a Hamilton cycle, for slack at least n/k.
    Hamiltonian,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Path,
    Grid,
    Random,
    Negative,
    Ncl,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a partition is a connected k-partition within the slack.
    Validate {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Compute a recombination sequence between two partitions.
    Transform {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Slack; `inf` for unbounded mode.
        #[arg(long, default_value = "inf")]
        slack: SlackBound,
        /// Hamilton cycle file; defaults to the order 0, 1, ..., n-1.
        #[arg(long)]
        cycle: Option<PathBuf>,
        /// Move-sequence output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate the configuration space of a small instance.
    Explore {
        #[command(flatten)]
        inst: Instance,
        /// Print node, edge, component and diameter counts (default).
        #[arg(long)]
        stats: bool,
        /// Print the size of every connected component.
        #[arg(long)]
        components: bool,
    },
    /// Decide whether one partition can reach another.
    Decide {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Write a shortest move sequence here when reachable.
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Generate an instance into a directory.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        /// Edge count (random family).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        w: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        /// Extra random chords (cycle family).
        #[arg(long, default_value_t = 0)]
        chords: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Districts; with the standard families, also write two random partitions.
        #[arg(long)]
        k: Option<usize>,
        /// Slack for generated partitions; for `negative` and `ncl` a nonnegative integer.
        #[arg(long, default_value = "inf")]
        s: SlackBound,
        /// NCL input file with orientations named `A` and `B` (ncl family).
        #[arg(long)]
        ncl: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Random walk over recombination moves.
    Sample {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        start: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trace output file.
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    /// Bad arguments or unreadable files.
    Usage(String),
    /// Inputs that parse but fail validation, or a computation that cannot succeed on them.
    Invalid(String),
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_partition(path: &Path, g: &Graph) -> Result<Partition, Failure> {
    parse_partition(&read(path)?, g.n()).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn check(g: &Graph, p: &Partition, k: usize, slack: SlackBound, what: &Path) -> Outcome {
    let report = validate(g, p, k, slack);
    if report.is_ok() {
        Ok(())
    } else {
        Err(invalid(format!("{}: {report}", what.display())))
    }
}

fn limits() -> Result<Limits, Failure> {
    let node_cap = match std::env::var("BCP_NODE_CAP") {
        Ok(v) => v.parse().map_err(|_| usage(format!("BCP_NODE_CAP must be a positive integer, got `{v}`")))?,
        Err(_) => DEFAULT_NODE_CAP,
    };
    Ok(Limits { node_cap, ..Limits::default() })
}

fn dot(target: &Option<PathBuf>, g: &Graph, p: Option<&Partition>) -> Outcome {
    match target {
        Some(path) => write(path, &to_dot(g, p)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { inst, partition } => {
            let g = load_graph(&inst.graph)?;
            let p = load_partition(&partition, &g)?;
            check(&g, &p, inst.k, inst.slack, &partition)?;
            dot(&cli.dot, &g, Some(&p))?;
            println!("ok");
            Ok(())
        }
        Command::Transform { mode, graph, from, to, slack, cycle, out } => {
            let g = load_graph(&graph)?;
            let (pa, pb) = (load_partition(&from, &g)?, load_partition(&to, &g)?);
            if pa.k() != pb.k() {
                return Err(invalid(format!("partitions have {} and {} districts", pa.k(), pb.k())));
            }
            check(&g, &pa, pa.k(), slack, &from)?;
            check(&g, &pb, pb.k(), slack, &to)?;
            let moves = match mode {
                Mode::Unbounded => transform_unbounded(&g, &pa, &pb).map_err(|e| invalid(e.to_string()))?,
                Mode::Hamiltonian => {
                    let order = match &cycle {
                        Some(path) => parse_cycle(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?,
                        None => (0..g.n()).collect(),
                    };
                    let order = CycleOrder::new(&g, order).map_err(|e| invalid(e.to_string()))?;
                    transform_hamiltonian(&g, &order, &pa, &pb, slack).map_err(|e| invalid(e.to_string()))?
                }
            };
            write(&out, &write_moves(&moves))?;
            let last = replay(&g, &pa, &moves, slack).ok().and_then(|mut v| v.pop()).unwrap_or(pa);
            dot(&cli.dot, &g, Some(&last))?;
            println!("{}", moves.len());
            Ok(())
        }
        Command::Explore { inst, stats: _, components } => {
            let g = load_graph(&inst.graph)?;
            let space = build_space_with(&g, inst.k, inst.slack, limits()?).map_err(|e| invalid(e.to_string()))?;
            if components {
                let mut sizes = vec![0usize; space.component_count()];
                for &c in &space.component {
                    sizes[c] += 1;
                }
                println!("components {}", sizes.len());
                for (c, size) in sizes.iter().enumerate() {
                    println!("component {c} size {size}");
                }
            } else {
                let st = space_stats(&space);
                let diameter = st.diameters.iter().max().copied().unwrap_or(0);
                println!("nodes {}\nedges {}\ncomponents {}\ndiameter {diameter}", st.nodes, st.edges, st.components);
            }
            dot(&cli.dot, &g, None)
        }
        Command::Decide { inst, from, to, path } => {
            let g = load_graph(&inst.graph)?;
            let (pa, pb) = (load_partition(&from, &g)?, load_partition(&to, &g)?);
            check(&g, &pa, inst.k, inst.slack, &from)?;
            check(&g, &pb, inst.k, inst.slack, &to)?;
            let d = decide_br_with(&g, inst.k, inst.slack, &pa, &pb, limits()?).map_err(|e| invalid(e.to_string()))?;
            dot(&cli.dot, &g, Some(&pa))?;
            match d.path {
                Some(moves) => {
                    if let Some(out) = &path {
                        write(out, &write_moves(&moves))?;
                    }
                    println!("REACHABLE {}", moves.len());
                }
                None => println!("UNREACHABLE"),
            }
            Ok(())
        }
        Command::Gen { family, n, m, w, h, chords, seed, k, s, ncl, out_dir } => {
            fs::create_dir_all(&out_dir).map_err(|e| usage(format!("cannot create {}: {e}", out_dir.display())))?;
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required for this family")));
            let finite = |s: SlackBound| match s {
                SlackBound::Finite(s) => Ok(s),
                SlackBound::Infinite => Err(usage("--s must be a nonnegative integer for this family")),
            };
            let (g, cycle, pa, pb) = match family {
                Family::Negative => {
                    let inst = gen_negative(need(k, "k")?, finite(s)?).map_err(|e| usage(e.to_string()))?;
                    (inst.graph, Some(inst.cycle), Some(inst.split), Some(inst.arcs))
                }
                Family::Ncl => {
                    let path = ncl.ok_or_else(|| usage("--ncl is required for the ncl family"))?;
                    let file = parse_ncl(&read(&path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                    let (a, b) = match (file.orientation("A"), file.orientation("B")) {
                        (Some(a), Some(b)) => (a, b),
                        _ => return Err(invalid(format!("{}: orientations `A` and `B` are required", path.display()))),
                    };
                    let r = reduce_ncl(&file.instance, a, b, finite(s)?).map_err(|e| invalid(e.to_string()))?;
                    write(&out_dir.join("map.jsonl"), &write_map_jsonl(&r.map_records()))?;
                    println!("k {} district size {}", r.k, r.district_size());
                    (r.graph, None, Some(r.pa), Some(r.pb))
                }
                _ => {
                    let (g, cycle) = match family {
                        Family::Cycle if chords > 0 => {
                            let (g, c) = gen_hamiltonian(need(n, "n")?, chords, seed).map_err(|e| usage(e.to_string()))?;
                            (g, Some(c))
                        }
                        Family::Cycle => {
                            let g = gen_cycle(need(n, "n")?).map_err(|e| usage(e.to_string()))?;
                            let c = CycleOrder::new(&g, (0..g.n()).collect()).map_err(|e| usage(e.to_string()))?;
                            (g, Some(c))
                        }
                        Family::Path => (gen_path(need(n, "n")?).map_err(|e| usage(e.to_string()))?, None),
                        Family::Grid => (gen_grid(need(w, "w")?, need(h, "h")?).map_err(|e| usage(e.to_string()))?, None),
                        _ => {
                            let g = gen_random_connected(need(n, "n")?, need(m, "m")?, seed).map_err(|e| usage(e.to_string()))?;
                            (g, None)
                        }
                    };
                    let (pa, pb) = match k {
                        Some(k) => {
                            let mut rng = seeded(seed ^ 0x9e37_79b9_7f4a_7c15);
                            let mut draw = || {
                                random_partition(&g, k, s, &mut rng, 10_000)
                                    .ok_or_else(|| invalid(format!("no {k}-partition within slack {s} found")))
                            };
                            (Some(draw()?), Some(draw()?))
                        }
                        None => (None, None),
                    };
                    (g, cycle, pa, pb)
                }
            };
            write(&out_dir.join("instance.graph"), &write_graph(&g))?;
            if let Some(c) = &cycle {
                write(&out_dir.join("instance.cycle"), &write_cycle(c.order()))?;
            }
            for (name, p) in [("a.part", &pa), ("b.part", &pb)] {
                if let Some(p) = p {
                    let text = write_partition(p, g.n()).ok_or_else(|| invalid("generated partition does not cover the graph"))?;
                    write(&out_dir.join(name), &text)?;
                }
            }
            dot(&cli.dot, &g, pa.as_ref())?;
            println!("n {} m {}", g.n(), g.m());
            Ok(())
        }
        Command::Sample { inst, start, steps, seed, out } => {
            let g = load_graph(&inst.graph)?;
            let p = load_partition(&start, &g)?;
            check(&g, &p, inst.k, inst.slack, &start)?;
            let trace = recom_walk(&g, inst.k, inst.slack, &p, steps, seed).map_err(|e| invalid(e.to_string()))?;
            write(&out, &write_trace(&trace, inst.k, inst.slack))?;
            if cli.dot.is_some() {
                let moves: Vec<_> = trace.steps.iter().map(|s| s.mv.clone()).collect();
                let last = replay(&g, &p, &moves, inst.slack).ok().and_then(|mut v| v.pop()).unwrap_or(p);
                dot(&cli.dot, &g, Some(&last))?;
            }
            println!("{}{}", trace.steps.len(), if trace.halted { " halted" } else { "" });
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid: {msg}");
            ExitCode::from(2)
        }
    }
}
