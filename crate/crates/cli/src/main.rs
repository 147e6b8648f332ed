//! `hpart`: generate graphs, run the decompositions and constructions, and
//! check their certificates.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 when a
//! verification fails (or the input violates a construction's
//! precondition), 3 when a search budget is exhausted.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hpartition::construct::{
    c_param, certify, chordal_partition, eps_impl, main_partition, t_size, tau, wcol_partition, BaseStrategy, CertKind,
    ConstructOptions, PartitionCertificate,
};
use hpartition::decomp::{
    capture_interfaces, exact_treedepth_with, exact_treewidth_with, helly_hit, is_natural, make_natural,
    TreeDecomposition, DEFAULT_EXACT_BUDGET,
};
use hpartition::generators::{family, random_graph, random_tree, random_treedepth_graph, u_forest, u_graph, Family};
use hpartition::io::{from_json, graph_dot, parse_graph, to_json_pretty, write_graph, GraphFormat};
use hpartition::minors::{find_attached_model_with, find_model_with, menger, JoinPattern, SearchConfig};
use hpartition::partitions::{
    bfs_layering, layered_lower_bound_check, uhd_clique_witness, verify_hpartition, HPartition,
};
use hpartition::sweep::{run_sweep, SweepConfig};
use hpartition::wcol::{binomial, wcol_exact_with, wcol_of_ordering, wreach_sizes, Ordering};
use hpartition::{Error, Graph, VertexSet};

#[derive(Parser)]
#[command(
    name = "hpart",
    version,
    about = "H-partitions, weak coloring orderings and their certificates"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Candidate branch sets examined by a minor search.
    #[arg(long, global = true, default_value_t = SearchConfig::DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
    /// Largest vertex count handed to an exact exponential solver.
    #[arg(long, global = true, default_value_t = DEFAULT_EXACT_BUDGET)]
    budget_n: usize,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph: a named family (path, cycle, complete, grid, star,
    /// binary_tree_closure) or random, tree, u, treedepth.
    Gen {
        kind: String,
        params: Vec<usize>,
        /// Edge probability for random graphs.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
    },
    /// Weak r-coloring number of an ordering, or the exact optimum.
    Wcol {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        /// JSON array listing the vertices from first to last.
        #[arg(long, conflicts_with = "exact")]
        order: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
    },
    /// Exact treewidth with an optimal decomposition.
    Tw {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Exact treedepth with an optimal forest.
    Td {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Search for a minor model; with roots, for a model of `K_a ⊕ pattern`
    /// attached to the root sets.
    Minor {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        /// Root sets such as `0,1;4`.
        #[arg(long)]
        roots: Option<String>,
        /// Apex count `a` (defaults to the number of root sets).
        #[arg(long)]
        apex: Option<usize>,
    },
    /// k disjoint S–T paths or a separation of order below k.
    Menger {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        k: usize,
    },
    /// Natural rewrite of a tree-decomposition (an exact one by default).
    Natural {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Disjoint family members or a few bags hitting all of them.
    Helly {
        #[arg(long)]
        graph: PathBuf,
        /// JSON array of vertex sets.
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Grow bags into a set whose components have small interfaces.
    Capture {
        #[arg(long)]
        graph: PathBuf,
        /// Tree nodes such as `0,3`.
        #[arg(long)]
        y: String,
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Build a partition and emit its certificate.
    Partition {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Defaults to one more than the treewidth.
        #[arg(long)]
        t: Option<usize>,
        /// Root sets such as `0,1;4`.
        #[arg(long)]
        roots: Option<String>,
        #[arg(long, value_enum, default_value_t = Strategy::Singleton)]
        strategy: Strategy,
        #[arg(long)]
        parallel: bool,
    },
    /// Check a certificate or an H-partition.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Lower-bound witnesses.
    Witness {
        #[command(subcommand)]
        what: WitnessCommand,
    },
    /// Parameter values and the two headline bounds.
    Bounds {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Run a corpus sweep from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Run every checker on a partition certificate.
    Certificate { path: PathBuf },
    /// Check the H-partition invariants.
    Partition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// A K_h in the quotient of a width-d partition of U(h,d).
    Uhd {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        partition: PathBuf,
    },
    /// The layered argument on U(h,3c) with BFS layers from the tree roots.
    Layered {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        partition: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Chordal,
    Main,
    Wcol,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Singleton,
    Chordal,
}

/// Failures mapped onto exit codes.
enum Failure {
    Usage(String),
    Verification(String, Option<Value>),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::PreconditionViolated { ref evidence, .. } => {
                let ev = evidence.as_ref().map(|m| json!({ "evidence": m }));
                Failure::Verification(e.to_string(), ev)
            }
            Error::Certificate(_) => Failure::Verification(e.to_string(), None),
            Error::InvalidInput(_) => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg, detail)) => {
            if let Some(v) = detail {
                let _ = emit(&cli.global, &to_json_pretty(&v));
            }
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &FsPath) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load<T: serde::de::DeserializeOwned>(path: &FsPath) -> Result<T, Failure> {
    from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(global: &Global, text: &str) -> Outcome {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &global.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(global: &Global, v: &Value) -> Outcome {
    match global.format {
        Format::Json => emit(global, &to_json_pretty(v)),
        _ => Err(Failure::Usage("this command only writes JSON".into())),
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Failure::Usage(format!("not a vertex: {x:?}"))))
        .collect()
}

fn parse_set(g: &Graph, s: &str) -> Result<VertexSet, Failure> {
    let vs = parse_list(s)?;
    if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
        return Err(Failure::Usage(format!("vertex {v} out of range")));
    }
    Ok(vs.into_iter().collect())
}

fn parse_root_sets(g: &Graph, s: Option<&str>) -> Result<Vec<VertexSet>, Failure> {
    match s {
        None => Ok(Vec::new()),
        Some(s) => s.split(';').map(|part| parse_set(g, part)).collect(),
    }
}

fn decomposition(g: &Graph, td: Option<&PathBuf>, budget: usize) -> Result<TreeDecomposition, Failure> {
    match td {
        Some(p) => {
            let td: TreeDecomposition = load(p)?;
            td.validate(g)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Ok(td)
        }
        None => Ok(exact_treewidth_with(g, budget)?.1),
    }
}

fn options(global: &Global, strategy: BaseStrategy, parallel: bool) -> ConstructOptions {
    ConstructOptions {
        search: SearchConfig {
            node_budget: global.budget_nodes,
        },
        strategy,
        parallel,
        exact_n: global.budget_n,
        ..Default::default()
    }
}

fn run(cli: &Cli) -> Outcome {
    let global = &cli.global;
    let search = SearchConfig {
        node_budget: global.budget_nodes,
    };
    match &cli.command {
        Command::Gen { kind, params, p } => {
            let g = generate(kind, params, *p, global.seed)?;
            let format = match global.format {
                Format::Json => GraphFormat::Json,
                Format::Text => GraphFormat::Text,
                Format::Dot => GraphFormat::Dot,
                Format::Csv => return Err(Failure::Usage("graphs are written as json, text or dot".into())),
            };
            emit(global, &write_graph(&g, format))
        }
        Command::Wcol { graph, r, order, exact } => {
            let g = load_graph(graph)?;
            let sigma = if *exact {
                wcol_exact_with(&g, *r, global.budget_n)?.1
            } else if let Some(p) = order {
                let seq: Vec<usize> = load(p)?;
                Ordering::from_sequence(&seq)?
            } else {
                Ordering::identity(g.n())
            };
            let value = wcol_of_ordering(&g, &sigma, *r)?;
            let per_vertex = wreach_sizes(&g, &sigma, *r)?;
            emit_json(
                global,
                &json!({ "value": value, "order": sigma.sequence(), "per_vertex": per_vertex }),
            )
        }
        Command::Tw { graph } => {
            let g = load_graph(graph)?;
            let (w, td) = exact_treewidth_with(&g, global.budget_n)?;
            emit_json(global, &json!({ "treewidth": w, "decomposition": td }))
        }
        Command::Td { graph } => {
            let g = load_graph(graph)?;
            let (depth, forest) = exact_treedepth_with(&g, global.budget_n)?;
            emit_json(global, &json!({ "treedepth": depth, "forest": forest }))
        }
        Command::Minor {
            host,
            pattern,
            roots,
            apex,
        } => {
            let g = load_graph(host)?;
            let p = load_graph(pattern)?;
            match roots {
                None if apex.is_none() => {
                    let m = find_model_with(&g, &p, &search)?;
                    emit_json(global, &json!({ "found": m.is_some(), "model": m }))
                }
                _ => {
                    let sets = parse_root_sets(&g, roots.as_deref())?;
                    let pat = JoinPattern::new(apex.unwrap_or(sets.len()), p);
                    let m = find_attached_model_with(&g, &pat, &sets, &search)?;
                    emit_json(global, &json!({ "found": m.is_some(), "model": m }))
                }
            }
        }
        Command::Menger { graph, s, t, k } => {
            let g = load_graph(graph)?;
            let out = menger(&g, parse_set(&g, s)?, parse_set(&g, t)?, *k)?;
            emit_json(global, &json!(out))
        }
        Command::Natural { graph, td } => {
            let g = load_graph(graph)?;
            let td = decomposition(&g, td.as_ref(), global.budget_n)?;
            let nat = make_natural(&g, &td)?;
            emit_json(
                global,
                &json!({ "natural": is_natural(&g, &nat), "decomposition": nat }),
            )
        }
        Command::Helly {
            graph,
            family: fam,
            d,
            td,
        } => {
            let g = load_graph(graph)?;
            let td = decomposition(&g, td.as_ref(), global.budget_n)?;
            let fam: Vec<VertexSet> = load(fam)?;
            let out = helly_hit(&g, &td, &fam, *d)?;
            emit_json(global, &json!({ "outcome": out, "decomposition": td }))
        }
        Command::Capture { graph, y, td } => {
            let g = load_graph(graph)?;
            let td = decomposition(&g, td.as_ref(), global.budget_n)?;
            let cap = capture_interfaces(&g, &td, &parse_list(y)?)?;
            emit_json(global, &json!({ "capture": cap, "decomposition": td }))
        }
        Command::Partition {
            algo,
            graph,
            h,
            d,
            k,
            t,
            roots,
            strategy,
            parallel,
        } => {
            let g = load_graph(graph)?;
            let root_sets = parse_root_sets(&g, roots.as_deref())?;
            let strategy = match strategy {
                Strategy::Singleton => BaseStrategy::Singleton,
                Strategy::Chordal => BaseStrategy::Chordal,
            };
            let opts = options(global, strategy, *parallel);
            let t_of = |t: Option<usize>| -> Result<usize, Failure> {
                match t {
                    Some(t) => Ok(t),
                    None => Ok((exact_treewidth_with(&g, global.budget_n)?.0 + 1).max(1) as usize),
                }
            };
            let cert = match algo {
                Algo::Chordal => {
                    let t = t_of(*t)?;
                    PartitionCertificate {
                        kind: CertKind::Chordal { t },
                        graph: g.clone(),
                        roots: Vec::new(),
                        partition: chordal_partition(&g, t)?,
                    }
                }
                Algo::Main => {
                    let t = t_of(*t)?;
                    let mp = main_partition(*h, *d, *k, t, &g, &root_sets, &opts)?;
                    PartitionCertificate {
                        kind: CertKind::Main {
                            h: *h,
                            d: *d,
                            k: *k,
                            t,
                            strategy,
                        },
                        graph: g.clone(),
                        roots: root_sets,
                        partition: mp.partition,
                    }
                }
                Algo::Wcol => {
                    let mut singles = Vec::new();
                    for s in &root_sets {
                        match s.to_vec()[..] {
                            [v] => singles.push(v),
                            _ => return Err(Failure::Usage("ordered partitions take single-vertex roots".into())),
                        }
                    }
                    let wp = wcol_partition(*h, *d, *k, &g, &singles, &opts)?;
                    PartitionCertificate {
                        kind: CertKind::Wcol {
                            h: *h,
                            d: *d,
                            k: *k,
                            t: wp.t,
                        },
                        graph: g.clone(),
                        roots: root_sets,
                        partition: wp.partition,
                    }
                }
            };
            match global.format {
                Format::Dot => emit(global, &graph_dot(&g, Some(&cert.partition))),
                _ => emit_json(global, &json!(cert)),
            }
        }
        Command::Verify { what } => match what {
            VerifyCommand::Certificate { path } => {
                let cert: PartitionCertificate = load(path)?;
                let report = certify(&cert);
                emit_json(global, &json!(report))?;
                if report.ok() {
                    Ok(())
                } else {
                    let failed: Vec<_> = report
                        .checks
                        .iter()
                        .filter(|c| !c.pass)
                        .map(|c| c.name.clone())
                        .collect();
                    Err(Failure::Verification(
                        format!("failed checks: {}", failed.join(", ")),
                        None,
                    ))
                }
            }
            VerifyCommand::Partition { graph, partition } => {
                let g = load_graph(graph)?;
                let hp: HPartition = load(partition)?;
                let report = verify_hpartition(&g, &hp);
                emit_json(global, &json!(report))?;
                if report.valid {
                    Ok(())
                } else {
                    Err(Failure::Verification(report.problems.join("; "), None))
                }
            }
        },
        Command::Witness { what } => match what {
            WitnessCommand::Uhd { h, d, partition } => {
                let hp: HPartition = load(partition)?;
                let clique = uhd_clique_witness(*h, *d, &hp)?;
                let tw = exact_treewidth_with(&hp.h, global.budget_n)?.0;
                emit_json(global, &json!({ "clique": clique, "treewidth_h": tw }))
            }
            WitnessCommand::Layered { h, c, partition } => {
                let hp: HPartition = load(partition)?;
                let g = u_graph(*h, 3 * c)?;
                let roots: VertexSet = u_forest(*h, 3 * c)?.roots().into_iter().collect();
                let layering = bfs_layering(&g, roots)?;
                let report = layered_lower_bound_check(*h, *c, &hp, &layering)?;
                emit_json(global, &json!(report))?;
                if report.valid {
                    Ok(())
                } else {
                    Err(Failure::Verification(report.reason.unwrap_or_default(), None))
                }
            }
        },
        Command::Bounds { h, d, k, t, r } => {
            let th = tau(*h, 0).max(0) as u64;
            let wcol = 2u128
                .saturating_mul(eps_impl(*h, *d, 0, *t))
                .saturating_mul(2 * *r as u128 + 1)
                .saturating_mul(binomial(th + *r as u64, th));
            let c = c_param(*h, *d, *k);
            emit_json(
                global,
                &json!({
                    "h": h, "d": d, "k": k, "t": t, "r": r,
                    "tau": tau(*h, *k),
                    "c_param": c.to_string(),
                    "t_size": t_size(*h, *d, *k).to_string(),
                    "eps_impl": eps_impl(*h, *d, *k, *t).to_string(),
                    "partition_treewidth_bound": tau(*h, 0),
                    "partition_width_bound": c_param(*h, *d, 0).saturating_mul(*t as u128).to_string(),
                    "wcol_bound": wcol.to_string(),
                }),
            )
        }
        Command::Sweep { config, parallel } => {
            let mut cfg: SweepConfig = load(config)?;
            cfg.parallel |= *parallel;
            if global.budget_nodes != SearchConfig::DEFAULT_NODE_BUDGET {
                cfg.search.node_budget = global.budget_nodes;
            }
            if global.budget_n != DEFAULT_EXACT_BUDGET {
                cfg.exact_n = global.budget_n;
            }
            let report = run_sweep(&cfg)?;
            match global.format {
                Format::Csv => emit(global, &report.to_csv())?,
                Format::Json => emit(global, &to_json_pretty(&report))?,
                _ => return Err(Failure::Usage("sweep reports are written as json or csv".into())),
            }
            if report.all_pass() {
                Ok(())
            } else {
                let failed = report.rows.iter().filter(|r| !r.pass).count();
                Err(Failure::Verification(format!("{failed} sweep rows failed"), None))
            }
        }
    }
}

fn generate(kind: &str, params: &[usize], p: f64, seed: u64) -> Result<Graph, Failure> {
    let need = |k: usize| -> Result<(), Failure> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Failure::Usage(format!("{kind} takes {k} parameter(s)")))
        }
    };
    let g = match kind {
        "random" => {
            need(1)?;
            random_graph(params[0], p, seed)?
        }
        "tree" => {
            need(1)?;
            random_tree(params[0], seed)?
        }
        "u" => {
            need(2)?;
            u_graph(params[0], params[1])?
        }
        "treedepth" => {
            need(2)?;
            random_treedepth_graph(params[0], params[1], p, seed)?
        }
        name => family(name.parse::<Family>()?, params)?,
    };
    Ok(g)
}
