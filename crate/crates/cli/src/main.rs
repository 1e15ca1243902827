//! Batch front end for the offroute solvers.
//!
//! Every subcommand reads text inputs, runs one solver family and prints a
//! deterministic line-oriented result (or JSON with `--format json`).
//! Exit codes: 0 success, 1 input error, 2 capability error (budgets and
//! packet-count caps).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use offroute::bottleneck::{
    feasibility_reachable, max_capacity_bsearch, max_capacity_buckets, max_capacity_dijkstra,
    multicast_tree_bsearch, multicast_tree_from_labels, MulticastTree,
};
use offroute::connectivity::{
    run_offline, validate_script, AggregatorPair, CcAgg, GAgg, OperationScript,
};
use offroute::graph::{fmt_value, parse_graph, serialize_graph, to_directed, Graph, VertexId, INF};
use offroute::index::{build_index, BottleneckIndex};
use offroute::kpacket::{kflow_requests, kpacket_cover, metric_closure, CostMatrix};
use offroute::lex::{first_component_bsearch, generalized_dijkstra, AggregatorSpec};
use offroute::nonlinear::{
    nonlinear_bsearch_max, nonlinear_chain_dp, nonlinear_graph_sp, AggregateCost, GForm,
    TypedChain, TypedGraph, DEFAULT_CELL_BUDGET,
};
use offroute::obnoxious::{
    build_farthest_index, compute_dmin, farthest_path, farthest_tree, transform_split,
};
use offroute::pareto::{
    enumerate_reachable, monotone_sp, pareto_front, CostModel, DominationRule, Objective,
    ObjectiveKind, Preference,
};

#[derive(Parser)]
#[command(name = "offroute", version, about = "Offline routing solvers over edge-list graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathStrategy {
    Dijkstra,
    Buckets,
    Bsearch,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeStrategy {
    Labels,
    Bsearch,
}

#[derive(Clone, Copy, ValueEnum)]
enum QueryMethod {
    Levelwise,
    Lca,
}

#[derive(Clone, Copy, ValueEnum)]
enum GFormArg {
    Sum,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    EdgeMin,
    Split,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a graph and print its canonical serialization.
    GraphNormalize {
        graph: PathBuf,
        /// Replace undirected edges by arc pairs before printing.
        #[arg(long)]
        to_directed: bool,
    },
    /// Maximum-capacity (widest) path between two vertices.
    MaxcapPath {
        graph: PathBuf,
        #[arg(short, long)]
        source: usize,
        #[arg(short, long)]
        target: usize,
        #[arg(long, default_value_t = 0)]
        column: usize,
        #[arg(long, value_enum, default_value_t = PathStrategy::Dijkstra)]
        strategy: PathStrategy,
        /// Capacity bound for the bucket strategy (defaults to the largest
        /// capacity in the column).
        #[arg(long)]
        capmax: Option<i64>,
        /// Lazy-deletion bucket lists instead of eager moves.
        #[arg(long)]
        lazy: bool,
        /// Instead of a path query, list which targets stay reachable using
        /// only edges with capacity at least this threshold.
        #[arg(long)]
        reachable_threshold: Option<i64>,
        /// Targets for --reachable-threshold (defaults to every vertex).
        #[arg(long)]
        targets: Option<String>,
    },
    /// Maximum-capacity multicast tree from a source to destinations.
    MaxcapTree {
        graph: PathBuf,
        #[arg(short, long)]
        source: usize,
        #[arg(short, long)]
        destinations: String,
        #[arg(long, default_value_t = 0)]
        column: usize,
        #[arg(long, value_enum, default_value_t = TreeStrategy::Labels)]
        strategy: TreeStrategy,
    },
    /// Preprocess a graph into a bottleneck query index.
    IndexBuild {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        column: usize,
    },
    /// Answer "query u v" lines against a serialized index.
    IndexQuery {
        index: PathBuf,
        script: PathBuf,
        #[arg(long, value_enum, default_value_t = QueryMethod::Levelwise)]
        method: QueryMethod,
    },
    /// Path maximizing the distance to the nearest obnoxious vertex.
    FarthestPath {
        graph: PathBuf,
        /// Obnoxious vertices inline, e.g. "1 4".
        #[arg(long)]
        obnoxious: Option<String>,
        /// Obnoxious vertices from a whitespace-separated file.
        #[arg(long)]
        obnoxious_file: Option<PathBuf>,
        #[arg(short, long)]
        source: usize,
        #[arg(short, long)]
        target: usize,
        #[arg(long, default_value_t = 0)]
        length_column: usize,
        /// Which bottleneck reduction to run.
        #[arg(long, value_enum, default_value_t = Reduction::EdgeMin)]
        reduction: Reduction,
        /// Also print the per-vertex distance to the nearest obnoxious
        /// vertex.
        #[arg(long)]
        print_dmin: bool,
    },
    /// Multicast tree maximizing the worst destination's safety.
    FarthestTree {
        graph: PathBuf,
        /// Obnoxious vertices inline, e.g. "1 4".
        #[arg(long)]
        obnoxious: Option<String>,
        /// Obnoxious vertices from a whitespace-separated file.
        #[arg(long)]
        obnoxious_file: Option<PathBuf>,
        #[arg(short, long)]
        source: usize,
        #[arg(short, long)]
        destinations: String,
        #[arg(long, default_value_t = 0)]
        length_column: usize,
    },
    /// Bottleneck index over the edge-min safety reduction.
    FarthestIndex {
        graph: PathBuf,
        /// Obnoxious vertices inline, e.g. "1 4".
        #[arg(long)]
        obnoxious: Option<String>,
        /// Obnoxious vertices from a whitespace-separated file.
        #[arg(long)]
        obnoxious_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        length_column: usize,
    },
    /// Lexicographic multi-weight optimal paths.
    Lexpath {
        graph: PathBuf,
        /// Comma list of per-column aggregators, e.g. "min,sum".
        #[arg(long)]
        spec: String,
        #[arg(short, long)]
        source: usize,
        /// With a target: one vector and path. Without: per-vertex labels.
        #[arg(short, long)]
        target: Option<usize>,
        /// Binary-search the first component (needs a target and a min or
        /// max first aggregator).
        #[arg(long)]
        bsearch: bool,
    },
    /// Minimum-cost coverage of 1..=n by monotonically forwarded packets.
    KpacketCover {
        /// Dense cost matrix file (first line n, then n rows).
        #[arg(long, conflicts_with = "graph")]
        matrix: Option<PathBuf>,
        /// Edge-list graph whose metric closure supplies the costs.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        column: usize,
        #[arg(short = 'k', long)]
        packets: usize,
        /// Initial packet positions, e.g. "1 2".
        #[arg(long)]
        init: String,
    },
    /// Serve ordered packet requests with k flows.
    Kflow {
        #[arg(long, conflicts_with = "graph")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        column: usize,
        #[arg(short = 'k', long)]
        flows: usize,
        #[arg(long)]
        init: String,
        /// Requested vertices in serving order, e.g. "3 1 4".
        #[arg(long)]
        requests: String,
        /// Drop the state-ordering constraint (distinct flows).
        #[arg(long)]
        distinct_flows: bool,
    },
    /// Non-linear aggregate cost over a typed chain.
    NonlinearChain {
        chain: PathBuf,
        /// Per-type coefficients, e.g. "1,1".
        #[arg(long)]
        coeffs: String,
        /// Per-type exponents, e.g. "2,2".
        #[arg(long)]
        exps: String,
        #[arg(long, value_enum, default_value_t = GFormArg::Sum)]
        g: GFormArg,
        /// Use the max-form binary search instead of the direct DP.
        #[arg(long)]
        bsearch: bool,
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        budget: usize,
    },
    /// Non-linear aggregate cost over a typed directed graph.
    NonlinearGraph {
        graph: PathBuf,
        #[arg(long)]
        sources: String,
        #[arg(long)]
        destinations: String,
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        exps: String,
        #[arg(long, value_enum, default_value_t = GFormArg::Sum)]
        g: GFormArg,
        /// Bounds for the type-1..k-1 totals, e.g. "5,5".
        #[arg(long)]
        bounds: String,
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        budget: usize,
    },
    /// Non-dominated multi-objective path fronts.
    Pareto {
        graph: PathBuf,
        /// Per-column objective kinds, e.g. "sum,sum" (sum|max|min).
        #[arg(long)]
        objectives: String,
        /// Per-column comparator directions (smaller|larger); defaults to
        /// the natural direction per kind.
        #[arg(long)]
        directions: Option<String>,
        #[arg(long)]
        vmax: i64,
        #[arg(long)]
        sources: String,
        #[arg(long)]
        destinations: String,
        /// Weak domination (better-or-equal everywhere, strictly once).
        #[arg(long)]
        weak: bool,
        /// Use the monotone last-objective formulation; prints tuples only.
        #[arg(long)]
        monotone: bool,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Replay a deletion/query script with aggregate answers.
    Connectivity {
        graph: PathBuf,
        script: PathBuf,
        /// Vertex weights, e.g. "1 2 3" (defaults to all ones).
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        weights_file: Option<PathBuf>,
        #[arg(long, default_value = "sum")]
        ccagg: String,
        #[arg(long, default_value = "sum")]
        gagg: String,
        /// Only check the script for structural violations.
        #[arg(long)]
        validate_only: bool,
    },
}

struct Output {
    text: String,
    json: Value,
}

enum CliError {
    Input(String),
    Capability(String),
}

impl From<offroute::Error> for CliError {
    fn from(e: offroute::Error) -> Self {
        match e {
            offroute::Error::Capability(msg) => CliError::Capability(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult = Result<Output, CliError>;

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &PathBuf) -> Result<Graph, CliError> {
    Ok(parse_graph(&read_file(path)?)?)
}

/// Vertex lists accept whitespace or comma separators.
fn parse_vertices(s: &str) -> Result<Vec<VertexId>, CliError> {
    let out: Result<Vec<VertexId>, _> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map(VertexId)
                .map_err(|_| CliError::Input(format!("bad vertex {t:?}")))
        })
        .collect();
    let out = out?;
    if out.is_empty() {
        return Err(CliError::Input("empty vertex list".to_string()));
    }
    Ok(out)
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| CliError::Input(format!("bad number {t:?}"))))
        .collect()
}

fn json_value(v: i64) -> Value {
    if v == INF {
        Value::Null
    } else {
        json!(v)
    }
}

fn path_json(path: &[VertexId]) -> Value {
    Value::Array(path.iter().map(|v| json!(v.0)).collect())
}

fn tree_output(tree: &MulticastTree, cap_word: &str) -> Output {
    let mut text = format!("{cap_word} {}\n", fmt_value(tree.capacity));
    let _ = writeln!(text, "edges {}", tree.tree_edges.len());
    for &(p, c, cap) in &tree.tree_edges {
        let _ = writeln!(text, "edge {p} {c} {}", fmt_value(cap));
    }
    let json = json!({
        cap_word: json_value(tree.capacity),
        "root": tree.root.0,
        "edges": tree.tree_edges.iter()
            .map(|&(p, c, cap)| json!({"parent": p.0, "child": c.0, "cap": json_value(cap)}))
            .collect::<Vec<_>>(),
    });
    Output { text, json }
}

/// Ensure a directed view for solvers that need one.
fn directed_view(g: &Graph) -> Graph {
    if g.directed() {
        g.clone()
    } else {
        to_directed(g)
    }
}

fn run(cmd: Cmd) -> CliResult {
    match cmd {
        Cmd::GraphNormalize { graph, to_directed: dir } => {
            let g = load_graph(&graph)?;
            let g = if dir { to_directed(&g) } else { g };
            let text = serialize_graph(&g);
            let json = json!({
                "n": g.n(),
                "m": g.edges().len(),
                "directed": g.directed(),
                "arity": g.weight_arity(),
                "text": text,
            });
            Ok(Output { text, json })
        }

        Cmd::MaxcapPath {
            graph,
            source,
            target,
            column,
            strategy,
            capmax,
            lazy,
            reachable_threshold,
            targets,
        } => {
            let g = load_graph(&graph)?;
            let (s, t) = (VertexId(source), VertexId(target));
            if let Some(threshold) = reachable_threshold {
                let target_set: Vec<VertexId> = match &targets {
                    Some(list) => parse_vertices(list)?,
                    None => g.vertices().collect(),
                };
                let reach = feasibility_reachable(&g, threshold, s, &target_set, column)?;
                let text = format!(
                    "reachable {}\n",
                    reach.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                );
                let json = json!({"reachable": reach.iter().map(|v| v.0).collect::<Vec<_>>()});
                return Ok(Output { text, json });
            }
            let result: Option<(i64, Vec<VertexId>)> = match strategy {
                PathStrategy::Bsearch => {
                    max_capacity_bsearch(&g, s, t, column)?.map(|r| (r.capacity, r.path))
                }
                PathStrategy::Dijkstra | PathStrategy::Buckets => {
                    let dg = directed_view(&g);
                    let labels = match strategy {
                        PathStrategy::Dijkstra => max_capacity_dijkstra(&dg, &[s], column)?,
                        _ => {
                            let bound = capmax.unwrap_or_else(|| {
                                dg.edges().iter().map(|e| e.weights[column]).max().unwrap_or(0)
                            });
                            max_capacity_buckets(&dg, &[s], column, bound, lazy)?
                        }
                    };
                    labels.path_to(t).map(|p| (labels.capacity(t), p))
                }
            };
            match result {
                None => Ok(Output {
                    text: "unreachable\n".to_string(),
                    json: json!({"reachable": false}),
                }),
                Some((cap, path)) => {
                    let text = format!(
                        "cap {}\npath {}\n",
                        fmt_value(cap),
                        path.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                    );
                    let json = json!({
                        "reachable": true,
                        "cap": json_value(cap),
                        "path": path_json(&path),
                    });
                    Ok(Output { text, json })
                }
            }
        }

        Cmd::MaxcapTree { graph, source, destinations, column, strategy } => {
            let g = load_graph(&graph)?;
            let s = VertexId(source);
            let dests = parse_vertices(&destinations)?;
            let tree = match strategy {
                TreeStrategy::Bsearch => multicast_tree_bsearch(&g, s, &dests, column)?,
                TreeStrategy::Labels => {
                    let dg = directed_view(&g);
                    let labels = max_capacity_dijkstra(&dg, &[s], column)?;
                    multicast_tree_from_labels(&dg, &labels, s, &dests, column)?
                }
            };
            Ok(tree_output(&tree, "cap"))
        }

        Cmd::IndexBuild { graph, column } => {
            let g = load_graph(&graph)?;
            let idx = build_index(&g, column)?;
            let text = idx.serialize();
            let json = json!({
                "n": idx.n(),
                "height": idx.height(),
                "jump": idx.jump(),
                "text": text,
            });
            Ok(Output { text, json })
        }

        Cmd::IndexQuery { index, script, method } => {
            let idx = BottleneckIndex::parse(&read_file(&index)?)?;
            run_index_queries(&idx, &read_file(&script)?, method)
        }

        Cmd::FarthestPath {
            graph,
            obnoxious,
            obnoxious_file,
            source,
            target,
            length_column,
            reduction,
            print_dmin,
        } => {
            let g = load_graph(&graph)?;
            let obn = obnoxious_set(obnoxious, obnoxious_file)?;
            let mut text = String::new();
            let mut dmin_json = Value::Null;
            if print_dmin {
                let d = compute_dmin(&g, &obn, length_column)?;
                let rendered: Vec<String> = d.dmin.iter().map(|&x| fmt_value(x)).collect();
                let _ = writeln!(text, "dmin {}", rendered.join(" "));
                dmin_json = Value::Array(d.dmin.iter().map(|&x| json_value(x)).collect());
            }
            let answer = match reduction {
                Reduction::EdgeMin => {
                    farthest_path(&g, &obn, VertexId(source), VertexId(target), length_column)?
                }
                Reduction::Split => {
                    farthest_path_split(&g, &obn, VertexId(source), VertexId(target), length_column)?
                }
            };
            match answer {
                None => {
                    text.push_str("unreachable\n");
                    Ok(Output { text, json: json!({"reachable": false, "dmin": dmin_json}) })
                }
                Some((safety, path)) => {
                    let _ = writeln!(text, "safety {}", fmt_value(safety));
                    let _ = writeln!(
                        text,
                        "path {}",
                        path.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                    );
                    let json = json!({
                        "reachable": true,
                        "safety": json_value(safety),
                        "path": path_json(&path),
                        "dmin": dmin_json,
                    });
                    Ok(Output { text, json })
                }
            }
        }

        Cmd::FarthestTree {
            graph,
            obnoxious,
            obnoxious_file,
            source,
            destinations,
            length_column,
        } => {
            let g = load_graph(&graph)?;
            let obn = obnoxious_set(obnoxious, obnoxious_file)?;
            let dests = parse_vertices(&destinations)?;
            let tree = farthest_tree(&g, &obn, VertexId(source), &dests, length_column)?;
            Ok(tree_output(&tree, "safety"))
        }

        Cmd::FarthestIndex { graph, obnoxious, obnoxious_file, length_column } => {
            let g = load_graph(&graph)?;
            let obn = obnoxious_set(obnoxious, obnoxious_file)?;
            let idx = build_farthest_index(&g, &obn, length_column)?;
            let text = idx.serialize();
            let json = json!({"n": idx.n(), "height": idx.height(), "text": text});
            Ok(Output { text, json })
        }

        Cmd::Lexpath { graph, spec, source, target, bsearch } => {
            let g = directed_view(&load_graph(&graph)?);
            let spec = AggregatorSpec::parse(&spec)?;
            let s = VertexId(source);
            match target {
                Some(t) => {
                    let t = VertexId(t);
                    let result = if bsearch {
                        first_component_bsearch(&g, &spec, s, t)?
                    } else {
                        let labels = generalized_dijkstra(&g, &spec, &[s])?;
                        labels.vector(t).map(|v| {
                            (v.to_vec(), labels.path_to(t).expect("labeled vertex has a path"))
                        })
                    };
                    match result {
                        None => Ok(Output {
                            text: "unreachable\n".to_string(),
                            json: json!({"reachable": false}),
                        }),
                        Some((vec_, path)) => {
                            let text = format!(
                                "vector {}\npath {}\n",
                                vec_.iter().map(|&x| fmt_value(x)).collect::<Vec<_>>().join(" "),
                                path.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                            );
                            let json = json!({
                                "reachable": true,
                                "vector": vec_.iter().map(|&x| json_value(x)).collect::<Vec<_>>(),
                                "path": path_json(&path),
                            });
                            Ok(Output { text, json })
                        }
                    }
                }
                None => {
                    if bsearch {
                        return Err(CliError::Input(
                            "--bsearch needs a --target".to_string(),
                        ));
                    }
                    let labels = generalized_dijkstra(&g, &spec, &[s])?;
                    let mut text = String::new();
                    let mut rows = Vec::new();
                    for v in g.vertices() {
                        match labels.vector(v) {
                            None => {
                                let _ = writeln!(text, "vertex {v} unreachable");
                                rows.push(json!({"vertex": v.0, "reachable": false}));
                            }
                            Some(vec_) => {
                                let _ = writeln!(
                                    text,
                                    "vertex {v} vector {}",
                                    vec_.iter()
                                        .map(|&x| fmt_value(x))
                                        .collect::<Vec<_>>()
                                        .join(" ")
                                );
                                rows.push(json!({
                                    "vertex": v.0,
                                    "reachable": true,
                                    "vector": vec_.iter().map(|&x| json_value(x)).collect::<Vec<_>>(),
                                }));
                            }
                        }
                    }
                    Ok(Output { text, json: Value::Array(rows) })
                }
            }
        }

        Cmd::KpacketCover { matrix, graph, column, packets, init } => {
            let c = load_costs(matrix, graph, column)?;
            let vinit = parse_vertices(&init)?;
            let sol = kpacket_cover(c.n(), packets, &vinit, &c)?;
            let mut text = format!("cost {}\n", sol.cost);
            for &(f, t) in &sol.moves {
                let _ = writeln!(text, "move {f} {t}");
            }
            let json = json!({
                "cost": sol.cost,
                "moves": sol.moves.iter().map(|&(f, t)| json!([f.0, t.0])).collect::<Vec<_>>(),
            });
            Ok(Output { text, json })
        }

        Cmd::Kflow { matrix, graph, column, flows, init, requests, distinct_flows } => {
            let c = load_costs(matrix, graph, column)?;
            let vinit = parse_vertices(&init)?;
            let reqs = parse_vertices(&requests)?;
            let sol = kflow_requests(c.n(), flows, &vinit, &reqs, &c, distinct_flows)?;
            let mut text = format!("cost {}\n", sol.cost);
            for (i, &from) in sol.serves.iter().enumerate() {
                let _ = writeln!(text, "serve {} from {}", i + 1, from);
            }
            let json = json!({
                "cost": sol.cost,
                "serves": sol.serves.iter().map(|v| v.0).collect::<Vec<_>>(),
            });
            Ok(Output { text, json })
        }

        Cmd::NonlinearChain { chain, coeffs, exps, g, bsearch, budget } => {
            let chain = TypedChain::parse(&read_file(&chain)?)?;
            let coeffs = parse_i64_list(&coeffs)?;
            let exps: Vec<u32> = parse_i64_list(&exps)?.into_iter().map(|e| e as u32).collect();
            if bsearch {
                let cost = nonlinear_bsearch_max(&chain, &coeffs, &exps, budget)?;
                return Ok(Output {
                    text: format!("cost {cost}\n"),
                    json: json!({"cost": cost}),
                });
            }
            let gform = match g {
                GFormArg::Sum => GForm::Sum,
                GFormArg::Max => GForm::Max,
            };
            let cost_fn = AggregateCost::parametric(gform, coeffs, exps)?;
            let (cost, choices) = nonlinear_chain_dp(&chain, &cost_fn, None, budget)?;
            let text = format!(
                "cost {cost}\ntypes {}\n",
                choices.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            );
            Ok(Output { text, json: json!({"cost": cost, "types": choices}) })
        }

        Cmd::NonlinearGraph { graph, sources, destinations, coeffs, exps, g, bounds, budget } => {
            let tg = TypedGraph::parse(&read_file(&graph)?)?;
            let srcs = parse_vertices(&sources)?;
            let dests = parse_vertices(&destinations)?;
            let coeffs = parse_i64_list(&coeffs)?;
            let exps: Vec<u32> = parse_i64_list(&exps)?.into_iter().map(|e| e as u32).collect();
            let bounds = parse_i64_list(&bounds)?;
            let gform = match g {
                GFormArg::Sum => GForm::Sum,
                GFormArg::Max => GForm::Max,
            };
            let cost_fn = AggregateCost::parametric(gform, coeffs, exps)?;
            let answers = nonlinear_graph_sp(&tg, &srcs, &dests, &cost_fn, &bounds, budget)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (d, ans) in dests.iter().zip(&answers) {
                match ans {
                    None => {
                        let _ = writeln!(text, "dest {d} unreachable");
                        rows.push(json!({"dest": d.0, "reachable": false}));
                    }
                    Some(cost) => {
                        let _ = writeln!(text, "dest {d} cost {cost}");
                        rows.push(json!({"dest": d.0, "reachable": true, "cost": cost}));
                    }
                }
            }
            Ok(Output { text, json: Value::Array(rows) })
        }

        Cmd::Pareto {
            graph,
            objectives,
            directions,
            vmax,
            sources,
            destinations,
            weak,
            monotone,
            budget,
        } => {
            let g = directed_view(&load_graph(&graph)?);
            let model = build_cost_model(&objectives, directions.as_deref(), vmax, budget)?;
            let srcs = parse_vertices(&sources)?;
            let dests = parse_vertices(&destinations)?;
            let rule = if weak { DominationRule::Weak } else { DominationRule::Strict };
            if monotone {
                let table = monotone_sp(&g, &model, &srcs)?;
                let front = table.front(&dests, &model, rule);
                let mut text = format!("front {}\n", front.len());
                for t in &front {
                    let _ = writeln!(
                        text,
                        "tuple {}",
                        t.iter().map(|&x| fmt_value(x)).collect::<Vec<_>>().join(" ")
                    );
                }
                let json = json!({
                    "front": front.iter()
                        .map(|t| t.iter().map(|&x| json_value(x)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "discarded": table.discarded,
                });
                return Ok(Output { text, json });
            }
            let states = enumerate_reachable(&g, &model, &srcs)?;
            let front = pareto_front(&states, &dests, &model, rule)?;
            let mut text = format!("front {}\n", front.len());
            let mut rows = Vec::new();
            for e in &front {
                let _ = writeln!(
                    text,
                    "tuple {}",
                    e.scores.iter().map(|&x| fmt_value(x)).collect::<Vec<_>>().join(" ")
                );
                let _ = writeln!(
                    text,
                    "witness {}",
                    e.path.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                );
                rows.push(json!({
                    "tuple": e.scores.iter().map(|&x| json_value(x)).collect::<Vec<_>>(),
                    "vertex": e.vertex.0,
                    "witness": path_json(&e.path),
                }));
            }
            let json = json!({"front": rows, "discarded": states.discarded});
            Ok(Output { text, json })
        }

        Cmd::Connectivity { graph, script, weights, weights_file, ccagg, gagg, validate_only } => {
            let g = load_graph(&graph)?;
            let script = OperationScript::parse(&read_file(&script)?)?;
            if validate_only {
                validate_script(&g, &script)?;
                return Ok(Output { text: "ok\n".to_string(), json: json!({"ok": true}) });
            }
            let w: Vec<i64> = match (weights, weights_file) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Input(
                        "use either --weights or --weights-file, not both".to_string(),
                    ))
                }
                (Some(list), None) => parse_i64_list(&list)?,
                (None, Some(path)) => parse_i64_list(&read_file(&path)?)?,
                (None, None) => vec![1; g.n()],
            };
            let aggs = AggregatorPair::new(ccagg.parse::<CcAgg>()?, gagg.parse::<GAgg>()?);
            let answers = run_offline(&g, &w, &script, &aggs)?;
            let mut text = String::new();
            for a in &answers {
                let _ = writeln!(text, "{a}");
            }
            Ok(Output { text, json: json!({"answers": answers}) })
        }
    }
}

fn obnoxious_set(
    inline: Option<String>,
    file: Option<PathBuf>,
) -> Result<Vec<VertexId>, CliError> {
    match (inline, file) {
        (Some(list), None) => parse_vertices(&list),
        (None, Some(path)) => parse_vertices(&read_file(&path)?),
        _ => Err(CliError::Input(
            "provide exactly one of --obnoxious or --obnoxious-file".to_string(),
        )),
    }
}

/// Farthest path through the vertex-splitting reduction: widest path from
/// `s_in` to `t_out`, with split vertices folded back to original ids.
fn farthest_path_split(
    g: &Graph,
    obnoxious: &[VertexId],
    s: VertexId,
    t: VertexId,
    length_column: usize,
) -> Result<Option<(i64, Vec<VertexId>)>, CliError> {
    let dmin = compute_dmin(g, obnoxious, length_column)?;
    if s == t {
        return Ok(Some((dmin.of(s), vec![s])));
    }
    let n = g.n();
    let split = transform_split(g, &dmin);
    let labels = max_capacity_dijkstra(&split, &[s], 0)?;
    let t_out = VertexId(t.0 + n);
    let Some(split_path) = labels.path_to(t_out) else {
        return Ok(None);
    };
    let mut path: Vec<VertexId> = Vec::new();
    for v in split_path {
        let orig = VertexId(if v.0 > n { v.0 - n } else { v.0 });
        if path.last() != Some(&orig) {
            path.push(orig);
        }
    }
    Ok(Some((labels.capacity(t_out), path)))
}

fn load_costs(
    matrix: Option<PathBuf>,
    graph: Option<PathBuf>,
    column: usize,
) -> Result<CostMatrix, CliError> {
    let raw = match (matrix, graph) {
        (Some(m), None) => CostMatrix::parse(&read_file(&m)?)?,
        (None, Some(gp)) => {
            let g = load_graph(&gp)?;
            let n = g.n();
            let mut entries = vec![INF; n * n];
            for i in 0..n {
                entries[i * n + i] = 0;
            }
            for e in g.edges() {
                let (u, v) = (e.u.0 - 1, e.v.0 - 1);
                let w = e.weights[column];
                entries[u * n + v] = entries[u * n + v].min(w);
                if !g.directed() {
                    entries[v * n + u] = entries[v * n + u].min(w);
                }
            }
            CostMatrix::new(n, entries)?
        }
        _ => return Err(CliError::Input("provide exactly one of --matrix or --graph".to_string())),
    };
    Ok(metric_closure(&raw))
}

fn build_cost_model(
    objectives: &str,
    directions: Option<&str>,
    vmax: i64,
    budget: Option<usize>,
) -> Result<CostModel, CliError> {
    let kinds: Vec<ObjectiveKind> = objectives
        .split(',')
        .map(|t| match t.trim() {
            "sum" | "+" => Ok(ObjectiveKind::Sum),
            "max" => Ok(ObjectiveKind::Max),
            "min" => Ok(ObjectiveKind::Min),
            other => Err(CliError::Input(format!("unknown objective {other:?}"))),
        })
        .collect::<Result<_, _>>()?;
    let mut model = match directions {
        None => CostModel::standard(&kinds, vmax)?,
        Some(dirs) => {
            let prefs: Vec<Preference> = dirs
                .split(',')
                .map(|t| match t.trim() {
                    "smaller" | "less" => Ok(Preference::Smaller),
                    "larger" | "greater" => Ok(Preference::Larger),
                    other => Err(CliError::Input(format!("unknown direction {other:?}"))),
                })
                .collect::<Result<_, _>>()?;
            if prefs.len() != kinds.len() {
                return Err(CliError::Input(
                    "objective and direction lists differ in length".to_string(),
                ));
            }
            let objs = kinds
                .iter()
                .zip(prefs)
                .enumerate()
                .map(|(i, (&k, p))| Objective::standard(k, i, p))
                .collect();
            CostModel::new(objs, vmax)?
        }
    };
    if let Some(b) = budget {
        model.state_budget = b;
    }
    Ok(model)
}

fn run_index_queries(idx: &BottleneckIndex, script: &str, method: QueryMethod) -> CliResult {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (line_no, line) in script.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 3 || f[0] != "query" {
            return Err(CliError::Input(format!(
                "script line {line_no}: expected \"query u v\", got {t:?}"
            )));
        }
        let parse = |s: &str| -> Result<VertexId, CliError> {
            s.parse::<usize>()
                .map(VertexId)
                .map_err(|_| CliError::Input(format!("script line {line_no}: bad vertex {s:?}")))
        };
        let (u, v) = (parse(f[1])?, parse(f[2])?);
        if u == v {
            text.push_str("inf\n");
            rows.push(json!({"u": u.0, "v": v.0, "cap": Value::Null, "connected": true}));
            continue;
        }
        // Disconnected pairs meet only at the super-root.
        if idx.lca(u, v)?.is_none() {
            text.push_str("disconnected cap 0\n");
            rows.push(json!({"u": u.0, "v": v.0, "cap": 0, "connected": false}));
            continue;
        }
        let cap = match method {
            QueryMethod::Levelwise => idx.query_levelwise(u, v)?,
            QueryMethod::Lca => idx.query_via_lca(u, v)?,
        };
        let _ = writeln!(text, "cap {}", fmt_value(cap));
        rows.push(json!({"u": u.0, "v": v.0, "cap": json_value(cap), "connected": true}));
    }
    Ok(Output { text, json: Value::Array(rows) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.render().to_string();
            let first = first.lines().next().unwrap_or("bad usage");
            eprintln!("error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).unwrap()),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Capability(msg)) => {
            eprintln!("error: capability exceeded: {msg}");
            ExitCode::from(2)
        }
    }
}
