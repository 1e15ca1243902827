//! Golden-file tests for the CLI: byte-identical reruns, pinned expected
//! outputs, exit-code contract, and the operation-to-subcommand coverage
//! map.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[String]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_offroute"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn args(parts: &[&str]) -> Vec<String> {
    parts
        .iter()
        .map(|p| match p.strip_prefix("fx:") {
            Some(name) => fixture(name),
            None => p.to_string(),
        })
        .collect()
}

/// Every invocation carries the library operations it exercises; the
/// coverage test below insists the union spans the whole public surface.
const INVOCATIONS: &[(&str, &[&str])] = &[
    (
        "parse_graph,serialize_graph",
        &["graph-normalize", "fx:triangle.txt"],
    ),
    (
        "parse_graph,to_directed,serialize_graph",
        &["graph-normalize", "fx:triangle.txt", "--to-directed"],
    ),
    (
        "max_capacity_dijkstra",
        &["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "3"],
    ),
    (
        "max_capacity_buckets",
        &["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "3", "--strategy", "buckets"],
    ),
    (
        "max_capacity_buckets",
        &["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "3", "--strategy", "buckets", "--lazy"],
    ),
    (
        "max_capacity_bsearch",
        &["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "3", "--strategy", "bsearch"],
    ),
    (
        "feasibility_reachable",
        &["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "1", "--reachable-threshold", "5"],
    ),
    (
        "multicast_tree_from_labels",
        &["maxcap-tree", "fx:multicast4.txt", "-s", "1", "-d", "2 4"],
    ),
    (
        "multicast_tree_bsearch",
        &["maxcap-tree", "fx:multicast4.txt", "-s", "1", "-d", "2 4", "--strategy", "bsearch"],
    ),
    ("build_index", &["index-build", "fx:triangle.txt"]),
    (
        "compute_dmin,transform_edge_min,farthest_path",
        &[
            "farthest-path", "fx:path4.txt", "--obnoxious", "1", "-s", "2", "-t", "4",
            "--print-dmin",
        ],
    ),
    (
        "transform_split",
        &[
            "farthest-path", "fx:path4.txt", "--obnoxious", "1", "-s", "2", "-t", "4",
            "--reduction", "split",
        ],
    ),
    (
        "farthest_tree",
        &["farthest-tree", "fx:path4.txt", "--obnoxious", "1", "-s", "2", "-d", "3 4"],
    ),
    (
        "build_farthest_index",
        &["farthest-index", "fx:path4.txt", "--obnoxious", "1"],
    ),
    (
        "lex_compare,generalized_dijkstra",
        &["lexpath", "fx:lex_fixture.txt", "--spec", "min,sum", "-s", "1", "-t", "3"],
    ),
    (
        "generalized_dijkstra",
        &["lexpath", "fx:lex_fixture.txt", "--spec", "min,sum", "-s", "1"],
    ),
    (
        "first_component_bsearch",
        &["lexpath", "fx:lex_fixture.txt", "--spec", "min,sum", "-s", "1", "-t", "3", "--bsearch"],
    ),
    (
        "metric_closure,kpacket_cover",
        &["kpacket-cover", "--matrix", "fx:matrix_line4.txt", "-k", "2", "--init", "1 2"],
    ),
    (
        "kflow_requests",
        &["kflow", "--matrix", "fx:matrix_line3.txt", "-k", "2", "--init", "1 2", "--requests", "3 1"],
    ),
    (
        "kflow_requests",
        &[
            "kflow", "--matrix", "fx:matrix_line3.txt", "-k", "2", "--init", "1 2",
            "--requests", "3 1", "--distinct-flows",
        ],
    ),
    (
        "nonlinear_chain_dp",
        &["nonlinear-chain", "fx:chain.txt", "--coeffs", "1,1", "--exps", "2,2", "--g", "max"],
    ),
    (
        "nonlinear_bsearch_max",
        &["nonlinear-chain", "fx:chain.txt", "--coeffs", "1,1", "--exps", "2,2", "--bsearch"],
    ),
    (
        "nonlinear_graph_sp",
        &[
            "nonlinear-graph", "fx:typed_graph.txt", "--sources", "1", "--destinations", "3",
            "--coeffs", "1,1", "--exps", "2,2", "--g", "sum", "--bounds", "6",
        ],
    ),
    (
        "enumerate_reachable,pareto_front",
        &[
            "pareto", "fx:pareto_parallel.txt", "--objectives", "sum,sum", "--vmax", "10",
            "--sources", "1", "--destinations", "2",
        ],
    ),
    (
        "monotone_sp",
        &[
            "pareto", "fx:pareto_parallel.txt", "--objectives", "sum,sum", "--vmax", "10",
            "--sources", "1", "--destinations", "2", "--monotone",
        ],
    ),
    (
        "run_offline",
        &[
            "connectivity", "fx:triangle_unit.txt", "fx:script_triangle.txt", "--weights",
            "1 2 3",
        ],
    ),
    (
        "run_offline",
        &[
            "connectivity", "fx:triangle_unit.txt", "fx:script_delvertex.txt",
            "--weights-file", "fx:weights_triangle.txt",
        ],
    ),
    (
        "validate_script",
        &[
            "connectivity", "fx:triangle_unit.txt", "fx:script_triangle.txt",
            "--validate-only",
        ],
    ),
];

/// Criterion 10: every fixture invocation reproduces byte-identically
/// across two consecutive runs (text and JSON forms).
#[test]
fn acceptance_10_golden_determinism() {
    // index-query runs on index-build output, so build the index file once
    // into a temp location first.
    let idx_out = run(&args(&["index-build", "fx:triangle.txt"]));
    assert!(idx_out.status.success());
    let tmp = std::env::temp_dir().join("offroute_golden_index.txt");
    std::fs::write(&tmp, &idx_out.stdout).unwrap();
    let idx_path = tmp.to_str().unwrap().to_string();

    let mut all: Vec<Vec<String>> = INVOCATIONS.iter().map(|(_, a)| args(a)).collect();
    all.push(vec!["index-query".into(), idx_path.clone(), fixture("queries.txt")]);
    all.push(vec![
        "index-query".into(),
        idx_path,
        fixture("queries.txt"),
        "--method".into(),
        "lca".into(),
    ]);

    for argv in &all {
        let first = run(argv);
        assert!(
            first.status.success(),
            "invocation failed: {argv:?}\nstderr: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        let second = run(argv);
        assert_eq!(
            first.stdout, second.stdout,
            "non-deterministic output for {argv:?}"
        );
        let mut json_argv = argv.clone();
        json_argv.push("--format".into());
        json_argv.push("json".into());
        let j1 = run(&json_argv);
        let j2 = run(&json_argv);
        assert!(j1.status.success(), "json invocation failed: {json_argv:?}");
        assert_eq!(j1.stdout, j2.stdout, "non-deterministic json for {json_argv:?}");
    }
    println!("ACCEPTANCE 10 golden-determinism: PASS ({} invocations)", all.len());
}

/// Pinned outputs for the documented examples.
#[test]
fn pinned_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "3"],
            "cap 4\npath 1 3\n",
        ),
        (
            &[
                "connectivity", "fx:triangle_unit.txt", "fx:script_triangle.txt", "--weights",
                "1 2 3",
            ],
            "6\n1\n6\n",
        ),
        (
            &[
                "connectivity", "fx:triangle_unit.txt", "fx:script_delvertex.txt", "--weights",
                "1 2 3",
            ],
            "3\n3\n",
        ),
        (
            &["lexpath", "fx:lex_fixture.txt", "--spec", "min,sum", "-s", "1", "-t", "3"],
            "vector 5 2\npath 1 2 3\n",
        ),
        (
            &["kpacket-cover", "--matrix", "fx:matrix_line4.txt", "-k", "2", "--init", "1 2"],
            "cost 5\nmove 2 3\nmove 3 4\n",
        ),
        (
            &[
                "kflow", "--matrix", "fx:matrix_line3.txt", "-k", "2", "--init", "1 2",
                "--requests", "3 1",
            ],
            "cost 1\nserve 1 from 2\nserve 2 from 1\n",
        ),
        (
            &["nonlinear-chain", "fx:chain.txt", "--coeffs", "1,1", "--exps", "2,2", "--g", "sum"],
            "cost 5\ntypes 1 2\n",
        ),
        (
            &["nonlinear-chain", "fx:chain.txt", "--coeffs", "1,1", "--exps", "2,2", "--g", "max"],
            "cost 4\ntypes 1 2\n",
        ),
        (
            &[
                "pareto", "fx:pareto_parallel.txt", "--objectives", "sum,sum", "--vmax", "10",
                "--sources", "1", "--destinations", "2",
            ],
            "front 2\ntuple 1 3\nwitness 1 2\ntuple 2 1\nwitness 1 2\n",
        ),
        (
            &["farthest-path", "fx:path4.txt", "--obnoxious", "1", "-s", "2", "-t", "4"],
            "safety 1\npath 2 3 4\n",
        ),
        (
            &["graph-normalize", "fx:single_vertex.txt"],
            "1 0 directed 1\n",
        ),
        (
            &["maxcap-path", "fx:two_components.txt", "-s", "1", "-t", "3"],
            "unreachable\n",
        ),
        (
            &["maxcap-path", "fx:triangle.txt", "-s", "2", "-t", "2"],
            "cap inf\npath 2\n",
        ),
    ];
    for (argv, want) in cases {
        let out = run(&args(argv));
        assert!(out.status.success(), "{argv:?} failed");
        assert_eq!(
            String::from_utf8_lossy(&out.stdout),
            *want,
            "output mismatch for {argv:?}"
        );
    }
}

/// Index answers through a build/query pipeline, including the
/// disconnected flag.
#[test]
fn index_query_pipeline() {
    let idx = run(&args(&["index-build", "fx:triangle.txt"]));
    assert!(idx.status.success());
    let tmp = std::env::temp_dir().join("offroute_pipeline_index.txt");
    std::fs::write(&tmp, &idx.stdout).unwrap();
    for method in ["levelwise", "lca"] {
        let out = run(&[
            "index-query".to_string(),
            tmp.to_str().unwrap().to_string(),
            fixture("queries.txt"),
            "--method".to_string(),
            method.to_string(),
        ]);
        assert_eq!(String::from_utf8_lossy(&out.stdout), "cap 4\ncap 4\ninf\n", "{method}");
    }

    let idx2 = run(&args(&["index-build", "fx:two_components.txt"]));
    let tmp2 = std::env::temp_dir().join("offroute_pipeline_index2.txt");
    std::fs::write(&tmp2, &idx2.stdout).unwrap();
    let out = run(&[
        "index-query".to_string(),
        tmp2.to_str().unwrap().to_string(),
        fixture("query_cross.txt"),
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "disconnected cap 0\n");

    // farthest-index output feeds the same query pipeline.
    let fidx = run(&args(&["farthest-index", "fx:path4.txt", "--obnoxious", "1"]));
    let tmp3 = std::env::temp_dir().join("offroute_pipeline_index3.txt");
    std::fs::write(&tmp3, &fidx.stdout).unwrap();
    let q = std::env::temp_dir().join("offroute_pipeline_q.txt");
    std::fs::write(&q, "query 2 4\n").unwrap();
    let out = run(&[
        "index-query".to_string(),
        tmp3.to_str().unwrap().to_string(),
        q.to_str().unwrap().to_string(),
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "cap 1\n");
}

/// Exit-code contract: 0 success, 1 input errors, 2 capability errors.
#[test]
fn exit_codes() {
    let ok = run(&args(&["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "3"]));
    assert_eq!(ok.status.code(), Some(0));

    let unknown = run(&["definitely-not-a-subcommand".to_string()]);
    assert_eq!(unknown.status.code(), Some(1));

    let missing_file = run(&["maxcap-path".to_string(), "/nonexistent".to_string(),
        "-s".to_string(), "1".to_string(), "-t".to_string(), "2".to_string()]);
    assert_eq!(missing_file.status.code(), Some(1));
    assert!(!missing_file.stderr.is_empty());

    let bad_flag = run(&args(&["maxcap-path", "fx:triangle.txt", "-s", "1", "-t", "3", "--strategy", "nope"]));
    assert_eq!(bad_flag.status.code(), Some(1));

    // k above the supported packet cap is a capability error.
    let capability = run(&args(&[
        "kpacket-cover", "--matrix", "fx:matrix_line4.txt", "-k", "5", "--init", "1 1 1 1 2",
    ]));
    assert_eq!(capability.status.code(), Some(2));

    // Script violations are input errors and name the operation.
    let bad_script = std::env::temp_dir().join("offroute_bad_script.txt");
    std::fs::write(&bad_script, "delete 1 2\ndelete 1 2\n").unwrap();
    let violation = run(&[
        "connectivity".to_string(),
        fixture("triangle_unit.txt"),
        bad_script.to_str().unwrap().to_string(),
    ]);
    assert_eq!(violation.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&violation.stderr).contains("operation 1"));
}

/// Every library operation is reachable through at least one subcommand.
#[test]
fn operation_coverage() {
    let expected = [
        // graph-core
        "parse_graph",
        "to_directed",
        "serialize_graph",
        // bottleneck-paths
        "max_capacity_dijkstra",
        "max_capacity_buckets",
        "max_capacity_bsearch",
        "feasibility_reachable",
        "multicast_tree_from_labels",
        "multicast_tree_bsearch",
        // bottleneck-index (query ops covered by the pipeline test)
        "build_index",
        // obnoxious-routing
        "compute_dmin",
        "transform_split",
        "transform_edge_min",
        "farthest_path",
        "farthest_tree",
        "build_farthest_index",
        // lex-dijkstra
        "lex_compare",
        "generalized_dijkstra",
        "first_component_bsearch",
        // k-packet-dp
        "metric_closure",
        "kpacket_cover",
        "kflow_requests",
        // nonlinear-path
        "nonlinear_chain_dp",
        "nonlinear_bsearch_max",
        "nonlinear_graph_sp",
        // pareto-paths
        "enumerate_reachable",
        "pareto_front",
        "monotone_sp",
        // offline-connectivity
        "run_offline",
        "validate_script",
    ];
    let covered: std::collections::HashSet<&str> = INVOCATIONS
        .iter()
        .flat_map(|(ops, _)| ops.split(','))
        .collect();
    for op in expected {
        assert!(covered.contains(op), "operation {op} has no subcommand mapping");
    }
    // query_levelwise, query_via_lca and lca are exercised by
    // index_query_pipeline against built index files.
}
