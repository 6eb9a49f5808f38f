//! The command line, driven in-process, against the published JSON schema.

use std::path::{Path, PathBuf};

use msnlab::cli::{run_with, EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use msnlab::graphs::{parse_edge_list, DiGraph};
use msnlab::msn::{figure1_network, SwitchingNetwork};
use msnlab::reduce::ReductionCertificate;
use msnlab::search::figure2_graph;
use serde_json::Value;
use tempfile::TempDir;

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/cli-schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) if n.is_i64() || n.is_u64() => "integer",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// The subset of JSON Schema the document uses: `type`, `required`,
/// `properties`, `items`, `enum`, `const` and local `$ref`.
fn validate(root: &Value, schema: &Value, v: &Value, at: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let target = r.trim_start_matches("#/").split('/').fold(root, |s, k| &s[k]);
        return validate(root, target, v, at);
    }
    let actual = type_name(v);
    if let Some(t) = schema.get("type") {
        let allowed: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{at}: bad type keyword")),
        };
        let ok = allowed.iter().any(|&a| a == actual || (a == "number" && actual == "integer"));
        if !ok {
            return Err(format!("{at}: expected {allowed:?}, found {actual}"));
        }
    }
    if let Some(c) = schema.get("const") {
        if c != v {
            return Err(format!("{at}: expected {c}, found {v}"));
        }
    }
    if let Some(e) = schema.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            return Err(format!("{at}: {v} not in {e:?}"));
        }
    }
    if let Value::Object(map) = v {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !map.contains_key(key) {
                return Err(format!("{at}: missing `{key}`"));
            }
        }
        if let Some(props) = schema.get("properties").and_then(Value::as_object) {
            for (k, sub) in props {
                if let Some(x) = map.get(k) {
                    validate(root, sub, x, &format!("{at}.{k}"))?;
                }
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (v, schema.get("items")) {
        for (i, x) in items.iter().enumerate() {
            validate(root, sub, x, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut full = vec!["msnlab"];
    full.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(full, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

/// Runs with `--json` and checks the report against the schema.
fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let r = run(&full);
    let v: Value = serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}\n{}", r.out, r.err));
    let root = schema();
    let sub = if r.code == EXIT_USAGE || (r.code == EXIT_BUDGET && v.get("command").is_none()) {
        &root["error"]
    } else {
        &root["commands"][args[0]]
    };
    assert!(sub.is_object(), "no schema for {}", args[0]);
    validate(&root, sub, &v, "$").unwrap_or_else(|e| panic!("{args:?}: {e}\n{v:#}"));
    (r.code, v)
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files { dir: TempDir::new().unwrap() }
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn graph(&self, name: &str, edges: &[(&str, &str)]) -> String {
        self.put(name, &DiGraph::from_edges(edges.iter().copied()).unwrap().to_string())
    }
}

#[test]
fn dplen_matches_brute_force() {
    let f = Files::new();
    let star = f.graph("star.txt", &[("r", "a"), ("r", "b"), ("r", "c")]);
    let (code, v) = run_json(&["dplen", &star, "--brute"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["p"], 3);
    assert_eq!(v["brute_force"], 3);
    assert_eq!(v["witness_valid"], true);
    let r = run(&["dplen", &star, "--root", "a"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("p(H)=3"));
    assert_eq!(run(&["dplen", &star, "--root", "zz"]).code, EXIT_USAGE);
    let cyc = f.graph("cycle.txt", &[("a", "b"), ("b", "c"), ("c", "a")]);
    assert_eq!(run_json(&["dplen", &cyc]).0, EXIT_USAGE);
}

#[test]
fn bounds_reports_every_profile() {
    let f = Files::new();
    let g = f.graph("g.txt", &[("s", "a"), ("a", "b"), ("b", "t"), ("a", "x"), ("y", "b")]);
    let (code, v) = run_json(&["bounds", &g, "--compare"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["ell"], 3);
    assert_eq!(v["n"], 6);
    assert!(v["profiles"].as_array().unwrap().len() >= 5);
    assert!(!v["comparisons"].as_array().unwrap().is_empty());
    let (_, v) = run_json(&["bounds", &g, "--theorem", "T5.1"]);
    assert_eq!(v["profiles"].as_array().unwrap().len(), 1);
    assert_eq!(run_json(&["bounds", &g, "--theorem", "T9.9"]).0, EXIT_USAGE);
    let none = f.graph("none.txt", &[("t", "s")]);
    assert_eq!(run_json(&["bounds", &none]).0, EXIT_USAGE);
}

#[test]
fn network_verdicts() {
    let f = Files::new();
    let fig1 = f.put("fig1.net", &figure1_network().to_string());
    let path = f.graph("path.txt", &[("s", "a"), ("a", "t")]);
    let (code, v) = run_json(&["accepts", &fig1, &path]);
    assert_eq!((code, v["accepted"].as_bool()), (EXIT_OK, Some(true)));
    let empty = f.put("empty.txt", "vertex a\nvertex b\n");
    let (code, v) = run_json(&["accepts", &fig1, &empty]);
    assert_eq!((code, v["accepted"].as_bool()), (EXIT_NEGATIVE, Some(false)));

    let (code, v) = run_json(&["sound", &fig1]);
    assert_eq!((code, v["sound"].as_bool()), (EXIT_OK, Some(true)));
    assert_eq!(run_json(&["sound", &fig1, "--cuts"]).0, EXIT_OK);
    assert_eq!(run_json(&["complete", &fig1]).0, EXIT_OK);

    // One unlabeled edge accepts everything, including the empty graph.
    let bad = f.put("bad.net", "s' -- t' : *\n");
    let Ok(net) = SwitchingNetwork::parse(&std::fs::read_to_string(&bad).unwrap()) else {
        panic!("fixture network must parse");
    };
    assert_eq!(net.size(), 2);
    let (code, v) = run_json(&["sound", &bad, "--universe", "4"]);
    assert_eq!(code, EXIT_NEGATIVE);
    let w = serde_json::from_value::<DiGraph>(v["witness"]["graph"].clone()).unwrap();
    assert_eq!(w.edge_count(), 0);
    assert_eq!(run_json(&["complete", &bad, "--universe", "4"]).0, EXIT_OK);
    assert_eq!(run_json(&["sound", &bad, "--universe", "1"]).0, EXIT_USAGE);

    let garbage = f.put("garbage.net", "this is not a network\n");
    assert_eq!(run_json(&["sound", &garbage]).0, EXIT_USAGE);
    assert_eq!(run_json(&["sound", "/nonexistent/file"]).0, EXIT_USAGE);
}

#[test]
fn sigma_round_trips_members() {
    let f = Files::new();
    let g = f.put("fig2.txt", &figure2_graph().to_string());
    let (code, v) = run_json(&["sigma", &g]);
    assert_eq!(code, EXIT_OK);
    let members: Vec<DiGraph> = serde_json::from_value(v["members"].clone()).unwrap();
    assert_eq!(v["count"], members.len());
    assert_eq!(members[0], figure2_graph());
    let (_, v) = run_json(&["sigma", &g, "--count"]);
    assert!(v["members"].is_null());
    let name = figure2_graph().names()[2].clone();
    let (_, fixed) = run_json(&["sigma", &g, "--count", "--fixed", &name]);
    assert!(fixed["count"].as_u64() <= v["count"].as_u64());
    assert_eq!(run_json(&["sigma", &g, "--budget", "1"]).0, EXIT_BUDGET);
    // The text summary re-parses member by member.
    let text = run(&["sigma", &g]).out;
    let parsed: Vec<DiGraph> =
        text.split("# member ").skip(1).map(|chunk| parse_edge_list(chunk.split_once('\n').unwrap().1).unwrap()).collect();
    assert_eq!(parsed, members);
}

#[test]
fn min_msn_values_and_budget() {
    let f = Files::new();
    let st = f.graph("st.txt", &[("s", "t")]);
    let (code, v) = run_json(&["min-msn", &st]);
    assert_eq!((code, v["m"].as_u64()), (EXIT_OK, Some(2)));
    let sat = f.graph("sat.txt", &[("s", "a"), ("a", "t")]);
    let (_, v) = run_json(&["min-msn", "--sigma", &sat]);
    assert_eq!(v["m"], 3);
    let witness = SwitchingNetwork::parse(v["witness"].as_str().unwrap()).unwrap();
    assert_eq!(witness.size(), 3);
    assert!(witness.is_sound_by_cuts().unwrap().sound);

    let fig2 = f.put("fig2.txt", &figure2_graph().to_string());
    let (code, v) = run_json(&["min-msn", "--sigma", &fig2, "--max-size", "3"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(v["m"].is_null());
    assert!(v["lower"].as_u64().unwrap() >= 4);
    let big = f.graph("big.txt", &[("s", "a"), ("a", "b"), ("b", "c"), ("c", "t")]);
    assert_eq!(run_json(&["min-msn", &big]).0, EXIT_BUDGET);
    assert_eq!(run_json(&["min-msn", "--sigma", &st, &sat]).0, EXIT_USAGE);
}

#[test]
fn reduce_then_check_cert() {
    let f = Files::new();
    let tree = f.graph("tree.txt", &[("s", "a"), ("a", "t"), ("a", "x"), ("y", "t"), ("z", "y"), ("z", "w")]);
    let out = f.path("certs.json");
    let (code, v) = run_json(&["reduce", &tree, "--kind", "tree", "-o", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 3);
    let (code, v) = run_json(&["check-cert", out.to_str().unwrap()]);
    assert_eq!((code, v["valid"].as_bool()), (EXIT_OK, Some(true)));

    // Tamper with one recorded digest.
    let mut certs: Vec<ReductionCertificate> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let last = certs[0].fingerprints.len() - 1;
    certs[0].fingerprints[last] = "00".repeat(32);
    let bad = f.put("bad.json", &serde_json::to_string(&certs).unwrap());
    let (code, v) = run_json(&["check-cert", &bad]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["checks"][0]["failure"]["reason"], "fingerprint");
    // A single certificate object works too.
    let one = f.put("one.json", &serde_json::to_string(&certs[1]).unwrap());
    assert_eq!(run_json(&["check-cert", &one]).0, EXIT_OK);
    let junk = f.put("junk.json", "{\"nope\": 1}");
    assert_eq!(run_json(&["check-cert", &junk]).0, EXIT_USAGE);

    let host = f.graph("host.txt", &[("s", "t")]);
    let h = f.graph("h.txt", &[("r", "a"), ("r", "b"), ("c", "b")]);
    for kind in ["sqrt", "dplen"] {
        let (code, v) = run_json(&["reduce", &host, "--kind", kind, "--with", &h]);
        assert_eq!(code, EXIT_OK, "{kind}");
        let end: DiGraph = serde_json::from_value(v["certificates"][0]["end"].clone()).unwrap();
        assert!(end.vertex_count() >= 2);
    }
    assert_eq!(run_json(&["reduce", &host, "--kind", "sqrt"]).0, EXIT_USAGE);

    let (code, v) = run_json(&["reduce", &tree, "--kind", "upper"]);
    assert_eq!((code, v["final_invariant"].as_bool()), (EXIT_OK, Some(true)));
    // With ℓ = 2 no index is defined.
    let short = f.graph("short.txt", &[("s", "a"), ("a", "t"), ("a", "b")]);
    assert_eq!(run_json(&["reduce", &short, "--kind", "flowout"]).0, EXIT_USAGE);
    let fo = f.graph("fo.txt", &[("s", "a"), ("a", "b"), ("b", "t"), ("a", "x"), ("s", "c")]);
    let (code, v) = run_json(&["reduce", &fo, "--kind", "flowout", "--index", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["certificates"][0]["metadata"]["case"], "i1");
    assert_eq!(run_json(&["reduce", &fo, "--kind", "flowout", "--index", "9"]).0, EXIT_USAGE);
}

#[test]
fn construct_small_instance() {
    let f = Files::new();
    let out = f.path("net.txt");
    let (code, v) = run_json(&["construct-a", "--n", "10", "--ell", "3", "--c", "300", "--relaxed", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["swept"], 420);
    assert_eq!(v["rejected"], 0);
    assert_eq!(v["p"], "1/64");
    let net = SwitchingNetwork::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(net.size(), 2 + 300 * 2);
    // Two paths cannot cover 420 members.
    let (code, v) = run_json(&["construct-a", "--n", "10", "--ell", "3", "--c", "2", "--relaxed"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["draws"].as_array().unwrap().len(), 5);
    assert_eq!(run_json(&["construct-a", "--n", "10", "--ell", "3"]).0, EXIT_USAGE);
}

#[test]
fn bench_rows() {
    let (code, v) = run_json(&["bench", "--sizes", "100,1000", "--reps", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(run_json(&["bench", "--sizes", "1000,100"]).0, EXIT_USAGE);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&[]).code, EXIT_USAGE);
    assert_eq!(run(&["--threads", "0", "bench", "--sizes", "10"]).code, EXIT_USAGE);
    let help = run(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    for cmd in ["bounds", "dplen", "accepts", "sound", "complete", "sigma", "min-msn", "reduce", "check-cert", "construct-a", "bench"] {
        assert!(help.out.contains(cmd), "{cmd} missing from help");
    }
}
