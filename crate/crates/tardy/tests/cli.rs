use std::process::{Command, Output};

use clap::Parser;
use tardy::bench::Solver;
use tardy::cli::{bench_with, BenchArgs};
use tardy::format::{parse_instance, render_instance};
use tardy::gen::{generate, Family, GenParams};
use tardy_core::model::Algorithm;
use tardy_core::sched::{solve, CostModel, SolverChoice};

fn tardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tardy")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn solve_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "i.txt", "2 2\n2 2\n3 7");
    let o = tardy(&["solve", &f, "--algo", "lm"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "algorithm: lm\nobjective: 2\nearly: 1 3\n");

    let o = tardy(&["solve", &f, "--algo", "conv", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["algorithm"], "conv");
    assert_eq!(v["n"], 3);
    assert_eq!(v["P"], 7);
    assert_eq!(v["d_sharp"], 2);
    assert_eq!(v["objective"], 2);
    assert!(v["wall_time_ms"].is_u64());
    assert_eq!(v.as_object().unwrap().len(), 6);

    let single = write(&dir, "s.txt", "5 9\n");
    assert_eq!(stdout(&tardy(&["solve", &single, "--algo", "sumset"])), "algorithm: sumset\nobjective: 0\n");
}

#[test]
fn solve_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.txt", "x y\n");
    let o = tardy(&["solve", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let zero = write(&dir, "zero.txt", "1 1\n0 3\n");
    let o = tardy(&["solve", &zero]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let many = write(&dir, "many.txt", &"1 100\n".repeat(30));
    assert_eq!(tardy(&["solve", &many, "--algo", "brute"]).status.code(), Some(3));
    assert_eq!(tardy(&["solve", &many, "--algo", "fft"]).status.code(), Some(2));
    assert_eq!(tardy(&["solve", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn auto_uses_config() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "i.txt", "2 2\n2 2\n3 7\n");
    let cfg = write(&dir, "c.toml", "[cost_model]\nsumset = 1e9\nlawler_moore = 1e9\n");
    let o = tardy(&["solve", &f, "--config", &cfg, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["algorithm"], "conv");
    let broken = write(&dir, "b.toml", "[cost_model]\nconv = 0\n");
    assert_eq!(tardy(&["solve", &f, "--config", &broken]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_validated() {
    let args = ["gen", "--n", "3", "--pmax", "5", "--dsharp", "1", "--seed", "7"];
    let a = tardy(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, tardy(&args).stdout);
    let inst = parse_instance(&stdout(&a)).unwrap();
    assert_eq!(inst.len(), 3);
    assert_eq!(inst.distinct_due_dates(), 1);
    let bad = tardy(&["gen", "--n", "3", "--pmax", "5", "--dsharp", "4"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(tardy(&["gen", "--n", "3", "--pmax", "5", "--dsharp", "1", "--family", "zipf"]).status.code(), Some(2));
}

#[test]
fn generated_instances_round_trip() {
    for family in Family::ALL {
        for seed in 0..30 {
            let params = GenParams {
                n: 1 + seed as usize % 17,
                pmax: 1 + seed * 13,
                dsharp: 1,
                seed,
                family,
            };
            let inst = generate(&params).unwrap();
            let text = render_instance(&inst);
            assert_eq!(parse_instance(&text).unwrap(), inst);
            assert_eq!(render_instance(&parse_instance(&text.replace('\n', "\r\n")).unwrap()), text);
        }
    }
}

#[test]
fn bench_rows_and_empty_sizes() {
    let o = tardy(&["bench", "--sizes", "6", "--algos", "lm,conv", "--reps", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algorithm,n,P,d_sharp,D,seed,objective,wall_time_ms");
    assert_eq!(lines.len(), 5);
    assert_eq!(tardy(&["bench", "--sizes"]).status.code(), Some(2));
    assert_eq!(tardy(&["bench"]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = tardy(&[
        "bench",
        "--families",
        "uniform,tight,subsetsum",
        "--sizes",
        "5,9",
        "--algos",
        "brute,lm,sumset,conv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<tardy::bench::BenchRecord> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3 * 2 * 4);
}

#[derive(Parser)]
struct BenchOnly {
    #[command(flatten)]
    bench: BenchArgs,
}

#[test]
fn injected_faulty_solver_exits_4_with_reproducer() {
    let dir = tempfile::tempdir().unwrap();
    let repro = dir.path().join("repro.txt");
    let args = BenchOnly::parse_from(["bench", "--sizes", "9", "--repro", repro.to_str().unwrap()]).bench;
    let faulty = Solver::new("faulty", |inst| {
        let o = solve(inst, SolverChoice::Fixed(Algorithm::Sumset), &CostModel::default())?.objective;
        Ok(if inst.distinct_due_dates() >= 2 { o + 1 } else { o })
    });
    let solvers = vec![Solver::builtin(Algorithm::LawlerMoore), faulty];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(bench_with(&args, solvers, &mut out, &mut err), 4);
    assert!(out.is_empty(), "no CSV on disagreement");
    let text = std::fs::read_to_string(&repro).unwrap();
    assert!(text.starts_with("# solvers disagree"));
    let shrunk = parse_instance(&text).unwrap();
    assert_eq!(shrunk.len(), 2);
    assert_eq!(shrunk.distinct_due_dates(), 2);
}

#[test]
fn kernel_report() {
    let o = tardy(&["bench", "--kernels", "--exponents", "6,7,8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for id in ["maxmin_fast", "maxmin_naive", "skewed_fast", "skewed_naive"] {
        assert!(text.contains(&format!("slope {id}")), "{text}");
    }
}

#[test]
fn selftest_quick_and_replay() {
    let o = tardy(&["selftest", "--quick"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for suite in ["numseq", "maxmin", "skewed", "schedulers"] {
        assert!(text.contains(suite) && text.contains("60/60 ok"), "{text}");
    }
    let o = tardy(&["selftest", "--quick", "--suite", "skewed", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "skewed seed 3 ok\n");
}
