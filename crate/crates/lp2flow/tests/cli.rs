use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lp2flow::arith::int;
use lp2flow::io::{serialize, Document};
use lp2flow::model::{Instance, LpInstance, Solution, SparseIntMatrix};
use tempfile::TempDir;

fn lp2flow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lp2flow"))
        .args(args)
        .env("LP2FLOW_SIZE_GUARD", "1000000000")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, doc: &Document) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serialize(doc)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// x <= 1, x >= 1, feasible at x = 1.
fn tiny_lp() -> LpInstance {
    LpInstance {
        a: SparseIntMatrix::from_dense(&[vec![1]]),
        b: vec![int(1)],
        c: vec![int(1)],
        k: int(1),
        r: int(1),
    }
}

#[test]
fn pipeline_oracle_mapback_verify() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "lp.json", &Document::Instance(Instance::Lp(tiny_lp())));
    let cf = dir.path().join("2cf.json");
    let trace = dir.path().join("trace.json");
    let flow = dir.path().join("flow.json");
    let x = dir.path().join("x.json");

    let out = lp2flow(&["pipeline", "--eps-lp", "0", s(&lp), "-o", s(&cf), "--trace", s(&trace)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = lp2flow(&["oracle", "2cf", s(&cf), "-o", s(&flow)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = lp2flow(&["mapback", "--all", s(&cf), s(&flow), "--trace", s(&trace), "-o", s(&x)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = lp2flow(&["verify", "--class", "lpa", "--eps", "0", s(&lp), s(&x)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn witness_of_len_stage_verifies_exactly() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "lp.json", &Document::Instance(Instance::Lp(tiny_lp())));
    let x = write(
        &dir,
        "x.json",
        &Document::Solution(Solution::Vector(vec![lp2flow::arith::rat(1)])),
    );
    let len = dir.path().join("len.json");
    let w = dir.path().join("w.json");
    assert_eq!(
        code(&lp2flow(&["reduce", "--stage", "lp-len", s(&lp), "-o", s(&len)])),
        0
    );
    assert_eq!(
        code(&lp2flow(&["witness", "--stage", "lp-len", s(&lp), s(&x), "-o", s(&w)])),
        0
    );
    let out = lp2flow(&["verify", "--class", "lena", "--eps", "0", s(&len), s(&w)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn failed_verification_exits_one() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "lp.json", &Document::Instance(Instance::Lp(tiny_lp())));
    let x = write(
        &dir,
        "x.json",
        &Document::Solution(Solution::Vector(vec![lp2flow::arith::rat(2)])),
    );
    assert_eq!(
        code(&lp2flow(&["verify", "--class", "lpa", "--eps", "0", s(&lp), s(&x)])),
        1
    );
}

#[test]
fn malformed_file_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"schema\": \"lp\", \"version\": 1").unwrap();
    let out = lp2flow(&["stats", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(code(&lp2flow(&["reduce"])), 2);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "lp.json", &Document::Instance(Instance::Lp(tiny_lp())));
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(code(&lp2flow(&["reduce", "--all", s(&lp), "-o", s(&a)])), 0);
    assert_eq!(code(&lp2flow(&["reduce", "--all", s(&lp), "-o", s(&b)])), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
