use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::TempDir;
use tropfit::regression::{fit_with_slopes, Method, SlopeSource};
use tropfit::{Clodum, Dataset, Polynomial, Polytope64, Term};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn tropfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropfit")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = tropfit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = tropfit(args);
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn keys(report: &str) -> HashMap<String, String> {
    report
        .lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .collect()
}

fn num(report: &str, key: &str) -> f64 {
    keys(report)[key].parse().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hoburg_mmae_auto6() {
    let rep = ok(&["fit", s(&data("hoburg.csv")), "--clodum", "max-plus", "--method", "mmae", "--slopes", "auto:6"]);
    let linf = num(&rep, "linf_error");
    assert!((linf - 0.0966).abs() < 0.001, "{linf}");
    assert_eq!(keys(&rep)["terms"], "6");
    assert_eq!(keys(&rep)["slope_source"], "jenks");
    assert!((num(&rep, "mu") - linf).abs() < 1e-12);
    assert!(rep.contains("lse_line: slope="));
}

#[test]
fn mmae_over_max_min_is_a_usage_error() {
    let (c, err) = code(&["fit", s(&data("hoburg.csv")), "--method", "mmae", "--clodum", "max-min"]);
    assert_eq!(c, 2);
    assert!(err.contains("max-plus"), "{err}");
    let (c, err) = code(&["fit", s(&data("hoburg.csv")), "--method", "gle", "--clodum", "max-min"]);
    assert_eq!(c, 1, "hoburg leaves the unit interval: {err}");
    let dir = TempDir::new().unwrap();
    let unit = write(&dir, "unit.csv", "x,f\n0.1,0.3\n0.5,0.5\n0.9,0.9\n");
    assert!(ok(&["fit", &unit, "--method", "gle", "--clodum", "max-min"]).contains("clodum: max-min"));
}

#[test]
fn halfcircle_slope_file_agrees_with_library() {
    let rep = ok(&[
        "fit",
        s(&data("halfcircle.csv")),
        "--method",
        "mmae",
        "--slopes",
        s(&data("halfcircle_slopes.txt")),
    ]);
    assert_eq!(keys(&rep)["terms"], "7");
    assert_eq!(keys(&rep)["slope_source"], "given");
    let xs = vec![-5.5, -2.0, 1.5, 4.0, 6.5];
    let f: Vec<f64> = xs.iter().map(|&x: &f64| 10.0 - (49.0 - x * x).sqrt()).collect();
    let samples = Dataset::new(1, xs, f).unwrap();
    let slopes: Vec<Vec<f64>> = (-3..=3).map(|k| vec![k as f64]).collect();
    let lib = fit_with_slopes(&samples, Clodum::MaxPlus, &slopes, Method::Mmae, SlopeSource::Given).unwrap();
    assert_eq!(num(&rep, "linf_error"), lib.linf_error);
}

#[test]
fn line_and_plane_defaults() {
    let dir = TempDir::new().unwrap();
    let mut csv = String::from("x,y\n");
    for i in 0..20 {
        let x = i as f64 * 0.5;
        csv += &format!("{x},{}\n", (x - 2.0).max(1.0));
    }
    let p = write(&dir, "line.csv", &csv);
    let rep = ok(&["fit", &p]);
    assert_eq!(keys(&rep)["slopes"], "line");
    assert!(num(&rep, "linf_error") < 1e-12);

    let mut csv = String::from("x,y,z\n");
    for i in 0..6 {
        for j in 0..6 {
            let (x, y) = (i as f64, j as f64);
            csv += &format!("{x},{y},{}\n", (x + 1.0).max(y - 2.0).max(0.5));
        }
    }
    let p = write(&dir, "plane.csv", &csv);
    let out = dir.path().join("out");
    let rep = ok(&["fit", &p, "--out", s(&out), "--grid", "5"]);
    assert_eq!(keys(&rep)["slopes"], "plane");
    assert!(num(&rep, "linf_error") < 1e-12);
    let curve = fs::read_to_string(out.join("curve.dat")).unwrap();
    assert_eq!(curve.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).count(), 25);

    let mut csv = String::from("a,b,c,f\n");
    for i in 0..30 {
        let v = i as f64;
        csv += &format!("{v},{},{},{}\n", v * 0.5, -v, v);
    }
    let p = write(&dir, "wide.csv", &csv);
    assert_eq!(code(&["fit", &p]).0, 2);
}

#[test]
fn solve_identity_is_exact() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a", "tropmat 3 3 max-plus\n0 -inf -inf\n-inf 0 -inf\n-inf -inf 0\n");
    let b = write(&dir, "b", "tropmat 3 1 max-plus\n1.5\n-2\n7\n");
    let rep = ok(&["solve", &a, &b]);
    let k = keys(&rep);
    assert_eq!(k["x_hat"], "1.5 -2 7");
    assert_eq!(k["x_tilde"], "1.5 -2 7");
    assert_eq!(k["exact"], "true");
    assert_eq!(k["mu"], "0");
}

#[test]
fn solve_three_by_two() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a", "tropmat 3 2 max-plus\n0 -inf\n-inf 0\n1 1\n");
    let b = write(&dir, "b", "tropmat 3 1 max-plus\n0 0 0\n");
    let k = keys(&ok(&["solve", &a, &b, "--method", "mmae"]));
    assert_eq!(k["x_hat"], "-1 -1");
    assert_eq!(k["residual_gle"], "1 1 0");
    assert_eq!(k["mu"], "0.5");
    assert_eq!(k["x_tilde"], "-0.5 -0.5");
    assert_eq!(k["linf_mmae"], "0.5");
    assert_eq!(k["exact"], "false");
}

#[test]
fn solve_refusals() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a", "tropmat 3 2 max-plus\n0 -inf\n-inf 0\n1 1\n");
    let short = write(&dir, "short", "tropmat 2 1 max-plus\n0\n0\n");
    assert_eq!(code(&["solve", &a, &short]).0, 2);
    let am = write(&dir, "am", "tropmat 2 2 max-min\n1 0\n0 1\n");
    let bm = write(&dir, "bm", "tropmat 2 1 max-min\n0.5\n0.25\n");
    let (c, err) = code(&["solve", &am, &bm, "--method", "mmae"]);
    assert_eq!(c, 2);
    assert!(err.contains("refusing"), "{err}");
    assert_eq!(keys(&ok(&["solve", &am, &bm]))["exact"], "true");
    let bp = write(&dir, "bp", "tropmat 2 1 max-plus\n0.5\n0.25\n");
    assert_eq!(code(&["solve", &am, &bp]).0, 2);
    let bad = write(&dir, "bad", "tropmat 2 1 max-plus\n0.5\n");
    assert_eq!(code(&["solve", &a, &bad]).0, 1);
}

#[test]
fn polytope_join_and_sum_of_examples() {
    let out = ok(&["polytope", s(&data("p1.troppoly")), s(&data("p2.troppoly"))]);
    let sections: Vec<&str> = out.split_terminator(|c| c == '\n').collect();
    let after = |title: &str| -> Vec<String> {
        let i = sections.iter().position(|l| l.starts_with(title)).unwrap();
        sections[i + 1..]
            .iter()
            .take_while(|l| l.starts_with("  "))
            .map(|l| l.trim().to_owned())
            .collect()
    };
    assert_eq!(after("join"), ["-1 0", "0 0", "3 1", "1 2", "-1 1"]);
    assert_eq!(after("minkowski_sum"), ["0 1", "3 1", "3 2", "1 3", "0 3"]);
    assert_eq!(after(&format!("newton {}", s(&data("p1.troppoly")))), ["1 1", "3 1", "1 2"]);
}

#[test]
fn polytope_single_term_and_high_dimension() {
    let dir = TempDir::new().unwrap();
    let one = write(&dir, "one", "troppoly 2 max max-plus\n2 5 | 1.5\n");
    assert!(ok(&["polytope", &one]).contains(": 1 vertices\n  2 5\n"));
    let three = write(&dir, "three", "troppoly 3 max max-plus\n0 0 0 | 0\n1 0 0 | 0\n0 1 0 | 0\n");
    let out = ok(&["polytope", &three]);
    assert!(out.contains("3 generators") && out.contains("notice"), "{out}");
}

fn random_poly(rng: &mut impl Rng) -> Polynomial {
    let k = rng.gen_range(1..7);
    let terms = (0..k)
        .map(|_| Term::new(vec![rng.gen_range(-4..5) as f64, rng.gen_range(-4..5) as f64], rng.gen_range(-3.0..3.0)))
        .collect();
    Polynomial::new(Clodum::MaxPlus, tropfit::Orientation::Max, 2, terms).unwrap()
}

fn listed(out: &str, title: &str) -> Vec<Vec<f64>> {
    let lines: Vec<&str> = out.lines().collect();
    let i = lines.iter().position(|l| l.starts_with(title)).unwrap();
    lines[i + 1..]
        .iter()
        .take_while(|l| l.starts_with("  "))
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect()
}

#[test]
fn polytope_pipeline_matches_library() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for round in 0..20 {
        let (p, q) = (random_poly(&mut rng), random_poly(&mut rng));
        let fp = write(&dir, &format!("p{round}"), &p.to_text());
        let fq = write(&dir, &format!("q{round}"), &q.to_text());
        let out = ok(&["polytope", &fp, &fq]);
        let (np, nq) = (p.newton_polytope().unwrap(), q.newton_polytope().unwrap());
        let join: Polytope64 = np.join(&nq).unwrap();
        let sum = np.minkowski_sum(&nq).unwrap();
        assert_eq!(listed(&out, "join"), join.vertices(), "round {round}");
        assert_eq!(listed(&out, "minkowski_sum"), sum.vertices(), "round {round}");
    }
}

#[test]
fn csv_errors() {
    let dir = TempDir::new().unwrap();
    let ragged = write(&dir, "ragged.csv", "x,y\n1,2\n3,4\n5\n");
    let (c, err) = code(&["fit", &ragged]);
    assert_eq!(c, 1);
    assert!(err.contains(":4:"), "{err}");
    let empty = write(&dir, "empty.csv", "");
    assert_eq!(code(&["fit", &empty]).0, 1);
    let nan = write(&dir, "nan.csv", "x,y\n1,NaN\n");
    assert_eq!(code(&["fit", &nan]).0, 1);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let mut csv = String::from("u,v,w\n");
    for i in 0..12 {
        for j in 0..12 {
            let (x, y) = (i as f64 / 11.0 * 4.0 - 2.0, j as f64 / 11.0 * 4.0 - 2.0);
            csv += &format!("{x},{y},{}\n", x * x + y * y);
        }
    }
    let p = write(&dir, "bowl.csv", &csv);
    let (o1, o2) = (dir.path().join("o1"), dir.path().join("o2"));
    let r1 = ok(&["fit", &p, "--slopes", "auto:5", "--seed", "11", "--out", s(&o1)]);
    let r2 = ok(&["fit", &p, "--slopes", "auto:5", "--seed", "11", "--out", s(&o2)]);
    assert_eq!(r1, r2);
    assert_eq!(keys(&r1)["slope_source"], "kmeans");
    for f in ["report.txt", "model.troppoly", "curve.dat", "residuals.dat"] {
        assert_eq!(fs::read(o1.join(f)).unwrap(), fs::read(o2.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn model_round_trip_is_bit_exact() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    ok(&["fit", s(&data("hoburg.csv")), "--method", "mmae", "--slopes", "auto:6", "--out", s(&out)]);
    let model = out.join("model.troppoly");
    let evaled = ok(&["eval", s(&model), s(&data("hoburg.csv"))]);
    let residuals = fs::read_to_string(out.join("residuals.dat")).unwrap();
    let pred: Vec<&str> = residuals.lines().skip(1).map(|l| l.split(' ').nth(2).unwrap()).collect();
    let vals: Vec<&str> = evaled.lines().skip(1).map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(pred.len(), 100);
    assert_eq!(pred, vals);

    let parsed: Polynomial = fs::read_to_string(&model).unwrap().parse().unwrap();
    for line in residuals.lines().skip(1) {
        let cols: Vec<f64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(parsed.eval(&cols[..1]).unwrap().to_bits(), cols[2].to_bits());
    }
}

#[test]
fn eval_flags_variety_points() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m", "troppoly 1 max max-plus\n1 | 0\n0 | 2\n");
    let pts = write(&dir, "pts.csv", "x\n2\n5\n-inf\n");
    let out = ok(&["eval", &model, &pts]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows, ["2 2 1", "5 5 0", "-inf 2 0"]);
    let wrong = write(&dir, "wrong.csv", "x,y,z\n1,2,3\n");
    assert_eq!(code(&["eval", &model, &wrong]).0, 2);
}

#[test]
fn sweep_lists_every_k() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    let rep = ok(&["fit", s(&data("hoburg.csv")), "--sweep-k", "2:6", "--out", s(&out)]);
    let k = keys(&rep);
    let linf: Vec<f64> = (2..=6)
        .map(|i| k[&format!("k[{i}]")].split("linf=").nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(linf.last().unwrap() < linf.first().unwrap(), "{linf:?}");
    assert_eq!(fs::read_to_string(out.join("sweep.dat")).unwrap().lines().count(), 6);
    assert_eq!(code(&["fit", s(&data("hoburg.csv")), "--sweep-k", "5:2"]).0, 2);
}
