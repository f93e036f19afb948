use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cuweno(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cuweno"));
    cmd.args(args).env_remove("CUWENO_THREADS").env_remove("RAYON_NUM_THREADS");
    if let Some(t) = threads {
        cmd.env("CUWENO_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn out_dir(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_covers_benchmarks_and_schemes() {
    let o = cuweno(&["list"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for p in [
        "multiwave",
        "burgers",
        "buckley-leverett",
        "sod",
        "lax",
        "123",
        "shock-entropy",
        "shock-density",
        "blast",
        "rivp3",
        "dmr",
        "triple-point",
        "shock-diffraction",
    ] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(p)), "missing problem {p}");
    }
    for s in ["za4", "za6", "za8", "za10", "z5", "z7", "ct6"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(s)), "missing scheme {s}");
    }
}

#[test]
fn sod_run_writes_rows_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuweno(&["run", "--problem", "sod", "--scheme", "za6", "-N", "200", "--out", out_dir(dir.path())], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sod.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,rho,u,p"));
    assert_eq!(lines.count(), 200);
    let meta: toml::Table = fs::read_to_string(dir.path().join("sod.meta.toml")).unwrap().parse().unwrap();
    let problem = meta["problem"].as_table().unwrap();
    assert_eq!(problem["cfl"].as_float(), Some(0.45));
    assert_eq!(problem["scheme"].as_str(), Some("za6"));
    assert!(problem.contains_key("weights"));
    let report = meta["report"].as_table().unwrap();
    assert_eq!(report["dt_digest"].as_str().unwrap().len(), 64);
    assert!(report["steps"].as_integer().unwrap() > 0);
    assert!(dir.path().join("sod_error.csv").exists());
}

#[test]
fn overrides_reach_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "run", "--problem", "burgers", "--scheme", "za", "--order", "8", "--p", "1.5", "--eps", "1e-30", "--tau", "tau-prime",
        "--cfl", "0.3", "-N", "40", "--t-final", "0.05", "--out", out_dir(dir.path()),
    ];
    let o = cuweno(&args, None);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta: toml::Table = fs::read_to_string(dir.path().join("burgers.meta.toml")).unwrap().parse().unwrap();
    let problem = meta["problem"].as_table().unwrap();
    assert_eq!(problem["scheme"].as_str(), Some("za8"));
    assert_eq!(problem["cfl"].as_float(), Some(0.3));
    assert_eq!(problem["t_final"].as_float(), Some(0.05));
    let w = problem["weights"].as_table().unwrap();
    assert_eq!(w["power"].as_float(), Some(1.5));
    assert_eq!(w["eps"].as_float(), Some(1e-30));
    assert_eq!(w["tau_variant"].as_str(), Some("tau_prime"));
    assert_eq!(fs::read_to_string(dir.path().join("burgers.csv")).unwrap().lines().count(), 41);
}

#[test]
fn bad_names_suggest_nearest_match() {
    let o = cuweno(&["run", "--problem", "sdo"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("did you mean `sod`"), "{}", stderr(&o));
    let o = cuweno(&["run", "--problem", "sod", "--scheme", "zaa6"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("did you mean"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_dir(dir.path());
    for args in [
        vec!["run", "--out", d],
        vec!["run", "--problem", "dmr", "-N", "100", "--out", d],
        vec!["run", "--problem", "sod", "--nx", "100", "--out", d],
        vec!["run", "--problem", "sod", "--cfl", "1.5", "--out", d],
        vec!["run", "--problem", "sod", "--p", "0.5", "--out", d],
        vec!["run", "--problem", "sod", "--every", "0", "--out", d],
        vec!["run", "--problem", "sod", "--scheme", "z", "--order", "9", "--out", d],
        vec!["coeffs", "-r", "9"],
    ] {
        let o = cuweno(&args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = cuweno(&["run", "--problem", "sod", "--out", d], Some("many"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn overflow_exits_with_blow_up_code() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("overflow.toml");
    fs::write(
        &spec,
        r#"
name = "overflow"
t_final = 0.1
[equation]
kind = "burgers"
[domain]
kind = "one_d"
grid = { a = 0.0, b = 1.0, n = 40 }
left = { kind = "periodic" }
right = { kind = "periodic" }
[initial]
kind = "sine"
mean = 0.0
amplitude = 1e200
wavenumber = 1.0
"#,
    )
    .unwrap();
    let o = cuweno(&["run", "--spec", spec.to_str().unwrap(), "--out", out_dir(dir.path())], None);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("step 1"));
    assert!(stderr(&o).contains("cell"));
}

#[test]
fn unlimited_diffraction_exits_with_positivity_code() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["run", "--problem", "shock-diffraction", "--nx", "104", "--ny", "88", "--positivity", "off", "--out", out_dir(dir.path())];
    let o = cuweno(&args, None);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn snapshots_follow_cadence() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["run", "--problem", "burgers", "-N", "40", "--t-final", "0.05", "--every", "3", "--out", out_dir(dir.path())];
    let o = cuweno(&args, None);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta: toml::Table = fs::read_to_string(dir.path().join("burgers.meta.toml")).unwrap().parse().unwrap();
    let steps = meta["report"]["steps"].as_integer().unwrap() as usize;
    let snaps = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("burgers_step"))
        .count();
    assert!(steps >= 3);
    assert_eq!(snaps, steps / 3 + 1);
}

#[test]
fn two_d_output_is_thread_count_independent() {
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let args = ["run", "--problem", "dmr", "--nx", "80", "--ny", "20", "--t-final", "0.02", "--out", out_dir(dir.path())];
        let o = cuweno(&args, Some(threads));
        assert!(o.status.success(), "{}", stderr(&o));
        let csv = fs::read(dir.path().join("dmr.csv")).unwrap();
        let meta: toml::Table = fs::read_to_string(dir.path().join("dmr.meta.toml")).unwrap().parse().unwrap();
        assert_eq!(meta["threads"].as_integer(), Some(threads.parse().unwrap()));
        files.push(csv);
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.pop().unwrap()).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# density nx=80 ny=20"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn studies_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_dir(dir.path());
    let o = cuweno(&["run", "--study", "critical-points", "--p", "1", "--ncp", "1,2", "--out", d], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("critical_points.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n_cp,inv_dx,error,order"));
    assert_eq!(csv.lines().count(), 13);

    let o = cuweno(&["run", "--study", "adr", "--scheme", "ct6", "--samples", "16", "--out", d], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(dir.path().join("adr_ct6.csv")).unwrap().lines().count(), 17);

    let args = ["run", "--study", "timing", "--nx", "16", "--ny", "16", "--t-final", "0.02", "--schemes", "z7,za6", "--out", d];
    let o = cuweno(&args, None);
    assert!(o.status.success(), "{}", stderr(&o));
    let timing = fs::read_to_string(dir.path().join("timing.csv")).unwrap();
    let rows: Vec<&str> = timing.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("z7,") && rows[2].starts_with("za6,"));
}

#[test]
fn coeff_dump_is_exact() {
    let o = cuweno(&["coeffs", "-r", "3", "--format", "csv", "--verify"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l == "c_full,1/60,-2/15,37/60,37/60,-2/15,1/60"), "{text}");
}
