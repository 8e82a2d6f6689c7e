//! End-to-end checks of the binary: exit codes, output schemas, byte
//! determinism, config precedence, and figure presets.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_giantatom"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Data rows of a CSV artifact: everything after the header line that
/// follows the `#` metadata block.
fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn identical_config_gives_identical_bytes() {
    let a = tmp("det_a.csv");
    let b = tmp("det_b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "spectrum",
            "--set",
            "n_atoms=2",
            "--set",
            "delta=0.36",
            "--set",
            "g0=0.6",
            "--set",
            "d=3",
            "--set",
            "z=3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_exit(&out, 0);
    }
    let bytes_a = fs::read(&a).unwrap();
    let bytes_b = fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn spectrum_schema_round_trips() {
    let path = tmp("schema.csv");
    let out = run(&[
        "spectrum",
        "--set",
        "delta=-0.6",
        "--set",
        "g0=2.7",
        "--set",
        "d=1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# giantatom-csv v1\n# schema = spectrum-v1\n"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "sweep_value,energy,class,boc_type,channel,residue_re,residue_im");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2, "two bound states expected at this point");
    for row in &rows {
        assert_eq!(row.len(), 7);
        let energy: f64 = row[1].parse().unwrap();
        assert!(energy.abs() > 2.0);
        assert_eq!(row[2], "boc");
        let residue: f64 = row[5].parse().unwrap();
        assert!(residue > 0.0 && residue <= 1.0);
        assert_eq!(row[6].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn flags_override_config_file() {
    let conf = tmp("override.conf");
    fs::write(
        &conf,
        "mode = dynamics\nn_atoms = 1\ndelta = -0.6\ng0 = 1.2\nd = 1\ndt = 0.05\nt_max = 10\n",
    )
    .unwrap();
    let path = tmp("override.csv");
    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "--dt",
        "0.25",
        "--t-max",
        "0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("# dt = 0.25\n"), "flag value must win over the file");
    assert!(text.contains("# t_max = 0.5\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 3, "grid 0, 0.25, 0.5");
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 1.0, "population starts at one");
}

#[test]
fn steady_sweep_parses_back() {
    let path = tmp("steady.csv");
    let out = run(&[
        "steady",
        "--set",
        "sweep=delta",
        "--set",
        "sweep_start=-0.2",
        "--set",
        "sweep_stop=0.2",
        "--set",
        "sweep_step=0.1",
        "--set",
        "g0=0.8",
        "--set",
        "d=3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("# schema = steady-v1\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 5, "sweep_value, min, mean, max, frequencies");
        let v: f64 = row[0].parse().unwrap();
        assert!((v - (-0.2 + 0.1 * i as f64)).abs() < 1e-12);
        let min: f64 = row[1].parse().unwrap();
        let mean: f64 = row[2].parse().unwrap();
        let max: f64 = row[3].parse().unwrap();
        assert!(0.0 <= min && min <= mean && mean <= max && max <= 1.0);
        for part in row[4].split(';').filter(|s| !s.is_empty()) {
            assert!(part.parse::<f64>().unwrap() >= 0.0);
        }
    }
}

#[test]
fn dynamics_emits_concurrence_for_two_atoms() {
    let path = tmp("conc.csv");
    let out = run(&[
        "dynamics",
        "--set",
        "n_atoms=2",
        "--set",
        "delta=0.36",
        "--set",
        "g0=0.6",
        "--set",
        "d=3",
        "--set",
        "z=3",
        "--solvers",
        "volterra,ww",
        "--dt",
        "0.5",
        "--t-max",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let text = fs::read_to_string(&path).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    let cols: Vec<&str> = header.split(',').collect();
    assert_eq!(cols[0], "t");
    assert!(cols.contains(&"volterra_concurrence"));
    assert!(cols.contains(&"ww_concurrence"));
    assert_eq!(cols.len(), 1 + 2 * 7, "per solver: 2 atoms x (re, im, pop) + concurrence");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    for row in &rows {
        assert_eq!(row.len(), cols.len());
    }
}

#[test]
fn figure_preset_reproduces_caption_parameters() {
    let dir = tmp("fig2a");
    let out = run(&["figure", "fig2a", "--dt", "0.1", "--t-max", "2", "--out", dir.to_str().unwrap()]);
    assert_exit(&out, 0);
    for g0 in ["0.4", "1.2", "2.7"] {
        let text = fs::read_to_string(dir.join(format!("fig2a_g0_{g0}.csv"))).unwrap();
        assert!(text.contains("# preset = fig2a\n"));
        assert!(text.contains("# delta = -0.6\n"));
        assert!(text.contains(&format!("# g0 = {g0}\n")));
        assert!(text.contains("# d = 1\n"));
        assert!(!data_rows(&text).is_empty());
    }
}

#[test]
fn bad_inputs_exit_with_config_error() {
    let conf = tmp("bad.conf");
    fs::write(&conf, "mode = dynamics\nnonsense_key = 3\n").unwrap();
    assert_exit(&run(&["--config", conf.to_str().unwrap()]), 2);

    assert_exit(&run(&["figure", "fig99"]), 2);

    // no mode anywhere
    assert_exit(&run(&["--set", "delta=0.1"]), 2);

    // flat-band decay needs an in-band detuning
    assert_exit(
        &run(&["dynamics", "--solvers", "markov", "--set", "delta=3", "--dt", "0.5", "--t-max", "1"]),
        2,
    );

    // invalid physical parameters
    assert_exit(&run(&["spectrum", "--set", "g0=-1"]), 2);
}

#[test]
fn validate_reports_all_suites_passing() {
    let path = tmp("validate.csv");
    let out = run(&["validate", "--out", path.to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("# schema = validate-v1\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 8);
    for row in &rows {
        assert_eq!(row[1], "pass", "suite {} failed: measured {}", row[0], row[2]);
        let measured: f64 = row[2].parse().unwrap();
        let tolerance: f64 = row[3].parse().unwrap();
        assert!(measured <= tolerance);
    }
}
