use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_twistqm");

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn spectrum_lists_fifteen_states() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "[geometry]\nradius = 1.0\nlength = 1.0\n[modes]\nn_max = 3\nl_max = 2\n",
    );
    let out = dir.path().join("s.csv");
    let status = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let rows = data_rows(&fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 15);
    assert_eq!(rows[0][..2], ["1".to_string(), "0".to_string()]);
    let e: f64 = rows[0][2].parse().unwrap();
    assert!((e - 4.80980).abs() < 1e-5);
    let energies: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(energies.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "f.toml",
        "[geometry]\nradius = 1.0\nlength = 1.0\n[twist]\nalpha = 0.7\n[modes]\nl = 1\n\
         [energy]\nmin = -1.0\nmax = 20.0\npoints = 300\n",
    );
    let outputs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|threads| {
            let o = run(&["scatter-free", "--config", cfg.to_str().unwrap(), "--threads", threads]);
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    let json = run(&["scatter-free", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 300);
}

#[test]
fn embedded_sweep_is_blind_to_twist() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "w.toml",
        "command = \"sweep\"\n[geometry]\nradius = 1.0\nlength = 2.0\n[energy]\nmin = -0.3\nmax = 6.0\npoints = 211\n\
         [sweep]\nscenario = \"embedded\"\nalphas = [0.0, 0.5, 1.0]\nls = [1]\nradii = [1.0]\n",
    );
    let o = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 3 * 211);
    let columns: Vec<Vec<String>> = rows.chunks(211).map(|c| c.iter().map(|r| r[5].clone()).collect()).collect();
    assert_eq!(columns[0], columns[1]);
    assert_eq!(columns[0], columns[2]);
    // below V* = 0.375 for l = 1, R = 1
    assert!(rows.iter().any(|r| r[7] == "sub_threshold" && r[5].parse::<f64>().unwrap() == 0.0));
    assert!(rows.iter().filter(|r| r[7] == "ok").all(|r| (r[5].parse::<f64>().unwrap() - 1.0).abs() < 1e-10));
}

#[test]
fn config_errors_exit_one_with_json_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[geometry]\nradius = -2.0\nlength = 1.0\n");
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    let err: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["field"], "geometry.radius");
    assert_eq!(err["line"], 2);

    let ramp = write(
        dir.path(),
        "ramp.toml",
        "[geometry]\nradius = 1.0\nlength = 1.0\n[twist]\nprofile = \"linear-ramp\"\nalpha0 = 0.2\n\
         [energy]\nmin = 0.0\nmax = 1.0\npoints = 3\n",
    );
    assert_eq!(run(&["scatter-embedded", "--config", ramp.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["spectrum"]).status.code(), Some(1));
}

#[test]
fn wavefunction_endpoints_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "wf.toml",
        "[geometry]\nradius = 1.0\nlength = 2.0\n[twist]\nprofile = \"linear-ramp\"\nalpha0 = 0.3\n\
         [modes]\npairs = [[2, 1]]\n[grid]\nphi_points = 8\nz_points = 11\n",
    );
    let o = run(&["wavefunction", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 88);
    for r in rows.iter().take(8).chain(rows.iter().skip(80)) {
        assert_eq!(r[6].parse::<f64>().unwrap(), 0.0);
    }
    let density: Vec<f64> = rows[40..48].iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(density.iter().all(|d| (d - density[0]).abs() < 1e-14));
}

#[test]
fn electron_units_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "e.toml",
        "[physics]\nunits = \"electron_nm_eV\"\nmass = 0.067\n[geometry]\nradius = \"50 A\"\nlength = \"20 nm\"\n\
         [twist]\nalpha = \"0.1 rad/nm\"\n[modes]\nn_max = 1\n",
    );
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    let c = 0.0380998 / 0.067;
    let expected = c * (std::f64::consts::PI / 20.0).powi(2) - c / (4.0 * 25.0);
    let e: f64 = rows[0][2].parse().unwrap();
    assert!((e - expected).abs() < 1e-6 * expected.abs(), "{e} vs {expected}");
}
