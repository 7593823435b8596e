//! End-to-end checks of the `icsel` binary: output schema and exit codes.

use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Output};

fn icsel<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_icsel"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("sweep.conf");
    std::fs::write(&path, body).unwrap();
    path
}

const SMALL_CONFIG: &str = "\
# quick smoke configuration
n = 200
runs = 2
max_order = 6
coeffs = 0.5, 0.25
sigma2 = 1.0
beta_grid = 0:0.2:0.1
seed = 42
";

#[test]
fn sweep_writes_schema_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);

    let first = icsel(["sweep", "--config", config.to_str().unwrap()]);
    assert!(first.status.success(), "{:?}", first);
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    let mut lines = text.lines();
    for marker in ["# beta_aic=", "# beta_bic=", "# beta_min=", "# beta_max="] {
        let line = lines.next().unwrap();
        assert!(line.starts_with(marker), "expected {marker}, got {line}");
    }
    assert_eq!(
        lines.next().unwrap(),
        "beta,classical_success_pct,nishii_success_pct,\
         mean_pev_classical,mean_pev_nishii,mean_kullback_classical,mean_kullback_nishii"
    );
    assert_eq!(lines.count(), 3, "0:0.2:0.1 spans three grid points");

    let second = icsel(["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout, "same seed, same bytes");
}

#[test]
fn sweep_cli_overrides_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out = dir.path().join("rows.csv");

    let run = icsel([
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--beta-grid",
        "0.1:0.1:0.1",
        "--runs",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{:?}", run);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows.len(),
        2,
        "header plus the single overridden grid point"
    );
    assert!(rows[1].starts_with("0.100000,"));
    assert!(
        rows[1].ends_with(",,"),
        "kullback columns stay empty in sweep mode"
    );
}

#[test]
fn kullback_mode_fills_distance_columns() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out = dir.path().join("ku.csv");

    let run = icsel([
        "kullback",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{:?}", run);
    let text = std::fs::read_to_string(&out).unwrap();
    let row = text.lines().last().unwrap();
    assert!(
        !row.ends_with(','),
        "kullback columns must be populated: {row}"
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "n = 200\nbogus_key = 1\n");
    let run = icsel(["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("bogus_key"));
}

#[test]
fn unstable_model_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "n = 200\nruns = 1\nmax_order = 4\ncoeffs = 1.2\nsigma2 = 1.0\n",
    );
    let run = icsel(["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(4));
}

#[test]
fn texture_runs_on_a_pgm_and_bad_inputs_exit_3() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("absent.pgm");
    let out = dir.path().join("map.csv");
    let run = icsel([
        "texture",
        "--image",
        missing.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(3));

    let corrupt = dir.path().join("corrupt.pgm");
    std::fs::write(&corrupt, b"P7\n4 4\n255\n").unwrap();
    let run = icsel([
        "texture",
        "--image",
        corrupt.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(3));

    let image = dir.path().join("noise.pgm");
    let mut file = std::fs::File::create(&image).unwrap();
    write!(file, "P2\n16 16\n255\n").unwrap();
    let mut state = 11u32;
    for _ in 0..256 {
        state = state.wrapping_mul(1_664_525).wrapping_add(1_013_904_223);
        write!(file, "{} ", state >> 24).unwrap();
    }
    drop(file);

    let run = icsel([
        "texture",
        "--image",
        image.to_str().unwrap(),
        "--max-order",
        "2x2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{:?}", run);
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("QP1 classical"));
    assert!(stdout.contains("QP2 nishii"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "orientation,method,i1,i2,kept"
    );
    assert_eq!(
        text.lines().count(),
        1 + 4 * 8,
        "four maps over a 2x2 universe"
    );
}
