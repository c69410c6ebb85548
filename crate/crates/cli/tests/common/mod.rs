#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn monopole<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monopole")).args(args).output().expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub const LINEAR: &str = r#"{
  "particle": {"mass": 1.0, "charge": 1.0},
  "trap": {"omega": 1.0},
  "field": {"type": "linear_z", "mu": 1.0},
  "hbar": 1.0,
  "initial_state": {"mean": {"x": 0, "y": 0, "z": 1, "px": 0, "py": 0, "pz": 0}, "moments": "saturated"},
  "integrator": {"method": "rk4_fixed", "dt": 0.1, "t_end": 0.5}
}"#;

pub const RK4_SPEC: &str = "{\"method\": \"rk4_fixed\", \"dt\": 0.1, \"t_end\": 0.5}";
pub const STIFF_SPEC: &str =
    "{\"method\": \"rk45_adaptive\", \"t_end\": 2, \"rel_tol\": 1e-14, \"abs_tol\": 1e-14, \"dt_min\": 0.5, \"dt_max\": 1}";

pub struct TempConfig {
    _dir: tempfile::TempDir,
    pub path: PathBuf,
}

impl TempConfig {
    pub fn new(text: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, text).unwrap();
        TempConfig { _dir: dir, path }
    }

    pub fn edited(from: &str, to: &str) -> Self {
        assert!(LINEAR.contains(from), "{from}");
        Self::new(&LINEAR.replacen(from, to, 1))
    }

    pub fn arg(&self) -> String {
        self.path.to_str().unwrap().to_string()
    }
}

pub struct GoldenCase {
    pub config: &'static str,
    pub args: &'static [&'static str],
    pub expected: &'static str,
}

pub const GOLDEN: &[GoldenCase] = &[
    GoldenCase { config: "config_linear.json", args: &["stationary"], expected: "stationary.csv" },
    GoldenCase { config: "config_linear.json", args: &["evolve"], expected: "evolve.csv" },
    GoldenCase { config: "config_linear.json", args: &["veff", "--n", "5"], expected: "veff.csv" },
    GoldenCase {
        config: "config_linear.json",
        args: &["--format", "json", "veff", "--z-min", "-2", "--z-max", "1", "--n", "4", "--mode", "original"],
        expected: "veff_original.json",
    },
    GoldenCase { config: "config_linear.json", args: &["jacobiator"], expected: "jacobiator.txt" },
    GoldenCase { config: "config_constant.json", args: &["oracle-check"], expected: "oracle_check.csv" },
    GoldenCase { config: "config_constant.json", args: &["evolve"], expected: "evolve_constant.csv" },
];

/// Runs one golden case; `Err` carries a description of the mismatch.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let config = golden(case.config);
    let mut args = vec!["--config".to_string(), config.to_str().unwrap().to_string()];
    args.extend(case.args.iter().map(|s| s.to_string()));
    let out = monopole(&args);
    if out.status.code() != Some(0) {
        return Err(format!(
            "{:?} exited {:?}: {}",
            case.args,
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let want = std::fs::read(golden(case.expected)).unwrap();
    if out.stdout != want {
        return Err(format!("{} differs", case.expected));
    }
    Ok(())
}

pub struct ExitCase {
    pub name: &'static str,
    pub args: Vec<String>,
    pub code: i32,
}

/// Error-path matrix. The returned configs must outlive the cases.
pub fn exit_cases() -> (Vec<TempConfig>, Vec<ExitCase>) {
    let lin = golden("config_linear.json").to_str().unwrap().to_string();
    let configs = vec![
        TempConfig::new("{ \"particle\": "),
        TempConfig::edited("\"hbar\": 1.0", "\"hbar\": 1.0, \"hbar_bar\": 2"),
        TempConfig::edited("\"mass\": 1.0", "\"mass\": -1.0"),
        TempConfig::edited(&format!(",\n  \"integrator\": {RK4_SPEC}"), ""),
        TempConfig::edited("\"z\": 1", "\"z\": 0"),
        TempConfig::edited("\"z\": 1", "\"z\": -1"),
        TempConfig::edited("\"omega\": 1.0", "\"omega\": 0.0"),
        TempConfig::edited("\"mu\": 1.0", "\"mu\": 0.0"),
        TempConfig::edited(RK4_SPEC, STIFF_SPEC),
        TempConfig::new(
            &LINEAR
                .replace("{\"type\": \"linear_z\", \"mu\": 1.0}", "{\"type\": \"constant_z\", \"b0\": 2.0}")
                .replace("\"dt\": 0.1, \"t_end\": 0.5", "\"dt\": 0.5, \"t_end\": 4"),
        ),
    ];
    let missing = configs[0].path.with_file_name("nope.json").to_str().unwrap().to_string();
    let c: Vec<String> = configs.iter().map(TempConfig::arg).collect();
    let case = |name, args: &[&str], code| ExitCase { name, args: args.iter().map(|s| s.to_string()).collect(), code };
    let cases = vec![
        case("no --config", &["stationary"], 1),
        case("missing file", &["--config", &missing, "stationary"], 1),
        case("malformed json", &["--config", &c[0], "stationary"], 1),
        case("unknown key", &["--config", &c[1], "stationary"], 1),
        case("negative mass", &["--config", &c[2], "jacobiator"], 1),
        case("missing integrator", &["--config", &c[3], "evolve"], 1),
        case("unknown subcommand", &["--config", &lin, "frobnicate"], 1),
        case("bad format", &["--config", &lin, "--format", "xml", "jacobiator"], 1),
        case("veff n=1", &["--config", &lin, "veff", "--n", "1"], 1),
        case("veff reversed range", &["--config", &lin, "veff", "--z-min", "1", "--z-max", "-1"], 1),
        case("oracle on monopole field", &["--config", &lin, "oracle-check"], 1),
        case("saturation at z=0", &["--config", &c[4], "stationary"], 2),
        case("original mode with eB<0", &["--config", &c[5], "stationary", "--mode", "original"], 2),
        case("no trap", &["--config", &c[6], "stationary"], 2),
        case("no trap veff", &["--config", &c[6], "veff"], 2),
        case("vanishing field", &["--config", &c[7], "stationary"], 2),
        case("step underflow", &["--config", &c[8], "evolve"], 2),
        case("oracle mismatch", &["--config", &c[9], "oracle-check"], 2),
        case("help", &["--help"], 0),
    ];
    (configs, cases)
}

pub fn check_exit(case: &ExitCase) -> Result<(), String> {
    let out = monopole(&case.args);
    if out.status.code() != Some(case.code) {
        return Err(format!(
            "{}: expected exit {}, got {:?} ({})",
            case.name,
            case.code,
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    if case.code != 0 && out.stderr.is_empty() {
        return Err(format!("{}: no message on stderr", case.name));
    }
    Ok(())
}
