//! Subcommands.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use monopole_moments::{
    build_linear_system, evolve, jacobiator, residual, saturate_with, veff_report, FieldModel, MomentState, Params,
    SaturationMode, Trajectory, VeffReport,
};
use serde_json::{json, Map, Value};

use crate::config::{mean_names, moment_names, Format, MomentsSpec, RunConfig};
use crate::format::{csv_header, csv_row, num};
use crate::CliError;

/// Maximum relative deviation accepted by `oracle-check`.
pub const ORACLE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "monopole", version, about = "Semiclassical moment dynamics in a magnetic monopole density")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write output here instead of standard output (overrides `output.path`).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format (overrides `output.format`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeArg {
    #[default]
    Corrected,
    Original,
}

impl From<ModeArg> for SaturationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Corrected => SaturationMode::Corrected,
            ModeArg::Original => SaturationMode::Original,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Saturated stationary moments at the configured means, with the fixed-point residual.
    Stationary {
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
    },
    /// Integrate the mean and moment equations.
    Evolve,
    /// Scan the effective potential and report minimum, kink, force and shift.
    Veff {
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        z_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        z_max: f64,
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
    },
    /// Compare the integrator against exact matrix-exponential propagation (constant field only).
    OracleCheck,
    /// Print the Jacobiator -e hbar^2 div B.
    Jacobiator,
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("--config <path> is required".into()))?;
    let cfg = RunConfig::load(path)?;
    let format = cli.format.unwrap_or(cfg.output.format);
    let mut body = String::new();
    let outcome = match cli.command {
        Command::Stationary { mode } => stationary(&cfg, mode.into(), format, &mut body),
        Command::Evolve => evolve_cmd(&cfg, format, &mut body),
        Command::Veff { z_min, z_max, n, mode } => veff_cmd(&cfg, mode.into(), z_min, z_max, n, format, &mut body),
        Command::OracleCheck => oracle_check(&cfg, format, &mut body),
        Command::Jacobiator => jacobiator_cmd(&cfg, format, &mut body),
    };
    // Partial output (aborted integrations, failed oracle checks) is still written.
    if !body.is_empty() {
        match cli.output.clone().or_else(|| cfg.output.path.as_ref().map(PathBuf::from)) {
            Some(dest) => std::fs::write(dest, body.as_bytes())?,
            None => {
                stdout.write_all(body.as_bytes())?;
                stdout.flush()?;
            }
        }
    }
    outcome
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn initial_state(cfg: &RunConfig, params: &Params<f64>) -> Result<MomentState<f64>, CliError> {
    let init = cfg.initial()?;
    match init.explicit_state() {
        Some(state) => state,
        None => {
            debug_assert_eq!(init.moments, MomentsSpec::Saturated);
            let means = init.mean.to_array();
            Ok(saturate_with(&means, params, SaturationMode::Corrected, init.transverse_spread())?)
        }
    }
}

fn state_object(state: &MomentState<f64>) -> (Value, Value) {
    let mean: Map<String, Value> =
        mean_names().into_iter().map(String::from).zip(state.mean.map(Value::from)).collect();
    let moments: Map<String, Value> = moment_names().into_iter().zip(state.moments.map(Value::from)).collect();
    (Value::Object(mean), Value::Object(moments))
}

fn stationary(cfg: &RunConfig, mode: SaturationMode, format: Format, out: &mut String) -> Result<(), CliError> {
    let params = cfg.params()?;
    let init = cfg.initial()?;
    let state = saturate_with(&init.mean.to_array(), &params, mode, init.transverse_spread())?;
    let res = residual(&state, &params);
    match format {
        Format::Csv => {
            let mut names: Vec<String> = mean_names().into_iter().map(String::from).collect();
            names.extend(moment_names());
            names.push("residual".into());
            out.push_str(&csv_header(&names));
            let mut row = state.mean.to_vec();
            row.extend_from_slice(&state.moments);
            row.push(res);
            out.push_str(&csv_row(&row));
        }
        Format::Json => {
            let (mean, moments) = state_object(&state);
            out.push_str(&pretty(&json!({ "mode": mode.as_str(), "mean": mean, "moments": moments, "residual": res })));
        }
    }
    Ok(())
}

fn trajectory_columns() -> Vec<String> {
    let mut names = vec!["t".to_string()];
    names.extend(mean_names().into_iter().map(String::from));
    names.extend(moment_names());
    names.extend(["energy", "zpz_uncertainty", "pxpy_uncertainty"].map(String::from));
    names
}

fn trajectory_rows(traj: &Trajectory<f64>, stride: usize) -> Vec<Vec<f64>> {
    let last = traj.len().saturating_sub(1);
    traj.iter()
        .enumerate()
        .filter(|(i, _)| i % stride == 0 || *i == last)
        .map(|(_, (t, s, m))| {
            let mut row = Vec::with_capacity(30);
            row.push(t);
            row.extend_from_slice(&s.mean);
            row.extend_from_slice(&s.moments);
            row.extend([m.energy, m.zpz_uncertainty, m.pxpy_uncertainty]);
            row
        })
        .collect()
}

fn evolve_cmd(cfg: &RunConfig, format: Format, out: &mut String) -> Result<(), CliError> {
    let params = cfg.params()?;
    let initial = initial_state(cfg, &params)?;
    let integrator = cfg.integrator()?;
    let (traj, failure) = match evolve(&initial, &params, &integrator) {
        Ok(traj) => (traj, None),
        Err(aborted) => {
            let t = aborted.last_good().map_or(0.0, |(t, _)| t);
            (aborted.partial, Some((t, aborted.error)))
        }
    };
    let rows = trajectory_rows(&traj, cfg.output.stride);
    match format {
        Format::Csv => {
            out.push_str(&csv_header(&trajectory_columns()));
            for row in &rows {
                out.push_str(&csv_row(row));
            }
            if let Some((t, _)) = &failure {
                out.push_str(&format!("# ABORTED t={}\n", num(*t)));
            }
        }
        Format::Json => {
            let doc = json!({
                "columns": trajectory_columns(),
                "rows": rows,
                "aborted_at": failure.as_ref().map(|(t, _)| *t),
            });
            out.push_str(&pretty(&doc));
        }
    }
    match failure {
        Some((_, e)) => Err(CliError::Aborted(e)),
        None => Ok(()),
    }
}

/// Report fields as JSON; samples are included only when requested.
pub fn report_json(report: &VeffReport<f64>, with_samples: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("mode".into(), json!(report.mode.as_str()));
    if with_samples {
        obj.insert("samples".into(), json!(report.samples.iter().map(|(z, v)| [*z, *v]).collect::<Vec<_>>()));
    }
    obj.insert("minimum_z".into(), json!(report.minimum_z));
    obj.insert("minimum_V".into(), json!(report.minimum_v));
    obj.insert(
        "kink".into(),
        report.kink.map_or(Value::Null, |k| json!({ "location": k.location, "derivative_jump": k.derivative_jump })),
    );
    obj.insert("force_const".into(), json!(report.force_const));
    obj.insert("shift_delta_z".into(), json!(report.shift_delta_z));
    Value::Object(obj)
}

fn veff_cmd(
    cfg: &RunConfig,
    mode: SaturationMode,
    z_min: f64,
    z_max: f64,
    n: usize,
    format: Format,
    out: &mut String,
) -> Result<(), CliError> {
    if !(z_min < z_max) || !z_min.is_finite() || !z_max.is_finite() {
        return Err(CliError::Usage(format!("need finite --z-min < --z-max, got {z_min} and {z_max}")));
    }
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    let params = cfg.params()?;
    let report = veff_report(&params, mode, z_min, z_max, n)?;
    match format {
        Format::Csv => {
            out.push_str(&csv_header(&["z", "veff"]));
            for (z, v) in &report.samples {
                out.push_str(&csv_row(&[*z, *v]));
            }
            out.push_str("# ");
            out.push_str(&report_json(&report, false).to_string());
            out.push('\n');
        }
        Format::Json => out.push_str(&pretty(&report_json(&report, true))),
    }
    Ok(())
}

fn oracle_check(cfg: &RunConfig, format: Format, out: &mut String) -> Result<(), CliError> {
    let params = cfg.params()?;
    if !matches!(params.field(), FieldModel::ConstantZ { .. }) {
        return Err(CliError::Usage(
            "oracle-check needs a constant_z field: the monopole field makes the moment system bilinear, \
             so no matrix-exponential reference exists"
                .into(),
        ));
    }
    let system = build_linear_system(&params)?;
    let initial = initial_state(cfg, &params)?;
    let integrator = cfg.integrator()?;
    let traj = evolve(&initial, &params, &integrator).map_err(|a| CliError::Aborted(a.error))?;
    let mut worst = 0.0f64;
    for (t, state, _) in traj.iter() {
        let exact = system.propagate(&initial, t)?.to_vector();
        let got = state.to_vector();
        let scale = exact.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let diff = got.iter().zip(&exact).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst = worst.max(diff / scale);
    }
    let pass = worst < ORACLE_THRESHOLD;
    match format {
        Format::Csv => {
            out.push_str("max_relative_error,threshold,samples,pass\n");
            out.push_str(&format!("{},{},{},{}\n", num(worst), num(ORACLE_THRESHOLD), traj.len(), pass));
        }
        Format::Json => out.push_str(&pretty(&json!({
            "max_relative_error": worst,
            "threshold": ORACLE_THRESHOLD,
            "samples": traj.len(),
            "pass": pass,
        }))),
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::OracleMismatch(worst, ORACLE_THRESHOLD))
    }
}

fn jacobiator_cmd(cfg: &RunConfig, format: Format, out: &mut String) -> Result<(), CliError> {
    let j = jacobiator(&cfg.params()?);
    match format {
        Format::Csv => {
            out.push_str(&num(j));
            out.push('\n');
        }
        Format::Json => out.push_str(&pretty(&json!({ "jacobiator": if j == 0.0 { 0.0 } else { j } }))),
    }
    Ok(())
}
