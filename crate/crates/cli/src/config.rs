//! JSON run configuration.
//!
//! Unknown keys are rejected everywhere. Numeric constraints are checked while
//! parsing, so violations are reported with the line and column of the value.

use std::fmt;
use std::path::Path;

use monopole_moments::{
    FieldModel, IntegratorConfig, Method, MomentIndex, MomentState, Params, TransverseSpread, Var, N_MOMENTS,
};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::CliError;

macro_rules! constrained {
    ($name:ident, $check:expr, $what:literal) => {
        #[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
        #[serde(try_from = "f64")]
        pub struct $name(pub f64);

        impl TryFrom<f64> for $name {
            type Error = String;
            fn try_from(v: f64) -> Result<Self, String> {
                let check: fn(f64) -> bool = $check;
                if check(v) {
                    Ok($name(v))
                } else {
                    Err(format!(concat!("expected ", $what, ", got {}"), v))
                }
            }
        }
    };
}

constrained!(Finite, |v| v.is_finite(), "a finite number");
constrained!(Positive, |v| v.is_finite() && v > 0.0, "a finite number > 0");
constrained!(NonNegative, |v| v.is_finite() && v >= 0.0, "a finite number >= 0");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Particle {
    pub mass: Positive,
    pub charge: Finite,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trap {
    pub omega: NonNegative,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    LinearZ { mu: Finite },
    ConstantZ { b0: Finite },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mean {
    pub x: Finite,
    pub y: Finite,
    pub z: Finite,
    pub px: Finite,
    pub py: Finite,
    pub pz: Finite,
}

impl Mean {
    pub fn to_array(self) -> [f64; 6] {
        [self.x.0, self.y.0, self.z.0, self.px.0, self.py.0, self.pz.0]
    }
}

/// `"saturated"`, `"zero"`, or 21 explicit moments in storage order.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentsSpec {
    Saturated,
    Zero,
    Explicit([f64; N_MOMENTS]),
}

impl<'de> Deserialize<'de> for MomentsSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MomentsVisitor;

        impl<'de> Visitor<'de> for MomentsVisitor {
            type Value = MomentsSpec;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "\"saturated\", \"zero\", or an array of {N_MOMENTS} finite numbers")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<MomentsSpec, E> {
                match v {
                    "saturated" => Ok(MomentsSpec::Saturated),
                    "zero" => Ok(MomentsSpec::Zero),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<MomentsSpec, A::Error> {
                let mut out = [0.0; N_MOMENTS];
                for (i, slot) in out.iter_mut().enumerate() {
                    let v: Finite = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(i, &self))?;
                    *slot = v.0;
                }
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(N_MOMENTS + 1, &self));
                }
                Ok(MomentsSpec::Explicit(out))
            }
        }

        deserializer.deserialize_any(MomentsVisitor)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transverse {
    pub xx: NonNegative,
    pub yy: NonNegative,
    pub xy: Finite,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub mean: Mean,
    pub moments: MomentsSpec,
    #[serde(default)]
    pub transverse: Option<Transverse>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegratorSpec {
    Rk4Fixed {
        dt: Positive,
        t_end: NonNegative,
    },
    Rk45Adaptive {
        t_end: NonNegative,
        rel_tol: Option<Positive>,
        abs_tol: Option<Positive>,
        dt_min: Option<NonNegative>,
        dt_max: Option<Positive>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { format: Format::Csv, path: None, stride: 1 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub particle: Particle,
    pub trap: Trap,
    pub field: FieldSpec,
    pub hbar: Positive,
    #[serde(default)]
    pub initial_state: Option<InitialState>,
    #[serde(default)]
    pub integrator: Option<IntegratorSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.output.stride == 0 {
            return Err(CliError::Config("output.stride must be >= 1".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn params(&self) -> Result<Params<f64>, CliError> {
        let field = match self.field {
            FieldSpec::LinearZ { mu } => FieldModel::LinearZ { mu: mu.0 },
            FieldSpec::ConstantZ { b0 } => FieldModel::ConstantZ { b0: b0.0 },
        };
        Params::new(self.particle.mass.0, self.particle.charge.0, self.trap.omega.0, self.hbar.0, field)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn initial(&self) -> Result<&InitialState, CliError> {
        self.initial_state.as_ref().ok_or_else(|| CliError::Config("config is missing `initial_state`".into()))
    }

    pub fn integrator(&self) -> Result<IntegratorConfig<f64>, CliError> {
        let spec = self.integrator.as_ref().ok_or_else(|| CliError::Config("config is missing `integrator`".into()))?;
        let cfg = match *spec {
            IntegratorSpec::Rk4Fixed { dt, t_end } => IntegratorConfig::rk4(dt.0, t_end.0),
            IntegratorSpec::Rk45Adaptive { t_end, rel_tol, abs_tol, dt_min, dt_max } => {
                let defaults = IntegratorConfig::default_for(t_end.0).map_err(|e| CliError::Config(e.to_string()))?;
                let Method::Rk45Adaptive { rel_tol: r0, abs_tol: a0, dt_min: lo0, dt_max: hi0 } = defaults.method()
                else {
                    unreachable!("default integrator is adaptive")
                };
                let method = Method::Rk45Adaptive {
                    rel_tol: rel_tol.map_or(r0, |v| v.0),
                    abs_tol: abs_tol.map_or(a0, |v| v.0),
                    dt_min: dt_min.map_or(lo0, |v| v.0),
                    dt_max: dt_max.map_or(hi0, |v| v.0),
                };
                IntegratorConfig::new(method, t_end.0)
            }
        };
        cfg.map_err(|e| CliError::Config(format!("integrator: {e}")))
    }
}

impl InitialState {
    pub fn transverse_spread(&self) -> Option<TransverseSpread<f64>> {
        self.transverse.map(|t| TransverseSpread { xx: t.xx.0, yy: t.yy.0, xy: t.xy.0 })
    }

    /// Explicit or classical-point states. Saturated states need the physics and are built by the caller.
    pub fn explicit_state(&self) -> Option<Result<MomentState<f64>, CliError>> {
        let mean = self.mean.to_array();
        match &self.moments {
            MomentsSpec::Saturated => None,
            MomentsSpec::Zero => Some(Ok(MomentState::point(mean))),
            MomentsSpec::Explicit(m) => {
                Some(MomentState::new(mean, *m).map_err(|e| CliError::Config(format!("initial_state.moments: {e}"))))
            }
        }
    }
}

/// Column labels `xx, xy, …, pzpz`.
pub fn moment_names() -> Vec<String> {
    MomentIndex::all().map(|i| i.name()).collect()
}

/// Column labels `x, y, z, px, py, pz`.
pub fn mean_names() -> Vec<&'static str> {
    Var::ALL.iter().map(|v| v.name()).collect()
}
