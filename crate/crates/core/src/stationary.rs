//! Zeroth-order adiabatic solution of the moment equations and uncertainty saturation.
//!
//! Freezing the means and setting every moment derivative to zero turns the
//! moment equations into a linear algebraic system. Its solution forces twelve
//! moments to zero, ties `Δ(p_z²) = m²ω² Δ(z²)`, equates the transverse momentum
//! spreads, and links the `x p_y` and `y p_x` correlations to them. The remaining
//! freedom is fixed by saturating the two uncertainty relations. Δ(x²), Δ(y²) and
//! Δ(xy) stay undetermined (Landau degeneracy) and default to the smallest
//! values compatible with positivity.

use std::fmt;
use std::str::FromStr;

use crate::dynamics::moment_rhs;
use crate::error::{Error, Result};
use crate::model::{FieldModel, Params};
use crate::scalar::Real;
use crate::state::{MomentIndex, MomentState, Var, N_MEANS};

/// How the transverse momentum spread is saturated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SaturationMode {
    /// `Δ(p_x²) = ½ ħ |e⟨B⟩|`, valid for either field orientation.
    #[default]
    Corrected,
    /// `Δ(p_x²) = ½ ħ e⟨B⟩` with the signed field. Kept to reproduce the superseded numbers.
    Original,
}

impl SaturationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SaturationMode::Corrected => "corrected",
            SaturationMode::Original => "original",
        }
    }
}

impl fmt::Display for SaturationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SaturationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(SaturationMode::Corrected),
            "original" => Ok(SaturationMode::Original),
            other => Err(Error::InvalidArgument(format!("unknown saturation mode `{other}`"))),
        }
    }
}

/// Moments fixed by the stationary equations at given means.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticConstraints<T> {
    /// Moments forced to vanish.
    pub forced_zero: Vec<MomentIndex>,
    /// `m²ω²`: `Δ(p_z²) = stiffness · Δ(z²)`.
    pub stiffness: T,
    /// `1 / (e⟨B⟩)`: `Δ(x p_y) = −coupling · Δ(p_x²)` and `Δ(y p_x) = +coupling · Δ(p_x²)`.
    pub cross_coupling: T,
}

/// Position spreads the stationary equations leave free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseSpread<T> {
    pub xx: T,
    pub yy: T,
    pub xy: T,
}

const FORCED_ZERO: [(Var, Var); 12] = {
    use Var::*;
    [(X, Px), (Y, Py), (Z, Pz), (Z, Px), (Z, Py), (X, Pz), (Y, Pz), (Px, Pz), (Py, Pz), (X, Z), (Y, Z), (Px, Py)]
};

/// `e⟨B⟩` at the mean position, rejecting the points where it vanishes.
fn field_strength<T: Real>(means: &[T; N_MEANS], params: &Params<T>) -> Result<T> {
    let z = means[Var::Z.index()];
    if let FieldModel::LinearZ { mu } = params.field() {
        if z == T::zero() && mu != T::zero() {
            return Err(Error::DegeneratePoint);
        }
    }
    let eb = params.charge() * params.field().bz(z);
    if eb == T::zero() {
        return Err(Error::DegenerateField);
    }
    Ok(eb)
}

/// Solves the zeroth-order stationary system as far as it goes.
pub fn adiabatic_constraints<T: Real>(means: &[T; N_MEANS], params: &Params<T>) -> Result<AdiabaticConstraints<T>> {
    let eb = field_strength(means, params)?;
    Ok(AdiabaticConstraints {
        forced_zero: FORCED_ZERO.iter().map(|&(a, b)| MomentIndex::new(a, b)).collect(),
        stiffness: params.trap_stiffness(),
        cross_coupling: T::one() / eb,
    })
}

impl<T: Real> AdiabaticConstraints<T> {
    /// Stationary state for the given free values `Δ(p_x²)` and `Δ(z²)`.
    pub fn complete(&self, means: [T; N_MEANS], px2: T, z2: T, transverse: TransverseSpread<T>) -> MomentState<T> {
        use Var::*;
        let mut s = MomentState::point(means);
        for idx in &self.forced_zero {
            let (a, b) = idx.vars();
            s.set(a, b, T::zero());
        }
        s.set(Px, Px, px2);
        s.set(Py, Py, px2);
        s.set(Z, Z, z2);
        s.set(Pz, Pz, self.stiffness * z2);
        s.set(X, Py, -self.cross_coupling * px2);
        s.set(Y, Px, self.cross_coupling * px2);
        s.set(X, X, transverse.xx);
        s.set(Y, Y, transverse.yy);
        s.set(X, Y, transverse.xy);
        s
    }
}

/// Minimal-uncertainty stationary state at the given means, with default transverse spreads.
pub fn saturate<T: Real>(means: &[T; N_MEANS], params: &Params<T>, mode: SaturationMode) -> Result<MomentState<T>> {
    saturate_with(means, params, mode, None)
}

/// As [`saturate`], optionally overriding `Δ(x²)`, `Δ(y²)`, `Δ(xy)`.
pub fn saturate_with<T: Real>(
    means: &[T; N_MEANS],
    params: &Params<T>,
    mode: SaturationMode,
    transverse: Option<TransverseSpread<T>>,
) -> Result<MomentState<T>> {
    if params.omega() == T::zero() {
        return Err(Error::DegenerateTrap);
    }
    let constraints = adiabatic_constraints(means, params)?;
    let eb = T::one() / constraints.cross_coupling;
    let hbar = params.hbar();
    let px2 = match mode {
        SaturationMode::Corrected => T::half() * hbar * eb.abs(),
        SaturationMode::Original if eb > T::zero() => T::half() * hbar * eb,
        SaturationMode::Original => return Err(Error::ModeDomain(eb.to_f64().unwrap_or(f64::NAN))),
    };
    let z2 = hbar / (T::two() * params.mass() * params.omega());
    let transverse = match transverse {
        Some(t) => {
            if !(t.xx >= T::zero() && t.yy >= T::zero()) || !t.xy.is_finite() || !t.xx.is_finite() || !t.yy.is_finite()
            {
                return Err(Error::InvalidArgument("transverse spreads must be finite with xx, yy >= 0".into()));
            }
            t
        }
        None => {
            let spread = hbar / (T::two() * eb.abs());
            TransverseSpread { xx: spread, yy: spread, xy: T::zero() }
        }
    };
    Ok(constraints.complete(*means, px2, z2, transverse))
}

/// Max-norm of the moment derivatives; zero certifies a stationary point at frozen means.
pub fn residual<T: Real>(state: &MomentState<T>, params: &Params<T>) -> T {
    moment_rhs(state, params).iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}
