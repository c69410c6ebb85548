//! Quantum-corrected effective potential along z and its analysis.
//!
//! `V_eff(z) = ½ m ω² z² + ½ ħ e B(z) / m + ½ ħ ω` is the Hamiltonian expectation
//! in the saturated stationary state at vanishing momentum means. In corrected
//! mode the field term uses `|e B(z)|`: the potential stays reflection symmetric
//! and acquires a kink at `z = 0` instead of a shifted minimum.

use crate::error::{Error, Result};
use crate::model::{FieldModel, Params};
use crate::scalar::Real;
use crate::stationary::SaturationMode;

fn require_trap<T: Real>(params: &Params<T>) -> Result<()> {
    if params.omega() == T::zero() {
        Err(Error::DegenerateTrap)
    } else {
        Ok(())
    }
}

fn field_term<T: Real>(z: T, params: &Params<T>, mode: SaturationMode) -> T {
    let eb = params.charge() * params.field().bz(z);
    let eb = match mode {
        SaturationMode::Corrected => eb.abs(),
        SaturationMode::Original => eb,
    };
    T::half() * params.hbar() * eb / params.mass()
}

pub fn veff<T: Real>(z: T, params: &Params<T>, mode: SaturationMode) -> Result<T> {
    require_trap(params)?;
    let (m, w, hbar) = (params.mass(), params.omega(), params.hbar());
    Ok(T::half() * m * w * w * z * z + field_term(z, params, mode) + T::half() * hbar * w)
}

/// `n` evenly spaced samples on `[z_min, z_max]`, endpoints included.
///
/// Grid points are formed as `(z_min (n−1−i) + z_max i) / (n−1)`, so a grid on a
/// symmetric interval is exactly symmetric in floating point.
pub fn veff_scan<T: Real>(
    params: &Params<T>,
    mode: SaturationMode,
    z_min: T,
    z_max: T,
    n: usize,
) -> Result<Vec<(T, T)>> {
    if !(z_min < z_max) || !z_min.is_finite() || !z_max.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite z_min < z_max, got [{z_min}, {z_max}]")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    require_trap(params)?;
    let last = T::from_count(n - 1);
    (0..n)
        .map(|i| {
            let z = (z_min * T::from_count(n - 1 - i) + z_max * T::from_count(i)) / last;
            veff(z, params, mode).map(|v| (z, v))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub z_star: T,
    pub v_star: T,
}

/// Closed-form location and depth of the potential minimum.
pub fn minimum<T: Real>(params: &Params<T>, mode: SaturationMode) -> Result<Minimum<T>> {
    require_trap(params)?;
    let z_star = match (params.field(), mode) {
        (FieldModel::LinearZ { .. }, SaturationMode::Original) => minimum_shift(params),
        _ => T::zero(),
    };
    Ok(Minimum { z_star, v_star: veff(z_star, params, mode)? })
}

/// `−e μ ħ / (2 m² ω²)`; assumes a trap is present.
fn minimum_shift<T: Real>(params: &Params<T>) -> T {
    let mu = params.field().gradient();
    -params.charge() * mu * params.hbar() / (T::two() * params.trap_stiffness())
}

/// `V'(0⁺) − V'(0⁻) = ħ |e μ| / m` for the corrected potential; zero for a constant field.
pub fn kink_jump<T: Real>(params: &Params<T>) -> T {
    (params.charge() * params.field().gradient()).abs() * params.hbar() / params.mass()
}

/// `−dV_eff/dz`.
pub fn effective_force<T: Real>(z: T, params: &Params<T>, mode: SaturationMode) -> Result<T> {
    require_trap(params)?;
    let (m, w, hbar) = (params.mass(), params.omega(), params.hbar());
    let eg = params.charge() * params.field().gradient();
    let trap = -m * w * w * z;
    let quantum = match mode {
        SaturationMode::Original => -T::half() * hbar * eg / m,
        SaturationMode::Corrected if eg == T::zero() => T::zero(),
        SaturationMode::Corrected if z == T::zero() => return Err(Error::KinkPoint),
        SaturationMode::Corrected => -T::half() * hbar * eg.abs() * z.signum() / m,
    };
    Ok(trap + quantum)
}

/// Shift of the minimum when the linear quantum term is absorbed into the square,
/// and the `O(ħ²)` constant that this rewriting generates (and which is dropped).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletedSquare<T> {
    pub shift: T,
    pub residual_hbar2_term: T,
}

pub fn completed_square_report<T: Real>(params: &Params<T>) -> Result<CompletedSquare<T>> {
    if !params.field().is_linear_z() {
        return Err(Error::UnsupportedField);
    }
    require_trap(params)?;
    let (m, hbar) = (params.mass(), params.hbar());
    let emu = params.charge() * params.field().gradient();
    let stiffness = params.trap_stiffness();
    Ok(CompletedSquare {
        shift: minimum_shift(params),
        residual_hbar2_term: emu * emu * hbar * hbar / (T::lit(8.0) * m * stiffness),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink<T> {
    pub location: T,
    pub derivative_jump: T,
}

/// Scan plus the analysis quantities that apply to the chosen mode and field.
#[derive(Debug, Clone, PartialEq)]
pub struct VeffReport<T> {
    pub mode: SaturationMode,
    pub samples: Vec<(T, T)>,
    pub minimum_z: T,
    pub minimum_v: T,
    /// Corrected mode with a monopole field.
    pub kink: Option<Kink<T>>,
    /// Constant quantum force; original mode with a monopole field.
    pub force_const: Option<T>,
    /// Shift of the minimum; original mode with a monopole field.
    pub shift_delta_z: Option<T>,
}

pub fn veff_report<T: Real>(
    params: &Params<T>,
    mode: SaturationMode,
    z_min: T,
    z_max: T,
    n: usize,
) -> Result<VeffReport<T>> {
    let samples = veff_scan(params, mode, z_min, z_max, n)?;
    let min = minimum(params, mode)?;
    let linear = params.field().is_linear_z();
    let (kink, force_const, shift_delta_z) = match mode {
        SaturationMode::Corrected if linear => {
            (Some(Kink { location: T::zero(), derivative_jump: kink_jump(params) }), None, None)
        }
        SaturationMode::Original if linear => {
            let force = effective_force(T::zero(), params, mode)?;
            (None, Some(force), Some(minimum_shift(params)))
        }
        _ => (None, None, None),
    };
    Ok(VeffReport { mode, samples, minimum_z: min.z_star, minimum_v: min.v_star, kink, force_const, shift_delta_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use SaturationMode::*;

    fn unit() -> Params<f64> {
        Params::unit(FieldModel::LinearZ { mu: 1.0 })
    }

    #[test]
    fn veff_values() {
        assert_eq!(veff(1.0, &unit(), Corrected).unwrap(), 1.5);
        assert_eq!(veff(-1.0, &unit(), Corrected).unwrap(), 1.5);
        assert_eq!(veff(0.0, &unit(), Corrected).unwrap(), 0.5);
        assert_eq!(veff(-1.0, &unit(), Original).unwrap(), 0.5);
        let no_trap = unit().with_omega(0.0).unwrap();
        assert_eq!(veff(1.0, &no_trap, Corrected), Err(Error::DegenerateTrap));
    }

    #[test]
    fn scan_rows() {
        let rows = veff_scan(&unit(), Corrected, -1.0, 1.0, 3).unwrap();
        assert_eq!(rows, vec![(-1.0, 1.5), (0.0, 0.5), (1.0, 1.5)]);
        let rows = veff_scan(&unit(), Corrected, -2.0, 3.0, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].0, rows[1].0), (-2.0, 3.0));
        assert!(veff_scan(&unit(), Corrected, 1.0, 1.0, 3).is_err());
        assert!(veff_scan(&unit(), Corrected, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn minima() {
        let m = minimum(&unit(), Original).unwrap();
        assert_eq!((m.z_star, m.v_star), (-0.5, 0.375));
        let m = minimum(&unit(), Corrected).unwrap();
        assert_eq!((m.z_star, m.v_star), (0.0, 0.5));
        let m = minimum(&Params::unit(FieldModel::ConstantZ { b0: 1.0 }), Corrected).unwrap();
        assert_eq!(m.v_star, 1.0);
        assert_eq!(minimum(&unit().with_omega(0.0).unwrap(), Original), Err(Error::DegenerateTrap));
    }

    #[test]
    fn kink_values() {
        assert_eq!(kink_jump(&unit()), 1.0);
        assert_eq!(kink_jump(&Params::unit(FieldModel::LinearZ { mu: 0.0 })), 0.0);
        assert_eq!(kink_jump(&unit().with_mass(2.0).unwrap()), 0.5);
        assert_eq!(kink_jump(&Params::unit(FieldModel::LinearZ { mu: -3.0 })), 3.0);
    }

    #[test]
    fn forces() {
        assert_eq!(effective_force(0.0, &unit(), Original).unwrap(), -0.5);
        assert_eq!(effective_force(0.5, &unit(), Corrected).unwrap(), -1.0);
        assert_eq!(effective_force(-0.5, &unit(), Corrected).unwrap(), 1.0);
        assert_eq!(effective_force(-0.5, &unit(), Original).unwrap(), 0.0);
        assert_eq!(effective_force(0.0, &unit(), Corrected), Err(Error::KinkPoint));
        let flat = Params::unit(FieldModel::ConstantZ { b0: 2.0 });
        assert_eq!(effective_force(0.0, &flat, Corrected).unwrap(), 0.0);
    }

    #[test]
    fn negative_density_force_points_toward_origin() {
        let p = Params::unit(FieldModel::LinearZ { mu: -1.0 });
        assert_eq!(effective_force(0.5, &p, Corrected).unwrap(), -1.0);
        assert_eq!(veff(0.5, &p, Corrected).unwrap(), veff(0.5, &unit(), Corrected).unwrap());
    }

    #[test]
    fn completed_square() {
        let c = completed_square_report(&unit()).unwrap();
        assert_eq!((c.shift, c.residual_hbar2_term), (-0.5, 0.125));
        let v_square = 0.5;
        let v_direct = minimum(&unit(), Original).unwrap().v_star;
        assert_eq!(v_square - v_direct, c.residual_hbar2_term);
        let tiny = completed_square_report(&unit().with_hbar(1e-300).unwrap()).unwrap();
        assert!(tiny.shift.abs() < 1e-299 && tiny.residual_hbar2_term == 0.0);
        let c = completed_square_report(&Params::<f64>::unit(FieldModel::LinearZ { mu: 0.0 })).unwrap();
        assert_eq!((c.shift.abs(), c.residual_hbar2_term), (0.0, 0.0));
        assert_eq!(
            completed_square_report(&Params::unit(FieldModel::ConstantZ { b0: 1.0 })),
            Err(Error::UnsupportedField)
        );
    }

    #[test]
    fn report_fields_by_mode() {
        let r = veff_report(&unit(), Corrected, -1.0, 1.0, 3).unwrap();
        assert_eq!(r.kink, Some(Kink { location: 0.0, derivative_jump: 1.0 }));
        assert_eq!((r.force_const, r.shift_delta_z), (None, None));
        let r = veff_report(&unit(), Original, -1.0, 1.0, 3).unwrap();
        assert_eq!((r.force_const, r.shift_delta_z, r.minimum_z), (Some(-0.5), Some(-0.5), -0.5));
        assert!(r.kink.is_none());
    }
}
