//! Independent reference solutions.
//!
//! In a constant field the mean and moment equations are linear with constant
//! coefficients, so the exact flow is a matrix exponential. The classical
//! integrator solves the point-particle Lorentz problem without any moments.

use crate::dynamics::rhs;
use crate::error::{Error, Result};
use crate::linalg::{matrix_exponential, Matrix};
use crate::model::{FieldModel, Params};
use crate::scalar::Real;
use crate::state::{MomentState, N_MEANS, STATE_DIM};

/// Generator `A` of `d/dt (means ⊕ moments) = A · (means ⊕ moments)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T> {
    pub generator: Matrix<T>,
}

/// Assembles `A` column by column from the right-hand side on basis states.
pub fn build_linear_system<T: Real>(params: &Params<T>) -> Result<LinearSystem<T>> {
    if !matches!(params.field(), FieldModel::ConstantZ { .. }) {
        return Err(Error::NotLinear);
    }
    let mut a = Matrix::zeros(STATE_DIM);
    for j in 0..STATE_DIM {
        let mut basis = [T::zero(); STATE_DIM];
        basis[j] = T::one();
        let column = rhs(&MomentState::from_vector(&basis), params);
        for (i, v) in column.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    Ok(LinearSystem { generator: a })
}

impl<T: Real> LinearSystem<T> {
    pub fn apply(&self, state: &MomentState<T>) -> [T; STATE_DIM] {
        let v = self.generator.mul_vec(&state.to_vector());
        let mut out = [T::zero(); STATE_DIM];
        out.copy_from_slice(&v);
        out
    }

    /// Exact flow `exp(A t) · state`.
    pub fn propagate(&self, state: &MomentState<T>, t: T) -> Result<MomentState<T>> {
        let e = matrix_exponential(&self.generator, t)?;
        let v = e.mul_vec(&state.to_vector());
        let mut out = [T::zero(); STATE_DIM];
        out.copy_from_slice(&v);
        Ok(MomentState::from_vector(&out))
    }
}

/// Point-particle derivative: `q̇ = p/m`, `ṗ = (e/m) p × B(q) − m ω² z ẑ`.
fn classical_rhs<T: Real>(y: &[T; N_MEANS], params: &Params<T>) -> [T; N_MEANS] {
    let m = params.mass();
    let w = params.omega();
    let [_, _, bz] = params.field().eval([y[0], y[1], y[2]]);
    let (px, py, pz) = (y[3], y[4], y[5]);
    let e_over_m = params.charge() / m;
    [px / m, py / m, pz / m, e_over_m * py * bz, -e_over_m * px * bz, -m * w * w * y[2]]
}

/// Classical RK4 trajectory sampled on the grid `k·dt`, ending exactly at `t_end`.
pub fn classical_trajectory<T: Real>(
    init_means: &[T; N_MEANS],
    params: &Params<T>,
    t_end: T,
    dt: T,
) -> Result<Vec<(T, [T; N_MEANS])>> {
    if !(dt > T::zero()) || !dt.is_finite() || !(t_end >= T::zero()) {
        return Err(Error::InvalidArgument(format!("need dt > 0 and t_end >= 0, got dt={dt}, t_end={t_end}")));
    }
    let mut out = vec![(T::zero(), *init_means)];
    let (mut t, mut y) = (T::zero(), *init_means);
    let mut k = 0usize;
    let add = |y: &[T; N_MEANS], h: T, d: &[T; N_MEANS]| {
        let mut o = *y;
        for i in 0..N_MEANS {
            o[i] = o[i] + h * d[i];
        }
        o
    };
    while t < t_end {
        k += 1;
        let next_t = (T::from_count(k) * dt).min(t_end);
        let h = next_t - t;
        let half = T::half() * h;
        let k1 = classical_rhs(&y, params);
        let k2 = classical_rhs(&add(&y, half, &k1), params);
        let k3 = classical_rhs(&add(&y, half, &k2), params);
        let k4 = classical_rhs(&add(&y, h, &k3), params);
        for i in 0..N_MEANS {
            y[i] = y[i] + h / T::lit(6.0) * (k1[i] + T::two() * (k2[i] + k3[i]) + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { time: t.to_f64().unwrap_or(f64::NAN) });
        }
        t = next_t;
        out.push((t, y));
    }
    Ok(out)
}
