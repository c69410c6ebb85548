//! Coupled mean and second-order moment equations of motion, and their time integration.
//!
//! The moment equations are closed at second order (first order in ħ). The
//! magnetic field enters through two coefficients: `e⟨B⟩` (the field at the
//! mean position) and `e ∂B^z/∂z` (the monopole density). For a constant
//! field the gradient vanishes and the system becomes linear.

use crate::error::{Error, Result};
use crate::model::Params;
use crate::scalar::Real;
use crate::state::{energy, MomentState, Var, N_MEANS, N_MOMENTS, STATE_DIM};

/// `e⟨B^z⟩` and `e ∂_z B^z` at the state's mean position.
fn field_couplings<T: Real>(state: &MomentState<T>, params: &Params<T>) -> (T, T) {
    let field = params.field();
    let e = params.charge();
    (e * field.bz(state.mean_of(Var::Z)), e * field.gradient())
}

/// Time derivative of the six means.
///
/// `d⟨p_x⟩/dt = (e/m)(⟨B⟩⟨p_y⟩ + ∂B·Δ(z p_y))` and its partner for `p_y` follow
/// from `[p_x, p_y²] = iħ e (z p_y + p_y z)` with symmetric ordering.
pub fn mean_rhs<T: Real>(state: &MomentState<T>, params: &Params<T>) -> [T; N_MEANS] {
    use Var::*;
    let m = params.mass();
    let w = params.omega();
    let (cb, g) = field_couplings(state, params);
    let mu = |v| state.mean_of(v);
    [
        mu(Px) / m,
        mu(Py) / m,
        mu(Pz) / m,
        (cb * mu(Py) + g * state.get(Z, Py)) / m,
        -(cb * mu(Px) + g * state.get(Z, Px)) / m,
        -m * w * w * mu(Z),
    ]
}

/// Time derivative of the 21 second-order moments, in storage order.
pub fn moment_rhs<T: Real>(state: &MomentState<T>, params: &Params<T>) -> [T; N_MOMENTS] {
    use Var::*;
    let m = params.mass();
    let k = params.trap_stiffness();
    let (cb, g) = field_couplings(state, params);
    let d = |a, b| state.get(a, b);
    let mean = |v| state.mean_of(v);
    let two = T::two();
    let (px, py) = (mean(Px), mean(Py));
    let momentum = |q: Var| match q {
        X => Px,
        Y => Py,
        _ => Pz,
    };

    let mut out = MomentState::<T>::zero();
    for (ia, qa) in [X, Y, Z].into_iter().enumerate() {
        for qb in [X, Y, Z].into_iter().skip(ia) {
            out.set(qa, qb, (d(momentum(qb), qa) + d(momentum(qa), qb)) / m);
        }
    }
    for q in [X, Y, Z] {
        let qbar = mean(q);
        out.set(Px, q, (d(Px, momentum(q)) + cb * d(Py, q) - g * qbar * d(Py, Z)) / m);
        out.set(Py, q, (d(Py, momentum(q)) - cb * d(Px, q) + g * qbar * d(Px, Z)) / m);
        out.set(Pz, q, (d(Pz, momentum(q)) - k * d(q, Z)) / m);
    }
    out.set(Px, Py, -(cb * d(Px, Px) - cb * d(Py, Py) - g * px * d(Px, Z) + g * py * d(Py, Z)) / m);
    out.set(Py, Pz, (-(cb * d(Px, Pz) + g * px * d(Pz, Z)) - k * d(Py, Z)) / m);
    out.set(Px, Pz, (cb * d(Py, Pz) + g * py * d(Pz, Z) - k * d(Px, Z)) / m);
    // The 2:1 / 1:2 weights on the <p>Δ(p z) terms are deliberate, not a typo.
    out.set(Px, Px, two * (cb * d(Px, Py) + two * g * py * d(Px, Z) + g * px * d(Py, Z)) / m);
    out.set(Py, Py, -two * (cb * d(Px, Py) + g * py * d(Px, Z) + two * g * px * d(Py, Z)) / m);
    out.set(Pz, Pz, -two * k * d(Z, Pz) / m);
    out.moments
}

/// Concatenated `mean_rhs ⊕ moment_rhs`.
pub fn rhs<T: Real>(state: &MomentState<T>, params: &Params<T>) -> [T; STATE_DIM] {
    let mut out = [T::zero(); STATE_DIM];
    out[..N_MEANS].copy_from_slice(&mean_rhs(state, params));
    out[N_MEANS..].copy_from_slice(&moment_rhs(state, params));
    out
}

fn rhs_vec<T: Real>(y: &[T; STATE_DIM], params: &Params<T>) -> [T; STATE_DIM] {
    rhs(&MomentState::from_vector(y), params)
}

fn axpy<T: Real>(y: &[T; STATE_DIM], h: T, terms: &[(T, &[T; STATE_DIM])]) -> [T; STATE_DIM] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = T::zero();
        for (c, k) in terms {
            acc = acc + *c * k[i];
        }
        *o = *o + h * acc;
    }
    out
}

fn all_finite<T: Real>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// One classical fourth-order Runge–Kutta step on the 27-dimensional system.
pub fn step_rk4<T: Real>(state: &MomentState<T>, params: &Params<T>, dt: T) -> Result<MomentState<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("rk4 step needs dt > 0, got {dt}")));
    }
    let y = state.to_vector();
    let half = T::half();
    let k1 = rhs_vec(&y, params);
    let k2 = rhs_vec(&axpy(&y, dt * half, &[(T::one(), &k1)]), params);
    let k3 = rhs_vec(&axpy(&y, dt * half, &[(T::one(), &k2)]), params);
    let k4 = rhs_vec(&axpy(&y, dt, &[(T::one(), &k3)]), params);
    let sixth = T::one() / T::lit(6.0);
    let third = T::one() / T::lit(3.0);
    let next = axpy(&y, dt, &[(sixth, &k1), (third, &k2), (third, &k3), (sixth, &k4)]);
    if !all_finite(&k1) || !all_finite(&k2) || !all_finite(&k3) || !all_finite(&k4) || !all_finite(&next) {
        return Err(Error::NonFinite { time: f64::NAN });
    }
    Ok(MomentState::from_vector(&next))
}

/// Residual of the two saturable uncertainty relations. Non-negative means the relation holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty<T> {
    /// `Δ(z²)Δ(p_z²) − Δ(z p_z)² − ħ²/4`
    pub zpz: T,
    /// `Δ(p_x²)Δ(p_y²) − Δ(p_x p_y)² − ¼ e² ħ² ⟨B⟩²`
    pub pxpy: T,
}

pub fn uncertainty_measures<T: Real>(state: &MomentState<T>, params: &Params<T>) -> Uncertainty<T> {
    use Var::*;
    let hbar = params.hbar();
    let quarter = T::lit(0.25);
    let zpz = state.get(Z, Z) * state.get(Pz, Pz) - state.get(Z, Pz) * state.get(Z, Pz) - quarter * hbar * hbar;
    // B is linear in z, so <B(z)> = B(<z>) exactly.
    let eb = params.charge() * hbar * params.field().bz(state.mean_of(Z));
    let pxpy = state.get(Px, Px) * state.get(Py, Py) - state.get(Px, Py) * state.get(Px, Py) - quarter * eb * eb;
    Uncertainty { zpz, pxpy }
}

/// Per-sample monitor channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monitor<T> {
    pub energy: T,
    pub zpz_uncertainty: T,
    pub pxpy_uncertainty: T,
}

impl<T: Real> Monitor<T> {
    pub fn of(state: &MomentState<T>, params: &Params<T>) -> Self {
        let u = uncertainty_measures(state, params);
        Monitor { energy: energy(state, params), zpz_uncertainty: u.zpz, pxpy_uncertainty: u.pxpy }
    }
}

/// Accepted steps of an integration, with monitors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory<T> {
    times: Vec<T>,
    states: Vec<MomentState<T>>,
    monitors: Vec<Monitor<T>>,
}

impl<T: Real> Trajectory<T> {
    fn push(&mut self, t: T, state: MomentState<T>, params: &Params<T>) {
        debug_assert!(self.times.last().is_none_or(|last| t > *last));
        self.times.push(t);
        self.monitors.push(Monitor::of(&state, params));
        self.states.push(state);
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[MomentState<T>] {
        &self.states
    }

    pub fn monitors(&self) -> &[Monitor<T>] {
        &self.monitors
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(T, &MomentState<T>)> {
        self.times.last().copied().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, &MomentState<T>, &Monitor<T>)> {
        self.times.iter().copied().zip(self.states.iter()).zip(self.monitors.iter()).map(|((t, s), m)| (t, s, m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method<T> {
    Rk4Fixed { dt: T },
    Rk45Adaptive { rel_tol: T, abs_tol: T, dt_min: T, dt_max: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    method: Method<T>,
    t_end: T,
}

impl<T: Real> IntegratorConfig<T> {
    pub fn new(method: Method<T>, t_end: T) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(t_end >= T::zero()) || !t_end.is_finite() {
            return bad(format!("t_end must be finite and >= 0, got {t_end}"));
        }
        match method {
            Method::Rk4Fixed { dt } => {
                if !(dt > T::zero()) || !dt.is_finite() {
                    return bad(format!("dt must be > 0, got {dt}"));
                }
            }
            Method::Rk45Adaptive { rel_tol, abs_tol, dt_min, dt_max } => {
                if !(rel_tol > T::zero() && abs_tol > T::zero()) {
                    return bad(format!("tolerances must be > 0, got rel_tol={rel_tol}, abs_tol={abs_tol}"));
                }
                if !(dt_max > T::zero()) || !dt_max.is_finite() {
                    return bad(format!("dt_max must be > 0, got {dt_max}"));
                }
                if !(dt_min >= T::zero() && dt_min <= dt_max) {
                    return bad(format!("need 0 <= dt_min <= dt_max, got dt_min={dt_min}, dt_max={dt_max}"));
                }
            }
        }
        Ok(IntegratorConfig { method, t_end })
    }

    /// Adaptive Dormand–Prince with `rel_tol = abs_tol = tol`,
    /// `dt_min = 1e-12 t_end`, `dt_max = t_end / 100`.
    pub fn adaptive(t_end: T, tol: T) -> Result<Self> {
        let dt_max = if t_end > T::zero() { t_end / T::lit(100.0) } else { T::one() };
        let dt_min = T::lit(1e-12) * t_end;
        Self::new(Method::Rk45Adaptive { rel_tol: tol, abs_tol: tol, dt_min, dt_max }, t_end)
    }

    pub fn default_for(t_end: T) -> Result<Self> {
        Self::adaptive(t_end, T::lit(1e-10))
    }

    pub fn rk4(dt: T, t_end: T) -> Result<Self> {
        Self::new(Method::Rk4Fixed { dt }, t_end)
    }

    pub fn method(&self) -> Method<T> {
        self.method
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }
}

/// Integration stopped early. `partial` holds every accepted step up to the failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct Aborted<T: Real> {
    pub error: Error,
    pub partial: Trajectory<T>,
}

impl<T: Real> Aborted<T> {
    /// Time and state of the last accepted step.
    pub fn last_good(&self) -> Option<(T, &MomentState<T>)> {
        self.partial.last()
    }
}

/// Integrates from `t = 0` to `cfg.t_end()`. Monitors are recorded at every accepted step.
pub fn evolve<T: Real>(
    initial: &MomentState<T>,
    params: &Params<T>,
    cfg: &IntegratorConfig<T>,
) -> std::result::Result<Trajectory<T>, Aborted<T>> {
    let mut traj = Trajectory::default();
    if !initial.is_finite() {
        return Err(Aborted { error: Error::InvalidArgument("initial state is not finite".into()), partial: traj });
    }
    traj.push(T::zero(), *initial, params);
    let res = match cfg.method {
        Method::Rk4Fixed { dt } => run_rk4(&mut traj, params, dt, cfg.t_end),
        Method::Rk45Adaptive { rel_tol, abs_tol, dt_min, dt_max } => {
            run_dopri(&mut traj, params, Tolerance { rel_tol, abs_tol }, dt_min, dt_max, cfg.t_end)
        }
    };
    match res {
        Ok(()) => Ok(traj),
        Err(error) => Err(Aborted { error, partial: traj }),
    }
}

fn to_f64<T: Real>(t: T) -> f64 {
    t.to_f64().unwrap_or(f64::NAN)
}

fn run_rk4<T: Real>(traj: &mut Trajectory<T>, params: &Params<T>, dt: T, t_end: T) -> Result<()> {
    let mut k = 0usize;
    let (mut t, mut state) = (T::zero(), traj.states[0]);
    while t < t_end {
        k += 1;
        // Grid times are k*dt, never accumulated, so long runs do not drift off the grid.
        let next_t = (T::from_count(k) * dt).min(t_end);
        state = step_rk4(&state, params, next_t - t).map_err(|e| match e {
            Error::NonFinite { .. } => Error::NonFinite { time: to_f64(t) },
            other => other,
        })?;
        t = next_t;
        traj.push(t, state, params);
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Tolerance<T> {
    rel_tol: T,
    abs_tol: T,
}

// Dormand–Prince 5(4) tableau. Stage times are omitted: the system is autonomous.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Accepted steps whose error is below this fraction of the tolerance double the step.
const GROW_BELOW: f64 = 1.0 / 64.0;

struct DopriStep<T> {
    y: [T; STATE_DIM],
    k_last: [T; STATE_DIM],
    err: T,
}

fn dopri_step<T: Real>(
    y: &[T; STATE_DIM],
    k1: &[T; STATE_DIM],
    h: T,
    params: &Params<T>,
    tol: Tolerance<T>,
) -> DopriStep<T> {
    let mut ks: Vec<[T; STATE_DIM]> = Vec::with_capacity(7);
    ks.push(*k1);
    for row in A.iter().skip(1) {
        let terms: Vec<(T, &[T; STATE_DIM])> = ks.iter().enumerate().map(|(j, k)| (T::lit(row[j]), k)).collect();
        let stage = axpy(y, h, &terms);
        ks.push(rhs_vec(&stage, params));
    }
    // The last stage is evaluated at the fifth-order solution (FSAL).
    let terms: Vec<(T, &[T; STATE_DIM])> = ks.iter().take(6).enumerate().map(|(j, k)| (T::lit(B5[j]), k)).collect();
    let y_new = axpy(y, h, &terms);
    let mut err = T::zero();
    for i in 0..STATE_DIM {
        let mut e = T::zero();
        for (j, k) in ks.iter().enumerate() {
            e = e + T::lit(B5[j] - B4[j]) * k[i];
        }
        let scale = tol.abs_tol + tol.rel_tol * y[i].abs().max(y_new[i].abs());
        let ratio = (h * e).abs() / scale;
        // NaN compares false with max, so propagate it explicitly.
        err = if ratio.is_nan() { T::nan() } else { err.max(ratio) };
        if err.is_nan() {
            break;
        }
    }
    if !all_finite(&y_new) {
        err = T::nan();
    }
    DopriStep { y: y_new, k_last: ks[6], err }
}

fn run_dopri<T: Real>(
    traj: &mut Trajectory<T>,
    params: &Params<T>,
    tol: Tolerance<T>,
    dt_min: T,
    dt_max: T,
    t_end: T,
) -> Result<()> {
    let mut t = T::zero();
    let mut y = traj.states[0].to_vector();
    let mut k1 = rhs_vec(&y, params);
    if !all_finite(&k1) {
        return Err(Error::NonFinite { time: 0.0 });
    }
    let mut h = dt_max;
    let grow = T::lit(GROW_BELOW);
    while t < t_end {
        let remaining = t_end - t;
        let last = remaining <= h;
        let h_try = if last { remaining } else { h };
        let step = dopri_step(&y, &k1, h_try, params, tol);
        if step.err <= T::one() {
            t = if last { t_end } else { t + h_try };
            y = step.y;
            k1 = step.k_last;
            traj.push(t, MomentState::from_vector(&y), params);
            if !last && step.err <= grow {
                h = (h * T::two()).min(dt_max);
            }
        } else {
            h = h_try * T::half();
            if h < dt_min || t + h == t {
                return Err(Error::StepUnderflow { time: to_f64(t), dt: to_f64(h) });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FieldModel;
    use Var::*;

    fn unit_linear() -> Params<f64> {
        Params::unit(FieldModel::LinearZ { mu: 1.0 })
    }

    #[test]
    fn mean_rhs_lorentz_force() {
        let s = MomentState::point([0.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        let d = mean_rhs(&s, &unit_linear());
        assert_eq!(d, [0.0, 1.0, 0.0, 1.0, 0.0, -1.0]);
    }

    #[test]
    fn mean_rhs_moment_correction() {
        let s = MomentState::zero().with(Z, Py, 0.2);
        let d = mean_rhs(&s, &unit_linear());
        assert_eq!(d[3], 0.2);
        let s = MomentState::zero().with(Z, Px, 0.2);
        assert_eq!(mean_rhs(&s, &unit_linear())[4], -0.2);
        assert_eq!(mean_rhs(&MomentState::zero(), &unit_linear()), [0.0; 6]);
    }

    #[test]
    fn constant_field_drops_gradient_corrections() {
        let p = Params::unit(FieldModel::ConstantZ { b0: 2.0 });
        let s = MomentState::point([0.0, 0.0, 5.0, 1.0, 0.5, 0.0]).with(Z, Py, 0.3).with(Z, Px, 0.1);
        let d = mean_rhs(&s, &p);
        assert_eq!(d[3], 1.0);
        assert_eq!(d[4], -2.0);
    }

    #[test]
    fn moment_rhs_vanishes_without_moments() {
        let s = MomentState::point([0.3, -1.0, 2.0, 0.7, 0.1, -0.4]);
        assert_eq!(moment_rhs(&s, &unit_linear()), [0.0; N_MOMENTS]);
    }

    #[test]
    fn momentum_fluctuation_single_term() {
        let s = MomentState::point([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).with(Px, Py, 1.0);
        let d = MomentState { mean: [0.0; 6], moments: moment_rhs(&s, &unit_linear()) };
        let expected = [((Px, Px), 2.0), ((Py, Py), -2.0), ((X, Py), 1.0), ((Y, Px), 1.0)];
        for idx in crate::state::MomentIndex::all() {
            let (a, b) = idx.vars();
            let want = expected.iter().find(|(k, _)| *k == (a, b)).map_or(0.0, |(_, v)| *v);
            assert_eq!(d.get(a, b), want, "{idx}");
        }
    }

    #[test]
    fn momentum_fluctuation_asymmetric_weights() {
        // Δ(p_x z) = 1 with <p_y> = 1 feeds Δ(p_x²) with weight 4 and Δ(p_y²) with weight -2.
        let s = MomentState::point([0.0, 0.0, 0.0, 0.0, 1.0, 0.0]).with(Px, Z, 1.0);
        let d = MomentState { mean: [0.0; 6], moments: moment_rhs(&s, &unit_linear()) };
        assert_eq!(d.get(Px, Px), 4.0);
        assert_eq!(d.get(Py, Py), -2.0);
    }

    #[test]
    fn uncertainty_examples() {
        let p = unit_linear();
        let u = uncertainty_measures(&MomentState::point([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]), &p);
        assert_eq!((u.zpz, u.pxpy), (-0.25, -0.25));
        let s = MomentState::zero().with(Z, Z, 1.0).with(Pz, Pz, 1.0);
        assert_eq!(uncertainty_measures(&s, &p).zpz, 0.75);
    }

    #[test]
    fn rk4_tiny_step_is_identity() {
        let s = MomentState::point([0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).with(Z, Z, 0.5);
        let next = step_rk4(&s, &unit_linear(), 1e-300).unwrap();
        let (a, b) = (next.to_vector(), s.to_vector());
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= f64::EPSILON * y.abs().max(1.0)));
        assert!(step_rk4(&s, &unit_linear(), 0.0).is_err());
    }

    #[test]
    fn rk4_harmonic_step_error_is_fifth_order() {
        let p = Params::unit(FieldModel::ConstantZ { b0: 0.0 });
        let s = MomentState::point([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let err = |dt: f64| {
            let n = step_rk4(&s, &p, dt).unwrap();
            (n.mean[2] - dt.cos()).abs().max((n.mean[5] + dt.sin()).abs())
        };
        let (e1, e2) = (err(0.1), err(0.05));
        let order = (e1 / e2).log2();
        assert!((order - 5.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn evolve_zero_length() {
        let s = MomentState::point([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let cfg = IntegratorConfig::default_for(0.0).unwrap();
        let traj = evolve(&s, &unit_linear(), &cfg).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.states()[0], s);
        assert_eq!(traj.times()[0], 0.0);
    }

    #[test]
    fn evolve_harmonic_closed_form() {
        let p = Params::unit(FieldModel::LinearZ { mu: 0.0 });
        let s = MomentState::point([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let cfg = IntegratorConfig::default_for(10.0).unwrap();
        let traj = evolve(&s, &p, &cfg).unwrap();
        let (t, last) = traj.last().unwrap();
        assert_eq!(t, 10.0);
        assert!((last.mean[2] - 10f64.cos()).abs() < 1e-8);
        assert!(traj.times().windows(2).all(|w| w[1] > w[0]));
        assert_eq!(traj.monitors().len(), traj.len());
    }

    #[test]
    fn evolve_rk4_grid_lands_on_t_end() {
        let s = MomentState::point([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let cfg = IntegratorConfig::rk4(0.3, 1.0).unwrap();
        let traj = evolve(&s, &unit_linear(), &cfg).unwrap();
        assert_eq!(traj.times(), &[0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
    }

    #[test]
    fn evolve_underflow_keeps_partial_output() {
        let s = MomentState::point([0.0, 0.0, 1.0, 0.5, 0.0, 0.0]).with(Z, Z, 0.5);
        let method = Method::Rk45Adaptive { rel_tol: 1e-16, abs_tol: 1e-16, dt_min: 0.5, dt_max: 1.0 };
        let cfg = IntegratorConfig::new(method, 10.0).unwrap();
        let aborted = evolve(&s, &unit_linear(), &cfg).unwrap_err();
        assert!(matches!(aborted.error, Error::StepUnderflow { .. }));
        let (t, last) = aborted.last_good().unwrap();
        assert_eq!(t, 0.0);
        assert_eq!(*last, s);
    }

    #[test]
    fn evolve_reports_non_finite() {
        let s = MomentState::point([0.0, 0.0, 1e200, 1e200, 1e200, 0.0]);
        let cfg = IntegratorConfig::rk4(1.0, 1.0).unwrap();
        let aborted = evolve(&s, &unit_linear(), &cfg).unwrap_err();
        assert!(matches!(aborted.error, Error::NonFinite { .. }));
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::rk4(0.0, 1.0).is_err());
        assert!(IntegratorConfig::rk4(0.1, -1.0).is_err());
        let m = |r, a, lo, hi| Method::Rk45Adaptive { rel_tol: r, abs_tol: a, dt_min: lo, dt_max: hi };
        assert!(IntegratorConfig::new(m(0.0, 1e-9, 1e-9, 0.1), 1.0).is_err());
        assert!(IntegratorConfig::new(m(1e-9, 1e-9, 0.2, 0.1), 1.0).is_err());
        assert!(IntegratorConfig::new(m(1e-9, 1e-9, 1e-9, 0.1), 1.0).is_ok());
    }
}
