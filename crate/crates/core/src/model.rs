//! Physical parameters, field models and the commutator algebra of kinematical momenta.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spatial axis. Also labels momentum components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Totally antisymmetric symbol with `ε_xyz = +1`.
pub fn levi_civita(i: Axis, j: Axis, k: Axis) -> i8 {
    let (a, b, c) = (i.index() as i8, j.index() as i8, k.index() as i8);
    // (a-b)(b-c)(c-a)/2 is the permutation sign for labels in {0,1,2}.
    (a - b) * (b - c) * (c - a) / 2
}

/// Magnetic field along z. The set of models is closed: a homogeneous field,
/// or a field growing linearly along z whose divergence is a constant monopole density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldModel<T> {
    ConstantZ { b0: T },
    LinearZ { mu: T },
}

impl<T: Real> FieldModel<T> {
    /// `B^z` at height `z`.
    pub fn bz(&self, z: T) -> T {
        match *self {
            FieldModel::ConstantZ { b0 } => b0,
            FieldModel::LinearZ { mu } => mu * z,
        }
    }

    /// Full field vector; the transverse components vanish identically.
    pub fn eval(&self, position: [T; 3]) -> [T; 3] {
        [T::zero(), T::zero(), self.bz(position[2])]
    }

    /// `∂B^z/∂z`, equal to the divergence for both models.
    pub fn gradient(&self) -> T {
        match *self {
            FieldModel::ConstantZ { .. } => T::zero(),
            FieldModel::LinearZ { mu } => mu,
        }
    }

    pub fn divergence(&self) -> T {
        self.gradient()
    }

    pub fn is_linear_z(&self) -> bool {
        matches!(self, FieldModel::LinearZ { .. })
    }
}

/// Free function form of [`FieldModel::eval`].
pub fn field_eval<T: Real>(field: &FieldModel<T>, position: [T; 3]) -> [T; 3] {
    field.eval(position)
}

/// Physical constants of the trapped particle plus the field it moves in.
///
/// The Hamiltonian is `p²/2m + ½ m ω² z²`; the magnetic field enters only
/// through the momentum commutators `[p_j, p_k] = i ħ e ε_jkl B^l`.
/// A negative charge is accepted, but every closed form was checked with `e > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params<T> {
    mass: T,
    charge: T,
    omega: T,
    hbar: T,
    field: FieldModel<T>,
}

fn finite<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be finite, got {value}") })
    }
}

impl<T: Real> Params<T> {
    pub fn new(mass: T, charge: T, omega: T, hbar: T, field: FieldModel<T>) -> Result<Self> {
        if !(finite("mass", mass)? > T::zero()) {
            return Err(Error::InvalidParameter { name: "mass", reason: format!("must be > 0, got {mass}") });
        }
        if !(finite("hbar", hbar)? > T::zero()) {
            return Err(Error::InvalidParameter { name: "hbar", reason: format!("must be > 0, got {hbar}") });
        }
        if finite("omega", omega)? < T::zero() {
            return Err(Error::InvalidParameter { name: "omega", reason: format!("must be >= 0, got {omega}") });
        }
        finite("charge", charge)?;
        match field {
            FieldModel::ConstantZ { b0 } => finite("b0", b0)?,
            FieldModel::LinearZ { mu } => finite("mu", mu)?,
        };
        Ok(Params { mass, charge, omega, hbar, field })
    }

    /// `m = e = ω = ħ = 1` in the given field.
    pub fn unit(field: FieldModel<T>) -> Self {
        Params { mass: T::one(), charge: T::one(), omega: T::one(), hbar: T::one(), field }
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn charge(&self) -> T {
        self.charge
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn field(&self) -> FieldModel<T> {
        self.field
    }

    pub fn with_mass(self, mass: T) -> Result<Self> {
        Self::new(mass, self.charge, self.omega, self.hbar, self.field)
    }

    pub fn with_charge(self, charge: T) -> Result<Self> {
        Self::new(self.mass, charge, self.omega, self.hbar, self.field)
    }

    pub fn with_omega(self, omega: T) -> Result<Self> {
        Self::new(self.mass, self.charge, omega, self.hbar, self.field)
    }

    pub fn with_hbar(self, hbar: T) -> Result<Self> {
        Self::new(self.mass, self.charge, self.omega, hbar, self.field)
    }

    pub fn with_field(self, field: FieldModel<T>) -> Result<Self> {
        Self::new(self.mass, self.charge, self.omega, self.hbar, field)
    }

    /// Cyclotron frequency `e B / m` for the field value `b`.
    pub fn cyclotron_frequency(&self, b: T) -> T {
        self.charge * b / self.mass
    }

    /// `m² ω²`, the stiffness linking `Δ(p_z²)` and `Δ(z²)` in a stationary state.
    pub fn trap_stiffness(&self) -> T {
        self.mass * self.mass * self.omega * self.omega
    }
}

/// `C` in `[p_j, p_k] = i ħ C`, i.e. `C = e Σ_l ε_jkl B^l(position)`.
pub fn momentum_commutator_coefficient<T: Real>(params: &Params<T>, j: Axis, k: Axis, position: [T; 3]) -> T {
    let b = params.field.eval(position);
    let mut sum = T::zero();
    for l in Axis::ALL {
        match levi_civita(j, k, l) {
            1 => sum = sum + b[l.index()],
            -1 => sum = sum - b[l.index()],
            _ => {}
        }
    }
    params.charge * sum
}

/// Cyclic sum of nested momentum commutators, `−e ħ² div B`.
/// Non-zero exactly when the observable algebra is non-associative.
pub fn jacobiator<T: Real>(params: &Params<T>) -> T {
    -params.charge * params.hbar * params.hbar * params.field.divergence()
}
