//! Moment-state data model: means plus symmetric second-order moments.
//!
//! Canonical variable order is `(x, y, z, p_x, p_y, p_z)`. A moment
//! `Δ(ab) = ½⟨ab + ba⟩ − ⟨a⟩⟨b⟩` is stored once per unordered pair, in the
//! lexicographic layout `xx, xy, xz, xpx, xpy, xpz, yy, yz, …, pzpz`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::Params;
use crate::scalar::Real;

pub const N_MEANS: usize = 6;
pub const N_MOMENTS: usize = 21;
/// Length of the concatenated `means ⊕ moments` vector.
pub const STATE_DIM: usize = N_MEANS + N_MOMENTS;

/// Phase-space variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    Px,
    Py,
    Pz,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X, Var::Y, Var::Z, Var::Px, Var::Py, Var::Pz];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Var> {
        Var::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::Px => "px",
            Var::Py => "py",
            Var::Pz => "pz",
        }
    }
}

/// Unordered pair of variables, normalised so that `first <= second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentIndex {
    first: Var,
    second: Var,
}

impl MomentIndex {
    pub fn new(a: Var, b: Var) -> Self {
        if a <= b {
            MomentIndex { first: a, second: b }
        } else {
            MomentIndex { first: b, second: a }
        }
    }

    pub fn vars(self) -> (Var, Var) {
        (self.first, self.second)
    }

    pub fn offset(self) -> usize {
        let i = self.first.index();
        let j = self.second.index();
        i * N_MEANS - i * (i.saturating_sub(1)) / 2 + (j - i)
    }

    pub fn from_offset(offset: usize) -> Option<Self> {
        MomentIndex::all().nth(offset)
    }

    /// All 21 pairs in storage order.
    pub fn all() -> impl Iterator<Item = MomentIndex> {
        Var::ALL.into_iter().flat_map(|a| {
            Var::ALL.into_iter().filter(move |b| *b >= a).map(move |b| MomentIndex { first: a, second: b })
        })
    }

    pub fn is_diagonal(self) -> bool {
        self.first == self.second
    }

    /// Column label such as `xpy` or `pxpx`.
    pub fn name(self) -> String {
        format!("{}{}", self.first.name(), self.second.name())
    }
}

impl fmt::Display for MomentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ({}{})", self.first.name(), self.second.name())
    }
}

/// Means `(⟨x⟩,⟨y⟩,⟨z⟩,⟨p_x⟩,⟨p_y⟩,⟨p_z⟩)` and the 21 second-order moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState<T> {
    pub mean: [T; N_MEANS],
    pub moments: [T; N_MOMENTS],
}

impl<T: Real> MomentState<T> {
    /// Checked constructor: entries finite, fluctuations `Δ(a²)` non-negative.
    pub fn new(mean: [T; N_MEANS], moments: [T; N_MOMENTS]) -> Result<Self> {
        let state = MomentState { mean, moments };
        if !state.is_finite() {
            return Err(Error::InvalidArgument("moment state has non-finite entries".into()));
        }
        for idx in MomentIndex::all().filter(|i| i.is_diagonal()) {
            let v = state.moments[idx.offset()];
            if v < T::zero() {
                return Err(Error::InvalidArgument(format!("fluctuation {idx} = {v} is negative")));
            }
        }
        Ok(state)
    }

    /// Classical point state: all moments zero.
    pub fn point(mean: [T; N_MEANS]) -> Self {
        MomentState { mean, moments: [T::zero(); N_MOMENTS] }
    }

    pub fn zero() -> Self {
        Self::point([T::zero(); N_MEANS])
    }

    pub fn mean_of(&self, v: Var) -> T {
        self.mean[v.index()]
    }

    pub fn get(&self, a: Var, b: Var) -> T {
        self.moments[MomentIndex::new(a, b).offset()]
    }

    pub fn set(&mut self, a: Var, b: Var, value: T) {
        self.moments[MomentIndex::new(a, b).offset()] = value;
    }

    pub fn with(mut self, a: Var, b: Var, value: T) -> Self {
        self.set(a, b, value);
        self
    }

    pub fn is_finite(&self) -> bool {
        self.mean.iter().chain(self.moments.iter()).all(|v| v.is_finite())
    }

    /// Flat `means ⊕ moments` vector.
    pub fn to_vector(&self) -> [T; STATE_DIM] {
        let mut out = [T::zero(); STATE_DIM];
        out[..N_MEANS].copy_from_slice(&self.mean);
        out[N_MEANS..].copy_from_slice(&self.moments);
        out
    }

    pub fn from_vector(v: &[T; STATE_DIM]) -> Self {
        let mut mean = [T::zero(); N_MEANS];
        let mut moments = [T::zero(); N_MOMENTS];
        mean.copy_from_slice(&v[..N_MEANS]);
        moments.copy_from_slice(&v[N_MEANS..]);
        MomentState { mean, moments }
    }

    /// Symmetric 6×6 second-moment (covariance) matrix.
    pub fn covariance_matrix(&self) -> [[T; 6]; 6] {
        let mut m = [[T::zero(); 6]; 6];
        for a in Var::ALL {
            for b in Var::ALL {
                m[a.index()][b.index()] = self.get(a, b);
            }
        }
        m
    }
}

/// `⟨H⟩` to second order: kinetic energy of means and momentum fluctuations
/// plus the trap potential of `⟨z⟩` and `Δ(z²)`.
pub fn energy<T: Real>(state: &MomentState<T>, params: &Params<T>) -> T {
    use Var::*;
    let m = params.mass();
    let w = params.omega();
    let p = |v: Var| state.mean_of(v);
    let kinetic =
        p(Px) * p(Px) + p(Py) * p(Py) + p(Pz) * p(Pz) + state.get(Px, Px) + state.get(Py, Py) + state.get(Pz, Pz);
    let z = state.mean_of(Z);
    kinetic / (T::two() * m) + T::half() * m * w * w * (z * z + state.get(Z, Z))
}
