//! Minkowski four-vectors with metric diag(1, −1, −1, −1), Lorentz boosts, and
//! the phase / proper-time maps of a free electron.
//!
//! Components are stored contravariant (x^μ); covariant components are formed
//! on demand with [`FourVector::lower`].

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{Dimension, UnitSystem, Units};

pub type ThreeVector = Vector3<f64>;

/// Diagonal of the metric tensor g_{μν} = g^{μν}.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[inline]
pub fn metric(mu: usize) -> f64 {
    METRIC[mu]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    pub components: [f64; 4],
    #[serde(default)]
    pub units: Units,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector { components: [0.0; 4], units: Units::Natural };

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { components: [t, x, y, z], units: Units::Natural }
    }

    pub fn from_parts(time: f64, space: ThreeVector) -> Self {
        Self::new(time, space.x, space.y, space.z)
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    /// Unit vector along axis `mu`.
    pub fn basis(mu: usize) -> Self {
        let mut v = Self::ZERO;
        v.components[mu] = 1.0;
        v
    }

    pub fn time(&self) -> f64 {
        self.components[0]
    }

    pub fn spatial(&self) -> ThreeVector {
        Vector3::new(self.components[1], self.components[2], self.components[3])
    }

    /// Covariant components a_μ = g_{μν} a^ν.
    pub fn lower(&self) -> [f64; 4] {
        let c = &self.components;
        [c[0], -c[1], -c[2], -c[3]]
    }

    /// Inverse of [`lower`](Self::lower): builds a^μ from a_μ.
    pub fn raise(covariant: [f64; 4]) -> Self {
        Self::new(covariant[0], -covariant[1], -covariant[2], -covariant[3])
    }

    /// a^μ b_μ, assuming both vectors share a unit system.
    #[inline]
    pub fn dot(&self, other: &FourVector) -> f64 {
        debug_assert_eq!(self.units, other.units);
        let (a, b) = (&self.components, &other.components);
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        self.components.iter().zip(other.components.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    /// Converts natural-unit components of the given dimension to SI.
    pub fn to_si(&self, dim: Dimension) -> FourVector {
        debug_assert_eq!(self.units, Units::Natural);
        let s = UnitSystem::si().scale(dim);
        FourVector { components: self.components.map(|c| c * s), units: Units::Si }
    }

    pub fn to_natural(&self, dim: Dimension) -> FourVector {
        debug_assert_eq!(self.units, Units::Si);
        let s = UnitSystem::si().scale(dim);
        FourVector { components: self.components.map(|c| c / s), units: Units::Natural }
    }
}

impl Default for FourVector {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, mu: usize) -> &f64 {
        &self.components[mu]
    }
}

impl IndexMut<usize> for FourVector {
    fn index_mut(&mut self, mu: usize) -> &mut f64 {
        &mut self.components[mu]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        debug_assert_eq!(self.units, rhs.units);
        let mut out = self;
        for mu in 0..4 {
            out.components[mu] += rhs.components[mu];
        }
        out
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, rhs: FourVector) {
        *self = *self + rhs;
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        self + (-rhs)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector { components: self.components.map(|c| -c), units: self.units }
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, k: f64) -> FourVector {
        FourVector { components: self.components.map(|c| c * k), units: self.units }
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        v * self
    }
}

/// Checked inner product a^μ b_μ = a⁰b⁰ − a·b.
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> Result<f64> {
    if a.units != b.units {
        return Err(Error::UnitMismatch(a.units, b.units));
    }
    Ok(a.dot(b))
}

/// A pure boost Λ^μ_ν. Applying it to the rest-frame vector (m, 0) gives
/// (γm, γmV).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzBoost {
    pub matrix: Matrix4<f64>,
}

impl LorentzBoost {
    pub fn identity() -> Self {
        Self { matrix: Matrix4::identity() }
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        let r = self.matrix * Vector4::from(v.components);
        FourVector { components: [r[0], r[1], r[2], r[3]], units: v.units }
    }

    pub fn compose(&self, other: &LorentzBoost) -> LorentzBoost {
        LorentzBoost { matrix: self.matrix * other.matrix }
    }
}

/// Lorentz factor γ = (1 − V²)^(−1/2) in natural units.
pub fn lorentz_factor(velocity: &ThreeVector) -> Result<f64> {
    let beta2 = velocity.norm_squared();
    if !(beta2 < 1.0) {
        return Err(Error::Superluminal { speed: beta2.sqrt() });
    }
    Ok(1.0 / (1.0 - beta2).sqrt())
}

/// Boost matrix for velocity `velocity` (natural units, |V| < 1).
pub fn boost(velocity: &ThreeVector) -> Result<LorentzBoost> {
    let gamma = lorentz_factor(velocity)?;
    let beta2 = velocity.norm_squared();
    if beta2 == 0.0 {
        return Ok(LorentzBoost::identity());
    }
    let b = velocity;
    let k = (gamma - 1.0) / beta2;
    let mut m = Matrix4::identity();
    m[(0, 0)] = gamma;
    for i in 0..3 {
        m[(0, i + 1)] = gamma * b[i];
        m[(i + 1, 0)] = gamma * b[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] += k * b[i] * b[j];
        }
    }
    Ok(LorentzBoost { matrix: m })
}

/// Wave-function phase θ(x) = x^μ π_μ / ħ.
pub fn phase(x: &FourVector, momentum: &FourVector) -> f64 {
    x.dot(momentum)
}

/// Proper time at the inertia center, τ(x) = x^μ π_μ / (mc²).
pub fn proper_time(x: &FourVector, momentum: &FourVector, mass: f64) -> f64 {
    x.dot(momentum) / mass
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_of_unit_vectors() {
        assert_eq!(minkowski_dot(&FourVector::basis(0), &FourVector::basis(0)).unwrap(), 1.0);
        assert_eq!(minkowski_dot(&FourVector::basis(1), &FourVector::basis(1)).unwrap(), -1.0);
    }

    #[test]
    fn dot_rejects_mixed_units() {
        let a = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let b = a.with_units(Units::Si);
        assert!(matches!(minkowski_dot(&a, &b), Err(Error::UnitMismatch(..))));
    }

    #[test]
    fn lower_raise_involution() {
        let a = FourVector::new(1.5, -0.2, 3.0, 0.7);
        assert_eq!(FourVector::raise(a.lower()), a);
    }

    #[test]
    fn zero_boost_is_identity() {
        let b = boost(&ThreeVector::zeros()).unwrap();
        assert_eq!(b.matrix, Matrix4::identity());
    }

    #[test]
    fn boost_rejects_luminal_speed() {
        assert!(matches!(boost(&ThreeVector::new(1.0, 0.0, 0.0)), Err(Error::Superluminal { .. })));
        assert!(boost(&ThreeVector::new(0.6, 0.6, 0.6)).is_err());
    }

    #[test]
    fn boost_inverse_pair() {
        let v = ThreeVector::new(0.3, -0.5, 0.4);
        let prod = boost(&v).unwrap().compose(&boost(&-v).unwrap());
        let err = (prod.matrix - Matrix4::identity()).abs().max();
        assert!(err < 1e-12, "err = {err}");
    }

    #[test]
    fn boost_rest_momentum() {
        // γ for V = 0.6: 1/sqrt(1 - 0.36) = 1/0.8
        let gamma = 1.0 / (1.0f64 - 0.36).sqrt();
        assert!((gamma - 1.25).abs() < 1e-15);
        let p = boost(&ThreeVector::new(0.6, 0.0, 0.0)).unwrap().apply(&FourVector::new(1.0, 0.0, 0.0, 0.0));
        assert!(p.max_abs_diff(&FourVector::new(gamma, gamma * 0.6, 0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn rest_frame_phase_is_half_zitter_angle() {
        let tau = 0.37;
        let x = FourVector::new(tau, 0.4, -1.0, 2.0);
        let p = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let omega0 = 2.0;
        assert!((phase(&x, &p) - omega0 * tau / 2.0).abs() < 1e-15);
        assert!((proper_time(&x, &p, 1.0) - tau).abs() < 1e-15);
    }

    #[test]
    fn moving_frame_phase() {
        let e = 1.09f64.sqrt();
        let p = FourVector::new(e, 0.3, 0.0, 0.0);
        let x = FourVector::new(2.0, 1.0, 0.0, 0.0);
        assert!((phase(&x, &p) - (e * 2.0 - 0.3)).abs() < 1e-15);
        assert_eq!(phase(&FourVector::ZERO, &p), 0.0);
        assert!((minkowski_dot(&p, &p).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn proper_time_is_frame_independent() {
        let rest_x = FourVector::new(0.8, 0.1, 0.2, -0.3);
        let rest_p = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let b = boost(&ThreeVector::new(0.2, 0.5, -0.1)).unwrap();
        let (x, p) = (b.apply(&rest_x), b.apply(&rest_p));
        assert!((proper_time(&x, &p, 1.0) - proper_time(&rest_x, &rest_p, 1.0)).abs() < 1e-14);
    }
}
