//! Real antisymmetric rank-2 tensors T^{μν}.
//!
//! Used for the spin tensor S^{μν}, its constant part Σ^{μν}, orbital and total
//! angular momentum L^{μν}, J^{μν}, and the field tensor F^{μν}. Only the six
//! independent components are stored, so T^{μν} = −T^{νμ} holds exactly.
//!
//! Polar/axial split: the time part is t^j = T^{0j} and the axial part a is
//! defined by T^{ij} = −ε_{ijk} a^k. With this convention the spin tensor
//! S = −m(z∧u) has time part d = m(u⁰z − z⁰u) and axial part s = z × mu, and
//! the field tensor has time part −E/c and axial part B.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{FourVector, ThreeVector, METRIC};

/// Storage order of the independent components.
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpinTensor {
    /// T^{01}, T^{02}, T^{03}, T^{23}, T^{31}, T^{12}
    pub components: [f64; 6],
}

/// Electromagnetic field tensor F^{μν}.
pub type FieldTensor = SpinTensor;

impl SpinTensor {
    pub const ZERO: SpinTensor = SpinTensor { components: [0.0; 6] };

    /// Builds a tensor from a full 4×4 array, rejecting anything that is not
    /// antisymmetric to within 1e−12 of its largest entry.
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Result<Self> {
        let scale = m.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                worst = worst.max((m[mu][nu] + m[nu][mu]).abs());
            }
        }
        if worst > 1e-12 * scale {
            return Err(Error::NotAntisymmetric(worst));
        }
        let mut components = [0.0; 6];
        for (k, &(mu, nu)) in PAIRS.iter().enumerate() {
            components[k] = 0.5 * (m[mu][nu] - m[nu][mu]);
        }
        Ok(Self { components })
    }

    pub fn from_time_axial(time: &ThreeVector, axial: &ThreeVector) -> Self {
        Self { components: [time.x, time.y, time.z, -axial.x, -axial.y, -axial.z] }
    }

    /// F^{μν} for electric field `e` and magnetic field `b` (natural units).
    pub fn electromagnetic(e: &ThreeVector, b: &ThreeVector) -> Self {
        Self::from_time_axial(&-e, b)
    }

    /// a^μ b^ν − a^ν b^μ
    pub fn wedge(a: &FourVector, b: &FourVector) -> Self {
        let mut components = [0.0; 6];
        for (k, &(mu, nu)) in PAIRS.iter().enumerate() {
            components[k] = a[mu] * b[nu] - a[nu] * b[mu];
        }
        Self { components }
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        if mu == nu {
            return 0.0;
        }
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            if (a, b) == (mu, nu) {
                return self.components[k];
            }
            if (b, a) == (mu, nu) {
                return -self.components[k];
            }
        }
        unreachable!("indices out of range: ({mu}, {nu})")
    }

    /// Covariant component T_{μν} = g_{μμ} g_{νν} T^{μν}.
    pub fn get_lower(&self, mu: usize, nu: usize) -> f64 {
        METRIC[mu] * METRIC[nu] * self.get(mu, nu)
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (mu, row) in m.iter_mut().enumerate() {
            for (nu, v) in row.iter_mut().enumerate() {
                *v = self.get(mu, nu);
            }
        }
        m
    }

    /// (T^{01}, T^{02}, T^{03})
    pub fn time_part(&self) -> ThreeVector {
        ThreeVector::new(self.components[0], self.components[1], self.components[2])
    }

    /// a with T^{ij} = −ε_{ijk} a^k
    pub fn axial_part(&self) -> ThreeVector {
        ThreeVector::new(-self.components[3], -self.components[4], -self.components[5])
    }

    pub fn electric(&self) -> ThreeVector {
        -self.time_part()
    }

    pub fn magnetic(&self) -> ThreeVector {
        self.axial_part()
    }

    /// T^{μν} v_ν
    pub fn contract(&self, v: &FourVector) -> FourVector {
        let low = v.lower();
        let mut out = FourVector::ZERO.with_units(v.units);
        for mu in 0..4 {
            out[mu] = (0..4).map(|nu| self.get(mu, nu) * low[nu]).sum();
        }
        out
    }

    /// a_μ T^{μν} b_ν
    pub fn sandwich(&self, a: &FourVector, b: &FourVector) -> f64 {
        a.dot(&self.contract(b))
    }

    /// T^{μν} O_{μν} = 2(a·a' − t·t')
    pub fn double_contract(&self, other: &SpinTensor) -> f64 {
        2.0 * (self.axial_part().dot(&other.axial_part()) - self.time_part().dot(&other.time_part()))
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SpinTensor) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }
}

impl Add for SpinTensor {
    type Output = SpinTensor;
    fn add(self, rhs: SpinTensor) -> SpinTensor {
        let mut c = self.components;
        for (a, b) in c.iter_mut().zip(rhs.components) {
            *a += b;
        }
        SpinTensor { components: c }
    }
}

impl Sub for SpinTensor {
    type Output = SpinTensor;
    fn sub(self, rhs: SpinTensor) -> SpinTensor {
        self + (-rhs)
    }
}

impl Neg for SpinTensor {
    type Output = SpinTensor;
    fn neg(self) -> SpinTensor {
        SpinTensor { components: self.components.map(|c| -c) }
    }
}

impl Mul<f64> for SpinTensor {
    type Output = SpinTensor;
    fn mul(self, k: f64) -> SpinTensor {
        SpinTensor { components: self.components.map(|c| c * k) }
    }
}
