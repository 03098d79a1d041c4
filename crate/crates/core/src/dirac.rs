//! Gamma matrices in the Dirac (Bjorken–Drell) representation and the Dirac
//! operators built from them: velocity û^μ = cγ^μ, Hamiltonian Ĥ = û^μπ_μ,
//! spin tensor Ŝ^{μν}, spin along a direction ŝ_n, acceleration â^μ and the
//! dipole operator Φ̂.
//!
//! Everything is in natural units (ħ = c = 1); the mass enters explicitly.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::minkowski::{FourVector, ThreeVector};
use crate::tensor::SpinTensor;

pub type Spinor = Vector4<Complex64>;
pub type DiracMatrix = Matrix4<Complex64>;
pub type PauliMatrix = Matrix2<Complex64>;

/// Relative tolerance on π·π = (mc)² when building operators from a momentum.
pub const ON_SHELL_TOLERANCE: f64 = 1e-9;

/// Tolerance for unit direction vectors.
pub const UNIT_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli(j: usize) -> Result<PauliMatrix> {
    Ok(match j {
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => return Err(Error::IndexOutOfRange(j)),
    })
}

/// σ_n = n^j σ^j
pub fn pauli_along(n: &ThreeVector) -> PauliMatrix {
    (1..=3).map(|j| pauli(j).unwrap() * Complex64::from(n[j - 1])).fold(PauliMatrix::zeros(), |a, b| a + b)
}

fn block(a: &PauliMatrix, b: &PauliMatrix, c: &PauliMatrix, d: &PauliMatrix) -> DiracMatrix {
    let mut m = DiracMatrix::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// γ⁰ = diag(I₂, −I₂), γ^j = [[0, σ^j], [−σ^j, 0]].
pub fn gamma(mu: usize) -> Result<DiracMatrix> {
    let id = PauliMatrix::identity();
    let zero = PauliMatrix::zeros();
    match mu {
        0 => Ok(block(&id, &zero, &zero, &-id)),
        1..=3 => {
            let s = pauli(mu)?;
            Ok(block(&zero, &s, &-s, &zero))
        }
        _ => Err(Error::IndexOutOfRange(mu)),
    }
}

pub fn gammas() -> [DiracMatrix; 4] {
    [0, 1, 2, 3].map(|mu| gamma(mu).unwrap())
}

/// Dirac velocity operator û^μ = cγ^μ.
pub fn velocity_op(mu: usize) -> Result<DiracMatrix> {
    gamma(mu)
}

/// Largest entry modulus; used for all matrix comparisons.
pub fn max_norm(m: &DiracMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &DiracMatrix, b: &DiracMatrix, tol: f64) -> bool {
    max_norm(&(a - b)) <= tol
}

pub fn commutator(a: &DiracMatrix, b: &DiracMatrix) -> DiracMatrix {
    a * b - b * a
}

pub fn check_on_shell(momentum: &FourVector, mass: f64) -> Result<()> {
    if !(mass > 0.0) {
        return Err(Error::NonPositiveMass(mass));
    }
    let value = momentum.norm_sq();
    let expected = mass * mass;
    if !((value - expected).abs() <= ON_SHELL_TOLERANCE * expected) {
        return Err(Error::OffShell { value, expected });
    }
    Ok(())
}

/// Ĥ = cγ^μπ_μ without the on-shell check.
pub fn hamiltonian_unchecked(momentum: &FourVector) -> DiracMatrix {
    let low = momentum.lower();
    gammas().iter().zip(low).fold(DiracMatrix::zeros(), |acc, (g, p)| acc + g * Complex64::from(p))
}

/// Barut–Zanghi Hamiltonian Ĥ = û^μπ_μ for an on-shell momentum.
pub fn hamiltonian_op(momentum: &FourVector, mass: f64) -> Result<DiracMatrix> {
    check_on_shell(momentum, mass)?;
    Ok(hamiltonian_unchecked(momentum))
}

/// Ŝ^{μν} = −(iħ/4)[γ^μγ^ν − γ^νγ^μ]
pub fn spin_tensor_op(mu: usize, nu: usize) -> Result<DiracMatrix> {
    let (a, b) = (gamma(mu)?, gamma(nu)?);
    Ok(commutator(&a, &b) * Complex64::new(0.0, -0.25))
}

/// All sixteen Ŝ^{μν}, indexed `[mu][nu]`.
pub fn spin_tensor_ops() -> [[DiracMatrix; 4]; 4] {
    [0, 1, 2, 3].map(|mu| [0, 1, 2, 3].map(|nu| spin_tensor_op(mu, nu).unwrap()))
}

/// Spin along axis j: ŝ^j = −½ ε_{jkl} Ŝ^{kl} = (ħ/2) diag(σ^j, σ^j).
pub fn spin_axis_op(j: usize) -> Result<DiracMatrix> {
    let (k, l) = match j {
        1 => (2, 3),
        2 => (3, 1),
        3 => (1, 2),
        _ => return Err(Error::IndexOutOfRange(j)),
    };
    Ok(-spin_tensor_op(k, l)?)
}

/// Electric-dipole operator component d̂^j = Ŝ^{0j}.
pub fn dipole_axis_op(j: usize) -> Result<DiracMatrix> {
    if !(1..=3).contains(&j) {
        return Err(Error::IndexOutOfRange(j));
    }
    spin_tensor_op(0, j)
}

pub fn check_unit(n: &ThreeVector) -> Result<()> {
    let norm = n.norm();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NonUnitVector(norm));
    }
    Ok(())
}

/// ŝ_n = n^j ŝ^j = (ħ/2) diag(σ_n, σ_n)
pub fn spin_direction_op(n: &ThreeVector) -> Result<DiracMatrix> {
    check_unit(n)?;
    let half = pauli_along(n) * Complex64::from(0.5);
    let zero = PauliMatrix::zeros();
    Ok(block(&half, &zero, &zero, &half))
}

/// â^μ = (i/ħ)[Ĥ, û^μ]
pub fn acceleration_op(momentum: &FourVector, mass: f64, mu: usize) -> Result<DiracMatrix> {
    let h = hamiltonian_op(momentum, mass)?;
    Ok(commutator(&h, &velocity_op(mu)?) * I)
}

/// Φ̂ = −(q/m) Ŝ^{μν} F_{μν}
pub fn dipole_op(field: &SpinTensor, charge: f64, mass: f64) -> DiracMatrix {
    let ops = spin_tensor_ops();
    let mut sum = DiracMatrix::zeros();
    for (mu, row) in ops.iter().enumerate() {
        for (nu, op) in row.iter().enumerate() {
            let f = field.get_lower(mu, nu);
            if f != 0.0 {
                sum += op * Complex64::from(f);
            }
        }
    }
    sum * Complex64::from(-charge / mass)
}

/// Φ̂ = −(2q/m)(B·ŝ + (1/c)E·d̂), assembled from the 3-vector operators.
pub fn dipole_op_from_fields(e: &ThreeVector, b: &ThreeVector, charge: f64, mass: f64) -> DiracMatrix {
    let mut sum = DiracMatrix::zeros();
    for j in 1..=3 {
        sum += spin_axis_op(j).unwrap() * Complex64::from(b[j - 1]);
        sum += dipole_axis_op(j).unwrap() * Complex64::from(e[j - 1]);
    }
    sum * Complex64::from(-2.0 * charge / mass)
}

/// Dirac adjoint ψ̄ = ψ*γ⁰, returned as a row.
pub fn adjoint_bar(psi: &Spinor) -> nalgebra::RowVector4<Complex64> {
    let mut row = psi.adjoint();
    row[2] = -row[2];
    row[3] = -row[3];
    row
}
