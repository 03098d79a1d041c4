//! Spinor bilinears of the free-electron wave function.
//!
//! Every observable is available both as a direct bilinear ψ̄Ôψ and in closed
//! form built from a handful of constant bilinears of the amplitude A. All
//! space-time derivatives are analytic: fields depend on x only through
//! θ(x) = x·π, so ∂_μ f = f'(θ) π_μ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirac::{self, adjoint_bar, commutator, gamma, spin_axis_op, spin_tensor_ops, DiracMatrix, Spinor};
use crate::minkowski::{phase, FourVector, ThreeVector};
use crate::tensor::SpinTensor;
use crate::wavefunction::{self, FreeElectron};

/// Largest imaginary part tolerated on a bilinear of a γ⁰-Hermitian operator.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// φ̄ O φ
pub fn bilinear(phi: &Spinor, op: &DiracMatrix) -> Complex64 {
    (adjoint_bar(phi) * op * phi)[(0, 0)]
}

/// Real part of φ̄ O φ. Panics if the imaginary part is not negligible, which
/// means `op` is not γ⁰-Hermitian.
pub fn observable(phi: &Spinor, op: &DiracMatrix) -> f64 {
    let z = bilinear(phi, op);
    assert!(z.im.abs() <= IMAGINARY_TOLERANCE * z.re.abs().max(1.0), "bilinear has imaginary part {}", z.im);
    z.re
}

/// φ̄ γ^μ φ as a four-vector.
pub fn vector_bilinear(phi: &Spinor) -> FourVector {
    let g = dirac::gammas();
    FourVector::new(observable(phi, &g[0]), observable(phi, &g[1]), observable(phi, &g[2]), observable(phi, &g[3]))
}

/// φ̄ Ŝ^{μν} φ
pub fn tensor_bilinear(phi: &Spinor) -> SpinTensor {
    tensor_from_ops(|op| observable(phi, op))
}

fn tensor_from_ops(mut f: impl FnMut(&DiracMatrix) -> f64) -> SpinTensor {
    let ops = spin_tensor_ops();
    let pairs = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];
    SpinTensor { components: pairs.map(|(mu, nu)| f(&ops[mu][nu])) }
}

/// Spin vector s (axial part) and electric dipole d (time part) of a spin
/// tensor: s^k with S^{ij} = −ε_{ijk}s^k, and d^j = S^{0j}.
pub fn spin_and_dipole(s: &SpinTensor) -> (ThreeVector, ThreeVector) {
    (s.axial_part(), s.time_part())
}

/// Constant bilinears that fix every free-electron observable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeBilinears {
    /// u(0) = Ā û A
    pub velocity: FourVector,
    /// u̇(0) = Ā â A
    pub acceleration: FourVector,
    /// S(0) = Ā Ŝ A
    pub spin: SpinTensor,
    /// Σ = ½ Ā [Ŝ + Ĥ Ŝ Ĥ / m²] A
    pub spin_center: SpinTensor,
    /// Ṡ(0) = Ā i[Ĥ, Ŝ] A
    pub spin_rate: SpinTensor,
}

impl AmplitudeBilinears {
    pub fn new(e: &FreeElectron) -> Self {
        let a = e.amplitude();
        let h = e.hamiltonian();
        let m2 = Complex64::from(e.mass() * e.mass());
        let i = Complex64::new(0.0, 1.0);
        let acc: Vec<f64> = (0..4).map(|mu| observable(a, &(commutator(h, &gamma(mu).unwrap()) * i))).collect();
        Self {
            velocity: vector_bilinear(a),
            acceleration: FourVector::new(acc[0], acc[1], acc[2], acc[3]),
            spin: tensor_bilinear(a),
            spin_center: tensor_from_ops(|op| observable(a, &((op + h * op * h / m2) * Complex64::from(0.5)))),
            spin_rate: tensor_from_ops(|op| observable(a, &(commutator(h, op) * i))),
        }
    }
}

/// Velocity split u = v + w into inertia-center and zitter parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocitySample {
    pub v: FourVector,
    pub w: FourVector,
    pub u: FourVector,
}

impl VelocitySample {
    fn from_total(e: &FreeElectron, u: FourVector) -> Self {
        let v = e.global_velocity();
        Self { v, w: u - v, u }
    }
}

/// u(τ) = φ̄(τ) û φ(τ) by direct evaluation.
pub fn velocity(e: &FreeElectron, tau: f64) -> VelocitySample {
    VelocitySample::from_total(e, vector_bilinear(&wavefunction::phi(e, tau)))
}

/// u(τ) = π/m + (u(0) − π/m) cos ω₀τ + (u̇(0)/ω₀) sin ω₀τ
pub fn velocity_closed_form(e: &FreeElectron, b: &AmplitudeBilinears, tau: f64) -> VelocitySample {
    let w0 = e.omega0();
    let v = e.global_velocity();
    let u = v + (b.velocity - v) * (w0 * tau).cos() + b.acceleration * ((w0 * tau).sin() / w0);
    VelocitySample::from_total(e, u)
}

/// u̇(τ) in closed form.
pub fn acceleration_closed_form(e: &FreeElectron, b: &AmplitudeBilinears, tau: f64) -> FourVector {
    let w0 = e.omega0();
    let v = e.global_velocity();
    (b.velocity - v) * (-w0 * (w0 * tau).sin()) + b.acceleration * (w0 * tau).cos()
}

/// s^j = φ̄(τ) ŝ^j φ(τ)
pub fn spin_vector(e: &FreeElectron, tau: f64) -> ThreeVector {
    let phi = wavefunction::phi(e, tau);
    ThreeVector::from_fn(|j, _| observable(&phi, &spin_axis_op(j + 1).unwrap()))
}

/// S̃^{μν}(x) = ψ̄(x) Ŝ^{μν} ψ(x)
pub fn spin_tensor_field(e: &FreeElectron, x: &FourVector) -> SpinTensor {
    tensor_bilinear(&wavefunction::psi(e, x))
}

/// S̃(θ) = Σ + (S(0) − Σ) cos 2θ + (Ṡ(0)/ω₀) sin 2θ
pub fn spin_tensor_at_phase(e: &FreeElectron, b: &AmplitudeBilinears, theta: f64) -> SpinTensor {
    let (c, s) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    b.spin_center + (b.spin - b.spin_center) * c + b.spin_rate * (s / e.omega0())
}

/// dS̃/dθ
pub fn spin_tensor_phase_derivative(e: &FreeElectron, b: &AmplitudeBilinears, theta: f64) -> SpinTensor {
    let (c, s) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    (b.spin - b.spin_center) * (-2.0 * s) + b.spin_rate * (2.0 * c / e.omega0())
}

pub fn spin_tensor_field_closed_form(e: &FreeElectron, b: &AmplitudeBilinears, x: &FourVector) -> SpinTensor {
    spin_tensor_at_phase(e, b, phase(x, e.momentum()))
}

/// S(τ) along the worldline (2θ = ω₀τ).
pub fn spin_tensor_at(e: &FreeElectron, b: &AmplitudeBilinears, tau: f64) -> SpinTensor {
    spin_tensor_at_phase(e, b, 0.5 * e.omega0() * tau)
}

/// Gordon split of the velocity field into convection and spin-current parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GordonSplit {
    /// (1/m) Re[ψ̄ π̂^μ ψ]
    pub convection: FourVector,
    /// −(1/m) ∂_ν S̃^{μν}
    pub spin_current: FourVector,
}

impl GordonSplit {
    pub fn total(&self) -> FourVector {
        self.convection + self.spin_current
    }
}

pub fn gordon_decompose(e: &FreeElectron, b: &AmplitudeBilinears, x: &FourVector) -> GordonSplit {
    let p = e.momentum();
    let m = e.mass();
    let theta = phase(x, p);
    // π̂^μψ = iħ∂^μψ = i π^μ dψ/dθ
    let psi = wavefunction::psi(e, x);
    let dpsi = wavefunction::psi_phase_derivative(e, theta);
    let overlap = (adjoint_bar(&psi) * dpsi)[(0, 0)] * Complex64::new(0.0, 1.0);
    let convection = *p * (overlap.re / m);
    let div = spin_tensor_phase_derivative(e, b, theta).contract(p);
    GordonSplit { convection, spin_current: div * (-1.0 / m) }
}

/// Pieces of the spin current q·w̃ = (−(q/m)∇·d, (q/m)∂_t d + (q/m)∇×s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentSplit {
    pub charge_density: f64,
    pub polarization: ThreeVector,
    pub magnetization: ThreeVector,
}

impl CurrentSplit {
    /// Reassembles q·w̃ as a four-vector.
    pub fn total(&self) -> FourVector {
        FourVector::from_parts(self.charge_density, self.polarization + self.magnetization)
    }
}

pub fn current_split(e: &FreeElectron, b: &AmplitudeBilinears, x: &FourVector, charge: f64) -> CurrentSplit {
    let p = e.momentum();
    let k = charge / e.mass();
    let dtheta = spin_tensor_phase_derivative(e, b, phase(x, p));
    let (ds, dd) = spin_and_dipole(&dtheta);
    // ∂_t → π₀ = E, ∂_j → π_j = −P^j
    let energy = p.time();
    let mom = p.spatial();
    let div_d = -dd.dot(&mom);
    let curl_s = -mom.cross(&ds);
    CurrentSplit { charge_density: -k * div_d, polarization: dd * (k * energy), magnetization: curl_s * k }
}

/// Observer-frame velocity U = ψ̄ û ψ / ψ*ψ, with U⁰ = c exactly.
pub fn observer_velocity(e: &FreeElectron, x: &FourVector) -> FourVector {
    observer_velocity_of(&wavefunction::psi(e, x))
}

pub fn observer_velocity_of(psi: &Spinor) -> FourVector {
    let u = vector_bilinear(psi);
    let density = psi.norm_squared();
    let mut out = u * (1.0 / density);
    out[0] = 1.0;
    out
}
