//! Closed-form free-electron Dirac wave function.
//!
//! ψ(x) = [cos θ(x) I₄ − (i/mc²) sin θ(x) Ĥ] A with θ(x) = x^μπ_μ/ħ, and the
//! same spinor as a function of proper time, φ(τ) = ψ(x) when τ = τ(x).
//! The constant spinor A is normalized so that Ā Ĥ A = mc².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirac::{self, adjoint_bar, DiracMatrix, Spinor};
use crate::error::{Error, Result};
use crate::minkowski::{boost, phase, FourVector, ThreeVector};

/// Relative tolerance for the normalization Ā Ĥ A = mc².
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A free electron: mass, constant momentum, and normalized amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeElectron {
    mass: f64,
    momentum: FourVector,
    amplitude: Spinor,
    hamiltonian: DiracMatrix,
}

/// Serializable description of the 8 + 8 real constants fixing a worldline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElectronSpec {
    pub mass: f64,
    pub momentum: FourVector,
    pub amplitude: [[f64; 2]; 4],
}

impl FreeElectron {
    /// Validates the on-shell condition and the energy normalization.
    pub fn new(mass: f64, momentum: FourVector, amplitude: Spinor) -> Result<Self> {
        let hamiltonian = dirac::hamiltonian_op(&momentum, mass)?;
        let value = energy_norm(&amplitude, &hamiltonian);
        let expected = mass;
        if !((value - expected).abs() <= NORMALIZATION_TOLERANCE * expected) {
            return Err(Error::NotNormalized { value, expected });
        }
        Ok(Self { mass, momentum, amplitude, hamiltonian })
    }

    /// Rescales `amplitude` to satisfy the normalization before construction.
    pub fn normalized(mass: f64, momentum: FourVector, amplitude: Spinor) -> Result<Self> {
        let a = normalize(&amplitude, &momentum, mass)?;
        Self::new(mass, momentum, a)
    }

    /// Rest-frame spin state along `n`.
    pub fn spin_state(mass: f64, n: &ThreeVector) -> Result<Self> {
        let p = make_momentum(mass, &ThreeVector::zeros())?;
        Self::new(mass, p, spin_state_amplitude(n)?)
    }

    /// Electron whose inertia center moves with `velocity`, carrying the
    /// rest-frame spin amplitude for `n` renormalized against the boosted Ĥ.
    pub fn moving(mass: f64, velocity: &ThreeVector, n: &ThreeVector) -> Result<Self> {
        let rest = FourVector::new(mass, 0.0, 0.0, 0.0);
        let p = boost(velocity)?.apply(&rest);
        Self::normalized(mass, p, spin_state_amplitude(n)?)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn momentum(&self) -> &FourVector {
        &self.momentum
    }

    /// Global (inertia-center) four-velocity v = π/m.
    pub fn global_velocity(&self) -> FourVector {
        self.momentum * (1.0 / self.mass)
    }

    pub fn amplitude(&self) -> &Spinor {
        &self.amplitude
    }

    pub fn hamiltonian(&self) -> &DiracMatrix {
        &self.hamiltonian
    }

    /// Zitter frequency ω₀ = 2mc²/ħ.
    pub fn omega0(&self) -> f64 {
        2.0 * self.mass
    }

    /// Zitter period 2π/ω₀.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega0()
    }

    pub fn spec(&self) -> ElectronSpec {
        ElectronSpec {
            mass: self.mass,
            momentum: self.momentum,
            amplitude: [0, 1, 2, 3].map(|k| [self.amplitude[k].re, self.amplitude[k].im]),
        }
    }

    pub fn from_spec(spec: &ElectronSpec) -> Result<Self> {
        let a = Spinor::from_iterator(spec.amplitude.iter().map(|[re, im]| Complex64::new(*re, *im)));
        Self::normalized(spec.mass, spec.momentum, a)
    }
}

/// Ā Ĥ A (real for any A since γ⁰Ĥ is Hermitian).
pub fn energy_norm(a: &Spinor, h: &DiracMatrix) -> f64 {
    (adjoint_bar(a) * h * a)[(0, 0)].re
}

/// Positive-energy momentum (E/c, P) with E = c√((mc)² + P²).
pub fn make_momentum(mass: f64, p: &ThreeVector) -> Result<FourVector> {
    if !(mass > 0.0) {
        return Err(Error::NonPositiveMass(mass));
    }
    Ok(FourVector::from_parts((mass * mass + p.norm_squared()).sqrt(), *p))
}

/// Spherical angles (θ, φ) of a unit vector, polar axis x³.
pub fn spherical_angles(n: &ThreeVector) -> (f64, f64) {
    (n.z.clamp(-1.0, 1.0).acos(), n.y.atan2(n.x))
}

/// Rest-frame amplitude of the spin state along `n`:
/// A = (1/√2)(e^{−iφ/2}cos(θ/2), e^{iφ/2}sin(θ/2), −e^{−iφ/2}sin(θ/2), e^{iφ/2}cos(θ/2)).
pub fn spin_state_amplitude(n: &ThreeVector) -> Result<Spinor> {
    dirac::check_unit(n)?;
    let (theta, phi) = spherical_angles(n);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let minus = Complex64::from_polar(r, -phi / 2.0);
    let plus = Complex64::from_polar(r, phi / 2.0);
    Ok(Spinor::new(minus * c, plus * s, -minus * s, plus * c))
}

/// Scales `a` by a positive real factor so that Ā Ĥ A = mc².
pub fn normalize(a: &Spinor, momentum: &FourVector, mass: f64) -> Result<Spinor> {
    let h = dirac::hamiltonian_op(momentum, mass)?;
    let value = energy_norm(a, &h);
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::NotNormalizable(value));
    }
    Ok(a * Complex64::from((mass / value).sqrt()))
}

/// [cos θ I₄ − (i/mc²) sin θ Ĥ] A
fn propagate(e: &FreeElectron, theta: f64) -> Spinor {
    let a = &e.amplitude;
    a * Complex64::from(theta.cos()) - (e.hamiltonian * a) * Complex64::new(0.0, theta.sin() / e.mass)
}

/// ψ(x)
pub fn psi(e: &FreeElectron, x: &FourVector) -> Spinor {
    propagate(e, phase(x, &e.momentum))
}

/// φ(τ) with ω₁ = ω₀/2.
pub fn phi(e: &FreeElectron, tau: f64) -> Spinor {
    propagate(e, 0.5 * e.omega0() * tau)
}

/// dψ/dθ; the x-derivative is ∂_μψ = (π_μ/ħ) dψ/dθ.
pub fn psi_phase_derivative(e: &FreeElectron, theta: f64) -> Spinor {
    let a = &e.amplitude;
    a * Complex64::from(-theta.sin()) - (e.hamiltonian * a) * Complex64::new(0.0, theta.cos() / e.mass)
}

/// Positive/negative-energy parts A± = ½(I₄ ± Ĥ/mc²)A.
pub fn split_pm(e: &FreeElectron) -> (Spinor, Spinor) {
    let ha = (e.hamiltonian * e.amplitude) * Complex64::from(1.0 / e.mass);
    let plus = (e.amplitude + ha) * Complex64::from(0.5);
    let minus = (e.amplitude - ha) * Complex64::from(0.5);
    (plus, minus)
}

pub fn spinor_max_diff(a: &Spinor, b: &Spinor) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
