//! Cross-checks between formulations: the spinor ODE iħφ̇ = Ĥφ against the
//! closed-form Dirac solution, finite-difference Dirac residuals, and the
//! classical equations of motion rebuilt from bilinears.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dirac::{self, gamma, DiracMatrix, Spinor};
use crate::dynamics::{integrate, OdeState, StepControl, Trajectory};
use crate::error::Result;
use crate::minkowski::{proper_time, FourVector};
use crate::observables::{self, AmplitudeBilinears};
use crate::tensor::SpinTensor;
use crate::wavefunction::{self, energy_norm, spinor_max_diff, FreeElectron};
use crate::worldline::FreeWorldline;

pub const DEFAULT_SEED: u64 = 42;

/// Closed form against closed form.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-11;
/// Integration against closed form (10 periods, h = T/256).
pub const INTEGRATION_TOLERANCE: f64 = 1e-8;

/// |a − b| / max(1, |a|, |b|)
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub label: String,
    pub max_error: f64,
    pub errors: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl EquivalenceReport {
    pub fn new(label: impl Into<String>, errors: Vec<f64>, tolerance: f64) -> Self {
        let max_error = errors.iter().copied().fold(0.0, f64::max);
        let passed = errors.iter().all(|e| e.is_finite()) && max_error < tolerance;
        Self { label: label.into(), max_error, errors, tolerance, passed, seed: None }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in a 4-cube of side `side` centred on the origin.
pub fn random_points(rng: &mut impl Rng, n: usize, side: f64) -> Vec<FourVector> {
    (0..n)
        .map(|_| {
            let mut c = [0.0; 4];
            for v in &mut c {
                *v = side * (rng.random::<f64>() - 0.5);
            }
            FourVector { components: c, units: Default::default() }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorState {
    pub tau: f64,
    pub phi: Spinor,
}

impl OdeState for SpinorState {
    fn tau(&self) -> f64 {
        self.tau
    }
    fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }
    fn add_scaled(&self, d: &Self, h: f64) -> Self {
        Self { tau: self.tau, phi: self.phi + d.phi * Complex64::from(h) }
    }
    fn is_finite(&self) -> bool {
        self.phi.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
    fn max_abs_diff(&self, o: &Self) -> f64 {
        spinor_max_diff(&self.phi, &o.phi)
    }
}

/// RK4 integration of iħφ̇ = Ĥφ from φ(0) = A.
pub fn integrate_bz(
    amplitude: &Spinor,
    momentum: &FourVector,
    mass: f64,
    span: f64,
    control: StepControl,
) -> Result<Trajectory<SpinorState>> {
    let h = dirac::hamiltonian_op(momentum, mass)?;
    let minus_i_h: DiracMatrix = h * Complex64::new(0.0, -1.0);
    integrate(
        |s: &SpinorState| Ok(SpinorState { tau: 1.0, phi: minus_i_h * s.phi }),
        SpinorState { tau: 0.0, phi: *amplitude },
        span,
        control,
    )
}

/// Integrated spinor against the closed form, plus the drift of φ̄Ĥφ.
pub fn bz_integration_check(e: &FreeElectron, periods: f64, control: StepControl) -> Result<(EquivalenceReport, f64)> {
    let t = integrate_bz(e.amplitude(), e.momentum(), e.mass(), periods * e.period(), control)?;
    let errors = t.states.iter().map(|s| spinor_max_diff(&s.phi, &wavefunction::phi(e, s.tau))).collect();
    let drift =
        t.states.iter().map(|s| relative_error(energy_norm(&s.phi, e.hamiltonian()), e.mass())).fold(0.0, f64::max);
    Ok((EquivalenceReport::new("spinor ODE vs closed form", errors, INTEGRATION_TOLERANCE), drift))
}

/// ‖γ^μ(iħ∂_μψ) − mc²ψ‖ / ‖mc²ψ‖ with central differences of step `h`.
pub fn dirac_residual(e: &FreeElectron, x: &FourVector, h: f64) -> f64 {
    let mut lhs = Spinor::zeros();
    for mu in 0..4 {
        let step = FourVector::basis(mu) * h;
        let d = (wavefunction::psi(e, &(*x + step)) - wavefunction::psi(e, &(*x - step))) * Complex64::from(0.5 / h);
        lhs += gamma(mu).unwrap() * d * Complex64::new(0.0, 1.0);
    }
    let rhs = wavefunction::psi(e, x) * Complex64::from(e.mass());
    (lhs - rhs).norm() / rhs.norm()
}

/// φ(τ(x)) against ψ(x) at each point.
pub fn bz_to_dirac_check(e: &FreeElectron, xs: &[FourVector]) -> EquivalenceReport {
    let errors = xs
        .iter()
        .map(|x| {
            let tau = proper_time(x, e.momentum(), e.mass());
            spinor_max_diff(&wavefunction::phi(e, tau), &wavefunction::psi(e, x))
        })
        .collect();
    EquivalenceReport::new("phi(tau(x)) vs psi(x)", errors, 1e-12)
}

/// Σ = −m z(0)∧ż(0) for free motion, where z∧ż is constant.
pub fn spin_center_from_separation(z: &FourVector, z_dot: &FourVector, mass: f64) -> SpinTensor {
    SpinTensor::wedge(z, z_dot) * -mass
}

/// Residuals of the classical equations rebuilt from bilinears.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilinearEomReport {
    /// u̇ = (4c²/ħ²) Sπ
    pub velocity_equation: EquivalenceReport,
    /// Ṡ = π∧u
    pub spin_equation: EquivalenceReport,
    /// d/dτ of the direct velocity bilinear against φ̄âφ (finite differences)
    pub acceleration_derivative: EquivalenceReport,
    /// d/dτ of the worldline against the velocity bilinear (finite differences)
    pub position_derivative: EquivalenceReport,
    /// D = Ṡ(0)
    pub spin_rate: f64,
    /// Σ̃ (operator form) against −m z∧ż
    pub spin_center: f64,
    /// S̃(0) against −m z(0)∧u(0)
    pub initial_spin: f64,
}

impl BilinearEomReport {
    pub fn passed(&self) -> bool {
        self.velocity_equation.passed
            && self.spin_equation.passed
            && self.acceleration_derivative.passed
            && self.position_derivative.passed
            && self.spin_rate < CLOSED_FORM_TOLERANCE
            && self.spin_center < CLOSED_FORM_TOLERANCE
            && self.initial_spin < CLOSED_FORM_TOLERANCE
    }
}

/// Vacuum check of ẋ = u, u̇ = 4Sπ, Ṡ = π∧u on bilinear observables.
/// `h` is the finite-difference step for the derivative checks.
pub fn bilinear_eom_check(e: &FreeElectron, taus: &[f64], h: f64) -> BilinearEomReport {
    let b = AmplitudeBilinears::new(e);
    let wl = FreeWorldline::new(e.clone());
    let p = e.momentum();
    let w0 = e.omega0();
    let (mut ve, mut se, mut ae, mut xe) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let fd_tol = 10.0 * h * h;
    for &tau in taus {
        let u = observables::velocity_closed_form(e, &b, tau).u;
        let s = observables::spin_tensor_at(e, &b, tau);
        let u_dot = observables::acceleration_closed_form(e, &b, tau);
        let s_dot = observables::spin_tensor_phase_derivative(e, &b, 0.5 * w0 * tau) * (0.5 * w0);
        ve.push(u_dot.max_abs_diff(&(s.contract(p) * 4.0)));
        se.push(s_dot.max_abs_diff(&SpinTensor::wedge(p, &u)));

        let direct = |t: f64| observables::velocity(e, t).u;
        let fd = (direct(tau + h) - direct(tau - h)) * (0.5 / h);
        let phi = wavefunction::phi(e, tau);
        let a = FourVector::new(
            observables::observable(&phi, &dirac::acceleration_op(p, e.mass(), 0).unwrap()),
            observables::observable(&phi, &dirac::acceleration_op(p, e.mass(), 1).unwrap()),
            observables::observable(&phi, &dirac::acceleration_op(p, e.mass(), 2).unwrap()),
            observables::observable(&phi, &dirac::acceleration_op(p, e.mass(), 3).unwrap()),
        );
        ae.push(fd.max_abs_diff(&a));
        let x_fd = (wl.sample(tau + h).x - wl.sample(tau - h).x) * (0.5 / h);
        xe.push(x_fd.max_abs_diff(&direct(tau)));
    }
    let z0 = wl.separation(0.0);
    let z_dot0 = b.velocity - e.global_velocity();
    BilinearEomReport {
        velocity_equation: EquivalenceReport::new("u' = 4 S pi", ve, CLOSED_FORM_TOLERANCE),
        spin_equation: EquivalenceReport::new("S' = pi ^ u", se, CLOSED_FORM_TOLERANCE),
        acceleration_derivative: EquivalenceReport::new("d/dtau u = bar(phi) a phi", ae, fd_tol),
        position_derivative: EquivalenceReport::new("d/dtau x = u", xe, fd_tol),
        spin_rate: b.spin_rate.max_abs_diff(&(observables::spin_tensor_phase_derivative(e, &b, 0.0) * (0.5 * w0))),
        spin_center: b.spin_center.max_abs_diff(&spin_center_from_separation(&z0, &z_dot0, e.mass())),
        initial_spin: b.spin.max_abs_diff(&(SpinTensor::wedge(&z0, &b.velocity) * -e.mass())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::ThreeVector;

    fn rest() -> FreeElectron {
        FreeElectron::spin_state(1.0, &ThreeVector::new(0.0, 0.6, 0.8)).unwrap()
    }

    #[test]
    fn zero_span_returns_amplitude() {
        let e = rest();
        let t = integrate_bz(e.amplitude(), e.momentum(), 1.0, 0.0, StepControl::for_mass(1.0)).unwrap();
        assert_eq!(t.states.len(), 1);
        assert_eq!(t.states[0].phi, *e.amplitude());
    }

    #[test]
    fn integrated_spinor_matches_closed_form() {
        let e = FreeElectron::moving(1.0, &ThreeVector::new(0.4, 0.1, -0.3), &ThreeVector::x()).unwrap();
        let (r, drift) = bz_integration_check(&e, 10.0, StepControl::for_mass(1.0)).unwrap();
        assert!(r.passed, "{}", r.max_error);
        assert!(drift < 1e-9, "{drift}");
    }

    #[test]
    fn residual_is_second_order() {
        let e = FreeElectron::moving(1.0, &ThreeVector::new(0.3, 0.0, 0.2), &ThreeVector::z()).unwrap();
        let x = FourVector::new(0.7, -1.2, 0.4, 2.0);
        let r1 = dirac_residual(&e, &x, 1e-3);
        let r2 = dirac_residual(&e, &x, 5e-4);
        assert!(r1 < 1e-5, "{r1}");
        assert!((r2 / r1 - 0.25).abs() < 0.02, "{}", r2 / r1);
        let r0 = dirac_residual(&e, &FourVector::ZERO, 1e-3);
        assert!(r0 / r1 > 0.1 && r0 / r1 < 10.0);
    }

    #[test]
    fn phi_of_proper_time_is_psi() {
        let e = FreeElectron::moving(1.0, &ThreeVector::new(0.9, 0.0, 0.0), &ThreeVector::z()).unwrap();
        let mut rng = seeded_rng(DEFAULT_SEED);
        let xs = random_points(&mut rng, 200, 10.0 / e.omega0());
        let r = bz_to_dirac_check(&e, &xs);
        assert!(r.passed, "{}", r.max_error);
        let light = [FourVector::new(1.0, 1.0, 0.0, 0.0), FourVector::new(2.0, 0.0, -2.0, 0.0)];
        assert!(bz_to_dirac_check(&e, &light).passed);
    }

    #[test]
    fn bilinear_equations_of_motion() {
        for e in [rest(), FreeElectron::moving(1.0, &ThreeVector::new(-0.2, 0.5, 0.3), &ThreeVector::y()).unwrap()] {
            let taus: Vec<f64> = (0..20).map(|k| 0.11 * k as f64).collect();
            let r = bilinear_eom_check(&e, &taus, 1e-4);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn report_relative_errors() {
        assert_eq!(relative_error(1e-20, 0.0), 1e-20);
        assert!((relative_error(100.0, 101.0) - 1.0 / 101.0).abs() < 1e-15);
        let r = EquivalenceReport::new("x", vec![1e-3, f64::NAN], 1.0);
        assert!(!r.passed);
    }
}
