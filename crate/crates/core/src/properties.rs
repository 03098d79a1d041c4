//! Property tests for the invariants that hold across the whole library.

use num_complex::Complex64;
use proptest::prelude::*;

use crate::dirac::{self, gamma, DiracMatrix};
use crate::dynamics::{self, EmField, ParticleState, StepControl};
use crate::minkowski::{boost, phase, proper_time, FourVector, ThreeVector};
use crate::observables::{self, AmplitudeBilinears};
use crate::units::{Dimension, UnitSystem};
use crate::wavefunction::{self, FreeElectron};
use crate::worldline::{self, FreeWorldline};

fn four_vector() -> impl Strategy<Value = FourVector> {
    prop::array::uniform4(-5.0..5.0f64).prop_map(|c| FourVector::new(c[0], c[1], c[2], c[3]))
}

fn velocity() -> impl Strategy<Value = ThreeVector> {
    prop::array::uniform3(-0.5..0.5f64).prop_map(|c| ThreeVector::new(c[0], c[1], c[2]))
}

fn direction() -> impl Strategy<Value = ThreeVector> {
    (-1.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        ThreeVector::new(r * phi.cos(), r * phi.sin(), z)
    })
}

fn electron() -> impl Strategy<Value = FreeElectron> {
    (0.3..3.0f64, velocity(), direction()).prop_map(|(m, v, n)| FreeElectron::moving(m, &v, &n).unwrap())
}

fn rest_electron() -> impl Strategy<Value = FreeElectron> {
    (0.3..3.0f64, direction()).prop_map(|(m, n)| FreeElectron::spin_state(m, &n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boosts_preserve_inner_products(a in four_vector(), b in four_vector(), v in velocity()) {
        let l = boost(&v).unwrap();
        let (a2, b2) = (l.apply(&a), l.apply(&b));
        let scale = a.max_abs().max(1.0) * b.max_abs().max(1.0);
        prop_assert!((a2.dot(&b2) - a.dot(&b)).abs() < 1e-12 * scale * 4.0);
    }

    #[test]
    fn dot_is_symmetric(a in four_vector(), b in four_vector()) {
        prop_assert_eq!(a.dot(&b), b.dot(&a));
        prop_assert_eq!(FourVector::raise(a.lower()), a);
    }

    #[test]
    fn phase_and_proper_time_are_linear(e in electron(), x in four_vector(), dx in four_vector()) {
        let p = e.momentum();
        let m = e.mass();
        let d = proper_time(&(x + dx), p, m) - proper_time(&x, p, m);
        prop_assert!((d - dx.dot(p) / m).abs() < 1e-12 * (1.0 + x.max_abs() + dx.max_abs()) * p.max_abs());
        prop_assert!((proper_time(&x, p, m) - 2.0 * phase(&x, p) / e.omega0()).abs() < 1e-12 * (1.0 + x.max_abs()) * p.max_abs());
    }

    #[test]
    fn si_round_trip(v in 1e-3..1e3f64) {
        let si = UnitSystem::si();
        for dim in [Dimension::Length, Dimension::Time, Dimension::Energy, Dimension::ElectricField] {
            prop_assert!((si.to_natural(si.from_natural(v, dim), dim) / v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_squares_to_mass(e in electron()) {
        let h = e.hamiltonian();
        let m2 = Complex64::from(e.mass() * e.mass());
        prop_assert!(dirac::approx_eq(&(h * h), &(DiracMatrix::identity() * m2), 1e-12 * e.mass().powi(2) * 10.0));
        let g0 = gamma(0).unwrap();
        prop_assert!(dirac::approx_eq(&h.adjoint(), &(g0 * h * g0), 1e-14));
    }

    #[test]
    fn energy_normalization_holds_everywhere(e in electron(), x in four_vector()) {
        let psi = wavefunction::psi(&e, &x);
        let v = observables::bilinear(&psi, e.hamiltonian());
        prop_assert!((v.re / e.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rest_density_is_one(e in rest_electron(), x in four_vector()) {
        prop_assert!((wavefunction::psi(&e, &x).norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_energy_part_has_no_zitter(n in direction(), tau in 0.0..10.0f64) {
        let e = FreeElectron::spin_state(1.0, &n).unwrap();
        let (plus, _) = wavefunction::split_pm(&e);
        let only = FreeElectron::normalized(1.0, *e.momentum(), plus).unwrap();
        prop_assert!(observables::velocity(&only, tau).u.spatial().norm() < 1e-14);
    }

    #[test]
    fn closed_forms_match_bilinears(e in electron(), tau in -20.0..20.0f64) {
        let b = AmplitudeBilinears::new(&e);
        let u = observables::velocity(&e, tau).u;
        prop_assert!(u.max_abs_diff(&observables::velocity_closed_form(&e, &b, tau).u) < 1e-11 * u.max_abs().max(1.0));
        let direct = observables::tensor_bilinear(&wavefunction::phi(&e, tau));
        prop_assert!(direct.max_abs_diff(&observables::spin_tensor_at(&e, &b, tau)) < 1e-11 * direct.max_abs().max(1.0));
    }

    #[test]
    fn gordon_identity(e in electron(), x in four_vector()) {
        let b = AmplitudeBilinears::new(&e);
        let g = observables::gordon_decompose(&e, &b, &x);
        let u = observables::vector_bilinear(&wavefunction::psi(&e, &x));
        prop_assert!(g.total().max_abs_diff(&u) < 1e-11 * u.max_abs().max(1.0));
    }

    #[test]
    fn rest_spin_state_kinematics(e in rest_electron(), tau in 0.0..10.0f64) {
        let b = AmplitudeBilinears::new(&e);
        let n = observables::spin_vector(&e, 0.0) * 2.0;
        let u = observables::velocity_closed_form(&e, &b, tau).u;
        let a = observables::acceleration_closed_form(&e, &b, tau);
        prop_assert!(u.spatial().dot(&n).abs() < 1e-12);
        prop_assert!((u.spatial().norm() - 1.0).abs() < 1e-12);
        prop_assert!((a.spatial().norm() / e.omega0() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_tensor_contractions(e in electron(), tau in -10.0..10.0f64) {
        let b = AmplitudeBilinears::new(&e);
        let p = e.momentum();
        prop_assert!(b.spin_center.contract(p).max_abs() < 1e-11 * p.max_abs().powi(2));
        let wl = FreeWorldline::new(e.clone());
        let s = observables::spin_tensor_at(&e, &b, tau);
        let lhs = s.contract(p);
        let rhs = wl.separation(tau) * -(e.mass() * e.mass());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11 * p.max_abs().powi(2));
    }

    #[test]
    fn rest_zitter_circle(e in rest_electron(), tau in -10.0..10.0f64) {
        let wl = FreeWorldline::new(e.clone());
        let s = wl.sample(tau);
        let r0 = 1.0 / e.omega0();
        let r = s.z.spatial();
        prop_assert!(r.dot(&s.u.spatial()).abs() < 1e-12);
        prop_assert!((r.norm() / r0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn helix_offset_is_periodic(e in electron(), tau in -10.0..10.0f64) {
        let wl = FreeWorldline::new(e.clone());
        let a = wl.sample(tau);
        let b = wl.sample(tau + e.period());
        prop_assert!(a.z.max_abs_diff(&b.z) < 1e-12);
        prop_assert!(b.u[0] > 0.0);
    }

    #[test]
    fn free_total_angular_momentum(e in electron(), tau in 0.0..50.0f64) {
        let wl = FreeWorldline::new(e.clone());
        let p = e.momentum();
        let s0 = wl.sample(0.0);
        let j0 = worldline::total_angular_momentum(&wl.bilinears().spin, &s0.x, p);
        let s = wl.sample(tau);
        let spin = observables::spin_tensor_at(&e, wl.bilinears(), tau);
        let j = worldline::total_angular_momentum(&spin, &s.x, p);
        prop_assert!(j.max_abs_diff(&j0) < 1e-10 * (1.0 + tau) * p.max_abs());
    }

    #[test]
    fn first_order_rhs_is_orthogonal(e in electron(), b in prop::array::uniform3(-0.2..0.2f64), ef in prop::array::uniform3(-0.2..0.2f64)) {
        let field = EmField::uniform(&ThreeVector::from(ef), &ThreeVector::from(b));
        let s = ParticleState::from_electron(&e, &FourVector::ZERO);
        let d = dynamics::rhs_first_order(&s, &field, -1.0, e.mass()).unwrap();
        let scale = s.p.max_abs().powi(3);
        prop_assert!(d.u.dot(&s.p).abs() < 1e-13 * scale);
        prop_assert!(d.p.dot(&s.u).abs() < 1e-13 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn free_integration_keeps_separation_orthogonal(e in electron()) {
        let s0 = ParticleState::from_electron(&e, &FourVector::ZERO);
        let t = dynamics::integrate_first_order(s0, &EmField::Vacuum, -1.0, e.mass(), 100.0 * e.period(), StepControl::for_mass(e.mass())).unwrap();
        let worst = t.states.iter().map(|s| s.separation(e.mass()).dot(&s.p).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-10, "{}", worst);
    }
}
