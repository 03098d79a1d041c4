//! Self-checks behind `zitterlab verify`: each suite recomputes a family of
//! identities and compares against a fixed tolerance.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dirac::{self, DiracMatrix};
use crate::dynamics::{self, EmField, ParticleState, StepControl};
use crate::equivalence::{self, random_points, seeded_rng, CLOSED_FORM_TOLERANCE, INTEGRATION_TOLERANCE};
use crate::error::Result;
use crate::minkowski::{metric, FourVector, ThreeVector};
use crate::observables::{self, AmplitudeBilinears};
use crate::wavefunction::{self, FreeElectron};
use crate::worldline::{self, FreeWorldline};

pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Gordon,
    Equivalence,
    Conservation,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Algebra, Suite::Gordon, Suite::Equivalence, Suite::Conservation];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Gordon => "gordon",
            Suite::Equivalence => "equivalence",
            Suite::Conservation => "conservation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Largest error seen.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Where the worst case occurred.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value.is_finite() && value <= tolerance, detail: None }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "[{}]", s.suite.name())?;
            for c in &s.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                write!(f, "  {mark} {:<48} {:.3e} <= {:.1e}", c.name, c.value, c.tolerance)?;
                match (&c.detail, c.passed) {
                    (Some(d), false) => writeln!(f, "  ({d})")?,
                    _ => writeln!(f)?,
                }
            }
            let ok = s.checks.iter().filter(|c| c.passed).count();
            writeln!(f, "{}: {ok}/{} passed", s.suite.name(), s.checks.len())?;
        }
        write!(f, "overall: {} (seed {})", if self.passed { "PASS" } else { "FAIL" }, self.seed)
    }
}

pub fn run(suites: &[Suite], samples: usize, seed: u64) -> Result<VerifyReport> {
    let mut out = Vec::new();
    for s in suites {
        let checks = match s {
            Suite::Algebra => algebra(seed),
            Suite::Gordon => gordon(samples, seed),
            Suite::Equivalence => equivalence(seed)?,
            Suite::Conservation => conservation()?,
        };
        let passed = checks.iter().all(|c| c.passed);
        out.push(SuiteReport { suite: *s, checks, passed });
    }
    let passed = out.iter().all(|s| s.passed);
    Ok(VerifyReport { seed, samples, suites: out, passed })
}

fn random_unit(rng: &mut impl Rng) -> ThreeVector {
    let z: f64 = rng.random_range(-1.0..1.0);
    let p: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    ThreeVector::new(r * p.cos(), r * p.sin(), z)
}

/// Uniform direction, speed up to `max`.
fn random_velocity(rng: &mut impl Rng, max: f64) -> ThreeVector {
    random_unit(rng) * rng.random_range(0.0..max)
}

fn algebra(seed: u64) -> Vec<Check> {
    let g = dirac::gammas();
    let mut checks = Vec::new();
    for mu in 0..4 {
        for nu in 0..4 {
            let anti = g[mu] * g[nu] + g[nu] * g[mu];
            let expected = if mu == nu {
                DiracMatrix::identity() * Complex64::from(2.0 * metric(mu))
            } else {
                DiracMatrix::zeros()
            };
            checks.push(Check::new(
                format!("{{γ{mu}, γ{nu}}} = 2g{mu}{nu}"),
                dirac::max_norm(&(anti - expected)),
                1e-12,
            ));
        }
    }
    let mut rng = seeded_rng(seed);
    let (mut worst, mut at) = (0.0f64, ThreeVector::zeros());
    for _ in 0..100 {
        let m = rng.random_range(0.5..2.0);
        let p = random_unit(&mut rng) * rng.random_range(0.0..5.0);
        let h =
            dirac::hamiltonian_op(&wavefunction::make_momentum(m, &p).expect("finite momentum"), m).expect("on shell");
        let err = dirac::max_norm(&(h * h - DiracMatrix::identity() * Complex64::from(m * m))) / (m * m);
        if err > worst {
            (worst, at) = (err, p);
        }
    }
    checks.push(Check::new("H² = m² (100 momenta)", worst, 1e-12).detail(format!("P = {:?}", at.as_slice())));
    checks
}

fn gordon(samples: usize, seed: u64) -> Vec<Check> {
    let mut rng = seeded_rng(seed);
    let mut checks = Vec::new();
    for (label, max_speed) in [("rest frame", 0.0), ("boosted |V| < 0.9", 0.9)] {
        let (mut worst, mut at) = (0.0f64, FourVector::ZERO);
        let per_electron = 20;
        let mut left = samples;
        while left > 0 {
            let n = random_unit(&mut rng);
            let v = if max_speed > 0.0 { random_velocity(&mut rng, max_speed) } else { ThreeVector::zeros() };
            let e = FreeElectron::moving(1.0, &v, &n).expect("valid electron");
            let b = AmplitudeBilinears::new(&e);
            let take = left.min(per_electron);
            for x in random_points(&mut rng, take, 10.0 / e.omega0()) {
                let direct = observables::vector_bilinear(&wavefunction::psi(&e, &x));
                let split = observables::gordon_decompose(&e, &b, &x).total();
                let err = direct.max_abs_diff(&split) / direct.max_abs().max(1.0);
                if err > worst {
                    (worst, at) = (err, x);
                }
            }
            left -= take;
        }
        checks.push(
            Check::new(format!("convection + spin current = u ({label})"), worst, CLOSED_FORM_TOLERANCE)
                .detail(format!("x = {:?}", at.components)),
        );
    }
    checks
}

fn equivalence(seed: u64) -> Result<Vec<Check>> {
    let mut rng = seeded_rng(seed);
    let e = FreeElectron::spin_state(1.0, &random_unit(&mut rng))?;
    let mut checks = Vec::new();

    let (r, drift) = equivalence::bz_integration_check(&e, 10.0, StepControl::for_mass(1.0))?;
    checks.push(Check::new("RK4 spinor vs closed form (10 periods)", r.max_error, INTEGRATION_TOLERANCE));
    checks.push(Check::new("spinor normalization drift", drift, INTEGRATION_TOLERANCE));

    let moving = FreeElectron::moving(1.0, &ThreeVector::new(0.0, 0.9, 0.0), &random_unit(&mut rng))?;
    for (label, el) in [("rest", &e), ("|V| = 0.9", &moving)] {
        let xs = random_points(&mut rng, 1000, 10.0 / el.omega0());
        let r = equivalence::bz_to_dirac_check(el, &xs);
        checks.push(Check::new(format!("phi(tau(x)) = psi(x) ({label})"), r.max_error, r.tolerance));
    }

    let taus: Vec<f64> = (0..32).map(|k| k as f64 * 0.37).collect();
    let eom = equivalence::bilinear_eom_check(&moving, &taus, 1e-4);
    for r in [&eom.velocity_equation, &eom.spin_equation, &eom.acceleration_derivative, &eom.position_derivative] {
        checks.push(Check::new(r.label.clone(), r.max_error, r.tolerance));
    }
    checks.push(Check::new("D = S'(0)", eom.spin_rate, CLOSED_FORM_TOLERANCE));
    checks.push(Check::new("operator Sigma = -m z ^ z'", eom.spin_center, CLOSED_FORM_TOLERANCE));
    checks.push(Check::new("S(0) = -m z(0) ^ u(0)", eom.initial_spin, CLOSED_FORM_TOLERANCE));
    Ok(checks)
}

fn conservation() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let e = FreeElectron::moving(1.0, &ThreeVector::new(0.3, 0.0, 0.2), &ThreeVector::new(0.0, 0.6, 0.8))?;
    let wl = FreeWorldline::new(e.clone());
    let p = *e.momentum();
    let j0 = worldline::total_angular_momentum(&wl.bilinears().spin, &wl.sample(0.0).x, &p);
    let (mut dj, mut up) = (0.0f64, 0.0f64);
    for s in wl.sample_periods(100.0, 16) {
        let spin = observables::spin_tensor_at(&e, wl.bilinears(), s.tau);
        dj = dj.max(worldline::total_angular_momentum(&spin, &s.x, &p).max_abs_diff(&j0));
        up = up.max((s.u.dot(&p) - e.mass()).abs());
    }
    checks.push(Check::new("J = S + x ^ pi constant (100 periods)", dj, 1e-10));
    checks.push(Check::new("u . pi = m, closed form", up, 1e-12));

    let rest = FreeElectron::spin_state(1.0, &ThreeVector::z())?;
    let field = EmField::uniform(&ThreeVector::zeros(), &ThreeVector::new(0.0, 0.0, 0.01));
    let s0 = ParticleState::from_electron(&rest, &FourVector::ZERO);
    let t = dynamics::integrate_first_order(s0, &field, -1.0, 1.0, 100.0 * rest.period(), StepControl::for_mass(1.0))?;
    let c0 = dynamics::field_energy_constant(&t.states[0], &field, -1.0, 1.0)?;
    let (mut dup, mut dc) = (0.0f64, 0.0f64);
    for s in &t.states {
        dup = dup.max((dynamics::energy_invariant(s) - 1.0).abs());
        dc = dc.max((dynamics::field_energy_constant(s, &field, -1.0, 1.0)? - c0).abs());
    }
    checks.push(Check::new("u . pi = m, uniform B RK4 (100 periods)", dup, 1e-7));
    checks.push(Check::new("pi²/m + 2 Phi, uniform B RK4 (100 periods)", dc, 1e-7));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let r = run(&Suite::ALL, 40, 42).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.suites[0].checks.iter().filter(|c| c.name.starts_with('{')).count(), 16);
    }

    #[test]
    fn report_is_reproducible_and_serializable() {
        let a = run(&[Suite::Gordon], 50, 9).unwrap();
        let b = run(&[Suite::Gordon], 50, 9).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        let back: VerifyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(a.to_string().contains("gordon: 2/2 passed"));
    }

    #[test]
    fn failing_check_shows_detail() {
        let c = Check::new("x", 1.0, 0.5).detail("at origin");
        let r = VerifyReport {
            seed: 1,
            samples: 1,
            suites: vec![SuiteReport { suite: Suite::Algebra, checks: vec![c], passed: false }],
            passed: false,
        };
        let text = r.to_string();
        assert!(text.contains("FAIL") && text.contains("(at origin)") && text.ends_with("overall: FAIL (seed 1)"));
    }
}
