//! Classical Dirac-particle dynamics in external electromagnetic fields.
//!
//! Two formulations of the same motion are provided:
//!
//! * second order in (x, y): ẍ = −ω₀²(x − y), ÿ = (q/m) F(x) ẋ
//! * first order in (x, u, S, π): ẋ = u, u̇ = 4Sπ, Ṡ = π∧u, π̇ = qF(x)u
//!
//! linked by S = −m(z∧u) with z = x − y and π = mẏ. Dynamical constraints are
//! only monitored; nothing is projected back during integration.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dirac;
use crate::error::{Error, Result};
use crate::minkowski::{FourVector, ThreeVector};
use crate::observables::{self, spin_and_dipole, AmplitudeBilinears};
use crate::tensor::{FieldTensor, SpinTensor};
use crate::wavefunction::{self, FreeElectron};
use crate::worldline::separation_from_spin;

/// Default number of RK4 steps per zitter period.
pub const STEPS_PER_PERIOD: usize = 256;

/// Relative agreement required between the dipole-energy expressions.
pub const DIPOLE_TOLERANCE: f64 = 1e-10;

pub type FieldMap = dyn Fn(&FourVector) -> std::result::Result<FieldTensor, String> + Send + Sync;

#[derive(Clone, Default)]
pub enum EmField {
    #[default]
    Vacuum,
    Uniform(FieldTensor),
    /// Caller-supplied map x ↦ F(x); smoothness is the caller's concern.
    Custom(Arc<FieldMap>),
}

impl fmt::Debug for EmField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmField::Vacuum => write!(f, "Vacuum"),
            EmField::Uniform(t) => f.debug_tuple("Uniform").field(t).finish(),
            EmField::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl EmField {
    pub fn uniform(e: &ThreeVector, b: &ThreeVector) -> Self {
        EmField::Uniform(FieldTensor::electromagnetic(e, b))
    }

    pub fn custom(
        map: impl Fn(&FourVector) -> std::result::Result<FieldTensor, String> + Send + Sync + 'static,
    ) -> Self {
        EmField::Custom(Arc::new(map))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EmField::Vacuum => "vacuum",
            EmField::Uniform(_) => "uniform",
            EmField::Custom(_) => "custom",
        }
    }

    pub fn at(&self, x: &FourVector) -> Result<FieldTensor> {
        let f = match self {
            EmField::Vacuum => return Ok(FieldTensor::ZERO),
            EmField::Uniform(f) => *f,
            EmField::Custom(map) => map(x).map_err(|reason| Error::Field { x: x.components, reason })?,
        };
        if !f.is_finite() {
            return Err(Error::Field { x: x.components, reason: "non-finite field value".into() });
        }
        Ok(f)
    }
}

/// State that a fixed-step integrator can advance.
pub trait OdeState: Clone {
    fn tau(&self) -> f64;
    fn with_tau(self, tau: f64) -> Self;
    /// self + h·d on the dynamical components, τ unchanged.
    fn add_scaled(&self, d: &Self, h: f64) -> Self;
    fn is_finite(&self) -> bool;
    /// Largest componentwise difference, used for error estimates.
    fn max_abs_diff(&self, other: &Self) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub tau: f64,
    pub x: FourVector,
    pub u: FourVector,
    pub s: SpinTensor,
    pub p: FourVector,
}

impl ParticleState {
    /// Initial data from the amplitude bilinears of a free electron, with the
    /// inertia center at `y0`.
    pub fn from_electron(e: &FreeElectron, y0: &FourVector) -> Self {
        let b = AmplitudeBilinears::new(e);
        let w0 = e.omega0();
        Self { tau: 0.0, x: *y0 + b.acceleration * (-1.0 / (w0 * w0)), u: b.velocity, s: b.spin, p: *e.momentum() }
    }

    pub fn from_second_order(s: &SecondOrderState, mass: f64) -> Self {
        Self {
            tau: s.tau,
            x: s.x,
            u: s.x_dot,
            s: spin_tensor_from_separation(&s.x, &s.y, &s.x_dot, mass),
            p: s.y_dot * mass,
        }
    }

    /// z = −Sπ/m²
    pub fn separation(&self, mass: f64) -> FourVector {
        separation_from_spin(&self.s, &self.p, mass)
    }

    /// Inertia center y = x − z.
    pub fn inertia_center(&self, mass: f64) -> FourVector {
        self.x - self.separation(mass)
    }

    /// Total angular momentum S + x∧π.
    pub fn angular_momentum(&self) -> SpinTensor {
        self.s + SpinTensor::wedge(&self.x, &self.p)
    }
}

impl OdeState for ParticleState {
    fn tau(&self) -> f64 {
        self.tau
    }
    fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }
    fn add_scaled(&self, d: &Self, h: f64) -> Self {
        Self { tau: self.tau, x: self.x + d.x * h, u: self.u + d.u * h, s: self.s + d.s * h, p: self.p + d.p * h }
    }
    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.u.is_finite() && self.s.is_finite() && self.p.is_finite()
    }
    fn max_abs_diff(&self, o: &Self) -> f64 {
        [self.x.max_abs_diff(&o.x), self.u.max_abs_diff(&o.u), self.s.max_abs_diff(&o.s), self.p.max_abs_diff(&o.p)]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderState {
    pub tau: f64,
    pub x: FourVector,
    pub y: FourVector,
    pub x_dot: FourVector,
    pub y_dot: FourVector,
}

/// (x, ẋ, ẍ, x⃛) at one instant: the 16 constants of the fourth-order form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub x: FourVector,
    pub x_dot: FourVector,
    pub x_ddot: FourVector,
    pub x_dddot: FourVector,
}

impl SecondOrderState {
    pub fn from_electron(e: &FreeElectron, y0: &FourVector) -> Self {
        Self::from_first_order(&ParticleState::from_electron(e, y0), e.mass())
    }

    pub fn from_first_order(s: &ParticleState, mass: f64) -> Self {
        Self { tau: s.tau, x: s.x, y: s.inertia_center(mass), x_dot: s.u, y_dot: s.p * (1.0 / mass) }
    }

    pub fn separation(&self) -> FourVector {
        self.x - self.y
    }

    pub fn jet(&self, mass: f64) -> Jet {
        let w2 = (2.0 * mass).powi(2);
        Jet { x: self.x, x_dot: self.x_dot, x_ddot: self.separation() * -w2, x_dddot: (self.x_dot - self.y_dot) * -w2 }
    }

    pub fn from_jet(j: &Jet, mass: f64, tau: f64) -> Self {
        let w2 = (2.0 * mass).powi(2);
        Self { tau, x: j.x, y: j.x + j.x_ddot * (1.0 / w2), x_dot: j.x_dot, y_dot: j.x_dot + j.x_dddot * (1.0 / w2) }
    }
}

impl OdeState for SecondOrderState {
    fn tau(&self) -> f64 {
        self.tau
    }
    fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }
    fn add_scaled(&self, d: &Self, h: f64) -> Self {
        Self {
            tau: self.tau,
            x: self.x + d.x * h,
            y: self.y + d.y * h,
            x_dot: self.x_dot + d.x_dot * h,
            y_dot: self.y_dot + d.y_dot * h,
        }
    }
    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.x_dot.is_finite() && self.y_dot.is_finite()
    }
    fn max_abs_diff(&self, o: &Self) -> f64 {
        [
            self.x.max_abs_diff(&o.x),
            self.y.max_abs_diff(&o.y),
            self.x_dot.max_abs_diff(&o.x_dot),
            self.y_dot.max_abs_diff(&o.y_dot),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// ẍ = −ω₀²(x − y), ÿ = (q/m) F(x) ẋ
pub fn rhs_second_order(s: &SecondOrderState, field: &EmField, charge: f64, mass: f64) -> Result<SecondOrderState> {
    let f = field.at(&s.x)?;
    let w2 = (2.0 * mass).powi(2);
    Ok(SecondOrderState {
        tau: 1.0,
        x: s.x_dot,
        y: s.y_dot,
        x_dot: (s.x - s.y) * -w2,
        y_dot: f.contract(&s.x_dot) * (charge / mass),
    })
}

/// ẋ = u, u̇ = (4c²/ħ²) Sπ, Ṡ = π∧u, π̇ = qF(x)u
pub fn rhs_first_order(s: &ParticleState, field: &EmField, charge: f64, _mass: f64) -> Result<ParticleState> {
    let f = field.at(&s.x)?;
    Ok(ParticleState {
        tau: 1.0,
        x: s.u,
        u: s.s.contract(&s.p) * 4.0,
        s: SpinTensor::wedge(&s.p, &s.u),
        p: f.contract(&s.u) * charge,
    })
}

/// Fixed-step settings. The step is shrunk so that it divides the span.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub step: f64,
    /// Keep every n-th state (the final state is always kept).
    pub record_every: usize,
    /// Also integrate at half the step and report the Richardson estimate.
    pub estimate_error: bool,
}

impl StepControl {
    pub fn fixed(step: f64) -> Self {
        Self { step, record_every: 1, estimate_error: false }
    }

    /// h = (2π/ω₀)/256
    pub fn for_mass(mass: f64) -> Self {
        Self::fixed(std::f64::consts::TAU / (2.0 * mass) / STEPS_PER_PERIOD as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S> {
    pub states: Vec<S>,
    pub step: f64,
    /// Max componentwise difference between the h and h/2 runs, divided by 15.
    pub error_estimate: Option<f64>,
}

impl<S: OdeState> Trajectory<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("trajectory is never empty")
    }
}

pub fn rk4_step<S: OdeState>(rhs: &impl Fn(&S) -> Result<S>, s: &S, h: f64) -> Result<S> {
    let t = s.tau();
    let k1 = rhs(s)?;
    let k2 = rhs(&s.add_scaled(&k1, 0.5 * h).with_tau(t + 0.5 * h))?;
    let k3 = rhs(&s.add_scaled(&k2, 0.5 * h).with_tau(t + 0.5 * h))?;
    let k4 = rhs(&s.add_scaled(&k3, h).with_tau(t + h))?;
    Ok(s.add_scaled(&k1, h / 6.0)
        .add_scaled(&k2, h / 3.0)
        .add_scaled(&k3, h / 3.0)
        .add_scaled(&k4, h / 6.0)
        .with_tau(t + h))
}

fn run<S: OdeState>(rhs: &impl Fn(&S) -> Result<S>, initial: &S, span: f64, n: usize, every: usize) -> Result<Vec<S>> {
    let t0 = initial.tau();
    let h = if n == 0 { 0.0 } else { span / n as f64 };
    let mut out = vec![initial.clone()];
    let mut s = initial.clone();
    for k in 1..=n {
        s = rk4_step(rhs, &s, h)?.with_tau(t0 + k as f64 * h);
        if !s.is_finite() {
            return Err(Error::NonFinite { tau: s.tau() });
        }
        if k % every == 0 || k == n {
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// Classic RK4 from `initial.tau()` over `span` proper time.
pub fn integrate<S: OdeState>(
    rhs: impl Fn(&S) -> Result<S>,
    initial: S,
    span: f64,
    control: StepControl,
) -> Result<Trajectory<S>> {
    if !(control.step > 0.0) || !control.step.is_finite() {
        return Err(Error::InvalidStep(control.step));
    }
    if !(span >= 0.0) || !span.is_finite() {
        return Err(Error::InvalidStep(span));
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite { tau: initial.tau() });
    }
    let n = (span / control.step).ceil() as usize;
    let every = control.record_every.max(1);
    let states = run(&rhs, &initial, span, n, every)?;
    let step = if n == 0 { control.step } else { span / n as f64 };
    let error_estimate = if control.estimate_error && n > 0 {
        let fine = run(&rhs, &initial, span, 2 * n, 2 * every)?;
        let err = states.iter().zip(&fine).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
        Some(err / 15.0)
    } else {
        None
    };
    Ok(Trajectory { states, step, error_estimate })
}

pub fn integrate_first_order(
    initial: ParticleState,
    field: &EmField,
    charge: f64,
    mass: f64,
    span: f64,
    control: StepControl,
) -> Result<Trajectory<ParticleState>> {
    integrate(|s: &ParticleState| rhs_first_order(s, field, charge, mass), initial, span, control)
}

pub fn integrate_second_order(
    initial: SecondOrderState,
    field: &EmField,
    charge: f64,
    mass: f64,
    span: f64,
    control: StepControl,
) -> Result<Trajectory<SecondOrderState>> {
    integrate(|s: &SecondOrderState| rhs_second_order(s, field, charge, mass), initial, span, control)
}

/// S = −m(z∧u) with z = x − y.
pub fn spin_tensor_from_separation(x: &FourVector, y: &FourVector, u: &FourVector, mass: f64) -> SpinTensor {
    SpinTensor::wedge(&(*x - *y), u) * -mass
}

/// u·π, equal to mc² along every trajectory.
pub fn energy_invariant(s: &ParticleState) -> f64 {
    s.u.dot(&s.p)
}

/// The dipole energy Φ written four ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipoleEnergy {
    /// −π·ż
    pub separation_rate: f64,
    /// f·z with f = qF u
    pub force: f64,
    /// −(q/2m) S^{μν}F_{μν}
    pub tensor: f64,
    /// −(q/m)(B·s + E·d)
    pub moments: f64,
}

impl DipoleEnergy {
    pub fn values(&self) -> [f64; 4] {
        [self.separation_rate, self.force, self.tensor, self.moments]
    }

    /// Largest pairwise spread relative to max(max|Φ|, 10⁻⁶ mc²).
    pub fn spread(&self, mass: f64) -> f64 {
        let v = self.values();
        let scale = v.iter().map(|x| x.abs()).fold(1e-6 * mass, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / scale
    }
}

/// Evaluates all forms of Φ without checking that they agree.
pub fn dipole_energy_terms(s: &ParticleState, field: &EmField, charge: f64, mass: f64) -> Result<DipoleEnergy> {
    let f = field.at(&s.x)?;
    let force = f.contract(&s.u) * charge;
    let z = s.separation(mass);
    // ż = −(Ṡπ + Sπ̇)/m² along the first-order flow
    let s_dot = SpinTensor::wedge(&s.p, &s.u);
    let z_dot = (s_dot.contract(&s.p) + s.s.contract(&force)) * (-1.0 / (mass * mass));
    let (spin, dipole) = spin_and_dipole(&s.s);
    Ok(DipoleEnergy {
        separation_rate: -s.p.dot(&z_dot),
        force: force.dot(&z),
        tensor: -(charge / (2.0 * mass)) * s.s.double_contract(&f),
        moments: -(charge / mass) * (f.magnetic().dot(&spin) + f.electric().dot(&dipole)),
    })
}

/// Φ, after checking that all of its forms agree.
pub fn dipole_energy(s: &ParticleState, field: &EmField, charge: f64, mass: f64) -> Result<DipoleEnergy> {
    let d = dipole_energy_terms(s, field, charge, mass)?;
    if !(d.spread(mass) <= DIPOLE_TOLERANCE) {
        return Err(Error::InconsistentDipoleEnergy { values: d.values() });
    }
    Ok(d)
}

/// π·π/m − mc² − Φ
pub fn energy_equation_residual(s: &ParticleState, field: &EmField, charge: f64, mass: f64) -> Result<f64> {
    let phi = dipole_energy_terms(s, field, charge, mass)?.tensor;
    Ok(s.p.norm_sq() / mass - mass - phi)
}

/// π·π/m + 2Φ, constant along first-order motion in a uniform field.
pub fn field_energy_constant(s: &ParticleState, field: &EmField, charge: f64, mass: f64) -> Result<f64> {
    let phi = dipole_energy_terms(s, field, charge, mass)?.tensor;
    Ok(s.p.norm_sq() / mass + 2.0 * phi)
}

/// Operator bilinear Φ̃ = φ̄Φ̂φ against the classical Φ from the bilinear
/// spin tensor, for a free electron in a uniform test field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipoleComparison {
    pub operator: f64,
    pub classical: f64,
    pub ratio: Option<f64>,
}

pub fn dirac_vs_neoclassical_dipole(
    e: &FreeElectron,
    field: &FieldTensor,
    charge: f64,
    mass: f64,
    tau: f64,
) -> DipoleComparison {
    let phi = wavefunction::phi(e, tau);
    let operator = observables::observable(&phi, &dirac::dipole_op(field, charge, mass));
    let (spin, dipole) = spin_and_dipole(&observables::tensor_bilinear(&phi));
    let classical = -(charge / mass) * (field.magnetic().dot(&spin) + field.electric().dot(&dipole));
    let floor = 1e-12 * (charge / mass).abs() * field.max_abs();
    let ratio = (classical.abs() > floor).then(|| operator / classical);
    DipoleComparison { operator, classical, ratio }
}

/// Ratio of the period averages of Φ̃ and Φ, sampled at `n` points.
pub fn period_averaged_dipole_ratio(
    e: &FreeElectron,
    field: &FieldTensor,
    charge: f64,
    mass: f64,
    n: usize,
) -> Option<f64> {
    let (mut op, mut cl) = (0.0, 0.0);
    for k in 0..n {
        let c = dirac_vs_neoclassical_dipole(e, field, charge, mass, e.period() * k as f64 / n as f64);
        op += c.operator;
        cl += c.classical;
    }
    let floor = 1e-12 * (charge / mass).abs() * field.max_abs() * n as f64;
    (cl.abs() > floor).then(|| op / cl)
}

/// |x⁗ + ω₀²ẍ − (qω₀²/m)F·ẋ| at each interior sample, with the derivatives of
/// x taken by central differences of spacing `h` on an evenly sampled path.
pub fn fourth_order_residual(xs: &[FourVector], h: f64, field: &EmField, charge: f64, mass: f64) -> Result<Vec<f64>> {
    let w2 = (2.0 * mass).powi(2);
    let mut out = Vec::new();
    for k in 2..xs.len().saturating_sub(2) {
        let (m2, m1, c, p1, p2) = (xs[k - 2], xs[k - 1], xs[k], xs[k + 1], xs[k + 2]);
        let d1 = (p1 - m1) * (0.5 / h);
        let d2 = (p1 - c * 2.0 + m1) * (1.0 / (h * h));
        let d4 = (p2 - p1 * 4.0 + c * 6.0 - m1 * 4.0 + m2) * (1.0 / h.powi(4));
        let f = field.at(&c)?;
        let r = d4 + d2 * w2 - f.contract(&d1) * (charge * w2 / mass);
        out.push(r.max_abs());
    }
    Ok(out)
}
