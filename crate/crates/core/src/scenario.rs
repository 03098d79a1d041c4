//! Scenario files: a JSON description of one electron, its field, and the
//! proper-time span to follow. Values are read in the scenario's own unit
//! system and converted to natural units once, in [`Scenario::resolve`].

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{EmField, StepControl, STEPS_PER_PERIOD};
use crate::equivalence::seeded_rng;
use crate::error::{Error, Result};
use crate::minkowski::ThreeVector;
use crate::units::{Dimension, UnitSystem, Units};
use crate::wavefunction::FreeElectron;

/// Trajectory samples kept per zitter period unless `record_every` is set.
pub const RECORDED_PER_PERIOD: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Output file stem; defaults to the scenario file stem.
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub units: Units,
    /// Defaults to the electron mass.
    #[serde(default)]
    pub mass: Option<f64>,
    /// Defaults to the electron charge.
    #[serde(default)]
    pub charge: Option<f64>,
    /// Spatial momentum P. Mutually exclusive with `velocity`.
    #[serde(default)]
    pub momentum: Option<[f64; 3]>,
    /// Global velocity V. Mutually exclusive with `momentum`.
    #[serde(default)]
    pub velocity: Option<[f64; 3]>,
    pub spin: SpinSpec,
    #[serde(default)]
    pub field: FieldSpec,
    pub span: SpanSpec,
    /// Integration step in proper time; defaults to T/256.
    #[serde(default)]
    pub step: Option<f64>,
    /// Keep every n-th integration step.
    #[serde(default)]
    pub record_every: Option<usize>,
    #[serde(default)]
    pub formulation: Option<Formulation>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    /// Sampling grid for field maps.
    #[serde(default)]
    pub grid: Option<Grid>,
}

/// Spin direction n, either as polar angles or as a vector (normalized on
/// load), or drawn uniformly from the seeded generator.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSpec {
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub phi: Option<f64>,
    #[serde(default)]
    pub direction: Option<[f64; 3]>,
    #[serde(default)]
    pub random: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    /// Free motion from the closed forms; nothing is integrated.
    #[default]
    None,
    /// Integrated with F = 0.
    Vacuum,
    Uniform {
        #[serde(default)]
        e: [f64; 3],
        #[serde(default)]
        b: [f64; 3],
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanSpec {
    #[serde(default)]
    pub periods: Option<f64>,
    #[serde(default)]
    pub tau: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    ClosedForm,
    FirstOrder,
    SecondOrder,
}

impl Formulation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Formulation::ClosedForm => "closed-form",
            Formulation::FirstOrder => "first-order",
            Formulation::SecondOrder => "second-order",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Trajectory,
    Plots,
    Fieldmap,
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Trajectory]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Default for GridAxis {
    fn default() -> Self {
        Self { min: 0.0, max: 0.0, n: 1 }
    }
}

impl GridAxis {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let step = if self.n > 1 { (self.max - self.min) / (self.n - 1) as f64 } else { 0.0 };
        (0..self.n).map(move |k| self.min + k as f64 * step)
    }

    fn scaled(&self, s: f64) -> Self {
        Self { min: self.min / s, max: self.max / s, n: self.n }
    }
}

/// Rectangular grid over (t, x, y, z).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default)]
    pub t: GridAxis,
    #[serde(default)]
    pub x: GridAxis,
    #[serde(default)]
    pub y: GridAxis,
    #[serde(default)]
    pub z: GridAxis,
}

impl Grid {
    pub fn axes(&self) -> [&GridAxis; 4] {
        [&self.t, &self.x, &self.y, &self.z]
    }

    /// Point count, saturating instead of overflowing.
    pub fn points(&self) -> usize {
        self.axes().iter().fold(1usize, |acc, a| acc.saturating_mul(a.n))
    }
}

/// A scenario with every value checked and converted to natural units.
#[derive(Clone, Debug)]
pub struct Setup {
    pub name: String,
    pub units: Units,
    pub electron: FreeElectron,
    pub charge: f64,
    /// (E, B) in natural units, `None` for free closed-form motion.
    pub fields: Option<(ThreeVector, ThreeVector)>,
    pub span: f64,
    pub control: StepControl,
    pub formulation: Formulation,
    pub outputs: Vec<Output>,
    pub grid: Option<Grid>,
}

impl Setup {
    pub fn field(&self) -> EmField {
        match &self.fields {
            None => EmField::Vacuum,
            Some((e, b)) => EmField::uniform(e, b),
        }
    }

    pub fn field_kind(&self) -> &'static str {
        match &self.fields {
            None => "none",
            Some((e, b)) if e.norm() == 0.0 && b.norm() == 0.0 => "vacuum",
            Some(_) => "uniform",
        }
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

fn invalid(path: &str, reason: impl Into<String>) -> Error {
    Error::Scenario { path: path.into(), reason: reason.into() }
}

fn finite(path: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(path, "must be finite"))
    }
}

fn vector(path: &str, v: [f64; 3]) -> Result<ThreeVector> {
    for (k, c) in v.iter().enumerate() {
        finite(&format!("{path}[{k}]"), *c)?;
    }
    Ok(ThreeVector::from(v))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            invalid(&path, err.into_inner().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut s = Self::from_json(&std::fs::read_to_string(path)?)?;
        if s.name.is_none() {
            s.name = path.file_stem().map(|n| n.to_string_lossy().into_owned());
        }
        Ok(s)
    }

    /// Validates the scenario and converts it to natural units. `seed` is
    /// only used when the spin direction is random.
    pub fn resolve(&self, seed: u64) -> Result<Setup> {
        let sys = UnitSystem::for_units(self.units);
        let nat = |v: f64, d: Dimension| sys.to_natural(v, d);

        let mass = match self.mass {
            Some(m) => nat(finite("mass", m)?, Dimension::Mass),
            None => 1.0,
        };
        if !(mass > 0.0) {
            return Err(invalid("mass", "must be positive"));
        }
        let charge = match self.charge {
            Some(q) => nat(finite("charge", q)?, Dimension::Charge),
            None => -1.0,
        };

        let velocity = match (self.momentum, self.velocity) {
            (Some(_), Some(_)) => return Err(invalid("velocity", "give either momentum or velocity, not both")),
            (Some(p), None) => {
                let p = vector("momentum", p)? / sys.scale(Dimension::Momentum);
                p / (mass * mass + p.norm_squared()).sqrt()
            }
            (None, Some(v)) => vector("velocity", v)? / sys.scale(Dimension::Velocity),
            (None, None) => ThreeVector::zeros(),
        };
        if !(velocity.norm() < 1.0) {
            return Err(invalid("velocity", format!("speed {} is not below c", velocity.norm())));
        }

        let n = self.spin_direction(seed)?;
        let electron = FreeElectron::moving(mass, &velocity, &n).map_err(|e| invalid("spin", e.to_string()))?;

        let fields = match self.field {
            FieldSpec::None => None,
            FieldSpec::Vacuum => Some((ThreeVector::zeros(), ThreeVector::zeros())),
            FieldSpec::Uniform { e, b } => Some((
                vector("field.e", e)? / sys.scale(Dimension::ElectricField),
                vector("field.b", b)? / sys.scale(Dimension::MagneticField),
            )),
        };

        let formulation = match (self.formulation, &fields) {
            (Some(Formulation::ClosedForm), Some(_)) => {
                return Err(invalid("formulation", "closed-form motion needs field kind `none`"))
            }
            (Some(f), _) => f,
            (None, None) => Formulation::ClosedForm,
            (None, Some(_)) => Formulation::FirstOrder,
        };
        // integrating with field kind `none` means integrating in F = 0
        let fields = match formulation {
            Formulation::ClosedForm => None,
            _ => fields.or(Some((ThreeVector::zeros(), ThreeVector::zeros()))),
        };

        let period = electron.period();
        let span = match (self.span.periods, self.span.tau) {
            (Some(_), Some(_)) => return Err(invalid("span", "give either periods or tau, not both")),
            (Some(p), None) => finite("span.periods", p)? * period,
            (None, Some(t)) => nat(finite("span.tau", t)?, Dimension::Time),
            (None, None) => return Err(invalid("span", "missing periods or tau")),
        };
        if span < 0.0 {
            return Err(invalid("span", "must not be negative"));
        }

        let step = match self.step {
            Some(h) => nat(finite("step", h)?, Dimension::Time),
            None => period / STEPS_PER_PERIOD as f64,
        };
        if !(step > 0.0) {
            return Err(invalid("step", "must be positive"));
        }
        let record_every = match self.record_every {
            Some(0) => return Err(invalid("record_every", "must be at least 1")),
            Some(k) => k,
            None => ((period / RECORDED_PER_PERIOD as f64) / step).round().max(1.0) as usize,
        };

        let grid = match &self.grid {
            Some(g) => {
                for (name, axis) in ["t", "x", "y", "z"].iter().zip(g.axes()) {
                    finite(&format!("grid.{name}.min"), axis.min)?;
                    finite(&format!("grid.{name}.max"), axis.max)?;
                    if axis.n == 0 {
                        return Err(invalid(&format!("grid.{name}.n"), "must be at least 1"));
                    }
                }
                let (ts, ls) = (sys.scale(Dimension::Time), sys.scale(Dimension::Length));
                Some(Grid { t: g.t.scaled(ts), x: g.x.scaled(ls), y: g.y.scaled(ls), z: g.z.scaled(ls) })
            }
            None => None,
        };

        Ok(Setup {
            name: self.name.clone().unwrap_or_else(|| "scenario".into()),
            units: self.units,
            electron,
            charge,
            fields,
            span,
            control: StepControl { step, record_every, estimate_error: false },
            formulation,
            outputs: self.outputs.clone(),
            grid,
        })
    }

    fn spin_direction(&self, seed: u64) -> Result<ThreeVector> {
        let s = &self.spin;
        let n = match (s.theta, s.phi, s.direction, s.random) {
            (Some(theta), phi, None, false) => {
                let (t, p) = (finite("spin.theta", theta)?, finite("spin.phi", phi.unwrap_or(0.0))?);
                ThreeVector::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos())
            }
            (None, None, Some(d), false) => {
                let d = vector("spin.direction", d)?;
                if !(d.norm() > 0.0) {
                    return Err(invalid("spin.direction", "must be non-zero"));
                }
                d.normalize()
            }
            (None, None, None, true) => {
                let mut rng = seeded_rng(seed);
                let z: f64 = rng.random_range(-1.0..1.0);
                let p: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let r = (1.0 - z * z).sqrt();
                ThreeVector::new(r * p.cos(), r * p.sin(), z)
            }
            (None, Some(_), None, false) => return Err(invalid("spin.theta", "missing polar angle")),
            _ => return Err(invalid("spin", "give exactly one of theta/phi, direction, or random")),
        };
        Ok(n)
    }
}
