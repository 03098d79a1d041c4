//! Runs a resolved scenario and collects one record per kept sample.

use serde::{Deserialize, Serialize};

use crate::dynamics::{self, EmField, ParticleState, SecondOrderState};
use crate::error::Result;
use crate::minkowski::FourVector;
use crate::observables;
use crate::scenario::{Formulation, Setup};
use crate::tensor::SpinTensor;
use crate::wavefunction::FreeElectron;
use crate::worldline::FreeWorldline;

/// Full state at one proper time, natural units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub tau: f64,
    pub x: FourVector,
    pub y: FourVector,
    pub z: FourVector,
    pub u: FourVector,
    pub spin: SpinTensor,
    pub momentum: FourVector,
    pub monitors: Monitors,
}

/// Quantities that stay fixed along exact motion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Monitors {
    /// u·π − mc²
    pub constraint: f64,
    /// π²/m − mc² − Φ
    pub energy_residual: f64,
    /// Change of π²/m + 2Φ since the first sample.
    pub energy_drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub records: Vec<StateRecord>,
    /// Effective integration step; the sampling step for closed-form runs.
    pub step: f64,
}

pub fn simulate(setup: &Setup) -> Result<Run> {
    let m = setup.electron.mass();
    let q = setup.charge;
    let control = setup.control;
    let field = setup.field();
    let (states, step): (Vec<ParticleState>, f64) = match setup.formulation {
        Formulation::ClosedForm => {
            let wl = FreeWorldline::new(setup.electron.clone());
            let dt = control.step * control.record_every as f64;
            let n = (setup.span / dt).ceil() as usize;
            let dt = if n == 0 { dt } else { setup.span / n as f64 };
            let states = (0..=n)
                .map(|k| {
                    let tau = k as f64 * dt;
                    let s = wl.sample(tau);
                    ParticleState {
                        tau,
                        x: s.x,
                        u: s.u,
                        s: observables::spin_tensor_at(wl.electron(), wl.bilinears(), tau),
                        p: *wl.electron().momentum(),
                    }
                })
                .collect();
            (states, dt)
        }
        Formulation::FirstOrder => {
            let s0 = ParticleState::from_electron(&setup.electron, &origin(&setup.electron));
            let t = dynamics::integrate_first_order(s0, &field, q, m, setup.span, control)?;
            (t.states, t.step)
        }
        Formulation::SecondOrder => {
            let s0 = SecondOrderState::from_electron(&setup.electron, &origin(&setup.electron));
            let t = dynamics::integrate_second_order(s0, &field, q, m, setup.span, control)?;
            (t.states.iter().map(|s| ParticleState::from_second_order(s, m)).collect(), t.step)
        }
    };
    Ok(Run { records: records(states, &field, q, m)?, step })
}

/// Same inertia-center origin as the closed-form worldline, so all three
/// formulations start from identical data.
fn origin(e: &FreeElectron) -> FourVector {
    *FreeWorldline::new(e.clone()).origin()
}

fn records(states: Vec<ParticleState>, field: &EmField, q: f64, m: f64) -> Result<Vec<StateRecord>> {
    let mut out = Vec::with_capacity(states.len());
    let mut first = None;
    for s in states {
        let energy_residual = dynamics::energy_equation_residual(&s, field, q, m)?;
        let constant = dynamics::field_energy_constant(&s, field, q, m)?;
        let c0 = *first.get_or_insert(constant);
        let z = s.separation(m);
        out.push(StateRecord {
            tau: s.tau,
            x: s.x,
            y: s.x - z,
            z,
            u: s.u,
            spin: s.s,
            momentum: s.p,
            monitors: Monitors {
                constraint: dynamics::energy_invariant(&s) - m,
                energy_residual,
                energy_drift: constant - c0,
            },
        });
    }
    Ok(out)
}
