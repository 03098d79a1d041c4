//! Free-electron bilinear fields sampled on a rectangular space-time grid.

use crate::error::{Error, Result};
use crate::minkowski::FourVector;
use crate::observables::{self, AmplitudeBilinears, CurrentSplit};
use crate::scenario::Grid;
use crate::tensor::SpinTensor;
use crate::wavefunction::{self, FreeElectron};

/// Default limit on the number of grid points.
pub const DEFAULT_MAX_POINTS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldMapRow {
    pub x: FourVector,
    /// ψ̄γψ evaluated directly.
    pub velocity: FourVector,
    pub convection: FourVector,
    /// Convection plus spin current.
    pub gordon: FourVector,
    pub spin: SpinTensor,
    pub current: CurrentSplit,
}

/// Samples every grid point in t-major, z-minor order.
pub fn field_map(e: &FreeElectron, charge: f64, grid: &Grid, max_points: usize) -> Result<Vec<FieldMapRow>> {
    let points = grid.points();
    if points > max_points {
        return Err(Error::GridTooLarge { points, cap: max_points });
    }
    let b = AmplitudeBilinears::new(e);
    let mut rows = Vec::with_capacity(points);
    for t in grid.t.values() {
        for x in grid.x.values() {
            for y in grid.y.values() {
                for z in grid.z.values() {
                    let p = FourVector::new(t, x, y, z);
                    let g = observables::gordon_decompose(e, &b, &p);
                    rows.push(FieldMapRow {
                        x: p,
                        velocity: observables::vector_bilinear(&wavefunction::psi(e, &p)),
                        convection: g.convection,
                        gordon: g.total(),
                        spin: observables::spin_tensor_field_closed_form(e, &b, &p),
                        current: observables::current_split(e, &b, &p, charge),
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::ThreeVector;
    use crate::scenario::GridAxis;

    fn grid(n: usize) -> Grid {
        let axis = GridAxis { min: -1.0, max: 1.0, n };
        Grid { t: axis, x: axis, y: axis, z: axis }
    }

    #[test]
    fn rest_frame_map() {
        let e = FreeElectron::spin_state(1.0, &ThreeVector::new(0.6, 0.0, 0.8)).unwrap();
        let rows = field_map(&e, -1.0, &grid(3), 100).unwrap();
        assert_eq!(rows.len(), 81);
        for r in &rows {
            assert_eq!(r.current.magnetization.norm(), 0.0);
            assert!(r.convection.max_abs_diff(&FourVector::new(1.0, 0.0, 0.0, 0.0)) < 1e-14);
            assert!(r.gordon.max_abs_diff(&r.velocity) < 1e-11);
        }
    }

    #[test]
    fn boosted_convection_is_constant() {
        let e = FreeElectron::moving(1.0, &ThreeVector::new(0.2, -0.4, 0.1), &ThreeVector::z()).unwrap();
        let expected = *e.momentum() * (1.0 / e.mass());
        for r in field_map(&e, -1.0, &grid(2), 100).unwrap() {
            assert!(r.convection.max_abs_diff(&expected) < 1e-13);
            assert!(r.gordon.max_abs_diff(&r.velocity) < 1e-11);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let e = FreeElectron::spin_state(1.0, &ThreeVector::z()).unwrap();
        assert!(matches!(field_map(&e, -1.0, &grid(4), 255), Err(Error::GridTooLarge { points: 256, cap: 255 })));
    }
}
