//! Closed-form free-electron worldlines x(τ) = y(τ) + z(τ) and zitter-circle
//! geometry.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{proper_time, FourVector, ThreeVector};
use crate::observables::{self, AmplitudeBilinears};
use crate::tensor::SpinTensor;
use crate::units::{Dimension, UnitSystem};
use crate::wavefunction::FreeElectron;

pub const SAMPLES_PER_PERIOD: usize = 64;

/// Out-of-plane rms allowed in a circle fit, relative to the fitted radius.
pub const COPLANAR_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldlineSample {
    pub tau: f64,
    /// Charge position
    pub x: FourVector,
    /// Inertia center
    pub y: FourVector,
    /// Zitter separation x − y
    pub z: FourVector,
    pub u: FourVector,
    pub u_dot: FourVector,
}

/// Closed-form sampler for a free electron.
#[derive(Clone, Debug)]
pub struct FreeWorldline {
    electron: FreeElectron,
    bilinears: AmplitudeBilinears,
    y0: FourVector,
}

impl FreeWorldline {
    /// Inertia center starts at the spatial origin with y⁰(0) = −z⁰(0), so
    /// the charge sits at observer time zero.
    pub fn new(electron: FreeElectron) -> Self {
        let bilinears = AmplitudeBilinears::new(&electron);
        let mut wl = Self { electron, bilinears, y0: FourVector::ZERO };
        wl.y0 = FourVector::new(-wl.separation(0.0)[0], 0.0, 0.0, 0.0);
        wl
    }

    pub fn with_origin(electron: FreeElectron, y0: FourVector) -> Self {
        let bilinears = AmplitudeBilinears::new(&electron);
        Self { electron, bilinears, y0 }
    }

    pub fn electron(&self) -> &FreeElectron {
        &self.electron
    }

    pub fn bilinears(&self) -> &AmplitudeBilinears {
        &self.bilinears
    }

    pub fn origin(&self) -> &FourVector {
        &self.y0
    }

    /// z(τ) = (u(0) − π/m) sin(ω₀τ)/ω₀ − u̇(0) cos(ω₀τ)/ω₀²
    pub fn separation(&self, tau: f64) -> FourVector {
        let w0 = self.electron.omega0();
        let v = self.electron.global_velocity();
        let b = &self.bilinears;
        (b.velocity - v) * ((w0 * tau).sin() / w0) - b.acceleration * ((w0 * tau).cos() / (w0 * w0))
    }

    pub fn inertia_center(&self, tau: f64) -> FourVector {
        self.y0 + self.electron.global_velocity() * tau
    }

    pub fn sample(&self, tau: f64) -> WorldlineSample {
        let y = self.inertia_center(tau);
        let z = self.separation(tau);
        let w0 = self.electron.omega0();
        let u = observables::velocity_closed_form(&self.electron, &self.bilinears, tau).u;
        WorldlineSample { tau, x: y + z, y, z, u, u_dot: z * (-w0 * w0) }
    }

    /// Evenly spaced samples over `periods` zitter periods, endpoint included.
    pub fn sample_periods(&self, periods: f64, per_period: usize) -> Vec<WorldlineSample> {
        let n = ((periods * per_period as f64).round() as usize).max(1);
        let dt = periods * self.electron.period() / n as f64;
        (0..=n).map(|k| self.sample(k as f64 * dt)).collect()
    }

    /// z(τ) = −S(τ)π/m², rebuilt from the spin-tensor field.
    pub fn integrated_gordon(&self, tau: f64) -> FourVector {
        let s = observables::spin_tensor_at(&self.electron, &self.bilinears, tau);
        separation_from_spin(&s, self.electron.momentum(), self.electron.mass())
    }
}

/// z = −S π / m²
pub fn separation_from_spin(s: &SpinTensor, momentum: &FourVector, mass: f64) -> FourVector {
    s.contract(momentum) * (-1.0 / (mass * mass))
}

/// z = (d·P, E d + s × P) / m², the same separation written with the spin
/// and dipole vectors.
pub fn separation_from_moments(
    spin: &ThreeVector,
    dipole: &ThreeVector,
    momentum: &FourVector,
    mass: f64,
) -> FourVector {
    let p = momentum.spatial();
    let k = 1.0 / (mass * mass);
    FourVector::from_parts(dipole.dot(&p) * k, (dipole * momentum.time() + spin.cross(&p)) * k)
}

/// L^{μν} = x^μπ^ν − x^νπ^μ
pub fn orbital_angular_momentum(x: &FourVector, momentum: &FourVector) -> SpinTensor {
    SpinTensor::wedge(x, momentum)
}

/// J = S + L
pub fn total_angular_momentum(s: &SpinTensor, x: &FourVector, momentum: &FourVector) -> SpinTensor {
    *s + orbital_angular_momentum(x, momentum)
}

/// Angular position ω₀τ(x) mod 2π in the zitter circle.
pub fn angular_position(e: &FreeElectron, x: &FourVector) -> f64 {
    (e.omega0() * proper_time(x, e.momentum(), e.mass())).rem_euclid(std::f64::consts::TAU)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZitterGeometry {
    pub radius: f64,
    /// Angular frequency in proper time.
    pub frequency: f64,
    /// Unit normal oriented with the sense of rotation (along r × u).
    pub plane_normal: ThreeVector,
    pub center: ThreeVector,
}

impl ZitterGeometry {
    /// Radius in metres and frequency in s⁻¹.
    pub fn to_si(&self) -> Self {
        let si = UnitSystem::si();
        Self {
            radius: si.from_natural(self.radius, Dimension::Length),
            frequency: si.from_natural(self.frequency, Dimension::Frequency),
            plane_normal: self.plane_normal,
            center: self.center * si.scale(Dimension::Length),
        }
    }
}

/// Best-fit plane through a point cloud: `e1`, `e2` span the two directions of
/// largest spread and `normal` is the direction of least spread.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    pub centroid: ThreeVector,
    pub e1: ThreeVector,
    pub e2: ThreeVector,
    pub normal: ThreeVector,
}

pub fn principal_plane(pts: &[ThreeVector]) -> Plane {
    let n = pts.len().max(1) as f64;
    let centroid = pts.iter().sum::<ThreeVector>() / n;
    let mut cov = Matrix3::zeros();
    for p in pts {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov / n);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    Plane {
        centroid,
        e1: eig.eigenvectors.column(order[0]).into(),
        e2: eig.eigenvectors.column(order[1]).into(),
        normal: eig.eigenvectors.column(order[2]).into(),
    }
}

/// Fits a circle to the spatial charge positions of rest-frame samples.
///
/// The plane comes from the second-moment eigenvectors, the circle from an
/// algebraic least-squares fit inside that plane, and the frequency from a
/// linear fit of the unwrapped polar angle against τ.
pub fn zitter_geometry(samples: &[WorldlineSample]) -> Result<ZitterGeometry> {
    const NEEDED: usize = 5;
    if samples.len() < NEEDED {
        return Err(Error::TooFewSamples { needed: NEEDED, got: samples.len() });
    }
    let n = samples.len() as f64;
    let pts: Vec<ThreeVector> = samples.iter().map(|s| s.x.spatial()).collect();
    let Plane { centroid, e1, e2, normal } = principal_plane(&pts);
    let mut normal = normal;

    // x² + y² = 2a x + 2b y + c
    let mut a = DMatrix::zeros(pts.len(), 3);
    let mut rhs = DVector::zeros(pts.len());
    let mut off_plane = 0.0;
    for (k, p) in pts.iter().enumerate() {
        let d = p - centroid;
        let (px, py) = (d.dot(&e1), d.dot(&e2));
        off_plane += d.dot(&normal).powi(2);
        a[(k, 0)] = 2.0 * px;
        a[(k, 1)] = 2.0 * py;
        a[(k, 2)] = 1.0;
        rhs[k] = px * px + py * py;
    }
    let sol = a.svd(true, true).solve(&rhs, 1e-15).map_err(|r| Error::DegenerateFit(r.to_string()))?;
    let (cx, cy) = (sol[0], sol[1]);
    let radius = (sol[2] + cx * cx + cy * cy).sqrt();
    let rms = (off_plane / n).sqrt();
    if !(rms <= COPLANAR_TOLERANCE * radius) {
        return Err(Error::NonCoplanar { rms, radius });
    }

    // unwrapped polar angle vs τ
    let mut angles = Vec::with_capacity(pts.len());
    let mut prev = 0.0;
    for (k, p) in pts.iter().enumerate() {
        let d = p - centroid;
        let raw = (d.dot(&e2) - cy).atan2(d.dot(&e1) - cx);
        let ang = if k == 0 {
            raw
        } else {
            prev + (raw - prev + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI
        };
        angles.push(ang);
        prev = ang;
    }
    let taus: Vec<f64> = samples.iter().map(|s| s.tau).collect();
    let tm = taus.iter().sum::<f64>() / n;
    let am = angles.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, a) in taus.iter().zip(&angles) {
        sxy += (t - tm) * (a - am);
        sxx += (t - tm) * (t - tm);
    }
    let slope = sxy / sxx;
    // e1 × e2 is the rotation axis for a positive slope
    let axis = e1.cross(&e2);
    normal = if (axis.dot(&normal) >= 0.0) == (slope >= 0.0) { normal } else { -normal };

    Ok(ZitterGeometry {
        radius,
        frequency: slope.abs(),
        plane_normal: normal.normalize(),
        center: centroid + e1 * cx + e2 * cy,
    })
}
