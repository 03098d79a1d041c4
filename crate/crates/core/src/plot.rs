//! Static SVG plots of trajectory files, drawn by hand.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::export::TrajectoryFile;
use crate::minkowski::ThreeVector;
use crate::units::{UnitSystem, Units};
use crate::worldline::principal_plane;

const WIDTH: f64 = 720.0;
const MARGIN: f64 = 64.0;
/// Room for the y tick labels.
const LEFT: f64 = 104.0;
const PLOT_WIDTH: f64 = WIDTH - LEFT - MARGIN;
const MAX_PLOT_HEIGHT: f64 = 560.0;
const MIN_HEIGHT: f64 = 240.0;

/// Data-to-pixel mapping of one plot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Pixels per data unit.
    pub x_scale: f64,
    pub y_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plot {
    pub svg: String,
    pub frame: Frame,
}

struct Canvas {
    width: f64,
    height: f64,
    frame: Frame,
    body: String,
}

impl Canvas {
    fn new(width: f64, height: f64, frame: Frame) -> Self {
        Self { width, height, frame, body: String::new() }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let f = &self.frame;
        (LEFT + (x - f.x_min) * f.x_scale, self.height - MARGIN - (y - f.y_min) * f.y_scale)
    }

    fn polyline(&mut self, pts: impl IntoIterator<Item = (f64, f64)>, stroke: &str, extra: &str) {
        let mut d = String::new();
        for (k, (x, y)) in pts.into_iter().enumerate() {
            let (a, b) = self.px(x, y);
            let _ = write!(d, "{}{a:.2},{b:.2}", if k == 0 { "M" } else { " L" });
        }
        let _ = writeln!(self.body, r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="1.5"{extra}/>"#);
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="13">{}</text>"#,
            escape(s)
        );
    }

    fn axes(&mut self, x_label: &str, y_label: &str) {
        let (x0, y0) = (LEFT, self.height - MARGIN);
        let (x1, y1) = (self.width - MARGIN, MARGIN);
        let _ = writeln!(
            self.body,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##,
            x1 - x0,
            y0 - y1
        );
        let f = self.frame;
        self.text(x0, y0 + 18.0, "start", &num(f.x_min));
        self.text(x1, y0 + 18.0, "end", &num(f.x_max));
        self.text(x0 - 6.0, y0, "end", &num(f.y_min));
        self.text(x0 - 6.0, y1 + 10.0, "end", &num(f.y_max));
        self.text((x0 + x1) / 2.0, y0 + 36.0, "middle", x_label);
        let _ = writeln!(
            self.body,
            r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(y_label)
        );
    }

    fn finish(self, title: &str) -> Plot {
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
            self.width / 2.0,
            escape(title)
        );
        svg.push_str(&self.body);
        svg.push_str("</svg>\n");
        Plot { svg, frame: self.frame }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn num(v: f64) -> String {
    format!("{v:.3e}")
}

fn length_unit(units: Units) -> &'static str {
    match units {
        Units::Natural => "ħ/mc",
        Units::Si => "m",
    }
}

fn require(file: &TrajectoryFile, needed: usize) -> Result<()> {
    if file.rows.len() < needed {
        return Err(Error::TooFewSamples { needed, got: file.rows.len() });
    }
    Ok(())
}

/// Pads a degenerate range so the mapping stays finite.
fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 1e-6 };
        (lo - pad, hi + pad)
    }
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// The relative coordinate z = x − y projected onto its own plane, with the
/// expected radius ħ/(2mc) drawn dashed underneath.
pub fn circle_plot(file: &TrajectoryFile) -> Result<Plot> {
    require(file, 3)?;
    let pts: Vec<ThreeVector> = file.rows.iter().map(|r| ThreeVector::from(r.z)).collect();
    let plane = principal_plane(&pts);
    // z is measured from the inertia center, so the origin is the circle center
    let flat: Vec<(f64, f64)> = pts.iter().map(|p| (p.dot(&plane.e1), p.dot(&plane.e2))).collect();
    let fitted = flat.iter().map(|(a, b)| a.hypot(*b)).sum::<f64>() / flat.len() as f64;
    let r0 = UnitSystem::for_units(file.meta.units).zitter_radius(file.meta.mass);
    let extent = flat.iter().map(|(a, b)| a.abs().max(b.abs())).fold(r0, f64::max) * 1.15;

    let scale = PLOT_WIDTH / (2.0 * extent);
    let frame = Frame { x_min: -extent, x_max: extent, y_min: -extent, y_max: extent, x_scale: scale, y_scale: scale };
    let mut c = Canvas::new(WIDTH, PLOT_WIDTH + 2.0 * MARGIN, frame);
    c.axes(&format!("e₁ [{}]", length_unit(file.meta.units)), &format!("e₂ [{}]", length_unit(file.meta.units)));

    let (cx, cy) = c.px(0.0, 0.0);
    let _ = writeln!(
        c.body,
        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="#999" stroke-dasharray="6 4"/>"##,
        r0 * scale
    );
    c.polyline(flat.iter().copied(), "#1f5fbf", "");
    c.polyline([(0.0, 0.0), flat[0]], "#c03030", "");
    let (tx, ty) = c.px(flat[0].0 / 2.0, flat[0].1 / 2.0);
    c.text(tx, ty - 6.0, "middle", "r");
    c.text(LEFT + 8.0, MARGIN + 20.0, "start", &format!("r₀ = ħ/2mc = {}", num(r0)));
    c.text(LEFT + 8.0, MARGIN + 38.0, "start", &format!("mean |z| = {}", num(fitted)));
    Ok(c.finish(&format!("{}: zitter circle in the spin plane", file.meta.name)))
}

/// Side view of the charge path: position along the drift against the
/// transverse excursion, one scale for both axes. Without drift the
/// horizontal axis is ct.
pub fn helix_plot(file: &TrajectoryFile) -> Result<Plot> {
    require(file, 2)?;
    let c_light = UnitSystem::for_units(file.meta.units).c;
    let pts: Vec<ThreeVector> = file.rows.iter().map(|r| ThreeVector::from(r.x)).collect();
    let first = pts[0];
    let drift = pts[pts.len() - 1] - first;
    let reach = pts.iter().map(|p| (p - first).norm()).fold(0.0, f64::max);
    let along = (drift.norm() > 1e-3 * reach).then(|| drift.normalize());

    let transverse: Vec<ThreeVector> = match along {
        Some(d) => pts.iter().map(|p| (p - first) - d * (p - first).dot(&d)).collect(),
        None => pts.iter().map(|p| p - first).collect(),
    };
    let side = principal_plane(&transverse).e1;
    let flat: Vec<(f64, f64)> = file
        .rows
        .iter()
        .zip(&pts)
        .zip(&transverse)
        .map(|((r, p), w)| {
            let h = match along {
                Some(d) => (p - first).dot(&d),
                None => c_light * (r.t - file.rows[0].t),
            };
            (h, w.dot(&side))
        })
        .collect();

    let (x_min, x_max) = bounds(flat.iter().map(|p| p.0));
    let (x_min, x_max) = span(x_min, x_max);
    let (y_min, y_max) = bounds(flat.iter().map(|p| p.1));
    let (y_min, y_max) = span(y_min, y_max);
    let scale = (PLOT_WIDTH / (x_max - x_min)).min(MAX_PLOT_HEIGHT / (y_max - y_min));
    let height = ((y_max - y_min) * scale + 2.0 * MARGIN).max(MIN_HEIGHT);
    // centre the strip vertically when the minimum height adds room
    let pad = (height - 2.0 * MARGIN) / scale - (y_max - y_min);
    let frame = Frame {
        x_min,
        x_max: x_min + PLOT_WIDTH / scale,
        y_min: y_min - pad / 2.0,
        y_max: y_max + pad / 2.0,
        x_scale: scale,
        y_scale: scale,
    };
    let mut c = Canvas::new(WIDTH, height, frame);
    let unit = length_unit(file.meta.units);
    let x_label = match along {
        Some(_) => format!("along drift [{unit}]"),
        None => format!("ct [{unit}]"),
    };
    c.axes(&x_label, &format!("transverse [{unit}]"));
    c.polyline(flat.iter().copied(), "#1f5fbf", "");
    Ok(c.finish(&format!("{}: helix side view (equal aspect)", file.meta.name)))
}

/// The constraint u·π − mc² and the energy drift against τ, on a symmetric
/// vertical range set by the largest deviation.
pub fn drift_plot(file: &TrajectoryFile) -> Result<Plot> {
    require(file, 2)?;
    let worst = file.rows.iter().map(|r| r.constraint.abs().max(r.energy_drift.abs())).fold(0.0, f64::max);
    let m = if worst > 0.0 { worst } else { 1.0 };
    let (x_min, x_max) = span(file.rows[0].tau, file.rows[file.rows.len() - 1].tau);
    let height = 420.0;
    let frame = Frame {
        x_min,
        x_max,
        y_min: -m,
        y_max: m,
        x_scale: PLOT_WIDTH / (x_max - x_min),
        y_scale: (height - 2.0 * MARGIN) / (2.0 * m),
    };
    let mut c = Canvas::new(WIDTH, height, frame);
    let (time, energy) = match file.meta.units {
        Units::Natural => ("ħ/mc²", "mc²"),
        Units::Si => ("s", "J"),
    };
    c.axes(&format!("τ [{time}]"), &format!("drift [{energy}]"));
    c.polyline([(x_min, 0.0), (x_max, 0.0)], "#bbb", r#" stroke-dasharray="4 4""#);
    c.polyline(file.rows.iter().map(|r| (r.tau, r.constraint)), "#1f5fbf", "");
    c.polyline(file.rows.iter().map(|r| (r.tau, r.energy_drift)), "#c07010", "");
    for (k, (label, colour)) in [("u·π − mc²", "#1f5fbf"), ("Δ(π²/m + 2Φ)", "#c07010")].into_iter().enumerate()
    {
        let y = MARGIN + 20.0 + 18.0 * k as f64;
        let x = WIDTH - MARGIN - 150.0;
        let _ = writeln!(
            c.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="3"/>"#,
            x,
            y - 4.0,
            x + 20.0,
            y - 4.0
        );
        c.text(x + 28.0, y, "start", label);
    }
    if worst == 0.0 {
        c.text(LEFT + 8.0, MARGIN + 20.0, "start", "both monitors identically zero");
    } else {
        c.text(LEFT + 8.0, MARGIN + 20.0, "start", &format!("max |drift| = {}", num(worst)));
    }
    Ok(c.finish(&format!("{}: invariant drift", file.meta.name)))
}

/// Every plot for one file, as (suffix, plot).
pub fn all_plots(file: &TrajectoryFile) -> Result<Vec<(&'static str, Plot)>> {
    Ok(vec![("circle", circle_plot(file)?), ("helix", helix_plot(file)?), ("drift", drift_plot(file)?)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::export::{read_trajectory, write_trajectory_csv, TrajectoryMeta, TRAJECTORY_SCHEMA};
    use crate::scenario::Scenario;
    use crate::simulate::simulate;

    fn file(text: &str, units: Units) -> TrajectoryFile {
        let setup = Scenario::from_json(text).unwrap().resolve(42).unwrap();
        let run = simulate(&setup).unwrap();
        let meta = TrajectoryMeta {
            schema: TRAJECTORY_SCHEMA.into(),
            name: "p".into(),
            units: Units::Natural,
            mass: setup.electron.mass(),
            charge: setup.charge,
            formulation: setup.formulation.as_str().into(),
            field: setup.field_kind().into(),
            step: run.step,
            seed: 42,
        }
        .in_units(units);
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &meta, &run.records).unwrap();
        read_trajectory(buf.as_slice()).unwrap()
    }

    #[test]
    fn rest_circle_is_annotated() {
        let f = file(r#"{"spin": {"theta": 0.7, "phi": 2.0}, "span": {"periods": 1}}"#, Units::Natural);
        let p = circle_plot(&f).unwrap();
        assert!(p.svg.contains("r₀ = ħ/2mc = 5.000e-1"));
        assert!(p.svg.contains("mean |z| = 5.000e-1"));
        assert_eq!(p.frame.x_scale, p.frame.y_scale);
        let si = circle_plot(&file(r#"{"spin": {"theta": 0}, "span": {"periods": 1}}"#, Units::Si)).unwrap();
        assert!(si.svg.contains("r₀ = ħ/2mc = 1.931e-13"), "{}", si.svg);
    }

    #[test]
    fn helix_keeps_aspect() {
        let f = file(r#"{"spin": {"theta": 0}, "velocity": [0.5, 0, 0], "span": {"periods": 4}}"#, Units::Natural);
        let p = helix_plot(&f).unwrap();
        assert_eq!(p.frame.x_scale, p.frame.y_scale);
        assert!(p.svg.contains("along drift"));
        let rest = helix_plot(&file(r#"{"spin": {"theta": 0}, "span": {"periods": 2}}"#, Units::Natural)).unwrap();
        assert!(rest.svg.contains("ct ["));
        assert_eq!(rest.frame.x_scale, rest.frame.y_scale);
    }

    #[test]
    fn drift_range_follows_worst_deviation() {
        let f = file(
            r#"{"spin": {"theta": 0}, "field": {"kind": "uniform", "b": [0, 0, 0.01]}, "span": {"periods": 3}}"#,
            Units::Natural,
        );
        let worst = f.rows.iter().map(|r| r.constraint.abs().max(r.energy_drift.abs())).fold(0.0, f64::max);
        let p = drift_plot(&f).unwrap();
        assert!(worst > 0.0);
        assert_eq!(p.frame.y_max, worst);
        assert_eq!(p.frame.y_min, -worst);
    }

    #[test]
    fn output_is_deterministic_svg() {
        let f = file(r#"{"spin": {"theta": 0}, "velocity": [0, 0.3, 0], "span": {"periods": 1}}"#, Units::Natural);
        let a = all_plots(&f).unwrap();
        let b = all_plots(&f).unwrap();
        assert_eq!(a, b);
        for (_, p) in &a {
            assert!(p.svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
            assert!(p.svg.trim_end().ends_with("</svg>"));
            assert!(!p.svg.contains("NaN") && !p.svg.contains("inf"));
        }
    }
}
