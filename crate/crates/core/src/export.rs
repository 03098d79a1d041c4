//! Trajectory and field-map files.
//!
//! Every CSV starts with a `#` line naming the schema and the run metadata as
//! `key=value` pairs, followed by a fixed header row. JSONL trajectories carry
//! the same metadata as their first object. Numbers are written in shortest
//! round-trip form, so identical runs give identical bytes.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldmap::FieldMapRow;
use crate::minkowski::FourVector;
use crate::simulate::StateRecord;
use crate::tensor::SpinTensor;
use crate::units::{Dimension, UnitSystem, Units};

pub const TRAJECTORY_SCHEMA: &str = "zitterlab-trajectory/1";
pub const FIELDMAP_SCHEMA: &str = "zitterlab-fieldmap/1";

pub const TRAJECTORY_COLUMNS: [&str; 18] = [
    "tau",
    "t",
    "x1",
    "x2",
    "x3",
    "y1",
    "y2",
    "y3",
    "z1",
    "z2",
    "z3",
    "u0",
    "u1",
    "u2",
    "u3",
    "constraint",
    "energy_residual",
    "energy_drift",
];

pub const FIELDMAP_COLUMNS: [&str; 29] = [
    "t", "x1", "x2", "x3", "u0", "u1", "u2", "u3", "conv0", "conv1", "conv2", "conv3", "gordon0", "gordon1", "gordon2",
    "gordon3", "s01", "s02", "s03", "s23", "s31", "s12", "rho", "pol1", "pol2", "pol3", "mag1", "mag2", "mag3",
];

/// Run metadata, in the file's units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub schema: String,
    pub name: String,
    pub units: Units,
    pub mass: f64,
    pub charge: f64,
    pub formulation: String,
    pub field: String,
    pub step: f64,
    pub seed: u64,
}

impl TrajectoryMeta {
    fn line(&self) -> String {
        let units = match self.units {
            Units::Natural => "natural",
            Units::Si => "si",
        };
        format!(
            "# {} name={} units={} mass={:e} charge={:e} formulation={} field={} step={:e} seed={}",
            self.schema, self.name, units, self.mass, self.charge, self.formulation, self.field, self.step, self.seed
        )
    }

    fn parse(line: &str) -> Result<Self> {
        let bad = |reason: String| Error::MalformedInput { line: 1, reason };
        let mut words = line.trim_start_matches('#').split_whitespace();
        let schema = words.next().ok_or_else(|| bad("empty metadata line".into()))?;
        if schema != TRAJECTORY_SCHEMA {
            return Err(bad(format!("unknown schema `{schema}`, expected {TRAJECTORY_SCHEMA}")));
        }
        let mut map = std::collections::BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{w}`")))?;
            map.insert(k, v);
        }
        let get = |k: &str| map.get(k).copied().ok_or_else(|| bad(format!("missing `{k}`")));
        let num = |k: &str| get(k)?.parse::<f64>().map_err(|e| bad(format!("`{k}`: {e}")));
        Ok(Self {
            schema: schema.into(),
            name: get("name")?.into(),
            units: match get("units")? {
                "natural" => Units::Natural,
                "si" => Units::Si,
                other => return Err(bad(format!("unknown units `{other}`"))),
            },
            mass: num("mass")?,
            charge: num("charge")?,
            formulation: get("formulation")?.into(),
            field: get("field")?.into(),
            step: num("step")?,
            seed: get("seed")?.parse().map_err(|e| bad(format!("`seed`: {e}")))?,
        })
    }

    /// Natural-unit metadata converted to `units`.
    pub fn in_units(mut self, units: Units) -> Self {
        let sys = UnitSystem::for_units(units);
        self.mass = sys.from_natural(self.mass, Dimension::Mass);
        self.charge = sys.from_natural(self.charge, Dimension::Charge);
        self.step = sys.from_natural(self.step, Dimension::Time);
        self.units = units;
        self
    }
}

/// One JSONL line: the full state in the file's units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonRecord {
    pub tau: f64,
    pub x: [f64; 4],
    pub y: [f64; 4],
    pub z: [f64; 4],
    pub u: [f64; 4],
    /// S^{01}, S^{02}, S^{03}, S^{23}, S^{31}, S^{12}
    pub spin: [f64; 6],
    pub momentum: [f64; 4],
    pub constraint: f64,
    pub energy_residual: f64,
    pub energy_drift: f64,
}

impl JsonRecord {
    pub fn from_state(r: &StateRecord, units: Units) -> Self {
        let sys = UnitSystem::for_units(units);
        let v4 = |v: &FourVector, d| v.components.map(|c| sys.from_natural(c, d));
        let energy = |e| sys.from_natural(e, Dimension::Energy);
        Self {
            tau: sys.from_natural(r.tau, Dimension::Time),
            x: v4(&r.x, Dimension::Length),
            y: v4(&r.y, Dimension::Length),
            z: v4(&r.z, Dimension::Length),
            u: v4(&r.u, Dimension::Velocity),
            spin: r.spin.components.map(|c| sys.from_natural(c, Dimension::AngularMomentum)),
            momentum: v4(&r.momentum, Dimension::Momentum),
            constraint: energy(r.monitors.constraint),
            energy_residual: energy(r.monitors.energy_residual),
            energy_drift: energy(r.monitors.energy_drift),
        }
    }
}

/// The CSV columns of one sample. Time components of x, y, z are folded
/// into `t` for x only, as in the file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub tau: f64,
    pub t: f64,
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub z: [f64; 3],
    pub u: [f64; 4],
    pub constraint: f64,
    pub energy_residual: f64,
    pub energy_drift: f64,
}

impl From<&JsonRecord> for TrajectoryRow {
    fn from(r: &JsonRecord) -> Self {
        let sp = |v: &[f64; 4]| [v[1], v[2], v[3]];
        Self {
            tau: r.tau,
            t: r.x[0],
            x: sp(&r.x),
            y: sp(&r.y),
            z: sp(&r.z),
            u: r.u,
            constraint: r.constraint,
            energy_residual: r.energy_residual,
            energy_drift: r.energy_drift,
        }
    }
}

impl TrajectoryRow {
    fn values(&self) -> [f64; 18] {
        let (x, y, z, u) = (self.x, self.y, self.z, self.u);
        [
            self.tau,
            self.t,
            x[0],
            x[1],
            x[2],
            y[0],
            y[1],
            y[2],
            z[0],
            z[1],
            z[2],
            u[0],
            u[1],
            u[2],
            u[3],
            self.constraint,
            self.energy_residual,
            self.energy_drift,
        ]
    }

    fn from_values(v: &[f64; 18]) -> Self {
        Self {
            tau: v[0],
            t: v[1],
            x: [v[2], v[3], v[4]],
            y: [v[5], v[6], v[7]],
            z: [v[8], v[9], v[10]],
            u: [v[11], v[12], v[13], v[14]],
            constraint: v[15],
            energy_residual: v[16],
            energy_drift: v[17],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryFile {
    pub meta: TrajectoryMeta,
    pub rows: Vec<TrajectoryRow>,
}

fn io_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn number_row(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| format!("{v:e}")).collect()
}

pub fn write_trajectory_csv(w: impl Write, meta: &TrajectoryMeta, records: &[StateRecord]) -> Result<()> {
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "{}", meta.line())?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRAJECTORY_COLUMNS).map_err(io_err)?;
    for r in records {
        let row = TrajectoryRow::from(&JsonRecord::from_state(r, meta.units));
        out.write_record(number_row(&row.values())).map_err(io_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trajectory_jsonl(w: impl Write, meta: &TrajectoryMeta, records: &[StateRecord]) -> Result<()> {
    let mut w = std::io::BufWriter::new(w);
    serde_json::to_writer(&mut w, meta)?;
    writeln!(w)?;
    for r in records {
        serde_json::to_writer(&mut w, &JsonRecord::from_state(r, meta.units))?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trajectory written by either writer; the format is recognised from
/// the first byte.
pub fn read_trajectory(r: impl BufRead) -> Result<TrajectoryFile> {
    let mut lines = r.lines();
    let first = match lines.next() {
        Some(line) => line?,
        None => return Err(Error::MalformedInput { line: 1, reason: "empty file".into() }),
    };
    if first.starts_with('{') {
        let meta: TrajectoryMeta =
            serde_json::from_str(&first).map_err(|e| Error::MalformedInput { line: 1, reason: e.to_string() })?;
        if meta.schema != TRAJECTORY_SCHEMA {
            return Err(Error::MalformedInput { line: 1, reason: format!("unknown schema `{}`", meta.schema) });
        }
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: JsonRecord = serde_json::from_str(&line)
                .map_err(|e| Error::MalformedInput { line: k + 2, reason: e.to_string() })?;
            rows.push(TrajectoryRow::from(&rec));
        }
        return Ok(TrajectoryFile { meta, rows });
    }
    if !first.starts_with('#') {
        return Err(Error::MalformedInput { line: 1, reason: "missing schema line".into() });
    }
    let meta = TrajectoryMeta::parse(&first)?;
    let rest: String = lines.collect::<std::io::Result<Vec<_>>>()?.join("\n");
    let mut rd = csv::ReaderBuilder::new().from_reader(rest.as_bytes());
    let header = rd.headers().map_err(|e| Error::MalformedInput { line: 2, reason: e.to_string() })?;
    if header.iter().ne(TRAJECTORY_COLUMNS) {
        return Err(Error::MalformedInput {
            line: 2,
            reason: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut rows = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let line = k + 3;
        let rec = rec.map_err(|e| Error::MalformedInput { line, reason: e.to_string() })?;
        let mut v = [0.0; 18];
        for (slot, field) in v.iter_mut().zip(rec.iter()) {
            *slot =
                field.trim().parse().map_err(|e| Error::MalformedInput { line, reason: format!("`{field}`: {e}") })?;
        }
        rows.push(TrajectoryRow::from_values(&v));
    }
    Ok(TrajectoryFile { meta, rows })
}

pub fn write_fieldmap_csv(w: impl Write, meta: &TrajectoryMeta, rows: &[FieldMapRow]) -> Result<()> {
    let sys = UnitSystem::for_units(meta.units);
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "{}", meta.line().replacen(TRAJECTORY_SCHEMA, FIELDMAP_SCHEMA, 1))?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(FIELDMAP_COLUMNS).map_err(io_err)?;
    let current = sys.scale(Dimension::Charge) * sys.scale(Dimension::Velocity);
    let mut values = Vec::with_capacity(FIELDMAP_COLUMNS.len());
    for r in rows {
        values.clear();
        values.push(sys.from_natural(r.x.time(), Dimension::Time));
        values.extend(r.x.spatial().iter().map(|c| sys.from_natural(*c, Dimension::Length)));
        let vel = sys.scale(Dimension::Velocity);
        values.extend(scaled(&r.velocity, vel));
        values.extend(scaled(&r.convection, vel));
        values.extend(scaled(&r.gordon, vel));
        values.extend(spin(&r.spin, sys.scale(Dimension::AngularMomentum)));
        values.push(r.current.charge_density * current);
        values.extend(r.current.polarization.iter().map(|c| c * current));
        values.extend(r.current.magnetization.iter().map(|c| c * current));
        out.write_record(number_row(&values)).map_err(io_err)?;
    }
    out.flush()?;
    Ok(())
}

fn scaled(v: &FourVector, s: f64) -> [f64; 4] {
    v.components.map(|c| c * s)
}

fn spin(t: &SpinTensor, s: f64) -> [f64; 6] {
    t.components.map(|c| c * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;
    use crate::simulate::simulate;

    fn sample(units: Units) -> (TrajectoryMeta, Vec<StateRecord>) {
        let setup = Scenario::from_json(
            r#"{"name": "t", "spin": {"theta": 0.4}, "velocity": [0.5, 0, 0], "span": {"periods": 1}}"#,
        )
        .unwrap()
        .resolve(42)
        .unwrap();
        let run = simulate(&setup).unwrap();
        let meta = TrajectoryMeta {
            schema: TRAJECTORY_SCHEMA.into(),
            name: setup.name.clone(),
            units: Units::Natural,
            mass: 1.0,
            charge: -1.0,
            formulation: setup.formulation.as_str().into(),
            field: setup.field_kind().into(),
            step: run.step,
            seed: 42,
        }
        .in_units(units);
        (meta, run.records)
    }

    #[test]
    fn csv_round_trip() {
        let (meta, recs) = sample(Units::Natural);
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &meta, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# zitterlab-trajectory/1 name=t units=natural"));
        assert_eq!(text.lines().nth(1).unwrap(), TRAJECTORY_COLUMNS.join(","));
        let back = read_trajectory(buf.as_slice()).unwrap();
        assert_eq!(back.meta, meta);
        assert_eq!(back.rows.len(), recs.len());
        assert_eq!(back.rows[3].x, [recs[3].x[1], recs[3].x[2], recs[3].x[3]]);
        assert_eq!(back.rows[3].t, recs[3].x[0]);
    }

    #[test]
    fn jsonl_round_trip_in_si() {
        let (meta, recs) = sample(Units::Si);
        let mut buf = Vec::new();
        write_trajectory_jsonl(&mut buf, &meta, &recs).unwrap();
        let back = read_trajectory(buf.as_slice()).unwrap();
        assert_eq!(back.meta.units, Units::Si);
        assert!((back.meta.mass / 9.109e-31 - 1.0).abs() < 1e-3);
        let first: JsonRecord =
            serde_json::from_str(std::str::from_utf8(&buf).unwrap().lines().nth(1).unwrap()).unwrap();
        // null velocity, spin of order ħ
        assert!((first.u[1..].iter().map(|c| c * c).sum::<f64>().sqrt() / first.u[0] - 1.0).abs() < 1e-12);
        assert!(first.u[0] > 299_792_458.0);
        assert!(first.spin.iter().all(|s| s.abs() < 1e-33));
    }

    #[test]
    fn malformed_input_is_rejected() {
        let bad = [
            "",
            "tau,t\n1,2\n",
            "# zitterlab-trajectory/9 name=a\n",
            "# zitterlab-trajectory/1 name=a units=natural mass=1 charge=-1 formulation=x field=none step=1 seed=1\ntau\n",
        ];
        for text in bad {
            assert!(matches!(read_trajectory(text.as_bytes()), Err(Error::MalformedInput { .. })), "{text:?}");
        }
        let (meta, recs) = sample(Units::Natural);
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &meta, &recs[..2]).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        text.push_str("1,2,oops\n");
        match read_trajectory(text.as_bytes()) {
            Err(Error::MalformedInput { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }
}
