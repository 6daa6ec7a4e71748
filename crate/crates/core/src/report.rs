//! Run reports and fiber polyline files, written as JSON or CSV.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Result of one named check in a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub ok: bool,
    /// The measured residual or estimate.
    pub value: f64,
    /// The bound `value` was compared against, if any.
    pub tolerance: Option<f64>,
    pub detail: Option<String>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, ok: bool, value: f64) -> Self {
        Self {
            name: name.into(),
            ok,
            value,
            tolerance: None,
            detail: None,
        }
    }

    /// A check that passes when `value < tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            tolerance: Some(tolerance),
            ..Self::new(name, value < tolerance, value)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub outcomes: Vec<CheckOutcome>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
}

impl RunReport {
    pub fn new(command: impl Into<String>, version: impl Into<String>, seed: u64) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            command: command.into(),
            version: version.into(),
            seed,
            parameters: BTreeMap::new(),
            outcomes: Vec::new(),
            timestamp: 0,
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, outcome: CheckOutcome) -> &mut Self {
        self.outcomes.push(outcome);
        self
    }

    pub fn ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.ok)
    }

    /// Every numeric field must be finite.
    pub fn validate(&self) -> Result<()> {
        for o in &self.outcomes {
            let tol_ok = o.tolerance.map_or(true, f64::is_finite);
            if !o.value.is_finite() || !tol_ok {
                return Err(Error::InvalidParameter(format!(
                    "outcome '{}' has a non-finite number",
                    o.name
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    /// One row per field: `section,name,ok,value,tolerance,detail`.
    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |cells: [&str; 6]| w.write_record(cells).map_err(csv_error);
        row(["section", "name", "ok", "value", "tolerance", "detail"])?;
        let meta = [
            ("format_version", self.format_version.to_string()),
            ("command", self.command.clone()),
            ("version", self.version.clone()),
            ("seed", self.seed.to_string()),
            ("timestamp", self.timestamp.to_string()),
        ];
        for (k, v) in &meta {
            row(["meta", k, "", v, "", ""])?;
        }
        for (k, v) in &self.parameters {
            row(["parameter", k, "", v, "", ""])?;
        }
        for o in &self.outcomes {
            let value = format!("{:e}", o.value);
            let tol = o.tolerance.map(|t| format!("{t:e}")).unwrap_or_default();
            let ok = if o.ok { "true" } else { "false" };
            row(["outcome", &o.name, ok, &value, &tol, o.detail.as_deref().unwrap_or("")])?;
        }
        finish(w)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidParameter(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    #[default]
    None,
    /// From `(0, ..., 0, 1)` onto the span of the first coordinates.
    Stereographic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub id: usize,
    pub points: Vec<Vec<f64>>,
}

/// Sampled fibers ready for plotting. `ambient_dim` is the dimension of the
/// Euclidean space containing the sphere; points have `ambient_dim`
/// coordinates, or one fewer after stereographic projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberPolylineFile {
    pub format_version: u32,
    pub ambient_dim: usize,
    pub projection: Projection,
    pub fibers: Vec<Polyline>,
}

impl FiberPolylineFile {
    pub fn new(ambient_dim: usize, projection: Projection) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            ambient_dim,
            projection,
            fibers: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        match self.projection {
            Projection::None => self.ambient_dim,
            Projection::Stereographic => self.ambient_dim - 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let arity = self.arity();
        for f in &self.fibers {
            for p in &f.points {
                if p.len() != arity {
                    return Err(Error::DimensionMismatch { expected: arity, found: p.len() });
                }
                if p.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidParameter(format!("fiber {} has a non-finite point", f.id)));
                }
                if self.projection == Projection::None {
                    let norm = crate::algebra::norm(p);
                    if (norm - 1.0).abs() > 1e-9 {
                        return Err(Error::NotUnit { norm });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    /// `fiber,index,x0,x1,...`, one row per point.
    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["fiber".to_string(), "index".to_string()];
        header.extend((0..self.arity()).map(|k| format!("x{k}")));
        w.write_record(&header).map_err(csv_error)?;
        for f in &self.fibers {
            for (i, p) in f.points.iter().enumerate() {
                let mut rec = vec![f.id.to_string(), i.to_string()];
                rec.extend(p.iter().map(|x| x.to_string()));
                w.write_record(&rec).map_err(csv_error)?;
            }
        }
        finish(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> RunReport {
        let mut r = RunReport::new("fs", "0.1.0", 7);
        r.param("group", "su2").param("n", 1000);
        r.push(CheckOutcome::below("residual", 1e-13, 1e-9).with_detail("a, \"quoted\" note"));
        r.push(CheckOutcome::new("estimate", true, -0.998));
        r
    }

    #[test]
    fn report_round_trips() {
        let r = sample_report();
        assert_eq!(RunReport::from_json(&r.to_json().unwrap()).unwrap(), r);
        assert!(r.ok());
        assert_eq!(r.format_version, 1);
    }

    #[test]
    fn report_rejects_nan() {
        let mut r = sample_report();
        r.push(CheckOutcome::new("bad", false, f64::NAN));
        assert!(r.to_json().is_err());
        assert!(r.to_csv().is_err());
    }

    #[test]
    fn report_csv() {
        let csv = sample_report().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "section,name,ok,value,tolerance,detail");
        assert!(lines.contains(&"parameter,group,,su2,,"));
        assert!(csv.contains("\"a, \"\"quoted\"\" note\""));
    }

    #[test]
    fn polylines() {
        let mut f = FiberPolylineFile::new(4, Projection::None);
        f.fibers.push(Polyline { id: 0, points: vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]] });
        f.validate().unwrap();
        assert_eq!(FiberPolylineFile::from_json(&f.to_json().unwrap()).unwrap(), f);
        assert_eq!(f.to_csv().unwrap().lines().next(), Some("fiber,index,x0,x1,x2,x3"));

        f.fibers[0].points.push(vec![2.0, 0.0, 0.0, 0.0]);
        assert!(matches!(f.validate(), Err(Error::NotUnit { .. })));

        let mut g = FiberPolylineFile::new(4, Projection::Stereographic);
        g.fibers.push(Polyline { id: 3, points: vec![vec![5.0, 0.0, 0.0]] });
        g.validate().unwrap();
        g.fibers[0].points.push(vec![1.0, 2.0]);
        assert!(matches!(g.validate(), Err(Error::DimensionMismatch { .. })));
    }
}
