//! Region and curve exports (CSV and JSON).

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::RegionPolygon;
use crate::NATS_PER_BIT;

/// Significant digits of every exported float.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits; `-0` becomes `0`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Bits,
    Nats,
}

impl Units {
    pub fn factor(self) -> f64 {
        match self {
            Units::Bits => 1.0,
            Units::Nats => NATS_PER_BIT,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        }
    }
}

/// Everything needed to rerun the computation behind an export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportMetadata {
    pub command: String,
    /// Name of the polygon or curve within the command's output.
    pub series: String,
    pub parameters: Value,
    pub grid: Value,
    pub units: Units,
    pub argv: Vec<String>,
    pub version: String,
}

impl ExportMetadata {
    pub fn new(command: &str, series: &str, parameters: Value, grid: Value, units: Units) -> Self {
        Self {
            command: command.to_string(),
            series: series.to_string(),
            parameters,
            grid,
            units,
            argv: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionExport {
    pub metadata: ExportMetadata,
    /// Counterclockwise from the origin, `[R1, R2]`.
    pub vertices: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary: Option<Vec<[f64; 2]>>,
}

fn convert(p: [f64; 2], units: Units) -> [f64; 2] {
    [
        round_sig(p[0] * units.factor()),
        round_sig(p[1] * units.factor()),
    ]
}

impl RegionExport {
    /// `boundary_step` (in bits) adds dense upper-boundary samples.
    pub fn from_polygon(
        metadata: ExportMetadata,
        region: &RegionPolygon,
        boundary_step: Option<f64>,
    ) -> Result<Self> {
        let units = metadata.units;
        let vertices = region
            .vertices()
            .iter()
            .map(|v| convert([v.r1, v.r2], units))
            .collect();
        let boundary = boundary_step
            .map(|step| {
                region
                    .boundary_samples(step)
                    .map(|pts| pts.iter().map(|v| convert([v.r1, v.r2], units)).collect())
            })
            .transpose()?;
        Ok(Self {
            metadata,
            vertices,
            boundary,
        })
    }

    pub fn to_csv(&self) -> String {
        let u = self.metadata.units.suffix();
        csv(&[&format!("R1_{u}"), &format!("R2_{u}")], &self.vertices)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = match Format::of(path)? {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json()?,
        };
        Ok(std::fs::write(path, text)?)
    }
}

/// A sampled curve such as `R2max` against `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveExport {
    pub metadata: ExportMetadata,
    pub columns: [String; 2],
    pub points: Vec<[f64; 2]>,
}

impl CurveExport {
    /// Only the second column carries rate units.
    pub fn new(
        metadata: ExportMetadata,
        x_name: &str,
        y_name: &str,
        points: &[(f64, f64)],
    ) -> Self {
        let u = metadata.units;
        let columns = [x_name.to_string(), format!("{y_name}_{}", u.suffix())];
        let points = points
            .iter()
            .map(|&(x, y)| [round_sig(x), round_sig(y * u.factor())])
            .collect();
        Self {
            metadata,
            columns,
            points,
        }
    }

    pub fn to_csv(&self) -> String {
        csv(&[&self.columns[0], &self.columns[1]], &self.points)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = match Format::of(path)? {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json()?,
        };
        Ok(std::fs::write(path, text)?)
    }
}

fn csv(header: &[&str; 2], rows: &[[f64; 2]]) -> String {
    let mut out = format!("{},{}\n", header[0], header[1]);
    for r in rows {
        let _ = writeln!(out, "{},{}", r[0], r[1]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn of(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            _ => Err(Error::Unknown {
                kind: "output format (use .csv or .json)",
                name: path.display().to_string(),
            }),
        }
    }
}
