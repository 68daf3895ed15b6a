//! Scenario loading and result bundles.
//!
//! A bundle is a directory holding `metadata.toml`, one grid file per field
//! and format (`w.csv`, `w.bin`, `phi.csv`, `phi.bin`) and the tip
//! trajectory (`tip.csv`, plus `tip_phi.csv` for the Timoshenko beam).
//!
//! Grid CSVs have one row per time level with header `t,x_0,...,x_N`.
//! Binary grids are the same values as flat little-endian `f64`, level-major,
//! with the shape recorded in the metadata.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{SimulationResult, TipTrajectory};
use crate::error::{Error, Result};
use crate::models::FieldHistory;
use crate::scenario::{
    parse_scenario_json, parse_scenario_toml_with_overrides, scenario_from_json_value,
    with_overrides, Override, Scenario,
};
use crate::stability::{DivergenceVerdict, StabilityReport};

pub const BUNDLE_FORMAT_VERSION: u32 = 1;
pub const METADATA_FILE: &str = "metadata.toml";

/// Loads and validates a scenario file; `.json` files are read as JSON,
/// anything else as TOML.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    load_scenario_with_overrides(path, &[])
}

pub fn load_scenario_with_overrides(
    path: impl AsRef<Path>,
    overrides: &[Override],
) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        if overrides.is_empty() {
            return parse_scenario_json(&text);
        }
        let value = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: String::new(),
            message: e.to_string(),
        })?;
        with_overrides(&scenario_from_json_value(value)?, overrides)
    } else {
        parse_scenario_toml_with_overrides(&text, overrides)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExportFormats {
    pub csv: bool,
    pub bin: bool,
}

impl ExportFormats {
    pub const CSV: Self = Self {
        csv: true,
        bin: false,
    };
    pub const BIN: Self = Self {
        csv: false,
        bin: true,
    };
    pub const BOTH: Self = Self {
        csv: true,
        bin: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub n_levels: usize,
    pub n_nodes: usize,
}

/// Relative names of the files in a bundle.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleFiles {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_bin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_bin: Option<String>,
    pub tip_csv: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tip_phi_csv: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_s: f64,
    pub steps_completed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleMetadata {
    pub format_version: u32,
    pub model: String,
    pub controller: String,
    pub h: f64,
    pub k: f64,
    /// Absent when the run kept no history (rolling storage).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<GridShape>,
    pub byte_order: String,
    pub files: BundleFiles,
    pub timing: Timing,
    pub verdict: DivergenceVerdict,
    pub a_priori: StabilityReport,
    pub scenario: toml::Table,
}

/// Formats a value so that parsing it back yields the same `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_grid_csv(path: &Path, times: &[f64], grid: &[f64], n_nodes: usize) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    let mut header = Vec::with_capacity(n_nodes + 1);
    header.push("t".to_string());
    header.extend((0..n_nodes).map(|i| format!("x_{i}")));
    w.write_record(&header).map_err(csv_error)?;
    let mut row = Vec::with_capacity(n_nodes + 1);
    for (j, values) in grid.chunks_exact(n_nodes).enumerate() {
        row.clear();
        row.push(format_f64(times[j]));
        row.extend(values.iter().map(|&v| format_f64(v)));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn write_grid_bin(path: &Path, grid: &[f64]) -> Result<()> {
    let mut bytes = Vec::with_capacity(grid.len() * 8);
    for v in grid {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn write_series_csv(path: &Path, header: [&str; 2], t: &[f64], v: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(header).map_err(csv_error)?;
    for (a, b) in t.iter().zip(v) {
        w.write_record([format_f64(*a), format_f64(*b)])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Bundle(format!("{other:?}")),
    }
}

/// Writes `result` into `dir` (created if needed) and returns the metadata
/// that was written.
pub fn export_result(
    result: &SimulationResult,
    dir: impl AsRef<Path>,
    formats: ExportFormats,
) -> Result<BundleMetadata> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut files = BundleFiles {
        tip_csv: "tip.csv".into(),
        ..BundleFiles::default()
    };
    let mut shape = None;
    if let Some(history) = &result.history {
        let n_nodes = history.n_nodes();
        shape = Some(GridShape {
            n_levels: history.n_levels(),
            n_nodes,
        });
        let times = &result.tip.t;
        let mut fields = vec![("w", history.w())];
        if let Some(phi) = history.phi() {
            fields.push(("phi", phi));
        }
        for (name, grid) in fields {
            if formats.csv {
                let file = format!("{name}.csv");
                write_grid_csv(&dir.join(&file), times, grid, n_nodes)?;
                match name {
                    "w" => files.w_csv = Some(file),
                    _ => files.phi_csv = Some(file),
                }
            }
            if formats.bin {
                let file = format!("{name}.bin");
                write_grid_bin(&dir.join(&file), grid)?;
                match name {
                    "w" => files.w_bin = Some(file),
                    _ => files.phi_bin = Some(file),
                }
            }
        }
    }
    write_series_csv(
        &dir.join(&files.tip_csv),
        ["t", "w_tip"],
        &result.tip.t,
        &result.tip.w,
    )?;
    if let Some(phi) = &result.tip.phi {
        let file = "tip_phi.csv".to_string();
        write_series_csv(&dir.join(&file), ["t", "phi_tip"], &result.tip.t, phi)?;
        files.tip_phi_csv = Some(file);
    }
    let metadata = BundleMetadata {
        format_version: BUNDLE_FORMAT_VERSION,
        model: result.scenario.model.kind().to_string(),
        controller: result.scenario.controller.kind.to_string(),
        h: result.mesh.h,
        k: result.mesh.k,
        shape,
        byte_order: "little-endian".into(),
        files,
        timing: Timing {
            wall_time_s: result.wall_time.as_secs_f64(),
            steps_completed: result.steps_completed,
        },
        verdict: result.verdict,
        a_priori: result.a_priori.clone(),
        scenario: result.scenario.to_toml_table(),
    };
    let text = toml::to_string(&metadata).map_err(|e| Error::Bundle(e.to_string()))?;
    fs::write(dir.join(METADATA_FILE), text)?;
    Ok(metadata)
}

/// A bundle read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedBundle {
    pub metadata: BundleMetadata,
    pub history: Option<FieldHistory>,
    pub tip: TipTrajectory,
}

impl ImportedBundle {
    pub fn scenario(&self) -> Result<Scenario> {
        crate::scenario::scenario_from_toml_table(self.metadata.scenario.clone())
    }

    /// Rebuilds the result the bundle was written from, so it can be exported
    /// again in other formats.
    pub fn into_result(self) -> Result<SimulationResult> {
        let scenario = self.scenario()?;
        let mesh = crate::mesh::build_mesh(scenario.mesh)?;
        Ok(SimulationResult {
            scenario,
            mesh,
            history: self.history,
            tip: self.tip,
            a_priori: self.metadata.a_priori,
            verdict: self.metadata.verdict,
            wall_time: std::time::Duration::from_secs_f64(
                self.metadata.timing.wall_time_s.max(0.0),
            ),
            steps_completed: self.metadata.timing.steps_completed,
        })
    }
}

fn read_csv_rows(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    let header: Vec<String> = r
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let row = record
            .iter()
            .map(|s| {
                s.trim().parse::<f64>().map_err(|e| {
                    Error::Bundle(format!("{}: row {}: {e}", path.display(), line + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reads a grid CSV; returns the time column and the level-major values.
pub fn read_grid_csv(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let path = path.as_ref();
    let (header, rows) = read_csv_rows(path)?;
    if header.first().map(String::as_str) != Some("t") || header.len() < 2 {
        return Err(Error::Bundle(format!(
            "{}: expected header t,x_0,...",
            path.display()
        )));
    }
    let n_nodes = header.len() - 1;
    let mut times = Vec::with_capacity(rows.len());
    let mut grid = Vec::with_capacity(rows.len() * n_nodes);
    for row in rows {
        if row.len() != n_nodes + 1 {
            return Err(Error::Bundle(format!("{}: ragged row", path.display())));
        }
        times.push(row[0]);
        grid.extend_from_slice(&row[1..]);
    }
    Ok((times, grid, n_nodes))
}

pub fn read_grid_bin(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Bundle(format!(
            "{}: length is not a multiple of 8",
            path.display()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

fn read_series(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let (_, rows) = read_csv_rows(path)?;
    let mut t = Vec::with_capacity(rows.len());
    let mut v = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != 2 {
            return Err(Error::Bundle(format!(
                "{}: expected two columns",
                path.display()
            )));
        }
        t.push(row[0]);
        v.push(row[1]);
    }
    Ok((t, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSource {
    /// Binary files when present, CSV otherwise.
    Prefer,
    Csv,
    Bin,
}

fn load_grid(
    dir: &Path,
    csv: &Option<String>,
    bin: &Option<String>,
    shape: GridShape,
    source: GridSource,
) -> Result<Vec<f64>> {
    let use_bin = match source {
        GridSource::Bin => true,
        GridSource::Csv => false,
        GridSource::Prefer => bin.is_some(),
    };
    let grid = if use_bin {
        let file = bin
            .as_ref()
            .ok_or_else(|| Error::Bundle("bundle has no binary grid".into()))?;
        read_grid_bin(dir.join(file))?
    } else {
        let file = csv
            .as_ref()
            .ok_or_else(|| Error::Bundle("bundle has no csv grid".into()))?;
        let (_, grid, n_nodes) = read_grid_csv(dir.join(file))?;
        if n_nodes != shape.n_nodes {
            return Err(Error::Bundle(format!(
                "csv has {n_nodes} nodes, metadata says {}",
                shape.n_nodes
            )));
        }
        grid
    };
    if grid.len() != shape.n_levels * shape.n_nodes {
        return Err(Error::Bundle(format!(
            "grid holds {} values, metadata shape is {}x{}",
            grid.len(),
            shape.n_levels,
            shape.n_nodes
        )));
    }
    Ok(grid)
}

pub fn import_bundle(dir: impl AsRef<Path>) -> Result<ImportedBundle> {
    import_bundle_from(dir, GridSource::Prefer)
}

pub fn import_bundle_from(dir: impl AsRef<Path>, source: GridSource) -> Result<ImportedBundle> {
    let dir = dir.as_ref();
    let text = fs::read_to_string(dir.join(METADATA_FILE))?;
    let metadata: BundleMetadata =
        toml::from_str(&text).map_err(|e| Error::Bundle(e.message().to_string()))?;
    if metadata.format_version != BUNDLE_FORMAT_VERSION {
        return Err(Error::Bundle(format!(
            "unsupported bundle format {}",
            metadata.format_version
        )));
    }
    let files = &metadata.files;
    let history = match metadata.shape {
        Some(shape) => {
            let w = load_grid(dir, &files.w_csv, &files.w_bin, shape, source)?;
            let phi = if files.phi_csv.is_some() || files.phi_bin.is_some() {
                Some(load_grid(
                    dir,
                    &files.phi_csv,
                    &files.phi_bin,
                    shape,
                    source,
                )?)
            } else {
                None
            };
            Some(FieldHistory::from_parts(shape.n_nodes, w, phi))
        }
        None => None,
    };
    let (t, w) = read_series(&dir.join(&files.tip_csv))?;
    let phi = match &files.tip_phi_csv {
        Some(file) => Some(read_series(&dir.join(file))?.1),
        None => None,
    };
    Ok(ImportedBundle {
        metadata,
        history,
        tip: TipTrajectory { t, w, phi },
    })
}

/// Every file of a bundle directory, sorted by name.
pub fn bundle_paths(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    out.sort();
    Ok(out)
}
