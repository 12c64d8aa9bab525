//! Sampled-field CSV: `#`-prefixed `key=value` header lines, one column
//! header row, then `(m | angle_index), s_index, re, im` rows.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::log_radial::{LogRadialGrid, RadialSamples};
use crate::spherical::{FactoredField, GridField2D};

pub const FACTORED_COLUMNS: &str = "m,s_index,re,im";
pub const PLANAR_COLUMNS: &str = "angle_index,s_index,re,im";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
    pub n_phi: Option<usize>,
}

impl GridSpec {
    pub const DEFAULT: GridSpec = GridSpec { s_min: -16.0, s_max: 16.0, n: 2048, n_phi: None };
    pub const DEFAULT_N_PHI: usize = 256;

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Parse(format!("grid must be smin,smax,n[,nphi], got {text:?}")));
        }
        Ok(GridSpec {
            s_min: parse_f64(parts[0])?,
            s_max: parse_f64(parts[1])?,
            n: parse_usize(parts[2])?,
            n_phi: parts.get(3).map(|p| parse_usize(p)).transpose()?,
        })
    }

    pub fn grid(&self, dim: usize) -> Result<LogRadialGrid> {
        LogRadialGrid::new(dim, self.s_min, self.s_max, self.n)
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi.unwrap_or(Self::DEFAULT_N_PHI)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{},{},{}", fmt_f64(self.s_min), fmt_f64(self.s_max), self.n);
        if let Some(n_phi) = self.n_phi {
            let _ = write!(out, ",{n_phi}");
        }
        out
    }
}

/// Fixed 17-significant-digit rendering used for every emitted number.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(text: &str) -> Result<f64> {
    text.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad number {text:?}: {e}")))
}

pub fn parse_usize(text: &str) -> Result<usize> {
    text.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad index {text:?}: {e}")))
}

#[derive(Debug, Clone)]
pub enum FieldData {
    /// Degree-`m` radial profiles, each on the full grid.
    Factored { components: Vec<FactoredField> },
    /// Samples on an `n_phi x n` polar grid (dimension 2 only).
    Planar { field: GridField2D },
}

#[derive(Debug, Clone)]
pub struct FieldFile {
    pub dim: usize,
    pub grid: GridSpec,
    pub data: FieldData,
    /// `(key, s_index)` pairs in input order; output follows the same order.
    pub order: Vec<(usize, usize)>,
}

/// Header values read from `# key=value` lines.
#[derive(Debug, Default)]
struct Header {
    dim: Option<usize>,
    grid: Option<GridSpec>,
}

fn merge<T: PartialEq + std::fmt::Debug>(name: &str, from_file: Option<T>, from_flags: Option<T>) -> Result<Option<T>> {
    match (from_file, from_flags) {
        (Some(a), Some(b)) if a != b => {
            Err(Error::Parse(format!("{name} in input header ({a:?}) conflicts with command line ({b:?})")))
        }
        (a, b) => Ok(a.or(b)),
    }
}

/// Parses a field file. `dim` and `grid` from the command line fill in
/// header values that are absent and must agree with those present.
pub fn parse_field(text: &str, dim: Option<usize>, grid: Option<GridSpec>) -> Result<FieldFile> {
    let mut header = Header::default();
    for comment in text.lines().filter_map(|l| l.trim().strip_prefix('#')) {
        if let Some((key, value)) = comment.trim().split_once('=') {
            match key.trim() {
                "dim" => header.dim = Some(parse_usize(value)?),
                "grid" => header.grid = Some(GridSpec::parse(value)?),
                _ => {}
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let columns = reader.headers().map_err(csv_error)?.iter().collect::<Vec<_>>().join(",");
    if columns != FACTORED_COLUMNS && columns != PLANAR_COLUMNS {
        return Err(Error::Parse(format!(
            "expected column header {FACTORED_COLUMNS:?} or {PLANAR_COLUMNS:?}, got {columns:?}"
        )));
    }
    let rows = reader
        .deserialize::<(usize, usize, f64, f64)>()
        .map(|row| row.map(|(k, s, re, im)| (k, s, Complex64::new(re, im))).map_err(csv_error))
        .collect::<Result<Vec<_>>>()?;
    let planar = columns == PLANAR_COLUMNS;
    let dim = match merge("dim", header.dim, dim)? {
        Some(dim) => dim,
        None if planar => 2,
        None => return Err(Error::Parse("factored fields need a dimension (# dim=N or --dim)".into())),
    };
    let spec = merge("grid", header.grid, grid)?.unwrap_or(GridSpec::DEFAULT);
    let grid = spec.grid(dim)?;
    let order: Vec<(usize, usize)> = rows.iter().map(|&(k, s, _)| (k, s)).collect();

    let data = if planar {
        if dim != 2 {
            return Err(Error::Parse(format!("angle_index columns require dim = 2, got {dim}")));
        }
        let n_phi = spec.n_phi();
        let mut values = vec![None; n_phi * grid.n];
        for &(a, s, v) in &rows {
            if a >= n_phi || s >= grid.n {
                return Err(Error::Parse(format!("sample ({a}, {s}) outside the {n_phi} x {} grid", grid.n)));
            }
            if values[a * grid.n + s].replace(v).is_some() {
                return Err(Error::Parse(format!("duplicate sample ({a}, {s})")));
            }
        }
        let values = complete(values, "angle_index")?;
        FieldData::Planar { field: GridField2D::new(n_phi, grid, values)? }
    } else {
        let mut by_degree: BTreeMap<usize, Vec<Option<Complex64>>> = BTreeMap::new();
        for &(m, s, v) in &rows {
            if s >= grid.n {
                return Err(Error::Parse(format!("s_index {s} outside a grid of {} points", grid.n)));
            }
            if dim == 1 && m > 1 {
                return Err(Error::Parse(format!("degree {m} does not exist in dimension 1")));
            }
            let slot = by_degree.entry(m).or_insert_with(|| vec![None; grid.n]);
            if slot[s].replace(v).is_some() {
                return Err(Error::Parse(format!("duplicate sample ({m}, {s})")));
            }
        }
        let components = by_degree
            .into_iter()
            .map(|(m, values)| FactoredField::abstract_slot(m, RadialSamples::new(grid, complete(values, "m")?)?))
            .collect::<Result<Vec<_>>>()?;
        FieldData::Factored { components }
    };
    Ok(FieldFile { dim, grid: spec, data, order })
}

pub fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn complete(values: Vec<Option<Complex64>>, key: &str) -> Result<Vec<Complex64>> {
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(Error::Parse(format!("{missing} samples missing; every ({key}, s_index) pair must be present")));
    }
    Ok(values.into_iter().map(Option::unwrap).collect())
}

impl FieldFile {
    pub fn with_data(&self, data: FieldData) -> Self {
        Self { dim: self.dim, grid: self.grid, data, order: self.order.clone() }
    }

    pub fn columns(&self) -> &'static str {
        match self.data {
            FieldData::Factored { .. } => FACTORED_COLUMNS,
            FieldData::Planar { .. } => PLANAR_COLUMNS,
        }
    }

    /// Sample values in `order`.
    pub fn ordered_values(&self) -> Vec<(usize, usize, Complex64)> {
        match &self.data {
            FieldData::Planar { field } => self.order.iter().map(|&(a, s)| (a, s, field.at(a, s))).collect(),
            FieldData::Factored { components } => {
                let lookup: BTreeMap<usize, &FactoredField> = components.iter().map(|c| (c.degree, c)).collect();
                self.order.iter().map(|&(m, s)| (m, s, lookup[&m].radial.values[s])).collect()
            }
        }
    }

    /// CSV with echoed configuration lines (`extra` follows `dim` and `grid`).
    pub fn to_csv(&self, extra: &[(&str, String)]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# dim={}", self.dim);
        let _ = writeln!(out, "# grid={}", self.grid.render());
        for (k, v) in extra {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "{}", self.columns());
        for (k, s, v) in self.ordered_values() {
            let _ = writeln!(out, "{k},{s},{},{}", fmt_f64(v.re), fmt_f64(v.im));
        }
        out
    }

    pub fn to_json(&self, extra: &[(&str, String)]) -> serde_json::Value {
        let mut config = serde_json::Map::new();
        config.insert("dim".into(), self.dim.into());
        config.insert("grid".into(), self.grid.render().into());
        for (k, v) in extra {
            config.insert((*k).into(), v.clone().into());
        }
        let rows: Vec<serde_json::Value> = self
            .ordered_values()
            .into_iter()
            .map(|(k, s, v)| serde_json::json!([k, s, fmt_f64(v.re), fmt_f64(v.im)]))
            .collect();
        serde_json::json!({
            "config": config,
            "columns": self.columns().split(',').collect::<Vec<_>>(),
            "rows": rows,
        })
    }
}
