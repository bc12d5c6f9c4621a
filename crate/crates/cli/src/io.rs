use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use ndarray::Array2;
use netclass::features::FeatureRow;
use netclass::features::{read_feature_csv, COUNT_COLUMNS, FEATURE_CSV_HEADER, FEATURE_NAMES};
use tempfile::NamedTempFile;

use crate::failure::{invalid, CmdResult, Context};

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CmdResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let ctx = || format!("writing {}", path.display());
    let mut tmp = NamedTempFile::new_in(dir).internal_ctx(ctx())?;
    tmp.write_all(bytes).internal_ctx(ctx())?;
    tmp.as_file().sync_all().internal_ctx(ctx())?;
    tmp.persist(path).map_err(|e| e.error).internal_ctx(ctx())?;
    Ok(())
}

pub fn create_dir(dir: &Path) -> CmdResult<()> {
    fs::create_dir_all(dir).internal_ctx(format!("creating {}", dir.display()))
}

/// One manifest row. `path` is resolved against the manifest's directory.
#[derive(Clone, Debug)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub name: String,
    pub category: Option<String>,
}

/// Reads a manifest CSV whose first three columns are `path,name,category`.
/// Further columns are allowed and ignored.
pub fn read_manifest(path: &Path) -> CmdResult<Vec<ManifestEntry>> {
    let ctx = || format!("manifest {}", path.display());
    let file = fs::File::open(path).invalid_ctx(ctx())?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let header = reader.headers().invalid_ctx(ctx())?.clone();
    if header.len() < 3 || &header[0] != "path" || &header[1] != "name" || &header[2] != "category"
    {
        return Err(invalid(anyhow!(
            "{}: header must start with path,name,category, found {:?}",
            ctx(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let base = path.parent().unwrap_or(Path::new(""));
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.invalid_ctx(ctx())?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() < 3 {
            return Err(invalid(anyhow!(
                "{}: line {line}: expected at least 3 fields",
                ctx()
            )));
        }
        let (p, name, category) = (&record[0], &record[1], &record[2]);
        if p.is_empty() || name.is_empty() {
            return Err(invalid(anyhow!(
                "{}: line {line}: empty path or name",
                ctx()
            )));
        }
        if !seen.insert(name.to_string()) {
            return Err(invalid(anyhow!(
                "{}: line {line}: duplicate name {name:?}",
                ctx()
            )));
        }
        entries.push(ManifestEntry {
            path: base.join(p),
            name: name.to_string(),
            category: (!category.is_empty()).then(|| category.to_string()),
        });
    }
    Ok(entries)
}

pub fn read_features(path: &Path) -> CmdResult<Vec<FeatureRow>> {
    let file = fs::File::open(path).invalid_ctx(format!("opening {}", path.display()))?;
    read_feature_csv(file).invalid_ctx(format!("feature csv {}", path.display()))
}

/// Named numeric rows: either a feature CSV or any CSV with header
/// `name,category,<column>...` and numeric cells after the first two.
#[derive(Clone, Debug)]
pub struct Table {
    pub names: Vec<String>,
    pub categories: Vec<Option<String>>,
    pub columns: Vec<String>,
    pub x: Array2<f64>,
    /// True for feature CSVs, whose count columns take `log10(1 + x)`
    /// before z-scoring.
    pub is_features: bool,
}

impl Table {
    pub fn log_columns(&self) -> Vec<bool> {
        if self.is_features {
            COUNT_COLUMNS.to_vec()
        } else {
            vec![false; self.columns.len()]
        }
    }
}

pub fn read_table(path: &Path) -> CmdResult<Table> {
    let ctx = || format!("table {}", path.display());
    let file = fs::File::open(path).invalid_ctx(ctx())?;
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .invalid_ctx(ctx())?;
    if first.trim_end_matches(['\r', '\n']) == FEATURE_CSV_HEADER {
        let rows = read_features(path)?;
        let mut x = Array2::zeros((rows.len(), FEATURE_NAMES.len()));
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.features.to_array().into_iter().enumerate() {
                x[[i, j]] = v;
            }
        }
        return Ok(Table {
            names: rows.iter().map(|r| r.name.clone()).collect(),
            categories: rows.iter().map(|r| r.category.clone()).collect(),
            columns: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            x,
            is_features: true,
        });
    }

    let file = fs::File::open(path).invalid_ctx(ctx())?;
    let mut reader = csv::ReaderBuilder::new().from_reader(file);
    let header = reader.headers().invalid_ctx(ctx())?.clone();
    if header.len() < 3 || &header[0] != "name" || &header[1] != "category" {
        return Err(invalid(anyhow!(
            "{}: expected the feature csv header or name,category,<columns>...",
            ctx()
        )));
    }
    let columns: Vec<String> = header.iter().skip(2).map(String::from).collect();
    let (mut names, mut categories, mut values) = (Vec::new(), Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.invalid_ctx(ctx())?;
        let line = record.position().map_or(0, |p| p.line());
        names.push(record[0].to_string());
        categories.push((!record[1].is_empty()).then(|| record[1].to_string()));
        for cell in record.iter().skip(2) {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(invalid(anyhow!(
                        "{}: line {line}: invalid number {cell:?}",
                        ctx()
                    )))
                }
            }
        }
    }
    let x = Array2::from_shape_vec((names.len(), columns.len()), values).invalid_ctx(ctx())?;
    Ok(Table {
        names,
        categories,
        columns,
        x,
        is_features: false,
    })
}

/// Builds CSV text in memory with `\n` line endings.
pub fn csv_bytes(
    write: impl FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
) -> CmdResult<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        write(&mut w).internal_ctx("formatting csv")?;
        w.flush().internal_ctx("formatting csv")?;
    }
    Ok(buf)
}
