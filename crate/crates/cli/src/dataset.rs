use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

/// Rectangular table of reals read from CSV; the target column is split off
/// by [`Dataset::split`].
#[derive(Debug, Clone)]
pub struct Dataset {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub source: PathBuf,
}

fn parse_cell(cell: &str) -> Option<f64> {
    let t = cell.trim();
    let v: f64 = match t {
        "inf" | "+inf" | "Inf" | "+Inf" => f64::INFINITY,
        "-inf" | "-Inf" => f64::NEG_INFINITY,
        _ => t.parse().ok()?,
    };
    (!v.is_nan()).then_some(v)
}

pub fn ingest_csv(path: &Path, has_header: bool) -> Result<Dataset> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut header: Vec<String> = if has_header {
        reader
            .headers()
            .with_context(|| format!("{}: unreadable header", path.display()))?
            .iter()
            .map(str::to_owned)
            .collect()
    } else {
        Vec::new()
    };
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let width = if header.is_empty() { rows.first().map_or(record.len(), Vec::len) } else { header.len() };
        if record.len() != width {
            bail!(
                "{}:{line}: expected {width} columns, found {}",
                path.display(),
                record.len()
            );
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                parse_cell(cell).ok_or_else(|| {
                    anyhow!("{}:{line}: column {} holds `{cell}`, not a number", path.display(), c + 1)
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    if header.is_empty() {
        header = (1..=rows[0].len()).map(|c| format!("c{c}")).collect();
    }
    Ok(Dataset { header, rows, source: path.to_path_buf() })
}

impl Dataset {
    pub fn width(&self) -> usize {
        self.header.len()
    }

    /// Column index of the target: the last column, a header name, or a
    /// 1-based column number.
    pub fn target_index(&self, target: Option<&str>) -> Result<usize> {
        match target {
            None => Ok(self.width() - 1),
            Some(name) => {
                if let Some(i) = self.header.iter().position(|h| h == name) {
                    return Ok(i);
                }
                match name.parse::<usize>() {
                    Ok(c) if (1..=self.width()).contains(&c) => Ok(c - 1),
                    _ => bail!("no column named `{name}` in {}", self.source.display()),
                }
            }
        }
    }

    /// `(features row-major, targets, feature names)`.
    pub fn split(&self, target: usize) -> (Vec<f64>, Vec<f64>, Vec<String>) {
        let mut coords = Vec::with_capacity(self.rows.len() * (self.width() - 1));
        let mut f = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            for (c, &v) in row.iter().enumerate() {
                if c == target {
                    f.push(v);
                } else {
                    coords.push(v);
                }
            }
        }
        let names = self
            .header
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != target)
            .map(|(_, h)| h.clone())
            .collect();
        (coords, f, names)
    }
}
