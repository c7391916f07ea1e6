use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use tropfit::Polynomial;

use crate::dataset::ingest_csv;
use crate::report::join;
use crate::EvalArgs;

pub fn read_poly(path: &Path) -> Result<Polynomial> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    text.parse().with_context(|| path.display().to_string())
}

/// One output row per data row: coordinates, model value, variety flag, and
/// the residual when the file carries a target column.
pub fn run(args: &EvalArgs) -> Result<String> {
    let p = read_poly(&args.model)?;
    let n = p.dim();
    let data = ingest_csv(&args.data, !args.no_header)?;
    let with_target = if data.width() == n + 1 {
        true
    } else if data.width() == n && args.target.is_none() {
        false
    } else {
        return Err(tropfit::Error::DimensionMismatch {
            context: "eval data columns",
            expected: n,
            found: data.width(),
        }
        .into());
    };
    let mut out = String::new();
    let names: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    write!(out, "# {} value variety", names.join(" ")).unwrap();
    out.push_str(if with_target { " target residual\n" } else { "\n" });
    let target = if with_target { Some(data.target_index(args.target.as_deref())?) } else { None };
    for row in &data.rows {
        let (x, f): (Vec<f64>, Option<f64>) = match target {
            Some(t) => (
                row.iter().enumerate().filter(|&(c, _)| c != t).map(|(_, &v)| v).collect(),
                Some(row[t]),
            ),
            None => (row.clone(), None),
        };
        let v = p.eval(&x)?;
        let on = p.on_variety(&x, args.tol)?;
        write!(out, "{} {v} {}", join(&x), u8::from(on)).unwrap();
        if let Some(f) = f {
            write!(out, " {f} {}", f - v).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}
