use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use tropfit::regression::Method;
use tropfit::{solver, Clodum, Matrix, Vector};

use crate::fit::parse_method;
use crate::report::{join, Report};
use crate::{SolveArgs, Usage};

fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    text.parse().with_context(|| path.display().to_string())
}

pub fn run(args: &SolveArgs) -> Result<String> {
    let method = parse_method(&args.method)?;
    let a = read_matrix(&args.matrix)?;
    let b_mat = read_matrix(&args.rhs)?;
    if b_mat.cols() != 1 && b_mat.rows() != 1 {
        return Err(tropfit::Error::DimensionMismatch {
            context: "right-hand side (expected a vector)",
            expected: 1,
            found: b_mat.cols(),
        }
        .into());
    }
    let b: Vector = b_mat.into_vector()?;
    if a.clodum() != b.clodum() {
        return Err(tropfit::Error::ClodumMismatch {
            left: a.clodum().to_string(),
            right: b.clodum().to_string(),
        }
        .into());
    }
    if method == Method::Mmae && a.clodum() != Clodum::MaxPlus {
        return Err(Usage(format!(
            "refusing mmae over {}: the l-infinity optimal shift exists for max-plus only",
            a.clodum()
        ))
        .into());
    }
    let r = match method {
        Method::Gle => solver::solve(&a, &b)?,
        Method::Mmae => solver::mmae_solution(&a, &b)?,
    };

    let mut rep = Report::new();
    rep.kv("command", "solve")
        .kv("clodum", a.clodum())
        .kv("rows", a.rows())
        .kv("cols", a.cols())
        .kv("method", method.name())
        .kv("x_hat", join(r.x_hat.entries()))
        .kv("residual_gle", join(&r.residual_gle))
        .kv("linf_gle", r.linf_gle())
        .kv("mu", r.mu);
    if let (Some(x), Some(res)) = (&r.x_tilde, &r.residual_mmae) {
        rep.kv("x_tilde", join(x.entries()))
            .kv("residual_mmae", join(res))
            .kv("linf_mmae", r.linf_mmae().unwrap_or(f64::NAN));
    }
    rep.kv("exact", r.exact).kv("warnings", r.warnings.len());
    for w in &r.warnings {
        rep.kv("warning", w);
    }
    Ok(rep.finish())
}
