use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use tropfit::regression::{
    fit_line, fit_max_affine, fit_plane, least_squares_line, FitProblem, FitReport, Method, SlopeSpec,
};
use tropfit::{Clodum, Dataset as Samples, Polynomial};

use crate::dataset::ingest_csv;
use crate::report::{join, Report};
use crate::{FitArgs, Usage};

enum SlopeArg {
    Default,
    Auto(usize),
    File(String, Vec<Vec<f64>>),
}

pub fn parse_method(s: &str) -> Result<Method> {
    s.parse().map_err(|_| Usage(format!("unknown method `{s}` (expected gle or mmae)")).into())
}

pub fn parse_clodum(s: &str) -> Result<Clodum<f64>> {
    s.parse().map_err(|e: tropfit::Error| Usage(format!("--clodum: {e}")).into())
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Usage(format!("--sweep-k expects <min>:<max>, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a == 0 || a > b {
        return Err(bad().into());
    }
    Ok((a, b))
}

/// One slope vector per line, entries separated by commas or whitespace.
fn read_slope_file(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read slope file {}", path.display()))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .with_context(|| format!("{}:{}: `{t}` is not a finite slope", path.display(), i + 1))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != dim {
            return Err(tropfit::Error::DimensionMismatch {
                context: "slope file row",
                expected: dim,
                found: row.len(),
            })
            .with_context(|| format!("{}:{}", path.display(), i + 1));
        }
        out.push(row);
    }
    if out.is_empty() {
        anyhow::bail!("{}: no slopes", path.display());
    }
    Ok(out)
}

fn parse_slopes(arg: Option<&str>, dim: usize) -> Result<SlopeArg> {
    match arg {
        None => Ok(SlopeArg::Default),
        Some(s) => match s.strip_prefix("auto:") {
            Some(k) => {
                let k: usize = k.parse().map_err(|_| Usage(format!("bad slope count in `{s}`")))?;
                Ok(SlopeArg::Auto(k))
            }
            None => Ok(SlopeArg::File(s.to_owned(), read_slope_file(Path::new(s), dim)?)),
        },
    }
}

pub fn run(args: &FitArgs) -> Result<String> {
    let clodum = parse_clodum(&args.clodum)?;
    let method = parse_method(&args.method)?;
    if method == Method::Mmae && clodum != Clodum::MaxPlus {
        return Err(Usage(format!("mmae fitting needs max-plus, not {clodum}; use --method gle")).into());
    }
    if args.grid < 2 {
        return Err(Usage("--grid needs at least 2 points".into()).into());
    }
    let data = ingest_csv(&args.data, !args.no_header)?;
    if data.width() < 2 {
        return Err(Usage(format!("{} needs at least one feature and one target column", args.data.display())).into());
    }
    let target = data.target_index(args.target.as_deref())?;
    let (coords, targets, features) = data.split(target);
    let dim = features.len();
    let samples = Samples::new(dim, coords, targets)?;

    let mut rep = Report::new();
    rep.kv("command", "fit")
        .kv("data", args.data.display())
        .kv("samples", samples.len())
        .kv("features", features.join(","))
        .kv("target", &data.header[target])
        .kv("clodum", clodum)
        .kv("method", method.name());

    if let Some(range) = &args.sweep_k {
        let (lo, hi) = parse_range(range)?;
        if args.slopes.as_deref().is_some_and(|s| !s.starts_with("auto:")) {
            return Err(Usage("--sweep-k uses automatic slopes; drop --slopes FILE".into()).into());
        }
        return sweep(args, rep, samples, clodum, method, lo, hi);
    }

    let slopes = parse_slopes(args.slopes.as_deref(), dim)?;
    let fitted = match &slopes {
        SlopeArg::Default => match dim {
            1 => fit_line(&samples, clodum, method)?,
            2 => fit_plane(&samples, clodum, method)?,
            _ => {
                return Err(Usage(format!("{dim} features: give --slopes auto:K or a slope file")).into());
            }
        },
        SlopeArg::Auto(k) => {
            let p = FitProblem::new(samples.clone(), clodum, SlopeSpec::Auto { k: *k, seed: args.seed })?;
            fit_max_affine(&p, method)?
        }
        SlopeArg::File(_, s) => {
            let p = FitProblem::new(samples.clone(), clodum, SlopeSpec::Given(s.clone()))?;
            fit_max_affine(&p, method)?
        }
    };
    let slope_desc = match &slopes {
        SlopeArg::Default if dim == 1 => "line".to_owned(),
        SlopeArg::Default => "plane".to_owned(),
        SlopeArg::Auto(k) => format!("auto:{k}"),
        SlopeArg::File(p, _) => p.clone(),
    };
    rep.kv("slopes", slope_desc).kv("slope_source", fitted.slope_source.name());
    if matches!(slopes, SlopeArg::Auto(_)) && dim >= 2 {
        rep.kv("seed", args.seed);
    }
    describe(&mut rep, &fitted);
    if dim == 1 && clodum == Clodum::MaxPlus {
        let lse = least_squares_line(&samples)?;
        rep.kv(
            "lse_line",
            format_args!(
                "slope={} intercept={} rms={} linf={}",
                lse.slope, lse.intercept, lse.rms_error, lse.linf_error
            ),
        );
    }
    if dim > 2 {
        rep.kv("curve", "not written for more than two features");
    }
    let text = rep.finish();
    if let Some(dir) = &args.out {
        write_outputs(dir, &text, &fitted, &samples, args.grid)?;
    }
    Ok(text)
}

fn describe(rep: &mut Report, r: &FitReport<f64>) {
    rep.kv("terms", r.model.rank());
    for (k, t) in r.model.terms().iter().enumerate() {
        rep.kv(&format!("term[{}]", k + 1), format_args!("slope=({}) intercept={}", join(&t.slope), t.intercept));
    }
    if let Some(mu) = r.mu {
        rep.kv("mu", mu);
    }
    rep.kv("rms_error", r.rms_error).kv("linf_error", r.linf_error);
    rep.kv("warnings", r.warnings.len());
    for w in &r.warnings {
        rep.kv("warning", w);
    }
}

fn sweep(
    args: &FitArgs,
    mut rep: Report,
    samples: Samples,
    clodum: Clodum<f64>,
    method: Method,
    lo: usize,
    hi: usize,
) -> Result<String> {
    rep.kv("sweep_k", format_args!("{lo}:{hi}"));
    if samples.dim() >= 2 {
        rep.kv("seed", args.seed);
    }
    let mut table = String::from("# k rms_error linf_error\n");
    for k in lo..=hi {
        let p = FitProblem::new(samples.clone(), clodum, SlopeSpec::Auto { k, seed: args.seed })?;
        let r = fit_max_affine(&p, method).with_context(|| format!("K = {k}"))?;
        rep.kv(&format!("k[{k}]"), format_args!("rms={} linf={}", r.rms_error, r.linf_error));
        writeln!(table, "{k} {} {}", r.rms_error, r.linf_error).unwrap();
    }
    let text = rep.finish();
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        fs::write(dir.join("report.txt"), &text)?;
        fs::write(dir.join("sweep.dat"), table)?;
    }
    Ok(text)
}

fn bounds(samples: &Samples, axis: usize) -> (f64, f64) {
    (0..samples.len())
        .map(|i| samples.point(i)[axis])
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Plot columns `x [y] value`; 2D grids put a blank line between rows.
pub fn curve_table(model: &Polynomial, samples: &Samples, grid: usize) -> Result<Option<String>> {
    let mut out = String::new();
    match samples.dim() {
        1 => {
            let (lo, hi) = bounds(samples, 0);
            writeln!(out, "# x value").unwrap();
            for x in axis(lo, hi, grid) {
                writeln!(out, "{x} {}", model.eval(&[x])?).unwrap();
            }
        }
        2 => {
            let (xl, xh) = bounds(samples, 0);
            let (yl, yh) = bounds(samples, 1);
            writeln!(out, "# x y value").unwrap();
            let ys = axis(yl, yh, grid);
            for x in axis(xl, xh, grid) {
                for &y in &ys {
                    writeln!(out, "{x} {y} {}", model.eval(&[x, y])?).unwrap();
                }
                out.push('\n');
            }
        }
        _ => return Ok(None),
    }
    Ok(Some(out))
}

fn write_outputs(dir: &Path, report: &str, r: &FitReport<f64>, samples: &Samples, grid: usize) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    fs::write(dir.join("report.txt"), report)?;
    fs::write(dir.join("model.troppoly"), r.model.to_text())?;
    if let Some(curve) = curve_table(&r.model, samples, grid)? {
        fs::write(dir.join("curve.dat"), curve)?;
    }
    let mut res = String::new();
    let names: Vec<String> = (1..=samples.dim()).map(|j| format!("x{j}")).collect();
    writeln!(res, "# {} target prediction residual", names.join(" ")).unwrap();
    for (i, &e) in r.residuals.iter().enumerate() {
        let f = samples.target(i);
        writeln!(res, "{} {f} {} {e}", join(samples.point(i)), r.model.eval(samples.point(i))?).unwrap();
    }
    fs::write(dir.join("residuals.dat"), res)?;
    Ok(())
}
