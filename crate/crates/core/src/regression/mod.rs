//! Max-affine regression: fit tropical lines, planes and general max-of-affine
//! models to data, either from below (GLE) or with minimum maximum absolute
//! error (MMAE).
//!
//! With the slopes fixed, every intercept has a closed form
//! `b_k = ⋀_i ψ(x_i^{a_k}, f_i)` where `ψ` is the scalar adjoint erosion. The
//! intercept solve is a single pass over the data per term, `O(Kmn)` overall.

mod slopes;

use std::fmt;

pub use slopes::{forward_derivatives, jenks, kmeans, local_gradients};

use crate::clodum::Clodum;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::tropgeom::{Orientation, Term, TropicalPolynomial};

/// `m` samples `(x_i, f_i)` with `x_i ∈ ℝⁿ`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples<F> {
    dim: usize,
    coords: Vec<F>,
    targets: Vec<F>,
}

impl<F: Real> Samples<F> {
    pub fn new(dim: usize, coords: Vec<F>, targets: Vec<F>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("samples need at least one feature".into()));
        }
        if targets.is_empty() {
            return Err(Error::InsufficientData("no samples".into()));
        }
        if coords.len() != dim * targets.len() {
            return Err(Error::DimensionMismatch {
                context: "sample coordinates",
                expected: dim * targets.len(),
                found: coords.len(),
            });
        }
        if targets.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidParameter("targets must be finite".into()));
        }
        if coords.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("coordinates must not be NaN".into()));
        }
        Ok(Self { dim, coords, targets })
    }

    pub fn from_points(points: &[Vec<F>], targets: Vec<F>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                context: "sample point",
                expected: dim,
                found: bad.len(),
            });
        }
        Self::new(dim, points.concat(), targets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn point(&self, i: usize) -> &[F] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn target(&self, i: usize) -> F {
        self.targets[i]
    }

    pub fn targets(&self) -> &[F] {
        &self.targets
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    fn check_carrier(&self, clodum: &Clodum<F>) -> Result<()> {
        for &f in &self.targets {
            clodum.check(f)?;
        }
        for &v in &self.coords {
            clodum.check(v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gle,
    Mmae,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Gle => "gle",
            Method::Mmae => "mmae",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gle" => Ok(Method::Gle),
            "mmae" => Ok(Method::Mmae),
            _ => Err(Error::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SlopeSpec<F> {
    Given(Vec<Vec<F>>),
    /// `k` slopes estimated from the data; `seed` drives k-means in `n ≥ 2`.
    Auto { k: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeSource {
    Given,
    Jenks,
    KMeans,
}

impl SlopeSource {
    pub fn name(self) -> &'static str {
        match self {
            SlopeSource::Given => "given",
            SlopeSource::Jenks => "jenks",
            SlopeSource::KMeans => "kmeans",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitWarning {
    /// The intercept of term `k` came out as the inert value.
    InertTerm(usize),
    /// No gradient could be estimated at sample `i`.
    SkippedGradient(usize),
}

impl fmt::Display for FitWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitWarning::InertTerm(k) => write!(f, "term {k} has an inert intercept and never contributes"),
            FitWarning::SkippedGradient(i) => {
                write!(f, "sample {i} has a rank-deficient neighbourhood; gradient skipped")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem<F> {
    pub samples: Samples<F>,
    pub clodum: Clodum<F>,
    pub slopes: SlopeSpec<F>,
}

impl<F: Real> FitProblem<F> {
    pub fn new(samples: Samples<F>, clodum: Clodum<F>, slopes: SlopeSpec<F>) -> Result<Self> {
        match &slopes {
            SlopeSpec::Auto { k, .. } => {
                if *k == 0 {
                    return Err(Error::InvalidParameter("slope count must be positive".into()));
                }
                if *k > samples.len() {
                    return Err(Error::InsufficientData(format!(
                        "{k} slopes requested from {} samples",
                        samples.len()
                    )));
                }
            }
            SlopeSpec::Given(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidParameter("empty slope list".into()));
                }
            }
        }
        Ok(Self { samples, clodum, slopes })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport<F> {
    pub model: TropicalPolynomial<F>,
    pub method: Method,
    pub rms_error: F,
    pub linf_error: F,
    /// `f_i − p(x_i)` per sample.
    pub residuals: Vec<F>,
    pub slope_source: SlopeSource,
    /// The MMAE shift; present for MMAE fits.
    pub mu: Option<F>,
    pub warnings: Vec<FitWarning>,
}

/// Optimal intercepts `b_k = ⋀_i ψ(x_i^{a_k}, f_i)` of the terms whose
/// slopes are given, i.e. the greatest subsolution of `X ⊛ b ≤ f`.
pub fn solve_intercepts<F: Real>(clodum: Clodum<F>, slopes: &[Vec<F>], samples: &Samples<F>) -> Result<Vec<F>> {
    let template = template(clodum, slopes, samples.dim())?;
    Ok(gle_intercepts(&template, samples))
}

fn template<F: Real>(clodum: Clodum<F>, slopes: &[Vec<F>], dim: usize) -> Result<TropicalPolynomial<F>> {
    let terms = slopes
        .iter()
        .map(|a| Term::new(a.clone(), clodum.unit()))
        .collect();
    TropicalPolynomial::new(clodum, Orientation::Max, dim, terms)
}

fn gle_intercepts<F: Real>(template: &TropicalPolynomial<F>, samples: &Samples<F>) -> Vec<F> {
    let c = template.clodum();
    template
        .terms()
        .iter()
        .map(|t| {
            (0..samples.len()).fold(c.top(), |acc, i| {
                let x = template.monomial(&t.slope, samples.point(i));
                c.inf(acc, c.adjoint_erosion(x, samples.target(i)))
            })
        })
        .collect()
}

fn residual_stats<F: Real>(model: &TropicalPolynomial<F>, samples: &Samples<F>) -> Result<(Vec<F>, F, F)> {
    let mut residuals = Vec::with_capacity(samples.len());
    let mut sq = F::zero();
    let mut linf = F::zero();
    for i in 0..samples.len() {
        let r = samples.target(i) - model.eval(samples.point(i))?;
        sq = sq + r * r;
        linf = linf.max(r.abs());
        residuals.push(r);
    }
    let rms = (sq / F::from_count(samples.len())).sqrt();
    Ok((residuals, rms, linf))
}

/// Fits intercepts for fixed slopes.
pub fn fit_with_slopes<F: Real>(
    samples: &Samples<F>,
    clodum: Clodum<F>,
    slopes: &[Vec<F>],
    method: Method,
    slope_source: SlopeSource,
) -> Result<FitReport<F>> {
    if method == Method::Mmae && clodum != Clodum::MaxPlus {
        return Err(clodum.unsupported("MMAE fitting"));
    }
    samples.check_carrier(&clodum)?;
    let template = template(clodum, slopes, samples.dim())?;
    let b_hat = gle_intercepts(&template, samples);
    let gle_terms: Vec<Term<F>> = template
        .terms()
        .iter()
        .zip(&b_hat)
        .map(|(t, &b)| Term::new(t.slope.clone(), b))
        .collect();
    let gle = TropicalPolynomial::new(clodum, Orientation::Max, samples.dim(), gle_terms)?;
    let warnings = (0..gle.rank())
        .filter(|&k| gle.is_inert(k))
        .map(FitWarning::InertTerm)
        .collect();
    let (model, mu) = match method {
        Method::Gle => (gle, None),
        Method::Mmae => {
            let (res, _, _) = residual_stats(&gle, samples)?;
            let two_mu = res.iter().fold(F::zero(), |acc, &r| acc.max(r));
            let mu = two_mu / F::lit(2.0);
            let shifted = gle
                .terms()
                .iter()
                .map(|t| Term::new(t.slope.clone(), clodum.mul(t.intercept, mu)))
                .collect();
            (TropicalPolynomial::new(clodum, Orientation::Max, samples.dim(), shifted)?, Some(mu))
        }
    };
    let (residuals, rms_error, linf_error) = residual_stats(&model, samples)?;
    Ok(FitReport {
        model,
        method,
        rms_error,
        linf_error,
        residuals,
        slope_source,
        mu,
        warnings,
    })
}

/// Tropical line `max(a ⊛ x, b)`.
pub fn fit_line<F: Real>(samples: &Samples<F>, clodum: Clodum<F>, method: Method) -> Result<FitReport<F>> {
    if samples.dim() != 1 {
        return Err(Error::DimensionMismatch {
            context: "line fit",
            expected: 1,
            found: samples.dim(),
        });
    }
    let slopes = vec![vec![F::one()], vec![F::zero()]];
    fit_with_slopes(samples, clodum, &slopes, method, SlopeSource::Given)
}

/// Tropical plane `max(a ⊛ x, b ⊛ y, c)`.
pub fn fit_plane<F: Real>(samples: &Samples<F>, clodum: Clodum<F>, method: Method) -> Result<FitReport<F>> {
    if samples.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: "plane fit",
            expected: 2,
            found: samples.dim(),
        });
    }
    let (o, z) = (F::one(), F::zero());
    let slopes = vec![vec![o, z], vec![z, o], vec![z, z]];
    fit_with_slopes(samples, clodum, &slopes, method, SlopeSource::Given)
}

/// `k` slopes for 1D data: Jenks breaks over forward-difference derivatives.
pub fn estimate_slopes_1d<F: Real>(samples: &Samples<F>, k: usize) -> Result<Vec<F>> {
    let d = forward_derivatives(samples)?;
    jenks(&d, k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeEstimate<F> {
    pub slopes: Vec<Vec<F>>,
    /// Samples without a usable gradient.
    pub skipped: Vec<usize>,
}

/// `k` slope vectors for `n ≥ 2` data: k-means centroids of local gradients.
pub fn estimate_slopes_nd<F: Real>(samples: &Samples<F>, k: usize, seed: u64) -> Result<SlopeEstimate<F>> {
    if samples.dim() < 2 {
        return Err(Error::DimensionMismatch {
            context: "gradient slope estimation",
            expected: 2,
            found: samples.dim(),
        });
    }
    if samples.len() < k + samples.dim() {
        return Err(Error::InsufficientData(format!(
            "{k} slopes in {} dimensions need at least {} samples, found {}",
            samples.dim(),
            k + samples.dim(),
            samples.len()
        )));
    }
    let (grads, skipped) = local_gradients(samples);
    if grads.is_empty() {
        return Err(Error::Degenerate("every neighbourhood is rank deficient".into()));
    }
    let slopes = kmeans(&grads, k, seed)?;
    Ok(SlopeEstimate { slopes, skipped })
}

/// General max-affine fit with given or estimated slopes.
pub fn fit_max_affine<F: Real>(problem: &FitProblem<F>, method: Method) -> Result<FitReport<F>> {
    let samples = &problem.samples;
    let (slopes, source, skipped) = match &problem.slopes {
        SlopeSpec::Given(s) => (s.clone(), SlopeSource::Given, Vec::new()),
        SlopeSpec::Auto { k, seed } => {
            if problem.clodum != Clodum::MaxPlus {
                return Err(problem.clodum.unsupported("automatic slope estimation"));
            }
            if samples.dim() == 1 {
                let s = estimate_slopes_1d(samples, *k)?;
                (s.into_iter().map(|a| vec![a]).collect(), SlopeSource::Jenks, Vec::new())
            } else {
                let est = estimate_slopes_nd(samples, *k, *seed)?;
                (est.slopes, SlopeSource::KMeans, est.skipped)
            }
        }
    };
    let mut report = fit_with_slopes(samples, problem.clodum, &slopes, method, source)?;
    report
        .warnings
        .extend(skipped.into_iter().map(FitWarning::SkippedGradient));
    Ok(report)
}

/// Ordinary least-squares line `y = a x + b`, for comparison output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanLine<F> {
    pub slope: F,
    pub intercept: F,
    pub rms_error: F,
    pub linf_error: F,
}

pub fn least_squares_line<F: Real>(samples: &Samples<F>) -> Result<EuclideanLine<F>> {
    if samples.dim() != 1 {
        return Err(Error::DimensionMismatch {
            context: "least-squares line",
            expected: 1,
            found: samples.dim(),
        });
    }
    let m = F::from_count(samples.len());
    let (mut sx, mut sf) = (F::zero(), F::zero());
    for i in 0..samples.len() {
        sx = sx + samples.point(i)[0];
        sf = sf + samples.target(i);
    }
    let (mx, mf) = (sx / m, sf / m);
    let (mut sxx, mut sxf) = (F::zero(), F::zero());
    for i in 0..samples.len() {
        let dx = samples.point(i)[0] - mx;
        sxx = sxx + dx * dx;
        sxf = sxf + dx * (samples.target(i) - mf);
    }
    if sxx == F::zero() {
        return Err(Error::Degenerate("all abscissae coincide".into()));
    }
    let slope = sxf / sxx;
    let intercept = mf - slope * mx;
    let (mut sq, mut linf) = (F::zero(), F::zero());
    for i in 0..samples.len() {
        let r = samples.target(i) - (slope * samples.point(i)[0] + intercept);
        sq = sq + r * r;
        linf = linf.max(r.abs());
    }
    Ok(EuclideanLine {
        slope,
        intercept,
        rms_error: (sq / m).sqrt(),
        linf_error: linf,
    })
}
