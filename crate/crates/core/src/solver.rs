//! Optimal approximate solutions of `A ⊞ x = b`.
//!
//! The greatest subsolution `x̂ = ε(b)` is the largest `x` with `A ⊞ x ≤ b`,
//! and among all subsolutions it minimizes every `ℓ_p` residual. Over
//! max-plus, shifting it up by half its worst residual gives `x̃`, the unique
//! unconstrained minimizer of the `ℓ∞` error. Both cost `O(mn)`.

use std::fmt;

use crate::clodum::Clodum;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::wlattice::{TropicalMatrix, TropicalVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveWarning {
    /// Column `j` of `A` is entirely `⊥`, so `x̂_j = ⊤`.
    UnboundedColumn(usize),
    /// Row `i` is `⊥` under every `x`; it carries no finite residual.
    UnreachableRow(usize),
    /// `b_i` is infinite and was left out of `μ`.
    InfiniteTarget(usize),
}

impl fmt::Display for SolveWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveWarning::UnboundedColumn(j) => write!(f, "column {j} is entirely bottom; x_hat[{j}] is top"),
            SolveWarning::UnreachableRow(i) => write!(f, "row {i} cannot be reached; excluded from mu"),
            SolveWarning::InfiniteTarget(i) => write!(f, "target b[{i}] is infinite; excluded from mu"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<F> {
    /// Greatest subsolution.
    pub x_hat: TropicalVector<F>,
    /// Minimum max-absolute-error solution, when the clodum supports it.
    pub x_tilde: Option<TropicalVector<F>>,
    /// Half the `ℓ∞` residual of `x̂` over the finite rows.
    pub mu: F,
    /// `b − A ⊞ x̂`.
    pub residual_gle: Vec<F>,
    /// `b − A ⊞ x̃`.
    pub residual_mmae: Option<Vec<F>>,
    /// `A ⊞ x̂ = b`.
    pub exact: bool,
    /// Max-times systems solved through the log isomorphism report `mu` and
    /// the MMAE residuals in the log domain.
    pub log_domain: bool,
    pub warnings: Vec<SolveWarning>,
}

impl<F: Real> SolveResult<F> {
    /// `‖b − A ⊞ x̂‖∞` restricted to finite rows.
    pub fn linf_gle(&self) -> F {
        linf_finite(&self.residual_gle)
    }

    pub fn linf_mmae(&self) -> Option<F> {
        self.residual_mmae.as_deref().map(linf_finite)
    }
}

fn linf_finite<F: Real>(r: &[F]) -> F {
    r.iter()
        .filter(|v| v.is_finite())
        .fold(F::zero(), |acc, v| acc.max(v.abs()))
}

/// `x̂ = A* ⊟′ b`, computed through scalar residuals for any clodum.
pub fn greatest_subsolution<F: Real>(a: &TropicalMatrix<F>, b: &TropicalVector<F>) -> Result<TropicalVector<F>> {
    a.matvec_erode(b)
}

/// Target minus prediction, with infinite rows mapped to `0` when they match
/// and `+∞` when they do not.
fn residuals<F: Real>(b: &[F], predicted: &[F]) -> Vec<F> {
    b.iter()
        .zip(predicted)
        .map(|(&bi, &pi)| {
            if bi.is_finite() && pi.is_finite() {
                bi - pi
            } else if bi == pi {
                F::zero()
            } else {
                F::infinity()
            }
        })
        .collect()
}

fn diagnose<F: Real>(a: &TropicalMatrix<F>, b: &TropicalVector<F>, predicted: &[F]) -> (F, Vec<SolveWarning>) {
    let k = a.clodum();
    let mut warnings = Vec::new();
    for j in 0..a.cols() {
        if a.column(j).all(|v| v == k.bottom()) {
            warnings.push(SolveWarning::UnboundedColumn(j));
        }
    }
    let mut worst = F::zero();
    for (i, (&bi, &pi)) in b.entries().iter().zip(predicted).enumerate() {
        if !bi.is_finite() {
            warnings.push(SolveWarning::InfiniteTarget(i));
        } else if !pi.is_finite() {
            warnings.push(SolveWarning::UnreachableRow(i));
        } else {
            worst = worst.max(bi - pi);
        }
    }
    (worst / (F::one() + F::one()), warnings)
}

/// Greatest subsolution plus diagnostics for any clodum; over max-plus the
/// MMAE solution is filled in as well.
pub fn solve<F: Real>(a: &TropicalMatrix<F>, b: &TropicalVector<F>) -> Result<SolveResult<F>> {
    let x_hat = greatest_subsolution(a, b)?;
    let predicted = a.matvec_dilate(&x_hat)?;
    let (mu, warnings) = diagnose(a, b, predicted.entries());
    let residual_gle = residuals(b.entries(), predicted.entries());
    let exact = predicted == *b;
    let (x_tilde, residual_mmae) = if a.clodum() == Clodum::MaxPlus {
        let x_tilde = if exact { x_hat.clone() } else { x_hat.scale(mu)? };
        let r = residuals(b.entries(), a.matvec_dilate(&x_tilde)?.entries());
        (Some(x_tilde), Some(r))
    } else {
        (None, None)
    };
    Ok(SolveResult {
        x_hat,
        x_tilde,
        mu,
        residual_gle,
        residual_mmae,
        exact,
        log_domain: false,
        warnings,
    })
}

/// Unconstrained `ℓ∞`-optimal solution `x̃ = μ + x̂`, `2μ = ‖A ⊞ x̂ − b‖∞`.
///
/// Optimality holds over max-plus only; other cloda are rejected.
pub fn mmae_solution<F: Real>(a: &TropicalMatrix<F>, b: &TropicalVector<F>) -> Result<SolveResult<F>> {
    if a.clodum() != Clodum::MaxPlus {
        return Err(a.clodum().unsupported("MMAE solution"));
    }
    solve(a, b)
}

/// Max-times MMAE through `log`: solves the max-plus system on logarithms and
/// maps `x̃` back with `exp`. The optimized error is `ℓ∞` in the log domain.
pub fn mmae_solution_log_domain<F: Real>(a: &TropicalMatrix<F>, b: &TropicalVector<F>) -> Result<SolveResult<F>> {
    if a.clodum() != Clodum::MaxTimes {
        return Err(a.clodum().unsupported("log-domain MMAE solution"));
    }
    let log_a = TropicalMatrix::new(Clodum::MaxPlus, a.rows(), a.cols(), a.data().iter().map(|v| v.ln()).collect())?;
    let log_b = TropicalVector::new(Clodum::MaxPlus, b.entries().iter().map(|v| v.ln()).collect())?;
    let in_log = solve(&log_a, &log_b)?;
    let exp_vec = |v: &TropicalVector<F>| TropicalVector::new(Clodum::MaxTimes, v.entries().iter().map(|x| x.exp()).collect());
    let x_hat = greatest_subsolution(a, b)?;
    let predicted = a.matvec_dilate(&x_hat)?;
    let x_tilde = in_log.x_tilde.as_ref().map(exp_vec).transpose()?;
    Ok(SolveResult {
        residual_gle: residuals(b.entries(), predicted.entries()),
        exact: predicted == *b,
        x_hat,
        x_tilde,
        mu: in_log.mu,
        residual_mmae: in_log.residual_mmae,
        log_domain: true,
        warnings: in_log.warnings,
    })
}

/// `P(b) = A ⊞ x̂`: the largest element of the column span of `A` below `b`.
pub fn canonical_projection<F: Real>(a: &TropicalMatrix<F>, b: &TropicalVector<F>) -> Result<TropicalVector<F>> {
    a.matvec_dilate(&greatest_subsolution(a, b)?)
}

/// Hilbert projective (range) semimetric on max-plus vectors.
///
/// For finite vectors this is `max_i(x_i − y_i) − min_i(x_i − y_i)`; in
/// general `−[(x∖y) + (y∖x)]` with `x∖y = max{a : x + a ≤ y}`.
pub fn hilbert_metric<F: Real>(x: &TropicalVector<F>, y: &TropicalVector<F>) -> Result<F> {
    if x.clodum() != Clodum::MaxPlus {
        return Err(x.clodum().unsupported("Hilbert projective metric"));
    }
    x.clodum().ensure_same(&y.clodum())?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            context: "Hilbert metric",
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Ok(F::zero());
    }
    let (xs, ys) = (x.entries(), y.entries());
    if xs.iter().chain(ys).all(|v| v.is_finite()) {
        let diffs = xs.iter().zip(ys).map(|(&a, &b)| a - b);
        let (lo, hi) = diffs.fold((F::infinity(), F::neg_infinity()), |(lo, hi), d| (lo.min(d), hi.max(d)));
        return Ok(hi - lo);
    }
    let k = Clodum::MaxPlus;
    let quotient = |p: &[F], q: &[F]| k.inf_all(p.iter().zip(q).map(|(&pi, &qi)| k.adjoint_erosion(pi, qi)));
    let d = -k.mul(quotient(xs, ys), quotient(ys, xs));
    Ok(d.max(F::zero()))
}
