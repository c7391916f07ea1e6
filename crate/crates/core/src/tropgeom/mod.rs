//! Tropical polynomials, their varieties and Newton polytopes, and tropical
//! halfspaces.
//!
//! A polynomial is a max (or min) of terms `b_k ⊛ x^{a_k}`. Over max-plus the
//! monomial `x^{a}` is the inner product `a·x`; over max-times it is
//! `∏ x_j^{a_j}`. The lattice-only cloda (max-min, max-softmin) have no
//! powers, so their slopes are restricted to 0/1 and the monomial is the
//! `⊛`-product of the selected coordinates. This covers the generalized
//! lines `max(a ⊛ x, b)` and planes `max(a ⊛ x, b ⊛ y, c)`.

mod polytope;

use std::fmt;
use std::str::FromStr;

pub use polytope::Polytope;

use crate::clodum::Clodum;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::wlattice::parse_real;

/// Default absolute tolerance for variety membership.
pub const DEFAULT_VARIETY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Max,
    Min,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Max => "max",
            Orientation::Min => "min",
        }
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Orientation::Max),
            "min" => Ok(Orientation::Min),
            _ => Err(Error::InvalidParameter(format!("unknown orientation `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<F> {
    pub slope: Vec<F>,
    pub intercept: F,
}

impl<F: Real> Term<F> {
    pub fn new(slope: Vec<F>, intercept: F) -> Self {
        Self { slope, intercept }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TropicalPolynomial<F> {
    clodum: Clodum<F>,
    orientation: Orientation,
    dim: usize,
    terms: Vec<Term<F>>,
}

impl<F: Real> TropicalPolynomial<F> {
    pub fn new(clodum: Clodum<F>, orientation: Orientation, dim: usize, terms: Vec<Term<F>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("a tropical polynomial needs at least one term".into()));
        }
        if orientation == Orientation::Min {
            clodum.require_clog("min-orientation polynomial")?;
        }
        for t in &terms {
            if t.slope.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "polynomial term slope",
                    expected: dim,
                    found: t.slope.len(),
                });
            }
            if t.slope.iter().any(|a| !a.is_finite()) {
                return Err(Error::InvalidParameter("slopes must be finite".into()));
            }
            if !clodum.is_clog() && t.slope.iter().any(|&a| a != F::zero() && a != F::one()) {
                return Err(Error::InvalidParameter(format!(
                    "{clodum} monomials only allow slopes 0 or 1"
                )));
            }
            clodum.check(t.intercept)?;
        }
        Ok(Self { clodum, orientation, dim, terms })
    }

    /// `max(x−2, 3)` style line: `max(a ⊛ x, b)`.
    pub fn line(clodum: Clodum<F>, a: F, b: F) -> Result<Self> {
        Self::new(
            clodum,
            Orientation::Max,
            1,
            vec![Term::new(vec![F::one()], a), Term::new(vec![F::zero()], b)],
        )
    }

    /// `max(a ⊛ x, b ⊛ y, c)`.
    pub fn plane(clodum: Clodum<F>, a: F, b: F, c: F) -> Result<Self> {
        let (o, z) = (F::one(), F::zero());
        Self::new(
            clodum,
            Orientation::Max,
            2,
            vec![Term::new(vec![o, z], a), Term::new(vec![z, o], b), Term::new(vec![z, z], c)],
        )
    }

    pub fn clodum(&self) -> Clodum<F> {
        self.clodum
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    /// Number of terms.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    fn inert_value(&self) -> F {
        match self.orientation {
            Orientation::Max => self.clodum.bottom(),
            Orientation::Min => self.clodum.top(),
        }
    }

    pub fn is_inert(&self, k: usize) -> bool {
        self.terms[k].intercept == self.inert_value()
    }

    /// `x^{a}` in the sense of this polynomial's clodum.
    pub fn monomial(&self, slope: &[F], x: &[F]) -> F {
        let c = &self.clodum;
        match c {
            Clodum::MaxPlus => slope
                .iter()
                .zip(x)
                .filter(|(a, _)| !a.is_zero())
                .fold(F::zero(), |acc, (&a, &v)| c.mul(acc, a * v)),
            Clodum::MaxTimes => slope
                .iter()
                .zip(x)
                .filter(|(a, _)| !a.is_zero())
                .fold(F::one(), |acc, (&a, &v)| c.mul(acc, v.powf(a))),
            Clodum::MaxMin | Clodum::MaxSoftmin { .. } => slope
                .iter()
                .zip(x)
                .filter(|(a, _)| a.is_one())
                .fold(c.unit(), |acc, (_, &v)| c.mul(acc, v)),
        }
    }

    fn check_point(&self, x: &[F]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "polynomial evaluation point",
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// The dual polynomial `p̄`, opposite orientation, with `p(x) = conj(p̄(x))`.
    pub fn conjugate(&self) -> Result<Self> {
        self.clodum.require_clog("polynomial conjugation")?;
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.slope.iter().map(|&a| -a).collect(), self.clodum.conjugate(t.intercept)))
            .collect();
        let orientation = match self.orientation {
            Orientation::Max => Orientation::Min,
            Orientation::Min => Orientation::Max,
        };
        Ok(Self { clodum: self.clodum, orientation, dim: self.dim, terms })
    }

    /// Value of each term at `x`.
    pub fn term_values(&self, x: &[F]) -> Result<Vec<F>> {
        self.check_point(x)?;
        let c = &self.clodum;
        Ok(match self.orientation {
            Orientation::Max => self
                .terms
                .iter()
                .map(|t| c.mul(t.intercept, self.monomial(&t.slope, x)))
                .collect(),
            Orientation::Min => {
                // min_k b_k ⊛′ x^{a_k} = conj(max_k b̄_k ⊛ x^{−a_k})
                self.terms
                    .iter()
                    .map(|t| {
                        let slope: Vec<F> = t.slope.iter().map(|&a| -a).collect();
                        c.conjugate(c.mul(c.conjugate(t.intercept), self.monomial(&slope, x)))
                    })
                    .collect()
            }
        })
    }

    pub fn eval(&self, x: &[F]) -> Result<F> {
        let v = self.term_values(x)?;
        Ok(match self.orientation {
            Orientation::Max => self.clodum.sup_all(v),
            Orientation::Min => self.clodum.inf_all(v),
        })
    }

    /// Indices of the non-inert terms within `tol` of the extremum.
    pub fn argmax_terms(&self, x: &[F], tol: F) -> Result<Vec<usize>> {
        let vals = self.term_values(x)?;
        let live: Vec<usize> = (0..vals.len()).filter(|&k| !self.is_inert(k)).collect();
        Ok(match self.orientation {
            Orientation::Max => {
                let best = live.iter().map(|&k| vals[k]).fold(F::neg_infinity(), F::max);
                live.into_iter().filter(|&k| vals[k] >= best - tol).collect()
            }
            Orientation::Min => {
                let best = live.iter().map(|&k| vals[k]).fold(F::infinity(), F::min);
                live.into_iter().filter(|&k| vals[k] <= best + tol).collect()
            }
        })
    }

    pub fn on_variety(&self, x: &[F], tol: F) -> Result<bool> {
        Ok(self.argmax_terms(x, tol)?.len() >= 2)
    }

    /// Convex hull of the slopes of the non-inert terms.
    pub fn newton_polytope(&self) -> Result<Polytope<F>> {
        if self.orientation != Orientation::Max {
            return Err(Error::InvalidParameter("Newton polytopes are defined for max polynomials".into()));
        }
        let gens = (0..self.terms.len())
            .filter(|&k| !self.is_inert(k))
            .map(|k| self.terms[k].slope.clone())
            .collect();
        Polytope::new(self.dim, gens)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        self.clodum.ensure_same(&other.clodum)?;
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context: "polynomial combination",
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.orientation != other.orientation {
            return Err(Error::InvalidParameter("cannot combine max and min polynomials".into()));
        }
        Ok(())
    }

    /// `p ∨ q` (or `p ∧ q` for min polynomials): the union of the terms.
    pub fn max_combine(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { terms, ..self.clone() })
    }

    /// Tropical product `p ⊛ q`, expanded into all cross terms.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        self.clodum.require_clog("polynomial product")?;
        let c = &self.clodum;
        let mut terms = Vec::with_capacity(self.rank() * other.rank());
        for s in &self.terms {
            for t in &other.terms {
                let slope = s.slope.iter().zip(&t.slope).map(|(&a, &b)| a + b).collect();
                let b = match self.orientation {
                    Orientation::Max => c.mul(s.intercept, t.intercept),
                    Orientation::Min => c.dual_mul(s.intercept, t.intercept),
                };
                terms.push(Term::new(slope, b));
            }
        }
        Ok(Self { terms, ..self.clone() })
    }

    /// Serialises to the `troppoly` text format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<F: Real> fmt::Display for TropicalPolynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "troppoly {} {} {}", self.dim, self.orientation.name(), self.clodum)?;
        for t in &self.terms {
            for a in &t.slope {
                write!(f, "{a} ")?;
            }
            writeln!(f, "| {}", t.intercept)?;
        }
        Ok(())
    }
}

impl<F: Real> FromStr for TropicalPolynomial<F> {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `troppoly` header".into(),
        })?;
        let bad_header = || Error::Parse {
            line: hline,
            message: "expected `troppoly <n> <max|min> <clodum>`".into(),
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "troppoly" {
            return Err(bad_header());
        }
        let dim: usize = fields[1].parse().map_err(|_| bad_header())?;
        let orientation: Orientation = fields[2].parse().map_err(|_| bad_header())?;
        let clodum: Clodum<F> = fields[3].parse().map_err(|e: Error| Error::Parse {
            line: hline,
            message: e.to_string(),
        })?;
        let mut terms = Vec::new();
        for (line, body) in lines {
            let (lhs, rhs) = body.split_once('|').ok_or(Error::Parse {
                line,
                message: "term lines look like `a_1 ... a_n | b`".into(),
            })?;
            let slope = lhs
                .split_whitespace()
                .map(|tok| parse_real(tok, line))
                .collect::<Result<Vec<F>>>()?;
            if slope.len() != dim {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {dim} slope entries, found {}", slope.len()),
                });
            }
            let mut rhs_tokens = rhs.split_whitespace();
            let b = match (rhs_tokens.next(), rhs_tokens.next()) {
                (Some(tok), None) => parse_real(tok, line)?,
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: "expected exactly one intercept after `|`".into(),
                    })
                }
            };
            terms.push(Term::new(slope, b));
        }
        let last = text.lines().count().max(1);
        Self::new(clodum, orientation, dim, terms).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse { line: last, message: other.to_string() },
        })
    }
}

/// Max-plus halfspace `max(a_{n+1}, ⋁ a_i + x_i) ≤ max(b_{n+1}, ⋁ b_i + x_i)`,
/// or with every max replaced by min.
///
/// The last entry of `a` and `b` is the constant. Each index carries a
/// coefficient on at most one side, so the other side holds the inert value
/// (−∞ for max, +∞ for min).
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalHalfspace<F> {
    orientation: Orientation,
    a: Vec<F>,
    b: Vec<F>,
}

impl<F: Real> TropicalHalfspace<F> {
    pub fn new(orientation: Orientation, a: Vec<F>, b: Vec<F>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                context: "halfspace coefficients",
                expected: a.len().max(1),
                found: b.len(),
            });
        }
        if a.iter().chain(&b).any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("halfspace coefficients must not be NaN".into()));
        }
        let ok = a.iter().zip(&b).all(|(&l, &r)| match orientation {
            Orientation::Max => l.min(r) == F::neg_infinity(),
            Orientation::Min => l.max(r) == F::infinity(),
        });
        if !ok {
            return Err(Error::InvalidParameter(
                "each coordinate may carry a coefficient on one side only".into(),
            ));
        }
        Ok(Self { orientation, a, b })
    }

    /// Dimension of the ambient space, `n`.
    pub fn dim(&self) -> usize {
        self.a.len() - 1
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn lhs(&self) -> &[F] {
        &self.a
    }

    pub fn rhs(&self) -> &[F] {
        &self.b
    }

    /// The complementary halfspace `T(b, a)`.
    pub fn flipped(&self) -> Self {
        Self { orientation: self.orientation, a: self.b.clone(), b: self.a.clone() }
    }

    fn side(&self, coef: &[F], x: &[F]) -> F {
        let n = self.dim();
        let c = Clodum::<F>::MaxPlus;
        let affine = (0..n).map(|i| match self.orientation {
            Orientation::Max => c.mul(coef[i], x[i]),
            Orientation::Min => c.dual_mul(coef[i], x[i]),
        });
        match self.orientation {
            Orientation::Max => affine.fold(coef[n], F::max),
            Orientation::Min => affine.fold(coef[n], F::min),
        }
    }

    /// Non-strict membership.
    pub fn contains(&self, x: &[F]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "halfspace point",
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.side(&self.a, x) <= self.side(&self.b, x))
    }
}
