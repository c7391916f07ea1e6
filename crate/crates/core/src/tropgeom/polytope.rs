//! Finite point-set polytopes with exact planar hulls.

use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::real::Real;

/// Collinearity tolerance for non-integer planar input, relative to the
/// squared edge lengths.
const COLLINEAR_TOL: f64 = 1e-12;
/// Above this many generators no extreme-point reduction is attempted in
/// three or more dimensions.
const MAX_REDUCTION_POINTS: usize = 12;
/// Integer fast path bound; products of two such values fit an i128.
const EXACT_BOUND: f64 = 9.0e15;

/// Convex hull of a finite set of generators in `ℝⁿ`.
///
/// For `n ≤ 2` the hull is computed and stored as a minimal counterclockwise
/// vertex cycle starting from the lexicographically smallest vertex.
#[derive(Debug, Clone)]
pub struct Polytope<F> {
    dim: usize,
    generators: Vec<Vec<F>>,
    hull: Option<Vec<Vec<F>>>,
}

impl<F: Real> Polytope<F> {
    pub fn new(dim: usize, generators: Vec<Vec<F>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("polytope dimension must be positive".into()));
        }
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "polytope generator",
                    expected: dim,
                    found: g.len(),
                });
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("polytope generators must be finite".into()));
            }
        }
        let hull = match dim {
            1 => Some(hull_1d(&generators)),
            2 => Some(hull_2d(&generators)),
            _ => None,
        };
        Ok(Self { dim, generators, hull })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<F>] {
        &self.generators
    }

    /// Hull vertices in counterclockwise order, present when `n ≤ 2`.
    pub fn hull_vertices(&self) -> Option<&[Vec<F>]> {
        self.hull.as_deref()
    }

    /// Vertices of the polytope: the stored hull for `n ≤ 2`; otherwise
    /// the extreme generators when there are at most 12 of them, or the
    /// deduplicated generators beyond that.
    pub fn vertices(&self) -> Vec<Vec<F>> {
        match &self.hull {
            Some(h) => h.clone(),
            None => {
                let pts = dedup(&self.generators);
                if pts.len() <= MAX_REDUCTION_POINTS {
                    extreme_points(&pts)
                } else {
                    pts
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context: "polytope operation",
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    /// `conv(P ∪ Q)`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut gens = self.vertices();
        gens.extend(other.vertices());
        Self::new(self.dim, gens)
    }

    /// `P ⊕ Q = {p + q}`.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let (pv, qv) = (self.vertices(), other.vertices());
        let mut gens = Vec::with_capacity(pv.len() * qv.len());
        for p in &pv {
            for q in &qv {
                gens.push(p.iter().zip(q).map(|(&a, &b)| a + b).collect());
            }
        }
        Self::new(self.dim, gens)
    }

    fn canonical_vertices(&self) -> Vec<Vec<F>> {
        let mut v = self.vertices();
        v.sort_by(|a, b| lex_cmp(a, b));
        v
    }
}

/// Polytopes are equal when their vertex sets coincide.
impl<F: Real> PartialEq for Polytope<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.canonical_vertices() == other.canonical_vertices()
    }
}

fn lex_cmp<F: Real>(a: &[F], b: &[F]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn dedup<F: Real>(pts: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut v = pts.to_vec();
    v.sort_by(|a, b| lex_cmp(a, b));
    v.dedup();
    v
}

fn hull_1d<F: Real>(pts: &[Vec<F>]) -> Vec<Vec<F>> {
    let v = dedup(pts);
    match (v.first(), v.last()) {
        (Some(lo), Some(hi)) if lo != hi => vec![lo.clone(), hi.clone()],
        (Some(lo), _) => vec![lo.clone()],
        _ => Vec::new(),
    }
}

/// Sign of the turn `o → a → b`: positive for counterclockwise.
trait Orient {
    fn turn(&self, o: usize, a: usize, b: usize) -> i8;
}

struct ExactOrient(Vec<[i64; 2]>);

impl Orient for ExactOrient {
    fn turn(&self, o: usize, a: usize, b: usize) -> i8 {
        let (o, a, b) = (self.0[o], self.0[a], self.0[b]);
        let cross = (a[0] as i128 - o[0] as i128) * (b[1] as i128 - o[1] as i128)
            - (a[1] as i128 - o[1] as i128) * (b[0] as i128 - o[0] as i128);
        cross.signum() as i8
    }
}

struct FloatOrient(Vec<[f64; 2]>);

impl Orient for FloatOrient {
    fn turn(&self, o: usize, a: usize, b: usize) -> i8 {
        let (o, a, b) = (self.0[o], self.0[a], self.0[b]);
        let (ux, uy, vx, vy) = (a[0] - o[0], a[1] - o[1], b[0] - o[0], b[1] - o[1]);
        let cross = ux * vy - uy * vx;
        let scale = (ux * ux + uy * uy).max(vx * vx + vy * vy);
        if cross.abs() <= COLLINEAR_TOL * scale {
            0
        } else if cross > 0.0 {
            1
        } else {
            -1
        }
    }
}

fn as_exact<F: Real>(pts: &[Vec<F>]) -> Option<ExactOrient> {
    pts.iter()
        .map(|p| {
            let (x, y) = (p[0].to_f64()?, p[1].to_f64()?);
            let ok = |v: f64| v.fract() == 0.0 && v.abs() <= EXACT_BOUND;
            (ok(x) && ok(y)).then_some([x as i64, y as i64])
        })
        .collect::<Option<Vec<_>>>()
        .map(ExactOrient)
}

/// Andrew's monotone chain; collinear points are dropped.
fn monotone_chain(n: usize, orient: &dyn Orient) -> Vec<usize> {
    if n <= 1 {
        return (0..n).collect();
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * n);
    for i in 0..n {
        while hull.len() >= 2 && orient.turn(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0 {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for i in (0..n - 1).rev() {
        while hull.len() >= lower_len && orient.turn(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0 {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull
}

fn hull_2d<F: Real>(pts: &[Vec<F>]) -> Vec<Vec<F>> {
    let v = dedup(pts);
    let idx = match as_exact(&v) {
        Some(exact) => monotone_chain(v.len(), &exact),
        None => {
            let approx = FloatOrient(
                v.iter()
                    .map(|p| [p[0].to_f64().unwrap_or(0.0), p[1].to_f64().unwrap_or(0.0)])
                    .collect(),
            );
            monotone_chain(v.len(), &approx)
        }
    };
    idx.into_iter().map(|i| v[i].clone()).collect()
}

/// Whether `q` is a convex combination of `support` (least squares on the
/// affine barycentric system, accepted when residual and negativity are
/// within tolerance).
fn in_simplex_hull<F: Real>(q: &[F], support: &[&Vec<F>]) -> bool {
    let s = support.len();
    let dim = q.len();
    // rows: one per coordinate, plus the affine constraint
    let row = |r: usize, j: usize| if r < dim { support[j][r] } else { F::one() };
    let target = |r: usize| if r < dim { q[r] } else { F::one() };
    let mut normal = vec![vec![F::zero(); s]; s];
    let mut rhs = vec![F::zero(); s];
    for r in 0..=dim {
        for a in 0..s {
            rhs[a] = rhs[a] + row(r, a) * target(r);
            for b in 0..s {
                normal[a][b] = normal[a][b] + row(r, a) * row(r, b);
            }
        }
    }
    let Some(lambda) = solve_square(normal, rhs, F::lit(1e-12)) else {
        return false;
    };
    let tol = F::lit(1e-9);
    if lambda.iter().any(|&l| l < -tol) {
        return false;
    }
    (0..=dim).all(|r| {
        let fitted = (0..s).fold(F::zero(), |acc, j| acc + lambda[j] * row(r, j));
        (fitted - target(r)).abs() <= tol * (F::one() + target(r).abs())
    })
}

fn subsets(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, k, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut visit)
}

/// Brute-force extreme points by Carathéodory: a generator is redundant when
/// it lies in the hull of at most `n + 1` of the remaining ones.
fn extreme_points<F: Real>(pts: &[Vec<F>]) -> Vec<Vec<F>> {
    let dim = pts.first().map_or(0, Vec::len);
    let mut keep: Vec<Vec<F>> = Vec::new();
    for (i, q) in pts.iter().enumerate() {
        let others: Vec<&Vec<F>> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p).collect();
        let redundant = (1..=(dim + 1).min(others.len())).any(|k| {
            subsets(others.len(), k, |idx| {
                let support: Vec<&Vec<F>> = idx.iter().map(|&j| others[j]).collect();
                in_simplex_hull(q, &support)
            })
        });
        if !redundant {
            keep.push(q.clone());
        }
    }
    keep
}
