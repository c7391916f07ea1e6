//! Finite-dimensional weighted lattices over a clodum.
//!
//! Vectors and dense matrices whose entries live in a clodum carrier, the
//! max-`⊛` dilation products, their adjoint erosions, and translation
//! invariant 1D signal dilation/erosion.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::clodum::Clodum;
use crate::error::{Error, Result};
use crate::real::Real;

fn check_all<F: Real>(clodum: &Clodum<F>, values: &[F]) -> Result<()> {
    values.iter().try_for_each(|&v| clodum.check(v).map(|_| ()))
}

/// A vector of clodum scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalVector<F> {
    clodum: Clodum<F>,
    entries: Vec<F>,
}

impl<F: Real> TropicalVector<F> {
    pub fn new(clodum: Clodum<F>, entries: Vec<F>) -> Result<Self> {
        check_all(&clodum, &entries)?;
        Ok(Self { clodum, entries })
    }

    /// Every entry equal to `value`.
    pub fn constant(clodum: Clodum<F>, len: usize, value: F) -> Result<Self> {
        Self::new(clodum, vec![value; len])
    }

    pub(crate) fn from_trusted(clodum: Clodum<F>, entries: Vec<F>) -> Self {
        debug_assert!(entries.iter().all(|&v| clodum.contains(v)));
        Self { clodum, entries }
    }

    pub fn clodum(&self) -> Clodum<F> {
        self.clodum
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<F> {
        self.entries
    }

    pub fn get(&self, i: usize) -> F {
        self.entries[i]
    }

    fn zip_with(&self, other: &Self, context: &'static str, op: impl Fn(F, F) -> F) -> Result<Self> {
        self.clodum.ensure_same(&other.clodum)?;
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.len(),
                found: other.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self::from_trusted(self.clodum, entries))
    }

    /// Entrywise supremum.
    pub fn sup(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "vector sup", F::max)
    }

    /// Entrywise infimum.
    pub fn inf(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "vector inf", F::min)
    }

    /// Scalar dilation `c ⊛ x`.
    pub fn scale(&self, c: F) -> Result<Self> {
        self.clodum.check(c)?;
        let k = self.clodum;
        Ok(Self::from_trusted(k, self.entries.iter().map(|&v| k.mul(c, v)).collect()))
    }

    /// Scalar erosion `c ⊛′ x`.
    pub fn dual_scale(&self, c: F) -> Result<Self> {
        self.clodum.check(c)?;
        let k = self.clodum;
        Ok(Self::from_trusted(k, self.entries.iter().map(|&v| k.dual_mul(c, v)).collect()))
    }

    /// Partial order: `self ≤ other` entrywise. Vectors of different length
    /// are incomparable.
    pub fn le(&self, other: &Self) -> bool {
        self.len() == other.len() && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }
}

impl<F: Real> fmt::Display for TropicalVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Dense row-major matrix of clodum scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalMatrix<F> {
    clodum: Clodum<F>,
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Real> TropicalMatrix<F> {
    pub fn new(clodum: Clodum<F>, rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix storage",
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_all(&clodum, &data)?;
        Ok(Self {
            clodum,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(clodum: Clodum<F>, rows: &[Vec<F>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row",
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(clodum, rows.len(), cols, data)
    }

    /// The `⊛`-identity: `e` on the diagonal, `⊥` elsewhere.
    pub fn identity(clodum: Clodum<F>, n: usize) -> Self {
        let mut data = vec![clodum.bottom(); n * n];
        for i in 0..n {
            data[i * n + i] = clodum.unit();
        }
        Self {
            clodum,
            rows: n,
            cols: n,
            data,
        }
    }

    pub(crate) fn from_trusted(clodum: Clodum<F>, rows: usize, cols: usize, data: Vec<F>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            clodum,
            rows,
            cols,
            data,
        }
    }

    pub fn clodum(&self) -> Clodum<F> {
        self.clodum
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = F> + '_ {
        (0..self.rows).map(move |i| self.get(i, j))
    }

    fn expect_len(&self, context: &'static str, expected: usize, v: &TropicalVector<F>) -> Result<()> {
        self.clodum.ensure_same(&v.clodum)?;
        if v.len() != expected {
            return Err(Error::DimensionMismatch {
                context,
                expected,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `A ⊞ x`: `(A ⊞ x)_i = ⋁_j a_ij ⊛ x_j`.
    pub fn matvec_dilate(&self, x: &TropicalVector<F>) -> Result<TropicalVector<F>> {
        self.expect_len("matrix-vector dilation", self.cols, x)?;
        let k = self.clodum;
        let out = (0..self.rows)
            .map(|i| k.sup_all(self.row(i).iter().zip(&x.entries).map(|(&a, &v)| k.mul(a, v))))
            .collect();
        Ok(TropicalVector::from_trusted(k, out))
    }

    /// Adjoint erosion of [`matvec_dilate`](Self::matvec_dilate):
    /// `ε(y)_j = ⋀_i ψ(a_ij, y_i)`, the greatest `x` with `A ⊞ x ≤ y`.
    pub fn matvec_erode(&self, y: &TropicalVector<F>) -> Result<TropicalVector<F>> {
        self.expect_len("matrix-vector erosion", self.rows, y)?;
        let k = self.clodum;
        let mut out = vec![k.top(); self.cols];
        for i in 0..self.rows {
            let yi = y.entries[i];
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = o.min(k.adjoint_erosion(a, yi));
            }
        }
        Ok(TropicalVector::from_trusted(k, out))
    }

    /// `A ⊟′ y`: `(A ⊟′ y)_i = ⋀_j a_ij ⊛′ y_j`.
    pub fn matvec_dual(&self, y: &TropicalVector<F>) -> Result<TropicalVector<F>> {
        self.expect_len("matrix-vector dual product", self.cols, y)?;
        let k = self.clodum;
        let out = (0..self.rows)
            .map(|i| k.inf_all(self.row(i).iter().zip(&y.entries).map(|(&a, &v)| k.dual_mul(a, v))))
            .collect();
        Ok(TropicalVector::from_trusted(k, out))
    }

    fn product(&self, other: &Self, dual: bool) -> Result<Self> {
        self.clodum.ensure_same(&other.clodum)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let k = self.clodum;
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..other.cols {
                let terms = row.iter().enumerate().map(|(l, &a)| {
                    if dual {
                        k.dual_mul(a, other.get(l, j))
                    } else {
                        k.mul(a, other.get(l, j))
                    }
                });
                data.push(if dual { k.inf_all(terms) } else { k.sup_all(terms) });
            }
        }
        Ok(Self::from_trusted(k, self.rows, other.cols, data))
    }

    /// Max-`⊛` matrix product `c_ij = ⋁_l a_il ⊛ b_lj`.
    pub fn matmul_dilate(&self, other: &Self) -> Result<Self> {
        self.product(other, false)
    }

    /// Min-`⊛′` matrix product `d_ij = ⋀_l a_il ⊛′ b_lj`.
    pub fn matmul_dual(&self, other: &Self) -> Result<Self> {
        self.product(other, true)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            data.extend(self.column(j));
        }
        Self::from_trusted(self.clodum, self.cols, self.rows, data)
    }

    /// `A* = [ā_ji]`, the adjoint of `A` over a clog.
    pub fn conj_transpose(&self) -> Result<Self> {
        self.clodum.require_clog("conjugate transpose")?;
        let k = self.clodum;
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|v| *v = k.conjugate(*v));
        Ok(t)
    }

    pub fn le(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    /// Renders the `tropmat` text format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// A column vector as an `m × 1` matrix.
    pub fn from_column(v: &TropicalVector<F>) -> Self {
        Self::from_trusted(v.clodum, v.len(), 1, v.entries.clone())
    }

    /// Interprets an `m × 1` or `1 × n` matrix as a vector.
    pub fn into_vector(self) -> Result<TropicalVector<F>> {
        if self.cols == 1 || self.rows == 1 {
            Ok(TropicalVector::from_trusted(self.clodum, self.data))
        } else {
            Err(Error::DimensionMismatch {
                context: "vector from matrix",
                expected: 1,
                found: self.cols.min(self.rows),
            })
        }
    }
}

/// `tropmat <m> <n> <clodum>` header, then `m·n` whitespace separated
/// entries, one row per line. Infinite entries are written `inf`/`-inf`.
impl<F: Real> fmt::Display for TropicalMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tropmat {} {} {}", self.rows, self.cols, self.clodum)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn parse_real<F: Real>(token: &str, line: usize) -> Result<F> {
    let v: F = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{token}` is not a number"),
    })?;
    if v.is_nan() {
        return Err(Error::Parse {
            line,
            message: "NaN is not a lattice value".into(),
        });
    }
    Ok(v)
}

impl<F: Real> FromStr for TropicalMatrix<F> {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `tropmat` header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "tropmat" {
            return Err(Error::Parse {
                line: hline,
                message: "expected `tropmat <m> <n> <clodum>`".into(),
            });
        }
        let dim = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: hline,
                message: format!("bad dimension `{s}`"),
            })
        };
        let (rows, cols) = (dim(fields[1])?, dim(fields[2])?);
        let clodum: Clodum<F> = fields[3].parse().map_err(|e: Error| Error::Parse {
            line: hline,
            message: e.to_string(),
        })?;
        let mut data = Vec::with_capacity(rows * cols);
        let mut last_line = hline;
        for (ln, l) in lines {
            last_line = ln;
            for tok in l.split_whitespace() {
                let v = parse_real::<F>(tok, ln)?;
                clodum.check(v).map_err(|e| Error::Parse {
                    line: ln,
                    message: e.to_string(),
                })?;
                data.push(v);
            }
        }
        if data.len() != rows * cols {
            return Err(Error::Parse {
                line: last_line,
                message: format!("expected {} entries, found {}", rows * cols, data.len()),
            });
        }
        Ok(Self::from_trusted(clodum, rows, cols, data))
    }
}

/// A 1D signal over `ℤ` with finitely many explicit samples.
///
/// Positions outside `support()` take the constant `fill` value. Freshly
/// constructed signals are filled with `⊥`; erosion outputs are filled with
/// whatever the erosion yields off the window (`⊤` for `⊤`-filled inputs).
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D<F> {
    clodum: Clodum<F>,
    origin: isize,
    samples: Vec<F>,
    fill: F,
}

impl<F: Real> Signal1D<F> {
    /// `samples[k]` sits at position `origin + k`.
    pub fn new(clodum: Clodum<F>, origin: isize, samples: Vec<F>) -> Result<Self> {
        check_all(&clodum, &samples)?;
        Ok(Self {
            clodum,
            origin,
            samples,
            fill: clodum.bottom(),
        })
    }

    /// Same, padded with `⊤` (the erosion-side convention).
    pub fn new_top_filled(clodum: Clodum<F>, origin: isize, samples: Vec<F>) -> Result<Self> {
        let mut s = Self::new(clodum, origin, samples)?;
        s.fill = clodum.top();
        Ok(s)
    }

    /// `e` at the origin, `⊥` elsewhere.
    pub fn impulse(clodum: Clodum<F>) -> Self {
        Self {
            clodum,
            origin: 0,
            samples: vec![clodum.unit()],
            fill: clodum.bottom(),
        }
    }

    pub fn with_fill(mut self, fill: F) -> Result<Self> {
        self.fill = self.clodum.check(fill)?;
        Ok(self)
    }

    pub fn clodum(&self) -> Clodum<F> {
        self.clodum
    }

    pub fn origin(&self) -> isize {
        self.origin
    }

    pub fn samples(&self) -> &[F] {
        &self.samples
    }

    pub fn fill(&self) -> F {
        self.fill
    }

    pub fn support(&self) -> Range<isize> {
        self.origin..self.origin + self.samples.len() as isize
    }

    pub fn at(&self, x: isize) -> F {
        let k = x - self.origin;
        if k >= 0 && (k as usize) < self.samples.len() {
            self.samples[k as usize]
        } else {
            self.fill
        }
    }

    /// Pointwise order over all of `ℤ`.
    pub fn le(&self, other: &Self) -> bool {
        let (a, b) = (self.support(), other.support());
        let lo = a.start.min(b.start);
        let hi = a.end.max(b.end);
        self.fill <= other.fill && (lo..hi).all(|x| self.at(x) <= other.at(x))
    }

    fn kernel_taps<'a>(kernel: &'a Self) -> impl Iterator<Item = (isize, F)> + 'a {
        kernel
            .samples
            .iter()
            .enumerate()
            .map(move |(i, &h)| (kernel.origin + i as isize, h))
    }

    /// Sup-`⊛` convolution `(f ⊕ h)(x) = ⋁_z f(x − z) ⊛ h(z)`.
    ///
    /// The kernel is treated as `⊥` off its support.
    pub fn dilate(&self, kernel: &Self) -> Result<Self> {
        self.clodum.ensure_same(&kernel.clodum)?;
        let k = self.clodum;
        let fill = k.sup_all(kernel.samples.iter().map(|&h| k.mul(self.fill, h)));
        if self.samples.is_empty() || kernel.samples.is_empty() {
            return Ok(Self {
                clodum: k,
                origin: self.origin + kernel.origin,
                samples: Vec::new(),
                fill,
            });
        }
        let origin = self.origin + kernel.origin;
        let len = self.samples.len() + kernel.samples.len() - 1;
        let samples = (0..len as isize)
            .map(|off| {
                let x = origin + off;
                k.sup_all(Self::kernel_taps(kernel).map(|(z, h)| k.mul(self.at(x - z), h)))
            })
            .collect();
        Ok(Self {
            clodum: k,
            origin,
            samples,
            fill,
        })
    }

    /// Adjoint erosion of [`dilate`](Self::dilate):
    /// `ε(g)(y) = ⋀_z ψ(h(z), g(y + z))`.
    pub fn erode(&self, kernel: &Self) -> Result<Self> {
        self.clodum.ensure_same(&kernel.clodum)?;
        let k = self.clodum;
        let fill = k.inf_all(kernel.samples.iter().map(|&h| k.adjoint_erosion(h, self.fill)));
        if self.samples.is_empty() || kernel.samples.is_empty() {
            return Ok(Self {
                clodum: k,
                origin: self.origin - kernel.origin,
                samples: Vec::new(),
                fill,
            });
        }
        let kernel_last = kernel.origin + kernel.samples.len() as isize - 1;
        let origin = self.origin - kernel_last;
        let len = self.samples.len() + kernel.samples.len() - 1;
        let samples = (0..len as isize)
            .map(|off| {
                let y = origin + off;
                k.inf_all(Self::kernel_taps(kernel).map(|(z, h)| k.adjoint_erosion(h, self.at(y + z))))
            })
            .collect();
        Ok(Self {
            clodum: k,
            origin,
            samples,
            fill,
        })
    }
}
