//! Slope estimation from sampled data: numerical derivatives or gradients,
//! clustered into `K` representatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Samples;
use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::real::Real;

const KMEANS_MAX_ITER: usize = 100;
const KMEANS_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-10;

/// Forward-difference derivatives of 1D samples, ordered by `x`.
///
/// Consecutive samples with equal abscissae contribute nothing.
pub fn forward_derivatives<F: Real>(samples: &Samples<F>) -> Result<Vec<F>> {
    if samples.dim() != 1 {
        return Err(Error::DimensionMismatch {
            context: "1D derivative estimation",
            expected: 1,
            found: samples.dim(),
        });
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| samples.point(i)[0].partial_cmp(&samples.point(j)[0]).unwrap());
    Ok(order
        .windows(2)
        .filter_map(|w| {
            let dx = samples.point(w[1])[0] - samples.point(w[0])[0];
            (dx != F::zero()).then(|| (samples.target(w[1]) - samples.target(w[0])) / dx)
        })
        .collect())
}

/// Optimal 1D `k`-means (Jenks natural breaks) by dynamic programming.
///
/// Returns the sorted cluster means. The optimal split points are monotone
/// in the segment end, so each layer is filled by divide and conquer in
/// `O(n log n)`. Among equal-cost splits the later one wins, keeping the
/// disputed sample in the lower cluster.
pub fn jenks<F: Real>(values: &[F], k: usize) -> Result<Vec<F>> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one cluster".into()));
    }
    if k > values.len() {
        return Err(Error::InsufficientData(format!(
            "{k} clusters requested from {} derivative samples",
            values.len()
        )));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    // shift for numerically stable prefix sums
    let shift = v[n / 2];
    let mut s1 = vec![0.0f64; n + 1];
    let mut s2 = vec![0.0f64; n + 1];
    for (i, x) in v.iter().enumerate() {
        let d = (*x - shift).to_f64().unwrap_or(0.0);
        s1[i + 1] = s1[i] + d;
        s2[i + 1] = s2[i] + d * d;
    }
    // within-cluster sum of squares of v[i..j]
    let cost = |i: usize, j: usize| -> f64 {
        let s = s1[j] - s1[i];
        ((s2[j] - s2[i]) - s * s / (j - i) as f64).max(0.0)
    };
    let mut prev: Vec<f64> = (0..=n).map(|j| if j == 0 { 0.0 } else { cost(0, j) }).collect();
    prev[0] = f64::INFINITY;
    let mut splits: Vec<Vec<usize>> = vec![vec![0; n + 1]];
    for layer in 2..=k {
        let mut cur = vec![f64::INFINITY; n + 1];
        let mut arg = vec![0usize; n + 1];
        fill_layer(layer, n, layer - 1, n - 1, &prev, &cost, &mut cur, &mut arg);
        prev = cur;
        splits.push(arg);
    }
    let mut means = Vec::with_capacity(k);
    let mut end = n;
    for layer in (0..k).rev() {
        let start = splits[layer][end];
        let sum = v[start..end].iter().fold(F::zero(), |acc, &x| acc + x);
        means.push(sum / F::from_count(end - start));
        end = start;
    }
    means.reverse();
    Ok(means)
}

#[allow(clippy::too_many_arguments)]
fn fill_layer(
    lo: usize,
    hi: usize,
    opt_lo: usize,
    opt_hi: usize,
    prev: &[f64],
    cost: &dyn Fn(usize, usize) -> f64,
    cur: &mut [f64],
    arg: &mut [usize],
) {
    if lo > hi {
        return;
    }
    let j = (lo + hi) / 2;
    let mut best = f64::INFINITY;
    let mut best_i = opt_lo;
    for i in opt_lo..=opt_hi.min(j - 1) {
        let c = prev[i] + cost(i, j);
        if c <= best {
            best = c;
            best_i = i;
        }
    }
    cur[j] = best;
    arg[j] = best_i;
    if j > lo {
        fill_layer(lo, j - 1, opt_lo, best_i, prev, cost, cur, arg);
    }
    fill_layer(j + 1, hi, best_i, opt_hi, prev, cost, cur, arg);
}

/// Per-point gradient estimates from least-squares planes through the
/// `max(n + 2, 8)` nearest samples (the point itself included).
///
/// Points whose neighbourhood is rank deficient are reported in the second
/// component and produce no gradient.
pub fn local_gradients<F: Real>(samples: &Samples<F>) -> (Vec<Vec<F>>, Vec<usize>) {
    let n = samples.dim();
    let m = samples.len();
    let knn = (n + 2).max(8).min(m);
    let mut grads = Vec::with_capacity(m);
    let mut skipped = Vec::new();
    let mut dist: Vec<(F, usize)> = Vec::with_capacity(m);
    for i in 0..m {
        let xi = samples.point(i);
        dist.clear();
        dist.extend((0..m).map(|j| {
            let d = samples
                .point(j)
                .iter()
                .zip(xi)
                .fold(F::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
            (d, j)
        }));
        let by_dist = |a: &(F, usize), b: &(F, usize)| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1));
        if knn < m {
            dist.select_nth_unstable_by(knn - 1, by_dist);
        }
        let hood = &dist[..knn];
        // centred normal equations for f ≈ g·(x − x_i) + c
        let mut normal = vec![vec![F::zero(); n + 1]; n + 1];
        let mut rhs = vec![F::zero(); n + 1];
        for &(_, j) in hood {
            let xj = samples.point(j);
            let row: Vec<F> = (0..n).map(|c| xj[c] - xi[c]).chain(std::iter::once(F::one())).collect();
            for a in 0..=n {
                rhs[a] = rhs[a] + row[a] * samples.target(j);
                for b in 0..=n {
                    normal[a][b] = normal[a][b] + row[a] * row[b];
                }
            }
        }
        match solve_square(normal, rhs, F::lit(RANK_TOL)) {
            Some(sol) if sol.iter().all(|v| v.is_finite()) => grads.push(sol[..n].to_vec()),
            _ => skipped.push(i),
        }
    }
    (grads, skipped)
}

fn sq_dist<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

/// Lloyd's algorithm from a seeded k-means++ start. Returns the centroids.
pub fn kmeans<F: Real>(points: &[Vec<F>], k: usize, seed: u64) -> Result<Vec<Vec<F>>> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one cluster".into()));
    }
    if k > points.len() {
        return Err(Error::InsufficientData(format!(
            "{k} clusters requested from {} gradient samples",
            points.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = points.len();
    let mut centers: Vec<Vec<F>> = Vec::with_capacity(k);
    centers.push(points[rng.gen_range(0..m)].clone());
    let mut d2: Vec<f64> = points
        .iter()
        .map(|p| sq_dist(p, &centers[0]).to_f64().unwrap_or(0.0))
        .collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut r = rng.gen::<f64>() * total;
            let mut idx = m - 1;
            for (i, &w) in d2.iter().enumerate() {
                if r < w {
                    idx = i;
                    break;
                }
                r -= w;
            }
            idx
        } else {
            rng.gen_range(0..m)
        };
        centers.push(points[pick].clone());
        let c = centers.last().unwrap();
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, c).to_f64().unwrap_or(0.0));
        }
    }

    let dim = points[0].len();
    let mut assign = vec![0usize; m];
    for _ in 0..KMEANS_MAX_ITER {
        for (i, p) in points.iter().enumerate() {
            let mut best = (F::infinity(), 0);
            for (c, ctr) in centers.iter().enumerate() {
                let d = sq_dist(p, ctr);
                if d < best.0 {
                    best = (d, c);
                }
            }
            assign[i] = best.1;
        }
        let mut sums = vec![vec![F::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            counts[assign[i]] += 1;
            for (s, &v) in sums[assign[i]].iter_mut().zip(p) {
                *s = *s + v;
            }
        }
        let mut moved = F::zero();
        let mut taken: Vec<usize> = Vec::new();
        for c in 0..k {
            let next = if counts[c] > 0 {
                sums[c].iter().map(|&s| s / F::from_count(counts[c])).collect()
            } else {
                // re-seed from the sample farthest from its own centroid
                let far = (0..m)
                    .filter(|i| !taken.contains(i))
                    .max_by(|&a, &b| {
                        let da = sq_dist(&points[a], &centers[assign[a]]);
                        let db = sq_dist(&points[b], &centers[assign[b]]);
                        da.partial_cmp(&db).unwrap().then(b.cmp(&a))
                    })
                    .unwrap_or(0);
                taken.push(far);
                points[far].clone()
            };
            moved = moved.max(sq_dist(&next, &centers[c]).sqrt());
            centers[c] = next;
        }
        if moved <= F::lit(KMEANS_TOL) {
            break;
        }
    }
    Ok(centers)
}
