//! Grids, quadrature and a finite-difference eigensolver.
//!
//! The Hamiltonian `-d^2/dx^2 + V` is discretized with the 3-point stencil
//! on a uniform grid of interior nodes, Dirichlet conditions sitting on the
//! two ghost nodes just outside. Eigenvalues come from Sturm-sequence
//! bisection; eigenvectors from inverse iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{DomainInfo, PotentialSpec, Which};

pub const MIN_NODES: usize = 16;

/// Uniform grid of interior nodes `x0 + i h`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub h: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(x0: f64, h: f64, count: usize) -> Result<Self> {
        if count < MIN_NODES {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {MIN_NODES} nodes, got {count}"
            )));
        }
        if !(h > 0.0) || !h.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bad grid x0 = {x0}, h = {h}"
            )));
        }
        Ok(Grid { x0, h, count })
    }

    /// `count` interior nodes spanning a finite domain with `count + 1` intervals.
    pub fn over(domain: &DomainInfo, count: usize) -> Result<Self> {
        let (lo, hi) = domain.finite_bounds()?;
        let h = (hi - lo) / (count as f64 + 1.0);
        Grid::new(lo + h, h, count)
    }

    /// Same domain, half the spacing (`2 count + 1` interior nodes).
    pub fn refined(&self) -> Self {
        let h = self.h / 2.0;
        Grid {
            x0: self.x_min() + h,
            h,
            count: 2 * self.count + 1,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    /// Left ghost node (domain edge).
    pub fn x_min(&self) -> f64 {
        self.x0 - self.h
    }

    /// Right ghost node (domain edge).
    pub fn x_max(&self) -> f64 {
        self.x0 + self.count as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.x(i))
    }

    pub fn sample(&self, mut f: impl FnMut(f64) -> Result<f64>) -> Result<Vec<f64>> {
        self.nodes().map(&mut f).collect()
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        if let Some(d) = diagonal.iter().find(|d| !d.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite diagonal entry {d}"
            )));
        }
        Ok(TridiagonalOperator {
            diagonal,
            off_diagonal,
        })
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// `op * v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        let (d, e) = (&self.diagonal, &self.off_diagonal);
        (0..n)
            .map(|i| {
                let mut s = d[i] * v[i];
                if i > 0 {
                    s += e[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += e[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let (d, e) = (&self.diagonal, &self.off_diagonal);
        let guard = f64::MIN_POSITIVE.sqrt() * self.norm_bound().max(1.0);
        let mut count = 0;
        let mut q = d[0] - lambda;
        for i in 0..d.len() {
            if i > 0 {
                let prev = if q.abs() < guard {
                    guard.copysign(q)
                } else {
                    q
                };
                q = (d[i] - lambda) - e[i - 1] * e[i - 1] / prev;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let (d, e) = (&self.diagonal, &self.off_diagonal);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += e[i - 1].abs();
            }
            if i + 1 < n {
                r += e[i].abs();
            }
            lo = lo.min(d[i] - r);
            hi = hi.max(d[i] + r);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }
}

/// `-d^2/dx^2 + V^(which)` on the interior nodes of `grid`.
pub fn build_hamiltonian(
    spec: &PotentialSpec,
    which: Which,
    grid: &Grid,
) -> Result<TridiagonalOperator> {
    let potential = |x: f64| spec.potential_v(which, x);
    build_hamiltonian_with(potential, grid)
}

/// 3-point discretization for an arbitrary potential.
pub fn build_hamiltonian_with(
    potential: impl Fn(f64) -> Result<f64>,
    grid: &Grid,
) -> Result<TridiagonalOperator> {
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let mut diagonal = Vec::with_capacity(grid.count);
    for x in grid.nodes() {
        let v = potential(x)?;
        if !v.is_finite() {
            return Err(Error::GridSingularity(x));
        }
        diagonal.push(2.0 * inv_h2 + v);
    }
    let off_diagonal = vec![-inv_h2; grid.count - 1];
    TridiagonalOperator::new(diagonal, off_diagonal)
}

/// The `k` smallest eigenvalues in increasing order, each bisected until its
/// bracket is narrower than `1e-12 * max(|lambda|, 1)`.
pub fn eigenvalues_lowest(op: &TridiagonalOperator, k: usize) -> Result<Vec<f64>> {
    if k > op.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenvalues from a {}x{} operator",
            op.len(),
            op.len()
        )));
    }
    let (glo, ghi) = op.gershgorin();
    let pad = 1e-10 * glo.abs().max(ghi.abs()).max(1.0);
    let (glo, ghi) = (glo - pad, ghi + pad);
    let mut out = Vec::with_capacity(k);
    let mut lo_start = glo;
    for i in 0..k {
        let (mut lo, mut hi) = (lo_start, ghi);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if op.sturm_count(mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
            let scale = lo.abs().max(hi.abs()).max(1.0);
            if hi - lo <= 1e-12 * scale {
                break;
            }
        }
        let lambda = 0.5 * (lo + hi);
        out.push(lambda);
        lo_start = lo;
    }
    Ok(out)
}

pub const INVERSE_ITERATION_MIN_SWEEPS: usize = 2;
pub const INVERSE_ITERATION_MAX_SWEEPS: usize = 8;
pub const INVERSE_ITERATION_RESIDUAL: f64 = 1e-8;

/// Unit eigenvector for `lambda` by inverse iteration from a seeded random
/// start. The sign is fixed so the first lobe (first entry above 1% of the
/// maximum magnitude) is positive.
pub fn eigenvector(op: &TridiagonalOperator, lambda: f64, seed: u64) -> Result<Vec<f64>> {
    let n = op.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    normalize2(&mut v);
    let lu = ShiftedLu::factor(op, lambda);
    for sweep in 1..=INVERSE_ITERATION_MAX_SWEEPS {
        v = lu.solve(&v);
        if !normalize2(&mut v) {
            return Err(Error::DegenerateCluster(lambda));
        }
        if sweep >= INVERSE_ITERATION_MIN_SWEEPS
            && residual(op, lambda, &v) < INVERSE_ITERATION_RESIDUAL
        {
            fix_sign(&mut v);
            return Ok(v);
        }
    }
    Err(Error::DegenerateCluster(lambda))
}

/// ‖(op - lambda) v‖₂.
pub fn residual(op: &TridiagonalOperator, lambda: f64, v: &[f64]) -> f64 {
    op.apply(v)
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn normalize2(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Flip `v` so that its first significant lobe is positive.
pub fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 0.01 * max) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// LU factorization with partial pivoting of `op - shift`.
struct ShiftedLu {
    // U has up to two super-diagonals after pivoting.
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    l: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(op: &TridiagonalOperator, shift: f64) -> Self {
        let n = op.len();
        let tiny = f64::EPSILON * op.norm_bound().max(1.0);
        let mut d: Vec<f64> = op.diagonal.iter().map(|x| x - shift).collect();
        let mut du: Vec<f64> = op.off_diagonal.clone();
        let dl: Vec<f64> = op.off_diagonal.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut l = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                l[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                // swap rows i and i+1
                swapped[i] = true;
                let f = d[i] / dl[i];
                l[i] = f;
                d[i] = dl[i];
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - f * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = tiny.copysign(*x);
            }
        }
        ShiftedLu {
            u0: d,
            u1: du,
            u2: du2,
            l,
            swapped,
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.u0.len();
        let mut y = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
                y[i + 1] -= self.l[i] * y[i];
            } else {
                y[i + 1] -= self.l[i] * y[i];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        x
    }
}

/// Composite Simpson over the whole truncated domain of `grid`.
///
/// The integrand is taken to vanish on the two ghost nodes, which matches
/// the Dirichlet setting of every integrand used here. With an even number
/// of intervals this is plain Simpson; otherwise the last interval is closed
/// with the trapezoid rule.
pub fn quadrature(values: &[f64], grid: &Grid) -> f64 {
    let n = values.len() + 2;
    let f = |i: usize| -> f64 {
        if i == 0 || i == n - 1 {
            0.0
        } else {
            values[i - 1]
        }
    };
    let intervals = n - 1;
    let simpson_intervals = intervals - intervals % 2;
    let mut sum = f(0) + f(simpson_intervals);
    for i in 1..simpson_intervals {
        sum += if i % 2 == 1 { 4.0 * f(i) } else { 2.0 * f(i) };
    }
    let mut total = sum * grid.h / 3.0;
    if intervals % 2 == 1 {
        total += 0.5 * grid.h * (f(n - 2) + f(n - 1));
    }
    total
}

/// Richardson extrapolation for an error expansion of leading order `order`
/// in h, given results at h and h/2.
pub fn richardson(e_h: f64, e_h2: f64, order: u32) -> f64 {
    let p = 2f64.powi(order as i32);
    (p * e_h2 - e_h) / (p - 1.0)
}

/// Fourth-order central difference of `f` at x with step h.
pub fn five_point_derivative(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h))
}

/// Fourth-order central second difference of `f` at x with step h.
pub fn five_point_second_derivative(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok(
        (-f(x - 2.0 * h)? + 16.0 * f(x - h)? - 30.0 * f(x)? + 16.0 * f(x + h)? - f(x + 2.0 * h)?)
            / (12.0 * h * h),
    )
}

/// Number of sign changes in `values`, ignoring entries below
/// `rel_floor * max|values|`.
pub fn sign_changes(values: &[f64], rel_floor: f64) -> usize {
    let max = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = rel_floor * max;
    let mut last = 0.0;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            changes += 1;
        }
        last = v.signum();
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn box_grid(count: usize) -> Grid {
        let h = PI / (count as f64 + 1.0);
        Grid::new(h, h, count).unwrap()
    }

    fn free_box(count: usize) -> TridiagonalOperator {
        build_hamiltonian_with(|_| Ok(0.0), &box_grid(count)).unwrap()
    }

    /// Dense symmetric eigenvalues by cyclic Jacobi rotations (test oracle).
    #[allow(clippy::needless_range_loop)]
    fn dense_eigenvalues(op: &TridiagonalOperator) -> Vec<f64> {
        let n = op.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = op.diagonal[i];
            if i + 1 < n {
                a[i][i + 1] = op.off_diagonal[i];
                a[i + 1][i] = op.off_diagonal[i];
            }
        }
        for _ in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[p][q] * a[p][q];
                }
            }
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }

    #[test]
    fn two_by_two() {
        let op = TridiagonalOperator::new(vec![2.0, 2.0], vec![-1.0]).unwrap();
        let ev = eigenvalues_lowest(&op, 2).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn particle_in_a_box() {
        let ev = eigenvalues_lowest(&free_box(2000), 3).unwrap();
        for (k, e) in ev.iter().enumerate() {
            let exact = ((k + 1) * (k + 1)) as f64;
            assert!((e - exact).abs() < 1e-5 * exact, "{e} vs {exact}");
        }
    }

    #[test]
    fn richardson_improves_box_by_eight() {
        let c = 500;
        let coarse = eigenvalues_lowest(&free_box(c), 3).unwrap();
        let fine = eigenvalues_lowest(&free_box(2 * c + 1), 3).unwrap();
        for k in 0..3 {
            let exact = ((k + 1) * (k + 1)) as f64;
            let raw = (fine[k] - exact).abs();
            let extrap = (richardson(coarse[k], fine[k], 2) - exact).abs();
            assert!(extrap * 8.0 <= raw, "k = {k}: {extrap} vs {raw}");
        }
    }

    #[test]
    fn richardson_algebra() {
        assert_eq!(richardson(3.5, 3.5, 2), 3.5);
        let (e, c, h) = (2.25, 0.7, 0.01);
        let got = richardson(e + c * h * h, e + c * h * h / 4.0, 2);
        assert!((got - e).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let op = free_box(64);
        let n = op.len();
        let dense = |i: usize, j: usize| -> f64 {
            if i == j {
                op.diagonal[i]
            } else if j == i + 1 {
                op.off_diagonal[i]
            } else if i == j + 1 {
                op.off_diagonal[j]
            } else {
                0.0
            }
        };
        for i in 0..n {
            for j in 0..n {
                assert_eq!(dense(i, j), dense(j, i));
            }
        }
    }

    #[test]
    fn sturm_count_matches_dense_diagonalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let d: Vec<f64> = (0..64).map(|_| rng.random::<f64>() * 10.0 - 5.0).collect();
            let e: Vec<f64> = (0..63).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let op = TridiagonalOperator::new(d, e).unwrap();
            let dense = dense_eigenvalues(&op);
            for lambda in [-6.0, -1.3, 0.0, 0.77, 4.2, 9.0] {
                let brute = dense.iter().filter(|&&x| x < lambda).count();
                assert_eq!(op.sturm_count(lambda), brute);
            }
            let ev = eigenvalues_lowest(&op, 64).unwrap();
            for (a, b) in ev.iter().zip(&dense) {
                assert!((a - b).abs() < 1e-9);
            }
            assert!(ev.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn eigenvector_residual_and_nodes() {
        let op = free_box(800);
        let ev = eigenvalues_lowest(&op, 4).unwrap();
        for (k, &lambda) in ev.iter().enumerate() {
            let v = eigenvector(&op, lambda, 42).unwrap();
            assert!(residual(&op, lambda, &v) < 1e-8);
            assert_eq!(sign_changes(&v, 1e-8), k);
            let first = v.iter().find(|x| x.abs() > 1e-3).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn eigenvector_is_seed_deterministic() {
        let op = free_box(300);
        let ev = eigenvalues_lowest(&op, 2).unwrap();
        let a = eigenvector(&op, ev[1], 11).unwrap();
        let b = eigenvector(&op, ev[1], 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn simpson_sin_integral() {
        let g = box_grid(4097);
        let values: Vec<f64> = g.nodes().map(f64::sin).collect();
        assert!((quadrature(&values, &g) - 2.0).abs() < 1e-10);
        // even node count falls back to a trapezoid tail
        let g = box_grid(4096);
        let values: Vec<f64> = g.nodes().map(f64::sin).collect();
        assert!((quadrature(&values, &g) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn quadrature_is_linear() {
        let g = box_grid(101);
        let values: Vec<f64> = g.nodes().map(|x| x.sin() * x.exp()).collect();
        let scaled: Vec<f64> = values.iter().map(|v| 3.0 * v).collect();
        let a = quadrature(&values, &g);
        let b = quadrature(&scaled, &g);
        assert!((b - 3.0 * a).abs() <= 4.0 * f64::EPSILON * b.abs());
    }

    #[test]
    fn grid_refinement_halves_spacing() {
        let g = box_grid(100);
        let r = g.refined();
        assert_eq!(r.count, 201);
        assert!((r.h * 2.0 - g.h).abs() < 1e-16);
        assert!((r.x_max() - g.x_max()).abs() < 1e-12);
        assert!((r.x_min() - g.x_min()).abs() < 1e-15);
        assert!(Grid::new(0.0, 0.1, 8).is_err());
    }
}
