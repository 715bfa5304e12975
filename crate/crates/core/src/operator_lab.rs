//! Discretized integral operators: the Volterra-type kernel `T`, the
//! inverse-operator kernel `K_H`, deterministic one-sided Jacobi singular
//! values, and the Independence comparison.

use crate::error::{Error, Result};
use crate::growth::RealSequence;
use crate::hamiltonian::{HamiltonianSpec, Interval, Point};
use crate::mat2::Mat2;
use crate::stats::loglog_slope;
use crate::{dyadic, math, quad};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Relative off-diagonal threshold of the Jacobi iteration.
pub const JACOBI_TOL: f64 = 1e-12;
/// Sweep limit of the Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries do not fill a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Self::from_row_major(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max(math::abs(a - b)))
    }

    /// `P A Pᵀ` for the permutation sending index `k` to `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if self.rows != self.cols || perm.len() != self.rows {
            return Err(Error::InvalidArgument("permutation needs a square matrix of matching size".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        Ok(out)
    }
}

/// One grid cell `[lo, hi)` with its midpoint and length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub lo: Point,
    pub hi: Point,
    pub mid: Point,
    pub len: f64,
}

/// Strictly increasing grid `t₀ < … < t_M` inside `[a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    interval: Interval,
    cells: Vec<Cell>,
}

fn subdivide(iv: &Interval, p: Point, q: Point, k: usize, out: &mut Vec<Point>) {
    for s in 1..=k {
        let f = s as f64 / k as f64;
        let pt = if s == k {
            q
        } else if iv.is_bounded() {
            iv.point_from_gap(p.gap + (q.gap - p.gap) * f)
        } else {
            iv.point(p.t + (q.t - p.t) * f)
        };
        out.push(pt);
    }
}

/// Left end of the `k`-th logarithmic level: gap `(b−a)·2^{−k}`, or `1+t−a = 2^k` on a half-line.
fn level_point(iv: &Interval, k: usize) -> Point {
    if iv.is_bounded() {
        iv.dyadic_point(k as f64)
    } else {
        iv.point(iv.a + math::exp2(k as f64) - 1.0)
    }
}

impl Grid {
    /// Grid with the given breakpoints.
    pub fn from_points(interval: Interval, points: &[Point]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::DegenerateGrid(format!("need at least 2 cells, got {}", points.len().saturating_sub(1))));
        }
        if points[0].t < interval.a || !points[0].t.is_finite() {
            return Err(Error::DegenerateGrid(format!("grid starts at {} outside the interval", points[0].t)));
        }
        let mut cells = Vec::with_capacity(points.len() - 1);
        for w in points.windows(2) {
            let (p, q) = (w[0], w[1]);
            let len = interval.length(p, q);
            if !(len > 0.0 && len.is_finite()) || interval.is_end(q) {
                return Err(Error::DegenerateGrid(format!(
                    "breakpoints must increase strictly inside [a, b): {} then {}",
                    p.t, q.t
                )));
            }
            let mid = if interval.is_bounded() {
                interval.point_from_gap(0.5 * (p.gap + q.gap))
            } else {
                interval.point(0.5 * (p.t + q.t))
            };
            cells.push(Cell { lo: p, hi: q, mid, len });
        }
        Ok(Grid { interval, cells })
    }

    /// Grid from plain abscissae.
    pub fn from_abscissae(interval: Interval, ts: &[f64]) -> Result<Self> {
        let pts: Vec<Point> = ts.iter().map(|&t| interval.point(t)).collect();
        Self::from_points(interval, &pts)
    }

    /// `m` equal cells on `[lo, hi]`.
    pub fn uniform(interval: Interval, lo: f64, hi: f64, m: usize) -> Result<Self> {
        let ts: Vec<f64> = (0..=m).map(|k| lo + (hi - lo) * k as f64 / m as f64).collect();
        Self::from_abscissae(interval, &ts)
    }

    /// The dyadic cells `J_1 … J_depth` of `h`, each split into `per_cell` equal
    /// subcells. Returns the grid and the partition (subcell counts per `J_n`).
    pub fn dyadic(h: &HamiltonianSpec, depth: usize, per_cell: usize) -> Result<(Self, Vec<usize>)> {
        if per_cell == 0 {
            return Err(Error::DegenerateGrid("per_cell must be positive".into()));
        }
        let iv = h.interval();
        let c = dyadic::dyadic_points(h, depth)?;
        let mut pts = vec![c[0]];
        for w in c.windows(2) {
            subdivide(&iv, w[0], w[1], per_cell, &mut pts);
        }
        Ok((Self::from_points(iv, &pts)?, vec![per_cell; depth]))
    }

    /// Logarithmic levels toward `b` (gap halving, or doubling of `1+t−a` on a
    /// half-line), `m` cells in total, allocated to levels in proportion to
    /// `∫√h₂` with at least `floor` cells per level.
    pub fn log_levels(h: &HamiltonianSpec, levels: usize, m: usize, floor: usize) -> Result<Self> {
        if levels == 0 || floor == 0 || m < floor * levels {
            return Err(Error::DegenerateGrid(format!(
                "{m} cells cannot cover {levels} levels with {floor} cells each"
            )));
        }
        let iv = h.interval();
        let mut weights = Vec::with_capacity(levels);
        for k in 0..levels {
            let (u0, u1) = (k as f64 * math::LN_2, (k + 1) as f64 * math::LN_2);
            let w = quad::integrate(
                |u| math::sqrt(h.value_at(iv.point_at_u(u)).h2().max(0.0)) * iv.jacobian_u(u),
                u0,
                u1,
                1e-8,
            );
            weights.push(if w.is_finite() { w.max(0.0) } else { 0.0 });
        }
        let total: f64 = weights.iter().sum();
        let spare = (m - floor * levels) as f64;
        let mut subs: Vec<usize> = weights
            .iter()
            .map(|&w| {
                let share = if total > 0.0 { w / total } else { 1.0 / levels as f64 };
                floor.max(math::floor(share * spare) as usize)
            })
            .collect();
        let used: usize = subs.iter().sum();
        if used > m {
            return Err(Error::DegenerateGrid("cell allocation overflow".into()));
        }
        subs[0] += m - used;
        let mut pts = vec![level_point(&iv, 0)];
        for (k, &s) in subs.iter().enumerate() {
            subdivide(&iv, level_point(&iv, k), level_point(&iv, k + 1), s, &mut pts);
        }
        Self::from_points(iv, &pts)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Quadrature weight of the diagonal cell `i = j` of a triangular kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalRule {
    /// Strictly triangular: the diagonal cell contributes nothing.
    #[default]
    Exclude,
    /// The diagonal cell gets weight ½, the cell average of the triangular indicator.
    Half,
}

impl DiagonalRule {
    pub fn weight(self) -> f64 {
        match self {
            DiagonalRule::Exclude => 0.0,
            DiagonalRule::Half => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DiagonalRule::Exclude => "exclude",
            DiagonalRule::Half => "half",
        }
    }
}

/// Discretization of `(Tf)(t) = φ(t)∫ₜᵇ κ(s)f(s)ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    pub grid: Grid,
    pub kappa: Vec<f64>,
    pub phi: Vec<f64>,
    pub rule: DiagonalRule,
    pub matrix: DenseMatrix,
}

fn triangular(kappa: &[f64], phi: &[f64], lens: &[f64], w: f64) -> DenseMatrix {
    let m = kappa.len();
    let mut a = DenseMatrix::zeros(m, m);
    let roots: Vec<f64> = lens.iter().map(|&l| math::sqrt(l)).collect();
    for i in 0..m {
        let ri = phi[i] * roots[i];
        if w != 0.0 {
            a.set(i, i, w * ri * kappa[i] * roots[i]);
        }
        for j in i + 1..m {
            a.set(i, j, ri * kappa[j] * roots[j]);
        }
    }
    a
}

/// Midpoint Nyström matrix of `T`: entry `(i, j)` is `φ(τ_i)κ(τ_j)√(Δ_iΔ_j)` for
/// `τ_i < τ_j`; the diagonal follows `rule`.
pub fn discretize_t(
    kappa: &dyn Fn(Point) -> f64,
    phi: &dyn Fn(Point) -> f64,
    grid: &Grid,
    rule: DiagonalRule,
) -> Result<KernelOperator> {
    if grid.len() < 2 {
        return Err(Error::DegenerateGrid("need at least 2 cells".into()));
    }
    let kv: Vec<f64> = grid.cells().iter().map(|c| kappa(c.mid)).collect();
    let pv: Vec<f64> = grid.cells().iter().map(|c| phi(c.mid)).collect();
    let lens: Vec<f64> = grid.cells().iter().map(|c| c.len).collect();
    let matrix = triangular(&kv, &pv, &lens, rule.weight());
    if !matrix.is_finite() {
        return Err(Error::Numerical("kernel factors are not finite on the grid".into()));
    }
    Ok(KernelOperator { grid: grid.clone(), kappa: kv, phi: pv, rule, matrix })
}

fn cell_values(h: &HamiltonianSpec, grid: &Grid) -> Result<Vec<Mat2>> {
    if grid.len() < 2 {
        return Err(Error::DegenerateGrid("need at least 2 cells".into()));
    }
    let vals: Vec<Mat2> = grid.cells().iter().map(|c| h.value_at(c.mid)).collect();
    if let Some(k) = vals.iter().position(|m| !m.is_finite()) {
        return Err(Error::Numerical(format!("H is not finite at grid midpoint {}", grid.cells()[k].mid.t)));
    }
    Ok(vals)
}

/// `H^{1/2}` from the eigen-decomposition, with directions below
/// [`NULL_DIRECTION_TOL`] treated as null.
fn cell_root(m: &Mat2) -> Mat2 {
    if m.h3() == 0.0 {
        return Mat2::sym(math::sqrt(m.h1().max(0.0)), math::sqrt(m.h2().max(0.0)), 0.0);
    }
    let eig = sym_eigen(m);
    let top = eig[0].0;
    let mut r = Mat2::ZERO;
    for &(mu, v) in &eig {
        if top > 0.0 && mu > NULL_DIRECTION_TOL * top {
            let s = math::sqrt(mu);
            r = r.add(&Mat2::sym(s * v[0] * v[0], s * v[1] * v[1], s * v[0] * v[1]));
        }
    }
    r
}

/// The `2M × 2M` matrix of `K_H`: block `(i, j)` is
/// `−H^{1/2}(τ_i)·X_{ij}·H^{1/2}(τ_j)·√(Δ_iΔ_j)` with `X_{ij} = [[0, 1],[0, 0]]`
/// for `τ_j < τ_i`, `[[0, 0],[1, 0]]` for `τ_j > τ_i`, and `w·[[0, 1],[1, 0]]` on
/// the diagonal.
///
/// For diagonal `H` the matrix is assembled from `T(√h₁, √h₂)` directly, so the
/// block identity with [`discretize_t`] holds bit for bit.
pub fn discretize_kh(h: &HamiltonianSpec, grid: &Grid, rule: DiagonalRule) -> Result<DenseMatrix> {
    let vals = cell_values(h, grid)?;
    let m = vals.len();
    let w = rule.weight();
    let mut k = DenseMatrix::zeros(2 * m, 2 * m);
    if vals.iter().all(|v| v.h3() == 0.0) {
        let t = diagonal_t(&vals, grid, w);
        for i in 0..m {
            for j in 0..m {
                k.set(2 * i + 1, 2 * j, -t.get(i, j));
                k.set(2 * i, 2 * j + 1, -t.get(j, i));
            }
        }
        return Ok(k);
    }
    let roots: Vec<Mat2> =
        vals.iter().zip(grid.cells()).map(|(v, c)| cell_root(v).scale(math::sqrt(c.len))).collect();
    for i in 0..m {
        let si = roots[i].0;
        for j in 0..m {
            let sj = roots[j].0;
            // S_i X S_j for X = e_r e_cᵀ is (column r of S_i)(row c of S_j)
            let terms: &[(usize, usize, f64)] = if j < i {
                &[(0, 1, 1.0)]
            } else if j > i {
                &[(1, 0, 1.0)]
            } else if w != 0.0 {
                &[(0, 1, w), (1, 0, w)]
            } else {
                &[]
            };
            for &(r, c, f) in terms {
                for x in 0..2 {
                    for y in 0..2 {
                        let v = k.get(2 * i + x, 2 * j + y) - f * si[x][r] * sj[c][y];
                        k.set(2 * i + x, 2 * j + y, v);
                    }
                }
            }
        }
    }
    Ok(k)
}

fn diagonal_t(vals: &[Mat2], grid: &Grid, w: f64) -> DenseMatrix {
    let kv: Vec<f64> = vals.iter().map(|v| math::sqrt(v.h1().max(0.0))).collect();
    let pv: Vec<f64> = vals.iter().map(|v| math::sqrt(v.h2().max(0.0))).collect();
    let lens: Vec<f64> = grid.cells().iter().map(|c| c.len).collect();
    triangular(&kv, &pv, &lens, w)
}

/// `(A + Aᵀ)/2`.
pub fn real_part(a: &DenseMatrix) -> Result<DenseMatrix> {
    if a.rows != a.cols {
        return Err(Error::InvalidArgument(format!("real part needs a square matrix, got {}×{}", a.rows, a.cols)));
    }
    let mut r = DenseMatrix::zeros(a.rows, a.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            r.set(i, j, 0.5 * (a.get(i, j) + a.get(j, i)));
        }
    }
    Ok(r)
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Singular values by one-sided Jacobi (cyclic row-by-row pair order), sorted nonincreasing.
pub fn singular_values(a: &DenseMatrix) -> Result<RealSequence> {
    if !a.is_finite() {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    // columns of A (or of Aᵀ when wide), stored contiguously
    let (len, n, mut cols) = if a.rows >= a.cols {
        (a.rows, a.cols, a.transpose().data)
    } else {
        (a.cols, a.rows, a.data.clone())
    };
    if n == 0 || len == 0 {
        return RealSequence::new(Vec::new());
    }
    let mut norms = vec![0.0; n];
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        for (k, nk) in norms.iter_mut().enumerate() {
            let c = &cols[k * len..(k + 1) * len];
            *nk = dot(c, c);
        }
        let top = norms.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            converged = true;
            break;
        }
        let negligible = f64::EPSILON * f64::EPSILON * top;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                let scale = math::sqrt(alpha * beta);
                if scale <= negligible {
                    continue;
                }
                let (left, right) = cols.split_at_mut(q * len);
                let cp = &mut left[p * len..(p + 1) * len];
                let cq = &mut right[..len];
                let gamma = dot(cp, cq);
                if math::abs(gamma) <= JACOBI_TOL * scale {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (math::abs(zeta) + math::hypot(1.0, zeta));
                let c = 1.0 / math::hypot(1.0, t);
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (u, v) = (*x, *y);
                    *x = c * u - s * v;
                    *y = s * u + c * v;
                }
                norms[p] = alpha - t * gamma;
                norms[q] = beta + t * gamma;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!("Jacobi SVD did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|k| {
            let c = &cols[k * len..(k + 1) * len];
            math::sqrt(dot(c, c))
        })
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    RealSequence::new(sv)
}

/// Singular values of the block-superdiagonal compression `Σ P_n(Re A)P_{n+1}`,
/// where `partition` lists the sizes of consecutive diagonal blocks. The result
/// has the full matrix dimension (trailing zeros included).
pub fn offdiag_block_singulars(a: &DenseMatrix, partition: &[usize]) -> Result<RealSequence> {
    let total: usize = partition.iter().sum();
    if a.rows != a.cols || total != a.rows || partition.iter().any(|&s| s == 0) {
        return Err(Error::PartitionMismatch(format!(
            "partition of {total} indices into {} blocks does not fit a {}×{} matrix",
            partition.len(),
            a.rows,
            a.cols
        )));
    }
    let re = real_part(a)?;
    let mut out = Vec::with_capacity(total);
    let mut start = 0;
    for w in partition.windows(2) {
        let (rs, cs) = (start, start + w[0]);
        let mut block = DenseMatrix::zeros(w[0], w[1]);
        for i in 0..w[0] {
            for j in 0..w[1] {
                block.set(i, j, re.get(rs + i, cs + j));
            }
        }
        out.extend(singular_values(&block)?.into_vec());
        start = cs;
    }
    out.resize(total, 0.0);
    out.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    RealSequence::new(out)
}

/// Eigen-decomposition of a symmetric 2×2 matrix: `[(μ₁, v₁), (μ₂, v₂)]`, `μ₁ ≥ μ₂`.
///
/// The eigenvector is formed from sums of like-signed terms only, so it stays
/// accurate when the diagonal entries differ by hundreds of orders of magnitude.
fn sym_eigen(m: &Mat2) -> [(f64, [f64; 2]); 2] {
    let (a, b, c) = (m.h1(), m.h2(), m.h3());
    if c == 0.0 {
        return if a >= b { [(a, [1.0, 0.0]), (b, [0.0, 1.0])] } else { [(b, [0.0, 1.0]), (a, [1.0, 0.0])] };
    }
    let half = 0.5 * (a - b);
    let r = math::hypot(half, c);
    let mu1 = 0.5 * (a + b) + r;
    // (μ₁ − b, c) when a ≥ b, else (c, μ₁ − a); both differences are sums of nonnegative terms
    let v = if half >= 0.0 { [half + r, c] } else { [c, r - half] };
    let n = math::hypot(v[0], v[1]);
    let v1 = [v[0] / n, v[1] / n];
    let mu2 = if mu1 > 0.0 { (a * b - c * c) / mu1 } else { 0.5 * (a + b) - r };
    [(mu1, v1), (mu2, [-v1[1], v1[0]])]
}

/// Relative eigenvalue level below which a direction of `H(τ_i)` is treated as null.
pub const NULL_DIRECTION_TOL: f64 = 1e-12;

/// Singular values of `discretize_kh(h, grid, rule)`, computed from an equivalent
/// smaller matrix.
///
/// Writing `K_H = −D X D` with `D` block diagonal and `D_i = V_iΛ_iV_iᵀ`, the
/// nonzero singular values of `K_H` are those of `ΛVᵀXVΛ` restricted to the
/// directions with `Λ ≠ 0`; for diagonal `H` they are the singular values of
/// `T(√h₁, √h₂)`, each twice. Directions whose eigenvalue is below
/// [`NULL_DIRECTION_TOL`] times the cell's largest are dropped. The result is
/// padded with zeros to length `2M`.
pub fn kh_singular_values(h: &HamiltonianSpec, grid: &Grid, rule: DiagonalRule) -> Result<RealSequence> {
    let vals = cell_values(h, grid)?;
    let m = vals.len();
    let w = rule.weight();
    let mut out;
    if vals.iter().all(|v| v.h3() == 0.0) {
        let t = diagonal_t(&vals, grid, w);
        out = Vec::with_capacity(2 * m);
        for s in singular_values(&t)?.into_vec() {
            out.push(s);
            out.push(s);
        }
    } else {
        // retained directions: (cell, λ = √(μΔ), eigenvector)
        let mut dirs: Vec<(usize, f64, [f64; 2])> = Vec::with_capacity(2 * m);
        for (i, (v, c)) in vals.iter().zip(grid.cells()).enumerate() {
            let eig = sym_eigen(v);
            let top = eig[0].0;
            for &(mu, vec) in &eig {
                if top > 0.0 && mu > NULL_DIRECTION_TOL * top {
                    dirs.push((i, math::sqrt(mu * c.len), vec));
                }
            }
        }
        let r = dirs.len();
        let mut cm = DenseMatrix::zeros(r, r);
        for (x, &(i, li, vi)) in dirs.iter().enumerate() {
            for (y, &(j, lj, vj)) in dirs.iter().enumerate() {
                let form = if j < i {
                    vi[0] * vj[1]
                } else if j > i {
                    vi[1] * vj[0]
                } else {
                    w * (vi[0] * vj[1] + vi[1] * vj[0])
                };
                cm.set(x, y, -li * lj * form);
            }
        }
        out = singular_values(&cm)?.into_vec();
    }
    out.resize(2 * m, 0.0);
    RealSequence::new(out)
}

/// Outcome of the Independence comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub cells: usize,
    pub fit_range: (usize, usize),
    pub rule: DiagonalRule,
    /// Log-log slope of `σ_n(K_H)` over the fit range.
    pub slope_full: f64,
    /// Log-log slope of `σ_n(K_{diag H})` over the fit range.
    pub slope_diag: f64,
    pub difference: f64,
    pub sigma_full: Vec<f64>,
    pub sigma_diag: Vec<f64>,
}

/// Default grid for [`independence_check`]: 256 logarithmic levels, at least 2 cells each.
pub fn independence_grid(h: &HamiltonianSpec, m: usize) -> Result<Grid> {
    Grid::log_levels(h, 256, m, 2)
}

/// Compares singular-value decay of `K_H` and `K_{diag H}` on the same grid.
pub fn independence_check(
    h: &HamiltonianSpec,
    grid: &Grid,
    fit_range: (usize, usize),
    rule: DiagonalRule,
) -> Result<IndependenceReport> {
    let (lo, hi) = fit_range;
    if lo < 1 || hi <= lo || hi > 2 * grid.len() {
        return Err(Error::InvalidArgument(format!("fit range [{lo}, {hi}] does not fit {} cells", grid.len())));
    }
    let d = h.diag();
    let full = kh_singular_values(h, grid, rule)?.into_vec();
    let diag = if d == *h { full.clone() } else { kh_singular_values(&d, grid, rule)?.into_vec() };
    let slope = |s: &[f64]| {
        loglog_slope(s, lo, hi)
            .map(|f| f.slope)
            .ok_or_else(|| Error::Numerical("singular values vanish on the fit range".into()))
    };
    let (sf, sd) = (slope(&full)?, slope(&diag)?);
    Ok(IndependenceReport {
        cells: grid.len(),
        fit_range,
        rule,
        slope_full: sf,
        slope_diag: sd,
        difference: math::abs(sf - sd),
        sigma_full: full,
        sigma_diag: diag,
    })
}

#[cfg(test)]
mod tests;
