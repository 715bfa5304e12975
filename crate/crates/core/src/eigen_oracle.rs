//! Brute-force spectral oracle: transfer matrices of piecewise-constant
//! resamplings, eigenvalues of the truncated regular problem on `[a, c]`, and
//! counting-function diagnostics.

use crate::error::{Error, Result};
use crate::growth::{conv_exponent, ExponentEstimate, GrowthFunction};
use crate::hamiltonian::{HamiltonianSpec, Point, Repr};
use crate::mat2::Mat2;
use crate::math;
use crate::stats::{classify_series, classify_trend, SeriesAnalysis, TrendAnalysis};
use alloc::format;
use alloc::vec::Vec;

/// Below this determinant the nilpotent limit `I + zℓJH` replaces the closed form.
pub const DET_CUTOFF: f64 = 1e-14;
/// Absolute bisection tolerance for eigenvalues.
pub const BISECTION_TOL: f64 = 1e-10;
/// Largest number of scan points before the window is rejected.
pub const MAX_SCAN_POINTS: usize = 20_000_000;

/// Fundamental solution `W` of `y′ = zJHy` across a stretch of the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub matrix: Mat2,
    pub z: f64,
    pub from: f64,
    pub to: f64,
}

impl TransferMatrix {
    pub fn det(&self) -> f64 {
        self.matrix.det()
    }
}

/// `exp(zℓJH)` for a constant PSD cell.
///
/// Closed form `cos(zℓ√d)·I + sin(zℓ√d)/√d·JH` with `d = det H`, or `I + zℓJH`
/// when `d <` [`DET_CUTOFF`] or `d` is at the rounding level of `h₁h₂`.
pub fn transfer_matrix(h_cell: &Mat2, ell: f64, z: f64) -> TransferMatrix {
    TransferMatrix { matrix: Generator::new(h_cell, ell).exp(z), z, from: 0.0, to: ell }
}

/// Piecewise-constant resampling resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleResolution {
    /// Total number of cells.
    pub cells: usize,
    /// Cells per dyadic level `[b − 2^{−k}(b−a), b − 2^{−k−1}(b−a)]` near a finite `b`.
    pub per_dyadic: usize,
}

impl Default for OracleResolution {
    fn default() -> Self {
        OracleResolution { cells: 2048, per_dyadic: 8 }
    }
}

/// Per-cell data of `exp(zℓJH)`: `JH`, `√det H` (0 for the nilpotent limit) and `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Generator {
    jh: Mat2,
    root_det: f64,
    ell: f64,
}

/// `det H`, with values at the rounding level of `h₁h₂ − h₃²` reported as 0.
fn cell_det(h: &Mat2) -> f64 {
    let d = h.det();
    if d <= 4.0 * f64::EPSILON * math::abs(h.h1() * h.h2()) {
        0.0
    } else {
        d
    }
}

impl Generator {
    fn new(h: &Mat2, ell: f64) -> Self {
        let d = cell_det(h);
        Generator { jh: Mat2::J.mul(h), root_det: if d < DET_CUTOFF { 0.0 } else { math::sqrt(d) }, ell }
    }

    #[inline]
    fn exp(&self, z: f64) -> Mat2 {
        if self.root_det == 0.0 {
            Mat2::IDENTITY.add(&self.jh.scale(z * self.ell))
        } else {
            let (c, sn) = math::cos_sin(z * self.ell * self.root_det);
            Mat2::IDENTITY.scale(c).add(&self.jh.scale(sn / self.root_det))
        }
    }
}

/// A Hamiltonian on `[a, c]` replaced by constant cells `(H_k, ℓ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Resampled {
    pub a: f64,
    pub c: f64,
    cells: Vec<(Mat2, f64)>,
    generators: Vec<Generator>,
}

impl Resampled {
    pub fn new(a: f64, c: f64, cells: Vec<(Mat2, f64)>) -> Self {
        let generators = cells.iter().map(|(h, ell)| Generator::new(h, *ell)).collect();
        Resampled { a, c, cells, generators }
    }

    pub fn cells(&self) -> &[(Mat2, f64)] {
        &self.cells
    }

    /// Ordered product of the cell transfer matrices, later cells on the left.
    pub fn monodromy(&self, z: f64) -> TransferMatrix {
        let mut w = Mat2::IDENTITY;
        if z != 0.0 {
            for g in &self.generators {
                w = g.exp(z).mul(&w);
            }
        }
        TransferMatrix { matrix: w, z, from: self.a, to: self.c }
    }

    /// `(cos β, sin β)·W(c, z)·(0, 1)ᵀ`.
    pub fn char_value(&self, z: f64, beta: f64) -> f64 {
        // only the second column of W is needed: propagate W(0, 1)ᵀ
        let mut y = [0.0, 1.0];
        if z != 0.0 {
            for g in &self.generators {
                y = g.exp(z).apply(y);
            }
        }
        let (cb, sb) = math::cos_sin(beta);
        cb * y[0] + sb * y[1]
    }

    /// `∫ₐᶜ √det H` of the resampled Hamiltonian.
    pub fn det_sqrt_integral(&self) -> f64 {
        self.cells.iter().map(|(h, ell)| math::sqrt(cell_det(h)) * ell).sum()
    }
}

/// Resamples `h` on `[a, c]` at midpoints. Tables keep their own cells and
/// constant families become a single cell; otherwise, for finite `b`, each dyadic
/// level beyond the midpoint of `[a, b)` gets `per_dyadic` cells and the rest go
/// uniformly to `[a, (a+b)/2]`. On a half-line the cells are uniform.
pub fn resample(h: &HamiltonianSpec, c: f64, res: OracleResolution) -> Result<Resampled> {
    resample_at(h, h.point(c), res)
}

/// [`resample`] with the truncation point given with its gap `b − c`, so that
/// truncations closer to `b` than `f64` abscissae resolve remain available.
pub fn resample_at(h: &HamiltonianSpec, c: Point, res: OracleResolution) -> Result<Resampled> {
    let iv = h.interval();
    // a regular right endpoint may itself serve as truncation point when H is piecewise constant
    let piecewise_constant = match h.repr() {
        Repr::Table(_) => true,
        Repr::Family { family, .. } => family.is_constant(),
    };
    let regular_end = iv.is_bounded() && c.gap == 0.0 && piecewise_constant && !h.is_limit_point();
    let inside = c.t > iv.a && if iv.is_bounded() { c.gap > 0.0 || regular_end } else { c.t.is_finite() };
    if !inside {
        return Err(Error::InvalidArgument(format!("truncation point {} must lie inside (a, b)", c.t)));
    }
    if res.cells == 0 || res.per_dyadic == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let mut cells = Vec::new();
    match h.repr() {
        Repr::Table(t) => {
            let bps = t.breakpoints();
            for (k, m) in t.cells().iter().enumerate() {
                let (lo, hi) = (bps[k], bps[k + 1].min(c.t));
                if lo >= c.t {
                    break;
                }
                cells.push((*m, hi - lo));
            }
        }
        Repr::Family { family, .. } if family.is_constant() => {
            cells.push((h.value_at(iv.start()), iv.length(iv.start(), c)));
        }
        Repr::Family { .. } if iv.is_bounded() => {
            let w = iv.width();
            let mut levels = Vec::new();
            let mut k = 1;
            while w * math::exp2(-(k as f64)) > c.gap {
                levels.push(k);
                k += 1;
            }
            let uniform = res.cells.checked_sub(res.per_dyadic * levels.len()).filter(|&u| u > 0).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{} cells cannot resolve {} dyadic levels at {} cells each",
                    res.cells,
                    levels.len(),
                    res.per_dyadic
                ))
            })?;
            // breakpoints as decreasing gaps
            let mut gaps = Vec::with_capacity(res.cells + 1);
            let stop = if levels.is_empty() { c.gap } else { 0.5 * w };
            for s in 0..=uniform {
                gaps.push(w + (stop - w) * s as f64 / uniform as f64);
            }
            for &k in &levels {
                let lo = w * math::exp2(-(k as f64));
                let hi = (0.5 * lo).max(c.gap);
                for s in 1..=res.per_dyadic {
                    gaps.push(lo + (hi - lo) * s as f64 / res.per_dyadic as f64);
                }
            }
            for g in gaps.windows(2) {
                cells.push((h.value_at(iv.point_from_gap(0.5 * (g[0] + g[1]))), g[0] - g[1]));
            }
        }
        Repr::Family { .. } => {
            let n = res.cells;
            let ts: Vec<f64> = (0..=n).map(|s| iv.a + (c.t - iv.a) * s as f64 / n as f64).collect();
            for e in ts.windows(2) {
                cells.push((h.value_at(iv.point(0.5 * (e[0] + e[1]))), e[1] - e[0]));
            }
        }
    }
    if cells.iter().any(|(m, l)| !m.is_finite() || !(l.is_finite() && *l > 0.0)) {
        return Err(Error::Numerical("resampled Hamiltonian is not finite".into()));
    }
    Ok(Resampled::new(iv.a, c.t, cells))
}

/// `W(c, z)` at the default resolution.
pub fn monodromy(h: &HamiltonianSpec, c: f64, z: f64) -> Result<TransferMatrix> {
    Ok(resample(h, c, OracleResolution::default())?.monodromy(z))
}

/// Boundary function whose zeros are the eigenvalues of the problem on `[a, c]`
/// with `(1, 0)y(a) = 0` and angle `β` at `c`.
pub fn char_value(h: &HamiltonianSpec, c: f64, z: f64, beta: f64) -> Result<f64> {
    Ok(resample(h, c, OracleResolution::default())?.char_value(z, beta))
}

/// Eigenvalues of a truncated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub c: f64,
    /// `b − c`.
    pub c_gap: f64,
    pub beta: f64,
    pub window: f64,
    /// Sorted by modulus (ties: negative first).
    pub eigenvalues: Vec<f64>,
    /// `(r, n(r))` at each `|λ_n|`.
    pub counting: Vec<(f64, usize)>,
    /// Regression estimate, when at least 16 eigenvalues were found.
    pub exponent: Option<ExponentEstimate>,
    pub det_sqrt_integral: f64,
    pub scan_step: f64,
    /// Scan points where `|char_value|` dips close to zero without a sign change.
    pub tangencies: Vec<f64>,
}

impl SpectrumEstimate {
    /// `λ_1⁺ < λ_2⁺ < …`.
    pub fn positive(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.eigenvalues.iter().cloned().filter(|&x| x > 0.0).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `|λ_1⁻| < |λ_2⁻| < …`.
    pub fn negative(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.eigenvalues.iter().filter(|&&x| x < 0.0).map(|x| -x).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|x| math::abs(*x)).collect()
    }
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All real zeros of `char_value` in `[−R, R]` at the default resolution.
pub fn eigenvalues(h: &HamiltonianSpec, c: f64, window: f64, beta: f64) -> Result<SpectrumEstimate> {
    eigenvalues_with(h, c, window, beta, OracleResolution::default())
}

/// All real zeros of `char_value` in `[−R, R]`: uniform scan with step
/// `min(π/(4∫√det H + ε), R/10⁴)`, then bisection to [`BISECTION_TOL`].
pub fn eigenvalues_with(
    h: &HamiltonianSpec,
    c: f64,
    window: f64,
    beta: f64,
    res: OracleResolution,
) -> Result<SpectrumEstimate> {
    eigenvalues_at(h, h.point(c), window, beta, res)
}

/// [`eigenvalues_with`] at a truncation point carrying its gap.
pub fn eigenvalues_at(
    h: &HamiltonianSpec,
    c: Point,
    window: f64,
    beta: f64,
    res: OracleResolution,
) -> Result<SpectrumEstimate> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidArgument(format!("window must be positive, got {window}")));
    }
    let rs = resample_at(h, c, res)?;
    let ids = rs.det_sqrt_integral();
    let step = (core::f64::consts::PI / (4.0 * ids + 1e-12)).min(window / 1e4);
    let count = math::ceil(2.0 * window / step);
    if !(step > 0.0) || !(count < MAX_SCAN_POINTS as f64) {
        return Err(Error::WindowTooLarge(format!(
            "scan step {step:.3e} needs {count:.3e} points over [−{window}, {window}]"
        )));
    }
    let n = count as usize;
    let f = |z: f64| rs.char_value(z, beta);
    let zs: Vec<f64> = (0..=n).map(|k| if k == n { window } else { -window + k as f64 * step }).collect();
    let fs: Vec<f64> = zs.iter().map(|&z| f(z)).collect();
    let mut roots = Vec::new();
    let mut tangencies = Vec::new();
    for k in 0..n {
        let (f0, f1) = (fs[k], fs[k + 1]);
        if f0 == 0.0 {
            if zs[k] != 0.0 {
                roots.push(zs[k]);
            }
            continue;
        }
        if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(&f, zs[k], zs[k + 1], f0));
        } else if k > 0 && f1 != 0.0 {
            let fp = fs[k - 1];
            let same = (fp < 0.0) == (f0 < 0.0) && (f0 < 0.0) == (f1 < 0.0);
            if same && math::abs(f0) < 1e-3 * math::abs(fp).max(math::abs(f1)) {
                tangencies.push(zs[k]);
            }
        }
    }
    if fs[n] == 0.0 {
        roots.push(zs[n]);
    }
    roots.sort_by(|x, y| math::abs(*x).total_cmp(&math::abs(*y)).then(x.total_cmp(y)));
    let counting: Vec<(f64, usize)> = roots.iter().enumerate().map(|(k, x)| (math::abs(*x), k + 1)).collect();
    let moduli: Vec<f64> = counting.iter().map(|p| p.0).collect();
    let exponent = if moduli.len() >= 16 { conv_exponent(&moduli).ok() } else { None };
    Ok(SpectrumEstimate {
        c: c.t,
        c_gap: c.gap,
        beta,
        window,
        eigenvalues: roots,
        counting,
        exponent,
        det_sqrt_integral: ids,
        scan_step: step,
        tangencies,
    })
}

/// Left-hand sides of the summability/limsup statements for a given `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthComparison {
    /// Terms `1/g(|λ_n|)`.
    pub terms: Vec<f64>,
    pub series: SeriesAnalysis,
    /// `n/g(|λ_n|)`.
    pub limsup: Vec<f64>,
    pub limsup_trend: TrendAnalysis,
}

/// Counting-function diagnostics of a [`SpectrumEstimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CountingReport {
    pub n_of_r: Vec<(f64, usize)>,
    pub exponent: ExponentEstimate,
    /// Mean of `λ_n⁺/n` over the upper half of the positive eigenvalues.
    pub plus_ratio_mean: Option<f64>,
    /// Mean of `|λ_n⁻|/n` over the upper half of the negative eigenvalues.
    pub minus_ratio_mean: Option<f64>,
    /// `π/∫ₐᶜ√det H`, the Krein–de Branges limit of `λ_n^±/n`; `None` when the
    /// integral vanishes and the ratio check is skipped.
    pub density_limit: Option<f64>,
    pub ratio_check_skipped: bool,
    pub growth: Option<GrowthComparison>,
}

fn tail_ratio_mean(v: &[f64]) -> Option<f64> {
    if v.len() < 2 {
        return None;
    }
    let start = v.len() / 2;
    let tail = &v[start..];
    Some(tail.iter().enumerate().map(|(k, x)| x / (start + k + 1) as f64).sum::<f64>() / tail.len() as f64)
}

pub fn counting_report(est: &SpectrumEstimate, g: Option<&GrowthFunction>) -> Result<CountingReport> {
    let moduli = est.moduli();
    if moduli.len() < 16 {
        return Err(Error::TooShort { need: 16, got: moduli.len() });
    }
    let exponent = conv_exponent(&moduli)?;
    let skipped = !(est.det_sqrt_integral > 1e-300);
    let growth = g.map(|g| {
        let terms: Vec<f64> = moduli.iter().map(|&r| math::exp(-g.ln_eval(r))).collect();
        let limsup: Vec<f64> = terms.iter().enumerate().map(|(k, t)| (k + 1) as f64 * t).collect();
        GrowthComparison { series: classify_series(&terms), limsup_trend: classify_trend(&limsup), terms, limsup }
    });
    Ok(CountingReport {
        n_of_r: est.counting.clone(),
        exponent,
        plus_ratio_mean: tail_ratio_mean(&est.positive()),
        minus_ratio_mean: tail_ratio_mean(&est.negative()),
        density_limit: if skipped { None } else { Some(core::f64::consts::PI / est.det_sqrt_integral) },
        ratio_check_skipped: skipped,
        growth,
    })
}
