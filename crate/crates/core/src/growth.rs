//! Growth functions `g`, the induced Orlicz function `M`, and sequence diagnostics.

use crate::error::{Error, Result};
use crate::math;
use crate::stats::{self, TrendAnalysis};
use alloc::format;
use alloc::vec::Vec;

/// `e^e`, the default lower cutoff of the Lindelöf form.
pub const E_E: f64 = 15.154_262_241_479_259;

/// A comparison function of finite positive order.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthFunction {
    /// `g(r) = r^ρ (log r)^{β₁} (log log r)^{β₂} ⋯` for `r ≥ r₀`, `g(r₀)(r/r₀)^ρ` below.
    Lindelof { rho: f64, betas: Vec<f64>, r0: f64 },
    /// Samples of an increasing function, interpolated linearly in log-log coordinates
    /// (and extrapolated with the end slopes).
    Table { r: Vec<f64>, g: Vec<f64> },
}

/// Iterated logarithms `log r, log log r, …` (`m` of them); `None` if one is not positive.
fn iterated_logs(r: f64, m: usize) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(m);
    let mut x = r;
    for _ in 0..m {
        if x <= 1.0 {
            return None;
        }
        x = math::ln(x);
        out.push(x);
    }
    if m > 0 && x <= 0.0 {
        return None;
    }
    Some(out)
}

/// Lower bound of `r g′(r)/g(r)` on `[r₀, ∞)`: `ρ − Σ_k |β_k| / Π_{j≤k} L_j(r₀)`.
fn lindelof_margin(rho: f64, betas: &[f64], r0: f64) -> Option<f64> {
    let logs = iterated_logs(r0, betas.len())?;
    let mut prod = 1.0;
    let mut m = rho;
    for (b, l) in betas.iter().zip(&logs) {
        prod *= l;
        m -= math::abs(*b) / prod;
    }
    Some(m)
}

impl GrowthFunction {
    /// Lindelöf form; `r0 = None` picks the smallest of `e^e, e^{e^2}, …` making `g` increasing.
    pub fn lindelof(rho: f64, betas: Vec<f64>, r0: Option<f64>) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) || betas.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidGrowth(format!("need finite rho > 0 and finite betas, got rho = {rho}")));
        }
        let r0 = match r0 {
            Some(r0) => {
                match lindelof_margin(rho, &betas, r0) {
                    Some(m) if m > 0.0 && r0.is_finite() => {}
                    _ => {
                        return Err(Error::InvalidGrowth(format!(
                            "g is not increasing from r0 = {r0} (iterated logs must be positive there)"
                        )))
                    }
                }
                r0
            }
            None => {
                let mut l = core::f64::consts::E;
                loop {
                    let r0 = math::exp(l);
                    if !r0.is_finite() {
                        return Err(Error::InvalidGrowth("no admissible cutoff r0".into()));
                    }
                    if matches!(lindelof_margin(rho, &betas, r0), Some(m) if m > 0.5 * rho) {
                        break r0;
                    }
                    l *= 2.0;
                }
            }
        };
        Ok(GrowthFunction::Lindelof { rho, betas, r0 })
    }

    /// `g(r) = r^ρ`.
    pub fn power(rho: f64) -> Result<Self> {
        Self::lindelof(rho, Vec::new(), None)
    }

    pub fn table(r: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if r.len() < 2 || r.len() != g.len() {
            return Err(Error::InvalidGrowth("table needs at least two (r, g) pairs of equal length".into()));
        }
        for k in 0..r.len() {
            if !(r[k] > 0.0 && g[k] > 0.0 && r[k].is_finite() && g[k].is_finite()) {
                return Err(Error::InvalidGrowth(format!("table entries must be positive and finite (index {k})")));
            }
            if k > 0 && !(r[k] > r[k - 1] && g[k] > g[k - 1]) {
                return Err(Error::InvalidGrowth(format!("table must be strictly increasing (index {k})")));
            }
        }
        Ok(GrowthFunction::Table { r, g })
    }

    /// The order `ρ_g`; for tables the log-log slope of the last segment.
    pub fn order(&self) -> f64 {
        match self {
            GrowthFunction::Lindelof { rho, .. } => *rho,
            GrowthFunction::Table { r, g } => {
                let n = r.len();
                (math::ln(g[n - 1]) - math::ln(g[n - 2])) / (math::ln(r[n - 1]) - math::ln(r[n - 2]))
            }
        }
    }

    /// Tables only approximate a C¹ growth function; verdicts using them are approximate.
    pub fn is_approximate(&self) -> bool {
        matches!(self, GrowthFunction::Table { .. })
    }

    /// Engines require `ρ_g > 1`.
    pub fn require_order_above_one(&self) -> Result<()> {
        let rho = self.order();
        if rho > 1.0 {
            Ok(())
        } else {
            Err(Error::UnsupportedOrder(rho))
        }
    }

    /// `log g(r)`.
    pub fn ln_eval(&self, r: f64) -> f64 {
        match self {
            GrowthFunction::Lindelof { rho, betas, r0 } => {
                let lr = math::ln(r);
                if r >= *r0 {
                    let mut v = rho * lr;
                    let mut x = lr;
                    for b in betas {
                        v += b * math::ln(x);
                        x = math::ln(x);
                    }
                    v
                } else {
                    self.ln_eval(*r0) + rho * (lr - math::ln(*r0))
                }
            }
            GrowthFunction::Table { r: rs, g } => {
                let x = math::ln(r);
                let n = rs.len();
                let k = rs.partition_point(|&s| s <= r).clamp(1, n - 1);
                let (x0, x1) = (math::ln(rs[k - 1]), math::ln(rs[k]));
                let (y0, y1) = (math::ln(g[k - 1]), math::ln(g[k]));
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// `g(r)` for `r > 0`.
    pub fn eval(&self, r: f64) -> f64 {
        if r == f64::INFINITY {
            return f64::INFINITY;
        }
        if r <= 0.0 {
            return 0.0;
        }
        math::exp(self.ln_eval(r))
    }

    /// `r` with `|g(r) − y|/y ≤ 1e-12`, by bisection in `log r`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Range(y));
        }
        let ly = math::ln(y);
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        let mut guard = 0;
        while self.ln_eval(math::exp(lo)) > ly {
            lo *= 2.0;
            guard += 1;
            if guard > 12 {
                return Err(Error::Range(y));
            }
        }
        guard = 0;
        while self.ln_eval(math::exp(hi)) < ly {
            hi *= 2.0;
            guard += 1;
            if guard > 12 || !math::exp(hi).is_finite() {
                return Err(Error::Range(y));
            }
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            let v = self.ln_eval(math::exp(mid));
            // |g − y|/y ≈ |log g − log y| for small differences
            if math::abs(v - ly) <= 1e-13 {
                return Ok(math::exp(mid));
            }
            if v < ly {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-16 * (1.0 + math::abs(mid)) {
                break;
            }
        }
        Ok(math::exp(0.5 * (lo + hi)))
    }

    /// Orlicz function `M(t) = 1/g̃(1/t)` with `g̃ = g/g(1)`, so that `M(1) = 1`.
    pub fn orlicz_m(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        math::exp(self.ln_eval(1.0) - self.ln_eval(1.0 / t))
    }
}

/// A finite sequence with index origin 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence(Vec<f64>);

impl RealSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan() || v.is_infinite()) {
            return Err(Error::InvalidArgument("sequence entries must be finite".into()));
        }
        Ok(RealSequence(values))
    }

    /// The `n`-th term, `n ≥ 1`.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|k| self.0.get(k).copied())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Nonincreasing rearrangement of the absolute values.
pub fn rearrange_desc(s: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = s.iter().map(|x| math::abs(*x)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Regression estimate of the convergence exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentEstimate {
    /// Slope of `log n` against `log |λ_n|` over the top half.
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub points: usize,
}

/// Convergence exponent from `|λ_n|` sorted ascending (length ≥ 16).
pub fn conv_exponent(s: &[f64]) -> Result<ExponentEstimate> {
    if s.len() < 16 {
        return Err(Error::TooShort { need: 16, got: s.len() });
    }
    if s.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("convergence exponent needs positive finite entries".into()));
    }
    let n = s.len();
    let start = n / 2;
    let xs: Vec<f64> = s[start..].iter().map(|v| math::ln(*v)).collect();
    let ys: Vec<f64> = (start + 1..=n).map(|k| math::ln(k as f64)).collect();
    let fit = stats::linear_fit(&xs, &ys)
        .ok_or_else(|| Error::Numerical("degenerate sequence: all top-half values equal".into()))?;
    Ok(ExponentEstimate { slope: fit.slope, intercept: fit.intercept, residual: fit.residual, points: n - start })
}

/// `r_n = n/g(1/ω*_n)` with its final-third behaviour.
#[derive(Debug, Clone, PartialEq)]
pub struct LimsupRatio {
    pub ratios: Vec<f64>,
    /// Running maximum over the final third.
    pub tail_max: f64,
    pub analysis: TrendAnalysis,
}

pub fn limsup_ratio(omega_star: &[f64], g: &GrowthFunction) -> LimsupRatio {
    let ratios: Vec<f64> = omega_star
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let n = (k + 1) as f64;
            if w <= 0.0 {
                0.0
            } else {
                n * math::exp(-g.ln_eval(1.0 / w))
            }
        })
        .collect();
    let analysis = stats::classify_trend(&ratios);
    LimsupRatio { tail_max: analysis.tail_max, ratios, analysis }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Trend;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        let g2 = GrowthFunction::power(2.0).unwrap();
        assert!((g2.eval(10.0) - 100.0).abs() < 1e-10);
        let g = GrowthFunction::lindelof(2.0, vec![-1.0], Some(core::f64::consts::E)).unwrap();
        let e = core::f64::consts::E;
        assert!((g.eval(e * e) - e.powi(4) / 2.0).abs() < 1e-12 * e.powi(4));
    }

    #[test]
    fn table_round_trip() {
        let g = GrowthFunction::lindelof(2.0, vec![1.0], None).unwrap();
        let rs: Vec<f64> = (0..400).map(|k| 20.0 * 1.05f64.powi(k)).collect();
        let gs: Vec<f64> = rs.iter().map(|r| g.eval(*r)).collect();
        let t = GrowthFunction::table(rs.clone(), gs.clone()).unwrap();
        for (r, v) in rs.iter().zip(&gs) {
            assert!((t.eval(*r) - v).abs() <= 1e-10 * v);
        }
        assert!(t.is_approximate());
    }

    #[test]
    fn inverse_examples() {
        let g2 = GrowthFunction::power(2.0).unwrap();
        assert!((g2.inverse(100.0).unwrap() - 10.0).abs() < 1e-10);
        let g3 = GrowthFunction::power(3.0).unwrap();
        let pi8 = 1.0 / g3.inverse(8.0).unwrap();
        assert!((pi8 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn orlicz_examples() {
        let g2 = GrowthFunction::power(2.0).unwrap();
        assert!((g2.orlicz_m(0.5) - 0.25).abs() < 1e-14);
        assert!((g2.orlicz_m(1.0) - 1.0).abs() < 1e-14);
        let g = GrowthFunction::lindelof(1.5, vec![2.0, -1.0], None).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..400 {
            let t = 10f64.powf(-(k as f64) * 0.05);
            worst = worst.max(g.orlicz_m(2.0 * t.min(0.5)) / g.orlicz_m(t.min(0.5)));
        }
        assert!(worst.is_finite() && worst < 2f64.powf(1.5) * 4.0);
    }

    #[test]
    fn order_checks() {
        // finite-difference slope of log g vs log r at 1e6 and r g'/g at 1e8
        let g = GrowthFunction::lindelof(2.0, vec![-1.0, 2.0], None).unwrap();
        let h = 1e-4;
        let slope = |r: f64| (g.ln_eval(r * (1.0 + h)) - g.ln_eval(r * (1.0 - h))) / ((1.0 + h).ln() - (1.0 - h).ln());
        assert!((slope(1e6) - 2.0).abs() < 0.1);
        let plain = GrowthFunction::power(2.5).unwrap();
        let s = (plain.ln_eval(1e8 * 1.001) - plain.ln_eval(1e8)) / 1.001f64.ln();
        assert!((s - 2.5).abs() < 1e-3);
        assert!(GrowthFunction::power(1.0).unwrap().require_order_above_one().is_err());
        assert!(GrowthFunction::power(0.0).is_err());
        assert!(GrowthFunction::table(vec![1.0, 2.0], vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(rearrange_desc(&[1.0, 3.0, 2.0]), vec![3.0, 2.0, 1.0]);
        assert_eq!(rearrange_desc(&[-5.0, 0.0, 5.0]), vec![5.0, 5.0, 0.0]);
        assert_eq!(rearrange_desc(&[4.0, 2.0, 2.0, 0.0]), vec![4.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn exponent_examples() {
        let lin: Vec<f64> = (1..=256).map(|n| n as f64).collect();
        assert!((conv_exponent(&lin).unwrap().slope - 1.0).abs() < 0.01);
        let sq: Vec<f64> = (1..=256).map(|n| (n as f64).sqrt()).collect();
        assert!((conv_exponent(&sq).unwrap().slope - 2.0).abs() < 0.02);
        let slow: Vec<f64> = (64..=4096).map(|n| ((n as f64) * (n as f64).ln()).sqrt()).collect();
        let e = conv_exponent(&slow).unwrap().slope;
        assert!((1.7..=2.0).contains(&e), "{e}");
        for rho in [0.5, 1.0, 2.0, 4.0] {
            let s: Vec<f64> = (1..=4096).map(|n| (n as f64).powf(1.0 / rho)).collect();
            assert!((conv_exponent(&s).unwrap().slope - rho).abs() < 0.02 * rho);
        }
        assert!(matches!(conv_exponent(&lin[..10]), Err(Error::TooShort { .. })));
    }

    #[test]
    fn limsup_examples() {
        let w: Vec<f64> = (1..=40).map(|n| (n as f64).powf(-0.5)).collect();
        let g2 = GrowthFunction::power(2.0).unwrap();
        let g3 = GrowthFunction::power(3.0).unwrap();
        let r = limsup_ratio(&w, &g2);
        assert!(r.ratios.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert_eq!(r.analysis.trend, Trend::Bounded);
        assert_eq!(limsup_ratio(&w, &g3).analysis.trend, Trend::Vanishing);
        let geo: Vec<f64> = (1..=40).map(|n| 2f64.powf(-(n as f64) / 2.0) * 2f64.ln().sqrt()).collect();
        let r = limsup_ratio(&geo, &g2);
        for (k, v) in r.ratios.iter().enumerate() {
            let n = (k + 1) as f64;
            let exact = n * 2f64.ln() * 2f64.powf(-n);
            assert!((v - exact).abs() < 1e-12 * exact.max(1e-300) + 1e-300);
        }
        assert_eq!(r.analysis.trend, Trend::Vanishing);
    }

    proptest! {
        #[test]
        fn inverse_round_trip(lr in 2.72f64..27.6, rho in 1.1f64..4.0, b in -2.0f64..2.0) {
            let g = GrowthFunction::lindelof(rho, vec![b], None).unwrap();
            let r = lr.exp();
            if let GrowthFunction::Lindelof { r0, .. } = &g { prop_assume!(r >= *r0); }
            let back = g.inverse(g.eval(r)).unwrap();
            prop_assert!((back - r).abs() <= 1e-10 * r);
        }

        #[test]
        fn orlicz_monotone(t1 in 1e-6f64..1.0, t2 in 1e-6f64..1.0) {
            let g = GrowthFunction::lindelof(2.0, vec![-1.0], None).unwrap();
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(g.orlicz_m(lo) <= g.orlicz_m(hi));
        }

        #[test]
        fn rearrange_idempotent(v in proptest::collection::vec(-1e6f64..1e6, 0..50), seed in 0usize..1000) {
            let once = rearrange_desc(&v);
            prop_assert_eq!(rearrange_desc(&once), once.clone());
            let mut perm = v.clone();
            if !perm.is_empty() { let k = seed % perm.len(); perm.rotate_left(k); perm.reverse(); }
            prop_assert_eq!(rearrange_desc(&perm), once);
        }
    }
}
