//! Small statistics used to grade finite trajectories: log-log regression, trend and
//! series-convergence classification.

use crate::math;
use alloc::vec::Vec;

/// Least-squares line `y ≈ slope·x + intercept` with RMS residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum();
    Some(LinearFit { slope, intercept, residual: math::sqrt(ss / nf) })
}

/// Slope of `log v_n` against `log n` over the (1-based) index range `[lo, hi]`,
/// using only positive finite entries.
pub fn loglog_slope(values: &[f64], lo: usize, hi: usize) -> Option<LinearFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in lo.max(1)..=hi.min(values.len()) {
        let v = values[n - 1];
        if v > 0.0 && v.is_finite() {
            xs.push(math::ln(n as f64));
            ys.push(math::ln(v));
        }
    }
    linear_fit(&xs, &ys)
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Qualitative behaviour of a trajectory as `n → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Bounded,
    Vanishing,
    Divergent,
    Inconclusive,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Bounded => "bounded",
            Trend::Vanishing => "vanishing",
            Trend::Divergent => "divergent",
            Trend::Inconclusive => "inconclusive",
        }
    }

    /// Bounded in the wide sense (bounded or tending to zero).
    pub fn is_bounded(self) -> bool {
        matches!(self, Trend::Bounded | Trend::Vanishing)
    }
}

/// Evidence behind a [`Trend`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendAnalysis {
    pub trend: Trend,
    /// Maximum over the whole trajectory.
    pub peak: f64,
    /// Maximum over the final third (the running maximum of the window).
    pub tail_max: f64,
    pub tail_median: f64,
    /// Slope of `log v_n` vs `log n` over the final third.
    pub tail_slope: f64,
}

/// Slope threshold separating flat tails from decaying/growing ones.
pub const TREND_SLOPE: f64 = 0.1;

/// Classifies a trajectory `v_1, …, v_N` from its final third.
///
/// * vanishing: the final-third maximum is at most a tenth of the overall peak, or the
///   final third decays with log-log slope `≤ −0.1`;
/// * divergent: non-finite values, or log-log slope `≥ +0.1`;
/// * bounded: flat tail staying within `[1/4, 4]×` its median;
/// * otherwise inconclusive (also for fewer than 6 points).
pub fn classify_trend(values: &[f64]) -> TrendAnalysis {
    let n = values.len();
    let mut out = TrendAnalysis {
        trend: Trend::Inconclusive,
        peak: f64::NAN,
        tail_max: f64::NAN,
        tail_median: f64::NAN,
        tail_slope: f64::NAN,
    };
    if n < 6 {
        return out;
    }
    let start = n - n / 3;
    let tail = &values[start..];
    out.peak = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    out.tail_max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    out.tail_median = median(tail);
    if tail.iter().any(|v| v.is_nan()) {
        return out;
    }
    if tail.iter().any(|v| v.is_infinite()) {
        out.trend = Trend::Divergent;
        return out;
    }
    if out.tail_max <= 0.0 {
        out.trend = Trend::Vanishing;
        return out;
    }
    let fit = loglog_slope(values, start + 1, n);
    out.tail_slope = fit.map(|f| f.slope).unwrap_or(f64::NAN);
    let s = out.tail_slope;
    out.trend = if out.tail_max <= 0.1 * out.peak || s <= -TREND_SLOPE {
        Trend::Vanishing
    } else if s >= TREND_SLOPE {
        Trend::Divergent
    } else if tail.iter().all(|&v| v >= 0.25 * out.tail_median && v <= 4.0 * out.tail_median) {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    };
    out
}

/// Convergence verdict for a series of nonnegative terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVerdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl SeriesVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesVerdict::Converges => "converges",
            SeriesVerdict::Diverges => "diverges",
            SeriesVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesAnalysis {
    pub verdict: SeriesVerdict,
    /// Tail decay exponent: `a_n ≈ n^{−p}`.
    pub p_hat: f64,
    /// Logarithmic exponent `a_n ≈ 1/(n (log n)^q)`, when the first stage was undecided.
    pub q_hat: Option<f64>,
    pub partial_sums: Vec<f64>,
}

const SERIES_HI: f64 = 1.25;
const SERIES_LO: f64 = 0.75;

/// Classifies `Σ a_n` from the tail of its terms.
///
/// First `p̂ = −slope(log a_n vs log n)` over the final half: converges if `p̂ ≥ 1.25`,
/// diverges if `p̂ ≤ 0.75`. Otherwise the Bertrand-type exponent
/// `q̂ = −slope(log(n a_n) vs log log n)` decides with the same thresholds.
pub fn classify_series(terms: &[f64]) -> SeriesAnalysis {
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut s = 0.0;
    for &a in terms {
        s += a;
        partial_sums.push(s);
    }
    let mut out = SeriesAnalysis { verdict: SeriesVerdict::Inconclusive, p_hat: f64::NAN, q_hat: None, partial_sums };
    let n = terms.len();
    if n < 8 {
        return out;
    }
    let start = (n / 2).max(3);
    let tail = &terms[start..];
    if tail.iter().any(|a| !a.is_finite()) {
        out.verdict = SeriesVerdict::Diverges;
        return out;
    }
    if tail.iter().all(|&a| a == 0.0) {
        out.verdict = SeriesVerdict::Converges;
        out.p_hat = f64::INFINITY;
        return out;
    }
    let Some(fit) = loglog_slope(terms, start + 1, n) else {
        return out;
    };
    out.p_hat = -fit.slope;
    if out.p_hat >= SERIES_HI {
        out.verdict = SeriesVerdict::Converges;
        return out;
    }
    if out.p_hat <= SERIES_LO {
        out.verdict = SeriesVerdict::Diverges;
        return out;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in start + 1..=n {
        let a = terms[k - 1];
        if a > 0.0 {
            let kf = k as f64;
            xs.push(math::ln(math::ln(kf)));
            ys.push(math::ln(kf * a));
        }
    }
    if let Some(f2) = linear_fit(&xs, &ys) {
        let q = -f2.slope;
        out.q_hat = Some(q);
        out.verdict = if q >= SERIES_HI {
            SeriesVerdict::Converges
        } else if q <= SERIES_LO {
            SeriesVerdict::Diverges
        } else {
            SeriesVerdict::Inconclusive
        };
    }
    out
}
