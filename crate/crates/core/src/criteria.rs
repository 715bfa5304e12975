//! Criterion engines: discreteness, bounded invertibility, summability and
//! limsup distribution of the spectrum, plus the Kac-type evaluator.
//!
//! Every engine reads only `h₁` and `h₂`, so `H` and `diag(H)` always receive
//! the same verdicts. Limits are classified from finite dyadic trajectories;
//! each report carries the raw trajectories.

use crate::dyadic::{self, DyadicProfile};
use crate::error::{Error, Result};
use crate::growth::{limsup_ratio, rearrange_desc, GrowthFunction};
use crate::hamiltonian::{HamiltonianSpec, Point, Quantity};
use crate::math;
use crate::quad::{GL8_NODES, GL8_WEIGHTS};
use crate::stats::{classify_series, classify_trend, SeriesVerdict, Trend};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Continuous,
    Sequential,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Continuous => "continuous",
            Method::Sequential => "sequential",
            Method::Both => "both",
        }
    }
}

/// One method's trajectory with its classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    /// `(t, value)` for the continuous method, `(n, value)` for the sequential one.
    pub trajectory: Vec<(f64, f64)>,
    /// Trend or series class, e.g. `"vanishing"` or `"converges"`.
    pub class: String,
    pub verdict: Verdict,
}

/// Outcome of a criterion engine.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub criterion: &'static str,
    pub verdict: Verdict,
    pub method: Method,
    pub continuous: Option<Evidence>,
    pub sequential: Option<Evidence>,
    /// Whether both methods reached the same verdict (only when `method = Both`).
    pub agreement: Option<bool>,
    /// Secondary classification: for the limsup criterion, whether the limsup vanishes.
    pub vanishing: Option<Verdict>,
    pub depth: usize,
}

impl CriterionReport {
    fn combine(criterion: &'static str, depth: usize, continuous: Evidence, sequential: Evidence) -> Self {
        let agree = continuous.verdict == sequential.verdict;
        CriterionReport {
            criterion,
            verdict: if agree { continuous.verdict } else { Verdict::Inconclusive },
            method: Method::Both,
            continuous: Some(continuous),
            sequential: Some(sequential),
            agreement: Some(agree),
            vanishing: None,
            depth,
        }
    }

    /// The trajectory of the leading method (continuous when present).
    pub fn trajectory(&self) -> &[(f64, f64)] {
        self.continuous.as_ref().or(self.sequential.as_ref()).map_or(&[], |e| &e.trajectory)
    }
}

/// `P(t) = ∫ₜᵇh₁ · ∫ₐᵗh₂ = Ω(t)²`.
pub fn omega_squared_at(h: &HamiltonianSpec, p: Point) -> f64 {
    let tail = h.tail_h1_at(p);
    if tail == 0.0 {
        return 0.0;
    }
    tail * h.head_integral_at(Quantity::H2, p)
}

fn require_normalized(h: &HamiltonianSpec) -> Result<()> {
    if h.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized("the integral of h1 over [a, b) is infinite".into()))
    }
}

fn continuous_trajectory(h: &HamiltonianSpec, prof: &DyadicProfile) -> Vec<(f64, f64)> {
    prof.points[1..].iter().map(|&p| (p.t, omega_squared_at(h, p))).collect()
}

fn indexed(values: &[f64]) -> Vec<(f64, f64)> {
    values.iter().enumerate().map(|(k, &v)| ((k + 1) as f64, v)).collect()
}

fn trend_evidence(trajectory: Vec<(f64, f64)>, decide: fn(Trend) -> Verdict) -> Evidence {
    let values: Vec<f64> = trajectory.iter().map(|p| p.1).collect();
    let trend = classify_trend(&values).trend;
    Evidence { trajectory, class: trend.as_str().to_string(), verdict: decide(trend) }
}

fn vanishing_verdict(t: Trend) -> Verdict {
    match t {
        Trend::Vanishing => Verdict::Holds,
        Trend::Bounded | Trend::Divergent => Verdict::Fails,
        Trend::Inconclusive => Verdict::Inconclusive,
    }
}

fn bounded_verdict(t: Trend) -> Verdict {
    match t {
        Trend::Vanishing | Trend::Bounded => Verdict::Holds,
        Trend::Divergent => Verdict::Fails,
        Trend::Inconclusive => Verdict::Inconclusive,
    }
}

/// Discreteness: `P(t) → 0` as `t → b`, evaluated at `t = c_n`, together with `ω_n² → 0`.
pub fn discreteness(h: &HamiltonianSpec, depth: usize) -> Result<CriterionReport> {
    require_normalized(h)?;
    let prof = dyadic::profile(h, depth)?;
    let cont = trend_evidence(continuous_trajectory(h, &prof), vanishing_verdict);
    let seq = trend_evidence(indexed(&prof.omega_squared()), vanishing_verdict);
    Ok(CriterionReport::combine("discreteness", depth, cont, seq))
}

/// Bounded invertibility: `limsup P(t) < ∞`, together with `sup ω_n < ∞`.
pub fn bounded_invertibility(h: &HamiltonianSpec, depth: usize) -> Result<CriterionReport> {
    require_normalized(h)?;
    let prof = dyadic::profile(h, depth)?;
    let cont = trend_evidence(continuous_trajectory(h, &prof), bounded_verdict);
    let seq = trend_evidence(indexed(&prof.omega), bounded_verdict);
    Ok(CriterionReport::combine("bounded_invertibility", depth, cont, seq))
}

fn series_evidence(trajectory: Vec<(f64, f64)>) -> Evidence {
    let terms: Vec<f64> = trajectory.iter().map(|p| p.1).collect();
    let s = classify_series(&terms).verdict;
    let verdict = match s {
        SeriesVerdict::Converges => Verdict::Holds,
        SeriesVerdict::Diverges => Verdict::Fails,
        SeriesVerdict::Inconclusive => Verdict::Inconclusive,
    };
    Evidence { trajectory, class: s.as_str().to_string(), verdict }
}

/// `1/g(x^{−1/2})` for `x = P(t)` (or `x = ω²`), with `1/g(∞) = 0`.
fn inverse_g_of_root(g: &GrowthFunction, x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    math::exp(-g.ln_eval(1.0 / math::sqrt(x)))
}

/// Summability `Σ 1/g(|λ_n|) < ∞`.
///
/// Continuous method: the integral `∫ 1/g(P(t)^{−1/2}) h₁dt/∫ₜᵇh₁`, split over the
/// dyadic cells; on `J_n` the substitution `∫ₜᵇh₁ = 2^{1−n}e^{−v}∫ₐᵇh₁` turns the
/// measure into `dv` on `[0, log 2]` (8-node Gauss–Legendre per cell). Sequential
/// method: the terms `1/g(ω_n^{−1})`. Both term sequences are classified as series.
pub fn summability(h: &HamiltonianSpec, g: &GrowthFunction, depth: usize) -> Result<CriterionReport> {
    g.require_order_above_one()?;
    require_normalized(h)?;
    let prof = dyadic::profile(h, depth)?;
    let half = 0.5 * math::LN_2;
    let mut cells = Vec::with_capacity(depth);
    for n in 1..=depth {
        let mut sum = 0.0;
        for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
            let v = half * (1.0 + x);
            let u = math::exp2(1.0 - n as f64) * math::exp(-v);
            let p = dyadic::chi(h, u)?;
            sum += w * half * inverse_g_of_root(g, omega_squared_at(h, p));
        }
        cells.push((n as f64, sum));
    }
    let seq: Vec<f64> = prof.omega.iter().map(|&w| inverse_g_of_root(g, w * w)).collect();
    Ok(CriterionReport::combine("summability", depth, series_evidence(cells), series_evidence(indexed(&seq))))
}

/// Limsup distribution: `r_n = n/g(1/ω*_n)`; the verdict is item (i),
/// `limsup r_n < ∞`, and [`CriterionReport::vanishing`] is item (ii), `r_n → 0`.
pub fn limsup_distribution(h: &HamiltonianSpec, g: &GrowthFunction, depth: usize) -> Result<CriterionReport> {
    g.require_order_above_one()?;
    require_normalized(h)?;
    let omega = dyadic::omega_sequence(h, depth)?;
    let lr = limsup_ratio(&rearrange_desc(&omega), g);
    let trend = lr.analysis.trend;
    Ok(CriterionReport {
        criterion: "limsup_distribution",
        verdict: bounded_verdict(trend),
        method: Method::Sequential,
        continuous: None,
        sequential: Some(Evidence {
            trajectory: indexed(&lr.ratios),
            class: trend.as_str().to_string(),
            verdict: bounded_verdict(trend),
        }),
        agreement: None,
        vanishing: Some(vanishing_verdict(trend)),
        depth,
    })
}

/// Relative tolerance of the weighted integrals in [`kac_f`].
pub const KAC_REL_TOL: f64 = 1e-8;

fn kac_product(h: &HamiltonianSpec, p: Point, lambda: f64, swap: bool) -> f64 {
    let (qt, qh) = if swap { (Quantity::H2, Quantity::H1) } else { (Quantity::H1, Quantity::H2) };
    let iv = h.interval();
    if lambda == 0.0 || h.is_diagonal() {
        let tail = h.integral(qt, p, iv.end());
        return if tail == 0.0 { 0.0 } else { tail * h.integral(qh, iv.start(), p) };
    }
    let m3 = |s: Point| h.head_integral_at(Quantity::H3, s);
    let up = |s: Point| math::exp(2.0 * lambda * m3(s));
    let down = |s: Point| math::exp(-2.0 * lambda * m3(s));
    let tail = h.weighted_integral(qt, p, iv.end(), &up, KAC_REL_TOL);
    if tail == 0.0 {
        return 0.0;
    }
    if tail.is_infinite() {
        return f64::INFINITY;
    }
    tail * h.weighted_integral(qh, iv.start(), p, &down, KAC_REL_TOL)
}

/// `F(t, λ) = ∫ₜᵇ h₁e^{2λm₃} · ∫ₐᵗ h₂e^{−2λm₃}` with `m₃(t) = ∫ₐᵗ h₃`.
///
/// `h₁dt` and `h₂dt` transform like measures under a change of variable, so `F`
/// takes the same value at corresponding points of `H` and of its trace
/// reparametrization; it is evaluated in the variable of `h`. May be `+∞`.
pub fn kac_f(h: &HamiltonianSpec, t: f64, lambda: f64) -> Result<f64> {
    if !h.interval().contains(t) {
        return Err(Error::OutOfDomain(t));
    }
    Ok(kac_product(h, h.point(t), lambda, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KacMembership {
    InA,
    InB,
    Neither,
    Inconclusive,
}

impl KacMembership {
    pub fn as_str(self) -> &'static str {
        match self {
            KacMembership::InA => "in A_K+",
            KacMembership::InB => "in B_K+",
            KacMembership::Neither => "neither",
            KacMembership::Inconclusive => "inconclusive",
        }
    }
}

/// Evidence behind a [`KacMembership`].
#[derive(Debug, Clone, PartialEq)]
pub struct KacReport {
    pub membership: KacMembership,
    pub bound: f64,
    /// `(c_n, F(c_n, λ))`.
    pub trajectory: Vec<(f64, f64)>,
    /// `(c_n, F)` with `h₁` and `h₂` swapped.
    pub swapped: Vec<(f64, f64)>,
    pub tail_max: f64,
    pub swapped_tail_max: f64,
}

fn final_third_max(v: &[(f64, f64)]) -> f64 {
    let n = v.len();
    v[n - n / 3..].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
}

/// Membership of `λ` in `A_K⁺` (`limsup F(t, λ) ≤ K/λ²`), or in `B_K⁺` (the same with
/// `h₁`, `h₂` swapped), from the final-third maximum of `F` over the dyadic scales
/// `c_1 … c_depth` of `h`. `A_K⁺` takes precedence when both hold.
pub fn kac_membership(h: &HamiltonianSpec, lambda: f64, k: f64, depth: usize) -> Result<KacReport> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument("λ must be a nonzero real number".into()));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidArgument("K must be positive".into()));
    }
    require_normalized(h)?;
    let pts = dyadic::dyadic_points(h, depth)?;
    let trajectory: Vec<(f64, f64)> = pts[1..].iter().map(|&p| (p.t, kac_product(h, p, lambda, false))).collect();
    let swapped: Vec<(f64, f64)> = pts[1..].iter().map(|&p| (p.t, kac_product(h, p, lambda, true))).collect();
    let bound = k / (lambda * lambda);
    let (ta, tb) = (final_third_max(&trajectory), final_third_max(&swapped));
    let membership = if trajectory.len() < 6 || ta.is_nan() {
        KacMembership::Inconclusive
    } else if ta <= bound {
        KacMembership::InA
    } else if tb <= bound {
        KacMembership::InB
    } else {
        KacMembership::Neither
    };
    Ok(KacReport { membership, bound, trajectory, swapped, tail_max: ta, swapped_tail_max: tb })
}
