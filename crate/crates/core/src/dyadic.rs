//! Dyadic discretization: points `c_n` halving the tail mass of `h₁`, cells
//! `J_n = (c_{n−1}, c_n)`, weights `ω_n`, and the right inverse `χ`.

use crate::error::{Error, Result};
use crate::hamiltonian::{Family, HamiltonianSpec, Point, Quantity, Repr};
use crate::math;
use alloc::format;
use alloc::vec::Vec;

/// Default depth `N`.
pub const DEFAULT_DEPTH: usize = 40;

/// The dyadic profile of a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicProfile {
    pub depth: usize,
    /// `c_0 = a < c_1 < … < c_N`.
    pub points: Vec<Point>,
    /// `ω_1 … ω_N` including the factor `‖κ‖ = (∫ₐᵇ h₁)^{1/2}`.
    pub omega: Vec<f64>,
    /// `∫_{J_n} h₂`, `n = 1..N`.
    pub cell_h2: Vec<f64>,
    /// `‖κ‖² = ∫ₐᵇ h₁`.
    pub total: f64,
}

impl DyadicProfile {
    /// `c_n` as plain abscissae.
    pub fn c_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    /// Nonincreasing rearrangement `ω*`.
    pub fn omega_star(&self) -> Vec<f64> {
        crate::growth::rearrange_desc(&self.omega)
    }

    /// `ω_n²`.
    pub fn omega_squared(&self) -> Vec<f64> {
        self.omega.iter().map(|w| w * w).collect()
    }
}

fn require_normalized(h: &HamiltonianSpec) -> Result<f64> {
    let total = h.total_h1();
    if !total.is_finite() {
        return Err(Error::NotNormalized("the integral of h1 over [a, b) is infinite".into()));
    }
    if !(total > 0.0) {
        return Err(Error::DegenerateTail("h1 vanishes identically".into()));
    }
    Ok(total)
}

/// Infimum of `{t : ∫ₜᵇ h₁ = fraction·∫ₐᵇ h₁}` for `fraction ∈ (0, 1]`.
fn solve_tail(h: &HamiltonianSpec, fraction: f64, total: f64) -> Result<Point> {
    let iv = h.interval();
    if fraction >= 1.0 {
        return Ok(iv.start());
    }
    match h.repr() {
        Repr::Family { family, scale, .. } => match *family {
            Family::Constant { h1, .. } => {
                if h1 <= 0.0 || !iv.is_bounded() {
                    return Err(Error::DegenerateTail("constant h1 gives no dyadic profile".into()));
                }
                Ok(iv.point_from_gap(iv.width() * fraction))
            }
            // h₁ = 1 on [0, 1): the tail is the gap
            Family::PowerLog { .. } | Family::RankOnePowerLog { .. } | Family::StringRankOne { .. } => {
                Ok(iv.point_from_gap(iv.width() * fraction))
            }
            // tail = e^{−t}
            Family::DiagExp => {
                let _ = scale;
                Ok(iv.point(iv.a - math::ln(fraction)))
            }
        },
        Repr::Table(t) => {
            let bps = t.breakpoints();
            let cells = t.cells();
            let n = cells.len();
            // suffix[k] = ∫_{t_k}^b h₁
            let mut suffix = alloc::vec![0.0; n + 1];
            for k in (0..n).rev() {
                let len = bps[k + 1] - bps[k];
                let v = cells[k].h1();
                suffix[k] = suffix[k + 1] + if v == 0.0 { 0.0 } else { v * len };
            }
            if cells[n - 1].h1() <= 0.0 {
                return Err(Error::DegenerateTail(format!(
                    "h1 vanishes on the terminal cell [{}, {})",
                    bps[n - 1],
                    bps[n]
                )));
            }
            let target = fraction * total;
            // leftmost cell whose right-end tail is ≤ target
            let k = suffix[1..].partition_point(|&s| s > target);
            let v = cells[k].h1();
            let t = if v > 0.0 { bps[k] + (suffix[k] - target) / v } else { bps[k] };
            Ok(iv.point(t.min(bps[k + 1])))
        }
    }
}

/// `c_0, …, c_N` with `∫_{c_n}^b h₁ = 2^{−n} ∫ₐᵇ h₁`.
pub fn dyadic_points(h: &HamiltonianSpec, depth: usize) -> Result<Vec<Point>> {
    let total = require_normalized(h)?;
    let mut pts = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let p = solve_tail(h, math::exp2(-(n as f64)), total)?;
        if let Some(prev) = pts.last() {
            let prev: &Point = prev;
            if !(h.interval().length(*prev, p) > 0.0) {
                return Err(Error::DegenerateTail(format!(
                    "dyadic points stop increasing at n = {n}; depth exceeds the resolution of the representation"
                )));
            }
        }
        pts.push(p);
    }
    Ok(pts)
}

/// Full profile `(c_n, ω_n)`.
pub fn profile(h: &HamiltonianSpec, depth: usize) -> Result<DyadicProfile> {
    let total = require_normalized(h)?;
    let points = dyadic_points(h, depth)?;
    let mut omega = Vec::with_capacity(depth);
    let mut cell_h2 = Vec::with_capacity(depth);
    let sk = math::sqrt(total);
    for n in 1..=depth {
        let m2 = h.integral(Quantity::H2, points[n - 1], points[n]);
        cell_h2.push(m2);
        omega.push(sk * math::exp2(-(n as f64) / 2.0) * math::sqrt(m2.max(0.0)));
    }
    Ok(DyadicProfile { depth, points, omega, cell_h2, total })
}

/// `ω_n = ‖κ‖·2^{−n/2}(∫_{J_n} h₂)^{1/2}`.
pub fn omega_sequence(h: &HamiltonianSpec, depth: usize) -> Result<Vec<f64>> {
    Ok(profile(h, depth)?.omega)
}

/// The right inverse `χ(u)`: the infimum of `{t : ∫ₜᵇ h₁ = u ∫ₐᵇ h₁}`.
pub fn chi(h: &HamiltonianSpec, u: f64) -> Result<Point> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("chi needs u in [0, 1], got {u}")));
    }
    let total = require_normalized(h)?;
    if u == 0.0 {
        return Ok(match h.repr() {
            Repr::Table(t) => {
                // left edge of a terminal region where h₁ vanishes
                let cells = t.cells();
                let mut k = cells.len();
                while k > 0 && cells[k - 1].h1() <= 0.0 {
                    k -= 1;
                }
                h.point(t.breakpoints()[k])
            }
            _ => h.interval().end(),
        });
    }
    solve_tail(h, u, total)
}

/// The weights in the normalization without `‖κ‖`:
/// `2^{−n/2}(∫_{χ(2^{1−n})}^{χ(2^{−n})} h₂)^{1/2}`.
pub fn omega_unscaled(h: &HamiltonianSpec, depth: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(depth);
    let mut left = chi(h, 1.0)?;
    for n in 1..=depth {
        let right = chi(h, math::exp2(-(n as f64)))?;
        let m2 = h.integral(Quantity::H2, left, right);
        out.push(math::exp2(-(n as f64) / 2.0) * math::sqrt(m2.max(0.0)));
        left = right;
    }
    Ok(out)
}
