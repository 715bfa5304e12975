//! Hamiltonians `H = [[h₁, h₃], [h₃, h₂]]` on `[a, b)`: evaluation, integrals, transforms, validation.

mod domain;
mod family;
mod table;

pub use domain::{Endpoint, Interval, Point};
pub use family::{Family, Quantity};
pub use table::Table;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::math;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Absolute PSD tolerance on 1×1 minors; 2×2 minors use it relative to `max(1, h₁h₂)`.
pub const PSD_TOL: f64 = 1e-12;

/// Entries `(v₁, v₂, v₃)` of the PSD square root `[[v₁, v₃], [v₃, v₂]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtTriple {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl SqrtTriple {
    pub fn matrix(&self) -> Mat2 {
        Mat2::sym(self.v1, self.v2, self.v3)
    }
}

/// Whether a symmetric matrix is PSD within [`PSD_TOL`].
pub fn is_psd(m: &Mat2) -> bool {
    let (h1, h2, h3) = (m.h1(), m.h2(), m.h3());
    h1 >= -PSD_TOL && h2 >= -PSD_TOL && h1 * h2 - h3 * h3 >= -PSD_TOL * (h1 * h2).max(1.0)
}

/// PSD square root via `H^{1/2} = (H + √det·I)/√(tr + 2√det)`.
pub fn psd_sqrt(m: &Mat2) -> Result<SqrtTriple> {
    if !is_psd(m) {
        return Err(Error::NotPsd(format!(
            "[[{}, {}], [{}, {}]]",
            m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]
        )));
    }
    let (h1, h2, h3) = (m.h1().max(0.0), m.h2().max(0.0), m.h3());
    let s = math::sqrt((h1 * h2 - h3 * h3).max(0.0));
    let tau = h1 + h2 + 2.0 * s;
    if tau <= 0.0 {
        return Ok(SqrtTriple { v1: 0.0, v2: 0.0, v3: 0.0 });
    }
    let r = 1.0 / math::sqrt(tau);
    Ok(SqrtTriple { v1: (h1 + s) * r, v2: (h2 + s) * r, v3: h3 * r })
}

/// How families are sampled into tables: `depth` dyadic levels toward `b`
/// (unit steps of `log 2` in the logarithmic coordinate when `b = ∞`), each split
/// into `per_cell` equal subcells. Cell values are exact cell averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub depth: usize,
    pub per_cell: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { depth: 40, per_cell: 16 }
    }
}

/// Representation of the entries.
#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    /// A built-in family, multiplied by `scale`, with `h₃` dropped when `diagonal`.
    Family { family: Family, scale: f64, diagonal: bool },
    Table(Table),
}

/// A Hamiltonian on `[a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    interval: Interval,
    repr: Repr,
}

/// Outcome of one validation check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// The check is a numerical heuristic rather than an exact statement.
    pub heuristic: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl HamiltonianSpec {
    pub fn from_family(interval: Interval, family: Family) -> Result<Self> {
        family.check(&interval)?;
        Ok(HamiltonianSpec { interval, repr: Repr::Family { family, scale: 1.0, diagonal: false } })
    }

    pub fn from_table(table: Table) -> Self {
        HamiltonianSpec { interval: table.interval(), repr: Repr::Table(table) }
    }

    pub fn constant(interval: Interval, h1: f64, h2: f64, h3: f64) -> Result<Self> {
        Self::from_family(interval, Family::Constant { h1, h2, h3 })
    }

    /// `diag(e^{−t}, 1)` on `[0, ∞)`.
    pub fn diag_exp() -> Self {
        Self::from_family(Interval { a: 0.0, b: Endpoint::Infinite }, Family::DiagExp).unwrap()
    }

    pub fn power_log(alpha: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::from_family(unit_interval(), Family::PowerLog { alpha, alpha1, alpha2 })
    }

    pub fn rank_one_power_log(alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::from_family(unit_interval(), Family::RankOnePowerLog { alpha1, alpha2 })
    }

    pub fn string_rank_one(alpha: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::from_family(unit_interval(), Family::StringRankOne { alpha, alpha1, alpha2 })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn family(&self) -> Option<&Family> {
        match &self.repr {
            Repr::Family { family, .. } => Some(family),
            Repr::Table(_) => None,
        }
    }

    pub fn as_table(&self) -> Option<&Table> {
        match &self.repr {
            Repr::Table(t) => Some(t),
            Repr::Family { .. } => None,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.repr {
            Repr::Family { family, scale, diagonal } => {
                let mut s = format!("{family:?}");
                if *scale != 1.0 {
                    s = format!("{scale} * {s}");
                }
                if *diagonal {
                    s = format!("diag({s})");
                }
                s
            }
            Repr::Table(t) => format!("table with {} cells", t.cells().len()),
        }
    }

    /// Structurally diagonal (`h₃ ≡ 0`).
    pub fn is_diagonal(&self) -> bool {
        match &self.repr {
            Repr::Family { diagonal: true, .. } => true,
            Repr::Family { family, .. } => match family {
                Family::Constant { h3, .. } => *h3 == 0.0,
                Family::DiagExp | Family::PowerLog { .. } => true,
                Family::RankOnePowerLog { .. } | Family::StringRankOne { .. } => false,
            },
            Repr::Table(t) => t.cells().iter().all(|c| c.h3() == 0.0),
        }
    }

    /// `c·H` for a positive constant `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let repr = match &self.repr {
            Repr::Family { family, scale, diagonal } => {
                Repr::Family { family: family.clone(), scale: scale * c, diagonal: *diagonal }
            }
            Repr::Table(t) => Repr::Table(t.map_cells(|m| m.scale(c))),
        };
        HamiltonianSpec { interval: self.interval, repr }
    }

    pub fn point(&self, t: f64) -> Point {
        self.interval.point(t)
    }

    /// `H` at a point (no domain check).
    pub fn value_at(&self, p: Point) -> Mat2 {
        match &self.repr {
            Repr::Family { family, scale, diagonal } => {
                let mut m = family.value(&self.interval, p);
                if *diagonal {
                    m = Mat2::sym(m.h1(), m.h2(), 0.0);
                }
                if *scale != 1.0 {
                    m = m.scale(*scale);
                }
                m
            }
            Repr::Table(t) => t.value(p.t),
        }
    }

    /// `H(t)`; right-continuous at table breakpoints.
    pub fn eval(&self, t: f64) -> Result<Mat2> {
        if !self.interval.contains(t) {
            return Err(Error::OutOfDomain(t));
        }
        Ok(self.value_at(self.point(t)))
    }

    /// `∫_p^r q(H)`, where `r` may be the right endpoint (value possibly infinite).
    pub fn integral(&self, q: Quantity, p: Point, r: Point) -> f64 {
        match &self.repr {
            Repr::Family { family, scale, diagonal } => {
                if *diagonal && q == Quantity::H3 {
                    return 0.0;
                }
                if *diagonal && q == Quantity::SqrtDet {
                    // √(h₁h₂) of the diagonal part: integrate pointwise
                    let iv = self.interval;
                    let f = |u: f64| {
                        let m = family.value(&iv, iv.point_at_u(u));
                        math::sqrt((m.h1() * m.h2()).max(0.0)) * iv.jacobian_u(u)
                    };
                    let (u0, u1) = (iv.u_of(p), iv.u_of(r));
                    let v = if u1 == f64::INFINITY {
                        crate::quad::integrate_to_infinity(f, u0, 1e-12)
                    } else {
                        crate::quad::integrate_unit_pieces(f, u0, u1, 1e-12)
                    };
                    return scale * v;
                }
                let v = family.integral(&self.interval, q, p, r);
                if v == 0.0 {
                    0.0
                } else {
                    scale * v
                }
            }
            Repr::Table(t) => t.integral(q, p, r),
        }
    }

    /// `∫_p^r q(H)·w(s) ds` for a weight `w` evaluated at points, by adaptive quadrature
    /// (per cell for tables, in the logarithmic coordinate for families).
    pub fn weighted_integral(&self, q: Quantity, p: Point, r: Point, w: &dyn Fn(Point) -> f64, rel_tol: f64) -> f64 {
        let iv = self.interval;
        match &self.repr {
            Repr::Table(t) => {
                let bps = t.breakpoints();
                let mut sum = 0.0;
                let i = t.cell_index(p.t);
                for k in i..t.cells().len() {
                    let lo = bps[k].max(p.t);
                    let hi = bps[k + 1].min(r.t);
                    if hi <= lo {
                        break;
                    }
                    let v = q.of(&t.cells()[k]);
                    if v == 0.0 {
                        continue;
                    }
                    if hi == f64::INFINITY {
                        // s = lo + x
                        sum += v * crate::quad::integrate_to_infinity(|x| w(iv.point(lo + x)), 0.0, rel_tol);
                    } else {
                        sum += v * crate::quad::integrate(|s| w(iv.point(s)), lo, hi, rel_tol);
                    }
                }
                sum
            }
            Repr::Family { .. } => {
                let f = |u: f64| {
                    let pt = iv.point_at_u(u);
                    let m = self.value_at(pt);
                    let d = q.of(&m);
                    if d == 0.0 {
                        0.0
                    } else {
                        d * iv.jacobian_u(u) * w(pt)
                    }
                };
                let (u0, u1) = (iv.u_of(p), iv.u_of(r));
                if u1 == f64::INFINITY {
                    crate::quad::integrate_to_infinity(f, u0, rel_tol)
                } else {
                    crate::quad::integrate_unit_pieces(f, u0, u1, rel_tol)
                }
            }
        }
    }

    /// `∫ₐᵇ h₁`.
    pub fn total_h1(&self) -> f64 {
        self.integral(Quantity::H1, self.interval.start(), self.interval.end())
    }

    /// Normalization flag: `∫ₐᵇ h₁ < ∞`.
    pub fn is_normalized(&self) -> bool {
        self.total_h1().is_finite()
    }

    /// Limit-point flag: `∫ₐᵇ tr H = ∞` (analytic for families, heuristic for tables).
    pub fn is_limit_point(&self) -> bool {
        match &self.repr {
            Repr::Family { family, .. } => family.limit_point(&self.interval),
            Repr::Table(t) => {
                let last = t.cells().last().unwrap();
                !self.interval.is_bounded() && last.trace() > 0.0
            }
        }
    }

    /// `∫_p^b h₁` at a point (no precondition check).
    pub fn tail_h1_at(&self, p: Point) -> f64 {
        self.integral(Quantity::H1, p, self.interval.end())
    }

    /// `∫ₜᵇ h₁`.
    pub fn tail_h1(&self, t: f64) -> Result<f64> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized("the integral of h1 over [a, b) is infinite".into()));
        }
        if !(t >= self.interval.a && t <= self.interval.b_value()) {
            return Err(Error::OutOfDomain(t));
        }
        Ok(self.tail_h1_at(self.point(t)))
    }

    /// `∫ₐᵗ q(H)` at a point.
    pub fn head_integral_at(&self, q: Quantity, p: Point) -> f64 {
        self.integral(q, self.interval.start(), p)
    }

    /// `m_j(t) = ∫ₐᵗ h_j`, `j ∈ {1, 2, 3}`.
    pub fn head_integral(&self, j: usize, t: f64) -> Result<f64> {
        let q = Quantity::entry(j)?;
        if !self.interval.contains(t) {
            return Err(Error::OutOfDomain(t));
        }
        Ok(self.head_integral_at(q, self.point(t)))
    }

    /// `∫ₐᶜ √det H`, `c ≤ b` (`c = b` allowed, possibly infinite).
    pub fn det_sqrt_integral(&self, c: f64) -> Result<f64> {
        if !(c >= self.interval.a && c <= self.interval.b_value()) {
            return Err(Error::OutOfDomain(c));
        }
        let r = if c == self.interval.b_value() { self.interval.end() } else { self.point(c) };
        Ok(self.integral(Quantity::SqrtDet, self.interval.start(), r))
    }

    /// The diagonal Hamiltonian `diag(h₁, h₂)`.
    pub fn diag(&self) -> Self {
        if self.is_diagonal() {
            return self.clone();
        }
        let repr = match &self.repr {
            Repr::Family { family, scale, .. } => match *family {
                Family::Constant { h1, h2, .. } => {
                    Repr::Family { family: Family::Constant { h1, h2, h3: 0.0 }, scale: *scale, diagonal: false }
                }
                Family::RankOnePowerLog { alpha1, alpha2 } => Repr::Family {
                    family: Family::PowerLog { alpha: 2.0, alpha1, alpha2 },
                    scale: *scale,
                    diagonal: false,
                },
                _ => Repr::Family { family: family.clone(), scale: *scale, diagonal: true },
            },
            Repr::Table(t) => Repr::Table(t.map_cells(|m| Mat2::sym(m.h1(), m.h2(), 0.0))),
        };
        HamiltonianSpec { interval: self.interval, repr }
    }

    /// `N_α H N_α⁻¹` pointwise. Constant families stay constant; other families are
    /// sampled into tables at the default [`Resolution`] first.
    pub fn rotate(&self, alpha: f64) -> Self {
        let n = Mat2::rotation(alpha);
        let nt = n.transpose();
        let rot = |m: &Mat2| {
            let r = n.mul(m).mul(&nt);
            Mat2::sym(r.0[0][0], r.0[1][1], 0.5 * (r.0[0][1] + r.0[1][0]))
        };
        match &self.repr {
            Repr::Family { family: Family::Constant { .. }, .. } => {
                let m = rot(&self.value_at(self.interval.start()));
                HamiltonianSpec {
                    interval: self.interval,
                    repr: Repr::Family {
                        family: Family::Constant { h1: m.h1(), h2: m.h2(), h3: m.h3() },
                        scale: 1.0,
                        diagonal: false,
                    },
                }
            }
            Repr::Family { .. } => {
                let t = self.to_table(Resolution::default()).expect("default resolution is valid");
                HamiltonianSpec::from_table(t.map_cells(rot))
            }
            Repr::Table(t) => HamiltonianSpec::from_table(t.map_cells(rot)),
        }
    }

    /// `H(t)^{1/2}`.
    pub fn sqrt_at(&self, t: f64) -> Result<SqrtTriple> {
        psd_sqrt(&self.eval(t)?)
    }

    /// Breakpoints used when sampling a family (see [`Resolution`]).
    pub fn sample_breakpoints(&self, res: Resolution) -> Result<Vec<f64>> {
        if res.depth == 0 || res.per_cell == 0 || res.depth > 46 {
            return Err(Error::InvalidArgument(format!(
                "sampling resolution needs 1 <= depth <= 46 and per_cell >= 1, got {res:?}"
            )));
        }
        let iv = self.interval;
        let mut bps = Vec::with_capacity(res.depth * res.per_cell + 1);
        bps.push(iv.a);
        for k in 0..res.depth {
            let (lo, hi) = if iv.is_bounded() {
                (iv.dyadic_point(k as f64).t, iv.dyadic_point((k + 1) as f64).t)
            } else {
                (iv.a + math::exp2(k as f64) - 1.0, iv.a + math::exp2((k + 1) as f64) - 1.0)
            };
            for s in 1..=res.per_cell {
                let t = lo + (hi - lo) * (s as f64) / (res.per_cell as f64);
                if t > *bps.last().unwrap() {
                    bps.push(t);
                }
            }
        }
        Ok(bps)
    }

    /// Lossless sampler: a table on `[a, c)` whose cells carry exact cell averages,
    /// `c` the last sampled breakpoint.
    pub fn to_table(&self, res: Resolution) -> Result<Table> {
        if let Repr::Table(t) = &self.repr {
            return Ok(t.clone());
        }
        let bps = self.sample_breakpoints(res)?;
        let mut cells = Vec::with_capacity(bps.len() - 1);
        for w in bps.windows(2) {
            let (p, q) = (self.point(w[0]), self.point(w[1]));
            let len = w[1] - w[0];
            let avg = |qq: Quantity| self.integral(qq, p, q) / len;
            cells.push(Mat2::sym(avg(Quantity::H1), avg(Quantity::H2), avg(Quantity::H3)));
        }
        Table::new(bps, cells)
    }

    /// Trace normalization `x(t) = ∫ₐᵗ tr H`: returns `H̃` with `tr H̃ = 1` on `[0, ∞)`.
    ///
    /// Tables are transformed exactly (cells with `tr H = 0` are removed). Families other
    /// than constants are sampled at `res` first and continued past the last sampled cell
    /// by an unbounded cell carrying the last normalized value.
    pub fn reparametrize_trace(&self, res: Resolution) -> Result<Self> {
        if !self.is_limit_point() {
            return Err(Error::NotLimitPoint("the integral of tr H over [a, b) is finite".into()));
        }
        let half_line = Interval { a: 0.0, b: Endpoint::Infinite };
        if let Repr::Family { family: Family::Constant { .. }, .. } = &self.repr {
            let m = self.value_at(self.interval.start());
            let tr = m.trace();
            return HamiltonianSpec::constant(half_line, m.h1() / tr, m.h2() / tr, m.h3() / tr);
        }
        let (table, extend) = match &self.repr {
            Repr::Table(t) => (t.clone(), false),
            Repr::Family { .. } => (self.to_table(res)?, true),
        };
        let bps = table.breakpoints();
        let mut xs = Vec::with_capacity(bps.len() + 1);
        let mut cells = Vec::with_capacity(bps.len());
        xs.push(0.0);
        for (k, m) in table.cells().iter().enumerate() {
            let tr = m.trace();
            if tr <= 0.0 {
                continue;
            }
            let len = bps[k + 1] - bps[k];
            let x = *xs.last().unwrap() + tr * len;
            xs.push(x);
            cells.push(m.scale(1.0 / tr));
        }
        if cells.is_empty() {
            return Err(Error::InvalidSpec("trace vanishes identically".into()));
        }
        if extend {
            let last = *cells.last().unwrap();
            xs.push(f64::INFINITY);
            cells.push(last);
        }
        Ok(HamiltonianSpec::from_table(Table::new(xs, cells)?))
    }

    /// Points used for PSD sampling of families: dense near both ends.
    fn psd_samples(&self) -> Vec<Point> {
        let iv = self.interval;
        let mut pts = Vec::new();
        for k in 0..=200 {
            let u = 0.2 * k as f64;
            let p = iv.point_at_u(u);
            if iv.contains(p.t) || (iv.is_bounded() && p.gap > 0.0) {
                pts.push(p);
            }
        }
        pts
    }

    /// Checks PSD, local integrability, limit point and normalization.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        // PSD
        let (psd_ok, psd_detail) = match &self.repr {
            Repr::Table(t) => match t.cells().iter().position(|c| !is_psd(c)) {
                None => (true, format!("all {} cells positive semidefinite", t.cells().len())),
                Some(k) => {
                    let c = t.cells()[k];
                    (
                        false,
                        format!(
                            "cell {k} on [{}, {}) is not positive semidefinite: h1={}, h2={}, h3={}",
                            t.breakpoints()[k],
                            t.breakpoints()[k + 1],
                            c.h1(),
                            c.h2(),
                            c.h3()
                        ),
                    )
                }
            },
            Repr::Family { .. } => {
                let pts = self.psd_samples();
                match pts.iter().find(|p| !is_psd(&self.value_at(**p))) {
                    None => (true, format!("{} samples positive semidefinite", pts.len())),
                    Some(p) => (false, format!("not positive semidefinite at t = {}", p.t)),
                }
            }
        };
        checks.push(Check { name: "psd", passed: psd_ok, heuristic: false, detail: psd_detail });
        // local integrability on [a, c] for c < b, checked on dyadic cells
        let mut integrable = true;
        let mut detail = String::from("finite trace integrals on every sampled cell");
        let iv = self.interval;
        for k in 0..40 {
            let (p, q) = (iv.point_at_u(k as f64 * 0.5), iv.point_at_u((k + 1) as f64 * 0.5));
            let v = self.integral(Quantity::Trace, p, q);
            if !v.is_finite() {
                integrable = false;
                detail = format!("infinite trace integral on [{}, {}]", p.t, q.t);
                break;
            }
        }
        checks.push(Check { name: "local-integrability", passed: integrable, heuristic: true, detail });
        // limit point
        let lp = self.is_limit_point();
        let heuristic = matches!(self.repr, Repr::Table(_));
        checks.push(Check {
            name: "limit-point",
            passed: lp,
            heuristic,
            detail: if lp {
                String::from("integral of tr H diverges at b")
            } else {
                String::from("integral of tr H is finite at b")
            },
        });
        let total = self.total_h1();
        checks.push(Check {
            name: "normalization",
            passed: total.is_finite(),
            heuristic: false,
            detail: format!("integral of h1 over [a, b) = {total}"),
        });
        ValidationReport { checks }
    }
}

fn unit_interval() -> Interval {
    Interval { a: 0.0, b: Endpoint::Finite(1.0) }
}

#[cfg(test)]
mod tests;
