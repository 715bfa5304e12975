use super::domain::{Endpoint, Interval, Point};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::math;
use crate::quad;
use alloc::format;

const QUAD_TOL: f64 = 1e-12;

/// Built-in parametric Hamiltonians.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `[[h1, h3], [h3, h2]]` on any interval.
    Constant { h1: f64, h2: f64, h3: f64 },
    /// `diag(e^{−t}, 1)` on `[a, ∞)`.
    DiagExp,
    /// `diag(1, h₂)` on `[0, 1)` with
    /// `h₂(t) = (1/(1−t))^α (1 + log 1/(1−t))^{−α₁} (1 + log⁺ log 1/(1−t))^{−α₂}`.
    PowerLog { alpha: f64, alpha1: f64, alpha2: f64 },
    /// `[[1, −√h₂], [−√h₂, h₂]]` on `[0, 1)`, `h₂` the power-log entry with `α = 2`.
    RankOnePowerLog { alpha1: f64, alpha2: f64 },
    /// `[[1, −m], [−m, m²]]` on `[0, 1)` with `m(t) = ∫₀ᵗ h₂`, `h₂` the power-log entry.
    StringRankOne { alpha: f64, alpha1: f64, alpha2: f64 },
}

/// Scalar quantities derived from `H` that the engines integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    H1,
    H2,
    H3,
    Trace,
    SqrtDet,
}

impl Quantity {
    pub fn of(self, m: &Mat2) -> f64 {
        match self {
            Quantity::H1 => m.h1(),
            Quantity::H2 => m.h2(),
            Quantity::H3 => m.h3(),
            Quantity::Trace => m.trace(),
            Quantity::SqrtDet => math::sqrt(m.det().max(0.0)),
        }
    }

    /// Entry index `j ∈ {1, 2, 3}`.
    pub fn entry(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Quantity::H1),
            2 => Ok(Quantity::H2),
            3 => Ok(Quantity::H3),
            _ => Err(Error::InvalidArgument(format!("entry index must be 1, 2 or 3, got {j}"))),
        }
    }
}

/// `log h₂` of the power-log family at logarithmic coordinate `u = log 1/(1−t)`.
pub(crate) fn power_log_ln_h2(alpha: f64, alpha1: f64, alpha2: f64, u: f64) -> f64 {
    let mut v = alpha * u;
    if alpha1 != 0.0 {
        v -= alpha1 * math::ln1p(u);
    }
    if alpha2 != 0.0 && u > 1.0 {
        v -= alpha2 * math::ln1p(math::ln(u));
    }
    v
}

/// `∫_{u0}^{u1} e^{k u} du`, accurate for small `k` and `u1 = ∞`.
fn exp_integral(k: f64, u0: f64, u1: f64) -> f64 {
    if k == 0.0 {
        return u1 - u0;
    }
    if u1 == f64::INFINITY {
        return if k > 0.0 { f64::INFINITY } else { -math::exp(k * u0) / k };
    }
    math::exp(k * u0) * math::expm1(k * (u1 - u0)) / k
}

/// `∫_{u0}^{u1} (1+u)^{−s} du`.
fn inverse_power_integral(s: f64, u0: f64, u1: f64) -> f64 {
    if s == 1.0 {
        return math::ln1p(u1) - math::ln1p(u0);
    }
    let e = 1.0 - s;
    if u1 == f64::INFINITY {
        return if e > 0.0 { f64::INFINITY } else { -math::pow(1.0 + u0, e) / e };
    }
    (math::pow(1.0 + u1, e) - math::pow(1.0 + u0, e)) / e
}

impl Family {
    /// Contract name used in spec files.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "constant",
            Family::DiagExp => "diag-exp",
            Family::PowerLog { .. } => "power-log",
            Family::RankOnePowerLog { .. } => "rank-one-power-log",
            Family::StringRankOne { .. } => "string-rank-one",
        }
    }

    /// Checks parameters and the interval the family requires.
    pub fn check(&self, iv: &Interval) -> Result<()> {
        let unit = iv.a == 0.0 && iv.b == Endpoint::Finite(1.0);
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            Family::Constant { h1, h2, h3 } => {
                if !finite(&[h1, h2, h3]) {
                    return Err(Error::InvalidSpec("constant entries must be finite".into()));
                }
            }
            Family::DiagExp => {
                if iv.is_bounded() {
                    return Err(Error::InvalidSpec("diag-exp lives on [a, inf)".into()));
                }
            }
            Family::PowerLog { alpha, alpha1, alpha2 } | Family::StringRankOne { alpha, alpha1, alpha2 } => {
                if !finite(&[alpha, alpha1, alpha2]) || alpha <= 1.0 {
                    return Err(Error::InvalidSpec(format!(
                        "{} needs finite parameters with alpha > 1, got alpha = {alpha}",
                        self.name()
                    )));
                }
                if !unit {
                    return Err(Error::InvalidSpec(format!("{} lives on [0, 1)", self.name())));
                }
            }
            Family::RankOnePowerLog { alpha1, alpha2 } => {
                if !finite(&[alpha1, alpha2]) {
                    return Err(Error::InvalidSpec("rank-one-power-log needs finite parameters".into()));
                }
                if !unit {
                    return Err(Error::InvalidSpec("rank-one-power-log lives on [0, 1)".into()));
                }
            }
        }
        Ok(())
    }

    /// Whether the family has a closed-form rotation (it stays a family).
    pub fn is_constant(&self) -> bool {
        matches!(self, Family::Constant { .. })
    }

    /// `m(u) = ∫₀ᵗ h₂` for the string construction, `t = 1 − e^{−u}`.
    fn string_mass(alpha: f64, alpha1: f64, alpha2: f64, u: f64) -> f64 {
        if alpha1 == 0.0 && alpha2 == 0.0 {
            return exp_integral(alpha - 1.0, 0.0, u);
        }
        quad::integrate_unit_pieces(
            |v| math::exp(power_log_ln_h2(alpha, alpha1, alpha2, v) - v),
            0.0,
            u,
            QUAD_TOL,
        )
    }

    /// `H(t)` at `p`.
    pub fn value(&self, iv: &Interval, p: Point) -> Mat2 {
        match *self {
            Family::Constant { h1, h2, h3 } => Mat2::sym(h1, h2, h3),
            Family::DiagExp => Mat2::sym(math::exp(-p.t), 1.0, 0.0),
            Family::PowerLog { alpha, alpha1, alpha2 } => {
                let u = iv.u_of(p);
                Mat2::sym(1.0, math::exp(power_log_ln_h2(alpha, alpha1, alpha2, u)), 0.0)
            }
            Family::RankOnePowerLog { alpha1, alpha2 } => {
                let u = iv.u_of(p);
                let l = power_log_ln_h2(2.0, alpha1, alpha2, u);
                Mat2::sym(1.0, math::exp(l), -math::exp(0.5 * l))
            }
            Family::StringRankOne { alpha, alpha1, alpha2 } => {
                let m = Self::string_mass(alpha, alpha1, alpha2, iv.u_of(p));
                Mat2::sym(1.0, m * m, -m)
            }
        }
    }

    /// `q(H(t))·dt/du` at logarithmic coordinate `u`.
    pub fn density(&self, iv: &Interval, q: Quantity, u: f64) -> f64 {
        match *self {
            Family::PowerLog { alpha, alpha1, alpha2 } => {
                let l = power_log_ln_h2(alpha, alpha1, alpha2, u);
                match q {
                    Quantity::H1 => math::exp(-u),
                    Quantity::H2 => math::exp(l - u),
                    Quantity::H3 => 0.0,
                    Quantity::Trace => math::exp(-u) + math::exp(l - u),
                    Quantity::SqrtDet => math::exp(0.5 * l - u),
                }
            }
            Family::RankOnePowerLog { alpha1, alpha2 } => {
                let l = power_log_ln_h2(2.0, alpha1, alpha2, u);
                match q {
                    Quantity::H1 => math::exp(-u),
                    Quantity::H2 => math::exp(l - u),
                    Quantity::H3 => -math::exp(0.5 * l - u),
                    Quantity::Trace => math::exp(-u) + math::exp(l - u),
                    Quantity::SqrtDet => 0.0,
                }
            }
            _ => {
                let p = iv.point_at_u(u);
                q.of(&self.value(iv, p)) * iv.jacobian_u(u)
            }
        }
    }

    /// `∫_p^r q(H)`; `r` may be the right endpoint, in which case the value may be infinite.
    pub fn integral(&self, iv: &Interval, q: Quantity, p: Point, r: Point) -> f64 {
        let len = iv.length(p, r);
        if len <= 0.0 {
            return 0.0;
        }
        match *self {
            Family::Constant { .. } => {
                let v = q.of(&self.value(iv, p));
                if v == 0.0 {
                    0.0
                } else {
                    v * len
                }
            }
            Family::DiagExp => {
                let e1 = if r.t == f64::INFINITY {
                    math::exp(-p.t)
                } else {
                    -math::exp(-p.t) * math::expm1(-len)
                };
                match q {
                    Quantity::H1 => e1,
                    Quantity::H2 => len,
                    Quantity::H3 => 0.0,
                    Quantity::Trace => e1 + len,
                    Quantity::SqrtDet => {
                        if r.t == f64::INFINITY {
                            2.0 * math::exp(-0.5 * p.t)
                        } else {
                            -2.0 * math::exp(-0.5 * p.t) * math::expm1(-0.5 * len)
                        }
                    }
                }
            }
            Family::PowerLog { alpha, alpha1, alpha2 } => {
                let (u0, u1) = (iv.u_of(p), iv.u_of(r));
                let plain = alpha1 == 0.0 && alpha2 == 0.0;
                match q {
                    Quantity::H1 => len,
                    Quantity::H3 => 0.0,
                    Quantity::H2 if plain => exp_integral(alpha - 1.0, u0, u1),
                    Quantity::SqrtDet if plain => exp_integral(0.5 * alpha - 1.0, u0, u1),
                    Quantity::Trace => len + self.integral(iv, Quantity::H2, p, r),
                    _ => self.quadrature(iv, q, u0, u1),
                }
            }
            Family::RankOnePowerLog { alpha1, alpha2 } => {
                let (u0, u1) = (iv.u_of(p), iv.u_of(r));
                match q {
                    Quantity::H1 => len,
                    Quantity::SqrtDet => 0.0,
                    Quantity::H2 if alpha1 == 0.0 && alpha2 == 0.0 => exp_integral(1.0, u0, u1),
                    Quantity::H3 if alpha2 == 0.0 => -inverse_power_integral(0.5 * alpha1, u0, u1),
                    Quantity::Trace => len + self.integral(iv, Quantity::H2, p, r),
                    _ => self.quadrature(iv, q, u0, u1),
                }
            }
            Family::StringRankOne { .. } => match q {
                Quantity::H1 => len,
                Quantity::SqrtDet => 0.0,
                _ => self.quadrature(iv, q, iv.u_of(p), iv.u_of(r)),
            },
        }
    }

    fn quadrature(&self, iv: &Interval, q: Quantity, u0: f64, u1: f64) -> f64 {
        let f = |u: f64| self.density(iv, q, u);
        if u1 == f64::INFINITY {
            quad::integrate_to_infinity(f, u0, QUAD_TOL)
        } else {
            quad::integrate_unit_pieces(f, u0, u1, QUAD_TOL)
        }
    }

    /// Whether `∫ tr H = ∞` near `b` (analytic for every built-in family).
    pub fn limit_point(&self, iv: &Interval) -> bool {
        match *self {
            Family::Constant { h1, h2, .. } => !iv.is_bounded() && h1 + h2 > 0.0,
            // h₂ ≥ (1−t)^{−α} up to logarithms, α > 1; the string's m² is not integrable either
            Family::DiagExp
            | Family::PowerLog { .. }
            | Family::RankOnePowerLog { .. }
            | Family::StringRankOne { .. } => true,
        }
    }
}
