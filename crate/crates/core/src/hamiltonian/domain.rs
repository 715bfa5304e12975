use crate::error::{Error, Result};
use crate::math;
use alloc::format;

/// Right endpoint of the interval `[a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Finite(f64),
    Infinite,
}

/// The interval `[a, b)` on which a Hamiltonian lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: Endpoint,
}

/// A point of `[a, b]` together with its distance `gap = b − t` to the right endpoint.
///
/// Carrying the gap separately keeps points near a finite singular endpoint
/// distinguishable long after `t` itself has rounded to `b`: dyadic profiles
/// several hundred levels deep are representable this way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: f64,
    /// `b − t`; `+∞` when `b = +∞`.
    pub gap: f64,
}

impl Interval {
    pub fn new(a: f64, b: Endpoint) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidSpec(format!("left endpoint {a} is not finite")));
        }
        if let Endpoint::Finite(b) = b {
            if !(b.is_finite() && b > a) {
                return Err(Error::InvalidSpec(format!("need a < b, got a = {a}, b = {b}")));
            }
        }
        Ok(Interval { a, b })
    }

    pub fn finite(a: f64, b: f64) -> Result<Self> {
        Self::new(a, Endpoint::Finite(b))
    }

    pub fn half_line(a: f64) -> Result<Self> {
        Self::new(a, Endpoint::Infinite)
    }

    pub fn b_value(&self) -> f64 {
        match self.b {
            Endpoint::Finite(b) => b,
            Endpoint::Infinite => f64::INFINITY,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.b, Endpoint::Finite(_))
    }

    /// `b − a` (possibly infinite).
    pub fn width(&self) -> f64 {
        self.b_value() - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.a && t < self.b_value()
    }

    pub fn point(&self, t: f64) -> Point {
        Point { t, gap: self.b_value() - t }
    }

    /// The point at distance `gap` from a finite right endpoint.
    pub fn point_from_gap(&self, gap: f64) -> Point {
        match self.b {
            Endpoint::Finite(b) => Point { t: b - gap, gap },
            Endpoint::Infinite => Point { t: f64::INFINITY, gap },
        }
    }

    pub fn start(&self) -> Point {
        self.point(self.a)
    }

    pub fn end(&self) -> Point {
        Point { t: self.b_value(), gap: 0.0 }
    }

    pub fn is_end(&self, p: Point) -> bool {
        p.gap == 0.0 || p.t == f64::INFINITY
    }

    /// Length `q.t − p.t`, computed from the gaps when `b` is finite.
    pub fn length(&self, p: Point, q: Point) -> f64 {
        if self.is_bounded() {
            p.gap - q.gap
        } else {
            q.t - p.t
        }
    }

    /// Logarithmic coordinate: `u = log((b−a)/(b−t))` for finite `b`, `u = log(1 + t − a)` otherwise.
    /// It maps `[a, b)` onto `[0, ∞)`.
    pub fn u_of(&self, p: Point) -> f64 {
        if self.is_bounded() {
            if p.gap <= 0.0 {
                f64::INFINITY
            } else {
                math::ln(self.width() / p.gap)
            }
        } else {
            math::ln1p(p.t - self.a)
        }
    }

    pub fn point_at_u(&self, u: f64) -> Point {
        if self.is_bounded() {
            self.point_from_gap(self.width() * math::exp(-u))
        } else {
            self.point(self.a + math::expm1(u))
        }
    }

    /// `dt/du` at the point with coordinate `u`.
    pub fn jacobian_u(&self, u: f64) -> f64 {
        if self.is_bounded() {
            self.width() * math::exp(-u)
        } else {
            math::exp(u)
        }
    }

    /// Point at which the dyadic tail fraction of Lebesgue measure is `2^{−n}` (finite `b` only).
    pub fn dyadic_point(&self, n: f64) -> Point {
        self.point_from_gap(self.width() * math::exp2(-n))
    }
}
