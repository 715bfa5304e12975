use super::domain::{Endpoint, Interval, Point};
use super::family::Quantity;
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use alloc::format;
use alloc::vec::Vec;

/// Piecewise-constant Hamiltonian: `cells[k]` holds on `[breakpoints[k], breakpoints[k+1])`.
///
/// The last breakpoint may be `+∞`, giving an unbounded terminal cell on `[t_{N−1}, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    breakpoints: Vec<f64>,
    cells: Vec<Mat2>,
}

impl Table {
    pub fn new(breakpoints: Vec<f64>, cells: Vec<Mat2>) -> Result<Self> {
        if breakpoints.len() < 2 || cells.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidSpec(format!(
                "table needs N+1 breakpoints for N >= 1 cells, got {} breakpoints and {} cells",
                breakpoints.len(),
                cells.len()
            )));
        }
        let n = breakpoints.len();
        for (k, w) in breakpoints.windows(2).enumerate() {
            if !(w[0] < w[1]) || !w[0].is_finite() {
                return Err(Error::InvalidSpec(format!("breakpoints must strictly increase (index {k})")));
            }
        }
        if breakpoints[n - 1].is_nan() || breakpoints[n - 1] == f64::NEG_INFINITY {
            return Err(Error::InvalidSpec("bad last breakpoint".into()));
        }
        for (k, c) in cells.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::InvalidSpec(format!("cell {k} has non-finite entries")));
            }
        }
        let cells = cells.into_iter().map(|c| Mat2::sym(c.h1(), c.h2(), c.h3())).collect();
        Ok(Table { breakpoints, cells })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn cells(&self) -> &[Mat2] {
        &self.cells
    }

    pub fn interval(&self) -> Interval {
        let last = *self.breakpoints.last().unwrap();
        Interval {
            a: self.breakpoints[0],
            b: if last == f64::INFINITY { Endpoint::Infinite } else { Endpoint::Finite(last) },
        }
    }

    /// Index of the cell containing `t` (right-continuous convention).
    pub fn cell_index(&self, t: f64) -> usize {
        let k = self.breakpoints.partition_point(|&x| x <= t);
        k.saturating_sub(1).min(self.cells.len() - 1)
    }

    pub fn value(&self, t: f64) -> Mat2 {
        self.cells[self.cell_index(t)]
    }

    fn scaled(v: f64, len: f64) -> f64 {
        if v == 0.0 {
            0.0
        } else {
            v * len
        }
    }

    /// `∫_p^r q(H)`, exact cell sums. `r` may be the right endpoint.
    pub fn integral(&self, q: Quantity, p: Point, r: Point) -> f64 {
        if !(r.t > p.t) {
            return 0.0;
        }
        let i = self.cell_index(p.t);
        let j = if r.t >= *self.breakpoints.last().unwrap() {
            self.cells.len() - 1
        } else {
            self.cell_index(r.t)
        };
        if i == j {
            return Self::scaled(q.of(&self.cells[i]), r.t - p.t);
        }
        let mut s = Self::scaled(q.of(&self.cells[i]), self.breakpoints[i + 1] - p.t);
        for k in i + 1..j {
            s += Self::scaled(q.of(&self.cells[k]), self.breakpoints[k + 1] - self.breakpoints[k]);
        }
        s + Self::scaled(q.of(&self.cells[j]), r.t - self.breakpoints[j])
    }

    /// Applies `f` to every cell value, keeping the breakpoints.
    pub fn map_cells(&self, mut f: impl FnMut(&Mat2) -> Mat2) -> Table {
        Table {
            breakpoints: self.breakpoints.clone(),
            cells: self.cells.iter().map(|c| f(c)).collect(),
        }
    }
}
