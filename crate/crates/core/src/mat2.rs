use crate::math;

/// A real 2×2 matrix stored row-major: `[[m[0][0], m[0][1]], [m[1][0], m[1][1]]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);
    /// The symplectic unit `J = [[0, -1], [1, 0]]`.
    pub const J: Mat2 = Mat2([[0.0, -1.0], [1.0, 0.0]]);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    /// Symmetric matrix `[[h1, h3], [h3, h2]]`.
    pub const fn sym(h1: f64, h2: f64, h3: f64) -> Self {
        Mat2([[h1, h3], [h3, h2]])
    }

    pub fn h1(&self) -> f64 {
        self.0[0][0]
    }
    pub fn h2(&self) -> f64 {
        self.0[1][1]
    }
    /// Off-diagonal entry of the symmetrized matrix.
    pub fn h3(&self) -> f64 {
        0.5 * (self.0[0][1] + self.0[1][0])
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let m = &self.0;
        Mat2([[s * m[0][0], s * m[0][1]], [s * m[1][0], s * m[1][1]]])
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        self.add(&o.scale(-1.0))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max(math::abs(self.0[i][j] - o.0[i][j]));
            }
        }
        d
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn sym_eigenvalues(&self) -> (f64, f64) {
        let (h1, h2, h3) = (self.h1(), self.h2(), self.h3());
        let mean = 0.5 * (h1 + h2);
        let r = math::hypot(0.5 * (h1 - h2), h3);
        (mean - r, mean + r)
    }

    /// Rotation `N_α = [[cos α, sin α], [−sin α, cos α]]`.
    pub fn rotation(alpha: f64) -> Mat2 {
        let (c, s) = math::cos_sin(alpha);
        Mat2([[c, s], [-s, c]])
    }
}
