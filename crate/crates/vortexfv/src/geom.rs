//! Small 2D vector/matrix primitives and polygon helpers.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub const fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2 { x, y }
}

impl Vec2 {
    pub const ZERO: Vec2 = vec2(0.0, 0.0);

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Scalar cross product a × b = a_x b_y − a_y b_x.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Rotate by −90°: (y, −x). For a counterclockwise polygon, `perp` of a
    /// directed boundary segment points outward.
    pub fn perp(self) -> Vec2 {
        vec2(self.y, -self.x)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn normalized(self) -> Vec2 {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        vec2(self.x + o.x, self.y + o.y)
    }
}
impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        vec2(self.x - o.x, self.y - o.y)
    }
}
impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        vec2(self.x * s, self.y * s)
    }
}
impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}
impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        vec2(self.x / s, self.y / s)
    }
}
impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        vec2(-self.x, -self.y)
    }
}
impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

/// 2×2 matrix, row major.
#[derive(Clone, Copy, Debug, Default)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
    };

    pub fn outer(u: Vec2, v: Vec2) -> Mat2 {
        Mat2 {
            a: u.x * v.x,
            b: u.x * v.y,
            c: u.y * v.x,
            d: u.y * v.y,
        }
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// Solve `self * x = rhs`; `None` when the determinant is (close to)
    /// zero relative to the matrix scale.
    pub fn solve(self, rhs: Vec2) -> Option<Vec2> {
        let det = self.det();
        let scale = self
            .a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs());
        if det.abs() <= 1e-14 * scale * scale {
            return None;
        }
        Some(vec2(
            (rhs.x * self.d - rhs.y * self.b) / det,
            (rhs.y * self.a - rhs.x * self.c) / det,
        ))
    }

    /// Eigenvalues of a symmetric 2×2 matrix, ascending.
    pub fn sym_eigenvalues(self) -> (f64, f64) {
        let m = 0.5 * (self.a + self.d);
        let q = (0.25 * (self.a - self.d).powi(2) + self.b * self.c)
            .max(0.0)
            .sqrt();
        (m - q, m + q)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
            d: self.d + o.d,
        }
    }
}
impl AddAssign for Mat2 {
    fn add_assign(&mut self, o: Mat2) {
        *self = *self + o;
    }
}
impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2 {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }
}

/// Twice the signed area of the polygon (shoelace). Positive for
/// counterclockwise orientation. Evaluated in coordinates local to the
/// first vertex so fine cells far from the origin lose no precision.
pub fn polygon_signed_area2(pts: &[Vec2]) -> f64 {
    let o = pts[0];
    let mut s = 0.0;
    for i in 1..pts.len() - 1 {
        s += (pts[i] - o).cross(pts[i + 1] - o);
    }
    s
}

pub fn polygon_area(pts: &[Vec2]) -> f64 {
    0.5 * polygon_signed_area2(pts)
}

/// Area centroid from the shoelace moments. Requires nonzero area.
pub fn polygon_centroid(pts: &[Vec2]) -> Vec2 {
    let o = pts[0];
    let mut a2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..pts.len() {
        let p = pts[i] - o;
        let q = pts[(i + 1) % pts.len()] - o;
        let w = p.cross(q);
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    vec2(cx / (3.0 * a2) + o.x, cy / (3.0 * a2) + o.y)
}

/// Proper segment intersection test (shared endpoints do not count).
fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0)
}

/// A polygon is simple when no two non-adjacent edges intersect.
/// O(k²), fine for small polygons.
pub fn polygon_is_simple(pts: &[Vec2]) -> bool {
    let k = pts.len();
    for i in 0..k {
        let (a, b) = (pts[i], pts[(i + 1) % k]);
        for j in i + 1..k {
            // skip adjacent edges (they share an endpoint)
            if j == i || (j + 1) % k == i || (i + 1) % k == j {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % k]);
            if segments_cross(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
