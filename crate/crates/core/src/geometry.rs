//! The SOL group, its left-invariant metric, and its isometries.
//!
//! Points multiply by `(x1,y1,z1) * (x2,y2,z2) = (x1 + e^{z1} x2,
//! y1 + e^{-z1} y2, z1 + z2)` and the metric is
//! `ds^2 = e^{-2z} dx^2 + e^{2z} dy^2 + dz^2`. The isometry group is
//! generated by left translations, the four coordinate sign changes, and
//! the swap-flip `(x,y,z) -> (y,x,-z)`; the isotropy group at the identity
//! has order 8.

use crate::{Error, Result};

/// A point of SOL in global coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Point {
        Point { x, y, z }
    }

    /// Group multiplication `self * q`.
    pub fn group_mul(&self, q: &Point) -> Point {
        Point {
            x: self.x + self.z.exp() * q.x,
            y: self.y + (-self.z).exp() * q.y,
            z: self.z + q.z,
        }
    }

    /// Group inverse `(-e^{-z} x, -e^{z} y, -z)`.
    pub fn group_inverse(&self) -> Point {
        Point {
            x: -(-self.z).exp() * self.x,
            y: -self.z.exp() * self.y,
            z: -self.z,
        }
    }

    /// The faithful 3x3 matrix representation of the group.
    pub fn matrix_rep(&self) -> [[f64; 3]; 3] {
        [
            [self.z.exp(), 0.0, self.x],
            [0.0, (-self.z).exp(), self.y],
            [0.0, 0.0, 1.0],
        ]
    }

    /// Euclidean coordinate distance; not the SOL metric. Used as an
    /// endpoint-miss measure by solvers.
    pub fn coord_dist(&self, q: &Point) -> f64 {
        let (dx, dy, dz) = (self.x - q.x, self.y - q.y, self.z - q.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// A tangent vector at a point, components in the coordinate basis
/// `∂x, ∂y, ∂z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVec {
    pub base: Point,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl TangentVec {
    pub fn new(base: Point, dx: f64, dy: f64, dz: f64) -> TangentVec {
        TangentVec { base, dx, dy, dz }
    }

    /// Squared metric norm `e^{-2z} dx^2 + e^{2z} dy^2 + dz^2`.
    pub fn norm_sq(&self) -> f64 {
        let z = self.base.z;
        (-2.0 * z).exp() * self.dx * self.dx
            + (2.0 * z).exp() * self.dy * self.dy
            + self.dz * self.dz
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Components in the orthonormal left-invariant frame
    /// `X = e^z ∂x, Y = e^{-z} ∂y, Z = ∂z`.
    pub fn frame_components(&self) -> (f64, f64, f64) {
        let z = self.base.z;
        ((-z).exp() * self.dx, z.exp() * self.dy, self.dz)
    }

    /// Builds a vector from frame components at `base`.
    pub fn from_frame(base: Point, cx: f64, cy: f64, cz: f64) -> TangentVec {
        TangentVec {
            base,
            dx: base.z.exp() * cx,
            dy: (-base.z).exp() * cy,
            dz: cz,
        }
    }

    /// Metric inner product with another vector at the same base point.
    pub fn dot(&self, other: &TangentVec) -> f64 {
        let z = self.base.z;
        (-2.0 * z).exp() * self.dx * other.dx
            + (2.0 * z).exp() * self.dy * other.dy
            + self.dz * other.dz
    }

    /// Rescales to unit metric norm.
    pub fn normalized(&self) -> TangentVec {
        let n = self.norm();
        TangentVec { base: self.base, dx: self.dx / n, dy: self.dy / n, dz: self.dz / n }
    }

    /// The vertical flip `(X, Y, Z) -> (X, Y, -Z)` on frame components,
    /// i.e. `(dx, dy, dz) -> (dx, dy, -dz)` in coordinates. Norm-preserving,
    /// but not the differential of any isometry of SOL.
    pub fn vertical_flip(&self) -> TangentVec {
        TangentVec { base: self.base, dx: self.dx, dy: self.dy, dz: -self.dz }
    }
}

/// One generator of the isometry group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryGen {
    /// Left translation by `(x0, y0, w)`:
    /// `p -> (x0 + e^w x, y0 + e^{-w} y, z + w)`.
    LeftTranslation { x0: f64, y0: f64, w: f64 },
    /// Coordinate sign change `(x, y, z) -> (ε1 x, ε2 y, z)`.
    SignChange { flip_x: bool, flip_y: bool },
    /// The involutive isometry `(x, y, z) -> (y, x, -z)`.
    SwapFlip,
}

impl IsometryGen {
    fn apply_point(&self, p: Point) -> Point {
        match *self {
            IsometryGen::LeftTranslation { x0, y0, w } => Point {
                x: x0 + w.exp() * p.x,
                y: y0 + (-w).exp() * p.y,
                z: p.z + w,
            },
            IsometryGen::SignChange { flip_x, flip_y } => Point {
                x: if flip_x { -p.x } else { p.x },
                y: if flip_y { -p.y } else { p.y },
                z: p.z,
            },
            IsometryGen::SwapFlip => Point { x: p.y, y: p.x, z: -p.z },
        }
    }

    fn apply_tangent(&self, v: TangentVec) -> TangentVec {
        let base = self.apply_point(v.base);
        match *self {
            IsometryGen::LeftTranslation { w, .. } => TangentVec {
                base,
                dx: w.exp() * v.dx,
                dy: (-w).exp() * v.dy,
                dz: v.dz,
            },
            IsometryGen::SignChange { flip_x, flip_y } => TangentVec {
                base,
                dx: if flip_x { -v.dx } else { v.dx },
                dy: if flip_y { -v.dy } else { v.dy },
                dz: v.dz,
            },
            IsometryGen::SwapFlip => TangentVec { base, dx: v.dy, dy: v.dx, dz: -v.dz },
        }
    }
}

/// An isometry of SOL, stored as a composition word over the generators.
/// Words compose exactly; no matrix round-off enters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Isometry {
    word: Vec<IsometryGen>,
}

impl Isometry {
    pub fn identity() -> Isometry {
        Isometry { word: Vec::new() }
    }

    /// Left translation by the group element `g`.
    pub fn left_translation(g: Point) -> Isometry {
        Isometry { word: vec![IsometryGen::LeftTranslation { x0: g.x, y0: g.y, w: g.z }] }
    }

    /// The vertical lift `(x, y, z) -> (e^w x, e^{-w} y, z + w)`.
    pub fn vertical_lift(w: f64) -> Isometry {
        Isometry::left_translation(Point::new(0.0, 0.0, w))
    }

    /// Horizontal translation `(x, y, z) -> (x + w1, y + w2, z)`.
    pub fn horizontal_translation(w1: f64, w2: f64) -> Isometry {
        Isometry::left_translation(Point::new(w1, w2, 0.0))
    }

    pub fn sign_change(flip_x: bool, flip_y: bool) -> Isometry {
        Isometry { word: vec![IsometryGen::SignChange { flip_x, flip_y }] }
    }

    pub fn swap_flip() -> Isometry {
        Isometry { word: vec![IsometryGen::SwapFlip] }
    }

    /// Composition: `self.then(g)` applies `self` first, then `g`.
    pub fn then(mut self, other: Isometry) -> Isometry {
        self.word.extend(other.word);
        self
    }

    pub fn apply_point(&self, p: Point) -> Point {
        self.word.iter().fold(p, |q, g| g.apply_point(q))
    }

    /// The differential of the isometry on tangent vectors.
    pub fn apply_tangent(&self, v: TangentVec) -> TangentVec {
        self.word.iter().fold(v, |u, g| g.apply_tangent(u))
    }
}

/// The oscillator potential `U_{a,b}(z) = (a^2 e^{2z} + b^2 e^{-2z}) / 2`.
///
/// For `ab != 0` this equals `|ab| cosh(2(z - h))` with
/// `h = log|b/a| / 2`; that form is used to avoid overflowing the two
/// exponentials separately when `|z|` is large but `z - h` is moderate.
pub fn potential(a: f64, b: f64, z: f64) -> f64 {
    if a != 0.0 && b != 0.0 {
        let h = 0.5 * (b / a).abs().ln();
        (a * b).abs() * (2.0 * (z - h)).cosh()
    } else {
        0.5 * (a * a * (2.0 * z).exp() + b * b * (-2.0 * z).exp())
    }
}

/// Average height `h = log|b/a| / 2`; defined only when `ab != 0`.
pub fn average_height(a: f64, b: f64) -> Option<f64> {
    if a != 0.0 && b != 0.0 {
        Some(0.5 * (b / a).abs().ln())
    } else {
        None
    }
}

/// Horizontal distance between two points at the same altitude:
/// `sqrt(e^{-2z}(x2-x1)^2 + e^{2z}(y2-y1)^2)`, the Euclidean distance
/// inside the plane `{z = const}`. The plane is not totally geodesic, so
/// this dominates the Riemannian distance.
pub fn horizontal_distance(p1: &Point, p2: &Point) -> Result<f64> {
    if p1.z != p2.z {
        return Err(Error::AltitudeMismatch { z1: p1.z, z2: p2.z });
    }
    let z = p1.z;
    let dx = p2.x - p1.x;
    let dy = p2.y - p1.y;
    Ok(((-2.0 * z).exp() * dx * dx + (2.0 * z).exp() * dy * dy).sqrt())
}
