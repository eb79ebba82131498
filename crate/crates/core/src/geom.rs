//! Small 2D value types shared across the pipeline.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// A point or vector in either pad cells or canvas units.
///
/// Serialized as a two-element array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Unit vector in the same direction, or zero for a zero vector.
    pub fn unit(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            Point::ORIGIN
        } else {
            Point::new(self.x / n, self.y / n)
        }
    }

    pub fn lerp(self, other: Point, f: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * f, self.y + (other.y - self.y) * f)
    }

    /// Rotate about `center` by `radians` (clockwise on screen, since y grows downward).
    pub fn rotate_about(self, center: Point, radians: f64) -> Point {
        let (s, c) = radians.sin_cos();
        let d = self - center;
        Point::new(center.x + d.x * c - d.y * s, center.y + d.x * s + d.y * c)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Arithmetic mean of a set of points; `None` when empty.
pub fn mean(points: impl IntoIterator<Item = Point>) -> Option<Point> {
    let mut n = 0usize;
    let mut acc = Point::ORIGIN;
    for p in points {
        acc = acc + p;
        n += 1;
    }
    (n > 0).then(|| acc * (1.0 / n as f64))
}
