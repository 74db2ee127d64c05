//! Explicit homotopies: the Alexander trick on the disk and the push of a
//! map of an annulus onto the affine identification of its radii.

use core::ops::{Add, Mul};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl Point {
    pub const fn new(re: f64, im: f64) -> Point {
        Point { re, im }
    }

    pub fn polar(r: f64, theta: f64) -> Point {
        Point::new(r * libm::cos(theta), r * libm::sin(theta))
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn arg(self) -> f64 {
        libm::atan2(self.im, self.re)
    }

    pub fn scale(self, k: f64) -> Point {
        Point::new(self.re * k, self.im * k)
    }

    pub fn dist(self, o: Point) -> f64 {
        Point::new(self.re - o.re, self.im - o.im).norm()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.re + o.re, self.im + o.im)
    }
}

impl Mul for Point {
    type Output = Point;
    fn mul(self, o: Point) -> Point {
        Point::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum HomotopyError {
    #[error("point outside the punctured unit disk")]
    PointOutsideDomain,
    #[error("time outside [0, 1]")]
    TimeOutsideDomain,
    #[error("radius outside [1, 3]")]
    RadiusOutsideDomain,
}

/// Extends an angle map of the circle radially to the disk.
pub fn radial_extension(angle: impl Fn(f64) -> f64) -> impl Fn(Point) -> Point {
    move |w: Point| {
        let r = w.norm();
        if r == 0.0 {
            w
        } else {
            Point::polar(r, angle(w.arg()))
        }
    }
}

/// Shrinks `phi` into the disk of radius `1 - t` and fills the outside
/// radially with its boundary values.
pub fn alexander_homotopy(
    phi: impl Fn(Point) -> Point,
    z: Point,
    t: f64,
) -> Result<Point, HomotopyError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(HomotopyError::TimeOutsideDomain);
    }
    let r = z.norm();
    if !(r > 0.0 && r <= 1.0) {
        return Err(HomotopyError::PointOutsideDomain);
    }
    let s = 1.0 - t;
    if r <= s {
        Ok(phi(z.scale(1.0 / s)).scale(s))
    } else {
        Ok(phi(z.scale(1.0 / r)).scale(r))
    }
}

/// Affine identification of the radii `[1, 3]` with `[1, 2]`.
pub fn ell(s: f64) -> f64 {
    (s + 1.0) / 2.0
}

/// Straight-line homotopy of the radial coordinate towards `ell`; the
/// angular part is kept.
pub fn annulus_push(
    phi1: impl Fn(Point, f64) -> Point,
    phi2: impl Fn(Point, f64) -> f64,
    z: Point,
    s: f64,
    t: f64,
) -> Result<(Point, f64), HomotopyError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(HomotopyError::TimeOutsideDomain);
    }
    if !(1.0..=3.0).contains(&s) {
        return Err(HomotopyError::RadiusOutsideDomain);
    }
    Ok((phi1(z, s), (1.0 - t) * phi2(z, s) + t * ell(s)))
}
