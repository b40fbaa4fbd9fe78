//! Real roots of the depressed cubic `x³ + p x + q = 0`.
//!
//! The discriminant `Δ = -(4p³ + 27q²)` selects the branch: three distinct
//! real roots (trigonometric form) for `Δ > 0`, one real root (hyperbolic
//! form) for `Δ < 0`, and a double root for `Δ = 0, p ≠ 0`. Every root gets
//! one Newton step afterwards.

use std::f64::consts::PI;

/// Up to three real roots, sorted ascending. Double roots are repeated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoots {
    roots: [f64; 3],
    len: usize,
}

impl RealRoots {
    fn one(x: f64) -> Self {
        RealRoots {
            roots: [x, 0.0, 0.0],
            len: 1,
        }
    }

    fn three(mut r: [f64; 3]) -> Self {
        r.sort_by(f64::total_cmp);
        RealRoots { roots: r, len: 3 }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.roots[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn max(&self) -> f64 {
        self.roots[self.len - 1]
    }
}

/// `-(4p³ + 27q²)`; positive means three distinct real roots.
#[inline]
pub fn discriminant(p: f64, q: f64) -> f64 {
    -(4.0 * p * p * p + 27.0 * q * q)
}

#[inline]
fn eval(x: f64, p: f64, q: f64) -> f64 {
    (x * x + p) * x + q
}

fn polish(x: f64, p: f64, q: f64) -> f64 {
    let d = 3.0 * x * x + p;
    if d == 0.0 {
        return x;
    }
    let step = eval(x, p, q) / d;
    let y = x - step;
    // A Newton step next to a double root can overshoot; keep the better one.
    if y.is_finite() && eval(y, p, q).abs() <= eval(x, p, q).abs() {
        y
    } else {
        x
    }
}

pub fn solve_depressed(p: f64, q: f64) -> RealRoots {
    if p == 0.0 {
        return RealRoots::one((-q).cbrt());
    }
    let disc = discriminant(p, q);
    if disc > 0.0 {
        // p < 0 here.
        let r = (-p / 3.0).sqrt();
        let c = ((3.0 * q) / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = c.acos() / 3.0;
        let mut roots = [0.0; 3];
        for (j, root) in roots.iter_mut().enumerate() {
            let x = 2.0 * r * (theta - 2.0 * PI * j as f64 / 3.0).cos();
            *root = polish(x, p, q);
        }
        RealRoots::three(roots)
    } else if disc < 0.0 {
        let x = if p < 0.0 {
            let r = (-p / 3.0).sqrt();
            let arg = (-3.0 * q.abs()) / (2.0 * p) * (-3.0 / p).sqrt();
            -2.0 * q.signum() * r * (arg.max(1.0).acosh() / 3.0).cosh()
        } else {
            let r = (p / 3.0).sqrt();
            let arg = (3.0 * q) / (2.0 * p) * (3.0 / p).sqrt();
            -2.0 * r * (arg.asinh() / 3.0).sinh()
        };
        RealRoots::one(polish(x, p, q))
    } else {
        let simple = 3.0 * q / p;
        let double = -1.5 * q / p;
        RealRoots::three([simple, double, double])
    }
}
