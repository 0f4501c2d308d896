//! Bracketed scalar root finding (Brent's method).

use crate::error::{domain, Error, Result};

const MAX_ITER: usize = 200;

/// A closed interval `[lo, hi]` expected to contain a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(domain(format!("invalid bracket [{lo}, {hi}]")));
        }
        Ok(Bracket { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// True when `f` has opposite signs (or a zero) at the two ends.
    pub fn is_sign_change<F: Fn(f64) -> f64>(&self, f: F) -> bool {
        f(self.lo) * f(self.hi) <= 0.0
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Numeric(format!("f({x}) = {y}")))
    }
}

/// Locate a root of `f` inside `bracket` to within `tol` in x.
///
/// Brent's method: inverse quadratic / secant steps, falling back to
/// bisection whenever the interpolated step would not shrink the bracket
/// fast enough.
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (eval(&f, a)?, eval(&f, b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRoot {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = eval(&f, b)?;
    }

    Err(Error::Numeric(format!(
        "root search did not converge in {MAX_ITER} iterations (last x = {b})"
    )))
}
