//! Adaptive Simpson quadrature.

use crate::error::{domain, Error, Result};

const MAX_DEPTH: u32 = 48;
/// Integrand evaluations allowed per call before giving up.
pub const MAX_EVALUATIONS: usize = 1 << 22;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct Budget(std::cell::Cell<usize>);

fn eval<F: Fn(f64) -> f64>(f: &F, budget: &Budget, x: f64) -> Result<f64> {
    let left = budget.0.get();
    if left == 0 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge within {MAX_EVALUATIONS} evaluations"
        )));
    }
    budget.0.set(left - 1);
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Numeric(format!("integrand is {y} at x = {x}")))
    }
}

/// Integrate `f` over `[a, b]` to an absolute error of about `tol`.
///
/// Panels are bisected until the two-half Simpson estimate agrees with the
/// whole-panel estimate to `15 * tol_panel`; the Richardson-corrected value
/// is returned. Kinks should sit on a panel boundary (split the call) for
/// fast convergence.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(domain(format!("invalid integration interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let budget = Budget(std::cell::Cell::new(MAX_EVALUATIONS));
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (eval(&f, &budget, a)?, eval(&f, &budget, m)?, eval(&f, &budget, b)?);
    let root = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
    };
    refine(&f, &budget, root, tol, MAX_DEPTH)
}

fn refine<F: Fn(f64) -> f64>(f: &F, budget: &Budget, p: Panel, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = eval(f, budget, lm)?;
    let frm = eval(f, budget, rm)?;
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(refine(f, budget, l, 0.5 * tol, depth - 1)? + refine(f, budget, r, 0.5 * tol, depth - 1)?)
}
