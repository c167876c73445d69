//! Shared scalar numerics: bracketed root finding, adaptive quadrature with
//! endpoint-singularity handling, and the regularized lower incomplete gamma
//! function (integer shape) with its inverse.

use crate::{Error, Real, Result};

/// Tolerances and iteration budget for the iterative routines.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Tolerance {
            abs_tol: T::of(1e-10),
            rel_tol: T::of(1e-9),
            max_iterations: 200,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_iterations: usize) -> Result<Self> {
        if abs_tol.is_nan()
            || abs_tol <= T::zero()
            || rel_tol.is_nan()
            || rel_tol <= T::zero()
            || max_iterations == 0
        {
            return Err(Error::domain(
                "tolerances must be positive, max_iterations >= 1",
            ));
        }
        Ok(Tolerance {
            abs_tol,
            rel_tol,
            max_iterations,
        })
    }
}

/// Bisection root finding on a bracketing interval.
///
/// Requires `f(lo) * f(hi) <= 0`. Deterministic; the returned point always
/// lies in a sub-bracket containing a sign change.
pub fn find_root<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, tol: &Tolerance<T>) -> Result<T> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NonFinite {
            at: if flo.is_finite() {
                hi.to_f64().unwrap_or(f64::NAN)
            } else {
                lo.to_f64().unwrap_or(f64::NAN)
            },
            context: "find_root bracket endpoint",
        });
    }
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo * fhi > T::zero() {
        return Err(Error::NoBracket {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    for _ in 0..tol.max_iterations {
        let mid = (lo + hi) * T::of(0.5);
        let width = hi - lo;
        if width <= tol.abs_tol + tol.rel_tol * mid.abs() {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == T::zero() {
            return Ok(mid);
        }
        if flo * fmid < T::zero() {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iterations,
        context: "find_root bisection",
    })
}

/// Adaptive quadrature of `f` on `(lo, hi)`.
///
/// Interior evaluations must be finite. Endpoint values may be infinite as
/// long as the singularity is integrable: the singular end is excluded by a
/// geometrically shrinking margin and the truncated-integral sequence is
/// Aitken-extrapolated to the full interval.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, tol: &Tolerance<T>) -> Result<T> {
    if lo == hi {
        return Ok(T::zero());
    }
    if lo > hi {
        return Ok(-integrate(f, hi, lo, tol)?);
    }
    let flo = f(lo);
    let fhi = f(hi);
    let lo_singular = !flo.is_finite();
    let hi_singular = !fhi.is_finite();
    if !lo_singular && !hi_singular {
        return match adaptive_simpson(&f, lo, hi, flo, fhi, tol) {
            Ok(v) => Ok(v),
            // Finite values but unbounded derivatives at an endpoint (log-type
            // behavior) defeat plain refinement; the truncation-extrapolation
            // path below handles those too.
            Err(Error::NoConvergence { .. }) => margin_extrapolate(&f, lo, hi, true, true, tol),
            Err(e) => Err(e),
        };
    }
    margin_extrapolate(&f, lo, hi, lo_singular, hi_singular, tol)
}

/// Truncated integrals I_k over [lo + d_k, hi - d_k] (margins only at the
/// flagged ends), d_k halving each step, accelerated with Aitken's
/// delta-squared process.
fn margin_extrapolate<T: Real>(
    f: &impl Fn(T) -> T,
    lo: T,
    hi: T,
    lo_singular: bool,
    hi_singular: bool,
    tol: &Tolerance<T>,
) -> Result<T> {
    let span = hi - lo;
    let half = T::of(0.5);
    let mut margin = span * T::of(2e-3);
    let mut a = if lo_singular { lo + margin } else { lo };
    let mut b = if hi_singular { hi - margin } else { hi };
    let mut partial = adaptive_simpson(&f, a, b, f(a), f(b), tol)?;
    let mut seq: Vec<T> = vec![partial];
    let max_shrinks = 60;
    let mut best = partial;
    for _ in 0..max_shrinks {
        margin = margin * half;
        let a_new = if lo_singular { lo + margin } else { lo };
        let b_new = if hi_singular { hi - margin } else { hi };
        if lo_singular {
            partial = partial + adaptive_simpson(&f, a_new, a, f(a_new), f(a), tol)?;
        }
        if hi_singular {
            partial = partial + adaptive_simpson(&f, b, b_new, f(b), f(b_new), tol)?;
        }
        a = a_new;
        b = b_new;
        seq.push(partial);
        let k = seq.len();
        if k >= 3 {
            let (x0, x1, x2) = (seq[k - 3], seq[k - 2], seq[k - 1]);
            let d1 = x1 - x0;
            let d2 = x2 - x1;
            let denom = d2 - d1;
            let accel = if denom.abs() > T::epsilon() * (x2.abs() + T::one()) {
                x2 - d2 * d2 / denom
            } else {
                x2
            };
            let change = (accel - best).abs();
            best = accel;
            if change <= tol.abs_tol + tol.rel_tol * accel.abs()
                && d2.abs() <= T::of(8.0) * (tol.abs_tol + tol.rel_tol * accel.abs())
            {
                return Ok(best);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: max_shrinks,
        context: "singular-endpoint extrapolation",
    })
}

fn simpson<T: Real>(fa: T, fm: T, fb: T, h: T) -> T {
    (fa + T::of(4.0) * fm + fb) * h / T::of(6.0)
}

fn adaptive_simpson<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fb: T,
    tol: &Tolerance<T>,
) -> Result<T> {
    let m = (a + b) * T::of(0.5);
    let fm = eval_finite(f, m)?;
    let whole = simpson(fa, fm, fb, b - a);
    let eps = tol.abs_tol + tol.rel_tol * whole.abs();
    let mut budget: usize = 200_000;
    simpson_step(f, a, b, fa, fm, fb, whole, eps, 50, &mut budget)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    eps: T,
    depth: usize,
    budget: &mut usize,
) -> Result<T> {
    if *budget == 0 {
        return Err(Error::NoConvergence {
            iterations: 200_000,
            context: "adaptive quadrature refinement",
        });
    }
    *budget -= 1;
    let m = (a + b) * T::of(0.5);
    let lm = (a + m) * T::of(0.5);
    let rm = (m + b) * T::of(0.5);
    let flm = eval_finite(f, lm)?;
    let frm = eval_finite(f, rm)?;
    let h = (b - a) * T::of(0.5);
    let left = simpson(fa, flm, fm, h);
    let right = simpson(fm, frm, fb, h);
    let delta = left + right - whole;
    if depth == 0 {
        return Err(Error::NoConvergence {
            iterations: 50,
            context: "adaptive quadrature max depth",
        });
    }
    if delta.abs() <= T::of(15.0) * eps {
        return Ok(left + right + delta / T::of(15.0));
    }
    let half_eps = eps * T::of(0.5);
    let l = simpson_step(f, a, m, fa, flm, fm, left, half_eps, depth - 1, budget)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, half_eps, depth - 1, budget)?;
    Ok(l + r)
}

fn eval_finite<T: Real>(f: &impl Fn(T) -> T, x: T) -> Result<T> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            at: x.to_f64().unwrap_or(f64::NAN),
            context: "integrand interior",
        })
    }
}

/// Regularized lower incomplete gamma function `P(n, x)` for integer shape.
///
/// `P(n, x) = 1 - e^{-x} sum_{k=0}^{n-1} x^k / k!`, nondecreasing in `x`.
pub fn reg_lower_gamma<T: Real>(shape: u32, x: T) -> Result<T> {
    if shape == 0 {
        return Err(Error::domain("gamma shape must be >= 1"));
    }
    if x < T::zero() {
        return Err(Error::domain("gamma argument must be >= 0"));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    // term_k = e^{-x} x^k / k!, accumulated iteratively.
    let mut term = (-x).exp();
    let mut sum = term;
    for k in 1..shape {
        term = term * x / T::from_u32(k).unwrap();
        sum = sum + term;
    }
    let p = T::one() - sum;
    Ok(p.max(T::zero()).min(T::one()))
}

/// Inverse of [`reg_lower_gamma`] in its second argument.
pub fn inv_reg_lower_gamma<T: Real>(shape: u32, p: T) -> Result<T> {
    if shape == 0 {
        return Err(Error::domain("gamma shape must be >= 1"));
    }
    if p < T::zero() || p >= T::one() {
        return Err(Error::domain("probability must lie in [0, 1)"));
    }
    if p == T::zero() {
        return Ok(T::zero());
    }
    let mut hi = T::from_u32(shape).unwrap() + T::of(10.0);
    for _ in 0..200 {
        if reg_lower_gamma(shape, hi)? >= p {
            break;
        }
        hi = hi * T::of(2.0);
    }
    let tol = Tolerance {
        abs_tol: T::of(1e-12),
        rel_tol: T::of(1e-12),
        max_iterations: 300,
    };
    find_root(
        |x| reg_lower_gamma(shape, x).unwrap_or(T::nan()) - p,
        T::zero(),
        hi,
        &tol,
    )
}
