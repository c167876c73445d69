//! Dependence-uncertainty core: the tail-split parameter `c_n(a)`, the
//! extremal sum level `H_a`, the functions `φ` and `φ₋` for identical
//! marginals, their heterogeneous counterparts `Φ` and `Φ₋`, and the extremal
//! tail probability `m(s) = φ⁻¹(s)`.

use crate::marginals::{Marginal, Monotonicity, Negated};
use crate::numerics::{find_root, integrate, Tolerance};
use crate::{Error, Real, Result};

/// Which branch of the defining inequality produced `c_n(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CminBranch {
    /// The inequality already holds at `c = 0`.
    Zero,
    /// Minimal interior (or boundary) solution `c > 0`.
    Positive,
}

/// Solution of the `c_n(a)` minimization together with diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct CminSolution<T> {
    /// Minimal `c` in `[0, (1-a)/n]` satisfying the branch inequality.
    pub c: T,
    pub branch: CminBranch,
    /// Value of the defining inequality gap at `c`.
    pub residual: T,
}

/// Which formula produced a `φ` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiBranch {
    HAtCmin,
    HAtZero,
    ConditionalExpectation,
}

/// A `φ` or `φ₋` evaluation with its underlying `c_n(a)` diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct PhiValue<T> {
    pub value: T,
    pub c_used: CminSolution<T>,
    pub formula_branch: PhiBranch,
}

const CMIN_ABS_TOL: f64 = 1e-10;

fn validate_n_a<T: Real>(n: usize, a: T) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("c_n / H_a require n >= 2"));
    }
    if a < T::zero() || a > T::one() {
        return Err(Error::domain("a must lie in [0, 1]"));
    }
    Ok(())
}

/// The extremal-coupling sum level `H_a(x)` for `x` in `[0, (1-a)/n]`.
///
/// Decreasing densities: `H_a(x) = (n-1) G(a+(n-1)x) + G(1-x)`.
/// Increasing densities: `H_a(x) = G(a+x) + (n-1) G(1-(n-1)x)`.
pub fn h_a<T: Real>(m: &dyn Marginal<T>, n: usize, a: T, x: T) -> Result<T> {
    validate_n_a(n, a)?;
    let bound = (T::one() - a) / T::from_usize(n).unwrap();
    let slack = T::of(1e-12);
    if x < -slack || x > bound + slack {
        return Err(Error::domain(format!(
            "H_a argument {} outside [0, {}]",
            x, bound
        )));
    }
    let x = x.max(T::zero()).min(bound);
    let nm1 = T::from_usize(n - 1).unwrap();
    match m.monotonicity() {
        Monotonicity::DecreasingDensity => {
            Ok(nm1 * m.quantile(a + nm1 * x)? + m.quantile(T::one() - x)?)
        }
        Monotonicity::IncreasingDensity => {
            Ok(m.quantile(a + x)? + nm1 * m.quantile(T::one() - nm1 * x)?)
        }
    }
}

/// Gap of the defining inequality at `c`, via quadrature:
/// `g(c) = ∫_c^{(1-a)/n} H_a(t) dt - ((1-a)/n - c) H_a(c)`.
///
/// Decreasing densities require `g(c) >= 0`, increasing `g(c) <= 0`.
fn quadrature_gap<T: Real>(m: &dyn Marginal<T>, n: usize, a: T, c: T) -> Result<T> {
    let bound = (T::one() - a) / T::from_usize(n).unwrap();
    let hc = h_a(m, n, a, c)?;
    if !hc.is_finite() {
        // H_a(c) infinite forces the inequality to fail on both branches.
        return Ok(match m.monotonicity() {
            Monotonicity::DecreasingDensity => T::neg_infinity(),
            Monotonicity::IncreasingDensity => T::infinity(),
        });
    }
    let tol = Tolerance {
        abs_tol: T::of(1e-12),
        rel_tol: T::of(1e-11),
        max_iterations: 200,
    };
    let integral = integrate(
        |t| h_a(m, n, a, t).unwrap_or_else(|_| T::nan()),
        c,
        bound,
        &tol,
    )?;
    Ok(integral - (bound - c) * hc)
}

/// Closed-form gap for the exponential fast paths. The sign convention
/// matches [`quadrature_gap`]: decreasing wants `>= 0`, increasing `<= 0`.
fn closed_form_gap<T: Real>(m: &dyn Marginal<T>, n: usize, a: T, c: T) -> Option<T> {
    let nf = T::from_usize(n).unwrap();
    let nm1 = T::from_usize(n - 1).unwrap();
    match m.monotonicity() {
        Monotonicity::DecreasingDensity => {
            m.exponential_rate()?;
            // (a-1) ln((1-a-(n-1)c)/c) >= n (a + cn - 1), rate-independent.
            let arg = (T::one() - a - nm1 * c) / c;
            if c <= T::zero() || arg <= T::zero() {
                return Some(T::neg_infinity());
            }
            Some((a - T::one()) * arg.ln() - nf * (a + c * nf - T::one()))
        }
        Monotonicity::IncreasingDensity => {
            m.negated_exponential_rate()?;
            // n(a+nc-1)/(1+(n-1)a) <= ln(a+c) - ln(1-(n-1)c)
            if a + c <= T::zero() {
                return Some(T::infinity());
            }
            let lhs = nf * (a + nf * c - T::one()) / (T::one() + nm1 * a);
            let rhs = (a + c).ln() - (T::one() - nm1 * c).ln();
            Some(lhs - rhs)
        }
    }
}

fn gap_holds<T: Real>(mono: Monotonicity, gap: T) -> bool {
    match mono {
        Monotonicity::DecreasingDensity => gap >= T::zero(),
        Monotonicity::IncreasingDensity => gap <= T::zero(),
    }
}

fn c_min_impl<T: Real>(
    m: &dyn Marginal<T>,
    n: usize,
    a: T,
    allow_closed_form: bool,
) -> Result<CminSolution<T>> {
    validate_n_a(n, a)?;
    let bound = (T::one() - a) / T::from_usize(n).unwrap();
    let abs_tol = T::of(CMIN_ABS_TOL);
    if bound <= abs_tol {
        // Interval collapsed (a -> 1).
        return Ok(CminSolution {
            c: T::zero(),
            branch: CminBranch::Zero,
            residual: T::zero(),
        });
    }
    let mono = m.monotonicity();
    let use_closed = allow_closed_form && closed_form_gap(m, n, a, bound * T::of(0.5)).is_some();
    let gap = |c: T| -> Result<T> {
        if use_closed {
            Ok(closed_form_gap(m, n, a, c).unwrap())
        } else {
            quadrature_gap(m, n, a, c)
        }
    };

    // c = 0 first: the inequality can only hold there when H_a(0) is finite.
    let g0 = gap(T::zero())?;
    if gap_holds(mono, g0) {
        return Ok(CminSolution {
            c: T::zero(),
            branch: CminBranch::Zero,
            residual: if g0.is_finite() { g0 } else { T::zero() },
        });
    }

    // Log-spaced scan for the first c where the inequality holds, then
    // bisection of the gap on the bracketing segment.
    let steps = 120usize;
    let lo_exp = -14.0f64;
    let mut prev = T::zero();
    let mut bracket = None;
    for k in 0..=steps {
        let e = lo_exp * (1.0 - k as f64 / steps as f64);
        let c = (bound * T::of(10f64.powf(e))).min(bound);
        let g = gap(c)?;
        if gap_holds(mono, g) {
            bracket = Some((prev, c));
            break;
        }
        prev = c;
    }
    let (lo, hi) = match bracket {
        Some(b) => b,
        // Gap vanishes at the right endpoint by construction.
        None => (prev, bound),
    };
    let c = if lo == T::zero() || hi - lo <= abs_tol {
        hi
    } else {
        let tol = Tolerance {
            abs_tol,
            rel_tol: T::of(1e-12),
            max_iterations: 300,
        };
        match find_root(|c| gap(c).unwrap_or_else(|_| T::nan()), lo, hi, &tol) {
            Ok(c) => c,
            // The gap can be one-signed up to the boundary zero; keep the
            // first holding point in that case.
            Err(Error::NoBracket { .. }) => hi,
            Err(e) => return Err(e),
        }
    };
    let residual = gap(c)?;
    let branch = if c <= abs_tol {
        CminBranch::Zero
    } else {
        CminBranch::Positive
    };
    Ok(CminSolution {
        c,
        branch,
        residual,
    })
}

/// Minimal tail-split parameter `c_n(a)`, exponential closed forms used when
/// available.
pub fn c_min<T: Real>(m: &dyn Marginal<T>, n: usize, a: T) -> Result<CminSolution<T>> {
    c_min_impl(m, n, a, true)
}

/// [`c_min`] forced through the generic quadrature path; the two must agree.
pub fn c_min_quadrature<T: Real>(m: &dyn Marginal<T>, n: usize, a: T) -> Result<CminSolution<T>> {
    c_min_impl(m, n, a, false)
}

/// The function `φ(a)` whose inverse is the extremal tail probability `m(s)`.
pub fn phi<T: Real>(m: &dyn Marginal<T>, n: usize, a: T) -> Result<PhiValue<T>> {
    if a >= T::one() {
        return Err(Error::domain("phi requires a in [0, 1)"));
    }
    let sol = c_min(m, n, a)?;
    match sol.branch {
        CminBranch::Zero => {
            let value = T::from_usize(n).unwrap() * m.cond_expect_above(a)?;
            Ok(PhiValue {
                value,
                c_used: sol,
                formula_branch: PhiBranch::ConditionalExpectation,
            })
        }
        CminBranch::Positive => match m.monotonicity() {
            Monotonicity::DecreasingDensity => Ok(PhiValue {
                value: h_a(m, n, a, sol.c)?,
                c_used: sol,
                formula_branch: PhiBranch::HAtCmin,
            }),
            Monotonicity::IncreasingDensity => Ok(PhiValue {
                value: h_a(m, n, a, T::zero())?,
                c_used: sol,
                formula_branch: PhiBranch::HAtZero,
            }),
        },
    }
}

/// `φ₋(a)`: the function `φ` evaluated for the negated variable `-X`.
///
/// Requires a decreasing density with `G(0) = 0`; the value is always `<= 0`
/// with `φ₋(1) = 0`.
pub fn phi_minus<T: Real>(m: &dyn Marginal<T>, n: usize, a: T) -> Result<PhiValue<T>> {
    if m.monotonicity() != Monotonicity::DecreasingDensity {
        return Err(Error::Unsupported(
            "phi_minus requires a decreasing density".into(),
        ));
    }
    if a <= T::zero() {
        if m.quantile(T::one())?.is_finite() {
            // Bounded support: fall through with a = 0.
        } else {
            return Err(Error::Divergent(
                "phi_minus(0) diverges for unbounded support".into(),
            ));
        }
    }
    let g0 = m.quantile(T::zero())?;
    if g0.abs() > T::of(1e-9) {
        return Err(Error::Unsupported("phi_minus requires G(0) = 0".into()));
    }
    if a >= T::one() {
        return Ok(PhiValue {
            value: T::zero(),
            c_used: CminSolution {
                c: T::zero(),
                branch: CminBranch::Zero,
                residual: T::zero(),
            },
            formula_branch: PhiBranch::ConditionalExpectation,
        });
    }
    let neg = Negated::new(m);
    let sol = c_min(&neg, n, a)?;
    match sol.branch {
        CminBranch::Zero => {
            let value = -T::from_usize(n).unwrap() * m.cond_expect_below(T::one() - a)?;
            Ok(PhiValue {
                value,
                c_used: sol,
                formula_branch: PhiBranch::ConditionalExpectation,
            })
        }
        CminBranch::Positive => {
            // H_a^-(0) = -(G(1-a) + (n-1) G(0)).
            let nm1 = T::from_usize(n - 1).unwrap();
            let value = -(m.quantile(T::one() - a)? + nm1 * g0);
            Ok(PhiValue {
                value,
                c_used: sol,
                formula_branch: PhiBranch::HAtZero,
            })
        }
    }
}

/// `Φ(a) = Σ_i E[X_i | X_i >= G_i(a)]` for arbitrary monotone marginals.
pub fn big_phi<T: Real>(ms: &[&dyn Marginal<T>], a: T) -> Result<T> {
    if ms.is_empty() {
        return Err(Error::domain("big_phi requires at least one marginal"));
    }
    let mut total = T::zero();
    for m in ms {
        total = total + m.cond_expect_above(a)?;
    }
    Ok(total)
}

/// `Φ₋(a) = -Σ_i E[X_i | X_i < G_i(1-a)]` for `a` in `(0, 1]`.
pub fn big_phi_minus<T: Real>(ms: &[&dyn Marginal<T>], a: T) -> Result<T> {
    if ms.is_empty() {
        return Err(Error::domain(
            "big_phi_minus requires at least one marginal",
        ));
    }
    if a <= T::zero() {
        return Err(Error::domain("big_phi_minus requires a in (0, 1]"));
    }
    if a >= T::one() {
        // b -> 0 limit of the b-average of G over (0, b).
        let mut total = T::zero();
        for m in ms {
            total = total - m.quantile(T::zero())?;
        }
        return Ok(total);
    }
    let mut total = T::zero();
    for m in ms {
        total = total - m.cond_expect_below(T::one() - a)?;
    }
    Ok(total)
}

/// The best-case (infimum over joints) tail probability `m(s) = φ⁻¹(s)`.
pub fn worst_case_tail<T: Real>(m: &dyn Marginal<T>, n: usize, s: T) -> Result<T> {
    if s < T::zero() {
        return Err(Error::domain("threshold s must be >= 0"));
    }
    let phi0 = phi(m, n, T::zero())?.value;
    if s <= phi0 {
        return Ok(T::zero());
    }
    // phi is strictly increasing on [0, 1); expand the upper bracket toward 1.
    let mut hi = T::of(0.5);
    let mut phi_hi = phi(m, n, hi)?.value;
    let mut shrink = T::of(0.5);
    for _ in 0..60 {
        if phi_hi >= s {
            break;
        }
        shrink = shrink * T::of(0.5);
        hi = T::one() - shrink;
        phi_hi = phi(m, n, hi)?.value;
    }
    if phi_hi < s {
        // s beyond the reachable sum for bounded supports.
        return Ok(T::one());
    }
    let tol = Tolerance {
        abs_tol: T::of(1e-12),
        rel_tol: T::of(1e-12),
        max_iterations: 300,
    };
    find_root(
        |a| {
            phi(m, n, a)
                .map(|p| p.value - s)
                .unwrap_or_else(|_| T::nan())
        },
        T::zero(),
        hi,
        &tol,
    )
}

/// Smallest `a` for which `c⁻_n(a) = 0`, i.e. where `φ₋` switches to the
/// conditional-expectation branch (decreasing with `n`).
pub fn phi_minus_zero_threshold<T: Real>(m: &dyn Marginal<T>, n: usize) -> Result<T> {
    if m.monotonicity() != Monotonicity::DecreasingDensity {
        return Err(Error::Unsupported(
            "threshold requires a decreasing density".into(),
        ));
    }
    let neg = Negated::new(m);
    let use_closed = closed_form_gap(&neg, n, T::of(0.5), T::zero()).is_some();
    let gap_at_zero = |a: T| -> Result<T> {
        if use_closed {
            Ok(closed_form_gap(&neg, n, a, T::zero()).unwrap())
        } else {
            quadrature_gap(&neg, n, a, T::zero())
        }
    };
    // gap(0) > 0 for a near 0 (c⁻ > 0 there), <= 0 beyond the threshold.
    let mut lo = T::of(1e-12);
    let mut found = None;
    for k in 0..=240 {
        let e = -12.0 + 12.0 * k as f64 / 240.0;
        let a = T::of(10f64.powf(e)).min(T::of(1.0 - 1e-9));
        let g = gap_at_zero(a)?;
        if g <= T::zero() {
            found = Some((lo, a));
            break;
        }
        lo = a;
    }
    let (lo, hi) =
        found.ok_or_else(|| Error::domain("no a in (0,1) satisfies the zero-branch condition"))?;
    let tol = Tolerance {
        abs_tol: T::of(1e-14),
        rel_tol: T::of(1e-12),
        max_iterations: 300,
    };
    find_root(
        |a| gap_at_zero(a).unwrap_or_else(|_| T::nan()),
        lo,
        hi,
        &tol,
    )
}
