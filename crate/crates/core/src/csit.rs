//! Zero-outage capacity with transmitter channel-state information.
//!
//! With CSIT the transmitter inverts the instantaneous sum gain, so the
//! delay-limited rate is `log2(1 + ρ / E[1/S])` with `S = Σ X_i`. The best
//! case minimizes `E[1/S]` over all joints; the worst case maximizes it
//! (comonotonic, which can diverge).

use crate::depbounds::{c_min, h_a, CminBranch};
use crate::marginals::{Marginal, Monotonicity};
use crate::numerics::{integrate, Tolerance};
use crate::{Error, Real, Result};

/// Zero-outage CSIT rates for one configuration.
#[derive(Debug, Clone, Copy)]
pub struct CsitReport<T> {
    pub best: T,
    /// Comonotonic (worst) rate; zero when `E[1/S]` diverges.
    pub worst: T,
    /// Present only for exponential marginals with `n >= 2`.
    pub iid: Option<T>,
    /// The minimized `E[1/S]` behind the best-case rate.
    pub min_inverse_sum_expectation: T,
}

/// Minimum of `E[g(S)]` over joints, for convex decreasing `g` and identical
/// marginals with decreasing density.
///
/// With `c = c_n(0)`: `n ∫_0^c g(H_0(t)) dt + (1 - n c) g(H_0(c))`; when
/// `c = 0` the sum concentrates and the value is `g(n E[X])`.
pub fn min_expected_convex<T, G>(m: &dyn Marginal<T>, n: usize, g: G) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    if n < 2 {
        return Err(Error::domain("min_expected_convex requires n >= 2"));
    }
    if m.monotonicity() != Monotonicity::DecreasingDensity {
        return Err(Error::Unsupported(
            "min_expected_convex requires a decreasing density".into(),
        ));
    }
    let sol = c_min(m, n, T::zero())?;
    let nt = T::from_usize(n).unwrap();
    if sol.branch == CminBranch::Zero {
        return Ok(g(nt * m.mean()));
    }
    let tol = Tolerance::default();
    let integral = integrate(
        |t| match h_a(m, n, T::zero(), t) {
            Ok(h) => g(h),
            Err(_) => T::nan(),
        },
        T::zero(),
        sol.c,
        &tol,
    )?;
    let at_c = g(h_a(m, n, T::zero(), sol.c)?);
    Ok(nt * integral + (T::one() - nt * sol.c) * at_c)
}

/// Best-case zero-outage CSIT capacity `log2(1 + ρ / min E[1/S])`.
pub fn zero_outage_csit_best<T: Real>(m: &dyn Marginal<T>, n: usize, rho: T) -> Result<T> {
    if rho.is_nan() || rho <= T::zero() || !rho.is_finite() {
        return Err(Error::domain("rho must be positive and finite"));
    }
    let e = min_expected_convex(m, n, |x| x.recip())?;
    Ok((T::one() + rho / e).ln() / T::LN_2())
}

/// Worst-case (comonotonic) zero-outage CSIT capacity.
///
/// `E[1/S] = (1/n) ∫_0^1 du / G(u)`, which diverges — rate zero — whenever
/// `1/G` is not integrable at `u = 0` (e.g. any exponential marginal).
pub fn zero_outage_csit_worst<T: Real>(m: &dyn Marginal<T>, n: usize, rho: T) -> Result<T> {
    if rho.is_nan() || rho <= T::zero() || !rho.is_finite() {
        return Err(Error::domain("rho must be positive and finite"));
    }
    if n < 1 {
        return Err(Error::domain("need at least one link"));
    }
    if m.divergent_inverse_moment_at_zero() {
        return Ok(T::zero());
    }
    let nt = T::from_usize(n).unwrap();
    let tol = Tolerance::default();
    let e = integrate(
        |u| match m.quantile(u) {
            Ok(gq) => (nt * gq).recip(),
            Err(_) => T::nan(),
        },
        T::zero(),
        T::one(),
        &tol,
    )?;
    Ok((T::one() + rho / e).ln() / T::LN_2())
}

/// Comonotonic zero-outage CSIT capacity for different marginals:
/// `E[1/S] = ∫_0^1 du / Σ_i G_i(u)`.
pub fn zero_outage_csit_worst_hetero<T: Real>(ms: &[&dyn Marginal<T>], rho: T) -> Result<T> {
    if ms.is_empty() {
        return Err(Error::domain("need at least one marginal"));
    }
    if rho.is_nan() || rho <= T::zero() || !rho.is_finite() {
        return Err(Error::domain("rho must be positive and finite"));
    }
    if ms.iter().all(|m| m.divergent_inverse_moment_at_zero()) {
        return Ok(T::zero());
    }
    let tol = Tolerance::default();
    let e = integrate(
        |u| {
            let mut s = T::zero();
            for m in ms {
                match m.quantile(u) {
                    Ok(gq) => s = s + gq,
                    Err(_) => return T::nan(),
                }
            }
            s.recip()
        },
        T::zero(),
        T::one(),
        &tol,
    )?;
    Ok((T::one() + rho / e).ln() / T::LN_2())
}

/// iid exponential zero-outage CSIT capacity `log2(1 + ρ (n-1) / λ)`.
///
/// Uses `E[1/S] = λ / (n-1)` for a sum of `n >= 2` iid exponentials; the
/// expectation diverges at `n = 1`.
pub fn zero_outage_csit_iid_exponential<T: Real>(n: usize, rho: T, lambda: T) -> Result<T> {
    if n < 2 {
        return Err(Error::domain("iid exponential CSIT rate requires n >= 2"));
    }
    if lambda.is_nan() || lambda <= T::zero() {
        return Err(Error::domain("lambda must be positive"));
    }
    if rho.is_nan() || rho <= T::zero() || !rho.is_finite() {
        return Err(Error::domain("rho must be positive and finite"));
    }
    let nm1 = T::from_usize(n - 1).unwrap();
    Ok((T::one() + rho * nm1 / lambda).ln() / T::LN_2())
}

/// All CSIT rates for one configuration.
pub fn csit_report<T: Real>(m: &dyn Marginal<T>, n: usize, rho: T) -> Result<CsitReport<T>> {
    let e_min = min_expected_convex(m, n, |x: T| x.recip())?;
    let best = (T::one() + rho / e_min).ln() / T::LN_2();
    let worst = zero_outage_csit_worst(m, n, rho)?;
    let iid = match m.exponential_rate() {
        Some(rate) if n >= 2 => Some(zero_outage_csit_iid_exponential(n, rho, rate)?),
        _ => None,
    };
    Ok(CsitReport {
        best,
        worst,
        iid,
        min_inverse_sum_expectation: e_min,
    })
}
