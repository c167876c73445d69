//! ε-outage and zero-outage capacities without transmitter CSI: extremal
//! bounds over all joint distributions, plus the iid and comonotonic
//! baselines.
//!
//! Rates are in bits per channel use; all internal gain math stays in natural
//! log. SNR is linear (dB conversion is a CLI concern).

use crate::depbounds::{big_phi, big_phi_minus, phi, phi_minus};
use crate::marginals::{Marginal, Monotonicity};
use crate::numerics::inv_reg_lower_gamma;
use crate::{Error, Real, Result};

/// One capacity query: `n` links at linear SNR `rho` and outage target
/// `epsilon`.
#[derive(Debug, Clone, Copy)]
pub struct SystemConfig<T> {
    pub n: usize,
    pub rho: T,
    pub epsilon: T,
}

impl<T: Real> SystemConfig<T> {
    pub fn new(n: usize, rho: T, epsilon: T) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("need at least one link"));
        }
        if rho.is_nan() || rho <= T::zero() || !rho.is_finite() {
            return Err(Error::domain("rho must be positive and finite"));
        }
        if epsilon < T::zero() || epsilon >= T::one() {
            return Err(Error::domain("epsilon must lie in [0, 1)"));
        }
        Ok(SystemConfig { n, rho, epsilon })
    }
}

/// Worst/best/iid/comonotonic rates for one configuration.
#[derive(Debug, Clone, Copy)]
pub struct BoundReport<T> {
    pub worst: T,
    pub best: T,
    /// Present only when the marginal is exponential.
    pub iid: Option<T>,
    pub comonotonic: T,
    /// `φ(ε)` behind the best-case rate.
    pub phi_best: T,
    /// `φ₋(1-ε)` behind the worst-case rate.
    pub phi_worst: T,
}

fn rate_from_gain<T: Real>(rho: T, gain: T) -> T {
    (T::one() + rho * gain).ln() / T::LN_2()
}

/// Best-case ε-outage capacity `log2(1 + ρ φ(ε))` for identical marginals.
pub fn eps_capacity_best<T: Real>(m: &dyn Marginal<T>, cfg: &SystemConfig<T>) -> Result<T> {
    if cfg.n == 1 {
        return Ok(rate_from_gain(cfg.rho, m.quantile(cfg.epsilon)?));
    }
    let p = phi(m, cfg.n, cfg.epsilon)?;
    Ok(rate_from_gain(cfg.rho, p.value))
}

/// Best-case upper bound `log2(1 + ρ Φ(ε))` for arbitrary monotone marginals.
pub fn eps_capacity_best_hetero<T: Real>(
    ms: &[&dyn Marginal<T>],
    cfg: &SystemConfig<T>,
) -> Result<T> {
    Ok(rate_from_gain(cfg.rho, big_phi(ms, cfg.epsilon)?))
}

/// Worst-case ε-outage capacity `log2(1 - ρ φ₋(1-ε))` for identical
/// marginals; exactly zero at ε = 0 for decreasing densities on `[0, ∞)`.
pub fn eps_capacity_worst<T: Real>(m: &dyn Marginal<T>, cfg: &SystemConfig<T>) -> Result<T> {
    if cfg.n == 1 {
        return Ok(rate_from_gain(cfg.rho, m.quantile(cfg.epsilon)?));
    }
    if cfg.epsilon == T::zero() && m.monotonicity() == Monotonicity::DecreasingDensity {
        return Ok(T::zero());
    }
    let pm = phi_minus(m, cfg.n, T::one() - cfg.epsilon)?;
    Ok(rate_from_gain(cfg.rho, -pm.value))
}

/// Worst-case lower bound `log2(1 - ρ Φ₋(1-ε))` for arbitrary monotone
/// marginals.
pub fn eps_capacity_worst_hetero<T: Real>(
    ms: &[&dyn Marginal<T>],
    cfg: &SystemConfig<T>,
) -> Result<T> {
    if cfg.epsilon == T::zero() {
        return Ok(T::zero());
    }
    let pm = big_phi_minus(ms, T::one() - cfg.epsilon)?;
    Ok(rate_from_gain(cfg.rho, -pm))
}

/// iid baseline for exponential gains: `log2(1 + ρ P⁻¹(n, ε) / λ)`.
pub fn eps_capacity_iid_exponential<T: Real>(cfg: &SystemConfig<T>, lambda: T) -> Result<T> {
    if lambda.is_nan() || lambda <= T::zero() {
        return Err(Error::domain("lambda must be positive"));
    }
    if cfg.epsilon == T::zero() {
        return Ok(T::zero());
    }
    let shape = u32::try_from(cfg.n).map_err(|_| Error::domain("n too large"))?;
    let g = inv_reg_lower_gamma(shape, cfg.epsilon)?;
    Ok(rate_from_gain(cfg.rho, g / lambda))
}

/// Comonotonic baseline `log2(1 + ρ n G(ε))`.
pub fn eps_capacity_comonotonic<T: Real>(m: &dyn Marginal<T>, cfg: &SystemConfig<T>) -> Result<T> {
    let g = m.quantile(cfg.epsilon)?;
    Ok(rate_from_gain(cfg.rho, T::from_usize(cfg.n).unwrap() * g))
}

/// Comonotonic baseline for different marginals: `log2(1 + ρ Σ G_i(ε))`.
pub fn eps_capacity_comonotonic_hetero<T: Real>(
    ms: &[&dyn Marginal<T>],
    cfg: &SystemConfig<T>,
) -> Result<T> {
    let mut sum = T::zero();
    for m in ms {
        sum = sum + m.quantile(cfg.epsilon)?;
    }
    Ok(rate_from_gain(cfg.rho, sum))
}

/// Best-case zero-outage capacity (strictly positive for decreasing
/// densities on the nonnegative reals).
pub fn zero_outage_best<T: Real>(m: &dyn Marginal<T>, rho: T, n: usize) -> Result<T> {
    let cfg = SystemConfig::new(n, rho, T::zero())?;
    eps_capacity_best(m, &cfg)
}

/// Heterogeneous best-case zero-outage capacity, `Φ(0) = Σ E[X_i]`.
pub fn zero_outage_best_hetero<T: Real>(ms: &[&dyn Marginal<T>], rho: T) -> Result<T> {
    let cfg = SystemConfig::new(ms.len().max(1), rho, T::zero())?;
    eps_capacity_best_hetero(ms, &cfg)
}

/// All four rates for one configuration.
pub fn bound_report<T: Real>(m: &dyn Marginal<T>, cfg: &SystemConfig<T>) -> Result<BoundReport<T>> {
    let best = eps_capacity_best(m, cfg)?;
    let worst = eps_capacity_worst(m, cfg)?;
    let comonotonic = eps_capacity_comonotonic(m, cfg)?;
    let iid = match m.exponential_rate() {
        Some(rate) => Some(eps_capacity_iid_exponential(cfg, rate)?),
        None => None,
    };
    let phi_best = if cfg.n == 1 {
        m.quantile(cfg.epsilon)?
    } else {
        phi(m, cfg.n, cfg.epsilon)?.value
    };
    let phi_worst = if cfg.n == 1 {
        -m.quantile(cfg.epsilon)?
    } else if cfg.epsilon == T::zero() {
        T::zero()
    } else {
        phi_minus(m, cfg.n, T::one() - cfg.epsilon)?.value
    };
    Ok(BoundReport {
        worst,
        best,
        iid,
        comonotonic,
        phi_best,
        phi_worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginals::ExponentialMarginal;
    use approx::assert_abs_diff_eq;

    fn exp1() -> ExponentialMarginal<f64> {
        ExponentialMarginal::new(1.0).unwrap()
    }

    fn db(x: f64) -> f64 {
        10f64.powf(x / 10.0)
    }

    #[test]
    fn best_two_link_closed_form() {
        let m = exp1();
        for &rho in &[0.5, 1.0, db(5.0)] {
            let cfg = SystemConfig::new(2, rho, 0.0).unwrap();
            let r = eps_capacity_best(&m, &cfg).unwrap();
            let expected = (1.0 + 2.0 * rho * std::f64::consts::LN_2).log2();
            assert_abs_diff_eq!(r, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn best_five_link_headline() {
        let cfg = SystemConfig::new(5, db(5.0), 0.0).unwrap();
        let r = eps_capacity_best(&exp1(), &cfg).unwrap();
        assert_abs_diff_eq!(r, 4.06, epsilon = 0.02);
    }

    #[test]
    fn best_hetero_normalized_closed_form() {
        // Means 2 + 0.5 + 1 + 0.5 sum to n = 4, so the closed form applies.
        let m1 = ExponentialMarginal::new(0.5f64).unwrap();
        let m2 = ExponentialMarginal::new(2.0f64).unwrap();
        let m3 = exp1();
        let m4 = ExponentialMarginal::new(2.0f64).unwrap();
        let ms: Vec<&dyn Marginal<f64>> = vec![&m1, &m2, &m3, &m4];
        let eps = 0.1f64;
        let cfg = SystemConfig::new(4, 2.0, eps).unwrap();
        let r = eps_capacity_best_hetero(&ms, &cfg).unwrap();
        let expected = (1.0 + 2.0 * 4.0 * (1.0 - (1.0 - eps).ln())).log2();
        assert_abs_diff_eq!(r, expected, epsilon = 1e-9);
    }

    #[test]
    fn worst_zero_outage_is_zero() {
        let cfg = SystemConfig::new(7, 3.0, 0.0).unwrap();
        assert_eq!(eps_capacity_worst(&exp1(), &cfg).unwrap(), 0.0);
    }

    #[test]
    fn worst_ten_link_value() {
        let cfg = SystemConfig::new(10, 1.0, 0.01).unwrap();
        let r = eps_capacity_worst(&exp1(), &cfg).unwrap();
        assert_abs_diff_eq!(r, (1.0f64 + 0.050167505033574).log2(), epsilon = 1e-9);
        assert_abs_diff_eq!(r, 0.0707, epsilon = 2e-4);
    }

    #[test]
    fn worst_hetero_normalized_closed_form() {
        let m = exp1();
        let ms: Vec<&dyn Marginal<f64>> = vec![&m; 5];
        let eps = 0.2f64;
        let cfg = SystemConfig::new(5, 1.5, eps).unwrap();
        let r = eps_capacity_worst_hetero(&ms, &cfg).unwrap();
        // -Φ₋(1-ε) = Σ E[X_i | X_i <= G_i(b)] with b = ε, and for rate-1
        // exponentials E[X | X <= G(b)] = (b + (1-b) ln(1-b)) / b.
        let b = eps;
        let expected = (1.0 + 1.5 * 5.0 * (b + (1.0 - b) * (1.0 - b).ln()) / b).log2();
        assert_abs_diff_eq!(r, expected, epsilon = 1e-9);
    }

    #[test]
    fn iid_single_link_matches_comonotonic() {
        let m = exp1();
        let cfg = SystemConfig::new(1, 2.0, 0.3).unwrap();
        let iid = eps_capacity_iid_exponential(&cfg, 1.0).unwrap();
        let com = eps_capacity_comonotonic(&m, &cfg).unwrap();
        assert_abs_diff_eq!(iid, com, epsilon = 1e-8);
        assert_abs_diff_eq!(iid, (1.0 - 2.0 * (0.7f64).ln()).log2(), epsilon = 1e-8);
    }

    #[test]
    fn iid_epsilon_zero_is_zero() {
        let cfg = SystemConfig::new(5, 2.0, 0.0).unwrap();
        assert_eq!(eps_capacity_iid_exponential(&cfg, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn comonotonic_values() {
        let m = exp1();
        let cfg0 = SystemConfig::new(5, 2.0, 0.0).unwrap();
        assert_eq!(eps_capacity_comonotonic(&m, &cfg0).unwrap(), 0.0);
        let rho = db(5.0);
        let cfg = SystemConfig::new(5, rho, 0.5).unwrap();
        let r = eps_capacity_comonotonic(&m, &cfg).unwrap();
        assert_abs_diff_eq!(
            r,
            (1.0 + rho * 5.0 * std::f64::consts::LN_2).log2(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(r, 3.58, epsilon = 0.01);
    }

    #[test]
    fn zero_outage_best_two_links_closed_form() {
        let rho = 1.7;
        let r = zero_outage_best(&exp1(), rho, 2).unwrap();
        let cap = (1.0 + rho * 2.0 * (2.0f64).ln()).log2();
        assert_abs_diff_eq!(r, cap, epsilon = 1e-9);
    }

    #[test]
    fn zero_outage_best_hetero_strictly_positive() {
        let m1 = ExponentialMarginal::new(0.5f64).unwrap();
        let m2 = ExponentialMarginal::new(3.0f64).unwrap();
        let ms: Vec<&dyn Marginal<f64>> = vec![&m1, &m2];
        let r = zero_outage_best_hetero(&ms, 1.0).unwrap();
        let expected = (1.0f64 + (2.0 + 1.0 / 3.0)).log2();
        assert_abs_diff_eq!(r, expected, epsilon = 1e-9);
        assert!(r > 0.0);
    }

    #[test]
    fn report_sandwich_and_zero_outage() {
        let m = exp1();
        let cfg = SystemConfig::new(5, db(5.0), 0.1).unwrap();
        let rep = bound_report(&m, &cfg).unwrap();
        let iid = rep.iid.unwrap();
        assert!(rep.worst <= iid && iid <= rep.best);
        assert!(rep.worst <= rep.comonotonic && rep.comonotonic <= rep.best);
        let cfg0 = SystemConfig::new(5, db(5.0), 0.0).unwrap();
        let rep0 = bound_report(&m, &cfg0).unwrap();
        assert_eq!(rep0.worst, 0.0);
        assert_eq!(rep0.iid.unwrap(), 0.0);
        assert_eq!(rep0.comonotonic, 0.0);
        assert!(rep0.best > 0.0);
    }

    #[test]
    fn report_single_link_degenerates() {
        let m = exp1();
        let cfg = SystemConfig::new(1, 2.0, 0.2).unwrap();
        let rep = bound_report(&m, &cfg).unwrap();
        assert_abs_diff_eq!(rep.worst, rep.best, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.best, rep.comonotonic, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.best, rep.iid.unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn rates_increase_with_rho_and_epsilon() {
        let m = exp1();
        let mut prev = 0.0;
        for k in 1..6 {
            let cfg = SystemConfig::new(3, k as f64, 0.1).unwrap();
            let r = eps_capacity_best(&m, &cfg).unwrap();
            assert!(r > prev);
            prev = r;
        }
        let mut prev = -1.0;
        for k in 0..6 {
            let cfg = SystemConfig::new(3, 2.0, k as f64 * 0.15).unwrap();
            let r = eps_capacity_worst(&m, &cfg).unwrap();
            assert!(r >= prev);
            prev = r;
        }
    }
}
