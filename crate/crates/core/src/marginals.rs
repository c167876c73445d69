//! Channel-gain marginal distributions.
//!
//! A [`Marginal`] is defined primarily by its quantile function `G`; every
//! bound downstream consumes `G`, the integrated quantile, and the two
//! conditional expectations derived from it.

use crate::numerics::{integrate, Tolerance};
use crate::{Error, Real, Result};

/// Monotonicity tag of the density on its support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    DecreasingDensity,
    IncreasingDensity,
}

/// A univariate channel-gain distribution.
pub trait Marginal<T: Real> {
    /// CDF `F(x)`.
    fn cdf(&self, x: T) -> Result<T>;
    /// Quantile function `G(u) = F^{-1}(u)` for `u` in `[0, 1]`.
    fn quantile(&self, u: T) -> Result<T>;
    /// Density `f(x)` on the support.
    fn density(&self, x: T) -> Result<T>;
    /// Support interval; endpoints may be infinite.
    fn support(&self) -> (T, T);
    fn monotonicity(&self) -> Monotonicity;
    fn mean(&self) -> T;
    /// True when the density is strictly positive at gain zero, so that
    /// `E[1/X]`-type integrals diverge.
    fn divergent_inverse_moment_at_zero(&self) -> bool;

    /// `Ψ(p, q) = ∫_p^q G(u) du`.
    fn integrated_quantile(&self, p: T, q: T) -> Result<T> {
        if p > q {
            return Err(Error::domain("integrated_quantile requires p <= q"));
        }
        let tol = Tolerance::default();
        integrate(
            |u| self.quantile(u).unwrap_or_else(|_| T::nan()),
            p,
            q,
            &tol,
        )
    }

    /// `E[X | X >= G(a)]` for `a` in `[0, 1)`.
    fn cond_expect_above(&self, a: T) -> Result<T> {
        if a < T::zero() || a >= T::one() {
            return Err(Error::domain("cond_expect_above requires a in [0, 1)"));
        }
        Ok(self.integrated_quantile(a, T::one())? / (T::one() - a))
    }

    /// `E[X | X < G(b)]` for `b` in `(0, 1]`.
    fn cond_expect_below(&self, b: T) -> Result<T> {
        if b <= T::zero() || b > T::one() {
            return Err(Error::domain("cond_expect_below requires b in (0, 1]"));
        }
        Ok(self.integrated_quantile(T::zero(), b)? / b)
    }

    /// Rate `λ` when this marginal is exponential; enables closed-form fast
    /// paths and the iid baseline.
    fn exponential_rate(&self) -> Option<T> {
        None
    }

    /// Rate `λ` when this marginal is the negation of an exponential.
    fn negated_exponential_rate(&self) -> Option<T> {
        None
    }
}

impl<T: Real, M: Marginal<T> + ?Sized> Marginal<T> for &M {
    fn cdf(&self, x: T) -> Result<T> {
        (**self).cdf(x)
    }
    fn quantile(&self, u: T) -> Result<T> {
        (**self).quantile(u)
    }
    fn density(&self, x: T) -> Result<T> {
        (**self).density(x)
    }
    fn support(&self) -> (T, T) {
        (**self).support()
    }
    fn monotonicity(&self) -> Monotonicity {
        (**self).monotonicity()
    }
    fn mean(&self) -> T {
        (**self).mean()
    }
    fn divergent_inverse_moment_at_zero(&self) -> bool {
        (**self).divergent_inverse_moment_at_zero()
    }
    fn integrated_quantile(&self, p: T, q: T) -> Result<T> {
        (**self).integrated_quantile(p, q)
    }
    fn cond_expect_above(&self, a: T) -> Result<T> {
        (**self).cond_expect_above(a)
    }
    fn cond_expect_below(&self, b: T) -> Result<T> {
        (**self).cond_expect_below(b)
    }
    fn exponential_rate(&self) -> Option<T> {
        (**self).exponential_rate()
    }
    fn negated_exponential_rate(&self) -> Option<T> {
        (**self).negated_exponential_rate()
    }
}

/// Exponential gain distribution `X ~ Exp(λ)` (squared Rayleigh amplitude).
#[derive(Debug, Clone, Copy)]
pub struct ExponentialMarginal<T> {
    rate: T,
}

impl<T: Real> ExponentialMarginal<T> {
    pub fn new(rate: T) -> Result<Self> {
        if rate.is_nan() || rate <= T::zero() || !rate.is_finite() {
            return Err(Error::domain(
                "exponential rate must be positive and finite",
            ));
        }
        Ok(ExponentialMarginal { rate })
    }

    pub fn rate(&self) -> T {
        self.rate
    }
}

impl<T: Real> Marginal<T> for ExponentialMarginal<T> {
    fn cdf(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        Ok(T::one() - (-self.rate * x).exp())
    }

    fn quantile(&self, u: T) -> Result<T> {
        if u < T::zero() || u > T::one() {
            return Err(Error::domain("quantile argument outside [0, 1]"));
        }
        // G(1) = +inf on the unbounded support.
        Ok(-(T::one() - u).ln() / self.rate)
    }

    fn density(&self, x: T) -> Result<T> {
        if x < T::zero() {
            return Ok(T::zero());
        }
        Ok(self.rate * (-self.rate * x).exp())
    }

    fn support(&self) -> (T, T) {
        (T::zero(), T::infinity())
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::DecreasingDensity
    }

    fn mean(&self) -> T {
        T::one() / self.rate
    }

    fn divergent_inverse_moment_at_zero(&self) -> bool {
        // G(u) ~ u/λ near zero.
        true
    }

    fn integrated_quantile(&self, p: T, q: T) -> Result<T> {
        if p > q {
            return Err(Error::domain("integrated_quantile requires p <= q"));
        }
        // Antiderivative of -ln(1-u) is (1-u)(ln(1-u) - 1).
        let anti = |u: T| {
            let w = T::one() - u;
            if w == T::zero() {
                T::zero()
            } else {
                w * (w.ln() - T::one())
            }
        };
        Ok((anti(q) - anti(p)) / self.rate)
    }

    fn cond_expect_above(&self, a: T) -> Result<T> {
        if a < T::zero() || a >= T::one() {
            return Err(Error::domain("cond_expect_above requires a in [0, 1)"));
        }
        // Lack of memory: 1/λ + G(a).
        Ok(self.mean() + self.quantile(a)?)
    }

    fn exponential_rate(&self) -> Option<T> {
        Some(self.rate)
    }
}

/// Uniform distribution on `[0, 1]`, a bounded-support test marginal.
///
/// The constant density counts as decreasing for branch selection.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformMarginal<T> {
    _marker: std::marker::PhantomData<T>,
}

impl<T: Real> UniformMarginal<T> {
    pub fn new() -> Self {
        UniformMarginal {
            _marker: std::marker::PhantomData,
        }
    }
}

impl<T: Real> Marginal<T> for UniformMarginal<T> {
    fn cdf(&self, x: T) -> Result<T> {
        Ok(x.max(T::zero()).min(T::one()))
    }

    fn quantile(&self, u: T) -> Result<T> {
        if u < T::zero() || u > T::one() {
            return Err(Error::domain("quantile argument outside [0, 1]"));
        }
        Ok(u)
    }

    fn density(&self, x: T) -> Result<T> {
        Ok(if x >= T::zero() && x <= T::one() {
            T::one()
        } else {
            T::zero()
        })
    }

    fn support(&self) -> (T, T) {
        (T::zero(), T::one())
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::DecreasingDensity
    }

    fn mean(&self) -> T {
        T::of(0.5)
    }

    fn divergent_inverse_moment_at_zero(&self) -> bool {
        true
    }

    fn integrated_quantile(&self, p: T, q: T) -> Result<T> {
        if p > q {
            return Err(Error::domain("integrated_quantile requires p <= q"));
        }
        Ok((q * q - p * p) * T::of(0.5))
    }
}

/// Marginal built from monotone interpolation of quantile samples.
///
/// The table maps probabilities to gains, both strictly increasing; values are
/// linearly interpolated and queries outside the tabulated probability range
/// are refused.
#[derive(Debug, Clone)]
pub struct QuantileTableMarginal<T> {
    probs: Vec<T>,
    gains: Vec<T>,
    monotonicity: Monotonicity,
    mean: T,
}

impl<T: Real> QuantileTableMarginal<T> {
    pub fn new(probs: Vec<T>, gains: Vec<T>, monotonicity: Monotonicity) -> Result<Self> {
        if probs.len() != gains.len() || probs.len() < 2 {
            return Err(Error::Parse(
                "quantile table needs >= 2 matching rows".into(),
            ));
        }
        for w in probs.windows(2) {
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::Parse(
                    "probability column must be strictly increasing".into(),
                ));
            }
        }
        for w in gains.windows(2) {
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::Parse(
                    "gain column must be strictly increasing".into(),
                ));
            }
        }
        if probs[0] < T::zero() || *probs.last().unwrap() > T::one() {
            return Err(Error::Parse("probabilities must lie in [0, 1]".into()));
        }
        if probs[0] != T::zero() || *probs.last().unwrap() != T::one() {
            return Err(Error::Parse(
                "quantile table must span probabilities 0 to 1".into(),
            ));
        }
        // Trapezoid integral of the piecewise-linear quantile function.
        let mut mean = T::zero();
        for i in 1..probs.len() {
            mean = mean + (probs[i] - probs[i - 1]) * (gains[i] + gains[i - 1]) * T::of(0.5);
        }
        Ok(QuantileTableMarginal {
            probs,
            gains,
            monotonicity,
            mean,
        })
    }

    /// Parses two-column text `probability gain`; `#` starts a comment.
    pub fn parse(text: &str, monotonicity: Monotonicity) -> Result<Self> {
        let mut probs = Vec::new();
        let mut gains = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (p, g) = match (it.next(), it.next(), it.next()) {
                (Some(p), Some(g), None) => (p, g),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected two columns, got {:?}",
                        lineno + 1,
                        line
                    )))
                }
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {}", lineno + 1, e)))
                    .map(T::of)
            };
            probs.push(parse(p)?);
            gains.push(parse(g)?);
        }
        QuantileTableMarginal::new(probs, gains, monotonicity)
    }

    /// Compares the declared monotonicity tag against sampled density
    /// differences; returns false when the samples contradict the tag.
    pub fn monotonicity_consistent(&self) -> bool {
        // Piecewise-constant density per segment: Δu / Δg.
        let mut prev: Option<T> = None;
        let slack = T::of(1e-9);
        for i in 1..self.probs.len() {
            let d = (self.probs[i] - self.probs[i - 1]) / (self.gains[i] - self.gains[i - 1]);
            if let Some(p) = prev {
                let ok = match self.monotonicity {
                    Monotonicity::DecreasingDensity => d <= p + slack,
                    Monotonicity::IncreasingDensity => d >= p - slack,
                };
                if !ok {
                    return false;
                }
            }
            prev = Some(d);
        }
        true
    }

    fn interp(xs: &[T], ys: &[T], x: T, what: &str) -> Result<T> {
        if x < xs[0] || x > *xs.last().unwrap() {
            return Err(Error::domain(format!(
                "{} {} outside tabulated range [{}, {}]",
                what,
                x,
                xs[0],
                xs.last().unwrap()
            )));
        }
        let idx = match xs.partition_point(|&v| v < x) {
            0 => 1,
            i => i.min(xs.len() - 1),
        };
        let (x0, x1) = (xs[idx - 1], xs[idx]);
        let (y0, y1) = (ys[idx - 1], ys[idx]);
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

impl<T: Real> Marginal<T> for QuantileTableMarginal<T> {
    fn cdf(&self, x: T) -> Result<T> {
        Self::interp(&self.gains, &self.probs, x, "gain")
    }

    fn quantile(&self, u: T) -> Result<T> {
        Self::interp(&self.probs, &self.gains, u, "probability")
    }

    fn density(&self, x: T) -> Result<T> {
        if x < self.gains[0] || x > *self.gains.last().unwrap() {
            return Ok(T::zero());
        }
        let idx = self
            .gains
            .partition_point(|&v| v < x)
            .clamp(1, self.gains.len() - 1);
        Ok((self.probs[idx] - self.probs[idx - 1]) / (self.gains[idx] - self.gains[idx - 1]))
    }

    fn support(&self) -> (T, T) {
        (self.gains[0], *self.gains.last().unwrap())
    }

    fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    fn mean(&self) -> T {
        self.mean
    }

    fn divergent_inverse_moment_at_zero(&self) -> bool {
        self.gains[0] <= T::zero()
    }

    fn integrated_quantile(&self, p: T, q: T) -> Result<T> {
        if p > q {
            return Err(Error::domain("integrated_quantile requires p <= q"));
        }
        if p == q {
            return Ok(T::zero());
        }
        // Exact trapezoid integration of the piecewise-linear quantile.
        let gp = self.quantile(p)?;
        let gq = self.quantile(q)?;
        let mut total = T::zero();
        let mut last_u = p;
        let mut last_g = gp;
        for i in 0..self.probs.len() {
            let u = self.probs[i];
            if u <= p {
                continue;
            }
            if u >= q {
                break;
            }
            total = total + (u - last_u) * (self.gains[i] + last_g) * T::of(0.5);
            last_u = u;
            last_g = self.gains[i];
        }
        total = total + (q - last_u) * (gq + last_g) * T::of(0.5);
        Ok(total)
    }
}

/// The law of `-X` for `X ~ m`: CDF `1 - F(-x)`, quantile `-G(1-u)`, density
/// `f(-x)`, monotonicity flipped.
#[derive(Debug, Clone, Copy)]
pub struct Negated<M> {
    inner: M,
}

impl<M> Negated<M> {
    pub fn new(inner: M) -> Self {
        Negated { inner }
    }

    pub fn into_inner(self) -> M {
        self.inner
    }
}

/// Negates a marginal with decreasing density.
pub fn negate<T: Real, M: Marginal<T>>(m: M) -> Negated<M> {
    Negated::new(m)
}

impl<T: Real, M: Marginal<T>> Marginal<T> for Negated<M> {
    fn cdf(&self, x: T) -> Result<T> {
        Ok(T::one() - self.inner.cdf(-x)?)
    }

    fn quantile(&self, u: T) -> Result<T> {
        Ok(-self.inner.quantile(T::one() - u)?)
    }

    fn density(&self, x: T) -> Result<T> {
        self.inner.density(-x)
    }

    fn support(&self) -> (T, T) {
        let (lo, hi) = self.inner.support();
        (-hi, -lo)
    }

    fn monotonicity(&self) -> Monotonicity {
        match self.inner.monotonicity() {
            Monotonicity::DecreasingDensity => Monotonicity::IncreasingDensity,
            Monotonicity::IncreasingDensity => Monotonicity::DecreasingDensity,
        }
    }

    fn mean(&self) -> T {
        -self.inner.mean()
    }

    fn divergent_inverse_moment_at_zero(&self) -> bool {
        self.inner.divergent_inverse_moment_at_zero()
    }

    fn integrated_quantile(&self, p: T, q: T) -> Result<T> {
        if p > q {
            return Err(Error::domain("integrated_quantile requires p <= q"));
        }
        // ∫_p^q -G(1-u) du = -∫_{1-q}^{1-p} G(v) dv
        Ok(-self.inner.integrated_quantile(T::one() - q, T::one() - p)?)
    }

    fn negated_exponential_rate(&self) -> Option<T> {
        self.inner.exponential_rate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn exponential_round_trip() {
        let m = ExponentialMarginal::new(1.5f64).unwrap();
        for k in 1..100 {
            let u = k as f64 / 100.0;
            let x = m.quantile(u).unwrap();
            assert_abs_diff_eq!(m.cdf(x).unwrap(), u, epsilon = 1e-9);
        }
    }

    #[test]
    fn exponential_integrated_quantile_closed_form() {
        let m = ExponentialMarginal::new(1.0f64).unwrap();
        assert_abs_diff_eq!(
            m.integrated_quantile(0.0, 1.0).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_eq!(m.integrated_quantile(0.3, 0.3).unwrap(), 0.0);
        let m2 = ExponentialMarginal::new(2.0f64).unwrap();
        assert_abs_diff_eq!(
            m2.integrated_quantile(0.0, 1.0).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        // Quadrature path cross-check.
        let tol = Tolerance::default();
        let quad = integrate(|u| m2.quantile(u).unwrap_or(f64::NAN), 0.0, 1.0, &tol).unwrap();
        assert_abs_diff_eq!(quad, 0.5, epsilon = 1e-7);
    }

    #[test]
    fn integrated_quantile_additivity() {
        let m = ExponentialMarginal::new(1.0f64).unwrap();
        let whole = m.integrated_quantile(0.1, 0.9).unwrap();
        let split =
            m.integrated_quantile(0.1, 0.4).unwrap() + m.integrated_quantile(0.4, 0.9).unwrap();
        assert_abs_diff_eq!(whole, split, epsilon = 1e-8);
    }

    #[test]
    fn cond_expect_above_memoryless() {
        let m = ExponentialMarginal::new(0.7f64).unwrap();
        for &a in &[0.0, 0.2, 0.5, 0.95] {
            let expected = m.mean() + m.quantile(a).unwrap();
            assert_abs_diff_eq!(m.cond_expect_above(a).unwrap(), expected, epsilon = 1e-12);
        }
        let m1 = ExponentialMarginal::new(1.0f64).unwrap();
        assert_abs_diff_eq!(
            m1.cond_expect_above(0.0).unwrap(),
            m1.mean(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            m1.cond_expect_above(0.5).unwrap(),
            1.0 + std::f64::consts::LN_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn cond_expect_above_nondecreasing() {
        let m = ExponentialMarginal::new(1.0f64).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..99 {
            let v = m.cond_expect_above(k as f64 / 100.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn cond_expect_below_values() {
        let m = ExponentialMarginal::new(1.0f64).unwrap();
        assert_abs_diff_eq!(m.cond_expect_below(1.0).unwrap(), m.mean(), epsilon = 1e-12);
        // Direct quadrature reference for b = 0.5.
        assert_abs_diff_eq!(
            m.cond_expect_below(0.5).unwrap(),
            0.3068528194400547,
            epsilon = 1e-9
        );
        // Table relation: -E[-X | -X > G_-(a)] = E[X | X < G(1-a)]
        // with E[-X | -X > G_-(a)] = (a - a ln a - 1) / (1 - a).
        for &a in &[0.2f64, 0.5, 0.9] {
            let lhs = -(a - a * a.ln() - 1.0) / (1.0 - a);
            assert_abs_diff_eq!(m.cond_expect_below(1.0 - a).unwrap(), lhs, epsilon = 1e-9);
        }
        assert!(m.cond_expect_below(0.0).is_err());
    }

    #[test]
    fn generic_quadrature_matches_exponential_closed_forms() {
        // Route the generic default implementations through a thin wrapper
        // that hides the closed forms.
        struct Plain(ExponentialMarginal<f64>);
        impl Marginal<f64> for Plain {
            fn cdf(&self, x: f64) -> Result<f64> {
                self.0.cdf(x)
            }
            fn quantile(&self, u: f64) -> Result<f64> {
                self.0.quantile(u)
            }
            fn density(&self, x: f64) -> Result<f64> {
                self.0.density(x)
            }
            fn support(&self) -> (f64, f64) {
                self.0.support()
            }
            fn monotonicity(&self) -> Monotonicity {
                self.0.monotonicity()
            }
            fn mean(&self) -> f64 {
                self.0.mean()
            }
            fn divergent_inverse_moment_at_zero(&self) -> bool {
                true
            }
        }
        let rate = 1.3f64;
        let closed = ExponentialMarginal::new(rate).unwrap();
        let plain = Plain(closed);
        for &(p, q) in &[(0.0, 1.0), (0.1, 0.6), (0.0, 0.5), (0.5, 0.999)] {
            assert_abs_diff_eq!(
                plain.integrated_quantile(p, q).unwrap(),
                closed.integrated_quantile(p, q).unwrap(),
                epsilon = 1e-7
            );
        }
        for &a in &[0.0, 0.3, 0.9] {
            assert_abs_diff_eq!(
                plain.cond_expect_above(a).unwrap(),
                closed.cond_expect_above(a).unwrap(),
                epsilon = 1e-7
            );
        }
    }

    #[test]
    fn negated_exponential_quantile() {
        let m = ExponentialMarginal::new(2.0f64).unwrap();
        let neg = negate(m);
        for &u in &[0.1, 0.3, 0.8] {
            assert_abs_diff_eq!(neg.quantile(u).unwrap(), u.ln() / 2.0, epsilon = 1e-12);
        }
        assert_eq!(neg.monotonicity(), Monotonicity::IncreasingDensity);
        assert_abs_diff_eq!(
            neg.cdf(neg.quantile(0.3).unwrap()).unwrap(),
            0.3,
            epsilon = 1e-9
        );
    }

    #[test]
    fn negation_is_an_involution() {
        let m = ExponentialMarginal::new(1.0f64).unwrap();
        let back = negate(negate(m));
        for &u in &[0.05, 0.5, 0.95] {
            assert_abs_diff_eq!(
                back.quantile(u).unwrap(),
                m.quantile(u).unwrap(),
                epsilon = 1e-12
            );
        }
        assert_eq!(back.monotonicity(), Monotonicity::DecreasingDensity);
    }

    #[test]
    fn uniform_marginal_basics() {
        let m = UniformMarginal::<f64>::new();
        assert_abs_diff_eq!(m.mean(), 0.5);
        assert_abs_diff_eq!(
            m.integrated_quantile(0.0, 1.0).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(m.cond_expect_above(0.5).unwrap(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn quantile_table_parse_and_query() {
        let text =
            "# probability gain\n0.0 0.0\n0.25 1.0\n0.5 2.0  # midpoint\n0.75 3.5\n1.0 6.0\n";
        let m = QuantileTableMarginal::parse(text, Monotonicity::DecreasingDensity).unwrap();
        assert_abs_diff_eq!(m.quantile(0.125).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.cdf(2.0).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            m.cdf(m.quantile(0.6).unwrap()).unwrap(),
            0.6,
            epsilon = 1e-12
        );
        assert!(m.quantile(1.5).is_err());
        assert_abs_diff_eq!(
            m.mean(),
            m.integrated_quantile(0.0, 1.0).unwrap(),
            epsilon = 1e-12
        );
        assert!(m.monotonicity_consistent());
    }

    #[test]
    fn quantile_table_rejects_bad_input() {
        assert!(QuantileTableMarginal::<f64>::parse(
            "0.0 0.0\n0.5 -1.0\n1.0 1.0",
            Monotonicity::DecreasingDensity
        )
        .is_err());
        assert!(QuantileTableMarginal::<f64>::parse(
            "0.0 0.0\n0.0 1.0\n1.0 2.0",
            Monotonicity::DecreasingDensity
        )
        .is_err());
        assert!(QuantileTableMarginal::<f64>::parse(
            "0.1 0.0\n1.0 2.0",
            Monotonicity::DecreasingDensity
        )
        .is_err());
        assert!(QuantileTableMarginal::<f64>::parse(
            "0.0 0.0 0.0\n1.0 2.0",
            Monotonicity::DecreasingDensity
        )
        .is_err());
    }

    #[test]
    fn quantile_table_monotonicity_check_flags_mismatch() {
        // Convex quantile table => decreasing density; the increasing tag is wrong.
        let text = "0.0 0.0\n0.5 1.0\n0.8 2.5\n1.0 5.0";
        let m = QuantileTableMarginal::<f64>::parse(text, Monotonicity::IncreasingDensity).unwrap();
        assert!(!m.monotonicity_consistent());
    }

    proptest! {
        #[test]
        fn prop_cdf_quantile_round_trip(rate in 0.2f64..5.0, u in 0.001f64..0.999) {
            let m = ExponentialMarginal::new(rate).unwrap();
            let x = m.quantile(u).unwrap();
            prop_assert!((m.cdf(x).unwrap() - u).abs() < 1e-9);
        }

        #[test]
        fn prop_integrated_quantile_additive(p in 0.0f64..0.4, mid in 0.4f64..0.7, q in 0.7f64..1.0) {
            let m = ExponentialMarginal::new(1.0f64).unwrap();
            let whole = m.integrated_quantile(p, q).unwrap();
            let split = m.integrated_quantile(p, mid).unwrap() + m.integrated_quantile(mid, q).unwrap();
            prop_assert!((whole - split).abs() < 1e-8);
        }
    }
}
