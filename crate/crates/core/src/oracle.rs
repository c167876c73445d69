//! Independent verification oracles.
//!
//! A rearrangement-algorithm estimator of the dependence-extremal quantiles
//! of the gain sum, plus Monte Carlo simulators for the iid and comonotonic
//! couplings. Nothing here evaluates the analytic extremal formulas — the
//! whole point is that agreement with them is evidence, not tautology.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::marginals::Marginal;
use crate::{Error, Real, Result};

/// Where inside each probability cell the quantile is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offset {
    Lower,
    Mid,
    Upper,
}

/// Which extremal quantile the rearrangement pass targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaMode {
    /// Block `[ε, 1]`, minimum row sum: estimates `φ(ε)`.
    MaxQuantile,
    /// Block `[0, ε]`, maximum row sum: estimates `-φ₋(1-ε)`.
    MinQuantile,
}

/// Joint distribution used by the Monte Carlo simulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Iid,
    Comonotonic,
}

/// `N × n` matrix of quantile atoms, one column per marginal, over a stated
/// probability block.
#[derive(Debug, Clone)]
pub struct QuantileMatrix<T> {
    columns: Vec<Vec<T>>,
    block: (T, T),
    rows: usize,
}

impl<T: Real> QuantileMatrix<T> {
    /// Column `j` holds `G_j(p + (q-p)(k+α)/N)` for `k = 0..N`, sorted
    /// ascending by construction. The upper offset with `q = 1` and unbounded
    /// support clamps the last atom at `G(1 - (q-p)/(2N))` — a documented
    /// bias; lower/upper runs bracket the mid estimate.
    pub fn discretize(
        ms: &[&dyn Marginal<T>],
        block: (T, T),
        rows: usize,
        offset: Offset,
    ) -> Result<Self> {
        let (p, q) = block;
        if !(p >= T::zero() && p < q && q <= T::one()) {
            return Err(Error::domain("block must satisfy 0 <= p < q <= 1"));
        }
        if rows < 2 {
            return Err(Error::domain("need at least 2 rows"));
        }
        if ms.is_empty() {
            return Err(Error::domain("need at least one marginal"));
        }
        let nrows = T::from_usize(rows).unwrap();
        let alpha = match offset {
            Offset::Lower => T::zero(),
            Offset::Mid => T::of(0.5),
            Offset::Upper => T::one(),
        };
        let width = q - p;
        let mut columns = Vec::with_capacity(ms.len());
        for m in ms {
            let mut col = Vec::with_capacity(rows);
            for k in 0..rows {
                let u = p + width * (T::from_usize(k).unwrap() + alpha) / nrows;
                let mut atom = m.quantile(u.min(T::one()))?;
                if !atom.is_finite() {
                    // Upper offset at q = 1 with unbounded support.
                    atom = m.quantile(T::one() - width / (T::of(2.0) * nrows))?;
                }
                col.push(atom);
            }
            columns.push(col);
        }
        Ok(QuantileMatrix {
            columns,
            block,
            rows,
        })
    }

    pub fn columns(&self) -> &[Vec<T>] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn block(&self) -> (T, T) {
        self.block
    }
}

/// Outcome of one rearrangement run.
#[derive(Debug, Clone, Copy)]
pub struct RaResult<T> {
    /// The min (max-quantile mode) or max (min-quantile mode) row sum at the
    /// final pass.
    pub extremal_sum: T,
    /// Full passes performed.
    pub iterations: usize,
    /// A full pass left the sorted row-sum vector unchanged. The column
    /// arrangement itself may keep cycling between sum-equivalent states, so
    /// stationarity of the sums is the convergence criterion.
    pub converged: bool,
}

const MAX_PASSES: usize = 100;

fn row_sums<T: Real>(columns: &[Vec<T>], rows: usize) -> Vec<T> {
    let mut sums = vec![T::zero(); rows];
    for col in columns {
        for (s, &v) in sums.iter_mut().zip(col) {
            *s = *s + v;
        }
    }
    sums
}

/// One full pass: each column is reordered oppositely to the sum of the other
/// columns (largest value against smallest partial sum), ties broken by row
/// index so runs are reproducible.
fn rearrange_pass<T: Real>(columns: &mut [Vec<T>], rows: usize) {
    let ncols = columns.len();
    for j in 0..ncols {
        let mut partial = vec![T::zero(); rows];
        for (jj, col) in columns.iter().enumerate() {
            if jj == j {
                continue;
            }
            for (s, &v) in partial.iter_mut().zip(col) {
                *s = *s + v;
            }
        }
        let mut order: Vec<usize> = (0..rows).collect();
        order.sort_by(|&a, &b| {
            partial[a]
                .partial_cmp(&partial[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut values = columns[j].clone();
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        for (rank, &row) in order.iter().enumerate() {
            columns[j][row] = values[rank];
        }
    }
}

fn run_ra<T: Real>(mut qm: QuantileMatrix<T>, mode: RaMode, seed: u64) -> (RaResult<T>, Vec<T>) {
    let rows = qm.rows;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for col in &mut qm.columns {
        col.shuffle(&mut rng);
    }
    let objective = |columns: &[Vec<T>]| -> T {
        let sums = row_sums(columns, rows);
        match mode {
            RaMode::MaxQuantile => sums.iter().cloned().fold(T::infinity(), T::min),
            RaMode::MinQuantile => sums.iter().cloned().fold(T::neg_infinity(), T::max),
        }
    };
    let sorted_sums = |columns: &[Vec<T>]| -> Vec<T> {
        let mut sums = row_sums(columns, rows);
        sums.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        sums
    };
    let mut prev = sorted_sums(&qm.columns);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_PASSES {
        rearrange_pass(&mut qm.columns, rows);
        iterations += 1;
        trace.push(objective(&qm.columns));
        let cur = sorted_sums(&qm.columns);
        if cur == prev {
            converged = true;
            break;
        }
        prev = cur;
    }
    (
        RaResult {
            extremal_sum: objective(&qm.columns),
            iterations,
            converged,
        },
        trace,
    )
}

/// Rearrangement estimate of the extremal ε-quantile of the gain sum.
///
/// `MaxQuantile` estimates `φ(ε)` (best-case quantile), `MinQuantile`
/// estimates `-φ₋(1-ε)` (worst-case quantile). Deterministic given `seed`.
pub fn ra_extremal_quantile<T: Real>(
    ms: &[&dyn Marginal<T>],
    epsilon: T,
    rows: usize,
    mode: RaMode,
    seed: u64,
) -> Result<RaResult<T>> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::domain("epsilon must lie in (0, 1)"));
    }
    if rows < 10 {
        return Err(Error::domain("need at least 10 rows"));
    }
    let block = match mode {
        RaMode::MaxQuantile => (epsilon, T::one()),
        RaMode::MinQuantile => (T::zero(), epsilon),
    };
    let qm = QuantileMatrix::discretize(ms, block, rows, Offset::Mid)?;
    Ok(run_ra(qm, mode, seed).0)
}

/// A Monte Carlo probability estimate with its binomial standard error.
#[derive(Debug, Clone, Copy)]
pub struct OutageEstimate<T> {
    pub probability: T,
    pub std_error: T,
}

/// Monte Carlo estimate of `P(Σ X_i < s)` under the given coupling.
pub fn mc_outage<T: Real>(
    ms: &[&dyn Marginal<T>],
    s: T,
    coupling: Coupling,
    samples: usize,
    seed: u64,
) -> Result<OutageEstimate<T>> {
    if samples < 1 {
        return Err(Error::domain("need at least one sample"));
    }
    if ms.is_empty() {
        return Err(Error::domain("need at least one marginal"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let shared = T::of(rng.gen::<f64>());
        let mut sum = T::zero();
        for m in ms {
            let u = match coupling {
                Coupling::Comonotonic => shared,
                Coupling::Iid => T::of(rng.gen::<f64>()),
            };
            sum = sum + m.quantile(u)?;
        }
        if sum < s {
            hits += 1;
        }
    }
    let nt = T::from_usize(samples).unwrap();
    let p = T::from_usize(hits).unwrap() / nt;
    let std_error = (p * (T::one() - p) / nt).sqrt();
    Ok(OutageEstimate {
        probability: p,
        std_error,
    })
}

/// A Monte Carlo mean estimate with standard error and a stability flag.
#[derive(Debug, Clone, Copy)]
pub struct InvSumEstimate<T> {
    pub mean: T,
    pub std_error: T,
    /// Set when single draws dominate the running mean or the relative
    /// standard error explodes — the signature of a divergent `E[1/S]`.
    pub unstable: bool,
}

/// Monte Carlo estimate of `E[1 / Σ X_i]` under the given coupling.
pub fn mc_expect_inv_sum<T: Real>(
    ms: &[&dyn Marginal<T>],
    coupling: Coupling,
    samples: usize,
    seed: u64,
) -> Result<InvSumEstimate<T>> {
    if samples < 1 {
        return Err(Error::domain("need at least one sample"));
    }
    if ms.is_empty() {
        return Err(Error::domain("need at least one marginal"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = T::zero();
    let mut m2 = T::zero();
    let mut max_term = T::zero();
    let mut total = T::zero();
    for k in 0..samples {
        let shared = T::of(rng.gen::<f64>());
        let mut sum = T::zero();
        for m in ms {
            let u = match coupling {
                Coupling::Comonotonic => shared,
                Coupling::Iid => T::of(rng.gen::<f64>()),
            };
            sum = sum + m.quantile(u)?;
        }
        let v = sum.recip();
        max_term = max_term.max(v);
        total = total + v;
        let kt = T::from_usize(k + 1).unwrap();
        let delta = v - mean;
        mean = mean + delta / kt;
        m2 = m2 + delta * (v - mean);
    }
    let nt = T::from_usize(samples).unwrap();
    let variance = if samples > 1 {
        m2 / (nt - T::one())
    } else {
        T::zero()
    };
    let std_error = (variance / nt).sqrt();
    let rel_se = if mean > T::zero() {
        std_error / mean
    } else {
        T::infinity()
    };
    let dominated = total > T::zero() && max_term / total > T::of(0.01);
    Ok(InvSumEstimate {
        mean,
        std_error,
        unstable: dominated || rel_se > T::of(0.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depbounds::{phi, phi_minus};
    use crate::marginals::{ExponentialMarginal, Monotonicity, QuantileTableMarginal};
    use crate::numerics::reg_lower_gamma;
    use approx::assert_abs_diff_eq;

    fn exp1() -> ExponentialMarginal<f64> {
        ExponentialMarginal::new(1.0).unwrap()
    }

    fn sorted(v: &[f64]) -> Vec<f64> {
        let mut v = v.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn discretize_mid_atoms() {
        let m = exp1();
        let qm = QuantileMatrix::discretize(&[&m], (0.0, 1.0), 4, Offset::Mid).unwrap();
        let expect: Vec<f64> = [0.125, 0.375, 0.625, 0.875]
            .iter()
            .map(|&u| -(1.0f64 - u).ln())
            .collect();
        for (a, e) in qm.columns()[0].iter().zip(&expect) {
            assert_abs_diff_eq!(a, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn discretize_offsets_bracket_mid() {
        let m = exp1();
        let lo = QuantileMatrix::discretize(&[&m], (0.1, 0.9), 8, Offset::Lower).unwrap();
        let mid = QuantileMatrix::discretize(&[&m], (0.1, 0.9), 8, Offset::Mid).unwrap();
        let hi = QuantileMatrix::discretize(&[&m], (0.1, 0.9), 8, Offset::Upper).unwrap();
        for k in 0..8 {
            assert!(lo.columns()[0][k] <= mid.columns()[0][k]);
            assert!(mid.columns()[0][k] <= hi.columns()[0][k]);
        }
    }

    #[test]
    fn discretize_upper_clamps_unbounded_tail() {
        let m = exp1();
        let qm = QuantileMatrix::discretize(&[&m], (0.0, 1.0), 4, Offset::Upper).unwrap();
        let last = qm.columns()[0][3];
        assert!(last.is_finite());
        assert_abs_diff_eq!(last, -(1.0f64 / 8.0).ln(), epsilon = 1e-12);
    }

    #[test]
    fn discretize_identical_columns() {
        let m = exp1();
        let qm = QuantileMatrix::discretize(&[&m, &m], (0.2, 1.0), 16, Offset::Mid).unwrap();
        assert_eq!(qm.columns()[0], qm.columns()[1]);
    }

    #[test]
    fn rearrangement_preserves_column_multisets() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m, &m, &m];
        let qm = QuantileMatrix::discretize(&ms, (0.1, 1.0), 64, Offset::Mid).unwrap();
        let before: Vec<Vec<f64>> = qm.columns().iter().map(|c| sorted(c)).collect();
        let (result, _) = {
            let mut qm2 = qm.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for col in &mut qm2.columns {
                col.shuffle(&mut rng);
            }
            for _ in 0..5 {
                rearrange_pass(&mut qm2.columns, qm2.rows);
            }
            let after: Vec<Vec<f64>> = qm2.columns().iter().map(|c| sorted(c)).collect();
            assert_eq!(before, after);
            run_ra(qm, RaMode::MaxQuantile, 7)
        };
        assert!(result.converged);
    }

    #[test]
    fn pass_objectives_are_monotone() {
        // Each opposite reordering can only improve the objective: the min
        // row sum rises in max-quantile mode and the max row sum falls in
        // min-quantile mode.
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m, &m, &m];
        let qmax = QuantileMatrix::discretize(&ms, (0.1, 1.0), 500, Offset::Mid).unwrap();
        let (_, trace) = run_ra(qmax, RaMode::MaxQuantile, 11);
        for w in trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "max mode dipped: {:?}", w);
        }
        let qmin = QuantileMatrix::discretize(&ms, (0.0, 0.1), 500, Offset::Mid).unwrap();
        let (_, trace) = run_ra(qmin, RaMode::MinQuantile, 11);
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "min mode rose: {:?}", w);
        }
    }

    #[test]
    fn ra_matches_phi_two_links() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m, &m];
        let r = ra_extremal_quantile(&ms, 0.01, 2000, RaMode::MaxQuantile, 1).unwrap();
        let exact = phi(&m, 2, 0.01).unwrap().value;
        assert!(
            (r.extremal_sum - exact).abs() / exact < 0.02,
            "{} vs {exact}",
            r.extremal_sum
        );
    }

    #[test]
    fn ra_matches_phi_minus_two_links() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m, &m];
        let r = ra_extremal_quantile(&ms, 0.5, 2000, RaMode::MinQuantile, 1).unwrap();
        let exact = -phi_minus(&m, 2, 0.5).unwrap().value;
        assert!(
            (r.extremal_sum - exact).abs() / exact < 0.02,
            "{} vs {exact}",
            r.extremal_sum
        );
    }

    #[test]
    fn ra_single_column_returns_block_edge() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m];
        let r = ra_extremal_quantile(&ms, 0.2, 4000, RaMode::MaxQuantile, 3).unwrap();
        let g = -(0.8f64).ln();
        assert_abs_diff_eq!(r.extremal_sum, g, epsilon = 1e-3);
    }

    #[test]
    fn ra_error_shrinks_with_rows() {
        let m = exp1();
        for n in [2usize, 3] {
            let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m; n];
            for eps in [0.01, 0.1] {
                let exact = phi(&m, n, eps).unwrap().value;
                let err = |rows: usize| {
                    let r = ra_extremal_quantile(&ms, eps, rows, RaMode::MaxQuantile, 5).unwrap();
                    (r.extremal_sum - exact).abs()
                };
                assert!(err(4000) <= err(500), "n={n} eps={eps}");
            }
        }
    }

    #[test]
    fn ra_rejects_degenerate_block() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m, &m];
        assert!(ra_extremal_quantile(&ms, 0.0, 100, RaMode::MinQuantile, 0).is_err());
    }

    #[test]
    fn mc_comonotonic_outage_is_exact_event() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m; 4];
        let eps = 0.3;
        let s = 4.0 * -(1.0f64 - eps).ln();
        let est = mc_outage(&ms, s, Coupling::Comonotonic, 100_000, 42).unwrap();
        assert!((est.probability - eps).abs() <= 3.0 * est.std_error);
    }

    #[test]
    fn mc_iid_outage_matches_gamma_cdf() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m; 5];
        for s in [2.0f64, 5.0, 8.0] {
            let est = mc_outage(&ms, s, Coupling::Iid, 200_000, 9).unwrap();
            let exact = reg_lower_gamma(5, s).unwrap();
            assert!(
                (est.probability - exact).abs() <= 3.0 * est.std_error.max(1e-4),
                "s={s}: {} vs {exact}",
                est.probability
            );
        }
    }

    #[test]
    fn mc_outage_at_zero_threshold() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m, &m];
        let est = mc_outage(&ms, 0.0, Coupling::Iid, 10_000, 1).unwrap();
        assert_eq!(est.probability, 0.0);
    }

    #[test]
    fn mc_inv_sum_iid_exponential() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m; 5];
        let est = mc_expect_inv_sum(&ms, Coupling::Iid, 1_000_000, 17).unwrap();
        assert!(!est.unstable);
        assert!(
            (est.mean - 0.25).abs() <= 3.0 * est.std_error,
            "{} ± {}",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn mc_inv_sum_comonotonic_divergence_flagged() {
        let m = exp1();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m, &m];
        let est = mc_expect_inv_sum(&ms, Coupling::Comonotonic, 100_000, 23).unwrap();
        assert!(est.unstable);
    }

    #[test]
    fn mc_inv_sum_bounded_support() {
        let m: QuantileTableMarginal<f64> = QuantileTableMarginal::new(
            vec![0.0, 1.0],
            vec![1.0, 2.0],
            Monotonicity::DecreasingDensity,
        )
        .unwrap();
        let ms: Vec<&dyn crate::marginals::Marginal<f64>> = vec![&m; 3];
        for coupling in [Coupling::Iid, Coupling::Comonotonic] {
            let est = mc_expect_inv_sum(&ms, coupling, 50_000, 5).unwrap();
            assert!(est.mean >= 1.0 / 6.0 && est.mean <= 1.0 / 3.0);
            assert!(!est.unstable);
        }
    }
}
