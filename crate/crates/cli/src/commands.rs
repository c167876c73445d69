//! The four subcommand implementations. Each produces a [`Table`]; `verify`
//! additionally decides the process exit code from its comparison rows.

use outage_bounds::capacity::{
    bound_report, eps_capacity_best_hetero, eps_capacity_comonotonic_hetero,
    eps_capacity_worst_hetero, zero_outage_best, SystemConfig,
};
use outage_bounds::csit::{zero_outage_csit_best, zero_outage_csit_iid_exponential};
use outage_bounds::depbounds::{c_min, phi, phi_minus, CminBranch};
use outage_bounds::numerics::reg_lower_gamma;
use outage_bounds::oracle::{mc_outage, ra_extremal_quantile, Coupling, RaMode};

use crate::options::{MarginalSet, Resolved};
use crate::output::{Cell, Table};
use crate::CliError;

fn num(x: f64) -> Cell {
    Cell::Number(x)
}

fn single_n(opts: &Resolved, what: &str) -> Result<usize, CliError> {
    match opts.ns.as_slice() {
        [n] => Ok(*n),
        _ => Err(CliError::Usage(format!(
            "{what} expects a single --n value"
        ))),
    }
}

/// `bounds`: worst/iid/comonotonic/best ε-outage rates over an ε sweep.
pub fn cmd_bounds(opts: &Resolved) -> Result<Table, CliError> {
    let n = single_n(opts, "bounds")?;
    let mut table = Table::new(vec!["eps", "worst", "iid", "comonotonic", "best"]);
    for &eps in &opts.eps_values {
        let cfg = SystemConfig::new(n, opts.rho, eps).map_err(CliError::Numeric)?;
        match &opts.marginal {
            MarginalSet::Identical(m) => {
                let rep = bound_report(m.as_ref(), &cfg).map_err(CliError::Numeric)?;
                table.push(vec![
                    num(eps),
                    num(rep.worst),
                    rep.iid.map(num).unwrap_or(Cell::Missing),
                    num(rep.comonotonic),
                    num(rep.best),
                ]);
            }
            MarginalSet::HeterogeneousExp(_) => {
                let ms = opts.marginal.per_link(n);
                let worst = eps_capacity_worst_hetero(&ms, &cfg).map_err(CliError::Numeric)?;
                let com = eps_capacity_comonotonic_hetero(&ms, &cfg).map_err(CliError::Numeric)?;
                let best = eps_capacity_best_hetero(&ms, &cfg).map_err(CliError::Numeric)?;
                table.push(vec![
                    num(eps),
                    num(worst),
                    Cell::Missing,
                    num(com),
                    num(best),
                ]);
            }
        }
    }
    Ok(table)
}

/// `cmin`: the tail-split parameter c_n(a) with its formula branch, over an
/// `a` sweep for each requested n.
pub fn cmd_cmin(opts: &Resolved) -> Result<Table, CliError> {
    let m = match &opts.marginal {
        MarginalSet::Identical(m) => m.as_ref(),
        MarginalSet::HeterogeneousExp(_) => {
            return Err(CliError::Usage("cmin expects a single marginal".into()))
        }
    };
    let mut table = Table::new(vec!["n", "a", "c", "branch"]);
    for &n in &opts.ns {
        if n < 2 {
            return Err(CliError::Usage("cmin requires n >= 2".into()));
        }
        for &a in &opts.eps_values {
            let sol = c_min(m, n, a).map_err(CliError::Numeric)?;
            let branch = match sol.branch {
                CminBranch::Zero => "zero",
                CminBranch::Positive => "positive",
            };
            table.push(vec![
                num(n as f64),
                num(a),
                num(sol.c),
                Cell::Text(branch.into()),
            ]);
        }
    }
    Ok(table)
}

/// `csit`: zero-outage rates with transmitter CSI over an n sweep, with the
/// no-CSI best rate and the CSIT-vs-no-CSIT gap.
pub fn cmd_csit(opts: &Resolved) -> Result<Table, CliError> {
    let m = match &opts.marginal {
        MarginalSet::Identical(m) => m.as_ref(),
        MarginalSet::HeterogeneousExp(_) => {
            return Err(CliError::Usage("csit expects a single marginal".into()))
        }
    };
    let mut table = Table::new(vec!["n", "csit_best", "csit_iid", "nocsit_best", "gap"]);
    for &n in &opts.ns {
        if n < 2 {
            // Single link: only one coupling exists (best = worst) and the
            // iid closed form is undefined.
            let best = outage_bounds::csit::zero_outage_csit_worst(m, 1, opts.rho)
                .map_err(CliError::Numeric)?;
            let no_csit = zero_outage_best(m, opts.rho, 1).map_err(CliError::Numeric)?;
            table.push(vec![
                num(1.0),
                num(best),
                Cell::Missing,
                num(no_csit),
                num(best - no_csit),
            ]);
            continue;
        }
        let best = zero_outage_csit_best(m, n, opts.rho).map_err(CliError::Numeric)?;
        let iid = match m.exponential_rate() {
            Some(rate) => Cell::Number(
                zero_outage_csit_iid_exponential(n, opts.rho, rate).map_err(CliError::Numeric)?,
            ),
            None => Cell::Missing,
        };
        let no_csit = zero_outage_best(m, opts.rho, n).map_err(CliError::Numeric)?;
        table.push(vec![
            num(n as f64),
            num(best),
            iid,
            num(no_csit),
            num(best - no_csit),
        ]);
    }
    Ok(table)
}

/// `verify`: analytic values against the rearrangement and Monte Carlo
/// oracles. Returns the table plus the exit code: 0 when every row is inside
/// `--tolerance`, 3 when a comparison exceeds it (non-convergence surfaces as
/// a numeric error before any comparison).
pub fn cmd_verify(opts: &Resolved) -> Result<(Table, i32), CliError> {
    let n = single_n(opts, "verify")?;
    let m = match &opts.marginal {
        MarginalSet::Identical(m) => m.as_ref(),
        MarginalSet::HeterogeneousExp(_) => {
            return Err(CliError::Usage("verify expects a single marginal".into()))
        }
    };
    let eps = match opts.eps_values.as_slice() {
        [eps] => *eps,
        _ => return Err(CliError::Usage("verify expects a single --eps".into())),
    };
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Usage("verify requires eps in (0, 1)".into()));
    }
    let ms = opts.marginal.per_link(n);
    let mut table = Table::new(vec![
        "quantity",
        "analytic",
        "estimate",
        "rel_error",
        "converged",
    ]);
    let mut worst_rel = 0.0f64;
    let mut push =
        |table: &mut Table, name: &str, analytic: f64, estimate: f64, converged: Option<bool>| {
            let rel = (estimate - analytic).abs() / analytic.abs().max(f64::MIN_POSITIVE);
            worst_rel = worst_rel.max(rel);
            table.push(vec![
                Cell::Text(name.into()),
                num(analytic),
                num(estimate),
                num(rel),
                converged.map(Cell::Bool).unwrap_or(Cell::Missing),
            ]);
        };

    // Best-case quantile phi(eps) against the max-quantile rearrangement.
    let analytic_phi = if n == 1 {
        m.quantile(eps).map_err(CliError::Numeric)?
    } else {
        phi(m, n, eps).map_err(CliError::Numeric)?.value
    };
    let ra = ra_extremal_quantile(&ms, eps, opts.oracle_n, RaMode::MaxQuantile, opts.seed)
        .map_err(CliError::Numeric)?;
    if !ra.converged {
        return Err(CliError::Numeric(outage_bounds::Error::NoConvergence {
            iterations: ra.iterations,
            context: "max-quantile rearrangement",
        }));
    }
    push(
        &mut table,
        "phi",
        analytic_phi,
        ra.extremal_sum,
        Some(ra.converged),
    );

    // Worst-case quantile -phi_minus(1-eps) against the min-quantile pass.
    let analytic_minus = if n == 1 {
        m.quantile(eps).map_err(CliError::Numeric)?
    } else {
        -phi_minus(m, n, 1.0 - eps).map_err(CliError::Numeric)?.value
    };
    let ra = ra_extremal_quantile(&ms, eps, opts.oracle_n, RaMode::MinQuantile, opts.seed)
        .map_err(CliError::Numeric)?;
    if !ra.converged {
        return Err(CliError::Numeric(outage_bounds::Error::NoConvergence {
            iterations: ra.iterations,
            context: "min-quantile rearrangement",
        }));
    }
    push(
        &mut table,
        "phi_minus",
        analytic_minus,
        ra.extremal_sum,
        Some(ra.converged),
    );

    // Monte Carlo iid outage against the Gamma CDF (exponential marginals
    // only — no closed-form iid law otherwise).
    if let Some(rate) = m.exponential_rate() {
        let s = n as f64 * m.quantile(eps).map_err(CliError::Numeric)?;
        let exact = reg_lower_gamma(n as u32, rate * s).map_err(CliError::Numeric)?;
        let est =
            mc_outage(&ms, s, Coupling::Iid, opts.samples, opts.seed).map_err(CliError::Numeric)?;
        push(&mut table, "mc_iid_outage", exact, est.probability, None);
    }

    let code = if worst_rel > opts.tolerance { 3 } else { 0 };
    Ok((table, code))
}
