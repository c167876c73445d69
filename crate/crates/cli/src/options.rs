//! Flag resolution: command-line values, `key = value` config file, preset
//! defaults, and built-in defaults, in that order of precedence.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::Args;

use outage_bounds::marginals::{Marginal, Monotonicity, QuantileTableMarginal};
use outage_bounds::ExponentialMarginal64;

use crate::output::Format;
use crate::CliError;

/// Flags shared by every subcommand. All optional so that config files and
/// presets can supply what the command line omits.
#[derive(Debug, Clone, Args, Default)]
pub struct CommonArgs {
    /// `key = value` file mirroring these flags; explicit flags win.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Marginal spec: `exp:LAMBDA[,LAMBDA...]` or `table:PATH`.
    #[arg(long, value_name = "SPEC")]
    pub marginal: Option<String>,

    /// Number of links; a comma list sweeps over n where the command allows.
    #[arg(long, value_name = "N[,N...]")]
    pub n: Option<String>,

    /// SNR in dB (exclusive with --rho).
    #[arg(long, value_name = "DB", conflicts_with = "rho")]
    pub rho_db: Option<f64>,

    /// Linear SNR.
    #[arg(long, value_name = "RHO")]
    pub rho: Option<f64>,

    /// Single probability level (outage target, or `a` for cmin).
    #[arg(long, value_name = "P", conflicts_with = "eps_grid")]
    pub eps: Option<f64>,

    /// Probability grid START:STOP:COUNT, endpoints included.
    #[arg(long, value_name = "START:STOP:COUNT")]
    pub eps_grid: Option<String>,

    /// Rescale a heterogeneous exponential list so the means sum to n.
    #[arg(long)]
    pub normalize_sum: bool,

    /// Output format.
    #[arg(long, value_name = "csv|json")]
    pub format: Option<String>,

    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Parameter preset: fig1 (cmin), fig2 (bounds), fig3 (csit).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,

    /// Seed for the rearrangement and Monte Carlo oracles.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Rows in the rearrangement quantile matrix.
    #[arg(long, value_name = "ROWS")]
    pub oracle_n: Option<usize>,

    /// Monte Carlo sample count.
    #[arg(long, value_name = "COUNT")]
    pub samples: Option<usize>,

    /// Maximum accepted relative error in `verify`.
    #[arg(long, value_name = "REL")]
    pub tolerance: Option<f64>,
}

/// The marginal model after parsing: one shared distribution, or one
/// exponential per link.
pub enum MarginalSet {
    Identical(Box<dyn Marginal<f64>>),
    HeterogeneousExp(Vec<ExponentialMarginal64>),
}

impl MarginalSet {
    /// Per-link trait objects; `n` expands an identical marginal.
    pub fn per_link(&self, n: usize) -> Vec<&dyn Marginal<f64>> {
        match self {
            MarginalSet::Identical(m) => vec![m.as_ref(); n],
            MarginalSet::HeterogeneousExp(ms) => {
                ms.iter().map(|m| m as &dyn Marginal<f64>).collect()
            }
        }
    }

    pub fn fixed_len(&self) -> Option<usize> {
        match self {
            MarginalSet::Identical(_) => None,
            MarginalSet::HeterogeneousExp(ms) => Some(ms.len()),
        }
    }
}

/// Fully resolved options with defaults applied.
pub struct Resolved {
    pub marginal: MarginalSet,
    pub ns: Vec<usize>,
    pub rho: f64,
    pub eps_values: Vec<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub oracle_n: usize,
    pub samples: usize,
    pub tolerance: f64,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key = value", lineno + 1)))?;
        map.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(map)
}

fn parse_from<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|e| usage(format!("config key {key}: {e}"))),
    }
}

/// Fills every unset field of `args` from the config file, then the preset.
pub fn merge_layers(mut args: CommonArgs) -> Result<CommonArgs, CliError> {
    if let Some(path) = &args.config {
        let map = parse_config_file(path)?;
        args.marginal = args.marginal.or_else(|| map.get("marginal").cloned());
        args.n = args.n.or_else(|| map.get("n").cloned());
        args.rho_db = args.rho_db.or(parse_from(&map, "rho_db")?);
        args.rho = args.rho.or(parse_from(&map, "rho")?);
        args.eps = args.eps.or(parse_from(&map, "eps")?);
        args.eps_grid = args.eps_grid.or_else(|| map.get("eps_grid").cloned());
        if !args.normalize_sum {
            args.normalize_sum = parse_from(&map, "normalize_sum")?.unwrap_or(false);
        }
        args.format = args.format.or_else(|| map.get("format").cloned());
        args.out = args.out.or_else(|| map.get("out").map(PathBuf::from));
        args.preset = args.preset.or_else(|| map.get("preset").cloned());
        args.seed = args.seed.or(parse_from(&map, "seed")?);
        args.oracle_n = args.oracle_n.or(parse_from(&map, "oracle_n")?);
        args.samples = args.samples.or(parse_from(&map, "samples")?);
        args.tolerance = args.tolerance.or(parse_from(&map, "tolerance")?);
    }
    if let Some(preset) = args.preset.clone() {
        let (marginal, n, rho_db, eps_grid): (&str, &str, Option<f64>, &str) = match preset.as_str()
        {
            "fig1" => ("exp:1", "3,5,10", None, "0:0.995:200"),
            "fig2" => ("exp:1", "5", Some(5.0), "0.001:0.999:99"),
            "fig3" => ("exp:1", "2,3,4,5,6,7,8", Some(5.0), ""),
            other => return Err(usage(format!("unknown preset {other:?}"))),
        };
        args.marginal = args.marginal.or_else(|| Some(marginal.to_string()));
        args.n = args.n.or_else(|| Some(n.to_string()));
        if args.rho.is_none() {
            args.rho_db = args.rho_db.or(rho_db);
        }
        if !eps_grid.is_empty() && args.eps.is_none() {
            args.eps_grid = args.eps_grid.or_else(|| Some(eps_grid.to_string()));
        }
    }
    Ok(args)
}

fn parse_marginal(spec: &str, normalize: bool) -> Result<MarginalSet, CliError> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| {
        usage(format!(
            "marginal spec {spec:?}: expected exp:LAMBDA or table:PATH"
        ))
    })?;
    match kind {
        "exp" => {
            let mut lambdas = Vec::new();
            for part in rest.split(',') {
                let l: f64 = part
                    .trim()
                    .parse()
                    .map_err(|e| usage(format!("marginal rate {part:?}: {e}")))?;
                lambdas.push(l);
            }
            if normalize && lambdas.len() > 1 {
                // Scale means so they sum to n.
                let mean_sum: f64 = lambdas.iter().map(|l| 1.0 / l).sum();
                let factor = lambdas.len() as f64 / mean_sum;
                for l in &mut lambdas {
                    *l /= factor;
                }
            }
            if lambdas.len() == 1 {
                let m = ExponentialMarginal64::new(lambdas[0]).map_err(CliError::Numeric)?;
                Ok(MarginalSet::Identical(Box::new(m)))
            } else {
                let ms: Result<Vec<_>, _> = lambdas
                    .into_iter()
                    .map(ExponentialMarginal64::new)
                    .collect();
                Ok(MarginalSet::HeterogeneousExp(
                    ms.map_err(CliError::Numeric)?,
                ))
            }
        }
        "table" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| usage(format!("cannot read table {rest}: {e}")))?;
            let try_tag = |tag| QuantileTableMarginal::<f64>::parse(&text, tag);
            let table = match try_tag(Monotonicity::DecreasingDensity) {
                Ok(t) if t.monotonicity_consistent() => t,
                Ok(_) | Err(_) => {
                    let t = try_tag(Monotonicity::IncreasingDensity)
                        .map_err(|e| usage(format!("table {rest}: {e}")))?;
                    if !t.monotonicity_consistent() {
                        return Err(usage(format!(
                            "table {rest}: sampled density is not monotone"
                        )));
                    }
                    t
                }
            };
            Ok(MarginalSet::Identical(Box::new(table)))
        }
        other => Err(usage(format!("unknown marginal kind {other:?}"))),
    }
}

fn parse_n_list(text: &str) -> Result<Vec<usize>, CliError> {
    let mut ns = Vec::new();
    for part in text.split(',') {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|e| usage(format!("link count {part:?}: {e}")))?;
        if n == 0 {
            return Err(usage("link count must be >= 1"));
        }
        ns.push(n);
    }
    Ok(ns)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("grid {text:?}: expected START:STOP:COUNT")));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|e| usage(format!("grid start: {e}")))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|e| usage(format!("grid stop: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| usage(format!("grid count: {e}")))?;
    if count < 1 {
        return Err(usage("grid count must be >= 1"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|k| start + step * k as f64).collect())
}

/// Applies defaults and parses composite flags into a [`Resolved`].
pub fn resolve(args: CommonArgs, default_eps: f64) -> Result<Resolved, CliError> {
    let args = merge_layers(args)?;
    let spec = args.marginal.as_deref().unwrap_or("exp:1");
    let marginal = parse_marginal(spec, args.normalize_sum)?;
    let ns = match &args.n {
        Some(text) => parse_n_list(text)?,
        None => vec![marginal.fixed_len().unwrap_or(2)],
    };
    if let Some(len) = marginal.fixed_len() {
        if ns.iter().any(|&n| n != len) {
            return Err(usage(format!(
                "--n disagrees with the {len} marginals in the heterogeneous list"
            )));
        }
    }
    let rho = match (args.rho, args.rho_db) {
        (Some(rho), _) => rho,
        (None, Some(db)) => 10f64.powf(db / 10.0),
        (None, None) => 10f64.powf(0.5), // 5 dB
    };
    if rho.is_nan() || rho <= 0.0 || !rho.is_finite() {
        return Err(usage("SNR must be positive and finite"));
    }
    let eps_values = match (&args.eps_grid, args.eps) {
        (Some(grid), _) => parse_grid(grid)?,
        (None, Some(eps)) => vec![eps],
        (None, None) => vec![default_eps],
    };
    let format = match args.format.as_deref() {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => return Err(usage(format!("unknown format {other:?}"))),
    };
    Ok(Resolved {
        marginal,
        ns,
        rho,
        eps_values,
        format,
        out: args.out,
        seed: args.seed.unwrap_or(0),
        oracle_n: args.oracle_n.unwrap_or(2000),
        samples: args.samples.unwrap_or(200_000),
        tolerance: args.tolerance.unwrap_or(0.02),
    })
}
