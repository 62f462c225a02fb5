//! Flat parameter set shared by every command, its JSON config-file form,
//! and the small parsers for grids and initial states.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use mlfrac::artime::Init;

/// A usage error: reported on stderr with exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl From<mlfrac::Error> for Usage {
    fn from(e: mlfrac::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Usage>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Command-line flags; any flag left unset is taken from `--config`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub scale: Option<f64>,
    /// Time argument of `eval fpp`.
    #[arg(long)]
    pub t: Option<f64>,
    /// Derivative order of `eval deriv`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest count of `eval fpp` (default 100).
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(short = 'n', long)]
    pub n: Option<usize>,
    /// Defaults to $MLFRAC_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub stream: Option<u64>,
    /// `start:stop:step`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Horizon of `path renewal`.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// `stationary` or `arbitrary:<value>`.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// q-ML innovation case: q2_eta1, q3_eta1 or q1p5_eta0p25.
    #[arg(long)]
    pub case: Option<String>,
    /// Emit binned counts instead of raw values.
    #[arg(long)]
    #[serde(default)]
    pub hist: bool,
    /// Verify suite: fast, full, or one criterion by name or number.
    #[arg(long)]
    pub suite: Option<String>,
    /// Include per-criterion runtimes in the verify report.
    #[arg(long)]
    #[serde(default)]
    pub timings: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! fill {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Params {
    /// Fills unset fields from `file`; command-line values win.
    pub fn merge(mut self, file: Params) -> Params {
        fill!(self, file; alpha, beta, eta, q, a, rho, delta, scale, t, k, kmax, n, seed, stream,
              grid, tmax, init, burn_in, case, suite, out, format);
        self.hist |= file.hist;
        self.timings |= file.timings;
        self
    }

    pub fn load(path: &Path) -> CliResult<Params> {
        let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
    }

    pub fn need<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
        v.ok_or_else(|| Usage(format!("missing required parameter --{name}")))
    }

    pub fn alpha(&self) -> CliResult<f64> {
        Self::need(self.alpha, "alpha")
    }

    pub fn rho(&self) -> CliResult<f64> {
        Self::need(self.rho, "rho")
    }

    pub fn n(&self) -> CliResult<usize> {
        Self::need(self.n, "n")
    }

    /// `--seed`, else `$MLFRAC_SEED`.
    pub fn seed(&self) -> CliResult<Option<u64>> {
        if let Some(s) = self.seed {
            return Ok(Some(s));
        }
        match std::env::var("MLFRAC_SEED") {
            Ok(s) => s.trim().parse().map(Some).map_err(|_| Usage(format!("MLFRAC_SEED is not an integer: {s:?}"))),
            Err(_) => Ok(None),
        }
    }

    pub fn required_seed(&self) -> CliResult<u64> {
        self.seed()?.ok_or_else(|| Usage("a seed is required: pass --seed or set MLFRAC_SEED".into()))
    }

    pub fn grid(&self) -> CliResult<Vec<f64>> {
        parse_grid(self.grid.as_deref().ok_or_else(|| Usage("missing required parameter --grid".into()))?)
    }

    pub fn init(&self) -> CliResult<Init<f64>> {
        parse_init(self.init.as_deref().unwrap_or("stationary"))
    }
}

/// Points `start, start+step, …` up to `stop` inclusive.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(Usage(format!("grid must be start:stop:step, got {spec:?}")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Usage(format!("grid: {s:?} is not a number")));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(Usage("grid bounds must be finite".into()));
    }
    if !(step > 0.0) {
        return Err(Usage("grid step must be positive".into()));
    }
    if start > stop {
        return Err(Usage("grid start must not exceed stop".into()));
    }
    // tolerate rounding in (stop - start)/step
    let count = ((stop - start) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(Usage(format!("grid has {count} points; the limit is 10^7")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

pub fn parse_init(spec: &str) -> CliResult<Init<f64>> {
    match spec.split_once(':') {
        None if spec == "stationary" => Ok(Init::Stationary),
        Some(("arbitrary", v)) => v
            .trim()
            .parse()
            .map(Init::Arbitrary)
            .map_err(|_| Usage(format!("init: {v:?} is not a number"))),
        _ => Err(Usage(format!("init must be `stationary` or `arbitrary:<value>`, got {spec:?}"))),
    }
}
