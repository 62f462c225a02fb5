use std::fmt::Write;

use mlfrac::artime::{ar1_path, ARConfig, Init};
use mlfrac::io::Table;
use mlfrac::laplace2::{cf_laplace2, pdf_laplace2};
use mlfrac::mlrand::{sample_batch, Law, QmlCase, RngState};
use mlfrac::qml::{qml_ar1_path, qml_laplace, QMLParams, QmlArConfig};
use mlfrac::renewal::{fpp_pmf_table, simulate_renewal, DEFAULT_K_MAX};
use mlfrac::special_fn::{ml, ml2, ml_cdf, ml_deriv, ml_pdf, ml_prabhakar, ml_survival, Ml2Params, MlOrder, PrabhakarParams};
use mlfrac::stats::histogram;
use mlfrac::verify::{run, Status, Suite, DEFAULT_SEED};
use mlfrac::Error;

use crate::config::{CliResult, Params, Usage};
use crate::{Function, LawName, Output, PathKind};

/// Figure data: `(ρ, α)` pairs of the published sample-path plots.
pub const FIGURE_PAIRS: [(f64, f64); 4] = [(0.3, 0.3), (0.3, 1.0), (0.6, 0.6), (0.6, 0.9)];

fn order(p: &Params) -> CliResult<MlOrder<f64>> {
    Ok(MlOrder::new(p.alpha()?)?)
}

/// Densities are infinite, not undefined, at their singular points.
fn or_infinite(r: mlfrac::Result<f64>) -> CliResult<f64> {
    match r {
        Err(Error::Singular(_)) => Ok(f64::INFINITY),
        other => Ok(other?),
    }
}

fn tabulate(header: [&str; 2], grid: &[f64], f: impl Fn(f64) -> CliResult<f64>) -> CliResult<Table> {
    let mut t = Table::new(header);
    for &x in grid {
        t.push(vec![x, f(x)?]);
    }
    Ok(t)
}

pub fn eval(function: Function, p: &Params) -> CliResult<Output> {
    let table = match function {
        Function::Fpp => {
            let t = Params::need(p.t, "t")?;
            let pmf = fpp_pmf_table(order(p)?, t, p.kmax.unwrap_or(DEFAULT_K_MAX))?;
            Table::from(&pmf)
        }
        Function::Ml => {
            let o = order(p)?;
            tabulate(["x", "value"], &p.grid()?, |x| Ok(ml(o, -x)?.value))?
        }
        Function::Ml2 => {
            let params = Ml2Params::new(p.alpha()?, Params::need(p.beta, "beta")?)?;
            tabulate(["x", "value"], &p.grid()?, |x| Ok(ml2(params, -x)?.value))?
        }
        Function::Prabhakar => {
            let params = PrabhakarParams::new(p.alpha()?, Params::need(p.beta, "beta")?, Params::need(p.eta, "eta")?)?;
            tabulate(["x", "value"], &p.grid()?, |x| Ok(ml_prabhakar(params, -x)?.value))?
        }
        Function::Deriv => {
            let (o, k) = (order(p)?, Params::need(p.k, "k")?);
            tabulate(["x", "value"], &p.grid()?, |x| Ok(ml_deriv(o, k, -x)?.value))?
        }
        Function::Dist => {
            let o = order(p)?;
            let mut t = Table::new(["x", "pdf", "cdf", "survival"]);
            for x in p.grid()? {
                t.push(vec![x, or_infinite(ml_pdf(o, x))?, ml_cdf(o, x)?, ml_survival(o, x)?]);
            }
            t
        }
        Function::Cf => {
            let o = order(p)?;
            tabulate(["t", "phi"], &p.grid()?, |t| Ok(cf_laplace2(o, t)))?
        }
        Function::Laplace2Pdf => {
            let o = order(p)?;
            tabulate(["u", "h"], &p.grid()?, |u| or_infinite(pdf_laplace2(o, u)))?
        }
        Function::Qml => {
            let params = QMLParams::new(
                p.alpha()?,
                Params::need(p.eta, "eta")?,
                Params::need(p.q, "q")?,
                Params::need(p.a, "a")?,
            )?;
            tabulate(["t", "L"], &p.grid()?, |t| Ok(qml_laplace(&params, t)?))?
        }
    };
    Ok(Output::Table(table))
}

fn state(p: &Params) -> CliResult<RngState> {
    Ok(RngState::with_stream(p.required_seed()?, p.stream.unwrap_or(0)))
}

fn values_or_hist(p: &Params, values: &[f64], table: Table) -> Output {
    if p.hist {
        Output::Table(Table::from(histogram(values).as_slice()))
    } else {
        Output::Table(table)
    }
}

pub fn sample(law: LawName, p: &Params) -> CliResult<Output> {
    let alpha = p.alpha()?;
    let law = match law {
        LawName::Ml => Law::Ml { alpha },
        LawName::PositiveStable => Law::PositiveStable { alpha },
        LawName::GeneralizedMl => Law::GeneralizedMl {
            alpha,
            delta: Params::need(p.delta, "delta")?,
            scale: p.scale.unwrap_or(1.0),
        },
        LawName::Laplace2 => Law::Laplace2 { alpha },
        LawName::ArInnovation => Law::ArInnovation { alpha, rho: p.rho()? },
        LawName::QmlInnovation => {
            let case: QmlCase = p.case.as_deref().ok_or_else(|| Usage("missing required parameter --case".into()))?.parse()?;
            Law::QmlInnovation { case, alpha, rho: p.rho()? }
        }
    };
    let n = p.n()?;
    if n < 1 {
        return Err(Usage("-n must be at least 1".into()));
    }
    let batch = sample_batch(law, n, &state(p)?)?;
    Ok(values_or_hist(p, &batch.values, Table::from(&batch)))
}

fn ar_config(p: &Params, alpha: f64, rho: f64, init: Init<f64>, rng: RngState) -> CliResult<ARConfig<f64>> {
    let cfg = ARConfig::new(alpha, rho, p.n()?, init, rng)?;
    Ok(match p.burn_in {
        Some(b) => cfg.with_burn_in(b),
        None => cfg,
    })
}

pub fn path(kind: PathKind, p: &Params) -> CliResult<Output> {
    match kind {
        PathKind::Renewal => {
            let t_max = Params::need(p.tmax, "tmax")?;
            let mut rng = state(p)?.generator()?;
            let path = simulate_renewal(order(p)?, t_max, &mut rng)?;
            Ok(values_or_hist(p, &path.event_times, Table::from(&path)))
        }
        PathKind::Ar1 => {
            let cfg = ar_config(p, p.alpha()?, p.rho()?, p.init()?, state(p)?)?;
            let path = ar1_path(&cfg)?;
            Ok(values_or_hist(p, &path.values, Table::from(&path)))
        }
        PathKind::Qml => {
            let mut cfg = QmlArConfig::new(
                p.alpha()?,
                Params::need(p.delta, "delta")?,
                Params::need(p.scale, "scale")?,
                p.rho()?,
                p.n()?,
                state(p)?,
            )?;
            cfg.init = p.init()?;
            let ys = qml_ar1_path(&cfg)?;
            Ok(values_or_hist(p, &ys, Table::indexed("n", "y_n", 1, &ys)))
        }
        PathKind::Figures => {
            if p.hist {
                return Err(Usage("--hist is not available for figure data".into()));
            }
            let p = Params { n: Some(p.n.unwrap_or(500)), ..p.clone() };
            let seed = p.required_seed()?;
            let mut table = Table::new(["rho", "alpha", "n", "u_n"]);
            for (i, &(rho, alpha)) in FIGURE_PAIRS.iter().enumerate() {
                let cfg = ar_config(&p, alpha, rho, p.init()?, RngState::with_stream(seed, i as u64))?;
                for (j, u) in ar1_path(&cfg)?.values.into_iter().enumerate() {
                    table.push(vec![rho, alpha, (j + 1) as f64, u]);
                }
            }
            Ok(Output::Table(table))
        }
    }
}

fn fmt_stat(x: f64) -> String {
    if x.is_nan() {
        "-".into()
    } else {
        format!("{x:.6e}")
    }
}

pub fn verify(p: &Params) -> CliResult<Output> {
    let suite: Suite = p.suite.as_deref().unwrap_or("fast").parse()?;
    let seed = p.seed()?.unwrap_or(DEFAULT_SEED);
    let full = run(&suite, seed);
    let report = if p.timings { full } else { full.deterministic() };
    let mut text = format!("suite {} seed {seed}\n", report.suite);
    for r in &report.results {
        let _ = write!(
            text,
            "{:>2} {:<21} {:<4} statistic {:<13} threshold {:<10}",
            r.id,
            r.name,
            r.status,
            fmt_stat(r.statistic),
            fmt_stat(r.threshold)
        );
        if let Some(ms) = r.runtime_ms {
            let _ = write!(text, " {ms:.0} ms");
        }
        let _ = writeln!(text, "  {}", r.detail);
    }
    let count = |s| report.results.iter().filter(|r| r.status == s).count();
    let _ = writeln!(text, "{} passed, {} failed, {} skipped", count(Status::Pass), count(Status::Fail), count(Status::Skip));
    Ok(Output::Report(report, text))
}
