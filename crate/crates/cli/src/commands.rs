use std::path::Path;

use spindiscord::quadrature::QuadratureConfig;
use spindiscord::xxz::default_profile_range;
use spindiscord::{
    critical_field, discord_profile, fit_exponential, heatmap_scan, quantum_discord, select_model, xy_discord_profile,
    DecayProfile, DiscordMethod, Error, FitResult, MeasuredSide, Preference, Temperature, XXZSystem, XYChain, XYParams,
};

use crate::args::*;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Document};

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Document, CliError> {
    match command {
        Command::Xy(XyCommand::Pair(a)) => xy_pair(a, cfg),
        Command::Xy(XyCommand::Profile(a)) => xy_profile(a, cfg),
        Command::Xy(XyCommand::Heatmap(a)) => xy_heatmap(a, cfg),
        Command::Xxz(XxzCommand::Profile(a)) => xxz_profile(a),
        Command::Xxz(XxzCommand::CriticalField(a)) => critical_field_cmd(a),
        Command::Fit(a) => fit_file(&a.input),
    }
}

fn xy_params(gamma: f64, lambda: f64, beta: Option<f64>) -> Result<XYParams, CliError> {
    let temperature = beta.map_or(Temperature::Zero, Temperature::Beta);
    Ok(XYParams::new(gamma, lambda, temperature)?)
}

fn fit_cell(f: &FitResult) -> Cell {
    Cell::Object(vec![
        ("model", Cell::Text(f.model.to_string())),
        ("a", Cell::Num(f.a)),
        ("b", Cell::Num(f.b)),
        ("c", Cell::Num(f.c)),
        ("sse", Cell::Num(f.sse)),
        ("aic", Cell::Num(f.aic)),
        ("converged", Cell::Bool(f.converged)),
        ("iterations", Cell::Int(f.iterations as i64)),
    ])
}

fn xy_pair(a: &XyPairArgs, cfg: &RunConfig) -> Result<Document, CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let params = xy_params(a.gamma, a.lambda, a.beta)?;
    let chain = XYChain::with_config(params, a.n, &QuadratureConfig::with_tolerance(cfg.tol))?;
    let obs = chain.observables(a.n)?;
    let rho = chain.pair_state(a.n)?;
    let report = match a.method {
        MethodArg::ClosedForm => quantum_discord(&rho, DiscordMethod::ClosedForm)?,
        MethodArg::Optimized => quantum_discord(&rho, DiscordMethod::Optimized)?,
        MethodArg::Auto => match quantum_discord(&rho, DiscordMethod::ClosedForm) {
            Err(Error::XValidity { .. }) => quantum_discord(&rho, DiscordMethod::Optimized)?,
            other => other?,
        },
    };
    Ok(Document {
        columns: vec![
            "n",
            "mz",
            "gxx",
            "gyy",
            "gzz",
            "mutual_info",
            "classical_corr",
            "discord",
            "method",
        ],
        rows: vec![vec![
            Cell::Int(a.n as i64),
            Cell::Num(obs.mz),
            Cell::Num(obs.gxx),
            Cell::Num(obs.gyy),
            Cell::Num(obs.gzz),
            Cell::Num(report.mutual_info),
            Cell::Num(report.classical_corr),
            Cell::Num(report.discord),
            Cell::Text(report.method.to_string()),
        ]],
        footer: vec![],
        single: true,
    })
}

/// A single coupling gives `n,discord` rows; several add a leading `lambda` column.
fn xy_profile(a: &XyProfileArgs, cfg: &RunConfig) -> Result<Document, CliError> {
    if a.n_max == 0 {
        return Err(CliError::Usage("n-max must be at least 1".into()));
    }
    if a.fit && a.n_max < 4 {
        return Err(CliError::Usage("fitting needs n-max >= 4".into()));
    }
    let single = a.lambda.len() == 1;
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &lambda in &a.lambda {
        let profile = xy_discord_profile(&xy_params(a.gamma, lambda, a.beta)?, a.n_max, cfg.tol)?;
        for mut row in profile_rows(&profile) {
            if !single {
                row.insert(0, Cell::Num(lambda));
            }
            rows.push(row);
        }
        if a.fit {
            let mut fit = fit_cell(&fit_exponential(&profile)?);
            if let (false, Cell::Object(fields)) = (single, &mut fit) {
                fields.insert(0, ("lambda", Cell::Num(lambda)));
            }
            fits.push(fit);
        }
    }
    let footer = match (a.fit, single) {
        (false, _) => vec![],
        (true, true) => vec![("fit", fits.remove(0))],
        (true, false) => vec![("fit", Cell::List(fits))],
    };
    Ok(Document {
        columns: if single {
            vec!["n", "discord"]
        } else {
            vec!["lambda", "n", "discord"]
        },
        rows,
        footer,
        single: false,
    })
}

fn profile_rows(profile: &DecayProfile) -> Vec<Vec<Cell>> {
    profile
        .samples()
        .iter()
        .map(|&(n, q)| vec![Cell::Int(n as i64), Cell::Num(q)])
        .collect()
}

/// `steps` evenly spaced points from `lo` to `hi`; a single step gives `lo`.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

fn xy_heatmap(a: &XyHeatmapArgs, cfg: &RunConfig) -> Result<Document, CliError> {
    if a.gamma_steps == 0 || a.lambda_steps == 0 {
        return Err(CliError::Usage("grid steps must be at least 1".into()));
    }
    let gammas = linspace(a.gamma_min, a.gamma_max, a.gamma_steps);
    let lambdas = linspace(a.lambda_min, a.lambda_max, a.lambda_steps);
    let cells = heatmap_scan(&gammas, &lambdas, a.m, cfg.tol)?;
    Ok(Document {
        columns: vec!["gamma", "lambda", "ratio"],
        rows: cells
            .iter()
            .map(|c| {
                vec![
                    Cell::Num(c.gamma),
                    Cell::Num(c.lambda),
                    Cell::Num(c.ratio.unwrap_or(f64::NAN)),
                ]
            })
            .collect(),
        footer: vec![],
        single: false,
    })
}

fn xxz_profile(a: &XxzProfileArgs) -> Result<Document, CliError> {
    let sys = XXZSystem::new(a.sites, a.delta, a.h)?;
    let n_max = a.n_max.unwrap_or_else(|| default_profile_range(a.sites));
    let side = match a.measure {
        SideArg::First => MeasuredSide::First,
        SideArg::Second => MeasuredSide::Second,
    };
    let prof = discord_profile(&sys, n_max, side)?;
    // Short chains give windows too small to fit; the profile is still reported.
    let (exponential, power_law, preferred) = match select_model(&prof.profile) {
        Ok(s) => (fit_cell(&s.exponential), fit_cell(&s.power_law), s.preferred),
        Err(Error::TooFewSamples { need, got }) => {
            eprintln!("spindiscord: {got} distances are too few to fit (need {need}); fits omitted");
            (Cell::Null, Cell::Null, Preference::Inconclusive)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Document {
        columns: vec!["n", "discord"],
        rows: profile_rows(&prof.profile),
        footer: vec![
            ("exponential_fit", exponential),
            ("power_law_fit", power_law),
            ("preferred", Cell::Text(preferred.to_string())),
            ("ground_energy", Cell::Num(prof.energy)),
            ("sector", Cell::Int(prof.sector as i64)),
            ("degenerate", Cell::Bool(prof.degenerate)),
        ],
        single: false,
    })
}

fn critical_field_cmd(a: &CriticalFieldArgs) -> Result<Document, CliError> {
    let hc = critical_field(a.delta)?;
    Ok(Document {
        columns: vec!["delta", "critical_field"],
        rows: vec![vec![Cell::Num(a.delta), Cell::Num(hc)]],
        footer: vec![],
        single: true,
    })
}

/// Reads `n,discord` samples. Column order is free; other columns and `#` lines are ignored.
pub fn read_profile_csv(path: &Path) -> Result<DecayProfile, CliError> {
    let usage = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| usage(e.to_string()))?;
    let headers = reader.headers().map_err(|e| usage(e.to_string()))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| usage(format!("no `{name}` column")))
    };
    let (n_col, q_col) = (column("n")?, column("discord")?);
    let mut samples = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| usage(e.to_string()))?;
        let bad = || usage(format!("malformed data row {}", k + 1));
        let n = record
            .get(n_col)
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(bad)?;
        let q = record.get(q_col).and_then(|s| s.parse::<f64>().ok()).ok_or_else(bad)?;
        samples.push((n, q));
    }
    Ok(DecayProfile::new(samples, path.display().to_string())?)
}

fn fit_file(path: &Path) -> Result<Document, CliError> {
    let selection = select_model(&read_profile_csv(path)?)?;
    let row = |f: &FitResult| {
        vec![
            Cell::Text(f.model.to_string()),
            Cell::Num(f.a),
            Cell::Num(f.b),
            Cell::Num(f.c),
            Cell::Num(f.sse),
            Cell::Num(f.aic),
            Cell::Bool(f.converged),
            Cell::Int(f.iterations as i64),
        ]
    };
    Ok(Document {
        columns: vec!["model", "a", "b", "c", "sse", "aic", "converged", "iterations"],
        rows: vec![row(&selection.exponential), row(&selection.power_law)],
        footer: vec![("preferred", Cell::Text(selection.preferred.to_string()))],
        single: false,
    })
}
