use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::Value;
use shuffletest::inference::{
    chi_square_test, gamma_poisson_bf_curve, simulated_p_value, uniformity_bayes_factor,
    uniformity_bayes_run, write_curve_csv, BayesConfig, BayesFactorReport, CurvePoint,
    ExpectedModel,
};
use shuffletest::io::{write_perm_file, PermHeader};
use shuffletest::normalizer::{build_table, NormalizerMethod, NormalizerTable};
use shuffletest::samplers::ExchangeTarget;
use shuffletest::shuffle::sample_dataset;
use shuffletest::{ChainConfig, PriorSpec, ShuffleKind, ShuffleScheme, StatisticSpec};

use crate::args::{
    BayesTestArgs, ChainArgs, Cli, Command, CurveArgs, FreqTestArgs, NormalizerArgs, ReplayArgs,
    SimulateArgs, SweepArgs,
};
use crate::input::{self, Dataset};
use crate::manifest::{self, FileDigest, Manifest, MANIFEST_VERSION};

/// Bad flags or input files; reported with the validation exit status.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Files written by a command, plus a diagnostic failure to report after the
/// outputs and manifest are on disk.
struct Outcome {
    outputs: Vec<PathBuf>,
    failure: Option<String>,
}

impl Outcome {
    fn written(outputs: Vec<PathBuf>) -> Self {
        Self {
            outputs,
            failure: None,
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return usage("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Replay(args) => replay(&args),
        command => record_and_execute(&command).map(|_| ()),
    }
}

impl Command {
    fn primary_output(&self) -> Option<&Path> {
        match self {
            Command::Simulate(a) => Some(&a.out),
            Command::FreqTest(a) => Some(&a.out),
            Command::BayesTest(a) => Some(&a.out),
            Command::ConjugateCurve(a) => Some(&a.out),
            Command::Normalizer(a) => Some(&a.out),
            Command::Sweep(a) => Some(&a.out),
            Command::Replay(_) => None,
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate(a) => Some(a.seed),
            Command::FreqTest(a) => Some(a.seed),
            Command::BayesTest(a) => Some(a.chain.seed),
            Command::Normalizer(a) => Some(a.seed),
            Command::Sweep(a) => Some(a.chain.seed),
            Command::ConjugateCurve(_) | Command::Replay(_) => None,
        }
    }

    fn inputs(&self) -> Vec<PathBuf> {
        let table = |c: &ChainArgs| c.table.clone().into_iter();
        match self {
            Command::FreqTest(a) => vec![a.input.clone()],
            Command::BayesTest(a) => std::iter::once(a.input.clone())
                .chain(table(&a.chain))
                .collect(),
            Command::ConjugateCurve(a) => vec![a.input.clone()],
            Command::Sweep(a) => a.inputs.iter().cloned().chain(table(&a.chain)).collect(),
            Command::Simulate(_) | Command::Normalizer(_) | Command::Replay(_) => Vec::new(),
        }
    }

    /// Points every output path into `dir`, keeping file names.
    fn redirect_outputs(&mut self, dir: &Path) {
        let move_to = |p: &mut PathBuf| {
            if let Some(name) = p.file_name() {
                *p = dir.join(name);
            }
        };
        match self {
            Command::Simulate(a) => move_to(&mut a.out),
            Command::FreqTest(a) => {
                move_to(&mut a.out);
                a.plot.as_mut().map(move_to);
            }
            Command::BayesTest(a) => {
                move_to(&mut a.out);
                a.chains_csv.as_mut().map(move_to);
                a.dump_dir.as_mut().map(move_to);
            }
            Command::ConjugateCurve(a) => move_to(&mut a.out),
            Command::Normalizer(a) => move_to(&mut a.out),
            Command::Sweep(a) => move_to(&mut a.out),
            Command::Replay(_) => {}
        }
    }

    /// Fills in defaults that depend on other flags so the manifest records
    /// the full configuration.
    fn resolve(&mut self) {
        if let Command::BayesTest(a) = self {
            if a.chains_csv.is_none() {
                let mut name = a.out.as_os_str().to_owned();
                name.push(".chains.csv");
                a.chains_csv = Some(PathBuf::from(name));
            }
        }
    }
}

fn record_and_execute(command: &Command) -> Result<Vec<FileDigest>> {
    let mut command = command.clone();
    command.resolve();
    let hash = manifest::config_hash(&command)?;
    let inputs = command
        .inputs()
        .iter()
        .map(|p| FileDigest::of_input(p))
        .collect::<Result<Vec<_>>>()?;
    let outcome = execute(&command, &hash)?;
    let outputs = outcome
        .outputs
        .iter()
        .map(|p| FileDigest::of(p))
        .collect::<Result<Vec<_>>>()?;
    let primary = command
        .primary_output()
        .expect("replay is dispatched separately");
    let record = Manifest {
        version: MANIFEST_VERSION,
        tool: env!("CARGO_PKG_NAME").into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        seed: command.seed(),
        config_hash: hash,
        config: command.clone(),
        inputs,
        outputs: outputs.clone(),
    };
    manifest::write(&manifest::manifest_path(primary), &record)?;
    if let Some(msg) = outcome.failure {
        return Err(shuffletest::Error::Diagnostics(msg).into());
    }
    Ok(outputs)
}

fn replay(args: &ReplayArgs) -> Result<()> {
    let recorded = manifest::read(&args.manifest)?;
    if recorded.version != MANIFEST_VERSION {
        return usage(format!("unsupported manifest version {}", recorded.version));
    }
    let mut command = recorded.config.clone();
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        command.redirect_outputs(dir);
    }
    if manifest::config_hash(&command)? != recorded.config_hash {
        bail!(
            "inputs differ from the ones recorded in {}",
            args.manifest.display()
        );
    }
    let outputs = record_and_execute(&command)?;
    if args.verify {
        let fresh: Vec<&str> = outputs.iter().map(|d| d.sha256.as_str()).collect();
        let old: Vec<&str> = recorded.outputs.iter().map(|d| d.sha256.as_str()).collect();
        if fresh != old {
            bail!("replayed outputs differ from {}", args.manifest.display());
        }
        eprintln!("verified {} output(s)", outputs.len());
    }
    Ok(())
}

fn execute(command: &Command, hash: &str) -> Result<Outcome> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::FreqTest(a) => freq_test(a, hash),
        Command::BayesTest(a) => bayes_test(a, hash),
        Command::ConjugateCurve(a) => conjugate_curve(a),
        Command::Normalizer(a) => normalizer(a, hash),
        Command::Sweep(a) => sweep(a),
        Command::Replay(_) => unreachable!("replay is dispatched separately"),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Pretty JSON of `value` with the configuration hash added.
fn stamped_json<T: Serialize>(value: &T, hash: &str) -> Result<Vec<u8>> {
    let mut v = serde_json::to_value(value)?;
    if let Value::Object(map) = &mut v {
        map.insert("config_hash".into(), Value::String(hash.into()));
    }
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text.into_bytes())
}

fn parse_statistic(s: &str) -> Result<StatisticSpec> {
    Ok(s.parse::<StatisticSpec>()?)
}

fn format_bf(bf: f64) -> String {
    if bf.is_infinite() {
        "+inf".into()
    } else {
        format!("{bf:e}")
    }
}

fn simulate(a: &SimulateArgs) -> Result<Outcome> {
    let kind: ShuffleKind = a.scheme.parse()?;
    let scheme = ShuffleScheme {
        kind,
        steps: a.k,
        n: a.n,
        seed: a.seed,
    };
    let perms = sample_dataset(&scheme, a.samples)?;
    let mut buf = Vec::new();
    write_perm_file(
        &mut buf,
        &PermHeader::for_scheme(&scheme, a.samples),
        &perms,
    )?;
    write_file(&a.out, &buf)?;
    Ok(Outcome::written(vec![a.out.clone()]))
}

#[derive(Serialize)]
struct FreqOutput<'a> {
    #[serde(flatten)]
    report: &'a shuffletest::inference::ChiSquareReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulated_p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulation_draws: Option<usize>,
}

fn freq_test(a: &FreqTestArgs, hash: &str) -> Result<Outcome> {
    let statistic = parse_statistic(&a.statistic)?;
    let model: ExpectedModel = a.model.parse()?;
    let hist = input::histogram_of(input::load(&a.input)?, &statistic)?;
    let report = chi_square_test(&hist.counts, &model, a.lump)?;
    let simulated = if a.simulate > 0 {
        Some(simulated_p_value(&report, a.simulate, a.seed)?)
    } else {
        None
    };
    let out = FreqOutput {
        report: &report,
        simulated_p_value: simulated,
        simulation_draws: simulated.map(|_| a.simulate),
    };
    write_file(&a.out, &stamped_json(&out, hash)?)?;
    let mut outputs = vec![a.out.clone()];
    if let Some(plot) = &a.plot {
        let mut csv = String::from("category,observed,expected\n");
        for ((c, o), e) in report
            .categories
            .iter()
            .zip(&report.observed)
            .zip(&report.expected)
        {
            writeln!(csv, "{c},{o},{e}")?;
        }
        write_file(plot, csv.as_bytes())?;
        outputs.push(plot.clone());
    }
    eprintln!(
        "chi-square {:.4} on {} df, p = {:.4}",
        report.statistic, report.df, report.p_value
    );
    Ok(Outcome::written(outputs))
}

fn exchange_target(
    dataset: Dataset,
    statistic: &StatisticSpec,
    n: Option<usize>,
) -> Result<ExchangeTarget> {
    match dataset {
        Dataset::Perms { perms, .. } => {
            let deck = perms[0].n();
            if let Some(n) = n.filter(|&n| n != deck) {
                return usage(format!(
                    "--n {n} does not match the deck size {deck} of the data"
                ));
            }
            Ok(ExchangeTarget::from_data(statistic, deck, &perms)?)
        }
        Dataset::Histogram(hist) => {
            if !statistic.is_fixed_points() {
                return usage("histogram input holds fixed points only");
            }
            let Some(n) = n else {
                return usage("histogram input needs --n");
            };
            if hist.counts.len() > n + 1 {
                return usage(format!("histogram has values above the deck size {n}"));
            }
            Ok(ExchangeTarget::from_summary(
                statistic,
                n,
                hist.total() as usize,
                vec![hist.value_sum() as f64],
            )?)
        }
    }
}

fn bayes_config(c: &ChainArgs) -> Result<(PriorSpec, BayesConfig)> {
    let prior: PriorSpec = c.prior.parse()?;
    let chain = ChainConfig {
        steps: c.steps,
        burnin: c.burnin,
        proposal_scale: c.proposal_scale,
        seed: c.seed,
        thin: c.thin,
        inner_steps: c.inner_steps,
    };
    chain.validate()?;
    if c.chains == 0 {
        return usage("--chains must be at least 1");
    }
    let table = match &c.table {
        Some(path) => Some(Arc::new(NormalizerTable::from_json(&input::read_text(
            path,
        )?)?)),
        None => None,
    };
    Ok((
        prior,
        BayesConfig {
            chains: c.chains,
            chain,
            prior_odds: c.prior_odds,
            table,
        },
    ))
}

fn diagnostic_failure(report: &BayesFactorReport) -> Option<String> {
    let bad_rhat = report.rhat.iter().any(|r| *r > 1.1);
    let low_ess = report.ess.iter().any(|e| *e < 100.0);
    (bad_rhat || low_ess).then(|| {
        format!(
            "chain diagnostics failed: rhat {:?}, ess {:?}",
            report.rhat, report.ess
        )
    })
}

fn bayes_test(a: &BayesTestArgs, hash: &str) -> Result<Outcome> {
    let statistic = parse_statistic(&a.statistic)?;
    let target = exchange_target(input::load(&a.input)?, &statistic, a.n)?;
    let (prior, config) = bayes_config(&a.chain)?;
    let run = uniformity_bayes_run(&target, &prior, &config)?;
    let report = &run.report;
    write_file(&a.out, &stamped_json(report, hash)?)?;
    let mut outputs = vec![a.out.clone()];

    let d = statistic.dimension();
    let mut csv = String::from("chain,seed,log_bf,bf,acceptance_rate,proposal_scale");
    for i in 0..d {
        write!(csv, ",ess_{i}")?;
    }
    for i in 0..d {
        write!(csv, ",rhat_{i}")?;
    }
    csv.push('\n');
    for (c, chain) in run.chains.iter().enumerate() {
        write!(
            csv,
            "{c},{},{},{},{},{}",
            chain.seed,
            report.per_chain_log_bf[c],
            format_bf(report.per_chain_bf[c]),
            chain.acceptance_rate,
            chain.proposal_scale
        )?;
        for e in &chain.diagnostics.ess {
            write!(csv, ",{e}")?;
        }
        for r in &chain.diagnostics.rhat {
            write!(csv, ",{r}")?;
        }
        csv.push('\n');
    }
    let chains_csv = a
        .chains_csv
        .as_ref()
        .ok_or_else(|| anyhow!("unresolved chains CSV path"))?;
    write_file(chains_csv, csv.as_bytes())?;
    outputs.push(chains_csv.clone());

    if let Some(dir) = &a.dump_dir {
        for (c, chain) in run.chains.iter().enumerate() {
            let samples = dir.join(format!("chain_{c:03}.csv"));
            let mut buf = Vec::new();
            chain.write_csv(&mut buf)?;
            write_file(&samples, &buf)?;
            let diag = dir.join(format!("chain_{c:03}.diagnostics.json"));
            let mut text = serde_json::to_string_pretty(&chain.diagnostics)?;
            text.push('\n');
            write_file(&diag, text.as_bytes())?;
            outputs.push(samples);
            outputs.push(diag);
        }
    }

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "bf = {} (log {:.4}), P(H0|data) = {:.4}",
        format_bf(report.bf),
        report.log_bf,
        report.posterior_null
    );
    Ok(Outcome {
        outputs,
        failure: if a.chain.strict {
            diagnostic_failure(report)
        } else {
            None
        },
    })
}

/// `LO:HI:STEP` as an inclusive grid.
pub fn parse_alpha_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<f64>, _>>()
        .map_err(|e| UsageError(format!("alpha grid '{s}': {e}")))?;
    let (lo, hi, step) = match nums.as_slice() {
        [x] => (*x, *x, 1.0),
        [lo, hi, step] => (*lo, *hi, *step),
        _ => return usage(format!("alpha grid '{s}' must be LO:HI:STEP")),
    };
    if !(lo > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return usage(format!("alpha values must be positive, got {s}"));
    }
    if hi < lo || !(step > 0.0) {
        return usage(format!("alpha grid '{s}' needs LO <= HI and STEP > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn conjugate_curve(a: &CurveArgs) -> Result<Outcome> {
    let alphas = parse_alpha_grid(&a.alpha_grid)?;
    let hist = input::histogram_of(input::load(&a.input)?, &StatisticSpec::fixed_points())?;
    let points = gamma_poisson_bf_curve(&hist, &alphas)?;
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &points)?;
    write_file(&a.out, &buf)?;
    Ok(Outcome::written(vec![a.out.clone()]))
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let Some((lo, hi)) = s.split_once(':') else {
        return usage(format!("theta range '{s}' must be LO:HI"));
    };
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| UsageError(format!("theta range '{s}': {e}")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn normalizer(a: &NormalizerArgs, hash: &str) -> Result<Outcome> {
    let statistic = parse_statistic(&a.statistic)?;
    let method = match a.method.as_str() {
        "exact" if !statistic.is_fixed_points() => {
            return usage(format!(
                "the exact method is only available for fixed-points, not {statistic}"
            ))
        }
        "exact" => NormalizerMethod::Exact,
        "importance" => NormalizerMethod::Importance { samples: a.samples },
        "thermo" | "thermodynamic" => NormalizerMethod::Thermodynamic {
            steps: a.steps,
            burnin: a.burnin,
            thin: a.thin,
        },
        other => {
            return usage(format!(
                "unknown method '{other}'; use exact, importance or thermo"
            ))
        }
    };
    let direction = match &a.direction {
        Some(s) => Some(
            s.split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| UsageError(format!("direction '{s}': {e}")))?,
        ),
        None => None,
    };
    let table = build_table(
        &statistic,
        a.n,
        parse_range(&a.theta_range)?,
        a.resolution,
        method,
        a.seed,
        direction,
    )?;
    if let Err(e) = table.check_convexity() {
        eprintln!("warning: {e}");
    }
    if let Some(q) = table.quadrature_error {
        eprintln!("quadrature error estimate {q:.3e}");
    }
    write_file(&a.out, &stamped_json(&table, hash)?)?;
    Ok(Outcome::written(vec![a.out.clone()]))
}

fn sweep(a: &SweepArgs) -> Result<Outcome> {
    let statistic = parse_statistic(&a.statistic)?;
    let (prior, config) = bayes_config(&a.chain)?;
    let mut points = Vec::with_capacity(a.inputs.len());
    let mut failures = Vec::new();
    for path in &a.inputs {
        let dataset = input::load(path)?;
        let k = match &dataset {
            Dataset::Perms {
                header: Some(h), ..
            } => h.steps,
            _ => return usage(format!("{} has no header recording k", path.display())),
        };
        let target = exchange_target(dataset, &statistic, None)?;
        let report = uniformity_bayes_factor(&target, &prior, &config)?;
        eprintln!(
            "k = {k}: bf = {} (log {:.4})",
            format_bf(report.bf),
            report.log_bf
        );
        if let Some(msg) = diagnostic_failure(&report) {
            failures.push(format!("k = {k}: {msg}"));
        }
        points.push(CurvePoint {
            x: k as f64,
            bf: report.bf,
            log_bf: report.log_bf,
        });
    }
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &points)?;
    write_file(&a.out, &buf)?;
    Ok(Outcome {
        outputs: vec![a.out.clone()],
        failure: (a.chain.strict && !failures.is_empty()).then(|| failures.join("; ")),
    })
}
