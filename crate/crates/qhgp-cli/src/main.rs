//! Command-line harness: build code families, decode single instances,
//! and run Monte-Carlo campaigns and sweeps from JSON configs.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qhgp::campaign::{run_campaign, sweep, to_csv, Campaign, TrialConfig, TrialReport};
use qhgp::descriptor::{pack_vec, unpack_vec, CodeDescriptor};
use qhgp::syndec::{brute_force_decode, PolyDecoder, SyndromeInstance};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "qhgp", version, about = "Hypergraph-product code toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Per-trial records as a separate CSV file next to the JSON report.
    Csv,
    /// JSON report only; records stay embedded there.
    Json,
}

#[derive(Args)]
struct ConfigArgs {
    /// Campaign config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's worker count; QHGP_WORKERS is the fallback
    /// when neither is given.
    #[arg(long)]
    workers: Option<usize>,
    /// Where output files go.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Per-trial record format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// JSON pointer to the swept config field, e.g. /error_model/syndrome_weight
    #[arg(long)]
    var: String,
    /// Comma-separated numeric values.
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Code descriptor (JSON).
    #[arg(long)]
    code: PathBuf,
    /// Hex-packed syndrome vector.
    #[arg(long)]
    syndrome: PathBuf,
    /// Search depth for codes without polynomial structure.
    #[arg(long)]
    budget: Option<usize>,
    /// When given, also write error.hex here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a config, build its code family, and emit the constituent
    /// code descriptor.
    Build(ConfigArgs),
    /// Decode one classical syndrome instance from files.
    Decode(DecodeArgs),
    /// Run a Monte-Carlo campaign.
    Campaign(ConfigArgs),
    /// Run one campaign per value of a single swept config field.
    Sweep(SweepArgs),
}

fn load_config(args: &ConfigArgs) -> Result<TrialConfig> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut config: TrialConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(w) = args.workers {
        config.workers = w;
    } else if let Ok(v) = std::env::var("QHGP_WORKERS") {
        config.workers = v.parse().context("QHGP_WORKERS must be a worker count")?;
    }
    Ok(config)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn summarize(report: &TrialReport) {
    let a = &report.aggregates;
    let fmt_rate = |r: Option<f64>| match r {
        Some(v) => format!("{v:.4}"),
        None => "n/a".to_string(),
    };
    println!(
        "trials {}: success {}/{} (rate {}), in-promise {}/{} (rate {})",
        a.trials,
        a.successes,
        a.trials,
        fmt_rate(a.success_rate),
        a.in_promise_successes,
        a.in_promise_trials,
        fmt_rate(a.promise_success_rate),
    );
    let v = &report.volatile;
    if let (Some(p50), Some(p90), Some(p99)) =
        (v.decode_micros_p50, v.decode_micros_p90, v.decode_micros_p99)
    {
        println!(
            "decode time p50 {p50} us, p90 {p90} us, p99 {p99} us; campaign took {:.1} ms",
            v.total_wall_ms
        );
    }
}

fn emit_report(report: &TrialReport, out_dir: &Path, format: Format, stem: &str) -> Result<()> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let json = serde_json::to_string_pretty(report)?;
    write(&out_dir.join(format!("{stem}.json")), &json)?;
    if format == Format::Csv {
        write(&out_dir.join(format!("{stem}-trials.csv")), &to_csv(report))?;
    }
    Ok(())
}

fn cmd_build(args: &ConfigArgs) -> Result<()> {
    let config = load_config(args)?;
    let campaign = Campaign::new(config)?;
    let base = campaign.base_code();
    let params = campaign.product_params();
    print!(
        "{}: base [{},{}] over GF(2^{}), product [[{}, {}",
        base.label(),
        base.n(),
        base.k(),
        base.field().r(),
        params.n,
        params.k,
    );
    match params.d {
        Some(d) if d != usize::MAX => println!(", {d}]]"),
        _ => println!("]]"),
    }
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let desc = CodeDescriptor::from_code(base);
    write(
        &args.out_dir.join("descriptor.json"),
        &serde_json::to_string_pretty(&desc)?,
    )
}

fn cmd_decode(args: &DecodeArgs) -> Result<()> {
    let desc: CodeDescriptor = serde_json::from_str(
        &fs::read_to_string(&args.code).with_context(|| format!("reading {}", args.code.display()))?,
    )
    .context("parsing descriptor")?;
    let code = desc.to_code()?;
    let f = code.field().clone();
    let raw = fs::read_to_string(&args.syndrome)
        .with_context(|| format!("reading {}", args.syndrome.display()))?;
    let s = unpack_vec(&f, &raw, code.parity_check().rows())?;
    let error = if code.meta().is_some() {
        PolyDecoder::new(&code)?.decode(&s)?
    } else {
        let t = args.budget.unwrap_or(code.n());
        brute_force_decode(&SyndromeInstance { h: code.parity_check().clone(), s, t })?
    };
    let weight = error.iter().filter(|x| !x.is_zero()).count();
    let packed = pack_vec(&f, &error);
    println!("{}", serde_json::json!({ "error": packed, "weight": weight }));
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write(&dir.join("error.hex"), &packed)?;
    }
    Ok(())
}

fn cmd_campaign(args: &ConfigArgs) -> Result<()> {
    let config = load_config(args)?;
    let report = run_campaign(config)?;
    summarize(&report);
    emit_report(&report, &args.out_dir, args.format, "report")
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    if args.values.is_empty() {
        bail!("--values must name at least one value");
    }
    let config = load_config(&args.common)?;
    let template = serde_json::to_value(&config)?;
    let values: Vec<serde_json::Value> = args
        .values
        .iter()
        .map(|&v| {
            if v.fract() == 0.0 && v >= 0.0 {
                serde_json::json!(v as u64)
            } else {
                serde_json::json!(v)
            }
        })
        .collect();
    let reports = sweep(&template, &args.var, &values)?;
    let mut summary = String::from(
        "value,trials,successes,success_rate,in_promise_trials,in_promise_successes,promise_success_rate\n",
    );
    let fmt_rate = |r: Option<f64>| match r {
        Some(v) => format!("{v:.6}"),
        None => String::new(),
    };
    println!("{} over {:?}:", args.var, args.values);
    for (value, report) in values.iter().zip(&reports) {
        let a = &report.aggregates;
        println!(
            "  {} -> success {}, in-promise {}",
            value,
            fmt_rate(a.success_rate),
            fmt_rate(a.promise_success_rate)
        );
        summary.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            value,
            a.trials,
            a.successes,
            fmt_rate(a.success_rate),
            a.in_promise_trials,
            a.in_promise_successes,
            fmt_rate(a.promise_success_rate),
        ));
    }
    fs::create_dir_all(&args.common.out_dir)
        .with_context(|| format!("creating {}", args.common.out_dir.display()))?;
    write(&args.common.out_dir.join("sweep.csv"), &summary)?;
    for (i, report) in reports.iter().enumerate() {
        emit_report(report, &args.common.out_dir, args.common.format, &format!("report-{i:03}"))?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Campaign(args) => cmd_campaign(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}
