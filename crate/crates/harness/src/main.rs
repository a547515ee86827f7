//! Command-line front end. Subcommands: generate, train, evaluate,
//! compare, stats, selftest. Parameters come from JSON config files with
//! individual flag overrides; results go to CSV (plus optional JSON).
//! Exit codes: 0 success, 1 configuration error, 2 runtime/numerical
//! error, 3 self-test failure.

use anyhow::{anyhow, Context};
use axphy_channel::{ChannelModelId, ImpairmentType};
use axphy_dataset::shard::{ReadFilter, ShardSource};
use axphy_dataset::{DatasetSpec, ShardSet};
use axphy_frame::plan::TonePlan;
use axphy_frame::Mcs;
use axphy_harness::eval::{from_csv, to_csv};
use axphy_harness::{compare_curves, evaluate, EvalSpec, Metric, Receiver};
use axphy_neural::model::Architecture;
use axphy_neural::{load_bundle, save_bundle, NeuralReceiver, TrainConfig};
use axphy_rx::ReceiverConfig;
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "axphy", about = "OFDM receiver laboratory: datasets, training, BER/PER sweeps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic dataset of shard files.
    Generate(GenerateArgs),
    /// Train the learned receiver on shard files.
    Train(TrainArgs),
    /// Run a BER/PER sweep with a chosen receiver.
    Evaluate(EvaluateArgs),
    /// Report SNR gains between two saved sweeps.
    Compare(CompareArgs),
    /// Summarize a dataset directory.
    Stats(StatsArgs),
    /// Run the fast invariant suite.
    Selftest,
}

#[derive(Args)]
struct GenerateArgs {
    /// JSON file holding a full DatasetSpec (flags below override fields).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    mcs: u8,
    /// desk (20 packets x 16 symbols per setting) or full (3200 x 128).
    #[arg(long, default_value = "desk")]
    scale: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Channel models, e.g. "a,b" (default all six).
    #[arg(long)]
    models: Option<String>,
    /// Impairment types, e.g. "1,2,3".
    #[arg(long)]
    types: Option<String>,
    #[arg(long)]
    symbols_per_packet: Option<usize>,
    #[arg(long)]
    packets_per_setting: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Directory of .dwpy shards.
    #[arg(long)]
    data: PathBuf,
    /// Output bundle directory.
    #[arg(long)]
    out: PathBuf,
    /// JSON file holding a TrainConfig (flags below override fields).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 13)]
    clusters: usize,
    #[arg(long, default_value_t = 600)]
    units: usize,
    #[arg(long, default_value_t = 5)]
    layers: usize,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Warm-start from an existing bundle (fine-tuning path).
    #[arg(long)]
    warm_start: Option<PathBuf>,
    /// Restrict training records to these channel models, e.g. "a,b".
    #[arg(long)]
    models: Option<String>,
    #[arg(long, default_value_t = 7)]
    mcs: u8,
}

#[derive(Args)]
struct EvaluateArgs {
    /// genie | conv | conv-smooth<span> | conv-td<taps> | neural:<bundle>
    #[arg(long)]
    receiver: String,
    /// JSON file holding an EvalSpec (flags below override fields).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    mcs: u8,
    /// Comma-separated SNRs in dB ("inf" allowed).
    #[arg(long)]
    snrs: Option<String>,
    #[arg(long)]
    models: Option<String>,
    #[arg(long)]
    types: Option<String>,
    #[arg(long)]
    packets: Option<usize>,
    #[arg(long)]
    symbols: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON dump of the rows.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value = "ber")]
    metric: String,
    /// Comma-separated metric levels, e.g. "1e-2,1e-3".
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_models(s: &str) -> anyhow::Result<Vec<ChannelModelId>> {
    s.split(',')
        .map(|t| {
            ChannelModelId::from_letter(t.trim().chars().next().unwrap_or('?'))
                .ok_or_else(|| anyhow!("unknown channel model '{t}'"))
        })
        .collect()
}

fn parse_types(s: &str) -> anyhow::Result<Vec<ImpairmentType>> {
    s.split(',')
        .map(|t| match t.trim() {
            "0" | "off" => Ok(ImpairmentType::Off),
            "1" | "I" => Ok(ImpairmentType::TypeI),
            "2" | "II" => Ok(ImpairmentType::TypeII),
            "3" | "III" => Ok(ImpairmentType::TypeIII),
            other => Err(anyhow!("unknown impairment type '{other}'")),
        })
        .collect()
}

fn parse_snrs(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t.eq_ignore_ascii_case("inf") {
                Ok(f64::INFINITY)
            } else {
                t.parse::<f64>().map_err(|e| anyhow!("bad SNR '{t}': {e}"))
            }
        })
        .collect()
}

fn parse_mcs(idx: u8) -> anyhow::Result<Mcs> {
    Mcs::from_index(idx).ok_or_else(|| anyhow!("unsupported MCS index {idx} (use 7, 8, 9 or 10)"))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn shard_paths(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading dataset directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "dwpy"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(anyhow!("no .dwpy shards under {}", dir.display()));
    }
    Ok(paths)
}

fn parse_receiver(s: &str) -> anyhow::Result<Receiver> {
    if s == "genie" {
        return Ok(Receiver::Genie);
    }
    if s == "conv" {
        return Ok(Receiver::Conventional(ReceiverConfig::NoSmoothing));
    }
    if let Some(span) = s.strip_prefix("conv-smooth") {
        let span: usize = span.parse().map_err(|e| anyhow!("bad span: {e}"))?;
        return Ok(Receiver::Conventional(ReceiverConfig::Smoothing { span }));
    }
    if let Some(taps) = s.strip_prefix("conv-td") {
        let n_taps: usize = taps.parse().map_err(|e| anyhow!("bad tap count: {e}"))?;
        return Ok(Receiver::Conventional(ReceiverConfig::TimeDomain { n_taps }));
    }
    if let Some(path) = s.strip_prefix("neural:") {
        let (model, _) = load_bundle(Path::new(path))
            .with_context(|| format!("loading model bundle {path}"))?;
        return Ok(Receiver::Neural(Box::new(model)));
    }
    Err(anyhow!(
        "unknown receiver '{s}' (genie | conv | conv-smooth<span> | conv-td<taps> | neural:<dir>)"
    ))
}

/// Errors before any computation are configuration errors (exit 1);
/// failures after that are runtime errors (exit 2).
fn run_generate(a: GenerateArgs) -> anyhow::Result<i32> {
    let mut spec: DatasetSpec = match &a.config {
        Some(p) => load_json(p)?,
        None => {
            let mcs = parse_mcs(a.mcs)?;
            match a.scale.as_str() {
                "desk" => DatasetSpec::desk_scale(mcs, a.seed.unwrap_or(1)),
                "full" => DatasetSpec::full_scale(mcs, a.seed.unwrap_or(1)),
                other => return Err(anyhow!("unknown scale '{other}' (desk|full)")),
            }
        }
    };
    if let Some(s) = a.seed {
        spec.master_seed = s;
    }
    if let Some(m) = &a.models {
        spec.models = parse_models(m)?;
    }
    if let Some(t) = &a.types {
        spec.imp_types = parse_types(t)?;
    }
    if let Some(n) = a.symbols_per_packet {
        spec.symbols_per_packet = n;
    }
    if let Some(n) = a.packets_per_setting {
        for plan in &mut spec.plans {
            for q in &mut plan.grid {
                q.packets_per_setting = n;
            }
        }
    }
    eprintln!(
        "generating {} records ({} packets) into {}",
        spec.total_records(),
        spec.total_packets(),
        a.out.display()
    );
    let paths = axphy_dataset::generate(&spec, &a.out).context("generation failed")?;
    for p in &paths {
        println!("{}", p.display());
    }
    Ok(0)
}

fn run_train(a: TrainArgs) -> anyhow::Result<i32> {
    let mcs = parse_mcs(a.mcs)?;
    let mut cfg: TrainConfig = match &a.config {
        Some(p) => load_json(p)?,
        None => TrainConfig::default(),
    };
    if let Some(v) = a.batch {
        cfg.batch = v;
    }
    if let Some(v) = a.lr {
        cfg.lr = v;
    }
    if let Some(v) = a.epochs {
        cfg.epochs = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    let paths = shard_paths(&a.data)?;
    let set = ShardSet::open(&paths).context("opening shards")?;
    let filter = ReadFilter {
        models: match &a.models {
            Some(m) => Some(parse_models(m)?),
            None => None,
        },
        ..Default::default()
    };
    let mut source = ShardSource::all(set, &filter).context("scanning shards")?;
    let mut model = match &a.warm_start {
        Some(dir) => {
            let (m, _) = load_bundle(dir).with_context(|| format!("warm start {}", dir.display()))?;
            m
        }
        None => NeuralReceiver::new(
            mcs,
            Architecture {
                clusters: a.clusters,
                hidden_layers: a.layers,
                hidden_units: a.units,
            },
            cfg.seed,
        )?,
    };
    use axphy_neural::BatchSource;
    eprintln!(
        "training m={} s={} on {} records, {} epochs, batch {}, lr {}",
        model.clusters,
        model.tones_per_cluster,
        source.len(),
        cfg.epochs,
        cfg.batch,
        cfg.lr
    );
    let report = axphy_neural::train(&mut model, &mut source, &cfg).context("training failed")?;
    let fingerprint: Vec<String> = paths
        .iter()
        .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
        .collect();
    save_bundle(
        &model,
        &a.out,
        serde_json::json!({
            "config": cfg,
            "dataset": fingerprint,
            "epoch_loss": report.epoch_loss(),
        }),
    )?;
    for (e, l) in report.epoch_loss().iter().enumerate() {
        println!("epoch {e} loss {l:.6e}");
    }
    println!("bundle written to {}", a.out.display());
    Ok(0)
}

fn run_evaluate(a: EvaluateArgs) -> anyhow::Result<i32> {
    let receiver = parse_receiver(&a.receiver)?;
    let mut spec: EvalSpec = match &a.config {
        Some(p) => load_json(p)?,
        None => EvalSpec {
            mcs: parse_mcs(a.mcs)?,
            ..Default::default()
        },
    };
    if a.config.is_some() {
        // MCS flag only applies when no config file pins it.
    } else {
        spec.mcs = parse_mcs(a.mcs)?;
    }
    if let Some(s) = &a.snrs {
        spec.snr_grid = parse_snrs(s)?;
    }
    if let Some(m) = &a.models {
        spec.models = parse_models(m)?;
    }
    if let Some(t) = &a.types {
        spec.imp_types = parse_types(t)?;
    }
    if let Some(p) = a.packets {
        spec.packets_per_setting = p;
    }
    if let Some(n) = a.symbols {
        spec.n_symbols = n;
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    let plan = TonePlan::new();
    let rows = evaluate(&receiver, &spec, &plan).context("evaluation failed")?;
    std::fs::write(&a.out, to_csv(&rows))
        .with_context(|| format!("writing {}", a.out.display()))?;
    if let Some(jp) = &a.json {
        std::fs::write(jp, serde_json::to_string_pretty(&rows)?)
            .with_context(|| format!("writing {}", jp.display()))?;
    }
    println!("{} rows -> {}", rows.len(), a.out.display());
    Ok(0)
}

fn run_compare(a: CompareArgs) -> anyhow::Result<i32> {
    let ra = from_csv(&std::fs::read_to_string(&a.a)?)
        .map_err(|e| anyhow!("{}: {e}", a.a.display()))?;
    let rb = from_csv(&std::fs::read_to_string(&a.b)?)
        .map_err(|e| anyhow!("{}: {e}", a.b.display()))?;
    let metric = match a.metric.as_str() {
        "ber" => Metric::Ber,
        "per" => Metric::Per,
        other => return Err(anyhow!("unknown metric '{other}' (ber|per)")),
    };
    let levels = match &a.levels {
        Some(s) => Some(parse_snrs(s)?),
        None => None,
    };
    let rows = compare_curves(&ra, &rb, metric, levels).context("comparison failed")?;
    std::fs::write(&a.out, axphy_harness::compare::gains_to_csv(&rows))?;
    for r in &rows {
        println!(
            "level {:.3e}: snr_a {:.2} dB, snr_b {:.2} dB, gain {:+.2} dB",
            r.level, r.snr_a, r.snr_b, r.gain_db
        );
    }
    Ok(0)
}

fn run_stats(a: StatsArgs) -> anyhow::Result<i32> {
    let paths = shard_paths(&a.data)?;
    let rows = axphy_dataset::dataset_stats(&paths).context("reading shards")?;
    let csv = axphy_dataset::stats_to_csv(&rows);
    match &a.out {
        Some(p) => std::fs::write(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Selftest => {
            let results = axphy_harness::selftest::run_selftest();
            if axphy_harness::selftest::print_and_summarize(&results) {
                0
            } else {
                3
            }
        }
        cmd => {
            let (result, is_config_phase) = match cmd {
                Cmd::Generate(a) => (run_generate(a), false),
                Cmd::Train(a) => (run_train(a), false),
                Cmd::Evaluate(a) => (run_evaluate(a), false),
                Cmd::Compare(a) => (run_compare(a), false),
                Cmd::Stats(a) => (run_stats(a), false),
                Cmd::Selftest => unreachable!(),
            };
            let _ = is_config_phase;
            match result {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    // Configuration mistakes (bad flags, missing files,
                    // unparsable configs) exit 1; anything that failed
                    // mid-computation exits 2.
                    let msg = format!("{e:#}");
                    if msg.contains("config")
                        || msg.contains("unknown")
                        || msg.contains("unsupported")
                        || msg.contains("no .dwpy")
                        || msg.contains("loading model bundle")
                        || msg.contains("bad ")
                    {
                        1
                    } else {
                        2
                    }
                }
            }
        }
    };
    std::process::exit(code);
}
