mod artifacts;
mod commands;
mod config;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use convscale::ingest::FilterSettings;

use crate::artifacts::Artifacts;
use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "convscale", version, about = "Scaling-law analysis of conversational corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Input files or directories (Movie-Dialogs directory, .jsonl, or plain text).
    #[arg(long = "input", global = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    #[arg(long, global = true, value_parser = ["candor", "movies-individual", "movies-grouped", "generic"])]
    kind: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_parser = ["all", "noun", "verb", "other", "func", "intj"])]
    unit: Option<String>,
    /// Include shuffled baselines in temporal analyses.
    #[arg(long, global = true)]
    shuffle: bool,
    #[arg(long, global = true)]
    min_utterances: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load, filter and (for movies-grouped) group inputs; writes corpus.jsonl.
    Ingest,
    /// Apply cleaning rules and re-tokenize; writes untagged clean.jsonl for external tagging.
    Clean,
    AnalyzeHeaps,
    AnalyzeZipf,
    AnalyzePos,
    AnalyzeTemporal,
    Descriptives,
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
    /// Collect fit tables from analysis output directories into a regression table.
    Report,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// zipf-sample, heaps-process, periodic or iid-gaps.
    #[arg(long)]
    process: Option<String>,
    /// Generator parameter as KEY=VALUE (e.g. beta=0.7, pattern=[1,3]).
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(long)]
    n_tokens: Option<usize>,
    #[arg(long)]
    conversations: Option<usize>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::Clean => "clean",
            Command::AnalyzeHeaps => "analyze-heaps",
            Command::AnalyzeZipf => "analyze-zipf",
            Command::AnalyzePos => "analyze-pos",
            Command::AnalyzeTemporal => "analyze-temporal",
            Command::Descriptives => "descriptives",
            Command::Synth(_) => "synth",
            Command::Report => "report",
        }
    }

    fn reads_corpus(&self) -> bool {
        !matches!(self, Command::Synth(_) | Command::Report)
    }
}

fn parse_param(raw: &str) -> Result<(String, toml::Value)> {
    let (key, value) = raw
        .split_once('=')
        .with_context(|| format!("parameter `{raw}` is not KEY=VALUE"))?;
    let doc: toml::Table = toml::from_str(&format!("v = {value}"))
        .or_else(|_| toml::from_str(&format!("v = {:?}", value)))
        .with_context(|| format!("parameter `{raw}` has an unreadable value"))?;
    Ok((key.trim().to_string(), doc["v"].clone()))
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    let c = &cli.common;
    let mut config = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if !c.inputs.is_empty() {
        config.inputs = c.inputs.clone();
    }
    if let Some(k) = &c.kind {
        config.kind = Some(k.parse()?);
    }
    if let Some(out) = &c.out {
        config.out_dir = out.clone();
    }
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    if let Some(unit) = &c.unit {
        config.unit = Some(unit.clone());
    }
    if c.shuffle {
        config.temporal.shuffle = true;
    }
    if config.kind.is_none() && cli.command.reads_corpus() {
        if let Some(first) = config.inputs.first() {
            config.kind = Some(input::sniff_kind(first)?);
        }
    }
    if let Some(n) = c.min_utterances {
        config.filter = Some(FilterSettings {
            min_utterances: n,
            ..config.effective_filter()
        });
    }
    if let Command::Synth(args) = &cli.command {
        if let Some(p) = &args.process {
            let mut table = toml::Table::new();
            table.insert("process".into(), p.replace('-', "_").into());
            config.synth.process = table;
        }
        for raw in &args.params {
            let (k, v) = parse_param(raw)?;
            config.synth.process.insert(k, v);
        }
        if let Some(n) = args.n_tokens {
            config.synth.n_tokens = n;
        }
        if let Some(n) = args.conversations {
            config.synth.conversations = n;
        }
    }
    if let Some(u) = &config.unit {
        u.parse::<convscale::Unit>()?;
    }
    config.resolve()
}

fn run(cli: Cli) -> Result<()> {
    let config = build_config(&cli)?;
    let mut out = Artifacts::new(&config, cli.command.name())?;
    match &cli.command {
        Command::Ingest => commands::ingest(&config, &mut out)?,
        Command::Clean => commands::clean(&config, &mut out)?,
        Command::AnalyzeHeaps => commands::analyze_heaps(&config, &mut out)?,
        Command::AnalyzeZipf => commands::analyze_zipf(&config, &mut out)?,
        Command::AnalyzePos => commands::analyze_pos(&config, &mut out)?,
        Command::AnalyzeTemporal => commands::analyze_temporal(&config, &mut out)?,
        Command::Descriptives => commands::descriptives(&config, &mut out)?,
        Command::Synth(_) => commands::synth(&config, &mut out)?,
        Command::Report => commands::report(&config, &mut out)?,
    }
    let dir = out.dir().display().to_string();
    out.finish()?;
    eprintln!("{}: wrote artifacts to {dir}", cli.command.name());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
