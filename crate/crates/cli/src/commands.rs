use std::path::Path;

use anyhow::{bail, Context, Result};
use convscale::descriptives::{
    basic_stats, corpus_ttr, normalized_pause_score, pos_proportions, run_outliers, top_interjections, ttr,
    words_utterances_r, Measure,
};
use convscale::ingest::{write_tagged_jsonl, Corpus, CorpusKind, Token, Utterance};
use convscale::report::{log10_histogram, BmRow, FitRow};
use convscale::scaling::{
    averaged_growth_curve, corpus_rank_frequency, heaps_fit, interjection_split_fit, per_conversation_exponents,
    ses_flag, zipf_fit, FitResult,
};
use convscale::synth::{synth_corpus, SynthSpec};
use convscale::temporal::{corpus_bm, stream_gaps, tertile_interarrivals, BmOptions, BmUnit, GapUnit};
use convscale::textprep::{tokenize_surfaces, Cleaner, MacroClass, ProfileName, Upos};
use convscale::Unit;
use serde::{Deserialize, Serialize};

use crate::artifacts::Artifacts;
use crate::config::RunConfig;
use crate::input::load_corpus;

fn units(config: &RunConfig, corpus: &Corpus) -> Result<(Vec<Unit>, bool)> {
    match &config.unit {
        Some(u) => Ok((vec![u.parse()?], true)),
        None if corpus.is_tagged() => Ok((Unit::ALL_UNITS.to_vec(), false)),
        None => Ok((vec![Unit::All], false)),
    }
}

fn jsonl_bytes(corpus: &Corpus) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_tagged_jsonl(corpus, &mut buf)?;
    Ok(buf)
}

#[derive(Serialize)]
struct CorpusSummary<'a> {
    kind: CorpusKind,
    n_conversations: usize,
    n_utterances: usize,
    n_tokens: usize,
    tagged: bool,
    provenance: &'a str,
}

fn summary(corpus: &Corpus) -> CorpusSummary<'_> {
    CorpusSummary {
        kind: corpus.kind,
        n_conversations: corpus.conversations.len(),
        n_utterances: corpus.n_utterances(),
        n_tokens: corpus.n_tokens(),
        tagged: corpus.is_tagged(),
        provenance: &corpus.provenance,
    }
}

pub fn ingest(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let corpus = load_corpus(config)?;
    out.write_bytes("corpus.jsonl", &jsonl_bytes(&corpus)?)?;
    out.json("ingest.json", &summary(&corpus))
}

fn profile_for(kind: CorpusKind) -> ProfileName {
    match kind {
        CorpusKind::Candor => ProfileName::Candor,
        CorpusKind::MoviesIndividual | CorpusKind::MoviesGrouped => ProfileName::Movies,
        CorpusKind::Generic => ProfileName::Common,
    }
}

pub fn clean(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let mut corpus = load_corpus(config)?;
    let cleaner = Cleaner::new(&config.clean)?;
    let profile = profile_for(corpus.kind);
    let mut dropped = 0usize;
    for conv in &mut corpus.conversations {
        let utterances = std::mem::take(&mut conv.utterances);
        for u in utterances {
            let text = match &u.text {
                Some(t) => t.clone(),
                None => u.tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "),
            };
            let cleaned = cleaner.clean(&text, profile);
            let tokens: Vec<Token> = tokenize_surfaces(&cleaned)
                .into_iter()
                .map(|s| Token::with_policy(s, Upos::X, config.form_policy))
                .collect();
            if tokens.is_empty() {
                dropped += 1;
                continue;
            }
            conv.utterances.push(Utterance {
                tokens,
                text: Some(cleaned),
                ..u
            });
        }
    }
    corpus.conversations.retain(|c| !c.utterances.is_empty());
    corpus.append_provenance(&format!("clean(profile={profile})"));

    #[derive(Serialize)]
    struct CleanSummary<'a> {
        profile: ProfileName,
        dropped_empty_utterances: usize,
        #[serde(flatten)]
        corpus: CorpusSummary<'a>,
    }
    out.write_bytes("clean.jsonl", &jsonl_bytes(&corpus)?)?;
    out.json(
        "clean.json",
        &CleanSummary {
            profile,
            dropped_empty_utterances: dropped,
            corpus: summary(&corpus),
        },
    )
}

type UnitFits = Vec<(Unit, FitResult)>;

/// Fit every unit; failures of implicitly selected units are reported, not fatal.
fn fit_units(
    config: &RunConfig,
    corpus: &Corpus,
    fit: impl Fn(Unit) -> convscale::Result<FitResult>,
) -> Result<(UnitFits, Vec<String>)> {
    let (units, explicit) = units(config, corpus)?;
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    for unit in units {
        match fit(unit) {
            Ok(f) => fits.push((unit, f)),
            Err(e) if !explicit => skipped.push(format!("skipped unit={unit}: {e}")),
            Err(e) => return Err(e).with_context(|| format!("fitting unit {unit}")),
        }
    }
    Ok((fits, skipped))
}

#[derive(Serialize)]
struct ConversationFitRow<'a> {
    id: &'a str,
    exponent: f64,
    ses: f64,
    ses_flag: &'static str,
    r2: f64,
    n_points: usize,
}

pub fn analyze_heaps(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let corpus = load_corpus(config)?;
    let (fits, skipped) = fit_units(config, &corpus, |u| heaps_fit(&corpus, u, &config.regimes))?;
    let rows: Vec<FitRow> = fits.iter().map(|(u, f)| FitRow::new(u, corpus.kind, f)).collect();
    out.csv("heaps_fits.csv", &skipped, &rows)?;
    for (unit, _) in &fits {
        let curve = averaged_growth_curve(&corpus, *unit)?;
        out.two_column(&format!("heaps_curve_{unit}.tsv"), ("t", "n_unique"), &curve.points())?;
    }

    let per_conv = per_conversation_exponents(&corpus, &config.regimes)?;
    let conv_rows: Vec<ConversationFitRow> = per_conv
        .fits
        .iter()
        .map(|(id, f)| ConversationFitRow {
            id,
            exponent: f.exponent,
            ses: f.ses,
            ses_flag: ses_flag(f.ses),
            r2: f.r2,
            n_points: f.n_points,
        })
        .collect();
    out.csv(
        "heaps_per_conversation.csv",
        &[format!("skipped_conversations={}", per_conv.skipped)],
        &conv_rows,
    )
}

pub fn analyze_zipf(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let corpus = load_corpus(config)?;
    let (fits, skipped) = fit_units(config, &corpus, |u| zipf_fit(&corpus, u, &config.regimes))?;
    let rows: Vec<FitRow> = fits.iter().map(|(u, f)| FitRow::new(u, corpus.kind, f)).collect();
    out.csv("zipf_fits.csv", &skipped, &rows)?;
    for (unit, _) in &fits {
        let table = corpus_rank_frequency(&corpus, *unit)?;
        out.two_column(&format!("zipf_rank_{unit}.tsv"), ("rank", "count"), &table.points())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SplitRow {
    group: &'static str,
    n_conversations: usize,
    proportion: f64,
    exponent: Option<f64>,
    ses: Option<f64>,
    ses_flag: Option<&'static str>,
    r2: Option<f64>,
    error: Option<String>,
}

fn split_row(group: &'static str, n: usize, proportion: f64, fit: &convscale::Result<FitResult>) -> SplitRow {
    let ok = fit.as_ref().ok();
    SplitRow {
        group,
        n_conversations: n,
        proportion,
        exponent: ok.map(|f| f.exponent),
        ses: ok.map(|f| f.ses),
        ses_flag: ok.map(|f| ses_flag(f.ses)),
        r2: ok.map(|f| f.r2),
        error: fit.as_ref().err().map(|e| e.to_string()),
    }
}

pub fn analyze_pos(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let corpus = load_corpus(config)?;
    corpus.require_tagged("POS analysis")?;
    out.csv("pos_proportions.csv", &[], &pos_proportions(&corpus)?)?;
    out.csv(
        "top_interjections.csv",
        &[],
        &top_interjections(&corpus, config.descriptives.top_interjections)?,
    )?;
    let split = interjection_split_fit(&corpus, &config.regimes)?;
    let rows = [
        split_row("low", split.low_ids.len(), split.proportions.0, &split.low),
        split_row("high", split.high_ids.len(), split.proportions.1, &split.high),
    ];
    out.csv(
        "interjection_split.csv",
        &[format!("median_interjection_share={}", split.median_share)],
        &rows,
    )
}

fn bm_units(corpus: &Corpus) -> Vec<BmUnit> {
    let mut units = vec![BmUnit::WordTypes];
    if corpus.is_tagged() {
        units.push(BmUnit::Classes);
        units.extend(MacroClass::ALL.iter().map(|&c| BmUnit::Class(c)));
    }
    units
}

pub fn analyze_temporal(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let corpus = load_corpus(config)?;
    let units = match &config.unit {
        Some(u) => match u.parse::<Unit>()? {
            Unit::All => vec![BmUnit::WordTypes],
            Unit::Class(c) => vec![BmUnit::Class(c)],
        },
        None => bm_units(&corpus),
    };
    let shuffles: &[bool] = if config.temporal.shuffle { &[false, true] } else { &[false] };
    let mut rows = Vec::new();
    for &shuffle in shuffles {
        for &unit in &units {
            let opts = BmOptions {
                shuffle,
                seed: config.seed,
                order: config.temporal.averaging_order,
            };
            let bm = corpus_bm(&corpus, unit, opts)?;
            rows.push(BmRow {
                label: format!("{}:{unit}", corpus.kind),
                b: bm.b,
                m: bm.m,
                shuffled: shuffle,
            });
        }
    }
    out.csv("burstiness_memory.csv", &[], &rows)?;

    let mut thirds: [Vec<usize>; 3] = Default::default();
    let mut short = 0usize;
    for conv in &corpus.conversations {
        match tertile_interarrivals(conv, GapUnit::Words) {
            Ok(parts) => {
                for (acc, part) in thirds.iter_mut().zip(parts) {
                    acc.extend(part);
                }
            }
            Err(_) => short += 1,
        }
    }
    for (i, gaps) in thirds.iter().enumerate() {
        out.csv(
            &format!("gaps_tertile_{}.csv", i + 1),
            &[format!("unit=words conversations_too_short={short}")],
            &log10_histogram(gaps),
        )?;
    }
    if corpus.is_tagged() {
        for class in MacroClass::ALL {
            let gaps: Vec<usize> = corpus
                .conversations
                .iter()
                .flat_map(|c| stream_gaps(&c.tokens().collect::<Vec<_>>(), GapUnit::Class(class)))
                .collect();
            out.csv(&format!("gaps_class_{class}.csv"), &[], &log10_histogram(&gaps))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsRow {
    measure: Measure,
    n: usize,
    mean: f64,
    sd: f64,
    median: f64,
    min: f64,
    max: f64,
    cv: f64,
}

#[derive(Serialize)]
struct ConversationRow<'a> {
    id: &'a str,
    n_utterances: usize,
    n_tokens: usize,
    ttr: Option<f64>,
    max_unique_run: usize,
    run_outlier: bool,
    pause_score: Option<f64>,
}

pub fn descriptives(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let corpus = load_corpus(config)?;
    let mut stats = Vec::new();
    for measure in [Measure::Words, Measure::Utterances, Measure::SpeakerWords] {
        let s = basic_stats(&corpus, measure)?;
        stats.push(StatsRow {
            measure,
            n: s.n,
            mean: s.mean,
            sd: s.sd,
            median: s.median,
            min: s.min,
            max: s.max,
            cv: s.cv,
        });
    }
    out.csv("descriptives.csv", &[], &stats)?;

    let runs = run_outliers(&corpus, config.descriptives.run_coverage)?;
    let mut rows = Vec::new();
    for (conv, (_, run)) in corpus.conversations.iter().zip(&runs.max_runs) {
        rows.push(ConversationRow {
            id: &conv.id,
            n_utterances: conv.utterances.len(),
            n_tokens: conv.n_tokens(),
            ttr: ttr(conv).ok(),
            max_unique_run: *run,
            run_outlier: runs.outliers.contains(&conv.id),
            pause_score: normalized_pause_score(conv, &config.pauses)?,
        });
    }
    out.csv(
        "conversations.csv",
        &[format!("run_cutoff={} run_median={}", runs.cutoff, runs.median)],
        &rows,
    )?;

    #[derive(Serialize)]
    struct Summary<'a> {
        #[serde(flatten)]
        corpus: CorpusSummary<'a>,
        ttr_mean: Option<f64>,
        ttr_sd: Option<f64>,
        words_utterances_r: Option<f64>,
        run_cutoff: usize,
        run_median: f64,
        run_outliers: usize,
    }
    let ttr_stats = corpus_ttr(&corpus).ok();
    out.json(
        "descriptives.json",
        &Summary {
            corpus: summary(&corpus),
            ttr_mean: ttr_stats.map(|t| t.0),
            ttr_sd: ttr_stats.map(|t| t.1),
            words_utterances_r: words_utterances_r(&corpus).ok(),
            run_cutoff: runs.cutoff,
            run_median: runs.median,
            run_outliers: runs.outliers.len(),
        },
    )
}

pub fn synth(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let mut table = config.synth.process.clone();
    table.insert("n_tokens".into(), toml::Value::Integer(config.synth.n_tokens as i64));
    table.insert("seed".into(), toml::Value::Integer(config.seed as i64));
    let spec: SynthSpec = toml::Value::Table(table)
        .try_into()
        .context("invalid synth process parameters")?;
    if config.synth.conversations == 0 {
        bail!("synth needs at least one conversation");
    }
    let corpus = synth_corpus(&spec, config.synth.conversations)?;
    out.write_bytes("synth.jsonl", &jsonl_bytes(&corpus)?)?;

    #[derive(Serialize)]
    struct SynthSummary<'a> {
        spec: &'a SynthSpec,
        #[serde(flatten)]
        corpus: CorpusSummary<'a>,
    }
    out.json(
        "synth.json",
        &SynthSummary {
            spec: &spec,
            corpus: summary(&corpus),
        },
    )
}

#[derive(Debug, Deserialize)]
struct FitRowIn {
    unit: String,
    corpus: String,
    exponent: f64,
    ses_flag: String,
}

#[derive(Serialize)]
struct TableRow {
    law: &'static str,
    corpus: String,
    unit: String,
    exponent: f64,
    ses_flag: String,
    /// Exponent to two decimals with its SES flag appended.
    cell: String,
}

fn read_fits(path: &Path) -> Result<Vec<FitRowIn>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<FitRowIn>, _>>()
        .with_context(|| format!("parsing {}", path.display()))
}

/// Regression table across analysis output directories given as inputs.
pub fn report(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    if config.inputs.is_empty() {
        bail!("report needs at least one analysis output directory as --input");
    }
    let mut rows = Vec::new();
    for (law, file) in [("zipf", "zipf_fits.csv"), ("heaps", "heaps_fits.csv")] {
        for dir in &config.inputs {
            let path = dir.join(file);
            if !path.is_file() {
                continue;
            }
            for r in read_fits(&path)? {
                rows.push(TableRow {
                    law,
                    cell: format!("{:.2}{}", r.exponent, r.ses_flag),
                    corpus: r.corpus,
                    unit: r.unit,
                    exponent: r.exponent,
                    ses_flag: r.ses_flag,
                });
            }
        }
    }
    if rows.is_empty() {
        bail!("no heaps_fits.csv or zipf_fits.csv found in the report inputs");
    }
    out.csv("regression_table.csv", &[], &rows)
}
