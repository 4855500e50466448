//! Synthetic token streams with known exponents and gap statistics.
//!
//! Streams are sequences of integer type ids; [`synth_corpus`] wraps them as
//! untagged conversations (`w<id>` surfaces, tag X) so the whole pipeline can run
//! on them.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Conversation, Corpus, CorpusKind, Token, Utterance};
use crate::rng::{derive_seed, rng_from};

/// I.i.d. ranks in `1..=vocab` with `P(r) ∝ r^-alpha`.
pub fn zipf_sample(alpha: f64, vocab: usize, n_tokens: usize, seed: u64) -> Result<Vec<u32>> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParam(format!("zipf alpha must be finite and >= 0, got {alpha}")));
    }
    if vocab < 2 || vocab > u32::MAX as usize {
        return Err(Error::InvalidParam(format!("zipf vocab must be >= 2, got {vocab}")));
    }
    let mut cdf = Vec::with_capacity(vocab);
    let mut acc = 0.0;
    for r in 1..=vocab {
        acc += (r as f64).powf(-alpha);
        cdf.push(acc);
    }
    let mut rng = rng_from(seed);
    Ok((0..n_tokens)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(vocab - 1);
            idx as u32 + 1
        })
        .collect())
}

/// Innovation process targeting `E[N(t)] ≈ t^beta`: at step t a new type appears
/// with probability `min(1, beta * t^(beta-1))`, otherwise a uniformly chosen
/// earlier type repeats. Type ids are assigned in order of first appearance.
pub fn heaps_process(beta: f64, n_tokens: usize, seed: u64) -> Result<Vec<u32>> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParam(format!("heaps beta must lie in (0, 1], got {beta}")));
    }
    let mut rng = rng_from(seed);
    let mut n_types = 0u32;
    let mut out = Vec::with_capacity(n_tokens);
    for t in 1..=n_tokens {
        let p_new = (beta * (t as f64).powf(beta - 1.0)).min(1.0);
        if n_types == 0 || rng.gen::<f64>() < p_new {
            out.push(n_types);
            n_types += 1;
        } else {
            out.push(rng.gen_range(0..n_types));
        }
    }
    Ok(out)
}

/// Marker type 0 recurring with gaps cycling through `pattern`; every other
/// position holds a fresh filler type. Exactly `n_tokens` long.
pub fn periodic(pattern: &[usize], n_tokens: usize) -> Result<Vec<u32>> {
    if pattern.is_empty() || pattern.contains(&0) {
        return Err(Error::InvalidParam("periodic gap pattern must be non-empty with gaps >= 1".into()));
    }
    Ok(marker_stream(pattern.iter().copied().cycle(), n_tokens))
}

/// Marker type 0 separated by i.i.d. geometric gaps (support 1, 2, ...,
/// success probability `p`).
pub fn iid_gaps(p: f64, n_tokens: usize, seed: u64) -> Result<Vec<u32>> {
    let geo = Geometric::new(p).map_err(|e| Error::InvalidParam(format!("geometric p={p}: {e}")))?;
    if p == 0.0 {
        return Err(Error::InvalidParam("geometric p must be > 0".into()));
    }
    let mut rng = rng_from(seed);
    let gaps = std::iter::from_fn(move || Some(geo.sample(&mut rng) as usize + 1));
    Ok(marker_stream(gaps, n_tokens))
}

fn marker_stream(gaps: impl Iterator<Item = usize>, n_tokens: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n_tokens);
    let mut filler = 1u32;
    if n_tokens > 0 {
        out.push(0);
    }
    for gap in gaps {
        if out.len() >= n_tokens {
            break;
        }
        for _ in 1..gap {
            if out.len() >= n_tokens {
                break;
            }
            out.push(filler);
            filler += 1;
        }
        if out.len() < n_tokens {
            out.push(0);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "snake_case")]
pub enum SynthProcess {
    ZipfSample { alpha: f64, vocab: usize },
    HeapsProcess { beta: f64 },
    Periodic { pattern: Vec<usize> },
    IidGaps { p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    #[serde(flatten)]
    pub process: SynthProcess,
    pub n_tokens: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn generate(&self) -> Result<Vec<u32>> {
        if self.n_tokens == 0 {
            return Err(Error::InvalidParam("n_tokens must be >= 1".into()));
        }
        match &self.process {
            SynthProcess::ZipfSample { alpha, vocab } => zipf_sample(*alpha, *vocab, self.n_tokens, self.seed),
            SynthProcess::HeapsProcess { beta } => heaps_process(*beta, self.n_tokens, self.seed),
            SynthProcess::Periodic { pattern } => periodic(pattern, self.n_tokens),
            SynthProcess::IidGaps { p } => iid_gaps(*p, self.n_tokens, self.seed),
        }
    }
}

const UTTERANCE_LEN: usize = 20;

/// Wrap a stream as one untagged conversation split into 20-token utterances
/// alternating between two speakers.
pub fn stream_to_conversation(id: &str, stream: &[u32]) -> Conversation {
    let utterances = stream
        .chunks(UTTERANCE_LEN)
        .enumerate()
        .map(|(i, chunk)| {
            Utterance::new(
                if i % 2 == 0 { "A" } else { "B" },
                chunk.iter().map(|t| Token::raw(format!("w{t}"))).collect(),
            )
        })
        .collect();
    Conversation::new(id, CorpusKind::Generic, utterances)
}

/// `n_conversations` independent streams; conversation `i` uses a seed derived
/// from the spec seed and its id.
pub fn synth_corpus(spec: &SynthSpec, n_conversations: usize) -> Result<Corpus> {
    let conversations = (0..n_conversations)
        .map(|i| {
            let id = format!("synth{i}");
            let sub = SynthSpec {
                seed: derive_seed(spec.seed, &id),
                ..spec.clone()
            };
            Ok(stream_to_conversation(&id, &sub.generate()?))
        })
        .collect::<Result<_>>()?;
    Ok(Corpus::new(
        CorpusKind::Generic,
        conversations,
        format!(
            "synth:{}",
            serde_json::to_string(spec).expect("spec serializes")
        ),
    ))
}
