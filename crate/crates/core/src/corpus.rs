//! Reproducible synthetic record streams.
//!
//! A record stream is plain text: one record per line, terms separated by
//! single spaces, lines terminated by `\n`. The generator draws term ranks
//! from a Zipf distribution (via a precomputed cumulative table and binary
//! search) and record lengths from a truncated geometric distribution, so a
//! small number of parameters reproduces the shape of real vocabularies:
//! a few very long postings lists and a long tail of short ones.
//!
//! All randomness comes from a `Xoshiro256**` generator seeded through
//! SplitMix64 from a single `u64`, so a seed fully determines the output
//! bytes — byte-identical across runs and platforms. Rank `k` is rendered
//! as the term `t<k in base 36>`, which survives tokenization unchanged.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use thiserror::Error;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Generation stops at the first record boundary at or past this many
    /// postings (term occurrences).
    pub target_postings: u64,
    /// Number of distinct term ranks the sampler can draw from.
    pub vocab_size: u64,
    /// Zipf exponent; rank k is drawn with weight 1/k^exponent.
    pub zipf_exponent: f64,
    /// Mean of the (untruncated) geometric record-length distribution.
    pub mean_record_len: f64,
    /// Record lengths are clamped to `1..=max_record_len`.
    pub max_record_len: u64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            target_postings: 10_000_000,
            vocab_size: 100_000,
            zipf_exponent: 1.0,
            mean_record_len: 3.0,
            max_record_len: 20,
            seed: DEFAULT_SEED,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<(), CorpusError> {
        if self.vocab_size == 0 {
            return Err(CorpusError::Config("vocab_size must be at least 1".into()));
        }
        if !self.zipf_exponent.is_finite() || self.zipf_exponent < 0.0 {
            return Err(CorpusError::Config(format!(
                "zipf_exponent must be finite and non-negative, got {}",
                self.zipf_exponent
            )));
        }
        if !self.mean_record_len.is_finite() || self.mean_record_len < 1.0 {
            return Err(CorpusError::Config(format!(
                "mean_record_len must be at least 1, got {}",
                self.mean_record_len
            )));
        }
        if self.max_record_len == 0 {
            return Err(CorpusError::Config("max_record_len must be at least 1".into()));
        }
        if self.mean_record_len > self.max_record_len as f64 {
            return Err(CorpusError::Config(format!(
                "mean_record_len ({}) exceeds max_record_len ({})",
                self.mean_record_len, self.max_record_len
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid corpus configuration: {0}")]
    Config(String),
    #[error("write error: {0}")]
    Write(#[from] io::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenStats {
    pub records: u64,
    pub postings: u64,
    /// Ranks that actually occurred at least once.
    pub distinct_terms: u64,
}

/// Uniform double in `[0, 1)` from the top 53 bits of one draw.
#[inline]
fn next_f64(rng: &mut Xoshiro256StarStar) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Zipf sampling by inversion on a cumulative weight table.
struct ZipfSampler {
    cumulative: Vec<f64>,
}

impl ZipfSampler {
    fn new(vocab_size: u64, exponent: f64) -> Self {
        let mut cumulative = Vec::with_capacity(vocab_size as usize);
        let mut total = 0.0f64;
        for k in 1..=vocab_size {
            total += 1.0 / (k as f64).powf(exponent);
            cumulative.push(total);
        }
        ZipfSampler { cumulative }
    }

    /// Draws a rank in `0..vocab_size`, 0 being the most frequent.
    #[inline]
    fn sample(&self, rng: &mut Xoshiro256StarStar) -> u64 {
        let total = *self.cumulative.last().expect("vocab_size >= 1");
        let u = next_f64(rng) * total;
        let rank = self.cumulative.partition_point(|&c| c <= u);
        (rank as u64).min(self.cumulative.len() as u64 - 1)
    }
}

/// Truncated geometric record length in `1..=max` with the given mean
/// before truncation, sampled by inversion.
#[inline]
fn record_length(rng: &mut Xoshiro256StarStar, mean: f64, max: u64) -> u64 {
    if mean <= 1.0 {
        return 1;
    }
    let p = 1.0 / mean;
    let u = next_f64(rng);
    let len = 1.0 + ((1.0 - u).ln() / (1.0 - p).ln()).floor();
    (len as u64).clamp(1, max)
}

const BASE36: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Appends `t<rank in base 36>` to `buf`.
fn push_term(buf: &mut Vec<u8>, rank: u64) {
    buf.push(b't');
    let mut digits = [0u8; 13];
    let mut i = digits.len();
    let mut v = rank;
    loop {
        i -= 1;
        digits[i] = BASE36[(v % 36) as usize];
        v /= 36;
        if v == 0 {
            break;
        }
    }
    buf.extend_from_slice(&digits[i..]);
}

/// Writes a synthetic record stream and reports what was produced.
pub fn generate<W: Write>(config: &SynthConfig, out: &mut W) -> Result<GenStats, CorpusError> {
    config.validate()?;
    let mut rng = Xoshiro256StarStar::seed_from_u64(config.seed);
    let zipf = ZipfSampler::new(config.vocab_size, config.zipf_exponent);
    let mut seen = vec![false; config.vocab_size as usize];
    let mut stats = GenStats::default();
    let mut line: Vec<u8> = Vec::with_capacity(16 * config.max_record_len as usize);
    while stats.postings < config.target_postings {
        let len = record_length(&mut rng, config.mean_record_len, config.max_record_len);
        line.clear();
        for i in 0..len {
            if i > 0 {
                line.push(b' ');
            }
            let rank = zipf.sample(&mut rng);
            if !seen[rank as usize] {
                seen[rank as usize] = true;
                stats.distinct_terms += 1;
            }
            push_term(&mut line, rank);
        }
        line.push(b'\n');
        out.write_all(&line)?;
        stats.records += 1;
        stats.postings += len;
    }
    Ok(stats)
}

/// Like [`generate`] but returns the records in memory, one `Box<[u8]>`
/// per line without the terminator.
pub fn generate_records(config: &SynthConfig) -> Result<(Vec<Box<[u8]>>, GenStats), CorpusError> {
    let mut buf = Vec::new();
    let stats = generate(config, &mut buf)?;
    let records = buf
        .split(|&b| b == b'\n')
        .filter(|line| !line.is_empty())
        .map(Box::from)
        .collect();
    Ok((records, stats))
}

/// Streaming reader over a record file: one item per line, terminator
/// stripped. The file is never loaded whole.
#[derive(Debug)]
pub struct RecordReader {
    path: PathBuf,
    lines: io::Lines<BufReader<File>>,
}

/// Opens a record file for streaming.
pub fn open_records(path: &Path) -> Result<RecordReader, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(RecordReader {
        path: path.to_path_buf(),
        lines: BufReader::new(file).lines(),
    })
}

impl Iterator for RecordReader {
    type Item = Result<String, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        let line = self.lines.next()?;
        Some(line.map_err(|source| CorpusError::Io {
            path: self.path.clone(),
            source,
        }))
    }
}
