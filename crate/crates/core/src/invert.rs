//! In-memory text inversion over the arena-backed postings lists.
//!
//! The inverter consumes a stream of records (one line of text each),
//! tokenizes them, and appends each record's ordinal to the postings list
//! of every term the record contains. Both list representations plug into
//! the same vocabulary, so builds differ only in the structure under test.
//!
//! Tokenization is deliberately primitive: maximal runs of ASCII
//! alphanumeric bytes, lowercased, truncated to [`MAX_TERM_BYTES`]. The
//! point is a fixed, cheap workload, not linguistic fidelity.
//!
//! After a build, [`traverse_index`] walks every postings list end to end,
//! folding an order-independent checksum. Two builds over the same stream
//! must produce the same checksum regardless of representation or hash-map
//! iteration order — a cheap whole-index equivalence check — and a list
//! that yields fewer postings than its recorded length is reported as
//! corruption by term.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::BuildHasherDefault;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::arena::{Arena, ArenaError, Unit};
use crate::fbb::FbbList;
use crate::sqa::SqArray;

/// Terms longer than this are truncated (in bytes).
pub const MAX_TERM_BYTES: usize = 15;

/// Which postings-list representation an index uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fbb,
    Sqa,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Fbb, Method::Sqa];

    /// Lowercase name as used on command lines.
    pub fn name(self) -> &'static str {
        match self {
            Method::Fbb => "fbb",
            Method::Sqa => "sqa",
        }
    }

    /// Uppercase label as used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Fbb => "FBB",
            Method::Sqa => "SQA",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fbb" => Ok(Method::Fbb),
            "sqa" => Ok(Method::Sqa),
            other => Err(format!("unknown method {other:?}, expected \"fbb\" or \"sqa\"")),
        }
    }
}

/// Calls `f` for every token of `record`: each maximal ASCII-alphanumeric
/// run, lowercased, truncated to [`MAX_TERM_BYTES`] bytes. Bytes beyond the
/// truncation point still belong to the same run and do not start a new
/// token.
pub fn for_each_token<F: FnMut(&[u8])>(record: &[u8], mut f: F) {
    let result: Result<(), std::convert::Infallible> = try_for_each_token(record, |t| {
        f(t);
        Ok(())
    });
    match result {
        Ok(()) => {}
        Err(never) => match never {},
    }
}

fn try_for_each_token<E, F>(record: &[u8], mut f: F) -> Result<(), E>
where
    F: FnMut(&[u8]) -> Result<(), E>,
{
    let mut buf = [0u8; MAX_TERM_BYTES];
    let mut len = 0usize;
    let mut in_token = false;
    for &b in record {
        if b.is_ascii_alphanumeric() {
            if len < MAX_TERM_BYTES {
                buf[len] = b.to_ascii_lowercase();
                len += 1;
            }
            in_token = true;
        } else if in_token {
            f(&buf[..len])?;
            len = 0;
            in_token = false;
        }
    }
    if in_token {
        f(&buf[..len])?;
    }
    Ok(())
}

/// Convenience wrapper over [`for_each_token`] that owns its output.
pub fn tokenize(record: &[u8]) -> Vec<String> {
    let mut out = Vec::new();
    for_each_token(record, |t| {
        out.push(String::from_utf8(t.to_vec()).expect("tokens are ASCII"))
    });
    out
}

/// One postings list of either representation.
#[derive(Debug, Clone)]
pub enum PostingsList<U: Unit> {
    Fbb(FbbList<U>),
    Sqa(SqArray<U>),
}

impl<U: Unit> PostingsList<U> {
    fn new(method: Method) -> Self {
        match method {
            Method::Fbb => PostingsList::Fbb(FbbList::new()),
            Method::Sqa => PostingsList::Sqa(SqArray::new()),
        }
    }

    fn append(&mut self, arena: &mut Arena<U>, posting: u64) -> Result<(), ArenaError> {
        match self {
            PostingsList::Fbb(list) => list.append(arena, posting),
            PostingsList::Sqa(list) => list.append(arena, posting),
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            PostingsList::Fbb(list) => list.len(),
            PostingsList::Sqa(list) => list.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Units this list occupies in the arena: payload capacity plus links
    /// or dope space (live and discarded).
    pub fn arena_units(&self) -> u64 {
        match self {
            PostingsList::Fbb(list) => {
                let s = list.stats();
                s.allocated_units + s.link_units
            }
            PostingsList::Sqa(list) => {
                let s = list.stats();
                s.allocated_units + s.dope_capacity + s.discarded_dope_units
            }
        }
    }
}

/// A term's slot in the vocabulary.
#[derive(Debug, Clone)]
pub struct VocabEntry<U: Unit> {
    /// Assigned at first occurrence, in stream order; folded into the
    /// traversal checksum so term identity is covered method-independently.
    pub ordinal: u64,
    pub list: PostingsList<U>,
}

// A fixed-key SipHash keeps vocabulary behavior identical across runs; the
// default randomized hasher would add run-to-run timing noise.
type VocabHasher = BuildHasherDefault<DefaultHasher>;

/// An inverted index: vocabulary plus the arena holding every list.
pub struct Index<U: Unit> {
    method: Method,
    vocab: HashMap<Box<[u8]>, VocabEntry<U>, VocabHasher>,
    arena: Arena<U>,
    records: u64,
    postings: u64,
}

impl<U: Unit> Index<U> {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn records(&self) -> u64 {
        self.records
    }

    pub fn postings_total(&self) -> u64 {
        self.postings
    }

    pub fn vocab_size(&self) -> u64 {
        self.vocab.len() as u64
    }

    pub fn arena(&self) -> &Arena<U> {
        &self.arena
    }

    pub fn entry(&self, term: &[u8]) -> Option<&VocabEntry<U>> {
        self.vocab.get(term)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[u8], &VocabEntry<U>)> {
        self.vocab.iter().map(|(k, v)| (k.as_ref(), v))
    }

    /// Collects one term's postings; for tests and spot checks, not bulk use.
    pub fn postings_of(&self, term: &[u8]) -> Option<Vec<u64>> {
        self.vocab.get(term).map(|entry| match &entry.list {
            PostingsList::Fbb(list) => list.iter(&self.arena).collect(),
            PostingsList::Sqa(list) => list.iter(&self.arena).collect(),
        })
    }

    /// Estimated heap footprint of the vocabulary map: table slots at the
    /// current capacity (key/value pair plus one control byte each) and the
    /// spelled-out keys. The estimate depends only on the insertion
    /// sequence, so equal streams give equal footprints whichever list
    /// representation is inside.
    pub fn vocab_bytes(&self) -> u64 {
        let slot = std::mem::size_of::<(Box<[u8]>, VocabEntry<U>)>() as u64 + 1;
        let table = self.vocab.capacity() as u64 * slot;
        let keys: u64 = self.vocab.keys().map(|k| k.len() as u64).sum();
        table + keys
    }

    /// Arena bytes plus vocabulary bytes.
    pub fn memory_bytes(&self) -> u64 {
        self.arena.total_bytes() + self.vocab_bytes()
    }
}

/// Figures reported for one build, shaped like one row of the report table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildStats {
    pub records: u64,
    pub vocab_size: u64,
    pub postings: u64,
    pub build_seconds: f64,
    pub traversal_seconds: f64,
    pub total_memory_bytes: u64,
    /// Postings per second over build plus traversal time, in millions.
    pub indexing_rate_millions_per_sec: f64,
}

impl BuildStats {
    /// Returns the stats with traversal time filled in and the rate
    /// recomputed over build + traversal.
    pub fn with_traversal(mut self, seconds: f64) -> Self {
        self.traversal_seconds = seconds;
        self.indexing_rate_millions_per_sec =
            rate_millions(self.postings, self.build_seconds + seconds);
        self
    }
}

fn rate_millions(postings: u64, seconds: f64) -> f64 {
    if postings == 0 || seconds <= 0.0 {
        0.0
    } else {
        postings as f64 / seconds / 1e6
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    /// The arena could not be configured at all.
    #[error(transparent)]
    Arena(ArenaError),
    /// The arena filled up mid-build; the counts say how far the build got.
    #[error("arena capacity exhausted after {records_indexed} records and {postings_indexed} postings: {source}")]
    Capacity {
        records_indexed: u64,
        postings_indexed: u64,
        #[source]
        source: ArenaError,
    },
    /// A record ordinal no longer fits in a memory unit, so it cannot be
    /// stored as a posting.
    #[error("record ordinal {ordinal} does not fit in a {unit_bytes}-byte unit")]
    OrdinalOverflow { ordinal: u64, unit_bytes: u64 },
}

/// Builds an index over `records` with a fresh arena of the given block
/// size. `build_seconds` covers the record loop only.
pub fn build_index<U: Unit, R: AsRef<[u8]>>(
    records: &[R],
    method: Method,
    block_bytes: u64,
) -> Result<(Index<U>, BuildStats), BuildError> {
    let arena = Arena::new(block_bytes).map_err(BuildError::Arena)?;
    build_index_in(records, method, arena)
}

/// Builds an index into a caller-supplied arena (used to test capacity
/// exhaustion with small address-space caps).
pub fn build_index_in<U: Unit, R: AsRef<[u8]>>(
    records: &[R],
    method: Method,
    mut arena: Arena<U>,
) -> Result<(Index<U>, BuildStats), BuildError> {
    let mut vocab: HashMap<Box<[u8]>, VocabEntry<U>, VocabHasher> = HashMap::default();
    let mut postings = 0u64;
    let mut records_done = 0u64;

    let started = Instant::now();
    for (ordinal, record) in records.iter().enumerate() {
        let ordinal = ordinal as u64;
        // One range check per record covers every posting it contributes.
        if U::checked_from_u64(ordinal).is_none() {
            return Err(BuildError::OrdinalOverflow { ordinal, unit_bytes: U::BYTES });
        }
        try_for_each_token(record.as_ref(), |term| {
            match vocab.get_mut(term) {
                Some(entry) => entry.list.append(&mut arena, ordinal)?,
                None => {
                    let mut list = PostingsList::new(method);
                    list.append(&mut arena, ordinal)?;
                    let entry = VocabEntry { ordinal: vocab.len() as u64, list };
                    vocab.insert(term.to_vec().into_boxed_slice(), entry);
                }
            }
            postings += 1;
            Ok(())
        })
        .map_err(|source| BuildError::Capacity {
            records_indexed: records_done,
            postings_indexed: postings,
            source,
        })?;
        records_done += 1;
    }
    let build_seconds = started.elapsed().as_secs_f64();

    let index = Index { method, vocab, arena, records: records_done, postings };
    let stats = BuildStats {
        records: records_done,
        vocab_size: index.vocab_size(),
        postings,
        build_seconds,
        traversal_seconds: 0.0,
        total_memory_bytes: index.memory_bytes(),
        indexing_rate_millions_per_sec: rate_millions(postings, build_seconds),
    };
    Ok((index, stats))
}

/// Result of walking every postings list end to end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Traversal {
    /// Wrapping sum of `posting + term ordinal` over all postings; invariant
    /// under vocabulary iteration order and list representation.
    pub checksum: u64,
    pub seconds: f64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraverseError {
    #[error("postings list for term {term:?} yielded {observed} postings, expected {expected}")]
    LengthMismatch { term: String, expected: u64, observed: u64 },
}

/// Reads back every list, checking each yields exactly as many postings as
/// its recorded length.
pub fn traverse_index<U: Unit>(index: &Index<U>) -> Result<Traversal, TraverseError> {
    let started = Instant::now();
    let mut checksum = 0u64;
    for (term, entry) in &index.vocab {
        let mut observed = 0u64;
        let mut fold = |posting: u64| {
            checksum = checksum.wrapping_add(posting.wrapping_add(entry.ordinal));
            observed += 1;
        };
        match &entry.list {
            PostingsList::Fbb(list) => list.iter(&index.arena).for_each(&mut fold),
            PostingsList::Sqa(list) => list.iter(&index.arena).for_each(&mut fold),
        }
        if observed != entry.list.len() {
            return Err(TraverseError::LengthMismatch {
                term: String::from_utf8_lossy(term).into_owned(),
                expected: entry.list.len(),
                observed,
            });
        }
    }
    Ok(Traversal { checksum, seconds: started.elapsed().as_secs_f64() })
}

/// Column headings of the report table.
pub const REPORT_COLUMNS: [&str; 9] = [
    "Corpus",
    "Method",
    "Records(M)",
    "|V|(M)",
    "Postings(M)",
    "Build(s)",
    "Traversal(s)",
    "TotalMemory(MB)",
    "Rate(M/s)",
];

/// Formats `x` to three significant figures (integers above 1000 keep all
/// their digits).
pub fn sig3(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if a >= 100.0 {
        return format!("{x:.0}");
    }
    if a >= 10.0 {
        return format!("{x:.1}");
    }
    if a >= 1.0 {
        return format!("{x:.2}");
    }
    let mut decimals = 3usize;
    let mut bound = 0.1f64;
    while a < bound && decimals < 12 {
        decimals += 1;
        bound /= 10.0;
    }
    format!("{x:.decimals$}")
}

const MB: f64 = (1u64 << 20) as f64;

/// One report row as cells, in [`REPORT_COLUMNS`] order. Counts are scaled
/// to millions and memory to MiB, all to three significant figures.
pub fn report_cells(corpus: &str, method: Method, stats: &BuildStats) -> [String; 9] {
    [
        corpus.to_string(),
        method.label().to_string(),
        sig3(stats.records as f64 / 1e6),
        sig3(stats.vocab_size as f64 / 1e6),
        sig3(stats.postings as f64 / 1e6),
        sig3(stats.build_seconds),
        sig3(stats.traversal_seconds),
        sig3(stats.total_memory_bytes as f64 / MB),
        sig3(stats.indexing_rate_millions_per_sec),
    ]
}

/// Tab-separated report row.
pub fn report_row(corpus: &str, method: Method, stats: &BuildStats) -> String {
    report_cells(corpus, method, stats).join("\t")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_xoshiro::rand_core::{RngCore, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    const BLOCK: u64 = 64 * 1024 * 1024;

    fn build32(records: &[&str], method: Method) -> (Index<u32>, BuildStats) {
        build_index(records, method, BLOCK).unwrap()
    }

    #[test]
    fn tokenize_lowercases_and_splits_on_non_alphanumerics() {
        assert_eq!(tokenize(b"Hello, World!"), ["hello", "world"]);
        assert_eq!(tokenize(b"ABC123-abc123"), ["abc123", "abc123"]);
        assert_eq!(tokenize(b"  a\tb  "), ["a", "b"]);
        assert_eq!(tokenize(b""), Vec::<String>::new());
        assert_eq!(tokenize(b"..!!.."), Vec::<String>::new());
    }

    #[test]
    fn tokenize_truncates_long_runs_without_splitting_them() {
        assert_eq!(tokenize(b"supercalifragilisticexpialidocious"), ["supercalifragil"]);
        // The truncated remainder must not surface as a second token.
        assert_eq!(tokenize(b"abcdefghijklmnopqrstuvwxyz end"), ["abcdefghijklmno", "end"]);
        assert_eq!(tokenize("caf\u{e9} bar".as_bytes()), ["caf", "bar"]);
    }

    #[test]
    fn tiny_corpus_inverts_correctly() {
        for method in Method::ALL {
            let (index, stats) = build32(&["a b", "b c"], method);
            assert_eq!(index.vocab_size(), 3);
            assert_eq!(index.postings_total(), 4);
            assert_eq!(index.records(), 2);
            assert_eq!(index.postings_of(b"a"), Some(vec![0]));
            assert_eq!(index.postings_of(b"b"), Some(vec![0, 1]));
            assert_eq!(index.postings_of(b"c"), Some(vec![1]));
            assert_eq!(index.postings_of(b"d"), None);
            assert_eq!(stats.records, 2);
            assert_eq!(stats.vocab_size, 3);
            assert_eq!(stats.postings, 4);
        }
    }

    #[test]
    fn ordinals_follow_first_occurrence_order() {
        let (index, _) = build32(&["b a", "a c"], Method::Fbb);
        assert_eq!(index.entry(b"b").unwrap().ordinal, 0);
        assert_eq!(index.entry(b"a").unwrap().ordinal, 1);
        assert_eq!(index.entry(b"c").unwrap().ordinal, 2);
    }

    #[test]
    fn checksum_is_method_independent_and_hand_checkable() {
        // Postings: a -> [0, 1], b -> [0, 1]; ordinals a=0, b=1.
        // Sum of (posting + ordinal) = (0+0)+(1+0) + (0+1)+(1+1) = 4.
        for method in Method::ALL {
            let (index, _) = build32(&["a b", "b a"], method);
            let traversal = traverse_index(&index).unwrap();
            assert_eq!(traversal.checksum, 4, "{method}");
        }
    }

    #[test]
    fn empty_stream_builds_an_empty_index() {
        let (index, stats) = build_index::<u32, &str>(&[], Method::Fbb, BLOCK).unwrap();
        assert_eq!(index.vocab_size(), 0);
        assert_eq!(stats.postings, 0);
        assert_eq!(stats.indexing_rate_millions_per_sec, 0.0);
        assert_eq!(traverse_index(&index).unwrap().checksum, 0);
    }

    #[test]
    fn tokenless_records_still_count_as_records() {
        let (index, stats) = build32(&["...", "a", "!!"], Method::Sqa);
        assert_eq!(stats.records, 3);
        assert_eq!(index.postings_total(), 1);
        // "a" lives in the second record, ordinal 1.
        assert_eq!(index.postings_of(b"a"), Some(vec![1]));
    }

    /// Reference inversion with plain vectors, for cross-checking.
    fn reference(records: &[String]) -> HashMap<String, Vec<u64>> {
        let mut map: HashMap<String, Vec<u64>> = HashMap::new();
        for (d, record) in records.iter().enumerate() {
            for term in tokenize(record.as_bytes()) {
                map.entry(term).or_default().push(d as u64);
            }
        }
        map
    }

    #[test]
    fn agrees_with_reference_inversion_on_random_streams() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(7);
        let mut records = Vec::new();
        for _ in 0..2000 {
            let len = 1 + (rng.next_u64() % 6);
            let terms: Vec<String> =
                (0..len).map(|_| format!("w{}", rng.next_u64() % 50)).collect();
            records.push(terms.join(" "));
        }
        let expect = reference(&records);
        for method in Method::ALL {
            let (index, _) = build_index::<u32, String>(&records, method, BLOCK).unwrap();
            assert_eq!(index.vocab_size() as usize, expect.len());
            for (term, postings) in &expect {
                assert_eq!(
                    index.postings_of(term.as_bytes()).as_ref(),
                    Some(postings),
                    "term {term} under {method}"
                );
            }
            let total: u64 = expect.values().map(|v| v.len() as u64).sum();
            assert_eq!(index.postings_total(), total);
        }
    }

    #[test]
    fn checksums_match_across_methods_on_random_streams() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(11);
        let records: Vec<String> = (0..3000)
            .map(|_| {
                let len = 1 + (rng.next_u64() % 8);
                (0..len)
                    .map(|_| format!("term{}", rng.next_u64() % 200))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let (fbb, _) = build_index::<u32, String>(&records, Method::Fbb, BLOCK).unwrap();
        let (sqa, _) = build_index::<u32, String>(&records, Method::Sqa, BLOCK).unwrap();
        assert_eq!(
            traverse_index(&fbb).unwrap().checksum,
            traverse_index(&sqa).unwrap().checksum
        );
    }

    #[test]
    fn per_list_units_sum_to_arena_usage() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(13);
        let records: Vec<String> = (0..500)
            .map(|_| {
                let len = 1 + (rng.next_u64() % 10);
                (0..len)
                    .map(|_| format!("x{}", rng.next_u64() % 40))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        for method in Method::ALL {
            let (index, _) = build_index::<u32, String>(&records, method, BLOCK).unwrap();
            let summed: u64 = index.entries().map(|(_, e)| e.list.arena_units()).sum();
            assert_eq!(summed, index.arena().stats().used_units, "{method}");
        }
    }

    #[test]
    fn capacity_exhaustion_reports_partial_progress() {
        let records = vec!["alpha beta"; 50];
        let arena = Arena::<u32>::with_unit_limit(64, 40).unwrap();
        let err = match build_index_in(&records, Method::Fbb, arena) {
            Ok(_) => panic!("expected the capped arena to overflow"),
            Err(err) => err,
        };
        match err {
            BuildError::Capacity { records_indexed, postings_indexed, source } => {
                assert!(records_indexed > 0, "some records should have fit");
                assert!(records_indexed < 50);
                assert!(postings_indexed >= records_indexed);
                assert!(matches!(source, ArenaError::Capacity { .. }));
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn traversal_reports_corrupted_list_lengths() {
        let (mut index, _) = build32(&["a b", "b a", "c"], Method::Fbb);
        match &mut index.vocab.get_mut(b"b".as_slice()).unwrap().list {
            PostingsList::Fbb(list) => list.corrupt_count_for_tests(5000),
            PostingsList::Sqa(_) => unreachable!(),
        }
        let err = traverse_index(&index).unwrap_err();
        assert_eq!(
            err,
            TraverseError::LengthMismatch { term: "b".into(), expected: 5000, observed: 2 }
        );

        let (mut index, _) = build32(&["a b", "b a", "c"], Method::Sqa);
        match &mut index.vocab.get_mut(b"b".as_slice()).unwrap().list {
            PostingsList::Sqa(list) => list.corrupt_count_for_tests(5000),
            PostingsList::Fbb(_) => unreachable!(),
        }
        let err = traverse_index(&index).unwrap_err();
        assert!(matches!(err, TraverseError::LengthMismatch { ref term, .. } if term == "b"));
    }

    #[test]
    fn vocab_footprint_is_method_independent() {
        let records: Vec<String> = (0..300).map(|i| format!("t{} shared", i)).collect();
        let (fbb, _) = build_index::<u32, String>(&records, Method::Fbb, BLOCK).unwrap();
        let (sqa, _) = build_index::<u32, String>(&records, Method::Sqa, BLOCK).unwrap();
        assert_eq!(fbb.vocab_bytes(), sqa.vocab_bytes());
        assert!(fbb.vocab_bytes() > 0);
    }

    #[test]
    fn rate_covers_build_plus_traversal() {
        let stats = BuildStats {
            records: 0,
            vocab_size: 0,
            postings: 10_000_000_000,
            build_seconds: 1373.0,
            traversal_seconds: 0.0,
            total_memory_bytes: 0,
            indexing_rate_millions_per_sec: 0.0,
        }
        .with_traversal(93.5);
        assert_eq!(sig3(stats.indexing_rate_millions_per_sec), "6.82");
        assert_eq!(stats.traversal_seconds, 93.5);

        let empty = BuildStats {
            records: 0,
            vocab_size: 0,
            postings: 0,
            build_seconds: 0.0,
            traversal_seconds: 0.0,
            total_memory_bytes: 0,
            indexing_rate_millions_per_sec: 0.0,
        }
        .with_traversal(0.0);
        assert_eq!(empty.indexing_rate_millions_per_sec, 0.0);
    }

    #[test]
    fn sig3_spot_values() {
        let cases = [
            (0.0, "0"),
            (11.144285, "11.1"),
            (2.269892, "2.27"),
            (32.764983, "32.8"),
            (205.0, "205"),
            (1373.0, "1373"),
            (58892.0, "58892"),
            (5.8854, "5.89"),
            (9.99, "9.99"),
            (0.887, "0.887"),
            (0.0573, "0.0573"),
            (0.57, "0.570"),
        ];
        for (x, expect) in cases {
            assert_eq!(sig3(x), expect, "sig3({x})");
        }
    }

    #[test]
    fn report_row_matches_table_shape() {
        let stats = BuildStats {
            records: 11_144_285,
            vocab_size: 2_269_892,
            postings: 32_764_983,
            build_seconds: 4.68,
            traversal_seconds: 0.0,
            total_memory_bytes: 205 * (1 << 20),
            indexing_rate_millions_per_sec: 0.0,
        }
        .with_traversal(0.887);
        let cells = report_cells("WIKT", Method::Fbb, &stats);
        assert_eq!(cells[0], "WIKT");
        assert_eq!(cells[1], "FBB");
        assert_eq!(cells[2], "11.1");
        assert_eq!(cells[3], "2.27");
        assert_eq!(cells[4], "32.8");
        assert_eq!(cells[5], "4.68");
        assert_eq!(cells[6], "0.887");
        assert_eq!(cells[7], "205");
        assert_eq!(cells[8], "5.89");
        let row = report_row("WIKT", Method::Fbb, &stats);
        assert_eq!(row.split('\t').count(), REPORT_COLUMNS.len());
    }

    #[test]
    fn method_parsing_roundtrip() {
        assert_eq!("fbb".parse::<Method>().unwrap(), Method::Fbb);
        assert_eq!("sqa".parse::<Method>().unwrap(), Method::Sqa);
        assert!("FBB".parse::<Method>().is_err());
        assert!("".parse::<Method>().is_err());
        for method in Method::ALL {
            assert_eq!(method.name().parse::<Method>().unwrap(), method);
        }
    }
}
