//! Cross-module flow through the public API: generate a corpus, round-trip
//! it through a file, invert it with both list representations, and check
//! the analytic layout formulas against what the index actually allocated.

use postings_core::corpus::{self, SynthConfig};
use postings_core::invert::{build_index, traverse_index, Method, PostingsList};
use postings_core::model;

fn small_config() -> SynthConfig {
    SynthConfig {
        target_postings: 20_000,
        vocab_size: 2_000,
        seed: 9,
        ..SynthConfig::default()
    }
}

#[test]
fn file_roundtrip_matches_in_memory_generation() {
    let config = small_config();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.txt");

    let mut file = std::fs::File::create(&path).unwrap();
    let written_stats = corpus::generate(&config, &mut file).unwrap();
    drop(file);

    let from_file: Vec<String> = corpus::open_records(&path)
        .unwrap()
        .map(|r| r.unwrap())
        .collect();
    let (in_memory, stats) = corpus::generate_records(&config).unwrap();

    assert_eq!(stats, written_stats);
    assert_eq!(from_file.len(), in_memory.len());
    assert!(from_file.iter().map(|r| r.as_bytes()).eq(in_memory.iter().map(|r| &r[..])));
}

#[test]
fn both_representations_agree_and_match_layout_formulas() {
    let (records, gen) = corpus::generate_records(&small_config()).unwrap();

    let (fbb, fbb_stats) = build_index::<u32, _>(&records, Method::Fbb, 1 << 20).unwrap();
    let (sqa, sqa_stats) = build_index::<u64, _>(&records, Method::Sqa, 1 << 20).unwrap();

    assert_eq!(fbb_stats.postings, gen.postings);
    assert_eq!(sqa_stats.postings, gen.postings);
    assert_eq!(fbb.vocab_size(), gen.distinct_terms);
    assert_eq!(sqa.vocab_size(), gen.distinct_terms);
    assert_eq!(
        traverse_index(&fbb).unwrap().checksum,
        traverse_index(&sqa).unwrap().checksum,
        "checksum must not depend on representation or unit width"
    );

    // The rank-0 term is the most frequent one; its list is the longest.
    // Whatever its length, the layout formulas must predict exactly the
    // units the live list occupies.
    let entry = fbb.entry(b"t0").expect("t0 indexed");
    assert!(matches!(entry.list, PostingsList::Fbb(_)));
    let layout = model::fbb_layout(entry.list.len());
    assert_eq!(entry.list.arena_units(), layout.allocated_units + layout.link_units);

    let entry = sqa.entry(b"t0").expect("t0 indexed");
    assert!(matches!(entry.list, PostingsList::Sqa(_)));
    let layout = model::sqa_layout(entry.list.len());
    assert_eq!(
        entry.list.arena_units(),
        layout.allocated_units + layout.dope_capacity + layout.discarded_dope_units
    );
}

#[test]
fn postings_are_record_ordinals_in_order() {
    let (records, _) = corpus::generate_records(&small_config()).unwrap();
    let (index, _) = build_index::<u32, _>(&records, Method::Sqa, 1 << 20).unwrap();

    let mut seen = 0u64;
    for (term, entry) in index.entries() {
        let postings = index.postings_of(term).unwrap();
        assert_eq!(postings.len() as u64, entry.list.len());
        assert!(
            postings.windows(2).all(|w| w[0] <= w[1]),
            "postings of {term:?} must be appended in record order"
        );
        assert!(postings.iter().all(|&p| p < index.records()));
        seen += postings.len() as u64;
    }
    assert_eq!(seen, index.postings_total());
}
