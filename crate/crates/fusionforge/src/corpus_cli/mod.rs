//! File formats, the embedded corpus and the command line.

pub mod cli;
pub mod corpus;
pub mod frt;

pub use cli::{load_ring, main_entry, run, Cli};
pub use corpus::{active_corpus, corpus, load_corpus_dir, lookup, verify_checksums, ComputedFlags, CorpusEntry, ExpectedFlags};
pub use frt::{from_json, parse_fusion_ring, serialize_fusion_ring, to_json, FusionJson};
