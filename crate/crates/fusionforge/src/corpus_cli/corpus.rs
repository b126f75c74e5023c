//! The embedded corpus: fusion rings with known classification flags, plus
//! generated cyclic group rings.
//!
//! Ring files (canonical FRT v1), `manifest.json` (ids, notes, expected flags)
//! and `SHA256SUMS` are compiled into the binary. Setting
//! `FUSIONFORGE_CORPUS_DIR` to a directory with the same layout replaces the
//! embedded files at run time (see [`active_corpus`]).

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::frt::parse_fusion_ring;
use crate::criteria::{default_tolerance, schur_commutative};
use crate::error::{Error, Result};
use crate::ring_core::{
    cyclic_group_ring, global_fpdim, is_frobenius_type, is_simple, type_signature, FusionData, RingType, INTEGER_TOL,
};
use crate::spectral::{character_table, RESIDUAL_TOL};

/// Environment variable naming an external corpus directory.
pub const CORPUS_DIR_ENV: &str = "FUSIONFORGE_CORPUS_DIR";

/// Largest generated cyclic group ring `ℤ/n`.
pub const MAX_CYCLIC: usize = 12;

const MANIFEST: &str = include_str!("../../corpus/manifest.json");
const CHECKSUMS: &str = include_str!("../../corpus/SHA256SUMS");
const FILES: &[(&str, &str)] = &[
    ("psl25.frt", include_str!("../../corpus/psl25.frt")),
    ("psl27.frt", include_str!("../../corpus/psl27.frt")),
    ("r7-210-ruledout.frt", include_str!("../../corpus/r7-210-ruledout.frt")),
    ("f210.frt", include_str!("../../corpus/f210.frt")),
    ("r7-360-a.frt", include_str!("../../corpus/r7-360-a.frt")),
    ("psl29.frt", include_str!("../../corpus/psl29.frt")),
    ("r7-7980-a.frt", include_str!("../../corpus/r7-7980-a.frt")),
    ("r7-7980-b.frt", include_str!("../../corpus/r7-7980-b.frt")),
    ("r7-7980-c.frt", include_str!("../../corpus/r7-7980-c.frt")),
    ("r7-7980-d.frt", include_str!("../../corpus/r7-7980-d.frt")),
    ("r8-660-01.frt", include_str!("../../corpus/r8-660-01.frt")),
    ("r8-660-02.frt", include_str!("../../corpus/r8-660-02.frt")),
    ("r8-660-03.frt", include_str!("../../corpus/r8-660-03.frt")),
    ("r8-660-04.frt", include_str!("../../corpus/r8-660-04.frt")),
    ("r8-660-05.frt", include_str!("../../corpus/r8-660-05.frt")),
    ("r8-660-06.frt", include_str!("../../corpus/r8-660-06.frt")),
    ("r8-660-07.frt", include_str!("../../corpus/r8-660-07.frt")),
    ("r8-660-08.frt", include_str!("../../corpus/r8-660-08.frt")),
    ("r8-660-09.frt", include_str!("../../corpus/r8-660-09.frt")),
    ("r8-660-10.frt", include_str!("../../corpus/r8-660-10.frt")),
    ("r8-660-11.frt", include_str!("../../corpus/r8-660-11.frt")),
    ("r8-660-12.frt", include_str!("../../corpus/r8-660-12.frt")),
    ("r8-660-13.frt", include_str!("../../corpus/r8-660-13.frt")),
    ("psl211.frt", include_str!("../../corpus/psl211.frt")),
    ("f660.frt", include_str!("../../corpus/f660.frt")),
    ("r8-990-a.frt", include_str!("../../corpus/r8-990-a.frt")),
    ("r8-990-b.frt", include_str!("../../corpus/r8-990-b.frt")),
    ("r8-990-c.frt", include_str!("../../corpus/r8-990-c.frt")),
    ("r8-990-d.frt", include_str!("../../corpus/r8-990-d.frt")),
    ("r8-990-e.frt", include_str!("../../corpus/r8-990-e.frt")),
    ("r8-1260-a.frt", include_str!("../../corpus/r8-1260-a.frt")),
    ("r8-1260-b.frt", include_str!("../../corpus/r8-1260-b.frt")),
    ("r8-1320-a.frt", include_str!("../../corpus/r8-1320-a.frt")),
    ("r8-1320-b.frt", include_str!("../../corpus/r8-1320-b.frt")),
    ("r6-143-nonfrobenius.frt", include_str!("../../corpus/r6-143-nonfrobenius.frt")),
    ("r6-924-nonfrobenius.frt", include_str!("../../corpus/r6-924-nonfrobenius.frt")),
    ("r6-1320-nonfrobenius.frt", include_str!("../../corpus/r6-1320-nonfrobenius.frt")),
    ("r7-560-nonfrobenius.frt", include_str!("../../corpus/r7-560-nonfrobenius.frt")),
    ("r7-798-nonfrobenius.frt", include_str!("../../corpus/r7-798-nonfrobenius.frt")),
    ("r5-sa3-a.frt", include_str!("../../corpus/r5-sa3-a.frt")),
    ("r5-sa3-b.frt", include_str!("../../corpus/r5-sa3-b.frt")),
    ("r5-sa3-b-displayed.frt", include_str!("../../corpus/r5-sa3-b-displayed.frt")),
];

/// Flags recorded for a corpus ring. `None` means "not asserted".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedFlags {
    /// Type string `[[n_i, m_i], …]`; `None` for non-integral rings.
    #[serde(rename = "type")]
    pub ring_type: Option<String>,
    /// No proper fusion subring.
    pub simple: bool,
    /// Every dimension divides the FP dimension (`None` when not integral).
    pub frobenius_type: Option<bool>,
    /// Outcome of the commutative Schur criterion.
    pub schur: Option<bool>,
    /// Group whose representation ring this is, if any.
    pub group: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct ManifestEntry {
    id: String,
    #[serde(flatten)]
    flags: ExpectedFlags,
    note: String,
    file: String,
}

/// One corpus ring.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusEntry {
    /// Identifier, e.g. `psl25` or `z7`.
    pub id: String,
    /// The ring (labelled with `id`).
    #[serde(skip)]
    pub ring: FusionData,
    /// Free-form description.
    pub note: String,
    /// Expected flags.
    pub expected: ExpectedFlags,
}

/// Flags computed from the ring itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComputedFlags {
    /// Type string, or `None` when not integral.
    pub ring_type: Option<String>,
    /// No proper fusion subring.
    pub simple: bool,
    /// Frobenius type (integral rings only).
    pub frobenius_type: Option<bool>,
    /// Commutative Schur criterion (commutative rings only).
    pub schur: Option<bool>,
    /// Worst triple sum.
    pub schur_worst: Option<f64>,
}

impl CorpusEntry {
    /// Computes the flags of the ring.
    pub fn computed_flags(&self) -> Result<ComputedFlags> {
        let fd = &self.ring;
        let ring_type = match type_signature(fd, INTEGER_TOL)? {
            RingType::Integral(t) => Some(t.to_string()),
            RingType::NonIntegral { .. } => None,
        };
        let frobenius_type = if ring_type.is_some() { Some(is_frobenius_type(fd)?) } else { None };
        let (schur, schur_worst) = if fd.is_commutative() {
            let ct = character_table(fd, RESIDUAL_TOL)?;
            let r = schur_commutative(&ct, default_tolerance(global_fpdim(fd)?));
            (Some(r.holds), Some(r.worst_value))
        } else {
            (None, None)
        };
        Ok(ComputedFlags { ring_type, simple: is_simple(fd), frobenius_type, schur, schur_worst })
    }

    /// Differences between expected and computed flags (empty when they agree).
    pub fn mismatches(&self) -> Result<Vec<String>> {
        let c = self.computed_flags()?;
        let e = &self.expected;
        let mut out = Vec::new();
        if e.ring_type != c.ring_type {
            out.push(format!("type: expected {:?}, computed {:?}", e.ring_type, c.ring_type));
        }
        if e.simple != c.simple {
            out.push(format!("simple: expected {}, computed {}", e.simple, c.simple));
        }
        if e.frobenius_type != c.frobenius_type {
            out.push(format!("frobenius_type: expected {:?}, computed {:?}", e.frobenius_type, c.frobenius_type));
        }
        if e.schur.is_some() && e.schur != c.schur {
            out.push(format!("schur: expected {:?}, computed {:?} (worst {:?})", e.schur, c.schur, c.schur_worst));
        }
        Ok(out)
    }
}

fn build_entries(manifest: &str, read: impl Fn(&str) -> Result<String>) -> Result<Vec<CorpusEntry>> {
    let entries: Vec<ManifestEntry> = serde_json::from_str(manifest)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: format!("manifest: {e}") })?;
    let mut out = Vec::with_capacity(entries.len() + MAX_CYCLIC);
    for e in entries {
        let text = read(&e.file)?;
        let ring = parse_fusion_ring(&text)
            .map_err(|err| Error::NotFound(format!("{} ({}): {err}", e.id, e.file)))?
            .with_label(e.id.clone());
        out.push(CorpusEntry { id: e.id, ring, note: e.note, expected: e.flags });
    }
    out.extend(cyclic_entries());
    Ok(out)
}

fn cyclic_entries() -> impl Iterator<Item = CorpusEntry> {
    (1..=MAX_CYCLIC).map(|n| {
        let prime = n > 1 && (2..n).take_while(|p| p * p <= n).all(|p| n % p != 0);
        CorpusEntry {
            id: format!("z{n}"),
            ring: cyclic_group_ring(n),
            note: format!("group ring of the cyclic group of order {n}"),
            expected: ExpectedFlags {
                ring_type: Some(format!("[[1,{n}]]")),
                simple: n == 1 || prime,
                frobenius_type: Some(true),
                schur: Some(true),
                group: Some(format!("Z/{n}")),
            },
        }
    })
}

/// The embedded corpus followed by `ℤ/n` for `1 ≤ n ≤ 12`.
pub fn corpus() -> Vec<CorpusEntry> {
    static CACHE: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            build_entries(MANIFEST, |file| {
                FILES
                    .iter()
                    .find(|(name, _)| *name == file)
                    .map(|(_, text)| text.to_string())
                    .ok_or_else(|| Error::NotFound(file.to_string()))
            })
            .expect("embedded corpus is valid")
        })
        .clone()
}

/// Loads a corpus directory (`manifest.json` plus the ring files it names).
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let read = |name: &str| {
        std::fs::read_to_string(dir.join(name)).map_err(|e| Error::NotFound(format!("{}: {e}", dir.join(name).display())))
    };
    let manifest = read("manifest.json")?;
    build_entries(&manifest, read)
}

/// The corpus named by `FUSIONFORGE_CORPUS_DIR` if set, else the embedded one.
pub fn active_corpus() -> Result<Vec<CorpusEntry>> {
    match std::env::var_os(CORPUS_DIR_ENV) {
        Some(dir) => load_corpus_dir(Path::new(&dir)),
        None => Ok(corpus()),
    }
}

/// Looks up an entry of the active corpus by id.
pub fn lookup(id: &str) -> Result<CorpusEntry> {
    active_corpus()?.into_iter().find(|e| e.id == id).ok_or_else(|| Error::NotFound(format!("corpus id `{id}`")))
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Checks every embedded ring file against the embedded `SHA256SUMS`.
pub fn verify_checksums() -> Result<()> {
    let mut seen = 0;
    for line in CHECKSUMS.lines().filter(|l| !l.trim().is_empty()) {
        let mut parts = line.split_whitespace();
        let (Some(hash), Some(name)) = (parts.next(), parts.next()) else {
            return Err(Error::Parse { line: seen + 1, column: 1, message: "malformed checksum line".into() });
        };
        let text = FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).ok_or_else(|| Error::NotFound(name.into()))?;
        if sha256_hex(text) != hash {
            return Err(Error::NotFound(format!("checksum mismatch for {name}")));
        }
        seen += 1;
    }
    if seen != FILES.len() {
        return Err(Error::NotFound(format!("{} files, {seen} checksums", FILES.len())));
    }
    Ok(())
}
