//! The FRT v1 text format and its JSON mirror.
//!
//! ```text
//! frt 1
//! rank m
//! dual p1 p2 … pm        (1-based involution)
//! matrix 1
//! <m lines of m entries> (entry (k, s) of matrix i is N_{i,k}^s)
//! …
//! matrix m
//! …
//! ```
//!
//! Entries are nonnegative integers, or decimals for fusion algebras (any
//! entry containing `.`, `e` or `E` switches the whole file to real mode).
//! `#` starts a comment; blank lines are ignored. The canonical form written
//! by [`serialize_fusion_ring`] has no comments, so `serialize ∘ parse` is the
//! identity on canonical text.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring_core::{FusionData, Mode, Tensor};

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// A significant line: 1-based line number and `(column, token)` pairs.
struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((body[..s].chars().count() + 1, &body[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens });
        }
    }
    out
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, expect: &str) -> Result<&Line<'a>> {
        let line = self.lines.get(self.pos).ok_or_else(|| perr(self.last_line + 1, 1, format!("unexpected end of input, expected {expect}")))?;
        self.pos += 1;
        Ok(line)
    }

    /// A `keyword value…` line; returns the value tokens.
    fn keyword(&mut self, keyword: &str, count: Option<usize>) -> Result<(usize, Vec<(usize, &'a str)>)> {
        let line = self.next(&format!("`{keyword}`"))?;
        let (col, word) = line.tokens[0];
        if word != keyword {
            return Err(perr(line.number, col, format!("expected `{keyword}`, found `{word}`")));
        }
        let values = line.tokens[1..].to_vec();
        if let Some(n) = count {
            if values.len() != n {
                let col = values.get(n).map_or(col + word.len() + 1, |t| t.0);
                return Err(perr(line.number, col, format!("`{keyword}` needs {n} value(s), found {}", values.len())));
            }
        }
        Ok((line.number, values))
    }
}

fn parse_usize(line: usize, (col, tok): (usize, &str)) -> Result<usize> {
    tok.parse().map_err(|_| perr(line, col, format!("expected a positive integer, found `{tok}`")))
}

/// Parses FRT v1 text. Structural problems are [`Error::Parse`] with the
/// offending line/column; axiom failures are reported by [`FusionData::new`].
pub fn parse_fusion_ring(text: &str) -> Result<FusionData> {
    let lines = tokenize(text);
    let last_line = text.lines().count();
    let mut cur = Cursor { lines, pos: 0, last_line };

    let (ln, v) = cur.keyword("frt", Some(1))?;
    if v[0].1 != "1" {
        return Err(perr(ln, v[0].0, format!("unsupported format version `{}`", v[0].1)));
    }
    let (ln, v) = cur.keyword("rank", Some(1))?;
    let m = parse_usize(ln, v[0])?;
    if m == 0 {
        return Err(perr(ln, v[0].0, "rank must be positive"));
    }
    let (dual_line, v) = cur.keyword("dual", Some(m))?;
    let mut dual = Vec::with_capacity(m);
    for t in &v {
        let p = parse_usize(dual_line, *t)?;
        if p == 0 || p > m {
            return Err(perr(dual_line, t.0, format!("dual index {p} out of range 1..={m}")));
        }
        dual.push(p - 1);
    }

    let mut real = false;
    let mut matrices = Vec::with_capacity(m);
    for i in 1..=m {
        let (ln, v) = cur.keyword("matrix", Some(1))?;
        if parse_usize(ln, v[0])? != i {
            return Err(perr(ln, v[0].0, format!("expected `matrix {i}`")));
        }
        let mut mat = Vec::with_capacity(m);
        for _ in 0..m {
            let line = cur.next(&format!("a row of matrix {i}"))?;
            if line.tokens.len() != m {
                let col = line.tokens.get(m).map_or(line.tokens.last().map_or(1, |t| t.0), |t| t.0);
                return Err(perr(line.number, col, format!("expected {m} entries, found {}", line.tokens.len())));
            }
            let mut row = Vec::with_capacity(m);
            for &(col, tok) in &line.tokens {
                let value: f64 =
                    tok.parse().map_err(|_| perr(line.number, col, format!("expected a number, found `{tok}`")))?;
                if !value.is_finite() || value < 0.0 {
                    return Err(perr(line.number, col, format!("entry `{tok}` is not a nonnegative number")));
                }
                real |= tok.contains(['.', 'e', 'E']);
                row.push(value);
            }
            mat.push(row);
        }
        matrices.push(mat);
    }
    if let Some(extra) = cur.lines.get(cur.pos) {
        return Err(perr(extra.number, extra.tokens[0].0, "trailing content after the last matrix"));
    }
    let fd = FusionData::new(&matrices, if real { Mode::Float } else { Mode::Exact })?;
    if fd.dual() != dual.as_slice() {
        let j = (0..m).find(|&j| fd.dual()[j] != dual[j]).unwrap_or(0);
        return Err(perr(dual_line, v[j].0, format!("declared dual of {} is {}, structure constants give {}", j + 1, dual[j] + 1, fd.dual()[j] + 1)));
    }
    Ok(fd)
}

fn format_entry(fd: &FusionData, j: usize, k: usize, s: usize) -> String {
    match fd.tensor() {
        Tensor::Integer(_) => fd.get_int(j, k, s).unwrap_or(0).to_string(),
        Tensor::Real(_) => format!("{:?}", fd.get(j, k, s)),
    }
}

/// Writes the canonical FRT v1 text.
pub fn serialize_fusion_ring(fd: &FusionData) -> String {
    let m = fd.rank();
    let mut out = format!("frt 1\nrank {m}\ndual");
    for d in fd.dual() {
        out.push_str(&format!(" {}", d + 1));
    }
    out.push('\n');
    for i in 0..m {
        out.push_str(&format!("matrix {}\n", i + 1));
        for k in 0..m {
            let row: Vec<String> = (0..m).map(|s| format_entry(fd, i, k, s)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// JSON mirror of the text format: `tensor[j][k][s] = N_{j,k}^s`, `dual` 1-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FusionJson {
    /// Rank.
    pub rank: usize,
    /// 1-based involution.
    pub dual: Vec<usize>,
    /// Structure constants (integers for fusion rings).
    pub tensor: Vec<Vec<Vec<Value>>>,
    /// Optional label.
    pub label: Option<String>,
}

/// Converts to the JSON mirror.
pub fn to_json(fd: &FusionData) -> FusionJson {
    let m = fd.rank();
    let entry = |j, k, s| match fd.tensor() {
        Tensor::Integer(_) => Value::from(fd.get_int(j, k, s).unwrap_or(0)),
        Tensor::Real(_) => Value::from(fd.get(j, k, s)),
    };
    FusionJson {
        rank: m,
        dual: fd.dual().iter().map(|d| d + 1).collect(),
        tensor: (0..m).map(|j| (0..m).map(|k| (0..m).map(|s| entry(j, k, s)).collect()).collect()).collect(),
        label: fd.label().map(str::to_string),
    }
}

/// Parses the JSON mirror; integer-valued JSON numbers give an exact ring.
pub fn from_json(text: &str) -> Result<FusionData> {
    let doc: FusionJson = serde_json::from_str(text).map_err(|e| perr(e.line(), e.column(), e.to_string()))?;
    let m = doc.rank;
    if doc.tensor.len() != m {
        return Err(Error::NonSquare { index: doc.tensor.len(), rank: m });
    }
    let mut exact = true;
    let mut mats = Vec::with_capacity(m);
    for (j, mat) in doc.tensor.iter().enumerate() {
        if mat.len() != m || mat.iter().any(|r| r.len() != m) {
            return Err(Error::NonSquare { index: j + 1, rank: m });
        }
        let mut rows = Vec::with_capacity(m);
        for row in mat {
            let mut r = Vec::with_capacity(m);
            for v in row {
                exact &= v.is_u64();
                r.push(v.as_f64().ok_or_else(|| perr(1, 1, format!("non-numeric tensor entry {v}")))?);
            }
            rows.push(r);
        }
        mats.push(rows);
    }
    let fd = FusionData::new(&mats, if exact { Mode::Exact } else { Mode::Float })?;
    let declared: Vec<usize> = doc.dual.iter().map(|d| d.wrapping_sub(1)).collect();
    if declared != fd.dual() {
        return Err(perr(1, 1, "declared dual does not match the structure constants"));
    }
    Ok(match doc.label {
        Some(l) => fd.with_label(l),
        None => fd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::cyclic_group_ring;
    use proptest::prelude::*;

    const Z2: &str = "frt 1\nrank 2\ndual 1 2\nmatrix 1\n1 0\n0 1\nmatrix 2\n0 1\n1 0\n";

    #[test]
    fn round_trip_canonical() {
        let fd = parse_fusion_ring(Z2).unwrap();
        assert_eq!(serialize_fusion_ring(&fd), Z2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\nfrt 1\n\nrank 2  # two\ndual 1 2\nmatrix 1\n1 0\n0 1\nmatrix 2\n0 1\n1 0\n";
        assert_eq!(serialize_fusion_ring(&parse_fusion_ring(text).unwrap()), Z2);
    }

    #[test]
    fn truncated_input() {
        let text = &Z2[..Z2.len() - 4];
        match parse_fusion_ring(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_token_position() {
        let text = Z2.replace("0 1\n1 0\n", "0 x\n1 0\n");
        match parse_fusion_ring(&text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (8, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_dual_line() {
        let text = Z2.replace("dual 1 2", "dual 2 1");
        assert!(matches!(parse_fusion_ring(&text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn decimals_give_real_mode() {
        let text = "frt 1\nrank 2\ndual 1 2\nmatrix 1\n1.0 0.0\n0.0 1.0\nmatrix 2\n0.0 1.0\n1.0 1.5\n";
        let fd = parse_fusion_ring(text).unwrap();
        assert_eq!(fd.mode(), Mode::Float);
        assert_eq!(serialize_fusion_ring(&fd), text);
    }

    #[test]
    fn axiom_errors_are_propagated() {
        let text = Z2.replace("matrix 1\n1 0", "matrix 1\n0 1");
        assert!(matches!(parse_fusion_ring(&text), Err(Error::NoUnit(_))));
    }

    #[test]
    fn json_round_trip() {
        let fd = cyclic_group_ring(4);
        let text = serde_json::to_string(&to_json(&fd)).unwrap();
        let back = from_json(&text).unwrap();
        assert_eq!(back, fd);
        assert_eq!(back.label(), Some("z4"));
    }

    proptest! {
        #[test]
        fn round_trip_cyclic(n in 1usize..10) {
            let fd = cyclic_group_ring(n);
            let text = serialize_fusion_ring(&fd);
            let back = parse_fusion_ring(&text).unwrap();
            prop_assert_eq!(serialize_fusion_ring(&back), text);
            prop_assert_eq!(back, fd);
        }
    }
}
