//! Text format for point sets, bit-exact for round-tripping.
//!
//! ```text
//! # q=9 d=2
//! 1,0
//! 2,0
//! ```
//!
//! One vector per line as d comma-separated element encodings, preceded by a
//! single header line carrying the field order and the dimension. Vectors are
//! written in venc order; parsing accepts any order but rejects duplicates,
//! out-of-range encodings, and malformed headers.

use crate::geometry::{FVector, PointSet};
use crate::Field;
use crate::{Error, Result};

fn header_error(line: &str) -> Error {
    Error::SetFile(format!("bad header {line:?}, expected `# q=<q> d=<d>`"))
}

/// Parse the set text format.
pub fn parse_set_file(input: &str) -> Result<PointSet> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::SetFile("empty input".into()))?;
    let rest = header.strip_prefix("# q=").ok_or_else(|| header_error(header))?;
    let (q_str, d_part) = rest.split_once(' ').ok_or_else(|| header_error(header))?;
    let d_str = d_part.strip_prefix("d=").ok_or_else(|| header_error(header))?;
    let q: u64 = q_str.parse().map_err(|_| header_error(header))?;
    let dim: usize = d_str.trim().parse().map_err(|_| header_error(header))?;
    if dim == 0 || dim > 64 {
        return Err(Error::SetFile(format!("dimension {dim} out of range")));
    }
    let field = Field::from_order(q)?;

    let mut vectors = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in lines.enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 2;
        let mut encs = Vec::with_capacity(dim);
        for part in line.split(',') {
            let enc: u64 = part
                .trim()
                .parse()
                .map_err(|_| Error::SetFile(format!("line {lineno}: bad encoding {part:?}")))?;
            if enc >= q {
                return Err(Error::SetFile(format!(
                    "line {lineno}: encoding {enc} out of range for q={q}"
                )));
            }
            encs.push(enc);
        }
        if encs.len() != dim {
            return Err(Error::SetFile(format!(
                "line {lineno}: expected {dim} coordinates, got {}",
                encs.len()
            )));
        }
        let v = FVector::from_encs(field, &encs)?;
        if !seen.insert(v.venc()) {
            return Err(Error::SetFile(format!("line {lineno}: duplicate vector {v}")));
        }
        vectors.push(v);
    }
    PointSet::from_vectors(field, dim, vectors)
}

/// Render a point set in the text format, vectors in venc order.
pub fn write_set_file(set: &PointSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("# q={} d={}\n", set.field().order(), set.dim()));
    for v in set.iter() {
        let encs: Vec<String> = v.coords().iter().map(|c| c.enc().to_string()).collect();
        out.push_str(&encs.join(","));
        out.push('\n');
    }
    out
}

/// Read and parse a set file from disk.
pub fn read_set_path(path: &std::path::Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_set_file(&text)
}

/// Write a set file to disk.
pub fn write_set_path(set: &PointSet, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, write_set_file(set))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
