//! Vector persistence.
//!
//! The text layout is `word v1 ... vdim` per line, optionally preceded by a
//! `<V> <dim>` header. Files without the header (GloVe style) are detected
//! from the first line. Values are written in the shortest form that
//! parses back to the same `f32`, so text round trips are exact.
//!
//! The binary cache is little-endian:
//!
//! ```text
//! magic "CTXV" | version u32 | words u64 | dim u64
//! per word: byte_len u32 | utf-8 bytes | count u64
//! vectors: words * dim f32
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::space::EmbeddingSpace;
use super::vocab::Vocabulary;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"CTXV";
const VERSION: u32 = 1;

pub fn write_text<W: Write>(space: &EmbeddingSpace, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{} {}", space.len(), space.dim())?;
    for (i, word) in space.vocab().words().iter().enumerate() {
        w.write_all(word.as_bytes())?;
        for v in space.row(i) {
            write!(w, " {v}")?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()
}

fn parse_row(line: &str, lineno: usize, dim: Option<usize>) -> Result<(String, Vec<f32>)> {
    let mut fields = line.split_whitespace();
    let word = fields.next().ok_or_else(|| Error::Malformed {
        source_name: "vectors".into(),
        line: lineno,
        message: "empty row".into(),
    })?;
    let values = fields
        .map(|f| {
            f.parse::<f32>().map_err(|_| Error::Malformed {
                source_name: "vectors".into(),
                line: lineno,
                message: format!("`{f}` is not a number"),
            })
        })
        .collect::<Result<Vec<f32>>>()?;
    if let Some(d) = dim {
        if values.len() != d {
            return Err(Error::DimensionMismatch {
                row: lineno,
                expected: d,
                found: values.len(),
            });
        }
    }
    Ok((word.to_owned(), values))
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let (a, b) = (it.next()?, it.next()?);
    if it.next().is_some() {
        return None;
    }
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// Reads text vectors; `row` numbers in errors are 1-based file lines.
pub fn read_text<R: BufRead>(reader: R) -> Result<EmbeddingSpace> {
    let mut lines = reader.lines().enumerate();
    let mut words = Vec::new();
    let mut values = Vec::new();
    let mut expected_rows = None;
    let mut dim = None;

    for (i, line) in lines.by_ref() {
        let line = line.map_err(|e| Error::io("vectors", e))?;
        if line.trim().is_empty() {
            continue;
        }
        if let Some((n, d)) = parse_header(&line) {
            expected_rows = Some(n);
            dim = Some(d);
        } else {
            let (w, v) = parse_row(&line, i + 1, None)?;
            dim = Some(v.len());
            words.push(w);
            values.extend(v);
        }
        break;
    }
    let Some(dim) = dim else {
        return Err(Error::Malformed {
            source_name: "vectors".into(),
            line: 1,
            message: "no vectors found".into(),
        });
    };
    for (i, line) in lines {
        let line = line.map_err(|e| Error::io("vectors", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let (w, v) = parse_row(&line, i + 1, Some(dim))?;
        words.push(w);
        values.extend(v);
    }
    if let Some(n) = expected_rows {
        if n != words.len() {
            return Err(Error::Mismatch(format!(
                "header announces {n} rows, found {}",
                words.len()
            )));
        }
    }
    let n = words.len();
    EmbeddingSpace::new(Vocabulary::from_words(words, vec![0; n])?, dim, values)
}

pub fn save_vectors(space: &EmbeddingSpace, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_text(space, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

pub fn load_vectors(path: &Path) -> Result<EmbeddingSpace> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_text(BufReader::new(f))
}

pub fn write_binary<W: Write>(space: &EmbeddingSpace, mut w: W) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(space.len() as u64).to_le_bytes())?;
    w.write_all(&(space.dim() as u64).to_le_bytes())?;
    let vocab = space.vocab();
    for (word, count) in vocab.words().iter().zip(vocab.counts()) {
        w.write_all(&(word.len() as u32).to_le_bytes())?;
        w.write_all(word.as_bytes())?;
        w.write_all(&count.to_le_bytes())?;
    }
    for v in space.matrix() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| Error::io("binary vectors", e))?;
    Ok(buf)
}

pub fn read_binary<R: Read>(mut r: R) -> Result<EmbeddingSpace> {
    let bad = |m: String| Error::Malformed {
        source_name: "binary vectors".into(),
        line: 0,
        message: m,
    };
    if &read_array::<4, _>(&mut r)? != MAGIC {
        return Err(bad("bad magic".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let n = u64::from_le_bytes(read_array(&mut r)?) as usize;
    let dim = u64::from_le_bytes(read_array(&mut r)?) as usize;
    let mut words = Vec::with_capacity(n);
    let mut counts = Vec::with_capacity(n);
    for _ in 0..n {
        let len = u32::from_le_bytes(read_array(&mut r)?) as usize;
        let mut bytes = vec![0u8; len];
        r.read_exact(&mut bytes)
            .map_err(|e| Error::io("binary vectors", e))?;
        words.push(String::from_utf8(bytes).map_err(|e| bad(e.to_string()))?);
        counts.push(u64::from_le_bytes(read_array(&mut r)?));
    }
    let mut values = Vec::with_capacity(n * dim);
    for _ in 0..n * dim {
        values.push(f32::from_le_bytes(read_array(&mut r)?));
    }
    EmbeddingSpace::new(Vocabulary::from_words(words, counts)?, dim, values)
}

pub fn save_binary(space: &EmbeddingSpace, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_binary(space, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

pub fn load_binary(path: &Path) -> Result<EmbeddingSpace> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_binary(BufReader::new(f))
}
