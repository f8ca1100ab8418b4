use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::build::{Corpus, CorpusArticle, SourceShare};
use crate::error::{Error, Result};

/// JSON sidecar stored next to a corpus text file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSidecar {
    pub source_ids: Vec<String>,
    pub token_count: u64,
    pub word_counts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shares: Option<BTreeMap<String, SourceShare>>,
}

impl CorpusSidecar {
    pub fn of(corpus: &Corpus) -> Self {
        CorpusSidecar {
            source_ids: corpus.source_ids().map(str::to_owned).collect(),
            token_count: corpus.token_count(),
            word_counts: corpus.word_counts().clone(),
            shares: None,
        }
    }
}

/// `corpus.txt` → `corpus.json`.
pub fn sidecar_path(text_path: &Path) -> PathBuf {
    text_path.with_extension("json")
}

/// Writes one article per line plus the JSON sidecar.
pub fn write_corpus(corpus: &Corpus, text_path: &Path, sidecar: &CorpusSidecar) -> Result<()> {
    if let Some(dir) = text_path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    let file = File::create(text_path).map_err(|e| Error::io(text_path, e))?;
    let mut w = BufWriter::new(file);
    for a in corpus.articles() {
        writeln!(w, "{}", a.text()).map_err(|e| Error::io(text_path, e))?;
    }
    w.flush().map_err(|e| Error::io(text_path, e))?;

    let side = sidecar_path(text_path);
    let json = serde_json::to_string_pretty(sidecar)?;
    fs::write(&side, json + "\n").map_err(|e| Error::io(&side, e))?;
    Ok(())
}

/// Reads a corpus written by [`write_corpus`] and checks it against its
/// sidecar.
pub fn read_corpus(text_path: &Path) -> Result<(Corpus, CorpusSidecar)> {
    let side = sidecar_path(text_path);
    let json = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let sidecar: CorpusSidecar = serde_json::from_str(&json)?;

    let file = File::open(text_path).map_err(|e| Error::io(text_path, e))?;
    let mut articles = Vec::with_capacity(sidecar.source_ids.len());
    let mut ids = sidecar.source_ids.iter();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(text_path, e))?;
        let id = ids.next().ok_or_else(|| Error::Malformed {
            source_name: text_path.display().to_string(),
            line: i + 1,
            message: "more lines than sidecar source_ids".into(),
        })?;
        articles.push(CorpusArticle::from_normalized(id.clone(), line));
    }
    if ids.next().is_some() {
        return Err(Error::Mismatch(format!(
            "{}: fewer lines than sidecar source_ids",
            text_path.display()
        )));
    }
    let corpus = Corpus::from_articles(articles);
    if corpus.token_count() != sidecar.token_count || corpus.word_counts() != &sidecar.word_counts {
        return Err(Error::Mismatch(format!(
            "{}: token counts disagree with sidecar",
            text_path.display()
        )));
    }
    Ok((corpus, sidecar))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let c = Corpus::from_texts(["The bear ran.", "A cat, a dog"]);
        write_corpus(&c, &path, &CorpusSidecar::of(&c)).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "the bear ran\na cat a dog\n");
        let (back, side) = read_corpus(&path).unwrap();
        assert_eq!(back, c);
        assert_eq!(side.token_count, 7);
    }

    #[test]
    fn tampered_sidecar_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let c = Corpus::from_texts(["one two"]);
        let mut side = CorpusSidecar::of(&c);
        side.token_count = 3;
        write_corpus(&c, &path, &side).unwrap();
        assert!(read_corpus(&path).is_err());
    }
}
