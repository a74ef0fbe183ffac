//! Labeled comment corpora: loading, cleaning, tokenization, statistics, and
//! stratified cross-validation fold plans.

mod clean;
mod folds;
mod stats;

pub use clean::{clean_text, tokenize};
pub use folds::{stratified_kfold, FoldPlan};
pub use stats::{compute_stats, CorpusStats, LabelStats};

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The three gold classes. Integer codes are fixed: 0 CLEAN, 1 OFFENSIVE,
/// 2 HATE, and every table in the reports uses that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Clean = 0,
    Offensive = 1,
    Hate = 2,
}

/// Number of classes; fixed by the label scheme.
pub const NUM_CLASSES: usize = 3;

/// All labels in code order.
pub const ALL_LABELS: [Label; NUM_CLASSES] = [Label::Clean, Label::Offensive, Label::Hate];

impl Label {
    /// Integer code 0/1/2.
    pub fn code(self) -> usize {
        self as usize
    }

    /// Label from its integer code.
    pub fn from_code(code: usize) -> Option<Label> {
        match code {
            0 => Some(Label::Clean),
            1 => Some(Label::Offensive),
            2 => Some(Label::Hate),
            _ => None,
        }
    }

    /// Parse `0`/`1`/`2` or the class name, case-insensitively.
    pub fn parse(s: &str) -> Option<Label> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0" | "clean" => Some(Label::Clean),
            "1" | "offensive" => Some(Label::Offensive),
            "2" | "hate" => Some(Label::Hate),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Clean => "CLEAN",
            Label::Offensive => "OFFENSIVE",
            Label::Hate => "HATE",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A single comment or post.
///
/// `cleaned` and `tokens` stay empty until [`Corpus::preprocess`] runs;
/// tokens always derive from `cleaned`, never from `raw`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub raw: String,
    pub cleaned: String,
    pub tokens: Vec<String>,
    pub label: Option<Label>,
}

impl Document {
    /// Document with raw text only, not yet cleaned.
    pub fn new(id: impl Into<String>, raw: impl Into<String>, label: Option<Label>) -> Document {
        Document {
            id: id.into(),
            raw: raw.into(),
            cleaned: String::new(),
            tokens: Vec::new(),
            label,
        }
    }

    /// Fill `cleaned` and `tokens` from `raw`.
    pub fn preprocess(&mut self) {
        self.cleaned = clean_text(&self.raw);
        self.tokens = tokenize(&self.cleaned);
    }
}

/// An ordered collection of documents with unique ids.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub source: String,
}

/// Input file format for [`load_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Tsv,
}

impl CorpusFormat {
    fn delimiter(self) -> u8 {
        match self {
            CorpusFormat::Csv => b',',
            CorpusFormat::Tsv => b'\t',
        }
    }

    /// Guess the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") => CorpusFormat::Tsv,
            _ => CorpusFormat::Csv,
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus file not found: {0}")]
    MissingFile(String),
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("unknown label {value:?} at line {line}")]
    UnknownLabel { value: String, line: u64 },
    #[error("document {id:?} has no label")]
    UnlabeledDocument { id: String },
    #[error("k must be at least 2, got {0}")]
    BadK(usize),
    #[error("io error reading corpus: {0}")]
    Io(#[from] std::io::Error),
}

impl Corpus {
    /// Corpus from in-memory documents (mainly for tests and fixtures).
    pub fn from_documents(documents: Vec<Document>) -> Corpus {
        Corpus {
            documents,
            source: String::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Clean and tokenize every document in place.
    pub fn preprocess(&mut self) {
        for doc in &mut self.documents {
            doc.preprocess();
        }
    }

    /// Per-class document counts in label-code order.
    pub fn label_counts(&self) -> [usize; NUM_CLASSES] {
        let mut counts = [0usize; NUM_CLASSES];
        for doc in &self.documents {
            if let Some(label) = doc.label {
                counts[label.code()] += 1;
            }
        }
        counts
    }
}

/// Load a corpus from a delimited file with header `id,text,label`
/// (the label column may be absent for prediction-only inputs).
///
/// Quoted fields and doubled-quote escapes follow standard CSV rules.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    if !path.exists() {
        return Err(CorpusError::MissingFile(path.display().to_string()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .flexible(false)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => CorpusError::MissingFile(path.display().to_string()),
            _ => CorpusError::MalformedRow {
                line: 1,
                reason: e.to_string(),
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| CorpusError::MalformedRow {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let id_col = col("id").ok_or_else(|| CorpusError::MalformedRow {
        line: 1,
        reason: "missing `id` column".into(),
    })?;
    let text_col = col("text").ok_or_else(|| CorpusError::MalformedRow {
        line: 1,
        reason: "missing `text` column".into(),
    })?;
    let label_col = col("label");

    let mut documents = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| CorpusError::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| {
            record.get(i).ok_or(CorpusError::MalformedRow {
                line,
                reason: format!("missing column {i}"),
            })
        };
        let id = field(id_col)?.to_string();
        if !seen_ids.insert(id.clone()) {
            return Err(CorpusError::MalformedRow {
                line,
                reason: format!("duplicate document id {id:?}"),
            });
        }
        let text = field(text_col)?.to_string();
        let label = match label_col {
            Some(i) => {
                let value = field(i)?;
                if value.trim().is_empty() {
                    None
                } else {
                    Some(Label::parse(value).ok_or_else(|| CorpusError::UnknownLabel {
                        value: value.to_string(),
                        line,
                    })?)
                }
            }
            None => None,
        };
        documents.push(Document::new(id, text, label));
    }

    Ok(Corpus {
        documents,
        source: path.display().to_string(),
    })
}
