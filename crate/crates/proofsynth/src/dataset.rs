//! JSONL dataset files: a header object, then one entry per line.

use std::io::{BufRead, Write};

use proofsynth_core::datagen::DatasetEntry;
use proofsynth_core::token::{encode_term, encode_type, lex_term, lex_type, parse_term, parse_type};
use proofsynth_core::typing::check_closed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT: &str = "proofsynth-dataset";
pub const GENERATOR_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub generator_version: String,
    pub seed: u64,
    pub normal_only: bool,
    pub entries: usize,
}

impl Header {
    pub fn new(seed: u64, normal_only: bool, entries: usize) -> Self {
        Header { format: FORMAT.into(), generator_version: GENERATOR_VERSION.into(), seed, normal_only, entries }
    }
}

/// One line of the file. Token fields use the canonical space-joined encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub type_tokens: String,
    pub term_tokens: String,
    pub size: usize,
    pub normal_only: bool,
}

impl Record {
    pub fn from_entry(e: &DatasetEntry, normal_only: bool) -> Self {
        Record {
            type_tokens: encode_type(&e.type_tokens),
            term_tokens: encode_term(&e.term_tokens),
            size: e.size(),
            normal_only,
        }
    }

    /// Parses both token strings and checks that the term proves the type.
    pub fn to_entry(&self) -> Result<DatasetEntry, String> {
        let ty = lex_type(&self.type_tokens).map_err(|e| e.to_string())?;
        let ty = parse_type(&ty).map_err(|e| e.to_string())?;
        let term = lex_term(&self.term_tokens).map_err(|e| e.to_string())?;
        let term = parse_term(&term).map_err(|e| e.to_string())?;
        if !check_closed(&term, &ty) {
            return Err(format!("`{}` is not a proof of `{}`", self.term_tokens, self.type_tokens));
        }
        if term.size() != self.size {
            return Err(format!("size field {} but the term has {} nodes", self.size, term.size()));
        }
        Ok(DatasetEntry::new(ty, term))
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("empty dataset file: missing header line")]
    MissingHeader,
}

pub struct Dataset {
    pub header: Header,
    pub entries: Vec<DatasetEntry>,
}

pub fn write_dataset<W: Write>(mut out: W, header: &Header, entries: &[DatasetEntry]) -> Result<(), DatasetError> {
    let line = serde_json::to_string(header).expect("header serializes");
    writeln!(out, "{line}")?;
    for e in entries {
        let line = serde_json::to_string(&Record::from_entry(e, header.normal_only)).expect("record serializes");
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a dataset; blank lines are skipped and every entry is re-checked.
pub fn read_dataset<R: BufRead>(input: R) -> Result<Dataset, DatasetError> {
    let mut header = None;
    let mut entries = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| DatasetError::Malformed { line: i + 1, message };
        if header.is_none() {
            let h: Header = serde_json::from_str(&line).map_err(|e| malformed(format!("bad header: {e}")))?;
            if h.format != FORMAT {
                return Err(malformed(format!("unknown format `{}`", h.format)));
            }
            header = Some(h);
            continue;
        }
        let r: Record = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        entries.push(r.to_entry().map_err(malformed)?);
    }
    let header = header.ok_or(DatasetError::MissingHeader)?;
    Ok(Dataset { header, entries })
}
