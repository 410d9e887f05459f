//! Snapshot ingestion: USLM-style XML and the canonical JSON interchange
//! format, plus a seeded synthetic corpus generator.

mod canonical;
pub mod synthetic;
pub mod uslm;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use thiserror::Error;

use crate::model::{CodeGraph, ModelError, NodePath};

pub use canonical::{export_canonical, structural_fingerprint, CanonicalDocument, CanonicalNode};
pub use synthetic::{
    generate_synthetic, generate_synthetic_with_truth, PlantedCitations, SyntheticCorpus, SyntheticSpec,
};
pub use uslm::UslmConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    UslmXml,
    CanonicalJson,
}

impl FromStr for SourceFormat {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uslm-xml" => Ok(SourceFormat::UslmXml),
            "canonical-json" => Ok(SourceFormat::CanonicalJson),
            other => Err(IngestError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::UslmXml => "uslm-xml",
            SourceFormat::CanonicalJson => "canonical-json",
        })
    }
}

/// An unparsed snapshot. When `snapshot_date` is set it overrides any date
/// carried inside the payload.
#[derive(Debug, Clone)]
pub struct RawDocument {
    pub source_format: SourceFormat,
    pub snapshot_date: Option<NaiveDate>,
    pub payload: Vec<u8>,
}

impl RawDocument {
    pub fn canonical(payload: impl Into<Vec<u8>>) -> Self {
        RawDocument {
            source_format: SourceFormat::CanonicalJson,
            snapshot_date: None,
            payload: payload.into(),
        }
    }

    pub fn uslm(payload: impl Into<Vec<u8>>, snapshot_date: Option<NaiveDate>) -> Self {
        RawDocument {
            source_format: SourceFormat::UslmXml,
            snapshot_date,
            payload: payload.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("unknown source format `{0}` (expected uslm-xml or canonical-json)")]
    UnknownFormat(String),
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed XML at byte {position}: {message}")]
    Xml { position: u64, message: String },
    #[error("unknown element <{element}> at byte {position}")]
    UnknownElement { element: String, position: u64 },
    #[error("unknown level `{level}` at {path}")]
    UnknownLevel { level: String, path: String },
    #[error("invalid snapshot date `{0}` (expected YYYY-MM-DD)")]
    InvalidDate(String),
    #[error("snapshot date missing from document and not supplied")]
    MissingDate,
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("invalid level map: {0}")]
    LevelMap(String),
    #[error("structural error: {0}")]
    Model(#[from] ModelError),
}

impl From<serde_json::Error> for IngestError {
    fn from(e: serde_json::Error) -> Self {
        IngestError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub fn parse_date(s: &str) -> Result<NaiveDate, IngestError> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|_| IngestError::InvalidDate(s.to_string()))
}

/// Parses with the default USLM element mapping.
pub fn parse_snapshot(doc: &RawDocument) -> Result<CodeGraph, IngestError> {
    parse_snapshot_with(doc, &UslmConfig::default())
}

pub fn parse_snapshot_with(doc: &RawDocument, config: &UslmConfig) -> Result<CodeGraph, IngestError> {
    let parsed = match doc.source_format {
        SourceFormat::CanonicalJson => canonical::read_document(&doc.payload)?,
        SourceFormat::UslmXml => uslm::read_document(&doc.payload, config)?,
    };
    let date = match (doc.snapshot_date, parsed.snapshot_date.as_deref()) {
        (Some(d), _) => d,
        (None, Some(s)) => parse_date(s)?,
        (None, None) => return Err(IngestError::MissingDate),
    };
    canonical::build_graph(date, &parsed.titles)
}

/// Intermediate tree produced by both readers.
#[derive(Debug, Default)]
pub(crate) struct ParsedDocument {
    pub snapshot_date: Option<String>,
    pub titles: Vec<CanonicalNode>,
}

pub(crate) fn display_path(path: &NodePath) -> String {
    path.to_string()
}
