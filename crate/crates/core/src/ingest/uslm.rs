//! Reader for USLM-style statutory XML.
//!
//! Structural elements are mapped to levels through [`UslmConfig`]. Within a
//! level, `<num>` and `<heading>` supply the designation and heading, and the
//! text elements (`<content>`, `<chapeau>`, `<continuation>`, `<p>`, ...)
//! supply statutory text, including any inline markup inside them. Notes,
//! source credits and other editorial apparatus are skipped.

use std::collections::BTreeMap;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{CanonicalNode, IngestError, ParsedDocument};
use crate::model::{LevelKind, ModelError, NodePath};

const TRANSPARENT: &[&str] = &["uscDoc", "lawDoc", "main", "body"];
const TEXT: &[&str] = &["content", "chapeau", "continuation", "p", "text", "proviso"];
const SKIPPED: &[&str] = &[
    "meta",
    "notes",
    "note",
    "sourceCredit",
    "toc",
    "tocItem",
    "layout",
    "editorialNote",
    "statutoryNote",
    "footnote",
    "footnotes",
    "img",
    "appendix",
];

/// Element-name to level mapping. Loaded from a flat JSON object whose keys
/// are element names and whose values are level names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UslmConfig {
    levels: BTreeMap<String, LevelKind>,
}

impl Default for UslmConfig {
    fn default() -> Self {
        UslmConfig {
            levels: LevelKind::STATUTORY
                .iter()
                .map(|k| (k.name().to_string(), *k))
                .collect(),
        }
    }
}

impl UslmConfig {
    pub fn from_json(bytes: &[u8]) -> Result<Self, IngestError> {
        let raw: BTreeMap<String, String> = serde_json::from_slice(bytes)?;
        let mut levels = BTreeMap::new();
        for (element, level) in raw {
            let kind: LevelKind = level
                .parse()
                .map_err(|_| IngestError::LevelMap(format!("element `{element}` maps to unknown level `{level}`")))?;
            if kind == LevelKind::Root {
                return Err(IngestError::LevelMap(format!("element `{element}` cannot map to root")));
            }
            levels.insert(element, kind);
        }
        Ok(UslmConfig { levels })
    }

    pub fn level_for(&self, element: &str) -> Option<LevelKind> {
        self.levels.get(element).copied()
    }
}

enum Frame {
    Transparent,
    Level(LevelKind, CanonicalNode),
    Num(Option<String>),
    Heading,
    Text,
    Inline,
    Skip { meta: bool },
    MetaDate,
}

struct State<'c> {
    config: &'c UslmConfig,
    stack: Vec<Frame>,
    roots: Vec<CanonicalNode>,
    collected: String,
    date: Option<String>,
}

impl State<'_> {
    fn collecting(&self) -> bool {
        matches!(
            self.stack.last(),
            Some(Frame::Num(_) | Frame::Heading | Frame::Text | Frame::Inline | Frame::MetaDate)
        )
    }

    fn in_skip(&self) -> Option<bool> {
        match self.stack.last() {
            Some(Frame::Skip { meta }) => Some(*meta),
            _ => None,
        }
    }

    fn current_level(&mut self) -> Option<(LevelKind, &mut CanonicalNode)> {
        self.stack.iter_mut().rev().find_map(|f| match f {
            Frame::Level(k, n) => Some((*k, n)),
            _ => None,
        })
    }

    fn current_path(&self) -> NodePath {
        NodePath(
            self.stack
                .iter()
                .filter_map(|f| match f {
                    Frame::Level(k, n) => Some((*k, n.num.clone())),
                    _ => None,
                })
                .collect(),
        )
    }

    fn attach_text(&mut self, piece: &str) -> Result<(), IngestError> {
        let piece = piece.trim();
        if piece.is_empty() {
            return Ok(());
        }
        let path = self.current_path();
        match self.current_level() {
            Some((kind, node)) if kind.is_text_bearing() => {
                let text = node.text.get_or_insert_with(String::new);
                if !text.is_empty() {
                    text.push(' ');
                }
                text.push_str(piece);
                Ok(())
            }
            Some((kind, _)) => Err(ModelError::TextOnNonTextLevel { level: kind, path }.into()),
            None => Err(ModelError::TextOnNonTextLevel {
                level: LevelKind::Root,
                path,
            }
            .into()),
        }
    }

    fn open(&mut self, e: &BytesStart<'_>, position: u64) -> Result<(), IngestError> {
        let name = String::from_utf8_lossy(e.local_name().as_ref()).into_owned();
        if let Some(meta) = self.in_skip() {
            let frame = if meta && (name == "date" || name == "created") {
                Frame::MetaDate
            } else {
                Frame::Skip { meta }
            };
            self.stack.push(frame);
            return Ok(());
        }
        if self.collecting() {
            self.stack.push(Frame::Inline);
            return Ok(());
        }
        let frame = if let Some(kind) = self.config.level_for(&name) {
            Frame::Level(
                kind,
                CanonicalNode {
                    level: kind.name().to_string(),
                    ..CanonicalNode::default()
                },
            )
        } else if name == "num" {
            let value = e
                .try_get_attribute("value")
                .map_err(|err| xml_error(err, position))?
                .map(|a| a.unescape_value().map(|v| v.into_owned()))
                .transpose()
                .map_err(|err| xml_error(err, position))?;
            Frame::Num(value)
        } else if name == "heading" {
            Frame::Heading
        } else if TEXT.contains(&name.as_str()) {
            Frame::Text
        } else if SKIPPED.contains(&name.as_str()) {
            Frame::Skip { meta: name == "meta" }
        } else if TRANSPARENT.contains(&name.as_str()) {
            Frame::Transparent
        } else {
            return Err(IngestError::UnknownElement {
                element: name,
                position,
            });
        };
        self.collected.clear();
        self.stack.push(frame);
        Ok(())
    }

    fn close(&mut self) -> Result<(), IngestError> {
        let frame = self.stack.pop().expect("end tags are balanced by the reader");
        match frame {
            Frame::Level(_, node) => match self.current_level() {
                Some((_, parent)) => parent.children.push(node),
                None => self.roots.push(node),
            },
            Frame::Num(value) => {
                let num = value.unwrap_or_else(|| normalize_num(&self.collected));
                if let Some((_, node)) = self.current_level() {
                    node.num = num;
                }
                self.collected.clear();
            }
            Frame::Heading => {
                let heading = self.collected.trim().to_string();
                if let Some((_, node)) = self.current_level() {
                    if !heading.is_empty() {
                        node.heading = Some(heading);
                    }
                }
                self.collected.clear();
            }
            Frame::Text => {
                let piece = std::mem::take(&mut self.collected);
                self.attach_text(&piece)?;
            }
            Frame::MetaDate => {
                let candidate = std::mem::take(&mut self.collected);
                if self.date.is_none() && super::parse_date(&candidate).is_ok() {
                    self.date = Some(candidate.trim().to_string());
                }
            }
            Frame::Inline | Frame::Skip { .. } | Frame::Transparent => {}
        }
        Ok(())
    }

    fn text(&mut self, s: &str) -> Result<(), IngestError> {
        if self.collecting() {
            self.collected.push_str(s);
            Ok(())
        } else if self.in_skip().is_some() {
            Ok(())
        } else {
            // loose text directly inside a structural element
            self.attach_text(s)
        }
    }
}

fn xml_error(err: impl std::fmt::Display, position: u64) -> IngestError {
    IngestError::Xml {
        position,
        message: err.to_string(),
    }
}

/// Reduces a printed designation such as `§ 501.`, `CHAPTER 1—` or `(a)`
/// to its bare identifier.
pub fn normalize_num(raw: &str) -> String {
    let trimmed = raw
        .trim()
        .trim_end_matches(|c: char| matches!(c, '.' | ':' | '-' | '—' | '–') || c.is_whitespace());
    let last = trimmed.split_whitespace().last().unwrap_or("");
    last.trim_start_matches('§')
        .trim_start_matches('(')
        .trim_end_matches(')')
        .to_string()
}

pub(super) fn read_document(payload: &[u8], config: &UslmConfig) -> Result<ParsedDocument, IngestError> {
    let mut reader = Reader::from_reader(payload);
    reader.config_mut().trim_text(false);
    let mut state = State {
        config,
        stack: Vec::new(),
        roots: Vec::new(),
        collected: String::new(),
        date: None,
    };
    let mut buf = Vec::new();
    loop {
        let position = reader.buffer_position();
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|err| xml_error(err, reader.error_position()))?;
        match event {
            Event::Start(e) => state.open(&e, position)?,
            Event::Empty(e) => {
                state.open(&e, position)?;
                state.close()?;
            }
            Event::End(_) => state.close()?,
            Event::Text(t) => {
                let s = t.unescape().map_err(|err| xml_error(err, position))?;
                state.text(&s)?;
            }
            Event::CData(c) => {
                let bytes = c.into_inner();
                state.text(&String::from_utf8_lossy(&bytes))?;
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if !state.stack.is_empty() {
        return Err(IngestError::Xml {
            position: reader.buffer_position(),
            message: "unexpected end of document".into(),
        });
    }
    Ok(ParsedDocument {
        snapshot_date: state.date,
        titles: state.roots,
    })
}
