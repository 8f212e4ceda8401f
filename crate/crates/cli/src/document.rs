//! The sheaf document: a JSON file holding a complex, its stalks and
//! restriction maps, optional named sections, and an optional interval cover.
//!
//! Parsing is strict by default: unknown fields are rejected with their path.
//! Serialization is deterministic, with numbers written to 12 significant
//! digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde_json::{Map, Value};
use sheaflab_core::{
    build_interval_sheaf, Cell, Complex, CoveringRelation, GridCover, IntervalSheaf, MapTable,
    NodeAssignment, Section, Sheaf,
};
use thiserror::Error;

use crate::number::fmt_num;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("`{path}`: expected {expected}")]
    InvalidValue { path: String, expected: String },
    #[error("`{path}`: duplicate entry for {key}")]
    Duplicate { path: String, key: String },
    #[error("bad matrix shape for relation {relation} at `{path}`: {detail}")]
    BadMatrixShape {
        relation: String,
        path: String,
        detail: String,
    },
    #[error("unsupported format_version {0} (this build reads version {FORMAT_VERSION})")]
    UnsupportedVersion(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

/// A named entry of the `sections` stanza.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedValues {
    Section(Section),
    Assignment(NodeAssignment),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalStanza {
    pub cover: GridCover,
    /// Local samples, one vector per interval in cover order.
    pub locals: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SheafDocument {
    pub format_version: u64,
    pub description: Option<String>,
    pub cells: Vec<Cell>,
    pub relations: Vec<CoveringRelation>,
    pub stalks: BTreeMap<String, usize>,
    pub maps: MapTable,
    pub sections: BTreeMap<String, NamedValues>,
    pub interval: Option<IntervalStanza>,
}

impl Default for SheafDocument {
    fn default() -> Self {
        SheafDocument {
            format_version: FORMAT_VERSION,
            description: None,
            cells: Vec::new(),
            relations: Vec::new(),
            stalks: BTreeMap::new(),
            maps: MapTable::new(),
            sections: BTreeMap::new(),
            interval: None,
        }
    }
}

/// What a document describes once its stanzas are resolved.
#[derive(Debug, Clone)]
pub enum ResolvedSheaf {
    Cellular(Sheaf),
    Interval(IntervalSheaf),
}

impl ResolvedSheaf {
    pub fn sheaf(&self) -> &Sheaf {
        match self {
            ResolvedSheaf::Cellular(s) => s,
            ResolvedSheaf::Interval(s) => &s.sheaf,
        }
    }
}

impl SheafDocument {
    pub fn complex(&self) -> sheaflab_core::Result<Complex> {
        Complex::build(self.cells.clone(), self.relations.clone())
    }

    /// The sheaf described by the `complex` stanza, or by the `interval`
    /// stanza when no cells are given.
    pub fn resolve(&self) -> sheaflab_core::Result<ResolvedSheaf> {
        match &self.interval {
            Some(iv) if self.cells.is_empty() => {
                Ok(ResolvedSheaf::Interval(build_interval_sheaf(&iv.cover)?))
            }
            _ => Ok(ResolvedSheaf::Cellular(Sheaf::build(
                self.complex()?,
                &self.stalks,
                self.maps.clone(),
            )?)),
        }
    }

    pub fn to_json(&self) -> String {
        let mut root = Vec::new();
        root.push(("format_version", Node::Num(self.format_version.to_string())));
        if let Some(d) = &self.description {
            root.push(("description", Node::Str(d.clone())));
        }
        if !self.cells.is_empty() || !self.relations.is_empty() {
            let cells = self
                .cells
                .iter()
                .map(|c| {
                    Node::Obj(vec![
                        ("id", Node::Str(c.id.clone())),
                        ("rank", Node::Num(c.rank.to_string())),
                    ])
                })
                .collect();
            let relations = self.relations.iter().map(relation_node).collect();
            root.push((
                "complex",
                Node::Obj(vec![
                    ("cells", Node::Arr(cells)),
                    ("relations", Node::Arr(relations)),
                ]),
            ));
        }
        if !self.stalks.is_empty() {
            root.push((
                "stalks",
                Node::Map(
                    self.stalks
                        .iter()
                        .map(|(k, v)| (k.clone(), Node::Num(v.to_string())))
                        .collect(),
                ),
            ));
        }
        if !self.maps.is_empty() {
            let maps = self
                .maps
                .iter()
                .map(|(r, m)| {
                    let Node::Obj(mut fields) = relation_node(r) else {
                        unreachable!()
                    };
                    let rows = (0..m.nrows()).map(|i| numbers(m.row(i).iter())).collect();
                    fields.push(("matrix", Node::Arr(rows)));
                    Node::Obj(fields)
                })
                .collect();
            root.push(("maps", Node::Arr(maps)));
        }
        if !self.sections.is_empty() {
            let entries = self
                .sections
                .iter()
                .map(|(name, values)| {
                    let (kind, values) = match values {
                        NamedValues::Section(s) => ("section", &s.values),
                        NamedValues::Assignment(a) => ("assignment", &a.values),
                    };
                    let values = values
                        .iter()
                        .map(|(id, v)| (id.clone(), numbers(v.iter())))
                        .collect();
                    (
                        name.clone(),
                        Node::Obj(vec![
                            ("kind", Node::Str(kind.into())),
                            ("values", Node::Map(values)),
                        ]),
                    )
                })
                .collect();
            root.push(("sections", Node::Map(entries)));
        }
        if let Some(iv) = &self.interval {
            let c = &iv.cover;
            let mut fields = vec![
                ("domain", numbers([c.domain.0, c.domain.1].iter())),
                ("step", Node::Num(fmt_num(c.step))),
                (
                    "intervals",
                    Node::Arr(
                        c.intervals
                            .iter()
                            .map(|&(l, r)| numbers([l, r].iter()))
                            .collect(),
                    ),
                ),
            ];
            if let Some(locals) = &iv.locals {
                fields.push((
                    "locals",
                    Node::Arr(locals.iter().map(|v| numbers(v.iter())).collect()),
                ));
            }
            root.push(("interval", Node::Obj(fields)));
        }
        let mut out = String::new();
        Node::Obj(root).write(&mut out, 0);
        out.push('\n');
        out
    }
}

fn relation_node(r: &CoveringRelation) -> Node {
    let mut fields = vec![
        ("upper", Node::Str(r.upper.clone())),
        ("lower", Node::Str(r.lower.clone())),
    ];
    if r.slot != 0 {
        fields.push(("slot", Node::Num(r.slot.to_string())));
    }
    Node::Obj(fields)
}

fn numbers<'a>(values: impl Iterator<Item = &'a f64>) -> Node {
    Node::Arr(values.map(|&v| Node::Num(fmt_num(v))).collect())
}

/// Minimal JSON tree for deterministic pretty-printing.
enum Node {
    Obj(Vec<(&'static str, Node)>),
    Map(Vec<(String, Node)>),
    Arr(Vec<Node>),
    Str(String),
    Num(String),
}

impl Node {
    fn is_scalar(&self) -> bool {
        matches!(self, Node::Str(_) | Node::Num(_))
    }

    /// Short enough to print on one line.
    fn is_flat(&self) -> bool {
        match self {
            Node::Str(_) | Node::Num(_) => true,
            Node::Arr(items) => items.iter().all(Node::is_scalar),
            Node::Obj(fields) => fields.iter().all(|(_, v)| v.is_scalar()),
            Node::Map(_) => false,
        }
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Node::Str(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
            Node::Num(n) => out.push_str(n),
            Node::Arr(items) if self.is_flat() || items.is_empty() => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Node::Arr(items) => {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
            Node::Obj(fields) if self.is_flat() && indent > 0 => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "\"{k}\": ");
                    v.write(out, indent);
                }
                out.push('}');
            }
            Node::Obj(fields) => {
                let entries: Vec<(String, &Node)> =
                    fields.iter().map(|(k, v)| (k.to_string(), v)).collect();
                write_entries(out, &entries, indent);
            }
            Node::Map(fields) => {
                let entries: Vec<(String, &Node)> =
                    fields.iter().map(|(k, v)| (k.clone(), v)).collect();
                write_entries(out, &entries, indent);
            }
        }
    }
}

fn write_entries(out: &mut String, entries: &[(String, &Node)], indent: usize) {
    if entries.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for (i, (k, v)) in entries.iter().enumerate() {
        pad(out, indent + 1);
        out.push_str(&serde_json::to_string(k).expect("string encodes"));
        out.push_str(": ");
        v.write(out, indent + 1);
        out.push_str(if i + 1 < entries.len() { ",\n" } else { "\n" });
    }
    pad(out, indent);
    out.push('}');
}

fn pad(out: &mut String, indent: usize) {
    out.push_str(&"  ".repeat(indent));
}

pub fn parse_sheaf_document(text: &[u8], mode: ParseMode) -> Result<SheafDocument, DocumentError> {
    let value: Value = serde_json::from_slice(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Reader { mode }.document(&value)
}

struct Reader {
    mode: ParseMode,
}

impl Reader {
    fn object<'v>(
        &self,
        v: &'v Value,
        path: &str,
        allowed: &[&str],
    ) -> Result<&'v Map<String, Value>, DocumentError> {
        let obj = v.as_object().ok_or_else(|| invalid(path, "an object"))?;
        if self.mode == ParseMode::Strict {
            if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(DocumentError::UnknownField(format!("{path}.{k}")));
            }
        }
        Ok(obj)
    }

    fn document(&self, v: &Value) -> Result<SheafDocument, DocumentError> {
        let root = self.object(
            v,
            "$",
            &[
                "format_version",
                "description",
                "complex",
                "stalks",
                "maps",
                "sections",
                "interval",
            ],
        )?;
        let version = uint(required(root, "format_version", "$")?, "$.format_version")?;
        if version != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion(version));
        }
        let mut doc = SheafDocument {
            format_version: version,
            ..SheafDocument::default()
        };
        if let Some(d) = root.get("description") {
            doc.description = Some(string(d, "$.description")?);
        }
        if let Some(c) = root.get("complex") {
            self.complex(c, &mut doc)?;
        }
        if let Some(s) = root.get("stalks") {
            let obj = s
                .as_object()
                .ok_or_else(|| invalid("$.stalks", "an object"))?;
            for (id, dim) in obj {
                doc.stalks
                    .insert(id.clone(), uint(dim, &format!("$.stalks.{id}"))? as usize);
            }
        }
        if let Some(m) = root.get("maps") {
            self.maps(m, &mut doc)?;
        }
        if let Some(s) = root.get("sections") {
            let obj = s
                .as_object()
                .ok_or_else(|| invalid("$.sections", "an object"))?;
            for (name, entry) in obj {
                let path = format!("$.sections.{name}");
                let values = self.named_values(entry, &path)?;
                doc.sections.insert(name.clone(), values);
            }
        }
        if let Some(iv) = root.get("interval") {
            doc.interval = Some(self.interval(iv)?);
        }
        Ok(doc)
    }

    fn complex(&self, v: &Value, doc: &mut SheafDocument) -> Result<(), DocumentError> {
        let obj = self.object(v, "$.complex", &["cells", "relations"])?;
        if let Some(cells) = obj.get("cells") {
            for (i, c) in array(cells, "$.complex.cells")?.iter().enumerate() {
                let path = format!("$.complex.cells[{i}]");
                let cell = self.object(c, &path, &["id", "rank"])?;
                doc.cells.push(Cell::new(
                    string(required(cell, "id", &path)?, &format!("{path}.id"))?,
                    u32_field(required(cell, "rank", &path)?, &format!("{path}.rank"))?,
                ));
            }
        }
        if let Some(rels) = obj.get("relations") {
            for (i, r) in array(rels, "$.complex.relations")?.iter().enumerate() {
                let path = format!("$.complex.relations[{i}]");
                let rel = self.object(r, &path, &["upper", "lower", "slot"])?;
                doc.relations.push(relation(rel, &path)?);
            }
        }
        Ok(())
    }

    fn maps(&self, v: &Value, doc: &mut SheafDocument) -> Result<(), DocumentError> {
        for (i, entry) in array(v, "$.maps")?.iter().enumerate() {
            let path = format!("$.maps[{i}]");
            let obj = self.object(entry, &path, &["upper", "lower", "slot", "matrix"])?;
            let rel = relation(obj, &path)?;
            let mpath = format!("{path}.matrix");
            let rows = array(required(obj, "matrix", &path)?, &mpath)?;
            let mut data: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
            for (r, row) in rows.iter().enumerate() {
                data.push(number_vec(row, &format!("{mpath}[{r}]"))?);
            }
            let cols = match data.first() {
                Some(first) => first.len(),
                None => doc.stalks.get(&rel.upper).copied().unwrap_or(0),
            };
            if let Some((r, row)) = data.iter().enumerate().find(|(_, row)| row.len() != cols) {
                return Err(DocumentError::BadMatrixShape {
                    relation: rel.to_string(),
                    path: format!("{mpath}[{r}]"),
                    detail: format!("row has {} entries, expected {cols}", row.len()),
                });
            }
            let flat: Vec<f64> = data.into_iter().flatten().collect();
            let matrix = DMatrix::from_row_slice(rows.len(), cols, &flat);
            if doc.maps.insert(rel.clone(), matrix).is_some() {
                return Err(DocumentError::Duplicate {
                    path: "$.maps".into(),
                    key: rel.to_string(),
                });
            }
        }
        Ok(())
    }

    fn named_values(&self, v: &Value, path: &str) -> Result<NamedValues, DocumentError> {
        let obj = self.object(v, path, &["kind", "values"])?;
        let kind = string(required(obj, "kind", path)?, &format!("{path}.kind"))?;
        let vpath = format!("{path}.values");
        let values_obj = required(obj, "values", path)?
            .as_object()
            .ok_or_else(|| invalid(&vpath, "an object"))?;
        let mut values = BTreeMap::new();
        for (id, vec) in values_obj {
            let v = number_vec(vec, &format!("{vpath}.{id}"))?;
            values.insert(id.clone(), DVector::from_vec(v));
        }
        match kind.as_str() {
            "section" => Ok(NamedValues::Section(Section { values })),
            "assignment" => Ok(NamedValues::Assignment(NodeAssignment { values })),
            _ => Err(invalid(
                &format!("{path}.kind"),
                "\"section\" or \"assignment\"",
            )),
        }
    }

    fn interval(&self, v: &Value) -> Result<IntervalStanza, DocumentError> {
        let path = "$.interval";
        let obj = self.object(v, path, &["domain", "step", "intervals", "locals"])?;
        let domain = pair(required(obj, "domain", path)?, "$.interval.domain")?;
        let step = number(required(obj, "step", path)?, "$.interval.step")?;
        let mut intervals = Vec::new();
        for (i, iv) in array(required(obj, "intervals", path)?, "$.interval.intervals")?
            .iter()
            .enumerate()
        {
            intervals.push(pair(iv, &format!("$.interval.intervals[{i}]"))?);
        }
        let locals = match obj.get("locals") {
            None => None,
            Some(l) => Some(
                array(l, "$.interval.locals")?
                    .iter()
                    .enumerate()
                    .map(|(i, v)| number_vec(v, &format!("$.interval.locals[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
        };
        Ok(IntervalStanza {
            cover: GridCover::new(domain, step, intervals),
            locals,
        })
    }
}

fn invalid(path: &str, expected: &str) -> DocumentError {
    DocumentError::InvalidValue {
        path: path.to_string(),
        expected: expected.to_string(),
    }
}

fn required<'v>(
    obj: &'v Map<String, Value>,
    key: &str,
    path: &str,
) -> Result<&'v Value, DocumentError> {
    obj.get(key)
        .ok_or_else(|| DocumentError::MissingField(format!("{path}.{key}")))
}

fn relation(obj: &Map<String, Value>, path: &str) -> Result<CoveringRelation, DocumentError> {
    let slot = match obj.get("slot") {
        Some(s) => u32_field(s, &format!("{path}.slot"))?,
        None => 0,
    };
    Ok(CoveringRelation::with_slot(
        string(required(obj, "upper", path)?, &format!("{path}.upper"))?,
        string(required(obj, "lower", path)?, &format!("{path}.lower"))?,
        slot,
    ))
}

fn array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, DocumentError> {
    v.as_array().ok_or_else(|| invalid(path, "an array"))
}

fn string(v: &Value, path: &str) -> Result<String, DocumentError> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| invalid(path, "a string"))
}

fn uint(v: &Value, path: &str) -> Result<u64, DocumentError> {
    v.as_u64()
        .ok_or_else(|| invalid(path, "a non-negative integer"))
}

fn u32_field(v: &Value, path: &str) -> Result<u32, DocumentError> {
    u32::try_from(uint(v, path)?).map_err(|_| invalid(path, "an integer below 2^32"))
}

fn number(v: &Value, path: &str) -> Result<f64, DocumentError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| invalid(path, "a finite number"))
}

fn number_vec(v: &Value, path: &str) -> Result<Vec<f64>, DocumentError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

fn pair(v: &Value, path: &str) -> Result<(f64, f64), DocumentError> {
    match number_vec(v, path)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(invalid(path, "a pair of numbers")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIXED_EDGE: &str = r#"{
        "format_version": 1,
        "complex": {
            "cells": [{"id": "v1", "rank": 1}, {"id": "v2", "rank": 1}, {"id": "e12", "rank": 0}],
            "relations": [{"upper": "v1", "lower": "e12"}, {"upper": "v2", "lower": "e12"}]
        },
        "stalks": {"v1": 2, "v2": 3, "e12": 2},
        "maps": [
            {"upper": "v1", "lower": "e12", "matrix": [[1, -1], [0, -2]]},
            {"upper": "v2", "lower": "e12", "matrix": [[1, 0, 0], [0, 1, 0]]}
        ]
    }"#;

    fn strict(text: &str) -> Result<SheafDocument, DocumentError> {
        parse_sheaf_document(text.as_bytes(), ParseMode::Strict)
    }

    #[test]
    fn parses_mixed_edge() {
        let doc = strict(MIXED_EDGE).unwrap();
        assert_eq!(doc.cells.len(), 3);
        assert_eq!(doc.relations.len(), 2);
        assert_eq!(doc.stalks["v2"], 3);
        let m = &doc.maps[&CoveringRelation::new("v1", "e12")];
        assert_eq!(*m, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 0.0, -2.0]));
        assert!(doc.resolve().is_ok());
    }

    #[test]
    fn empty_document() {
        let doc = strict(r#"{"format_version": 1}"#).unwrap();
        assert_eq!(doc, SheafDocument::default());
        assert!(doc.resolve().unwrap().sheaf().complex().is_empty());
        assert_eq!(strict(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn ragged_matrix_names_relation() {
        let text = MIXED_EDGE.replace("[[1, -1], [0, -2]]", "[[1, -1], [0, -2, 5]]");
        match strict(&text).unwrap_err() {
            DocumentError::BadMatrixShape { relation, path, .. } => {
                assert_eq!(relation, "v1 > e12");
                assert_eq!(path, "$.maps[0].matrix[1]");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn strictness() {
        let text = MIXED_EDGE.replace("\"stalks\"", "\"colour\": 3, \"stalks\"");
        assert_eq!(
            strict(&text).unwrap_err(),
            DocumentError::UnknownField("$.colour".into())
        );
        assert!(parse_sheaf_document(text.as_bytes(), ParseMode::Lenient).is_ok());

        let text = MIXED_EDGE.replace(
            "{\"id\": \"v2\", \"rank\": 1}",
            "{\"id\": \"v2\", \"rnk\": 1}",
        );
        assert_eq!(
            strict(&text).unwrap_err(),
            DocumentError::UnknownField("$.complex.cells[1].rnk".into())
        );
        assert_eq!(
            parse_sheaf_document(text.as_bytes(), ParseMode::Lenient).unwrap_err(),
            DocumentError::MissingField("$.complex.cells[1].rank".into())
        );
    }

    #[test]
    fn version_and_syntax() {
        assert_eq!(
            strict("{}").unwrap_err(),
            DocumentError::MissingField("$.format_version".into())
        );
        assert_eq!(
            strict(r#"{"format_version": 2}"#).unwrap_err(),
            DocumentError::UnsupportedVersion(2)
        );
        match strict("{\n  \"format_version\": 1,\n  oops\n}").unwrap_err() {
            DocumentError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn long_decimals_are_accepted() {
        let text = MIXED_EDGE.replace(
            "[[1, -1], [0, -2]]",
            "[[1.00000000000000000000001, -1], [0, -2]]",
        );
        let doc = strict(&text).unwrap();
        assert_eq!(doc.maps[&CoveringRelation::new("v1", "e12")][(0, 0)], 1.0);
    }

    #[test]
    fn duplicate_maps_are_rejected() {
        let text = MIXED_EDGE.replace(
            "\"maps\": [",
            "\"maps\": [{\"upper\": \"v1\", \"lower\": \"e12\", \"matrix\": [[0, 0], [0, 0]]},",
        );
        assert!(matches!(
            strict(&text),
            Err(DocumentError::Duplicate { .. })
        ));
    }

    #[test]
    fn zero_row_matrix_takes_upper_dim() {
        let text = r#"{"format_version": 1,
            "complex": {"cells": [{"id": "a", "rank": 1}, {"id": "e", "rank": 0}],
                        "relations": [{"upper": "a", "lower": "e"}]},
            "stalks": {"a": 3, "e": 0},
            "maps": [{"upper": "a", "lower": "e", "matrix": []}]}"#;
        let doc = strict(text).unwrap();
        assert_eq!(doc.maps[&CoveringRelation::new("a", "e")].shape(), (0, 3));
        assert_eq!(strict(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn serialization_round_trip() {
        let mut doc = strict(MIXED_EDGE).unwrap();
        doc.description = Some("edge \"e12\"".into());
        doc.relations
            .push(CoveringRelation::with_slot("v1", "e12", 1));
        doc.sections.insert(
            "s".into(),
            NamedValues::Section([("v1", vec![2.0, 1.0])].into_iter().collect()),
        );
        doc.sections.insert(
            "a".into(),
            NamedValues::Assignment([("v1", vec![0.125])].into_iter().collect()),
        );
        doc.interval = Some(IntervalStanza {
            cover: GridCover::new((0.0, 1.0), 0.25, vec![(0.0, 0.6), (0.4, 1.0)]),
            locals: Some(vec![vec![0.25, 0.5], vec![0.5, 0.75]]),
        });
        let text = doc.to_json();
        let again = strict(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_json(), text);
    }
}
