//! JSON and XML snapshot files.
//!
//! Writers always emit the canonical form: fixed key order, declarations sorted by
//! name, occurrences sorted by (type, element). Readers accept any order.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{AnnotationTypeDecl, AnnotationUse, Occurrence, ParamValue, Params, Snapshot};
use crate::path::ElementPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotFormat {
    Json,
    Xml,
}

impl SnapshotFormat {
    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(SnapshotFormat::Json),
            "xml" => Some(SnapshotFormat::Xml),
            _ => None,
        }
    }

    fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('<') {
            SnapshotFormat::Xml
        } else {
            SnapshotFormat::Json
        }
    }
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("cannot read {}", path.display()), e))?;
    let format = SnapshotFormat::from_extension(path).unwrap_or_else(|| SnapshotFormat::sniff(&text));
    let parsed = match format {
        SnapshotFormat::Json => from_json(&text),
        SnapshotFormat::Xml => from_xml(&text),
    };
    parsed.map_err(|e| with_file(e, path))
}

pub fn write_snapshot(snapshot: &Snapshot, path: &Path, format: SnapshotFormat) -> Result<()> {
    let text = match format {
        SnapshotFormat::Json => to_json(snapshot),
        SnapshotFormat::Xml => to_xml(snapshot),
    };
    fs::write(path, text).map_err(|e| Error::io(format!("cannot write {}", path.display()), e))
}

pub(crate) fn with_file(err: Error, path: &Path) -> Error {
    match err {
        Error::Parse {
            file: None,
            line,
            column,
            message,
        } => Error::Parse {
            file: Some(PathBuf::from(path)),
            line,
            column,
            message,
        },
        other => other,
    }
}

// ---------------------------------------------------------------- JSON

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotWire {
    annotator: String,
    project: String,
    #[serde(rename = "annotationTypes")]
    annotation_types: Vec<DeclWire>,
    occurrences: Vec<OccurrenceWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeclWire {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    doc: Option<String>,
    #[serde(default)]
    meta: Vec<UseWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UseWire {
    #[serde(rename = "type")]
    type_name: String,
    #[serde(default)]
    params: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OccurrenceWire {
    #[serde(rename = "type")]
    type_name: String,
    element: String,
    #[serde(default)]
    params: BTreeMap<String, Value>,
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => Error::Validation(e.to_string()),
        _ => Error::Parse {
            file: None,
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

/// JSON encoding of a parameter value. Enum constants and nested annotations are
/// tagged objects so every variant round-trips.
pub fn param_to_json(value: &ParamValue) -> Value {
    match value {
        ParamValue::Bool(b) => Value::Bool(*b),
        ParamValue::Int(i) => Value::from(*i),
        ParamValue::Decimal(d) => serde_json::Number::from_f64(*d)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(d.to_string())),
        ParamValue::Str(s) => Value::String(s.clone()),
        ParamValue::Enum(e) => serde_json::json!({ "enum": e }),
        ParamValue::Array(items) => Value::Array(items.iter().map(param_to_json).collect()),
        ParamValue::Annotation(a) => serde_json::json!({ "annotation": use_to_json(a) }),
    }
}

fn params_to_json(params: &Params) -> BTreeMap<String, Value> {
    params
        .iter()
        .map(|(k, v)| (k.clone(), param_to_json(v)))
        .collect()
}

fn use_to_json(u: &AnnotationUse) -> Value {
    serde_json::to_value(UseWire {
        type_name: u.type_name.clone(),
        params: params_to_json(&u.params),
    })
    .expect("annotation use serializes")
}

pub fn param_from_json(value: &Value) -> Result<ParamValue> {
    let bad = || Error::Validation(format!("unsupported parameter value {value}"));
    Ok(match value {
        Value::Bool(b) => ParamValue::Bool(*b),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                if n.is_f64() {
                    ParamValue::Decimal(n.as_f64().ok_or_else(bad)?)
                } else {
                    ParamValue::Int(i)
                }
            } else {
                ParamValue::Decimal(n.as_f64().ok_or_else(bad)?)
            }
        }
        Value::String(s) => ParamValue::Str(s.clone()),
        Value::Array(items) => {
            ParamValue::Array(items.iter().map(param_from_json).collect::<Result<_>>()?)
        }
        Value::Object(map) if map.len() == 1 => {
            if let Some(Value::String(e)) = map.get("enum") {
                ParamValue::Enum(e.clone())
            } else if let Some(a) = map.get("annotation") {
                let wire: UseWire = serde_json::from_value(a.clone()).map_err(json_error)?;
                ParamValue::Annotation(Box::new(use_from_wire(wire)?))
            } else {
                return Err(bad());
            }
        }
        _ => return Err(bad()),
    })
}

fn params_from_json(map: BTreeMap<String, Value>) -> Result<Params> {
    map.into_iter()
        .map(|(k, v)| Ok((k, param_from_json(&v)?)))
        .collect()
}

fn use_from_wire(wire: UseWire) -> Result<AnnotationUse> {
    Ok(AnnotationUse {
        type_name: wire.type_name,
        params: params_from_json(wire.params)?,
    })
}

pub fn to_json(snapshot: &Snapshot) -> String {
    let s = snapshot.clone().canonical();
    let wire = SnapshotWire {
        annotator: s.annotator,
        project: s.project,
        annotation_types: s
            .annotation_types
            .iter()
            .map(|d| DeclWire {
                name: d.name.clone(),
                doc: d.doc.clone(),
                meta: d
                    .meta
                    .iter()
                    .map(|m| UseWire {
                        type_name: m.type_name.clone(),
                        params: params_to_json(&m.params),
                    })
                    .collect(),
            })
            .collect(),
        occurrences: s
            .occurrences
            .iter()
            .map(|o| OccurrenceWire {
                type_name: o.type_name.clone(),
                element: o.element.to_string(),
                params: params_to_json(&o.params),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&wire).expect("snapshot serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<Snapshot> {
    let wire: SnapshotWire = serde_json::from_str(text).map_err(json_error)?;
    let annotation_types = wire
        .annotation_types
        .into_iter()
        .map(|d| {
            Ok(AnnotationTypeDecl {
                name: d.name,
                doc: d.doc,
                meta: d.meta.into_iter().map(use_from_wire).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    let occurrences = wire
        .occurrences
        .into_iter()
        .map(|o| {
            Ok(Occurrence {
                type_name: o.type_name,
                element: ElementPath::parse(&o.element)?,
                params: params_from_json(o.params)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Snapshot {
        annotator: wire.annotator,
        project: wire.project,
        annotation_types,
        occurrences,
    })
}

// ---------------------------------------------------------------- XML

pub fn to_xml(snapshot: &Snapshot) -> String {
    let s = snapshot.clone().canonical();
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<snapshot annotator=\"{}\" project=\"{}\">\n",
        escape(&s.annotator),
        escape(&s.project)
    ));
    for decl in &s.annotation_types {
        let name = escape(&decl.name);
        if decl.doc.is_none() && decl.meta.is_empty() {
            out.push_str(&format!("  <annotationType name=\"{name}\"/>\n"));
            continue;
        }
        out.push_str(&format!("  <annotationType name=\"{name}\">\n"));
        if let Some(doc) = &decl.doc {
            out.push_str(&format!("    <doc>{}</doc>\n", escape(doc)));
        }
        for meta in &decl.meta {
            write_use_xml(&mut out, "meta", meta, 4);
        }
        out.push_str("  </annotationType>\n");
    }
    for occ in &s.occurrences {
        let head = format!(
            "  <occurrence type=\"{}\" element=\"{}\"",
            escape(&occ.type_name),
            escape(occ.element.as_str())
        );
        if occ.params.is_empty() {
            out.push_str(&head);
            out.push_str("/>\n");
        } else {
            out.push_str(&head);
            out.push_str(">\n");
            write_params_xml(&mut out, &occ.params, 4);
            out.push_str("  </occurrence>\n");
        }
    }
    out.push_str("</snapshot>\n");
    out
}

fn write_use_xml(out: &mut String, tag: &str, u: &AnnotationUse, indent: usize) {
    let pad = " ".repeat(indent);
    if u.params.is_empty() {
        out.push_str(&format!("{pad}<{tag} type=\"{}\"/>\n", escape(&u.type_name)));
    } else {
        out.push_str(&format!("{pad}<{tag} type=\"{}\">\n", escape(&u.type_name)));
        write_params_xml(out, &u.params, indent + 2);
        out.push_str(&format!("{pad}</{tag}>\n"));
    }
}

fn write_params_xml(out: &mut String, params: &Params, indent: usize) {
    let pad = " ".repeat(indent);
    for (name, value) in params {
        out.push_str(&format!("{pad}<param name=\"{}\">", escape(name)));
        write_value_xml(out, value, indent);
        out.push_str("</param>\n");
    }
}

fn write_value_xml(out: &mut String, value: &ParamValue, indent: usize) {
    match value {
        ParamValue::Bool(b) => out.push_str(&format!("<bool>{b}</bool>")),
        ParamValue::Int(i) => out.push_str(&format!("<int>{i}</int>")),
        ParamValue::Decimal(d) => out.push_str(&format!("<decimal>{d:?}</decimal>")),
        ParamValue::Str(s) => out.push_str(&format!("<string>{}</string>", escape(s))),
        ParamValue::Enum(e) => out.push_str(&format!("<enum>{}</enum>", escape(e))),
        ParamValue::Array(items) => {
            out.push_str("<array>");
            for item in items {
                write_value_xml(out, item, indent);
            }
            out.push_str("</array>");
        }
        ParamValue::Annotation(a) => {
            out.push('\n');
            write_use_xml(out, "annotation", a, indent + 2);
            out.push_str(&" ".repeat(indent));
        }
    }
}

#[derive(Debug, Default)]
struct XmlNode {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<XmlNode>,
    text: String,
    offset: usize,
}

impl XmlNode {
    fn attr(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, column)
}

fn xml_parse_error(text: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = line_col(text, offset);
    Error::Parse {
        file: None,
        line,
        column,
        message: message.into(),
    }
}

fn start_node(text: &str, e: &BytesStart, offset: usize) -> Result<XmlNode> {
    let mut node = XmlNode {
        name: String::from_utf8_lossy(e.name().as_ref()).into_owned(),
        offset,
        ..Default::default()
    };
    for attr in e.attributes() {
        let attr = attr.map_err(|err| xml_parse_error(text, offset, err.to_string()))?;
        let value = attr
            .unescape_value()
            .map_err(|err| xml_parse_error(text, offset, err.to_string()))?;
        node.attrs.push((
            String::from_utf8_lossy(attr.key.as_ref()).into_owned(),
            value.into_owned(),
        ));
    }
    Ok(node)
}

fn parse_dom(text: &str) -> Result<XmlNode> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(false);
    let mut stack: Vec<XmlNode> = Vec::new();
    let mut root: Option<XmlNode> = None;
    loop {
        let offset = reader.buffer_position() as usize;
        let event = reader.read_event().map_err(|e| {
            xml_parse_error(text, reader.error_position() as usize, e.to_string())
        })?;
        match event {
            Event::Start(e) => stack.push(start_node(text, &e, offset)?),
            Event::Empty(e) => {
                let node = start_node(text, &e, offset)?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None if root.is_none() => root = Some(node),
                    None => return Err(xml_parse_error(text, offset, "multiple root elements")),
                }
            }
            Event::End(_) => {
                let node = stack
                    .pop()
                    .ok_or_else(|| xml_parse_error(text, offset, "unexpected end tag"))?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => root = Some(node),
                }
            }
            Event::Text(t) => {
                if let Some(node) = stack.last_mut() {
                    let s = t
                        .unescape()
                        .map_err(|e| xml_parse_error(text, offset, e.to_string()))?;
                    node.text.push_str(&s);
                } else if !t.iter().all(u8::is_ascii_whitespace) {
                    return Err(xml_parse_error(text, offset, "text outside the root element"));
                }
            }
            Event::CData(c) => {
                if let Some(node) = stack.last_mut() {
                    node.text.push_str(&String::from_utf8_lossy(&c));
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if let Some(open) = stack.last() {
        return Err(xml_parse_error(
            text,
            text.len(),
            format!("unexpected end of file inside <{}>", open.name),
        ));
    }
    root.ok_or_else(|| xml_parse_error(text, text.len(), "empty document"))
}

fn require_attr<'a>(node: &'a XmlNode, key: &str) -> Result<&'a str> {
    node.attr(key).ok_or_else(|| {
        Error::Validation(format!(
            "<{}> at byte {} is missing attribute `{key}`",
            node.name, node.offset
        ))
    })
}

fn unexpected(node: &XmlNode, parent: &str) -> Error {
    Error::Validation(format!(
        "unexpected <{}> inside <{parent}> at byte {}",
        node.name, node.offset
    ))
}

fn params_from_xml(node: &XmlNode, skip: &[&str]) -> Result<Params> {
    let mut params = Params::new();
    for child in &node.children {
        if skip.contains(&child.name.as_str()) {
            continue;
        }
        if child.name != "param" {
            return Err(unexpected(child, &node.name));
        }
        let name = require_attr(child, "name")?.to_string();
        let mut values = child.children.iter();
        let value = match (values.next(), values.next()) {
            (Some(v), None) => value_from_xml(v)?,
            _ => {
                return Err(Error::Validation(format!(
                    "<param name=\"{name}\"> must hold exactly one value"
                )))
            }
        };
        if params.insert(name.clone(), value).is_some() {
            return Err(Error::Validation(format!("duplicate parameter `{name}`")));
        }
    }
    Ok(params)
}

fn value_from_xml(node: &XmlNode) -> Result<ParamValue> {
    let invalid = |what: &str| {
        Error::Validation(format!(
            "invalid {what} value {:?} at byte {}",
            node.text, node.offset
        ))
    };
    Ok(match node.name.as_str() {
        "bool" => match node.text.trim() {
            "true" => ParamValue::Bool(true),
            "false" => ParamValue::Bool(false),
            _ => return Err(invalid("bool")),
        },
        "int" => ParamValue::Int(node.text.trim().parse().map_err(|_| invalid("int"))?),
        "decimal" => {
            ParamValue::Decimal(node.text.trim().parse().map_err(|_| invalid("decimal"))?)
        }
        "string" => ParamValue::Str(node.text.clone()),
        "enum" => ParamValue::Enum(node.text.trim().to_string()),
        "array" => ParamValue::Array(
            node.children
                .iter()
                .map(value_from_xml)
                .collect::<Result<_>>()?,
        ),
        "annotation" => ParamValue::Annotation(Box::new(AnnotationUse {
            type_name: require_attr(node, "type")?.to_string(),
            params: params_from_xml(node, &[])?,
        })),
        _ => return Err(invalid("parameter")),
    })
}

pub fn from_xml(text: &str) -> Result<Snapshot> {
    let root = parse_dom(text)?;
    if root.name != "snapshot" {
        return Err(Error::Validation(format!(
            "root element must be <snapshot>, found <{}>",
            root.name
        )));
    }
    let mut snapshot = Snapshot::new(require_attr(&root, "annotator")?, require_attr(&root, "project")?);
    for child in &root.children {
        match child.name.as_str() {
            "annotationType" => {
                let mut decl = AnnotationTypeDecl {
                    name: require_attr(child, "name")?.to_string(),
                    doc: None,
                    meta: Vec::new(),
                };
                for part in &child.children {
                    match part.name.as_str() {
                        "doc" => decl.doc = Some(part.text.clone()),
                        "meta" => decl.meta.push(AnnotationUse {
                            type_name: require_attr(part, "type")?.to_string(),
                            params: params_from_xml(part, &[])?,
                        }),
                        _ => return Err(unexpected(part, "annotationType")),
                    }
                }
                snapshot.annotation_types.push(decl);
            }
            "occurrence" => snapshot.occurrences.push(Occurrence {
                type_name: require_attr(child, "type")?.to_string(),
                element: ElementPath::parse(require_attr(child, "element")?)?,
                params: params_from_xml(child, &[])?,
            }),
            _ => return Err(unexpected(child, "snapshot")),
        }
    }
    Ok(snapshot)
}
