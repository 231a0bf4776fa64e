//! Brace-depth declaration scanner.

use serde::Serialize;

use crate::model::AnnotationUse;
use crate::path::ElementPath;

use super::annotation::{annotation_use, is_primitive, Cursor, Parsed, SyntaxError};
use super::lexer::{tokenize_lossy, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum DeclKind {
    PackageDecl,
    TypeDecl,
    AnnotationTypeDecl,
    FieldDecl,
    MethodDecl,
}

/// An annotation use with the position of its `@`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedAnnotation {
    pub annotation: AnnotationUse,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeclEvent {
    pub kind: DeclKind,
    pub path: ElementPath,
    pub annotations: Vec<PlacedAnnotation>,
    pub doc: Option<String>,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanOutput {
    pub events: Vec<DeclEvent>,
    pub warnings: Vec<SyntaxError>,
}

const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default",
];

struct Prefix {
    doc: Option<String>,
    annotations: Vec<PlacedAnnotation>,
}

struct Scanner<'s> {
    cur: Cursor<'s>,
    package: String,
    out: ScanOutput,
}

/// Text of a doc comment without delimiters and leading asterisks.
pub fn clean_doc(raw: &str) -> String {
    let inner = raw
        .strip_prefix("/**")
        .unwrap_or(raw)
        .strip_suffix("*/")
        .unwrap_or(raw);
    let lines: Vec<&str> = inner
        .lines()
        .map(|l| {
            let l = l.trim();
            let l = l.strip_prefix('*').unwrap_or(l);
            l.strip_prefix(' ').unwrap_or(l).trim_end()
        })
        .collect();
    let first = lines.iter().position(|l| !l.is_empty());
    let last = lines.iter().rposition(|l| !l.is_empty());
    match (first, last) {
        (Some(f), Some(l)) => lines[f..=l].join("\n"),
        _ => String::new(),
    }
}

impl<'s> Scanner<'s> {
    fn warn(&mut self, e: SyntaxError) {
        self.out.warnings.push(e);
    }

    fn emit(&mut self, kind: DeclKind, path: ElementPath, prefix: &Prefix, at: (usize, usize)) {
        self.out.events.push(DeclEvent {
            kind,
            path,
            annotations: prefix.annotations.clone(),
            doc: prefix.doc.clone(),
            line: at.0,
            col: at.1,
        });
    }

    fn here(&self) -> (usize, usize) {
        let e = self.cur.error_here("");
        (e.line, e.col)
    }

    fn at_modifier(&self) -> bool {
        match self.cur.peek() {
            Some(t) if t.kind == TokenKind::Keyword => MODIFIERS.contains(&t.text),
            Some(t) if t.kind == TokenKind::Identifier => {
                let next = self.cur.peek_nth(1);
                let decl_follows = next.is_some_and(|n| {
                    n.kind == TokenKind::Keyword || n.kind == TokenKind::Identifier || n.kind == TokenKind::At
                });
                (t.text == "sealed" && decl_follows)
                    || (t.text == "non"
                        && next.is_some_and(|n| n.is_punct("-"))
                        && self.cur.peek_nth(2).is_some_and(|n| n.text == "sealed"))
            }
            _ => false,
        }
    }

    /// Doc comment, annotations and modifiers before a declaration.
    fn prefix(&mut self) -> Prefix {
        let mut p = Prefix {
            doc: None,
            annotations: Vec::new(),
        };
        loop {
            match self.cur.peek_raw() {
                Some(t) if t.kind == TokenKind::DocComment => {
                    p.doc = Some(clean_doc(t.text));
                    self.cur.next_raw();
                }
                Some(t) if t.kind == TokenKind::At => {
                    if self.cur.peek_nth(1).is_some_and(|n| n.is_keyword("interface")) {
                        break;
                    }
                    let (line, col) = (t.line, t.col);
                    match annotation_use(&mut self.cur) {
                        Ok(annotation) => p.annotations.push(PlacedAnnotation {
                            annotation,
                            line,
                            col,
                        }),
                        Err(e) => {
                            self.warn(SyntaxError {
                                message: format!("skipping malformed annotation: {}", e.message),
                                ..e
                            });
                            self.recover_annotation();
                        }
                    }
                }
                Some(_) if self.at_modifier() => {
                    if self.cur.peek().is_some_and(|t| t.text == "non") {
                        self.cur.next();
                        self.cur.next();
                    }
                    self.cur.next();
                }
                _ => break,
            }
        }
        p
    }

    /// After a failed annotation: skips the rest of its argument list, if any.
    fn recover_annotation(&mut self) {
        // the failure point is inside or right after the arguments; scan to the
        // `)` closing them without leaving the enclosing body
        let mut depth = 0usize;
        while let Some(t) = self.cur.peek() {
            if t.kind == TokenKind::Punct {
                match t.text {
                    "(" | "{" | "[" => depth += 1,
                    ")" if depth == 0 => {
                        self.cur.next();
                        return;
                    }
                    "}" | "]" if depth == 0 => return,
                    ";" if depth == 0 => return,
                    ")" | "}" | "]" => depth -= 1,
                    _ => {}
                }
            } else if depth == 0 && t.kind == TokenKind::At {
                return;
            }
            self.cur.next();
        }
    }

    fn at_type_start(&self) -> bool {
        match self.cur.peek() {
            Some(t) if t.is_keyword("class") || t.is_keyword("interface") || t.is_keyword("enum") => true,
            Some(t) if t.kind == TokenKind::At => {
                self.cur.peek_nth(1).is_some_and(|n| n.is_keyword("interface"))
            }
            Some(t) if t.kind == TokenKind::Identifier && t.text == "record" => {
                self.cur.peek_nth(1).is_some_and(|n| n.kind == TokenKind::Identifier)
                    && self
                        .cur
                        .peek_nth(2)
                        .is_some_and(|n| n.is_punct("(") || n.is_punct("<"))
            }
            _ => false,
        }
    }

    /// Skips the remainder of a declaration that could not be understood:
    /// through the next `;` or block at this depth, never past a closing `}`.
    fn recover_declaration(&mut self) {
        while let Some(t) = self.cur.peek() {
            if t.is_punct(";") {
                self.cur.next();
                return;
            }
            if t.is_punct("}") {
                return;
            }
            if t.is_punct("{") {
                let _ = self.cur.skip_block();
                return;
            }
            self.cur.next();
        }
    }

    fn file(&mut self) {
        loop {
            let prefix = self.prefix();
            let Some(t) = self.cur.peek().cloned() else {
                if !prefix.annotations.is_empty() {
                    self.warn(self.cur.error_here("annotations not attached to a declaration"));
                }
                return;
            };
            if t.is_keyword("package") {
                self.package_decl(prefix);
            } else if t.is_keyword("import") {
                self.recover_declaration();
            } else if t.is_punct(";") {
                self.cur.next();
            } else if self.at_type_start() {
                self.type_decl(None, prefix);
            } else {
                self.warn(self.cur.error_here(format!(
                    "skipping unexpected {} at top level",
                    self.cur.describe()
                )));
                if t.is_punct("}") {
                    self.cur.next();
                } else {
                    self.recover_declaration();
                }
            }
        }
    }

    fn package_decl(&mut self, prefix: Prefix) {
        let at = self.here();
        self.cur.next();
        let parsed = self.cur.qualified_name().and_then(|name| {
            self.cur.expect_punct(";")?;
            Ok(name)
        });
        match parsed {
            Ok(name) => {
                match ElementPath::package(&name) {
                    Ok(path) => self.emit(DeclKind::PackageDecl, path, &prefix, at),
                    Err(e) => self.warn(SyntaxError {
                        line: at.0,
                        col: at.1,
                        message: e.to_string(),
                    }),
                }
                self.package = name;
            }
            Err(e) => {
                self.warn(e);
                self.recover_declaration();
            }
        }
    }

    fn type_decl(&mut self, owner: Option<&ElementPath>, prefix: Prefix) {
        let at = self.here();
        let keyword = self.cur.next().expect("type keyword");
        let (kind, is_enum, is_record) = if keyword.kind == TokenKind::At {
            self.cur.next();
            (DeclKind::AnnotationTypeDecl, false, false)
        } else {
            (DeclKind::TypeDecl, keyword.text == "enum", keyword.text == "record")
        };
        let name = match self.cur.expect_identifier() {
            Ok(n) => n,
            Err(e) => {
                self.warn(e);
                self.recover_declaration();
                return;
            }
        };
        let path = match owner {
            Some(o) => ElementPath::nested_type(o, name),
            None => ElementPath::top_level_type(&self.package, name),
        };
        let path = match path {
            Ok(p) => p,
            Err(e) => {
                self.warn(SyntaxError {
                    line: at.0,
                    col: at.1,
                    message: e.to_string(),
                });
                self.recover_declaration();
                return;
            }
        };
        self.emit(kind, path.clone(), &prefix, at);

        if is_record {
            if self.cur.at_punct("<") && self.cur.skip_angle().is_err() {
                self.warn(self.cur.error_here("malformed record type parameters"));
            }
            if self.cur.at_punct("(") {
                self.record_components(&path);
            }
        }
        // header: type parameters, extends, implements, permits
        while let Some(t) = self.cur.peek() {
            if t.is_punct("{") {
                break;
            }
            if t.is_punct(";") || t.is_punct("}") {
                self.warn(self.cur.error_here(format!("expected body of type {name}")));
                return;
            }
            if t.is_punct("(") && self.cur.skip_balanced().is_err() {
                self.warn(self.cur.error_here("unbalanced type header"));
                return;
            }
            self.cur.next();
        }
        if self.cur.at_end() {
            self.warn(self.cur.error_here(format!("expected body of type {name}")));
            return;
        }
        self.cur.next();
        if is_enum {
            self.enum_constants(&path);
        }
        self.body(&path);
    }

    fn record_components(&mut self, owner: &ElementPath) {
        let at = self.here();
        match self.parameter_list() {
            Ok(params) => {
                for p in params {
                    match ElementPath::field(owner, &p.name) {
                        Ok(path) => {
                            let prefix = Prefix {
                                doc: None,
                                annotations: p.annotations,
                            };
                            self.emit(DeclKind::FieldDecl, path, &prefix, p.at);
                        }
                        Err(e) => self.warn(SyntaxError {
                            line: at.0,
                            col: at.1,
                            message: e.to_string(),
                        }),
                    }
                }
            }
            Err(e) => self.warn(e),
        }
    }

    fn enum_constants(&mut self, owner: &ElementPath) {
        loop {
            let prefix = self.prefix();
            let Some(t) = self.cur.peek().cloned() else {
                return;
            };
            if t.is_punct(";") {
                self.cur.next();
                return;
            }
            if t.is_punct("}") {
                return;
            }
            if t.is_punct(",") {
                self.cur.next();
                continue;
            }
            if t.kind != TokenKind::Identifier {
                self.warn(self.cur.error_here(format!(
                    "unexpected {} in enum constants",
                    self.cur.describe()
                )));
                return;
            }
            self.cur.next();
            match ElementPath::field(owner, t.text) {
                Ok(path) => self.emit(DeclKind::FieldDecl, path, &prefix, (t.line, t.col)),
                Err(e) => self.warn(SyntaxError {
                    line: t.line,
                    col: t.col,
                    message: e.to_string(),
                }),
            }
            if self.cur.at_punct("(") && self.cur.skip_balanced().is_err() {
                self.warn(self.cur.error_here("unbalanced enum constant arguments"));
                return;
            }
            if self.cur.at_punct("{") && self.cur.skip_block().is_err() {
                self.warn(self.cur.error_here("unterminated enum constant body"));
                return;
            }
        }
    }

    fn body(&mut self, owner: &ElementPath) {
        loop {
            let prefix = self.prefix();
            let Some(t) = self.cur.peek().cloned() else {
                self.warn(self.cur.error_here(format!(
                    "end of input inside body of {owner}"
                )));
                return;
            };
            if t.is_punct("}") {
                if !prefix.annotations.is_empty() {
                    self.warn(self.cur.error_here("annotations not attached to a declaration"));
                }
                self.cur.next();
                return;
            }
            if t.is_punct(";") {
                self.cur.next();
            } else if t.is_punct("{") {
                if self.cur.skip_block().is_err() {
                    self.warn(self.cur.error_here("unterminated initializer block"));
                }
            } else if self.at_type_start() {
                self.type_decl(Some(owner), prefix);
            } else {
                let start = self.cur.pos;
                if let Err(e) = self.member(owner, &prefix) {
                    self.warn(SyntaxError {
                        message: format!("skipping unparseable declaration: {}", e.message),
                        ..e
                    });
                    if self.cur.pos == start && !self.cur.at_punct("}") {
                        self.cur.next();
                    }
                    self.recover_declaration();
                }
            }
        }
    }

    fn member(&mut self, owner: &ElementPath, prefix: &Prefix) -> Parsed<()> {
        let compact_constructor = self.cur.peek().is_some_and(|t| {
            t.kind == TokenKind::Identifier && owner.member_name().is_none() && owner.as_str().ends_with(t.text)
        }) && self.cur.peek_nth(1).is_some_and(|t| t.is_punct("{"));
        if compact_constructor {
            if !prefix.annotations.is_empty() {
                self.warn(self.cur.error_here("annotations on a compact constructor are ignored"));
            }
            self.cur.next();
            return self.cur.skip_block();
        }
        if self.cur.at_punct("<") {
            self.cur.skip_angle()?;
        }
        let starts_method = self.cur.peek().is_some_and(|t| t.kind == TokenKind::Identifier)
            && self.cur.peek_nth(1).is_some_and(|t| t.is_punct("("));
        if !starts_method {
            self.type_ref()?;
        }
        let name_tok = self.cur.peek().cloned();
        let name = self.cur.expect_identifier()?;
        let at = name_tok.map_or((0, 0), |t| (t.line, t.col));
        if self.cur.at_punct("(") {
            self.method(owner, name, prefix, at)
        } else {
            self.fields(owner, name, prefix, at)
        }
    }

    /// Consumes a type reference and renders it as a simple name with array
    /// suffixes: `java.util.List<String>[]` becomes `List[]`.
    fn type_ref(&mut self) -> Parsed<String> {
        // type annotations such as `@NonNull String`
        while self.cur.peek().is_some_and(|t| t.kind == TokenKind::At) {
            annotation_use(&mut self.cur)?;
        }
        let base = match self.cur.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let q = self.cur.qualified_name()?;
                q.rsplit('.').next().unwrap_or(&q).to_string()
            }
            Some(t) if t.kind == TokenKind::Keyword && (is_primitive(t.text) || t.text == "void") => {
                let s = t.text.to_string();
                self.cur.next();
                s
            }
            _ => return Err(self.cur.error_here(format!("expected type, found {}", self.cur.describe()))),
        };
        let mut rendered = base;
        loop {
            if self.cur.at_punct("<") {
                self.cur.skip_angle()?;
            } else if self.cur.at_punct(".")
                && self.cur.peek_nth(1).is_some_and(|t| t.kind == TokenKind::Identifier)
            {
                // Outer<T>.Inner
                self.cur.next();
                rendered = self.cur.expect_identifier()?.to_string();
            } else if self.cur.at_punct("[") && self.cur.peek_nth(1).is_some_and(|t| t.is_punct("]")) {
                self.cur.next();
                self.cur.next();
                rendered.push_str("[]");
            } else if self.cur.peek().is_some_and(|t| t.kind == TokenKind::At) {
                annotation_use(&mut self.cur)?;
            } else {
                return Ok(rendered);
            }
        }
    }

    fn method(&mut self, owner: &ElementPath, name: &str, prefix: &Prefix, at: (usize, usize)) -> Parsed<()> {
        let params = self.parameter_list()?;
        let types: Vec<String> = params.into_iter().map(|p| p.type_name).collect();
        let path = ElementPath::method(owner, name, &types).map_err(|e| SyntaxError {
            line: at.0,
            col: at.1,
            message: e.to_string(),
        })?;
        // trailer: dimensions, throws clause, then a body, `;` or `default` value
        loop {
            match self.cur.peek() {
                None => return Err(self.cur.error_here(format!("end of input after method {name}"))),
                Some(t) if t.is_punct("{") => {
                    self.emit(DeclKind::MethodDecl, path, prefix, at);
                    return self.cur.skip_block();
                }
                Some(t) if t.is_punct(";") => {
                    self.cur.next();
                    break;
                }
                Some(t) if t.is_keyword("default") => {
                    self.cur.next();
                    self.skip_to_semicolon()?;
                    break;
                }
                Some(t) if t.is_punct("}") => {
                    return Err(self.cur.error_here(format!("expected body of method {name}")));
                }
                Some(t) if t.is_punct("(") => self.cur.skip_balanced()?,
                Some(_) => {
                    self.cur.next();
                }
            }
        }
        self.emit(DeclKind::MethodDecl, path, prefix, at);
        Ok(())
    }

    fn skip_to_semicolon(&mut self) -> Parsed<()> {
        loop {
            match self.cur.peek() {
                None => return Err(self.cur.error_here("expected `;`")),
                Some(t) if t.is_punct(";") => {
                    self.cur.next();
                    return Ok(());
                }
                Some(t) if t.is_punct("}") => return Err(self.cur.error_here("expected `;`")),
                Some(t) if t.is_punct("(") || t.is_punct("{") || t.is_punct("[") => {
                    self.cur.skip_balanced()?
                }
                Some(_) => {
                    self.cur.next();
                }
            }
        }
    }

    /// At `(`: formal parameters up to the matching `)`.
    fn parameter_list(&mut self) -> Parsed<Vec<Parameter>> {
        self.cur.expect_punct("(")?;
        let mut params = Vec::new();
        if self.cur.at_punct(")") {
            self.cur.next();
            return Ok(params);
        }
        loop {
            let mut annotations = Vec::new();
            loop {
                match self.cur.peek() {
                    Some(t) if t.kind == TokenKind::At => {
                        let (line, col) = (t.line, t.col);
                        let annotation = annotation_use(&mut self.cur)?;
                        annotations.push(PlacedAnnotation { annotation, line, col });
                    }
                    Some(t) if t.is_keyword("final") => {
                        self.cur.next();
                    }
                    _ => break,
                }
            }
            let mut type_name = self.type_ref()?;
            if self.cur.at_punct("...") {
                self.cur.next();
                type_name.push_str("[]");
            }
            let at = self.here();
            let name = match self.cur.peek() {
                Some(t) if t.kind == TokenKind::Identifier => self.cur.expect_identifier()?.to_string(),
                // receiver parameter `Outer this`
                Some(t) if t.is_keyword("this") => {
                    self.cur.next();
                    String::new()
                }
                _ => {
                    return Err(self
                        .cur
                        .error_here(format!("expected parameter name, found {}", self.cur.describe())))
                }
            };
            while self.cur.at_punct("[") && self.cur.peek_nth(1).is_some_and(|t| t.is_punct("]")) {
                self.cur.next();
                self.cur.next();
                type_name.push_str("[]");
            }
            if !name.is_empty() {
                params.push(Parameter {
                    type_name,
                    name,
                    annotations,
                    at,
                });
            }
            if self.cur.at_punct(",") {
                self.cur.next();
                continue;
            }
            self.cur.expect_punct(")")?;
            return Ok(params);
        }
    }

    fn fields(&mut self, owner: &ElementPath, first: &str, prefix: &Prefix, at: (usize, usize)) -> Parsed<()> {
        let mut declarators = vec![(first.to_string(), at)];
        loop {
            while self.cur.at_punct("[") && self.cur.peek_nth(1).is_some_and(|t| t.is_punct("]")) {
                self.cur.next();
                self.cur.next();
            }
            if self.cur.at_punct("=") {
                self.cur.next();
                self.skip_initializer()?;
            }
            if self.cur.at_punct(",") {
                self.cur.next();
                let t = self.cur.peek().cloned();
                let name = self.cur.expect_identifier()?;
                declarators.push((name.to_string(), t.map_or(at, |t| (t.line, t.col))));
                continue;
            }
            self.cur.expect_punct(";")?;
            break;
        }
        for (name, pos) in declarators {
            let path = ElementPath::field(owner, &name).map_err(|e| SyntaxError {
                line: pos.0,
                col: pos.1,
                message: e.to_string(),
            })?;
            self.emit(DeclKind::FieldDecl, path, prefix, pos);
        }
        Ok(())
    }

    /// Skips an initializer expression up to the `;` or the `,` that starts
    /// another declarator.
    fn skip_initializer(&mut self) -> Parsed<()> {
        loop {
            match self.cur.peek() {
                None => return Err(self.cur.error_here("end of input in field initializer")),
                Some(t) if t.is_punct(";") => return Ok(()),
                Some(t) if t.is_punct("}") => {
                    return Err(self.cur.error_here("expected `;` after field initializer"))
                }
                Some(t) if t.is_punct(",") => {
                    let declarator = self.cur.peek_nth(1).is_some_and(|n| n.kind == TokenKind::Identifier)
                        && self.cur.peek_nth(2).is_some_and(|n| {
                            n.is_punct("=") || n.is_punct(",") || n.is_punct(";") || n.is_punct("[")
                        });
                    if declarator {
                        return Ok(());
                    }
                    self.cur.next();
                }
                Some(t) if t.is_punct("(") || t.is_punct("[") => self.cur.skip_balanced()?,
                Some(t) if t.is_punct("{") => self.cur.skip_block()?,
                Some(_) => {
                    self.cur.next();
                }
            }
        }
    }
}

struct Parameter {
    type_name: String,
    name: String,
    annotations: Vec<PlacedAnnotation>,
    at: (usize, usize),
}

/// Scans one compilation unit. Lexical and structural problems become
/// warnings; the scan itself never fails.
pub fn scan(source: &str) -> ScanOutput {
    let (tokens, lex_warnings) = tokenize_lossy(source);
    let tokens: Vec<Token<'_>> = tokens;
    let mut scanner = Scanner {
        cur: Cursor::new(tokens, source),
        package: String::new(),
        out: ScanOutput::default(),
    };
    scanner.out.warnings.extend(lex_warnings.into_iter().map(|w| SyntaxError {
        line: w.line,
        col: w.col,
        message: w.message,
    }));
    scanner.file();
    scanner.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ParamValue;

    fn paths(src: &str) -> Vec<(DeclKind, String, Vec<String>)> {
        scan(src)
            .events
            .into_iter()
            .map(|e| {
                (
                    e.kind,
                    e.path.to_string(),
                    e.annotations.into_iter().map(|a| a.annotation.type_name).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn method_without_return_type() {
        let src = "package app;\nclass Users {\n @Persistence @SecuredMethod(allowed={User.ADMIN}) public addNewUser(User user) { x(); }\n}";
        let out = scan(src);
        assert!(out.warnings.is_empty(), "{:?}", out.warnings);
        let m = &out.events[2];
        assert_eq!(m.path.as_str(), "app.Users#addNewUser(User)");
        assert_eq!(m.annotations.len(), 2);
        assert_eq!(
            m.annotations[1].annotation.params["allowed"],
            ParamValue::Array(vec![ParamValue::Enum("User.ADMIN".into())])
        );
    }

    #[test]
    fn doc_comment_before_annotated_class() {
        let src = "/**\n * The JPanel class.\n * Generic container.\n */\n@NotThreadSafe\npublic class JPanel extends JComponent implements Accessible {\n}";
        let out = scan(src);
        let e = &out.events[0];
        assert_eq!(e.path.as_str(), "JPanel");
        assert_eq!(e.doc.as_deref(), Some("The JPanel class.\nGeneric container."));
        assert_eq!(e.annotations[0].annotation.type_name, "NotThreadSafe");
    }

    #[test]
    fn nested_fields_and_parameters() {
        let src = r#"
package p;
public class Outer<T extends Comparable<T>> {
    @A private final java.util.Map<String, List<Integer>> map = new HashMap<String, List<Integer>>(), other;
    @B int a = 1, b[] = {1, 2};
    static class Inner {
        @C String field;
        @D <E> void set(final @Named("x") String s, int[] xs, Map<K, V> m, Object... rest) throws IOException {}
        @E Inner(int x) { this.x = x; }
    }
    interface Api { @F default int size() { return 0; } @G void run(); }
}"#;
        let got = paths(src);
        let names: Vec<&str> = got.iter().map(|(_, p, _)| p.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "p",
                "p.Outer",
                "p.Outer#map",
                "p.Outer#other",
                "p.Outer#a",
                "p.Outer#b",
                "p.Outer$Inner",
                "p.Outer$Inner#field",
                "p.Outer$Inner#set(String,int[],Map,Object[])",
                "p.Outer$Inner#Inner(int)",
                "p.Outer$Api",
                "p.Outer$Api#size()",
                "p.Outer$Api#run()",
            ]
        );
        assert_eq!(got[3].2, vec!["A"]);
        assert_eq!(got[5].2, vec!["B"]);
    }

    #[test]
    fn annotation_types_enums_records_and_packages() {
        let src = r#"
@Concerns
package easy.notes;
/** Marks dead code. */
@Retention(RetentionPolicy.SOURCE)
public @interface Unused {
    String reason() default "";
    String[] tags() default {"a", "b"};
}
enum Level { @Deprecated LOW, MEDIUM(2) { int x() { return 1; } }, HIGH; @X int weight; }
record Point(@Y int x, int y) { Point {} }
"#;
        let out = scan(src);
        assert!(out.warnings.is_empty(), "{:?}", out.warnings);
        let got: Vec<(DeclKind, String)> = out.events.iter().map(|e| (e.kind, e.path.to_string())).collect();
        assert_eq!(got[0], (DeclKind::PackageDecl, "easy.notes".into()));
        assert_eq!(got[1], (DeclKind::AnnotationTypeDecl, "easy.notes.Unused".into()));
        assert_eq!(out.events[1].doc.as_deref(), Some("Marks dead code."));
        assert!(got.contains(&(DeclKind::MethodDecl, "easy.notes.Unused#tags()".into())));
        assert!(got.contains(&(DeclKind::FieldDecl, "easy.notes.Level#LOW".into())));
        assert!(got.contains(&(DeclKind::FieldDecl, "easy.notes.Level#HIGH".into())));
        assert!(got.contains(&(DeclKind::FieldDecl, "easy.notes.Level#weight".into())));
        assert!(got.contains(&(DeclKind::FieldDecl, "easy.notes.Point#x".into())));
        let x = out.events.iter().find(|e| e.path.as_str() == "easy.notes.Point#x").unwrap();
        assert_eq!(x.annotations[0].annotation.type_name, "Y");
    }

    #[test]
    fn garbage_member_is_skipped() {
        let src = "package p;\nclass K {\n  @A int ok;\n  ) ( garbage ;\n  @B void fine() {}\n}";
        let out = scan(src);
        assert_eq!(out.warnings.len(), 1);
        assert_eq!(out.warnings[0].line, 4);
        let names: Vec<String> = out.events.iter().map(|e| e.path.to_string()).collect();
        assert_eq!(names, vec!["p", "p.K", "p.K#ok", "p.K#fine()"]);
    }

    #[test]
    fn malformed_annotation_is_dropped() {
        let src = "class K {\n  @A(x = 1 + 2) @B int f;\n}";
        let out = scan(src);
        assert_eq!(out.warnings.len(), 1);
        let f = out.events.iter().find(|e| e.path.as_str() == "K#f").unwrap();
        assert_eq!(f.annotations.len(), 1);
        assert_eq!(f.annotations[0].annotation.type_name, "B");
    }

    #[test]
    fn no_annotations() {
        let out = scan("class K { void f() {} }");
        assert!(out.events.iter().all(|e| e.annotations.is_empty()));
    }
}
