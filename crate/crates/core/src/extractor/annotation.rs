//! Token cursor and annotation-use parsing.

use crate::error::{Error, Result};
use crate::model::{AnnotationUse, ParamValue, Params};

use super::lexer::{tokenize, Token, TokenKind};

/// Position-tagged syntax problem; becomes a warning in tolerant scans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SyntaxError {
    fn into_error(self) -> Error {
        Error::Parse {
            file: None,
            line: self.line,
            column: self.col,
            message: self.message,
        }
    }
}

pub(crate) type Parsed<T> = std::result::Result<T, SyntaxError>;

/// Cursor over significant tokens: ordinary comments are dropped, doc
/// comments kept.
pub(crate) struct Cursor<'s> {
    tokens: Vec<Token<'s>>,
    pub(crate) pos: usize,
    /// Position reported at end of input.
    end: (usize, usize),
}

impl<'s> Cursor<'s> {
    pub(crate) fn new(tokens: Vec<Token<'s>>, source: &str) -> Self {
        let tokens: Vec<Token<'s>> = tokens
            .into_iter()
            .filter(|t| !t.is_comment() || t.kind == TokenKind::DocComment)
            .collect();
        let line = source.matches('\n').count() + 1;
        let col = source.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Cursor {
            tokens,
            pos: 0,
            end: (line, col),
        }
    }

    /// Next significant token, doc comments skipped.
    pub(crate) fn peek(&self) -> Option<&Token<'s>> {
        self.peek_nth(0)
    }

    pub(crate) fn peek_nth(&self, n: usize) -> Option<&Token<'s>> {
        self.tokens[self.pos..]
            .iter()
            .filter(|t| t.kind != TokenKind::DocComment)
            .nth(n)
    }

    /// Next token including doc comments.
    pub(crate) fn peek_raw(&self) -> Option<&Token<'s>> {
        self.tokens.get(self.pos)
    }

    pub(crate) fn next(&mut self) -> Option<Token<'s>> {
        while self.peek_raw()?.kind == TokenKind::DocComment {
            self.pos += 1;
        }
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub(crate) fn next_raw(&mut self) -> Option<Token<'s>> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    pub(crate) fn at_end(&self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn error_here(&self, message: impl Into<String>) -> SyntaxError {
        let (line, col) = self.peek().map_or(self.end, |t| (t.line, t.col));
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }

    pub(crate) fn expect_punct(&mut self, p: &str) -> Parsed<()> {
        if self.at_punct(p) {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{p}`, found {}", self.describe())))
        }
    }

    pub(crate) fn expect_identifier(&mut self) -> Parsed<&'s str> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let text = t.text;
                self.next();
                Ok(text)
            }
            _ => Err(self.error_here(format!("expected identifier, found {}", self.describe()))),
        }
    }

    pub(crate) fn describe(&self) -> String {
        match self.peek() {
            Some(t) => format!("`{}`", t.text),
            None => "end of input".into(),
        }
    }

    /// Dotted name such as `a.b.C`.
    pub(crate) fn qualified_name(&mut self) -> Parsed<String> {
        let mut name = self.expect_identifier()?.to_string();
        while self.at_punct(".") && self.peek_nth(1).is_some_and(|t| t.kind == TokenKind::Identifier) {
            self.next();
            name.push('.');
            name.push_str(self.expect_identifier()?);
        }
        Ok(name)
    }

    /// At an opening delimiter: consumes through the matching close. Nested
    /// `(`, `[` and `{` are tracked together. Stops early, without consuming,
    /// at a closer that would underflow, and reports the imbalance.
    pub(crate) fn skip_balanced(&mut self) -> Parsed<()> {
        let start = self.error_here("unbalanced delimiter");
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Punct {
                match t.text {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        if depth == 0 {
                            return Err(start);
                        }
                        depth -= 1;
                        if depth == 0 {
                            self.next();
                            return Ok(());
                        }
                    }
                    _ => {}
                }
            }
            self.next();
        }
        Err(start)
    }

    /// At `{`: consumes through the matching `}`, counting braces only.
    pub(crate) fn skip_block(&mut self) -> Parsed<()> {
        let start = self.error_here("unterminated block");
        let mut depth = 0usize;
        while let Some(t) = self.next() {
            if t.is_punct("{") {
                depth += 1;
            } else if t.is_punct("}") {
                depth -= 1;
                if depth == 0 {
                    return Ok(());
                }
            }
        }
        Err(start)
    }

    /// At `<`: consumes through the matching `>`, treating `>>` and `>>>` as
    /// several closers.
    pub(crate) fn skip_angle(&mut self) -> Parsed<()> {
        let start = self.error_here("unbalanced `<`");
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            if t.is_punct("<") {
                depth += 1;
            } else if t.is_punct(">") {
                depth -= 1;
                if depth == 0 {
                    self.next();
                    return Ok(());
                }
            } else if t.kind == TokenKind::Punct && matches!(t.text, ";" | "{" | "}" | "(" | ")") {
                return Err(start);
            }
            self.next();
        }
        Err(start)
    }
}

/// Parses an annotation use at the `@` token.
pub(crate) fn annotation_use(cur: &mut Cursor<'_>) -> Parsed<AnnotationUse> {
    cur.expect_punct_at()?;
    let type_name = cur.qualified_name()?;
    let mut params = Params::new();
    if cur.at_punct("(") {
        cur.next();
        if cur.at_punct(")") {
            cur.next();
        } else if cur.peek().is_some_and(|t| t.kind == TokenKind::Identifier)
            && cur.peek_nth(1).is_some_and(|t| t.is_punct("="))
        {
            loop {
                let key_pos = cur.error_here("");
                let key = cur.expect_identifier()?.to_string();
                cur.expect_punct("=")?;
                let value = element_value(cur)?;
                if params.insert(key.clone(), value).is_some() {
                    return Err(SyntaxError {
                        message: format!("duplicate annotation parameter `{key}`"),
                        ..key_pos
                    });
                }
                if cur.at_punct(",") {
                    cur.next();
                    continue;
                }
                cur.expect_punct(")")?;
                break;
            }
        } else {
            params.insert("value".into(), element_value(cur)?);
            cur.expect_punct(")")?;
        }
    }
    Ok(AnnotationUse { type_name, params })
}

impl Cursor<'_> {
    fn expect_punct_at(&mut self) -> Parsed<()> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::At => {
                self.next();
                Ok(())
            }
            _ => Err(self.error_here(format!("expected `@`, found {}", self.describe()))),
        }
    }
}

fn element_value(cur: &mut Cursor<'_>) -> Parsed<ParamValue> {
    let value = match cur.peek() {
        None => return Err(cur.error_here("expected annotation value, found end of input")),
        Some(t) if t.kind == TokenKind::At => ParamValue::Annotation(Box::new(annotation_use(cur)?)),
        Some(t) if t.is_punct("{") => {
            cur.next();
            let mut items = Vec::new();
            while !cur.at_punct("}") {
                items.push(element_value(cur)?);
                if cur.at_punct(",") {
                    cur.next();
                } else if !cur.at_punct("}") {
                    return Err(cur.error_here(format!(
                        "expected `,` or `}}` in array, found {}",
                        cur.describe()
                    )));
                }
            }
            cur.next();
            ParamValue::Array(items)
        }
        Some(_) => simple_value(cur)?,
    };
    if !(cur.at_punct(",") || cur.at_punct(")") || cur.at_punct("}")) {
        return Err(cur.error_here(format!(
            "unsupported expression in annotation value at {}",
            cur.describe()
        )));
    }
    Ok(value)
}

fn simple_value(cur: &mut Cursor<'_>) -> Parsed<ParamValue> {
    let here = cur.error_here("");
    let t = cur.peek().cloned().expect("caller checked");
    match t.kind {
        TokenKind::Keyword if t.text == "true" || t.text == "false" => {
            cur.next();
            Ok(ParamValue::Bool(t.text == "true"))
        }
        TokenKind::NumberLit => {
            cur.next();
            number(t.text, false).map_err(|m| SyntaxError { message: m, ..here })
        }
        TokenKind::Punct if t.text == "-" => {
            cur.next();
            match cur.peek().cloned() {
                Some(n) if n.kind == TokenKind::NumberLit => {
                    cur.next();
                    number(n.text, true).map_err(|m| SyntaxError { message: m, ..here })
                }
                _ => Err(cur.error_here("expected number after `-`")),
            }
        }
        TokenKind::StringLit => {
            let mut s = String::new();
            loop {
                let lit = cur.next().expect("string literal");
                s.push_str(&unquote(lit.text).map_err(|m| SyntaxError {
                    line: lit.line,
                    col: lit.col,
                    message: m,
                })?);
                let concat = cur.at_punct("+")
                    && cur.peek_nth(1).is_some_and(|t| t.kind == TokenKind::StringLit);
                if !concat {
                    break;
                }
                cur.next();
            }
            Ok(ParamValue::Str(s))
        }
        TokenKind::CharLit => {
            cur.next();
            unquote(t.text)
                .map(ParamValue::Str)
                .map_err(|m| SyntaxError { message: m, ..here })
        }
        TokenKind::Identifier => {
            let mut name = cur.qualified_name()?;
            if cur.at_punct(".") && cur.peek_nth(1).is_some_and(|t| t.is_keyword("class")) {
                cur.next();
                cur.next();
                name.push_str(".class");
            }
            Ok(ParamValue::Enum(name))
        }
        TokenKind::Keyword if is_primitive(t.text) || t.text == "void" => {
            // class literal of a primitive type
            cur.next();
            let mut name = t.text.to_string();
            while cur.at_punct("[") && cur.peek_nth(1).is_some_and(|t| t.is_punct("]")) {
                cur.next();
                cur.next();
                name.push_str("[]");
            }
            if cur.at_punct(".") && cur.peek_nth(1).is_some_and(|t| t.is_keyword("class")) {
                cur.next();
                cur.next();
                Ok(ParamValue::Enum(format!("{name}.class")))
            } else {
                Err(SyntaxError {
                    message: format!("unsupported annotation value `{}`", t.text),
                    ..here
                })
            }
        }
        _ => Err(SyntaxError {
            message: format!("unsupported annotation value `{}`", t.text),
            ..here
        }),
    }
}

pub(crate) fn is_primitive(word: &str) -> bool {
    matches!(
        word,
        "boolean" | "byte" | "char" | "short" | "int" | "long" | "float" | "double"
    )
}

fn number(text: &str, negative: bool) -> std::result::Result<ParamValue, String> {
    let bad = || format!("malformed number `{text}`");
    let clean: String = text.chars().filter(|&c| c != '_').collect();
    let lower = clean.to_ascii_lowercase();
    let sign = if negative { "-" } else { "" };
    let radix_int = |digits: &str, radix: u32| {
        // parse through i128 so that `-9223372036854775808` fits
        i128::from_str_radix(digits, radix)
            .ok()
            .map(|v| if negative { -v } else { v })
            .and_then(|v| i64::try_from(v).ok())
            .map(ParamValue::Int)
            .ok_or_else(bad)
    };
    if let Some(hex) = lower.strip_prefix("0x") {
        if hex.contains('p') || hex.contains('.') {
            return Err(format!("hexadecimal floating point `{text}` is not supported"));
        }
        return radix_int(hex.trim_end_matches('l'), 16);
    }
    if let Some(bin) = lower.strip_prefix("0b") {
        return radix_int(bin.trim_end_matches('l'), 2);
    }
    let is_decimal = lower.contains('.')
        || lower.contains('e')
        || lower.ends_with('f')
        || lower.ends_with('d');
    if is_decimal {
        let body = lower.trim_end_matches(['f', 'd']);
        return format!("{sign}{body}")
            .parse::<f64>()
            .map(ParamValue::Decimal)
            .map_err(|_| bad());
    }
    let body = lower.trim_end_matches('l');
    if body.len() > 1 && body.starts_with('0') {
        return radix_int(&body[1..], 8);
    }
    radix_int(body, 10)
}

/// Contents of a string, text-block or character literal with escapes resolved.
pub fn unquote(literal: &str) -> std::result::Result<String, String> {
    if let Some(inner) = literal
        .strip_prefix("\"\"\"")
        .and_then(|s| s.strip_suffix("\"\"\""))
    {
        return unescape(&text_block(inner));
    }
    let inner = if literal.len() >= 2
        && (literal.starts_with('"') && literal.ends_with('"')
            || literal.starts_with('\'') && literal.ends_with('\''))
    {
        &literal[1..literal.len() - 1]
    } else {
        return Err(format!("unterminated literal {literal}"));
    };
    unescape(inner)
}

fn text_block(inner: &str) -> String {
    // content starts after the line break following the opening delimiter
    let body = inner.split_once('\n').map_or("", |(_, b)| b);
    let lines: Vec<&str> = body.split('\n').collect();
    let indent = lines
        .iter()
        .enumerate()
        .filter(|(i, l)| !l.trim().is_empty() || *i == lines.len() - 1)
        .map(|(_, l)| l.chars().take_while(|c| c.is_whitespace()).count())
        .min()
        .unwrap_or(0);
    lines
        .iter()
        .map(|l| {
            let stripped: String = l.chars().skip(indent).collect();
            stripped.trim_end().to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn unescape(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        let e = chars.next().ok_or("dangling backslash")?;
        match e {
            'n' => out.push('\n'),
            't' => out.push('\t'),
            'b' => out.push('\u{8}'),
            'r' => out.push('\r'),
            'f' => out.push('\u{c}'),
            's' => out.push(' '),
            '"' | '\'' | '\\' => out.push(e),
            '\n' => {}
            'u' => {
                while chars.peek() == Some(&'u') {
                    chars.next();
                }
                let hex: String = chars.by_ref().take(4).collect();
                let code = u32::from_str_radix(&hex, 16).map_err(|_| format!("bad escape \\u{hex}"))?;
                out.push(char::from_u32(code).ok_or(format!("bad escape \\u{hex}"))?);
            }
            '0'..='7' => {
                let mut code = e.to_digit(8).expect("octal digit");
                let max_len = if e <= '3' { 3 } else { 2 };
                for _ in 1..max_len {
                    match chars.peek().and_then(|c| c.to_digit(8)) {
                        Some(d) => {
                            code = code * 8 + d;
                            chars.next();
                        }
                        None => break,
                    }
                }
                out.push(char::from_u32(code).expect("octal escape below 256"));
            }
            other => return Err(format!("unknown escape \\{other}")),
        }
    }
    Ok(out)
}

/// Parses one annotation use such as `@A(tags = {"x"}, level = Level.HIGH)`.
/// Trailing input after the annotation is an error.
pub fn parse_annotation_use(source: &str) -> Result<AnnotationUse> {
    let tokens = tokenize(source)?;
    let mut cur = Cursor::new(tokens, source);
    let use_ = annotation_use(&mut cur).map_err(SyntaxError::into_error)?;
    if !cur.at_end() {
        return Err(cur
            .error_here(format!("unexpected {} after annotation", cur.describe()))
            .into_error());
    }
    Ok(use_)
}
