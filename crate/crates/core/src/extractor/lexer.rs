//! Lossless tokenizer for Java-style source.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TokenKind {
    Identifier,
    Keyword,
    StringLit,
    CharLit,
    NumberLit,
    Punct,
    LineComment,
    BlockComment,
    DocComment,
    At,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'s> {
    pub kind: TokenKind,
    pub text: &'s str,
    /// Byte offset into the source.
    pub offset: usize,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub col: usize,
}

impl Token<'_> {
    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }

    pub fn is_keyword(&self, k: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == k
    }

    pub fn is_comment(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::LineComment | TokenKind::BlockComment | TokenKind::DocComment
        )
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "false", "final",
    "finally", "float", "for", "goto", "if", "implements", "import", "instanceof", "int",
    "interface", "long", "native", "new", "null", "package", "private", "protected", "public",
    "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this", "throw",
    "throws", "transient", "true", "try", "void", "volatile", "while",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

/// Lexical problem recovered from in lossy mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexWarning {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

struct Lexer<'s> {
    src: &'s str,
    pos: usize,
    line: usize,
    col: usize,
    lossy: bool,
    warnings: Vec<LexWarning>,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

impl<'s> Lexer<'s> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn fail(&mut self, line: usize, col: usize, message: &str) -> Result<()> {
        if self.lossy {
            self.warnings.push(LexWarning {
                line,
                col,
                message: message.to_string(),
            });
            Ok(())
        } else {
            Err(Error::Parse {
                file: None,
                line,
                column: col,
                message: message.to_string(),
            })
        }
    }

    fn block_comment(&mut self, line: usize, col: usize) -> Result<TokenKind> {
        // after "/*"
        let doc = self.peek() == Some('*') && self.peek_at(1) != Some('/');
        loop {
            if self.rest_starts_with("*/") {
                self.bump();
                self.bump();
                break;
            }
            if self.bump().is_none() {
                self.fail(line, col, "unterminated comment")?;
                break;
            }
        }
        Ok(if doc {
            TokenKind::DocComment
        } else {
            TokenKind::BlockComment
        })
    }

    /// Consumes a literal after its opening quote. An unterminated literal in
    /// lossy mode rewinds to just after the opening quote and returns false.
    fn quoted(&mut self, quote: char, line: usize, col: usize) -> Result<bool> {
        let resume = (self.pos, self.line, self.col);
        loop {
            match self.peek() {
                None | Some('\n') => {
                    let what = if quote == '"' { "string" } else { "character" };
                    return self.unterminated(resume, line, col, &format!("unterminated {what} literal"));
                }
                Some('\\') => {
                    self.bump();
                    if self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                Some(c) => {
                    self.bump();
                    if c == quote {
                        return Ok(true);
                    }
                }
            }
        }
    }

    fn text_block(&mut self, line: usize, col: usize) -> Result<bool> {
        let resume = (self.pos, self.line, self.col);
        loop {
            if self.rest_starts_with("\"\"\"") {
                for _ in 0..3 {
                    self.bump();
                }
                return Ok(true);
            }
            match self.bump() {
                None => return self.unterminated(resume, line, col, "unterminated text block"),
                Some('\\') => {
                    self.bump();
                }
                Some(_) => {}
            }
        }
    }

    fn unterminated(&mut self, resume: (usize, usize, usize), line: usize, col: usize, message: &str) -> Result<bool> {
        self.fail(line, col, message)?;
        (self.pos, self.line, self.col) = resume;
        Ok(false)
    }

    fn number(&mut self, start: usize) {
        let mut prev = '0';
        while let Some(c) = self.peek() {
            let so_far = &self.src[start..self.pos];
            let hex = so_far.starts_with("0x") || so_far.starts_with("0X");
            let exponent = if hex {
                matches!(prev, 'p' | 'P')
            } else {
                matches!(prev, 'e' | 'E')
            };
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' || ((c == '+' || c == '-') && exponent) {
                if c == '.' && self.peek_at(1) == Some('.') {
                    break;
                }
                prev = c;
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token<'s>>> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
        let (start, line, col) = (self.pos, self.line, self.col);
        let Some(c) = self.bump() else {
            return Ok(None);
        };
        let kind = match c {
            '/' if self.peek() == Some('/') => {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
                TokenKind::LineComment
            }
            '/' if self.peek() == Some('*') => {
                self.bump();
                self.block_comment(line, col)?
            }
            '"' if self.rest_starts_with("\"\"") => {
                self.bump();
                self.bump();
                literal(self.text_block(line, col)?, TokenKind::StringLit)
            }
            '"' => literal(self.quoted('"', line, col)?, TokenKind::StringLit),
            '\'' => literal(self.quoted('\'', line, col)?, TokenKind::CharLit),
            '@' => TokenKind::At,
            '.' if self.peek().is_some_and(|c| c.is_ascii_digit()) => {
                self.number(start);
                TokenKind::NumberLit
            }
            '.' if self.rest_starts_with("..") => {
                self.bump();
                self.bump();
                TokenKind::Punct
            }
            c if c.is_ascii_digit() => {
                self.number(start);
                TokenKind::NumberLit
            }
            c if is_ident_start(c) => {
                while self.peek().is_some_and(is_ident_part) {
                    self.bump();
                }
                if is_keyword(&self.src[start..self.pos]) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                }
            }
            _ => TokenKind::Punct,
        };
        Ok(Some(Token {
            kind,
            text: &self.src[start..self.pos],
            offset: start,
            line,
            col,
        }))
    }
}

/// An unterminated literal leaves its opening quote as stray punctuation.
fn literal(terminated: bool, kind: TokenKind) -> TokenKind {
    if terminated {
        kind
    } else {
        TokenKind::Punct
    }
}

fn run(source: &str, lossy: bool) -> Result<(Vec<Token<'_>>, Vec<LexWarning>)> {
    let mut lexer = Lexer {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
        lossy,
        warnings: Vec::new(),
    };
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next_token()? {
        tokens.push(t);
    }
    Ok((tokens, lexer.warnings))
}

/// Tokens of `source`, failing on an unterminated literal or comment.
pub fn tokenize(source: &str) -> Result<Vec<Token<'_>>> {
    run(source, false).map(|(t, _)| t)
}

/// Like [`tokenize`], but recovers with a warning: the opening quote of an
/// unterminated literal becomes a lone punctuation token and lexing resumes
/// after it; an unterminated comment runs to the end of input.
pub fn tokenize_lossy(source: &str) -> (Vec<Token<'_>>, Vec<LexWarning>) {
    run(source, true).expect("lossy lexing never fails")
}
