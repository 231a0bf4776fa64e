//! Fixture helpers shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use concern_lens::extractor::{tokenize, TokenKind};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn project_root() -> PathBuf {
    fixtures().join("easynotes-mini")
}

pub fn sources() -> Vec<(PathBuf, String)> {
    let root = project_root();
    let mut files = Vec::new();
    let mut stack = vec![root.clone()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|x| x == "java") {
                files.push(path);
            }
        }
    }
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p.strip_prefix(&root).unwrap().to_path_buf(), text)
        })
        .collect()
}

/// Byte ranges strictly inside method bodies: a `{` directly after the
/// parameter list or throws clause of a member, outside any other body.
pub fn method_bodies(source: &str) -> Vec<(usize, usize)> {
    let tokens: Vec<_> = tokenize(source)
        .unwrap()
        .into_iter()
        .filter(|t| !t.is_comment())
        .collect();
    let mut bodies = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if t.is_punct("{") && i > 0 {
            let mut j = i - 1;
            while j > 0 && (tokens[j].kind == TokenKind::Identifier || tokens[j].is_punct(".") || tokens[j].is_punct(",")) {
                j -= 1;
            }
            let after_params = tokens[i - 1].is_punct(")") || tokens[j].is_keyword("throws");
            let anonymous = {
                // `new X(...) {` is a class body, not a method body
                let mut k = i - 1;
                let mut depth = 0;
                loop {
                    if tokens[k].is_punct(")") {
                        depth += 1;
                    } else if tokens[k].is_punct("(") {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                }
                k >= 2 && tokens[k - 2].is_keyword("new")
            };
            if after_params && !anonymous {
                let mut depth = 0;
                let mut end = i;
                for (k, u) in tokens.iter().enumerate().skip(i) {
                    if u.is_punct("{") {
                        depth += 1;
                    } else if u.is_punct("}") {
                        depth -= 1;
                        if depth == 0 {
                            end = k;
                            break;
                        }
                    }
                }
                bodies.push((t.offset + 1, tokens[end].offset));
                i = end + 1;
                continue;
            }
        }
        i += 1;
    }
    bodies
}

