//! Tokens of the declaration language.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// An identifier or a number; may coincide with a keyword.
    Word(String),
    /// A double-quoted name; never a keyword.
    Quoted(String),
    /// Punctuation: `{ } ( ) [ ] ; : , . = -> := :-`.
    Punct(&'static str),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const PUNCT: [&str; 14] = [":=", ":-", "->", "=", "{", "}", "(", ")", "[", "]", ";", ":", ",", "."];

pub(crate) fn is_word_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits the text into tokens; `#` starts a comment running to the end of
/// the line.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, column: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut column, c);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                let d = chars[i];
                advance(&mut i, &mut line, &mut column, d);
            }
            continue;
        }
        let (l, col) = (line, column);
        if c == '"' {
            let mut s = String::new();
            advance(&mut i, &mut line, &mut column, c);
            loop {
                let Some(&d) = chars.get(i) else {
                    return Err(Error::Parse {
                        line: l,
                        column: col,
                        message: "unterminated string".into(),
                    });
                };
                advance(&mut i, &mut line, &mut column, d);
                match d {
                    '"' => break,
                    '\\' => {
                        let Some(&e) = chars.get(i) else { continue };
                        advance(&mut i, &mut line, &mut column, e);
                        s.push(e);
                    }
                    _ => s.push(d),
                }
            }
            out.push(Token {
                tok: Tok::Quoted(s),
                line: l,
                column: col,
            });
            continue;
        }
        if is_word_start(c) {
            let mut s = String::new();
            while i < chars.len() && is_word_char(chars[i]) {
                let d = chars[i];
                s.push(d);
                advance(&mut i, &mut line, &mut column, d);
            }
            out.push(Token {
                tok: Tok::Word(s),
                line: l,
                column: col,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) else {
            return Err(Error::Parse {
                line: l,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        };
        for _ in 0..p.len() {
            let d = chars[i];
            advance(&mut i, &mut line, &mut column, d);
        }
        out.push(Token {
            tok: Tok::Punct(p),
            line: l,
            column: col,
        });
    }
    Ok(out)
}

/// Renders a name so that it lexes back to itself: bare when it is a word
/// and not reserved, quoted otherwise.
pub(crate) fn render_name(name: &str, reserved: &[&str]) -> String {
    let bare = name.chars().next().is_some_and(is_word_start)
        && name.chars().all(is_word_char)
        && !reserved.contains(&name);
    if bare {
        name.to_string()
    } else {
        let escaped: String = name
            .chars()
            .flat_map(|c| match c {
                '"' | '\\' => vec!['\\', c],
                _ => vec![c],
            })
            .collect();
        format!("\"{escaped}\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = tokenize("rel R : t t; # comment\n  x := \"a;b\" :- ->").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds[0], &Tok::Word("rel".into()));
        assert_eq!(kinds[2], &Tok::Punct(":"));
        assert_eq!(kinds[5], &Tok::Punct(";"));
        assert_eq!((toks[6].line, toks[6].column), (2, 3));
        assert_eq!(kinds[8], &Tok::Quoted("a;b".into()));
        assert_eq!(kinds[9], &Tok::Punct(":-"));
        assert_eq!(kinds[10], &Tok::Punct("->"));
        assert!(matches!(tokenize("a @ b"), Err(Error::Parse { line: 1, column: 3, .. })));
        assert!(tokenize("\"open").is_err());
    }

    #[test]
    fn names_render_back() {
        for name in ["x", "x'", "0", "(a;0)", "say \"hi\"", "idb", ""] {
            let r = render_name(name, &["idb"]);
            let toks = tokenize(&r).unwrap();
            let back = match &toks[0].tok {
                Tok::Word(w) | Tok::Quoted(w) => w.clone(),
                Tok::Punct(_) => unreachable!(),
            };
            assert_eq!(back, name);
        }
    }
}
