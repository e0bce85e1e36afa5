//! Line-oriented tokenizer with positions.
//!
//! Newlines separate statements except inside brackets of any kind, so
//! brace bodies (`lie`, `action`, `star`, `ce`) may span lines. `#` starts
//! a comment running to the end of the line.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
    Pipe,
    Slash,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Arrow,
    Newline,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Pipe => write!(f, "'|'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBrace => write!(f, "'{{'"),
            Tok::RBrace => write!(f, "'}}'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::Eq => write!(f, "'='"),
            Tok::Arrow => write!(f, "'->'"),
            Tok::Newline => write!(f, "end of line"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.message, self.pos)
    }
}

pub fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, LexError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: line_no,
                col: i + 1,
            };
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                }
                '#' => break,
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    let n = text.parse::<u64>().map_err(|_| LexError {
                        pos,
                        message: format!("integer literal '{text}' out of range"),
                    })?;
                    out.push((Tok::Int(n), pos));
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                    {
                        i += 1;
                    }
                    out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                }
                '-' => {
                    if i + 1 < chars.len() && chars[i + 1] == '>' {
                        out.push((Tok::Arrow, pos));
                        i += 2;
                    } else {
                        out.push((Tok::Minus, pos));
                        i += 1;
                    }
                }
                '+' => {
                    out.push((Tok::Plus, pos));
                    i += 1;
                }
                '*' => {
                    out.push((Tok::Star, pos));
                    i += 1;
                }
                '^' => {
                    out.push((Tok::Caret, pos));
                    i += 1;
                }
                '|' => {
                    out.push((Tok::Pipe, pos));
                    i += 1;
                }
                '/' => {
                    out.push((Tok::Slash, pos));
                    i += 1;
                }
                '(' => {
                    depth += 1;
                    out.push((Tok::LParen, pos));
                    i += 1;
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    out.push((Tok::RParen, pos));
                    i += 1;
                }
                '{' => {
                    depth += 1;
                    out.push((Tok::LBrace, pos));
                    i += 1;
                }
                '}' => {
                    depth = depth.saturating_sub(1);
                    out.push((Tok::RBrace, pos));
                    i += 1;
                }
                '[' => {
                    depth += 1;
                    out.push((Tok::LBracket, pos));
                    i += 1;
                }
                ']' => {
                    depth = depth.saturating_sub(1);
                    out.push((Tok::RBracket, pos));
                    i += 1;
                }
                ',' => {
                    out.push((Tok::Comma, pos));
                    i += 1;
                }
                '=' => {
                    out.push((Tok::Eq, pos));
                    i += 1;
                }
                other => {
                    return Err(LexError {
                        pos,
                        message: format!("unexpected character '{other}'"),
                    });
                }
            }
        }
        if depth == 0 {
            let pos = Pos {
                line: line_no,
                col: chars.len() + 1,
            };
            if out.last().map(|(t, _)| t != &Tok::Newline).unwrap_or(false) {
                out.push((Tok::Newline, pos));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_arrow() {
        let toks = tokenize("poly f = 3/2*x1 # comment\naction a = { e1 -> d2 }").unwrap();
        assert_eq!(toks[0].0, Tok::Ident("poly".into()));
        assert_eq!(toks[0].1, Pos { line: 1, col: 1 });
        assert!(toks.iter().any(|(t, _)| *t == Tok::Arrow));
        // comment swallowed
        assert!(!toks
            .iter()
            .any(|(t, _)| matches!(t, Tok::Ident(s) if s == "comment")));
    }

    #[test]
    fn newlines_suppressed_in_braces() {
        let toks = tokenize("lie g = {\n [e1,e2] = e2\n}\n").unwrap();
        let newline_positions: Vec<usize> = toks
            .iter()
            .enumerate()
            .filter(|(_, (t, _))| *t == Tok::Newline)
            .map(|(i, _)| i)
            .collect();
        // the only newline is at the very end
        assert_eq!(newline_positions, vec![toks.len() - 1]);
    }

    #[test]
    fn error_position() {
        let err = tokenize("poly f = 3 @ 4").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 12 });
    }
}
