//! Tokenizer for the Java subset.

use super::ast::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Float(String),
    Char(String),
    Str(String),
    /// Operators and punctuation. `>` is always emitted alone so that nested
    /// generics close cleanly; the parser re-joins adjacent `>`/`=` into
    /// `>=`, `>>`, `>>>` and their compound assignments.
    Punct(&'static str),
    At,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexError {
    pub line: u32,
    pub message: String,
}

// Longest first.
const PUNCTS: &[&str] = &[
    "<<=", "...", "==", "!=", "<=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=",
    "|=", "^=", "<<", "->", "::", "(", ")", "{", "}", "[", "]", ";", ",", ".", "=", "<", ">", "!", "~", "?", ":",
    "+", "-", "*", "/", "%", "&", "|", "^",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line: u32 = 1;

    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            line += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            let start_line = line;
            i += 2;
            loop {
                if i + 1 >= bytes.len() {
                    return Err(LexError { line: start_line, message: "unterminated block comment".into() });
                }
                if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                    i += 2;
                    break;
                }
                if bytes[i] == b'\n' {
                    line += 1;
                }
                i += 1;
            }
            continue;
        }

        let start = i;
        let start_line = line;
        let tok = if c.is_ascii_alphabetic() || c == b'_' || c == b'$' || c >= 0x80 {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$' || bytes[i] >= 0x80) {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) {
            lex_number(src, &mut i)
        } else if c == b'"' {
            let text = lex_quoted(src, &mut i, b'"', start_line)?;
            Tok::Str(text)
        } else if c == b'\'' {
            let text = lex_quoted(src, &mut i, b'\'', start_line)?;
            Tok::Char(text)
        } else if c == b'@' {
            i += 1;
            Tok::At
        } else {
            let rest = &src[i..];
            match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    i += p.len();
                    Tok::Punct(p)
                }
                None => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(LexError { line, message: format!("unexpected character `{ch}`") });
                }
            }
        };
        out.push(Token { tok, span: Span { start, end: i, line: start_line } });
    }
    out.push(Token { tok: Tok::Eof, span: Span { start: src.len(), end: src.len(), line } });
    Ok(out)
}

fn lex_number(src: &str, i: &mut usize) -> Tok {
    let bytes = src.as_bytes();
    let start = *i;
    let mut float = false;
    if bytes[*i] == b'0' && matches!(bytes.get(*i + 1), Some(b'x' | b'X' | b'b' | b'B')) {
        *i += 2;
        while *i < bytes.len() && (bytes[*i].is_ascii_hexdigit() || bytes[*i] == b'_') {
            *i += 1;
        }
    } else {
        while *i < bytes.len() && (bytes[*i].is_ascii_digit() || bytes[*i] == b'_') {
            *i += 1;
        }
        if *i < bytes.len() && bytes[*i] == b'.' && bytes.get(*i + 1).is_some_and(|b| b.is_ascii_digit()) {
            float = true;
            *i += 1;
            while *i < bytes.len() && (bytes[*i].is_ascii_digit() || bytes[*i] == b'_') {
                *i += 1;
            }
        } else if *i < bytes.len() && bytes[*i] == b'.' && !bytes.get(*i + 1).is_some_and(|b| b.is_ascii_alphabetic()) {
            // `1.` as in `1.;` or `1.e3`
            float = true;
            *i += 1;
        }
        if *i < bytes.len() && matches!(bytes[*i], b'e' | b'E') {
            float = true;
            *i += 1;
            if *i < bytes.len() && matches!(bytes[*i], b'+' | b'-') {
                *i += 1;
            }
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
        }
    }
    if *i < bytes.len() && matches!(bytes[*i], b'f' | b'F' | b'd' | b'D') {
        float = true;
        *i += 1;
    } else if *i < bytes.len() && matches!(bytes[*i], b'l' | b'L') {
        *i += 1;
    }
    let text = src[start..*i].to_string();
    if float {
        Tok::Float(text)
    } else {
        Tok::Int(text)
    }
}

fn lex_quoted(src: &str, i: &mut usize, quote: u8, line: u32) -> Result<String, LexError> {
    let bytes = src.as_bytes();
    let start = *i + 1;
    *i += 1;
    while *i < bytes.len() {
        match bytes[*i] {
            b'\\' => *i += 2,
            b'\n' => break,
            b if b == quote => {
                let text = src[start..*i].to_string();
                *i += 1;
                return Ok(text);
            }
            _ => *i += 1,
        }
    }
    Err(LexError { line, message: "unterminated literal".into() })
}
