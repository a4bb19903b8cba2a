use super::{Diagnostic, ErrorCode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Lower(String),
    Upper(String),
    Int(String),
    Hole(String),
    Data,
    Where,
    Case,
    Of,
    Forall,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Arrow,
    FatArrow,
    Equals,
    DoubleColon,
    Colon,
    Bar,
    Backslash,
    Tilde,
    Dot,
    BlockOpen,
    BlockSep,
    BlockClose,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::Hole(s) => format!("hole `{s}`"),
            other => format!("`{}`", symbol(other)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::Data => "data",
        Tok::Where => "where",
        Tok::Case => "case",
        Tok::Of => "of",
        Tok::Forall => "forall",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::Arrow => "->",
        Tok::FatArrow => "=>",
        Tok::Equals => "=",
        Tok::DoubleColon => "::",
        Tok::Colon => ":",
        Tok::Bar => "|",
        Tok::Backslash => "\\",
        Tok::Tilde => "~",
        Tok::Dot => ".",
        Tok::BlockOpen => "{@",
        Tok::BlockSep => "@@",
        Tok::BlockClose => "@}",
        _ => "?",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// First token on its source line.
    pub bol: bool,
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut bol = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            bol = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let tok = match two.as_str() {
            "->" => Some(Tok::Arrow),
            "=>" => Some(Tok::FatArrow),
            "::" => Some(Tok::DoubleColon),
            "{@" => Some(Tok::BlockOpen),
            "@}" => Some(Tok::BlockClose),
            "@@" => Some(Tok::BlockSep),
            _ => None,
        };
        let (tok, len) = if let Some(t) = tok {
            (t, 2)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "data" => Tok::Data,
                "where" => Tok::Where,
                "case" => Tok::Case,
                "of" => Tok::Of,
                "forall" => Tok::Forall,
                _ if c == '_' => Tok::Hole(word.clone()),
                _ if c.is_ascii_uppercase() => Tok::Upper(word.clone()),
                _ => Tok::Lower(word.clone()),
            };
            (tok, j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            (Tok::Int(chars[i..j].iter().collect()), j - i)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '=' => Tok::Equals,
                ':' => Tok::Colon,
                '|' => Tok::Bar,
                '\\' => Tok::Backslash,
                '~' => Tok::Tilde,
                '.' => Tok::Dot,
                other => {
                    return Err(Diagnostic::new(
                        ErrorCode::Lexical,
                        start_line,
                        start_col,
                        format!("unexpected character `{other}`"),
                    ))
                }
            };
            (t, 1)
        };
        out.push(Token {
            tok,
            line: start_line,
            col: start_col,
            bol,
        });
        bol = false;
        i += len;
        col += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_positions_and_comments() {
        let toks = lex("f :: a -> a -- id\n  f x = _\n").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds.len(), 9);
        assert_eq!(toks[5].line, 2);
        assert_eq!(toks[5].col, 3);
        assert!(toks[5].bol);
        assert_eq!(toks[8].tok, Tok::Hole("_".into()));
    }

    #[test]
    fn rejects_unknown_characters() {
        let err = lex("f = $").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
    }
}
