//! Hand-rolled lexer for the supported Java-syntax subset.

use super::SourceError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Char(char),
    Int(String),
    Long(String),
    Float(String),
    Double(String),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
}

const PUNCTS: &[&str] = &[
    // longest first so greedy matching works
    ">>>=", "<<=", ">>=", "...", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "->", "(", ")", "{", "}", "[", "]", ";",
    ",", ".", "=", "<", ">", "+", "-", "*", "/", "%", "!", "&", "|", "^", "~", "?", ":", "@",
];

pub fn lex(src: &str) -> Result<Vec<Token>, SourceError> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line: u32 = 1;
    while i < bytes.len() {
        let c = bytes[i];
        if c == '\n' {
            line += 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        // comments
        if c == '/' && i + 1 < bytes.len() {
            if bytes[i + 1] == '/' {
                while i < bytes.len() && bytes[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            if bytes[i + 1] == '*' {
                i += 2;
                loop {
                    if i + 1 >= bytes.len() {
                        return Err(SourceError::Syntax {
                            line,
                            message: "unterminated block comment".into(),
                        });
                    }
                    if bytes[i] == '\n' {
                        line += 1;
                    }
                    if bytes[i] == '*' && bytes[i + 1] == '/' {
                        i += 2;
                        break;
                    }
                    i += 1;
                }
                continue;
            }
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                if i >= bytes.len() || bytes[i] == '\n' {
                    return Err(SourceError::Syntax {
                        line,
                        message: "unterminated string literal".into(),
                    });
                }
                if bytes[i] == '\\' && i + 1 < bytes.len() {
                    s.push(bytes[i]);
                    s.push(bytes[i + 1]);
                    i += 2;
                    continue;
                }
                if bytes[i] == '"' {
                    i += 1;
                    break;
                }
                s.push(bytes[i]);
                i += 1;
            }
            out.push(Token { tok: Tok::Str(s), line });
            continue;
        }
        if c == '\'' {
            // char literal, possibly escaped
            if i + 2 < bytes.len() && bytes[i + 1] == '\\' && bytes[i + 3] == '\'' {
                out.push(Token { tok: Tok::Char(bytes[i + 2]), line });
                i += 4;
                continue;
            }
            if i + 2 < bytes.len() && bytes[i + 2] == '\'' {
                out.push(Token { tok: Tok::Char(bytes[i + 1]), line });
                i += 3;
                continue;
            }
            return Err(SourceError::Syntax { line, message: "bad char literal".into() });
        }
        if c.is_ascii_digit() {
            let start = i;
            let mut is_float = false;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                if bytes[i] == '.' {
                    // stop at `1.toString()` style — digit '.' non-digit
                    if i + 1 >= bytes.len() || !bytes[i + 1].is_ascii_digit() {
                        break;
                    }
                    is_float = true;
                }
                i += 1;
            }
            let text: String = bytes[start..i].iter().collect();
            let tok = if i < bytes.len() && (bytes[i] == 'L' || bytes[i] == 'l') {
                i += 1;
                Tok::Long(text)
            } else if i < bytes.len() && (bytes[i] == 'f' || bytes[i] == 'F') {
                i += 1;
                Tok::Float(text)
            } else if i < bytes.len() && (bytes[i] == 'd' || bytes[i] == 'D') {
                i += 1;
                Tok::Double(text)
            } else if is_float {
                Tok::Double(text)
            } else {
                Tok::Int(text)
            };
            out.push(Token { tok, line });
            continue;
        }
        if c.is_alphabetic() || c == '_' || c == '$' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_alphanumeric() || bytes[i] == '_' || bytes[i] == '$')
            {
                i += 1;
            }
            let text: String = bytes[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(text), line });
            continue;
        }
        let rest: String = bytes[i..bytes.len().min(i + 4)].iter().collect();
        let mut matched = None;
        for p in PUNCTS {
            if rest.starts_with(p) {
                matched = Some(*p);
                break;
            }
        }
        match matched {
            Some(p) => {
                out.push(Token { tok: Tok::Punct(p), line });
                i += p.chars().count();
            }
            None => {
                return Err(SourceError::Syntax {
                    line,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_simple_statement() {
        let toks = lex("String s = \"hi\";").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("String".into()));
        assert_eq!(toks[2].tok, Tok::Punct("="));
        assert_eq!(toks[3].tok, Tok::Str("hi".into()));
    }

    #[test]
    fn tracks_lines() {
        let toks = lex("a\nb\n\nc").unwrap();
        assert_eq!(toks[0].line, 1);
        assert_eq!(toks[1].line, 2);
        assert_eq!(toks[2].line, 4);
    }

    #[test]
    fn rejects_unterminated_string() {
        assert!(lex("\"abc").is_err());
    }
}
