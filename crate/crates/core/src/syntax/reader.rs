//! Reader for `.gsl` source text.

use std::str::FromStr;

use num_bigint::BigInt;

use super::sexpr::{SExpr, Symbol};
use crate::error::ParseError;

/// Line and column (both 1-based) of a datum in its source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Quote,
    Dot,
    Atom(String),
}

const FORBIDDEN: &[char] = &['"', '|', '#', '\\', '`', ','];

fn tokenize(text: &str) -> Result<Vec<(Token, Position)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);

    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        let advance = |c: char, line: &mut usize, column: &mut usize| {
            if c == '\n' {
                *line += 1;
                *column = 1;
            } else {
                *column += 1;
            }
        };
        match c {
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    advance(c, &mut line, &mut column);
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                advance(c, &mut line, &mut column);
            }
            '(' | ')' | '\'' => {
                chars.next();
                advance(c, &mut line, &mut column);
                let tok = match c {
                    '(' => Token::Open,
                    ')' => Token::Close,
                    _ => Token::Quote,
                };
                tokens.push((tok, pos));
            }
            _ => {
                let mut atom = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '\'' | ';') {
                        break;
                    }
                    if FORBIDDEN.contains(&c) {
                        return Err(ParseError::new(
                            line,
                            column,
                            format!("illegal character {c:?} in atom"),
                        ));
                    }
                    atom.push(c);
                    chars.next();
                    advance(c, &mut line, &mut column);
                }
                let tok = if atom == "." {
                    Token::Dot
                } else {
                    Token::Atom(atom)
                };
                tokens.push((tok, pos));
            }
        }
    }
    Ok(tokens)
}

fn is_integer_literal(atom: &str) -> bool {
    let digits = atom.strip_prefix(['+', '-']).unwrap_or(atom);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn parse_atom(atom: &str) -> SExpr {
    if is_integer_literal(atom) {
        let trimmed = atom.strip_prefix('+').unwrap_or(atom);
        SExpr::Integer(BigInt::from_str(trimmed).expect("validated integer literal"))
    } else {
        SExpr::Symbol(Symbol::new(atom))
    }
}

struct Parser {
    tokens: Vec<(Token, Position)>,
    at: usize,
    end: Position,
}

impl Parser {
    fn peek(&self) -> Option<&(Token, Position)> {
        self.tokens.get(self.at)
    }

    fn position(&self) -> Position {
        self.peek().map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn datum(&mut self) -> Result<SExpr, ParseError> {
        let Some((tok, pos)) = self.tokens.get(self.at).cloned() else {
            let p = self.end;
            return Err(ParseError::new(p.line, p.column, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Token::Atom(a) => Ok(parse_atom(&a)),
            Token::Quote => {
                let quoted = self.datum()?;
                Ok(SExpr::list([SExpr::sym("QUOTE"), quoted]))
            }
            Token::Close => Err(ParseError::new(pos.line, pos.column, "unbalanced ')'")),
            Token::Dot => Err(ParseError::new(
                pos.line,
                pos.column,
                "dot outside of a list",
            )),
            Token::Open => self.list_rest(pos),
        }
    }

    fn list_rest(&mut self, open: Position) -> Result<SExpr, ParseError> {
        let mut items = Vec::new();
        loop {
            match self.peek().cloned() {
                None => {
                    return Err(ParseError::new(
                        open.line,
                        open.column,
                        "unbalanced '(': missing ')'",
                    ))
                }
                Some((Token::Close, _)) => {
                    self.at += 1;
                    return Ok(SExpr::list(items));
                }
                Some((Token::Dot, pos)) => {
                    if items.is_empty() {
                        return Err(ParseError::new(
                            pos.line,
                            pos.column,
                            "bad dotted syntax: no element before '.'",
                        ));
                    }
                    self.at += 1;
                    if matches!(self.peek(), Some((Token::Close | Token::Dot, _)) | None) {
                        let p = self.position();
                        return Err(ParseError::new(
                            p.line,
                            p.column,
                            "bad dotted syntax: expected one datum after '.'",
                        ));
                    }
                    let tail = self.datum()?;
                    return match self.peek().cloned() {
                        Some((Token::Close, _)) => {
                            self.at += 1;
                            Ok(SExpr::list_with_tail(items, tail))
                        }
                        _ => {
                            let p = self.position();
                            Err(ParseError::new(
                                p.line,
                                p.column,
                                "bad dotted syntax: expected ')' after dotted tail",
                            ))
                        }
                    };
                }
                Some(_) => items.push(self.datum()?),
            }
        }
    }
}

fn end_position(text: &str) -> Position {
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Position { line, column }
}

/// Reads every datum in `text`, paired with its starting position.
pub fn read_with_positions(text: &str) -> Result<Vec<(SExpr, Position)>, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        at: 0,
        end: end_position(text),
    };
    let mut out = Vec::new();
    while parser.peek().is_some() {
        let pos = parser.position();
        out.push((parser.datum()?, pos));
    }
    Ok(out)
}

/// Reads every datum in `text`.
pub fn read(text: &str) -> Result<Vec<SExpr>, ParseError> {
    Ok(read_with_positions(text)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

/// Reads exactly one datum.
pub fn read_one(text: &str) -> Result<SExpr, ParseError> {
    let mut data = read_with_positions(text)?;
    match data.len() {
        1 => Ok(data.remove(0).0),
        0 => {
            let p = end_position(text);
            Err(ParseError::new(p.line, p.column, "expected a datum"))
        }
        _ => {
            let p = data[1].1;
            Err(ParseError::new(p.line, p.column, "expected a single datum"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_dotted_list() {
        let v = read_one("(b c . a)").unwrap();
        assert_eq!(
            v,
            SExpr::cons(SExpr::sym("B"), SExpr::cons(SExpr::sym("C"), SExpr::sym("A")))
        );
    }

    #[test]
    fn empty_list_is_nil() {
        assert_eq!(read_one("()").unwrap(), SExpr::nil());
    }

    #[test]
    fn quote_sugar() {
        assert_eq!(read_one("'(a b)").unwrap().show(), "'(A B)");
        let v = read_one("'(a b)").unwrap();
        assert_eq!(v.car(), SExpr::sym("QUOTE"));
        assert_eq!(v.cdr().car(), SExpr::list([SExpr::sym("A"), SExpr::sym("B")]));
    }

    #[test]
    fn integers_and_symbols() {
        let v = read("-1 +2 1+ - *monoid-renaming* :rewrite").unwrap();
        assert_eq!(v[0], SExpr::int(-1));
        assert_eq!(v[1], SExpr::int(2));
        assert_eq!(v[2], SExpr::sym("1+"));
        assert_eq!(v[3], SExpr::sym("-"));
        assert_eq!(v[4].show(), "*MONOID-RENAMING*");
        assert_eq!(v[5].show(), ":REWRITE");
    }

    #[test]
    fn comments_are_skipped() {
        let v = read("; header\n(a ; inner\n b)").unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].show(), "(A B)");
    }

    #[test]
    fn positions_are_reported() {
        let v = read_with_positions("(a)\n  (b)").unwrap();
        assert_eq!(v[1].1, Position { line: 2, column: 3 });
    }

    #[test]
    fn unbalanced_open_is_an_error() {
        let err = read("(a (b)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        assert!(err.message.contains("unbalanced"));
    }

    #[test]
    fn unbalanced_close_is_an_error() {
        let err = read("a)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 2));
    }

    #[test]
    fn bad_dots() {
        assert!(read("(. a)").is_err());
        assert!(read("(a . b c)").is_err());
        assert!(read("(a .)").is_err());
        assert!(read(".").is_err());
        assert!(read("(a . . b)").is_err());
    }

    #[test]
    fn illegal_atoms() {
        let err = read("(a \"str\")").unwrap_err();
        assert!(err.message.contains("illegal"));
        assert!(read("#'car").is_err());
        assert!(read("|x|").is_err());
    }
}
