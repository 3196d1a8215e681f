//! Text form of polynomials: parsing and formatting.
//!
//! Grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := identifier | integer
//! ```
//!
//! Every integer factor multiplies into the term's coefficient, every
//! identifier into its monomial, so `2*p1*q1`, `p1*q1*2` and `17` are all
//! terms. Identifiers follow `[a-zA-Z][a-zA-Z0-9_]*`.
//!
//! Parsing is a two-step affair: [`scan_identifiers`] collects names so the
//! caller can build a [`VarTable`] covering a whole file, then
//! [`parse_polynomial`] resolves names against that table. Formatting via
//! [`format_polynomial`] is the inverse: `parse(format(p)) == p`.

use crate::error::CoreError;
use crate::poly::{BinaryPolynomial, Monomial};
use crate::vars::{is_identifier, VarTable};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Integer(i64),
    Ident(String),
}

/// Tokens paired with their byte offset in the input.
fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, CoreError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        match c {
            b' ' | b'\t' => pos += 1,
            b'+' => {
                tokens.push((pos, Token::Plus));
                pos += 1;
            }
            b'-' => {
                tokens.push((pos, Token::Minus));
                pos += 1;
            }
            b'*' => {
                tokens.push((pos, Token::Star));
                pos += 1;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = &text[start..pos];
                let value = digits.parse::<i64>().map_err(|_| CoreError::Parse {
                    pos: start,
                    msg: format!("integer literal `{digits}` is out of range"),
                })?;
                tokens.push((start, Token::Integer(value)));
            }
            _ if c.is_ascii_alphabetic() => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                tokens.push((start, Token::Ident(text[start..pos].to_string())));
            }
            _ => {
                return Err(CoreError::Parse {
                    pos,
                    msg: format!("unexpected character `{}`", &text[pos..].chars().next().unwrap()),
                });
            }
        }
    }
    Ok(tokens)
}

/// Collect every identifier occurring in `text`, in order of appearance,
/// without resolving them. Duplicates are kept; callers dedup when building
/// the table.
pub fn scan_identifiers(text: &str) -> Result<Vec<String>, CoreError> {
    let mut names = Vec::new();
    for (_, token) in tokenize(text)? {
        if let Token::Ident(name) = token {
            if !is_identifier(&name) {
                return Err(CoreError::InvalidIdentifier { name });
            }
            names.push(name);
        }
    }
    Ok(names)
}

/// Parse one polynomial, resolving identifiers against `table`.
pub fn parse_polynomial(text: &str, table: &VarTable) -> Result<BinaryPolynomial, CoreError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        cursor: 0,
        end: text.len(),
    };
    let poly = parser.parse_poly(table)?;
    if let Some((pos, _)) = parser.peek() {
        return Err(CoreError::Parse {
            pos: *pos,
            msg: "trailing input after polynomial".into(),
        });
    }
    Ok(poly)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    cursor: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.cursor)
    }

    fn bump(&mut self) -> Option<&(usize, Token)> {
        let t = self.tokens.get(self.cursor);
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn parse_poly(&mut self, table: &VarTable) -> Result<BinaryPolynomial, CoreError> {
        let mut poly = BinaryPolynomial::zero();
        let mut sign: i64 = 1;
        // Optional leading sign.
        match self.peek() {
            Some((_, Token::Plus)) => {
                self.cursor += 1;
            }
            Some((_, Token::Minus)) => {
                sign = -1;
                self.cursor += 1;
            }
            Some(_) => {}
            None => {
                return Err(CoreError::Parse {
                    pos: self.end,
                    msg: "empty polynomial".into(),
                });
            }
        }
        loop {
            let (monomial, coeff) = self.parse_term(table)?;
            let signed = coeff.checked_mul(sign).ok_or(CoreError::Overflow)?;
            let mut term = BinaryPolynomial::zero();
            term.add_term(monomial, signed)?;
            poly = poly.add(&term)?;
            match self.peek() {
                Some((_, Token::Plus)) => {
                    sign = 1;
                    self.cursor += 1;
                }
                Some((_, Token::Minus)) => {
                    sign = -1;
                    self.cursor += 1;
                }
                _ => return Ok(poly),
            }
        }
    }

    fn parse_term(&mut self, table: &VarTable) -> Result<(Monomial, i64), CoreError> {
        let mut coeff: i64 = 1;
        let mut monomial = Monomial::CONSTANT;
        loop {
            let pos = self.here();
            match self.bump() {
                Some((_, Token::Integer(value))) => {
                    coeff = coeff.checked_mul(*value).ok_or(CoreError::Overflow)?;
                }
                Some((_, Token::Ident(name))) => {
                    let index = table
                        .index_of(name)
                        .ok_or_else(|| CoreError::UnknownVariable { name: name.clone() })?;
                    monomial = monomial.product(Monomial::from_indices([index])?);
                }
                Some((p, token)) => {
                    return Err(CoreError::Parse {
                        pos: *p,
                        msg: format!("expected a variable or integer, found `{}`", token_text(token)),
                    });
                }
                None => {
                    return Err(CoreError::Parse {
                        pos,
                        msg: "expected a variable or integer, found end of input".into(),
                    });
                }
            }
            match self.peek() {
                Some((_, Token::Star)) => {
                    self.cursor += 1;
                }
                _ => return Ok((monomial, coeff)),
            }
        }
    }
}

fn token_text(token: &Token) -> String {
    match token {
        Token::Plus => "+".into(),
        Token::Minus => "-".into(),
        Token::Star => "*".into(),
        Token::Integer(v) => v.to_string(),
        Token::Ident(name) => name.clone(),
    }
}

/// Canonical text for a polynomial: variable terms in index order, the
/// constant term last, `0` for the zero polynomial.
pub fn format_polynomial(poly: &BinaryPolynomial, table: &VarTable) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let mut pieces: Vec<(Monomial, i64)> = poly
        .terms()
        .filter(|(m, _)| !m.is_constant())
        .collect();
    // Alphabetical term order: lexicographic on the index sequence, so
    // `p1*q1` sorts before `p2`. The constant goes last.
    pieces.sort_by_key(|(m, _)| m.indices().collect::<Vec<u32>>());
    let constant = poly.constant_term();
    if constant != 0 {
        pieces.push((Monomial::CONSTANT, constant));
    }
    let mut out = String::new();
    for (k, (monomial, coeff)) in pieces.iter().enumerate() {
        let negative = *coeff < 0;
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let magnitude = coeff.unsigned_abs();
        let mut factors: Vec<String> = Vec::new();
        if magnitude != 1 || monomial.is_constant() {
            factors.push(magnitude.to_string());
        }
        for index in monomial.indices() {
            factors.push(table.name(index).to_string());
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(names: &[&str]) -> VarTable {
        VarTable::from_names(names.iter().copied()).unwrap()
    }

    #[test]
    fn parses_terms_signs_and_coefficients() {
        let t = table(&["p1", "p2", "q1"]);
        let p = parse_polynomial("2*p1*q1 - p2 + 1", &t).unwrap();
        assert_eq!(p.term_count(), 3);
        // p1 < p2 < q1 -> indices 0, 1, 2
        let m = Monomial::from_indices([0, 2]).unwrap();
        assert_eq!(p.coefficient(m), 2);
        assert_eq!(p.coefficient(Monomial::from_indices([1]).unwrap()), -1);
        assert_eq!(p.constant_term(), 1);
    }

    #[test]
    fn leading_sign_and_integer_products() {
        let t = table(&["x1"]);
        assert_eq!(
            parse_polynomial("-x1 + 2", &t).unwrap(),
            parse_polynomial("2 - x1", &t).unwrap()
        );
        // integer factors multiply into the coefficient wherever they appear
        assert_eq!(
            parse_polynomial("2*3*x1", &t).unwrap(),
            parse_polynomial("6*x1", &t).unwrap()
        );
        assert_eq!(
            parse_polynomial("x1*2", &t).unwrap(),
            parse_polynomial("2*x1", &t).unwrap()
        );
    }

    #[test]
    fn repeated_variable_is_idempotent() {
        let t = table(&["x1"]);
        assert_eq!(
            parse_polynomial("x1*x1", &t).unwrap(),
            parse_polynomial("x1", &t).unwrap()
        );
    }

    #[test]
    fn like_terms_collect_during_parse() {
        let t = table(&["x1", "x2"]);
        let p = parse_polynomial("x1 + x1 - x2 + x2", &t).unwrap();
        assert_eq!(p, parse_polynomial("2*x1", &t).unwrap());
    }

    #[test]
    fn rejects_malformed_input() {
        let t = table(&["x1"]);
        assert!(matches!(
            parse_polynomial("", &t),
            Err(CoreError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 +", &t),
            Err(CoreError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 * * x1", &t),
            Err(CoreError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 ^ 2", &t),
            Err(CoreError::Parse { pos: 3, .. })
        ));
        assert!(matches!(
            parse_polynomial("99999999999999999999", &t),
            Err(CoreError::Parse { .. })
        ));
    }

    #[test]
    fn unknown_variable_is_reported_by_name() {
        let t = table(&["x1"]);
        match parse_polynomial("x1 + y9", &t) {
            Err(CoreError::UnknownVariable { name }) => assert_eq!(name, "y9"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scan_collects_names_in_order() {
        let names = scan_identifiers("2*p1*q1 - p2 + p1").unwrap();
        assert_eq!(names, ["p1", "q1", "p2", "p1"]);
    }

    #[test]
    fn format_round_trips() {
        let t = table(&["p1", "p2", "q1", "q2"]);
        for text in [
            "2*p1*q1 - p2 + 1",
            "p1 + p2 + q1 + q2",
            "-p1 - 1",
            "0",
            "17",
            "p1*p2*q1*q2 - 4",
        ] {
            let p = parse_polynomial(text, &t).unwrap();
            let rendered = format_polynomial(&p, &t);
            let back = parse_polynomial(&rendered, &t).unwrap();
            assert_eq!(back, p, "round-trip failed for `{text}` -> `{rendered}`");
        }
        let p = parse_polynomial("2*p1*q1 - p2 + 1", &t).unwrap();
        assert_eq!(format_polynomial(&p, &t), "2*p1*q1 - p2 + 1");
    }
}
