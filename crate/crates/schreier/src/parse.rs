//! Text syntax for words and presentations.
//!
//! Words: juxtaposition or `*` for products, `^` for integer exponents
//! (negative allowed), `[x,y]` for the commutator `x y x^-1 y^-1`,
//! parentheses for grouping, `1` for the identity. Example:
//! `a^2*[b, a^-1]*(a*b)^3`.
//!
//! Presentations: `< a, b | a^2*b^3, [a,b] >`. A relation `u = v` is stored
//! as the relator `u*v^-1`. Whitespace is insignificant. Inside a word, a
//! run of name characters that is not itself a declared generator is split
//! greedily into declared generators with optional digit exponents, so
//! `a2b` reads as `a^2*b` when `a` and `b` are generators.

use crate::present::{Presentation, PresentationError};
use crate::words::{commutator, Alphabet, GeneratorId, Word};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Name(String),
    Int(i64),
    Caret,
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Pipe,
    Lt,
    Gt,
    Eq,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '^' => {
                toks.push((start, Tok::Caret));
                i += 1;
            }
            '*' => {
                toks.push((start, Tok::Star));
                i += 1;
            }
            '(' => {
                toks.push((start, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((start, Tok::RParen));
                i += 1;
            }
            '[' => {
                toks.push((start, Tok::LBracket));
                i += 1;
            }
            ']' => {
                toks.push((start, Tok::RBracket));
                i += 1;
            }
            ',' => {
                toks.push((start, Tok::Comma));
                i += 1;
            }
            '|' => {
                toks.push((start, Tok::Pipe));
                i += 1;
            }
            '<' => {
                toks.push((start, Tok::Lt));
                i += 1;
            }
            '>' => {
                toks.push((start, Tok::Gt));
                i += 1;
            }
            '=' => {
                toks.push((start, Tok::Eq));
                i += 1;
            }
            '-' | '+' | '0'..='9' => {
                let sign_len = if c == '-' || c == '+' { 1 } else { 0 };
                let mut j = i + sign_len;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + sign_len {
                    return err(start, format!("unexpected character {c:?}"));
                }
                let val: i64 = text[i..j]
                    .parse()
                    .map_err(|_| ParseError { pos: start, msg: "integer out of range".into() })?;
                toks.push((start, Tok::Int(val)));
                i = j;
            }
            _ if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                toks.push((start, Tok::Name(text[i..j].to_string())));
                i = j;
            }
            _ => return err(start, format!("unexpected character {c:?}")),
        }
    }
    Ok(Lexer { toks, at: 0, end: text.len() })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some((p, t)) if t == want => Ok(p),
            Some((p, t)) => err(p, format!("expected {what}, found {t:?}")),
            None => err(pos, format!("expected {what}, found end of input")),
        }
    }
}

/// Splits a name run into declared generators, each optionally followed by
/// digit exponents, e.g. `a2b` over `{a, b}` gives `a^2*b`.
fn resolve_name_run(
    run: &str,
    pos: usize,
    alphabet: &Alphabet,
) -> Result<Vec<(GeneratorId, i64)>, ParseError> {
    if let Some(g) = alphabet.index_of(run) {
        return Ok(vec![(g, 1)]);
    }
    let mut parts = Vec::new();
    let bytes = run.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut found: Option<(GeneratorId, usize)> = None;
        for g in alphabet.ids() {
            let name = alphabet.name(g);
            if run[i..].starts_with(name) {
                match found {
                    Some((_, len)) if len >= name.len() => {}
                    _ => found = Some((g, name.len())),
                }
            }
        }
        let Some((g, len)) = found else {
            return err(pos + i, format!("unknown generator in {run:?}"));
        };
        i += len;
        let mut exp: i64 = 1;
        let digit_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i > digit_start {
            exp = run[digit_start..i]
                .parse()
                .map_err(|_| ParseError { pos: pos + digit_start, msg: "exponent out of range".into() })?;
        }
        parts.push((g, exp));
    }
    Ok(parts)
}

struct WordParser<'a> {
    lex: &'a mut Lexer,
    alphabet: &'a Alphabet,
}

impl WordParser<'_> {
    fn parse_exponent_if_present(&mut self) -> Result<Option<i64>, ParseError> {
        if self.lex.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.lex.next();
        let pos = self.lex.pos();
        match self.lex.next() {
            Some((_, Tok::Int(e))) => Ok(Some(e)),
            _ => err(pos, "expected integer exponent after ^"),
        }
    }

    fn parse_factor(&mut self) -> Result<Word, ParseError> {
        let pos = self.lex.pos();
        match self.lex.next() {
            Some((p, Tok::Name(run))) => {
                let mut parts = resolve_name_run(&run, p, self.alphabet)?;
                if let Some(e) = self.parse_exponent_if_present()? {
                    // A trailing exponent binds to the last juxtaposed
                    // generator: ab^2 is a*b^2, not (a*b)^2.
                    let last = parts.last_mut().unwrap();
                    last.1 *= e;
                }
                Ok(Word::from_syllables(parts))
            }
            Some((_, Tok::LParen)) => {
                let inner = self.parse_word_expr()?;
                self.lex.expect(Tok::RParen, "closing parenthesis")?;
                let word = match self.parse_exponent_if_present()? {
                    Some(e) => inner.pow(e),
                    None => inner,
                };
                Ok(word)
            }
            Some((_, Tok::LBracket)) => {
                let x = self.parse_word_expr()?;
                self.lex.expect(Tok::Comma, "comma in commutator")?;
                let y = self.parse_word_expr()?;
                self.lex.expect(Tok::RBracket, "closing bracket")?;
                let comm = commutator(&x, &y);
                let word = match self.parse_exponent_if_present()? {
                    Some(e) => comm.pow(e),
                    None => comm,
                };
                Ok(word)
            }
            Some((_, Tok::Int(1))) => {
                self.parse_exponent_if_present()?;
                Ok(Word::identity())
            }
            Some((p, t)) => err(p, format!("expected a word, found {t:?}")),
            None => err(pos, "expected a word, found end of input"),
        }
    }

    fn at_word_start(&self) -> bool {
        matches!(
            self.lex.peek(),
            Some(Tok::Name(_)) | Some(Tok::LParen) | Some(Tok::LBracket) | Some(Tok::Int(1))
        )
    }

    fn parse_word_expr(&mut self) -> Result<Word, ParseError> {
        let mut word = self.parse_factor()?;
        loop {
            if self.lex.peek() == Some(&Tok::Star) {
                self.lex.next();
                let next = self.parse_factor()?;
                word = word.concat(&next);
            } else if self.at_word_start() {
                let next = self.parse_factor()?;
                word = word.concat(&next);
            } else {
                return Ok(word);
            }
        }
    }
}

/// Parses a single word over the given alphabet.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word, ParseError> {
    let mut lex = lex(text)?;
    let mut parser = WordParser { lex: &mut lex, alphabet };
    let word = parser.parse_word_expr()?;
    match lex.next() {
        None => Ok(word),
        Some((p, t)) => err(p, format!("unexpected {t:?} after word")),
    }
}

/// Parses `< names | relators >`. Relators are cyclically reduced on
/// ingest; a relation `u = v` becomes the relator `u*v^-1`.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut lex = lex(text)?;
    lex.expect(Tok::Lt, "'<'")?;
    let mut names = Vec::new();
    loop {
        let pos = lex.pos();
        match lex.next() {
            Some((_, Tok::Name(n))) => names.push(n),
            Some((p, t)) => return err(p, format!("expected generator name, found {t:?}")),
            None => return err(pos, "expected generator name, found end of input"),
        }
        match lex.next() {
            Some((_, Tok::Comma)) => {}
            Some((_, Tok::Pipe)) => break,
            Some((p, t)) => return err(p, format!("expected ',' or '|', found {t:?}")),
            None => return err(lex.end, "expected ',' or '|', found end of input"),
        }
    }
    let alphabet = Alphabet::new(names)
        .map_err(|e| ParseError { pos: 0, msg: e.to_string() })?;

    let mut relators = Vec::new();
    if lex.peek() != Some(&Tok::Gt) {
        loop {
            let rel_pos = lex.pos();
            let mut parser = WordParser { lex: &mut lex, alphabet: &alphabet };
            let lhs = parser.parse_word_expr()?;
            let relator = if lex.peek() == Some(&Tok::Eq) {
                lex.next();
                let mut parser = WordParser { lex: &mut lex, alphabet: &alphabet };
                let rhs = parser.parse_word_expr()?;
                lhs.concat(&rhs.inverse())
            } else {
                lhs
            };
            let (core, _) = relator.cyclically_reduce();
            if core.is_empty() {
                return err(rel_pos, "relator is trivial after reduction");
            }
            relators.push(core);
            match lex.next() {
                Some((_, Tok::Comma)) => {}
                Some((_, Tok::Gt)) => break,
                Some((p, t)) => return err(p, format!("expected ',' or '>', found {t:?}")),
                None => return err(lex.end, "expected ',' or '>', found end of input"),
            }
        }
    } else {
        lex.next();
    }
    if let Some((p, t)) = lex.next() {
        return err(p, format!("unexpected {t:?} after presentation"));
    }
    Presentation::new(alphabet, relators).map_err(|e| match e {
        PresentationError::EmptyRelator { index } => ParseError {
            pos: 0,
            msg: format!("relator {index} is trivial after reduction"),
        },
        other => ParseError { pos: 0, msg: other.to_string() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn word_syntax() {
        let alpha = ab();
        let parsed = parse_word("a^2*[b, a^-1]*(a*b)^3", &alpha).unwrap();
        let a = Word::generator(GeneratorId(0));
        let b = Word::generator(GeneratorId(1));
        let expect = a
            .pow(2)
            .concat(&commutator(&b, &a.inverse()))
            .concat(&a.concat(&b).pow(3));
        assert_eq!(parsed, expect);
    }

    #[test]
    fn juxtaposition_and_digit_exponents() {
        let alpha = ab();
        assert_eq!(
            parse_word("a2b3", &alpha).unwrap(),
            parse_word("a^2*b^3", &alpha).unwrap()
        );
        assert_eq!(parse_word("ab^-1", &alpha).unwrap(), parse_word("a*b^-1", &alpha).unwrap());
        assert_eq!(parse_word("ba2", &alpha).unwrap(), parse_word("b*a^2", &alpha).unwrap());
        // Longest declared prefix wins.
        let alpha2 = Alphabet::new(["x", "x1"]).unwrap();
        assert_eq!(
            parse_word("x1x", &alpha2).unwrap(),
            Word::from_syllables([(GeneratorId(1), 1), (GeneratorId(0), 1)])
        );
    }

    #[test]
    fn identity_literal_and_empty_products() {
        let alpha = ab();
        assert_eq!(parse_word("1", &alpha).unwrap(), Word::identity());
        assert_eq!(parse_word("a*1*a^-1", &alpha).unwrap(), Word::identity());
        assert_eq!(parse_word("(a*b)^0", &alpha).unwrap(), Word::identity());
    }

    #[test]
    fn rejects_garbage_with_position() {
        let alpha = ab();
        let e = parse_word("a^x", &alpha).unwrap_err();
        assert_eq!(e.pos, 2);
        let e = parse_word("a*)", &alpha).unwrap_err();
        assert_eq!(e.pos, 2);
        let e = parse_word("c", &alpha).unwrap_err();
        assert!(e.msg.contains("unknown generator"));
        let e = parse_word("a b c", &alpha).unwrap_err();
        assert!(e.msg.contains("unknown generator"));
    }

    #[test]
    fn presentation_roundtrip() {
        let p = parse_presentation("< a, b | a^2*b^3 >").unwrap();
        assert_eq!(p.alphabet().names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.to_string(), "< a, b | a^2*b^3 >");

        let free = parse_presentation("< a | >").unwrap();
        assert_eq!(free.relators().len(), 0);
        assert_eq!(free.to_string(), "< a | >");
    }

    #[test]
    fn relations_become_relators() {
        let p = parse_presentation("< a, b | b*a*b^-1 = a^2 >").unwrap();
        let q = parse_presentation("< a, b | b*a*b^-1*a^-2 >").unwrap();
        assert_eq!(p.relators(), q.relators());
    }

    #[test]
    fn commutator_commas_do_not_split_relator_lists() {
        let p = parse_presentation("< a, b | [a, b], a^2 >").unwrap();
        assert_eq!(p.relators().len(), 2);
    }

    #[test]
    fn relators_are_cyclically_reduced_on_ingest() {
        let p = parse_presentation("< a, b | b*a^2*b^-1 >").unwrap();
        let alpha = p.alphabet();
        assert_eq!(p.relators()[0], parse_word("a^2", alpha).unwrap());
    }

    #[test]
    fn presentation_errors() {
        assert!(parse_presentation("< a, b | a*a^-1 >").is_err());
        assert!(parse_presentation("< a, a | >").is_err());
        assert!(parse_presentation("< a | a^2 > x").is_err());
        assert!(parse_presentation("a | a^2").is_err());
        let e = parse_presentation("< a | a^2, >").unwrap_err();
        assert!(e.pos > 0);
    }
}
