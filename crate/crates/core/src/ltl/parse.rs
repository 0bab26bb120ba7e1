use super::{Atom, Ltl, LtlError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Next,
    Globally,
    Finally,
    Until,
    True,
    False,
    Ident(String),
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Not => "`!`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Next => "`X`".into(),
        Tok::Globally => "`G`".into(),
        Tok::Finally => "`F`".into(),
        Tok::Until => "`U`".into(),
        Tok::True => "`true`".into(),
        Tok::False => "`false`".into(),
        Tok::Ident(s) => format!("`{s}`"),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, LtlError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'!' | b'~' => {
                out.push((i, Tok::Not));
                i += 1;
            }
            b'&' => {
                out.push((i, Tok::And));
                i += 1;
            }
            b'|' => {
                out.push((i, Tok::Or));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::Arrow));
                i += 2;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lex_word(&text[start..i], start, &mut out)?;
            }
            _ => {
                let token = text[i..].chars().next().unwrap_or('?').to_string();
                return Err(LtlError::UnknownToken { pos: i, token });
            }
        }
    }
    Ok(out)
}

// Leading X/G/F letters of a word are operators, so "FGy" lexes as F G y.
fn lex_word(word: &str, start: usize, out: &mut Vec<(usize, Tok)>) -> Result<(), LtlError> {
    match word {
        "true" => {
            out.push((start, Tok::True));
            return Ok(());
        }
        "false" => {
            out.push((start, Tok::False));
            return Ok(());
        }
        "U" => {
            out.push((start, Tok::Until));
            return Ok(());
        }
        _ => {}
    }
    let mut off = 0;
    for ch in word.chars() {
        let tok = match ch {
            'X' => Tok::Next,
            'G' => Tok::Globally,
            'F' => Tok::Finally,
            _ => break,
        };
        out.push((start + off, tok));
        off += 1;
    }
    let rest = &word[off..];
    if rest.is_empty() {
        return Ok(());
    }
    match rest {
        "true" => out.push((start + off, Tok::True)),
        "false" => out.push((start + off, Tok::False)),
        _ => {
            Atom::new(rest).map_err(|_| LtlError::UnknownToken {
                pos: start + off,
                token: rest.to_string(),
            })?;
            out.push((start + off, Tok::Ident(rest.to_string())));
        }
    }
    Ok(())
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> Option<usize> {
        self.toks.get(self.at).map(|(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> LtlError {
        LtlError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn implies(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implies()?;
            return Ok(Ltl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ltl, LtlError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Ltl::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ltl, LtlError> {
        let mut lhs = self.until()?;
        while self.eat(&Tok::And) {
            let rhs = self.until()?;
            lhs = Ltl::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            let rhs = self.until()?;
            return Ok(Ltl::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ltl, LtlError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("expected an operand"));
        };
        self.at += 1;
        Ok(match tok {
            Tok::Not => Ltl::not(self.unary()?),
            Tok::Next => Ltl::next(self.unary()?),
            Tok::Globally => Ltl::globally(self.unary()?),
            Tok::Finally => Ltl::finally(self.unary()?),
            Tok::True => Ltl::True,
            Tok::False => Ltl::False,
            Tok::Ident(name) => Ltl::Atom(Atom(name)),
            Tok::LParen => {
                let inner = self.implies()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                inner
            }
            other => {
                self.at -= 1;
                return Err(self.error(format!("expected an operand, found {}", describe(&other))));
            }
        })
    }
}

/// Parses a formula in the ASCII concrete syntax.
///
/// Precedence from tightest: prefix operators (`!`/`~`, `X`, `G`, `F`), then
/// right-associative `U`, then `&`, then `|`, then right-associative `->`.
pub fn parse_ltl(text: &str) -> Result<Ltl, LtlError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0 };
    let f = p.implies()?;
    if let Some(t) = p.peek() {
        return Err(p.error(format!("unexpected {}", describe(t))));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Ltl {
        Ltl::atom(n).unwrap()
    }

    #[test]
    fn fgy() {
        assert_eq!(
            parse_ltl("FGy").unwrap(),
            Ltl::finally(Ltl::globally(a("y")))
        );
    }

    #[test]
    fn cycle_formula() {
        let expected = Ltl::and(
            Ltl::globally(Ltl::finally(Ltl::and(a("y"), Ltl::next(Ltl::finally(a("r")))))),
            Ltl::globally(Ltl::not(a("b"))),
        );
        assert_eq!(parse_ltl("GF(y & X F r) & G!b").unwrap(), expected);
        assert_eq!(parse_ltl("GF(y & XF r) & G~b").unwrap(), expected);
    }

    #[test]
    fn missing_right_operand() {
        let err = parse_ltl("y U").unwrap_err();
        assert_eq!(
            err,
            LtlError::Syntax {
                pos: None,
                msg: "expected an operand".into()
            }
        );
        assert_eq!(err.to_string(), "syntax error at end of input: expected an operand");
    }

    #[test]
    fn unknown_token() {
        assert!(matches!(
            parse_ltl("a $ b"),
            Err(LtlError::UnknownToken { pos: 2, .. })
        ));
        assert!(matches!(
            parse_ltl("a - b"),
            Err(LtlError::UnknownToken { pos: 2, .. })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_ltl("a -> b -> c").unwrap(),
            Ltl::implies(a("a"), Ltl::implies(a("b"), a("c")))
        );
        assert_eq!(
            parse_ltl("a U b U c").unwrap(),
            Ltl::until(a("a"), Ltl::until(a("b"), a("c")))
        );
        assert_eq!(
            parse_ltl("a | b & c").unwrap(),
            Ltl::or(a("a"), Ltl::and(a("b"), a("c")))
        );
        assert_eq!(
            parse_ltl("a & b U c").unwrap(),
            Ltl::and(a("a"), Ltl::until(a("b"), a("c")))
        );
        assert_eq!(
            parse_ltl("!a U b").unwrap(),
            Ltl::until(Ltl::not(a("a")), a("b"))
        );
        assert_eq!(
            parse_ltl("a & b & c").unwrap(),
            Ltl::and(Ltl::and(a("a"), a("b")), a("c"))
        );
        assert_eq!(
            parse_ltl("a | b -> c").unwrap(),
            Ltl::implies(Ltl::or(a("a"), a("b")), a("c"))
        );
    }

    #[test]
    fn constants_and_groups() {
        assert_eq!(parse_ltl("true").unwrap(), Ltl::True);
        assert_eq!(parse_ltl("Ftrue").unwrap(), Ltl::finally(Ltl::True));
        assert_eq!(parse_ltl("(((y)))").unwrap(), a("y"));
        assert!(parse_ltl("(y").is_err());
        assert!(parse_ltl("y)").is_err());
        assert!(parse_ltl("").is_err());
        assert!(parse_ltl("& y").is_err());
    }
}
