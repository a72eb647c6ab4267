use super::Formula;

/// Syntax error with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    SetPred,
    PairPred,
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    In,
    Not,
    And,
    Or,
    Arrow,
    DoubleArrow,
    Forall,
    Exists,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::SetPred => "`S`".into(),
            Tok::PairPred => "`P`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Equals => "`=`".into(),
            Tok::In => "`in`".into(),
            Tok::Not => "`not`".into(),
            Tok::And => "`and`".into(),
            Tok::Or => "`or`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
        }
    }
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'=' => Tok::Equals,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DoubleArrow
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..=i];
                match word {
                    "in" => Tok::In,
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "S" => Tok::SetPred,
                    "P" => Tok::PairPred,
                    w if w.as_bytes()[0].is_ascii_lowercase() => Tok::Var(w.to_string()),
                    w => return Err(err(start, format!("unknown predicate `{w}`"))),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(err(
                at,
                format!("expected {}, found {}", want.describe(), t.describe()),
            )),
            None => Err(err(
                at,
                format!("expected {}, found end of input", want.describe()),
            )),
        }
    }

    fn var(&mut self) -> Result<String, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Var(v)) => Ok(v),
            Some(t) => Err(err(
                at,
                format!("expected a variable, found {}", t.describe()),
            )),
            None => Err(err(at, "expected a variable, found end of input")),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if self.peek() == Some(&Tok::DoubleArrow) {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.bump() == Some(Tok::Forall);
                let v = self.var()?;
                self.expect(Tok::Dot)?;
                // the body extends as far right as possible
                let body = self.iff()?;
                Ok(if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::SetPred) => {
                self.expect(Tok::LParen)?;
                let v = self.var()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::IsSet(v))
            }
            Some(Tok::PairPred) => {
                self.expect(Tok::LParen)?;
                let u = self.var()?;
                self.expect(Tok::Comma)?;
                let v = self.var()?;
                self.expect(Tok::Comma)?;
                let w = self.var()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Pair(u, v, w))
            }
            Some(Tok::Var(v)) => {
                let at = self.offset();
                match self.bump() {
                    Some(Tok::Equals) => Ok(Formula::Eq(v, self.var()?)),
                    Some(Tok::In) => Ok(Formula::In(v, self.var()?)),
                    Some(t) => Err(err(
                        at,
                        format!("expected `=` or `in` after `{v}`, found {}", t.describe()),
                    )),
                    None => Err(err(at, format!("expected `=` or `in` after `{v}`"))),
                }
            }
            Some(t) => Err(err(at, format!("unexpected {}", t.describe()))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

/// Parses a formula.
///
/// Precedence, tightest first: `not`, `and`, `or`, `->`, `<->`. `and` and
/// `or` associate to the left, `->` and `<->` to the right. A quantifier
/// body extends as far to the right as possible.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = p.iff()?;
    if let Some(t) = p.peek() {
        return Err(err(p.offset(), format!("trailing {}", t.describe())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom() {
        assert_eq!(parse_formula("x in y").unwrap(), Formula::member("x", "y"));
    }

    #[test]
    fn quantified_negation() {
        assert_eq!(
            parse_formula("forall x. not (x in x)").unwrap(),
            Formula::forall("x", Formula::not(Formula::member("x", "x")))
        );
    }

    #[test]
    fn predicates_and_conjunction() {
        assert_eq!(
            parse_formula("P(a,b,c) and S(a)").unwrap(),
            Formula::and(Formula::pair("a", "b", "c"), Formula::is_set("a"))
        );
    }

    #[test]
    fn precedence_ladder() {
        let f = parse_formula("a in b or c in d and e = f -> not g in h <-> S(k)").unwrap();
        let expected = Formula::iff(
            Formula::implies(
                Formula::or(
                    Formula::member("a", "b"),
                    Formula::and(Formula::member("c", "d"), Formula::eq("e", "f")),
                ),
                Formula::not(Formula::member("g", "h")),
            ),
            Formula::is_set("k"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn quantifier_scopes_right() {
        let f = parse_formula("a in b and forall x. x in a or x in b").unwrap();
        let expected = Formula::and(
            Formula::member("a", "b"),
            Formula::forall(
                "x",
                Formula::or(Formula::member("x", "a"), Formula::member("x", "b")),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("a = b -> b = c -> c = d").unwrap();
        let expected = Formula::implies(
            Formula::eq("a", "b"),
            Formula::implies(Formula::eq("b", "c"), Formula::eq("c", "d")),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("x in").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_formula("x in y )").unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse_formula("Q(x)").unwrap_err();
        assert_eq!(e.position, 0);
        let e = parse_formula("x # y").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse_formula("forall X. x in x").is_err());
        assert!(parse_formula("").is_err());
    }
}
