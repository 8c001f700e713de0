//! Recursive-descent parser for the concrete formula grammar:
//!
//! ```text
//! φ ::= "A" var "." φ | "E" var "." φ | "~" φ
//!     | "(" φ "&" φ ")" | "(" φ "|" φ ")" | "(" φ "->" φ ")"
//!     | rel "(" term {"," term} ")" | term "=" term
//! var, rel ::= [a-zA-Z][a-zA-Z0-9_]*
//! ```
//!
//! A quantifier and its variable form one token ("Ax.", "Ey2."). An
//! identifier in term position is a constant when the signature declares it,
//! and a variable otherwise. Redundant grouping parentheses are accepted.

use super::{Formula, LogicError, Signature, Term};

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
        sig,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> LogicError {
        LogicError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .input
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), LogicError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", b as char)))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), LogicError> {
        self.skip_ws();
        let start = self.pos;
        match self.input.get(self.pos) {
            Some(b) if b.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(self.err("expected an identifier")),
        }
        while self
            .input
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.input[start..self.pos])
            .expect("ascii")
            .to_string();
        Ok((name, start))
    }

    fn term_from(&self, name: String) -> Term {
        if self.sig.has_constant(&name) {
            Term::Const(name)
        } else {
            Term::Var(name)
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let lhs = self.formula()?;
                match self.peek() {
                    Some(b')') => {
                        // grouping parentheses
                        self.pos += 1;
                        Ok(lhs)
                    }
                    Some(b'&') => {
                        self.pos += 1;
                        let rhs = self.formula()?;
                        self.expect(b')')?;
                        Ok(Formula::and(lhs, rhs))
                    }
                    Some(b'|') => {
                        self.pos += 1;
                        let rhs = self.formula()?;
                        self.expect(b')')?;
                        Ok(Formula::or(lhs, rhs))
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        self.expect(b'>')?;
                        let rhs = self.formula()?;
                        self.expect(b')')?;
                        Ok(Formula::implies(lhs, rhs))
                    }
                    _ => Err(self.err("expected `&`, `|`, `->` or `)`")),
                }
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let (name, start) = self.ident()?;
                // Quantifier token: leading A/E, nonempty variable, then '.'
                if (name.starts_with('A') || name.starts_with('E'))
                    && name.len() >= 2
                    && self.input.get(self.pos) == Some(&b'.')
                {
                    self.pos += 1;
                    let var = name[1..].to_string();
                    let body = self.formula()?;
                    return Ok(if name.starts_with('A') {
                        Formula::forall(var, body)
                    } else {
                        Formula::exists(var, body)
                    });
                }
                match self.peek() {
                    Some(b'(') => {
                        let arity =
                            self.sig
                                .relation_arity(&name)
                                .ok_or(LogicError::UnknownSymbol {
                                    name: name.clone(),
                                    pos: start,
                                })?;
                        self.pos += 1;
                        let mut args = Vec::new();
                        loop {
                            let (arg, _) = self.ident()?;
                            args.push(self.term_from(arg));
                            match self.peek() {
                                Some(b',') => self.pos += 1,
                                Some(b')') => {
                                    self.pos += 1;
                                    break;
                                }
                                _ => return Err(self.err("expected `,` or `)`")),
                            }
                        }
                        if args.len() != arity {
                            return Err(LogicError::ArityMismatch {
                                name,
                                pos: start,
                                expected: arity,
                                got: args.len(),
                            });
                        }
                        Ok(Formula::Rel(name, args))
                    }
                    Some(b'=') => {
                        if self.sig.relation_arity(&name).is_some() {
                            return Err(LogicError::Syntax {
                                pos: start,
                                msg: format!("relation symbol `{name}` used as a term"),
                            });
                        }
                        self.pos += 1;
                        let (rhs, rpos) = self.ident()?;
                        if self.sig.relation_arity(&rhs).is_some() {
                            return Err(LogicError::Syntax {
                                pos: rpos,
                                msg: format!("relation symbol `{rhs}` used as a term"),
                            });
                        }
                        Ok(Formula::Eq(self.term_from(name), self.term_from(rhs)))
                    }
                    _ => Err(self.err("expected `(` or `=` after identifier")),
                }
            }
            _ => Err(self.err("expected a formula")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Term;

    fn sig_graph() -> Signature {
        Signature::new([("E".to_string(), 2)], ["c".to_string()]).unwrap()
    }

    #[test]
    fn parses_identity_sentence() {
        let f = parse_formula("Ax.(x=x)", &Signature::empty()).unwrap();
        assert_eq!(f, Formula::forall("x", Formula::eq_vars("x", "x")));
    }

    #[test]
    fn parses_existential_atomic_with_constant() {
        let f = parse_formula("Ex.E(x,c)", &sig_graph()).unwrap();
        assert_eq!(
            f,
            Formula::exists(
                "x",
                Formula::Rel(
                    "E".into(),
                    vec![Term::var("x"), Term::Const("c".into())]
                )
            )
        );
    }

    #[test]
    fn parses_negated_conjunction() {
        let f = parse_formula("~(E(x,y) & E(y,x))", &sig_graph()).unwrap();
        let e = |a: &str, b: &str| Formula::Rel("E".into(), vec![Term::var(a), Term::var(b)]);
        assert_eq!(f, Formula::not(Formula::and(e("x", "y"), e("y", "x"))));
    }

    #[test]
    fn rejects_unknown_relation() {
        let err = parse_formula("R(x)", &sig_graph()).unwrap_err();
        assert!(matches!(err, LogicError::UnknownSymbol { ref name, .. } if name == "R"));
    }

    #[test]
    fn rejects_arity_mismatch() {
        let err = parse_formula("E(x)", &sig_graph()).unwrap_err();
        assert!(matches!(
            err,
            LogicError::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            }
        ));
    }

    #[test]
    fn reports_syntax_error_position() {
        let err = parse_formula("(x=x &", &sig_graph()).unwrap_err();
        assert!(matches!(err, LogicError::Syntax { pos: 6, .. } | LogicError::Syntax { pos: 7, .. }));
    }

    #[test]
    fn quantifier_variable_may_start_with_a() {
        let f = parse_formula("AAj.AAj=AAj", &Signature::empty()).unwrap();
        assert_eq!(f, Formula::forall("Aj", Formula::eq_vars("AAj", "AAj")));
    }

    #[test]
    fn render_parse_round_trip_is_whitespace_exact() {
        for text in [
            "Ax.Ey.E(x,y)",
            "~(E(x,y) & E(y,x))",
            "(x=c | Ez.(E(z,z) -> z=x))",
        ] {
            let f = parse_formula(text, &sig_graph()).unwrap();
            let rendered = f.render();
            let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
            assert_eq!(strip(&rendered), strip(text));
            assert_eq!(parse_formula(&rendered, &sig_graph()).unwrap(), f);
        }
    }
}
