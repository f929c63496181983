//! Parser for the ASCII concrete syntax.

use super::*;

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("syntax error at byte {pos}: {message}")]
pub struct SyntaxError {
    pub pos: usize,
    pub message: String,
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_termoid(text: &str) -> Result<Termoid, SyntaxError> {
    let mut p = Parser::new(text);
    let t = p.termoid()?;
    p.finish()?;
    Ok(t)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { s: text.as_bytes(), i: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { pos: self.i, message: message.into() })
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        self.ws();
        if self.i < self.s.len() {
            return self.err("trailing input");
        }
        Ok(())
    }

    fn expect(&mut self, c: u8) -> Result<(), SyntaxError> {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str), SyntaxError> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected an identifier");
        }
        Ok((start, std::str::from_utf8(&self.s[start..self.i]).unwrap()))
    }

    fn number(&mut self) -> Result<BigUint, SyntaxError> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected a number");
        }
        Ok(std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().unwrap())
    }

    fn variable(&mut self) -> Result<Var, SyntaxError> {
        let (pos, name) = self.ident()?;
        parse_var(name).ok_or(SyntaxError { pos, message: format!("expected a variable, found '{name}'") })
    }

    fn termoid(&mut self) -> Result<Termoid, SyntaxError> {
        let (pos, name) = self.ident()?;
        if let Some(v) = parse_var(name) {
            return Ok(Termoid::Var(v));
        }
        match name {
            "num" => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                Ok(Termoid::Num(n))
            }
            "vf" => Ok(vf()),
            "omega" => Ok(omega()),
            "iota" => {
                self.expect(b'(')?;
                let v = self.variable()?;
                self.expect(b',')?;
                let body = self.formula()?;
                self.expect(b')')?;
                if !body.occurs_free(v) {
                    return Err(SyntaxError { pos, message: format!("iota body does not contain {v}") });
                }
                Ok(Termoid::Iota(v, Box::new(body)))
            }
            _ => {
                let Some(f) = Func::from_name(name) else {
                    return Err(SyntaxError { pos, message: format!("unknown function symbol '{name}'") });
                };
                self.expect(b'(')?;
                let mut args = vec![self.termoid()?];
                for _ in 1..f.arity() {
                    self.expect(b',')?;
                    args.push(self.termoid()?);
                }
                self.expect(b')')?;
                Ok(Termoid::App(f, args))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let (pos, name) = self.ident()?;
        match name {
            "bot" => Ok(falsum()),
            "eq" | "lt" | "le" => {
                let p = match name {
                    "eq" => Pred::Eq,
                    "lt" => Pred::Lt,
                    _ => Pred::Le,
                };
                self.expect(b'(')?;
                let l = self.termoid()?;
                self.expect(b',')?;
                let r = self.termoid()?;
                self.expect(b')')?;
                Ok(Formula::Atom(p, l, r))
            }
            "imp" | "and" | "or" => {
                self.expect(b'(')?;
                let a = self.formula()?;
                self.expect(b',')?;
                let b = self.formula()?;
                self.expect(b')')?;
                Ok(match name {
                    "imp" => imp(a, b),
                    "and" => and(a, b),
                    _ => or(a, b),
                })
            }
            "neg" => {
                self.expect(b'(')?;
                let a = self.formula()?;
                self.expect(b')')?;
                Ok(negate(a))
            }
            "all" | "exists" => {
                self.expect(b'(')?;
                let v = self.variable()?;
                self.expect(b',')?;
                let a = self.formula()?;
                self.expect(b')')?;
                Ok(if name == "all" { forall(v, a) } else { exists(v, a) })
            }
            "F" => {
                self.expect(b'(')?;
                let r = self.termoid()?;
                self.expect(b')')?;
                Ok(Formula::Kleene(r))
            }
            _ => Err(SyntaxError { pos, message: format!("expected a formula, found '{name}'") }),
        }
    }
}

fn parse_var(name: &str) -> Option<Var> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok().map(Var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_formula("eq(num(0),num(1))").unwrap(), falsum());
        let m = parse_formula("imp(eq(ell(x1,vf),num(0)),bot)").unwrap();
        assert_eq!(m, negate(eq(app2(Func::Ell, var(1), vf()), num(0))));
        assert_eq!(parse_formula("F(exp0(x1))").unwrap(), kleene(app1(Func::Exp0, var(1))));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_formula("eq(x0, num(1))").is_err());
        assert!(parse_formula("eq(x1, num(1)) junk").is_err());
        assert!(parse_termoid("add(x1)").is_err());
        assert!(parse_termoid("foo(x1)").is_err());
        assert!(parse_termoid("iota(x1, eq(x2, x2))").is_err());
        let e = parse_formula("imp(bot,").unwrap_err();
        assert_eq!(e.pos, 8);
    }

    #[test]
    fn sugar() {
        assert_eq!(parse_termoid("omega").unwrap(), omega());
        assert_eq!(parse_formula("neg(bot)").unwrap(), negate(falsum()));
        assert_eq!(parse_termoid("Mp(x1, x2)").unwrap(), app2(Func::MpCode, var(1), var(2)));
        assert_eq!(parse_termoid("mp(x1, x2)").unwrap(), app2(Func::Mp, var(1), var(2)));
    }
}
