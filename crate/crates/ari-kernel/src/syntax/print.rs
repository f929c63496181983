//! Printer producing the canonical concrete syntax.

use super::*;

impl fmt::Display for Termoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termoid::Var(v) => write!(f, "{v}"),
            Termoid::Num(n) if n == vf_value() => write!(f, "vf"),
            Termoid::Num(n) => write!(f, "num({n})"),
            Termoid::App(g, args) => {
                write!(f, "{}(", g.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Termoid::Iota(v, body) => {
                if *v == Var(1) && **body == omega_body() {
                    write!(f, "omega")
                } else {
                    write!(f, "iota({v}, {body})")
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_falsum() {
            return write!(f, "bot");
        }
        if let Some(a) = self.as_negation() {
            return write!(f, "neg({a})");
        }
        match self {
            Formula::Atom(p, l, r) => write!(f, "{}({l}, {r})", p.name()),
            Formula::Imp(a, b) => write!(f, "imp({a}, {b})"),
            Formula::And(a, b) => write!(f, "and({a}, {b})"),
            Formula::Or(a, b) => write!(f, "or({a}, {b})"),
            Formula::Forall(v, a) => write!(f, "all({v}, {a})"),
            Formula::Exists(v, a) => write!(f, "exists({v}, {a})"),
            Formula::Kleene(r) => write!(f, "F({r})"),
        }
    }
}
