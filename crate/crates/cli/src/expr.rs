//! Element expressions: table literals, named bindings and the constructors
//! of the kernel, evaluated to canonical elements.
//!
//! ```text
//! expr := '{' entries '}' | name | 'idcode{' words '}'
//!       | 'compose(' expr (',' expr)* ')' | 'invert(' expr ')'
//!       | 'tau(' int ')' | 'eta(' int ')' | 'lift(' expr ',' int ',' int ')'
//!       | 'circuit(' path ')' | 'phi0(' formula ')'
//! ```
//!
//! Evaluation materializes every table, so its cost can be exponential in
//! the length of the expression (`tau(20)` alone has `k^21` entries).

use std::collections::HashMap;

use thmon::circuits::{circuit_to_element, lift_alphabet, phi0_b, tau_element, BoolFormula, Circuit};
use thmon::structure::eta;
use thmon::{Alphabet, Element, Error, PrefixCode, Result, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// The literal text, braces included.
    Table(String),
    Name(String),
    /// `compose(e1, ..., en)` applies `en` first.
    Compose(Vec<Expr>),
    Tau(usize),
    IdCode(Vec<String>),
    Eta(u8),
    Circuit(String),
    Phi0(String),
    Lift(Box<Expr>, u8, usize),
    Invert(Box<Expr>),
}

pub fn parse_element(text: &str) -> Result<Expr> {
    let mut p = Parser { s: text, pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos != text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn ws(&mut self) {
        let t = self.rest().trim_start();
        self.pos = self.s.len() - t.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Option<&str> {
        self.ws();
        let r = self.rest();
        let n = r.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(r.len());
        if n == 0 || r.as_bytes()[0].is_ascii_digit() {
            return None;
        }
        let start = self.pos;
        self.pos += n;
        Some(&self.s[start..start + n])
    }

    fn int<T: std::str::FromStr>(&mut self) -> Result<T> {
        self.ws();
        let r = self.rest();
        let n = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        let v = r[..n].parse().map_err(|_| self.err("expected a number"))?;
        self.pos += n;
        Ok(v)
    }

    /// Text up to the `close` matching an already consumed opener.
    fn raw_until(&mut self, open: char, close: char) -> Result<String> {
        let mut depth = 1;
        for (i, c) in self.rest().char_indices() {
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    let text = self.rest()[..i].to_string();
                    self.pos += i + c.len_utf8();
                    return Ok(text);
                }
            }
        }
        Err(self.err(&format!("unclosed `{open}`")))
    }

    fn expr(&mut self) -> Result<Expr> {
        self.ws();
        if self.eat('{') {
            let body = self.raw_until('{', '}')?;
            return Ok(Expr::Table(format!("{{{body}}}")));
        }
        let at = self.pos;
        let Some(name) = self.ident().map(str::to_string) else {
            return Err(self.err("expected an element expression"));
        };
        if name == "idcode" && self.eat('{') {
            let body = self.raw_until('{', '}')?;
            let words = body.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect();
            return Ok(Expr::IdCode(words));
        }
        if !self.eat('(') {
            return Ok(Expr::Name(name));
        }
        let e = match name.as_str() {
            "compose" => {
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                Expr::Compose(args)
            }
            "invert" => Expr::Invert(Box::new(self.expr()?)),
            "tau" => Expr::Tau(self.int()?),
            "eta" => Expr::Eta(self.int()?),
            "lift" => {
                let e = self.expr()?;
                self.expect(',')?;
                let k = self.int()?;
                self.expect(',')?;
                Expr::Lift(Box::new(e), k, self.int()?)
            }
            "circuit" => return Ok(Expr::Circuit(self.raw_until('(', ')')?.trim().to_string())),
            "phi0" => return Ok(Expr::Phi0(self.raw_until('(', ')')?.trim().to_string())),
            _ => {
                self.pos = at;
                return Err(self.err(&format!("unknown constructor `{name}`")));
            }
        };
        self.expect(')')?;
        Ok(e)
    }
}

/// Evaluation context: the ambient alphabet, the enumeration cap and the
/// named bindings (`id` and `zero` are built in).
#[derive(Debug, Clone)]
pub struct Env {
    pub alphabet: Alphabet,
    pub cap: u64,
    defs: HashMap<String, Element>,
}

impl Env {
    pub fn new(alphabet: Alphabet, cap: u64) -> Self {
        Env { alphabet, cap, defs: HashMap::new() }
    }

    /// Binds `name` to the value of `text`.
    pub fn define(&mut self, name: &str, text: &str) -> Result<()> {
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || matches!(name, "id" | "zero" | "idcode") {
            return Err(Error::Precondition(format!("`{name}` cannot be bound")));
        }
        let e = self.eval_str(text)?;
        self.defs.insert(name.to_string(), e);
        Ok(())
    }

    pub fn eval_str(&self, text: &str) -> Result<Element> {
        self.eval(&parse_element(text)?)
    }

    pub fn eval(&self, e: &Expr) -> Result<Element> {
        let a = self.alphabet;
        let out = match e {
            Expr::Table(t) => Element::parse(a, t)?,
            Expr::Name(n) => match n.as_str() {
                "id" => Element::identity(a),
                "zero" => Element::zero(a),
                _ => self
                    .defs
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::Precondition(format!("unbound name `{n}`")))?,
            },
            Expr::Compose(args) => {
                let mut acc = self.eval(&args[0])?;
                for x in &args[1..] {
                    acc = acc.compose(&self.eval(x)?)?;
                }
                acc
            }
            Expr::Tau(i) => {
                self.plain("tau")?;
                tau_element(*i, a.k())?
            }
            Expr::Eta(i) => {
                self.plain("eta")?;
                eta(*i, a.k())?
            }
            Expr::IdCode(ws) => {
                let words = ws.iter().map(|w| w.parse::<Word>()).collect::<Result<Vec<_>>>()?;
                Element::partial_identity(&PrefixCode::new(a, words)?)
            }
            Expr::Invert(x) => self.eval(x)?.invert()?,
            Expr::Circuit(path) => {
                self.binary("circuit")?;
                let text = std::fs::read_to_string(path)
                    .map_err(|err| Error::Precondition(format!("cannot read `{path}`: {err}")))?;
                circuit_to_element(&Circuit::parse_netlist(&text)?, self.cap)?
            }
            Expr::Phi0(f) => {
                self.binary("phi0")?;
                let b = BoolFormula::parse(f)?;
                check_cap(b.arity(), self.cap)?;
                phi0_b(&b, b.arity())?
            }
            Expr::Lift(x, k, l) => {
                if a != Alphabet::new(*k)? {
                    return Err(Error::Precondition(format!("lift to k = {k} used with alphabet {}", describe(a))));
                }
                let inner = Env { alphabet: Alphabet::new(2)?, cap: self.cap, defs: self.defs.clone() };
                lift_alphabet(&inner.eval(x)?, *k, *l)?
            }
        };
        Ok(out)
    }

    fn plain(&self, what: &str) -> Result<()> {
        if self.alphabet.is_bmode() {
            return Err(Error::Precondition(format!("`{what}` needs an A* alphabet")));
        }
        Ok(())
    }

    fn binary(&self, what: &str) -> Result<()> {
        if self.alphabet != Alphabet::new(2)? {
            return Err(Error::Precondition(format!("`{what}` builds an element over k = 2")));
        }
        Ok(())
    }
}

fn check_cap(vars: usize, cap: u64) -> Result<()> {
    let needed = 1u128 << vars.min(127);
    if needed > u128::from(cap) {
        return Err(Error::Cap { needed, cap: u128::from(cap) });
    }
    Ok(())
}

pub fn describe(a: Alphabet) -> String {
    match a.heads() {
        Some(b) => format!("k = {}, |B| = {b}", a.k()),
        None => format!("k = {}", a.k()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(k: u8) -> Env {
        Env::new(Alphabet::new(k).unwrap(), 1 << 20)
    }

    #[test]
    fn parses() {
        assert_eq!(parse_element("{0->1}").unwrap(), Expr::Table("{0->1}".into()));
        assert_eq!(
            parse_element("compose(x, tau(2))").unwrap(),
            Expr::Compose(vec![Expr::Name("x".into()), Expr::Tau(2)])
        );
        assert_eq!(parse_element("idcode{0, 10}").unwrap(), Expr::IdCode(vec!["0".into(), "10".into()]));
        assert_eq!(parse_element("phi0(x1 & (x2 | 0))").unwrap(), Expr::Phi0("x1 & (x2 | 0)".into()));
        assert!(parse_element("compose({0->1}").is_err());
        assert!(parse_element("frob(1)").is_err());
        assert!(parse_element("{0->1} extra").is_err());
    }

    #[test]
    fn evaluates() {
        let e = env(2);
        assert_eq!(e.eval_str("{0->1}").unwrap().entries().len(), 1);
        assert_eq!(e.eval_str("compose({1->0},{0->1})").unwrap().to_string(), "{0->0}");
        assert_eq!(e.eval_str("tau(1)").unwrap().entries().len(), 4);
        assert!(e.eval_str("compose(tau(1), tau(1))").unwrap().is_identity());
        assert_eq!(e.eval_str("invert({0->10})").unwrap().to_string(), "{10->0}");
        assert_eq!(e.eval_str("phi0(x1)").unwrap().to_string(), "{00->000, 01->011}");
        assert!(e.eval_str("eta(1)").unwrap().is_idempotent());
        assert!(env(3).eval_str("lift({^->^}, 3, 1)").unwrap().is_idempotent());
        assert!(env(3).eval_str("phi0(x1)").is_err());
        assert!(e.eval_str("nope").is_err());
    }

    #[test]
    fn bindings() {
        let mut e = env(2);
        e.define("s", "{0->1, 1->0}").unwrap();
        assert!(e.eval_str("compose(s, s)").unwrap().is_identity());
        assert!(e.define("id", "{0->0}").is_err());
        assert!(e.define("2x", "{0->0}").is_err());
    }
}
