//! Partial combinational circuits, boolean formulas, and the reduction gadgets
//! that turn formulas into circuits and into elements of `M_{2,1}` / `M_{k,1}`.
//!
//! Bits are `a_1 = 0` and `a_2 = 1`. Input `x_i` of a circuit is bit `i-1` of
//! the packed input.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::codes::{Alphabet, PrefixCode, Word};
use crate::morphisms::{compose_tables, Element, MorphTable};
use crate::{Error, Result};

pub const DEFAULT_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolFormula {
    Const(bool),
    /// 0-based; rendered as `x{i+1}`.
    Var(usize),
    Not(Box<BoolFormula>),
    And(Box<BoolFormula>, Box<BoolFormula>),
    Or(Box<BoolFormula>, Box<BoolFormula>),
}

impl BoolFormula {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = FormulaParser { s: text.as_bytes(), pos: 0 };
        let f = p.or()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(f)
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        match self {
            BoolFormula::Const(b) => *b,
            BoolFormula::Var(i) => x[*i],
            BoolFormula::Not(f) => !f.eval(x),
            BoolFormula::And(a, b) => a.eval(x) && b.eval(x),
            BoolFormula::Or(a, b) => a.eval(x) || b.eval(x),
        }
    }

    /// Evaluates on the assignment packed into the low bits of `x`.
    pub fn eval_packed(&self, x: u64) -> bool {
        match self {
            BoolFormula::Const(b) => *b,
            BoolFormula::Var(i) => (x >> i) & 1 == 1,
            BoolFormula::Not(f) => !f.eval_packed(x),
            BoolFormula::And(a, b) => a.eval_packed(x) && b.eval_packed(x),
            BoolFormula::Or(a, b) => a.eval_packed(x) || b.eval_packed(x),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            BoolFormula::Const(_) | BoolFormula::Var(_) => 0,
            BoolFormula::Not(f) => 1 + f.depth(),
            BoolFormula::And(a, b) | BoolFormula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// One more than the largest variable index (0 for closed formulas).
    pub fn arity(&self) -> usize {
        match self {
            BoolFormula::Const(_) => 0,
            BoolFormula::Var(i) => i + 1,
            BoolFormula::Not(f) => f.arity(),
            BoolFormula::And(a, b) | BoolFormula::Or(a, b) => a.arity().max(b.arity()),
        }
    }

    fn has_const(&self) -> bool {
        match self {
            BoolFormula::Const(_) => true,
            BoolFormula::Var(_) => false,
            BoolFormula::Not(f) => f.has_const(),
            BoolFormula::And(a, b) | BoolFormula::Or(a, b) => a.has_const() || b.has_const(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            BoolFormula::Or(..) => 0,
            BoolFormula::And(..) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for BoolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, c: &BoolFormula, min: u8| {
            if c.prec() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            BoolFormula::Const(b) => write!(f, "{}", u8::from(*b)),
            BoolFormula::Var(i) => write!(f, "x{}", i + 1),
            BoolFormula::Not(c) => {
                f.write_str("!")?;
                side(f, c, 2)
            }
            BoolFormula::And(a, b) => {
                side(f, a, 1)?;
                f.write_str(" & ")?;
                side(f, b, 2)
            }
            BoolFormula::Or(a, b) => {
                side(f, a, 0)?;
                f.write_str(" | ")?;
                side(f, b, 1)
            }
        }
    }
}

struct FormulaParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl FormulaParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<BoolFormula> {
        let mut f = self.and()?;
        while self.eat(b'|') {
            f = BoolFormula::Or(Box::new(f), Box::new(self.and()?));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<BoolFormula> {
        let mut f = self.unary()?;
        while self.eat(b'&') {
            f = BoolFormula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<BoolFormula> {
        if self.eat(b'!') {
            return Ok(BoolFormula::Not(Box::new(self.unary()?)));
        }
        if self.eat(b'(') {
            let f = self.or()?;
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            return Ok(f);
        }
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(BoolFormula::Const(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(BoolFormula::Const(true))
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                // A bare `x` is `x1`.
                if start == self.pos {
                    return Ok(BoolFormula::Var(0));
                }
                let n: usize = std::str::from_utf8(&self.s[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err("expected a variable number"))?;
                if n == 0 {
                    return Err(self.err("variables are numbered from x1"));
                }
                Ok(BoolFormula::Var(n - 1))
            }
            _ => Err(self.err("expected a variable, constant, `!` or `(`")),
        }
    }
}

/// Number of satisfying assignments over `m` variables.
pub fn count_sat(b: &BoolFormula, m: usize) -> u64 {
    (0..1u64 << m).filter(|&x| b.eval_packed(x)).count() as u64
}

pub fn is_tautology(b: &BoolFormula, m: usize) -> bool {
    count_sat(b, m) == 1u64 << m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
    Fork,
    Cross,
    Id1,
}

impl GateKind {
    pub fn arity(self) -> (usize, usize) {
        match self {
            GateKind::And | GateKind::Or => (2, 1),
            GateKind::Not | GateKind::Id1 => (1, 1),
            GateKind::Fork => (1, 2),
            GateKind::Cross => (2, 2),
        }
    }

    fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Fork => "FORK",
            GateKind::Cross => "CROSS",
            GateKind::Id1 => "ID1",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_uppercase().as_str() {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "NOT" => GateKind::Not,
            "FORK" => GateKind::Fork,
            "CROSS" => GateKind::Cross,
            "ID1" => GateKind::Id1,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalResult {
    Bits(Vec<bool>),
    Bottom,
}

/// An acyclic, single-driver, single-reader gate network. Gates are stored
/// in a topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    wires: Vec<String>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    gates: Vec<Gate>,
}

const BOT: u8 = 2;

impl Circuit {
    pub fn new(wires: Vec<String>, inputs: Vec<usize>, outputs: Vec<usize>, gates: Vec<Gate>) -> Result<Self> {
        let bad = |m: String| Err(Error::Circuit(m));
        let nw = wires.len();
        let mut driver: Vec<Option<usize>> = vec![None; nw];
        let mut readers = vec![0usize; nw];
        const PORT: usize = usize::MAX;
        for &w in inputs.iter().chain(&outputs).chain(gates.iter().flat_map(|g| g.inputs.iter().chain(&g.outputs))) {
            if w >= nw {
                return bad(format!("wire index {w} out of range"));
            }
        }
        for &w in &inputs {
            if driver[w].replace(PORT).is_some() {
                return bad(format!("wire `{}` has two drivers", wires[w]));
            }
        }
        for (gi, g) in gates.iter().enumerate() {
            let (ni, no) = g.kind.arity();
            if g.inputs.len() != ni || g.outputs.len() != no {
                return bad(format!("gate `{}` ({}) needs {ni} inputs and {no} outputs", g.id, g.kind.name()));
            }
            for &w in &g.outputs {
                if driver[w].replace(gi).is_some() {
                    return bad(format!("wire `{}` has two drivers", wires[w]));
                }
            }
            for &w in &g.inputs {
                readers[w] += 1;
            }
        }
        for &w in &outputs {
            readers[w] += 1;
        }
        for w in 0..nw {
            if readers[w] > 1 {
                return bad(format!("wire `{}` is read more than once (use FORK)", wires[w]));
            }
            if readers[w] == 1 && driver[w].is_none() {
                return bad(format!("wire `{}` is read but never driven", wires[w]));
            }
        }
        // Kahn's algorithm, stable in the original gate order.
        let mut pending: Vec<usize> = gates
            .iter()
            .map(|g| g.inputs.iter().filter(|&&w| driver[w] != Some(PORT)).count())
            .collect();
        let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); nw];
        for (gi, g) in gates.iter().enumerate() {
            for &w in &g.inputs {
                consumers[w].push(gi);
            }
        }
        let mut ready: BTreeSet<usize> = (0..gates.len()).filter(|&g| pending[g] == 0).collect();
        let mut order = Vec::with_capacity(gates.len());
        while let Some(g) = ready.pop_first() {
            order.push(g);
            for &w in &gates[g].outputs {
                for &c in &consumers[w] {
                    pending[c] -= 1;
                    if pending[c] == 0 {
                        ready.insert(c);
                    }
                }
            }
        }
        if order.len() != gates.len() {
            return bad("the gate graph has a cycle".into());
        }
        let gates = order.into_iter().map(|g| gates[g].clone()).collect();
        Ok(Circuit { wires, inputs, outputs, gates })
    }

    pub fn m(&self) -> usize {
        self.inputs.len()
    }

    pub fn n(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn eval(&self, x: &[bool]) -> Result<EvalResult> {
        if x.len() != self.m() {
            return Err(Error::Precondition(format!("circuit has {} inputs, got {}", self.m(), x.len())));
        }
        let packed = x.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        Ok(match self.eval_packed(packed) {
            Some(y) => EvalResult::Bits((0..self.n()).map(|i| (y >> i) & 1 == 1).collect()),
            None => EvalResult::Bottom,
        })
    }

    /// Packed evaluation; `None` is the bottom outcome.
    pub fn eval_packed(&self, x: u64) -> Option<u64> {
        let mut v = vec![BOT; self.wires.len()];
        for (i, &w) in self.inputs.iter().enumerate() {
            v[w] = ((x >> i) & 1) as u8;
        }
        for g in &self.gates {
            let a = v[g.inputs[0]];
            match g.kind {
                GateKind::And | GateKind::Or => {
                    let b = v[g.inputs[1]];
                    v[g.outputs[0]] = if a == BOT || b == BOT {
                        BOT
                    } else if g.kind == GateKind::And {
                        a & b
                    } else {
                        a | b
                    };
                }
                GateKind::Not => v[g.outputs[0]] = if a == BOT { BOT } else { 1 - a },
                GateKind::Id1 => v[g.outputs[0]] = if a == 1 { 1 } else { BOT },
                GateKind::Fork => {
                    v[g.outputs[0]] = a;
                    v[g.outputs[1]] = a;
                }
                GateKind::Cross => {
                    let b = v[g.inputs[1]];
                    v[g.outputs[0]] = b;
                    v[g.outputs[1]] = a;
                }
            }
        }
        let mut y = 0u64;
        for (i, &w) in self.outputs.iter().enumerate() {
            match v[w] {
                BOT => return None,
                b => y |= u64::from(b) << i,
            }
        }
        Some(y)
    }

    fn check_cap(&self, cap: u64) -> Result<()> {
        let needed = 1u128 << self.m().min(127);
        if self.m() >= 64 || needed > u128::from(cap) {
            return Err(Error::Cap { needed, cap: u128::from(cap) });
        }
        if self.n() > 64 {
            return Err(Error::Circuit("more than 64 outputs".into()));
        }
        Ok(())
    }

    fn image_packed(&self, cap: u64) -> Result<BTreeSet<u64>> {
        self.check_cap(cap)?;
        Ok((0..1u64 << self.m()).filter_map(|x| self.eval_packed(x)).collect())
    }

    pub fn image(&self, cap: u64) -> Result<BTreeSet<Vec<bool>>> {
        let n = self.n();
        Ok(self
            .image_packed(cap)?
            .into_iter()
            .map(|y| (0..n).map(|i| (y >> i) & 1 == 1).collect())
            .collect())
    }

    pub fn image_size(&self, cap: u64) -> Result<u64> {
        Ok(self.image_packed(cap)?.len() as u64)
    }

    /// `|Im(C)| ≡ 1 (mod h)`.
    pub fn image_size_mod(&self, h: u64, cap: u64) -> Result<bool> {
        check_modulus(h)?;
        Ok(self.image_size(cap)? % h == 1 % h)
    }

    pub fn domain_size(&self, cap: u64) -> Result<u64> {
        self.check_cap(cap)?;
        Ok((0..1u64 << self.m()).filter(|&x| self.eval_packed(x).is_some()).count() as u64)
    }

    /// `|Dom(C)| ≡ 1 (mod h)`.
    pub fn domain_size_mod(&self, h: u64, cap: u64) -> Result<bool> {
        check_modulus(h)?;
        Ok(self.domain_size(cap)? % h == 1 % h)
    }

    /// Line-oriented netlist text, readable by [`Circuit::parse_netlist`].
    pub fn to_netlist(&self) -> String {
        let name = |w: &usize| self.wires[*w].clone();
        let mut s = String::from("netlist v1\n");
        s += &format!("inputs {}\n", self.inputs.iter().map(name).collect::<Vec<_>>().join(" "));
        s += &format!("outputs {}\n", self.outputs.iter().map(name).collect::<Vec<_>>().join(" "));
        for g in &self.gates {
            s += &format!(
                "gate {} {} {} -> {}\n",
                g.id,
                g.kind.name(),
                g.inputs.iter().map(name).collect::<Vec<_>>().join(" "),
                g.outputs.iter().map(name).collect::<Vec<_>>().join(" ")
            );
        }
        s
    }

    pub fn parse_netlist(text: &str) -> Result<Self> {
        let mut wires: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut wire = |name: &str| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                wires.push(name.to_string());
                wires.len() - 1
            })
        };
        let mut inputs = None;
        let mut outputs = None;
        let mut gates = Vec::new();
        let mut seen_header = false;
        let mut offset = 0;
        for line in text.lines() {
            let pos = offset;
            offset += line.len() + 1;
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { pos, msg: format!("{msg}: `{line}`") };
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            if !seen_header {
                if line != "netlist v1" {
                    return Err(err("expected header `netlist v1`"));
                }
                seen_header = true;
                continue;
            }
            match head {
                "inputs" if inputs.is_none() => inputs = Some(toks.map(&mut wire).collect::<Vec<_>>()),
                "outputs" if outputs.is_none() => outputs = Some(toks.map(&mut wire).collect::<Vec<_>>()),
                "gate" => {
                    let id = toks.next().ok_or_else(|| err("missing gate id"))?.to_string();
                    let kind = toks
                        .next()
                        .and_then(GateKind::parse)
                        .ok_or_else(|| err("unknown gate kind"))?;
                    let rest: Vec<&str> = toks.collect();
                    let arrow = rest.iter().position(|t| *t == "->").ok_or_else(|| err("missing `->`"))?;
                    let ins = rest[..arrow].iter().map(|t| wire(t)).collect();
                    let outs = rest[arrow + 1..].iter().map(|t| wire(t)).collect();
                    gates.push(Gate { id, kind, inputs: ins, outputs: outs });
                }
                _ => return Err(err("unexpected line")),
            }
        }
        if !seen_header {
            return Err(Error::Parse { pos: 0, msg: "empty netlist".into() });
        }
        let inputs = inputs.unwrap_or_default();
        let outputs = outputs.ok_or(Error::Parse { pos: 0, msg: "missing `outputs` line".into() })?;
        Circuit::new(wires, inputs, outputs, gates)
    }
}

fn check_modulus(h: u64) -> Result<()> {
    if h == 0 {
        Err(Error::Precondition("modulus must be positive".into()))
    } else {
        Ok(())
    }
}

#[derive(Default)]
struct Builder {
    wires: usize,
    gates: Vec<Gate>,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.wires += 1;
        self.wires - 1
    }

    fn gate(&mut self, kind: GateKind, inputs: Vec<usize>) -> Vec<usize> {
        let outputs: Vec<usize> = (0..kind.arity().1).map(|_| self.fresh()).collect();
        let id = format!("g{}", self.gates.len() + 1);
        self.gates.push(Gate { id, kind, inputs, outputs: outputs.clone() });
        outputs
    }

    /// `n` readable copies of `w` (a chain of FORK gates).
    fn copies(&mut self, w: usize, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n);
        let mut cur = w;
        for i in 0..n {
            if i + 1 == n {
                out.push(cur);
            } else {
                let f = self.gate(GateKind::Fork, vec![cur]);
                out.push(f[0]);
                cur = f[1];
            }
        }
        out
    }

    fn compile(&mut self, f: &BoolFormula, pool: &mut [Vec<usize>]) -> usize {
        match f {
            BoolFormula::Const(b) => {
                let x = pool[0].pop().expect("counted");
                let y = pool[0].pop().expect("counted");
                let ny = self.gate(GateKind::Not, vec![y])[0];
                let kind = if *b { GateKind::Or } else { GateKind::And };
                self.gate(kind, vec![x, ny])[0]
            }
            BoolFormula::Var(i) => pool[*i].pop().expect("counted"),
            BoolFormula::Not(c) => {
                let w = self.compile(c, pool);
                self.gate(GateKind::Not, vec![w])[0]
            }
            BoolFormula::And(a, b) | BoolFormula::Or(a, b) => {
                let wa = self.compile(a, pool);
                let wb = self.compile(b, pool);
                let kind = if matches!(f, BoolFormula::And(..)) { GateKind::And } else { GateKind::Or };
                self.gate(kind, vec![wa, wb])[0]
            }
        }
    }

    fn finish(self, inputs: Vec<usize>, outputs: Vec<usize>) -> Circuit {
        let wires = (0..self.wires).map(|i| format!("w{i}")).collect();
        Circuit::new(wires, inputs, outputs, self.gates).expect("compiled circuits are well formed")
    }
}

fn count_uses(f: &BoolFormula, counts: &mut [usize]) {
    match f {
        BoolFormula::Const(_) => counts[0] += 2,
        BoolFormula::Var(i) => counts[*i] += 1,
        BoolFormula::Not(c) => count_uses(c, counts),
        BoolFormula::And(a, b) | BoolFormula::Or(a, b) => {
            count_uses(a, counts);
            count_uses(b, counts);
        }
    }
}

/// Compiles `b` over `m` inputs; `extra[i]` additional copies of input `i`
/// are returned for the caller.
fn compile_with(b: &BoolFormula, m: usize, extra: &[usize]) -> Result<(Builder, Vec<usize>, usize, Vec<Vec<usize>>)> {
    if b.arity() > m {
        return Err(Error::Precondition(format!("formula uses x{} but only {m} variables are declared", b.arity())));
    }
    if b.has_const() && m == 0 {
        return Err(Error::Precondition("constants need at least one input wire".into()));
    }
    let mut counts = vec![0usize; m];
    count_uses(b, &mut counts);
    let mut bld = Builder::default();
    let inputs: Vec<usize> = (0..m).map(|_| bld.fresh()).collect();
    let mut pool = Vec::with_capacity(m);
    let mut spare = Vec::with_capacity(m);
    for i in 0..m {
        let e = extra.get(i).copied().unwrap_or(0);
        let mut c = bld.copies(inputs[i], counts[i] + e);
        let rest = c.split_off(counts[i]);
        pool.push(c);
        spare.push(rest);
    }
    let out = bld.compile(b, &mut pool);
    Ok((bld, inputs, out, spare))
}

/// A total circuit with one output computing `b` over `m` inputs.
pub fn formula_to_circuit(b: &BoolFormula, m: usize) -> Result<Circuit> {
    let (bld, inputs, out, _) = compile_with(b, m, &[])?;
    Ok(bld.finish(inputs, vec![out]))
}

/// `C(x_1, x_2) = x_2` if `B(x_1, x_2)`, else bottom, with `|x_1| = m`,
/// `|x_2| = n`. For `n = 0` the single output is the `ID1` wire.
pub fn c_gadget(b: &BoolFormula, m: usize, n: usize) -> Result<Circuit> {
    let extra: Vec<usize> = (0..m + n).map(|i| usize::from(i >= m)).collect();
    let (mut bld, inputs, out, spare) = compile_with(b, m + n, &extra)?;
    let g = bld.gate(GateKind::Id1, vec![out])[0];
    if n == 0 {
        return Ok(bld.finish(inputs, vec![g]));
    }
    let gs = bld.copies(g, n);
    let outputs = (0..n).map(|j| bld.gate(GateKind::And, vec![gs[j], spare[m + j][0]])[0]).collect();
    Ok(bld.finish(inputs, outputs))
}

/// `C_B(x) = 1` if `B(x)`, else bottom; its domain is the satisfying set.
pub fn domain_gadget(b: &BoolFormula, m: usize) -> Result<Circuit> {
    let (mut bld, inputs, out, _) = compile_with(b, m, &[])?;
    let g = bld.gate(GateKind::Id1, vec![out])[0];
    Ok(bld.finish(inputs, vec![g]))
}

fn bits_word(x: u64, len: usize) -> Word {
    let v: Vec<u8> = (0..len).map(|i| ((x >> i) & 1) as u8).collect();
    Word::letters(&v)
}

fn binary() -> Alphabet {
    Alphabet::new(2).expect("k = 2")
}

/// The table `{(x, C(x)) : x ∈ Dom(C)}` over `{0,1}`.
pub fn circuit_to_element(c: &Circuit, cap: u64) -> Result<Element> {
    c.check_cap(cap)?;
    let entries = (0..1u64 << c.m())
        .filter_map(|x| c.eval_packed(x).map(|y| (bits_word(x, c.m()), bits_word(y, c.n()))))
        .collect();
    Ok(MorphTable::new(binary(), entries)?.canonicalize())
}

/// `τ_{i,i+1}` with its word-length weight `i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauGenerator {
    pub i: usize,
    pub element: Element,
}

impl TauGenerator {
    pub fn new(i: usize, k: u8) -> Result<Self> {
        Ok(TauGenerator { i, element: tau_element(i, k)? })
    }

    pub fn length(&self) -> usize {
        self.i + 1
    }
}

/// Swaps the letters at positions `i` and `i+1` (1-based).
pub fn tau_element(i: usize, k: u8) -> Result<Element> {
    if i == 0 {
        return Err(Error::Precondition("tau positions start at 1".into()));
    }
    let a = Alphabet::new(k)?;
    let entries = a
        .tails(i + 1)
        .into_iter()
        .map(|t| {
            let mut s = t.clone();
            s.swap(i - 1, i);
            (Word::letters(&t), Word::letters(&s))
        })
        .collect();
    Ok(MorphTable::new(a, entries)?.canonicalize())
}

pub fn id_code(p: &PrefixCode) -> Element {
    Element::partial_identity(p)
}

fn formula_table(b: &BoolFormula, m: usize) -> Result<MorphTable> {
    if b.arity() > m {
        return Err(Error::Precondition(format!("formula uses x{} but only {m} variables are declared", b.arity())));
    }
    let entries = (0..1u64 << m)
        .map(|x| (bits_word(x, m), Word::letters(&[u8::from(b.eval_packed(x))])))
        .collect();
    MorphTable::new(binary(), entries)
}

fn code_of(words: &[&str]) -> PrefixCode {
    PrefixCode::new(binary(), words.iter().map(|w| w.parse().unwrap()).collect()).unwrap()
}

/// `id_{0A^*} ∘ {(x, B(x))}`; zero iff `B` is a tautology.
pub fn taut_reduction(b: &BoolFormula, m: usize) -> Result<Element> {
    let beta = formula_table(b, m)?.canonicalize();
    id_code(&code_of(&["0"])).compose(&beta)
}

/// `(ψ, φ)` with `ψ ≤_J φ` iff `B1` is not a tautology or `B2` is one.
pub fn nontaut_or_taut_instance(b1: &BoolFormula, m1: usize, b2: &BoolFormula, m2: usize) -> Result<(Element, Element)> {
    Ok((taut_reduction(b1, m1)?, taut_reduction(b2, m2)?))
}

/// `{(0x, 0 B(x) x)}` over `x ∈ {0,1}^m`.
pub fn phi0_table(b: &BoolFormula, m: usize) -> Result<MorphTable> {
    if b.arity() > m {
        return Err(Error::Precondition(format!("formula uses x{} but only {m} variables are declared", b.arity())));
    }
    let entries = (0..1u64 << m)
        .map(|x| {
            let w = bits_word(x, m);
            let d = Word::letters(&[0]).concat(w.tail());
            let v = Word::letters(&[0, u8::from(b.eval_packed(x))]).concat(w.tail());
            (d, v)
        })
        .collect();
    MorphTable::new(binary(), entries)
}

pub fn phi0_b(b: &BoolFormula, m: usize) -> Result<Element> {
    Ok(phi0_table(b, m)?.canonicalize())
}

/// The representative `id_{01} ∘ Φ_B ∘ id_{0}` as produced by table
/// composition; its `imC` has exactly `#sat(B)` words.
pub fn inv_d_table(b: &BoolFormula, m: usize) -> Result<MorphTable> {
    let id0 = MorphTable::new(binary(), vec![("0".parse()?, "0".parse()?)])?;
    let id01 = MorphTable::new(binary(), vec![("01".parse()?, "01".parse()?)])?;
    let inner = compose_tables(&phi0_table(b, m)?, &id0)?;
    compose_tables(&id01, &inner)
}

pub fn inv_d_reduction(b: &BoolFormula, m: usize) -> Result<Element> {
    Ok(inv_d_table(b, m)?.canonicalize())
}

/// One factor of the `id_{{a_1,a_2}^ℓ}` factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `τ_{i,i+1}`.
    Tau(usize),
    /// `id_{{a_1,a_2}}`.
    IdPair,
}

/// `[id] ∘ Π_{j=2..ℓ} τ_{j,1} ∘ id ∘ τ_{j,1}`, with `τ_{j,1}` written as
/// `τ_{j-1,j} ⋯ τ_{1,2} ⋯ τ_{j-1,j}`. The leading plain factor constrains
/// position 1 and is included when `with_first` is set.
pub fn id_power_factors(l: usize, with_first: bool) -> Vec<Factor> {
    let mut out = Vec::new();
    if with_first {
        out.push(Factor::IdPair);
    }
    for j in (2..=l).rev() {
        let swap: Vec<Factor> = (1..j).rev().chain(2..j).map(Factor::Tau).collect();
        out.extend(swap.iter().copied());
        out.push(Factor::IdPair);
        out.extend(swap.iter().copied());
    }
    out
}

/// Multiplies factors left to right (the rightmost factor applies first).
pub fn factor_product(factors: &[Factor], k: u8) -> Result<Element> {
    let a = Alphabet::new(k)?;
    let pair = id_code(&PrefixCode::new(a, vec![Word::letters(&[0]), Word::letters(&[1])])?);
    let mut taus: HashMap<usize, Element> = HashMap::new();
    let mut acc = Element::identity(a);
    for f in factors {
        let e = match f {
            Factor::IdPair => pair.clone(),
            Factor::Tau(i) => match taus.get(i) {
                Some(t) => t.clone(),
                None => {
                    let t = tau_element(*i, k)?;
                    taus.insert(*i, t.clone());
                    t
                }
            },
        };
        acc = acc.compose(&e)?;
    }
    Ok(acc)
}

/// `id_{{a_1,a_2}^ℓ}` over `k` letters, as a direct table.
pub fn id_power(l: usize, k: u8) -> Result<Element> {
    let a = Alphabet::new(k)?;
    let words = binary().tails(l).into_iter().map(|t| Word::letters(&t)).collect();
    Ok(id_code(&PrefixCode::new(a, words)?))
}

/// Reads a table over `{a_1, a_2}` as a table over `k` letters and restricts
/// it to `{a_1,a_2}^ℓ A^*`.
pub fn lift_alphabet(e: &Element, k: u8, l: usize) -> Result<Element> {
    if e.alphabet() != binary() {
        return Err(Error::Precondition("lift needs an element over two letters".into()));
    }
    if l < e.max_len() {
        return Err(Error::Precondition(format!("l = {l} is below the table's word length {}", e.max_len())));
    }
    let a = Alphabet::new(k)?;
    let psi = MorphTable::new(a, e.entries().to_vec())?;
    Ok(compose_tables(psi.clone().canonicalize().table(), id_power(l, k)?.table())?.canonicalize())
}

/// Formula corpora shared by the parsimony checks.
pub mod corpus {
    use super::BoolFormula;

    /// Every formula of depth at most `depth` over `x_1..x_vars` and the
    /// constants.
    pub fn exhaustive(vars: usize, depth: usize) -> Vec<BoolFormula> {
        let atoms: Vec<BoolFormula> = (0..vars)
            .map(BoolFormula::Var)
            .chain([BoolFormula::Const(false), BoolFormula::Const(true)])
            .collect();
        let mut level = atoms.clone();
        for _ in 0..depth {
            let mut next = atoms.clone();
            next.extend(level.iter().map(|f| BoolFormula::Not(Box::new(f.clone()))));
            for a in &level {
                for b in &level {
                    next.push(BoolFormula::And(Box::new(a.clone()), Box::new(b.clone())));
                    next.push(BoolFormula::Or(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
            level = next;
        }
        level
    }

    pub fn random(seed: u64, vars: usize, depth: usize, count: usize) -> Vec<BoolFormula> {
        let mut r = crate::gen::rng(seed);
        (0..count).map(|_| crate::gen::formula(&mut r, vars, depth)).collect()
    }
}
