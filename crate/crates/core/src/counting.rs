//! Finite relations standing in for witness predicates, the slice-count
//! transformers used by the modular counting constructions, and brute-force
//! `⊕_h ∃Sat` evaluators.

use std::collections::BTreeSet;

use crate::circuits::BoolFormula;
use crate::codes::{Alphabet, Word};
use crate::{Error, Result};

/// A finite set of word pairs. `(x)R` is the slice `{y : (x, y) ∈ R}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinRel {
    alphabet: Alphabet,
    pairs: BTreeSet<(Word, Word)>,
}

impl FinRel {
    pub fn new(alphabet: Alphabet, pairs: impl IntoIterator<Item = (Word, Word)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for (x, y) in &pairs {
            alphabet.check(x)?;
            alphabet.check(y)?;
        }
        Ok(FinRel { alphabet, pairs })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        FinRel { alphabet, pairs: BTreeSet::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn pairs(&self) -> &BTreeSet<(Word, Word)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn firsts(&self) -> BTreeSet<Word> {
        self.pairs.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn slice(&self, x: &Word) -> Vec<Word> {
        self.pairs.iter().filter(|(a, _)| a == x).map(|(_, y)| y.clone()).collect()
    }

    pub fn union(&self, other: &FinRel) -> Result<FinRel> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(FinRel { alphabet: self.alphabet, pairs: self.pairs.union(&other.pairs).cloned().collect() })
    }

    pub fn intersection(&self, other: &FinRel) -> BTreeSet<(Word, Word)> {
        self.pairs.intersection(&other.pairs).cloned().collect()
    }

    fn map_second(&self, f: impl Fn(&Word, &Word) -> Word) -> FinRel {
        let pairs = self.pairs.iter().map(|(x, y)| (x.clone(), f(x, y))).collect();
        FinRel { alphabet: self.alphabet, pairs }
    }
}

pub fn slice_count(r: &FinRel, x: &Word) -> usize {
    r.pairs.iter().filter(|(a, _)| a == x).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModSpec {
    h: u64,
    s1: BTreeSet<u64>,
    s2: BTreeSet<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    Neither,
}

impl ModSpec {
    pub fn new(h: u64, s1: impl IntoIterator<Item = u64>, s2: impl IntoIterator<Item = u64>) -> Result<Self> {
        if h < 2 {
            return Err(Error::Precondition(format!("modulus must be at least 2, got {h}")));
        }
        let s1: BTreeSet<u64> = s1.into_iter().collect();
        let s2: BTreeSet<u64> = s2.into_iter().collect();
        if s1.iter().chain(&s2).any(|&r| r >= h) {
            return Err(Error::Precondition(format!("residues must be below {h}")));
        }
        if !s1.is_disjoint(&s2) {
            return Err(Error::Precondition("residue sets must be disjoint".into()));
        }
        Ok(ModSpec { h, s1, s2 })
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn classify(&self, count: u64) -> Membership {
        let r = count % self.h;
        if self.s1.contains(&r) {
            Membership::Yes
        } else if self.s2.contains(&r) {
            Membership::No
        } else {
            Membership::Neither
        }
    }
}

pub fn in_class(r: &FinRel, x: &Word, spec: &ModSpec) -> Membership {
    spec.classify(slice_count(r, x) as u64)
}

/// `u_s = a_2^{s-1} a_1`, for `s >= 1`.
pub fn tag(s: usize) -> Word {
    let mut t = vec![1u8; s - 1];
    t.push(0);
    Word::letters(&t)
}

/// `{(x, x y a_1)} ∪ {(x, x)}` for `x` among the first components and
/// `probes`: every such slice grows by exactly one.
pub fn add_one(r: &FinRel, probes: &[Word]) -> Result<FinRel> {
    for p in probes {
        r.alphabet.check(p)?;
    }
    let mut out = r.map_second(|x, y| x.concat(y.tail()).child(0));
    for x in r.firsts().into_iter().chain(probes.iter().cloned()) {
        out.pairs.insert((x.clone(), x));
    }
    Ok(out)
}

/// `∪_{s=1..m} {(x, u_s y)}`: every slice is multiplied by `m`.
pub fn times_m(r: &FinRel, m: usize) -> Result<FinRel> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let mut pairs = BTreeSet::new();
    for s in 1..=m {
        let u = tag(s);
        for (x, y) in &r.pairs {
            pairs.insert((x.clone(), u.concat(y.tail())));
        }
    }
    Ok(FinRel { alphabet: r.alphabet, pairs })
}

/// Tags the second components of `r1` with `u_1` and those of `r2` with
/// `u_2`, so the results are disjoint with unchanged slice counts.
pub fn disjointify(r1: &FinRel, r2: &FinRel) -> Result<(FinRel, FinRel)> {
    if r1.alphabet != r2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let (u1, u2) = (tag(1), tag(2));
    Ok((r1.map_second(|_, y| u1.concat(y.tail())), r2.map_second(|_, y| u2.concat(y.tail()))))
}

/// Direct mode: `(x)R = {x}` for `x ∈ L`, empty otherwise. Complement mode,
/// over `universe`: one pair for `x ∉ L`, `h` pairs for `x ∈ L`.
pub fn np_embed(alphabet: Alphabet, l: &BTreeSet<Word>, universe: &[Word], h: usize, complement: bool) -> Result<FinRel> {
    if h < 2 {
        return Err(Error::Precondition(format!("modulus must be at least 2, got {h}")));
    }
    if !complement {
        return FinRel::new(alphabet, l.iter().map(|x| (x.clone(), x.clone())));
    }
    let mut pairs = Vec::new();
    for x in universe.iter().chain(l).collect::<BTreeSet<_>>() {
        pairs.push((x.clone(), x.clone()));
        if l.contains(x) {
            pairs.extend((1..h).map(|s| (x.clone(), x.concat(tag(s).tail()))));
        }
    }
    FinRel::new(alphabet, pairs)
}

fn mod_inverse(a: u64, h: u64) -> Option<u64> {
    (1..h).find(|&m| (a % h) * m % h == 1 % h)
}

/// Turns a relation whose slices are `≡ i` (members) or `≡ j` (others) mod
/// `h` into one with residues 1 and 0: `h - j` rounds of [`add_one`], then
/// [`times_m`] by the inverse of `i - j`.
pub fn normalize_pattern(r: &FinRel, i: u64, j: u64, h: u64, probes: &[Word]) -> Result<FinRel> {
    if h < 2 || i >= h || j >= h {
        return Err(Error::Precondition(format!("need residues below h >= 2 (i = {i}, j = {j}, h = {h})")));
    }
    let d = (i + h - j) % h;
    let m = mod_inverse(d, h)
        .ok_or_else(|| Error::Precondition(format!("i - j = {d} is not invertible mod {h}")))?;
    let mut cur = r.clone();
    for _ in 0..h - j {
        cur = add_one(&cur, probes)?;
    }
    times_m(&cur, m as usize)
}

/// `(#{b : ∃x B(x, b)}, #{b : ¬∃x B(x, b)})` with `x = x_1..x_m` and
/// `b = x_{m+1}..x_{m+n}`.
pub fn exists_sat_counts(b: &BoolFormula, m: usize, n: usize, cap: u64) -> Result<(u64, u64)> {
    if b.arity() > m + n {
        return Err(Error::Precondition(format!("formula uses x{} but only {} variables are declared", b.arity(), m + n)));
    }
    let needed = 1u128 << (m + n).min(127);
    if m + n >= 64 || needed > u128::from(cap) {
        return Err(Error::Cap { needed, cap: u128::from(cap) });
    }
    let sat = (0..1u64 << n)
        .filter(|&free| (0..1u64 << m).any(|x| b.eval_packed(x | (free << m))))
        .count() as u64;
    Ok((sat, (1u64 << n) - sat))
}

fn check_h(h: u64) -> Result<()> {
    if h < 2 {
        Err(Error::Precondition(format!("modulus must be at least 2, got {h}")))
    } else {
        Ok(())
    }
}

/// `#{b : ∃x B(x, b)} ≡ i (mod h)`.
pub fn oplus_exists_sat(b: &BoolFormula, m: usize, n: usize, h: u64, i: u64, cap: u64) -> Result<bool> {
    check_h(h)?;
    let (sat, _) = exists_sat_counts(b, m, n, cap)?;
    Ok(sat % h == i % h)
}

/// The satisfied count is `≡ 1` and the unsatisfied count `≡ 0` (mod `h`).
pub fn oplus_10_exists_sat(b: &BoolFormula, m: usize, n: usize, h: u64, cap: u64) -> Result<bool> {
    check_h(h)?;
    let (sat, unsat) = exists_sat_counts(b, m, n, cap)?;
    Ok(sat % h == 1 && unsat % h == 0)
}
