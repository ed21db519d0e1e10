//! Words, finite prefix codes and the right ideals they generate.
//!
//! Letters are stored 0-based: `a_1..a_k` are `0..k-1` and `b_1..b_i` are
//! `0..i-1`. A word over `B A^*` carries its `B`-letter in `head`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::{Error, Result};

pub type Tail = SmallVec<[u8; 16]>;

/// Arity of `A`, and of `B` when working in `B A^*` mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    k: u8,
    heads: Option<u8>,
}

impl Alphabet {
    pub const MAX_K: u8 = 10;

    /// Plain `A^*` mode with `|A| = k`.
    pub fn new(k: u8) -> Result<Self> {
        if !(2..=Self::MAX_K).contains(&k) {
            return Err(Error::Alphabet(format!("k = {k} outside 2..={}", Self::MAX_K)));
        }
        Ok(Alphabet { k, heads: None })
    }

    /// `B A^*` mode with `|A| = k`, `|B| = b`.
    pub fn with_heads(k: u8, b: u8) -> Result<Self> {
        let mut a = Self::new(k)?;
        if b == 0 || b > 32 {
            return Err(Error::Alphabet(format!("|B| = {b} outside 1..=32")));
        }
        a.heads = Some(b);
        Ok(a)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn heads(&self) -> Option<u8> {
        self.heads
    }

    pub fn is_bmode(&self) -> bool {
        self.heads.is_some()
    }

    pub fn contains(&self, w: &Word) -> bool {
        let head_ok = match (self.heads, w.head) {
            (None, None) => true,
            (Some(b), Some(h)) => h < b,
            _ => false,
        };
        head_ok && w.tail.iter().all(|&a| a < self.k)
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::Word(w.to_string()))
        }
    }

    /// The shortest words: `{ε}` in `A^*` mode, `B` in `B A^*` mode.
    pub fn roots(&self) -> Vec<Word> {
        match self.heads {
            None => vec![Word::empty()],
            Some(b) => (0..b).map(|h| Word::headed(h, &[])).collect(),
        }
    }

    /// All words of total length at most `maxlen`, length-then-lex ordered.
    pub fn words_upto(&self, maxlen: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer = self.roots();
        if self.is_bmode() && maxlen == 0 {
            return out;
        }
        let base = layer[0].len();
        for _ in base..=maxlen {
            out.extend(layer.iter().cloned());
            layer = layer
                .iter()
                .flat_map(|w| (0..self.k).map(move |a| w.child(a)))
                .collect();
        }
        out.sort();
        out
    }

    /// All `k^n` tails of length `n`, lexicographic.
    pub fn tails(&self, n: usize) -> Vec<Tail> {
        let mut out: Vec<Tail> = vec![Tail::new()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|t| {
                    (0..self.k).map(move |a| {
                        let mut t = t.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Word {
    head: Option<u8>,
    tail: Tail,
}

// The derived clone goes through an element-wise iterator.
impl Clone for Word {
    fn clone(&self) -> Self {
        Word { head: self.head, tail: Tail::from_slice(&self.tail) }
    }
}

impl Word {
    pub fn empty() -> Self {
        Word { head: None, tail: Tail::new() }
    }

    pub fn letters(tail: &[u8]) -> Self {
        Word { head: None, tail: Tail::from_slice(tail) }
    }

    pub fn headed(head: u8, tail: &[u8]) -> Self {
        Word { head: Some(head), tail: Tail::from_slice(tail) }
    }

    pub fn from_parts(head: Option<u8>, tail: Tail) -> Self {
        Word { head, tail }
    }

    pub fn head(&self) -> Option<u8> {
        self.head
    }

    pub fn tail(&self) -> &[u8] {
        &self.tail
    }

    pub fn len(&self) -> usize {
        self.tail.len() + usize::from(self.head.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_none() && self.tail.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.head == other.head && other.tail.starts_with(&self.tail)
    }

    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// `z` with `self = prefix · z`, if `prefix` is a prefix of `self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<&[u8]> {
        if prefix.is_prefix_of(self) {
            Some(&self.tail[prefix.tail.len()..])
        } else {
            None
        }
    }

    pub fn concat(&self, z: &[u8]) -> Word {
        let mut tail = Tail::with_capacity(self.tail.len() + z.len());
        tail.extend_from_slice(&self.tail);
        tail.extend_from_slice(z);
        Word { head: self.head, tail }
    }

    pub fn child(&self, a: u8) -> Word {
        let mut w = self.clone();
        w.tail.push(a);
        w
    }

    /// Drops the last `A`-letter. `None` on `ε` and on bare `B`-letters.
    pub fn parent(&self) -> Option<(Word, u8)> {
        let (&a, rest) = self.tail.split_last()?;
        Some((Word { head: self.head, tail: Tail::from_slice(rest) }, a))
    }

    pub fn with_head(&self, head: Option<u8>) -> Word {
        Word { head, tail: Tail::from_slice(&self.tail) }
    }

    /// Lexicographic comparison in which a prefix precedes its extensions.
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        self.head.cmp(&other.head).then_with(|| self.tail.cmp(&other.tail))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.head {
            None if self.tail.is_empty() => return f.write_str("^"),
            None => {}
            Some(h) => {
                write!(f, "b{}", h as u32 + 1)?;
                if !self.tail.is_empty() {
                    f.write_str(".")?;
                }
            }
        }
        for &a in &self.tail {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg} in word `{s}`") };
        let digits = |t: &str| -> Result<Tail> {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| bad("expected a digit")))
                .collect()
        };
        if s == "^" {
            return Ok(Word::empty());
        }
        if let Some(rest) = s.strip_prefix('b') {
            let (num, tail) = match rest.split_once('.') {
                Some((n, t)) if !t.is_empty() => (n, t),
                Some(_) => return Err(bad("empty tail after `.`")),
                None => (rest, ""),
            };
            let j: u8 = num.parse().map_err(|_| bad("bad B-letter index"))?;
            if j == 0 {
                return Err(bad("B-letters are numbered from 1"));
            }
            return Ok(Word { head: Some(j - 1), tail: digits(tail)? });
        }
        if s.is_empty() {
            return Err(bad("empty word (use `^`)"));
        }
        Ok(Word { head: None, tail: digits(s)? })
    }
}

/// True iff no word is a prefix of another (equal words count as a violation).
pub fn is_prefix_code(ws: &[Word]) -> bool {
    first_violation(ws).is_none()
}

fn first_violation(ws: &[Word]) -> Option<(Word, Word)> {
    let mut sorted: Vec<&Word> = ws.iter().collect();
    sorted.sort_by(|a, b| a.lex_cmp(b));
    sorted
        .windows(2)
        .find(|p| p[0].is_prefix_of(p[1]))
        .map(|p| (p[0].clone(), p[1].clone()))
}

/// A finite prefix code, stored sorted by length then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixCode {
    alphabet: Alphabet,
    words: Vec<Word>,
}

impl PrefixCode {
    pub fn new(alphabet: Alphabet, mut words: Vec<Word>) -> Result<Self> {
        for w in &words {
            alphabet.check(w)?;
        }
        words.sort();
        words.dedup();
        if let Some((u, w)) = first_violation(&words) {
            return Err(Error::NotPrefixCode(u.to_string(), w.to_string()));
        }
        Ok(PrefixCode { alphabet, words })
    }

    /// Caller guarantees `words` is a sorted, deduplicated antichain.
    pub(crate) fn from_sorted(alphabet: Alphabet, words: Vec<Word>) -> Self {
        debug_assert!(is_prefix_code(&words));
        PrefixCode { alphabet, words }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        PrefixCode { alphabet, words: Vec::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Is `w` in the right ideal `P A^*`?
    pub fn ideal_contains(&self, w: &Word) -> bool {
        self.words.iter().any(|p| p.is_prefix_of(w))
    }

    /// Does `P A^*` meet `u A^*`?
    pub fn meets(&self, u: &Word) -> bool {
        self.words.iter().any(|p| p.comparable(u))
    }

    /// `Σ k^{-|tail|}` over the code; in `B A^*` mode this adds the residual
    /// sums of all heads.
    pub fn kraft_sum(&self) -> BigRational {
        kraft(self.alphabet.k, self.words.iter().map(|w| w.tail.len()))
    }

    pub fn is_maximal(&self) -> bool {
        match self.alphabet.heads {
            None => self.kraft_sum().is_one(),
            Some(b) => (0..b).all(|h| {
                let lens = self.words.iter().filter(|w| w.head == Some(h)).map(|w| w.tail.len());
                kraft(self.alphabet.k, lens).is_one()
            }),
        }
    }

    /// Sibling-merge normal form: the unique representative of the essential
    /// equality class of `P A^*`.
    pub fn canonical(&self) -> PrefixCode {
        let k = self.alphabet.k as usize;
        let mut by_len: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
        for w in &self.words {
            by_len.entry(w.tail.len()).or_default().push(w.clone());
        }
        let mut out = Vec::new();
        while let Some((len, mut layer)) = by_len.pop_last() {
            if len == 0 {
                out.extend(layer);
                continue;
            }
            layer.sort_by(|a, b| a.lex_cmp(b));
            let mut i = 0;
            while i < layer.len() {
                let (p, _) = layer[i].parent().expect("nonempty tail");
                let mut j = i;
                while j < layer.len() && p.is_prefix_of(&layer[j]) {
                    j += 1;
                }
                if j - i == k {
                    by_len.entry(len - 1).or_default().push(p);
                } else {
                    out.extend(layer[i..j].iter().cloned());
                }
                i = j;
            }
        }
        out.sort();
        PrefixCode::from_sorted(self.alphabet, out)
    }

    /// Replaces the word at `idx` by its `k` children.
    pub fn split(&self, idx: usize) -> Result<PrefixCode> {
        let w = self.words.get(idx).ok_or(Error::Index(idx))?;
        let mut words: Vec<Word> = self.words.iter().filter(|u| *u != w).cloned().collect();
        words.extend((0..self.alphabet.k).map(|a| w.child(a)));
        words.sort();
        Ok(PrefixCode::from_sorted(self.alphabet, words))
    }

    /// Minimal `z` with `p·z ∈ P A^*`, or `None` when `p` itself is in `P A^*`.
    pub fn residual(&self, p: &Word) -> Option<Vec<Tail>> {
        if self.ideal_contains(p) {
            return None;
        }
        Some(
            self.words
                .iter()
                .filter_map(|q| q.strip_prefix(p).map(Tail::from_slice))
                .collect(),
        )
    }
}

impl fmt::Display for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

fn kraft(k: u8, lens: impl Iterator<Item = usize>) -> BigRational {
    let lens: Vec<usize> = lens.collect();
    let Some(&max) = lens.iter().max() else {
        return BigRational::zero();
    };
    let k = BigUint::from(k);
    let mut num = BigUint::zero();
    for l in lens {
        num += k.pow((max - l) as u32);
    }
    BigRational::new(num.into(), k.pow(max as u32).into())
}

fn same_alphabet(p: &PrefixCode, q: &PrefixCode) -> Result<()> {
    if p.alphabet == q.alphabet {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// `P A^* =_ess Q A^*`.
pub fn ess_equal(p: &PrefixCode, q: &PrefixCode) -> Result<bool> {
    same_alphabet(p, q)?;
    Ok(p.canonical() == q.canonical())
}

/// Every word of `P A^*` has an essential residual in `Q A^*`; equivalently
/// every right ideal meeting `P A^*` meets `P A^* ∩ Q A^*`.
pub fn ess_contained(p: &PrefixCode, q: &PrefixCode) -> Result<bool> {
    same_alphabet(p, q)?;
    let k = p.alphabet.k;
    Ok(p.words.iter().all(|w| match q.residual(w) {
        None => true,
        Some(zs) => kraft(k, zs.iter().map(|z| z.len())).is_one(),
    }))
}

/// `P A^* ⊆ Q A^*` and the former is essential in the latter.
pub fn is_essential_in(p: &PrefixCode, q: &PrefixCode) -> Result<bool> {
    same_alphabet(p, q)?;
    Ok(p.words.iter().all(|w| q.ideal_contains(w)) && ess_contained(q, p)?)
}

/// All prefix codes with at most `max_size` words of length at most `maxlen`.
pub fn enumerate_codes(alphabet: Alphabet, maxlen: usize, max_size: usize) -> Vec<PrefixCode> {
    let words = alphabet.words_upto(maxlen);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        words: &[Word],
        start: usize,
        max_size: usize,
        stack: &mut Vec<Word>,
        out: &mut Vec<Vec<Word>>,
    ) {
        out.push(stack.clone());
        if stack.len() == max_size {
            return;
        }
        for i in start..words.len() {
            if stack.iter().all(|s| !s.comparable(&words[i])) {
                stack.push(words[i].clone());
                rec(words, i + 1, max_size, stack, out);
                stack.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(&words, 0, max_size, &mut stack, &mut raw);
    for mut ws in raw {
        ws.sort();
        out.push(PrefixCode::from_sorted(alphabet, ws));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.words.cmp(&b.words)));
    out
}
