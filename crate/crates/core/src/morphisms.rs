//! Elements of `M_{k,1}` / `M_{k,i}` as finite tables.
//!
//! A [`MorphTable`] is any representative (domain a prefix code, images
//! arbitrary). An [`Element`] is the maximally extended representative, so two
//! elements are equal iff their tables are identical.

use std::collections::HashMap;
use std::fmt;

use crate::codes::{Alphabet, PrefixCode, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorphTable {
    alphabet: Alphabet,
    entries: Vec<(Word, Word)>,
}

impl MorphTable {
    pub fn new(alphabet: Alphabet, mut entries: Vec<(Word, Word)>) -> Result<Self> {
        for (d, v) in &entries {
            alphabet.check(d)?;
            alphabet.check(v)?;
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(p) = entries.windows(2).find(|p| p[0].0 == p[1].0) {
            return Err(Error::NotPrefixCode(p[0].0.to_string(), p[1].0.to_string()));
        }
        if entries.len() <= 32 {
            for (i, (u, _)) in entries.iter().enumerate() {
                if let Some((w, _)) = entries[i + 1..].iter().find(|(w, _)| u.is_prefix_of(w)) {
                    return Err(Error::NotPrefixCode(u.to_string(), w.to_string()));
                }
            }
        } else {
            PrefixCode::new(alphabet, entries.iter().map(|e| e.0.clone()).collect())?;
        }
        Ok(MorphTable { alphabet, entries })
    }

    pub(crate) fn from_raw(alphabet: Alphabet, mut entries: Vec<(Word, Word)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        debug_assert!(crate::codes::is_prefix_code(
            &entries.iter().map(|e| e.0.clone()).collect::<Vec<_>>()
        ));
        MorphTable { alphabet, entries }
    }

    /// Parses `{u->v, ...}` (also accepts `→`); `^` is the empty word.
    pub fn parse_literal(alphabet: Alphabet, text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or(Error::Parse { pos: 0, msg: "table literal must be `{...}`".into() })?;
        let mut entries = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, v) = part
                .split_once("->")
                .or_else(|| part.split_once('→'))
                .ok_or(Error::Parse { pos: 0, msg: format!("entry `{part}` lacks `->`") })?;
            entries.push((d.trim().parse()?, v.trim().parse()?));
        }
        MorphTable::new(alphabet, entries)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn entries(&self) -> &[(Word, Word)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn domain_code(&self) -> PrefixCode {
        PrefixCode::from_sorted(self.alphabet, self.entries.iter().map(|e| e.0.clone()).collect())
    }

    /// Distinct image words, sorted.
    pub fn image_words(&self) -> Vec<Word> {
        let mut v = self.image_multiset();
        v.dedup();
        v
    }

    /// Image words with multiplicity, sorted.
    pub fn image_multiset(&self) -> Vec<Word> {
        let mut v: Vec<Word> = self.entries.iter().map(|e| e.1.clone()).collect();
        v.sort();
        v
    }

    /// The minimal antichain generating the image right ideal (`imC`).
    pub fn image_code(&self) -> PrefixCode {
        let mut v = self.image_words();
        v.sort_by(|a, b| a.lex_cmp(b));
        let mut out: Vec<Word> = Vec::new();
        for w in v {
            if out.last().map_or(true, |l| !l.is_prefix_of(&w)) {
                out.push(w);
            }
        }
        out.sort();
        PrefixCode::from_sorted(self.alphabet, out)
    }

    pub fn apply(&self, w: &Word) -> Option<Word> {
        self.entries
            .iter()
            .find_map(|(d, v)| w.strip_prefix(d).map(|z| v.concat(z)))
    }

    /// Longest domain or image word.
    pub fn max_len(&self) -> usize {
        self.entries.iter().map(|(d, v)| d.len().max(v.len())).max().unwrap_or(0)
    }

    /// Replaces entry `idx` by its `k^depth` essential restrictions.
    pub fn restrict(&self, idx: usize, depth: usize) -> Result<MorphTable> {
        if idx >= self.entries.len() {
            return Err(Error::Index(idx));
        }
        let k = self.alphabet.k();
        let (d, v) = &self.entries[idx];
        let mut block = Vec::with_capacity((k as usize).pow(depth as u32));
        push_restrictions(&mut block, d, v, depth, k);
        // All extensions of `d` of one length are contiguous in the order.
        let mut entries = Vec::with_capacity(self.entries.len() - 1 + block.len());
        let rest = || self.entries.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, e)| e);
        let at = rest().take_while(|e| e.0 < block[0].0).count();
        entries.extend(rest().take(at).cloned());
        entries.extend(block);
        entries.extend(rest().skip(at).cloned());
        Ok(MorphTable { alphabet: self.alphabet, entries })
    }

    /// Splits every entry so that all image words have the same length.
    pub fn equalize_images(&self) -> MorphTable {
        let target = self.entries.iter().map(|e| e.1.len()).max().unwrap_or(0);
        let mut entries = Vec::new();
        for (d, v) in &self.entries {
            for z in self.alphabet.tails(target - v.len()) {
                entries.push((d.concat(&z), v.concat(&z)));
            }
        }
        MorphTable::from_raw(self.alphabet, entries)
    }

    pub fn canonicalize(&self) -> Element {
        Element(canonical_table(self.clone()))
    }

    /// [`MorphTable::canonicalize`] reusing this table's storage.
    pub fn into_canonical(self) -> Element {
        Element(canonical_table(self))
    }
}

fn push_restrictions(out: &mut Vec<(Word, Word)>, d: &Word, v: &Word, depth: usize, k: u8) {
    if depth == 0 {
        out.push((d.clone(), v.clone()));
        return;
    }
    for a in 0..k {
        push_restrictions(out, &d.child(a), &v.child(a), depth - 1, k);
    }
}

/// Start of a contiguous, mergeable sibling group in a table sorted by
/// domain (length, then lex).
fn mergeable_group(entries: &[(Word, Word)], k: usize, from: usize) -> Option<usize> {
    (from..(entries.len() + 1).saturating_sub(k)).find(|&i| {
        let (d0, v0) = &entries[i];
        let (n, m) = (d0.tail().len(), v0.tail().len());
        if n == 0 || m == 0 || d0.tail()[n - 1] != 0 || v0.tail()[m - 1] != 0 {
            return false;
        }
        entries[i + 1..i + k].iter().zip(1u8..).all(|((d, v), a)| {
            d.tail().len() == n
                && v.tail().len() == m
                && d.tail()[n - 1] == a
                && v.tail()[m - 1] == a
                && d.head() == d0.head()
                && v.head() == v0.head()
                && d.tail()[..n - 1] == d0.tail()[..n - 1]
                && v.tail()[..m - 1] == v0.tail()[..m - 1]
        })
    })
}

fn canonical_table(t: MorphTable) -> MorphTable {
    let k = t.alphabet.k() as usize;
    let Some(first) = mergeable_group(&t.entries, k, 0) else {
        return t;
    };
    if t.entries.len() <= 256 {
        // Merging in any order reaches the same maximal extension. A merge at
        // `i` puts the parent at `pos <= i`, so earlier windows stay dead.
        let mut entries = t.entries;
        let mut next = Some(first);
        while let Some(i) = next {
            let p = entries[i].0.parent().expect("nonempty tail").0;
            let q = entries[i].1.parent().expect("nonempty tail").0;
            entries.drain(i..i + k);
            let pos = entries.partition_point(|e| e.0 < p);
            entries.insert(pos, (p, q));
            next = mergeable_group(&entries, k, (pos + 1).saturating_sub(k));
        }
        return MorphTable { alphabet: t.alphabet, entries };
    }
    let maxl = t.entries.iter().map(|e| e.0.tail().len()).max().unwrap_or(0);
    let mut layers: Vec<Vec<(Word, Word)>> = vec![Vec::new(); maxl + 1];
    for e in &t.entries {
        layers[e.0.tail().len()].push(e.clone());
    }
    let mut out = Vec::new();
    for len in (0..=maxl).rev() {
        let mut layer = std::mem::take(&mut layers[len]);
        if len == 0 {
            out.extend(layer);
            continue;
        }
        layer.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let mut i = 0;
        while i < layer.len() {
            let (p, _) = layer[i].0.parent().expect("nonempty tail");
            let mut j = i;
            while j < layer.len() && p.is_prefix_of(&layer[j].0) {
                j += 1;
            }
            let merged = if j - i == k { sibling_image(&layer[i..j]) } else { None };
            match merged {
                Some(q) => layers[len - 1].push((p, q)),
                None => out.extend(layer[i..j].iter().cloned()),
            }
            i = j;
        }
    }
    MorphTable::from_raw(t.alphabet, out)
}

/// For a full sibling group `(p·a_i, v_i)` sorted by `a_i`: the common `q`
/// with `v_i = q·a_i`, if any.
fn sibling_image(group: &[(Word, Word)]) -> Option<Word> {
    let (q, _) = group[0].1.parent()?;
    for (i, (_, v)) in group.iter().enumerate() {
        match v.parent() {
            Some((qq, a)) if a as usize == i && qq == q => {}
            _ => return None,
        }
    }
    Some(q)
}

/// Raw table composition, `φ` applied first.
pub fn compose_tables(psi: &MorphTable, phi: &MorphTable) -> Result<MorphTable> {
    if psi.alphabet != phi.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let mut out = Vec::new();
    for (u, v) in &phi.entries {
        for (v2, w) in &psi.entries {
            if let Some(z) = v.strip_prefix(v2) {
                out.push((u.clone(), w.concat(z)));
            } else if let Some(z) = v2.strip_prefix(v) {
                out.push((u.concat(z), w.clone()));
            }
        }
    }
    Ok(MorphTable::from_raw(psi.alphabet, out))
}

impl fmt::Display for MorphTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}->{v}")?;
        }
        f.write_str("}")
    }
}

/// A canonical (maximally extended) table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element(MorphTable);

impl Element {
    pub fn zero(alphabet: Alphabet) -> Self {
        Element(MorphTable { alphabet, entries: Vec::new() })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let entries = alphabet.roots().into_iter().map(|r| (r.clone(), r)).collect();
        Element(MorphTable { alphabet, entries })
    }

    /// `id_P`: the identity restricted to `P A^*`.
    pub fn partial_identity(code: &PrefixCode) -> Self {
        let entries = code.words().iter().map(|w| (w.clone(), w.clone())).collect();
        MorphTable::from_raw(code.alphabet(), entries).canonicalize()
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        Ok(MorphTable::parse_literal(alphabet, text)?.canonicalize())
    }

    pub fn table(&self) -> &MorphTable {
        &self.0
    }

    pub fn into_table(self) -> MorphTable {
        self.0
    }

    pub fn alphabet(&self) -> Alphabet {
        self.0.alphabet
    }

    pub fn entries(&self) -> &[(Word, Word)] {
        &self.0.entries
    }

    pub fn apply(&self, w: &Word) -> Option<Word> {
        self.0.apply(w)
    }

    /// `self ∘ phi`: apply `phi` first.
    pub fn compose(&self, phi: &Element) -> Result<Element> {
        Ok(compose_tables(&self.0, &phi.0)?.canonicalize())
    }

    pub fn restrict(&self, idx: usize, depth: usize) -> Result<MorphTable> {
        self.0.restrict(idx, depth)
    }

    pub fn dom_code(&self) -> PrefixCode {
        self.0.domain_code()
    }

    pub fn im_code(&self) -> PrefixCode {
        self.0.image_code()
    }

    /// `|imC|` of the canonical table.
    pub fn imc_size(&self) -> usize {
        self.0.image_code().len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.entries.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        *self == Element::identity(self.alphabet())
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self).map_or(false, |e| e == *self)
    }

    /// Image words pairwise distinct and prefix-incomparable.
    pub fn is_injective(&self) -> bool {
        self.0.image_code().len() == self.0.entries.len()
    }

    pub fn is_unit(&self) -> bool {
        self.is_injective() && self.dom_code().is_maximal() && self.im_code().is_maximal()
    }

    pub fn invert(&self) -> Result<Element> {
        if !self.is_injective() {
            return Err(Error::Precondition(format!("{self} is not injective")));
        }
        let entries = self.0.entries.iter().map(|(d, v)| (v.clone(), d.clone())).collect();
        Ok(MorphTable::from_raw(self.alphabet(), entries).canonicalize())
    }

    pub fn kernel_partition(&self) -> Result<KernelPartition> {
        if self.is_zero() {
            return Err(Error::Precondition("kernel of the zero element".into()));
        }
        let eq = self.0.equalize_images();
        let mut blocks: HashMap<Word, Vec<Word>> = HashMap::new();
        for (d, v) in eq.entries {
            blocks.entry(v).or_default().push(d);
        }
        let mut blocks: Vec<Vec<Word>> = blocks.into_values().collect();
        for b in &mut blocks {
            b.sort();
        }
        blocks.sort();
        Ok(KernelPartition { blocks })
    }

    pub fn max_len(&self) -> usize {
        self.0.max_len()
    }

    /// `M_{k,1}` into `M_{k,1}` over `b_1 A^*`.
    pub fn bmode_wrap(&self) -> Result<Element> {
        if self.alphabet().is_bmode() {
            return Err(Error::Precondition("element is already in B A^* mode".into()));
        }
        let a = Alphabet::with_heads(self.alphabet().k(), 1)?;
        let entries = self
            .entries()
            .iter()
            .map(|(d, v)| (d.with_head(Some(0)), v.with_head(Some(0))))
            .collect();
        Ok(Element(MorphTable::from_raw(a, entries)))
    }

    pub fn bmode_unwrap(&self) -> Result<Element> {
        if self.alphabet().heads() != Some(1) {
            return Err(Error::Precondition("unwrap needs |B| = 1".into()));
        }
        let a = Alphabet::new(self.alphabet().k())?;
        let entries = self
            .entries()
            .iter()
            .map(|(d, v)| (d.with_head(None), v.with_head(None)))
            .collect();
        Ok(Element(MorphTable::from_raw(a, entries)))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Partition of the length-equalized domain by image equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelPartition {
    pub blocks: Vec<Vec<Word>>,
}

impl KernelPartition {
    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// Every canonical table with at most `max_entries` entries whose words have
/// length at most `maxlen`.
pub fn enumerate_elements(alphabet: Alphabet, maxlen: usize, max_entries: usize) -> Vec<Element> {
    let mut out = Vec::new();
    for_each_element(alphabet, maxlen, max_entries, |e| out.push(OrdElement(e.clone())));
    out.sort();
    out.into_iter().map(|o| o.0).collect()
}

/// Visits each element of [`enumerate_elements`] once, in no particular
/// order, without collecting them.
pub fn for_each_element(alphabet: Alphabet, maxlen: usize, max_entries: usize, mut f: impl FnMut(&Element)) {
    let words = alphabet.words_upto(maxlen);
    if words.is_empty() {
        f(&Element::zero(alphabet));
        return;
    }
    let k = alphabet.k() as usize;
    for code in crate::codes::enumerate_codes(alphabet, maxlen, max_entries) {
        let n = code.len();
        let entries = code.words().iter().map(|d| (d.clone(), words[0].clone())).collect();
        let mut e = Element(MorphTable { alphabet, entries });
        let mut idx = vec![0usize; n];
        loop {
            // A table is canonical iff no sibling group merges.
            if mergeable_group(&e.0.entries, k, 0).is_none() {
                f(&e);
            }
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < words.len() {
                    e.0.entries[pos].1 = words[idx[pos]].clone();
                    break;
                }
                idx[pos] = 0;
                e.0.entries[pos].1 = words[0].clone();
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
}

#[derive(PartialEq, Eq)]
struct OrdElement(Element);

impl Ord for OrdElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.0.entries();
        let b = other.0.entries();
        a.len().cmp(&b.len()).then_with(|| a.cmp(b))
    }
}

impl PartialOrd for OrdElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
