//! Bounded witness search for `ψ = φα`, `ψ = βφ` and `ψ = βφα`.
//!
//! The search ranges over every multiplier table with at most `max_entries`
//! entries, domain words of length at most `max_dom_len` and image words of
//! length at most `max_img_len`. Instead of composing each candidate in full,
//! the defining equation is split over the multiplier's domain cells:
//!
//! * `ψ = χ ∘ α` with `α = {(d, x_d)}` iff `χ ∘ {(d, x_d)} = ψ ∘ id_d` for every
//!   `d` and `ψ ∘ id_D = ψ`;
//! * `ψ = β ∘ χ` with `β = {(d, v_d)}` iff `{(d, v_d)} ∘ χ = ψ ∘ id_{Ω_d}` for
//!   every `d`, where `Ω_d` is the domain of `id_d ∘ χ`, and the `Ω_d` cover
//!   `Dom ψ`.
//!
//! Entries whose cell contributes nothing can be dropped without leaving the
//! budget, so only live cells are enumerated. The pieces are interned, and a
//! positive answer is re-verified by full composition.

use std::collections::{HashMap, HashSet};

use crate::codes::{enumerate_codes, Alphabet, PrefixCode, Word};
use crate::green::Witness;
use crate::morphisms::{compose_tables, Element, MorphTable};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_entries: usize,
    pub max_dom_len: usize,
    pub max_img_len: usize,
}

impl OracleBudget {
    pub fn new(max_entries: usize, max_dom_len: usize, max_img_len: usize) -> Result<Self> {
        if max_entries == 0 || max_dom_len == 0 || max_img_len == 0 {
            return Err(Error::Precondition("oracle budget fields must be positive".into()));
        }
        Ok(OracleBudget { max_entries, max_dom_len, max_img_len })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preorder {
    R,
    L,
    J,
}

type Mask = u128;
const DEAD: u32 = u32::MAX;

struct RightTargets {
    target: Vec<u32>,
    covers: Vec<usize>,
}

struct LeftCands {
    live: Mask,
    omega: Vec<u32>,
    cands: Vec<HashMap<u32, u16>>,
}

pub struct WitnessOracle {
    alphabet: Alphabet,
    budget: OracleBudget,
    dom_words: Vec<Word>,
    img_words: Vec<Word>,
    ids: Vec<Element>,
    codes: Vec<Vec<u16>>,
    code_masks: Vec<Mask>,
    interned: HashMap<Element, u32>,
    omegas: HashMap<PrefixCode, u32>,
    omega_ids: Vec<Element>,
    right_targets: HashMap<Element, RightTargets>,
    right_cands: HashMap<Element, Vec<HashMap<u32, u16>>>,
    left_cands: HashMap<Element, LeftCands>,
    left_targets: HashMap<(u32, u32), u32>,
}

impl WitnessOracle {
    pub fn new(alphabet: Alphabet, budget: OracleBudget) -> Result<Self> {
        OracleBudget::new(budget.max_entries, budget.max_dom_len, budget.max_img_len)?;
        let dom_words = alphabet.words_upto(budget.max_dom_len);
        let img_words = alphabet.words_upto(budget.max_img_len);
        if dom_words.len() > Mask::BITS as usize || img_words.len() > u16::MAX as usize {
            return Err(Error::Precondition(format!(
                "oracle budget too large: {} domain words",
                dom_words.len()
            )));
        }
        let index: HashMap<&Word, u16> =
            dom_words.iter().enumerate().map(|(i, w)| (w, i as u16)).collect();
        let mut codes = Vec::new();
        let mut code_masks = Vec::new();
        for c in enumerate_codes(alphabet, budget.max_dom_len, budget.max_entries) {
            let idx: Vec<u16> = c.words().iter().map(|w| index[w]).collect();
            code_masks.push(idx.iter().fold(0, |m, &i| m | (1 << i)));
            codes.push(idx);
        }
        let ids = dom_words
            .iter()
            .map(|w| Element::partial_identity(&PrefixCode::new(alphabet, vec![w.clone()]).unwrap()))
            .collect();
        Ok(WitnessOracle {
            alphabet,
            budget,
            dom_words,
            img_words,
            ids,
            codes,
            code_masks,
            interned: HashMap::new(),
            omegas: HashMap::new(),
            omega_ids: Vec::new(),
            right_targets: HashMap::new(),
            right_cands: HashMap::new(),
            left_cands: HashMap::new(),
            left_targets: HashMap::new(),
        })
    }

    pub fn budget(&self) -> OracleBudget {
        self.budget
    }

    fn intern(&mut self, e: Element) -> u32 {
        let n = self.interned.len() as u32;
        *self.interned.entry(e).or_insert(n)
    }

    fn single(&self, d: usize, x: usize) -> MorphTable {
        MorphTable::new(self.alphabet, vec![(self.dom_words[d].clone(), self.img_words[x].clone())])
            .expect("single entry")
    }

    fn check(&self, psi: &Element, phi: &Element) -> Result<()> {
        if psi.alphabet() != self.alphabet || phi.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    fn prepare_right_targets(&mut self, psi: &Element) {
        if self.right_targets.contains_key(psi) {
            return;
        }
        let mut live: Mask = 0;
        let mut target = Vec::with_capacity(self.dom_words.len());
        for d in 0..self.dom_words.len() {
            let t = psi.compose(&self.ids[d]).expect("same alphabet");
            if t.is_zero() {
                target.push(DEAD);
            } else {
                live |= 1 << d;
                target.push(self.intern(t));
            }
        }
        let mut covers = Vec::new();
        for (ci, code) in self.codes.iter().enumerate() {
            if self.code_masks[ci] & !live != 0 {
                continue;
            }
            let words = code.iter().map(|&i| self.dom_words[i as usize].clone()).collect();
            let id = Element::partial_identity(&PrefixCode::new(self.alphabet, words).unwrap());
            if psi.compose(&id).expect("same alphabet") == *psi {
                covers.push(ci);
            }
        }
        self.right_targets.insert(psi.clone(), RightTargets { target, covers });
    }

    fn prepare_right_cands(&mut self, chi: &Element) {
        if self.right_cands.contains_key(chi) {
            return;
        }
        let mut per_d = Vec::with_capacity(self.dom_words.len());
        for d in 0..self.dom_words.len() {
            let mut m = HashMap::new();
            for x in 0..self.img_words.len() {
                let piece = compose_tables(chi.table(), &self.single(d, x)).unwrap().canonicalize();
                if !piece.is_zero() {
                    let id = self.intern(piece);
                    m.entry(id).or_insert(x as u16);
                }
            }
            per_d.push(m);
        }
        self.right_cands.insert(chi.clone(), per_d);
    }

    /// `α` within budget with `χ ∘ α = ψ`.
    pub fn right(&mut self, psi: &Element, chi: &Element) -> Result<Option<Element>> {
        self.check(psi, chi)?;
        self.prepare_right_targets(psi);
        self.prepare_right_cands(chi);
        let t = &self.right_targets[psi];
        let c = &self.right_cands[chi];
        let mut valid: Mask = 0;
        for d in 0..self.dom_words.len() {
            if t.target[d] != DEAD && c[d].contains_key(&t.target[d]) {
                valid |= 1 << d;
            }
        }
        for &ci in &t.covers {
            if self.code_masks[ci] & !valid != 0 {
                continue;
            }
            let entries = self.codes[ci]
                .iter()
                .map(|&d| {
                    let d = d as usize;
                    let x = c[d][&t.target[d]] as usize;
                    (self.dom_words[d].clone(), self.img_words[x].clone())
                })
                .collect();
            let alpha = MorphTable::new(self.alphabet, entries)?.canonicalize();
            if chi.compose(&alpha)? == *psi {
                return Ok(Some(alpha));
            }
        }
        Ok(None)
    }

    fn prepare_left_cands(&mut self, chi: &Element) {
        if self.left_cands.contains_key(chi) {
            return;
        }
        let n = self.dom_words.len();
        let mut live: Mask = 0;
        let mut omega = vec![DEAD; n];
        let mut cands = vec![HashMap::new(); n];
        for d in 0..n {
            let restricted = self.ids[d].compose(chi).expect("same alphabet");
            if restricted.is_zero() {
                continue;
            }
            live |= 1 << d;
            let code = restricted.dom_code();
            let next = self.omegas.len() as u32;
            let oid = *self.omegas.entry(code.clone()).or_insert(next);
            if oid == next {
                self.omega_ids.push(Element::partial_identity(&code));
            }
            omega[d] = oid;
            for v in 0..self.img_words.len() {
                let piece = compose_tables(&self.single(d, v), chi.table()).unwrap().canonicalize();
                let id = self.intern(piece);
                cands[d].entry(id).or_insert(v as u16);
            }
        }
        self.left_cands.insert(chi.clone(), LeftCands { live, omega, cands });
    }

    /// `β` within budget with `β ∘ χ = ψ`.
    pub fn left(&mut self, psi: &Element, chi: &Element) -> Result<Option<Element>> {
        self.check(psi, chi)?;
        if psi.is_zero() {
            return Ok(Some(Element::zero(self.alphabet)));
        }
        self.prepare_left_cands(chi);
        let psi_id = self.intern(psi.clone());
        let n = self.dom_words.len();
        let mut targets = vec![DEAD; n];
        for d in 0..n {
            let oid = self.left_cands[chi].omega[d];
            if oid == DEAD {
                continue;
            }
            let t = match self.left_targets.get(&(psi_id, oid)) {
                Some(&t) => t,
                None => {
                    let e = psi.compose(&self.omega_ids[oid as usize])?;
                    let t = self.intern(e);
                    self.left_targets.insert((psi_id, oid), t);
                    t
                }
            };
            targets[d] = t;
        }
        let lc = &self.left_cands[chi];
        let mut valid: Mask = 0;
        for d in 0..n {
            if targets[d] != DEAD && lc.cands[d].contains_key(&targets[d]) {
                valid |= 1 << d;
            }
        }
        for (ci, code) in self.codes.iter().enumerate() {
            let m = self.code_masks[ci];
            if m == 0 || m & !(valid & lc.live) != 0 {
                continue;
            }
            let entries = code
                .iter()
                .map(|&d| {
                    let d = d as usize;
                    let v = lc.cands[d][&targets[d]] as usize;
                    (self.dom_words[d].clone(), self.img_words[v].clone())
                })
                .collect();
            let beta = MorphTable::new(self.alphabet, entries)?.canonicalize();
            if beta.compose(chi)? == *psi {
                return Ok(Some(beta));
            }
        }
        Ok(None)
    }

    /// `(β, α)` within budget with `β ∘ φ ∘ α = ψ`. Multipliers `α` are tried
    /// in order of entry count and the search stops at the first witness.
    pub fn two_sided(&mut self, psi: &Element, phi: &Element) -> Result<Option<(Element, Element)>> {
        self.check(psi, phi)?;
        let mut seen: HashSet<Element> = HashSet::new();
        let nimg = self.img_words.len();
        for ci in 0..self.codes.len() {
            let code = self.codes[ci].clone();
            let mut idx = vec![0usize; code.len()];
            loop {
                let entries = code
                    .iter()
                    .zip(&idx)
                    .map(|(&d, &x)| (self.dom_words[d as usize].clone(), self.img_words[x].clone()))
                    .collect();
                let alpha = MorphTable::new(self.alphabet, entries)?;
                let chi = compose_tables(phi.table(), &alpha)?.canonicalize();
                if seen.insert(chi.clone()) {
                    if let Some(beta) = self.left(psi, &chi)? {
                        let alpha = alpha.canonicalize();
                        return Ok(Some((beta, alpha)));
                    }
                }
                let mut pos = 0;
                while pos < idx.len() {
                    idx[pos] += 1;
                    if idx[pos] < nimg {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
        Ok(None)
    }

    /// Searches for a witness of `ψ ≤_X φ`, re-verified by composition.
    pub fn search(&mut self, psi: &Element, phi: &Element, x: Preorder) -> Result<Option<Witness>> {
        let a = self.alphabet;
        let w = match x {
            Preorder::R => self
                .right(psi, phi)?
                .map(|alpha| Witness::TwoSided { beta: Element::identity(a), alpha }),
            Preorder::L => self
                .left(psi, phi)?
                .map(|beta| Witness::TwoSided { beta, alpha: Element::identity(a) }),
            Preorder::J => self
                .two_sided(psi, phi)?
                .map(|(beta, alpha)| Witness::TwoSided { beta, alpha }),
        };
        Ok(w.filter(|w| w.verify(psi, phi)))
    }
}

/// One-shot oracle query.
pub fn oracle_leq(psi: &Element, phi: &Element, x: Preorder, budget: OracleBudget) -> Result<bool> {
    let mut o = WitnessOracle::new(psi.alphabet(), budget)?;
    Ok(o.search(psi, phi, x)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> Element {
        Element::parse(Alphabet::new(2).unwrap(), s).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let b = OracleBudget::new(2, 2, 2).unwrap();
        assert!(oracle_leq(&el("{0->0}"), &el("{1->0}"), Preorder::R, b).unwrap());
        let id = el("{^->^}");
        let zero = el("{}");
        assert!(!oracle_leq(&id, &zero, Preorder::J, b).unwrap());
        assert!(!oracle_leq(&el("{0->0}"), &el("{0->1}"), Preorder::R, b).unwrap());
        assert!(!oracle_leq(&el("{0->1}"), &el("{0->0}"), Preorder::R, b).unwrap());
        assert!(oracle_leq(&el("{0->1}"), &el("{1->0}"), Preorder::J, b).unwrap());
        assert!(oracle_leq(&el("{0->0, 1->0}"), &el("{0->1, 1->1}"), Preorder::L, b).unwrap());
        assert!(!oracle_leq(&el("{0->0, 1->1}"), &el("{0->0, 1->0}"), Preorder::L, b).unwrap());
        assert!(oracle_leq(&zero, &zero, Preorder::R, b).unwrap());
    }

    #[test]
    fn zero_budget_rejected() {
        assert!(OracleBudget::new(0, 1, 1).is_err());
        let bad = OracleBudget { max_entries: 1, max_dom_len: 0, max_img_len: 1 };
        assert!(WitnessOracle::new(Alphabet::new(2).unwrap(), bad).is_err());
    }

    #[test]
    fn oversized_budget_rejected() {
        let b = OracleBudget::new(1, 7, 1).unwrap();
        assert!(WitnessOracle::new(Alphabet::new(2).unwrap(), b).is_err());
    }
}
