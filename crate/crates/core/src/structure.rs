//! Maximal subgroups, `D`-class idempotents, the relabeling onto the Higman
//! groups and the embedding `E : M_{k,n} -> M_{k,n-k+1}`.

use crate::codes::{is_essential_in, Alphabet, PrefixCode, Word};
use crate::green::{dclass_index, unit_multipliers};
use crate::morphisms::{Element, MorphTable};
use crate::{Error, Result};

/// A maximal subgroup, identified by its idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupHandle {
    pub i: u8,
    pub idempotent: Element,
}

impl SubgroupHandle {
    pub fn eta(i: u8, k: u8) -> Result<Self> {
        Ok(SubgroupHandle { i, idempotent: eta(i, k)? })
    }

    pub fn bmode(j: u8, k: u8, s: u8) -> Result<Self> {
        Ok(SubgroupHandle { i: j, idempotent: bmode_idempotent(j, k, s)? })
    }

    pub fn is_consistent(&self) -> bool {
        self.idempotent.is_idempotent() && dclass_index(&self.idempotent) == self.i
    }
}

fn first_letters(alphabet: Alphabet, i: u8) -> PrefixCode {
    let ws = (0..i).map(|j| Word::letters(&[j])).collect();
    PrefixCode::new(alphabet, ws).expect("distinct letters")
}

/// `η_i = id_{{a_1..a_i}}`.
pub fn eta(i: u8, k: u8) -> Result<Element> {
    let a = Alphabet::new(k)?;
    if i == 0 || i >= k {
        return Err(Error::Precondition(format!("eta needs 1 <= i <= k-1, got i = {i}, k = {k}")));
    }
    Ok(Element::partial_identity(&first_letters(a, i)))
}

pub fn in_max_subgroup(e: &Element, i: u8) -> Result<bool> {
    let a = e.alphabet();
    if a.is_bmode() || i == 0 || i >= a.k() {
        return Err(Error::Precondition(format!("subgroup index {i} out of range")));
    }
    let base = first_letters(a, i);
    Ok(e.is_injective()
        && is_essential_in(&e.dom_code(), &base)?
        && is_essential_in(&e.im_code(), &base)?)
}

/// Relabels the leading `a_j` of every word to `b_j`, landing in `G_{k,i}`.
pub fn subgroup_to_higman(e: &Element, i: u8) -> Result<Element> {
    if !in_max_subgroup(e, i)? {
        return Err(Error::Precondition(format!("{e} is not in the subgroup at eta_{i}")));
    }
    let b = Alphabet::with_heads(e.alphabet().k(), i)?;
    let relabel = |w: &Word| Word::headed(w.tail()[0], &w.tail()[1..]);
    let entries = e.entries().iter().map(|(d, v)| (relabel(d), relabel(v))).collect();
    Ok(MorphTable::new(b, entries)?.canonicalize())
}

/// The letter map `b_i ↦ b_i` (`i <= n-k`), `b_{i+n-k} ↦ b_{n-k+1} a_i`.
pub fn embed_e(e: &Element) -> Result<Element> {
    let a = e.alphabet();
    let k = a.k();
    let n = a
        .heads()
        .ok_or_else(|| Error::Precondition("embedding needs a B A^* element".into()))?;
    if n < k {
        return Err(Error::Precondition(format!("embedding needs n >= k, got n = {n}, k = {k}")));
    }
    let target = Alphabet::with_heads(k, n - k + 1)?;
    let map = |w: &Word| -> Word {
        let h = w.head().expect("B A^* word");
        if h < n - k {
            w.clone()
        } else {
            let mut tail = vec![h - (n - k)];
            tail.extend_from_slice(w.tail());
            Word::headed(n - k, &tail)
        }
    };
    let entries = e.entries().iter().map(|(d, v)| (map(d), map(v))).collect();
    Ok(MorphTable::new(target, entries)?.canonicalize())
}

/// The idempotent of `D_j` in `M_{k,s}`: `id_{b_1..b_j}` when `j < s`, else
/// `id_{b_1..b_{s-1}, b_s a_1 .. b_s a_{j-s+1}}`.
pub fn bmode_idempotent(j: u8, k: u8, s: u8) -> Result<Element> {
    if j == 0 || j >= k || s == 0 || s >= k {
        return Err(Error::Precondition(format!("need 1 <= j, s <= k-1 (j = {j}, s = {s}, k = {k})")));
    }
    let a = Alphabet::with_heads(k, s)?;
    let words: Vec<Word> = if j < s {
        (0..j).map(|h| Word::headed(h, &[])).collect()
    } else {
        (0..s - 1)
            .map(|h| Word::headed(h, &[]))
            .chain((0..=j - s).map(|c| Word::headed(s - 1, &[c])))
            .collect()
    };
    Ok(Element::partial_identity(&PrefixCode::new(a, words)?))
}

/// `(α, β)` with `β ∘ E ∘ α = 1`.
pub fn jsimple_witness(e: &Element) -> Result<(Element, Element)> {
    let (beta, alpha) = unit_multipliers(e)?;
    debug_assert!(beta.compose(&e.compose(&alpha)?)?.is_identity());
    Ok((alpha, beta))
}
