//! Green relations of `M_{k,1}` and `M_{k,i}` with constructive witnesses.
//!
//! Every positive answer that carries a witness has been re-verified by
//! composition before it is returned.

use std::fmt;

use crate::codes::{ess_contained, ess_equal, Alphabet, Word};
use crate::morphisms::{compose_tables, Element, MorphTable};
use crate::{Error, Result};

pub mod oracle;

pub use oracle::{oracle_leq, OracleBudget, Preorder, WitnessOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    JLe,
    JEq,
    DEq,
    REq,
    LEq,
    HEq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::JLe => "J-le",
            Relation::JEq => "J-eq",
            Relation::DEq => "D-eq",
            Relation::REq => "R-eq",
            Relation::LEq => "L-eq",
            Relation::HEq => "H-eq",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `ψ = β ∘ φ ∘ α`.
    TwoSided { beta: Element, alpha: Element },
    /// `ψ = φ ∘ alpha` and `φ = ψ ∘ alpha_back`.
    Right { alpha: Element, alpha_back: Element },
    /// `ψ = beta ∘ φ` and `φ = beta_back ∘ ψ`.
    Left { beta: Element, beta_back: Element },
    /// `ψ ≡_L chi` by `left`, `chi ≡_R φ` by `right`.
    Pivot { chi: Element, left: Box<Witness>, right: Box<Witness> },
    /// Both `≡_R` and `≡_L`.
    Both { right: Box<Witness>, left: Box<Witness> },
    /// `forward` checks `(ψ, φ)`, `backward` checks `(φ, ψ)`.
    Mutual { forward: Box<Witness>, backward: Box<Witness> },
}

impl Witness {
    pub fn verify(&self, psi: &Element, phi: &Element) -> bool {
        let eq = |a: Result<Element>, b: &Element| a.map_or(false, |a| a == *b);
        match self {
            Witness::TwoSided { beta, alpha } => {
                eq(phi.compose(alpha).and_then(|x| beta.compose(&x)), psi)
            }
            Witness::Right { alpha, alpha_back } => {
                eq(phi.compose(alpha), psi) && eq(psi.compose(alpha_back), phi)
            }
            Witness::Left { beta, beta_back } => {
                eq(beta.compose(phi), psi) && eq(beta_back.compose(psi), phi)
            }
            Witness::Pivot { chi, left, right } => left.verify(psi, chi) && right.verify(chi, phi),
            Witness::Both { right, left } => right.verify(psi, phi) && left.verify(psi, phi),
            Witness::Mutual { forward, backward } => {
                forward.verify(psi, phi) && backward.verify(phi, psi)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreenVerdict {
    pub relation: Relation,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl GreenVerdict {
    fn no(relation: Relation) -> Self {
        GreenVerdict { relation, holds: false, witness: None }
    }

    fn yes(relation: Relation, witness: Option<Witness>) -> Self {
        GreenVerdict { relation, holds: true, witness }
    }

    /// A verdict is consistent when a present witness verifies.
    pub fn verify(&self, psi: &Element, phi: &Element) -> bool {
        self.witness.as_ref().map_or(true, |w| w.verify(psi, phi))
    }
}

fn same_alphabet(psi: &Element, phi: &Element) -> Result<()> {
    if psi.alphabet() == phi.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// `0` for the zero element, else the `i ∈ 1..k-1` with `|imC| ≡ i (mod k-1)`.
pub fn dclass_index(e: &Element) -> u8 {
    if e.is_zero() {
        return 0;
    }
    let m = e.alphabet().k() as usize - 1;
    (((e.imc_size() - 1) % m) + 1) as u8
}

pub fn leq_j(psi: &Element, phi: &Element) -> Result<GreenVerdict> {
    same_alphabet(psi, phi)?;
    if !psi.is_zero() && phi.is_zero() {
        return Ok(GreenVerdict::no(Relation::JLe));
    }
    let (beta, alpha) = multiplier_search(psi, phi)?;
    Ok(GreenVerdict::yes(Relation::JLe, Some(Witness::TwoSided { beta, alpha })))
}

pub fn equiv_j(psi: &Element, phi: &Element) -> Result<GreenVerdict> {
    let f = leq_j(psi, phi)?;
    let b = leq_j(phi, psi)?;
    Ok(match (f.witness, b.witness) {
        (Some(fw), Some(bw)) => GreenVerdict::yes(
            Relation::JEq,
            Some(Witness::Mutual { forward: Box::new(fw), backward: Box::new(bw) }),
        ),
        _ => GreenVerdict::no(Relation::JEq),
    })
}

/// `(β, α)` with `β ∘ φ ∘ α = ψ`.
pub fn multiplier_search(psi: &Element, phi: &Element) -> Result<(Element, Element)> {
    same_alphabet(psi, phi)?;
    let a = psi.alphabet();
    if psi.is_zero() {
        return Ok((Element::zero(a), Element::zero(a)));
    }
    if phi.is_zero() {
        return Err(Error::Precondition("psi is nonzero and phi is zero".into()));
    }
    let (beta1, alpha) = unit_multipliers(phi)?;
    let beta = psi.compose(&beta1)?;
    Ok((beta, alpha))
}

/// `(β', α)` with `β' ∘ φ ∘ α = 1` for nonzero `φ`.
///
/// In `A^*` mode `α = {(ε, x0)}`, `β' = {(y0, ε)}`. In `B_s A^*` mode the
/// roots are spread over the tags `p_i = a_2^{i-1} a_1` (`i < s`),
/// `p_s = a_2^{s-1}`.
pub fn unit_multipliers(phi: &Element) -> Result<(Element, Element)> {
    if phi.is_zero() {
        return Err(Error::Precondition("zero element has no unit multipliers".into()));
    }
    let a = phi.alphabet();
    let y0 = phi.im_code().words()[0].clone();
    let x0 = phi
        .entries()
        .iter()
        .find(|e| e.1 == y0)
        .map(|e| e.0.clone())
        .expect("imC words are image words");
    let roots = a.roots();
    let tags = root_tags(roots.len());
    let alpha: Vec<(Word, Word)> =
        roots.iter().zip(&tags).map(|(r, p)| (r.clone(), x0.concat(p))).collect();
    let beta: Vec<(Word, Word)> =
        roots.iter().zip(&tags).map(|(r, p)| (y0.concat(p), r.clone())).collect();
    let alpha = MorphTable::new(a, alpha)?.canonicalize();
    let beta = MorphTable::new(a, beta)?.canonicalize();
    Ok((beta, alpha))
}

fn root_tags(s: usize) -> Vec<Vec<u8>> {
    (1..=s)
        .map(|i| {
            let mut p = vec![1u8; i - 1];
            if i < s {
                p.push(0);
            }
            p
        })
        .collect()
}

/// `ess_contained(imC ψ, imC φ)`, with the zero cases decided directly.
pub fn leq_r_fast(psi: &Element, phi: &Element) -> Result<bool> {
    same_alphabet(psi, phi)?;
    if psi.is_zero() {
        return Ok(true);
    }
    if phi.is_zero() {
        return Ok(false);
    }
    ess_contained(&psi.im_code(), &phi.im_code())
}

/// `α` with `φ ∘ α = ψ`, built entry by entry and verified.
pub fn right_multiplier(psi: &Element, phi: &Element) -> Result<Option<Element>> {
    same_alphabet(psi, phi)?;
    let a = psi.alphabet();
    let mut entries = Vec::new();
    for (d, q) in psi.entries() {
        if let Some((u, v)) = phi.entries().iter().find(|(_, v)| v.is_prefix_of(q)) {
            let z = q.strip_prefix(v).expect("prefix");
            entries.push((d.clone(), u.concat(z)));
            continue;
        }
        let mut ext: Vec<(&Word, &Word)> = phi
            .entries()
            .iter()
            .filter(|(_, v)| q.is_prefix_of(v))
            .map(|(u, v)| (u, v))
            .collect();
        ext.sort_by(|x, y| x.1.lex_cmp(y.1));
        let mut minimal: Vec<(&Word, &Word)> = Vec::new();
        for (u, v) in ext {
            if minimal.last().map_or(true, |m| !m.1.is_prefix_of(v)) {
                minimal.push((u, v));
            }
        }
        let zs: Vec<Word> = minimal
            .iter()
            .map(|(_, v)| Word::letters(v.strip_prefix(q).expect("prefix")))
            .collect();
        let code = crate::codes::PrefixCode::new(Alphabet::new(a.k())?, zs.clone())?;
        if !code.is_maximal() {
            return Ok(None);
        }
        for ((u, _), z) in minimal.iter().zip(&zs) {
            entries.push((d.concat(z.tail()), (*u).clone()));
        }
    }
    let alpha = MorphTable::new(a, entries)?.canonicalize();
    Ok((phi.compose(&alpha)? == *psi).then_some(alpha))
}

/// `β` with `β ∘ φ = ψ`: refine `φ`'s domain against `ψ`'s, equalize image
/// lengths, read `β` off the refined tables and verify.
pub fn left_multiplier(psi: &Element, phi: &Element) -> Result<Option<Element>> {
    same_alphabet(psi, phi)?;
    let a = psi.alphabet();
    if psi.is_zero() {
        return Ok(Some(Element::zero(a)));
    }
    if phi.is_zero() {
        return Ok(None);
    }
    let pdom: Vec<&Word> = psi.entries().iter().map(|e| &e.0).collect();
    // (domain piece, φ-image, ψ-image if inside Dom ψ)
    let mut pieces: Vec<(Word, Word, Option<Word>)> = Vec::new();
    let mut stack: Vec<(Word, Word)> = phi.entries().to_vec();
    while let Some((u, v)) = stack.pop() {
        if let Some((d, w)) = psi.entries().iter().find(|(d, _)| d.is_prefix_of(&u)) {
            let z = u.strip_prefix(d).expect("prefix");
            pieces.push((u.clone(), v, Some(w.concat(z))));
        } else if pdom.iter().any(|d| u.is_prefix_of(d)) {
            for c in 0..a.k() {
                stack.push((u.child(c), v.child(c)));
            }
        } else {
            pieces.push((u, v, None));
        }
    }
    let target = pieces.iter().map(|p| p.1.len()).max().unwrap_or(0);
    let mut map: std::collections::HashMap<Word, Option<Word>> = std::collections::HashMap::new();
    for (_, v, w) in &pieces {
        for z in a.tails(target - v.len()) {
            let y = v.concat(&z);
            let val = w.as_ref().map(|w| w.concat(&z));
            match map.get(&y) {
                None => {
                    map.insert(y, val);
                }
                Some(old) if *old == val => {}
                Some(_) => return Ok(None),
            }
        }
    }
    let entries: Vec<(Word, Word)> =
        map.into_iter().filter_map(|(y, w)| w.map(|w| (y, w))).collect();
    let beta = MorphTable::new(a, entries)?.canonicalize();
    Ok((beta.compose(phi)? == *psi).then_some(beta))
}

pub fn equiv_r(psi: &Element, phi: &Element) -> Result<GreenVerdict> {
    same_alphabet(psi, phi)?;
    if psi.is_zero() != phi.is_zero() {
        return Ok(GreenVerdict::no(Relation::REq));
    }
    if !psi.is_zero() && !ess_equal(&psi.im_code(), &phi.im_code())? {
        return Ok(GreenVerdict::no(Relation::REq));
    }
    Ok(match (right_multiplier(psi, phi)?, right_multiplier(phi, psi)?) {
        (Some(alpha), Some(alpha_back)) => {
            GreenVerdict::yes(Relation::REq, Some(Witness::Right { alpha, alpha_back }))
        }
        _ => GreenVerdict::no(Relation::REq),
    })
}

pub fn equiv_l(psi: &Element, phi: &Element) -> Result<GreenVerdict> {
    same_alphabet(psi, phi)?;
    if psi.is_zero() != phi.is_zero() {
        return Ok(GreenVerdict::no(Relation::LEq));
    }
    if !psi.is_zero() && !ess_equal(&psi.dom_code(), &phi.dom_code())? {
        return Ok(GreenVerdict::no(Relation::LEq));
    }
    Ok(match (left_multiplier(psi, phi)?, left_multiplier(phi, psi)?) {
        (Some(beta), Some(beta_back)) => {
            GreenVerdict::yes(Relation::LEq, Some(Witness::Left { beta, beta_back }))
        }
        _ => GreenVerdict::no(Relation::LEq),
    })
}

pub fn equiv_h(psi: &Element, phi: &Element) -> Result<GreenVerdict> {
    let r = equiv_r(psi, phi)?;
    let l = equiv_l(psi, phi)?;
    Ok(match (r.witness, l.witness) {
        (Some(r), Some(l)) => GreenVerdict::yes(
            Relation::HEq,
            Some(Witness::Both { right: Box::new(r), left: Box::new(l) }),
        ),
        _ => GreenVerdict::no(Relation::HEq),
    })
}

pub fn equiv_d(psi: &Element, phi: &Element) -> Result<GreenVerdict> {
    same_alphabet(psi, phi)?;
    if psi.is_zero() && phi.is_zero() {
        return Ok(GreenVerdict::yes(Relation::DEq, None));
    }
    if dclass_index(psi) != dclass_index(phi) {
        return Ok(GreenVerdict::no(Relation::DEq));
    }
    let chi = pivot_search(psi, phi)?;
    let l = equiv_l(psi, &chi)?;
    let r = equiv_r(&chi, phi)?;
    Ok(match (l.witness, r.witness) {
        (Some(l), Some(r)) => GreenVerdict::yes(
            Relation::DEq,
            Some(Witness::Pivot { chi, left: Box::new(l), right: Box::new(r) }),
        ),
        _ => GreenVerdict::no(Relation::DEq),
    })
}

/// Splits every entry whose image is the first word of `imC`.
fn split_first_image(t: &MorphTable) -> MorphTable {
    let q = t.image_code().words()[0].clone();
    let a = t.alphabet();
    let mut entries = Vec::new();
    for (d, v) in t.entries() {
        if *v == q {
            for c in 0..a.k() {
                entries.push((d.child(c), v.child(c)));
            }
        } else {
            entries.push((d.clone(), v.clone()));
        }
    }
    MorphTable::new(a, entries).expect("splitting keeps the domain a prefix code")
}

/// `χ` with `ψ ≡_L χ ≡_R φ`.
pub fn pivot_search(psi: &Element, phi: &Element) -> Result<Element> {
    same_alphabet(psi, phi)?;
    if psi.is_zero() || phi.is_zero() || dclass_index(psi) != dclass_index(phi) {
        return Err(Error::Precondition("pivot needs D-equivalent nonzero elements".into()));
    }
    let mut s = psi.table().clone();
    let mut t = phi.table().clone();
    loop {
        let (ns, nt) = (s.image_code().len(), t.image_code().len());
        if ns == nt {
            break;
        }
        if ns < nt {
            s = split_first_image(&s);
        } else {
            t = split_first_image(&t);
        }
    }
    let entries: Vec<(Word, Word)> = s
        .image_code()
        .words()
        .iter()
        .cloned()
        .zip(t.image_code().words().iter().cloned())
        .collect();
    let alpha = MorphTable::new(psi.alphabet(), entries)?;
    Ok(compose_tables(&alpha, &s)?.canonicalize())
}
