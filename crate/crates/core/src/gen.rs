//! Seeded random generators for words, codes, tables and formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::BoolFormula;
use crate::codes::{Alphabet, PrefixCode, Word};
use crate::morphisms::{Element, MorphTable};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn word(rng: &mut impl Rng, alphabet: Alphabet, maxlen: usize) -> Word {
    let roots = alphabet.roots();
    let root = roots.choose(rng).unwrap().clone();
    let n = rng.gen_range(0..=maxlen.saturating_sub(root.len()));
    let tail: Vec<u8> = (0..n).map(|_| rng.gen_range(0..alphabet.k())).collect();
    root.concat(&tail)
}

/// A maximal prefix code below `roots`, grown by `splits` random leaf splits.
pub fn maximal_code_below(rng: &mut impl Rng, alphabet: Alphabet, roots: Vec<Word>, splits: usize) -> PrefixCode {
    let mut leaves = roots;
    for _ in 0..splits {
        let i = rng.gen_range(0..leaves.len());
        let w = leaves.swap_remove(i);
        leaves.extend((0..alphabet.k()).map(|a| w.child(a)));
    }
    PrefixCode::new(alphabet, leaves).expect("splits keep a prefix code")
}

/// A prefix code of at most `max_size` words with tails of length at most
/// `maxlen` (obtained by dropping words of a random maximal code).
pub fn code(rng: &mut impl Rng, alphabet: Alphabet, maxlen: usize, max_size: usize) -> PrefixCode {
    let mut leaves = alphabet.roots();
    let splits = rng.gen_range(0..=max_size);
    for _ in 0..splits {
        let candidates: Vec<usize> =
            (0..leaves.len()).filter(|&i| leaves[i].tail().len() < maxlen).collect();
        let Some(&i) = candidates.choose(rng) else { break };
        let w = leaves.swap_remove(i);
        leaves.extend((0..alphabet.k()).map(|a| w.child(a)));
    }
    leaves.shuffle(rng);
    let keep = rng.gen_range(0..=max_size.min(leaves.len()));
    leaves.truncate(keep);
    PrefixCode::new(alphabet, leaves).expect("subset of a prefix code")
}

pub fn table(rng: &mut impl Rng, alphabet: Alphabet, max_entries: usize, maxlen: usize) -> MorphTable {
    let dom = code(rng, alphabet, maxlen, max_entries);
    let entries = dom
        .words()
        .iter()
        .map(|d| (d.clone(), word(rng, alphabet, maxlen)))
        .collect();
    MorphTable::new(alphabet, entries).expect("domain is a prefix code")
}

pub fn element(rng: &mut impl Rng, alphabet: Alphabet, max_entries: usize, maxlen: usize) -> Element {
    table(rng, alphabet, max_entries, maxlen).canonicalize()
}

pub fn nonzero_element(rng: &mut impl Rng, alphabet: Alphabet, max_entries: usize, maxlen: usize) -> Element {
    loop {
        let e = element(rng, alphabet, max_entries.max(1), maxlen);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A random bijection between two random prefix codes of equal size.
pub fn injective_element(rng: &mut impl Rng, alphabet: Alphabet, max_entries: usize, maxlen: usize) -> Element {
    let p = code(rng, alphabet, maxlen, max_entries);
    let mut q = code(rng, alphabet, maxlen, max_entries);
    while q.len() < p.len() {
        q = code(rng, alphabet, maxlen, max_entries);
    }
    let mut img: Vec<Word> = q.words().to_vec();
    img.shuffle(rng);
    let entries = p.words().iter().cloned().zip(img).collect();
    MorphTable::new(alphabet, entries).unwrap().canonicalize()
}

/// A bijection between two maximal codes below the same roots, both grown by
/// `splits` leaf splits.
pub fn bijection_below(rng: &mut impl Rng, alphabet: Alphabet, roots: &[Word], splits: usize) -> Element {
    let p = maximal_code_below(rng, alphabet, roots.to_vec(), splits);
    let q = maximal_code_below(rng, alphabet, roots.to_vec(), splits);
    let mut img: Vec<Word> = q.words().to_vec();
    img.shuffle(rng);
    let entries = p.words().iter().cloned().zip(img).collect();
    MorphTable::new(alphabet, entries).unwrap().canonicalize()
}

/// A random member of the maximal subgroup at `η_i` (`A^*` mode).
pub fn subgroup_member(rng: &mut impl Rng, k: u8, i: u8, max_splits: usize) -> Element {
    let a = Alphabet::new(k).unwrap();
    let roots: Vec<Word> = (0..i).map(|j| Word::letters(&[j])).collect();
    let splits = rng.gen_range(0..=max_splits);
    bijection_below(rng, a, &roots, splits)
}

pub fn formula(rng: &mut impl Rng, vars: usize, depth: usize) -> BoolFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if vars == 0 || rng.gen_bool(0.08) {
            BoolFormula::Const(rng.gen_bool(0.5))
        } else {
            BoolFormula::Var(rng.gen_range(0..vars))
        };
    }
    match rng.gen_range(0..5) {
        0 => BoolFormula::Not(Box::new(formula(rng, vars, depth - 1))),
        1 | 2 => BoolFormula::And(Box::new(formula(rng, vars, depth - 1)), Box::new(formula(rng, vars, depth - 1))),
        _ => BoolFormula::Or(Box::new(formula(rng, vars, depth - 1)), Box::new(formula(rng, vars, depth - 1))),
    }
}
