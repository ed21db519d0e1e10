use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;
use thmon::counting::{add_one, disjointify, np_embed, slice_count, times_m, FinRel};
use thmon::{gen, Alphabet, Word};

fn finrel() -> impl Strategy<Value = FinRel> {
    (any::<u64>(), 0usize..12).prop_map(|(s, n)| {
        let a = Alphabet::new(2).unwrap();
        let mut r = gen::rng(s);
        let xs: Vec<Word> = (0..3).map(|_| gen::word(&mut r, a, 2)).collect();
        let pairs: Vec<(Word, Word)> =
            (0..n).map(|i| (xs[i % 3].clone(), gen::word(&mut r, a, 3))).collect();
        FinRel::new(a, pairs).unwrap()
    })
}

fn probes(r: &FinRel) -> Vec<Word> {
    let mut p: Vec<Word> = r.firsts().into_iter().collect();
    p.push(Word::letters(&[1, 1, 1, 1, 1]));
    p
}

proptest! {
    #[test]
    fn add_one_adds_one(r in finrel()) {
        let p = probes(&r);
        let s = add_one(&r, &p).unwrap();
        for x in &p {
            prop_assert_eq!(slice_count(&s, x), slice_count(&r, x) + 1);
        }
    }

    #[test]
    fn times_m_multiplies(r in finrel(), m in 1usize..6) {
        let s = times_m(&r, m).unwrap();
        for x in probes(&r) {
            prop_assert_eq!(slice_count(&s, &x), m * slice_count(&r, &x));
        }
    }

    #[test]
    fn disjoint_union_adds(r1 in finrel(), r2 in finrel()) {
        let (p, q) = disjointify(&r1, &r2).unwrap();
        prop_assert!(p.intersection(&q).is_empty());
        let u = p.union(&q).unwrap();
        for x in probes(&r1).into_iter().chain(probes(&r2)) {
            prop_assert_eq!(slice_count(&p, &x), slice_count(&r1, &x));
            prop_assert_eq!(slice_count(&u, &x), slice_count(&r1, &x) + slice_count(&r2, &x));
        }
    }

    #[test]
    fn embeddings_have_the_pattern(r in finrel(), h in 2usize..6) {
        let universe = probes(&r);
        let l: BTreeSet<Word> = r.firsts();
        let d = np_embed(r.alphabet(), &l, &universe, h, false).unwrap();
        let c = np_embed(r.alphabet(), &l, &universe, h, true).unwrap();
        for x in &universe {
            let member = l.contains(x);
            prop_assert_eq!(slice_count(&d, x), usize::from(member));
            prop_assert_eq!(slice_count(&c, x), if member { h } else { 1 });
        }
    }
}

#[test]
fn coprime_multipliers_permute_residues() {
    for h in 2..=6u64 {
        for m in 1..h {
            let image: BTreeSet<u64> = (0..h).map(|c| c * m % h).collect();
            assert_eq!(image.len() == h as usize, m.gcd(&h) == 1, "m={m} h={h}");
        }
    }
}

