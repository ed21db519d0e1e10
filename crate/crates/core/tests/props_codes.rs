use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use thmon::codes::{ess_contained, ess_equal, is_prefix_code};
use thmon::{gen, Alphabet, PrefixCode};

fn alphabet() -> impl Strategy<Value = Alphabet> {
    prop_oneof![
        (2u8..=4).prop_map(|k| Alphabet::new(k).unwrap()),
        (2u8..=3, 1u8..=3).prop_map(|(k, b)| Alphabet::with_heads(k, b).unwrap()),
    ]
}

fn code() -> impl Strategy<Value = PrefixCode> {
    (alphabet(), any::<u64>()).prop_map(|(a, s)| gen::code(&mut gen::rng(s), a, 3, 6))
}

proptest! {
    #[test]
    fn codes_are_prefix_free(p in code()) {
        prop_assert!(is_prefix_code(p.words()));
        prop_assert!(p.kraft_sum() <= BigRational::one() * BigRational::from_integer(p.alphabet().roots().len().into()));
    }

    #[test]
    fn split_keeps_kraft_and_ideal(p in code(), i in any::<prop::sample::Index>()) {
        prop_assume!(!p.is_empty());
        let q = p.split(i.index(p.len())).unwrap();
        prop_assert_eq!(q.kraft_sum(), p.kraft_sum());
        prop_assert!(ess_equal(&p, &q).unwrap());
        prop_assert_eq!(q.canonical(), p.canonical());
    }

    #[test]
    fn canonical_is_stable(p in code()) {
        let c = p.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert!(ess_equal(&p, &c).unwrap());
        prop_assert!(c.len() <= p.len());
    }

    #[test]
    fn maximal_iff_kraft_full(a in alphabet(), s in any::<u64>(), splits in 0usize..5) {
        let p = gen::maximal_code_below(&mut gen::rng(s), a, a.roots(), splits);
        prop_assert!(p.is_maximal());
        prop_assert!(ess_contained(&PrefixCode::new(a, a.roots()).unwrap(), &p).unwrap());
        if p.len() > 1 {
            let fewer = PrefixCode::new(a, p.words()[1..].to_vec()).unwrap();
            prop_assert!(!fewer.is_maximal());
        }
    }

    #[test]
    fn ess_contained_is_a_preorder(p in code(), s in any::<u64>()) {
        let q = gen::code(&mut gen::rng(s), p.alphabet(), 3, 6);
        prop_assert!(ess_contained(&p, &p).unwrap());
        let both = ess_contained(&p, &q).unwrap() && ess_contained(&q, &p).unwrap();
        prop_assert_eq!(both, ess_equal(&p, &q).unwrap());
    }
}
