use proptest::prelude::*;
use thmon::green::dclass_index;
use thmon::{gen, Alphabet, Element};

fn alphabet() -> impl Strategy<Value = Alphabet> {
    prop_oneof![
        (2u8..=4).prop_map(|k| Alphabet::new(k).unwrap()),
        (2u8..=3, 1u8..=2).prop_map(|(k, b)| Alphabet::with_heads(k, b).unwrap()),
    ]
}

fn triple() -> impl Strategy<Value = (Element, Element, Element)> {
    (alphabet(), any::<u64>()).prop_map(|(a, s)| {
        let mut r = gen::rng(s);
        (gen::element(&mut r, a, 4, 3), gen::element(&mut r, a, 4, 3), gen::element(&mut r, a, 4, 3))
    })
}

proptest! {
    #[test]
    fn monoid_laws((x, y, z) in triple()) {
        let a = x.alphabet();
        prop_assert_eq!(x.compose(&y).unwrap().compose(&z).unwrap(), x.compose(&y.compose(&z).unwrap()).unwrap());
        prop_assert_eq!(x.compose(&Element::identity(a)).unwrap(), x.clone());
        prop_assert_eq!(Element::identity(a).compose(&x).unwrap(), x.clone());
        prop_assert!(x.compose(&Element::zero(a)).unwrap().is_zero());
        prop_assert!(Element::zero(a).compose(&x).unwrap().is_zero());
    }

    #[test]
    fn restriction_is_invisible((x, _, _) in triple(), i in any::<prop::sample::Index>(), depth in 0usize..3) {
        prop_assume!(!x.is_zero());
        let t = x.restrict(i.index(x.entries().len()), depth).unwrap();
        prop_assert_eq!(t.canonicalize(), x.clone());
        let k = usize::from(x.alphabet().k());
        prop_assert_eq!(t.image_code().len() % (k - 1), x.imc_size() % (k - 1));
    }

    #[test]
    fn composition_agrees_with_application((x, y, _) in triple(), s in any::<u64>()) {
        let xy = x.compose(&y).unwrap();
        let mut r = gen::rng(s);
        for _ in 0..8 {
            let w = gen::word(&mut r, x.alphabet(), 5);
            if let Some(v) = y.apply(&w).and_then(|v| x.apply(&v)) {
                prop_assert_eq!(xy.apply(&w), Some(v));
            }
        }
    }

    #[test]
    fn dclass_is_invariant_under_units((x, _, _) in triple(), s in any::<u64>()) {
        let a = x.alphabet();
        prop_assume!(!a.is_bmode());
        let u = gen::bijection_below(&mut gen::rng(s), a, &a.roots(), 2);
        prop_assert!(u.is_unit());
        prop_assert_eq!(dclass_index(&x.compose(&u).unwrap()), dclass_index(&x));
        prop_assert_eq!(dclass_index(&u.compose(&x).unwrap()), dclass_index(&x));
    }

    #[test]
    fn injective_elements_invert(a in alphabet(), s in any::<u64>()) {
        let x = gen::injective_element(&mut gen::rng(s), a, 4, 3);
        prop_assert!(x.is_injective());
        let y = x.invert().unwrap();
        prop_assert_eq!(y.invert().unwrap(), x.clone());
        let e = y.compose(&x).unwrap();
        prop_assert!(e.is_idempotent());
        prop_assert_eq!(e, Element::partial_identity(&x.dom_code()));
        prop_assert_eq!(x.compose(&y).unwrap().compose(&x).unwrap(), x);
    }

    #[test]
    fn bmode_round_trip(k in 2u8..=4, s in any::<u64>()) {
        let x = gen::element(&mut gen::rng(s), Alphabet::new(k).unwrap(), 4, 3);
        let w = x.bmode_wrap().unwrap();
        prop_assert_eq!(w.bmode_unwrap().unwrap(), x);
    }

    #[test]
    fn display_round_trip((x, _, _) in triple()) {
        prop_assert_eq!(Element::parse(x.alphabet(), &x.to_string()).unwrap(), x);
    }
}
