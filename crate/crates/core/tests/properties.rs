//! Laws checked over generator outputs.

use proptest::prelude::*;

use twoexact::closure::weak_closure_triple;
use twoexact::core2::{replay_two_category, validate_two_category};
use twoexact::exact::check_puppe;
use twoexact::factor::{validate_fs, FactorizationSystem};
use twoexact::gen::{self, mutate};
use twoexact::ideal::{replay_two_ideal, validate_two_ideal, zero_ideal, TwoIdeal};
use twoexact::idealeq::ideals_equivalent;
use twoexact::io::{Document, FsDoc, IdealDoc, TwoCategoryDoc};
use twoexact::limits::{is_two_kernel, two_kernels};
use twoexact::onecat::puppe_exact_1cat;
use twoexact::{Caps, Error, TwoCategory};

fn small() -> impl Strategy<Value = (String, TwoCategory)> {
    prop_oneof![
        (0usize..=2).prop_map(|n| (format!("pb{n}"), gen::locally_discrete(&gen::partial_bijections(n)))),
        (0usize..=2).prop_map(|k| (format!("ct2{k}"), gen::locally_discrete(&gen::cyclic_tower(2, k)))),
        (0usize..=2).prop_map(|n| (format!("ps{n}"), gen::locally_discrete(&gen::pointed_sets(n)))),
        Just(("chaotic-pb1".to_string(), gen::fixture("chaotic-pb1").unwrap())),
        Just(("loop-on-null".to_string(), gen::fixture("loop-on-null").unwrap())),
    ]
}

fn with_parallel_cells() -> impl Strategy<Value = TwoCategory> {
    prop_oneof![
        Just(gen::fixture("loop-on-null").unwrap()),
        Just(gen::with_z2_loops(&gen::partial_bijections(2), &["pb2>2:__", "pb1>1:_"]).unwrap()),
    ]
}

fn zero(t: &TwoCategory) -> Option<TwoIdeal> {
    match zero_ideal(t) {
        Ok(n) => Some(n),
        Err(Error::Precondition(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

fn round_trips(doc: &Document) {
    let text = doc.serialize();
    let back = Document::parse(&text).unwrap();
    assert_eq!(back.serialize(), text);
    let canon = doc.canonicalize();
    assert_eq!(canon.canonicalize(), canon);
    assert_eq!(Document::parse(&canon.serialize()).unwrap().serialize(), canon.serialize());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn documents_round_trip((_, t) in small()) {
        let doc = TwoCategoryDoc::from_category(&t);
        prop_assert_eq!(&doc.build().unwrap(), &t);
        round_trips(&Document::TwoCategory(doc));
        if let Some(n) = zero(&t) {
            let d = IdealDoc::from_ideal(&t, &n);
            prop_assert_eq!(&d.resolve(&t).unwrap(), &n);
            round_trips(&Document::TwoIdeal(d));
        }
        if let Ok(fs) = FactorizationSystem::image(&t) {
            round_trips(&Document::FactorizationSystem(FsDoc::from_fs(&t, &fs)));
        }
    }

    #[test]
    fn canonical_names_keep_the_structure((_, t) in small()) {
        let Document::TwoCategory(d) = Document::TwoCategory(TwoCategoryDoc::from_category(&t)).canonicalize() else {
            unreachable!()
        };
        let c = d.build().unwrap();
        prop_assert_eq!((c.n_objects(), c.n_mors(), c.n_cells()), (t.n_objects(), t.n_mors(), t.n_cells()));
        prop_assert!(validate_two_category(&c).unwrap().passed());
    }

    #[test]
    fn generators_validate((name, t) in small()) {
        let caps = Caps::default();
        prop_assert!(validate_two_category(&t).unwrap().passed(), "{}", name);
        prop_assert!(validate_two_category(&t.dual()).unwrap().passed(), "{} dual", name);
        prop_assert_eq!(&t.dual().dual(), &t);
        if let Some(n) = zero(&t) {
            prop_assert!(validate_two_ideal(&t, &n, &caps).unwrap().passed(), "{}", name);
        }
        // loop-on-null lacks the kernel the image factorization needs.
        if let Ok(fs) = FactorizationSystem::image(&t) {
            prop_assert!(validate_fs(&t, &fs, &caps).unwrap().passed(), "{}", name);
        }
        prop_assert!(validate_fs(&t, &FactorizationSystem::trivial(&t).unwrap(), &caps).unwrap().passed(), "{}", name);
    }

    #[test]
    fn retargeted_vcomp_is_caught(t in with_parallel_cells(), seed in any::<u64>()) {
        let m = mutate::retarget_vcomp(&t, seed).unwrap();
        prop_assert_eq!(&m, &mutate::retarget_vcomp(&t, seed).unwrap());
        let cert = validate_two_category(&m).unwrap();
        prop_assert!(cert.failed());
        prop_assert!(replay_two_category(&m, &cert).unwrap());
    }

    #[test]
    fn dropped_null_identity_is_caught((name, t) in small(), seed in any::<u64>()) {
        if let Some(n) = zero(&t) {
            let m = mutate::drop_null_2cell(&t, &n, seed).unwrap();
            let cert = validate_two_ideal(&t, &m, &Caps::default()).unwrap();
            prop_assert_eq!(cert.clause(), Some("closure-id2"), "{}", name);
            prop_assert!(replay_two_ideal(&t, &m, &cert).unwrap());
        }
    }

    #[test]
    fn weak_closure_verdicts_agree((name, t) in small()) {
        let caps = Caps::default();
        for n in [Some(TwoIdeal::maximal(&t)), zero(&t)].into_iter().flatten() {
            match weak_closure_triple(&t, &n, &caps) {
                Ok((a, b, c)) => prop_assert!(a == b && b == c, "{}: ({}, {}, {})", name, a, b, c),
                Err(Error::Precondition(_)) => {}
                Err(e) => panic!("{name}: {e}"),
            }
        }
    }

    #[test]
    fn ideal_equivalence_is_reflexive((name, t) in small()) {
        if let Some(n) = zero(&t) {
            prop_assert!(ideals_equivalent(&t, &n, &n, &Caps::default()).unwrap().0.passed(), "{}", name);
        }
    }

    #[test]
    fn found_kernels_are_kernels((name, t) in small(), pick in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        if let Some(n) = zero(&t) {
            let f = t.mors().nth(pick.index(t.n_mors())).unwrap();
            for p in two_kernels(&t, &n, f, &caps).unwrap() {
                prop_assert!(is_two_kernel(&t, &n, &p, &caps).unwrap().passed(), "{} {}", name, t.mor_name(f));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    /// On locally discrete inputs the 2-dimensional Puppe check and the
    /// 1-categorical oracle give the same verdict.
    #[test]
    fn puppe_matches_the_oracle(which in 0usize..3, size in 0usize..=2) {
        let c = match which {
            0 => gen::partial_bijections(size),
            1 => gen::cyclic_tower(2, size),
            _ => gen::pointed_sets(size),
        };
        let two = check_puppe(&gen::locally_discrete(&c), false, &Caps::default()).unwrap().passed();
        prop_assert_eq!(two, puppe_exact_1cat(&c).passed());
    }
}
