use freefix::fixed_points::{fixed_subgroup, FixedSearchBudget};
use freefix::morphisms::{ab_matrix, random_automorphism};
use freefix::stallings::pullback;
use freefix::{fold, Endomorphism, Letter, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..=max_len).prop_map(move |raw| {
        Word::reduce(raw.into_iter().map(|(i, inv)| Letter::new(i, inv)), rank).unwrap()
    })
}

fn words(rank: usize, max_len: usize, count: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(word(rank, max_len), 1..=count)
}

fn automorphism(rank: usize) -> impl Strategy<Value = Endomorphism> {
    (any::<u64>(), 0usize..=4).prop_map(move |(seed, moves)| {
        random_automorphism(&mut ChaCha8Rng::seed_from_u64(seed), rank, moves)
    })
}

fn endomorphism(rank: usize) -> impl Strategy<Value = Endomorphism> {
    prop::collection::vec(word(rank, 4), rank)
        .prop_map(move |images| Endomorphism::new(rank, images).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_laws(u in word(3, 10), v in word(3, 10), x in word(3, 10)) {
        prop_assert_eq!(&(&u * &v) * &x, &u * &(&v * &x));
        prop_assert!((&u * &u.inverse()).is_identity());
        prop_assert_eq!((&u * &v).inverse(), &v.inverse() * &u.inverse());
        prop_assert_eq!(u.inverse().inverse(), u.clone());
    }

    #[test]
    fn cyclic_reduction_recomposes(u in word(3, 12)) {
        let (core, c) = u.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(&(&c * &core) * &c.inverse(), u.clone());
        if !u.is_identity() {
            let (root, e) = u.root().unwrap();
            prop_assert_eq!(root.pow(e as i64), u.clone());
            prop_assert!(!root.is_proper_power());
        }
    }

    #[test]
    fn conjugacy_witness_found(u in word(3, 8), y in word(3, 6)) {
        let v = u.conjugate(&y).unwrap();
        let z = u.conjugacy_witness(&v).unwrap();
        prop_assert!(z.is_some());
        prop_assert_eq!(u.conjugate(&z.unwrap()).unwrap(), v);
    }

    #[test]
    fn homomorphism_law(f in endomorphism(3), u in word(3, 8), v in word(3, 8)) {
        prop_assert_eq!(f.apply(&(&u * &v)).unwrap(), &f.apply(&u).unwrap() * &f.apply(&v).unwrap());
    }

    #[test]
    fn composition_applies_left_to_right(f in endomorphism(2), g in endomorphism(2), u in word(2, 6)) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.apply(&u).unwrap(), g.apply(&f.apply(&u).unwrap()).unwrap());
        prop_assert_eq!(ab_matrix(&fg), ab_matrix(&f).mul(&ab_matrix(&g)).unwrap());
    }

    #[test]
    fn inverse_undoes(f in automorphism(3), u in word(3, 8)) {
        prop_assert!(f.is_automorphism());
        let g = f.invert().unwrap();
        prop_assert_eq!(g.apply(&f.apply(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn generators_and_products_are_members(gens in words(3, 6, 4), picks in prop::collection::vec((0usize..4, any::<bool>()), 0..6)) {
        let h = fold(&gens, 3).unwrap();
        prop_assert!(h.check_invariants());
        let mut product = Word::identity(3);
        for (i, inv) in picks {
            let g = &gens[i % gens.len()];
            product = &product * &if inv { g.inverse() } else { g.clone() };
        }
        prop_assert!(h.contains(&product));
        let coords = h.spell(&product).unwrap();
        prop_assert_eq!(h.unspell(&coords).unwrap(), product);
        prop_assert!(h.rank() <= gens.len());
    }

    #[test]
    fn fold_is_canonical(gens in words(3, 6, 4)) {
        let h = fold(&gens, 3).unwrap();
        let mut reversed = gens.clone();
        reversed.reverse();
        prop_assert_eq!(&fold(&reversed, 3).unwrap(), &h);
        prop_assert_eq!(&fold(&h.basis(), 3).unwrap(), &h);
    }

    #[test]
    fn conjugation_moves_members(gens in words(2, 5, 3), y in word(2, 5)) {
        let h = fold(&gens, 2).unwrap();
        let hy = h.conjugate(&y).unwrap();
        for g in &gens {
            prop_assert!(hy.contains(&g.conjugate(&y).unwrap()));
        }
        let c = h.conjugate_to(&hy).unwrap();
        prop_assert!(c.is_some() || h.is_trivial());
        if let Some(c) = c {
            prop_assert_eq!(h.conjugate(&c).unwrap(), hy);
        }
    }

    #[test]
    fn intersection_membership(a in words(2, 5, 3), b in words(2, 5, 3), probes in prop::collection::vec(word(2, 8), 20)) {
        let h = fold(&a, 2).unwrap();
        let k = fold(&b, 2).unwrap();
        let meet = pullback(&h, &k).unwrap().intersection;
        for p in probes.iter().chain(meet.basis().iter()) {
            prop_assert_eq!(meet.contains(p), h.contains(p) && k.contains(p));
        }
    }

    #[test]
    fn fixed_generators_are_fixed(f in automorphism(2)) {
        let fix = fixed_subgroup(&f, &FixedSearchBudget::for_map(&f, 6));
        prop_assert!(fix.graph.rank() <= 2);
        for g in fix.graph.basis() {
            prop_assert_eq!(f.apply(&g).unwrap(), g);
        }
    }

    #[test]
    fn eigengroup_elements_twist(f in automorphism(2), y in word(2, 2)) {
        let twisted = f.twist(&y).unwrap();
        let fix = fixed_subgroup(&twisted, &FixedSearchBudget::for_map(&twisted, 6));
        for g in fix.graph.basis() {
            // x f = y x y^-1
            prop_assert_eq!(f.apply(&g).unwrap(), &(&y * &g) * &y.inverse());
        }
    }
}
