use freefix::constructions::{
    certificate_search, extend_trivially, find_good_r, free_product_auto, imagey_solve,
    refute_auto_fixed, stable_letter_extend, verify_cormain, verify_mainconnex, CertificateSearch,
    DecompositionCertificate, ImageyOutcome, MainconnexCase, Verdict,
};
use freefix::fixed_points::{fixed_subgroup, FixedSearchBudget};
use freefix::{fold, Endomorphism, Word};

fn w(s: &str, r: usize) -> Word {
    Word::parse(s, r).unwrap()
}

fn ws(v: &[&str], r: usize) -> Vec<Word> {
    v.iter().map(|s| w(s, r)).collect()
}

fn six_generator_map() -> Endomorphism {
    Endomorphism::parse(6, &["a", "ab", "dc", "dcd", "BabCDcde", "bfb"]).unwrap()
}

fn six_generator_certificate() -> DecompositionCertificate {
    DecompositionCertificate {
        rank: 6,
        k_factors: vec![ws(&["a"], 6), ws(&["c", "d"], 6)],
        y_letters: ws(&["b", "e"], 6),
        l_generators: ws(&["f"], 6),
        w_elements: ws(&["a", "CDcd"], 6),
        h_elements: ws(&["a", "BabCDcd"], 6),
        h_prime_elements: ws(&["a", "BabCDcd"], 6),
    }
}

fn budget(f: &Endomorphism, max_len: usize) -> FixedSearchBudget {
    FixedSearchBudget::for_map(f, max_len).with_cap(64)
}

#[test]
fn product_rebuilds_four_generator_map() {
    let p = free_product_auto(
        &Endomorphism::parse(2, &["a", "ab"]).unwrap(),
        &Endomorphism::parse(2, &["ba", "bab"]).unwrap(),
    )
    .unwrap();
    let fix = fixed_subgroup(&p, &FixedSearchBudget::for_map(&p, 10));
    assert_eq!(fix.graph, fold(&ws(&["a", "Bab", "CDcd"], 4), 4).unwrap());
    let case = MainconnexCase::II {
        h: ws(&["a", "b"], 4),
        k: ws(&["c", "d"], 4),
    };
    assert!(verify_mainconnex(&p, &case, &fix.budget).unwrap().passed());
    let inv = free_product_auto(&Endomorphism::inversion(1), &Endomorphism::inversion(2)).unwrap();
    assert!(fixed_subgroup(&inv, &FixedSearchBudget::for_map(&inv, 6))
        .graph
        .is_trivial());
    let bad = Endomorphism::parse(1, &["aa"]).unwrap();
    assert!(free_product_auto(&bad, &Endomorphism::identity(1)).is_err());
}

#[test]
fn trivial_extension_keeps_fix() {
    let phi = Endomorphism::parse(2, &["a", "ab"]).unwrap();
    let f = extend_trivially(&phi, 3, None).unwrap();
    let fix = fixed_subgroup(&f, &FixedSearchBudget::for_map(&f, 8));
    assert_eq!(fix.graph, fold(&ws(&["a", "Bab"], 3), 3).unwrap());
    let case = MainconnexCase::I {
        h: ws(&["a", "b"], 3),
        k: ws(&["c"], 3),
    };
    assert!(verify_mainconnex(&f, &case, &fix.budget).unwrap().passed());

    let id = extend_trivially(&Endomorphism::identity(1), 2, None).unwrap();
    let fix = fixed_subgroup(&id, &FixedSearchBudget::for_map(&id, 6));
    assert_eq!(fix.graph, fold(&ws(&["a"], 2), 2).unwrap());

    let five = Endomorphism::parse(5, &["a", "ab", "dc", "dcd", "BabCDcde"]).unwrap();
    let six = extend_trivially(&five, 6, Some(&ws(&["bfb"], 6))).unwrap();
    assert_eq!(six, six_generator_map());
    let case = MainconnexCase::I {
        h: ws(&["a", "b", "c", "d", "e"], 6),
        k: ws(&["f"], 6),
    };
    let rep = verify_mainconnex(&six, &case, &budget(&six, 12)).unwrap();
    assert!(rep.passed(), "{:?}", rep.clauses);
}

#[test]
fn stable_letter_builds_five_generator_map() {
    let phi = Endomorphism::parse(4, &["a", "ab", "dc", "dcd"]).unwrap();
    let h = w("BabCDcd", 4);
    let f = stable_letter_extend(&phi, &h, &h, 0).unwrap();
    assert_eq!(
        f,
        Endomorphism::parse(5, &["a", "ab", "dc", "dcd", "BabCDcde"]).unwrap()
    );
    let sub = Endomorphism::parse(2, &["a", "ab"]).unwrap();
    let case = MainconnexCase::III {
        h: ws(&["a"], 2),
        y: w("b", 2),
        h_elt: w("a", 2),
        h_prime: w("a", 2),
    };
    assert!(
        verify_mainconnex(&sub, &case, &FixedSearchBudget::for_map(&sub, 8))
            .unwrap()
            .passed()
    );
}

#[test]
fn good_exponents_for_identity_on_cyclic() {
    let rs = find_good_r(
        &Endomorphism::identity(1),
        &w("a", 1),
        &w("a", 1),
        -5..=5,
        8,
    )
    .unwrap();
    let bad: Vec<i64> = rs.iter().filter(|g| !g.good).map(|g| g.r).collect();
    assert_eq!(bad, vec![-1]);
}

#[test]
fn stable_letter_cases_pass_mainconnex() {
    let phi = Endomorphism::parse(2, &["a", "ab"]).unwrap();
    let h = w("a", 2);
    let rs = find_good_r(&phi, &h, &h, -3..=3, 10).unwrap();
    let good: Vec<i64> = rs.iter().filter(|g| g.good).map(|g| g.r).collect();
    // y -> a^(r+1) y: r = -1 fixes y and r = 0 makes c^-1 b fixed.
    assert_eq!(good, vec![-3, -2, 1, 2, 3]);
    for r in good {
        let f = stable_letter_extend(&phi, &h, &h, r).unwrap();
        let case = MainconnexCase::III {
            h: ws(&["a", "b"], 3),
            y: w("c", 3),
            h_elt: w("a", 3),
            h_prime: w("a", 3).pow(r + 1),
        };
        let rep = verify_mainconnex(&f, &case, &FixedSearchBudget::for_map(&f, 10)).unwrap();
        assert!(rep.passed(), "r = {r}: {:?}", rep.clauses);
    }
}

#[test]
fn imagey_on_five_generator_map() {
    let f = Endomorphism::parse(5, &["a", "ab", "dc", "dcd", "BabCDcde"]).unwrap();
    let h = fold(&ws(&["a", "b", "c", "d"], 5), 5).unwrap();
    let out = imagey_solve(&f, &h, &w("e", 5), &w("BabCDcd", 5)).unwrap();
    assert_eq!(
        out,
        ImageyOutcome::Solved {
            h_prime: w("BabCDcd", 5)
        }
    );
}

#[test]
fn rank_four_subgroup_is_not_fixed_by_short_automorphisms() {
    let report = refute_auto_fixed(&ws(&["a", "Bab", "Cbc"], 3), 3, 2, 3).unwrap();
    assert!(report.automorphisms > 0);
    assert!(report.refuted(), "{:?}", report.unrefuted);
}

#[test]
fn six_generator_certificate_and_mutations() {
    let f = six_generator_map();
    let b = budget(&f, 12);
    let cert = six_generator_certificate();
    let rep = verify_cormain(&f, &cert, &b).unwrap();
    assert!(rep.passed(), "{:?}", rep.clauses);
    assert!(cert.r() + cert.s() >= rep.fix_rank);
    let mut m = cert.clone();
    m.h_prime_elements[1] = w("BabCDcd", 6).pow(2);
    let rep = verify_cormain(&f, &m, &b).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
}

#[test]
fn three_generator_certificate_found_with_unfixed_h() {
    let f = Endomorphism::parse(3, &["BAbaBab", "BAbabABab", "BAbaaabbc"]).unwrap();
    let b = FixedSearchBudget::for_map(&f, 14);
    match certificate_search(&f, &b).unwrap() {
        CertificateSearch::Found(cert, rep) => {
            assert!(rep.passed());
            assert_eq!(cert.k_factors, vec![ws(&["a", "b"], 3)]);
            assert_eq!(cert.y_letters, ws(&["c"], 3));
            assert!(cert.h_elements.iter().any(|h| &f.apply(h).unwrap() != h));
        }
        other => panic!("{other:?}"),
    }
}
