//! Verifiers for decompositions of fixed subgroups, driven by explicit data.

use serde::Serialize;

use super::{image_graph, is_free_factorization};
use crate::error::{ensure_rank, Error, Result};
use crate::fixed_points::{fixed_subgroup, Completeness, FixedSearchBudget, FixedSubgroup};
use crate::morphisms::{is_primitive_abelianized, Endomorphism};
use crate::stallings::{fold, pullback, SubgroupGraph};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Fix is cyclic, so the decomposition statement says nothing.
    Vacuous,
    /// Fix does not have full rank.
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub verdict: Verdict,
    pub clauses: Vec<Clause>,
    pub fix_generators: Vec<String>,
    pub fix_rank: usize,
    pub completeness: Completeness,
    pub budget: FixedSearchBudget,
}

impl Report {
    fn new(fixed: &FixedSubgroup) -> Report {
        Report {
            verdict: Verdict::Pass,
            clauses: Vec::new(),
            fix_generators: fixed.graph.basis().iter().map(Word::to_string).collect(),
            fix_rank: fixed.graph.rank(),
            completeness: fixed.completeness,
            budget: fixed.budget,
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.clauses.push(Clause {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    fn settle(mut self) -> Report {
        if self.verdict == Verdict::Pass && self.clauses.iter().any(|c| !c.passed) {
            self.verdict = Verdict::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed_clauses(&self) -> Vec<&str> {
        self.clauses
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn show(ws: &[Word]) -> String {
    let parts: Vec<String> = ws.iter().map(Word::to_string).collect();
    format!("<{}>", parts.join(", "))
}

fn check_words(rank: usize, ws: &[Word]) -> Result<()> {
    ws.iter().try_for_each(|w| ensure_rank(rank, w.rank()))
}

fn invariant(f: &Endomorphism, g: &SubgroupGraph) -> bool {
    image_graph(f, g) == *g
}

fn intersect(a: &SubgroupGraph, b: &SubgroupGraph) -> SubgroupGraph {
    pullback(a, b).expect("same rank").intersection
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MainconnexCase {
    /// `F = H ∗ K`, `H` invariant, `Fix ≤ H`.
    I { h: Vec<Word>, k: Vec<Word> },
    /// `F = H ∗ K`, both invariant, `Fix = (H ∩ Fix) ∗ (K ∩ Fix)` with `K ∩ Fix` cyclic.
    II { h: Vec<Word>, k: Vec<Word> },
    /// `F = H ∗ ⟨y⟩`, `H` invariant, `yφ = h'y`, `hφ = h'hh'⁻¹`,
    /// `Fix = (H ∩ Fix) ∗ ⟨y⁻¹hy⟩`.
    III {
        h: Vec<Word>,
        y: Word,
        h_elt: Word,
        h_prime: Word,
    },
}

impl MainconnexCase {
    pub fn tag(&self) -> &'static str {
        match self {
            MainconnexCase::I { .. } => "i",
            MainconnexCase::II { .. } => "ii",
            MainconnexCase::III { .. } => "iii",
        }
    }
}

pub fn verify_mainconnex(
    f: &Endomorphism,
    case: &MainconnexCase,
    budget: &FixedSearchBudget,
) -> Result<Report> {
    let n = f.rank();
    if !f.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let (h_gens, k_gens) = match case {
        MainconnexCase::I { h, k } | MainconnexCase::II { h, k } => (h, k.clone()),
        MainconnexCase::III {
            h,
            y,
            h_elt,
            h_prime,
        } => {
            check_words(n, &[y.clone(), h_elt.clone(), h_prime.clone()])?;
            (h, vec![y.clone()])
        }
    };
    check_words(n, h_gens)?;
    check_words(n, &k_gens)?;
    let fixed = fixed_subgroup(f, budget);
    let mut report = Report::new(&fixed);
    if fixed.graph.rank() <= 1 {
        report.verdict = Verdict::Vacuous;
        return Ok(report);
    }
    let fix = &fixed.graph;
    let h = fold(h_gens, n)?;
    let k = fold(&k_gens, n)?;
    report.check(
        "free factorization",
        !h.is_trivial() && !k.is_trivial() && is_free_factorization(&[&h, &k], &[], n),
        format!("F = {} * {}", show(&h.basis()), show(&k.basis())),
    );
    report.check("H invariant", invariant(f, &h), "");
    match case {
        MainconnexCase::I { .. } => {
            report.check("Fix <= H", fix.is_subgroup_of(&h), "");
        }
        MainconnexCase::II { .. } => {
            report.check("K invariant", invariant(f, &k), "");
            let hf = intersect(&h, fix);
            let kf = intersect(&k, fix);
            report.check(
                "rank(K & Fix) = 1",
                kf.rank() == 1,
                format!("rank {}", kf.rank()),
            );
            let mut gens = hf.basis();
            gens.extend(kf.basis());
            report.check(
                "Fix = (H & Fix) * (K & Fix)",
                fold(&gens, n)? == *fix && hf.rank() + kf.rank() == fix.rank(),
                "",
            );
        }
        MainconnexCase::III {
            y, h_elt, h_prime, ..
        } => {
            report.check(
                "y, h, h' nontrivial",
                !y.is_identity() && !h_elt.is_identity() && !h_prime.is_identity(),
                "",
            );
            report.check("h, h' in H", h.contains(h_elt) && h.contains(h_prime), "");
            report.check("h not a proper power", !h_elt.is_proper_power(), "");
            let yf = f.apply(y)?;
            report.check("y -> h'y", yf == h_prime.mul(y), format!("y -> {yf}"));
            let hf = f.apply(h_elt)?;
            report.check(
                "h -> h'hh'^-1",
                hf == h_prime.mul(h_elt).mul(&h_prime.inverse()),
                format!("h -> {hf}"),
            );
            let mut gens = intersect(&h, fix).basis();
            gens.push(h_elt.conjugate(y)?);
            report.check("Fix = (H & Fix) * <y^-1 h y>", fold(&gens, n)? == *fix, "");
        }
    }
    Ok(report.settle())
}

/// Data for `F = K₁ ∗ ⋯ ∗ K_r ∗ ⟨y₁,…,y_s⟩ ∗ L` with
/// `Fix = ⟨w₁,…,w_r, y₁⁻¹h₀y₁, …, y_s⁻¹h_{s−1}y_s⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub rank: usize,
    pub k_factors: Vec<Vec<Word>>,
    pub y_letters: Vec<Word>,
    pub l_generators: Vec<Word>,
    pub w_elements: Vec<Word>,
    pub h_elements: Vec<Word>,
    pub h_prime_elements: Vec<Word>,
}

impl DecompositionCertificate {
    pub fn r(&self) -> usize {
        self.k_factors.len()
    }

    pub fn s(&self) -> usize {
        self.y_letters.len()
    }

    fn words(&self) -> impl Iterator<Item = &Word> {
        self.k_factors
            .iter()
            .flatten()
            .chain(&self.y_letters)
            .chain(&self.l_generators)
            .chain(&self.w_elements)
            .chain(&self.h_elements)
            .chain(&self.h_prime_elements)
    }

    /// The generators `w_i` and `y_j⁻¹ h_{j−1} y_j` of the claimed fixed subgroup.
    pub fn claimed_fix(&self) -> Vec<Word> {
        let mut gens = self.w_elements.clone();
        for (y, h) in self.y_letters.iter().zip(&self.h_elements) {
            gens.push(h.conjugate(y).expect("same rank"));
        }
        gens
    }
}

pub fn verify_cormain(
    f: &Endomorphism,
    cert: &DecompositionCertificate,
    budget: &FixedSearchBudget,
) -> Result<Report> {
    let n = f.rank();
    if cert.rank != n {
        return Err(Error::RankMismatch {
            left: n,
            right: cert.rank,
        });
    }
    if !f.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    for w in cert.words() {
        ensure_rank(n, w.rank())?;
    }
    let fixed = fixed_subgroup(f, budget);
    Ok(cormain_against(f, cert, &fixed))
}

/// As [`verify_cormain`], against an already computed fixed subgroup of `f`.
pub fn verify_cormain_with_fix(
    f: &Endomorphism,
    cert: &DecompositionCertificate,
    fixed: &FixedSubgroup,
) -> Result<Report> {
    if cert.rank != f.rank() {
        return Err(Error::RankMismatch {
            left: f.rank(),
            right: cert.rank,
        });
    }
    for w in cert.words() {
        ensure_rank(f.rank(), w.rank())?;
    }
    Ok(cormain_against(f, cert, fixed))
}

fn cormain_against(
    f: &Endomorphism,
    cert: &DecompositionCertificate,
    fixed: &FixedSubgroup,
) -> Report {
    let n = f.rank();
    let mut report = Report::new(fixed);
    let (r, s) = (cert.r(), cert.s());
    let shape = cert.w_elements.len() == r
        && cert.h_elements.len() == s
        && cert.h_prime_elements.len() == s;
    if !report.check("shape", shape, format!("r = {r}, s = {s}")) {
        return report.settle();
    }
    let ks: Vec<SubgroupGraph> = cert
        .k_factors
        .iter()
        .map(|g| fold(g, n).expect("checked rank"))
        .collect();
    let l = fold(&cert.l_generators, n).expect("checked rank");
    let mut parts: Vec<&SubgroupGraph> = ks.iter().collect();
    parts.push(&l);
    let nontrivial =
        ks.iter().all(|k| !k.is_trivial()) && cert.y_letters.iter().all(|y| !y.is_identity());
    report.check(
        "(1) free factorization",
        nontrivial && is_free_factorization(&parts, &cert.y_letters, n),
        format!(
            "ranks {:?} + {} + {}",
            ks.iter().map(SubgroupGraph::rank).collect::<Vec<_>>(),
            s,
            l.rank()
        ),
    );
    let bad: Vec<usize> = (0..r)
        .filter(|&i| !invariant(f, &ks[i]))
        .map(|i| i + 1)
        .collect();
    report.check(
        "(2) K_i invariant",
        bad.is_empty(),
        format!("not invariant: {bad:?}"),
    );
    let mut detail = Vec::new();
    for (j, (y, hp)) in cert
        .y_letters
        .iter()
        .zip(&cert.h_prime_elements)
        .enumerate()
    {
        let yf = f.apply(y).expect("rank");
        if hp.is_identity() || yf != hp.mul(y) {
            detail.push(format!("y{} -> {yf}", j + 1));
        }
    }
    report.check(
        "(3) y_j -> h'_(j-1) y_j",
        detail.is_empty(),
        detail.join("; "),
    );
    let mut detail = Vec::new();
    for (i, (w, k)) in cert.w_elements.iter().zip(&ks).enumerate() {
        let ok = !w.is_identity()
            && !w.is_proper_power()
            && k.contains(w)
            && &f.apply(w).expect("rank") == w;
        if !ok {
            detail.push(format!("w{} = {w}", i + 1));
        }
    }
    report.check(
        "(4) w_i fixed root in K_i",
        detail.is_empty(),
        detail.join("; "),
    );
    let mut detail = Vec::new();
    let mut hj_gens: Vec<Word> = cert.k_factors.iter().flatten().cloned().collect();
    for (j, (h, hp)) in cert
        .h_elements
        .iter()
        .zip(&cert.h_prime_elements)
        .enumerate()
    {
        let hj = fold(&hj_gens, n).expect("rank");
        let hf = f.apply(h).expect("rank");
        let ok = !h.is_identity()
            && hj.contains(h)
            && hj.contains(hp)
            && hf == hp.mul(h).mul(&hp.inverse());
        if !ok {
            detail.push(format!("j = {j}: h -> {hf}"));
        }
        hj_gens.push(cert.y_letters[j].clone());
    }
    report.check(
        "(5) h_j -> h'_j h_j h'_j^-1 in H_j",
        detail.is_empty(),
        detail.join("; "),
    );
    let claimed = fold(&cert.claimed_fix(), n).expect("rank");
    report.check(
        "(6) claimed Fix equals computed Fix",
        claimed == fixed.graph,
        format!("claimed {}", show(&claimed.basis())),
    );
    let bad: Vec<String> = cert
        .y_letters
        .iter()
        .filter(|y| !is_primitive_abelianized(y))
        .map(Word::to_string)
        .collect();
    report.check(
        "(7) y_j primitive in abelianization",
        bad.is_empty(),
        bad.join(", "),
    );
    report.settle()
}

#[derive(Clone, Debug)]
pub enum CertificateSearch {
    Found(DecompositionCertificate, Report),
    Unknown { candidates: usize },
}

/// Largest rank for which every role assignment is tried.
const SEARCH_RANK_LIMIT: usize = 5;

/// Best-effort search over certificates built from the standard generators:
/// each generator is placed in some `K_i`, among the ordered `y_j`, or in `L`,
/// and the remaining data is derived from the computed fixed subgroup.
pub fn certificate_search(
    f: &Endomorphism,
    budget: &FixedSearchBudget,
) -> Result<CertificateSearch> {
    let n = f.rank();
    if !f.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let fixed = fixed_subgroup(f, budget);
    let mut candidates = 0;
    if n > SEARCH_RANK_LIMIT {
        return Ok(CertificateSearch::Unknown { candidates });
    }
    // role[i]: 0 = L, 1 = y, 2.. = K block (restricted growth).
    let mut role = vec![0usize; n];
    loop {
        if valid_growth(&role) {
            let ys: Vec<usize> = (0..n).filter(|&i| role[i] == 1).collect();
            for order in permutations(&ys) {
                candidates += 1;
                if let Some(cert) = derive(f, &fixed, &role, &order) {
                    let report = cormain_against(f, &cert, &fixed);
                    if report.passed() {
                        return Ok(CertificateSearch::Found(cert, report));
                    }
                }
            }
        }
        if !advance(&mut role, n + 2) {
            break;
        }
    }
    Ok(CertificateSearch::Unknown { candidates })
}

fn valid_growth(role: &[usize]) -> bool {
    let mut next = 2;
    for &r in role {
        if r > next {
            return false;
        }
        if r == next {
            next += 1;
        }
    }
    true
}

fn advance(role: &mut [usize], base: usize) -> bool {
    for x in role.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn derive(
    f: &Endomorphism,
    fixed: &FixedSubgroup,
    role: &[usize],
    ys: &[usize],
) -> Option<DecompositionCertificate> {
    let n = f.rank();
    let gen = |i: usize| Word::generator(n, i + 1).expect("in range");
    let blocks = role.iter().max().map_or(0, |&m| m.saturating_sub(1));
    let mut k_factors = Vec::new();
    let mut w_elements = Vec::new();
    for b in 2..2 + blocks {
        let gens: Vec<Word> = (0..n).filter(|&i| role[i] == b).map(gen).collect();
        let k = fold(&gens, n).ok()?;
        if !invariant(f, &k) {
            return None;
        }
        let kf = intersect(&k, &fixed.graph);
        if kf.rank() != 1 {
            return None;
        }
        w_elements.push(kf.basis().remove(0));
        k_factors.push(gens);
    }
    let mut hj_gens: Vec<Word> = k_factors.iter().flatten().cloned().collect();
    let mut h_elements = Vec::new();
    let mut h_prime_elements = Vec::new();
    let mut y_letters = Vec::new();
    for &i in ys {
        let y = gen(i);
        let hj = fold(&hj_gens, n).ok()?;
        let hp = f.apply(&y).ok()?.mul(&y.inverse());
        if !hj.contains(&hp) {
            return None;
        }
        let conj = fixed.graph.conjugate(&y.inverse()).ok()?;
        let meet = intersect(&conj, &hj);
        if meet.rank() != 1 {
            return None;
        }
        h_elements.push(meet.basis().remove(0));
        h_prime_elements.push(hp);
        hj_gens.push(y.clone());
        y_letters.push(y);
    }
    let l_generators = (0..n).filter(|&i| role[i] == 0).map(gen).collect();
    Some(DecompositionCertificate {
        rank: n,
        k_factors,
        y_letters,
        l_generators,
        w_elements,
        h_elements,
        h_prime_elements,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollinsTurnerClause {
    /// `yφ = y`.
    I,
    /// `yφ = h^r y` with `1 ≠ h ∈ H ∩ Fix` not a proper power.
    II { h: Word, r: i64 },
}

pub fn collins_turner_check(
    f: &Endomorphism,
    h_gens: &[Word],
    y: &Word,
    clause: &CollinsTurnerClause,
    budget: &FixedSearchBudget,
) -> Result<Report> {
    let n = f.rank();
    if !f.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    check_words(n, h_gens)?;
    ensure_rank(n, y.rank())?;
    let fixed = fixed_subgroup(f, budget);
    let mut report = Report::new(&fixed);
    if fixed.graph.rank() != n {
        report.verdict = Verdict::Inapplicable;
        return Ok(report);
    }
    let fix = &fixed.graph;
    let h = fold(h_gens, n)?;
    report.check(
        "F = H * <y>",
        !h.is_trivial()
            && !y.is_identity()
            && is_free_factorization(&[&h], std::slice::from_ref(y), n),
        "",
    );
    report.check("H invariant", invariant(f, &h), "");
    let yf = f.apply(y)?;
    let hf = intersect(&h, fix);
    match clause {
        CollinsTurnerClause::I => {
            report.check("y -> y", &yf == y, format!("y -> {yf}"));
            let mut gens = hf.basis();
            gens.push(y.clone());
            report.check("Fix = (H & Fix) * <y>", fold(&gens, n)? == *fix, "");
        }
        CollinsTurnerClause::II { h: elt, r } => {
            ensure_rank(n, elt.rank())?;
            report.check(
                "1 != h in H & Fix, not a proper power",
                !elt.is_identity() && hf.contains(elt) && !elt.is_proper_power(),
                "",
            );
            report.check("y -> h^r y", yf == elt.pow(*r).mul(y), format!("y -> {yf}"));
            let mut gens = hf.basis();
            gens.push(elt.conjugate(y)?);
            report.check("Fix = (H & Fix) * <y^-1 h y>", fold(&gens, n)? == *fix, "");
        }
    }
    Ok(report.settle())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    fn ws(v: &[&str], r: usize) -> Vec<Word> {
        v.iter().map(|s| w(s, r)).collect()
    }

    #[test]
    fn mainconnex_small_cases() {
        let f = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        let b = FixedSearchBudget::for_map(&f, 8);
        let case = MainconnexCase::III {
            h: ws(&["a"], 2),
            y: w("b", 2),
            h_elt: w("a", 2),
            h_prime: w("a", 2),
        };
        let rep = verify_mainconnex(&f, &case, &b).unwrap();
        assert!(rep.passed(), "{:?}", rep.clauses);
        let case = MainconnexCase::III {
            h: ws(&["a"], 2),
            y: w("b", 2),
            h_elt: w("a", 2),
            h_prime: w("aa", 2),
        };
        assert_eq!(
            verify_mainconnex(&f, &case, &b).unwrap().verdict,
            Verdict::Fail
        );
        let g = Endomorphism::parse(4, &["a", "ab", "dc", "dcd"]).unwrap();
        let b = FixedSearchBudget::for_map(&g, 8);
        let case = MainconnexCase::II {
            h: ws(&["a", "b"], 4),
            k: ws(&["c", "d"], 4),
        };
        assert!(verify_mainconnex(&g, &case, &b).unwrap().passed());
        let inner = Endomorphism::inner(&w("a", 2));
        let case = MainconnexCase::I {
            h: ws(&["a"], 2),
            k: ws(&["b"], 2),
        };
        assert_eq!(
            verify_mainconnex(&inner, &case, &b).unwrap().verdict,
            Verdict::Vacuous
        );
    }

    #[test]
    fn cormain_base_case() {
        let f = Endomorphism::inner(&w("a", 2));
        let cert = DecompositionCertificate {
            rank: 2,
            k_factors: vec![ws(&["a", "b"], 2)],
            y_letters: vec![],
            l_generators: vec![],
            w_elements: ws(&["a"], 2),
            h_elements: vec![],
            h_prime_elements: vec![],
        };
        let b = FixedSearchBudget::for_map(&f, 8);
        let rep = verify_cormain(&f, &cert, &b).unwrap();
        assert!(rep.passed(), "{:?}", rep.clauses);
    }

    #[test]
    fn collins_turner_examples() {
        let id = Endomorphism::identity(2);
        let b = FixedSearchBudget::for_map(&id, 6);
        assert!(
            collins_turner_check(&id, &ws(&["a"], 2), &w("b", 2), &CollinsTurnerClause::I, &b)
                .unwrap()
                .passed()
        );
        let f = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        let b = FixedSearchBudget::for_map(&f, 8);
        let ii = CollinsTurnerClause::II { h: w("a", 2), r: 1 };
        assert!(
            collins_turner_check(&f, &ws(&["a"], 2), &w("b", 2), &ii, &b)
                .unwrap()
                .passed()
        );
        let rep = collins_turner_check(&f, &ws(&["a"], 2), &w("b", 2), &CollinsTurnerClause::I, &b)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        let inv = Endomorphism::inversion(2);
        let rep = collins_turner_check(
            &inv,
            &ws(&["a"], 2),
            &w("b", 2),
            &CollinsTurnerClause::I,
            &b,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Inapplicable);
    }

    #[test]
    fn search_finds_small_certificate() {
        let f = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        let b = FixedSearchBudget::for_map(&f, 8);
        match certificate_search(&f, &b).unwrap() {
            CertificateSearch::Found(cert, rep) => {
                assert!(rep.passed());
                assert_eq!(cert.r() + cert.s(), 2);
            }
            other => panic!("{other:?}"),
        }
    }
}
