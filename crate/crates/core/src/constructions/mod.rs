//! The three basic ways of building automorphisms with prescribed fixed
//! subgroups, the search for good exponents in the stable-letter
//! construction, and the image-of-`y` lemma.

mod verify;

use serde::Serialize;

pub use verify::{
    certificate_search, collins_turner_check, verify_cormain, verify_cormain_with_fix,
    verify_mainconnex, CertificateSearch, Clause, CollinsTurnerClause, DecompositionCertificate,
    MainconnexCase, Report, Verdict,
};

use crate::error::{ensure_rank, Error, Result};
use crate::fixed_points::{fixed_subgroup, Completeness, FixedSearchBudget};
use crate::morphisms::Endomorphism;
use crate::stallings::{fold, SubgroupGraph};
use crate::word::{words_up_to, Letter, Word};

/// Renumbers generator `i` as `i + offset` in a free group of rank `rank`.
pub(crate) fn shift(w: &Word, offset: usize, rank: usize) -> Word {
    let letters = w
        .letters()
        .iter()
        .map(|l| Letter::new(l.index() + offset, l.is_inverse()));
    Word::reduce(letters, rank).expect("shifted letters in range")
}

/// Extends an endomorphism of rank `m` to rank `n > m`; the new generators go
/// to `extra` if given, and otherwise to their inverses.
pub fn extend_trivially(
    phi: &Endomorphism,
    n: usize,
    extra: Option<&[Word]>,
) -> Result<Endomorphism> {
    let m = phi.rank();
    if m >= n {
        return Err(Error::Precondition(format!(
            "cannot extend rank {m} to rank {n}"
        )));
    }
    let mut images = phi
        .images()
        .iter()
        .map(|w| w.embed(n))
        .collect::<Result<Vec<_>>>()?;
    match extra {
        Some(ws) => {
            if ws.len() != n - m {
                return Err(Error::DimensionMismatch {
                    expected: n - m,
                    found: ws.len(),
                });
            }
            for w in ws {
                ensure_rank(n, w.rank())?;
                images.push(w.clone());
            }
        }
        None => {
            for i in m + 1..=n {
                images.push(Word::generator(n, i)?.inverse());
            }
        }
    }
    let f = Endomorphism::new(n, images)?;
    if extra.is_some() && !f.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    Ok(f)
}

/// `φ₁ ∗ φ₂` on the free product of their domains; the generators of the
/// second factor are renumbered after those of the first.
pub fn free_product_auto(phi1: &Endomorphism, phi2: &Endomorphism) -> Result<Endomorphism> {
    if !phi1.is_automorphism() || !phi2.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let (m, k) = (phi1.rank(), phi2.rank());
    let mut images = phi1
        .images()
        .iter()
        .map(|w| w.embed(m + k))
        .collect::<Result<Vec<_>>>()?;
    images.extend(phi2.images().iter().map(|w| shift(w, m, m + k)));
    Endomorphism::new(m + k, images)
}

fn check_stable_data(phi: &Endomorphism, h: &Word, h_prime: &Word) -> Result<()> {
    ensure_rank(phi.rank(), h.rank())?;
    ensure_rank(phi.rank(), h_prime.rank())?;
    if h.is_identity() {
        return Err(Error::Precondition("h is trivial".into()));
    }
    if h.is_proper_power() {
        return Err(Error::Precondition(format!("h = {h} is a proper power")));
    }
    if h_prime.is_identity() {
        return Err(Error::Precondition("h' is trivial".into()));
    }
    if !phi.is_automorphism() {
        return Err(Error::Precondition(
            "the map on H is not an automorphism".into(),
        ));
    }
    let lhs = phi.apply(h)?;
    let rhs = h_prime.mul(h).mul(&h_prime.inverse());
    if lhs != rhs {
        return Err(Error::Precondition(format!(
            "h maps to {lhs}, not h'hh'^-1 = {rhs}"
        )));
    }
    Ok(())
}

/// Adds a new last generator `y` with `y ↦ h' h^r y`.
pub fn stable_letter_extend(
    phi: &Endomorphism,
    h: &Word,
    h_prime: &Word,
    r: i64,
) -> Result<Endomorphism> {
    check_stable_data(phi, h, h_prime)?;
    let n = phi.rank() + 1;
    let mut images = phi
        .images()
        .iter()
        .map(|w| w.embed(n))
        .collect::<Result<Vec<_>>>()?;
    let coeff = h_prime.mul(&h.pow(r)).embed(n)?;
    images.push(coeff.mul(&Word::generator(n, n)?));
    Endomorphism::new(n, images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodR {
    pub r: i64,
    pub good: bool,
    /// `h' h^r = 1`, the case where `y` itself is fixed.
    pub degenerate: bool,
    pub fix_rank: usize,
    pub completeness: Completeness,
}

/// For each `r`, whether the stable-letter extension has fixed subgroup
/// exactly `Fix φ ∗ ⟨y⁻¹hy⟩` at the budget (and the search stabilized).
pub fn find_good_r(
    phi: &Endomorphism,
    h: &Word,
    h_prime: &Word,
    range: std::ops::RangeInclusive<i64>,
    max_len: usize,
) -> Result<Vec<GoodR>> {
    check_stable_data(phi, h, h_prime)?;
    let n = phi.rank() + 1;
    let base = fixed_subgroup(phi, &FixedSearchBudget::for_map(phi, max_len));
    let y = Word::generator(n, n)?;
    let mut expected_gens = base
        .graph
        .basis()
        .iter()
        .map(|b| b.embed(n))
        .collect::<Result<Vec<_>>>()?;
    expected_gens.push(y.inverse().mul(&h.embed(n)?).mul(&y));
    let expected = fold(&expected_gens, n)?;
    let mut out = Vec::new();
    for r in range {
        let f = stable_letter_extend(phi, h, h_prime, r)?;
        let fixed = fixed_subgroup(&f, &FixedSearchBudget::for_map(&f, max_len));
        out.push(GoodR {
            r,
            good: fixed.graph == expected && fixed.completeness == Completeness::BoundedComplete,
            degenerate: h_prime.mul(&h.pow(r)).is_identity(),
            fix_rank: fixed.graph.rank(),
            completeness: fixed.completeness,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageyOutcome {
    /// `y⁻¹hy` is fixed; `h' = (y)φ · y⁻¹` lies in `H` and `hφ = h'hh'⁻¹`.
    Solved { h_prime: Word },
    /// `y⁻¹hy` is not fixed by this map, but some `h' ∈ H` does satisfy
    /// `hφ = h'hh'⁻¹`, so another choice of `yφ` could fix it.
    NotFixed {
        image: Word,
        h_prime_candidate: Word,
    },
    /// No `h' ∈ H` satisfies `hφ = h'hh'⁻¹`: no automorphism agreeing with
    /// `φ` on `H` fixes `y⁻¹hy`.
    Contradiction { h_image: Word, reason: String },
}

/// Decides whether `F = H ∗ ⟨y⟩`.
pub(crate) fn is_free_factorization(parts: &[&SubgroupGraph], extra: &[Word], rank: usize) -> bool {
    let mut gens = Vec::new();
    let mut total = extra.len();
    for p in parts {
        gens.extend(p.basis());
        total += p.rank();
    }
    gens.extend(extra.iter().cloned());
    total == rank && fold(&gens, rank).map(|g| g.is_full()).unwrap_or(false)
}

pub(crate) fn image_graph(f: &Endomorphism, h: &SubgroupGraph) -> SubgroupGraph {
    let gens: Vec<Word> = h
        .basis()
        .iter()
        .map(|b| f.apply(b).expect("same rank"))
        .collect();
    fold(&gens, f.rank()).expect("same rank")
}

/// Under `F = H ∗ ⟨y⟩` with `H` invariant, relates `yφ` and `hφ`.
pub fn imagey_solve(
    f: &Endomorphism,
    h_graph: &SubgroupGraph,
    y: &Word,
    h: &Word,
) -> Result<ImageyOutcome> {
    let n = f.rank();
    ensure_rank(n, h_graph.ambient_rank())?;
    ensure_rank(n, y.rank())?;
    ensure_rank(n, h.rank())?;
    if y.is_identity() || !is_free_factorization(&[h_graph], std::slice::from_ref(y), n) {
        return Err(Error::Precondition(
            "F is not the free product of H and <y>".into(),
        ));
    }
    if image_graph(f, h_graph) != *h_graph {
        return Err(Error::Precondition("H is not invariant".into()));
    }
    if h.is_identity() || !h_graph.contains(h) {
        return Err(Error::Precondition(format!(
            "h = {h} is not a nontrivial element of H"
        )));
    }
    let hy = h.conjugate(y)?;
    let image = f.apply(&hy)?;
    let h_image = f.apply(h)?;
    if image == hy {
        let h_prime = f.apply(y)?.mul(&y.inverse());
        if h_graph.contains(&h_prime) && h_image == h_prime.mul(h).mul(&h_prime.inverse()) {
            return Ok(ImageyOutcome::Solved { h_prime });
        }
        return Err(Error::Precondition(
            "y^-1 h y is fixed but the conclusion fails; the hypotheses cannot all hold".into(),
        ));
    }
    match conjugator_in(h_graph, h, &h_image)? {
        Some(h_prime_candidate) => Ok(ImageyOutcome::NotFixed {
            image,
            h_prime_candidate,
        }),
        None => Ok(ImageyOutcome::Contradiction {
            h_image: h_image.clone(),
            reason: format!("no h' in H with {h_image} = h' {h} h'^-1"),
        }),
    }
}

/// Some `x ∈ H` with `x h x⁻¹ = target`, decided exactly.
///
/// The solutions in `F` form a coset `x₀ ⟨ρ⟩` with `ρ` the root of `h`; with
/// `ρ = c ρ₀ c⁻¹`, `x₀ ρ^k ∈ H` iff the coset `H x₀ c ρ₀^k` equals `H c`. The
/// walk by powers of the cyclically reduced `ρ₀` in the Schreier graph either
/// cycles inside the finite core or runs off along a hanging tree for good.
pub(crate) fn conjugator_in(g: &SubgroupGraph, h: &Word, target: &Word) -> Result<Option<Word>> {
    let Some(y) = h.conjugacy_witness(target)? else {
        return Ok(None);
    };
    let x0 = y.inverse();
    let (rho, _) = h.root()?;
    let (rho0, c) = rho.cyclic_reduce();
    let goal = Coset::start(g).read(g, &c);
    for dir in [1i64, -1] {
        let step = if dir > 0 {
            rho0.clone()
        } else {
            rho0.inverse()
        };
        let mut state = Coset::start(g).read(g, &x0.mul(&c));
        let mut seen = std::collections::HashSet::new();
        let mut k = 0i64;
        loop {
            if state == goal {
                let x = x0.mul(&rho.pow(dir * k));
                debug_assert!(g.contains(&x));
                return Ok(Some(x));
            }
            if state.escaped(&step) || (state.tail.is_empty() && !seen.insert(state.vertex)) {
                break;
            }
            state = state.read(g, &step);
            k += 1;
        }
    }
    Ok(None)
}

/// A coset `H g` as a vertex of the finite graph plus a reduced tail that
/// leaves it along a hanging tree.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Coset {
    vertex: usize,
    tail: Vec<Letter>,
}

impl Coset {
    fn start(_: &SubgroupGraph) -> Coset {
        Coset {
            vertex: 0,
            tail: Vec::new(),
        }
    }

    fn read(mut self, g: &SubgroupGraph, w: &Word) -> Coset {
        for &l in w.letters() {
            if let Some(&last) = self.tail.last() {
                if last == l.inverse() {
                    self.tail.pop();
                } else {
                    self.tail.push(l);
                }
            } else {
                match g.target(self.vertex, l) {
                    Some(t) => self.vertex = t,
                    None => self.tail.push(l),
                }
            }
        }
        self
    }

    /// Off the finite graph with a tail that powers of the cyclically reduced
    /// `step` can never cancel.
    fn escaped(&self, step: &Word) -> bool {
        match (self.tail.last(), step.first()) {
            (Some(&t), Some(s)) => t != s.inverse(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RefutationReport {
    pub image_len: usize,
    /// Endomorphisms (within the image-length bound) fixing every generator.
    pub candidates: usize,
    pub automorphisms: usize,
    /// For each automorphism candidate, an element outside the subgroup that it fixes.
    pub extra_fixed: Vec<(String, String)>,
    /// Automorphisms found with no fixed element outside the subgroup among
    /// the words searched.
    pub unrefuted: Vec<String>,
}

impl RefutationReport {
    pub fn refuted(&self) -> bool {
        self.unrefuted.is_empty()
    }
}

/// Exhaustively scans endomorphisms whose generator images have length at
/// most `image_len` and that fix every element of `generators`. Each one that
/// is an automorphism must fix some word of length at most `witness_len`
/// outside the subgroup for the subgroup not to be its fixed subgroup.
pub fn refute_auto_fixed(
    generators: &[Word],
    rank: usize,
    image_len: usize,
    witness_len: usize,
) -> Result<RefutationReport> {
    let h = fold(generators, rank)?;
    let words = words_up_to(rank, image_len);
    // A generator of H can be tested once images of all its letters are chosen.
    let ready: Vec<Vec<&Word>> = (1..=rank)
        .map(|k| {
            generators
                .iter()
                .filter(|g| g.letters().iter().map(|l| l.index()).max() == Some(k))
                .collect()
        })
        .collect();
    let mut images: Vec<Word> = Vec::with_capacity(rank);
    let mut report = RefutationReport {
        image_len,
        candidates: 0,
        automorphisms: 0,
        extra_fixed: Vec::new(),
        unrefuted: Vec::new(),
    };
    let witnesses = words_up_to(rank, witness_len);
    scan(
        rank,
        &words,
        &ready,
        &mut images,
        &h,
        &witnesses,
        &mut report,
    );
    Ok(report)
}

fn scan(
    rank: usize,
    words: &[Word],
    ready: &[Vec<&Word>],
    images: &mut Vec<Word>,
    h: &SubgroupGraph,
    witnesses: &[Word],
    report: &mut RefutationReport,
) {
    let k = images.len();
    if k == rank {
        report.candidates += 1;
        let f = Endomorphism::new(rank, images.clone()).expect("well formed");
        if f.is_automorphism() {
            report.automorphisms += 1;
            match witnesses
                .iter()
                .find(|w| !h.contains(w) && &f.apply(w).expect("rank") == *w)
            {
                Some(w) => report.extra_fixed.push((f.to_string(), w.to_string())),
                None => report.unrefuted.push(f.to_string()),
            }
        }
        return;
    }
    for w in words {
        images.push(w.clone());
        let ok = ready[k].iter().all(|g| {
            let partial: Vec<Word> = (0..rank)
                .map(|i| {
                    images
                        .get(i)
                        .cloned()
                        .unwrap_or_else(|| Word::identity(rank))
                })
                .collect();
            &g.substitute(&partial).expect("rank") == *g
        });
        if ok {
            scan(rank, words, ready, images, h, witnesses, report);
        }
        images.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    #[test]
    fn trivial_extension() {
        let phi = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        let f = extend_trivially(&phi, 3, None).unwrap();
        assert_eq!(f.image(3), &w("C", 3));
        let bad = extend_trivially(&phi, 3, Some(&[w("a", 3)]));
        assert_eq!(bad, Err(Error::NotAutomorphism));
    }

    #[test]
    fn product_of_examples() {
        let p = free_product_auto(
            &Endomorphism::parse(2, &["a", "ab"]).unwrap(),
            &Endomorphism::parse(2, &["ba", "bab"]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            p,
            Endomorphism::parse(4, &["a", "ab", "dc", "dcd"]).unwrap()
        );
    }

    #[test]
    fn stable_letter_examples() {
        let id = Endomorphism::identity(1);
        let f = stable_letter_extend(&id, &w("a", 1), &w("a", 1), 1).unwrap();
        assert_eq!(f, Endomorphism::parse(2, &["a", "aab"]).unwrap());
        let phi = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        for r in -2..=2 {
            let f = stable_letter_extend(&phi, &w("a", 2), &w("a", 2), r).unwrap();
            assert_eq!(f.image(3), &w("a", 3).pow(r + 1).mul(&w("c", 3)));
        }
        assert!(stable_letter_extend(&phi, &w("aa", 2), &w("a", 2), 0).is_err());
        assert!(stable_letter_extend(&phi, &w("a", 2), &w("1", 2), 0).is_err());
        assert!(stable_letter_extend(&phi, &w("b", 2), &w("a", 2), 0).is_err());
    }

    #[test]
    fn good_r_for_identity() {
        let id = Endomorphism::identity(1);
        let rs = find_good_r(&id, &w("a", 1), &w("a", 1), -3..=3, 6).unwrap();
        let bad: Vec<i64> = rs.iter().filter(|g| !g.good).map(|g| g.r).collect();
        assert_eq!(bad, vec![-1]);
        assert!(rs.iter().find(|g| g.r == -1).unwrap().degenerate);
    }

    #[test]
    fn conjugator_in_subgroup() {
        let g = fold(&[w("a", 2), w("b", 2)], 3)
            .unwrap_or_else(|_| fold(&[w("a", 3), w("b", 3)], 3).unwrap());
        let h = w("b", 3);
        assert!(conjugator_in(&g, &h, &w("aaab", 3)).unwrap().is_none());
        let x = conjugator_in(&g, &h, &w("abA", 3)).unwrap().unwrap();
        assert_eq!(x.mul(&h).mul(&x.inverse()), w("abA", 3));
        // Only a^k c^j-type conjugators exist here; none lies in <a c a>.
        let g = fold(&[w("aca", 3)], 3).unwrap();
        assert!(conjugator_in(&g, &w("aca", 3), &w("aca", 3))
            .unwrap()
            .is_some());
        let g = fold(&[w("bb", 3), w("Cac", 3)], 3).unwrap();
        assert!(conjugator_in(&g, &w("a", 3), &w("bbaBB", 3))
            .unwrap()
            .is_some());
        assert!(conjugator_in(&g, &w("a", 3), &w("baB", 3))
            .unwrap()
            .is_none());
    }

    #[test]
    fn imagey_examples() {
        let h = fold(&[w("a", 3), w("b", 3)], 3).unwrap();
        let id = Endomorphism::identity(3);
        assert_eq!(
            imagey_solve(&id, &h, &w("c", 3), &w("b", 3)).unwrap(),
            ImageyOutcome::Solved {
                h_prime: Word::identity(3)
            }
        );
        for r in [-2i64, -1, 1, 3] {
            let f = Endomorphism::new(
                3,
                vec![w("a", 3), w("a", 3).pow(r).mul(&w("b", 3)), w("c", 3)],
            )
            .unwrap();
            assert!(matches!(
                imagey_solve(&f, &h, &w("c", 3), &w("b", 3)).unwrap(),
                ImageyOutcome::Contradiction { .. }
            ));
        }
        let f = Endomorphism::parse(3, &["a", "b", "ac"]).unwrap();
        assert!(matches!(
            imagey_solve(&f, &h, &w("c", 3), &w("b", 3)).unwrap(),
            ImageyOutcome::NotFixed { .. }
        ));
        let bad = fold(&[w("a", 3)], 3).unwrap();
        assert!(imagey_solve(&id, &bad, &w("c", 3), &w("a", 3)).is_err());
    }
}
