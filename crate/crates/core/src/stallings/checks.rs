//! Bounded checks of purity, inertia and coset displacement on core graphs.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{fold, pullback, SubgroupGraph, NONE};
use crate::error::{Error, Result};
use crate::word::{visit_words_of_length, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Purity {
    /// `witness` is not a proper power but `witness^exponent ∈ H` with `witness ∉ H`.
    Impure { witness: Word, exponent: usize },
    /// No such witness among words up to this length.
    PureUpTo(usize),
}

/// Searches, in shortlex order, for a word `x` of length at most `bound`
/// that is not a proper power, does not lie in `H`, but has a power in `H`.
pub fn purity_check(h: &SubgroupGraph, bound: usize) -> Purity {
    let rank = h.ambient_rank();
    for len in 1..=bound {
        let mut found = None;
        visit_words_of_length(rank, len, &mut |letters: &[Letter]| {
            if let Some(m) = power_exponent(h, letters) {
                if m >= 2 {
                    let w = Word::from_reduced(rank, letters.to_vec());
                    if !w.is_proper_power() {
                        found = Some(Purity::Impure {
                            witness: w,
                            exponent: m,
                        });
                        return false;
                    }
                }
            }
            true
        });
        if let Some(p) = found {
            return p;
        }
    }
    Purity::PureUpTo(bound)
}

/// Least `m ≥ 1` with `x^m ∈ H`, if any.
///
/// Writing `x = c z c⁻¹` with `z` cyclically reduced, some power of `x` lies in
/// `H` exactly when `c` is readable from the basepoint and the closed walk
/// labelled by powers of `z` from there returns to its start.
fn power_exponent(h: &SubgroupGraph, letters: &[Letter]) -> Option<usize> {
    let n = letters.len();
    let mut k = 0;
    while 2 * k + 1 < n && letters[k] == letters[n - 1 - k].inverse() {
        k += 1;
    }
    let mut u = 0usize;
    for &l in &letters[..k] {
        u = h.target(u, l)?;
    }
    let z = &letters[k..n - k];
    let mut v = u;
    for m in 1..=h.vertex_count() {
        for &l in z {
            v = h.target(v, l)?;
        }
        if v == u {
            return Some(m);
        }
    }
    None
}

/// A uniformly chosen reduced word of exactly `len` letters.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_slot(rng.gen_range(0..2 * rank));
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_reduced(rank, letters)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaViolation {
    pub k_generators: Vec<String>,
    pub k_rank: usize,
    pub intersection_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InertiaReport {
    pub seed: u64,
    pub trials: usize,
    pub generator_length_bound: usize,
    pub violations: Vec<InertiaViolation>,
}

impl InertiaReport {
    pub fn inert(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `r(H ∩ K) ≤ r(K)` for one subgroup `K`.
pub fn inertia_against(
    h: &SubgroupGraph,
    k_generators: &[Word],
) -> Result<Option<InertiaViolation>> {
    let k = fold(k_generators, h.ambient_rank())?;
    let meet = pullback(h, &k)?.intersection;
    Ok((meet.rank() > k.rank()).then(|| InertiaViolation {
        k_generators: k_generators.iter().map(|w| w.to_string()).collect(),
        k_rank: k.rank(),
        intersection_rank: meet.rank(),
    }))
}

/// Tests inertia of `H` against `trials` random subgroups with one to three
/// generators of length at most `generator_length_bound`.
pub fn inertia_sample(
    h: &SubgroupGraph,
    trials: usize,
    generator_length_bound: usize,
    seed: u64,
) -> InertiaReport {
    let rank = h.ambient_rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    if rank > 0 && generator_length_bound > 0 {
        for _ in 0..trials {
            let count = rng.gen_range(1..=3);
            let gens: Vec<Word> = (0..count)
                .map(|_| {
                    let len = rng.gen_range(1..=generator_length_bound);
                    random_word(&mut rng, rank, len)
                })
                .collect();
            if let Ok(Some(v)) = inertia_against(h, &gens) {
                violations.push(v);
            }
        }
    }
    InertiaReport {
        seed,
        trials,
        generator_length_bound,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplacementEntry {
    pub conjugator: String,
    pub distance: usize,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplacementReport {
    pub element: String,
    pub entries: Vec<DisplacementEntry>,
}

impl DisplacementReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.within_bound)
    }
}

/// For `1 ≠ h ∈ K` and each `u` with `h^u ∈ K`, measures the distance from the
/// coset `K u⁻¹` to the core of the Schreier graph of `K` and compares it with `|h| / 2`.
pub fn coset_displacement_check(
    k: &SubgroupGraph,
    h: &Word,
    conjugators: &[Word],
) -> Result<DisplacementReport> {
    if h.is_identity() {
        return Err(Error::Precondition("the element must be nontrivial".into()));
    }
    if !k.member(h)? {
        return Err(Error::Precondition(format!("{h} is not in the subgroup")));
    }
    let dist = core_distances(k);
    let mut entries = Vec::with_capacity(conjugators.len());
    for u in conjugators {
        if !k.member(&h.conjugate(u)?)? {
            return Err(Error::Precondition(format!(
                "h^u is not in the subgroup for u = {u}"
            )));
        }
        let distance = coset_core_distance(k, &dist, &u.inverse());
        entries.push(DisplacementEntry {
            conjugator: u.to_string(),
            distance,
            within_bound: 2 * distance <= h.len(),
        });
    }
    Ok(DisplacementReport {
        element: h.to_string(),
        entries,
    })
}

/// Distance from each vertex of the based graph to its basepoint-free core.
fn core_distances(k: &SubgroupGraph) -> Vec<usize> {
    let mut raw = k.to_raw();
    raw.prune(None);
    let mut dist = vec![usize::MAX; k.vertex_count()];
    let mut queue = VecDeque::new();
    for (v, &alive) in raw.alive.iter().enumerate() {
        if alive {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    let n = 2 * k.ambient_rank();
    while let Some(v) = queue.pop_front() {
        for s in 0..n {
            let t = k.table()[v * n + s];
            if t != NONE && dist[t as usize] == usize::MAX {
                dist[t as usize] = dist[v] + 1;
                queue.push_back(t as usize);
            }
        }
    }
    dist
}

/// The coset `K g` lies on the hanging tree reached after the readable prefix
/// of `g`; its distance to the core is the unread length plus the distance of
/// the last readable vertex.
fn coset_core_distance(k: &SubgroupGraph, dist: &[usize], g: &Word) -> usize {
    let mut v = 0usize;
    for (i, &l) in g.letters().iter().enumerate() {
        match k.target(v, l) {
            Some(t) => v = t,
            None => return dist[v].saturating_add(g.len() - i),
        }
    }
    dist[v]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    fn g(list: &[&str], r: usize) -> SubgroupGraph {
        let ws: Vec<Word> = list.iter().map(|s| w(s, r)).collect();
        fold(&ws, r).unwrap()
    }

    #[test]
    fn square_subgroup_is_impure() {
        assert_eq!(
            purity_check(&g(&["aa"], 2), 4),
            Purity::Impure {
                witness: w("a", 2),
                exponent: 2
            }
        );
    }

    #[test]
    fn free_factor_is_pure() {
        assert_eq!(purity_check(&g(&["a", "Bcb"], 3), 4), Purity::PureUpTo(4));
    }

    #[test]
    fn conjugated_square_found() {
        match purity_check(&g(&["Baab"], 2), 4) {
            Purity::Impure { witness, exponent } => {
                assert_eq!(exponent, 2);
                assert_eq!(witness, w("Bab", 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inertia_of_cyclic_subgroup() {
        let h = g(&["ab"], 2);
        assert!(inertia_sample(&h, 50, 4, 7).inert());
    }

    #[test]
    fn displacement_needs_membership() {
        let k = g(&["a"], 2);
        assert!(coset_displacement_check(&k, &w("b", 2), &[]).is_err());
        assert!(coset_displacement_check(&k, &w("a", 2), &[w("b", 2)]).is_err());
        let r = coset_displacement_check(&k, &w("aa", 2), &[w("a", 2), w("A", 2)]).unwrap();
        assert!(r.holds());
        assert!(r.entries.iter().all(|e| e.distance == 0));
    }

    #[test]
    fn displacement_counts_hair() {
        // K = <Bab>: the basepoint hangs one edge away from the loop.
        let k = g(&["Bab"], 2);
        let r = coset_displacement_check(&k, &w("Bab", 2), &[w("1", 2), w("Bab", 2)]).unwrap();
        assert_eq!(r.entries[0].distance, 1);
        assert_eq!(r.entries[1].distance, 1);
        assert!(r.holds());
    }
}
