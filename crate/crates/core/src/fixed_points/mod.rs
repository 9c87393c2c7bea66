//! Bounded computation of fixed subgroups and eigengroups.
//!
//! For a prefix `p` write `d(p) = (p)f⁻¹ · p`. A word `p · q⁻¹` is fixed exactly
//! when `d(p) = d(q)`, and for a fixed word the displacements of all its
//! prefixes are the displacements of the prefixes of `p` and of `q`. So the
//! search enumerates reduced words up to half the length bound, pruning any
//! prefix whose displacement is longer than the cap, and matches equal
//! displacements. This finds exactly the fixed words a depth-first prefix
//! search with the same cap would find.

mod eigen;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::Serialize;

pub use eigen::{
    bh_report, eigengroup_scan, isogredience_partition, BhReport, EigengroupRecord,
    IsogredienceClass, Partition, ReidemeisterWitness,
};

use crate::morphisms::Endomorphism;
use crate::stallings::{Folder, SubgroupGraph};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSearchBudget {
    pub max_len: usize,
    pub displacement_cap: usize,
    pub eigenvalue_len: usize,
}

impl FixedSearchBudget {
    /// Default cap `2 · (max image length) · max_len`.
    pub fn for_map(f: &Endomorphism, max_len: usize) -> FixedSearchBudget {
        FixedSearchBudget {
            max_len,
            displacement_cap: Self::default_cap(f, max_len),
            eigenvalue_len: 2,
        }
    }

    pub fn default_cap(f: &Endomorphism, max_len: usize) -> usize {
        (2 * f.max_image_len() * max_len).max(1)
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.displacement_cap = cap;
        self
    }

    pub fn with_eigenvalue_len(mut self, len: usize) -> Self {
        self.eigenvalue_len = len;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// The subgroup generated did not grow over the last two length increments.
    BoundedComplete,
    Open,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub prefixes: usize,
    pub pruned: usize,
    pub classes: usize,
    pub generators_added: usize,
}

#[derive(Clone, Debug)]
pub struct FixedSubgroup {
    pub graph: SubgroupGraph,
    pub completeness: Completeness,
    pub budget: FixedSearchBudget,
    /// Rank of the subgroup generated by fixed words of length at most `L`, for `L = 0..=max_len`.
    pub history: Vec<usize>,
    pub stats: SearchStats,
    pub warnings: Vec<String>,
}

struct Prefix {
    hash: u64,
    start: usize,
    len: u8,
}

struct HalfTable {
    rank: usize,
    letters: Vec<u8>,
    entries: Vec<Prefix>,
    pruned: usize,
}

impl HalfTable {
    fn word(&self, e: &Prefix) -> Word {
        let slots = &self.letters[e.start..e.start + e.len as usize];
        Word::from_reduced(
            self.rank,
            slots
                .iter()
                .map(|&s| Letter::from_slot(s as usize))
                .collect(),
        )
    }

    fn last(&self, e: &Prefix) -> Option<u8> {
        (e.len > 0).then(|| self.letters[e.start + e.len as usize - 1])
    }
}

fn hash_word(w: &Word) -> u64 {
    let mut h = DefaultHasher::new();
    w.letters().hash(&mut h);
    h.finish()
}

/// Enumerates reduced words of length at most `half` whose prefixes all have
/// displacement at most `cap`, sorted by displacement hash.
fn half_table(f: &Endomorphism, half: usize, cap: usize) -> HalfTable {
    let rank = f.rank();
    let inv_images: Vec<Word> = (0..2 * rank)
        .map(|s| {
            let l = Letter::from_slot(s);
            let img = f.image(l.index());
            if l.is_inverse() {
                img.clone()
            } else {
                img.inverse()
            }
        })
        .collect();
    let mut table = HalfTable {
        rank,
        letters: Vec::new(),
        entries: Vec::new(),
        pruned: 0,
    };
    let mut path: Vec<u8> = Vec::with_capacity(half);
    let root = Word::identity(rank);
    dfs(&inv_images, half, cap, &mut path, &root, &mut table);
    table.entries.sort_by_key(|e| e.hash);
    table
}

fn dfs(
    inv_images: &[Word],
    half: usize,
    cap: usize,
    path: &mut Vec<u8>,
    d: &Word,
    table: &mut HalfTable,
) {
    let start = table.letters.len();
    table.letters.extend_from_slice(path);
    table.entries.push(Prefix {
        hash: hash_word(d),
        start,
        len: path.len() as u8,
    });
    if path.len() == half {
        return;
    }
    for s in 0..inv_images.len() {
        if path.last().is_some_and(|&p| p as usize == s ^ 1) {
            continue;
        }
        // d(px) = (x)f⁻¹ · d(p) · x
        let mut next = inv_images[s].mul(d);
        next.push(Letter::from_slot(s));
        if next.len() > cap {
            table.pruned += 1;
            continue;
        }
        path.push(s as u8);
        dfs(inv_images, half, cap, path, &next, table);
        path.pop();
    }
}

fn displacement(f: &Endomorphism, p: &Word) -> Word {
    f.apply(p).expect("same rank").inverse().mul(p)
}

/// Groups the half table into classes of equal displacement, each sorted shortlex.
fn classes(f: &Endomorphism, table: &HalfTable) -> Vec<Vec<Word>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < table.entries.len() {
        let mut j = i + 1;
        while j < table.entries.len() && table.entries[j].hash == table.entries[i].hash {
            j += 1;
        }
        if j - i >= 2 {
            let mut members: Vec<(Word, Word)> = table.entries[i..j]
                .iter()
                .map(|e| {
                    let w = table.word(e);
                    (displacement(f, &w), w)
                })
                .collect();
            members.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            let mut k = 0;
            while k < members.len() {
                let mut m = k + 1;
                while m < members.len() && members[m].0 == members[k].0 {
                    m += 1;
                }
                if m - k >= 2 {
                    out.push(members[k..m].iter().map(|(_, w)| w.clone()).collect());
                }
                k = m;
            }
        }
        i = j;
    }
    out
}

/// All reduced words `w` with `|w| ≤ max_len` and `(w)f = w` reachable under the
/// displacement cap, in shortlex order. Includes the identity.
pub fn enumerate_fixed(f: &Endomorphism, budget: &FixedSearchBudget) -> Vec<Word> {
    let half = budget.max_len.div_ceil(2);
    let table = half_table(f, half, budget.displacement_cap);
    let mut out = Vec::new();
    let mut i = 0;
    while i < table.entries.len() {
        let mut j = i + 1;
        while j < table.entries.len() && table.entries[j].hash == table.entries[i].hash {
            j += 1;
        }
        let group = &table.entries[i..j];
        for p in group {
            for q in group {
                let (lp, lq) = (p.len as usize, q.len as usize);
                if lp < lq || lp > lq + 1 || lp + lq > budget.max_len {
                    continue;
                }
                if lq > 0 && table.last(p) == table.last(q) {
                    continue;
                }
                let w = table.word(p).mul(&table.word(q).inverse());
                if f.apply(&w).expect("same rank") == w {
                    out.push(w);
                }
            }
        }
        i = j;
    }
    out.sort_by(Word::shortlex_cmp);
    out.dedup();
    out
}

/// The subgroup generated by the fixed words found within the budget, with a
/// stabilization verdict. Never a proof of completeness.
pub fn fixed_subgroup(f: &Endomorphism, budget: &FixedSearchBudget) -> FixedSubgroup {
    let rank = f.rank();
    let max_len = budget.max_len;
    let half = max_len.div_ceil(2);
    let mut warnings = Vec::new();
    if budget.displacement_cap < f.max_image_len() {
        warnings.push(format!(
            "displacement cap {} is below the longest image length {}",
            budget.displacement_cap,
            f.max_image_len()
        ));
    }
    let table = half_table(f, half, budget.displacement_cap);
    let classes = classes(f, &table);

    // Generator p·r⁻¹ (r the shortest member of its class) has length at
    // most |p| + |r|; it is needed from that length bound on.
    let mut gens: Vec<(usize, Word)> = Vec::new();
    for class in &classes {
        let r = &class[0];
        let ri = r.inverse();
        for p in &class[1..] {
            let level = p.len() + r.len();
            if level <= max_len {
                gens.push((level, p.mul(&ri)));
            }
        }
    }
    gens.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.shortlex_cmp(&b.1)));

    let mut folder = Folder::new(rank);
    let mut snapshots: Vec<SubgroupGraph> = Vec::with_capacity(max_len + 1);
    let mut added = 0;
    let mut g = 0;
    for level in 0..=max_len {
        let mut changed = false;
        while g < gens.len() && gens[g].0 == level {
            let w = &gens[g].1;
            if !folder.contains(w) {
                folder.add_word(w, 0);
                added += 1;
                changed = true;
            }
            g += 1;
        }
        if changed || snapshots.is_empty() {
            snapshots.push(SubgroupGraph::from_raw(folder.finish().raw, 0));
        } else {
            let last = snapshots.last().expect("nonempty").clone();
            snapshots.push(last);
        }
    }
    let graph = snapshots.last().expect("nonempty").clone();
    let completeness = if max_len >= 2 && snapshots[max_len - 2] == graph {
        Completeness::BoundedComplete
    } else {
        Completeness::Open
    };
    if f.is_automorphism() && graph.rank() > rank {
        warnings.push(format!(
            "BUG: fixed subgroup rank {} exceeds ambient rank {rank}",
            graph.rank()
        ));
    }
    FixedSubgroup {
        history: snapshots.iter().map(SubgroupGraph::rank).collect(),
        graph,
        completeness,
        budget: *budget,
        stats: SearchStats {
            prefixes: table.entries.len(),
            pruned: table.pruned,
            classes: classes.len(),
            generators_added: added,
        },
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stallings::fold;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    fn brute(f: &Endomorphism, max_len: usize) -> Vec<Word> {
        crate::word::words_up_to(f.rank(), max_len)
            .into_iter()
            .filter(|x| &f.apply(x).unwrap() == x)
            .collect()
    }

    #[test]
    fn inversion_fixes_only_identity() {
        let f = Endomorphism::inversion(3);
        let b = FixedSearchBudget::for_map(&f, 6);
        assert_eq!(enumerate_fixed(&f, &b), vec![Word::identity(3)]);
        assert!(fixed_subgroup(&f, &b).graph.is_trivial());
    }

    #[test]
    fn inner_fixes_powers() {
        let f = Endomorphism::inner(&w("a", 2));
        let b = FixedSearchBudget::for_map(&f, 6);
        let expected: Vec<Word> = (-6..=6).map(|k| w("a", 2).pow(k)).collect();
        let mut expected = expected;
        expected.sort_by(Word::shortlex_cmp);
        assert_eq!(enumerate_fixed(&f, &b), expected);
    }

    #[test]
    fn matches_brute_force() {
        for images in [["a", "ab"], ["ba", "b"], ["ab", "Ab"], ["BAbab", "Bab"]] {
            let f = Endomorphism::parse(2, &images).unwrap();
            let b = FixedSearchBudget::for_map(&f, 7);
            assert_eq!(enumerate_fixed(&f, &b), brute(&f, 7), "{f}");
        }
    }

    #[test]
    fn identity_gives_everything() {
        let f = Endomorphism::identity(2);
        let r = fixed_subgroup(&f, &FixedSearchBudget::for_map(&f, 4));
        assert!(r.graph.is_full());
        assert_eq!(r.completeness, Completeness::BoundedComplete);
    }

    #[test]
    fn small_example_fix() {
        let f = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        let r = fixed_subgroup(&f, &FixedSearchBudget::for_map(&f, 8));
        assert_eq!(r.graph, fold(&[w("a", 2), w("Bab", 2)], 2).unwrap());
        assert_eq!(r.completeness, Completeness::BoundedComplete);
        assert!(r.warnings.is_empty());
    }
}
