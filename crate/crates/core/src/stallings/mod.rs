//! Folded core graphs of finitely generated subgroups.
//!
//! A [`SubgroupGraph`] is always stored in canonical form: vertices are
//! numbered breadth-first from the basepoint (vertex 0), visiting edge slots
//! in the order `a, A, b, B, ...`. Two graphs present the same subgroup
//! exactly when their tables are equal.

mod checks;
mod fold;
mod pullback;

use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

pub use checks::{
    coset_displacement_check, inertia_against, inertia_sample, purity_check, random_word,
    DisplacementEntry, DisplacementReport, InertiaReport, InertiaViolation, Purity,
};
pub(crate) use fold::{Folder, RawGraph, NONE};
pub use pullback::{pullback, Pullback, PullbackComponent};

use crate::error::{ensure_rank, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    rank: usize,
    table: Vec<u32>,
    parent: Vec<(u32, u32)>,
    basis_slot: Vec<i32>,
    basis_edges: Vec<(u32, u32)>,
    tree_words: Vec<Word>,
}

impl PartialEq for SubgroupGraph {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.table == other.table
    }
}

impl Eq for SubgroupGraph {}

impl Hash for SubgroupGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.table.hash(state);
    }
}

/// Folds the subgroup generated by `generators` in the free group of rank `rank`.
pub fn fold(generators: &[Word], rank: usize) -> Result<SubgroupGraph> {
    for g in generators {
        ensure_rank(rank, g.rank())?;
    }
    let mut folder = Folder::new(rank);
    for g in generators {
        folder.add_word(g, 0);
    }
    Ok(SubgroupGraph::from_raw(folder.finish().raw, 0))
}

/// A fold that remembers how every edge arose from the input generators, so
/// that members can be written as products of the inputs.
#[derive(Clone, Debug)]
pub struct TracedFold {
    graph: SubgroupGraph,
    prov: Vec<Option<Word>>,
    gens: usize,
}

pub fn fold_traced(generators: &[Word], rank: usize) -> Result<TracedFold> {
    for g in generators {
        ensure_rank(rank, g.rank())?;
    }
    let mut folder = Folder::tracked(rank, generators.len());
    for (i, g) in generators.iter().enumerate() {
        folder.add_word(g, i);
    }
    let res = folder.finish();
    let mut raw = res.raw;
    raw.prune(Some(0));
    let (_, order, _) = raw.encode_from(0);
    let prov_in = res.prov.expect("tracked fold");
    let n = raw.slots();
    let mut prov = Vec::with_capacity(order.len() * n);
    for &v in &order {
        for s in 0..n {
            prov.push(if raw.target(v, s) == NONE {
                None
            } else {
                prov_in[v * n + s].clone()
            });
        }
    }
    let graph = SubgroupGraph::from_raw(raw, 0);
    Ok(TracedFold {
        graph,
        prov,
        gens: res.gens,
    })
}

impl TracedFold {
    pub fn graph(&self) -> &SubgroupGraph {
        &self.graph
    }

    /// Writes a member as a word in the input generators (generator `i`
    /// becomes letter `i + 1` of a free group of rank `generators.len()`).
    pub fn spell(&self, w: &Word) -> Option<Word> {
        if w.rank() != self.graph.rank {
            return None;
        }
        let n = 2 * self.graph.rank;
        let mut v = 0usize;
        let mut out = Word::identity(self.gens);
        for l in w.letters() {
            let s = l.slot();
            let t = self.graph.table[v * n + s];
            if t == NONE {
                return None;
            }
            out = out.mul(self.prov[v * n + s].as_ref().expect("edge provenance"));
            v = t as usize;
        }
        (v == 0).then_some(out)
    }
}

impl SubgroupGraph {
    pub(crate) fn from_raw(mut raw: RawGraph, base: usize) -> SubgroupGraph {
        raw.prune(Some(base));
        let (table, _, _) = raw.encode_from(base);
        SubgroupGraph::from_table(raw.rank, table)
    }

    pub(crate) fn from_table(rank: usize, table: Vec<u32>) -> SubgroupGraph {
        let n = 2 * rank;
        let vertices = if n == 0 { 1 } else { table.len() / n };
        let mut parent = vec![(NONE, NONE); vertices];
        let mut seen = vec![false; vertices];
        let mut tree_words = vec![Word::identity(rank); vertices];
        seen[0] = true;
        for v in 0..vertices {
            for s in 0..n {
                let t = table[v * n + s];
                if t != NONE && !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = (v as u32, s as u32);
                    let mut tw = tree_words[v].clone();
                    tw.push(Letter::from_slot(s));
                    tree_words[t as usize] = tw;
                }
            }
        }
        let mut basis_slot = vec![0i32; table.len()];
        let mut basis_edges = Vec::new();
        for v in 0..vertices {
            for s in (0..n).step_by(2) {
                let t = table[v * n + s];
                if t == NONE {
                    continue;
                }
                let tu = t as usize;
                let tree = parent[tu] == (v as u32, s as u32) || parent[v] == (t, (s ^ 1) as u32);
                if tree && tu != v {
                    continue;
                }
                basis_edges.push((v as u32, s as u32));
                let k = basis_edges.len() as i32;
                basis_slot[v * n + s] = k;
                basis_slot[tu * n + (s ^ 1)] = -k;
            }
        }
        SubgroupGraph {
            rank,
            table,
            parent,
            basis_slot,
            basis_edges,
            tree_words,
        }
    }

    pub fn trivial(rank: usize) -> SubgroupGraph {
        SubgroupGraph::from_table(rank, vec![NONE; 2 * rank])
    }

    /// The whole free group: one vertex with a loop for each generator.
    pub fn full(rank: usize) -> SubgroupGraph {
        let table = (0..2 * rank).map(|_| 0u32).collect();
        SubgroupGraph::from_table(rank, table)
    }

    pub(crate) fn to_raw(&self) -> RawGraph {
        RawGraph {
            rank: self.rank,
            adj: self.table.clone(),
            alive: vec![true; self.vertex_count()],
        }
    }

    /// Rank of the ambient free group.
    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.table.iter().filter(|&&t| t != NONE).count() / 2
    }

    /// Rank of the subgroup: `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.basis_edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis_edges.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.vertex_count() == 1 && self.table.iter().all(|&t| t == 0)
    }

    /// When the graph is a single vertex, the generators carrying loops.
    pub fn coordinate_generators(&self) -> Option<Vec<usize>> {
        if self.vertex_count() != 1 {
            return None;
        }
        Some(
            (0..self.rank)
                .filter(|&i| self.table[2 * i] == 0)
                .map(|i| i + 1)
                .collect(),
        )
    }

    pub(crate) fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        let t = self.table[v * 2 * self.rank + l.slot()];
        (t != NONE).then_some(t as usize)
    }

    pub fn read_from(&self, start: usize, w: &Word) -> Option<usize> {
        let n = 2 * self.rank;
        let mut v = start;
        for l in w.letters() {
            let t = self.table[v * n + l.slot()];
            if t == NONE {
                return None;
            }
            v = t as usize;
        }
        Some(v)
    }

    pub fn member(&self, w: &Word) -> Result<bool> {
        ensure_rank(self.rank, w.rank())?;
        Ok(self.contains(w))
    }

    /// Unchecked membership; words of a different rank are never members.
    pub fn contains(&self, w: &Word) -> bool {
        w.rank() == self.rank && self.read_from(0, w) == Some(0)
    }

    /// Writes a member in the coordinates of [`Self::basis`]; `None` for non-members.
    pub fn spell(&self, w: &Word) -> Option<Word> {
        if w.rank() != self.rank {
            return None;
        }
        let n = 2 * self.rank;
        let mut v = 0usize;
        let mut raw = Vec::new();
        for l in w.letters() {
            let i = v * n + l.slot();
            let t = self.table[i];
            if t == NONE {
                return None;
            }
            let b = self.basis_slot[i];
            if b != 0 {
                raw.push(Letter::from_signed(b).unwrap());
            }
            v = t as usize;
        }
        if v != 0 {
            return None;
        }
        Some(Word::reduce(raw, self.rank()).expect("basis letters in range"))
    }

    /// Inverse of [`Self::spell`].
    pub fn unspell(&self, coords: &Word) -> Result<Word> {
        ensure_rank(self.rank(), coords.rank())?;
        if coords.is_identity() {
            return Ok(Word::identity(self.ambient_rank()));
        }
        coords.substitute(&self.basis())
    }

    /// Path label from the basepoint to `v` along the breadth-first tree.
    pub fn tree_word(&self, v: usize) -> &Word {
        &self.tree_words[v]
    }

    /// Free basis read off the breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        self.basis_edges
            .iter()
            .map(|&(u, s)| {
                let t = self.table[u as usize * 2 * self.rank + s as usize] as usize;
                let mut w = self.tree_words[u as usize].clone();
                w.push(Letter::from_slot(s as usize));
                w.mul(&self.tree_words[t].inverse())
            })
            .collect()
    }

    pub fn same_subgroup(&self, other: &SubgroupGraph) -> bool {
        self == other
    }

    /// Graph of `H^y = y⁻¹ H y`.
    pub fn conjugate(&self, y: &Word) -> Result<SubgroupGraph> {
        ensure_rank(self.rank, y.rank())?;
        let gens: Vec<Word> = self
            .basis()
            .iter()
            .map(|b| y.inverse().mul(b).mul(y))
            .collect();
        fold(&gens, self.rank)
    }

    /// Whether `self ≤ other` as subgroups.
    pub fn is_subgroup_of(&self, other: &SubgroupGraph) -> bool {
        self.rank == other.rank && self.basis().iter().all(|b| other.contains(b))
    }

    /// Canonical representative of the conjugacy class: the basepoint-free
    /// core, anchored at the vertex with the least breadth-first encoding.
    /// Returns `(rep, c)` with `rep` presenting `H^c`.
    pub fn class_rep(&self) -> (SubgroupGraph, Word) {
        let mut raw = self.to_raw();
        raw.prune(None);
        let mut best: Option<(Vec<u32>, usize)> = None;
        for v in 0..raw.len() {
            if !raw.alive[v] {
                continue;
            }
            let (table, _, _) = raw.encode_from(v);
            let better = match &best {
                None => true,
                Some((b, _)) => (table.len(), &table) < (b.len(), b),
            };
            if better {
                best = Some((table, v));
            }
        }
        match best {
            None => (SubgroupGraph::trivial(self.rank), Word::identity(self.rank)),
            Some((table, v)) => (
                SubgroupGraph::from_table(self.rank, table),
                self.tree_words[v].clone(),
            ),
        }
    }

    /// A word `c` with `self^c = other`, when the subgroups are conjugate.
    pub fn conjugate_to(&self, other: &SubgroupGraph) -> Result<Option<Word>> {
        ensure_rank(self.rank, other.rank)?;
        let (r1, c1) = self.class_rep();
        let (r2, c2) = other.class_rep();
        if r1 != r2 {
            return Ok(None);
        }
        let c = c1.mul(&c2.inverse());
        debug_assert!(self.conjugate(&c).map(|g| &g == other).unwrap_or(false));
        Ok(Some(c))
    }

    /// Graphviz rendering; the basepoint is drawn as a double circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph subgroup {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count() {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  v{v} [shape={shape}];");
        }
        let n = 2 * self.rank;
        for v in 0..self.vertex_count() {
            for s in (0..n).step_by(2) {
                let t = self.table[v * n + s];
                if t != NONE {
                    let _ = writeln!(out, "  v{v} -> v{t} [label=\"{}\"];", Letter::from_slot(s));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Checks the structural invariants of a folded core graph.
    pub fn check_invariants(&self) -> bool {
        let n = 2 * self.rank;
        let v_count = self.vertex_count();
        for v in 0..v_count {
            let mut degree = 0;
            for s in 0..n {
                let t = self.table[v * n + s];
                if t == NONE {
                    continue;
                }
                degree += 1;
                if t as usize >= v_count || self.table[t as usize * n + (s ^ 1)] != v as u32 {
                    return false;
                }
            }
            if v != 0 && degree <= 1 {
                return false;
            }
        }
        let edges = self.edge_count();
        self.rank() + v_count == edges + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    fn ws(list: &[&str], r: usize) -> Vec<Word> {
        list.iter().map(|s| w(s, r)).collect()
    }

    #[test]
    fn fold_examples() {
        let g = fold(&[], 2).unwrap();
        assert_eq!((g.vertex_count(), g.rank()), (1, 0));
        let g = fold(&ws(&["a", "b"], 2), 2).unwrap();
        assert!(g.is_full());
        assert_eq!(g.rank(), 2);
        let g = fold(&ws(&["a", "Bab", "Cbc"], 3), 3).unwrap();
        assert_eq!((g.rank(), g.vertex_count()), (3, 3));
        assert!(g.check_invariants());
    }

    #[test]
    fn example_fix_rank() {
        let g = fold(&ws(&["a", "Bab", "CDcd", "EBabCDcde"], 6), 6).unwrap();
        assert_eq!(g.rank(), 4);
        assert!(g.check_invariants());
    }

    #[test]
    fn membership_examples() {
        let g = fold(&ws(&["aa"], 1), 1).unwrap();
        assert!(g.contains(&Word::identity(1)));
        assert!(!g.contains(&w("a", 1)));
        assert!(g.contains(&w("aa", 1)));
        let fix = fold(&ws(&["ABab", "Caabbc"], 3), 3).unwrap();
        assert!(!fix.contains(&w("ab", 3)));
        assert!(fix.member(&w("a", 2)).is_err());
    }

    #[test]
    fn spelling_round_trip() {
        let g = fold(&ws(&["a", "Bab", "Cbc"], 3), 3).unwrap();
        let x = w("CbcaBab", 3);
        let s = g.spell(&x).unwrap();
        assert_eq!(g.unspell(&s).unwrap(), x);
        assert_eq!(g.spell(&w("b", 3)), None);
    }

    #[test]
    fn basis_examples() {
        let t = SubgroupGraph::trivial(3);
        assert!(t.basis().is_empty());
        let r = SubgroupGraph::full(3);
        assert_eq!(r.basis(), ws(&["a", "b", "c"], 3));
        let g = fold(&ws(&["aab", "bA"], 2), 2).unwrap();
        assert_eq!(fold(&g.basis(), 2).unwrap(), g);
    }

    #[test]
    fn traced_spelling_expresses_members_in_inputs() {
        let gens = ws(&["ab", "b"], 2);
        let tf = fold_traced(&gens, 2).unwrap();
        assert!(tf.graph().is_full());
        let a = tf.spell(&w("a", 2)).unwrap();
        assert_eq!(a.substitute(&gens).unwrap(), w("a", 2));
        let gens = ws(&["BAba", "abba", "c", "Cac"], 3);
        let tf = fold_traced(&gens, 3).unwrap();
        for x in ["a", "bb", "c", "BAbcaBBc", "ABab"] {
            assert!(tf.graph().contains(&w(x, 3)));
            let sp = tf.spell(&w(x, 3)).unwrap();
            assert_eq!(sp.substitute(&gens).unwrap(), w(x, 3));
        }
    }

    #[test]
    fn conjugacy_examples() {
        let a = fold(&ws(&["a"], 2), 2).unwrap();
        assert_eq!(a.conjugate_to(&a).unwrap(), Some(Word::identity(2)));
        let bab = fold(&ws(&["Bab"], 2), 2).unwrap();
        let c = a.conjugate_to(&bab).unwrap().unwrap();
        assert_eq!(c.to_string(), "b");
        let b = fold(&ws(&["b"], 2), 2).unwrap();
        assert_eq!(a.conjugate_to(&b).unwrap(), None);
    }

    #[test]
    fn dot_output_marks_basepoint() {
        let g = fold(&ws(&["Bab"], 2), 2).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("v0 [shape=doublecircle]"));
        assert!(dot.contains("label=\"a\""));
    }
}
