use std::collections::VecDeque;

use super::{RawGraph, SubgroupGraph, NONE};
use crate::error::{ensure_rank, Result};
use crate::word::{Letter, Word};

/// One non-contractible component of the fibre product of two core graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackComponent {
    /// Canonical basepoint-free core (a conjugacy-class representative).
    pub graph: SubgroupGraph,
    /// A word `y` such that this component presents `[[H ∩ K^y]]`.
    pub coset_witness: Word,
    /// Whether the component contains the pair of basepoints.
    pub based: bool,
}

#[derive(Clone, Debug)]
pub struct Pullback {
    /// The based component as a based graph: exactly `H ∩ K`.
    pub intersection: SubgroupGraph,
    /// Non-contractible components, ordered by canonical encoding.
    pub components: Vec<PullbackComponent>,
}

pub fn pullback(h: &SubgroupGraph, k: &SubgroupGraph) -> Result<Pullback> {
    ensure_rank(h.ambient_rank(), k.ambient_rank())?;
    let rank = h.ambient_rank();
    let n = 2 * rank;
    let (v1, v2) = (h.vertex_count(), k.vertex_count());
    let mut raw = RawGraph::new(rank, v1 * v2);
    for u in 0..v1 {
        for v in 0..v2 {
            for s in (0..n).step_by(2) {
                let t1 = h.table()[u * n + s];
                let t2 = k.table()[v * n + s];
                if t1 != NONE && t2 != NONE {
                    let l = Letter::from_slot(s);
                    raw.add_edge(u * v2 + v, l, t1 as usize * v2 + t2 as usize);
                }
            }
        }
    }

    let intersection = SubgroupGraph::from_raw(raw.clone(), 0);

    let label = component_labels(&raw);
    raw.prune(None);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; raw.len()];
    for v in 0..raw.len() {
        if !raw.alive[v] {
            continue;
        }
        let l = label[v];
        if group_of[l] == usize::MAX {
            group_of[l] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[l]].push(v);
    }

    let mut components = Vec::with_capacity(groups.len());
    for verts in groups {
        let mut best: Option<Vec<u32>> = None;
        let mut witness: Option<Word> = None;
        for &pv in &verts {
            let (table, _, _) = raw.encode_from(pv);
            if best
                .as_ref()
                .is_none_or(|b| (table.len(), &table) < (b.len(), b))
            {
                best = Some(table);
            }
            let (u, v) = (pv / v2, pv % v2);
            let y = k.tree_word(v).mul(&h.tree_word(u).inverse());
            if witness.as_ref().is_none_or(|w| y.shortlex_cmp(w).is_lt()) {
                witness = Some(y);
            }
        }
        components.push(PullbackComponent {
            graph: SubgroupGraph::from_table(rank, best.expect("non-empty component")),
            coset_witness: witness.expect("non-empty component"),
            based: label[verts[0]] == label[0],
        });
    }
    components.sort_by(|a, b| {
        (a.graph.table().len(), a.graph.table())
            .cmp(&(b.graph.table().len(), b.graph.table()))
            .then_with(|| a.coset_witness.shortlex_cmp(&b.coset_witness))
    });
    Ok(Pullback {
        intersection,
        components,
    })
}

fn component_labels(raw: &RawGraph) -> Vec<usize> {
    let mut label = vec![usize::MAX; raw.len()];
    let mut queue = VecDeque::new();
    for start in 0..raw.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for s in 0..raw.slots() {
                let t = raw.target(v, s);
                if t != NONE && label[t as usize] == usize::MAX {
                    label[t as usize] = start;
                    queue.push_back(t as usize);
                }
            }
        }
    }
    label
}
