//! Subgroup systems and free factor systems: complexity, the partial orders,
//! the wedge, invariance, and a bounded free-factor test.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{ensure_rank, Error, Result};
use crate::morphisms::{smith_invariants, whitehead_moves, Endomorphism};
use crate::stallings::{fold, pullback, SubgroupGraph, NONE};
use crate::word::{words_up_to, Word};

/// A finite set of nontrivial conjugacy classes of subgroups, each stored as
/// its canonical basepoint-free core, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeFactorSystem {
    rank: usize,
    classes: Vec<SubgroupGraph>,
    /// Conjugators `x_i` such that the join of the `H_i^{x_i}` is a verified
    /// free factor; empty until verified.
    witnesses: Vec<Word>,
}

fn canonical_cmp(a: &SubgroupGraph, b: &SubgroupGraph) -> Ordering {
    (a.table().len(), a.table()).cmp(&(b.table().len(), b.table()))
}

impl FreeFactorSystem {
    /// Builds the system of classes of `subgroups`, dropping trivial ones and
    /// merging conjugates.
    pub fn new(rank: usize, subgroups: &[SubgroupGraph]) -> Result<FreeFactorSystem> {
        let mut classes: Vec<SubgroupGraph> = Vec::new();
        for g in subgroups {
            ensure_rank(rank, g.ambient_rank())?;
            if g.is_trivial() {
                continue;
            }
            let rep = g.class_rep().0;
            if !classes.contains(&rep) {
                classes.push(rep);
            }
        }
        classes.sort_by(canonical_cmp);
        Ok(FreeFactorSystem {
            rank,
            classes,
            witnesses: Vec::new(),
        })
    }

    pub fn from_generators(rank: usize, classes: &[Vec<Word>]) -> Result<FreeFactorSystem> {
        let graphs = classes
            .iter()
            .map(|g| fold(g, rank))
            .collect::<Result<Vec<_>>>()?;
        FreeFactorSystem::new(rank, &graphs)
    }

    /// The empty system, of complexity 0.
    pub fn empty(rank: usize) -> FreeFactorSystem {
        FreeFactorSystem {
            rank,
            classes: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    /// `{[[F]]}`.
    pub fn full(rank: usize) -> FreeFactorSystem {
        let mut s = FreeFactorSystem::new(rank, &[SubgroupGraph::full(rank)]).expect("same rank");
        s.witnesses = vec![Word::identity(rank)];
        s
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn classes(&self) -> &[SubgroupGraph] {
        &self.classes
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn verified(&self) -> bool {
        self.is_empty() || !self.witnesses.is_empty()
    }

    pub fn witnesses(&self) -> &[Word] {
        &self.witnesses
    }

    pub fn complexity(&self) -> Complexity {
        let mut v: Vec<usize> = self.classes.iter().map(SubgroupGraph::rank).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Complexity(v)
    }

    /// Searches conjugators of length at most `conjugator_len` (the first
    /// fixed to 1) whose conjugates form a free product that passes the
    /// free-factor test. On success the system is marked verified.
    pub fn verify(&mut self, conjugator_len: usize, depth: usize) -> bool {
        if self.verified() {
            return true;
        }
        let candidates = words_up_to(self.rank, conjugator_len);
        let total: usize = self.classes.iter().map(SubgroupGraph::rank).sum();
        if total > self.rank {
            return false;
        }
        let r = self.classes.len();
        let mut idx = vec![0usize; r];
        loop {
            let xs: Vec<Word> = idx.iter().map(|&i| candidates[i].clone()).collect();
            let mut gens = Vec::new();
            for (c, x) in self.classes.iter().zip(&xs) {
                gens.extend(c.basis().iter().map(|b| x.inverse().mul(b).mul(x)));
            }
            let join = fold(&gens, self.rank).expect("same rank");
            if join.rank() == total
                && matches!(
                    free_factor_test(&join, depth),
                    FreeFactorVerdict::Yes { .. }
                )
            {
                self.witnesses = xs;
                return true;
            }
            // Advance the odometer, keeping the first conjugator trivial.
            let mut k = r;
            loop {
                if k <= 1 {
                    return false;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < candidates.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Class ranks in non-increasing order, compared lexicographically; a proper
/// prefix is smaller, and the empty vector (complexity 0) is least.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Complexity(pub Vec<usize>);

impl std::fmt::Display for Complexity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn cx_compare(a: &Complexity, b: &Complexity) -> Ordering {
    a.cmp(b)
}

/// A word `w` with `H^w ≤ K`, if some conjugate of `H` lies in `K`.
pub fn class_leq(h: &SubgroupGraph, k: &SubgroupGraph) -> Result<Option<Word>> {
    ensure_rank(h.ambient_rank(), k.ambient_rank())?;
    let rank = h.ambient_rank();
    if h.is_trivial() {
        return Ok(Some(Word::identity(rank)));
    }
    let (core_h, ch) = h.class_rep();
    let mut raw = k.to_raw();
    raw.prune(None);
    let n = 2 * rank;
    let hv = core_h.vertex_count();
    for v in (0..k.vertex_count()).filter(|&v| raw.alive[v]) {
        let mut map = vec![NONE; hv];
        map[0] = v as u32;
        let mut queue = VecDeque::from([0usize]);
        let mut ok = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for s in 0..n {
                let t = core_h.table()[x * n + s];
                if t == NONE {
                    continue;
                }
                let img = k.table()[map[x] as usize * n + s];
                if img == NONE {
                    ok = false;
                    break 'bfs;
                }
                let t = t as usize;
                if map[t] == NONE {
                    map[t] = img;
                    queue.push_back(t);
                } else if map[t] != img {
                    ok = false;
                    break 'bfs;
                }
            }
        }
        if ok {
            let w = ch.mul(&k.tree_word(v).inverse());
            debug_assert!(h
                .conjugate(&w)
                .map(|g| g.is_subgroup_of(k))
                .unwrap_or(false));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeFactorVerdict {
    /// `(H)automorphism` is the coordinate subgroup on `generators`.
    Yes {
        automorphism: Endomorphism,
        generators: Vec<usize>,
    },
    No {
        reason: String,
    },
    Unknown,
}

fn size(g: &SubgroupGraph) -> usize {
    g.edge_count()
}

fn image(g: &SubgroupGraph, f: &Endomorphism) -> SubgroupGraph {
    let gens: Vec<Word> = g
        .basis()
        .iter()
        .map(|b| f.apply(b).expect("same rank"))
        .collect();
    fold(&gens, g.ambient_rank()).expect("same rank")
}

/// Bounded search for an automorphism carrying `H` onto a coordinate subgroup:
/// steepest descent on the size of the folded graph over Whitehead moves,
/// then a breadth-first search over size-preserving moves up to `depth`.
/// `No` is only returned for exact reasons (rank, or abelianization).
pub fn free_factor_test(h: &SubgroupGraph, depth: usize) -> FreeFactorVerdict {
    let n = h.ambient_rank();
    let r = h.rank();
    if r > n {
        return FreeFactorVerdict::No {
            reason: format!("rank {r} exceeds ambient rank {n}"),
        };
    }
    if r == n && !h.is_full() {
        return FreeFactorVerdict::No {
            reason: format!("rank {r} equals the ambient rank but the subgroup is proper"),
        };
    }
    let rows: Vec<Vec<BigInt>> = h
        .basis()
        .iter()
        .map(|b| b.exponent_sums().into_iter().map(BigInt::from).collect())
        .collect();
    let inv = smith_invariants(&rows);
    if inv.len() < r || inv.iter().any(|d| !d.is_one()) {
        return FreeFactorVerdict::No {
            reason: "abelianized basis does not span a direct summand of the right rank".into(),
        };
    }

    let moves = whitehead_moves(n);
    let mut current = h.clone();
    let mut alpha = Endomorphism::identity(n);
    loop {
        if let Some(generators) = current.coordinate_generators() {
            return yes(h, alpha, generators);
        }
        // Steepest descent.
        let mut best: Option<(usize, usize, SubgroupGraph)> = None;
        for (i, m) in moves.iter().enumerate() {
            let g = image(&current, m);
            let sz = size(&g);
            if sz < size(&current) && best.as_ref().is_none_or(|b| sz < b.0) {
                best = Some((sz, i, g));
            }
        }
        if let Some((_, i, g)) = best {
            alpha = alpha.compose(&moves[i]).expect("same rank");
            current = g;
            continue;
        }
        // Plateau search.
        match plateau(&current, &moves, depth) {
            Some((path, g)) => {
                for i in path {
                    alpha = alpha.compose(&moves[i]).expect("same rank");
                }
                current = g;
            }
            None => return FreeFactorVerdict::Unknown,
        }
    }
}

const PLATEAU_LIMIT: usize = 5000;

/// Breadth-first search through moves that keep the size unchanged, stopping
/// at the first graph that is smaller or a coordinate subgroup.
fn plateau(
    start: &SubgroupGraph,
    moves: &[Endomorphism],
    depth: usize,
) -> Option<(Vec<usize>, SubgroupGraph)> {
    let base = size(start);
    let mut seen: HashSet<SubgroupGraph> = HashSet::from([start.clone()]);
    let mut frontier: Vec<(Vec<usize>, SubgroupGraph)> = vec![(Vec::new(), start.clone())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (path, g) in &frontier {
            for (i, m) in moves.iter().enumerate() {
                let img = image(g, m);
                let sz = size(&img);
                if sz > base || seen.contains(&img) {
                    continue;
                }
                let mut p = path.clone();
                p.push(i);
                if sz < base || img.coordinate_generators().is_some() {
                    return Some((p, img));
                }
                if seen.len() >= PLATEAU_LIMIT {
                    continue;
                }
                seen.insert(img.clone());
                next.push((p, img));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

fn yes(h: &SubgroupGraph, automorphism: Endomorphism, generators: Vec<usize>) -> FreeFactorVerdict {
    // Re-verify: the image of H is exactly the coordinate subgroup.
    let n = h.ambient_rank();
    let coords: Vec<Word> = generators
        .iter()
        .map(|&i| Word::generator(n, i).expect("in range"))
        .collect();
    let target = fold(&coords, n).expect("same rank");
    if automorphism.is_automorphism() && image(h, &automorphism) == target {
        FreeFactorVerdict::Yes {
            automorphism,
            generators,
        }
    } else {
        FreeFactorVerdict::Unknown
    }
}

/// `H ∧ K`: classes of all nontrivial `H_i ∩ K_j^y`.
pub fn wedge(s1: &FreeFactorSystem, s2: &FreeFactorSystem) -> Result<FreeFactorSystem> {
    ensure_rank(s1.rank, s2.rank)?;
    let mut parts = Vec::new();
    for h in &s1.classes {
        for k in &s2.classes {
            for c in pullback(h, k)?.components {
                parts.push(c.graph);
            }
        }
    }
    FreeFactorSystem::new(s1.rank, &parts)
}

/// Whether every class of `s1` lies below some class of `s2`.
pub fn system_leq(s1: &FreeFactorSystem, s2: &FreeFactorSystem) -> Result<bool> {
    ensure_rank(s1.rank, s2.rank)?;
    for h in &s1.classes {
        let mut found = false;
        for k in &s2.classes {
            if class_leq(h, k)?.is_some() {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    /// For each class, whether `[[H_i φ]] = [[H_i]]`.
    pub classes: Vec<bool>,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.classes.iter().all(|&b| b)
    }
}

pub fn invariant_check(s: &FreeFactorSystem, f: &Endomorphism) -> Result<InvarianceReport> {
    ensure_rank(s.rank, f.rank())?;
    if !f.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let classes = s
        .classes
        .iter()
        .map(|h| image(h, f).class_rep().0 == *h)
        .collect();
    Ok(InvarianceReport { classes })
}
