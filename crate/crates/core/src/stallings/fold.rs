//! Incremental Stallings folding.
//!
//! Every edge may carry a provenance word over the input generators. The
//! invariant maintained through every fold is: for a closed path at the
//! basepoint, substituting the input generators into the product of the
//! provenance words gives the path label. Vertex identifications carry a
//! frame change `delta` so that the invariant survives merges.

use std::collections::VecDeque;

use crate::word::{Letter, Word};

pub(crate) const NONE: u32 = u32::MAX;

pub(crate) struct Folder {
    rank: usize,
    slots: usize,
    adj: Vec<u32>,
    fwd: Vec<u32>,
    track: Option<Track>,
    pending: VecDeque<(u32, usize, u32, Word)>,
    /// Parallel edges with distinct provenance (nontrivial relations among the inputs).
    pub(crate) relations: usize,
}

struct Track {
    gens: usize,
    prov: Vec<Option<Word>>,
    delta: Vec<Word>,
}

impl Folder {
    pub(crate) fn new(rank: usize) -> Folder {
        let mut f = Folder {
            rank,
            slots: 2 * rank,
            adj: Vec::new(),
            fwd: Vec::new(),
            track: None,
            pending: VecDeque::new(),
            relations: 0,
        };
        f.new_vertex();
        f
    }

    /// A folder that records, per edge, a word over `gens` input generators.
    pub(crate) fn tracked(rank: usize, gens: usize) -> Folder {
        let mut f = Folder::new(rank);
        f.track = Some(Track {
            gens,
            prov: vec![None; f.slots],
            delta: vec![Word::identity(gens)],
        });
        f
    }

    fn new_vertex(&mut self) -> u32 {
        let id = self.fwd.len() as u32;
        self.fwd.push(id);
        self.adj.extend(std::iter::repeat_n(NONE, self.slots));
        if let Some(t) = &mut self.track {
            t.prov.extend(std::iter::repeat_n(None, self.slots));
            t.delta.push(Word::identity(t.gens));
        }
        id
    }

    fn trivial(&self) -> Word {
        Word::identity(self.track.as_ref().map_or(0, |t| t.gens))
    }

    fn target(&self, v: u32, slot: usize) -> u32 {
        self.adj[v as usize * self.slots + slot]
    }

    fn set(&mut self, v: u32, slot: usize, t: u32, p: Option<Word>) {
        let i = v as usize * self.slots + slot;
        self.adj[i] = t;
        if let Some(tr) = &mut self.track {
            tr.prov[i] = p;
        }
    }

    fn prov(&self, v: u32, slot: usize) -> Word {
        match &self.track {
            Some(t) => t.prov[v as usize * self.slots + slot]
                .clone()
                .expect("edge provenance"),
            None => Word::identity(0),
        }
    }

    /// Root of `v` and `D` with `D ~ g(root) g(v)⁻¹`, where `g` is the
    /// implicit potential behind the provenance labels.
    fn resolve(&self, mut v: u32) -> (u32, Word) {
        let mut acc = self.trivial();
        while self.fwd[v as usize] != v {
            if let Some(t) = &self.track {
                acc = t.delta[v as usize].mul(&acc);
            }
            v = self.fwd[v as usize];
        }
        (v, acc)
    }

    /// Follows `word` from `start` as far as the current edges allow.
    fn read_prefix(&self, start: u32, letters: &[Letter]) -> (u32, usize) {
        let mut v = start;
        for (i, l) in letters.iter().enumerate() {
            let t = self.target(v, l.slot());
            if t == NONE {
                return (v, i);
            }
            v = t;
        }
        (v, letters.len())
    }

    pub(crate) fn contains(&self, w: &Word) -> bool {
        let (v, read) = self.read_prefix(0, w.letters());
        read == w.len() && v == 0
    }

    /// Adds a closed loop at the basepoint labelled `w`. For a tracked folder,
    /// `generator` is the index (from 0) of the input generator it represents.
    pub(crate) fn add_word(&mut self, w: &Word, generator: usize) {
        debug_assert_eq!(w.rank(), self.rank);
        if w.is_empty() {
            return;
        }
        if self.track.is_none() {
            self.add_word_fast(w);
            return;
        }
        let gens = self.track.as_ref().unwrap().gens;
        let marker = Word::generator(gens, generator + 1).expect("generator index");
        let letters = w.letters();
        let mut prev = 0u32;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                self.new_vertex()
            };
            let p = if i == 0 {
                marker.clone()
            } else {
                self.trivial()
            };
            self.pending.push_back((prev, l.slot(), next, p));
            prev = next;
        }
        self.drain();
    }

    fn add_word_fast(&mut self, w: &Word) {
        let letters = w.letters();
        let n = letters.len();
        let (mut u, mut i) = self.read_prefix(0, letters);
        if i == n && u == 0 {
            return;
        }
        let back: Vec<Letter> = letters.iter().rev().map(|l| l.inverse()).collect();
        let (v, k) = self.read_prefix(0, &back);
        if i + k > n {
            i = n - k;
            u = self.read_prefix(0, &letters[..i]).0;
        }
        if i + k == n {
            self.merge(u, v, Word::identity(0));
            self.drain();
            return;
        }
        let middle = &letters[i..n - k];
        let mut prev = u;
        for (j, l) in middle.iter().enumerate() {
            let next = if j + 1 == middle.len() {
                v
            } else {
                self.new_vertex()
            };
            self.pending
                .push_back((prev, l.slot(), next, Word::identity(0)));
            prev = next;
        }
        self.drain();
    }

    // Provenance invariant: an edge `u --l--> v` labelled `p` satisfies
    // `p ~ g(u) l g(v)⁻¹` after substituting the inputs, with `g(basepoint) = 1`.
    fn drain(&mut self) {
        let tracked = self.track.is_some();
        while let Some((u, s, v, p)) = self.pending.pop_front() {
            let (u, du) = self.resolve(u);
            let (v, dv) = self.resolve(v);
            let p = if tracked {
                du.mul(&p).mul(&dv.inverse())
            } else {
                p
            };
            let out = self.target(u, s);
            let inc = self.target(v, s ^ 1);
            if out == NONE && inc == NONE {
                let pinv = p.inverse();
                self.set(u, s, v, tracked.then(|| p.clone()));
                self.set(v, s ^ 1, u, tracked.then_some(pinv));
            } else if out != NONE {
                let q = self.prov(u, s);
                if out == v {
                    if tracked && q != p {
                        self.relations += 1;
                    }
                } else {
                    let delta = if tracked { q.inverse().mul(&p) } else { p };
                    self.merge(out, v, delta);
                }
            } else {
                let q = self.prov(v, s ^ 1).inverse();
                let delta = if tracked { q.mul(&p.inverse()) } else { p };
                self.merge(inc, u, delta);
            }
        }
    }

    /// Identifies `a` and `b`, given `delta ~ g(a) g(b)⁻¹`.
    fn merge(&mut self, a: u32, b: u32, delta: Word) {
        let (a, da) = self.resolve(a);
        let (b, db) = self.resolve(b);
        if a == b {
            return;
        }
        let tracked = self.track.is_some();
        let delta = if tracked {
            da.mul(&delta).mul(&db.inverse())
        } else {
            delta
        };
        let (keep, gone, d) = if b == 0 || (a != 0 && b < a) {
            (b, a, delta.inverse())
        } else {
            (a, b, delta)
        };
        self.fwd[gone as usize] = keep;
        if let Some(t) = &mut self.track {
            t.delta[gone as usize] = d;
        }
        for s in 0..self.slots {
            let t = self.target(gone, s);
            if t == NONE {
                continue;
            }
            let p = if tracked {
                self.prov(gone, s)
            } else {
                Word::identity(0)
            };
            self.set(gone, s, NONE, None);
            if t != gone {
                self.set(t, s ^ 1, NONE, None);
            } else {
                self.set(gone, s ^ 1, NONE, None);
            }
            self.pending.push_back((gone, s, t, p));
        }
    }

    /// Extracts the folded graph: live vertices, core pruned at the basepoint.
    pub(crate) fn finish(&self) -> FoldResult {
        let live: Vec<u32> = (0..self.fwd.len() as u32)
            .filter(|&v| self.fwd[v as usize] == v)
            .collect();
        let mut index = vec![NONE; self.fwd.len()];
        for (i, &v) in live.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let mut raw = RawGraph::new(self.rank, live.len());
        let mut prov = self
            .track
            .as_ref()
            .map(|_| vec![None; live.len() * self.slots]);
        for (i, &v) in live.iter().enumerate() {
            for s in 0..self.slots {
                let t = self.target(v, s);
                if t != NONE {
                    raw.adj[i * self.slots + s] = index[t as usize];
                    if let Some(p) = &mut prov {
                        p[i * self.slots + s] = Some(self.prov(v, s));
                    }
                }
            }
        }
        FoldResult {
            raw,
            prov,
            gens: self.track.as_ref().map_or(0, |t| t.gens),
        }
    }
}

pub(crate) struct FoldResult {
    pub(crate) raw: RawGraph,
    pub(crate) prov: Option<Vec<Option<Word>>>,
    pub(crate) gens: usize,
}

/// A folded labelled graph with explicit adjacency, used as the working
/// representation before canonical renumbering.
#[derive(Clone, Debug)]
pub(crate) struct RawGraph {
    pub(crate) rank: usize,
    pub(crate) adj: Vec<u32>,
    pub(crate) alive: Vec<bool>,
}

impl RawGraph {
    pub(crate) fn new(rank: usize, vertices: usize) -> RawGraph {
        RawGraph {
            rank,
            adj: vec![NONE; vertices * 2 * rank],
            alive: vec![true; vertices],
        }
    }

    pub(crate) fn slots(&self) -> usize {
        2 * self.rank
    }

    pub(crate) fn len(&self) -> usize {
        self.alive.len()
    }

    pub(crate) fn target(&self, v: usize, slot: usize) -> u32 {
        self.adj[v * self.slots() + slot]
    }

    pub(crate) fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        let s = l.slot();
        let n = self.slots();
        debug_assert!(self.adj[u * n + s] == NONE || self.adj[u * n + s] == v as u32);
        self.adj[u * n + s] = v as u32;
        self.adj[v * n + (s ^ 1)] = u as u32;
    }

    fn degree(&self, v: usize) -> usize {
        (0..self.slots())
            .filter(|&s| self.target(v, s) != NONE)
            .count()
    }

    /// Removes, repeatedly, every live vertex of degree at most one except `keep`.
    pub(crate) fn prune(&mut self, keep: Option<usize>) {
        let n = self.slots();
        let mut stack: Vec<usize> = (0..self.len())
            .filter(|&v| self.alive[v] && Some(v) != keep && self.degree(v) <= 1)
            .collect();
        while let Some(v) = stack.pop() {
            if !self.alive[v] || Some(v) == keep || self.degree(v) > 1 {
                continue;
            }
            self.alive[v] = false;
            for s in 0..n {
                let t = self.adj[v * n + s];
                if t != NONE {
                    self.adj[v * n + s] = NONE;
                    let t = t as usize;
                    self.adj[t * n + (s ^ 1)] = NONE;
                    if Some(t) != keep && self.degree(t) <= 1 {
                        stack.push(t);
                    }
                }
            }
        }
    }

    /// Breadth-first renumbering from `root`, visiting edge slots in order.
    /// Returns the new order (old ids) and the map old -> new.
    pub(crate) fn bfs_order(&self, root: usize) -> (Vec<usize>, Vec<u32>) {
        let mut map = vec![NONE; self.len()];
        let mut order = vec![root];
        map[root] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for s in 0..self.slots() {
                let t = self.target(v, s);
                if t != NONE && map[t as usize] == NONE {
                    map[t as usize] = order.len() as u32;
                    order.push(t as usize);
                }
            }
        }
        (order, map)
    }

    /// The adjacency table in breadth-first numbering from `root`.
    pub(crate) fn encode_from(&self, root: usize) -> (Vec<u32>, Vec<usize>, Vec<u32>) {
        let (order, map) = self.bfs_order(root);
        let n = self.slots();
        let mut table = Vec::with_capacity(order.len() * n);
        for &v in &order {
            for s in 0..n {
                let t = self.target(v, s);
                table.push(if t == NONE { NONE } else { map[t as usize] });
            }
        }
        (table, order, map)
    }
}
