//! Eigengroups `Fix(φγ_y)`, their isogredience classes, and the rank bound check.

use std::collections::HashMap;

use serde::Serialize;

use super::{fixed_subgroup, FixedSearchBudget, FixedSubgroup};
use crate::error::{Error, Result};
use crate::morphisms::Endomorphism;
use crate::stallings::SubgroupGraph;
use crate::word::{words_up_to, Word};

#[derive(Clone, Debug)]
pub struct EigengroupRecord {
    pub eigenvalue: Word,
    pub fixed: FixedSubgroup,
}

/// Computes `Fix(φγ_y)` for every `y` with `|y| ≤ eigenvalue_len` and keeps
/// the nontrivial ones, sorted by rank (descending) then eigenvalue.
pub fn eigengroup_scan(
    f: &Endomorphism,
    budget: &FixedSearchBudget,
) -> Result<Vec<EigengroupRecord>> {
    if !f.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let mut out = Vec::new();
    for y in words_up_to(f.rank(), budget.eigenvalue_len) {
        let twisted = f.twist(&y)?;
        let fixed = fixed_subgroup(&twisted, budget);
        if fixed.graph.rank() >= 1 {
            out.push(EigengroupRecord {
                eigenvalue: y,
                fixed,
            });
        }
    }
    out.sort_by(|a, b| {
        b.fixed
            .graph
            .rank()
            .cmp(&a.fixed.graph.rank())
            .then_with(|| a.eigenvalue.shortlex_cmp(&b.eigenvalue))
    });
    Ok(out)
}

/// `c` with `y_member = (cφ)⁻¹ · y_representative · c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReidemeisterWitness {
    pub record: usize,
    pub conjugator: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsogredienceClass {
    pub id: usize,
    pub rank: usize,
    /// Indices into the scanned records; the first is the representative.
    pub records: Vec<usize>,
    pub witnesses: Vec<ReidemeisterWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub classes: Vec<IsogredienceClass>,
    /// Records of rank at most one, listed but not classified.
    pub cyclic: Vec<usize>,
}

/// Groups records of rank at least two by conjugacy of their fixed subgroups
/// and derives, for each member, a Reidemeister witness relating its
/// eigenvalue to the class representative.
pub fn isogredience_partition(records: &[EigengroupRecord], f: &Endomorphism) -> Partition {
    let mut classes: Vec<IsogredienceClass> = Vec::new();
    let mut cyclic = Vec::new();
    let mut by_rep: HashMap<SubgroupGraph, usize> = HashMap::new();
    for (i, rec) in records.iter().enumerate() {
        let rank = rec.fixed.graph.rank();
        if rank <= 1 {
            cyclic.push(i);
            continue;
        }
        let key = rec.fixed.graph.class_rep().0;
        match by_rep.get(&key) {
            None => {
                by_rep.insert(key, classes.len());
                classes.push(IsogredienceClass {
                    id: classes.len(),
                    rank,
                    records: vec![i],
                    witnesses: Vec::new(),
                });
            }
            Some(&c) => {
                let rep = &records[classes[c].records[0]];
                let witness = rep
                    .fixed
                    .graph
                    .conjugate_to(&rec.fixed.graph)
                    .ok()
                    .flatten()
                    .map(|c| {
                        let derived = f
                            .apply(&c)
                            .map(|cf| cf.inverse().mul(&rep.eigenvalue).mul(&c))
                            .ok();
                        ReidemeisterWitness {
                            record: i,
                            conjugator: c.to_string(),
                            verified: derived.as_ref() == Some(&rec.eigenvalue),
                        }
                    })
                    .unwrap_or(ReidemeisterWitness {
                        record: i,
                        conjugator: String::new(),
                        verified: false,
                    });
                classes[c].records.push(i);
                classes[c].witnesses.push(witness);
            }
        }
    }
    Partition { classes, cyclic }
}

#[derive(Clone, Debug, Serialize)]
pub struct BhReport {
    pub ambient_rank: usize,
    pub eigenvalues_scanned: usize,
    pub fix_rank: usize,
    pub class_ranks: Vec<usize>,
    pub reduced_rank_sum: usize,
    pub violations: Vec<String>,
}

impl BhReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, within the scanned horizon, that the non-cyclic eigengroup classes
/// have reduced ranks summing to at most `n − 1`, and `r(Fix φ) ≤ n`.
pub fn bh_report(f: &Endomorphism, budget: &FixedSearchBudget) -> Result<BhReport> {
    let records = eigengroup_scan(f, budget)?;
    let partition = isogredience_partition(&records, f);
    Ok(bh_from(f, budget, &records, &partition))
}

pub(crate) fn bh_from(
    f: &Endomorphism,
    budget: &FixedSearchBudget,
    records: &[EigengroupRecord],
    partition: &Partition,
) -> BhReport {
    let n = f.rank();
    let bound = n.saturating_sub(1);
    let fix_rank = records
        .iter()
        .find(|r| r.eigenvalue.is_identity())
        .map_or(0, |r| r.fixed.graph.rank());
    let class_ranks: Vec<usize> = partition.classes.iter().map(|c| c.rank).collect();
    let reduced_rank_sum: usize = class_ranks.iter().map(|r| r - 1).sum();
    let mut violations = Vec::new();
    if fix_rank > n {
        violations.push(format!("BUG: rank of Fix is {fix_rank} > {n}"));
    }
    if reduced_rank_sum > bound {
        violations.push(format!(
            "BUG: reduced ranks of eigengroup classes sum to {reduced_rank_sum} > {bound}"
        ));
    }
    if class_ranks.len() > bound {
        violations.push(format!(
            "BUG: {} non-cyclic eigengroup classes > {bound}",
            class_ranks.len()
        ));
    }
    for c in &partition.classes {
        for w in &c.witnesses {
            if !w.verified {
                violations.push(format!(
                    "BUG: Reidemeister witness for record {} failed",
                    w.record
                ));
            }
        }
    }
    BhReport {
        ambient_rank: n,
        eigenvalues_scanned: words_up_to(n, budget.eigenvalue_len).len(),
        fix_rank,
        class_ranks,
        reduced_rank_sum,
        violations,
    }
}
