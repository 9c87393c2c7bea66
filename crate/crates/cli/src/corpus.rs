//! Runs every corpus entry and construction, recomputing all expected artifacts.

use std::io::Write;
use std::path::Path;

use freefix::constructions::{
    certificate_search, extend_trivially, find_good_r, free_product_auto, imagey_solve,
    refute_auto_fixed, stable_letter_extend, verify_cormain, verify_mainconnex, CertificateSearch,
    MainconnexCase, Verdict,
};
use freefix::fixed_points::{bh_report, fixed_subgroup};
use freefix::{fold, Endomorphism, Word};
use serde::Serialize;
use serde_json::json;

use crate::files::{read, words, CaseFile, CertificateFile, Construction, CorpusEntry, Manifest};
use crate::{imagey_json, Cli, CliError, Outcome};

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub entry: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

struct Log<'a> {
    lines: Vec<CheckLine>,
    err: &'a mut dyn Write,
}

impl Log<'_> {
    fn add(&mut self, entry: &str, check: &str, passed: bool, detail: impl Into<String>) {
        let line = CheckLine {
            entry: entry.into(),
            check: check.into(),
            passed,
            detail: detail.into(),
        };
        let _ = writeln!(
            self.err,
            "{} {entry}: {check}",
            if passed { "ok  " } else { "FAIL" }
        );
        self.lines.push(line);
    }
}

pub fn run_corpus(cli: &Cli, dir: &Path, err: &mut dyn Write) -> Result<Outcome, CliError> {
    let manifest: Manifest = read(&dir.join("manifest.json"))?;
    let mut log = Log {
        lines: Vec::new(),
        err,
    };
    for name in &manifest.entries {
        let entry: CorpusEntry = read(&dir.join(name))?;
        let _ = writeln!(log.err, "running {}", entry.name);
        run_entry(cli, dir, &entry, &mut log)?;
    }
    for c in &manifest.constructions {
        run_construction(cli, c, &mut log)?;
    }
    let failed = log.lines.iter().filter(|l| !l.passed).count();
    Ok(Outcome {
        ok: failed == 0,
        value: json!({ "checks": log.lines, "passed": log.lines.len() - failed, "failed": failed }),
    })
}

fn run_entry(cli: &Cli, dir: &Path, entry: &CorpusEntry, log: &mut Log) -> Result<(), CliError> {
    let name = entry.name.as_str();
    let exp = &entry.expected;
    if let Some(map) = &entry.endomorphism {
        let f = map.build()?;
        let n = f.rank();
        let b = cli.budget(&f, &entry.budget);
        if let Some(auto) = exp.automorphism {
            log.add(
                name,
                "automorphism",
                f.is_automorphism() == auto,
                f.to_string(),
            );
        }
        let fixed = fixed_subgroup(&f, &b);
        if let Some(gens) = &exp.fix_generators {
            let expected = fold(&words(gens, n)?, n)?;
            log.add(
                name,
                "fixed subgroup",
                fixed.graph == expected,
                format!(
                    "computed {:?} ({:?})",
                    fixed
                        .graph
                        .basis()
                        .iter()
                        .map(Word::to_string)
                        .collect::<Vec<_>>(),
                    fixed.completeness
                ),
            );
        }
        if let Some(rank) = exp.fix_rank {
            log.add(
                name,
                "fixed rank",
                fixed.graph.rank() == rank,
                format!("rank {}", fixed.graph.rank()),
            );
        }
        if let Some(file) = &exp.certificate {
            let cert = read::<CertificateFile>(&dir.join(file))?.build()?;
            let r = verify_cormain(&f, &cert, &b)?;
            let ranks: usize = cert
                .k_factors
                .iter()
                .map(|k| fold(k, n).map(|g| g.rank()))
                .sum::<Result<_, _>>()?;
            let l_rank = fold(&cert.l_generators, n)?.rank();
            let accounting = cert.r() + cert.s() >= r.fix_rank && ranks + cert.s() + l_rank == n;
            log.add(
                name,
                "certificate",
                r.passed(),
                r.failed_clauses().join("; "),
            );
            log.add(name, "certificate rank accounting", accounting, "");
        }
        if let Some(search) = &exp.certificate_search {
            match certificate_search(&f, &b)? {
                CertificateSearch::Found(cert, report) => {
                    let unfixed = cert
                        .h_elements
                        .iter()
                        .any(|h| &f.apply(h).expect("rank") != h);
                    log.add(
                        name,
                        "certificate search",
                        report.passed(),
                        format!("r = {}, s = {}", cert.r(), cert.s()),
                    );
                    log.add(
                        name,
                        "certificate search h unfixed",
                        unfixed == search.some_h_unfixed,
                        "",
                    );
                }
                CertificateSearch::Unknown { candidates } => log.add(
                    name,
                    "certificate search",
                    false,
                    format!("unknown after {candidates} candidates"),
                ),
            }
        }
        for case in &exp.cases {
            let g = match &case.map {
                Some(m) => m.build()?,
                None => f.clone(),
            };
            let mut cb = cli.budget(&g, &entry.budget);
            if let Some(m) = case.max_len {
                cb = freefix::fixed_points::FixedSearchBudget::for_map(&g, m)
                    .with_eigenvalue_len(cb.eigenvalue_len);
            }
            let data = read::<CaseFile>(&dir.join(&case.file))?.build()?;
            let r = verify_mainconnex(&g, &data, &cb)?;
            let got = serde_json::to_value(r.verdict).expect("serializable");
            log.add(
                name,
                &format!("case {} ({})", data.tag(), case.file),
                got == json!(case.verdict),
                format!("{got}; failed: {}", r.failed_clauses().join("; ")),
            );
        }
        if let Some(ok) = exp.bh_ok {
            let r = bh_report(&f, &b)?;
            log.add(
                name,
                "eigengroup bound",
                r.ok() == ok,
                r.violations.join("; "),
            );
        }
    }
    if let Some(refutation) = &exp.refutation {
        let gens = words(&refutation.generators, refutation.rank)?;
        let r = refute_auto_fixed(
            &gens,
            refutation.rank,
            refutation.image_len,
            refutation.witness_len,
        )?;
        log.add(
            name,
            "no automorphism fixes exactly the subgroup",
            r.refuted(),
            format!(
                "{} candidates, {} automorphisms",
                r.candidates, r.automorphisms
            ),
        );
    }
    for (i, e) in exp.imagey.iter().enumerate() {
        let f = e.map.build()?;
        let n = f.rank();
        let h = fold(&words(&e.h_generators, n)?, n)?;
        let out = imagey_solve(&f, &h, &Word::parse(&e.y, n)?, &Word::parse(&e.h, n)?)?;
        let v = imagey_json(&out);
        let mut ok = v["outcome"] == json!(e.outcome);
        if let Some(hp) = &e.h_prime {
            ok &= v["h_prime"] == json!(Word::parse(hp, n)?.to_string());
        }
        log.add(name, &format!("image of y #{}", i + 1), ok, v.to_string());
    }
    Ok(())
}

fn fix_equals(
    f: &Endomorphism,
    max_len: usize,
    gens: &[String],
) -> Result<(bool, String), CliError> {
    let n = f.rank();
    let fixed = fixed_subgroup(
        f,
        &freefix::fixed_points::FixedSearchBudget::for_map(f, max_len),
    );
    let expected = fold(&words(gens, n)?, n)?;
    let shown: Vec<String> = fixed.graph.basis().iter().map(Word::to_string).collect();
    Ok((fixed.graph == expected, format!("{shown:?}")))
}

fn acceptable(v: Verdict) -> bool {
    matches!(v, Verdict::Pass | Verdict::Vacuous)
}

fn run_construction(cli: &Cli, c: &Construction, log: &mut Log) -> Result<(), CliError> {
    let max_len = cli.max_len.unwrap_or(crate::DEFAULT_MAX_LEN);
    let budget = |f: &Endomorphism| freefix::fixed_points::FixedSearchBudget::for_map(f, max_len);
    let coords = |range: std::ops::Range<usize>, n: usize| -> Vec<Word> {
        range
            .map(|i| Word::generator(n, i + 1).expect("in range"))
            .collect()
    };
    match c {
        Construction::Extend {
            name,
            map,
            rank,
            extra,
            fix_generators,
        } => {
            let phi = map.build()?;
            let extra = extra.as_ref().map(|e| words(e, *rank)).transpose()?;
            let f = extend_trivially(&phi, *rank, extra.as_deref())?;
            let (ok, detail) = fix_equals(&f, max_len, fix_generators)?;
            log.add(name, "extension fixed subgroup", ok, detail);
            let m = phi.rank();
            let case = MainconnexCase::I {
                h: coords(0..m, *rank),
                k: coords(m..*rank, *rank),
            };
            let r = verify_mainconnex(&f, &case, &budget(&f))?;
            log.add(
                name,
                "extension case i",
                acceptable(r.verdict),
                r.failed_clauses().join("; "),
            );
        }
        Construction::Product {
            name,
            first,
            second,
            fix_generators,
        } => {
            let (a, b) = (first.build()?, second.build()?);
            let f = free_product_auto(&a, &b)?;
            let (ok, detail) = fix_equals(&f, max_len, fix_generators)?;
            log.add(name, "product fixed subgroup", ok, detail);
            let n = f.rank();
            let case = MainconnexCase::II {
                h: coords(0..a.rank(), n),
                k: coords(a.rank()..n, n),
            };
            let r = verify_mainconnex(&f, &case, &budget(&f))?;
            log.add(
                name,
                "product case ii",
                acceptable(r.verdict),
                r.failed_clauses().join("; "),
            );
        }
        Construction::Stable {
            name,
            map,
            h,
            h_prime,
            r,
            result,
        } => {
            let phi = map.build()?;
            let m = phi.rank();
            let (hw, hpw) = (Word::parse(h, m)?, Word::parse(h_prime, m)?);
            let f = stable_letter_extend(&phi, &hw, &hpw, *r)?;
            log.add(
                name,
                "stable letter map",
                f == result.build()?,
                f.to_string(),
            );
            let n = m + 1;
            let case = MainconnexCase::III {
                h: coords(0..m, n),
                y: Word::generator(n, n)?,
                h_elt: hw.embed(n)?,
                h_prime: (&hpw * &hw.pow(*r)).embed(n)?,
            };
            let rep = verify_mainconnex(&f, &case, &budget(&f))?;
            log.add(
                name,
                "stable letter case iii",
                acceptable(rep.verdict),
                rep.failed_clauses().join("; "),
            );
        }
        Construction::GoodR {
            name,
            map,
            h,
            h_prime,
            from,
            to,
            max_len,
            bad,
        } => {
            let phi = map.build()?;
            let m = phi.rank();
            let rs = find_good_r(
                &phi,
                &Word::parse(h, m)?,
                &Word::parse(h_prime, m)?,
                *from..=*to,
                *max_len,
            )?;
            let found: Vec<i64> = rs.iter().filter(|g| !g.good).map(|g| g.r).collect();
            log.add(name, "bad exponents", &found == bad, format!("{found:?}"));
        }
    }
    Ok(())
}
