//! Command-line front end for `freefix`.

pub mod corpus;
pub mod files;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use freefix::constructions::{
    certificate_search, collins_turner_check, extend_trivially, find_good_r, free_product_auto,
    imagey_solve, stable_letter_extend, verify_cormain, verify_mainconnex, CertificateSearch,
    CollinsTurnerClause, ImageyOutcome, Report, Verdict,
};
use freefix::factor_systems::{
    class_leq, free_factor_test, invariant_check, system_leq, wedge, FreeFactorVerdict,
};
use freefix::fixed_points::{
    bh_report, eigengroup_scan, fixed_subgroup, isogredience_partition, EigengroupRecord,
    FixedSearchBudget, FixedSubgroup,
};
use freefix::stallings::{
    coset_displacement_check, inertia_sample, pullback, purity_check, Purity,
};
use freefix::{fold, Endomorphism, SubgroupGraph, Word};
use serde_json::{json, Value};

use files::{read, read_map, BudgetFile, CaseFile, CertificateFile, MapFile, SystemFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] freefix::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "freefix",
    version,
    about = "Fixed subgroups of free group automorphisms"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Longest fixed word searched.
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Displacement cap for the fixed-word search.
    #[arg(long, global = true)]
    pub disp_cap: Option<usize>,
    /// Longest eigenvalue scanned.
    #[arg(long, global = true)]
    pub eig_len: Option<usize>,
    /// Search depth for free factor and system checks.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct SubgroupArgs {
    #[arg(long)]
    pub rank: usize,
    /// Comma separated generators.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gens: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Free and cyclic reduction of a word.
    Reduce {
        #[arg(long)]
        rank: usize,
        word: String,
    },
    /// Stallings graph of a finitely generated subgroup.
    Fold {
        #[arg(long)]
        rank: usize,
        generators: Vec<String>,
        #[arg(long)]
        dot: bool,
    },
    /// Membership of a word in a subgroup.
    Member {
        #[command(flatten)]
        subgroup: SubgroupArgs,
        word: String,
    },
    /// Intersection of two subgroups.
    Intersect {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',')]
        h: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        k: Vec<String>,
    },
    /// Images of words under a map.
    Apply {
        map: PathBuf,
        words: Vec<String>,
    },
    /// Inverse of an automorphism.
    InvertAuto {
        map: PathBuf,
    },
    /// Fixed subgroup, with its completeness.
    Fix {
        map: PathBuf,
    },
    /// Eigengroups for short eigenvalues.
    Eigengroups {
        map: PathBuf,
    },
    /// Eigenvalues grouped into isogredience classes.
    Isogredience {
        map: PathBuf,
    },
    /// Rank bound over the scanned eigengroups.
    BhCheck {
        map: PathBuf,
    },
    /// Subgroup properties.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Free factor systems.
    #[command(subcommand)]
    Ffs(FfsCommand),
    /// Maps built from smaller ones.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Decompositions and fixedness claims.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Checked example corpus.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Is the subgroup closed under taking roots.
    Pure {
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Random search for a subgroup whose intersection with this one has larger rank.
    Inert {
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        gen_len: usize,
    },
    /// Distance of conjugating cosets from the core, against half the element length.
    CosetBound {
        #[command(flatten)]
        subgroup: SubgroupArgs,
        /// Nontrivial element of the subgroup.
        #[arg(long)]
        element: String,
        /// Comma separated conjugators.
        #[arg(long, value_delimiter = ',')]
        conjugators: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FfsCommand {
    /// Complexity of a system.
    Cx {
        system: PathBuf,
    },
    /// Is the first system below the second.
    Leq {
        first: PathBuf,
        second: PathBuf,
    },
    /// Meet of two systems.
    Wedge {
        first: PathBuf,
        second: PathBuf,
    },
    /// Is the system invariant under a map.
    Invariant {
        system: PathBuf,
        map: PathBuf,
    },
    /// Is the subgroup a free factor.
    IsFreeFactor {
        #[command(flatten)]
        subgroup: SubgroupArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConstructCommand {
    /// Extend a map by the identity on new letters.
    Extend {
        map: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',')]
        extra: Option<Vec<String>>,
    },
    /// Free product of two maps.
    Product {
        first: PathBuf,
        second: PathBuf,
    },
    /// Add a stable letter.
    Stable {
        map: PathBuf,
        #[arg(long)]
        h: String,
        #[arg(long)]
        h_prime: String,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
    },
    /// Exponents for which the stable letter adds no fixed words.
    GoodR {
        map: PathBuf,
        #[arg(long)]
        h: String,
        #[arg(long)]
        h_prime: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = -5)]
        from: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 5)]
        to: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Check one of the three decomposition cases.
    Mainconnex {
        map: PathBuf,
        case: PathBuf,
    },
    /// Verifies a certificate, or searches for one when none is given.
    Cormain {
        map: PathBuf,
        certificate: Option<PathBuf>,
    },
    /// Check the rank n structure of a fixed subgroup.
    CollinsTurner {
        map: PathBuf,
        #[arg(long, value_delimiter = ',')]
        h_gens: Vec<String>,
        #[arg(long)]
        y: String,
        /// Clause (ii) data; clause (i) when absent.
        #[arg(long)]
        h: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
    },
    /// Solve for the image of a letter in a fixed subgroup.
    Imagey {
        map: PathBuf,
        #[arg(long, value_delimiter = ',')]
        h_gens: Vec<String>,
        #[arg(long)]
        y: String,
        #[arg(long)]
        h: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// Recompute every entry and construction in a corpus directory.
    Run {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
}

pub const DEFAULT_MAX_LEN: usize = 10;
pub const DEFAULT_EIG_LEN: usize = 2;
pub const DEFAULT_DEPTH: usize = 2;

/// A command result: the report object and whether the checked property held.
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Outcome {
        Outcome { value, ok: true }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, err) {
        Ok(outcome) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&outcome.value).expect("serializable") + "\n"
            } else {
                render::text(&outcome.value)
            };
            let _ = write!(out, "{text}");
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

impl Cli {
    pub fn budget(&self, f: &Endomorphism, file: &BudgetFile) -> FixedSearchBudget {
        let max_len = self.max_len.or(file.max_len).unwrap_or(DEFAULT_MAX_LEN);
        let mut b = FixedSearchBudget::for_map(f, max_len).with_eigenvalue_len(
            self.eig_len
                .or(file.eigenvalue_len)
                .unwrap_or(DEFAULT_EIG_LEN),
        );
        if let Some(cap) = self.disp_cap.or(file.displacement_cap) {
            b = b.with_cap(cap);
        }
        b
    }

    fn depth(&self) -> usize {
        self.depth.unwrap_or(DEFAULT_DEPTH)
    }
}

fn parse_words(ws: &[String], rank: usize) -> Result<Vec<Word>, CliError> {
    files::words(ws, rank)
}

fn strings(ws: &[Word]) -> Vec<String> {
    ws.iter().map(Word::to_string).collect()
}

/// `<x, y, ...>`, or `1` for the trivial subgroup.
pub fn subgroup_text(g: &SubgroupGraph) -> String {
    if g.is_trivial() {
        "1".into()
    } else {
        format!("<{}>", strings(&g.basis()).join(", "))
    }
}

pub(crate) fn graph_json(g: &SubgroupGraph) -> Value {
    json!({
        "subgroup": subgroup_text(g),
        "rank": g.rank(),
        "generators": strings(&g.basis()),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
    })
}

pub(crate) fn fixed_json(f: &Endomorphism, fixed: &FixedSubgroup) -> Value {
    json!({
        "map": f.to_string(),
        "automorphism": f.is_automorphism(),
        "budget": fixed.budget,
        "completeness": fixed.completeness,
        "fix": graph_json(&fixed.graph),
        "history": fixed.history,
        "stats": fixed.stats,
        "warnings": fixed.warnings,
    })
}

pub(crate) fn report_json(r: &Report) -> Value {
    serde_json::to_value(r).expect("serializable")
}

fn verdict_ok(r: &Report) -> bool {
    r.verdict != Verdict::Fail
}

fn load_map(cli: &Cli, path: &Path) -> Result<(Endomorphism, FixedSearchBudget), CliError> {
    let (f, file) = read_map(path)?;
    let b = cli.budget(&f, &file);
    Ok((f, b))
}

fn records_json(records: &[EigengroupRecord]) -> Value {
    Value::Array(
        records
            .iter()
            .map(|r| {
                json!({
                    "eigenvalue": r.eigenvalue.to_string(),
                    "rank": r.fixed.graph.rank(),
                    "generators": strings(&r.fixed.graph.basis()),
                    "completeness": r.fixed.completeness,
                })
            })
            .collect(),
    )
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Reduce { rank, word } => {
            let w = Word::parse(word, *rank)?;
            let (core, conj) = w.cyclic_reduce();
            let root = w.root().ok();
            Ok(Outcome::ok(json!({
                "reduced": w.to_string(),
                "length": w.len(),
                "cyclic_core": core.to_string(),
                "conjugator": conj.to_string(),
                "root": root.as_ref().map(|(r, _)| r.to_string()),
                "exponent": root.map(|(_, e)| e),
            })))
        }
        Command::Fold {
            rank,
            generators,
            dot,
        } => {
            let g = fold(&parse_words(generators, *rank)?, *rank)?;
            let mut v = graph_json(&g);
            if *dot {
                v["dot"] = Value::String(g.to_dot());
            }
            Ok(Outcome::ok(v))
        }
        Command::Member { subgroup, word } => {
            let g = fold(&parse_words(&subgroup.gens, subgroup.rank)?, subgroup.rank)?;
            let w = Word::parse(word, subgroup.rank)?;
            let spelled = g.spell(&w);
            Ok(Outcome::ok(json!({
                "word": w.to_string(),
                "member": spelled.is_some(),
                "in_basis": spelled.map(|s| s.to_string()),
                "basis": strings(&g.basis()),
            })))
        }
        Command::Intersect { rank, h, k } => {
            let h = fold(&parse_words(h, *rank)?, *rank)?;
            let k = fold(&parse_words(k, *rank)?, *rank)?;
            let p = pullback(&h, &k)?;
            let comps: Vec<Value> = p
                .components
                .iter()
                .map(|c| {
                    json!({
                        "rank": c.graph.rank(),
                        "generators": strings(&c.graph.basis()),
                        "coset_witness": c.coset_witness.to_string(),
                        "based": c.based,
                    })
                })
                .collect();
            Ok(Outcome::ok(
                json!({ "intersection": graph_json(&p.intersection), "components": comps }),
            ))
        }
        Command::Apply { map, words } => {
            let (f, _) = read_map(map)?;
            let images = words
                .iter()
                .map(|w| Ok(json!({ "word": w, "image": f.apply(&Word::parse(w, f.rank())?)?.to_string() })))
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Outcome::ok(
                json!({ "map": f.to_string(), "images": images }),
            ))
        }
        Command::InvertAuto { map } => {
            let (f, _) = read_map(map)?;
            match f.invert() {
                Ok(g) => Ok(Outcome::ok(
                    json!({ "automorphism": true, "inverse": MapFile::from_map(&g) }),
                )),
                Err(freefix::Error::NotAutomorphism) => Ok(Outcome {
                    value: json!({ "automorphism": false }),
                    ok: false,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Fix { map } => {
            let (f, b) = load_map(cli, map)?;
            Ok(Outcome::ok(fixed_json(&f, &fixed_subgroup(&f, &b))))
        }
        Command::Eigengroups { map } => {
            let (f, b) = load_map(cli, map)?;
            let records = eigengroup_scan(&f, &b)?;
            Ok(Outcome::ok(
                json!({ "budget": b, "records": records_json(&records) }),
            ))
        }
        Command::Isogredience { map } => {
            let (f, b) = load_map(cli, map)?;
            let records = eigengroup_scan(&f, &b)?;
            let p = isogredience_partition(&records, &f);
            let classes: Vec<Value> = p
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "rank": c.rank,
                        "eigenvalues": c.records.iter().map(|&i| records[i].eigenvalue.to_string()).collect::<Vec<_>>(),
                        "representative_fix": strings(&records[c.records[0]].fixed.graph.basis()),
                        "witnesses": c.witnesses,
                    })
                })
                .collect();
            let all_verified = p
                .classes
                .iter()
                .all(|c| c.witnesses.iter().all(|w| w.verified));
            Ok(Outcome {
                value: json!({
                    "budget": b,
                    "classes": classes,
                    "cyclic_eigenvalues": p.cyclic.iter().map(|&i| records[i].eigenvalue.to_string()).collect::<Vec<_>>(),
                }),
                ok: all_verified,
            })
        }
        Command::BhCheck { map } => {
            let (f, b) = load_map(cli, map)?;
            let r = bh_report(&f, &b)?;
            Ok(Outcome {
                ok: r.ok(),
                value: json!({ "budget": b, "report": r }),
            })
        }
        Command::Check(c) => check(cli, c),
        Command::Ffs(c) => ffs(cli, c),
        Command::Construct(c) => construct(cli, c),
        Command::Verify(c) => verify(cli, c),
        Command::Corpus(CorpusCommand::Run { dir }) => corpus::run_corpus(cli, dir, err),
    }
}

fn subgroup(s: &SubgroupArgs) -> Result<SubgroupGraph, CliError> {
    Ok(fold(&parse_words(&s.gens, s.rank)?, s.rank)?)
}

fn check(cli: &Cli, c: &CheckCommand) -> Result<Outcome, CliError> {
    match c {
        CheckCommand::Pure { subgroup: s, bound } => {
            let g = subgroup(s)?;
            Ok(match purity_check(&g, *bound) {
                Purity::PureUpTo(b) => Outcome::ok(json!({ "pure": true, "bound": b })),
                Purity::Impure { witness, exponent } => Outcome {
                    value: json!({ "pure": false, "witness": witness.to_string(), "exponent": exponent }),
                    ok: false,
                },
            })
        }
        CheckCommand::Inert {
            subgroup: s,
            trials,
            gen_len,
        } => {
            let g = subgroup(s)?;
            let r = inertia_sample(&g, *trials, *gen_len, cli.seed);
            Ok(Outcome {
                ok: r.inert(),
                value: serde_json::to_value(&r).expect("serializable"),
            })
        }
        CheckCommand::CosetBound {
            subgroup: s,
            element,
            conjugators,
        } => {
            let g = subgroup(s)?;
            let h = Word::parse(element, s.rank)?;
            let us = parse_words(conjugators, s.rank)?;
            let r = coset_displacement_check(&g, &h, &us)?;
            Ok(Outcome {
                ok: r.holds(),
                value: serde_json::to_value(&r).expect("serializable"),
            })
        }
    }
}

fn ffs(cli: &Cli, c: &FfsCommand) -> Result<Outcome, CliError> {
    let load = |p: &PathBuf| -> Result<_, CliError> { read::<SystemFile>(p)?.build() };
    match c {
        FfsCommand::Cx { system } => {
            let s = load(system)?;
            Ok(Outcome::ok(
                json!({ "complexity": s.complexity().to_string(), "classes": s.classes().len() }),
            ))
        }
        FfsCommand::Leq { first, second } => {
            let (a, b) = (load(first)?, load(second)?);
            let witnesses: Vec<Value> = a
                .classes()
                .iter()
                .map(|h| {
                    let found = b
                        .classes()
                        .iter()
                        .find_map(|k| class_leq(h, k).ok().flatten());
                    json!(found.map(|w| w.to_string()))
                })
                .collect();
            Ok(Outcome::ok(
                json!({ "leq": system_leq(&a, &b)?, "conjugators": witnesses }),
            ))
        }
        FfsCommand::Wedge { first, second } => {
            let mut w = wedge(&load(first)?, &load(second)?)?;
            let verified = w.verify(3, cli.depth());
            Ok(Outcome::ok(json!({
                "wedge": SystemFile::from_system(&w),
                "complexity": w.complexity().to_string(),
                "verified_free_factor_system": verified,
            })))
        }
        FfsCommand::Invariant { system, map } => {
            let s = load(system)?;
            let (f, _) = read_map(map)?;
            let r = invariant_check(&s, &f)?;
            Ok(Outcome {
                ok: r.invariant(),
                value: json!({ "invariant": r.invariant(), "classes": r.classes }),
            })
        }
        FfsCommand::IsFreeFactor { subgroup: s } => {
            let g = subgroup(s)?;
            Ok(Outcome::ok(match free_factor_test(&g, cli.depth()) {
                FreeFactorVerdict::Yes {
                    automorphism,
                    generators,
                } => json!({
                    "verdict": "yes",
                    "automorphism": MapFile::from_map(&automorphism),
                    "coordinates": generators,
                }),
                FreeFactorVerdict::No { reason } => json!({ "verdict": "no", "reason": reason }),
                FreeFactorVerdict::Unknown => json!({ "verdict": "unknown", "depth": cli.depth() }),
            }))
        }
    }
}

fn construct(cli: &Cli, c: &ConstructCommand) -> Result<Outcome, CliError> {
    let built = |f: Endomorphism| -> Outcome {
        Outcome::ok(json!({ "map": MapFile::from_map(&f), "text": f.to_string() }))
    };
    match c {
        ConstructCommand::Extend { map, rank, extra } => {
            let (f, _) = read_map(map)?;
            let extra = extra.as_ref().map(|e| parse_words(e, *rank)).transpose()?;
            Ok(built(extend_trivially(&f, *rank, extra.as_deref())?))
        }
        ConstructCommand::Product { first, second } => {
            let (a, _) = read_map(first)?;
            let (b, _) = read_map(second)?;
            Ok(built(free_product_auto(&a, &b)?))
        }
        ConstructCommand::Stable { map, h, h_prime, r } => {
            let (f, _) = read_map(map)?;
            let n = f.rank();
            Ok(built(stable_letter_extend(
                &f,
                &Word::parse(h, n)?,
                &Word::parse(h_prime, n)?,
                *r,
            )?))
        }
        ConstructCommand::GoodR {
            map,
            h,
            h_prime,
            from,
            to,
        } => {
            let (f, _) = read_map(map)?;
            let n = f.rank();
            let max_len = cli.max_len.unwrap_or(DEFAULT_MAX_LEN);
            let rs = find_good_r(
                &f,
                &Word::parse(h, n)?,
                &Word::parse(h_prime, n)?,
                *from..=*to,
                max_len,
            )?;
            let bad: Vec<i64> = rs.iter().filter(|g| !g.good).map(|g| g.r).collect();
            Ok(Outcome::ok(
                json!({ "max_len": max_len, "results": rs, "bad": bad }),
            ))
        }
    }
}

fn verify(cli: &Cli, c: &VerifyCommand) -> Result<Outcome, CliError> {
    let from_report = |r: Report| Outcome {
        ok: verdict_ok(&r),
        value: report_json(&r),
    };
    match c {
        VerifyCommand::Mainconnex { map, case } => {
            let (f, b) = load_map(cli, map)?;
            let case = read::<CaseFile>(case)?.build()?;
            let r = verify_mainconnex(&f, &case, &b)?;
            let mut out = from_report(r);
            out.value["case"] = json!(case.tag());
            Ok(out)
        }
        VerifyCommand::Cormain {
            map,
            certificate: Some(cert),
        } => {
            let (f, b) = load_map(cli, map)?;
            let cert = read::<CertificateFile>(cert)?.build()?;
            Ok(from_report(verify_cormain(&f, &cert, &b)?))
        }
        VerifyCommand::Cormain {
            map,
            certificate: None,
        } => {
            let (f, b) = load_map(cli, map)?;
            Ok(match certificate_search(&f, &b)? {
                CertificateSearch::Found(cert, report) => Outcome::ok(json!({
                    "search": "found",
                    "certificate": CertificateFile::from_certificate(&cert),
                    "report": report_json(&report),
                })),
                CertificateSearch::Unknown { candidates } => Outcome::ok(
                    json!({ "search": "unknown", "candidates": candidates, "budget": b }),
                ),
            })
        }
        VerifyCommand::CollinsTurner {
            map,
            h_gens,
            y,
            h,
            r,
        } => {
            let (f, b) = load_map(cli, map)?;
            let n = f.rank();
            let clause = match (h, r) {
                (Some(h), Some(r)) => CollinsTurnerClause::II {
                    h: Word::parse(h, n)?,
                    r: *r,
                },
                (None, None) => CollinsTurnerClause::I,
                _ => return Err(CliError::Usage("--h and --r go together".into())),
            };
            let r = collins_turner_check(
                &f,
                &parse_words(h_gens, n)?,
                &Word::parse(y, n)?,
                &clause,
                &b,
            )?;
            Ok(from_report(r))
        }
        VerifyCommand::Imagey { map, h_gens, y, h } => {
            let (f, _) = read_map(map)?;
            let n = f.rank();
            let g = fold(&parse_words(h_gens, n)?, n)?;
            Ok(Outcome::ok(imagey_json(&imagey_solve(
                &f,
                &g,
                &Word::parse(y, n)?,
                &Word::parse(h, n)?,
            )?)))
        }
    }
}

pub(crate) fn imagey_json(o: &ImageyOutcome) -> Value {
    match o {
        ImageyOutcome::Solved { h_prime } => {
            json!({ "outcome": "solved", "h_prime": h_prime.to_string() })
        }
        ImageyOutcome::NotFixed {
            image,
            h_prime_candidate,
        } => json!({
            "outcome": "not-fixed",
            "image": image.to_string(),
            "h_prime_candidate": h_prime_candidate.to_string(),
        }),
        ImageyOutcome::Contradiction { h_image, reason } => json!({
            "outcome": "contradiction",
            "h_image": h_image.to_string(),
            "reason": reason,
        }),
    }
}
