//! JSON file formats read by the command line.

use std::fs;
use std::path::Path;

use freefix::constructions::{DecompositionCertificate, MainconnexCase};
use freefix::factor_systems::FreeFactorSystem;
use freefix::{Endomorphism, Word};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub rank: usize,
    pub images: Vec<String>,
}

impl MapFile {
    pub fn from_map(f: &Endomorphism) -> MapFile {
        MapFile {
            rank: f.rank(),
            images: f.images().iter().map(Word::to_string).collect(),
        }
    }

    pub fn build(&self) -> Result<Endomorphism, CliError> {
        let images = words(&self.images, self.rank)?;
        Ok(Endomorphism::new(self.rank, images)?)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BudgetFile {
    pub max_len: Option<usize>,
    pub displacement_cap: Option<usize>,
    pub eigenvalue_len: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassFile {
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub rank: usize,
    pub classes: Vec<ClassFile>,
}

impl SystemFile {
    pub fn build(&self) -> Result<FreeFactorSystem, CliError> {
        let classes = self
            .classes
            .iter()
            .map(|c| words(&c.generators, self.rank))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FreeFactorSystem::from_generators(self.rank, &classes)?)
    }

    pub fn from_system(s: &FreeFactorSystem) -> SystemFile {
        SystemFile {
            rank: s.ambient_rank(),
            classes: s
                .classes()
                .iter()
                .map(|c| ClassFile {
                    generators: c.basis().iter().map(Word::to_string).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub rank: usize,
    pub r: usize,
    pub s: usize,
    pub k_factors: Vec<Vec<String>>,
    pub y_letters: Vec<String>,
    #[serde(default)]
    pub l_generators: Vec<String>,
    pub w_elements: Vec<String>,
    pub h_elements: Vec<String>,
    pub h_prime_elements: Vec<String>,
}

impl CertificateFile {
    pub fn build(&self) -> Result<DecompositionCertificate, CliError> {
        let n = self.rank;
        if self.k_factors.len() != self.r || self.y_letters.len() != self.s {
            return Err(CliError::Usage(format!(
                "certificate declares r = {}, s = {} but lists {} factors and {} letters",
                self.r,
                self.s,
                self.k_factors.len(),
                self.y_letters.len()
            )));
        }
        Ok(DecompositionCertificate {
            rank: n,
            k_factors: self
                .k_factors
                .iter()
                .map(|k| words(k, n))
                .collect::<Result<_, _>>()?,
            y_letters: words(&self.y_letters, n)?,
            l_generators: words(&self.l_generators, n)?,
            w_elements: words(&self.w_elements, n)?,
            h_elements: words(&self.h_elements, n)?,
            h_prime_elements: words(&self.h_prime_elements, n)?,
        })
    }

    pub fn from_certificate(c: &DecompositionCertificate) -> CertificateFile {
        let s = |ws: &[Word]| ws.iter().map(Word::to_string).collect::<Vec<_>>();
        CertificateFile {
            rank: c.rank,
            r: c.r(),
            s: c.s(),
            k_factors: c.k_factors.iter().map(|k| s(k)).collect(),
            y_letters: s(&c.y_letters),
            l_generators: s(&c.l_generators),
            w_elements: s(&c.w_elements),
            h_elements: s(&c.h_elements),
            h_prime_elements: s(&c.h_prime_elements),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum CaseFile {
    #[serde(rename = "i")]
    I {
        rank: usize,
        h_generators: Vec<String>,
        k_generators: Vec<String>,
    },
    #[serde(rename = "ii")]
    II {
        rank: usize,
        h_generators: Vec<String>,
        k_generators: Vec<String>,
    },
    #[serde(rename = "iii")]
    III {
        rank: usize,
        h_generators: Vec<String>,
        y: String,
        h: String,
        h_prime: String,
    },
}

impl CaseFile {
    pub fn build(&self) -> Result<MainconnexCase, CliError> {
        Ok(match self {
            CaseFile::I {
                rank,
                h_generators,
                k_generators,
            } => MainconnexCase::I {
                h: words(h_generators, *rank)?,
                k: words(k_generators, *rank)?,
            },
            CaseFile::II {
                rank,
                h_generators,
                k_generators,
            } => MainconnexCase::II {
                h: words(h_generators, *rank)?,
                k: words(k_generators, *rank)?,
            },
            CaseFile::III {
                rank,
                h_generators,
                y,
                h,
                h_prime,
            } => MainconnexCase::III {
                h: words(h_generators, *rank)?,
                y: Word::parse(y, *rank)?,
                h_elt: Word::parse(h, *rank)?,
                h_prime: Word::parse(h_prime, *rank)?,
            },
        })
    }
}

/// Expected artifacts of a corpus entry; each is recomputed when run.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Expected {
    pub fix_generators: Option<Vec<String>>,
    pub fix_rank: Option<usize>,
    pub automorphism: Option<bool>,
    /// Certificate file, relative to the entry.
    pub certificate: Option<String>,
    /// Run the certificate search; the found certificate must pass and,
    /// when set, have some `h` element that is not fixed.
    pub certificate_search: Option<SearchExpectation>,
    #[serde(default)]
    pub cases: Vec<CaseRef>,
    pub refutation: Option<Refutation>,
    #[serde(default)]
    pub imagey: Vec<ImageyExpectation>,
    /// Eigengroup bound check over eigenvalues up to the entry's eigenvalue length.
    pub bh_ok: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchExpectation {
    pub some_h_unfixed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseRef {
    pub file: String,
    /// The map the case is about; defaults to the entry's map.
    pub map: Option<MapFile>,
    pub max_len: Option<usize>,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Refutation {
    pub rank: usize,
    pub generators: Vec<String>,
    pub image_len: usize,
    pub witness_len: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImageyExpectation {
    pub map: MapFile,
    pub h_generators: Vec<String>,
    pub y: String,
    pub h: String,
    /// `solved`, `not-fixed` or `contradiction`.
    pub outcome: String,
    pub h_prime: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub endomorphism: Option<MapFile>,
    #[serde(default)]
    pub budget: BudgetFile,
    #[serde(default)]
    pub expected: Expected,
}

/// A construction whose output map and fixed subgroup are rechecked.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    Extend {
        name: String,
        map: MapFile,
        rank: usize,
        extra: Option<Vec<String>>,
        fix_generators: Vec<String>,
    },
    Product {
        name: String,
        first: MapFile,
        second: MapFile,
        fix_generators: Vec<String>,
    },
    Stable {
        name: String,
        map: MapFile,
        h: String,
        h_prime: String,
        r: i64,
        result: MapFile,
    },
    GoodR {
        name: String,
        map: MapFile,
        h: String,
        h_prime: String,
        from: i64,
        to: i64,
        max_len: usize,
        bad: Vec<i64>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<String>,
    #[serde(default)]
    pub constructions: Vec<Construction>,
}

pub fn words(ws: &[String], rank: usize) -> Result<Vec<Word>, CliError> {
    ws.iter().map(|s| Ok(Word::parse(s, rank)?)).collect()
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_value(read_json(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Reads a map from either a bare `{rank, images}` file or a corpus entry,
/// together with the entry's budget if any.
pub fn read_map(path: &Path) -> Result<(Endomorphism, BudgetFile), CliError> {
    let value = read_json(path)?;
    let bad = |e: serde_json::Error| CliError::Usage(format!("{}: {e}", path.display()));
    if value.get("endomorphism").is_some() {
        let entry: CorpusEntry = serde_json::from_value(value).map_err(bad)?;
        let map = entry
            .endomorphism
            .ok_or_else(|| CliError::Usage(format!("{}: no endomorphism", path.display())))?;
        Ok((map.build()?, entry.budget))
    } else {
        let map: MapFile = serde_json::from_value(value).map_err(bad)?;
        Ok((map.build()?, BudgetFile::default()))
    }
}
