//! Endomorphisms of free groups, acting on the right: `compose(f, g)` applies
//! `f` first, then `g`, so `x ↦ ((x)f)g`.

mod abelian;
mod whitehead;

use std::fmt;
use std::sync::OnceLock;

pub use abelian::{ab_matrix, ab_solve, is_primitive_abelianized, smith_invariants, AbelianMatrix};
pub use whitehead::{random_automorphism, whitehead_moves};

use crate::error::{ensure_rank, Error, Result};
use crate::stallings::{fold, fold_traced, SubgroupGraph};
use crate::word::Word;

#[derive(Clone, Debug)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
    auto: OnceLock<bool>,
}

impl PartialEq for Endomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.images == other.images
    }
}

impl Eq for Endomorphism {}

impl Endomorphism {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Endomorphism> {
        if images.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: images.len(),
            });
        }
        for w in &images {
            ensure_rank(rank, w.rank())?;
        }
        Ok(Endomorphism {
            rank,
            images,
            auto: OnceLock::new(),
        })
    }

    /// Parses one image word per generator.
    pub fn parse(rank: usize, images: &[&str]) -> Result<Endomorphism> {
        let images = images
            .iter()
            .map(|s| Word::parse(s, rank))
            .collect::<Result<Vec<_>>>()?;
        Endomorphism::new(rank, images)
    }

    pub fn identity(rank: usize) -> Endomorphism {
        let images = (1..=rank)
            .map(|i| Word::generator(rank, i).expect("in range"))
            .collect();
        Endomorphism {
            rank,
            images,
            auto: OnceLock::from(true),
        }
    }

    /// `a_i ↦ a_i⁻¹` for every generator.
    pub fn inversion(rank: usize) -> Endomorphism {
        let images = (1..=rank)
            .map(|i| Word::generator(rank, i).expect("in range").inverse())
            .collect();
        Endomorphism {
            rank,
            images,
            auto: OnceLock::from(true),
        }
    }

    /// `γ_y : x ↦ y⁻¹ x y`.
    pub fn inner(y: &Word) -> Endomorphism {
        let rank = y.rank();
        let yi = y.inverse();
        let images = (1..=rank)
            .map(|i| yi.mul(&Word::generator(rank, i).expect("in range")).mul(y))
            .collect();
        Endomorphism {
            rank,
            images,
            auto: OnceLock::from(true),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of generator `i` (numbered from 1).
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        ensure_rank(self.rank, w.rank())?;
        w.substitute(&self.images)
    }

    /// Applies `self` and then `g`.
    pub fn compose(&self, g: &Endomorphism) -> Result<Endomorphism> {
        ensure_rank(self.rank, g.rank)?;
        let images = self
            .images
            .iter()
            .map(|w| g.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism {
            rank: self.rank,
            images,
            auto: OnceLock::new(),
        })
    }

    /// `φγ_y`: apply `self`, then conjugate by `y`.
    pub fn twist(&self, y: &Word) -> Result<Endomorphism> {
        ensure_rank(self.rank, y.rank())?;
        let yi = y.inverse();
        let images = self.images.iter().map(|w| yi.mul(w).mul(y)).collect();
        let auto = OnceLock::new();
        if let Some(&a) = self.auto.get() {
            let _ = auto.set(a);
        }
        Ok(Endomorphism {
            rank: self.rank,
            images,
            auto,
        })
    }

    /// `self` composed with itself `k` times (`k = 0` gives the identity).
    pub fn power(&self, k: usize) -> Endomorphism {
        let mut out = Endomorphism::identity(self.rank);
        for _ in 0..k {
            out = out.compose(self).expect("same rank");
        }
        out
    }

    /// Surjectivity test; free groups of finite rank are Hopfian, so this
    /// decides bijectivity.
    pub fn is_automorphism(&self) -> bool {
        *self.auto.get_or_init(|| {
            fold(&self.images, self.rank)
                .map(|g| g.is_full())
                .unwrap_or(false)
        })
    }

    pub fn invert(&self) -> Result<Endomorphism> {
        if !self.is_automorphism() {
            return Err(Error::NotAutomorphism);
        }
        let traced = fold_traced(&self.images, self.rank)?;
        let images = (1..=self.rank)
            .map(|i| {
                let g = Word::generator(self.rank, i).expect("in range");
                traced.spell(&g).ok_or(Error::NotAutomorphism)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism {
            rank: self.rank,
            images,
            auto: OnceLock::from(true),
        })
    }

    /// The restriction to an invariant subgroup, written in the coordinates
    /// of `h.basis()`. Returns the restriction and that basis.
    pub fn restrict(&self, h: &SubgroupGraph) -> Result<(Endomorphism, Vec<Word>)> {
        ensure_rank(self.rank, h.ambient_rank())?;
        let basis = h.basis();
        let mut images = Vec::with_capacity(basis.len());
        for b in &basis {
            let img = self.apply(b)?;
            match h.spell(&img) {
                Some(c) => images.push(c),
                None => {
                    return Err(Error::NotInvariant(format!(
                        "image {img} of basis element {b} leaves the subgroup"
                    )))
                }
            }
        }
        let image_words: Vec<Word> = basis.iter().map(|b| self.apply(b)).collect::<Result<_>>()?;
        if !fold(&image_words, self.rank)?.same_subgroup(h) {
            return Err(Error::NotInvariant(
                "the images do not generate the whole subgroup".into(),
            ));
        }
        let r = basis.len();
        Ok((Endomorphism::new(r, images)?, basis))
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match crate::word::Letter::generator(i + 1).to_char() {
                Some(c) => write!(f, "{c} -> {w}")?,
                None => write!(f, "x{} -> {w}", i + 1)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    fn example_six() -> Endomorphism {
        Endomorphism::parse(6, &["a", "ab", "dc", "dcd", "BabCDcde", "bfb"]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = example_six();
        assert_eq!(f.apply(&w("b", 6)).unwrap(), w("ab", 6));
        let h = w("BabCDcd", 6);
        assert_eq!(f.apply(&h).unwrap(), h);
        assert!(f.apply(&w("a", 5)).is_err());
    }

    #[test]
    fn inner_and_twist() {
        let g = Endomorphism::inner(&w("a", 2));
        assert_eq!(g.apply(&w("b", 2)).unwrap(), w("Aba", 2));
        let f = Endomorphism::parse(2, &["ab", "b"]).unwrap();
        let y = w("bA", 2);
        assert_eq!(
            f.twist(&y).unwrap(),
            f.compose(&Endomorphism::inner(&y)).unwrap()
        );
    }

    #[test]
    fn automorphism_detection() {
        assert!(example_six().is_automorphism());
        assert!(!Endomorphism::parse(2, &["a", "a"])
            .unwrap()
            .is_automorphism());
        assert!(!Endomorphism::parse(1, &["aa"]).unwrap().is_automorphism());
    }

    #[test]
    fn inversion_examples() {
        let f = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        assert_eq!(
            f.invert().unwrap(),
            Endomorphism::parse(2, &["a", "Ab"]).unwrap()
        );
        let y = w("abC", 3);
        assert_eq!(
            Endomorphism::inner(&y).invert().unwrap(),
            Endomorphism::inner(&y.inverse())
        );
        let f = example_six();
        let g = f.invert().unwrap();
        assert_eq!(f.compose(&g).unwrap(), Endomorphism::identity(6));
        assert_eq!(g.compose(&f).unwrap(), Endomorphism::identity(6));
        assert_eq!(
            Endomorphism::parse(2, &["a", "a"]).unwrap().invert(),
            Err(Error::NotAutomorphism)
        );
    }

    #[test]
    fn restriction_examples() {
        let f = example_six();
        let ab = fold(&[w("a", 6), w("b", 6)], 6).unwrap();
        let (r, basis) = f.restrict(&ab).unwrap();
        assert_eq!(basis, vec![w("a", 6), w("b", 6)]);
        assert_eq!(r, Endomorphism::parse(2, &["a", "ab"]).unwrap());
        let cd = fold(&[w("c", 6), w("d", 6)], 6).unwrap();
        let (r, _) = f.restrict(&cd).unwrap();
        assert_eq!(r, Endomorphism::parse(2, &["ba", "bab"]).unwrap());
        let e = fold(&[w("e", 6)], 6).unwrap();
        assert!(matches!(f.restrict(&e), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn powers() {
        let f = Endomorphism::parse(2, &["a", "ab"]).unwrap();
        assert_eq!(f.power(3).image(2), &w("aaab", 2));
        assert_eq!(f.power(0), Endomorphism::identity(2));
    }
}
