//! Reduced words in a free group of finite rank.
//!
//! Generators are numbered from 1. In text a generator is a lowercase letter
//! (`a` = 1, `b` = 2, ...), its inverse the matching uppercase letter, and the
//! identity is written `1`. Whitespace is ignored.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::{ensure_rank, Error, Result};

/// Largest rank that has a textual letter for every generator.
pub const MAX_TEXT_RANK: usize = 26;

/// A generator or the inverse of a generator, stored as a nonzero signed index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Letter {
        assert!(index >= 1, "generator indices start at 1");
        let v = index as i32;
        Letter(if inverse { -v } else { v })
    }

    pub fn generator(index: usize) -> Letter {
        Letter::new(index, false)
    }

    pub fn from_signed(v: i32) -> Option<Letter> {
        (v != 0).then_some(Letter(v))
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    /// Position in the per-vertex edge table: `a, A, b, B, ...`.
    pub(crate) fn slot(self) -> usize {
        2 * (self.index() - 1) + usize::from(self.is_inverse())
    }

    pub(crate) fn from_slot(slot: usize) -> Letter {
        Letter::new(slot / 2 + 1, slot % 2 == 1)
    }

    pub fn to_char(self) -> Option<char> {
        let i = self.index();
        if i > MAX_TEXT_RANK {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + (i - 1) as u8) as char)
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter::new((c as u8 - b'a') as usize + 1, false)),
            'A'..='Z' => Some(Letter::new((c as u8 - b'A') as usize + 1, true)),
            _ => None,
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `a < A < b < B < ...`
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slot().cmp(&other.slot())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_char() {
            Some(c) => write!(f, "{c}"),
            None if self.is_inverse() => write!(f, "[X{}]", self.index()),
            None => write!(f, "[x{}]", self.index()),
        }
    }
}

/// A freely reduced word together with the rank of its ambient free group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Word> {
        if index == 0 || index > rank {
            return Err(Error::LetterOutOfRange { index, rank });
        }
        Ok(Word {
            rank,
            letters: vec![Letter::generator(index)],
        })
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I, rank: usize) -> Result<Word> {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if l.index() > rank {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank,
                });
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank, letters })
    }

    pub fn from_signed(rank: usize, raw: &[i32]) -> Result<Word> {
        let mut letters = Vec::with_capacity(raw.len());
        for &v in raw {
            let l = Letter::from_signed(v).ok_or_else(|| Error::Parse {
                input: format!("{raw:?}"),
                reason: "zero is not a letter".into(),
            })?;
            letters.push(l);
        }
        Word::reduce(letters, rank)
    }

    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let trimmed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if trimmed == "1" || trimmed.is_empty() {
            return Ok(Word::identity(rank));
        }
        let mut raw = Vec::with_capacity(trimmed.len());
        for c in trimmed.chars() {
            let l = Letter::from_char(c).ok_or_else(|| Error::Parse {
                input: text.to_string(),
                reason: format!("unexpected character {c:?}"),
            })?;
            raw.push(l);
        }
        Word::reduce(raw, rank)
    }

    /// Trusted constructor for letter sequences already known to be reduced.
    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        debug_assert!(letters.iter().all(|l| l.index() <= rank));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        ensure_rank(self.rank, other.rank)?;
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &Word) -> Word {
        debug_assert_eq!(self.rank, other.rank);
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub(crate) fn push(&mut self, l: Letter) {
        debug_assert!(l.index() <= self.rank);
        push_reduced(&mut self.letters, l);
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = Word::identity(self.rank);
        for _ in 0..exponent.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self^y = y⁻¹ · self · y`.
    pub fn conjugate(&self, y: &Word) -> Result<Word> {
        ensure_rank(self.rank, y.rank)?;
        Ok(y.inverse().mul(self).mul(y))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let core = Word::from_reduced(self.rank, self.letters[k..n - k].to_vec());
        let conjugator = Word::from_reduced(self.rank, self.letters[..k].to_vec());
        (core, conjugator)
    }

    /// Returns `(root, exponent)` with `self = root^exponent` and `root` not a proper power.
    pub fn root(&self) -> Result<(Word, usize)> {
        if self.is_identity() {
            return Err(Error::IdentityRoot);
        }
        let (core, conj) = self.cyclic_reduce();
        let n = core.len();
        let period = (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| (d..n).all(|i| core.letters[i] == core.letters[i - d]))
            .unwrap_or(n);
        let base = Word::from_reduced(self.rank, core.letters[..period].to_vec());
        let root = conj.mul(&base).mul(&conj.inverse());
        Ok((root, n / period))
    }

    pub fn is_proper_power(&self) -> bool {
        matches!(self.root(), Ok((_, e)) if e >= 2)
    }

    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for l in &self.letters {
            v[l.index() - 1] += i64::from(l.sign());
        }
        v
    }

    /// Reinterprets the word in a free group of rank `rank ≥ self.rank()`.
    pub fn embed(&self, rank: usize) -> Result<Word> {
        if let Some(l) = self.letters.iter().find(|l| l.index() > rank) {
            return Err(Error::LetterOutOfRange {
                index: l.index(),
                rank,
            });
        }
        Ok(Word {
            rank,
            letters: self.letters.clone(),
        })
    }

    /// Replaces generator `i` by `images[i - 1]` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        if images.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: images.len(),
            });
        }
        let target = images.first().map_or(0, |w| w.rank);
        for w in images {
            ensure_rank(target, w.rank)?;
        }
        let mut out = Word::identity(target);
        for l in &self.letters {
            let img = &images[l.index() - 1];
            if l.is_inverse() {
                for &x in img.letters.iter().rev() {
                    out.push(x.inverse());
                }
            } else {
                for &x in &img.letters {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    /// A word `y` with `self^y = other`, when the two are conjugate.
    pub fn conjugacy_witness(&self, other: &Word) -> Result<Option<Word>> {
        ensure_rank(self.rank, other.rank)?;
        let (z1, c1) = self.cyclic_reduce();
        let (z2, c2) = other.cyclic_reduce();
        if z1.len() != z2.len() {
            return Ok(None);
        }
        let n = z1.len();
        for k in 0..n.max(1) {
            let rotated = (0..n).all(|i| z2.letters[i] == z1.letters[(i + k) % n]);
            if rotated {
                let u = Word::from_reduced(self.rank, z1.letters[..k].to_vec());
                let y = c1.mul(&u).mul(&c2.inverse());
                debug_assert_eq!(&self.conjugate(&y).unwrap(), other);
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last() == Some(&l.inverse()) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by rank, then shortlex.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.shortlex_cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Panics on rank mismatch; use [`Word::concat`] for the checked version.
impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        Word::mul(self, rhs)
    }
}

/// All freely reduced words of length exactly `len`, in shortlex order.
pub fn words_of_length(rank: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fill_words(rank, len, &mut cur, &mut out);
    out
}

/// All freely reduced words of length at most `max_len`, in shortlex order.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|l| words_of_length(rank, l))
        .collect()
}

fn fill_words(rank: usize, len: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if cur.len() == len {
        out.push(Word::from_reduced(rank, cur.clone()));
        return;
    }
    for slot in 0..2 * rank {
        let l = Letter::from_slot(slot);
        if cur.last() == Some(&l.inverse()) {
            continue;
        }
        cur.push(l);
        fill_words(rank, len, cur, out);
        cur.pop();
    }
}

/// Calls `f` on every reduced word of length exactly `len`, in shortlex order,
/// until it returns `false`. Returns `false` if the walk was stopped.
pub fn visit_words_of_length<F: FnMut(&[Letter]) -> bool>(
    rank: usize,
    len: usize,
    f: &mut F,
) -> bool {
    let mut cur = Vec::with_capacity(len);
    visit_rec(rank, len, &mut cur, f)
}

fn visit_rec<F: FnMut(&[Letter]) -> bool>(
    rank: usize,
    len: usize,
    cur: &mut Vec<Letter>,
    f: &mut F,
) -> bool {
    if cur.len() == len {
        return f(cur);
    }
    for slot in 0..2 * rank {
        let l = Letter::from_slot(slot);
        if cur.last() == Some(&l.inverse()) {
            continue;
        }
        cur.push(l);
        let go = visit_rec(rank, len, cur, f);
        cur.pop();
        if !go {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, rank: usize) -> Word {
        Word::parse(s, rank).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("abB", 2).to_string(), "a");
        assert_eq!(w("aA", 1).to_string(), "1");
        assert_eq!(w("BabCDcd", 4).to_string(), "BabCDcd");
        assert_eq!(w(" a b\tB ", 2).to_string(), "a");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Word::parse("abc", 2),
            Err(Error::LetterOutOfRange { index: 3, rank: 2 })
        ));
        assert!(matches!(Word::parse("a2", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("ab", 2).concat(&w("Ba", 2)).unwrap().to_string(), "aa");
        assert_eq!(w("ab", 2).concat(&Word::identity(2)).unwrap(), w("ab", 2));
        assert_eq!(w("Ba", 2).concat(&w("b", 2)).unwrap().to_string(), "Bab");
        assert!(w("a", 1).concat(&w("a", 2)).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab", 2).inverse().to_string(), "BA");
        assert_eq!(Word::identity(3).inverse().to_string(), "1");
        assert_eq!(w("aabb", 2).inverse().to_string(), "BBAA");
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = w("Bab", 2).cyclic_reduce();
        assert_eq!(
            (core.to_string(), conj.to_string()),
            ("a".into(), "B".into())
        );
        let (core, conj) = w("aba", 2).cyclic_reduce();
        assert_eq!(
            (core.to_string(), conj.to_string()),
            ("aba".into(), "1".into())
        );
        // "Bab" still has inverse end letters, so reduction continues past it.
        let (core, conj) = w("CBabc", 3).cyclic_reduce();
        assert_eq!(
            (core.to_string(), conj.to_string()),
            ("a".into(), "CB".into())
        );
        let (core, conj) = w("a", 1).cyclic_reduce();
        assert_eq!(
            (core.to_string(), conj.to_string()),
            ("a".into(), "1".into())
        );
    }

    #[test]
    fn root_examples() {
        let (r, e) = w("aaaa", 1).root().unwrap();
        assert_eq!((r.to_string(), e), ("a".into(), 4));
        let (r, e) = w("abab", 2).root().unwrap();
        assert_eq!((r.to_string(), e), ("ab".into(), 2));
        let (r, e) = w("aabb", 2).root().unwrap();
        assert_eq!((r.to_string(), e), ("aabb".into(), 1));
        let (r, e) = w("Cababc", 3).root().unwrap();
        assert_eq!((r.to_string(), e), ("Cabc".into(), 2));
        assert_eq!(Word::identity(2).root(), Err(Error::IdentityRoot));
    }

    #[test]
    fn conjugacy_witnesses() {
        let a = w("a", 2);
        assert_eq!(a.conjugacy_witness(&w("Bab", 2)).unwrap(), Some(w("b", 2)));
        assert_eq!(a.conjugacy_witness(&w("b", 2)).unwrap(), None);
        let x = w("abAAb", 2);
        let y = w("bAb", 2);
        let c = x
            .conjugacy_witness(&x.conjugate(&y).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(x.conjugate(&c).unwrap(), x.conjugate(&y).unwrap());
        let e = Word::identity(2);
        assert_eq!(e.conjugacy_witness(&e).unwrap(), Some(e.clone()));
    }

    #[test]
    fn substitute_and_sums() {
        let x = w("aBa", 2);
        let imgs = [w("ab", 2), w("b", 2)];
        assert_eq!(x.substitute(&imgs).unwrap().to_string(), "aab");
        assert_eq!(w("ABab", 2).exponent_sums(), vec![0, 0]);
        assert_eq!(w("aabbc", 3).exponent_sums(), vec![2, 2, 1]);
    }

    #[test]
    fn word_counts() {
        // 2n(2n-1)^(l-1) reduced words of length l
        assert_eq!(words_of_length(2, 3).len(), 4 * 3 * 3);
        assert_eq!(words_up_to(3, 2).len(), 1 + 6 + 30);
        let ws = words_of_length(2, 2);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }
}
