//! Words in a free group `F_r` and their preprocessing.
//!
//! Text syntax: lowercase `a..z` are the generators `x_1..x_26`, uppercase
//! letters their inverses, so `aBAb` is `x_1 x_2^{-1} x_1^{-1} x_2`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unexpected character {ch:?} at position {pos} (expected a-z or A-Z)")]
    BadCharacter { ch: char, pos: usize },
    #[error("generator x_{needed} is outside the rank {rank}")]
    RankTooSmall { needed: usize, rank: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    /// 0-based generator index.
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.generator as u8) as char
    }
}

/// An arbitrary, possibly unreduced, word of `F_r`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    letters: Vec<Letter>,
    rank: usize,
}

impl Word {
    pub fn new(letters: Vec<Letter>, rank: usize) -> Result<Self, WordError> {
        if let Some(l) = letters.iter().find(|l| l.generator >= rank) {
            return Err(WordError::RankTooSmall { needed: l.generator + 1, rank });
        }
        Ok(Word { letters, rank })
    }

    /// Parses the letter syntax; the rank defaults to the largest generator used.
    pub fn parse(text: &str, rank: Option<usize>) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            let letter = match ch {
                'a'..='z' => Letter::new(ch as usize - 'a' as usize, false),
                'A'..='Z' => Letter::new(ch as usize - 'A' as usize, true),
                _ => return Err(WordError::BadCharacter { ch, pos }),
            };
            letters.push(letter);
        }
        let used = letters.iter().map(|l| l.generator + 1).max().unwrap_or(0);
        let rank = rank.unwrap_or(used.max(1));
        Self::new(letters, rank)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
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

    /// `|w|_f`: occurrences of generator `f` with either sign.
    pub fn occurrences(&self, generator: usize) -> usize {
        self.letters.iter().filter(|l| l.generator == generator).count()
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out, rank: self.rank }
    }

    fn cyclic_reduce(&self) -> Word {
        let mut w = self.free_reduce().letters;
        let mut start = 0;
        let mut end = w.len();
        while end - start >= 2 && w[start] == w[end - 1].inverted() {
            start += 1;
            end -= 1;
        }
        w = w[start..end].to_vec();
        Word { letters: w, rank: self.rank }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// A nonempty, freely and cyclically reduced word in which every generator
/// `0..rank` occurs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReducedWord {
    word: Word,
}

impl ReducedWord {
    pub fn as_word(&self) -> &Word {
        &self.word
    }

    pub fn letters(&self) -> &[Letter] {
        &self.word.letters
    }

    pub fn rank(&self) -> usize {
        self.word.rank
    }

    /// `l(w)`.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn occurrences(&self, generator: usize) -> usize {
        self.word.occurrences(generator)
    }

    pub fn max_occurrences(&self) -> usize {
        (0..self.rank()).map(|f| self.occurrences(f)).max().unwrap_or(0)
    }

    /// Cyclic rotation starting at letter `by`; still cyclically reduced.
    pub fn rotate(&self, by: usize) -> ReducedWord {
        let mut letters = self.word.letters.clone();
        let len = letters.len();
        letters.rotate_left(by % len);
        ReducedWord { word: Word { letters, rank: self.word.rank } }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WordClass {
    Identity,
    /// Some generator occurs exactly once; the word map is then measure
    /// preserving and every nontrivial expected character vanishes.
    PrimitiveDetected,
    ProperPower { root: ReducedWord, exponent: usize },
    Generic,
}

impl WordClass {
    pub fn name(&self) -> &'static str {
        match self {
            WordClass::Identity => "identity",
            WordClass::PrimitiveDetected => "primitive-detected",
            WordClass::ProperPower { .. } => "proper-power",
            WordClass::Generic => "generic",
        }
    }
}

/// Freely and cyclically reduces, classifies, drops unused generators
/// (relabelling the rest in increasing order) and rotates to the
/// lexicographically least rotation.
///
/// Returns `None` for the word when it reduces to the identity.
pub fn preprocess_word(word: &Word) -> (Option<ReducedWord>, WordClass) {
    let reduced = word.cyclic_reduce();
    if reduced.is_empty() {
        return (None, WordClass::Identity);
    }
    let mut relabel = vec![usize::MAX; reduced.rank];
    for l in &reduced.letters {
        relabel[l.generator] = 0;
    }
    let mut next = 0;
    for slot in relabel.iter_mut().filter(|s| **s == 0) {
        *slot = next;
        next += 1;
    }
    let letters: Vec<Letter> = reduced
        .letters
        .iter()
        .map(|l| Letter::new(relabel[l.generator], l.inverse))
        .collect();
    let canonical = least_rotation(&letters);
    let w = ReducedWord { word: Word { letters: canonical, rank: next } };

    let len = w.len();
    let period = (1..=len)
        .find(|&p| len.is_multiple_of(p) && (0..len).all(|i| w.letters()[i] == w.letters()[(i + p) % len]))
        .expect("len is a period");
    let class = if period < len {
        let root = ReducedWord {
            word: Word { letters: w.letters()[..period].to_vec(), rank: next },
        };
        WordClass::ProperPower { root, exponent: len / period }
    } else if (0..next).any(|f| w.occurrences(f) == 1) {
        WordClass::PrimitiveDetected
    } else {
        WordClass::Generic
    };
    (Some(w), class)
}

fn least_rotation(letters: &[Letter]) -> Vec<Letter> {
    (0..letters.len())
        .map(|r| {
            let mut v = letters.to_vec();
            v.rotate_left(r);
            v
        })
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pre(s: &str) -> (Option<ReducedWord>, WordClass) {
        preprocess_word(&Word::parse(s, None).unwrap())
    }

    #[test]
    fn identity_detection() {
        assert_eq!(pre("aA").1, WordClass::Identity);
        assert_eq!(pre("abBA").1, WordClass::Identity);
        assert_eq!(pre("").1, WordClass::Identity);
        assert_eq!(pre("baAB").1, WordClass::Identity);
    }

    #[test]
    fn commutator_is_generic() {
        let (w, class) = pre("abAB");
        let w = w.unwrap();
        assert_eq!(class, WordClass::Generic);
        assert_eq!(w.len(), 4);
        assert_eq!((w.occurrences(0), w.occurrences(1)), (2, 2));
    }

    #[test]
    fn proper_powers() {
        match pre("abab").1 {
            WordClass::ProperPower { root, exponent } => {
                assert_eq!(root.to_string(), "ab");
                assert_eq!(exponent, 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(pre("aa").1, WordClass::ProperPower { exponent: 2, .. }));
        assert!(matches!(pre("ABAB").1, WordClass::ProperPower { exponent: 2, .. }));
        // conjugates of powers are powers after cyclic reduction
        assert!(matches!(pre("cababC").1, WordClass::ProperPower { exponent: 2, .. }));
    }

    #[test]
    fn appears_once_shortcut() {
        assert_eq!(pre("ab").1, WordClass::PrimitiveDetected);
        assert_eq!(pre("aab").1, WordClass::PrimitiveDetected);
        // primitive but every generator occurs twice: not detected
        assert_eq!(pre("ababb").1, WordClass::Generic);
    }

    #[test]
    fn reduction_relabel_and_rotation() {
        let (w, _) = pre("cXcXX");
        let w = w.unwrap();
        assert_eq!(w.rank(), 2);
        assert_eq!(w.to_string(), "aBaBB");
        // least rotation under (generator, inverse) order
        assert_eq!(pre("bAbaBa").0.unwrap().to_string(), "abAbaB");
        let (a, _) = pre("abAB");
        let (b, _) = pre("ABab");
        assert_eq!(a, b);
    }

    #[test]
    fn parse_errors_and_display() {
        assert!(matches!(Word::parse("aA(", None), Err(WordError::BadCharacter { ch: '(', pos: 2 })));
        assert!(Word::parse("ac", Some(2)).is_err());
        let w = Word::parse("aBAb", None).unwrap();
        assert_eq!(w.to_string(), "aBAb");
        assert_eq!(w.rank(), 2);
        assert_eq!(Word::parse("aAbB", None).unwrap().free_reduce().len(), 0);
    }
}
