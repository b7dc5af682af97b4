//! Exact word arithmetic in free groups `F_k` and closed-surface groups
//! `pi_1(Sigma_g)`.
//!
//! A [`Word`] is always freely reduced; the constructors enforce it. Surface
//! groups (genus >= 2) use the one-relator presentation with relator
//! `[a_1,b_1]...[a_g,b_g]` and Dehn's algorithm for the word problem. The
//! genus-1 case is deliberately excluded here: torus classes are handled as
//! integer coordinate pairs by the geometry layer, since `pi_1(T)` is
//! abelian and Dehn's algorithm does not apply.
//!
//! Serialization grammar (documented contract, used by the CLI and report
//! files): a word is a concatenation of tokens `<letter><index>`, where the
//! letter is `x` for free-group generators and `a`/`b` for surface-group
//! generators, and an upper-case letter denotes the inverse. Examples:
//! `x1x2X1` in `F_2`, `a1b1A1B1` in a surface group. The empty word is
//! written `1` (the parser also accepts the empty string).

use std::fmt;

use crate::error::Error;
use crate::Result;

/// A single signed generator. `gen` is 1-based within the presentation rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    gen: u16,
    inv: bool,
}

impl Letter {
    pub fn new(gen: u16, inv: bool) -> Self {
        assert!(gen >= 1, "generator indices are 1-based");
        Letter { gen, inv }
    }

    /// 1-based generator index.
    pub fn gen(self) -> u16 {
        self.gen
    }

    pub fn is_inverse(self) -> bool {
        self.inv
    }

    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// A freely reduced word. Equality is letter-by-letter equality of the
/// reduced representative; for surface groups this is *not* group equality —
/// use [`Presentation::eq_in_group`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Freely reduce an arbitrary letter sequence (stack reduction).
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn single(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn concat(&self, other: &Word) -> Word {
        // Cancellation can only happen at the seam.
        let mut left = self.letters.clone();
        let mut i = 0;
        while let Some(&last) = left.last() {
            match other.letters.get(i) {
                Some(&next) if last.cancels(next) => {
                    left.pop();
                    i += 1;
                }
                _ => break,
            }
        }
        left.extend_from_slice(&other.letters[i..]);
        Word { letters: left }
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Split `w = conjugator * core * conjugator^-1` with `core` cyclically
    /// reduced (first and last letters are not inverse to each other).
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo].cancels(self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let conjugator = Word {
            letters: self.letters[..lo].to_vec(),
        };
        let core = Word {
            letters: self.letters[lo..hi].to_vec(),
        };
        (conjugator, core)
    }

    /// Signed exponent sum of a generator; used for abelianized checks.
    pub fn exponent_sum(&self, gen: u16) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen() == gen)
            .map(|l| l.sign())
            .sum()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}{}", if l.inv { "-" } else { "+" }, l.gen)?;
        }
        Ok(())
    }
}

/// Counting mode for [`count_subword`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CountMode {
    /// Starting positions in the reduced word itself.
    Linear,
    /// Starting positions in the cyclically reduced core, read cyclically
    /// (wrapping as many times as the pattern needs).
    CyclicCore,
}

/// Number of starting positions (overlaps allowed) at which `pattern`
/// occurs in `w`. Implemented with a prefix-function matcher; the brute
/// force position scan is kept as a test oracle only.
pub fn count_subword(w: &Word, pattern: &Word, mode: CountMode) -> Result<usize> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    match mode {
        CountMode::Linear => Ok(kmp_count(w.letters(), pattern.letters(), usize::MAX)),
        CountMode::CyclicCore => {
            let (_, core) = w.cyclic_reduce();
            Ok(cyclic_count(&core, pattern))
        }
    }
}

/// Cyclic occurrence count of `pattern` in an already cyclically reduced
/// `core`: starting positions in `0..core.len()`, reading the core as a
/// periodic sequence.
pub(crate) fn cyclic_count(core: &Word, pattern: &Word) -> usize {
    let n = core.len();
    if n == 0 {
        return 0;
    }
    // Unroll the core until every window starting in the first period fits.
    let reps = (n + pattern.len()).div_ceil(n);
    let mut unrolled = Vec::with_capacity(n * reps);
    for _ in 0..reps {
        unrolled.extend_from_slice(core.letters());
    }
    kmp_count(&unrolled, pattern.letters(), n)
}

/// Count matches of `pat` in `text` with starting position < `limit`.
fn kmp_count(text: &[Letter], pat: &[Letter], limit: usize) -> usize {
    let m = pat.len();
    debug_assert!(m > 0);
    let mut fail = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pat[i] != pat[k] {
            k = fail[k - 1];
        }
        if pat[i] == pat[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut count = 0;
    let mut q = 0;
    for (i, &c) in text.iter().enumerate() {
        while q > 0 && c != pat[q] {
            q = fail[q - 1];
        }
        if c == pat[q] {
            q += 1;
        }
        if q == m {
            let start = i + 1 - m;
            if start < limit {
                count += 1;
            }
            q = fail[q - 1];
        }
    }
    count
}

/// Group presentation: free of a given rank, or the standard one-relator
/// closed-surface presentation of genus >= 2 (rank `2g`, relator
/// `[a_1,b_1]...[a_g,b_g]`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Presentation {
    Free { rank: u16 },
    Surface { genus: u16 },
}

impl Presentation {
    pub fn free(rank: u16) -> Self {
        assert!(rank >= 1);
        Presentation::Free { rank }
    }

    pub fn surface(genus: u16) -> Result<Self> {
        if genus < 2 {
            return Err(Error::input(
                "surface presentations require genus >= 2; \
                 the torus is handled by abelian coordinates",
            ));
        }
        Ok(Presentation::Surface { genus })
    }

    pub fn rank(&self) -> u16 {
        match *self {
            Presentation::Free { rank } => rank,
            Presentation::Surface { genus } => 2 * genus,
        }
    }

    pub fn genus(&self) -> Option<u16> {
        match *self {
            Presentation::Surface { genus } => Some(genus),
            Presentation::Free { .. } => None,
        }
    }

    /// Generator index of `a_i` (1-based `i`).
    pub fn gen_a(i: u16) -> u16 {
        2 * i - 1
    }

    /// Generator index of `b_i` (1-based `i`).
    pub fn gen_b(i: u16) -> u16 {
        2 * i
    }

    fn check_letter(&self, l: Letter) -> Result<()> {
        if l.gen() == 0 || l.gen() > self.rank() {
            return Err(Error::GeneratorOutOfRange {
                idx: l.gen(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|&l| self.check_letter(l))
    }

    /// Freely reduce a raw letter sequence, validating generator indices.
    pub fn reduce<I: IntoIterator<Item = Letter>>(&self, letters: I) -> Result<Word> {
        let raw: Vec<Letter> = letters.into_iter().collect();
        raw.iter().try_for_each(|&l| self.check_letter(l))?;
        Ok(Word::reduce(raw))
    }

    /// The surface relator `a_1 b_1 a_1^-1 b_1^-1 ... a_g b_g a_g^-1 b_g^-1`.
    pub fn relator(&self) -> Option<Word> {
        let genus = self.genus()?;
        let mut letters = Vec::with_capacity(4 * genus as usize);
        for i in 1..=genus {
            letters.push(Letter::new(Self::gen_a(i), false));
            letters.push(Letter::new(Self::gen_b(i), false));
            letters.push(Letter::new(Self::gen_a(i), true));
            letters.push(Letter::new(Self::gen_b(i), true));
        }
        Some(Word::reduce(letters))
    }

    /// Dehn's algorithm for the one-relator surface presentation: greedily
    /// replace any subword that matches more than half of a cyclic rotation
    /// of the relator (or its inverse) by the shorter complement, until no
    /// such subword remains. The result is empty iff the word is trivial in
    /// `pi_1(Sigma_g)`.
    pub fn dehn_reduce(&self, w: &Word) -> Result<Word> {
        let genus = self
            .genus()
            .ok_or_else(|| Error::input("dehn_reduce needs a surface presentation"))?;
        self.check(w)?;
        let relator = self.relator().expect("surface has relator");
        let rel_len = relator.len();
        let half = rel_len / 2; // replace matches of length > half = 2g
        debug_assert_eq!(half, 2 * genus as usize);

        let mut rotations: Vec<Word> = Vec::with_capacity(2 * rel_len);
        for base in [relator.clone(), relator.invert()] {
            for r in 0..rel_len {
                let mut rot = base.letters()[r..].to_vec();
                rot.extend_from_slice(&base.letters()[..r]);
                rotations.push(Word { letters: rot });
            }
        }

        let mut cur = w.clone();
        loop {
            let letters = cur.letters();
            let mut best: Option<(usize, usize, usize)> = None; // (len, pos, rot)
            for pos in 0..letters.len() {
                for (ri, rot) in rotations.iter().enumerate() {
                    let mut l = 0;
                    while pos + l < letters.len()
                        && l < rel_len
                        && letters[pos + l] == rot.letters()[l]
                    {
                        l += 1;
                    }
                    if l > half && best.map_or(true, |(bl, _, _)| l > bl) {
                        best = Some((l, pos, ri));
                    }
                }
            }
            match best {
                Some((l, pos, ri)) => {
                    let rot = &rotations[ri];
                    let complement = Word {
                        letters: rot.letters()[l..].to_vec(),
                    };
                    let prefix = Word {
                        letters: letters[..pos].to_vec(),
                    };
                    let suffix = Word {
                        letters: letters[pos + l..].to_vec(),
                    };
                    cur = prefix.concat(&complement.invert()).concat(&suffix);
                }
                None => return Ok(cur),
            }
        }
    }

    /// True iff `w` represents the identity element.
    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        match self {
            Presentation::Free { .. } => {
                self.check(w)?;
                Ok(w.is_empty())
            }
            Presentation::Surface { .. } => Ok(self.dehn_reduce(w)?.is_empty()),
        }
    }

    /// Group equality through triviality of `u v^-1`; reduced representatives
    /// in a surface group are not canonical, so this is the only safe test.
    pub fn eq_in_group(&self, u: &Word, v: &Word) -> Result<bool> {
        self.is_trivial(&u.concat(&v.invert()))
    }

    /// The handlebody retraction `pi_1(Sigma_g) -> F_g`: `a_i -> x_i`,
    /// `b_i -> 1`. Well defined because the relator maps to the empty word.
    pub fn handlebody_retract(&self, w: &Word) -> Result<Word> {
        self.genus()
            .ok_or_else(|| Error::input("handlebody_retract needs a surface presentation"))?;
        self.check(w)?;
        Ok(Word::reduce(w.letters().iter().filter_map(|&l| {
            if l.gen() % 2 == 1 {
                Some(Letter::new(l.gen().div_ceil(2), l.is_inverse()))
            } else {
                None
            }
        })))
    }

    /// Retraction target presentation (`F_g`).
    pub fn retract_target(&self) -> Option<Presentation> {
        self.genus().map(|g| Presentation::free(g))
    }

    fn letter_token(&self, l: Letter) -> String {
        let (c, idx) = match self {
            Presentation::Free { .. } => ('x', l.gen()),
            Presentation::Surface { .. } => {
                if l.gen() % 2 == 1 {
                    ('a', l.gen().div_ceil(2))
                } else {
                    ('b', l.gen() / 2)
                }
            }
        };
        let c = if l.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        };
        format!("{c}{idx}")
    }

    /// Serialize a word in the documented grammar. The empty word is `1`.
    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters().iter().map(|&l| self.letter_token(l)).collect()
    }

    /// Parse the grammar produced by [`Presentation::format`].
    pub fn parse(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let lower = c.to_ascii_lowercase();
            let inv = c.is_ascii_uppercase();
            let mut idx = String::new();
            while chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                idx.push(chars.next().unwrap());
            }
            if idx.is_empty() {
                return Err(Error::Parse(format!("letter '{c}' must carry an index")));
            }
            let idx: u16 = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad index after '{c}'")))?;
            let gen = match (self, lower) {
                (Presentation::Free { .. }, 'x') => idx,
                (Presentation::Surface { .. }, 'a') => Presentation::gen_a(idx),
                (Presentation::Surface { .. }, 'b') => Presentation::gen_b(idx),
                _ => {
                    return Err(Error::Parse(format!(
                        "letter '{c}' not valid for this presentation"
                    )))
                }
            };
            if idx == 0 {
                return Err(Error::Parse("generator indices are 1-based".into()));
            }
            let l = Letter::new(gen, inv);
            self.check_letter(l)?;
            letters.push(l);
        }
        Ok(Word::reduce(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(gen: u16) -> Letter {
        Letter::new(gen, false)
    }
    fn li(gen: u16) -> Letter {
        Letter::new(gen, true)
    }

    #[test]
    fn reduce_cancellation() {
        let p = Presentation::free(2);
        assert!(p.reduce([l(1), li(1)]).unwrap().is_empty());
        let w = p.reduce([l(1), l(2), li(2), l(1)]).unwrap();
        assert_eq!(w, p.parse("x1x1").unwrap());
    }

    #[test]
    fn reduce_rejects_out_of_rank() {
        let p = Presentation::free(2);
        assert!(matches!(
            p.reduce([l(3)]),
            Err(Error::GeneratorOutOfRange { idx: 3, rank: 2 })
        ));
    }

    #[test]
    fn concat_invert_power() {
        let p = Presentation::free(2);
        let a = p.parse("x1").unwrap();
        let ab = p.parse("x1x2").unwrap();
        assert!(a.concat(&a.invert()).is_empty());
        assert_eq!(ab.power(3), p.parse("x1x2x1x2x1x2").unwrap());
        assert_eq!(ab.invert(), p.parse("X2X1").unwrap());
        assert_eq!(ab.power(-2), ab.power(2).invert());
    }

    #[test]
    fn cyclic_reduce_strips_conjugator() {
        let p = Presentation::free(2);
        let w = p.parse("x1x2X1").unwrap();
        let (conj, core) = w.cyclic_reduce();
        assert_eq!(conj, p.parse("x1").unwrap());
        assert_eq!(core, p.parse("x2").unwrap());
        let (conj, core) = Word::empty().cyclic_reduce();
        assert!(conj.is_empty() && core.is_empty());
    }

    #[test]
    fn counting_examples() {
        let p = Presentation::free(2);
        let a5 = p.parse("x1x1x1x1x1").unwrap();
        let a = p.parse("x1").unwrap();
        assert_eq!(count_subword(&a5, &a, CountMode::Linear).unwrap(), 5);
        let ababab = p.parse("x1x2x1x2x1x2").unwrap();
        let ab = p.parse("x1x2").unwrap();
        assert_eq!(count_subword(&ababab, &ab, CountMode::Linear).unwrap(), 3);
        assert!(matches!(
            count_subword(&a5, &Word::empty(), CountMode::Linear),
            Err(Error::EmptyPattern)
        ));
    }

    #[test]
    fn cyclic_counting_wraps() {
        let p = Presentation::free(2);
        let a = p.parse("x1").unwrap();
        let aa = p.parse("x1x1").unwrap();
        // core 'a' read cyclically contains 'aa' at one starting position
        assert_eq!(count_subword(&a, &aa, CountMode::CyclicCore).unwrap(), 1);
        let abab = p.parse("x1x2x1x2").unwrap();
        let ab = p.parse("x1x2").unwrap();
        assert_eq!(count_subword(&abab, &ab, CountMode::CyclicCore).unwrap(), 2);
    }

    #[test]
    fn relator_is_trivial_and_generators_are_not() {
        let p = Presentation::surface(2).unwrap();
        let r = p.relator().unwrap();
        assert_eq!(r.len(), 8);
        assert!(p.dehn_reduce(&r).unwrap().is_empty());
        for g in 1..=4 {
            let w = Word::single(l(g));
            assert!(!p.dehn_reduce(&w).unwrap().is_empty());
        }
    }

    #[test]
    fn retract_examples() {
        let p = Presentation::surface(2).unwrap();
        let r = p.relator().unwrap();
        assert!(p.handlebody_retract(&r).unwrap().is_empty());
        let w = p.parse("a1b1a2").unwrap();
        let f = Presentation::free(2);
        assert_eq!(p.handlebody_retract(&w).unwrap(), f.parse("x1x2").unwrap());
    }

    #[test]
    fn parse_format_round_trip() {
        let f = Presentation::free(3);
        let w = f.parse("x1x2X3x1").unwrap();
        assert_eq!(f.parse(&f.format(&w)).unwrap(), w);
        assert_eq!(f.format(&Word::empty()), "1");
        assert!(f.parse("1").unwrap().is_empty());
        assert!(f.parse("").unwrap().is_empty());
        let s = Presentation::surface(2).unwrap();
        let w = s.parse("a1B2A1").unwrap();
        assert_eq!(s.format(&w), "a1B2A1");
        assert!(s.parse("x1").is_err());
        assert!(f.parse("x0").is_err());
        assert!(f.parse("x9").is_err());
    }
}
