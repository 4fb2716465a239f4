//! Words, lazily evaluated infinite points, the shift map and the metric on
//! sequence space.
//!
//! Every operation on a [`Point`] takes an explicit horizon; nothing looks at
//! an unbounded suffix.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::rational::{dyadic, Ratio};
use num_traits::Zero;

/// An alphabet letter. Alphabets are subsets of the nonnegative integers.
pub type Symbol = u32;

/// Placeholder used while building Toeplitz templates. Never allowed inside
/// a [`Point`].
pub(crate) const HOLE: Symbol = Symbol::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("eventually periodic point needs a nonempty period")]
    EmptyPeriod,
    #[error("placeholder symbol cannot appear in a point")]
    PlaceholderInPoint,
    #[error("cannot parse word `{0}`")]
    BadWord(String),
    #[error("word of length {len} exceeds the language oracle's depth (max {max})")]
    BeyondDepth { len: usize, max: usize },
}

/// A finite sequence of symbols.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a digit string such as `"0110"`, or a comma separated list
    /// `"12,0,3"` for symbols above 9.
    pub fn parse(s: &str) -> Result<Self, SymbolicError> {
        Self::parse_inner(s, false)
    }

    /// Like [`Word::parse`] but accepts the placeholder `x`.
    pub(crate) fn parse_template(s: &str) -> Result<Self, SymbolicError> {
        Self::parse_inner(s, true)
    }

    fn parse_inner(s: &str, holes: bool) -> Result<Self, SymbolicError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || SymbolicError::BadWord(s.to_string());
        if t.contains(',') {
            return t
                .split(',')
                .map(|p| p.parse::<Symbol>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()
                .map(Word);
        }
        t.chars()
            .map(|c| match c {
                'x' if holes => Ok(HOLE),
                c => c.to_digit(10).ok_or_else(bad),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn constant(symbol: Symbol, len: usize) -> Self {
        Word(vec![symbol; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `u^k`.
    pub fn concat_power(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// All distinct factors of length `len`; empty when `len > |w|`.
    pub fn subword_set(&self, len: usize) -> BTreeSet<Word> {
        if len > self.len() {
            return BTreeSet::new();
        }
        self.0.windows(len.max(1)).map(|w| Word(w[..len].to_vec())).collect()
    }

    pub fn is_suffix_of(&self, v: &Word) -> bool {
        v.0.ends_with(&self.0)
    }

    pub fn is_prefix_of(&self, v: &Word) -> bool {
        v.0.starts_with(&self.0)
    }

    /// Whether `self` occurs as a factor of `v`.
    pub fn is_factor_of(&self, v: &Word) -> bool {
        self.is_empty() || v.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    /// Number of occurrences of `symbol`.
    pub fn count(&self, symbol: Symbol) -> usize {
        self.0.iter().filter(|&&s| s == symbol).count()
    }

    /// Replaces every placeholder by `symbol`.
    pub(crate) fn fill_holes(&self, symbol: Symbol) -> Word {
        Word(self.0.iter().map(|&s| if s == HOLE { symbol } else { s }).collect())
    }

    pub(crate) fn has_holes(&self) -> bool {
        self.0.contains(&HOLE)
    }
}

/// `u^k`.
pub fn concat_power(u: &Word, k: usize) -> Word {
    u.concat_power(k)
}

pub fn subword_set(w: &Word, len: usize) -> BTreeSet<Word> {
    w.subword_set(len)
}

/// Whether `u` is a suffix of `v`.
pub fn is_suffix(u: &Word, v: &Word) -> bool {
    u.is_suffix_of(v)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10 || s == HOLE) {
            for &s in &self.0 {
                if s == HOLE {
                    f.write_str("x")?;
                } else {
                    write!(f, "{s}")?;
                }
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl AsRef<[Symbol]> for Word {
    fn as_ref(&self) -> &[Symbol] {
        &self.0
    }
}

/// A deterministic, lazily extended infinite sequence.
///
/// `extend` must append symbols to `buf` until it holds at least `min_len`
/// of them; the output must depend only on the generator's parameters.
pub trait Generator: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn params(&self) -> serde_json::Value;
    fn extend(&self, buf: &mut Vec<Symbol>, min_len: usize);
}

#[derive(Debug)]
struct RecipeCell {
    generator: Box<dyn Generator>,
    cache: RwLock<Vec<Symbol>>,
}

impl RecipeCell {
    fn ensure(&self, len: usize) {
        if self.cache.read().expect("cache lock").len() >= len {
            return;
        }
        let mut cache = self.cache.write().expect("cache lock");
        if cache.len() < len {
            self.generator.extend(&mut cache, len);
            assert!(
                cache.len() >= len,
                "generator `{}` produced too few symbols",
                self.generator.name()
            );
            assert!(
                !cache.contains(&HOLE),
                "generator `{}` emitted a placeholder",
                self.generator.name()
            );
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    EventuallyPeriodic {
        pre: Arc<[Symbol]>,
        start: usize,
        per: Arc<[Symbol]>,
        phase: usize,
    },
    Recipe {
        cell: Arc<RecipeCell>,
        offset: usize,
    },
}

/// An element of the shift space with a finite description.
///
/// Cloning and shifting are O(1); the underlying data is shared.
#[derive(Clone, Debug)]
pub struct Point(Repr);

impl Point {
    /// `pre · per · per · …`
    pub fn eventually_periodic(pre: Word, per: Word) -> Result<Self, SymbolicError> {
        if per.is_empty() {
            return Err(SymbolicError::EmptyPeriod);
        }
        if pre.has_holes() || per.has_holes() {
            return Err(SymbolicError::PlaceholderInPoint);
        }
        Ok(Point(Repr::EventuallyPeriodic {
            pre: pre.into_vec().into(),
            start: 0,
            per: per.into_vec().into(),
            phase: 0,
        }))
    }

    pub fn periodic(per: Word) -> Result<Self, SymbolicError> {
        Self::eventually_periodic(Word::empty(), per)
    }

    /// The constant sequence `s s s …`.
    pub fn constant(s: Symbol) -> Self {
        Self::periodic(Word::new(vec![s])).expect("nonempty period")
    }

    pub fn from_generator(generator: Box<dyn Generator>) -> Self {
        Point(Repr::Recipe {
            cell: Arc::new(RecipeCell {
                generator,
                cache: RwLock::new(Vec::new()),
            }),
            offset: 0,
        })
    }

    /// `word` followed by `tail`.
    pub fn prepend(word: &Word, tail: &Point) -> Result<Self, SymbolicError> {
        if word.has_holes() {
            return Err(SymbolicError::PlaceholderInPoint);
        }
        match tail.eventually_periodic_parts() {
            Some((pre, per)) => Self::eventually_periodic(word.concat(&pre), per),
            None => Ok(Self::from_generator(Box::new(Prepended {
                word: word.clone(),
                tail: tail.clone(),
            }))),
        }
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        match &self.0 {
            Repr::EventuallyPeriodic { pre, start, per, phase } => {
                let idx = start + i;
                if idx < pre.len() {
                    pre[idx]
                } else {
                    per[(phase + idx - pre.len()) % per.len()]
                }
            }
            Repr::Recipe { cell, offset } => {
                cell.ensure(offset + i + 1);
                cell.cache.read().expect("cache lock")[offset + i]
            }
        }
    }

    /// The first `n` symbols.
    pub fn prefix(&self, n: usize) -> Word {
        let mut out = Vec::with_capacity(n);
        self.write_prefix(n, &mut out);
        Word(out)
    }

    /// Appends the first `n` symbols to `out`.
    pub fn write_prefix(&self, n: usize, out: &mut Vec<Symbol>) {
        match &self.0 {
            Repr::EventuallyPeriodic { pre, start, per, phase } => {
                let mut i = 0;
                let mut idx = *start;
                while i < n && idx < pre.len() {
                    out.push(pre[idx]);
                    i += 1;
                    idx += 1;
                }
                if i == n {
                    return;
                }
                let mut p = (phase + idx - pre.len()) % per.len();
                while i < n {
                    let take = (per.len() - p).min(n - i);
                    out.extend_from_slice(&per[p..p + take]);
                    i += take;
                    p = 0;
                }
            }
            Repr::Recipe { cell, offset } => {
                cell.ensure(offset + n);
                let cache = cell.cache.read().expect("cache lock");
                out.extend_from_slice(&cache[*offset..offset + n]);
            }
        }
    }

    /// `T^k(x)`.
    pub fn shift(&self, k: usize) -> Point {
        match &self.0 {
            Repr::EventuallyPeriodic { pre, start, per, phase } => {
                let remaining = pre.len() - start;
                let (start, phase) = if k <= remaining {
                    (start + k, *phase)
                } else {
                    (pre.len(), (phase + k - remaining) % per.len())
                };
                Point(Repr::EventuallyPeriodic {
                    pre: pre.clone(),
                    start,
                    per: per.clone(),
                    phase,
                })
            }
            Repr::Recipe { cell, offset } => Point(Repr::Recipe {
                cell: cell.clone(),
                offset: offset + k,
            }),
        }
    }

    /// `(preperiod, period)` for eventually periodic points, normalized so the
    /// period starts where the preperiod ends.
    pub fn eventually_periodic_parts(&self) -> Option<(Word, Word)> {
        match &self.0 {
            Repr::EventuallyPeriodic { pre, start, per, phase } => {
                let pre_w = Word(pre[*start..].to_vec());
                let p = if *start < pre.len() { 0 } else { *phase };
                let mut rotated = per[p..].to_vec();
                rotated.extend_from_slice(&per[..p]);
                Some((pre_w, Word(rotated)))
            }
            Repr::Recipe { .. } => None,
        }
    }

    /// `(generator name, params, offset)` for recipe-backed points.
    pub fn recipe_parts(&self) -> Option<(String, serde_json::Value, usize)> {
        match &self.0 {
            Repr::Recipe { cell, offset } => Some((
                cell.generator.name().to_string(),
                cell.generator.params(),
                *offset,
            )),
            Repr::EventuallyPeriodic { .. } => None,
        }
    }

    /// Length of the period for eventually periodic points.
    pub fn period_len(&self) -> Option<usize> {
        match &self.0 {
            Repr::EventuallyPeriodic { per, .. } => Some(per.len()),
            Repr::Recipe { .. } => None,
        }
    }

    /// Whether the point is purely periodic, and if so its least period.
    pub fn least_period(&self) -> Option<usize> {
        let (pre, per) = self.eventually_periodic_parts()?;
        let p = per.len();
        let least = (1..=p)
            .filter(|d| p % d == 0)
            .find(|&d| (0..p).all(|i| per.0[i] == per.0[(i + d) % p]))
            .unwrap_or(p);
        // the preperiod may just be a rotation of the tail
        let periodic = (0..pre.len()).all(|i| self.symbol_at(i) == self.symbol_at(i + least));
        periodic.then_some(least)
    }

    /// Whether the first `horizon` symbols agree.
    pub fn agrees_to(&self, other: &Point, horizon: usize) -> bool {
        (0..horizon).all(|i| self.symbol_at(i) == other.symbol_at(i))
    }
}

#[derive(Debug)]
struct Prepended {
    word: Word,
    tail: Point,
}

impl Generator for Prepended {
    fn name(&self) -> &str {
        "prepend"
    }

    fn params(&self) -> serde_json::Value {
        serde_json::json!({
            "word": self.word.as_slice(),
            "point": crate::io::point_to_json(&self.tail),
        })
    }

    fn extend(&self, buf: &mut Vec<Symbol>, min_len: usize) {
        while buf.len() < min_len {
            let i = buf.len();
            if i < self.word.len() {
                buf.push(self.word.0[i]);
            } else {
                let need = min_len - i;
                let from = i - self.word.len();
                let w = self.tail.shift(from).prefix(need);
                buf.extend_from_slice(w.as_slice());
            }
        }
    }
}

/// Index of the first disagreement among the first `horizon` symbols.
pub fn first_disagreement(x: &Point, y: &Point, horizon: usize) -> Option<usize> {
    (0..horizon).find(|&i| x.symbol_at(i) != y.symbol_at(i))
}

/// Index of the first disagreement between two equal-length windows.
pub fn window_disagreement(a: &[Symbol], b: &[Symbol]) -> Option<usize> {
    a.iter().zip(b).position(|(p, q)| p != q)
}

/// `2^{-k}` for the first disagreement index `k < horizon`, `0` when the
/// points agree on the first `horizon` symbols.
pub fn rho(x: &Point, y: &Point, horizon: usize) -> Ratio {
    assert!(horizon >= 1, "horizon must be positive");
    match first_disagreement(x, y, horizon) {
        Some(k) => dyadic(k),
        None => Ratio::zero(),
    }
}

/// Membership oracle for a language closed under taking factors.
pub trait Language: Send + Sync + fmt::Debug {
    fn contains(&self, w: &Word) -> Result<bool, SymbolicError>;
}

/// The phase space: a full shift or a language-generated subshift.
#[derive(Clone, Debug)]
pub enum ShiftSpace {
    /// `alphabet == None` means all nonnegative integers.
    Full { alphabet: Option<BTreeSet<Symbol>> },
    Language(Arc<dyn Language>),
}

impl ShiftSpace {
    pub fn full(alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        ShiftSpace::Full {
            alphabet: Some(alphabet.into_iter().collect()),
        }
    }

    /// `ω^ω`.
    pub fn baire() -> Self {
        ShiftSpace::Full { alphabet: None }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, ShiftSpace::Full { .. })
    }

    pub fn contains_word(&self, w: &Word) -> Result<bool, SymbolicError> {
        match self {
            ShiftSpace::Full { alphabet: None } => Ok(true),
            ShiftSpace::Full { alphabet: Some(a) } => Ok(w.as_slice().iter().all(|s| a.contains(s))),
            ShiftSpace::Language(l) => l.contains(w),
        }
    }

    /// Membership of `x` judged on its first `horizon` symbols.
    pub fn admits(&self, x: &Point, horizon: usize) -> Result<bool, SymbolicError> {
        self.contains_word(&x.prefix(horizon))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn shift_examples() {
        let x = Point::periodic(w("01")).unwrap();
        assert_eq!(x.shift(0).prefix(10), x.prefix(10));
        assert_eq!(x.shift(1).prefix(6), w("101010"));
        let y = Point::eventually_periodic(w("2"), w("01")).unwrap();
        assert_eq!(y.shift(1).prefix(8), Point::periodic(w("01")).unwrap().prefix(8));
        assert_eq!(y.shift(1).eventually_periodic_parts().unwrap(), (Word::empty(), w("01")));
        assert_eq!(y.shift(4).eventually_periodic_parts().unwrap(), (Word::empty(), w("10")));
    }

    #[test]
    fn rho_examples() {
        let x = Point::periodic(w("01")).unwrap();
        assert!(rho(&x, &x, 64).is_zero());
        let a = Point::eventually_periodic(w("0"), w("1")).unwrap();
        let b = Point::constant(1);
        assert_eq!(rho(&a, &b, 64), frac(1, 1));
        // 0 0 1 1 1 ... vs 0 0 0 1 1 ...
        let c = Point::eventually_periodic(w("00"), w("1")).unwrap();
        let d = Point::eventually_periodic(w("000"), w("1")).unwrap();
        assert_eq!(rho(&c, &d, 64), frac(1, 4));
        // agreement up to the horizon reads as zero
        assert!(rho(&c, &d, 2).is_zero());
    }

    #[test]
    fn word_algebra_examples() {
        let u = Word::parse_template("0xx").unwrap();
        assert_eq!(u.concat_power(2).to_string(), "0xx0xx");
        assert!(is_suffix(&w("000"), &w("011000000000")));
        assert!(!is_suffix(&w("001"), &w("011000000000")));
        let set: Vec<String> = subword_set(&w("0110"), 2).iter().map(|x| x.to_string()).collect();
        assert_eq!(set, vec!["01", "10", "11"]);
        assert!(subword_set(&w("01"), 3).is_empty());
    }

    #[test]
    fn period_must_be_nonempty() {
        assert_eq!(Point::periodic(Word::empty()).unwrap_err(), SymbolicError::EmptyPeriod);
        let t = Word::parse_template("0x").unwrap();
        assert_eq!(Point::periodic(t).unwrap_err(), SymbolicError::PlaceholderInPoint);
    }

    #[test]
    fn wide_symbols_display_with_commas() {
        let x = Word::new(vec![2, 13, 0]);
        assert_eq!(x.to_string(), "2,13,0");
        assert_eq!(Word::parse("2,13,0").unwrap(), x);
    }

    #[test]
    fn least_period_detects_rotations() {
        let x = Point::eventually_periodic(w("1"), w("01")).unwrap();
        assert_eq!(x.least_period(), Some(2));
        let y = Point::eventually_periodic(w("0"), w("01")).unwrap();
        assert_eq!(y.least_period(), None);
        assert_eq!(Point::periodic(w("0101")).unwrap().least_period(), Some(2));
    }

    #[test]
    fn prepend_keeps_eventually_periodic() {
        let tail = Point::periodic(w("01")).unwrap();
        let p = Point::prepend(&w("22"), &tail).unwrap();
        assert_eq!(p.prefix(6), w("220101"));
        assert!(p.eventually_periodic_parts().is_some());
    }

    #[test]
    fn full_shift_alphabet_membership() {
        let space = ShiftSpace::full([0, 1]);
        assert!(space.contains_word(&w("0110")).unwrap());
        assert!(!space.contains_word(&w("012")).unwrap());
        assert!(ShiftSpace::baire().contains_word(&w("9")).unwrap());
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (
            prop::collection::vec(0u32..3, 0..5),
            prop::collection::vec(0u32..3, 1..5),
        )
            .prop_map(|(pre, per)| Point::eventually_periodic(Word::new(pre), Word::new(per)).unwrap())
    }

    proptest! {
        #[test]
        fn prefix_is_deterministic(x in arb_point(), n in 0usize..30, m in 0usize..30) {
            let (n, m) = (n.min(m), n.max(m));
            prop_assert_eq!(x.prefix(m).slice(0, n), x.prefix(n));
            prop_assert_eq!(x.prefix(m), x.prefix(m));
        }

        #[test]
        fn shift_drops_prefix(x in arb_point(), k in 0usize..20, n in 0usize..20) {
            let full = x.prefix(n + k);
            prop_assert_eq!(x.shift(k).prefix(n), full.slice(k, n + k));
        }

        #[test]
        fn rho_is_ultrametric(x in arb_point(), y in arb_point(), z in arb_point(), h in 1usize..12) {
            let xy = rho(&x, &y, h);
            let yz = rho(&y, &z, h);
            let xz = rho(&x, &z, h);
            prop_assert!(xz <= xy.clone().max(yz));
        }

        #[test]
        fn concat_power_adds(u in prop::collection::vec(0u32..3, 0..4), a in 0usize..5, b in 0usize..5) {
            let u = Word::new(u);
            prop_assert_eq!(u.concat_power(a + b), u.concat_power(a).concat(&u.concat_power(b)));
        }
    }
}
