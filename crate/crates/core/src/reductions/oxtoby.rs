//! The Oxtoby–Toeplitz machine.
//!
//! Level `n` holds a template `W_n` over `{0, 1, x}` and its two fillings
//! `𝟘_n`, `𝟙_n`:
//!
//! * odd `n`: `W_n = 𝟘 W^{s−1}`, `𝟘_n = 𝟘^s`, `𝟙_n = 𝟘 𝟙^{s−1}`;
//! * even `n`: `W_n = 𝟙 W^{s−1}`, `𝟘_n = 𝟙 𝟘^{s−1}`, `𝟙_n = 𝟙^s`;
//!
//! where the right-hand sides are taken at level `n − 1` and `s = s_n`.
//! Starting from `W_0 = x`, `𝟘_0 = 0`, `𝟙_0 = 1`, the words `𝟘_0, 𝟙_1, 𝟘_2,
//! 𝟙_3, …` are successive prefixes of the Toeplitz point `y`.
//!
//! Words are stored as ASCII bytes `b'0'`, `b'1'`, `b'x'` up to
//! [`WORD_CAP`] symbols; beyond that only lengths and letter counts are kept.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::ReductionError;
use crate::rational::{ratio_string, Ratio};
use crate::symbolic::{Generator, Language, Point, Symbol, SymbolicError, Word};

/// Longest word the machine materializes.
pub const WORD_CAP: usize = 1 << 22;

/// `s_j` (1-based) with the default `2^{j+1}` past the configured list.
pub fn s_at(s: &[u64], j: usize) -> u64 {
    assert!(j >= 1, "s is indexed from 1");
    s.get(j - 1).copied().unwrap_or_else(|| 1u64 << (j + 1).min(62))
}

fn ratio(n: u128, d: u128) -> Ratio {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug)]
struct LevelWords {
    w: Vec<u8>,
    zero: Vec<u8>,
    one: Vec<u8>,
}

#[derive(Clone, Debug)]
struct Level {
    len: u128,
    ones_in_zero: u128,
    ones_in_one: u128,
    words: Option<Arc<LevelWords>>,
}

fn power(out: &mut Vec<u8>, block: &[u8], k: u64) {
    for _ in 0..k {
        out.extend_from_slice(block);
    }
}

/// Level-`n` fillings from level `n − 1`.
fn next_fillings(zero: &[u8], one: &[u8], s: u64, n: usize) -> (Vec<u8>, Vec<u8>) {
    let len = zero.len() * s as usize;
    let (mut z, mut o) = (Vec::with_capacity(len), Vec::with_capacity(len));
    if n % 2 == 1 {
        power(&mut z, zero, s);
        o.extend_from_slice(zero);
        power(&mut o, one, s - 1);
    } else {
        z.extend_from_slice(one);
        power(&mut z, zero, s - 1);
        power(&mut o, one, s);
    }
    (z, o)
}

#[derive(Clone, Debug)]
pub struct OxtobyMachine {
    configured: Vec<u64>,
    /// `s_1, …, s_depth`.
    s: Vec<u64>,
    levels: Vec<Level>,
}

/// Builds levels `0..=depth`. `s` must have entries `>= 3` and, extended by
/// the default tail, satisfy `Σ 1/s_j < 1`.
pub fn oxtoby_build(s: &[u64], depth: usize) -> Result<OxtobyMachine, ReductionError> {
    if let Some(bad) = s.iter().find(|&&v| v < 3) {
        return Err(ReductionError::Parameters(format!("s_j must be at least 3, got {bad}")));
    }
    let m = depth.max(s.len());
    let mut total: Ratio = (1..=m).map(|j| ratio(1, s_at(s, j) as u128)).sum();
    total += Ratio::new(BigInt::one(), BigInt::one() << (m + 1));
    if total >= Ratio::one() {
        return Err(ReductionError::Parameters(format!(
            "sum of 1/s_j is {} >= 1",
            ratio_string(&total)
        )));
    }
    let s_full: Vec<u64> = (1..=depth).map(|j| s_at(s, j)).collect();
    let mut levels = vec![Level {
        len: 1,
        ones_in_zero: 0,
        ones_in_one: 1,
        words: Some(Arc::new(LevelWords {
            w: b"x".to_vec(),
            zero: b"0".to_vec(),
            one: b"1".to_vec(),
        })),
    }];
    for n in 1..=depth {
        let sn = s_full[n - 1];
        let prev = &levels[n - 1];
        let len = prev
            .len
            .checked_mul(sn as u128)
            .ok_or_else(|| ReductionError::Parameters("word lengths overflow".into()))?;
        let (c0, c1) = if n % 2 == 1 {
            (sn as u128 * prev.ones_in_zero, prev.ones_in_zero + (sn as u128 - 1) * prev.ones_in_one)
        } else {
            (prev.ones_in_one + (sn as u128 - 1) * prev.ones_in_zero, sn as u128 * prev.ones_in_one)
        };
        let words = match &prev.words {
            Some(pw) if len <= WORD_CAP as u128 => {
                let (zero, one) = next_fillings(&pw.zero, &pw.one, sn, n);
                let mut w = Vec::with_capacity(len as usize);
                w.extend_from_slice(if n % 2 == 1 { &pw.zero } else { &pw.one });
                power(&mut w, &pw.w, sn - 1);
                Some(Arc::new(LevelWords { w, zero, one }))
            }
            _ => None,
        };
        levels.push(Level {
            len,
            ones_in_zero: c0,
            ones_in_one: c1,
            words,
        });
    }
    Ok(OxtobyMachine {
        configured: s.to_vec(),
        s: s_full,
        levels,
    })
}

fn ascii_word(bytes: &[u8]) -> Word {
    Word::new(bytes.iter().map(|&b| Symbol::from(b - b'0')).collect())
}

impl OxtobyMachine {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// `s_1, …, s_depth`.
    pub fn s(&self) -> &[u64] {
        &self.s
    }

    /// `l_n`.
    pub fn len(&self, n: usize) -> u128 {
        self.levels[n].len
    }

    /// Deepest level whose words are stored.
    pub fn materialized_depth(&self) -> usize {
        self.levels.iter().rposition(|l| l.words.is_some()).unwrap_or(0)
    }

    /// `W_n` as ASCII over `01x`.
    pub fn template(&self, n: usize) -> Option<&[u8]> {
        self.levels.get(n)?.words.as_ref().map(|w| w.w.as_slice())
    }

    /// `𝟘_n` as ASCII.
    pub fn zero(&self, n: usize) -> Option<&[u8]> {
        self.levels.get(n)?.words.as_ref().map(|w| w.zero.as_slice())
    }

    /// `𝟙_n` as ASCII.
    pub fn one(&self, n: usize) -> Option<&[u8]> {
        self.levels.get(n)?.words.as_ref().map(|w| w.one.as_slice())
    }

    pub fn template_string(&self, n: usize) -> Option<String> {
        self.template(n).map(|b| String::from_utf8_lossy(b).into_owned())
    }

    /// Number of `1`s in `𝟘_n` and `𝟙_n`.
    pub fn counts(&self, n: usize) -> (u128, u128) {
        let l = &self.levels[n];
        (l.ones_in_zero, l.ones_in_one)
    }

    /// `m(𝟘_n)`.
    pub fn m_zero(&self, n: usize) -> Ratio {
        ratio(self.levels[n].ones_in_zero, self.levels[n].len)
    }

    /// `m(𝟙_n)`.
    pub fn m_one(&self, n: usize) -> Ratio {
        ratio(self.levels[n].ones_in_one, self.levels[n].len)
    }

    /// `P_n = Π_{j≤n} (1 − 1/s_j)`.
    pub fn product(&self, n: usize) -> Ratio {
        self.s[..n]
            .iter()
            .map(|&v| ratio(v as u128 - 1, v as u128))
            .fold(Ratio::one(), |acc, r| acc * r)
    }

    /// Enclosure of `a = lim m(𝟘_n)`: `[m(𝟘_d), m(𝟙_d)]`, of width `P_d`.
    pub fn a_interval(&self) -> (Ratio, Ratio) {
        let d = self.depth();
        (self.m_zero(d), self.m_one(d))
    }

    /// Enclosure of `b = lim m(𝟙_n)`: also `[m(𝟘_d), m(𝟙_d)]`.
    pub fn b_interval(&self) -> (Ratio, Ratio) {
        self.a_interval()
    }

    /// `W_n` as a word with placeholders for `x`.
    pub fn template_word(&self, n: usize) -> Option<Word> {
        let t = self.template_string(n)?;
        Some(Word::parse_template(&t).expect("templates are over 01x"))
    }

    /// Filling the `x`s of `W_n` with `0` (resp. `1`) gives `𝟘_n` (resp. `𝟙_n`).
    pub fn fill_identity(&self, n: usize) -> Option<bool> {
        let t = self.template_word(n)?;
        Some(t.fill_holes(0) == ascii_word(self.zero(n)?) && t.fill_holes(1) == ascii_word(self.one(n)?))
    }

    /// The Toeplitz point `y`.
    pub fn point(&self) -> Point {
        toeplitz_point(self.configured.clone())
    }

    /// The language as a membership oracle.
    pub fn language(self: &Arc<Self>) -> OxtobyLanguage {
        OxtobyLanguage {
            machine: Arc::clone(self),
        }
    }

    /// Smallest level `n` with `l_n >= len` whose level `n + 2` is stored.
    fn language_level(&self, len: usize) -> Result<usize, SymbolicError> {
        let top = self.materialized_depth();
        let n = (0..=self.depth())
            .find(|&n| self.levels[n].len >= len as u128)
            .filter(|&n| n + 2 <= top)
            .ok_or(SymbolicError::BeyondDepth {
                len,
                max: if top >= 2 { self.levels[top - 2].len as usize } else { 0 },
            })?;
        Ok(n)
    }

    /// Membership of an ASCII word in the language of the orbit closure of
    /// `y`. With every `s_j >= 3`, the factors of length at most `l_n` are
    /// exactly the factors of `𝟘_{n+2}` and `𝟙_{n+2}`.
    pub fn contains_ascii(&self, w: &[u8]) -> Result<bool, SymbolicError> {
        if w.iter().any(|&b| b != b'0' && b != b'1') {
            return Ok(false);
        }
        if w.is_empty() {
            return Ok(true);
        }
        let n = self.language_level(w.len())?;
        let needle = std::str::from_utf8(w).expect("ascii");
        let hay = |b: &[u8]| std::str::from_utf8(b).expect("ascii").contains(needle);
        Ok(hay(self.zero(n + 2).unwrap()) || hay(self.one(n + 2).unwrap()))
    }

    /// `|L_len(X)|` counted over all factors of `𝟘_{n+2}` and `𝟙_{n+2}`.
    pub fn language_size(&self, len: usize) -> Result<usize, ReductionError> {
        if len == 0 {
            return Ok(1);
        }
        let n = self.language_level(len)?;
        let mut seen: HashSet<&[u8]> = HashSet::new();
        for word in [self.zero(n + 2).unwrap(), self.one(n + 2).unwrap()] {
            seen.extend(word.windows(len));
        }
        Ok(seen.len())
    }

    /// Checks that `𝟘_0^{j_0} 𝟘_1^{j_1} … 𝟘_k^{j_k}` is a suffix of
    /// `𝟘_{k+1}` for every tuple with `0 <= j_i <= s_{i+1} − 2`.
    pub fn suffix_property(&self, k: usize) -> Result<SuffixCheck, ReductionError> {
        let big = self.zero(k + 1).ok_or_else(|| {
            ReductionError::Parameters(format!("level {} is not materialized", k + 1))
        })?;
        let mut tuples: u128 = 1;
        // end position -> one tuple suffix (j_i, …, j_k) reaching it
        let mut frontier: HashMap<usize, Vec<u64>> = HashMap::from([(big.len(), Vec::new())]);
        for i in (0..=k).rev() {
            let block = self.zero(i).expect("lower levels are stored");
            let max_j = self.s[i] - 2;
            tuples *= max_j as u128 + 1;
            let mut next: HashMap<usize, Vec<u64>> = HashMap::new();
            let mut ends: Vec<usize> = frontier.keys().copied().collect();
            ends.sort_unstable();
            for end in ends {
                let tail = &frontier[&end];
                let mut pos = end;
                for j in 0..=max_j {
                    if j > 0 {
                        if pos < block.len() || &big[pos - block.len()..pos] != block {
                            let mut failure = vec![j];
                            failure.extend_from_slice(tail);
                            return Ok(SuffixCheck {
                                k,
                                tuples,
                                failure: Some((i, failure)),
                            });
                        }
                        pos -= block.len();
                    }
                    next.entry(pos).or_insert_with(|| {
                        let mut t = vec![j];
                        t.extend_from_slice(tail);
                        t
                    });
                }
            }
            frontier = next;
        }
        Ok(SuffixCheck {
            k,
            tuples,
            failure: None,
        })
    }

    /// Levels as JSON, words over `01x` where stored.
    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<serde_json::Value> = (0..=self.depth())
            .map(|n| {
                let (c0, c1) = self.counts(n);
                let mut v = serde_json::json!({
                    "n": n,
                    "l": self.len(n).to_string(),
                    "ones_zero": c0.to_string(),
                    "ones_one": c1.to_string(),
                    "m_zero": ratio_string(&self.m_zero(n)),
                    "m_one": ratio_string(&self.m_one(n)),
                    "product": ratio_string(&self.product(n)),
                });
                if let Some(w) = &self.levels[n].words {
                    let txt = |b: &[u8]| String::from_utf8_lossy(b).into_owned();
                    v["W"] = txt(&w.w).into();
                    v["zero"] = txt(&w.zero).into();
                    v["one"] = txt(&w.one).into();
                }
                v
            })
            .collect();
        serde_json::json!({ "s": self.s, "depth": self.depth(), "levels": levels })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuffixCheck {
    pub k: usize,
    pub tuples: u128,
    /// `(level i, (j_i, …, j_k))` of the first tuple that fails.
    pub failure: Option<(usize, Vec<u64>)>,
}

impl SuffixCheck {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Language oracle backed by a built machine.
#[derive(Clone, Debug)]
pub struct OxtobyLanguage {
    machine: Arc<OxtobyMachine>,
}

impl Language for OxtobyLanguage {
    fn contains(&self, w: &Word) -> Result<bool, SymbolicError> {
        if w.as_slice().iter().any(|&s| s > 1) {
            return Ok(false);
        }
        let ascii: Vec<u8> = w.as_slice().iter().map(|&s| b'0' + s as u8).collect();
        self.machine.contains_ascii(&ascii)
    }
}

#[derive(Debug)]
struct Toeplitz {
    s: Vec<u64>,
}

impl Generator for Toeplitz {
    fn name(&self) -> &str {
        "oxtoby_toeplitz"
    }

    fn params(&self) -> serde_json::Value {
        serde_json::json!({ "s": self.s })
    }

    fn extend(&self, buf: &mut Vec<Symbol>, min_len: usize) {
        let (mut zero, mut one) = (b"0".to_vec(), b"1".to_vec());
        let mut n = 0;
        while zero.len() < min_len.max(1) {
            n += 1;
            (zero, one) = next_fillings(&zero, &one, s_at(&self.s, n), n);
        }
        let y = if n % 2 == 0 { &zero } else { &one };
        buf.clear();
        buf.extend(y.iter().map(|&b| Symbol::from(b - b'0')));
    }
}

/// The Toeplitz point for parameters `s` (default tail past the list).
pub fn toeplitz_point(s: Vec<u64>) -> Point {
    Point::from_generator(Box::new(Toeplitz { s }))
}

/// `(count, bound)` of length-`length` factors of `𝟘𝟘, 𝟘𝟙, 𝟙𝟘, 𝟙𝟙` at `level`;
/// the bound `4 l + 4` is reported when `length = l_level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageScan {
    pub words: BTreeSet<Word>,
    pub count: usize,
    pub bound: Option<u128>,
}

pub fn oxtoby_language(machine: &OxtobyMachine, length: usize, level: usize) -> Result<LanguageScan, ReductionError> {
    let (zero, one) = match (machine.zero(level), machine.one(level)) {
        (Some(z), Some(o)) => (z, o),
        _ => return Err(ReductionError::Parameters(format!("level {level} is not materialized"))),
    };
    if length as u128 > machine.len(level) {
        return Err(ReductionError::Parameters(format!(
            "length {length} exceeds l_{level} = {}",
            machine.len(level)
        )));
    }
    let mut seen: HashSet<&[u8]> = HashSet::new();
    let pairs: Vec<Vec<u8>> = [(zero, zero), (zero, one), (one, zero), (one, one)]
        .iter()
        .map(|(a, b)| [*a, *b].concat())
        .collect();
    for p in &pairs {
        seen.extend(p.windows(length.max(1)).map(|w| &w[..length]));
    }
    let words: BTreeSet<Word> = seen.into_iter().map(ascii_word).collect();
    let bound = (length as u128 == machine.len(level)).then(|| 4 * machine.len(level) + 4);
    Ok(LanguageScan {
        count: words.len(),
        words,
        bound,
    })
}

/// Window statistic at `w_i = (stages < i) 𝟘_{2i+1}^{j_i} 𝟙_{2i+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckpointRow {
    pub i: usize,
    pub len: usize,
    pub m: Ratio,
    /// `(j_i m(𝟘) + m(𝟙)) / (j_i + 1 + 1/s)` at level `2i+1`.
    pub lower_bound: Ratio,
    /// `P_d/4 − corr_i`, compared with `m(w_i) − m(𝟘_d)`.
    pub gap_bound: Ratio,
    pub holds_lower: bool,
    pub holds_gap: bool,
    /// `m(w_i) > m(𝟘_d)`.
    pub above_a: bool,
}

/// Running frequencies over all prefixes ending in stage `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunningRow {
    pub stage: usize,
    pub j_prev: u64,
    pub prefixes: usize,
    pub max_m: Ratio,
    /// `3/j_{i−1} + m(𝟘_d)`.
    pub bound: Ratio,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct OxtobyReduction {
    /// `f(β)` up to the horizon.
    pub prefix: Word,
    pub j: Vec<u64>,
    /// End of stage `i` (exclusive) in the full built word.
    pub stage_ends: Vec<usize>,
    /// `m` of the prefix ending at each stage end.
    pub series: Vec<(usize, Ratio)>,
    pub checkpoints: Vec<CheckpointRow>,
    pub running: Vec<RunningRow>,
    /// `m(𝟘_d)` and `P_d` at the machine depth.
    pub a_low: Ratio,
    pub product: Ratio,
}

/// `f(β) = 𝟘_1^{j_0} 𝟘_3^{j_1} …` with `j_i = min(β(i) + 1, s_{2i+2} − 2)`,
/// built for the given entries of `β`, with the two families of exact
/// frequency diagnostics. `horizon = None` keeps the whole built word.
pub fn oxtoby_reduce(
    machine: &OxtobyMachine,
    beta: &[u64],
    horizon: Option<usize>,
) -> Result<OxtobyReduction, ReductionError> {
    if beta.is_empty() {
        return Err(ReductionError::Parameters("beta is empty".into()));
    }
    let d = machine.depth();
    if 2 * beta.len() > d {
        return Err(ReductionError::Parameters(format!(
            "depth {d} does not cover {} entries of beta",
            beta.len()
        )));
    }
    let j: Vec<u64> = beta
        .iter()
        .enumerate()
        .map(|(i, &b)| (b + 1).min(machine.s[2 * i + 1] - 2))
        .collect();
    let mut word: Vec<u8> = Vec::new();
    let mut stage_ends = Vec::with_capacity(j.len());
    for (i, &ji) in j.iter().enumerate() {
        let block = machine.zero(2 * i + 1).ok_or_else(|| {
            ReductionError::Parameters(format!("level {} is not materialized", 2 * i + 1))
        })?;
        power(&mut word, block, ji);
        stage_ends.push(word.len());
    }
    let horizon = horizon.unwrap_or(word.len());
    if horizon > word.len() {
        return Err(ReductionError::Parameters(format!(
            "horizon {horizon} exceeds the built prefix {}",
            word.len()
        )));
    }
    let mut ones = vec![0u128; word.len() + 1];
    for (k, &b) in word.iter().enumerate() {
        ones[k + 1] = ones[k] + u128::from(b == b'1');
    }
    let m_at = |len: usize| ratio(ones[len], len as u128);
    let series = stage_ends.iter().map(|&e| (e, m_at(e))).collect();

    let a_low = machine.m_zero(d);
    let p_d = machine.product(d);
    let (c_d, l_d) = (machine.counts(d).0, machine.len(d));

    let mut checkpoints = Vec::new();
    for i in 0..j.len().saturating_sub(1) {
        let lvl = 2 * i + 1;
        let len = stage_ends[i] + machine.len(lvl) as usize;
        let m = m_at(len);
        let (m0, m1) = (machine.m_zero(lvl), machine.m_one(lvl));
        let s = ratio(machine.s[lvl - 1] as u128, 1);
        let k = ratio(j[i] as u128, 1);
        let lower_bound = (&k * &m0 + &m1) / (&k + Ratio::one() + s.recip());
        let corr = (&a_low - &m0) + (&m0 + machine.product(lvl) / ratio(2, 1)) / (ratio(2, 1) * &s + Ratio::one());
        let gap_bound = &p_d / ratio(4, 1) - corr;
        checkpoints.push(CheckpointRow {
            i,
            len,
            holds_lower: m >= lower_bound,
            holds_gap: &m - &a_low >= gap_bound,
            above_a: m > a_low,
            m,
            lower_bound,
            gap_bound,
        });
    }

    let mut running = Vec::new();
    for i in 2..j.len() {
        let jp = j[i - 1];
        let (start, end) = (stage_ends[i - 1], stage_ends[i]);
        let mut best = (0u128, 1u128);
        let mut holds = true;
        for len in start + 1..=end {
            let (c, w) = (ones[len], len as u128);
            if c * best.1 > best.0 * w {
                best = (c, w);
            }
            // c/w <= 3/jp + c_d/l_d
            if c * jp as u128 * l_d > 3 * w * l_d + c_d * jp as u128 * w {
                holds = false;
            }
        }
        running.push(RunningRow {
            stage: i,
            j_prev: jp,
            prefixes: end - start,
            max_m: ratio(best.0, best.1),
            bound: ratio(3, jp as u128) + &a_low,
            holds,
        });
    }

    word.truncate(horizon);
    Ok(OxtobyReduction {
        prefix: ascii_word(&word),
        j,
        stage_ends,
        series,
        checkpoints,
        running,
        a_low,
        product: p_d,
    })
}

impl OxtobyReduction {
    pub fn all_checkpoints_hold(&self) -> bool {
        self.checkpoints.iter().all(|c| c.holds_lower && c.holds_gap && c.above_a)
    }

    pub fn all_running_hold(&self) -> bool {
        self.running.iter().all(|r| r.holds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn standard() -> OxtobyMachine {
        oxtoby_build(&[4, 8, 16, 32, 64], 5).unwrap()
    }

    #[test]
    fn displayed_templates() {
        let m = oxtoby_build(&[3, 4], 2).unwrap();
        assert_eq!(m.template_string(1).unwrap(), "0xx");
        assert_eq!(m.template_string(2).unwrap(), "0110xx0xx0xx");
        assert_eq!(m.zero(1).unwrap(), b"000");
        assert_eq!(m.one(1).unwrap(), b"011");
        assert_eq!(m.m_one(1) - m.m_zero(1), frac(2, 3));
    }

    #[test]
    fn parameter_checks() {
        assert!(oxtoby_build(&[2, 8], 2).is_err());
        assert!(oxtoby_build(&[3, 3, 3], 3).is_err());
        assert!(oxtoby_build(&[3, 4, 3], 3).is_ok());
        assert_eq!(oxtoby_build(&[], 3).unwrap().s(), &[4, 8, 16]);
    }

    #[test]
    fn counts_and_products() {
        let m = standard();
        for n in 0..=5 {
            assert_eq!(m.m_one(n) - m.m_zero(n), m.product(n));
            assert_eq!(m.fill_identity(n), Some(true));
            let z = m.zero(n).unwrap();
            assert_eq!(z.iter().filter(|&&b| b == b'1').count() as u128, m.counts(n).0);
            if n > 0 {
                assert!(m.m_zero(n) >= m.m_zero(n - 1));
                assert!(m.m_one(n) <= m.m_one(n - 1));
            }
        }
    }

    #[test]
    fn counts_continue_past_the_word_cap() {
        let m = oxtoby_build(&[4, 8, 16, 32, 64, 128], 6).unwrap();
        assert_eq!(m.materialized_depth(), 5);
        assert_eq!(m.len(6), 1 << 27);
        assert_eq!(m.m_one(6) - m.m_zero(6), m.product(6));
    }

    #[test]
    fn point_prefixes_are_nested_words() {
        let m = standard();
        let y = m.point();
        for n in 0..=4 {
            let w = if n % 2 == 0 { m.zero(n) } else { m.one(n) }.unwrap();
            assert_eq!(y.prefix(w.len()), ascii_word(w));
        }
        assert_eq!(y.recipe_parts().unwrap().0, "oxtoby_toeplitz");
    }

    #[test]
    fn language_scans() {
        let m = oxtoby_build(&[3, 4], 3).unwrap();
        let l0 = oxtoby_language(&m, 1, 0).unwrap();
        assert_eq!(l0.count, 2);
        assert_eq!(l0.bound, Some(8));
        let l1 = oxtoby_language(&m, 3, 1).unwrap();
        assert!(l1.count as u128 <= l1.bound.unwrap());
        assert!(oxtoby_language(&m, 4, 1).is_err());
    }

    #[test]
    fn language_oracle_agrees_with_point() {
        let m = Arc::new(standard());
        let lang = m.language();
        let y = m.point();
        let prefix = y.prefix(4096);
        for len in 1..=16 {
            for w in prefix.subword_set(len) {
                assert!(lang.contains(&w).unwrap());
            }
        }
        assert!(!lang.contains(&Word::parse("11111").unwrap()).unwrap());
        assert!(lang.contains(&Word::new(vec![0; 600])).is_err());
        for n in 0..=3 {
            let l = m.len(n);
            assert!(m.language_size(l as usize).unwrap() as u128 <= 4 * l + 4);
        }
    }

    #[test]
    fn suffix_property_small_k() {
        let m = standard();
        for k in 0..=4 {
            let r = m.suffix_property(k).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        assert_eq!(m.suffix_property(2).unwrap().tuples, 3 * 7 * 15);
    }

    #[test]
    fn reduction_for_constant_beta() {
        let m = oxtoby_build(&[4, 8, 16, 32, 64, 128], 6).unwrap();
        let r = oxtoby_reduce(&m, &[0, 0, 0], None).unwrap();
        assert_eq!(r.j, vec![1, 1, 1]);
        assert_eq!(r.checkpoints.len(), 2);
        assert_eq!(r.checkpoints[0].m, frac(3, 8));
        assert!(r.all_checkpoints_hold(), "{:?}", r.checkpoints);
        assert_eq!(r.stage_ends, vec![4, 516, 516 + (1 << 20)]);
    }

    #[test]
    fn reduction_running_bound() {
        let m = oxtoby_build(&[4, 8, 16, 32, 64, 128], 6).unwrap();
        let r = oxtoby_reduce(&m, &[0, 5, 2], Some(100)).unwrap();
        assert_eq!(r.j, vec![1, 6, 3]);
        assert_eq!(r.prefix.len(), 100);
        assert_eq!(r.running.len(), 1);
        assert!(r.running[0].bound < Ratio::one());
        assert!(r.all_running_hold());
        let clamp = oxtoby_reduce(&m, &[99, 99], None).unwrap();
        assert_eq!(clamp.j, vec![6, 30]);
        assert!(oxtoby_reduce(&m, &[0, 0, 0, 0], None).is_err());
        assert!(oxtoby_reduce(&m, &[0], Some(5)).is_err());
    }
}
