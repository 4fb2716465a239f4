//! Coding finite trees on `ω` into points of `ω^ω`.
//!
//! Finite sequences are enumerated as `t^{(1)}, t^{(2)}, …` by the key
//! `(|t| + Σt, |t|, lex)`, so every weight class is finite and `t^{(1)} = ∅`.
//! Each `s` gets a periodic word `y^s` whose empirical measure over one period
//! is exactly `μ_s`, and the point is assembled from blocks whose lengths
//! follow the schedule `a_n b_n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::ReductionError;
use crate::measure::DiscreteMeasure;
use crate::rational::Ratio;
use crate::symbolic::{Point, Symbol, Word};

/// Finite sequences of weight `w = |t| + Σt`, by length then lexicographically.
fn weight_class(w: usize) -> Vec<Vec<u64>> {
    if w == 0 {
        return vec![Vec::new()];
    }
    // Compositions of w; part c encodes the entry c - 1.
    fn rec(rem: usize, len: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if len == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rem < len {
            return;
        }
        for c in 1..=rem - (len - 1) {
            cur.push(c as u64 - 1);
            rec(rem - c, len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=w {
        rec(w, len, &mut Vec::new(), &mut out);
    }
    out
}

/// The first `count` sequences `t^{(1)}, …, t^{(count)}`.
pub fn enumerate_sequences(count: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    let mut w = 0;
    while out.len() < count {
        out.extend(weight_class(w));
        w += 1;
    }
    out.truncate(count);
    out
}

/// 1-based position of `t` in the enumeration.
pub fn enumeration_index(t: &[u64]) -> usize {
    let w = t.len() + t.iter().map(|&v| v as usize).sum::<usize>();
    let before: usize = if w == 0 { 0 } else { 1 + (1..w).map(|k| 1usize << (k - 1)).sum::<usize>() };
    let pos = weight_class(w)
        .iter()
        .position(|s| s.as_slice() == t)
        .expect("every sequence lies in its weight class");
    before + pos + 1
}

/// Cantor pairing `(a + i)(a + i + 1)/2 + i`.
pub fn cantor_pair(a: u64, i: u64) -> u64 {
    (a + i) * (a + i + 1) / 2 + i
}

fn smallest_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// The `n`-th prime counted from `p(0) = 2`.
pub fn nth_prime(n: u64) -> u64 {
    let mut found = 0;
    let mut k = 2;
    loop {
        if smallest_factor(k) == k {
            if found == n {
                return k;
            }
            found += 1;
        }
        k += 1;
    }
}

fn distinct_prime_factors(mut n: u64) -> usize {
    let mut count = 0;
    while n > 1 {
        let p = smallest_factor(n);
        count += 1;
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    count
}

/// The `n`-th element (from `q(0) = 6`) of the integers with at least two
/// distinct prime factors.
pub fn q_element(n: u64) -> u64 {
    let mut found = 0;
    let mut k = 6;
    loop {
        if distinct_prime_factors(k) >= 2 {
            if found == n {
                return k;
            }
            found += 1;
        }
        k += 1;
    }
}

/// A finite prefix-closed set of finite sequences over `ω`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeOnOmega {
    nodes: BTreeSet<Vec<u64>>,
}

impl TreeOnOmega {
    pub fn new(nodes: impl IntoIterator<Item = Vec<u64>>) -> Result<Self, ReductionError> {
        let nodes: BTreeSet<Vec<u64>> = nodes.into_iter().collect();
        for t in &nodes {
            if !t.is_empty() && !nodes.contains(&t[..t.len() - 1]) {
                return Err(ReductionError::Tree(format!("{t:?} is present but its parent is not")));
            }
        }
        Ok(TreeOnOmega { nodes })
    }

    pub fn empty() -> Self {
        TreeOnOmega::default()
    }

    /// Every prefix of `branch`, including `∅` and `branch` itself.
    pub fn chain(branch: &[u64]) -> Self {
        TreeOnOmega {
            nodes: (0..=branch.len()).map(|k| branch[..k].to_vec()).collect(),
        }
    }

    pub fn contains(&self, t: &[u64]) -> bool {
        self.nodes.contains(t)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Length of the longest node, `None` for the empty tree.
    pub fn depth(&self) -> Option<usize> {
        self.nodes.iter().map(Vec::len).max()
    }

    /// No node reaches `max_depth`: the finite stand-in for having no
    /// infinite branch.
    pub fn wellfounded_at(&self, max_depth: usize) -> bool {
        self.depth().is_none_or(|d| d < max_depth)
    }

    /// Which of `t^{(1)}, …, t^{(n)}` belong to the tree.
    pub fn enumerated_membership(&self, n: usize) -> Vec<bool> {
        enumerate_sequences(n).iter().map(|t| self.contains(t)).collect()
    }
}

fn node_symbol(s: &[u64], i: usize) -> Symbol {
    let p = nth_prime(cantor_pair(s[i], i as u64));
    Symbol::try_from(p).expect("prime fits a symbol")
}

/// `μ_s = 2^{-ℓ} δ_{1̄} + Σ_{i<ℓ} 2^{-(i+1)} δ_{p̄_i}` with
/// `p_i = p(cantor_pair(s(i), i))`.
pub fn mu_s(s: &[u64], horizon: usize) -> Result<DiscreteMeasure, ReductionError> {
    let l = s.len();
    let mut atoms = vec![(Point::constant(1), Ratio::new(BigInt::one(), BigInt::one() << l))];
    for i in 0..l {
        atoms.push((
            Point::constant(node_symbol(s, i)),
            Ratio::new(BigInt::one(), BigInt::one() << (i + 1)),
        ));
    }
    Ok(DiscreteMeasure::new(atoms, horizon)?)
}

/// One period of `y^s`: blocks `p_i^{2^{2ℓ−i}}` for `i < ℓ`, then
/// `1^{2^{ℓ+1}}`; the length is `2^{2ℓ+1}`.
pub fn y_s_word(s: &[u64]) -> Word {
    let l = s.len();
    let mut v = Vec::with_capacity(1 << (2 * l + 1));
    for i in 0..l {
        v.extend(std::iter::repeat_n(node_symbol(s, i), 1 << (2 * l - i)));
    }
    v.extend(std::iter::repeat_n(1, 1 << (l + 1)));
    Word::new(v)
}

/// Period of `y^{t^{(n)}}` (1-based `n`).
fn c_n(enumeration: &[Vec<u64>], n: usize) -> u128 {
    1u128 << (2 * enumeration[n - 1].len() + 1)
}

/// Block lengths `a_n b_n` for `n = 1..=stages`: `a_1 = 2`,
/// `a_{2m} = c_m`, `a_{2m+1} = 1`; `b_n` is the least value above `b_{n−1}`
/// with `a_n b_n > max(2^n a_{n+1}, 2^n ℓ_{n−1})`.
pub fn schedule(stages: usize) -> (Vec<u128>, Vec<u128>, Vec<u128>) {
    let enumeration = enumerate_sequences(stages / 2 + 2);
    let a_of = |n: usize| -> u128 {
        if n == 1 {
            2
        } else if n.is_multiple_of(2) {
            c_n(&enumeration, n / 2)
        } else {
            1
        }
    };
    let (mut a, mut b, mut ell) = (Vec::new(), Vec::new(), Vec::new());
    let (mut b_prev, mut l_prev) = (0u128, 0u128);
    for n in 1..=stages {
        let an = a_of(n);
        let target = (a_of(n + 1) << n).max(l_prev << n);
        let bn = (target / an + 1).max(b_prev + 1);
        l_prev += an * bn;
        b_prev = bn;
        a.push(an);
        b.push(bn);
        ell.push(l_prev);
    }
    (a, b, ell)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeBlock {
    pub n: usize,
    pub start: u128,
    pub len: u128,
    /// `"zeros"`, `"y"` (with the node) or `"q"` (with the symbol).
    pub kind: String,
    pub node: Option<Vec<u64>>,
    pub symbol: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct TreePoint {
    /// The prefix followed by `0̄`; only the first `prefix_len` symbols are
    /// determined by the construction.
    pub point: Point,
    pub prefix_len: usize,
    pub a: Vec<u128>,
    pub b: Vec<u128>,
    pub ell: Vec<u128>,
    pub blocks: Vec<TreeBlock>,
}

/// The prefix `x_{[0, ℓ_stages)}` coding `tree`.
pub fn tree_point(tree: &TreeOnOmega, stages: usize, cap: usize) -> Result<TreePoint, ReductionError> {
    if stages == 0 {
        return Err(ReductionError::Parameters("stages must be positive".into()));
    }
    let (a, b, ell) = schedule(stages);
    let total = *ell.last().unwrap();
    if total > cap as u128 {
        return Err(ReductionError::CapExceeded {
            needed: total,
            cap: cap as u128,
        });
    }
    let enumeration = enumerate_sequences(stages / 2 + 1);
    let mut out: Vec<Symbol> = Vec::with_capacity(total as usize);
    let mut blocks = Vec::with_capacity(stages);
    for n in 1..=stages {
        let len = a[n - 1] * b[n - 1];
        let start = out.len() as u128;
        let block = if n % 2 == 1 {
            out.extend(std::iter::repeat_n(0, len as usize));
            TreeBlock {
                n,
                start,
                len,
                kind: "zeros".into(),
                node: None,
                symbol: None,
            }
        } else {
            let t = &enumeration[n / 2 - 1];
            if tree.contains(t) {
                let y = y_s_word(t);
                for _ in 0..b[n - 1] {
                    out.extend_from_slice(y.as_slice());
                }
                TreeBlock {
                    n,
                    start,
                    len,
                    kind: "y".into(),
                    node: Some(t.clone()),
                    symbol: None,
                }
            } else {
                let q = q_element((n / 2) as u64);
                out.extend(std::iter::repeat_n(q as Symbol, len as usize));
                TreeBlock {
                    n,
                    start,
                    len,
                    kind: "q".into(),
                    node: Some(t.clone()),
                    symbol: Some(q),
                }
            }
        };
        blocks.push(block);
    }
    let prefix_len = out.len();
    let point = Point::eventually_periodic(Word::new(out), Word::new(vec![0]))?;
    Ok(TreePoint {
        point,
        prefix_len,
        a,
        b,
        ell,
        blocks,
    })
}
