//! Ergodic averages of finite-window observables and finite-horizon
//! classifiers built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::measure::{emp_measure, prohorov, DiscreteMeasure, MeasureError};
use crate::rational::{common_denominator, Ratio};
use crate::symbolic::{Generator, Point, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BirkhoffError {
    #[error("window must be positive")]
    ZeroWindow,
    #[error("table word {0:?} has the wrong length")]
    BadTableWord(Vec<Symbol>),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("checkpoints must be strictly increasing and positive")]
    Checkpoints,
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// `φ(x) = table[x_0 … x_{m−1}]`, with `default` for words not listed.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalObservable {
    window: usize,
    table: BTreeMap<Vec<Symbol>, Ratio>,
    default: Ratio,
}

impl LocalObservable {
    pub fn new(window: usize, table: BTreeMap<Vec<Symbol>, Ratio>, default: Ratio) -> Result<Self, BirkhoffError> {
        if window == 0 {
            return Err(BirkhoffError::ZeroWindow);
        }
        if let Some(w) = table.keys().find(|w| w.len() != window) {
            return Err(BirkhoffError::BadTableWord(w.clone()));
        }
        Ok(LocalObservable { window, table, default })
    }

    /// `χ_{x_0 = s}`.
    pub fn indicator(symbol: Symbol) -> Self {
        let table = BTreeMap::from([(vec![symbol], Ratio::from_integer(1.into()))]);
        LocalObservable {
            window: 1,
            table,
            default: Ratio::zero(),
        }
    }

    pub fn constant(c: Ratio) -> Self {
        LocalObservable {
            window: 1,
            table: BTreeMap::new(),
            default: c,
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `sup |φ|`.
    pub fn bound(&self) -> Ratio {
        self.table
            .values()
            .chain(std::iter::once(&self.default))
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Ratio::zero)
    }

    pub fn eval_window(&self, w: &[Symbol]) -> &Ratio {
        self.table.get(w).unwrap_or(&self.default)
    }

    pub fn eval(&self, x: &Point) -> Ratio {
        self.eval_window(x.prefix(self.window).as_slice()).clone()
    }

    /// `∫ φ dμ`.
    pub fn integrate(&self, mu: &DiscreteMeasure) -> Ratio {
        mu.atoms()
            .iter()
            .fold(Ratio::zero(), |acc, (p, w)| acc + w * self.eval(p))
    }

    /// Common denominator and integer numerators, for fast running sums.
    fn scaled(&self) -> (i128, BTreeMap<Vec<Symbol>, i128>, i128) {
        let d = common_denominator(self.table.values().chain(std::iter::once(&self.default)));
        let num = |r: &Ratio| -> i128 {
            (r.numer() * (&d / r.denom())).to_i128().expect("observable values fit in i128")
        };
        let table = self.table.iter().map(|(k, v)| (k.clone(), num(v))).collect();
        (d.to_i128().expect("denominator fits in i128"), table, num(&self.default))
    }
}

/// `A_k φ(x)` by direct summation over the first `k` shifts.
pub fn birkhoff_average(phi: &LocalObservable, x: &Point, k: usize) -> Ratio {
    assert!(k >= 1, "k must be positive");
    let m = phi.window;
    let w = x.prefix(k + m - 1);
    let sum = w
        .as_slice()
        .windows(m)
        .fold(Ratio::zero(), |acc, s| acc + phi.eval_window(s));
    sum / Ratio::from_integer(BigInt::from(k))
}

/// `∫ φ dEmp(x, k)`, the second evaluation route.
pub fn birkhoff_average_via_emp(phi: &LocalObservable, x: &Point, k: usize) -> Result<Ratio, BirkhoffError> {
    Ok(phi.integrate(&emp_measure(x, k, phi.window)?))
}

/// `(k, A_k φ(x))` at the requested `k`, plus tail extremes.
#[derive(Clone, Debug, PartialEq)]
pub struct AverageSeries {
    pub values: Vec<(usize, Ratio)>,
    pub liminf_est: Ratio,
    pub limsup_est: Ratio,
}

/// Running numerators `S_k = D · Σ_{i<k} φ(T^i x)` for `k = 0..=max_k`.
fn running_sums(phi: &LocalObservable, x: &Point, max_k: usize) -> (i128, Vec<i128>) {
    let (d, table, default) = phi.scaled();
    let m = phi.window;
    let w = x.prefix(max_k + m - 1);
    let mut sums = Vec::with_capacity(max_k + 1);
    sums.push(0i128);
    let mut acc = 0i128;
    for s in w.as_slice().windows(m) {
        acc += table.get(s).copied().unwrap_or(default);
        sums.push(acc);
    }
    (d, sums)
}

/// Averages at each `k` in `ks` (strictly increasing); the tail extremes are
/// taken over the values with `k >= τ · max k`.
pub fn average_series(
    phi: &LocalObservable,
    x: &Point,
    ks: &[usize],
    tau: &Ratio,
) -> Result<AverageSeries, BirkhoffError> {
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BirkhoffError::Checkpoints);
    }
    let max_k = *ks.last().unwrap();
    let (d, sums) = running_sums(phi, x, max_k);
    let values: Vec<(usize, Ratio)> = ks
        .iter()
        .map(|&k| (k, Ratio::new(BigInt::from(sums[k]), BigInt::from(d) * BigInt::from(k))))
        .collect();
    let cut = tau * Ratio::from_integer(BigInt::from(max_k));
    let tail: Vec<&Ratio> = values
        .iter()
        .filter(|(k, _)| Ratio::from_integer(BigInt::from(*k)) >= cut)
        .map(|(_, v)| v)
        .collect();
    Ok(AverageSeries {
        liminf_est: tail.iter().copied().min().cloned().unwrap_or_else(Ratio::zero),
        limsup_est: tail.iter().copied().max().cloned().unwrap_or_else(Ratio::zero),
        values,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regularity {
    Regular { alpha: Ratio },
    Irregular { gap: Ratio },
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub verdict: Regularity,
    /// `min` and `max` of `A_k φ` for `k ∈ [τK, K]`.
    pub tail_low: Ratio,
    pub tail_high: Ratio,
    /// Same over the previous window `[τ²K, τK]`.
    pub prev_low: Ratio,
    pub prev_high: Ratio,
}

/// Three-valued finite-horizon test for convergence of `A_k φ(x)`.
///
/// Regular with `α` = midpoint when the spread over `[τK, K]` is below `η`;
/// irregular when the spread exceeds `2η` on both `[τK, K]` and the
/// previous window `[τ²K, τK]`; undecided otherwise.
pub fn regularity_report(
    phi: &LocalObservable,
    x: &Point,
    big_k: usize,
    tau: &Ratio,
    eta: &Ratio,
) -> Result<RegularityReport, BirkhoffError> {
    if big_k < 10 {
        return Err(BirkhoffError::Parameter("K must be at least 10".into()));
    }
    if *tau <= Ratio::zero() || *tau >= Ratio::from_integer(1.into()) {
        return Err(BirkhoffError::Parameter("tau must lie in (0, 1)".into()));
    }
    if *eta <= Ratio::zero() {
        return Err(BirkhoffError::Parameter("eta must be positive".into()));
    }
    let (d, sums) = running_sums(phi, x, big_k);
    let kr = Ratio::from_integer(BigInt::from(big_k));
    let ceil = |r: Ratio| r.ceil().to_integer().to_usize().unwrap().max(1);
    let mid = ceil(tau * &kr);
    let low = ceil(tau * tau * &kr);
    // extremes of S_k / k over [a, b] by cross-multiplication
    let extremes = |a: usize, b: usize| -> (Ratio, Ratio) {
        let (mut lo, mut hi) = (a, a);
        for k in a..=b {
            if sums[k] * (lo as i128) < sums[lo] * (k as i128) {
                lo = k;
            }
            if sums[k] * (hi as i128) > sums[hi] * (k as i128) {
                hi = k;
            }
        }
        let r = |k: usize| Ratio::new(BigInt::from(sums[k]), BigInt::from(d) * BigInt::from(k));
        (r(lo), r(hi))
    };
    let (tail_low, tail_high) = extremes(mid, big_k);
    let (prev_low, prev_high) = extremes(low, mid);
    let spread = &tail_high - &tail_low;
    let two_eta = eta * Ratio::from_integer(2.into());
    let verdict = if spread < *eta {
        Regularity::Regular {
            alpha: (&tail_high + &tail_low) / Ratio::from_integer(2.into()),
        }
    } else if spread > two_eta && &prev_high - &prev_low > two_eta {
        Regularity::Irregular { gap: spread }
    } else {
        Regularity::Undecided
    };
    Ok(RegularityReport {
        verdict,
        tail_low,
        tail_high,
        prev_low,
        prev_high,
    })
}

/// Distances from `Emp(x, n)` to a family of targets at each checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct VsetTable {
    /// `(n, target index, D(Emp(x, n), target))`.
    pub rows: Vec<(usize, usize, Ratio)>,
    /// `(n, nearest target, distance)`; ties go to the lower index.
    pub nearest: Vec<(usize, usize, Ratio)>,
    /// `(k, ℓ, D(Emp(x, k), Emp(x, ℓ)))` for consecutive checkpoints.
    pub cauchy: Vec<(usize, usize, Ratio)>,
}

pub fn vset_diagnostics(
    x: &Point,
    targets: &[DiscreteMeasure],
    checkpoints: &[usize],
    horizon: usize,
) -> Result<VsetTable, BirkhoffError> {
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BirkhoffError::Checkpoints);
    }
    let emps: Vec<DiscreteMeasure> = checkpoints
        .iter()
        .map(|&n| emp_measure(x, n, horizon))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut nearest = Vec::new();
    for (&n, e) in checkpoints.iter().zip(&emps) {
        let mut best: Option<(usize, Ratio)> = None;
        for (t, target) in targets.iter().enumerate() {
            let d = prohorov(e, target, horizon);
            if best.as_ref().is_none_or(|(_, b)| d < *b) {
                best = Some((t, d.clone()));
            }
            rows.push((n, t, d));
        }
        if let Some((t, d)) = best {
            nearest.push((n, t, d));
        }
    }
    let cauchy = checkpoints
        .windows(2)
        .zip(emps.windows(2))
        .map(|(n, e)| (n[0], n[1], prohorov(&e[0], &e[1], horizon)))
        .collect();
    Ok(VsetTable { rows, nearest, cauchy })
}

/// `0^{b^0} 1^{b^0} 0^{b^1} 1^{b^1} 0^{b^2} …`.
#[derive(Debug)]
struct AlternatingBlocks {
    base: usize,
}

impl Generator for AlternatingBlocks {
    fn name(&self) -> &str {
        "alternating_blocks"
    }

    fn params(&self) -> serde_json::Value {
        serde_json::json!({ "base": self.base })
    }

    fn extend(&self, buf: &mut Vec<Symbol>, min_len: usize) {
        buf.clear();
        let mut block = 1usize;
        while buf.len() < min_len {
            buf.extend(std::iter::repeat_n(0, block));
            buf.extend(std::iter::repeat_n(1, block));
            block *= self.base;
        }
    }
}

/// The block alternator with block lengths `base^n`; `base >= 2`.
pub fn alternating_blocks(base: usize) -> Point {
    assert!(base >= 2, "block base must be at least 2");
    Point::from_generator(Box::new(AlternatingBlocks { base }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::symbolic::Word;
    use proptest::prelude::*;

    fn per(s: &str) -> Point {
        Point::periodic(Word::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn average_examples() {
        let chi = LocalObservable::indicator(1);
        assert_eq!(birkhoff_average(&chi, &per("01"), 2), frac(1, 2));
        let c = LocalObservable::constant(frac(3, 7));
        for k in 1..6 {
            assert_eq!(birkhoff_average(&c, &per("0110"), k), frac(3, 7));
        }
        // the word 011000000000
        let zero2 = per("011000000000");
        assert_eq!(birkhoff_average(&chi, &zero2, 12), frac(1, 6));
        assert_eq!(birkhoff_average_via_emp(&chi, &zero2, 12).unwrap(), frac(1, 6));
    }

    #[test]
    fn fixed_point_is_regular() {
        let r = regularity_report(&LocalObservable::indicator(1), &per("0"), 1000, &frac(1, 2), &frac(1, 100)).unwrap();
        assert_eq!(r.verdict, Regularity::Regular { alpha: int(0) });
    }

    #[test]
    fn series_tail_extremes() {
        let s = average_series(&LocalObservable::indicator(1), &per("0011"), &[1, 2, 3, 4, 5, 6], &frac(1, 2)).unwrap();
        assert_eq!(s.values[2], (3, frac(1, 3)));
        assert_eq!(s.liminf_est, frac(1, 3));
        assert_eq!(s.limsup_est, frac(1, 2));
        assert!(average_series(&LocalObservable::indicator(1), &per("0"), &[2, 2], &frac(1, 2)).is_err());
    }

    #[test]
    fn vset_of_periodic_orbit_is_zero() {
        let x = per("011");
        let orbit = emp_measure(&x, 3, 8).unwrap();
        let t = vset_diagnostics(&x, &[orbit], &[3, 6, 9, 30], 8).unwrap();
        assert!(t.rows.iter().all(|(_, _, d)| d.is_zero()));
        assert!(t.cauchy.iter().all(|(_, _, d)| d.is_zero()));
    }

    #[test]
    fn windowed_observable_rejects_bad_words() {
        let table = BTreeMap::from([(vec![0, 1], int(1))]);
        assert!(LocalObservable::new(2, table.clone(), int(0)).is_ok());
        assert!(LocalObservable::new(3, table, int(0)).is_err());
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (prop::collection::vec(0u32..3, 0..6), prop::collection::vec(0u32..3, 1..6))
            .prop_map(|(a, b)| Point::eventually_periodic(Word::new(a), Word::new(b)).unwrap())
    }

    fn arb_observable() -> impl Strategy<Value = LocalObservable> {
        (1usize..3, prop::collection::vec(-4i64..5, 9), -3i64..4).prop_map(|(m, vals, def)| {
            let mut table = BTreeMap::new();
            let mut i = 0;
            let words: Vec<Vec<Symbol>> = if m == 1 {
                (0..3).map(|a| vec![a]).collect()
            } else {
                (0..3).flat_map(|a| (0..3).map(move |b| vec![a, b])).collect()
            };
            for w in words {
                if vals[i % vals.len()] != 0 {
                    table.insert(w, frac(vals[i % vals.len()], 3));
                }
                i += 1;
            }
            LocalObservable::new(m, table, int(def)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn both_routes_agree(phi in arb_observable(), x in arb_point(), k in 1usize..40) {
            prop_assert_eq!(birkhoff_average(&phi, &x, k), birkhoff_average_via_emp(&phi, &x, k).unwrap());
        }

        #[test]
        fn increments_are_bounded(phi in arb_observable(), x in arb_point(), k in 1usize..40) {
            let a = birkhoff_average(&phi, &x, k);
            let b = birkhoff_average(&phi, &x, k + 1);
            let bound = phi.bound() * int(2) / int(k as i64 + 1);
            prop_assert!((a - b).abs() <= bound);
        }
    }
}
