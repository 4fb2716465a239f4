//! Finitely supported probability measures, empirical measures and the exact
//! Prohorov distance.
//!
//! All distances are evaluated at an explicit horizon `h`: two support
//! points agreeing on their first `h` symbols are treated as the same point
//! and `rho` between them is `0`. The truncated distance `D_h` satisfies
//! `D_h <= D <= max(D_h, 2^{-h})`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::flow::{bipartite_transport, Capacity};
use crate::rational::{common_denominator, dyadic, scaled_numerator, Ratio};
use crate::symbolic::{window_disagreement, Point, Symbol};
use crate::tracing::Specification;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("measure has no atoms")]
    Empty,
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("weights sum to {0}, not 1")]
    NotNormalized(String),
    #[error("{coeffs} coefficients for {measures} measures")]
    LengthMismatch { coeffs: usize, measures: usize },
    #[error("support of size {size} exceeds the oracle limit {limit}")]
    SupportTooLarge { size: usize, limit: usize },
    #[error("horizon must be positive")]
    ZeroHorizon,
    #[error("empirical measure needs at least one step")]
    ZeroLength,
}

/// Finitely supported Borel probability measure with exact weights.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    atoms: Vec<(Point, Ratio)>,
}

impl DiscreteMeasure {
    /// Validates weights and merges atoms that agree on the first `horizon`
    /// symbols. Zero-weight atoms are dropped.
    pub fn new(atoms: Vec<(Point, Ratio)>, horizon: usize) -> Result<Self, MeasureError> {
        if horizon == 0 {
            return Err(MeasureError::ZeroHorizon);
        }
        if atoms.is_empty() {
            return Err(MeasureError::Empty);
        }
        let mut total = Ratio::zero();
        for (_, w) in &atoms {
            if *w < Ratio::zero() {
                return Err(MeasureError::NegativeWeight(w.to_string()));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(MeasureError::NotNormalized(total.to_string()));
        }
        let mut index: HashMap<Vec<Symbol>, usize> = HashMap::new();
        let mut merged: Vec<(Point, Ratio)> = Vec::new();
        for (p, w) in atoms {
            if w.is_zero() {
                continue;
            }
            let key = p.prefix(horizon).into_vec();
            match index.get(&key) {
                Some(&i) => merged[i].1 += w,
                None => {
                    index.insert(key, merged.len());
                    merged.push((p, w));
                }
            }
        }
        Ok(DiscreteMeasure { atoms: merged })
    }

    pub fn dirac(x: Point) -> Self {
        DiscreteMeasure {
            atoms: vec![(x, Ratio::one())],
        }
    }

    pub fn atoms(&self) -> &[(Point, Ratio)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.atoms.iter().map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The measure seen through length-`h` windows, merged and sorted.
    pub fn windows(&self, h: usize) -> Vec<(Vec<Symbol>, Ratio)> {
        let mut map: BTreeMap<Vec<Symbol>, Ratio> = BTreeMap::new();
        for (p, w) in &self.atoms {
            *map.entry(p.prefix(h).into_vec()).or_insert_with(Ratio::zero) += w;
        }
        map.into_iter().collect()
    }

    /// Equality of the window distributions at horizon `h`.
    pub fn same_at(&self, other: &DiscreteMeasure, h: usize) -> bool {
        self.windows(h) == other.windows(h)
    }
}

/// `Emp(x, n) = (δ_x + δ_{Tx} + … + δ_{T^{n-1}x}) / n`, with shifts merged when
/// they agree on `horizon` symbols.
pub fn emp_measure(x: &Point, n: usize, horizon: usize) -> Result<DiscreteMeasure, MeasureError> {
    if n == 0 {
        return Err(MeasureError::ZeroLength);
    }
    if horizon == 0 {
        return Err(MeasureError::ZeroHorizon);
    }
    let counts = window_counts(x, 0, n, horizon);
    let total = Ratio::from_integer(BigInt::from(n));
    let atoms = counts
        .into_iter()
        .map(|(first, count)| (x.shift(first), Ratio::from_integer(BigInt::from(count)) / &total))
        .collect();
    Ok(DiscreteMeasure { atoms })
}

/// `(first index, multiplicity)` of each distinct length-`h` window starting
/// at `start..start+n`, in order of first occurrence.
fn window_counts(x: &Point, start: usize, n: usize, h: usize) -> Vec<(usize, usize)> {
    let mut buf = Vec::with_capacity(n + h);
    x.shift(start).write_prefix(n + h - 1, &mut buf);
    let mut index: HashMap<&[Symbol], usize> = HashMap::new();
    let mut out: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let w = &buf[i..i + h];
        match index.get(w) {
            Some(&k) => out[k].1 += 1,
            None => {
                index.insert(w, out.len());
                out.push((start + i, 1));
            }
        }
    }
    out
}

/// `Emp(x̄)`: uniform measure on a finite list of points (with repetition).
pub fn emp_of_sequence(points: &[Point], horizon: usize) -> Result<DiscreteMeasure, MeasureError> {
    if points.is_empty() {
        return Err(MeasureError::Empty);
    }
    let w = Ratio::new(BigInt::one(), BigInt::from(points.len()));
    DiscreteMeasure::new(points.iter().map(|p| (p.clone(), w.clone())).collect(), horizon)
}

/// Empirical measure of the concatenated orbit segments of `xi`.
pub fn emp_of_specification(xi: &Specification, horizon: usize) -> Result<DiscreteMeasure, MeasureError> {
    if horizon == 0 {
        return Err(MeasureError::ZeroHorizon);
    }
    let total: usize = xi.segments().iter().map(|(_, n)| n).sum();
    let denom = Ratio::from_integer(BigInt::from(total));
    let mut atoms = Vec::new();
    for (x, n) in xi.segments() {
        for (first, count) in window_counts(x, 0, *n, horizon) {
            atoms.push((x.shift(first), Ratio::from_integer(BigInt::from(count)) / &denom));
        }
    }
    DiscreteMeasure::new(atoms, horizon)
}

/// `Σ coeffs[i] · measures[i]`, merging atoms at `horizon`.
pub fn convex_combine(
    coeffs: &[Ratio],
    measures: &[DiscreteMeasure],
    horizon: usize,
) -> Result<DiscreteMeasure, MeasureError> {
    if coeffs.len() != measures.len() {
        return Err(MeasureError::LengthMismatch {
            coeffs: coeffs.len(),
            measures: measures.len(),
        });
    }
    let mut atoms = Vec::new();
    for (c, m) in coeffs.iter().zip(measures) {
        if *c < Ratio::zero() {
            return Err(MeasureError::NegativeWeight(c.to_string()));
        }
        for (p, w) in &m.atoms {
            atoms.push((p.clone(), c * w));
        }
    }
    DiscreteMeasure::new(atoms, horizon)
}

/// Transport plan witnessing feasibility of a Prohorov radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    /// Windows of the two supports, in row/column order.
    pub rows: Vec<Vec<Symbol>>,
    pub cols: Vec<Vec<Symbol>>,
    /// `flow[i][j]` is nonzero only where `rho(row_i, col_j) <= threshold`.
    pub flow: Vec<Vec<Ratio>>,
    /// Largest pairwise distance allowed to carry mass.
    pub threshold: Ratio,
}

impl Coupling {
    pub fn total(&self) -> Ratio {
        self.flow.iter().flatten().fold(Ratio::zero(), |a, b| a + b)
    }

    /// Checks nonnegativity, marginal bounds and the support restriction.
    pub fn is_valid(&self, row_mass: &[Ratio], col_mass: &[Ratio]) -> bool {
        let nonneg = self.flow.iter().flatten().all(|f| *f >= Ratio::zero());
        let rows_ok = self
            .flow
            .iter()
            .zip(row_mass)
            .all(|(r, m)| r.iter().fold(Ratio::zero(), |a, b| a + b) <= *m);
        let cols_ok = (0..self.cols.len()).all(|j| {
            self.flow.iter().fold(Ratio::zero(), |a, r| a + &r[j]) <= col_mass[j]
        });
        let support_ok = self.flow.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, f)| {
                f.is_zero() || distance_of(window_disagreement(&self.rows[i], &self.cols[j])) <= self.threshold
            })
        });
        nonneg && rows_ok && cols_ok && support_ok && self.total() <= Ratio::one()
    }
}

#[derive(Clone, Debug)]
pub struct ProhorovReport {
    pub distance: Ratio,
    /// Whether the infimum is itself a feasible radius.
    pub attained: bool,
    /// Optimal transport at the minimizing radius.
    pub coupling: Coupling,
}

fn distance_of(k: Option<usize>) -> Ratio {
    k.map(dyadic).unwrap_or_else(Ratio::zero)
}

struct PairTable {
    mu: Vec<(Vec<Symbol>, Ratio)>,
    nu: Vec<(Vec<Symbol>, Ratio)>,
    /// Disagreement index per pair; `None` = agree to the horizon.
    levels: Vec<Vec<Option<usize>>>,
    /// Sorted distinct pairwise distances.
    distances: Vec<Ratio>,
}

impl PairTable {
    fn new(mu: &DiscreteMeasure, nu: &DiscreteMeasure, h: usize) -> Self {
        let mu = mu.windows(h);
        let nu = nu.windows(h);
        let levels: Vec<Vec<Option<usize>>> = mu
            .iter()
            .map(|(a, _)| nu.iter().map(|(b, _)| window_disagreement(a, b)).collect())
            .collect();
        let mut distances: Vec<Ratio> = levels.iter().flatten().map(|k| distance_of(*k)).collect();
        distances.sort();
        distances.dedup();
        PairTable { mu, nu, levels, distances }
    }

    fn distance(&self, i: usize, j: usize) -> Ratio {
        distance_of(self.levels[i][j])
    }

    /// Pairs with distance `<= threshold`.
    fn pairs_within(&self, threshold: &Ratio) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.mu.len() {
            for j in 0..self.nu.len() {
                if self.distance(i, j) <= *threshold {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Half-open radius intervals `(lo, hi]` on which the admissible pair set
    /// `{rho < eps}` is constant, together with that set's distance cap.
    /// `hi == None` means unbounded; `cap == None` means no pair is admissible.
    fn intervals(&self) -> Vec<(Ratio, Option<Ratio>, Option<Ratio>)> {
        let d = &self.distances;
        let mut out = Vec::new();
        if d[0] > Ratio::zero() {
            out.push((Ratio::zero(), Some(d[0].clone()), None));
        }
        for t in 0..d.len() {
            out.push((d[t].clone(), d.get(t + 1).cloned(), Some(d[t].clone())));
        }
        out
    }
}

/// Exact Prohorov distance at the given horizon.
pub fn prohorov(mu: &DiscreteMeasure, nu: &DiscreteMeasure, horizon: usize) -> Ratio {
    prohorov_report(mu, nu, horizon).distance
}

/// Prohorov distance together with attainment and an optimal coupling.
///
/// On each radius interval the admissible pair set is fixed; the radius is
/// feasible iff the transport deficiency `1 - maxflow` is at most the radius.
/// Deficiency is nonincreasing across intervals, so the first feasible
/// interval holds the infimum.
pub fn prohorov_report(mu: &DiscreteMeasure, nu: &DiscreteMeasure, horizon: usize) -> ProhorovReport {
    assert!(horizon >= 1, "horizon must be positive");
    let table = PairTable::new(mu, nu, horizon);
    let denom = common_denominator(table.mu.iter().chain(&table.nu).map(|(_, w)| w));
    let supply: Vec<BigUint> = table.mu.iter().map(|(_, w)| scaled_numerator(w, &denom)).collect();
    let demand: Vec<BigUint> = table.nu.iter().map(|(_, w)| scaled_numerator(w, &denom)).collect();
    let denom_r = Ratio::from_integer(denom.clone());
    let small = denom.to_u128().filter(|d| d.checked_mul(4).is_some());

    for (lo, hi, cap) in table.intervals() {
        let pairs = match &cap {
            Some(c) => table.pairs_within(c),
            None => Vec::new(),
        };
        let (flow_total, matrix) = match small {
            Some(d) => {
                let s: Vec<u128> = supply.iter().map(|v| v.to_u128().unwrap()).collect();
                let t: Vec<u128> = demand.iter().map(|v| v.to_u128().unwrap()).collect();
                let (f, m) = bipartite_transport(&s, &t, &pairs, d * 2 + 1);
                (BigUint::from(f), lift(m))
            }
            None => {
                let inf = BigUint::from(2u32) * denom.to_biguint().unwrap() + 1u32;
                bipartite_transport(&supply, &demand, &pairs, inf)
            }
        };
        let deficiency = Ratio::one() - Ratio::from_integer(BigInt::from(flow_total)) / &denom_r;
        let candidate = if deficiency > lo { deficiency.clone() } else { lo.clone() };
        if hi.as_ref().is_none_or(|h| candidate <= *h) {
            let coupling = Coupling {
                rows: table.mu.iter().map(|(w, _)| w.clone()).collect(),
                cols: table.nu.iter().map(|(w, _)| w.clone()).collect(),
                flow: matrix
                    .into_iter()
                    .map(|r| {
                        r.into_iter()
                            .map(|v| Ratio::from_integer(BigInt::from(v)) / &denom_r)
                            .collect()
                    })
                    .collect(),
                threshold: cap.unwrap_or_else(|| -Ratio::one()),
            };
            return ProhorovReport {
                attained: deficiency > lo,
                distance: candidate,
                coupling,
            };
        }
    }
    unreachable!("the unbounded interval is always feasible")
}

fn lift<C: Capacity + Into<BigUint>>(m: Vec<Vec<C>>) -> Vec<Vec<BigUint>> {
    m.into_iter().map(|r| r.into_iter().map(Into::into).collect()).collect()
}

/// Largest μ-support accepted by [`prohorov_bruteforce_oracle`].
pub const ORACLE_LIMIT: usize = 12;

/// Definitional referee for [`prohorov`]: enumerates every subset `A` of the
/// μ-support and evaluates `μ(A) <= ν(A^ε) + ε` directly.
///
/// The infimum is either a pairwise distance (approached from the right) or
/// a value `μ(A) − ν(N(A))` for some neighbourhood structure; the predicate
/// "feasible at c, or at every radius just above c" is monotone in `c`, so
/// a binary search over those candidates finds it.
pub fn prohorov_bruteforce_oracle(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    horizon: usize,
) -> Result<Ratio, MeasureError> {
    if horizon == 0 {
        return Err(MeasureError::ZeroHorizon);
    }
    let table = PairTable::new(mu, nu, horizon);
    let (a, b) = (table.mu.len(), table.nu.len());
    if a > ORACLE_LIMIT {
        return Err(MeasureError::SupportTooLarge { size: a, limit: ORACLE_LIMIT });
    }
    if b > 64 {
        return Err(MeasureError::SupportTooLarge { size: b, limit: 64 });
    }
    let mu_w: Vec<Ratio> = table.mu.iter().map(|(_, w)| w.clone()).collect();
    let nu_w: Vec<Ratio> = table.nu.iter().map(|(_, w)| w.clone()).collect();

    // neighbourhood masks: strict (< eps) or closed (<= eps)
    let masks = |eps: &Ratio, closed: bool| -> Vec<u64> {
        (0..a)
            .map(|i| {
                (0..b).fold(0u64, |m, j| {
                    let d = table.distance(i, j);
                    let inside = if closed { d <= *eps } else { d < *eps };
                    if inside {
                        m | (1 << j)
                    } else {
                        m
                    }
                })
            })
            .collect()
    };
    let nu_mass = |mask: u64| -> Ratio {
        (0..b)
            .filter(|j| mask & (1 << j) != 0)
            .fold(Ratio::zero(), |acc, j| acc + &nu_w[j])
    };
    // max over A of μ(A) − ν(N(A))
    let worst = |m: &[u64]| -> Ratio {
        let mut best = Ratio::zero();
        for set in 1u32..(1 << a) {
            let mut mass = Ratio::zero();
            let mut nb = 0u64;
            for i in 0..a {
                if set & (1 << i) != 0 {
                    mass += &mu_w[i];
                    nb |= m[i];
                }
            }
            let excess = mass - nu_mass(nb);
            if excess > best {
                best = excess;
            }
        }
        best
    };
    let feasible = |eps: &Ratio| -> bool {
        *eps > Ratio::zero() && worst(&masks(eps, false)) <= *eps
    };
    let feasible_right = |c: &Ratio| -> bool { worst(&masks(c, true)) <= *c };

    let mut candidates: Vec<Ratio> = vec![Ratio::zero(), Ratio::one()];
    candidates.extend(table.distances.iter().cloned());
    for d in table.distances.iter().cloned().chain(std::iter::once(-Ratio::one())) {
        let m = masks(&d, true);
        for set in 1u32..(1 << a) {
            let mut mass = Ratio::zero();
            let mut nb = 0u64;
            for i in 0..a {
                if set & (1 << i) != 0 {
                    mass += &mu_w[i];
                    nb |= m[i];
                }
            }
            let v = mass - nu_mass(nb);
            if v > Ratio::zero() {
                candidates.push(v);
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let ok = |c: &Ratio| feasible(c) || feasible_right(c);
    // smallest candidate satisfying the monotone predicate
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    debug_assert!(ok(&candidates[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::symbolic::Word;

    fn per(s: &str) -> Point {
        Point::periodic(Word::parse(s).unwrap()).unwrap()
    }

    fn ep(pre: &str, p: &str) -> Point {
        Point::eventually_periodic(Word::parse(pre).unwrap(), Word::parse(p).unwrap()).unwrap()
    }

    #[test]
    fn emp_measure_examples() {
        let x = per("01");
        let d = emp_measure(&x, 1, 8).unwrap();
        assert_eq!(d.len(), 1);
        let two = emp_measure(&x, 2, 8).unwrap();
        let four = emp_measure(&x, 4, 8).unwrap();
        let expected = vec![
            (Word::parse("01010101").unwrap().into_vec(), frac(1, 2)),
            (Word::parse("10101010").unwrap().into_vec(), frac(1, 2)),
        ];
        assert_eq!(two.windows(8), expected);
        assert_eq!(four.windows(8), expected);
        assert!(matches!(emp_measure(&x, 0, 8), Err(MeasureError::ZeroLength)));
    }

    #[test]
    fn emp_of_specification_examples() {
        let x = per("011");
        let y = per("2");
        let h = 6;
        let single = Specification::new(vec![(x.clone(), 5)]).unwrap();
        assert!(emp_of_specification(&single, h).unwrap().same_at(&emp_measure(&x, 5, h).unwrap(), h));
        let twice = Specification::new(vec![(x.clone(), 5), (x.clone(), 5)]).unwrap();
        assert!(emp_of_specification(&twice, h).unwrap().same_at(&emp_measure(&x, 5, h).unwrap(), h));
        let pair = Specification::new(vec![(x.clone(), 1), (y.clone(), 1)]).unwrap();
        let half = DiscreteMeasure::new(vec![(x, frac(1, 2)), (y, frac(1, 2))], h).unwrap();
        assert!(emp_of_specification(&pair, h).unwrap().same_at(&half, h));
    }

    #[test]
    fn convex_combine_examples() {
        let h = 4;
        let (x, y) = (per("0"), per("1"));
        let mu = DiscreteMeasure::dirac(x.clone());
        assert!(convex_combine(&[int(1)], std::slice::from_ref(&mu), h).unwrap().same_at(&mu, h));
        let merged = convex_combine(&[frac(1, 2), frac(1, 2)], &[mu.clone(), mu.clone()], h).unwrap();
        assert_eq!(merged.len(), 1);
        let mix = convex_combine(&[frac(1, 3), frac(2, 3)], &[mu, DiscreteMeasure::dirac(y.clone())], h).unwrap();
        let expected = DiscreteMeasure::new(vec![(x, frac(1, 3)), (y, frac(2, 3))], h).unwrap();
        assert!(mix.same_at(&expected, h));
        assert!(matches!(
            convex_combine(&[int(1)], &[], h),
            Err(MeasureError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn measure_validation() {
        let x = per("0");
        assert!(matches!(DiscreteMeasure::new(vec![], 3), Err(MeasureError::Empty)));
        assert!(matches!(
            DiscreteMeasure::new(vec![(x.clone(), frac(1, 2))], 3),
            Err(MeasureError::NotNormalized(_))
        ));
        assert!(matches!(
            DiscreteMeasure::new(vec![(x.clone(), frac(3, 2)), (x.clone(), frac(-1, 2))], 3),
            Err(MeasureError::NegativeWeight(_))
        ));
        // points agreeing to the horizon merge
        let m = DiscreteMeasure::new(vec![(ep("000", "1"), frac(1, 2)), (per("0"), frac(1, 2))], 3).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn prohorov_examples() {
        let h = 16;
        let x = per("0");
        let y = per("1");
        let mu = DiscreteMeasure::dirac(x.clone());
        assert!(prohorov(&mu, &mu, h).is_zero());
        // Diracs: distance min(rho, 1)
        let near = ep("00", "1");
        assert_eq!(prohorov(&mu, &DiscreteMeasure::dirac(near.clone()), h), frac(1, 4));
        assert_eq!(prohorov(&mu, &DiscreteMeasure::dirac(y.clone()), h), int(1));
        // ½δ_x + ½δ_y vs δ_x with rho(x, y) = 1
        let half = DiscreteMeasure::new(vec![(x.clone(), frac(1, 2)), (y, frac(1, 2))], h).unwrap();
        let r = prohorov_report(&half, &mu, h);
        assert_eq!(r.distance, frac(1, 2));
        assert!(r.attained);
        assert_eq!(r.coupling.total(), frac(1, 2));
    }

    #[test]
    fn oracle_examples() {
        let h = 16;
        let x = per("0");
        let mu = DiscreteMeasure::dirac(x.clone());
        assert!(prohorov_bruteforce_oracle(&mu, &mu, h).unwrap().is_zero());
        let near = DiscreteMeasure::dirac(ep("00", "1"));
        assert_eq!(prohorov_bruteforce_oracle(&mu, &near, h).unwrap(), frac(1, 4));
        let uniform = DiscreteMeasure::new(
            vec![(per("0"), frac(1, 3)), (per("1"), frac(1, 3)), (per("2"), frac(1, 3))],
            h,
        )
        .unwrap();
        assert_eq!(prohorov_bruteforce_oracle(&uniform, &mu, h).unwrap(), frac(2, 3));
        assert_eq!(prohorov(&uniform, &mu, h), frac(2, 3));
    }

    #[test]
    fn oracle_rejects_large_support() {
        let atoms: Vec<(Point, Ratio)> = (0..13).map(|s| (Point::constant(s), frac(1, 13))).collect();
        let big = DiscreteMeasure::new(atoms, 2).unwrap();
        let mu = DiscreteMeasure::dirac(Point::constant(0));
        assert!(matches!(
            prohorov_bruteforce_oracle(&big, &mu, 2),
            Err(MeasureError::SupportTooLarge { size: 13, .. })
        ));
    }

    #[test]
    fn unattained_infimum_is_reported() {
        // δ_x vs δ_y at rho = 1/4: every eps > 1/4 works, eps = 1/4 does not
        // (A = {x}, A^{1/4} misses y, 1 > 0 + 1/4).
        let h = 8;
        let a = DiscreteMeasure::dirac(ep("0", "1"));
        let b = DiscreteMeasure::dirac(ep("01", "0"));
        let r = prohorov_report(&a, &b, h);
        assert_eq!(r.distance, frac(1, 4));
        assert!(!r.attained);
    }

    #[test]
    fn coupling_is_a_valid_witness() {
        let h = 6;
        let mu = emp_measure(&ep("0011", "01"), 9, h).unwrap();
        let nu = emp_measure(&per("001"), 7, h).unwrap();
        let r = prohorov_report(&mu, &nu, h);
        let rows: Vec<Ratio> = mu.windows(h).into_iter().map(|(_, w)| w).collect();
        let cols: Vec<Ratio> = nu.windows(h).into_iter().map(|(_, w)| w).collect();
        assert!(r.coupling.is_valid(&rows, &cols));
        assert!(Ratio::one() - r.coupling.total() <= r.distance);
    }
}
