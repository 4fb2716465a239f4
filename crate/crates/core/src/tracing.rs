//! Specifications, Bowen balls, tracing verifiers and the constructive
//! generic-point builders on full shifts.
//!
//! On a full shift a specification is traced by plain concatenation, so the
//! builders never need gaps. The verifier is general: it accepts any point
//! and any `(ε, δ₁, δ₂)`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::measure::{
    emp_measure, emp_of_sequence, emp_of_specification, prohorov, DiscreteMeasure, MeasureError,
};
use crate::rational::{dyadic, Ratio};
use crate::symbolic::{first_disagreement, rho, Point, ShiftSpace, SymbolicError, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TracingError {
    #[error("specification has no segments")]
    EmptySpecification,
    #[error("segment {0} has length zero")]
    ZeroLength(usize),
    #[error("tracing by concatenation needs a full shift")]
    NotFullShift,
    #[error("segment {0} leaves the alphabet")]
    OutsideAlphabet(usize),
    #[error("support point {0} is not periodic")]
    NotPeriodic(usize),
    #[error("measure is not a rational combination of periodic orbit measures: {0}")]
    NotOrbitDecomposable(String),
    #[error("prefix length {needed} exceeds the cap {cap}")]
    BudgetExceeded { needed: usize, cap: usize },
    #[error("need {needed} target measures, got {got}")]
    TooFewMeasures { needed: usize, got: usize },
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Finite list of orbit segments `⟨(x_1, n_1), …, (x_k, n_k)⟩`.
#[derive(Clone, Debug)]
pub struct Specification {
    segments: Vec<(Point, usize)>,
}

impl Specification {
    pub fn new(segments: Vec<(Point, usize)>) -> Result<Self, TracingError> {
        if segments.is_empty() {
            return Err(TracingError::EmptySpecification);
        }
        if let Some(j) = segments.iter().position(|(_, n)| *n == 0) {
            return Err(TracingError::ZeroLength(j));
        }
        Ok(Specification { segments })
    }

    pub fn segments(&self) -> &[(Point, usize)] {
        &self.segments
    }

    pub fn rank(&self) -> usize {
        self.segments.len()
    }

    /// `Σ n_j`.
    pub fn total_len(&self) -> usize {
        self.segments.iter().map(|(_, n)| n).sum()
    }

    /// The concatenated word `x_1[0..n_1) x_2[0..n_2) …`.
    pub fn concatenation(&self) -> Word {
        let mut out = Vec::with_capacity(self.total_len());
        for (x, n) in &self.segments {
            x.write_prefix(*n, &mut out);
        }
        Word::new(out)
    }
}

/// Number of leading symbols two points must share to be `ε`-close:
/// the least `k` with `2^{-k} < ε`.
pub fn closeness_depth(eps: &Ratio) -> usize {
    let mut k = 0;
    while dyadic(k) >= *eps {
        k += 1;
    }
    k
}

/// `ρ_Λ(x, y) = max_{j ∈ Λ} ρ(T^j x, T^j y)`.
pub fn bowen_distance(x: &Point, y: &Point, lambda: &[usize], horizon: usize) -> Ratio {
    assert!(!lambda.is_empty(), "Bowen distance needs a nonempty index set");
    lambda
        .iter()
        .map(|&j| rho(&x.shift(j), &y.shift(j), horizon))
        .max()
        .unwrap_or_else(Ratio::zero)
}

/// `y ∈ B_Λ(x, ε)`.
pub fn bowen_ball_member(y: &Point, x: &Point, lambda: &[usize], eps: &Ratio, horizon: usize) -> bool {
    bowen_distance(x, y, lambda, horizon) < *eps
}

/// Traces a specification on a full shift: the segments are written back to
/// back with no gaps, and the last point continues its own orbit.
pub fn trace_full_shift(space: &ShiftSpace, xi: &Specification) -> Result<Point, TracingError> {
    if !space.is_full() {
        return Err(TracingError::NotFullShift);
    }
    let segs = xi.segments();
    let mut word = Vec::new();
    for (j, (x, n)) in segs.iter().enumerate() {
        if !space.contains_word(&x.prefix(*n))? {
            return Err(TracingError::OutsideAlphabet(j));
        }
        if j + 1 < segs.len() {
            x.write_prefix(*n, &mut word);
        }
    }
    let last = &segs[segs.len() - 1].0;
    Ok(Point::prepend(&Word::new(word), last)?)
}

/// Outcome of [`verify_trace`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub verdict: bool,
    /// Gaps `s_1 … s_{k-1}` of the witness; empty when there is none.
    pub gaps: Vec<usize>,
    /// `n_j − |Λ_j|` per traced segment of the witness.
    pub errors: Vec<usize>,
    /// Sizes of the agreement sets `Λ_j`.
    pub lambda_sizes: Vec<usize>,
    /// Iterates needed, `n_k + Σ (n_i + s_i)`, when a witness exists.
    pub total_len: Option<usize>,
    /// First segment for which no admissible placement exists.
    pub failed_segment: Option<usize>,
}

/// Checks whether `y` `(ε, δ₁, δ₂)`-approximately-traces `xi`.
///
/// The first segment must be traced without errors. For later segments, gaps
/// are tried smallest first up to `⌊δ₂ n_j⌋`; `Λ_j` is taken as the full set
/// of agreeing indices and must have at least `(1 − δ₁) n_j` elements.
/// Failed `(segment, offset)` states are memoized, so the search is
/// polynomial in the total length.
pub fn verify_trace(
    y: &Point,
    xi: &Specification,
    eps: &Ratio,
    delta1: &Ratio,
    delta2: &Ratio,
) -> Result<TraceReport, TracingError> {
    for (name, v) in [("eps", eps), ("delta1", delta1), ("delta2", delta2)] {
        if *v < Ratio::zero() || *v > Ratio::one() {
            return Err(TracingError::Parameter(format!("{name} = {v} outside [0, 1]")));
        }
    }
    if eps.is_zero() {
        return Err(TracingError::Parameter("eps must be positive".into()));
    }
    let depth = closeness_depth(eps);
    let segs = xi.segments();

    // number of t < n_j with rho(T^{offset+t} y, T^t x_j) >= eps
    let errors_at = |j: usize, offset: usize| -> usize {
        let (x, n) = &segs[j];
        if depth == 0 {
            return 0;
        }
        let len = n + depth - 1;
        let ys = y.shift(offset).prefix(len);
        let xs = x.prefix(len);
        let (ys, xs) = (ys.as_slice(), xs.as_slice());
        let mut next = usize::MAX;
        let mut bad = 0;
        for t in (0..len).rev() {
            if ys[t] != xs[t] {
                next = t;
            }
            if t < *n && next < t + depth {
                bad += 1;
            }
        }
        bad
    };

    // first segment: no errors allowed
    let e0 = errors_at(0, 0);
    if e0 > 0 {
        return Ok(TraceReport {
            verdict: false,
            gaps: vec![],
            errors: vec![e0],
            lambda_sizes: vec![segs[0].1 - e0],
            total_len: None,
            failed_segment: Some(0),
        });
    }

    struct Search<'a, F: Fn(usize, usize) -> usize> {
        segs: &'a [(Point, usize)],
        errors_at: F,
        d1: &'a Ratio,
        d2: &'a Ratio,
        failed: HashSet<(usize, usize)>,
        deepest: usize,
    }

    impl<F: Fn(usize, usize) -> usize> Search<'_, F> {
        // places segments j.. with segment j-1 ending at `end`
        fn place(&mut self, j: usize, end: usize, gaps: &mut Vec<usize>, errs: &mut Vec<usize>) -> bool {
            if j == self.segs.len() {
                return true;
            }
            if self.failed.contains(&(j, end)) {
                return false;
            }
            self.deepest = self.deepest.max(j);
            let n = self.segs[j].1;
            let n_r = Ratio::from_integer(BigInt::from(n));
            let max_gap = (self.d2 * &n_r).floor().to_integer().to_usize().unwrap_or(0);
            let max_err = (self.d1 * &n_r).floor().to_integer().to_usize().unwrap_or(0);
            for s in 0..=max_gap {
                let e = (self.errors_at)(j, end + s);
                if e <= max_err {
                    gaps.push(s);
                    errs.push(e);
                    if self.place(j + 1, end + s + n, gaps, errs) {
                        return true;
                    }
                    gaps.pop();
                    errs.pop();
                }
            }
            self.failed.insert((j, end));
            false
        }
    }

    let mut search = Search {
        segs,
        errors_at,
        d1: delta1,
        d2: delta2,
        failed: HashSet::new(),
        deepest: 1,
    };
    let mut gaps = Vec::new();
    let mut errs = vec![0];
    let ok = search.place(1, segs[0].1, &mut gaps, &mut errs);
    let lambda_sizes = errs.iter().zip(segs).map(|(e, (_, n))| n - e).collect();
    let total_len = ok.then(|| xi.total_len() + gaps.iter().sum::<usize>());
    Ok(TraceReport {
        verdict: ok,
        gaps,
        errors: errs,
        lambda_sizes,
        total_len,
        failed_segment: (!ok).then_some(search.deepest),
    })
}

/// Output of [`protogeneric`].
#[derive(Clone, Debug)]
pub struct Protogeneric {
    /// Periodic point; its period word is the concatenated specification.
    pub point: Point,
    /// Length scale `Q·K`: `D(μ, Emp(x, n·Q·K)) < ε`.
    pub q: usize,
    /// Common denominator of the orbit weights.
    pub base_q: usize,
    /// Segment length, a multiple of every orbit period.
    pub k: usize,
    pub n: usize,
    /// Exact `D(μ, Emp(x, n·Q·K))` at the working horizon.
    pub certificate: Ratio,
}

/// Orbit decomposition `μ = Σ q_i ν_i`: `(representative, period, q_i)`.
pub fn orbit_decomposition(mu: &DiscreteMeasure) -> Result<Vec<(Point, usize, Ratio)>, TracingError> {
    // canonical key: lexicographically least rotation of the least period
    let mut orbits: BTreeMap<Vec<u32>, (Point, usize, Vec<Ratio>, HashSet<Vec<u32>>)> = BTreeMap::new();
    for (i, (p, w)) in mu.atoms().iter().enumerate() {
        let period = p.least_period().ok_or(TracingError::NotPeriodic(i))?;
        let word = p.prefix(period).into_vec();
        let key = (0..period)
            .map(|r| {
                let mut v = word[r..].to_vec();
                v.extend_from_slice(&word[..r]);
                v
            })
            .min()
            .expect("nonempty period");
        let entry = orbits
            .entry(key.clone())
            .or_insert_with(|| (Point::periodic(Word::new(key)).expect("nonempty"), period, vec![], HashSet::new()));
        if !entry.3.insert(word) {
            return Err(TracingError::NotOrbitDecomposable(format!("atom {i} repeats an orbit point")));
        }
        entry.2.push(w.clone());
    }
    orbits
        .into_values()
        .map(|(z, period, weights, _)| {
            if weights.len() != period || weights.iter().any(|w| *w != weights[0]) {
                return Err(TracingError::NotOrbitDecomposable(format!(
                    "orbit of period {period} carries weights {:?}",
                    weights.iter().map(|w| w.to_string()).collect::<Vec<_>>()
                )));
            }
            let q = &weights[0] * Ratio::from_integer(BigInt::from(period));
            Ok((z, period, q))
        })
        .collect()
}

/// Periodic approximant of a measure: a point whose period word lists
/// each orbit representative `z_i` in `n·p_i` blocks of length `K`.
///
/// `Q` is the common denominator of the orbit weights `q_i = p_i / Q`; `K`
/// is a multiple of every orbit period found by doubling and then bisecting
/// on the `n = 1` certificate, so the returned scale `Q·K` does not depend
/// on `n`. The certificate for the requested `n` is then checked exactly.
pub fn protogeneric(
    mu: &DiscreteMeasure,
    eps: &Ratio,
    n: usize,
    horizon: usize,
) -> Result<Protogeneric, TracingError> {
    if n == 0 {
        return Err(TracingError::Parameter("n must be positive".into()));
    }
    if *eps <= Ratio::zero() {
        return Err(TracingError::Parameter("eps must be positive".into()));
    }
    let orbits = orbit_decomposition(mu)?;
    let base_q = orbits
        .iter()
        .fold(BigInt::one(), |acc, (_, _, q)| acc.lcm(q.denom()))
        .to_usize()
        .ok_or_else(|| TracingError::Parameter("denominator too large".into()))?;
    let counts: Vec<usize> = orbits
        .iter()
        .map(|(_, _, q)| (q * Ratio::from_integer(BigInt::from(base_q))).to_integer().to_usize().unwrap())
        .collect();
    let step = orbits.iter().fold(1usize, |acc, (_, p, _)| acc.lcm(p));

    let build = |k: usize, reps: usize| -> Point {
        let mut word = Vec::new();
        for ((z, _, _), c) in orbits.iter().zip(&counts) {
            for _ in 0..reps * c {
                z.write_prefix(k, &mut word);
            }
        }
        Point::periodic(Word::new(word)).expect("nonempty word")
    };
    let distance = |k: usize, reps: usize| -> Result<Ratio, TracingError> {
        let x = build(k, reps);
        Ok(prohorov(mu, &emp_measure(&x, reps * base_q * k, horizon)?, horizon))
    };

    const MAX_K: usize = 1 << 24;
    let mut hi = step;
    while distance(hi, 1)? >= *eps {
        hi *= 2;
        if hi * base_q > MAX_K {
            return Err(TracingError::BudgetExceeded {
                needed: hi * base_q,
                cap: MAX_K,
            });
        }
    }
    // bisect over multiples of `step` in (hi/2, hi]
    let (mut lo_m, mut hi_m) = (hi / step / 2, hi / step);
    while lo_m + 1 < hi_m {
        let mid = (lo_m + hi_m) / 2;
        if distance(mid * step, 1)? < *eps {
            hi_m = mid;
        } else {
            lo_m = mid;
        }
    }
    let k = hi_m * step;
    let certificate = distance(k, n)?;
    if certificate >= *eps {
        return Err(TracingError::CertificateFailed(format!(
            "D(mu, Emp(x, {})) = {certificate} >= {eps}",
            n * base_q * k
        )));
    }
    Ok(Protogeneric {
        point: build(k, n),
        q: base_q * k,
        base_q,
        k,
        n,
        certificate,
    })
}

/// One stage of the inductive construction.
#[derive(Clone, Debug)]
pub struct StageRecord {
    pub n: usize,
    pub k_n: usize,
    pub ell_n: usize,
    pub l_n: usize,
    /// Anchor point `x_n`, periodic with period `K_n`.
    pub x_n: Point,
    /// `D(Emp(x_n, K_n), μ_n)`.
    pub anchor_distance: Ratio,
}

#[derive(Clone, Debug)]
pub struct GenericBuildState {
    /// `L_0 = K_1`.
    pub l0: usize,
    pub stages: Vec<StageRecord>,
    /// Periodic anchors for every available target (one more than the number
    /// of stages when the next target is known).
    pub anchors: Vec<(usize, Point, Ratio)>,
}

impl GenericBuildState {
    /// `L_{n}` with `L_0` at index 0.
    pub fn l(&self, n: usize) -> usize {
        if n == 0 {
            self.l0
        } else {
            self.stages[n - 1].l_n
        }
    }

    /// The unique stage `n` with `L_{n−1} <= j < L_n`, if built.
    pub fn stage_of(&self, j: usize) -> Option<usize> {
        self.stages
            .iter()
            .find(|s| j >= self.l(s.n - 1) && j < s.l_n)
            .map(|s| s.n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateRow {
    pub stage: usize,
    pub l_n: usize,
    pub bound: Ratio,
    pub achieved: Ratio,
    pub pass: bool,
}

/// The four terms whose sum gives the stage bound `1/n + 7ε/2^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionRow {
    pub stage: usize,
    /// `D(Emp(y, L_n), Emp(y_n, L_n))`, bound `ε/2^n`.
    pub limit_vs_stage: (Ratio, Ratio),
    /// `D(Emp(y_n, L_n), Emp(ξ_n))`, bound `4ε/2^{n+1}`.
    pub stage_vs_spec: (Ratio, Ratio),
    /// `D(Emp(ξ_n), Emp(ξ̄_n))`, bound `1/n`.
    pub spec_vs_tail: (Ratio, Ratio),
    /// `D(Emp(ξ̄_n), μ_n)`, bound `ε/2^{n+1}`.
    pub tail_vs_target: (Ratio, Ratio),
}

impl DecompositionRow {
    pub fn all_hold(&self) -> bool {
        [&self.limit_vs_stage, &self.stage_vs_spec, &self.spec_vs_tail, &self.tail_vs_target]
            .iter()
            .all(|(v, b)| v <= b)
    }
}

#[derive(Clone, Debug)]
pub struct GenericBuild {
    /// The limit point; its first `L_stages` symbols are final.
    pub point: Point,
    pub prefix_len: usize,
    pub state: GenericBuildState,
    pub certificates: Vec<CertificateRow>,
    pub decomposition: Vec<DecompositionRow>,
    pub horizon: usize,
}

impl GenericBuild {
    pub fn prefix(&self) -> Word {
        self.point.prefix(self.prefix_len)
    }

    /// `(j, n(j), D(Emp(y, j), μ_{n(j)}))` for each checkpoint inside the
    /// built prefix.
    pub fn tracking(&self, mus: &[DiscreteMeasure], checkpoints: &[usize]) -> Result<Vec<(usize, usize, Ratio)>, TracingError> {
        let mut out = Vec::new();
        for &j in checkpoints {
            if let Some(n) = self.state.stage_of(j) {
                let e = emp_measure(&self.point, j, self.horizon)?;
                out.push((j, n, prohorov(&e, &mus[n - 1], self.horizon)));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub horizon: usize,
    /// Refuse to build prefixes longer than this.
    pub cap: usize,
    /// Compute the four-term decomposition per stage.
    pub decompose: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            horizon: 12,
            cap: 1 << 23,
            decompose: true,
        }
    }
}

/// The inductive generic-point construction for targets `μ_1, μ_2, …`
/// (`mus[0] = μ_1`).
///
/// Anchors `(x_n, K_n)` come from [`protogeneric`] at accuracy `ε/2^{n+1}`;
/// `ℓ_n` is the least integer with `ℓ_n K_n >= (n+1) K_{n+1}` (when
/// `μ_{n+1}` is supplied) and `ℓ_n K_n >= n L_{n−1}`. Tracing on the full
/// shift is concatenation, so `y_n = y_{n−1}[0, L_{n−1}) · x_n^{ℓ_n} · x_n …`
/// with `L_n = L_{n−1} + ℓ_n K_n`, and `y_0 = x_1`.
pub fn build_generic_point(
    mus: &[DiscreteMeasure],
    eps: &Ratio,
    stages: usize,
    opts: &BuildOptions,
) -> Result<GenericBuild, TracingError> {
    if stages == 0 {
        return Err(TracingError::Parameter("stages must be positive".into()));
    }
    if mus.len() < stages {
        return Err(TracingError::TooFewMeasures {
            needed: stages,
            got: mus.len(),
        });
    }
    if *eps <= Ratio::zero() || *eps >= Ratio::one() {
        return Err(TracingError::Parameter("eps must lie in (0, 1)".into()));
    }
    let h = opts.horizon;
    let available = mus.len().min(stages + 1);
    let mut anchors: Vec<(usize, Point, Ratio)> = Vec::with_capacity(available);
    for (i, mu) in mus.iter().take(available).enumerate() {
        let n = i + 1;
        let acc = eps * dyadic(n + 1);
        let pg = protogeneric(mu, &acc, 1, h)?;
        if pg.q > opts.cap {
            return Err(TracingError::BudgetExceeded {
                needed: pg.q,
                cap: opts.cap,
            });
        }
        anchors.push((pg.q, pg.point, pg.certificate));
    }

    let l0 = anchors[0].0;
    let mut prefix: Vec<u32> = Vec::new();
    anchors[0].1.write_prefix(l0, &mut prefix);
    let mut state = GenericBuildState {
        l0,
        stages: Vec::new(),
        anchors: anchors.clone(),
    };
    let mut y_points: Vec<Point> = vec![anchors[0].1.clone()];
    for n in 1..=stages {
        let (k_n, x_n, dist) = anchors[n - 1].clone();
        let l_prev = state.l(n - 1);
        let mut ell = div_ceil(n * l_prev, k_n).max(1);
        if let Some((k_next, _, _)) = anchors.get(n) {
            ell = ell.max(div_ceil((n + 1) * k_next, k_n));
        }
        let l_n = l_prev + ell * k_n;
        if l_n > opts.cap {
            return Err(TracingError::BudgetExceeded {
                needed: l_n,
                cap: opts.cap,
            });
        }
        for _ in 0..ell {
            x_n.write_prefix(k_n, &mut prefix);
        }
        let y_n = Point::eventually_periodic(Word::new(prefix[..l_prev].to_vec()), x_n.prefix(k_n))?;
        y_points.push(y_n);
        state.stages.push(StageRecord {
            n,
            k_n,
            ell_n: ell,
            l_n,
            x_n,
            anchor_distance: dist,
        });
    }
    let y = y_points.last().cloned().expect("at least one stage");

    let mut certificates = Vec::with_capacity(stages);
    let mut decomposition = Vec::new();
    for rec in &state.stages {
        let n = rec.n;
        let n_r = Ratio::from_integer(BigInt::from(n));
        let e_y = emp_measure(&y, rec.l_n, h)?;
        let achieved = prohorov(&e_y, &mus[n - 1], h);
        let bound = n_r.recip() + Ratio::from_integer(BigInt::from(7)) * eps * dyadic(n + 1);
        certificates.push(CertificateRow {
            stage: n,
            l_n: rec.l_n,
            pass: achieved <= bound,
            bound,
            achieved,
        });
        if opts.decompose {
            let l_prev = state.l(n - 1);
            let e_yn = emp_measure(&y_points[n], rec.l_n, h)?;
            let mut segs = vec![(y_points[n - 1].clone(), l_prev)];
            segs.extend(std::iter::repeat_n((rec.x_n.clone(), rec.k_n), rec.ell_n));
            let xi = Specification::new(segs)?;
            let e_xi = emp_of_specification(&xi, h)?;
            let e_tail = emp_measure(&rec.x_n, rec.k_n, h)?;
            let acc = eps * dyadic(n + 1);
            decomposition.push(DecompositionRow {
                stage: n,
                limit_vs_stage: (prohorov(&e_y, &e_yn, h), eps * dyadic(n)),
                stage_vs_spec: (
                    prohorov(&e_yn, &e_xi, h),
                    Ratio::from_integer(BigInt::from(4)) * &acc,
                ),
                spec_vs_tail: (prohorov(&e_xi, &e_tail, h), n_r.recip()),
                tail_vs_target: (prohorov(&e_tail, &mus[n - 1], h), acc),
            });
        }
    }
    let prefix_len = state.l(stages);
    Ok(GenericBuild {
        point: y,
        prefix_len,
        state,
        certificates,
        decomposition,
        horizon: h,
    })
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Both sides of the close-segments inequality
/// `D(Emp(x̄), Emp(ȳ)) <= 2γ + δ + ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct CloseSegmentsCheck {
    pub lhs: Ratio,
    pub rhs: Ratio,
    pub holds: bool,
}

/// Verifies the close-segments bound on explicit lists.
///
/// Hypotheses: `0 < k <= ℓ <= (1+δ)k`, the matching has `j >= (1−γ)k`
/// strictly increasing pairs (0-based), and every matched pair has
/// `rho < ε` at the horizon (with `ε = 0` read as "identical at the
/// horizon"). Violations are reported as [`TracingError::Precondition`].
pub fn close_segments_bound_check(
    xbar: &[Point],
    ybar: &[Point],
    matching: &[(usize, usize)],
    gamma: &Ratio,
    delta: &Ratio,
    eps: &Ratio,
    horizon: usize,
) -> Result<CloseSegmentsCheck, TracingError> {
    let (k, l) = (xbar.len(), ybar.len());
    let pre = |m: String| Err(TracingError::Precondition(m));
    if k == 0 || k > l {
        return pre(format!("need 0 < k <= l, got k = {k}, l = {l}"));
    }
    let kr = Ratio::from_integer(BigInt::from(k));
    if Ratio::from_integer(BigInt::from(l)) > (Ratio::one() + delta) * &kr {
        return pre(format!("l = {l} exceeds (1 + delta) k"));
    }
    if Ratio::from_integer(BigInt::from(matching.len())) < (Ratio::one() - gamma) * &kr {
        return pre(format!("matching of size {} is below (1 - gamma) k", matching.len()));
    }
    for w in matching.windows(2) {
        if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
            return pre("matching is not strictly increasing".into());
        }
    }
    for &(a, b) in matching {
        if a >= k || b >= l {
            return pre(format!("pair ({a}, {b}) out of range"));
        }
        let close = if eps.is_zero() {
            first_disagreement(&xbar[a], &ybar[b], horizon).is_none()
        } else {
            rho(&xbar[a], &ybar[b], horizon) < *eps
        };
        if !close {
            return pre(format!("pair ({a}, {b}) is not eps-close"));
        }
    }
    let lhs = prohorov(&emp_of_sequence(xbar, horizon)?, &emp_of_sequence(ybar, horizon)?, horizon);
    let rhs = Ratio::from_integer(BigInt::from(2)) * gamma + delta + eps;
    Ok(CloseSegmentsCheck {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn per(s: &str) -> Point {
        Point::periodic(Word::parse(s).unwrap()).unwrap()
    }

    fn ep(pre: &str, p: &str) -> Point {
        Point::eventually_periodic(Word::parse(pre).unwrap(), Word::parse(p).unwrap()).unwrap()
    }

    #[test]
    fn closeness_depth_values() {
        assert_eq!(closeness_depth(&int(2)), 0);
        assert_eq!(closeness_depth(&int(1)), 1);
        assert_eq!(closeness_depth(&frac(1, 2)), 2);
        assert_eq!(closeness_depth(&frac(1, 4)), 3);
        assert_eq!(closeness_depth(&frac(3, 10)), 2);
    }

    #[test]
    fn bowen_examples() {
        let x = per("0");
        assert!(bowen_distance(&x, &x, &[0, 1, 2], 16).is_zero());
        assert_eq!(bowen_distance(&x, &per("1"), &[0], 16), int(1));
        // y differs from x only at index 2
        let y = ep("001", "0");
        assert_eq!(bowen_distance(&x, &y, &[0, 1, 2], 16), int(1));
        assert_eq!(bowen_distance(&x, &y, &[0, 1], 16), frac(1, 2));
        assert!(bowen_ball_member(&y, &x, &[0], &frac(1, 2), 16));
        assert!(!bowen_ball_member(&y, &x, &[0], &frac(1, 4), 16));
    }

    #[test]
    fn trace_full_shift_examples() {
        let space = ShiftSpace::full([0, 1]);
        let xi = Specification::new(vec![(per("0"), 3)]).unwrap();
        assert_eq!(trace_full_shift(&space, &xi).unwrap().prefix(10), per("0").prefix(10));
        let xi = Specification::new(vec![(per("0"), 2), (per("1"), 2)]).unwrap();
        assert_eq!(trace_full_shift(&space, &xi).unwrap().prefix(7), Word::parse("0011111").unwrap());
        let bad = Specification::new(vec![(per("2"), 2)]).unwrap();
        assert_eq!(trace_full_shift(&space, &bad).unwrap_err(), TracingError::OutsideAlphabet(0));
    }

    #[test]
    fn concatenation_traces_with_unit_radius() {
        let xi = Specification::new(vec![(per("01"), 5), (per("1"), 3), (ep("0", "1"), 4)]).unwrap();
        let y = trace_full_shift(&ShiftSpace::full([0, 1]), &xi).unwrap();
        let r = verify_trace(&y, &xi, &int(1), &int(0), &int(0)).unwrap();
        assert!(r.verdict);
        assert_eq!(r.gaps, vec![0, 0]);
        assert_eq!(r.errors, vec![0, 0, 0]);
        assert_eq!(r.total_len, Some(12));
    }

    #[test]
    fn verifier_counts_errors() {
        // segment 2 of length 10, delta1 = 1/5 allows two errors
        let xi = Specification::new(vec![(per("0"), 4), (per("1"), 10)]).unwrap();
        let good = ep("0000", "1");
        let one = |flips: &[usize]| {
            let mut w = Word::parse("0000").unwrap().into_vec();
            let mut tail = vec![1u32; 10];
            for &f in flips {
                tail[f] = 0;
            }
            w.extend(tail);
            Point::eventually_periodic(Word::new(w), Word::parse("1").unwrap()).unwrap()
        };
        let d1 = frac(1, 5);
        assert!(verify_trace(&good, &xi, &int(1), &d1, &int(0)).unwrap().verdict);
        assert!(verify_trace(&one(&[2, 7]), &xi, &int(1), &d1, &int(0)).unwrap().verdict);
        let r = verify_trace(&one(&[1, 4, 7]), &xi, &int(1), &d1, &int(0)).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.failed_segment, Some(1));
    }

    #[test]
    fn verifier_finds_legal_gap() {
        // n_2 = 10, delta2 = 3/10 allows a gap of 3
        let xi = Specification::new(vec![(per("0"), 4), (per("1"), 10)]).unwrap();
        let y = ep("0000222", "1");
        let r = verify_trace(&y, &xi, &int(1), &int(0), &frac(3, 10)).unwrap();
        assert!(r.verdict);
        assert_eq!(r.gaps, vec![3]);
        assert!(!verify_trace(&y, &xi, &int(1), &int(0), &frac(1, 5)).unwrap().verdict);
        // at radius 1/2 the window at t = 3 reads "02", so the first segment fails
        assert!(!verify_trace(&y, &xi, &frac(1, 2), &int(0), &frac(3, 10)).unwrap().verdict);
    }

    #[test]
    fn first_segment_is_exact() {
        let xi = Specification::new(vec![(per("0"), 4)]).unwrap();
        let r = verify_trace(&ep("01", "0"), &xi, &int(1), &int(1), &int(1)).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.failed_segment, Some(0));
    }

    #[test]
    fn protogeneric_examples() {
        let h = 10;
        let dirac = DiscreteMeasure::dirac(per("0"));
        let pg = protogeneric(&dirac, &frac(1, 8), 1, h).unwrap();
        assert_eq!(pg.point.prefix(20), per("0").prefix(20));
        assert!(pg.certificate.is_zero());

        let half = DiscreteMeasure::new(vec![(per("0"), frac(1, 2)), (per("1"), frac(1, 2))], h).unwrap();
        let pg = protogeneric(&half, &frac(1, 4), 1, h).unwrap();
        assert_eq!(pg.base_q, 2);
        let expected = Word::constant(0, pg.k).concat(&Word::constant(1, pg.k));
        assert_eq!(pg.point.prefix(2 * pg.k), expected);
        assert!(pg.certificate < frac(1, 4));

        let third = DiscreteMeasure::new(
            vec![(per("01"), frac(1, 6)), (per("10"), frac(1, 6)), (per("1"), frac(2, 3))],
            h,
        )
        .unwrap();
        for n in 1..=3 {
            let pg = protogeneric(&third, &frac(1, 8), n, h).unwrap();
            assert_eq!(pg.base_q, 3);
            let e = emp_measure(&pg.point, n * pg.q, h).unwrap();
            assert!(prohorov(&third, &e, h) < frac(1, 8));
        }
    }

    #[test]
    fn orbit_decomposition_rejects_partial_orbits() {
        let m = DiscreteMeasure::new(vec![(per("01"), frac(1, 2)), (per("1"), frac(1, 2))], 6).unwrap();
        assert!(matches!(orbit_decomposition(&m), Err(TracingError::NotOrbitDecomposable(_))));
        let m = DiscreteMeasure::dirac(ep("0", "1"));
        assert!(matches!(orbit_decomposition(&m), Err(TracingError::NotPeriodic(0))));
    }

    #[test]
    fn constant_dirac_build_is_exact() {
        let mus = vec![DiscreteMeasure::dirac(per("0")); 4];
        let b = build_generic_point(&mus, &frac(1, 8), 3, &BuildOptions::default()).unwrap();
        assert!(b.certificates.iter().all(|r| r.achieved.is_zero() && r.pass));
        assert!(b.prefix().as_slice().iter().all(|&s| s == 0));
    }

    #[test]
    fn stage_lengths_satisfy_growth_conditions() {
        let h = 8;
        let mu = DiscreteMeasure::new(vec![(per("0"), frac(1, 2)), (per("1"), frac(1, 2))], h).unwrap();
        let mus = vec![mu; 4];
        let opts = BuildOptions { horizon: h, decompose: true, ..Default::default() };
        let b = build_generic_point(&mus, &frac(1, 8), 3, &opts).unwrap();
        let st = &b.state;
        for r in &st.stages {
            let n = r.n;
            assert!(st.l(n - 1) >= n * r.k_n);
            assert!(r.ell_n * r.k_n >= n * st.l(n - 1));
            if let Some(next) = st.anchors.get(n) {
                assert!(r.ell_n * r.k_n >= (n + 1) * next.0);
            }
        }
        assert!(b.certificates.iter().all(|r| r.pass));
        assert!(b.decomposition.iter().all(DecompositionRow::all_hold));
    }

    #[test]
    fn close_segments_examples() {
        let h = 8;
        let xs = vec![per("0"), per("1"), per("01"), per("10")];
        let m: Vec<(usize, usize)> = (0..4).map(|i| (i, i)).collect();
        let c = close_segments_bound_check(&xs, &xs, &m, &int(0), &int(0), &frac(1, 16), h).unwrap();
        assert!(c.lhs.is_zero() && c.holds);

        let ys = vec![per("0"), per("1"), per("01"), per("2")];
        let m = vec![(0, 0), (1, 1), (2, 2)];
        let c = close_segments_bound_check(&xs, &ys, &m, &frac(1, 4), &int(0), &int(0), h).unwrap();
        assert_eq!(c.rhs, frac(1, 2));
        assert!(c.holds);

        let err = close_segments_bound_check(&xs, &ys, &[(0, 1)], &frac(1, 4), &int(0), &int(1), h);
        assert!(matches!(err, Err(TracingError::Precondition(_))));
    }
}
