//! `ψ^β` schedules and the two measure-sequence reductions built on the
//! generic-point builder.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ReductionError;
use crate::birkhoff::{average_series, AverageSeries, LocalObservable};
use crate::measure::{convex_combine, emp_measure, prohorov, DiscreteMeasure};
use crate::rational::Ratio;
use crate::tracing::{build_generic_point, BuildOptions, GenericBuild};

/// Breakpoints `n_0 < n_1 < …` with strictly growing gaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSchedule {
    breakpoints: Vec<usize>,
}

impl PsiSchedule {
    pub fn new(breakpoints: Vec<usize>) -> Result<Self, ReductionError> {
        if breakpoints.len() < 2 {
            return Err(ReductionError::Schedule("need at least two breakpoints".into()));
        }
        if breakpoints[0] == 0 {
            return Err(ReductionError::Schedule("breakpoints start at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ReductionError::Schedule("breakpoints must increase".into()));
        }
        let gaps: Vec<usize> = breakpoints.windows(2).map(|w| w[1] - w[0]).collect();
        if gaps.windows(2).any(|g| g[0] >= g[1]) {
            return Err(ReductionError::Schedule("gaps must strictly increase".into()));
        }
        Ok(PsiSchedule { breakpoints })
    }

    /// `n_k = 1 + k(k+1)/2`: 1, 2, 4, 7, 11, …
    pub fn triangular(count: usize) -> Self {
        let bp = (0..count.max(2)).map(|k| 1 + k * (k + 1) / 2).collect();
        PsiSchedule { breakpoints: bp }
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    /// Index `k` with `n_k == j`.
    pub fn breakpoint_index(&self, j: usize) -> Option<usize> {
        self.breakpoints.iter().position(|&n| n == j)
    }

    fn interpolate(
        &self,
        j: usize,
        value: impl Fn(usize) -> Result<Ratio, ReductionError>,
    ) -> Result<Ratio, ReductionError> {
        let bp = &self.breakpoints;
        if j < bp[0] {
            return Err(ReductionError::Schedule(format!("stage {j} precedes the first breakpoint")));
        }
        if let Some(k) = self.breakpoint_index(j) {
            return value(k);
        }
        let k = bp
            .windows(2)
            .position(|w| w[0] < j && j < w[1])
            .ok_or_else(|| ReductionError::Schedule(format!("stage {j} lies beyond the last breakpoint")))?;
        let (lo, hi) = (bp[k], bp[k + 1]);
        let span = Ratio::from_integer(BigInt::from(hi - lo));
        let t = Ratio::from_integer(BigInt::from(j - lo)) / &span;
        Ok((Ratio::one() - &t) * value(k)? + t * value(k + 1)?)
    }

    /// `ψ^β(n_k) = 1/(β(k)+1)`, linear in between.
    pub fn psi_linear(&self, beta: &[u64], j: usize) -> Result<Ratio, ReductionError> {
        self.interpolate(j, |k| {
            beta.get(k)
                .map(|&b| Ratio::new(BigInt::one(), BigInt::from(b) + 1))
                .ok_or(ReductionError::BetaTooShort {
                    got: beta.len(),
                    needed: k + 1,
                    stage: j,
                })
        })
    }

    /// `ψ^β(n_{2k}) = 1/(β(k)+1)`, `ψ^β(n_{2k+1}) = 0`, linear in between.
    pub fn psi_alternating(&self, beta: &[u64], j: usize) -> Result<Ratio, ReductionError> {
        self.interpolate(j, |k| {
            if k % 2 == 1 {
                return Ok(Ratio::zero());
            }
            beta.get(k / 2)
                .map(|&b| Ratio::new(BigInt::one(), BigInt::from(b) + 1))
                .ok_or(ReductionError::BetaTooShort {
                    got: beta.len(),
                    needed: k / 2 + 1,
                    stage: j,
                })
        })
    }
}

/// Per-stage diagnostics of a `ψ` reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiRow {
    pub stage: usize,
    pub l: usize,
    pub psi: Ratio,
    /// `k` when the stage is the breakpoint `n_k`.
    pub breakpoint: Option<usize>,
    /// `D(Emp(y, L_j), μ_j)` against the unperturbed target.
    pub to_target: Ratio,
    /// `D(Emp(y, L_j), μ^β_j)`.
    pub to_mixture: Ratio,
    /// Stage bound `1/j + 7ε/2^{j+1}`.
    pub bound: Ratio,
}

#[derive(Clone, Debug)]
pub struct PsiReduction {
    pub build: GenericBuild,
    pub psi: Vec<Ratio>,
    pub measures: Vec<DiscreteMeasure>,
    pub rows: Vec<PsiRow>,
}

/// Number of measures to build: `stages + 1` when `ψ` is available there,
/// so the last stage can honour the look-ahead constraint.
fn psi_values(
    stages: usize,
    f: impl Fn(usize) -> Result<Ratio, ReductionError>,
) -> Result<Vec<Ratio>, ReductionError> {
    let mut out = Vec::with_capacity(stages + 1);
    for j in 1..=stages {
        out.push(f(j)?);
    }
    if let Ok(v) = f(stages + 1) {
        out.push(v);
    }
    Ok(out)
}

fn mixtures(
    psi: &[Ratio],
    nu: &DiscreteMeasure,
    targets: &[DiscreteMeasure],
    horizon: usize,
) -> Result<Vec<DiscreteMeasure>, ReductionError> {
    psi.iter()
        .enumerate()
        .map(|(i, p)| {
            let target = &targets[i.min(targets.len() - 1)];
            Ok(convex_combine(
                &[p.clone(), Ratio::one() - p],
                &[nu.clone(), target.clone()],
                horizon,
            )?)
        })
        .collect()
}

fn rows(
    build: &GenericBuild,
    psi: &[Ratio],
    measures: &[DiscreteMeasure],
    targets: &[DiscreteMeasure],
    schedule: &PsiSchedule,
) -> Result<Vec<PsiRow>, ReductionError> {
    let h = build.horizon;
    build
        .certificates
        .iter()
        .map(|c| {
            let j = c.stage;
            let e = emp_measure(&build.point, c.l_n, h)?;
            let target = &targets[(j - 1).min(targets.len() - 1)];
            Ok(PsiRow {
                stage: j,
                l: c.l_n,
                psi: psi[j - 1].clone(),
                breakpoint: schedule.breakpoint_index(j),
                to_target: prohorov(&e, target, h),
                to_mixture: prohorov(&e, &measures[j - 1], h),
                bound: c.bound.clone(),
            })
        })
        .collect()
}

/// Generic point for `μ^β_j = ψ^β(j) ν + (1 − ψ^β(j)) μ_j` with the linear
/// schedule. `targets` lists `μ_1, μ_2, …`; the last one is repeated when the
/// list is shorter than the number of stages.
pub fn psi_reduction(
    beta: &[u64],
    schedule: &PsiSchedule,
    stages: usize,
    eps: &Ratio,
    nu: &DiscreteMeasure,
    targets: &[DiscreteMeasure],
    opts: &BuildOptions,
) -> Result<PsiReduction, ReductionError> {
    if targets.is_empty() {
        return Err(ReductionError::Parameters("no target measures".into()));
    }
    for (i, t) in targets.iter().enumerate() {
        if prohorov(nu, t, opts.horizon).is_zero() {
            return Err(ReductionError::NotDistinguishable(i));
        }
    }
    let psi = psi_values(stages, |j| schedule.psi_linear(beta, j))?;
    let measures = mixtures(&psi, nu, targets, opts.horizon)?;
    let build = build_generic_point(&measures, eps, stages, opts)?;
    let rows = rows(&build, &psi, &measures, targets, schedule)?;
    Ok(PsiReduction {
        build,
        psi,
        measures,
        rows,
    })
}

#[derive(Clone, Debug)]
pub struct PhiReduction {
    pub reduction: PsiReduction,
    /// `∫ φ dμ̄`.
    pub alpha: Ratio,
    /// `∫ φ dν`.
    pub nu_value: Ratio,
    /// `A_k φ(y)` at every stage end `L_j`.
    pub series: AverageSeries,
    /// `ψ_j ∫φdν + (1 − ψ_j) α` per stage.
    pub predicted: Vec<Ratio>,
}

/// Generic point for `μ^β_j = ψ^β(j) ν + (1 − ψ^β(j)) μ̄` with the
/// alternating schedule, plus the Birkhoff averages of `φ` at stage ends.
#[allow(clippy::too_many_arguments)]
pub fn phi_reduction(
    beta: &[u64],
    schedule: &PsiSchedule,
    stages: usize,
    eps: &Ratio,
    nu: &DiscreteMeasure,
    mubar: &DiscreteMeasure,
    phi: &LocalObservable,
    opts: &BuildOptions,
) -> Result<PhiReduction, ReductionError> {
    let alpha = phi.integrate(mubar);
    let nu_value = phi.integrate(nu);
    if alpha == nu_value {
        return Err(ReductionError::NotSeparating);
    }
    let psi = psi_values(stages, |j| schedule.psi_alternating(beta, j))?;
    let targets = std::slice::from_ref(mubar);
    let measures = mixtures(&psi, nu, targets, opts.horizon)?;
    let build = build_generic_point(&measures, eps, stages, opts)?;
    let rows = rows(&build, &psi, &measures, targets, schedule)?;
    let ks: Vec<usize> = build.certificates.iter().map(|c| c.l_n).collect();
    let series = average_series(phi, &build.point, &ks, &Ratio::new(1.into(), 2.into()))?;
    let predicted = psi
        .iter()
        .take(stages)
        .map(|p| p * &nu_value + (Ratio::one() - p) * &alpha)
        .collect();
    Ok(PhiReduction {
        reduction: PsiReduction {
            build,
            psi,
            measures,
            rows,
        },
        alpha,
        nu_value,
        series,
        predicted,
    })
}
