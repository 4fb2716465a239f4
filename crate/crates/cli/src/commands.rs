use std::env;
use std::path::PathBuf;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use genericlab::birkhoff::{vset_diagnostics, LocalObservable};
use genericlab::io::{
    measure_from_json, measures_from_json, point_from_json, specification_from_json, tree_from_json,
};
use genericlab::measure::{emp_measure, prohorov, prohorov_bruteforce_oracle, prohorov_report};
use genericlab::rational::{decimal, ratio_string};
use genericlab::reductions::oxtoby::OxtobyMachine;
use genericlab::reductions::{
    oxtoby_build, oxtoby_language, oxtoby_reduce, phi_reduction, psi_reduction, tree_point, PsiSchedule,
};
use genericlab::symbolic::ShiftSpace;
use genericlab::tracing::{build_generic_point, trace_full_shift, verify_trace, BuildOptions};
use genericlab::{DiscreteMeasure, Point, Ratio, Word};

use crate::output::{both, cells, json_text, pre, ratio_arg, read_json, table, write_text, CliError};
use crate::{Command, MachineArgs, OxtobyVerb, PsiArgs};

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Prohorov { a, b, common, json } => {
            let mu = measure_from_json(&read_json(&a)?, common.horizon)?;
            let nu = measure_from_json(&read_json(&b)?, common.horizon)?;
            if json {
                let r = prohorov_report(&mu, &nu, common.horizon);
                let flow: Vec<Vec<String>> =
                    r.coupling.flow.iter().map(|row| row.iter().map(ratio_string).collect()).collect();
                let v = json!({
                    "distance": ratio_string(&r.distance),
                    "decimal": decimal(&r.distance),
                    "attained": r.attained,
                    "coupling": {
                        "rows": r.coupling.rows,
                        "cols": r.coupling.cols,
                        "threshold": ratio_string(&r.coupling.threshold),
                        "flow": flow,
                    },
                });
                emit(&common.out, &json_text(&v))
            } else {
                emit(&common.out, &format!("{}\n", both(&prohorov(&mu, &nu, common.horizon))))
            }
        }
        Command::CheckProhorov {
            pairs,
            support,
            seed,
            common,
        } => check_prohorov(pairs, support, seed, common.horizon, &common.out),
        Command::EmpSeries {
            point,
            targets,
            checkpoints,
            common,
        } => {
            let x = point_from_json(&read_json(&point)?)?;
            let targets = measures_from_json(&read_json(&targets)?, common.horizon)?;
            let t = vset_diagnostics(&x, &targets, &checkpoints, common.horizon).map_err(pre)?;
            let mut w = table(&common.out)?;
            w.write_record(["n", "target_id", "distance_num", "distance_den", "distance_decimal"])?;
            for (n, id, d) in &t.rows {
                w.write_record([
                    n.to_string(),
                    id.to_string(),
                    d.numer().to_string(),
                    d.denom().to_string(),
                    decimal(d),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Trace { spec, point, eps, d1, d2 } => {
            let xi = specification_from_json(&read_json(&spec)?)?;
            let (eps, d1, d2) = (ratio_arg("eps", &eps)?, ratio_arg("d1", &d1)?, ratio_arg("d2", &d2)?);
            let y = match point {
                Some(p) => point_from_json(&read_json(&p)?)?,
                None => trace_full_shift(&ShiftSpace::baire(), &xi).map_err(pre)?,
            };
            let report = verify_trace(&y, &xi, &eps, &d1, &d2).map_err(pre)?;
            print!("{}", json_text(&serde_json::to_value(&report)?));
            Ok(())
        }
        Command::GenericBuild {
            measures,
            eps,
            stages,
            cap,
            prefix_out,
            common,
        } => {
            let mus = measures_from_json(&read_json(&measures)?, common.horizon)?;
            let eps = ratio_arg("eps", &eps)?;
            let opts = BuildOptions {
                horizon: common.horizon,
                cap,
                decompose: true,
            };
            let b = build_generic_point(&mus, &eps, stages, &opts).map_err(pre)?;
            let mut w = table(&common.out)?;
            w.write_record([
                "stage", "k_n", "ell_n", "l_n", "achieved", "achieved_decimal", "bound", "bound_decimal", "pass",
            ])?;
            for (c, s) in b.certificates.iter().zip(&b.state.stages) {
                let mut rec = vec![c.stage.to_string(), s.k_n.to_string(), s.ell_n.to_string(), c.l_n.to_string()];
                rec.extend(cells(&c.achieved));
                rec.extend(cells(&c.bound));
                rec.push(c.pass.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
            if let Some(p) = prefix_out {
                write_prefix(&p, &b.prefix())?;
            }
            Ok(())
        }
        Command::PsiReduce { psi, targets } => {
            let h = psi.common.horizon;
            let targets = measures_from_json(&read_json(&targets)?, h)?;
            let (schedule, eps, nu, opts) = psi_setup(&psi)?;
            let r = psi_reduction(&psi.beta, &schedule, psi.stages, &eps, &nu, &targets, &opts).map_err(pre)?;
            let mut w = table(&psi.common.out)?;
            w.write_record([
                "stage",
                "l",
                "psi",
                "breakpoint",
                "to_target",
                "to_target_decimal",
                "to_mixture",
                "to_mixture_decimal",
                "bound",
                "bound_decimal",
            ])?;
            for row in &r.rows {
                let mut rec = vec![
                    row.stage.to_string(),
                    row.l.to_string(),
                    ratio_string(&row.psi),
                    row.breakpoint.map(|k| k.to_string()).unwrap_or_default(),
                ];
                rec.extend(cells(&row.to_target));
                rec.extend(cells(&row.to_mixture));
                rec.extend(cells(&row.bound));
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        }
        Command::PhiReduce { psi, mubar, symbol } => {
            let h = psi.common.horizon;
            let mubar = measure_from_json(&read_json(&mubar)?, h)?;
            let (schedule, eps, nu, opts) = psi_setup(&psi)?;
            let phi = LocalObservable::indicator(symbol);
            let r = phi_reduction(&psi.beta, &schedule, psi.stages, &eps, &nu, &mubar, &phi, &opts).map_err(pre)?;
            let mut w = table(&psi.common.out)?;
            w.write_record([
                "stage",
                "l",
                "psi",
                "breakpoint",
                "average",
                "average_decimal",
                "predicted",
                "predicted_decimal",
                "to_mixture",
                "to_mixture_decimal",
                "bound",
                "bound_decimal",
            ])?;
            for ((row, (_, avg)), pred) in r.reduction.rows.iter().zip(&r.series.values).zip(&r.predicted) {
                let mut rec = vec![
                    row.stage.to_string(),
                    row.l.to_string(),
                    ratio_string(&row.psi),
                    row.breakpoint.map(|k| k.to_string()).unwrap_or_default(),
                ];
                rec.extend(cells(avg));
                rec.extend(cells(pred));
                rec.extend(cells(&row.to_mixture));
                rec.extend(cells(&row.bound));
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        }
        Command::TreePoint {
            tree,
            stages,
            cap,
            prefix_out,
            common,
        } => {
            let tree = tree_from_json(&read_json(&tree)?)?;
            let tp = tree_point(&tree, stages, cap).map_err(pre)?;
            let zero = DiscreteMeasure::dirac(Point::constant(0));
            let mut w = table(&common.out)?;
            w.write_record([
                "n",
                "a",
                "b",
                "ell",
                "kind",
                "node",
                "symbol",
                "to_zero",
                "to_zero_decimal",
            ])?;
            for (i, blk) in tp.blocks.iter().enumerate() {
                let e = emp_measure(&tp.point, tp.ell[i] as usize, common.horizon).map_err(pre)?;
                let d = prohorov(&e, &zero, common.horizon);
                let node = blk
                    .node
                    .as_ref()
                    .map(|t| format!("[{}]", t.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")))
                    .unwrap_or_default();
                let mut rec = vec![
                    blk.n.to_string(),
                    tp.a[i].to_string(),
                    tp.b[i].to_string(),
                    tp.ell[i].to_string(),
                    blk.kind.clone(),
                    node,
                    blk.symbol.map(|s| s.to_string()).unwrap_or_default(),
                ];
                rec.extend(cells(&d));
                w.write_record(&rec)?;
            }
            w.flush()?;
            if let Some(p) = prefix_out {
                write_prefix(&p, &tp.point.prefix(tp.prefix_len))?;
            }
            Ok(())
        }
        Command::Oxtoby { verb } => oxtoby(verb),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_prefix(path: &std::path::Path, w: &Word) -> Result<(), CliError> {
    let parts: Vec<String> = w.as_slice().iter().map(|s| s.to_string()).collect();
    write_text(path, &format!("{}\n", parts.join(",")))
}

fn psi_setup(psi: &PsiArgs) -> Result<(PsiSchedule, Ratio, DiscreteMeasure, BuildOptions), CliError> {
    let h = psi.common.horizon;
    let schedule = match &psi.breakpoints {
        Some(bp) => PsiSchedule::new(bp.clone()).map_err(pre)?,
        None => PsiSchedule::triangular(psi.beta.len().max(2) * 2 + 2),
    };
    let eps = ratio_arg("eps", &psi.eps)?;
    let nu = measure_from_json(&read_json(&psi.nu)?, h)?;
    let opts = BuildOptions {
        horizon: h,
        cap: psi.cap,
        decompose: false,
    };
    Ok((schedule, eps, nu, opts))
}

/// A random measure: up to `support` eventually periodic binary points with
/// small integer weights.
fn random_measure(rng: &mut ChaCha8Rng, support: usize, horizon: usize) -> Result<DiscreteMeasure, CliError> {
    let size = rng.gen_range(1..=support);
    let mut atoms = Vec::with_capacity(size);
    let mut total = 0i64;
    let mut raw = Vec::with_capacity(size);
    for _ in 0..size {
        let pre: Vec<u32> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..2)).collect();
        let per: Vec<u32> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..2)).collect();
        let p = Point::eventually_periodic(Word::new(pre), Word::new(per)).map_err(pre_err)?;
        let w = rng.gen_range(1..=6i64);
        total += w;
        raw.push((p, w));
    }
    for (p, w) in raw {
        atoms.push((p, Ratio::new(BigInt::from(w), BigInt::from(total))));
    }
    DiscreteMeasure::new(atoms, horizon).map_err(pre_err)
}

fn pre_err<E: std::fmt::Display>(e: E) -> CliError {
    pre(e)
}

fn check_prohorov(
    pairs: usize,
    support: usize,
    seed: u64,
    horizon: usize,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    if support == 0 || support > 12 {
        return Err(CliError::Precondition("--support must lie in 1..=12".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = table(out)?;
    w.write_record(["pair", "flow", "flow_decimal", "oracle", "oracle_decimal", "equal"])?;
    let mut mismatches = 0;
    for i in 0..pairs {
        let mu = random_measure(&mut rng, support, horizon)?;
        let nu = random_measure(&mut rng, support, horizon)?;
        let d = prohorov(&mu, &nu, horizon);
        let o = prohorov_bruteforce_oracle(&mu, &nu, horizon).map_err(pre)?;
        if d != o {
            mismatches += 1;
        }
        let mut rec = vec![i.to_string()];
        rec.extend(cells(&d));
        rec.extend(cells(&o));
        rec.push((d == o).to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    if mismatches > 0 {
        return Err(CliError::Precondition(format!("{mismatches} of {pairs} pairs disagree")));
    }
    Ok(())
}

fn machine(args: &MachineArgs) -> Result<OxtobyMachine, CliError> {
    let m = oxtoby_build(&args.s, args.depth).map_err(pre)?;
    if let Some(dir) = env::var_os("GENERICLAB_CACHE_DIR") {
        let s: Vec<String> = m.s().iter().map(u64::to_string).collect();
        let path = PathBuf::from(dir).join(format!("oxtoby_s{}_d{}.json", s.join("-"), m.depth()));
        if !path.exists() {
            write_text(&path, &json_text(&m.to_json()))?;
        }
    }
    Ok(m)
}

fn oxtoby(verb: OxtobyVerb) -> Result<(), CliError> {
    match verb {
        OxtobyVerb::Words { machine: args, all, json } => {
            let m = machine(&args)?;
            if json {
                print!("{}", json_text(&m.to_json()));
            } else if all {
                for n in 0..=m.materialized_depth() {
                    let text = |b: Option<&[u8]>| String::from_utf8_lossy(b.unwrap_or_default()).into_owned();
                    println!("{n} {} {} {}", text(m.template(n)), text(m.zero(n)), text(m.one(n)));
                }
            } else {
                let w = m.template_string(m.depth()).ok_or_else(|| {
                    CliError::Precondition(format!("W_{} is longer than the word cap", m.depth()))
                })?;
                println!("{w}");
            }
            Ok(())
        }
        OxtobyVerb::Stats { machine: args, out } => {
            let m = machine(&args)?;
            let mut w = table(&out)?;
            w.write_record([
                "n",
                "s_n",
                "l_n",
                "m_zero",
                "m_zero_decimal",
                "m_one",
                "m_one_decimal",
                "product",
                "product_decimal",
                "identity",
            ])?;
            for n in 0..=m.depth() {
                let sn = if n == 0 { String::new() } else { m.s()[n - 1].to_string() };
                let mut rec = vec![n.to_string(), sn, m.len(n).to_string()];
                rec.extend(cells(&m.m_zero(n)));
                rec.extend(cells(&m.m_one(n)));
                rec.extend(cells(&m.product(n)));
                rec.push((m.m_one(n) - m.m_zero(n) == m.product(n)).to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        }
        OxtobyVerb::Language {
            machine: args,
            level,
            length,
            list,
        } => {
            let m = machine(&args)?;
            if level > m.depth() {
                return Err(CliError::Precondition(format!("level {level} exceeds depth {}", m.depth())));
            }
            let length = length.unwrap_or(m.len(level) as usize);
            let scan = oxtoby_language(&m, length, level).map_err(pre)?;
            match scan.bound {
                Some(b) => println!("count {} bound {b} holds {}", scan.count, scan.count as u128 <= b),
                None => println!("count {}", scan.count),
            }
            if list {
                for word in &scan.words {
                    println!("{word}");
                }
            }
            Ok(())
        }
        OxtobyVerb::Reduce {
            machine: args,
            beta,
            horizon,
            out,
        } => {
            let m = machine(&args)?;
            let r = oxtoby_reduce(&m, &beta, horizon).map_err(pre)?;
            let mut w = table(&out)?;
            w.write_record(["kind", "index", "len", "value", "value_decimal", "bound", "bound_decimal", "holds"])?;
            for (i, (len, v)) in r.series.iter().enumerate() {
                let mut rec = vec!["stage_end".to_string(), i.to_string(), len.to_string()];
                rec.extend(cells(v));
                rec.extend([String::new(), String::new(), String::new()]);
                w.write_record(&rec)?;
            }
            for c in &r.checkpoints {
                let mut rec = vec!["checkpoint".to_string(), c.i.to_string(), c.len.to_string()];
                rec.extend(cells(&c.m));
                rec.extend(cells(&c.lower_bound));
                rec.push((c.holds_lower && c.holds_gap && c.above_a).to_string());
                w.write_record(&rec)?;
            }
            for row in &r.running {
                let mut rec = vec!["running_max".to_string(), row.stage.to_string(), row.prefixes.to_string()];
                rec.extend(cells(&row.max_m));
                rec.extend(cells(&row.bound));
                rec.push(row.holds.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
