//! Command implementations.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use lielac::energy::{AceInstance, BurgersDomainConfig, BurgersDomainEnergy, EnergyConfig, HeatDomainConfig, HeatDomainEnergy, ProblemInstance, TemplateEnergy};
use lielac::fields::{gen_ace_ic, gen_grf_ic, gen_sine_ic, write_field1d_csv, write_field2d_csv, AceIcParams, QueryRegion};
use lielac::jet::{check_brackets, check_group_laws, JetPoint};
use lielac::lie::{GroupId, LieGroup};
use lielac::optim::{alg3_coordinate_descent, multi_init_canonicalize, Algorithm, BurgersAction, HeatAction, OptimConfig};
use lielac::pipeline::{ace_equivariant_apply, direct_apply, equivariant_apply, mean_rel_l2, rel_l2_error_2d, ACCEPT_THRESHOLD};
use lielac::solvers::{ace_solve, burgers_pseudospectral_solve, BurgersOperator, HeatOperator};
use lielac::toy2d::{decision_boundary_csv, default_bandwidth, knn_classify, rotate, so2_canonicalize, toy_optim_config, CanonicalKnn};

use crate::config::RunConfig;
use crate::output::{solutions_csv, write_file, write_json, Results};
use crate::CliError;

const BRACKET_POINT: JetPoint = JetPoint { t: 0.5, x: 0.3, u: 1.0 };
const BRACKET_ZERO_TOL: f64 = 1e-3;

fn required_group(cfg: &RunConfig, flag: Option<GroupId>) -> Result<GroupId, CliError> {
    flag.or(cfg.group).ok_or_else(|| CliError::Config("no group given (use --group or the config's \"group\")".into()))
}

fn secs(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Group-axiom and action-homomorphism suite; one row per check.
pub fn check_group(cfg: &RunConfig, group: Option<GroupId>, samples: Option<usize>, write: bool) -> Result<(), CliError> {
    let group = required_group(cfg, group)?;
    let n = samples.or(cfg.n_samples).unwrap_or(1000);
    let n_jets = cfg.n_jets.unwrap_or(100);
    let (param_tol, action_tol) = cfg.tol.map_or((1e-10, 1e-9), |t| (t, t));
    let r = check_group_laws(group, n, n_jets, cfg.heat.solver.nu, cfg.seed)?;
    let rows = [
        ("associativity", r.associativity, param_tol),
        ("identity", r.identity, param_tol),
        ("inverse", r.inverse, param_tol),
        ("action", r.action, action_tol),
    ];
    println!("group {} ({n} samples, {n_jets} jets, {} skipped)", group.name(), r.skipped);
    println!("{:<14} {:>12} {:>12}  status", "check", "max error", "tol");
    for (name, err, tol) in rows {
        println!("{name:<14} {err:>12.3e} {tol:>12.1e}  {}", status(err <= tol));
    }
    if write {
        write_json(&cfg.out_dir(), "check_group.json", &r)?;
    }
    if rows.iter().all(|(_, e, t)| e <= t) {
        Ok(())
    } else {
        Err(CliError::Check(format!("{} group laws exceed tolerance", group.name())))
    }
}

/// Commutator-of-flows estimates against the bracket table with one fitted sign.
pub fn check_brackets_cmd(cfg: &RunConfig, group: Option<GroupId>, eps: Option<f64>, write: bool) -> Result<(), CliError> {
    let group = required_group(cfg, group)?;
    let eps = eps.or(cfg.eps).unwrap_or(1e-2);
    if !(eps > 0.0) {
        return Err(CliError::Config("eps must be positive".into()));
    }
    let rel_tol = cfg.tol.unwrap_or(0.05);
    let r = check_brackets(group, eps, cfg.heat.solver.nu, &BRACKET_POINT, rel_tol, BRACKET_ZERO_TOL).map_err(|e| match e {
        lielac::Error::InvalidArgument(m) => CliError::Config(m),
        other => other.into(),
    })?;
    println!("group {} eps {eps:e} fitted sign {:+}", group.name(), r.sign);
    println!("{:<8} {:<40} {:<40} {:>10}  status", "pair", "estimate", "expected", "error");
    let fmt3 = |v: &[f64; 3]| format!("({:+.4e}, {:+.4e}, {:+.4e})", v[0], v[1], v[2]);
    for row in &r.rows {
        println!(
            "{:<8} {:<40} {:<40} {:>10.3e}  {}",
            format!("[v{},v{}]", row.i, row.j),
            fmt3(&row.estimate),
            fmt3(&row.expected),
            row.error,
            status(row.pass)
        );
    }
    if write {
        write_json(&cfg.out_dir(), "check_brackets.json", &r)?;
    }
    if r.all_pass() {
        Ok(())
    } else {
        Err(CliError::Check(format!("{} brackets disagree with the table", group.name())))
    }
}

fn heat_domain(cfg: &RunConfig) -> Result<HeatDomainConfig, CliError> {
    match cfg.energy_for(GroupId::Heat)? {
        None => Ok(HeatDomainConfig::default()),
        Some(EnergyConfig::HeatDomain { domain, alpha_reg }) if *alpha_reg == 0.0 => Ok(*domain),
        Some(_) => Err(CliError::Config("the heat command supports the unregularized heatDomain energy only".into())),
    }
}

fn burgers_domain(cfg: &RunConfig) -> Result<BurgersDomainConfig, CliError> {
    match cfg.energy_for(GroupId::Burgers)? {
        None => Ok(BurgersDomainConfig::default()),
        Some(EnergyConfig::BurgersDomain { domain, alpha_reg }) if *alpha_reg == 0.0 => Ok(*domain),
        Some(_) => Err(CliError::Config("the Burgers command supports the unregularized burgersDomain energy only".into())),
    }
}

fn report(results: &Results) {
    println!(
        "{}: final energy {:.6e}, relL2 direct vs pipeline {}",
        results.command,
        results.final_energy,
        results.rel_l2_direct_vs_pipeline.map_or("n/a".to_string(), |v| format!("{v:.3e}"))
    );
}

/// Heat sine-IC experiment: canonicalize, solve spectrally, compare with the direct solve.
pub fn canon_heat(cfg: &RunConfig) -> Result<(), CliError> {
    let run = &cfg.heat;
    run.solver.validate()?;
    let total = Instant::now();
    let field = gen_sine_ic(&run.ic, run.n_points)?;
    let query = QueryRegion::rectangle(0.0, run.ic.length, run.times[0], run.times[run.times.len() - 1])?;
    let inst = ProblemInstance::new(field, query);
    let energy = HeatDomainEnergy(heat_domain(cfg)?);
    let action = HeatAction { nu: run.solver.nu };
    let optim = cfg.optim_or(OptimConfig { num_inits: 4, init_scale: 0.2, ..OptimConfig::gauss_newton() })?;
    let op = HeatOperator { cfg: run.solver };
    let threshold = cfg.tol.unwrap_or(ACCEPT_THRESHOLD);

    let start = Instant::now();
    let canon = multi_init_canonicalize(Algorithm::GlobalRetraction, &action, &energy, &inst, &optim)?;
    let t_canon = secs(start);
    let start = Instant::now();
    let out = equivariant_apply(&op, &action, |_| Ok(canon), &inst, &run.times, threshold)?;
    let t_solve = secs(start);
    let start = Instant::now();
    let direct = direct_apply(&op, &inst.field, &run.times)?;
    let t_direct = secs(start);

    let f = &out.canon.canonical.field;
    let results = Results {
        command: "canon-heat".into(),
        final_energy: out.canon.final_energy,
        group_params: out.canon.g.params(),
        rel_l2_direct_vs_pipeline: Some(mean_rel_l2(&out.solutions, &direct)?),
        timings: BTreeMap::from([
            ("canonicalize".into(), t_canon),
            ("pipelineSolve".into(), t_solve),
            ("directSolve".into(), t_direct),
            ("total".into(), secs(total)),
        ]),
        seed: cfg.seed,
        metrics: BTreeMap::from([("canonicalMaxAbs".into(), f.max().max(-f.min())), ("initIndex".into(), out.canon.init_index as f64)]),
    };
    let dir = cfg.out_dir();
    write_json(&dir, "results.json", &results)?;
    write_field1d_csv(&dir.join("ic.csv"), &inst.field)?;
    write_field1d_csv(&dir.join("canonical_ic.csv"), f)?;
    write_file(&dir, "solutions.csv", &solutions_csv(&direct, &out.solutions))?;
    report(&results);
    Ok(())
}

/// Burgers GRF experiment: coordinate-descent canonicalization, Cole–Hopf solve, fine-grid reference.
pub fn canon_burgers(cfg: &RunConfig) -> Result<(), CliError> {
    let run = &cfg.burgers;
    let total = Instant::now();
    let field = gen_grf_ic(&run.ic, run.n_points, cfg.seed)?;
    let query = QueryRegion::rectangle(field.x_lo, field.x_hi, run.times[0], run.times[run.times.len() - 1])?;
    let inst = ProblemInstance::new(field, query);
    let energy = BurgersDomainEnergy(burgers_domain(cfg)?);
    let optim = cfg.optim_or(OptimConfig::default())?;
    let op = BurgersOperator { nu: run.nu };
    let threshold = cfg.tol.unwrap_or(ACCEPT_THRESHOLD);

    let start = Instant::now();
    let canon = alg3_coordinate_descent(&BurgersAction, &energy, &inst, &optim)?;
    let t_canon = secs(start);
    let start = Instant::now();
    let out = equivariant_apply(&op, &BurgersAction, |_| Ok(canon), &inst, &run.times, threshold)?;
    let t_solve = secs(start);
    let start = Instant::now();
    let reference = burgers_pseudospectral_solve(&inst.field, run.nu, &run.times, &run.reference)?;
    let t_direct = secs(start);

    let results = Results {
        command: "canon-burgers".into(),
        final_energy: out.canon.final_energy,
        group_params: out.canon.g.params(),
        rel_l2_direct_vs_pipeline: Some(mean_rel_l2(&out.solutions, &reference)?),
        timings: BTreeMap::from([
            ("canonicalize".into(), t_canon),
            ("pipelineSolve".into(), t_solve),
            ("directSolve".into(), t_direct),
            ("total".into(), secs(total)),
        ]),
        seed: cfg.seed,
        metrics: BTreeMap::from([("canonicalMean".into(), out.canon.canonical.field.mean()), ("icMean".into(), inst.field.mean())]),
    };
    let dir = cfg.out_dir();
    write_json(&dir, "results.json", &results)?;
    write_field1d_csv(&dir.join("ic.csv"), &inst.field)?;
    write_field1d_csv(&dir.join("canonical_ic.csv"), &out.canon.canonical.field)?;
    write_file(&dir, "solutions.csv", &solutions_csv(&reference, &out.solutions))?;
    report(&results);
    Ok(())
}

/// Allen–Cahn experiment with the exhaustive quarter-turn × grid-translation canonicalizer.
pub fn canon_ace(cfg: &RunConfig) -> Result<(), CliError> {
    let run = &cfg.ace;
    match cfg.energy_for(GroupId::Se2)? {
        None | Some(EnergyConfig::AceConstrained { .. }) => {}
        Some(_) => return Err(CliError::Config("the Allen–Cahn command supports the aceConstrained energy only".into())),
    }
    let total = Instant::now();
    let field = gen_ace_ic(&AceIcParams::random(cfg.seed, run.shifted), run.n)?;
    let inst = AceInstance::new(field, run.tf_lo, run.tf_hi);
    let inner = TemplateEnergy::standard(run.n);
    let threshold = cfg.tol.unwrap_or(f64::INFINITY);

    let start = Instant::now();
    let out = ace_equivariant_apply(&inst, &inner, &run.solver, &run.times, threshold)?;
    let t_pipe = secs(start);
    let start = Instant::now();
    let direct = ace_solve(&inst.field, &run.solver, &run.times)?;
    let t_direct = secs(start);
    let errs = out.solutions.iter().zip(&direct).map(|(a, b)| rel_l2_error_2d(a, b)).collect::<lielac::Result<Vec<f64>>>()?;

    let results = Results {
        command: "canon-ace".into(),
        final_energy: out.canon.final_energy,
        group_params: out.canon.g.params(),
        rel_l2_direct_vs_pipeline: Some(errs.iter().sum::<f64>() / errs.len() as f64),
        timings: BTreeMap::from([("pipeline".into(), t_pipe), ("directSolve".into(), t_direct), ("total".into(), secs(total))]),
        seed: cfg.seed,
        metrics: BTreeMap::new(),
    };
    let dir = cfg.out_dir();
    write_json(&dir, "results.json", &results)?;
    write_field2d_csv(&dir.join("ic.csv"), &inst.field)?;
    write_field2d_csv(&dir.join("canonical_ic.csv"), &out.canon.canonical.field)?;
    if let (Some(p), Some(d)) = (out.solutions.last(), direct.last()) {
        write_field2d_csv(&dir.join("pipeline_final.csv"), p)?;
        write_field2d_csv(&dir.join("direct_final.csv"), d)?;
    }
    report(&results);
    Ok(())
}

#[derive(Serialize)]
struct Prediction {
    x: f64,
    y: f64,
    label: usize,
    raw: usize,
    canon: usize,
    theta: f64,
}

/// Ring-mixture kNN with and without rotation canonicalization, plus decision-boundary export.
pub fn canon_2d(cfg: &RunConfig) -> Result<(), CliError> {
    let run = &cfg.toy;
    let total = Instant::now();
    let train = run.mixture.sample(run.n_train_per_ring, cfg.seed)?;
    let test = run.mixture.sample(run.n_test_per_ring, cfg.seed.wrapping_add(1))?;
    if run.k > train.len() {
        return Err(CliError::Config("k exceeds the training-set size".into()));
    }
    let h = match cfg.energy_for(GroupId::So2)? {
        Some(EnergyConfig::KdeNll { bandwidth }) => *bandwidth,
        _ => run.bandwidth.unwrap_or_else(|| default_bandwidth(&train)),
    };
    let optim = cfg.optim_or(toy_optim_config())?;

    let start = Instant::now();
    let model = CanonicalKnn::fit(&train, h, run.k, &optim)?;
    let t_fit = secs(start);
    let start = Instant::now();
    let canon: Vec<_> = test.points.par_iter().map(|&p| so2_canonicalize(&train.points, h, p, &optim)).collect::<lielac::Result<_>>()?;
    let thetas: Vec<f64> = (0..run.rotations).map(|j| TAU * j as f64 / run.rotations as f64 + 0.1).collect();
    let rotated: Vec<[usize; 3]> = test
        .points
        .par_iter()
        .zip(&test.labels)
        .zip(&canon)
        .map(|((p, &label), c)| {
            let base = knn_classify(&model.canonical, run.k, c.canonical);
            let mut counts = [0; 3];
            for &th in &thetas {
                let q = rotate(*p, th);
                let pred = model.predict(q)?;
                counts[0] += (pred == base) as usize;
                counts[1] += (pred == label) as usize;
                counts[2] += (knn_classify(&train, run.k, q) == label) as usize;
            }
            Ok(counts)
        })
        .collect::<lielac::Result<_>>()?;
    let t_eval = secs(start);

    let mut predictions = Vec::with_capacity(test.len());
    let (mut correct, mut raw_correct) = (0usize, 0usize);
    for ((p, &label), c) in test.points.iter().zip(&test.labels).zip(&canon) {
        let pred = knn_classify(&model.canonical, run.k, c.canonical);
        let raw = knn_classify(&train, run.k, *p);
        correct += (pred == label) as usize;
        raw_correct += (raw == label) as usize;
        predictions.push(Prediction { x: p[0], y: p[1], label, raw, canon: pred, theta: c.g.theta });
    }
    let [invariant, correct_rot, raw_rot] = rotated.iter().fold([0; 3], |acc, r| [acc[0] + r[0], acc[1] + r[1], acc[2] + r[2]]);
    let n = test.len() as f64;
    let pairs = n * thetas.len() as f64;

    let start = Instant::now();
    let boundary = decision_boundary_csv(&train, &model, &run.lattice)?;
    let t_boundary = secs(start);

    let results = Results {
        command: "canon-2d".into(),
        final_energy: canon.iter().map(|c| c.final_energy).sum::<f64>() / n,
        group_params: canon.iter().map(|c| c.g.theta).collect(),
        rel_l2_direct_vs_pipeline: None,
        timings: BTreeMap::from([
            ("fit".into(), t_fit),
            ("evaluate".into(), t_eval),
            ("decisionBoundary".into(), t_boundary),
            ("total".into(), secs(total)),
        ]),
        seed: cfg.seed,
        metrics: BTreeMap::from([
            ("bandwidth".into(), h),
            ("accuracy".into(), correct as f64 / n),
            ("rotatedAccuracy".into(), correct_rot as f64 / pairs),
            ("invariantFraction".into(), invariant as f64 / pairs),
            ("baselineAccuracy".into(), raw_correct as f64 / n),
            ("baselineRotatedAccuracy".into(), raw_rot as f64 / pairs),
        ]),
    };
    let dir = cfg.out_dir();
    write_json(&dir, "results.json", &results)?;
    write_file(&dir, "decision_boundary.csv", &boundary)?;
    let mut csv = String::from("x,y,label,pred_raw,pred_canon,theta\n");
    for p in &predictions {
        writeln!(csv, "{:.16e},{:.16e},{},{},{},{:.16e}", p.x, p.y, p.label, p.raw, p.canon, p.theta).expect("writing to a String cannot fail");
    }
    write_file(&dir, "predictions.csv", &csv)?;
    report(&results);
    println!(
        "accuracy {:.4}, rotated {:.4}, invariant {:.4}; baseline {:.4}, rotated {:.4}",
        results.metrics["accuracy"],
        results.metrics["rotatedAccuracy"],
        results.metrics["invariantFraction"],
        results.metrics["baselineAccuracy"],
        results.metrics["baselineRotatedAccuracy"]
    );
    Ok(())
}
