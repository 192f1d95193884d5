//! Acceptance suite: one PASS/FAIL line per criterion with pinned tolerances and runtime budgets.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lielac::energy::{kde_nll, AceInstance, BurgersDomainEnergy, HeatDomainEnergy, ProblemInstance, TemplateEnergy};
use lielac::fields::{
    gen_ace_ic, gen_grf_ic, gen_sine_ic, transform_ic_ace, AceIcParams, Field1D, GrfParams, QueryRegion, SineIcParams,
};
use lielac::jet::{burgers_act_point, check_brackets, check_group_laws, heat_act_point, JetPoint};
use lielac::lie::{AceGroupElement, BurgersGroupElement, GroupId, HeatGroupElement, LieAlgebraCoeffs, LieGroup, Se2Element};
use lielac::optim::{
    alg3_coordinate_descent, ace_discrete_canonicalize, fd_grad, fd_grad_fn, multi_init_canonicalize, Action, Algorithm, BurgersAction,
    HeatAction, OptimConfig, So2Action,
};
use lielac::pipeline::{ace_equivariant_apply, direct_apply, equivariant_apply, mean_rel_l2, rel_l2_error, ACCEPT_THRESHOLD};
use lielac::solvers::{
    burgers_pseudospectral_solve, burgers_solve, pde_residual_fn, AceConfig, BurgersOperator, HeatOperator, PdeKind,
    PseudoSpectralConfig,
};
use lielac::toy2d::{default_bandwidth, knn_classify, rotate, CanonicalKnn, RingMixture};
use lielac::energy::FnEnergy;

const HEAT_NU: f64 = 0.1;
const BURGERS_NU: f64 = 0.01;

struct Outcome {
    id: u8,
    pass: bool,
    detail: String,
}

fn report(id: u8, name: &str, budget_s: f64, run: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = run();
    let secs = start.elapsed().as_secs_f64();
    let pass = ok && secs < budget_s;
    let budget = if budget_s.is_finite() { format!("{budget_s:.0}s") } else { "none".to_string() };
    let line = format!(
        "criterion {id} [{}] {name}: {detail}; runtime {secs:.2}s (budget {budget})\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    Outcome { id, pass, detail }
}

fn heat_instance(amp: f64, phase: f64) -> ProblemInstance {
    let field = gen_sine_ic(&SineIcParams::single(amp, 1.0, phase, TAU), 257).unwrap();
    ProblemInstance::new(field, QueryRegion::rectangle(0.0, TAU, 0.0, 16.0).unwrap())
}

fn heat_canon_cfg(num_inits: usize, seed: u64) -> OptimConfig {
    OptimConfig { num_inits, init_scale: 0.2, seed, ..OptimConfig::gauss_newton() }
}

fn random_coeffs(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-scale..=scale)).collect()
}

fn compare_on_grid(a: &Field1D, reference: &Field1D) -> f64 {
    let num: f64 = reference.grid().iter().zip(&reference.values).map(|(x, r)| (a.interpolate(*x) - r).powi(2)).sum();
    let den: f64 = reference.values.iter().map(|r| r * r).sum();
    (num / den).sqrt()
}

fn criterion_1() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for group in [GroupId::Heat, GroupId::Burgers] {
        let r = check_group_laws(group, 1000, 100, HEAT_NU, 11).unwrap();
        ok &= r.pass(1e-10, 1e-9) && r.skipped == 0;
        parts.push(format!(
            "{} assoc {:.1e} ident {:.1e} inv {:.1e} action {:.1e} (tol 1e-10/1e-9, skipped {})",
            group.name(),
            r.associativity,
            r.identity,
            r.inverse,
            r.action,
            r.skipped
        ));
    }
    (ok, parts.join("; "))
}

fn criterion_2() -> (bool, String) {
    let p = JetPoint::new(0.5, 0.3, 1.0);
    let mut ok = true;
    let mut parts = Vec::new();
    for group in [GroupId::Heat, GroupId::Burgers] {
        let r = check_brackets(group, 1e-2, HEAT_NU, &p, 0.05, 1e-3).unwrap();
        let worst_nz = r.rows.iter().filter(|c| !c.zero_bracket).map(|c| c.error).fold(0.0, f64::max);
        let worst_z = r.rows.iter().filter(|c| c.zero_bracket).map(|c| c.error).fold(0.0, f64::max);
        ok &= r.all_pass();
        parts.push(format!(
            "{} sign {:+} {} pairs, worst nonzero rel {:.1e} (tol 5e-2), worst zero {:.1e} (tol 1e-3)",
            group.name(),
            r.sign,
            r.rows.len(),
            worst_nz,
            worst_z
        ));
    }
    (ok, parts.join("; "))
}

fn criterion_3() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let kernel = |t: f64, x: f64| (4.0 * PI * HEAT_NU * (t + 1.0)).sqrt().recip() * (-x * x / (4.0 * HEAT_NU * (t + 1.0))).exp();
    let mut worst_heat = 0.0f64;
    for _ in 0..50 {
        let g = HeatGroupElement::exp_train(&random_coeffs(&mut rng, 6, 0.2));
        let back = g.inverse().base_map();
        let moved = |t: f64, x: f64| {
            let (t0, x0) = back.apply(t, x).unwrap();
            heat_act_point(&g, HEAT_NU, &JetPoint::new(t0, x0, kernel(t0, x0))).unwrap().u
        };
        worst_heat = worst_heat.max(pde_residual_fn(PdeKind::Heat, moved, HEAT_NU, (0.5, 1.5), (-1.0, 1.0), (201, 201)));
    }
    let nu_b = 0.05;
    let amp = 0.5;
    let cole_hopf = |t: f64, x: f64| {
        let s = t + 1.0;
        let k = amp * (4.0 * PI * nu_b * s).sqrt().recip() * (-x * x / (4.0 * nu_b * s)).exp();
        k * x / (s * (1.0 + k))
    };
    let mut worst_burgers = 0.0f64;
    for _ in 0..50 {
        let g = BurgersGroupElement::exp_train(&random_coeffs(&mut rng, 5, 0.2));
        let back = g.inverse().base_map();
        let moved = |t: f64, x: f64| {
            let (t0, x0) = back.apply(t, x).unwrap();
            burgers_act_point(&g, &JetPoint::new(t0, x0, cole_hopf(t0, x0))).unwrap().u
        };
        worst_burgers = worst_burgers.max(pde_residual_fn(PdeKind::Burgers, moved, nu_b, (0.5, 1.5), (-1.0, 1.0), (201, 201)));
    }
    (
        worst_heat <= 1e-3 && worst_burgers <= 1e-3,
        format!("max residual heat {worst_heat:.2e}, burgers {worst_burgers:.2e} over 50 g each (tol 1e-3)"),
    )
}

fn criterion_4() -> (bool, String) {
    let action = HeatAction { nu: HEAT_NU };
    let energy = HeatDomainEnergy::default();
    let x = heat_instance(2.0, 0.3);
    let cfg = heat_canon_cfg(8, 4);
    let base = multi_init_canonicalize(Algorithm::GlobalRetraction, &action, &energy, &x, &cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_e, mut worst_f, mut done) = (0.0f64, 0.0f64, 0);
    while done < 20 {
        let g = HeatGroupElement::exp_train(&random_coeffs(&mut rng, 6, 0.2));
        let Ok(gx) = action.act(&g, &x) else { continue };
        done += 1;
        match multi_init_canonicalize(Algorithm::GlobalRetraction, &action, &energy, &gx, &cfg) {
            Ok(r) => {
                worst_e = worst_e.max((r.final_energy - base.final_energy).abs());
                worst_f = worst_f.max(compare_on_grid(&r.canonical.field, &base.canonical.field));
            }
            Err(_) => {
                worst_e = f64::INFINITY;
                worst_f = f64::INFINITY;
            }
        }
    }
    (
        worst_e <= 1e-3 && worst_f <= 1e-2,
        format!(
            "20 g: max |ΔE| {worst_e:.2e} (tol 1e-3), max canonical rel L2 {worst_f:.2e} (tol 1e-2), E(canon x) {:.2e}",
            base.final_energy
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let action = HeatAction { nu: HEAT_NU };
    let energy = HeatDomainEnergy::default();
    let op = HeatOperator::default();
    let times: Vec<f64> = (0..=16).map(|k| k as f64).collect();
    let (mut worst_amp, mut worst_err, mut failures) = (0.0f64, 0.0f64, 0);
    for amp in [0.5, 1.0, 2.0, 3.0, 5.0] {
        for seed in 0..10u64 {
            let phase = ChaCha8Rng::seed_from_u64(seed).random_range(0.0..TAU);
            let inst = heat_instance(amp, phase);
            let cfg = heat_canon_cfg(4, seed);
            let canon = |x: &ProblemInstance| multi_init_canonicalize(Algorithm::GlobalRetraction, &action, &energy, x, &cfg);
            match equivariant_apply(&op, &action, canon, &inst, &times, ACCEPT_THRESHOLD) {
                Ok(out) => {
                    let f = &out.canon.canonical.field;
                    let peak = f.max().max(-f.min());
                    worst_amp = worst_amp.max((peak - 1.0).abs());
                    let direct = direct_apply(&op, &inst.field, &times).unwrap();
                    worst_err = worst_err.max(mean_rel_l2(&out.solutions, &direct).unwrap());
                }
                Err(_) => failures += 1,
            }
        }
    }
    (
        failures == 0 && worst_amp <= 0.05 && worst_err <= 1e-2,
        format!(
            "50 runs, {failures} failed; max |max|u|−1| {worst_amp:.2e} (tol 5e-2), max time-averaged rel L2 {worst_err:.2e} (tol 1e-2)"
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let action = BurgersAction;
    let energy = BurgersDomainEnergy::default();
    let op = BurgersOperator { nu: BURGERS_NU };
    let times: Vec<f64> = (0..=10).map(|k| 0.1 * k as f64).collect();
    let cfg = OptimConfig::default();
    let grf = GrfParams { mean_offset: 0.2, ..GrfParams::default() };
    let (mut worst_mean, mut worst_err, mut failures) = (0.0f64, 0.0f64, 0);
    for seed in 0..10u64 {
        let field = gen_grf_ic(&grf, 257, seed).unwrap();
        let inst = ProblemInstance::new(field, QueryRegion::rectangle(0.0, 1.0, 0.0, 1.0).unwrap());
        let canon = |x: &ProblemInstance| alg3_coordinate_descent(&action, &energy, x, &cfg);
        match equivariant_apply(&op, &action, canon, &inst, &times, ACCEPT_THRESHOLD) {
            Ok(out) => {
                worst_mean = worst_mean.max(out.canon.canonical.field.mean().abs());
                let reference = burgers_pseudospectral_solve(&inst.field, BURGERS_NU, &times, &PseudoSpectralConfig::default()).unwrap();
                worst_err = worst_err.max(mean_rel_l2(&out.solutions, &reference).unwrap());
            }
            Err(_) => failures += 1,
        }
    }
    (
        failures == 0 && worst_mean <= 1e-4 && worst_err <= 2e-2,
        format!("10 seeds, {failures} failed; max |canonical mean| {worst_mean:.2e} (tol 1e-4), max time-averaged rel L2 vs 4× reference {worst_err:.2e} (tol 2e-2)"),
    )
}

fn criterion_7() -> (bool, String) {
    let n = 64;
    let inner = TemplateEnergy::standard(n);
    let cfg = AceConfig::default();
    let times = [0.002, 0.005];
    let (mut mismatches, mut checked, mut worst_pipe) = (0usize, 0usize, 0.0f64);
    for ic in 0..10u64 {
        let field = gen_ace_ic(&AceIcParams::random(100 + ic, ic >= 5), n).unwrap();
        let x = AceInstance::new(field, 0.0, 0.005);
        let base = ace_discrete_canonicalize(&x, &inner).unwrap();
        for k in 0..4u8 {
            for sy in 0..n {
                for sx in 0..n {
                    let g = AceGroupElement::new(0.0, Se2Element::new(k as f64 * PI / 2.0, sx as f64 / n as f64, sy as f64 / n as f64));
                    let gx = AceInstance { field: transform_ic_ace(&g, &x.field), ..x.clone() };
                    let c = ace_discrete_canonicalize(&gx, &inner).unwrap();
                    checked += 1;
                    if c.canonical.field.values != base.canonical.field.values {
                        mismatches += 1;
                    }
                }
            }
        }
        let direct = ace_equivariant_apply(&x, &inner, &cfg, &times, f64::INFINITY).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(700 + ic);
        for _ in 0..4 {
            let k = rng.random_range(0..4u8);
            let (sx, sy) = (rng.random_range(0..n), rng.random_range(0..n));
            let g = AceGroupElement::new(0.0, Se2Element::new(k as f64 * PI / 2.0, sx as f64 / n as f64, sy as f64 / n as f64));
            let gx = AceInstance { field: transform_ic_ace(&g, &x.field), ..x.clone() };
            let moved = ace_equivariant_apply(&gx, &inner, &cfg, &times, f64::INFINITY).unwrap();
            for (a, b) in moved.solutions.iter().zip(&direct.solutions) {
                let aligned = transform_ic_ace(&g, b);
                let d = a.values.iter().zip(&aligned.values).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                worst_pipe = worst_pipe.max(d);
            }
        }
    }
    (
        mismatches == 0 && worst_pipe <= 1e-12,
        format!("{checked} (IC, g) pairs, {mismatches} non-identical canonical fields; pipeline max frame-aligned difference {worst_pipe:.1e} over 40 g (tol 1e-12)"),
    )
}

fn criterion_8() -> (bool, String) {
    let mix = RingMixture::default();
    let train = mix.sample(100, 1).unwrap();
    let test = mix.sample(100, 2).unwrap();
    let h = default_bandwidth(&train);
    let k = 5;
    let cfg = lielac::toy2d::toy_optim_config();
    let model = CanonicalKnn::fit(&train, h, k, &cfg).unwrap();
    let thetas: Vec<f64> = (0..8).map(|j| TAU * j as f64 / 8.0 + 0.1).collect();
    let (mut invariant, mut pairs, mut correct, mut correct_rot, mut raw_correct, mut raw_rot) = (0, 0, 0, 0, 0, 0);
    for (p, &label) in test.points.iter().zip(&test.labels) {
        let base = model.predict(*p).unwrap();
        correct += (base == label) as usize;
        raw_correct += (knn_classify(&train, k, *p) == label) as usize;
        for &th in &thetas {
            let q = rotate(*p, th);
            let pred = model.predict(q).unwrap();
            pairs += 1;
            invariant += (pred == base) as usize;
            correct_rot += (pred == label) as usize;
            raw_rot += (knn_classify(&train, k, q) == label) as usize;
        }
    }
    let n = test.len() as f64;
    let inv_frac = invariant as f64 / pairs as f64;
    let acc = correct as f64 / n;
    let acc_rot = correct_rot as f64 / pairs as f64;
    let raw_acc = raw_correct as f64 / n;
    let raw_acc_rot = raw_rot as f64 / pairs as f64;
    (
        inv_frac >= 0.98 && (acc - acc_rot).abs() <= 0.02,
        format!(
            "invariant {:.2}% (tol ≥ 98%), canonical acc {:.2}% vs rotated {:.2}% (tol 2 pp); baseline acc {:.2}% vs rotated {:.2}% ({})",
            100.0 * inv_frac,
            100.0 * acc,
            100.0 * acc_rot,
            100.0 * raw_acc,
            100.0 * raw_acc_rot,
            if raw_acc_rot < acc_rot { "baseline lower" } else { "baseline not lower" }
        ),
    )
}

fn criterion_9() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let samples: Vec<[f64; 2]> = (0..200).map(|_| [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).collect();
    let h = 0.3;
    let mut kde_err = 0.0f64;
    for _ in 0..50 {
        let q = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let brute: f64 = samples
            .iter()
            .map(|s| ((-(s[0] - q[0]).powi(2) - (s[1] - q[1]).powi(2)) / (2.0 * h * h)).exp() / (2.0 * PI * h * h))
            .sum::<f64>()
            / samples.len() as f64;
        let nll = kde_nll(&samples, h, &q);
        kde_err = kde_err.max((nll + brute.ln()).abs());
    }

    let ic = gen_grf_ic(&GrfParams::default(), 257, 21).unwrap();
    let ch = burgers_solve(&ic, BURGERS_NU, &[1.0]).unwrap();
    let ps = burgers_pseudospectral_solve(&ic, BURGERS_NU, &[1.0], &PseudoSpectralConfig::default()).unwrap();
    let burgers_err = rel_l2_error(&ch[0], &ps[0]).unwrap();

    let quad = |xi: &[f64]| 1.5 * xi[0] * xi[0] - 0.7 * xi[1] * xi[1] + 0.3 * xi[0] * xi[1] + 2.0 * xi[1];
    let xi = [0.4, -1.1];
    let g = fd_grad_fn(quad, &xi, 1e-4).unwrap();
    let analytic = [3.0 * xi[0] + 0.3 * xi[1], -1.4 * xi[1] + 0.3 * xi[0] + 2.0];
    let mut grad_err = (g[0] - analytic[0]).abs().max((g[1] - analytic[1]).abs());

    let p0 = [0.3, 0.8];
    let target = FnEnergy(|p: &[f64; 2]| (p[0] - 1.0).powi(2) + p[1] * p[1]);
    let a = 0.7;
    let g = fd_grad(&target, &So2Action, &LieAlgebraCoeffs::new(GroupId::So2, vec![a]).unwrap(), &p0, 1e-4).unwrap();
    let analytic = 2.0 * (a.sin() * p0[0] + a.cos() * p0[1]);
    grad_err = grad_err.max((g[0] - analytic).abs());

    let field = gen_grf_ic(&GrfParams { mean_offset: 0.2, ..GrfParams::default() }, 257, 5).unwrap();
    let inst = ProblemInstance::new(field, QueryRegion::rectangle(0.0, 1.0, 0.0, 1.0).unwrap());
    let m = inst.field.mean();
    let mean_sq = FnEnergy(|x: &ProblemInstance| x.field.mean().powi(2));
    let c = -0.05;
    let coeffs = LieAlgebraCoeffs::new(GroupId::Burgers, vec![0.0, 0.0, 0.0, c, 0.0]).unwrap();
    let g = fd_grad(&mean_sq, &BurgersAction, &coeffs, &inst, 1e-4).unwrap();
    grad_err = grad_err.max((g[3] - 2.0 * (m + c)).abs());

    (
        kde_err <= 1e-12 && burgers_err <= 1e-4 && grad_err <= 1e-6,
        format!("KDE vs brute force {kde_err:.1e} (tol 1e-12), Cole–Hopf vs RK4 rel L2 {burgers_err:.1e} (tol 1e-4), FD vs analytic gradient {grad_err:.1e} (tol 1e-6)"),
    )
}

#[test]
fn acceptance_criteria() {
    let outcomes = vec![
        report(1, "group laws", 5.0, criterion_1),
        report(2, "brackets", 5.0, criterion_2),
        report(3, "solution invariance", 30.0, criterion_3),
        report(4, "canonicalization equivariance", f64::INFINITY, criterion_4),
        report(5, "heat OOD pipeline", 60.0, criterion_5),
        report(6, "Burgers OOD pipeline", 120.0, criterion_6),
        report(7, "ACE discrete canonicalization", 120.0, criterion_7),
        report(8, "toy 2D kNN", 30.0, criterion_8),
        report(9, "oracle equivalences", f64::INFINITY, criterion_9),
    ];
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.pass).map(|o| format!("{}: {}", o.id, o.detail)).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
