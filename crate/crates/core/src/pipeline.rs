//! Canonicalize → solve → decanonicalize.
//!
//! For a canonicalization `x = g · canonical`, an operator defined on canonical instances
//! answers a query at `(t, x)` of the original problem by solving at `g⁻¹ · (t, x)` and
//! pushing the value back through `g`.

use crate::energy::{AceInstance, FieldEnergy2D, ProblemInstance};
use crate::error::{Error, Result};
use crate::fields::{transform_ic_ace, Field1D, Field2D};
use crate::jet::JetPoint;
use crate::lie::{AceGroupElement, GroupId, LieGroup};
use crate::optim::{ace_discrete_canonicalize, CanonResult, PointAction};
use crate::solvers::{ace_solve, AceConfig};

/// Default largest canonical energy accepted by the pipeline.
pub const ACCEPT_THRESHOLD: f64 = 1e-3;

/// A solution operator for 1D periodic problems.
pub trait Operator1D: Sync {
    fn name(&self) -> &str;

    fn group(&self) -> GroupId;

    /// Solution of the problem with initial condition `ic` at time `t` and positions `xs`.
    fn evaluate(&self, ic: &Field1D, t: f64, xs: &[f64]) -> Result<Vec<f64>>;
}

/// Pipeline solutions together with the canonicalization that produced them.
#[derive(Debug, Clone)]
pub struct PipelineOutput<G, X, F> {
    pub solutions: Vec<F>,
    pub canon: CanonResult<G, X>,
}

/// Solves `ic` directly at `times` on its own grid.
pub fn direct_apply(op: &dyn Operator1D, ic: &Field1D, times: &[f64]) -> Result<Vec<Field1D>> {
    let xs = ic.grid();
    times.iter().map(|&t| Field1D::new(ic.x_lo, ic.x_hi, op.evaluate(ic, t, &xs)?, t, ic.periodic)).collect()
}

/// Canonicalizes `inst`, solves the canonical problem and maps the solution back.
///
/// Outputs live on the grid of `inst.field` at `times`. Fails with
/// [`Error::CanonicalizationFailed`] when the canonical energy exceeds `threshold`.
pub fn equivariant_apply<A, C>(
    op: &dyn Operator1D,
    action: &A,
    canonize: C,
    inst: &ProblemInstance,
    times: &[f64],
    threshold: f64,
) -> Result<PipelineOutput<A::Group, ProblemInstance, Field1D>>
where
    A: PointAction<Space = ProblemInstance>,
    C: FnOnce(&ProblemInstance) -> Result<CanonResult<A::Group, ProblemInstance>>,
{
    let canon = canonize(inst)?;
    if !(canon.final_energy <= threshold) {
        return Err(Error::CanonicalizationFailed { energy: canon.final_energy, threshold });
    }
    let xs = inst.field.grid();
    let mut solutions = Vec::with_capacity(times.len());
    for &t in times {
        let canonical_pts: Vec<JetPoint> =
            xs.iter().map(|&x| action.act_point(&canon.g_inv, &JetPoint::new(t, x, 0.0))).collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(xs.len());
        for group in canonical_pts.chunk_by(|a, b| a.t == b.t) {
            let qx: Vec<f64> = group.iter().map(|p| p.x).collect();
            let u = op.evaluate(&canon.canonical.field, group[0].t, &qx)?;
            for (p, u) in group.iter().zip(u) {
                values.push(action.act_point(&canon.g, &JetPoint::new(p.t, p.x, u))?.u);
            }
        }
        solutions.push(Field1D::new(inst.field.x_lo, inst.field.x_hi, values, t, inst.field.periodic)?);
    }
    Ok(PipelineOutput { solutions, canon })
}

/// Allen–Cahn pipeline with the exhaustive discrete canonicalizer.
///
/// The canonical problem is solved from its initial time and each solution is carried back by
/// the exact grid permutation of `g`.
pub fn ace_equivariant_apply<I: FieldEnergy2D + ?Sized>(
    inst: &AceInstance,
    inner: &I,
    cfg: &AceConfig,
    times: &[f64],
    threshold: f64,
) -> Result<PipelineOutput<AceGroupElement, AceInstance, Field2D>> {
    let canon = ace_discrete_canonicalize(inst, inner)?;
    if !(canon.final_energy <= threshold) {
        return Err(Error::CanonicalizationFailed { energy: canon.final_energy, threshold });
    }
    let shifted: Vec<f64> = times.iter().map(|t| t + canon.g_inv.t_shift).collect();
    let solved = ace_solve(&canon.canonical.field, cfg, &shifted)?;
    let solutions = solved
        .iter()
        .zip(times)
        .map(|(f, &t)| Field2D { time: t, ..transform_ic_ace(&canon.g, f) })
        .collect();
    Ok(PipelineOutput { solutions, canon })
}

/// Identity canonicalization, for running the pipeline without symmetry reduction.
pub fn identity_canon<G: LieGroup, X: Clone>(x: &X, final_energy: f64) -> CanonResult<G, X> {
    CanonResult {
        canonical: x.clone(),
        g: G::identity(),
        g_inv: G::identity(),
        energy_trace: vec![final_energy],
        init_index: 0,
        final_energy,
        steps: Vec::new(),
    }
}

fn rel_l2_values(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if den < 1e-14 {
        num
    } else {
        num / den
    }
}

/// `‖a − b‖₂ / ‖b‖₂` over grid values, or `‖a − b‖₂` when `‖b‖₂ < 1e-14`.
pub fn rel_l2_error(a: &Field1D, b: &Field1D) -> Result<f64> {
    if !a.same_grid(b, 1e-12) {
        return Err(Error::GridMismatch);
    }
    Ok(rel_l2_values(&a.values, &b.values))
}

/// [`rel_l2_error`] for 2D fields.
pub fn rel_l2_error_2d(a: &Field2D, b: &Field2D) -> Result<f64> {
    if a.nx != b.nx || a.ny != b.ny {
        return Err(Error::GridMismatch);
    }
    Ok(rel_l2_values(&a.values, &b.values))
}

/// Mean of [`rel_l2_error`] over paired time slices.
pub fn mean_rel_l2(a: &[Field1D], b: &[Field1D]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::DimensionMismatch { expected: b.len(), got: a.len() });
    }
    let total = a.iter().zip(b).map(|(x, y)| rel_l2_error(x, y)).sum::<Result<f64>>()?;
    Ok(total / a.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::HeatDomainEnergy;
    use crate::fields::{gen_sine_ic, QueryRegion, SineIcParams};
    use crate::lie::HeatGroupElement;
    use crate::optim::{alg1_global_retraction, HeatAction, OptimConfig};
    use crate::solvers::HeatOperator;
    use std::f64::consts::TAU;

    fn instance(amp: f64) -> ProblemInstance {
        let f = gen_sine_ic(&SineIcParams::single(amp, 1.0, 0.4, TAU), 257).unwrap();
        ProblemInstance::new(f, QueryRegion::rectangle(0.0, TAU, 0.0, 16.0).unwrap())
    }

    #[test]
    fn identity_canonicalization_reproduces_the_direct_solve() {
        let op = HeatOperator::default();
        let inst = instance(2.0);
        let times = [0.0, 0.5, 1.5];
        let out = equivariant_apply(&op, &HeatAction { nu: 0.1 }, |x| Ok(identity_canon(x, 0.0)), &inst, &times, 0.0).unwrap();
        let direct = direct_apply(&op, &inst.field, &times).unwrap();
        assert!(mean_rel_l2(&out.solutions, &direct).unwrap() < 1e-14);
        assert_eq!(out.canon.g, HeatGroupElement::identity());
    }

    #[test]
    fn canonicalized_heat_solve_agrees_with_direct() {
        let op = HeatOperator::default();
        let inst = instance(4.0);
        let action = HeatAction { nu: 0.1 };
        let times = [0.25, 1.0];
        let canon = |x: &ProblemInstance| alg1_global_retraction(&action, &HeatDomainEnergy::default(), x, &OptimConfig::gauss_newton());
        let out = equivariant_apply(&op, &action, canon, &inst, &times, ACCEPT_THRESHOLD).unwrap();
        let direct = direct_apply(&op, &inst.field, &times).unwrap();
        assert!(out.canon.g.param_distance(&HeatGroupElement::identity()) > 0.1);
        assert!(mean_rel_l2(&out.solutions, &direct).unwrap() < 1e-6);
    }

    #[test]
    fn high_canonical_energy_is_rejected() {
        let op = HeatOperator::default();
        let r = equivariant_apply(&op, &HeatAction { nu: 0.1 }, |x| Ok(identity_canon::<HeatGroupElement, _>(x, 0.5)), &instance(1.0), &[0.1], 1e-3);
        assert!(matches!(r, Err(Error::CanonicalizationFailed { .. })));
    }

    #[test]
    fn relative_errors() {
        let f = |c: f64| Field1D::from_fn(0.0, 1.0, 4, 0.0, true, move |_| c).unwrap();
        assert_eq!(rel_l2_error(&f(1.5), &f(1.0)).unwrap(), 0.5);
        assert_eq!(rel_l2_error(&f(0.5), &f(0.0)).unwrap(), 1.0);
        let other = Field1D::from_fn(0.0, 2.0, 4, 0.0, true, |_| 1.0).unwrap();
        assert!(matches!(rel_l2_error(&f(1.0), &other), Err(Error::GridMismatch)));
        assert!(mean_rel_l2(&[], &[]).is_err());
        assert_eq!(mean_rel_l2(&[f(2.0), f(1.0)], &[f(1.0), f(1.0)]).unwrap(), 0.5);
        assert!(matches!(rel_l2_error_2d(&Field2D::zeros(2, 2), &Field2D::zeros(2, 3)), Err(Error::GridMismatch)));
    }
}
