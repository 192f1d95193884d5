use crate::energy::{AceInstance, ProblemInstance};
use crate::error::Result;
use crate::fields::{transform_ic_ace, transform_ic_burgers, transform_ic_heat};
use crate::jet::{burgers_act_point, heat_act_point, JetPoint};
use crate::lie::{AceGroupElement, BurgersGroupElement, HeatGroupElement, LieGroup, So2Element};

/// A group acting on a space of problem instances.
pub trait Action: Sync {
    type Group: LieGroup;
    type Space: Clone + Send + Sync;

    fn act(&self, g: &Self::Group, x: &Self::Space) -> Result<Self::Space>;
}

/// An action that also transforms individual jet points (used to push solution values back).
pub trait PointAction: Action {
    fn act_point(&self, g: &Self::Group, p: &JetPoint) -> Result<JetPoint>;
}

/// Heat symmetries acting on 1D instances at diffusivity `nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatAction {
    pub nu: f64,
}

impl Action for HeatAction {
    type Group = HeatGroupElement;
    type Space = ProblemInstance;

    fn act(&self, g: &HeatGroupElement, x: &ProblemInstance) -> Result<ProblemInstance> {
        Ok(ProblemInstance { field: transform_ic_heat(g, self.nu, &x.field)?, query: x.query.transform(&g.base_map())? })
    }
}

impl PointAction for HeatAction {
    fn act_point(&self, g: &HeatGroupElement, p: &JetPoint) -> Result<JetPoint> {
        heat_act_point(g, self.nu, p)
    }
}

/// Burgers symmetries acting on 1D instances.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BurgersAction;

impl Action for BurgersAction {
    type Group = BurgersGroupElement;
    type Space = ProblemInstance;

    fn act(&self, g: &BurgersGroupElement, x: &ProblemInstance) -> Result<ProblemInstance> {
        Ok(ProblemInstance { field: transform_ic_burgers(g, &x.field)?, query: x.query.transform(&g.base_map())? })
    }
}

impl PointAction for BurgersAction {
    fn act_point(&self, g: &BurgersGroupElement, p: &JetPoint) -> Result<JetPoint> {
        burgers_act_point(g, p)
    }
}

/// Rotations of the plane acting on points.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct So2Action;

impl Action for So2Action {
    type Group = So2Element;
    type Space = [f64; 2];

    fn act(&self, g: &So2Element, x: &[f64; 2]) -> Result<[f64; 2]> {
        Ok(g.apply(*x))
    }
}

/// Time shifts and rigid motions acting on Allen–Cahn instances.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AceAction;

impl Action for AceAction {
    type Group = AceGroupElement;
    type Space = AceInstance;

    fn act(&self, g: &AceGroupElement, x: &AceInstance) -> Result<AceInstance> {
        Ok(AceInstance {
            field: transform_ic_ace(g, &x.field),
            tf_lo: x.tf_lo + g.t_shift,
            tf_hi: x.tf_hi + g.t_shift,
            domain_angle: x.domain_angle + g.rigid.theta,
        })
    }
}
