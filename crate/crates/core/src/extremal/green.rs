use std::sync::Arc;

use super::nodes::NodeSequence;
use crate::sets::{green_oracle, CompactSetSpec};
use crate::{Complex, Result};

/// `max(0, (log|ωₙ(z)| − log‖ωₙ‖)/(n+1))`: a lower-biased estimate of `g_E(z)`.
pub fn green_estimate(nodes: &NodeSequence, z: Complex) -> f64 {
    if nodes.nodes.contains(&z) {
        return 0.0;
    }
    let g = (nodes.log_abs_nodal(z) - nodes.log_nodal_supnorm) / nodes.nodes.len() as f64;
    if g.is_finite() {
        g.max(0.0)
    } else {
        0.0
    }
}

/// Where Green's function values come from.
#[derive(Clone, Debug)]
pub enum GreenSource {
    Oracle(CompactSetSpec),
    Nodal(Arc<NodeSequence>),
}

impl GreenSource {
    pub fn eval(&self, z: Complex) -> Result<f64> {
        match self {
            GreenSource::Oracle(spec) => green_oracle(spec, z),
            GreenSource::Nodal(nodes) => Ok(green_estimate(nodes, z)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GreenSource::Oracle(_) => "oracle",
            GreenSource::Nodal(_) => "nodal",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::leja_points;
    use crate::sets::{build_mesh, MeshRole};

    #[test]
    fn disk_estimate_near_log2() {
        let mesh = build_mesh(&CompactSetSpec::unit_disk(), MeshRole::Boundary, 0.002).unwrap();
        let ns = leja_points(&mesh, 200).unwrap();
        let g = green_estimate(&ns, Complex::new(2.0, 0.0));
        assert!((g - 2f64.ln()).abs() < 0.02, "{g}");
        assert_eq!(green_estimate(&ns, ns.nodes[5]), 0.0);
    }
}
