//! Builds a witness hypersurface for each node by projecting to the plane,
//! then compares it against the direct linear solve.

use nodal::pipeline::{cone_plan, witness_cone_with, witness_direct, Construction};
use nodal::{Mode, ProjPoint};

fn main() -> nodal::Result<()> {
    let coords = [[1, 2, -3, 5], [4, -1, 0, 2], [3, 3, 1, -7], [0, 5, 2, 1], [-2, 1, 6, 3], [7, 0, -1, 1], [1, -4, 4, 9], [2, 2, 5, -3], [6, 1, 1, 4]];
    let nodes: Vec<ProjPoint> = coords.iter().map(|c| ProjPoint::from_i64(c)).collect::<Result<_, _>>()?;
    let mode = Mode::DoubleSolid { r: 4 };
    let plan = cone_plan(&nodes, mode, 2024)?;
    println!("ledger passes: {}", plan.partition.ledger_passes);
    for p in 0..nodes.len() {
        let cone = witness_cone_with(&nodes, p, &plan)?;
        let direct = witness_direct(&nodes, p, mode.critical_degree())?.expect("general points are separated");
        cone.verify()?;
        direct.verify()?;
        let how = match &cone.construction {
            Construction::ConeComposite { residual_degree, .. } => format!("cone, plane curve of degree {residual_degree}"),
            Construction::DirectSolve => format!("direct ({})", cone.fallback.as_deref().unwrap_or("")),
        };
        println!("node {p} {}: {how}, {} terms vs {} direct", cone.point(), cone.witness.num_terms(), direct.witness.num_terms());
    }
    Ok(())
}
