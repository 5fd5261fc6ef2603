//! Scans a split member of the x0*g + x1*f family for singular points over F_p
//! and checks the verdict on the rational nodes.

use nodal::conditions::q_factoriality_verdict;
use nodal::families::{cayley_bacharach_points, find_nodes, split_example_ii};
use nodal::Mode;

fn main() -> nodal::Result<()> {
    let inst = split_example_ii();
    println!("F = {}", inst.equation);
    for p in [7, 11] {
        let list = find_nodes(&inst, p)?;
        println!("over F_{p}: {} singular points, {} nodes", list.points.len(), list.nodes);
        for pt in &list.points {
            println!("  {pt}");
        }
    }
    let nodes: Vec<_> = cayley_bacharach_points().iter().map(|p| p.lift_front(2)).collect();
    let v = q_factoriality_verdict(Mode::Hypersurface { n: 4 }, &nodes)?;
    println!("defect {} in degree {}: Q-factorial = {}", v.report.defect, v.degree, v.q_factorial);
    Ok(())
}
