//! Nine points cut out by two triples of lines: every cubic through eight of
//! them passes through the ninth, so they fail to impose independent
//! conditions on cubics but do impose them on quartics.

use nodal::conditions::defect;
use nodal::families::cayley_bacharach_points;

fn main() -> nodal::Result<()> {
    let pts = cayley_bacharach_points();
    for d in 2..=4 {
        let report = defect(&pts, d, 3)?;
        report.verify(&pts)?;
        println!("degree {d}: rank {} of {} points, defect {}", report.rank, pts.len(), report.defect);
        if let Some(dep) = report.dependency() {
            let dep: Vec<String> = dep.iter().map(ToString::to_string).collect();
            println!("  dependency: [{}]", dep.join(", "));
        }
    }
    Ok(())
}
