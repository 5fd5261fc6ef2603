//! Most points on one line, conic and cubic, with the witness curve.

use nodal::incidence::{check_cy_double_solid, max_points_on_curve};
use nodal::ProjPoint;

fn main() -> nodal::Result<()> {
    let mut pts: Vec<ProjPoint> = (0..6).map(|t| ProjPoint::from_i64(&[1, t, 2 * t + 1])).collect::<Result<_, _>>()?;
    pts.extend((1..=5).map(|t| ProjPoint::from_i64(&[t, t * t, 1])).collect::<Result<Vec<_>, _>>()?);
    for k in 1..=3 {
        let best = max_points_on_curve(&pts, k)?;
        println!("degree {k}: {} points on {} {:?}", best.count, best.witness, best.incident);
    }
    let nabla = check_cy_double_solid(&pts)?;
    println!("at most 7 on a line and 14 on a conic: {}", nabla.holds());
    Ok(())
}
