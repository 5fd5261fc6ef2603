//! Eleven points on a conic plus four more: the conic is split off as a part
//! and the inequality ledger is printed row by row.

use nodal::incidence::partition;
use nodal::{Mode, ProjPoint};

fn main() -> nodal::Result<()> {
    let mut pts: Vec<ProjPoint> = (1..=11).map(|t| ProjPoint::from_i64(&[1, t, t * t])).collect::<Result<_, _>>()?;
    for c in [[2, 3, 7], [5, -1, 4], [3, 8, -2], [1, 7, 3]] {
        pts.push(ProjPoint::from_i64(&c)?);
    }
    let cert = partition(&pts, Mode::DoubleSolid { r: 3 })?;
    cert.check(&pts)?;
    for part in &cert.parts {
        println!("part of degree {} on {}: {:?}", part.degree, part.witness, part.indices);
    }
    println!("residual {:?}, residual degree {}", cert.residual, cert.residual_degree);
    for row in &cert.ledger {
        println!("  {row}");
    }
    println!("ledger passes: {}", cert.ledger_passes);
    Ok(())
}
