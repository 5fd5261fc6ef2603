//! Size and curve conditions for plane points to impose independent
//! conditions on curves of degree d.

use nodal::incidence::bese_conditions;
use nodal::ProjPoint;

fn main() -> nodal::Result<()> {
    let general = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [2, -1, 5], [3, 1, -4]];
    let collinear: Vec<[i64; 3]> = (0..7).map(|t| [1, t, t]).collect();
    for (name, coords) in [("general", general.to_vec()), ("collinear", collinear)] {
        let pts: Vec<ProjPoint> = coords.iter().map(|c| ProjPoint::from_i64(c)).collect::<Result<_, _>>()?;
        let ledger = bese_conditions(&pts, 4)?;
        println!("{name}: theorem form {:?}, corollary form {:?}", ledger.theorem_form, ledger.corollary_form);
        for row in ledger.rows() {
            println!("  {row}");
        }
    }
    Ok(())
}
