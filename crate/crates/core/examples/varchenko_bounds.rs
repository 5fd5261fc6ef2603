//! Lattice counts A_i(j) and the node-count bounds they are compared with.

use nodal::families::{theorem_bound, varchenko_bound, BoundKind};

fn main() -> nodal::Result<()> {
    for r in 2..=6 {
        let a = varchenko_bound(3, 2 * r)?;
        println!("double solid r={r}: A_3({}) = {a}, bound (2r-1)r/3 = {}", 2 * r, theorem_bound(BoundKind::DoubleSolid(r)));
    }
    for n in 3..=8 {
        let a = varchenko_bound(4, n)?;
        println!("hypersurface n={n}: A_4({n}) = {a}, bound (n-1)^2/4 = {}", theorem_bound(BoundKind::Hypersurface(n)));
    }
    Ok(())
}
