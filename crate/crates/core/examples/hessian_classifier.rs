//! Hessian ranks at singular points: an ordinary double point has full rank.

use nodal::forms::parse_form;
use nodal::ProjPoint;

fn main() -> nodal::Result<()> {
    let origin = ProjPoint::from_i64(&[1, 0, 0, 0, 0])?;
    for text in ["x1^2 + x2^2 + x3^2 + x4^2", "x1^2 + x2^2 + x3^2", "x0*x1^2 + x0*x2^2 + x3^2*x4"] {
        let f = parse_form(text, 5)?;
        println!("{text}: singular {}, Hessian rank {}", f.is_singular_at(&origin)?, f.hessian_rank_at(&origin)?);
    }
    Ok(())
}
