//! Parsing, printing and differentiating forms.

use nodal::forms::parse_form;

fn main() -> nodal::Result<()> {
    let f = parse_form("(x0 + 2*x1)^3 - 3/2*x0*x1*x2", 3)?;
    println!("f = {f}");
    println!("degree {}, {} terms", f.degree(), f.num_terms());
    for (i, g) in f.gradient().iter().enumerate() {
        println!("df/dx{i} = {g}");
    }
    match parse_form("x0^2 + x1", 3) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
