//! Estimates the dimension of a common zero set from point counts over two primes.

use nodal::conditions::base_locus_dim_probe;
use nodal::forms::parse_form;

fn main() -> nodal::Result<()> {
    let cases: [(&str, &[&str]); 3] = [
        ("a point", &["x1", "x2", "x3"]),
        ("a line", &["x2", "x3"]),
        ("a conic", &["x3", "x0*x2 - x1^2"]),
    ];
    for (name, gens) in cases {
        let forms = gens.iter().map(|g| parse_form(g, 4)).collect::<Result<Vec<_>, _>>()?;
        let r = base_locus_dim_probe(&forms, 4, None, [11, 13])?;
        println!("{name}: counts {:?}, dimension estimate {:?}", r.counts, r.estimate);
    }
    Ok(())
}
