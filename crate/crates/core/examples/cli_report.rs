//! Runs CLI commands in-process on a point file and prints their reports.

use nodal::cli::{run, PointSetFile};
use nodal::families::cayley_bacharach_points;

fn main() -> std::io::Result<()> {
    let path = std::env::temp_dir().join("nodal-cli-report.txt");
    let file = PointSetFile::new(2, cayley_bacharach_points());
    std::fs::write(&path, file.to_lines())?;
    let p = path.to_str().expect("utf-8 path");
    for args in [
        vec!["defect", "--points", p, "--degree", "3"],
        vec!["curve-max", "--points", p, "--k", "1"],
        vec!["varchenko", "--i", "3", "--j", "8"],
    ] {
        let (code, out) = run(std::iter::once("nodal").chain(args));
        println!("exit {code}\n{out}");
    }
    Ok(())
}
