//! Full reports for random node sets at the size of the bound.

use nodal::pipeline::full_report;
use nodal::{Mode, ProjPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> nodal::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for mode in [Mode::DoubleSolid { r: 3 }, Mode::DoubleSolid { r: 4 }, Mode::Hypersurface { n: 5 }] {
        let size = match mode {
            Mode::DoubleSolid { r } => (2 * r - 1) * r / 3,
            Mode::Hypersurface { n } => (n - 1) * (n - 1) / 4,
        };
        let nodes: Vec<ProjPoint> = (0..size)
            .map(|_| {
                let c: Vec<i64> = (0..mode.num_vars()).map(|_| rng.gen_range(-20..=20)).collect();
                ProjPoint::from_i64(&c)
            })
            .collect::<Result<_, _>>()?;
        let report = full_report(&nodes, mode, 1)?;
        println!(
            "{mode:?}: {} nodes, bound {}, defect {}, unseparated {}, Q-factorial {}",
            nodes.len(),
            report.verdict.bound,
            report.defect,
            report.unseparated,
            report.q_factorial
        );
        for note in &report.notes {
            println!("  note: {note}");
        }
    }
    Ok(())
}
