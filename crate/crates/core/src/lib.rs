//! Exact computations around the Q-factoriality of nodal threefolds.
//!
//! A nodal double solid branched over a surface of degree `2r` in P³, or a
//! nodal hypersurface of degree `n` in P⁴, is Q-factorial exactly when its
//! nodes impose independent linear conditions on forms of degree `3r - 4`
//! (resp. `2n - 5`). This crate turns that criterion into exact linear
//! algebra and builds the surrounding machinery:
//!
//! * [`exactalg`]: rationals and prime fields, rank, kernels, affine solves.
//! * [`forms`]: sparse homogeneous polynomials, a parser, derivatives, Hessians.
//! * [`projgeom`]: projective points, projections to P², cones over plane curves.
//! * [`conditions`]: evaluation matrices, defect reports, verdicts, base-locus probes.
//! * [`incidence`]: exact plane-curve incidence search, the `∇`/`★` properties,
//!   Bese-type conditions and the partition certificate.
//! * [`families`]: the non-Q-factorial example families, node scans over F_p,
//!   the theorem bounds and the Varchenko lattice count.
//! * [`pipeline`]: separating hypersurfaces by direct solve or by the
//!   projection/cone construction, and the aggregate report.
//! * [`cli`]: the command-line surface and its file formats.

pub mod cli;
pub mod conditions;
pub mod error;
pub mod exactalg;
pub mod families;
pub mod forms;
pub mod incidence;
pub mod pipeline;
pub mod projgeom;

pub use error::{Error, Result};
pub use forms::{Form, Monomial};
pub use projgeom::ProjPoint;
pub use exactalg::{Field, Matrix, Scalar};



/// Mode of the constructive argument: a double solid branched over a surface
/// of degree `2r`, or a hypersurface of degree `n` in P⁴.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    DoubleSolid { r: u32 },
    Hypersurface { n: u32 },
}

impl Mode {
    /// Number of homogeneous coordinates of the ambient space (4 for P³, 5 for P⁴).
    pub fn num_vars(self) -> usize {
        match self {
            Mode::DoubleSolid { .. } => 4,
            Mode::Hypersurface { .. } => 5,
        }
    }

    /// The critical degree `3r - 4` or `2n - 5`. May be negative for tiny `r`, `n`.
    pub fn critical_degree(self) -> i64 {
        match self {
            Mode::DoubleSolid { r } => 3 * r as i64 - 4,
            Mode::Hypersurface { n } => 2 * n as i64 - 5,
        }
    }

    /// Incidence multiplier of property `∇` (`2r - 1`) or `★` (`n - 1`).
    pub fn multiplier(self) -> usize {
        match self {
            Mode::DoubleSolid { r } => (2 * r as usize).saturating_sub(1),
            Mode::Hypersurface { n } => (n as usize).saturating_sub(1),
        }
    }

    /// Degree consumed by one oversized part of degree `j`: `3(j-1)` or `4(j-1)`.
    pub fn part_degree(self, j: usize) -> usize {
        let step = match self {
            Mode::DoubleSolid { .. } => 3,
            Mode::Hypersurface { .. } => 4,
        };
        step * j.saturating_sub(1)
    }

    /// Default degree cap for `∇`/`★` checks: `max(3, ⌊r/3⌋)` or `max(3, ⌊(n-1)/4⌋)`.
    pub fn degree_cap(self) -> usize {
        match self {
            Mode::DoubleSolid { r } => 3.max(r as usize / 3),
            Mode::Hypersurface { n } => 3.max((n as usize).saturating_sub(1) / 4),
        }
    }
}
