//! Exact maximum number of points of a plane configuration on a curve of
//! given degree.
//!
//! A nonzero form of degree `k` vanishing on a point set `T` exists iff the
//! evaluation rows of `T` have rank below `N = (k+1)(k+2)/2`. When the whole
//! set has rank `N`, the largest such `T` are closures of independent sets of
//! size `N - 1`: each is the full incidence set of the unique curve through
//! them. Every closure is reached exactly once through its greedy basis (the
//! basis picked in index order), which is how the search below enumerates
//! them, with a branch-and-bound cut on the best incidence count so far.
//!
//! The enumeration runs modulo a 61-bit prime. Reduction can only create
//! dependencies, so the modular maximum is an upper bound for the rational
//! one; the winning set is then confirmed over Q, which makes the answer exact.

use std::env;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{clear_denominators, inv_mod, is_prime, mul_mod, primitive, reduce_bigint, sub_mod, Field, Matrix, Scalar, FILTER_PRIME};
use crate::forms::{evaluate_basis, monomial_basis, Form, Monomial};
use crate::projgeom::ProjPoint;

/// Environment variable overriding [`SearchBudget::max_nodes`].
pub const BUDGET_ENV: &str = "NODAL_SEARCH_BUDGET";

/// Limits on the exact incidence search. Inputs that are settled without a
/// search (at most `N - 1` points, or all points on one curve) ignore them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_points: usize,
    pub max_degree: u32,
    /// Number of search-tree nodes visited before giving up.
    pub max_nodes: u64,
}

impl SearchBudget {
    pub const DEFAULT_NODES: u64 = 5_000_000;

    pub fn with_nodes(max_nodes: u64) -> SearchBudget {
        SearchBudget { max_nodes, ..SearchBudget::default() }
    }
}

impl Default for SearchBudget {
    /// 60 points, degree 3, and the node limit from `NODAL_SEARCH_BUDGET`
    /// when set.
    fn default() -> SearchBudget {
        let max_nodes = env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(Self::DEFAULT_NODES);
        SearchBudget { max_points: 60, max_degree: 3, max_nodes }
    }
}

/// Largest incidence of a degree-`k` curve with a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveMax {
    pub degree: u32,
    pub count: usize,
    /// Indices of the points on the witness curve (lexicographically smallest
    /// among all maximum incidence sets).
    pub incident: Vec<usize>,
    pub witness: Form,
}

fn check_plane(pts: &[ProjPoint]) -> Result<()> {
    match pts.iter().find(|p| p.num_vars() != 3) {
        Some(p) => Err(Error::dims(format!("point {p} is not in P^2"))),
        None => Ok(()),
    }
}

/// Exact maximum with the default budget.
pub fn max_points_on_curve(pts: &[ProjPoint], k: u32) -> Result<CurveMax> {
    max_points_on_curve_with(pts, k, &SearchBudget::default())
}

pub fn max_points_on_curve_with(pts: &[ProjPoint], k: u32, budget: &SearchBudget) -> Result<CurveMax> {
    check_plane(pts)?;
    if k == 0 {
        return Err(Error::invalid("curve degree must be at least 1"));
    }
    let basis = monomial_basis(3, k);
    let big_n = basis.len();
    let ints: Vec<Vec<BigInt>> = pts.iter().map(|p| evaluate_basis(&basis, p.coords())).collect();
    let all: Vec<usize> = (0..pts.len()).collect();
    if pts.len() < big_n {
        return confirmed(pts, &ints, &basis, k, all);
    }
    let whole = to_matrix(&ints, &all, big_n);
    if whole.rank() < big_n {
        return confirmed(pts, &ints, &basis, k, all);
    }
    if k > budget.max_degree || pts.len() > budget.max_points {
        return Err(Error::BudgetExceeded {
            what: format!("curve search for {} points at degree {k} (limits: {} points, degree {})", pts.len(), budget.max_points, budget.max_degree),
            partial: Some(big_n - 1),
        });
    }
    for p in [FILTER_PRIME, SECOND_PRIME] {
        debug_assert!(is_prime(p));
        let rows: Vec<Vec<u64>> = ints.iter().map(|r| r.iter().map(|x| reduce_bigint(x, p)).collect()).collect();
        let best = Search::run(rows, big_n, p, budget.max_nodes)?;
        if let Ok(found) = confirmed(pts, &ints, &basis, k, best) {
            return Ok(found);
        }
    }
    Err(Error::Verification("modular incidence search disagrees with exact arithmetic".into()))
}

/// 2^62 - 57, used only if the first modulus is unlucky.
const SECOND_PRIME: u64 = (1 << 62) - 57;

fn to_matrix(ints: &[Vec<BigInt>], idx: &[usize], cols: usize) -> Matrix {
    let rows = idx.iter().map(|&i| ints[i].iter().map(|x| Field::Rational.from_bigint(x)).collect()).collect();
    Matrix::from_rows(Field::Rational, cols, rows).expect("evaluation rows")
}

/// Checks over Q that a curve passes through every point of `set`, and that
/// the curve meets the configuration in exactly `set`.
fn confirmed(pts: &[ProjPoint], ints: &[Vec<BigInt>], basis: &[Monomial], k: u32, set: Vec<usize>) -> Result<CurveMax> {
    let m = to_matrix(ints, &set, basis.len());
    let kernel = m.kernel_basis();
    let Some(v) = kernel.first() else {
        return Err(Error::Verification("no curve through the claimed incidence set".into()));
    };
    let witness = integral_curve(basis, k, v);
    let incident: Vec<usize> =
        (0..pts.len()).filter(|&i| witness.evaluate_at(&pts[i]).map(|s| s.is_zero()).unwrap_or(false)).collect();
    if kernel.len() == 1 && incident != set {
        return Err(Error::Verification("witness curve meets points outside the incidence set".into()));
    }
    if !set.iter().all(|i| incident.contains(i)) {
        return Err(Error::Verification("witness curve misses a claimed point".into()));
    }
    Ok(CurveMax { degree: k, count: incident.len(), incident, witness })
}

/// A plane curve with primitive integer coefficients from a rational kernel vector.
pub(crate) fn integral_curve(basis: &[Monomial], degree: u32, v: &[Scalar]) -> Form {
    let q: Vec<BigRational> = v.iter().map(|s| s.as_rational().expect("rational kernel").clone()).collect();
    let mut ints = clear_denominators(&q);
    primitive(&mut ints);
    let terms = basis.iter().zip(ints).map(|(m, c)| (m.clone(), Field::Rational.from_bigint(&c)));
    Form::from_terms(basis.first().map_or(3, Monomial::num_vars), degree, Field::Rational, terms).expect("basis monomials")
}

struct Search {
    rows: Vec<Vec<u64>>,
    n: usize,
    cols: usize,
    p: u64,
    target: usize,
    nodes: u64,
    max_nodes: u64,
    best: Vec<usize>,
}

impl Search {
    fn run(rows: Vec<Vec<u64>>, cols: usize, p: u64, max_nodes: u64) -> Result<Vec<usize>> {
        let n = rows.len();
        let mut s = Search { rows, n, cols, p, target: cols - 1, nodes: 0, max_nodes, best: Vec::new() };
        let residuals = s.rows.clone();
        let excluded = vec![false; n];
        s.dfs(0, 0, &residuals, &excluded)?;
        Ok(s.best)
    }

    fn in_closure(r: &[u64]) -> bool {
        r.iter().all(|&x| x == 0)
    }

    /// `residuals[q]` is row `q` reduced against the chosen basis; zero means
    /// `q` lies in the closure. `excluded[q]` marks points skipped by the greedy
    /// order, which must stay outside the final closure.
    fn dfs(&mut self, depth: usize, start: usize, residuals: &[Vec<u64>], excluded: &[bool]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded { what: "curve incidence search".into(), partial: Some(self.best.len()) });
        }
        if depth == self.target {
            let closure: Vec<usize> = (0..self.n).filter(|&q| Self::in_closure(&residuals[q])).collect();
            if closure.len() > self.best.len() || (closure.len() == self.best.len() && closure < self.best) {
                self.best = closure;
            }
            return Ok(());
        }
        let mut child_excluded = excluded.to_vec();
        for c in start..self.n {
            if excluded[c] || Self::in_closure(&residuals[c]) {
                continue;
            }
            let free_after = (c + 1..self.n).filter(|&q| !excluded[q] && !Self::in_closure(&residuals[q])).count();
            if free_after + 1 < self.target - depth {
                break;
            }
            let child = self.reduce_by(residuals, c);
            let prune = (0..self.n).any(|q| child_excluded[q] && Self::in_closure(&child[q]));
            if !prune {
                let closed = (0..self.n).filter(|&q| Self::in_closure(&child[q])).count();
                let open = (c + 1..self.n).filter(|&q| !child_excluded[q] && !Self::in_closure(&child[q])).count();
                if closed + open >= self.best.len() {
                    self.dfs(depth + 1, c + 1, &child, &child_excluded)?;
                }
            }
            child_excluded[c] = true;
        }
        Ok(())
    }

    fn reduce_by(&self, residuals: &[Vec<u64>], c: usize) -> Vec<Vec<u64>> {
        let p = self.p;
        let pivot_row = &residuals[c];
        let piv = pivot_row.iter().position(|&x| x != 0).expect("independent point");
        let inv = inv_mod(pivot_row[piv], p);
        let scaled: Vec<u64> = pivot_row.iter().map(|&x| mul_mod(x, inv, p)).collect();
        residuals
            .iter()
            .map(|r| {
                if r[piv] == 0 {
                    return r.clone();
                }
                let f = r[piv];
                (0..self.cols).map(|j| sub_mod(r[j], mul_mod(f, scaled[j], p), p)).collect()
            })
            .collect()
    }
}
