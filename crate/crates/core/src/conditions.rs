//! Evaluation matrices, defects, separating forms and verdicts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{bareiss, mod_rref, reduce_bigint, Field, IntEchelon, Matrix, Scalar, FILTER_PRIME};
use crate::families::{theorem_bound, BoundKind};
use crate::forms::{evaluate_basis, monomial_basis, power_table, Form, ModForm, Monomial};
use crate::projgeom::{for_each_fp_point, fp_point_count, ProjPoint};
use crate::Mode;

fn check_points(pts: &[ProjPoint], num_vars: usize) -> Result<()> {
    match pts.iter().find(|p| p.num_vars() != num_vars) {
        Some(p) => Err(Error::dims(format!("point {p} does not have {num_vars} coordinates"))),
        None => Ok(()),
    }
}

fn basis_for(num_vars: usize, degree: i64) -> Vec<Monomial> {
    if degree < 0 {
        Vec::new()
    } else {
        monomial_basis(num_vars, degree as u32)
    }
}

fn integer_rows(pts: &[ProjPoint], basis: &[Monomial]) -> Vec<Vec<BigInt>> {
    pts.iter().map(|p| evaluate_basis(basis, p.coords())).collect()
}

/// Rows are points, columns the monomials of degree `degree` (largest first).
/// A negative degree gives a matrix with no columns.
pub fn evaluation_matrix(pts: &[ProjPoint], degree: i64, num_vars: usize) -> Result<Matrix> {
    evaluation_matrix_in(Field::Rational, pts, degree, num_vars)
}

pub fn evaluation_matrix_in(field: Field, pts: &[ProjPoint], degree: i64, num_vars: usize) -> Result<Matrix> {
    check_points(pts, num_vars)?;
    let basis = basis_for(num_vars, degree);
    let rows = integer_rows(pts, &basis).into_iter().map(|r| r.iter().map(|x| field.from_bigint(x)).collect()).collect();
    Matrix::from_rows(field, basis.len(), rows)
}

/// Rank and defect of a point set in one degree, with certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub field: Field,
    pub degree: i64,
    pub num_vars: usize,
    pub num_points: usize,
    pub num_monomials: usize,
    pub rank: usize,
    pub defect: usize,
    pub independent: bool,
    /// For each point, a form equal to 1 at it and vanishing at every other
    /// point, when one exists.
    pub separators: Vec<Option<Form>>,
    /// Basis of the left kernel of the evaluation matrix, each with leading entry 1.
    #[serde(serialize_with = "ser_vectors")]
    pub dependencies: Vec<Vec<Scalar>>,
}

fn ser_vectors<S: serde::Serializer>(v: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    strings.serialize(s)
}

impl DefectReport {
    /// Indices of points without a separating form. These are exactly the
    /// points in the support of some dependency.
    pub fn unseparated(&self) -> Vec<usize> {
        (0..self.num_points).filter(|&i| self.separators[i].is_none()).collect()
    }

    pub fn dependency(&self) -> Option<&[Scalar]> {
        self.dependencies.first().map(Vec::as_slice)
    }

    /// Re-checks every separator and dependency against the point set.
    pub fn verify(&self, pts: &[ProjPoint]) -> Result<()> {
        if pts.len() != self.num_points {
            return Err(Error::Verification(format!("{} points for a report on {}", pts.len(), self.num_points)));
        }
        for (i, sep) in self.separators.iter().enumerate() {
            let Some(f) = sep else { continue };
            for (j, p) in pts.iter().enumerate() {
                let v = f.evaluate_at(p)?;
                if (i == j) == v.is_zero() {
                    return Err(Error::Verification(format!("separator {i} misbehaves at point {j}")));
                }
            }
        }
        if !self.dependencies.is_empty() {
            let m = evaluation_matrix_in(self.field, pts, self.degree, self.num_vars)?;
            for y in &self.dependencies {
                if !m.left_mul_vec(y)?.iter().all(Scalar::is_zero) {
                    return Err(Error::Verification("dependency is not in the left kernel".into()));
                }
            }
        }
        if self.defect != self.dependencies.len() || self.rank + self.defect != self.num_points {
            return Err(Error::Verification("rank, defect and dependency count disagree".into()));
        }
        Ok(())
    }
}

/// Defect over Q.
pub fn defect(pts: &[ProjPoint], degree: i64, num_vars: usize) -> Result<DefectReport> {
    defect_in(Field::Rational, pts, degree, num_vars)
}

/// Defect of `pts` in degree `degree` over `field`, with a separator for every
/// point that admits one and a basis of the linear relations among the
/// point conditions.
pub fn defect_in(field: Field, pts: &[ProjPoint], degree: i64, num_vars: usize) -> Result<DefectReport> {
    check_points(pts, num_vars)?;
    let basis = basis_for(num_vars, degree);
    let n = pts.len();
    let ints = integer_rows(pts, &basis);
    let (cols, solutions) = match field {
        Field::Rational => rational_separators(&ints, basis.len()),
        Field::Prime(p) => prime_separators(&ints, basis.len(), p),
    };
    let rank = cols.len();
    let separators: Vec<Option<Form>> = solutions
        .into_iter()
        .map(|sol| {
            sol.map(|x| {
                let terms = cols.iter().zip(x).map(|(&c, v)| (basis[c].clone(), v));
                Form::from_terms(num_vars, degree as u32, field, terms).expect("basis monomials")
            })
        })
        .collect();
    let m = Matrix::from_rows(
        field,
        basis.len(),
        ints.iter().map(|r| r.iter().map(|x| field.from_bigint(x)).collect()).collect(),
    )?;
    let dependencies = if rank == n { Vec::new() } else { m.transpose().kernel_basis() };
    let report = DefectReport {
        field,
        degree,
        num_vars,
        num_points: n,
        num_monomials: basis.len(),
        rank,
        defect: n - rank,
        independent: rank == n,
        separators,
        dependencies,
    };
    report.verify(pts)?;
    Ok(report)
}

/// Column basis of the integer matrix, and for each row index `i` the solution
/// on those columns of `E x = e_i` when it exists.
fn rational_separators(ints: &[Vec<BigInt>], ncols: usize) -> (Vec<usize>, Vec<Option<Vec<Scalar>>>) {
    let n = ints.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let reduced: Vec<Vec<u64>> = ints.iter().map(|r| r.iter().map(|x| reduce_bigint(x, FILTER_PRIME)).collect()).collect();
    let modular = mod_rref(reduced, ncols, FILTER_PRIME).pivots;
    let cols = if modular.len() == n.min(ncols) {
        modular
    } else {
        bareiss(ints.to_vec(), ncols).pivots
    };
    let r = cols.len();
    let aug: Vec<Vec<BigInt>> = ints
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<BigInt> = cols.iter().map(|&c| row[c].clone()).collect();
            v.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let ech = bareiss(aug, r + n);
    debug_assert!(ech.pivots[..r].iter().enumerate().all(|(k, &c)| k == c));
    let top = IntEchelon { rows: ech.rows[..r].to_vec(), pivots: ech.pivots[..r].to_vec() };
    let sols = (0..n)
        .map(|i| {
            if ech.rows[r..].iter().any(|row| !row[r + i].is_zero()) {
                return None;
            }
            let rhs: Vec<BigInt> = ech.rows[..r].iter().map(|row| row[r + i].clone()).collect();
            Some(top.back_substitute(r, &[], Some(&rhs)).into_iter().map(Scalar::Rational).collect())
        })
        .collect();
    (cols, sols)
}

fn prime_separators(ints: &[Vec<BigInt>], ncols: usize, p: u64) -> (Vec<usize>, Vec<Option<Vec<Scalar>>>) {
    let n = ints.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let reduced: Vec<Vec<u64>> = ints.iter().map(|r| r.iter().map(|x| reduce_bigint(x, p)).collect()).collect();
    let cols = mod_rref(reduced.clone(), ncols, p).pivots;
    let r = cols.len();
    let aug: Vec<Vec<u64>> = reduced
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<u64> = cols.iter().map(|&c| row[c]).collect();
            v.extend((0..n).map(|j| u64::from(i == j)));
            v
        })
        .collect();
    let ech = mod_rref(aug, r + n, p);
    let sols = (0..n)
        .map(|i| {
            if ech.rows[r..].iter().any(|row| row[r + i] != 0) {
                return None;
            }
            Some(ech.rows[..r].iter().map(|row| Scalar::Prime { residue: row[r + i], modulus: p }).collect())
        })
        .collect();
    (cols, sols)
}

/// Q-factoriality verdict for a node set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub mode: Mode,
    pub num_nodes: usize,
    #[serde(serialize_with = "ser_rational")]
    pub bound: BigRational,
    pub bound_ok: bool,
    /// The Calabi–Yau bound (25 for `r = 4`, 14 for `n = 5`), when it applies.
    pub cy_bound: Option<u32>,
    pub cy_bound_ok: Option<bool>,
    pub degree: i64,
    pub report: DefectReport,
    pub q_factorial: bool,
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exactalg::format_rational(q))
}

/// Bound check plus defect at the critical degree. The conclusion is drawn
/// from the defect alone; the bound is reported next to it.
pub fn q_factoriality_verdict(mode: Mode, nodes: &[ProjPoint]) -> Result<Verdict> {
    check_points(nodes, mode.num_vars())?;
    let bound = theorem_bound(BoundKind::from(mode));
    let count = BigRational::from_integer(nodes.len().into());
    let cy = match mode {
        Mode::DoubleSolid { r: 4 } => Some(theorem_bound(BoundKind::CyDoubleSolid)),
        Mode::Hypersurface { n: 5 } => Some(theorem_bound(BoundKind::CyQuintic)),
        _ => None,
    };
    let degree = mode.critical_degree();
    let report = defect(nodes, degree, mode.num_vars())?;
    Ok(Verdict {
        mode,
        num_nodes: nodes.len(),
        bound_ok: count <= bound,
        bound,
        cy_bound: cy.as_ref().map(|b| b.to_integer().try_into().expect("small bound")),
        cy_bound_ok: cy.map(|b| count <= b),
        degree,
        q_factorial: report.defect == 0,
        report,
    })
}

/// Largest number of projective points a base-locus scan may visit per prime.
pub const PROBE_BUDGET: u64 = 1_100_000;

/// Outcome of a heuristic base-locus dimension probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub primes: [u64; 2],
    pub counts: [u64; 2],
    /// `None` when both counts are zero (empty base locus over both fields).
    pub estimate: Option<u32>,
    pub empty: bool,
    pub heuristic: bool,
}

/// Counts common zeros of `generators` (inside the zero set of `ambient`, when
/// given) over two prime fields and estimates the dimension from the growth
/// rate: `round(log(N2/N1) / log(p2/p1))`. Counts that do not grow give 0.
pub fn base_locus_dim_probe(
    generators: &[Form],
    num_vars: usize,
    ambient: Option<&Form>,
    primes: [u64; 2],
) -> Result<ProbeReport> {
    probe_with_budget(generators, num_vars, ambient, primes, PROBE_BUDGET)
}

pub fn probe_with_budget(
    generators: &[Form],
    num_vars: usize,
    ambient: Option<&Form>,
    primes: [u64; 2],
    budget: u64,
) -> Result<ProbeReport> {
    if let Some(f) = generators.iter().chain(ambient).find(|f| f.num_vars() != num_vars) {
        return Err(Error::dims(format!("form {f} is not in {num_vars} variables")));
    }
    let mut counts = [0u64; 2];
    for (slot, &p) in primes.iter().enumerate() {
        Field::prime(p)?;
        let total = fp_point_count(num_vars, p).unwrap_or(u64::MAX);
        if total > budget {
            return Err(Error::BudgetExceeded { what: format!("scan of {total} points over F_{p}"), partial: None });
        }
        let compiled: Vec<ModForm> =
            generators.iter().chain(ambient).map(|f| ModForm::new(f, p)).collect::<Result<_>>()?;
        let max_deg = compiled.iter().map(ModForm::degree).max().unwrap_or(0);
        let mut n = 0u64;
        for_each_fp_point(num_vars, p, |x| {
            let pw = power_table(x, max_deg, p);
            if compiled.iter().all(|f| f.eval_with_powers(&pw) == 0) {
                n += 1;
            }
            true
        });
        counts[slot] = n;
    }
    let (lo, hi) = if primes[0] <= primes[1] { (0, 1) } else { (1, 0) };
    let empty = counts == [0, 0];
    let estimate = if empty {
        None
    } else if counts[lo] == 0 || counts[hi] <= counts[lo] || primes[lo] == primes[hi] {
        Some(0)
    } else {
        let ratio = (counts[hi] as f64 / counts[lo] as f64).ln() / (primes[hi] as f64 / primes[lo] as f64).ln();
        Some(ratio.round().max(0.0) as u32)
    };
    Ok(ProbeReport { primes, counts, estimate, empty, heuristic: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(c).unwrap()
    }

    fn simplex(n: usize) -> Vec<ProjPoint> {
        (0..n).map(|i| pt(&(0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>())).collect()
    }

    #[test]
    fn evaluation_matrix_examples() {
        let m = evaluation_matrix(&[pt(&[1, 0, 0])], 1, 3).unwrap();
        assert_eq!(m, Matrix::from_i64_rows(Field::Rational, &[vec![1, 0, 0]]).unwrap());
        let col = evaluation_matrix(&[pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 0])], 1, 3).unwrap();
        assert_eq!(col.rank(), 2);
        assert_eq!(evaluation_matrix(&simplex(3), 1, 3).unwrap().rank(), 3);
    }

    #[test]
    fn simplex_separators() {
        let r = defect(&simplex(3), 1, 3).unwrap();
        assert_eq!(r.defect, 0);
        assert_eq!(r.separators[0].as_ref().unwrap(), &parse_form("x0", 3).unwrap());
    }

    #[test]
    fn collinear_triple_dependency() {
        let r = defect(&[pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 0])], 1, 3).unwrap();
        assert_eq!((r.rank, r.defect), (2, 1));
        assert_eq!(r.unseparated(), vec![0, 1, 2]);
        let q = |v: i64| Field::Rational.from_i64(v);
        assert_eq!(r.dependency().unwrap(), &[q(1), q(1), q(-1)]);
    }

    #[test]
    fn negative_degree_has_no_columns() {
        let r = defect(&simplex(4), -1, 4).unwrap();
        assert_eq!((r.num_monomials, r.rank, r.defect), (0, 0, 4));
    }

    #[test]
    fn prime_field_agrees_on_simplex() {
        let r = defect_in(Field::prime(7).unwrap(), &simplex(4), 2, 4).unwrap();
        assert_eq!(r.defect, 0);
        assert!(r.separators.iter().all(Option::is_some));
    }

    #[test]
    fn verdict_bounds() {
        let v = q_factoriality_verdict(Mode::DoubleSolid { r: 3 }, &simplex(4)[..3]).unwrap();
        assert_eq!(v.bound, BigRational::from_integer(5.into()));
        assert!(v.bound_ok && v.q_factorial && v.cy_bound.is_none());
        assert_eq!(v.degree, 5);
        assert!(matches!(q_factoriality_verdict(Mode::Hypersurface { n: 4 }, &simplex(4)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn probe_examples() {
        let f = |s: &str| parse_form(s, 4).unwrap();
        let pt_probe = base_locus_dim_probe(&[f("x0"), f("x1"), f("x2")], 4, None, [5, 7]).unwrap();
        assert_eq!((pt_probe.counts, pt_probe.estimate), ([1, 1], Some(0)));
        let plane = base_locus_dim_probe(&[f("x0")], 4, None, [5, 7]).unwrap();
        assert_eq!((plane.counts, plane.estimate), ([31, 57], Some(2)));
        let mixed = base_locus_dim_probe(&[f("x0*x1"), f("x0*x2")], 4, None, [7, 11]).unwrap();
        assert_eq!(mixed.counts, [57 + 8 - 1, 133 + 12 - 1]);
        assert_eq!(mixed.estimate, Some(2));
        let none = base_locus_dim_probe(&[f("x0"), f("x1"), f("x2"), f("x3")], 4, None, [5, 7]).unwrap();
        assert!(none.empty && none.estimate.is_none());
        assert!(matches!(
            probe_with_budget(&[f("x0")], 4, None, [5, 7], 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
