//! Incidence of plane point sets with curves: maxima, the `∇`/`★` property,
//! Bese-type conditions and the partition certificate.

mod partition;
mod search;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::conditions::ser_rational;
use crate::error::{Error, Result};
use crate::exactalg::format_rational;
use crate::projgeom::ProjPoint;

pub use partition::{partition, partition_with, Part, PartitionCertificate};
pub use search::{max_points_on_curve, max_points_on_curve_with, CurveMax, SearchBudget, BUDGET_ENV};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unchecked,
}

/// Overall outcome of a ledger: `Conditional` when nothing failed but some
/// rows could not be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Conditional,
}

impl Outcome {
    pub fn of<'a, I: IntoIterator<Item = &'a LedgerRow>>(rows: I) -> Outcome {
        let mut out = Outcome::Pass;
        for r in rows {
            match r.status {
                Status::Fail => return Outcome::Fail,
                Status::Unchecked => out = Outcome::Conditional,
                Status::Pass => {}
            }
        }
        out
    }
}

/// One named inequality `lhs relation rhs` with the status it was given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub name: String,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    pub relation: Relation,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub(crate) fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

impl LedgerRow {
    pub fn check(name: impl Into<String>, lhs: BigRational, relation: Relation, rhs: BigRational) -> LedgerRow {
        let status = if relation.holds(&lhs, &rhs) { Status::Pass } else { Status::Fail };
        LedgerRow { name: name.into(), lhs, relation, rhs, status, note: None }
    }

    pub fn unchecked(name: impl Into<String>, lhs: BigRational, relation: Relation, rhs: BigRational, note: String) -> LedgerRow {
        LedgerRow { name: name.into(), lhs, relation, rhs, status: Status::Unchecked, note: Some(note) }
    }

    fn with_note(mut self, note: impl Into<String>) -> LedgerRow {
        self.note = Some(note.into());
        self
    }

    /// Status recomputed from the stored values. Unchecked rows stay unchecked.
    pub fn recheck(&self) -> Status {
        match self.status {
            Status::Unchecked => Status::Unchecked,
            _ if self.relation.holds(&self.lhs, &self.rhs) => Status::Pass,
            _ => Status::Fail,
        }
    }

    pub fn consistent(&self) -> bool {
        self.recheck() == self.status
    }
}

impl fmt::Display for LedgerRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Unchecked => "unchecked",
        };
        write!(f, "{}: {} {} {} [{status}]", self.name, format_rational(&self.lhs), self.relation.symbol(), format_rational(&self.rhs))?;
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

/// Maximum incidence with curves of each degree in a range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceProfile {
    pub num_points: usize,
    pub entries: Vec<CurveMax>,
}

impl IncidenceProfile {
    pub fn max_on_curve(&self, k: u32) -> Option<usize> {
        self.entries.iter().find(|e| e.degree == k).map(|e| e.count)
    }
}

pub fn incidence_profile(pts: &[ProjPoint], degrees: std::ops::RangeInclusive<u32>) -> Result<IncidenceProfile> {
    incidence_profile_with(pts, degrees, &SearchBudget::default())
}

pub fn incidence_profile_with(pts: &[ProjPoint], degrees: std::ops::RangeInclusive<u32>, budget: &SearchBudget) -> Result<IncidenceProfile> {
    let entries = degrees.map(|k| max_points_on_curve_with(pts, k, budget)).collect::<Result<Vec<_>>>()?;
    Ok(IncidenceProfile { num_points: pts.len(), entries })
}

/// One degree of the `∇`/`★` check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NablaRow {
    pub degree: u32,
    pub bound: usize,
    /// `None` when the check is vacuous (at most `bound` points in total).
    pub max_on_curve: Option<usize>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NablaReport {
    pub multiplier: usize,
    pub rows: Vec<NablaRow>,
    pub first_failure: Option<u32>,
    pub outcome: Outcome,
}

impl NablaReport {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// For each `i <= k_max`: at most `i * multiplier` points on any curve of
/// degree `i`. Degrees beyond the search budget are reported unchecked.
pub fn check_property_nabla(pts: &[ProjPoint], multiplier: usize, k_max: u32) -> Result<NablaReport> {
    check_property_nabla_with(pts, multiplier, k_max, &SearchBudget::default())
}

pub fn check_property_nabla_with(pts: &[ProjPoint], multiplier: usize, k_max: u32, budget: &SearchBudget) -> Result<NablaReport> {
    let mut rows = Vec::new();
    for i in 1..=k_max {
        let bound = i as usize * multiplier;
        let row = if pts.len() <= bound {
            if let Some(p) = pts.iter().find(|p| p.num_vars() != 3) {
                return Err(Error::dims(format!("point {p} is not in P^2")));
            }
            NablaRow { degree: i, bound, max_on_curve: None, status: Status::Pass }
        } else {
            match max_points_on_curve_with(pts, i, budget) {
                Ok(m) => {
                    let status = if m.count <= bound { Status::Pass } else { Status::Fail };
                    NablaRow { degree: i, bound, max_on_curve: Some(m.count), status }
                }
                Err(Error::BudgetExceeded { .. }) => NablaRow { degree: i, bound, max_on_curve: None, status: Status::Unchecked },
                Err(e) => return Err(e),
            }
        };
        rows.push(row);
    }
    let first_failure = rows.iter().find(|r| r.status == Status::Fail).map(|r| r.degree);
    let outcome = if first_failure.is_some() {
        Outcome::Fail
    } else if rows.iter().any(|r| r.status == Status::Unchecked) {
        Outcome::Conditional
    } else {
        Outcome::Pass
    };
    Ok(NablaReport { multiplier, rows, first_failure, outcome })
}

/// The Calabi–Yau double solid preset (`r = 4`): at most 7 points on a line and 14 on a conic.
pub fn check_cy_double_solid(pts: &[ProjPoint]) -> Result<NablaReport> {
    check_property_nabla(pts, 7, 2)
}

/// The quintic preset (`n = 5`): at most 5 points on a line and 10 on a conic.
pub fn check_cy_quintic(pts: &[ProjPoint]) -> Result<NablaReport> {
    check_property_nabla(pts, 5, 2)
}

/// Bese-type conditions for plane points and degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeseLedger {
    pub degree: u32,
    pub num_points: usize,
    pub theorem_size: LedgerRow,
    pub corollary_size: LedgerRow,
    pub curve_rows: Vec<LedgerRow>,
    /// `s <= (d^2+9d+10)/6` plus the curve rows: the system through the points is free.
    pub theorem_form: Outcome,
    /// `|S| <= (d^2+9d+16)/6` plus the curve rows: every point is separated from the rest.
    pub corollary_form: Outcome,
}

impl BeseLedger {
    pub fn rows(&self) -> impl Iterator<Item = &LedgerRow> {
        [&self.theorem_size, &self.corollary_size].into_iter().chain(self.curve_rows.iter())
    }
}

pub fn bese_conditions(pts: &[ProjPoint], d: u32) -> Result<BeseLedger> {
    bese_conditions_with(pts, d, &SearchBudget::default())
}

pub fn bese_conditions_with(pts: &[ProjPoint], d: u32, budget: &SearchBudget) -> Result<BeseLedger> {
    if d < 3 {
        return Err(Error::invalid(format!("Bese conditions need d >= 3, got {d}")));
    }
    if let Some(p) = pts.iter().find(|p| p.num_vars() != 3) {
        return Err(Error::dims(format!("point {p} is not in P^2")));
    }
    let s = int(pts.len());
    let dd = i64::from(d);
    let six = int(6);
    let theorem_size = LedgerRow::check("size (theorem form)", s.clone(), Relation::Le, int(dd * dd + 9 * dd + 10) / six.clone());
    let corollary_size = LedgerRow::check("size (corollary form)", s, Relation::Le, int(dd * dd + 9 * dd + 16) / six);
    let curve_rows = curve_rows(pts, i64::from(d), budget)?;
    let theorem_form = Outcome::of(std::iter::once(&theorem_size).chain(&curve_rows));
    let corollary_form = Outcome::of(std::iter::once(&corollary_size).chain(&curve_rows));
    Ok(BeseLedger { degree: d, num_points: pts.len(), theorem_size, corollary_size, curve_rows, theorem_form, corollary_form })
}

/// Rows `max on a degree-k curve <= k(d+3-k) - 2` for `1 <= k <= (d+3)/2`.
pub(crate) fn curve_rows(pts: &[ProjPoint], d: i64, budget: &SearchBudget) -> Result<Vec<LedgerRow>> {
    let mut rows = Vec::new();
    let mut k = 1i64;
    while 2 * k <= d + 3 {
        let bound = k * (d + 3 - k) - 2;
        let name = format!("points on a degree-{k} curve");
        let row = if pts.len() as i64 <= bound {
            LedgerRow::check(name, int(pts.len()), Relation::Le, int(bound)).with_note("at most the total number of points")
        } else {
            match max_points_on_curve_with(pts, k as u32, budget) {
                Ok(m) => LedgerRow::check(name, int(m.count), Relation::Le, int(bound)),
                Err(Error::BudgetExceeded { what, partial }) => {
                    let lower = partial.unwrap_or(0);
                    LedgerRow::unchecked(name, int(lower), Relation::Le, int(bound), format!("budget exceeded in {what}; lower bound only"))
                }
                Err(e) => return Err(e),
            }
        };
        rows.push(row);
        k += 1;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[[i64; 3]]) -> Vec<ProjPoint> {
        c.iter().map(|v| ProjPoint::from_i64(v).unwrap()).collect()
    }

    fn conic(m: i64) -> Vec<[i64; 3]> {
        (1..=m).map(|t| [1, t, t * t]).collect()
    }

    #[test]
    fn six_on_a_line_break_nabla_one() {
        let line: Vec<[i64; 3]> = (0..6).map(|t| [1, t, 0]).collect();
        let r = check_property_nabla(&pts(&line), 5, 2).unwrap();
        assert_eq!(r.first_failure, Some(1));
        assert_eq!(r.rows[0].max_on_curve, Some(6));
    }

    #[test]
    fn small_sets_are_vacuous() {
        let r = check_property_nabla(&pts(&conic(5)), 5, 3).unwrap();
        assert!(r.holds());
        assert!(r.rows.iter().all(|row| row.max_on_curve.is_none()));
    }

    #[test]
    fn eleven_on_a_conic() {
        let r = check_property_nabla(&pts(&conic(11)), 5, 3).unwrap();
        assert_eq!(r.rows[0].status, Status::Pass);
        assert_eq!(r.first_failure, Some(2));
    }

    #[test]
    fn bese_examples() {
        let seven = pts(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [1, -1, 2], [2, 1, -3]]);
        let l = bese_conditions(&seven, 3).unwrap();
        assert_eq!(l.theorem_form, Outcome::Pass);
        assert_eq!(l.curve_rows.iter().map(|r| r.rhs.clone()).collect::<Vec<_>>(), vec![int(3), int(6), int(7)]);

        let mut eight = seven.clone();
        eight.push(ProjPoint::from_i64(&[3, 1, 7]).unwrap());
        assert_eq!(bese_conditions(&eight, 3).unwrap().theorem_size.status, Status::Fail);

        let line: Vec<[i64; 3]> = (0..6).map(|t| [1, t, 0]).collect();
        let l = bese_conditions(&pts(&line), 5).unwrap();
        assert_eq!(l.curve_rows[0].rhs, int(5));
        assert_eq!(l.curve_rows[0].status, Status::Fail);
        assert!(bese_conditions(&seven, 2).is_err());
    }

    #[test]
    fn ledger_rows_recheck() {
        let row = LedgerRow::check("x", int(3), Relation::Lt, int(2));
        assert_eq!(row.status, Status::Fail);
        assert!(row.consistent());
        assert_eq!(row.to_string(), "x: 3 < 2 [FAIL]");
    }
}
