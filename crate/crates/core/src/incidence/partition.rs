//! Splitting projected nodes into oversized on-a-curve parts and a residual.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use super::{check_property_nabla_with, curve_rows, int, max_points_on_curve_with, LedgerRow, NablaReport, Relation, SearchBudget, Status};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::projgeom::ProjPoint;
use crate::Mode;

/// Points (by input index) lying on one curve of degree `degree`, more than
/// `degree * multiplier` of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    pub degree: u32,
    pub indices: Vec<usize>,
    pub witness: Form,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionCertificate {
    pub mode: Mode,
    pub multiplier: usize,
    pub degree_cap: u32,
    pub parts: Vec<Part>,
    pub residual: Vec<usize>,
    /// `c_j`: number of parts of each degree.
    pub counts: BTreeMap<u32, usize>,
    pub weighted_sum: u64,
    /// Degree left for the residual curve after the parts take their share.
    pub residual_degree: i64,
    pub residual_nabla: NablaReport,
    pub ledger: Vec<LedgerRow>,
    pub ledger_passes: bool,
}

pub fn partition(projected: &[ProjPoint], mode: Mode) -> Result<PartitionCertificate> {
    partition_with(projected, mode, &SearchBudget::default())
}

pub fn partition_with(projected: &[ProjPoint], mode: Mode, budget: &SearchBudget) -> Result<PartitionCertificate> {
    if let Some(p) = projected.iter().find(|p| p.num_vars() != 3) {
        return Err(Error::dims(format!("point {p} is not in P^2")));
    }
    let m = mode.multiplier();
    let cap = mode.degree_cap() as u32;
    let mut remaining: Vec<usize> = (0..projected.len()).collect();
    let mut parts = Vec::new();
    let mut finished = false;
    for _ in 0..=projected.len() {
        let sub: Vec<ProjPoint> = remaining.iter().map(|&i| projected[i].clone()).collect();
        let mut found = None;
        for j in 1..=cap {
            if sub.len() <= j as usize * m {
                continue;
            }
            let best = max_points_on_curve_with(&sub, j, budget)?;
            if best.count > j as usize * m {
                found = Some(best);
                break;
            }
        }
        let Some(best) = found else {
            finished = true;
            break;
        };
        let indices: Vec<usize> = best.incident.iter().map(|&i| remaining[i]).collect();
        remaining.retain(|i| !indices.contains(i));
        parts.push(Part { degree: best.degree, indices, witness: best.witness });
    }
    if !finished {
        return Err(Error::ExtractionLoop(projected.len()));
    }
    let residual_pts: Vec<ProjPoint> = remaining.iter().map(|&i| projected[i].clone()).collect();
    let residual_nabla = check_property_nabla_with(&residual_pts, m, cap, budget)?;

    let mut counts = BTreeMap::new();
    for p in &parts {
        *counts.entry(p.degree).or_insert(0) += 1;
    }
    let weighted_sum: u64 = parts.iter().map(|p| u64::from(p.degree)).sum();
    let used: i64 = parts.iter().map(|p| mode.part_degree(p.degree as usize) as i64).sum();
    let residual_degree = mode.critical_degree() - used;
    let ledger = ledger(mode, &parts, &residual_pts, residual_degree, budget)?;
    let ledger_passes = ledger.iter().all(|r| r.status == Status::Pass);
    Ok(PartitionCertificate {
        mode,
        multiplier: m,
        degree_cap: cap,
        parts,
        residual: remaining,
        counts,
        weighted_sum,
        residual_degree,
        residual_nabla,
        ledger,
        ledger_passes,
    })
}

fn ledger(mode: Mode, parts: &[Part], residual: &[ProjPoint], d: i64, budget: &SearchBudget) -> Result<Vec<LedgerRow>> {
    let (sum_rhs, sum_name, min_d) = match mode {
        Mode::DoubleSolid { r } => (BigRational::new(i64::from(r).into(), 3.into()), "sum of j*c_j < r/3", 6),
        Mode::Hypersurface { n } => (BigRational::new((i64::from(n) - 1).into(), 4.into()), "sum of j*c_j < (n-1)/4", 5),
    };
    let weighted: u64 = parts.iter().map(|p| u64::from(p.degree)).sum();
    let mut rows = vec![LedgerRow::check(sum_name, int(weighted), Relation::Lt, sum_rhs)];
    let dd = d;
    if let Some(k) = parts.iter().map(|p| p.degree).min() {
        rows.push(LedgerRow::check("smallest part degree >= 2", int(k), Relation::Ge, int(2)));
        rows.push(LedgerRow::check(format!("residual degree d >= {min_d}"), int(d), Relation::Ge, int(min_d)));
        rows.push(LedgerRow::check("residual size <= (d^2+9d+10)/6", int(residual.len()), Relation::Le, int(dd * dd + 9 * dd + 10) / int(6)));
    } else {
        rows.push(LedgerRow::check("residual degree d >= 3", int(d), Relation::Ge, int(3)));
        rows.push(LedgerRow::check("residual size <= (d^2+9d+16)/6", int(residual.len()), Relation::Le, int(dd * dd + 9 * dd + 16) / int(6)));
    }
    if d >= 1 {
        rows.extend(curve_rows(residual, d, budget)?);
    }
    Ok(rows)
}

impl PartitionCertificate {
    /// Rechecks the structural invariants against the projected points:
    /// disjoint cover, oversized parts on their witness curves, residual
    /// property, and every ledger row agreeing with its stored values.
    pub fn check(&self, projected: &[ProjPoint]) -> Result<()> {
        let mut seen = vec![false; projected.len()];
        for i in self.parts.iter().flat_map(|p| p.indices.iter()).chain(self.residual.iter()) {
            if *i >= projected.len() || std::mem::replace(&mut seen[*i], true) {
                return Err(Error::Verification(format!("index {i} repeated or out of range")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Verification("parts and residual do not cover the points".into()));
        }
        for p in &self.parts {
            if p.indices.len() <= p.degree as usize * self.multiplier {
                return Err(Error::Verification(format!("part of degree {} is not oversized", p.degree)));
            }
            for &i in &p.indices {
                if !p.witness.evaluate_at(&projected[i])?.is_zero() {
                    return Err(Error::Verification(format!("point {i} is not on its part's curve")));
                }
            }
        }
        if self.residual_nabla.first_failure.is_some() {
            return Err(Error::Verification("residual fails the incidence property".into()));
        }
        if let Some(row) = self.ledger.iter().find(|r| !r.consistent()) {
            return Err(Error::Verification(format!("ledger row '{}' does not recompute", row.name)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic_plus(extra: &[[i64; 3]], m: i64) -> Vec<ProjPoint> {
        let mut c: Vec<[i64; 3]> = (1..=m).map(|t| [1, t, t * t]).collect();
        c.extend_from_slice(extra);
        c.iter().map(|v| ProjPoint::from_i64(v).unwrap()).collect()
    }

    #[test]
    fn general_points_give_no_parts() {
        let pts = conic_plus(&[], 4);
        let c = partition(&pts, Mode::DoubleSolid { r: 3 }).unwrap();
        assert!(c.parts.is_empty());
        assert_eq!(c.residual, vec![0, 1, 2, 3]);
        assert_eq!(c.residual_degree, 5);
        assert!(c.ledger_passes);
        c.check(&pts).unwrap();
    }

    #[test]
    fn conic_part_is_extracted() {
        let pts = conic_plus(&[[2, 3, 7], [5, -1, 4], [3, 8, -2], [1, 7, 3]], 11);
        let c = partition(&pts, Mode::DoubleSolid { r: 3 }).unwrap();
        assert_eq!(c.parts.len(), 1);
        assert_eq!(c.parts[0].degree, 2);
        assert_eq!(c.parts[0].indices, (0..11).collect::<Vec<_>>());
        assert_eq!(c.residual, vec![11, 12, 13, 14]);
        assert_eq!(c.residual_degree, 2);
        assert!(!c.ledger_passes);
        c.check(&pts).unwrap();
    }

    #[test]
    fn hypersurface_ledger_fails_honestly() {
        let pts = conic_plus(&[], 11);
        let c = partition(&pts, Mode::Hypersurface { n: 6 }).unwrap();
        assert_eq!(c.counts.get(&2), Some(&1));
        let row = &c.ledger[0];
        assert_eq!(row.lhs, int(2));
        assert_eq!(row.rhs, BigRational::new(5.into(), 4.into()));
        assert_eq!(row.status, Status::Fail);
    }
}
