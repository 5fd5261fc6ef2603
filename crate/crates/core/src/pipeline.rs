//! Separating hypersurfaces through all nodes but one, by direct solve or by
//! the projection and cone construction, and the aggregate report.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::conditions::{q_factoriality_verdict, Verdict};
use crate::error::{Error, Result};
use crate::exactalg::{clear_denominators, mod_rref, primitive, parse_rational, reduce_bigint, AffineSolution, Field, Matrix, Scalar, FILTER_PRIME};
use crate::forms::{evaluate_basis, monomial_basis, parse_form, Form};
use crate::incidence::{incidence_profile_with, partition_with, IncidenceProfile, PartitionCertificate, SearchBudget};
use crate::projgeom::{random_projection, ProjPoint, Projection};
use crate::Mode;

/// A form of degree `degree` vanishing on `zeros` with value 1 at `target`,
/// when one exists.
pub fn separating_form(zeros: &[ProjPoint], target: &ProjPoint, degree: i64) -> Result<Option<Form>> {
    let num_vars = target.num_vars();
    if let Some(q) = zeros.iter().find(|q| q.num_vars() != num_vars) {
        return Err(Error::dims(format!("point {q} does not have {num_vars} coordinates")));
    }
    if degree < 0 {
        return Ok(None);
    }
    let basis = monomial_basis(num_vars, degree as u32);
    let mut ints: Vec<Vec<BigInt>> = zeros.iter().map(|q| evaluate_basis(&basis, q.coords())).collect();
    ints.push(evaluate_basis(&basis, target.coords()));
    let reduced: Vec<Vec<u64>> = ints.iter().map(|r| r.iter().map(|x| reduce_bigint(x, FILTER_PRIME)).collect()).collect();
    let pivots = mod_rref(reduced, basis.len(), FILTER_PRIME).pivots;
    let cols: Vec<usize> = if pivots.len() == ints.len() { pivots } else { (0..basis.len()).collect() };
    let rows = ints.iter().map(|r| cols.iter().map(|&c| Field::Rational.from_bigint(&r[c])).collect()).collect();
    let m = Matrix::from_rows(Field::Rational, cols.len(), rows)?;
    let mut rhs = vec![Field::Rational.zero(); zeros.len()];
    rhs.push(Field::Rational.one());
    let AffineSolution::Solution(x) = m.solve_affine(&rhs)? else {
        return Ok(None);
    };
    let terms = cols.iter().zip(x).map(|(&c, v)| (basis[c].clone(), v));
    Ok(Some(Form::from_terms(num_vars, degree as u32, Field::Rational, terms)?))
}

/// The same form scaled to coprime integer coefficients.
fn primitive_form(f: &Form) -> Form {
    let (monos, coeffs): (Vec<_>, Vec<BigRational>) =
        f.terms().map(|(m, c)| (m.clone(), c.as_rational().expect("rational form").clone())).unzip();
    let mut ints = clear_denominators(&coeffs);
    primitive(&mut ints);
    let terms = monos.into_iter().zip(ints).map(|(m, c)| (m, Field::Rational.from_bigint(&c)));
    Form::from_terms(f.num_vars(), f.degree(), Field::Rational, terms).expect("same monomials")
}

/// Value of the witness at one node, as stored in a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub index: usize,
    #[serde(serialize_with = "ser_scalar")]
    pub value: Scalar,
}

fn ser_scalar<S: serde::Serializer>(v: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    DirectSolve,
    /// `W = F * G`: `F` from the oversized parts, `G` the cone over a plane curve.
    ConeComposite {
        projection: Projection,
        part_degrees: Vec<u32>,
        residual_degree: i64,
        f: Form,
        plane_curve: Form,
        g: Form,
    },
}

/// A form through every node except one, not through that one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCertificate {
    pub mode: Option<Mode>,
    pub degree: i64,
    pub nodes: Vec<ProjPoint>,
    pub point_index: usize,
    pub witness: Form,
    pub construction: Construction,
    /// Why the cone construction was abandoned for a direct solve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
    pub verification: Vec<PointCheck>,
}

fn checks(w: &Form, nodes: &[ProjPoint]) -> Result<Vec<PointCheck>> {
    nodes.iter().enumerate().map(|(index, p)| Ok(PointCheck { index, value: w.evaluate_at(p)? })).collect()
}

impl WitnessCertificate {
    pub fn point(&self) -> &ProjPoint {
        &self.nodes[self.point_index]
    }

    pub fn is_fallback(&self) -> bool {
        self.fallback.is_some()
    }

    /// Recomputes every stored value and the construction identities.
    pub fn verify(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Verification(m));
        if self.point_index >= self.nodes.len() {
            return bad(format!("point index {} out of range", self.point_index));
        }
        if i64::from(self.witness.degree()) != self.degree && !self.witness.is_zero() {
            return bad(format!("witness has degree {} instead of {}", self.witness.degree(), self.degree));
        }
        let fresh = checks(&self.witness, &self.nodes)?;
        if fresh != self.verification {
            return bad("stored evaluations do not match the witness".into());
        }
        for c in &fresh {
            if (c.index == self.point_index) == c.value.is_zero() {
                return bad(format!("witness misbehaves at node {}", c.index));
            }
        }
        if let Construction::ConeComposite { projection, f, plane_curve, g, .. } = &self.construction {
            if i64::from(f.degree() + g.degree()) != self.degree {
                return bad("deg F + deg G differs from the target degree".into());
            }
            if &projection.cone_pullback(plane_curve)? != g {
                return bad("G is not the cone over the stored plane curve".into());
            }
            if &f.try_mul(g)? != &self.witness {
                return bad("W differs from F * G".into());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Parses a certificate written by [`to_json`](Self::to_json) and verifies it.
    pub fn from_json(text: &str) -> Result<WitnessCertificate> {
        let raw: RawCertificate = serde_json::from_str(text).map_err(|e| Error::invalid(format!("certificate JSON: {e}")))?;
        let nv = raw.nodes.first().map(ProjPoint::num_vars).or(raw.mode.map(Mode::num_vars)).unwrap_or(4);
        let form = |s: &str, n: usize| parse_form(s, n);
        let construction = match raw.construction {
            RawConstruction::DirectSolve => Construction::DirectSolve,
            RawConstruction::ConeComposite { projection, part_degrees, residual_degree, f, plane_curve, g } => Construction::ConeComposite {
                projection,
                part_degrees,
                residual_degree,
                f: form(&f, nv)?,
                plane_curve: form(&plane_curve, 3)?,
                g: form(&g, nv)?,
            },
        };
        let verification = raw
            .verification
            .into_iter()
            .map(|c| Ok(PointCheck { index: c.index, value: Scalar::Rational(parse_rational(&c.value)?) }))
            .collect::<Result<Vec<_>>>()?;
        let cert = WitnessCertificate {
            mode: raw.mode,
            degree: raw.degree,
            witness: form(&raw.witness, nv)?,
            nodes: raw.nodes,
            point_index: raw.point_index,
            construction,
            fallback: raw.fallback,
            verification,
        };
        cert.verify()?;
        Ok(cert)
    }
}

#[derive(Deserialize)]
struct RawCertificate {
    mode: Option<Mode>,
    degree: i64,
    nodes: Vec<ProjPoint>,
    point_index: usize,
    witness: String,
    construction: RawConstruction,
    fallback: Option<String>,
    verification: Vec<RawCheck>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawConstruction {
    DirectSolve,
    ConeComposite { projection: Projection, part_degrees: Vec<u32>, residual_degree: i64, f: String, plane_curve: String, g: String },
}

#[derive(Deserialize)]
struct RawCheck {
    index: usize,
    value: String,
}

fn check_index(nodes: &[ProjPoint], p: usize) -> Result<()> {
    if p >= nodes.len() {
        return Err(Error::invalid(format!("point index {p} out of range for {} nodes", nodes.len())));
    }
    let n = nodes[0].num_vars();
    match nodes.iter().find(|q| q.num_vars() != n) {
        Some(q) => Err(Error::dims(format!("point {q} does not have {n} coordinates"))),
        None => Ok(()),
    }
}

/// Direct linear solve. `Ok(None)` means no form of this degree separates
/// node `p` from the others.
pub fn witness_direct(nodes: &[ProjPoint], p: usize, degree: i64) -> Result<Option<WitnessCertificate>> {
    check_index(nodes, p)?;
    let others: Vec<ProjPoint> = nodes.iter().enumerate().filter(|(i, _)| *i != p).map(|(_, q)| q.clone()).collect();
    let Some(witness) = separating_form(&others, &nodes[p], degree)? else {
        return Ok(None);
    };
    let verification = checks(&witness, nodes)?;
    let cert = WitnessCertificate {
        mode: None,
        degree,
        nodes: nodes.to_vec(),
        point_index: p,
        witness,
        construction: Construction::DirectSolve,
        fallback: None,
        verification,
    };
    cert.verify()?;
    Ok(Some(cert))
}

/// Projection and partition shared by the cone witnesses of all nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConePlan {
    pub mode: Mode,
    pub projection: Projection,
    pub images: Vec<ProjPoint>,
    pub partition: PartitionCertificate,
}

pub fn cone_plan(nodes: &[ProjPoint], mode: Mode, seed: u64) -> Result<ConePlan> {
    let projection = random_projection(mode.num_vars() - 1, nodes, seed)?;
    cone_plan_with(nodes, mode, projection, &SearchBudget::default())
}

/// Plan with a given projection, which must be injective on the nodes.
pub fn cone_plan_with(nodes: &[ProjPoint], mode: Mode, projection: Projection, budget: &SearchBudget) -> Result<ConePlan> {
    if projection.source_dim() + 1 != mode.num_vars() {
        return Err(Error::dims(format!("projection from P^{} in a mode living in P^{}", projection.source_dim(), mode.num_vars() - 1)));
    }
    let projected = projection.project(nodes)?;
    if !projected.injective {
        return Err(Error::invalid("projection identifies two nodes"));
    }
    let partition = partition_with(&projected.images, mode, budget)?;
    Ok(ConePlan { mode, projection, images: projected.images, partition })
}

/// Cone construction with a seeded random projection, falling back to the
/// direct solve when the ledger or a sub-solve fails.
pub fn witness_cone(nodes: &[ProjPoint], p: usize, mode: Mode, seed: u64) -> Result<WitnessCertificate> {
    check_index(nodes, p)?;
    let plan = cone_plan(nodes, mode, seed)?;
    witness_cone_with(nodes, p, &plan)
}

pub fn witness_cone_with(nodes: &[ProjPoint], p: usize, plan: &ConePlan) -> Result<WitnessCertificate> {
    check_index(nodes, p)?;
    let mode = plan.mode;
    let degree = mode.critical_degree();
    let reason = match cone_attempt(nodes, p, plan) {
        Ok(cert) => return Ok(cert),
        Err(Error::NoWitness(reason)) => reason,
        Err(e) => return Err(e),
    };
    match witness_direct(nodes, p, degree)? {
        Some(mut cert) => {
            cert.mode = Some(mode);
            cert.fallback = Some(reason);
            Ok(cert)
        }
        None => Err(Error::NoWitness(format!("{reason}; no form of degree {degree} separates node {p} either"))),
    }
}

fn cone_attempt(nodes: &[ProjPoint], p: usize, plan: &ConePlan) -> Result<WitnessCertificate> {
    let fail = |m: String| Err(Error::NoWitness(m));
    let mode = plan.mode;
    let part = &plan.partition;
    if !part.ledger_passes {
        let names: Vec<&str> = part.ledger.iter().filter(|r| r.status != crate::incidence::Status::Pass).map(|r| r.name.as_str()).collect();
        return fail(format!("ledger does not pass: {}", names.join(", ")));
    }
    let nv = mode.num_vars();
    let mut f = Form::constant(nv, Field::Rational.one());
    for (i, pt) in part.parts.iter().enumerate() {
        let zeros: Vec<ProjPoint> = pt.indices.iter().filter(|&&q| q != p).map(|&q| nodes[q].clone()).collect();
        let deg = mode.part_degree(pt.degree as usize) as i64;
        match separating_form(&zeros, &nodes[p], deg)? {
            Some(h) => f = f.try_mul(&primitive_form(&h))?,
            None => return fail(format!("no form of degree {deg} through part {i} misses node {p}")),
        }
    }
    let d = part.residual_degree;
    let zeros: Vec<ProjPoint> = part.residual.iter().filter(|&&q| q != p).map(|&q| plan.images[q].clone()).collect();
    if zeros.contains(&plan.images[p]) {
        return fail(format!("node {p} projects onto another residual node"));
    }
    let Some(plane_curve) = separating_form(&zeros, &plan.images[p], d)? else {
        return fail(format!("no plane curve of degree {d} through the residual misses the image of node {p}"));
    };
    let plane_curve = primitive_form(&plane_curve);
    let g = plan.projection.cone_pullback(&plane_curve)?;
    let witness = f.try_mul(&g)?;
    let verification = checks(&witness, nodes)?;
    let cert = WitnessCertificate {
        mode: Some(mode),
        degree: mode.critical_degree(),
        nodes: nodes.to_vec(),
        point_index: p,
        witness,
        construction: Construction::ConeComposite {
            projection: plan.projection.clone(),
            part_degrees: part.parts.iter().map(|x| x.degree).collect(),
            residual_degree: d,
            f,
            plane_curve,
            g,
        },
        fallback: None,
        verification,
    };
    match cert.verify() {
        Ok(()) => Ok(cert),
        Err(e) => fail(format!("assembled witness failed verification: {e}")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConeStatus {
    Constructed,
    Fallback { reason: String },
    Failed { reason: String },
    NotAttempted { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeStatus {
    pub index: usize,
    pub point: ProjPoint,
    pub separated: bool,
    pub cone: ConeStatus,
}

/// Everything known about a node set in one record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullReport {
    pub mode: Mode,
    pub seed: u64,
    pub verdict: Verdict,
    pub projection: Option<Projection>,
    pub profile: Option<IncidenceProfile>,
    pub partition: Option<PartitionCertificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub nodes: Vec<NodeStatus>,
    pub defect: usize,
    pub rank: usize,
    pub unseparated: usize,
    /// `defect = #nodes - rank`, and `defect = 0` exactly when every node is separated.
    pub consistent: bool,
    pub q_factorial: bool,
}

pub fn full_report(nodes: &[ProjPoint], mode: Mode, seed: u64) -> Result<FullReport> {
    full_report_with(nodes, mode, seed, &SearchBudget::default())
}

pub fn full_report_with(nodes: &[ProjPoint], mode: Mode, seed: u64, budget: &SearchBudget) -> Result<FullReport> {
    let verdict = q_factoriality_verdict(mode, nodes)?;
    let mut notes = Vec::new();
    let plan = if nodes.is_empty() {
        None
    } else {
        let plan = random_projection(mode.num_vars() - 1, nodes, seed).and_then(|pr| cone_plan_with(nodes, mode, pr, budget));
        match plan {
            Ok(plan) => Some(plan),
            Err(e) => {
                notes.push(format!("cone construction unavailable: {e}"));
                None
            }
        }
    };
    let profile = match &plan {
        Some(plan) => match incidence_profile_with(&plan.images, 1..=mode.degree_cap() as u32, budget) {
            Ok(p) => Some(p),
            Err(e) => {
                notes.push(format!("incidence profile unavailable: {e}"));
                None
            }
        },
        None => None,
    };
    let mut statuses = Vec::with_capacity(nodes.len());
    for (i, pt) in nodes.iter().enumerate() {
        let separated = verdict.report.separators[i].is_some();
        let cone = match &plan {
            None => ConeStatus::NotAttempted { reason: "no projection plan".into() },
            Some(plan) => match witness_cone_with(nodes, i, plan) {
                Ok(c) => match c.fallback {
                    None => ConeStatus::Constructed,
                    Some(reason) => ConeStatus::Fallback { reason },
                },
                Err(Error::NoWitness(reason)) => ConeStatus::Failed { reason },
                Err(e) => return Err(e),
            },
        };
        statuses.push(NodeStatus { index: i, point: pt.clone(), separated, cone });
    }
    let report = &verdict.report;
    let unseparated = report.unseparated().len();
    let consistent = report.defect + report.rank == nodes.len() && (report.defect == 0) == (unseparated == 0);
    Ok(FullReport {
        mode,
        seed,
        defect: report.defect,
        rank: report.rank,
        unseparated,
        consistent,
        q_factorial: verdict.q_factorial,
        projection: plan.as_ref().map(|p| p.projection.clone()),
        partition: plan.map(|p| p.partition),
        profile,
        notes,
        nodes: statuses,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::cayley_bacharach_points;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(c).unwrap()
    }

    #[test]
    fn simplex_degree_one() {
        let nodes: Vec<ProjPoint> = (0..4).map(|i| pt(&(0..4).map(|j| i64::from(i == j)).collect::<Vec<_>>())).collect();
        let c = witness_direct(&nodes, 0, 1).unwrap().unwrap();
        assert_eq!(c.witness, parse_form("x0", 4).unwrap());
        let back = WitnessCertificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn cayley_bacharach_has_no_cubic_separator() {
        let pts = cayley_bacharach_points();
        for p in 0..9 {
            assert!(witness_direct(&pts, p, 3).unwrap().is_none());
            assert!(witness_direct(&pts, p, 4).unwrap().is_some());
        }
    }

    #[test]
    fn cone_witness_for_general_points() {
        let nodes = vec![pt(&[1, 0, 0, 0]), pt(&[0, 1, 0, 0]), pt(&[0, 0, 1, 0]), pt(&[0, 0, 0, 1]), pt(&[1, 2, 3, 4])];
        let mode = Mode::DoubleSolid { r: 3 };
        for p in 0..5 {
            let c = witness_cone(&nodes, p, mode, 11).unwrap();
            assert!(!c.is_fallback());
            assert_eq!(c.witness.degree(), 5);
            let Construction::ConeComposite { f, .. } = &c.construction else { panic!() };
            assert_eq!(f.degree(), 0);
            WitnessCertificate::from_json(&c.to_json()).unwrap();
        }
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let nodes = vec![pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])];
        let c = witness_direct(&nodes, 1, 1).unwrap().unwrap();
        let json = c.to_json().replace("\"x1\"", "\"x0\"");
        assert!(WitnessCertificate::from_json(&json).is_err());
    }

    #[test]
    fn empty_node_set_is_q_factorial() {
        let r = full_report(&[], Mode::DoubleSolid { r: 3 }, 0).unwrap();
        assert!(r.q_factorial);
        assert!(r.consistent);
    }
}
