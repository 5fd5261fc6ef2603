//! Example families of non-Q-factorial threefolds, node scans over F_p,
//! node-count bounds and the Varchenko lattice count.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::Field;
use crate::forms::{parse_form, power_table, Form, ModForm};
use crate::projgeom::{for_each_fp_point, fp_point_count, ProjPoint};
use crate::Mode;

/// Which node-count bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    DoubleSolid(u32),
    Hypersurface(u32),
    CyDoubleSolid,
    CyQuintic,
}

impl From<Mode> for BoundKind {
    fn from(m: Mode) -> BoundKind {
        match m {
            Mode::DoubleSolid { r } => BoundKind::DoubleSolid(r),
            Mode::Hypersurface { n } => BoundKind::Hypersurface(n),
        }
    }
}

/// `(2r-1)r/3`, `(n-1)²/4`, or the Calabi–Yau bounds 25 and 14.
pub fn theorem_bound(kind: BoundKind) -> BigRational {
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    match kind {
        BoundKind::DoubleSolid(r) => {
            let r = r as i64;
            q((2 * r - 1) * r, 3)
        }
        BoundKind::Hypersurface(n) => {
            let n = n as i64;
            q((n - 1) * (n - 1), 4)
        }
        BoundKind::CyDoubleSolid => q(25, 1),
        BoundKind::CyQuintic => q(14, 1),
    }
}

/// `A_i(j)`: the number of `a ∈ [1, j-1]^i` with `(i-2)j/2 + 1 < Σa ≤ ij/2`.
/// Both bounds are compared exactly, as `2Σ > (i-2)j + 2` and `2Σ ≤ ij`.
pub fn varchenko_bound(i: u32, j: u32) -> Result<u64> {
    if i < 2 || j < 2 {
        return Err(Error::invalid(format!("A_i(j) needs i, j ≥ 2 (got i = {i}, j = {j})")));
    }
    let (iu, ju) = (i as u64, j as u64);
    let max_sum = (iu * (ju - 1)) as usize;
    let mut counts = vec![0u64; max_sum + 1];
    counts[0] = 1;
    for t in 0..i as usize {
        let mut next = vec![0u64; max_sum + 1];
        let top = t * (j as usize - 1);
        for (s, &c) in counts.iter().enumerate().take(top + 1) {
            if c == 0 {
                continue;
            }
            for a in 1..j as usize {
                next[s + a] = next[s + a]
                    .checked_add(c)
                    .ok_or_else(|| Error::invalid("A_i(j) overflows 64 bits"))?;
            }
        }
        counts = next;
    }
    let lower = (iu - 2) * ju + 2;
    let upper = iu * ju;
    let mut total = 0u64;
    for (s, &c) in counts.iter().enumerate() {
        let twice = 2 * s as u64;
        if twice > lower && twice <= upper {
            total = total.checked_add(c).ok_or_else(|| Error::invalid("A_i(j) overflows 64 bits"))?;
        }
    }
    Ok(total)
}

/// Recipe of a family instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Double solid `u² = g_r² + h_1 f_{2r-1}` over P³.
    ExampleI { r: u32 },
    /// Hypersurface `x0·g_{n-1} + x1·f_{n-1}` in P⁴.
    ExampleII { n: u32 },
    /// Double cover of P⁴ branched over `Σ f_i g_i²`, `deg f_i + 2 deg g_i = 8`.
    Fourfold,
}

/// An instance of one of the families, with its named ingredients and the
/// equation scanned for singular points (the branch surface for double solids).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub kind: FamilyKind,
    #[serde(serialize_with = "ser_named")]
    pub components: Vec<(String, Form)>,
    pub equation: Form,
}

fn ser_named<S: serde::Serializer>(v: &[(String, Form)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(v.len()))?;
    for (k, f) in v {
        m.serialize_entry(k, &f.to_string())?;
    }
    m.end()
}

impl FamilyInstance {
    /// Dimension of the projective space the equation lives in.
    pub fn ambient_dim(&self) -> usize {
        self.equation.num_vars() - 1
    }
}

fn expect_form(name: &str, f: &Form, num_vars: usize, degree: u32) -> Result<()> {
    if f.num_vars() != num_vars {
        return Err(Error::dims(format!("{name} has {} variables, expected {num_vars}", f.num_vars())));
    }
    if f.degree() != degree || f.is_zero() {
        return Err(Error::DegreeMismatch(format!("{name} has degree {}, expected {degree}", f.degree())));
    }
    Ok(())
}

/// `u² = g² + h·f` with `deg g = r`, `deg h = 1`, `deg f = 2r - 1` in 4 variables.
pub fn make_example_i(r: u32, g: Form, h: Form, f: Form) -> Result<FamilyInstance> {
    if r == 0 {
        return Err(Error::invalid("r must be positive"));
    }
    expect_form("g", &g, 4, r)?;
    expect_form("h", &h, 4, 1)?;
    expect_form("f", &f, 4, 2 * r - 1)?;
    let equation = g.pow(2).try_add(&h.try_mul(&f)?)?;
    Ok(FamilyInstance {
        kind: FamilyKind::ExampleI { r },
        components: vec![("g".into(), g), ("h".into(), h), ("f".into(), f)],
        equation,
    })
}

/// `x0·g + x1·f` with `deg g = deg f = n - 1` in 5 variables.
pub fn make_example_ii(n: u32, g: Form, f: Form) -> Result<FamilyInstance> {
    if n < 2 {
        return Err(Error::invalid("n must be at least 2"));
    }
    expect_form("g", &g, 5, n - 1)?;
    expect_form("f", &f, 5, n - 1)?;
    let field = g.field();
    let equation = Form::var(5, 0, field).try_mul(&g)?.try_add(&Form::var(5, 1, field).try_mul(&f)?)?;
    Ok(FamilyInstance { kind: FamilyKind::ExampleII { n }, components: vec![("g".into(), g), ("f".into(), f)], equation })
}

/// `Σ f_i g_i²` over three pairs of non-constant forms in 5 variables with
/// `deg f_i + 2 deg g_i = 8`.
pub fn make_fourfold(pairs: &[(Form, Form)]) -> Result<FamilyInstance> {
    if pairs.len() != 3 {
        return Err(Error::invalid(format!("expected 3 pairs (f_i, g_i), got {}", pairs.len())));
    }
    let mut components = Vec::new();
    let mut equation: Option<Form> = None;
    for (k, (f, g)) in pairs.iter().enumerate() {
        if f.num_vars() != 5 || g.num_vars() != 5 {
            return Err(Error::dims("fourfold ingredients live in 5 variables"));
        }
        if f.degree() == 0 || g.degree() == 0 || f.degree() + 2 * g.degree() != 8 {
            return Err(Error::DegreeMismatch(format!(
                "pair {}: deg f = {}, deg g = {}; need non-constant forms with deg f + 2 deg g = 8",
                k + 1,
                f.degree(),
                g.degree()
            )));
        }
        let term = f.try_mul(&g.pow(2))?;
        equation = Some(match equation {
            None => term,
            Some(e) => e.try_add(&term)?,
        });
        components.push((format!("f{}", k + 1), f.clone()));
        components.push((format!("g{}", k + 1), g.clone()));
    }
    Ok(FamilyInstance { kind: FamilyKind::Fourfold, components, equation: equation.expect("three pairs") })
}

/// Split Example II instance with `n = 4`: `g` and `f` are products of three
/// lines in `(x2, x3, x4)` meeting in nine distinct points, with correction
/// terms `x0²x4` and `x1²x2` that keep the line `x2 = x3 = x4 = 0` smooth.
/// Over F_7 it has exactly nine singular points, all nodes.
pub fn split_example_ii() -> FamilyInstance {
    let f = |s: &str| parse_form(s, 5).expect("fixture");
    make_example_ii(
        4,
        f("z*t*(z + t + w) + x^2*w"),
        f("(2*z + 2*t + w)*(2*z + t - w)*(2*z + t - 2*w) + y^2*z"),
    )
    .expect("fixture degrees")
}

/// Split Example I instance with `r = 2`: six nodes at `g = h = f = 0` over F_11.
pub fn split_example_i() -> FamilyInstance {
    let f = |s: &str| parse_form(s, 4).expect("fixture");
    make_example_i(2, f("x*y + t^2"), f("t"), f("z*(x + y + z)*(x - y + 2*z) + t^3")).expect("fixture degrees")
}

/// The nine points where the lines `u0, u1, u0 + u1 + u2` meet the lines
/// `2u0 + 2u1 + u2, 2u0 + u1 - u2, 2u0 + u1 - 2u2` in P². Any cubic through
/// eight of them passes through the ninth.
pub fn cayley_bacharach_points() -> Vec<ProjPoint> {
    [[0, 1, -2], [0, 1, 1], [0, 2, 1], [1, 0, -2], [1, 0, 2], [1, 0, 1], [1, -1, 0], [2, -3, 1], [3, -4, 1]]
        .iter()
        .map(|c| ProjPoint::from_i64(c).expect("nonzero"))
        .collect()
}

/// Classification of a singular point by the rank of its Hessian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Node,
    Degenerate { hessian_rank: usize },
}

/// F_p-rational singular points of a family's equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeList {
    pub prime: u64,
    pub points: Vec<ProjPoint>,
    pub classes: Vec<PointClass>,
    pub nodes: usize,
    pub degenerate: usize,
    /// Only F_p-rational points are found by the scan.
    pub rational_points_only: bool,
}

/// Largest number of projective points a node scan may visit.
pub const SCAN_BUDGET: u64 = 1_100_000;

/// Scans P^m(F_p) for points where the equation and all its partial
/// derivatives vanish, and classifies them by Hessian rank over F_p.
pub fn find_nodes(instance: &FamilyInstance, p: u64) -> Result<NodeList> {
    find_singular_points(&instance.equation, p, SCAN_BUDGET)
}

pub fn find_singular_points(equation: &Form, p: u64, budget: u64) -> Result<NodeList> {
    let field = Field::prime(p)?;
    let n = equation.num_vars();
    let total = fp_point_count(n, p).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { what: format!("scan of {total} points over F_{p}"), partial: None });
    }
    let reduced = match equation.field() {
        Field::Rational => equation.reduce_mod(p)?,
        f if f == field => equation.clone(),
        other => return Err(Error::FieldMismatch(field.to_string(), other.to_string())),
    };
    let eq = ModForm::new(&reduced, p)?;
    let grad: Vec<ModForm> = reduced.gradient().iter().map(|g| ModForm::new(g, p)).collect::<Result<_>>()?;
    let mut found: Vec<Vec<u64>> = Vec::new();
    for_each_fp_point(n, p, |x| {
        let pw = power_table(x, eq.degree(), p);
        if eq.eval_with_powers(&pw) == 0 && grad.iter().all(|g| g.eval_with_powers(&pw) == 0) {
            found.push(x.to_vec());
        }
        true
    });
    let mut points = Vec::with_capacity(found.len());
    let mut classes = Vec::with_capacity(found.len());
    for x in found {
        let pt = ProjPoint::new(x.iter().map(|&v| BigInt::from(v)).collect())?;
        let rank = reduced.hessian_rank_at(&pt)?;
        classes.push(if rank == n - 1 { PointClass::Node } else { PointClass::Degenerate { hessian_rank: rank } });
        points.push(pt);
    }
    let nodes = classes.iter().filter(|c| **c == PointClass::Node).count();
    Ok(NodeList { prime: p, degenerate: points.len() - nodes, points, classes, nodes, rational_points_only: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(theorem_bound(BoundKind::DoubleSolid(3)), BigRational::from_integer(5.into()));
        assert_eq!(theorem_bound(BoundKind::Hypersurface(5)), BigRational::from_integer(4.into()));
        assert_eq!(theorem_bound(BoundKind::CyDoubleSolid), BigRational::from_integer(25.into()));
        assert_eq!(theorem_bound(BoundKind::CyQuintic), BigRational::from_integer(14.into()));
        assert_eq!(theorem_bound(BoundKind::DoubleSolid(4)), BigRational::new(28.into(), 3.into()));
    }

    #[test]
    fn varchenko_small() {
        assert_eq!(varchenko_bound(3, 2).unwrap(), 1);
        assert_eq!(varchenko_bound(4, 4).unwrap(), 45);
        assert!(varchenko_bound(1, 4).is_err());
    }

    #[test]
    fn smooth_quadric() {
        let inst = make_example_ii(2, parse_form("z", 5).unwrap(), parse_form("t", 5).unwrap()).unwrap();
        assert_eq!(inst.equation, parse_form("x0*x2 + x1*x3", 5).unwrap());
        // In P⁴ this quadric is a cone with one node, matching (n - 1)² = 1.
        let nodes = find_nodes(&inst, 7).unwrap();
        assert_eq!(nodes.points, vec![ProjPoint::from_i64(&[0, 0, 0, 0, 1]).unwrap()]);
        assert_eq!(nodes.nodes, 1);
        let quadric_surface = parse_form("x0*x2 + x1*x3", 4).unwrap();
        assert!(find_singular_points(&quadric_surface, 7, SCAN_BUDGET).unwrap().points.is_empty());
    }

    #[test]
    fn degree_mismatch() {
        let r = make_example_ii(4, parse_form("z^2", 5).unwrap(), parse_form("t^3", 5).unwrap());
        assert!(matches!(r, Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn split_example_i_has_six_nodes() {
        for p in [11, 13] {
            let nodes = find_nodes(&split_example_i(), p).unwrap();
            assert_eq!((nodes.points.len(), nodes.nodes), (6, 6));
        }
    }

    #[test]
    fn fourfold_recipe() {
        let f = |s: &str| parse_form(s, 5).unwrap();
        let pairs = vec![(f("x^2"), f("y^3")), (f("z^4"), f("t^2")), (f("w^6"), f("x"))];
        let inst = make_fourfold(&pairs).unwrap();
        assert_eq!(inst.equation.degree(), 8);
        let bad = vec![(f("x^2"), f("y^2")), (f("z^4"), f("t^2")), (f("w^6"), f("x"))];
        assert!(make_fourfold(&bad).is_err());
    }
}
