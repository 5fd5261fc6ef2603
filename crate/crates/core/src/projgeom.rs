//! Projective points with normalized integer coordinates, linear
//! projections to P² and cones over plane curves.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{clear_denominators, primitive, Field, Matrix, Scalar};
use crate::forms::Form;

/// A point of P^m: integer coordinates with gcd 1 and positive first nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Vec<BigInt>);

impl ProjPoint {
    /// Normalizes an integer vector; fails on the zero vector.
    pub fn new(mut coords: Vec<BigInt>) -> Result<ProjPoint> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::invalid("the zero vector is not a projective point"));
        }
        primitive(&mut coords);
        Ok(ProjPoint(coords))
    }

    pub fn from_i64(coords: &[i64]) -> Result<ProjPoint> {
        ProjPoint::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clears denominators, then normalizes.
    pub fn from_rationals(coords: &[BigRational]) -> Result<ProjPoint> {
        ProjPoint::new(clear_denominators(coords))
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    /// Number of homogeneous coordinates.
    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    /// Dimension m of the ambient P^m.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn to_scalars(&self, field: Field) -> Vec<Scalar> {
        self.0.iter().map(|x| field.from_bigint(x)).collect()
    }

    /// Embeds into a larger projective space by zero padding at the front.
    pub fn lift_front(&self, extra: usize) -> ProjPoint {
        let mut c = vec![BigInt::zero(); extra];
        c.extend(self.0.iter().cloned());
        ProjPoint(c)
    }

    /// Coordinates that fit in `i64`, when all do.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coord {
    Small(i64),
    Big(String),
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Coord> =
            self.0.iter().map(|x| x.to_i64().map_or_else(|| Coord::Big(x.to_string()), Coord::Small)).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Coord>::deserialize(d)?;
        let coords = raw
            .into_iter()
            .map(|c| match c {
                Coord::Small(v) => Ok(BigInt::from(v)),
                Coord::Big(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ProjPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Center of a projection to P²: a point of P³ or a line of P⁴ given by two points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    Point(ProjPoint),
    Line(ProjPoint, ProjPoint),
}

impl Center {
    fn spanning_points(&self) -> Vec<&ProjPoint> {
        match self {
            Center::Point(p) => vec![p],
            Center::Line(a, b) => vec![a, b],
        }
    }
}

/// A linear projection P^m ⇢ P² given by three independent linear forms
/// vanishing on the center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    source_dim: usize,
    center: Center,
    coefficients: [ProjPoint; 3],
}

/// Images of a point set under a projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projected {
    pub images: Vec<ProjPoint>,
    pub injective: bool,
}

impl Projection {
    /// Projection from `center`; the three forms are a primitive integer basis
    /// of the linear forms vanishing on it.
    pub fn from_center(center: Center) -> Result<Projection> {
        let pts = center.spanning_points();
        let n = pts[0].num_vars();
        let source_dim = n - 1;
        let expected = match &center {
            Center::Point(_) => 3,
            Center::Line(..) => 4,
        };
        if source_dim != expected || pts.iter().any(|p| p.num_vars() != n) {
            return Err(Error::dims(format!("center in P^{source_dim} but expected P^{expected}")));
        }
        let rows: Vec<Vec<Scalar>> = pts.iter().map(|p| p.to_scalars(Field::Rational)).collect();
        let m = Matrix::from_rows(Field::Rational, n, rows)?;
        let kernel = m.kernel_basis();
        if kernel.len() != 3 {
            return Err(Error::invalid("the two points spanning the center line coincide"));
        }
        let mut coefficients: Vec<ProjPoint> = kernel
            .into_iter()
            .map(|v| {
                let q: Vec<BigRational> = v.iter().map(|s| s.as_rational().expect("rational").clone()).collect();
                ProjPoint::from_rationals(&q).expect("kernel vectors are nonzero")
            })
            .collect();
        let c2 = coefficients.pop().unwrap();
        let c1 = coefficients.pop().unwrap();
        let c0 = coefficients.pop().unwrap();
        Ok(Projection { source_dim, center, coefficients: [c0, c1, c2] })
    }

    /// Projection from the last coordinate point of P³, or the line spanned by
    /// the last two coordinate points of P⁴: `(x0, x1, x2)`.
    pub fn coordinate(source_dim: usize) -> Result<Projection> {
        let unit = |i: usize| {
            let mut c = vec![0i64; source_dim + 1];
            c[i] = 1;
            ProjPoint::from_i64(&c).expect("unit vector")
        };
        match source_dim {
            3 => Projection::from_center(Center::Point(unit(3))),
            4 => Projection::from_center(Center::Line(unit(3), unit(4))),
            _ => Err(Error::dims(format!("projections are from P^3 or P^4, not P^{source_dim}"))),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn center(&self) -> &Center {
        &self.center
    }

    /// Coefficient vectors of the three linear forms.
    pub fn coefficients(&self) -> &[ProjPoint; 3] {
        &self.coefficients
    }

    /// The three linear forms as rational `Form`s.
    pub fn forms(&self) -> Vec<Form> {
        self.coefficients
            .iter()
            .map(|c| {
                let s = c.to_scalars(Field::Rational);
                Form::linear(Field::Rational, &s).expect("linear form")
            })
            .collect()
    }

    /// Image of one point, or `None` when it lies on the center.
    pub fn image(&self, pt: &ProjPoint) -> Option<ProjPoint> {
        let v: Vec<BigInt> = self
            .coefficients
            .iter()
            .map(|c| c.coords().iter().zip(pt.coords()).map(|(a, b)| a * b).sum::<BigInt>())
            .collect();
        ProjPoint::new(v).ok()
    }

    pub fn project(&self, pts: &[ProjPoint]) -> Result<Projected> {
        let mut images = Vec::with_capacity(pts.len());
        for (index, p) in pts.iter().enumerate() {
            if p.num_vars() != self.source_dim + 1 {
                return Err(Error::dims(format!("point {p} is not in P^{}", self.source_dim)));
            }
            images.push(self.image(p).ok_or(Error::PointOnCenter { index })?);
        }
        let mut sorted = images.clone();
        sorted.sort();
        let injective = sorted.windows(2).all(|w| w[0] != w[1]);
        Ok(Projected { images, injective })
    }

    /// Pulls a plane curve back to the cone over it with vertex the center.
    pub fn cone_pullback(&self, curve: &Form) -> Result<Form> {
        if curve.num_vars() != 3 {
            return Err(Error::dims(format!("plane curves have 3 variables, got {}", curve.num_vars())));
        }
        let mut forms = self.forms();
        if !curve.field().is_rational() {
            let Field::Prime(p) = curve.field() else { unreachable!() };
            forms = forms.iter().map(|f| f.reduce_mod(p)).collect::<Result<_>>()?;
        }
        curve.substitute(&forms)
    }
}

/// Default number of sampling attempts in [`random_projection`].
pub const DEFAULT_ATTEMPTS: usize = 64;

/// Initial coordinate bound for sampled centers; doubles after every attempt.
pub const INITIAL_CENTER_BOUND: i64 = 1000;

/// Seeded rejection sampling of a projection whose center avoids `pts` and
/// which separates all of them.
pub fn random_projection(source_dim: usize, pts: &[ProjPoint], seed: u64) -> Result<Projection> {
    random_projection_with(source_dim, pts, seed, DEFAULT_ATTEMPTS)
}

pub fn random_projection_with(source_dim: usize, pts: &[ProjPoint], seed: u64, attempts: usize) -> Result<Projection> {
    if !(3..=4).contains(&source_dim) {
        return Err(Error::dims(format!("projections are from P^3 or P^4, not P^{source_dim}")));
    }
    if pts.is_empty() {
        return Err(Error::invalid("random projection needs at least one point"));
    }
    if let Some(p) = pts.iter().find(|p| p.num_vars() != source_dim + 1) {
        return Err(Error::dims(format!("point {p} is not in P^{source_dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..attempts {
        let bound = INITIAL_CENTER_BOUND << attempt.min(40);
        let sample = |rng: &mut ChaCha8Rng| -> Option<ProjPoint> {
            let c: Vec<BigInt> = (0..=source_dim).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
            ProjPoint::new(c).ok()
        };
        let center = match source_dim {
            3 => sample(&mut rng).map(Center::Point),
            _ => match (sample(&mut rng), sample(&mut rng)) {
                (Some(a), Some(b)) => Some(Center::Line(a, b)),
                _ => None,
            },
        };
        let Some(center) = center else { continue };
        let Ok(proj) = Projection::from_center(center) else { continue };
        if let Ok(out) = proj.project(pts) {
            if out.injective {
                return Ok(proj);
            }
        }
    }
    Err(Error::ExhaustedAttempts { attempts })
}

/// Number of points of P^{num_vars-1}(F_p), or `None` on overflow.
pub fn fp_point_count(num_vars: usize, p: u64) -> Option<u64> {
    let mut total: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..num_vars {
        total = total.checked_add(pow)?;
        pow = pow.checked_mul(p)?;
    }
    Some(total)
}

/// Visits every point of P^{num_vars-1}(F_p) once, in the normalized form whose
/// first nonzero coordinate is 1. The visitor returns `false` to stop early.
pub fn for_each_fp_point(num_vars: usize, p: u64, mut visit: impl FnMut(&[u64]) -> bool) {
    let mut x = vec![0u64; num_vars];
    for lead in 0..num_vars {
        x.iter_mut().for_each(|v| *v = 0);
        x[lead] = 1;
        loop {
            if !visit(&x) {
                return;
            }
            let mut i = num_vars;
            let mut overflow = true;
            while i > lead + 1 {
                i -= 1;
                x[i] += 1;
                if x[i] < p {
                    overflow = false;
                    break;
                }
                x[i] = 0;
            }
            if overflow {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(c).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(pt(&[0, -2, 4]), pt(&[0, 1, -2]));
        assert_eq!(pt(&[0, -2, 4]).coords(), &[0.into(), 1.into(), (-2).into()]);
        assert!(ProjPoint::from_i64(&[0, 0]).is_err());
    }

    #[test]
    fn coordinate_projection() {
        let proj = Projection::coordinate(3).unwrap();
        assert_eq!(proj.forms(), vec![parse_form("x0", 4).unwrap(), parse_form("x1", 4).unwrap(), parse_form("x2", 4).unwrap()]);
        let out = proj.project(&[pt(&[1, 2, 3, 7])]).unwrap();
        assert_eq!(out.images, vec![pt(&[1, 2, 3])]);
    }

    #[test]
    fn collinear_with_center_collapse() {
        let proj = Projection::coordinate(3).unwrap();
        let out = proj.project(&[pt(&[1, 2, 3, 7]), pt(&[1, 2, 3, -5])]).unwrap();
        assert!(!out.injective);
        assert_eq!(proj.project(&[pt(&[1, 0, 0, 0]), pt(&[0, 0, 0, 1])]), Err(Error::PointOnCenter { index: 1 }));
    }

    #[test]
    fn cone_over_a_line_is_a_plane() {
        let proj = Projection::coordinate(3).unwrap();
        let g = proj.cone_pullback(&parse_form("x0", 3).unwrap()).unwrap();
        assert_eq!(g, parse_form("x0", 4).unwrap());
    }

    #[test]
    fn random_projection_is_deterministic_and_injective() {
        let simplex: Vec<ProjPoint> =
            (0..4).map(|i| pt(&(0..4).map(|j| i64::from(i == j)).collect::<Vec<_>>())).collect();
        let a = random_projection(3, &simplex, 7).unwrap();
        let b = random_projection(3, &simplex, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.project(&simplex).unwrap().injective);
        assert!(random_projection(3, &simplex[..1], 1).is_ok());
    }

    #[test]
    fn line_center_in_p4() {
        let pts = vec![pt(&[1, 2, 3, 4, 5]), pt(&[1, -1, 0, 2, 1]), pt(&[0, 0, 1, 1, 1])];
        let proj = random_projection(4, &pts, 3).unwrap();
        let out = proj.project(&pts).unwrap();
        assert!(out.injective);
        for f in proj.forms() {
            for p in proj.center.spanning_points() {
                assert!(f.evaluate_at(p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn fp_points_are_enumerated_once() {
        for (n, p) in [(1usize, 5u64), (2, 3), (3, 5), (4, 2)] {
            let mut seen = std::collections::BTreeSet::new();
            for_each_fp_point(n, p, |x| {
                assert!(seen.insert(x.to_vec()));
                true
            });
            assert_eq!(seen.len() as u64, fp_point_count(n, p).unwrap());
        }
    }

    #[test]
    fn serde_round_trip() {
        let p = pt(&[3, -4, 12]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[3,-4,12]");
        assert_eq!(serde_json::from_str::<ProjPoint>(&s).unwrap(), p);
    }
}
