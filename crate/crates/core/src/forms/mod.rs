//! Sparse homogeneous polynomials.
//!
//! Variables are positional, `x0 … x{m}`. On input the letters
//! `x, y, z, t, w, u` are accepted as aliases for `x0 … x5`.

mod parser;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Scalar};
use crate::projgeom::ProjPoint;

pub use parser::{parse_form, parse_form_in, VARIABLE_LETTERS};

/// Exponent vector. Ordered by total degree, then lexicographically, so the
/// largest monomial of a given degree is `x0^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Monomial {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Monomial {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `∂/∂x_i`, as (multiplier, monomial); `None` when the variable is absent.
    pub fn derivative(&self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.0[i];
        if e == 0 {
            return None;
        }
        let mut m = self.0.clone();
        m[i] -= 1;
        Some((e, Monomial(m)))
    }

    /// Value at an integer point.
    pub fn eval_int(&self, pt: &[BigInt]) -> BigInt {
        self.0.iter().zip(pt).fold(BigInt::one(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of exact degree `degree` in `num_vars` variables, largest first
/// (`x0^d, x0^{d-1}x1, …`).
pub fn monomial_basis(num_vars: usize, degree: u32) -> Vec<Monomial> {
    fn go(prefix: &mut Vec<u32>, left: usize, deg: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(deg);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=deg).rev() {
            prefix.push(e);
            go(prefix, left - 1, deg - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if num_vars == 0 {
        return out;
    }
    go(&mut Vec::with_capacity(num_vars), num_vars, degree, &mut out);
    out
}

/// Values of every monomial of `basis` at an integer point, sharing one power table.
pub fn evaluate_basis(basis: &[Monomial], pt: &[BigInt]) -> Vec<BigInt> {
    let top = basis.iter().flat_map(|m| m.0.iter().copied()).max().unwrap_or(0) as usize;
    let powers: Vec<Vec<BigInt>> = pt
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(top + 1);
            row.push(BigInt::one());
            for k in 1..=top {
                let next = &row[k - 1] * x;
                row.push(next);
            }
            row
        })
        .collect();
    basis
        .iter()
        .map(|m| {
            m.0.iter().enumerate().fold(BigInt::one(), |acc, (i, &e)| {
                if e == 0 {
                    acc
                } else {
                    acc * &powers[i][e as usize]
                }
            })
        })
        .collect()
}

/// A homogeneous polynomial with coefficients in a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    num_vars: usize,
    degree: u32,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Form {
    pub fn zero(num_vars: usize, degree: u32, field: Field) -> Form {
        Form { num_vars, degree, field, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Scalar) -> Form {
        let field = c.field();
        let mut f = Form::zero(num_vars, 0, field);
        if !c.is_zero() {
            f.terms.insert(Monomial::one(num_vars), c);
        }
        f
    }

    pub fn var(num_vars: usize, i: usize, field: Field) -> Form {
        let mut f = Form::zero(num_vars, 1, field);
        f.terms.insert(Monomial::var(num_vars, i), field.one());
        f
    }

    /// `Σ coeffs[i]·x_i`.
    pub fn linear(field: Field, coeffs: &[Scalar]) -> Result<Form> {
        let n = coeffs.len();
        Form::from_terms(n, 1, field, coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())))
    }

    pub fn linear_i64(field: Field, coeffs: &[i64]) -> Form {
        let s: Vec<Scalar> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Form::linear(field, &s).expect("linear form")
    }

    /// Collects terms, summing repeats and dropping zeros. Every monomial must
    /// have `num_vars` exponents and total degree `degree`.
    pub fn from_terms<I>(num_vars: usize, degree: u32, field: Field, terms: I) -> Result<Form>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            if m.num_vars() != num_vars {
                return Err(Error::dims(format!("monomial in {} variables, form in {num_vars}", m.num_vars())));
            }
            if m.degree() != degree {
                return Err(Error::Inhomogeneous { first: degree, second: m.degree() });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
            }
            match map.get_mut(&m) {
                Some(acc) => *acc = acc.try_add(&c)?,
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Form { num_vars, degree, field, terms: map })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms, largest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn compatible(&self, other: &Form) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.num_vars != other.num_vars {
            return Err(Error::dims(format!("forms in {} and {} variables", self.num_vars, other.num_vars)));
        }
        Ok(())
    }

    /// Sum. A zero form is compatible with any degree.
    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous { first: self.degree, second: other.degree });
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(acc) => *acc = acc.try_add(c)?,
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Form { terms, ..self.clone() })
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Form> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), c.field().to_string()));
        }
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let w = v.try_mul(c)?;
            if !w.is_zero() {
                terms.insert(m.clone(), w);
            }
        }
        Ok(Form { terms, ..self.clone() })
    }

    pub fn try_mul(&self, other: &Form) -> Result<Form> {
        self.compatible(other)?;
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1.try_mul(c2)?;
                match terms.get_mut(&m) {
                    Some(acc) => *acc = acc.try_add(&c)?,
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Form { num_vars: self.num_vars, degree: self.degree + other.degree, field: self.field, terms })
    }

    pub fn pow(&self, e: u32) -> Form {
        let mut acc = Form::constant(self.num_vars, self.field.one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Product of a sequence of forms in the same ring.
    pub fn product<'a, I>(num_vars: usize, field: Field, forms: I) -> Result<Form>
    where
        I: IntoIterator<Item = &'a Form>,
    {
        forms.into_iter().try_fold(Form::constant(num_vars, field.one()), |acc, f| acc.try_mul(f))
    }

    /// Exact value at a point given by field elements.
    pub fn evaluate(&self, pt: &[Scalar]) -> Result<Scalar> {
        if pt.len() != self.num_vars {
            return Err(Error::dims(format!("point with {} coordinates for a form in {} variables", pt.len(), self.num_vars)));
        }
        if let Some(bad) = pt.iter().find(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch(self.field.to_string(), bad.field().to_string()));
        }
        let mut powers: Vec<Vec<Scalar>> = pt.iter().map(|x| vec![self.field.one(), x.clone()]).collect();
        let mut total = self.field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().try_mul(&pt[i])?;
                    powers[i].push(next);
                }
                v = v.try_mul(&powers[i][e as usize])?;
            }
            total = total.try_add(&v)?;
        }
        Ok(total)
    }

    /// Value at an integer point, mapped into the form's field.
    pub fn evaluate_int(&self, pt: &[BigInt]) -> Result<Scalar> {
        if self.field != Field::Rational {
            let s: Vec<Scalar> = pt.iter().map(|x| self.field.from_bigint(x)).collect();
            return self.evaluate(&s);
        }
        if pt.len() != self.num_vars {
            return Err(Error::dims(format!("point with {} coordinates for a form in {} variables", pt.len(), self.num_vars)));
        }
        let mut by_denom: BTreeMap<BigInt, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            let q = c.as_rational().expect("rational coefficient");
            *by_denom.entry(q.denom().clone()).or_default() += q.numer() * m.eval_int(pt);
        }
        let total = by_denom.into_iter().fold(BigRational::zero(), |acc, (d, n)| acc + BigRational::new(n, d));
        Ok(Scalar::Rational(total))
    }

    pub fn evaluate_at(&self, pt: &ProjPoint) -> Result<Scalar> {
        self.evaluate_int(pt.coords())
    }

    /// `∂f/∂x_i`. The derivative of a constant is the zero form of degree 0.
    pub fn derivative(&self, i: usize) -> Form {
        let degree = self.degree.saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((k, dm)) = m.derivative(i) {
                let v = c.mul_u64(k as u64);
                if !v.is_zero() {
                    terms.insert(dm, v);
                }
            }
        }
        Form { num_vars: self.num_vars, degree, field: self.field, terms }
    }

    pub fn gradient(&self) -> Vec<Form> {
        (0..self.num_vars).map(|i| self.derivative(i)).collect()
    }

    /// Substitutes `x_i ↦ subs[i]`, where all substituted forms share one
    /// degree and ring. The result has degree `deg(self)·deg(subs)`.
    pub fn substitute(&self, subs: &[Form]) -> Result<Form> {
        if subs.len() != self.num_vars {
            return Err(Error::dims(format!("{} substitutions for {} variables", subs.len(), self.num_vars)));
        }
        let Some(first) = subs.first() else {
            return Ok(self.clone());
        };
        let (nv, sub_deg) = (first.num_vars, first.degree);
        for s in subs {
            if s.field != self.field {
                return Err(Error::FieldMismatch(self.field.to_string(), s.field.to_string()));
            }
            if s.num_vars != nv {
                return Err(Error::dims("substituted forms live in different rings"));
            }
            if s.degree != sub_deg && !s.is_zero() {
                return Err(Error::DegreeMismatch(format!("substituted forms of degrees {} and {}", sub_deg, s.degree)));
            }
        }
        let mut powers: Vec<Vec<Form>> = subs.iter().map(|s| vec![Form::constant(nv, self.field.one()), s.clone()]).collect();
        let mut total = Form::zero(nv, self.degree * sub_deg, self.field);
        for (m, c) in &self.terms {
            let mut t = Form::constant(nv, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().try_mul(&subs[i])?;
                    powers[i].push(next);
                }
                t = t.try_mul(&powers[i][e as usize])?;
            }
            total = total.try_add(&t)?;
        }
        total.degree = self.degree * sub_deg;
        Ok(total)
    }

    /// Sets `x_chart = 1`, keeping the remaining variables in order.
    /// The result is generally not homogeneous, so it is returned as raw terms.
    fn dehomogenize(&self, chart: usize) -> BTreeMap<Vec<u32>, Scalar> {
        let mut out: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(chart);
            match out.get_mut(&e) {
                Some(acc) => *acc = acc.try_add(c).expect("same field"),
                None => {
                    out.insert(e, c.clone());
                }
            }
        }
        out
    }

    /// Rank of the Hessian of the dehomogenization `x_chart = 1` at `pt`.
    pub fn hessian_rank_in_chart(&self, pt: &ProjPoint, chart: usize) -> Result<usize> {
        self.check_point(pt)?;
        let coords: Vec<Scalar> = pt.coords().iter().map(|x| self.field.from_bigint(x)).collect();
        let lead = coords[chart].inv().ok_or_else(|| Error::invalid(format!("coordinate {chart} vanishes at the point")))?;
        self.check_singular(&coords)?;
        let affine: Vec<Scalar> =
            (0..self.num_vars).filter(|&i| i != chart).map(|i| coords[i].try_mul(&lead)).collect::<Result<_>>()?;
        let poly = self.dehomogenize(chart);
        let n = self.num_vars - 1;
        let mut entries = vec![self.field.zero(); n * n];
        for (e, c) in &poly {
            for a in 0..n {
                for b in a..n {
                    let mut ex = e.clone();
                    let mut k = c.clone();
                    if ex[a] == 0 {
                        continue;
                    }
                    k = k.mul_u64(ex[a] as u64);
                    ex[a] -= 1;
                    if ex[b] == 0 {
                        continue;
                    }
                    k = k.mul_u64(ex[b] as u64);
                    ex[b] -= 1;
                    if k.is_zero() {
                        continue;
                    }
                    let mut v = k;
                    for (i, &x) in ex.iter().enumerate() {
                        if x > 0 {
                            v = v.try_mul(&affine[i].pow(x))?;
                        }
                    }
                    entries[a * n + b] = entries[a * n + b].try_add(&v)?;
                    if a != b {
                        entries[b * n + a] = entries[b * n + a].try_add(&v)?;
                    }
                }
            }
        }
        Ok(Matrix::new(n, n, self.field, entries)?.rank())
    }

    /// Hessian rank at a singular point, in the chart of the last coordinate
    /// that is nonzero in the form's field.
    pub fn hessian_rank_at(&self, pt: &ProjPoint) -> Result<usize> {
        self.check_point(pt)?;
        let chart = pt
            .coords()
            .iter()
            .rposition(|x| !self.field.from_bigint(x).is_zero())
            .ok_or_else(|| Error::invalid("point vanishes identically in this field"))?;
        self.hessian_rank_in_chart(pt, chart)
    }

    fn check_point(&self, pt: &ProjPoint) -> Result<()> {
        if pt.coords().len() != self.num_vars {
            return Err(Error::dims(format!(
                "point in P^{} for a form in {} variables",
                pt.coords().len().saturating_sub(1),
                self.num_vars
            )));
        }
        Ok(())
    }

    fn check_singular(&self, coords: &[Scalar]) -> Result<()> {
        for (index, g) in self.gradient().iter().enumerate() {
            if !g.evaluate(coords)?.is_zero() {
                return Err(Error::NotSingular { index });
            }
        }
        Ok(())
    }

    /// True when `f` and all partial derivatives vanish at `pt`.
    pub fn is_singular_at(&self, pt: &ProjPoint) -> Result<bool> {
        self.check_point(pt)?;
        if !self.evaluate_at(pt)?.is_zero() {
            return Ok(false);
        }
        let coords: Vec<Scalar> = pt.coords().iter().map(|x| self.field.from_bigint(x)).collect();
        Ok(self.check_singular(&coords).is_ok())
    }

    /// Reduces a rational form modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Form> {
        let field = Field::prime(p)?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| match c {
                Scalar::Rational(q) => Ok((m.clone(), field.from_rational(q)?)),
                Scalar::Prime { .. } => Err(Error::invalid("form is already over a prime field")),
            })
            .collect::<Result<Vec<_>>>()?;
        Form::from_terms(self.num_vars, self.degree, field, terms)
    }
}

/// A form with coefficients reduced into F_p, compiled for fast evaluation at
/// residue vectors.
#[derive(Clone, Debug)]
pub struct ModForm {
    p: u64,
    degree: u32,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModForm {
    pub fn new(f: &Form, p: u64) -> Result<ModForm> {
        let field = Field::prime(p)?;
        let terms = f
            .terms
            .iter()
            .map(|(m, c)| {
                let r = match c {
                    Scalar::Rational(q) => field.from_rational(q)?,
                    Scalar::Prime { residue, modulus } if *modulus == p => field.from_i64(*residue as i64),
                    other => return Err(Error::FieldMismatch(field.to_string(), other.field().to_string())),
                };
                let Scalar::Prime { residue, .. } = r else { unreachable!() };
                Ok((m.0.clone(), residue))
            })
            .filter(|t| !matches!(t, Ok((_, 0))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModForm { p, degree: f.degree, terms })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at a residue vector; `powers[i][e]` must hold `x_i^e mod p` for
    /// every exponent that occurs.
    pub fn eval_with_powers(&self, powers: &[Vec<u64>]) -> u64 {
        let p = self.p as u128;
        let mut total: u128 = 0;
        for (e, c) in &self.terms {
            let mut v = *c as u128;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    v = v * powers[i][k as usize] as u128 % p;
                    if v == 0 {
                        break;
                    }
                }
            }
            total = (total + v) % p;
        }
        total as u64
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        self.eval_with_powers(&power_table(x, self.degree, self.p))
    }
}

/// `table[i][e] = x_i^e mod p` for `e ≤ max_exp`.
pub fn power_table(x: &[u64], max_exp: u32, p: u64) -> Vec<Vec<u64>> {
    x.iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(max_exp as usize + 1);
            row.push(1 % p);
            for k in 1..=max_exp as usize {
                row.push(((row[k - 1] as u128 * xi as u128) % p as u128) as u64);
            }
            row
        })
        .collect()
}

/// Serialized as its printed text.
impl serde::Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mono = m.degree() > 0;
            match (a.is_one(), mono) {
                (true, true) => write!(f, "{m}")?,
                (_, false) => write!(f, "{a}")?,
                (false, true) => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}
