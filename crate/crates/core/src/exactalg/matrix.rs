use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::elim::{bareiss, clear_denominators, mod_rank_of_ints, mod_rref};
use super::scalar::{Field, Scalar, FILTER_PRIME};
use crate::error::{Error, Result};

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

/// Outcome of [`Matrix::solve_affine`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Solution(Vec<Scalar>),
    Inconsistent,
}

impl AffineSolution {
    pub fn into_option(self) -> Option<Vec<Scalar>> {
        match self {
            AffineSolution::Solution(v) => Some(v),
            AffineSolution::Inconsistent => None,
        }
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, field: Field, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        Ok(Matrix { rows, cols, field, entries })
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Matrix {
        Matrix { rows, cols, field, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from rows of scalars; `cols` is needed for the 0-row case.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::dims(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            entries.extend(r);
        }
        Matrix::new(nrows, cols, field, entries)
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(
            field,
            cols,
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) -> Result<()> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), v.field().to_string()));
        }
        self.entries[r * self.cols + c] = v;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, field: self.field, entries }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.rows, cols: cols.len(), field: self.field, entries }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        Matrix { rows: rows.len(), cols: self.cols, field: self.field, entries }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::dims(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).try_fold(self.field.zero(), |acc, (a, b)| acc.try_add(&a.try_mul(b)?))
            })
            .collect()
    }

    /// Row vector times matrix: `vᵀ · M`.
    pub fn left_mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.transpose().mul_vec(v)
    }

    fn rational_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|s| s.as_rational().expect("rational matrix").clone()).collect())
            .collect()
    }

    pub(crate) fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rational_rows().iter().map(|r| clear_denominators(r)).collect()
    }

    fn residue_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|s| match s {
                        Scalar::Prime { residue, .. } => *residue,
                        Scalar::Rational(_) => unreachable!("prime-field matrix"),
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact rank. Over Q the rows are scaled to integers and reduced with
    /// fraction-free elimination; a full-rank result modulo a large prime is
    /// accepted directly since reduction mod p can only lower the rank.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.field {
            Field::Rational => {
                let ints = self.integer_rows();
                let full = self.rows.min(self.cols);
                if mod_rank_of_ints(&ints, self.cols, FILTER_PRIME) == full {
                    return full;
                }
                bareiss(ints, self.cols).rank()
            }
            Field::Prime(p) => mod_rref(self.residue_rows(), self.cols, p).rank(),
        }
    }

    /// Column indices of the pivots found by elimination (a basis of the column space).
    pub fn pivot_columns(&self) -> Vec<usize> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        match self.field {
            Field::Rational => bareiss(self.integer_rows(), self.cols).pivots,
            Field::Prime(p) => mod_rref(self.residue_rows(), self.cols, p).pivots,
        }
    }

    /// Basis of the right null space; every vector has leading entry 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        match self.field {
            Field::Rational => {
                let ech = bareiss(self.integer_rows(), self.cols);
                ech.kernel(self.cols)
                    .into_iter()
                    .map(|v| v.into_iter().map(Scalar::Rational).collect())
                    .collect()
            }
            Field::Prime(p) => {
                let ech = mod_rref(self.residue_rows(), self.cols, p);
                ech.kernel(self.cols)
                    .into_iter()
                    .map(|v| v.into_iter().map(|residue| Scalar::Prime { residue, modulus: p }).collect())
                    .collect()
            }
        }
    }

    /// One exact solution of `M x = target` with every free variable set to
    /// zero, or [`AffineSolution::Inconsistent`].
    pub fn solve_affine(&self, target: &[Scalar]) -> Result<AffineSolution> {
        if target.len() != self.rows {
            return Err(Error::dims(format!("target of length {} for {} rows", target.len(), self.rows)));
        }
        if let Some(bad) = target.iter().find(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch(self.field.to_string(), bad.field().to_string()));
        }
        let n = self.cols;
        match self.field {
            Field::Rational => {
                let aug: Vec<Vec<BigInt>> = self
                    .rational_rows()
                    .into_iter()
                    .zip(target)
                    .map(|(mut r, t)| {
                        r.push(t.as_rational().expect("rational").clone());
                        clear_denominators(&r)
                    })
                    .collect();
                let ech = bareiss(aug, n + 1);
                if ech.pivots.last() == Some(&n) {
                    return Ok(AffineSolution::Inconsistent);
                }
                let rhs: Vec<BigInt> = ech.rows.iter().map(|r| r[n].clone()).collect();
                let x = ech.back_substitute(n, &vec![BigRational::zero(); n], Some(&rhs));
                Ok(AffineSolution::Solution(x.into_iter().map(Scalar::Rational).collect()))
            }
            Field::Prime(p) => {
                let aug: Vec<Vec<u64>> = self
                    .residue_rows()
                    .into_iter()
                    .zip(target)
                    .map(|(mut r, t)| {
                        if let Scalar::Prime { residue, .. } = t {
                            r.push(*residue);
                        }
                        r
                    })
                    .collect();
                let ech = mod_rref(aug, n + 1, p);
                if ech.pivots.last() == Some(&n) {
                    return Ok(AffineSolution::Inconsistent);
                }
                let mut x = vec![0u64; n];
                for (i, &pc) in ech.pivots.iter().enumerate() {
                    x[pc] = ech.rows[i][n];
                }
                Ok(AffineSolution::Solution(
                    x.into_iter().map(|residue| Scalar::Prime { residue, modulus: p }).collect(),
                ))
            }
        }
    }

    /// Reduces a rational matrix modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Matrix> {
        let field = Field::prime(p)?;
        let entries = self
            .entries
            .iter()
            .map(|s| match s {
                Scalar::Rational(q) => field.from_rational(q),
                Scalar::Prime { .. } => Err(Error::invalid("matrix is already over a prime field")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, field, entries })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(Field::Rational, rows).unwrap()
    }

    fn qs(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Field::Rational.from_i64(x)).collect()
    }

    #[test]
    fn identity_rank_and_kernel() {
        let id = Matrix::identity(3, Field::Rational);
        assert_eq!(id.rank(), 3);
        assert!(id.kernel_basis().is_empty());
    }

    #[test]
    fn proportional_rows() {
        assert_eq!(q(&[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn zero_row_kernel_is_everything() {
        let z = Matrix::zeros(1, 3, Field::Rational);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_of_coordinate_projection() {
        let m = q(&[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(m.kernel_basis(), vec![qs(&[0, 0, 1])]);
    }

    #[test]
    fn kernel_leading_entry_is_one() {
        let m = q(&[vec![2, 4, 6]]);
        for v in m.kernel_basis() {
            let lead = v.iter().find(|s| !s.is_zero()).unwrap();
            assert!(lead.is_one());
            assert!(m.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn degenerate_shapes() {
        assert_eq!(Matrix::zeros(0, 4, Field::Rational).rank(), 0);
        assert_eq!(Matrix::zeros(4, 0, Field::Rational).rank(), 0);
        assert_eq!(Matrix::zeros(0, 4, Field::Rational).kernel_basis().len(), 4);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(3, Field::Rational);
        assert_eq!(id.solve_affine(&qs(&[1, 2, 3])).unwrap(), AffineSolution::Solution(qs(&[1, 2, 3])));
        assert_eq!(q(&[vec![1, 1]]).solve_affine(&qs(&[2])).unwrap(), AffineSolution::Solution(qs(&[2, 0])));
        assert_eq!(q(&[vec![1], vec![1]]).solve_affine(&qs(&[1, 2])).unwrap(), AffineSolution::Inconsistent);
    }

    #[test]
    fn solve_over_prime_field() {
        let f = Field::prime(7).unwrap();
        let m = Matrix::from_i64_rows(f, &[vec![2, 1], vec![1, 1]]).unwrap();
        let t = vec![f.from_i64(1), f.from_i64(0)];
        let x = m.solve_affine(&t).unwrap().into_option().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), t);
    }

    #[test]
    fn mixed_fields_rejected() {
        let entries = vec![Field::Rational.one(), Field::prime(5).unwrap().one()];
        assert!(matches!(Matrix::new(1, 2, Field::Rational, entries), Err(Error::FieldMismatch(..))));
        let m = Matrix::identity(1, Field::Rational);
        assert!(m.solve_affine(&[Field::prime(5).unwrap().one()]).is_err());
    }

    #[test]
    fn rational_entries_are_cleared() {
        let half = Scalar::Rational(BigRational::new(1.into(), 2.into()));
        let m = Matrix::from_rows(
            Field::Rational,
            2,
            vec![vec![half.clone(), Field::Rational.one()], vec![Field::Rational.one(), Field::Rational.from_i64(2)]],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }
}
