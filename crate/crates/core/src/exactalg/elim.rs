//! Elimination kernels: fraction-free (Bareiss) over the integers and plain
//! Gauss–Jordan over F_p. Pivot choice is always the first nonzero entry in
//! column order, so results are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{inv_mod, mul_mod, reduce_bigint, sub_mod};

/// Row echelon form produced by [`bareiss`]; only the `rank` nonzero rows are kept.
#[derive(Clone, Debug)]
pub(crate) struct IntEchelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

/// Multiplies a rational row by the lcm of its denominators.
pub(crate) fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Divides an integer vector by the gcd of its entries and makes the first
/// nonzero entry positive. Zero vectors are returned unchanged.
pub(crate) fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if neg {
            *x = -&*x;
        }
    }
}

/// Fraction-free forward elimination. Every intermediate entry is a minor of
/// the input, so all divisions by the previous pivot are exact.
pub(crate) fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize) -> IntEchelon {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c].is_zero() {
                // (piv * x - 0 * y) / prev
                if !prev.is_one() || !pivot_row[c].is_one() {
                    for j in c + 1..ncols {
                        if !row[j].is_zero() {
                            row[j] = &pivot_row[c] * &row[j] / &prev;
                        }
                    }
                }
                continue;
            }
            for j in c + 1..ncols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    IntEchelon { rows: a, pivots }
}

impl IntEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Back substitution with the free variables fixed to `free_values`
    /// (indexed by column; pivot columns are ignored) and right-hand side
    /// `rhs` (one entry per echelon row, or zeros).
    pub fn back_substitute(
        &self,
        ncols: usize,
        free_values: &[BigRational],
        rhs: Option<&[BigInt]>,
    ) -> Vec<BigRational> {
        let mut x = free_values.to_vec();
        x.resize(ncols, BigRational::zero());
        for &pc in &self.pivots {
            x[pc] = BigRational::zero();
        }
        for (i, &pc) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let mut s = match rhs {
                Some(b) => BigRational::from_integer(b[i].clone()),
                None => BigRational::zero(),
            };
            for c in pc + 1..ncols {
                if !row[c].is_zero() && !x[c].is_zero() {
                    s -= &x[c] * BigRational::from_integer(row[c].clone());
                }
            }
            x[pc] = s / BigRational::from_integer(row[pc].clone());
        }
        x
    }

    /// Right null space basis, each vector scaled so its first nonzero entry is 1.
    pub fn kernel(&self, ncols: usize) -> Vec<Vec<BigRational>> {
        let free: Vec<usize> = (0..ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut fv = vec![BigRational::zero(); ncols];
                fv[f] = BigRational::one();
                let mut v = self.back_substitute(ncols, &fv, None);
                normalize_leading_one(&mut v);
                v
            })
            .collect()
    }
}

pub(crate) fn normalize_leading_one(v: &mut [BigRational]) {
    if let Some(lead) = v.iter().find(|q| !q.is_zero()).cloned() {
        if !lead.is_one() {
            for q in v.iter_mut() {
                *q = &*q / &lead;
            }
        }
    }
}

/// Reduced row echelon form over F_p; pivots are scaled to 1.
#[derive(Clone, Debug)]
pub(crate) struct ModEchelon {
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
    pub p: u64,
}

pub(crate) fn mod_rref(mut a: Vec<Vec<u64>>, ncols: usize, p: u64) -> ModEchelon {
    let nrows = a.len();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for j in c..ncols {
            a[r][j] = mul_mod(a[r][j], inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..ncols {
                if pivot_row[j] != 0 {
                    row[j] = sub_mod(row[j], mul_mod(f, pivot_row[j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    ModEchelon { rows: a, pivots, p }
}

impl ModEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel(&self, ncols: usize) -> Vec<Vec<u64>> {
        let p = self.p;
        (0..ncols)
            .filter(|c| !self.pivots.contains(c))
            .map(|f| {
                let mut v = vec![0u64; ncols];
                v[f] = 1;
                for (i, &pc) in self.pivots.iter().enumerate() {
                    let e = self.rows[i][f];
                    v[pc] = if e == 0 { 0 } else { p - e };
                }
                if let Some(&lead) = v.iter().find(|&&x| x != 0) {
                    let inv = inv_mod(lead, p);
                    for x in v.iter_mut() {
                        *x = mul_mod(*x, inv, p);
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank of an integer matrix reduced modulo `p`.
pub(crate) fn mod_rank_of_ints(rows: &[Vec<BigInt>], ncols: usize, p: u64) -> usize {
    let reduced: Vec<Vec<u64>> =
        rows.iter().map(|r| r.iter().map(|x| reduce_bigint(x, p)).collect()).collect();
    mod_rref(reduced, ncols, p).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn bareiss_skips_zero_columns() {
        let e = bareiss(ints(&[&[0, 2, 4], &[0, 1, 3], &[0, 3, 7]]), 3);
        assert_eq!(e.pivots, vec![1, 2]);
    }

    #[test]
    fn bareiss_determinant_in_last_pivot() {
        // For a nonsingular square matrix the last pivot is ± the determinant.
        let e = bareiss(ints(&[&[2, 1, 3], &[1, 0, 2], &[4, 1, 1]]), 3);
        assert_eq!(e.rank(), 3);
        let det = 2 * (0 - 2) - 1 * (1 - 8) + 3 * (1 - 0);
        assert_eq!(e.rows[2][2].abs(), BigInt::from(det).abs());
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let mut v = ints(&[&[0, -4, 6, 2]]).remove(0);
        primitive(&mut v);
        assert_eq!(v, ints(&[&[0, 2, -3, -1]]).remove(0));
    }

    #[test]
    fn mod_kernel_is_annihilated() {
        let p = 101;
        let e = mod_rref(vec![vec![1, 2, 3], vec![2, 4, 7]], 3, p);
        assert_eq!(e.rank(), 2);
        let k = e.kernel(3);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let dot = (v[0] + 2 * v[1] + 3 * v[2]) % p;
        assert_eq!(dot, 0);
    }
}
