#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nodal::ProjPoint;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pt(c: &[i64]) -> ProjPoint {
    ProjPoint::from_i64(c).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, vars: usize, bound: i64) -> ProjPoint {
    loop {
        let c: Vec<i64> = (0..vars).map(|_| rng.gen_range(-bound..=bound)).collect();
        if let Ok(p) = ProjPoint::from_i64(&c) {
            return p;
        }
    }
}

/// Distinct random points.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, vars: usize, bound: i64) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::new();
    while out.len() < n {
        let p = random_point(rng, vars, bound);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// All exponent vectors of the given degree, in no particular order.
pub fn exponents(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::new();
    for e in 0..=degree {
        for mut rest in exponents(vars - 1, degree - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

pub fn eval_row(p: &ProjPoint, degree: u32) -> Vec<BigInt> {
    exponents(p.num_vars(), degree)
        .iter()
        .map(|e| e.iter().zip(p.coords()).fold(BigInt::from(1), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize)))
        .collect()
}

/// Plain Gaussian elimination over Q.
pub fn rank_q(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, pr);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Plain Gaussian elimination over F_p with u128 products.
pub fn rank_p(rows: &[Vec<BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let mut v = x % &pb;
                    if v.is_negative() {
                        v += &pb;
                    }
                    u64::try_from(v).unwrap()
                })
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, pr);
        let iv = inv(m[rank][c]);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = mul(m[r][c], iv);
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + p - mul(f, *y)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn defect_oracle(pts: &[ProjPoint], degree: u32) -> usize {
    let rows: Vec<Vec<BigInt>> = pts.iter().map(|p| eval_row(p, degree)).collect();
    pts.len() - rank_q(&rows)
}

/// Largest subset of plane points lying on a common curve of degree `k`:
/// every subset is tried and kept when its evaluation rows are dependent
/// enough to leave a nonzero kernel.
pub fn max_on_curve_oracle(pts: &[ProjPoint], k: u32) -> usize {
    let n = pts.len();
    let big_n = ((k + 1) * (k + 2) / 2) as usize;
    let rows: Vec<Vec<BigInt>> = pts.iter().map(|p| eval_row(p, k)).collect();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let sub: Vec<Vec<BigInt>> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| rows[i].clone()).collect();
        if rank_q(&sub) < big_n {
            best = size;
        }
    }
    best
}

/// Tuples in `[1, j-1]^i` with `(i-2)j/2 + 1 < sum <= ij/2`, by enumeration.
pub fn varchenko_oracle(i: u32, j: u32) -> u64 {
    let mut count = 0;
    let mut a = vec![1u32; i as usize];
    loop {
        let s: u32 = a.iter().sum();
        if 2 * s > (i - 2) * j + 2 && 2 * s <= i * j {
            count += 1;
        }
        let mut t = 0;
        loop {
            if t == a.len() {
                return count;
            }
            if a[t] < j - 1 {
                a[t] += 1;
                break;
            }
            a[t] = 1;
            t += 1;
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}
