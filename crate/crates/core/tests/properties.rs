mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::*;
use nodal::cli::{run, PointSetFile, Report};
use nodal::conditions::{defect, defect_in};
use nodal::families::{find_nodes, split_example_ii, varchenko_bound, PointClass};
use nodal::forms::{monomial_basis, parse_form};
use nodal::incidence::{max_points_on_curve, partition};
use nodal::pipeline::{witness_cone, witness_direct};
use nodal::projgeom::{random_projection, Center, Projection};
use nodal::{Field, Form, Matrix, Mode, Monomial, ProjPoint, Scalar};

const LARGE_PRIMES: [u64; 3] = [1_000_003, 1_000_033, 1_000_037];

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, c), r).prop_map(|mut m| {
            // duplicate a combination of rows now and then to force rank drops
            if m.len() > 2 && m[0][0] % 2 == 0 {
                let row: Vec<i64> = m[0].iter().zip(&m[1]).map(|(a, b)| 2 * a - b).collect();
                m.push(row);
            }
            m
        })
    })
}

fn q(m: &[Vec<i64>]) -> Matrix {
    Matrix::from_i64_rows(Field::Rational, m).unwrap()
}

fn form_strategy(vars: usize, max_degree: u32) -> impl Strategy<Value = Form> {
    (0..=max_degree).prop_flat_map(move |d| {
        let basis = monomial_basis(vars, d);
        let n = basis.len();
        prop::collection::vec(-5i64..=5, n).prop_map(move |c| {
            let terms = basis.iter().cloned().zip(c).map(|(m, k)| (m, Field::Rational.from_i64(k)));
            Form::from_terms(vars, d, Field::Rational, terms).unwrap()
        })
    })
}

fn point_strategy(vars: usize, bound: i64) -> impl Strategy<Value = ProjPoint> {
    prop::collection::vec(-bound..=bound, vars).prop_filter_map("zero vector", |c| ProjPoint::from_i64(&c).ok())
}

fn distinct_points(vars: usize, bound: i64, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<ProjPoint>> {
    prop::collection::vec(point_strategy(vars, bound), n).prop_map(|mut v| {
        let mut seen = Vec::new();
        v.retain(|p| {
            let fresh = !seen.contains(p);
            seen.push(p.clone());
            fresh
        });
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_mod_large_primes_matches_q(m in matrix_strategy()) {
        let rq = q(&m).rank();
        let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(rq, rank_q(&rows));
        let disagreements = LARGE_PRIMES.iter().filter(|&&p| q(&m).reduce_mod(p).unwrap().rank() != rq).count();
        prop_assert!(disagreements <= 1);
        if disagreements == 1 {
            prop_assert_eq!(q(&m).reduce_mod(1_000_039).unwrap().rank(), rq);
        }
    }

    #[test]
    fn rank_plus_kernel_is_cols_and_kernel_is_exact(m in matrix_strategy()) {
        let a = q(&m);
        let ker = a.kernel_basis();
        prop_assert_eq!(a.rank() + ker.len(), a.cols());
        for v in &ker {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        let ap = a.reduce_mod(65521).unwrap();
        let kp = ap.kernel_basis();
        prop_assert_eq!(ap.rank() + kp.len(), ap.cols());
        for v in &kp {
            prop_assert!(ap.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn rank_survives_permutation_and_scaling(m in matrix_strategy(), k in 1i64..9, shift in 0usize..5) {
        let a = q(&m);
        let mut rows: Vec<usize> = (0..a.rows()).collect();
        rows.rotate_left(shift % a.rows());
        let mut cols: Vec<usize> = (0..a.cols()).collect();
        cols.reverse();
        let mut b = a.select_rows(&rows).select_columns(&cols);
        for c in 0..b.cols() {
            let v = b.get(0, c).try_mul(&Field::Rational.from_i64(-k)).unwrap();
            b.set(0, c, v).unwrap();
        }
        prop_assert_eq!(a.rank(), b.rank());
    }

    #[test]
    fn parse_print_parse_is_identity(f in form_strategy(4, 4)) {
        let text = f.to_string();
        let g = parse_form(&text, 4).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(parse_form(&g.to_string(), 4).unwrap(), f);
    }

    #[test]
    fn evaluation_is_multiplicative(f in form_strategy(3, 3), g in form_strategy(3, 3), p in point_strategy(3, 6)) {
        let fg = f.try_mul(&g).unwrap();
        let lhs = fg.evaluate_at(&p).unwrap();
        let rhs = f.evaluate_at(&p).unwrap().try_mul(&g.evaluate_at(&p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity(f in form_strategy(4, 5)) {
        let n = f.num_vars();
        let grad = f.gradient();
        if f.degree() == 0 {
            prop_assert!(grad.iter().all(Form::is_zero));
        } else {
            let mut sum = Form::zero(n, f.degree(), Field::Rational);
            for (i, d) in grad.iter().enumerate() {
                sum = sum.try_add(&Form::var(n, i, Field::Rational).try_mul(d).unwrap()).unwrap();
            }
            prop_assert_eq!(sum, f.scale(&Field::Rational.from_i64(i64::from(f.degree()))).unwrap());
        }
    }

    #[test]
    fn normalization_ignores_scaling(v in prop::collection::vec(-30i64..=30, 2..6), num in 1i64..50, den in 1i64..50, neg: bool) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let lambda = BigRational::new(BigInt::from(if neg { -num } else { num }), BigInt::from(den));
        let scaled: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into()) * &lambda).collect();
        prop_assert_eq!(ProjPoint::from_rationals(&scaled).unwrap(), ProjPoint::from_i64(&v).unwrap());
    }

    #[test]
    fn cone_pullback_matches_projection(
        center in point_strategy(4, 5),
        qpt in point_strategy(4, 9),
        other in point_strategy(3, 9),
        c in form_strategy(3, 2),
        planted: bool,
    ) {
        let proj = Projection::from_center(Center::Point(center.clone())).unwrap();
        let Some(img) = proj.image(&qpt) else { return Ok(()) };
        let curve = if planted {
            // a line through the image times an arbitrary form
            let a: Vec<BigInt> = img.coords().to_vec();
            let b: Vec<BigInt> = other.coords().to_vec();
            let cross = [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]];
            let coeffs: Vec<Scalar> = cross.iter().map(|x| Field::Rational.from_bigint(x)).collect();
            Form::linear(Field::Rational, &coeffs).unwrap().try_mul(&c).unwrap()
        } else {
            c
        };
        let pulled = proj.cone_pullback(&curve).unwrap();
        prop_assert_eq!(pulled.evaluate_at(&qpt).unwrap().is_zero(), curve.evaluate_at(&img).unwrap().is_zero());
    }

    #[test]
    fn random_projection_is_injective(pts in distinct_points(5, 6, 2..15), seed: u64) {
        let proj = random_projection(4, &pts, seed).unwrap();
        let out = proj.project(&pts).unwrap();
        prop_assert!(out.injective);
        for i in 0..out.images.len() {
            for j in 0..i {
                prop_assert_ne!(&out.images[i], &out.images[j]);
            }
        }
    }

    #[test]
    fn defect_ignores_order_and_scaling(pts in distinct_points(3, 5, 1..10), d in 1i64..4, k in 2i64..6, shift in 0usize..9) {
        let base = defect(&pts, d, 3).unwrap();
        let mut moved: Vec<ProjPoint> = pts.clone();
        moved.rotate_left(shift % pts.len());
        let moved: Vec<ProjPoint> = moved
            .iter()
            .map(|p| ProjPoint::new(p.coords().iter().map(|x| x * k).collect()).unwrap())
            .collect();
        prop_assert_eq!(defect(&moved, d, 3).unwrap().defect, base.defect);
        prop_assert_eq!(base.defect, defect_oracle(&pts, d as u32));
    }

    #[test]
    fn defect_is_monotone_in_degree(pts in distinct_points(3, 4, 1..14), d in 0i64..4) {
        let a = defect(&pts, d, 3).unwrap();
        let b = defect(&pts, d + 1, 3).unwrap();
        prop_assert!(b.defect <= a.defect);
        a.verify(&pts).unwrap();
        b.verify(&pts).unwrap();
        prop_assert_eq!(a.defect > 0, a.dependency().is_some());
    }

    #[test]
    fn defect_over_q_bounds_defect_mod_p(pts in distinct_points(4, 5, 1..12), d in 1i64..3) {
        let dq = defect(&pts, d, 4).unwrap().defect;
        let mut equal = 0;
        for p in LARGE_PRIMES {
            let dp = defect_in(Field::prime(p).unwrap(), &pts, d, 4).unwrap().defect;
            prop_assert!(dq <= dp);
            equal += usize::from(dp == dq);
        }
        prop_assert!(equal >= 2);
        let small = defect_in(Field::prime(7).unwrap(), &pts, d, 4).unwrap().defect;
        prop_assert!(dq <= small);
    }

    #[test]
    fn single_point_has_no_defect(p in point_strategy(4, 20), d in 0i64..6) {
        prop_assert_eq!(defect(&[p], d, 4).unwrap().defect, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curve_max_matches_oracle(pts in distinct_points(3, 3, 3..10), k in 1u32..=2) {
        let got = max_points_on_curve(&pts, k).unwrap();
        prop_assert_eq!(got.count, max_on_curve_oracle(&pts, k));
        prop_assert_eq!(got.incident.len(), got.count);
        for &i in &got.incident {
            prop_assert!(got.witness.evaluate_at(&pts[i]).unwrap().is_zero());
        }
    }

    #[test]
    fn partition_invariants(extra in distinct_points(3, 6, 0..5), a in -3i64..=3, b in -3i64..=3, m in 6i64..10) {
        let mut pts: Vec<ProjPoint> = (0..m).map(|t| pt(&[1, t, a + b * t])).collect();
        for p in extra {
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let cert = partition(&pts, Mode::DoubleSolid { r: 3 }).unwrap();
        cert.check(&pts).unwrap();
        prop_assert!(!cert.parts.is_empty());
        prop_assert!(cert.parts[0].indices.len() >= m as usize);
    }

    #[test]
    fn cone_certificates_are_deterministic(pts in distinct_points(4, 15, 3..6), seed: u64) {
        let mode = Mode::DoubleSolid { r: 3 };
        let a = witness_cone(&pts, 0, mode, seed).unwrap();
        let b = witness_cone(&pts, 0, mode, seed).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        a.verify().unwrap();
        if !a.is_fallback() {
            prop_assert!(witness_direct(&pts, 0, 5).unwrap().is_some());
        }
    }
}

#[test]
fn monomial_counts_match_binomials() {
    for vars in 1..=6usize {
        for d in 0..=12u32 {
            let want = binomial(u64::from(d) + vars as u64 - 1, vars as u64 - 1);
            assert_eq!(monomial_basis(vars, d).len() as u64, want, "vars {vars}, degree {d}");
        }
    }
    assert_eq!(Monomial::one(3).degree(), 0);
}

#[test]
fn varchenko_matches_enumeration_and_mirror() {
    for i in 2..=4u32 {
        for j in 2..=8u32 {
            let dp = varchenko_bound(i, j).unwrap();
            assert_eq!(dp, varchenko_oracle(i, j), "A_{i}({j})");
            // a -> j - a sends the sum s to ij - s
            let mut mirrored = 0u64;
            let mut a = vec![1u32; i as usize];
            'outer: loop {
                let s: u32 = a.iter().sum();
                let t = i * j - s;
                if 2 * t > (i - 2) * j + 2 && 2 * t <= i * j {
                    mirrored += 1;
                }
                for x in a.iter_mut() {
                    if *x < j - 1 {
                        *x += 1;
                        continue 'outer;
                    }
                    *x = 1;
                }
                break;
            }
            assert_eq!(mirrored, dp, "mirror of A_{i}({j})");
        }
    }
}

#[test]
fn example_ii_nodes_lie_in_the_plane_and_are_nodes() {
    let inst = split_example_ii();
    for p in [7u64, 11, 13] {
        let list = find_nodes(&inst, p).unwrap();
        let reduced = inst.equation.reduce_mod(p).unwrap();
        let field = Field::prime(p).unwrap();
        for (pt, class) in list.points.iter().zip(&list.classes) {
            let c = pt.to_scalars(field);
            assert!(c[0].is_zero() && c[1].is_zero(), "{pt} over F_{p}");
            assert!(reduced.evaluate(&c).unwrap().is_zero());
            for g in reduced.gradient() {
                assert!(g.evaluate(&c).unwrap().is_zero());
            }
            if *class == PointClass::Node {
                assert_eq!(reduced.hessian_rank_at(pt).unwrap(), 4);
            }
        }
        if p == 7 {
            assert_eq!(list.nodes, 9);
        }
    }
}

#[test]
fn reports_round_trip_and_fresh_seeds_are_printed() {
    let path = std::env::temp_dir().join(format!("nodal-properties-{}.txt", std::process::id()));
    std::fs::write(&path, PointSetFile::new(3, random_points(&mut rng(3), 6, 4, 10)).to_lines()).unwrap();
    let file = path.to_str().unwrap();
    let commands: [&[&str]; 4] = [
        &["defect", "--points", file, "--degree", "2"],
        &["verdict", "--kind", "double-solid", "--r", "3", "--points", file],
        &["partition", "--kind", "double-solid", "--r", "3", "--points", file],
        &["full-report", "--kind", "double-solid", "--r", "3", "--points", file],
    ];
    for args in commands {
        let (code, out) = run(std::iter::once("nodal").chain(args.iter().copied()));
        assert_eq!(code, 0, "{out}");
        let r: Report = serde_json::from_str(&out).unwrap();
        let again: Report = serde_json::from_str(&serde_json::to_string_pretty(&r).unwrap()).unwrap();
        assert_eq!(r, again);
        if matches!(args[0], "partition" | "full-report") {
            let seed = r.seed.expect("fresh seed is reported");
            let mut seeded: Vec<String> = std::iter::once("nodal").chain(args.iter().copied()).map(String::from).collect();
            seeded.extend(["--seed".to_string(), seed.to_string()]);
            let (_, replay) = run(seeded);
            let replay: Report = serde_json::from_str(&replay).unwrap();
            assert_eq!(replay.payload, r.payload);
        }
    }
}
