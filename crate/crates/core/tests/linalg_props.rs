use num_traits::{Signed, Zero};
use pbe_core::linalg::{
    box_vertices, format_rational, int, parse_rational, rank, rat, solve_affine, LinearEquation,
    Rational,
};
use proptest::prelude::*;

/// `p/q` compared by cross multiplication in i128.
fn same_fraction(r: &Rational, p: i128, q: i128) -> bool {
    let (rn, rd): (i128, i128) = (r.numer().try_into().unwrap(), r.denom().try_into().unwrap());
    rn * q == p * rd
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-1000i64..=-1, 1i64..=1000]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
}

proptest! {
    #[test]
    fn fraction_arithmetic(a in -1000i64..1000, b in nonzero(), c in -1000i64..1000, d in nonzero()) {
        let (x, y) = (rat(a, b), rat(c, d));
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        prop_assert!(same_fraction(&(&x + &y), a * d + c * b, b * d));
        prop_assert!(same_fraction(&(&x - &y), a * d - c * b, b * d));
        prop_assert!(same_fraction(&(&x * &y), a * c, b * d));
        if c != 0 {
            prop_assert!(same_fraction(&(&x / &y), a * d, b * c));
        }
        prop_assert_eq!(x < y, (a * d) * (b * d).signum() < (c * b) * (b * d).signum());
        prop_assert!(x.denom().is_positive());
    }

    #[test]
    fn rational_text_round_trip(a in -10_000i64..10_000, b in nonzero()) {
        let x = rat(a, b);
        let text = format_rational(&x);
        prop_assert_eq!(parse_rational(&text).unwrap(), x.clone());
        prop_assert_eq!(text.contains('/'), !x.is_integer());
    }

    #[test]
    fn affine_solutions_have_zero_residual(
        m in matrix(4, 5),
        x0 in prop::collection::vec((-5i64..=5, 1i64..=4), 5),
    ) {
        let x0: Vec<Rational> = x0.into_iter().map(|(p, q)| rat(p, q)).collect();
        let eqs: Vec<LinearEquation> = m
            .iter()
            .map(|row| {
                let coeffs: Vec<Rational> = row.iter().map(|&v| int(v)).collect();
                let rhs = coeffs.iter().zip(&x0).map(|(c, x)| c * x).sum();
                LinearEquation::new(coeffs, rhs)
            })
            .collect();
        let space = solve_affine(5, &eqs).expect("consistent by construction");
        let rows: Vec<Vec<Rational>> = eqs.iter().map(|e| e.coeffs.clone()).collect();
        prop_assert_eq!(space.dimension() + rank(&rows, 5), 5);
        for e in &eqs {
            prop_assert!(e.residual(&space.particular).is_zero());
            prop_assert!(e.residual(&x0).is_zero());
            for b in &space.basis {
                let hom: Rational = e.coeffs.iter().zip(b).map(|(c, v)| c * v).sum();
                prop_assert!(hom.is_zero());
            }
        }
        // Arbitrary combinations stay in the solution set.
        let lambda: Vec<Rational> = (0..space.dimension()).map(|i| rat(i as i64 + 1, 3)).collect();
        let p = space.point(&lambda);
        prop_assert!(eqs.iter().all(|e| e.residual(&p).is_zero()));
        prop_assert!(space.contains(&x0));
    }

    #[test]
    fn inconsistent_systems_are_rejected(m in matrix(2, 3)) {
        // The same left-hand side with two right-hand sides; 0 = 1 when the row is zero.
        let coeffs: Vec<Rational> = m[0].iter().map(|&v| int(v)).collect();
        let eqs = vec![
            LinearEquation::new(coeffs.clone(), int(0)),
            LinearEquation::new(coeffs.clone(), int(1)),
        ];
        prop_assert!(solve_affine(3, &eqs).is_none());
    }

    #[test]
    fn box_vertices_are_extreme_points(m in matrix(2, 4)) {
        let eqs: Vec<LinearEquation> = m
            .iter()
            .map(|row| LinearEquation::new(row.iter().map(|&v| int(v)).collect(), int(0)))
            .collect();
        let space = solve_affine(4, &eqs).unwrap();
        let lower = vec![int(0); 4];
        let upper = vec![int(1); 4];
        let vertices = box_vertices(&space, &lower, &upper).unwrap();
        // The origin always lies in the box and the space.
        prop_assert!(!vertices.is_empty());
        for v in &vertices {
            prop_assert!(space.contains(v));
            prop_assert!(v.iter().all(|x| !x.is_negative() && x <= &int(1)));
            // Extreme: the tight coordinates pin down every direction of the space.
            let tight: Vec<Vec<Rational>> = (0..4)
                .filter(|&i| v[i].is_zero() || v[i] == int(1))
                .map(|i| space.basis.iter().map(|b| b[i].clone()).collect())
                .collect();
            prop_assert_eq!(rank(&tight, space.dimension()), space.dimension());
        }
        let mut sorted = vertices.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), vertices.len());
    }
}
