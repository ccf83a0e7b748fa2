//! The exact simplex against brute-force vertex enumeration on small boxed
//! systems.

use num_traits::{One, Zero};
use proptest::prelude::*;

use rcbr_core::exact::lp::{infeasibility_certificate, verify_infeasibility_certificate};
use rcbr_core::exact::{lp_optimize, LinearSystem, LpSolution, Rational};

const BOX: i64 = 5;

fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Solves the square system `a x = b`, `None` when singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
                let d = &f * &b[col];
                b[i] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Maximum of `c·x` over `{x : rows x <= rhs}` by trying every vertex.
fn brute_force(rows: &[(Vec<Rational>, Rational)], c: &[Rational]) -> Option<Rational> {
    let n = c.len();
    let mut best: Option<Rational> = None;
    for pick in subsets(rows.len(), n) {
        let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b = pick.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve(a, b) else { continue };
        let feasible = rows
            .iter()
            .all(|(row, rhs)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<Rational>() <= *rhs);
        if feasible {
            let v: Rational = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
    }
    best
}

/// Row coefficients, right-hand side and whether the row is an equality.
type Row = (Vec<i64>, i64, bool);

fn system_strategy() -> impl Strategy<Value = (usize, Vec<Row>, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(
                (proptest::collection::vec(-3i64..=3, n), -4i64..=6, proptest::bool::weighted(0.2)),
                0..=6,
            ),
            proptest::collection::vec(-3i64..=3, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn simplex_matches_vertex_enumeration((n, constraints, objective) in system_strategy()) {
        let mut system = LinearSystem::new(n);
        // every row as `<=`, equalities as two opposite rows
        let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for (coeffs, rhs, equality) in &constraints {
            let a: Vec<Rational> = coeffs.iter().map(|&v| r(v)).collect();
            if *equality {
                system = system.eq(a.clone(), r(*rhs));
                rows.push((a.iter().map(|v| -v).collect(), -r(*rhs)));
            } else {
                system = system.le(a.clone(), r(*rhs));
            }
            rows.push((a, r(*rhs)));
        }
        for k in 0..n {
            let unit = system.unit(k);
            let neg: Vec<Rational> = unit.iter().map(|v| -v).collect();
            system = system.le(unit.clone(), r(BOX)).le(neg.clone(), r(BOX));
            rows.push((unit, r(BOX)));
            rows.push((neg, r(BOX)));
        }
        let c: Vec<Rational> = objective.iter().map(|&v| r(v)).collect();
        let expected = brute_force(&rows, &c);
        let solution = lp_optimize(&system.clone().maximize(c.clone())).unwrap();
        match (expected, solution) {
            (Some(v), LpSolution::Optimal { value, point }) => {
                prop_assert_eq!(&value, &v);
                prop_assert!(system.is_satisfied_by(&point));
            }
            (None, LpSolution::Infeasible) => {
                let y = infeasibility_certificate(&system).unwrap().expect("certificate");
                prop_assert!(verify_infeasibility_certificate(&system, &y));
            }
            (e, s) => prop_assert!(false, "brute force {:?}, simplex {:?}", e, s),
        }
    }
}

#[test]
fn degenerate_square() {
    // x + y <= 1, x - y <= 0, -x <= 0 meet at a degenerate vertex
    let system = LinearSystem::new(2)
        .le(vec![r(1), r(1)], r(1))
        .le(vec![r(1), r(-1)], r(0))
        .le(vec![r(-1), r(0)], r(0))
        .le(vec![r(0), r(-1)], r(0))
        .maximize(vec![r(1), Rational::one()]);
    assert_eq!(lp_optimize(&system).unwrap().value(), Some(&r(1)));
}
