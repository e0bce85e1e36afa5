//! Property tests for the exact substrate: solver witnesses and polynomial
//! ring axioms on arbitrary inputs, with shrinking.

use num_traits::Zero;
use proptest::prelude::*;

use starlift_core::linalg::{
    apply, linear_solve, membership, LinearOutcome, LinearProblem, Membership, SparseVec,
};
use starlift_core::poly::{MultiIndex, Polynomial};
use starlift_core::rat::{rat, Rat};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_poly(dim: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, dim), arb_rat()),
        0..5,
    )
    .prop_map(move |terms| {
        let mut p = Polynomial::zero(dim);
        for (exps, c) in terms {
            p.add_term(MultiIndex(exps), c);
        }
        p
    })
}

fn arb_problem() -> impl Strategy<Value = LinearProblem> {
    (1usize..5, 1usize..5).prop_flat_map(|(rows, cols)| {
        (
            prop::collection::vec(prop::collection::vec(arb_rat(), cols), rows),
            prop::collection::vec(arb_rat(), rows),
        )
            .prop_map(move |(matrix, rhs)| LinearProblem {
                labels: (0..cols).map(|i| format!("u{i}")).collect(),
                rows: matrix
                    .into_iter()
                    .map(|r| {
                        r.into_iter()
                            .enumerate()
                            .filter(|(_, v)| !v.is_zero())
                            .collect::<SparseVec>()
                    })
                    .collect(),
                rhs,
            })
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(3, 2), b in arb_poly(3, 2), c in arb_poly(3, 2)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn mixed_partials_commute(a in arb_poly(3, 3)) {
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(a.partial(i).partial(j), a.partial(j).partial(i));
            }
        }
    }

    #[test]
    fn solver_witnesses_verify(p in arb_problem()) {
        match linear_solve(&p) {
            LinearOutcome::Solution(s) => {
                prop_assert_eq!(apply(&p, &s.particular), p.rhs.clone());
                for k in &s.kernel {
                    prop_assert!(apply(&p, k).iter().all(|v| v.is_zero()));
                }
            }
            LinearOutcome::NoSolution(c) => {
                prop_assert!(!c.row_combination.is_empty());
                // y^T A = 0 and y^T b != 0, exactly
                let cols = p.labels.len();
                let mut yta = vec![Rat::zero(); cols];
                let mut ytb = Rat::zero();
                for (row, w) in &c.row_combination {
                    for (col, v) in &p.rows[*row] {
                        yta[*col] += w * v;
                    }
                    ytb += w * &p.rhs[*row];
                }
                prop_assert!(yta.iter().all(|v| v.is_zero()));
                prop_assert!(!ytb.is_zero());
            }
        }
    }

    #[test]
    fn membership_of_constructed_combination(
        gens in prop::collection::vec(prop::collection::vec(arb_rat(), 4), 1..4),
        coeffs in prop::collection::vec(arb_rat(), 3),
    ) {
        let mut v = vec![Rat::zero(); 4];
        for (g, c) in gens.iter().zip(&coeffs) {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += c * gi;
            }
        }
        match membership(&v, &gens) {
            Membership::InSpan(found) => {
                // the found combination reproduces v exactly
                let mut w = vec![Rat::zero(); 4];
                for (g, c) in gens.iter().zip(&found) {
                    for (wi, gi) in w.iter_mut().zip(g) {
                        *wi += c * gi;
                    }
                }
                prop_assert_eq!(w, v);
            }
            Membership::NotInSpan(_) => prop_assert!(false, "constructed combination must be in span"),
        }
    }
}
