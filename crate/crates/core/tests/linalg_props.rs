//! Property tests for the exact linear algebra core: Smith form
//! invariants, kernel saturation, and solver correctness on arbitrary
//! small integer matrices, with automatic shrinking of failures.

use kbweights::linalg::{
    cokernel_structure, diagonalize, kernel_basis, smith_normal_form, solve, Coefficients, Matrix,
};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c).prop_map(move |vals| {
            Matrix::from_fn(Coefficients::Integers, r, c, |i, j| {
                num_rational::BigRational::from(num_bigint::BigInt::from(vals[i * c + j]))
            })
        })
    })
}

proptest! {
    #[test]
    fn smith_form_reconstructs(a in small_matrix()) {
        // verify() checks U·A·V = D, unimodularity of the transforms,
        // and the divisor chain; it returns an error instead of
        // panicking so proptest can shrink
        let f = smith_normal_form(&a);
        prop_assert!(f.verify(&a).is_ok());
    }

    #[test]
    fn kernel_is_saturated_and_exact(a in small_matrix()) {
        let k = kernel_basis(&a);
        prop_assert!(a.mul(&k).is_zero());
        // saturation: every rational kernel vector with integer entries
        // is an integer combination of the basis, so solving any basis
        // column scaled by a prime back out of the doubled basis works
        for col in 0..k.cols {
            let v = k.column(col);
            prop_assert!(solve(&k, &v).is_some());
        }
        // rank-nullity over the rationals
        let rank = diagonalize(&a.with_coeff(Coefficients::Rationals)).rank;
        prop_assert_eq!(k.cols + rank, a.cols);
    }

    #[test]
    fn solve_is_sound(a in small_matrix(), x_vals in proptest::collection::vec(-3i64..=3, 1..=4)) {
        // any b in the column lattice is solvable, and the solution
        // reproduces b exactly
        let x = Matrix::from_fn(Coefficients::Integers, a.cols, 1, |i, _| {
            num_rational::BigRational::from(num_bigint::BigInt::from(
                x_vals[i % x_vals.len()],
            ))
        });
        let b = a.mul(&x);
        let s = solve(&a, &b).expect("constructed system must be solvable");
        prop_assert_eq!(a.mul(&s), b);
    }

    #[test]
    fn cokernel_matches_smith_diagonal(a in small_matrix()) {
        // torsion of coker(A) is exactly the nonunit invariant factors
        let f = smith_normal_form(&a);
        let g = cokernel_structure(&a);
        let nonunit: Vec<_> = (0..f.rank)
            .map(|i| f.d.get(i, i).numer().clone())
            .filter(|t| t.magnitude() > &1u32.into())
            .map(|t| if t.sign() == num_bigint::Sign::Minus { -t } else { t })
            .collect();
        prop_assert_eq!(g.torsion, nonunit);
        prop_assert_eq!(g.rank, a.rows - f.rank);
    }
}
