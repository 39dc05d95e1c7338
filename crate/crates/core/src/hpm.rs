//! Order-k linear solves of the homotopy-perturbation expansion.
//!
//! Expanding the homotopy in powers of the embedding parameter reduces each
//! order to either `u'''' = r` with four boundary conditions (momentum) or
//! `u'' = r` with two (energy and concentration), where `r` is a polynomial
//! built from lower orders. Both are solved exactly: integrate `r` with zero
//! constants, then fit the homogeneous part to the boundary conditions.

use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;

/// Values and slopes at both ends, for `u'''' = r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourPointBc {
    pub value0: f64,
    pub slope0: f64,
    pub value1: f64,
    pub slope1: f64,
}

impl FourPointBc {
    pub const HOMOGENEOUS: FourPointBc = FourPointBc {
        value0: 0.0,
        slope0: 0.0,
        value1: 0.0,
        slope1: 0.0,
    };
}

/// Values at both ends, for `u'' = r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointBc {
    pub value0: f64,
    pub value1: f64,
}

impl TwoPointBc {
    pub const HOMOGENEOUS: TwoPointBc = TwoPointBc {
        value0: 0.0,
        value1: 0.0,
    };
}

/// Solves `u'''' = rhs` on `[0, 1]` subject to `bc`.
///
/// `u = P + c₃η³ + c₂η² + c₁η + c₀` where `P` is the fourfold antiderivative
/// of `rhs` (all terms of degree ≥ 4, so `P(0) = P'(0) = 0`). Then
/// `c₀ = value0`, `c₁ = slope0`, and at η = 1
///
/// ```text
/// c₃ +  c₂ = value1 − P(1)  − c₁ − c₀ =: r₁
/// 3c₃ + 2c₂ = slope1 − P'(1) − c₁      =: r₂
/// ```
///
/// whose matrix has determinant −1, giving `c₃ = r₂ − 2r₁`, `c₂ = 3r₁ − r₂`.
pub fn solve_quartic_term(rhs: &Polynomial, bc: FourPointBc) -> Polynomial {
    let particular = rhs.antiderivative_n(4);
    let c0 = bc.value0;
    let c1 = bc.slope0;
    let r1 = bc.value1 - particular.eval(1.0) - c1 - c0;
    let r2 = bc.slope1 - particular.derivative(1).eval(1.0) - c1;
    let c3 = r2 - 2.0 * r1;
    let c2 = 3.0 * r1 - r2;
    let homogeneous = Polynomial::new(vec![c0, c1, c2, c3]);
    &particular + &homogeneous
}

/// Solves `u'' = rhs` on `[0, 1]` subject to `bc`.
pub fn solve_second_term(rhs: &Polynomial, bc: TwoPointBc) -> Polynomial {
    let particular = rhs.antiderivative_n(2);
    let c0 = bc.value0;
    let c1 = bc.value1 - particular.eval(1.0) - c0;
    &particular + &Polynomial::new(vec![c0, c1])
}

/// Max-abs coefficient of `u^(order) − rhs`.
pub fn residual_norm(u: &Polynomial, order: usize, rhs: &Polynomial) -> f64 {
    (&u.derivative(order) - rhs).max_abs_coeff()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    fn assert_coeffs(u: &Polynomial, expected: &[f64], tol: f64) {
        let n = u.coeffs().len().max(expected.len());
        for i in 0..n {
            let e = expected.get(i).copied().unwrap_or(0.0);
            assert!(
                (u.coeff(i) - e).abs() <= tol,
                "coefficient {i}: {} vs {e} in {u}",
                u.coeff(i)
            );
        }
    }

    fn bc_error4(u: &Polynomial, bc: FourPointBc) -> f64 {
        let du = u.derivative(1);
        [
            u.eval(0.0) - bc.value0,
            du.eval(0.0) - bc.slope0,
            u.eval(1.0) - bc.value1,
            du.eval(1.0) - bc.slope1,
        ]
        .iter()
        .fold(0.0, |m, e| m.max(e.abs()))
    }

    #[test]
    fn quartic_order_zero_momentum() {
        let bc = FourPointBc {
            value0: 1.0,
            slope0: 0.0,
            value1: 0.5,
            slope1: 0.0,
        };
        let u = solve_quartic_term(&Polynomial::zero(), bc);
        assert_coeffs(&u, &[1.0, 0.0, -1.5, 1.0], 1e-15);
    }

    #[test]
    fn quartic_half_suction_is_constant() {
        let bc = FourPointBc {
            value0: 0.5,
            slope0: 0.0,
            value1: 0.5,
            slope1: 0.0,
        };
        let u = solve_quartic_term(&Polynomial::zero(), bc);
        assert_eq!(u, Polynomial::constant(0.5));
    }

    #[test]
    fn quartic_constant_forcing() {
        // ∫⁴24 = η⁴; fitting homogeneous BCs: η⁴ − 2η³ + η² = η²(1 − η)²
        let u = solve_quartic_term(&Polynomial::constant(24.0), FourPointBc::HOMOGENEOUS);
        assert_coeffs(&u, &[0.0, 0.0, 1.0, -2.0, 1.0], 1e-14);
        assert!(residual_norm(&u, 4, &Polynomial::constant(24.0)) <= 1e-10);
        assert!(bc_error4(&u, FourPointBc::HOMOGENEOUS) <= 1e-14);
    }

    #[test]
    fn second_order_examples() {
        let u = solve_second_term(&Polynomial::zero(), TwoPointBc { value0: 1.0, value1: 0.0 });
        assert_eq!(u, p(&[1.0, -1.0]));

        // ∫²2 = η²; u(1) = 0 forces c₁ = −1
        let u = solve_second_term(&Polynomial::constant(2.0), TwoPointBc::HOMOGENEOUS);
        assert_coeffs(&u, &[0.0, -1.0, 1.0], 1e-15);
        assert_eq!(u.eval(0.0), 0.0);
        assert!(u.eval(1.0).abs() < 1e-15);

        let u = solve_second_term(&Polynomial::zero(), TwoPointBc::HOMOGENEOUS);
        assert!(u.is_zero());
    }

    #[test]
    fn residual_examples() {
        let u = p(&[0.0, 0.0, 1.0, -2.0, 1.0]);
        assert!(residual_norm(&u, 4, &Polynomial::constant(24.0)) <= 1e-10);
        assert_eq!(residual_norm(&p(&[1.0, -1.0]), 2, &Polynomial::zero()), 0.0);
        assert_eq!(residual_norm(&Polynomial::monomial(1.0, 2), 2, &Polynomial::zero()), 2.0);
    }

    #[test]
    fn zero_problem_gives_exact_zero() {
        assert!(solve_quartic_term(&Polynomial::zero(), FourPointBc::HOMOGENEOUS).is_zero());
        assert!(solve_second_term(&Polynomial::zero(), TwoPointBc::HOMOGENEOUS).is_zero());
    }

    fn rhs_strategy() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-5.0..5.0_f64, 0..=9).prop_map(Polynomial::new)
    }

    proptest! {
        #[test]
        fn quartic_solution_satisfies_ode_and_bcs(
            rhs in rhs_strategy(),
            v0 in -2.0..2.0_f64, s0 in -2.0..2.0_f64,
            v1 in -2.0..2.0_f64, s1 in -2.0..2.0_f64,
        ) {
            let bc = FourPointBc { value0: v0, slope0: s0, value1: v1, slope1: s1 };
            let u = solve_quartic_term(&rhs, bc);
            prop_assert!(residual_norm(&u, 4, &rhs) <= 1e-9);
            prop_assert!(bc_error4(&u, bc) <= 1e-12);
        }

        #[test]
        fn second_solution_satisfies_ode_and_bcs(
            rhs in rhs_strategy(), v0 in -2.0..2.0_f64, v1 in -2.0..2.0_f64,
        ) {
            let bc = TwoPointBc { value0: v0, value1: v1 };
            let u = solve_second_term(&rhs, bc);
            prop_assert!(residual_norm(&u, 2, &rhs) <= 1e-9);
            prop_assert!((u.eval(0.0) - v0).abs() <= 1e-12);
            prop_assert!((u.eval(1.0) - v1).abs() <= 1e-12);
        }

        #[test]
        fn homogeneous_solves_are_linear(
            r1 in rhs_strategy(), r2 in rhs_strategy(),
            a in -3.0..3.0_f64, b in -3.0..3.0_f64,
        ) {
            let mixed = Polynomial::linear_combination(&r1, a, &r2, b);

            let lhs = solve_quartic_term(&mixed, FourPointBc::HOMOGENEOUS);
            let rhs = Polynomial::linear_combination(
                &solve_quartic_term(&r1, FourPointBc::HOMOGENEOUS), a,
                &solve_quartic_term(&r2, FourPointBc::HOMOGENEOUS), b,
            );
            prop_assert!((&lhs - &rhs).max_abs_coeff() <= 1e-10);

            let lhs = solve_second_term(&mixed, TwoPointBc::HOMOGENEOUS);
            let rhs = Polynomial::linear_combination(
                &solve_second_term(&r1, TwoPointBc::HOMOGENEOUS), a,
                &solve_second_term(&r2, TwoPointBc::HOMOGENEOUS), b,
            );
            prop_assert!((&lhs - &rhs).max_abs_coeff() <= 1e-10);
        }
    }
}
