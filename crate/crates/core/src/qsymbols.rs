//! Basic q-symbols: shifted factorials, brackets, factorials and binomial
//! coefficients. Everything downstream is built on these.
//!
//! All evaluations use double-precision (complex) arithmetic; "exact"
//! identities hold to rounding, which the tests pin at relative 1e-12.

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::{QcalcError, Result};

/// Finite q-shifted factorial `(a; q)_n = prod_{k=0}^{n-1} (1 - a q^k)`.
///
/// The empty product (`n = 0`) is 1.
pub fn q_pochhammer(a: Complex64, n: usize, ctx: &QContext) -> Complex64 {
    let q = ctx.q();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..n {
        prod *= Complex64::new(1.0, 0.0) - a * qk;
        qk *= q;
    }
    prod
}

/// Infinite q-shifted factorial `(a; q)_inf`, truncated once the factor
/// increment `|a q^k|` falls below the context's truncation threshold.
///
/// `max_terms` is a safety cap; hitting it with the increment still above
/// threshold is reported as `TruncationNotConverged`.
pub fn q_pochhammer_inf(a: Complex64, ctx: &QContext) -> Result<Complex64> {
    let q = ctx.q();
    let tol = ctx.series_tol();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut aqk = a;
    for _ in 0..ctx.max_terms() {
        if aqk.norm() < tol {
            return Ok(prod);
        }
        prod *= Complex64::new(1.0, 0.0) - aqk;
        aqk *= q;
    }
    Err(QcalcError::TruncationNotConverged {
        terms: ctx.max_terms(),
        last_increment: aqk.norm(),
    })
}

/// q-bracket `[n]_q = (1 - q^n) / (1 - q) = 1 + q + ... + q^(n-1)`.
pub fn q_bracket(n: usize, ctx: &QContext) -> f64 {
    let q = ctx.q();
    (1.0 - q.powi(n as i32)) / (1.0 - q)
}

/// q-factorial `[n]_q! = prod_{m=1}^{n} [m]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: usize, ctx: &QContext) -> f64 {
    let mut prod = 1.0;
    for m in 1..=n {
        prod *= q_bracket(m, ctx);
    }
    prod
}

/// Gauss q-binomial coefficient `[n k]_q = [n]_q! / ([n-k]_q! [k]_q!)`.
///
/// Computed as a product of bracket ratios so intermediate factorials never
/// appear. Requires `k <= n`.
pub fn q_binomial(n: usize, k: usize, ctx: &QContext) -> Result<f64> {
    if k > n {
        return Err(QcalcError::Domain(format!(
            "q_binomial requires k <= n, got n = {n}, k = {k}"
        )));
    }
    // symmetry in k <-> n-k keeps the loop short
    let k = k.min(n - k);
    let mut prod = 1.0;
    for j in 1..=k {
        prod *= q_bracket(n - k + j, ctx) / q_bracket(j, ctx);
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    fn rel_close(a: Complex64, b: Complex64, tol: f64) -> bool {
        let scale = a.norm().max(b.norm()).max(1.0);
        (a - b).norm() <= tol * scale
    }

    #[test]
    fn pochhammer_empty_product_is_one() {
        let ctx = ctx(0.5);
        assert_eq!(q_pochhammer(c(3.7, -2.0), 0, &ctx), c(1.0, 0.0));
    }

    #[test]
    fn pochhammer_vanishes_when_a_is_one() {
        let ctx = ctx(0.5);
        assert_eq!(q_pochhammer(c(1.0, 0.0), 3, &ctx), c(0.0, 0.0));
    }

    #[test]
    fn pochhammer_two_factor_product() {
        let ctx = ctx(0.5);
        // (1 - 0.5)(1 - 0.5 * 0.5) = 0.5 * 0.75 = 0.375
        let got = q_pochhammer(c(0.5, 0.0), 2, &ctx);
        assert!(rel_close(got, c(0.375, 0.0), 1e-15));
    }

    #[test]
    fn pochhammer_inf_at_zero_is_one() {
        let ctx = ctx(0.5);
        assert_eq!(q_pochhammer_inf(c(0.0, 0.0), &ctx).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn pochhammer_inf_leading_zero_factor() {
        let ctx = ctx(0.5);
        let got = q_pochhammer_inf(c(1.0, 0.0), &ctx).unwrap();
        assert_eq!(got, c(0.0, 0.0));
    }

    #[test]
    fn pochhammer_inf_matches_long_direct_product() {
        let ctx = ctx(0.5);
        let a = c(0.5, 0.0);
        let brute = q_pochhammer(a, 200, &ctx);
        let got = q_pochhammer_inf(a, &ctx).unwrap();
        assert!(rel_close(got, brute, 1e-13));
    }

    #[test]
    fn pochhammer_inf_reports_term_cap() {
        let ctx = QContext::with_policy(0.9999, 1e-14, 20).unwrap();
        let err = q_pochhammer_inf(c(0.5, 0.0), &ctx).unwrap_err();
        assert!(matches!(err, QcalcError::TruncationNotConverged { .. }));
    }

    #[test]
    fn bracket_small_values() {
        let ctx = ctx(0.5);
        assert_eq!(q_bracket(0, &ctx), 0.0);
        assert_eq!(q_bracket(1, &ctx), 1.0);
        // 1 + 0.5 + 0.25
        assert!((q_bracket(3, &ctx) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn bracket_tends_to_n_as_q_tends_to_one() {
        let ctx = ctx(0.999);
        for n in 1..=10 {
            assert!((q_bracket(n, &ctx) - n as f64).abs() < 0.01 * n as f64);
        }
    }

    #[test]
    fn factorial_small_values() {
        let ctx = ctx(0.5);
        assert_eq!(q_factorial(0, &ctx), 1.0);
        assert!((q_factorial(2, &ctx) - 1.5).abs() < 1e-15);
        assert!((q_factorial(3, &ctx) - 2.625).abs() < 1e-15);
    }

    #[test]
    fn factorial_equals_pochhammer_over_power() {
        // [n]_q! = (q; q)_n / (1-q)^n
        for &q in &[0.3, 0.5, 0.9] {
            let ctx = ctx(q);
            for n in 0..=12 {
                let lhs = q_factorial(n, &ctx);
                let rhs = q_pochhammer(c(q, 0.0), n, &ctx).re / (1.0 - q).powi(n as i32);
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                    "q={q} n={n}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn inverted_base_factorial_rescaling() {
        // Direct-product oracle: [n]_{1/q}! = q^{-n(n-1)/2} [n]_q!.
        // (The bracket version [n]_{1/q} = q^{1-n} [n]_q telescopes into it.)
        for &q in &[0.3f64, 0.5, 0.9] {
            for n in 0..=8i32 {
                let mut lhs = 1.0;
                let qinv = 1.0 / q;
                for m in 1..=n {
                    lhs *= (1.0 - qinv.powi(m)) / (1.0 - qinv);
                }
                let ctx = ctx(q);
                let rhs = q.powi(-(n * (n - 1)) / 2) * q_factorial(n as usize, &ctx);
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                    "q={q} n={n}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn binomial_edges_and_symmetry() {
        let ctx = ctx(0.5);
        assert_eq!(q_binomial(5, 0, &ctx).unwrap(), 1.0);
        assert_eq!(q_binomial(5, 5, &ctx).unwrap(), 1.0);
        // [2 1]_q = 1 + q
        assert!((q_binomial(2, 1, &ctx).unwrap() - 1.5).abs() < 1e-15);
        assert!(q_binomial(3, 4, &ctx).is_err());
    }

    #[test]
    fn binomial_matches_pochhammer_ratio() {
        // [n k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k})
        let ctx = ctx(0.5);
        let qq = |n: usize| q_pochhammer(c(0.5, 0.0), n, &ctx).re;
        let want = qq(4) / (qq(2) * qq(2));
        let got = q_binomial(4, 2, &ctx).unwrap();
        assert!((got - want).abs() <= 1e-12 * want.abs());
    }

    #[test]
    fn binomial_theorem_at_fixed_points() {
        // (-a; q)_n = sum_k [n k]_q q^{k(k-1)/2} a^k
        for &q in &[0.3, 0.5, 0.9] {
            let ctx = ctx(q);
            for a in [c(0.3, 0.0), c(1.0, 0.0), c(2.0, 1.0)] {
                for n in 0..=6usize {
                    let lhs = q_pochhammer(-a, n, &ctx);
                    let mut rhs = c(0.0, 0.0);
                    for k in 0..=n {
                        let e = (k * k.wrapping_sub(1)) / 2; // k(k-1)/2, k>=0
                        rhs += q_binomial(n, k, &ctx).unwrap()
                            * q.powi(e as i32)
                            * a.powu(k as u32);
                    }
                    assert!(rel_close(lhs, rhs, 1e-12), "q={q} a={a} n={n}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn binomial_symmetry_property(n in 0usize..=16, k in 0usize..=16, qi in 1u32..=9) {
            prop_assume!(k <= n);
            let q = qi as f64 / 10.0;
            let ctx = ctx(q);
            let a = q_binomial(n, k, &ctx).unwrap();
            let b = q_binomial(n, n - k, &ctx).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn pochhammer_recurrence_property(n in 1usize..=30, qi in 1u32..=9, are in -2.0f64..2.0, aim in -2.0f64..2.0) {
            // (a;q)_{n} = (a;q)_{n-1} * (1 - a q^{n-1})
            let q = qi as f64 / 10.0;
            let ctx = ctx(q);
            let a = c(are, aim);
            let lhs = q_pochhammer(a, n, &ctx);
            let rhs = q_pochhammer(a, n - 1, &ctx) * (c(1.0, 0.0) - a * q.powi((n - 1) as i32));
            prop_assert!(rel_close(lhs, rhs, 1e-12));
        }
    }
}
