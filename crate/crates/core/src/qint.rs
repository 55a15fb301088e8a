//! Jackson q-integration on the lattice window: definite integrals from
//! zero, improper integrals over the axes, the parity-split fundamental
//! theorems, and integration by parts.
//!
//! A Jackson sum is truncated at the innermost ring that carries a value;
//! the discarded geometric tail is bounded by the last included term times
//! `q/(1-q)` and the bound must stay below the context's truncation
//! threshold (relative to the partial sum).

use num_complex::Complex64;

use crate::error::{QcalcError, Result};
use crate::lattice::{LatticeFn, Parity, Ring};
use crate::qops::{rubin_derivative, rubin_dq};

/// Axis selector for improper integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImproperDomain {
    PositiveAxis,
    NegativeAxis,
    FullLine,
}

/// Residual report of the fundamental theorems for one declared parity.
#[derive(Debug, Clone, Copy)]
pub struct FtcReport {
    pub parity: Parity,
    /// max over interior x of the `∂ ∫_0^x f` identity residual
    pub derivative_of_integral: f64,
    /// max over interior x of the `∫_0^x ∂f` identity residual
    pub integral_of_derivative: f64,
}

impl FtcReport {
    pub fn max_residual(&self) -> f64 {
        self.derivative_of_integral.max(self.integral_of_derivative)
    }
}

/// One-sided truncated geometric sweep: per-ring partial sums
/// `T(k) = sum_{j >= k} q^{j-k} f(sign q^j)` from the innermost valued
/// ring outward, `None` where the inward chain is broken by a missing
/// value. Also returns the innermost included ring.
fn side_sweep(f: &LatticeFn, sign: i8) -> (Vec<Option<Complex64>>, Option<i32>) {
    let lat = f.lattice();
    let q = lat.ctx().q();
    let n = lat.n_rings();
    let mut partial: Vec<Option<Complex64>> = vec![None; n];
    let mut inner_ring = None;
    let mut acc: Option<Complex64> = None;
    for k in (lat.k_min()..=lat.k_max()).rev() {
        let idx = lat.index_of(sign, k).unwrap();
        match (f.get(idx), acc) {
            (Some(v), None) => {
                if inner_ring.is_none() {
                    inner_ring = Some(k);
                }
                acc = Some(v);
            }
            (Some(v), Some(t)) => acc = Some(v + q * t),
            (None, _) => acc = None,
        }
        partial[(k - lat.k_min()) as usize] = acc;
    }
    (partial, inner_ring)
}

/// `q^{k+1} |f(sign q^k)|`: the last included Jackson term times
/// `q/(1-q)`, already divided by the common `x` prefactor.
fn tail_bound_at(f: &LatticeFn, sign: i8, inner_ring: i32) -> f64 {
    let lat = f.lattice();
    let q = lat.ctx().q();
    let idx = lat.index_of(sign, inner_ring).unwrap();
    let v = f.get(idx).map(|v| v.norm()).unwrap_or(0.0);
    q.powi(inner_ring + 1) * v
}

fn check_tail(bound: f64, scale: f64, tol: f64, which: &'static str) -> Result<()> {
    if bound > tol * scale.max(1.0) {
        return Err(QcalcError::TailNotNegligible {
            tail: which,
            bound,
            tol,
        });
    }
    Ok(())
}

/// `∫_0^x f(t) d_q t = x (1-q) sum_{n>=0} q^n f(q^n x)`, truncated at the
/// innermost valued ring with the geometric tail bound enforced.
pub fn jackson_integral(f: &LatticeFn, idx: usize) -> Result<Complex64> {
    let lat = f.lattice();
    match lat.ring(idx) {
        Ring::Zero => Ok(Complex64::new(0.0, 0.0)),
        Ring::Point { sign, k } => {
            let q = lat.ctx().q();
            let (partial, inner) = side_sweep(f, sign);
            let t = partial[(k - lat.k_min()) as usize].ok_or(QcalcError::MissingValue {
                x: lat.point(idx),
            })?;
            let x = lat.point(idx);
            let value = x * (1.0 - q) * t;
            let bound = (1.0 - q) * tail_bound_at(f, sign, inner.unwrap());
            check_tail(bound, value.norm(), lat.ctx().series_tol(), "inner")?;
            Ok(value)
        }
    }
}

/// Profile of `x -> ∫_0^x f` over the whole window. Points whose inward
/// chain is broken become missing. The tail bound is enforced once per
/// side.
pub fn jackson_integral_profile(f: &LatticeFn) -> Result<LatticeFn> {
    let lat = f.lattice();
    let q = lat.ctx().q();
    let tol = lat.ctx().series_tol();
    let mut values: Vec<Option<Complex64>> = vec![None; lat.len()];
    values[lat.zero_index()] = Some(Complex64::new(0.0, 0.0));
    for sign in [-1i8, 1] {
        let (partial, inner) = side_sweep(f, sign);
        if let Some(inner_ring) = inner {
            let bound = (1.0 - q) * tail_bound_at(f, sign, inner_ring);
            check_tail(bound, f.sup_norm(), tol, "inner")?;
        }
        for k in lat.k_min()..=lat.k_max() {
            let idx = lat.index_of(sign, k).unwrap();
            let x = lat.point(idx);
            values[idx] = partial[(k - lat.k_min()) as usize].map(|t| x * (1.0 - q) * t);
        }
    }
    let parity = match f.parity() {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
        Parity::General => Parity::General,
    };
    Ok(LatticeFn::from_values(lat, values, parity))
}

/// `∫_a^b f d_q t = ∫_0^b - ∫_0^a`; antisymmetric under `a <-> b`.
pub fn jackson_integral_ab(f: &LatticeFn, a_idx: usize, b_idx: usize) -> Result<Complex64> {
    Ok(jackson_integral(f, b_idx)? - jackson_integral(f, a_idx)?)
}

/// Improper integral over an axis: the bilateral sum
/// `(1-q) sum_n q^n f(±q^n)` truncated to the window, with both the
/// small-x (`n -> +inf`) and large-x (`n -> -inf`) tails bounded by the
/// same geometric majorant.
pub fn improper_integral(f: &LatticeFn, domain: ImproperDomain) -> Result<Complex64> {
    let lat = f.lattice();
    let q = lat.ctx().q();
    let tol = lat.ctx().series_tol();
    let signs: &[i8] = match domain {
        ImproperDomain::PositiveAxis => &[1],
        ImproperDomain::NegativeAxis => &[-1],
        ImproperDomain::FullLine => &[1, -1],
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sup = 0.0f64;
    for &sign in signs {
        for k in lat.k_min()..=lat.k_max() {
            let idx = lat.index_of(sign, k).unwrap();
            let v = f.require(idx)?;
            let term = q.powi(k) * v;
            sum += term;
            sup = sup.max(term.norm());
        }
    }
    let value = (1.0 - q) * sum;
    let scale = value.norm().max((1.0 - q) * sup);
    for &sign in signs {
        let inner = (1.0 - q) * tail_bound_at(f, sign, lat.k_max());
        check_tail(inner, scale, tol, "small-x")?;
        let outer_idx = lat.index_of(sign, lat.k_min()).unwrap();
        let outer = q.powi(lat.k_min() + 1) * f.require(outer_idx)?.norm() * (1.0 - q);
        check_tail(outer, scale, tol, "large-x")?;
    }
    Ok(value)
}

/// Residuals of the fundamental theorems for the declared parity of `f`.
///
/// For odd `f`:
///   `∂_q ∫_0^x f = q^{-1} f(q^{-1} x)` and
///   `∫_0^x ∂_q f = f(x) - lim f(x q^n)`.
/// For even `f`:
///   `∂_q ∫_0^x f = f(x)` and
///   `∫_0^x ∂_q f = f(q^{-1} x) - lim f(x q^{n-1})`.
///
/// Both identities telescope exactly on the lattice, so the residuals are
/// rounding-level for bounded samples.
pub fn ftc_check(f: &LatticeFn) -> Result<FtcReport> {
    let parity = f.parity();
    if parity == Parity::General {
        return Err(QcalcError::Parity(
            "fundamental-theorem check needs declared parity".into(),
        ));
    }
    let lat = f.lattice();
    let q = lat.ctx().q();
    let primitive = jackson_integral_profile(f)?;
    let derivative = rubin_derivative(f);
    let integral_of_derivative = jackson_integral_profile(&derivative)?;
    let limit = f.limit_at_zero()?;

    let mut res_dint = 0.0f64;
    let mut res_intd = 0.0f64;
    for idx in lat.interior_indices() {
        let (sign, k) = match lat.ring(idx) {
            Ring::Point { sign, k } => (sign, k),
            Ring::Zero => unreachable!(),
        };
        if let Ok(dprim) = rubin_dq(&primitive, idx) {
            let want = match parity {
                Parity::Odd => f.value_at(sign, k - 1)? / q,
                Parity::Even => f.require(idx)?,
                Parity::General => unreachable!(),
            };
            res_dint = res_dint.max((dprim - want).norm());
        }
        if let Some(intd) = integral_of_derivative.get(idx) {
            let want = match parity {
                Parity::Odd => f.require(idx)? - limit,
                Parity::Even => f.value_at(sign, k - 1)? - limit,
                Parity::General => unreachable!(),
            };
            res_intd = res_intd.max((intd - want).norm());
        }
    }
    Ok(FtcReport {
        parity,
        derivative_of_integral: res_dint,
        integral_of_derivative: res_intd,
    })
}

/// Residual of the rule of q-integration by parts on `[-a, a]`:
///
/// `∫_{-a}^{a} ∂f·g - { 2 [f_e(a/q) g_o(a) + f_o(a) g_e(a/q)] - ∫_{-a}^{a} f·∂g }`.
///
/// Note the boundary term samples the even parts at `a/q`, one ring
/// outside `[-a, a]`; the window must include it.
pub fn ibp_residual(f: &LatticeFn, g: &LatticeFn, a_idx: usize) -> Result<Complex64> {
    let lat = f.lattice();
    let (sign, k_a) = match lat.ring(a_idx) {
        Ring::Zero => {
            return Err(QcalcError::Domain(
                "integration endpoint must be positive".into(),
            ))
        }
        Ring::Point { sign, k } => (sign, k),
    };
    if sign < 0 {
        return Err(QcalcError::Domain(
            "integration endpoint must be positive".into(),
        ));
    }
    let neg_a_idx = lat.mirror_index(a_idx);

    let df = rubin_derivative(f);
    let dg = rubin_derivative(g);
    let lhs = jackson_integral_ab(&df.pointwise_mul(g), neg_a_idx, a_idx)?;

    let (fe, fo) = f.parity_decompose();
    let (ge, go) = g.parity_decompose();
    let boundary = 2.0
        * (fe.value_at(1, k_a - 1)? * go.require(a_idx)?
            + fo.require(a_idx)? * ge.value_at(1, k_a - 1)?);
    let rhs = boundary - jackson_integral_ab(&f.pointwise_mul(&dg), neg_a_idx, a_idx)?;
    Ok(lhs - rhs)
}
