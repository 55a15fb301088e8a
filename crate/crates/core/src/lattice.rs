//! Finite window of the q-geometric set `{±q^k} ∪ {0}` and functions
//! sampled on it.
//!
//! The window covers ring exponents `k_min ..= k_max`. Operators that need
//! `x/q` are undefined on the outermost ring and operators that need `qx`
//! are undefined on the innermost ring; such points carry no value and
//! downstream operations reject them loudly instead of extrapolating.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::{QcalcError, Result};

/// Declared parity of a sampled function. The caller declares it, the
/// library verifies it; operators that dispatch on parity refuse `General`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    General,
}

/// Position of a lattice index: either the origin or a signed ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Zero,
    /// `sign * q^k` with `sign` in `{-1, +1}`.
    Point { sign: i8, k: i32 },
}

/// Symmetric finite window of the q-geometric set.
#[derive(Debug, Clone)]
pub struct QLattice {
    ctx: QContext,
    k_min: i32,
    k_max: i32,
    points: Vec<f64>,
}

impl QLattice {
    /// Build the window `{±q^k : k_min <= k <= k_max} ∪ {0}` with points
    /// stored in increasing order. The window has `2(k_max-k_min+1) + 1`
    /// points.
    pub fn new(ctx: QContext, k_min: i32, k_max: i32) -> Result<Arc<Self>> {
        if k_min > k_max {
            return Err(QcalcError::Domain(format!(
                "lattice window requires k_min <= k_max, got [{k_min}, {k_max}]"
            )));
        }
        let n = (k_max - k_min + 1) as usize;
        let mut points = Vec::with_capacity(2 * n + 1);
        for k in k_min..=k_max {
            points.push(-ctx.q_pow(k));
        }
        points.push(0.0);
        for k in (k_min..=k_max).rev() {
            points.push(ctx.q_pow(k));
        }
        Ok(Arc::new(Self {
            ctx,
            k_min,
            k_max,
            points,
        }))
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_max
    }

    /// Number of rings per side.
    pub fn n_rings(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn zero_index(&self) -> usize {
        self.n_rings()
    }

    pub fn point(&self, idx: usize) -> f64 {
        self.points[idx]
    }

    /// Ring decomposition of an index.
    pub fn ring(&self, idx: usize) -> Ring {
        let n = self.n_rings();
        if idx == n {
            Ring::Zero
        } else if idx < n {
            Ring::Point {
                sign: -1,
                k: self.k_min + idx as i32,
            }
        } else {
            Ring::Point {
                sign: 1,
                k: self.k_max - (idx - n - 1) as i32,
            }
        }
    }

    /// Index of `sign * q^k`, if that ring is inside the window.
    pub fn index_of(&self, sign: i8, k: i32) -> Option<usize> {
        if k < self.k_min || k > self.k_max {
            return None;
        }
        let n = self.n_rings();
        Some(if sign < 0 {
            (k - self.k_min) as usize
        } else {
            n + 1 + (self.k_max - k) as usize
        })
    }

    /// Index holding `q^dk * x_idx` (the origin is a fixed point).
    pub fn shift_index(&self, idx: usize, dk: i32) -> Option<usize> {
        match self.ring(idx) {
            Ring::Zero => Some(idx),
            Ring::Point { sign, k } => self.index_of(sign, k + dk),
        }
    }

    /// Index of `-x_idx`.
    pub fn mirror_index(&self, idx: usize) -> usize {
        self.points.len() - 1 - idx
    }

    /// Indices whose one-step neighbours `qx` and `x/q` are both inside
    /// the window (plus the origin), i.e. where the five-point operator
    /// is evaluable.
    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| match self.ring(i) {
            Ring::Zero => false,
            Ring::Point { k, .. } => k > self.k_min && k < self.k_max,
        })
    }

    fn same_window(&self, other: &QLattice) -> bool {
        self.k_min == other.k_min && self.k_max == other.k_max && self.ctx == other.ctx
    }
}

/// Direction of the one-step shift operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `x -> f(qx)`
    Forward,
    /// `x -> f(x/q)`
    Backward,
}

/// A complex-valued function sampled on a [`QLattice`], with a declared
/// parity and missing-value bookkeeping at window boundaries.
#[derive(Debug, Clone)]
pub struct LatticeFn {
    lattice: Arc<QLattice>,
    values: Vec<Option<Complex64>>,
    parity: Parity,
    parity_downgraded: bool,
    q_regular: bool,
}

impl LatticeFn {
    /// Sample `expr` at every lattice point. The declared `parity_hint` is
    /// validated against the samples; a violation beyond relative 1e-10
    /// downgrades the tag to `General` (query [`LatticeFn::parity_downgraded`]).
    pub fn sample<F>(expr: F, lattice: &Arc<QLattice>, parity_hint: Parity) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let values: Vec<Option<Complex64>> = lattice
            .points()
            .iter()
            .map(|&x| {
                let v = expr(x);
                if v.re.is_nan() || v.im.is_nan() {
                    Err(QcalcError::Evaluation(format!(
                        "expression returned NaN at x = {x}"
                    )))
                } else {
                    Ok(Some(v))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self::from_values(lattice, values, parity_hint))
    }

    /// Wrap precomputed values. Parity is validated as in [`LatticeFn::sample`].
    pub fn from_values(
        lattice: &Arc<QLattice>,
        values: Vec<Option<Complex64>>,
        parity_hint: Parity,
    ) -> Self {
        assert_eq!(values.len(), lattice.len(), "value vector length mismatch");
        let mut f = Self {
            lattice: Arc::clone(lattice),
            values,
            parity: parity_hint,
            parity_downgraded: false,
            q_regular: true,
        };
        if parity_hint != Parity::General && !f.parity_holds(parity_hint, 1e-10) {
            f.parity = Parity::General;
            f.parity_downgraded = true;
        }
        f.q_regular = f.check_q_regular();
        f
    }

    /// Constant function (even parity).
    pub fn constant(lattice: &Arc<QLattice>, v: Complex64) -> Self {
        Self::from_values(lattice, vec![Some(v); lattice.len()], Parity::Even)
    }

    pub fn lattice(&self) -> &Arc<QLattice> {
        &self.lattice
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// True when the declared parity hint was violated by the samples.
    pub fn parity_downgraded(&self) -> bool {
        self.parity_downgraded
    }

    /// True when the innermost rings stabilize toward the stored zero value.
    pub fn q_regular(&self) -> bool {
        self.q_regular
    }

    pub fn get(&self, idx: usize) -> Option<Complex64> {
        self.values[idx]
    }

    /// Value at `sign * q^k`; `MissingValue` if outside the window or unset.
    pub fn value_at(&self, sign: i8, k: i32) -> Result<Complex64> {
        let idx = self
            .lattice
            .index_of(sign, k)
            .ok_or(QcalcError::MissingValue {
                x: (sign as f64) * self.lattice.ctx().q_pow(k),
            })?;
        self.require(idx)
    }

    /// Value at index `idx`; `MissingValue` if unset.
    pub fn require(&self, idx: usize) -> Result<Complex64> {
        self.values[idx].ok_or(QcalcError::MissingValue {
            x: self.lattice.point(idx),
        })
    }

    /// The stored value at the origin.
    pub fn value_at_zero(&self) -> Option<Complex64> {
        self.values[self.lattice.zero_index()]
    }

    /// The q-regular limit at zero: the stored origin value when present,
    /// otherwise a Richardson step over the two innermost available rings.
    /// Fails with `NotQRegular` when the ring sequence does not stabilize.
    pub fn limit_at_zero(&self) -> Result<Complex64> {
        if let Some(v) = self.value_at_zero() {
            if self.q_regular {
                return Ok(v);
            }
        }
        let q = self.lattice.ctx().q();
        // innermost two rings on the positive side with values
        let mut inner = Vec::new();
        for k in (self.lattice.k_min()..=self.lattice.k_max()).rev() {
            if let Some(idx) = self.lattice.index_of(1, k) {
                if let Some(v) = self.values[idx] {
                    inner.push(v);
                    if inner.len() == 3 {
                        break;
                    }
                }
            }
        }
        if inner.len() < 3 {
            return Err(QcalcError::NotQRegular);
        }
        // f(q^n x) = f(0) + c q^n + O(q^{2n}); one Richardson step from the
        // innermost pair, stability checked against the pair one ring out.
        let est1 = (inner[0] - q * inner[1]) / (1.0 - q);
        let est2 = (inner[1] - q * inner[2]) / (1.0 - q);
        let scale = inner[0].norm().max(1.0);
        if (est1 - est2).norm() > 1e-6 * scale {
            return Err(QcalcError::NotQRegular);
        }
        Ok(est1)
    }

    fn check_q_regular(&self) -> bool {
        let Some(v0) = self.value_at_zero() else {
            return true; // nothing to contradict
        };
        let q = self.lattice.ctx().q();
        // three innermost positive-side values, innermost first
        let mut inner = Vec::new();
        for k in (self.lattice.k_min()..=self.lattice.k_max()).rev() {
            if let Some(idx) = self.lattice.index_of(1, k) {
                if let Some(v) = self.values[idx] {
                    inner.push(v);
                    if inner.len() == 3 {
                        break;
                    }
                }
            }
        }
        if inner.len() < 3 {
            return true;
        }
        let d1 = (inner[0] - inner[1]).norm(); // innermost step
        let d2 = (inner[1] - inner[2]).norm();
        // ring differences of a q-regular function shrink toward zero
        if d1 > d2.max(1e-12 * inner[0].norm().max(1.0)) {
            return false;
        }
        // the extrapolated limit must agree with the stored origin value,
        // up to the accuracy attainable with this window depth
        let est = (inner[0] - q * inner[1]) / (1.0 - q);
        let scale = v0.norm().max(1.0);
        let slack = (1e-6 * scale).max(d1 * q / (1.0 - q));
        (est - v0).norm() <= slack
    }

    fn parity_holds(&self, parity: Parity, tol: f64) -> bool {
        let scale = self
            .values
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let zero_ok = match (parity, self.value_at_zero()) {
            (Parity::Odd, Some(v)) => v.norm() <= tol * scale,
            _ => true,
        };
        if !zero_ok {
            return false;
        }
        for idx in 0..self.values.len() {
            let m = self.lattice.mirror_index(idx);
            if m <= idx {
                break;
            }
            if let (Some(a), Some(b)) = (self.values[idx], self.values[m]) {
                let diff = match parity {
                    Parity::Even => (a - b).norm(),
                    Parity::Odd => (a + b).norm(),
                    Parity::General => 0.0,
                };
                if diff > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Even/odd decomposition `f = f_e + f_o`.
    ///
    /// `f_e` is the symmetrized average stored identically at `x` and `-x`,
    /// and `f_o := f - f_e` pointwise, so the parts recompose to `f` bitwise
    /// and carry exact parity.
    pub fn parity_decompose(&self) -> (LatticeFn, LatticeFn) {
        let n = self.values.len();
        let mut even = vec![None; n];
        let mut odd = vec![None; n];
        for idx in 0..n {
            let m = self.lattice.mirror_index(idx);
            if idx == m {
                // origin: f_e(0) = f(0), f_o(0) = 0
                even[idx] = self.values[idx];
                odd[idx] = self.values[idx].map(|v| v - v);
                continue;
            }
            if let (Some(a), Some(b)) = (self.values[idx], self.values[m]) {
                let e = (a + b) / 2.0;
                even[idx] = Some(e);
                odd[idx] = Some(a - e);
            }
        }
        let fe = LatticeFn::from_values(&self.lattice, even, Parity::Even);
        let fo = LatticeFn::from_values(&self.lattice, odd, Parity::Odd);
        (fe, fo)
    }

    /// One-step shift: `Forward` gives `x -> f(qx)`, `Backward` gives
    /// `x -> f(x/q)`. Points whose image leaves the window become missing.
    pub fn shift(&self, direction: ShiftDirection) -> LatticeFn {
        let dk = match direction {
            ShiftDirection::Forward => 1,
            ShiftDirection::Backward => -1,
        };
        let values = (0..self.values.len())
            .map(|idx| {
                self.lattice
                    .shift_index(idx, dk)
                    .and_then(|src| self.values[src])
            })
            .collect();
        LatticeFn::from_values(&self.lattice, values, self.parity)
    }

    /// Pointwise linear combination `alpha * self + beta * other`.
    /// Missing values propagate.
    pub fn linear_combination(&self, alpha: Complex64, other: &LatticeFn, beta: Complex64) -> LatticeFn {
        assert!(
            self.lattice.same_window(&other.lattice),
            "lattice window mismatch"
        );
        let parity = if self.parity == other.parity {
            self.parity
        } else {
            Parity::General
        };
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(alpha * a + beta * b),
                _ => None,
            })
            .collect();
        LatticeFn::from_values(&self.lattice, values, parity)
    }

    /// Pointwise product. Missing values propagate.
    pub fn pointwise_mul(&self, other: &LatticeFn) -> LatticeFn {
        assert!(
            self.lattice.same_window(&other.lattice),
            "lattice window mismatch"
        );
        let parity = match (self.parity, other.parity) {
            (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Odd) => Parity::Even,
            (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even) => Parity::Odd,
            _ => Parity::General,
        };
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            })
            .collect();
        LatticeFn::from_values(&self.lattice, values, parity)
    }

    /// Largest `|f|` over defined points.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// CSV rows `k, x, re(f), im(f)` in point order; the origin row uses
    /// `k = "zero"`. Missing values render as empty fields.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "k,x,re(f),im(f)")?;
        for idx in 0..self.values.len() {
            let x = self.lattice.point(idx);
            let k_field = match self.lattice.ring(idx) {
                Ring::Zero => "zero".to_string(),
                Ring::Point { k, .. } => k.to_string(),
            };
            match self.values[idx] {
                Some(v) => writeln!(
                    out,
                    "{},{},{},{}",
                    k_field,
                    fmt_g17(x),
                    fmt_g17(v.re),
                    fmt_g17(v.im)
                )?,
                None => writeln!(out, "{},{},,", k_field, fmt_g17(x))?,
            }
        }
        Ok(())
    }
}

/// Fixed 17-significant-digit scientific rendering with a lowercase
/// exponent marker; deterministic across runs and platforms.
pub fn fmt_g17(v: f64) -> String {
    format!("{:.16e}", v)
}
