//! Sub-stencil interpolants evaluated at the central midpoint.
//!
//! All evaluation happens in local coordinates centred on `x_{i-1/2}` with
//! `h` scaled out. Nodes of the `2r`-point stencil sit at
//! `xi_j = j - r + 1/2`; we work with the doubled coordinates `2 xi_j`, which
//! are odd integers, so every quantity stays exact in rational arithmetic.

use crate::error::{Result, WenoError};
use crate::scalar::Field;
use crate::weights::dyadic_coefficient;

/// The `2r` point values `f_{i-r}, ..., f_{i+r-1}` around interval `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil<T> {
    r: usize,
    values: Vec<T>,
}

impl<T: Field> Stencil<T> {
    pub fn new(r: usize, values: Vec<T>) -> Result<Self> {
        if r < 2 {
            return Err(WenoError::UnsupportedOrder {
                what: "WENO stencil",
                r,
            });
        }
        if values.len() != 2 * r {
            return Err(WenoError::StencilLength {
                expected: 2 * r,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(WenoError::NonFiniteSample {
                index,
                x: index as f64 - r as f64 + 0.5,
            });
        }
        Ok(Self { r, values })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Mirror image about the midpoint: the stencil of the reflected data.
    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self { r: self.r, values }
    }
}

/// Doubled local coordinate of stencil node `j`: `2j - 2r + 1`.
#[inline]
fn doubled_node(r: usize, j: usize) -> i64 {
    2 * j as i64 - 2 * r as i64 + 1
}

/// Neville recursion on nodes `first .. first + values.len()` evaluated at 0.
fn neville_at_midpoint<T: Field>(r: usize, first: usize, values: &[T]) -> T {
    let mut p = values.to_vec();
    let n = p.len();
    for m in 1..n {
        for j in 0..n - m {
            let lo = doubled_node(r, first + j);
            let hi = doubled_node(r, first + j + m);
            // p_j <- (X_hi p_j - X_lo p_{j+1}) / (X_hi - X_lo)
            let num = T::from_int(hi) * p[j].clone() - T::from_int(lo) * p[j + 1].clone();
            p[j] = num / T::from_int(hi - lo);
        }
    }
    p.swap_remove(0)
}

/// `p_k^degree(x_{i-1/2})`: the degree-`degree` interpolant through the
/// `degree + 1` consecutive nodes starting at stencil offset `k`.
pub fn substencil_value<T: Field>(s: &Stencil<T>, k: usize, degree: usize) -> Result<T> {
    let len = s.values.len();
    if degree == 0 || k + degree + 1 > len {
        return Err(WenoError::InvalidSubstencil { k, degree, len });
    }
    Ok(neville_at_midpoint(s.r, k, &s.values[k..=k + degree]))
}

/// `p_0^{2r-1}(x_{i-1/2})`, the interpolant through all `2r` nodes.
pub fn full_stencil_value<T: Field>(s: &Stencil<T>) -> T {
    neville_at_midpoint(s.r, 0, &s.values)
}

/// `C^l_{k,k} vL + C^l_{k,k+1} vR`, which equals `p_k^{l+1}` when
/// `vL = p_k^l` and `vR = p_{k+1}^l`.
pub fn aitken_combine<T: Field>(vl: T, vr: T, l: usize, k: usize, r: usize) -> Result<T> {
    let c = dyadic_coefficient(l, k, r)?;
    Ok(T::from_ratio(c.left) * vl + T::from_ratio(c.right) * vr)
}

/// The full Neville tableau for one stencil: `value(k, d) = p_k^d(x_{i-1/2})`
/// for every `d < 2r` and `k + d < 2r`, built in `O(r^2)`.
#[derive(Debug, Clone)]
pub struct NevilleTableau<T> {
    n: usize,
    // Row d holds n - d entries.
    rows: Vec<Vec<T>>,
}

impl<T: Field> NevilleTableau<T> {
    pub fn build(s: &Stencil<T>) -> Self {
        let n = s.values.len();
        let mut rows = Vec::with_capacity(n);
        rows.push(s.values.clone());
        for d in 1..n {
            let prev = &rows[d - 1];
            let row = (0..n - d)
                .map(|k| {
                    let lo = doubled_node(s.r, k);
                    let hi = doubled_node(s.r, k + d);
                    (T::from_int(hi) * prev[k].clone() - T::from_int(lo) * prev[k + 1].clone())
                        / T::from_int(hi - lo)
                })
                .collect();
            rows.push(row);
        }
        Self { n, rows }
    }

    pub fn value(&self, k: usize, degree: usize) -> Option<&T> {
        if degree >= self.n {
            return None;
        }
        self.rows[degree].get(k)
    }

    /// All `p_k^degree` for `k = 0 .. 2r - degree`.
    pub fn row(&self, degree: usize) -> &[T] {
        &self.rows[degree]
    }
}
