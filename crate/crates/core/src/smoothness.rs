//! Smoothness indicators of the degree-`r` sub-stencil interpolants.
//!
//! Everything is computed with `h = 1` in local coordinates, so an indicator
//! is a quadratic form in the undivided differences of the data.

use crate::error::{Result, WenoError};
use crate::lagrange::Stencil;
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;

/// Second, third and fourth undivided differences of a sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct UndividedDifferences<T> {
    pub d2: Vec<T>,
    pub d3: Vec<T>,
    pub d4: Vec<T>,
}

fn forward_difference<T: Real>(v: &[T]) -> Vec<T> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// `δ²_j = f_j - 2 f_{j+1} + f_{j+2}`, `δ³_j = δ²_{j+1} - δ²_j`, `δ⁴_j = δ³_{j+1} - δ³_j`.
pub fn undivided_differences<T: Real>(values: &[T]) -> Result<UndividedDifferences<T>> {
    if values.len() < 3 {
        return Err(WenoError::TooShortInput {
            len: values.len(),
            min: 3,
        });
    }
    let two = T::lit(2.0);
    let d2: Vec<T> = values
        .windows(3)
        .map(|w| w[0] - two * w[1] + w[2])
        .collect();
    let d3 = forward_difference(&d2);
    let d4 = forward_difference(&d3);
    Ok(UndividedDifferences { d2, d3, d4 })
}

/// Which derivative orders enter the indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndicatorKind {
    /// Derivatives `1 ..= r-1`, the classical WENO indicator.
    Classical,
    /// Derivatives `2 ..= r`, insensitive to linear data.
    New,
}

impl IndicatorKind {
    pub fn l_min(self) -> usize {
        match self {
            Self::Classical => 1,
            Self::New => 2,
        }
    }

    fn from_l_min(l_min: usize) -> Result<Self> {
        match l_min {
            1 => Ok(Self::Classical),
            2 => Ok(Self::New),
            other => Err(WenoError::InvalidLMin(other)),
        }
    }

    /// Highest derivative order for stencil parameter `r`.
    pub fn l_max(self, r: usize) -> usize {
        match self {
            Self::Classical => r - 1,
            Self::New => r,
        }
    }
}

/// The `r` indicators of one stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSet<T> {
    r: usize,
    kind: IndicatorKind,
    values: Vec<T>,
}

impl<T: Real> IndicatorSet<T> {
    pub fn new(r: usize, kind: IndicatorKind, values: Vec<T>) -> Result<Self> {
        if values.len() != r {
            return Err(WenoError::StencilLength {
                expected: r,
                got: values.len(),
            });
        }
        Ok(Self { r, kind, values })
    }

    /// All indicators of a stencil by quadrature.
    pub fn compute(s: &Stencil<T>, kind: IndicatorKind) -> Result<Self> {
        IndicatorEvaluator::new(s.r(), kind)?.evaluate(s)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> IndicatorKind {
        self.kind
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// Monomial coefficients (ascending) of the interpolant of `values` on the
/// unit-spaced local nodes `first + j - r + 1/2`.
fn monomial_coefficients<T: Real>(r: usize, first: usize, values: &[T]) -> Vec<T> {
    let n = values.len();
    // Newton coefficients for unit spacing: Δ^m f / m!.
    let mut diff = values.to_vec();
    let mut newton = Vec::with_capacity(n);
    let mut factorial = T::one();
    for m in 0..n {
        if m > 0 {
            factorial = factorial * T::from_count(m);
            for j in 0..n - m {
                diff[j] = diff[j + 1] - diff[j];
            }
        }
        newton.push(diff[0] / factorial);
    }
    let node = |j: usize| T::from_count(first + j) - T::from_count(r) + T::lit(0.5);
    let mut coeffs = vec![newton[n - 1]];
    for m in (0..n - 1).rev() {
        // coeffs <- coeffs * (x - node(m)) + newton[m]
        let shift = node(m);
        let mut next = vec![T::zero(); coeffs.len() + 1];
        for (p, &c) in coeffs.iter().enumerate() {
            next[p + 1] = next[p + 1] + c;
            next[p] = next[p] - shift * c;
        }
        next[0] = next[0] + newton[m];
        coeffs = next;
    }
    coeffs
}

fn differentiate<T: Real>(coeffs: &[T]) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(p, &c)| c * T::from_count(p))
        .collect()
}

fn horner<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

/// `(weight, p^(l)(x_q))` for every derivative order and quadrature node.
fn derivative_samples<T: Real>(
    r: usize,
    k: usize,
    sub: &[T],
    l_min: usize,
    l_max: usize,
    gl: &GaussLegendre<T>,
) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut poly = monomial_coefficients(r, k, sub);
    for l in 1..=l_max {
        poly = differentiate(&poly);
        if l < l_min {
            continue;
        }
        for (&x, &w) in gl.nodes().iter().zip(gl.weights()) {
            // Map [-1, 1] onto the central interval [-1/2, 1/2].
            out.push((w * T::lit(0.5), horner(&poly, x * T::lit(0.5))));
        }
    }
    out
}

fn check_k(r: usize, k: usize) -> Result<()> {
    if k >= r {
        return Err(WenoError::IndexOutOfRange {
            what: "sub-stencil",
            index: k as i64,
            min: 0,
            max: r as i64 - 1,
        });
    }
    Ok(())
}

/// `Σ_{l=l_min}^{L} ∫_{-1/2}^{1/2} (d^l p_k^r / dξ^l)² dξ` with `L = r - 1`
/// for `l_min = 1` and `L = r` for `l_min = 2`.
pub fn indicator_quadrature<T: Real>(s: &Stencil<T>, k: usize, l_min: usize) -> Result<T> {
    let kind = IndicatorKind::from_l_min(l_min)?;
    let r = s.r();
    check_k(r, k)?;
    let gl = GaussLegendre::new(r);
    let sub = &s.values()[k..=k + r];
    Ok(derivative_samples(r, k, sub, kind.l_min(), kind.l_max(r), &gl)
        .into_iter()
        .map(|(w, d)| w * d * d)
        .sum())
}

/// Precomputed indicator quadratic forms for a fixed `r` and kind.
///
/// Row `q` of sub-stencil `k` holds the derivative (at one quadrature node,
/// for one derivative order) of every Lagrange basis polynomial, so that
/// `I_k = Σ_q w_q (row_q · f)²`.
#[derive(Debug, Clone)]
pub struct IndicatorEvaluator<T> {
    r: usize,
    kind: IndicatorKind,
    weights: Vec<T>,
    rows: Vec<Vec<Vec<T>>>,
}

impl<T: Real> IndicatorEvaluator<T> {
    pub fn new(r: usize, kind: IndicatorKind) -> Result<Self> {
        if r < 2 {
            return Err(WenoError::UnsupportedOrder {
                what: "smoothness indicator",
                r,
            });
        }
        let gl = GaussLegendre::new(r);
        let (l_min, l_max) = (kind.l_min(), kind.l_max(r));
        let mut weights = Vec::new();
        let mut rows = Vec::with_capacity(r);
        for k in 0..r {
            let mut unit = vec![T::zero(); r + 1];
            let columns: Vec<Vec<(T, T)>> = (0..=r)
                .map(|j| {
                    unit.iter_mut().for_each(|u| *u = T::zero());
                    unit[j] = T::one();
                    derivative_samples(r, k, &unit, l_min, l_max, &gl)
                })
                .collect();
            let count = columns[0].len();
            if k == 0 {
                weights = columns[0].iter().map(|&(w, _)| w).collect();
            }
            rows.push(
                (0..count)
                    .map(|q| columns.iter().map(|c| c[q].1).collect())
                    .collect(),
            );
        }
        Ok(Self {
            r,
            kind,
            weights,
            rows,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> IndicatorKind {
        self.kind
    }

    /// `I_k` for the sub-stencil values `sub = f_k .. f_{k+r}`.
    pub fn indicator(&self, k: usize, sub: &[T]) -> T {
        self.rows[k]
            .iter()
            .zip(&self.weights)
            .map(|(row, &w)| {
                let d: T = row.iter().zip(sub).map(|(&a, &b)| a * b).sum();
                w * d * d
            })
            .sum()
    }

    pub fn evaluate(&self, s: &Stencil<T>) -> Result<IndicatorSet<T>> {
        if s.r() != self.r {
            return Err(WenoError::StencilLength {
                expected: 2 * self.r,
                got: s.values().len(),
            });
        }
        let v = s.values();
        let values = (0..self.r)
            .map(|k| self.indicator(k, &v[k..=k + self.r]))
            .collect();
        Ok(IndicatorSet {
            r: self.r,
            kind: self.kind,
            values,
        })
    }
}

/// The printed closed forms of the new indicator for `r = 3` and `r = 4`.
///
/// Index `k` refers to the differences of the full stencil, i.e. `d2[k]` is
/// the second difference starting at the first node of sub-stencil `k`.
pub fn indicator_closed_form<T: Real>(
    diffs: &UndividedDifferences<T>,
    r: usize,
    k: usize,
) -> Result<T> {
    if r != 3 && r != 4 {
        return Err(WenoError::UnsupportedOrder {
            what: "closed-form indicator",
            r,
        });
    }
    check_k(r, k)?;
    let need = |v: &[T], order: usize| -> Result<T> {
        v.get(k).copied().ok_or(WenoError::TooShortInput {
            len: v.len() + order,
            min: k + order + 1,
        })
    };
    let a = need(&diffs.d2, 2)?;
    let b = need(&diffs.d3, 3)?;
    let q = |n: f64, d: f64| T::lit(n) / T::lit(d);
    if r == 3 {
        let (cb, cab) = match k {
            0 => (q(10.0, 3.0), T::lit(3.0)),
            1 => (q(4.0, 3.0), T::one()),
            _ => (q(4.0, 3.0), -T::one()),
        };
        return Ok(cb * b * b + cab * b * a + a * a);
    }
    let c = need(&diffs.d4, 4)?;
    // (c², b², cb, ca, ba) coefficients; a² always has coefficient 1.
    let (cc, bb, cb, ca, ba) = match k {
        0 => (q(2107.0, 240.0), q(22.0, 3.0), q(27.0, 2.0), q(11.0, 3.0), T::lit(5.0)),
        1 => (q(547.0, 240.0), q(10.0, 3.0), q(19.0, 6.0), q(2.0, 3.0), T::lit(3.0)),
        2 => (q(89.0, 80.0), q(4.0, 3.0), -q(1.0, 6.0), -q(1.0, 3.0), T::one()),
        _ => (q(547.0, 240.0), q(4.0, 3.0), -q(5.0, 2.0), q(2.0, 3.0), -T::one()),
    };
    Ok(cc * c * c + bb * b * b + a * a + cb * c * b + ca * c * a + ba * b * a)
}

/// Which branch of a weight-tree node an indicator is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

fn check_tree_node(r: usize, l: usize, k: usize) -> Result<()> {
    if r < 3 || l < r + 1 || l > 2 * r - 2 {
        return Err(WenoError::IndexOutOfRange {
            what: "tree level",
            index: l as i64,
            min: r as i64 + 1,
            max: 2 * r as i64 - 2,
        });
    }
    if k > 2 * r - 2 - l {
        return Err(WenoError::IndexOutOfRange {
            what: "tree node",
            index: k as i64,
            min: 0,
            max: (2 * r - 2 - l) as i64,
        });
    }
    Ok(())
}

/// Indicator of a tree node branch: `I_k` on the left, `I_{l-(r-1)+k}` on the right.
pub fn paired_indicator<T: Real>(ind: &IndicatorSet<T>, l: usize, k: usize, side: Side) -> Result<T> {
    let r = ind.r;
    check_tree_node(r, l, k)?;
    Ok(match side {
        Side::Left => ind.values[k],
        Side::Right => ind.values[l + 1 + k - r],
    })
}

/// Sum of the indicators of every degree-`r` sub-stencil inside the
/// branch's degree-`l` stencil. Only defined for `r = 3, 4`.
pub fn legacy_summed_indicator<T: Real>(
    ind: &IndicatorSet<T>,
    l: usize,
    k: usize,
    side: Side,
) -> Result<T> {
    let r = ind.r;
    if r != 3 && r != 4 {
        return Err(WenoError::UnsupportedOrder {
            what: "legacy summed indicator",
            r,
        });
    }
    check_tree_node(r, l, k)?;
    let first = match side {
        Side::Left => k,
        Side::Right => k + 1,
    };
    Ok(ind.values[first..=first + (l - r)].iter().copied().sum())
}
