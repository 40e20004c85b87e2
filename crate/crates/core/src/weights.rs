//! Optimal, dyadic and nonlinear weights, including the progressive weight tree.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Result, WenoError};
use crate::scalar::{Field, Real};
use crate::smoothness::{legacy_summed_indicator, paired_indicator, IndicatorSet, Side};

/// Exponent, regularization and stencil size of the nonlinear weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoParams<T> {
    pub r: usize,
    pub t: u32,
    pub epsilon: T,
}

impl<T: Real> WenoParams<T> {
    /// `t = r`, `epsilon = 1e-16`.
    pub fn new(r: usize) -> Self {
        Self {
            r,
            t: r as u32,
            epsilon: T::lit(1e-16),
        }
    }

    pub fn with_t(mut self, t: u32) -> Self {
        self.t = t;
        self
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Smallest exponent sufficient when the data only has jumps in the
    /// function value: `ceil((2r - 1) / 4)`.
    pub fn jump_only_exponent(r: usize) -> u32 {
        ((2 * r - 1).div_ceil(4)) as u32
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(WenoError::UnsupportedOrder { what: "WENO", r: self.r });
        }
        if self.t == 0 {
            return Err(WenoError::InvalidParameter("t must be positive".into()));
        }
        if self.epsilon.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) || !self.epsilon.is_finite() {
            return Err(WenoError::InvalidParameter(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Convex weights over the `r` sub-stencils.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    w: Vec<T>,
}

impl<T: Clone> WeightVector<T> {
    pub fn new(w: Vec<T>) -> Self {
        Self { w }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.w
    }
}

impl<T> std::ops::Index<usize> for WeightVector<T> {
    type Output = T;

    fn index(&self, k: usize) -> &T {
        &self.w[k]
    }
}

/// Aitken coefficients `p_k^{l+1} = left p_k^l + right p_{k+1}^l` at the midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicCoefficient {
    pub l: usize,
    pub k: usize,
    pub left: Ratio<i64>,
    pub right: Ratio<i64>,
}

impl DyadicCoefficient {
    pub fn left_value<T: Field>(&self) -> T {
        T::from_ratio(self.left)
    }

    pub fn right_value<T: Field>(&self) -> T {
        T::from_ratio(self.right)
    }
}

/// `left = (2(l-r+k+1)+1) / (2(l+1))`, `right = (2(r-k)-1) / (2(l+1))`,
/// for `r <= l <= 2r-2` and `0 <= k <= 2r-2-l`.
pub fn dyadic_coefficient(l: usize, k: usize, r: usize) -> Result<DyadicCoefficient> {
    if r < 2 || l < r || l > 2 * r - 2 {
        return Err(WenoError::IndexOutOfRange {
            what: "dyadic level",
            index: l as i64,
            min: r as i64,
            max: 2 * r as i64 - 2,
        });
    }
    if k > 2 * r - 2 - l {
        return Err(WenoError::IndexOutOfRange {
            what: "dyadic offset",
            index: k as i64,
            min: 0,
            max: (2 * r - 2 - l) as i64,
        });
    }
    let (l, k, r) = (l as i64, k as i64, r as i64);
    let den = 2 * (l + 1);
    Ok(DyadicCoefficient {
        l: l as usize,
        k: k as usize,
        left: Ratio::new(2 * (l - r + k + 1) + 1, den),
        right: Ratio::new(2 * (r - k) - 1, den),
    })
}

/// `binom(2r, 2k+1) / 2^(2r-1)` as exact rationals.
pub fn classical_optimal_weights_exact(r: usize) -> Result<Vec<BigRational>> {
    if r < 2 {
        return Err(WenoError::UnsupportedOrder {
            what: "optimal weights",
            r,
        });
    }
    let den = BigInt::one() << (2 * r - 1);
    Ok((0..r)
        .map(|k| {
            let num = binomial(BigInt::from(2 * r), BigInt::from(2 * k + 1));
            BigRational::new(num, den.clone())
        })
        .collect())
}

/// Linear weights making `Σ C_k p_k^r` equal the full-stencil interpolant.
pub fn classical_optimal_weights<T: Real>(r: usize) -> Result<WeightVector<T>> {
    if r < 2 {
        return Err(WenoError::UnsupportedOrder {
            what: "optimal weights",
            r,
        });
    }
    let den = T::lit(2.0).powi(2 * r as i32 - 1);
    Ok(WeightVector::new(
        (0..r)
            .map(|k| T::from_u128(binomial(2 * r as u128, 2 * k as u128 + 1)).unwrap() / den)
            .collect(),
    ))
}

/// Vector `k` expresses `p_k^{r+1}` in terms of the `p_j^r`: `C^r_{k,k}` at
/// slot `k`, `C^r_{k,k+1}` at slot `k + 1`.
pub fn base_vectors<T: Field>(r: usize) -> Result<Vec<Vec<T>>> {
    if r < 3 {
        return Err(WenoError::UnsupportedOrder {
            what: "base vectors",
            r,
        });
    }
    (0..r - 1)
        .map(|k| {
            let c = dyadic_coefficient(r, k, r)?;
            let mut v = vec![T::zero(); r];
            v[k] = c.left_value();
            v[k + 1] = c.right_value();
            Ok(v)
        })
        .collect()
}

fn axpy<T: Field>(a: T, x: &[T], b: T, y: &[T]) -> Vec<T> {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| a.clone() * xi.clone() + b.clone() * yi.clone())
        .collect()
}

/// Pair weights of every tree level, `levels[n][k]` for node `(r+1+n, k)`.
pub type TreeLevels<T> = Vec<Vec<(T, T)>>;

/// Evaluates the weight tree bottom-up.
///
/// Level `r` holds the base vectors. For `l = r+1 ..= 2r-2`, node `(l, k)`
/// combines nodes `(l-1, k)` and `(l-1, k+1)` with the pair returned by
/// `pair(l, k, coefficient)`. The root `(2r-2, 0)` is returned with every
/// level's pairs.
pub fn combine_tree<T, F>(r: usize, mut pair: F) -> Result<(Vec<T>, TreeLevels<T>)>
where
    T: Field,
    F: FnMut(usize, usize, &DyadicCoefficient) -> Result<(T, T)>,
{
    let mut level = base_vectors::<T>(r)?;
    let mut pairs = Vec::with_capacity(r - 2);
    for l in r + 1..=2 * r - 2 {
        let mut next = Vec::with_capacity(level.len() - 1);
        let mut at_level = Vec::with_capacity(level.len() - 1);
        for k in 0..level.len() - 1 {
            let c = dyadic_coefficient(l, k, r)?;
            let (wl, wr) = pair(l, k, &c)?;
            next.push(axpy(wl.clone(), &level[k], wr.clone(), &level[k + 1]));
            at_level.push((wl, wr));
        }
        pairs.push(at_level);
        level = next;
    }
    debug_assert_eq!(level.len(), 1);
    Ok((level.swap_remove(0), pairs))
}

/// The tree with every pair weight replaced by its dyadic coefficient.
pub fn constant_tree_weights<T: Field>(r: usize) -> Result<Vec<T>> {
    combine_tree(r, |_, _, c| Ok((c.left_value(), c.right_value()))).map(|(v, _)| v)
}

/// Normalized `(c_L/(ε+I_L)^t, c_R/(ε+I_R)^t)`.
///
/// Each `ε + I` is divided by the smaller of the two before the power is
/// taken, which leaves the normalized result unchanged and avoids underflow.
pub fn pair_nonlinear_weights<T: Real>(
    c_left: T,
    c_right: T,
    i_left: T,
    i_right: T,
    params: &WenoParams<T>,
) -> (T, T) {
    if i_left == i_right {
        return (c_left, c_right);
    }
    let dl = params.epsilon + i_left;
    let dr = params.epsilon + i_right;
    let m = dl.min(dr);
    let al = c_left * (m / dl).powi(params.t as i32);
    let ar = c_right * (m / dr).powi(params.t as i32);
    let s = al + ar;
    (al / s, ar / s)
}

/// How a tree node picks its two indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Pairing {
    /// Extreme sub-stencil indicators of each branch.
    #[default]
    Paired,
    /// Sums of all covered indicators; `r = 3, 4` only.
    LegacySummed,
}

/// Pair weights per tree level and the resulting optimal vector.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTreeTrace<T> {
    /// `levels[n]` holds the pairs of level `r + 1 + n`, indexed by `k`.
    pub levels: Vec<Vec<(T, T)>>,
    pub optimal: WeightVector<T>,
}

impl<T> WeightTreeTrace<T> {
    /// Pair weights `(ω_{k,k}, ω_{k,k+1})` at tree node `(l, k)`.
    pub fn pair(&self, r: usize, l: usize, k: usize) -> Option<&(T, T)> {
        l.checked_sub(r + 1)
            .and_then(|n| self.levels.get(n))
            .and_then(|lv| lv.get(k))
    }
}

/// Progressive optimal weights: the weight tree with data-dependent pairs.
pub fn progressive_optimal_weights<T: Real>(
    ind: &IndicatorSet<T>,
    params: &WenoParams<T>,
    pairing: Pairing,
) -> Result<(WeightVector<T>, WeightTreeTrace<T>)> {
    let r = ind.r();
    if r < 3 {
        return Err(WenoError::UnsupportedOrder {
            what: "progressive weights",
            r,
        });
    }
    if params.r != r {
        return Err(WenoError::InvalidParameter(format!(
            "parameters for r = {} used with r = {} indicators",
            params.r, r
        )));
    }
    let pick = match pairing {
        Pairing::Paired => paired_indicator::<T>,
        Pairing::LegacySummed => legacy_summed_indicator::<T>,
    };
    let (root, levels) = combine_tree(r, |l, k, c| {
        let il = pick(ind, l, k, Side::Left)?;
        let ir = pick(ind, l, k, Side::Right)?;
        Ok(pair_nonlinear_weights(
            c.left_value(),
            c.right_value(),
            il,
            ir,
            params,
        ))
    })?;
    let optimal = WeightVector::new(root);
    Ok((
        optimal.clone(),
        WeightTreeTrace { levels, optimal },
    ))
}

/// `ω_k ∝ optimal_k / (ε + I_k)^t`, with zero optimal slots kept at zero.
pub fn final_nonlinear_weights<T: Real>(
    optimal: &WeightVector<T>,
    ind: &IndicatorSet<T>,
    params: &WenoParams<T>,
) -> WeightVector<T> {
    let c = optimal.as_slice();
    let iv = ind.values();
    if iv.windows(2).all(|w| w[0] == w[1]) {
        return optimal.clone();
    }
    let m = c
        .iter()
        .zip(iv)
        .filter(|(ck, _)| **ck > T::zero())
        .map(|(_, &i)| params.epsilon + i)
        .fold(T::infinity(), T::min);
    let alpha: Vec<T> = c
        .iter()
        .zip(iv)
        .map(|(&ck, &i)| {
            if ck == T::zero() {
                T::zero()
            } else {
                ck * (m / (params.epsilon + i)).powi(params.t as i32)
            }
        })
        .collect();
    let s: T = alpha.iter().copied().sum();
    WeightVector::new(alpha.into_iter().map(|a| a / s).collect())
}

/// Exact rational variant of [`constant_tree_weights`] for tests and inspection.
pub fn constant_tree_weights_exact(r: usize) -> Result<Vec<BigRational>> {
    let v = constant_tree_weights::<BigRational>(r)?;
    debug_assert!(v.iter().all(|x| !x.is_zero()));
    Ok(v)
}
