//! Uniform partitions of `[a, b]` and point-value samples on them.

use crate::error::{Result, WenoError};
use crate::lagrange::Stencil;
use crate::scalar::Real;

/// Uniform partition `x_i = a + i h`, `i = 0..=J`, with `h = (b - a) / J`.
///
/// The interval count is authoritative; `h` is derived once at construction
/// and nodes are always formed as `a + i * h`, never by accumulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid<T> {
    a: T,
    b: T,
    intervals: usize,
    h: T,
}

impl<T: Real> UniformGrid<T> {
    pub fn new(a: T, b: T, intervals: usize) -> Result<Self> {
        if intervals == 0 || b.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) || !a.is_finite() || !b.is_finite() {
            return Err(WenoError::InvalidDomain {
                a: a.as_f64(),
                b: b.as_f64(),
                intervals,
            });
        }
        let width = b - a;
        let h = width / T::from_count(intervals);
        let tol = T::lit(1e-14).max(T::epsilon() * T::lit(8.0)) * width;
        debug_assert!((h * T::from_count(intervals) - width).abs() <= tol);
        Ok(Self { a, b, intervals, h })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Number of subintervals `J`.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn spacing(&self) -> T {
        self.h
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a + i h`. The caller keeps `i <= J`.
    #[inline]
    pub fn node(&self, i: usize) -> T {
        self.a + T::from_count(i) * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..=self.intervals).map(move |i| self.node(i))
    }

    /// Midpoint `x_{i-1/2}` of the interval `(x_{i-1}, x_i)`, `1 <= i <= J`.
    pub fn midpoint(&self, i: usize) -> Result<T> {
        if i == 0 || i > self.intervals {
            return Err(WenoError::IndexOutOfRange {
                what: "interval",
                index: i as i64,
                min: 1,
                max: self.intervals as i64,
            });
        }
        Ok(self.a + (T::from_count(i) - T::lit(0.5)) * self.h)
    }
}

/// Samples `f_i = f(x_i)` on every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PointValues<T> {
    grid: UniformGrid<T>,
    values: Vec<T>,
}

impl<T: Real> PointValues<T> {
    /// Evaluates `f` on every node, rejecting NaN or infinite samples.
    pub fn sample<F>(f: F, grid: UniformGrid<T>) -> Result<Self>
    where
        F: Fn(T) -> T,
    {
        let values = grid.nodes().map(f).collect();
        Self::from_values(grid, values)
    }

    pub fn from_values(grid: UniformGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(WenoError::StencilLength {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(WenoError::NonFiniteSample {
                index,
                x: grid.node(index).as_f64(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &UniformGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Range of intervals `i` whose full stencil `x_{i-r} .. x_{i+r-1}` fits the grid.
    pub fn admissible_intervals(&self, r: usize) -> Result<std::ops::RangeInclusive<usize>> {
        let j = self.grid.intervals();
        if r < 1 || j < 2 * r {
            return Err(WenoError::GridTooSmall {
                intervals: j,
                needed: 2 * r,
            });
        }
        Ok(r..=j + 1 - r)
    }

    /// The `2r` values centred on interval `i`.
    pub fn stencil(&self, i: usize, r: usize) -> Result<Stencil<T>> {
        let range = self.admissible_intervals(r)?;
        if !range.contains(&i) {
            return Err(WenoError::IndexOutOfRange {
                what: "interval",
                index: i as i64,
                min: *range.start() as i64,
                max: *range.end() as i64,
            });
        }
        Stencil::new(r, self.values[i - r..i + r].to_vec())
    }
}
