//! Classical and progressive WENO-2r midpoint interpolation over a grid.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Result, WenoError};
use crate::grid::PointValues;
use crate::lagrange::{full_stencil_value, substencil_value, Stencil};
use crate::scalar::Real;
use crate::smoothness::{IndicatorEvaluator, IndicatorKind, IndicatorSet};
use crate::weights::{
    classical_optimal_weights, final_nonlinear_weights, progressive_optimal_weights, Pairing,
    WeightTreeTrace, WeightVector, WenoParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Fixed optimal weights, then nonlinear weights.
    Classical,
    /// Optimal weights from the nonlinear weight tree, then nonlinear weights.
    Progressive,
    /// The degree `2r - 1` interpolant through the whole stencil.
    LagrangeFull,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Progressive => "progressive",
            Self::LagrangeFull => "lagrange-full",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" => Ok(Self::Classical),
            "progressive" | "new" => Ok(Self::Progressive),
            "lagrange-full" | "lagrange" | "full" => Ok(Self::LagrangeFull),
            _ => Err(WenoError::InvalidParameter(format!(
                "unknown method '{s}' (expected classical, progressive or lagrange-full)"
            ))),
        }
    }
}

/// A method together with everything that parameterizes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodSpec<T> {
    pub method: Method,
    pub params: WenoParams<T>,
    pub pairing: Pairing,
    pub indicator: IndicatorKind,
}

impl<T: Real> MethodSpec<T> {
    /// Defaults: `t = r`, `epsilon = 1e-16`, paired indicators, and the
    /// derivative-2-and-up indicator for both WENO methods.
    pub fn new(method: Method, r: usize) -> Self {
        Self {
            method,
            params: WenoParams::new(r),
            pairing: Pairing::Paired,
            indicator: IndicatorKind::New,
        }
    }

    pub fn classical(r: usize) -> Self {
        Self::new(Method::Classical, r)
    }

    pub fn progressive(r: usize) -> Self {
        Self::new(Method::Progressive, r)
    }

    pub fn lagrange_full(r: usize) -> Self {
        Self::new(Method::LagrangeFull, r)
    }

    pub fn with_params(mut self, params: WenoParams<T>) -> Self {
        self.params = params;
        self
    }

    pub fn with_pairing(mut self, pairing: Pairing) -> Self {
        self.pairing = pairing;
        self
    }

    pub fn with_indicator(mut self, indicator: IndicatorKind) -> Self {
        self.indicator = indicator;
        self
    }

    pub fn r(&self) -> usize {
        self.params.r
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let r = self.params.r;
        if self.method == Method::Progressive {
            if r < 3 {
                return Err(WenoError::UnsupportedOrder {
                    what: "progressive WENO",
                    r,
                });
            }
            if self.pairing == Pairing::LegacySummed && !(3..=4).contains(&r) {
                return Err(WenoError::UnsupportedOrder {
                    what: "legacy summed pairing",
                    r,
                });
            }
        }
        Ok(())
    }
}

/// Every intermediate quantity of one midpoint evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MidpointEvaluation<T> {
    pub value: T,
    /// `p_k^r` at the midpoint, `k = 0 .. r`.
    pub sub_values: Vec<T>,
    pub indicators: Option<IndicatorSet<T>>,
    pub optimal: Option<WeightVector<T>>,
    pub weights: Option<WeightVector<T>>,
    pub trace: Option<WeightTreeTrace<T>>,
}

/// A validated method with its stencil-independent data precomputed.
#[derive(Debug, Clone)]
pub struct Interpolator<T> {
    spec: MethodSpec<T>,
    // Row k: coefficients of f_k .. f_{k+r} in p_k^r at the midpoint.
    sub_rows: Vec<Vec<T>>,
    full_row: Vec<T>,
    indicators: Option<IndicatorEvaluator<T>>,
    optimal: Option<WeightVector<T>>,
}

fn unit_stencil<T: Real>(r: usize, j: usize) -> Stencil<T> {
    let mut v = vec![T::zero(); 2 * r];
    v[j] = T::one();
    Stencil::new(r, v).expect("unit stencil is valid")
}

impl<T: Real> Interpolator<T> {
    pub fn new(spec: MethodSpec<T>) -> Result<Self> {
        spec.validate()?;
        let r = spec.r();
        let units: Vec<Stencil<T>> = (0..2 * r).map(|j| unit_stencil(r, j)).collect();
        let sub_rows = (0..r)
            .map(|k| {
                (k..=k + r)
                    .map(|j| substencil_value(&units[j], k, r))
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let full_row = units.iter().map(full_stencil_value).collect();
        let (indicators, optimal) = match spec.method {
            Method::LagrangeFull => (None, None),
            Method::Classical => (
                Some(IndicatorEvaluator::new(r, spec.indicator)?),
                Some(classical_optimal_weights(r)?),
            ),
            Method::Progressive => (Some(IndicatorEvaluator::new(r, spec.indicator)?), None),
        };
        Ok(Self {
            spec,
            sub_rows,
            full_row,
            indicators,
            optimal,
        })
    }

    pub fn spec(&self) -> &MethodSpec<T> {
        &self.spec
    }

    fn check(&self, s: &Stencil<T>) -> Result<()> {
        let r = self.spec.r();
        if s.r() != r {
            return Err(WenoError::StencilLength {
                expected: 2 * r,
                got: s.values().len(),
            });
        }
        Ok(())
    }

    fn sub_values(&self, v: &[T]) -> Vec<T> {
        self.sub_rows
            .iter()
            .enumerate()
            .map(|(k, row)| row.iter().zip(&v[k..]).map(|(&c, &f)| c * f).sum())
            .collect()
    }

    /// Interpolated value at the stencil's central midpoint.
    pub fn value(&self, s: &Stencil<T>) -> Result<T> {
        self.check(s)?;
        let v = s.values();
        if self.spec.method == Method::LagrangeFull {
            return Ok(self.full_row.iter().zip(v).map(|(&c, &f)| c * f).sum());
        }
        Ok(self.evaluate_checked(s, false)?.value)
    }

    /// Value plus sub-stencil values, indicators and weights.
    pub fn evaluate(&self, s: &Stencil<T>) -> Result<MidpointEvaluation<T>> {
        self.check(s)?;
        self.evaluate_checked(s, true)
    }

    fn evaluate_checked(&self, s: &Stencil<T>, keep_trace: bool) -> Result<MidpointEvaluation<T>> {
        let v = s.values();
        let sub_values = self.sub_values(v);
        let Some(ev) = &self.indicators else {
            let value = self.full_row.iter().zip(v).map(|(&c, &f)| c * f).sum();
            return Ok(MidpointEvaluation {
                value,
                sub_values,
                indicators: None,
                optimal: None,
                weights: None,
                trace: None,
            });
        };
        let ind = ev.evaluate(s)?;
        let params = &self.spec.params;
        let (optimal, trace) = match &self.optimal {
            Some(opt) => (opt.clone(), None),
            None => {
                let (opt, trace) = progressive_optimal_weights(&ind, params, self.spec.pairing)?;
                (opt, keep_trace.then_some(trace))
            }
        };
        let weights = final_nonlinear_weights(&optimal, &ind, params);
        let value = weights
            .as_slice()
            .iter()
            .zip(&sub_values)
            .map(|(&w, &p)| w * p)
            .sum();
        Ok(MidpointEvaluation {
            value,
            sub_values,
            indicators: Some(ind),
            optimal: Some(optimal),
            weights: Some(weights),
            trace,
        })
    }
}

/// One-off evaluation; prefer [`Interpolator`] for repeated use.
pub fn midpoint_value<T: Real>(s: &Stencil<T>, spec: &MethodSpec<T>) -> Result<T> {
    Interpolator::new(*spec)?.value(s)
}

/// Interpolated value at the midpoint of interval `interval`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointSample<T> {
    pub interval: usize,
    pub x: T,
    pub value: T,
}

fn sample_at<T: Real>(pv: &PointValues<T>, it: &Interpolator<T>, i: usize) -> Result<MidpointSample<T>> {
    let r = it.spec.r();
    let s = pv.stencil(i, r)?;
    Ok(MidpointSample {
        interval: i,
        x: pv.grid().midpoint(i)?,
        value: it.value(&s)?,
    })
}

/// All intervals with a full centred stencil, in increasing order, evaluated in parallel.
pub fn interpolate_all_midpoints<T: Real>(
    pv: &PointValues<T>,
    spec: &MethodSpec<T>,
) -> Result<Vec<MidpointSample<T>>> {
    let it = Interpolator::new(*spec)?;
    interpolate_with(pv, &it)
}

/// Same as [`interpolate_all_midpoints`] with a prebuilt interpolator.
pub fn interpolate_with<T: Real>(pv: &PointValues<T>, it: &Interpolator<T>) -> Result<Vec<MidpointSample<T>>> {
    let range = pv.admissible_intervals(it.spec.r())?;
    range
        .into_par_iter()
        .map(|i| sample_at(pv, it, i))
        .collect()
}

/// Single-threaded [`interpolate_with`]; used for timing.
pub fn interpolate_with_serial<T: Real>(
    pv: &PointValues<T>,
    it: &Interpolator<T>,
) -> Result<Vec<MidpointSample<T>>> {
    let range = pv.admissible_intervals(it.spec.r())?;
    range.map(|i| sample_at(pv, it, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;
    use rand::{Rng, SeedableRng};

    fn methods(r: usize) -> Vec<MethodSpec<f64>> {
        let mut v = vec![MethodSpec::classical(r), MethodSpec::lagrange_full(r)];
        if r >= 3 {
            v.push(MethodSpec::progressive(r));
        }
        v
    }

    #[test]
    fn constants_and_degree_r_polynomials() {
        for r in 2..=6 {
            let s = Stencil::new(r, vec![1.25; 2 * r]).unwrap();
            let poly = |x: f64| (0..=r).fold(0.0, |acc, p| acc * x + 1.0 / (p as f64 + 1.0));
            let vals = (0..2 * r).map(|j| poly(j as f64 - r as f64 + 0.5)).collect();
            let sp = Stencil::new(r, vals).unwrap();
            for m in methods(r) {
                assert!((midpoint_value(&s, &m).unwrap() - 1.25).abs() < 1e-14);
                let v = midpoint_value(&sp, &m).unwrap();
                assert!(((v - poly(0.0)) / poly(0.0)).abs() < 1e-12, "{:?}", m.method);
            }
        }
    }

    #[test]
    fn matches_lagrange_module() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let s = Stencil::new(4, (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let it = Interpolator::new(MethodSpec::<f64>::lagrange_full(4)).unwrap();
        assert!((it.value(&s).unwrap() - full_stencil_value(&s)).abs() < 1e-14);
        let e = Interpolator::new(MethodSpec::<f64>::progressive(4)).unwrap().evaluate(&s).unwrap();
        for k in 0..4 {
            assert!((e.sub_values[k] - substencil_value(&s, k, 4).unwrap()).abs() < 1e-14);
        }
        assert!(e.trace.is_some());
    }

    #[test]
    fn counts_outputs() {
        let g = UniformGrid::new(0.0, 1.0, 32).unwrap();
        let pv = PointValues::sample(|x: f64| x.sin(), g).unwrap();
        let out = interpolate_all_midpoints(&pv, &MethodSpec::progressive(3)).unwrap();
        // Stencil x_{i-3} .. x_{i+2} fits for i = 3 ..= 30.
        assert_eq!(out.len(), 28);
        assert_eq!(out[0].interval, 3);
        assert_eq!(out[27].interval, 30);
        let g6 = UniformGrid::new(0.0, 1.0, 6).unwrap();
        let pv6 = PointValues::sample(|x: f64| x, g6).unwrap();
        let out = interpolate_all_midpoints(&pv6, &MethodSpec::classical(3)).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].interval, 3);
        assert_eq!(out[1].interval, 4);
        let g5 = UniformGrid::new(0.0, 1.0, 5).unwrap();
        let pv5 = PointValues::sample(|x: f64| x, g5).unwrap();
        assert!(matches!(
            interpolate_all_midpoints(&pv5, &MethodSpec::classical(3)),
            Err(WenoError::GridTooSmall { .. })
        ));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let g = UniformGrid::new(-1.0, 1.0, 200).unwrap();
        let pv = PointValues::sample(|x: f64| if x < 0.1 { x.cos() } else { 2.0 + x }, g).unwrap();
        let it = Interpolator::new(MethodSpec::progressive(4)).unwrap();
        assert_eq!(interpolate_with(&pv, &it).unwrap(), interpolate_with_serial(&pv, &it).unwrap());
    }

    #[test]
    fn sine_convergence() {
        let err = |j: usize| {
            let g = UniformGrid::new(0.0, 1.0, j).unwrap();
            let pv = PointValues::sample(|x: f64| (3.0 * x).sin(), g).unwrap();
            interpolate_all_midpoints(&pv, &MethodSpec::progressive(3))
                .unwrap()
                .iter()
                .map(|m| (m.value - (3.0 * m.x).sin()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(32) / err(64);
        assert!((ratio.log2() - 6.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn spec_validation() {
        assert!(Interpolator::new(MethodSpec::<f64>::progressive(2)).is_err());
        assert!(Interpolator::new(MethodSpec::<f64>::progressive(5).with_pairing(Pairing::LegacySummed)).is_err());
        assert!(Interpolator::new(MethodSpec::<f64>::classical(2)).is_ok());
        let it = Interpolator::new(MethodSpec::<f64>::classical(3)).unwrap();
        let s = Stencil::new(4, vec![0.0; 8]).unwrap();
        assert!(it.value(&s).is_err());
        assert_eq!("progressive".parse::<Method>().unwrap(), Method::Progressive);
        assert!("weno".parse::<Method>().is_err());
    }
}
