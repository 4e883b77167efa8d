//! Sup norms on the unit ball of ℓ∞ⁿ.
//!
//! Every result is certified from below: `certified_lower` is `|P|` evaluated
//! at high precision at the reported maximizer, and `value` is never smaller.

mod closed;
mod multistart;
mod torus;
mod univariate;

use rug::Float;

use crate::error::{Error, Result};
use crate::poly::HomogeneousPoly;

pub use closed::{p2k_eval, sup_norm_p2k_analytic, sup_norm_pab_closed, sup_norm_qab};
pub use multistart::sup_norm_multistart;
pub use torus::{complex_torus_sup_estimate, DEFAULT_TORUS_GRID};
pub use univariate::{horner_f64, sup_norm_bivariate, univariate_max_abs, univariate_max_abs_f64};

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub grid_points: usize,
    pub newton_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_points: 10_001,
            newton_tol: 1e-14,
            restarts: 64,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 3 {
            return Err(Error::invalid(format!("grid_points must be >= 3, got {}", self.grid_points)));
        }
        if !(self.newton_tol > 0.0) {
            return Err(Error::invalid("newton_tol must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    UnivariateCritical,
    /// Heuristic: the value is certified only as a lower bound.
    MultiStart,
    Analytic,
    /// Exhaustive enumeration of cube vertices (multilinear forms).
    VertexEnumeration,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::UnivariateCritical => "univariate-critical",
            Method::MultiStart => "multistart",
            Method::Analytic => "analytic",
            Method::VertexEnumeration => "vertex-enumeration",
        }
    }

    pub fn is_heuristic(self) -> bool {
        matches!(self, Method::MultiStart)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupNormResult {
    pub value: Float,
    pub maximizer: Vec<f64>,
    pub method: Method,
    pub certified_lower: Float,
}

impl SupNormResult {
    /// Assemble a result from an estimate and a maximizer. The maximizer is
    /// clamped to the cube, `certified_lower` is `|eval(maximizer)|`, and the
    /// value is raised to the certified figure if the estimate fell short.
    pub fn certify<E>(estimate: Float, mut maximizer: Vec<f64>, method: Method, eval: E) -> Result<Self>
    where
        E: FnOnce(&[f64]) -> Result<Float>,
    {
        for x in &mut maximizer {
            *x = x.clamp(-1.0, 1.0);
        }
        let certified_lower = eval(&maximizer)?.abs();
        let value = if estimate < certified_lower {
            certified_lower.clone()
        } else {
            estimate
        };
        Ok(SupNormResult {
            value,
            maximizer,
            method,
            certified_lower,
        })
    }

    pub fn for_poly(p: &HomogeneousPoly, estimate: Float, maximizer: Vec<f64>, method: Method) -> Result<Self> {
        Self::certify(estimate, maximizer, method, |x| p.eval_precise(x))
    }

    pub fn gap(&self) -> Float {
        Float::with_val(self.value.prec(), &self.value - &self.certified_lower)
    }
}

/// Pick the best `(value, point)` pair: larger value first, then the
/// lexicographically smallest point.
pub(crate) fn better(a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)) -> bool {
    match a.0.partial_cmp(&b.0) {
        Some(std::cmp::Ordering::Greater) => true,
        Some(std::cmp::Ordering::Less) => false,
        _ => a.1.iter().zip(&b.1).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y),
    }
}

/// `‖P‖` by the most reliable method available for the shape of `P`.
pub fn sup_norm_auto(p: &HomogeneousPoly, cfg: &OptimizerConfig) -> Result<SupNormResult> {
    match p.n() {
        0 => Err(Error::invalid("polynomial has no variables")),
        1 => {
            // a single monomial a·x^m
            let a = p
                .coefficients()
                .next()
                .map(|c| c.to_float(p.precision().bits()).abs())
                .unwrap_or_else(|| Float::new(p.precision().bits()));
            SupNormResult::for_poly(p, a, vec![1.0], Method::ClosedForm)
        }
        2 => sup_norm_bivariate(p, cfg),
        _ => sup_norm_multistart(p, cfg),
    }
}
