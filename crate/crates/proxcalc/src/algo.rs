//! Fixed-point iteration driver, configuration, and result bookkeeping
//! shared by every solver in the crate.

use crate::error::{ProxError, Result};
use crate::point::Point;

/// Solver configuration. The stopping rule is scale-free:
/// `||y_{k+1} - y_k|| <= tol * (1 + ||y_k||)`.
#[derive(Debug, Clone)]
pub struct AlgoConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Initial iterate; `None` means the zero vector of the problem dimension.
    pub y0: Option<Point>,
    /// Run even when the additivity check fails; the result is tagged.
    pub force_unverified: bool,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            tol: 1e-10,
            max_iter: 100_000,
            y0: None,
            force_unverified: false,
        }
    }
}

impl AlgoConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_y0(mut self, y0: Point) -> Self {
        self.y0 = Some(y0);
        self
    }

    pub fn forced(mut self) -> Self {
        self.force_unverified = true;
        self
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(ProxError::InvalidSpec(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(ProxError::InvalidSpec("max_iter must be >= 1".into()));
        }
        if let Some(y0) = &self.y0 {
            if y0.dim() != dim {
                return Err(ProxError::DimensionMismatch {
                    expected: dim,
                    got: y0.dim(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn initial_point(&self, dim: usize) -> Point {
        self.y0.clone().unwrap_or_else(|| Point::zeros(dim))
    }
}

/// Outcome of a fixed-point run. `residual` is the scale-free fixed-point
/// residual of `y_star`; when `converged` it is `<= tol`.
#[derive(Debug, Clone)]
pub struct IterationResult {
    pub y_star: Point,
    pub prox_value: Point,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, scale-free residual)` for every iteration performed.
    pub trace: Vec<(usize, f64)>,
    /// Set when the run was forced past a failed additivity check.
    pub unverified_additivity: bool,
    /// Set by algorithms that carry no convergence guarantee.
    pub heuristic: bool,
    pub warnings: Vec<String>,
}

impl IterationResult {
    /// Error corresponding to a non-converged run.
    pub fn require_converged(&self) -> Result<()> {
        if self.converged {
            Ok(())
        } else {
            Err(ProxError::MaxIterExceeded)
        }
    }
}

pub(crate) struct FixedPointRun {
    pub y_star: Point,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<(usize, f64)>,
}

/// Picard iteration `y <- map(y)` with the scale-free stopping rule.
///
/// The returned point is the one whose fixed-point residual was measured, so
/// `||y_star - map(y_star)|| <= tol * (1 + ||y_star||)` holds on convergence.
/// `accept` is an extra gate evaluated at stopping candidates; rejecting keeps
/// the iteration running (used for the subdifferential inclusion check, which
/// filters out spurious numerical fixed points when the target set is empty).
pub(crate) fn run_fixed_point(
    map: impl Fn(&Point) -> Point,
    y0: Point,
    cfg: &AlgoConfig,
    accept: impl Fn(&Point) -> bool,
) -> FixedPointRun {
    let mut y = y0;
    let mut trace = Vec::new();
    let mut last_rel = f64::INFINITY;
    for k in 1..=cfg.max_iter {
        let y_next = map(&y);
        let step = y_next.dist(&y);
        let rel = step / (1.0 + y.norm());
        trace.push((k, rel));
        last_rel = rel;
        if rel <= cfg.tol && accept(&y) {
            return FixedPointRun {
                y_star: y,
                residual: rel,
                iterations: k,
                converged: true,
                trace,
            };
        }
        y = y_next;
    }
    FixedPointRun {
        y_star: y,
        residual: last_rel,
        iterations: cfg.max_iter,
        converged: false,
        trace,
    }
}
