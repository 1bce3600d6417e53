//! JSON schemas for problem files.

use serde::Deserialize;

use proxcalc::catalog::{build, CatalogSpec};
use proxcalc::falsifier::FormulaCandidate;
use proxcalc::interval::DomainBox;
use proxcalc::oracle::GridSpec1d;
use proxcalc::sensitivity::ViProblem;
use proxcalc::{AlgoConfig, ConvexFunction, Point, ProxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum AlgorithmName {
    A1,
    A2,
    DR,
    FB,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    100_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: Option<AlgorithmName>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub y0: Option<Vec<f64>>,
    #[serde(default)]
    pub force: bool,
}

impl Default for AlgorithmSpec {
    fn default() -> Self {
        AlgorithmSpec {
            name: None,
            tol: default_tol(),
            max_iter: default_max_iter(),
            y0: None,
            force: false,
        }
    }
}

impl AlgorithmSpec {
    pub fn to_config(&self, extra_force: bool) -> Result<AlgoConfig, ProxError> {
        let mut cfg = AlgoConfig::default()
            .with_tol(self.tol)
            .with_max_iter(self.max_iter);
        if let Some(y0) = &self.y0 {
            cfg = cfg.with_y0(Point::new(y0.clone())?);
        }
        if self.force || extra_force {
            cfg = cfg.forced();
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn to_grid(self) -> Result<GridSpec1d, ProxError> {
        GridSpec1d::new(self.lo, self.hi, self.step)
    }
}

fn default_set_tol() -> f64 {
    proxcalc::oracle::SET_INFLATION_DEFAULT
}

/// A pairwise problem: two catalog functions, a query point, and solver
/// configuration, plus optional grids for the figure and set oracles.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub space: SpaceSpec,
    pub f: CatalogSpec,
    pub g: CatalogSpec,
    pub x: Vec<f64>,
    #[serde(default)]
    pub algorithm: AlgorithmSpec,
    /// Sweep of query points for `figure`.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Search grid for the 1D set oracle.
    #[serde(default)]
    pub set_grid: Option<GridSpec>,
    #[serde(default = "default_set_tol")]
    pub set_tol: f64,
}

pub struct LoadedProblem {
    pub f: ConvexFunction,
    pub g: ConvexFunction,
    pub x: Point,
    pub spec: ProblemFile,
}

impl ProblemFile {
    pub fn load(&self) -> Result<LoadedProblem, ProxError> {
        let f = build(&self.f)?;
        let g = build(&self.g)?;
        for (what, dim) in [("f", f.dim()), ("g", g.dim()), ("x", self.x.len())] {
            if dim != self.space.dim {
                return Err(ProxError::InvalidSpec(format!(
                    "{what} has dimension {dim}, space.dim is {}",
                    self.space.dim
                )));
            }
        }
        Ok(LoadedProblem {
            f,
            g,
            x: Point::new(self.x.clone())?,
            spec: self.clone(),
        })
    }

    pub fn figure_grid(&self) -> Result<GridSpec1d, ProxError> {
        self.grid
            .unwrap_or(GridSpec {
                lo: -3.0,
                hi: 3.0,
                step: 0.01,
            })
            .to_grid()
    }

    pub fn set_grid(&self) -> Result<GridSpec1d, ProxError> {
        self.set_grid
            .unwrap_or(GridSpec {
                lo: -5.0,
                hi: 5.0,
                step: 1e-3,
            })
            .to_grid()
    }
}

fn default_fd_step() -> f64 {
    1e-4
}

/// A parameterized variational problem over a box.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViFile {
    pub k: BoxSpec,
    pub g: CatalogSpec,
    pub r0: Vec<f64>,
    pub r1: Vec<f64>,
    #[serde(default)]
    pub algorithm: AlgorithmSpec,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    #[serde(with = "proxcalc::catalog::bounds_serde")]
    pub lo: Vec<f64>,
    #[serde(with = "proxcalc::catalog::bounds_serde")]
    pub hi: Vec<f64>,
}

impl ViFile {
    pub fn load(&self) -> Result<ViProblem, ProxError> {
        let k = DomainBox::from_bounds(&self.k.lo, &self.k.hi)?;
        let g = build(&self.g)?;
        ViProblem::new(
            k,
            g,
            Point::new(self.r0.clone())?,
            Point::new(self.r1.clone())?,
        )
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, String> {
    serde_json::from_str(text).map_err(|e| format!("problem file: {e}"))
}

pub fn parse_vi(text: &str) -> Result<ViFile, String> {
    serde_json::from_str(text).map_err(|e| format!("vi file: {e}"))
}

pub fn parse_candidate(text: &str) -> Result<FormulaCandidate, String> {
    let c: FormulaCandidate =
        serde_json::from_str(text).map_err(|e| format!("candidate file: {e}"))?;
    c.validate().map_err(|e| format!("candidate file: {e}"))?;
    Ok(c)
}
