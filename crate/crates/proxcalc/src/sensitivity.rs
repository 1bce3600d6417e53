//! Sensitivity analysis of the parameterized problem `u(t) = prox_{f+g}(r(t))`
//! with `f` the indicator of a box `K`, `g` twice differentiable, and
//! `r(t) = r0 + t r1`: critical cones, trajectories, and the directional
//! derivative `u'(0) = prox_{phi + psi}(r1)` with `phi` the indicator of the
//! critical cone and `psi` the local quadratic model of `g`.

use nalgebra::{DMatrix, DVector};

use crate::algo::{AlgoConfig, IterationResult};
use crate::catalog::{build, CatalogSpec};
use crate::convex::ConvexFunction;
use crate::error::{ProxError, Result};
use crate::fprox::{a1_solve, FproxProblem};
use crate::interval::DomainBox;
use crate::point::Point;

/// Finite-difference gap above which the derivative formula is flagged: the
/// check is the empirical stand-in for differentiability of `u` at 0.
pub const FD_WARN_TOL: f64 = 1e-3;

/// Per-coordinate shape of a polyhedral (box-generated) cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeAxis {
    /// Whole line.
    Free,
    /// `[0, +inf)`.
    NonNeg,
    /// `(-inf, 0]`.
    NonPos,
    /// `{0}`.
    Zero,
}

/// A closed convex cone described axis by axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSpec {
    axes: Vec<ConeAxis>,
}

impl ConeSpec {
    pub fn new(axes: Vec<ConeAxis>) -> Self {
        ConeSpec { axes }
    }

    pub fn axes(&self) -> &[ConeAxis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn contains(&self, w: &Point) -> bool {
        w.dim() == self.dim()
            && self
                .axes
                .iter()
                .zip(w.coords())
                .all(|(axis, &c)| match axis {
                    ConeAxis::Free => true,
                    ConeAxis::NonNeg => c >= 0.0,
                    ConeAxis::NonPos => c <= 0.0,
                    ConeAxis::Zero => c == 0.0,
                })
    }

    pub fn project(&self, w: &Point) -> Point {
        let coords = self
            .axes
            .iter()
            .zip(w.coords())
            .map(|(axis, &c)| match axis {
                ConeAxis::Free => c,
                ConeAxis::NonNeg => c.max(0.0),
                ConeAxis::NonPos => c.min(0.0),
                ConeAxis::Zero => 0.0,
            })
            .collect();
        Point::new(coords).expect("projection of finite point is finite")
    }

    /// The cone as a box, for building its indicator function.
    pub fn as_box_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for axis in &self.axes {
            match axis {
                ConeAxis::Free => {
                    lo.push(f64::NEG_INFINITY);
                    hi.push(f64::INFINITY);
                }
                ConeAxis::NonNeg => {
                    lo.push(0.0);
                    hi.push(f64::INFINITY);
                }
                ConeAxis::NonPos => {
                    lo.push(f64::NEG_INFINITY);
                    hi.push(0.0);
                }
                ConeAxis::Zero => {
                    lo.push(0.0);
                    hi.push(0.0);
                }
            }
        }
        (lo, hi)
    }

    pub fn to_indicator(&self) -> ConvexFunction {
        let (lo, hi) = self.as_box_bounds();
        build(&CatalogSpec::IndicatorBox { lo, hi }).expect("cone bounds form a valid box")
    }
}

/// The critical cone of the box `K` at `v`: feasible directions at
/// `proj_K(v)` intersected with the orthogonal complement of `v - proj_K(v)`,
/// computed coordinatewise.
pub fn critical_cone(k: &DomainBox, v: &Point) -> Result<ConeSpec> {
    if v.dim() != k.dim() {
        return Err(ProxError::DimensionMismatch {
            expected: k.dim(),
            got: v.dim(),
        });
    }
    let axes = k
        .axes()
        .iter()
        .zip(v.coords())
        .map(|(axis, &vi)| {
            let pi = axis.clamp(vi);
            if axis.lo == axis.hi {
                ConeAxis::Zero
            } else if axis.lo < pi && pi < axis.hi {
                ConeAxis::Free
            } else if vi != pi {
                // projection is active: orthogonality forces the direction to 0
                ConeAxis::Zero
            } else if pi == axis.lo {
                ConeAxis::NonNeg
            } else {
                ConeAxis::NonPos
            }
        })
        .collect();
    Ok(ConeSpec::new(axes))
}

/// A parameterized variational problem over the box `K` with smooth `g` and
/// affine path `r(t) = r0 + t r1`.
#[derive(Debug, Clone)]
pub struct ViProblem {
    k: DomainBox,
    g: ConvexFunction,
    r0: Point,
    r1: Point,
}

impl ViProblem {
    pub fn new(k: DomainBox, g: ConvexFunction, r0: Point, r1: Point) -> Result<Self> {
        let dim = k.dim();
        for d in [g.dim(), r0.dim(), r1.dim()] {
            if d != dim {
                return Err(ProxError::DimensionMismatch {
                    expected: dim,
                    got: d,
                });
            }
        }
        if !g.is_smooth() {
            return Err(ProxError::MissingGradient(g.name().to_string()));
        }
        if !g.has_hessian() {
            return Err(ProxError::HessianMissing(g.name().to_string()));
        }
        Ok(ViProblem { k, g, r0, r1 })
    }

    pub fn k(&self) -> &DomainBox {
        &self.k
    }

    pub fn g(&self) -> &ConvexFunction {
        &self.g
    }

    pub fn r(&self, t: f64) -> Point {
        self.r0.add(&self.r1.scale(t))
    }

    pub fn r1(&self) -> &Point {
        &self.r1
    }

    fn indicator_of_k(&self) -> ConvexFunction {
        let lo: Vec<f64> = self.k.axes().iter().map(|a| a.lo).collect();
        let hi: Vec<f64> = self.k.axes().iter().map(|a| a.hi).collect();
        build(&CatalogSpec::IndicatorBox { lo, hi }).expect("K is a valid box")
    }
}

/// Solve the problem at parameter `t`: returns `(u, v)` where
/// `u = prox_{f+g}(r(t))` and `v` is the fixed-point limit, with
/// `u = proj_K(v)`.
pub fn trajectory(p: &ViProblem, t: f64, cfg: &AlgoConfig) -> Result<(Point, Point)> {
    let problem = FproxProblem::new(p.indicator_of_k(), p.g.clone())?;
    let res = a1_solve(&problem, &p.r(t), cfg)?;
    res.require_converged()?;
    Ok((res.prox_value, res.y_star))
}

/// `psi(x) = (1/2) <H x, x>` for the Hessian of `g` frozen at `base`,
/// assembled column by column. Its prox solves `(I + step H) z = x`.
fn quadratic_model(g: &ConvexFunction, base: &Point) -> Result<ConvexFunction> {
    let n = g.dim();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let col = g.hessian_apply(base, &Point::new(e)?)?;
        cols.push(DVector::from_vec(col.coords().to_vec()));
    }
    let h = DMatrix::from_columns(&cols);
    let h = (h.clone() + h.transpose()) * 0.5;

    let apply = {
        let h = h.clone();
        move |x: &Point| {
            let v = &h * DVector::from_vec(x.coords().to_vec());
            Point::new(v.iter().copied().collect()).expect("finite Hessian action")
        }
    };
    let apply_value = apply.clone();
    let apply_grad = apply.clone();
    let apply_hess = apply;
    let h_prox = h.clone();

    let mut b = ConvexFunction::builder("quadratic_model", n)
        .prox_range(DomainBox::full(n))
        .value(move |x: &Point| 0.5 * apply_value(x).dot(x))
        .gradient(move |x: &Point| apply_grad(x))
        .hessian_apply(move |_base: &Point, d: &Point| apply_hess(d))
        .prox(move |x: &Point, step: f64| {
            let lhs = DMatrix::identity(n, n) + &h_prox * step;
            let rhs = DVector::from_vec(x.coords().to_vec());
            let z = lhs
                .lu()
                .solve(&rhs)
                .expect("I + step*H is positive definite");
            Point::new(z.iter().copied().collect()).expect("finite solve")
        });
    if n == 1 {
        let slope = h[(0, 0)];
        b = b.subdiff1d(move |x| crate::interval::SubdifferentialInterval::singleton(slope * x));
    }
    Ok(b.build())
}

/// Everything the derivative formula produces, plus the finite-difference
/// cross-check.
#[derive(Debug, Clone)]
pub struct SensitivityReport {
    pub u0: Point,
    pub v0: Point,
    pub cone: ConeSpec,
    pub u_prime: Point,
    pub v_prime: Point,
    pub fd_estimate: Point,
    pub fd_gap: f64,
    pub warning: Option<String>,
}

fn derivative_parts(
    p: &ViProblem,
    cfg: &AlgoConfig,
) -> Result<(Point, Point, ConeSpec, IterationResult)> {
    let (u0, v0) = trajectory(p, 0.0, cfg)?;
    let cone = critical_cone(&p.k, &v0)?;
    let phi = cone.to_indicator();
    let psi = quadratic_model(&p.g, &u0)?;
    let dproblem = FproxProblem::new(phi, psi)?;
    let dres = a1_solve(&dproblem, &p.r1, cfg)?;
    dres.require_converged()?;
    Ok((u0, v0, cone, dres))
}

/// The directional derivative `u'(0)` by the cone/quadratic-model formula.
pub fn derivative_at_zero(p: &ViProblem, cfg: &AlgoConfig) -> Result<Point> {
    let (_, _, _, dres) = derivative_parts(p, cfg)?;
    Ok(dres.prox_value)
}

/// Derivative formula plus the finite-difference check
/// `(u(h) - u(0)) / h`. A gap above [`FD_WARN_TOL`] is reported as a warning:
/// the trajectory may simply not be differentiable at 0.
pub fn sensitivity_report(
    p: &ViProblem,
    cfg: &AlgoConfig,
    fd_step: f64,
) -> Result<SensitivityReport> {
    if fd_step.is_nan() || fd_step <= 0.0 {
        return Err(ProxError::InvalidSpec(format!(
            "finite-difference step must be positive, got {fd_step}"
        )));
    }
    let (u0, v0, cone, dres) = derivative_parts(p, cfg)?;
    let (u_h, _) = trajectory(p, fd_step, cfg)?;
    let fd_estimate = u_h.sub(&u0).scale(1.0 / fd_step);
    let fd_gap = fd_estimate.dist(&dres.prox_value);
    let warning = (fd_gap > FD_WARN_TOL).then(|| {
        format!(
            "finite-difference check disagrees with the cone formula (gap {fd_gap:.3e}); \
             the trajectory may not be differentiable at t = 0"
        )
    });
    Ok(SensitivityReport {
        u0,
        v0,
        cone,
        u_prime: dres.prox_value,
        v_prime: dres.y_star,
        fd_estimate,
        fd_gap,
        warning,
    })
}
