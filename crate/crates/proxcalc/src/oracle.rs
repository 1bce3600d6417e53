//! Brute-force ground truth: prox by direct minimization over a grid with
//! ternary refinement, the 1D set-valued oracle for the f-proximal map, and
//! band data for plotting set-valued graphs.

use std::io::{self, Write};
use std::sync::Arc;

use crate::convex::ConvexFunction;
use crate::error::{ProxError, Result};
use crate::fprox::FproxProblem;
use crate::interval::{DomainBox, Interval, SubdifferentialInterval};
use crate::point::Point;
use crate::scalar::{min_scan_ternary, GRID_STEP, TERNARY_ITERS};

/// Default endpoint inflation used when qualifying grid points against a
/// subdifferential interval.
pub const SET_INFLATION_DEFAULT: f64 = 1e-9;

/// Coordinate-descent sweep budget for the (separable) 2-3 dimensional case.
const CD_SWEEPS: usize = 200;

/// An extended-real value map together with its domain box: everything the
/// brute-force prox oracle is allowed to know about a function.
#[derive(Clone)]
pub struct ValueMap {
    dim: usize,
    value: Arc<dyn Fn(&Point) -> f64 + Send + Sync>,
    domain: DomainBox,
}

impl ValueMap {
    pub fn from_function(f: &ConvexFunction) -> ValueMap {
        let g = f.clone();
        ValueMap {
            dim: f.dim(),
            value: Arc::new(move |x| g.value(x)),
            domain: f.domain_box().clone(),
        }
    }

    /// The sum `f + g` with the intersected domain box.
    pub fn sum(f: &ConvexFunction, g: &ConvexFunction) -> Result<ValueMap> {
        if f.dim() != g.dim() {
            return Err(ProxError::DimensionMismatch {
                expected: f.dim(),
                got: g.dim(),
            });
        }
        let domain = f
            .domain_box()
            .intersect(g.domain_box())
            .ok_or(ProxError::EmptyDomainIntersection)?;
        let (f, g) = (f.clone(), g.clone());
        Ok(ValueMap {
            dim: f.dim(),
            value: Arc::new(move |x| f.value(x) + g.value(x)),
            domain,
        })
    }

    pub fn raw(
        dim: usize,
        domain: DomainBox,
        value: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> ValueMap {
        ValueMap {
            dim,
            value: Arc::new(value),
            domain,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: &Point) -> f64 {
        (self.value)(x)
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }
}

/// Search interval for one coordinate: the domain axis clipped to a ball of
/// radius `r` around `x`, falling back to the nearest domain stretch when the
/// ball misses the domain entirely.
fn search_axis(axis: Interval, x: f64, r: f64) -> Interval {
    let window = Interval::new(x - r, x + r);
    if let Some(i) = axis.intersect(&window) {
        return i;
    }
    if axis.hi < x - r {
        Interval::new(axis.lo.max(axis.hi - 2.0 * r), axis.hi)
    } else {
        Interval::new(axis.lo, axis.hi.min(axis.lo + 2.0 * r))
    }
}

/// Prox of an arbitrary value map by direct minimization of
/// `h(z) + (1/2)||z - x||^2`: coarse grid scan (step <= 1e-2 per axis), then
/// ternary refinement, exploiting the 1-strong convexity of the objective.
/// Dimensions 2 and 3 run coordinate-descent sweeps of the 1D routine, which
/// is exact for the separable sums the catalog produces.
pub fn oracle_prox(h: &ValueMap, x: &Point) -> Result<Point> {
    if h.dim > 3 {
        return Err(ProxError::InvalidSpec(format!(
            "the brute-force oracle handles dim <= 3, got {}",
            h.dim
        )));
    }
    if x.dim() != h.dim {
        return Err(ProxError::DimensionMismatch {
            expected: h.dim,
            got: x.dim(),
        });
    }
    let radius = 10.0 * (1.0 + x.norm());
    let axes: Vec<Interval> = (0..h.dim)
        .map(|i| search_axis(h.domain.axis(i), x.coords()[i], radius))
        .collect();

    let objective = |z: &Point| h.value(z) + 0.5 * z.dist(x).powi(2);

    if h.dim == 1 {
        let axis = axes[0];
        let f = |t: f64| objective(&Point::new(vec![t]).expect("finite grid point"));
        let z = min_scan_ternary(f, axis.lo, axis.hi, GRID_STEP, TERNARY_ITERS)
            .ok_or(ProxError::UnboundedSearch)?;
        return Point::new(vec![z]);
    }

    // Start from the box-clamped query point and sweep axes.
    let mut z: Vec<f64> = x
        .coords()
        .iter()
        .zip(&axes)
        .map(|(&c, axis)| axis.clamp(c))
        .collect();
    for _ in 0..CD_SWEEPS {
        let mut moved: f64 = 0.0;
        for (i, axis) in axes.iter().enumerate() {
            let f = |t: f64| {
                let mut cand = z.clone();
                cand[i] = t;
                objective(&Point::new(cand).expect("finite grid point"))
            };
            let best = min_scan_ternary(f, axis.lo, axis.hi, GRID_STEP, TERNARY_ITERS)
                .ok_or(ProxError::UnboundedSearch)?;
            moved = moved.max((best - z[i]).abs());
            z[i] = best;
        }
        if moved < 1e-12 {
            break;
        }
    }
    Point::new(z)
}

/// A 1D evaluation grid `lo, lo + step, ..., <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec1d {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec1d {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi && step > 0.0) {
            return Err(ProxError::InvalidSpec(format!(
                "bad grid ({lo}, {hi}, {step})"
            )));
        }
        Ok(GridSpec1d { lo, hi, step })
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(move |i| self.lo + i as f64 * self.step)
    }
}

/// Grid sweep of the defining inclusion `x - y in dg(prox_f(y))`: returns the
/// contiguous run of qualifying grid points as an interval, or the empty
/// interval when nothing qualifies. The f-proximal set is convex, so a gap in
/// the qualifying run is an internal error.
pub fn fprox_set_oracle(
    p: &FproxProblem,
    x: f64,
    grid: &GridSpec1d,
    inflation: f64,
) -> Result<SubdifferentialInterval> {
    if p.dim() != 1 {
        return Err(ProxError::InvalidSpec(
            "the set-valued oracle is 1D only".into(),
        ));
    }
    if !p.g().has_subdiff1d() {
        return Err(ProxError::MissingSubdifferential(p.g().name().to_string()));
    }

    let mut run: Option<(f64, f64)> = None;
    let mut run_closed = false;
    for y in grid.points() {
        let yp = Point::new(vec![y]).expect("finite grid point");
        let pf = p.f().prox1(&yp)?.as_scalar();
        let qualifies = p.g().subdiff1d(pf)?.contains_inflated(x - y, inflation);
        if qualifies {
            if run_closed {
                return Err(ProxError::InternalError(format!(
                    "qualifying grid points are not contiguous near y = {y}"
                )));
            }
            run = Some(match run {
                None => (y, y),
                Some((lo, _)) => (lo, y),
            });
        } else if run.is_some() {
            run_closed = true;
        }
    }
    Ok(match run {
        Some((lo, hi)) => SubdifferentialInterval::new(lo, hi),
        None => SubdifferentialInterval::empty(),
    })
}

/// One row of figure band data: the f-proximal set at `x` (NaN endpoints when
/// empty) and the plain prox of `g` for the center line.
#[derive(Debug, Clone, Copy)]
pub struct FigureRow {
    pub x: f64,
    pub set_lo: f64,
    pub set_hi: f64,
    pub prox_g: f64,
}

/// Band data for a sweep of `x`, suitable for plotting the set-valued graph
/// against the single-valued prox.
pub fn figure_data(
    p: &FproxProblem,
    xs: &GridSpec1d,
    ygrid: &GridSpec1d,
    inflation: f64,
) -> Result<Vec<FigureRow>> {
    let mut rows = Vec::new();
    for x in xs.points() {
        let set = fprox_set_oracle(p, x, ygrid, inflation)?;
        let prox_g = p.g().prox1(&Point::new(vec![x])?)?.as_scalar();
        let (set_lo, set_hi) = if set.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            (set.lo(), set.hi())
        };
        rows.push(FigureRow {
            x,
            set_lo,
            set_hi,
            prox_g,
        });
    }
    Ok(rows)
}

/// CSV emission: header `x,set_lo,set_hi,prox_g`, 17 significant digits.
pub fn write_figure_csv(rows: &[FigureRow], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "x,set_lo,set_hi,prox_g")?;
    for r in rows {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.x, r.set_lo, r.set_hi, r.prox_g
        )?;
    }
    Ok(())
}
