//! The f-proximal machinery: the generalized Douglas-Rachford map, the
//! additivity check, and the fixed-point solver that evaluates one element of
//! `(I + dg o prox_f)^{-1}(x)` and, through the decomposition formula, the
//! prox of `f + g`.

use crate::algo::{run_fixed_point, AlgoConfig, IterationResult};
use crate::convex::ConvexFunction;
use crate::error::{ProxError, Result};
use crate::point::Point;

/// A pair `(f, g)` whose combined prox is under study. Construction requires
/// matching dimensions and intersecting domain boxes.
#[derive(Debug, Clone)]
pub struct FproxProblem {
    f: ConvexFunction,
    g: ConvexFunction,
    additivity_declared: Option<bool>,
}

impl FproxProblem {
    pub fn new(f: ConvexFunction, g: ConvexFunction) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(ProxError::DimensionMismatch {
                expected: f.dim(),
                got: g.dim(),
            });
        }
        if f.domain_box().intersect(g.domain_box()).is_none() {
            return Err(ProxError::EmptyDomainIntersection);
        }
        Ok(FproxProblem {
            f,
            g,
            additivity_declared: None,
        })
    }

    /// Caller-supplied override of the additivity check, for pairs where the
    /// box heuristic cannot decide.
    pub fn with_declared_additivity(mut self, holds: bool) -> Self {
        self.additivity_declared = Some(holds);
        self
    }

    pub fn f(&self) -> &ConvexFunction {
        &self.f
    }

    pub fn g(&self) -> &ConvexFunction {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub(crate) fn check_point(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(ProxError::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }
}

/// One application of the generalized Douglas-Rachford map
/// `(x, y) -> y - prox_f(y) + prox_g(x + prox_f(y) - y)`.
pub fn tbar_apply(p: &FproxProblem, x: &Point, y: &Point) -> Result<Point> {
    p.check_point(x)?;
    p.check_point(y)?;
    let pf = p.f.prox1(y)?;
    let inner = x.add(&pf).sub(y);
    let pg = p.g.prox1(&inner)?;
    Ok(y.sub(&pf).add(&pg))
}

/// One application of the classical Douglas-Rachford map
/// `y -> y - prox_f(y) + prox_g(2 prox_f(y) - y)`.
pub fn dr_classical(p: &FproxProblem, y: &Point) -> Result<Point> {
    let pf = p.f.prox1(y)?;
    tbar_apply(p, &pf, y)
}

/// Result of the additivity check, with the rule that decided it.
#[derive(Debug, Clone)]
pub struct AdditivityCheck {
    pub holds: bool,
    pub certificate: String,
}

/// Sufficient check for `d(f+g) = df + dg` on domain boxes: the
/// Moreau-Rockafellar condition `dom(f) /\ int(dom(g)) != empty` (either
/// way round), full domains, or a caller declaration.
pub fn check_additivity(p: &FproxProblem) -> AdditivityCheck {
    if let Some(declared) = p.additivity_declared {
        return AdditivityCheck {
            holds: declared,
            certificate: format!("declared by caller: {declared}"),
        };
    }
    if p.f.domain_box().is_full() {
        return AdditivityCheck {
            holds: true,
            certificate: "dom(f) is the whole space".into(),
        };
    }
    if p.g.domain_box().is_full() {
        return AdditivityCheck {
            holds: true,
            certificate: "dom(g) is the whole space".into(),
        };
    }
    if p.f.domain_box().meets_interior_of(p.g.domain_box()) {
        return AdditivityCheck {
            holds: true,
            certificate: "dom(f) meets int(dom(g))".into(),
        };
    }
    if p.g.domain_box().meets_interior_of(p.f.domain_box()) {
        return AdditivityCheck {
            holds: true,
            certificate: "dom(g) meets int(dom(f))".into(),
        };
    }
    AdditivityCheck {
        holds: false,
        certificate: "domain boxes share no interior point".into(),
    }
}

/// Membership test `x - y in dg(prox_f(y))`, decidable in 1D when the
/// subdifferential map is available. Endpoints are inflated by `tol`.
pub fn subdiff_inclusion(p: &FproxProblem, x: &Point, y: &Point, tol: f64) -> Option<bool> {
    if p.dim() != 1 || !p.g.has_subdiff1d() {
        return None;
    }
    let pf = p.f.prox1(y).ok()?.as_scalar();
    let s = x.as_scalar() - y.as_scalar();
    let interval = p.g.subdiff1d(pf).ok()?;
    Some(interval.contains_inflated(s, tol))
}

/// Inclusion test used as the solver's convergence gate. The evaluation
/// point `prox_f(y)` carries the iterate's numerical error, so the
/// subdifferential is taken as a hull over the window `[pf - tol, pf + tol]`
/// (monotonicity makes that the probe hull). When the whole window has an
/// empty subdifferential the only non-refutable case is a window clipping an
/// isolated domain point (a point mass carries its entire subdifferential).
fn gate_inclusion(p: &FproxProblem, x: &Point, y: &Point, tol: f64) -> Option<bool> {
    if p.dim() != 1 || !p.g.has_subdiff1d() {
        return None;
    }
    let pf = p.f.prox1(y).ok()?.as_scalar();
    let s = x.as_scalar() - y.as_scalar();
    let probes = [pf - tol, pf, pf + tol];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut any = false;
    for t in probes {
        let interval = p.g.subdiff1d(t).ok()?;
        if !interval.is_empty() {
            any = true;
            lo = lo.min(interval.lo());
            hi = hi.max(interval.hi());
        }
    }
    if !any {
        let axis = p.g.domain_box().axis(0);
        return Some(axis.lo <= pf + tol && pf - tol <= axis.hi);
    }
    Some(lo - tol <= s && s <= hi + tol)
}

/// Fixed-point iteration `y_{k+1} = Tbar(x, y_k)`. On convergence the limit
/// is an element of the f-proximal set at `x`, and `prox_value = prox_f(y*)`
/// equals `prox_{f+g}(x)` under the additivity condition.
///
/// Refuses to run when the additivity check fails, unless
/// `cfg.force_unverified` is set (the result is then tagged). Exhausting the
/// iteration budget is reported in-band as `converged = false`.
pub fn a1_solve(p: &FproxProblem, x: &Point, cfg: &AlgoConfig) -> Result<IterationResult> {
    cfg.validate(p.dim())?;
    p.check_point(x)?;

    let check = check_additivity(p);
    let unverified = if check.holds {
        false
    } else if cfg.force_unverified {
        true
    } else {
        return Err(ProxError::AdditivityUnverified(check.certificate));
    };

    // Scale-matched inflation for the acceptance gate; generous enough that
    // an honest limit at a kink is never rejected, far too tight for the
    // spurious near-fixed points that appear when the target set is empty.
    let gate_tol_base = 8.0 * cfg.tol * (1.0 + x.norm());
    let gate = |y: &Point| {
        let tol = gate_tol_base * (1.0 + y.norm());
        gate_inclusion(p, x, y, tol).unwrap_or(true)
    };

    let map = |y: &Point| tbar_apply(p, x, y).expect("dims checked at entry");
    let run = run_fixed_point(map, cfg.initial_point(p.dim()), cfg, gate);
    let prox_value = p.f.prox1(&run.y_star)?;
    Ok(IterationResult {
        y_star: run.y_star,
        prox_value,
        residual: run.residual,
        iterations: run.iterations,
        converged: run.converged,
        trace: run.trace,
        unverified_additivity: unverified,
        heuristic: false,
        warnings: Vec::new(),
    })
}

/// One element of the f-proximal set at `x`: the limit of the fixed-point
/// iteration. Errors with `MaxIterExceeded` when the run does not converge.
pub fn fprox_eval(p: &FproxProblem, x: &Point, cfg: &AlgoConfig) -> Result<Point> {
    let result = a1_solve(p, x, cfg)?;
    result.require_converged()?;
    Ok(result.y_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogSpec};

    fn p1(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    fn abs() -> ConvexFunction {
        build(&CatalogSpec::Abs).unwrap()
    }

    fn quad1() -> ConvexFunction {
        build(&CatalogSpec::Quadratic { gamma: 1.0, dim: 1 }).unwrap()
    }

    fn zero() -> ConvexFunction {
        build(&CatalogSpec::Zero { dim: 1 }).unwrap()
    }

    fn ind_origin() -> ConvexFunction {
        build(&CatalogSpec::IndicatorPoint { at: vec![0.0] }).unwrap()
    }

    fn ind_unit_box() -> ConvexFunction {
        build(&CatalogSpec::IndicatorBox {
            lo: vec![-1.0],
            hi: vec![1.0],
        })
        .unwrap()
    }

    fn ex3_pair() -> FproxProblem {
        let f = build(&CatalogSpec::IndicatorHalfline { nonneg: false }).unwrap();
        let g = build(&CatalogSpec::NegSqrtOnHalfline).unwrap();
        FproxProblem::new(f, g).unwrap()
    }

    #[test]
    fn tbar_values() {
        let p = FproxProblem::new(ind_origin(), abs()).unwrap();
        assert_eq!(tbar_apply(&p, &p1(2.0), &p1(0.0)).unwrap().as_scalar(), 1.0);

        let q = FproxProblem::new(quad1(), quad1()).unwrap();
        // on the quadratic pair Tbar(x, y) = x/2 + y/4
        assert_eq!(tbar_apply(&q, &p1(3.0), &p1(0.0)).unwrap().as_scalar(), 1.5);

        // shared fixed point at the origin
        let r = FproxProblem::new(ind_unit_box(), abs()).unwrap();
        assert_eq!(tbar_apply(&r, &p1(0.0), &p1(0.0)).unwrap().as_scalar(), 0.0);
    }

    #[test]
    fn dr_classical_values() {
        let p = FproxProblem::new(abs(), abs()).unwrap();
        assert_eq!(dr_classical(&p, &p1(2.0)).unwrap().as_scalar(), 1.0);

        let q = FproxProblem::new(zero(), zero()).unwrap();
        assert_eq!(dr_classical(&q, &p1(5.0)).unwrap().as_scalar(), 5.0);

        let r = FproxProblem::new(ind_unit_box(), abs()).unwrap();
        assert_eq!(dr_classical(&r, &p1(3.0)).unwrap().as_scalar(), 2.0);
    }

    #[test]
    fn dr_is_tbar_at_prox() {
        let p = FproxProblem::new(ind_unit_box(), abs()).unwrap();
        for &y in &[-3.0, -0.4, 0.0, 1.2, 5.0] {
            let y = p1(y);
            let pf = p.f().prox1(&y).unwrap();
            assert_eq!(
                dr_classical(&p, &y).unwrap(),
                tbar_apply(&p, &pf, &y).unwrap()
            );
        }
    }

    #[test]
    fn additivity_rules() {
        let ex1 = FproxProblem::new(ind_unit_box(), abs()).unwrap();
        let c = check_additivity(&ex1);
        assert!(c.holds, "{}", c.certificate);

        let c = check_additivity(&ex3_pair());
        assert!(!c.holds, "{}", c.certificate);

        let full = FproxProblem::new(quad1(), quad1()).unwrap();
        assert!(check_additivity(&full).holds);

        let declared = ex3_pair().with_declared_additivity(true);
        assert!(check_additivity(&declared).holds);
    }

    #[test]
    fn a1_on_set_valued_pair() {
        // f-proximal set at x = 2 is [1, 3]; prox through f is forced to 0
        let p = FproxProblem::new(ind_origin(), abs()).unwrap();
        let r = a1_solve(&p, &p1(2.0), &AlgoConfig::default()).unwrap();
        assert!(r.converged);
        let y = r.y_star.as_scalar();
        assert!((1.0..=3.0).contains(&y), "limit {y} outside the set");
        assert!(r.prox_value.as_scalar().abs() <= 1e-12);
    }

    #[test]
    fn a1_on_quadratic_pair() {
        let p = FproxProblem::new(quad1(), quad1()).unwrap();
        let r = a1_solve(&p, &p1(3.0), &AlgoConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.y_star.as_scalar() - 2.0).abs() < 1e-9);
        assert!((r.prox_value.as_scalar() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn a1_on_abs_pair() {
        let p = FproxProblem::new(abs(), abs()).unwrap();
        let r = a1_solve(&p, &p1(3.0), &AlgoConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.y_star.as_scalar() - 2.0).abs() < 1e-9);
        assert!((r.prox_value.as_scalar() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fprox_eval_examples() {
        let cfg = AlgoConfig::default();
        let p = FproxProblem::new(zero(), abs()).unwrap();
        assert!((fprox_eval(&p, &p1(2.0), &cfg).unwrap().as_scalar() - 1.0).abs() < 1e-9);

        let p = FproxProblem::new(ind_unit_box(), abs()).unwrap();
        assert!((fprox_eval(&p, &p1(2.0), &cfg).unwrap().as_scalar() - 1.0).abs() < 1e-9);

        let p = FproxProblem::new(quad1(), quad1()).unwrap();
        assert!((fprox_eval(&p, &p1(3.0), &cfg).unwrap().as_scalar() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn refuses_unverified_additivity() {
        let p = ex3_pair();
        let err = a1_solve(&p, &p1(0.0), &AlgoConfig::default()).unwrap_err();
        assert!(matches!(err, ProxError::AdditivityUnverified(_)));
    }

    #[test]
    fn forced_run_on_empty_set_never_converges() {
        let p = ex3_pair();
        let cfg = AlgoConfig::default().with_max_iter(500).forced();
        let r = a1_solve(&p, &p1(0.0), &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.unverified_additivity);
        assert!(matches!(
            fprox_eval(&p, &p1(0.0), &cfg),
            Err(ProxError::MaxIterExceeded)
        ));
    }

    #[test]
    fn dimension_guards() {
        let p = FproxProblem::new(abs(), abs()).unwrap();
        let bad = Point::zeros(2);
        assert!(matches!(
            tbar_apply(&p, &bad, &p1(0.0)),
            Err(ProxError::DimensionMismatch { .. })
        ));
        let f2 = build(&CatalogSpec::Zero { dim: 2 }).unwrap();
        assert!(matches!(
            FproxProblem::new(f2, abs()),
            Err(ProxError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn disjoint_domains_rejected() {
        let a = build(&CatalogSpec::IndicatorBox {
            lo: vec![0.0],
            hi: vec![1.0],
        })
        .unwrap();
        let b = build(&CatalogSpec::IndicatorBox {
            lo: vec![2.0],
            hi: vec![3.0],
        })
        .unwrap();
        assert!(matches!(
            FproxProblem::new(a, b),
            Err(ProxError::EmptyDomainIntersection)
        ));
    }
}
