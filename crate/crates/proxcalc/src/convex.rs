//! The capability record for a proper, lower semicontinuous, convex function:
//! extended-real values, a proximal map, and optional first/second-order data.

use std::fmt;
use std::sync::Arc;

use crate::error::{ProxError, Result};
use crate::interval::{DomainBox, SubdifferentialInterval};
use crate::point::Point;

type ValueFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
type ProxFn = Arc<dyn Fn(&Point, f64) -> Point + Send + Sync>;
type Subdiff1dFn = Arc<dyn Fn(f64) -> SubdifferentialInterval + Send + Sync>;
type GradientFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;
type HessianApplyFn = Arc<dyn Fn(&Point, &Point) -> Point + Send + Sync>;

/// An element of the class of proper lsc convex functions, described by what
/// can be computed about it. Values may be `+inf` outside the domain; the
/// prox map `(x, step) -> argmin value + (1/2 step)||. - x||^2` is total.
///
/// Immutable after construction and cheap to clone (shared closures).
#[derive(Clone)]
pub struct ConvexFunction {
    name: String,
    dim: usize,
    value: ValueFn,
    prox: ProxFn,
    subdiff1d: Option<Subdiff1dFn>,
    gradient: Option<GradientFn>,
    hessian_apply: Option<HessianApplyFn>,
    domain_box: DomainBox,
    prox_range_box: Option<DomainBox>,
}

impl fmt::Debug for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFunction")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("smooth", &self.gradient.is_some())
            .finish()
    }
}

impl ConvexFunction {
    pub fn builder(name: impl Into<String>, dim: usize) -> Builder {
        assert!(dim >= 1, "function dimension must be positive");
        Builder {
            name: name.into(),
            dim,
            value: None,
            prox: None,
            subdiff1d: None,
            gradient: None,
            hessian_apply: None,
            domain_box: None,
            prox_range_box: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extended-real value; `+inf` signals a point outside the domain.
    pub fn value(&self, x: &Point) -> f64 {
        (self.value)(x)
    }

    /// Proximal point of `x` with step `step > 0`.
    pub fn prox(&self, x: &Point, step: f64) -> Result<Point> {
        self.check_dim(x)?;
        if step.is_nan() || step <= 0.0 {
            return Err(ProxError::NonPositiveStep(step));
        }
        Ok((self.prox)(x, step))
    }

    /// Unit-step prox, the form the splitting operators use throughout.
    pub fn prox1(&self, x: &Point) -> Result<Point> {
        self.prox(x, 1.0)
    }

    pub fn has_subdiff1d(&self) -> bool {
        self.subdiff1d.is_some()
    }

    /// Subdifferential at a scalar point (1D functions only).
    pub fn subdiff1d(&self, x: f64) -> Result<SubdifferentialInterval> {
        match &self.subdiff1d {
            Some(f) => Ok(f(x)),
            None => Err(ProxError::MissingSubdifferential(self.name.clone())),
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn gradient(&self, x: &Point) -> Result<Point> {
        self.check_dim(x)?;
        match &self.gradient {
            Some(f) => Ok(f(x)),
            None => Err(ProxError::MissingGradient(self.name.clone())),
        }
    }

    pub fn has_hessian(&self) -> bool {
        self.hessian_apply.is_some()
    }

    /// Action of the Hessian at `base` on `direction`.
    pub fn hessian_apply(&self, base: &Point, direction: &Point) -> Result<Point> {
        self.check_dim(base)?;
        self.check_dim(direction)?;
        match &self.hessian_apply {
            Some(f) => Ok(f(base, direction)),
            None => Err(ProxError::HessianMissing(self.name.clone())),
        }
    }

    pub fn domain_box(&self) -> &DomainBox {
        &self.domain_box
    }

    pub fn prox_range_box(&self) -> Option<&DomainBox> {
        self.prox_range_box.as_ref()
    }

    /// Tilt by a linear term: value picks up `<a, x> + offset`, the prox
    /// shifts its argument by `-step * a`, and all derivative data follows.
    /// Domain and prox range are unchanged.
    pub fn add_affine(&self, a: &Point, offset: f64) -> Result<ConvexFunction> {
        self.check_dim(a)?;
        let a = a.clone();
        let base = self.clone();
        let mut b = ConvexFunction::builder(format!("{}+affine", self.name), self.dim)
            .domain(self.domain_box.clone())
            .value({
                let a = a.clone();
                let base = base.clone();
                move |x| base.value(x) + a.dot(x) + offset
            })
            .prox({
                let a = a.clone();
                let base = base.clone();
                move |x, step| {
                    let shifted = x.sub(&a.scale(step));
                    (base.prox)(&shifted, step)
                }
            });
        if let Some(range) = &self.prox_range_box {
            b = b.prox_range(range.clone());
        }
        if self.dim == 1 && self.subdiff1d.is_some() {
            let slope = a.coords()[0];
            let base = base.clone();
            b = b.subdiff1d(move |x| {
                let s = base.subdiff1d(x).expect("subdiff present");
                if s.is_empty() {
                    s
                } else {
                    SubdifferentialInterval::new(s.lo() + slope, s.hi() + slope)
                }
            });
        }
        if self.gradient.is_some() {
            let a2 = a.clone();
            let base = base.clone();
            b = b.gradient(move |x| base.gradient(x).expect("gradient present").add(&a2));
        }
        if let Some(h) = &self.hessian_apply {
            let h = h.clone();
            b = b.hessian_apply(move |base_pt, dir| h(base_pt, dir));
        }
        Ok(b.build())
    }

    fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim {
            return Err(ProxError::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(())
    }
}

pub struct Builder {
    name: String,
    dim: usize,
    value: Option<ValueFn>,
    prox: Option<ProxFn>,
    subdiff1d: Option<Subdiff1dFn>,
    gradient: Option<GradientFn>,
    hessian_apply: Option<HessianApplyFn>,
    domain_box: Option<DomainBox>,
    prox_range_box: Option<DomainBox>,
}

impl Builder {
    pub fn value(mut self, f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        self.value = Some(Arc::new(f));
        self
    }

    pub fn prox(mut self, f: impl Fn(&Point, f64) -> Point + Send + Sync + 'static) -> Self {
        self.prox = Some(Arc::new(f));
        self
    }

    pub fn subdiff1d(
        mut self,
        f: impl Fn(f64) -> SubdifferentialInterval + Send + Sync + 'static,
    ) -> Self {
        self.subdiff1d = Some(Arc::new(f));
        self
    }

    pub fn gradient(mut self, f: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(f));
        self
    }

    pub fn hessian_apply(
        mut self,
        f: impl Fn(&Point, &Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        self.hessian_apply = Some(Arc::new(f));
        self
    }

    pub fn domain(mut self, b: DomainBox) -> Self {
        self.domain_box = Some(b);
        self
    }

    pub fn prox_range(mut self, b: DomainBox) -> Self {
        self.prox_range_box = Some(b);
        self
    }

    pub fn build(self) -> ConvexFunction {
        let dim = self.dim;
        ConvexFunction {
            name: self.name,
            dim,
            value: self.value.expect("value map is required"),
            prox: self.prox.expect("prox map is required"),
            subdiff1d: self.subdiff1d,
            gradient: self.gradient,
            hessian_apply: self.hessian_apply,
            domain_box: self.domain_box.unwrap_or_else(|| DomainBox::full(dim)),
            prox_range_box: self.prox_range_box,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;

    fn quadratic() -> ConvexFunction {
        ConvexFunction::builder("q", 1)
            .value(|x: &Point| 0.5 * x.dot(x))
            .prox(|x: &Point, step| x.scale(1.0 / (1.0 + step)))
            .gradient(|x: &Point| x.clone())
            .build()
    }

    #[test]
    fn prox_guards() {
        let f = quadratic();
        assert!(matches!(
            f.prox(&Point::zeros(2), 1.0),
            Err(ProxError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            f.prox(&Point::zeros(1), 0.0),
            Err(ProxError::NonPositiveStep(_))
        ));
        assert!(matches!(
            f.prox(&Point::zeros(1), f64::NAN),
            Err(ProxError::NonPositiveStep(_))
        ));
    }

    #[test]
    fn missing_capabilities_error() {
        let f = quadratic();
        assert!(matches!(
            f.subdiff1d(0.0),
            Err(ProxError::MissingSubdifferential(_))
        ));
        assert!(matches!(
            f.hessian_apply(&Point::zeros(1), &Point::zeros(1)),
            Err(ProxError::HessianMissing(_))
        ));
    }

    #[test]
    fn default_domain_is_full() {
        let f = quadratic();
        assert!(f.domain_box().is_full());
        assert!(f.domain_box().axes().iter().all(|a| *a == Interval::full()));
    }

    // shared immutable functions evaluate concurrently with no coordination
    #[test]
    fn shared_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ConvexFunction>();

        let f = quadratic();
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let f = f.clone();
                std::thread::spawn(move || {
                    let mut total = 0.0;
                    for i in 0..1000 {
                        let x = Point::new(vec![t as f64 + i as f64 * 1e-3]).unwrap();
                        total += f.prox1(&x).unwrap().as_scalar();
                    }
                    total
                })
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap().is_finite());
        }
    }
}
