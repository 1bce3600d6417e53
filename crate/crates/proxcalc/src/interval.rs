//! Closed intervals with extended-real endpoints, coordinate boxes, and
//! one-dimensional subdifferential sets.

use crate::error::{ProxError, Result};
use crate::point::Point;

/// A closed interval `[lo, hi]` where the endpoints may be `-inf`/`+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The whole real line.
    pub fn full() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_full(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    /// Closest point of the interval.
    pub fn clamp(&self, x: f64) -> f64 {
        x.max(self.lo).min(self.hi)
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Whether `[self]` meets the interior `(other.lo, other.hi)`.
    pub fn meets_interior_of(&self, other: &Interval) -> bool {
        // Closed-vs-open overlap: nonempty iff each strict bound clears the
        // other side, and the interior itself is nonempty.
        other.lo < other.hi && self.lo < other.hi && other.lo < self.hi
    }
}

/// Per-coordinate closed box, the domain description carried by every
/// catalog function.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    axes: Vec<Interval>,
}

impl DomainBox {
    pub fn new(axes: Vec<Interval>) -> Self {
        DomainBox { axes }
    }

    pub fn full(dim: usize) -> Self {
        DomainBox {
            axes: vec![Interval::full(); dim],
        }
    }

    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(ProxError::InvalidSpec(format!(
                "box bounds have mismatched lengths {} vs {}",
                lo.len(),
                hi.len()
            )));
        }
        let mut axes = Vec::with_capacity(lo.len());
        for (&l, &h) in lo.iter().zip(hi) {
            if l.is_nan() || h.is_nan() || l > h {
                return Err(ProxError::InvalidSpec(format!(
                    "invalid box axis [{l}, {h}]"
                )));
            }
            axes.push(Interval::new(l, h));
        }
        Ok(DomainBox { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> Interval {
        self.axes[i]
    }

    pub fn is_full(&self) -> bool {
        self.axes.iter().all(Interval::is_full)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && self
                .axes
                .iter()
                .zip(p.coords())
                .all(|(axis, &x)| axis.contains(x))
    }

    /// Euclidean projection onto the box.
    pub fn project(&self, p: &Point) -> Point {
        let coords = self
            .axes
            .iter()
            .zip(p.coords())
            .map(|(axis, &x)| axis.clamp(x))
            .collect();
        Point::new(coords).expect("projection of finite point is finite")
    }

    pub fn intersect(&self, other: &DomainBox) -> Option<DomainBox> {
        assert_eq!(self.dim(), other.dim(), "box dims differ");
        let mut axes = Vec::with_capacity(self.dim());
        for (a, b) in self.axes.iter().zip(&other.axes) {
            axes.push(a.intersect(b)?);
        }
        Some(DomainBox { axes })
    }

    /// Whether this box meets the interior of `other` (per-coordinate).
    pub fn meets_interior_of(&self, other: &DomainBox) -> bool {
        assert_eq!(self.dim(), other.dim(), "box dims differ");
        self.axes
            .iter()
            .zip(&other.axes)
            .all(|(a, b)| a.meets_interior_of(b))
    }
}

/// The subdifferential of a convex function on the line at a single point:
/// either empty or a closed interval whose endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubdifferentialInterval {
    lo: f64,
    hi: f64,
    empty: bool,
}

impl SubdifferentialInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "subdifferential endpoints out of order");
        SubdifferentialInterval {
            lo,
            hi,
            empty: false,
        }
    }

    pub fn singleton(v: f64) -> Self {
        Self::new(v, v)
    }

    pub fn empty() -> Self {
        SubdifferentialInterval {
            lo: f64::NAN,
            hi: f64::NAN,
            empty: true,
        }
    }

    pub fn full() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Lower endpoint; meaningless when empty.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Membership with the endpoints inflated by `tol` on both sides.
    pub fn contains_inflated(&self, x: f64, tol: f64) -> bool {
        !self.empty && self.lo - tol <= x && x <= self.hi + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_overlap() {
        let closed = Interval::new(-1.0, 1.0);
        let line = Interval::full();
        assert!(closed.meets_interior_of(&line));
        // interior of a point is empty
        assert!(!line.meets_interior_of(&Interval::point(0.0)));
        // touching at a single boundary point does not reach the interior
        let neg = Interval::new(f64::NEG_INFINITY, 0.0);
        let pos = Interval::new(0.0, f64::INFINITY);
        assert!(!neg.meets_interior_of(&pos));
        assert!(!pos.meets_interior_of(&neg));
    }

    #[test]
    fn box_projection() {
        let b = DomainBox::from_bounds(&[-1.0, 0.0], &[1.0, f64::INFINITY]).unwrap();
        let p = Point::new(vec![2.0, -3.0]).unwrap();
        assert_eq!(b.project(&p).coords(), &[1.0, 0.0]);
    }

    #[test]
    fn bad_box_rejected() {
        assert!(DomainBox::from_bounds(&[1.0], &[-1.0]).is_err());
        assert!(DomainBox::from_bounds(&[0.0, 0.0], &[1.0]).is_err());
    }

    #[test]
    fn subdiff_membership() {
        let s = SubdifferentialInterval::new(-1.0, 1.0);
        assert!(s.contains_inflated(1.0, 0.0));
        assert!(s.contains_inflated(1.0 + 1e-12, 1e-9));
        assert!(!s.contains_inflated(1.1, 1e-9));
        assert!(!SubdifferentialInterval::empty().contains_inflated(0.0, 1.0));
    }
}
