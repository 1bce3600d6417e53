//! Closed-form library of convex functions with prox maps, 1D
//! subdifferentials, conjugate access through the Moreau decomposition, and
//! envelope values.

use serde::{Deserialize, Serialize};

use crate::convex::ConvexFunction;
use crate::error::{ProxError, Result};
use crate::interval::{DomainBox, Interval, SubdifferentialInterval};
use crate::point::Point;
use crate::scalar;

fn default_dim() -> usize {
    1
}

/// JSON bounds that admit the strings `"inf"`/`"-inf"` alongside numbers, so
/// one-sided boxes survive encoding (JSON itself has no infinities).
pub mod bounds_serde {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Bound {
        Num(f64),
        Word(String),
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for &x in v {
            if x == f64::INFINITY {
                seq.serialize_element("inf")?;
            } else if x == f64::NEG_INFINITY {
                seq.serialize_element("-inf")?;
            } else {
                seq.serialize_element(&x)?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<Bound>::deserialize(d)?;
        raw.into_iter()
            .map(|b| match b {
                Bound::Num(x) => Ok(x),
                Bound::Word(w) => match w.trim().to_ascii_lowercase().as_str() {
                    "inf" | "+inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    _ => Err(serde::de::Error::custom(format!("bad bound `{w}`"))),
                },
            })
            .collect()
    }
}

/// Declarative description of a catalog entry. The JSON encoding is tagged by
/// `kind`, e.g. `{"kind": "indicator_box", "lo": [-1], "hi": [1]}` or
/// `{"kind": "quadratic", "gamma": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalogSpec {
    IndicatorBox {
        #[serde(with = "bounds_serde")]
        lo: Vec<f64>,
        #[serde(with = "bounds_serde")]
        hi: Vec<f64>,
    },
    IndicatorPoint {
        at: Vec<f64>,
    },
    IndicatorHalfline {
        nonneg: bool,
    },
    Abs,
    L1 {
        dim: usize,
    },
    Quadratic {
        gamma: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    Linear {
        a: Vec<f64>,
    },
    Zero {
        #[serde(default = "default_dim")]
        dim: usize,
    },
    NegSqrtOnHalfline,
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

fn abs_subdiff(x: f64) -> SubdifferentialInterval {
    if x > 0.0 {
        SubdifferentialInterval::singleton(1.0)
    } else if x < 0.0 {
        SubdifferentialInterval::singleton(-1.0)
    } else {
        SubdifferentialInterval::new(-1.0, 1.0)
    }
}

/// Normal-cone interval of a closed interval `[lo, hi]` at `x`.
fn box_subdiff(axis: Interval, x: f64) -> SubdifferentialInterval {
    if !axis.contains(x) {
        SubdifferentialInterval::empty()
    } else if axis.lo == axis.hi {
        SubdifferentialInterval::full()
    } else if x == axis.lo {
        SubdifferentialInterval::new(f64::NEG_INFINITY, 0.0)
    } else if x == axis.hi {
        SubdifferentialInterval::new(0.0, f64::INFINITY)
    } else {
        SubdifferentialInterval::singleton(0.0)
    }
}

fn build_indicator_box(bx: DomainBox, name: String) -> ConvexFunction {
    let dim = bx.dim();
    let mut b = ConvexFunction::builder(name, dim)
        .domain(bx.clone())
        .prox_range(bx.clone())
        .value({
            let bx = bx.clone();
            move |x: &Point| {
                if bx.contains(x) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        })
        .prox({
            let bx = bx.clone();
            move |x: &Point, _step| bx.project(x)
        });
    if dim == 1 {
        let axis = bx.axis(0);
        b = b.subdiff1d(move |x| box_subdiff(axis, x));
    }
    b.build()
}

/// Instantiate a catalog entry as a full capability record.
pub fn build(spec: &CatalogSpec) -> Result<ConvexFunction> {
    match spec {
        CatalogSpec::IndicatorBox { lo, hi } => {
            if lo.is_empty() {
                return Err(ProxError::InvalidSpec(
                    "indicator_box needs dim >= 1".into(),
                ));
            }
            let bx = DomainBox::from_bounds(lo, hi)?;
            Ok(build_indicator_box(bx, "ind_box".into()))
        }
        CatalogSpec::IndicatorHalfline { nonneg } => {
            let (lo, hi, name) = if *nonneg {
                (0.0, f64::INFINITY, "ind_halfline_nonneg")
            } else {
                (f64::NEG_INFINITY, 0.0, "ind_halfline_nonpos")
            };
            let bx = DomainBox::new(vec![Interval::new(lo, hi)]);
            Ok(build_indicator_box(bx, name.into()))
        }
        CatalogSpec::IndicatorPoint { at } => {
            if at.is_empty() {
                return Err(ProxError::InvalidSpec(
                    "indicator_point needs dim >= 1".into(),
                ));
            }
            let at = Point::new(at.clone())
                .map_err(|e| ProxError::InvalidSpec(format!("indicator_point: {e}")))?;
            let dim = at.dim();
            let bx = DomainBox::new(at.coords().iter().map(|&c| Interval::point(c)).collect());
            let mut b = ConvexFunction::builder("ind_point", dim)
                .domain(bx.clone())
                .prox_range(bx)
                .value({
                    let at = at.clone();
                    move |x: &Point| {
                        if x.coords() == at.coords() {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    }
                })
                .prox({
                    let at = at.clone();
                    move |_x: &Point, _step| at.clone()
                });
            if dim == 1 {
                let c = at.as_scalar();
                b = b.subdiff1d(move |x| {
                    if x == c {
                        SubdifferentialInterval::full()
                    } else {
                        SubdifferentialInterval::empty()
                    }
                });
            }
            Ok(b.build())
        }
        CatalogSpec::Abs => Ok(build_l1(1, "abs".into())),
        CatalogSpec::L1 { dim } => {
            if *dim == 0 {
                return Err(ProxError::InvalidSpec("l1 needs dim >= 1".into()));
            }
            Ok(build_l1(*dim, "l1".into()))
        }
        CatalogSpec::Quadratic { gamma, dim } => {
            if !gamma.is_finite() || *gamma < 0.0 {
                return Err(ProxError::InvalidSpec(format!(
                    "quadratic needs gamma >= 0, got {gamma}"
                )));
            }
            if *dim == 0 {
                return Err(ProxError::InvalidSpec("quadratic needs dim >= 1".into()));
            }
            let g = *gamma;
            Ok(ConvexFunction::builder(format!("quad(g={g})"), *dim)
                .prox_range(DomainBox::full(*dim))
                .value(move |x: &Point| 0.5 * g * x.dot(x))
                .prox(move |x: &Point, step| x.scale(1.0 / (1.0 + step * g)))
                .subdiff1d(move |x| SubdifferentialInterval::singleton(g * x))
                .gradient(move |x: &Point| x.scale(g))
                .hessian_apply(move |_base: &Point, dir: &Point| dir.scale(g))
                .build())
        }
        CatalogSpec::Linear { a } => {
            if a.is_empty() {
                return Err(ProxError::InvalidSpec("linear needs dim >= 1".into()));
            }
            let a = Point::new(a.clone())
                .map_err(|e| ProxError::InvalidSpec(format!("linear: {e}")))?;
            let dim = a.dim();
            let mut b = ConvexFunction::builder("linear", dim)
                .prox_range(DomainBox::full(dim))
                .value({
                    let a = a.clone();
                    move |x: &Point| a.dot(x)
                })
                .prox({
                    let a = a.clone();
                    move |x: &Point, step| x.sub(&a.scale(step))
                })
                .gradient({
                    let a = a.clone();
                    move |_x: &Point| a.clone()
                })
                .hessian_apply(move |_base: &Point, dir: &Point| dir.scale(0.0));
            if dim == 1 {
                let slope = a.as_scalar();
                b = b.subdiff1d(move |_x| SubdifferentialInterval::singleton(slope));
            }
            Ok(b.build())
        }
        CatalogSpec::Zero { dim } => {
            if *dim == 0 {
                return Err(ProxError::InvalidSpec("zero needs dim >= 1".into()));
            }
            Ok(ConvexFunction::builder("zero", *dim)
                .prox_range(DomainBox::full(*dim))
                .value(|_x: &Point| 0.0)
                .prox(|x: &Point, _step| x.clone())
                .subdiff1d(|_x| SubdifferentialInterval::singleton(0.0))
                .gradient(|x: &Point| Point::zeros(x.dim()))
                .hessian_apply(|_base: &Point, dir: &Point| dir.scale(0.0))
                .build())
        }
        CatalogSpec::NegSqrtOnHalfline => {
            let value = |x: &Point| {
                let t = x.as_scalar();
                if t < 0.0 {
                    f64::INFINITY
                } else {
                    -t.sqrt()
                }
            };
            // No closed form is needed: the prox is ground-truthed by the
            // scalar scan/ternary minimizer.
            let prox = move |x: &Point, step: f64| {
                let t = x.as_scalar();
                let ub = t.max(0.0) + step + 1.0;
                let obj = |z: f64| -z.sqrt() + (z - t).powi(2) / (2.0 * step);
                let z = scalar::min_scan_ternary(obj, 0.0, ub, 1e-2, scalar::TERNARY_ITERS)
                    .expect("objective is finite on [0, ub]");
                Point::scalar(z).expect("finite prox value")
            };
            Ok(ConvexFunction::builder("neg_sqrt", 1)
                .domain(DomainBox::new(vec![Interval::new(0.0, f64::INFINITY)]))
                .value(value)
                .prox(prox)
                .subdiff1d(|x| {
                    if x > 0.0 {
                        SubdifferentialInterval::singleton(-0.5 / x.sqrt())
                    } else {
                        // empty at 0 as well: the slope blows down to -inf
                        SubdifferentialInterval::empty()
                    }
                })
                .build())
        }
    }
}

fn build_l1(dim: usize, name: String) -> ConvexFunction {
    let mut b = ConvexFunction::builder(name, dim)
        .prox_range(DomainBox::full(dim))
        .value(|x: &Point| x.coords().iter().map(|c| c.abs()).sum())
        .prox(|x: &Point, step| {
            let coords = x
                .coords()
                .iter()
                .map(|&c| soft_threshold(c, step))
                .collect();
            Point::new(coords).expect("soft threshold of finite point")
        });
    if dim == 1 {
        b = b.subdiff1d(abs_subdiff);
    }
    b.build()
}

/// Prox of the conjugate via the Moreau decomposition
/// `prox_g + prox_{g*} = I`.
pub fn conjugate_prox(g: &ConvexFunction, x: &Point) -> Result<Point> {
    Ok(x.sub(&g.prox1(x)?))
}

/// Moreau envelope `min(g + (1/2)||. - x||^2)`, evaluated at the prox point.
pub fn moreau_envelope(g: &ConvexFunction, x: &Point) -> Result<f64> {
    let p = g.prox1(x)?;
    let v = g.value(&p);
    if !v.is_finite() {
        return Err(ProxError::InfiniteValue);
    }
    Ok(v + 0.5 * x.dist(&p).powi(2))
}

/// Envelope of the conjugate through the identity
/// `M_g + M_{g*} = (1/2)||.||^2`; no symbolic conjugate is ever formed.
pub fn conjugate_envelope(g: &ConvexFunction, x: &Point) -> Result<f64> {
    Ok(0.5 * x.dot(x) - moreau_envelope(g, x)?)
}
