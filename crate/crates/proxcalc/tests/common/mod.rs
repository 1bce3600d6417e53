//! Shared fixtures for the integration suites.

#![allow(dead_code)]

use proxcalc::catalog::{build, CatalogSpec};
use proxcalc::interval::{DomainBox, Interval};
use proxcalc::sensitivity::{ConeAxis, ViProblem};
use proxcalc::{ConvexFunction, Point};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn p1(x: f64) -> Point {
    Point::scalar(x).unwrap()
}

pub fn p2(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn abs() -> ConvexFunction {
    build(&CatalogSpec::Abs).unwrap()
}

pub fn quad(gamma: f64) -> ConvexFunction {
    build(&CatalogSpec::Quadratic { gamma, dim: 1 }).unwrap()
}

pub fn zero() -> ConvexFunction {
    build(&CatalogSpec::Zero { dim: 1 }).unwrap()
}

pub fn box1(lo: f64, hi: f64) -> ConvexFunction {
    build(&CatalogSpec::IndicatorBox {
        lo: vec![lo],
        hi: vec![hi],
    })
    .unwrap()
}

pub fn point_at(c: f64) -> ConvexFunction {
    build(&CatalogSpec::IndicatorPoint { at: vec![c] }).unwrap()
}

pub fn halfline(nonneg: bool) -> ConvexFunction {
    build(&CatalogSpec::IndicatorHalfline { nonneg }).unwrap()
}

pub fn linear(a: f64) -> ConvexFunction {
    build(&CatalogSpec::Linear { a: vec![a] }).unwrap()
}

pub fn neg_sqrt() -> ConvexFunction {
    build(&CatalogSpec::NegSqrtOnHalfline).unwrap()
}

/// Every 1D catalog entry, closed-form and oracle-backed alike.
pub fn entries_1d() -> Vec<ConvexFunction> {
    vec![
        abs(),
        quad(0.0),
        quad(0.5),
        quad(1.0),
        quad(2.0),
        linear(1.3),
        linear(-0.7),
        zero(),
        box1(-1.0, 1.0),
        box1(0.0, 2.0),
        halfline(true),
        halfline(false),
        point_at(0.0),
        point_at(0.7),
        neg_sqrt(),
    ]
}

/// The closed-form subset (everything except the oracle-backed entry).
pub fn closed_form_entries_1d() -> Vec<ConvexFunction> {
    entries_1d()
        .into_iter()
        .filter(|f| f.name() != "neg_sqrt")
        .collect()
}

pub fn random_point(dim: usize, span: f64, rng: &mut ChaCha8Rng) -> Point {
    let coords = (0..dim).map(|_| rng.gen_range(-span..span)).collect();
    Point::new(coords).unwrap()
}

/// Six box/quadratic sensitivity problems spanning the free, halfline, and
/// pinned cone cases, with the cone axes each one is expected to produce.
pub fn vi_battery() -> Vec<(&'static str, ViProblem, Vec<ConeAxis>)> {
    use ConeAxis::*;
    let halfline_nonpos = DomainBox::new(vec![Interval::new(f64::NEG_INFINITY, 0.0)]);
    let quad2d = build(&CatalogSpec::Quadratic { gamma: 1.0, dim: 2 }).unwrap();
    let mixed_box = DomainBox::new(vec![
        Interval::new(-1.0, 1.0),
        Interval::new(f64::NEG_INFINITY, 0.0),
    ]);
    let unit_box_2d = DomainBox::new(vec![Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0)]);

    vec![
        (
            "free-1d",
            ViProblem::new(halfline_nonpos.clone(), quad(1.0), p1(-2.0), p1(1.0)).unwrap(),
            vec![Free],
        ),
        (
            "halfline-inward",
            ViProblem::new(halfline_nonpos.clone(), quad(1.0), p1(0.0), p1(-1.0)).unwrap(),
            vec![NonPos],
        ),
        (
            "halfline-blocked",
            ViProblem::new(halfline_nonpos.clone(), quad(1.0), p1(0.0), p1(1.0)).unwrap(),
            vec![NonPos],
        ),
        (
            "pinned-1d",
            ViProblem::new(halfline_nonpos, quad(2.0), p1(4.0), p1(1.0)).unwrap(),
            vec![Zero],
        ),
        (
            "mixed-2d",
            ViProblem::new(mixed_box, quad2d.clone(), p2(0.5, 0.0), p2(1.0, -1.0)).unwrap(),
            vec![Free, NonPos],
        ),
        (
            "pinned-free-2d",
            ViProblem::new(unit_box_2d, quad2d, p2(3.0, 0.0), p2(1.0, 1.0)).unwrap(),
            vec![Zero, Free],
        ),
    ]
}
