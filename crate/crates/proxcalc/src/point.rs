//! Finite-dimensional real vectors.

use crate::error::{ProxError, Result};

/// A point of the ambient Euclidean space. Entries are always finite;
/// construction rejects NaN and infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(ProxError::NonFiniteEntry { index, value });
            }
        }
        Ok(Point { coords })
    }

    /// Zero vector of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Point {
            coords: vec![0.0; dim],
        }
    }

    /// One-dimensional point.
    pub fn scalar(x: f64) -> Result<Self> {
        Point::new(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The single coordinate of a 1D point.
    ///
    /// Panics if the dimension is not 1.
    pub fn as_scalar(&self) -> f64 {
        assert_eq!(self.coords.len(), 1, "as_scalar on a point of dim != 1");
        self.coords[0]
    }

    pub fn add(&self, other: &Point) -> Point {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    pub fn dot(&self, other: &Point) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot on mismatched dimensions");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    fn zip_with(&self, other: &Point, f: impl Fn(f64, f64) -> f64) -> Point {
        assert_eq!(self.dim(), other.dim(), "op on mismatched dimensions");
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.coords
    }
}
