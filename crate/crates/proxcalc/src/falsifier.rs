//! Mechanized nonexistence certificate: no linear combination of compositions
//! of `I`, `prox_f`, `prox_g`, `prox_f^{-1}`, `prox_g^{-1}` with constant
//! coefficients can equal `prox_{f+g}` for all convex pairs. On the quadratic
//! family every such formula reduces to a polynomial slope identity that any
//! coefficient choice violates at gamma = -1/2 by exactly `2^{-n}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ProxError, Result};

/// Coefficients `(a, b, c, d, e)` of one elementary operator
/// `a I + b prox_f + c prox_g + d prox_f^{-1} + e prox_g^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MuCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl MuCoeffs {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        MuCoeffs { a, b, c, d, e }
    }
}

/// A candidate closed formula: `sum_i lambda_i (prod_j P^{mu_ij})` with `m`
/// outer terms, each a composition of `n` elementary operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaCandidate {
    pub m: usize,
    pub n: usize,
    pub lambda: Vec<f64>,
    pub mu: Vec<Vec<MuCoeffs>>,
}

impl FormulaCandidate {
    pub fn new(lambda: Vec<f64>, mu: Vec<Vec<MuCoeffs>>) -> Result<Self> {
        let c = FormulaCandidate {
            m: lambda.len(),
            n: mu.first().map_or(0, Vec::len),
            lambda,
            mu,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(ProxError::InvalidSpec(
                "candidate needs m >= 1 and n >= 1".into(),
            ));
        }
        if self.lambda.len() != self.m || self.mu.len() != self.m {
            return Err(ProxError::InvalidSpec(format!(
                "expected {} outer terms, got lambda: {}, mu rows: {}",
                self.m,
                self.lambda.len(),
                self.mu.len()
            )));
        }
        if let Some(row) = self.mu.iter().find(|row| row.len() != self.n) {
            return Err(ProxError::InvalidSpec(format!(
                "every composition must have {} factors, found one with {}",
                self.n,
                row.len()
            )));
        }
        Ok(())
    }
}

/// Numerator of the elementary slope in the variable `t = 1 + gamma`:
/// `(b + c) + a t + (d + e) t^2`.
fn slope_numerator(mu: &MuCoeffs, t: f64) -> f64 {
    (mu.b + mu.c) + mu.a * t + (mu.d + mu.e) * t * t
}

/// Slope of the elementary operator on the pair `f = g = (gamma/2) x^2`:
/// `((b+c) + a(1+gamma) + (d+e)(1+gamma)^2) / (1+gamma)`.
pub fn elementary_slope(mu: &MuCoeffs, gamma: f64) -> Result<f64> {
    let t = 1.0 + gamma;
    if t == 0.0 {
        return Err(ProxError::PoleAtMinusOne);
    }
    Ok(slope_numerator(mu, t) / t)
}

/// The same slope realized operator by operator on the quadratic family
/// (`prox = x/(1+gamma)`, resolvent inverse `x -> (1+gamma) x`), for
/// cross-checking the algebraic expression.
pub fn elementary_slope_on_quadratics(mu: &MuCoeffs, gamma: f64) -> Result<f64> {
    let t = 1.0 + gamma;
    if t == 0.0 {
        return Err(ProxError::PoleAtMinusOne);
    }
    let x = 1.0;
    let prox = x / t;
    let prox_inv = t * x;
    Ok(mu.a * x + mu.b * prox + mu.c * prox + mu.d * prox_inv + mu.e * prox_inv)
}

/// Residual of the cleared slope identity at `gamma`:
/// `(1+gamma)^n - (1+2 gamma) sum_i lambda_i prod_j numerator_ij`.
/// A valid closed formula would make this identically zero; at
/// `gamma = -1/2` it equals `2^{-n}` no matter the coefficients.
pub fn candidate_residual(c: &FormulaCandidate, gamma: f64) -> f64 {
    let t = 1.0 + gamma;
    let sum: f64 = c
        .lambda
        .iter()
        .zip(&c.mu)
        .map(|(&lam, row)| lam * row.iter().map(|mu| slope_numerator(mu, t)).product::<f64>())
        .sum();
    t.powi(c.n as i32) - (1.0 + 2.0 * gamma) * sum
}

/// Probe points on the nonnegative axis where the identity is also tested.
pub const NONNEGATIVE_PROBES: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 3.0];

/// The contradiction evidence for one candidate.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub n: usize,
    /// The witness point, always -1/2.
    pub gamma: f64,
    /// Residual forced at the witness: `2^{-n}`, independent of coefficients.
    pub gap: f64,
    /// Residuals at the nonnegative probe points.
    pub probes: Vec<(f64, f64)>,
    pub max_probe_residual: f64,
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gap {} at gamma={}", self.gap, self.gamma)?;
        writeln!(
            f,
            "max residual {:.6e} over gamma in {:?}",
            self.max_probe_residual, NONNEGATIVE_PROBES
        )?;
        write!(
            f,
            "the identity would need a residual polynomial that is zero everywhere; \
             the forced gap 2^-{} at gamma=-0.5 rules that out",
            self.n
        )
    }
}

/// Evaluate the candidate at the witness `gamma = -1/2` and on the
/// nonnegative probes. The witness residual is the certificate: it equals
/// `2^{-n}` for every coefficient choice, so no candidate can satisfy the
/// identity as a polynomial, hence on any neighborhood of the probes either.
pub fn contradiction_certificate(c: &FormulaCandidate) -> CertificateReport {
    let gamma = -0.5;
    let gap = candidate_residual(c, gamma);
    let probes: Vec<(f64, f64)> = NONNEGATIVE_PROBES
        .iter()
        .map(|&g| (g, candidate_residual(c, g)))
        .collect();
    let max_probe_residual = probes.iter().map(|(_, r)| r.abs()).fold(0.0, f64::max);
    CertificateReport {
        n: c.n,
        gamma,
        gap,
        probes,
        max_probe_residual,
    }
}
