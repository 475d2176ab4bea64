//! Uniform symmetric frequency grids with trapezoid quadrature weights.
//!
//! A grid discretizes the band [-B, B] with M endpoint-inclusive nodes
//! η_j = -B + j·δ, δ = 2B/(M-1). Integrals over the band are evaluated as
//! Σ v(η_j)·w_j with trapezoid weights (δ at interior nodes, δ/2 at the
//! endpoints), so Σ w_j = 2B up to roundoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Endpoint-inclusive uniform grid over [-B, B] with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FrequencyGrid {
    /// Builds the grid. Errors on B ≤ 0 (or non-finite) and M < 2.
    pub fn new(b: f64, m: usize) -> Result<Self> {
        if b <= 0.0 || !b.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "band half-width must be positive and finite, got {b}"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 nodes, got {m}"
            )));
        }
        let delta = 2.0 * b / (m - 1) as f64;
        let mut nodes = vec![0.0; m];
        // Mirror the upper half off the lower half so the grid is exactly
        // symmetric in floating point; the center node of an odd grid is 0.
        for j in 0..m / 2 {
            let v = -b + j as f64 * delta;
            nodes[j] = v;
            nodes[m - 1 - j] = -v;
        }
        let mut weights = vec![delta; m];
        weights[0] = delta / 2.0;
        weights[m - 1] = delta / 2.0;
        Ok(Self { b, nodes, weights })
    }

    /// Band half-width B.
    pub fn half_width(&self) -> f64 {
        self.b
    }

    /// Number of nodes M.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node spacing δ = 2B/(M-1).
    pub fn spacing(&self) -> f64 {
        2.0 * self.b / (self.len() - 1) as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    /// True when two grids discretize the same band with the same node count.
    pub fn same_layout(&self, other: &FrequencyGrid) -> bool {
        self.b == other.b && self.len() == other.len()
    }
}

/// Integrability tag p ∈ [1, ∞]. Metadata only: every finite grid profile is
/// bounded, so p never changes a computation, but it is carried through the
/// signal files and the Young-exponent bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueExponent(f64);

impl LebesgueExponent {
    pub const ONE: LebesgueExponent = LebesgueExponent(1.0);
    pub const TWO: LebesgueExponent = LebesgueExponent(2.0);
    pub const INFINITY: LebesgueExponent = LebesgueExponent(f64::INFINITY);

    /// Accepts any p in [1, ∞] (f64::INFINITY for ∞).
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "integrability exponent must lie in [1, inf], got {p}"
            )));
        }
        Ok(Self(p))
    }

    pub fn get(&self) -> f64 {
        self.0
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }
}

impl Serialize for LebesgueExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for LebesgueExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let raw = Raw::deserialize(d)?;
        let p = match raw {
            Raw::Num(v) => v,
            Raw::Text(t) if t == "inf" => f64::INFINITY,
            Raw::Text(t) => {
                return Err(serde::de::Error::custom(format!(
                    "expected a number or \"inf\", got {t:?}"
                )))
            }
        };
        LebesgueExponent::new(p).map_err(serde::de::Error::custom)
    }
}
