//! Dense complex polynomials in ascending coefficient order.
//!
//! `coeffs[j]` multiplies `z^j`. Trailing coefficients are not stripped on
//! construction; the degree is decided by a relative trim threshold so that
//! degree decisions are invariant under rescaling.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Coefficients below `TRIM_TOL * max |c_j|` count as zero.
pub const TRIM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("leading coefficient must be nonzero")]
    ZeroLeading,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The zero polynomial (empty coefficient list).
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z^j`.
    pub fn monomial(j: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); j + 1];
        coeffs[j] = Complex64::new(1.0, 0.0);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero past the end.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Index of the last coefficient above the relative trim threshold, or
    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let threshold = TRIM_TOL * self.scale();
        self.coeffs
            .iter()
            .rposition(|c| c.norm() > threshold && c.norm() > 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        matches!(self.degree(), None | Some(0))
    }

    /// Drops trailing coefficients below the trim threshold.
    pub fn trimmed(&self) -> Self {
        match self.degree() {
            None => Self::zero(),
            Some(d) => Self::new(self.coeffs[..=d].to_vec()),
        }
    }

    /// Coefficient at `degree()`, zero for the zero polynomial.
    pub fn leading(&self) -> Complex64 {
        self.degree().map(|d| self.coeffs[d]).unwrap_or_default()
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Horner evaluation together with the running bound `sum |c_j| |z|^j`
    /// used for rounding-level residual tests.
    pub fn evaluate_with_bound(&self, z: Complex64) -> (Complex64, f64) {
        let r = z.norm();
        self.coeffs.iter().rev().fold(
            (Complex64::new(0.0, 0.0), 0.0),
            |(acc, bound), &c| (acc * z + c, bound * r + c.norm()),
        )
    }

    /// k-fold formal derivative.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= k {
            return Self::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|j| self.coeffs[j] * falling_factorial(j, k))
            .collect();
        Self::new(coeffs).trimmed()
    }

    /// Coefficients of `P(az + b)`, by Horner substitution.
    pub fn compose_affine(&self, map: AffineMap) -> Self {
        let inner = Self::new(vec![map.b, map.a]);
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner);
            acc.add_constant(c);
        }
        acc
    }

    /// `leading * prod (z - r_i)`, multiplied left to right in input order.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Result<Self, PolyError> {
        if leading.norm() == 0.0 {
            return Err(PolyError::ZeroLeading);
        }
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * r;
            }
            coeffs = next;
        }
        Ok(Self::new(coeffs))
    }

    /// Coefficient-wise weighted sum, trimmed.
    pub fn linear_combination<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Complex64, &'a Polynomial)>,
    {
        let mut out: Vec<Complex64> = Vec::new();
        for (w, p) in terms {
            if out.len() < p.coeffs.len() {
                out.resize(p.coeffs.len(), Complex64::new(0.0, 0.0));
            }
            for (o, &c) in out.iter_mut().zip(&p.coeffs) {
                *o += w * c;
            }
        }
        Self::new(out).trimmed()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scaled(&self, w: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * w).collect())
    }

    fn add_constant(&mut self, c: Complex64) {
        if self.coeffs.is_empty() {
            self.coeffs.push(c);
        } else {
            self.coeffs[0] += c;
        }
    }

    /// Max coefficient difference relative to the larger of the two scales.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let diff = (0..n)
            .map(|j| (self.coeff(j) - other.coeff(j)).norm())
            .fold(0.0, f64::max);
        let scale = self.scale().max(other.scale());
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

/// `j (j-1) ... (j-k+1)` as a float.
pub fn falling_factorial(j: usize, k: usize) -> f64 {
    (0..k).map(|i| (j - i) as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The affine map `z -> a z + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(with = "complex_pair")]
    pub a: Complex64,
    #[serde(with = "complex_pair")]
    pub b: Complex64,
}

impl AffineMap {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    /// `|a|`, the modulus of the derivative.
    pub fn stretch(&self) -> f64 {
        self.a.norm()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.a.norm() == 0.0 {
            None
        } else {
            let inv = self.a.inv();
            Some(Self::new(inv, -self.b * inv))
        }
    }

    /// `z -> self(inner(z))`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self::new(self.a * inner.a, self.a * inner.b + self.b)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<CoeffRepr> for Complex64 {
    fn from(c: CoeffRepr) -> Self {
        match c {
            CoeffRepr::Real(re) => Complex64::new(re, 0.0),
            CoeffRepr::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Serde adapter writing a complex number as `[re, im]` and accepting a
/// bare real on input.
pub mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        // + 0.0 turns -0.0 into 0.0
        [z.re + 0.0, z.im + 0.0].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        CoeffRepr::deserialize(d).map(Into::into)
    }
}

/// Same as [`complex_pair`] for sequences.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(zs.iter().map(|z| [z.re + 0.0, z.im + 0.0]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<CoeffRepr>::deserialize(d)?;
        Ok(raw.into_iter().map(Into::into).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    #[serde(with = "complex_vec")]
    coeffs: Vec<Complex64>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PolyRepr::deserialize(d).map(|r| Polynomial::new(r.coeffs))
    }
}
