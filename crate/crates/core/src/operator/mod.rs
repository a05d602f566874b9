//! Linear operators `L: P_n -> C[z]` stored by their monomial images
//! `L[z^j]`, together with constructors for the three diameter-nonexpansive
//! canonical forms.
//!
//! Images may have degree above `n`, so an operator is a list of
//! polynomials rather than a square matrix.

mod claim;
mod classify;
mod refute;

pub use claim::{claim_solutions, claim_solutions_with, shifted_power_basis_matrix, BasisMatrix, ClaimSearch, ClaimSolution};
pub use classify::{classify, FormMatch, FormReport, Verdict, DEFAULT_CLASSIFY_TOL};
pub use refute::{
    default_alpha_grid, pm_polynomial, single_zero_probe, test_nonexpansive, Counterexample,
    NonexpansiveConfig, NonexpansiveOutcome, ProbeReport, ProbeSkip, ProbeViolation, Sampler,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{complex_vec, falling_factorial, AffineMap, Polynomial};
use crate::roots::RootError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("input degree {degree} exceeds operator bound n = {n}")]
    DegreeExceedsN { degree: usize, n: usize },
    #[error("linear functional must not vanish identically")]
    ZeroFunctional,
    #[error("expected {expected} weights/images, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// `l(P) = sum_j weights[j] * coeff_j(P)` on `P_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFunctional {
    #[serde(with = "complex_vec")]
    pub weights: Vec<Complex64>,
}

impl LinearFunctional {
    pub fn new(weights: Vec<Complex64>) -> Self {
        Self { weights }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n + 1])
    }

    /// Picks out coefficient `j`; `basis(0, n)` is evaluation at 0.
    pub fn basis(j: usize, n: usize) -> Self {
        let mut l = Self::zero(n);
        l.weights[j] = Complex64::new(1.0, 0.0);
        l
    }

    pub fn apply(&self, p: &Polynomial) -> Complex64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(j, w)| w * p.coeff(j))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|w| w.norm() == 0.0)
    }

    fn check_len(&self, n: usize) -> Result<(), OperatorError> {
        if self.weights.len() != n + 1 {
            return Err(OperatorError::WrongLength {
                expected: n + 1,
                got: self.weights.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialOperator {
    pub n: usize,
    pub images: Vec<Polynomial>,
}

#[derive(Deserialize)]
struct OperatorRepr {
    n: usize,
    images: Vec<Polynomial>,
}

impl<'de> Deserialize<'de> for MonomialOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(d)?;
        MonomialOperator::new(repr.n, repr.images).map_err(serde::de::Error::custom)
    }
}

impl MonomialOperator {
    pub fn new(n: usize, images: Vec<Polynomial>) -> Result<Self, OperatorError> {
        if images.len() != n + 1 {
            return Err(OperatorError::WrongLength {
                expected: n + 1,
                got: images.len(),
            });
        }
        Ok(Self { n, images })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            images: vec![Polynomial::zero(); n + 1],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            images: (0..=n).map(Polynomial::monomial).collect(),
        }
    }

    /// `P -> P^(k)` on `P_n`.
    pub fn derivative(n: usize, k: usize) -> Self {
        Self {
            n,
            images: (0..=n).map(|j| Polynomial::monomial(j).derivative(k)).collect(),
        }
    }

    /// `P -> P o map`.
    pub fn substitution(n: usize, map: AffineMap) -> Self {
        Self {
            n,
            images: (0..=n)
                .map(|j| Polynomial::monomial(j).compose_affine(map))
                .collect(),
        }
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial, OperatorError> {
        self.apply_with_noise(p).map(|(q, _)| q)
    }

    /// Applies the operator and estimates the relative coefficient error of
    /// the result, `~ eps * sum |c_j| |L[z^j]| / |L[P]|`. The estimate is
    /// large when the weighted images cancel.
    pub fn apply_with_noise(&self, p: &Polynomial) -> Result<(Polynomial, f64), OperatorError> {
        let p = p.trimmed();
        if let Some(d) = p.degree() {
            if d > self.n {
                return Err(OperatorError::DegreeExceedsN { degree: d, n: self.n });
            }
        }
        let terms: Vec<_> = p.coeffs().iter().copied().zip(&self.images).collect();
        let magnitude: f64 = terms.iter().map(|(w, img)| w.norm() * img.scale()).sum();
        let out = Polynomial::linear_combination(terms);
        let scale = out.scale();
        let noise = if scale > 0.0 {
            16.0 * (self.n + 2) as f64 * f64::EPSILON * magnitude / scale
        } else {
            0.0
        };
        Ok((out, noise))
    }

    /// `L = z l1 + l2`: every image has degree at most 1.
    pub fn form1(l1: &LinearFunctional, l2: &LinearFunctional, n: usize) -> Result<Self, OperatorError> {
        l1.check_len(n)?;
        l2.check_len(n)?;
        let images = (0..=n)
            .map(|j| Polynomial::new(vec![l2.weights[j], l1.weights[j]]).trimmed())
            .collect();
        Ok(Self { n, images })
    }

    /// `L = (z - c)^m l3` with `m >= 2` and `l3 != 0`.
    pub fn form2(c: Complex64, m: usize, l3: &LinearFunctional, n: usize) -> Result<Self, OperatorError> {
        l3.check_len(n)?;
        if m < 2 {
            return Err(OperatorError::InvalidParameter(format!("form 2 needs m >= 2, got {m}")));
        }
        if l3.is_zero() {
            return Err(OperatorError::ZeroFunctional);
        }
        let base = Polynomial::from_roots(&vec![c; m], Complex64::new(1.0, 0.0)).expect("unit leading");
        let images = l3
            .weights
            .iter()
            .map(|&w| if w.norm() == 0.0 { Polynomial::zero() } else { base.scaled(w) })
            .collect();
        Ok(Self { n, images })
    }

    /// `L[P] = c (P o map)^(k)` with `c != 0`, `a != 0`, `0 <= k <= n - 2`.
    pub fn form3(c: Complex64, k: usize, map: AffineMap, n: usize) -> Result<Self, OperatorError> {
        if c.norm() == 0.0 {
            return Err(OperatorError::InvalidParameter("form 3 needs c != 0".into()));
        }
        if map.a.norm() == 0.0 {
            return Err(OperatorError::InvalidParameter("form 3 needs a != 0".into()));
        }
        if n < 2 || k > n - 2 {
            return Err(OperatorError::InvalidParameter(format!(
                "form 3 needs 0 <= k <= n - 2, got k = {k}, n = {n}"
            )));
        }
        let images = (0..=n).map(|j| form3_image(c, k, map, j)).collect();
        Ok(Self { n, images })
    }
}

/// `c (z^j o map)^(k) = c j!/(j-k)! a^k (a z + b)^(j-k)`, zero for `j < k`.
pub(crate) fn form3_image(c: Complex64, k: usize, map: AffineMap, j: usize) -> Polynomial {
    if j < k {
        return Polynomial::zero();
    }
    let linear = Polynomial::new(vec![map.b, map.a]);
    let mut power = Polynomial::constant(Complex64::new(1.0, 0.0));
    for _ in 0..(j - k) {
        power = power.mul(&linear);
    }
    power.scaled(c * falling_factorial(j, k) * map.a.powu(k as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_examples() {
        let d = MonomialOperator::derivative(3, 1);
        assert_eq!(
            d.images,
            vec![
                Polynomial::zero(),
                Polynomial::from_real(&[1.0]),
                Polynomial::from_real(&[0.0, 2.0]),
                Polynomial::from_real(&[0.0, 0.0, 3.0]),
            ]
        );
        let p = Polynomial::from_real(&[0.0, 0.0, -1.0, 1.0]);
        assert_eq!(d.apply(&p).unwrap(), p.derivative(1));
        assert!(MonomialOperator::zero(3).apply(&p).unwrap().is_zero());
        assert_eq!(MonomialOperator::identity(3).apply(&p).unwrap(), p);
        assert_eq!(
            d.apply(&Polynomial::monomial(4)),
            Err(OperatorError::DegreeExceedsN { degree: 4, n: 3 })
        );
    }

    #[test]
    fn form1_examples() {
        let l = MonomialOperator::form1(&LinearFunctional::zero(2), &LinearFunctional::basis(0, 2), 2).unwrap();
        let p = Polynomial::from_real(&[4.0, 1.0, 2.0]);
        assert_eq!(l.apply(&p).unwrap(), Polynomial::from_real(&[4.0]));

        let l = MonomialOperator::form1(&LinearFunctional::basis(0, 2), &LinearFunctional::zero(2), 2).unwrap();
        assert_eq!(l.images, vec![Polynomial::monomial(1), Polynomial::zero(), Polynomial::zero()]);

        let l = MonomialOperator::form1(&LinearFunctional::basis(1, 2), &LinearFunctional::basis(0, 2), 2).unwrap();
        assert_eq!(l.images, vec![Polynomial::monomial(0), Polynomial::monomial(1), Polynomial::zero()]);

        assert!(MonomialOperator::form1(&LinearFunctional::zero(1), &LinearFunctional::zero(2), 2).is_err());
    }

    #[test]
    fn form2_examples() {
        let two = c(2.0, 0.0);
        let l = MonomialOperator::form2(two, 3, &LinearFunctional::basis(0, 1), 1).unwrap();
        assert_eq!(l.images[0], Polynomial::from_real(&[-8.0, 12.0, -6.0, 1.0]));
        assert!(l.images[1].is_zero());

        // l3(p) = p_0 - p_1 vanishes on 1 + z
        let l3 = LinearFunctional::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        let l = MonomialOperator::form2(two, 2, &l3, 1).unwrap();
        assert!(l.apply(&Polynomial::from_real(&[1.0, 1.0])).unwrap().is_zero());

        assert_eq!(
            MonomialOperator::form2(two, 2, &LinearFunctional::zero(1), 1),
            Err(OperatorError::ZeroFunctional)
        );
        assert!(MonomialOperator::form2(two, 1, &l3, 1).is_err());
    }

    #[test]
    fn form3_examples() {
        let one = c(1.0, 0.0);
        let l = MonomialOperator::form3(one, 1, AffineMap::identity(), 3).unwrap();
        assert_eq!(l, MonomialOperator::derivative(3, 1));

        let l = MonomialOperator::form3(one, 0, AffineMap::new(c(2.0, 0.0), one), 2).unwrap();
        assert_eq!(
            l.images,
            vec![
                Polynomial::from_real(&[1.0]),
                Polynomial::from_real(&[1.0, 2.0]),
                Polynomial::from_real(&[1.0, 4.0, 4.0]),
            ]
        );

        let l = MonomialOperator::form3(c(2.0, 0.0), 1, AffineMap::new(one, -one), 4).unwrap();
        assert_eq!(l.images[2], Polynomial::from_real(&[-4.0, 4.0]));

        // matches c * derivative(compose_affine(z^j, map), k) directly
        let map = AffineMap::new(c(0.7, -1.1), c(0.3, 0.9));
        let l = MonomialOperator::form3(c(1.5, 0.5), 2, map, 6).unwrap();
        for j in 0..=6 {
            let direct = Polynomial::monomial(j).compose_affine(map).derivative(2).scaled(c(1.5, 0.5));
            assert!(l.images[j].relative_distance(&direct) < 1e-14);
        }

        assert!(MonomialOperator::form3(c(0.0, 0.0), 0, AffineMap::identity(), 3).is_err());
        assert!(MonomialOperator::form3(one, 0, AffineMap::new(c(0.0, 0.0), one), 3).is_err());
        assert!(MonomialOperator::form3(one, 2, AffineMap::identity(), 3).is_err());
    }

    #[test]
    fn operator_json_checks_arity() {
        let ok: MonomialOperator =
            serde_json::from_str(r#"{"n": 1, "images": [{"coeffs": [1]}, {"coeffs": [0, 1]}]}"#).unwrap();
        assert_eq!(ok, MonomialOperator::identity(1));
        let bad = serde_json::from_str::<MonomialOperator>(r#"{"n": 2, "images": [{"coeffs": [1]}]}"#);
        assert!(bad.is_err());
    }
}
