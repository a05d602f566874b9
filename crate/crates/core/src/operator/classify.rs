use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{form3_image, LinearFunctional, MonomialOperator};
use crate::extremal::{DnkProvenance, DnkSource, DnkValue};
use crate::poly::{complex_pair, falling_factorial, AffineMap, Polynomial};

/// Relative coefficient tolerance for matching images against a form.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum FormMatch {
    Form1 {
        l1: LinearFunctional,
        l2: LinearFunctional,
    },
    Form2 {
        #[serde(with = "complex_pair")]
        c: Complex64,
        m: usize,
        l3: LinearFunctional,
    },
    Form3 {
        #[serde(with = "complex_pair")]
        c: Complex64,
        k: usize,
        map: AffineMap,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail")]
pub enum Verdict {
    StructurallyNonexpansive,
    ConditionViolated(String),
    NoCanonicalForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnkUsed {
    pub n: usize,
    pub k: usize,
    pub value: f64,
    pub provenance: DnkProvenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormReport {
    pub matches: Vec<FormMatch>,
    pub verdict: Verdict,
    pub dnk_used: Option<DnkUsed>,
    /// Set when the verdict rests on an estimated lower bound for
    /// `d_{n,k}` with `|a| < 1`; such a verdict is not a certificate.
    pub conditional: bool,
}

/// Matches `op` against the three canonical forms.
///
/// Form 1: every image has degree <= 1. Form 2: the first nonzero image is
/// `lambda (z - c)^m` with `m >= 2` and every image is a multiple of
/// `(z - c)^m`. Form 3: with `k` the first index of a nonzero image,
/// `L[z^k]` is a constant and `L[z^(k+1)]` is linear, which fixes `c, a, b`;
/// all images must then equal `c j!/(j-k)! a^k (a z + b)^(j-k)`.
pub fn classify(op: &MonomialOperator, tol: f64, dnk: &dyn DnkSource) -> FormReport {
    let matches: Vec<FormMatch> = [match_form1(op), match_form2(op, tol), match_form3(op, tol)]
        .into_iter()
        .flatten()
        .collect();

    let mut dnk_used = None;
    let mut conditional = false;
    let structural = matches
        .iter()
        .any(|m| matches!(m, FormMatch::Form1 { .. } | FormMatch::Form2 { .. }));
    let form3 = matches.iter().find_map(|m| match m {
        FormMatch::Form3 { k, map, .. } => Some((*k, map.stretch())),
        _ => None,
    });

    let verdict = if let Some((k, stretch)) = form3 {
        let DnkValue { value, provenance } = dnk.dnk(op.n, k);
        dnk_used = Some(DnkUsed {
            n: op.n,
            k,
            value,
            provenance,
        });
        if structural {
            Verdict::StructurallyNonexpansive
        } else if stretch + tol < value {
            Verdict::ConditionViolated(format!(
                "|L'| = {stretch} is below d_{{{},{}}} = {value}",
                op.n, k
            ))
        } else {
            conditional = provenance == DnkProvenance::EstimatedLowerBound && stretch + tol < 1.0;
            Verdict::StructurallyNonexpansive
        }
    } else if structural {
        Verdict::StructurallyNonexpansive
    } else {
        Verdict::NoCanonicalForm
    };

    FormReport {
        matches,
        verdict,
        dnk_used,
        conditional,
    }
}

fn match_form1(op: &MonomialOperator) -> Option<FormMatch> {
    if !op.images.iter().all(|img| img.degree().is_none_or(|d| d <= 1)) {
        return None;
    }
    let read = |j: usize| -> LinearFunctional {
        LinearFunctional::new(
            op.images
                .iter()
                .map(|img| if img.is_zero() { Complex64::new(0.0, 0.0) } else { img.coeff(j) })
                .collect(),
        )
    };
    Some(FormMatch::Form1 {
        l1: read(1),
        l2: read(0),
    })
}

fn match_form2(op: &MonomialOperator, tol: f64) -> Option<FormMatch> {
    let first = op.images.iter().find(|img| !img.is_zero())?;
    let m = first.degree()?;
    if m < 2 {
        return None;
    }
    // root centroid from the top two coefficients
    let c = -first.coeff(m - 1) / (first.coeff(m) * m as f64);
    let base = Polynomial::from_roots(&vec![c; m], Complex64::new(1.0, 0.0)).ok()?;
    let base_norm: f64 = base.coeffs().iter().map(|b| b.norm_sqr()).sum();

    let mut weights = Vec::with_capacity(op.images.len());
    for img in &op.images {
        if img.is_zero() {
            weights.push(Complex64::new(0.0, 0.0));
            continue;
        }
        if img.degree()? != m {
            return None;
        }
        let lambda: Complex64 = base
            .coeffs()
            .iter()
            .zip(img.coeffs())
            .map(|(b, q)| b.conj() * q)
            .sum::<Complex64>()
            / base_norm;
        if img.relative_distance(&base.scaled(lambda)) > tol {
            return None;
        }
        weights.push(lambda);
    }
    Some(FormMatch::Form2 {
        c,
        m,
        l3: LinearFunctional::new(weights),
    })
}

fn match_form3(op: &MonomialOperator, tol: f64) -> Option<FormMatch> {
    let n = op.n;
    let k = op.images.iter().position(|img| !img.is_zero())?;
    if n < 2 || k > n - 2 {
        return None;
    }
    let head = &op.images[k];
    let next = &op.images[k + 1];
    if head.degree() != Some(0) || next.degree() != Some(1) {
        return None;
    }
    let q0 = head.coeff(0);
    let scale = q0 * (k + 1) as f64;
    let map = AffineMap::new(next.coeff(1) / scale, next.coeff(0) / scale);
    let c = q0 / (falling_factorial(k, k) * map.a.powu(k as u32));

    let consistent = op
        .images
        .iter()
        .enumerate()
        .skip(k)
        .all(|(j, img)| img.relative_distance(&form3_image(c, k, map, j)) <= tol);
    consistent.then_some(FormMatch::Form3 { c, k, map })
}
