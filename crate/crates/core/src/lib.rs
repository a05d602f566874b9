#![doc = include_str!("../README.md")]

pub mod extremal;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod roots;
pub mod seed;
pub mod simplex;

pub use extremal::{estimate_dnk, ratio, DnkLookup, ExtremalEstimate, SearchBudget};
pub use geometry::{convex_hull, diameter, gauss_lucas_check, hull_contains, HullPolygon};
pub use num_complex::Complex64;
pub use operator::{classify, FormReport, LinearFunctional, MonomialOperator};
pub use poly::{AffineMap, Polynomial};
pub use roots::{distinct_zero_count, find_roots, RootConfig, ZeroSet};
