//! Series calculus for hyperexponential Lévy processes.
//!
//! The crate expands every root of `psi(z) = q` in powers of `q^{-1}` or
//! `q^{-1/2}`, turns those expansions into time-domain series for European
//! option prices and Greeks, builds the short-maturity ATM implied
//! volatility expansion, and carries an independent Laplace/Fourier
//! inversion oracle to cross-check all of it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixtures;
pub mod implied_vol;
pub mod inversion;
pub mod model;
pub mod pricing;
pub mod quad;
pub mod roots;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use model::{HyperExpParams, LaurentCoefficientCache, RealRoots, Regime};
pub use series::{bell_partial, Branch, Step, TruncatedSeries, C64};
