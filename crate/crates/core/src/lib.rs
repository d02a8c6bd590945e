//! Exact computational toolkit for ideals on ω (the nonnegative integers).
//!
//! The crate makes the basic objects of ideal convergence computable:
//!
//! * [`setexpr`] — symbolic subsets of ω with exact membership, enumeration,
//!   and closed-form counting;
//! * [`ideals`] — parametric ideal families (density zero, matrix, summable,
//!   generalized density, lacunary, the Fubini product ∅×Fin, restrictions)
//!   with certified tri-state membership, tallness decisions, and
//!   constructive witnesses;
//! * [`seqspace`] — real sequences with exact rational values, symbolic
//!   exceedance sets, and classification into the spaces c₀₀/c₀/c/ℓ∞
//!   relative to an ideal;
//! * [`summability`] — nonnegative matrices as row generators, regularity
//!   and Pringsheim-limit certificates, transforms, and seminorms;
//! * [`duality`] — the dual pairing on c₀₀ × ℝ^ω together with the two
//!   constructive engines: the positive-side bounded witness and the
//!   negative-side adversary trace, all in exact rational arithmetic.
//!
//! Every In/Out verdict carries a machine-checkable certificate; limit
//! statements that are not decidable from finite data come back as a
//! first-class `Unknown` with a numeric trace.
//!
//! Horizon sweeps run in parallel via rayon when the `parallel` feature
//! (default) is enabled; disable default features for a fully sequential
//! build.

pub mod duality;
pub mod error;
pub mod exec;
pub mod ideals;
pub mod params;
pub mod rational;
pub mod setexpr;
pub mod seqspace;
pub mod summability;

pub use error::{Error, Result};
pub use params::HorizonParams;
pub use rational::Rat;
