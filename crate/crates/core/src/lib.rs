//! Exact spectra, Morse index and nullity of minimal products of minimal
//! submanifolds in spheres.
//!
//! Spectra are truncated multisets of rationals with a completeness bound
//! ([`Spectrum`]). Catalog descriptors ([`ManifoldDescriptor`]) are combined
//! into minimal products by the [`composer`], and the [`analyzer`] derives
//! index, nullity, first eigenvalues, lower bounds and curvature facts. The
//! [`oracle`] module holds independent brute-force references.

pub mod analyzer;
pub mod catalog;
pub mod composer;
pub mod error;
pub mod oracle;
pub mod parse;
pub mod rational;
pub mod spectrum;

pub use analyzer::{analyze, AnalysisReport, Breakdown, BoundCheck, BoundOutcome, SClass, Sourced};
pub use catalog::{
    load_descriptor, save_descriptor, Builtin, Demand, Fact, FactProvenance, Flags, ManifoldDescriptor, NamedSurface,
    SValue, Source, SpectralData,
};
pub use composer::{evaluate, product_descriptor, Factor, ProductExpression, UserCatalog};
pub use error::{Error, Result};
pub use parse::{parse_expression, Expr, Leaf, ParseError};
pub use rational::{frac, int, parse_rational, Bound, Rational};
pub use spectrum::Spectrum;
