//! Infinite trigonometric products `Cl_{p;s}(t) = Π_n [1 - p + p cos(t/n^s)]`,
//! their Lévy trend constants, and the random Riemann-ζ walks whose
//! characteristic functions they are.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod density;
pub mod error;
pub mod lattice;
pub mod montecarlo;
pub mod product;
pub mod quad;
pub mod trend;

pub use error::{Error, Result};
pub use product::{PowerKind, ProductParams, TruncationPlan};
pub use trend::{Method, TrendConstants};

/// Library version, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
