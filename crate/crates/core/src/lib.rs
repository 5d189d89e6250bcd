//! Exact verification toolkit for variational principles on preordered
//! quasi-metric spaces.
//!
//! Everything operates on finite point sets with arbitrary-precision rational
//! distances and potentials, so every claim the library makes is decided
//! exactly: there are no floating-point tolerances anywhere. The main pieces:
//!
//! - [`space`]: quasi-metric matrices, axiom validation, conjugation,
//!   symmetrization, point closures, the T1 test.
//! - [`cauchy`]: left/right K-Cauchy classification of sampled sequences.
//! - [`preorder`]: preorders, the order-compatibility condition linking them
//!   to the metric, specialization orders.
//! - [`instance`]: a space + preorder + potential bundle with recorded audits.
//! - [`descent`]: the potential-induced order, descent sets `S(x)`, and their
//!   structural properties.
//! - [`picard`]: the half-gap descent iteration.
//! - [`principles`]: certified solvers for the weak and full Ekeland
//!   properties, the Takahashi criterion, and Caristi maps, plus the T1
//!   strengthenings.
//! - [`oracle`]: brute-force oracles and cross-principle equivalence checks.
//! - [`witness`]: the graded chain construction showing what fails without
//!   completeness, truncated to an honest finite prefix.
//! - [`gen`]: seeded random generators producing valid instances.
//! - [`io`]: the text instance-file format.
//! - [`report`]: deterministic key/value report rendering.

pub mod cauchy;
pub mod descent;
pub mod error;
pub mod gen;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod picard;
pub mod preorder;
pub mod principles;
pub mod rat;
pub mod report;
pub mod space;
pub mod witness;

pub use error::SolveError;
pub use instance::{Audits, Instance, Phi};
pub use preorder::Preorder;
pub use rat::{ExtValue, Rat};
pub use space::{PointId, PointSet, QSpace};
