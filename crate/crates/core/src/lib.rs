//! Matching toolkit for general (non-bipartite) graphs under three access
//! models: offline exact solving, two-pass edge streaming, and fully dynamic
//! edge updates with sublinear-style size estimation.
//!
//! The pieces compose in one direction: [`graph`] and [`matching`] hold the
//! shared data model, [`exact`] is the yardstick every approximation is
//! measured against, [`twopass`] implements the streaming pipeline,
//! [`maximal`]/[`rgmm`]/[`local`]/[`estimator`] implement the dynamic
//! pipeline, and [`verify`] re-derives the fractional-matching certificates
//! that justify the approximation ratios, in exact arithmetic.

pub mod estimator;
pub mod exact;
pub mod fractional;
pub mod graph;
pub mod local;
pub mod matching;
pub mod maximal;
pub mod numeric;
pub mod rgmm;
pub mod stream;
pub mod twopass;
pub mod verify;

pub use graph::{Edge, Graph, GraphError, VertexId};
pub use matching::{BMatching, Matching};
pub use numeric::{Epsilon, Q2};
pub use stream::{UpdateEvent, UpdateStream};
