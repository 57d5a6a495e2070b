pub mod canon;
pub mod catalog;
pub mod certificate;
pub mod connectivity;
pub mod engine;
pub mod enumerate;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod moves;
pub mod sparsity;
pub mod sweep;
pub mod sums;

pub use canon::{canonical_form, CanonicalForm};
pub use error::{Error, Result};
pub use graph::{Graph, Vertex};
