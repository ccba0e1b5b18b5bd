//! Directed multigraphs with stable edge ids, edge-connectivity, arborescence
//! packing, splitting off, and immersions of complete digraphs.

pub mod arborescence;
pub mod connectivity;
pub mod digraph;
pub mod error;
mod flow;
pub mod generators;
pub mod immersion;
pub mod splitting;

pub use digraph::{CutReport, Digraph, EdgeId};
pub use error::{Error, Result};
