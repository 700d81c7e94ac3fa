pub mod brauer;
pub mod cli;
pub mod diagrams;
pub mod homsets;
pub mod numbers;
pub mod sandwich;
pub mod semigroups;

pub use diagrams::{CategoryTag, DiagramError, Partition, RowKey, Vertex};
