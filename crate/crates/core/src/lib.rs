pub mod analysis;
pub mod approx;
pub mod cli;
pub mod exact;
pub mod graph;
pub mod instances;
pub mod matching;
