pub mod fixtures;
pub mod kinetics;
pub mod molgraph;
pub mod netcore;
pub mod pathopt;
pub mod rewrite;
pub mod solve;
