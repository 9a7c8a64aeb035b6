//! List multicoloring of triangle-free induced subgraphs of the triangular
//! lattice.

pub mod choose;
pub mod color;
pub mod generate;
pub mod lattice;
pub mod oracle;
pub mod selftest;
pub mod waterfall;
