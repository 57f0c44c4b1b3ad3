//! Solvers, generators and a verifier for edge-disjoint path packing.
//!
//! Given a host graph and a list of path lengths, the packing problem asks
//! for pairwise edge-disjoint embeddings of all requested paths; the exact
//! variant additionally requires every host edge to be covered. Packing paths
//! edge-disjointly is equivalent to packing them as vertex-disjoint induced
//! subgraphs of the line graph, which is what the length-2 solver exploits.
//!
//! The crate provides:
//!
//! * a brute-force oracle ([`oracle`]),
//! * a subset-DP decision procedure with certificates for subcubic forests
//!   built on fast subset convolution ([`subcubic`], [`convolution`]),
//! * a decision procedure for arbitrary forests using antichains of
//!   multisets ([`forest`], [`multiset`]),
//! * a randomized color-coding solver parameterized by the summed path
//!   length ([`color`]),
//! * a search parameterized by the `bcd` number (max of branching-vertex
//!   count, component count and maximum degree) ([`bcd`]),
//! * a polynomial length-2 exact solver via maximum matching ([`matching`]),
//! * instance generators from hardness constructions ([`generators`]),
//! * algorithm auto-selection ([`solver`]).

pub mod bcd;
pub mod color;
pub mod convolution;
pub mod forest;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod multiset;
pub mod oracle;
pub mod solver;
pub mod subcubic;
