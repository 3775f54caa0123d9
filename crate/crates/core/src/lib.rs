//! Exact directed tree connectivity.
//!
//! Packing numbers of (S, r)-trees, the generalized connectivities κ_k and λ_k,
//! minimality certificates, explicit extremal constructions and an
//! isomorph-free census of small digraphs.

pub mod canon;
pub mod connectivity;
pub mod constructions;
pub mod digraph;
pub mod error;
pub mod extremal;
pub mod format;
pub mod oracle;
pub mod packing;

pub use canon::{canonical_form, CanonicalCode};
pub use connectivity::{
    connectivity, connectivity_value, is_min_gen, kappa_k, lambda_k, ConnectivityReport,
    MinimalityCertificate,
};
pub use digraph::{Arc, Digraph};
pub use error::{Error, Result};
pub use packing::{
    is_out_tree, max_packing, verify_packing, Mode, OutTree, SteinerInstance, TreePacking,
    Violation,
};
