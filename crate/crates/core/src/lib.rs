//! Current graphs over `Z3 x Z(12s)` and the orientable triangular embeddings
//! of `K(36s)` they generate.

pub mod certify;
pub mod derive;
pub mod group;
pub mod laws;
pub mod model;
pub mod search;
pub mod tracer;

/// Residue type used by the concrete aliases below.
pub type Residue = u32;
pub type Element = group::GroupElement<Residue>;
pub type Group = group::GroupSpec<Residue>;
pub type Graph = model::CurrentGraph<Residue>;
