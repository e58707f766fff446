//! Compact sets in the plane: descriptions, meshes, square covers and closed-form Green's functions.

mod atom;
mod cover;
mod mesh;
mod oracle;
mod spec;

pub use atom::Atom;
pub use cover::{square_cover, square_cover_of_neighborhood, SquareCover};
pub use mesh::{build_mesh, Mesh, MeshRole};
pub use oracle::green_oracle;
pub use spec::{distance, CompactSetSpec, OracleTag, SetKind};
