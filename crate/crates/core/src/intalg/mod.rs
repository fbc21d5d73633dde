//! Exact integer linear algebra: Smith normal form, integer solving, and
//! subquotient (homology) computations.

mod abelian;
mod matrix;
mod smith;
mod subquotient;

pub use abelian::FGAbelianGroup;
pub use matrix::{sparse_add_scaled, sparse_axpy, IntMatrix, SparseVec};
pub use smith::{smith_normal_form, solve_integer, IntSolver, SmithDecomposition};
pub use subquotient::{homology_of_pair, induced_subquotient_map, SubquotientGroup, SubquotientMap};
