//! Finite groups as Cayley tables, with subgroup arithmetic and word
//! evaluation.

mod builtin;
mod eval;
mod file;
mod group;
mod perm;
mod subset;

pub use builtin::builtin_group;
pub use eval::{evaluate, CompiledWord};
pub use file::{parse_group_file, write_cayley_file};
pub use group::{Elem, FiniteGroup, DEFAULT_ORDER_CAP, IDENTITY};
pub use perm::{group_from_permutations, Permutation};
pub use subset::{ElementSubset, Subgroup};
