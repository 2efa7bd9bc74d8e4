//! Group words: expression trees, parsing, free reduction, outer commutator
//! words and their extensions.

mod expr;
mod extend;
mod ocw;
mod parse;
mod reduce;

pub use expr::{Family, Var, WordExpr};
pub use extend::{enumerate_extended, extension_degree, y_shapes, ExtendedWordSet};
pub use ocw::{classify_outer_commutator, delta, gamma, substitute, OcwTree, View};
pub use parse::parse_word;
pub use reduce::{reduce, Letter, ReducedWord};
