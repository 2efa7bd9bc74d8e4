//! Value sets, verbal subgroups on tuples of normal subgroups, and the
//! membership, linearity and congruence checks built on them.

mod checks;
mod linear;
mod tuple;
mod values;

pub use checks::{
    check_comm_congruence, check_disjoint_split, check_extended_width, check_star_membership, check_substitution, check_width,
    comm_congruence_modulus, comm_congruence_sweep, Comparison, CongruenceCounterexample, Membership,
};
pub use linear::{check_linearity, check_linearity_by_enumeration, LinearityCounterexample, LinearityReport, Mode, DEFAULT_SAMPLES};
pub use tuple::{check_power_condition, NormalTuple, TupleEntry};
pub use values::{
    ocw_value_set, value_set, verbal_subgroup, verbal_subgroup_by_splitting, verbal_subgroup_on_subgroups, word_verbal_subgroup,
    word_verbal_subgroup_of_group, ValueSet, DEFAULT_BUDGET,
};

#[cfg(test)]
mod tests;
