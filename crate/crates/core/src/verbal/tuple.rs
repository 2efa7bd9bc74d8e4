use crate::error::{Error, Result};
use crate::groups::{ElementSubset, FiniteGroup, Subgroup};

/// One entry `N_i` of a tuple, optionally with a normal generating subset
/// `S_i` and an exponent `n_i` whose powers of `N_i` land in `S_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleEntry {
    pub subgroup: Subgroup,
    pub generators: Option<ElementSubset>,
    pub power: Option<u64>,
}

impl TupleEntry {
    pub fn plain(subgroup: Subgroup) -> TupleEntry {
        TupleEntry { subgroup, generators: None, power: None }
    }

    pub fn with_generators(subgroup: Subgroup, generators: ElementSubset, power: Option<u64>) -> TupleEntry {
        TupleEntry { subgroup, generators: Some(generators), power }
    }

    /// `S_i` when present, otherwise the members of `N_i`.
    pub fn chosen_set(&self) -> &ElementSubset {
        self.generators.as_ref().unwrap_or_else(|| self.subgroup.as_subset())
    }

    /// Validates the entry against `group`.
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        if !self.subgroup.is_normal() {
            return Err(Error::NotNormal(format!("tuple entry of order {}", self.subgroup.order())));
        }
        if let Some(s) = &self.generators {
            if !s.is_normal() {
                return Err(Error::NotNormalSubset(format!("generating set of size {}", s.len())));
            }
            if group.closure_of(s) != self.subgroup {
                return Err(Error::PreconditionFailed(format!(
                    "generating set of size {} does not generate the entry of order {}",
                    s.len(),
                    self.subgroup.order()
                )));
            }
        }
        if self.power.is_some() && !check_power_condition(group, self)? {
            return Err(Error::PowerConditionFailed(format!(
                "some {}th power of the entry of order {} lies outside its generating set",
                self.power.unwrap_or_default(),
                self.subgroup.order()
            )));
        }
        Ok(())
    }
}

/// Whether every `n_i`-th power of an element of `N_i` lies in `S_i`.
pub fn check_power_condition(group: &FiniteGroup, entry: &TupleEntry) -> Result<bool> {
    let (Some(s), Some(n)) = (&entry.generators, entry.power) else {
        return Err(Error::PreconditionFailed("power condition needs both a generating set and an exponent".into()));
    };
    let n = i64::try_from(n).map_err(|_| Error::PreconditionFailed(format!("exponent {n} too large")))?;
    Ok(entry.subgroup.elements().all(|g| s.contains(group.pow(g, n))))
}

/// An ordered tuple of normal subgroups. Entries are validated on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalTuple {
    entries: Vec<TupleEntry>,
}

impl NormalTuple {
    pub fn new(group: &FiniteGroup, entries: Vec<TupleEntry>) -> Result<NormalTuple> {
        for e in &entries {
            e.validate(group)?;
        }
        Ok(NormalTuple { entries })
    }

    pub fn of_subgroups(group: &FiniteGroup, subgroups: Vec<Subgroup>) -> Result<NormalTuple> {
        NormalTuple::new(group, subgroups.into_iter().map(TupleEntry::plain).collect())
    }

    /// `(N, N, ..., N)` with `r` copies.
    pub fn repeated(group: &FiniteGroup, subgroup: &Subgroup, r: usize) -> Result<NormalTuple> {
        NormalTuple::of_subgroups(group, vec![subgroup.clone(); r])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TupleEntry] {
        &self.entries
    }

    pub fn subgroups(&self) -> Vec<&Subgroup> {
        self.entries.iter().map(|e| &e.subgroup).collect()
    }

    /// Member sets of the `N_i`.
    pub fn subgroup_sets(&self) -> Vec<ElementSubset> {
        self.entries.iter().map(|e| e.subgroup.as_subset().clone()).collect()
    }

    /// `S_i` where present, else `N_i`.
    pub fn chosen_sets(&self) -> Vec<ElementSubset> {
        self.entries.iter().map(|e| e.chosen_set().clone()).collect()
    }

    pub fn has_all_generators(&self) -> bool {
        self.entries.iter().all(|e| e.generators.is_some())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> NormalTuple {
        NormalTuple { entries: self.entries[range].to_vec() }
    }

    pub fn orders(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.subgroup.order()).collect()
    }
}
