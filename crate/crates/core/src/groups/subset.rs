use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

use super::group::{Elem, FiniteGroup, IDENTITY};

/// A subset of a group as a membership bitset. The normal-subset flag
/// (closed under conjugation by every group element) is computed on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementSubset {
    bits: FixedBitSet,
    normal: bool,
}

impl ElementSubset {
    pub fn from_bits(group: &FiniteGroup, bits: FixedBitSet) -> ElementSubset {
        assert_eq!(bits.len(), group.order(), "bitset length must equal the group order");
        let normal = is_conjugation_closed(group, &bits);
        ElementSubset { bits, normal }
    }

    pub fn from_elements(group: &FiniteGroup, elements: impl IntoIterator<Item = Elem>) -> ElementSubset {
        let mut bits = FixedBitSet::with_capacity(group.order());
        for e in elements {
            bits.insert(e);
        }
        ElementSubset::from_bits(group, bits)
    }

    pub fn empty(group: &FiniteGroup) -> ElementSubset {
        ElementSubset::from_elements(group, [])
    }

    pub fn whole(group: &FiniteGroup) -> ElementSubset {
        ElementSubset::from_elements(group, group.elements())
    }

    pub fn identity_only(group: &FiniteGroup) -> ElementSubset {
        ElementSubset::from_elements(group, [IDENTITY])
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.bits.contains(e)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_subset(&self, other: &ElementSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, group: &FiniteGroup, other: &ElementSubset) -> ElementSubset {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        ElementSubset::from_bits(group, bits)
    }

    /// `S ∪ S⁻¹`.
    pub fn symmetrized(&self, group: &FiniteGroup) -> ElementSubset {
        ElementSubset::from_elements(group, self.iter().flat_map(|s| [s, group.inv(s)]))
    }
}

fn is_conjugation_closed(group: &FiniteGroup, bits: &FixedBitSet) -> bool {
    bits.ones().all(|s| group.elements().all(|g| bits.contains(group.conj(s, g))))
}

/// A subgroup: member bitset plus the generators it was built from.
/// Equality compares members only.
#[derive(Clone, Debug)]
pub struct Subgroup {
    set: ElementSubset,
    generators: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.set.bits == other.set.bits
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.set.bits.hash(state);
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.set.contains(e)
    }

    pub fn is_normal(&self) -> bool {
        self.set.is_normal()
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn as_subset(&self) -> &ElementSubset {
        &self.set
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.set.iter()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

impl FiniteGroup {
    pub fn whole_subgroup(&self) -> Subgroup {
        self.closure(self.elements())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.closure([])
    }

    /// Smallest subgroup containing `seed`. Generators are the seed elements
    /// not already in the subgroup generated by the earlier ones.
    pub fn closure(&self, seed: impl IntoIterator<Item = Elem>) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(IDENTITY);
        let mut members = vec![IDENTITY];
        let mut generators = Vec::new();
        for s in seed {
            if bits.contains(s) {
                continue;
            }
            generators.push(s);
            // Closing under right multiplication by all generators so far
            // yields the generated subgroup in a finite group.
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &g in &generators {
                    let y = self.mul(x, g);
                    if !bits.contains(y) {
                        bits.insert(y);
                        members.push(y);
                    }
                }
                i += 1;
            }
        }
        let set = ElementSubset::from_bits(self, bits);
        Subgroup { set, generators }
    }

    pub fn closure_of(&self, seed: &ElementSubset) -> Subgroup {
        self.closure(seed.iter())
    }

    /// Conjugacy class of `a`.
    pub fn conjugacy_class(&self, a: Elem) -> ElementSubset {
        ElementSubset::from_elements(self, self.elements().map(|g| self.conj(a, g)))
    }

    /// Union of the conjugacy classes of the given elements: the smallest
    /// normal subset containing them.
    pub fn normal_subset_generated(&self, seed: impl IntoIterator<Item = Elem>) -> ElementSubset {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for s in seed {
            if bits.contains(s) {
                continue;
            }
            for g in self.elements() {
                bits.insert(self.conj(s, g));
            }
        }
        ElementSubset::from_bits(self, bits)
    }

    /// Smallest normal subgroup containing `seed`.
    pub fn normal_closure(&self, seed: impl IntoIterator<Item = Elem>) -> Subgroup {
        self.closure_of(&self.normal_subset_generated(seed))
    }

    /// `S^{*n}`: products of at most `n` elements of `S ∪ S⁻¹`, including the
    /// empty product.
    pub fn star_power(&self, s: &ElementSubset, n: usize) -> ElementSubset {
        let steps = s.symmetrized(self).to_vec();
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(IDENTITY);
        let mut frontier = vec![IDENTITY];
        for _ in 0..n {
            let mut next = Vec::new();
            for &x in &frontier {
                for &t in &steps {
                    let y = self.mul(x, t);
                    if !bits.contains(y) {
                        bits.insert(y);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        ElementSubset::from_bits(self, bits)
    }

    /// Least `n` with `target ⊆ S^{*n}`, or `None` if `target ⊄ ⟨S⟩`.
    pub fn star_depth(&self, s: &ElementSubset, target: &ElementSubset) -> Option<usize> {
        let steps = s.symmetrized(self).to_vec();
        let mut depth = vec![usize::MAX; self.order()];
        depth[IDENTITY] = 0;
        let mut frontier = vec![IDENTITY];
        let mut level = 0;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &x in &frontier {
                for &t in &steps {
                    let y = self.mul(x, t);
                    if depth[y] == usize::MAX {
                        depth[y] = level;
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        target.iter().map(|t| (depth[t] != usize::MAX).then_some(depth[t])).try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// `⟨[s, t] : s ∈ S, t ∈ T⟩` for normal subsets `S` and `T`, which equals
    /// `[⟨S⟩, ⟨T⟩]`.
    pub fn commutator_of_subsets(&self, s: &ElementSubset, t: &ElementSubset) -> Result<Subgroup> {
        if !s.is_normal() {
            return Err(Error::NotNormalSubset("left argument of the commutator".into()));
        }
        if !t.is_normal() {
            return Err(Error::NotNormalSubset("right argument of the commutator".into()));
        }
        Ok(self.raw_commutator(s, t))
    }

    /// `[H, K]` for normal subgroups.
    pub fn commutator_subgroup(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
        self.commutator_of_subsets(h.as_subset(), k.as_subset())
    }

    fn raw_commutator(&self, s: &ElementSubset, t: &ElementSubset) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        let tv = t.to_vec();
        for a in s.iter() {
            for &b in &tv {
                bits.insert(self.comm(a, b));
            }
        }
        self.closure(bits.ones())
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = ElementSubset::whole(self);
        self.raw_commutator(&g, &g)
    }

    pub fn center(&self) -> Subgroup {
        self.closure(self.elements().filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z))))
    }

    /// The set product `HK`, provided it is a subgroup (always the case when
    /// either factor is normal).
    pub fn subgroup_product(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
        let joined = self.closure(h.generators().iter().chain(k.generators()).copied());
        if !(h.is_normal() || k.is_normal()) {
            let mut product = FixedBitSet::with_capacity(self.order());
            let kv: Vec<Elem> = k.elements().collect();
            for a in h.elements() {
                for &b in &kv {
                    product.insert(self.mul(a, b));
                }
            }
            if product.count_ones(..) != joined.order() {
                return Err(Error::ProductNotSubgroup);
            }
        }
        Ok(joined)
    }

    /// Product of a list of normal subgroups.
    pub fn product_of(&self, parts: &[&Subgroup]) -> Subgroup {
        self.closure(parts.iter().flat_map(|p| p.generators().iter().copied()))
    }

    /// `a ≡ b (mod P)`, i.e. `a b⁻¹ ∈ P`, for a normal subgroup `P`.
    pub fn congruent_mod(&self, a: Elem, b: Elem, p: &Subgroup) -> Result<bool> {
        if !p.is_normal() {
            return Err(Error::NotNormal("modulus of a congruence".into()));
        }
        Ok(p.contains(self.mul(a, self.inv(b))))
    }

    /// Order of `a` modulo a normal subgroup.
    pub fn order_modulo(&self, a: Elem, p: &Subgroup) -> usize {
        let mut x = a;
        let mut k = 1;
        while !p.contains(x) {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}
