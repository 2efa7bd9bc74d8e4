use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::verbal::NormalTuple;
use crate::words::{delta, Family, OcwTree, Var};

use super::{Builder, ExtensionEntry, LinearSeries, Provenance, SeriesFactor, SeriesKind};

/// Largest `k` accepted by [`build_delta_series`].
pub const MAX_DELTA_DEPTH: u32 = 3;

/// A factor while the recursion is running: entries keyed by variable.
#[derive(Clone)]
struct Annotated {
    word: OcwTree,
    entries: BTreeMap<Var, ExtensionEntry>,
    linear: Var,
    provenance: Provenance,
}

impl Annotated {
    fn shift_x(&self, offset: u32) -> Annotated {
        let move_var = |v: Var| if v.family == Family::X { Var::x(v.index + offset) } else { v };
        Annotated {
            word: self.word.shift(Family::X, offset),
            entries: self.entries.iter().map(|(v, e)| (move_var(*v), e.clone())).collect(),
            linear: move_var(self.linear),
            provenance: self.provenance,
        }
    }

    fn canonical(self) -> Annotated {
        let (word, map) = self.word.canonicalize_y();
        let rename = |v: Var| map.get(&v).copied().unwrap_or(v);
        Annotated {
            word,
            entries: self.entries.into_iter().map(|(v, e)| (rename(v), e)).collect(),
            linear: rename(self.linear),
            provenance: self.provenance,
        }
    }
}

/// `V_0 ≤ V_1 ≤ ... ≤ V_t` with factor `i` describing `V_i / V_{i-1}`.
struct Chain {
    terms: Vec<Subgroup>,
    factors: Vec<Annotated>,
}

impl Chain {
    fn top(&self) -> &Subgroup {
        self.terms.last().expect("chain is non-empty")
    }
}

struct Ctx<'a, 'g> {
    b: &'a mut Builder<'g>,
    ns: &'a [Subgroup],
}

impl Ctx<'_, '_> {
    fn plain(&self, index: usize) -> ExtensionEntry {
        ExtensionEntry::plain(index, self.ns[index].clone())
    }

    /// `δ_k` on `x_{first} ..` (or `y_{first} ..`).
    fn block_word(k: u32, family: Family, first: u32) -> OcwTree {
        let base = delta(k).shift(Family::X, first - 1);
        match family {
            Family::X => base,
            Family::Y => base.rename(&|v| Var::y(v.index)),
        }
    }

    fn chain(&mut self, offset: usize, k: u32) -> Result<Chain> {
        if k == 1 {
            return self.base(offset);
        }
        let h = 1usize << (k - 1);
        let h32 = h as u32;
        let tag = format!("k={k},N{}..N{}: ", offset + 1, offset + 2 * h);
        let left = self.chain(offset, k - 1)?;
        let right = self.chain(offset + h, k - 1)?;
        let s = left.factors.len();
        let d1 = left.top().clone();
        let d2 = right.top().clone();
        let dk = self.b.comm(&d1, &d2)?;
        let c1 = self.b.comm(&d1, &dk)?;
        let c2 = self.b.comm(&dk, &d2)?;

        let base_left = self.b.comm(&left.terms[0], &d2)?;
        self.b.contained(format!("{tag}[V_0(N1), D2] <= [D1, Dk]"), &base_left, &c1);
        let mut upper = Vec::with_capacity(s + 1);
        for (i, v) in left.terms.iter().enumerate() {
            let term = self.b.prod(&self.b.comm(v, &d2)?, &c1)?;
            self.b.record(format!("{tag}R_{i}"), &term);
            upper.push(term);
        }
        let base_right = self.b.comm(&d1, &right.terms[0])?;
        self.b.contained(format!("{tag}[D1, V_0(N2)] <= [Dk, D2]"), &base_right, &c2);
        let mut ws = Vec::with_capacity(s + 1);
        for (i, v) in right.terms.iter().enumerate() {
            let term = self.b.prod(&self.b.comm(&d1, v)?, &c2)?;
            self.b.record(format!("{tag}W_{i}"), &term);
            ws.push(term);
        }
        self.b.equal(format!("{tag}W_top = Dk"), &ws[s], &dk);
        let v0 = self.b.comm(&dk, &dk)?;
        self.b.contained(format!("{tag}V_0 <= [D1, Dk]"), &v0, &c1);
        let mut terms = vec![v0.clone()];
        for (i, w) in ws.iter().enumerate() {
            let z = self.b.comm(&d1, w)?;
            self.b.record(format!("{tag}Z_{}", i + 1), &z);
            terms.push(self.b.prod(&z, &v0)?);
        }
        self.b.equal(format!("{tag}halves meet at [D1, Dk]"), &terms[s + 1], &upper[0]);
        terms.extend(upper.into_iter().skip(1));
        for i in 1..terms.len() {
            self.b.contained(format!("{tag}V_{} <= V_{i}", i - 1), &terms[i - 1], &terms[i]);
        }
        self.b.equal(format!("{tag}V_top = Dk"), terms.last().expect("non-empty"), &dk);

        let mut factors = Vec::with_capacity(2 * s + 1);
        let head = Self::block_word(k - 1, Family::X, 1);
        let tail = Self::block_word(k - 1, Family::X, h32 + 1);
        let head_entries: BTreeMap<Var, ExtensionEntry> = (0..h).map(|j| (Var::x(j as u32 + 1), self.plain(offset + j))).collect();

        let mut top_entries = head_entries.clone();
        top_entries.extend((0..h).map(|j| (Var::x((h + j) as u32 + 1), self.plain(offset + h + j))));
        top_entries
            .insert(Var::y(1), ExtensionEntry { word: delta(k), components: (offset..offset + 2 * h).collect(), subgroup: dk.clone() });
        factors.push(Annotated {
            word: OcwTree::commutator(head.clone(), OcwTree::commutator(OcwTree::y(1), tail.clone())?)?,
            entries: top_entries,
            linear: Var::y(1),
            provenance: Provenance::DeltaTop,
        });

        for sub in &right.factors {
            let sub = sub.shift_x(h32);
            let fresh = sub.word.max_index(Family::Y);
            let yblock = Self::block_word(k - 1, Family::Y, fresh + 1);
            let mut entries = head_entries.clone();
            entries.extend(sub.entries.iter().map(|(v, e)| (*v, e.clone())));
            entries.extend((0..h).map(|j| (Var::y(fresh + j as u32 + 1), self.plain(offset + j))));
            let word = OcwTree::commutator(head.clone(), OcwTree::commutator(yblock, sub.word.clone())?)?;
            factors.push(Annotated { word, entries, linear: sub.linear, provenance: Provenance::DeltaLeft });
        }

        for sub in &left.factors {
            let mut entries = sub.entries.clone();
            entries.extend((0..h).map(|j| (Var::x((h + j) as u32 + 1), self.plain(offset + h + j))));
            let word = OcwTree::commutator(sub.word.clone(), tail.clone())?;
            factors.push(Annotated { word, entries, linear: sub.linear, provenance: Provenance::DeltaRight });
        }
        let factors = factors.into_iter().map(Annotated::canonical).collect();
        Ok(Chain { terms, factors })
    }

    fn base(&mut self, offset: usize) -> Result<Chain> {
        let (a, b) = (&self.ns[offset], &self.ns[offset + 1]);
        let d = self.b.comm(a, b)?;
        let v1 = self.b.comm(a, &d)?;
        let v0 = self.b.comm(&d, &d)?;
        let tag = format!("k=1,N{}..N{}: ", offset + 1, offset + 2);
        self.b.contained(format!("{tag}V_0 <= V_1"), &v0, &v1);
        self.b.contained(format!("{tag}V_1 <= V_2"), &v1, &d);
        let w = delta(1);
        let first = Annotated {
            word: w.clone(),
            entries: BTreeMap::from([
                (Var::x(1), self.plain(offset)),
                (Var::x(2), ExtensionEntry { word: w.clone(), components: vec![offset, offset + 1], subgroup: d.clone() }),
            ]),
            linear: Var::x(2),
            provenance: Provenance::DeltaBase,
        };
        let second = Annotated {
            word: w,
            entries: BTreeMap::from([(Var::x(1), self.plain(offset)), (Var::x(2), self.plain(offset + 1))]),
            linear: Var::x(1),
            provenance: Provenance::DeltaBase,
        };
        Ok(Chain { terms: vec![v0, v1, d], factors: vec![first, second] })
    }
}

/// The series `δ_k(N)' = V_0 ≤ V_1 ≤ ... ≤ V_t = δ_k(N)` of length
/// `t = 2^k + 2^(k-1) - 1`, built recursively from two copies of the series
/// for `δ_{k-1}`, one on each half of the tuple. Factor `V_i / V_{i-1}`
/// carries an extended word of `δ_k` of degree at most `k - 1`.
pub fn build_delta_series(group: &FiniteGroup, tuple: &NormalTuple, k: u32) -> Result<LinearSeries> {
    if k == 0 || k > MAX_DELTA_DEPTH {
        return Err(Error::PreconditionFailed(format!("delta series needs 1 <= k <= {MAX_DELTA_DEPTH}, got {k}")));
    }
    let r = 1usize << k;
    if tuple.len() != r {
        return Err(Error::ArityMismatch { expected: r, got: tuple.len() });
    }
    let ns: Vec<Subgroup> = tuple.subgroups().into_iter().cloned().collect();
    let mut b = Builder::new(group);
    let chain = Ctx { b: &mut b, ns: &ns }.chain(0, k)?;
    b.finish()?;
    let factors = chain
        .factors
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            let vars = a.word.variables();
            let linear_position = vars.binary_search(&a.linear).expect("linear variable occurs") + 1;
            let entries = vars.iter().map(|v| a.entries[v].clone()).collect();
            SeriesFactor {
                index: i + 1,
                lower: chain.terms[i].clone(),
                upper: chain.terms[i + 1].clone(),
                word: a.word,
                tuple: entries,
                linear_position,
                provenance: a.provenance,
            }
        })
        .collect();
    Ok(LinearSeries {
        kind: SeriesKind::Delta(k),
        base: tuple.clone(),
        factors,
        bottom: chain.terms[0].clone(),
        top: chain.terms.last().expect("non-empty").clone(),
        construction: b.construction,
        audit: b.audit,
    })
}
