use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::verbal::{verbal_subgroup_on_subgroups, NormalTuple};
use crate::words::gamma;

use super::{Builder, ExtensionEntry, LinearSeries, Provenance, SeriesFactor, SeriesKind};

/// Terms of the series for `γ_r` on `ns`, all lists 0-based: `heads[i]` is
/// `γ_{i+1}(N_1..N_{i+1})`, `qs[i]` is `Q_{i+1}` and `ps[i]` is `P_{i+1}`,
/// for `i` in `0..=r` (`heads` stops at `r - 1`).
struct Terms {
    heads: Vec<Subgroup>,
    qs: Vec<Subgroup>,
    ps: Vec<Subgroup>,
}

fn terms(b: &mut Builder<'_>, ns: &[Subgroup], budget: u64, tag: &str) -> Result<Terms> {
    let group = b.group;
    let r = ns.len();
    let w = gamma(r);
    let mut heads = Vec::with_capacity(r);
    let mut qs = Vec::with_capacity(r + 1);
    for i in 1..=r {
        let head = verbal_subgroup_on_subgroups(group, &gamma(i), &NormalTuple::of_subgroups(group, ns[..i].to_vec())?, budget)?;
        let mut ni = ns.to_vec();
        ni[i - 1] = head.clone();
        let q = verbal_subgroup_on_subgroups(group, &w, &NormalTuple::of_subgroups(group, ni)?, budget)?;
        b.record(format!("{tag}gamma_{i}(N_1..N_{i})"), &head);
        b.record(format!("{tag}Q_{i}"), &q);
        heads.push(head);
        qs.push(q);
    }
    let whole = qs[0].clone();
    let last = b.comm(&whole, &whole)?;
    b.record(format!("{tag}Q_{}", r + 1), &last);
    qs.push(last);
    let mut ps = vec![qs[r].clone()];
    for i in (0..r).rev() {
        let p = b.prod(&qs[i], &ps[0])?;
        b.record(format!("{tag}P_{}", i + 1), &p);
        ps.insert(0, p);
    }
    Ok(Terms { heads, qs, ps })
}

/// The series `γ_r(N)' = P_{r+1} ≤ P_r ≤ ... ≤ P_1 = γ_r(N)` where
/// `P_i = Q_i Q_{i+1} ... Q_{r+1}`, `Q_i = γ_r(N_1, .., γ_i(N_1..N_i), .., N_r)`
/// and `Q_{r+1} = [γ_r(N), γ_r(N)]`. The factor `P_i / P_{i+1}` carries `γ_r`
/// on that tuple, linear in position `i`.
pub fn build_gamma_series(group: &FiniteGroup, tuple: &NormalTuple, budget: u64) -> Result<LinearSeries> {
    let r = tuple.len();
    if r == 0 {
        return Err(Error::PreconditionFailed("gamma series needs r >= 1".into()));
    }
    let ns: Vec<Subgroup> = tuple.subgroups().into_iter().cloned().collect();
    let mut b = Builder::new(group);
    let t = terms(&mut b, &ns, budget, "")?;
    for i in 0..r {
        b.contained(format!("P_{} <= P_{}", i + 2, i + 1), &t.ps[i + 1], &t.ps[i]);
    }
    if r >= 2 {
        let star = terms(&mut b, &ns[..r - 1], budget, "*")?;
        let last = &ns[r - 1];
        for i in 0..r - 1 {
            let inner = b.comm(&star.qs[i], last)?;
            let outer = b.comm(&inner, &star.qs[i])?;
            b.contained(format!("[[Q*_{0}, N_{r}], Q*_{0}] <= P_{1}", i + 1, i + 2), &outer, &t.ps[i + 1]);
            let lifted = b.comm(&star.ps[i + 1], last)?;
            b.contained(format!("[P*_{0}, N_{r}] <= P_{0}", i + 2), &lifted, &t.ps[i + 1]);
        }
        let top = b.comm(&star.qs[r - 1], last)?;
        b.contained(format!("[Q*_{r}, N_{r}] <= Q_{r}"), &top, &t.qs[r - 1]);
    }
    b.finish()?;

    let w = gamma(r);
    let factors = (1..=r)
        .rev()
        .map(|i| {
            let entries = (0..r)
                .map(|j| {
                    if j + 1 == i {
                        ExtensionEntry { word: gamma(i), components: (0..i).collect(), subgroup: t.heads[i - 1].clone() }
                    } else {
                        ExtensionEntry::plain(j, ns[j].clone())
                    }
                })
                .collect();
            SeriesFactor {
                index: i,
                lower: t.ps[i].clone(),
                upper: t.ps[i - 1].clone(),
                word: w.clone(),
                tuple: entries,
                linear_position: i,
                provenance: Provenance::Gamma,
            }
        })
        .collect();
    Ok(LinearSeries {
        kind: SeriesKind::Gamma(r),
        base: tuple.clone(),
        factors,
        bottom: t.ps[r].clone(),
        top: t.ps[0].clone(),
        construction: b.construction,
        audit: b.audit,
    })
}
