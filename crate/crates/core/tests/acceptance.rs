//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p verba --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use verba::groups::{builtin_group, FiniteGroup, DEFAULT_ORDER_CAP};
use verba::harness::{default_catalog, default_tuples, parse_ocw, parse_tuple_spec, run_suite, survey, CheckId, SuiteConfig, SuiteReport};
use verba::series::{build_delta_series, build_gamma_series, verify_series};
use verba::verbal::{verbal_subgroup, Mode};
use verba::words::gamma;

/// Enumeration budget for every exhaustive step below.
const BUDGET: u64 = 100_000_000;
const SEED: u64 = 2024;
const STRUCTURE_LIMIT: Duration = Duration::from_secs(1);
const GENERAL_SUITE_LIMIT: Duration = Duration::from_secs(10 * 60);
const DELTA_LIMIT: Duration = Duration::from_secs(15 * 60);
const LINEARITY_ORDER_CAP: usize = 48;
const DELTA_2_ORDER_CAP: usize = 24;
const SUBSTITUTION_ORDER_CAP: usize = 24;
const SURVEY_MAX_ARITY: usize = 3;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn g(spec: &str) -> FiniteGroup {
    builtin_group(spec, DEFAULT_ORDER_CAP).unwrap()
}

fn catalog() -> Vec<FiniteGroup> {
    default_catalog().iter().map(|s| g(s)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(started: Instant, limit: Duration) -> Result<Duration, String> {
    let took = started.elapsed();
    ensure(took <= limit, || format!("took {took:.1?}, limit {limit:?}"))?;
    Ok(took)
}

fn structural_constants() -> Verdict {
    let started = Instant::now();
    for (k, spec) in [(1, "sym:4"), (2, "sym:4"), (3, "dih:4")] {
        let group = g(spec);
        let series = build_delta_series(&group, &parse_tuple_spec(&vec!["G"; 1 << k].join(","), &group).map_err(|e| e.to_string())?, k)
            .map_err(|e| e.to_string())?;
        let t = (1 << k) + (1 << (k - 1)) - 1;
        ensure(series.len() == t, || format!("delta_{k} on {spec}: {} factors, expected {t}", series.len()))?;
    }
    for spec in ["sym:4", "dih:8", "heis:3"] {
        let group = g(spec);
        for r in 1..=4 {
            let tuple = parse_tuple_spec(&vec!["G"; r].join(","), &group).map_err(|e| e.to_string())?;
            let series = build_gamma_series(&group, &tuple, BUDGET).map_err(|e| e.to_string())?;
            let top = verbal_subgroup(&group, &gamma(r), &tuple, BUDGET).map_err(|e| e.to_string())?;
            let bottom = group.commutator_subgroup(&top, &top).map_err(|e| e.to_string())?;
            ensure(series.len() == r, || format!("gamma_{r} on {spec}: {} factors", series.len()))?;
            ensure(series.top == top && series.bottom == bottom, || format!("gamma_{r} on {spec}: wrong endpoints"))?;
            ensure(series.factors.first().map(|f| &f.lower) == Some(&bottom), || {
                format!("gamma_{r} on {spec}: chain starts off the bottom")
            })?;
            ensure(series.factors.last().map(|f| &f.upper) == Some(&top), || format!("gamma_{r} on {spec}: chain ends off the top"))?;
        }
    }
    let took = within(started, STRUCTURE_LIMIT)?;
    Ok(format!("delta factor counts 2, 5, 11; gamma_1..gamma_4 endpoints exact ({took:.2?})"))
}

fn suite_summary(report: &SuiteReport) -> Result<String, String> {
    let t = report.totals();
    if let Some(bad) = report.failures().next() {
        return Err(format!("{} failures, first {} on {} {} {}: {}", t.fail, bad.id, bad.group, bad.word, bad.tuple, bad.detail));
    }
    ensure(t.skipped == 0 && t.sampled_pass == 0, || format!("{} skipped, {} sampled", t.skipped, t.sampled_pass))?;
    ensure(t.pass > 0, || "no checks ran".into())?;
    Ok(format!("{} checks pass", t.pass))
}

fn general_suite() -> Verdict {
    let started = Instant::now();
    let config = SuiteConfig {
        ids: CheckId::GENERAL.to_vec(),
        words: ["gamma_2", "gamma_3", "delta_2"].map(String::from).to_vec(),
        mode: Mode::Exhaustive,
        seed: SEED,
        budget: BUDGET,
    };
    let report = run_suite(&default_catalog(), &config).map_err(|e| e.to_string())?;
    let summary = suite_summary(&report)?;
    let ids: BTreeSet<CheckId> = report.reports.iter().map(|r| r.id).collect();
    ensure(ids.len() == CheckId::GENERAL.len(), || format!("only {} of the general-word ids ran", ids.len()))?;
    let took = within(started, GENERAL_SUITE_LIMIT)?;
    Ok(format!("{summary} over {} groups ({took:.1?})", default_catalog().len()))
}

fn gamma_linearity() -> Verdict {
    let mut factors = 0;
    let mut series_count = 0;
    for group in catalog().iter().filter(|g| g.order() <= LINEARITY_ORDER_CAP) {
        for r in 1..=4 {
            for text in default_tuples(group, r, SEED) {
                let tuple = parse_tuple_spec(&text, group).map_err(|e| e.to_string())?;
                let series = build_gamma_series(group, &tuple, BUDGET).map_err(|e| e.to_string())?;
                let report = verify_series(group, &series, Mode::Exhaustive, BUDGET).map_err(|e| e.to_string())?;
                if let Some(f) = report.factors.iter().find(|f| !f.linearity.holds) {
                    return Err(format!("gamma_{r} on {} ({text}): factor {} not linear", group.label(), f.index));
                }
                factors += report.factors.len();
                series_count += 1;
            }
        }
    }
    Ok(format!("{factors} factors in {series_count} series, zero counterexamples"))
}

fn delta_verification() -> Verdict {
    let started = Instant::now();
    let mut checked = 0;
    for group in catalog() {
        let mut jobs: Vec<(u32, String)> = default_tuples(&group, 2, SEED).into_iter().map(|t| (1, t)).collect();
        if group.order() <= DELTA_2_ORDER_CAP {
            jobs.extend(["G,G,G,G", "derived,derived,derived,derived", "G,derived,G,derived"].map(|t| (2, t.to_string())));
        }
        for (k, text) in jobs {
            let tuple = parse_tuple_spec(&text, &group).map_err(|e| e.to_string())?;
            let series = build_delta_series(&group, &tuple, k).map_err(|e| e.to_string())?;
            let report = verify_series(&group, &series, Mode::Exhaustive, BUDGET).map_err(|e| e.to_string())?;
            ensure(report.chain_ok && report.endpoints_ok && report.count_ok && report.construction_ok, || {
                format!("delta_{k} on {} ({text}): chain, endpoint or length check failed", group.label())
            })?;
            if let Some(f) = report.factors.iter().find(|f| !f.passed()) {
                return Err(format!("delta_{k} on {} ({text}): factor {} fails: {f:?}", group.label(), f.index));
            }
            checked += 1;
        }
    }
    let took = within(started, DELTA_LIMIT)?;
    Ok(format!("{checked} series, every factor verified ({took:.1?})"))
}

fn substitution() -> Verdict {
    let small: Vec<String> = default_catalog().into_iter().filter(|s| g(s).order() <= SUBSTITUTION_ORDER_CAP).collect();
    let config = SuiteConfig {
        ids: vec![CheckId::Substitution],
        words: ["gamma_2", "gamma_3", "delta_2"].map(String::from).to_vec(),
        mode: Mode::Exhaustive,
        seed: SEED,
        budget: BUDGET,
    };
    let report = run_suite(&small, &config).map_err(|e| e.to_string())?;
    Ok(format!("{} on {} groups with x^2, x^3", suite_summary(&report)?, small.len()))
}

fn generator_bound() -> Verdict {
    let groups = catalog();
    let mut rows = 0;
    let mut skipped = 0;
    for word in ["gamma_2", "gamma_3"] {
        let w = parse_ocw(word).map_err(|e| e.to_string())?;
        let r = w.arity();
        if r > SURVEY_MAX_ARITY {
            continue;
        }
        for row in survey(&groups, &w, SEED, BUDGET).map_err(|e| e.to_string())? {
            let Some(m) = row.m else {
                skipped += 1;
                continue;
            };
            let bound = (m as u128).pow(1 << (r - 1));
            ensure(row.generator_bound == Some(bound), || {
                format!("{} {}: recorded bound {:?}, expected {bound}", row.group, row.tuple, row.generator_bound)
            })?;
            for count in row.factor_generators.split(';') {
                let count: u128 = count.parse().map_err(|_| format!("{} {}: bad generator list", row.group, row.tuple))?;
                ensure(count <= bound, || format!("{} {} {word}: {count} generators > {bound}", row.group, row.tuple))?;
            }
            rows += 1;
        }
    }
    ensure(skipped == 0, || format!("{skipped} rows were not exhaustive"))?;
    Ok(format!("{rows} rows, zero violations"))
}

fn pinned_values() -> Verdict {
    let mut lines = 0;
    for line in include_str!("golden/pinned_orders.txt").lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [word, spec, tuple, order] = fields[..] else {
            return Err(format!("bad golden line {line:?}"));
        };
        let expected: usize = order.parse().map_err(|_| format!("bad order in {line:?}"))?;
        let from_oracle = oracle::verbal_order(word, spec);
        ensure(from_oracle == expected, || format!("oracle gives {from_oracle} for {word} on {spec}, golden {expected}"))?;
        let group = g(spec);
        let tuple = parse_tuple_spec(tuple, &group).map_err(|e| e.to_string())?;
        let w = parse_ocw(word).map_err(|e| e.to_string())?;
        let got = verbal_subgroup(&group, &w, &tuple, BUDGET).map_err(|e| e.to_string())?.order();
        ensure(got == expected, || format!("{word} on {spec}: {got}, golden {expected}"))?;
        lines += 1;
    }
    Ok(format!("{lines} golden orders match the brute-force oracle"))
}

fn determinism() -> Verdict {
    let catalog = default_catalog();
    let config = SuiteConfig {
        ids: CheckId::ALL.to_vec(),
        words: ["gamma_2", "gamma_3", "delta_2"].map(String::from).to_vec(),
        mode: Mode::Exhaustive,
        seed: SEED,
        budget: BUDGET,
    };
    let run = |threads: usize| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        let report = pool.install(|| run_suite(&catalog, &config)).map_err(|e| e.to_string())?;
        serde_json::to_string(&report).map_err(|e| e.to_string())
    };
    let first = run(1)?;
    for threads in [1, 3, 8] {
        ensure(run(threads)? == first, || format!("report differs with {threads} workers"))?;
    }
    Ok(format!("{} bytes identical across 1, 3 and 8 workers", first.len()))
}

/// Elementwise arithmetic written from scratch, sharing nothing with the crate.
mod oracle {
    use std::collections::BTreeSet;

    type Perm = Vec<u8>;

    /// `a` then `b`, acting on the right.
    fn compose(a: &Perm, b: &Perm) -> Perm {
        a.iter().map(|&i| b[i as usize]).collect()
    }

    fn inverse(a: &Perm) -> Perm {
        let mut out = vec![0; a.len()];
        for (i, &j) in a.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        out
    }

    fn all_perms(n: u8) -> Vec<Perm> {
        let mut out = vec![vec![]];
        for k in 0..n {
            out = out
                .into_iter()
                .flat_map(|p: Perm| {
                    (0..=k as usize).map(move |at| {
                        let mut q = p.clone();
                        q.insert(at, k);
                        q
                    })
                })
                .collect();
        }
        out
    }

    fn is_even(p: &Perm) -> bool {
        let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        inversions % 2 == 0
    }

    /// Unit quaternions `±1, ±i, ±j, ±k` as (sign, unit) with unit 0..4 for 1, i, j, k.
    type Quat = (i8, u8);

    fn qmul(a: Quat, b: Quat) -> Quat {
        // Row: left unit, column: right unit.
        const TABLE: [[(i8, u8); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let (s, u) = TABLE[a.1 as usize][b.1 as usize];
        (a.0 * b.0 * s, u)
    }

    fn qinv(a: Quat) -> Quat {
        if a.1 == 0 {
            a
        } else {
            (-a.0, a.1)
        }
    }

    fn closure<T: Ord + Clone>(seed: BTreeSet<T>, identity: T, mul: impl Fn(&T, &T) -> T) -> usize {
        let mut set = seed;
        set.insert(identity);
        loop {
            let products: BTreeSet<T> = set.iter().flat_map(|a| set.iter().map(|b| mul(a, b))).collect();
            if products.len() == set.len() {
                return set.len();
            }
            set = products;
        }
    }

    fn commutators<T: Ord + Clone>(xs: &[T], ys: &[T], mul: &impl Fn(&T, &T) -> T, inv: &impl Fn(&T) -> T) -> BTreeSet<T> {
        xs.iter().flat_map(|a| ys.iter().map(|b| mul(&mul(&inv(a), &inv(b)), &mul(a, b)))).collect()
    }

    fn perm_order(elements: Vec<Perm>, depth: u32) -> usize {
        let identity: Perm = (0..elements[0].len() as u8).collect();
        let mut values = elements;
        for _ in 0..depth {
            values = commutators(&values, &values, &compose, &inverse).into_iter().collect();
        }
        closure(values.into_iter().collect(), identity, compose)
    }

    /// `|w(G,…,G)|` for `gamma_2` or `delta_2` on the groups of the golden file.
    pub fn verbal_order(word: &str, spec: &str) -> usize {
        let depth = match word {
            "gamma_2" => 1,
            "delta_2" => 2,
            other => panic!("oracle has no word {other}"),
        };
        match spec {
            "sym:3" => perm_order(all_perms(3), depth),
            "sym:4" => perm_order(all_perms(4), depth),
            "alt:4" => perm_order(all_perms(4).into_iter().filter(is_even).collect(), depth),
            "quat:8" => {
                let units: Vec<Quat> = [1, -1].iter().flat_map(|&s| (0..4).map(move |u| (s, u))).collect();
                let mul = |a: &Quat, b: &Quat| qmul(*a, *b);
                let inv = |a: &Quat| qinv(*a);
                let mut values = units;
                for _ in 0..depth {
                    values = commutators(&values, &values, &mul, &inv).into_iter().collect();
                }
                closure(values.into_iter().collect(), (1, 0), mul)
            }
            other => panic!("oracle has no group {other}"),
        }
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("structural constants", structural_constants),
        ("general-word suite exhaustive pass", general_suite),
        ("gamma series linearity", gamma_linearity),
        ("delta series verification", delta_verification),
        ("substitution with powers", substitution),
        ("generator-count bound", generator_bound),
        ("pinned verbal orders", pinned_values),
        ("suite determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
