//! Bounded exhaustive search over intersection arrays.
//!
//! Arrays are generated already satisfying the monotonicity and dominance
//! conditions. Each complete array then goes through, in order of cost:
//! non-negativity and integrality of the k_i, the pruning rules, the exact
//! θ_1 window test (two Sturm counts on the full intersection matrix), and
//! finally the full feasibility report.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::array::{rational_string, IntersectionArray};
use crate::checks::search::{
    A3_AT_MOST_ONE, B1_LOWER_BOUND, BIPARTITE_B2, BIPARTITE_DIVISIBILITY, BIPARTITE_K, EQUAL_B1,
    EQUAL_C2, EQUAL_K3, EQUAL_NON_ANTIPODAL, NON_BIPARTITE_K,
};
use crate::checks::{report_in, CheckOptions, ConditionSet, Context, FeasibilityReport};
use crate::corpus::{table_one, CorpusEntry};
use crate::spectral::full_matrix;

/// Half-open interval (lo, hi]; a missing endpoint is unbounded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theta1Window {
    pub lo: Option<BigRational>,
    pub hi: Option<BigRational>,
}

impl Theta1Window {
    pub fn new(lo: Option<BigRational>, hi: Option<BigRational>) -> Self {
        Theta1Window { lo, hi }
    }

    pub fn between(lo: i64, hi: i64) -> Self {
        Theta1Window::new(Some(BigRational::from_integer(lo.into())), Some(BigRational::from_integer(hi.into())))
    }

    pub fn at_most(hi: i64) -> Self {
        Theta1Window::new(None, Some(BigRational::from_integer(hi.into())))
    }

    /// The window is contained in (1, 2].
    pub fn within_one_two(&self) -> bool {
        let one = BigRational::one();
        let two = BigRational::from_integer(2.into());
        self.lo.as_ref().is_some_and(|lo| *lo >= one) && self.hi.as_ref().is_some_and(|hi| *hi <= two)
    }

    pub fn contains_window(&self, other: &Theta1Window) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a >= b,
        };
        lo_ok && hi_ok
    }

    /// Exact test of lo < θ_1 ≤ hi, counting eigenvalues of the full
    /// intersection matrix above each endpoint. θ_0 = k is always the top one.
    pub fn contains_theta1(&self, arr: &IntersectionArray) -> bool {
        let m = full_matrix(arr);
        if let Some(hi) = &self.hi {
            if m.count_above(hi) > 1 {
                return false;
            }
        }
        if let Some(lo) = &self.lo {
            if m.count_above(lo) < 2 {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Theta1Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), rational_string);
        let hi = self.hi.as_ref().map_or("inf".to_string(), rational_string);
        write!(f, "({lo}, {hi}]")
    }
}

impl Serialize for Theta1Window {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSpec {
    pub k_min: i64,
    pub k_max: i64,
    pub d_min: usize,
    pub d_max: usize,
    pub theta1_window: Theta1Window,
    pub conditions: ConditionSet,
    /// Apply the pruning rules; they only ever skip arrays the condition
    /// set would reject.
    pub pruning: bool,
    pub strict_paper: bool,
    /// Only bipartite (`Some(true)`) or only non-bipartite arrays.
    pub bipartite: Option<bool>,
    pub parallelism: usize,
    pub node_budget: Option<u64>,
}

impl SearchSpec {
    pub fn new(k_min: i64, k_max: i64, d_min: usize, d_max: usize, window: Theta1Window) -> Self {
        SearchSpec {
            k_min,
            k_max,
            d_min,
            d_max,
            theta1_window: window,
            conditions: ConditionSet::Paper,
            pruning: true,
            strict_paper: false,
            bipartite: None,
            parallelism: 1,
            node_budget: None,
        }
    }

    pub fn with_conditions(mut self, conditions: ConditionSet) -> Self {
        self.conditions = conditions;
        self
    }

    pub fn with_parallelism(mut self, n: usize) -> Self {
        self.parallelism = n;
        self
    }

    pub fn with_bipartite(mut self, bipartite: Option<bool>) -> Self {
        self.bipartite = bipartite;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::InvalidSpec(m.to_string()));
        if self.k_min < 3 {
            return bad("k-min must be at least 3");
        }
        if self.d_min < 2 {
            return bad("d-min must be at least 2");
        }
        if self.k_max < self.k_min {
            return bad("k-max is below k-min");
        }
        if self.d_max < self.d_min {
            return bad("d-max is below d-min");
        }
        if self.parallelism == 0 {
            return bad("parallelism must be at least 1");
        }
        if let (Some(lo), Some(hi)) = (&self.theta1_window.lo, &self.theta1_window.hi) {
            if lo >= hi {
                return bad("empty theta1 window");
            }
        }
        Ok(())
    }

    fn check_options(&self) -> CheckOptions {
        CheckOptions { conditions: self.conditions, strict_paper: self.strict_paper }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("invalid search: {0}")]
    InvalidSpec(String),
    #[error("node budget of {budget} exhausted after visiting {visited} arrays")]
    NodeBudgetExceeded { budget: u64, visited: u64 },
}

/// A skip rule: when it fires on an array, the array is rejected by the
/// condition set or lies outside the θ_1 window.
#[derive(Debug, Clone, Copy)]
pub struct PruningRule {
    pub name: &'static str,
    /// Only valid when the search window lies in (1, 2] and k ≥ 5.
    pub windowed: bool,
    pub extra_paper: bool,
    fires: fn(&IntersectionArray) -> bool,
}

impl PruningRule {
    /// Whether the rule is switched on for this search and this array's
    /// shape, independently of the array's entries.
    pub fn active(&self, spec: &SearchSpec, arr: &IntersectionArray) -> bool {
        spec.pruning
            && spec.conditions == ConditionSet::Paper
            && !(self.extra_paper && spec.strict_paper)
            && arr.diameter() == 3
            && (!self.windowed || (arr.valency() >= 5 && spec.theta1_window.within_one_two()))
    }

    pub fn prunes(&self, spec: &SearchSpec, arr: &IntersectionArray) -> bool {
        self.active(spec, arr) && (self.fires)(arr)
    }
}

fn k3_fraction(arr: &IntersectionArray) -> (i128, i128) {
    let num = (0..3).map(|i| arr.b(i) as i128).product();
    let den = (1..=3).map(|i| arr.c(i) as i128).product();
    (num, den)
}

fn equal_branch(arr: &IntersectionArray) -> bool {
    arr.b(2) == arr.a(3)
}

pub const PRUNING_RULES: &[PruningRule] = &[
    PruningRule { name: B1_LOWER_BOUND, windowed: false, extra_paper: false, fires: |a| 3 * a.b(1) < a.valency() + 1 },
    PruningRule {
        name: BIPARTITE_DIVISIBILITY,
        windowed: false,
        extra_paper: false,
        fires: |a| {
            let c2 = a.valency() - a.b(2);
            a.is_bipartite() && !(c2 > 0 && (a.b(2) * (a.b(2) - 1)) % c2 == 0)
        },
    },
    PruningRule { name: A3_AT_MOST_ONE, windowed: true, extra_paper: false, fires: |a| a.a(3) > 1 },
    PruningRule {
        name: EQUAL_B1,
        windowed: true,
        extra_paper: false,
        fires: |a| equal_branch(a) && a.b(1) != a.valency() - 1,
    },
    PruningRule {
        name: EQUAL_C2,
        windowed: true,
        extra_paper: false,
        fires: |a| equal_branch(a) && 3 * a.c(2) < a.valency() - 4,
    },
    PruningRule {
        name: EQUAL_K3,
        windowed: true,
        extra_paper: false,
        fires: |a| {
            let k = a.valency() as i128;
            let (num, den) = k3_fraction(a);
            equal_branch(a) && num * (k - 4) > 3 * k * den
        },
    },
    PruningRule {
        name: EQUAL_NON_ANTIPODAL,
        windowed: true,
        extra_paper: true,
        fires: |a| {
            let (num, den) = k3_fraction(a);
            let k = a.valency() as i128;
            equal_branch(a) && !a.is_antipodal() && num % den == 0 && {
                let k3 = num / den;
                k > k3 * (k3 - 1)
            }
        },
    },
    PruningRule {
        name: NON_BIPARTITE_K,
        windowed: true,
        extra_paper: false,
        fires: |a| !equal_branch(a) && !a.is_bipartite() && a.valency() > 25,
    },
    PruningRule {
        name: BIPARTITE_B2,
        windowed: true,
        extra_paper: false,
        fires: |a| a.is_bipartite() && !(2..=4).contains(&a.b(2)),
    },
    PruningRule { name: BIPARTITE_K, windowed: true, extra_paper: false, fires: |a| a.is_bipartite() && a.valency() > 16 },
];

/// First pruning rule that skips `arr` under `spec`.
pub fn first_pruning_rule(spec: &SearchSpec, arr: &IntersectionArray) -> Option<&'static PruningRule> {
    PRUNING_RULES.iter().find(|r| r.prunes(spec, arr))
}

/// Why an array was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Pruned(&'static str),
    Rejected(String),
}

pub const WINDOW_REJECTION: &str = "theta1-window";
pub const BIPARTITE_FILTER: &str = "bipartite-filter";

/// Runs the full pipeline on one array. The report is returned for accepted
/// arrays.
pub fn classify(spec: &SearchSpec, arr: &IntersectionArray) -> (Outcome, Option<FeasibilityReport>) {
    if let Some(want) = spec.bipartite {
        if arr.is_bipartite() != want {
            return (Outcome::Rejected(BIPARTITE_FILTER.into()), None);
        }
    }
    if arr.a_list().iter().any(|&a| a < 0) {
        return (Outcome::Rejected("a-nonnegative".into()), None);
    }
    if !arr.has_integral_kseq() {
        return (Outcome::Rejected("k-integral".into()), None);
    }
    if let Some(rule) = first_pruning_rule(spec, arr) {
        return (Outcome::Pruned(rule.name), None);
    }
    if !spec.theta1_window.contains_theta1(arr) {
        return (Outcome::Rejected(WINDOW_REJECTION.into()), None);
    }
    let ctx = Context::new(arr);
    let report = report_in(&ctx, spec.check_options());
    let failure = report.failures().next().map(|e| e.name.to_string());
    match failure {
        Some(name) => (Outcome::Rejected(name), None),
        None => (Outcome::Accepted, Some(report)),
    }
}

/// Full rejection without any pruning: outside the window or failing the
/// condition set.
pub fn rejected_without_pruning(spec: &SearchSpec, arr: &IntersectionArray) -> bool {
    !spec.theta1_window.contains_theta1(arr) || !report_in(&Context::new(arr), spec.check_options()).feasible
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned: BTreeMap<String, u64>,
    pub rejected: BTreeMap<String, u64>,
}

impl SearchStats {
    fn record(&mut self, outcome: &Outcome) {
        self.nodes += 1;
        match outcome {
            Outcome::Accepted => {}
            Outcome::Pruned(r) => *self.pruned.entry(r.to_string()).or_default() += 1,
            Outcome::Rejected(r) => *self.rejected.entry(r.clone()).or_default() += 1,
        }
    }

    fn merge(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        for (k, v) in other.pruned {
            *self.pruned.entry(k).or_default() += v;
        }
        for (k, v) in other.rejected {
            *self.rejected.entry(k).or_default() += v;
        }
    }

    pub fn pruned_total(&self) -> u64 {
        self.pruned.values().sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub spec: SearchSpec,
    pub accepted: Vec<FeasibilityReport>,
    pub stats: SearchStats,
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

impl SearchResult {
    pub fn arrays(&self) -> Vec<IntersectionArray> {
        self.accepted.iter().map(|r| r.array.clone()).collect()
    }

    /// Everything except timing, for determinism comparisons.
    pub fn payload(&self) -> serde_json::Value {
        json!({
            "accepted": self.accepted.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "stats": self.stats,
        })
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "summary": {
                "spec": self.spec,
                "accepted": self.accepted.len(),
                "nodes": self.stats.nodes,
                "pruned": self.stats.pruned,
                "rejected": self.stats.rejected,
                "elapsed_ms": self.elapsed.as_secs_f64() * 1000.0,
            }
        })
    }
}

/// One JSON line per accepted array.
pub fn accepted_line(report: &FeasibilityReport) -> serde_json::Value {
    json!({
        "array": report.array.to_string(),
        "b": report.array.b_list(),
        "c": report.array.c_list(),
        "verdict": "accepted",
        "flags": report.flags,
    })
}

fn b_tails(len: usize, max: i64, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let hi = cur.last().copied().unwrap_or(max);
    for x in (1..=hi).rev() {
        cur.push(x);
        b_tails(len, max, out, cur);
        cur.pop();
    }
}

/// Visits c_2..c_D non-decreasing with c_j ≤ b_{D-j}.
fn c_lists(b: &[i64], visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    fn go(b: &[i64], c: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let d = b.len();
        if c.len() == d {
            return visit(c);
        }
        let j = c.len() + 1;
        let lo = *c.last().unwrap();
        for x in lo..=b[d - j] {
            c.push(x);
            let keep_going = go(b, c, visit);
            c.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    go(b, &mut vec![1], visit)
}

struct Shared {
    nodes: AtomicU64,
    exhausted: AtomicBool,
}

fn explore(spec: &SearchSpec, d: usize, k: i64, b1: i64, shared: &Shared) -> (Vec<FeasibilityReport>, SearchStats) {
    let mut accepted = Vec::new();
    let mut stats = SearchStats::default();
    let mut tails = Vec::new();
    b_tails(d.saturating_sub(2), b1, &mut tails, &mut Vec::new());
    for tail in tails {
        let mut b = vec![k, b1];
        b.extend(tail);
        let finished = c_lists(&b, &mut |c| {
            let n = shared.nodes.fetch_add(1, AtomicOrdering::Relaxed) + 1;
            if spec.node_budget.is_some_and(|budget| n > budget) {
                shared.exhausted.store(true, AtomicOrdering::Relaxed);
                return false;
            }
            let arr = IntersectionArray::new(b.clone(), c.to_vec()).expect("generated shape is valid");
            let (outcome, report) = classify(spec, &arr);
            stats.record(&outcome);
            accepted.extend(report);
            !shared.exhausted.load(AtomicOrdering::Relaxed)
        });
        if !finished {
            break;
        }
    }
    (accepted, stats)
}

/// Runs a search, calling `sink` for every accepted array in the final
/// deterministic order as soon as each (D, k) layer is complete.
pub fn enumerate_with(
    spec: &SearchSpec,
    sink: &mut dyn FnMut(&FeasibilityReport),
) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.parallelism)
        .build()
        .map_err(|e| SearchError::InvalidSpec(e.to_string()))?;
    let shared = Shared { nodes: AtomicU64::new(0), exhausted: AtomicBool::new(false) };
    let mut accepted = Vec::new();
    let mut stats = SearchStats::default();
    for d in spec.d_min..=spec.d_max {
        for k in spec.k_min..=spec.k_max {
            let parts: Vec<_> = pool.install(|| {
                (1..k).into_par_iter().map(|b1| explore(spec, d, k, b1, &shared)).collect()
            });
            if shared.exhausted.load(AtomicOrdering::Relaxed) {
                return Err(SearchError::NodeBudgetExceeded {
                    budget: spec.node_budget.unwrap_or_default(),
                    visited: shared.nodes.load(AtomicOrdering::Relaxed),
                });
            }
            let mut layer = Vec::new();
            for (acc, st) in parts {
                layer.extend(acc);
                stats.merge(st);
            }
            layer.sort_by(|x, y| x.array.cmp(&y.array));
            for r in &layer {
                sink(r);
            }
            accepted.extend(layer);
        }
    }
    Ok(SearchResult { spec: spec.clone(), accepted, stats, elapsed: start.elapsed() })
}

pub fn enumerate(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    enumerate_with(spec, &mut |_| {})
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SetDiff {
    pub matched: Vec<IntersectionArray>,
    pub missing: Vec<IntersectionArray>,
    pub extra: Vec<IntersectionArray>,
}

impl SetDiff {
    pub fn new(expected: &[IntersectionArray], found: &[IntersectionArray]) -> Self {
        let mut diff = SetDiff::default();
        for e in expected {
            if found.contains(e) {
                diff.matched.push(e.clone());
            } else {
                diff.missing.push(e.clone());
            }
        }
        diff.extra = found.iter().filter(|f| !expected.contains(f)).cloned().collect();
        diff.matched.sort();
        diff.missing.sort();
        diff.extra.sort();
        diff
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubSearch {
    pub name: &'static str,
    pub result: SearchResult,
    pub expected: Vec<IntersectionArray>,
    pub diff: SetDiff,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub sub_searches: Vec<SubSearch>,
    pub diff: SetDiff,
}

impl Reproduction {
    pub fn success(&self) -> bool {
        self.diff.missing.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let subs: Vec<_> = self
            .sub_searches
            .iter()
            .map(|s| {
                json!({
                    "name": s.name,
                    "spec": s.result.spec,
                    "nodes": s.result.stats.nodes,
                    "pruned": s.result.stats.pruned,
                    "elapsed_ms": s.result.elapsed.as_secs_f64() * 1000.0,
                    "accepted": s.result.arrays(),
                    "diff": s.diff,
                })
            })
            .collect();
        json!({ "sub_searches": subs, "diff": self.diff, "success": self.success() })
    }

    pub fn to_text(&self) -> String {
        let list = |xs: &[IntersectionArray]| {
            if xs.is_empty() {
                "none".to_string()
            } else {
                xs.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
            }
        };
        let mut out = String::new();
        for s in &self.sub_searches {
            out.push_str(&format!(
                "{}: {} accepted, {} nodes, {} pruned, {:.1} ms\n  matched {}/{}\n  missing: {}\n  extra: {}\n",
                s.name,
                s.result.accepted.len(),
                s.result.stats.nodes,
                s.result.stats.pruned_total(),
                s.result.elapsed.as_secs_f64() * 1000.0,
                s.diff.matched.len(),
                s.expected.len(),
                list(&s.diff.missing),
                list(&s.diff.extra),
            ));
        }
        out.push_str(&format!(
            "table: matched {}/23\n  missing: {}\n  extra: {}\n",
            self.diff.matched.len(),
            list(&self.diff.missing),
            list(&self.diff.extra)
        ));
        out
    }
}

/// Default diameter cap for the k ∈ {3, 4} stratum.
pub const SMALL_VALENCY_MAX_DIAMETER: usize = 10;

/// The three searches covering the table: small valency with larger
/// diameter, non-bipartite diameter three, and bipartite diameter three.
pub fn table_one_searches(parallelism: usize, small_d_max: usize) -> Vec<(&'static str, SearchSpec, Vec<IntersectionArray>)> {
    let window = Theta1Window::between(1, 2);
    let table = table_one();
    let expected = |keep: &dyn Fn(&CorpusEntry) -> bool| -> Vec<IntersectionArray> {
        table.iter().filter(|e| keep(e)).map(|e| e.array.clone()).collect()
    };
    vec![
        (
            "small-valency",
            SearchSpec::new(3, 4, 3, small_d_max, window.clone()).with_parallelism(parallelism),
            expected(&|e| e.array.valency() <= 4),
        ),
        (
            "non-bipartite",
            SearchSpec::new(5, 25, 3, 3, window.clone())
                .with_parallelism(parallelism)
                .with_bipartite(Some(false)),
            expected(&|e| e.array.valency() >= 5 && !e.array.is_bipartite()),
        ),
        (
            "bipartite",
            SearchSpec::new(3, 16, 3, 3, window).with_parallelism(parallelism).with_bipartite(Some(true)),
            expected(&|e| e.array.diameter() == 3 && e.array.is_bipartite()),
        ),
    ]
}

pub fn reproduce_table1(parallelism: usize, small_d_max: usize) -> Result<Reproduction, SearchError> {
    let mut subs = Vec::new();
    let mut found = Vec::new();
    for (name, spec, expected) in table_one_searches(parallelism, small_d_max) {
        let result = enumerate(&spec)?;
        let arrays = result.arrays();
        let diff = SetDiff::new(&expected, &arrays);
        for a in arrays {
            if !found.contains(&a) {
                found.push(a);
            }
        }
        subs.push(SubSearch { name, result, expected, diff });
    }
    let all: Vec<IntersectionArray> = table_one().into_iter().map(|e| e.array).collect();
    let diff = SetDiff::new(&all, &found);
    Ok(Reproduction { sub_searches: subs, diff })
}

/// Parses `1`, `-3/2`, `inf`, `-inf` (infinite endpoints give `None`).
pub fn parse_endpoint(s: &str) -> Result<Option<BigRational>, String> {
    match s.trim() {
        "inf" | "+inf" | "-inf" => Ok(None),
        t => crate::array::parse_rational(t).map(Some).ok_or_else(|| format!("not a rational number: {t:?}")),
    }
}
