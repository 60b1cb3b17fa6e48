//! Feasibility conditions and eigenvalue inequalities as named predicates.
//!
//! Every check produces [`CheckEntry`] values with a verdict and the witness
//! values it was decided on. [`check_array`] runs a whole [`ConditionSet`] and
//! collects the entries into a [`FeasibilityReport`].

mod basic;
mod bounds;
mod inequality;
pub mod search;

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::array::{DerivedParameters, IntersectionArray};
use crate::exact::ExactValue;
use crate::spectral::{spectrum, Spectrum, SpectralError};

pub use basic::check_basic;
pub use bounds::{check_diameter_three_bounds, check_local_eigenvalue_bounds, check_shilla};
pub use inequality::{check_main_inequality, terwilliger_bounds, TerwilligerBounds};
pub use search::check_search_constraints;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

/// Ordered name/value pairs supporting a verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Witness(Vec<(String, String)>);

impl Witness {
    pub fn new() -> Self {
        Witness(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub verdict: Verdict,
    /// Standard literature condition not used by the eigenvalue arguments;
    /// disabled under strict paper-only evaluation.
    pub extra_paper: bool,
    pub witness: Witness,
}

impl CheckEntry {
    pub fn new(name: &'static str, verdict: Verdict, witness: Witness) -> Self {
        CheckEntry { name, verdict, extra_paper: false, witness }
    }

    pub fn pass(name: &'static str, witness: Witness) -> Self {
        Self::new(name, Verdict::Pass, witness)
    }

    pub fn fail(name: &'static str, witness: Witness) -> Self {
        Self::new(name, Verdict::Fail, witness)
    }

    pub fn not_applicable(name: &'static str, reason: &str) -> Self {
        Self::new(name, Verdict::NotApplicable, Witness::new().with("reason", reason))
    }

    pub fn from_bool(name: &'static str, ok: bool, witness: Witness) -> Self {
        Self::new(name, if ok { Verdict::Pass } else { Verdict::Fail }, witness)
    }

    pub(crate) fn extra(mut self) -> Self {
        self.extra_paper = true;
        self
    }
}

/// Which predicates a report (or a search) evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionSet {
    /// Structural array conditions plus spectral integrality and moments.
    Basic,
    /// Basic plus every eigenvalue inequality and every proof-derived
    /// constraint of the second-largest-eigenvalue classification.
    Paper,
}

impl ConditionSet {
    pub fn name(self) -> &'static str {
        match self {
            ConditionSet::Basic => "basic",
            ConditionSet::Paper => "paper",
        }
    }
}

impl std::str::FromStr for ConditionSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(ConditionSet::Basic),
            "paper" => Ok(ConditionSet::Paper),
            other => Err(format!("unknown condition set {other:?}; expected basic or paper")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub conditions: ConditionSet,
    /// Turn extra-paper entries into not-applicable.
    pub strict_paper: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { conditions: ConditionSet::Paper, strict_paper: false }
    }
}

/// Per-array data shared by the checks, computed once.
pub struct Context<'a> {
    pub arr: &'a IntersectionArray,
    pub derived: DerivedParameters,
    spectrum: OnceLock<Result<Spectrum, SpectralError>>,
}

impl<'a> Context<'a> {
    pub fn new(arr: &'a IntersectionArray) -> Self {
        Context { arr, derived: arr.derive(), spectrum: OnceLock::new() }
    }

    pub fn spectrum(&self) -> Result<&Spectrum, &SpectralError> {
        self.spectrum.get_or_init(|| spectrum(self.arr)).as_ref()
    }

    pub fn k(&self) -> i64 {
        self.arr.valency()
    }

    pub fn d(&self) -> usize {
        self.arr.diameter()
    }

    /// θ_1, when the spectrum exists.
    pub fn theta1(&self) -> Option<&ExactValue> {
        self.spectrum().ok().map(|s| s.second_largest())
    }

    /// Whether 1 < θ_1 ≤ 2, decided exactly.
    pub fn theta1_in_one_two(&self) -> bool {
        self.theta1().is_some_and(|t| {
            t.cmp_integer(1) == std::cmp::Ordering::Greater
                && t.cmp_integer(2) != std::cmp::Ordering::Greater
        })
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub(crate) fn show(x: &ExactValue) -> String {
    x.to_string()
}

/// Entry used when a spectral check cannot run because no spectrum exists.
pub(crate) fn no_spectrum(name: &'static str, err: &SpectralError) -> CheckEntry {
    CheckEntry::not_applicable(name, &format!("no spectrum: {err}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub bipartite: bool,
    pub antipodal: bool,
    /// D = 3 and θ_1 = (a_1 + √(a_1² + 4k))/2; absent when D ≠ 3 or no spectrum.
    pub shilla: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub array: IntersectionArray,
    pub conditions: ConditionSet,
    pub strict_paper: bool,
    pub feasible: bool,
    pub flags: StructuralFlags,
    pub entries: Vec<CheckEntry>,
}

impl FeasibilityReport {
    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.entry(name).map(|e| e.verdict)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.verdict == Verdict::Fail)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let yn = |b: bool| if b { "yes" } else { "no" };
        out.push_str(&format!(
            "array {}  conditions={}{}  feasible={}\n",
            self.array,
            self.conditions.name(),
            if self.strict_paper { " (strict)" } else { "" },
            yn(self.feasible)
        ));
        out.push_str(&format!(
            "flags: bipartite={} antipodal={} shilla={}\n",
            yn(self.flags.bipartite),
            yn(self.flags.antipodal),
            self.flags.shilla.map_or("n/a", yn)
        ));
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &self.entries {
            let witness: Vec<String> = e.witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "  {:<14} {:<width$} {}{}\n",
                e.verdict.to_string(),
                e.name,
                if e.extra_paper { "[extra] " } else { "" },
                witness.join(" "),
            ));
        }
        out
    }
}

/// Entries of the given condition set, in registry order.
pub fn evaluate(ctx: &Context<'_>, conditions: ConditionSet) -> Vec<CheckEntry> {
    let mut entries = basic::entries(ctx);
    if conditions == ConditionSet::Paper {
        entries.extend(bounds::local_eigenvalue_entries(ctx));
        entries.extend(bounds::diameter_three_entries(ctx));
        entries.extend(bounds::shilla_entries(ctx));
        entries.extend(inequality::main_inequality_entries(ctx));
        entries.extend(inequality::terwilliger_entries(ctx).1);
        entries.extend(search::entries(ctx));
    }
    entries
}

pub fn structural_flags(ctx: &Context<'_>) -> StructuralFlags {
    StructuralFlags {
        bipartite: ctx.arr.is_bipartite(),
        antipodal: ctx.arr.is_antipodal(),
        shilla: if ctx.d() == 3 { bounds::is_shilla(ctx) } else { None },
    }
}

/// The full report for an array.
pub fn check_array(arr: &IntersectionArray, opts: CheckOptions) -> FeasibilityReport {
    let ctx = Context::new(arr);
    report_in(&ctx, opts)
}

pub(crate) fn report_in(ctx: &Context<'_>, opts: CheckOptions) -> FeasibilityReport {
    let mut entries = evaluate(ctx, opts.conditions);
    if opts.strict_paper {
        for e in entries.iter_mut().filter(|e| e.extra_paper) {
            e.verdict = Verdict::NotApplicable;
            e.witness = Witness::new().with("reason", "disabled by strict paper mode");
        }
    }
    let feasible = entries.iter().all(|e| e.verdict != Verdict::Fail);
    FeasibilityReport {
        array: ctx.arr.clone(),
        conditions: opts.conditions,
        strict_paper: opts.strict_paper,
        feasible,
        flags: structural_flags(ctx),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(s: &str) -> FeasibilityReport {
        check_array(&s.parse().unwrap(), CheckOptions::default())
    }

    #[test]
    fn names_are_unique_and_registered_once() {
        for s in ["{3,2,2;1,1,3}", "{3,2;1,1}", "{4,2,2,1;1,1,2,4}", "{2,2;1,3}"] {
            let r = report(s);
            let mut names: Vec<&str> = r.entries.iter().map(|e| e.name).collect();
            let n = names.len();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), n, "{s}");
        }
        // Every array gets the same set of entries.
        let a: Vec<&str> = report("{3,2,2;1,1,3}").entries.iter().map(|e| e.name).collect();
        let b: Vec<&str> = report("{2,2;1,3}").entries.iter().map(|e| e.name).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn failures_carry_witnesses() {
        for s in ["{4,2,2;1,1,3}", "{3,1,2;1,1,3}", "{2,2;1,3}", "{3,2,2;1,1,2}"] {
            let r = report(s);
            assert!(!r.feasible, "{s}");
            for e in r.failures() {
                assert!(!e.witness.is_empty(), "{s} {}", e.name);
            }
        }
    }

    #[test]
    fn strict_mode_disables_extra_entries() {
        let arr: IntersectionArray = "{3,2,2;1,1,3}".parse().unwrap();
        let r = check_array(&arr, CheckOptions { conditions: ConditionSet::Paper, strict_paper: true });
        let extra: Vec<&CheckEntry> = r.entries.iter().filter(|e| e.extra_paper).collect();
        assert!(!extra.is_empty());
        assert!(extra.iter().all(|e| e.verdict == Verdict::NotApplicable));
    }

    #[test]
    fn text_and_json_agree() {
        let r = report("{8,6,1;1,3,8}");
        let json = r.to_json();
        let text = r.to_text();
        for e in json["entries"].as_array().unwrap() {
            let name = e["name"].as_str().unwrap();
            let verdict = e["verdict"].as_str().unwrap();
            assert!(text.lines().any(|l| l.contains(name) && l.trim_start().starts_with(verdict)));
        }
    }
}
