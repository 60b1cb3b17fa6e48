use std::cmp::Ordering;

use super::{no_spectrum, show, CheckEntry, Context, Witness};
use crate::array::IntersectionArray;
use crate::exact::ExactValue;

/// Roots of x² - a_1 x - k, the eigenvalues of the local quotient
/// ((0, k), (1, a_1)). Returns (smaller, larger).
pub(crate) fn local_roots(ctx: &Context<'_>) -> (ExactValue, ExactValue) {
    let (a1, k) = (ctx.arr.a(1), ctx.k());
    (ExactValue::quadratic_root(-a1, -k, false), ExactValue::quadratic_root(-a1, -k, true))
}

/// θ_D below the smaller local root; θ_1 against the larger local root and a_3.
pub fn check_local_eigenvalue_bounds(arr: &IntersectionArray) -> Vec<CheckEntry> {
    local_eigenvalue_entries(&Context::new(arr))
}

pub(super) fn local_eigenvalue_entries(ctx: &Context<'_>) -> Vec<CheckEntry> {
    const SMALLEST: &str = "smallest-below-local-root";
    const MIN_BOUND: &str = "second-largest-local-min-bound";
    const LARGE_D: &str = "second-largest-local-root-large-diameter";
    if ctx.k() < 3 || ctx.d() < 3 {
        let why = "requires k >= 3 and D >= 3";
        return [SMALLEST, MIN_BOUND, LARGE_D]
            .into_iter()
            .map(|n| CheckEntry::not_applicable(n, why))
            .collect();
    }
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => return [SMALLEST, MIN_BOUND, LARGE_D].into_iter().map(|n| no_spectrum(n, e)).collect(),
    };
    let (lo, hi) = local_roots(ctx);
    let theta1 = spec.second_largest();
    let theta_d = spec.smallest();
    let a3 = ctx.arr.a(3);

    let smallest = CheckEntry::from_bool(
        SMALLEST,
        theta_d < &lo,
        Witness::new().with("theta_D", show(theta_d)).with("bound", show(&lo)),
    );
    // θ_1 ≥ min(r, a_3) iff θ_1 ≥ r or θ_1 ≥ a_3.
    let min_ok = theta1 >= &hi || theta1.cmp_integer(a3) != Ordering::Less;
    let min_bound = CheckEntry::from_bool(
        MIN_BOUND,
        min_ok,
        Witness::new().with("theta1", show(theta1)).with("local_root", show(&hi)).with("a3", a3),
    );
    let large_d = if ctx.d() >= 4 {
        CheckEntry::from_bool(
            LARGE_D,
            theta1 >= &hi,
            Witness::new().with("theta1", show(theta1)).with("local_root", show(&hi)),
        )
    } else {
        CheckEntry::not_applicable(LARGE_D, "requires D >= 4")
    };
    vec![smallest, min_bound, large_d]
}

/// The diameter-three statements about θ_2, a_3 - b_2 and a_1 - c_2 + 1, and
/// the equivalence θ_2 = -1 ⇔ θ_2 = a_3 - b_2 ⇔ k + 1 = c_3 + b_2.
pub fn check_diameter_three_bounds(arr: &IntersectionArray) -> Vec<CheckEntry> {
    diameter_three_entries(&Context::new(arr))
}

pub(super) fn diameter_three_entries(ctx: &Context<'_>) -> Vec<CheckEntry> {
    const BETWEEN: &str = "theta2-between-minus-one-and-a3-b2";
    const A3B2: &str = "a3-b2-separates-theta1-theta3";
    const A1C2: &str = "a1-c2-plus-one-separates-theta1-theta3";
    const EQUIV: &str = "theta2-minus-one-equivalence";
    let names = [BETWEEN, A3B2, A1C2, EQUIV];
    if ctx.d() != 3 {
        return names.into_iter().map(|n| CheckEntry::not_applicable(n, "requires D = 3")).collect();
    }
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => return names.into_iter().map(|n| no_spectrum(n, e)).collect(),
    };
    let arr = ctx.arr;
    let (t1, t2, t3) = (spec.theta(1), spec.theta(2), spec.theta(3));
    let x = arr.a(3) - arr.b(2);
    let (lo, hi) = (x.min(-1), x.max(-1));
    let between = CheckEntry::from_bool(
        BETWEEN,
        t2.cmp_integer(lo) != Ordering::Less && t2.cmp_integer(hi) != Ordering::Greater,
        Witness::new().with("theta2", show(t2)).with("a3-b2", x),
    );
    let separates = |name: &'static str, label: &str, y: i64| {
        CheckEntry::from_bool(
            name,
            t1.cmp_integer(y) == Ordering::Greater && t3.cmp_integer(y) == Ordering::Less,
            Witness::new().with("theta1", show(t1)).with(label, y).with("theta3", show(t3)),
        )
    };
    let a3b2 = separates(A3B2, "a3-b2", x);
    let a1c2 = separates(A1C2, "a1-c2+1", arr.a(1) - arr.c(2) + 1);

    let s1 = t2.cmp_integer(-1) == Ordering::Equal;
    let s2 = t2.cmp_integer(x) == Ordering::Equal;
    let s3 = arr.valency() + 1 == arr.c(3) + arr.b(2);
    let all = s1 && s2 && s3;
    let equiv = CheckEntry::from_bool(
        EQUIV,
        s1 == s2 && s2 == s3,
        Witness::new()
            .with("theta2=-1", s1)
            .with("theta2=a3-b2", s2)
            .with("k+1=c3+b2", s3)
            .with("distance-3-graph-strongly-regular", if all { "implied" } else { "not implied" }),
    );
    vec![between, a3b2, a1c2, equiv]
}

/// θ_1 equals the larger local root, for D = 3 with a spectrum.
pub(super) fn is_shilla(ctx: &Context<'_>) -> Option<bool> {
    let spec = ctx.spectrum().ok()?;
    let (_, hi) = local_roots(ctx);
    Some(spec.second_largest() == &hi)
}

/// The Shilla equivalence for D = 3 and the classification of arrays whose
/// θ_1 equals the larger local root.
pub fn check_shilla(arr: &IntersectionArray) -> Vec<CheckEntry> {
    shilla_entries(&Context::new(arr))
}

pub(super) fn shilla_entries(ctx: &Context<'_>) -> Vec<CheckEntry> {
    const EQUIV: &str = "shilla-equivalence";
    const CLASS: &str = "local-root-attainment-classification";
    if ctx.d() < 3 {
        return [EQUIV, CLASS]
            .into_iter()
            .map(|n| CheckEntry::not_applicable(n, "requires D >= 3"))
            .collect();
    }
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => return [EQUIV, CLASS].into_iter().map(|n| no_spectrum(n, e)).collect(),
    };
    let arr = ctx.arr;
    let theta1 = spec.second_largest();
    let (_, hi) = local_roots(ctx);
    let attains = theta1 == &hi;

    let equiv = if ctx.d() == 3 {
        let (a1, a3, k) = (arr.a(1), arr.a(3), arr.valency());
        let s2 = k == a3 * (a3 - a1);
        let s3 = theta1.cmp_integer(a3) == Ordering::Equal;
        CheckEntry::from_bool(
            EQUIV,
            attains == s2 && s2 == s3,
            Witness::new()
                .with("theta1=local-root", attains)
                .with("k=a3(a3-a1)", s2)
                .with("theta1=a3", s3),
        )
    } else {
        CheckEntry::not_applicable(EQUIV, "requires D = 3")
    };

    // θ_1 = r  ⇔  D = 3 (Shilla by definition)  or  (D = 4 and antipodal).
    let antipodal = arr.is_antipodal();
    let expected = match ctx.d() {
        3 => attains,
        4 => antipodal,
        _ => false,
    };
    let mut class = CheckEntry::from_bool(
        CLASS,
        attains == expected,
        Witness::new()
            .with("theta1", show(theta1))
            .with("local_root", show(&hi))
            .with("D", ctx.d())
            .with("antipodal", antipodal),
    );
    if ctx.d() == 4 {
        class = class.extra();
    }
    vec![equiv, class]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Verdict;

    fn verdict(entries: &[CheckEntry], name: &str) -> Verdict {
        entries.iter().find(|e| e.name == name).unwrap().verdict
    }

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    #[test]
    fn local_bounds_heawood_and_pappus() {
        let e = check_local_eigenvalue_bounds(&arr("{3,2,2;1,1,3}"));
        assert_eq!(verdict(&e, "smallest-below-local-root"), Verdict::Pass);
        assert_eq!(verdict(&e, "second-largest-local-root-large-diameter"), Verdict::NotApplicable);
        // Pappus graph: θ_1 = √3 equals the local root.
        let e = check_local_eigenvalue_bounds(&arr("{3,2,2,1;1,1,2,3}"));
        assert_eq!(verdict(&e, "second-largest-local-root-large-diameter"), Verdict::Pass);
        let e = check_local_eigenvalue_bounds(&arr("{3,2;1,1}"));
        assert!(e.iter().all(|x| x.verdict == Verdict::NotApplicable));
    }

    #[test]
    fn diameter_three_equivalence() {
        let e = check_diameter_three_bounds(&arr("{4,2,1;1,1,4}"));
        let eq = e.iter().find(|x| x.name == "theta2-minus-one-equivalence").unwrap();
        assert_eq!(eq.verdict, Verdict::Pass);
        assert_eq!(eq.witness.get("theta2=-1"), Some("true"));
        assert_eq!(eq.witness.get("k+1=c3+b2"), Some("true"));

        let e = check_diameter_three_bounds(&arr("{5,4,4;1,1,5}"));
        let eq = e.iter().find(|x| x.name == "theta2-minus-one-equivalence").unwrap();
        assert_eq!(eq.verdict, Verdict::Pass);
        assert_eq!(eq.witness.get("theta2=-1"), Some("false"));

        let e = check_diameter_three_bounds(&arr("{6,4,2;1,2,3}"));
        assert_eq!(verdict(&e, "theta2-between-minus-one-and-a3-b2"), Verdict::Pass);
        assert!(e.iter().all(|x| x.verdict == Verdict::Pass));
    }

    #[test]
    fn shilla_cases() {
        let e = check_shilla(&arr("{6,4,2;1,2,3}"));
        let eq = e.iter().find(|x| x.name == "shilla-equivalence").unwrap();
        assert_eq!(eq.verdict, Verdict::Pass);
        assert_eq!(eq.witness.get("theta1=a3"), Some("true"));

        let e = check_shilla(&arr("{3,2,2;1,1,3}"));
        let eq = e.iter().find(|x| x.name == "shilla-equivalence").unwrap();
        assert_eq!(eq.verdict, Verdict::Pass);
        assert_eq!(eq.witness.get("theta1=a3"), Some("false"));

        let e = check_shilla(&arr("{4,3,2,1;1,2,3,4}"));
        let class = e.iter().find(|x| x.name == "local-root-attainment-classification").unwrap();
        assert_eq!(class.verdict, Verdict::Pass);
        assert_eq!(class.witness.get("antipodal"), Some("true"));
        assert!(class.extra_paper);
    }
}
