use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{no_spectrum, rat, show, CheckEntry, Context, Witness};
use crate::array::{rational_string, IntersectionArray};
use crate::exact::ExactValue;

fn relation(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

/// (θ_1 + 1)(θ_D + 1) ≤ -b_1 with equality exactly for D = 2, the
/// lower bound (θ_1 + k/(a_1+1))(θ_D + k/(a_1+1)) ≥ -k a_1 b_1/(a_1+1)², and
/// the antipodal 3-cover identity (θ_1 + 1)(θ_3 + 1) = -b_1 r/(r-1).
pub fn check_main_inequality(arr: &IntersectionArray) -> Vec<CheckEntry> {
    main_inequality_entries(&Context::new(arr))
}

pub(super) fn main_inequality_entries(ctx: &Context<'_>) -> Vec<CheckEntry> {
    const MAIN: &str = "main-inequality";
    const LOWER: &str = "shifted-product-lower-bound";
    const COVER: &str = "antipodal-cover-identity";
    if ctx.d() < 2 {
        return vec![
            CheckEntry::not_applicable(MAIN, "requires D >= 2"),
            CheckEntry::not_applicable(LOWER, "requires D >= 2"),
            CheckEntry::not_applicable(COVER, "requires an antipodal array with D = 3").extra(),
        ];
    }
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => {
            return vec![no_spectrum(MAIN, e), no_spectrum(LOWER, e), no_spectrum(COVER, e).extra()]
        }
    };
    let arr = ctx.arr;
    let (t1, td) = (spec.second_largest(), spec.smallest());
    let (k, a1, b1) = (arr.valency(), arr.a(1), arr.b(1));

    let cmp = ExactValue::shifted_product_cmp(t1, td, &BigRational::one(), &rat(-b1));
    let want = if ctx.d() == 2 { Ordering::Equal } else { Ordering::Less };
    let lhs = (t1.approx() + 1.0) * (td.approx() + 1.0);
    let main = CheckEntry::from_bool(
        MAIN,
        cmp == want,
        Witness::new()
            .with("(theta1+1)(theta_D+1)", format!("{lhs:.12}"))
            .with("relation", relation(cmp))
            .with("-b1", -b1),
    );

    let alpha = BigRational::new(k.into(), (a1 + 1).into());
    let beta = BigRational::new((-k * a1 * b1).into(), ((a1 + 1) * (a1 + 1)).into());
    let cmp = ExactValue::shifted_product_cmp(t1, td, &alpha, &beta);
    let af = k as f64 / (a1 + 1) as f64;
    let lower = CheckEntry::from_bool(
        LOWER,
        cmp != Ordering::Less,
        Witness::new()
            .with("product", format!("{:.12}", (t1.approx() + af) * (td.approx() + af)))
            .with("relation", relation(cmp))
            .with("bound", rational_string(&beta)),
    );

    let cover = if ctx.d() == 3 && arr.is_antipodal() {
        // An antipodal 3-cover has b_1 = (r - 1) c_2.
        let r = BigRational::one() + BigRational::new(b1.into(), arr.c(2).into());
        let target = -rat(b1) * &r / (&r - BigRational::one());
        let cmp = ExactValue::shifted_product_cmp(t1, td, &BigRational::one(), &target);
        CheckEntry::from_bool(
            COVER,
            cmp == Ordering::Equal,
            Witness::new()
                .with("r", rational_string(&r))
                .with("(theta1+1)(theta3+1)", format!("{lhs:.12}"))
                .with("relation", relation(cmp))
                .with("-b1*r/(r-1)", rational_string(&target)),
        )
    } else {
        CheckEntry::not_applicable(COVER, "requires an antipodal array with D = 3")
    };
    vec![main, lower, cover.extra()]
}

/// Terwilliger's bounds on local-graph eigenvalues expressed through the array:
/// η_2 ≤ -1 - b_1/(θ_D + 1) and η_k ≥ -1 - b_1/(θ_1 + 1).
#[derive(Debug, Clone, Serialize)]
pub struct TerwilligerBounds {
    pub upper2: ExactValue,
    pub lower_k: ExactValue,
}

/// The two bounds and the verdicts upper2 < θ_1 and lower_k > θ_D.
pub fn terwilliger_bounds(arr: &IntersectionArray) -> (Option<TerwilligerBounds>, Vec<CheckEntry>) {
    terwilliger_entries(&Context::new(arr))
}

pub(super) fn terwilliger_entries(ctx: &Context<'_>) -> (Option<TerwilligerBounds>, Vec<CheckEntry>) {
    const UPPER: &str = "terwilliger-upper-below-theta1";
    const LOWER: &str = "terwilliger-lower-above-theta-d";
    if ctx.d() < 3 {
        let why = "requires D >= 3";
        return (None, vec![CheckEntry::not_applicable(UPPER, why), CheckEntry::not_applicable(LOWER, why)]);
    }
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => return (None, vec![no_spectrum(UPPER, e), no_spectrum(LOWER, e)]),
    };
    let b1 = ctx.arr.b(1);
    // -1 - b1/(x+1) = (-x - 1 - b1)/(x + 1)
    let (a, b, c, d) = (rat(-1), rat(-1 - b1), BigRational::one(), BigRational::one());
    let (t1, td) = (spec.second_largest(), spec.smallest());
    let upper2 = td.mobius(&a, &b, &c, &d);
    let lower_k = t1.mobius(&a, &b, &c, &d);
    let (Some(upper2), Some(lower_k)) = (upper2, lower_k) else {
        let w = Witness::new().with("theta1", show(t1)).with("theta_D", show(td)).with("reason", "θ + 1 = 0");
        return (None, vec![CheckEntry::fail(UPPER, w.clone()), CheckEntry::fail(LOWER, w)]);
    };
    let upper = CheckEntry::from_bool(
        UPPER,
        &upper2 < t1,
        Witness::new().with("upper2", show(&upper2)).with("theta1", show(t1)),
    );
    let lower = CheckEntry::from_bool(
        LOWER,
        &lower_k > td,
        Witness::new().with("lower_k", show(&lower_k)).with("theta_D", show(td)),
    );
    (Some(TerwilligerBounds { upper2, lower_k }), vec![upper, lower])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Verdict;

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn entry<'a>(entries: &'a [CheckEntry], name: &str) -> &'a CheckEntry {
        entries.iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn main_inequality_cases() {
        let e = check_main_inequality(&arr("{3,2;1,1}"));
        let m = entry(&e, "main-inequality");
        assert_eq!(m.verdict, Verdict::Pass);
        assert_eq!(m.witness.get("relation"), Some("="));

        let e = check_main_inequality(&arr("{3,2,2;1,1,3}"));
        let m = entry(&e, "main-inequality");
        assert_eq!(m.verdict, Verdict::Pass);
        assert_eq!(m.witness.get("relation"), Some("<"));
        assert_eq!(entry(&e, "shifted-product-lower-bound").verdict, Verdict::Pass);
        assert_eq!(entry(&e, "antipodal-cover-identity").verdict, Verdict::NotApplicable);
    }

    #[test]
    fn lower_bound_is_attained_with_zero_product() {
        // Line graph of the Petersen graph: θ_D = -2 = -k/(a_1+1).
        let e = check_main_inequality(&arr("{4,2,1;1,1,4}"));
        let lower = entry(&e, "shifted-product-lower-bound");
        assert_eq!(lower.verdict, Verdict::Pass);
        assert_eq!(lower.witness.get("bound"), Some("-2"));
        assert_eq!(lower.witness.get("relation"), Some(">"));
    }

    #[test]
    fn antipodal_cover_identity() {
        for (s, r) in [("{3,2,1;1,2,3}", "2"), ("{15,14,1;1,2,15}", "8")] {
            let e = check_main_inequality(&arr(s));
            let c = entry(&e, "antipodal-cover-identity");
            assert_eq!(c.verdict, Verdict::Pass, "{s}");
            assert_eq!(c.witness.get("r"), Some(r));
            assert_eq!(c.witness.get("relation"), Some("="));
        }
    }

    #[test]
    fn terwilliger_values() {
        let (b, e) = terwilliger_bounds(&arr("{3,2,2;1,1,3}"));
        let b = b.unwrap();
        assert_eq!(b.upper2.as_rational(), Some(&rat(0)));
        assert!(e.iter().all(|x| x.verdict == Verdict::Pass));

        let (b, e) = terwilliger_bounds(&arr("{8,6,1;1,3,8}"));
        assert_eq!(b.unwrap().lower_k.as_rational(), Some(&rat(-3)));
        assert!(e.iter().all(|x| x.verdict == Verdict::Pass));

        let (b, e) = terwilliger_bounds(&arr("{3,2;1,1}"));
        assert!(b.is_none());
        assert!(e.iter().all(|x| x.verdict == Verdict::NotApplicable));
    }
}
