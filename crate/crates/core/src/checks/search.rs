//! Constraints used to bound the search for diameter-three arrays with
//! 1 < θ_1 ≤ 2. Each entry is gated on the hypothesis it was derived under.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{no_spectrum, rat, show, CheckEntry, Context, Witness};
use crate::array::{rational_string, IntersectionArray};
use crate::exact::Surd;

pub const B1_LOWER_BOUND: &str = "b1-lower-bound";
pub const CUBIC_MOMENT: &str = "cubic-moment-nonnegative";
pub const BIPARTITE_THETA1: &str = "bipartite-theta1-sqrt-b2";
pub const BIPARTITE_DIVISIBILITY: &str = "bipartite-divisibility";
pub const NON_BIPARTITE_M3: &str = "non-bipartite-m3-bound";
pub const A3_AT_MOST_ONE: &str = "a3-at-most-one";
pub const EQUAL_B1: &str = "equal-branch-b1";
pub const EQUAL_THETA2: &str = "equal-branch-theta2";
pub const EQUAL_C2: &str = "equal-branch-c2";
pub const EQUAL_K3: &str = "equal-branch-k3";
pub const EQUAL_NON_ANTIPODAL: &str = "equal-branch-non-antipodal-bound";
pub const UNEQUAL_THETA3: &str = "unequal-branch-theta3";
pub const UNEQUAL_M3: &str = "unequal-branch-m3-or-bipartite";
pub const NON_BIPARTITE_K: &str = "non-bipartite-k-bound";
pub const BIPARTITE_B2: &str = "bipartite-b2-range";
pub const BIPARTITE_K: &str = "bipartite-k-bound";

const WINDOW_GATE: &str = "requires D = 3, k >= 5 and 1 < theta1 <= 2";

pub fn check_search_constraints(arr: &IntersectionArray) -> Vec<CheckEntry> {
    entries(&Context::new(arr))
}

pub(super) fn entries(ctx: &Context<'_>) -> Vec<CheckEntry> {
    let mut out = Vec::with_capacity(16);
    out.extend(general(ctx));
    out.extend(windowed(ctx));
    out
}

fn general(ctx: &Context<'_>) -> Vec<CheckEntry> {
    let names = [B1_LOWER_BOUND, CUBIC_MOMENT, BIPARTITE_THETA1, BIPARTITE_DIVISIBILITY, NON_BIPARTITE_M3];
    if ctx.d() != 3 {
        return names.into_iter().map(|n| CheckEntry::not_applicable(n, "requires D = 3")).collect();
    }
    let arr = ctx.arr;
    let (k, b1, b2) = (arr.valency(), arr.b(1), arr.b(2));
    let bipartite = arr.is_bipartite();
    let mut out = Vec::with_capacity(names.len());

    out.push(CheckEntry::from_bool(
        B1_LOWER_BOUND,
        3 * b1 >= k + 1,
        Witness::new().with("3*b1", 3 * b1).with("k+1", k + 1),
    ));

    // Σ m_i θ_i³ = v k a_1 for the multiplicity formula.
    let cubic = &ctx.derived.v * rat(k) * rat(arr.a(1));
    out.push(CheckEntry::from_bool(
        CUBIC_MOMENT,
        cubic >= rat(0),
        Witness::new().with("sum m*theta^3", rational_string(&cubic)),
    ));

    let spec = ctx.spectrum();
    if bipartite {
        out.push(match spec {
            Ok(s) => {
                let root = Surd::new(0, 1, b2, 1).to_exact();
                CheckEntry::from_bool(
                    BIPARTITE_THETA1,
                    s.second_largest() == &root,
                    Witness::new().with("theta1", show(s.second_largest())).with("sqrt(b2)", show(&root)),
                )
            }
            Err(e) => no_spectrum(BIPARTITE_THETA1, e),
        });
        let c2 = k - b2;
        out.push(CheckEntry::from_bool(
            BIPARTITE_DIVISIBILITY,
            c2 > 0 && (b2 * (b2 - 1)) % c2 == 0,
            Witness::new().with("k-b2", c2).with("b2(b2-1)", b2 * (b2 - 1)),
        ));
        out.push(CheckEntry::not_applicable(NON_BIPARTITE_M3, "bipartite"));
    } else {
        out.push(CheckEntry::not_applicable(BIPARTITE_THETA1, "not bipartite"));
        out.push(CheckEntry::not_applicable(BIPARTITE_DIVISIBILITY, "not bipartite"));
        out.push(match spec {
            Ok(s) => match s.multiplicities[3].as_integer() {
                Some(m3) => CheckEntry::from_bool(
                    NON_BIPARTITE_M3,
                    (m3 - 1) * (m3 + 2) >= 2 * k,
                    Witness::new().with("(m3-1)(m3+2)", (m3 - 1) * (m3 + 2)).with("2k", 2 * k),
                ),
                None => CheckEntry::not_applicable(NON_BIPARTITE_M3, "m3 not integral"),
            },
            Err(e) => no_spectrum(NON_BIPARTITE_M3, e),
        });
    }
    out
}

fn windowed(ctx: &Context<'_>) -> Vec<CheckEntry> {
    let names = [
        A3_AT_MOST_ONE,
        EQUAL_B1,
        EQUAL_THETA2,
        EQUAL_C2,
        EQUAL_K3,
        EQUAL_NON_ANTIPODAL,
        UNEQUAL_THETA3,
        UNEQUAL_M3,
        NON_BIPARTITE_K,
        BIPARTITE_B2,
        BIPARTITE_K,
    ];
    if ctx.d() != 3 || ctx.k() < 5 {
        return names.into_iter().map(|n| CheckEntry::not_applicable(n, WINDOW_GATE)).collect();
    }
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => return names.into_iter().map(|n| no_spectrum(n, e)).collect(),
    };
    if !ctx.theta1_in_one_two() {
        return names.into_iter().map(|n| CheckEntry::not_applicable(n, WINDOW_GATE)).collect();
    }
    let arr = ctx.arr;
    let (k, b1, b2, c2, a3) = (arr.valency(), arr.b(1), arr.b(2), arr.c(2), arr.a(3));
    let bipartite = arr.is_bipartite();
    let (t2, t3) = (spec.theta(2), spec.theta(3));
    let mut out = Vec::with_capacity(names.len());

    out.push(CheckEntry::from_bool(A3_AT_MOST_ONE, a3 <= 1, Witness::new().with("a3", a3)));

    let equal = b2 == a3;
    let branch = |name: &'static str, applies: bool, why: &str, entry: &dyn Fn() -> CheckEntry| {
        if applies {
            entry()
        } else {
            CheckEntry::not_applicable(name, why)
        }
    };
    let not_equal = "requires b2 = a3";
    out.push(branch(EQUAL_B1, equal, not_equal, &|| {
        CheckEntry::from_bool(EQUAL_B1, b1 == k - 1, Witness::new().with("b1", b1).with("k-1", k - 1))
    }));
    out.push(branch(EQUAL_THETA2, equal, not_equal, &|| {
        CheckEntry::from_bool(
            EQUAL_THETA2,
            t2.cmp_integer(-1) != Ordering::Less && t2.cmp_integer(0) == Ordering::Less,
            Witness::new().with("theta2", show(t2)),
        )
    }));
    out.push(branch(EQUAL_C2, equal, not_equal, &|| {
        CheckEntry::from_bool(EQUAL_C2, 3 * c2 >= k - 4, Witness::new().with("3*c2", 3 * c2).with("k-4", k - 4))
    }));
    let k3 = &ctx.derived.kseq[3];
    let k3_int = k3.is_integer().then(|| k3.to_integer().to_i64()).flatten();
    out.push(branch(EQUAL_K3, equal, not_equal, &|| {
        // k_3 ≤ 3k/(k-4)
        let ok = k3 * rat(k - 4) <= rat(3 * k);
        CheckEntry::from_bool(
            EQUAL_K3,
            ok,
            Witness::new()
                .with("k3", rational_string(k3))
                .with("3k/(k-4)", rational_string(&BigRational::new((3 * k).into(), (k - 4).into()))),
        )
    }));
    let antipodal = arr.is_antipodal();
    out.push(
        branch(EQUAL_NON_ANTIPODAL, equal && !antipodal, "requires b2 = a3 and a non-antipodal array", &|| {
            match k3_int {
                Some(k3) => CheckEntry::from_bool(
                    EQUAL_NON_ANTIPODAL,
                    k <= k3 * (k3 - 1),
                    Witness::new().with("k", k).with("k3(k3-1)", k3 * (k3 - 1)),
                ),
                None => CheckEntry::not_applicable(EQUAL_NON_ANTIPODAL, "k3 not integral"),
            }
        })
        .extra(),
    );

    let unequal = "requires b2 != a3";
    out.push(branch(UNEQUAL_THETA3, !equal, unequal, &|| {
        // θ_3 ≤ -k/2
        CheckEntry::from_bool(
            UNEQUAL_THETA3,
            t3.cmp_rational(&BigRational::new((-k).into(), 2.into())) != Ordering::Greater,
            Witness::new().with("theta3", show(t3)).with("-k/2", rational_string(&BigRational::new((-k).into(), 2.into()))),
        )
    }));
    out.push(branch(UNEQUAL_M3, !equal, unequal, &|| {
        let m3 = &spec.multiplicities[3];
        let big_enough = match m3 {
            crate::spectral::Multiplicity::Exact(q) => q * rat(2) >= rat(k),
            _ => 2.0 * m3.approx() >= k as f64,
        };
        CheckEntry::from_bool(
            UNEQUAL_M3,
            bipartite || big_enough,
            Witness::new().with("m3", m3.display()).with("k/2", k as f64 / 2.0).with("bipartite", bipartite),
        )
    }));
    out.push(branch(NON_BIPARTITE_K, !equal && !bipartite, "requires b2 != a3 and a non-bipartite array", &|| {
        CheckEntry::from_bool(NON_BIPARTITE_K, k <= 25, Witness::new().with("k", k))
    }));
    out.push(branch(BIPARTITE_B2, bipartite, "requires a bipartite array", &|| {
        CheckEntry::from_bool(BIPARTITE_B2, (2..=4).contains(&b2), Witness::new().with("b2", b2))
    }));
    out.push(branch(BIPARTITE_K, bipartite, "requires a bipartite array", &|| {
        CheckEntry::from_bool(BIPARTITE_K, k <= 16, Witness::new().with("k", k))
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Verdict;

    fn entries_for(s: &str) -> Vec<CheckEntry> {
        check_search_constraints(&s.parse().unwrap())
    }

    fn verdict(entries: &[CheckEntry], name: &str) -> Verdict {
        entries.iter().find(|e| e.name == name).unwrap().verdict
    }

    #[test]
    fn bipartite_row() {
        let e = entries_for("{5,4,4;1,1,5}");
        assert_eq!(verdict(&e, BIPARTITE_THETA1), Verdict::Pass);
        assert_eq!(verdict(&e, BIPARTITE_DIVISIBILITY), Verdict::Pass);
        assert_eq!(verdict(&e, BIPARTITE_B2), Verdict::Pass);
        assert_eq!(verdict(&e, BIPARTITE_K), Verdict::Pass);
        assert_eq!(verdict(&e, NON_BIPARTITE_M3), Verdict::NotApplicable);
    }

    #[test]
    fn non_bipartite_row() {
        let e = entries_for("{8,6,1;1,3,8}");
        assert_eq!(verdict(&e, B1_LOWER_BOUND), Verdict::Pass);
        assert_eq!(verdict(&e, NON_BIPARTITE_M3), Verdict::Pass);
        assert_eq!(verdict(&e, A3_AT_MOST_ONE), Verdict::Pass);
        assert!(e.iter().all(|x| x.verdict != Verdict::Fail));
    }

    #[test]
    fn k_four_rows_are_outside_the_gate() {
        let e = entries_for("{4,2,1;1,1,4}");
        assert_eq!(verdict(&e, A3_AT_MOST_ONE), Verdict::NotApplicable);
        assert_eq!(verdict(&e, B1_LOWER_BOUND), Verdict::Pass);
    }

    #[test]
    fn surplus_antipodal_array_fails_m3_bound() {
        // Feasible for the basic conditions, θ_1 = 2, but m_3 = 7 < 10.
        let e = entries_for("{20,18,1;1,9,20}");
        assert_eq!(verdict(&e, UNEQUAL_M3), Verdict::Fail);
    }

    #[test]
    fn b1_lower_bound_fails() {
        let e = entries_for("{3,1,1;1,1,3}");
        assert_eq!(verdict(&e, B1_LOWER_BOUND), Verdict::Fail);
    }
}
