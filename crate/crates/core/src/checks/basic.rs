use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{no_spectrum, CheckEntry, Context, Witness};
use crate::array::{rational_string, IntersectionArray};
use crate::exact::to_f64;
use crate::spectral::Multiplicity;

/// Relative tolerance for the float moment comparison.
pub const MOMENT_TOLERANCE: f64 = 1e-9;

/// Monotonicity, dominance, non-negativity, integrality, parity, and the
/// spectral integrality and moment conditions.
pub fn check_basic(arr: &IntersectionArray) -> Vec<CheckEntry> {
    entries(&Context::new(arr))
}

pub(super) fn entries(ctx: &Context<'_>) -> Vec<CheckEntry> {
    vec![
        b_nonincreasing(ctx.arr),
        c_nondecreasing(ctx.arr),
        b_dominates_c(ctx.arr),
        a_nonnegative(ctx.arr),
        k_integral(ctx),
        handshake(ctx),
        multiplicities_integral(ctx),
        spectral_moments(ctx),
    ]
}

fn b_nonincreasing(arr: &IntersectionArray) -> CheckEntry {
    const NAME: &str = "b-nonincreasing";
    let b = arr.b_list();
    if b.len() > 1 && b[0] <= b[1] {
        return CheckEntry::fail(NAME, Witness::new().with("b0", b[0]).with("b1", b[1]));
    }
    match (1..b.len().saturating_sub(1)).find(|&i| b[i] < b[i + 1]) {
        Some(i) => CheckEntry::fail(
            NAME,
            Witness::new().with(&format!("b{i}"), b[i]).with(&format!("b{}", i + 1), b[i + 1]),
        ),
        None => CheckEntry::pass(NAME, Witness::new()),
    }
}

fn c_nondecreasing(arr: &IntersectionArray) -> CheckEntry {
    const NAME: &str = "c-nondecreasing";
    let c = arr.c_list();
    if c[0] != 1 {
        return CheckEntry::fail(NAME, Witness::new().with("c1", c[0]));
    }
    match (0..c.len() - 1).find(|&i| c[i] > c[i + 1]) {
        Some(i) => CheckEntry::fail(
            NAME,
            Witness::new()
                .with(&format!("c{}", i + 1), c[i])
                .with(&format!("c{}", i + 2), c[i + 1]),
        ),
        None => CheckEntry::pass(NAME, Witness::new()),
    }
}

fn b_dominates_c(arr: &IntersectionArray) -> CheckEntry {
    const NAME: &str = "b-dominates-c";
    let d = arr.diameter();
    for i in 0..d {
        for j in 1..=d - i {
            if arr.b(i) < arr.c(j) {
                return CheckEntry::fail(
                    NAME,
                    Witness::new()
                        .with(&format!("b{i}"), arr.b(i))
                        .with(&format!("c{j}"), arr.c(j)),
                );
            }
        }
    }
    CheckEntry::pass(NAME, Witness::new())
}

fn a_nonnegative(arr: &IntersectionArray) -> CheckEntry {
    const NAME: &str = "a-nonnegative";
    let a = arr.a_list();
    match a.iter().position(|&x| x < 0) {
        Some(i) => CheckEntry::fail(NAME, Witness::new().with(&format!("a{i}"), a[i])),
        None => CheckEntry::pass(NAME, Witness::new().with("a", list(&a))),
    }
}

fn k_integral(ctx: &Context<'_>) -> CheckEntry {
    const NAME: &str = "k-integral";
    let kseq: Vec<String> = ctx.derived.kseq.iter().map(rational_string).collect();
    let w = Witness::new().with("k_i", kseq.join(",")).with("v", rational_string(&ctx.derived.v));
    match ctx.derived.first_fractional_k() {
        Some(i) => {
            CheckEntry::fail(NAME, w.with(&format!("k{i}"), rational_string(&ctx.derived.kseq[i])))
        }
        None => CheckEntry::pass(NAME, w),
    }
}

/// v·k even and k_i·a_i even for every i (edge counts of the graph and of
/// the subgraph induced on each distance layer).
fn handshake(ctx: &Context<'_>) -> CheckEntry {
    const NAME: &str = "handshake";
    if !ctx.derived.kseq_integral() {
        return CheckEntry::not_applicable(NAME, "k_i not integral").extra();
    }
    let two = BigRational::from_integer(2.into());
    let even = |q: BigRational| (q / &two).is_integer();
    let vk = &ctx.derived.v * BigRational::from_integer(ctx.k().into());
    if !even(vk.clone()) {
        return CheckEntry::fail(NAME, Witness::new().with("v*k", rational_string(&vk))).extra();
    }
    for (i, (ki, ai)) in ctx.derived.kseq.iter().zip(&ctx.derived.a).enumerate() {
        let prod = ki * BigRational::from_integer((*ai).into());
        if !even(prod.clone()) {
            return CheckEntry::fail(
                NAME,
                Witness::new().with(&format!("k{i}*a{i}"), rational_string(&prod)),
            )
            .extra();
        }
    }
    CheckEntry::pass(NAME, Witness::new().with("v*k", rational_string(&vk))).extra()
}

fn multiplicities_integral(ctx: &Context<'_>) -> CheckEntry {
    const NAME: &str = "multiplicities-integral";
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => return no_spectrum(NAME, e),
    };
    let shown: Vec<String> = spec.multiplicities.iter().map(Multiplicity::display).collect();
    let w = Witness::new().with("m", shown.join(","));
    match spec.multiplicities.iter().position(|m| !m.is_integral()) {
        Some(i) => CheckEntry::fail(NAME, w.with("first_fractional", format!("m{i}"))),
        None => {
            let positive = spec.multiplicities.iter().all(|m| m.approx() > 0.0);
            CheckEntry::from_bool(NAME, positive, w)
        }
    }
}

/// Σ m_i θ_i^j against v·(L^j)_{00} for j = 0..3, i.e. v, 0, vk, vk·a_1.
fn spectral_moments(ctx: &Context<'_>) -> CheckEntry {
    const NAME: &str = "spectral-moments";
    let spec = match ctx.spectrum() {
        Ok(s) => s,
        Err(e) => return no_spectrum(NAME, e),
    };
    let v = &ctx.derived.v;
    let k = BigRational::from_integer(ctx.k().into());
    let a1 = BigRational::from_integer(ctx.arr.a(1).into());
    let targets = [v.clone(), BigRational::zero(), v * &k, v * &k * &a1];
    let mut w = Witness::new();
    let exact_thetas: Option<Vec<&BigRational>> =
        spec.eigenvalues.iter().map(|t| t.as_rational()).collect();
    let mut ok = true;
    for (j, target) in targets.iter().enumerate() {
        let label = format!("sum m*theta^{j}");
        if let Some(thetas) = &exact_thetas {
            let mut sum = BigRational::zero();
            for (t, m) in thetas.iter().zip(&spec.multiplicities) {
                let Multiplicity::Exact(m) = m else { unreachable!("rational θ has exact m") };
                let mut p = BigRational::one();
                for _ in 0..j {
                    p *= *t;
                }
                sum += m * p;
            }
            ok &= &sum == target;
            w.push(&label, rational_string(&sum));
        } else {
            let (mut sum, mut scale) = (0.0f64, 0.0f64);
            for (t, m) in spec.eigenvalues.iter().zip(&spec.multiplicities) {
                let term = m.approx() * t.approx().powi(j as i32);
                sum += term;
                scale += term.abs();
            }
            let target = to_f64(target);
            ok &= (sum - target).abs() <= MOMENT_TOLERANCE * scale.max(1.0);
            w.push(&label, format!("{sum:.12e}"));
        }
        w.push(&format!("expected^{j}"), rational_string(target));
    }
    CheckEntry::from_bool(NAME, ok, w)
}

fn list(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Verdict;

    fn verdicts(s: &str) -> Vec<(&'static str, Verdict)> {
        check_basic(&s.parse().unwrap()).into_iter().map(|e| (e.name, e.verdict)).collect()
    }

    #[test]
    fn heawood_passes_everything() {
        assert!(verdicts("{3,2,2;1,1,3}").iter().all(|(_, v)| *v == Verdict::Pass));
    }

    #[test]
    fn fractional_k_fails() {
        let entries = check_basic(&"{4,2,2;1,1,3}".parse().unwrap());
        let e = entries.iter().find(|e| e.name == "k-integral").unwrap();
        assert_eq!(e.verdict, Verdict::Fail);
        assert_eq!(e.witness.get("k3"), Some("16/3"));
    }

    #[test]
    fn monotonicity_failure() {
        let v = verdicts("{3,1,2;1,1,3}");
        assert!(v.contains(&("b-nonincreasing", Verdict::Fail)));
    }

    #[test]
    fn c_monotonicity_and_dominance() {
        assert!(verdicts("{5,4,1;1,3,2}").contains(&("c-nondecreasing", Verdict::Fail)));
        // b1 = 2 < c2 = 3 with 1 + 2 <= 3.
        assert!(verdicts("{4,2,2;1,3,4}").contains(&("b-dominates-c", Verdict::Fail)));
    }

    #[test]
    fn negative_a_is_a_verdict() {
        let v = verdicts("{2,2;1,3}");
        assert!(v.contains(&("a-nonnegative", Verdict::Fail)));
        assert!(v.contains(&("multiplicities-integral", Verdict::NotApplicable)));
    }

    #[test]
    fn handshake_parity() {
        // {3,2;1,1}: v = 10, k = 3, k2 a2 = 6*2.
        assert!(verdicts("{3,2;1,1}").contains(&("handshake", Verdict::Pass)));
        // {2,1;1,1}: pentagon; k_2 a_2 = 2*1 even, v k = 10.
        assert!(verdicts("{2,1;1,1}").contains(&("handshake", Verdict::Pass)));
        // {3,1;1,1}: k_2 = 3, a_2 = 2, a_1 = 1, k_1 a_1 = 3 odd.
        assert!(verdicts("{3,1;1,1}").contains(&("handshake", Verdict::Fail)));
    }

    #[test]
    fn moments_hold_for_irrational_spectra() {
        assert!(verdicts("{3,2,2,1;1,1,1,2}").contains(&("spectral-moments", Verdict::Pass)));
        assert!(verdicts("{4,2,1;1,1,4}").contains(&("spectral-moments", Verdict::Pass)));
    }
}
