//! Exact real algebraic values: a rational, or the unique root of a
//! square-free integer polynomial inside an open rational interval.
//!
//! Every comparison here is decided exactly. Equality between two isolated
//! roots goes through a polynomial gcd and a Sturm count on the overlap of the
//! intervals; inequality is settled by bisecting until intervals separate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::array::rational_string;
use crate::poly::{isolate_real_roots, Poly, RootIsolation, SturmChain};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("interval ({lo}, {hi}) does not isolate a single root of {poly}")]
    NotIsolating { poly: String, lo: String, hi: String },
}

#[derive(Clone, Debug)]
enum Repr {
    Rational(BigRational),
    Root { poly: Arc<Poly>, lo: BigRational, hi: BigRational },
}

/// A real number known exactly. Immutable; refinement works on copies.
#[derive(Clone, Debug)]
pub struct ExactValue {
    repr: Repr,
    approx: f64,
}

/// A working interval around a root, refined by bisection.
#[derive(Clone, Debug)]
pub(crate) struct Bracket {
    poly: Option<Arc<Poly>>,
    pub(crate) lo: BigRational,
    pub(crate) hi: BigRational,
    lo_sign: Ordering,
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

pub(crate) fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Bracket {
    pub(crate) fn is_point(&self) -> bool {
        self.poly.is_none()
    }

    pub(crate) fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Halves the interval; collapses to a point if the midpoint is the root.
    pub(crate) fn bisect(&mut self) {
        let Some(poly) = &self.poly else { return };
        let mid = (&self.lo + &self.hi) / two();
        match poly.sign_at(&mid) {
            Ordering::Equal => {
                self.lo = mid.clone();
                self.hi = mid;
                self.poly = None;
            }
            s if s == self.lo_sign => self.lo = mid,
            _ => self.hi = mid,
        }
    }

    pub(crate) fn refine_below(&mut self, width: &BigRational) {
        if !self.is_point() && &self.width() > width {
            self.float_shrink(width);
        }
        while !self.is_point() && &self.width() > width {
            self.bisect();
        }
    }

    /// Jumps to a dyadic interval of the target width around a float estimate
    /// of the root, kept only when exact endpoint signs confirm it.
    fn float_shrink(&mut self, width: &BigRational) {
        let Some(poly) = &self.poly else { return };
        let (mut a, mut b) = (to_f64(&self.lo), to_f64(&self.hi));
        let w = to_f64(width);
        if !(a.is_finite() && b.is_finite() && w > 0.0) {
            return;
        }
        let lo_positive = self.lo_sign == Ordering::Greater;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let v = poly.eval_f64(mid);
            if v == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if (v > 0.0) == lo_positive {
                a = mid;
            } else {
                b = mid;
            }
        }
        let r = 0.5 * (a + b);
        let (Some(new_lo), Some(new_hi)) =
            (BigRational::from_float(r - w / 4.0), BigRational::from_float(r + w / 4.0))
        else {
            return;
        };
        if new_lo <= self.lo || new_hi >= self.hi {
            return;
        }
        let (s_lo, s_hi) = (poly.sign_at(&new_lo), poly.sign_at(&new_hi));
        if s_lo == Ordering::Equal {
            self.lo = new_lo.clone();
            self.hi = new_lo;
            self.poly = None;
        } else if s_hi == Ordering::Equal {
            self.lo = new_hi.clone();
            self.hi = new_hi;
            self.poly = None;
        } else if s_lo == self.lo_sign && s_hi != self.lo_sign {
            self.lo = new_lo;
            self.hi = new_hi;
        }
    }
}

impl ExactValue {
    pub fn from_rational(q: BigRational) -> Self {
        let approx = to_f64(&q);
        ExactValue { repr: Repr::Rational(q), approx }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// The root of `poly` in the open interval `(lo, hi)`.
    pub fn from_root(poly: &Poly, lo: BigRational, hi: BigRational) -> Result<Self, ExactError> {
        let sq = poly.squarefree();
        let err = || ExactError::NotIsolating {
            poly: poly.to_string(),
            lo: rational_string(&lo),
            hi: rational_string(&hi),
        };
        let (slo, shi) = (sq.sign_at(&lo), sq.sign_at(&hi));
        if lo >= hi || slo == Ordering::Equal || shi == Ordering::Equal || slo == shi {
            return Err(err());
        }
        if SturmChain::new(&sq).count(Some(&lo), Some(&hi)) != 1 {
            return Err(err());
        }
        Ok(Self::root_unchecked(Arc::new(sq), lo, hi))
    }

    /// Caller guarantees `poly` is square-free and isolates one root in `(lo, hi)`.
    fn root_unchecked(poly: Arc<Poly>, lo: BigRational, hi: BigRational) -> Self {
        let lo_sign = poly.sign_at(&lo);
        let mut br = Bracket { poly: Some(poly.clone()), lo: lo.clone(), hi: hi.clone(), lo_sign };
        let width = BigRational::new(1.into(), BigInt::from(1u64 << 41));
        br.refine_below(&width);
        if br.is_point() {
            return Self::from_rational(br.lo);
        }
        let approx = to_f64(&((&br.lo + &br.hi) / two()));
        ExactValue { repr: Repr::Root { poly, lo: br.lo, hi: br.hi }, approx }
    }

    /// The root of the square-free `poly` isolated by `(lo, hi)`, detected as
    /// rational when it is one. The caller guarantees the isolation.
    pub(crate) fn isolated_root(poly: Arc<Poly>, lo: BigRational, hi: BigRational) -> Self {
        let lead = poly.leading().map(|l| l.abs()).unwrap_or_else(BigInt::one);
        match rational_root_in(&poly, &lead, lo.clone(), hi.clone()) {
            Some(r) => ExactValue::from_rational(r),
            None => ExactValue::root_unchecked(poly, lo, hi),
        }
    }

    /// All real roots of `p`, ascending. Roots that are rational are detected
    /// and returned as exact rationals.
    pub fn roots_of(p: &Poly) -> Vec<ExactValue> {
        let sq = Arc::new(p.squarefree());
        isolate_real_roots(&sq)
            .into_iter()
            .map(|iso| match iso {
                RootIsolation::Exact(r) => ExactValue::from_rational(r),
                RootIsolation::Open(lo, hi) => ExactValue::isolated_root(sq.clone(), lo, hi),
            })
            .collect()
    }

    /// The larger (or smaller) root of `x^2 + p x + q`, assumed real and distinct.
    pub fn quadratic_root(p: i64, q: i64, larger: bool) -> ExactValue {
        let poly = Poly::from_i64(&[q, p, 1]);
        let mut roots = ExactValue::roots_of(&poly);
        assert_eq!(roots.len(), 2, "quadratic x^2 + {p}x + {q} has no two real roots");
        if larger {
            roots.pop().unwrap()
        } else {
            roots.swap_remove(0)
        }
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Root { .. } => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// An interval `[lo, hi]` containing the value (degenerate for rationals).
    pub fn interval(&self) -> (BigRational, BigRational) {
        match &self.repr {
            Repr::Rational(q) => (q.clone(), q.clone()),
            Repr::Root { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// The defining polynomial: square-free, with this value as a root.
    pub fn polynomial(&self) -> Poly {
        match &self.repr {
            Repr::Rational(q) => Poly::linear_root(q),
            Repr::Root { poly, .. } => (**poly).clone(),
        }
    }

    pub(crate) fn bracket(&self) -> Bracket {
        match &self.repr {
            Repr::Rational(q) => {
                Bracket { poly: None, lo: q.clone(), hi: q.clone(), lo_sign: Ordering::Equal }
            }
            Repr::Root { poly, lo, hi } => Bracket {
                poly: Some(poly.clone()),
                lo: lo.clone(),
                hi: hi.clone(),
                lo_sign: poly.sign_at(lo),
            },
        }
    }

    /// A copy whose isolating interval is no wider than `width`.
    pub fn refined(&self, width: &BigRational) -> ExactValue {
        match &self.repr {
            Repr::Rational(_) => self.clone(),
            Repr::Root { poly, .. } => {
                let mut br = self.bracket();
                br.refine_below(width);
                if br.is_point() {
                    return ExactValue::from_rational(br.lo);
                }
                ExactValue {
                    repr: Repr::Root { poly: poly.clone(), lo: br.lo, hi: br.hi },
                    approx: self.approx,
                }
            }
        }
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        match &self.repr {
            Repr::Rational(r) => r.cmp(q),
            Repr::Root { poly, lo, hi } => {
                if q <= lo {
                    return Ordering::Greater;
                }
                if q >= hi {
                    return Ordering::Less;
                }
                match poly.sign_at(q) {
                    Ordering::Equal => Ordering::Equal,
                    // Same sign as at `lo`: no root in (lo, q], so the root is above q.
                    s if s == poly.sign_at(lo) => Ordering::Greater,
                    _ => Ordering::Less,
                }
            }
        }
    }

    pub fn cmp_integer(&self, n: i64) -> Ordering {
        self.cmp_rational(&BigRational::from_integer(n.into()))
    }

    /// Sign of g(self) for an integer polynomial g, decided exactly.
    pub fn sign_of(&self, g: &Poly) -> Ordering {
        match &self.repr {
            Repr::Rational(q) => g.sign_at(q),
            Repr::Root { poly, .. } => {
                if g.is_zero() {
                    return Ordering::Equal;
                }
                let h = poly.gcd(g);
                let mut br = self.bracket();
                if h.degree().unwrap_or(0) > 0
                    && SturmChain::new(&h).count(Some(&br.lo), Some(&br.hi)) > 0
                {
                    return Ordering::Equal;
                }
                // g(self) != 0: shrink until g has no root on the closed bracket.
                let gs = SturmChain::new(g);
                loop {
                    if br.is_point() {
                        return g.sign_at(&br.lo);
                    }
                    let s = g.sign_at(&br.lo);
                    if s != Ordering::Equal && gs.count(Some(&br.lo), Some(&br.hi)) == 0 {
                        return s;
                    }
                    br.bisect();
                }
            }
        }
    }

    /// Exact three-way comparison of two values.
    pub fn exact_cmp(&self, other: &ExactValue) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (_, Repr::Rational(b)) => self.cmp_rational(b),
            (Repr::Rational(a), _) => other.cmp_rational(a).reverse(),
            (Repr::Root { poly: p, .. }, Repr::Root { poly: q, .. }) => {
                let mut x = self.bracket();
                let mut y = other.bracket();
                let lo = (&x.lo).max(&y.lo).clone();
                let hi = (&x.hi).min(&y.hi).clone();
                if lo < hi {
                    let h = p.gcd(q);
                    // Endpoints of the overlap are endpoints of one of the two
                    // brackets, so neither is a root of h.
                    if h.degree().unwrap_or(0) > 0
                        && SturmChain::new(&h).count(Some(&lo), Some(&hi)) > 0
                    {
                        return Ordering::Equal;
                    }
                }
                loop {
                    if x.hi <= y.lo && !(x.is_point() && y.is_point() && x.hi == y.lo) {
                        return Ordering::Less;
                    }
                    if y.hi <= x.lo && !(x.is_point() && y.is_point() && y.hi == x.lo) {
                        return Ordering::Greater;
                    }
                    if x.is_point() && y.is_point() {
                        return x.lo.cmp(&y.lo);
                    }
                    if x.width() >= y.width() {
                        x.bisect();
                    } else {
                        y.bisect();
                    }
                }
            }
        }
    }

    /// Compares (x + alpha)(y + alpha) with beta, exactly.
    pub fn shifted_product_cmp(
        x: &ExactValue,
        y: &ExactValue,
        alpha: &BigRational,
        beta: &BigRational,
    ) -> Ordering {
        // Rational shortcuts reduce to a single comparison.
        if let Some(yr) = y.as_rational() {
            let ys = yr + alpha;
            return match ys.cmp(&BigRational::zero()) {
                Ordering::Equal => BigRational::zero().cmp(beta),
                Ordering::Greater => x.cmp_rational(&(beta / &ys - alpha)),
                Ordering::Less => x.cmp_rational(&(beta / &ys - alpha)).reverse(),
            };
        }
        if x.is_rational() {
            return Self::shifted_product_cmp(y, x, alpha, beta);
        }
        if x.cmp_rational(&-alpha.clone()) == Ordering::Equal {
            return BigRational::zero().cmp(beta);
        }
        // Equality forces y = phi(x) with phi(t) = -alpha + beta / (t + alpha),
        // hence x is a root of q(t) = (t + alpha)^n * p_y(phi(t)).
        let p_y = y.polynomial();
        let lin = Poly::linear_root(&-alpha.clone()); // aden*t + anum
        // phi = (bnum*aden^2 - anum*bden*lin) / (bden*aden*lin)
        let num = Poly::constant(beta.numer() * alpha.denom() * alpha.denom())
            .sub(&lin.scale(&(alpha.numer() * beta.denom())));
        let den = lin.scale(&(beta.denom() * alpha.denom()));
        let composed = p_y.compose_fraction(&num, &den);
        let may_be_equal = composed.is_zero() || x.sign_of(&composed) == Ordering::Equal;

        let mut bx = x.bracket();
        let mut by = y.bracket();
        let zero = BigRational::zero();
        if may_be_equal {
            // phi(x) is a root of p_y. It equals y exactly when it lies in y's
            // isolating interval, so shrink x alone until phi(I_x) settles it.
            let phi = |t: &BigRational| -alpha.clone() + beta / (t + alpha);
            loop {
                let pole_inside = &bx.lo + alpha <= zero && &bx.hi + alpha >= zero;
                if !pole_inside {
                    let (a, b) = (phi(&bx.lo), phi(&bx.hi));
                    let (plo, phi_hi) = if a <= b { (a, b) } else { (b, a) };
                    if plo > by.lo && phi_hi < by.hi {
                        return Ordering::Equal;
                    }
                    if phi_hi < by.lo || plo > by.hi {
                        break;
                    }
                }
                bx.bisect();
            }
        }
        // Not equal: refine until the product interval excludes beta.
        loop {
            let (lo, hi) = interval_product(
                &(&bx.lo + alpha),
                &(&bx.hi + alpha),
                &(&by.lo + alpha),
                &(&by.hi + alpha),
            );
            if &lo > beta {
                return Ordering::Greater;
            }
            if &hi < beta {
                return Ordering::Less;
            }
            if bx.is_point() && by.is_point() {
                return lo.cmp(beta);
            }
            if bx.width() >= by.width() {
                bx.bisect();
            } else {
                by.bisect();
            }
        }
    }

    /// The value (a x + b) / (c x + d) at x = self, or `None` when the
    /// denominator vanishes or the map is constant.
    pub fn mobius(
        &self,
        a: &BigRational,
        b: &BigRational,
        c: &BigRational,
        d: &BigRational,
    ) -> Option<ExactValue> {
        if (a * d - b * c).is_zero() {
            return None;
        }
        let f = |t: &BigRational| (a * t + b) / (c * t + d);
        if let Some(x) = self.as_rational() {
            let den = c * x + d;
            return (!den.is_zero()).then(|| ExactValue::from_rational(f(x)));
        }
        // self is irrational, so c x + d != 0 and the image is irrational.
        // x = (d y - b) / (a - c y): y is a root of p_x composed with that map.
        let scale = [a, b, c, d]
            .iter()
            .fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
        let int = |q: &BigRational| (q * BigRational::from_integer(scale.clone())).to_integer();
        let num = Poly::linear(-int(b), int(d));
        let den = Poly::linear(int(a), -int(c));
        let candidates = ExactValue::roots_of(&self.polynomial().compose_fraction(&num, &den));
        let mut bx = self.bracket();
        loop {
            let pole = -d / c;
            let pole_inside = !c.is_zero() && bx.lo <= pole && pole <= bx.hi;
            if !pole_inside {
                let (u, v) = (f(&bx.lo), f(&bx.hi));
                let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
                let mut inside = candidates.iter().filter(|y| {
                    y.cmp_rational(&lo) != Ordering::Less && y.cmp_rational(&hi) != Ordering::Greater
                });
                if let (Some(y), None) = (inside.next(), inside.next()) {
                    return Some(y.clone());
                }
            }
            bx.bisect();
        }
    }

    /// Recognises values of the form (p + s*sqrt(q))/r with small r.
    pub fn as_surd(&self) -> Option<Surd> {
        if let Some(q) = self.as_rational() {
            return Surd::rational(q);
        }
        let x = self.approx;
        let bound = (x.abs().ceil() as i64 + 2) * 4;
        for r in [1i64, 2] {
            for p in -bound..=bound {
                let t = r as f64 * x - p as f64;
                let sq = t * t;
                let n = sq.round();
                if (sq - n).abs() > 1e-6 * n.max(1.0) || n < 1.0 {
                    continue;
                }
                let surd = Surd::new(p, if t < 0.0 { -1 } else { 1 }, n as i64, r);
                if surd.to_exact().exact_cmp(self) == Ordering::Equal {
                    return Some(surd);
                }
            }
        }
        None
    }
}

/// The unique rational root with denominator dividing `lead` in (lo, hi), if any.
fn rational_root_in(
    p: &Poly,
    lead: &BigInt,
    mut lo: BigRational,
    mut hi: BigRational,
) -> Option<BigRational> {
    let step = BigRational::new(BigInt::one(), lead.clone());
    let lo_sign = p.sign_at(&lo);
    while hi.clone() - lo.clone() >= step {
        let mid = (&lo + &hi) / two();
        match p.sign_at(&mid) {
            Ordering::Equal => return Some(mid),
            s if s == lo_sign => lo = mid,
            _ => hi = mid,
        }
    }
    // At most one multiple of 1/lead lies strictly inside.
    let cand = BigRational::new(
        crate::array::floor_div(&(lo.numer() * lead), lo.denom()) + 1,
        lead.clone(),
    );
    (cand > lo && cand < hi && p.sign_at(&cand) == Ordering::Equal).then_some(cand)
}

fn interval_product(
    a_lo: &BigRational,
    a_hi: &BigRational,
    b_lo: &BigRational,
    b_hi: &BigRational,
) -> (BigRational, BigRational) {
    let prods = [a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi];
    let lo = prods.iter().min().unwrap().clone();
    let hi = prods.iter().max().unwrap().clone();
    (lo, hi)
}

impl PartialEq for ExactValue {
    fn eq(&self, other: &Self) -> bool {
        self.exact_cmp(other) == Ordering::Equal
    }
}

impl Eq for ExactValue {}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exact_cmp(other)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_surd() {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "{:.12}", self.approx),
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (lo, hi) = self.interval();
        let mut st = s.serialize_struct("ExactValue", 4)?;
        st.serialize_field("exact", &self.as_surd().map(|x| x.to_string()))?;
        st.serialize_field("float", &self.approx)?;
        st.serialize_field("lo", &rational_string(&lo))?;
        st.serialize_field("hi", &rational_string(&hi))?;
        st.end()
    }
}

/// A quadratic surd (p + s*sqrt(q)) / r with q square-free, r > 0.
/// Rationals are represented with s = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surd {
    pub p: i64,
    pub s: i64,
    pub q: i64,
    pub r: i64,
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

impl Surd {
    /// Normalises (p + sign*sqrt(n)) / r.
    pub fn new(p: i64, sign: i64, n: i64, r: i64) -> Surd {
        assert!(r != 0 && n >= 0);
        // Pull square factors out of n.
        let (mut s, mut q) = (sign, n);
        if q == 0 {
            s = 0;
            q = 1;
        }
        let mut f = 2;
        while f * f <= q {
            while q % (f * f) == 0 {
                q /= f * f;
                s *= f;
            }
            f += 1;
        }
        if q == 1 {
            return Surd::normalize(p + s, 0, 1, r);
        }
        Surd::normalize(p, s, q, r)
    }

    fn normalize(mut p: i64, mut s: i64, q: i64, mut r: i64) -> Surd {
        if r < 0 {
            p = -p;
            s = -s;
            r = -r;
        }
        let g = gcd_i64(gcd_i64(p, s), r);
        if g > 1 {
            p /= g;
            s /= g;
            r /= g;
        }
        Surd { p, s, q: if s == 0 { 1 } else { q }, r }
    }

    pub fn rational(x: &BigRational) -> Option<Surd> {
        let p = x.numer().to_i64()?;
        let r = x.denom().to_i64()?;
        Some(Surd::normalize(p, 0, 1, r))
    }

    pub fn is_rational(&self) -> bool {
        self.s == 0
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + self.s as f64 * (self.q as f64).sqrt()) / self.r as f64
    }

    pub fn to_exact(&self) -> ExactValue {
        if self.is_rational() {
            return ExactValue::from_rational(BigRational::new(self.p.into(), self.r.into()));
        }
        // Root of (r x - p)^2 - s^2 q, picked by the sign of s.
        let (p, r) = (self.p, self.r);
        let c = self.s * self.s * self.q;
        let poly = Poly::from_i64(&[p * p - c, -2 * p * r, r * r]);
        let roots = ExactValue::roots_of(&poly);
        if self.s > 0 {
            roots.into_iter().last().unwrap()
        } else {
            roots.into_iter().next().unwrap()
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return if self.r == 1 {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let mag = self.s.abs();
        let root = if mag == 1 {
            format!("sqrt({})", self.q)
        } else {
            format!("{mag}*sqrt({})", self.q)
        };
        let sign = if self.s < 0 { "-" } else { "+" };
        let body = if self.p == 0 {
            if self.s < 0 {
                format!("-{root}")
            } else {
                root
            }
        } else {
            format!("{}{sign}{root}", self.p)
        };
        if self.r == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.r)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported exact expression {0:?}; expected int, sqrt(n), p±sqrt(n) or (p±sqrt(n))/r")]
pub struct SurdParseError(pub String);

impl FromStr for Surd {
    type Err = SurdParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || SurdParseError(text.to_string());
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('±', "+");
        // (body)/r
        let (body, r) = match t.strip_prefix('(').and_then(|x| x.split_once(")/")) {
            Some((body, r)) => (body.to_string(), r.parse::<i64>().map_err(|_| err())?),
            None => (t.clone(), 1),
        };
        if r <= 0 {
            return Err(err());
        }
        let parse_root = |term: &str| -> Result<(i64, i64), SurdParseError> {
            // [m*]sqrt(n) -> (m, n)
            let (m, rest) = match term.split_once("*sqrt(") {
                Some((m, rest)) => (m.parse::<i64>().map_err(|_| err())?, rest),
                None => (1, term.strip_prefix("sqrt(").ok_or_else(err)?),
            };
            let n = rest.strip_suffix(')').ok_or_else(err)?.parse::<i64>().map_err(|_| err())?;
            if n < 0 {
                return Err(err());
            }
            Ok((m, n))
        };
        let Some(pos) = body.find("sqrt(") else {
            // p or p/q
            let (p, q) = match body.split_once('/') {
                Some((p, q)) if r == 1 => (p, q.parse::<i64>().map_err(|_| err())?),
                Some(_) => return Err(err()),
                None => (body.as_str(), 1),
            };
            let p = p.parse::<i64>().map_err(|_| err())?;
            if q <= 0 {
                return Err(err());
            }
            return Ok(Surd::normalize(p, 0, 1, r * q));
        };
        // Split the body into an optional integer part and a signed root term.
        let head = &body[..pos];
        let (p, sign, term) = match head.rfind(['+', '-']) {
            Some(i) if i > 0 => {
                let p = head[..i].parse::<i64>().map_err(|_| err())?;
                let sign = if &head[i..=i] == "-" { -1 } else { 1 };
                (p, sign, &body[i + 1..])
            }
            Some(_) => (0, if head.starts_with('-') { -1 } else { 1 }, &body[1..]),
            None => (0, 1, body.as_str()),
        };
        let (m, n) = parse_root(term)?;
        // Form (p + sign*m*sqrt(n)) / r.
        let sq = Surd::new(0, 1, n, 1);
        let s_total = sign * m * sq.s;
        if sq.is_rational() {
            return Ok(Surd::normalize(p + sign * m * sq.p, 0, 1, r));
        }
        Ok(Surd::normalize(p, s_total, sq.q, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt(n: i64) -> ExactValue {
        ExactValue::roots_of(&Poly::from_i64(&[-n, 0, 1])).pop().unwrap()
    }

    #[test]
    fn roots_of_detects_rationals() {
        // (x - 4)(x - 2)(x + 1)(x + 2)
        let p = [4, 2, -1, -2]
            .iter()
            .fold(Poly::one(), |acc, &r| acc.mul(&Poly::from_i64(&[-r, 1])));
        let roots = ExactValue::roots_of(&p);
        let got: Vec<BigRational> = roots.iter().map(|r| r.as_rational().unwrap().clone()).collect();
        assert_eq!(got, vec![q(-2, 1), q(-1, 1), q(2, 1), q(4, 1)]);
    }

    #[test]
    fn roots_of_detects_non_integer_rationals() {
        let p = Poly::from_i64(&[-1, 2]).mul(&Poly::from_i64(&[-2, 0, 1]));
        let roots = ExactValue::roots_of(&p);
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1].as_rational(), Some(&q(1, 2)));
        assert!(!roots[2].is_rational());
    }

    #[test]
    fn compare_irrationals() {
        let r2 = sqrt(2);
        let r3 = sqrt(3);
        assert_eq!(r2.exact_cmp(&r3), Ordering::Less);
        assert_eq!(r3.exact_cmp(&r2), Ordering::Greater);
        // sqrt(12)/2 == sqrt(3) through different polynomials.
        let other = ExactValue::roots_of(&Poly::from_i64(&[-12, 0, 4])).pop().unwrap();
        assert_eq!(other.exact_cmp(&r3), Ordering::Equal);
        assert_eq!(r2.cmp_rational(&q(7, 5)), Ordering::Greater);
        assert_eq!(r2.cmp_rational(&q(3, 2)), Ordering::Less);
    }

    #[test]
    fn compare_roots_sharing_a_polynomial_factor() {
        // Both polynomials contain x^2 - 3 but differ elsewhere.
        let p = Poly::from_i64(&[-3, 0, 1]).mul(&Poly::from_i64(&[-5, 1]));
        let q_ = Poly::from_i64(&[-3, 0, 1]).mul(&Poly::from_i64(&[1, 0, 1]));
        let a = ExactValue::roots_of(&p).into_iter().nth(1).unwrap();
        let b = ExactValue::roots_of(&q_).into_iter().nth(1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sign_of_polynomial_at_root() {
        let r2 = sqrt(2);
        assert_eq!(r2.sign_of(&Poly::from_i64(&[-2, 0, 1])), Ordering::Equal);
        assert_eq!(r2.sign_of(&Poly::from_i64(&[-3, 0, 1])), Ordering::Less);
        assert_eq!(r2.sign_of(&Poly::from_i64(&[-141, 100])), Ordering::Greater);
        assert_eq!(r2.sign_of(&Poly::from_i64(&[-142, 100])), Ordering::Less);
    }

    #[test]
    fn shifted_products() {
        // (sqrt2 + 1)(-sqrt2 + 1) = -1
        let r2 = sqrt(2);
        let m2 = ExactValue::roots_of(&Poly::from_i64(&[-2, 0, 1])).remove(0);
        let one = q(1, 1);
        assert_eq!(ExactValue::shifted_product_cmp(&r2, &m2, &one, &q(-1, 1)), Ordering::Equal);
        assert_eq!(ExactValue::shifted_product_cmp(&r2, &m2, &one, &q(-2, 1)), Ordering::Greater);
        assert_eq!(ExactValue::shifted_product_cmp(&r2, &m2, &one, &q(-1, 2)), Ordering::Less);
        // (sqrt2 + 1)(-3 + 1) vs -2
        let m3 = ExactValue::from_integer(-3);
        assert_eq!(ExactValue::shifted_product_cmp(&r2, &m3, &one, &q(-2, 1)), Ordering::Less);
        assert_eq!(ExactValue::shifted_product_cmp(&m3, &r2, &one, &q(-2, 1)), Ordering::Less);
    }

    #[test]
    fn shifted_product_equality_with_other_roots_around() {
        // Roots of (x^2 - 2)(x^2 - 8): -2r2, -r2, r2, 2r2.
        let p = Poly::from_i64(&[-2, 0, 1]).mul(&Poly::from_i64(&[-8, 0, 1]));
        let roots = ExactValue::roots_of(&p);
        let zero = BigRational::zero();
        // r2 * 2r2 = 4, r2 * (-2r2) = -4, r2 * -r2 = -2.
        assert_eq!(ExactValue::shifted_product_cmp(&roots[2], &roots[3], &zero, &q(4, 1)), Ordering::Equal);
        assert_eq!(ExactValue::shifted_product_cmp(&roots[2], &roots[0], &zero, &q(-4, 1)), Ordering::Equal);
        assert_eq!(ExactValue::shifted_product_cmp(&roots[2], &roots[1], &zero, &q(-4, 1)), Ordering::Greater);
        assert_eq!(ExactValue::shifted_product_cmp(&roots[2], &roots[1], &zero, &q(-2, 1)), Ordering::Equal);
    }

    #[test]
    fn surd_parse_and_display() {
        let cases = [
            ("3", Surd { p: 3, s: 0, q: 1, r: 1 }, "3"),
            ("-2", Surd { p: -2, s: 0, q: 1, r: 1 }, "-2"),
            ("sqrt(2)", Surd { p: 0, s: 1, q: 2, r: 1 }, "sqrt(2)"),
            ("-sqrt(3)", Surd { p: 0, s: -1, q: 3, r: 1 }, "-sqrt(3)"),
            ("-1+sqrt(2)", Surd { p: -1, s: 1, q: 2, r: 1 }, "-1+sqrt(2)"),
            ("-1-sqrt(2)", Surd { p: -1, s: -1, q: 2, r: 1 }, "-1-sqrt(2)"),
            ("(1+sqrt(13))/2", Surd { p: 1, s: 1, q: 13, r: 2 }, "(1+sqrt(13))/2"),
            ("(0-sqrt(12))/2", Surd { p: 0, s: -1, q: 3, r: 1 }, "-sqrt(3)"),
            ("sqrt(16)", Surd { p: 4, s: 0, q: 1, r: 1 }, "4"),
            ("2*sqrt(2)", Surd { p: 0, s: 2, q: 2, r: 1 }, "2*sqrt(2)"),
        ];
        for (text, want, shown) in cases {
            let got: Surd = text.parse().unwrap();
            assert_eq!(got, want, "{text}");
            assert_eq!(got.to_string(), shown, "{text}");
        }
        assert!("sqrt(x)".parse::<Surd>().is_err());
        assert!("cbrt(2)".parse::<Surd>().is_err());
        assert!("(1+sqrt(2))/0".parse::<Surd>().is_err());
    }

    #[test]
    fn surd_round_trip_through_exact() {
        for text in ["sqrt(2)", "-sqrt(3)", "-1+sqrt(2)", "-1-sqrt(2)", "(1+sqrt(13))/2", "(1-sqrt(5))/2", "7"] {
            let s: Surd = text.parse().unwrap();
            let e = s.to_exact();
            assert!((e.approx() - s.to_f64()).abs() < 1e-12);
            assert_eq!(e.as_surd(), Some(s), "{text}");
        }
    }

    #[test]
    fn mobius_images() {
        // -1 - 2/(x+1) = (-x - 3)/(x + 1)
        let (a, b, c, d) = (q(-1, 1), q(-3, 1), q(1, 1), q(1, 1));
        let r2 = sqrt(2);
        let y = r2.mobius(&a, &b, &c, &d).unwrap();
        // (-sqrt2 - 3)/(sqrt2 + 1) = -1 - 2(sqrt2 - 1) = 1 - 2 sqrt2
        let want: Surd = "1-2*sqrt(2)".parse().unwrap();
        assert_eq!(y, want.to_exact());
        let m3 = ExactValue::from_integer(-3);
        assert_eq!(m3.mobius(&a, &b, &c, &d).unwrap().as_rational(), Some(&q(0, 1)));
        assert!(ExactValue::from_integer(-1).mobius(&a, &b, &c, &d).is_none());
    }

    #[test]
    fn from_root_validates() {
        let p = Poly::from_i64(&[-2, 0, 1]);
        assert!(ExactValue::from_root(&p, q(1, 1), q(2, 1)).is_ok());
        assert!(ExactValue::from_root(&p, q(-2, 1), q(2, 1)).is_err());
        assert!(ExactValue::from_root(&p, q(2, 1), q(3, 1)).is_err());
    }

    #[test]
    fn refinement_keeps_value() {
        let r2 = sqrt(2);
        let fine = r2.refined(&q(1, 1_000_000_000));
        let (lo, hi) = fine.interval();
        assert!(&hi - &lo <= q(1, 1_000_000_000));
        assert_eq!(fine, r2);
        assert!((to_f64(&lo) - std::f64::consts::SQRT_2).abs() < 1e-9);
    }
}
