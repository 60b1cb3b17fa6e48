//! Dense univariate polynomials with integer coefficients, Sturm chains and
//! real-root isolation.
//!
//! Rational polynomials are handled by clearing denominators: only signs and
//! roots matter to callers, and both are invariant under positive scaling.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial with coefficients stored lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

fn sign_of(x: &BigInt) -> Ordering {
    x.cmp(&BigInt::zero())
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    /// `x - r` scaled to integers: `den*x - num` for r = num/den.
    pub fn linear_root(r: &BigRational) -> Self {
        Poly::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    /// `c0 + c1 x` with integer coefficients.
    pub fn linear(c0: BigInt, c1: BigInt) -> Self {
        Poly::new(vec![c0, c1])
    }

    /// Integer polynomial proportional (by a positive factor) to the given
    /// rational coefficients.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Poly::new(
            coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Sign of p(n/d) times d^deg, computed in integers. `d` must be positive.
    fn homogeneous_value(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut iter = self.coeffs.iter().rev();
        let Some(lead) = iter.next() else {
            return BigInt::zero();
        };
        let mut acc = lead.clone();
        let mut den_pow = BigInt::one();
        for c in iter {
            den_pow *= den;
            acc = acc * num + c * &den_pow;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let deg = self.degree().unwrap_or(0) as u32;
        let h = self.homogeneous_value(x.numer(), x.denom());
        BigRational::new(h, num_traits::pow(x.denom().clone(), deg as usize))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.homogeneous_value(x, &BigInt::one())
    }

    /// Sign of p(x) for rational x.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        sign_of(&self.homogeneous_value(x.numer(), x.denom()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// gcd of the coefficients, always non-negative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// The polynomial divided by its content (sign preserved).
    pub fn primitive(&self) -> Poly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Poly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder scaled by a *positive* power of the divisor's leading
    /// coefficient, so its sign agrees with the true remainder over the rationals.
    pub fn signed_prem(&self, divisor: &Poly) -> Poly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().abs();
        let lead_sign = sign_of(divisor.leading().unwrap());
        let mut rem = self.coeffs.clone();
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let top = rem.last().unwrap().clone();
            // rem <- |lc| * rem - sign(lc) * top * x^shift * divisor
            for c in rem.iter_mut() {
                *c *= &lead;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let term = &top * dc;
                if lead_sign == Ordering::Less {
                    rem[shift + j] += term;
                } else {
                    rem[shift + j] -= term;
                }
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Poly::new(rem)
    }

    /// Quotient of an exact division, up to a positive scalar.
    pub fn exact_quotient(&self, divisor: &Poly) -> Poly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let Some(nd) = self.degree() else {
            return Poly::zero();
        };
        if nd < dd {
            return Poly::zero();
        }
        let lead = divisor.leading().unwrap().clone();
        // Work over the rationals and clear denominators at the end.
        let mut rem: Vec<BigRational> =
            self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let t = &rem[shift + dd] / BigRational::from_integer(lead.clone());
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] -= &t * BigRational::from_integer(dc.clone());
            }
            quot[shift] = t;
        }
        Poly::from_rationals(&quot)
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.signed_prem(&b).primitive();
            a = b;
            b = r;
        }
        if a.leading().is_some_and(|l| l.is_negative()) {
            a = a.neg();
        }
        a
    }

    /// Square-free part p / gcd(p, p').
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.primitive()
        } else {
            self.exact_quotient(&g).primitive()
        }
    }

    /// Numerator of p(num(x)/den(x)) * den(x)^deg p.
    pub fn compose_fraction(&self, num: &Poly, den: &Poly) -> Poly {
        let n = self.degree().unwrap_or(0);
        let mut out = Poly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = num.pow(i).mul(&den.pow(n - i)).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// A bound B with every real root strictly inside (-B, B).
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().expect("zero polynomial has no root bound").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigRational::one() + BigRational::new(max, lead)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

fn count_variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

impl SturmChain {
    /// Builds the chain of the square-free part of `p`.
    pub fn new(p: &Poly) -> Self {
        let p0 = p.squarefree();
        let mut chain = vec![p0.clone()];
        if p0.degree().unwrap_or(0) == 0 {
            return SturmChain { chain };
        }
        chain.push(p0.derivative().primitive());
        loop {
            let n = chain.len();
            let r = chain[n - 2].signed_prem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().primitive());
        }
        SturmChain { chain }
    }

    pub fn polynomial(&self) -> &Poly {
        &self.chain[0]
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_pos_inf(&self) -> usize {
        count_variations(self.chain.iter().map(|p| sign_of(p.leading().unwrap())))
    }

    fn variations_at_neg_inf(&self) -> usize {
        count_variations(self.chain.iter().map(|p| {
            let s = sign_of(p.leading().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in `(lo, hi]`, where `None` stands for
    /// the corresponding infinity.
    pub fn count(&self, lo: Option<&BigRational>, hi: Option<&BigRational>) -> usize {
        let vlo = lo.map_or_else(|| self.variations_at_neg_inf(), |x| self.variations_at(x));
        let vhi = hi.map_or_else(|| self.variations_at_pos_inf(), |x| self.variations_at(x));
        vlo.saturating_sub(vhi)
    }

    pub fn count_real_roots(&self) -> usize {
        self.count(None, None)
    }
}

/// One isolated real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootIsolation {
    /// The root is exactly this rational.
    Exact(BigRational),
    /// The root is the only one in the open interval; the polynomial is
    /// nonzero at both ends with opposite signs.
    Open(BigRational, BigRational),
}

fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(BigInt::from(2))
}

/// Isolates every real root of `p`, in ascending order.
pub fn isolate_real_roots(p: &Poly) -> Vec<RootIsolation> {
    let sturm = SturmChain::new(p);
    let sq = sturm.polynomial().clone();
    if sq.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let bound = sq.root_bound();
    let mut out = Vec::new();
    // Depth-first, left half first, so output is ascending.
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(Some(&lo), Some(&hi));
        match n {
            0 => {}
            1 => out.push(finish_isolation(&sq, &sturm, lo, hi)),
            _ => {
                let mid = midpoint(&lo, &hi);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out
}

/// Turns a half-open interval `(lo, hi]` holding one root into a clean isolation.
fn finish_isolation(
    p: &Poly,
    sturm: &SturmChain,
    mut lo: BigRational,
    mut hi: BigRational,
) -> RootIsolation {
    if p.sign_at(&hi) == Ordering::Equal {
        return RootIsolation::Exact(hi);
    }
    // `lo` may be a neighbouring root; move it inward until it is not.
    while p.sign_at(&lo) == Ordering::Equal {
        let mid = midpoint(&lo, &hi);
        if sturm.count(Some(&lo), Some(&mid)) == 0 {
            lo = mid;
        } else {
            if p.sign_at(&mid) == Ordering::Equal {
                return RootIsolation::Exact(mid);
            }
            hi = mid;
        }
    }
    RootIsolation::Open(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn evaluation_and_signs() {
        let p = Poly::from_i64(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(p.eval(&q(3, 2)), q(1, 4));
        assert_eq!(p.sign_at(&q(1, 1)), Ordering::Less);
        assert_eq!(p.sign_at(&q(2, 1)), Ordering::Greater);
        assert_eq!(p.eval_int(&BigInt::from(3)), BigInt::from(7));
        assert!((p.eval_f64(1.5) - 0.25).abs() < 1e-15);
        assert_eq!(p.to_string(), "x^2 - 2");
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = Poly::from_i64(&[-1, 0, 1]); // (x-1)(x+1)
        let b = Poly::from_i64(&[1, -2, 1]); // (x-1)^2
        assert_eq!(a.gcd(&b), Poly::from_i64(&[-1, 1]));
        assert_eq!(b.squarefree(), Poly::from_i64(&[-1, 1]));
        let c = Poly::from_i64(&[-2, 0, 1]);
        assert_eq!(a.gcd(&c), Poly::one());
    }

    #[test]
    fn exact_quotient_recovers_factor() {
        let a = Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[3, 0, 2]));
        assert_eq!(a.exact_quotient(&Poly::from_i64(&[-1, 1])), Poly::from_i64(&[3, 0, 2]));
    }

    #[test]
    fn signed_prem_matches_rational_remainder_sign() {
        // (x^2 + 1) mod (-2x + 1): remainder is 5/4 > 0.
        let r = Poly::from_i64(&[1, 0, 1]).signed_prem(&Poly::from_i64(&[1, -2]));
        assert_eq!(r.degree(), Some(0));
        assert!(r.coeff(0).is_positive());
    }

    #[test]
    fn sturm_counts_half_open() {
        // (x-1)(x-2)(x+3)
        let p = Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[-2, 1])).mul(&Poly::from_i64(&[3, 1]));
        let s = SturmChain::new(&p);
        assert_eq!(s.count_real_roots(), 3);
        assert_eq!(s.count(Some(&q(1, 1)), Some(&q(2, 1))), 1); // (1, 2] holds 2
        assert_eq!(s.count(Some(&q(0, 1)), Some(&q(1, 1))), 1); // (0, 1] holds 1
        assert_eq!(s.count(None, Some(&q(-3, 1))), 1);
        assert_eq!(s.count(Some(&q(-3, 1)), None), 2);
    }

    #[test]
    fn isolation_finds_rational_and_irrational_roots() {
        // x (x^2 - 2) (x - 1)
        let p = Poly::from_i64(&[0, 1]).mul(&Poly::from_i64(&[-2, 0, 1])).mul(&Poly::from_i64(&[-1, 1]));
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 4);
        let sq = p.squarefree();
        let mut prev = None;
        for r in &roots {
            let (lo, hi) = match r {
                RootIsolation::Exact(x) => {
                    assert_eq!(p.sign_at(x), Ordering::Equal);
                    (x.clone(), x.clone())
                }
                RootIsolation::Open(lo, hi) => {
                    assert_ne!(sq.sign_at(lo), Ordering::Equal);
                    assert_eq!(sq.sign_at(lo), sq.sign_at(hi).reverse());
                    (lo.clone(), hi.clone())
                }
            };
            if let Some(p) = prev {
                assert!(p <= lo);
            }
            prev = Some(hi);
        }
    }

    #[test]
    fn compose_fraction_substitutes() {
        // p(x) = x^2 - 2; substitute x -> (x+1)/x: numerator (x+1)^2 - 2x^2.
        let p = Poly::from_i64(&[-2, 0, 1]);
        let num = Poly::from_i64(&[1, 1]);
        let den = Poly::from_i64(&[0, 1]);
        assert_eq!(p.compose_fraction(&num, &den), Poly::from_i64(&[1, 2, -1]));
    }

    #[test]
    fn from_rationals_clears_denominators() {
        let p = Poly::from_rationals(&[q(1, 2), q(-1, 3)]);
        assert_eq!(p, Poly::from_i64(&[3, -2]));
    }
}
