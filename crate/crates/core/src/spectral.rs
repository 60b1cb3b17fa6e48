//! Intersection matrices, exact spectra, standard sequences and multiplicities.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::array::{rational_string, IntersectionArray};
use crate::exact::{to_f64, ExactValue};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("off-diagonal lists must have length {expected}, got sub={sub} sup={sup}")]
    Shape { expected: usize, sub: usize, sup: usize },
    #[error("off-diagonal entries must be positive (position {0})")]
    NonPositiveOffDiagonal(usize),
    #[error("matrix of order {0} is empty")]
    Empty(usize),
    #[error("a_{index} = {value} is negative")]
    NegativeIntersectionNumber { index: usize, value: i64 },
    #[error("B is not a principal block of A")]
    NotPrincipalBlock,
}

/// A tridiagonal integer matrix with positive off-diagonal entries.
///
/// `sub[i]` sits at (i+1, i) and `sup[i]` at (i, i+1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TridiagonalMatrix {
    sub: Vec<i64>,
    diag: Vec<i64>,
    sup: Vec<i64>,
}

impl TridiagonalMatrix {
    pub fn new(sub: Vec<i64>, diag: Vec<i64>, sup: Vec<i64>) -> Result<Self, SpectralError> {
        if diag.is_empty() {
            return Err(SpectralError::Empty(0));
        }
        let expected = diag.len() - 1;
        if sub.len() != expected || sup.len() != expected {
            return Err(SpectralError::Shape { expected, sub: sub.len(), sup: sup.len() });
        }
        if let Some(i) = (0..expected).find(|&i| sub[i] <= 0 || sup[i] <= 0) {
            return Err(SpectralError::NonPositiveOffDiagonal(i));
        }
        Ok(TridiagonalMatrix { sub, diag, sup })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[i64] {
        &self.diag
    }

    pub fn sub(&self) -> &[i64] {
        &self.sub
    }

    pub fn sup(&self) -> &[i64] {
        &self.sup
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        match j as isize - i as isize {
            0 => self.diag[i],
            1 => self.sup[i],
            -1 => self.sub[j],
            _ => 0,
        }
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        let n = self.order();
        (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// The principal block on rows/columns `start..start+len`.
    pub fn block(&self, start: usize, len: usize) -> TridiagonalMatrix {
        assert!(len >= 1 && start + len <= self.order());
        TridiagonalMatrix {
            sub: self.sub[start..start + len - 1].to_vec(),
            diag: self.diag[start..start + len].to_vec(),
            sup: self.sup[start..start + len - 1].to_vec(),
        }
    }

    /// Offset at which `other` occurs as a contiguous principal block.
    pub fn find_block(&self, other: &TridiagonalMatrix) -> Option<usize> {
        let m = other.order();
        if m > self.order() {
            return None;
        }
        (0..=self.order() - m).find(|&s| self.block(s, m) == *other)
    }

    /// det(xI - M_j) for the leading j×j blocks, j = 0..=n.
    pub fn leading_minors(&self) -> Vec<Poly> {
        let n = self.order();
        let mut out = Vec::with_capacity(n + 1);
        out.push(Poly::one());
        out.push(Poly::from_i64(&[-self.diag[0], 1]));
        for j in 1..n {
            let lin = Poly::from_i64(&[-self.diag[j], 1]);
            let off = BigInt::from(self.sub[j - 1]) * self.sup[j - 1];
            let next = lin.mul(&out[j]).sub(&out[j - 1].scale(&off));
            out.push(next);
        }
        out
    }

    pub fn charpoly(&self) -> Poly {
        self.leading_minors().pop().unwrap()
    }

    /// Exact eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Vec<ExactValue> {
        self.eigenvalues_separated().unwrap_or_else(|| {
            let mut ev = ExactValue::roots_of(&self.charpoly());
            ev.reverse();
            ev
        })
    }

    /// Isolation from float estimates: rational separators between
    /// consecutive float eigenvalues, each confirmed exactly by
    /// [`Self::count_above`] and a non-vanishing characteristic polynomial.
    /// `None` when any confirmation fails.
    fn eigenvalues_separated(&self) -> Option<Vec<ExactValue>> {
        let n = self.order();
        let f = self.eigenvalues_f64();
        let bound = (0..n)
            .map(|i| {
                let left = if i > 0 { self.sub[i - 1] * self.sup[i - 1] } else { 0 };
                let right = if i + 1 < n { self.sub[i] * self.sup[i] } else { 0 };
                self.diag[i].abs() + left + right
            })
            .max()?
            + 1;
        let mut seps = Vec::with_capacity(n + 1);
        seps.push(BigRational::from_integer(bound.into()));
        for i in 1..n {
            let mid = 0.5 * (f[i - 1] + f[i]);
            if !(f[i] < mid && mid < f[i - 1]) {
                return None;
            }
            seps.push(BigRational::from_float(mid)?);
        }
        seps.push(BigRational::from_integer((-bound).into()));
        let p = Arc::new(self.charpoly());
        for (i, s) in seps.iter().enumerate() {
            if self.count_above(s) != i || p.sign_at(s) == Ordering::Equal {
                return None;
            }
        }
        Some((0..n).map(|i| ExactValue::isolated_root(p.clone(), seps[i + 1].clone(), seps[i].clone())).collect())
    }

    /// Number of eigenvalues strictly greater than `x`.
    ///
    /// The leading minors evaluated at x form a Sturm sequence; its sign
    /// variations, zeros dropped, count the eigenvalues above x. Runs in
    /// checked 128-bit arithmetic with a big-integer fallback.
    pub fn count_above(&self, x: &BigRational) -> usize {
        if let (Some(num), Some(den)) = (x.numer().to_i128(), x.denom().to_i128()) {
            if let Some(n) = self.count_above_i128(num, den) {
                return n;
            }
        }
        self.count_above_big(x.numer(), x.denom())
    }

    fn count_above_i128(&self, num: i128, den: i128) -> Option<usize> {
        let den2 = den.checked_mul(den)?;
        let mut prev: i128 = 1;
        let mut cur = num.checked_sub((self.diag[0] as i128).checked_mul(den)?)?;
        let mut counter = VariationCounter::new();
        counter.push(prev.signum());
        counter.push(cur.signum());
        for j in 1..self.order() {
            let lin = num.checked_sub((self.diag[j] as i128).checked_mul(den)?)?;
            let off = (self.sub[j - 1] as i128).checked_mul(self.sup[j - 1] as i128)?;
            let next = lin
                .checked_mul(cur)?
                .checked_sub(den2.checked_mul(off)?.checked_mul(prev)?)?;
            // Keep magnitudes small; only signs matter.
            let g = gcd_i128(cur, next);
            prev = cur / g;
            cur = next / g;
            counter.push(cur.signum());
        }
        Some(counter.count)
    }

    fn count_above_big(&self, num: &BigInt, den: &BigInt) -> usize {
        let den2 = den * den;
        let mut prev = BigInt::one();
        let mut cur = num - den * self.diag[0];
        let mut counter = VariationCounter::new();
        counter.push(1);
        counter.push(sign_i(&cur));
        for j in 1..self.order() {
            let lin = num - den * self.diag[j];
            let off = BigInt::from(self.sub[j - 1]) * self.sup[j - 1];
            let next = &lin * &cur - &den2 * off * &prev;
            prev = cur;
            cur = next;
            counter.push(sign_i(&cur));
        }
        counter.count
    }

    /// Float eigenvalues of the symmetrised matrix by bisection, decreasing.
    /// Used only to cross-check the exact engine.
    pub fn eigenvalues_f64(&self) -> Vec<f64> {
        let n = self.order();
        let d: Vec<f64> = self.diag.iter().map(|&x| x as f64).collect();
        let e2: Vec<f64> = (0..n - 1).map(|i| (self.sub[i] * self.sup[i]) as f64).collect();
        let radius = (0..n)
            .map(|i| {
                let left = if i > 0 { e2[i - 1].sqrt() } else { 0.0 };
                let right = if i + 1 < n { e2[i].sqrt() } else { 0.0 };
                d[i].abs() + left + right
            })
            .fold(0.0, f64::max)
            + 1.0;
        // Number of eigenvalues below x from the LDL^T pivots.
        let below = |x: f64| {
            let mut count = 0;
            let mut q = d[0] - x;
            for i in 0..n {
                if i > 0 {
                    let prev = if q == 0.0 { f64::EPSILON * radius } else { q };
                    q = d[i] - x - e2[i - 1] / prev;
                }
                if q < 0.0 {
                    count += 1;
                }
            }
            count
        };
        let mut out: Vec<f64> = (0..n)
            .map(|idx| {
                // idx-th smallest eigenvalue.
                let (mut lo, mut hi) = (-radius, radius);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if below(mid) > idx {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        out.reverse();
        out
    }
}

struct VariationCounter {
    last: i32,
    count: usize,
}

impl VariationCounter {
    fn new() -> Self {
        VariationCounter { last: 0, count: 0 }
    }

    fn push(&mut self, s: impl Into<i128>) {
        let s = s.into().signum() as i32;
        if s == 0 {
            return;
        }
        if self.last != 0 && s != self.last {
            self.count += 1;
        }
        self.last = s;
    }
}

fn sign_i(x: &BigInt) -> i32 {
    match x.cmp(&BigInt::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let g = a.unsigned_abs().gcd(&b.unsigned_abs());
    if g == 0 {
        1
    } else {
        g as i128
    }
}

/// The (D+1)×(D+1) matrix with rows (c_i, a_i, b_i).
pub fn full_matrix(arr: &IntersectionArray) -> TridiagonalMatrix {
    TridiagonalMatrix {
        sub: arr.c_list().to_vec(),
        diag: arr.a_list(),
        sup: arr.b_list().to_vec(),
    }
}

/// The D×D matrix T whose eigenvalues are θ_1, …, θ_D.
pub fn reduced_matrix(arr: &IntersectionArray) -> TridiagonalMatrix {
    let d = arr.diameter();
    let k = arr.valency();
    let mut diag = vec![-arr.c(1)];
    diag.extend((1..d).map(|i| k - arr.b(i) - arr.c(i + 1)));
    TridiagonalMatrix {
        sub: (1..d).map(|i| arr.c(i)).collect(),
        diag,
        sup: (1..d).map(|i| arr.b(i)).collect(),
    }
}

/// A multiplicity m(θ) = v / Σ k_j u_j(θ)².
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplicity {
    /// θ rational, so the value is an exact rational.
    Exact(BigRational),
    /// θ irrational: float value with an enclosure half-width, the nearest
    /// integer, and whether m equals that integer exactly.
    Algebraic { approx: f64, error: f64, nearest: i64, integral: bool },
}

impl Multiplicity {
    pub fn approx(&self) -> f64 {
        match self {
            Multiplicity::Exact(q) => to_f64(q),
            Multiplicity::Algebraic { approx, .. } => *approx,
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            Multiplicity::Exact(q) => q.is_integer(),
            Multiplicity::Algebraic { integral, .. } => *integral,
        }
    }

    /// The integer value, when m is known to be an integer.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Multiplicity::Exact(q) if q.is_integer() => q.to_integer().to_i64(),
            Multiplicity::Algebraic { nearest, integral: true, .. } => Some(*nearest),
            _ => None,
        }
    }

    pub fn display(&self) -> String {
        match self {
            Multiplicity::Exact(q) => rational_string(q),
            Multiplicity::Algebraic { nearest, integral: true, .. } => nearest.to_string(),
            Multiplicity::Algebraic { approx, .. } => format!("{approx:.12}"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Multiplicity", 4)?;
        match self {
            Multiplicity::Exact(q) => {
                st.serialize_field("exact", &Some(rational_string(q)))?;
                st.serialize_field("float", &to_f64(q))?;
                st.serialize_field("error", &0.0)?;
                st.serialize_field("integral", &q.is_integer())?;
            }
            Multiplicity::Algebraic { approx, error, nearest, integral } => {
                st.serialize_field("exact", &integral.then(|| nearest.to_string()))?;
                st.serialize_field("float", approx)?;
                st.serialize_field("error", error)?;
                st.serialize_field("integral", integral)?;
            }
        }
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    /// θ_0 > θ_1 > … > θ_D.
    pub eigenvalues: Vec<ExactValue>,
    pub multiplicities: Vec<Multiplicity>,
    /// Coefficients of det(xI - L), lowest degree first.
    #[serde(serialize_with = "serialize_poly")]
    pub charpoly: Poly,
}

fn serialize_poly<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

impl Spectrum {
    pub fn diameter(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    pub fn theta(&self, i: usize) -> &ExactValue {
        &self.eigenvalues[i]
    }

    pub fn second_largest(&self) -> &ExactValue {
        &self.eigenvalues[1]
    }

    pub fn smallest(&self) -> &ExactValue {
        self.eigenvalues.last().unwrap()
    }

    /// True when θ_i = -θ_{D-i} for every i.
    pub fn is_symmetric(&self) -> bool {
        let d = self.diameter();
        (0..=d / 2).all(|i| {
            let a = &self.eigenvalues[i];
            let b = &self.eigenvalues[d - i];
            // b is a root of p(x); -b is a root of p(-x).
            let p = b.polynomial();
            let reflected = Poly::new(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| if j % 2 == 1 { -c } else { c.clone() })
                    .collect(),
            );
            if a.sign_of(&reflected) != Ordering::Equal {
                return false;
            }
            // a is a root of the reflection; confirm it is -b, not another root.
            let (lo, hi) = b.interval();
            a.cmp_rational(&-hi.clone()) != Ordering::Less
                && a.cmp_rational(&-lo.clone()) != Ordering::Greater
        })
    }

    pub fn multiplicities_integral(&self) -> bool {
        self.multiplicities.iter().all(Multiplicity::is_integral)
    }

    pub fn integer_multiplicities(&self) -> Option<Vec<i64>> {
        self.multiplicities.iter().map(Multiplicity::as_integer).collect()
    }
}

/// Exact spectrum of the array: the D+1 roots of the full matrix's
/// characteristic polynomial, decreasing, with multiplicities.
pub fn spectrum(arr: &IntersectionArray) -> Result<Spectrum, SpectralError> {
    if let Some((index, &value)) = arr.a_list().iter().enumerate().find(|(_, a)| **a < 0) {
        return Err(SpectralError::NegativeIntersectionNumber { index, value });
    }
    let m = full_matrix(arr);
    let charpoly = m.charpoly();
    let eigenvalues = m.eigenvalues();
    assert_eq!(eigenvalues.len(), arr.diameter() + 1, "tridiagonal roots must be simple");
    let multiplicities = multiplicities_for(arr, &eigenvalues);
    Ok(Spectrum { eigenvalues, multiplicities, charpoly })
}

/// Σ_j k_j u_j(x)² as an integer polynomial `s` and a positive integer `scale`
/// with v / Σ k_j u_j² = v·scale / s(x).
fn norm_polynomial(arr: &IntersectionArray) -> (Poly, BigInt) {
    let mut minors = full_matrix(arr).leading_minors();
    minors.pop();
    // k_j u_j² = p_j² / (b_0…b_{j-1} · c_1…c_j).
    let mut weights = Vec::with_capacity(minors.len());
    let mut w = BigInt::one();
    for j in 0..minors.len() {
        if j > 0 {
            w *= BigInt::from(arr.b(j - 1)) * arr.c(j);
        }
        weights.push(w.clone());
    }
    let scale = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w));
    let s = minors
        .iter()
        .zip(&weights)
        .fold(Poly::zero(), |acc, (p, w)| acc.add(&p.mul(p).scale(&(&scale / w))));
    (s, scale)
}

/// Multiplicities for each eigenvalue via m(θ) = v / Σ k_j u_j(θ)².
pub fn multiplicities(arr: &IntersectionArray, spec: &Spectrum) -> Vec<Multiplicity> {
    multiplicities_for(arr, &spec.eigenvalues)
}

fn multiplicities_for(arr: &IntersectionArray, eigenvalues: &[ExactValue]) -> Vec<Multiplicity> {
    let (s, scale) = norm_polynomial(arr);
    let numer = &arr.derive().v * BigRational::from_integer(scale);
    eigenvalues
        .iter()
        .map(|theta| {
            if let Some(q) = theta.as_rational() {
                return Multiplicity::Exact(&numer / s.eval(q));
            }
            let fine = theta.refined(&BigRational::new(1.into(), BigInt::from(1u64 << 44)));
            let (lo, hi) = fine.interval();
            let (slo, shi) = poly_range(&s, &lo, &hi);
            let approx = to_f64(&numer) / s.eval_f64(theta.approx());
            let error = if slo.is_positive() {
                (to_f64(&(&numer / &slo)) - to_f64(&(&numer / &shi))).abs() / 2.0
            } else {
                f64::INFINITY
            };
            let mut nearest = approx.round() as i64;
            // m lies in [numer/s_hi, numer/s_lo]; no integer there settles it.
            let mut possible = true;
            if slo.is_positive() {
                let (mlo, mhi) = ((&numer / &shi).ceil(), (&numer / &slo).floor());
                possible = mlo <= mhi;
                if mlo == mhi {
                    nearest = mlo.to_integer().to_i64().unwrap_or(nearest);
                }
            }
            // With numer = p/q: m = n  iff  θ is a root of p - n·q·s(x).
            let integral = possible && {
                let test = Poly::constant(numer.numer().clone())
                    .sub(&s.scale(&(BigInt::from(nearest) * numer.denom())));
                theta.sign_of(&test) == Ordering::Equal
            };
            Multiplicity::Algebraic { approx, error, nearest, integral }
        })
        .collect()
}

/// Interval Horner enclosure of p over [lo, hi], in integers over the
/// common denominator of the endpoints.
fn poly_range(p: &Poly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let d = lo.denom().lcm(hi.denom());
    let nl = lo.numer() * (&d / lo.denom());
    let nh = hi.numer() * (&d / hi.denom());
    // H_t = d^t h_t for the Horner partial values h_t.
    let (mut acc_lo, mut acc_hi) = (BigInt::zero(), BigInt::zero());
    let mut dpow = BigInt::one();
    for c in p.coeffs().iter().rev() {
        let prods = [&acc_lo * &nl, &acc_lo * &nh, &acc_hi * &nl, &acc_hi * &nh];
        let c_scaled = c * &dpow;
        acc_lo = prods.iter().min().unwrap() + &c_scaled;
        acc_hi = prods.iter().max().unwrap() + &c_scaled;
        dpow *= &d;
    }
    // After deg+1 steps dpow = d^(deg+1); the value is H/d^deg.
    let scale = dpow / &d;
    (BigRational::new(acc_lo, scale.clone()), BigRational::new(acc_hi, scale))
}

/// One entry u_j of a standard sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceValue {
    /// Exact value when θ is rational.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub exact: Option<BigRational>,
    pub float: f64,
    /// Exact sign: -1, 0 or 1.
    pub sign: i8,
}

fn serialize_opt_rational<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&rational_string(q)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StandardSequence {
    pub theta: ExactValue,
    pub u: Vec<SequenceValue>,
    pub sign_changes: usize,
}

/// u_0 = 1, u_1 = θ/k, and c_i u_{i-1} + a_i u_i + b_i u_{i+1} = θ u_i.
///
/// u_j = p_j(θ) / (b_0 ⋯ b_{j-1}) where p_j are the leading minors of
/// the full matrix, so signs are decided exactly through the minors.
pub fn standard_sequence(arr: &IntersectionArray, theta: &ExactValue) -> StandardSequence {
    let mut minors = full_matrix(arr).leading_minors();
    minors.pop();
    let mut products = Vec::with_capacity(minors.len());
    let mut acc = BigInt::one();
    for j in 0..minors.len() {
        if j > 0 {
            acc *= arr.b(j - 1);
        }
        products.push(acc.clone());
    }
    let u: Vec<SequenceValue> = minors
        .iter()
        .zip(&products)
        .map(|(p, prod)| {
            let sign = match theta.sign_of(p) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            };
            match theta.as_rational() {
                Some(q) => {
                    let val = p.eval(q) / BigRational::from_integer(prod.clone());
                    SequenceValue { float: to_f64(&val), exact: Some(val), sign }
                }
                None => {
                    let float = if sign == 0 {
                        0.0
                    } else {
                        p.eval_f64(theta.approx()) / prod.to_f64().unwrap_or(f64::INFINITY)
                    };
                    SequenceValue { exact: None, float, sign }
                }
            }
        })
        .collect();
    let mut counter = VariationCounter::new();
    for x in &u {
        counter.push(x.sign);
    }
    StandardSequence { theta: theta.clone(), u, sign_changes: counter.count }
}

/// Whether the eigenvalues of B interlace those of A, where B is a
/// contiguous principal block of A:
/// θ_{n-m+i}(A) ≤ θ_i(B) ≤ θ_i(A).
pub fn interlacing_check(a: &TridiagonalMatrix, b: &TridiagonalMatrix) -> Result<bool, SpectralError> {
    a.find_block(b).ok_or(SpectralError::NotPrincipalBlock)?;
    Ok(eigenvalues_interlace(&a.eigenvalues(), &b.eigenvalues()))
}

/// μ interlaces λ (both decreasing, m ≤ n): λ_{n-m+i} ≤ μ_i ≤ λ_i.
pub fn eigenvalues_interlace(lambda: &[ExactValue], mu: &[ExactValue]) -> bool {
    let (n, m) = (lambda.len(), mu.len());
    m <= n && (0..m).all(|i| lambda[n - m + i] <= mu[i] && mu[i] <= lambda[i])
}

/// The eigenvalues θ_1..θ_D of the reduced matrix interlace θ_0..θ_D of
/// the full intersection matrix.
pub fn reduced_interlaces_full(arr: &IntersectionArray) -> bool {
    eigenvalues_interlace(&full_matrix(arr).eigenvalues(), &reduced_matrix(arr).eigenvalues())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn ints(v: &[ExactValue]) -> Vec<i64> {
        v.iter().map(|x| x.as_rational().unwrap().to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn full_matrix_entries() {
        let m = full_matrix(&arr("{4,2,1;1,1,4}"));
        assert_eq!(m.diag(), &[0, 1, 2, 0]);
        assert_eq!(m.sup(), &[4, 2, 1]);
        assert_eq!(m.sub(), &[1, 1, 4]);
        assert_eq!(full_matrix(&arr("{3,2;1,1}")).diag(), &[0, 0, 2]);
        assert_eq!(full_matrix(&arr("{3,2,2;1,1,3}")).diag(), &[0, 0, 0, 0]);
    }

    #[test]
    fn reduced_matrix_entries() {
        let t = reduced_matrix(&arr("{3,2,2;1,1,3}"));
        assert_eq!(t.rows(), vec![vec![-1, 2, 0], vec![1, 0, 2], vec![0, 1, -2]]);
        let t = reduced_matrix(&arr("{3,2;1,1}"));
        assert_eq!(t.rows(), vec![vec![-1, 2], vec![1, 0]]);
    }

    #[test]
    fn reduced_matrix_plus_identity_pattern() {
        // T + I = (0,b1,0 / 1,k+1-b1-c2,b2 / 0,c2,k+1-b2-c3)
        let a = arr("{8,6,1;1,3,8}");
        let t = reduced_matrix(&a);
        let rows: Vec<Vec<i64>> = t
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r[i] += 1;
                r
            })
            .collect();
        assert_eq!(rows, vec![vec![0, 6, 0], vec![1, 8 + 1 - 6 - 3, 1], vec![0, 3, 8 + 1 - 1 - 8]]);
    }

    #[test]
    fn spectra_of_small_arrays() {
        let s = spectrum(&arr("{4,2,1;1,1,4}")).unwrap();
        assert_eq!(ints(&s.eigenvalues), vec![4, 2, -1, -2]);
        assert_eq!(s.integer_multiplicities().unwrap(), vec![1, 5, 4, 5]);

        let s = spectrum(&arr("{3,2;1,1}")).unwrap();
        assert_eq!(ints(&s.eigenvalues), vec![3, 1, -2]);
        assert_eq!(s.integer_multiplicities().unwrap(), vec![1, 5, 4]);

        let s = spectrum(&arr("{3,2,2;1,1,3}")).unwrap();
        assert_eq!(s.eigenvalues[0].as_rational().unwrap(), &BigRational::from_integer(3.into()));
        assert!((s.eigenvalues[1].approx() - 2f64.sqrt()).abs() < 1e-12);
        assert!((s.eigenvalues[2].approx() + 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.integer_multiplicities().unwrap(), vec![1, 6, 6, 1]);
        assert!(s.is_symmetric());

        let s = spectrum(&arr("{8,6,1;1,3,8}")).unwrap();
        assert_eq!(s.integer_multiplicities().unwrap(), vec![1, 12, 8, 6]);
        assert!(!s.is_symmetric());
    }

    #[test]
    fn fractional_multiplicity_is_flagged() {
        // {3,2,2;1,1,2}: v = 3 + 6 + 6 + 1 = 16, not a graph.
        let s = spectrum(&arr("{3,2,2;1,1,2}")).unwrap();
        assert!(!s.multiplicities_integral());
    }

    #[test]
    fn negative_a_is_an_error() {
        assert!(matches!(
            spectrum(&arr("{2,2;1,3}")),
            Err(SpectralError::NegativeIntersectionNumber { index: 1, value: -1 })
        ));
    }

    #[test]
    fn standard_sequence_examples() {
        let a = arr("{3,2,2;1,1,3}");
        let seq = standard_sequence(&a, &ExactValue::from_integer(-3));
        let u: Vec<f64> = seq.u.iter().map(|x| x.float).collect();
        assert_eq!(u, vec![1.0, -1.0, 1.0, -1.0]);
        assert_eq!(seq.sign_changes, 3);

        let seq = standard_sequence(&a, &ExactValue::from_integer(3));
        assert!(seq.u.iter().all(|x| x.exact == Some(BigRational::one())));
        assert_eq!(seq.sign_changes, 0);

        let h33 = arr("{6,4,2;1,2,3}");
        let seq = standard_sequence(&h33, &ExactValue::from_integer(3));
        assert_eq!(seq.u[2].sign, 0);
        assert_eq!(seq.u[2].exact, Some(BigRational::zero()));
    }

    #[test]
    fn sign_changes_match_index() {
        for s in ["{3,2,2;1,1,3}", "{8,6,1;1,3,8}", "{3,2,2,1;1,1,1,2}", "{6,4,2;1,2,3}"] {
            let a = arr(s);
            let sp = spectrum(&a).unwrap();
            for (i, th) in sp.eigenvalues.iter().enumerate() {
                assert_eq!(standard_sequence(&a, th).sign_changes, i, "{s} θ{i}");
            }
        }
    }

    #[test]
    fn count_above_matches_exact_spectrum() {
        let m = full_matrix(&arr("{4,2,1;1,1,4}"));
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(m.count_above(&q(2, 1)), 1);
        assert_eq!(m.count_above(&q(199, 100)), 2);
        assert_eq!(m.count_above(&q(-1, 1)), 2);
        assert_eq!(m.count_above(&q(-3, 1)), 4);
        assert_eq!(m.count_above(&q(4, 1)), 0);
        assert_eq!(m.count_above_big(&BigInt::from(-1), &BigInt::one()), 2);
    }

    #[test]
    fn float_cross_check() {
        for s in ["{3,2,2;1,1,3}", "{8,6,1;1,3,8}", "{3,2,2,1;1,1,1,2}"] {
            let m = full_matrix(&arr(s));
            let exact = m.eigenvalues();
            let float = m.eigenvalues_f64();
            for (e, f) in exact.iter().zip(&float) {
                assert!((e.approx() - f).abs() < 1e-9, "{s}: {} vs {f}", e.approx());
            }
        }
    }

    #[test]
    fn interlacing() {
        let full = full_matrix(&arr("{3,2,2;1,1,3}"));
        assert!(interlacing_check(&full, &full.block(0, 3)).unwrap());
        let t = reduced_matrix(&arr("{8,6,1;1,3,8}"));
        assert!(interlacing_check(&t, &t.block(2, 1)).unwrap());
        let other = TridiagonalMatrix::new(vec![5], vec![1, 1], vec![5]).unwrap();
        assert_eq!(interlacing_check(&full, &other), Err(SpectralError::NotPrincipalBlock));
        assert!(reduced_interlaces_full(&arr("{3,2,2,1;1,1,1,2}")));
    }

    #[test]
    fn reduced_eigenvalues_are_the_nontrivial_ones() {
        for s in ["{3,2,2;1,1,3}", "{8,6,1;1,3,8}", "{3,2;1,1}", "{3,2,2,1;1,1,1,2}"] {
            let a = arr(s);
            let full = full_matrix(&a).eigenvalues();
            let red = reduced_matrix(&a).eigenvalues();
            assert_eq!(&full[1..], &red[..], "{s}");
        }
    }
}
