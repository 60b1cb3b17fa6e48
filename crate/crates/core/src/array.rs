//! Intersection arrays `{b0,...,b(D-1); c1,...,cD}` and the parameters
//! derived from them.
//!
//! Arrays are stored exactly as given. Structural conditions such as the
//! monotonicity of `b` and `c` are *not* enforced here; they are verdicts in
//! [`crate::checks`], so that searches can count why an array was rejected.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Errors raised while reading an intersection array.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed intersection array: {0}")]
    Syntax(String),
    #[error("b and c lists differ in length ({b} vs {c})")]
    UnequalLengths { b: usize, c: usize },
    #[error("intersection array has no entries")]
    Empty,
    #[error("{list}[{index}] = {value} is not positive")]
    NonPositive { list: char, index: usize, value: i64 },
}

/// An intersection array `{b0,...,b(D-1); c1,...,cD}`.
///
/// `b[i]` holds b_i for `0 <= i < D` and `c[i]` holds c_(i+1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawArray", into = "RawArray")]
pub struct IntersectionArray {
    b: Vec<i64>,
    c: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawArray {
    b: Vec<i64>,
    c: Vec<i64>,
}

impl TryFrom<RawArray> for IntersectionArray {
    type Error = ParseError;

    fn try_from(raw: RawArray) -> Result<Self, Self::Error> {
        IntersectionArray::new(raw.b, raw.c)
    }
}

impl From<IntersectionArray> for RawArray {
    fn from(arr: IntersectionArray) -> Self {
        RawArray { b: arr.b, c: arr.c }
    }
}

impl IntersectionArray {
    /// Builds an array from `b = (b0..b(D-1))` and `c = (c1..cD)`.
    pub fn new(b: Vec<i64>, c: Vec<i64>) -> Result<Self, ParseError> {
        if b.len() != c.len() {
            return Err(ParseError::UnequalLengths { b: b.len(), c: c.len() });
        }
        if b.is_empty() {
            return Err(ParseError::Empty);
        }
        for (list, values) in [('b', &b), ('c', &c)] {
            if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v <= 0) {
                return Err(ParseError::NonPositive { list, index, value });
            }
        }
        Ok(IntersectionArray { b, c })
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    /// The valency k = b0.
    pub fn valency(&self) -> i64 {
        self.b[0]
    }

    pub fn b_list(&self) -> &[i64] {
        &self.b
    }

    pub fn c_list(&self) -> &[i64] {
        &self.c
    }

    /// b_i for `0 <= i <= D`, with b_D = 0.
    pub fn b(&self, i: usize) -> i64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// c_i for `0 <= i <= D`, with c_0 = 0.
    pub fn c(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// a_i = k - b_i - c_i for `0 <= i <= D`.
    pub fn a(&self, i: usize) -> i64 {
        self.valency() - self.b(i) - self.c(i)
    }

    pub fn a_list(&self) -> Vec<i64> {
        (0..=self.diameter()).map(|i| self.a(i)).collect()
    }

    /// All a_i vanish.
    pub fn is_bipartite(&self) -> bool {
        (0..=self.diameter()).all(|i| self.a(i) == 0)
    }

    /// Array-level antipodality: b_i = c_(D-i) for every i other than floor(D/2).
    pub fn is_antipodal(&self) -> bool {
        let d = self.diameter();
        d >= 2 && (0..d).filter(|&i| i != d / 2).all(|i| self.b(i) == self.c(d - i))
    }

    /// The exact derived parameters a_i, k_i and v.
    pub fn derive(&self) -> DerivedParameters {
        let d = self.diameter();
        let mut kseq = Vec::with_capacity(d + 1);
        let mut ki = BigRational::one();
        kseq.push(ki.clone());
        for i in 1..=d {
            ki *= BigRational::new(BigInt::from(self.b(i - 1)), BigInt::from(self.c(i)));
            kseq.push(ki.clone());
        }
        let v = kseq.iter().fold(BigRational::zero(), |acc, x| acc + x);
        DerivedParameters { a: self.a_list(), kseq, v }
    }

    /// k_0..k_D as integers when all of them are integral, using 128-bit
    /// arithmetic. `Err(())` means a product overflowed and the caller should
    /// fall back to [`IntersectionArray::derive`].
    pub fn integral_kseq_fast(&self) -> Result<Option<Vec<u128>>, ()> {
        let mut out = Vec::with_capacity(self.diameter() + 1);
        let mut ki: u128 = 1;
        out.push(ki);
        for i in 1..=self.diameter() {
            let num = ki.checked_mul(self.b(i - 1) as u128).ok_or(())?;
            let den = self.c(i) as u128;
            if num % den != 0 {
                return Ok(None);
            }
            ki = num / den;
            out.push(ki);
        }
        Ok(Some(out))
    }

    /// Whether every k_i is an integer, via the 128-bit path with an exact fallback.
    pub fn has_integral_kseq(&self) -> bool {
        match self.integral_kseq_fast() {
            Ok(result) => result.is_some(),
            Err(()) => self.derive().kseq.iter().all(|k| k.is_integer()),
        }
    }
}

impl Ord for IntersectionArray {
    /// Lexicographic on (D, k, b, c).
    fn cmp(&self, other: &Self) -> Ordering {
        self.diameter()
            .cmp(&other.diameter())
            .then_with(|| self.b.cmp(&other.b))
            .then_with(|| self.c.cmp(&other.c))
    }
}

impl PartialOrd for IntersectionArray {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn join(values: &[i64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

fn parse_list(text: &str, list: &str) -> Result<Vec<i64>, ParseError> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<i64>()
                .map_err(|_| ParseError::Syntax(format!("bad entry {tok:?} in {list} list")))
        })
        .collect()
}

impl FromStr for IntersectionArray {
    type Err = ParseError;

    /// Accepts the brace form `{3,2,2;1,1,3}` or a JSON object `{"b":[..],"c":[..]}`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text.contains('"') || text.contains(':') {
            let raw: RawArray =
                serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))?;
            return IntersectionArray::try_from(raw);
        }
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| ParseError::Syntax("expected `{b0,...;c1,...}`".into()))?;
        let mut halves = inner.split(';');
        let (b, c) = match (halves.next(), halves.next(), halves.next()) {
            (Some(b), Some(c), None) => (b, c),
            _ => return Err(ParseError::Syntax("expected exactly one `;`".into())),
        };
        if b.trim().is_empty() && c.trim().is_empty() {
            return Err(ParseError::Empty);
        }
        IntersectionArray::new(parse_list(b, "b")?, parse_list(c, "c")?)
    }
}

/// a_i, k_i and v for an array, in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedParameters {
    /// a_0..a_D; negative entries are kept and failed downstream.
    pub a: Vec<i64>,
    /// k_0..k_D, possibly non-integral.
    pub kseq: Vec<BigRational>,
    /// The vertex count v = sum of k_i.
    pub v: BigRational,
}

impl DerivedParameters {
    pub fn kseq_integral(&self) -> bool {
        self.kseq.iter().all(|k| k.is_integer())
    }

    /// v as an integer, if it is one.
    pub fn vertex_count(&self) -> Option<BigInt> {
        self.v.is_integer().then(|| self.v.to_integer())
    }

    /// The first index whose k_i is not integral.
    pub fn first_fractional_k(&self) -> Option<usize> {
        self.kseq.iter().position(|k| !k.denom().is_one())
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed) into a rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Floor division that rounds toward negative infinity.
pub(crate) fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn parses_heawood() {
        let a = arr("{3,2,2;1,1,3}");
        assert_eq!(a.diameter(), 3);
        assert_eq!(a.b_list(), &[3, 2, 2]);
        assert_eq!(a.c_list(), &[1, 1, 3]);
    }

    #[test]
    fn parses_petersen_with_whitespace() {
        let a = arr("  { 3 , 2 ; 1, 1 } ");
        assert_eq!(a.diameter(), 2);
        assert_eq!(a.b_list(), &[3, 2]);
        assert_eq!(a.c_list(), &[1, 1]);
    }

    #[test]
    fn rejects_unequal_lengths() {
        assert_eq!(
            "{3,2,2;1,1}".parse::<IntersectionArray>(),
            Err(ParseError::UnequalLengths { b: 3, c: 2 })
        );
    }

    #[test]
    fn rejects_bad_syntax_and_nonpositive() {
        assert!(matches!("3,2;1,1".parse::<IntersectionArray>(), Err(ParseError::Syntax(_))));
        assert!(matches!("{3,x;1,1}".parse::<IntersectionArray>(), Err(ParseError::Syntax(_))));
        assert!(matches!("{3;1;1}".parse::<IntersectionArray>(), Err(ParseError::Syntax(_))));
        assert_eq!("{;}".parse::<IntersectionArray>(), Err(ParseError::Empty));
        assert_eq!(
            "{3,0;1,1}".parse::<IntersectionArray>(),
            Err(ParseError::NonPositive { list: 'b', index: 1, value: 0 })
        );
    }

    #[test]
    fn parses_json_form() {
        let a = arr(r#"{"b":[3,2,2],"c":[1,1,3]}"#);
        assert_eq!(a, arr("{3,2,2;1,1,3}"));
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"b":[3,2,2],"c":[1,1,3]}"#);
        assert!(serde_json::from_str::<IntersectionArray>(r#"{"b":[3],"c":[1,1]}"#).is_err());
    }

    #[test]
    fn derive_heawood() {
        let d = arr("{3,2,2;1,1,3}").derive();
        assert_eq!(d.a, vec![0, 0, 0, 0]);
        assert_eq!(d.kseq, vec![q(1), q(3), q(6), q(4)]);
        assert_eq!(d.v, q(14));
    }

    #[test]
    fn derive_petersen() {
        let d = arr("{3,2;1,1}").derive();
        assert_eq!(d.a, vec![0, 0, 2]);
        assert_eq!(d.kseq, vec![q(1), q(3), q(6)]);
        assert_eq!(d.v, q(10));
    }

    #[test]
    fn derive_row5() {
        let d = arr("{5,4,4;1,1,5}").derive();
        assert_eq!(d.kseq, vec![q(1), q(5), q(20), q(16)]);
        assert_eq!(d.v, q(42));
    }

    #[test]
    fn fractional_k_is_recorded() {
        let a = arr("{4,2,2;1,1,3}");
        let d = a.derive();
        assert_eq!(d.kseq[3], BigRational::new(16.into(), 3.into()));
        assert_eq!(d.first_fractional_k(), Some(3));
        assert!(!a.has_integral_kseq());
        assert_eq!(a.integral_kseq_fast(), Ok(None));
    }

    #[test]
    fn negative_a_is_kept() {
        let a = arr("{3,3;1,1}");
        assert_eq!(a.derive().a, vec![0, -1, 2]);
    }

    #[test]
    fn structural_flags() {
        assert!(arr("{3,2,2;1,1,3}").is_bipartite());
        assert!(!arr("{3,2;1,1}").is_bipartite());
        assert!(arr("{3,2,1;1,2,3}").is_antipodal());
        assert!(arr("{4,3,2,1;1,2,3,4}").is_antipodal());
        assert!(arr("{20,18,1;1,9,20}").is_antipodal());
        assert!(!arr("{3,2,2,2;1,1,1,3}").is_antipodal());
    }

    #[test]
    fn ordering_is_d_then_b_then_c() {
        let mut v = vec![arr("{4,3,3;1,1,4}"), arr("{3,2;1,1}"), arr("{3,2,2;1,1,3}"), arr("{4,3,2;1,2,4}")];
        v.sort();
        let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
        assert_eq!(s, ["{3,2;1,1}", "{3,2,2;1,1,3}", "{4,3,2;1,2,4}", "{4,3,3;1,1,4}"]);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&BigRational::new(6.into(), 4.into())), "3/2");
        assert_eq!(parse_rational(" -3/2 "), Some(BigRational::new((-3).into(), 2.into())));
        assert_eq!(parse_rational("7"), Some(q(7)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
