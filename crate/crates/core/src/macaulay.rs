//! Binomial expansions and Macaulay's growth bound.
//!
//! Every h-vector check in the crate bottoms out here. Small values take a
//! checked `u128` path; anything that overflows falls back to big integers,
//! so there is no overflow regime.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// `C(n, k)` if it fits in a `u128`.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k as u128 {
        // acc * (n - t) is divisible by (t + 1) after the multiplication.
        acc = acc.checked_mul(n as u128 - t)? / (t + 1);
    }
    Some(acc)
}

/// `C(n, k)` saturated into a `u64`. Callers use this for dimensions of
/// graded pieces, which are small in every supported regime.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    binomial_u128(n, k)
        .and_then(|v| u64::try_from(v).ok())
        .unwrap_or(u64::MAX)
}

/// Dimension of the degree-`d` piece of a polynomial ring in `vars` variables.
pub fn graded_dim(vars: usize, d: usize) -> u64 {
    if vars == 0 {
        return u64::from(d == 0);
    }
    binomial_u64((vars - 1 + d) as u64, d as u64)
}

/// One term `C(top, bottom)` of an i-binomial expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BinomialTerm {
    pub top: u64,
    pub bottom: u64,
}

/// The i-binomial expansion `n = C(n_i, i) + C(n_{i-1}, i-1) + ... + C(n_j, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialExpansion {
    pub n: u64,
    pub i: u64,
    pub terms: Vec<BinomialTerm>,
}

impl BinomialExpansion {
    pub fn evaluate(&self) -> BigUint {
        self.terms.iter().map(|t| binomial(t.top, t.bottom)).sum()
    }

    /// Checks the defining inequalities `n_i > n_{i-1} > ... > n_j >= j >= 1`
    /// together with consecutive bottoms starting at `i`.
    pub fn is_well_formed(&self) -> bool {
        if self.n == 0 {
            return self.terms.is_empty();
        }
        let Some(first) = self.terms.first() else {
            return false;
        };
        if first.bottom != self.i {
            return false;
        }
        for w in self.terms.windows(2) {
            if w[1].bottom + 1 != w[0].bottom || w[1].top >= w[0].top {
                return false;
            }
        }
        let last = self.terms.last().unwrap();
        last.bottom >= 1 && last.top >= last.bottom && self.evaluate() == BigUint::from(self.n)
    }

    /// `n^<i>`: shift every term to `C(top + 1, bottom + 1)`.
    pub fn upper(&self) -> BigUint {
        self.terms
            .iter()
            // C(n+1, k+1) = C(n, k) (n+1) / (k+1), without overflowing n + 1.
            .map(|t| binomial(t.top, t.bottom) * (BigUint::from(t.top) + 1u32) / (BigUint::from(t.bottom) + 1u32))
            .sum()
    }
}

impl fmt::Display for BinomialExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("C({},{})", t.top, t.bottom))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Largest `top >= bottom` with `C(top, bottom) <= n`, for `n >= 1`.
fn greedy_top(n: u64, bottom: u64) -> u64 {
    let target = BigUint::from(n);
    let fits = |top: u64| -> bool {
        match binomial_u128(top, bottom) {
            Some(v) => v <= n as u128,
            None => binomial(top, bottom) <= target,
        }
    };
    if bottom == 1 {
        return n;
    }
    // For bottom >= 2, C(top, bottom) >= C(top, 2) > n once top > sqrt(2n) + 1.
    let (mut lo, mut hi) = (bottom, bottom + n.min(1 << 33));
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Greedy i-binomial expansion of `n`. `n = 0` yields the empty expansion.
pub fn binomial_expand(n: u64, i: u64) -> Result<BinomialExpansion> {
    if i == 0 {
        return Err(Error::invalid("binomial expansion needs i >= 1"));
    }
    let mut terms = Vec::new();
    let mut rest = n;
    let mut bottom = i;
    while rest > 0 {
        debug_assert!(bottom >= 1, "greedy expansion always terminates by bottom 1");
        let top = greedy_top(rest, bottom);
        let value = binomial_u128(top, bottom).expect("term is at most n") as u64;
        terms.push(BinomialTerm { top, bottom });
        rest -= value;
        bottom -= 1;
    }
    Ok(BinomialExpansion { n, i, terms })
}

/// `n^<i>` with the convention `0^<i> = 0`.
pub fn macaulay_upper(n: u64, i: u64) -> Result<BigUint> {
    Ok(binomial_expand(n, i)?.upper())
}

/// `n^<i>` saturated into a `u64`; hot loops (census, screens) use this.
pub fn macaulay_upper_u64(n: u64, i: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let exp = binomial_expand(n, i.max(1)).expect("i >= 1");
    let mut acc: u128 = 0;
    for t in &exp.terms {
        match binomial_u128(t.top + 1, t.bottom + 1) {
            Some(v) => acc = acc.saturating_add(v),
            None => return u64::MAX,
        }
    }
    u64::try_from(acc).unwrap_or(u64::MAX)
}

/// Macaulay's criterion on an arbitrary integer sequence.
///
/// Accepts the empty and all-zero sequences (the zero quotient). Otherwise the
/// sequence must be non-negative, start with 1 and satisfy
/// `s[d+1] <= s[d]^<d>` for every `d >= 1`.
pub fn is_o_sequence(seq: &[i64]) -> bool {
    if seq.iter().any(|&v| v < 0) {
        return false;
    }
    if seq.iter().all(|&v| v == 0) {
        return true;
    }
    if seq[0] != 1 {
        return false;
    }
    (1..seq.len().saturating_sub(1)).all(|d| {
        let cap = macaulay_upper_u64(seq[d] as u64, d as u64);
        (seq[d + 1] as u64) <= cap
    })
}

/// Hilbert function of a standard graded artinian algebra: `h_0 = 1`, entries
/// up to the socle degree `e`, implied zeros beyond.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct HVector(Vec<u64>);

impl HVector {
    /// Builds an h-vector, trimming trailing zeros.
    pub fn new(mut entries: Vec<u64>) -> Result<Self> {
        while entries.len() > 1 && *entries.last().unwrap() == 0 {
            entries.pop();
        }
        match entries.first() {
            Some(1) => Ok(HVector(entries)),
            Some(v) => Err(Error::invalid(format!("h-vector must start with 1, got {v}"))),
            None => Err(Error::invalid("empty h-vector")),
        }
    }

    pub fn from_signed(entries: &[i64]) -> Result<Self> {
        let raw = entries
            .iter()
            .map(|&v| u64::try_from(v).map_err(|_| Error::invalid("negative h-vector entry")))
            .collect::<Result<Vec<_>>>()?;
        HVector::new(raw)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    pub fn socle_degree(&self) -> usize {
        self.0.len() - 1
    }

    /// `h_1`, or 0 for the trivial vector `(1)`.
    pub fn codim(&self) -> u64 {
        self.get(1)
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn last(&self) -> u64 {
        *self.0.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|&v| v as i64).collect()
    }

    pub fn is_o_sequence(&self) -> bool {
        is_o_sequence(&self.to_signed())
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.0))
    }
}

impl FromStr for HVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HVector::from_signed(&parse_int_list(s)?)
    }
}

/// Parses `1,3,6` (whitespace and surrounding parentheses tolerated).
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
    if trimmed.trim().is_empty() {
        return Err(Error::parse(1, "empty integer list"));
    }
    trimmed
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|e| Error::parse(1, format!("bad integer {:?}: {e}", tok.trim())))
        })
        .collect()
}

pub(crate) fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Degree-`d` monomials in `vars` variables, lexicographically largest first
/// (`x1^d, x1^(d-1) x2, ...`).
pub fn lex_monomials(vars: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == vars {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(vars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(vars, d as u32, &mut Vec::with_capacity(vars), &mut out);
    out
}

/// Number of distinct degree-`d+1` monomials in `R_1 * V`, where `V` is
/// spanned by the first `len` monomials of degree `d` in lex order.
pub fn lex_segment_span(codim: usize, d: usize, len: u64) -> Result<u64> {
    let monos = lex_monomials(codim, d);
    if len > monos.len() as u64 {
        return Err(Error::invalid(format!(
            "lex segment of length {len} exceeds dim R_{d} = {}",
            monos.len()
        )));
    }
    let mut products = std::collections::BTreeSet::new();
    for m in &monos[..len as usize] {
        for v in 0..codim {
            let mut p = m.clone();
            p[v] += 1;
            products.insert(p);
        }
    }
    Ok(products.len() as u64)
}

/// Independent brute-force route to `macaulay_upper`: the degree-`d+1`
/// dimension of the quotient whose degree-`d` ideal part is the lex segment
/// complementary to a `dim_v`-dimensional quotient piece.
pub fn lex_growth_oracle(codim: usize, d: usize, dim_v: u64) -> Result<u64> {
    if codim == 0 || d == 0 {
        return Err(Error::invalid("lex growth oracle needs codim >= 1 and d >= 1"));
    }
    let dim_d = graded_dim(codim, d);
    if dim_v > dim_d {
        return Err(Error::invalid(format!(
            "dimV = {dim_v} exceeds dim R_{d} = {dim_d}"
        )));
    }
    let ideal_span = lex_segment_span(codim, d, dim_d - dim_v)?;
    Ok(graded_dim(codim, d + 1) - ideal_span)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive search over all strictly-decreasing-top expansions.
    fn all_expansions(n: u64, i: u64) -> Vec<Vec<(u64, u64)>> {
        fn rec(rest: u64, bottom: u64, max_top: u64, acc: &mut Vec<(u64, u64)>, out: &mut Vec<Vec<(u64, u64)>>) {
            if rest == 0 {
                out.push(acc.clone());
                return;
            }
            if bottom == 0 {
                return;
            }
            for top in bottom..max_top {
                let v = binomial_u128(top, bottom).unwrap() as u64;
                if v > rest {
                    break;
                }
                acc.push((top, bottom));
                rec(rest - v, bottom - 1, top, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, i, n + i + 1, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn expansions_match_exhaustive_search() {
        assert_eq!(all_expansions(10, 3), vec![vec![(5, 3)]]);
        assert_eq!(all_expansions(7, 3), vec![vec![(4, 3), (3, 2)]]);
        let e = binomial_expand(10, 3).unwrap();
        assert_eq!(e.terms, vec![BinomialTerm { top: 5, bottom: 3 }]);
        let e = binomial_expand(7, 3).unwrap();
        assert_eq!(
            e.terms,
            vec![BinomialTerm { top: 4, bottom: 3 }, BinomialTerm { top: 3, bottom: 2 }]
        );
        for i in 1..=6 {
            let e = binomial_expand(1, i).unwrap();
            assert_eq!(e.terms, vec![BinomialTerm { top: i, bottom: i }]);
        }
    }

    #[test]
    fn greedy_is_the_unique_expansion() {
        for n in 1..=60 {
            for i in 1..=4 {
                let all = all_expansions(n, i);
                assert_eq!(all.len(), 1, "n={n} i={i}");
                let got: Vec<(u64, u64)> = binomial_expand(n, i)
                    .unwrap()
                    .terms
                    .iter()
                    .map(|t| (t.top, t.bottom))
                    .collect();
                assert_eq!(got, all[0]);
            }
        }
    }

    #[test]
    fn upper_values() {
        assert_eq!(macaulay_upper(10, 3).unwrap(), BigUint::from(15u32));
        assert_eq!(macaulay_upper(7, 3).unwrap(), BigUint::from(9u32));
        for i in 2..10 {
            assert_eq!(macaulay_upper(2, i).unwrap(), BigUint::from(2u32));
        }
        assert_eq!(macaulay_upper(0, 4).unwrap(), BigUint::zero());
        assert_eq!(macaulay_upper_u64(2, 1), 3);
    }

    #[test]
    fn upper_handles_huge_inputs() {
        let n = 1u64 << 40;
        let big = macaulay_upper(n, 1).unwrap();
        assert_eq!(big, binomial(n + 1, 2));
        assert_eq!(macaulay_upper_u64(n, 1), u64::MAX);
        let e = binomial_expand(u64::MAX - 1, 3).unwrap();
        assert!(e.is_well_formed());
    }

    #[test]
    fn o_sequences() {
        assert!(is_o_sequence(&[1, 3, 6, 10, 9, 7, 5, 2]));
        assert!(!is_o_sequence(&[1, 2, 4]));
        assert!(is_o_sequence(&[1]));
        assert!(is_o_sequence(&[0, 0, 0]));
        assert!(!is_o_sequence(&[1, 3, 2, 0, 1, 1, 1, 0]));
        assert!(!is_o_sequence(&[2, 1]));
        assert!(!is_o_sequence(&[1, -1]));
    }

    #[test]
    fn hvector_trims_and_validates() {
        let h = HVector::new(vec![1, 3, 2, 0, 0]).unwrap();
        assert_eq!(h.entries(), &[1, 3, 2]);
        assert_eq!(h.socle_degree(), 2);
        assert!(HVector::new(vec![2, 1]).is_err());
        assert!(HVector::new(vec![]).is_err());
        assert_eq!("1, 3,6".parse::<HVector>().unwrap().entries(), &[1, 3, 6]);
        assert!("1,x".parse::<HVector>().is_err());
    }

    #[test]
    fn lex_oracle_examples() {
        assert_eq!(lex_growth_oracle(3, 2, 6).unwrap(), 10);
        assert_eq!(lex_growth_oracle(3, 2, 0).unwrap(), 0);
        assert_eq!(lex_growth_oracle(2, 1, 2).unwrap(), 3);
        assert!(lex_growth_oracle(3, 2, 7).is_err());
        assert_eq!(lex_segment_span(3, 1, 1).unwrap(), 3);
    }

    #[test]
    fn lex_monomials_order() {
        let m = lex_monomials(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[1], vec![1, 1, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
    }

    #[test]
    fn lex_growth_matches_the_bound() {
        for codim in 1..=3 {
            for d in 1..=5 {
                for dim_v in 1..=graded_dim(codim, d) {
                    assert_eq!(
                        lex_growth_oracle(codim, d, dim_v).unwrap(),
                        macaulay_upper_u64(dim_v, d as u64),
                        "codim {codim} d {d} dimV {dim_v}"
                    );
                }
            }
        }
    }

    #[test]
    fn upper_of_the_largest_u64() {
        let n = BigUint::from(u64::MAX);
        assert_eq!(macaulay_upper(u64::MAX, 1).unwrap(), &n * (&n + 1u32) / 2u32);
    }

    proptest::proptest! {
        #[test]
        fn expansion_is_well_formed(n in 1u64..=500, i in 1u64..=6) {
            let e = binomial_expand(n, i).unwrap();
            proptest::prop_assert!(e.is_well_formed());
            proptest::prop_assert_eq!(e.evaluate(), BigUint::from(n));
        }

        #[test]
        fn upper_is_monotone(n in 0u64..=500, m in 0u64..=500, i in 1u64..=6) {
            let (lo, hi) = (n.min(m), n.max(m));
            proptest::prop_assert!(macaulay_upper(lo, i).unwrap() <= macaulay_upper(hi, i).unwrap());
        }
    }
}
