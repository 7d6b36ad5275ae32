//! Sequence algebra on h-vectors and the low-codimension Gorenstein tests.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::macaulay::{graded_dim, is_o_sequence, join, macaulay_upper_u64, HVector};

/// Socle dimensions `s_0, ..., s_e` of an artinian algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SocleVector(Vec<u64>);

impl SocleVector {
    /// Trims trailing zeros; rejects the zero vector.
    pub fn new(mut entries: Vec<u64>) -> Result<Self> {
        while entries.len() > 1 && *entries.last().unwrap() == 0 {
            entries.pop();
        }
        if entries.iter().all(|&v| v == 0) {
            return Err(Error::invalid("socle vector has type 0"));
        }
        if entries.len() > 1 && entries[0] != 0 {
            return Err(Error::invalid("socle vector of a non-trivial algebra has s_0 = 0"));
        }
        Ok(SocleVector(entries))
    }

    /// `(0, ..., 0, t)` with `t` in degree `e`.
    pub fn level(e: usize, t: u64) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = t;
        SocleVector(v)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn socle_degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn type_(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_level(&self) -> bool {
        self.0[..self.0.len() - 1].iter().all(|&v| v == 0)
    }
}

impl fmt::Display for SocleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.0))
    }
}

/// `(Δv)_0 = 1`, `(Δv)_i = v_i - v_{i-1}`.
pub fn first_difference(v: &[u64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(v.len());
    for (i, &x) in v.iter().enumerate() {
        if i == 0 {
            out.push(1);
        } else {
            out.push(x as i64 - v[i - 1] as i64);
        }
    }
    out
}

/// The first difference is a (non-negative) O-sequence.
pub fn is_differentiable(v: &[u64]) -> bool {
    is_o_sequence(&first_difference(v))
}

pub fn is_symmetric(h: &HVector) -> bool {
    let e = h.entries();
    (0..e.len()).all(|i| e[i] == e[e.len() - 1 - i])
}

/// Symmetric, with differentiable first half `(h_0, ..., h_{floor(e/2)})`.
pub fn is_si_sequence(h: &HVector) -> bool {
    let half = h.socle_degree() / 2;
    is_symmetric(h) && is_differentiable(&h.entries()[..=half])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GorensteinVerdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for GorensteinVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GorensteinVerdict::Yes => "yes",
            GorensteinVerdict::No => "no",
            GorensteinVerdict::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

/// Gorenstein h-vectors are exactly the SI-sequences in codimension at most
/// 3, and in codimension 4 when `h_2 <= 7`. Elsewhere the answer is Unknown.
pub fn is_gorenstein_hvector(h: &HVector) -> GorensteinVerdict {
    let decidable = h.codim() <= 3 || (h.codim() == 4 && h.get(2) <= 7);
    if !decidable {
        return GorensteinVerdict::Unknown;
    }
    if is_si_sequence(h) {
        GorensteinVerdict::Yes
    } else {
        GorensteinVerdict::No
    }
}

/// Entries in reverse order over the full stored window.
pub fn reverse(seq: &[i64]) -> Vec<i64> {
    seq.iter().rev().copied().collect()
}

/// Entrywise `a - b` over the window of `a`, padding `b` with zeros.
pub fn sub(a: &[u64], b: &[u64]) -> Vec<i64> {
    (0..a.len().max(b.len()))
        .map(|i| *a.get(i).unwrap_or(&0) as i64 - *b.get(i).unwrap_or(&0) as i64)
        .collect()
}

/// Entrywise `a + b`, padding the shorter sequence with zeros.
pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0))
        .collect()
}

/// `h = g + tail` with `g` a candidate Gorenstein vector of the same socle
/// degree and `reverse(tail)` an O-sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionPair {
    pub g: HVector,
    pub tail: Vec<i64>,
    /// Verdict of the Gorenstein test on `g`; Unknown candidates are kept.
    pub g_verdict: GorensteinVerdict,
}

/// Symmetric O-sequences `g` with `g_e = 1`, `g <= h` entrywise, that are not
/// ruled out as Gorenstein, such that `reverse(h - g)` is an O-sequence.
/// Sorted lexicographically by `g`.
pub fn two_part_decompositions(h: &HVector) -> Result<Vec<DecompositionPair>> {
    if h.last() != 2 {
        return Err(Error::invalid(format!(
            "two-part decompositions need h_e = 2, got h = ({h})"
        )));
    }
    let mut out = Vec::new();
    gorenstein_candidates_below(h, |g| {
        let tail = sub(h.entries(), g.entries());
        if tail.iter().all(|&v| v >= 0) && is_o_sequence(&reverse(&tail)) {
            let verdict = is_gorenstein_hvector(&g);
            if verdict != GorensteinVerdict::No {
                out.push(DecompositionPair {
                    g,
                    tail,
                    g_verdict: verdict,
                });
            }
        }
    });
    out.sort_by(|a, b| a.g.cmp(&b.g));
    Ok(out)
}

/// Calls `visit` on every symmetric O-sequence `g` of socle degree `e`, with
/// `g_e = 1` and `g_i <= min(h_i, h_{e-i})`, in lexicographic order.
pub(crate) fn gorenstein_candidates_below(h: &HVector, mut visit: impl FnMut(HVector)) {
    let e = h.socle_degree();
    let half = e / 2;
    let caps: Vec<u64> = (0..=half)
        .map(|i| h.get(i).min(h.get(e - i)))
        .collect();
    let mut prefix = vec![1u64];
    fn rec(
        e: usize,
        half: usize,
        caps: &[u64],
        prefix: &mut Vec<u64>,
        visit: &mut dyn FnMut(HVector),
    ) {
        let i = prefix.len();
        if i > half {
            let mut full = vec![0u64; e + 1];
            for k in 0..=half {
                full[k] = prefix[k];
                full[e - k] = prefix[k];
            }
            if is_o_sequence(&full.iter().map(|&v| v as i64).collect::<Vec<_>>()) {
                visit(HVector::new(full).expect("h_0 = 1"));
            }
            return;
        }
        let grow = if i == 1 {
            u64::MAX
        } else {
            macaulay_upper_u64(prefix[i - 1], (i - 1) as u64)
        };
        for v in 1..=caps[i].min(grow) {
            prefix.push(v);
            rec(e, half, caps, prefix, visit);
            prefix.pop();
        }
    }
    if e == 0 {
        visit(HVector::new(vec![1]).unwrap());
        return;
    }
    if caps.contains(&0) {
        return;
    }
    rec(e, half, &caps, &mut prefix, &mut visit);
}

/// SI-sequences of socle degree `e` and codimension `codim`, in lexicographic
/// order. Used to enumerate Gorenstein vectors where SI is the exact answer.
pub fn si_sequences(codim: u64, e: usize) -> Vec<HVector> {
    let mut out = Vec::new();
    if e == 0 {
        if codim == 0 {
            out.push(HVector::new(vec![1]).unwrap());
        }
        return out;
    }
    if codim == 0 {
        return out;
    }
    let half = e / 2;
    let mut prefix = vec![1u64];
    if half >= 1 {
        prefix.push(codim);
    }
    fn rec(
        codim: u64,
        e: usize,
        half: usize,
        prefix: &mut Vec<u64>,
        out: &mut Vec<HVector>,
    ) {
        let i = prefix.len();
        if i > half {
            let mut full = vec![0u64; e + 1];
            for k in 0..=half {
                full[k] = prefix[k];
                full[e - k] = prefix[k];
            }
            if let Ok(h) = HVector::new(full) {
                if h.codim() == codim {
                    out.push(h);
                }
            }
            return;
        }
        let cap = graded_dim(codim as usize, i);
        for v in prefix[i - 1]..=cap {
            prefix.push(v);
            if is_differentiable(prefix) {
                rec(codim, e, half, prefix, out);
            }
            prefix.pop();
        }
    }
    if half == 0 {
        // e = 1: (1, codim) is not symmetric unless codim = 1.
        if codim == 1 {
            out.push(HVector::new(vec![1, 1]).unwrap());
        }
        return out;
    }
    if is_differentiable(&prefix) {
        rec(codim, e, half, &mut prefix, &mut out);
    }
    out.sort();
    out
}
