use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::form::{Exponent, Form};
use crate::error::{Error, Result};
use crate::linalg::{integer_row, rank};

/// Largest `min(rows, cols)` for which the symbolic rank certificate runs.
pub const CERTIFICATE_CAP: usize = 40;

/// Number of seeded rational points sampled besides `[1:0]` and `[0:1]`.
const RANDOM_POINTS: usize = 6;

/// First-derivative counts along the pencil `μF + λG`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PencilRank {
    /// Maximum rank over the sampled points.
    pub generic_rank: usize,
    /// Rank of the derivative matrix over `Q(t)`, `t = λ/μ`, which is the
    /// maximum over all points. `None` when the matrix exceeds the cap.
    pub certified_max: Option<usize>,
    /// `(μ, λ, rank)` for each sampled point, `[1:0]` and `[0:1]` first.
    pub samples: Vec<(String, String, usize)>,
}

/// Polynomials in `t` with integer coefficients, lowest degree first.
type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// `a / b` where the division is known to be exact in `Z[t]`.
fn poly_div_exact(a: &Poly, b: &Poly) -> Poly {
    assert!(!b.is_empty(), "division by the zero polynomial");
    if a.is_empty() {
        return Vec::new();
    }
    let mut rem = a.clone();
    let lead = b.last().unwrap();
    let mut quot = vec![BigInt::zero(); a.len() + 1 - b.len()];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + b.len() - 1];
        if c.is_zero() {
            continue;
        }
        let (q, r) = c.div_rem(lead);
        assert!(r.is_zero(), "inexact polynomial division");
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= &q * y;
        }
        quot[k] = q;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    trim(quot)
}

/// Rank over `Q(t)` by fraction-free Bareiss elimination with full pivoting;
/// every division is exact in `Z[t]`.
fn bareiss_rank(mut m: Vec<Vec<Poly>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev: Poly = vec![BigInt::one()];
    let mut k = 0;
    while k < rows.min(cols) {
        // Lowest-degree non-zero pivot keeps intermediate degrees small.
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let len = m[i][j].len();
                if len > 0 && best.is_none_or(|(_, _, l)| len < l) {
                    best = Some((i, j, len));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = m[k][k].clone();
        for i in k + 1..rows {
            let lead = m[i][k].clone();
            for j in k + 1..cols {
                let num = poly_sub(&poly_mul(&pivot, &m[i][j]), &poly_mul(&lead, &m[k][j]));
                m[i][j] = poly_div_exact(&num, &prev);
            }
            m[i][k] = Vec::new();
        }
        prev = pivot;
        k += 1;
    }
    k
}

fn first_derivatives(f: &Form) -> Vec<Form> {
    (0..f.num_vars()).map(|v| f.derivative(v)).collect()
}

fn column_index(forms: &[Form]) -> BTreeMap<Exponent, usize> {
    let mut index = BTreeMap::new();
    for f in forms {
        for e in f.terms().keys() {
            index.entry(e.clone()).or_insert(0);
        }
    }
    for (k, v) in index.values_mut().enumerate() {
        *v = k;
    }
    index
}

fn rank_at(df: &[Form], dg: &[Form], index: &BTreeMap<Exponent, usize>, mu: &BigRational, la: &BigRational) -> usize {
    rank(
        index.len(),
        df.iter().zip(dg).map(|(a, b)| {
            let ra = a.coefficient_row(index);
            let rb = b.coefficient_row(index);
            let row: Vec<BigRational> = ra.iter().zip(&rb).map(|(x, y)| x * mu + y * la).collect();
            integer_row(&row)
        }),
    )
}

/// Counts first derivatives of `μF + λG` at `[1:0]`, `[0:1]` and seeded
/// rational points, and certifies the maximum symbolically when the
/// derivative matrix is within [`CERTIFICATE_CAP`].
pub fn pencil_derivative_rank(f: &Form, g: &Form, seed: u64) -> Result<PencilRank> {
    if f.degree() != g.degree() || f.num_vars() != g.num_vars() {
        return Err(Error::invalid("pencil members must share degree and ring"));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::invalid("pencil members must be non-zero"));
    }
    let df = first_derivatives(f);
    let dg = first_derivatives(g);
    let all: Vec<Form> = df.iter().chain(&dg).cloned().collect();
    let index = column_index(&all);

    let mut points: Vec<(BigRational, BigRational)> = vec![
        (BigRational::one(), BigRational::zero()),
        (BigRational::zero(), BigRational::one()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_POINTS {
        let p: i64 = rng.gen_range(-100..=100);
        let q: i64 = rng.gen_range(1..=16);
        points.push((BigRational::one(), BigRational::new(p.into(), q.into())));
    }
    let mut samples = Vec::with_capacity(points.len());
    let mut generic_rank = 0;
    for (mu, la) in &points {
        let r = rank_at(&df, &dg, &index, mu, la);
        generic_rank = generic_rank.max(r);
        samples.push((mu.to_string(), la.to_string(), r));
    }

    let rows = df.len();
    let certified_max = if rows.min(index.len()) <= CERTIFICATE_CAP {
        // Row k is A_k + t B_k; one common scale clears both denominators.
        let matrix: Vec<Vec<Poly>> = df
            .iter()
            .zip(&dg)
            .map(|(a, b)| {
                let ra = a.coefficient_row(&index);
                let rb = b.coefficient_row(&index);
                let joint: Vec<BigRational> = ra.iter().chain(&rb).cloned().collect();
                let ints = integer_row(&joint);
                let n = index.len();
                (0..n)
                    .map(|j| trim(vec![ints[j].clone(), ints[n + j].clone()]))
                    .collect()
            })
            .collect();
        Some(bareiss_rank(matrix))
    } else {
        None
    };
    Ok(PencilRank {
        generic_rank,
        certified_max,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invsys::construct::sharp_pencil_witness;
    use proptest::prelude::*;

    fn y(s: &str, r: usize) -> Form {
        Form::parse(s, 'y', r, 1).unwrap()
    }

    #[test]
    fn polynomial_division_is_exact() {
        let a: Poly = vec![BigInt::from(-1), BigInt::zero(), BigInt::one()];
        let b: Poly = vec![BigInt::from(-1), BigInt::one()];
        assert_eq!(poly_div_exact(&a, &b), vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn symbolic_rank_of_small_matrices() {
        let p = |v: &[i64]| trim(v.iter().map(|&x| BigInt::from(x)).collect());
        // [[1, t], [t, t^2]] has rank 1 over Q(t).
        assert_eq!(bareiss_rank(vec![vec![p(&[1]), p(&[0, 1])], vec![p(&[0, 1]), p(&[0, 0, 1])]]), 1);
        assert_eq!(bareiss_rank(vec![vec![p(&[1]), p(&[0, 1])], vec![p(&[0, 1]), p(&[1])]]), 2);
    }

    #[test]
    fn sharp_pencils() {
        let m = sharp_pencil_witness(3, 5).unwrap();
        let r = pencil_derivative_rank(&m.generators()[0], &m.generators()[1], 0).unwrap();
        assert_eq!((r.generic_rank, r.certified_max), (2, Some(2)));
        let m = sharp_pencil_witness(4, 5).unwrap();
        let r = pencil_derivative_rank(&m.generators()[0], &m.generators()[1], 0).unwrap();
        assert_eq!((r.generic_rank, r.certified_max), (3, Some(3)));
        assert_eq!(r.samples[0].2, 3);
        assert_eq!(r.samples[1].2, 2);
        let r = pencil_derivative_rank(&y("y1^3", 2), &y("y2^3", 2), 0).unwrap();
        assert_eq!((r.generic_rank, r.certified_max), (2, Some(2)));
        assert_eq!((r.samples[0].2, r.samples[1].2), (1, 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn certificate_bounds_every_sample(
            a in proptest::collection::vec(-3i64..=3, 10),
            b in proptest::collection::vec(-3i64..=3, 10),
        ) {
            let mons = crate::macaulay::lex_monomials(3, 3);
            let mk = |c: &[i64]| Form::from_terms(
                3, 3, mons.iter().cloned().zip(c.iter().map(|&v| super::super::form::rat(v))),
            ).unwrap();
            let (f, g) = (mk(&a), mk(&b));
            prop_assume!(!f.is_zero() && !g.is_zero());
            let r = pencil_derivative_rank(&f, &g, 1).unwrap();
            let cert = r.certified_max.unwrap();
            for (_, _, s) in &r.samples {
                prop_assert!(cert >= *s);
            }
            prop_assert!(cert >= r.generic_rank);
        }
    }
}
