//! Exact rank and kernel computations.
//!
//! Rows are kept as primitive integer vectors (rationals are cleared of
//! denominators first) and reduced with integer-only row operations followed
//! by content division, so no fractions appear during elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Scales a rational row to a primitive integer row with positive leading entry.
pub fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut denom = BigInt::one();
    for v in row {
        if !v.is_zero() {
            denom = denom.lcm(v.denom());
        }
    }
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|v| {
            if v.is_zero() {
                BigInt::zero()
            } else {
                v.numer() * (&denom / v.denom())
            }
        })
        .collect();
    make_primitive(&mut out);
    out
}

/// Divides by the gcd of the entries and makes the first non-zero entry positive.
pub fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    let mut lead_negative = None;
    for v in row.iter() {
        if v.is_zero() {
            continue;
        }
        if lead_negative.is_none() {
            lead_negative = Some(v.is_negative());
        }
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let Some(neg) = lead_negative else {
        return;
    };
    if g.is_one() && !neg {
        return;
    }
    if neg {
        g = -g;
    }
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = &*v / &g;
        }
    }
}

/// Row echelon form over the integers, built one row at a time.
///
/// Rows are sorted by pivot column and every row vanishes left of its pivot.
/// `insert` reports whether the new row was independent of the rows already
/// present, which lets callers keep an actual spanning subset of their input.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `row` against the current echelon form; the result vanishes at
    /// every pivot column.
    pub fn reduce(&self, mut row: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        make_primitive(&mut row);
        for (k, &c) in self.pivots.iter().enumerate() {
            if row[c].is_zero() {
                continue;
            }
            let pivot_row = &self.rows[k];
            let p = &pivot_row[c];
            let g = p.gcd(&row[c]);
            let a = p / &g;
            let b = &row[c] / &g;
            // row <- a * row - b * pivot_row; the pivot row vanishes left of c.
            for j in 0..self.ncols {
                let pj = &pivot_row[j];
                if pj.is_zero() {
                    if !row[j].is_zero() && !a.is_one() {
                        row[j] *= &a;
                    }
                    continue;
                }
                let updated = &row[j] * &a - pj * &b;
                row[j] = updated;
            }
            make_primitive(&mut row);
        }
        row
    }

    /// Inserts a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: Vec<BigInt>) -> bool {
        let reduced = self.reduce(row);
        let Some(c) = reduced.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let at = self.pivots.partition_point(|&p| p < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, reduced);
        true
    }

    pub fn contains(&self, row: Vec<BigInt>) -> bool {
        self.reduce(row).iter().all(Zero::is_zero)
    }

    /// Reduced row echelon form over the rationals (pivot entries equal to 1).
    pub fn rref(&self) -> Vec<Vec<BigRational>> {
        let mut out: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        for k in (0..out.len()).rev() {
            let c = self.pivots[k];
            let inv = out[k][c].recip();
            for v in out[k].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            for i in 0..k {
                if out[i][c].is_zero() {
                    continue;
                }
                let f = out[i][c].clone();
                for j in c..self.ncols {
                    if out[k][j].is_zero() {
                        continue;
                    }
                    let delta = &f * &out[k][j];
                    out[i][j] -= delta;
                }
            }
        }
        out
    }

    /// Basis of `{x : row . x = 0 for every row}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let rref = self.rref();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigRational::zero(); self.ncols];
            v[free] = BigRational::one();
            for (k, &c) in self.pivots.iter().enumerate() {
                v[c] = -rref[k][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of a list of integer rows.
pub fn rank<I>(ncols: usize, rows: I) -> usize
where
    I: IntoIterator<Item = Vec<BigInt>>,
{
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r);
        if ech.rank() == ncols {
            break;
        }
    }
    ech.rank()
}

/// Rank of a rational matrix.
pub fn rational_rank(ncols: usize, rows: &[Vec<BigRational>]) -> usize {
    rank(ncols, rows.iter().map(|r| integer_row(r)))
}

/// Kernel of a rational matrix acting on column vectors.
pub fn rational_kernel(ncols: usize, rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(integer_row(r));
    }
    ech.kernel()
}

/// Arithmetic modulo the Mersenne prime `2^61 - 1`.
///
/// Rows independent modulo `p` are independent over the rationals, so a
/// modular rank is an exact lower bound for the rational rank. Callers that
/// also hold an upper bound use it to skip big-integer elimination.
pub mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};

    pub const P: u64 = (1 << 61) - 1;

    fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn reduce_int(v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits")
    }

    /// The row modulo `p`, or `None` if a denominator vanishes modulo `p`.
    pub fn row(values: &[BigRational]) -> Option<Vec<u64>> {
        values
            .iter()
            .map(|v| {
                if v.is_zero() {
                    return Some(0);
                }
                let d = reduce_int(v.denom());
                (d != 0).then(|| mul(reduce_int(v.numer()), inv(d)))
            })
            .collect()
    }

    /// Echelon form over `F_p` with unit pivots.
    #[derive(Debug, Clone)]
    pub struct ModEchelon {
        ncols: usize,
        rows: Vec<(usize, Vec<u64>)>,
    }

    impl ModEchelon {
        pub fn new(ncols: usize) -> Self {
            ModEchelon { ncols, rows: Vec::new() }
        }

        pub fn rank(&self) -> usize {
            self.rows.len()
        }

        /// Inserts a row; returns `true` if it increased the rank.
        pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
            assert_eq!(v.len(), self.ncols, "row length mismatch");
            for (c, r) in &self.rows {
                let f = v[*c];
                if f == 0 {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(r) {
                    if *y != 0 {
                        *x = (*x + P - mul(f, *y)) % P;
                    }
                }
            }
            let Some(c) = v.iter().position(|&x| x != 0) else {
                return false;
            };
            let s = inv(v[c]);
            for x in v.iter_mut() {
                *x = mul(*x, s);
            }
            self.rows.push((c, v));
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Textbook Gauss-Jordan over the rationals; independent of the integer path.
    fn gauss_rank(mut m: Vec<Vec<BigRational>>, ncols: usize) -> usize {
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][c].recip();
            for i in 0..m.len() {
                if i != rank && !m[i][c].is_zero() {
                    let f = &m[i][c] * &inv;
                    for j in 0..ncols {
                        let d = &f * &m[rank][j];
                        m[i][j] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_ranks() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rational_rank(3, &m), 2);
        let k = rational_kernel(3, &m);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: BigRational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn fractions_are_cleared() {
        let row = vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-1), BigInt::from(3)),
        ];
        assert_eq!(integer_row(&row), vec![BigInt::from(3), BigInt::from(-2)]);
    }

    proptest! {
        #[test]
        fn rank_matches_gauss_jordan(
            rows in 1usize..7, cols in 1usize..7,
            seed in proptest::collection::vec(-4i64..5, 49),
            dup in 0usize..3,
        ) {
            let mut m: Vec<Vec<BigRational>> = (0..rows)
                .map(|i| (0..cols).map(|j| q(seed[i * 7 + j])).collect())
                .collect();
            // Append dependent rows so rank deficiency is exercised.
            for t in 0..dup {
                let a = m[t % rows].clone();
                let b = m[(t + 1) % rows].clone();
                m.push(a.iter().zip(&b).map(|(x, y)| x * q(2) - y).collect());
            }
            let expected = gauss_rank(m.clone(), cols);
            prop_assert_eq!(rational_rank(cols, &m), expected);
            let mut me = modp::ModEchelon::new(cols);
            for row in &m {
                me.insert(modp::row(row).unwrap());
            }
            prop_assert_eq!(me.rank(), expected);
            let kernel = rational_kernel(cols, &m);
            prop_assert_eq!(kernel.len(), cols - expected);
            for v in &kernel {
                for row in &m {
                    let dot: BigRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
