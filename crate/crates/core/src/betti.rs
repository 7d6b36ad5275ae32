//! Graded Betti numbers and the numerical conditions on resolutions: the
//! Hilbert series identity, admissible codimension-3 Gorenstein shapes,
//! first syzygies of `(1, 3, ..., 3, 2)` algebras, and Gotzmann growth.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hvec::{is_gorenstein_hvector, is_symmetric, sub, GorensteinVerdict, SocleVector};
use crate::ideal::GradedIdeal;
use crate::linalg::{integer_row, rank};
use crate::macaulay::{binomial_u64, macaulay_upper, HVector};

/// `β_{i,j}` for `1 <= i <= codim`; zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    codim: usize,
    entries: BTreeMap<(usize, usize), u64>,
    hvector: Option<HVector>,
}

impl BettiTable {
    pub fn new(codim: usize, entries: impl IntoIterator<Item = ((usize, usize), u64)>) -> Result<Self> {
        if codim == 0 {
            return Err(Error::invalid("codimension must be positive"));
        }
        let mut map = BTreeMap::new();
        for ((i, j), b) in entries {
            if i == 0 || i > codim {
                return Err(Error::invalid(format!("homological index {i} outside 1..={codim}")));
            }
            if b > 0 {
                *map.entry((i, j)).or_insert(0) += b;
            }
        }
        Ok(BettiTable { codim, entries: map, hvector: None })
    }

    pub fn with_hvector(mut self, h: HVector) -> Self {
        self.hvector = Some(h);
        self
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn hvector(&self) -> Option<&HVector> {
        self.hvector.as_ref()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.entries
    }

    /// Sets `β_{i,j}`, removing the entry when it becomes zero.
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        if value == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    /// Degrees of the `i`-th module with multiplicity, ascending.
    pub fn degrees(&self, i: usize) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .flat_map(|(&(_, j), &b)| std::iter::repeat_n(j, b as usize))
            .collect()
    }

    /// Text form: a `#` header, then `i j beta` lines in sorted order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut codim = None;
        let mut hvector = None;
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(header) = line.strip_prefix('#') {
                let words: Vec<&str> = header.split_whitespace().collect();
                for pair in words.chunks(2) {
                    match pair {
                        ["codim", v] => {
                            codim = Some(v.parse().map_err(|_| Error::parse(n + 1, format!("bad codim {v:?}")))?)
                        }
                        ["h", v] => hvector = Some(v.parse::<HVector>().map_err(|e| Error::parse(n + 1, e.to_string()))?),
                        _ => {}
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|w| w.parse().map_err(|_| Error::parse(n + 1, format!("bad integer {w:?}"))))
                .collect::<Result<_>>()?;
            let [i, j, b] = nums[..] else {
                return Err(Error::parse(n + 1, "expected `i j beta`"));
            };
            entries.push(((i as usize, j as usize), b));
        }
        let codim = codim.ok_or_else(|| Error::parse(1, "missing `# codim r` header"))?;
        let mut table = BettiTable::new(codim, entries)?;
        table.hvector = hvector;
        Ok(table)
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "# codim {}", self.codim)?;
        if let Some(h) = &self.hvector {
            write!(f, " h {h}")?;
        }
        writeln!(f)?;
        for ((i, j), b) in &self.entries {
            writeln!(f, "{i} {j} {b}")?;
        }
        Ok(())
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Outcome of comparing `H(z)(1-z)^r` with `1 + Σ (-1)^i β_{i,j} z^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionalEquation {
    pub holds: bool,
    /// Coefficients of left side minus right side, lowest degree first.
    pub residual: Vec<i64>,
}

pub fn functional_equation_check(h: &HVector, b: &BettiTable) -> FunctionalEquation {
    let mut lhs = h.to_signed();
    for _ in 0..b.codim() {
        lhs = poly_mul(&lhs, &[1, -1]);
    }
    let top = b.entries().keys().map(|&(_, j)| j).max().unwrap_or(0);
    let mut rhs = vec![0i64; top + 1];
    rhs[0] = 1;
    for (&(i, j), &beta) in b.entries() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        rhs[j] += sign * beta as i64;
    }
    let mut residual = sub_signed(&lhs, &rhs);
    while residual.len() > 1 && *residual.last().unwrap() == 0 {
        residual.pop();
    }
    FunctionalEquation {
        holds: residual.iter().all(|&c| c == 0),
        residual,
    }
}

fn sub_signed(a: &[i64], b: &[i64]) -> Vec<i64> {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).unwrap_or(&0) - b.get(i).unwrap_or(&0))
        .collect()
}

/// `Δ³T` over the window `0..=e+3`, padding `T` with zeros.
pub fn third_difference(t: &HVector) -> Vec<i64> {
    let len = t.socle_degree() + 4;
    let mut v: Vec<i64> = (0..len).map(|i| if i < t.len() { t.get(i) as i64 } else { 0 }).collect();
    for _ in 0..3 {
        let prev = v.clone();
        for i in 1..len {
            v[i] = prev[i] - prev[i - 1];
        }
    }
    v
}

/// Numerical data a codimension-3 Gorenstein h-vector imposes on its resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DieselParams {
    /// Least degree in which `T` is not the full polynomial ring.
    pub k: usize,
    /// Minimal number of generators allowed by the negative part of `Δ³T`.
    pub mu: u64,
    /// At least `-d_i` generators in degree `i` for each negative `d_i`, `i < e+3`.
    pub forced_generators: BTreeMap<usize, u64>,
    pub third_difference: Vec<i64>,
}

pub fn diesel_params(t: &HVector) -> Result<DieselParams> {
    if !is_symmetric(t) || t.last() != 1 {
        return Err(Error::invalid(format!("({t}) is not symmetric with T_e = 1")));
    }
    let e = t.socle_degree();
    let k = (0..=e + 1)
        .find(|&i| (i < t.len() && t.get(i) < binomial_u64(2 + i as u64, i as u64)) || i >= t.len())
        .expect("T vanishes past e");
    let d = third_difference(t);
    let mut forced = BTreeMap::new();
    for (i, &v) in d.iter().enumerate().take(e + 3) {
        if v < 0 {
            forced.insert(i, (-v) as u64);
        }
    }
    let s: u64 = forced.values().sum();
    let mu = (2 * s.div_ceil(2)).saturating_sub(1);
    Ok(DieselParams { k, mu, forced_generators: forced, third_difference: d })
}

/// Degrees of a codimension-3 Gorenstein resolution
/// `0 -> R(-e-3) -> ⊕ R(-p_i) -> ⊕ R(-q_i) -> R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GorensteinShape {
    pub n: usize,
    /// Generator degrees, ascending.
    pub q: Vec<usize>,
    /// Second-module degrees, descending.
    pub p: Vec<usize>,
    pub e: usize,
}

impl GorensteinShape {
    pub fn new(mut q: Vec<usize>, mut p: Vec<usize>, e: usize) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::invalid(format!(
                "{} generators but {} second syzygy degrees",
                q.len(),
                p.len()
            )));
        }
        if q.is_empty() {
            return Err(Error::invalid("a shape needs at least one generator"));
        }
        q.sort_unstable();
        p.sort_unstable_by(|a, b| b.cmp(a));
        Ok(GorensteinShape { n: q.len(), q, p, e })
    }

    /// Reads the shape off a codimension-3 table whose last module is `R(-e-3)`.
    pub fn from_table(b: &BettiTable, e: usize) -> Result<Self> {
        if b.codim() != 3 {
            return Err(Error::invalid("Gorenstein shapes are defined in codimension 3"));
        }
        if b.degrees(3) != vec![e + 3] {
            return Err(Error::invalid(format!("last module is not R(-{})", e + 3)));
        }
        GorensteinShape::new(b.degrees(1), b.degrees(2), e)
    }

    /// `r_i = p_i - q_i`.
    pub fn gaps(&self) -> Vec<i64> {
        self.p.iter().zip(&self.q).map(|(&p, &q)| p as i64 - q as i64).collect()
    }

    pub fn to_table(&self) -> BettiTable {
        let entries = self
            .q
            .iter()
            .map(|&q| ((1, q), 1))
            .chain(self.p.iter().map(|&p| ((2, p), 1)))
            .chain(std::iter::once(((3, self.e + 3), 1)));
        BettiTable::new(3, entries).expect("indices in 1..=3")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DieselReport {
    pub holds: bool,
    pub conditions: Vec<ConditionResult>,
}

/// Evaluates every admissibility condition for a codimension-3 Gorenstein
/// resolution shape and the Hilbert series identity.
pub fn diesel_check(t: &HVector, shape: &GorensteinShape) -> Result<DieselReport> {
    if t.codim() != 3 {
        return Err(Error::invalid("the conditions apply to codimension 3"));
    }
    let params = diesel_params(t)?;
    let e = t.socle_degree();
    if shape.e != e {
        return Err(Error::invalid(format!("shape has socle degree {}, T has {e}", shape.e)));
    }
    let n = shape.n;
    let r = shape.gaps();
    let mut conditions = Vec::new();
    let mut push = |name: &str, holds: bool, detail: String| {
        conditions.push(ConditionResult { name: name.into(), holds, detail })
    };
    let bad_pair = (0..n).find(|&i| shape.p[i] + shape.q[i] != e + 3);
    push(
        "degree-pairing",
        bad_pair.is_none(),
        match bad_pair {
            Some(i) => format!("p_{} + q_{} = {} != {}", i + 1, i + 1, shape.p[i] + shape.q[i], e + 3),
            None => format!("p_i + q_i = {} for all i", e + 3),
        },
    );
    push("odd-generator-count", n % 2 == 1, format!("n = {n}"));
    push(
        "generator-count-range",
        params.mu as usize <= n && n <= 2 * params.k + 1,
        format!("mu = {} <= n = {n} <= 2k+1 = {}", params.mu, 2 * params.k + 1),
    );
    push("first-gap-positive", r[0] > 0, format!("r_1 = {}", r[0]));
    let bad_gap = (1..n).find(|&i| r[i] + r[n - i] <= 0);
    push(
        "paired-gaps-positive",
        bad_gap.is_none(),
        match bad_gap {
            Some(i) => format!("r_{} + r_{} = {}", i + 1, n - i + 1, r[i] + r[n - i]),
            None => "r_i + r_(n-i+2) > 0 for i = 2..n".into(),
        },
    );
    let short: Vec<String> = params
        .forced_generators
        .iter()
        .filter(|(&d, &c)| (shape.q.iter().filter(|&&q| q == d).count() as u64) < c)
        .map(|(d, c)| format!("degree {d} needs {c}"))
        .collect();
    push(
        "forced-generators",
        short.is_empty(),
        if short.is_empty() { "present".into() } else { short.join(", ") },
    );
    let fe = functional_equation_check(t, &shape.to_table());
    push("functional-equation", fe.holds, format!("residual {:?}", fe.residual));
    Ok(DieselReport {
        holds: conditions.iter().all(|c| c.holds),
        conditions,
    })
}

/// First-syzygy degree multisets of a level algebra `(1, 3, ..., 3, 2)`:
/// one with `j = h_{e/2} > 3`, two (`γ = 0, 1`) with `j = 3`.
pub fn first_module_degrees(h: &HVector) -> Result<Vec<Vec<usize>>> {
    let e = h.socle_degree();
    if e < 2 || h.last() != 2 || h.get(1) != 3 || h.get(e - 1) != 3 {
        return Err(Error::invalid(format!("({h}) is not of the shape (1, 3, ..., 3, 2)")));
    }
    let ones: Vec<u64> = (0..=e).map(|i| u64::from(i > 0)).collect();
    let g = HVector::from_signed(&sub(h.entries(), &ones))?;
    if is_gorenstein_hvector(&g) != GorensteinVerdict::Yes {
        return Err(Error::invalid(format!("({h}) is not a level h-vector")));
    }
    let j = h.get(e / 2) as usize;
    Ok(if j > 3 {
        let mut v = vec![2, 2, j - 1, e + 3 - j, e + 1];
        v.sort_unstable();
        vec![v]
    } else {
        vec![vec![2, 2, 2, e], vec![2, 2, 2, e, e + 1]]
    })
}

/// Subsets of `0..r` of size `k`, as ascending index lists in lex order.
fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..r {
            cur.push(v);
            rec(v + 1, r, k, cur, out);
            cur.pop();
        }
    }
    rec(0, r, k, &mut cur, &mut out);
    out
}

/// Betti numbers of `A = R/I` from the Koszul complex `K(x; A)`:
/// `β_{i,j} = dim K_{i,j} - rank ∂_{i,j} - rank ∂_{i+1,j}` with
/// `K_{i,j} = A_{j-i} ⊗ Λ^i`. Needs `A` to vanish within the ideal's cap.
pub fn koszul_betti(ideal: &GradedIdeal) -> Result<BettiTable> {
    if !ideal.is_closed() {
        return Err(Error::invalid(format!(
            "the quotient does not vanish in degree {}; raise the cap",
            ideal.cap()
        )));
    }
    let r = ideal.num_vars();
    let top = (0..=ideal.cap()).rev().find(|&d| ideal.quotient_dim(d) > 0).unwrap_or(0);
    let dim_a = |d: isize| if d < 0 || d as usize > ideal.cap() { 0 } else { ideal.quotient_dim(d as usize) };
    let wedges: Vec<Vec<Vec<usize>>> = (0..=r).map(|k| subsets(r, k)).collect();
    // mult[d][v]: images of the standard monomials of A_d under x_v.
    let mult: Vec<Vec<Vec<Vec<BigRational>>>> = (0..=top)
        .map(|d| (0..r).map(|v| ideal.multiplication_rows(d, v)).collect())
        .collect();
    let (mult, wedges) = (&mult, &wedges);
    // rank of ∂: K_{i,j} -> K_{i-1,j}.
    let boundary_rank = |i: usize, j: usize| -> usize {
        if i == 0 || i > r || j < i {
            return 0;
        }
        let d = j - i;
        if d > top {
            return 0;
        }
        let (src, dst) = (dim_a(d as isize), dim_a(d as isize + 1));
        if src == 0 || dst == 0 {
            return 0;
        }
        let targets = &wedges[i - 1];
        let ncols = dst * targets.len();
        let rows = wedges[i].iter().flat_map(|s| {
            (0..src).map(move |m| {
                let mut row = vec![BigRational::zero(); ncols];
                for (pos, &v) in s.iter().enumerate() {
                    let mut rest = s.clone();
                    rest.remove(pos);
                    let t = targets.binary_search(&rest).expect("subset listed");
                    let image = &mult[d][v][m];
                    for (c, x) in image.iter().enumerate() {
                        if pos % 2 == 0 {
                            row[t * dst + c] += x;
                        } else {
                            row[t * dst + c] -= x;
                        }
                    }
                }
                integer_row(&row)
            })
        });
        rank(ncols, rows)
    };
    let mut entries = Vec::new();
    for i in 1..=r {
        for j in i..=top + i {
            let dim = dim_a((j - i) as isize) * wedges[i].len();
            if dim == 0 {
                continue;
            }
            let beta = dim - boundary_rank(i, j) - boundary_rank(i + 1, j);
            entries.push(((i, j), beta as u64));
        }
    }
    let h = HVector::new((0..=top).map(|d| ideal.quotient_dim(d) as u64).collect())?;
    Ok(BettiTable::new(r, entries)?.with_hvector(h))
}

/// `(C(r-1+d, d) - dim V)^{<d>} = C(r+d, d+1) - dim R_1 V`: the space `V` of
/// degree-`d` forms grows as slowly as Macaulay's bound allows.
pub fn gotzmann_check(codim: u64, d: u64, dim_v: u64, dim_r1v: u64) -> Result<bool> {
    if codim == 0 || d == 0 {
        return Err(Error::invalid("need codim >= 1 and d >= 1"));
    }
    let full = binomial_u64(codim - 1 + d, d);
    if dim_v > full {
        return Err(Error::invalid(format!("dim V = {dim_v} exceeds dim R_{d} = {full}")));
    }
    let next = binomial_u64(codim + d, d + 1);
    if dim_r1v > next {
        return Err(Error::invalid(format!("dim R_1 V = {dim_r1v} exceeds dim R_{} = {next}", d + 1)));
    }
    Ok(macaulay_upper(full - dim_v, d)? == (next - dim_r1v).into())
}

/// `s_j = β_{r, j+r}`.
pub fn socle_from_table(b: &BettiTable) -> Result<SocleVector> {
    let r = b.codim();
    let top: Vec<(usize, u64)> = b
        .entries()
        .iter()
        .filter(|((i, _), _)| *i == r)
        .map(|(&(_, j), &v)| (j, v))
        .collect();
    if top.is_empty() {
        return Err(Error::invalid("the table has no last module"));
    }
    let max = top.iter().map(|&(j, _)| j).max().unwrap();
    if top.iter().any(|&(j, _)| j < r) {
        return Err(Error::invalid("last module has a generator below degree r"));
    }
    let mut s = vec![0u64; max - r + 1];
    for (j, v) in top {
        s[j - r] += v;
    }
    SocleVector::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invsys::{Form, InverseModule};

    use crate::macaulay::lex_segment_span;

    fn hv(v: &[u64]) -> HVector {
        HVector::new(v.to_vec()).unwrap()
    }

    fn ideal(gens: &[&str], cap: usize) -> GradedIdeal {
        let forms: Vec<Form> = gens.iter().map(|s| Form::parse(s, 'x', 3, 1).unwrap()).collect();
        GradedIdeal::from_generators(3, &forms, cap).unwrap()
    }

    #[test]
    fn koszul_tables_of_monomial_ideals() {
        let b = koszul_betti(&ideal(&["x1^2", "x1*x2", "x2^2", "x3^4"], 5)).unwrap();
        assert_eq!(b.degrees(1), vec![2, 2, 2, 4]);
        assert_eq!(b.degrees(3), vec![7, 7]);
        let h = hv(&[1, 3, 3, 3, 2]);
        assert!(functional_equation_check(&h, &b).holds);
        assert_eq!(socle_from_table(&b).unwrap().entries(), &[0, 0, 0, 0, 2]);

        let b = koszul_betti(&ideal(&["x1*x3", "x2*x3", "x2^2", "x1^4", "x3^5"], 6)).unwrap();
        assert_eq!(b.degrees(1), vec![2, 2, 2, 4, 5]);

        let b = koszul_betti(&ideal(&["x2", "x3", "x1^4"], 5)).unwrap();
        assert_eq!(b.degrees(1), vec![1, 1, 4]);
        assert_eq!(b.degrees(2), vec![2, 5, 5]);
        assert_eq!(b.degrees(3), vec![6]);

        let b = koszul_betti(&ideal(&["x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"], 3)).unwrap();
        assert_eq!(socle_from_table(&b).unwrap().entries(), &[0, 3]);
    }

    #[test]
    fn perturbed_table_breaks_the_identity() {
        let mut b = koszul_betti(&ideal(&["x1^2", "x1*x2", "x2^2", "x3^4"], 5)).unwrap();
        let h = hv(&[1, 3, 3, 3, 2]);
        let old = b.get(1, 5);
        b.set(1, 5, old + 1);
        let fe = functional_equation_check(&h, &b);
        assert!(!fe.holds);
        assert_eq!(fe.residual[5], 1);
        let empty = BettiTable::new(3, []).unwrap();
        assert!(!functional_equation_check(&hv(&[1]), &empty).holds);
    }

    #[test]
    fn table_text_round_trip() {
        let b = koszul_betti(&ideal(&["x1^2", "x1*x2", "x2^2", "x3^4"], 5)).unwrap();
        let text = b.to_string();
        assert!(text.starts_with("# codim 3 h 1,3,3,3,2\n"));
        assert_eq!(BettiTable::parse(&text).unwrap(), b);
        assert!(BettiTable::parse("1 2 3\n").is_err());
    }

    #[test]
    fn third_differences() {
        assert_eq!(third_difference(&hv(&[1, 3, 3, 3, 1])), vec![1, 0, -3, 2, -2, 3, 0, -1]);
        assert_eq!(
            third_difference(&hv(&[1, 3, 4, 5, 5, 4, 3, 1])),
            vec![1, 0, -2, 1, -1, 0, 1, -1, 2, 0, -1]
        );
        assert_eq!(third_difference(&hv(&[1, 1])), vec![1, -2, 0, 2, -1]);
    }

    #[test]
    fn diesel_parameters() {
        let p = diesel_params(&hv(&[1, 3, 3, 3, 1])).unwrap();
        assert_eq!((p.k, p.mu), (2, 5));
        assert_eq!(p.forced_generators, BTreeMap::from([(2, 3), (4, 2)]));
        let p = diesel_params(&hv(&[1, 3, 4, 4, 3, 1])).unwrap();
        assert_eq!(p.third_difference, vec![1, 0, -2, 0, 0, 0, 2, 0, -1]);
        assert_eq!((p.k, p.mu), (2, 1));
        assert_eq!(p.forced_generators, BTreeMap::from([(2, 2)]));
        assert_eq!(diesel_params(&hv(&[1, 1, 1])).unwrap().k, 1);
        assert!(diesel_params(&hv(&[1, 3, 2])).is_err());
    }

    #[test]
    fn diesel_shapes() {
        let t = hv(&[1, 3, 3, 3, 1]);
        let good = GorensteinShape::new(vec![2, 2, 2, 4, 4], vec![5, 5, 5, 3, 3], 4).unwrap();
        let report = diesel_check(&t, &good).unwrap();
        assert!(report.holds, "{report:?}");
        let short = GorensteinShape::new(vec![2, 2, 2], vec![5, 5, 5], 4).unwrap();
        let report = diesel_check(&t, &short).unwrap();
        assert!(!report.holds);
        let fe = report.conditions.iter().find(|c| c.name == "functional-equation").unwrap();
        assert!(!fe.holds);
        let even = GorensteinShape::new(vec![2, 2, 3, 3], vec![6, 6, 5, 5], 5).unwrap();
        let report = diesel_check(&hv(&[1, 3, 4, 4, 3, 1]), &even).unwrap();
        assert!(!report.conditions.iter().find(|c| c.name == "odd-generator-count").unwrap().holds);
        assert!(GorensteinShape::new(vec![2, 2], vec![3], 4).is_err());
    }

    #[test]
    fn gorenstein_power_sum_passes() {
        let m = InverseModule::new(vec![crate::invsys::generic_power_sum(3, 4, 4, 0).unwrap()]).unwrap();
        let a = m.analyze();
        let b = koszul_betti(&GradedIdeal::from_module(&m, 5)).unwrap();
        let shape = GorensteinShape::from_table(&b, 4).unwrap();
        assert!(diesel_check(&a.hvector, &shape).unwrap().holds);
    }

    #[test]
    fn first_modules() {
        assert_eq!(first_module_degrees(&hv(&[1, 3, 4, 4, 3, 2])).unwrap(), vec![vec![2, 2, 3, 4, 6]]);
        assert_eq!(
            first_module_degrees(&hv(&[1, 3, 3, 3, 3, 2])).unwrap(),
            vec![vec![2, 2, 2, 5], vec![2, 2, 2, 5, 6]]
        );
        assert_eq!(
            first_module_degrees(&hv(&[1, 3, 4, 5, 5, 4, 3, 2])).unwrap(),
            vec![vec![2, 2, 4, 5, 8]]
        );
        assert!(first_module_degrees(&hv(&[1, 3, 5, 4, 3, 2])).is_err());
    }

    #[test]
    fn gotzmann_examples() {
        for d in 1..6 {
            assert!(gotzmann_check(3, d, binomial_u64(2 + d, d), binomial_u64(3 + d, d + 1)).unwrap());
        }
        // Complement 2 in degree e stays 2 in degree e + 1.
        assert!(gotzmann_check(3, 4, 13, 19).unwrap());
        assert!(!gotzmann_check(3, 4, 13, 18).unwrap());
        for len in 0..=10u64 {
            let grown = lex_segment_span(3, 3, len).unwrap();
            assert!(gotzmann_check(3, 3, len, grown).unwrap(), "len {len}");
        }
        assert!(gotzmann_check(3, 2, 7, 0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn third_difference_is_linear(
            a in proptest::collection::vec(1u64..20, 1..7),
            b in proptest::collection::vec(1u64..20, 1..7),
        ) {
            let n = a.len().max(b.len());
            let pad = |v: &[u64]| {
                let mut w = vec![1];
                w.extend_from_slice(v);
                w.resize(n + 1, 1);
                w
            };
            let (u, v) = (pad(&a), pad(&b));
            let sum: Vec<u64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
            let mut sum_h = sum.clone();
            sum_h[0] = 1;
            // Δ³ of the true sum: the degree-0 entry counts once in each summand.
            let (du, dv) = (third_difference(&hv(&u)), third_difference(&hv(&v)));
            let ds = third_difference(&hv(&sum_h));
            let d0 = third_difference(&hv(&[1]));
            for k in 0..ds.len() {
                let zero_shift = d0.get(k).copied().unwrap_or(0);
                proptest::prop_assert_eq!(ds[k], du[k] + dv[k] - zero_shift);
            }
        }
    }
}
