use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::form::{rat, Form};
use super::module::{InverseModule, ModuleAnalysis};
use crate::error::{Error, Result};
use crate::hvec::{first_difference, is_si_sequence};
use crate::linalg::integer_row;
use crate::macaulay::{graded_dim, lex_monomials, HVector};

/// Redraws allowed after the first attempt at a generic power sum.
pub const DEFAULT_RETRIES: usize = 8;

/// `h_j(m, d) = min(m, dim R_j, dim R_{d-j})` in `r` variables: the Hilbert
/// function of a sum of `m` general `d`-th powers of linear forms.
pub fn expected_generic_hvector(r: usize, m: u64, d: usize) -> Result<HVector> {
    if r == 0 || m == 0 {
        return Err(Error::invalid("need r >= 1 and m >= 1"));
    }
    HVector::new(
        (0..=d)
            .map(|j| m.min(graded_dim(r, j)).min(graded_dim(r, d - j)))
            .collect(),
    )
}

/// `H_i = min(h_i + h_i(m, d), dim R_i)`: the Hilbert function of `<M, F>` for
/// a level module `M` of socle degree `d` and `F` a general sum of `m` powers.
pub fn augmented_level_hvector(h: &HVector, r: usize, m: u64, d: usize) -> Result<HVector> {
    if h.socle_degree() != d {
        return Err(Error::invalid(format!(
            "h has socle degree {}, expected {d}",
            h.socle_degree()
        )));
    }
    let cap = graded_dim(r, d).saturating_sub(h.get(d));
    if m == 0 || m > cap {
        return Err(Error::invalid(format!(
            "m = {m} must lie in 1..={cap} (dim R_{d} - h_{d})"
        )));
    }
    let g = expected_generic_hvector(r, m, d)?;
    HVector::new(
        (0..=d)
            .map(|i| (h.get(i) + g.get(i)).min(graded_dim(r, i)))
            .collect(),
    )
}

fn draw_coefficient(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.gen_range(-100..=100);
    let q: i64 = rng.gen_range(1..=16);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `sum_{t=1}^m L_t^d` for seeded random linear forms `L_t` in `r` variables.
/// Each `L_t` is scaled to integer coefficients before powering; a non-zero
/// multiple of `L_t^d` does not change any derivative span. Not certified;
/// see [`generic_power_sum`].
pub fn sampled_power_sum(r: usize, m: usize, d: u32, rng: &mut ChaCha8Rng) -> Form {
    let mut f = Form::zero(r, d);
    for _ in 0..m {
        let drawn: Vec<BigRational> = (0..r).map(|_| draw_coefficient(rng)).collect();
        let coeffs: Vec<BigRational> = integer_row(&drawn)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        f = f
            .add(&Form::linear_power(&coeffs, d))
            .expect("summands share ring and degree");
    }
    f
}

/// A sum of `m` powers of seeded random linear forms whose module h-vector has
/// been checked against [`expected_generic_hvector`]. Redraws up to `retries`
/// times from the same seeded stream.
pub fn generic_power_sum_with(
    r: usize,
    m: usize,
    d: u32,
    seed: u64,
    retries: usize,
) -> Result<Form> {
    if r == 0 || m == 0 || d == 0 {
        return Err(Error::invalid("need r, m, d >= 1"));
    }
    let expected = expected_generic_hvector(r, m as u64, d as usize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut observed = Vec::new();
    for _ in 0..=retries {
        let f = sampled_power_sum(r, m, d, &mut rng);
        if f.is_zero() {
            continue;
        }
        let h = InverseModule::new(vec![f.clone()])?
            .analyze_bounded(&expected)
            .hvector;
        if h == expected {
            return Ok(f);
        }
        observed = h.into_entries();
    }
    Err(Error::Genericity {
        attempts: retries + 1,
        expected: expected.into_entries(),
        observed,
    })
}

pub fn generic_power_sum(r: usize, m: usize, d: u32, seed: u64) -> Result<Form> {
    generic_power_sum_with(r, m, d, seed, DEFAULT_RETRIES)
}

/// A form `F` of degree `e` in `c` variables with `h(<F>) = g`, for any
/// SI-sequence `g` of codimension `c`.
///
/// The points `(a, 1)`, for `a` running over the standard monomials of the lex
/// ideal in `c - 1` variables with Hilbert function `Δ(g_0..g_{e/2})`, have
/// Hilbert function `g_i` for `i <= e/2`. Over the rationals the sum of the
/// `e`-th powers of the dual linear forms then has `h_i = g_min(i, e-i)`.
pub fn lifted_points_form(g: &HVector) -> Result<Form> {
    if !is_si_sequence(g) {
        return Err(Error::invalid(format!("({g}) is not an SI-sequence")));
    }
    let e = g.socle_degree();
    let c = g.codim() as usize;
    if e == 0 || c == 0 {
        return Err(Error::invalid("need socle degree and codimension at least 1"));
    }
    let half = e / 2;
    let delta = first_difference(&g.entries()[..=half]);
    let mut points: Vec<Vec<u32>> = Vec::new();
    for (i, &count) in delta.iter().enumerate() {
        let monomials = lex_monomials(c - 1, i);
        let count = count as usize;
        // The smallest lex monomials are the standard monomials of the lex ideal.
        points.extend(monomials[monomials.len() - count..].iter().cloned());
    }
    let mut f = Form::zero(c, e as u32);
    for a in points {
        let mut coeffs: Vec<BigRational> = a.iter().map(|&v| rat(v as i64)).collect();
        coeffs.push(rat(1));
        f = f.add(&Form::linear_power(&coeffs, e as u32))?;
    }
    Ok(f)
}

/// Runs the derivative sweep and checks the claimed h-vector and a level
/// socle `(0, ..., 0, t)` with `t` the number of generators.
pub fn verify_level_witness(module: &InverseModule, expected: &HVector) -> Result<ModuleAnalysis> {
    check_level(module, expected, module.analyze())
}

/// As [`verify_level_witness`] when `expected` is also a proven upper bound
/// on the module's h-vector, as the closed forms of power-sum recipes are.
pub fn verify_level_witness_below(
    module: &InverseModule,
    expected: &HVector,
) -> Result<ModuleAnalysis> {
    check_level(module, expected, module.analyze_bounded(expected))
}

fn check_level(module: &InverseModule, expected: &HVector, analysis: ModuleAnalysis) -> Result<ModuleAnalysis> {
    if &analysis.hvector != expected {
        return Err(Error::Internal(format!(
            "witness has h-vector ({}), expected ({expected})",
            analysis.hvector
        )));
    }
    let t = module.generators().len() as u64;
    let e = expected.socle_degree();
    let socle = analysis.socle.entries();
    let level = socle.len() == e + 1
        && socle[e] == t
        && socle[..e].iter().all(|&s| s == 0);
    if !level {
        return Err(Error::Internal(format!(
            "witness socle ({}) is not (0, ..., 0, {t})",
            analysis.socle
        )));
    }
    Ok(analysis)
}

/// A block of `count` general `e`-th powers in the variables
/// `offset+1 ..= offset+vars` of a ring in `num_vars` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerSumBlock {
    pub vars: usize,
    pub offset: usize,
    pub count: usize,
}

/// A two-generator level module `<F, G>` of socle degree `e`, each generator a
/// sum of power-sum blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoFormRecipe {
    pub num_vars: usize,
    pub e: u32,
    pub f: Vec<PowerSumBlock>,
    pub g: Vec<PowerSumBlock>,
}

impl TwoFormRecipe {
    /// Blocks are sampled without their own certificate: [`Self::realize`]
    /// verifies the whole module, which subsumes it.
    fn block_form(&self, block: &PowerSumBlock, rng: &mut ChaCha8Rng) -> Result<Form> {
        // One variable and one summand: the pure power, no sampling needed.
        let part = if block.vars == 1 && block.count == 1 {
            Form::monomial(vec![self.e], rat(1))
        } else {
            sampled_power_sum(block.vars, block.count, self.e, rng)
        };
        part.embed(self.num_vars, block.offset)
    }

    fn side(&self, blocks: &[PowerSumBlock], rng: &mut ChaCha8Rng) -> Result<Form> {
        let mut f = Form::zero(self.num_vars, self.e);
        for b in blocks {
            f = f.add(&self.block_form(b, rng)?)?;
        }
        Ok(f)
    }

    /// Builds the module and checks it against `expected`, redrawing from the
    /// same seeded stream up to `retries` times. `expected` must be the
    /// recipe's closed form (see [`Self::expected_hvector`]), which bounds the
    /// h-vector of every draw from above.
    pub fn realize(&self, expected: &HVector, seed: u64, retries: usize) -> Result<InverseModule> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut observed = Vec::new();
        for _ in 0..=retries {
            let f = self.side(&self.f, &mut rng)?;
            let g = self.side(&self.g, &mut rng)?;
            let Ok(module) = InverseModule::new(vec![f, g]) else {
                continue;
            };
            match verify_level_witness_below(&module, expected) {
                Ok(_) => return Ok(module),
                Err(_) => observed = module.hvector().into_entries(),
            }
        }
        Err(Error::Genericity {
            attempts: retries + 1,
            expected: expected.entries().to_vec(),
            observed,
        })
    }

    /// Closed-form h-vector of the recipe when each side is a single block and
    /// the blocks either use disjoint variables (the Hilbert functions add) or
    /// one of them uses every variable (`min(h_i + h'_i, dim R_i)`).
    pub fn expected_hvector(&self) -> Result<HVector> {
        let ([f], [g]) = (self.f.as_slice(), self.g.as_slice()) else {
            return Err(Error::invalid("closed form needs one block per generator"));
        };
        let e = self.e as usize;
        let hf = expected_generic_hvector(f.vars, f.count as u64, e)?;
        let hg = expected_generic_hvector(g.vars, g.count as u64, e)?;
        let disjoint = f.offset + f.vars <= g.offset || g.offset + g.vars <= f.offset;
        let spans_all = |b: &PowerSumBlock| b.offset == 0 && b.vars == self.num_vars;
        let entries: Vec<u64> = if disjoint {
            (0..=e)
                .map(|i| if i == 0 { 1 } else { hf.get(i) + hg.get(i) })
                .collect()
        } else if spans_all(f) || spans_all(g) {
            (0..=e)
                .map(|i| (hf.get(i) + hg.get(i)).min(graded_dim(self.num_vars, i)))
                .collect()
        } else {
            return Err(Error::invalid("blocks overlap without one spanning every variable"));
        };
        HVector::new(entries)
    }

}

/// The pencil-sharp two-generator modules with h-vector `(1, r, ..., r, 2)`.
///
/// With `p = floor(r/3)`: `F = sum_{k<=p} y_{p+k} y_k^{e-1}` and
/// `G = sum_{k<=p} y_{2p+k} y_k^{e-1}`, plus `y_r^e` on `F` when `r = 3p+1`,
/// or `y_{r-1}^e` on `F` and `y_r^e` on `G` when `r = 3p+2`.
pub fn sharp_pencil_witness(r: usize, e: u32) -> Result<InverseModule> {
    if r < 2 || e < 2 {
        return Err(Error::invalid("need r >= 2 and e >= 2"));
    }
    let p = r / 3;
    let term = |a: usize, b: usize| {
        let mut exp = vec![0u32; r];
        exp[a] += 1;
        exp[b] += e - 1;
        (exp, rat(1))
    };
    let power = |v: usize| {
        let mut exp = vec![0u32; r];
        exp[v] = e;
        (exp, rat(1))
    };
    let mut f: Vec<_> = (0..p).map(|k| term(p + k, k)).collect();
    let mut g: Vec<_> = (0..p).map(|k| term(2 * p + k, k)).collect();
    match r % 3 {
        1 => f.push(power(r - 1)),
        2 => {
            f.push(power(r - 2));
            g.push(power(r - 1));
        }
        _ => {}
    }
    InverseModule::new(vec![
        Form::from_terms(r, e, f)?,
        Form::from_terms(r, e, g)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hv(v: &[u64]) -> HVector {
        HVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            expected_generic_hvector(4, 35, 8).unwrap(),
            hv(&[1, 4, 10, 20, 35, 20, 10, 4, 1])
        );
        assert_eq!(expected_generic_hvector(3, 100, 4).unwrap(), hv(&[1, 3, 6, 3, 1]));
        assert_eq!(expected_generic_hvector(5, 1, 3).unwrap(), hv(&[1, 1, 1, 1]));
        assert_eq!(
            augmented_level_hvector(&hv(&[1, 4, 10, 20, 35, 20, 10, 4, 1]), 5, 1, 8).unwrap(),
            hv(&[1, 5, 11, 21, 36, 21, 11, 5, 2])
        );
        assert_eq!(
            augmented_level_hvector(&hv(&[1; 8]), 3, 10, 7).unwrap(),
            hv(&[1, 3, 6, 10, 11, 7, 4, 2])
        );
        assert!(augmented_level_hvector(&hv(&[1; 4]), 1, 1, 3).is_err());
    }

    #[test]
    fn generic_power_sums_are_certified() {
        let f = generic_power_sum(3, 4, 7, 0).unwrap();
        assert_eq!(
            InverseModule::new(vec![f]).unwrap().hvector(),
            hv(&[1, 3, 4, 4, 4, 4, 3, 1])
        );
        let f = generic_power_sum(2, 3, 5, 11).unwrap();
        assert_eq!(InverseModule::new(vec![f]).unwrap().hvector(), hv(&[1, 2, 3, 3, 2, 1]));
        let f = generic_power_sum(1, 1, 4, 3).unwrap();
        assert_eq!(f.terms().len(), 1);
        // Same seed, same form.
        assert_eq!(generic_power_sum(3, 4, 5, 9).unwrap(), generic_power_sum(3, 4, 5, 9).unwrap());
    }

    #[test]
    fn lifted_points_reach_si_sequences() {
        for g in [
            hv(&[1, 3, 4, 4, 3, 1]),
            hv(&[1, 3, 5, 5, 3, 1]),
            hv(&[1, 2, 2, 2, 1]),
            hv(&[1, 1, 1]),
            hv(&[1, 4, 7, 7, 4, 1]),
            hv(&[1, 3, 6, 6, 3, 1]),
        ] {
            let f = lifted_points_form(&g).unwrap();
            assert_eq!(InverseModule::new(vec![f]).unwrap().hvector(), g);
        }
        assert!(lifted_points_form(&hv(&[1, 3, 2, 3, 1])).is_err());
    }

    #[test]
    fn sharp_pencil_modules() {
        let m = sharp_pencil_witness(3, 5).unwrap();
        assert_eq!(m.to_string(), "y1^4*y2\ny1^4*y3\n");
        let m = sharp_pencil_witness(4, 5).unwrap();
        assert_eq!(m.to_string(), "y1^4*y2 + y4^5\ny1^4*y3\n");
        let m = sharp_pencil_witness(5, 4).unwrap();
        assert_eq!(m.to_string(), "y1^3*y2 + y4^4\ny1^3*y3 + y5^4\n");
        for r in 2..=7 {
            let m = sharp_pencil_witness(r, 5).unwrap();
            let mut h = vec![1u64];
            h.extend([r as u64; 4]);
            h.push(2);
            verify_level_witness(&m, &hv(&h)).unwrap();
        }
    }

    #[test]
    fn recipe_realizes_disjoint_blocks() {
        let recipe = TwoFormRecipe {
            num_vars: 3,
            e: 4,
            f: vec![PowerSumBlock { vars: 2, offset: 0, count: 3 }],
            g: vec![PowerSumBlock { vars: 1, offset: 2, count: 1 }],
        };
        let expected = hv(&[1, 3, 4, 3, 2]);
        assert_eq!(recipe.expected_hvector().unwrap(), expected);
        let m = recipe.realize(&expected, 5, DEFAULT_RETRIES).unwrap();
        assert_eq!(m.hvector(), expected);
    }
}
