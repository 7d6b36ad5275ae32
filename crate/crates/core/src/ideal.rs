//! Homogeneous ideals of `R = k[x_1..x_r]` stored degree by degree up to a cap,
//! together with the quotient algebra `A = R/I` in standard-monomial coordinates.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::invsys::{Exponent, Form, InverseModule};
use crate::linalg::{integer_row, Echelon};
use crate::macaulay::lex_monomials;

/// One graded piece `I_d` in reduced row echelon form over the lex basis of `R_d`.
#[derive(Debug, Clone)]
struct Component {
    monomials: Vec<Exponent>,
    index: BTreeMap<Exponent, usize>,
    rref: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    /// Non-pivot columns; their monomials form a basis of `A_d`.
    standard: Vec<usize>,
}

impl Component {
    fn from_echelon(monomials: Vec<Exponent>, ech: &Echelon) -> Self {
        let index = monomials
            .iter()
            .enumerate()
            .map(|(k, m)| (m.clone(), k))
            .collect();
        let pivots = ech.pivots().to_vec();
        let standard = (0..monomials.len()).filter(|c| !pivots.contains(c)).collect();
        Component {
            monomials,
            index,
            rref: ech.rref(),
            pivots,
            standard,
        }
    }

    /// Coordinates in `A_d` of the class of `v` (a vector over all monomials).
    fn normal_form(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for (row, &c) in self.rref.iter().zip(&self.pivots) {
            if v[c].is_zero() {
                continue;
            }
            let f = v[c].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v[j] -= &f * x;
                }
            }
        }
        self.standard.iter().map(|&c| v[c].clone()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct GradedIdeal {
    num_vars: usize,
    components: Vec<Component>,
}

impl GradedIdeal {
    /// The ideal generated by `generators` (forms in the `x` variables),
    /// computed in degrees `0..=cap` by closing under multiplication.
    pub fn from_generators(num_vars: usize, generators: &[Form], cap: usize) -> Result<Self> {
        for g in generators {
            if g.num_vars() > num_vars {
                return Err(Error::invalid("generator uses more variables than the ring"));
            }
            if g.is_zero() {
                return Err(Error::invalid("zero generator"));
            }
        }
        let generators: Vec<Form> = generators
            .iter()
            .map(|g| g.embed(num_vars, 0))
            .collect::<Result<_>>()?;
        let mut components: Vec<Component> = Vec::with_capacity(cap + 1);
        let mut prev_basis: Vec<Form> = Vec::new();
        for d in 0..=cap {
            let monomials = lex_monomials(num_vars, d);
            let index: BTreeMap<Exponent, usize> = monomials
                .iter()
                .enumerate()
                .map(|(k, m)| (m.clone(), k))
                .collect();
            let mut ech = Echelon::new(monomials.len());
            let mut basis = Vec::new();
            let multiples = prev_basis
                .iter()
                .flat_map(|f| (0..num_vars).map(move |v| f.mul_var(v)));
            let fresh = generators.iter().filter(|g| g.degree() as usize == d).cloned();
            for f in multiples.chain(fresh) {
                if ech.rank() == monomials.len() {
                    break;
                }
                if ech.insert(integer_row(&f.coefficient_row(&index))) {
                    basis.push(f);
                }
            }
            components.push(Component::from_echelon(monomials, &ech));
            prev_basis = basis;
        }
        Ok(GradedIdeal {
            num_vars,
            components,
        })
    }

    /// The annihilator of an inverse module, in degrees `0..=cap`.
    pub fn from_module(module: &InverseModule, cap: usize) -> Self {
        let analysis = module.analyze();
        let r = module.num_vars();
        let components = (0..=cap)
            .map(|d| {
                let monomials = lex_monomials(r, d);
                let index: BTreeMap<Exponent, usize> = monomials
                    .iter()
                    .enumerate()
                    .map(|(k, m)| (m.clone(), k))
                    .collect();
                let mut ech = Echelon::new(monomials.len());
                for f in crate::invsys::module::annihilator_from(&analysis, r, d as u32) {
                    ech.insert(integer_row(&f.coefficient_row(&index)));
                }
                Component::from_echelon(monomials, &ech)
            })
            .collect();
        GradedIdeal {
            num_vars: r,
            components,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Highest degree stored.
    pub fn cap(&self) -> usize {
        self.components.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.components[d].pivots.len()
    }

    /// `dim A_d`.
    pub fn quotient_dim(&self, d: usize) -> usize {
        self.components[d].standard.len()
    }

    /// `dim A_d` for `d = 0..=cap`.
    pub fn hilbert_function(&self) -> Vec<u64> {
        (0..=self.cap()).map(|d| self.quotient_dim(d) as u64).collect()
    }

    pub fn standard_monomials(&self, d: usize) -> Vec<Exponent> {
        let c = &self.components[d];
        c.standard.iter().map(|&k| c.monomials[k].clone()).collect()
    }

    /// Basis of `I_d` as forms, one per pivot.
    pub fn basis(&self, d: usize) -> Vec<Form> {
        let c = &self.components[d];
        c.rref
            .iter()
            .map(|row| {
                Form::from_terms(
                    self.num_vars,
                    d as u32,
                    c.monomials.iter().cloned().zip(row.iter().cloned()),
                )
                .expect("rows live in degree d")
            })
            .collect()
    }

    /// Minimal generators degree by degree: a complement of `R_1 I_{d-1}` in `I_d`.
    pub fn minimal_generator_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for d in 0..=self.cap() {
            let c = &self.components[d];
            let mut ech = Echelon::new(c.monomials.len());
            if d > 0 {
                for f in self.basis(d - 1) {
                    for v in 0..self.num_vars {
                        ech.insert(integer_row(&f.mul_var(v).coefficient_row(&c.index)));
                    }
                }
            }
            let count = self.dim(d) - ech.rank();
            out.extend(std::iter::repeat_n(d, count));
        }
        out
    }

    /// Multiplication by `x_var` from `A_d` to `A_{d+1}`, as the images of the
    /// standard monomials of degree `d` (one row each).
    pub fn multiplication_rows(&self, d: usize, var: usize) -> Vec<Vec<BigRational>> {
        let (src, dst) = (&self.components[d], &self.components[d + 1]);
        src.standard
            .iter()
            .map(|&k| {
                let mut m = src.monomials[k].clone();
                m[var] += 1;
                let mut v = vec![BigRational::zero(); dst.monomials.len()];
                v[dst.index[&m]] = BigRational::from_integer(1.into());
                dst.normal_form(v)
            })
            .collect()
    }

    /// Socle dimensions of `A` in degrees `0..cap`: the kernel of
    /// `A_i -> A_{i+1}^r`, `a -> (x_1 a, ..., x_r a)`.
    pub fn socle_dims(&self) -> Vec<u64> {
        (0..self.cap())
            .map(|d| {
                let n = self.quotient_dim(d);
                if n == 0 {
                    return 0;
                }
                let blocks: Vec<Vec<Vec<BigRational>>> = (0..self.num_vars)
                    .map(|v| self.multiplication_rows(d, v))
                    .collect();
                let width = self.quotient_dim(d + 1) * self.num_vars;
                let rows = (0..n).map(|k| {
                    let row: Vec<BigRational> =
                        blocks.iter().flat_map(|b| b[k].iter().cloned()).collect();
                    integer_row(&row)
                });
                (n - crate::linalg::rank(width, rows)) as u64
            })
            .collect()
    }

    /// True when `A_cap = 0`, so the quotient is artinian and fully described.
    pub fn is_closed(&self) -> bool {
        self.quotient_dim(self.cap()) == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invsys::InverseModule;
    use crate::macaulay::HVector;

    fn x(s: &str) -> Form {
        Form::parse(s, 'x', 3, 1).unwrap()
    }

    #[test]
    fn monomial_ideal_quotient() {
        let i = GradedIdeal::from_generators(3, &[x("x1^2"), x("x1*x2"), x("x2^2"), x("x3^4")], 5)
            .unwrap();
        assert_eq!(i.hilbert_function(), vec![1, 3, 3, 3, 2, 0]);
        assert!(i.is_closed());
        assert_eq!(i.socle_dims(), vec![0, 0, 0, 0, 2]);
        assert_eq!(i.minimal_generator_degrees(), vec![2, 2, 2, 4]);
        assert_eq!(i.standard_monomials(4), vec![vec![1, 0, 3], vec![0, 1, 3]]);
    }

    #[test]
    fn annihilator_route_matches_derivative_route() {
        for text in ["y1*y3^3\ny2*y3^3", "y1^2\ny2^3", "y1^4*y2\ny3^5", "y1^3 + y2^3 + y3^3"] {
            let m = InverseModule::parse(text).unwrap();
            let a = m.analyze();
            let e = m.max_degree() as usize;
            let i = GradedIdeal::from_module(&m, e + 1);
            let mut h = i.hilbert_function();
            h.pop();
            assert_eq!(HVector::new(h).unwrap(), a.hvector, "{text}");
            assert_eq!(i.socle_dims(), a.socle.entries().to_vec(), "{text}");
        }
    }

    #[test]
    fn annihilator_generators_round_trip() {
        let m = InverseModule::parse("y1^4*y2\ny3^5").unwrap();
        let from_module = GradedIdeal::from_module(&m, 6);
        let gens = [x("x1*x3"), x("x2*x3"), x("x2^2"), x("x1^5"), x("x3^6")];
        let from_gens = GradedIdeal::from_generators(3, &gens, 6).unwrap();
        assert_eq!(from_module.hilbert_function(), from_gens.hilbert_function());
        assert_eq!(from_module.minimal_generator_degrees(), vec![2, 2, 2, 5, 6]);
    }
}
