use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::form::{exponent_factorial, Exponent, Form};
use crate::error::{Error, Result};
use crate::hvec::SocleVector;
use crate::linalg::modp::{self, ModEchelon};
use crate::linalg::{integer_row, Echelon};
use crate::macaulay::{lex_monomials, HVector};

/// A finitely generated submodule `M = <F_1, ..., F_t>` of the dual polynomial
/// ring, closed under differentiation. Generators may have different degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseModule {
    num_vars: usize,
    generators: Vec<Form>,
}

/// Row-reduced basis of one graded piece `M_d` in monomial coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeSpace {
    pub degree: u32,
    pub basis_rank: usize,
    /// Column labels of `basis`, largest lex monomial first.
    pub monomials: Vec<Exponent>,
    pub basis: Vec<Vec<BigRational>>,
}

/// Everything the top-down derivative sweep learns about a module.
#[derive(Debug, Clone)]
pub struct ModuleAnalysis {
    pub hvector: HVector,
    pub socle: SocleVector,
    /// `bases[d]` is a list of forms forming a basis of `M_d`.
    pub bases: Vec<Vec<Form>>,
}

/// `h = h' + h'' + h'''` for two forms of equal degree: `h''` is the Hilbert
/// function of `<F> ∩ <G>`, `h'` and `h'''` the parts seen by only one form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartDecomposition {
    pub only_f: Vec<i64>,
    pub shared: Vec<i64>,
    pub only_g: Vec<i64>,
}

/// Column index over the union of supports of `forms`.
fn support_index<'a, I>(forms: I) -> BTreeMap<Exponent, usize>
where
    I: IntoIterator<Item = &'a Form>,
{
    let mut index = BTreeMap::new();
    for f in forms {
        for exp in f.terms().keys() {
            index.entry(exp.clone()).or_insert(0);
        }
    }
    for (k, v) in index.values_mut().enumerate() {
        *v = k;
    }
    index
}

struct Step {
    rank: usize,
    derived_rank: usize,
    basis: Vec<Form>,
}

/// Settles one degree when the derivatives are independent modulo `p` up to
/// `bound`, a proven upper bound on the rank. The derivatives then span the
/// whole degree-`d` piece, so the generators of degree `d` add no socle.
fn modular_step(derived: &[Form], index: &BTreeMap<Exponent, usize>, bound: usize) -> Option<Step> {
    if bound == 0 || derived.is_empty() {
        return None;
    }
    let mut ech = ModEchelon::new(index.len());
    let mut basis = Vec::with_capacity(bound);
    for f in derived {
        if ech.insert(modp::row(&f.coefficient_row(index))?) {
            basis.push(f.clone());
            if ech.rank() == bound {
                break;
            }
        }
    }
    if ech.rank() < bound {
        return None;
    }
    if bound == index.len() {
        // The piece is spanned by the support monomials themselves, which keeps
        // the next degree's coefficients small.
        basis = index
            .keys()
            .map(|m| Form::monomial(m.clone(), BigRational::one()))
            .collect();
    }
    Some(Step {
        rank: bound,
        derived_rank: bound,
        basis,
    })
}

fn exact_step(candidates: Vec<Form>, derived: usize, index: &BTreeMap<Exponent, usize>) -> Step {
    let mut ech = Echelon::new(index.len());
    let mut basis = Vec::new();
    let mut derived_rank = 0;
    for (k, f) in candidates.into_iter().enumerate() {
        if ech.rank() == index.len() {
            break;
        }
        if ech.insert(integer_row(&f.coefficient_row(index))) {
            basis.push(f);
            if k < derived {
                derived_rank += 1;
            }
        }
    }
    Step {
        rank: ech.rank(),
        derived_rank,
        basis,
    }
}

impl InverseModule {
    /// Builds `<generators>`. All forms are moved into the largest variable
    /// count present; zero forms and dependent same-degree generators are rejected.
    pub fn new(generators: Vec<Form>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("an inverse module needs at least one generator"));
        }
        let num_vars = generators.iter().map(Form::num_vars).max().unwrap_or(1);
        let generators = generators
            .into_iter()
            .map(|g| g.embed(num_vars, 0))
            .collect::<Result<Vec<_>>>()?;
        if generators.iter().any(Form::is_zero) {
            return Err(Error::invalid("zero generator"));
        }
        let mut by_degree: BTreeMap<u32, Vec<&Form>> = BTreeMap::new();
        for g in &generators {
            by_degree.entry(g.degree()).or_default().push(g);
        }
        for (d, forms) in by_degree {
            let index = support_index(forms.iter().copied());
            let mut ech = Echelon::new(index.len());
            for f in &forms {
                if !ech.insert(integer_row(&f.coefficient_row(&index))) {
                    return Err(Error::invalid(format!(
                        "generators of degree {d} are linearly dependent"
                    )));
                }
            }
        }
        Ok(InverseModule {
            num_vars,
            generators,
        })
    }

    /// Parses one generator per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            raw.push((k + 1, body));
        }
        if raw.is_empty() {
            return Err(Error::parse(0, "no generators found"));
        }
        let mut forms = Vec::with_capacity(raw.len());
        for (line, body) in raw {
            forms.push(Form::parse(body, 'y', 0, line)?);
        }
        InverseModule::new(forms)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[Form] {
        &self.generators
    }

    pub fn max_degree(&self) -> u32 {
        self.generators.iter().map(Form::degree).max().unwrap_or(0)
    }

    /// Sweeps degrees from the top down. In degree `d` the derivatives of the
    /// basis of `M_{d+1}` are inserted first, then the generators of degree
    /// `d`; the generators that still add rank are the socle in degree `d`.
    pub fn analyze(&self) -> ModuleAnalysis {
        self.sweep(None)
    }

    /// Same as [`Self::analyze`], given a proven entrywise upper bound on the
    /// h-vector. Where the modular rank of the derivatives alone reaches the
    /// bound, the degree is settled without rational elimination.
    pub fn analyze_bounded(&self, upper: &HVector) -> ModuleAnalysis {
        self.sweep(Some(upper))
    }

    fn sweep(&self, upper: Option<&HVector>) -> ModuleAnalysis {
        let top = self.max_degree() as usize;
        let mut bases: Vec<Vec<Form>> = vec![Vec::new(); top + 1];
        let mut hv = vec![0u64; top + 1];
        let mut socle = vec![0u64; top + 1];
        let mut above: Vec<Form> = Vec::new();
        for d in (0..=top).rev() {
            let mut candidates: Vec<Form> = Vec::new();
            for f in &above {
                for v in 0..self.num_vars {
                    let df = f.derivative(v);
                    if !df.is_zero() {
                        candidates.push(df);
                    }
                }
            }
            let derived = candidates.len();
            candidates.extend(
                self.generators
                    .iter()
                    .filter(|g| g.degree() as usize == d)
                    .cloned(),
            );
            let index = support_index(candidates.iter());
            let bound = upper.map_or(index.len(), |u| (u.get(d) as usize).min(index.len()));
            let step = modular_step(&candidates[..derived], &index, bound)
                .unwrap_or_else(|| exact_step(candidates, derived, &index));
            hv[d] = step.rank as u64;
            socle[d] = (step.rank - step.derived_rank) as u64;
            bases[d] = step.basis.clone();
            above = step.basis;
        }
        ModuleAnalysis {
            hvector: HVector::new(hv).expect("a non-zero module has h_0 = 1"),
            socle: SocleVector::new(socle).expect("a non-zero module has a socle"),
            bases,
        }
    }

    pub fn hvector(&self) -> HVector {
        self.analyze().hvector
    }

    pub fn socle_vector(&self) -> SocleVector {
        self.analyze().socle
    }

    /// The graded piece `M_d` as a row-reduced matrix over all degree-`d` monomials.
    pub fn derivative_space(&self, d: u32) -> DerivativeSpace {
        let analysis = self.analyze();
        derivative_space_from(&analysis, self.num_vars, d)
    }

    /// Basis of `I_d`, where `I` is the annihilator of the module, as forms in
    /// the ring variables. Above the top degree `I_d` is all of `R_d`.
    pub fn annihilator_component(&self, d: u32) -> Vec<Form> {
        let analysis = self.analyze();
        annihilator_from(&analysis, self.num_vars, d)
    }
}

pub(crate) fn derivative_space_from(a: &ModuleAnalysis, num_vars: usize, d: u32) -> DerivativeSpace {
    let monomials = lex_monomials(num_vars, d as usize);
    let index: BTreeMap<Exponent, usize> = monomials
        .iter()
        .enumerate()
        .map(|(k, m)| (m.clone(), k))
        .collect();
    let mut ech = Echelon::new(monomials.len());
    if let Some(basis) = a.bases.get(d as usize) {
        for f in basis {
            ech.insert(integer_row(&f.coefficient_row(&index)));
        }
    }
    DerivativeSpace {
        degree: d,
        basis_rank: ech.rank(),
        monomials,
        basis: ech.rref(),
    }
}

/// `I_d` is the kernel of `p -> (p ∘ B)` over a basis `B` of `M_d`; for
/// `p = sum c_a x^a` and `B = sum b_a y^a` the pairing is `sum a! c_a b_a`.
pub(crate) fn annihilator_from(a: &ModuleAnalysis, num_vars: usize, d: u32) -> Vec<Form> {
    let monomials = lex_monomials(num_vars, d as usize);
    let weights: Vec<BigRational> = monomials
        .iter()
        .map(|m| BigRational::from_integer(exponent_factorial(m)))
        .collect();
    let mut ech = Echelon::new(monomials.len());
    if let Some(basis) = a.bases.get(d as usize) {
        for f in basis {
            let row: Vec<BigRational> = monomials
                .iter()
                .zip(&weights)
                .map(|(m, w)| f.coefficient(m) * w)
                .collect();
            ech.insert(integer_row(&row));
        }
    }
    ech.kernel()
        .into_iter()
        .map(|v| {
            let v = integer_row(&v);
            Form::from_terms(
                num_vars,
                d,
                monomials
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.clone(), BigRational::from_integer(c))),
            )
            .expect("kernel vectors live in degree d")
        })
        .collect()
}

pub fn hvector_of_module(m: &InverseModule) -> HVector {
    m.hvector()
}

pub fn socle_vector(m: &InverseModule) -> SocleVector {
    m.socle_vector()
}

pub fn annihilator_component(m: &InverseModule, d: u32) -> Vec<Form> {
    m.annihilator_component(d)
}

fn padded(h: &HVector, len: usize) -> Vec<i64> {
    let mut v = h.to_signed();
    v.resize(len, 0);
    v
}

/// Splits `h(<F, G>)` along the intersection `<F> ∩ <G>`, using
/// `dim N_d = dim <F>_d + dim <G>_d - dim <F, G>_d`.
pub fn three_part_decomposition(f: &Form, g: &Form) -> Result<ThreePartDecomposition> {
    if f.degree() != g.degree() {
        return Err(Error::invalid("forms must have the same degree"));
    }
    let both = InverseModule::new(vec![f.clone(), g.clone()])?;
    let r = both.num_vars();
    let hf = InverseModule::new(vec![f.embed(r, 0)?])?.hvector();
    let hg = InverseModule::new(vec![g.embed(r, 0)?])?.hvector();
    let h = both.hvector();
    let len = f.degree() as usize + 1;
    let (hf, hg, h) = (padded(&hf, len), padded(&hg, len), padded(&h, len));
    let shared: Vec<i64> = (0..len).map(|i| hf[i] + hg[i] - h[i]).collect();
    Ok(ThreePartDecomposition {
        only_f: (0..len).map(|i| hf[i] - shared[i]).collect(),
        only_g: (0..len).map(|i| hg[i] - shared[i]).collect(),
        shared,
    })
}

impl fmt::Display for InverseModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
