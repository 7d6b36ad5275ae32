use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::macaulay::lex_monomials;

pub type Exponent = Vec<u32>;

/// Homogeneous polynomial with exact rational coefficients.
///
/// The same type serves both sides of apolarity: forms in the dual variables
/// `y_i` (the inverse system) and forms in the ring variables `x_i` (ideal
/// generators). Only the printed variable letter differs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, BigRational>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `alpha! = prod alpha_i!`, the apolar pairing weight of `x^alpha` against `y^alpha`.
pub fn exponent_factorial(alpha: &[u32]) -> BigInt {
    alpha.iter().map(|&a| factorial(a)).product()
}

impl Form {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        Form {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff * y^exponent`.
    pub fn monomial(exponent: Exponent, coeff: BigRational) -> Self {
        let degree = exponent.iter().sum();
        let mut f = Form::zero(exponent.len(), degree);
        if !coeff.is_zero() {
            f.terms.insert(exponent, coeff);
        }
        f
    }

    /// Builds a form from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, BigRational)>,
    {
        let mut f = Form::zero(num_vars, degree);
        for (exp, c) in terms {
            if exp.len() != num_vars {
                return Err(Error::invalid(format!(
                    "exponent {exp:?} has {} entries, expected {num_vars}",
                    exp.len()
                )));
            }
            if exp.iter().sum::<u32>() != degree {
                return Err(Error::invalid(format!(
                    "exponent {exp:?} is not of degree {degree}"
                )));
            }
            f.add_term(exp, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, exp: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[u32]) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Partial derivative with respect to the variable with 0-based index `var`.
    /// The derivative of a degree-0 form is the zero form of degree 0.
    pub fn derivative(&self, var: usize) -> Form {
        assert!(var < self.num_vars, "variable index out of range");
        let mut out = Form::zero(self.num_vars, self.degree.saturating_sub(1));
        for (exp, c) in &self.terms {
            if exp[var] == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[var] -= 1;
            out.terms.insert(e, c * rat(exp[var] as i64));
        }
        out
    }

    /// Partial derivative `d/dy_{var_index}` with a 1-based index.
    pub fn differentiate(&self, var_index: usize) -> Result<Form> {
        if var_index == 0 || var_index > self.num_vars {
            return Err(Error::invalid(format!(
                "variable index {var_index} outside 1..={}",
                self.num_vars
            )));
        }
        Ok(self.derivative(var_index - 1))
    }

    /// Multiplication by the variable with 0-based index `var`.
    pub fn mul_var(&self, var: usize) -> Form {
        let mut out = Form::zero(self.num_vars, self.degree + 1);
        for (exp, c) in &self.terms {
            let mut e = exp.clone();
            e[var] += 1;
            out.terms.insert(e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Form {
        let mut out = Form::zero(self.num_vars, self.degree);
        if c.is_zero() {
            return out;
        }
        for (exp, v) in &self.terms {
            out.terms.insert(exp.clone(), v * c);
        }
        out
    }

    /// `self + other`; both must live in the same ring and degree.
    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.num_vars != other.num_vars {
            return Err(Error::invalid("forms in different numbers of variables"));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::invalid("forms of different degrees"));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = self.clone();
        out.degree = degree;
        for (exp, c) in &other.terms {
            out.add_term(exp.clone(), c.clone());
        }
        Ok(out)
    }

    /// The same polynomial viewed in `num_vars` variables, with its variables
    /// shifted to start at 0-based index `offset`.
    pub fn embed(&self, num_vars: usize, offset: usize) -> Result<Form> {
        if offset + self.num_vars > num_vars {
            return Err(Error::invalid(format!(
                "cannot place a form in {} variables at offset {offset} of {num_vars}",
                self.num_vars
            )));
        }
        let mut out = Form::zero(num_vars, self.degree);
        for (exp, c) in &self.terms {
            let mut e = vec![0u32; num_vars];
            e[offset..offset + self.num_vars].copy_from_slice(exp);
            out.terms.insert(e, c.clone());
        }
        Ok(out)
    }

    /// `(sum_k b_k y_k)^d`, expanded with multinomial coefficients.
    pub fn linear_power(coeffs: &[BigRational], d: u32) -> Form {
        let r = coeffs.len();
        let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(r);
        for b in coeffs {
            let mut p = vec![BigRational::one()];
            for k in 1..=d as usize {
                let next = &p[k - 1] * b;
                p.push(next);
            }
            powers.push(p);
        }
        let d_fact = factorial(d);
        let mut out = Form::zero(r, d);
        for exp in lex_monomials(r, d as usize) {
            let mut c = BigRational::from_integer(&d_fact / exponent_factorial(&exp));
            for (k, &a) in exp.iter().enumerate() {
                c *= &powers[k][a as usize];
            }
            if !c.is_zero() {
                out.terms.insert(exp, c);
            }
        }
        out
    }

    /// Coefficients listed against `monomials`; monomials outside the list
    /// must not occur in the form.
    pub(crate) fn coefficient_row(&self, index: &BTreeMap<Exponent, usize>) -> Vec<BigRational> {
        let mut row = vec![BigRational::zero(); index.len()];
        for (exp, c) in &self.terms {
            row[index[exp]] = c.clone();
        }
        row
    }

    /// Prints the form with variables named `<letter>1, <letter>2, ...`.
    pub fn display_with(&self, letter: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Lexicographically largest monomial first.
        for (idx, (exp, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let is_constant = exp.iter().all(|&a| a == 0);
            if !abs.is_one() || is_constant {
                factors.push(abs.to_string());
            }
            for (k, &a) in exp.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("{letter}{}", k + 1)),
                    _ => factors.push(format!("{letter}{}^{a}", k + 1)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses one form in the text grammar, e.g. `3/2*y1^2*y2 - y3^3`.
    ///
    /// `letter` is the expected variable letter (`y` for inverse systems,
    /// `x` for ideals). The form lives in `max(num_vars, largest index used)`
    /// variables. `line` is only used in error messages.
    pub fn parse(text: &str, letter: char, num_vars: usize, line: usize) -> Result<Form> {
        let parsed = parse_terms(text, letter, line)?;
        let used = parsed
            .iter()
            .flat_map(|(vars, _)| vars.iter().map(|(v, _)| *v))
            .max()
            .unwrap_or(0);
        let r = num_vars.max(used).max(1);
        let mut degree = None;
        let mut terms = Vec::new();
        for (vars, c) in parsed {
            let mut exp = vec![0u32; r];
            for (v, a) in vars {
                exp[v - 1] += a;
            }
            let d: u32 = exp.iter().sum();
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::parse(
                        line,
                        format!("terms of degrees {prev} and {d} in one form"),
                    ))
                }
                _ => {}
            }
            terms.push((exp, c));
        }
        Form::from_terms(r, degree.unwrap_or(0), terms)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with('y'))
    }
}

type ParsedTerm = (Vec<(usize, u32)>, BigRational);

fn parse_terms(text: &str, letter: char, line: usize) -> Result<Vec<ParsedTerm>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::parse(line, "empty form"));
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    for ch in compact.chars() {
        if ch == '+' || ch == '-' {
            if current.is_empty() {
                if !pieces.is_empty() || negative {
                    // A sign directly after another sign.
                    if ch == '-' {
                        negative = !negative;
                    }
                    continue;
                }
                negative = ch == '-';
                continue;
            }
            pieces.push((negative, std::mem::take(&mut current)));
            negative = ch == '-';
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(Error::parse(line, "form ends with a dangling sign"));
    }
    pieces.push((negative, current));

    let mut out = Vec::with_capacity(pieces.len());
    for (neg, piece) in pieces {
        let mut coeff = BigRational::one();
        let mut vars = Vec::new();
        for (idx, factor) in piece.split('*').enumerate() {
            if factor.is_empty() {
                return Err(Error::parse(line, format!("empty factor in term {piece:?}")));
            }
            let first = factor.chars().next().unwrap();
            if first.is_ascii_digit() {
                if idx != 0 {
                    return Err(Error::parse(
                        line,
                        format!("coefficient {factor:?} must lead its term"),
                    ));
                }
                coeff = parse_coefficient(factor, line)?;
            } else if first == letter {
                vars.push(parse_variable(factor, letter, line)?);
            } else {
                return Err(Error::parse(
                    line,
                    format!("unexpected factor {factor:?}; variables are {letter}1, {letter}2, ..."),
                ));
            }
        }
        if neg {
            coeff = -coeff;
        }
        out.push((vars, coeff));
    }
    Ok(out)
}

fn parse_coefficient(s: &str, line: usize) -> Result<BigRational> {
    let bad = || Error::parse(line, format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::parse(line, "zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_variable(s: &str, letter: char, line: usize) -> Result<(usize, u32)> {
    let bad = || Error::parse(line, format!("bad variable {s:?}"));
    let rest = &s[letter.len_utf8()..];
    let (idx, exp) = match rest.split_once('^') {
        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad())?),
        None => (rest, 1),
    };
    let idx: usize = idx.parse().map_err(|_| bad())?;
    if idx == 0 {
        return Err(Error::parse(line, format!("variables are numbered from 1 in {s:?}")));
    }
    Ok((idx, exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn y(text: &str, r: usize) -> Form {
        Form::parse(text, 'y', r, 1).unwrap()
    }

    #[test]
    fn derivatives() {
        assert_eq!(y("y1^2*y2", 2).differentiate(1).unwrap(), y("2*y1*y2", 2));
        assert!(y("y3^4", 3).differentiate(1).unwrap().is_zero());
        assert_eq!(y("y1*y3^3", 3).differentiate(3).unwrap(), y("3*y1*y3^2", 3));
        let c = y("5", 2);
        assert_eq!(c.degree(), 0);
        assert!(c.derivative(0).is_zero());
        assert!(y("y1", 1).differentiate(2).is_err());
    }

    #[test]
    fn grammar_round_trip() {
        let f = y("3/2*y1^2*y2 - y3^3", 3);
        assert_eq!(f.degree(), 3);
        assert_eq!(f.coefficient(&[2, 1, 0]), BigRational::new(3.into(), 2.into()));
        assert_eq!(f.coefficient(&[0, 0, 3]), rat(-1));
        assert_eq!(y(&f.to_string(), 3), f);
        assert_eq!(y("y1*y1", 1), y("y1^2", 1));
        assert_eq!(y("-y1 + y1", 1), Form::zero(1, 1));
        assert_eq!(f.to_string(), "3/2*y1^2*y2 - y3^3");
    }

    #[test]
    fn grammar_errors() {
        for bad in ["", "y1 +", "y1^x", "2*3", "y1*2", "z1", "y0", "y1^2 + y2", "1/0*y1"] {
            assert!(Form::parse(bad, 'y', 0, 7).is_err(), "{bad:?} should not parse");
        }
        match Form::parse("y1 + q", 'y', 0, 7) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn linear_power_expands_multinomially() {
        let f = Form::linear_power(&[rat(1), rat(2)], 2);
        assert_eq!(f, y("y1^2 + 4*y1*y2 + 4*y2^2", 2));
        let g = Form::linear_power(&[rat(0), rat(0), rat(1)], 3);
        assert_eq!(g, y("y3^3", 3));
    }

    #[test]
    fn embedding_shifts_variables() {
        let f = y("y1^2*y2", 2).embed(4, 2).unwrap();
        assert_eq!(f, y("y3^2*y4", 4));
        assert!(y("y1", 2).embed(2, 1).is_err());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(
            terms in proptest::collection::vec(((0u32..4, 0u32..4), -20i64..20, 1i64..6), 1..6),
        ) {
            let f = Form::from_terms(3, 6, terms.iter().map(|((a, b), p, q)| {
                (vec![*a, *b, 6 - a - b], BigRational::new((*p).into(), (*q).into()))
            })).unwrap();
            let text = f.to_string();
            if f.is_zero() {
                prop_assert_eq!(text, "0");
            } else {
                prop_assert_eq!(Form::parse(&text, 'y', 3, 1).unwrap(), f);
            }
        }

        #[test]
        fn derivatives_commute(
            terms in proptest::collection::vec(((0u32..5, 0u32..5), -9i64..9), 1..6),
        ) {
            let f = Form::from_terms(3, 8, terms.iter().map(|((a, b), p)| {
                (vec![*a, *b, 8 - a - b], rat(*p))
            })).unwrap();
            prop_assert_eq!(f.derivative(0).derivative(2), f.derivative(2).derivative(0));
        }
    }
}
