//! Multivariate polynomials with exact rational coefficients over a named parameter alphabet.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, is_unit, Rational};
use crate::error::{Error, Result};

/// Ordered list of parameter names, e.g. `d1, d2, d3`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Alphabet(names.into_iter().map(Into::into).collect())
    }

    /// `prefix1, ..., prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Alphabet::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(","))
    }
}

pub type Exponents = Vec<u32>;

/// A polynomial in the parameters of an [`Alphabet`]. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamPoly {
    alphabet: Alphabet,
    terms: BTreeMap<Exponents, Rational>,
}

impl ParamPoly {
    pub fn zero(alphabet: &Alphabet) -> Self {
        ParamPoly { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alphabet: &Alphabet) -> Self {
        Self::constant(alphabet, Rational::one())
    }

    pub fn constant(alphabet: &Alphabet, c: Rational) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(vec![0; alphabet.len()], c);
        p
    }

    /// The parameter with 1-based index `index` (so `param(d, 2)` is `d2`).
    pub fn param(alphabet: &Alphabet, index: usize) -> Self {
        assert!(index >= 1 && index <= alphabet.len(), "parameter index {index} out of range");
        let mut e = vec![0; alphabet.len()];
        e[index - 1] = 1;
        let mut p = Self::zero(alphabet);
        p.add_term(e, Rational::one());
        p
    }

    pub fn from_terms(alphabet: &Alphabet, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(alphabet);
        for (e, c) in terms {
            assert_eq!(e.len(), alphabet.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&vec![0; self.alphabet.len()]).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_alphabet(&self, other: &ParamPoly) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: format!("{:?}", self.alphabet),
                right: format!("{:?}", other.alphabet),
            })
        }
    }

    pub fn checked_add(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_alphabet(other)?;
        let mut out = ParamPoly::zero(&self.alphabet);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> ParamPoly {
        if q.is_zero() {
            return ParamPoly::zero(&self.alphabet);
        }
        ParamPoly {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    fn neg_ref(&self) -> ParamPoly {
        self.scale(&-Rational::one())
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut acc = ParamPoly::one(&self.alphabet);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest exponent of the parameter at 0-based position `var`.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.degree_in(var) > 0
    }

    /// Coefficient of `x_var^power` viewed as a polynomial in the remaining parameters.
    pub fn coefficient_of(&self, var: usize, power: u32) -> ParamPoly {
        let mut out = ParamPoly::zero(&self.alphabet);
        for (e, c) in &self.terms {
            if e[var] == power {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Largest weighted degree `sum weights[i] * e[i]` over the terms (`None` for the zero polynomial).
    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum()).max()
    }

    /// `Some(deg)` when every term has the same weighted degree.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Substitutes `images[i]` for the `i`-th parameter. All images share one target alphabet.
    pub fn substitute(&self, images: &[ParamPoly]) -> Result<ParamPoly> {
        assert_eq!(images.len(), self.alphabet.len(), "one image per parameter");
        let target = images.first().map(|p| p.alphabet.clone()).unwrap_or_else(|| self.alphabet.clone());
        for p in images {
            if p.alphabet != target {
                return Err(Error::AlphabetMismatch {
                    left: format!("{:?}", target),
                    right: format!("{:?}", p.alphabet),
                });
            }
        }
        // powers[i][k] = images[i]^k, built lazily
        let mut powers: Vec<Vec<ParamPoly>> = images.iter().map(|_| vec![ParamPoly::one(&target)]).collect();
        let mut out = ParamPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut term = ParamPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Fixes some parameters to rational values, keeping the alphabet.
    pub fn assign(&self, values: &[(usize, Rational)]) -> ParamPoly {
        let mut out = ParamPoly::zero(&self.alphabet);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for (var, val) in values {
                let k = e2[*var];
                if k > 0 {
                    c2 *= num_traits::pow(val.clone(), k as usize);
                    e2[*var] = 0;
                }
            }
            out.add_term(e2, c2);
        }
        out
    }

    /// Same terms, read in a different alphabet of equal length.
    pub fn relabel(&self, alphabet: &Alphabet) -> ParamPoly {
        assert_eq!(alphabet.len(), self.alphabet.len());
        ParamPoly { alphabet: alphabet.clone(), terms: self.terms.clone() }
    }

    /// Same terms in an alphabet of a different length, matched by position.
    ///
    /// `None` when a parameter that does not exist in `alphabet` is used.
    pub fn embed(&self, alphabet: &Alphabet) -> Option<ParamPoly> {
        let n = alphabet.len();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.iter().skip(n).any(|&k| k > 0) {
                return None;
            }
            let mut e2 = e.clone();
            e2.resize(n, 0);
            terms.insert(e2, c.clone());
        }
        Some(ParamPoly { alphabet: alphabet.clone(), terms })
    }

    /// Terms in printing order: highest-index parameter exponent first, descending.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| print_order(a.0, b.0));
        v
    }

    fn format_monomial(&self, e: &Exponents) -> String {
        let mut parts = Vec::new();
        for (name, &k) in self.alphabet.names().iter().zip(e) {
            match k {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{k}")),
            }
        }
        // higher-index parameters first, matching term order
        parts.reverse();
        parts.join("*")
    }

    /// LaTeX rendering, e.g. `\frac{3}{2} c_{1}^{2} + \frac{3}{2} c_{1}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = self
                .alphabet
                .names()
                .iter()
                .zip(e.iter())
                .rev()
                .filter(|(_, &k)| k > 0)
                .map(|(name, &k)| {
                    let (stem, idx) = split_name(name);
                    let base = format!("{}_{{{}}}", latex_stem(stem), idx);
                    if k == 1 {
                        base
                    } else {
                        format!("{base}^{{{k}}}")
                    }
                })
                .collect();
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            if mono.is_empty() {
                out.push_str(&coef);
            } else {
                if !is_unit(&a) {
                    out.push_str(&coef);
                    out.push(' ');
                }
                out.push_str(&mono.join(" "));
            }
        }
        out
    }
}

fn split_name(name: &str) -> (&str, &str) {
    let pos = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    name.split_at(pos)
}

fn latex_stem(stem: &str) -> String {
    match stem {
        "sigma" | "rho" => format!("\\{stem}"),
        s => s.to_string(),
    }
}

fn print_order(a: &Exponents, b: &Exponents) -> Ordering {
    // reverse-lexicographic on the reversed vector: larger exponent of the last parameter first
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match y.cmp(x) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = self.format_monomial(e);
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if is_unit(&a) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &'a ParamPoly) -> ParamPoly {
        self.checked_add(rhs).expect("alphabet mismatch in ParamPoly addition")
    }
}

impl<'a> Sub<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &'a ParamPoly) -> ParamPoly {
        self.checked_sub(rhs).expect("alphabet mismatch in ParamPoly subtraction")
    }
}

impl<'a> Mul<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &'a ParamPoly) -> ParamPoly {
        self.checked_mul(rhs).expect("alphabet mismatch in ParamPoly multiplication")
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.neg_ref()
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn c() -> Alphabet {
        Alphabet::indexed("c", 3)
    }

    #[test]
    fn distributivity_example() {
        let c1 = ParamPoly::param(&c(), 1);
        let p = &c1 * &(&c1 + &ParamPoly::one(&c()));
        assert_eq!(p.to_string(), "c1^2 + c1");
    }

    #[test]
    fn substitution_example() {
        // (3/2) c2 + 3 c1 with c1 = d1/3, c2 = c2
        let d = Alphabet::new(["d1", "c2", "c3"]);
        let p = &ParamPoly::param(&c(), 2).scale(&ratio(3, 2)) + &ParamPoly::param(&c(), 1).scale(&rat(3));
        let images =
            vec![ParamPoly::param(&d, 1).scale(&ratio(1, 3)), ParamPoly::param(&d, 2), ParamPoly::param(&d, 3)];
        let q = p.substitute(&images).unwrap();
        assert_eq!(q.to_string(), "3/2*c2 + d1");
    }

    #[test]
    fn annihilator() {
        let p = &ParamPoly::param(&c(), 2) + &ParamPoly::constant(&c(), rat(5));
        assert!((&p * &ParamPoly::zero(&c())).is_zero());
        assert_eq!((&p * &ParamPoly::zero(&c())).to_string(), "0");
    }

    #[test]
    fn mismatch_is_an_error() {
        let d = Alphabet::indexed("d", 3);
        let err = ParamPoly::param(&c(), 1).checked_add(&ParamPoly::param(&d, 1));
        assert!(matches!(err, Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn canonical_printing() {
        let a = c();
        let c1 = ParamPoly::param(&a, 1);
        let p = &(&ParamPoly::param(&a, 3).scale(&rat(4)) - &c1.pow(2).scale(&rat(2))) - &c1.scale(&rat(2));
        assert_eq!(p.to_string(), "4*c3 - 2*c1^2 - 2*c1");
        let q =
            &(&ParamPoly::param(&a, 3) - &ParamPoly::param(&a, 2).scale(&ratio(3, 4))) - &c1.pow(2).scale(&ratio(3, 2));
        assert_eq!(q.to_string(), "c3 - 3/4*c2 - 3/2*c1^2");
        assert_eq!((-&c1).to_string(), "-c1");
        assert_eq!(ParamPoly::constant(&a, ratio(-1, 2)).to_string(), "-1/2");
        assert_eq!((&c1 * &ParamPoly::param(&a, 2)).to_latex(), "c_{2} c_{1}");
    }

    #[test]
    fn assignment() {
        let a = c();
        let p = &ParamPoly::param(&a, 1).pow(2) + &ParamPoly::param(&a, 2);
        let q = p.assign(&[(0, rat(3))]);
        assert_eq!(q.to_string(), "c2 + 9");
    }
}
