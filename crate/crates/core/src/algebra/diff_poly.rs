//! Differential polynomials in the jet variables `v_a^{(k)}`.
//!
//! A jet variable `v_a^{(k)}` is the `k`-th x-derivative of the `a`-th dependent variable and
//! carries degree `a + 1 + k`. The total x-derivative acts by the Leibniz rule with
//! `v_a^{(k)} -> v_a^{(k+1)}`; [`DiffPoly::integrate_x`] inverts it on exact elements.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::param_poly::{Alphabet, ParamPoly};
use super::rational::{format_rational, is_unit, rat, Rational};
use crate::error::{Error, Result};

/// The jet variable `v_alpha^{(order)}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Jet {
    pub alpha: u16,
    pub order: u16,
}

impl Jet {
    pub fn new(alpha: u16, order: u16) -> Self {
        assert!(alpha >= 1, "jet variables are indexed from 1");
        Jet { alpha, order }
    }

    pub fn degree(self) -> i64 {
        self.alpha as i64 + 1 + self.order as i64
    }

    fn shifted(self) -> Jet {
        Jet { alpha: self.alpha, order: self.order + 1 }
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 0 {
            write!(f, "v{}", self.alpha)
        } else {
            write!(f, "v{}[{}]", self.alpha, self.order)
        }
    }
}

/// A product of jet variables, stored as `(jet, exponent)` pairs sorted by jet.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct JetMonomial(Vec<(Jet, u32)>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(Vec::new())
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Jet, u32)>) -> Self {
        let mut m = JetMonomial::one();
        for (j, e) in factors {
            m = m.mul(&JetMonomial(vec![(j, e)]));
        }
        m
    }

    pub fn factors(&self) -> &[(Jet, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(j, e)| j.degree() * *e as i64).sum()
    }

    pub fn exponent(&self, jet: Jet) -> u32 {
        self.0.binary_search_by(|(j, _)| j.cmp(&jet)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn max_order(&self) -> Option<u16> {
        self.0.iter().map(|(j, _)| j.order).max()
    }

    pub fn mul(&self, other: &JetMonomial) -> JetMonomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut k) = (0, 0);
        while i < a.len() && k < b.len() {
            match a[i].0.cmp(&b[k].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[k]);
                    k += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[k].1));
                    i += 1;
                    k += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[k..]);
        JetMonomial(out)
    }

    /// Changes the exponent of `jet` by `delta`, which must not make it negative.
    fn bump(&self, jet: Jet, delta: i32) -> JetMonomial {
        let mut v = self.0.clone();
        match v.binary_search_by(|(j, _)| j.cmp(&jet)) {
            Ok(i) => {
                let e = v[i].1 as i32 + delta;
                assert!(e >= 0);
                if e == 0 {
                    v.remove(i);
                } else {
                    v[i].1 = e as u32;
                }
            }
            Err(i) => {
                assert!(delta > 0);
                v.insert(i, (jet, delta as u32));
            }
        }
        JetMonomial(v)
    }
}

impl Ord for JetMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded, then lexicographic on (jet, exponent) pairs
        other.degree().cmp(&self.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for JetMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(j, e)| if *e == 1 { j.to_string() } else { format!("{j}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of the differential polynomial ring with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<JetMonomial, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(JetMonomial::one(), c);
        p
    }

    /// The jet variable `v_alpha^{(order)}`.
    pub fn var(alpha: u16, order: u16) -> Self {
        Self::monomial(JetMonomial(vec![(Jet::new(alpha, order), 1)]), Rational::one())
    }

    pub fn monomial(m: JetMonomial, c: Rational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&JetMonomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &JetMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: JetMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_assign_ref(&mut self, other: &DiffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += q * other`.
    pub fn add_scaled(&mut self, other: &DiffPoly, q: &Rational) {
        if q.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * q);
        }
    }

    pub fn scale(&self, q: &Rational) -> DiffPoly {
        if q.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn mul_ref(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Every jet variable that occurs.
    pub fn jets(&self) -> BTreeSet<Jet> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(j, _)| *j)).collect()
    }

    pub fn max_order(&self) -> Option<u16> {
        self.terms.keys().filter_map(JetMonomial::max_order).max()
    }

    /// Total x-derivative.
    pub fn diff_x(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for &(j, e) in &m.0 {
                let m2 = m.bump(j, -1).bump(j.shifted(), 1);
                out.add_term(m2, c * rat(e as i64));
            }
        }
        out
    }

    /// `n`-fold total x-derivative.
    pub fn diff_x_n(&self, n: usize) -> DiffPoly {
        (0..n).fold(self.clone(), |p, _| p.diff_x())
    }

    /// Partial derivative with respect to one jet variable.
    pub fn partial(&self, jet: Jet) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(jet);
            if e > 0 {
                out.add_term(m.bump(jet, -1), c * rat(e as i64));
            }
        }
        out
    }

    /// Formal antiderivative in a single jet variable (treating all others as constants).
    fn antiderivative_in(&self, jet: Jet) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(jet);
            out.add_term(m.bump(jet, 1), c / rat(e as i64 + 1));
        }
        out
    }

    /// Inverse of [`DiffPoly::diff_x`] with zero integration constant.
    ///
    /// Works by peeling the highest-order jets: an exact element is linear in the jets of
    /// top order `m`, and the coefficient of `v_a^{(m)}` is the `v_a^{(m-1)}`-gradient of
    /// the antiderivative.
    pub fn integrate_x(&self) -> Result<DiffPoly> {
        let mut rest = self.clone();
        let mut primitive = DiffPoly::zero();
        while let Some(m) = rest.max_order() {
            if m == 0 {
                break;
            }
            let top: BTreeSet<Jet> = rest.jets().into_iter().filter(|j| j.order == m).collect();
            for jet in top {
                let below = Jet::new(jet.alpha, m - 1);
                let mut coeff = DiffPoly::zero();
                for (mono, c) in &rest.terms {
                    let e = mono.exponent(jet);
                    if e == 0 {
                        continue;
                    }
                    let top_degree: u32 = mono.0.iter().filter(|(j, _)| j.order == m).map(|(_, e)| e).sum();
                    if top_degree != 1 {
                        return Err(Error::NotExact(self.to_string()));
                    }
                    coeff.add_term(mono.bump(jet, -1), c.clone());
                }
                let piece = coeff.antiderivative_in(below);
                rest = &rest - &piece.diff_x();
                primitive.add_assign_ref(&piece);
            }
            if rest.max_order() == Some(m) {
                return Err(Error::NotExact(self.to_string()));
            }
        }
        if !rest.is_zero() {
            return Err(Error::NotExact(self.to_string()));
        }
        Ok(primitive)
    }

    /// Common degree of all terms, with `deg v_a^{(k)} = a + 1 + k`.
    pub fn grading(&self) -> Result<i64> {
        let degs: BTreeSet<i64> = self.terms.keys().map(JetMonomial::degree).collect();
        match degs.len() {
            0 => Ok(0),
            1 => Ok(*degs.iter().next().unwrap()),
            _ => Err(Error::NotHomogeneous(degs)),
        }
    }

    /// Evaluates every jet variable through `value`, producing a parameter polynomial.
    pub fn evaluate(&self, alphabet: &Alphabet, value: impl Fn(Jet) -> ParamPoly) -> ParamPoly {
        let mut cache: HashMap<(Jet, u32), ParamPoly> = HashMap::new();
        let mut out = ParamPoly::zero(alphabet);
        for (m, c) in &self.terms {
            let mut term = ParamPoly::constant(alphabet, c.clone());
            for &(j, e) in &m.0 {
                let f = cache.entry((j, e)).or_insert_with(|| value(j).pow(e));
                term = &term * f;
            }
            out = &out + &term;
        }
        out
    }

    /// Replaces jets by rational values.
    pub fn evaluate_rational(&self, value: impl Fn(Jet) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(j, e) in &m.0 {
                t *= num_traits::pow(value(j), e as usize);
            }
            total += t;
        }
        total
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else if is_unit(&a) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &'a DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &'a DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl<'a> Mul<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &'a DiffPoly) -> DiffPoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Rational::one())
    }
}
