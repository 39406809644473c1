//! Weight-truncated power series in the GD times and the correlator tables read off from them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::multiset::{multisets_up_to, Multiset};
use crate::algebra::{rat, Alphabet, ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::params::Params;

/// A power series `sum_I a_I t^I` over the GD times, exact for every monomial of weight `<= weight_cap`.
///
/// Coefficients are Taylor coefficients: `a_I = ∂^I F|_0 / prod(mult!)`.
#[derive(Clone, PartialEq, Eq)]
pub struct TauSeries {
    r: u32,
    weight_cap: u32,
    params: Params,
    alphabet: Alphabet,
    coeffs: BTreeMap<Multiset, ParamPoly>,
}

impl TauSeries {
    pub fn zero(r: u32, weight_cap: u32, params: Params) -> Self {
        TauSeries { r, weight_cap, params, alphabet: params.alphabet(r), coeffs: BTreeMap::new() }
    }

    pub fn one(r: u32, weight_cap: u32, params: Params) -> Self {
        let mut s = Self::zero(r, weight_cap, params);
        s.set(Multiset::empty(), ParamPoly::one(&s.alphabet));
        s
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn coeff(&self, m: &Multiset) -> ParamPoly {
        self.coeffs.get(m).cloned().unwrap_or_else(|| ParamPoly::zero(&self.alphabet))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Multiset, &ParamPoly)> {
        self.coeffs.iter()
    }

    /// Sets a coefficient; monomials beyond the weight cap are ignored.
    pub fn set(&mut self, m: Multiset, value: ParamPoly) {
        assert_eq!(value.alphabet(), &self.alphabet, "coefficient alphabet");
        if m.weight() > self.weight_cap {
            return;
        }
        if value.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, value);
        }
    }

    pub fn add_to(&mut self, m: Multiset, value: &ParamPoly) {
        let cur = self.coeff(&m);
        self.set(m, &cur + value);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, weight_cap: u32) -> TauSeries {
        let mut out = TauSeries::zero(self.r, weight_cap.min(self.weight_cap), self.params);
        for (m, c) in &self.coeffs {
            out.set(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TauSeries) -> Result<TauSeries> {
        self.check_compatible(other)?;
        let mut out = self.truncate(other.weight_cap);
        for (m, c) in &other.coeffs {
            out.add_to(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn scale(&self, p: &ParamPoly) -> TauSeries {
        let mut out = TauSeries::zero(self.r, self.weight_cap, self.params);
        for (m, c) in &self.coeffs {
            out.set(m.clone(), c * p);
        }
        out
    }

    fn check_compatible(&self, other: &TauSeries) -> Result<()> {
        if self.alphabet != other.alphabet || self.r != other.r {
            return Err(Error::AlphabetMismatch {
                left: format!("r={} {:?}", self.r, self.alphabet),
                right: format!("r={} {:?}", other.r, other.alphabet),
            });
        }
        Ok(())
    }

    /// Rewrites every coefficient through `images` (one polynomial per current parameter).
    pub fn substitute(&self, params: Params, images: &[ParamPoly]) -> Result<TauSeries> {
        let mut out = TauSeries::zero(self.r, self.weight_cap, params);
        for (m, c) in &self.coeffs {
            out.set(m.clone(), c.substitute(images)?);
        }
        Ok(out)
    }

    /// `exp(self)`; the constant term must vanish.
    ///
    /// Uses `E exp(F) = E(F) exp(F)` for the weight operator `E = sum i t_i ∂_i`, which
    /// determines each coefficient from strictly lighter ones.
    pub fn exp(&self) -> TauSeries {
        assert!(self.coeff(&Multiset::empty()).is_zero(), "exp needs a vanishing constant term");
        let mut out = TauSeries::one(self.r, self.weight_cap, self.params);
        for mu in multisets_up_to(self.r, self.weight_cap) {
            let mut acc = ParamPoly::zero(&self.alphabet);
            for nu in mu.sub_multisets() {
                if nu.is_empty() {
                    continue;
                }
                let Some(f) = self.coeffs.get(&nu) else { continue };
                let rest = mu.difference(&nu).unwrap();
                let Some(g) = out.coeffs.get(&rest) else { continue };
                acc = &acc + &(f * g).scale(&rat(nu.weight() as i64));
            }
            let w = Rational::one() / rat(mu.weight() as i64);
            out.set(mu, acc.scale(&w));
        }
        out
    }

    /// `log(self)`; the constant term must be 1.
    pub fn log(&self) -> TauSeries {
        assert_eq!(self.coeff(&Multiset::empty()), ParamPoly::one(&self.alphabet), "log needs constant term 1");
        let mut out = TauSeries::zero(self.r, self.weight_cap, self.params);
        for mu in multisets_up_to(self.r, self.weight_cap) {
            let mut acc = self.coeff(&mu).scale(&rat(mu.weight() as i64));
            for nu in mu.sub_multisets() {
                if nu.is_empty() || nu == mu {
                    continue;
                }
                let Some(f) = out.coeffs.get(&nu) else { continue };
                let rest = mu.difference(&nu).unwrap();
                let Some(g) = self.coeffs.get(&rest) else { continue };
                acc = &acc - &(f * g).scale(&rat(nu.weight() as i64));
            }
            let w = Rational::one() / rat(mu.weight() as i64);
            out.set(mu, acc.scale(&w));
        }
        out
    }

    /// Constant `d_1/r` of the string equation, written in this series' alphabet.
    pub fn string_constant(&self) -> ParamPoly {
        let p1 = ParamPoly::param(&self.alphabet, 1);
        match self.params {
            Params::D => p1.scale(&Rational::new(1.into(), (self.r as i64).into())),
            _ => p1,
        }
    }

    /// `sum_i i (t_i - δ_{i,1}) ∂τ/∂t_i + (d_1/r) τ`, exact through weight `weight_cap - 1`.
    pub fn string_residual(&self) -> TauSeries {
        let cap = self.weight_cap.saturating_sub(1);
        let s = self.string_constant();
        let mut out = TauSeries::zero(self.r, cap, self.params);
        if self.weight_cap == 0 {
            return out;
        }
        let mut monomials = vec![Multiset::empty()];
        monomials.extend(multisets_up_to(self.r, cap));
        for mu in monomials {
            let c = self.coeff(&mu);
            let w = ParamPoly::constant(&self.alphabet, rat(mu.weight() as i64));
            let mut v = &(&w + &s) * &c;
            let up = mu.with(1);
            v = &v - &self.coeff(&up).scale(&rat(up.count(1) as i64));
            out.set(mu, v);
        }
        out
    }

    /// Correlators `∂^I F|_0` for every nonempty monomial.
    pub fn to_correlators(&self, kind: CorrelatorKind) -> CorrelatorTable {
        let mut table = CorrelatorTable::new(self.r, self.weight_cap, kind, self.params);
        for mu in multisets_up_to(self.r, self.weight_cap) {
            let v = self.coeff(&mu).scale(&mu.symmetry_factor());
            table.insert(mu, v);
        }
        table
    }
}

impl fmt::Debug for TauSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TauSeries(r={}, cap={}, {})", self.r, self.weight_cap, self.params)?;
        for (m, c) in &self.coeffs {
            writeln!(f, "  [{m}] {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorrelatorKind {
    /// Derivatives of `log τ`.
    Connected,
    /// Derivatives of `τ`.
    Disconnected,
}

impl CorrelatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrelatorKind::Connected => "connected",
            CorrelatorKind::Disconnected => "disconnected",
        }
    }
}

/// Correlators `<τ_{i_1} ... τ_{i_k}>` of one kind, for all nonempty multisets up to a weight.
#[derive(Clone, PartialEq, Eq)]
pub struct CorrelatorTable {
    r: u32,
    weight: u32,
    kind: CorrelatorKind,
    params: Params,
    alphabet: Alphabet,
    entries: BTreeMap<Multiset, ParamPoly>,
}

impl CorrelatorTable {
    pub fn new(r: u32, weight: u32, kind: CorrelatorKind, params: Params) -> Self {
        CorrelatorTable { r, weight, kind, params, alphabet: params.alphabet(r), entries: BTreeMap::new() }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn kind(&self) -> CorrelatorKind {
        self.kind
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn insert(&mut self, m: Multiset, value: ParamPoly) {
        assert!(!m.is_empty(), "the empty correlator is fixed by the kind");
        assert_eq!(value.alphabet(), &self.alphabet);
        self.entries.insert(m, value);
    }

    /// The stored value; `<∅>` is 1 for disconnected and 0 for connected tables.
    pub fn get(&self, m: &Multiset) -> Option<ParamPoly> {
        if m.is_empty() {
            return Some(match self.kind {
                CorrelatorKind::Disconnected => ParamPoly::one(&self.alphabet),
                CorrelatorKind::Connected => ParamPoly::zero(&self.alphabet),
            });
        }
        self.entries.get(m).cloned()
    }

    pub fn value(&self, indices: &[u32]) -> Option<ParamPoly> {
        self.get(&Multiset::new(indices.to_vec()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Multiset, &ParamPoly)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The generating series: `log τ` for connected tables, `τ` for disconnected ones.
    pub fn to_series(&self) -> TauSeries {
        let mut s = match self.kind {
            CorrelatorKind::Connected => TauSeries::zero(self.r, self.weight, self.params),
            CorrelatorKind::Disconnected => TauSeries::one(self.r, self.weight, self.params),
        };
        for (m, v) in &self.entries {
            s.set(m.clone(), v.scale(&(Rational::one() / m.symmetry_factor())));
        }
        s
    }

    /// Moment-cumulant transform to the other kind.
    pub fn convert(&self, kind: CorrelatorKind) -> CorrelatorTable {
        if kind == self.kind {
            return self.clone();
        }
        let series = self.to_series();
        let other = match kind {
            CorrelatorKind::Disconnected => series.exp(),
            CorrelatorKind::Connected => series.log(),
        };
        other.to_correlators(kind)
    }

    pub fn substitute(&self, params: Params, images: &[ParamPoly]) -> Result<CorrelatorTable> {
        let mut out = CorrelatorTable::new(self.r, self.weight, self.kind, params);
        for (m, v) in &self.entries {
            out.insert(m.clone(), v.substitute(images)?);
        }
        Ok(out)
    }

    /// Fixes some parameters to rational values.
    pub fn assign(&self, values: &[(usize, Rational)]) -> CorrelatorTable {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.assign(values);
        }
        out
    }

    /// Keeps entries of weight `<= weight`.
    pub fn truncate(&self, weight: u32) -> CorrelatorTable {
        let mut out = CorrelatorTable::new(self.r, weight.min(self.weight), self.kind, self.params);
        for (m, v) in &self.entries {
            if m.weight() <= out.weight {
                out.insert(m.clone(), v.clone());
            }
        }
        out
    }
}

impl fmt::Debug for CorrelatorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} correlators, r={}, weight<={}", self.kind.as_str(), self.r, self.weight)?;
        for (m, v) in &self.entries {
            writeln!(f, "  <{m}> = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn c1(r: u32) -> ParamPoly {
        ParamPoly::param(&Params::C.alphabet(r), 1)
    }

    #[test]
    fn exp_log_round_trip() {
        let a = Params::C.alphabet(3);
        let mut f = TauSeries::zero(3, 6, Params::C);
        for (i, m) in multisets_up_to(3, 6).into_iter().enumerate() {
            let p = &ParamPoly::param(&a, 1 + i % 2).scale(&ratio(i as i64 + 1, 3))
                + &ParamPoly::constant(&a, rat(i as i64 - 4));
            f.set(m, p);
        }
        let g = f.exp();
        assert_eq!(g.log(), f);
    }

    #[test]
    fn exponential_of_linear_series() {
        // exp(c1 t1): coefficient of t1^3 is c1^3 / 6, correlator is c1^3
        let mut f = TauSeries::zero(2, 3, Params::C);
        f.set(Multiset::new(vec![1]), c1(2));
        let g = f.exp().to_correlators(CorrelatorKind::Disconnected);
        assert_eq!(g.value(&[1, 1, 1]).unwrap(), c1(2).pow(3));
        assert!(g.value(&[3]).unwrap().is_zero());
    }

    #[test]
    fn string_residual_detects_wrong_normalization() {
        let one = TauSeries::one(2, 3, Params::D);
        let res = one.string_residual();
        let expected = ParamPoly::param(&Params::D.alphabet(2), 1).scale(&ratio(1, 2));
        assert_eq!(res.coeff(&Multiset::empty()), expected);
        assert_eq!(res.weight_cap(), 2);
    }

    #[test]
    fn table_conversion_uses_symmetry_factors() {
        let mut t = CorrelatorTable::new(2, 2, CorrelatorKind::Connected, Params::C);
        t.insert(Multiset::new(vec![1]), c1(2));
        t.insert(Multiset::new(vec![1, 1]), c1(2));
        let d = t.convert(CorrelatorKind::Disconnected);
        // <τ1^2>• = <τ1^2> + <τ1>^2
        assert_eq!(d.value(&[1, 1]).unwrap(), &c1(2) + &c1(2).pow(2));
        assert_eq!(d.convert(CorrelatorKind::Connected), t);
    }
}
