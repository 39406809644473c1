//! Normal-ordered operators `S_{a,q}` and `W^red_{a,q}` expanded into monomial operators `t^K ∂^M`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::{binomial, factorial, falling, rat, ParamPoly, Rational};
use crate::bgw::{multisets_up_to, Multiset, TauSeries};
use crate::error::{Error, Result};
use crate::hierarchy::is_time;

/// Labels `S_{alpha,q}` and `W^red_{alpha,q}` for a fixed `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WOperatorSpec {
    r: u32,
    alpha: u32,
    q: u32,
}

impl WOperatorSpec {
    pub fn new(r: u32, alpha: u32, q: u32) -> Result<Self> {
        if alpha == 0 || alpha >= r {
            return Err(Error::InvalidConfig(format!("alpha = {alpha} outside 1..{r}")));
        }
        if q < alpha {
            return Err(Error::InvalidConfig(format!("q = {q} below alpha = {alpha}")));
        }
        Ok(WOperatorSpec { r, alpha, q })
    }

    /// The operator whose leading term is `(-1)^alpha ∂/∂t_n`.
    pub fn for_time(r: u32, n: u32) -> Result<Self> {
        if !is_time(r, n) {
            return Err(Error::IndexDivisible { r, index: n });
        }
        Self::new(r, n % r, n % r + n / r)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `(q - alpha) r`, the amount by which the operator lowers weight.
    pub fn shift(&self) -> u32 {
        (self.q - self.alpha) * self.r
    }

    /// `alpha + (q - alpha) r`.
    pub fn leading_time(&self) -> u32 {
        self.alpha + self.shift()
    }

    /// Largest output weight fully determined by a series known through `cap`.
    pub fn window(&self, cap: u32) -> i64 {
        cap as i64 - self.shift() as i64 - self.alpha as i64
    }
}

/// `coeff * t^times * ∂^derivs` with plain (unshifted) times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainTerm {
    pub times: Multiset,
    pub derivs: Multiset,
    pub coeff: Rational,
    /// How many `t~_1 = t_1 - 1` factors contributed their `-1`.
    pub shifted: u32,
}

impl PlainTerm {
    pub fn is_leading(&self, spec: &WOperatorSpec) -> bool {
        self.times.is_empty() && self.shifted == spec.alpha
    }
}

/// Multisets of GD times grouped by `(size, weight)`, the empty one included.
pub(crate) struct TimeMultisets {
    groups: HashMap<(usize, u32), Vec<Multiset>>,
    max_weight: u32,
}

impl TimeMultisets {
    pub(crate) fn new(r: u32, max_weight: u32) -> Self {
        let mut groups: HashMap<(usize, u32), Vec<Multiset>> = HashMap::new();
        groups.insert((0, 0), vec![Multiset::empty()]);
        for m in multisets_up_to(r, max_weight) {
            groups.entry((m.len(), m.weight())).or_default().push(m);
        }
        TimeMultisets { groups, max_weight }
    }

    pub(crate) fn get(&self, size: usize, weight: u32) -> &[Multiset] {
        assert!(weight <= self.max_weight, "weight {weight} beyond {}", self.max_weight);
        self.groups.get(&(size, weight)).map_or(&[], Vec::as_slice)
    }
}

/// The two normal-ordered families expanded here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// `1/(alpha+1) res λ^N :g^{alpha+1}:` with `g = ∂_λ a + ∂_λ b`.
    S,
    /// `1/(alpha+1) res λ^N :B_{alpha+1}(g, g', ..., g^{(alpha)}):`, the complete Bell polynomial
    /// that `∂_μ^{alpha+1}` of the vertex operator produces at `μ = λ`.
    WRed,
}

/// Products of `∂_λ^k g` as lists of `k`, each with its coefficient, the `1/(alpha+1)` included.
fn field_monomials(kind: OperatorKind, alpha: u32) -> Vec<(Vec<u32>, Rational)> {
    let n = alpha + 1;
    let inv = Rational::one() / rat(n as i64);
    match kind {
        OperatorKind::S => vec![(vec![0; n as usize], inv)],
        OperatorKind::WRed => partitions(n, n)
            .into_iter()
            .map(|parts| {
                let mut c = factorial(n as u64) * &inv;
                let mut i = 0;
                while i < parts.len() {
                    let run = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
                    c /= factorial(parts[i] as u64).pow(run as i32) * factorial(run as u64);
                    i += run;
                }
                (parts.iter().map(|p| p - 1).collect(), c)
            })
            .collect(),
    }
}

/// Partitions of `n` into parts `<= max`, parts nonincreasing.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in (1..=max.min(n)).rev() {
        for rest in partitions(n - p, p) {
            let mut v = vec![p];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Coefficient of `t~_j` in `∂_λ^k g`, up to the power of `λ`.
fn time_slot(k: u32, j: u32) -> Rational {
    rat(j as i64) * falling(j as i64 - 1, k as u64)
}

/// Coefficient of `∂/∂t_j` in `∂_λ^k g`, up to the power of `λ`.
fn deriv_slot(k: u32, j: u32) -> Rational {
    falling(-(j as i64) - 1, k as u64)
}

/// Coefficient of `t~^K ∂^M` in the normal-ordered product of `∂_λ^{k_i} g`, summed over the
/// distinct ways of placing `K ⊎ M` into the slots.
fn slot_coefficient(slots: &[u32], k: &Multiset, m: &Multiset) -> Rational {
    if slots.iter().all(|&s| s == 0) {
        // all slots alike: |slots|!/(sym(K) sym(M)) prod K
        let mut c = factorial(slots.len() as u64) / (k.symmetry_factor() * m.symmetry_factor());
        for &ki in k.indices() {
            c *= rat(ki as i64);
        }
        return c;
    }
    let mut pool: Vec<(bool, u32, usize)> = k.counts().into_iter().map(|(j, n)| (true, j, n)).collect();
    pool.extend(m.counts().into_iter().map(|(j, n)| (false, j, n)));
    fn place(slots: &[u32], pool: &mut [(bool, u32, usize)]) -> Rational {
        let Some((&k, rest)) = slots.split_first() else {
            return Rational::one();
        };
        let mut total = Rational::zero();
        for i in 0..pool.len() {
            let (is_time, j, n) = pool[i];
            if n == 0 {
                continue;
            }
            let c = if is_time { time_slot(k, j) } else { deriv_slot(k, j) };
            if c.is_zero() {
                continue;
            }
            pool[i].2 -= 1;
            total += c * place(rest, pool);
            pool[i].2 += 1;
        }
        total
    }
    place(slots, &mut pool)
}

/// Plain terms `t^{K'} ∂^M` of the operator for the given `K'`.
///
/// Every `K = K' + {1^s}` with `|K| <= alpha` is expanded; the `(-1)^s C(n_1, s)` from
/// `(t_1 - 1)^{n_1}` is folded into the coefficient. Each slot of a product lowers the power of
/// `λ` by the same amount it raises weight, so `w(M) = w(K) + (q - alpha) r` for every product.
pub(crate) fn terms_for(
    kind: OperatorKind,
    spec: &WOperatorSpec,
    kprime: &Multiset,
    groups: &TimeMultisets,
) -> Vec<PlainTerm> {
    let alpha = spec.alpha as usize;
    let mut out = Vec::new();
    if kprime.len() > alpha {
        return out;
    }
    let monomials = field_monomials(kind, spec.alpha);
    for s in 0..=(alpha - kprime.len()) as u32 {
        let k = kprime.union(&Multiset::new(vec![1; s as usize]));
        let m_weight = k.weight() + spec.shift();
        let n1 = k.count(1) as i64;
        let sign = if s % 2 == 0 { Rational::one() } else { -Rational::one() };
        let expand = sign * binomial(n1, s as u64);
        let mut by_m: HashMap<Multiset, Rational> = HashMap::new();
        for (slots, c) in &monomials {
            if slots.len() <= k.len() {
                continue;
            }
            for m in groups.get(slots.len() - k.len(), m_weight) {
                let coeff = slot_coefficient(slots, &k, m) * c;
                if !coeff.is_zero() {
                    *by_m.entry(m.clone()).or_insert_with(Rational::zero) += coeff;
                }
            }
        }
        let mut ms: Vec<_> = by_m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        ms.sort_by(|a, b| a.0.cmp(&b.0));
        for (m, c) in ms {
            out.push(PlainTerm { times: kprime.clone(), derivs: m, coeff: c * &expand, shifted: s });
        }
    }
    out
}

/// `S_{alpha,q} τ`, exact through [`WOperatorSpec::window`] of the input cap.
pub fn apply_s(spec: &WOperatorSpec, tau: &TauSeries) -> Result<TauSeries> {
    apply(OperatorKind::S, spec, tau)
}

/// `W^red_{alpha,q} τ`, exact through [`WOperatorSpec::window`] of the input cap.
pub fn apply_wred(spec: &WOperatorSpec, tau: &TauSeries) -> Result<TauSeries> {
    apply(OperatorKind::WRed, spec, tau)
}

/// Either operator applied to `τ`, exact through [`WOperatorSpec::window`] of the input cap.
pub fn apply(kind: OperatorKind, spec: &WOperatorSpec, tau: &TauSeries) -> Result<TauSeries> {
    if spec.r() != tau.r() {
        return Err(Error::InvalidConfig(format!("operator for r={} applied to series for r={}", spec.r(), tau.r())));
    }
    let window = spec.window(tau.weight_cap());
    if window < 0 {
        return Err(Error::WeightExceeded {
            requested: (spec.shift() + spec.alpha) as i64,
            available: tau.weight_cap() as i64,
        });
    }
    let window = window as u32;
    let groups = TimeMultisets::new(spec.r(), tau.weight_cap());
    let mut outputs = vec![Multiset::empty()];
    outputs.extend(multisets_up_to(spec.r(), window));

    let mut by_kprime: HashMap<Multiset, Vec<PlainTerm>> = HashMap::new();
    for mu in &outputs {
        if mu.len() <= spec.alpha as usize {
            by_kprime.insert(mu.clone(), terms_for(kind, spec, mu, &groups));
        }
    }

    let mut out = TauSeries::zero(tau.r(), window, tau.params());
    for mu in &outputs {
        let mut acc = ParamPoly::zero(tau.alphabet());
        for kprime in mu.sub_multisets() {
            let Some(terms) = by_kprime.get(&kprime) else { continue };
            let nu = mu.difference(&kprime).unwrap();
            for term in terms {
                let target = nu.union(&term.derivs);
                let a = tau.coeff(&target);
                if a.is_zero() {
                    continue;
                }
                // ∂^M t^{ν+M} = prod (ν_i + M_i)!/ν_i! t^ν
                let mut f = term.coeff.clone();
                for (i, mi) in term.derivs.counts() {
                    let ni = nu.count(i) as i64;
                    f *= falling(ni + mi as i64, mi as u64);
                }
                acc = &acc + &a.scale(&f);
            }
        }
        out.set(mu.clone(), acc);
    }
    Ok(out)
}
