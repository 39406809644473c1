//! The generalized BGW solution: its jets at `t = 0`, connected correlators from the two-point
//! functions, and the string-normalized `log τ`.

mod multiset;
mod series;

use std::collections::HashMap;

use rayon::prelude::*;

pub use multiset::{multisets_up_to, Multiset};
pub use series::{CorrelatorKind, CorrelatorTable, TauSeries};

use crate::algebra::{falling, rat, Alphabet, DiffPoly, Jet, ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::hierarchy::{check_time, Hierarchy};
use crate::params::Params;

/// Values `v_a^{(k)}(0) = d_a (a+1)(a+2)...(a+k)` of the solution with `v_a = d_a / (1 - x)^{a+1}`.
#[derive(Clone, Debug)]
pub struct InitialJets {
    r: u32,
    max_k: u16,
    alphabet: Alphabet,
}

impl InitialJets {
    pub fn new(r: u32, max_k: u16) -> Self {
        InitialJets { r, max_k, alphabet: Params::D.alphabet(r) }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn max_k(&self) -> u16 {
        self.max_k
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `d_a (a+k)!/a!`; jets of any order are available, `max_k` only bounds iteration.
    pub fn value(&self, jet: Jet) -> ParamPoly {
        let a = jet.alpha as i64;
        let k = jet.order as u64;
        let factor: Rational = falling(a + k as i64, k);
        ParamPoly::param(&self.alphabet, jet.alpha as usize).scale(&factor)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Jet, ParamPoly)> + '_ {
        (1..self.r as u16)
            .flat_map(move |a| (0..=self.max_k).map(move |k| (Jet::new(a, k), self.value(Jet::new(a, k)))))
    }

    pub fn evaluate(&self, p: &DiffPoly) -> ParamPoly {
        p.evaluate(&self.alphabet, |j| self.value(j))
    }
}

pub fn initial_jets(r: u32, max_k: u16) -> InitialJets {
    InitialJets::new(r, max_k)
}

fn check_weight(weight: u32, min: u32) -> Result<()> {
    if weight < min {
        return Err(Error::InvalidConfig(format!("weight must be at least {min}, got {weight}")));
    }
    Ok(())
}

/// Differential polynomials `∂_{t_{i_3}} ... ∂_{t_{i_k}} Ω_{i_1,i_2}` for sorted multisets, memoized by prefix.
pub struct PdeEngine {
    hierarchy: Hierarchy,
    jets: InitialJets,
    weight: u32,
    memo: HashMap<Multiset, DiffPoly>,
}

impl PdeEngine {
    pub fn new(r: u32, weight: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidConfig(format!("r must be at least 2, got {r}")));
        }
        check_weight(weight, 1)?;
        Ok(PdeEngine {
            hierarchy: Hierarchy::new(r, weight)?,
            jets: InitialJets::new(r, weight as u16),
            weight,
            memo: HashMap::new(),
        })
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hierarchy
    }

    pub fn jets(&self) -> &InitialJets {
        &self.jets
    }

    fn check(&self, m: &Multiset) -> Result<()> {
        for &i in m.indices() {
            check_time(self.hierarchy.r(), i)?;
        }
        if m.weight() > self.weight {
            return Err(Error::WeightExceeded { requested: m.weight() as i64, available: self.weight as i64 });
        }
        Ok(())
    }

    /// Fills the memo for every multiset of size `>= 2` and weight `<= weight`, level by level.
    fn fill(&mut self) -> Result<()> {
        let r = self.hierarchy.r();
        let all: Vec<Multiset> = multisets_up_to(r, self.weight)
            .into_iter()
            .filter(|m| m.len() >= 2 && !self.memo.contains_key(m))
            .collect();
        let max_len = all.iter().map(Multiset::len).max().unwrap_or(0);
        for len in 2..=max_len {
            let level: Vec<&Multiset> = all.iter().filter(|m| m.len() == len).collect();
            let h = &self.hierarchy;
            let memo = &self.memo;
            let computed: Vec<(Multiset, DiffPoly)> = level
                .par_iter()
                .map(|m| {
                    let idx = m.indices();
                    let p = if len == 2 {
                        h.omega(idx[0], idx[1])?
                    } else {
                        let last = idx[len - 1];
                        let prefix = Multiset::new(idx[..len - 1].to_vec());
                        h.t_derivative(&memo[&prefix], last)?
                    };
                    Ok(((*m).clone(), p))
                })
                .collect::<Result<_>>()?;
            self.memo.extend(computed);
        }
        Ok(())
    }

    /// The differential polynomial whose value at the initial jets is `<τ_I>`, for `|I| >= 2`.
    pub fn correlator_density(&mut self, m: &Multiset) -> Result<&DiffPoly> {
        self.check(m)?;
        assert!(m.len() >= 2, "densities start at two insertions");
        if !self.memo.contains_key(m) {
            self.fill()?;
        }
        Ok(&self.memo[m])
    }

    /// `<τ_I>` seeded at `Ω_{I[a], I[b]}` and differentiated by the remaining times in order.
    pub fn seeded_value(&self, m: &Multiset, a: usize, b: usize) -> Result<ParamPoly> {
        self.check(m)?;
        let idx = m.indices();
        assert!(a != b && a < idx.len() && b < idx.len());
        let mut p = self.hierarchy.omega(idx[a], idx[b])?;
        for (k, &j) in idx.iter().enumerate() {
            if k != a && k != b {
                p = self.hierarchy.t_derivative(&p, j)?;
            }
        }
        Ok(self.jets.evaluate(&p))
    }

    /// All connected correlators of weight `<= weight`, in the `d` alphabet.
    pub fn table(&mut self) -> Result<CorrelatorTable> {
        self.fill()?;
        let r = self.hierarchy.r();
        let mut table = CorrelatorTable::new(r, self.weight, CorrelatorKind::Connected, Params::D);
        let all = multisets_up_to(r, self.weight);
        let values: Vec<(Multiset, ParamPoly)> = all
            .par_iter()
            .map(|m| {
                let v = if m.len() >= 2 {
                    self.jets.evaluate(&self.memo[m])
                } else {
                    // j <τ_j> = <τ_1 τ_j> and Ω_{1,j} = res L^{j/r}
                    let j = m.indices()[0];
                    let res = self.hierarchy.residue(j);
                    self.jets.evaluate(res).scale(&(Rational::from_integer(1.into()) / rat(j as i64)))
                };
                (m.clone(), v)
            })
            .collect();
        for (m, v) in values {
            table.insert(m, v);
        }
        Ok(table)
    }
}

/// Connected correlators `<τ_I>` with `sum I <= weight`, as polynomials in `d`.
pub fn connected_correlators_pde(r: u32, weight: u32) -> Result<CorrelatorTable> {
    PdeEngine::new(r, weight)?.table()
}

/// `log τ_BGW` through the given weight, normalized by the string equation.
pub fn log_tau(r: u32, weight: u32) -> Result<TauSeries> {
    Ok(connected_correlators_pde(r, weight)?.to_series())
}

/// `exp` of a series with vanishing constant term.
pub fn tau_exp(log_tau: &TauSeries) -> TauSeries {
    log_tau.exp()
}

/// `sum_i i t~_i X_a^i + (a+1) v_a` restricted to `t = 0`, i.e. `-X_a^1 + (a+1) v_a` at the initial jets.
pub fn jet_string_residual(r: u32) -> Result<Vec<ParamPoly>> {
    let h = Hierarchy::new(r, 1)?;
    let jets = InitialJets::new(r, 2);
    (1..r)
        .map(|a| {
            let x1 = h.flows().flow(1, a)?;
            let p = &DiffPoly::var(a as u16, 0).scale(&rat(a as i64 + 1)) - x1;
            Ok(jets.evaluate(&p))
        })
        .collect()
}
