//! Disconnected correlators from `W^red_{a,q} τ = (-1)^a ρ_a δ_{a,q} τ`, solved for the leading `∂_{t_n}`.

use std::collections::HashMap;

use num_traits::One;

use super::operator::{terms_for, OperatorKind, TimeMultisets, WOperatorSpec};
use crate::algebra::{falling, ParamPoly, Rational};
use crate::bgw::{multisets_up_to, CorrelatorKind, CorrelatorTable, Multiset};
use crate::error::{Error, Result};
use crate::params::Params;

/// `∂^A (t^K F)|_0 / <(A \ K) ∪ ...>`, i.e. `prod A_i!/(A_i - K_i)!`, or zero when `K ⊄ A`.
fn extraction_factor(a: &Multiset, k: &Multiset) -> Option<Rational> {
    let mut f = Rational::one();
    for (i, ki) in k.counts() {
        let ai = a.count(i);
        if ai < ki {
            return None;
        }
        f *= falling(ai as i64, ki as u64);
    }
    Some(f)
}

/// All `<τ_B>•` with `sum B <= weight`, as polynomials in `rho_1..rho_{r-1}`.
///
/// For `n = max B`, `alpha = n mod r` and `q = alpha + n div r`, the equation
/// `∂^{B \ n} W^red_{alpha,q} τ |_0` isolates `<τ_B>•`; every other term is strictly lighter.
pub fn recursion_correlators(r: u32, weight: u32) -> Result<CorrelatorTable> {
    if r < 2 {
        return Err(Error::InvalidConfig(format!("r must be at least 2, got {r}")));
    }
    let alphabet = Params::Rho.alphabet(r);
    let groups = TimeMultisets::new(r, weight);
    let mut known: HashMap<Multiset, ParamPoly> = HashMap::new();
    known.insert(Multiset::empty(), ParamPoly::one(&alphabet));
    let mut table = CorrelatorTable::new(r, weight, CorrelatorKind::Disconnected, Params::Rho);

    for b in multisets_up_to(r, weight) {
        let n = *b.indices().last().unwrap();
        let spec = WOperatorSpec::for_time(r, n)?;
        let a = b.without(n).unwrap();
        let mut value = if spec.q() == spec.alpha() {
            &ParamPoly::param(&alphabet, spec.alpha() as usize) * &known[&a]
        } else {
            ParamPoly::zero(&alphabet)
        };
        let mut rest = ParamPoly::zero(&alphabet);
        for kprime in a.sub_multisets() {
            let Some(factor) = extraction_factor(&a, &kprime) else { continue };
            let base = a.difference(&kprime).unwrap();
            for term in terms_for(OperatorKind::WRed, &spec, &kprime, &groups) {
                if term.is_leading(&spec) {
                    continue;
                }
                let target = base.union(&term.derivs);
                let v = &known[&target];
                if v.is_zero() {
                    continue;
                }
                rest = &rest + &v.scale(&(&term.coeff * &factor));
            }
        }
        // (-1)^alpha <τ_B>• + rest = (-1)^alpha ρ δ <τ_A>•
        if spec.alpha() % 2 == 0 {
            value = &value - &rest;
        } else {
            value = &value + &rest;
        }
        known.insert(b.clone(), value.clone());
        table.insert(b, value);
    }
    Ok(table)
}
