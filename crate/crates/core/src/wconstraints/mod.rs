//! W-constraints of the second kind: the operators `S_{a,q}` and `W^red_{a,q}`, the correlator
//! recursion they imply, the parameter dictionaries, and verification against the PDE solution.

mod constants;
mod operator;
mod recursion;

use std::fmt;

use rayon::prelude::*;

pub use constants::{c_from_d, c_from_rho, invert_triangular, sigma_from_rho, solve_rho_from_c, ConstantsDictionary};
pub use operator::{apply, apply_s, apply_wred, OperatorKind, PlainTerm, WOperatorSpec};
pub use recursion::recursion_correlators;

use crate::algebra::{ParamPoly, Rational};
use crate::bgw::{connected_correlators_pde, log_tau, CorrelatorKind, CorrelatorTable, Multiset, TauSeries};
use crate::error::{Error, Result};
use crate::params::Params;

/// Which construction produces a correlator table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Two-point functions of the hierarchy evaluated at the initial jets.
    Pde,
    /// The W-constraint recursion in `rho`.
    Recursion,
}

/// Correlators of weight `<= weight` in the requested kind and alphabet.
pub fn correlators(
    r: u32,
    weight: u32,
    kind: CorrelatorKind,
    params: Params,
    method: Method,
    dict: &ConstantsDictionary,
) -> Result<CorrelatorTable> {
    let table = match method {
        Method::Pde => connected_correlators_pde(r, weight)?,
        Method::Recursion => recursion_correlators(r, weight)?,
    };
    let table = table.convert(kind);
    let from = table.params();
    if from == params {
        return Ok(table);
    }
    table.substitute(params, &dict.map(from, params)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The requested cap does not reach weight 0 of the output.
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

/// Outcome of one identity checked on a truncated series.
#[derive(Clone, Debug)]
pub struct Check {
    pub r: u32,
    /// `(alpha, q)`, or `None` for the string equation.
    pub operator: Option<(u32, u32)>,
    pub window: i64,
    pub status: Status,
    /// Lowest-weight nonzero coefficient of the residual.
    pub residual: Option<(Multiset, ParamPoly)>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.operator {
            Some((a, q)) => write!(f, "r={} alpha={a} q={q} window={} {}", self.r, self.window, self.status)?,
            None => write!(f, "r={} string window={} {}", self.r, self.window, self.status)?,
        }
        if let Some((m, p)) = &self.residual {
            write!(f, " residual={p} at=<{m}>")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn first_nonzero(s: &TauSeries) -> Option<(Multiset, ParamPoly)> {
    s.coeffs().next().map(|(m, p)| (m.clone(), p.clone()))
}

fn check_from(r: u32, operator: Option<(u32, u32)>, window: i64, residual: Option<TauSeries>) -> Check {
    let residual = residual.and_then(|s| first_nonzero(&s));
    let status = if window < 0 {
        Status::Skip
    } else if residual.is_some() {
        Status::Fail
    } else {
        Status::Pass
    };
    Check { r, operator, window, status, residual }
}

/// The disconnected `τ_BGW` in `d`, exact through `weight + r - 1`.
///
/// The extra `r - 1` is the largest `alpha`, so `W^red_{alpha,q} τ` is exact through `weight - (q - alpha) r`.
pub fn tau_for_verification(r: u32, weight: u32) -> Result<TauSeries> {
    Ok(log_tau(r, weight + r - 1)?.exp())
}

/// Flips the `t_1^2` coefficient of `τ`.
pub fn corrupt(tau: &TauSeries) -> TauSeries {
    let mut out = tau.clone();
    let m = Multiset::new(vec![1, 1]);
    let bump = ParamPoly::one(tau.alphabet());
    out.add_to(m, &bump);
    out
}

/// Checks `W^red_{alpha,q} τ = (-1)^alpha rho_alpha δ_{alpha,q} τ` for every `alpha` and
/// `alpha <= q <= alpha + qextra`, and the string equation, on a series in `d`.
pub fn verify_series(tau: &TauSeries, weight: u32, qextra: u32, rho_of_d: &[ParamPoly]) -> Result<VerifyReport> {
    let r = tau.r();
    let specs: Vec<WOperatorSpec> = (1..r)
        .flat_map(|a| (a..=a + qextra).map(move |q| (a, q)))
        .map(|(a, q)| WOperatorSpec::new(r, a, q))
        .collect::<Result<_>>()?;
    let mut checks: Vec<Check> = specs
        .par_iter()
        .map(|spec| {
            let window = weight as i64 - spec.shift() as i64;
            let op = Some((spec.alpha(), spec.q()));
            if window < 0 {
                return Ok(check_from(r, op, window, None));
            }
            let lhs = apply_wred(spec, tau)?.truncate(window as u32);
            let mut residual = lhs;
            if spec.q() == spec.alpha() {
                let mut rho = rho_of_d[spec.alpha() as usize - 1].clone();
                if spec.alpha() % 2 == 1 {
                    rho = -&rho;
                }
                residual = residual.sub(&tau.truncate(window as u32).scale(&rho))?;
            }
            Ok(check_from(r, op, window, Some(residual)))
        })
        .collect::<Result<_>>()?;
    let string = tau.string_residual().truncate(weight);
    checks.push(check_from(r, None, string.weight_cap() as i64, Some(string)));
    Ok(VerifyReport { checks })
}

/// Builds `τ_BGW` from the hierarchy and checks every constraint through `weight`.
pub fn verify_constraints(r: u32, weight: u32, qextra: u32) -> Result<VerifyReport> {
    let dict = ConstantsDictionary::new(r)?;
    let tau = tau_for_verification(r, weight)?;
    verify_series(&tau, weight, qextra, &dict.rho_of_d()?)
}

/// `rho_a - d_a/r` for each `a`, with whether it avoids every `d_b`, `b >= a`.
pub fn rho_shape(r: u32) -> Result<Vec<(ParamPoly, bool)>> {
    let dict = ConstantsDictionary::new(r)?;
    let alphabet = Params::D.alphabet(r);
    let inv_r = Rational::new(1.into(), (r as i64).into());
    Ok(dict
        .rho_of_d()?
        .into_iter()
        .enumerate()
        .map(|(a, rho)| {
            let rest = &rho - &ParamPoly::param(&alphabet, a + 1).scale(&inv_r);
            let ok = (a..r as usize - 1).all(|b| !rest.mentions(b));
            (rest, ok)
        })
        .collect())
}

/// Connected `<τ_I>` in `c` at a given `r`, from the recursion.
fn connected_in_c(r: u32, m: &Multiset) -> Result<ParamPoly> {
    let table = recursion_correlators(r, m.weight())?.convert(CorrelatorKind::Connected);
    let rho_of_c = solve_rho_from_c(r)?;
    table.get(m).unwrap().substitute(&rho_of_c)
}

/// The large-`r` limit of a connected correlator, in `c_1, ..., c_{sum I}`.
///
/// Computed at `r = sum I + 1` and `r = sum I + 2`; disagreement is reported, not resolved.
pub fn stabilized_correlator(indices: &[u32]) -> Result<ParamPoly> {
    if indices.is_empty() || indices.contains(&0) {
        return Err(Error::InvalidConfig(format!("indices must be positive and nonempty: {indices:?}")));
    }
    let m = Multiset::new(indices.to_vec());
    let w = m.weight();
    let alphabet = Params::C.alphabet(w + 1);
    let (r1, r2) = (w + 1, w + 2);
    let v1 = connected_in_c(r1, &m)?;
    let v2 = connected_in_c(r2, &m)?;
    let e1 = v1.embed(&alphabet).expect("same length");
    match v2.embed(&alphabet) {
        Some(e2) if e2 == e1 => Ok(e1),
        _ => Err(Error::NotStable { indices: m.indices().to_vec(), r1, v1: v1.to_string(), r2, v2: v2.to_string() }),
    }
}

/// `<τ_I>` through the PDE path and the recursion path, both disconnected and in `d`.
pub fn cross_check(r: u32, weight: u32) -> Result<Vec<(Multiset, ParamPoly, ParamPoly)>> {
    let dict = ConstantsDictionary::new(r)?;
    let pde = correlators(r, weight, CorrelatorKind::Disconnected, Params::D, Method::Pde, &dict)?;
    let rec = correlators(r, weight, CorrelatorKind::Disconnected, Params::D, Method::Recursion, &dict)?;
    Ok(pde.entries().map(|(m, p)| (m.clone(), p.clone(), rec.get(m).unwrap())).collect())
}
