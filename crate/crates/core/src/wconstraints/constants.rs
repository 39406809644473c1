//! Dictionaries between the parameter families `d`, `c`, `sigma` and `rho`.

use num_traits::{One, Zero};

use super::operator::{apply_s, WOperatorSpec};
use super::recursion::recursion_correlators;
use crate::algebra::{rat, ParamPoly, Rational};
use crate::bgw::{CorrelatorKind, InitialJets, Multiset};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::psido::{FracPowers, LaxOperator};

/// Inverts `y_a = λ_a x_a + g_a(x_1, ..., x_{a-1})` with constant `λ_a != 0`.
///
/// `images[a]` is `y_{a+1}` written in the `x` alphabet; the result writes each `x_a` in `target`.
pub fn invert_triangular(images: &[ParamPoly], target: Params) -> Result<Vec<ParamPoly>> {
    let n = images.len();
    let y = target.alphabet(n as u32 + 1);
    let mut xs: Vec<ParamPoly> = Vec::with_capacity(n);
    for (a, f) in images.iter().enumerate() {
        if (a + 1..n).any(|b| f.mentions(b)) || f.degree_in(a) != 1 {
            return Err(Error::NotTriangular(format!("{} = {f}", y.names()[a])));
        }
        let lambda = f
            .coefficient_of(a, 1)
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NotTriangular(format!("{} = {f}", y.names()[a])))?;
        let g = f - &ParamPoly::param(f.alphabet(), a + 1).scale(&lambda);
        let mut sub: Vec<ParamPoly> = xs.clone();
        sub.resize(n, ParamPoly::zero(&y));
        let g_y = g.substitute(&sub)?;
        let x = (&ParamPoly::param(&y, a + 1) - &g_y).scale(&(Rational::one() / lambda));
        xs.push(x);
    }
    Ok(xs)
}

fn compose(outer: &[ParamPoly], inner: &[ParamPoly]) -> Result<Vec<ParamPoly>> {
    outer.iter().map(|p| p.substitute(inner)).collect()
}

/// The four parameter families of one `r` and the maps between them.
///
/// `c_a` is the connected one-point correlator `<τ_a> = res L^{a/r}(0) / a`, `rho_a` the
/// eigenvalue in `W^red_{a,a} τ = (-1)^a rho_a τ`, and `sigma_a` is `(-1)^a S_{a,a} τ |_0`.
#[derive(Clone, Debug)]
pub struct ConstantsDictionary {
    r: u32,
    c_of_d: Vec<ParamPoly>,
    d_of_c: Vec<ParamPoly>,
    c_of_rho: Vec<ParamPoly>,
    rho_of_c: Vec<ParamPoly>,
    c_of_sigma: Vec<ParamPoly>,
    sigma_of_c: Vec<ParamPoly>,
}

impl ConstantsDictionary {
    pub fn new(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidConfig(format!("r must be at least 2, got {r}")));
        }
        let c_of_d = c_from_d(r)?;
        let d_of_c = invert_triangular(&c_of_d, Params::C)?;
        let c_of_rho = c_from_rho(r)?;
        let rho_of_c = invert_triangular(&c_of_rho, Params::C)?;
        let sigma_of_c = compose(&sigma_from_rho(r)?, &rho_of_c)?;
        let c_of_sigma = invert_triangular(&sigma_of_c, Params::Sigma)?;
        Ok(ConstantsDictionary { r, c_of_d, d_of_c, c_of_rho, rho_of_c, c_of_sigma, sigma_of_c })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `c_a` in terms of `d`.
    pub fn c_of_d(&self) -> &[ParamPoly] {
        &self.c_of_d
    }

    /// `d_a` in terms of `c`.
    pub fn d_of_c(&self) -> &[ParamPoly] {
        &self.d_of_c
    }

    /// `sigma_a` in terms of `c`.
    pub fn sigma_of_c(&self) -> &[ParamPoly] {
        &self.sigma_of_c
    }

    /// `rho_a` in terms of `c`.
    pub fn rho_of_c(&self) -> &[ParamPoly] {
        &self.rho_of_c
    }

    /// `rho_a` in terms of `d`.
    pub fn rho_of_d(&self) -> Result<Vec<ParamPoly>> {
        compose(&self.rho_of_c, &self.c_of_d)
    }

    /// `rho_a` in terms of `sigma`.
    pub fn rho_of_sigma(&self) -> Result<Vec<ParamPoly>> {
        compose(&self.rho_of_c, &self.c_of_sigma)
    }

    /// Images of `from`'s parameters written in `to`'s alphabet.
    pub fn map(&self, from: Params, to: Params) -> Result<Vec<ParamPoly>> {
        let identity = |p: Params| (1..self.r as usize).map(|a| ParamPoly::param(&p.alphabet(self.r), a)).collect();
        let in_c: Vec<ParamPoly> = match from {
            Params::C => identity(Params::C),
            Params::D => self.d_of_c.clone(),
            Params::Sigma => self.sigma_of_c.clone(),
            Params::Rho => self.rho_of_c.clone(),
        };
        let c_in_to: Vec<ParamPoly> = match to {
            Params::C => return Ok(in_c),
            Params::D => self.c_of_d.clone(),
            Params::Sigma => self.c_of_sigma.clone(),
            Params::Rho => self.c_of_rho.clone(),
        };
        if from == to {
            return Ok(identity(to));
        }
        compose(&in_c, &c_in_to)
    }
}

/// `c_a = res L^{a/r} / a` at the initial jets, in `d`.
pub fn c_from_d(r: u32) -> Result<Vec<ParamPoly>> {
    let lax = LaxOperator::new(r);
    let powers = FracPowers::new(&lax, r - 1, -1)?;
    let jets = InitialJets::new(r, r as u16);
    (1..r)
        .map(|a| {
            let res = powers.get(a).residue()?;
            Ok(jets.evaluate(&res).scale(&(Rational::one() / rat(a as i64))))
        })
        .collect()
}

/// `c_a = <τ_a>` computed from the recursion, in `rho`.
pub fn c_from_rho(r: u32) -> Result<Vec<ParamPoly>> {
    let connected = recursion_correlators(r, r - 1)?.convert(CorrelatorKind::Connected);
    Ok((1..r).map(|a| connected.value(&[a]).unwrap()).collect())
}

/// `rho_a` in terms of `c`.
pub fn solve_rho_from_c(r: u32) -> Result<Vec<ParamPoly>> {
    invert_triangular(&c_from_rho(r)?, Params::C)
}

/// `sigma_a = (-1)^a S_{a,a} τ |_0`, in `rho`.
pub fn sigma_from_rho(r: u32) -> Result<Vec<ParamPoly>> {
    let tau = recursion_correlators(r, r - 1)?.to_series();
    (1..r)
        .map(|a| {
            let spec = WOperatorSpec::new(r, a, a)?;
            let tau = tau.truncate(a);
            let value = apply_s(&spec, &tau)?.coeff(&Multiset::empty());
            Ok(if a % 2 == 0 { value } else { -&value })
        })
        .collect()
}
