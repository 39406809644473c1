//! Gelfand-Dickey flows `∂v_a/∂t_i = X_a^i`, t-derivatives of differential polynomials, and the
//! two-point functions `Ω_{i,j} = ∂^{-1} ∂_{t_j} res L^{i/r}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::algebra::DiffPoly;
use crate::error::{Error, Result};
use crate::psido::{FracPowers, LaxOperator};

/// True when `i` is a Gelfand-Dickey time, i.e. `i >= 1` and `r` does not divide `i`.
pub fn is_time(r: u32, i: u32) -> bool {
    i >= 1 && !i.is_multiple_of(r)
}

pub fn check_time(r: u32, i: u32) -> Result<()> {
    if i == 0 {
        return Err(Error::InvalidConfig("time indices start at 1".into()));
    }
    if !is_time(r, i) {
        return Err(Error::IndexDivisible { r, index: i });
    }
    Ok(())
}

/// The GD times `1 <= i <= max` with `r` not dividing `i`.
pub fn times_up_to(r: u32, max: u32) -> Vec<u32> {
    (1..=max).filter(|&i| is_time(r, i)).collect()
}

/// `X_1^i, ..., X_{r-1}^i` read off from `[(L^{i/r})_+, L]`.
pub fn gd_flow(lax: &LaxOperator, powers: &FracPowers, i: u32) -> Result<Vec<DiffPoly>> {
    let r = lax.r();
    check_time(r, i)?;
    let plus = powers.get(i).plus_part();
    let bracket = plus.commutator(lax.operator(), 0)?;
    debug_assert!(bracket.is_exact());
    if let Some(top) = bracket.top() {
        assert!(top <= r as i64 - 2, "flow {i} has order {top} > r - 2");
    }
    Ok((1..r).map(|alpha| bracket.coeff(lax.slot(alpha))).collect())
}

/// Flows for a fixed set of times, plus a cache of their x-derivatives.
#[derive(Debug)]
pub struct FlowTable {
    r: u32,
    flows: BTreeMap<u32, Vec<DiffPoly>>,
    // (time, alpha, k) -> ∂^k X_alpha^time
    derivs: Mutex<HashMap<(u32, u32, u16), Arc<DiffPoly>>>,
}

impl FlowTable {
    pub fn new(lax: &LaxOperator, powers: &FracPowers, times: &[u32]) -> Result<Self> {
        let mut flows = BTreeMap::new();
        for &i in times {
            flows.insert(i, gd_flow(lax, powers, i)?);
        }
        Ok(FlowTable { r: lax.r(), flows, derivs: Mutex::new(HashMap::new()) })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn times(&self) -> impl Iterator<Item = u32> + '_ {
        self.flows.keys().copied()
    }

    /// `X_alpha^i`.
    pub fn flow(&self, i: u32, alpha: u32) -> Result<&DiffPoly> {
        self.flows.get(&i).map(|v| &v[alpha as usize - 1]).ok_or(Error::MissingFlow(i))
    }

    fn flow_derivative(&self, i: u32, alpha: u32, k: u16) -> Result<Arc<DiffPoly>> {
        if let Some(p) = self.derivs.lock().unwrap().get(&(i, alpha, k)) {
            return Ok(p.clone());
        }
        let p = if k == 0 { self.flow(i, alpha)?.clone() } else { self.flow_derivative(i, alpha, k - 1)?.diff_x() };
        let p = Arc::new(p);
        self.derivs.lock().unwrap().insert((i, alpha, k), p.clone());
        Ok(p)
    }

    /// `∂_{t_j} p = sum_{a,k} ∂^k(X_a^j) ∂p/∂v_a^{(k)}`.
    pub fn t_derivative(&self, p: &DiffPoly, j: u32) -> Result<DiffPoly> {
        if !self.flows.contains_key(&j) {
            return Err(Error::MissingFlow(j));
        }
        let mut out = DiffPoly::zero();
        for jet in p.jets() {
            let partial = p.partial(jet);
            let dx = self.flow_derivative(j, jet.alpha as u32, jet.order)?;
            out.add_assign_ref(&partial.mul_ref(&dx));
        }
        Ok(out)
    }
}

/// Everything needed to differentiate along the GD times up to `max_time`.
#[derive(Debug)]
pub struct Hierarchy {
    lax: LaxOperator,
    powers: FracPowers,
    flows: FlowTable,
    residues: Vec<DiffPoly>,
}

impl Hierarchy {
    pub fn new(r: u32, max_time: u32) -> Result<Self> {
        let lax = LaxOperator::new(r);
        let max_time = max_time.max(1);
        let powers = FracPowers::new(&lax, max_time, -1)?;
        let flows = FlowTable::new(&lax, &powers, &times_up_to(r, max_time))?;
        let residues = (1..=max_time).map(|i| powers.get(i).residue()).collect::<Result<Vec<_>>>()?;
        Ok(Hierarchy { lax, powers, flows, residues })
    }

    pub fn r(&self) -> u32 {
        self.lax.r()
    }

    pub fn max_time(&self) -> u32 {
        self.powers.max()
    }

    pub fn lax(&self) -> &LaxOperator {
        &self.lax
    }

    pub fn powers(&self) -> &FracPowers {
        &self.powers
    }

    pub fn flows(&self) -> &FlowTable {
        &self.flows
    }

    /// `res L^{i/r}`.
    pub fn residue(&self, i: u32) -> &DiffPoly {
        &self.residues[i as usize - 1]
    }

    pub fn t_derivative(&self, p: &DiffPoly, j: u32) -> Result<DiffPoly> {
        check_time(self.r(), j)?;
        self.flows.t_derivative(p, j)
    }

    /// `Ω_{i,j} = ∂^{-1}(∂_{t_j} res L^{i/r})` with zero integration constant.
    pub fn omega(&self, i: u32, j: u32) -> Result<DiffPoly> {
        check_time(self.r(), i)?;
        check_time(self.r(), j)?;
        if i > self.max_time() {
            return Err(Error::MissingFlow(i));
        }
        self.t_derivative(self.residue(i), j)?.integrate_x()
    }

    pub fn omega_table(&self, max: u32) -> Result<OmegaTable> {
        let times = times_up_to(self.r(), max);
        let mut entries = BTreeMap::new();
        for &i in &times {
            for &j in &times {
                if j >= i {
                    entries.insert((i, j), self.omega(i, j)?);
                }
            }
        }
        Ok(OmegaTable { r: self.r(), entries })
    }
}

/// `Ω_{i,j}` for `i <= j`; lookups are symmetric.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    r: u32,
    entries: BTreeMap<(u32, u32), DiffPoly>,
}

impl OmegaTable {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn get(&self, i: u32, j: u32) -> Option<&DiffPoly> {
        self.entries.get(&(i.min(j), i.max(j)))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &DiffPoly)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }
}
