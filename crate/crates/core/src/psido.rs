//! Truncated pseudo-differential operators `sum a_e ∂^e` over differential polynomials.
//!
//! An operator is either exact (every coefficient is known) or truncated at a floor `F`:
//! coefficients of `∂^e` with `e >= F` are exact and everything below is unknown. Composition
//! enforces the window rule instead of silently dropping terms: for `A ∘ B` to be exact down
//! to `F`, a truncated `B` must be known down to `F - top(A)` and a truncated `A` down to
//! `F - top(B)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::algebra::{binomial, ratio, DiffPoly, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct PsiDO {
    coeffs: BTreeMap<i64, DiffPoly>,
    /// `None` when exact, otherwise the lowest power whose coefficient is known.
    floor: Option<i64>,
}

impl PsiDO {
    pub fn zero() -> Self {
        PsiDO::default()
    }

    /// `∂^e`.
    pub fn d(e: i64) -> Self {
        Self::term(e, DiffPoly::constant(Rational::one()))
    }

    /// `f ∂^e`.
    pub fn term(e: i64, f: DiffPoly) -> Self {
        let mut p = PsiDO::zero();
        p.set(e, f);
        p
    }

    /// Multiplication operator by `f`.
    pub fn mult(f: DiffPoly) -> Self {
        Self::term(0, f)
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, DiffPoly)>, floor: Option<i64>) -> Self {
        let mut p = PsiDO { coeffs: BTreeMap::new(), floor };
        for (e, c) in coeffs {
            p.add_at(e, &c);
        }
        p
    }

    fn set(&mut self, e: i64, f: DiffPoly) {
        if f.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, f);
        }
    }

    fn add_at(&mut self, e: i64, f: &DiffPoly) {
        if let Some(fl) = self.floor {
            if e < fl {
                return;
            }
        }
        let entry = self.coeffs.entry(e).or_default();
        entry.add_assign_ref(f);
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power present (`None` for the zero operator).
    pub fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest power present.
    pub fn bottom(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, e: i64) -> DiffPoly {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &DiffPoly)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Drops everything below `floor`.
    pub fn truncate(&self, floor: i64) -> PsiDO {
        if self.floor.is_some_and(|f| f >= floor) {
            return self.clone();
        }
        let exact_anyway = self.is_exact() && self.bottom().is_none_or(|b| b >= floor);
        PsiDO {
            coeffs: self.coeffs.range(floor..).map(|(e, c)| (*e, c.clone())).collect(),
            floor: if exact_anyway { None } else { Some(floor) },
        }
    }

    /// Nonnegative powers. Always exact, since only negative powers are ever truncated.
    pub fn plus_part(&self) -> PsiDO {
        assert!(self.floor.is_none_or(|f| f <= 0), "plus part needs coefficients down to ∂^0");
        PsiDO { coeffs: self.coeffs.range(0..).map(|(e, c)| (*e, c.clone())).collect(), floor: None }
    }

    /// Negative powers; keeps the truncation floor.
    pub fn minus_part(&self) -> PsiDO {
        PsiDO { coeffs: self.coeffs.range(..0).map(|(e, c)| (*e, c.clone())).collect(), floor: self.floor }
    }

    /// Coefficient of `∂^{-1}`.
    pub fn residue(&self) -> Result<DiffPoly> {
        match self.floor {
            Some(f) if f > -1 => Err(Error::InsufficientDepth { requested: -1, achievable: f }),
            _ => Ok(self.coeff(-1)),
        }
    }

    pub fn add(&self, other: &PsiDO) -> PsiDO {
        let floor = match (self.floor, other.floor) {
            (None, f) | (f, None) => f,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let mut out = PsiDO { coeffs: BTreeMap::new(), floor };
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_at(*e, c);
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> PsiDO {
        PsiDO::from_coeffs(self.coeffs.iter().map(|(e, c)| (*e, c.scale(q))), self.floor)
    }

    pub fn sub(&self, other: &PsiDO) -> PsiDO {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Lowest floor at which `self ∘ other` is fully determined by the known coefficients.
    pub fn achievable_floor(&self, other: &PsiDO) -> Option<i64> {
        let (Some(ta), Some(tb)) = (self.top(), other.top()) else {
            return None;
        };
        let from_a = self.floor.map(|f| f + tb);
        let from_b = other.floor.map(|f| f + ta);
        match (from_a, from_b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }

    /// `self ∘ other`, exact at every power `>= floor`.
    ///
    /// Uses `∂^n ∘ f = sum_k C(n, k) f^{(k)} ∂^{n-k}`, with the binomial extended to negative `n`.
    pub fn compose(&self, other: &PsiDO, floor: i64) -> Result<PsiDO> {
        if let Some(achievable) = self.achievable_floor(other) {
            if floor < achievable {
                return Err(Error::InsufficientDepth { requested: floor, achievable });
            }
        }
        let exact = self.is_exact()
            && other.is_exact()
            && self.bottom().is_none_or(|b| b >= 0)
            && other.bottom().is_none_or(|b| b >= floor);
        let mut out = PsiDO { coeffs: BTreeMap::new(), floor: if exact { None } else { Some(floor) } };
        // derivatives of each coefficient of `other`, grown on demand
        let mut derivs: BTreeMap<i64, Vec<DiffPoly>> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let tower = derivs.entry(j).or_insert_with(|| vec![b.clone()]);
                let mut k: u64 = 0;
                loop {
                    let power = i + j - k as i64;
                    if power < floor || (i >= 0 && k as i64 > i) {
                        break;
                    }
                    while tower.len() <= k as usize {
                        let next = tower.last().unwrap().diff_x();
                        tower.push(next);
                    }
                    let dk = &tower[k as usize];
                    if !dk.is_zero() {
                        let prod = a.mul_ref(dk);
                        let c = binomial(i, k);
                        let entry = out.coeffs.entry(power).or_default();
                        entry.add_scaled(&prod, &c);
                    }
                    k += 1;
                }
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// `[self, other] = self ∘ other - other ∘ self`.
    pub fn commutator(&self, other: &PsiDO, floor: i64) -> Result<PsiDO> {
        Ok(self.compose(other, floor)?.sub(&other.compose(self, floor)?))
    }

    /// One line per power, highest first: `∂^e : <coefficient>`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (e, c) in self.coeffs.iter().rev() {
            s.push_str(&format!("∂^{e} : {c}\n"));
        }
        s
    }
}

impl fmt::Debug for PsiDO {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())?;
        match self.floor {
            Some(fl) => write!(f, "(known down to ∂^{fl})"),
            None => write!(f, "(exact)"),
        }
    }
}

/// The Lax operator `∂^r + v_1 ∂^{r-2} + ... + v_{r-1}` with generic jets.
#[derive(Clone, Debug)]
pub struct LaxOperator {
    r: u32,
    op: PsiDO,
}

impl LaxOperator {
    pub fn new(r: u32) -> Self {
        assert!(r >= 2, "r must be at least 2");
        let mut op = PsiDO::d(r as i64);
        for alpha in 1..r {
            op = op.add(&PsiDO::term((r - 1 - alpha) as i64, DiffPoly::var(alpha as u16, 0)));
        }
        LaxOperator { r, op }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn operator(&self) -> &PsiDO {
        &self.op
    }

    /// Coefficient of `∂^{r-1-alpha}`, i.e. the slot of `v_alpha`.
    pub fn slot(&self, alpha: u32) -> i64 {
        (self.r - 1 - alpha) as i64
    }
}

/// `L^{1/r} = ∂ + sum_{k>=1} u_k ∂^{-k}`, known down to `floor`.
///
/// Each `u_n` enters the `∂^{r-1-n}` coefficient of `(L^{1/r})^r` as `r u_n` plus terms in
/// `u_1, ..., u_{n-1}`, so the coefficients are solved one at a time without any division
/// by symbolic quantities.
pub fn rth_root(lax: &LaxOperator, floor: i64) -> Result<PsiDO> {
    if floor > -1 {
        return Err(Error::InsufficientDepth { requested: floor, achievable: -1 });
    }
    let r = lax.r() as i64;
    let inv_r = ratio(1, r);
    let mut root = PsiDO::d(1);
    for n in 1..=(-floor) {
        let target = r - 1 - n;
        let power = exact_power(&root, r as u32, target)?;
        let u = &lax.operator().coeff(target) - &power.coeff(target);
        root = root.add(&PsiDO::term(-n, u.scale(&inv_r)));
    }
    root.floor = Some(floor);
    Ok(root)
}

/// `op^m` known down to `floor`, for an exact `op` of top power 1.
fn exact_power(op: &PsiDO, m: u32, floor: i64) -> Result<PsiDO> {
    let m = m as i64;
    let mut acc = op.clone();
    for k in 2..=m {
        // acc = op^k known down to floor - (m - k)
        acc = op.compose(&acc, floor - (m - k))?;
    }
    Ok(acc)
}

/// `L^{i/r}` known down to `floor`, computed as a power of the root with pre-planned depth.
pub fn frac_power(lax: &LaxOperator, i: u32, floor: i64) -> Result<PsiDO> {
    assert!(i >= 1);
    let i = i as i64;
    let root = rth_root(lax, (floor - i + 1).min(-1))?;
    let mut acc = root.clone();
    for m in 2..=i {
        acc = acc.compose(&root, floor - (i - m))?;
    }
    Ok(acc.truncate(floor))
}

/// All of `L^{1/r}, L^{2/r}, ..., L^{max/r}`, each known down to `∂^{floor}` (or deeper).
#[derive(Clone, Debug)]
pub struct FracPowers {
    r: u32,
    powers: Vec<PsiDO>,
}

impl FracPowers {
    pub fn new(lax: &LaxOperator, max: u32, floor: i64) -> Result<Self> {
        assert!(max >= 1);
        let n = max as i64;
        let root = rth_root(lax, (floor - n + 1).min(-1))?;
        let mut powers = vec![root.clone()];
        for m in 2..=n {
            let next = powers.last().unwrap().compose(&root, floor - (n - m))?;
            powers.push(next);
        }
        Ok(FracPowers { r: lax.r(), powers })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn max(&self) -> u32 {
        self.powers.len() as u32
    }

    /// `L^{i/r}`.
    pub fn get(&self, i: u32) -> &PsiDO {
        &self.powers[i as usize - 1]
    }
}
