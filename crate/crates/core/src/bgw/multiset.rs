use std::cmp::Ordering;
use std::fmt;

use num_traits::One;

use crate::algebra::{factorial, Rational};
use crate::hierarchy::times_up_to;

/// A sorted multiset of time indices, standing for `t_{i_1} ... t_{i_k}` or `τ_{i_1} ... τ_{i_k}`.
///
/// Ordered by total weight, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Multiset(Vec<u32>);

impl Multiset {
    pub fn empty() -> Self {
        Multiset(Vec::new())
    }

    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        Multiset(indices)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn count(&self, i: u32) -> usize {
        self.0.iter().filter(|&&x| x == i).count()
    }

    /// `(index, multiplicity)` pairs in increasing index order.
    pub fn counts(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &i in &self.0 {
            match out.last_mut() {
                Some((j, n)) if *j == i => *n += 1,
                _ => out.push((i, 1)),
            }
        }
        out
    }

    /// `prod_i (mult_i)!`, the ratio between a correlator and its Taylor coefficient.
    pub fn symmetry_factor(&self) -> Rational {
        self.counts().iter().fold(Rational::one(), |acc, &(_, n)| acc * factorial(n as u64))
    }

    pub fn with(&self, i: u32) -> Multiset {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&x| x <= i);
        v.insert(pos, i);
        Multiset(v)
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Multiset::new(v)
    }

    /// Removes one copy of `i`, if present.
    pub fn without(&self, i: u32) -> Option<Multiset> {
        let pos = self.0.iter().position(|&x| x == i)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Multiset(v))
    }

    /// `self - other` when `other` is a sub-multiset.
    pub fn difference(&self, other: &Multiset) -> Option<Multiset> {
        let mut v = self.0.clone();
        for &i in &other.0 {
            let pos = v.iter().position(|&x| x == i)?;
            v.remove(pos);
        }
        Some(Multiset(v))
    }

    /// Every sub-multiset, including the empty one and `self`.
    pub fn sub_multisets(&self) -> Vec<Multiset> {
        let counts = self.counts();
        let mut out = vec![Vec::new()];
        for (i, n) in counts {
            let mut next = Vec::with_capacity(out.len() * (n + 1));
            for base in &out {
                for k in 0..=n {
                    let mut v: Vec<u32> = base.clone();
                    v.extend(std::iter::repeat_n(i, k));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(Multiset::new).collect()
    }
}

impl Ord for Multiset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Multiset {
    /// `t1^2 t3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts()
            .into_iter()
            .map(|(i, n)| if n == 1 { format!("t{i}") } else { format!("t{i}^{n}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All nonempty multisets of GD times with total weight `<= weight`, in [`Multiset`] order.
pub fn multisets_up_to(r: u32, weight: u32) -> Vec<Multiset> {
    let times = times_up_to(r, weight);
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u32>, usize, u32)> = vec![(Vec::new(), 0, 0)];
    while let Some((cur, start, w)) = stack.pop() {
        for (k, &t) in times.iter().enumerate().skip(start) {
            if w + t > weight {
                break;
            }
            let mut next = cur.clone();
            next.push(t);
            out.push(Multiset(next.clone()));
            stack.push((next, k, w + t));
        }
    }
    out.sort();
    out
}
