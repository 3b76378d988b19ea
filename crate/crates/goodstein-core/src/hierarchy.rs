//! Base hierarchies: sets of bases where each base divides the next.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::numerals::{nat, Nat};
use crate::{Error, Result};

/// A natural number or infinity. `Fin(_) < Inf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(Nat),
    Inf,
}

impl ExtNat {
    pub fn finite(&self) -> Option<&Nat> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

/// Either a complete finite hierarchy, or the exact prefix `B ∩ [0, horizon]`
/// of a larger (possibly infinite) one.
///
/// Queries whose answer depends on bases above the horizon fail with
/// [`Error::HorizonExhausted`] rather than guessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseHierarchy {
    bases: Vec<Nat>,
    horizon: Option<Nat>,
}

impl BaseHierarchy {
    pub fn validate<I: IntoIterator<Item = Nat>>(candidate: I) -> Result<Self> {
        let mut bases: Vec<Nat> = candidate.into_iter().collect();
        bases.sort();
        bases.dedup();
        check_chain(&bases)?;
        Ok(BaseHierarchy {
            bases,
            horizon: None,
        })
    }

    /// The known part `B ∩ [0, horizon]` of a hierarchy that may continue.
    pub fn prefix<I: IntoIterator<Item = Nat>>(candidate: I, horizon: Nat) -> Result<Self> {
        let mut h = Self::validate(candidate)?;
        if h.bases.last().is_some_and(|m| *m > horizon) {
            return Err(Error::HorizonExhausted {
                horizon,
                query: h.bases.last().unwrap().clone(),
            });
        }
        h.horizon = Some(horizon);
        Ok(h)
    }

    pub fn singleton(b: u64) -> Result<Self> {
        Self::validate([nat(b)])
    }

    pub fn from_u64s(bases: &[u64]) -> Result<Self> {
        Self::validate(bases.iter().map(|&b| nat(b)))
    }

    pub fn bases(&self) -> &[Nat] {
        &self.bases
    }

    pub fn min(&self) -> &Nat {
        &self.bases[0]
    }

    /// Largest base known so far.
    pub fn max_known(&self) -> &Nat {
        self.bases.last().expect("nonempty")
    }

    pub fn horizon(&self) -> Option<&Nat> {
        self.horizon.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.horizon.is_none()
    }

    fn covers(&self, n: &Nat) -> Result<()> {
        match &self.horizon {
            Some(h) if n > h => Err(Error::HorizonExhausted {
                horizon: h.clone(),
                query: n.clone(),
            }),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, n: &Nat) -> Result<bool> {
        if self.bases.binary_search(n).is_ok() {
            return Ok(true);
        }
        self.covers(n)?;
        Ok(false)
    }

    /// `S_B(n)`: the least base strictly above `n`.
    pub fn s_next(&self, n: &Nat) -> Result<ExtNat> {
        let idx = self.bases.partition_point(|b| b <= n);
        if let Some(b) = self.bases.get(idx) {
            return Ok(ExtNat::Fin(b.clone()));
        }
        match &self.horizon {
            None => Ok(ExtNat::Inf),
            Some(h) => Err(Error::HorizonExhausted {
                horizon: h.clone(),
                query: n + 1u32,
            }),
        }
    }

    pub fn s_next_ext(&self, n: &ExtNat) -> Result<ExtNat> {
        match n {
            ExtNat::Fin(n) => self.s_next(n),
            ExtNat::Inf => Ok(ExtNat::Inf),
        }
    }

    fn max_at_most(&self, bound: &Nat) -> Result<Nat> {
        let bound = if bound < self.min() {
            self.min()
        } else {
            bound
        };
        self.covers(bound)?;
        let idx = self.bases.partition_point(|b| b <= bound);
        Ok(self.bases[idx - 1].clone())
    }

    /// `base_B(n)`: the largest base not exceeding `max(n − 1, min B)`.
    pub fn lower_base(&self, n: &Nat) -> Result<Nat> {
        if n.is_zero() {
            return Ok(self.min().clone());
        }
        self.max_at_most(&(n - 1u32))
    }

    /// `Base_B(n)`: the largest base not exceeding `max(n, min B)`.
    pub fn upper_base(&self, n: &Nat) -> Result<Nat> {
        self.max_at_most(n)
    }

    pub fn is_critical(&self, n: &Nat) -> Result<bool> {
        if n <= self.min() {
            return Ok(false);
        }
        let b = self.upper_base(n)?;
        Ok(n.is_multiple_of(&b) && &b != n)
    }

    /// `B↾n = B ∩ [0, n]` as a complete finite hierarchy.
    pub fn restrict(&self, n: &Nat) -> Result<Self> {
        self.covers(n)?;
        Ok(self.clip(n))
    }

    /// The prefix `B ∩ [0, n]`, remembering that bases may continue above `n`.
    pub fn truncate(&self, n: &Nat) -> Result<Self> {
        self.covers(n)?;
        let mut h = self.clip(n);
        h.horizon = Some(n.clone());
        Ok(h)
    }

    fn clip(&self, n: &Nat) -> Self {
        let idx = self.bases.partition_point(|b| b <= n).max(1);
        BaseHierarchy {
            bases: self.bases[..idx].to_vec(),
            horizon: None,
        }
    }
}

fn check_chain(bases: &[Nat]) -> Result<()> {
    let first = bases.first().ok_or(Error::EmptyHierarchy)?;
    if first < &nat(2) {
        return Err(Error::BaseTooSmall(first.clone()));
    }
    for w in bases.windows(2) {
        if !w[1].is_multiple_of(&w[0]) {
            return Err(Error::Divisibility {
                lower: w[0].clone(),
                upper: w[1].clone(),
            });
        }
    }
    Ok(())
}

impl fmt::Display for BaseHierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.bases.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        if let Some(h) = &self.horizon {
            write!(f, "}}<={h}")
        } else {
            f.write_str("}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: &[u64]) -> BaseHierarchy {
        BaseHierarchy::from_u64s(v).unwrap()
    }

    fn n(v: u64) -> Nat {
        nat(v)
    }

    #[test]
    fn validation() {
        assert!(BaseHierarchy::from_u64s(&[2, 6]).is_ok());
        assert!(BaseHierarchy::from_u64s(&[17]).is_ok());
        assert_eq!(
            BaseHierarchy::from_u64s(&[2, 5]),
            Err(Error::Divisibility {
                lower: n(2),
                upper: n(5)
            })
        );
        assert_eq!(BaseHierarchy::from_u64s(&[]), Err(Error::EmptyHierarchy));
        assert_eq!(
            BaseHierarchy::from_u64s(&[1, 2]),
            Err(Error::BaseTooSmall(n(1)))
        );
    }

    #[test]
    fn next_base() {
        assert_eq!(h(&[3, 30, 180]).s_next(&n(3)).unwrap(), ExtNat::Fin(n(30)));
        assert_eq!(h(&[5]).s_next(&n(5)).unwrap(), ExtNat::Inf);
        assert_eq!(h(&[2, 6]).s_next(&n(0)).unwrap(), ExtNat::Fin(n(2)));
        let lazy = BaseHierarchy::prefix([n(3), n(27)], n(100)).unwrap();
        assert!(matches!(
            lazy.s_next(&n(27)),
            Err(Error::HorizonExhausted { .. })
        ));
    }

    #[test]
    fn lower_and_upper() {
        let b = h(&[5, 10]);
        assert_eq!(b.lower_base(&n(7)).unwrap(), n(5));
        assert_eq!(b.upper_base(&n(7)).unwrap(), n(5));
        assert_eq!(b.lower_base(&n(10)).unwrap(), n(5));
        assert_eq!(b.upper_base(&n(10)).unwrap(), n(10));
        assert_eq!(b.lower_base(&n(0)).unwrap(), n(5));
        assert_eq!(b.upper_base(&n(0)).unwrap(), n(5));
        assert_eq!(b.lower_base(&n(5)).unwrap(), n(5));
    }

    #[test]
    fn critical_numbers() {
        let b = h(&[2]);
        assert!(b.is_critical(&n(4)).unwrap());
        assert!(!b.is_critical(&n(5)).unwrap());
        assert!(!b.is_critical(&n(2)).unwrap());
        assert!(!h(&[2, 6]).is_critical(&n(6)).unwrap());
        assert!(h(&[2, 6]).is_critical(&n(12)).unwrap());
    }

    #[test]
    fn restriction() {
        assert_eq!(h(&[2, 6]).restrict(&n(4)).unwrap(), h(&[2]));
        assert_eq!(h(&[3, 12]).restrict(&n(12)).unwrap(), h(&[3, 12]));
        assert_eq!(h(&[3, 30, 180]).restrict(&n(100)).unwrap(), h(&[3, 30]));
    }

    #[test]
    fn horizon_is_not_infinity() {
        let lazy = BaseHierarchy::prefix([n(2)], n(10)).unwrap();
        assert_eq!(lazy.upper_base(&n(10)).unwrap(), n(2));
        assert!(matches!(
            lazy.upper_base(&n(11)),
            Err(Error::HorizonExhausted { .. })
        ));
        assert!(matches!(
            lazy.restrict(&n(11)),
            Err(Error::HorizonExhausted { .. })
        ));
        assert!(!lazy.contains(&n(9)).unwrap());
        assert!(lazy.contains(&n(11)).is_err());
    }

    #[test]
    fn bases_agree_off_base_points() {
        for v in [&[2u64, 6][..], &[2, 4, 8], &[3, 12]] {
            let b = h(v);
            for k in 0..60u64 {
                let k = n(k);
                let differ = b.lower_base(&k).unwrap() != b.upper_base(&k).unwrap();
                let special = b.contains(&k).unwrap() && &k != b.min();
                assert_eq!(differ, special);
            }
        }
    }
}
