use alloc::collections::BTreeMap;

use num_traits::Zero;

use super::{lift, DigitMap};
use crate::hierarchy::BaseHierarchy;
use crate::numerals::{Budget, Nat};
use crate::ordinal_terms::{theta, Cnt, OrdTerm};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaValue {
    pub big: OrdTerm,
    pub star: Cnt,
    pub little: Cnt,
}

/// `O_B`, `o*_B` and `o_B` over one hierarchy, memoized.
///
/// Coefficients and exponents below the base read `n ↦ n` under `min B` and
/// `o_B` above it, while the units digit reads `o_B` with `0 ↦ 0`. This is
/// the reading under which `O_B(7) = Ω + ω` for `B = {2, 6}`.
#[derive(Debug, Clone)]
pub struct ThetaInterp {
    hierarchy: BaseHierarchy,
    budget: Budget,
    memo: BTreeMap<Nat, ThetaValue>,
}

struct Digits<'a>(&'a mut ThetaInterp);

impl DigitMap for Digits<'_> {
    fn coefficient(&mut self, x: &Nat) -> Result<Cnt> {
        if x < self.0.hierarchy.min() {
            Ok(Cnt::fin(x.clone()))
        } else {
            self.0.little_o(x)
        }
    }

    fn units(&mut self, x: &Nat) -> Result<Cnt> {
        if x.is_zero() {
            Ok(Cnt::zero())
        } else {
            self.0.little_o(x)
        }
    }
}

impl ThetaInterp {
    pub fn new(hierarchy: BaseHierarchy, budget: Budget) -> Self {
        ThetaInterp {
            hierarchy,
            budget,
            memo: BTreeMap::new(),
        }
    }

    pub fn hierarchy(&self) -> &BaseHierarchy {
        &self.hierarchy
    }

    /// `O^b_B(x)`.
    pub fn big_o_at(&mut self, b: &Nat, x: &Nat) -> Result<OrdTerm> {
        let budget = self.budget;
        lift(&mut Digits(self), b, x, &budget)
    }

    pub fn value(&mut self, n: &Nat) -> Result<ThetaValue> {
        if let Some(v) = self.memo.get(n) {
            return Ok(v.clone());
        }
        let v = self.compute(n)?;
        self.memo.insert(n.clone(), v.clone());
        Ok(v)
    }

    pub fn big_o(&mut self, n: &Nat) -> Result<OrdTerm> {
        Ok(self.value(n)?.big)
    }

    pub fn o_star(&mut self, n: &Nat) -> Result<Cnt> {
        Ok(self.value(n)?.star)
    }

    pub fn little_o(&mut self, n: &Nat) -> Result<Cnt> {
        Ok(self.value(n)?.little)
    }

    fn compute(&mut self, n: &Nat) -> Result<ThetaValue> {
        let min = self.hierarchy.min().clone();
        if n < &min {
            let big = OrdTerm::fin(n.clone());
            return Ok(ThetaValue {
                little: theta(big.clone()),
                big,
                star: Cnt::zero(),
            });
        }
        let b = self.hierarchy.lower_base(n)?;
        let big = if n != &min && self.hierarchy.contains(n)? {
            let rest = n - &b;
            let head = self.big_o_at(&b, &rest)?;
            head.add(&self.little_o(&rest)?.into())?
        } else {
            self.big_o_at(&b, n)?
        };
        let star = self.star_for(n, &big)?;
        let little = theta(
            big.natural_sum(&star.clone().into())?
                .within(&self.budget)?,
        );
        Ok(ThetaValue { big, star, little })
    }

    fn star_for(&mut self, n: &Nat, big: &OrdTerm) -> Result<Cnt> {
        let reach = big.plus_big_omega()?;
        let below: alloc::vec::Vec<Nat> = self
            .hierarchy
            .bases()
            .iter()
            .filter(|c| *c < n)
            .rev()
            .cloned()
            .collect();
        for c in below {
            let candidate = self.big_o(&c)?.plus_big_omega()?;
            if candidate.compare(&reach)? != core::cmp::Ordering::Less {
                return self.little_o(&c);
            }
        }
        Ok(Cnt::zero())
    }
}
