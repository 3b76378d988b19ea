use alloc::collections::BTreeMap;

use core::cmp::Ordering;

use num_traits::Zero;

use super::{lift, DigitMap};
use crate::hierarchy::BaseHierarchy;
use crate::numerals::{decompose, digits, Budget, Nat};
use crate::ordinal_terms::{cnt_below_psi, psi, Cnt, OrdTerm};
use crate::Result;

/// `U_B` and `u_B = ψ(U_B)` over one hierarchy, with the three normal forms.
#[derive(Debug, Clone)]
pub struct PsiInterp {
    hierarchy: BaseHierarchy,
    budget: Budget,
    memo: BTreeMap<Nat, (OrdTerm, Cnt)>,
    u_nf: BTreeMap<Nat, bool>,
}

struct Digits<'a>(&'a mut PsiInterp);

impl DigitMap for Digits<'_> {
    fn coefficient(&mut self, x: &Nat) -> Result<Cnt> {
        self.0.little_u(x)
    }

    fn units(&mut self, x: &Nat) -> Result<Cnt> {
        self.0.little_u(x)
    }
}

impl PsiInterp {
    pub fn new(hierarchy: BaseHierarchy, budget: Budget) -> Self {
        PsiInterp {
            hierarchy,
            budget,
            memo: BTreeMap::new(),
            u_nf: BTreeMap::new(),
        }
    }

    pub fn hierarchy(&self) -> &BaseHierarchy {
        &self.hierarchy
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// `U^b_B(x)`, reading digits below `b` through `u_B`.
    pub fn big_u_at(&mut self, b: &Nat, x: &Nat) -> Result<OrdTerm> {
        let budget = self.budget;
        lift(&mut Digits(self), b, x, &budget)
    }

    fn entry(&mut self, n: &Nat) -> Result<(OrdTerm, Cnt)> {
        if let Some(v) = self.memo.get(n) {
            return Ok(v.clone());
        }
        let v = if n < self.hierarchy.min() {
            (OrdTerm::fin(n.clone()), Cnt::fin(n.clone()))
        } else {
            let b = self.hierarchy.upper_base(n)?;
            let big = self.big_u_at(&b, n)?;
            let little = psi(big.clone())?;
            (big, little)
        };
        self.memo.insert(n.clone(), v.clone());
        Ok(v)
    }

    /// `U_B(n)`; below `min B` this is `n` itself.
    pub fn big_u(&mut self, n: &Nat) -> Result<OrdTerm> {
        Ok(self.entry(n)?.0)
    }

    pub fn little_u(&mut self, n: &Nat) -> Result<Cnt> {
        Ok(self.entry(n)?.1)
    }

    /// `Base_B(n)` for `n ≥ min B`.
    pub fn base_of(&self, n: &Nat) -> Result<Nat> {
        self.hierarchy.upper_base(n)
    }

    /// `n` in `U^b_B`-normal form.
    pub fn is_ub_normal_form(&mut self, b: &Nat, n: &Nat) -> Result<bool> {
        if n < self.hierarchy.min() {
            return Ok(true);
        }
        if n < b {
            return self.is_u_normal_form(n);
        }
        let d = decompose(n, b)?;
        if !self.is_u_normal_form(&d.digit)?
            || !self.is_ub_normal_form(b, &d.exponent)?
            || !self.is_ub_normal_form(b, &d.remainder)?
        {
            return Ok(false);
        }
        if d.remainder.is_zero() {
            return Ok(true);
        }
        let head = OrdTerm::omega_pow(self.big_u_at(b, &d.exponent)?, Cnt::small(1));
        let tail = self.big_u_at(b, &d.remainder)?;
        Ok(tail.compare(&head)? == Ordering::Less)
    }

    pub fn is_big_u_normal_form(&mut self, n: &Nat) -> Result<bool> {
        if n < self.hierarchy.min() {
            return Ok(true);
        }
        let b = self.base_of(n)?;
        self.is_ub_normal_form(&b, n)
    }

    /// `n` in `U_B`-normal form with every digit's `u`-value below `u_B(n)`.
    pub fn is_u_normal_form(&mut self, n: &Nat) -> Result<bool> {
        if n < self.hierarchy.min() {
            return Ok(true);
        }
        if let Some(&known) = self.u_nf.get(n) {
            return Ok(known);
        }
        let verdict = self.u_normal_form_uncached(n)?;
        self.u_nf.insert(n.clone(), verdict);
        Ok(verdict)
    }

    fn u_normal_form_uncached(&mut self, n: &Nat) -> Result<bool> {
        if !self.is_big_u_normal_form(n)? {
            return Ok(false);
        }
        let b = self.base_of(n)?;
        let big = self.big_u(n)?;
        for c in digits(n, &b)? {
            if !cnt_below_psi(&self.little_u(&c)?, &big)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
