//! The deep base-change operator Φ and the upgrade ↑ between hierarchies.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::hierarchy::{BaseHierarchy, ExtNat};
use crate::numerals::{expand, nat, Budget, Nat};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Structural,
    Literal,
}

/// Upgrades from a source hierarchy `B` into a target `C`, memoizing `↑`.
///
/// [`upgrade`](Self::upgrade) takes a shortcut that is exact whenever `C` is
/// a good successor of `B`: a base `n` goes to `S_C(↑(n−1))`, anything else
/// to `Φ^b_c(n)` for the first `c ≥ ↑b` that stays below `S_C(c)`, with the
/// lower bound `↑(n−1) < ↑n` rechecked. [`upgrade_literal`](Self::upgrade_literal)
/// runs the defining course-of-values recursion from 0.
#[derive(Debug, Clone)]
pub struct UpgradeContext {
    source: BaseHierarchy,
    target: BaseHierarchy,
    memo: BTreeMap<Nat, Nat>,
    literal: Vec<Nat>,
    budget: Budget,
}

impl UpgradeContext {
    pub fn new(source: BaseHierarchy, target: BaseHierarchy, budget: Budget) -> Result<Self> {
        if source.min() > target.min() {
            return Err(Error::MinimumOrder);
        }
        Ok(UpgradeContext {
            source,
            target,
            memo: BTreeMap::new(),
            literal: Vec::new(),
            budget,
        })
    }

    pub fn source(&self) -> &BaseHierarchy {
        &self.source
    }

    pub fn target(&self) -> &BaseHierarchy {
        &self.target
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Swap in end-extensions of both hierarchies, keeping computed values.
    ///
    /// Callers must only grow the hierarchies above everything already
    /// upgraded; ouroboros stages satisfy this.
    pub fn extend(&mut self, source: BaseHierarchy, target: BaseHierarchy) {
        debug_assert!(source.bases().starts_with(self.source.bases()));
        debug_assert!(target.bases().starts_with(self.target.bases()));
        self.source = source;
        self.target = target;
    }

    pub fn set_target(&mut self, target: BaseHierarchy) {
        debug_assert!(target.bases().starts_with(self.target.bases()));
        self.target = target;
    }

    /// `Φ^b_c(m)`.
    pub fn deep_base_change(&mut self, m: &Nat, b: &Nat, c: &Nat) -> Result<Nat> {
        self.phi(m, b, c, Mode::Structural)
    }

    fn phi(&mut self, m: &Nat, b: &Nat, c: &Nat, mode: Mode) -> Result<Nat> {
        if m < b {
            return self.up(m, mode);
        }
        let mut total = Nat::zero();
        for place in expand(m, b)? {
            let digit = self.up(&place.digit, mode)?;
            let piece = if place.exponent.is_zero() {
                digit
            } else {
                let e = self.phi(&place.exponent, b, c, mode)?;
                self.budget.term(c, &e, &digit)?
            };
            total = self.budget.add(&total, &piece)?;
        }
        Ok(total)
    }

    fn up(&mut self, m: &Nat, mode: Mode) -> Result<Nat> {
        match mode {
            Mode::Structural => self.raw(m),
            Mode::Literal => {
                let i = m
                    .to_usize()
                    .expect("digit below an already processed bound");
                Ok(self.literal[i].clone())
            }
        }
    }

    pub fn upgrade(&mut self, n: &Nat) -> Result<Nat> {
        if let Some(v) = self.memo.get(n) {
            return Ok(v.clone());
        }
        let v = self.raw(n)?;
        if n > self.source.min() {
            let prev = self.raw(&(n - 1u32))?;
            if prev >= v {
                return self.upgrade_literal(n);
            }
        }
        Ok(v)
    }

    fn raw(&mut self, n: &Nat) -> Result<Nat> {
        if n < self.source.min() {
            return Ok(n.clone());
        }
        if let Some(v) = self.memo.get(n) {
            return Ok(v.clone());
        }
        let b = self.source.upper_base(n)?;
        let v = if &b == n {
            if n == self.source.min() {
                self.target.min().clone()
            } else {
                let prev = self.raw(&(n - 1u32))?;
                match self.target.s_next(&prev)? {
                    ExtNat::Fin(c) => c,
                    ExtNat::Inf => return Err(Error::UpgradeInfinite(n.clone())),
                }
            }
        } else {
            let start = self.raw(&b)?;
            let from = self.target.bases().partition_point(|c| *c < start);
            let mut found = None;
            for idx in from..self.target.bases().len() {
                let c = self.target.bases()[idx].clone();
                let r = self.phi(n, &b, &c, Mode::Structural)?;
                if self.below_next(&r, &c)? {
                    found = Some(r);
                    break;
                }
            }
            match found {
                Some(r) => r,
                None => return Err(self.exhausted(n)),
            }
        };
        self.memo.insert(n.clone(), v.clone());
        Ok(v)
    }

    fn below_next(&self, r: &Nat, c: &Nat) -> Result<bool> {
        match self.target.s_next(c) {
            Ok(ExtNat::Fin(s)) => Ok(r < &s),
            Ok(ExtNat::Inf) => Ok(true),
            Err(e) => match self.target.horizon() {
                Some(h) if r <= h => Ok(true),
                _ => Err(e),
            },
        }
    }

    fn exhausted(&self, n: &Nat) -> Error {
        match self.target.horizon() {
            Some(h) => Error::HorizonExhausted {
                horizon: h.clone(),
                query: n.clone(),
            },
            None => Error::UpgradeInfinite(n.clone()),
        }
    }

    /// `↑n` computed straight from the definition, filling every value below.
    pub fn upgrade_literal(&mut self, n: &Nat) -> Result<Nat> {
        let limit = self.budget.work;
        let target = n
            .to_u64()
            .filter(|&t| t < limit)
            .ok_or(Error::WorkBudget { limit })? as usize;
        while self.literal.len() <= target {
            let k = nat(self.literal.len() as u64);
            let v = self.literal_step(&k)?;
            self.literal.push(v);
        }
        Ok(self.literal[target].clone())
    }

    fn literal_step(&mut self, k: &Nat) -> Result<Nat> {
        if k < self.source.min() {
            return Ok(k.clone());
        }
        let b = self.source.upper_base(k)?;
        let prev = self.literal.last().cloned().unwrap_or_default();
        for idx in 0..self.target.bases().len() {
            let c = self.target.bases()[idx].clone();
            let r = if &b == k {
                c.clone()
            } else {
                self.phi(k, &b, &c, Mode::Literal)?
            };
            if prev < r && self.below_next(&r, &c)? {
                return Ok(r);
            }
        }
        Err(self.exhausted(k))
    }
}

/// Outcome of [`check_good_successor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoodSuccessorReport {
    /// Every condition held for all `n ≤ checked`.
    Pass {
        checked: Nat,
    },
    /// One of the hierarchies failed validation.
    Invalid(Error),
    Violation {
        n: Nat,
        kind: Violation,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MinimumOrder,
    /// `↑n` is infinite: no target base works.
    Infinite,
    /// A multiple of `Base_C(↑n)` lies strictly between `↑n` and `S_C(↑n)`.
    Gap {
        image: Nat,
        multiple: Nat,
    },
}

impl GoodSuccessorReport {
    pub fn passed(&self) -> bool {
        matches!(self, GoodSuccessorReport::Pass { .. })
    }
}

pub fn check_good_successor_sets(
    source: &[Nat],
    target: &[Nat],
    bound: &Nat,
    budget: Budget,
) -> Result<GoodSuccessorReport> {
    let source = match BaseHierarchy::validate(source.iter().cloned()) {
        Ok(h) => h,
        Err(e) => return Ok(GoodSuccessorReport::Invalid(e)),
    };
    let target = match BaseHierarchy::validate(target.iter().cloned()) {
        Ok(h) => h,
        Err(e) => return Ok(GoodSuccessorReport::Invalid(e)),
    };
    check_good_successor(&source, &target, bound, budget)
}

/// Checks the good-successor conditions for every `n ≤ bound`.
///
/// Budget and horizon exhaustion come back as `Err`, never as a violation.
pub fn check_good_successor(
    source: &BaseHierarchy,
    target: &BaseHierarchy,
    bound: &Nat,
    budget: Budget,
) -> Result<GoodSuccessorReport> {
    if source.min() > target.min() {
        return Ok(GoodSuccessorReport::Violation {
            n: Nat::zero(),
            kind: Violation::MinimumOrder,
        });
    }
    let mut ctx = UpgradeContext::new(source.clone(), target.clone(), budget)?;
    let mut n = Nat::zero();
    while &n <= bound {
        let image = match ctx.upgrade_literal(&n) {
            Ok(v) => v,
            Err(Error::UpgradeInfinite(_)) => {
                return Ok(GoodSuccessorReport::Violation {
                    n,
                    kind: Violation::Infinite,
                })
            }
            Err(e) => return Err(e),
        };
        let succ = &n + 1u32;
        if &succ > source.min() && source.contains(&succ)? {
            let d = target.upper_base(&image)?;
            let multiple = (&image / &d + 1u32) * &d;
            if let ExtNat::Fin(s) = target.s_next(&image)? {
                if multiple < s {
                    return Ok(GoodSuccessorReport::Violation {
                        n,
                        kind: Violation::Gap { image, multiple },
                    });
                }
            }
        }
        n = succ;
    }
    Ok(GoodSuccessorReport::Pass {
        checked: bound.clone(),
    })
}

/// `b | n ⇔ c | Φ^b_c(n)`, exposed for property checks.
pub fn divisibility_transfers(ctx: &mut UpgradeContext, n: &Nat, b: &Nat, c: &Nat) -> Result<bool> {
    let image = ctx.deep_base_change(n, b, c)?;
    Ok(n.is_multiple_of(b) == image.is_multiple_of(c))
}
