//! Cofinality, fundamental sequences and stepping down them.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::{psi, Atom, Cnt, OrdTerm};
use crate::numerals::{nat, Budget, Nat};
use crate::{Error, Result};

/// `τ(ξ)` refined by a marker for zero and successors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cofinality {
    Zero,
    Successor,
    Omega,
    BigOmega,
}

/// Predecessor of a countable `β = β' + 1`, also for `ψ(ζ' + 1) = ψ(ζ') + 1`.
fn cnt_pred(c: &Cnt) -> Option<Cnt> {
    if let Some(p) = c.predecessor() {
        return Some(p);
    }
    let (prefix, last) = c.without_last()?;
    let Atom::Psi(arg) = last else {
        return None;
    };
    let below = psi(arg.predecessor()?).ok()?;
    prefix.add(&below).ok()
}

fn term_pred(x: &OrdTerm) -> Option<OrdTerm> {
    if !x.is_countable() {
        return x.predecessor();
    }
    cnt_pred(&x.tail).map(Into::into)
}

impl OrdTerm {
    /// The cofinality clauses verbatim; every countable term gets `ω`.
    pub fn tau(&self) -> Result<Cofinality> {
        let Some(((alpha, beta), rest)) = self.split_leading() else {
            return Ok(Cofinality::Omega);
        };
        if !rest.is_zero() {
            return rest.tau();
        }
        if cnt_pred(&beta).is_none() {
            return Ok(Cofinality::Omega);
        }
        if term_pred(&alpha).is_some() {
            Ok(Cofinality::BigOmega)
        } else {
            alpha.tau()
        }
    }

    pub fn cofinality(&self) -> Result<Cofinality> {
        if self.is_zero() {
            Ok(Cofinality::Zero)
        } else if term_pred(self).is_some() {
            Ok(Cofinality::Successor)
        } else {
            self.tau()
        }
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && term_pred(self).is_none()
    }

    /// `ξ[θ]`.
    ///
    /// `ω[θ] = θ`, so `ψ(Ω)[i] = i`. Finite `n > 0` steps to `n − 1`.
    pub fn fund_seq(&self, index: &Cnt) -> Result<OrdTerm> {
        self.fund_seq_within(index, &Budget::default())
    }

    /// `ξ[θ]`, failing once an intermediate term exceeds the term budget.
    pub fn fund_seq_within(&self, index: &Cnt, budget: &Budget) -> Result<OrdTerm> {
        if self.has_theta() {
            return Err(Error::NoFundamentalSequence(self.to_string()));
        }
        let countable_only = self.tau()? == Cofinality::Omega;
        if countable_only && index.as_finite().is_none() {
            return Err(Error::BadIndex {
                term: self.to_string(),
                index: OrdTerm::from(index.clone()).to_string(),
            });
        }
        fs(self, index, budget)?.within(budget)
    }

    pub fn fund_seq_at(&self, i: u64) -> Result<OrdTerm> {
        self.fund_seq(&Cnt::small(i))
    }
}

fn fs(x: &OrdTerm, theta: &Cnt, budget: &Budget) -> Result<OrdTerm> {
    let Some(((alpha, beta), rest)) = x.split_leading() else {
        return fs_cnt(&x.tail, theta, budget).map(Into::into);
    };
    if !rest.is_zero() {
        let r = fs(&rest, theta, budget)?;
        let mut parts = alloc::vec![(alpha, beta)];
        parts.extend(r.parts);
        return Ok(OrdTerm {
            parts,
            tail: r.tail,
        });
    }
    let Some(pred) = cnt_pred(&beta) else {
        let b = fs_cnt(&beta, theta, budget)?;
        return Ok(OrdTerm::omega_pow(alpha, b));
    };
    if !pred.is_zero() {
        let lower = fs(
            &OrdTerm::omega_pow(alpha.clone(), Cnt::small(1)),
            theta,
            budget,
        )?;
        return OrdTerm::omega_pow(alpha, pred).add(&lower);
    }
    match term_pred(&alpha) {
        Some(a) => Ok(OrdTerm::omega_pow(a, theta.clone())),
        None => Ok(OrdTerm::omega_pow(
            fs(&alpha, theta, budget)?,
            Cnt::small(1),
        )),
    }
}

fn finite_index(theta: &Cnt, at: &Atom) -> Result<u64> {
    theta
        .as_finite()
        .and_then(|n| n.to_u64())
        .ok_or_else(|| Error::BadIndex {
            term: OrdTerm::from(Cnt::atom(at.clone())).to_string(),
            index: OrdTerm::from(theta.clone()).to_string(),
        })
}

fn fs_cnt(c: &Cnt, theta: &Cnt, budget: &Budget) -> Result<Cnt> {
    if let Some(n) = c.as_finite() {
        return Ok(if n <= &nat(1) {
            Cnt::zero()
        } else {
            Cnt::fin(n - 1u32)
        });
    }
    if let Some(p) = cnt_pred(c) {
        return Ok(p);
    }
    let (prefix, last) = c.without_last().expect("limit with atoms");
    let value = match &last {
        Atom::Omega => Cnt::fin(nat(finite_index(theta, &last)?)),
        Atom::Theta(_) => {
            return Err(Error::NoFundamentalSequence(
                OrdTerm::from(Cnt::atom(last.clone())).to_string(),
            ))
        }
        Atom::Psi(zeta) => match zeta.tau()? {
            Cofinality::BigOmega => {
                let k = finite_index(theta, &last)?;
                let mut x = Cnt::zero();
                for _ in 0..k {
                    x = psi(fs(zeta, &x, budget)?)?;
                    x = OrdTerm::from(x).within(budget)?.tail;
                }
                x
            }
            _ => {
                finite_index(theta, &last)?;
                psi(fs(zeta, theta, budget)?)?
            }
        },
    };
    prefix.add(&value)
}

/// `Ω^^n`, with `Ω^^0 = 1`.
pub fn omega_tower(n: u64) -> OrdTerm {
    let mut t = OrdTerm::small(1);
    for _ in 0..n {
        t = OrdTerm::omega_pow(t, Cnt::small(1));
    }
    t
}

/// `α⟦0⟧ = α`, `α⟦i+1⟧ = α⟦i⟧[i+1]`, until zero or `upto` steps.
pub fn step_down(start: &OrdTerm, upto: u64, budget: &Budget) -> Result<Vec<OrdTerm>> {
    if !start.is_countable() {
        return Err(Error::Uncountable(start.to_string()));
    }
    let mut out = alloc::vec![start.clone().within(budget)?];
    let mut i = 0u64;
    while !out.last().unwrap().is_zero() && i < upto {
        if i >= budget.work {
            return Err(Error::WorkBudget { limit: budget.work });
        }
        let next = out
            .last()
            .unwrap()
            .fund_seq_within(&Cnt::small(i + 1), budget)?;
        out.push(next);
        i += 1;
    }
    Ok(out)
}

/// The least `ℓ` with `ψ(Ω^^n)⟦ℓ⟧ = 0`.
pub fn big_f(n: u64, budget: &Budget) -> Result<Nat> {
    let start: OrdTerm = psi(omega_tower(n))?.into();
    let seq = step_down(&start, budget.work, budget)?;
    if !seq.last().unwrap().is_zero() {
        return Err(Error::WorkBudget { limit: budget.work });
    }
    Ok(nat(seq.len() as u64 - 1))
}
