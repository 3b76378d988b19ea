use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;

use num_traits::{ToPrimitive, Zero};

use super::PsiInterp;
use crate::hierarchy::BaseHierarchy;
use crate::numerals::{decompose, digits, nat, Budget, Nat};
use crate::ordinal_terms::{Cnt, Cofinality, OrdTerm};
use crate::successors::OuroborosBuilder;
use crate::{Error, Result};

/// A fundamental sequence index `ι` together with some `c` with `u(c) = ι`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Index {
    pub value: Cnt,
    pub source: Nat,
}

impl Index {
    /// A finite index below `min B`, which is its own source.
    pub fn finite(i: u64) -> Self {
        Index {
            value: Cnt::small(i),
            source: nat(i),
        }
    }
}

/// Supplies `a' < a` with `u(a') = u(a)[ι]` for digits `a` whose `u`-value is a limit.
pub trait DigitOracle {
    fn limit_digit(&mut self, ctx: &mut PsiInterp, digit: &Nat, iota: &Index) -> Result<Nat>;
}

/// Tries every candidate below the digit, smallest first.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOracle;

impl DigitOracle for SearchOracle {
    fn limit_digit(&mut self, ctx: &mut PsiInterp, digit: &Nat, iota: &Index) -> Result<Nat> {
        let target =
            OrdTerm::from(ctx.little_u(digit)?).fund_seq_within(&iota.value, ctx.budget())?;
        let mut a = Nat::zero();
        while &a < digit {
            if OrdTerm::from(ctx.little_u(&a)?) == target && ctx.is_u_normal_form(&a)? {
                return Ok(a);
            }
            a += 1u32;
        }
        Err(Error::Hypothesis(format!(
            "no digit below {digit} realizes {target}"
        )))
    }
}

/// `s' < s` in `U^b`-normal form with `U^b(s') = U^b(s)[ι]`.
///
/// The result is checked against a fresh evaluation of both sides.
pub fn fs_witness(
    ctx: &mut PsiInterp,
    b: &Nat,
    s: &Nat,
    iota: &Index,
    oracle: &mut dyn DigitOracle,
) -> Result<Nat> {
    if !ctx.is_ub_normal_form(b, s)? {
        return Err(Error::NotNormalForm(s.to_string()));
    }
    if &iota.source >= b || ctx.little_u(&iota.source)? != iota.value {
        return Err(Error::Hypothesis(format!(
            "{} does not name the index",
            iota.source
        )));
    }
    let found = step(ctx, b, s, iota, oracle)?;
    let budget = *ctx.budget();
    let expected = ctx.big_u_at(b, s)?.fund_seq_within(&iota.value, &budget)?;
    let got = ctx.big_u_at(b, &found)?;
    if &found >= s || got != expected || !ctx.is_ub_normal_form(b, &found)? {
        return Err(Error::Witness(format!("{found} for {s} in base {b}")));
    }
    Ok(found)
}

/// `a'` with `u(a') + 1 = u(a)`.
fn predecessor(ctx: &mut PsiInterp, a: &Nat) -> Result<Nat> {
    if a < ctx.hierarchy().min() {
        return Ok(a - 1u32);
    }
    let b = ctx.base_of(a)?;
    step(ctx, &b, a, &Index::finite(0), &mut NoOracle)
}

struct NoOracle;

impl DigitOracle for NoOracle {
    fn limit_digit(&mut self, _: &mut PsiInterp, digit: &Nat, _: &Index) -> Result<Nat> {
        Err(Error::Hypothesis(format!(
            "successor step reached the limit digit {digit}"
        )))
    }
}

fn digit_step(
    ctx: &mut PsiInterp,
    a: &Nat,
    iota: &Index,
    oracle: &mut dyn DigitOracle,
) -> Result<Nat> {
    match OrdTerm::from(ctx.little_u(a)?).cofinality()? {
        Cofinality::Zero => Err(Error::Hypothesis("zero has no fundamental sequence".into())),
        Cofinality::Successor => predecessor(ctx, a),
        _ => oracle.limit_digit(ctx, a, iota),
    }
}

fn step(
    ctx: &mut PsiInterp,
    b: &Nat,
    s: &Nat,
    iota: &Index,
    oracle: &mut dyn DigitOracle,
) -> Result<Nat> {
    let budget = *ctx.budget();
    if s < b {
        return digit_step(ctx, s, iota, oracle);
    }
    if s == b {
        return Ok(iota.source.clone());
    }
    let d = decompose(s, b)?;
    let power = budget.pow(b, &d.exponent)?;
    if !d.remainder.is_zero() {
        let r = step(ctx, b, &d.remainder, iota, oracle)?;
        return Ok(&power * &d.digit + r);
    }
    let alpha = OrdTerm::from(ctx.little_u(&d.digit)?);
    if alpha.is_limit() {
        let a = oracle.limit_digit(ctx, &d.digit, iota)?;
        return Ok(&power * a);
    }
    if !alpha.is_one() {
        let a = predecessor(ctx, &d.digit)?;
        let lower = step(ctx, b, &power, iota, oracle)?;
        return budget.add(&budget.mul(&power, &a)?, &lower);
    }
    let eta = ctx.big_u_at(b, &d.exponent)?;
    if eta.is_limit() {
        let e = step(ctx, b, &d.exponent, iota, oracle)?;
        return budget.pow(b, &e);
    }
    // Ω^{δ+1}[ι] = Ω^δ·ι
    let e = step(ctx, b, &d.exponent, iota, oracle)?;
    budget.term(b, &e, &iota.source)
}

/// A checked majorization witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Majorized {
    pub witness: Nat,
    pub upgraded: Nat,
    pub value: Cnt,
}

/// Finds `n' < ↑n` with `u_C(n') = u_C(↑n)[i]` for `C = B₊ₖ`.
///
/// The `B`-side interpretation reads the builder's source, and the `C`-side
/// one reads the stage at `n`, which agrees with `C` up to `↑n`.
pub struct Majorizer<'a> {
    builder: &'a mut OuroborosBuilder,
    source: PsiInterp,
    target: PsiInterp,
}

impl<'a> Majorizer<'a> {
    pub fn new(builder: &'a mut OuroborosBuilder, n: &Nat, budget: Budget) -> Result<Self> {
        let floor = builder.source().min().clone();
        let stage = builder.stage_at(if n < &floor { &floor } else { n })?;
        let source = PsiInterp::new(builder.source().clone(), budget);
        Ok(Majorizer {
            builder,
            source,
            target: PsiInterp::new(stage, budget),
        })
    }

    pub fn source(&mut self) -> &mut PsiInterp {
        &mut self.source
    }

    pub fn target(&mut self) -> &mut PsiInterp {
        &mut self.target
    }

    pub fn witness(&mut self, n: &Nat, i: u64) -> Result<Majorized> {
        if !self.source.is_u_normal_form(n)? {
            return Err(Error::NotNormalForm(n.to_string()));
        }
        let upgraded = self.builder.upgrade(n)?;
        let Majorizer {
            builder,
            source,
            target,
        } = self;
        let found = Lift { builder, source }.witness(target, n, i);
        let found = found?;
        let budget = *self.target.budget();
        let value = self.target.little_u(&found)?;
        let expected = OrdTerm::from(self.target.little_u(&upgraded)?)
            .fund_seq_within(&Cnt::small(i), &budget)?;
        if found >= upgraded
            || OrdTerm::from(value.clone()) != expected
            || !self.target.is_u_normal_form(&found)?
        {
            return Err(Error::Witness(format!("{found} for {n} at index {i}")));
        }
        Ok(Majorized {
            witness: found,
            upgraded,
            value,
        })
    }
}

/// The recursion of the majorization, with the target context passed along.
///
/// Digits of an upgraded number are upgrades of source digits, so the
/// recursion itself answers the digit queries of [`fs_witness`].
struct Lift<'m> {
    builder: &'m mut OuroborosBuilder,
    source: &'m mut PsiInterp,
}

struct Lifted<'l, 'm> {
    outer: &'l mut Lift<'m>,
    lifted: BTreeMap<Nat, Nat>,
}

impl DigitOracle for Lifted<'_, '_> {
    fn limit_digit(&mut self, ctx: &mut PsiInterp, digit: &Nat, iota: &Index) -> Result<Nat> {
        let x = self
            .lifted
            .get(digit)
            .ok_or_else(|| Error::Hypothesis(format!("{digit} is not an upgraded digit")))?
            .clone();
        let i = iota
            .value
            .as_finite()
            .and_then(|v| v.to_u64())
            .ok_or_else(|| Error::Hypothesis("infinite index reached a limit digit".into()))?;
        self.outer.witness(ctx, &x, i)
    }
}

impl Lift<'_> {
    fn witness(&mut self, target: &mut PsiInterp, n: &Nat, i: u64) -> Result<Nat> {
        let k = self.builder.parameter();
        let min = self.source.hierarchy().min().clone();
        if nat(i) >= min || i >= k + 2 {
            return Err(Error::Hypothesis(format!(
                "index {i} is not below min(B ∪ {{{}}})",
                k + 2
            )));
        }
        if n.is_zero() {
            return Err(Error::Hypothesis("zero has no fundamental sequence".into()));
        }
        if n < &min {
            return Ok(n - 1u32);
        }
        if self.source.hierarchy().contains(n)? {
            return Ok(nat(i));
        }
        let budget = *target.budget();
        let zeta = self.source.big_u(n)?;
        let b = self.source.base_of(n)?;
        let up = self.builder.upgrade(n)?;
        let mut lifted = BTreeMap::new();
        for x in digits(n, &b)? {
            lifted.insert(self.builder.upgrade(&x)?, x);
        }
        if zeta.tau()? != Cofinality::BigOmega {
            let next = zeta.fund_seq_within(&Cnt::small(i), &budget)?;
            if let Some(v) = next.as_finite() {
                return Ok(v.clone());
            }
            let c = target.base_of(&up)?;
            let mut oracle = Lifted {
                outer: self,
                lifted,
            };
            return fs_witness(target, &c, &up, &Index::finite(i), &mut oracle);
        }
        let chain = self.builder.d_sequence(n)?.entries;
        let mut current = Nat::zero();
        for j in 0..i as usize {
            let d = chain
                .get(j)
                .ok_or_else(|| Error::Hypothesis(format!("d-chain of {n} is too short")))?
                .clone();
            let s = self.builder.deep_base_change(n, &b, &d)?;
            let iota = Index {
                value: target.little_u(&current)?,
                source: current.clone(),
            };
            let mut oracle = Lifted {
                outer: self,
                lifted: lifted.clone(),
            };
            current = fs_witness(target, &d, &s, &iota, &mut oracle)?;
        }
        Ok(current)
    }
}

/// One-shot [`Majorizer::witness`] with a fresh builder for `B₊ₖ`.
pub fn majorize_witness(
    b: &BaseHierarchy,
    k: u64,
    n: &Nat,
    i: u64,
    budget: Budget,
) -> Result<Majorized> {
    let mut builder = OuroborosBuilder::new(b.clone(), k, budget)?;
    let mut m = Majorizer::new(&mut builder, n, budget)?;
    m.witness(n, i)
}
