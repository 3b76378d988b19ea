//! Naturals in hereditary base notation.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Nat = BigUint;

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

/// Resource limits shared by every computation that can blow up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest admissible bit length of any intermediate natural.
    pub bits: u64,
    /// Cap on loop iterations such as stage frontiers and step-downs.
    pub work: u64,
    /// Cap on the node count of any ordinal term.
    pub nodes: usize,
    /// Cap on the nesting depth of any ordinal term.
    pub depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            bits: 1 << 20,
            work: 1 << 22,
            nodes: 10_000,
            depth: 64,
        }
    }
}

impl Budget {
    pub fn with_bits(bits: u64) -> Self {
        Budget {
            bits,
            ..Budget::default()
        }
    }

    pub fn check(&self, n: Nat) -> Result<Nat> {
        if n.bits() > self.bits {
            Err(Error::BitBudget { limit: self.bits })
        } else {
            Ok(n)
        }
    }

    pub fn pow(&self, base: &Nat, exp: &Nat) -> Result<Nat> {
        if base.is_zero() {
            return Ok(if exp.is_zero() {
                Nat::one()
            } else {
                Nat::zero()
            });
        }
        if base.is_one() || exp.is_zero() {
            return Ok(Nat::one());
        }
        let over = Error::BitBudget { limit: self.bits };
        let e = exp.to_u64().ok_or(over.clone())?;
        // base >= 2, so the result has at least (bits(base) - 1) * e + 1 bits.
        let floor = (base.bits() - 1).saturating_mul(e).saturating_add(1);
        if floor > self.bits || e > u32::MAX as u64 {
            return Err(over);
        }
        self.check(base.pow(e as u32))
    }

    pub fn mul(&self, x: &Nat, y: &Nat) -> Result<Nat> {
        if !x.is_zero() && !y.is_zero() && x.bits() + y.bits() > self.bits + 1 {
            return Err(Error::BitBudget { limit: self.bits });
        }
        self.check(x * y)
    }

    pub fn add(&self, x: &Nat, y: &Nat) -> Result<Nat> {
        self.check(x + y)
    }

    /// `b^e·a` plus nothing, the building block of every base rewrite.
    pub fn term(&self, b: &Nat, e: &Nat, a: &Nat) -> Result<Nat> {
        let p = self.pow(b, e)?;
        self.mul(&p, a)
    }

    pub fn base_change(&self, n: &Nat, b: &Nat, c: &Nat) -> Result<Nat> {
        check_base(b)?;
        if c < b {
            return Err(Error::TargetBelowSource {
                from: b.clone(),
                target: c.clone(),
            });
        }
        if b == c {
            return Ok(n.clone());
        }
        self.base_change_unchecked(n, b, c)
    }

    fn base_change_unchecked(&self, n: &Nat, b: &Nat, c: &Nat) -> Result<Nat> {
        let mut total = Nat::zero();
        for place in expand(n, b)? {
            let piece = if place.exponent.is_zero() {
                place.digit
            } else {
                let e = self.base_change_unchecked(&place.exponent, b, c)?;
                self.term(c, &e, &place.digit)?
            };
            total = self.add(&total, &piece)?;
        }
        Ok(total)
    }

    pub fn superexp(&self, x: &Nat, y: &Nat) -> Result<Nat> {
        if x.is_one() {
            return Ok(Nat::one());
        }
        if x.is_zero() {
            return Ok(if y.is_even() { Nat::one() } else { Nat::zero() });
        }
        let mut acc = Nat::one();
        let mut i = Nat::zero();
        while &i < y {
            acc = self.pow(x, &acc)?;
            i += 1u32;
        }
        Ok(acc)
    }
}

/// The unique `n = base^exponent · digit + remainder` with `0 < digit < base`
/// and `remainder < base^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub base: Nat,
    pub exponent: Nat,
    pub digit: Nat,
    pub remainder: Nat,
}

impl Decomposition {
    pub fn recompose(&self) -> Nat {
        let e = self.exponent.to_u32().expect("exponent fits in memory");
        self.base.pow(e) * &self.digit + &self.remainder
    }
}

/// One nonzero digit of the flat base-`b` expansion: `b^exponent · digit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub exponent: Nat,
    pub digit: Nat,
}

fn check_base(b: &Nat) -> Result<()> {
    if b < &nat(2) {
        Err(Error::BaseTooSmall(b.clone()))
    } else {
        Ok(())
    }
}

/// Powers `b^(2^k)` up to the last one not exceeding `n`.
fn square_ladder(n: &Nat, b: &Nat) -> Vec<Nat> {
    let mut ladder = Vec::new();
    let mut p = b.clone();
    while &p <= n {
        let next = &p * &p;
        ladder.push(p);
        if next.bits() > n.bits() + 1 {
            break;
        }
        p = next;
    }
    ladder
}

pub fn decompose(n: &Nat, b: &Nat) -> Result<Decomposition> {
    check_base(b)?;
    if n.is_zero() {
        return Err(Error::ZeroDecomposition);
    }
    let ladder = square_ladder(n, b);
    let mut acc = Nat::one();
    let mut e = 0u64;
    for (k, p) in ladder.iter().enumerate().rev() {
        let next = &acc * p;
        if &next <= n {
            acc = next;
            e += 1 << k;
        }
    }
    let (digit, remainder) = n.div_rem(&acc);
    Ok(Decomposition {
        base: b.clone(),
        exponent: nat(e),
        digit,
        remainder,
    })
}

/// Nonzero digits of `n` in base `b`, highest exponent first.
///
/// Iterating the decomposition on remainders produces exactly these places,
/// so hereditary operators can recurse on exponents only.
pub fn expand(n: &Nat, b: &Nat) -> Result<Vec<Place>> {
    check_base(b)?;
    let mut out = Vec::new();
    if n.is_zero() {
        return Ok(out);
    }
    if let Some(small) = b.to_u32().filter(|&r| r <= 256) {
        let radix = n.to_radix_le(small);
        for (i, d) in radix.iter().enumerate().rev() {
            if *d != 0 {
                out.push(Place {
                    exponent: nat(i as u64),
                    digit: Nat::from(*d),
                });
            }
        }
        return Ok(out);
    }
    let ladder = square_ladder(n, b);
    split(n, b, &ladder, 0, &mut out);
    Ok(out)
}

fn split(n: &Nat, b: &Nat, ladder: &[Nat], offset: u64, out: &mut Vec<Place>) {
    if n.is_zero() {
        return;
    }
    if n < b {
        out.push(Place {
            exponent: nat(offset),
            digit: n.clone(),
        });
        return;
    }
    let k = ladder
        .iter()
        .rposition(|p| p <= n)
        .expect("n >= b = ladder[0]");
    let (hi, lo) = n.div_rem(&ladder[k]);
    split(&hi, b, &ladder[..k], offset + (1 << k), out);
    split(&lo, b, &ladder[..k], offset, out);
}

pub fn digits(n: &Nat, b: &Nat) -> Result<BTreeSet<Nat>> {
    check_base(b)?;
    let mut set = BTreeSet::new();
    collect_digits(n, b, &mut set)?;
    Ok(set)
}

fn collect_digits(n: &Nat, b: &Nat, set: &mut BTreeSet<Nat>) -> Result<()> {
    if n < b {
        set.insert(n.clone());
        return Ok(());
    }
    let places = expand(n, b)?;
    for place in &places {
        set.insert(place.digit.clone());
        if !place.exponent.is_zero() {
            collect_digits(&place.exponent, b, set)?;
        }
    }
    // the remainder chain bottoms out at 0 unless a units digit is present
    if places.last().is_some_and(|p| !p.exponent.is_zero()) {
        set.insert(Nat::zero());
    }
    Ok(())
}

pub fn base_change(n: &Nat, b: &Nat, c: &Nat) -> Result<Nat> {
    Budget::default().base_change(n, b, c)
}

pub fn superexp(x: &Nat, y: &Nat) -> Result<Nat> {
    Budget::default().superexp(x, y)
}
