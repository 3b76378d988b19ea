//! Ordinal interpretations of naturals relative to a base hierarchy.
//!
//! [`ThetaInterp`] computes `O_B`, `o*_B` and `o_B = ϑ(O_B ⊕ o*_B)`, which
//! decrease along every fractal Goodstein sequence. [`PsiInterp`] computes
//! `U_B` and `u_B = ψ(U_B)` together with their normal forms, and the
//! witness finders build numbers realizing fundamental sequence steps.

use crate::numerals::{expand, Budget, Nat};
use crate::ordinal_terms::{Cnt, OrdTerm};
use crate::Result;

mod psi;
mod theta;
mod witness;

pub use psi::PsiInterp;
pub use theta::{ThetaInterp, ThetaValue};
pub use witness::{
    fs_witness, majorize_witness, DigitOracle, Index, Majorized, Majorizer, SearchOracle,
};

/// Separate digit maps for coefficients and exponents below the base, and for
/// the units digit.
pub(crate) trait DigitMap {
    fn coefficient(&mut self, x: &Nat) -> Result<Cnt>;
    fn units(&mut self, x: &Nat) -> Result<Cnt>;
}

struct Uniform<F>(F);

impl<F: FnMut(&Nat) -> Result<Cnt>> DigitMap for Uniform<F> {
    fn coefficient(&mut self, x: &Nat) -> Result<Cnt> {
        (self.0)(x)
    }

    fn units(&mut self, x: &Nat) -> Result<Cnt> {
        (self.0)(x)
    }
}

/// `O^b_f(x)`: `f(x)` below `b`, otherwise `Ω^{O(e)}·f(a) + O(r)` for
/// `x = b^e·a + r`, with `+` the ordinal sum.
pub fn o_from_digits<F>(b: &Nat, f: F, x: &Nat, budget: &Budget) -> Result<OrdTerm>
where
    F: FnMut(&Nat) -> Result<Cnt>,
{
    lift(&mut Uniform(f), b, x, budget)
}

pub(crate) fn lift<M: DigitMap + ?Sized>(
    map: &mut M,
    b: &Nat,
    x: &Nat,
    budget: &Budget,
) -> Result<OrdTerm> {
    if x < b {
        return Ok(map.units(x)?.into());
    }
    let places = expand(x, b)?;
    let mut acc: OrdTerm = match places.last() {
        Some(p) if p.exponent == Nat::from(0u32) => map.units(&p.digit)?.into(),
        _ => map.units(&Nat::from(0u32))?.into(),
    };
    for place in places.iter().rev() {
        if place.exponent == Nat::from(0u32) {
            continue;
        }
        let exp = if &place.exponent < b {
            map.coefficient(&place.exponent)?.into()
        } else {
            lift(map, b, &place.exponent, budget)?
        };
        let coeff = map.coefficient(&place.digit)?;
        acc = OrdTerm::omega_pow(exp, coeff).add(&acc)?.within(budget)?;
    }
    Ok(acc)
}
