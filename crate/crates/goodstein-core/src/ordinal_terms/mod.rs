//! Ordinal terms below `ε_{Ω+1}` written in Ω-decomposition.
//!
//! A term is `Σ Ω^{eₖ}·cₖ + t` with strictly decreasing nonzero exponents and
//! countable coefficients. Countable parts ([`Cnt`]) are sums of collapse
//! atoms with multiplicities plus a finite part.
//!
//! Two flavors of atoms share the skeleton: ϑ atoms certify termination and
//! ψ atoms witness lower bounds. Comparing across flavors is an error. In
//! the ψ flavor a countable value is expected to be a single atom or finite;
//! sums of ψ atoms are ordered lexicographically, which is only exact for
//! additively principal atoms.

use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use crate::numerals::{nat, Budget, Nat};
use crate::{Error, Result};

mod fundamental;
mod text;

pub use fundamental::{big_f, omega_tower, step_down, Cofinality};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `ω`, equal to both `ϑ(1)` and `ψ(Ω)`.
    Omega,
    Theta(Box<OrdTerm>),
    Psi(Box<OrdTerm>),
}

/// A countable ordinal `Σ atomₖ·multₖ + fin` with strictly decreasing atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cnt {
    atoms: Vec<(Atom, Nat)>,
    fin: Nat,
}

/// `Σ Ω^{exp}·coeff + tail`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdTerm {
    parts: Vec<(OrdTerm, Cnt)>,
    tail: Cnt,
}

impl Cnt {
    pub fn zero() -> Self {
        Cnt::default()
    }

    pub fn fin(n: Nat) -> Self {
        Cnt {
            atoms: Vec::new(),
            fin: n,
        }
    }

    pub fn small(n: u64) -> Self {
        Cnt::fin(nat(n))
    }

    pub fn omega() -> Self {
        Cnt::atom(Atom::Omega)
    }

    pub fn atom(a: Atom) -> Self {
        Cnt {
            atoms: alloc::vec![(a, Nat::one())],
            fin: Nat::zero(),
        }
    }

    pub fn atoms(&self) -> &[(Atom, Nat)] {
        &self.atoms
    }

    pub fn finite_part(&self) -> &Nat {
        &self.fin
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.fin.is_zero()
    }

    pub fn as_finite(&self) -> Option<&Nat> {
        self.atoms.is_empty().then_some(&self.fin)
    }

    pub fn as_single_atom(&self) -> Option<&Atom> {
        match self.atoms.as_slice() {
            [(a, m)] if m.is_one() && self.fin.is_zero() => Some(a),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        self.atoms
            .iter()
            .map(|(a, _)| match a {
                Atom::Omega => 0,
                Atom::Theta(x) | Atom::Psi(x) => 1 + x.depth(),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&Atom> {
        self.atoms.first().map(|(a, _)| a)
    }

    pub fn nodes(&self) -> usize {
        1 + self
            .atoms
            .iter()
            .map(|(a, _)| match a {
                Atom::Omega => 1,
                Atom::Theta(x) | Atom::Psi(x) => 1 + x.nodes(),
            })
            .sum::<usize>()
    }

    /// Ordinal addition `self + other`; summands of `self` below the leading
    /// atom of `other` are absorbed.
    pub fn add(&self, other: &Cnt) -> Result<Cnt> {
        let Some(lead) = other.leading() else {
            return Ok(Cnt {
                atoms: self.atoms.clone(),
                fin: &self.fin + &other.fin,
            });
        };
        let mut atoms = Vec::new();
        let mut rest = other.atoms.iter().peekable();
        for (a, m) in &self.atoms {
            match cmp_atom(a, lead)? {
                Ordering::Greater => atoms.push((a.clone(), m.clone())),
                Ordering::Equal => {
                    let (b, k) = rest.next().unwrap();
                    atoms.push((b.clone(), m + k));
                    break;
                }
                Ordering::Less => break,
            }
        }
        atoms.extend(rest.cloned());
        Ok(Cnt {
            atoms,
            fin: other.fin.clone(),
        })
    }

    /// Natural (Hessenberg) sum.
    pub fn natural_sum(&self, other: &Cnt) -> Result<Cnt> {
        let mut atoms = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.atoms.len() || j < other.atoms.len() {
            let ord = match (self.atoms.get(i), other.atoms.get(j)) {
                (Some((a, _)), Some((b, _))) => cmp_atom(a, b)?,
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    atoms.push(self.atoms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    atoms.push(other.atoms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    atoms.push((
                        self.atoms[i].0.clone(),
                        &self.atoms[i].1 + &other.atoms[j].1,
                    ));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Cnt {
            atoms,
            fin: &self.fin + &other.fin,
        })
    }

    pub fn compare(&self, other: &Cnt) -> Result<Ordering> {
        for k in 0..self.atoms.len().max(other.atoms.len()) {
            match (self.atoms.get(k), other.atoms.get(k)) {
                (Some((a, m)), Some((b, n))) => {
                    let o = cmp_atom(a, b)?.then_with(|| m.cmp(n));
                    if o != Ordering::Equal {
                        return Ok(o);
                    }
                }
                (Some(_), None) => return Ok(Ordering::Greater),
                (None, Some(_)) => return Ok(Ordering::Less),
                (None, None) => unreachable!(),
            }
        }
        Ok(self.fin.cmp(&other.fin))
    }

    /// `self = β + 1` gives `β`.
    pub fn predecessor(&self) -> Option<Cnt> {
        if self.fin.is_zero() {
            return None;
        }
        Some(Cnt {
            atoms: self.atoms.clone(),
            fin: &self.fin - 1u32,
        })
    }

    fn without_last(&self) -> Option<(Cnt, Atom)> {
        if !self.fin.is_zero() {
            return None;
        }
        let mut atoms = self.atoms.clone();
        let (a, m) = atoms.pop()?;
        if !m.is_one() {
            atoms.push((a.clone(), m - 1u32));
        }
        Some((
            Cnt {
                atoms,
                fin: Nat::zero(),
            },
            a,
        ))
    }
}

impl From<Cnt> for OrdTerm {
    fn from(c: Cnt) -> Self {
        OrdTerm {
            parts: Vec::new(),
            tail: c,
        }
    }
}

impl OrdTerm {
    pub fn zero() -> Self {
        OrdTerm::default()
    }

    pub fn fin(n: Nat) -> Self {
        Cnt::fin(n).into()
    }

    pub fn small(n: u64) -> Self {
        Cnt::small(n).into()
    }

    /// `Ω`.
    pub fn big_omega() -> Self {
        OrdTerm::omega_pow(OrdTerm::small(1), Cnt::small(1))
    }

    /// `Ω^e·c`.
    pub fn omega_pow(e: OrdTerm, c: Cnt) -> Self {
        if c.is_zero() {
            return OrdTerm::zero();
        }
        if e.is_zero() {
            return c.into();
        }
        OrdTerm {
            parts: alloc::vec![(e, c)],
            tail: Cnt::zero(),
        }
    }

    pub fn parts(&self) -> &[(OrdTerm, Cnt)] {
        &self.parts
    }

    pub fn tail(&self) -> &Cnt {
        &self.tail
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty() && self.tail.is_zero()
    }

    pub fn is_countable(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn as_countable(&self) -> Option<&Cnt> {
        self.is_countable().then_some(&self.tail)
    }

    pub fn as_finite(&self) -> Option<&Nat> {
        self.as_countable().and_then(Cnt::as_finite)
    }

    pub fn is_one(&self) -> bool {
        self.as_finite().is_some_and(|n| n.is_one())
    }

    pub fn nodes(&self) -> usize {
        1 + self
            .parts
            .iter()
            .map(|(e, c)| e.nodes() + c.nodes())
            .sum::<usize>()
            + self.tail.nodes()
    }

    /// Nesting depth through exponents and collapse arguments.
    pub fn depth(&self) -> usize {
        let inner = self
            .parts
            .iter()
            .map(|(e, c)| (1 + e.depth()).max(c.depth()))
            .chain(core::iter::once(self.tail.depth()))
            .max()
            .unwrap_or(0);
        inner
    }

    pub fn within(self, budget: &Budget) -> Result<Self> {
        if self.nodes() > budget.nodes {
            Err(Error::TermBudget {
                limit: budget.nodes,
            })
        } else if self.depth() > budget.depth {
            Err(Error::DepthBudget {
                limit: budget.depth,
            })
        } else {
            Ok(self)
        }
    }

    pub fn compare(&self, other: &OrdTerm) -> Result<Ordering> {
        for k in 0..self.parts.len().max(other.parts.len()) {
            match (self.parts.get(k), other.parts.get(k)) {
                (Some((e, c)), Some((f, d))) => {
                    let o = e.compare(f)?;
                    if o != Ordering::Equal {
                        return Ok(o);
                    }
                    let o = c.compare(d)?;
                    if o != Ordering::Equal {
                        return Ok(o);
                    }
                }
                (Some(_), None) => return Ok(Ordering::Greater),
                (None, Some(_)) => return Ok(Ordering::Less),
                (None, None) => unreachable!(),
            }
        }
        self.tail.compare(&other.tail)
    }

    pub fn lt(&self, other: &OrdTerm) -> Result<bool> {
        Ok(self.compare(other)? == Ordering::Less)
    }

    /// Ordinal addition.
    pub fn add(&self, other: &OrdTerm) -> Result<OrdTerm> {
        let Some((lead, _)) = other.parts.first() else {
            return Ok(OrdTerm {
                parts: self.parts.clone(),
                tail: self.tail.add(&other.tail)?,
            });
        };
        let mut parts = Vec::new();
        let mut rest = other.parts.iter().peekable();
        for (e, c) in &self.parts {
            match e.compare(lead)? {
                Ordering::Greater => parts.push((e.clone(), c.clone())),
                Ordering::Equal => {
                    let (f, d) = rest.next().unwrap();
                    parts.push((f.clone(), c.add(d)?));
                    break;
                }
                Ordering::Less => break,
            }
        }
        parts.extend(rest.cloned());
        Ok(OrdTerm {
            parts,
            tail: other.tail.clone(),
        })
    }

    pub fn add_cnt(&self, c: &Cnt) -> Result<OrdTerm> {
        self.add(&c.clone().into())
    }

    pub fn natural_sum(&self, other: &OrdTerm) -> Result<OrdTerm> {
        let mut parts = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() || j < other.parts.len() {
            let ord = match (self.parts.get(i), other.parts.get(j)) {
                (Some((a, _)), Some((b, _))) => a.compare(b)?,
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    parts.push(self.parts[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    parts.push(other.parts[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.parts[i].1.natural_sum(&other.parts[j].1)?;
                    parts.push((self.parts[i].0.clone(), c));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(OrdTerm {
            parts,
            tail: self.tail.natural_sum(&other.tail)?,
        })
    }

    /// The maximal coefficient `ξ*`: the largest countable coefficient
    /// occurring hereditarily, with `ξ* = ξ` for countable `ξ`.
    pub fn max_coefficient(&self) -> Result<Cnt> {
        let mut best = self.tail.clone();
        for (e, c) in &self.parts {
            for cand in [c.clone(), e.max_coefficient()?] {
                if cand.compare(&best)? == Ordering::Greater {
                    best = cand;
                }
            }
        }
        Ok(best)
    }

    /// Drop the countable tail and add `Ω`: the `ξ + Ω` of the
    /// `b*` search, which ignores everything below `Ω`.
    pub fn plus_big_omega(&self) -> Result<OrdTerm> {
        let head = OrdTerm {
            parts: self.parts.clone(),
            tail: Cnt::zero(),
        };
        head.add(&OrdTerm::big_omega())
    }

    /// `self = ζ + 1` gives `ζ`.
    pub fn predecessor(&self) -> Option<OrdTerm> {
        Some(OrdTerm {
            parts: self.parts.clone(),
            tail: self.tail.predecessor()?,
        })
    }

    fn split_leading(&self) -> Option<((OrdTerm, Cnt), OrdTerm)> {
        let (first, rest) = self.parts.split_first()?;
        Some((
            first.clone(),
            OrdTerm {
                parts: rest.to_vec(),
                tail: self.tail.clone(),
            },
        ))
    }

    fn is_big_omega(&self) -> bool {
        *self == OrdTerm::big_omega()
    }

    pub fn has_theta(&self) -> bool {
        self.parts
            .iter()
            .any(|(e, c)| e.has_theta() || cnt_has_theta(c))
            || cnt_has_theta(&self.tail)
    }
}

fn cnt_has_theta(c: &Cnt) -> bool {
    c.atoms.iter().any(|(a, _)| match a {
        Atom::Omega => false,
        Atom::Theta(_) => true,
        Atom::Psi(x) => x.has_theta(),
    })
}

/// `ϑ(ξ)` with `ϑ(0) = 1` and `ϑ(1) = ω`.
pub fn theta(arg: OrdTerm) -> Cnt {
    if arg.is_zero() {
        Cnt::small(1)
    } else if arg.is_one() {
        Cnt::omega()
    } else {
        Cnt::atom(Atom::Theta(Box::new(arg)))
    }
}

/// `ψ(ξ)` with `ψ(n) = n` for finite `n` and `ψ(Ω) = ω`.
///
/// Countable infinite arguments are rejected: the notation never needs them.
pub fn psi(arg: OrdTerm) -> Result<Cnt> {
    if let Some(n) = arg.as_finite() {
        return Ok(Cnt::fin(n.clone()));
    }
    if arg.is_countable() {
        return Err(Error::CountablePsiArgument(arg.to_string()));
    }
    if arg.is_big_omega() {
        return Ok(Cnt::omega());
    }
    Ok(Cnt::atom(Atom::Psi(Box::new(arg))))
}

/// Whether `ψ(arg)` is in normal form, `arg* < ψ(arg)`.
pub fn is_psi_normal_form(arg: &OrdTerm) -> Result<bool> {
    if arg.is_countable() {
        return Ok(arg.as_finite().is_some());
    }
    cnt_below_psi(&arg.max_coefficient()?, arg)
}

/// Whether `c < ψ(arg)`, for `c` finite or led by an atom in normal form.
///
/// Only the leading atom of `c` is consulted, which is exact when `c` is a
/// single coefficient. `ψ(arg)` itself need not be in normal form.
pub fn cnt_below_psi(c: &Cnt, arg: &OrdTerm) -> Result<bool> {
    if let Some(n) = arg.as_finite() {
        return Ok(c.compare(&Cnt::fin(n.clone()))? == Ordering::Less);
    }
    if arg.is_countable() {
        return Err(Error::CountablePsiArgument(arg.to_string()));
    }
    let Some(lead) = c.leading() else {
        return Ok(true);
    };
    match lead {
        // ψ(ξ) > ω as soon as ξ > Ω
        Atom::Omega => Ok(arg.compare(&OrdTerm::big_omega())? == Ordering::Greater),
        Atom::Psi(inner) => {
            if !is_psi_normal_form(inner)? {
                return Err(Error::NotNormalForm(inner.to_string()));
            }
            Ok(inner.compare(arg)? == Ordering::Less)
        }
        Atom::Theta(_) => Err(Error::MixedFlavors),
    }
}

pub fn cmp_atom(a: &Atom, b: &Atom) -> Result<Ordering> {
    match (a, b) {
        (Atom::Omega, Atom::Omega) => Ok(Ordering::Equal),
        (Atom::Omega, _) => Ok(Ordering::Less),
        (_, Atom::Omega) => Ok(Ordering::Greater),
        (Atom::Theta(x), Atom::Theta(y)) => cmp_theta(x, y),
        (Atom::Psi(x), Atom::Psi(y)) => {
            for z in [x, y] {
                if !is_psi_normal_form(z)? {
                    return Err(Error::NotNormalForm(z.to_string()));
                }
            }
            x.compare(y)
        }
        _ => Err(Error::MixedFlavors),
    }
}

fn cmp_theta(x: &OrdTerm, y: &OrdTerm) -> Result<Ordering> {
    // ϑ(ξ) < ϑ(ζ) for ξ < ζ exactly when ξ* < ϑ(ζ)
    let below = |small: &OrdTerm, big: &OrdTerm| -> Result<bool> {
        let bound = Cnt::atom(Atom::Theta(Box::new(big.clone())));
        Ok(small.max_coefficient()?.compare(&bound)? == Ordering::Less)
    };
    Ok(match x.compare(y)? {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less if below(x, y)? => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Greater if below(y, x)? => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
    })
}

pub fn compare(x: &OrdTerm, y: &OrdTerm) -> Result<Ordering> {
    x.compare(y)
}

pub fn natural_sum(x: &OrdTerm, y: &OrdTerm) -> Result<OrdTerm> {
    x.natural_sum(y)
}

pub fn max_coefficient(x: &OrdTerm) -> Result<Cnt> {
    x.max_coefficient()
}
