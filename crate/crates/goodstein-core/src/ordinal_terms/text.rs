//! The term grammar used for traces and the command line.
//!
//! ```text
//! ord  := "0" | sum
//! sum  := prod ("+" prod)*
//! prod := ("W^" ord "*")? cnt
//! cnt  := nat | "w" | "v(" ord ")" ("*" nat)? | "p(" ord ")" ("*" nat)?
//! ```
//!
//! `W` is Ω, `w` is ω, `v` is ϑ and `p` is ψ. Parsing adds the summands
//! with ordinal addition and canonicalizes collapse atoms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::str::FromStr;

use num_traits::{One, Zero};

use super::{psi, theta, Atom, Cnt, OrdTerm};
use crate::numerals::Nat;
use crate::{Error, Result};

fn cnt_pieces(c: &Cnt) -> Vec<String> {
    let mut out = Vec::new();
    for (a, m) in &c.atoms {
        match a {
            Atom::Omega => {
                let mut k = Nat::zero();
                while &k < m {
                    out.push("w".to_string());
                    k += 1u32;
                }
            }
            Atom::Theta(x) | Atom::Psi(x) => {
                let tag = if matches!(a, Atom::Theta(_)) {
                    'v'
                } else {
                    'p'
                };
                let mut s = alloc::format!("{tag}({x})");
                if !m.is_one() {
                    let _ = write!(s, "*{m}");
                }
                out.push(s);
            }
        }
    }
    if !c.fin.is_zero() {
        out.push(c.fin.to_string());
    }
    out
}

impl fmt::Display for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, s: &str| -> fmt::Result {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            f.write_str(s)
        };
        for (e, c) in &self.parts {
            for piece in cnt_pieces(c) {
                emit(f, &alloc::format!("W^{e}*{piece}"))?;
            }
        }
        for piece in cnt_pieces(&self.tail) {
            emit(f, &piece)?;
        }
        Ok(())
    }
}

impl fmt::Display for Cnt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", OrdTerm::from(self.clone()))
    }
}

impl OrdTerm {
    /// Conventional notation with Ω, ω, ϑ and ψ.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces = Vec::new();
        for (e, c) in &self.parts {
            let inner = e.pretty();
            let base = if e.is_one() {
                "Ω".to_string()
            } else if inner.contains(' ') {
                alloc::format!("Ω^({inner})")
            } else {
                alloc::format!("Ω^{inner}")
            };
            if *c == Cnt::small(1) {
                pieces.push(base);
            } else {
                let inner = cnt_pretty_pieces(c);
                if inner.len() == 1 {
                    pieces.push(alloc::format!("{base}·{}", inner[0]));
                } else {
                    pieces.push(alloc::format!("{base}·({})", inner.join(" + ")));
                }
            }
        }
        pieces.extend(cnt_pretty_pieces(&self.tail));
        pieces.join(" + ")
    }
}

fn cnt_pretty_pieces(c: &Cnt) -> Vec<String> {
    let mut out = Vec::new();
    for (a, m) in &c.atoms {
        let s = match a {
            Atom::Omega => "ω".to_string(),
            Atom::Theta(x) => alloc::format!("ϑ({})", x.pretty()),
            Atom::Psi(x) => alloc::format!("ψ({})", x.pretty()),
        };
        if m.is_one() {
            out.push(s);
        } else {
            out.push(alloc::format!("{s}·{m}"));
        }
    }
    if !c.fin.is_zero() {
        out.push(c.fin.to_string());
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.fail(&alloc::format!("expected {s:?}"))
        }
    }

    fn nat(&mut self) -> Result<Nat> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a number");
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Nat::from_str(text).expect("digits parse"))
    }

    fn ord(&mut self) -> Result<OrdTerm> {
        let mut acc = self.prod()?;
        while self.eat("+") {
            let next = self.prod()?;
            acc = acc.add(&next)?;
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<OrdTerm> {
        if self.eat("W^") {
            let e = self.ord()?;
            self.expect("*")?;
            let c = self.cnt()?;
            return Ok(OrdTerm::omega_pow(e, c));
        }
        Ok(self.cnt()?.into())
    }

    fn multiplicity(&mut self) -> Result<Nat> {
        if self.eat("*") {
            self.nat()
        } else {
            Ok(Nat::one())
        }
    }

    fn cnt(&mut self) -> Result<Cnt> {
        if self.eat("w") {
            return Ok(Cnt::omega());
        }
        for (tag, is_theta) in [("v(", true), ("p(", false)] {
            if self.eat(tag) {
                let arg = self.ord()?;
                self.expect(")")?;
                let m = self.multiplicity()?;
                let atom = if is_theta { theta(arg) } else { psi(arg)? };
                return Ok(scale(&atom, &m));
            }
        }
        Ok(Cnt::fin(self.nat()?))
    }
}

fn scale(c: &Cnt, m: &Nat) -> Cnt {
    if m.is_zero() {
        return Cnt::zero();
    }
    if let Some(n) = c.as_finite() {
        return Cnt::fin(n * m);
    }
    let (a, k) = &c.atoms[0];
    Cnt {
        atoms: alloc::vec![(a.clone(), k * m)],
        fin: Nat::zero(),
    }
}

impl FromStr for OrdTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.trim().as_bytes(),
            pos: 0,
        };
        let t = p.ord()?;
        if p.pos != p.src.len() {
            return p.fail("trailing input");
        }
        Ok(t)
    }
}
