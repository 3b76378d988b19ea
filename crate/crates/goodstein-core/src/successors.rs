//! Ouroboros successors `B₊ᵢ` and the dynamical hierarchies built from them.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::hierarchy::BaseHierarchy;
use crate::numerals::{nat, Budget, Nat};
use crate::upgrade::UpgradeContext;
use crate::{Error, Result};

/// The finite stage `Bⁿ₊ᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuroborosStage {
    pub source: BaseHierarchy,
    pub i: u64,
    pub n: Nat,
    pub bases: Vec<Nat>,
}

/// `d₀(n), …, dᵢ(n)` for a critical `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSequence {
    pub n: Nat,
    pub entries: Vec<Nat>,
}

/// Grows the stages of `B₊ᵢ` one frontier step at a time.
///
/// Also owns the upgrade `B → B₊ᵢ`; stage `n` is enough to upgrade any
/// `x ≤ n` because later bases only extend the hierarchy upward.
#[derive(Debug, Clone)]
pub struct OuroborosBuilder {
    source: BaseHierarchy,
    i: u64,
    stage: Vec<Nat>,
    frontier: Nat,
    added: BTreeMap<Nat, Vec<Nat>>,
    ctx: UpgradeContext,
    budget: Budget,
    events: u64,
}

impl OuroborosBuilder {
    pub fn new(source: BaseHierarchy, i: u64, budget: Budget) -> Result<Self> {
        let start = source.min().clone();
        let first = &start + 1u32;
        let target = BaseHierarchy::validate([first.clone()])?;
        let ctx = UpgradeContext::new(source.clone(), target, budget)?;
        let mut added = BTreeMap::new();
        added.insert(start.clone(), alloc::vec![first.clone()]);
        Ok(OuroborosBuilder {
            source,
            i,
            stage: alloc::vec![first],
            frontier: start,
            added,
            ctx,
            budget,
            events: 0,
        })
    }

    pub fn source(&self) -> &BaseHierarchy {
        &self.source
    }

    pub fn parameter(&self) -> u64 {
        self.i
    }

    pub fn frontier(&self) -> &Nat {
        &self.frontier
    }

    /// The stage at the current frontier, read as a complete hierarchy.
    pub fn stage(&self) -> BaseHierarchy {
        BaseHierarchy::validate(self.stage.iter().cloned()).expect("stages stay valid")
    }

    /// Replace the source by an end-extension of it.
    pub fn extend_source(&mut self, source: BaseHierarchy) {
        let target = self.ctx.target().clone();
        self.ctx.extend(source.clone(), target);
        self.source = source;
    }

    pub fn added_at(&self, n: &Nat) -> &[Nat] {
        self.added.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn advance_to(&mut self, n: &Nat) -> Result<()> {
        while &self.frontier < n {
            let m = &self.frontier + 1u32;
            let b = self.source.upper_base(&m)?;
            let event = m.div_ceil(&b) * &b;
            if &event > n {
                self.frontier = n.clone();
                break;
            }
            self.events += 1;
            if self.events > self.budget.work {
                return Err(Error::WorkBudget {
                    limit: self.budget.work,
                });
            }
            self.frontier = &event - 1u32;
            self.process(&event)?;
            self.frontier = event;
        }
        Ok(())
    }

    fn process(&mut self, n: &Nat) -> Result<()> {
        let c = self.stage.last().expect("nonempty").clone();
        let new = if self.source.contains(n)? {
            let b = self.source.lower_base(n)?;
            let below = self.ctx.deep_base_change(&(n - 1u32), &b, &c)?;
            let a = below / &c + 1u32;
            alloc::vec![self.budget.mul(&c, &a)?]
        } else {
            let mut seq = self.d_chain(n, c)?;
            seq.remove(0);
            seq
        };
        if new.is_empty() {
            return Ok(());
        }
        self.stage.extend(new.iter().cloned());
        self.added.insert(n.clone(), new);
        self.ctx.set_target(self.stage());
        Ok(())
    }

    fn d_chain(&mut self, n: &Nat, d0: Nat) -> Result<Vec<Nat>> {
        let b = self.source.upper_base(n)?;
        let mut out = alloc::vec![d0];
        for _ in 0..self.i {
            let d = self.ctx.deep_base_change(n, &b, out.last().unwrap())?;
            out.push(d);
        }
        Ok(out)
    }

    /// The stage `Bⁿ₊ᵢ`, advancing the frontier if needed.
    pub fn stage_at(&mut self, n: &Nat) -> Result<BaseHierarchy> {
        self.advance_to(n)?;
        let bases = self
            .added
            .range(..=n.clone())
            .flat_map(|(_, v)| v.iter().cloned());
        BaseHierarchy::validate(bases)
    }

    /// `B₊ᵢ ∩ [0, v]`, exact because bases added at stage `n` are at least `n`.
    pub fn prefix(&mut self, v: &Nat) -> Result<BaseHierarchy> {
        self.advance_to(v)?;
        let known = self.stage.iter().filter(|b| *b <= v).cloned();
        BaseHierarchy::prefix(known, v.clone())
    }

    pub fn d_sequence(&mut self, n: &Nat) -> Result<DSequence> {
        if !self.source.is_critical(n)? {
            return Err(Error::NotCritical(n.clone()));
        }
        let prev = n - 1u32;
        let c = self.stage_at(&prev)?.max_known().clone();
        if self.frontier > prev {
            // recompute against the earlier stage, which agrees below the frontier
            let mut fresh = self.clone_at(&prev)?;
            let entries = fresh.d_chain(n, c)?;
            return Ok(DSequence {
                n: n.clone(),
                entries,
            });
        }
        let entries = self.d_chain(n, c)?;
        Ok(DSequence {
            n: n.clone(),
            entries,
        })
    }

    fn clone_at(&self, n: &Nat) -> Result<Self> {
        let mut b = OuroborosBuilder::new(self.source.clone(), self.i, self.budget)?;
        b.advance_to(n)?;
        Ok(b)
    }

    /// `↑x` from the source into `B₊ᵢ`.
    pub fn upgrade(&mut self, x: &Nat) -> Result<Nat> {
        self.advance_to(x)?;
        self.ctx.upgrade(x)
    }

    pub fn deep_base_change(&mut self, m: &Nat, b: &Nat, c: &Nat) -> Result<Nat> {
        self.ctx.deep_base_change(m, b, c)
    }

    pub fn context(&mut self) -> &mut UpgradeContext {
        &mut self.ctx
    }
}

pub fn ouroboros_stage(
    source: &BaseHierarchy,
    i: u64,
    n: &Nat,
    budget: Budget,
) -> Result<OuroborosStage> {
    let mut builder = OuroborosBuilder::new(source.clone(), i, budget)?;
    let stage = builder.stage_at(n)?;
    Ok(OuroborosStage {
        source: source.clone(),
        i,
        n: n.clone(),
        bases: stage.bases().to_vec(),
    })
}

pub fn d_sequence(source: &BaseHierarchy, i: u64, n: &Nat, budget: Budget) -> Result<DSequence> {
    let mut builder = OuroborosBuilder::new(source.clone(), i, budget)?;
    builder.d_sequence(n)
}

/// `B₊₀` of a complete finite hierarchy; it is complete and finite too.
pub fn plus_zero(source: &BaseHierarchy, budget: Budget) -> Result<BaseHierarchy> {
    let mut builder = OuroborosBuilder::new(source.clone(), 0, budget)?;
    builder.stage_at(source.max_known())
}

/// Textual description of a dynamical hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HierarchySpec {
    /// The same hierarchy at every step.
    Finite(Vec<Nat>),
    Classic,
    Ouroboros,
    PlusChain(Vec<Nat>),
    FiniteFor(Nat),
    Diagonal,
}

fn parse_list(s: &str) -> Result<Vec<Nat>> {
    s.split(',')
        .map(|p| {
            Nat::from_str(p.trim())
                .map_err(|_| Error::Spec(alloc::format!("bad number {:?}", p.trim())))
        })
        .collect()
}

impl FromStr for HierarchySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h.trim(), Some(t.trim())),
            None => (s, None),
        };
        match (head, tail) {
            ("classic", None) => Ok(HierarchySpec::Classic),
            ("ouroboros", None) => Ok(HierarchySpec::Ouroboros),
            ("diagonal", None) => Ok(HierarchySpec::Diagonal),
            ("finite", Some(t)) => {
                let v = parse_list(t)?;
                BaseHierarchy::validate(v.iter().cloned())?;
                Ok(HierarchySpec::Finite(v))
            }
            ("plus-chain", Some(t)) => {
                let v = parse_list(t)?;
                BaseHierarchy::validate(v.iter().cloned())?;
                Ok(HierarchySpec::PlusChain(v))
            }
            ("finite-for", Some(t)) => {
                let v = parse_list(t)?;
                match v.as_slice() {
                    [m] => Ok(HierarchySpec::FiniteFor(m.clone())),
                    _ => Err(Error::Spec("finite-for takes one seed".to_string())),
                }
            }
            _ => Err(Error::Spec(s.to_string())),
        }
    }
}

fn join(v: &[Nat]) -> String {
    let parts: Vec<String> = v.iter().map(|b| b.to_string()).collect();
    parts.join(",")
}

impl fmt::Display for HierarchySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HierarchySpec::Finite(v) => write!(f, "finite: {}", join(v)),
            HierarchySpec::Classic => f.write_str("classic"),
            HierarchySpec::Ouroboros => f.write_str("ouroboros"),
            HierarchySpec::PlusChain(v) => write!(f, "plus-chain: {}", join(v)),
            HierarchySpec::FiniteFor(m) => write!(f, "finite-for: {m}"),
            HierarchySpec::Diagonal => f.write_str("diagonal"),
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Static(BaseHierarchy),
    Classic,
    /// Complete finite levels computed on demand.
    Chain(Vec<BaseHierarchy>),
    Ouroboros(Vec<OuroborosBuilder>),
}

/// A sequence `ℬ₀, ℬ₁, …` of hierarchies, each a good successor of the last.
#[derive(Debug, Clone)]
pub struct DynamicalHierarchy {
    spec: HierarchySpec,
    budget: Budget,
    kind: Kind,
    ks: Vec<Nat>,
    contexts: BTreeMap<usize, UpgradeContext>,
}

impl DynamicalHierarchy {
    pub fn new(spec: HierarchySpec, budget: Budget) -> Result<Self> {
        let two = || BaseHierarchy::singleton(2);
        let (kind, ks) = match &spec {
            HierarchySpec::Finite(v) => (
                Kind::Static(BaseHierarchy::validate(v.iter().cloned())?),
                Vec::new(),
            ),
            HierarchySpec::Classic => (Kind::Classic, Vec::new()),
            HierarchySpec::Ouroboros => (Kind::Ouroboros(Vec::new()), Vec::new()),
            HierarchySpec::PlusChain(v) => (
                Kind::Chain(alloc::vec![BaseHierarchy::validate(v.iter().cloned())?]),
                Vec::new(),
            ),
            HierarchySpec::FiniteFor(m) => {
                (Kind::Chain(alloc::vec![two()?]), alloc::vec![m.clone()])
            }
            HierarchySpec::Diagonal => (Kind::Chain(alloc::vec![two()?]), alloc::vec![nat(2)]),
        };
        Ok(DynamicalHierarchy {
            spec,
            budget,
            kind,
            ks,
            contexts: BTreeMap::new(),
        })
    }

    pub fn spec(&self) -> &HierarchySpec {
        &self.spec
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// The parameter `k` with `ℬᵢ₊₁ = (ℬᵢ)₊ₖ`, where the hierarchy is built that way.
    pub fn successor_parameter(&self, i: usize) -> Option<u64> {
        match self.spec {
            HierarchySpec::Finite(_) => None,
            HierarchySpec::Classic | HierarchySpec::PlusChain(_) => Some(0),
            _ => Some(i as u64),
        }
    }

    /// The `k₀, k₁, …` computed so far for `finite-for` and `diagonal`.
    pub fn ks(&self) -> &[Nat] {
        &self.ks
    }

    fn ensure_chain(&mut self, i: usize) -> Result<()> {
        let Kind::Chain(levels) = &mut self.kind else {
            return Ok(());
        };
        while levels.len() <= i {
            let j = levels.len() - 1;
            let prev = &levels[j];
            let next = match &self.spec {
                HierarchySpec::PlusChain(_) => plus_zero(prev, self.budget)?,
                _ => {
                    let k = self.ks[j].clone();
                    let mut builder = OuroborosBuilder::new(prev.clone(), j as u64, self.budget)?;
                    let stage = builder.stage_at(&k)?;
                    let next_k = if matches!(self.spec, HierarchySpec::Diagonal) {
                        self.budget
                            .superexp(stage.max_known(), &nat(j as u64 + 1))?
                    } else {
                        let mut ctx =
                            UpgradeContext::new(prev.clone(), stage.clone(), self.budget)?;
                        ctx.upgrade(&k)?
                    };
                    self.ks.push(next_k);
                    stage
                }
            };
            levels.push(next);
        }
        Ok(())
    }

    fn ensure_ouroboros(&mut self, level: usize, v: &Nat) -> Result<()> {
        let Kind::Ouroboros(builders) = &mut self.kind else {
            return Ok(());
        };
        while builders.len() <= level {
            let j = builders.len();
            let source = if j == 0 {
                BaseHierarchy::singleton(2)?
            } else {
                let below = &mut builders[j - 1];
                let start = below.source().min() + 1u32;
                below.prefix(&start)?
            };
            builders.push(OuroborosBuilder::new(source, j as u64, self.budget)?);
        }
        let top = floored(v, builders[level].source());
        for j in 1..=level {
            let (lo, hi) = builders.split_at_mut(j);
            let source = lo[j - 1].prefix(&floored(&top, lo[j - 1].source()))?;
            hi[0].extend_source(source);
        }
        builders[level].advance_to(&top)
    }

    /// Enough of `ℬᵢ` to answer every query about numbers up to `v`.
    pub fn level(&mut self, i: usize, v: &Nat) -> Result<BaseHierarchy> {
        match &self.kind {
            Kind::Static(h) => Ok(h.clone()),
            Kind::Classic => BaseHierarchy::validate([nat(i as u64 + 2)]),
            Kind::Chain(_) => {
                self.ensure_chain(i)?;
                let Kind::Chain(levels) = &self.kind else {
                    unreachable!()
                };
                Ok(levels[i].clone())
            }
            Kind::Ouroboros(_) => {
                if i == 0 {
                    return BaseHierarchy::singleton(2);
                }
                self.ensure_ouroboros(i - 1, v)?;
                let Kind::Ouroboros(b) = &mut self.kind else {
                    unreachable!()
                };
                let v = floored(v, b[i - 1].source());
                b[i - 1].prefix(&v)
            }
        }
    }

    /// `↑ᵢ x` from `ℬᵢ` into `ℬᵢ₊₁`.
    pub fn upgrade(&mut self, i: usize, x: &Nat) -> Result<Nat> {
        match &self.kind {
            Kind::Static(_) => Ok(x.clone()),
            Kind::Classic => {
                let b = nat(i as u64 + 2);
                self.budget.base_change(x, &b, &(&b + 1u32))
            }
            Kind::Chain(_) => {
                if !self.contexts.contains_key(&i) {
                    self.ensure_chain(i + 1)?;
                    let Kind::Chain(levels) = &self.kind else {
                        unreachable!()
                    };
                    let ctx =
                        UpgradeContext::new(levels[i].clone(), levels[i + 1].clone(), self.budget)?;
                    self.contexts.insert(i, ctx);
                }
                self.contexts.get_mut(&i).unwrap().upgrade(x)
            }
            Kind::Ouroboros(_) => {
                self.ensure_ouroboros(i, x)?;
                let Kind::Ouroboros(b) = &mut self.kind else {
                    unreachable!()
                };
                b[i].upgrade(x)
            }
        }
    }

    /// A builder for `(ℬᵢ)₊ₖ` whose stages agree with `ℬᵢ₊₁` up to `v`.
    pub fn successor_builder(&mut self, i: usize, v: &Nat) -> Result<OuroborosBuilder> {
        let k = self.successor_parameter(i).ok_or_else(|| {
            Error::Spec("static hierarchies have no successor construction".to_string())
        })?;
        if let Kind::Ouroboros(_) = self.kind {
            self.ensure_ouroboros(i, v)?;
            let Kind::Ouroboros(b) = &self.kind else {
                unreachable!()
            };
            return Ok(b[i].clone());
        }
        let source = self.level(i, v)?;
        let mut builder = OuroborosBuilder::new(source, k, self.budget)?;
        builder.advance_to(v)?;
        Ok(builder)
    }
}

/// A prefix of `B₊ᵢ` must reach its first base `min B + 1`.
fn floored(v: &Nat, source: &BaseHierarchy) -> Nat {
    let first = source.min() + 1u32;
    if v < &first {
        first
    } else {
        v.clone()
    }
}

/// Checks that `Bⁿ₊ᵢ` stages are end-extensions for every `n ≤ bound`.
pub fn stages_end_extend(
    source: &BaseHierarchy,
    i: u64,
    bound: &Nat,
    budget: Budget,
) -> Result<bool> {
    let mut builder = OuroborosBuilder::new(source.clone(), i, budget)?;
    let mut prev: Vec<Nat> = builder.stage().bases().to_vec();
    let mut n = source.min() + Nat::one();
    while &n <= bound {
        let cur = builder.stage_at(&n)?.bases().to_vec();
        if !cur.starts_with(&prev) {
            return Ok(false);
        }
        if cur.len() > prev.len() && cur[prev.len()] <= *prev.last().unwrap() {
            return Ok(false);
        }
        prev = cur;
        n += 1u32;
    }
    Ok(true)
}

pub fn parameter_fits(i: &Nat) -> Result<u64> {
    i.to_u64()
        .ok_or(Error::Spec("parameter too large".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        nat(v)
    }

    fn h(v: &[u64]) -> BaseHierarchy {
        BaseHierarchy::from_u64s(v).unwrap()
    }

    fn stage(b: &[u64], i: u64, at: u64) -> Vec<Nat> {
        ouroboros_stage(&h(b), i, &n(at), Budget::default())
            .unwrap()
            .bases
    }

    #[test]
    fn plus_zero_of_two_six() {
        assert_eq!(stage(&[2, 6], 0, 6), alloc::vec![n(3), n(30)]);
        assert_eq!(stage(&[2, 6], 0, 5), alloc::vec![n(3)]);
        assert_eq!(
            plus_zero(&h(&[2, 6]), Budget::default()).unwrap(),
            h(&[3, 30])
        );
    }

    #[test]
    fn stages_of_two() {
        assert_eq!(stage(&[2], 1, 4), alloc::vec![n(3), n(27)]);
        assert_eq!(stage(&[2], 2, 4), alloc::vec![n(3), n(27), n(27).pow(27)]);
        assert_eq!(stage(&[2], 0, 100), alloc::vec![n(3)]);
        assert_eq!(stage(&[2], 3, 2), alloc::vec![n(3)]);
    }

    #[test]
    fn d_sequences() {
        let d = d_sequence(&h(&[2]), 1, &n(4), Budget::default()).unwrap();
        assert_eq!(d.entries, alloc::vec![n(3), n(27)]);
        let d = d_sequence(&h(&[2]), 1, &n(6), Budget::default()).unwrap();
        assert_eq!(d.entries, alloc::vec![n(27), n(27).pow(27) + n(27)]);
        let d = d_sequence(&h(&[2]), 0, &n(6), Budget::default()).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert_eq!(
            d_sequence(&h(&[2]), 1, &n(5), Budget::default()),
            Err(Error::NotCritical(n(5)))
        );
    }

    #[test]
    fn spec_strings_roundtrip() {
        for s in [
            "finite: 2,6",
            "classic",
            "ouroboros",
            "plus-chain: 2",
            "finite-for: 5",
            "diagonal",
        ] {
            let spec: HierarchySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("finite: 2,5".parse::<HierarchySpec>().is_err());
        assert!("spiral".parse::<HierarchySpec>().is_err());
    }

    #[test]
    fn classic_and_plus_chain_agree() {
        let mut c = DynamicalHierarchy::new(HierarchySpec::Classic, Budget::default()).unwrap();
        let mut p =
            DynamicalHierarchy::new("plus-chain: 2".parse().unwrap(), Budget::default()).unwrap();
        for i in 0..6 {
            assert_eq!(c.level(i, &n(50)).unwrap(), h(&[i as u64 + 2]));
            assert_eq!(p.level(i, &n(50)).unwrap(), h(&[i as u64 + 2]));
            for x in [0u64, 1, 5, 17, 40] {
                assert_eq!(c.upgrade(i, &n(x)).unwrap(), p.upgrade(i, &n(x)).unwrap());
            }
        }
    }

    #[test]
    fn ouroboros_levels() {
        let mut o = DynamicalHierarchy::new(HierarchySpec::Ouroboros, Budget::default()).unwrap();
        assert_eq!(o.level(0, &n(10)).unwrap().bases(), &[n(2)]);
        assert_eq!(o.level(1, &n(10)).unwrap().bases(), &[n(3)]);
        assert_eq!(o.upgrade(0, &n(4)).unwrap(), n(27));
        // {3}₊₁: critical numbers are the multiples of 3 above 3
        let l2 = o.level(2, &n(12)).unwrap();
        assert_eq!(l2.bases(), &[n(4), n(8)]);
        let mut b = o.successor_builder(1, &n(12)).unwrap();
        assert_eq!(b.stage_at(&n(12)).unwrap(), h(&[4, 8, 64, 4160]));
        assert!(o.level(2, &n(60)).unwrap_err().is_budget());
    }

    #[test]
    fn levels_below_the_first_new_base() {
        let mut o = DynamicalHierarchy::new(HierarchySpec::Ouroboros, Budget::default()).unwrap();
        assert_eq!(o.level(2, &n(0)).unwrap().bases(), &[n(4)]);
        assert_eq!(o.level(1, &n(1)).unwrap().bases(), &[n(3)]);
        assert_eq!(o.upgrade(0, &n(4)).unwrap(), n(27));
    }

    #[test]
    fn finite_for_and_diagonal() {
        let mut d = DynamicalHierarchy::new(HierarchySpec::Diagonal, Budget::default()).unwrap();
        assert_eq!(d.level(1, &n(0)).unwrap(), h(&[3]));
        assert_eq!(d.ks()[..2], [n(2), n(3)]);
        assert_eq!(d.level(2, &n(0)).unwrap(), h(&[4]));
        assert_eq!(d.ks()[2], n(256));
        let mut f =
            DynamicalHierarchy::new(HierarchySpec::FiniteFor(n(4)), Budget::default()).unwrap();
        assert_eq!(f.level(1, &n(0)).unwrap(), h(&[3]));
        assert_eq!(f.ks()[1], n(27));
    }

    #[test]
    fn end_extension() {
        for (b, i, bound) in [
            (&[2u64][..], 1u64, 7u64),
            (&[2, 6], 0, 60),
            (&[2, 4, 8], 1, 9),
            (&[3], 1, 20),
        ] {
            assert!(stages_end_extend(&h(b), i, &n(bound), Budget::default()).unwrap());
        }
    }
}
