//! Running fractal Goodstein sequences with ordinal certificates.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use crate::interpretations::{Majorizer, PsiInterp, ThetaInterp};
use crate::numerals::{nat, Budget, Nat};
use crate::ordinal_terms::{Cnt, OrdTerm};
use crate::successors::{DynamicalHierarchy, HierarchySpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Certify {
    None,
    #[default]
    Theta,
    Psi,
    Both,
}

impl Certify {
    pub fn theta(self) -> bool {
        matches!(self, Certify::Theta | Certify::Both)
    }

    pub fn psi(self) -> bool {
        matches!(self, Certify::Psi | Certify::Both)
    }
}

impl core::str::FromStr for Certify {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Certify::None),
            "theta" => Ok(Certify::Theta),
            "psi" => Ok(Certify::Psi),
            "both" => Ok(Certify::Both),
            _ => Err(Error::Spec(format!("unknown certificate kind {s:?}"))),
        }
    }
}

impl core::fmt::Display for Certify {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Certify::None => "none",
            Certify::Theta => "theta",
            Certify::Psi => "psi",
            Certify::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_steps: u64,
    pub budget: Budget,
    pub certify: Certify,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_steps: 100,
            budget: Budget::default(),
            certify: Certify::Theta,
        }
    }
}

/// `n_i` of the lower-bound chain together with `u_i(n_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiWitness {
    pub n: Nat,
    pub u_term: Cnt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub i: u64,
    pub value: Nat,
    pub chosen_base: Nat,
    pub theta_cert: Option<Cnt>,
    pub psi_witness: Option<PsiWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// The value at step `at` is zero.
    Terminated {
        at: u64,
    },
    StepCap {
        at: u64,
    },
    Budget {
        at: u64,
        reason: String,
    },
    Failed {
        at: u64,
        reason: String,
    },
}

impl Outcome {
    pub fn at(&self) -> u64 {
        match self {
            Outcome::Terminated { at }
            | Outcome::StepCap { at }
            | Outcome::Budget { at, .. }
            | Outcome::Failed { at, .. } => *at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodsteinTrace {
    pub hierarchy: HierarchySpec,
    pub seed: Nat,
    pub caps: Caps,
    pub steps: Vec<StepRecord>,
    pub outcome: Outcome,
    /// Why the witness chain ended before the sequence did.
    pub witness_stop: Option<(u64, String)>,
}

impl GoodsteinTrace {
    pub fn values(&self) -> impl Iterator<Item = &Nat> {
        self.steps.iter().map(|s| &s.value)
    }
}

fn index(i: usize) -> u64 {
    i as u64
}

/// `u_i(n_i)[i + 1]` realized at level `i + 1`.
fn next_witness(
    dh: &mut DynamicalHierarchy,
    i: usize,
    prev: &PsiWitness,
    budget: Budget,
) -> Result<PsiWitness> {
    if prev.n.is_zero() {
        return Ok(prev.clone());
    }
    let mut builder = dh.successor_builder(i, &prev.n)?;
    let mut m = Majorizer::new(&mut builder, &prev.n, budget)?;
    let found = m.witness(&prev.n, index(i) + 1)?;
    let want =
        OrdTerm::from(prev.u_term.clone()).fund_seq_within(&Cnt::small(index(i) + 1), &budget)?;
    if OrdTerm::from(found.value.clone()) != want {
        return Err(Error::Witness(format!(
            "u-value of {} misses the step at {}",
            found.witness,
            i + 1
        )));
    }
    Ok(PsiWitness {
        n: found.witness,
        u_term: found.value,
    })
}

fn first_witness(dh: &mut DynamicalHierarchy, seed: &Nat, budget: Budget) -> Result<PsiWitness> {
    let level = dh.level(0, seed)?;
    let mut u = PsiInterp::new(level, budget);
    if !u.is_u_normal_form(seed)? {
        return Err(Error::NotNormalForm(seed.to_string()));
    }
    Ok(PsiWitness {
        n: seed.clone(),
        u_term: u.little_u(seed)?,
    })
}

/// Runs `𝔾ᵢ(seed)` until it reaches zero, hits a cap, or runs out of budget.
pub fn run(spec: &HierarchySpec, seed: &Nat, caps: Caps) -> Result<GoodsteinTrace> {
    let mut dh = DynamicalHierarchy::new(spec.clone(), caps.budget)?;
    let mut trace = GoodsteinTrace {
        hierarchy: spec.clone(),
        seed: seed.clone(),
        caps,
        steps: Vec::new(),
        outcome: Outcome::StepCap { at: 0 },
        witness_stop: None,
    };
    let mut value = seed.clone();
    let mut witness: Option<PsiWitness> = None;
    let mut i = 0usize;
    loop {
        let at = index(i);
        if caps.certify.psi() && trace.witness_stop.is_none() {
            let next = if i == 0 {
                first_witness(&mut dh, seed, caps.budget)
            } else {
                let prev = witness.as_ref().expect("chain continues");
                next_witness(&mut dh, i - 1, prev, caps.budget)
            };
            match next {
                Ok(w) => witness = Some(w),
                Err(e) => {
                    witness = None;
                    trace.witness_stop = Some((at, e.to_string()));
                }
            }
        }
        let record = match certify_step(&mut dh, i, &value, caps, witness.clone()) {
            Ok(r) => r,
            Err(error) => {
                trace.outcome = classify(at, error);
                return Ok(trace);
            }
        };
        if let (Some(prev), Some(cur)) = (
            trace.steps.last().and_then(|s| s.theta_cert.as_ref()),
            &record.theta_cert,
        ) {
            match cur.compare(prev) {
                Ok(Ordering::Less) => {}
                Ok(_) => {
                    trace.outcome = Outcome::Failed {
                        at,
                        reason: Error::Certificate {
                            step: at,
                            msg: "theta certificate did not decrease".to_string(),
                        }
                        .to_string(),
                    };
                    trace.steps.push(record);
                    return Ok(trace);
                }
                Err(error) => {
                    trace.outcome = classify(at, error);
                    return Ok(trace);
                }
            }
        }
        trace.steps.push(record);
        if value.is_zero() {
            trace.outcome = Outcome::Terminated { at };
            return Ok(trace);
        }
        if at >= caps.max_steps {
            trace.outcome = Outcome::StepCap { at };
            return Ok(trace);
        }
        match dh.upgrade(i, &value) {
            Ok(up) => value = up - 1u32,
            Err(error) => {
                trace.outcome = classify(at + 1, error);
                return Ok(trace);
            }
        }
        i += 1;
    }
}

fn classify(at: u64, error: Error) -> Outcome {
    let reason = error.to_string();
    if error.is_budget() {
        Outcome::Budget { at, reason }
    } else {
        Outcome::Failed { at, reason }
    }
}

fn certify_step(
    dh: &mut DynamicalHierarchy,
    i: usize,
    value: &Nat,
    caps: Caps,
    psi_witness: Option<PsiWitness>,
) -> Result<StepRecord> {
    let level = dh.level(i, value)?;
    let chosen_base = level.upper_base(value)?;
    let theta_cert = if caps.certify.theta() {
        Some(ThetaInterp::new(level, caps.budget).little_o(value)?)
    } else {
        None
    };
    Ok(StepRecord {
        i: index(i),
        value: value.clone(),
        chosen_base,
        theta_cert,
        psi_witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: u64,
    pub failure: Option<(u64, String)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Recomputes every field of every step and the stated outcome.
pub fn verify_trace(trace: &GoodsteinTrace) -> VerifyReport {
    let mut checked = 0;
    match verify_inner(trace, &mut checked) {
        Ok(()) => VerifyReport {
            checked,
            failure: None,
        },
        Err((at, msg)) => VerifyReport {
            checked,
            failure: Some((at, msg)),
        },
    }
}

type Check = core::result::Result<(), (u64, String)>;

fn fail<T: ToString>(at: u64, msg: T) -> (u64, String) {
    (at, msg.to_string())
}

fn verify_inner(trace: &GoodsteinTrace, checked: &mut u64) -> Check {
    let caps = trace.caps;
    let mut dh =
        DynamicalHierarchy::new(trace.hierarchy.clone(), caps.budget).map_err(|e| fail(0, e))?;
    let mut expected = trace.seed.clone();
    let mut prev: Option<&StepRecord> = None;
    for (pos, step) in trace.steps.iter().enumerate() {
        let at = index(pos);
        let i = pos;
        if step.i != at {
            return Err(fail(at, format!("step index {} out of place", step.i)));
        }
        if pos > 0 {
            let before = &trace.steps[pos - 1].value;
            if before.is_zero() {
                return Err(fail(at, "steps continue past zero"));
            }
            let up = dh.upgrade(i - 1, before).map_err(|e| fail(at, e))?;
            expected = up - 1u32;
        }
        if step.value != expected {
            return Err(fail(
                at,
                format!("value {} should be {}", step.value, expected),
            ));
        }
        let level = dh.level(i, &step.value).map_err(|e| fail(at, e))?;
        if step.chosen_base != level.upper_base(&step.value).map_err(|e| fail(at, e))? {
            return Err(fail(at, "chosen base is not the base of the value"));
        }
        if caps.certify.theta() != step.theta_cert.is_some() {
            return Err(fail(
                at,
                "theta certificate presence disagrees with the header",
            ));
        }
        if let Some(cert) = &step.theta_cert {
            let again = ThetaInterp::new(level.clone(), caps.budget)
                .little_o(&step.value)
                .map_err(|e| fail(at, e))?;
            if &again != cert {
                return Err(fail(at, "theta certificate does not match o_i(value)"));
            }
            if let Some(before) = prev.and_then(|p| p.theta_cert.as_ref()) {
                if cert.compare(before).map_err(|e| fail(at, e))? != Ordering::Less {
                    return Err(fail(at, "theta certificates do not decrease"));
                }
            }
        }
        verify_psi(trace, &mut dh, pos, level).map_err(|(a, m)| (a.max(at), m))?;
        prev = Some(step);
        *checked += 1;
    }
    verify_outcome(trace)?;
    verify_failure(trace, &mut dh)?;
    verify_witness_stop(trace, &mut dh)
}

fn verify_psi(
    trace: &GoodsteinTrace,
    dh: &mut DynamicalHierarchy,
    pos: usize,
    level: crate::BaseHierarchy,
) -> Check {
    let at = index(pos);
    let step = &trace.steps[pos];
    let stopped = trace.witness_stop.as_ref().is_some_and(|(s, _)| *s <= at);
    let Some(w) = &step.psi_witness else {
        if trace.caps.certify.psi() && !stopped {
            return Err(fail(at, "witness missing"));
        }
        return Ok(());
    };
    if !trace.caps.certify.psi() || stopped {
        return Err(fail(at, "witness present where none was requested"));
    }
    if w.n > step.value {
        return Err(fail(at, "witness exceeds the value"));
    }
    if pos == 0 && w.n != trace.seed {
        return Err(fail(at, "the chain must start at the seed"));
    }
    let budget = trace.caps.budget;
    let source = if pos == 0 {
        level
    } else {
        dh.level(pos, &w.n).map_err(|e| fail(at, e))?
    };
    let mut u = PsiInterp::new(source, budget);
    if u.little_u(&w.n).map_err(|e| fail(at, e))? != w.u_term {
        return Err(fail(at, "u-term does not match u_i(n_i)"));
    }
    if !u.is_u_normal_form(&w.n).map_err(|e| fail(at, e))? {
        return Err(fail(at, "witness outside u-normal form"));
    }
    if pos > 0 {
        let before = trace.steps[pos - 1]
            .psi_witness
            .as_ref()
            .ok_or_else(|| fail(at, "chain has a gap"))?;
        let want = OrdTerm::from(before.u_term.clone())
            .fund_seq_within(&Cnt::small(at), &budget)
            .map_err(|e| fail(at, e))?;
        if OrdTerm::from(w.u_term.clone()) != want {
            return Err(fail(at, "u-term is not the fundamental sequence step"));
        }
    }
    Ok(())
}

/// The error `run` hits right after the last recorded step, if any.
fn next_step_error(trace: &GoodsteinTrace, dh: &mut DynamicalHierarchy) -> Option<Error> {
    let i = trace.steps.len();
    let value = match trace.steps.last() {
        None => trace.seed.clone(),
        Some(last) => match dh.upgrade(i - 1, &last.value) {
            Ok(up) => up - 1u32,
            Err(e) => return Some(e),
        },
    };
    let record = match certify_step(dh, i, &value, trace.caps, None) {
        Ok(r) => r,
        Err(e) => return Some(e),
    };
    let prev = trace.steps.last().and_then(|s| s.theta_cert.as_ref());
    match (prev, &record.theta_cert) {
        (Some(p), Some(c)) => c.compare(p).err(),
        _ => None,
    }
}

fn verify_failure(trace: &GoodsteinTrace, dh: &mut DynamicalHierarchy) -> Check {
    let at = trace.outcome.at();
    if !matches!(
        trace.outcome,
        Outcome::Budget { .. } | Outcome::Failed { .. }
    ) {
        return Ok(());
    }
    if trace
        .steps
        .last()
        .is_some_and(|s| s.value.is_zero() || s.i >= trace.caps.max_steps)
    {
        return Err(fail(at, "failure claimed after the run had ended"));
    }
    match next_step_error(trace, dh) {
        Some(e) if classify(at, e.clone()) == trace.outcome => Ok(()),
        Some(e) => Err(fail(
            at,
            format!("recorded failure differs from the recomputed one: {e}"),
        )),
        None => Err(fail(at, "recorded failure does not recur")),
    }
}

fn verify_witness_stop(trace: &GoodsteinTrace, dh: &mut DynamicalHierarchy) -> Check {
    let Some((at, reason)) = &trace.witness_stop else {
        return Ok(());
    };
    let at = *at;
    let pos = usize::try_from(at).unwrap_or(usize::MAX);
    if !trace.caps.certify.psi() {
        return Err(fail(at, "witness stop recorded without psi certification"));
    }
    let ended_there = trace.outcome.at() == at
        && matches!(
            trace.outcome,
            Outcome::Budget { .. } | Outcome::Failed { .. }
        );
    if pos > trace.steps.len() || (pos == trace.steps.len() && !ended_there) {
        return Err(fail(at, "witness stop lies beyond the trace"));
    }
    let again = if pos == 0 {
        first_witness(dh, &trace.seed, trace.caps.budget)
    } else {
        let prev = trace.steps[pos - 1]
            .psi_witness
            .as_ref()
            .ok_or_else(|| fail(at, "chain has a gap"))?;
        next_witness(dh, pos - 1, prev, trace.caps.budget)
    };
    match again {
        Err(e) if &e.to_string() == reason => Ok(()),
        Err(e) => Err(fail(at, format!("witness stop reason differs: {e}"))),
        Ok(_) => Err(fail(at, "witness chain does not stop here")),
    }
}

fn verify_outcome(trace: &GoodsteinTrace) -> Check {
    let last = trace.steps.last();
    let last_at = last.map(|s| s.i);
    match &trace.outcome {
        Outcome::Terminated { at } => {
            if last_at != Some(*at) || !last.is_some_and(|s| s.value.is_zero()) {
                return Err(fail(*at, "termination claimed without a final zero"));
            }
        }
        Outcome::StepCap { at } => {
            if last_at != Some(*at)
                || *at != trace.caps.max_steps
                || last.is_some_and(|s| s.value.is_zero())
            {
                return Err(fail(*at, "step cap does not match the trace"));
            }
        }
        Outcome::Budget { at, .. } | Outcome::Failed { at, .. } => {
            // a certificate that fails to decrease is already rejected above
            if *at != last_at.map_or(0, |a| a + 1) {
                return Err(fail(*at, "failure point does not follow the trace"));
            }
        }
    }
    Ok(())
}

/// One link `(mᵢ, nᵢ)` of the lower-bound chain on the ouroboros hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLink {
    pub i: u64,
    pub m: Nat,
    pub n: Nat,
    pub u_term: Cnt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainStop {
    /// `nᵢ = 0`, after which every later link is zero as well.
    Zero,
    StepCap(u64),
    Error {
        at: u64,
        error: Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub seed: Nat,
    pub links: Vec<ChainLink>,
    pub stop: ChainStop,
}

impl ChainReport {
    /// Links past the first, each checked to realize the next fundamental sequence step.
    pub fn verified_steps(&self) -> usize {
        self.links.len().saturating_sub(1)
    }
}

/// The chain `nᵢ ≤ mᵢ = 𝔾ᵢ(2^^(k+1))` with `u_{i+1}(n_{i+1}) = u_i(n_i)[i+1]`.
///
/// Only the upgrades of `mᵢ` are computed, never the levels around them, so
/// the chain can outlast a certified run of the same sequence.
pub fn lower_bound_chain(k: u64, caps: Caps) -> Result<ChainReport> {
    let seed = caps.budget.superexp(&nat(2), &nat(k + 1))?;
    let mut dh = DynamicalHierarchy::new(HierarchySpec::Ouroboros, caps.budget)?;
    let mut links = Vec::new();
    let mut m = seed.clone();
    let mut w = first_witness(&mut dh, &seed, caps.budget)?;
    let mut i = 0usize;
    let stop = loop {
        let at = index(i);
        if w.n > m {
            return Err(Error::Witness(format!("n_{at} exceeds m_{at}")));
        }
        links.push(ChainLink {
            i: at,
            m: m.clone(),
            n: w.n.clone(),
            u_term: w.u_term.clone(),
        });
        if w.n.is_zero() {
            break ChainStop::Zero;
        }
        if at >= caps.max_steps {
            break ChainStop::StepCap(at);
        }
        match dh
            .upgrade(i, &m)
            .and_then(|up| Ok((up - 1u32, next_witness(&mut dh, i, &w, caps.budget)?)))
        {
            Ok((next_m, next_w)) => {
                m = next_m;
                w = next_w;
            }
            Err(error) => break ChainStop::Error { at: at + 1, error },
        }
        i += 1;
    };
    Ok(ChainReport { seed, links, stop })
}

#[cfg(test)]
mod tests;
