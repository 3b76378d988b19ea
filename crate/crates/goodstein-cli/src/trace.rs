//! Line-delimited JSON form of a [`GoodsteinTrace`].
//!
//! A file holds one header line, one line per step and a closing outcome
//! line. Naturals are decimal strings and ordinal terms use the textual
//! grammar, so reading a file and writing it back reproduces it byte for byte.

use std::io::{BufRead, Write};
use std::str::FromStr;

use goodstein_core::runner::{Caps, Certify, GoodsteinTrace, Outcome, PsiWitness, StepRecord};
use goodstein_core::successors::HierarchySpec;
use goodstein_core::{Budget, Cnt, Nat, OrdTerm};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An optional field that must still be spelled out, as `null` when absent.
fn present<'de, D, T>(d: D) -> Result<Option<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    Option::deserialize(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetLine {
    pub bits: u64,
    pub work: u64,
    pub nodes: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeaderLine {
    pub hierarchy: String,
    pub seed: String,
    pub max_steps: u64,
    pub certify: String,
    pub budget: BudgetLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessLine {
    pub n: String,
    pub u_term: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepLine {
    pub i: String,
    pub value: String,
    pub chosen_base: String,
    #[serde(deserialize_with = "present")]
    pub theta_cert: Option<String>,
    #[serde(deserialize_with = "present")]
    pub psi_witness: Option<WitnessLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Terminated,
    StepCap,
    Budget,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopLine {
    pub at: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeLine {
    pub status: Status,
    pub at: String,
    #[serde(deserialize_with = "present")]
    pub reason: Option<String>,
    #[serde(deserialize_with = "present")]
    pub witness_stop: Option<StopLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Line {
    Header(HeaderLine),
    Step(StepLine),
    Outcome(OutcomeLine),
}

fn cnt_text(c: &Cnt) -> String {
    OrdTerm::from(c.clone()).to_string()
}

pub fn to_lines(trace: &GoodsteinTrace) -> Vec<Line> {
    let b = trace.caps.budget;
    let mut out = vec![Line::Header(HeaderLine {
        hierarchy: trace.hierarchy.to_string(),
        seed: trace.seed.to_string(),
        max_steps: trace.caps.max_steps,
        certify: trace.caps.certify.to_string(),
        budget: BudgetLine {
            bits: b.bits,
            work: b.work,
            nodes: b.nodes,
            depth: b.depth,
        },
    })];
    for s in &trace.steps {
        out.push(Line::Step(StepLine {
            i: s.i.to_string(),
            value: s.value.to_string(),
            chosen_base: s.chosen_base.to_string(),
            theta_cert: s.theta_cert.as_ref().map(cnt_text),
            psi_witness: s.psi_witness.as_ref().map(|w| WitnessLine {
                n: w.n.to_string(),
                u_term: cnt_text(&w.u_term),
            }),
        }));
    }
    let (status, reason) = match &trace.outcome {
        Outcome::Terminated { .. } => (Status::Terminated, None),
        Outcome::StepCap { .. } => (Status::StepCap, None),
        Outcome::Budget { reason, .. } => (Status::Budget, Some(reason.clone())),
        Outcome::Failed { reason, .. } => (Status::Failed, Some(reason.clone())),
    };
    out.push(Line::Outcome(OutcomeLine {
        status,
        at: trace.outcome.at().to_string(),
        reason,
        witness_stop: trace.witness_stop.as_ref().map(|(at, reason)| StopLine {
            at: at.to_string(),
            reason: reason.clone(),
        }),
    }));
    out
}

pub fn write_trace<W: Write>(trace: &GoodsteinTrace, mut w: W) -> std::io::Result<()> {
    for line in to_lines(trace) {
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

struct Reader {
    line: usize,
}

impl Reader {
    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, TraceError> {
        Err(TraceError::Malformed {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn nat(&self, field: &str, s: &str) -> Result<Nat, TraceError> {
        // canonical decimal only, so a re-serialized trace matches the file
        let canonical = !s.is_empty()
            && s.bytes().all(|c| c.is_ascii_digit())
            && (s == "0" || !s.starts_with('0'));
        match Nat::from_str(s) {
            Ok(n) if canonical => Ok(n),
            _ => self.fail(format!("{field}: {s:?} is not a decimal natural")),
        }
    }

    fn index(&self, field: &str, s: &str) -> Result<u64, TraceError> {
        let n = self.nat(field, s)?;
        match u64::try_from(&n) {
            Ok(v) => Ok(v),
            Err(_) => self.fail(format!("{field}: {s} is too large")),
        }
    }

    fn cnt(&self, field: &str, s: &str) -> Result<Cnt, TraceError> {
        let t = match OrdTerm::from_str(s) {
            Ok(t) => t,
            Err(e) => return self.fail(format!("{field}: {e}")),
        };
        if t.to_string() != s {
            return self.fail(format!("{field}: {s:?} is not in canonical form"));
        }
        match t.as_countable() {
            Some(c) => Ok(c.clone()),
            None => self.fail(format!("{field}: {s} is uncountable")),
        }
    }
}

pub fn read_trace<R: BufRead>(r: R) -> Result<GoodsteinTrace, TraceError> {
    let mut rd = Reader { line: 0 };
    let mut header = None;
    let mut steps = Vec::new();
    let mut end = None;
    for raw in r.lines() {
        let raw = raw?;
        rd.line += 1;
        if end.is_some() {
            return rd.fail("content after the outcome line");
        }
        let line: Line = match serde_json::from_str(&raw) {
            Ok(l) => l,
            Err(e) => return rd.fail(e.to_string()),
        };
        match (line, header.is_some()) {
            (Line::Header(h), false) => header = Some(parse_header(&rd, h)?),
            (Line::Header(_), true) => return rd.fail("second header"),
            (_, false) => return rd.fail("trace must start with a header"),
            (Line::Step(s), true) => steps.push(parse_step(&rd, s)?),
            (Line::Outcome(o), true) => end = Some(parse_outcome(&rd, o)?),
        }
    }
    let Some((hierarchy, seed, caps)) = header else {
        return rd.fail("empty trace");
    };
    let Some((outcome, witness_stop)) = end else {
        return rd.fail("missing outcome line");
    };
    Ok(GoodsteinTrace {
        hierarchy,
        seed,
        caps,
        steps,
        outcome,
        witness_stop,
    })
}

fn parse_header(rd: &Reader, h: HeaderLine) -> Result<(HierarchySpec, Nat, Caps), TraceError> {
    let spec = match HierarchySpec::from_str(&h.hierarchy) {
        Ok(s) if s.to_string() == h.hierarchy => s,
        Ok(_) => {
            return rd.fail(format!(
                "hierarchy {:?} is not in canonical form",
                h.hierarchy
            ))
        }
        Err(e) => return rd.fail(e.to_string()),
    };
    let certify = match Certify::from_str(&h.certify) {
        Ok(c) => c,
        Err(e) => return rd.fail(e.to_string()),
    };
    let caps = Caps {
        max_steps: h.max_steps,
        certify,
        budget: Budget {
            bits: h.budget.bits,
            work: h.budget.work,
            nodes: h.budget.nodes,
            depth: h.budget.depth,
        },
    };
    Ok((spec, rd.nat("seed", &h.seed)?, caps))
}

fn parse_step(rd: &Reader, s: StepLine) -> Result<StepRecord, TraceError> {
    Ok(StepRecord {
        i: rd.index("i", &s.i)?,
        value: rd.nat("value", &s.value)?,
        chosen_base: rd.nat("chosen_base", &s.chosen_base)?,
        theta_cert: s
            .theta_cert
            .as_deref()
            .map(|t| rd.cnt("theta_cert", t))
            .transpose()?,
        psi_witness: match s.psi_witness {
            None => None,
            Some(w) => Some(PsiWitness {
                n: rd.nat("psi_witness.n", &w.n)?,
                u_term: rd.cnt("psi_witness.u_term", &w.u_term)?,
            }),
        },
    })
}

fn parse_outcome(
    rd: &Reader,
    o: OutcomeLine,
) -> Result<(Outcome, Option<(u64, String)>), TraceError> {
    let at = rd.index("at", &o.at)?;
    let outcome = match (o.status, o.reason) {
        (Status::Terminated, None) => Outcome::Terminated { at },
        (Status::StepCap, None) => Outcome::StepCap { at },
        (Status::Budget, Some(reason)) => Outcome::Budget { at, reason },
        (Status::Failed, Some(reason)) => Outcome::Failed { at, reason },
        (Status::Terminated | Status::StepCap, Some(_)) => {
            return rd.fail("reason given for a clean outcome")
        }
        (Status::Budget | Status::Failed, None) => return rd.fail("missing reason"),
    };
    let stop = match o.witness_stop {
        None => None,
        Some(s) => Some((rd.index("witness_stop.at", &s.at)?, s.reason)),
    };
    Ok((outcome, stop))
}

#[cfg(test)]
mod tests {
    use goodstein_core::runner::run;
    use goodstein_core::Nat;

    use super::*;

    fn trace_to_string(trace: &GoodsteinTrace) -> String {
        let mut buf = Vec::new();
        write_trace(trace, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    fn sample(spec: &str, seed: u32, certify: Certify, max_steps: u64) -> GoodsteinTrace {
        let caps = Caps {
            max_steps,
            certify,
            ..Caps::default()
        };
        run(&spec.parse().unwrap(), &Nat::from(seed), caps).unwrap()
    }

    #[test]
    fn roundtrip_is_exact() {
        for t in [
            sample("classic", 3, Certify::Theta, 100),
            sample("classic", 6, Certify::Both, 3),
            sample("finite-for: 4", 4, Certify::None, 4),
            sample("ouroboros", 4, Certify::Psi, 1),
        ] {
            let text = trace_to_string(&t);
            let back = read_trace(text.as_bytes()).unwrap();
            assert_eq!(back, t);
            assert_eq!(trace_to_string(&back), text);
        }
    }

    #[test]
    fn line_shapes() {
        let text = trace_to_string(&sample("classic", 3, Certify::Theta, 100));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 8);
        assert!(lines[0].starts_with(r#"{"kind":"header","hierarchy":"classic","seed":"3""#));
        assert!(lines[1]
            .starts_with(r#"{"kind":"step","i":"0","value":"3","chosen_base":"2","theta_cert":"#));
        assert_eq!(
            lines[7],
            r#"{"kind":"outcome","status":"terminated","at":"5","reason":null,"witness_stop":null}"#
        );
    }

    #[test]
    fn rejects_malformed_input() {
        let text = trace_to_string(&sample("classic", 3, Certify::Theta, 100));
        let bad = [
            text.replacen(r#""value":"3""#, r#""value":"03""#, 1),
            text.replacen(r#""value":"3""#, r#""value":"-3""#, 1),
            text.replacen(r#""kind":"step""#, r#""kind":"stride""#, 1),
            text.replacen(r#""seed":"3""#, r#""seed":"3","extra":1"#, 1),
            text.lines().skip(1).collect::<Vec<_>>().join("\n"),
            text.lines().take(7).collect::<Vec<_>>().join("\n"),
            format!("{text}{}\n", text.lines().last().unwrap()),
            String::new(),
            text.replacen(r#","psi_witness":null"#, "", 1),
            text.replacen(r#","witness_stop":null"#, "", 1),
        ];
        for b in bad {
            assert!(
                matches!(read_trace(b.as_bytes()), Err(TraceError::Malformed { .. })),
                "{b}"
            );
        }
    }
}
