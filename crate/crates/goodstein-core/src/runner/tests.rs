use super::*;
use alloc::vec;

/// Hereditary base bump written directly on `u128`.
fn bump(n: u128, b: u128) -> u128 {
    let mut out = 0u128;
    let mut rest = n;
    let mut e = 0u128;
    while rest > 0 {
        let d = rest % b;
        if d > 0 {
            out += d * (b + 1).pow(bump(e, b) as u32);
        }
        rest /= b;
        e += 1;
    }
    out
}

fn textbook(seed: u128, steps: usize) -> Vec<u128> {
    let mut out = vec![seed];
    let mut v = seed;
    for i in 0..steps {
        if v == 0 {
            break;
        }
        v = bump(v, i as u128 + 2) - 1;
        out.push(v);
    }
    out
}

fn caps(max_steps: u64, certify: Certify) -> Caps {
    Caps {
        max_steps,
        budget: Budget::default(),
        certify,
    }
}

#[test]
fn classic_six() {
    let t = run(&HierarchySpec::Classic, &nat(6), caps(3, Certify::None)).unwrap();
    assert_eq!(t.steps[1].value, nat(29));
}

#[test]
fn classic_three_terminates() {
    let t = run(&HierarchySpec::Classic, &nat(3), caps(50, Certify::Theta)).unwrap();
    let values: Vec<Nat> = t.values().cloned().collect();
    assert_eq!(values, [3u64, 3, 3, 2, 1, 0].map(nat));
    assert_eq!(t.outcome, Outcome::Terminated { at: 5 });
    assert!(verify_trace(&t).passed());
}

#[test]
fn matches_textbook_small() {
    for seed in 0..=8u64 {
        let t = run(&HierarchySpec::Classic, &nat(seed), caps(6, Certify::None)).unwrap();
        let ours: Vec<Nat> = t.values().cloned().collect();
        let theirs: Vec<Nat> = textbook(seed as u128, 6)
            .into_iter()
            .map(Nat::from)
            .collect();
        assert_eq!(ours, theirs, "seed {seed}");
    }
}

#[test]
fn zero_seed() {
    let t = run(&HierarchySpec::Ouroboros, &nat(0), caps(10, Certify::Both)).unwrap();
    assert_eq!(t.steps.len(), 1);
    assert_eq!(t.outcome, Outcome::Terminated { at: 0 });
}

#[test]
fn tampering_is_caught() {
    let t = run(&HierarchySpec::Classic, &nat(6), caps(4, Certify::Theta)).unwrap();
    assert!(verify_trace(&t).passed());
    let mut bad = t.clone();
    bad.steps[2].theta_cert = bad.steps[1].theta_cert.clone();
    assert_eq!(verify_trace(&bad).failure.map(|f| f.0), Some(2));
    let mut bad = t.clone();
    bad.steps[3].value += 1u32;
    assert_eq!(verify_trace(&bad).failure.map(|f| f.0), Some(3));
}

#[test]
fn budget_outcomes_are_replayed() {
    let tight = Caps {
        budget: Budget::with_bits(40),
        ..caps(50, Certify::Theta)
    };
    let t = run(&HierarchySpec::Classic, &nat(16), tight).unwrap();
    assert!(
        matches!(t.outcome, Outcome::Budget { .. }),
        "{:?}",
        t.outcome
    );
    assert!(verify_trace(&t).passed());
    let mut bad = t.clone();
    if let Outcome::Budget { reason, .. } = &mut bad.outcome {
        reason.push('!');
    }
    assert!(!verify_trace(&bad).passed());
    let mut bad = t.clone();
    bad.outcome = Outcome::Failed {
        at: t.outcome.at(),
        reason: "bit budget of 40 bits exceeded".to_string(),
    };
    assert!(!verify_trace(&bad).passed());
    let mut bad = t.clone();
    bad.caps.budget = Budget::default();
    assert!(!verify_trace(&bad).passed());
}

#[test]
fn witness_stops_are_replayed() {
    let t = run(&HierarchySpec::Classic, &nat(4), caps(3, Certify::Both)).unwrap();
    let (at, _) = t
        .witness_stop
        .clone()
        .expect("the classic chain stops early");
    assert_eq!(at, 2);
    assert!(verify_trace(&t).passed());
    let mut bad = t.clone();
    bad.witness_stop.as_mut().unwrap().1.push('!');
    assert_eq!(verify_trace(&bad).failure.map(|f| f.0), Some(2));
    let mut bad = t.clone();
    bad.witness_stop = None;
    assert!(!verify_trace(&bad).passed());
    let plain = run(&HierarchySpec::Classic, &nat(4), caps(3, Certify::Theta)).unwrap();
    let mut bad = plain.clone();
    bad.witness_stop = Some((1, "made up".to_string()));
    assert!(!verify_trace(&bad).passed());
}

#[test]
fn chain_from_four() {
    let report = lower_bound_chain(1, caps(5, Certify::Psi)).unwrap();
    assert_eq!(report.seed, nat(4));
    assert!(report.verified_steps() >= 2, "{report:?}");
    assert_eq!(report.links[1].n, nat(1));
    assert_eq!(report.links[1].m, nat(26));
    assert_eq!(report.links[2].n, nat(0));
    assert_eq!(report.stop, ChainStop::Zero);
}

#[test]
fn chain_from_two() {
    let report = lower_bound_chain(0, caps(5, Certify::Psi)).unwrap();
    assert_eq!(report.seed, nat(2));
    assert_eq!(report.links[0].u_term, Cnt::omega());
    assert_eq!(report.links[1].n, nat(1));
}

#[test]
fn psi_trace_verifies() {
    let t = run(&HierarchySpec::Ouroboros, &nat(4), caps(1, Certify::Both)).unwrap();
    assert!(verify_trace(&t).passed(), "{:?}", verify_trace(&t));
    let mut bad = t.clone();
    bad.steps[1].psi_witness.as_mut().unwrap().n = nat(2);
    assert!(!verify_trace(&bad).passed());
}
