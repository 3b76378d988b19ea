use goodstein_core::numerals::{base_change, decompose, digits, nat, Budget, Nat};
use goodstein_core::successors::OuroborosBuilder;
use goodstein_core::upgrade::UpgradeContext;
use goodstein_core::BaseHierarchy;
use proptest::prelude::*;

fn two_six() -> UpgradeContext {
    UpgradeContext::new(
        BaseHierarchy::from_u64s(&[2, 6]).unwrap(),
        BaseHierarchy::from_u64s(&[3, 30]).unwrap(),
        Budget::default(),
    )
    .unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn decomposition_roundtrip(n in 1u64.., b in 2u64..5000) {
        let d = decompose(&nat(n), &nat(b)).unwrap();
        prop_assert_eq!(d.recompose(), nat(n));
        prop_assert!(d.digit >= nat(1) && d.digit < nat(b));
        let power = nat(b).pow(u32::try_from(&d.exponent).unwrap());
        prop_assert!(d.remainder < power);
    }

    #[test]
    fn base_change_strictly_increasing(m in 0u64..700, gap in 1u64..300, b in 2u64..12, step in 0u64..5) {
        let n = m + gap;
        let c = b + step;
        let lo = base_change(&nat(m), &nat(b), &nat(c)).unwrap();
        let hi = base_change(&nat(n), &nat(b), &nat(c)).unwrap();
        prop_assert!(lo < hi);
    }

    #[test]
    fn base_change_monotone_in_target(n in 0u64..1000, b in 2u64..12, s in 0u64..5, t in 0u64..5) {
        let (c, d) = (b + s.min(t), b + s.max(t));
        let at_c = base_change(&nat(n), &nat(b), &nat(c)).unwrap();
        let at_d = base_change(&nat(n), &nat(b), &nat(d)).unwrap();
        prop_assert!(at_c <= at_d);
        if n >= b && d > c {
            prop_assert!(at_c < at_d);
        }
        prop_assert_eq!(base_change(&at_c, &nat(c), &nat(d)).unwrap(), at_d);
    }

    #[test]
    fn upgrade_strictly_increasing((m, n) in (1u64..=200).prop_flat_map(|n| (0..n, Just(n)))) {
        let mut ctx = two_six();
        prop_assert!(ctx.upgrade(&nat(m)).unwrap() < ctx.upgrade(&nat(n)).unwrap());
    }

    #[test]
    fn digit_transfer_and_divisibility(n in 0u64..65_536, pick in 0usize..2, extra in 0u64..3) {
        let mut ctx = two_six();
        let b = [2u64, 6][pick];
        let c = ctx.upgrade(&nat(b)).unwrap() + extra;
        let image = ctx.deep_base_change(&nat(n), &nat(b), &c).unwrap();
        let divides = |x: &Nat, y: &Nat| (x % y) == nat(0);
        prop_assert_eq!(divides(&nat(n), &nat(b)), divides(&image, &c));
        let lifted: std::collections::BTreeSet<Nat> = digits(&nat(n), &nat(b))
            .unwrap()
            .iter()
            .map(|x| ctx.upgrade(x).unwrap())
            .collect();
        prop_assert_eq!(digits(&image, &c).unwrap(), lifted);
        if n > 0 {
            let d = decompose(&nat(n), &nat(b)).unwrap();
            let id = decompose(&image, &c).unwrap();
            prop_assert_eq!(id.exponent, ctx.deep_base_change(&d.exponent, &nat(b), &c).unwrap());
            prop_assert_eq!(id.digit, ctx.upgrade(&d.digit).unwrap());
            prop_assert_eq!(id.remainder, ctx.deep_base_change(&d.remainder, &nat(b), &c).unwrap());
        }
    }
}

fn base_preservation(ctx: &mut UpgradeContext, n: &Nat) {
    let up = ctx.upgrade(n).unwrap();
    let source = ctx.source().clone();
    let target = ctx.target().clone();
    assert_eq!(
        source.contains(n).unwrap(),
        target.contains(&up).unwrap(),
        "membership at {n}"
    );
    if n >= source.min() && !source.contains(n).unwrap() {
        let b = source.upper_base(n).unwrap();
        let d = target.upper_base(&up).unwrap();
        assert_eq!(ctx.deep_base_change(n, &b, &d).unwrap(), up, "base at {n}");
    }
}

#[test]
fn upgrade_preserves_bases_two_six() {
    let mut ctx = two_six();
    let mut prev = None;
    for n in 0..=200u64 {
        let up = ctx.upgrade(&nat(n)).unwrap();
        if let Some(p) = prev {
            assert!(p < up);
        }
        base_preservation(&mut ctx, &nat(n));
        prev = Some(up);
    }
}

/// `↑6 = d^d + d` with `d = 27^27` here, far past any bit budget.
#[test]
fn upgrade_preserves_bases_ouroboros_prefix() {
    let two = BaseHierarchy::singleton(2).unwrap();
    let mut builder = OuroborosBuilder::new(two.clone(), 1, Budget::default()).unwrap();
    assert!(builder.upgrade(&nat(6)).unwrap_err().is_budget());
    let mut builder = OuroborosBuilder::new(two.clone(), 1, Budget::default()).unwrap();
    let mut prev = None;
    for n in 0..=5u64 {
        let stage = builder.stage_at(&nat(n.max(2))).unwrap();
        let mut ctx = UpgradeContext::new(two.clone(), stage, Budget::default()).unwrap();
        let up = ctx.upgrade(&nat(n)).unwrap();
        assert_eq!(up, builder.upgrade(&nat(n)).unwrap());
        if let Some(p) = prev {
            assert!(p < up);
        }
        base_preservation(&mut ctx, &nat(n));
        prev = Some(up);
    }
}

#[test]
fn locality() {
    let mut full = two_six();
    for n in 0..=100u64 {
        let up = full.upgrade(&nat(n)).unwrap();
        let base = full.target().upper_base(&up).unwrap();
        for m in [base.clone(), base + 7u32] {
            let b = full.source().restrict(&nat(n)).unwrap();
            let c = full.target().restrict(&m).unwrap();
            let mut local = UpgradeContext::new(b, c, Budget::default()).unwrap();
            for x in 0..=n {
                assert_eq!(
                    local.upgrade(&nat(x)).unwrap(),
                    full.upgrade(&nat(x)).unwrap(),
                    "n={n} x={x}"
                );
            }
        }
    }
}
