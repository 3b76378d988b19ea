use std::cmp::Ordering;

use goodstein_core::numerals::Budget;
use goodstein_core::ordinal_terms::{
    is_psi_normal_form, psi, step_down, theta, Atom, Cnt, OrdTerm,
};
use proptest::prelude::*;

#[derive(Debug, Clone, Copy)]
enum Flavor {
    Theta,
    Psi,
}

fn terms(flavor: Flavor) -> impl Strategy<Value = OrdTerm> {
    let leaf = prop_oneof![
        (0u64..4).prop_map(OrdTerm::small),
        Just(OrdTerm::from(Cnt::omega())),
        Just(OrdTerm::big_omega()),
    ];
    leaf.prop_recursive(4, 24, 3, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.add(&y).unwrap_or(x)),
            (inner.clone(), 1u64..3).prop_map(|(x, k)| OrdTerm::omega_pow(x, Cnt::small(k))),
            inner.clone().prop_map(move |x| match flavor {
                Flavor::Theta => OrdTerm::from(theta(x)),
                Flavor::Psi => match psi(x.clone()) {
                    Ok(c) if is_psi_normal_form(&x).unwrap_or(false) => OrdTerm::from(c),
                    _ => x,
                },
            }),
        ]
    })
}

fn any_flavor() -> impl Strategy<Value = (OrdTerm, OrdTerm, OrdTerm)> {
    prop_oneof![
        (
            terms(Flavor::Theta),
            terms(Flavor::Theta),
            terms(Flavor::Theta)
        ),
        (terms(Flavor::Psi), terms(Flavor::Psi), terms(Flavor::Psi)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn compare_is_a_total_order((x, y, z) in any_flavor()) {
        let xy = x.compare(&y).unwrap();
        prop_assert_eq!(xy, y.compare(&x).unwrap().reverse());
        prop_assert_eq!(xy == Ordering::Equal, x == y);
        prop_assert_eq!(x.compare(&x).unwrap(), Ordering::Equal);
        let yz = y.compare(&z).unwrap();
        if xy != Ordering::Greater && yz != Ordering::Greater {
            prop_assert_ne!(x.compare(&z).unwrap(), Ordering::Greater);
        }
        if xy == Ordering::Less && yz == Ordering::Less {
            prop_assert_eq!(x.compare(&z).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn addition_is_monotone_on_the_right((x, y, z) in any_flavor()) {
        if y.compare(&z).unwrap() == Ordering::Less {
            prop_assert_eq!(x.add(&y).unwrap().compare(&x.add(&z).unwrap()).unwrap(), Ordering::Less);
        }
        prop_assert_ne!(x.add(&y).unwrap().compare(&x).unwrap(), Ordering::Less);
    }

    #[test]
    fn natural_sum_commutes((x, y, _z) in any_flavor()) {
        prop_assert_eq!(x.natural_sum(&y).unwrap(), y.natural_sum(&x).unwrap());
    }

    #[test]
    fn fundamental_sequences_stay_below(x in terms(Flavor::Psi), i in 0u64..5) {
        let x = match x.as_countable() {
            Some(_) => x,
            None => match psi(x.clone()) {
                Ok(c) if is_psi_normal_form(&x).unwrap_or(false) => OrdTerm::from(c),
                _ => x,
            },
        };
        prop_assume!(x.is_limit());
        let budget = Budget::default();
        let Ok(y) = x.fund_seq_within(&Cnt::small(i), &budget) else {
            return Ok(());
        };
        prop_assert_eq!(y.compare(&x).unwrap(), Ordering::Less);
        if i > 0 {
            let z = x.fund_seq_within(&Cnt::small(i - 1), &budget).unwrap();
            prop_assert_ne!(z.compare(&y).unwrap(), Ordering::Greater);
        }
    }
}

fn psi_of(s: &str) -> OrdTerm {
    OrdTerm::from(psi(s.parse().unwrap()).unwrap())
}

fn strictly_decreasing_to_zero(start: OrdTerm) -> usize {
    let seq = step_down(&start, 64, &Budget::default()).unwrap();
    assert!(seq.last().unwrap().is_zero());
    for w in seq.windows(2) {
        assert_eq!(w[1].compare(&w[0]).unwrap(), Ordering::Less);
    }
    seq.len()
}

#[test]
fn stepping_down_reaches_zero() {
    assert_eq!(strictly_decreasing_to_zero(psi_of("W^1*1")), 3);
    assert_eq!(strictly_decreasing_to_zero(psi_of("W^W^1*1*1")), 3);
}

#[test]
fn fundamental_sequence_clauses_by_hand() {
    let omega = OrdTerm::from(Cnt::omega());
    // ω[i] = i
    for i in 0..5 {
        assert_eq!(omega.fund_seq_at(i).unwrap(), OrdTerm::small(i));
    }
    // ψ(Ω·2)[1] = ψ(Ω + ψ(Ω·2)[0]) = ψ(Ω + 0) = ω
    let x = psi_of("W^1*2");
    assert_eq!(x.fund_seq_at(0).unwrap(), OrdTerm::zero());
    assert_eq!(x.fund_seq_at(1).unwrap(), omega);
    assert_eq!(x.fund_seq_at(2).unwrap(), psi_of("W^1*1+w"));
    let atom = Atom::Psi(Box::new("W^1*1+w".parse().unwrap()));
    assert_eq!(
        x.fund_seq_at(3).unwrap(),
        psi_of(&format!("W^1*1+{}", OrdTerm::from(Cnt::atom(atom))))
    );
}
