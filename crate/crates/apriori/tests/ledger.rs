//! Exact newborn vertical weight ledger under its preconditions.

use apriori::pullback::{evaluate_branches, newborn_vertical_ledger, target_share, WeightLedger};
use num_rational::Rational64;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational64> {
    (0i64..2000, 1i64..200).prop_map(|(n, d)| Rational64::new(n, d))
}

proptest! {
    #[test]
    fn preconditions_give_a_twentieth(w1 in rational(), extra in rational(), t in 0i64..=100) {
        prop_assume!(w1 > Rational64::from_integer(0));
        let w0 = w1 + extra;
        // nu anywhere in [W_0/2, W_0].
        let nu = w0 * Rational64::new(100 + t, 200);
        let l = WeightLedger::new(w0, w1, nu, Rational64::from_integer(0)).unwrap();
        let b = newborn_vertical_ledger(&l).unwrap();
        prop_assert!(b.meets_target);
        prop_assert!(b.bound >= w1 / 20);
        prop_assert!(b.bound >= target_share() * w1);
    }

    #[test]
    fn branches_are_the_displayed_formulas(w0 in rational(), w1 in rational(), nu in rational()) {
        let l = WeightLedger::new(w0, w1, nu, Rational64::from_integer(0)).unwrap();
        let b = evaluate_branches(&l);
        prop_assert_eq!(b.branch_loss, nu / 2 - w1 / 4);
        let rough_defined = w0 - w1 <= w1 / 5;
        prop_assert_eq!(b.branch_rough.is_some(), rough_defined);
        if let Some(r) = b.branch_rough {
            prop_assert_eq!(r, nu / 2 - w1 / 5);
            prop_assert_eq!(b.bound, r.max(b.branch_loss));
        } else {
            prop_assert_eq!(b.bound, b.branch_loss);
        }
    }

    #[test]
    fn precondition_breaches_are_reported(w1 in rational(), gap in rational()) {
        prop_assume!(gap > Rational64::from_integer(0));
        let w0 = w1 + gap;
        let low_nu = WeightLedger::new(w0, w1, w0 / 2 - gap / 2, Rational64::from_integer(0)).unwrap();
        prop_assert!(newborn_vertical_ledger(&low_nu).is_err());
        let inverted = WeightLedger::new(w1, w0, w1, Rational64::from_integer(0)).unwrap();
        prop_assert!(newborn_vertical_ledger(&inverted).is_err());
    }
}

#[test]
fn negative_weights_are_rejected() {
    assert!(WeightLedger::from_integers(-1, 1, 1, 0).is_err());
}
