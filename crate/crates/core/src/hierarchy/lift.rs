//! Lifting a measure on `X` to a measure on a relation `A ⊆ X × Y` with the
//! same marginal, by selecting the least fiber element.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::game::FiniteMeasure;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("support point {0} has an empty fiber in the relation")]
pub struct EmptyFiber(pub String);

/// `x ↦ least y with (x, y) ∈ A`, defined on the projection of `A`.
pub fn least_uniformizer<X: Ord + Clone, Y: Ord + Clone>(relation: &BTreeSet<(X, Y)>) -> BTreeMap<X, Y> {
    let mut out = BTreeMap::new();
    for (x, y) in relation {
        // pairs iterate in lexicographic order, so the first y per x is least
        out.entry(x.clone()).or_insert_with(|| y.clone());
    }
    out
}

/// Pushforward of `mu` under `x ↦ (x, f(x))` for the least uniformizer `f`.
pub fn lubin_lift<X, Y>(relation: &BTreeSet<(X, Y)>, mu: &FiniteMeasure<X>) -> Result<FiniteMeasure<(X, Y)>, EmptyFiber>
where
    X: Ord + Clone + Debug,
    Y: Ord + Clone,
{
    let f = least_uniformizer(relation);
    if let Some(x) = mu.support().iter().find(|x| !f.contains_key(x)) {
        return Err(EmptyFiber(format!("{x:?}")));
    }
    Ok(mu.pushforward(|x| (x.clone(), f[x].clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn unique_uniformizer() {
        let a: BTreeSet<(u8, u8)> = [(0, 1), (1, 0)].into();
        let mu = FiniteMeasure::uniform([0u8, 1]).unwrap();
        let nu = lubin_lift(&a, &mu).unwrap();
        let expected = FiniteMeasure::from_pairs([((0, 1), rat(1, 2)), ((1, 0), rat(1, 2))]).unwrap();
        assert_eq!(nu, expected);
    }

    #[test]
    fn constant_fiber_is_product() {
        let a: BTreeSet<(u8, char)> = (0..4).map(|x| (x, 'y')).collect();
        let mu = FiniteMeasure::from_pairs([(0u8, rat(1, 3)), (3, rat(2, 3))]).unwrap();
        let nu = lubin_lift(&a, &mu).unwrap();
        assert_eq!(nu, mu.pushforward(|&x| (x, 'y')));
    }

    #[test]
    fn least_selection() {
        let a: BTreeSet<(u8, char)> = [(0, 'b'), (0, 'a')].into();
        let nu = lubin_lift(&a, &FiniteMeasure::dirac(0u8)).unwrap();
        assert_eq!(nu, FiniteMeasure::dirac((0, 'a')));
    }

    #[test]
    fn empty_fiber_reported() {
        let a: BTreeSet<(u8, u8)> = [(0, 0)].into();
        let err = lubin_lift(&a, &FiniteMeasure::dirac(4u8)).unwrap_err();
        assert_eq!(err.to_string(), "support point 4 has an empty fiber in the relation");
    }

    proptest! {
        #[test]
        fn marginal_and_concentration(
            pairs in proptest::collection::btree_set((0u8..6, 0u8..6), 1..20),
            weights in proptest::collection::vec(1i64..9, 6),
        ) {
            let xs: BTreeSet<u8> = pairs.iter().map(|p| p.0).collect();
            let mu = FiniteMeasure::normalized(xs.iter().map(|&x| (x, rat(weights[x as usize], 1)))).unwrap();
            let nu = lubin_lift(&pairs, &mu).unwrap();
            prop_assert_eq!(nu.marginal_first(), mu);
            prop_assert!(nu.is_concentrated(|p| pairs.contains(p)));
        }
    }
}
