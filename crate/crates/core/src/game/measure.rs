//! Finite-support probability measures with exact weights.
//!
//! A measure is kept in normal form: support sorted by the point order,
//! points distinct, every weight positive, weights summing to one. Two
//! measures are equal exactly when their normal forms coincide, which makes
//! derived `Eq`/`Ord` meaningful.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("measure has no support")]
    Empty,
    #[error("nonpositive weight {0}")]
    NonPositiveWeight(Rational),
    #[error("weights sum to {0}, not 1")]
    NotNormalized(Rational),
    #[error("support is not strictly increasing")]
    Unsorted,
    #[error("support and weights differ in length")]
    Ragged,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMeasure<P> {
    support: Vec<P>,
    weights: Vec<Rational>,
}

impl<P: Ord + Clone> FiniteMeasure<P> {
    /// Validates an explicit normal form without reordering anything.
    pub fn try_new(support: Vec<P>, weights: Vec<Rational>) -> Result<Self, MeasureError> {
        if support.len() != weights.len() {
            return Err(MeasureError::Ragged);
        }
        if support.is_empty() {
            return Err(MeasureError::Empty);
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MeasureError::Unsorted);
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(MeasureError::NonPositiveWeight(w.clone()));
        }
        let total: Rational = weights.iter().fold(Rational::zero(), |a, w| a + w);
        if !total.is_one() {
            return Err(MeasureError::NotNormalized(total));
        }
        Ok(Self { support, weights })
    }

    /// Normalizes arbitrary `(point, weight)` pairs: duplicates merge by
    /// addition and zero-weight points are dropped. Negative weights and a
    /// total other than one are rejected.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (P, Rational)>,
    {
        let mut merged: BTreeMap<P, Rational> = BTreeMap::new();
        for (p, w) in pairs {
            if w.is_negative() {
                return Err(MeasureError::NonPositiveWeight(w));
            }
            *merged.entry(p).or_insert_with(Rational::zero) += w;
        }
        merged.retain(|_, w| !w.is_zero());
        let (support, weights) = merged.into_iter().unzip();
        Self::try_new(support, weights)
    }

    /// Like [`Self::from_pairs`] but divides by the total weight first.
    pub fn normalized<I>(pairs: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (P, Rational)>,
    {
        let pairs: Vec<(P, Rational)> = pairs.into_iter().collect();
        let total = pairs.iter().fold(Rational::zero(), |a, (_, w)| a + w);
        if total.is_zero() {
            return Err(MeasureError::Empty);
        }
        Self::from_pairs(pairs.into_iter().map(|(p, w)| (p, w / &total)))
    }

    pub fn dirac(point: P) -> Self {
        Self {
            support: vec![point],
            weights: vec![Rational::one()],
        }
    }

    /// Equal weight on each distinct point.
    pub fn uniform<I: IntoIterator<Item = P>>(points: I) -> Result<Self, MeasureError> {
        let points: Vec<P> = points.into_iter().collect();
        let n = points.len() as i64;
        if n == 0 {
            return Err(MeasureError::Empty);
        }
        let w = Rational::new(1.into(), n.into());
        Self::from_pairs(points.into_iter().map(|p| (p, w.clone())))
    }

    pub fn support(&self) -> &[P] {
        &self.support
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, &Rational)> {
        self.support.iter().zip(&self.weights)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weight_of(&self, point: &P) -> Rational {
        match self.support.binary_search(point) {
            Ok(i) => self.weights[i].clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Image measure under `f`; colliding images add their weights.
    pub fn pushforward<Q: Ord + Clone>(&self, mut f: impl FnMut(&P) -> Q) -> FiniteMeasure<Q> {
        let mut merged: BTreeMap<Q, Rational> = BTreeMap::new();
        for (p, w) in self.iter() {
            *merged.entry(f(p)).or_insert_with(Rational::zero) += w;
        }
        let (support, weights) = merged.into_iter().unzip();
        FiniteMeasure { support, weights }
    }

    /// `μ(B) = 1`, which for finite support means `supp μ ⊆ B`.
    pub fn is_concentrated(&self, contains: impl Fn(&P) -> bool) -> bool {
        self.support.iter().all(contains)
    }

    /// Expectation of `f`.
    pub fn expect(&self, mut f: impl FnMut(&P) -> Rational) -> Rational {
        self.iter().fold(Rational::zero(), |acc, (p, w)| acc + w * f(p))
    }

    /// `α·self + (1 − α)·other` for `0 <= α <= 1`.
    pub fn mix(&self, alpha: &Rational, other: &Self) -> Self {
        let beta = Rational::one() - alpha;
        let pairs = self
            .iter()
            .map(|(p, w)| (p.clone(), w * alpha))
            .chain(other.iter().map(|(p, w)| (p.clone(), w * &beta)));
        Self::from_pairs(pairs).expect("convex combination of measures")
    }
}

impl<A: Ord + Clone, B: Ord + Clone> FiniteMeasure<(A, B)> {
    pub fn marginal_first(&self) -> FiniteMeasure<A> {
        self.pushforward(|(a, _)| a.clone())
    }

    pub fn marginal_second(&self) -> FiniteMeasure<B> {
        self.pushforward(|(_, b)| b.clone())
    }
}

/// Lexicographic on the sorted `(point, weight)` list.
impl<P: Ord> Ord for FiniteMeasure<P> {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.support.iter().zip(&self.weights);
        let rhs = other.support.iter().zip(&other.weights);
        lhs.cmp(rhs)
    }
}

impl<P: Ord> PartialOrd for FiniteMeasure<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<P: fmt::Display> fmt::Display for FiniteMeasure<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, w)) in self.support.iter().zip(&self.weights).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {}", crate::exact::rational::short_string(w))?;
        }
        write!(f, "}}")
    }
}
