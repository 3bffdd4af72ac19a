//! Truncated eigenvalue multisets with completeness bounds.
//!
//! A [`Spectrum`] lists distinct eigenvalues with multiplicities. Its
//! [`Bound`] is a certificate: the operator has *exactly* these eigenvalues
//! in `(-inf, bound]` and nothing is claimed above it. All operations
//! propagate the certificate so that downstream counts stay exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{Bound, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    entries: Vec<(Rational, u64)>,
    bound: Bound,
}

impl Spectrum {
    /// Sorts, merges duplicate values and checks every value against `bound`.
    pub fn new(entries: impl IntoIterator<Item = (Rational, u64)>, bound: Bound) -> Result<Self> {
        let mut acc: BTreeMap<Rational, u64> = BTreeMap::new();
        for (value, mult) in entries {
            if mult == 0 {
                return Err(Error::NonPositiveMultiplicity { value });
            }
            if !bound.covers(&value) {
                return Err(Error::EntryAboveBound { value, bound });
            }
            *acc.entry(value).or_insert(0) += mult;
        }
        Ok(Spectrum {
            entries: acc.into_iter().collect(),
            bound,
        })
    }

    /// Spectrum of an operator on a rank-0 bundle: no eigenvalues at all.
    pub fn empty() -> Self {
        Spectrum {
            entries: Vec::new(),
            bound: Bound::Infinite,
        }
    }

    /// Entries already known to be sorted, distinct and within `bound`.
    fn from_sorted(entries: Vec<(Rational, u64)>, bound: Bound) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(v, m)| *m > 0 && bound.covers(v)));
        Spectrum { entries, bound }
    }

    fn from_map(map: BTreeMap<Rational, u64>, bound: Bound) -> Self {
        Spectrum::from_sorted(map.into_iter().collect(), bound)
    }

    pub fn entries(&self) -> &[(Rational, u64)] {
        &self.entries
    }

    pub fn bound(&self) -> &Bound {
        &self.bound
    }

    /// True for the spectrum of a rank-0 bundle.
    pub fn is_empty_bundle(&self) -> bool {
        self.entries.is_empty() && self.bound.is_infinite()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Least eigenvalue, when it lies below the bound.
    pub fn min_value(&self) -> Option<&Rational> {
        self.entries.first().map(|(v, _)| v)
    }

    /// Certified lower bound on every eigenvalue: the least entry, or the
    /// completeness bound itself when nothing lies below it.
    fn floor(&self) -> Bound {
        match self.entries.first() {
            Some((v, _)) => Bound::Finite(v.clone()),
            None => self.bound.clone(),
        }
    }

    /// Total multiplicity of the listed entries.
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Multiplies every eigenvalue and the bound by `c > 0`.
    pub fn scale(&self, c: &Rational) -> Result<Spectrum> {
        if !c.is_positive() {
            return Err(Error::NonPositiveScale(c.clone()));
        }
        let entries = self.entries.iter().map(|(v, m)| (v * c, *m)).collect();
        Ok(Spectrum::from_sorted(entries, self.bound.scale(c)))
    }

    /// Adds `c` to every eigenvalue and to the bound.
    pub fn shift(&self, c: &Rational) -> Spectrum {
        let entries = self.entries.iter().map(|(v, m)| (v + c, *m)).collect();
        Spectrum::from_sorted(entries, self.bound.shift(c))
    }

    /// Drops entries above `bound` and lowers the certificate to it.
    /// A larger `bound` leaves the spectrum unchanged.
    pub fn truncate(&self, bound: &Bound) -> Spectrum {
        if *bound >= self.bound {
            return self.clone();
        }
        let entries = self
            .entries
            .iter()
            .take_while(|(v, _)| bound.covers(v))
            .cloned()
            .collect();
        Spectrum::from_sorted(entries, bound.clone())
    }

    /// Spectrum of a block-diagonal operator: multiset union, certified up to
    /// the smaller bound.
    pub fn merge(&self, other: &Spectrum) -> Spectrum {
        let bound = self.bound.clone().min(other.bound.clone());
        let mut acc: BTreeMap<Rational, u64> = BTreeMap::new();
        for (v, m) in self.entries.iter().chain(&other.entries) {
            if bound.covers(v) {
                *acc.entry(v.clone()).or_insert(0) += m;
            }
        }
        Spectrum::from_map(acc, bound)
    }

    /// Spectrum of `A ⊗ 1 + 1 ⊗ B`: all pairwise sums, multiplicities
    /// multiplied.
    ///
    /// A sum at most `min(b₁ + min₂, b₂ + min₁)` can only come from addends
    /// that lie under their own bounds, so that value is the certified bound
    /// of the result.
    pub fn minkowski_sum(&self, other: &Spectrum) -> Spectrum {
        if self.is_empty_bundle() || other.is_empty_bundle() {
            return Spectrum::empty();
        }
        let bound = self
            .bound
            .plus(&other.floor())
            .min(other.bound.plus(&self.floor()));
        let mut acc: BTreeMap<Rational, u64> = BTreeMap::new();
        for (v1, m1) in &self.entries {
            for (v2, m2) in &other.entries {
                let sum = v1 + v2;
                if !bound.covers(&sum) {
                    // entries are sorted, later v2 only increase the sum
                    break;
                }
                *acc.entry(sum).or_insert(0) += m1 * m2;
            }
        }
        Spectrum::from_map(acc, bound)
    }

    fn certify(&self, t: &Rational, context: &str) -> Result<()> {
        if self.bound.covers(t) {
            Ok(())
        } else {
            Err(Error::bound_exceeded(context, t, &self.bound))
        }
    }

    /// Multiplicity-weighted count of eigenvalues `< t` (`strict`) or `<= t`.
    pub fn count_below(&self, t: &Rational, strict: bool) -> Result<u64> {
        self.certify(t, "count below")?;
        Ok(self
            .entries
            .iter()
            .take_while(|(v, _)| if strict { v < t } else { v <= t })
            .map(|(_, m)| m)
            .sum())
    }

    /// Multiplicity of the exact value `t` (0 when absent).
    pub fn multiplicity_at(&self, t: &Rational) -> Result<u64> {
        self.certify(t, "multiplicity")?;
        Ok(self
            .entries
            .binary_search_by(|(v, _)| v.cmp(t))
            .map(|i| self.entries[i].1)
            .unwrap_or(0))
    }

    /// Least strictly positive eigenvalue, if one lies under the bound.
    pub fn first_positive(&self) -> Option<&(Rational, u64)> {
        self.entries.iter().find(|(v, _)| v.is_positive())
    }

    /// Multiplicity of zero, for callers that already checked the bound.
    pub fn zero_multiplicity(&self) -> Option<u64> {
        self.multiplicity_at(&Rational::zero()).ok()
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}^{m}")?;
        }
        write!(f, "; bound {}}}", self.bound)
    }
}
