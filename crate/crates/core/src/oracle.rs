//! Brute-force reference computations.
//!
//! Nothing here uses [`Spectrum`](crate::spectrum::Spectrum) or the catalog
//! formulas: pair sums are a double loop, harmonic dimensions come from exact
//! row reduction, and Clifford counts carry five spectral facts through the
//! induction by hand. [`verify_all`] compares them against the engine.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;

/// A plain list of values with multiplicities; no completeness semantics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruncatedList {
    pub entries: Vec<(Rational, u64)>,
    pub cap: Option<Rational>,
}

/// Every pair sum up to `t`, with multiplicities multiplied and aggregated.
pub fn brute_force_pairs(l1: &TruncatedList, l2: &TruncatedList, t: &Rational) -> Vec<(Rational, u64)> {
    let mut sums: BTreeMap<Rational, u64> = BTreeMap::new();
    for (a, ma) in &l1.entries {
        for (b, mb) in &l2.entries {
            let s = a + b;
            if s <= *t {
                *sums.entry(s).or_insert(0) += ma * mb;
            }
        }
    }
    sums.into_iter().collect()
}

/// Exponent vectors of all monomials of degree `k` in `vars` variables.
fn monomials(vars: usize, k: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in monomials(vars - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Rank of sparse rational vectors by incremental elimination.
fn rank(vectors: Vec<BTreeMap<usize, Rational>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
    for mut v in vectors {
        while let Some((&col, coef)) = v.iter().next() {
            let Some(pivot) = pivots.get(&col) else {
                let lead = coef.clone();
                for x in v.values_mut() {
                    *x /= &lead;
                }
                pivots.insert(col, v);
                break;
            };
            let factor = coef.clone();
            for (c, x) in pivot {
                let entry = v.entry(*c).or_insert_with(Rational::zero);
                *entry -= &factor * x;
                if entry.is_zero() {
                    v.remove(c);
                }
            }
        }
    }
    pivots.len()
}

/// Dimension of homogeneous degree-`k` harmonic polynomials in `m + 1`
/// variables: the kernel of the Laplacian from degree `k` to degree `k − 2`.
pub fn harmonic_multiplicity(m: u32, k: u32) -> u64 {
    let vars = m as usize + 1;
    let source = monomials(vars, k);
    if k < 2 {
        return source.len() as u64;
    }
    let target: BTreeMap<Vec<u32>, usize> = monomials(vars, k - 2).into_iter().zip(0..).collect();
    let images = source
        .iter()
        .map(|a| {
            let mut image = BTreeMap::new();
            for i in 0..vars {
                if a[i] >= 2 {
                    let mut b = a.clone();
                    b[i] -= 2;
                    let coef = Rational::from_integer((a[i] * (a[i] - 1)).into());
                    image.insert(target[&b], coef);
                }
            }
            image
        })
        .collect();
    (source.len() - rank(images)) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    Index,
    Nullity,
}

/// Index or nullity of a product of great spheres from the five spectral
/// facts of each intermediate product: the multiplicities of the Jacobi
/// values `−2n`, `−n`, `0` and the Laplace values `n`, `2n`.
pub fn clifford_direct_count(dims: &[u32], mode: CountMode) -> u64 {
    let (first, rest) = dims.split_first().expect("at least one factor");
    let (mut m2n, mut mn, mut z) = (0u64, 0u64, 0u64);
    let (mut d1, mut d2) = (*first as u64 + 1, 0u64);
    for &next in rest {
        let d = next as u64 + 1;
        // pairs landing on −ñ: (n, 0), (0, n'), (−2n, n'), (−n, 0)
        let new_mn = d1 + d + m2n * d + mn;
        // pairs landing on 0: (n, n'), (2n, 0), (−n, n'), (0, 0)
        let new_z = d1 * d + d2 + mn * d + z;
        m2n += 1;
        mn = new_mn;
        z = new_z;
        d2 += d1 * d;
        d1 += d;
    }
    match mode {
        CountMode::Index => m2n + mn,
        CountMode::Nullity => z,
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A random list of at most `max_entries` distinct rationals with a cap;
/// entries above the cap are dropped.
pub fn random_list(rng: &mut impl Rng, max_entries: usize) -> TruncatedList {
    let len = rng.gen_range(0..=max_entries);
    let mut values = BTreeMap::new();
    for _ in 0..len {
        let v = Rational::new(rng.gen_range(-40..=40).into(), rng.gen_range(1..=6).into());
        values.insert(v, rng.gen_range(1..=4u64));
    }
    let cap = match rng.gen_range(0..5) {
        0 => None,
        _ => Some(Rational::new(rng.gen_range(-20..=50).into(), rng.gen_range(1..=3).into())),
    };
    let entries = values
        .into_iter()
        .filter(|(v, _)| cap.as_ref().is_none_or(|c| v <= c))
        .collect();
    TruncatedList { entries, cap }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCheck {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases)", self.name, self.cases)?;
        for failure in &self.failures {
            write!(f, "\n    {failure}")?;
        }
        Ok(())
    }
}

fn to_spectrum(l: &TruncatedList) -> crate::spectrum::Spectrum {
    let bound = l.cap.clone().map_or(crate::rational::Bound::Infinite, crate::rational::Bound::Finite);
    crate::spectrum::Spectrum::new(l.entries.clone(), bound).expect("random lists respect their cap")
}

/// Engine Minkowski sum against the double loop on random lists.
pub fn check_minkowski(seed: u64, cases: usize, max_entries: usize) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let (l1, l2) = (random_list(&mut rng, max_entries), random_list(&mut rng, max_entries));
        let engine = to_spectrum(&l1).minkowski_sum(&to_spectrum(&l2));
        let t = match engine.bound() {
            crate::rational::Bound::Finite(b) => b.clone(),
            crate::rational::Bound::Infinite => l1
                .entries
                .iter()
                .chain(&l2.entries)
                .map(|(v, _)| v.abs())
                .fold(Rational::one(), |a, b| a + b),
        };
        let expected = brute_force_pairs(&l1, &l2, &t);
        if engine.entries() != expected.as_slice() {
            failures.push(format!("case {case}: {l1:?} ⊕ {l2:?}"));
        }
    }
    OracleCheck {
        name: "minkowski_sum vs brute_force_pairs".into(),
        cases,
        failures,
    }
}

/// Harmonic dimensions by row reduction against the binomial formula and
/// the sphere catalog.
pub fn check_harmonics(max_m: u32, max_k: u32) -> OracleCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for m in 1..=max_m {
        for k in 0..=max_k {
            cases += 1;
            let oracle = harmonic_multiplicity(m, k);
            let (m64, k64) = (m as u64, k as u64);
            let formula = binomial(m64 + k64, k64) - if k >= 2 { binomial(m64 + k64 - 2, k64 - 2) } else { 0 };
            let catalog = crate::catalog::harmonic_dimension(m, k);
            if oracle != formula || oracle != catalog {
                failures.push(format!("m={m} k={k}: oracle {oracle}, binomial {formula}, catalog {catalog}"));
            }
        }
    }
    OracleCheck {
        name: "harmonic_multiplicity vs binomial formula".into(),
        cases,
        failures,
    }
}

/// All sphere-dimension lists of length `k` with entries in `1..=max_dim`.
pub fn dimension_lists(k: usize, max_dim: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=max_dim).map(move |d| {
                    let mut next = prefix.clone();
                    next.push(d);
                    next
                })
            })
            .collect();
    }
    out
}

/// Direct Clifford counts against closed forms and the spectral engine.
pub fn check_clifford(max_k: usize, max_dim: u32) -> OracleCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for k in 2..=max_k {
        for dims in dimension_lists(k, max_dim) {
            cases += 1;
            let direct = (
                clifford_direct_count(&dims, CountMode::Index),
                clifford_direct_count(&dims, CountMode::Nullity),
            );
            let closed = crate::analyzer::clifford_closed_form(&dims).expect("valid dims");
            let spectral = crate::composer::ProductExpression::clifford(&dims)
                .and_then(|e| crate::composer::product_descriptor(&e, &Rational::zero()))
                .map(|d| (d.known_index, d.known_nullity));
            let agree = direct == (closed.index, closed.nullity)
                && spectral.as_ref().ok() == Some(&(Some(direct.0), Some(direct.1)));
            if !agree {
                failures.push(format!("{dims:?}: direct {direct:?}, closed {closed:?}, spectral {spectral:?}"));
            }
        }
    }
    OracleCheck {
        name: "clifford_direct_count vs closed form and engine".into(),
        cases,
        failures,
    }
}

/// The oracle suite at desk scale.
pub fn verify_all(seed: u64) -> Vec<OracleCheck> {
    vec![
        check_minkowski(seed, 100, 30),
        check_harmonics(6, 8),
        check_clifford(4, 3),
    ]
}
