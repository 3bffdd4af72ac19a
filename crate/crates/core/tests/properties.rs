use minprod::analyzer;
use minprod::catalog::{sphere, Builtin, Demand, SValue};
use minprod::composer::{self, ProductExpression};
use minprod::oracle::{brute_force_pairs, harmonic_multiplicity, TruncatedList};
use minprod::rational::{int, Bound, Rational};
use minprod::{load_descriptor, save_descriptor, Spectrum};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn spectrum() -> impl Strategy<Value = Spectrum> {
    (
        prop::collection::vec((rational(), 1u64..=3), 0..12),
        prop::option::weighted(0.8, rational()),
    )
        .prop_map(|(entries, cap)| {
            let bound = cap.clone().map_or(Bound::Infinite, Bound::Finite);
            let kept = entries.into_iter().filter(|(v, _)| cap.as_ref().is_none_or(|c| v <= c));
            Spectrum::new(kept, bound).unwrap()
        })
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Restricts a spectrum to values at most `t`, keeping `t` as the bound.
fn upto(s: &Spectrum, t: &Bound) -> Vec<(Rational, u64)> {
    s.truncate(t).entries().to_vec()
}

fn list(s: &Spectrum) -> TruncatedList {
    TruncatedList {
        entries: s.entries().to_vec(),
        cap: s.bound().finite().cloned(),
    }
}

proptest! {
    #[test]
    fn minkowski_commutes(a in spectrum(), b in spectrum()) {
        prop_assert_eq!(a.minkowski_sum(&b), b.minkowski_sum(&a));
    }

    #[test]
    fn minkowski_associates_on_common_range(a in spectrum(), b in spectrum(), c in spectrum()) {
        let left = a.minkowski_sum(&b).minkowski_sum(&c);
        let right = a.minkowski_sum(&b.minkowski_sum(&c));
        let common = left.bound().clone().min(right.bound().clone());
        prop_assert_eq!(upto(&left, &common), upto(&right, &common));
    }

    #[test]
    fn merge_commutes_and_associates(a in spectrum(), b in spectrum(), c in spectrum()) {
        prop_assert_eq!(a.merge(&b), b.merge(&a));
        prop_assert_eq!(a.merge(&b).merge(&c), a.merge(&b.merge(&c)));
    }

    #[test]
    fn scale_distributes(a in spectrum(), b in spectrum(), c in positive()) {
        prop_assert_eq!(a.merge(&b).scale(&c).unwrap(), a.scale(&c).unwrap().merge(&b.scale(&c).unwrap()));
        let sum = a.minkowski_sum(&b).scale(&c).unwrap();
        let parts = a.scale(&c).unwrap().minkowski_sum(&b.scale(&c).unwrap());
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn scale_inverse_is_identity(a in spectrum(), c in positive()) {
        let back = a.scale(&c).unwrap().scale(&(Rational::one() / &c)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn strict_plus_equal_is_non_strict(a in spectrum(), t in rational()) {
        prop_assume!(a.bound().covers(&t));
        let strict = a.count_below(&t, true).unwrap();
        let at = a.multiplicity_at(&t).unwrap();
        prop_assert_eq!(strict + at, a.count_below(&t, false).unwrap());
    }

    #[test]
    fn minkowski_counts_match_double_loop(a in spectrum(), b in spectrum(), t in rational()) {
        let sum = a.minkowski_sum(&b);
        prop_assume!(sum.bound().covers(&t));
        let pairs = brute_force_pairs(&list(&a), &list(&b), &t);
        let brute: u64 = pairs.iter().filter(|(v, _)| *v <= t).map(|(_, m)| m).sum();
        prop_assert_eq!(sum.count_below(&t, false).unwrap(), brute);
    }

    #[test]
    fn product_mu1_is_at_most_minus_two_n(dims in prop::collection::vec((1u32..=3, 0u32..=2), 2..=3)) {
        let leaves = dims.iter().map(|&(dim, codim)| ProductExpression::leaf(Builtin::Sphere { dim, codim })).collect();
        let expr = ProductExpression::product(leaves).unwrap();
        let d = composer::product_descriptor(&expr, &Rational::zero()).unwrap();
        let n = int(d.dim as i64);
        let mu1 = d.jacobi.full().unwrap().min_value().unwrap().clone();
        prop_assert!(mu1 <= int(-2) * n);
        let (d1, d2) = composer::factor_pair(&expr, &Rational::zero()).unwrap().unwrap();
        prop_assert_eq!(analyzer::mu1_rule(&d1, &d2).unwrap(), mu1);
        let b = analyzer::counting_breakdown(&d1, &d2).unwrap();
        prop_assert_eq!(Some(b.index()), d.known_index);
        prop_assert_eq!(Some(b.nullity()), d.known_nullity);
    }

    #[test]
    fn fold_order_does_not_change_invariants(a in 1u32..=3, b in 1u32..=3, c in 1u32..=3) {
        let leaf = |dim| ProductExpression::leaf(Builtin::Sphere { dim, codim: 0 });
        let flat = ProductExpression::product(vec![leaf(a), leaf(b), leaf(c)]).unwrap();
        let right = ProductExpression::product(vec![
            leaf(a),
            ProductExpression::product(vec![leaf(b), leaf(c)]).unwrap(),
        ]).unwrap();
        let zero = Rational::zero();
        let x = composer::product_descriptor(&flat, &zero).unwrap();
        let y = composer::product_descriptor(&right, &zero).unwrap();
        prop_assert_eq!((x.dim, x.codim), (y.dim, y.codim));
        prop_assert_eq!(&x.lambda1, &y.lambda1);
        prop_assert_eq!(&x.s, &y.s);
        prop_assert_eq!((x.known_index, x.known_nullity), (y.known_index, y.known_nullity));
        prop_assert_eq!(x.jacobi, y.jacobi);
    }

    #[test]
    fn coordinate_functions_in_product_laplace(m1 in 1u32..=3, p1 in 0u32..=2, m2 in 1u32..=3) {
        let d1 = sphere(m1, p1, &int(12)).unwrap();
        let d2 = sphere(m2, 0, &int(12)).unwrap();
        let n = int((m1 + m2) as i64);
        let lap = composer::product_laplace(&d1, &d2, &n).unwrap();
        // a sphere of positive codimension is not full
        let full = |d: &minprod::ManifoldDescriptor| d.flags.full == Some(true);
        if full(&d1) && full(&d2) {
            let need = (m1 + d1.codim + 1 + m2 + d2.codim + 1) as u64;
            prop_assert!(lap.multiplicity_at(&n).unwrap() >= need);
        }
    }

    #[test]
    fn average_s_is_flattening_invariant(dims in prop::collection::vec(1u32..=4, 2..=4), veronese in any::<bool>()) {
        let mut leaves: Vec<_> = dims.iter().map(|&d| ProductExpression::leaf(Builtin::Sphere { dim: d, codim: 0 })).collect();
        if veronese {
            leaves.push(ProductExpression::leaf(Builtin::Veronese));
        }
        let k = leaves.len();
        let flat = ProductExpression::product(leaves.clone()).unwrap();
        let mut tail = leaves.split_off(1);
        let rest = if tail.len() == 1 { tail.pop().unwrap() } else { ProductExpression::product(tail).unwrap() };
        let nested = ProductExpression::product(vec![leaves.pop().unwrap(), rest]).unwrap();
        let a = analyzer::average_s_identity(&flat).unwrap();
        prop_assert_eq!(&a.value, &composer::second_fundamental(&nested).unwrap());
        let n = int(flat.dim() as i64);
        prop_assert_eq!(a.lower_bound, int(k as i64 - 1) * n);
        prop_assert_eq!(a.equality, Some(!veronese));
        prop_assert!(matches!(a.value, SValue::Constant(_)));
    }
}

#[test]
fn sphere_multiplicities_match_harmonic_oracle() {
    for m in 1..=6u32 {
        let top = 6 * (6 + m - 1);
        let s = sphere(m, 0, &int(top as i64)).unwrap();
        let lap = s.laplace.full().unwrap();
        for k in 0..=6u32 {
            let v = int((k * (k + m - 1)) as i64);
            assert_eq!(lap.multiplicity_at(&v).unwrap(), harmonic_multiplicity(m, k), "m={m} k={k}");
        }
    }
}

#[test]
fn sphere_jacobi_matches_recorded_counts() {
    for m in 1..=5u32 {
        for p in 0..=3u32 {
            let s = sphere(m, p, &int(m as i64)).unwrap();
            let jac = s.jacobi.full().unwrap();
            let zero = Rational::zero();
            assert_eq!(jac.count_below(&zero, true).unwrap(), p as u64);
            assert_eq!(jac.multiplicity_at(&zero).unwrap(), ((m + 1) * p) as u64);
            assert_eq!(s.known_index, Some(p as u64));
            assert_eq!(s.known_nullity, Some(((m + 1) * p) as u64));
        }
    }
}

#[test]
fn every_builtin_round_trips_through_its_file() {
    for b in Builtin::listing() {
        let d = b.describe(&Demand::uniform(&int(6))).unwrap();
        let back = load_descriptor(&save_descriptor(&d).unwrap()).unwrap();
        assert!(back.same_facts(&d), "{b}");
    }
}

#[test]
fn killing_identity() {
    for dims in minprod::oracle::dimension_lists(3, 5).into_iter().chain(minprod::oracle::dimension_lists(2, 5)) {
        let c = analyzer::clifford_closed_form(&dims).unwrap();
        let pairs: u64 = (0..dims.len())
            .flat_map(|i| (i + 1..dims.len()).map(move |j| (i, j)))
            .map(|(i, j)| (dims[i] as u64 + 1) * (dims[j] as u64 + 1))
            .sum();
        assert_eq!(c.killing_dim, pairs, "{dims:?}");
    }
}
