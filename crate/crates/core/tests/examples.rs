use minprod::analyzer;
use minprod::catalog::{self, sphere, Builtin, Demand, NamedSurface, SValue, SpectralData};
use minprod::composer::{self, ProductExpression};
use minprod::oracle::{brute_force_pairs, TruncatedList};
use minprod::rational::{frac, int, Bound, Rational};
use minprod::{load_descriptor, save_descriptor, Error, Spectrum};
use num_traits::Zero;

fn leaf(b: Builtin) -> ProductExpression {
    ProductExpression::leaf(b)
}

fn s(dim: u32) -> ProductExpression {
    leaf(Builtin::Sphere { dim, codim: 0 })
}

fn plain(spec: &Spectrum, scale: &Rational, shift: &Rational) -> TruncatedList {
    TruncatedList {
        entries: spec.entries().iter().map(|(v, m)| (v * scale + shift, *m)).collect(),
        cap: None,
    }
}

/// Brute-force Jacobi spectrum of a binary product through `t`, from factor
/// spectra certified well past what the blocks need.
fn jacobi_by_pairs(d1: &minprod::ManifoldDescriptor, d2: &minprod::ManifoldDescriptor, t: &Rational) -> Vec<(Rational, u64)> {
    let n = int((d1.dim + d2.dim) as i64);
    let r1 = &n / int(d1.dim as i64);
    let r2 = &n / int(d2.dim as i64);
    let zero = Rational::zero();
    let l1 = plain(d1.laplace.full().unwrap(), &r1, &zero);
    let l2 = plain(d2.laplace.full().unwrap(), &r2, &zero);
    let j1 = plain(d1.jacobi.full().unwrap(), &r1, &zero);
    let j2 = plain(d2.jacobi.full().unwrap(), &r2, &zero);
    let shifted = plain(d1.laplace.full().unwrap(), &r1, &(int(-2) * &n));
    let mut all = std::collections::BTreeMap::new();
    for part in [
        brute_force_pairs(&shifted, &l2, t),
        brute_force_pairs(&j1, &l2, t),
        brute_force_pairs(&j2, &l1, t),
    ] {
        for (v, m) in part {
            *all.entry(v).or_insert(0) += m;
        }
    }
    all.into_iter().collect()
}

#[test]
fn sphere_descriptors() {
    let s3 = sphere(3, 0, &int(8)).unwrap();
    let lap = s3.laplace.full().unwrap();
    assert_eq!(lap.entries(), &[(int(0), 1), (int(3), 4), (int(8), 9)]);
    let s2 = sphere(2, 2, &int(2)).unwrap();
    assert_eq!((s2.known_index, s2.known_nullity), (Some(2), Some(6)));
    assert_eq!(s3.jacobi.full().unwrap(), &Spectrum::empty());
}

#[test]
fn facts_only_families() {
    let iso = catalog::isoparametric_hypersurface(4, 2).unwrap();
    assert_eq!(iso.s, SValue::Constant(int(4)));
    let geodesic = catalog::isoparametric_hypersurface(3, 1).unwrap();
    assert_eq!(geodesic.s, SValue::Constant(int(0)));
    assert_eq!(catalog::isoparametric_hypersurface(4, 5).unwrap_err(), Error::InvalidG(5));

    for (k, l1, by_first) in [(3, 4, false), (1, 3, true), (2, 4, true)] {
        let d = catalog::otfkm_focal(k).unwrap();
        assert_eq!(d.lambda1, Some(int(l1)));
        assert_eq!(d.dim, k + 2);
        assert_eq!(d.flags.by_first_eigenfunctions, Some(by_first));
    }
    let lawson = catalog::named_surface(NamedSurface::Lawson { m: 2, k: 3 }).unwrap();
    assert_eq!((lawson.dim, lawson.codim, lawson.lambda1), (2, 1, Some(int(2))));
    let klein = catalog::named_surface(NamedSurface::BipolarTau31).unwrap();
    assert_eq!(klein.flags.orientable, Some(false));
}

#[test]
fn veronese_spectrum() {
    let v = catalog::veronese(&int(7)).unwrap();
    assert_eq!(v.s, SValue::Constant(frac(4, 3)));
    let lap = v.laplace.full().unwrap();
    assert_eq!(lap.multiplicity_at(&int(2)).unwrap(), 5);
    assert_eq!(lap.multiplicity_at(&frac(20, 3)).unwrap(), 9);
    assert!(matches!(v.jacobi, SpectralData::Unavailable(_)));
}

#[test]
fn flat_torus_first_eigenvalues() {
    for k in 2..=5u32 {
        let t = catalog::flat_torus(k, &int(2)).unwrap();
        let l1 = t.lambda1.clone().unwrap();
        assert!(l1 < int(2));
        assert_eq!(t.laplace.full().unwrap().multiplicity_at(&int(0)).unwrap(), 1);
    }
    let t = catalog::flat_torus(2, &int(1)).unwrap();
    assert_eq!(t.lambda1, Some(frac(1, 2)));
    assert!(t.laplace.full().unwrap().multiplicity_at(&frac(1, 2)).unwrap() >= 2);
}

#[test]
fn descriptor_files() {
    let s2 = sphere(2, 0, &int(6)).unwrap();
    let back = load_descriptor(&save_descriptor(&s2).unwrap()).unwrap();
    assert!(back.same_facts(&s2));
    let bad = "name = \"x\"\ndim = 2\ncodim = 1\nlambda1 = [5, 1]\n";
    assert!(matches!(load_descriptor(bad), Err(Error::InvariantViolation(_))));
    let facts = "name = \"x\"\ndim = 2\ncodim = 1\nlambda1 = [2, 1]\n";
    assert!(matches!(load_descriptor(facts).unwrap().jacobi, SpectralData::Unavailable(_)));
}

#[test]
fn product_laplace_examples() {
    let c = sphere(1, 0, &int(4)).unwrap();
    let lap = composer::product_laplace(&c, &c, &int(4)).unwrap();
    assert_eq!(lap, Spectrum::new([(int(0), 1), (int(2), 4), (int(4), 4)], Bound::Finite(int(4))).unwrap());
    let s2 = sphere(2, 0, &int(6)).unwrap();
    let lap = composer::product_laplace(&c, &s2, &int(3)).unwrap();
    assert_eq!(lap.first_positive().unwrap().0, int(3));
    assert_eq!(lap.multiplicity_at(&int(0)).unwrap(), 1);
}

#[test]
fn product_jacobi_examples() {
    let c = sphere(1, 0, &int(4)).unwrap();
    let jac = composer::product_jacobi(&c, &c, &int(0)).unwrap();
    assert_eq!(jac, Spectrum::new([(int(-4), 1), (int(-2), 4), (int(0), 4)], Bound::Finite(int(0))).unwrap());

    // S² ⊂ S⁴ with a great circle
    let s2 = sphere(2, 2, &int(20)).unwrap();
    let c = sphere(1, 0, &int(20)).unwrap();
    let zero = Rational::zero();
    let jac = composer::product_jacobi(&s2, &c, &zero).unwrap();
    assert_eq!(jac.entries(), jacobi_by_pairs(&s2, &c, &zero).as_slice());
    // n of the product, p of the geodesic factor
    let (n, p) = (3, 2);
    assert_eq!(jac.count_below(&zero, true).unwrap(), 2 + n + p + 1);
    assert_eq!(jac.min_value().unwrap(), &int(-6));
}

#[test]
fn deeper_jacobi_agrees_with_pair_enumeration() {
    let t = int(7);
    for (a, b) in [((1, 1), (2, 0)), ((2, 0), (3, 2)), ((3, 1), (1, 1))] {
        let d1 = sphere(a.0, a.1, &int(60)).unwrap();
        let d2 = sphere(b.0, b.1, &int(60)).unwrap();
        let jac = composer::product_jacobi(&d1, &d2, &t).unwrap();
        assert_eq!(jac.entries(), jacobi_by_pairs(&d1, &d2, &t).as_slice(), "{a:?} × {b:?}");
    }
}

#[test]
fn product_descriptor_examples() {
    let three = composer::product_descriptor(&ProductExpression::clifford(&[1, 1, 1]).unwrap(), &int(3)).unwrap();
    assert_eq!((three.dim, three.codim, three.lambda1.clone()), (3, 2, Some(int(3))));

    for m in 1..=4u32 {
        let expr = ProductExpression::product(vec![leaf(Builtin::OtfkmFocal { k: 3 }), s(m)]).unwrap();
        let d = composer::evaluate(&expr, &Demand::none()).unwrap();
        assert_eq!(d.lambda1, Some(frac(4 * (m as i64 + 5), 5)));
        assert_eq!(d.flags.by_first_eigenfunctions, Some(false));
    }

    let expr = ProductExpression::product(vec![leaf(Builtin::Named(NamedSurface::Lawson { m: 2, k: 1 })), s(3)]).unwrap();
    let d = composer::evaluate(&expr, &Demand::none()).unwrap();
    assert_eq!(d.flags.by_first_eigenfunctions, Some(true));
    assert_eq!(d.flags.flat_normal_bundle, Some(true));
    assert_eq!(d.codim, 2);
}

#[test]
fn curvature_examples() {
    let torus = composer::product_descriptor(&ProductExpression::clifford(&[1, 1]).unwrap(), &int(0)).unwrap();
    assert_eq!(torus.s, SValue::Constant(int(2)));
    assert_eq!(composer::scalar_curvature(&torus), Some(int(0)));
    for m in 1..=5 {
        let sp = sphere(m, 1, &int(m as i64)).unwrap();
        assert_eq!(composer::scalar_curvature(&sp), Some(int((m * (m - 1)) as i64)));
    }
    let expr = ProductExpression::product(vec![s(3), leaf(Builtin::Veronese)]).unwrap();
    assert_eq!(composer::second_fundamental(&expr).unwrap(), SValue::Constant(frac(25, 3)));
}

#[test]
fn analyzer_examples() {
    let c = analyzer::analyze(&ProductExpression::clifford(&[1, 1]).unwrap()).unwrap();
    assert_eq!((c.index.unwrap().value, c.nullity.unwrap().value), (5, 4));
    assert_eq!(c.mu1.unwrap().value, int(-4));
    assert_eq!(c.degenerate, Some(false));

    for (m, p) in [(2, 1), (3, 3)] {
        let r = analyzer::analyze(&leaf(Builtin::Sphere { dim: m, codim: p })).unwrap();
        assert_eq!(r.index.unwrap().value, p as u64);
        assert_eq!(r.nullity.unwrap().value, ((m + 1) * p) as u64);
    }

    // both factors totally geodesic: no contribution from the normal blocks
    let expr = ProductExpression::product(vec![leaf(Builtin::Sphere { dim: 2, codim: 1 }), s(3)]).unwrap();
    let (d1, d2) = composer::factor_pair(&expr, &int(0)).unwrap().unwrap();
    let b = analyzer::counting_breakdown(&d1, &d2).unwrap();
    assert_eq!((b.i1, b.ihat1), (0, 0));

    let expr = ProductExpression::clifford(&[1, 1, 1]).unwrap();
    let (d1, d2) = composer::factor_pair(&expr, &int(0)).unwrap().unwrap();
    assert_eq!(analyzer::mu1_rule(&d1, &d2).unwrap(), int(-6));
    let empty = sphere(2, 0, &int(2)).unwrap();
    assert_eq!(analyzer::mu1_rule(&empty, &empty).unwrap(), int(-8));
}

#[test]
fn breakdown_matches_spectrum() {
    for dims in [vec![1, 1], vec![2, 3], vec![1, 1, 1], vec![2, 1, 3], vec![1, 2, 1, 1]] {
        let expr = ProductExpression::clifford(&dims).unwrap();
        let d = composer::product_descriptor(&expr, &int(0)).unwrap();
        let (d1, d2) = composer::factor_pair(&expr, &int(0)).unwrap().unwrap();
        let b = analyzer::counting_breakdown(&d1, &d2).unwrap();
        assert_eq!(b.index(), analyzer::index(&d).unwrap());
        assert_eq!(b.nullity(), analyzer::nullity(&d).unwrap());
    }
    let expr = ProductExpression::product(vec![leaf(Builtin::Sphere { dim: 2, codim: 2 }), s(1)]).unwrap();
    let d = composer::product_descriptor(&expr, &int(0)).unwrap();
    let (d1, d2) = composer::factor_pair(&expr, &int(0)).unwrap().unwrap();
    let b = analyzer::counting_breakdown(&d1, &d2).unwrap();
    assert_eq!(b.index(), analyzer::index(&d).unwrap());
    assert_eq!(b.nullity(), analyzer::nullity(&d).unwrap());
}

#[test]
fn facts_only_product_reports_missing_jacobi() {
    let expr = ProductExpression::product(vec![leaf(Builtin::Veronese), s(3)]).unwrap();
    let d = composer::product_descriptor(&expr, &int(0)).unwrap();
    assert_eq!(
        analyzer::index(&d).unwrap_err(),
        Error::InsufficientData("Jacobi spectrum of veronese unavailable".into())
    );
    assert_eq!(d.lambda1, Some(int(5)));
}
