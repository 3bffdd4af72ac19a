//! Workloads shared by the criterion benchmarks.

use minprod::catalog::sphere;
use minprod::composer::ProductExpression;
use minprod::{int, Spectrum};

/// Laplace spectrum of the round `S^m` through `bound`.
pub fn sphere_laplace(m: u32, bound: i64) -> Spectrum {
    sphere(m, 0, &int(bound))
        .expect("spheres of positive dimension exist")
        .laplace
        .full()
        .expect("sphere spectra are always available")
        .clone()
}

/// The Clifford product of great spheres of the given dimensions.
pub fn clifford(dims: &[u32]) -> ProductExpression {
    ProductExpression::clifford(dims).expect("at least two positive dimensions")
}
