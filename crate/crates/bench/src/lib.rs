//! Benchmark fixtures shared by the criterion targets.

use viscowave::acoustics::Material;
use viscowave::matfun::{CrfRepr, Kernel};

/// A small set of representative materials for timing sweeps.
pub fn bench_materials() -> Vec<(&'static str, Material)> {
    vec![
        ("newtonian", Material::new(CrfRepr::newtonian(1.0).unwrap(), 1.0).unwrap()),
        (
            "exp-kernel",
            Material::new(
                CrfRepr::new(0.5, 0.1, Kernel::exp_sum(vec![(1.0, 1.0), (2.0, 10.0)]).unwrap()).unwrap(),
                1.0,
            )
            .unwrap(),
        ),
        (
            "power-0.5",
            Material::new(CrfRepr::new(1.0, 0.0, Kernel::power(1.0, 0.5).unwrap()).unwrap(), 1.0).unwrap(),
        ),
        (
            "table",
            Material::new(
                CrfRepr::new(1.0, 0.0, Kernel::table(vec![(0.0, 2.0), (0.5, 1.0), (2.0, 0.0)]).unwrap()).unwrap(),
                1.0,
            )
            .unwrap(),
        ),
    ]
}
