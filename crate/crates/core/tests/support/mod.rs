//! Shared corpus and independent oracles for the integration suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use viscowave::acoustics::Material;
use viscowave::duality::bf_to_crf;
use viscowave::matfun::{BernsteinRepr, CrfRepr, Kernel, StieltjesRepr};
use viscowave::measures::{Atom, DensityComponent, RadonMeasure, Support};

/// The bound-verification corpus: atoms, exponential and power kernels,
/// elastic, Newtonian and mixed materials at several densities.
pub fn material_corpus() -> Vec<(&'static str, Material)> {
    let mut corpus = Vec::new();
    let push = |v: &mut Vec<(&'static str, Material)>, name, j: CrfRepr, rho| {
        v.push((name, Material::new(j, rho).unwrap()));
    };

    push(&mut corpus, "elastic", CrfRepr::elastic(1.0).unwrap(), 1.0);
    push(&mut corpus, "elastic-heavy", CrfRepr::elastic(4.0).unwrap(), 2.5);
    push(&mut corpus, "newtonian", CrfRepr::newtonian(1.0).unwrap(), 1.0);
    push(&mut corpus, "newtonian-thin", CrfRepr::newtonian(0.2).unwrap(), 0.8);

    let atom_dual = bf_to_crf(
        &BernsteinRepr::new(0.0, 0.0, RadonMeasure::single_atom(1.0, 1.0).unwrap()).unwrap(),
    )
    .unwrap();
    push(&mut corpus, "atom-dual", atom_dual, 1.0);

    let atoms_mixed = bf_to_crf(
        &BernsteinRepr::new(
            0.1,
            0.2,
            RadonMeasure::from_atoms(vec![(0.5, 1.0), (3.0, 0.4)]).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    push(&mut corpus, "atoms-mixed-dual", atoms_mixed, 1.2);

    push(
        &mut corpus,
        "exp-kernel",
        CrfRepr::new(0.0, 0.0, Kernel::exp_sum(vec![(1.0, 1.0)]).unwrap()).unwrap(),
        1.0,
    );
    push(
        &mut corpus,
        "exp-kernel-multi",
        CrfRepr::new(0.5, 0.1, Kernel::exp_sum(vec![(1.0, 1.0), (2.0, 10.0), (0.3, 0.05)]).unwrap()).unwrap(),
        1.0,
    );
    push(&mut corpus, "power-0.3", CrfRepr::new(1.0, 0.0, Kernel::power(1.0, 0.3).unwrap()).unwrap(), 1.0);
    push(&mut corpus, "power-0.5", CrfRepr::new(1.0, 0.0, Kernel::power(1.0, 0.5).unwrap()).unwrap(), 1.0);
    push(&mut corpus, "power-0.8", CrfRepr::new(0.0, 0.0, Kernel::power(2.0, 0.8).unwrap()).unwrap(), 1.0);
    push(
        &mut corpus,
        "mixture-flow-power",
        CrfRepr::new(1.0, 0.5, Kernel::power(0.5, 0.5).unwrap()).unwrap(),
        1.0,
    );
    push(
        &mut corpus,
        "mixture-exp-flow",
        CrfRepr::new(0.1, 1.0, Kernel::exp_sum(vec![(5.0, 0.2)]).unwrap()).unwrap(),
        0.5,
    );
    push(
        &mut corpus,
        "table-kernel",
        CrfRepr::new(
            1.0,
            0.0,
            Kernel::table(vec![(0.0, 2.0), (0.5, 1.0), (2.0, 0.25), (5.0, 0.0)]).unwrap(),
        )
        .unwrap(),
        1.0,
    );
    corpus
}

/// Complete Bernstein corpus in Stieltjes form.
pub fn stieltjes_corpus() -> Vec<(&'static str, StieltjesRepr)> {
    vec![
        (
            "atom",
            StieltjesRepr::new(0.0, 0.0, RadonMeasure::single_atom(1.0, 1.0).unwrap()).unwrap(),
        ),
        ("affine", StieltjesRepr::new(1.0, 2.0, RadonMeasure::zero()).unwrap()),
        (
            "atom-with-slope",
            StieltjesRepr::new(0.0, 1.0, RadonMeasure::single_atom(2.0, 3.0).unwrap()).unwrap(),
        ),
        (
            "exp-density",
            StieltjesRepr::new(
                0.5,
                0.0,
                RadonMeasure::from_density(DensityComponent::exponential(1.0, 1.0, Support::positive_axis())).unwrap(),
            )
            .unwrap(),
        ),
        (
            "power-density",
            StieltjesRepr::new(
                0.0,
                0.0,
                RadonMeasure::from_density(DensityComponent::power(1.0, -0.5, Support::new(0.0, 1.0).unwrap())).unwrap(),
            )
            .unwrap(),
        ),
        (
            "mixed",
            StieltjesRepr::new(
                0.2,
                0.1,
                RadonMeasure::new(
                    vec![
                        Atom { location: 0.5, weight: 1.0 },
                        Atom { location: 5.0, weight: 2.0 },
                    ],
                    vec![DensityComponent::exponential(0.5, 2.0, Support::positive_axis())],
                )
                .unwrap(),
            )
            .unwrap(),
        ),
    ]
}

/// Deterministic upper-half-plane samples, log-uniform in radius.
pub fn upper_half_plane_samples(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let radius = 10f64.powf(rng.gen_range(-3.0..3.0));
            let angle = rng.gen_range(0.02..std::f64::consts::PI - 0.02);
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// Composite Simpson oracle on a fixed fine grid.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Primitive of exp(-y^alpha): the concave integral family used by the
/// classifier fidelity checks.
pub fn exp_power_integral(x: f64, alpha: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        simpson(|y| (-y.powf(alpha)).exp(), 0.0, x, 4000)
    }
}
