//! Acceptance suite: each test checks one numbered criterion at its stated
//! tolerance and prints one pass/fail line. Run with --nocapture to see the
//! lines.

mod support;

use std::time::Instant;

use num_complex::Complex64;

use support::{exp_power_integral, material_corpus, stieltjes_corpus, upper_half_plane_samples};
use viscowave::acoustics::{
    self, curve, fit_powerlaw, front_report, greens_function, log_grid, verify_bound, wavenumber,
    GaussianWindow, Material, SynthesisGrid,
};
use viscowave::duality::{bf_to_crf, crf_to_bf};
use viscowave::matfun::{
    cbf_power, cbf_product, check_cm_differences, classify_crf, eval_crf, limit_slope,
    BernsteinRepr, CbfFn, CrfRepr, Kernel,
};
use viscowave::measures::RadonMeasure;

fn report(criterion: &str, pass: bool) {
    println!("criterion {criterion}: {}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn acceptance_01_newtonian_exponent() {
    let start = Instant::now();
    let mat = Material::new(CrfRepr::newtonian(1.0).unwrap(), 1.0).unwrap();
    let c = curve(&mat, &log_grid(1.0, 100.0, 200).unwrap()).unwrap();
    let fit = fit_powerlaw(&c, (1.0, 100.0)).unwrap();
    let elapsed = start.elapsed();
    let alpha_ok = (fit.alpha - 0.5).abs() <= 0.005;
    let prefactor_ok = (fit.prefactor - 1.0 / 2f64.sqrt()).abs() <= 0.01 / 2f64.sqrt();
    let fast = elapsed.as_secs_f64() < 1.0;
    report("1 (newtonian exponent 0.5, prefactor 1/sqrt(2), < 1 s)", alpha_ok && prefactor_ok && fast);
    assert!(alpha_ok, "alpha = {}", fit.alpha);
    assert!(prefactor_ok, "A = {}", fit.prefactor);
    assert!(fast, "took {elapsed:?}");
}

#[test]
fn acceptance_02_linear_bound_corpus() {
    let start = Instant::now();
    let grid = log_grid(1e-3, 1e6, 300).unwrap();
    let corpus = material_corpus();
    assert!(corpus.len() >= 10, "corpus too small: {}", corpus.len());
    let mut all = true;
    for (name, mat) in &corpus {
        let (_, rep) = verify_bound(mat, &grid, 1e-9).unwrap();
        if !rep.holds {
            eprintln!("bound violated for {name}: {} at omega {}", rep.max_violation, rep.worst_omega);
            all = false;
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed.as_secs_f64() < 30.0;
    report("2 (linear attenuation bound on corpus, < 30 s)", all && fast);
    assert!(all);
    assert!(fast, "took {elapsed:?}");
}

#[test]
fn acceptance_03_duality_roundtrip() {
    let grid = log_grid(1e-3, 1e3, 50).unwrap();
    let mut worst: f64 = 0.0;
    for (name, mat) in material_corpus() {
        let j = &mat.compliance;
        let back = bf_to_crf(&crf_to_bf(j)).unwrap();
        for &t in &grid {
            let a = eval_crf(j, t);
            let b = eval_crf(&back, t);
            let err = (a - b).abs() / (1.0 + a);
            assert!(err <= 1e-8, "{name}: roundtrip error {err} at t = {t}");
            worst = worst.max(err);
        }
    }
    report("3 (duality roundtrip <= 1e-8 relative)", true);
    println!("  worst relative roundtrip error: {worst:.3e}");
}

#[test]
fn acceptance_04_classifier_fidelity() {
    // step from the noise rule: h^n >= 1e3 * 2^n * eps at n = 8
    let h = (1e3 * 2f64.powi(8) * f64::EPSILON).powf(1.0 / 8.0);

    // alpha = 1/2: derivative exp(-sqrt(t)) is completely monotonic
    let grid: Vec<f64> = (0..60).map(|i| 0.05 + i as f64 * 0.05).collect();
    let half = check_cm_differences(&|t: f64| (-t.sqrt()).exp(), 8, &grid, h).unwrap();
    let half_ok = half.pass;

    // alpha = 3/2: derivative exp(-t^{3/2}) fails complete monotonicity
    let witness_grid: Vec<f64> = (0..240).map(|i| 0.02 + i as f64 * 0.0025).collect();
    let three_half = check_cm_differences(&|t: f64| (-t.powf(1.5)).exp(), 8, &witness_grid, h).unwrap();
    let fails_ok = !three_half.pass && three_half.first_violation.unwrap().order >= 2;

    // both families are creep functions
    let mut crf_ok = true;
    for alpha in [0.5, 1.5] {
        let samples: Vec<(f64, f64)> = (0..=60)
            .map(|i| {
                let t = i as f64 * 0.05;
                (t, exp_power_integral(t, alpha))
            })
            .collect();
        crf_ok &= classify_crf(&samples).unwrap().is_crf;
    }

    report("4a (alpha=1/2 bernstein=true at orders <= 8)", half_ok);
    report("4b (alpha=3/2 bernstein=false)", fails_ok);
    report("4d (both families crf=true)", crf_ok);
    assert!(half_ok, "{:?}", half.first_violation);
    assert!(fails_ok, "{three_half:?}");
    assert!(crf_ok);

    // The printed sign-change location. The criterion expects it within
    // 0.05 of 1/3, quoting the source's root of the third-derivative
    // factor alpha x^alpha - (alpha - 1); solving that factor actually
    // gives x = ((alpha-1)/alpha)^(1/alpha) = (1/3)^(2/3) ~ 0.4807, and
    // the measured sign change tracks that value, not 1/3. See the
    // decisions ledger; this sub-check is expected to fail.
    let witness = three_half.sign_change.unwrap();
    let within = (witness - 1.0 / 3.0).abs() <= 0.05;
    report("4c (alpha=3/2 witness within 0.05 of 1/3)", within);
    assert!(
        within,
        "measured sign change at {witness:.4}; the analytic root of the printed third-derivative \
         factor is (1/3)^(2/3) = {:.4}, which is 0.147 away from the quoted 1/3, so no faithful \
         witness can satisfy this tolerance",
        (1.0f64 / 3.0).powf(2.0 / 3.0)
    );
}

#[test]
fn acceptance_05_limit_slope() {
    let g = BernsteinRepr::new(3.0, 2.0, RadonMeasure::single_atom(1.0, 1.0).unwrap()).unwrap();
    let rep = limit_slope(&g, &[1e2, 1e3, 1e4]).unwrap();
    let ratios: Vec<f64> = rep.diagnostics.iter().map(|d| d.1).collect();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let tol = [5e-2, 5e-3, 5e-4];
    let within = ratios
        .iter()
        .zip(tol)
        .all(|(&r, tol)| (r - 2.0).abs() < tol);
    report("5 (slope limit diagnostics decrease within stated tolerances)", decreasing && within);
    assert!(decreasing, "{ratios:?}");
    assert!(within, "{ratios:?}");
}

#[test]
fn acceptance_06_sandwich_inequality() {
    for i in 0..10_000 {
        let t = i as f64 * (100.0 / 9_999.0);
        let v = -(-t).exp_m1();
        assert!(t / (1.0 + t) <= v, "lower bound fails at t = {t}");
        assert!(v <= 2.0 * t / (1.0 + t), "upper bound fails at t = {t}");
    }
    report("6 (sandwich inequality on 1e4 points, ulp-exact)", true);
}

#[test]
fn acceptance_07_wavefront_causality() {
    let j = CrfRepr::new(1.0, 0.0, Kernel::exp_sum(vec![(1.0, 1.0)]).unwrap()).unwrap();
    let mat = Material::new(j, 1.0).unwrap();
    let x = 2.0;
    let dt = 0.05;
    let t_grid: Vec<f64> = (0..=140).map(|i| -1.0 + i as f64 * dt).collect();
    let window = GaussianWindow { amplitude: 1.0, center: 60.0, bandwidth: 10.0 };
    let grid = SynthesisGrid { max: 130.0, count: 512 };
    let u = greens_function(&mat, x, &t_grid, &window, &grid).unwrap();
    let rep = front_report(&mat, x, &t_grid, &u, &window, 0.9).unwrap();

    let leakage = rep.leakage.unwrap();
    let arrival = rep.front_arrival.unwrap();
    let leak_ok = leakage < 1e-3;
    let arrival_ok = (arrival - 2.0).abs() <= 2.0 * dt + 1e-12;
    report("7 (pre-front energy < 1e-3, arrival 2.0 +- 2 steps)", leak_ok && arrival_ok);
    assert!(leak_ok, "leakage {leakage}");
    assert!(arrival_ok, "arrival {arrival}");
}

#[test]
fn acceptance_08_high_frequency_slope() {
    let j = CrfRepr::new(1.0, 0.0, Kernel::exp_sum(vec![(1.0, 1.0)]).unwrap()).unwrap();
    let mat = Material::new(j, 1.0).unwrap();
    let deviations: Vec<f64> = [1e3, 1e4, 1e5]
        .iter()
        .map(|&w| (wavenumber(&mat, w).unwrap().norm() / w - 1.0).abs())
        .collect();
    let decreasing = deviations.windows(2).all(|w| w[1] < w[0]);
    report("8 (|kappa|/omega approaches 1 monotonically)", decreasing);
    assert!(decreasing, "{deviations:?}");
}

#[test]
fn acceptance_09_cbf_suite() {
    let samples = upper_half_plane_samples(0xC0FFEE, 200);
    let mut all = true;
    for (name, s) in stieltjes_corpus() {
        let base = CbfFn::from(s);
        let direct = viscowave::matfun::nevanlinna_check(|z| base.eval(z), &samples).unwrap();
        if !direct.pass {
            eprintln!("{name}: direct check failed at {:?}", direct.witness);
            all = false;
        }
        for alpha in [0.0, 0.3, 1.0] {
            let powered = cbf_power(base.clone(), alpha).unwrap();
            let v = viscowave::matfun::nevanlinna_check(|z| powered.eval(z), &samples).unwrap();
            if !v.pass {
                eprintln!("{name}^{alpha}: check failed at {:?}", v.witness);
                all = false;
            }
        }
        let product = cbf_product(CbfFn::Var, base, 0.5).unwrap();
        let v = viscowave::matfun::nevanlinna_check(|z| product.eval(z), &samples).unwrap();
        if !v.pass {
            eprintln!("sqrt(z) * sqrt({name}): check failed at {:?}", v.witness);
            all = false;
        }
    }
    // negative control: z^2 leaves the upper half-plane
    let square = viscowave::matfun::nevanlinna_check(|z: Complex64| Ok(z * z), &samples).unwrap();
    let control_ok = !square.pass;
    report("9 (CBF suite: corpus, powers, products pass; z^2 fails)", all && control_ok);
    assert!(all);
    assert!(control_ok, "z^2 unexpectedly passed");
}

#[test]
fn acceptance_10_low_frequency_solid_exponent() {
    let j = CrfRepr::new(1.0, 0.0, Kernel::power(1.0, 0.5).unwrap()).unwrap();
    let mat = Material::new(j, 1.0).unwrap();
    let band = (1e-4, 1e-2);
    let coarse = fit_powerlaw(&curve(&mat, &log_grid(band.0, band.1, 20).unwrap()).unwrap(), band).unwrap();
    // independent oracle: the same sweep at 10x resolution
    let fine = fit_powerlaw(&curve(&mat, &log_grid(band.0, band.1, 200).unwrap()).unwrap(), band).unwrap();
    let agree = (coarse.alpha - fine.alpha).abs() <= 0.05;
    report("10 (low-frequency exponent matches 10x-resolution oracle)", agree);
    println!(
        "  coarse alpha = {:.6}, fine alpha = {:.6} (kernel-dominated small-omega slope 1 - alpha/2 = 0.75)",
        coarse.alpha, fine.alpha
    );
    assert!(agree, "coarse {} vs fine {}", coarse.alpha, fine.alpha);
}

#[test]
fn acceptance_branch_convention_on_corpus() {
    // supporting invariant: Re kappa >= 0 and conjugate symmetry everywhere
    for (name, mat) in material_corpus() {
        for &w in &log_grid(1e-3, 1e6, 40).unwrap() {
            let k = wavenumber(&mat, w).unwrap();
            assert!(k.re >= 0.0, "{name}: Re kappa < 0 at omega {w}");
            let km = wavenumber(&mat, -w).unwrap();
            assert!((k.conj() - km).norm() <= 1e-12 * k.norm().max(1e-300), "{name}: conjugate symmetry at {w}");
        }
    }
}

#[test]
fn acceptance_high_frequency_slope_corpus() {
    // |kappa(-i w)|/w tends to sqrt(rho J(0)) for materials with J(0) > 0.
    // Strict monotonicity of the deviation only holds for smooth spectral
    // measures; atomic measures oscillate (1 - cos(r w) has no limit), so
    // those are held to convergence alone.
    for (name, mat) in material_corpus() {
        let a = mat.compliance.offset;
        if a == 0.0 {
            continue;
        }
        let target = (mat.rho * a).sqrt();
        let atomic = !mat.bernstein_dual().measure.atoms().is_empty();
        let mut prev = f64::INFINITY;
        let mut last = f64::INFINITY;
        for w in [1e3, 1e4, 1e5] {
            let dev = (wavenumber(&mat, w).unwrap().norm() / w - target).abs();
            if !atomic {
                assert!(dev <= prev + 1e-15, "{name}: deviation grew at omega {w}");
            }
            prev = dev;
            last = dev;
        }
        assert!(last / target < 0.05, "{name}: slope deviation {last} not close to {target}");
    }
}

#[test]
fn acceptance_greens_newtonian_infinite_speed() {
    // infinite wavefront speed: signal present at arbitrarily small t > 0
    let mat = Material::new(CrfRepr::newtonian(1.0).unwrap(), 1.0).unwrap();
    assert!(acoustics::wavefront_speed(&mat).is_infinite());
    let t_grid: Vec<f64> = (0..=300).map(|i| -1.5 + i as f64 * 0.01).collect();
    let window = GaussianWindow { amplitude: 1.0, center: 20.0, bandwidth: 5.0 };
    let grid = SynthesisGrid { max: 55.0, count: 400 };
    let u = greens_function(&mat, 0.05, &t_grid, &window, &grid).unwrap();
    let rep = front_report(&mat, 0.05, &t_grid, &u, &window, 0.5).unwrap();
    assert!(rep.speed.is_none());
    assert!(rep.front_arrival.is_none());
    // energy exists well before any elastic-style front could arrive
    let early: f64 = t_grid.iter().zip(&u).filter(|&(&t, _)| t < 0.0).map(|(_, &v)| v * v).sum();
    let total: f64 = u.iter().map(|&v| v * v).sum();
    assert!(early / total > 1e-6, "early fraction {}", early / total);
}
