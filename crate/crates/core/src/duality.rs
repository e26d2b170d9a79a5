//! Laplace-domain correspondence between creep compliances and Bernstein
//! functions, and evaluation of Bernstein representations on the imaginary
//! axis.
//!
//! For a creep compliance J(t) = a + b t + primitive of k, the function
//! g(p) = p^2 * (Laplace transform of J)(p) = a p + b + p k~(p) is a
//! Bernstein function of p whose spectral measure is -dk; the map swaps the
//! roles of offset and slope. The inverse direction recovers the kernel as
//! the tail mass k(r) = lambda(]r, inf[).
//!
//! On the imaginary axis, F(omega) = g(-i omega) splits into
//! f_R = a + integral of (1 - cos(r omega)) and
//! f_I = -b omega - integral of sin(r omega) against the measure. Atoms
//! are summed exactly; power, exponential and polyline densities use
//! closed-form trig integrals, anything else falls back to panel
//! quadrature with panels no wider than pi/|omega|.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matfun::{BernsteinRepr, CrfRepr, Kernel, StepTable};
use crate::measures::{DensityComponent, Interval, RadonMeasure};
use crate::quad::{self, QuadOptions};

/// Value of the analytic continuation F(omega) = g(-i omega).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ImagAxisValue {
    pub omega: f64,
    #[serde(rename = "f_R")]
    pub f_r: f64,
    #[serde(rename = "f_I")]
    pub f_i: f64,
}

impl ImagAxisValue {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.f_r, self.f_i)
    }
}

/// Bernstein function g(p) = p^2 J~(p) of a creep compliance: offset and
/// slope swap roles and the spectral measure is -dk.
pub fn crf_to_bf(j: &CrfRepr) -> BernsteinRepr {
    BernsteinRepr::new_unchecked(j.slope, j.offset, j.kernel.neg_differential())
}

/// Creep compliance whose Laplace dual is the given Bernstein function.
/// The kernel is the measure's tail mass: exact step tables for atomic
/// measures, closed forms for full-support power and exponential
/// densities, and a sampled step table otherwise.
pub fn bf_to_crf(g: &BernsteinRepr) -> Result<CrfRepr> {
    if !g.measure.bs1_finite() {
        return Err(Error::Bs1Violation("measure fails the r/(1+r) integrability condition".into()));
    }
    let kernel = kernel_from_measure(&g.measure)?;
    CrfRepr::new(g.slope, g.offset, kernel)
}

fn kernel_from_measure(m: &RadonMeasure) -> Result<Kernel> {
    if m.is_zero() {
        return Ok(Kernel::zero());
    }
    if m.components().is_empty() {
        // atomic measure: the tail mass is a step table dropping at each atom
        let atoms = m.atoms();
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        let mut points = Vec::with_capacity(atoms.len() + 1);
        let mut remaining = total;
        points.push((0.0, remaining));
        for a in atoms {
            remaining -= a.weight;
            points.push((a.location, remaining.max(0.0)));
        }
        if let Some(last) = points.last_mut() {
            last.1 = 0.0;
        }
        return Ok(Kernel::Table { steps: StepTable::new(points)? });
    }
    if m.atoms().is_empty() {
        match m.components() {
            [DensityComponent::PowerExp { coeff, exponent, rate, support }]
                if *rate == 0.0 && support.lo == 0.0 && support.hi.is_infinite() && *exponent > -2.0 && *exponent < -1.0 =>
            {
                // tail of c r^e is c r^(e+1)/(-(e+1)): a power kernel with
                // alpha = e + 2
                let alpha = exponent + 2.0;
                return Kernel::power(coeff / (-(exponent + 1.0)), alpha);
            }
            comps if comps.iter().all(|c| matches!(
                c,
                DensityComponent::PowerExp { exponent, rate, support, .. }
                    if *exponent == 0.0 && *rate > 0.0 && support.lo == 0.0 && support.hi.is_infinite()
            )) =>
            {
                let terms = comps
                    .iter()
                    .map(|c| match c {
                        DensityComponent::PowerExp { coeff, rate, .. } => (coeff / rate, *rate),
                        _ => unreachable!(),
                    })
                    .collect();
                return Kernel::exp_sum(terms);
            }
            _ => {}
        }
    }
    sampled_step_kernel(m)
}

/// Fallback for mixed or truncated measures: sample the tail mass onto a
/// log grid of right-continuous steps. Approximate, resolution documented
/// by the grid size.
fn sampled_step_kernel(m: &RadonMeasure) -> Result<Kernel> {
    let mut r_lo: f64 = 1e-8;
    for c in m.components() {
        let s = c.support();
        if s.lo > 0.0 {
            r_lo = r_lo.min(s.lo / 4.0);
        }
    }
    if let Some(first) = m.atoms().first() {
        r_lo = r_lo.min(first.location / 4.0);
    }
    let k0 = m.tail_mass(r_lo)?;
    if !k0.is_finite() {
        return Err(Error::Bs1Violation("tail mass is infinite; not a kernel".into()));
    }
    let mut r_hi = 1.0f64;
    for _ in 0..60 {
        if m.tail_mass(r_hi)? <= 1e-12 * k0 {
            break;
        }
        r_hi *= 2.0;
    }
    let n = 512usize;
    let ratio = (r_hi / r_lo).powf(1.0 / n as f64);
    let mut points = Vec::with_capacity(n + 1);
    let mut r = r_lo;
    let mut prev = f64::INFINITY;
    for _ in 0..=n {
        let v = m.tail_mass(r)?.min(prev);
        points.push((r, v));
        prev = v;
        r *= ratio;
    }
    if let Some(last) = points.last_mut() {
        last.1 = 0.0;
    }
    Ok(Kernel::Table { steps: StepTable::new(points)? })
}

// ---------------------------------------------------------------------------
// Imaginary axis
// ---------------------------------------------------------------------------

fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// Trig integrals of one density component against omega > 0:
/// (integral of (1 - cos(omega r)) dens, integral of sin(omega r) dens).
fn component_trig_integrals(c: &DensityComponent, omega: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
    match c {
        DensityComponent::PowerExp { coeff, exponent, rate, support }
            if *rate == 0.0
                && support.lo == 0.0
                && support.hi.is_infinite()
                && *exponent > -2.0
                && *exponent < -1.0 =>
        {
            // Mellin closed forms with s = e + 1 in ]-1, 0[:
            //   int u^(s-1) (1 - cos u) du = -Gamma(s) cos(pi s / 2)
            //   int u^(s-1) sin(u)  du =  Gamma(s) sin(pi s / 2)
            let s = exponent + 1.0;
            let gamma_s = libm::tgamma(s + 1.0) / s; // Gamma(s), s negative
            let scale = omega.powf(-s);
            let cos_part = -gamma_s * (std::f64::consts::FRAC_PI_2 * s).cos();
            let sin_part = gamma_s * (std::f64::consts::FRAC_PI_2 * s).sin();
            Ok((coeff * scale * cos_part, coeff * scale * sin_part))
        }
        DensityComponent::PowerExp { coeff, exponent, rate, support } if *exponent == 0.0 && *rate > 0.0 => {
            // elementary antiderivatives of exp(-a r) cos/sin(omega r)
            let a = *rate;
            let denom = a * a + omega * omega;
            let eval_cos = |r: f64| -> f64 {
                if r.is_infinite() {
                    0.0
                } else {
                    (-a * r).exp() * (omega * (omega * r).sin() - a * (omega * r).cos()) / denom
                }
            };
            let eval_sin = |r: f64| -> f64 {
                if r.is_infinite() {
                    0.0
                } else {
                    -(-a * r).exp() * (a * (omega * r).sin() + omega * (omega * r).cos()) / denom
                }
            };
            let exp_int = {
                let upper = if support.hi.is_infinite() { 0.0 } else { (-a * support.hi).exp() };
                ((-a * support.lo).exp() - upper) / a
            };
            let cos_int = eval_cos(support.hi) - eval_cos(support.lo);
            let sin_int = eval_sin(support.hi) - eval_sin(support.lo);
            Ok((coeff * (exp_int - cos_int), coeff * sin_int))
        }
        DensityComponent::Polyline { points } => {
            let mut cos_total = 0.0;
            let mut sin_total = 0.0;
            for pair in points.windows(2) {
                let (x0, v0) = pair[0];
                let (x1, v1) = pair[1];
                let slope = (v1 - v0) / (x1 - x0);
                let c0 = v0 - slope * x0;
                let (omc, s) = segment_trig(c0, slope, x0, x1, omega);
                cos_total += omc;
                sin_total += s;
            }
            Ok((cos_total, sin_total))
        }
        _ => {
            // generic fallback: truncate by total variation, then panels
            // no wider than pi/omega
            let sup = c.support();
            let tol = opts.abs_tol.max(1e-14);
            let hi = if sup.hi.is_finite() {
                sup.hi
            } else {
                let mut r = sup.lo.max(1.0);
                let mut steps = 0;
                loop {
                    let tail = c.tail_mass(r, opts)?;
                    if 2.0 * tail <= 0.25 * tol || steps > 400 {
                        break r;
                    }
                    r *= 2.0;
                    steps += 1;
                }
            };
            let cos_int = quad::integrate_oscillatory(
                &|r| c.eval(r) * one_minus_cos(omega * r),
                sup.lo,
                hi,
                omega,
                opts,
            )?;
            let sin_int = quad::integrate_oscillatory(&|r| c.eval(r) * (omega * r).sin(), sup.lo, hi, omega, opts)?;
            Ok((cos_int, sin_int))
        }
    }
}

/// Integrals of (c0 + c1 r)(1 - cos(w r)) and (c0 + c1 r) sin(w r) over
/// [x0, x1]; series branch for small w x to avoid cancellation.
fn segment_trig(c0: f64, c1: f64, x0: f64, x1: f64, w: f64) -> (f64, f64) {
    let pow_int = |p: i32| (x1.powi(p) - x0.powi(p)) / p as f64;
    if w * x1.abs() <= 0.01 {
        let w2 = w * w;
        let sin_part = w * (c0 * pow_int(2) + c1 * pow_int(3))
            - w2 * w / 6.0 * (c0 * pow_int(4) + c1 * pow_int(5))
            + w2 * w2 * w / 120.0 * (c0 * pow_int(6) + c1 * pow_int(7));
        let cos_part = w2 / 2.0 * (c0 * pow_int(3) + c1 * pow_int(4))
            - w2 * w2 / 24.0 * (c0 * pow_int(5) + c1 * pow_int(6))
            + w2 * w2 * w2 / 720.0 * (c0 * pow_int(7) + c1 * pow_int(8));
        return (cos_part, sin_part);
    }
    let (s0, c0s) = (w * x0).sin_cos();
    let (s1, c1s) = (w * x1).sin_cos();
    // plain antiderivatives; cancellation is bounded once w x1 > 0.01
    let int_sin = (c0s - c1s) / w; // integral of sin
    let int_r_sin = (s1 - s0) / (w * w) - (x1 * c1s - x0 * c0s) / w;
    let int_one = x1 - x0;
    let int_r = pow_int(2);
    let int_cos = (s1 - s0) / w;
    let int_r_cos = (c1s - c0s) / (w * w) + (x1 * s1 - x0 * s0) / w;
    (
        c0 * (int_one - int_cos) + c1 * (int_r - int_r_cos),
        c0 * int_sin + c1 * int_r_sin,
    )
}

/// Evaluate the analytic continuation F(omega) = g(-i omega) of a
/// Bernstein representation: F = f_R + i f_I with
/// f_R = a + integral of (1 - cos(r omega)), f_I = -b omega - integral of
/// sin(r omega) against the measure. Conjugate-symmetric in omega.
pub fn eval_bf_imag_axis(g: &BernsteinRepr, omega: f64) -> Result<ImagAxisValue> {
    eval_bf_imag_axis_opts(g, omega, &QuadOptions::default())
}

pub fn eval_bf_imag_axis_opts(g: &BernsteinRepr, omega: f64, opts: &QuadOptions) -> Result<ImagAxisValue> {
    if !omega.is_finite() {
        return Err(Error::domain(format!("omega must be finite, got {omega}")));
    }
    if omega == 0.0 {
        return Ok(ImagAxisValue { omega, f_r: g.offset, f_i: 0.0 });
    }
    let w = omega.abs();
    let mut cos_int = 0.0;
    let mut sin_int = 0.0;
    for a in g.measure.atoms() {
        cos_int += a.weight * one_minus_cos(a.location * w);
        sin_int += a.weight * (a.location * w).sin();
    }
    if !g.measure.components().is_empty() {
        // absolute tolerance scaled by the linear bound on these integrals
        let scale = bound_scale(&g.measure, w)?;
        let opts = QuadOptions {
            abs_tol: opts.rel_tol * scale.max(1e-30),
            ..*opts
        };
        for c in g.measure.components() {
            let (ci, si) = component_trig_integrals(c, w, &opts)?;
            cos_int += ci;
            sin_int += si;
        }
    }
    let f_r = g.offset + cos_int;
    let f_i_pos = -g.slope * w - sin_int;
    let f_i = if omega < 0.0 { -f_i_pos } else { f_i_pos };
    Ok(ImagAxisValue { omega, f_r, f_i })
}

/// A1 |omega| + 2 T: the linear bound on the trig integrals, used to scale
/// absolute quadrature tolerances.
fn bound_scale(m: &RadonMeasure, omega: f64) -> Result<f64> {
    let opts = QuadOptions::with_rel_tol(1e-6);
    let a1 = m.integrate(|r| r, Interval::unit(), &opts)?;
    let tail = m.tail_mass(1.0)?;
    Ok(a1 * omega.abs() + 2.0 * tail)
}

/// Dynamic modulus M(p) = p / g(p) with g(p) = a p + b + p k~(p) evaluated
/// from the kernel's closed-form Laplace transform. Valid for Re p > 0 and
/// on the imaginary axis away from 0.
pub fn complex_modulus(j: &CrfRepr, p: Complex64) -> Result<Complex64> {
    if p.re < 0.0 || (p.re == 0.0 && p.im == 0.0) {
        return Err(Error::domain(format!("modulus needs Re p >= 0, p != 0, got {p}")));
    }
    let g = bernstein_laplace(j, p);
    if g == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateMaterial { omega: -p.im });
    }
    Ok(p / g)
}

/// g(p) = a p + b + p k~(p) for a creep compliance (a, b, k).
pub fn bernstein_laplace(j: &CrfRepr, p: Complex64) -> Complex64 {
    j.offset * p + j.slope + j.kernel.p_times_laplace(p)
}
