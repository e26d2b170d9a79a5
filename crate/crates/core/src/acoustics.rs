//! Acoustic layer: complex wave numbers for materials with creep-compliance
//! constitutive laws, attenuation/dispersion curves, the explicit linear
//! attenuation bound with certified constants, wavefront speeds, band-limited
//! pulse synthesis, and power-law exponent fits.
//!
//! Conventions: plane waves exp(p t - kappa(p) |x|) with p = -i omega, so
//! attenuation is Re kappa(-i omega) >= 0 and the phase velocity is
//! omega / (-Im kappa). The mass density rho is carried explicitly through
//! kappa = rho^(1/2) p^(1/2) [p^2 J~(p)]^(1/2).

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duality::{crf_to_bf, eval_bf_imag_axis};
use crate::error::{Error, Result};
use crate::matfun::{BernsteinRepr, CrfRepr};
use crate::measures::Interval;
use crate::quad::QuadOptions;

/// A viscoelastic material: creep compliance (1/Pa) plus mass density
/// (kg/m^3).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub compliance: CrfRepr,
    pub rho: f64,
}

impl Material {
    pub fn new(compliance: CrfRepr, rho: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::domain(format!("mass density must be positive and finite, got {rho}")));
        }
        Ok(Material { compliance, rho })
    }

    /// The Laplace dual g(p) = p^2 J~(p), computed once per sweep.
    pub fn bernstein_dual(&self) -> BernsteinRepr {
        crf_to_bf(&self.compliance)
    }

    /// Re-run the constructor checks, for values built by deserialization.
    pub fn validated(&self) -> Result<Self> {
        Material::new(self.compliance.validated()?, self.rho)
    }
}

/// One row of an attenuation/dispersion table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub omega: f64,
    #[serde(rename = "kappa_R")]
    pub kappa_r: f64,
    #[serde(rename = "kappa_I")]
    pub kappa_i: f64,
    pub atten: f64,
    pub phase_velocity: f64,
}

/// Sampled attenuation and dispersion curve with strictly increasing
/// frequencies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttenuationCurve {
    rows: Vec<CurveRow>,
}

impl AttenuationCurve {
    pub fn rows(&self) -> &[CurveRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn from_rows(rows: Vec<CurveRow>) -> Result<Self> {
        if rows.windows(2).any(|w| w[1].omega <= w[0].omega) {
            return Err(Error::domain("curve frequencies must be strictly increasing"));
        }
        Ok(AttenuationCurve { rows })
    }

    /// CSV with the fixed header omega,kappa_R,kappa_I,atten,phase_velocity.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "omega,kappa_R,kappa_I,atten,phase_velocity")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{}", r.omega, r.kappa_r, r.kappa_i, r.atten, r.phase_velocity)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .transpose()
            .map_err(|e| Error::domain(format!("cannot read CSV: {e}")))?
            .ok_or_else(|| Error::domain("empty CSV"))?;
        if header.trim() != "omega,kappa_R,kappa_I,atten,phase_velocity" {
            return Err(Error::domain(format!("unexpected CSV header: {header}")));
        }
        let mut rows = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::domain(format!("cannot read CSV: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::domain(format!("bad CSV row: {line}")));
            }
            let parse = |s: &str| -> Result<f64> {
                match s.trim() {
                    "inf" => Ok(f64::INFINITY),
                    t => t.parse().map_err(|e| Error::domain(format!("bad number {t}: {e}"))),
                }
            };
            rows.push(CurveRow {
                omega: parse(fields[0])?,
                kappa_r: parse(fields[1])?,
                kappa_i: parse(fields[2])?,
                atten: parse(fields[3])?,
                phase_velocity: parse(fields[4])?,
            });
        }
        AttenuationCurve::from_rows(rows)
    }
}

/// Wave number kappa(-i omega) for one frequency, from a precomputed
/// Bernstein dual. Branch: principal square roots with the sign fixed by
/// Re kappa >= 0, and kappa(-i(-omega)) the conjugate.
pub fn wavenumber_from_dual(g: &BernsteinRepr, rho: f64, omega: f64) -> Result<Complex64> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::domain(format!("wave number needs omega != 0, got {omega}")));
    }
    let w = omega.abs();
    let f = eval_bf_imag_axis(g, w)?;
    let mut fr = f.f_r;
    let fv = Complex64::new(fr, f.f_i);
    if fv == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateMaterial { omega });
    }
    // f_R >= 0 holds analytically; strip quadrature round-off
    if fr < 0.0 && fr.abs() < 1e-12 * fv.norm() {
        fr = 0.0;
    }
    let froot = Complex64::new(fr, f.f_i).sqrt();
    // sqrt(-i w) = sqrt(w) exp(-i pi/4)
    let proot = w.sqrt() * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2);
    let mut kappa = rho.sqrt() * proot * froot;
    if kappa.re < 0.0 && kappa.re.abs() < 1e-12 * kappa.norm() {
        kappa.re = 0.0;
    }
    if omega < 0.0 {
        kappa = kappa.conj();
    }
    Ok(kappa)
}

/// Wave number of a material at omega != 0.
pub fn wavenumber(mat: &Material, omega: f64) -> Result<Complex64> {
    wavenumber_from_dual(&mat.bernstein_dual(), mat.rho, omega)
}

/// Sweep the wave number over a positive increasing grid. Rows carry
/// atten = Re kappa and phase velocity omega / (-Im kappa), with an
/// infinity sentinel where Im kappa >= 0.
pub fn curve(mat: &Material, grid: &[f64]) -> Result<AttenuationCurve> {
    if grid.windows(2).any(|w| w[1] <= w[0]) || grid.first().is_some_and(|&w| w <= 0.0) {
        return Err(Error::domain("frequency grid must be positive and strictly increasing"));
    }
    let g = mat.bernstein_dual();
    let rows: Result<Vec<CurveRow>> = grid
        .par_iter()
        .map(|&omega| {
            let kappa = wavenumber_from_dual(&g, mat.rho, omega)?;
            let phase_velocity = if kappa.im < 0.0 { omega / (-kappa.im) } else { f64::INFINITY };
            Ok(CurveRow {
                omega,
                kappa_r: kappa.re,
                kappa_i: kappa.im,
                atten: kappa.re,
                phase_velocity,
            })
        })
        .collect();
    Ok(AttenuationCurve { rows: rows? })
}

/// Log-spaced grid helper: n points from lo to hi inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || n < 2 {
        return Err(Error::domain(format!("invalid log grid {lo}:{hi}:{n}")));
    }
    let step = (hi / lo).powf(1.0 / (n - 1) as f64);
    Ok((0..n).map(|i| lo * step.powi(i as i32)).collect())
}

/// Linear grid helper.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(hi > lo) || n < 2 {
        return Err(Error::domain(format!("invalid linear grid {lo}:{hi}:{n}")));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| lo + step * i as f64).collect())
}

/// The certified attenuation bound. For m = a + 2T and M = b + A1 with
/// A1 the head moment of the spectral measure and T its tail mass,
/// max(|kappa_R|, |kappa_I|) <= rho^(1/2) 2^(1/4) (m/(2 sqrt(M)) + sqrt(M) |omega|)
/// when M > 0, and <= rho^(1/2) 2^(1/4) sqrt(m |omega|) when M = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum BoundForm {
    Linear {
        #[serde(rename = "K")]
        intercept: f64,
        #[serde(rename = "L")]
        slope: f64,
    },
    Sqrt { coeff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub rho: f64,
    /// Offset a of the Bernstein dual.
    pub a: f64,
    /// Slope b of the Bernstein dual.
    pub b: f64,
    /// A1: integral of r over ]0, 1] against the spectral measure.
    #[serde(rename = "A1")]
    pub head_moment: f64,
    /// T: measure of ]1, inf[.
    #[serde(rename = "T")]
    pub tail: f64,
    /// m = a + 2T.
    pub m: f64,
    /// M = b + A1.
    #[serde(rename = "M")]
    pub m_big: f64,
    #[serde(flatten)]
    pub form: BoundForm,
}

impl BoundConstants {
    pub fn bound_at(&self, omega: f64) -> f64 {
        match self.form {
            BoundForm::Linear { intercept, slope } => intercept + slope * omega.abs(),
            BoundForm::Sqrt { coeff } => coeff * omega.abs().sqrt(),
        }
    }

    /// Scaled-down copy, as a negative control for bound verification.
    pub fn scaled(&self, factor: f64) -> Self {
        let form = match self.form {
            BoundForm::Linear { intercept, slope } => BoundForm::Linear {
                intercept: intercept * factor,
                slope: slope * factor,
            },
            BoundForm::Sqrt { coeff } => BoundForm::Sqrt { coeff: coeff * factor },
        };
        BoundConstants { form, ..*self }
    }
}

/// Compute the bound constants of a material from its Bernstein dual.
pub fn bound_constants(mat: &Material) -> Result<BoundConstants> {
    let g = mat.bernstein_dual();
    let check = g.measure.check_twoineq(&QuadOptions::default())?;
    if !check.holds {
        return Err(Error::Bs1Violation(
            "spectral measure fails the head/tail integrability pair".into(),
        ));
    }
    let head_moment = check.head;
    let tail = check.tail;
    let m = g.offset + 2.0 * tail;
    let m_big = g.slope + head_moment;
    let quarter = 2f64.powf(0.25);
    let root_rho = mat.rho.sqrt();
    let form = if m_big > 0.0 {
        BoundForm::Linear {
            intercept: root_rho * quarter * m / (2.0 * m_big.sqrt()),
            slope: root_rho * quarter * m_big.sqrt(),
        }
    } else {
        BoundForm::Sqrt { coeff: root_rho * quarter * m.sqrt() }
    };
    Ok(BoundConstants {
        rho: mat.rho,
        a: g.offset,
        b: g.slope,
        head_moment,
        tail,
        m,
        m_big,
        form,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundReport {
    pub max_violation: f64,
    pub holds: bool,
    pub worst_omega: f64,
    /// Absolute tolerance used: rel_tol times the bound at the largest
    /// grid frequency.
    pub tolerance: f64,
}

/// Check max(|kappa_R|, |kappa_I|) - bound(omega) over the grid against
/// supplied constants.
pub fn verify_bound_with(
    mat: &Material,
    constants: &BoundConstants,
    grid: &[f64],
    rel_tol: f64,
) -> Result<BoundReport> {
    if grid.is_empty() {
        return Err(Error::domain("bound verification needs a non-empty grid"));
    }
    let g = mat.bernstein_dual();
    let violations: Result<Vec<(f64, f64)>> = grid
        .par_iter()
        .map(|&omega| {
            let kappa = wavenumber_from_dual(&g, mat.rho, omega)?;
            let v = kappa.re.abs().max(kappa.im.abs()) - constants.bound_at(omega);
            Ok((omega, v))
        })
        .collect();
    let violations = violations?;
    let (worst_omega, max_violation) = violations
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let scale = grid.iter().fold(0f64, |acc, &w| acc.max(constants.bound_at(w)));
    let tolerance = rel_tol * scale;
    Ok(BoundReport {
        max_violation,
        holds: max_violation <= tolerance,
        worst_omega,
        tolerance,
    })
}

/// Check the material's own certified bound over the grid.
pub fn verify_bound(mat: &Material, grid: &[f64], rel_tol: f64) -> Result<(BoundConstants, BoundReport)> {
    let constants = bound_constants(mat)?;
    let report = verify_bound_with(mat, &constants, grid, rel_tol)?;
    Ok((constants, report))
}

/// Wavefront speed (rho J(0))^(-1/2); infinite when J(0) = 0.
pub fn wavefront_speed(mat: &Material) -> f64 {
    if mat.compliance.offset == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (mat.rho * mat.compliance.offset).sqrt()
    }
}

/// Band-limited source spectrum: Gaussian lobes of the given bandwidth
/// (rad/s) centered at +-center, so the window is even and the synthesized
/// signal real. The emitted pulse has time-domain standard deviation
/// 1/bandwidth =: rise time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWindow {
    pub amplitude: f64,
    pub center: f64,
    pub bandwidth: f64,
}

impl GaussianWindow {
    pub fn eval(&self, omega: f64) -> f64 {
        let lobe = |c: f64| (-((omega - c) / self.bandwidth).powi(2) / 2.0).exp();
        self.amplitude * (lobe(self.center) + lobe(-self.center))
    }

    pub fn rise_time(&self) -> f64 {
        1.0 / self.bandwidth
    }
}

/// Frequency grid for pulse synthesis: modes at j * (max/count) for
/// j = 0..=count, mirrored by conjugate symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisGrid {
    pub max: f64,
    pub count: usize,
}

impl SynthesisGrid {
    fn step(&self) -> f64 {
        self.max / self.count as f64
    }
}

/// Synthesize u(x, t) = (1/2 pi) integral of W(omega)
/// exp(-i omega t - kappa(-i omega) x) d omega on the time grid, using
/// conjugate symmetry so the signal is real.
///
/// Resolution requirements (violations are resolution errors, not bad
/// data): the grid covers the window band to 6 sigma, resolves the lobe
/// with at least 4 modes, and its synthesis period 2 pi / d omega exceeds
/// the time span plus 8 rise times.
pub fn greens_function(
    mat: &Material,
    x: f64,
    t_grid: &[f64],
    window: &GaussianWindow,
    grid: &SynthesisGrid,
) -> Result<Vec<f64>> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("observation distance must be positive, got {x}")));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid.is_empty() {
        return Err(Error::domain("time grid must be non-empty and strictly increasing"));
    }
    if window.amplitude == 0.0 {
        return Ok(vec![0.0; t_grid.len()]);
    }
    if !(window.bandwidth > 0.0) || window.center < 0.0 {
        return Err(Error::domain("window needs bandwidth > 0 and center >= 0"));
    }
    let d_omega = grid.step();
    if grid.max < window.center + 6.0 * window.bandwidth {
        return Err(Error::Resolution(format!(
            "omega grid max {} does not cover the window band {}",
            grid.max,
            window.center + 6.0 * window.bandwidth
        )));
    }
    if d_omega > window.bandwidth / 4.0 {
        return Err(Error::Resolution(format!(
            "omega step {d_omega} too coarse for window bandwidth {}",
            window.bandwidth
        )));
    }
    let span = t_grid.last().unwrap() - t_grid.first().unwrap();
    let period = 2.0 * std::f64::consts::PI / d_omega;
    if period < span + 8.0 * window.rise_time() {
        return Err(Error::Resolution(format!(
            "synthesis period {period} shorter than time span {span} plus signal extent; aliasing"
        )));
    }

    let g = mat.bernstein_dual();
    let modes: Result<Vec<Complex64>> = (1..=grid.count)
        .into_par_iter()
        .map(|j| {
            let omega = j as f64 * d_omega;
            let kappa = wavenumber_from_dual(&g, mat.rho, omega)?;
            Ok(Complex64::new(window.eval(omega), 0.0) * (-kappa * x).exp())
        })
        .collect();
    let modes = modes?;
    let dc = window.eval(0.0);
    let scale = d_omega / (2.0 * std::f64::consts::PI);

    let signal: Vec<f64> = t_grid
        .par_iter()
        .map(|&t| {
            let mut acc = dc;
            for (j, c) in modes.iter().enumerate() {
                let omega = (j + 1) as f64 * d_omega;
                let phase = Complex64::from_polar(1.0, -omega * t);
                acc += 2.0 * (c * phase).re;
            }
            scale * acc
        })
        .collect();
    Ok(signal)
}

/// Arrival and pre-front leakage diagnostics of a synthesized signal.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrontReport {
    /// Wavefront speed; None encodes an infinite speed.
    pub speed: Option<f64>,
    /// x / speed for finite speeds.
    pub front_time: Option<f64>,
    /// First time |u| crosses threshold_frac * max |u|.
    pub front_arrival: Option<f64>,
    /// Energy fraction before front_time - 3 rise times.
    pub leakage: Option<f64>,
    pub peak_time: f64,
    pub peak_amplitude: f64,
    pub threshold_frac: f64,
}

/// Analyze a synthesized signal for front arrival and causality leakage.
pub fn front_report(
    mat: &Material,
    x: f64,
    t_grid: &[f64],
    signal: &[f64],
    window: &GaussianWindow,
    threshold_frac: f64,
) -> Result<FrontReport> {
    if t_grid.len() != signal.len() || t_grid.is_empty() {
        return Err(Error::domain("time grid and signal must have equal non-zero length"));
    }
    let speed = wavefront_speed(mat);
    let (peak_idx, peak_amplitude) = signal
        .iter()
        .enumerate()
        .map(|(i, &u)| (i, u.abs()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let peak_time = t_grid[peak_idx];
    let front_arrival = if peak_amplitude > 0.0 {
        let threshold = threshold_frac * peak_amplitude;
        t_grid
            .iter()
            .zip(signal)
            .find(|&(_, &u)| u.abs() >= threshold)
            .map(|(&t, _)| t)
    } else {
        None
    };
    let (front_time, leakage) = if speed.is_finite() {
        let front = x / speed;
        let cutoff = front - 3.0 * window.rise_time();
        let total: f64 = signal.iter().map(|&u| u * u).sum();
        let pre: f64 = t_grid
            .iter()
            .zip(signal)
            .filter(|&(&t, _)| t < cutoff)
            .map(|(_, &u)| u * u)
            .sum();
        let leak = if total > 0.0 { pre / total } else { 0.0 };
        (Some(front), Some(leak))
    } else {
        (None, None)
    };
    Ok(FrontReport {
        speed: speed.is_finite().then_some(speed),
        front_time,
        front_arrival: if speed.is_finite() { front_arrival } else { None },
        leakage,
        peak_time,
        peak_amplitude,
        threshold_frac,
    })
}

/// Least-squares power-law fit atten ~ A omega^alpha over a frequency band.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerLawFit {
    #[serde(rename = "A")]
    pub prefactor: f64,
    pub alpha: f64,
    pub r2: f64,
    pub points: usize,
}

/// Fit a line in (log omega, log atten) over rows inside the band with
/// positive attenuation. Requires at least 8 usable rows.
pub fn fit_powerlaw(curve: &AttenuationCurve, band: (f64, f64)) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = curve
        .rows()
        .iter()
        .filter(|r| r.omega >= band.0 && r.omega <= band.1 && r.atten > 0.0)
        .map(|r| (r.omega.ln(), r.atten.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::CannotFit(format!(
            "need at least 8 rows with positive attenuation in [{}, {}], found {}",
            band.0,
            band.1,
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let alpha = sxy / sxx;
    let intercept = mean_y - alpha * mean_x;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (intercept + alpha * p.0)).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(PowerLawFit {
        prefactor: intercept.exp(),
        alpha,
        r2,
        points: pts.len(),
    })
}

/// A1 of the spectral measure, exposed for reports.
pub fn head_moment(g: &BernsteinRepr) -> Result<f64> {
    g.measure.integrate(|r| r, Interval::unit(), &QuadOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::Kernel;
    use crate::measures::RadonMeasure;

    fn newtonian() -> Material {
        Material::new(CrfRepr::newtonian(1.0).unwrap(), 1.0).unwrap()
    }

    fn elastic(a: f64) -> Material {
        Material::new(CrfRepr::elastic(a).unwrap(), 1.0).unwrap()
    }

    /// Material whose Bernstein dual is the pure atom (1, 1).
    fn atom_material() -> Material {
        let g = BernsteinRepr::new(0.0, 0.0, RadonMeasure::single_atom(1.0, 1.0).unwrap()).unwrap();
        let j = crate::duality::bf_to_crf(&g).unwrap();
        Material::new(j, 1.0).unwrap()
    }

    #[test]
    fn newtonian_wavenumber() {
        let k = wavenumber(&newtonian(), 2.0).unwrap();
        assert!((k - Complex64::new(1.0, -1.0)).norm() < 1e-12, "got {k}");
    }

    #[test]
    fn elastic_wavenumber_lossless() {
        let k = wavenumber(&elastic(1.0), 5.0).unwrap();
        assert!(k.re.abs() < 1e-12);
        assert!((k.norm() - 5.0).abs() < 1e-12);
        assert!((k.im + 5.0).abs() < 1e-12);
    }

    #[test]
    fn atom_material_wavenumber_magnitude() {
        let k = wavenumber(&atom_material(), std::f64::consts::PI).unwrap();
        let expect = (2.0 * std::f64::consts::PI).sqrt();
        assert!((k.norm() - expect).abs() < 1e-10, "got {}", k.norm());
    }

    #[test]
    fn conjugate_frequency() {
        let mat = atom_material();
        for w in [0.3, 2.0, 17.0] {
            let plus = wavenumber(&mat, w).unwrap();
            let minus = wavenumber(&mat, -w).unwrap();
            assert!((plus.conj() - minus).norm() < 1e-14);
            assert!(plus.re >= 0.0 && minus.re >= 0.0);
        }
    }

    #[test]
    fn curve_rows() {
        let c = curve(&newtonian(), &[2.0]).unwrap();
        let r = c.rows()[0];
        assert!((r.kappa_r - 1.0).abs() < 1e-12);
        assert!((r.kappa_i + 1.0).abs() < 1e-12);
        assert_eq!(r.atten, r.kappa_r);
        assert!((r.phase_velocity - 2.0).abs() < 1e-12);

        let c = curve(&elastic(1.0), &log_grid(0.1, 10.0, 11).unwrap()).unwrap();
        for r in c.rows() {
            assert!(r.atten.abs() < 1e-12);
            assert!((r.phase_velocity - 1.0).abs() < 1e-12);
        }

        assert!(curve(&newtonian(), &[]).unwrap().is_empty());
    }

    #[test]
    fn bound_constants_atom() {
        let (consts, report) = verify_bound(&atom_material(), &log_grid(1e-2, 1e6, 200).unwrap(), 1e-9).unwrap();
        match consts.form {
            BoundForm::Linear { intercept, slope } => {
                assert!(intercept.abs() < 1e-12);
                assert!((slope - 2f64.powf(0.25)).abs() < 1e-9, "L = {slope}");
            }
            f => panic!("expected linear bound, got {f:?}"),
        }
        assert_eq!((consts.m, consts.m_big), (0.0, 1.0));
        assert!(report.holds, "max violation {}", report.max_violation);
    }

    #[test]
    fn bound_constants_newtonian_sqrt_branch() {
        let consts = bound_constants(&newtonian()).unwrap();
        match consts.form {
            BoundForm::Sqrt { coeff } => assert!((coeff - 2f64.powf(0.25)).abs() < 1e-12),
            f => panic!("expected sqrt bound, got {f:?}"),
        }
        // |kappa| = sqrt(omega) <= 2^(1/4) sqrt(omega)
        let report = verify_bound_with(&newtonian(), &consts, &log_grid(1e-3, 1e6, 100).unwrap(), 1e-9).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn bound_elastic_and_negative_control() {
        let grid = log_grid(1e-3, 1e6, 150).unwrap();
        let (consts, report) = verify_bound(&elastic(1.0), &grid, 1e-9).unwrap();
        assert!(report.holds && report.max_violation < 0.0);
        let halved = consts.scaled(0.5);
        let bad = verify_bound_with(&elastic(1.0), &halved, &grid, 1e-9).unwrap();
        assert!(!bad.holds);
    }

    #[test]
    fn wavefront_speeds() {
        assert_eq!(wavefront_speed(&elastic(1.0)), 1.0);
        assert_eq!(wavefront_speed(&elastic(4.0)), 0.5);
        assert!(wavefront_speed(&newtonian()).is_infinite());
    }

    #[test]
    fn greens_elastic_pure_delay() {
        let mat = elastic(1.0);
        let x = 2.0;
        let t_grid: Vec<f64> = (0..=700).map(|i| -1.0 + i as f64 * 0.01).collect();
        let window = GaussianWindow { amplitude: 1.0, center: 40.0, bandwidth: 8.0 };
        let grid = SynthesisGrid { max: 96.0, count: 256 };
        let u = greens_function(&mat, x, &t_grid, &window, &grid).unwrap();
        let report = front_report(&mat, x, &t_grid, &u, &window, 0.5).unwrap();
        assert!((report.peak_time - 2.0).abs() <= 0.01 + 1e-12, "peak at {}", report.peak_time);
        assert!(report.leakage.unwrap() < 1e-3, "leakage {}", report.leakage.unwrap());
    }

    #[test]
    fn greens_zero_window() {
        let mat = elastic(1.0);
        let t_grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let window = GaussianWindow { amplitude: 0.0, center: 10.0, bandwidth: 2.0 };
        let grid = SynthesisGrid { max: 30.0, count: 128 };
        let u = greens_function(&mat, 1.0, &t_grid, &window, &grid).unwrap();
        assert!(u.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn greens_resolution_errors() {
        let mat = elastic(1.0);
        let t_grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let window = GaussianWindow { amplitude: 1.0, center: 40.0, bandwidth: 8.0 };
        // band not covered
        let r = greens_function(&mat, 1.0, &t_grid, &window, &SynthesisGrid { max: 50.0, count: 64 });
        assert!(matches!(r, Err(Error::Resolution(_))));
        // mode spacing too coarse
        let r = greens_function(&mat, 1.0, &t_grid, &window, &SynthesisGrid { max: 96.0, count: 16 });
        assert!(matches!(r, Err(Error::Resolution(_))));
    }

    #[test]
    fn newtonian_modal_decay() {
        // per-mode amplitude decays like exp(-sqrt(omega/2) x)
        let mat = newtonian();
        let g = mat.bernstein_dual();
        for omega in [1.0, 4.0, 25.0] {
            for x in [0.5, 1.0, 2.0] {
                let kappa = wavenumber_from_dual(&g, 1.0, omega).unwrap();
                let decay = (-kappa * x).exp().norm();
                let expect = (-(omega / 2.0).sqrt() * x).exp();
                assert!((decay - expect).abs() < 1e-12, "omega={omega}, x={x}");
            }
        }
    }

    #[test]
    fn fit_newtonian_half_exponent() {
        let c = curve(&newtonian(), &log_grid(1.0, 100.0, 200).unwrap()).unwrap();
        let fit = fit_powerlaw(&c, (1.0, 100.0)).unwrap();
        assert!((fit.alpha - 0.5).abs() < 1e-9, "alpha {}", fit.alpha);
        assert!((fit.prefactor - 1.0 / 2f64.sqrt()).abs() < 1e-9, "A {}", fit.prefactor);
        assert!(fit.r2 > 0.999999);
    }

    #[test]
    fn fit_synthetic_exact() {
        let rows: Vec<CurveRow> = log_grid(0.5, 50.0, 40)
            .unwrap()
            .into_iter()
            .map(|omega| {
                let atten = 3.0 * omega.powf(1.7);
                CurveRow { omega, kappa_r: atten, kappa_i: -omega, atten, phase_velocity: 1.0 }
            })
            .collect();
        let curve = AttenuationCurve::from_rows(rows).unwrap();
        let fit = fit_powerlaw(&curve, (0.5, 50.0)).unwrap();
        assert!((fit.alpha - 1.7).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);

        // sub-band stability on exact data
        let sub = fit_powerlaw(&curve, (1.0, 10.0)).unwrap();
        assert!((sub.alpha - fit.alpha).abs() < 1e-6);
    }

    #[test]
    fn fit_elastic_fails() {
        let c = curve(&elastic(1.0), &log_grid(1.0, 100.0, 50).unwrap()).unwrap();
        assert!(matches!(fit_powerlaw(&c, (1.0, 100.0)), Err(Error::CannotFit(_))));
    }

    #[test]
    fn csv_roundtrip() {
        let c = curve(&newtonian(), &log_grid(0.5, 5.0, 9).unwrap()).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("omega,kappa_R,kappa_I,atten,phase_velocity\n"));
        let back = AttenuationCurve::read_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn high_frequency_slope_approaches_elastic() {
        // J(0) = 1 with an exponential kernel: |kappa|/omega -> 1
        let j = CrfRepr::new(1.0, 0.0, Kernel::exp_sum(vec![(1.0, 1.0)]).unwrap()).unwrap();
        let mat = Material::new(j, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for w in [1e3, 1e4, 1e5] {
            let k = wavenumber(&mat, w).unwrap();
            let dev = (k.norm() / w - 1.0).abs();
            assert!(dev < prev, "deviation not decreasing at {w}");
            prev = dev;
        }
    }
}
