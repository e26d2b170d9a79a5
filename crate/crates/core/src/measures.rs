//! Positive Radon measures on ]0, inf[ represented as point atoms plus an
//! optional smooth density, together with the integrability checks that the
//! spectral representations of the other modules rely on.
//!
//! Interval conventions are half-open ]lo, hi]: an atom sitting exactly at
//! the lower endpoint is excluded, one at the upper endpoint included. Tail
//! masses m(]r, inf[) follow the same convention, which makes them
//! right-continuous in r.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

/// Half-open interval ]lo, hi] on the positive axis; `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0) || !(hi >= lo) || lo.is_nan() || hi.is_nan() {
            return Err(Error::domain(format!("invalid interval ]{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// The full axis ]0, inf[.
    pub fn positive_axis() -> Self {
        Interval { lo: 0.0, hi: f64::INFINITY }
    }

    /// ]0, 1].
    pub fn unit() -> Self {
        Interval { lo: 0.0, hi: 1.0 }
    }

    /// ]r, inf[.
    pub fn tail_from(r: f64) -> Self {
        Interval { lo: r, hi: f64::INFINITY }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    fn contains_atom(&self, r: f64) -> bool {
        r > self.lo && r <= self.hi
    }
}

/// Support of a density component: the density vanishes outside [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0) || !(hi > lo) {
            return Err(Error::domain(format!("invalid support [{lo}, {hi}]")));
        }
        Ok(Support { lo, hi })
    }

    pub fn positive_axis() -> Self {
        Support { lo: 0.0, hi: f64::INFINITY }
    }

    fn clip(&self, domain: &Interval) -> Option<(f64, f64)> {
        let lo = self.lo.max(domain.lo);
        let hi = self.hi.min(domain.hi);
        (lo < hi).then_some((lo, hi))
    }
}

/// One point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Smooth part of a measure.
///
/// `PowerExp` is the parametric family c r^e exp(-a r) restricted to a
/// support; with a = 0 it is a pure power density, with e = 0 a pure
/// exponential. `Polyline` interpolates sampled values linearly and has
/// compact support.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityComponent {
    PowerExp {
        coeff: f64,
        exponent: f64,
        rate: f64,
        support: Support,
    },
    Polyline {
        points: Vec<(f64, f64)>,
    },
}

impl DensityComponent {
    pub fn power(coeff: f64, exponent: f64, support: Support) -> Self {
        DensityComponent::PowerExp { coeff, exponent, rate: 0.0, support }
    }

    pub fn exponential(coeff: f64, rate: f64, support: Support) -> Self {
        DensityComponent::PowerExp { coeff, exponent: 0.0, rate, support }
    }

    fn validate(&self) -> Result<()> {
        match self {
            DensityComponent::PowerExp { coeff, exponent, rate, support } => {
                if !(*coeff >= 0.0) || !coeff.is_finite() {
                    return Err(Error::domain(format!("density coefficient {coeff} must be finite and >= 0")));
                }
                if !exponent.is_finite() || !(*rate >= 0.0) || !rate.is_finite() {
                    return Err(Error::domain("density exponent/rate must be finite, rate >= 0"));
                }
                if support.hi.is_infinite() && *rate == 0.0 && *exponent >= -1.0 && *coeff > 0.0 {
                    // allowed as a measure (infinite tail mass), checks will flag it
                }
                Support::new(support.lo, support.hi).map(|_| ())
            }
            DensityComponent::Polyline { points } => {
                if points.len() < 2 {
                    return Err(Error::domain("polyline density needs at least two points"));
                }
                for pair in points.windows(2) {
                    if pair[1].0 <= pair[0].0 {
                        return Err(Error::domain("polyline abscissae must be strictly increasing"));
                    }
                }
                if points.iter().any(|&(r, v)| !(r >= 0.0) || !(v >= 0.0) || !v.is_finite()) {
                    return Err(Error::domain("polyline values must be finite and >= 0"));
                }
                Ok(())
            }
        }
    }

    /// Support of this component.
    pub fn support(&self) -> Support {
        match self {
            DensityComponent::PowerExp { support, .. } => *support,
            DensityComponent::Polyline { points } => Support {
                lo: points.first().map(|p| p.0).unwrap_or(0.0),
                hi: points.last().map(|p| p.0).unwrap_or(0.0),
            },
        }
    }

    /// Density value at r (0 outside the support).
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            DensityComponent::PowerExp { coeff, exponent, rate, support } => {
                if r < support.lo || r > support.hi || r <= 0.0 {
                    0.0
                } else {
                    coeff * r.powf(*exponent) * (-rate * r).exp()
                }
            }
            DensityComponent::Polyline { points } => {
                let n = points.len();
                if r < points[0].0 || r > points[n - 1].0 {
                    return 0.0;
                }
                let idx = points.partition_point(|&(x, _)| x <= r);
                if idx == 0 {
                    return points[0].1;
                }
                if idx == n {
                    return points[n - 1].1;
                }
                let (x0, v0) = points[idx - 1];
                let (x1, v1) = points[idx];
                v0 + (v1 - v0) * (r - x0) / (x1 - x0)
            }
        }
    }

    /// Mass of the component above r, closed form where available.
    pub fn tail_mass(&self, r: f64, opts: &QuadOptions) -> Result<f64> {
        match self {
            DensityComponent::PowerExp { coeff, exponent, rate, support } => {
                let lo = support.lo.max(r);
                if lo >= support.hi || *coeff == 0.0 {
                    return Ok(0.0);
                }
                if *rate == 0.0 {
                    // c (hi^{e+1} - lo^{e+1}) / (e+1)
                    let e1 = exponent + 1.0;
                    if support.hi.is_infinite() {
                        if e1 >= 0.0 {
                            return Ok(f64::INFINITY);
                        }
                        return Ok(-coeff * lo.powf(e1) / e1);
                    }
                    if e1 == 0.0 {
                        return Ok(coeff * (support.hi.ln() - lo.ln()));
                    }
                    return Ok(coeff * (support.hi.powf(e1) - lo.powf(e1)) / e1);
                }
                if *exponent == 0.0 {
                    let upper = if support.hi.is_infinite() { 0.0 } else { (-rate * support.hi).exp() };
                    return Ok(coeff / rate * ((-rate * lo).exp() - upper));
                }
                quad::integrate_interval(&|s| self.eval(s), lo, support.hi, opts)
            }
            DensityComponent::Polyline { points } => {
                let mut total = 0.0;
                for pair in points.windows(2) {
                    let (x0, v0) = pair[0];
                    let (x1, v1) = pair[1];
                    if x1 <= r {
                        continue;
                    }
                    let a = x0.max(r);
                    let va = if a == x0 { v0 } else { v0 + (v1 - v0) * (a - x0) / (x1 - x0) };
                    total += 0.5 * (va + v1) * (x1 - a);
                }
                Ok(total)
            }
        }
    }

    /// Whether the Bernstein condition integral of r/(1+r) against this
    /// component is finite, decided from the parameters.
    fn bs1_finite(&self) -> bool {
        match self {
            DensityComponent::PowerExp { coeff, exponent, rate, support } => {
                if *coeff == 0.0 {
                    return true;
                }
                let head_ok = support.lo > 0.0 || exponent + 1.0 > -1.0;
                let tail_ok = support.hi.is_finite() || *rate > 0.0 || *exponent < -1.0;
                head_ok && tail_ok
            }
            DensityComponent::Polyline { .. } => true,
        }
    }

    /// Finiteness of the integral of 1/(1+r) against this component.
    fn licm_finite(&self) -> bool {
        match self {
            DensityComponent::PowerExp { coeff, exponent, rate, support } => {
                if *coeff == 0.0 {
                    return true;
                }
                let head_ok = support.lo > 0.0 || *exponent > -1.0;
                let tail_ok = support.hi.is_finite() || *rate > 0.0 || *exponent < 0.0;
                head_ok && tail_ok
            }
            DensityComponent::Polyline { .. } => true,
        }
    }
}

/// Outcome of an integrability check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckOutcome {
    /// Value of the defining integral; the partial estimate when divergent.
    pub value: f64,
    pub holds: bool,
}

/// Outcome of the split head/tail check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoIneqOutcome {
    /// Integral of r over ]0, 1].
    pub head: f64,
    /// Total mass of ]1, inf[.
    pub tail: f64,
    pub holds: bool,
}

/// Positive Radon measure on ]0, inf[: atoms plus an optional smooth part.
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RadonMeasure {
    atoms: Vec<Atom>,
    components: Vec<DensityComponent>,
}

impl RadonMeasure {
    /// The zero measure.
    pub fn zero() -> Self {
        RadonMeasure::default()
    }

    pub fn new(atoms: Vec<Atom>, components: Vec<DensityComponent>) -> Result<Self> {
        for a in &atoms {
            if !(a.location > 0.0) || !a.location.is_finite() {
                return Err(Error::domain(format!("atom location {} must be strictly positive and finite", a.location)));
            }
            if !(a.weight >= 0.0) || !a.weight.is_finite() {
                return Err(Error::domain(format!("atom weight {} must be finite and >= 0", a.weight)));
            }
        }
        for c in &components {
            c.validate()?;
        }
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        // merge coincident locations
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location == a.location => last.weight += a.weight,
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.weight > 0.0);
        Ok(RadonMeasure { atoms: merged, components })
    }

    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        RadonMeasure::new(
            atoms.into_iter().map(|(location, weight)| Atom { location, weight }).collect(),
            Vec::new(),
        )
    }

    pub fn single_atom(location: f64, weight: f64) -> Result<Self> {
        RadonMeasure::from_atoms(vec![(location, weight)])
    }

    pub fn from_density(component: DensityComponent) -> Result<Self> {
        RadonMeasure::new(Vec::new(), vec![component])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn components(&self) -> &[DensityComponent] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.components.iter().all(|c| match c {
            DensityComponent::PowerExp { coeff, .. } => *coeff == 0.0,
            DensityComponent::Polyline { points } => points.iter().all(|&(_, v)| v == 0.0),
        })
    }

    /// Integrate a test function against the measure over a half-open
    /// domain ]lo, hi]. Atoms contribute exact weighted values, densities
    /// go through adaptive quadrature at the configured tolerance.
    pub fn integrate<F: Fn(f64) -> f64>(&self, phi: F, domain: Interval, opts: &QuadOptions) -> Result<f64> {
        let mut total = 0.0;
        for a in &self.atoms {
            if domain.contains_atom(a.location) {
                let v = phi(a.location);
                if !v.is_finite() {
                    return Err(Error::NonFiniteIntegrand { at: a.location });
                }
                total += a.weight * v;
            }
        }
        for c in &self.components {
            if let Some((lo, hi)) = c.support().clip(&domain) {
                total += quad::integrate_interval(&|r| c.eval(r) * phi(r), lo, hi, opts)?;
            }
        }
        Ok(total)
    }

    pub fn integrate_default<F: Fn(f64) -> f64>(&self, phi: F, domain: Interval) -> Result<f64> {
        self.integrate(phi, domain, &QuadOptions::default())
    }

    /// Bernstein integrability: integral of r/(1+r) over ]0, inf[ must be
    /// finite. Divergence is reported with the partial estimate.
    pub fn check_bs1(&self, opts: &QuadOptions) -> Result<CheckOutcome> {
        match self.integrate(|r| r / (1.0 + r), Interval::positive_axis(), opts) {
            Ok(value) => Ok(CheckOutcome { value, holds: value.is_finite() }),
            Err(Error::Divergent { partial }) => Ok(CheckOutcome { value: partial, holds: false }),
            Err(e) => Err(e),
        }
    }

    /// Split form of the same condition: integral of r over ]0, 1] and
    /// total mass of ]1, inf[ both finite.
    pub fn check_twoineq(&self, opts: &QuadOptions) -> Result<TwoIneqOutcome> {
        let mut holds = true;
        let head = match self.integrate(|r| r, Interval::unit(), opts) {
            Ok(v) => v,
            Err(Error::Divergent { partial }) => {
                holds = false;
                partial
            }
            Err(e) => return Err(e),
        };
        let tail = match self.integrate(|_| 1.0, Interval::tail_from(1.0), opts) {
            Ok(v) => v,
            Err(Error::Divergent { partial }) => {
                holds = false;
                partial
            }
            Err(e) => return Err(e),
        };
        holds = holds && head.is_finite() && tail.is_finite();
        Ok(TwoIneqOutcome { head, tail, holds })
    }

    /// Local-integrability condition for spectral measures of completely
    /// monotonic functions: integral of 1/(1+r) finite.
    pub fn check_licm(&self, opts: &QuadOptions) -> Result<CheckOutcome> {
        match self.integrate(|r| 1.0 / (1.0 + r), Interval::positive_axis(), opts) {
            Ok(value) => Ok(CheckOutcome { value, holds: value.is_finite() }),
            Err(Error::Divergent { partial }) => Ok(CheckOutcome { value: partial, holds: false }),
            Err(e) => Err(e),
        }
    }

    /// m(]r, inf[). Right-continuous and non-increasing in r; the atom at
    /// r itself is excluded. May be infinite for measures that fail the
    /// Bernstein condition.
    pub fn tail_mass(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(format!("tail mass needs r > 0, got {r}")));
        }
        let opts = QuadOptions::default();
        let mut total: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location > r)
            .map(|a| a.weight)
            .sum();
        for c in &self.components {
            total += c.tail_mass(r, &opts)?;
        }
        Ok(total)
    }

    /// Parameter-level decision of the Bernstein condition, used by
    /// constructors that must not pay for quadrature.
    pub fn bs1_finite(&self) -> bool {
        self.components.iter().all(|c| c.bs1_finite())
    }

    /// Parameter-level decision of the LICM condition.
    pub fn licm_finite(&self) -> bool {
        self.components.iter().all(|c| c.licm_finite())
    }
}

// ---------------------------------------------------------------------------
// JSON schema (version 1): {"atoms":[[r,w],...], "density":{"kind":...}}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    atoms: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<DensityJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DensityJson {
    Power {
        coeff: f64,
        exponent: f64,
        support: (f64, Option<f64>),
    },
    Exp {
        terms: Vec<(f64, f64)>,
        support: (f64, Option<f64>),
    },
    Powerexp {
        coeff: f64,
        exponent: f64,
        rate: f64,
        support: (f64, Option<f64>),
    },
    Table {
        points: Vec<(f64, f64)>,
    },
}

fn support_to_json(s: Support) -> (f64, Option<f64>) {
    (s.lo, s.hi.is_finite().then_some(s.hi))
}

fn support_from_json(s: (f64, Option<f64>)) -> Support {
    Support { lo: s.0, hi: s.1.unwrap_or(f64::INFINITY) }
}

impl Serialize for RadonMeasure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let atoms = self.atoms.iter().map(|a| (a.location, a.weight)).collect();
        let density = match self.components.as_slice() {
            [] => None,
            [DensityComponent::Polyline { points }] => Some(DensityJson::Table { points: points.clone() }),
            [DensityComponent::PowerExp { coeff, exponent, rate, support }] if *rate == 0.0 => {
                Some(DensityJson::Power { coeff: *coeff, exponent: *exponent, support: support_to_json(*support) })
            }
            [DensityComponent::PowerExp { coeff, exponent, rate, support }] if *exponent == 0.0 => {
                Some(DensityJson::Exp { terms: vec![(*coeff, *rate)], support: support_to_json(*support) })
            }
            [DensityComponent::PowerExp { coeff, exponent, rate, support }] => Some(DensityJson::Powerexp {
                coeff: *coeff,
                exponent: *exponent,
                rate: *rate,
                support: support_to_json(*support),
            }),
            many => {
                // only homogeneous exponential mixtures have a schema form
                let mut terms = Vec::new();
                let mut shared: Option<Support> = None;
                for c in many {
                    match c {
                        DensityComponent::PowerExp { coeff, exponent, rate, support }
                            if *exponent == 0.0 && *rate > 0.0 =>
                        {
                            if let Some(s) = shared {
                                if s != *support {
                                    return Err(S::Error::custom("schema v1 cannot express mixed-support densities"));
                                }
                            }
                            shared = Some(*support);
                            terms.push((*coeff, *rate));
                        }
                        _ => return Err(S::Error::custom("schema v1 cannot express this density combination")),
                    }
                }
                Some(DensityJson::Exp { terms, support: support_to_json(shared.unwrap()) })
            }
        };
        MeasureJson { atoms, density }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RadonMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = MeasureJson::deserialize(deserializer)?;
        let components = match json.density {
            None => Vec::new(),
            Some(DensityJson::Power { coeff, exponent, support }) => {
                vec![DensityComponent::power(coeff, exponent, support_from_json(support))]
            }
            Some(DensityJson::Exp { terms, support }) => terms
                .into_iter()
                .map(|(coeff, rate)| DensityComponent::exponential(coeff, rate, support_from_json(support)))
                .collect(),
            Some(DensityJson::Powerexp { coeff, exponent, rate, support }) => {
                vec![DensityComponent::PowerExp { coeff, exponent, rate, support: support_from_json(support) }]
            }
            Some(DensityJson::Table { points }) => vec![DensityComponent::Polyline { points }],
        };
        RadonMeasure::new(
            json.atoms.into_iter().map(|(location, weight)| Atom { location, weight }).collect(),
            components,
        )
        .map_err(D::Error::custom)
    }
}
