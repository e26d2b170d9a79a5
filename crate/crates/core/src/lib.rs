//! Linear viscoelasticity through creep compliances that are non-negative,
//! non-decreasing and concave: spectral measures, Bernstein-type function
//! representations, the Laplace-domain duality between creep compliances
//! and Bernstein functions, and the acoustic layer (complex wave numbers,
//! attenuation bounds, wavefront speeds, pulse synthesis, power-law fits).

pub mod acoustics;
pub mod duality;
pub mod error;
pub mod matfun;
pub mod measures;
pub mod quad;

pub use acoustics::{AttenuationCurve, BoundConstants, Material};
pub use duality::ImagAxisValue;
pub use error::{Error, Result};
pub use matfun::{BernsteinRepr, CbfFn, CmRepr, CrfRepr, Kernel, StepTable, StieltjesRepr};
pub use measures::{Atom, CheckOutcome, DensityComponent, Interval, RadonMeasure, Support, TwoIneqOutcome};
pub use quad::QuadOptions;
