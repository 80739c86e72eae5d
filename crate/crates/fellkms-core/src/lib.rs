//! Desk-scale computations with KMS states on twisted groupoid C*-algebras.
//!
//! The crate covers five layers:
//!
//! - [`groupoid`] / [`cocycle`]: finite étale groupoids, exact T-valued
//!   2-cocycles and real 1-cocycles, with full axiom validation.
//! - [`algebra`]: the twisted convolution *-algebra `C_c(G,σ)`, its gauge
//!   dynamics, and numerical certificates (positivity, KMS defect, trace
//!   space of one-unit groupoids).
//! - [`measure`] / [`state`]: quasi-invariant measures with a prescribed
//!   Radon–Nikodym cocycle, trace fields over isotropy groups, and the
//!   (measure, field) ↔ state correspondence, including enumeration of the
//!   extreme KMS states of a finite model.
//! - [`lattice`]: bicharacters on `Z^t`, the antisymmetrised pairing, its
//!   center via exact Smith-normal-form kernels, and character traces on
//!   twisted lattice algebras.
//! - [`kgraph`]: finite strongly connected k-graphs — structure validation,
//!   Perron data, periodicity group, the induced path-groupoid cocycle and
//!   the KMS₁ parameterisation report.
//!
//! Circle values carry exact rational angles so cocycle identities are
//! checked with no tolerance; floating point enters only through measures,
//! functionals and eigenvalue certificates. The floating-point side is
//! generic over the scalar (f32/f64) via [`Scalar`]; the exported aliases
//! fix the default f64 lane used by the CLI.

use num_traits::{Float, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};
use std::iter::Sum;

pub mod algebra;
pub mod angle;
pub mod cocycle;
pub mod fixtures;
pub mod groupoid;
pub mod intlinalg;
pub mod interchange;
pub mod kgraph;
pub mod lattice;
pub mod measure;
pub mod numeric;
pub mod state;

mod error;

pub use error::CoreError;

/// Floating-point scalar for the numerical lane.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lift an `f64` constant (tolerances, literals) into the scalar type.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Default scalar used by the CLI and the JSON interfaces.
pub type Real = f64;

pub type AlgElement = algebra::AlgElement<Real>;
pub type LinearFunctional = algebra::LinearFunctional<Real>;
pub type OneCocycle = cocycle::OneCocycle<Real>;
pub type UnitMeasure = measure::UnitMeasure<Real>;
pub type TraceField = state::TraceField<Real>;
