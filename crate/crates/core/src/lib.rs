//! Exact computation in uniform layered semifields.
//!
//! The concrete model is `Q>0 ⊙ (Q ∪ {−∞}, max, +)`: a layer in the positive
//! rationals paired with a tropical value, written additively throughout
//! (the power `aᵏ` of a value is `k·a`). On top of the arithmetic sit
//!
//! - [`bipotent`]: finitely generated bipotent extensions and their
//!   free × torsion decomposition via Smith normal form,
//! - [`cancellative`]: simple algebraic extensions of `Q>0` and kernels,
//! - [`uniform`]: layered polynomial evaluation, pure extensions and uniform
//!   closures.
//!
//! Generic code is parameterised by [`Scalar`]; the aliases below fix it to
//! arbitrary-precision rationals.

pub mod bipotent;
pub mod cancellative;
pub mod intmat;
pub mod irreducible;
pub mod json;
pub mod poly;
pub mod scalar;
pub mod tropical;
pub mod uniform;

pub use bipotent::{BipotentError, BipotentPresentation, Degree, ExtDecomposition, Generator, Relation};
pub use cancellative::{diff_split, kernel_contains, kernel_sample, ratfunc_eq, CancellativeError};
pub use scalar::{fmt_rat, parse_rat, Rat, Scalar};
pub use tropical::{lattice_contains, LayerError, TropValue, ValueLattice};
pub use uniform::{
    eval_layered_poly, is_layerset_semiring, is_uniform_semifield, uniform_closure, ExtScalar, LayeredPoly,
    SortElem, SortPart, UniformDescriptor, UniformError,
};

pub type QLayer = tropical::Layer<Rat>;
pub type QLayered = tropical::LayeredElem<Rat>;
pub type QTropValue = tropical::TropValue<Rat>;
pub type QPoly = poly::SignedPoly<Rat>;
pub type QPosPoly = poly::PosPoly<Rat>;
pub type QGenerator = cancellative::AlgebraicGenerator<Rat>;
pub type QExtElem = cancellative::ExtElem<Rat>;
pub type QRationalFunction = cancellative::PosRationalFunction<Rat>;
