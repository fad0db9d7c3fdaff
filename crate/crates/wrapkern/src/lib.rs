//! Wrapped probability laws and heat kernels on compact Lie groups.
//!
//! A central probability law on a compact group can be described two ways:
//! spectrally, through a coefficient per irreducible character, or
//! geometrically, by wrapping a law on the Lie algebra around the group via
//! the exponential map. This crate implements both descriptions for the
//! special unitary family and cross-checks them against each other:
//!
//! * root-system data and Killing-form geometry ([`roots`]),
//! * characters, class densities, and torus geometry ([`torus`]),
//! * the wrapping map in its Fourier and lattice forms ([`wrapping`]),
//! * heat kernels computed through both routes ([`heat`]),
//! * Brownian motion on `SU(2)` with path-integral weights ([`stochastic`]),
//! * wrapped radial laws, their convolution calculus, and wrapped jump
//!   processes ([`radial`]).

pub mod error;
pub mod heat;
pub mod numeric;
pub mod radial;
pub mod roots;
pub mod stochastic;
pub mod torus;
pub mod wrapping;

pub use error::{Error, Result};
pub use roots::{GroupId, RootSystem, Weight};
