//! Bipolar expansions of the inverse distance and overlap (contact)
//! corrections to electrostatic interaction energies.
//!
//! The crate computes two-body electrostatic energies of analytic charge
//! models by three mutually checking routes (truncated multipole series,
//! Fourier space, direct integration), evaluates the four equivalent
//! bipolar-expansion forms pointwise in the nonoverlap region, and
//! carries the first-order perturbation results for hydrogen-hydrogen
//! and hydrogen-proton systems. Units are Gaussian with e = a₀ = 1;
//! energies are in e²/a₀.

pub mod bipolar;
pub mod charge;
pub mod deriv;
pub mod energy;
pub mod error;
pub mod input;
pub mod perturb;
pub mod poly;
pub mod quad;
pub mod specfun;
pub mod vec3;
pub mod verify;
