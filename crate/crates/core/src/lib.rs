//! Exact SUSY and su(2) structure of a neutron bound in the magnetic field of
//! an infinite line current, in momentum space.
//!
//! * [`trigring`]: exact arithmetic on sums of `sin^a(β/2) cos^b(β/2)`.
//! * [`operators`]: superpotential, SUSY partners, ladder operators `J±`, `Jz`, `J²`.
//! * [`multiplets`]: highest-weight construction of the `2j+1` degenerate
//!   states and the spectrum `ε_j = (j+1/2)²`, `Ẽ_j = -G²/(2(j+1/2)²)`.
//! * [`fdsolver`]: an independent finite-difference cross-check.
//! * [`transforms`]: map back to momentum space and the Hankel bridge.

pub mod error;
pub mod fdsolver;
pub mod multiplets;
pub mod operators;
pub mod transforms;
pub mod trigring;

pub use error::{Error, Result};
pub use fdsolver::{Grid, Sign, Stencil, TridiagonalSym};
pub use multiplets::{Multiplet, SpectrumRow};
pub use operators::{Component, SectorParams, SpinorState};
pub use transforms::{MomentumSpinor, RadialFunction};
pub use trigring::{HalfInt, Rational, TrigMonomial, TrigPoly};
