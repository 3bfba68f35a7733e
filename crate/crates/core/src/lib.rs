//! Dirac scalar potentials built from exceptional orthogonal polynomials.
//!
//! The crate covers three solvable families on the line or half line
//! (radial oscillator, trigonometric Scarf, hyperbolic Pöschl-Teller),
//! their rational X_m extensions and the parametric-symmetry variants of the
//! last two. Closed-form spectra and eigenfunctions live in [`spectra`];
//! [`numerics`] holds an independent finite-difference eigensolver used by
//! [`verify`] to check every analytic statement.
//!
//! ```
//! use direop::potentials::{Family, PotentialSpec};
//! use direop::spectra;
//!
//! let spec = PotentialSpec::new(Family::TrigScarf { a: 3.0, b: 1.0 }, 1, false);
//! spec.validate().unwrap();
//! assert_eq!(spectra::energy(&spec, 2).unwrap(), 16.0);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod jet;
pub mod numerics;
pub mod potentials;
pub mod specialfn;
pub mod spectra;
pub mod verify;
pub mod xortho;

pub use error::{Error, Result};
pub use potentials::{DomainInfo, Family, PotentialSpec};
