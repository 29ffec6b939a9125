//! Numerical laboratory for Feynman checkers — the one-dimensional quantum
//! walk — with a ±1 lattice gauge field.
//!
//! The electron wave function can be computed by five independent routes:
//!
//! * brute-force path sum ([`lattice::amplitude_bruteforce`]),
//! * the lattice Dirac recurrence ([`lattice::amplitude`]),
//! * closed-form binomial sums ([`exact::a1_closed`], [`exact::a2_closed`]),
//! * terminating hypergeometric polynomials ([`exact::a1_hyper`], [`exact::a2_hyper`]),
//! * generating-function coefficients ([`exact::generating_coeff`]),
//!
//! plus a Fourier-integral representation ([`spectral::amplitude_integral`]).
//! The [`asymptotics`] module carries the continuum (Bessel) limit, the
//! large-time distribution, chirality-reversal precession, and a uniform Airy
//! approximation, each checkable against the lattice routes.
//!
//! ```
//! use feynman_checkers::exact::{a2_closed, DiagCoords};
//! use feynman_checkers::{lattice, GaugeField, LatticeIndex, LatticeParams};
//!
//! let params = LatticeParams::new(1.0, 1.0)?;
//! let field = GaugeField::homogeneous();
//! let idx = LatticeIndex::new(1, 3)?;
//!
//! // recurrence and closed form agree: a(1, 3) = (1 + i)/2 in this field
//! let a = lattice::amplitude(idx, &params, &field);
//! assert!((a.a1 - 0.5).abs() < 1e-12 && (a.a2 - 0.5).abs() < 1e-12);
//! let d = DiagCoords::from_lattice(1, 3).unwrap();
//! assert!((a2_closed(d, 1.0) - a.a2).abs() < 1e-12);
//! # Ok::<(), feynman_checkers::LatticeError>(())
//! ```

pub mod asymptotics;
pub mod exact;
pub mod lattice;
pub(crate) mod numeric;
pub mod spectral;

pub use lattice::{
    Amplitude, EdgeMidpoint, GaugeField, LatticeError, LatticeIndex, LatticeParams, Sign,
    WaveSlice,
};
