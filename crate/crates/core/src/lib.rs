//! Exact many-body machinery for an integrable theory of left- and
//! right-moving spin-1/2 fermions with a time-dependent spin-exchange
//! coupling.
//!
//! The crate builds, at desk scale (N ≤ 12 sites, exhaustive checks at
//! N ≤ 6), every algebraic object of the model:
//!
//! * [`spin`] — dense complex linear algebra on tensor products of
//!   spin-1/2 sites and the elementary two-site operators,
//! * [`coupling`] — the admissible coupling profile g(t) and the linear
//!   function f it must reproduce,
//! * [`scattering`] — the two-particle S-matrices, the XXX R-matrix and
//!   Yang-Baxter verifiers,
//! * [`kinematics`] / [`wavefunction`] — light-cone coordinates, particle
//!   orderings and Bethe-type amplitude assembly,
//! * [`transport`] — operators that carry one particle around the periodic
//!   system, their consistency relations and the constant-coupling
//!   transfer-matrix reduction,
//! * [`qkz`] — phase/spin separation, the analytic difference equation,
//!   quantum Knizhnik-Zamolodchikov transport and the off-shell Bethe
//!   ansatz solution as a truncated Jackson-type sum.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so the API is safe to drive from concurrent workers.

pub mod coupling;
pub mod error;
pub mod gamma;
pub mod kinematics;
pub mod linalg;
pub mod qkz;
pub mod rng;
pub mod scattering;
pub mod spin;
pub mod transport;
pub mod wavefunction;

pub use error::Error;
pub use num_complex::Complex64 as C64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Default relative tolerance used by verifiers unless stated otherwise.
pub const DEFAULT_TOL: f64 = 1e-12;
