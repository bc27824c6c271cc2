//! Typed failures. Poles of scattering kernels and Gamma factors are
//! kinematic measure-zero sets; they are reported as errors rather than
//! returned as infinities so callers can reject or resample.

use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("site index {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("pair operator requires two distinct sites, got {0}")]
    DuplicateSite(usize),

    #[error("amplitude length {len} does not match 2^{n_sites}")]
    DimensionMismatch { len: usize, n_sites: usize },

    #[error("coupling g({t}) vanishes; f is undefined there")]
    VanishingCoupling { t: C64 },

    #[error("singular phase denominator at x = {x}")]
    SingularPhase { x: C64 },

    #[error("scattering pole: i f + 1 = 0 at kinematic difference {x}")]
    ScatteringPole { x: C64 },

    #[error("rational R-matrix pole at spectral parameter {lambda}")]
    RMatrixPole { lambda: C64 },

    #[error("matrices are not scalar multiples (element spread {spread:.3e})")]
    NotProportional { spread: f64 },

    #[error("singular two-particle matching system at g = {g}")]
    SingularMatching { g: C64 },

    #[error("Gamma pole within {dist:.3e} of argument {z}")]
    GammaPole { z: C64, dist: f64 },

    #[error("Jackson lattice point hits a pole at base index {base}, shell l = {l}")]
    LatticePole { base: usize, l: i64 },

    #[error("positions {i} and {j} coincide within 1e-9")]
    CoincidentPositions { i: usize, j: usize },

    #[error("position x[{i}] = {x} outside the box [0, {length}]")]
    OutOfBox { i: usize, x: f64, length: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("singular linear system")]
    SingularSystem,
}
