//! Admissible time-dependent coupling.
//!
//! A consistent many-body wavefunction requires f(x) = (1 - 3g(x/2)^2/4)/(2 g(x/2))
//! to be a linear function α x + β, which forces
//!
//!   g(t) = (2/3) ( -2(2αt + β) ± sqrt(4(2αt + β)^2 + 3) ).
//!
//! Both branch signs are supported; the square root takes the principal
//! branch for complex parameters. Evaluation picks between the two
//! algebraically equal forms ±(2/3)(s ∓ 2u) and 2/(±s + 2u) so that no
//! catastrophic cancellation occurs at large |t|.

use crate::error::Error;
use crate::{Result, C64};

/// Sign choice in the square root of g(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Parameters of the linear integrability constraint f(x) = α x + β on a
/// periodic system of length L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub alpha: C64,
    pub beta: C64,
    pub branch: Branch,
    pub length: f64,
}

impl CouplingParams {
    pub fn new(alpha: C64, beta: C64, branch: Branch, length: f64) -> Result<Self> {
        if alpha.norm() == 0.0 {
            return Err(Error::InvalidConfig(
                "alpha = 0 is the constant-coupling regime; use the transfer-matrix mode".into(),
            ));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidConfig(format!("length must be positive, got {length}")));
        }
        Ok(Self { alpha, beta, branch, length })
    }

    /// Real α and β with branch `Plus` — the Hermitian reference setup.
    pub fn real(alpha: f64, beta: f64, length: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0), Branch::Plus, length)
    }

    /// The Hamiltonian is Hermitian iff both parameters are real.
    pub fn is_hermitian(&self) -> bool {
        self.alpha.im == 0.0 && self.beta.im == 0.0
    }

    /// Coupling strength g(t).
    pub fn g_of_t(&self, t: C64) -> C64 {
        let u = 2.0 * self.alpha * t + self.beta;
        let s = (4.0 * u * u + 3.0).sqrt() * self.branch.sign();
        let direct = s - 2.0 * u; // g = (2/3) * direct
        let recip = s + 2.0 * u; // g = 2 / recip   (direct * recip = 3)
        if recip.norm() >= direct.norm() {
            2.0 / recip
        } else {
            direct * (2.0 / 3.0)
        }
    }

    /// f(x) = (1 - 3 g(x/2)^2 / 4) / (2 g(x/2)). Equals α x + β by
    /// construction of g; computed through g to keep the two routes honest.
    pub fn f_of_x(&self, x: C64) -> Result<C64> {
        let g = self.g_of_t(x / 2.0);
        if g.norm() < 1e-300 {
            return Err(Error::VanishingCoupling { t: x / 2.0 });
        }
        Ok((1.0 - 0.75 * g * g) / (2.0 * g))
    }

    /// The unimodular scattering phase e^{iφ(x)} (unimodular for real α, β).
    pub fn phase_of_x(&self, x: C64) -> Result<C64> {
        let g = self.g_of_t(x / 2.0);
        let i = C64::new(0.0, 1.0);
        let den = i * g - (1.0 + 0.75 * g * g);
        if den.norm() < 1e-14 {
            return Err(Error::SingularPhase { x });
        }
        Ok((2.0 * i * g - 1.0 + 0.75 * g * g) / den)
    }
}
