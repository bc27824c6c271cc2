//! Particle configurations and light-cone kinematics.
//!
//! Each particle carries a chirality: right movers depend on z = x - t,
//! left movers on z̄ = x + t. The standard layout puts the left movers
//! first (sites 0..n_left-1); the constant-coupling transfer matrix uses
//! the mirrored right-first layout. Arbitrary patterns are accepted so
//! small worked examples can keep their original site labels.

use crate::coupling::CouplingParams;
use crate::error::Error;
use crate::{Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    Left,
    Right,
}

/// Number of particles, chirality per site, and the coupling they share.
#[derive(Debug, Clone)]
pub struct ParticleConfig {
    chirality: Vec<Chirality>,
    pub coupling: CouplingParams,
}

impl ParticleConfig {
    pub fn new(chirality: Vec<Chirality>, coupling: CouplingParams) -> Result<Self> {
        if chirality.is_empty() || chirality.len() > 12 {
            return Err(Error::InvalidConfig(format!(
                "particle count {} outside 1..=12",
                chirality.len()
            )));
        }
        Ok(Self { chirality, coupling })
    }

    /// Standard layout: sites 0..n_left-1 left movers, the rest right movers.
    pub fn left_first(n: usize, n_left: usize, coupling: CouplingParams) -> Result<Self> {
        if n_left > n {
            return Err(Error::InvalidConfig(format!("n_left {n_left} exceeds n {n}")));
        }
        let chirality = (0..n)
            .map(|i| if i < n_left { Chirality::Left } else { Chirality::Right })
            .collect();
        Self::new(chirality, coupling)
    }

    /// Mirrored layout: sites 0..n_right-1 right movers, the rest left movers.
    pub fn right_first(n: usize, n_right: usize, coupling: CouplingParams) -> Result<Self> {
        if n_right > n {
            return Err(Error::InvalidConfig(format!("n_right {n_right} exceeds n {n}")));
        }
        let chirality = (0..n)
            .map(|i| if i < n_right { Chirality::Right } else { Chirality::Left })
            .collect();
        Self::new(chirality, coupling)
    }

    pub fn n(&self) -> usize {
        self.chirality.len()
    }

    pub fn n_left(&self) -> usize {
        self.chirality.iter().filter(|c| **c == Chirality::Left).count()
    }

    pub fn n_right(&self) -> usize {
        self.n() - self.n_left()
    }

    pub fn chirality(&self, site: usize) -> Chirality {
        self.chirality[site]
    }

    pub fn chiralities(&self) -> &[Chirality] {
        &self.chirality
    }

    pub fn is_left(&self, site: usize) -> bool {
        self.chirality[site] == Chirality::Left
    }
}

/// Positions and time, with light-cone coordinates derived on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicPoint {
    positions: Vec<f64>,
    time: f64,
}

impl KinematicPoint {
    /// Validates positions against the box [0, L].
    pub fn new(config: &ParticleConfig, positions: Vec<f64>, time: f64) -> Result<Self> {
        let length = config.coupling.length;
        if positions.len() != config.n() {
            return Err(Error::InvalidConfig(format!(
                "{} positions for {} particles",
                positions.len(),
                config.n()
            )));
        }
        for (i, &x) in positions.iter().enumerate() {
            if !(0.0..=length).contains(&x) {
                return Err(Error::OutOfBox { i, x, length });
            }
        }
        Ok(Self { positions, time })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// z_i = x_i - t for right movers, z̄_i = x_i + t for left movers.
    pub fn lightcone(&self, config: &ParticleConfig, site: usize) -> f64 {
        match config.chirality(site) {
            Chirality::Right => self.positions[site] - self.time,
            Chirality::Left => self.positions[site] + self.time,
        }
    }

    /// All light-cone coordinates in site order.
    pub fn lightcone_all(&self, config: &ParticleConfig) -> Vec<f64> {
        (0..config.n()).map(|i| self.lightcone(config, i)).collect()
    }
}

/// Light-cone coordinate vector (one entry per site, z or z̄ per chirality).
/// Transport and qKZ operators act on these directly, including at shifted
/// arguments that leave the box.
#[derive(Debug, Clone, PartialEq)]
pub struct LightconeCoords {
    pub u: Vec<C64>,
}

impl LightconeCoords {
    pub fn from_point(config: &ParticleConfig, point: &KinematicPoint) -> Self {
        Self {
            u: point
                .lightcone_all(config)
                .into_iter()
                .map(|x| C64::new(x, 0.0))
                .collect(),
        }
    }

    pub fn from_reals(u: &[f64]) -> Self {
        Self {
            u: u.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn shifted(&self, site: usize, delta: C64) -> Self {
        let mut u = self.u.clone();
        u[site] += delta;
        Self { u }
    }
}

/// A spatial ordering: word[k] is the label of the k-th particle from the
/// left. The reference ordering is (n-1, ..., 1, 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordering(pub Vec<usize>);

impl Ordering {
    pub fn reference(n: usize) -> Self {
        Ordering((0..n).rev().collect())
    }

    pub fn identity(n: usize) -> Self {
        Ordering((0..n).collect())
    }

    pub fn is_valid(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n];
        for &x in &self.0 {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    /// Ordering selected by sorting actual positions (ties are errors).
    pub fn from_positions(point: &KinematicPoint) -> Result<Self> {
        let xs = point.positions();
        let mut idx: Vec<usize> = (0..xs.len()).collect();
        idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("finite positions"));
        for w in idx.windows(2) {
            if (xs[w[0]] - xs[w[1]]).abs() < 1e-9 {
                return Err(Error::CoincidentPositions { i: w[0], j: w[1] });
            }
        }
        Ok(Ordering(idx))
    }

    pub fn position_of(&self, label: usize) -> usize {
        self.0.iter().position(|&x| x == label).expect("label present")
    }
}
