//! Tensor-product spin-1/2 algebra.
//!
//! Basis convention, fixed globally: a state of `n` sites is indexed by an
//! integer whose bit (n-1-k) holds site k, with ↑ = 0 and ↓ = 1, so the
//! basis is ordered lexicographically with site 0 most significant and
//! ↑ before ↓. A [`PairOperator`] stores a 4x4 matrix in the ordered basis
//! {↑↑, ↑↓, ↓↑, ↓↓} of its (site_a, site_b) pair and is applied matrix-free
//! by iterating over basis-index bit patterns, so the full 2^n x 2^n
//! operator is never materialized.

use crate::error::Error;
use crate::linalg::{
    mat4_identity, mat4_inverse, mat4_max_abs, mat4_mul, mat4_scale, mat4_sub, mat4_zero,
    DenseMatrix, Mat4,
};
use crate::{Result, C64};

/// Complex amplitude vector over the 2^n spin basis of n spin-1/2 sites.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinVector {
    n_sites: usize,
    amps: Vec<C64>,
}

impl SpinVector {
    pub fn new(n_sites: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1 << n_sites {
            return Err(Error::DimensionMismatch {
                len: amps.len(),
                n_sites,
            });
        }
        Ok(Self { n_sites, amps })
    }

    pub fn zeros(n_sites: usize) -> Self {
        Self {
            n_sites,
            amps: vec![C64::new(0.0, 0.0); 1 << n_sites],
        }
    }

    /// Computational basis state from a ↓-mask (bit set = site flipped down).
    pub fn basis_state(n_sites: usize, index: usize) -> Self {
        let mut v = Self::zeros(n_sites);
        v.amps[index] = C64::new(1.0, 0.0);
        v
    }

    /// The all-up product state.
    pub fn all_up(n_sites: usize) -> Self {
        Self::basis_state(n_sites, 0)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm().powi(2) - 1.0).abs() < 1e-12
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self
                .amps
                .iter()
                .zip(other.amps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self
                .amps
                .iter()
                .zip(other.amps.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, s: C64) {
        for (a, b) in self.amps.iter_mut().zip(other.amps.iter()) {
            *a += s * b;
        }
    }

    /// Total S^z expectation basis-wise: diagonal value for basis index.
    pub fn sz_of_index(n_sites: usize, index: usize) -> f64 {
        let flips = (index & ((1 << n_sites) - 1)).count_ones() as f64;
        n_sites as f64 / 2.0 - flips
    }

    /// Mass (max |amplitude|) outside the sector with `m` flipped spins.
    pub fn off_sector_mass(&self, m: u32) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i as u64).count_ones() != m)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max)
    }

    /// Applies the global spin flip (σ^x on every site).
    pub fn spin_flipped(&self) -> Self {
        let mask = (1 << self.n_sites) - 1;
        let mut out = Self::zeros(self.n_sites);
        for (i, a) in self.amps.iter().enumerate() {
            out.amps[i ^ mask] = *a;
        }
        out
    }

    /// Applies the diagonal total-S^z operator.
    pub fn apply_total_sz(&self) -> Self {
        let mut out = self.clone();
        for (i, a) in out.amps.iter_mut().enumerate() {
            *a *= C64::new(Self::sz_of_index(self.n_sites, i), 0.0);
        }
        out
    }

    /// Permutes site contents: site k of the output holds site perm[k] of self.
    pub fn permute_sites(&self, perm: &[usize]) -> Self {
        let n = self.n_sites;
        let mut out = Self::zeros(n);
        for (i, a) in self.amps.iter().enumerate() {
            let mut j = 0usize;
            for k in 0..n {
                let src_bit = (i >> (n - 1 - perm[k])) & 1;
                j |= src_bit << (n - 1 - k);
            }
            out.amps[j] += a;
        }
        out
    }
}

/// 4x4 complex operator on the spin spaces of two named sites.
#[derive(Debug, Clone, PartialEq)]
pub struct PairOperator {
    site_a: usize,
    site_b: usize,
    mat: Mat4,
}

impl PairOperator {
    pub fn new(site_a: usize, site_b: usize, mat: Mat4) -> Result<Self> {
        if site_a == site_b {
            return Err(Error::DuplicateSite(site_a));
        }
        Ok(Self { site_a, site_b, mat })
    }

    pub fn sites(&self) -> (usize, usize) {
        (self.site_a, self.site_b)
    }

    pub fn mat(&self) -> &Mat4 {
        &self.mat
    }

    /// Identity on the pair.
    pub fn identity(site_a: usize, site_b: usize) -> Result<Self> {
        Self::new(site_a, site_b, mat4_identity())
    }

    /// The operator exchanging the two spin factors: P|ab⟩ = |ba⟩.
    pub fn permutation(site_a: usize, site_b: usize) -> Result<Self> {
        let mut m = mat4_zero();
        let one = C64::new(1.0, 0.0);
        m[0][0] = one;
        m[1][2] = one;
        m[2][1] = one;
        m[3][3] = one;
        Self::new(site_a, site_b, m)
    }

    /// σ^x⊗σ^x + σ^y⊗σ^y + σ^z⊗σ^z on the pair. Equals 2P - I.
    pub fn sigma_dot_sigma(site_a: usize, site_b: usize) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        let two = C64::new(2.0, 0.0);
        let mut m = mat4_zero();
        m[0][0] = one;
        m[3][3] = one;
        m[1][1] = -one;
        m[2][2] = -one;
        m[1][2] = two;
        m[2][1] = two;
        Self::new(site_a, site_b, m)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            site_a: self.site_a,
            site_b: self.site_b,
            mat: mat4_scale(&self.mat, s),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            site_a: self.site_a,
            site_b: self.site_b,
            mat: mat4_inverse(&self.mat)?,
        })
    }

    /// Rewrites the operator in the frame where the two site roles are
    /// swapped: the same physical operator labelled (site_b, site_a).
    pub fn swapped_frame(&self) -> Self {
        let p = {
            let mut m = mat4_zero();
            let one = C64::new(1.0, 0.0);
            m[0][0] = one;
            m[1][2] = one;
            m[2][1] = one;
            m[3][3] = one;
            m
        };
        Self {
            site_a: self.site_b,
            site_b: self.site_a,
            mat: mat4_mul(&p, &mat4_mul(&self.mat, &p)),
        }
    }

    /// Composition self · other of operators on the same site pair.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let rhs = if (other.site_a, other.site_b) == (self.site_a, self.site_b) {
            other.clone()
        } else if (other.site_b, other.site_a) == (self.site_a, self.site_b) {
            other.swapped_frame()
        } else {
            return Err(Error::InvalidConfig(format!(
                "cannot compose operators on pairs {:?} and {:?}",
                (self.site_a, self.site_b),
                (other.site_a, other.site_b)
            )));
        };
        Ok(Self {
            site_a: self.site_a,
            site_b: self.site_b,
            mat: mat4_mul(&self.mat, &rhs.mat),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let rhs = if (other.site_a, other.site_b) == (self.site_a, self.site_b) {
            other.clone()
        } else {
            other.swapped_frame()
        };
        mat4_max_abs(&mat4_sub(&self.mat, &rhs.mat))
    }

    /// Applies the operator, embedded as identity on all other sites.
    pub fn apply(&self, v: &SpinVector) -> Result<SpinVector> {
        let n = v.n_sites();
        for site in [self.site_a, self.site_b] {
            if site >= n {
                return Err(Error::SiteOutOfRange { site, n_sites: n });
            }
        }
        let sa = n - 1 - self.site_a;
        let sb = n - 1 - self.site_b;
        let mut out = SpinVector::zeros(n);
        let amps = v.amps();
        for i in 0..v.dim() {
            let r = (((i >> sa) & 1) << 1) | ((i >> sb) & 1);
            let base = i & !(1 << sa) & !(1 << sb);
            let mut acc = C64::new(0.0, 0.0);
            for (rp, &m) in self.mat[r].iter().enumerate() {
                if m == C64::new(0.0, 0.0) {
                    continue;
                }
                let j = base | ((rp >> 1) << sa) | ((rp & 1) << sb);
                acc += m * amps[j];
            }
            out.amps_mut()[i] = acc;
        }
        Ok(out)
    }

    /// Off-block mass with respect to the pair total-S^z decomposition
    /// {↑↑} ⊕ {↑↓, ↓↑} ⊕ {↓↓}.
    pub fn sz_off_block_mass(&self) -> f64 {
        let block = |r: usize| -> u32 { ((r >> 1) + (r & 1)) as u32 };
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                if block(r) != block(c) {
                    worst = worst.max(self.mat[r][c].norm());
                }
            }
        }
        worst
    }

    /// Materializes the embedded operator (test/diagnostic use; desk scale).
    pub fn to_dense(&self, n_sites: usize) -> Result<DenseMatrix> {
        let dim = 1 << n_sites;
        let mut m = DenseMatrix::zeros(dim);
        for c in 0..dim {
            let col = self.apply(&SpinVector::basis_state(n_sites, c))?;
            for (r, amp) in col.amps().iter().enumerate() {
                m[(r, c)] = *amp;
            }
        }
        Ok(m)
    }
}

/// Scalar ratio b/a if b = s·a elementwise; errors when the ratio is not
/// element-independent within `tol` (relative spread across elements).
pub fn proportionality_ratio(num: &Mat4, den: &Mat4, tol: f64) -> Result<C64> {
    proportionality_with_spread(num, den, tol).map(|(r, _)| r)
}

/// As [`proportionality_ratio`], also returning the measured spread.
pub fn proportionality_with_spread(num: &Mat4, den: &Mat4, tol: f64) -> Result<(C64, f64)> {
    let scale = mat4_max_abs(den);
    let mut ratio: Option<C64> = None;
    let mut spread: f64 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            if den[r][c].norm() > 1e-10 * scale {
                let s = num[r][c] / den[r][c];
                if let Some(r0) = ratio {
                    spread = spread.max((s - r0).norm() / r0.norm().max(1e-300));
                } else {
                    ratio = Some(s);
                }
            } else if num[r][c].norm() > tol * scale {
                return Err(Error::NotProportional {
                    spread: num[r][c].norm() / scale,
                });
            }
        }
    }
    let r0 = ratio.ok_or(Error::NotProportional { spread: f64::MAX })?;
    if spread > tol {
        return Err(Error::NotProportional { spread });
    }
    Ok((r0, spread))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_vec(n: usize, seed: u64) -> SpinVector {
        let mut rng = SplitMix64::new(seed);
        let amps = (0..1usize << n)
            .map(|_| C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            .collect();
        SpinVector::new(n, amps).unwrap()
    }

    fn random_pair(a: usize, b: usize, seed: u64) -> PairOperator {
        let mut rng = SplitMix64::new(seed);
        let mut m = mat4_zero();
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v = C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            }
        }
        PairOperator::new(a, b, m).unwrap()
    }

    #[test]
    fn permutation_swaps_up_down() {
        // |↑↓⟩ on sites (0,1) of a 2-site system is index 0b01
        let p = PairOperator::permutation(0, 1).unwrap();
        let v = SpinVector::basis_state(2, 0b01);
        let w = p.apply(&v).unwrap();
        assert_eq!(w.amps()[0b10], C64::new(1.0, 0.0));
        assert_eq!(w.amps()[0b01], C64::new(0.0, 0.0));
    }

    #[test]
    fn permutation_is_involution() {
        let p = PairOperator::permutation(0, 1).unwrap();
        let pp = p.compose(&p).unwrap();
        assert!(pp.max_abs_diff(&PairOperator::identity(0, 1).unwrap()) < 1e-15);
    }

    #[test]
    fn embedded_permutation_three_sites() {
        // P on sites (0,1) applied to |↑↓↑⟩ = index 0b010 gives |↓↑↑⟩ = 0b100
        let p = PairOperator::permutation(0, 1).unwrap();
        let w = p.apply(&SpinVector::basis_state(3, 0b010)).unwrap();
        assert_eq!(w.amps()[0b100], C64::new(1.0, 0.0));
        // P on sites (0,2) applied to |↑↑↓⟩ = 0b001 gives |↓↑↑⟩ = 0b100
        let p02 = PairOperator::permutation(0, 2).unwrap();
        let w = p02.apply(&SpinVector::basis_state(3, 0b001)).unwrap();
        assert_eq!(w.amps()[0b100], C64::new(1.0, 0.0));
    }

    #[test]
    fn sigma_dot_sigma_eigenvalues() {
        let op = PairOperator::sigma_dot_sigma(0, 1).unwrap();
        // singlet (|↑↓⟩ - |↓↑⟩)/√2 → eigenvalue -3
        let s = 0.5f64.sqrt();
        let mut singlet = SpinVector::zeros(2);
        singlet.amps_mut()[0b01] = C64::new(s, 0.0);
        singlet.amps_mut()[0b10] = C64::new(-s, 0.0);
        let w = op.apply(&singlet).unwrap();
        assert!(w.sub(&singlet.scaled(C64::new(-3.0, 0.0))).max_abs() < 1e-14);
        // |↑↑⟩ → +1
        let up = SpinVector::basis_state(2, 0);
        let w = op.apply(&up).unwrap();
        assert!(w.sub(&up).max_abs() < 1e-15);
    }

    #[test]
    fn sigma_dot_sigma_is_two_p_minus_i() {
        let ss = PairOperator::sigma_dot_sigma(0, 1).unwrap();
        let p = PairOperator::permutation(0, 1).unwrap();
        let two_p_minus_i = PairOperator::new(
            0,
            1,
            mat4_sub(&mat4_scale(p.mat(), C64::new(2.0, 0.0)), &mat4_identity()),
        )
        .unwrap();
        assert!(ss.max_abs_diff(&two_p_minus_i) < 1e-15);
    }

    #[test]
    fn embed_identity_acts_as_identity() {
        let id = PairOperator::identity(1, 3).unwrap();
        let v = random_vec(4, 3);
        assert!(id.apply(&v).unwrap().sub(&v).max_abs() < 1e-15);
    }

    #[test]
    fn disjoint_embeddings_commute() {
        for seed in 0..100u64 {
            let a = random_pair(0, 1, 1000 + seed);
            let b = random_pair(2, 3, 2000 + seed);
            let v = random_vec(4 + (seed % 3) as usize, 300 + seed);
            let ab = b.apply(&a.apply(&v).unwrap()).unwrap();
            let ba = a.apply(&b.apply(&v).unwrap()).unwrap();
            assert!(ab.sub(&ba).max_abs() < 1e-13);
        }
    }

    #[test]
    fn embedding_preserves_composition() {
        for seed in 0..50u64 {
            let a = random_pair(1, 3, 10 + seed);
            let b = random_pair(1, 3, 90 + seed);
            let v = random_vec(4, 500 + seed);
            let composed = a.compose(&b).unwrap().apply(&v).unwrap();
            let sequential = a.apply(&b.apply(&v).unwrap()).unwrap();
            assert!(composed.sub(&sequential).max_abs() < 1e-13);
        }
    }

    #[test]
    fn swapped_frame_consistency() {
        let a = random_pair(0, 2, 7);
        let v = random_vec(3, 8);
        let d = a
            .swapped_frame()
            .apply(&v)
            .unwrap()
            .sub(&a.apply(&v).unwrap())
            .max_abs();
        assert!(d < 1e-14);
    }

    #[test]
    fn site_bounds_checked() {
        let p = PairOperator::permutation(0, 5).unwrap();
        assert!(p.apply(&SpinVector::zeros(3)).is_err());
        assert!(PairOperator::permutation(2, 2).is_err());
    }

    #[test]
    fn proportionality_detects_scalar_multiples() {
        let a = random_pair(0, 1, 21);
        let s = C64::new(0.4, -1.1);
        let b = a.scaled(s);
        let r = proportionality_ratio(b.mat(), a.mat(), 1e-11).unwrap();
        assert!((r - s).norm() < 1e-13);
        let mut broken = *b.mat();
        broken[2][1] += C64::new(0.01, 0.0);
        assert!(proportionality_ratio(&broken, a.mat(), 1e-11).is_err());
    }

    #[test]
    fn sector_and_flip_helpers() {
        let v = SpinVector::basis_state(3, 0b010);
        assert_eq!(v.off_sector_mass(1), 0.0);
        assert!(v.off_sector_mass(0) > 0.0);
        let f = v.spin_flipped();
        assert_eq!(f.amps()[0b101], C64::new(1.0, 0.0));
        assert_eq!(SpinVector::sz_of_index(3, 0b010), 0.5);
    }
}
