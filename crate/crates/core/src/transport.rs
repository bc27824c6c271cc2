//! Periodic-boundary transport.
//!
//! The operator Z_j carries particle j once around the system: the
//! reference amplitude obeys the matrix difference equation
//! f(..., u_j - L, ...) = Z_j f(..., u_j, ...). Z_j is assembled by a
//! word walk — move j from its reference slot to the right edge collecting
//! swap matrices at the unshifted point, move it in from the left edge
//! collecting swap matrices at u_j - L — which reproduces the closed
//! factor-string formula for right movers in the standard layout and
//! mechanically covers left movers and arbitrary layouts. With a constant
//! coupling the same walk degenerates to a transfer matrix built from
//! permutations and one constant S-matrix, and all transfer matrices
//! commute.

use crate::kinematics::{Chirality, LightconeCoords, Ordering, ParticleConfig};
use crate::linalg::{hermitian_eigen, DenseMatrix};
use crate::rng::SplitMix64;
use crate::scattering::{s_matrix_lr_profile, s_matrix_same, FProfile};
use crate::spin::{PairOperator, SpinVector};
use crate::{Result, C64};

/// Ordered product of embedded pair factors; the rightmost factor in
/// `factors` acts first.
#[derive(Debug, Clone)]
pub struct TransportOperator {
    n_sites: usize,
    factors: Vec<PairOperator>,
}

/// Constant-coupling transfer matrix (same representation; built from
/// permutations and a constant S-matrix).
pub type ConstantTransferMatrix = TransportOperator;

impl TransportOperator {
    pub fn identity(n_sites: usize) -> Self {
        Self {
            n_sites,
            factors: Vec::new(),
        }
    }

    pub fn from_factors(n_sites: usize, factors: Vec<PairOperator>) -> Self {
        Self { n_sites, factors }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[PairOperator] {
        &self.factors
    }

    pub fn apply(&self, v: &SpinVector) -> Result<SpinVector> {
        let mut out = v.clone();
        for f in self.factors.iter().rev() {
            out = f.apply(&out)?;
        }
        Ok(out)
    }

    pub fn scaled(mut self, s: C64) -> Self {
        if let Some(first) = self.factors.first_mut() {
            *first = first.scaled(s);
        } else {
            // scalar times the empty product: carry it as a scaled identity
            let id = PairOperator::identity(0, 1).expect("distinct sites").scaled(s);
            self.factors.push(id);
        }
        self
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let dim = 1usize << self.n_sites;
        let mut m = DenseMatrix::zeros(dim);
        for c in 0..dim {
            let col = self.apply(&SpinVector::basis_state(self.n_sites, c))?;
            for (r, amp) in col.amps().iter().enumerate() {
                m[(r, c)] = *amp;
            }
        }
        Ok(m)
    }

    /// Max-abs difference of the two operators' actions on the full basis.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for c in 0..1usize << self.n_sites {
            let v = SpinVector::basis_state(self.n_sites, c);
            worst = worst.max(self.apply(&v)?.sub(&other.apply(&v)?).max_abs());
        }
        Ok(worst)
    }
}

/// Swap-matrix source used by the word walk.
pub(crate) type SwapFn<'a> =
    dyn Fn(&LightconeCoords, usize, usize) -> Result<PairOperator> + 'a;

/// Assembles Z_j for the given reference ordering from a swap-matrix
/// source: factors as written, rightmost applied first.
pub(crate) fn word_walk(
    reference: &Ordering,
    j: usize,
    coords: &LightconeCoords,
    shift: C64,
    swap: &SwapFn,
) -> Result<Vec<PairOperator>> {
    let pos = reference.position_of(j);
    // outbound: j crosses everything to its right, at the unshifted point
    let mut outbound = Vec::new();
    for &e in &reference.0[pos + 1..] {
        outbound.push(swap(coords, j, e)?);
    }
    // inbound: j re-enters from the left edge, with u_j shifted by -L;
    // these are the inverted swaps of moving j leftward to the front
    let shifted = coords.shifted(j, shift);
    let mut factors = Vec::new();
    for &d in reference.0[..pos].iter().rev() {
        factors.push(swap(&shifted, d, j)?.inverse()?);
    }
    factors.extend(outbound.into_iter().rev());
    Ok(factors)
}

fn full_swap<'a>(config: &'a ParticleConfig, profile: FProfile) -> impl Fn(&LightconeCoords, usize, usize) -> Result<PairOperator> + 'a {
    move |coords: &LightconeCoords, a: usize, b: usize| -> Result<PairOperator> {
        let p = &config.coupling;
        match (config.chirality(a), config.chirality(b)) {
            (ca, cb) if ca == cb => s_matrix_same(p, a, b, coords.u[a], coords.u[b]),
            (Chirality::Right, Chirality::Left) => {
                s_matrix_lr_profile(p, a, b, coords.u[a], coords.u[b], profile)
            }
            _ => s_matrix_lr_profile(p, b, a, coords.u[b], coords.u[a], profile)?.inverse(),
        }
    }
}

/// Transport operator for particle j at the given kinematics, reference
/// ordering (n-1, ..., 0).
pub fn build_z(config: &ParticleConfig, coords: &LightconeCoords, j: usize) -> Result<TransportOperator> {
    build_z_with(config, coords, &Ordering::reference(config.n()), j, FProfile::Linear)
}

/// As [`build_z`] with an explicit reference ordering and f-profile
/// (the quadratic profile is the integrability-breaking negative control).
pub fn build_z_with(
    config: &ParticleConfig,
    coords: &LightconeCoords,
    reference: &Ordering,
    j: usize,
    profile: FProfile,
) -> Result<TransportOperator> {
    let shift = C64::new(-config.coupling.length, 0.0);
    let swap = full_swap(config, profile);
    let factors = word_walk(reference, j, coords, shift, &swap)?;
    Ok(TransportOperator::from_factors(config.n(), factors))
}

/// Residual of the double-transport consistency relation
/// Z_j(u_k - L) Z_k(u) = Z_k(u_j - L) Z_j(u).
pub fn transport_consistency(
    config: &ParticleConfig,
    coords: &LightconeCoords,
    j: usize,
    k: usize,
    profile: FProfile,
) -> Result<f64> {
    let l = C64::new(-config.coupling.length, 0.0);
    let reference = Ordering::reference(config.n());
    let zj = build_z_with(config, &coords.shifted(k, l), &reference, j, profile)?;
    let zk = build_z_with(config, coords, &reference, k, profile)?;
    let zk_shift = build_z_with(config, &coords.shifted(j, l), &reference, k, profile)?;
    let zj_plain = build_z_with(config, coords, &reference, j, profile)?;
    let mut worst: f64 = 0.0;
    for c in 0..1usize << config.n() {
        let v = SpinVector::basis_state(config.n(), c);
        let lhs = zj.apply(&zk.apply(&v)?)?;
        let rhs = zk_shift.apply(&zj_plain.apply(&v)?)?;
        worst = worst.max(lhs.sub(&rhs).max_abs());
    }
    Ok(worst)
}

/// Defect of the matrix difference equation for a candidate reference
/// amplitude: ||candidate(u_j - L) - Z_j candidate(u)||_inf.
pub fn pbc_residual(
    z: &TransportOperator,
    coords: &LightconeCoords,
    j: usize,
    length: f64,
    candidate: &dyn Fn(&LightconeCoords) -> Result<SpinVector>,
) -> Result<f64> {
    let lhs = candidate(&coords.shifted(j, C64::new(-length, 0.0)))?;
    let rhs = z.apply(&candidate(coords)?)?;
    Ok(lhs.sub(&rhs).max_abs())
}

/// Constant-coupling S-matrix between opposite chiralities. For g = 0 the
/// particles pass through freely and the matrix is the identity.
pub fn s_matrix_const(g: f64, site_a: usize, site_b: usize) -> Result<PairOperator> {
    if g == 0.0 {
        return PairOperator::identity(site_a, site_b);
    }
    let i = C64::new(0.0, 1.0);
    let gc = C64::new(g, 0.0);
    let f = (1.0 - 0.75 * gc * gc) / (2.0 * gc);
    let phase = (2.0 * i * gc - 1.0 + 0.75 * gc * gc) / (i * gc - (1.0 + 0.75 * gc * gc));
    let p = PairOperator::permutation(site_a, site_b)?;
    let den = i * f + 1.0;
    let mut m = crate::linalg::mat4_scale(&crate::linalg::mat4_identity(), i * f);
    for r in 0..4 {
        for c in 0..4 {
            m[r][c] += p.mat()[r][c];
            m[r][c] = m[r][c] / den * phase;
        }
    }
    PairOperator::new(site_a, site_b, m)
}

fn const_swap<'a>(config: &'a ParticleConfig, g: f64) -> impl Fn(&LightconeCoords, usize, usize) -> Result<PairOperator> + 'a {
    move |_coords: &LightconeCoords, a: usize, b: usize| -> Result<PairOperator> {
        match (config.chirality(a), config.chirality(b)) {
            (ca, cb) if ca == cb => PairOperator::permutation(a, b),
            (Chirality::Right, Chirality::Left) => s_matrix_const(g, a, b),
            _ => s_matrix_const(g, b, a)?.inverse(),
        }
    }
}

/// Constant-coupling transfer matrix for particle j (any chirality, any
/// layout), reference ordering (n-1, ..., 0). For a right mover j in the
/// right-first layout this is the permutation/constant-S factor string
/// P^{j,j+1}..P^{j,nR-1} S^{j,nR}..S^{j,n-1} P^{j,0}..P^{j,j-1}.
pub fn build_z_constant(config: &ParticleConfig, g: f64, j: usize) -> Result<ConstantTransferMatrix> {
    let coords = LightconeCoords::from_reals(&vec![0.0; config.n()]);
    let swap = const_swap(config, g);
    let factors = word_walk(
        &Ordering::reference(config.n()),
        j,
        &coords,
        C64::new(0.0, 0.0),
        &swap,
    )?;
    Ok(TransportOperator::from_factors(config.n(), factors))
}

/// E = sum of right-mover momenta minus sum of left-mover momenta.
pub fn energy_constant(config: &ParticleConfig, momenta: &[f64]) -> f64 {
    momenta
        .iter()
        .enumerate()
        .map(|(i, &k)| match config.chirality(i) {
            Chirality::Right => k,
            Chirality::Left => -k,
        })
        .sum()
}

/// Simultaneous eigenbasis of a commuting family, found by diagonalizing a
/// random Hermitian combination; returns (vectors as columns, eigenvalue
/// table eigen[op][vector], worst per-pair residual ||Z v - lambda v||).
pub fn common_eigenbasis(
    ops: &[DenseMatrix],
    seed: u64,
) -> (DenseMatrix, Vec<Vec<C64>>, f64) {
    let dim = ops[0].dim;
    let mut rng = SplitMix64::new(seed);
    let mut herm = DenseMatrix::zeros(dim);
    for z in ops {
        let zdag = z.adjoint();
        let (c1, c2) = (rng.uniform(0.3, 1.0), rng.uniform(0.3, 1.0));
        for i in 0..dim {
            for j in 0..dim {
                let re = (z[(i, j)] + zdag[(i, j)]) * 0.5;
                let im = (z[(i, j)] - zdag[(i, j)]) * C64::new(0.0, -0.5);
                herm[(i, j)] += re * c1 + im * c2;
            }
        }
    }
    let (_, vecs) = hermitian_eigen(&herm);
    let mut table = Vec::new();
    let mut worst: f64 = 0.0;
    for z in ops {
        let mut row = Vec::new();
        for k in 0..dim {
            let v: Vec<C64> = (0..dim).map(|i| vecs[(i, k)]).collect();
            let zv = z.apply(&v);
            let lam: C64 = v.iter().zip(zv.iter()).map(|(a, b)| a.conj() * b).sum();
            let res = zv
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - lam * b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(res);
            row.push(lam);
        }
        table.push(row);
    }
    (vecs, table, worst)
}

/// Commutator magnitude ||[A, B]||_max for dense operators.
pub fn commutator_norm(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.mul(b).sub(&b.mul(a)).max_abs()
}

/// Candidate amplitude of plane-wave type: prod_j lambda_j^{-u_j / L}
/// times a fixed spin vector; satisfies f(u_j - L) = lambda_j f(u).
pub fn plane_wave_candidate(
    eigenvalues: Vec<C64>,
    length: f64,
    spin: SpinVector,
) -> impl Fn(&LightconeCoords) -> Result<SpinVector> {
    move |coords: &LightconeCoords| {
        let mut scale = C64::new(1.0, 0.0);
        for (j, lam) in eigenvalues.iter().enumerate() {
            scale *= (-coords.u[j] / length * lam.ln()).exp();
        }
        Ok(spin.scaled(scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::CouplingParams;
    use crate::scattering::s_matrix_lr;

    fn coupling() -> CouplingParams {
        CouplingParams::real(1.0, 0.3, 1.7).unwrap()
    }

    fn rand_coords(n: usize, seed: u64) -> LightconeCoords {
        let mut rng = SplitMix64::new(seed);
        LightconeCoords::from_reals(&(0..n).map(|_| rng.uniform(-3.0, 3.0)).collect::<Vec<_>>())
    }

    #[test]
    fn two_particle_transport_is_single_s_matrix() {
        // standard layout: site 0 = L, site 1 = R; Z_1 = S^{10}(z_1, z̄_0)
        let cfg = ParticleConfig::left_first(2, 1, coupling()).unwrap();
        let coords = rand_coords(2, 5);
        let z = build_z(&cfg, &coords, 1).unwrap();
        assert_eq!(z.factor_count(), 1);
        let expect = s_matrix_lr(&cfg.coupling, 1, 0, coords.u[1], coords.u[0]).unwrap();
        assert!(z.factors()[0].max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn matches_closed_factor_string_standard_layout() {
        // n = 4, left movers 0,1; right movers 2,3: for right mover j the
        // closed form is S'^{j,k>j}(u_j, u_k + L) .. S^{j,left}(u_j, u_k) ..
        // S'^{j, right k<j}(u_j, u_k), rightmost first.
        let cfg = ParticleConfig::left_first(4, 2, coupling()).unwrap();
        let coords = rand_coords(4, 11);
        let l = cfg.coupling.length;
        for j in [2usize, 3] {
            let z = build_z(&cfg, &coords, j).unwrap();
            assert_eq!(z.factor_count(), 3);
            let mut expect = Vec::new();
            for k in (j + 1)..4 {
                expect.push(
                    s_matrix_same(&cfg.coupling, j, k, coords.u[j], coords.u[k] + l).unwrap(),
                );
            }
            for k in 0..2 {
                expect.push(s_matrix_lr(&cfg.coupling, j, k, coords.u[j], coords.u[k]).unwrap());
            }
            for k in 2..j {
                expect.push(s_matrix_same(&cfg.coupling, j, k, coords.u[j], coords.u[k]).unwrap());
            }
            let ze = TransportOperator::from_factors(4, expect);
            assert!(z.max_abs_diff(&ze).unwrap() < 1e-13);
        }
    }

    #[test]
    fn three_particle_worked_example() {
        // labels (0=R, 1=L, 2=L) with reference word (0,1,2):
        // Z_0 = S^{02}(z_0, z̄_2) S^{01}(z_0, z̄_1), rightmost first
        let cfg = ParticleConfig::right_first(3, 1, coupling()).unwrap();
        let coords = rand_coords(3, 21);
        let z = build_z_with(
            &cfg,
            &coords,
            &Ordering(vec![0, 1, 2]),
            0,
            FProfile::Linear,
        )
        .unwrap();
        let expect = TransportOperator::from_factors(
            3,
            vec![
                s_matrix_lr(&cfg.coupling, 0, 2, coords.u[0], coords.u[2]).unwrap(),
                s_matrix_lr(&cfg.coupling, 0, 1, coords.u[0], coords.u[1]).unwrap(),
            ],
        );
        assert!(z.max_abs_diff(&expect).unwrap() < 1e-13);
    }

    #[test]
    fn transport_commutes_with_symmetries() {
        let cfg = ParticleConfig::left_first(3, 1, coupling()).unwrap();
        let coords = rand_coords(3, 31);
        let z = build_z(&cfg, &coords, 2).unwrap();
        for idx in 0..8usize {
            let v = SpinVector::basis_state(3, idx);
            let a = z.apply(&v.apply_total_sz()).unwrap();
            let b = z.apply(&v).unwrap().apply_total_sz();
            assert!(a.sub(&b).max_abs() < 1e-13);
            let fa = z.apply(&v.spin_flipped()).unwrap();
            let fb = z.apply(&v).unwrap().spin_flipped();
            assert!(fa.sub(&fb).max_abs() < 1e-13);
        }
    }

    #[test]
    fn consistency_relation_holds_and_breaks() {
        let cfg = ParticleConfig::left_first(3, 2, coupling()).unwrap();
        let coords = rand_coords(3, 41);
        for (j, k) in [(2usize, 1usize), (0, 1), (2, 0)] {
            let res = transport_consistency(&cfg, &coords, j, k, FProfile::Linear).unwrap();
            assert!(res < 1e-10, "({j},{k}) residual {res}");
        }
        let cfg4 = ParticleConfig::left_first(4, 2, coupling()).unwrap();
        let coords4 = rand_coords(4, 43);
        for (j, k) in [(2usize, 3usize), (0, 3), (1, 0)] {
            let res = transport_consistency(&cfg4, &coords4, j, k, FProfile::Linear).unwrap();
            assert!(res < 1e-10, "({j},{k}) residual {res}");
        }
        let broken = transport_consistency(&cfg4, &coords4, 2, 3, FProfile::Quadratic).unwrap();
        assert!(broken > 1e-3, "negative control too small: {broken}");
    }

    #[test]
    fn single_particle_pbc_is_periodicity() {
        let cfg = ParticleConfig::left_first(1, 0, coupling()).unwrap();
        let coords = LightconeCoords::from_reals(&[0.4]);
        let z = build_z(&cfg, &coords, 0).unwrap();
        assert_eq!(z.factor_count(), 0);
        let l = cfg.coupling.length;
        let periodic = move |u: &LightconeCoords| -> Result<SpinVector> {
            let mut v = SpinVector::zeros(1);
            let k = 2.0 * std::f64::consts::PI / l;
            v.amps_mut()[0] = (C64::new(0.0, k) * u.u[0]).exp();
            v.amps_mut()[1] = (C64::new(0.0, 2.0 * k) * u.u[0]).exp();
            Ok(v)
        };
        let res = pbc_residual(&z, &coords, 0, l, &periodic).unwrap();
        assert!(res < 1e-12);
    }

    #[test]
    fn constant_transfer_matrices_commute() {
        let g = 0.7;
        let cfg = ParticleConfig::right_first(4, 2, coupling()).unwrap();
        let zs: Vec<DenseMatrix> = (0..4)
            .map(|j| build_z_constant(&cfg, g, j).unwrap().to_dense().unwrap())
            .collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let c = commutator_norm(&zs[i], &zs[j]);
                assert!(c < 1e-12, "[Z{i}, Z{j}] = {c}");
            }
        }
    }

    #[test]
    fn constant_literal_string_right_first() {
        // right-first layout, j right mover: P-head, S-middle, P-tail
        let g = 0.9;
        let cfg = ParticleConfig::right_first(4, 2, coupling()).unwrap();
        let j = 1usize;
        let z = build_z_constant(&cfg, g, j).unwrap();
        let mut factors = Vec::new();
        // hmm: no P-head here since n_right = 2 and j = 1 is last right mover
        for k in 2..4 {
            factors.push(s_matrix_const(g, j, k).unwrap());
        }
        factors.push(PairOperator::permutation(j, 0).unwrap());
        let expect = TransportOperator::from_factors(4, factors);
        assert!(z.max_abs_diff(&expect).unwrap() < 1e-13);
        // with a P-head: n_right = 3, j = 1
        let cfg = ParticleConfig::right_first(4, 3, coupling()).unwrap();
        let z = build_z_constant(&cfg, g, 1).unwrap();
        let expect = TransportOperator::from_factors(
            4,
            vec![
                PairOperator::permutation(1, 2).unwrap(),
                s_matrix_const(g, 1, 3).unwrap(),
                PairOperator::permutation(1, 0).unwrap(),
            ],
        );
        assert!(z.max_abs_diff(&expect).unwrap() < 1e-13);
    }

    #[test]
    fn constant_transfer_matrices_commute_n5_and_share_eigenvectors() {
        let cfg = ParticleConfig::right_first(5, 3, coupling()).unwrap();
        for g in [0.4, 1.1] {
            let zs: Vec<DenseMatrix> = (0..5)
                .map(|j| build_z_constant(&cfg, g, j).unwrap().to_dense().unwrap())
                .collect();
            for i in 0..5 {
                for j in (i + 1)..5 {
                    assert!(commutator_norm(&zs[i], &zs[j]) < 1e-12, "g={g} [{i},{j}]");
                }
            }
        }
        // simultaneous diagonalization at N = 4
        let cfg4 = ParticleConfig::right_first(4, 2, coupling()).unwrap();
        let zs: Vec<DenseMatrix> = (0..4)
            .map(|j| build_z_constant(&cfg4, 0.7, j).unwrap().to_dense().unwrap())
            .collect();
        let (_, _, worst) = common_eigenbasis(&zs, 11);
        assert!(worst < 1e-9, "common eigenvector residual {worst}");
    }

    #[test]
    fn free_limit_is_permutation_with_unimodular_spectrum() {
        let cfg = ParticleConfig::right_first(3, 3, coupling()).unwrap();
        let z = build_z_constant(&cfg, 0.0, 0).unwrap().to_dense().unwrap();
        let (_, table, worst) = common_eigenbasis(&[z], 3);
        assert!(worst < 1e-9);
        for lam in &table[0] {
            assert!((lam.norm() - 1.0).abs() < 1e-9);
            let mut pow = C64::new(1.0, 0.0);
            for _ in 0..6 {
                pow *= lam;
            }
            assert!((pow - C64::new(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn n2_diagonalization_and_difference_equation() {
        let g = 0.6;
        let cfg = ParticleConfig::right_first(2, 1, coupling()).unwrap();
        let l = cfg.coupling.length;
        let z0 = build_z_constant(&cfg, g, 0).unwrap();
        let z1 = build_z_constant(&cfg, g, 1).unwrap();
        let d0 = z0.to_dense().unwrap();
        let d1 = z1.to_dense().unwrap();
        let (vecs, table, worst) = common_eigenbasis(&[d0, d1], 7);
        assert!(worst < 1e-9, "common eigenbasis residual {worst}");
        for k in 0..4 {
            // unimodular eigenvalues for real g
            assert!((table[0][k].norm() - 1.0).abs() < 1e-12);
            assert!((table[1][k].norm() - 1.0).abs() < 1e-12);
            let spin = SpinVector::new(2, (0..4).map(|i| vecs[(i, k)]).collect()).unwrap();
            let cand = plane_wave_candidate(vec![table[0][k], table[1][k]], l, spin);
            let coords = rand_coords(2, 100 + k as u64);
            for j in 0..2 {
                let z = if j == 0 { &z0 } else { &z1 };
                let res = pbc_residual(z, &coords, j, l, &cand).unwrap();
                assert!(res < 1e-10, "k={k} j={j} residual {res}");
            }
        }
    }

    #[test]
    fn energy_examples() {
        let cfg_rl = ParticleConfig::right_first(2, 1, coupling()).unwrap();
        assert_eq!(energy_constant(&cfg_rl, &[1.0, 2.0]), -1.0);
        assert_eq!(energy_constant(&cfg_rl, &[0.0, 0.0]), 0.0);
        let cfg = ParticleConfig::right_first(3, 1, coupling()).unwrap();
        assert_eq!(energy_constant(&cfg, &[3.0, 1.0, 1.0]), 1.0);
    }
}
