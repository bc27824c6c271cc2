//! Bethe-type amplitude assembly.
//!
//! The wavefunction is a sum over spatial orderings Q of amplitudes
//! f^Q(z̄, z), each a vector in spin space. Swapping two adjacent particles
//! multiplies the amplitude by a two-site scattering matrix, so every
//! ordering is generated from one free amplitude stored at the reference
//! ordering (n-1, ..., 0). The Yang-Baxter algebra makes the result
//! independent of the chosen transposition path, which is what the
//! path-independence checks exercise.

use std::collections::HashMap;

use crate::error::Error;
use crate::kinematics::{Chirality, KinematicPoint, LightconeCoords, Ordering, ParticleConfig};
use crate::scattering::{s_matrix_lr, s_matrix_same};
use crate::spin::{PairOperator, SpinVector};
use crate::{Result, C64};

/// The matrix M with f^{...ba...} = M f^{...ab...} for adjacent particles
/// a, b (a currently to the left of b), at the given light-cone coordinates.
pub fn swap_matrix(
    config: &ParticleConfig,
    coords: &LightconeCoords,
    a: usize,
    b: usize,
) -> Result<PairOperator> {
    let p = &config.coupling;
    match (config.chirality(a), config.chirality(b)) {
        (ca, cb) if ca == cb => s_matrix_same(p, a, b, coords.u[a], coords.u[b]),
        (Chirality::Right, Chirality::Left) => s_matrix_lr(p, a, b, coords.u[a], coords.u[b]),
        // left mover passing a right mover: the inverse of the reverse swap
        _ => s_matrix_lr(p, b, a, coords.u[b], coords.u[a])?.inverse(),
    }
}

/// S-matrix relating the amplitude of `ordering` to the one with the
/// adjacent pair at positions (k, k+1) swapped.
pub fn neighbor_smatrix(
    config: &ParticleConfig,
    coords: &LightconeCoords,
    ordering: &Ordering,
    k: usize,
) -> Result<PairOperator> {
    let a = ordering.0[k];
    let b = ordering.0[k + 1];
    swap_matrix(config, coords, a, b)
}

/// Deterministic decompositions of the rearrangement from one ordering to
/// another into adjacent transpositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStrategy {
    BubbleSort,
    InsertionSort,
}

/// Sequence of adjacent swap positions carrying `from` into `to`.
pub fn transposition_path(from: &Ordering, to: &Ordering, strategy: PathStrategy) -> Vec<usize> {
    let n = from.0.len();
    let mut rank = vec![0usize; n];
    for (pos, &label) in to.0.iter().enumerate() {
        rank[label] = pos;
    }
    let mut word = from.0.clone();
    let mut swaps = Vec::new();
    match strategy {
        PathStrategy::BubbleSort => loop {
            let mut changed = false;
            for k in 0..n.saturating_sub(1) {
                if rank[word[k]] > rank[word[k + 1]] {
                    swaps.push(k);
                    word.swap(k, k + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        },
        PathStrategy::InsertionSort => {
            for i in 1..n {
                let mut j = i;
                while j > 0 && rank[word[j - 1]] > rank[word[j]] {
                    swaps.push(j - 1);
                    word.swap(j - 1, j);
                    j -= 1;
                }
            }
        }
    }
    debug_assert_eq!(word, to.0);
    swaps
}

/// Applies the swap sequence to a seed amplitude stored at `from`.
pub fn apply_path(
    config: &ParticleConfig,
    coords: &LightconeCoords,
    from: &Ordering,
    swaps: &[usize],
    seed: &SpinVector,
) -> Result<SpinVector> {
    let mut word = from.0.clone();
    let mut v = seed.clone();
    for &k in swaps {
        let m = swap_matrix(config, coords, word[k], word[k + 1])?;
        v = m.apply(&v)?;
        word.swap(k, k + 1);
    }
    Ok(v)
}

/// Amplitude at `target`, generated from the seed at the reference
/// ordering along the given path strategy. Path independence is a
/// consequence of the Yang-Baxter algebra and is tested, not assumed.
pub fn amplitude_for_ordering(
    config: &ParticleConfig,
    coords: &LightconeCoords,
    seed: &SpinVector,
    target: &Ordering,
    strategy: PathStrategy,
) -> Result<SpinVector> {
    let reference = Ordering::reference(config.n());
    let swaps = transposition_path(&reference, target, strategy);
    apply_path(config, coords, &reference, &swaps, seed)
}

/// All orderings' amplitudes at a fixed kinematic point.
#[derive(Debug, Clone)]
pub struct AmplitudeField {
    amplitudes: HashMap<Ordering, SpinVector>,
}

impl AmplitudeField {
    /// Generates every ordering from the reference seed (n! entries; meant
    /// for n ≤ 6).
    pub fn generate(
        config: &ParticleConfig,
        coords: &LightconeCoords,
        seed: &SpinVector,
    ) -> Result<Self> {
        let n = config.n();
        let reference = Ordering::reference(n);
        let mut amplitudes = HashMap::new();
        amplitudes.insert(reference.clone(), seed.clone());
        // breadth-first over adjacent swaps
        let mut frontier = vec![reference];
        while let Some(word) = frontier.pop() {
            let v = amplitudes[&word].clone();
            for k in 0..n - 1 {
                let mut next = word.clone();
                next.0.swap(k, k + 1);
                if amplitudes.contains_key(&next) {
                    continue;
                }
                let m = swap_matrix(config, coords, word.0[k], word.0[k + 1])?;
                amplitudes.insert(next.clone(), m.apply(&v)?);
                frontier.push(next);
            }
        }
        Ok(Self { amplitudes })
    }

    pub fn get(&self, ordering: &Ordering) -> Option<&SpinVector> {
        self.amplitudes.get(ordering)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Worst residual of every adjacent-swap relation across the field.
    pub fn verify_relations(&self, config: &ParticleConfig, coords: &LightconeCoords) -> Result<f64> {
        let n = config.n();
        let mut worst: f64 = 0.0;
        for (word, v) in &self.amplitudes {
            for k in 0..n - 1 {
                let mut next = word.clone();
                next.0.swap(k, k + 1);
                let m = swap_matrix(config, coords, word.0[k], word.0[k + 1])?;
                let expect = m.apply(v)?;
                worst = worst.max(self.amplitudes[&next].sub(&expect).max_abs());
            }
        }
        Ok(worst)
    }
}

/// Seed amplitude as a function of the light-cone coordinates. Taking the
/// coordinates (rather than raw positions and time) guarantees the free
/// evolution identity for any seed.
pub type SeedFn<'a> = dyn Fn(&ParticleConfig, &LightconeCoords) -> SpinVector + 'a;

/// Position-space evaluation: the single ordering selected by sorting the
/// positions survives, and its amplitude is returned.
pub fn evaluate_f(
    config: &ParticleConfig,
    point: &KinematicPoint,
    seed: &SeedFn,
) -> Result<SpinVector> {
    let ordering = Ordering::from_positions(point)?;
    let coords = LightconeCoords::from_point(config, point);
    let s = seed(config, &coords);
    amplitude_for_ordering(config, &coords, &s, &ordering, PathStrategy::BubbleSort)
}

/// Sign convention of the antisymmetrizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// Fermionic: each term weighted by the permutation parity.
    Fermionic,
    /// Plain symmetrization, no sign.
    Bosonic,
}

/// Antisymmetrized state: one spin vector per chirality pattern.
#[derive(Debug, Clone)]
pub struct LabeledState {
    pub components: HashMap<Vec<Chirality>, SpinVector>,
}

impl LabeledState {
    pub fn single(pattern: Vec<Chirality>, v: SpinVector) -> Self {
        let mut components = HashMap::new();
        components.insert(pattern, v);
        Self { components }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, v) in &self.components {
            match other.components.get(k) {
                Some(w) => worst = worst.max(v.sub(w).max_abs()),
                None => worst = worst.max(v.max_abs()),
            }
        }
        for (k, w) in &other.components {
            if !self.components.contains_key(k) {
                worst = worst.max(w.max_abs());
            }
        }
        worst
    }
}

fn permutation_parity(perm: &[usize]) -> f64 {
    let mut seen = vec![false; perm.len()];
    let mut parity = 1.0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len.is_multiple_of(2) {
            parity = -parity;
        }
    }
    parity
}

/// w[σ_1..σ_n] = v[σ_{π(1)}, ..., σ_{π(n)}].
fn permute_spin_slots(v: &SpinVector, pi: &[usize]) -> SpinVector {
    let n = v.n_sites();
    let mut out = SpinVector::zeros(n);
    for b in 0..v.dim() {
        let mut src = 0usize;
        for (k, &pk) in pi.iter().enumerate() {
            let bit = (b >> (n - 1 - pk)) & 1;
            src |= bit << (n - 1 - k);
        }
        out.amps_mut()[b] = v.amps()[src];
    }
    out
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut base: Vec<usize> = (0..n).collect();
    fn heap(k: usize, xs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(xs.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, xs, out);
            if k % 2 == 0 {
                xs.swap(i, k - 1);
            } else {
                xs.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut base, &mut out);
    out
}

/// Antisymmetrization over simultaneous relabelings of (position,
/// chirality, spin) triples, normalized by 1/sqrt(n!).
///
/// `labeled` maps a position vector to the components of a labeled state;
/// the output collects, for each reachable chirality pattern, the signed
/// sum of relabeled evaluations.
pub fn antisymmetrize_general(
    config: &ParticleConfig,
    positions: &[f64],
    labeled: &dyn Fn(&[f64]) -> Result<LabeledState>,
    sign: SignConvention,
) -> Result<LabeledState> {
    let n = config.n();
    let norm = 1.0 / (1..=n).map(|k| k as f64).product::<f64>().sqrt();
    let mut components: HashMap<Vec<Chirality>, SpinVector> = HashMap::new();
    for pi in all_permutations(n) {
        let eps = match sign {
            SignConvention::Fermionic => permutation_parity(&pi),
            SignConvention::Bosonic => 1.0,
        };
        let mut pi_inv = vec![0usize; n];
        for (i, &k) in pi.iter().enumerate() {
            pi_inv[k] = i;
        }
        let xp: Vec<f64> = pi.iter().map(|&k| positions[k]).collect();
        let inner = labeled(&xp)?;
        for (pattern, v) in &inner.components {
            // the slot-permuted term is supported on pattern ∘ π⁻¹
            let out_pattern: Vec<Chirality> = pi_inv.iter().map(|&k| pattern[k]).collect();
            let term = permute_spin_slots(v, &pi).scaled(C64::new(eps * norm, 0.0));
            components
                .entry(out_pattern)
                .and_modify(|acc| *acc = acc.add(&term))
                .or_insert(term);
        }
    }
    Ok(LabeledState { components })
}

/// Antisymmetrizes the position-space wavefunction built from a seed.
pub fn antisymmetrize(
    config: &ParticleConfig,
    point: &KinematicPoint,
    seed: &SeedFn,
    sign: SignConvention,
) -> Result<LabeledState> {
    let time = point.time();
    let pattern: Vec<Chirality> = config.chiralities().to_vec();
    antisymmetrize_general(
        config,
        point.positions(),
        &|xs: &[f64]| {
            let pt = KinematicPoint::new(config, xs.to_vec(), time)?;
            Ok(LabeledState::single(
                pattern.clone(),
                evaluate_f(config, &pt, seed)?,
            ))
        },
        sign,
    )
}

/// Central finite-difference estimate of the free transport derivative
/// (∂_t + Σ_right ∂_{x_j} - Σ_left ∂_{x_k}) applied to the position-space
/// wavefunction; returns its max-abs value. Away from coincidence
/// hyperplanes this vanishes to O(h²) because every amplitude depends on
/// positions and time only through light-cone coordinates.
pub fn free_evolution_residual(
    config: &ParticleConfig,
    point: &KinematicPoint,
    seed: &SeedFn,
    h: f64,
) -> Result<SpinVector> {
    let xs = point.positions();
    let n = config.n();
    let length = config.coupling.length;
    for i in 0..n {
        if xs[i] < 10.0 * h || xs[i] > length - 10.0 * h {
            return Err(Error::OutOfBox {
                i,
                x: xs[i],
                length,
            });
        }
        for j in (i + 1)..n {
            if (xs[i] - xs[j]).abs() < 10.0 * h {
                return Err(Error::CoincidentPositions { i, j });
            }
        }
    }
    let eval = |xv: Vec<f64>, t: f64| -> Result<SpinVector> {
        evaluate_f(config, &KinematicPoint::new(config, xv, t)?, seed)
    };
    let two_h = C64::new(2.0 * h, 0.0);
    // time derivative
    let mut total = eval(xs.to_vec(), point.time() + h)?
        .sub(&eval(xs.to_vec(), point.time() - h)?)
        .scaled(1.0 / two_h);
    // signed position derivatives
    for i in 0..n {
        let mut plus = xs.to_vec();
        plus[i] += h;
        let mut minus = xs.to_vec();
        minus[i] -= h;
        let d = eval(plus, point.time())?
            .sub(&eval(minus, point.time())?)
            .scaled(1.0 / two_h);
        let sgn = match config.chirality(i) {
            Chirality::Right => 1.0,
            Chirality::Left => -1.0,
        };
        total = total.add(&d.scaled(C64::new(sgn, 0.0)));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::CouplingParams;
    use crate::rng::SplitMix64;
    use crate::spin::PairOperator;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn coupling() -> CouplingParams {
        CouplingParams::real(1.0, 0.3, 20.0).unwrap()
    }

    fn random_seed(n: usize, seed: u64) -> SpinVector {
        let mut rng = SplitMix64::new(seed);
        SpinVector::new(
            n,
            (0..1usize << n)
                .map(|_| c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn neighbor_matrix_two_particles() {
        // sites: 0 = R, 1 = L; word (0,1): swap gives S on (z_0, z̄_1)
        let cfg = ParticleConfig::new(
            vec![Chirality::Right, Chirality::Left],
            coupling(),
        )
        .unwrap();
        let coords = LightconeCoords::from_reals(&[0.4, 1.9]);
        let m = neighbor_smatrix(&cfg, &coords, &Ordering::identity(2), 0).unwrap();
        let expect = s_matrix_lr(&cfg.coupling, 0, 1, c(0.4, 0.0), c(1.9, 0.0)).unwrap();
        assert!(m.max_abs_diff(&expect) < 1e-15);
        // both left movers at equal z̄: the permutation
        let cfg = ParticleConfig::new(vec![Chirality::Left, Chirality::Left], coupling()).unwrap();
        let coords = LightconeCoords::from_reals(&[0.7, 0.7]);
        let m = neighbor_smatrix(&cfg, &coords, &Ordering::identity(2), 0).unwrap();
        assert!(m.max_abs_diff(&PairOperator::permutation(0, 1).unwrap()) < 1e-15);
    }

    #[test]
    fn swap_then_swap_back_is_identity() {
        let cfg = ParticleConfig::new(
            vec![Chirality::Right, Chirality::Left, Chirality::Left],
            coupling(),
        )
        .unwrap();
        let coords = LightconeCoords::from_reals(&[0.3, 1.2, 2.6]);
        let seed = random_seed(3, 4);
        for word in [vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1]] {
            let word = Ordering(word);
            for k in 0..2 {
                let out = apply_path(&cfg, &coords, &word, &[k, k], &seed).unwrap();
                assert!(out.sub(&seed).max_abs() < 1e-13);
            }
        }
    }

    #[test]
    fn path_independence_three_particles() {
        let cfg = ParticleConfig::new(
            vec![Chirality::Right, Chirality::Left, Chirality::Left],
            coupling(),
        )
        .unwrap();
        let coords = LightconeCoords::from_reals(&[0.3, 1.7, 2.9]);
        let seed = random_seed(3, 9);
        // the reference itself comes back unchanged
        let same = amplitude_for_ordering(
            &cfg,
            &coords,
            &seed,
            &Ordering::reference(3),
            PathStrategy::BubbleSort,
        )
        .unwrap();
        assert!(same.sub(&seed).max_abs() == 0.0);
        let target = Ordering(vec![0, 1, 2]);
        let a = amplitude_for_ordering(&cfg, &coords, &seed, &target, PathStrategy::BubbleSort)
            .unwrap();
        let b = amplitude_for_ordering(&cfg, &coords, &seed, &target, PathStrategy::InsertionSort)
            .unwrap();
        assert!(a.sub(&b).max_abs() < 1e-11);
    }

    #[test]
    fn field_consistent_and_loops_close() {
        let cfg = ParticleConfig::left_first(4, 2, coupling()).unwrap();
        let coords = LightconeCoords::from_reals(&[0.5, 1.4, 2.8, 3.9]);
        let seed = random_seed(4, 13);
        let field = AmplitudeField::generate(&cfg, &coords, &seed).unwrap();
        assert_eq!(field.len(), 24);
        assert!(field.verify_relations(&cfg, &coords).unwrap() < 1e-10);
        // random closed loops return to the start
        let mut rng = SplitMix64::new(77);
        for _ in 0..10 {
            let mut swaps: Vec<usize> = (0..6).map(|_| rng.below(3)).collect();
            let forward = swaps.clone();
            swaps.extend(forward.iter().rev());
            let out = apply_path(&cfg, &coords, &Ordering::reference(4), &swaps, &seed).unwrap();
            assert!(out.sub(&seed).max_abs() < 1e-10);
        }
    }

    #[test]
    fn evaluate_f_selects_sorted_ordering() {
        // standard layout: site 0 = L, site 1 = R; reference word (1,0)
        let cfg = ParticleConfig::left_first(2, 1, coupling()).unwrap();
        let seed_fn = |_: &ParticleConfig, _: &LightconeCoords| SpinVector::basis_state(2, 0b01);
        // right mover (site 1) left of the left mover: the reference itself
        let p = KinematicPoint::new(&cfg, vec![2.0, 1.0], 0.0).unwrap();
        let f = evaluate_f(&cfg, &p, &seed_fn).unwrap();
        assert!(f.sub(&SpinVector::basis_state(2, 0b01)).max_abs() < 1e-14);
        // right mover on the right: one plain S-matrix swap from the reference
        let p = KinematicPoint::new(&cfg, vec![1.0, 2.0], 0.0).unwrap();
        let f = evaluate_f(&cfg, &p, &seed_fn).unwrap();
        let coords = LightconeCoords::from_point(&cfg, &p);
        let m = s_matrix_lr(&cfg.coupling, 1, 0, coords.u[1], coords.u[0]).unwrap();
        let expect = m.apply(&SpinVector::basis_state(2, 0b01)).unwrap();
        assert!(f.sub(&expect).max_abs() < 1e-14);
    }

    #[test]
    fn sz_sector_preserved_by_assembly() {
        let cfg = ParticleConfig::left_first(4, 2, coupling()).unwrap();
        let coords = LightconeCoords::from_reals(&[0.5, 1.4, 2.8, 3.9]);
        // seed in the two-flip sector
        let mut seed = SpinVector::zeros(4);
        seed.amps_mut()[0b0011] = c(1.0, 0.0);
        seed.amps_mut()[0b0101] = c(0.4, -0.2);
        seed.amps_mut()[0b1100] = c(-0.3, 0.9);
        let field = AmplitudeField::generate(&cfg, &coords, &seed).unwrap();
        for word in [Ordering::identity(4), Ordering(vec![2, 0, 3, 1])] {
            assert!(field.get(&word).unwrap().off_sector_mass(2) < 1e-14);
        }
    }

    #[test]
    fn antisymmetrizer_two_particle_expansion() {
        let cfg = ParticleConfig::new(vec![Chirality::Right, Chirality::Left], coupling()).unwrap();
        let pt = KinematicPoint::new(&cfg, vec![1.0, 2.3], 0.1).unwrap();
        let seed_fn = |cfg: &ParticleConfig, u: &LightconeCoords| {
            let mut v = SpinVector::zeros(cfg.n());
            v.amps_mut()[0b01] = (C64::new(0.0, 1.0) * (0.3 * u.u[0] - 0.7 * u.u[1])).exp();
            v.amps_mut()[0b10] = (C64::new(0.0, 1.0) * (0.1 * u.u[0] + 0.2 * u.u[1])).exp();
            v
        };
        let a = antisymmetrize(&cfg, &pt, &seed_fn, SignConvention::Fermionic).unwrap();
        // direct expansion: (F(x0,x1) - relabeled F(x1,x0))/sqrt(2)
        let f01 = evaluate_f(&cfg, &pt, &seed_fn).unwrap();
        let pt_swap = KinematicPoint::new(&cfg, vec![2.3, 1.0], 0.1).unwrap();
        let f10 = evaluate_f(&cfg, &pt_swap, &seed_fn).unwrap();
        let rl = a.components.get(cfg.chiralities()).unwrap();
        let direct = f01.scaled(c(1.0 / 2.0f64.sqrt(), 0.0));
        assert!(rl.sub(&direct).max_abs() < 1e-13);
        let lr = a
            .components
            .get(&vec![Chirality::Left, Chirality::Right] as &Vec<_>)
            .unwrap();
        let swapped = permute_spin_slots(&f10, &[1, 0]).scaled(c(-1.0 / 2.0f64.sqrt(), 0.0));
        assert!(lr.sub(&swapped).max_abs() < 1e-13);
    }

    #[test]
    fn antisymmetrizer_is_odd_and_projects() {
        let cfg = ParticleConfig::new(
            vec![Chirality::Right, Chirality::Left, Chirality::Left],
            coupling(),
        )
        .unwrap();
        let pt = KinematicPoint::new(&cfg, vec![0.8, 2.0, 3.1], 0.05).unwrap();
        let seed_fn = |cfg: &ParticleConfig, u: &LightconeCoords| {
            let mut v = SpinVector::zeros(cfg.n());
            for (i, amp) in v.amps_mut().iter_mut().enumerate() {
                let k = i as f64;
                *amp = (C64::new(0.0, 1.0) * (0.2 * u.u[0] - 0.5 * u.u[1] + (0.1 + k / 20.0) * u.u[2]))
                    .exp();
            }
            v
        };
        let a = antisymmetrize(&cfg, &pt, &seed_fn, SignConvention::Fermionic).unwrap();
        // oddness under exchanging full labels 0 and 1
        let tau = [1usize, 0, 2];
        let mut worst: f64 = 0.0;
        for (pattern, v) in &a.components {
            let xp: Vec<f64> = tau.iter().map(|&k| pt.positions()[k]).collect();
            let pat_t: Vec<Chirality> = tau.iter().map(|&k| pattern[k]).collect();
            let pt_t = KinematicPoint::new(&cfg, xp, pt.time()).unwrap();
            let a_t = antisymmetrize(&cfg, &pt_t, &seed_fn, SignConvention::Fermionic).unwrap();
            let v_t = permute_spin_slots(a_t.components.get(&pat_t).unwrap(), &tau);
            worst = worst.max(v_t.add(v).max_abs());
        }
        assert!(worst < 1e-12, "oddness violated: {worst}");
        // projector property: A(A F) = sqrt(3!) A F
        let a2 = antisymmetrize_general(
            &cfg,
            pt.positions(),
            &|xs: &[f64]| {
                let pt2 = KinematicPoint::new(&cfg, xs.to_vec(), pt.time())?;
                antisymmetrize(&cfg, &pt2, &seed_fn, SignConvention::Fermionic)
            },
            SignConvention::Fermionic,
        )
        .unwrap();
        let scale = c(6.0f64.sqrt(), 0.0);
        let mut worst: f64 = 0.0;
        for (pattern, v) in &a.components {
            let w = a2.components.get(pattern).unwrap();
            worst = worst.max(w.sub(&v.scaled(scale)).max_abs());
        }
        assert!(worst < 1e-12, "projector violated: {worst}");
    }

    #[test]
    fn free_evolution_single_right_mover() {
        let cfg = ParticleConfig::new(vec![Chirality::Right], coupling()).unwrap();
        let pt = KinematicPoint::new(&cfg, vec![7.0], 0.0).unwrap();
        let seed_fn = |_: &ParticleConfig, u: &LightconeCoords| {
            let mut v = SpinVector::zeros(1);
            v.amps_mut()[0] = (C64::new(0.0, 1.0) * u.u[0]).exp();
            v.amps_mut()[1] = (C64::new(0.0, 0.6) * u.u[0]).exp();
            v
        };
        let r = free_evolution_residual(&cfg, &pt, &seed_fn, 1e-3).unwrap();
        assert!(r.max_abs() < 1e-8, "residual {}", r.max_abs());
    }

    #[test]
    fn free_evolution_mixed_pair_scales_as_h_squared() {
        let cfg = ParticleConfig::new(vec![Chirality::Right, Chirality::Left], coupling()).unwrap();
        let pt = KinematicPoint::new(&cfg, vec![4.0, 9.0], 0.2).unwrap();
        let seed_fn = |_: &ParticleConfig, u: &LightconeCoords| {
            let mut v = SpinVector::zeros(2);
            v.amps_mut()[0b01] = (C64::new(0.0, 1.0) * (0.9 * u.u[0] - 0.4 * u.u[1])).exp();
            v.amps_mut()[0b10] = (C64::new(0.0, 1.0) * (0.3 * u.u[0] + 0.8 * u.u[1])).exp();
            v
        };
        let r1 = free_evolution_residual(&cfg, &pt, &seed_fn, 1e-3)
            .unwrap()
            .max_abs();
        let r2 = free_evolution_residual(&cfg, &pt, &seed_fn, 5e-4)
            .unwrap()
            .max_abs();
        assert!(r1 < 1e-6, "residual {r1}");
        let ratio = r1 / r2;
        assert!((ratio - 4.0).abs() < 0.8, "h^2 scaling ratio {ratio}");
    }

    #[test]
    fn free_evolution_rejects_near_hyperplane() {
        let cfg = ParticleConfig::new(vec![Chirality::Right, Chirality::Left], coupling()).unwrap();
        let pt = KinematicPoint::new(&cfg, vec![4.0, 4.0 + 1e-4], 0.0).unwrap();
        let seed_fn = |_: &ParticleConfig, _: &LightconeCoords| SpinVector::basis_state(2, 0);
        assert!(free_evolution_residual(&cfg, &pt, &seed_fn, 1e-3).is_err());
    }
}
