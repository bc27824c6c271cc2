//! Plot-ready datasets behind the browser demo. Plain functions over
//! plain numbers so everything is testable on the host target; the wasm
//! exports in `lib.rs` are thin JSON wrappers around these.

use qkz_core::coupling::{Branch, CouplingParams};
use qkz_core::kinematics::{LightconeCoords, ParticleConfig};
use qkz_core::qkz::{qkz_residual, ArgOrientation, ResidualNormalization, WeightModel};
use qkz_core::rng::SplitMix64;
use qkz_core::scattering::{verify_ybe, FProfile, YbeKind};
use qkz_core::C64;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CouplingCurve {
    pub t: Vec<f64>,
    pub g_re: Vec<f64>,
    pub g_im: Vec<f64>,
    pub constraint_defect: Vec<f64>,
    pub phase_modulus_defect: Vec<f64>,
}

/// g(t) along a time window, with the linearity defect |f(2t) - (2αt + β)|
/// and the phase-unimodularity defect at the same abscissas.
pub fn coupling_curve(
    alpha: C64,
    beta: C64,
    plus_branch: bool,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<CouplingCurve, String> {
    let branch = if plus_branch { Branch::Plus } else { Branch::Minus };
    let p = CouplingParams::new(alpha, beta, branch, 1.0).map_err(|e| e.to_string())?;
    let n = points.clamp(2, 4000);
    let mut out = CouplingCurve {
        t: Vec::with_capacity(n),
        g_re: Vec::with_capacity(n),
        g_im: Vec::with_capacity(n),
        constraint_defect: Vec::with_capacity(n),
        phase_modulus_defect: Vec::with_capacity(n),
    };
    for k in 0..n {
        let t = t_min + (t_max - t_min) * k as f64 / (n - 1) as f64;
        let tc = C64::new(t, 0.0);
        let g = p.g_of_t(tc);
        let x = 2.0 * tc;
        let defect = match p.f_of_x(x) {
            Ok(f) => (f - (p.alpha * x + p.beta)).norm(),
            Err(_) => f64::NAN,
        };
        let phase_defect = match p.phase_of_x(x) {
            Ok(ph) => (ph.norm() - 1.0).abs(),
            Err(_) => f64::NAN,
        };
        out.t.push(t);
        out.g_re.push(g.re);
        out.g_im.push(g.im);
        out.constraint_defect.push(defect);
        out.phase_modulus_defect.push(phase_defect);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct YbeCurve {
    pub sample: Vec<usize>,
    pub residual_linear: Vec<f64>,
    pub residual_quadratic: Vec<f64>,
}

/// Yang-Baxter residuals over seeded kinematic triples, for the linear
/// (integrable) f and the quadratic breaker side by side.
pub fn ybe_curve(
    alpha: f64,
    beta: f64,
    kind: &str,
    samples: usize,
    seed: u64,
) -> Result<YbeCurve, String> {
    let p = CouplingParams::real(alpha, beta, 1.0).map_err(|e| e.to_string())?;
    let kind = match kind {
        "lrr" => YbeKind::LeftRightRight,
        "rrl" => YbeKind::RightRightLeft,
        "same" => YbeKind::SameChirality,
        other => return Err(format!("unknown kind '{other}'")),
    };
    let n = samples.clamp(1, 1000);
    let mut rng = SplitMix64::new(seed);
    let mut out = YbeCurve {
        sample: Vec::with_capacity(n),
        residual_linear: Vec::with_capacity(n),
        residual_quadratic: Vec::with_capacity(n),
    };
    for k in 0..n {
        let coords = [
            C64::new(rng.uniform(-5.0, 5.0), 0.0),
            C64::new(rng.uniform(-5.0, 5.0), 0.0),
            C64::new(rng.uniform(-5.0, 5.0), 0.0),
        ];
        let lin = verify_ybe(kind, &p, coords, FProfile::Linear).map_err(|e| e.to_string())?;
        let quad = verify_ybe(kind, &p, coords, FProfile::Quadratic).map_err(|e| e.to_string())?;
        out.sample.push(k);
        out.residual_linear.push(lin);
        out.residual_quadratic.push(quad);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct ConvergenceCurve {
    pub truncation: Vec<i64>,
    pub residual: Vec<f64>,
}

/// qKZ difference-equation residual of the truncated Jackson solution
/// (N = 2, one flip) against the truncation radius. `eta_im` > 0 picks a
/// complex coupling with power-law tails; `eta_im` = 0 is the marginal
/// real-coupling case.
pub fn jackson_convergence_curve(
    eta_re: f64,
    eta_im: f64,
    truncations: &[i64],
) -> Result<ConvergenceCurve, String> {
    if eta_re == 0.0 && eta_im == 0.0 {
        return Err("eta must be nonzero".into());
    }
    let length = 1.3;
    let eta = C64::new(eta_re, eta_im);
    let alpha = 1.0 / (eta * length);
    let p = CouplingParams::new(alpha, C64::new(0.0, 0.0), Branch::Plus, length)
        .map_err(|e| e.to_string())?;
    let cfg = ParticleConfig::left_first(2, 1, p).map_err(|e| e.to_string())?;
    let coords = LightconeCoords::from_reals(&[0.25 * length, 0.55 * length]);
    let mut out = ConvergenceCurve {
        truncation: Vec::new(),
        residual: Vec::new(),
    };
    for &lam in truncations {
        let lam = lam.clamp(1, 200);
        let r = qkz_residual(
            &cfg,
            &coords,
            vec![C64::new(0.9, 0.0)],
            lam,
            1,
            ArgOrientation::InhomMinusU,
            WeightModel::Full,
            ResidualNormalization::VacuumNormalized,
        )
        .map_err(|e| e.to_string())?;
        out.truncation.push(lam);
        out.residual.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_curve_shapes_and_values() {
        let c = coupling_curve(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            true,
            -2.0,
            2.0,
            101,
        )
        .unwrap();
        assert_eq!(c.t.len(), 101);
        // t = 0 sits at index 50: g = 2/sqrt(3)
        assert!((c.g_re[50] - 2.0 / 3.0f64.sqrt()).abs() < 1e-12);
        assert!(c.constraint_defect.iter().all(|&d| d < 1e-12));
        assert!(c.phase_modulus_defect.iter().all(|&d| d < 1e-12));
    }

    #[test]
    fn ybe_curve_separates_linear_from_quadratic() {
        let c = ybe_curve(1.0, 0.3, "lrr", 50, 7).unwrap();
        let max_lin = c.residual_linear.iter().cloned().fold(0.0f64, f64::max);
        let quad_broken = c
            .residual_quadratic
            .iter()
            .filter(|&&r| r > 1e-3)
            .count();
        assert!(max_lin < 1e-11);
        assert!(quad_broken * 100 >= 95 * 50 / 100);
        assert!(ybe_curve(1.0, 0.0, "sideways", 5, 1).is_err());
    }

    #[test]
    fn convergence_curve_decreases() {
        let c = jackson_convergence_curve(0.9, 0.9, &[5, 10, 20]).unwrap();
        assert!(c.residual[0] > c.residual[1] && c.residual[1] > c.residual[2]);
    }

    #[test]
    fn json_payloads_serialize() {
        let c = coupling_curve(C64::new(1.0, 0.0), C64::new(0.3, 0.0), true, -1.0, 1.0, 16)
            .unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("constraint_defect"));
    }
}
