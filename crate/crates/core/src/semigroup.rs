//! Non-elliptic continuous semigroups in Koenigs form
//! `phi_t(z) = h^{-1}(h(z) + t)`: trajectories, type, slope, and the
//! sector-sandwich slope law.

use crate::classifier::{classify_convergence, cluster_interval, Classification, ClassifyOptions, ClusterInterval, Convergence};
use crate::domains::{sandwich_check, ModelDomain, SandwichReport, SandwichVerdict};
use crate::error::{Error, Result};
use crate::geometry::{complex_serde, hyperbolic_distance_disk, sector_to_right_half_plane, ChainRegion, ConformalAtom, ConformalChain};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Catalog of Koenigs models, all with Denjoy-Wolff point `1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum SemigroupKind {
    /// `Ω = {|Im w| < half_width}`: hyperbolic.
    Strip { half_width: f64 },
    /// `Ω = {Re w > -c}`, `h(z) = c (1 + z) / (1 - z) - c`.
    HalfPlane { c: f64 },
    /// `Ω = {Im w > -c}`, `h(z) = i c ((1 + z) / (1 - z) - 1)`.
    UpperHalfPlane { c: f64 },
    /// `Ω = U(alpha1, alpha2) - e^{-i(alpha1 - alpha2)/2}`, the sector
    /// `-alpha1 < arg w < alpha2` translated so that `h(0) = 0`.
    Sector { alpha1: f64, alpha2: f64 },
    /// Koenigs map given as a chain from the disk.
    Custom {
        atoms: Vec<ConformalAtom>,
        #[serde(with = "complex_serde")]
        tau: Complex64,
    },
}

#[derive(Debug, Clone)]
pub struct SemigroupModel {
    kind: SemigroupKind,
    koenigs: ConformalChain,
    omega: ModelDomain,
    tau: Complex64,
}

fn koenigs_chain(atoms: Vec<ConformalAtom>) -> Result<ConformalChain> {
    ConformalChain::new(atoms, ChainRegion::Disk, ChainRegion::Unchecked)
}

impl SemigroupModel {
    pub fn new(kind: SemigroupKind) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Input(format!("{name} must be positive, got {v}")))
            }
        };
        let (koenigs, omega, tau) = match &kind {
            SemigroupKind::Strip { half_width } => {
                positive("half_width", *half_width)?;
                let omega = ModelDomain::strip(*half_width)?;
                (omega.riemann_chain()?.clone(), omega, ONE)
            }
            SemigroupKind::HalfPlane { c } => {
                positive("c", *c)?;
                let h = koenigs_chain(vec![
                    ConformalAtom::InverseCayley,
                    ConformalAtom::Translation { offset: -ONE },
                    ConformalAtom::Scaling { factor: *c },
                ])?;
                (h, ModelDomain::half_plane(-c)?, ONE)
            }
            SemigroupKind::UpperHalfPlane { c } => {
                positive("c", *c)?;
                let h = koenigs_chain(vec![
                    ConformalAtom::InverseCayley,
                    ConformalAtom::Translation { offset: -ONE },
                    ConformalAtom::Rotation { angle: FRAC_PI_2 },
                    ConformalAtom::Scaling { factor: *c },
                ])?;
                (h, ModelDomain::rotated_half_plane(0.0, Complex64::new(0.0, -c))?, ONE)
            }
            SemigroupKind::Sector { alpha1, alpha2 } => {
                let g = sector_to_right_half_plane(*alpha1, *alpha2)?;
                let shift = Complex64::from_polar(1.0, -0.5 * (alpha1 - alpha2));
                let mut atoms = vec![ConformalAtom::InverseCayley];
                atoms.extend(g.inverted().atoms().iter().cloned());
                atoms.push(ConformalAtom::Translation { offset: -shift });
                (koenigs_chain(atoms)?, ModelDomain::sector(*alpha1, *alpha2, -shift)?, ONE)
            }
            SemigroupKind::Custom { atoms, tau } => {
                if (tau.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::Input(format!("Denjoy-Wolff point {tau} is not on the unit circle")));
                }
                let h = koenigs_chain(atoms.clone())?;
                let omega = ModelDomain::from_chain(h.clone(), None)?;
                (h, omega, *tau)
            }
        };
        let model = SemigroupModel { kind, koenigs, omega, tau };
        model.validate()?;
        Ok(model)
    }

    pub fn strip(half_width: f64) -> Result<Self> {
        Self::new(SemigroupKind::Strip { half_width })
    }

    pub fn half_plane(c: f64) -> Result<Self> {
        Self::new(SemigroupKind::HalfPlane { c })
    }

    pub fn upper_half_plane(c: f64) -> Result<Self> {
        Self::new(SemigroupKind::UpperHalfPlane { c })
    }

    pub fn sector(alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::new(SemigroupKind::Sector { alpha1, alpha2 })
    }

    /// `h(0) = 0` and `Ω + t ⊂ Ω` on a few sample points.
    fn validate(&self) -> Result<()> {
        let h0 = self.koenigs.forward(Complex64::new(0.0, 0.0))?;
        if h0.norm() > 1e-12 {
            return Err(Error::Input(format!("Koenigs map sends 0 to {h0}, not 0")));
        }
        for k in 0..16 {
            let q = Complex64::from_polar(0.9, TAU * k as f64 / 16.0);
            let w = self.koenigs.forward(q)?;
            for t in [0.5, 5.0] {
                let back = self.koenigs.inverse(w + t)?;
                if !(back.norm() < 1.0) || (self.koenigs.forward(back)? - (w + t)).norm() > 1e-8 * (1.0 + w.norm() + t) {
                    return Err(Error::Input(format!("Ω is not starlike at infinity near {w}")));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &SemigroupKind {
        &self.kind
    }

    pub fn koenigs(&self) -> &ConformalChain {
        &self.koenigs
    }

    /// The planar domain `Ω = h(D)`.
    pub fn omega(&self) -> &ModelDomain {
        &self.omega
    }

    pub fn denjoy_wolff(&self) -> Complex64 {
        self.tau
    }

    pub fn h(&self, z: Complex64) -> Result<Complex64> {
        self.koenigs.forward(z)
    }
}

/// `phi_t(z) = h^{-1}(h(z) + t)`.
pub fn trajectory(model: &SemigroupModel, z: Complex64, t: f64) -> Result<Complex64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Input(format!("time must be finite and nonnegative, got {t}")));
    }
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("{z} is not inside the unit disk")));
    }
    if t == 0.0 {
        return Ok(z);
    }
    let q = model.koenigs.inverse(model.h(z)? + t)?;
    if !(q.norm() < 1.0) {
        return Err(Error::Domain(format!("phi_{t}({z}) left the disk numerically")));
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    #[serde(with = "complex_serde")]
    pub start: Complex64,
    pub times: Vec<f64>,
    pub disk_points: Vec<[f64; 2]>,
    pub omega_points: Vec<[f64; 2]>,
}

pub fn trajectory_record(model: &SemigroupModel, z: Complex64, times: &[f64]) -> Result<TrajectoryRecord> {
    let hz = model.h(z)?;
    let disk = times.iter().map(|&t| trajectory(model, z, t)).collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryRecord {
        start: z,
        times: times.to_vec(),
        disk_points: disk.iter().map(|q| [q.re, q.im]).collect(),
        omega_points: times.iter().map(|t| [hz.re + t, hz.im]).collect(),
    })
}

/// `n` times `t_k = t0 * rho^k` from `t0` to `t1`.
pub fn geometric_grid(t0: f64, t1: f64, n: usize) -> Result<Vec<f64>> {
    if !(t0 > 0.0 && t1 > t0) || n < 2 {
        return Err(Error::Input(format!("bad geometric grid [{t0}, {t1}] with {n} points")));
    }
    let ratio = (t1 / t0).ln() / (n - 1) as f64;
    Ok((0..n).map(|k| if k + 1 == n { t1 } else { t0 * (ratio * k as f64).exp() }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemigroupType {
    Hyperbolic,
    ParabolicZeroStep,
    ParabolicPositiveStep,
    /// The step trend fits neither threshold.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupClassification {
    pub kind: SemigroupType,
    /// Spread of `Im h` on circles `|z| = 1 - 10^-k`, `k = 1..8`.
    pub im_widths: Vec<f64>,
    /// `d(t) = k_D(phi_t(z), phi_{t+s}(z))` on the grid.
    pub steps: Vec<[f64; 2]>,
    /// Last value of `d(t)`.
    pub step_limit: f64,
    /// Least-squares slope of `log10 d` against `log10 t` over the last decade.
    pub slope_per_decade: f64,
}

/// Decreasing `Im`-width growth of the Koenigs image near the circle means
/// `Ω` sits in a horizontal strip.
fn im_widths(model: &SemigroupModel) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..256).map(|j| TAU * j as f64 / 256.0).collect();
    for j in 1..=10 {
        let e = 10f64.powi(-j);
        angles.extend([e, -e, PI + e, PI - e]);
    }
    let tau_arg = model.tau.arg();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    (1..=8)
        .map(|k| {
            let r = 1.0 - 10f64.powi(-k);
            for a in &angles {
                if let Ok(w) = model.h(Complex64::from_polar(r, tau_arg + a)) {
                    if w.im.is_finite() {
                        lo = lo.min(w.im);
                        hi = hi.max(w.im);
                    }
                }
            }
            hi - lo
        })
        .collect()
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Hyperbolic when `Ω` lies in a horizontal strip; otherwise the hyperbolic
/// step `d(t)` over the last decade of `t_grid` decides zero step (slope
/// below `-0.1` per decade and final value below `0.05`) against positive
/// step (flat within `0.1` per decade above `0.05`).
pub fn classify_semigroup(model: &SemigroupModel, z: Complex64, s: f64, t_grid: &[f64]) -> Result<SemigroupClassification> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Input(format!("step s must be positive, got {s}")));
    }
    if t_grid.len() < 3 || t_grid.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Input("t grid needs at least three positive times".into()));
    }
    let widths = im_widths(model);
    let bounded = widths.iter().all(|w| w.is_finite()) && widths[7] <= 1.01 * widths[5];
    // hyperbolic trajectories reach tau in floating point quickly; keep the
    // evaluable prefix of the grid
    let evaluated: Vec<Option<[f64; 2]>> = t_grid
        .par_iter()
        .map(|&t| {
            let a = trajectory(model, z, t).ok()?;
            let b = trajectory(model, z, t + s).ok()?;
            Some([t, hyperbolic_distance_disk(a, b).ok()?])
        })
        .collect();
    let steps: Vec<[f64; 2]> = evaluated.iter().map_while(|p| *p).collect();
    let t_last = steps.iter().map(|p| p[0]).fold(0.0, f64::max);
    let tail: Vec<(f64, f64)> = steps
        .iter()
        .filter(|p| p[0] >= t_last / 10.0 && p[1] > 0.0)
        .map(|p| (p[0].log10(), p[1].log10()))
        .collect();
    let slope = fit_slope(&tail);
    let step_limit = steps.last().map(|p| p[1]).unwrap_or(f64::NAN);
    let kind = if bounded {
        SemigroupType::Hyperbolic
    } else if tail.len() < 2 {
        SemigroupType::Inconclusive
    } else if step_limit < 0.05 && (slope < -0.1 || step_limit == 0.0) {
        SemigroupType::ParabolicZeroStep
    } else if slope.abs() < 0.1 && step_limit > 0.05 {
        SemigroupType::ParabolicPositiveStep
    } else {
        SemigroupType::Inconclusive
    };
    Ok(SemigroupClassification { kind, im_widths: widths, steps, step_limit, slope_per_decade: slope })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub cluster: ClusterInterval,
    pub times: Vec<f64>,
    /// `arg(1 - conj(tau) phi_t(z))` on `times`.
    pub args: Vec<f64>,
    /// Set when the trajectory reached `tau` numerically before `t_max`.
    pub truncated: bool,
}

/// Tail cluster of `arg(1 - conj(tau) phi_t(z))` on a geometric grid
/// `1 ≤ t ≤ t_max`.
pub fn slope_cluster(model: &SemigroupModel, z: Complex64, t_max: f64, samples: usize, tail_fraction: f64) -> Result<SlopeReport> {
    let grid = geometric_grid(1.0, t_max, samples)?;
    let tau = model.tau;
    let values: Vec<Option<f64>> = grid
        .par_iter()
        .map(|&t| {
            let q = trajectory(model, z, t).ok()?;
            let v = ONE - tau.conj() * q;
            (v.norm() > 0.0).then(|| v.arg())
        })
        .collect();
    let kept = values.iter().take_while(|v| v.is_some()).count();
    if kept == 0 {
        return Err(Error::Domain("trajectory could not be evaluated on the grid".into()));
    }
    let args: Vec<f64> = values[..kept].iter().map(|v| v.expect("kept")).collect();
    let cluster = cluster_interval(&args, tail_fraction)?;
    Ok(SlopeReport { cluster, times: grid[..kept].to_vec(), args, truncated: kept < grid.len() })
}

/// `(pi/2)(alpha2 - alpha1)/(alpha1 + alpha2)`, the limit slope for domains
/// sandwiched between translates of `U(alpha1, alpha2)`, valid for
/// `alpha1 + alpha2 ≥ pi`.
pub fn corollary_4_1_predict(alpha1: f64, alpha2: f64) -> Result<f64> {
    let ok = |a: f64| a > 0.0 && a <= PI;
    if !(ok(alpha1) && ok(alpha2)) {
        return Err(Error::Input(format!("angles must lie in (0, pi], got ({alpha1}, {alpha2})")));
    }
    if alpha1 + alpha2 < PI {
        return Err(Error::OutOfHypothesis(format!(
            "alpha1 + alpha2 = {} is below pi",
            alpha1 + alpha2
        )));
    }
    Ok(predict_slope_unchecked(alpha1, alpha2))
}

/// The slope formula without the `alpha1 + alpha2 ≥ pi` hypothesis, for
/// exploration only.
pub fn predict_slope_unchecked(alpha1: f64, alpha2: f64) -> f64 {
    FRAC_PI_2 * (alpha2 - alpha1) / (alpha1 + alpha2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealTraceOptions {
    pub times: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub classify: ClassifyOptions,
}

impl Default for RealTraceOptions {
    fn default() -> Self {
        RealTraceOptions {
            times: geometric_grid(10.0, 1e8, 4000).expect("static grid"),
            samples: 20_000,
            seed: 0,
            classify: ClassifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealTraceReport {
    pub sandwich: SandwichReport,
    pub classification: Classification,
    pub measured_angle: f64,
    pub predicted: f64,
    pub agree: bool,
}

/// Classifies the positive reals `delta(t) = t` in a domain sandwiched as
/// `U_theta + a ⊂ Δ ⊆ U_theta` and compares with convergence by angle
/// `theta`.
pub fn proposition_4_1_scenario(theta: f64, a: f64, delta: &ModelDomain, opts: &RealTraceOptions) -> Result<RealTraceReport> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Input(format!("theta must lie in (0, pi), got {theta}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Input(format!("offset a must be positive, got {a}")));
    }
    let outer = ModelDomain::rotated_half_plane(theta, Complex64::new(0.0, 0.0))?;
    // U_theta + a is the horodisk of U_theta at distance a sin(theta) from its edge
    let radius = 1.0 / (a * theta.sin());
    let sandwich = sandwich_check(delta, &outer, radius, opts.samples, opts.seed)?;
    if sandwich.verdict != SandwichVerdict::Holds {
        return Err(Error::Precondition(format!(
            "sandwich U_theta + a ⊂ Δ ⊆ U_theta fails ({:?} at {:?})",
            sandwich.verdict, sandwich.witness
        )));
    }
    let points: Vec<Complex64> = opts
        .times
        .iter()
        .map(|&t| Complex64::new(t, 0.0))
        .filter(|z| delta.contains(*z))
        .collect();
    let classification = classify_convergence(&points, delta, None, &opts.classify)?;
    let measured_angle = classification.cluster.midpoint();
    let agree = matches!(classification.result, Convergence::ByAngle { theta: t } if (t - theta).abs() <= opts.classify.tol);
    Ok(RealTraceReport { sandwich, classification, measured_angle, predicted: theta, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::c;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn catalog() -> Vec<SemigroupModel> {
        vec![
            SemigroupModel::strip(FRAC_PI_2).unwrap(),
            SemigroupModel::half_plane(1.0).unwrap(),
            SemigroupModel::upper_half_plane(1.0).unwrap(),
            SemigroupModel::sector(FRAC_PI_2, PI).unwrap(),
            SemigroupModel::sector(2.0 * FRAC_PI_3, 2.0 * FRAC_PI_3).unwrap(),
        ]
    }

    #[test]
    fn trajectory_examples() {
        let m = SemigroupModel::half_plane(1.0).unwrap();
        assert_abs_diff_eq!(trajectory(&m, c(0.0, 0.0), 1.0).unwrap().re, 1.0 / 3.0, epsilon = 1e-15);
        // closed form h^{-1}(w) = w / (w + 2) for c = 1
        for t in [0.5, 3.0, 100.0] {
            let q = trajectory(&m, c(0.0, 0.0), t).unwrap();
            assert_abs_diff_eq!(q.re, t / (t + 2.0), epsilon = 1e-14);
            assert_eq!(q.im, 0.0);
        }
        let a = trajectory(&m, trajectory(&m, c(0.0, 0.0), 1.0).unwrap(), 1.0).unwrap();
        assert_abs_diff_eq!((a - trajectory(&m, c(0.0, 0.0), 2.0).unwrap()).norm(), 0.0, epsilon = 1e-12);
        for model in catalog() {
            let z = c(0.2, -0.3);
            assert_eq!(trajectory(&model, z, 0.0).unwrap(), z);
            assert!(model.h(c(0.0, 0.0)).unwrap().norm() < 1e-12);
        }
        assert!(matches!(trajectory(&m, c(0.0, 0.0), -1.0), Err(Error::Input(_))));
    }

    #[test]
    fn custom_model_must_fix_the_origin() {
        let bad = SemigroupModel::new(SemigroupKind::Custom { atoms: vec![ConformalAtom::InverseCayley], tau: ONE });
        assert!(matches!(bad, Err(Error::Input(_))));
        let good = SemigroupModel::new(SemigroupKind::Custom {
            atoms: vec![ConformalAtom::InverseCayley, ConformalAtom::Translation { offset: -ONE }],
            tau: ONE,
        })
        .unwrap();
        assert_abs_diff_eq!(trajectory(&good, c(0.0, 0.0), 1.0).unwrap().re, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn classification_examples() {
        let grid = geometric_grid(1.0, 1e4, 41).unwrap();
        let z = c(0.0, 0.0);
        let strip = classify_semigroup(&SemigroupModel::strip(FRAC_PI_2).unwrap(), z, 1.0, &grid).unwrap();
        assert_eq!(strip.kind, SemigroupType::Hyperbolic);
        let zero = classify_semigroup(&SemigroupModel::half_plane(1.0).unwrap(), z, 1.0, &grid).unwrap();
        assert_eq!(zero.kind, SemigroupType::ParabolicZeroStep, "{zero:?}");
        let positive = classify_semigroup(&SemigroupModel::upper_half_plane(1.0).unwrap(), z, 1.0, &grid).unwrap();
        assert_eq!(positive.kind, SemigroupType::ParabolicPositiveStep, "{positive:?}");
        // horizontal separation 1 at height 1: (1/2) * 2 asinh(1/2)
        assert_abs_diff_eq!(positive.step_limit, 0.5f64.asinh(), epsilon = 1e-8);
    }

    #[test]
    fn slope_examples() {
        let hp = slope_cluster(&SemigroupModel::half_plane(1.0).unwrap(), c(0.0, 0.0), 1e6, 200, 0.5).unwrap();
        assert_eq!((hp.cluster.lo, hp.cluster.hi), (0.0, 0.0));
        let sym = slope_cluster(&SemigroupModel::sector(FRAC_PI_2, FRAC_PI_2).unwrap(), c(0.0, 0.0), 1e6, 200, 0.5).unwrap();
        assert!(sym.cluster.lo.abs() < 1e-6 && sym.cluster.hi.abs() < 1e-6);
        let m = SemigroupModel::sector(FRAC_PI_2, PI).unwrap();
        for z in [c(0.0, 0.0), c(0.3, 0.2)] {
            let r = slope_cluster(&m, z, 1e6, 200, 0.5).unwrap();
            assert!((r.cluster.midpoint() - FRAC_PI_6).abs() < 0.02, "{:?}", r.cluster);
            assert!(!r.truncated);
        }
    }

    #[test]
    fn strip_trajectories_truncate_at_tau() {
        let r = slope_cluster(&SemigroupModel::strip(FRAC_PI_2).unwrap(), c(0.0, 0.0), 1e6, 100, 0.5).unwrap();
        assert!(r.truncated);
    }

    #[test]
    fn prediction_examples() {
        assert_eq!(corollary_4_1_predict(FRAC_PI_2, FRAC_PI_2).unwrap(), 0.0);
        assert_abs_diff_eq!(corollary_4_1_predict(FRAC_PI_2, PI).unwrap(), FRAC_PI_6, epsilon = 1e-15);
        assert_abs_diff_eq!(corollary_4_1_predict(PI, FRAC_PI_2).unwrap(), -FRAC_PI_6, epsilon = 1e-15);
        assert!(matches!(corollary_4_1_predict(1.0, 1.0), Err(Error::OutOfHypothesis(_))));
        assert!(matches!(corollary_4_1_predict(0.0, PI), Err(Error::Input(_))));
    }

    #[test]
    fn real_trace_examples() {
        let opts = RealTraceOptions { samples: 4000, ..RealTraceOptions::default() };
        let h = ModelDomain::right_half_plane();
        let r = proposition_4_1_scenario(FRAC_PI_2, 1.0, &h, &opts).unwrap();
        assert!(r.agree, "{r:?}");
        let u = ModelDomain::rotated_half_plane(FRAC_PI_3, c(0.0, 0.0)).unwrap();
        let r = proposition_4_1_scenario(FRAC_PI_3, 1.0, &u, &opts).unwrap();
        assert!(r.agree && (r.measured_angle - FRAC_PI_3).abs() < 0.02, "{r:?}");
        let shifted = ModelDomain::rotated_half_plane(FRAC_PI_3, c(0.3, 0.0)).unwrap();
        let r = proposition_4_1_scenario(FRAC_PI_3, 1.0, &shifted, &opts).unwrap();
        assert!(r.agree, "{r:?}");
        let too_far = ModelDomain::rotated_half_plane(FRAC_PI_3, c(2.0, 0.0)).unwrap();
        assert!(matches!(proposition_4_1_scenario(FRAC_PI_3, 1.0, &too_far, &opts), Err(Error::Precondition(_))));
    }

    #[test]
    fn trajectories_approach_tau() {
        for model in catalog() {
            let z = c(0.1, 0.4);
            let d: Vec<f64> = [2.0, 5.0, 12.0]
                .iter()
                .map(|&t| (trajectory(&model, z, t).unwrap() - model.denjoy_wolff()).norm())
                .collect();
            assert!(d[0] > d[1] && d[1] > d[2], "{:?} {d:?}", model.kind());
        }
    }

    fn disk_point() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.9, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn semigroup_law(z in disk_point(), s in 0.0f64..5.0, t in 0.0f64..5.0, k in 0usize..5) {
            let model = &catalog()[k];
            let a = trajectory(model, trajectory(model, z, t).unwrap(), s).unwrap();
            let b = trajectory(model, z, s + t).unwrap();
            prop_assert!(hyperbolic_distance_disk(a, b).unwrap() < 1e-9);
        }

        #[test]
        fn koenigs_conjugation(z in disk_point(), t in 0.0f64..50.0, k in 0usize..5) {
            let model = &catalog()[k];
            // strip trajectories sit within 1e-9 of tau after t = 20
            let t = if k == 0 { t / 10.0 } else { t };
            let phi = trajectory(model, z, t).unwrap();
            let r = model.h(phi).unwrap() - model.h(z).unwrap() - t;
            prop_assert!(r.norm() < 1e-9 * (1.0 + t));
        }
    }
}
