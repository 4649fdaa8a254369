//! Angle traces, cluster intervals, and classification of boundary
//! convergence by angle, by angle-set, or tangentially.

use crate::domains::{sandwich_check, ModelDomain, SandwichReport, SandwichVerdict};
use crate::error::{Error, Result};
use crate::geometry::complex_serde;
use crate::harmonic::{hm_disk_arc, DiskArc};
use crate::sectors::{exhausts, ASetSpec, ExhaustionOptions, ExhaustionReport, Geodesic};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

pub const HISTOGRAM_BINS: usize = 64;

fn check_unit(sigma: Complex64) -> Result<()> {
    if !((sigma.norm() - 1.0).abs() <= 1e-9) {
        return Err(Error::Input(format!("{sigma} is not on the unit circle")));
    }
    Ok(())
}

/// `theta_n = pi/2 - arg(1 - conj(sigma) z_n)` for points of the disk.
pub fn angle_trace(sigma: Complex64, points: &[Complex64]) -> Result<Vec<f64>> {
    check_unit(sigma)?;
    let s = sigma.conj() / sigma.norm();
    points
        .iter()
        .enumerate()
        .map(|(index, &q)| {
            if !(q.norm() < 1.0) {
                return Err(Error::Domain(format!("point {index} ({q}) is not inside the unit disk")));
            }
            let v = Complex64::new(1.0, 0.0) - s * q;
            if v.norm() == 0.0 {
                return Err(Error::UndefinedAngle { index });
            }
            Ok(FRAC_PI_2 - v.arg())
        })
        .collect()
}

/// Range of the tail of an angle list with a 64-bin histogram over it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterInterval {
    pub lo: f64,
    pub hi: f64,
    pub tail_fraction: f64,
    pub histogram: Vec<usize>,
    /// Empty bins strictly inside `[lo, hi]`.
    pub gaps: Vec<[f64; 2]>,
}

impl ClusterInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn has_gap(&self) -> bool {
        !self.gaps.is_empty()
    }
}

fn tail_start(len: usize, tail_fraction: f64) -> usize {
    let skip = ((1.0 - tail_fraction) * len as f64).floor() as usize;
    skip.min(len.saturating_sub(1))
}

pub fn cluster_interval(angles: &[f64], tail_fraction: f64) -> Result<ClusterInterval> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Input(format!("tail fraction must lie in (0, 1], got {tail_fraction}")));
    }
    if angles.is_empty() {
        return Err(Error::Input("empty angle list".into()));
    }
    let tail = &angles[tail_start(angles.len(), tail_fraction)..];
    if tail.iter().any(|a| !a.is_finite()) {
        return Err(Error::Input("angle list contains non-finite values".into()));
    }
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut histogram = vec![0usize; HISTOGRAM_BINS];
    let width = hi - lo;
    for &a in tail {
        let bin = if width > 0.0 {
            (((a - lo) / width * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)
        } else {
            0
        };
        histogram[bin] += 1;
    }
    let step = width / HISTOGRAM_BINS as f64;
    let gaps = if width > 0.0 {
        (1..HISTOGRAM_BINS - 1)
            .filter(|&b| histogram[b] == 0)
            .map(|b| [lo + step * b as f64, lo + step * (b + 1) as f64])
            .collect()
    } else {
        Vec::new()
    };
    Ok(ClusterInterval { lo, hi, tail_fraction, histogram, gaps })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Convergence {
    ByAngle { theta: f64 },
    AngleSet { theta1: f64, theta2: f64 },
    /// The tail reaches within `tol` of `0` or `pi`.
    Tangential { lo: f64, hi: f64 },
    /// The tail cluster has interior gaps.
    NonIntervalCluster { lo: f64, hi: f64 },
}

impl Convergence {
    pub fn label(&self) -> &'static str {
        match self {
            Convergence::ByAngle { .. } => "by_angle",
            Convergence::AngleSet { .. } => "angle_set",
            Convergence::Tangential { .. } => "tangential",
            Convergence::NonIntervalCluster { .. } => "non_interval_cluster",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub tail_fraction: f64,
    pub tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { tail_fraction: 0.5, tol: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub result: Convergence,
    #[serde(with = "complex_serde")]
    pub sigma: Complex64,
    pub sigma_estimated: bool,
    pub cluster: ClusterInterval,
    /// Full angle trace of the pulled-back sequence.
    #[serde(skip)]
    pub angles: Vec<f64>,
}

/// Decision rule on a cluster interval: tangential, then a single angle,
/// then a gapped cluster, then an angle-set.
pub fn decide(cluster: &ClusterInterval, tol: f64) -> Convergence {
    let (lo, hi) = (cluster.lo, cluster.hi);
    if lo < tol || hi > PI - tol {
        Convergence::Tangential { lo, hi }
    } else if cluster.width() <= tol {
        Convergence::ByAngle { theta: cluster.midpoint() }
    } else if cluster.has_gap() {
        Convergence::NonIntervalCluster { lo, hi }
    } else {
        Convergence::AngleSet { theta1: lo, theta2: hi }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Boundary point approached by the tail of `qs`.
///
/// The direction `arg q` is fitted linearly against `1 - |q|` over the last
/// quarter of the tail and extrapolated to the circle; the estimate snaps to
/// `end` when it lies within `tol` of it. Rejected when the raw directions
/// spread over more than `tol`.
fn estimate_sigma(tail: &[Complex64], end: Complex64, tol: f64) -> Result<Complex64> {
    let last = &tail[tail.len() - (tail.len() / 4).max(1)..];
    let mean: Complex64 = last.iter().map(|q| q / q.norm()).sum::<Complex64>() / last.len() as f64;
    if mean.norm() < 1e-12 {
        return Err(Error::WrongEnd("preimages do not approach a single boundary point".into()));
    }
    let rough = mean / mean.norm();
    let spread = last.iter().map(|q| (q / rough).arg().abs()).fold(0.0, f64::max);
    if spread > tol {
        return Err(Error::WrongEnd(format!(
            "preimage directions spread over {spread:.3e} rad, more than {tol}"
        )));
    }
    let xs: Vec<f64> = last.iter().map(|q| 1.0 - q.norm()).collect();
    let ys: Vec<f64> = last.iter().map(|q| (q / rough).arg()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let intercept = if sxx > 0.0 { my - sxy / sxx * mx } else { my };
    let sigma = rough * Complex64::from_polar(1.0, intercept);
    Ok(if (sigma - end).norm() <= tol { end } else { sigma })
}

fn check_approach(tail: &[Complex64], sigma: Complex64) -> Result<()> {
    let d: Vec<f64> = tail.iter().map(|q| (q - sigma).norm()).collect();
    let quarter = (d.len() / 4).max(1);
    let first = median(d[..quarter].to_vec());
    let last = median(d[d.len() - quarter..].to_vec());
    if !(last < 0.25 && (last < first || last < 1e-6)) {
        return Err(Error::WrongEnd(format!(
            "preimages stay at distance {last:.3e} from {sigma} (tail start {first:.3e})"
        )));
    }
    Ok(())
}

/// Pulls `points` back to the disk through the domain's Riemann map and
/// classifies the tail of the angle trace at `sigma` (estimated when absent).
pub fn classify_convergence(
    points: &[Complex64],
    domain: &ModelDomain,
    sigma: Option<Complex64>,
    opts: &ClassifyOptions,
) -> Result<Classification> {
    if points.len() < 4 {
        return Err(Error::Input("at least four points are needed".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let qs = points
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            domain.to_disk(z).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("point {i}: {m}")),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ts = tail_start(qs.len(), opts.tail_fraction.clamp(f64::MIN_POSITIVE, 1.0));
    let tail = &qs[ts..];
    let (sigma, sigma_estimated) = match sigma {
        Some(s) => {
            check_unit(s)?;
            (s / s.norm(), false)
        }
        None => (estimate_sigma(tail, domain.disk_end(), opts.tol)?, true),
    };
    check_approach(tail, sigma)?;
    let angles = angle_trace(sigma, &qs)?;
    let cluster = cluster_interval(&angles, opts.tail_fraction)?;
    Ok(Classification { result: decide(&cluster, opts.tol), sigma, sigma_estimated, cluster, angles })
}

/// Cluster interval of the angle read off harmonic measure: `pi * omega` when
/// `sigma` is where `arc` starts (counterclockwise), `pi * (1 - omega)` when
/// it is where `arc` ends, so that both agree with the angle trace.
pub fn angle_via_harmonic_measure(
    points: &[Complex64],
    sigma: Complex64,
    arc: &DiskArc,
    tail_fraction: f64,
) -> Result<ClusterInterval> {
    check_unit(sigma)?;
    let at_start = (arc.start_point() - sigma).norm() <= 1e-9;
    let at_end = (arc.end_point() - sigma).norm() <= 1e-9;
    if !(at_start || at_end) {
        return Err(Error::Input(format!("{sigma} is not an endpoint of the arc")));
    }
    let values = points
        .iter()
        .map(|&q| {
            let w = hm_disk_arc(q, arc)?;
            Ok(PI * if at_start { w } else { 1.0 - w })
        })
        .collect::<Result<Vec<_>>>()?;
    cluster_interval(&values, tail_fraction)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremKnobs {
    pub theta1: f64,
    pub theta2: f64,
    pub samples: usize,
    pub seed: u64,
    pub classify: ClassifyOptions,
    pub exhaustion: ExhaustionOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// Horodisk sandwich `E_U(xi, R) ⊂ Δ ⊆ U`.
    pub cond_i: SandwichReport,
    /// `gamma(0)` lies in `Δ`.
    pub cond_ii: bool,
    /// The sequence exhausts `A_U(gamma, theta1, theta2)`.
    pub cond_iii: ExhaustionReport,
    pub predicted: [f64; 2],
    pub classified: Classification,
    /// Classified cluster matches the predicted interval within `tol`.
    pub agree: bool,
}

impl TheoremReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.cond_i.verdict == SandwichVerdict::Holds && self.cond_ii && self.cond_iii.exhausts()
    }
}

/// Checks the three hypotheses (sandwich, base point, exhaustion) that force
/// the angle-set `[theta1, theta2]` and compares with the classifier.
pub fn theorem_1_1_check(
    delta: &ModelDomain,
    outer: &ModelDomain,
    radius: f64,
    gamma: &Geodesic,
    points: &[Complex64],
    knobs: &TheoremKnobs,
) -> Result<TheoremReport> {
    let cond_i = sandwich_check(delta, outer, radius, knobs.samples, knobs.seed)?;
    let cond_ii = delta.contains(gamma.start());
    let spec = ASetSpec::new(gamma.clone(), knobs.theta1, knobs.theta2)?;
    let cond_iii = exhausts(points, &spec, &knobs.exhaustion)?;
    let classified = classify_convergence(points, delta, None, &knobs.classify)?;
    let tol = knobs.classify.tol;
    let agree = !matches!(classified.result, Convergence::NonIntervalCluster { .. })
        && (classified.cluster.lo - knobs.theta1).abs() <= tol
        && (classified.cluster.hi - knobs.theta2).abs() <= tol;
    Ok(TheoremReport { cond_i, cond_ii, cond_iii, predicted: [knobs.theta1, knobs.theta2], classified, agree })
}
