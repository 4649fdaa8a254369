//! Geodesics, hyperbolic sectors, half-components, A-sets and the exhaustion
//! test.
//!
//! A geodesic is stored through its *normalized frame*: the conformal map that
//! sends the domain to the right half-plane, the geodesic onto the positive
//! axis, its start to `1` and its forward end to infinity. In that frame
//! `gamma(t) = e^{2t}`, sectors around the ray `[1, inf)` have the closed form
//! `{|w| >= 1, R(arg w) < R} ∪ {k(1, w) < R}`, and "right of travel" is
//! `Im w < 0`.

use crate::domains::{BoundaryEnd, ModelDomain};
use crate::error::{Error, Result};
use crate::geometry::{cayley_inverse, complex_serde, hyperbolic_distance_halfplane, Moebius};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// `R(theta) = artanh |tan(theta / 2)|`, the half-plane distance from `1` to
/// `e^{i theta}`.
pub fn amplitude_r(theta: f64) -> Result<f64> {
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::Domain(format!("amplitude needs |theta| < pi/2, got {theta}")));
    }
    Ok((0.5 * theta).tan().abs().atanh())
}

/// Half-opening `beta` of the sector of amplitude `r` around a positive ray:
/// the solution of `k(r0, r0 e^{i beta}) = r`, i.e. `2 atan(tanh r)`.
pub fn beta_from_amplitude(r0: f64, amplitude: f64) -> Result<f64> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Input(format!("base point must be positive, got {r0}")));
    }
    if !(amplitude > 0.0) || amplitude.is_nan() {
        return Err(Error::Input(format!("amplitude must be positive, got {amplitude}")));
    }
    Ok(2.0 * amplitude.tanh().atan())
}

/// Distance from a normalized-frame point to the ray `[1, inf)`.
pub fn ray_distance_normalized(w: Complex64) -> f64 {
    if w.norm() >= 1.0 {
        (0.5 * w.arg()).tan().abs().atanh()
    } else {
        hyperbolic_distance_halfplane(Complex64::new(1.0, 0.0), w).unwrap_or(f64::INFINITY)
    }
}

/// A unit-speed geodesic of a model domain.
#[derive(Debug, Clone)]
pub struct Geodesic {
    domain: ModelDomain,
    start: Complex64,
    disk_end: Complex64,
    full: bool,
    /// Disk automorphism with `frame(0) = f^{-1}(start)` and `frame(1) = disk_end`.
    frame: Moebius,
    frame_inv: Moebius,
}

impl Geodesic {
    /// Ray `[0, inf)` from `start` to the marked end of the domain.
    pub fn ray(domain: ModelDomain, start: Complex64) -> Result<Self> {
        let end = domain.disk_end();
        Self::toward(domain, start, end, false)
    }

    /// Complete geodesic through `start` whose forward end is the marked end.
    pub fn line(domain: ModelDomain, start: Complex64) -> Result<Self> {
        let end = domain.disk_end();
        Self::toward(domain, start, end, true)
    }

    /// Geodesic from `start` toward the boundary point `disk_end` given in
    /// disk coordinates.
    pub fn toward(domain: ModelDomain, start: Complex64, disk_end: Complex64, full: bool) -> Result<Self> {
        if (disk_end.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Input(format!("geodesic end {disk_end} is not on the unit circle")));
        }
        let p = domain.to_disk(start)?;
        let to_origin = Moebius::disk_translation(p).inverse();
        let s = to_origin.apply(disk_end)?;
        let frame = Moebius::disk_translation(p).compose(&Moebius::rotation(s.arg()));
        let frame_inv = frame.inverse();
        Ok(Geodesic { domain, start, disk_end: disk_end / disk_end.norm(), full, frame, frame_inv })
    }

    pub fn domain(&self) -> &ModelDomain {
        &self.domain
    }

    pub fn start(&self) -> Complex64 {
        self.start
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Parameter range: `[0, inf)` for rays, the whole line otherwise.
    pub fn t_range(&self) -> (f64, f64) {
        (if self.full { f64::NEG_INFINITY } else { 0.0 }, f64::INFINITY)
    }

    pub fn forward_end(&self) -> BoundaryEnd {
        if (self.disk_end - self.domain.disk_end()).norm() < 1e-12 {
            return self.domain.marked_end();
        }
        match self.domain.boundary_from_disk(self.disk_end) {
            Some(point) => BoundaryEnd::Finite { point },
            None => BoundaryEnd::Infinity { ray_angle: f64::NAN },
        }
    }

    pub fn point(&self, t: f64) -> Result<Complex64> {
        if !t.is_finite() || (!self.full && t < 0.0) {
            return Err(Error::Input(format!("parameter {t} outside the geodesic range")));
        }
        let q = self.frame.apply(Complex64::new(t.tanh(), 0.0))?;
        self.domain.from_disk(q)
    }

    /// Coordinates in the normalized frame.
    pub fn straighten(&self, z: Complex64) -> Result<Complex64> {
        let q = self.domain.to_disk(z)?;
        let u = self.frame_inv.apply(q)?;
        Ok(cayley_inverse(u))
    }

    /// Distance from `z` to the geodesic: coarse grid bracketing and golden
    /// section over `u = 2t` on `k(w, e^u)` in the normalized frame.
    pub fn distance(&self, z: Complex64) -> Result<f64> {
        let w = self.straighten(z)?;
        Ok(min_distance_to_axis(w, self.full))
    }
}

fn min_distance_to_axis(w: Complex64, full: bool) -> f64 {
    let f = |u: f64| hyperbolic_distance_halfplane(w, Complex64::new(u.exp(), 0.0)).unwrap_or(f64::INFINITY);
    let c = w.norm().ln();
    let lo = if full { c - 20.0 } else { (c - 20.0).max(0.0) };
    let hi = (c + 20.0).max(lo + 1.0);
    const N: usize = 81;
    let grid: Vec<f64> = (0..N).map(|i| lo + (hi - lo) * i as f64 / (N - 1) as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&u| f(u)).collect();
    let best = (0..N).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(N - 1)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    [f1, f2, vals[best], f(a), f(b)].into_iter().fold(f64::INFINITY, f64::min)
}

/// `k_domain(z, gamma)`.
pub fn distance_to_geodesic(z: Complex64, gamma: &Geodesic) -> Result<f64> {
    gamma.distance(z)
}

/// Hyperbolic sector `{z : k(z, gamma) < amplitude}` around a geodesic ray.
#[derive(Debug, Clone)]
pub struct HyperbolicSector {
    pub geodesic: Geodesic,
    pub amplitude: f64,
}

impl HyperbolicSector {
    pub fn new(geodesic: Geodesic, amplitude: f64) -> Result<Self> {
        if !(amplitude > 0.0) || amplitude.is_nan() {
            return Err(Error::Input(format!("sector amplitude must be positive, got {amplitude}")));
        }
        Ok(HyperbolicSector { geodesic, amplitude })
    }

    /// Closed-form membership: a Euclidean sector of half-opening
    /// `beta_from_amplitude` beyond the start, and a hyperbolic disk around it.
    pub fn contains(&self, z: Complex64) -> Result<bool> {
        let w = self.geodesic.straighten(z)?;
        Ok(sector_contains_normalized(w, self.amplitude, self.geodesic.full))
    }
}

fn sector_contains_normalized(w: Complex64, amplitude: f64, full: bool) -> bool {
    if full || w.norm() >= 1.0 {
        let beta = 2.0 * amplitude.tanh().atan();
        w.arg().abs() < beta
    } else {
        hyperbolic_distance_halfplane(Complex64::new(1.0, 0.0), w).is_ok_and(|k| k < amplitude)
    }
}

pub fn sector_contains(sector: &HyperbolicSector, z: Complex64) -> Result<bool> {
    sector.contains(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfSide {
    /// Right of the direction of travel.
    Plus,
    /// Left of the direction of travel.
    Minus,
    OnGeodesic,
}

const SIDE_TOL: f64 = 1e-12;

fn side_of(w: Complex64) -> HalfSide {
    if w.im < -SIDE_TOL * w.norm() {
        HalfSide::Plus
    } else if w.im > SIDE_TOL * w.norm() {
        HalfSide::Minus
    } else {
        HalfSide::OnGeodesic
    }
}

/// Which side of the complete geodesic through `gamma` the point `z` lies on.
pub fn half_component(gamma: &Geodesic, z: Complex64) -> Result<HalfSide> {
    Ok(side_of(gamma.straighten(z)?))
}

/// The six configurations of an angle interval `[theta1, theta2]` in `(0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ASetCase {
    /// Both angles below `pi/2`.
    I,
    /// Both angles above `pi/2`.
    Ii,
    /// `[theta, pi - theta]`.
    Iii,
    /// `theta2 = pi/2`.
    Iv,
    /// `theta1 = pi/2 < theta2`.
    V,
    /// `theta1 < pi/2 < theta2`, not symmetric.
    Vi,
}

const ANGLE_EQ: f64 = 1e-12;

impl ASetCase {
    pub fn classify(theta1: f64, theta2: f64) -> Result<ASetCase> {
        if !(theta1 > 0.0 && theta1 <= theta2 && theta2 < PI) {
            return Err(Error::Input(format!(
                "angle interval [{theta1}, {theta2}] must satisfy 0 < theta1 <= theta2 < pi"
            )));
        }
        let eq = |a: f64, b: f64| (a - b).abs() <= ANGLE_EQ;
        Ok(if eq(theta2, FRAC_PI_2) {
            ASetCase::Iv
        } else if eq(theta1, FRAC_PI_2) {
            ASetCase::V
        } else if theta2 < FRAC_PI_2 {
            ASetCase::I
        } else if theta1 > FRAC_PI_2 {
            ASetCase::Ii
        } else if eq(theta1 + theta2, PI) {
            ASetCase::Iii
        } else {
            ASetCase::Vi
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ASetCase::I => "i",
            ASetCase::Ii => "ii",
            ASetCase::Iii => "iii",
            ASetCase::Iv => "iv",
            ASetCase::V => "v",
            ASetCase::Vi => "vi",
        }
    }
}

/// The closed set of points approaching the forward end of `geodesic` with
/// angles in `[theta1, theta2]`.
#[derive(Debug, Clone)]
pub struct ASetSpec {
    pub geodesic: Geodesic,
    pub theta1: f64,
    pub theta2: f64,
    pub case: ASetCase,
}

/// Slack on the closed sector inequalities.
const CLOSED_SLACK: f64 = 1e-12;

impl ASetSpec {
    pub fn new(geodesic: Geodesic, theta1: f64, theta2: f64) -> Result<Self> {
        let case = ASetCase::classify(theta1, theta2)?;
        Ok(ASetSpec { geodesic, theta1, theta2, case })
    }

    pub fn contains(&self, z: Complex64) -> Result<bool> {
        Ok(self.contains_normalized(self.geodesic.straighten(z)?))
    }

    /// Membership of a point given in the geodesic's normalized frame.
    pub fn contains_normalized(&self, w: Complex64) -> bool {
        aset_contains_normalized(self.case, self.theta1, self.theta2, w)
    }
}

fn aset_contains_normalized(case: ASetCase, theta1: f64, theta2: f64, w: Complex64) -> bool {
    // R(pi/2 - theta) is even in its argument; |pi/2 - theta| < pi/2 on (0, pi)
    let r = |theta: f64| (0.5 * (FRAC_PI_2 - theta)).tan().abs().atanh();
    let (r1, r2) = (r(theta1), r(theta2));
    let d = ray_distance_normalized(w);
    let side = side_of(w);
    let lower = side != HalfSide::Minus;
    let upper = side != HalfSide::Plus;
    let within = |radius: f64| d <= radius + CLOSED_SLACK;
    let beyond = |radius: f64| d >= radius - CLOSED_SLACK;
    match case {
        ASetCase::I => beyond(r2) && within(r1) && lower,
        ASetCase::Ii => beyond(r1) && within(r2) && upper,
        ASetCase::Iii => within(r1),
        ASetCase::Iv => within(r1) && lower,
        ASetCase::V => within(r2) && upper,
        ASetCase::Vi => (within(r1) && lower) || (within(r2) && upper),
    }
}

pub fn aset_contains(spec: &ASetSpec, z: Complex64) -> Result<bool> {
    spec.contains(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionOptions {
    /// Step of the angle grid used by the filling test.
    pub eps_grid: f64,
    /// Half-width of the filling bands; defaults to `eps_grid`.
    pub eps: Option<f64>,
    /// First index of the tail; defaults to half the sequence length.
    pub tail_start: Option<usize>,
}

impl Default for ExhaustionOptions {
    fn default() -> Self {
        ExhaustionOptions { eps_grid: 0.05, eps: None, tail_start: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ExhaustionVerdict {
    Exhausts,
    /// A tail point escapes the enlarged set `A(omega1, omega2)`.
    FailsContainment {
        omega1: f64,
        omega2: f64,
        index: usize,
        #[serde(with = "complex_serde")]
        witness: Complex64,
    },
    /// No tail point visits the band `A(theta - eps, theta + eps)`.
    FailsFilling { theta: f64, gap: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionReport {
    #[serde(flatten)]
    pub verdict: ExhaustionVerdict,
    pub tail_start: usize,
    pub eps: f64,
    pub eps_grid: f64,
    pub containment_pairs: Vec<[f64; 2]>,
    pub filling_angles: usize,
}

impl ExhaustionReport {
    pub fn exhausts(&self) -> bool {
        self.verdict == ExhaustionVerdict::Exhausts
    }
}

fn shrink_into(theta: f64, delta: f64, toward_zero: bool) -> f64 {
    if toward_zero {
        theta - delta.min(0.5 * theta)
    } else {
        theta + delta.min(0.5 * (PI - theta))
    }
}

/// Finite-sample check that `points` exhaust the A-set of `spec`.
///
/// Containment: every tail point lies in `A(omega1, omega2)` for
/// `omega1 = theta1 - d1`, `omega2 = theta2 + d2`, `d1, d2` in
/// `{eps, eps/2, eps/4, eps/8}`. Filling: for every `theta` on a grid of step
/// `eps_grid` over `[theta1, theta2]`, some tail point lies in
/// `A(theta - eps, theta + eps)`.
pub fn exhausts(points: &[Complex64], spec: &ASetSpec, opts: &ExhaustionOptions) -> Result<ExhaustionReport> {
    if !(opts.eps_grid > 0.0) || opts.eps_grid.is_nan() {
        return Err(Error::Input(format!("eps_grid must be positive, got {}", opts.eps_grid)));
    }
    let eps = opts.eps.unwrap_or(opts.eps_grid);
    if !(eps > 0.0) || eps.is_nan() {
        return Err(Error::Input(format!("eps must be positive, got {eps}")));
    }
    let tail_start = opts.tail_start.unwrap_or(points.len() / 2);
    if tail_start >= points.len() {
        return Err(Error::Input(format!(
            "empty tail: tail_start {tail_start} with {} points",
            points.len()
        )));
    }
    let tail: Vec<(usize, Complex64, Complex64)> = points[tail_start..]
        .iter()
        .enumerate()
        .map(|(i, &z)| Ok((tail_start + i, z, spec.geodesic.straighten(z)?)))
        .collect::<Result<_>>()?;

    let deltas = [eps, eps / 2.0, eps / 4.0, eps / 8.0];
    let pairs: Vec<[f64; 2]> = deltas
        .iter()
        .flat_map(|&d1| {
            deltas
                .iter()
                .map(move |&d2| [shrink_into(spec.theta1, d1, true), shrink_into(spec.theta2, d2, false)])
        })
        .collect();
    let mut report = ExhaustionReport {
        verdict: ExhaustionVerdict::Exhausts,
        tail_start,
        eps,
        eps_grid: opts.eps_grid,
        containment_pairs: pairs.clone(),
        filling_angles: 0,
    };

    let escape = pairs
        .par_iter()
        .map(|&[o1, o2]| {
            let case = ASetCase::classify(o1, o2)?;
            Ok(tail
                .iter()
                .find(|(_, _, w)| !aset_contains_normalized(case, o1, o2, *w))
                .map(|&(i, z, _)| (o1, o2, i, z)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    if let Some((omega1, omega2, index, witness)) = escape {
        report.verdict = ExhaustionVerdict::FailsContainment { omega1, omega2, index, witness };
        return Ok(report);
    }

    let span = spec.theta2 - spec.theta1;
    let steps = (span / opts.eps_grid).ceil() as usize;
    let thetas: Vec<f64> = (0..=steps)
        .map(|k| (spec.theta1 + k as f64 * opts.eps_grid).min(spec.theta2))
        .collect();
    report.filling_angles = thetas.len();
    let empty_band = thetas
        .par_iter()
        .map(|&theta| {
            let lo = shrink_into(theta, eps, true);
            let hi = shrink_into(theta, eps, false);
            let case = ASetCase::classify(lo, hi)?;
            let visited = tail.iter().any(|(_, _, w)| aset_contains_normalized(case, lo, hi, *w));
            Ok((!visited).then_some((theta, [lo, hi])))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    if let Some((theta, gap)) = empty_band {
        report.verdict = ExhaustionVerdict::FailsFilling { theta, gap };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{c, cayley};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

    fn h_ray(r0: f64) -> Geodesic {
        Geodesic::ray(ModelDomain::right_half_plane(), c(r0, 0.0)).unwrap()
    }

    /// Dense scan of `k(z, r0 e^{2t})` over the ray, refined around the best node.
    fn brute_distance(z: Complex64, r0: f64) -> f64 {
        let k = |rho: f64| hyperbolic_distance_halfplane(z, c(rho, 0.0)).unwrap();
        let mut best = (k(r0), r0.ln());
        let (lo, hi) = (r0.ln(), r0.ln() + 40.0);
        let n = 20000;
        for i in 0..=n {
            let u = lo + (hi - lo) * i as f64 / n as f64;
            let v = k(u.exp());
            if v < best.0 {
                best = (v, u);
            }
        }
        let mut step = (hi - lo) / n as f64;
        for _ in 0..60 {
            for u in [best.1 - step, best.1 + step] {
                if u >= lo {
                    let v = k(u.exp());
                    if v < best.0 {
                        best = (v, u);
                    }
                }
            }
            step *= 0.5;
        }
        best.0
    }

    #[test]
    fn amplitude_examples() {
        assert_eq!(amplitude_r(0.0).unwrap(), 0.0);
        assert_eq!(amplitude_r(FRAC_PI_3).unwrap(), amplitude_r(-FRAC_PI_3).unwrap());
        let r = amplitude_r(FRAC_PI_3).unwrap();
        assert_abs_diff_eq!(r, 0.658_478_948_462_408_2, epsilon = 1e-12);
        let k = hyperbolic_distance_halfplane(c(1.0, 0.0), Complex64::from_polar(1.0, FRAC_PI_3)).unwrap();
        assert_abs_diff_eq!(r, k, epsilon = 1e-10);
        assert!(matches!(amplitude_r(FRAC_PI_2), Err(Error::Domain(_))));
        assert!(amplitude_r(-2.0).is_err());
    }

    #[test]
    fn beta_examples() {
        let r = amplitude_r(FRAC_PI_3).unwrap();
        assert_abs_diff_eq!(beta_from_amplitude(2.5, r).unwrap(), FRAC_PI_3, epsilon = 1e-12);
        assert!(beta_from_amplitude(1.0, 1e-12).unwrap() < 1e-11);
        assert_eq!(beta_from_amplitude(1.0, 1.0).unwrap(), beta_from_amplitude(7.0, 1.0).unwrap());
        // defining equation at r0 = 7
        let beta = beta_from_amplitude(7.0, 1.0).unwrap();
        let k = hyperbolic_distance_halfplane(c(7.0, 0.0), Complex64::from_polar(7.0, beta)).unwrap();
        assert_abs_diff_eq!(k, 1.0, epsilon = 1e-12);
        assert!(beta_from_amplitude(1.0, 0.0).is_err());
    }

    #[test]
    fn geodesic_has_unit_speed() {
        let domains = [
            ModelDomain::right_half_plane(),
            ModelDomain::sector(FRAC_PI_2, PI, c(0.0, 0.0)).unwrap(),
            ModelDomain::disk(),
            ModelDomain::strip(1.0).unwrap(),
        ];
        for d in domains {
            let start = d.from_disk(c(0.2, -0.3)).unwrap();
            let g = Geodesic::line(d.clone(), start).unwrap();
            assert!((g.point(0.0).unwrap() - start).norm() < 1e-12);
            for (s, t) in [(0.0, 1.0), (-2.0, 3.0), (0.5, 4.5), (-1.0, -0.25)] {
                let k = d.hyperbolic_distance(g.point(s).unwrap(), g.point(t).unwrap()).unwrap();
                assert!((k - (t - s).abs()).abs() < 1e-8, "{d:?} {s} {t} {k}");
            }
            // moving forward approaches the marked end
            let q = d.to_disk(g.point(8.0).unwrap()).unwrap();
            assert!((q - d.disk_end()).norm() < 1e-6);
        }
    }

    #[test]
    fn straightening_puts_the_geodesic_on_the_axis() {
        let g = h_ray(3.0);
        assert!((g.straighten(c(3.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let w = g.straighten(g.point(1.5).unwrap()).unwrap();
        assert!((w - c(3f64.exp(), 0.0)).norm() < 1e-9);
        assert!(g.point(-1.0).is_err());
    }

    #[test]
    fn distance_examples() {
        let g = h_ray(1.0);
        assert!(distance_to_geodesic(c(5.0, 0.0), &g).unwrap() < 1e-9);
        let z = Complex64::from_polar(2.0, FRAC_PI_6);
        let d = distance_to_geodesic(z, &g).unwrap();
        assert_abs_diff_eq!(d, amplitude_r(FRAC_PI_6).unwrap(), epsilon = 1e-8);
        assert_abs_diff_eq!(d, 0.274_653_072_167_027, epsilon = 1e-8);
        assert_abs_diff_eq!(d, brute_distance(z, 1.0), epsilon = 1e-8);
        let z = Complex64::from_polar(0.5, FRAC_PI_6);
        let d = distance_to_geodesic(z, &g).unwrap();
        assert!(d > amplitude_r(FRAC_PI_6).unwrap());
        assert_abs_diff_eq!(d, brute_distance(z, 1.0), epsilon = 1e-8);
        assert_abs_diff_eq!(d, hyperbolic_distance_halfplane(c(1.0, 0.0), z).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn sector_examples() {
        let s = HyperbolicSector::new(h_ray(1.0), amplitude_r(FRAC_PI_4).unwrap()).unwrap();
        assert!(s.contains(Complex64::from_polar(3.0, FRAC_PI_6)).unwrap());
        let z = Complex64::from_polar(3.0, FRAC_PI_3);
        assert!(!s.contains(z).unwrap());
        assert!(hyperbolic_distance_halfplane(c(1.0, 0.0), z).unwrap() >= s.amplitude);
        for t in [0.0, 0.3, 2.0, 7.0] {
            assert!(s.contains(s.geodesic.point(t).unwrap()).unwrap());
        }
    }

    #[test]
    fn half_component_examples() {
        let g = Geodesic::line(ModelDomain::disk(), c(0.0, 0.0)).unwrap();
        assert_eq!(half_component(&g, c(0.0, -0.5)).unwrap(), HalfSide::Plus);
        assert_eq!(half_component(&g, c(0.0, 0.5)).unwrap(), HalfSide::Minus);
        assert_eq!(half_component(&g, c(0.3, 0.0)).unwrap(), HalfSide::OnGeodesic);
        let h = Geodesic::line(ModelDomain::right_half_plane(), c(1.0, 0.0)).unwrap();
        assert_eq!(half_component(&h, Complex64::from_polar(2.0, -FRAC_PI_8)).unwrap(), HalfSide::Plus);
    }

    #[test]
    fn aset_examples() {
        let spec = ASetSpec::new(h_ray(1.0), FRAC_PI_4, 3.0 * FRAC_PI_4).unwrap();
        assert_eq!(spec.case, ASetCase::Iii);
        assert!(spec.contains(Complex64::from_polar(2.0, FRAC_PI_8)).unwrap());
        let spec = ASetSpec::new(h_ray(1.0), FRAC_PI_6, FRAC_PI_3).unwrap();
        assert_eq!(spec.case, ASetCase::I);
        let below = Complex64::from_polar(2.0, -FRAC_PI_4);
        assert!(spec.contains(below).unwrap());
        // brute force: the band condition through the distance oracle
        let d = brute_distance(below, 1.0);
        assert!(d >= amplitude_r(FRAC_PI_2 - FRAC_PI_3).unwrap() && d <= amplitude_r(FRAC_PI_2 - FRAC_PI_6).unwrap());
        assert!(!spec.contains(Complex64::from_polar(2.0, FRAC_PI_4)).unwrap());
        assert!(ASetSpec::new(h_ray(1.0), 0.0, 1.0).is_err());
        assert!(ASetSpec::new(h_ray(1.0), 2.0, 1.0).is_err());
    }

    #[test]
    fn case_table() {
        use ASetCase::*;
        let t = |a, b| ASetCase::classify(a, b).unwrap();
        assert_eq!(t(0.2, 0.4), I);
        assert_eq!(t(2.0, 2.5), Ii);
        assert_eq!(t(FRAC_PI_3, PI - FRAC_PI_3), Iii);
        assert_eq!(t(0.3, FRAC_PI_2), Iv);
        assert_eq!(t(FRAC_PI_2, FRAC_PI_2), Iv);
        assert_eq!(t(FRAC_PI_2, 2.0), V);
        assert_eq!(t(0.3, 2.0), Vi);
    }

    #[test]
    fn case_predicates_partition_the_grid() {
        let n = 120;
        let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        for i in 1..n {
            for j in i..n {
                let (t1, t2) = (PI * i as f64 / n as f64, PI * j as f64 / n as f64);
                let fired = [
                    t2 < FRAC_PI_2 && !eq(t2, FRAC_PI_2),
                    t1 > FRAC_PI_2 && !eq(t1, FRAC_PI_2),
                    t1 < FRAC_PI_2 && t2 > FRAC_PI_2 && eq(t1 + t2, PI) && !eq(t1, FRAC_PI_2),
                    eq(t2, FRAC_PI_2),
                    eq(t1, FRAC_PI_2) && t2 > FRAC_PI_2 && !eq(t2, FRAC_PI_2),
                    t1 < FRAC_PI_2 && t2 > FRAC_PI_2 && !eq(t1 + t2, PI) && !eq(t1, FRAC_PI_2) && !eq(t2, FRAC_PI_2),
                ];
                let count = fired.iter().filter(|&&b| b).count();
                assert_eq!(count, 1, "[{t1}, {t2}] fired {fired:?}");
                let idx = fired.iter().position(|&b| b).unwrap();
                let expect = [ASetCase::I, ASetCase::Ii, ASetCase::Iii, ASetCase::Iv, ASetCase::V, ASetCase::Vi][idx];
                assert_eq!(ASetCase::classify(t1, t2).unwrap(), expect);
            }
        }
    }

    #[test]
    fn exhaustion_examples() {
        let spec = ASetSpec::new(h_ray(1.0), FRAC_PI_3, 2.0 * FRAC_PI_3).unwrap();
        let opts = ExhaustionOptions::default();
        let spiral: Vec<Complex64> =
            (1..=5000).map(|n| Complex64::from_polar(n as f64, FRAC_PI_6 * (n as f64).sin())).collect();
        let rep = exhausts(&spiral, &spec, &opts).unwrap();
        assert!(rep.exhausts(), "{rep:?}");
        let ray: Vec<Complex64> = (1..=5000).map(|n| c(n as f64, 0.0)).collect();
        match exhausts(&ray, &spec, &opts).unwrap().verdict {
            ExhaustionVerdict::FailsFilling { theta, .. } => assert_abs_diff_eq!(theta, FRAC_PI_3, epsilon = 1e-12),
            v => panic!("{v:?}"),
        }
        let diag: Vec<Complex64> = (1..=200).map(|n| Complex64::from_polar(n as f64, FRAC_PI_4)).collect();
        match exhausts(&diag, &spec, &opts).unwrap().verdict {
            ExhaustionVerdict::FailsContainment { omega1, .. } => assert!(FRAC_PI_2 - omega1 < FRAC_PI_4),
            v => panic!("{v:?}"),
        }
        let bad = ExhaustionOptions { tail_start: Some(10), ..opts };
        assert!(matches!(exhausts(&diag[..10], &spec, &bad), Err(Error::Input(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn amplitude_and_beta_are_inverse(beta in 1e-3f64..(FRAC_PI_2 - 1e-3), r0 in 0.01f64..100.0) {
            let r = amplitude_r(beta).unwrap();
            prop_assert!((beta_from_amplitude(r0, r).unwrap() - beta).abs() < 1e-10);
        }

        #[test]
        fn sector_closed_form_matches_distance(
            x in 1e-3f64..50.0, y in -50.0f64..50.0, amp in 0.05f64..2.0,
        ) {
            let g = h_ray(1.0);
            let z = c(x, y);
            let d = g.distance(z).unwrap();
            let s = HyperbolicSector::new(g, amp).unwrap();
            if (d - amp).abs() > 1e-6 {
                prop_assert_eq!(s.contains(z).unwrap(), d < amp);
            }
            prop_assert!((ray_distance_normalized(z) - d).abs() < 1e-8);
        }

        #[test]
        fn case_iii_is_a_closed_sector(theta in 0.05f64..1.5, x in 1e-3f64..20.0, y in -20.0f64..20.0) {
            let spec = ASetSpec::new(h_ray(1.0), theta, PI - theta).unwrap();
            let z = c(x, y);
            let d = ray_distance_normalized(z);
            let r = amplitude_r(FRAC_PI_2 - theta).unwrap();
            if (d - r).abs() > 1e-9 {
                prop_assert_eq!(spec.contains(z).unwrap(), d <= r);
            }
        }

        #[test]
        fn aset_membership_is_conformally_invariant(
            t1 in 0.05f64..3.0, dt in 0.0f64..3.0, x in 1e-2f64..20.0, y in -20.0f64..20.0,
        ) {
            let t2 = (t1 + dt).min(3.09);
            let spec_h = ASetSpec::new(h_ray(1.0), t1.min(t2), t2).unwrap();
            let disk_ray = Geodesic::ray(ModelDomain::disk(), c(0.0, 0.0)).unwrap();
            let spec_d = ASetSpec::new(disk_ray, t1.min(t2), t2).unwrap();
            let z = c(x, y);
            let w_h = spec_h.geodesic.straighten(z).unwrap();
            let w_d = spec_d.geodesic.straighten(cayley(z)).unwrap();
            prop_assert!((w_h - w_d).norm() < 1e-9 * (1.0 + w_h.norm()));
            let (a, b) = (spec_h.contains(z).unwrap(), spec_d.contains(cayley(z)).unwrap());
            let near_edge = {
                let d = ray_distance_normalized(w_h);
                let r = |t: f64| amplitude_r(FRAC_PI_2 - t).unwrap();
                (d - r(spec_h.theta1)).abs() < 1e-7 || (d - r(spec_h.theta2)).abs() < 1e-7 || w_h.im.abs() < 1e-9
            };
            if !near_edge {
                prop_assert_eq!(a, b);
            }
        }
    }
}
