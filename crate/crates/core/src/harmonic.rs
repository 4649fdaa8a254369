//! Harmonic measure: closed forms for half-planes, sectors and disk arcs,
//! level sets in the disk, a walk-on-spheres estimator, and the strong Markov
//! decomposition as a numerical identity.

use crate::domains::{DomainKind, ModelDomain};
use crate::error::{Error, Result};
use crate::geometry::{complex_serde, wrap_angle, Moebius};
use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

/// `omega(z, [a, b], upper half-plane) = arg((z - b) / (z - a)) / pi`.
pub fn hm_halfplane_interval(z: Complex64, a: f64, b: f64) -> Result<f64> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("{z} is not in the upper half-plane")));
    }
    if !(a < b) {
        return Err(Error::Input(format!("interval [{a}, {b}] is empty")));
    }
    Ok(((z - b) / (z - a)).arg() / PI)
}

/// `omega(z, {arg z = beta}, {a < arg z < beta}) = (arg z - a) / (beta - a)`,
/// with `arg z` taken continuously in `(a, beta)`.
pub fn hm_sector_side(z: Complex64, a: f64, beta: f64) -> Result<f64> {
    if !(a < beta && beta - a <= TAU) {
        return Err(Error::Input(format!("sector ({a}, {beta}) is not a valid opening")));
    }
    if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("{z} is not inside the sector")));
    }
    let phi = a + (z.arg() - a).rem_euclid(TAU);
    if !(phi > a && phi < beta) {
        return Err(Error::Domain(format!("{z} is not inside the sector ({a}, {beta})")));
    }
    Ok((phi - a) / (beta - a))
}

/// Arc of the unit circle running counterclockwise from `start` over `length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskArc {
    pub start: f64,
    pub length: f64,
}

impl DiskArc {
    /// Arc from angle `from` to angle `to`, traversed in the given direction.
    pub fn new(from: f64, to: f64, counterclockwise: bool) -> Result<Self> {
        if !from.is_finite() || !to.is_finite() {
            return Err(Error::Input("arc endpoints must be finite".into()));
        }
        let (start, end) = if counterclockwise { (from, to) } else { (to, from) };
        let length = (end - start).rem_euclid(TAU);
        if !(1e-14..=TAU - 1e-14).contains(&length) {
            return Err(Error::Input("disk arc endpoints must be distinct".into()));
        }
        Ok(DiskArc { start: wrap_angle(start), length })
    }

    pub fn upper_semicircle() -> Self {
        DiskArc { start: 0.0, length: PI }
    }

    pub fn lower_semicircle() -> Self {
        DiskArc { start: PI, length: PI }
    }

    pub fn start_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.start)
    }

    pub fn end_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.start + self.length)
    }

    pub fn complement(&self) -> DiskArc {
        DiskArc { start: wrap_angle(self.start + self.length), length: TAU - self.length }
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        (angle - self.start).rem_euclid(TAU) <= self.length
    }
}

/// Möbius map `M` of the disk onto the upper half-plane sending `arc` onto the
/// real interval `[a, b]`; returns `(M, a, b)`.
///
/// `M(z) = i (1 + e^{-i psi} z) / (1 - e^{-i psi} z)` with the pole `psi` at the
/// midpoint of the complementary arc, so the boundary point `e^{i phi}` goes
/// to `-cot((phi - psi) / 2)`.
pub fn disk_arc_to_halfplane(arc: &DiskArc) -> (Moebius, f64, f64) {
    let psi = arc.start + arc.length + 0.5 * (TAU - arc.length);
    let e = Complex64::from_polar(1.0, -psi);
    let i = Complex64::new(0.0, 1.0);
    let m = Moebius { a: i * e, b: i, c: -e, d: Complex64::new(1.0, 0.0) };
    let u_start = PI - 0.5 * arc.length;
    let u_end = PI + 0.5 * arc.length;
    (m, -1.0 / (0.5 * u_start).tan(), -1.0 / (0.5 * u_end).tan())
}

/// Harmonic measure of a boundary arc seen from `z` in the disk.
pub fn hm_disk_arc(z: Complex64, arc: &DiskArc) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("{z} is not inside the unit disk")));
    }
    let (m, a, b) = disk_arc_to_halfplane(arc);
    let w = m.apply(z)?;
    hm_halfplane_interval(Complex64::new(w.re, w.im.max(f64::MIN_POSITIVE)), a, b)
}

/// Level set `{omega(., arc, D) = k}`: a circular arc through the endpoints
/// of `arc`, or the diameter when `arc` is a half-circle and `k = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum LevelSet {
    Diameter {
        #[serde(with = "complex_serde")]
        start: Complex64,
        #[serde(with = "complex_serde")]
        end: Complex64,
    },
    Arc {
        #[serde(with = "complex_serde")]
        center: Complex64,
        radius: f64,
        #[serde(with = "complex_serde")]
        start: Complex64,
        #[serde(with = "complex_serde")]
        end: Complex64,
        /// Direction of travel from `start` to `end` around `center`.
        counterclockwise: bool,
    },
}

impl LevelSet {
    pub fn is_diameter(&self) -> bool {
        matches!(self, LevelSet::Diameter { .. })
    }

    pub fn endpoints(&self) -> (Complex64, Complex64) {
        match *self {
            LevelSet::Diameter { start, end } | LevelSet::Arc { start, end, .. } => (start, end),
        }
    }

    /// `n` interior points, evenly spaced in parameter, endpoints excluded.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        let frac = |j: usize| (j + 1) as f64 / (n + 1) as f64;
        match *self {
            LevelSet::Diameter { start, end } => (0..n).map(|j| start + (end - start) * frac(j)).collect(),
            LevelSet::Arc { center, radius, start, end, counterclockwise } => {
                let t0 = (start - center).arg();
                let sweep = arc_sweep(t0, (end - center).arg(), counterclockwise);
                (0..n)
                    .map(|j| center + Complex64::from_polar(radius, t0 + sweep * frac(j)))
                    .collect()
            }
        }
    }

    /// Polyline including both endpoints, `n` interior vertices.
    pub fn polyline(&self, n: usize) -> Vec<Complex64> {
        let (a, b) = self.endpoints();
        if self.is_diameter() {
            return vec![a, b];
        }
        let mut pts = vec![a];
        pts.extend(self.sample(n));
        pts.push(b);
        pts
    }
}

fn arc_sweep(t0: f64, t1: f64, counterclockwise: bool) -> f64 {
    if counterclockwise {
        (t1 - t0).rem_euclid(TAU)
    } else {
        -(t0 - t1).rem_euclid(TAU)
    }
}

fn circumcircle(p1: Complex64, p2: Complex64, p3: Complex64) -> Option<(Complex64, f64)> {
    let (b, c) = (p2 - p1, p3 - p1);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    if d.abs() < 1e-300 {
        return None;
    }
    let (b2, c2) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * b2 - b.im * c2) / d;
    let uy = (b.re * c2 - c.re * b2) / d;
    let center = p1 + Complex64::new(ux, uy);
    Some((center, (p1 - center).norm()))
}

pub fn level_set_arc(arc: &DiskArc, k: f64) -> Result<LevelSet> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Input(format!("level must lie in (0, 1), got {k}")));
    }
    let (start, end) = (arc.start_point(), arc.end_point());
    if (arc.length - PI).abs() <= 1e-12 && (k - 0.5).abs() <= 1e-12 {
        return Ok(LevelSet::Diameter { start, end });
    }
    let (m, a, b) = disk_arc_to_halfplane(arc);
    // In the half-plane the level set is the circular arc over [a, b] seen
    // under the angle k pi.
    let h = 0.5 * (b - a);
    let s = (k * PI).sin();
    let center_u = Complex64::new(0.5 * (a + b), h * (k * PI).cos() / s);
    let top = center_u + Complex64::new(0.0, h / s);
    let apex = m.inverse().apply(top)?;
    let (center, radius) = circumcircle(start, apex, end)
        .ok_or_else(|| Error::Domain("degenerate level set".into()))?;
    // orient so that the sweep from start to end passes through the apex
    let t0 = (start - center).arg();
    let ta = arc_sweep(t0, (apex - center).arg(), true);
    let te = arc_sweep(t0, (end - center).arg(), true);
    Ok(LevelSet::Arc { center, radius, start, end, counterclockwise: ta < te })
}

/// Target sets on the boundary of a model domain.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundarySet {
    /// `[a, b]` on the real axis.
    RealInterval { a: f64, b: f64 },
    /// The ray `{vertex + r e^{i angle} : r > 0}`.
    SectorSide {
        #[serde(default, with = "complex_serde")]
        vertex: Complex64,
        angle: f64,
    },
    /// Upper (`Im > 0`) or lower half of the vertical line `Re z = x`.
    VerticalSide { x: f64, upper: bool },
    /// Arc of the unit circle from angle `from` to angle `to`.
    DiskArc {
        from: f64,
        to: f64,
        #[serde(default = "default_true")]
        counterclockwise: bool,
    },
    /// Indicator evaluated on boundary points.
    #[serde(skip)]
    Custom(Arc<dyn Fn(Complex64) -> bool + Send + Sync>),
}

fn default_true() -> bool {
    true
}

impl fmt::Debug for BoundarySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySet::RealInterval { a, b } => write!(f, "RealInterval [{a}, {b}]"),
            BoundarySet::SectorSide { vertex, angle } => write!(f, "SectorSide {vertex} + r e^(i {angle})"),
            BoundarySet::VerticalSide { x, upper } => write!(f, "VerticalSide Re = {x}, upper = {upper}"),
            BoundarySet::DiskArc { from, to, counterclockwise } => {
                write!(f, "DiskArc {from} -> {to} (ccw = {counterclockwise})")
            }
            BoundarySet::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl BoundarySet {
    pub fn disk_arc(arc: &DiskArc) -> Self {
        BoundarySet::DiskArc { from: arc.start, to: arc.start + arc.length, counterclockwise: true }
    }

    pub fn as_disk_arc(&self) -> Option<Result<DiskArc>> {
        match *self {
            BoundarySet::DiskArc { from, to, counterclockwise } => Some(DiskArc::new(from, to, counterclockwise)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BoundarySet::RealInterval { a, b } if !(a < b) => {
                Err(Error::Input(format!("interval [{a}, {b}] is empty")))
            }
            BoundarySet::DiskArc { .. } => self.as_disk_arc().expect("disk arc").map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Membership of a point already known to lie on the domain boundary.
    pub fn contains_boundary_point(&self, p: Complex64) -> bool {
        match self {
            BoundarySet::RealInterval { a, b } => p.re >= *a && p.re <= *b,
            BoundarySet::SectorSide { vertex, angle } => {
                let v = p - vertex;
                v.norm() > 0.0 && wrap_angle(v.arg() - angle).abs() < 1e-6
            }
            BoundarySet::VerticalSide { upper, .. } => {
                if *upper {
                    p.im > 0.0
                } else {
                    p.im < 0.0
                }
            }
            BoundarySet::DiskArc { .. } => match self.as_disk_arc() {
                Some(Ok(arc)) => arc.contains_angle(p.arg()),
                _ => false,
            },
            BoundarySet::Custom(f) => f(p),
        }
    }

    /// A few representative points of the set.
    fn representatives(&self) -> Vec<Complex64> {
        match *self {
            BoundarySet::RealInterval { a, b } => vec![Complex64::new(0.5 * (a + b), 0.0)],
            BoundarySet::SectorSide { vertex, angle } => {
                vec![vertex + Complex64::from_polar(1.0, angle), vertex + Complex64::from_polar(10.0, angle)]
            }
            BoundarySet::VerticalSide { x, upper } => {
                let s = if upper { 1.0 } else { -1.0 };
                vec![Complex64::new(x, s), Complex64::new(x, 10.0 * s)]
            }
            BoundarySet::DiskArc { .. } => match self.as_disk_arc() {
                Some(Ok(arc)) => [0.25, 0.5, 0.75]
                    .iter()
                    .map(|f| Complex64::from_polar(1.0, arc.start + f * arc.length))
                    .collect(),
                _ => vec![],
            },
            BoundarySet::Custom(_) => vec![],
        }
    }
}

fn on_boundary(domain: &ModelDomain, p: Complex64) -> bool {
    if domain.contains(p) {
        return false;
    }
    let h = 1e-7 * (1.0 + p.norm());
    (0..16).any(|j| domain.contains(p + Complex64::from_polar(h, TAU * j as f64 / 16.0)))
}

/// Vertex and side angles `(v, lo, hi)` of domains of the form
/// `{lo < arg(z - v) < hi}`.
fn angular_domain(domain: &ModelDomain) -> Option<(Complex64, f64, f64)> {
    match *domain.kind() {
        DomainKind::HalfPlane { shift } => Some((Complex64::new(shift, 0.0), -FRAC_PI_2, FRAC_PI_2)),
        DomainKind::RotatedHalfPlane { theta, shift } => Some((shift, -theta, PI - theta)),
        DomainKind::Sector { alpha1, alpha2, shift } => Some((shift, -alpha1, alpha2)),
        _ => None,
    }
}

/// Closed-form harmonic measure where the catalog has one:
/// disk arcs in the disk, real intervals in the upper half-plane, and sides
/// of half-planes and sectors.
pub fn exact_harmonic_measure(domain: &ModelDomain, target: &BoundarySet, z: Complex64) -> Result<f64> {
    target.validate()?;
    if !domain.contains(z) {
        return Err(Error::Domain(format!("{z} is not in the domain")));
    }
    let none = || Err(Error::Input(format!("no closed form for {target:?} in {:?}", domain.kind())));
    if let (DomainKind::Disk, Some(arc)) = (domain.kind(), target.as_disk_arc()) {
        return hm_disk_arc(z, &arc?);
    }
    if let (&DomainKind::RotatedHalfPlane { theta, shift }, &BoundarySet::RealInterval { a, b }) =
        (domain.kind(), target)
    {
        if theta == 0.0 && shift.im == 0.0 {
            return hm_halfplane_interval(z - shift.re, a - shift.re, b - shift.re);
        }
        return none();
    }
    let Some((v, lo, hi)) = angular_domain(domain) else { return none() };
    let (vertex, angle) = match *target {
        BoundarySet::SectorSide { vertex, angle } => (vertex, angle),
        BoundarySet::VerticalSide { x, upper } => {
            (Complex64::new(x, 0.0), if upper { FRAC_PI_2 } else { -FRAC_PI_2 })
        }
        _ => return none(),
    };
    if (vertex - v).norm() > 1e-12 * (1.0 + v.norm()) {
        return none();
    }
    let w = hm_sector_side(z - v, lo, hi)?;
    if wrap_angle(angle - hi).abs() < 1e-12 {
        Ok(w)
    } else if wrap_angle(angle - lo).abs() < 1e-12 {
        Ok(1.0 - w)
    } else {
        none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McOptions {
    pub walks: usize,
    /// Upper bound on a single jump radius.
    pub step_cap: f64,
    /// Walks stop within this distance of the boundary.
    pub boundary_eps: f64,
    /// Walks exceeding this many steps are flagged unreliable.
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { walks: 100_000, step_cap: f64::INFINITY, boundary_eps: 1e-5, max_steps: 10_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub walks: usize,
    pub unreliable_walks: usize,
    pub unreliable: bool,
}

enum WalkSpace {
    /// Walk in the domain itself with its boundary distance.
    Direct,
    /// Walk in the unit disk and map the exit forward.
    Disk,
}

fn walk_space(domain: &ModelDomain) -> Result<WalkSpace> {
    if domain.is_bounded() {
        return Ok(WalkSpace::Direct);
    }
    if domain.riemann_chain().is_ok() {
        return Ok(WalkSpace::Disk);
    }
    if domain.boundary_distance(Complex64::new(0.0, 0.0)).is_some() {
        return Ok(WalkSpace::Direct);
    }
    Err(Error::Input("domain has neither a Riemann map nor a boundary distance".into()))
}

/// One walk; returns the exit point in domain coordinates (None at an
/// infinite end) and whether the walk finished within `max_steps`.
fn walk_once(
    domain: &ModelDomain,
    space: &WalkSpace,
    start: Complex64,
    opts: &McOptions,
    rng: &mut ChaCha8Rng,
) -> (Option<Complex64>, bool) {
    let dist = |p: Complex64| match space {
        WalkSpace::Disk => 1.0 - p.norm(),
        WalkSpace::Direct => domain.boundary_distance(p).unwrap_or(0.0),
    };
    let mut p = start;
    let mut steps = 0;
    let mut d = dist(p);
    while d > opts.boundary_eps && steps < opts.max_steps {
        let r = d.min(opts.step_cap);
        p += Complex64::from_polar(r, TAU * rng.random::<f64>());
        d = dist(p);
        steps += 1;
    }
    let finished = d <= opts.boundary_eps;
    let exit = match space {
        WalkSpace::Disk => domain.boundary_from_disk(p / p.norm()),
        WalkSpace::Direct => Some(domain.project_to_boundary(p).unwrap_or(p)),
    };
    (exit, finished)
}

/// Walk-on-spheres estimate of `E[score(exit)]` from `z`.
///
/// Walk `i` draws from stream `i` of the seed and the scores are summed in
/// index order, so the estimate does not depend on the thread count.
pub fn monte_carlo_exit_mean(
    domain: &ModelDomain,
    z: Complex64,
    opts: &McOptions,
    score: impl Fn(Option<Complex64>) -> f64 + Sync,
) -> Result<McEstimate> {
    if opts.walks == 0 {
        return Err(Error::Input("walk count must be positive".into()));
    }
    if !(opts.boundary_eps > 0.0) || !(opts.step_cap > 0.0) {
        return Err(Error::Input("boundary_eps and step_cap must be positive".into()));
    }
    if !domain.contains(z) {
        return Err(Error::Domain(format!("{z} is not in the domain")));
    }
    let space = walk_space(domain)?;
    let start = match space {
        WalkSpace::Disk => domain.to_disk(z)?,
        WalkSpace::Direct => z,
    };
    let results: Vec<(f64, bool)> = (0..opts.walks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let (exit, finished) = walk_once(domain, &space, start, opts, &mut rng);
            (score(exit), finished)
        })
        .collect();
    let n = results.len() as f64;
    let mean = results.iter().map(|r| r.0).sum::<f64>() / n;
    let var = if results.len() > 1 {
        results.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let unreliable_walks = results.iter().filter(|r| !r.1).count();
    Ok(McEstimate {
        mean,
        std_err: (var / n).sqrt(),
        walks: results.len(),
        unreliable_walks,
        unreliable: unreliable_walks > 0,
    })
}

/// Walk-on-spheres estimate of `omega(z, target, domain)`.
///
/// Bounded catalog domains are walked directly; unbounded ones are walked in
/// the unit disk and the exit point is carried to the boundary by the
/// Riemann map.
pub fn hm_monte_carlo(domain: &ModelDomain, target: &BoundarySet, z: Complex64, opts: &McOptions) -> Result<McEstimate> {
    target.validate()?;
    monte_carlo_exit_mean(domain, z, opts, |exit| match exit {
        Some(p) if target.contains_boundary_point(p) => 1.0,
        _ => 0.0,
    })
}

/// `omega(z, B, domain)`, exact when a closed form exists and by
/// walk-on-spheres otherwise. Returns the value and its standard error.
fn harmonic_measure_any(domain: &ModelDomain, target: &BoundarySet, z: Complex64, opts: &McOptions) -> Result<(f64, f64)> {
    match exact_harmonic_measure(domain, target, z) {
        Ok(v) => Ok((v, 0.0)),
        Err(Error::Input(_)) => hm_monte_carlo(domain, target, z, opts).map(|e| (e.mean, e.std_err)),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongMarkovReport {
    /// `omega(z, B, outer)`.
    pub lhs: f64,
    /// `omega(z, B ∩ ∂inner, inner) + ∫ omega(ζ, B, outer) omega(z, dζ, inner)`.
    pub rhs: f64,
    pub residual: f64,
    pub std_err: f64,
    pub unreliable: bool,
}

/// Both sides of the strong Markov decomposition of `omega(z, B, outer)`
/// through the exit distribution of `inner ⊂ outer`.
///
/// The right-hand side is one walk-on-spheres run in `inner`: an exit on
/// the outer boundary scores the indicator of `B`, an exit elsewhere scores
/// `omega(ζ, B, outer)`.
pub fn strong_markov_residual(
    inner: &ModelDomain,
    outer: &ModelDomain,
    target: &BoundarySet,
    z: Complex64,
    opts: &McOptions,
) -> Result<StrongMarkovReport> {
    target.validate()?;
    let reps = target.representatives();
    if reps.is_empty() && !matches!(target, BoundarySet::Custom(_)) {
        return Err(Error::Input("target set has no points".into()));
    }
    if let Some(p) = reps.iter().find(|p| !on_boundary(outer, **p)) {
        return Err(Error::Input(format!("target point {p} is not on the outer boundary")));
    }
    if !inner.contains(z) || !outer.contains(z) {
        return Err(Error::Domain(format!("{z} is not in the inner domain")));
    }
    if inner.descriptor() == outer.descriptor() {
        // no boundary of the inner domain lies off the outer boundary
        let (v, se) = harmonic_measure_any(outer, target, z, opts)?;
        return Ok(StrongMarkovReport { lhs: v, rhs: v, residual: 0.0, std_err: se, unreliable: false });
    }
    let (lhs, lhs_se) = harmonic_measure_any(outer, target, z, opts)?;
    let score = |exit: Option<Complex64>| -> f64 {
        let Some(zeta) = exit else { return 0.0 };
        if outer.contains(zeta) {
            harmonic_measure_any(outer, target, zeta, opts).map(|r| r.0).unwrap_or(0.0)
        } else if target.contains_boundary_point(zeta) {
            1.0
        } else {
            0.0
        }
    };
    let est = monte_carlo_exit_mean(inner, z, opts, score)?;
    Ok(StrongMarkovReport {
        lhs,
        rhs: est.mean,
        residual: (lhs - est.mean).abs(),
        std_err: (est.std_err.powi(2) + lhs_se.powi(2)).sqrt(),
        unreliable: est.unreliable,
    })
}
