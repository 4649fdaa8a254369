//! Model domains with membership tests, closed-form Riemann maps from the unit
//! disk, marked boundary ends, horodisks and the horodisk sandwich audit.
//!
//! Every catalog Riemann map `f: D -> domain` sends the disk point `1` to the
//! marked end (the disk itself keeps `f = id` and records its end point).

use crate::error::{Error, Result};
use crate::geometry::{
    cayley, complex_serde, hyperbolic_distance_disk, sector_to_right_half_plane, wrap_angle,
    ChainRegion, ConformalAtom, ConformalChain, Direction,
};
use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A marked boundary end: an accessible finite boundary point, or infinity
/// reached along a ray that is eventually inside the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundaryEnd {
    Finite {
        #[serde(with = "complex_serde")]
        point: Complex64,
    },
    Infinity {
        ray_angle: f64,
    },
}

/// Shape parameters of a model domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    /// Unit disk.
    Disk,
    /// `Re z > shift`.
    HalfPlane {
        #[serde(default)]
        shift: f64,
    },
    /// `{-theta < arg z < pi - theta} + shift`; `theta = pi/2` is the right
    /// half-plane and `theta = 0` the upper half-plane.
    RotatedHalfPlane {
        theta: f64,
        #[serde(default, with = "complex_serde")]
        shift: Complex64,
    },
    /// `{-alpha1 < arg z < alpha2} + shift` with `alpha1, alpha2` in `(0, pi]`.
    Sector {
        alpha1: f64,
        alpha2: f64,
        #[serde(default, with = "complex_serde")]
        shift: Complex64,
    },
    /// `|Im z| < half_width`.
    Strip { half_width: f64 },
    /// Upper half of the unit disk.
    HalfDisk,
    /// Image of the unit disk under a user chain.
    Custom { atoms: Vec<ConformalAtom> },
}

/// JSON form of a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDescriptor {
    #[serde(flatten)]
    pub kind: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_end: Option<BoundaryEnd>,
}

type Predicate = Arc<dyn Fn(Complex64) -> bool + Send + Sync>;
type DistanceBound = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

/// User callbacks for a custom domain.
#[derive(Clone)]
pub struct CustomHooks {
    pub membership: Predicate,
    /// Conservative lower bound on the Euclidean distance to the boundary.
    pub boundary_distance: Option<DistanceBound>,
}

/// A simply connected domain with its Riemann map and marked end.
#[derive(Clone)]
pub struct ModelDomain {
    kind: DomainKind,
    marked_end: BoundaryEnd,
    disk_end: Complex64,
    riemann: Option<ConformalChain>,
    hooks: Option<CustomHooks>,
}

impl fmt::Debug for ModelDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelDomain")
            .field("kind", &self.kind)
            .field("marked_end", &self.marked_end)
            .field("has_riemann_map", &self.riemann.is_some())
            .field("has_hooks", &self.hooks.is_some())
            .finish()
    }
}

fn chain(atoms: Vec<ConformalAtom>) -> Result<ConformalChain> {
    ConformalChain::new(atoms, ChainRegion::Disk, ChainRegion::Unchecked)
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{what} must be finite")))
    }
}

fn in_open_arc(angle: f64, lo: f64, hi: f64) -> bool {
    // lo < angle < hi, with angle taken modulo 2 pi into the window around lo
    let a = lo + (angle - lo).rem_euclid(2.0 * PI);
    a > lo && a < hi
}

impl ModelDomain {
    pub fn disk() -> Self {
        Self::build(DomainKind::Disk, None).expect("catalog domain")
    }

    /// The unit disk with marked end `sigma` on the unit circle.
    pub fn disk_with_end(sigma: Complex64) -> Result<Self> {
        Self::build(DomainKind::Disk, Some(BoundaryEnd::Finite { point: sigma }))
    }

    /// `Re z > shift`.
    pub fn half_plane(shift: f64) -> Result<Self> {
        Self::build(DomainKind::HalfPlane { shift }, None)
    }

    pub fn right_half_plane() -> Self {
        Self::half_plane(0.0).expect("catalog domain")
    }

    pub fn upper_half_plane() -> Self {
        Self::rotated_half_plane(0.0, Complex64::new(0.0, 0.0)).expect("catalog domain")
    }

    pub fn rotated_half_plane(theta: f64, shift: Complex64) -> Result<Self> {
        Self::build(DomainKind::RotatedHalfPlane { theta, shift }, None)
    }

    pub fn sector(alpha1: f64, alpha2: f64, shift: Complex64) -> Result<Self> {
        Self::build(DomainKind::Sector { alpha1, alpha2, shift }, None)
    }

    pub fn strip(half_width: f64) -> Result<Self> {
        Self::build(DomainKind::Strip { half_width }, None)
    }

    pub fn half_disk() -> Self {
        Self::build(DomainKind::HalfDisk, None).expect("catalog domain")
    }

    /// Image of the disk under `riemann` (source must be the disk).
    pub fn from_chain(riemann: ConformalChain, marked_end: Option<BoundaryEnd>) -> Result<Self> {
        let kind = DomainKind::Custom { atoms: riemann.atoms().to_vec() };
        Self::build(kind, marked_end)
    }

    /// Custom domain from a membership predicate and an optional Riemann map.
    /// Operations that need the map fail with an input error when it is absent.
    pub fn custom(
        membership: impl Fn(Complex64) -> bool + Send + Sync + 'static,
        riemann: Option<ConformalChain>,
        boundary_distance: Option<Arc<dyn Fn(Complex64) -> f64 + Send + Sync>>,
        marked_end: Option<BoundaryEnd>,
    ) -> Result<Self> {
        let atoms = riemann.as_ref().map(|c| c.atoms().to_vec()).unwrap_or_default();
        let mut d = ModelDomain {
            kind: DomainKind::Custom { atoms },
            marked_end: BoundaryEnd::Finite { point: ONE },
            disk_end: ONE,
            riemann,
            hooks: Some(CustomHooks { membership: Arc::new(membership), boundary_distance }),
        };
        d.marked_end = match marked_end {
            Some(e) => e,
            None => d.default_custom_end(),
        };
        Ok(d)
    }

    pub fn from_descriptor(desc: &DomainDescriptor) -> Result<Self> {
        Self::build(desc.kind.clone(), desc.marked_end)
    }

    pub fn descriptor(&self) -> DomainDescriptor {
        DomainDescriptor { kind: self.kind.clone(), marked_end: Some(self.marked_end) }
    }

    fn build(kind: DomainKind, marked_end: Option<BoundaryEnd>) -> Result<Self> {
        use ConformalAtom as A;
        let (riemann, default_end) = match &kind {
            DomainKind::Disk => (chain(vec![])?, BoundaryEnd::Finite { point: ONE }),
            DomainKind::HalfPlane { shift } => {
                check_finite(*shift, "half-plane shift")?;
                (
                    chain(vec![A::InverseCayley, A::Translation { offset: Complex64::new(*shift, 0.0) }])?,
                    BoundaryEnd::Infinity { ray_angle: 0.0 },
                )
            }
            DomainKind::RotatedHalfPlane { theta, shift } => {
                check_finite(*theta, "rotation angle")?;
                if !crate::geometry::is_finite(*shift) {
                    return Err(Error::Input("shift must be finite".into()));
                }
                (
                    chain(vec![
                        A::InverseCayley,
                        A::Rotation { angle: FRAC_PI_2 - theta },
                        A::Translation { offset: *shift },
                    ])?,
                    BoundaryEnd::Infinity { ray_angle: wrap_angle(FRAC_PI_2 - theta) },
                )
            }
            DomainKind::Sector { alpha1, alpha2, shift } => {
                if !crate::geometry::is_finite(*shift) {
                    return Err(Error::Input("shift must be finite".into()));
                }
                let open = sector_to_right_half_plane(*alpha1, *alpha2)?;
                let mut atoms = vec![A::InverseCayley];
                atoms.extend(open.inverted().atoms().iter().copied());
                atoms.push(A::Translation { offset: *shift });
                (chain(atoms)?, BoundaryEnd::Infinity { ray_angle: 0.5 * (alpha2 - alpha1) })
            }
            DomainKind::Strip { half_width } => {
                if !(*half_width > 0.0 && half_width.is_finite()) {
                    return Err(Error::Input(format!("strip half-width must be positive, got {half_width}")));
                }
                let flip = matches!(marked_end, Some(BoundaryEnd::Infinity { ray_angle }) if ray_angle.cos() < 0.0);
                let mut atoms = vec![A::InverseCayley, A::Log, A::Scaling { factor: 2.0 * half_width / PI }];
                if flip {
                    atoms.push(A::Rotation { angle: PI });
                }
                (chain(atoms)?, BoundaryEnd::Infinity { ray_angle: 0.0 })
            }
            DomainKind::HalfDisk => {
                // Inverse of: (1+z)/(1-z) onto the first quadrant, squaring onto
                // the upper half-plane, then (w-i)/(w+i) onto the disk.
                let i = Complex64::new(0.0, 1.0);
                let to_disk = ConformalChain::new(
                    vec![
                        A::InverseCayley,
                        A::Power { exponent: 2.0, sector: [0.0, FRAC_PI_2] },
                        A::Moebius { a: ONE, b: -i, c: ONE, d: i },
                    ],
                    ChainRegion::Unchecked,
                    ChainRegion::Disk,
                )?;
                (chain(to_disk.inverted().atoms().to_vec())?, BoundaryEnd::Finite { point: ONE })
            }
            DomainKind::Custom { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::Input("custom domain needs at least one atom".into()));
                }
                (chain(atoms.clone())?, BoundaryEnd::Finite { point: ONE })
            }
        };
        let mut d = ModelDomain { kind, marked_end: default_end, disk_end: ONE, riemann: Some(riemann), hooks: None };
        if matches!(d.kind, DomainKind::Custom { .. }) && marked_end.is_none() {
            d.marked_end = d.default_custom_end();
        }
        if let Some(end) = marked_end {
            d.set_marked_end(end)?;
        }
        Ok(d)
    }

    fn default_custom_end(&self) -> BoundaryEnd {
        let Some(ch) = &self.riemann else {
            return BoundaryEnd::Finite { point: ONE };
        };
        match ch.apply_boundary(ONE, Direction::Forward) {
            Some(p) if p.norm() < 1e12 => BoundaryEnd::Finite { point: p },
            _ => {
                let near = ch.forward(Complex64::new(1.0 - 1e-9, 0.0)).unwrap_or(ONE);
                BoundaryEnd::Infinity { ray_angle: near.arg() }
            }
        }
    }

    /// Replaces the marked end after validating it against the domain.
    pub fn with_marked_end(mut self, end: BoundaryEnd) -> Result<Self> {
        self.set_marked_end(end)?;
        Ok(self)
    }

    fn set_marked_end(&mut self, end: BoundaryEnd) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(msg));
        match (&self.kind, end) {
            (DomainKind::Disk, BoundaryEnd::Finite { point }) => {
                if (point.norm() - 1.0).abs() > 1e-12 {
                    return bad(format!("disk end {point} is not on the unit circle"));
                }
                self.disk_end = point / point.norm();
            }
            (DomainKind::HalfPlane { .. }, BoundaryEnd::Infinity { ray_angle }) => {
                if !in_open_arc(ray_angle, -FRAC_PI_2, FRAC_PI_2) {
                    return bad(format!("ray angle {ray_angle} does not stay in the half-plane"));
                }
            }
            (DomainKind::RotatedHalfPlane { theta, .. }, BoundaryEnd::Infinity { ray_angle }) => {
                if !in_open_arc(ray_angle, -theta, PI - theta) {
                    return bad(format!("ray angle {ray_angle} does not stay in the half-plane"));
                }
            }
            (DomainKind::Sector { alpha1, alpha2, .. }, BoundaryEnd::Infinity { ray_angle }) => {
                if !in_open_arc(ray_angle, -alpha1, *alpha2) {
                    return bad(format!("ray angle {ray_angle} does not stay in the sector"));
                }
            }
            (DomainKind::Strip { .. }, BoundaryEnd::Infinity { ray_angle }) => {
                let c = ray_angle.cos();
                if (c.abs() - 1.0).abs() > 1e-12 {
                    return bad("strip ends are reached along the real axis (ray angle 0 or pi)".into());
                }
                let flipped = self
                    .riemann
                    .as_ref()
                    .is_some_and(|ch| ch.atoms().len() == 4);
                if flipped != (c < 0.0) {
                    return bad("strip end does not match the Riemann map orientation".into());
                }
            }
            (DomainKind::HalfDisk, BoundaryEnd::Finite { point }) => {
                if (point - ONE).norm() > 1e-12 {
                    return bad("the half-disk supports the marked end 1 only".into());
                }
            }
            (DomainKind::Custom { .. }, _) => {}
            (kind, end) => {
                return bad(format!("marked end {end:?} is not supported for {kind:?}"));
            }
        }
        self.marked_end = end;
        Ok(())
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn marked_end(&self) -> BoundaryEnd {
        self.marked_end
    }

    /// Point of the unit circle corresponding to the marked end.
    pub fn disk_end(&self) -> Complex64 {
        self.disk_end
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.kind, DomainKind::Disk | DomainKind::HalfDisk)
    }

    pub fn riemann_chain(&self) -> Result<&ConformalChain> {
        self.riemann
            .as_ref()
            .ok_or_else(|| Error::Input("domain has no Riemann map".into()))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !crate::geometry::is_finite(z) {
            return false;
        }
        match &self.kind {
            DomainKind::Disk => z.norm() < 1.0,
            DomainKind::HalfPlane { shift } => z.re > *shift,
            DomainKind::RotatedHalfPlane { theta, shift } => {
                // rotate the domain onto the right half-plane
                (Complex64::from_polar(1.0, theta - FRAC_PI_2) * (z - shift)).re > 0.0
            }
            DomainKind::Sector { alpha1, alpha2, shift } => {
                let w = z - shift;
                w.norm() > 0.0 && {
                    let a = w.arg();
                    // the closed negative axis belongs to the sector only when both sides open to pi
                    if *alpha1 >= PI && *alpha2 >= PI {
                        !(w.im == 0.0 && w.re < 0.0)
                    } else {
                        a > -alpha1 && a < *alpha2
                    }
                }
            }
            DomainKind::Strip { half_width } => z.im.abs() < *half_width,
            DomainKind::HalfDisk => z.norm() < 1.0 && z.im > 0.0,
            DomainKind::Custom { .. } => match &self.hooks {
                Some(h) => (h.membership)(z),
                None => self.chain_membership(z),
            },
        }
    }

    fn chain_membership(&self, z: Complex64) -> bool {
        let Some(ch) = &self.riemann else { return false };
        match ch.inverse(z) {
            Ok(q) if q.norm() < 1.0 => ch
                .forward(q)
                .map(|back| (back - z).norm() <= 1e-9 * (1.0 + z.norm()))
                .unwrap_or(false),
            _ => false,
        }
    }

    /// `f(q)` for `q` in the unit disk.
    pub fn from_disk(&self, q: Complex64) -> Result<Complex64> {
        self.riemann_chain()?.forward(q)
    }

    /// `f^{-1}(z)` for `z` in the domain.
    pub fn to_disk(&self, z: Complex64) -> Result<Complex64> {
        let ch = self.riemann_chain()?;
        if !self.contains(z) {
            return Err(Error::Domain(format!("{z} is not in the domain")));
        }
        let q = ch.inverse(z)?;
        if q.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "{z} is numerically on the boundary (preimage {q})"
            )));
        }
        Ok(q)
    }

    /// Boundary value of the Riemann map at a point of the unit circle;
    /// `None` at the preimage of an infinite end.
    pub fn boundary_from_disk(&self, zeta: Complex64) -> Option<Complex64> {
        let p = self.riemann.as_ref()?.apply_boundary(zeta, Direction::Forward)?;
        (p.norm() < 1e15).then_some(p)
    }

    /// Hyperbolic distance of the domain, pulled back to the disk.
    pub fn hyperbolic_distance(&self, z: Complex64, w: Complex64) -> Result<f64> {
        hyperbolic_distance_disk(self.to_disk(z)?, self.to_disk(w)?)
    }

    /// Euclidean distance from an interior point to the boundary (a lower
    /// bound for custom domains).
    pub fn boundary_distance(&self, z: Complex64) -> Option<f64> {
        let d = match &self.kind {
            DomainKind::Disk => 1.0 - z.norm(),
            DomainKind::HalfPlane { shift } => z.re - shift,
            DomainKind::RotatedHalfPlane { theta, shift } => {
                (Complex64::from_polar(1.0, theta - FRAC_PI_2) * (z - shift)).re
            }
            DomainKind::Sector { alpha1, alpha2, shift } => {
                let w = z - shift;
                let r = w.norm();
                let a = w.arg();
                [-alpha1, *alpha2]
                    .iter()
                    .map(|side| {
                        let delta = wrap_angle(a - side).abs();
                        if delta >= FRAC_PI_2 {
                            r
                        } else {
                            r * delta.sin()
                        }
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            DomainKind::Strip { half_width } => half_width - z.im.abs(),
            DomainKind::HalfDisk => (1.0 - z.norm()).min(z.im),
            DomainKind::Custom { .. } => {
                let hook = self.hooks.as_ref()?.boundary_distance.as_ref()?;
                hook(z)
            }
        };
        Some(d.max(0.0))
    }

    /// Nearest boundary point, for the bounded catalog domains.
    pub fn project_to_boundary(&self, z: Complex64) -> Option<Complex64> {
        match self.kind {
            DomainKind::Disk => Some(if z.norm() > 0.0 { z / z.norm() } else { ONE }),
            DomainKind::HalfDisk => {
                if 1.0 - z.norm() <= z.im {
                    Some(z / z.norm())
                } else {
                    Some(Complex64::new(z.re, 0.0))
                }
            }
            _ => None,
        }
    }
}

/// Disk horodisk `|sigma - q|^2 < R (1 - |q|^2)`.
pub fn disk_horodisk_contains(sigma: Complex64, radius: f64, q: Complex64) -> bool {
    let r2 = q.norm_sqr();
    (sigma - q).norm_sqr() < radius * (1.0 - r2)
}

/// Horodisk `E(xi, R)` of a domain centered at its marked end.
#[derive(Debug, Clone)]
pub struct Horodisk {
    pub domain: ModelDomain,
    pub radius: f64,
}

impl Horodisk {
    pub fn new(domain: ModelDomain, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Input(format!("horodisk radius must be positive, got {radius}")));
        }
        domain.riemann_chain()?;
        Ok(Horodisk { domain, radius })
    }

    pub fn center(&self) -> BoundaryEnd {
        self.domain.marked_end()
    }

    pub fn contains(&self, z: Complex64) -> Result<bool> {
        let q = self.domain.to_disk(z)?;
        Ok(disk_horodisk_contains(self.domain.disk_end(), self.radius, q))
    }

    /// Euclidean center and radius of the horodisk in the disk picture.
    pub fn disk_circle(&self) -> (Complex64, f64) {
        let r = self.radius;
        (self.domain.disk_end() / (1.0 + r), r / (1.0 + r))
    }
}

/// Offset `a(R)` with `E_H(inf, R) = H + a(R)` for the right half-plane.
///
/// Located by bisection on the horocycle level along the positive axis,
/// using the disk inequality through the Cayley map.
pub fn halfplane_offset_for_radius(radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Input(format!("horodisk radius must be positive, got {radius}")));
    }
    // For a real point q = C(x) the disk inequality |1 - q|^2 < R (1 - q^2)
    // reduces to 1 - q < R (1 + q); both factors are formed from x directly.
    let inside = |x: f64| {
        let one_minus_q = 2.0 / (x + 1.0);
        let one_plus_q = 2.0 * x / (x + 1.0);
        one_minus_q < radius * one_plus_q
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while !inside(hi) {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Sampling("horodisk offset not bracketed".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse of [`halfplane_offset_for_radius`].
pub fn radius_for_halfplane_offset(offset: f64) -> Result<f64> {
    if !(offset > 0.0 && offset.is_finite()) {
        return Err(Error::Input(format!("offset must be positive, got {offset}")));
    }
    // a(R) is decreasing in R; bisect in log R
    let (mut lo, mut hi) = (-600.0f64, 600.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if halfplane_offset_for_radius(mid.exp())? > offset {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SandwichVerdict {
    Holds,
    /// A horodisk point lies outside the inner domain.
    FailsInner,
    /// An inner-domain point lies outside the outer domain.
    FailsOuter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub verdict: SandwichVerdict,
    #[serde(with = "complex_serde::option")]
    pub witness: Option<Complex64>,
    pub samples: usize,
    pub seed: u64,
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
}

/// Disk point near `sigma`, drawn in the half-plane picture `sigma * C(w)`
/// with `w = offset + x + iy`.
fn sample_near_end(rng: &mut ChaCha8Rng, sigma: Complex64, offset: f64) -> Complex64 {
    let x = log_uniform(rng, 1e-6, 1e6);
    let y = log_uniform(rng, 1e-6, 1e6) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    sigma * cayley(Complex64::new(offset + x, y))
}

fn sample_disk_ball(rng: &mut ChaCha8Rng, center: Complex64, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    center + Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
}

const DISK_CAP: f64 = 1.0 - 1e-9;

/// Monte-Carlo audit of `E_U(xi, R) ⊂ inner ⊆ outer`, with `xi` the marked
/// end of `outer`.
///
/// Half of the horodisk samples are stratified near the end, half uniform in
/// the horodisk; the inner domain is sampled the same way. Each sample uses
/// its own stream of the seed, so the first witness found is independent of
/// the thread count.
pub fn sandwich_check(
    inner: &ModelDomain,
    outer: &ModelDomain,
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<SandwichReport> {
    if samples == 0 {
        return Err(Error::Sampling("sample count must be positive".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Sampling(format!("degenerate horodisk radius {radius}")));
    }
    let f_outer = outer.riemann_chain()?;
    let f_inner = inner.riemann_chain()?;
    let sigma_u = outer.disk_end();
    let sigma_d = inner.disk_end();
    let (hc, hr) = (sigma_u / (1.0 + radius), radius / (1.0 + radius));
    let inv_r = 1.0 / radius;

    let horodisk_point = |i: usize| -> Option<Complex64> {
        let mut rng = sample_rng(seed, i as u64);
        let q = if i % 2 == 0 {
            sample_near_end(&mut rng, sigma_u, inv_r)
        } else {
            sample_disk_ball(&mut rng, hc, hr)
        };
        if q.norm() >= DISK_CAP || !disk_horodisk_contains(sigma_u, radius, q) {
            return None;
        }
        f_outer.forward(q).ok()
    };
    let witness = (0..samples)
        .into_par_iter()
        .filter_map(|i| horodisk_point(i).filter(|z| !inner.contains(*z)))
        .find_first(|_| true);
    if let Some(w) = witness {
        return Ok(SandwichReport { verdict: SandwichVerdict::FailsInner, witness: Some(w), samples, seed });
    }

    let inner_point = |i: usize| -> Option<Complex64> {
        let mut rng = sample_rng(seed, (samples + i) as u64);
        let q = if i % 2 == 0 {
            sample_near_end(&mut rng, sigma_d, 0.0)
        } else {
            sample_disk_ball(&mut rng, Complex64::new(0.0, 0.0), DISK_CAP)
        };
        if q.norm() >= DISK_CAP {
            return None;
        }
        f_inner.forward(q).ok()
    };
    let witness = (0..samples)
        .into_par_iter()
        .filter_map(|i| inner_point(i).filter(|z| !outer.contains(*z)))
        .find_first(|_| true);
    Ok(match witness {
        Some(w) => SandwichReport { verdict: SandwichVerdict::FailsOuter, witness: Some(w), samples, seed },
        None => SandwichReport { verdict: SandwichVerdict::Holds, witness: None, samples, seed },
    })
}
