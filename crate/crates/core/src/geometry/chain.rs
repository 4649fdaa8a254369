use super::moebius::Moebius;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Slack on principal-branch sector checks for interior evaluation.
const BRANCH_SLACK: f64 = 1e-12;
/// Slack used when evaluating on the boundary of a sector.
const BOUNDARY_SLACK: f64 = 1e-9;

/// A closed-form conformal building block with an exact inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConformalAtom {
    /// `e^{i angle} z`
    Rotation { angle: f64 },
    /// `factor * z`, `factor > 0`
    Scaling { factor: f64 },
    /// `z + offset`
    Translation {
        #[serde(with = "super::complex_serde")]
        offset: Complex64,
    },
    /// `z^exponent` on the principal branch, valid for `arg z` in `sector`.
    Power { exponent: f64, sector: [f64; 2] },
    /// `(a z + b) / (c z + d)`
    Moebius { a: Complex64, b: Complex64, c: Complex64, d: Complex64 },
    /// `(z - 1) / (z + 1)`
    Cayley,
    /// `(1 + z) / (1 - z)`
    InverseCayley,
    /// Principal logarithm on the slit plane.
    Log,
    /// Exponential, inverse of `Log` on the strip `|Im z| < pi`.
    Exp,
}

impl ConformalAtom {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ConformalAtom::Rotation { angle } if !angle.is_finite() => {
                Err(Error::Input("rotation angle must be finite".into()))
            }
            ConformalAtom::Scaling { factor } if !(factor > 0.0 && factor.is_finite()) => {
                Err(Error::Input(format!("scaling factor must be positive, got {factor}")))
            }
            ConformalAtom::Translation { offset } if !super::is_finite(offset) => {
                Err(Error::Input("translation offset must be finite".into()))
            }
            ConformalAtom::Power { exponent, sector: [lo, hi] } => {
                if !(exponent > 0.0 && exponent.is_finite()) {
                    return Err(Error::Input(format!(
                        "power exponent must be positive, got {exponent}"
                    )));
                }
                let inside = |x: f64| (-PI - 1e-12..=PI + 1e-12).contains(&x);
                if !(lo < hi && inside(lo) && inside(hi)) {
                    return Err(Error::Input(format!(
                        "power sector [{lo}, {hi}] must be an ordered sub-interval of [-pi, pi]"
                    )));
                }
                if !(inside(lo * exponent) && inside(hi * exponent)) {
                    return Err(Error::Input(format!(
                        "power image sector [{}, {}] leaves the principal branch",
                        lo * exponent,
                        hi * exponent
                    )));
                }
                Ok(())
            }
            ConformalAtom::Moebius { a, b, c, d } => Moebius::new(a, b, c, d).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// The exact inverse atom.
    pub fn inverse(&self) -> ConformalAtom {
        match *self {
            ConformalAtom::Rotation { angle } => ConformalAtom::Rotation { angle: -angle },
            ConformalAtom::Scaling { factor } => ConformalAtom::Scaling { factor: 1.0 / factor },
            ConformalAtom::Translation { offset } => ConformalAtom::Translation { offset: -offset },
            ConformalAtom::Power { exponent, sector: [lo, hi] } => ConformalAtom::Power {
                exponent: 1.0 / exponent,
                sector: [lo * exponent, hi * exponent],
            },
            ConformalAtom::Moebius { a, b, c, d } => ConformalAtom::Moebius { a: d, b: -b, c: -c, d: a },
            ConformalAtom::Cayley => ConformalAtom::InverseCayley,
            ConformalAtom::InverseCayley => ConformalAtom::Cayley,
            ConformalAtom::Log => ConformalAtom::Exp,
            ConformalAtom::Exp => ConformalAtom::Log,
        }
    }

    /// Möbius form of the atom, when it has one.
    pub fn as_moebius(&self) -> Option<Moebius> {
        Some(match *self {
            ConformalAtom::Rotation { angle } => Moebius::rotation(angle),
            ConformalAtom::Scaling { factor } => Moebius::scaling(factor),
            ConformalAtom::Translation { offset } => Moebius::translation(offset),
            ConformalAtom::Moebius { a, b, c, d } => Moebius { a, b, c, d },
            ConformalAtom::Cayley => Moebius::cayley(),
            ConformalAtom::InverseCayley => Moebius::cayley_inverse(),
            _ => return None,
        })
    }

    fn apply_nonlinear(&self, z: Complex64, on_boundary: bool) -> Result<Complex64> {
        let slack = if on_boundary { BOUNDARY_SLACK } else { BRANCH_SLACK };
        match *self {
            ConformalAtom::Power { exponent, sector: [lo, hi] } => {
                if z.norm() == 0.0 {
                    return if on_boundary {
                        Ok(Complex64::new(0.0, 0.0))
                    } else {
                        Err(Error::Branch("power atom evaluated at its vertex".into()))
                    };
                }
                let arg = z.arg();
                if arg < lo - slack || arg > hi + slack {
                    return Err(Error::Branch(format!(
                        "arg {arg} outside the power sector [{lo}, {hi}]"
                    )));
                }
                let arg = arg.clamp(lo, hi);
                Ok(Complex64::from_polar(z.norm().powf(exponent), arg * exponent))
            }
            ConformalAtom::Log => {
                if z.norm() == 0.0 {
                    return Err(Error::Branch("log evaluated at 0".into()));
                }
                if !on_boundary && z.im == 0.0 && z.re < 0.0 {
                    return Err(Error::Branch("log evaluated on its branch cut".into()));
                }
                Ok(z.ln())
            }
            ConformalAtom::Exp => {
                if z.im.abs() > PI + slack {
                    return Err(Error::Branch(format!(
                        "exp argument {z} outside the strip |Im z| < pi"
                    )));
                }
                Ok(z.exp())
            }
            _ => unreachable!("Möbius-class atoms are applied as matrices"),
        }
    }
}

/// Regions used as source/target identifiers of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "region", rename_all = "snake_case")]
pub enum ChainRegion {
    /// No membership check.
    #[default]
    Unchecked,
    Disk,
    RightHalfPlane,
    UpperHalfPlane,
    /// `lo < arg z < hi`
    Sector { lo: f64, hi: f64 },
    /// `|Im z| < half_width`
    Strip { half_width: f64 },
}

impl ChainRegion {
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            ChainRegion::Unchecked => true,
            ChainRegion::Disk => z.norm() < 1.0,
            ChainRegion::RightHalfPlane => z.re > 0.0,
            ChainRegion::UpperHalfPlane => z.im > 0.0,
            ChainRegion::Sector { lo, hi } => {
                if z.norm() == 0.0 {
                    return false;
                }
                let a = z.arg();
                a > lo && a < hi
            }
            ChainRegion::Strip { half_width } => z.im.abs() < half_width,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// An ordered composition of conformal atoms.
///
/// `atoms[0]` is applied first in the forward direction; the inverse
/// direction applies the inverse atoms in reverse order. Runs of Möbius-class
/// atoms are fused into a single matrix before evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalChain {
    atoms: Vec<ConformalAtom>,
    inverse_atoms: Vec<ConformalAtom>,
    pub source: ChainRegion,
    pub target: ChainRegion,
}

impl ConformalChain {
    pub fn new(atoms: Vec<ConformalAtom>, source: ChainRegion, target: ChainRegion) -> Result<Self> {
        for a in &atoms {
            a.validate()?;
        }
        let inverse_atoms = atoms.iter().rev().map(ConformalAtom::inverse).collect();
        Ok(ConformalChain { atoms, inverse_atoms, source, target })
    }

    pub fn identity(region: ChainRegion) -> Self {
        ConformalChain { atoms: vec![], inverse_atoms: vec![], source: region, target: region }
    }

    /// Cayley transform from the right half-plane onto the disk.
    pub fn cayley() -> Self {
        ConformalChain::new(
            vec![ConformalAtom::Cayley],
            ChainRegion::RightHalfPlane,
            ChainRegion::Disk,
        )
        .expect("valid atom")
    }

    pub fn atoms(&self) -> &[ConformalAtom] {
        &self.atoms
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &ConformalChain) -> ConformalChain {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let inverse_atoms = atoms.iter().rev().map(ConformalAtom::inverse).collect();
        ConformalChain { atoms, inverse_atoms, source: self.source, target: other.target }
    }

    pub fn inverted(&self) -> ConformalChain {
        ConformalChain {
            atoms: self.inverse_atoms.clone(),
            inverse_atoms: self.atoms.clone(),
            source: self.target,
            target: self.source,
        }
    }

    pub fn apply(&self, z: Complex64, direction: Direction) -> Result<Complex64> {
        if !super::is_finite(z) {
            return Err(Error::Domain(format!("non-finite input {z}")));
        }
        let (region, atoms) = match direction {
            Direction::Forward => (self.source, &self.atoms),
            Direction::Inverse => (self.target, &self.inverse_atoms),
        };
        if !region.contains(z) {
            return Err(Error::Domain(format!("{z} is outside the chain region {region:?}")));
        }
        evaluate(atoms, z, false)
    }

    pub fn forward(&self, z: Complex64) -> Result<Complex64> {
        self.apply(z, Direction::Forward)
    }

    pub fn inverse(&self, z: Complex64) -> Result<Complex64> {
        self.apply(z, Direction::Inverse)
    }

    /// Evaluates at a boundary point with relaxed branch checks and no region
    /// check. Returns `None` when the image is not a finite point.
    pub fn apply_boundary(&self, z: Complex64, direction: Direction) -> Option<Complex64> {
        let atoms = match direction {
            Direction::Forward => &self.atoms,
            Direction::Inverse => &self.inverse_atoms,
        };
        evaluate(atoms, z, true).ok()
    }
}

fn evaluate(atoms: &[ConformalAtom], z: Complex64, on_boundary: bool) -> Result<Complex64> {
    let mut w = z;
    let mut pending: Option<Moebius> = None;
    for atom in atoms {
        match atom.as_moebius() {
            Some(m) => {
                pending = Some(match pending {
                    Some(acc) => m.compose(&acc),
                    None => m,
                });
            }
            None => {
                if let Some(m) = pending.take() {
                    w = m.apply(w)?;
                }
                w = atom.apply_nonlinear(w, on_boundary)?;
            }
        }
    }
    if let Some(m) = pending {
        w = m.apply(w)?;
    }
    if !super::is_finite(w) {
        return Err(Error::Domain(format!("{z} maps to a non-finite point")));
    }
    Ok(w)
}

/// The opening map `z -> (e^{i(α1-α2)/2} z)^{π/(α1+α2)}` from the sector
/// `-α1 < arg z < α2` onto the right half-plane.
pub fn sector_to_right_half_plane(alpha1: f64, alpha2: f64) -> Result<ConformalChain> {
    check_sector_angles(alpha1, alpha2)?;
    let total = alpha1 + alpha2;
    ConformalChain::new(
        vec![
            ConformalAtom::Rotation { angle: 0.5 * (alpha1 - alpha2) },
            ConformalAtom::Power { exponent: PI / total, sector: [-0.5 * total, 0.5 * total] },
        ],
        ChainRegion::Sector { lo: -alpha1, hi: alpha2 },
        ChainRegion::RightHalfPlane,
    )
}

fn check_sector_angles(alpha1: f64, alpha2: f64) -> Result<()> {
    let ok = |a: f64| a > 0.0 && a <= PI;
    if !(ok(alpha1) && ok(alpha2)) {
        return Err(Error::Input(format!(
            "sector angles must lie in (0, pi], got ({alpha1}, {alpha2})"
        )));
    }
    Ok(())
}

/// Straightening chain `g3 ∘ g2 ∘ g1` for the sector `U(α1, α2)`:
/// rotate to a symmetric sector, open it to the right half-plane with
/// `z^{π/(α1+α2)}`, then rotate by `-(π/2)(α1-α2)/(α1+α2)`.
///
/// The image is the half-plane `-π α1/(α1+α2) < arg w < π α2/(α1+α2)` and the
/// positive axis is mapped onto itself.
pub fn sector_straightening(alpha1: f64, alpha2: f64) -> Result<ConformalChain> {
    let total = alpha1 + alpha2;
    let open = sector_to_right_half_plane(alpha1, alpha2)?;
    let rotate = ConformalChain::new(
        vec![ConformalAtom::Rotation { angle: -0.5 * PI * (alpha1 - alpha2) / total }],
        ChainRegion::Unchecked,
        ChainRegion::Sector { lo: -PI * alpha1 / total, hi: PI * alpha2 / total },
    )?;
    Ok(open.then(&rotate))
}
