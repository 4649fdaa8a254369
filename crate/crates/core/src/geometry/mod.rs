//! Closed-form conformal atoms and hyperbolic distance in the unit disk and
//! the right half-plane.
//!
//! Both metrics use the curvature `-4` normalization, so that
//! `k(0, r) = artanh(r)` in the disk and `k(1, x) = ln(x) / 2` along the
//! positive axis of the right half-plane.

mod chain;
mod moebius;

pub use chain::{
    sector_straightening, sector_to_right_half_plane, ChainRegion, ConformalAtom, ConformalChain,
    Direction,
};
pub use moebius::Moebius;

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A finite point of the complex plane.
pub type ComplexPoint = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c(re: f64, im: f64) -> ComplexPoint {
    Complex64::new(re, im)
}

#[inline]
pub fn is_finite(z: ComplexPoint) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// `a - b` as an unwrapped difference in `(-pi, pi]`.
#[inline]
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// Converts a pseudo-hyperbolic distance `m` into the hyperbolic distance
/// `artanh(m)`, using `1 - m^2` computed independently when `m` is close to 1.
fn pseudo_to_distance(m: f64, one_minus_m2: impl FnOnce() -> f64) -> f64 {
    if m < 0.5 {
        return m.atanh();
    }
    // artanh(m) = ln(1+m) - ln(1-m^2)/2, exact in terms of 1 - m^2
    (1.0 + m).ln() - 0.5 * one_minus_m2().ln()
}

fn one_minus_abs2(z: ComplexPoint) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// Hyperbolic distance in the unit disk.
pub fn hyperbolic_distance_disk(z: ComplexPoint, w: ComplexPoint) -> Result<f64> {
    for p in [z, w] {
        if !is_finite(p) || p.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "point {p} is not inside the unit disk"
            )));
        }
    }
    if z == w {
        return Ok(0.0);
    }
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    let m = ((z - w).norm() / den).min(1.0);
    Ok(pseudo_to_distance(m, || {
        one_minus_abs2(z) * one_minus_abs2(w) / (den * den)
    }))
}

/// Hyperbolic distance in the right half-plane `Re z > 0`.
///
/// Evaluated with the half-plane pseudo-distance `|z - w| / |z + conj(w)|`,
/// which agrees with the pullback of the disk metric through the Cayley map.
pub fn hyperbolic_distance_halfplane(z: ComplexPoint, w: ComplexPoint) -> Result<f64> {
    for p in [z, w] {
        if !is_finite(p) || p.re <= 0.0 {
            return Err(Error::Domain(format!(
                "point {p} is not inside the right half-plane"
            )));
        }
    }
    if z == w {
        return Ok(0.0);
    }
    let den = (z + w.conj()).norm();
    let m = ((z - w).norm() / den).min(1.0);
    Ok(pseudo_to_distance(m, || 4.0 * z.re * w.re / (den * den)))
}

/// Cayley transform `(z - 1) / (z + 1)`, right half-plane onto the disk.
#[inline]
pub fn cayley(z: ComplexPoint) -> ComplexPoint {
    (z - 1.0) / (z + 1.0)
}

/// Inverse Cayley transform `(1 + z) / (1 - z)`.
#[inline]
pub fn cayley_inverse(z: ComplexPoint) -> ComplexPoint {
    (1.0 + z) / (1.0 - z)
}

/// Serde adapter reading a complex number written either as a real number or
/// as `[re, im]`; always written back as `[re, im]`.
pub mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    impl From<Repr> for Complex64 {
        fn from(r: Repr) -> Self {
            match r {
                Repr::Real(x) => Complex64::new(x, 0.0),
                Repr::Pair([re, im]) => Complex64::new(re, im),
            }
        }
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Repr::deserialize(d).map(Complex64::from)
    }

    pub mod option {
        use super::Repr;
        use num_complex::Complex64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
            z.map(|z| [z.re, z.im]).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
            Ok(Option::<Repr>::deserialize(d)?.map(Complex64::from))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn disk_distance_examples() {
        let z = c(0.2, -0.4);
        assert_eq!(hyperbolic_distance_disk(z, z).unwrap(), 0.0);
        // (1/2) ln 3
        assert_abs_diff_eq!(
            hyperbolic_distance_disk(c(0.0, 0.0), c(0.5, 0.0)).unwrap(),
            0.549_306_144_334_054_8,
            epsilon = 1e-15
        );
        let a = hyperbolic_distance_disk(c(0.0, 0.3), c(0.0, -0.3)).unwrap();
        let b = hyperbolic_distance_disk(c(0.3, 0.0), c(-0.3, 0.0)).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }

    #[test]
    fn disk_distance_rejects_boundary() {
        assert!(matches!(
            hyperbolic_distance_disk(c(1.0, 0.0), c(0.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(hyperbolic_distance_disk(c(0.0, 0.0), c(0.8, 0.8)).is_err());
        assert!(hyperbolic_distance_disk(c(f64::NAN, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn disk_distance_near_boundary_is_finite_and_accurate() {
        // k(0, r) = artanh(r); for r = 1 - 1e-15 the naive form loses all digits.
        let r = 1.0 - 1e-15;
        let d = hyperbolic_distance_disk(c(0.0, 0.0), c(r, 0.0)).unwrap();
        let expected = 0.5 * ((1.0 + r) / (1.0 - r)).ln();
        assert!(d.is_finite());
        assert!((d - expected).abs() < 1e-3);
        // Two points very close to each other and to the boundary
        let z = c(1.0 - 1e-12, 0.0);
        let w = c(1.0 - 2e-12, 0.0);
        let d = hyperbolic_distance_disk(z, w).unwrap();
        // k = ln((1-w)/(1-z))/2 asymptotically: ln 2 / 2
        assert!((d - 0.5 * 2f64.ln()).abs() < 1e-3, "{d}");
    }

    #[test]
    fn halfplane_distance_examples() {
        assert_eq!(hyperbolic_distance_halfplane(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), 0.0);
        let e = Complex64::from_polar(1.0, PI / 3.0);
        let base = hyperbolic_distance_halfplane(c(1.0, 0.0), e).unwrap();
        let shifted = hyperbolic_distance_halfplane(c(1.0, 5.0), e + c(0.0, 5.0)).unwrap();
        assert_abs_diff_eq!(base, shifted, epsilon = 1e-12);
        // artanh(tan(pi/6))
        assert_abs_diff_eq!(base, 0.658_478_948_462_408_2, epsilon = 1e-12);
        assert!(matches!(
            hyperbolic_distance_halfplane(c(0.0, 1.0), c(1.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn wrap_angle_range() {
        assert_abs_diff_eq!(wrap_angle(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(-PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(angle_diff(-3.0, 3.0), 2.0 * PI - 6.0, epsilon = 1e-12);
    }

    fn disk_point() -> impl Strategy<Value = ComplexPoint> {
        (0.0f64..0.999, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn half_plane_point() -> impl Strategy<Value = ComplexPoint> {
        (1e-3f64..1e3, -50.0f64..50.0).prop_map(|(x, y)| c(x, y))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn cayley_pullback_matches_halfplane(z in half_plane_point(), w in half_plane_point()) {
            let direct = hyperbolic_distance_halfplane(z, w).unwrap();
            let pulled = hyperbolic_distance_disk(cayley(z), cayley(w)).unwrap();
            prop_assert!((direct - pulled).abs() < 1e-7 * (1.0 + direct));
        }

        #[test]
        fn conformal_invariance_disk_to_halfplane(z in disk_point(), w in disk_point()) {
            let kd = hyperbolic_distance_disk(z, w).unwrap();
            let kh = hyperbolic_distance_halfplane(cayley_inverse(z), cayley_inverse(w)).unwrap();
            prop_assert!((kd - kh).abs() < 1e-10 * (1.0 + kd));
        }

        #[test]
        fn halfplane_scaling_translation_invariance(
            z in half_plane_point(), w in half_plane_point(),
            r in 0.01f64..100.0, y in -100.0f64..100.0,
        ) {
            let a = hyperbolic_distance_halfplane(z, w).unwrap();
            let b = hyperbolic_distance_halfplane(z * r + c(0.0, y), w * r + c(0.0, y)).unwrap();
            prop_assert!((a - b).abs() < 1e-10 * (1.0 + a));
        }

        #[test]
        fn disk_triangle_and_symmetry(z in disk_point(), w in disk_point(), u in disk_point()) {
            let zw = hyperbolic_distance_disk(z, w).unwrap();
            let wz = hyperbolic_distance_disk(w, z).unwrap();
            let zu = hyperbolic_distance_disk(z, u).unwrap();
            let uw = hyperbolic_distance_disk(u, w).unwrap();
            prop_assert!((zw - wz).abs() < 1e-12 * (1.0 + zw));
            prop_assert!(zw <= zu + uw + 1e-9);
        }

        #[test]
        fn halfplane_triangle_and_symmetry(z in half_plane_point(), w in half_plane_point(), u in half_plane_point()) {
            let zw = hyperbolic_distance_halfplane(z, w).unwrap();
            let wz = hyperbolic_distance_halfplane(w, z).unwrap();
            let zu = hyperbolic_distance_halfplane(z, u).unwrap();
            let uw = hyperbolic_distance_halfplane(u, w).unwrap();
            prop_assert!((zw - wz).abs() < 1e-12 * (1.0 + zw));
            prop_assert!(zw <= zu + uw + 1e-9);
        }
    }
}
