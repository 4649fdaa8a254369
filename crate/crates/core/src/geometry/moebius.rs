use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A Möbius transformation `(a z + b) / (c z + d)` with `ad - bc != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moebius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl Moebius {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Moebius { a, b, c, d };
        let det = m.det();
        if !(det.norm() > 0.0) || !det.re.is_finite() || !det.im.is_finite() {
            return Err(Error::Input(format!("degenerate Möbius map (ad - bc = {det})")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Moebius { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `z -> e^{i angle} z`
    pub fn rotation(angle: f64) -> Self {
        Moebius { a: Complex64::from_polar(1.0, angle), b: ZERO, c: ZERO, d: ONE }
    }

    pub fn scaling(factor: f64) -> Self {
        Moebius { a: Complex64::new(factor, 0.0), b: ZERO, c: ZERO, d: ONE }
    }

    pub fn translation(offset: Complex64) -> Self {
        Moebius { a: ONE, b: offset, c: ZERO, d: ONE }
    }

    /// `(z - 1) / (z + 1)`
    pub fn cayley() -> Self {
        Moebius { a: ONE, b: -ONE, c: ONE, d: ONE }
    }

    /// `(1 + z) / (1 - z)`
    pub fn cayley_inverse() -> Self {
        Moebius { a: ONE, b: ONE, c: -ONE, d: ONE }
    }

    /// Disk automorphism `(z + p) / (1 + conj(p) z)` sending 0 to `p`.
    pub fn disk_translation(p: Complex64) -> Self {
        Moebius { a: ONE, b: p, c: p.conj(), d: ONE }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den == ZERO {
            return Err(Error::Domain(format!("{z} is the pole of a Möbius map")));
        }
        let w = (self.a * z + self.b) / den;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::Domain(format!("{z} maps to infinity")));
        }
        Ok(w)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Moebius) -> Moebius {
        Moebius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Moebius {
        Moebius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Rescales the coefficients so the largest has modulus one.
    pub fn normalized(self) -> Moebius {
        let s = [self.a, self.b, self.c, self.d]
            .iter()
            .map(|x| x.norm())
            .fold(0.0f64, f64::max);
        if s > 0.0 && s.is_finite() {
            Moebius { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn cayley_pair() {
        let cay = Moebius::cayley();
        assert!(close(cay.apply(Complex64::new(1.0, 0.0)).unwrap(), ZERO));
        assert!(close(cay.inverse().apply(ZERO).unwrap(), ONE));
        let z = Complex64::new(0.3, 2.0);
        let back = Moebius::cayley_inverse().apply(cay.apply(z).unwrap()).unwrap();
        assert!(close(back, z));
    }

    #[test]
    fn composition_order() {
        let t = Moebius::translation(Complex64::new(1.0, 0.0));
        let r = Moebius::rotation(std::f64::consts::FRAC_PI_2);
        // r ∘ t : z -> i (z + 1)
        let z = Complex64::new(2.0, 0.0);
        let w = r.compose(&t).apply(z).unwrap();
        assert_abs_diff_eq!(w.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.im, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn pole_and_degenerate() {
        assert!(Moebius::cayley().apply(Complex64::new(-1.0, 0.0)).is_err());
        assert!(Moebius::new(ONE, ONE, ONE, ONE).is_err());
    }

    #[test]
    fn disk_translation_moves_origin() {
        let p = Complex64::new(0.2, -0.5);
        assert!(close(Moebius::disk_translation(p).apply(ZERO).unwrap(), p));
    }
}
