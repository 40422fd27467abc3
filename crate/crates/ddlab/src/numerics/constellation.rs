//! Unit-energy symbol constellations with fixed, documented bit labelings.
//!
//! A point's index in `points` *is* its bit label: transmitting label `i`
//! means transmitting `points[i]`, and bit errors between labels `i` and `j`
//! are `popcount(i ^ j)`.
//!
//! Labelings, written with the most significant label bit first:
//!
//! * BPSK: `0 -> +1`, `1 -> -1`.
//! * QPSK (Gray): label `b1 b0` maps to `((1-2*b1) + j(1-2*b0)) / sqrt(2)`,
//!   so `00 -> (+1+j)/sqrt2`, `01 -> (+1-j)/sqrt2`, `10 -> (-1+j)/sqrt2`,
//!   `11 -> (-1-j)/sqrt2`.
//! * 16-QAM (Gray per axis): label `b3 b2 b1 b0` maps to
//!   `(axis(b3,b2) + j*axis(b1,b0)) / sqrt(10)` with
//!   `axis(0,0) = -3`, `axis(0,1) = -1`, `axis(1,1) = +1`, `axis(1,0) = +3`.
//!
//! All shipped constellations have exactly unit average energy.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A named constellation with `2^bits_per_symbol` distinct unit-average-energy points.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    name: String,
    points: Vec<Complex64>,
    bits_per_symbol: usize,
}

impl Constellation {
    /// Build a constellation, validating the structural invariants:
    /// `|points| = 2^bits_per_symbol`, average energy 1 within 1e-12,
    /// and pairwise-distinct points.
    pub fn new(name: &str, points: Vec<Complex64>, bits_per_symbol: usize) -> Result<Self> {
        if points.len() != 1usize << bits_per_symbol {
            return Err(Error::InvalidInput(format!(
                "constellation {name}: {} points but {} bits/symbol",
                points.len(),
                bits_per_symbol
            )));
        }
        let energy = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
        if (energy - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "constellation {name}: average energy {energy} is not 1"
            )));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if (points[i] - points[j]).norm() == 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "constellation {name}: points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(Self {
            name: name.to_string(),
            points,
            bits_per_symbol,
        })
    }

    /// Antipodal BPSK.
    pub fn bpsk() -> Self {
        Self::new(
            "bpsk",
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            1,
        )
        .expect("bpsk is valid")
    }

    /// Gray-labeled QPSK.
    pub fn qpsk() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut points = Vec::with_capacity(4);
        for label in 0..4u32 {
            let b1 = (label >> 1) & 1;
            let b0 = label & 1;
            points.push(Complex64::new(
                (1.0 - 2.0 * b1 as f64) * s,
                (1.0 - 2.0 * b0 as f64) * s,
            ));
        }
        Self::new("qpsk", points, 2).expect("qpsk is valid")
    }

    /// Gray-labeled 16-QAM.
    pub fn qam16() -> Self {
        fn axis(hi: u32, lo: u32) -> f64 {
            match (hi, lo) {
                (0, 0) => -3.0,
                (0, 1) => -1.0,
                (1, 1) => 1.0,
                (1, 0) => 3.0,
                _ => unreachable!(),
            }
        }
        let scale = 1.0 / 10f64.sqrt();
        let mut points = Vec::with_capacity(16);
        for label in 0..16u32 {
            let i = axis((label >> 3) & 1, (label >> 2) & 1);
            let q = axis((label >> 1) & 1, label & 1);
            points.push(Complex64::new(i * scale, q * scale));
        }
        Self::new("qam16", points, 4).expect("qam16 is valid")
    }

    /// Look up a shipped constellation by name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "bpsk" => Ok(Self::bpsk()),
            "qpsk" => Ok(Self::qpsk()),
            "qam16" => Ok(Self::qam16()),
            other => Err(Error::InvalidInput(format!(
                "unknown constellation '{other}' (expected bpsk, qpsk, or qam16)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Number of points, `2^bits_per_symbol`.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// The point carrying bit label `index`.
    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    /// Index of the nearest point (Euclidean); ties resolve to the lowest index.
    pub fn nearest(&self, z: Complex64) -> usize {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_constellations_are_valid() {
        for c in [Constellation::bpsk(), Constellation::qpsk(), Constellation::qam16()] {
            assert_eq!(c.size(), 1 << c.bits_per_symbol());
            let e = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / c.size() as f64;
            assert!((e - 1.0).abs() <= 1e-12, "{}: energy {e}", c.name());
        }
    }

    #[test]
    fn nearest_recovers_every_point() {
        for c in [Constellation::bpsk(), Constellation::qpsk(), Constellation::qam16()] {
            for i in 0..c.size() {
                assert_eq!(c.nearest(c.point(i)), i);
            }
        }
    }

    #[test]
    fn qpsk_labeling_is_gray() {
        let c = Constellation::qpsk();
        // Adjacent quadrants (rotations by 90 degrees) differ in exactly one bit.
        let order = [0usize, 1, 3, 2]; // ++, +-, --, -+
        for w in 0..4 {
            let a = order[w];
            let b = order[(w + 1) % 4];
            assert_eq!((a ^ b).count_ones(), 1);
        }
        assert_eq!(c.point(0), Complex64::new(1.0, 1.0) * std::f64::consts::FRAC_1_SQRT_2);
    }

    #[test]
    fn qam16_corner_points() {
        let c = Constellation::qam16();
        let s = 1.0 / 10f64.sqrt();
        // label 0b1010 -> I = axis(1,0)=+3, Q = axis(1,0)=+3
        assert_eq!(c.point(0b1010), Complex64::new(3.0 * s, 3.0 * s));
        // label 0b0000 -> (-3, -3)
        assert_eq!(c.point(0b0000), Complex64::new(-3.0 * s, -3.0 * s));
    }

    #[test]
    fn by_name_rejects_unknown() {
        assert!(Constellation::by_name("8psk").is_err());
    }
}
