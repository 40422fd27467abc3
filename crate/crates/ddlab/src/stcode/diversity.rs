//! Diversity analysis of explicit codebooks, and a plain-text codebook
//! format for regression anchoring.
//!
//! The exhaustive pairwise scan here is the normative oracle: any faster
//! diversity computation elsewhere must match it exactly.

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::stcode::dispersion::ExplicitCodebook;

/// Full-diversity tolerance: a minimum absolute determinant above this
/// declares every codeword difference full rank.
pub const FULL_DIVERSITY_TOL: f64 = 1e-12;

/// Result of the pairwise diversity scan.
///
/// `diversity_product = min_abs_det^(1/t)` with no extra energy
/// normalization; the `normalization` field records that convention so
/// numbers can be compared against differently-scaled conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    pub full_diversity: bool,
    pub min_abs_det: f64,
    pub diversity_product: f64,
    /// Codeword index pair attaining the minimum.
    pub argmin_pair: (usize, usize),
    /// Convention note for the product value.
    pub normalization: &'static str,
}

pub(crate) fn diversity_scan(codewords: &[ComplexMatrix]) -> Result<DiversityReport> {
    if codewords.len() < 2 {
        return Err(Error::InvalidInput(
            "diversity analysis needs at least 2 codewords".into(),
        ));
    }
    let t = codewords[0].rows();
    if codewords.iter().any(|c| !c.is_square() || c.rows() != t) {
        return Err(Error::Dimension(
            "diversity analysis requires square codewords of one size".into(),
        ));
    }
    let mut min_abs_det = f64::INFINITY;
    let mut argmin = (0usize, 1usize);
    for i in 0..codewords.len() {
        for j in (i + 1)..codewords.len() {
            let det = codewords[i].sub(&codewords[j])?.determinant()?;
            let a = det.norm();
            if a < min_abs_det {
                min_abs_det = a;
                argmin = (i, j);
            }
        }
    }
    Ok(DiversityReport {
        full_diversity: min_abs_det > FULL_DIVERSITY_TOL,
        min_abs_det,
        diversity_product: min_abs_det.powf(1.0 / t as f64),
        argmin_pair: argmin,
        normalization: "min |det(Ci - Cj)|^(1/t), no energy normalization",
    })
}

/// Exhaustive scan over all unordered codeword pairs.
pub fn diversity_report(cb: &ExplicitCodebook) -> Result<DiversityReport> {
    diversity_scan(cb.codewords())
}

/// Serialize a codebook to the plain-text interchange format.
///
/// Line 1: `t mt count label_bits`. Then, per codeword, `t` lines of `mt`
/// row-major `re im` pairs. Blank lines and `#` comments are ignored on
/// read. Floats are written with full round-trip precision.
pub fn codebook_to_text(cb: &ExplicitCodebook) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {} {} {}\n", cb.t(), cb.mt(), cb.len(), cb.label_bits()));
    for (i, cw) in cb.codewords().iter().enumerate() {
        out.push_str(&format!("# codeword {i}\n"));
        for r in 0..cb.t() {
            let mut fields = Vec::with_capacity(2 * cb.mt());
            for c in 0..cb.mt() {
                let v = cw.get(r, c);
                fields.push(format!("{:.17e}", v.re));
                fields.push(format!("{:.17e}", v.im));
            }
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parse a codebook from the plain-text interchange format.
pub fn codebook_from_text(text: &str) -> Result<ExplicitCodebook> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or(Error::EmptyInput("codebook text"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "codebook header must be 't mt count label_bits', got '{header}'"
        )));
    }
    let parse = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::InvalidInput(format!("bad integer '{s}' in codebook header")))
    };
    let (t, mt, count, label_bits) = (
        parse(fields[0])?,
        parse(fields[1])?,
        parse(fields[2])?,
        parse(fields[3])?,
    );
    let mut codewords = Vec::with_capacity(count);
    for i in 0..count {
        let mut m = ComplexMatrix::zeros(t, mt);
        for r in 0..t {
            let line = lines.next().ok_or_else(|| {
                Error::InvalidInput(format!("codebook truncated at codeword {i} row {r}"))
            })?;
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|s| {
                    s.parse::<f64>().map_err(|_| {
                        Error::InvalidInput(format!("bad float '{s}' in codebook"))
                    })
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 * mt {
                return Err(Error::InvalidInput(format!(
                    "codeword {i} row {r}: expected {} numbers, got {}",
                    2 * mt,
                    nums.len()
                )));
            }
            for c in 0..mt {
                m.set(r, c, num_complex::Complex64::new(nums[2 * c], nums[2 * c + 1]));
            }
        }
        codewords.push(m);
    }
    ExplicitCodebook::new(codewords, label_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::constellation::Constellation;
    use crate::numerics::matrix::random_unitary;
    use crate::numerics::rng::RngStream;
    use crate::stcode::dispersion::{alamouti, diagonal_from_rotation, enumerate_codebook};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn alamouti_bpsk_min_det_is_four() {
        let cb = enumerate_codebook(&alamouti(Constellation::bpsk())).unwrap();
        let report = diversity_report(&cb).unwrap();
        // Brute force over the 6 pairs gives |det| in {4, 8}; pairs differing
        // in one symbol give det = |delta|^2 = 4 exactly.
        assert_eq!(report.min_abs_det, 4.0);
        assert_eq!(report.diversity_product, 2.0);
        assert!(report.full_diversity);
    }

    #[test]
    fn identity_rotation_diagonal_code_has_no_diversity() {
        let code =
            diagonal_from_rotation(&ComplexMatrix::identity(2), Constellation::bpsk()).unwrap();
        let cb = enumerate_codebook(&code).unwrap();
        let report = diversity_report(&cb).unwrap();
        assert_eq!(report.min_abs_det, 0.0);
        assert!(!report.full_diversity);
    }

    #[test]
    fn rotated_diagonal_code_regains_diversity() {
        let r = crate::stcode::dispersion::rotation_2d(0.5536);
        let code = diagonal_from_rotation(&r, Constellation::bpsk()).unwrap();
        let cb = enumerate_codebook(&code).unwrap();
        let report = diversity_report(&cb).unwrap();
        assert!(report.full_diversity);
        // Brute force over the 4 codewords' 6 pairs: the minimum is
        // min(2 sin(2*0.5536), 4 cos(2*0.5536)) = 4 cos(1.1072).
        let expect = (4.0 * (2.0 * 0.5536).cos()).min(2.0 * (2.0 * 0.5536).sin());
        assert!(
            (report.min_abs_det - expect).abs() <= 1e-12,
            "min |det| {} vs brute-force value {expect}",
            report.min_abs_det
        );
    }

    #[test]
    fn unit_modulus_scaling_leaves_report_unchanged() {
        let cb = enumerate_codebook(&alamouti(Constellation::qpsk())).unwrap();
        let base = diversity_report(&cb).unwrap();
        let alpha = Complex64::from_polar(1.0, 1.234);
        let scaled: Vec<ComplexMatrix> =
            cb.codewords().iter().map(|m| m.scale(alpha)).collect();
        let scaled_cb = ExplicitCodebook::new(scaled, cb.label_bits()).unwrap();
        let rep = diversity_report(&scaled_cb).unwrap();
        assert!((rep.min_abs_det - base.min_abs_det).abs() <= 1e-12);
        assert_eq!(rep.argmin_pair, base.argmin_pair);
    }

    #[test]
    fn unitary_multiplication_preserves_min_det() {
        let cb = enumerate_codebook(&alamouti(Constellation::qpsk())).unwrap();
        let base = diversity_report(&cb).unwrap();
        let mut rng = RngStream::new(0xdef, 0);
        for _ in 0..3 {
            let u = random_unitary(&mut rng, 2).unwrap();
            let left: Vec<ComplexMatrix> = cb
                .codewords()
                .iter()
                .map(|m| u.mul(m).unwrap())
                .collect();
            let right: Vec<ComplexMatrix> = cb
                .codewords()
                .iter()
                .map(|m| m.mul(&u).unwrap())
                .collect();
            for set in [left, right] {
                let rep = diversity_scan(&set).unwrap();
                assert!(
                    (rep.min_abs_det - base.min_abs_det).abs() <= 1e-10,
                    "got {}, expected {}",
                    rep.min_abs_det,
                    base.min_abs_det
                );
            }
        }
    }

    #[test]
    fn report_requires_two_square_codewords() {
        let one = ExplicitCodebook::new(
            vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)],
            1,
        )
        .unwrap();
        assert!(diversity_report(&one).is_ok());
        let tall = ExplicitCodebook::new(
            vec![ComplexMatrix::zeros(3, 2), ComplexMatrix::identity(3).scale(c(0.0, 1.0)).sub(&ComplexMatrix::identity(3)).unwrap()],
            1,
        );
        // Mixed shapes are rejected at construction already.
        assert!(tall.is_err());
    }

    #[test]
    fn codebook_text_round_trips_bit_exactly() {
        let cb = enumerate_codebook(&alamouti(Constellation::qpsk())).unwrap();
        let text = codebook_to_text(&cb);
        let back = codebook_from_text(&text).unwrap();
        assert_eq!(back.len(), cb.len());
        assert_eq!(back.label_bits(), cb.label_bits());
        for (a, b) in cb.codewords().iter().zip(back.codewords().iter()) {
            assert_eq!(a, b, "text round trip must be exact");
        }
    }

    #[test]
    fn codebook_text_rejects_garbage() {
        assert!(codebook_from_text("").is_err());
        assert!(codebook_from_text("2 2 4").is_err());
        assert!(codebook_from_text("2 2 1 1\n0 0 0 0\n").is_err());
    }
}
