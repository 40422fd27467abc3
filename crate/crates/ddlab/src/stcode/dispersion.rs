//! Linear-dispersion code representation and the shipped code constructors.

use crate::error::{Error, Result};
use crate::numerics::constellation::Constellation;
use crate::numerics::matrix::ComplexMatrix;
use num_complex::Complex64;

/// Codebook enumeration guard: at most `2^16` codewords.
pub const CODEBOOK_CAP: usize = 65_536;

/// A space-time block code given by its real linear-dispersion expansion.
///
/// `t` is the block length in time slots, `mt` the number of transmit
/// antennas (columns), and `ns` the number of real symbol coordinates.
/// Complex symbol `j` occupies coordinates `2j` (real part) and `2j + 1`
/// (imaginary part); the codeword for coordinate vector `u` is
/// `C(u) = sum_i u_i * dispersion[i]`.
///
/// Square codewords (`t = mt`) are required for determinant-based diversity
/// analysis; the rate-3/4 three-antenna design is the one shipped code with
/// `t > mt` and supports the decoders but not [`super::diversity_report`].
#[derive(Debug, Clone)]
pub struct LinearDispersionCode {
    name: String,
    t: usize,
    mt: usize,
    dispersion: Vec<ComplexMatrix>,
    constellation: Constellation,
}

impl LinearDispersionCode {
    pub fn new(
        name: &str,
        t: usize,
        mt: usize,
        dispersion: Vec<ComplexMatrix>,
        constellation: Constellation,
    ) -> Result<Self> {
        if dispersion.is_empty() {
            return Err(Error::EmptyInput("dispersion matrices"));
        }
        if dispersion.len() % 2 != 0 {
            return Err(Error::InvalidInput(
                "need an even number of real coordinates (pairs per complex symbol)".into(),
            ));
        }
        for d in &dispersion {
            if d.rows() != t || d.cols() != mt {
                return Err(Error::Dimension(format!(
                    "dispersion matrix is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    t,
                    mt
                )));
            }
        }
        // Linear independence of the dispersion set via the real Gram matrix.
        let ns = dispersion.len();
        let mut gram = ComplexMatrix::zeros(ns, ns);
        for i in 0..ns {
            for j in 0..ns {
                let mut acc = 0.0;
                for (a, b) in dispersion[i].data().iter().zip(dispersion[j].data().iter()) {
                    acc += a.re * b.re + a.im * b.im;
                }
                gram.set(i, j, Complex64::new(acc, 0.0));
            }
        }
        let det = gram.determinant()?;
        if det.norm() < 1e-12 {
            return Err(Error::Singular(
                "dispersion matrices are linearly dependent".into(),
            ));
        }
        Ok(Self {
            name: name.to_string(),
            t,
            mt,
            dispersion,
            constellation,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Block length in time slots.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Transmit antennas (codeword columns).
    pub fn mt(&self) -> usize {
        self.mt
    }

    /// Number of real symbol coordinates.
    pub fn ns(&self) -> usize {
        self.dispersion.len()
    }

    /// Complex symbols per block.
    pub fn symbols_per_block(&self) -> usize {
        self.ns() / 2
    }

    /// Code rate in complex symbols per channel use.
    pub fn rate(&self) -> f64 {
        self.symbols_per_block() as f64 / self.t as f64
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn dispersion(&self) -> &[ComplexMatrix] {
        &self.dispersion
    }

    /// Codeword from an arbitrary real coordinate vector.
    pub fn codeword_from_coords(&self, u: &[f64]) -> Result<ComplexMatrix> {
        if u.len() != self.ns() {
            return Err(Error::Dimension(format!(
                "{} coordinates for a code with ns = {}",
                u.len(),
                self.ns()
            )));
        }
        let mut c = ComplexMatrix::zeros(self.t, self.mt);
        for (ui, a) in u.iter().zip(self.dispersion.iter()) {
            if *ui == 0.0 {
                continue;
            }
            c = c.add(&a.scale(Complex64::new(*ui, 0.0)))?;
        }
        Ok(c)
    }

    /// Real coordinates of a list of complex symbols.
    pub fn coords_from_symbols(&self, symbols: &[Complex64]) -> Result<Vec<f64>> {
        if symbols.len() != self.symbols_per_block() {
            return Err(Error::Dimension(format!(
                "{} symbols for a code carrying {}",
                symbols.len(),
                self.symbols_per_block()
            )));
        }
        let mut u = Vec::with_capacity(self.ns());
        for s in symbols {
            u.push(s.re);
            u.push(s.im);
        }
        Ok(u)
    }

    /// Codeword for a block of complex symbols.
    pub fn codeword(&self, symbols: &[Complex64]) -> Result<ComplexMatrix> {
        self.codeword_from_coords(&self.coords_from_symbols(symbols)?)
    }

    /// Codeword from constellation point indices.
    pub fn codeword_from_indices(&self, indices: &[usize]) -> Result<ComplexMatrix> {
        let symbols: Vec<Complex64> = indices
            .iter()
            .map(|&i| self.constellation.point(i))
            .collect();
        self.codeword(&symbols)
    }
}

/// An explicit list of codeword matrices with canonical bit labels.
///
/// For constellation-enumerated codebooks the label of codeword `i` is the
/// `label_bits`-bit big-endian expansion of `i`, the concatenation of the
/// per-symbol constellation labels with symbol 0 first. Search-produced
/// codebooks may have sizes that are not powers of two; their labels are
/// plain indices in `ceil(log2(size))` bits.
#[derive(Debug, Clone)]
pub struct ExplicitCodebook {
    t: usize,
    mt: usize,
    codewords: Vec<ComplexMatrix>,
    label_bits: usize,
}

impl ExplicitCodebook {
    pub fn new(codewords: Vec<ComplexMatrix>, label_bits: usize) -> Result<Self> {
        if codewords.len() < 2 {
            return Err(Error::InvalidInput("codebook needs at least 2 codewords".into()));
        }
        let t = codewords[0].rows();
        let mt = codewords[0].cols();
        if codewords.iter().any(|c| c.rows() != t || c.cols() != mt) {
            return Err(Error::Dimension("codewords must share one shape".into()));
        }
        if codewords.len() > CODEBOOK_CAP {
            return Err(Error::SizeGuard(format!(
                "{} codewords exceeds cap {}",
                codewords.len(),
                CODEBOOK_CAP
            )));
        }
        Ok(Self { t, mt, codewords, label_bits })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn mt(&self) -> usize {
        self.mt
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn label_bits(&self) -> usize {
        self.label_bits
    }

    pub fn codeword(&self, i: usize) -> &ComplexMatrix {
        &self.codewords[i]
    }

    pub fn codewords(&self) -> &[ComplexMatrix] {
        &self.codewords
    }

    /// True when no two codewords coincide entrywise.
    pub fn pairwise_distinct(&self) -> bool {
        // Sort byte keys instead of scanning all pairs.
        let mut keys: Vec<Vec<u64>> = self
            .codewords
            .iter()
            .map(|c| {
                c.data()
                    .iter()
                    .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                    .collect()
            })
            .collect();
        keys.sort();
        keys.windows(2).all(|w| w[0] != w[1])
    }
}

/// Enumerate every codeword of a linear-dispersion code over its
/// constellation, with canonical bit labeling (symbol 0 in the most
/// significant bits).
pub fn enumerate_codebook(code: &LinearDispersionCode) -> Result<ExplicitCodebook> {
    let q = code.symbols_per_block();
    let bits = code.constellation().bits_per_symbol();
    let total_bits = q * bits;
    let count = (code.constellation().size() as u128).pow(q as u32);
    if count > CODEBOOK_CAP as u128 {
        return Err(Error::SizeGuard(format!(
            "{}^{} codewords exceeds cap {}",
            code.constellation().size(),
            q,
            CODEBOOK_CAP
        )));
    }
    let count = count as usize;
    let size = code.constellation().size();
    let mut codewords = Vec::with_capacity(count);
    for idx in 0..count {
        let indices: Vec<usize> = (0..q)
            .map(|j| (idx >> ((q - 1 - j) * bits)) % size)
            .collect();
        codewords.push(code.codeword_from_indices(&indices)?);
    }
    ExplicitCodebook::new(codewords, total_bits)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dispersion_from_entries(
    t: usize,
    mt: usize,
    entries: &[&[(usize, usize, Complex64)]],
) -> Vec<ComplexMatrix> {
    entries
        .iter()
        .map(|list| {
            let mut m = ComplexMatrix::zeros(t, mt);
            for &(r, col, v) in list.iter() {
                m.set(r, col, v);
            }
            m
        })
        .collect()
}

/// The Alamouti code for two transmit antennas: rows `(s1, s2)` and
/// `(-s2*, s1*)`, rate 1 complex symbol per channel use.
pub fn alamouti(constellation: Constellation) -> LinearDispersionCode {
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let dispersion = dispersion_from_entries(
        2,
        2,
        &[
            // Re(s1): diag(1, 1)
            &[(0, 0, one), (1, 1, one)],
            // Im(s1): diag(j, -j)
            &[(0, 0, i), (1, 1, -i)],
            // Re(s2): antidiag(1, -1)
            &[(0, 1, one), (1, 0, -one)],
            // Im(s2): antidiag(j, j)
            &[(0, 1, i), (1, 0, i)],
        ],
    );
    LinearDispersionCode::new("alamouti", 2, 2, dispersion, constellation)
        .expect("alamouti dispersion is valid")
}

/// Rate-3/4 orthogonal designs: 3 complex symbols over 4 time slots.
///
/// `mt = 4` ships the square design
///
/// ```text
/// [  s1    s2    s3    0  ]
/// [ -s2*   s1*   0     s3 ]
/// [ -s3*   0     s1*  -s2 ]
/// [  0    -s3*   s2*   s1 ]
/// ```
///
/// and `mt = 3` is its first three columns. Both satisfy
/// `C^H C = (|s1|^2 + |s2|^2 + |s3|^2) I`.
pub fn ostbc34(mt: usize, constellation: Constellation) -> Result<LinearDispersionCode> {
    if mt != 3 && mt != 4 {
        return Err(Error::InvalidInput(format!(
            "rate-3/4 orthogonal design supports 3 or 4 transmit antennas, got {mt}"
        )));
    }
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    // Entries for the 4-antenna design; column indices >= mt are dropped.
    let full: [&[(usize, usize, Complex64)]; 6] = [
        // Re(s1): s1 at (0,0), s1* at (1,1), s1* at (2,2), s1 at (3,3)
        &[(0, 0, one), (1, 1, one), (2, 2, one), (3, 3, one)],
        // Im(s1)
        &[(0, 0, i), (1, 1, -i), (2, 2, -i), (3, 3, i)],
        // Re(s2): s2 at (0,1), -s2* at (1,0), -s2 at (2,3), s2* at (3,2)
        &[(0, 1, one), (1, 0, -one), (2, 3, -one), (3, 2, one)],
        // Im(s2)
        &[(0, 1, i), (1, 0, i), (2, 3, -i), (3, 2, -i)],
        // Re(s3): s3 at (0,2), s3 at (1,3), -s3* at (2,0), -s3* at (3,1)
        &[(0, 2, one), (1, 3, one), (2, 0, -one), (3, 1, -one)],
        // Im(s3)
        &[(0, 2, i), (1, 3, i), (2, 0, i), (3, 1, i)],
    ];
    let dispersion: Vec<ComplexMatrix> = full
        .iter()
        .map(|list| {
            let mut m = ComplexMatrix::zeros(4, mt);
            for &(r, col, v) in list.iter() {
                if col < mt {
                    m.set(r, col, v);
                }
            }
            m
        })
        .collect();
    LinearDispersionCode::new(&format!("ostbc34_{mt}tx"), 4, mt, dispersion, constellation)
}

/// Diagonal code from a unitary rotation: the codeword for symbol vector `u`
/// is `diag(r * u)`, realizing rotated-constellation signal-space diversity
/// as a space-time block code.
pub fn diagonal_from_rotation(
    r: &ComplexMatrix,
    constellation: Constellation,
) -> Result<LinearDispersionCode> {
    if !r.is_square() {
        return Err(Error::Dimension("rotation must be square".into()));
    }
    if !r.is_unitary(1e-10) {
        return Err(Error::NotUnitary("diagonal code rotation".into()));
    }
    let d = r.rows();
    let mut dispersion = Vec::with_capacity(2 * d);
    for j in 0..d {
        for part in 0..2 {
            let mut m = ComplexMatrix::zeros(d, d);
            for row in 0..d {
                let col_entry = r.get(row, j);
                let v = if part == 0 {
                    col_entry
                } else {
                    col_entry * c(0.0, 1.0)
                };
                m.set(row, row, v);
            }
            dispersion.push(m);
        }
    }
    LinearDispersionCode::new("diagonal_rotation", d, d, dispersion, constellation)
}

/// A real Givens rotation by `theta`, usable as an SSD rotation.
pub fn rotation_2d(theta: f64) -> ComplexMatrix {
    let (s, co) = theta.sin_cos();
    ComplexMatrix::from_rows(&[
        vec![c(co, 0.0), c(-s, 0.0)],
        vec![c(s, 0.0), c(co, 0.0)],
    ])
    .expect("2x2 rotation")
}
