//! Dense complex matrices and the small amount of linear algebra the modem
//! and code analysis need: products, pivoted-elimination determinants,
//! square solves, ridge least squares, circulant construction, and Haar
//! random unitaries.
//!
//! Determinants are capped at dimension 64; diversity analysis only ever
//! needs small square matrices and the cap keeps accidental large inputs
//! from silently running O(n^3) on huge data.

use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;
use num_complex::Complex64;

/// Maximum dimension accepted by [`ComplexMatrix::determinant`].
pub const DET_DIM_CAP: usize = 64;

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from a closure over `(row, col)`.
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyInput("matrix rows"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    /// Circulant matrix from its first column: entry `(r, c) = col[(r - c) mod n]`.
    pub fn circulant(first_column: &[Complex64]) -> Result<Self> {
        if first_column.is_empty() {
            return Err(Error::EmptyInput("circulant first column"));
        }
        let n = first_column.len();
        Ok(Self::from_fn(n, n, |r, c| first_column[(r + n - c) % n]))
    }

    /// The unitary DFT matrix `F[k][n] = exp(-j 2 pi k n / N) / sqrt(N)`.
    pub fn dft_unitary(n: usize) -> Self {
        assert!(n > 0);
        let scale = 1.0 / (n as f64).sqrt();
        Self::from_fn(n, n, |k, t| {
            let angle = -std::f64::consts::TAU * (k as f64) * (t as f64) / n as f64;
            Complex64::from_polar(scale, angle)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matvec: {}x{} with vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..self.cols {
                    acc += self.get(r, c) * x[c];
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("add: shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("sub: shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// True when `U^H U = I` to within `tol` (max entry deviation).
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = self.hermitian().mul(self).expect("square product");
        gram.max_abs_diff(&Self::identity(self.rows)) <= tol
    }

    fn is_upper_triangular(&self) -> bool {
        for r in 1..self.rows {
            for c in 0..r.min(self.cols) {
                let v = self.get(r, c);
                if v.re != 0.0 || v.im != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    fn is_lower_triangular(&self) -> bool {
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                let v = self.get(r, c);
                if v.re != 0.0 || v.im != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    ///
    /// Triangular inputs short-circuit to the diagonal product, which keeps
    /// them exact. Square only, dimension capped at [`DET_DIM_CAP`].
    pub fn determinant(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows > DET_DIM_CAP {
            return Err(Error::SizeGuard(format!(
                "determinant dimension {} exceeds cap {}",
                self.rows, DET_DIM_CAP
            )));
        }
        let n = self.rows;
        if self.is_upper_triangular() || self.is_lower_triangular() {
            let mut det = Complex64::new(1.0, 0.0);
            for i in 0..n {
                det *= self.get(i, i);
            }
            return Ok(det);
        }
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            // Partial pivot: largest modulus at or below the diagonal.
            let mut pivot = col;
            let mut best = a[col * n + col].norm();
            for r in (col + 1)..n {
                let m = a[r * n + col].norm();
                if m > best {
                    best = m;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(col * n + c, pivot * n + c);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / p;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for c in col..n {
                    let v = a[col * n + c];
                    a[r * n + c] -= factor * v;
                }
            }
        }
        Ok(det)
    }

    /// Solve the square system `self * x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(Error::Dimension("solve requires a square matrix".into()));
        }
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "solve: {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut rhs = b.to_vec();
        let scale = self.max_abs();
        let tol = scale * 1e-12;
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].norm();
            for r in (col + 1)..n {
                let m = a[r * n + col].norm();
                if m > best {
                    best = m;
                    pivot = r;
                }
            }
            if best <= tol {
                return Err(Error::Singular(format!(
                    "pivot {best:.3e} at column {col} (scale {scale:.3e})"
                )));
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(col * n + c, pivot * n + c);
                }
                rhs.swap(col, pivot);
            }
            let p = a[col * n + col];
            for r in (col + 1)..n {
                let factor = a[r * n + col] / p;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for c in col..n {
                    let v = a[col * n + c];
                    a[r * n + c] -= factor * v;
                }
                let v = rhs[col];
                rhs[r] -= factor * v;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for row in (0..n).rev() {
            let mut acc = rhs[row];
            for c in (row + 1)..n {
                acc -= a[row * n + c] * x[c];
            }
            x[row] = acc / a[row * n + row];
        }
        Ok(x)
    }
}

/// Ridge least squares: minimize `||a x - b||^2 + ridge ||x||^2` via the
/// normal equations `(A^H A + ridge I) x = A^H b`.
///
/// With `ridge = 0` this is the pseudo-inverse solution; a rank-deficient
/// `a` then surfaces as an explicit [`Error::Singular`].
pub fn solve_least_squares(
    a: &ComplexMatrix,
    b: &[Complex64],
    ridge: f64,
) -> Result<Vec<Complex64>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "least squares: {}x{} with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    if !ridge.is_finite() || ridge < 0.0 {
        return Err(Error::InvalidInput(format!("ridge must be >= 0, got {ridge}")));
    }
    let ah = a.hermitian();
    let mut gram = ah.mul(a)?;
    if ridge > 0.0 {
        for i in 0..gram.rows() {
            let v = gram.get(i, i) + ridge;
            gram.set(i, i, v);
        }
    }
    let rhs = ah.matvec(b)?;
    gram.solve(&rhs).map_err(|e| match e {
        Error::Singular(msg) => Error::Singular(format!(
            "rank-deficient least-squares system with ridge 0 ({msg})"
        )),
        other => other,
    })
}

/// Haar-distributed random unitary, drawn by Gram-Schmidt orthonormalization
/// of an i.i.d. complex Gaussian matrix with positive-real diagonal phase
/// convention (the R factor's diagonal is real positive, which fixes the
/// distribution).
pub fn random_unitary(rng: &mut RngStream, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("random_unitary: n must be >= 1".into()));
    }
    let mut g = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            g.set(r, c, rng.next_complex_gaussian(1.0));
        }
    }
    // Modified Gram-Schmidt over columns, with one reorthogonalization pass.
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|r| g.get(r, j)).collect();
        for _pass in 0..2 {
            for qi in q.iter() {
                let mut dot = Complex64::new(0.0, 0.0);
                for (a, b) in qi.iter().zip(v.iter()) {
                    dot += a.conj() * b;
                }
                for (a, b) in v.iter_mut().zip(qi.iter()) {
                    *a -= dot * b;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-200 {
            return Err(Error::Singular("degenerate Gaussian draw".into()));
        }
        for a in v.iter_mut() {
            *a /= norm;
        }
        q.push(v);
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| q[c][r]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::transform::dft;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut RngStream, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| rng.next_complex_gaussian(1.0))
    }

    /// Cofactor (Laplace) expansion, the slow-but-independent determinant oracle.
    fn det_cofactor(m: &ComplexMatrix) -> Complex64 {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0);
        }
        let mut acc = c(0.0, 0.0);
        let mut sign = 1.0;
        for col in 0..n {
            let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, cc| {
                m.get(r + 1, if cc < col { cc } else { cc + 1 })
            });
            acc += m.get(0, col) * det_cofactor(&minor) * sign;
            sign = -sign;
        }
        acc
    }

    #[test]
    fn determinant_identity_and_2x2() {
        assert_eq!(
            ComplexMatrix::identity(3).determinant().unwrap(),
            c(1.0, 0.0)
        );
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(m.determinant().unwrap(), c(-2.0, 0.0));
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let mut rng = RngStream::new(0xde7, 0);
        for _ in 0..5 {
            let m = random_matrix(&mut rng, 5, 5);
            let fast = m.determinant().unwrap();
            let slow = det_cofactor(&m);
            assert!(
                (fast - slow).norm() <= 1e-10 * slow.norm().max(1.0),
                "fast {fast}, cofactor {slow}"
            );
        }
    }

    #[test]
    fn determinant_exact_for_triangular() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(7.0, 1.0), c(0.3, 0.0), c(0.0, 0.0)],
            vec![c(-2.0, 5.0), c(9.0, 9.0), c(3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(m.determinant().unwrap(), c(0.9, 0.0));
    }

    #[test]
    fn determinant_is_multiplicative() {
        let mut rng = RngStream::new(0xde8, 0);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 4, 4);
            let b = random_matrix(&mut rng, 4, 4);
            let lhs = a.mul(&b).unwrap().determinant().unwrap();
            let rhs = a.determinant().unwrap() * b.determinant().unwrap();
            assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn determinant_guards() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(m.determinant().is_err());
        let big = ComplexMatrix::identity(65);
        assert!(matches!(big.determinant(), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn circulant_definition_unrolled() {
        let one = ComplexMatrix::circulant(&[c(5.0, 0.0)]).unwrap();
        assert_eq!(one.rows(), 1);
        assert_eq!(one.get(0, 0), c(5.0, 0.0));

        let m = ComplexMatrix::circulant(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        let expected = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(m, expected);
        assert!(ComplexMatrix::circulant(&[]).is_err());
    }

    // --- test-only eigen-solver oracle: characteristic polynomial by
    // Faddeev-LeVerrier, roots by Durand-Kerner ---

    fn char_poly(m: &ComplexMatrix) -> Vec<Complex64> {
        // Returns monic coefficients [c0, c1, ..., c_{n-1}, 1] of det(xI - M).
        let n = m.rows();
        let mut coeffs = vec![c(0.0, 0.0); n + 1];
        coeffs[n] = c(1.0, 0.0);
        let mut mk = ComplexMatrix::identity(n);
        for k in 1..=n {
            mk = m.mul(&mk).unwrap();
            let trace: Complex64 = (0..n).map(|i| mk.get(i, i)).sum();
            let ck = -trace / k as f64;
            coeffs[n - k] = ck;
            for i in 0..n {
                let v = mk.get(i, i) + ck;
                mk.set(i, i, v);
            }
        }
        coeffs
    }

    fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = coeffs.len() - 1;
        let eval = |x: Complex64| -> Complex64 {
            let mut acc = c(0.0, 0.0);
            for &co in coeffs.iter().rev() {
                acc = acc * x + co;
            }
            acc
        };
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(2.0, 0.3 + std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        for _ in 0..200 {
            let snapshot = roots.clone();
            for i in 0..n {
                let mut denom = c(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= snapshot[i] - snapshot[j];
                    }
                }
                roots[i] = snapshot[i] - eval(snapshot[i]) / denom;
            }
        }
        roots
    }

    #[test]
    fn circulant_eigenvalues_match_dft() {
        let col = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        let m = ComplexMatrix::circulant(&col).unwrap();
        let spectrum = dft(&col, false).unwrap();
        let mut eigen = poly_roots(&char_poly(&m));
        // Greedy multiset matching of eigen-solver output against the DFT.
        for target in &spectrum {
            let (idx, _) = eigen
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (*a - target).norm().partial_cmp(&(*b - target).norm()).unwrap()
                })
                .unwrap();
            let found = eigen.remove(idx);
            assert!(
                (found - target).norm() <= 1e-10,
                "eigenvalue {found} vs dft {target}"
            );
        }
    }

    #[test]
    fn solve_round_trips() {
        let mut rng = RngStream::new(0xabc, 1);
        let a = random_matrix(&mut rng, 6, 6);
        let x: Vec<Complex64> = (0..6).map(|_| rng.next_complex_gaussian(1.0)).collect();
        let b = a.matvec(&x).unwrap();
        let got = a.solve(&b).unwrap();
        for (g, e) in got.iter().zip(x.iter()) {
            assert!((g - e).norm() <= 1e-10);
        }
    }

    #[test]
    fn solve_reports_singularity() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(m.solve(&[c(1.0, 0.0), c(0.0, 0.0)]), Err(Error::Singular(_))));
    }

    #[test]
    fn least_squares_identity_and_diagonal() {
        let a = ComplexMatrix::identity(3);
        let b = [c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)];
        let x = solve_least_squares(&a, &b, 0.0).unwrap();
        for (g, e) in x.iter().zip(b.iter()) {
            assert!((g - e).norm() <= 1e-14);
        }

        let d = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let x = solve_least_squares(&d, &[c(2.0, 0.0), c(4.0, 0.0)], 0.0).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() <= 1e-14);
        assert!((x[1] - c(1.0, 0.0)).norm() <= 1e-14);
    }

    #[test]
    fn least_squares_residual_is_orthogonal_to_columns() {
        let mut rng = RngStream::new(0xa11, 2);
        let a = random_matrix(&mut rng, 6, 4);
        let b: Vec<Complex64> = (0..6).map(|_| rng.next_complex_gaussian(1.0)).collect();
        let x = solve_least_squares(&a, &b, 0.0).unwrap();
        let ax = a.matvec(&x).unwrap();
        let resid: Vec<Complex64> = b.iter().zip(ax.iter()).map(|(bb, aa)| bb - aa).collect();
        // Normal-equations oracle: A^H r must vanish.
        let inner = a.hermitian().matvec(&resid).unwrap();
        for v in inner {
            assert!(v.norm() <= 1e-10, "residual not orthogonal: {v}");
        }
    }

    #[test]
    fn least_squares_rank_deficiency_errors_without_ridge() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let b = [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(solve_least_squares(&a, &b, 0.0), Err(Error::Singular(_))));
        // A positive ridge regularizes the same system.
        assert!(solve_least_squares(&a, &b, 1e-3).is_ok());
    }

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        for n in [1usize, 2, 8, 32] {
            let mut rng = RngStream::new(0x117, 5);
            let u = random_unitary(&mut rng, n).unwrap();
            let gram = u.hermitian().mul(&u).unwrap();
            assert!(
                gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-12,
                "n = {n}"
            );
            let det = if n <= DET_DIM_CAP {
                u.determinant().unwrap()
            } else {
                c(1.0, 0.0)
            };
            assert!((det.norm() - 1.0).abs() <= 1e-10);

            let mut rng2 = RngStream::new(0x117, 5);
            let u2 = random_unitary(&mut rng2, n).unwrap();
            assert_eq!(u, u2, "same seed/stream must reproduce the matrix");
        }
    }

    #[test]
    fn random_unitary_n1_is_unit_modulus() {
        let mut rng = RngStream::new(9, 9);
        let u = random_unitary(&mut rng, 1).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() <= 1e-12);
    }
}
