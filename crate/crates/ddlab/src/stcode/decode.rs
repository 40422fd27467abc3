//! Decoders for linear-dispersion space-time codes.
//!
//! All three families run on the real-stacked equivalent channel: with
//! `realvec(Y)` stacking the real parts of the column-major entries of `Y`
//! over the imaginary parts, there is a real matrix `G` with
//! `realvec(C(u) * H) = G u` for every coordinate vector `u`. Squared
//! Frobenius distance is preserved by the stacking, so codebook ML, linear
//! receivers, and per-group interference-cancellation decoding all agree on
//! the metric they optimize.

use crate::error::{Error, Result};
use crate::numerics::constellation::Constellation;
use crate::numerics::matrix::ComplexMatrix;
use crate::stcode::dispersion::{ExplicitCodebook, LinearDispersionCode};
use num_complex::Complex64;

/// Decoded-codebook guard (matches the enumeration cap).
pub const ML_CODEBOOK_CAP: usize = 65_536;

/// Per-group ML hypothesis guard for PIC decoding.
pub const GROUP_HYPOTHESIS_CAP: usize = 4096;

/// A small dense real matrix (row-major), just enough for the real-stacked
/// decoding algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = 0.0;
                for c in 0..self.cols {
                    acc += self.get(r, c) * x[c];
                }
                acc
            })
            .collect()
    }

    /// `self^T x`.
    pub fn tmatvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols)
            .map(|c| {
                let mut acc = 0.0;
                for r in 0..self.rows {
                    acc += self.get(r, c) * x[r];
                }
                acc
            })
            .collect()
    }

    /// Gram matrix `self^T self`.
    pub fn gram(&self) -> RealMatrix {
        let mut g = RealMatrix::zeros(self.cols, self.cols);
        for i in 0..self.cols {
            for j in 0..self.cols {
                let mut acc = 0.0;
                for r in 0..self.rows {
                    acc += self.get(r, i) * self.get(r, j);
                }
                g.set(i, j, acc);
            }
        }
        g
    }

    /// Solve the square system by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut rhs = b.to_vec();
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = scale * 1e-12;
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].abs();
            for r in (col + 1)..n {
                if a[r * n + col].abs() > best {
                    best = a[r * n + col].abs();
                    pivot = r;
                }
            }
            if best <= tol {
                return Err(Error::Singular(format!(
                    "real solve: pivot {best:.3e} at column {col}"
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
                let f = a[r * n + col] / p;
                if f == 0.0 {
                    continue;
                }
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
        let mut x = vec![0.0; n];
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

/// Real stacking of a complex matrix: `[Re(vec(Y)); Im(vec(Y))]`
/// with column-major `vec`.
pub fn realvec(y: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = (y.rows(), y.cols());
    let mut out = Vec::with_capacity(2 * rows * cols);
    for c in 0..cols {
        for r in 0..rows {
            out.push(y.get(r, c).re);
        }
    }
    for c in 0..cols {
        for r in 0..rows {
            out.push(y.get(r, c).im);
        }
    }
    out
}

/// The real matrix `G` with `realvec(C(u) * h) = G u` for every real
/// coordinate vector `u`. Columns are the stacked responses of the
/// individual dispersion matrices; the identity is spot-checked on random
/// coordinates at construction.
pub fn equivalent_real_channel(
    code: &LinearDispersionCode,
    h: &ComplexMatrix,
) -> Result<RealMatrix> {
    if h.rows() != code.mt() {
        return Err(Error::Dimension(format!(
            "channel has {} rows, code has {} transmit antennas",
            h.rows(),
            code.mt()
        )));
    }
    let mr = h.cols();
    let ns = code.ns();
    let rows = 2 * code.t() * mr;
    let mut g = RealMatrix::zeros(rows, ns);
    for (i, a) in code.dispersion().iter().enumerate() {
        let col = realvec(&a.mul(h)?);
        for (r, v) in col.into_iter().enumerate() {
            g.set(r, i, v);
        }
    }
    // Randomized construction check of the defining identity.
    let mut check_rng = crate::numerics::rng::RngStream::new(0x6e_c4ec, 0);
    for _ in 0..2 {
        let u: Vec<f64> = (0..ns)
            .map(|_| check_rng.next_f64() * 2.0 - 1.0)
            .collect();
        let cw = code.codeword_from_coords(&u)?;
        let direct = realvec(&cw.mul(h)?);
        let via_g = g.matvec(&u);
        let err = direct
            .iter()
            .zip(via_g.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if err > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "real channel construction identity failed: {err}"
            )));
        }
    }
    Ok(g)
}

/// Exhaustive ML over an explicit codebook: `argmin_C ||y - C h||_F^2`.
/// Ties break to the lowest codeword index.
pub fn decode_ml(cb: &ExplicitCodebook, h: &ComplexMatrix, y: &ComplexMatrix) -> Result<usize> {
    if cb.len() > ML_CODEBOOK_CAP {
        return Err(Error::SizeGuard(format!(
            "{} codewords exceeds ML cap {}",
            cb.len(),
            ML_CODEBOOK_CAP
        )));
    }
    if h.rows() != cb.mt() {
        return Err(Error::Dimension("channel rows != transmit antennas".into()));
    }
    if y.rows() != cb.t() || y.cols() != h.cols() {
        return Err(Error::Dimension("received block shape mismatch".into()));
    }
    let mut best = 0usize;
    let mut best_metric = f64::INFINITY;
    for (i, cw) in cb.codewords().iter().enumerate() {
        let predicted = cw.mul(h)?;
        let metric = y.sub(&predicted)?.frobenius_norm_sqr();
        if metric < best_metric {
            best_metric = metric;
            best = i;
        }
    }
    Ok(best)
}

/// Linear receiver choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearDecodeMode {
    Zf,
    /// Ridge equal to the complex noise variance per received sample.
    Mmse { noise_var: f64 },
}

/// Linear (ZF or MMSE) decoding on the real-stacked system, sliced per
/// complex symbol to the nearest constellation point. Returns symbol indices.
pub fn decode_linear(
    code: &LinearDispersionCode,
    h: &ComplexMatrix,
    y: &ComplexMatrix,
    mode: LinearDecodeMode,
) -> Result<Vec<usize>> {
    let g = equivalent_real_channel(code, h)?;
    if y.rows() != code.t() || y.cols() != h.cols() {
        return Err(Error::Dimension("received block shape mismatch".into()));
    }
    let r = realvec(y);
    let mut gram = g.gram();
    if let LinearDecodeMode::Mmse { noise_var } = mode {
        if !noise_var.is_finite() || noise_var < 0.0 {
            return Err(Error::InvalidInput("noise variance must be >= 0".into()));
        }
        for i in 0..gram.rows() {
            gram.set(i, i, gram.get(i, i) + noise_var);
        }
    }
    let rhs = g.tmatvec(&r);
    let u = gram.solve(&rhs).map_err(|e| match (e, mode) {
        (Error::Singular(msg), LinearDecodeMode::Zf) => Error::Singular(format!(
            "ZF linear receiver: equivalent channel is rank-deficient ({msg})"
        )),
        (other, _) => other,
    })?;
    let cons = code.constellation();
    Ok((0..code.symbols_per_block())
        .map(|j| cons.nearest(Complex64::new(u[2 * j], u[2 * j + 1])))
        .collect())
}

/// A partition of the real symbol coordinates `0..ns` into disjoint groups.
///
/// Groups must keep each complex symbol's two coordinates together (decoding
/// enumerates constellation points per symbol).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPartition {
    groups: Vec<Vec<usize>>,
}

impl GroupPartition {
    pub fn new(groups: Vec<Vec<usize>>, ns: usize) -> Result<Self> {
        let mut seen = vec![false; ns];
        for g in &groups {
            for &i in g {
                if i >= ns {
                    return Err(Error::InvalidInput(format!(
                        "group index {i} out of range for ns = {ns}"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidInput(format!(
                        "coordinate {i} appears in two groups"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidInput(
                "groups must cover every real coordinate".into(),
            ));
        }
        for g in &groups {
            for &i in g {
                let partner = i ^ 1;
                if !g.contains(&partner) {
                    return Err(Error::InvalidInput(format!(
                        "coordinate {i} is separated from its complex partner {partner}"
                    )));
                }
            }
        }
        Ok(Self { groups })
    }

    /// One group per complex symbol.
    pub fn per_symbol(ns: usize) -> Self {
        let groups = (0..ns / 2).map(|j| vec![2 * j, 2 * j + 1]).collect();
        Self::new(groups, ns).expect("per-symbol partition is valid")
    }

    /// A single group holding every coordinate.
    pub fn single(ns: usize) -> Self {
        Self::new(vec![(0..ns).collect()], ns).expect("single partition is valid")
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
}

/// Orthonormal basis of the column span of the listed columns (modified
/// Gram-Schmidt, dropping numerically null directions).
fn column_span_basis(g: &RealMatrix, cols: &[usize]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let scale = cols
        .iter()
        .flat_map(|&c| (0..g.rows()).map(move |r| g.get(r, c).abs()))
        .fold(0.0f64, f64::max);
    let tol = scale.max(1.0) * 1e-12;
    for &c in cols {
        let mut v = g.column(c);
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = b.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
                for (vi, bi) in v.iter_mut().zip(b.iter()) {
                    *vi -= dot * bi;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > tol {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

fn project_out(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = v.to_vec();
    for b in basis {
        let dot: f64 = b.iter().zip(out.iter()).map(|(x, y)| x * y).sum();
        for (oi, bi) in out.iter_mut().zip(b.iter()) {
            *oi -= dot * bi;
        }
    }
    out
}

/// Partial interference cancellation group decoding.
///
/// For each group, the received real stack is projected onto the orthogonal
/// complement of the other groups' columns, followed by exhaustive ML over
/// the group's symbols. Returns the decided symbol indices and the total
/// number of hypotheses evaluated (`|constellation|^(K/2)` per group of `K`
/// real coordinates).
pub fn decode_pic(
    code: &LinearDispersionCode,
    h: &ComplexMatrix,
    y: &ComplexMatrix,
    partition: &GroupPartition,
) -> Result<(Vec<usize>, u64)> {
    let g = equivalent_real_channel(code, h)?;
    if y.rows() != code.t() || y.cols() != h.cols() {
        return Err(Error::Dimension("received block shape mismatch".into()));
    }
    let r = realvec(y);
    let cons = code.constellation();
    let ns = code.ns();
    let mut decisions = vec![0usize; ns / 2];
    let mut hypotheses = 0u64;
    for group in partition.groups() {
        let others: Vec<usize> = (0..ns).filter(|i| !group.contains(i)).collect();
        let basis = column_span_basis(&g, &others);
        // Projected group columns and received vector.
        let proj_cols: Vec<Vec<f64>> = group
            .iter()
            .map(|&c| project_out(&g.column(c), &basis))
            .collect();
        let energy: f64 = proj_cols
            .iter()
            .flat_map(|c| c.iter().map(|x| x * x))
            .sum();
        if energy <= 1e-20 {
            return Err(Error::Singular(format!(
                "PIC group {group:?}: other groups' columns span the group's space"
            )));
        }
        let pr = project_out(&r, &basis);
        // Complex symbols owned by this group, in ascending order.
        let mut symbols: Vec<usize> = group.iter().map(|&i| i / 2).collect();
        symbols.sort_unstable();
        symbols.dedup();
        let k = symbols.len();
        let total = (cons.size() as u128).pow(k as u32);
        if total > GROUP_HYPOTHESIS_CAP as u128 {
            return Err(Error::SizeGuard(format!(
                "PIC group of {k} symbols needs {total} hypotheses (cap {GROUP_HYPOTHESIS_CAP})"
            )));
        }
        let mut best_metric = f64::INFINITY;
        let mut best = vec![0usize; k];
        let mut cand = vec![0usize; k];
        loop {
            // Residual ||pr - sum_j proj_cols * u(cand)||^2.
            let mut resid = pr.clone();
            for (slot, &sym) in symbols.iter().enumerate() {
                let point = cons.point(cand[slot]);
                for (gi, &coord) in group.iter().enumerate() {
                    let u = if coord == 2 * sym {
                        point.re
                    } else if coord == 2 * sym + 1 {
                        point.im
                    } else {
                        continue;
                    };
                    for (ri, ci) in resid.iter_mut().zip(proj_cols[gi].iter()) {
                        *ri -= u * ci;
                    }
                }
            }
            let metric: f64 = resid.iter().map(|x| x * x).sum();
            hypotheses += 1;
            if metric < best_metric {
                best_metric = metric;
                best.copy_from_slice(&cand);
            }
            // Odometer (lowest label first).
            let mut pos = k;
            let mut done = false;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                cand[pos] += 1;
                if cand[pos] < cons.size() {
                    break;
                }
                cand[pos] = 0;
            }
            if done {
                break;
            }
        }
        for (slot, &sym) in symbols.iter().enumerate() {
            decisions[sym] = best[slot];
        }
    }
    Ok((decisions, hypotheses))
}
