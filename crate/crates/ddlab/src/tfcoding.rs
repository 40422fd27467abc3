//! Time-frequency coding for OFDM grids.
//!
//! Three single-antenna realizations of coding across the
//! (subcarrier, OFDM-symbol) plane:
//!
//! * [`map_st_to_tf`] places a space-time codeword onto grid cells, either
//!   across successive OFDM symbols (space maps to subcarriers) or across
//!   subcarriers inside one symbol. On a channel that is constant over the
//!   mapped cells, extraction plus ML is the same decision rule as
//!   narrowband space-time decoding against the diagonal channel of the
//!   mapped scalars.
//! * Signal-space diversity ([`ssd_encode`] / [`ssd_decode`]): rotate each
//!   `d`-block of symbols by a unitary and interleave the rotated
//!   coordinates `stride` subcarriers apart, then decode each block by
//!   exhaustive ML against the per-bin channel scalars.
//! * Random unitary precoding ([`unitary_precode`] / [`unitary_decode`]):
//!   spread all `N` subcarrier symbols by one `N x N` unitary before OFDM
//!   and decode by MMSE (or exhaustive ML behind a small-size guard).
//!
//! Decoding cost guards are hard errors rather than silent slowdowns, and
//! the decoders report how many hypotheses they evaluated so complexity can
//! be traded off against performance in reports.

use crate::error::{Error, Result};
use crate::numerics::constellation::Constellation;
use crate::numerics::matrix::{solve_least_squares, ComplexMatrix};
use crate::vofdm::SymbolGrid;
use num_complex::Complex64;

/// Hypothesis budget for the exhaustive-ML decoders in this module.
pub const ML_HYPOTHESIS_CAP: usize = 4096;

/// Which grid dimension carries the codeword's time axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfMode {
    /// Rows (time) run over successive OFDM symbols; columns (space) are
    /// fixed subcarriers.
    AcrossSymbols,
    /// The whole codeword lands inside one OFDM symbol, rows packed at
    /// consecutive subcarriers per column.
    AcrossSubcarriers,
}

/// An injective placement of codeword entries onto (symbol, subcarrier) cells.
#[derive(Debug, Clone, PartialEq)]
pub struct TfMapping {
    mode: TfMode,
    /// `placement[row][col] = (ofdm_symbol, subcarrier)`.
    placement: Vec<Vec<(usize, usize)>>,
}

impl TfMapping {
    /// Arbitrary placement table; must be injective.
    pub fn new(mode: TfMode, placement: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if placement.is_empty() || placement[0].is_empty() {
            return Err(Error::EmptyInput("tf placement"));
        }
        let cols = placement[0].len();
        if placement.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged tf placement".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for row in &placement {
            for cell in row {
                if !seen.insert(*cell) {
                    return Err(Error::InvalidInput(format!(
                        "tf placement targets cell {cell:?} twice"
                    )));
                }
            }
        }
        Ok(Self { mode, placement })
    }

    /// Codeword row `r`, column `c` goes to OFDM symbol `first_symbol + r`
    /// at subcarrier `subcarriers[c]`.
    pub fn across_symbols(
        t: usize,
        first_symbol: usize,
        subcarriers: &[usize],
    ) -> Result<Self> {
        let placement = (0..t)
            .map(|r| {
                subcarriers
                    .iter()
                    .map(|&sc| (first_symbol + r, sc))
                    .collect()
            })
            .collect();
        Self::new(TfMode::AcrossSymbols, placement)
    }

    /// Codeword row `r`, column `c` goes to subcarrier
    /// `first_subcarrier + c*t + r` of one OFDM symbol.
    pub fn across_subcarriers(
        t: usize,
        mt: usize,
        symbol: usize,
        first_subcarrier: usize,
    ) -> Result<Self> {
        let placement = (0..t)
            .map(|r| {
                (0..mt)
                    .map(|c| (symbol, first_subcarrier + c * t + r))
                    .collect()
            })
            .collect();
        Self::new(TfMode::AcrossSubcarriers, placement)
    }

    pub fn mode(&self) -> TfMode {
        self.mode
    }

    pub fn t(&self) -> usize {
        self.placement.len()
    }

    pub fn mt(&self) -> usize {
        self.placement[0].len()
    }

    pub fn cell(&self, row: usize, col: usize) -> (usize, usize) {
        self.placement[row][col]
    }
}

/// A partially-filled frame of OFDM symbols; cells hold at most one value.
#[derive(Debug, Clone)]
pub struct TfFrame {
    n_symbols: usize,
    n_subcarriers: usize,
    cells: Vec<Option<Complex64>>,
}

impl TfFrame {
    pub fn new(n_symbols: usize, n_subcarriers: usize) -> Self {
        Self {
            n_symbols,
            n_subcarriers,
            cells: vec![None; n_symbols * n_subcarriers],
        }
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn get(&self, symbol: usize, subcarrier: usize) -> Option<Complex64> {
        self.cells[symbol * self.n_subcarriers + subcarrier]
    }

    /// Write a cell; occupied cells and out-of-bounds targets are errors.
    pub fn set(&mut self, symbol: usize, subcarrier: usize, v: Complex64) -> Result<()> {
        if symbol >= self.n_symbols || subcarrier >= self.n_subcarriers {
            return Err(Error::InvalidInput(format!(
                "cell ({symbol}, {subcarrier}) outside a {}x{} frame",
                self.n_symbols, self.n_subcarriers
            )));
        }
        let slot = &mut self.cells[symbol * self.n_subcarriers + subcarrier];
        if slot.is_some() {
            return Err(Error::InvalidInput(format!(
                "cell ({symbol}, {subcarrier}) already occupied"
            )));
        }
        *slot = Some(v);
        Ok(())
    }

    /// Convert to per-OFDM-symbol grids (M = 1), empty cells as zeros.
    pub fn into_grids(self) -> Vec<SymbolGrid> {
        (0..self.n_symbols)
            .map(|s| {
                let vectors = (0..self.n_subcarriers)
                    .map(|k| {
                        vec![self.cells[s * self.n_subcarriers + k]
                            .unwrap_or(Complex64::new(0.0, 0.0))]
                    })
                    .collect();
                SymbolGrid::new(vectors).expect("frame dimensions are positive")
            })
            .collect()
    }
}

/// Write a codeword into a frame through a mapping.
pub fn map_st_to_tf(
    codeword: &ComplexMatrix,
    frame: &mut TfFrame,
    mapping: &TfMapping,
) -> Result<()> {
    if codeword.rows() != mapping.t() || codeword.cols() != mapping.mt() {
        return Err(Error::Dimension(format!(
            "codeword {}x{} vs mapping {}x{}",
            codeword.rows(),
            codeword.cols(),
            mapping.t(),
            mapping.mt()
        )));
    }
    for r in 0..mapping.t() {
        for c in 0..mapping.mt() {
            let (sym, sc) = mapping.cell(r, c);
            frame.set(sym, sc, codeword.get(r, c))?;
        }
    }
    Ok(())
}

/// Read the mapped cells back out of received (demodulated) grids.
pub fn extract_st_from_tf(
    grids: &[SymbolGrid],
    mapping: &TfMapping,
) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(mapping.t(), mapping.mt());
    for r in 0..mapping.t() {
        for c in 0..mapping.mt() {
            let (sym, sc) = mapping.cell(r, c);
            if sym >= grids.len() || sc >= grids[sym].n() {
                return Err(Error::InvalidInput(format!(
                    "mapping targets cell ({sym}, {sc}) outside the received grids"
                )));
            }
            out.set(r, c, grids[sym].get(sc, 0));
        }
    }
    Ok(out)
}

/// Per-column channel scalars of a mapping over per-symbol, per-bin scalars.
///
/// Returns the diagonal channel `diag(h_c)` seen by the codeword columns.
/// Errors if a column's cells do not share one scalar (channel not constant
/// across the mapped dimension within `tol`).
pub fn mapped_channel_diagonal(
    scalars_per_symbol: &[Vec<Complex64>],
    mapping: &TfMapping,
    tol: f64,
) -> Result<ComplexMatrix> {
    let mt = mapping.mt();
    let mut diag = ComplexMatrix::zeros(mt, mt);
    for c in 0..mt {
        let mut value: Option<Complex64> = None;
        for r in 0..mapping.t() {
            let (sym, sc) = mapping.cell(r, c);
            let h = scalars_per_symbol[sym][sc];
            match value {
                None => value = Some(h),
                Some(v) if (v - h).norm() <= tol => {}
                Some(v) => {
                    return Err(Error::InvalidInput(format!(
                        "column {c}: channel varies over mapped cells ({v} vs {h})"
                    )))
                }
            }
        }
        diag.set(c, c, value.expect("t >= 1"));
    }
    Ok(diag)
}

/// Signal-space-diversity configuration: a unitary rotation applied to each
/// block of `d` symbols and the subcarrier stride separating the rotated
/// coordinates.
#[derive(Debug, Clone)]
pub struct SsdConfig {
    rotation: ComplexMatrix,
    stride: usize,
}

impl SsdConfig {
    pub fn new(rotation: ComplexMatrix, stride: usize) -> Result<Self> {
        if !rotation.is_square() {
            return Err(Error::Dimension("ssd rotation must be square".into()));
        }
        if !rotation.is_unitary(1e-10) {
            return Err(Error::NotUnitary("ssd rotation".into()));
        }
        if stride == 0 {
            return Err(Error::InvalidInput("ssd stride must be >= 1".into()));
        }
        Ok(Self { rotation, stride })
    }

    /// Default stride `floor(n / d)`, the maximum frequency separation.
    pub fn with_default_stride(rotation: ComplexMatrix, n: usize) -> Result<Self> {
        let d = rotation.rows();
        Self::new(rotation, (n / d).max(1))
    }

    pub fn d(&self) -> usize {
        self.rotation.rows()
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn rotation(&self) -> &ComplexMatrix {
        &self.rotation
    }

    /// Subcarrier of component `i` of block `b`.
    ///
    /// Components sit `stride` bins apart; blocks tile first within a
    /// stride window, then jump past the `d * stride` span, so stride 1
    /// degenerates to plain contiguous mapping.
    fn position(&self, block: usize, component: usize) -> usize {
        let d = self.d();
        (block / self.stride) * (d * self.stride)
            + (block % self.stride)
            + component * self.stride
    }
}

/// Rotate and interleave symbols into an `n_bins`-subcarrier frequency vector.
pub fn ssd_encode(
    symbols: &[Complex64],
    cfg: &SsdConfig,
    n_bins: usize,
) -> Result<Vec<Complex64>> {
    let d = cfg.d();
    if symbols.is_empty() || symbols.len() % d != 0 {
        return Err(Error::InvalidInput(format!(
            "symbol count {} not a positive multiple of block size {d}",
            symbols.len()
        )));
    }
    if cfg.stride() * d > n_bins {
        return Err(Error::InvalidInput(format!(
            "stride {} * block size {d} exceeds {n_bins} subcarriers",
            cfg.stride()
        )));
    }
    let blocks = symbols.len() / d;
    let mut out = vec![Complex64::new(0.0, 0.0); n_bins];
    for b in 0..blocks {
        let rotated = cfg.rotation.matvec(&symbols[b * d..(b + 1) * d])?;
        for (i, &v) in rotated.iter().enumerate() {
            let pos = cfg.position(b, i);
            if pos >= n_bins {
                return Err(Error::InvalidInput(format!(
                    "block {b} component {i} lands at bin {pos} >= {n_bins}"
                )));
            }
            out[pos] = v;
        }
    }
    Ok(out)
}

/// Exhaustive per-block ML decoding of SSD symbols against per-bin channel
/// scalars. Returns symbol indices and the hypothesis count.
pub fn ssd_decode(
    bins: &[Complex64],
    scalars: &[Complex64],
    cfg: &SsdConfig,
    cons: &Constellation,
    n_symbols: usize,
) -> Result<(Vec<usize>, u64)> {
    let d = cfg.d();
    if n_symbols % d != 0 {
        return Err(Error::InvalidInput(format!(
            "symbol count {n_symbols} not a multiple of block size {d}"
        )));
    }
    if bins.len() != scalars.len() {
        return Err(Error::Dimension("bins and channel scalars differ".into()));
    }
    let hyp_per_block = (cons.size() as u128).pow(d as u32);
    if hyp_per_block > ML_HYPOTHESIS_CAP as u128 {
        return Err(Error::SizeGuard(format!(
            "{}^{d} SSD hypotheses per block exceeds cap {}",
            cons.size(),
            ML_HYPOTHESIS_CAP
        )));
    }
    let blocks = n_symbols / d;
    let mut decisions = vec![0usize; n_symbols];
    let mut hypotheses = 0u64;
    for b in 0..blocks {
        let positions: Vec<usize> = (0..d).map(|i| cfg.position(b, i)).collect();
        if positions.iter().any(|&p| p >= bins.len()) {
            return Err(Error::InvalidInput("ssd block outside the received bins".into()));
        }
        let y: Vec<Complex64> = positions.iter().map(|&p| bins[p]).collect();
        let h: Vec<Complex64> = positions.iter().map(|&p| scalars[p]).collect();
        let mut best = vec![0usize; d];
        let mut best_metric = f64::INFINITY;
        let mut cand = vec![0usize; d];
        loop {
            let symbols: Vec<Complex64> = cand.iter().map(|&i| cons.point(i)).collect();
            let rotated = cfg.rotation.matvec(&symbols)?;
            let metric: f64 = (0..d)
                .map(|i| (y[i] - h[i] * rotated[i]).norm_sqr())
                .sum();
            hypotheses += 1;
            if metric < best_metric {
                best_metric = metric;
                best.copy_from_slice(&cand);
            }
            let mut pos = d;
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
        for (i, &idx) in best.iter().enumerate() {
            decisions[b * d + i] = idx;
        }
    }
    Ok((decisions, hypotheses))
}

/// Apply an `N x N` unitary precoder to an M = 1 symbol grid.
pub fn unitary_precode(grid: &SymbolGrid, u: &ComplexMatrix) -> Result<SymbolGrid> {
    if grid.m() != 1 {
        return Err(Error::Dimension("unitary precoding applies to M = 1 grids".into()));
    }
    if u.rows() != grid.n() || u.cols() != grid.n() {
        return Err(Error::Dimension(format!(
            "precoder {}x{} vs {} subcarriers",
            u.rows(),
            u.cols(),
            grid.n()
        )));
    }
    if !u.is_unitary(1e-10) {
        return Err(Error::NotUnitary("precoder".into()));
    }
    let x: Vec<Complex64> = (0..grid.n()).map(|k| grid.get(k, 0)).collect();
    let precoded = u.matvec(&x)?;
    SymbolGrid::new(precoded.into_iter().map(|v| vec![v]).collect())
}

/// Decoder for unitary-precoded OFDM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrecodeDecode {
    /// Ridge least squares on `diag(h) U` with the per-bin noise variance.
    Mmse { noise_var: f64 },
    /// Exhaustive ML over `constellation^N` (guarded).
    Ml,
}

/// Decode a unitary-precoded OFDM symbol from per-bin observations and
/// per-bin channel scalars. Returns symbol indices and hypotheses evaluated
/// (the MMSE path counts its nearest-point scans).
pub fn unitary_decode(
    bins: &[Complex64],
    scalars: &[Complex64],
    u: &ComplexMatrix,
    mode: PrecodeDecode,
    cons: &Constellation,
) -> Result<(Vec<usize>, u64)> {
    let n = bins.len();
    if scalars.len() != n || u.rows() != n || u.cols() != n {
        return Err(Error::Dimension("precoded decode shape mismatch".into()));
    }
    if !u.is_unitary(1e-10) {
        return Err(Error::NotUnitary("precoder".into()));
    }
    // Composite map from symbols to bins: diag(h) * U.
    let composite = ComplexMatrix::from_fn(n, n, |r, c| scalars[r] * u.get(r, c));
    match mode {
        PrecodeDecode::Mmse { noise_var } => {
            let x = solve_least_squares(&composite, bins, noise_var)?;
            let decisions: Vec<usize> = x.iter().map(|&v| cons.nearest(v)).collect();
            Ok((decisions, (n * cons.size()) as u64))
        }
        PrecodeDecode::Ml => {
            let hyp = (cons.size() as u128).pow(n as u32);
            if hyp > ML_HYPOTHESIS_CAP as u128 {
                return Err(Error::SizeGuard(format!(
                    "{}^{n} precoded-ML hypotheses exceeds cap {}",
                    cons.size(),
                    ML_HYPOTHESIS_CAP
                )));
            }
            let mut best = vec![0usize; n];
            let mut best_metric = f64::INFINITY;
            let mut cand = vec![0usize; n];
            let mut hypotheses = 0u64;
            loop {
                let x: Vec<Complex64> = cand.iter().map(|&i| cons.point(i)).collect();
                let predicted = composite.matvec(&x)?;
                let metric: f64 = bins
                    .iter()
                    .zip(predicted.iter())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum();
                hypotheses += 1;
                if metric < best_metric {
                    best_metric = metric;
                    best.copy_from_slice(&cand);
                }
                let mut pos = n;
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
            Ok((best, hypotheses))
        }
    }
}
