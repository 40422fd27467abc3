//! Vector OFDM modem.
//!
//! Information symbols are carried as `N` vectors of length `M`. Each vector
//! component is inverse-DFT'd across the vector index, the resulting time
//! vectors are serialized in natural order, and the last `cp_len` samples are
//! prepended as a cyclic prefix. After the channel, the receiver drops the
//! prefix, de-serializes into vectors, and forward-DFTs each component,
//! leaving `N` independent `M x M` vector subchannels
//!
//! ```text
//! y_k = H_k x_k + w_k,     k = 0..N-1
//! ```
//!
//! where `H_k` is the pseudo-circulant matrix of the channel's polyphase
//! components evaluated at `z^{-1} = exp(-j 2 pi k / N)`. `M = 1` reduces
//! sample-for-sample to conventional CP-OFDM, and `N = 1` (with `M` at least
//! the channel length) reduces to the circulant single-carrier FDE model,
//! so the modem bridges the two.
//!
//! Serialization order, fixed bit-exactly: vector index `k` is the frequency
//! index; time-domain sample `t*M + m` carries component `m` of time vector
//! `t`. Modulation scales power by `1/N` (the inverse-DFT normalization);
//! demodulation scales noise up by `N` correspondingly.

use crate::error::{Error, Result};
use crate::numerics::constellation::Constellation;
use crate::numerics::matrix::{solve_least_squares, ComplexMatrix};
use crate::numerics::transform::dft;
use num_complex::Complex64;

/// Modem parameters: vector size `M`, subcarrier count `N`, cyclic prefix
/// length (a multiple of `M` so prefix removal stays aligned with vector
/// boundaries), and the symbol constellation.
#[derive(Debug, Clone)]
pub struct VofdmConfig {
    m: usize,
    n: usize,
    cp_len: usize,
    constellation: Constellation,
}

impl VofdmConfig {
    pub fn new(m: usize, n: usize, cp_len: usize, constellation: Constellation) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("M and N must be >= 1".into()));
        }
        if m > 0 && cp_len % m != 0 {
            return Err(Error::InvalidInput(format!(
                "cp_len {cp_len} must be a multiple of the vector size {m}"
            )));
        }
        Ok(Self { m, n, cp_len, constellation })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// Total frame length `N*M + cp_len`.
    pub fn frame_len(&self) -> usize {
        self.n * self.m + self.cp_len
    }
}

/// The `N`-vector payload (or, on the receive side, the demodulated bins):
/// `vectors[k][m]` is component `m` of frequency bin `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    vectors: Vec<Vec<Complex64>>,
}

impl SymbolGrid {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if vectors.is_empty() || vectors[0].is_empty() {
            return Err(Error::EmptyInput("symbol grid"));
        }
        let m = vectors[0].len();
        if vectors.iter().any(|v| v.len() != m) {
            return Err(Error::Dimension("ragged symbol grid".into()));
        }
        Ok(Self { vectors })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            vectors: vec![vec![Complex64::new(0.0, 0.0); m]; n],
        }
    }

    /// Build from per-bin constellation point indices.
    pub fn from_indices(indices: &[Vec<usize>], cons: &Constellation) -> Result<Self> {
        let vectors = indices
            .iter()
            .map(|row| row.iter().map(|&i| cons.point(i)).collect())
            .collect();
        Self::new(vectors)
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn m(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    pub fn set(&mut self, k: usize, m: usize, v: Complex64) {
        self.vectors[k][m] = v;
    }

    pub fn get(&self, k: usize, m: usize) -> Complex64 {
        self.vectors[k][m]
    }

    pub fn energy(&self) -> f64 {
        self.vectors
            .iter()
            .flat_map(|v| v.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    fn matches(&self, cfg: &VofdmConfig) -> bool {
        self.n() == cfg.n() && self.m() == cfg.m()
    }
}

/// The `N` per-bin channel matrices of the block-diagonalized model.
#[derive(Debug, Clone)]
pub struct PerBinChannels {
    bins: Vec<ComplexMatrix>,
}

impl PerBinChannels {
    pub fn new(bins: Vec<ComplexMatrix>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::EmptyInput("per-bin channels"));
        }
        let m = bins[0].rows();
        if bins.iter().any(|b| b.rows() != m || b.cols() != m) {
            return Err(Error::Dimension("per-bin matrices must all be M x M".into()));
        }
        Ok(Self { bins })
    }

    pub fn n(&self) -> usize {
        self.bins.len()
    }

    pub fn m(&self) -> usize {
        self.bins[0].rows()
    }

    pub fn bin(&self, k: usize) -> &ComplexMatrix {
        &self.bins[k]
    }

    pub fn bins(&self) -> &[ComplexMatrix] {
        &self.bins
    }
}

/// Polyphase decomposition: component `i` is `h[i], h[M+i], h[2M+i], ...`.
pub fn polyphase(h: &[Complex64], m: usize) -> Vec<Vec<Complex64>> {
    assert!(m >= 1, "polyphase order must be >= 1");
    let mut comps = vec![Vec::new(); m];
    for (t, &v) in h.iter().enumerate() {
        comps[t % m].push(v);
    }
    comps
}

/// The `M x M` pseudo-circulant channel matrix evaluated at `z^{-1} = z_inv`.
///
/// With `P_i(w) = sum_t (polyphase component i)[t] * w^t`, the entry at
/// `(r, c)` is `P_{r-c}(w)` on and below the diagonal and `w * P_{M+r-c}(w)`
/// above it. The layout is normative only through the block-diagonalization
/// identity: demodulating a cyclic-prefixed frame through an LTI channel must
/// give exactly `y_k = H_k x_k`, which the tests pin down.
pub fn pseudo_circulant_at(h: &[Complex64], m: usize, z_inv: Complex64) -> ComplexMatrix {
    let comps = polyphase(h, m);
    let eval = |i: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        for &coef in &comps[i] {
            acc += coef * power;
            power *= z_inv;
        }
        acc
    };
    let values: Vec<Complex64> = (0..m).map(eval).collect();
    ComplexMatrix::from_fn(m, m, |r, c| {
        if r >= c {
            values[r - c]
        } else {
            z_inv * values[m + r - c]
        }
    })
}

/// Per-bin channel matrices for an LTI channel `h`:
/// bin `k` is the pseudo-circulant at `z^{-1} = exp(-j 2 pi k / N)`.
pub fn per_bin_channels(cfg: &VofdmConfig, h: &[Complex64]) -> Result<PerBinChannels> {
    if h.is_empty() {
        return Err(Error::EmptyInput("channel impulse response"));
    }
    if h.len() - 1 > cfg.cp_len() {
        return Err(Error::InvalidInput(format!(
            "channel order {} exceeds cyclic prefix {}",
            h.len() - 1,
            cfg.cp_len()
        )));
    }
    let n = cfg.n();
    let bins = (0..n)
        .map(|k| {
            let angle = -std::f64::consts::TAU * k as f64 / n as f64;
            pseudo_circulant_at(h, cfg.m(), Complex64::from_polar(1.0, angle))
        })
        .collect();
    PerBinChannels::new(bins)
}

/// Modulate a symbol grid into a cyclic-prefixed time-domain frame.
pub fn modulate(cfg: &VofdmConfig, grid: &SymbolGrid) -> Result<Vec<Complex64>> {
    if !grid.matches(cfg) {
        return Err(Error::Dimension(format!(
            "grid {}x{} does not match config N={} M={}",
            grid.n(),
            grid.m(),
            cfg.n(),
            cfg.m()
        )));
    }
    let (m, n, cp) = (cfg.m(), cfg.n(), cfg.cp_len());
    let mut body = vec![Complex64::new(0.0, 0.0); n * m];
    for comp in 0..m {
        let spectrum: Vec<Complex64> = (0..n).map(|k| grid.get(k, comp)).collect();
        let time = dft(&spectrum, true)?;
        for (t, &v) in time.iter().enumerate() {
            body[t * m + comp] = v;
        }
    }
    let mut out = Vec::with_capacity(n * m + cp);
    out.extend_from_slice(&body[n * m - cp..]);
    out.extend_from_slice(&body);
    Ok(out)
}

/// Demodulate a received frame into per-bin vectors (cyclic prefix dropped,
/// component-wise forward DFT). Trailing samples beyond the block are ignored.
pub fn demodulate(cfg: &VofdmConfig, y: &[Complex64]) -> Result<SymbolGrid> {
    let (m, n, cp) = (cfg.m(), cfg.n(), cfg.cp_len());
    if y.len() < n * m + cp {
        return Err(Error::Dimension(format!(
            "received frame has {} samples, need at least {}",
            y.len(),
            n * m + cp
        )));
    }
    let block = &y[cp..cp + n * m];
    let mut grid = SymbolGrid::zeros(n, m);
    for comp in 0..m {
        let time: Vec<Complex64> = (0..n).map(|t| block[t * m + comp]).collect();
        let spec = dft(&time, false)?;
        for (k, &v) in spec.iter().enumerate() {
            grid.set(k, comp, v);
        }
    }
    Ok(grid)
}

/// Per-bin equalizer choice. MMSE takes the per-bin noise variance (which is
/// `N` times the per-sample time-domain variance under this crate's DFT
/// convention); ML searches `|constellation|^M` candidates per bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EqualizerMode {
    Zf,
    Mmse { noise_var: f64 },
    Ml,
}

/// Hypothesis budget for the per-bin ML equalizer.
pub const ML_HYPOTHESIS_CAP: usize = 4096;

/// Equalizer output: soft symbol estimates, hard decisions as constellation
/// point indices, and the number of ML hypotheses evaluated (zero for linear
/// modes).
#[derive(Debug, Clone)]
pub struct Equalized {
    pub soft: SymbolGrid,
    pub decisions: Vec<Vec<usize>>,
    pub hypotheses: u64,
}

/// Equalize each bin independently.
///
/// ZF solves `H_k x = y_k`; MMSE solves the ridge least-squares problem with
/// the noise variance as ridge; ML exhaustively minimizes `||y_k - H_k x||^2`
/// over `constellation^M`. Hard decisions are nearest-point for the linear
/// modes and exact for ML. Bins are processed in index order with no
/// cross-bin arithmetic, so any parallel schedule would give identical bits.
pub fn equalize(
    bins: &PerBinChannels,
    received: &SymbolGrid,
    mode: EqualizerMode,
    cons: &Constellation,
) -> Result<Equalized> {
    if bins.n() != received.n() || bins.m() != received.m() {
        return Err(Error::Dimension(format!(
            "bins {}x({}x{}) vs received {}x{}",
            bins.n(),
            bins.m(),
            bins.m(),
            received.n(),
            received.m()
        )));
    }
    let (n, m) = (bins.n(), bins.m());
    if let EqualizerMode::Ml = mode {
        let hyp = (cons.size() as u128).pow(m as u32);
        if hyp > ML_HYPOTHESIS_CAP as u128 {
            return Err(Error::SizeGuard(format!(
                "ML equalizer: {}^{} hypotheses per bin exceeds cap {}",
                cons.size(),
                m,
                ML_HYPOTHESIS_CAP
            )));
        }
    }
    let mut soft = SymbolGrid::zeros(n, m);
    let mut decisions = vec![vec![0usize; m]; n];
    let mut hypotheses = 0u64;
    for k in 0..n {
        let h = bins.bin(k);
        let y = received.vector(k);
        match mode {
            EqualizerMode::Zf => {
                let x = h.solve(y).map_err(|e| match e {
                    Error::Singular(msg) => {
                        Error::Singular(format!("ZF equalizer, bin {k}: {msg}"))
                    }
                    other => other,
                })?;
                for c in 0..m {
                    soft.set(k, c, x[c]);
                    decisions[k][c] = cons.nearest(x[c]);
                }
            }
            EqualizerMode::Mmse { noise_var } => {
                let x = solve_least_squares(h, y, noise_var)?;
                for c in 0..m {
                    soft.set(k, c, x[c]);
                    decisions[k][c] = cons.nearest(x[c]);
                }
            }
            EqualizerMode::Ml => {
                let mut best_metric = f64::INFINITY;
                let mut best = vec![0usize; m];
                let mut candidate = vec![0usize; m];
                loop {
                    let x: Vec<Complex64> =
                        candidate.iter().map(|&i| cons.point(i)).collect();
                    let hx = h.matvec(&x)?;
                    let metric: f64 = y
                        .iter()
                        .zip(hx.iter())
                        .map(|(a, b)| (a - b).norm_sqr())
                        .sum();
                    hypotheses += 1;
                    if metric < best_metric {
                        best_metric = metric;
                        best.copy_from_slice(&candidate);
                    }
                    // Odometer over constellation indices, lowest label first.
                    let mut pos = m;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        candidate[pos] += 1;
                        if candidate[pos] < cons.size() {
                            break;
                        }
                        candidate[pos] = 0;
                        if pos == 0 {
                            pos = usize::MAX;
                            break;
                        }
                    }
                    if pos == usize::MAX {
                        break;
                    }
                }
                for c in 0..m {
                    soft.set(k, c, cons.point(best[c]));
                    decisions[k][c] = best[c];
                }
            }
        }
    }
    Ok(Equalized { soft, decisions, hypotheses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{DelayDopplerChannel, DopplerProfile};
    use crate::numerics::rng::RngStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_h(rng: &mut RngStream, len: usize) -> Vec<Complex64> {
        (0..len).map(|_| rng.next_complex_gaussian(1.0)).collect()
    }

    fn random_grid(rng: &mut RngStream, cfg: &VofdmConfig) -> SymbolGrid {
        let cons = cfg.constellation();
        let indices: Vec<Vec<usize>> = (0..cfg.n())
            .map(|_| {
                (0..cfg.m())
                    .map(|_| rng.next_below(cons.size() as u64) as usize)
                    .collect()
            })
            .collect();
        SymbolGrid::from_indices(&indices, cons).unwrap()
    }

    /// Time-domain oracle: modulate, run through an LTI channel with zero
    /// noise, demodulate, and compare against `H_k x_k` bin by bin.
    fn check_block_diagonalization(cfg: &VofdmConfig, h: &[Complex64], grid: &SymbolGrid) -> f64 {
        let paths: Vec<(usize, Complex64)> = h
            .iter()
            .enumerate()
            .filter(|(_, g)| g.norm() > 0.0)
            .map(|(d, &g)| (d, g))
            .collect();
        let ch =
            DelayDopplerChannel::from_profile(&paths, &DopplerProfile::Constant(0.0)).unwrap();
        let s = modulate(cfg, grid).unwrap();
        let mut dummy = RngStream::new(0, 0);
        let y = ch.apply(&s, 0.0, &mut dummy).unwrap();
        let received = demodulate(cfg, &y).unwrap();
        let bins = per_bin_channels(cfg, h).unwrap();
        let mut scale: f64 = 0.0;
        for k in 0..cfg.n() {
            for v in bins.bin(k).matvec(grid.vector(k)).unwrap() {
                scale = scale.max(v.norm());
            }
        }
        let mut worst: f64 = 0.0;
        for k in 0..cfg.n() {
            let expect = bins.bin(k).matvec(grid.vector(k)).unwrap();
            for (a, b) in received.vector(k).iter().zip(expect.iter()) {
                worst = worst.max((a - b).norm() / scale.max(1e-300));
            }
        }
        worst
    }

    #[test]
    fn polyphase_definition_and_reassembly() {
        let h = [c(1.0, 0.0), c(2.0, 0.0)];
        let comps = polyphase(&h, 2);
        assert_eq!(comps[0], vec![c(1.0, 0.0)]);
        assert_eq!(comps[1], vec![c(2.0, 0.0)]);

        let h3 = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let comps = polyphase(&h3, 2);
        assert_eq!(comps[0], vec![c(1.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(comps[1], vec![c(2.0, 0.0)]);

        // Interleaving the components back recovers h exactly.
        let mut rng = RngStream::new(1, 1);
        let h = random_h(&mut rng, 11);
        let m = 4;
        let comps = polyphase(&h, m);
        let mut rebuilt = vec![c(0.0, 0.0); h.len()];
        for (i, comp) in comps.iter().enumerate() {
            for (t, &v) in comp.iter().enumerate() {
                rebuilt[t * m + i] = v;
            }
        }
        assert_eq!(rebuilt, h);
    }

    #[test]
    fn pseudo_circulant_scalar_case_is_frequency_response() {
        let h = [c(0.9, 0.1), c(0.3, -0.2), c(0.1, 0.05)];
        let z_inv = Complex64::from_polar(1.0, -0.7);
        let m = pseudo_circulant_at(&h, 1, z_inv);
        let expect = h[0] + h[1] * z_inv + h[2] * z_inv * z_inv;
        assert!((m.get(0, 0) - expect).norm() <= 1e-15);
    }

    #[test]
    fn pseudo_circulant_two_tap_closed_form() {
        let (h0, h1) = (c(0.8, 0.3), c(0.4, -0.5));
        let h = [h0, h1];
        let at_one = pseudo_circulant_at(&h, 2, c(1.0, 0.0));
        assert!((at_one.get(0, 0) - h0).norm() <= 1e-15);
        assert!((at_one.get(0, 1) - h1).norm() <= 1e-15);
        assert!((at_one.get(1, 0) - h1).norm() <= 1e-15);
        assert!((at_one.get(1, 1) - h0).norm() <= 1e-15);

        let at_minus_one = pseudo_circulant_at(&h, 2, c(-1.0, 0.0));
        assert!((at_minus_one.get(0, 1) + h1).norm() <= 1e-15);
        assert!((at_minus_one.get(1, 0) - h1).norm() <= 1e-15);
    }

    #[test]
    fn pseudo_circulant_single_bin_is_circulant() {
        let mut rng = RngStream::new(2, 0);
        let h = random_h(&mut rng, 5);
        let m = 8;
        let mat = pseudo_circulant_at(&h, m, c(1.0, 0.0));
        let mut padded = h.clone();
        padded.resize(m, c(0.0, 0.0));
        let circ = ComplexMatrix::circulant(&padded).unwrap();
        assert!(mat.max_abs_diff(&circ) <= 1e-14);
    }

    #[test]
    fn per_bin_identity_channel_gives_identity_bins() {
        let cfg = VofdmConfig::new(3, 4, 3, Constellation::qpsk()).unwrap();
        let bins = per_bin_channels(&cfg, &[c(1.0, 0.0)]).unwrap();
        for k in 0..4 {
            assert!(bins.bin(k).max_abs_diff(&ComplexMatrix::identity(3)) <= 1e-15);
        }
    }

    #[test]
    fn per_bin_matches_scalar_dft_for_m1() {
        let cfg = VofdmConfig::new(1, 8, 4, Constellation::qpsk()).unwrap();
        let mut rng = RngStream::new(3, 0);
        let h = random_h(&mut rng, 4);
        let bins = per_bin_channels(&cfg, &h).unwrap();
        let mut padded = h.clone();
        padded.resize(8, c(0.0, 0.0));
        let spectrum = dft(&padded, false).unwrap();
        for k in 0..8 {
            assert!((bins.bin(k).get(0, 0) - spectrum[k]).norm() <= 1e-12);
        }
    }

    #[test]
    fn per_bin_rejects_channel_longer_than_cp() {
        let cfg = VofdmConfig::new(2, 4, 2, Constellation::qpsk()).unwrap();
        let h = vec![c(1.0, 0.0); 4]; // order 3 > cp 2
        assert!(per_bin_channels(&cfg, &h).is_err());
    }

    #[test]
    fn modulate_demodulate_identity_channel_round_trip() {
        let mut rng = RngStream::new(4, 0);
        for (m, n) in [(1usize, 8usize), (2, 4), (4, 4), (3, 5)] {
            let cfg = VofdmConfig::new(m, n, m, Constellation::qam16()).unwrap();
            let grid = random_grid(&mut rng, &cfg);
            let s = modulate(&cfg, &grid).unwrap();
            assert_eq!(s.len(), cfg.frame_len());
            let back = demodulate(&cfg, &s).unwrap();
            for k in 0..n {
                for c in 0..m {
                    assert!((back.get(k, c) - grid.get(k, c)).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn modulation_scales_power_by_inverse_n() {
        let mut rng = RngStream::new(5, 0);
        let cfg = VofdmConfig::new(4, 16, 8, Constellation::qpsk()).unwrap();
        let grid = random_grid(&mut rng, &cfg);
        let s = modulate(&cfg, &grid).unwrap();
        let body = &s[cfg.cp_len()..];
        let body_energy: f64 = body.iter().map(|z| z.norm_sqr()).sum();
        let expect = grid.energy() / cfg.n() as f64;
        assert!((body_energy - expect).abs() <= 1e-10 * expect);
    }

    #[test]
    fn block_diagonalization_closed_form_m2_n2() {
        let cfg = VofdmConfig::new(2, 2, 2, Constellation::qpsk()).unwrap();
        let (h0, h1) = (c(0.9, -0.2), c(0.35, 0.15));
        let h = vec![h0, h1];
        let mut rng = RngStream::new(6, 0);
        let grid = random_grid(&mut rng, &cfg);
        let worst = check_block_diagonalization(&cfg, &h, &grid);
        assert!(worst <= 1e-10, "relative error {worst}");
        // And the bins really are the closed-form matrices.
        let bins = per_bin_channels(&cfg, &h).unwrap();
        let expect0 =
            ComplexMatrix::from_rows(&[vec![h0, h1], vec![h1, h0]]).unwrap();
        let expect1 =
            ComplexMatrix::from_rows(&[vec![h0, -h1], vec![h1, h0]]).unwrap();
        assert!(bins.bin(0).max_abs_diff(&expect0) <= 1e-12);
        assert!(bins.bin(1).max_abs_diff(&expect1) <= 1e-12);
    }

    #[test]
    fn block_diagonalization_random_cases() {
        let mut rng = RngStream::new(7, 0);
        for (m, n) in [(2usize, 4usize), (2, 8), (4, 8), (3, 4)] {
            let cfg = VofdmConfig::new(m, n, 2 * m, Constellation::qpsk()).unwrap();
            let len = 1 + rng.next_below(cfg.cp_len() as u64) as usize;
            let h = random_h(&mut rng, len);
            let grid = random_grid(&mut rng, &cfg);
            let worst = check_block_diagonalization(&cfg, &h, &grid);
            assert!(worst <= 1e-10, "M={m} N={n}: relative error {worst}");
        }
    }

    #[test]
    fn single_carrier_case_matches_circulant_model() {
        // N = 1 with M >= channel length: one vector, circulant channel.
        let m = 8;
        let cfg = VofdmConfig::new(m, 1, m, Constellation::qpsk()).unwrap();
        let mut rng = RngStream::new(8, 0);
        let h = random_h(&mut rng, 5);
        let grid = random_grid(&mut rng, &cfg);
        let worst = check_block_diagonalization(&cfg, &h, &grid);
        assert!(worst <= 1e-10);
        let bins = per_bin_channels(&cfg, &h).unwrap();
        let mut padded = h.clone();
        padded.resize(m, c(0.0, 0.0));
        let circ = ComplexMatrix::circulant(&padded).unwrap();
        assert!(bins.bin(0).max_abs_diff(&circ) <= 1e-12);
    }

    #[test]
    fn zf_recovers_noiseless_transmission() {
        let cfg = VofdmConfig::new(2, 8, 4, Constellation::qpsk()).unwrap();
        let mut rng = RngStream::new(9, 0);
        let h = vec![c(1.0, 0.0), c(0.45, -0.2), c(0.2, 0.1)];
        let grid = random_grid(&mut rng, &cfg);
        let s = modulate(&cfg, &grid).unwrap();
        let paths: Vec<(usize, Complex64)> =
            h.iter().enumerate().map(|(d, &g)| (d, g)).collect();
        let ch =
            DelayDopplerChannel::from_profile(&paths, &DopplerProfile::Constant(0.0)).unwrap();
        let y = ch.apply(&s, 0.0, &mut RngStream::new(0, 0)).unwrap();
        let received = demodulate(&cfg, &y).unwrap();
        let bins = per_bin_channels(&cfg, &h).unwrap();

        let zf = equalize(&bins, &received, EqualizerMode::Zf, cfg.constellation()).unwrap();
        let ml = equalize(&bins, &received, EqualizerMode::Ml, cfg.constellation()).unwrap();
        for k in 0..cfg.n() {
            for c in 0..cfg.m() {
                let tx = cfg.constellation().nearest(grid.get(k, c));
                assert_eq!(zf.decisions[k][c], tx, "ZF bin {k} comp {c}");
                assert_eq!(ml.decisions[k][c], tx, "ML bin {k} comp {c}");
            }
        }
        assert_eq!(ml.hypotheses, (cfg.n() * 16) as u64);
    }

    #[test]
    fn ml_matches_brute_force_and_guards_size() {
        let cons = Constellation::qpsk();
        let mut rng = RngStream::new(10, 0);
        let h = ComplexMatrix::from_fn(2, 2, |_, _| rng.next_complex_gaussian(1.0));
        let y = vec![rng.next_complex_gaussian(1.0), rng.next_complex_gaussian(1.0)];
        let bins = PerBinChannels::new(vec![h.clone()]).unwrap();
        let received = SymbolGrid::new(vec![y.clone()]).unwrap();
        let eq = equalize(&bins, &received, EqualizerMode::Ml, &cons).unwrap();

        // Brute force over all 16 candidates.
        let mut best = (f64::INFINITY, vec![0usize, 0]);
        for a in 0..4 {
            for b in 0..4 {
                let x = vec![cons.point(a), cons.point(b)];
                let hx = h.matvec(&x).unwrap();
                let metric: f64 = y
                    .iter()
                    .zip(hx.iter())
                    .map(|(p, q)| (p - q).norm_sqr())
                    .sum();
                if metric < best.0 {
                    best = (metric, vec![a, b]);
                }
            }
        }
        assert_eq!(eq.decisions[0], best.1);

        // 4^7 > 4096: the guard must refuse.
        let big = PerBinChannels::new(vec![ComplexMatrix::identity(7)]).unwrap();
        let rec7 = SymbolGrid::new(vec![vec![c(0.0, 0.0); 7]]).unwrap();
        assert!(matches!(
            equalize(&big, &rec7, EqualizerMode::Ml, &cons),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn zf_reports_singular_bins() {
        let cons = Constellation::qpsk();
        let bins = PerBinChannels::new(vec![ComplexMatrix::zeros(2, 2)]).unwrap();
        let received = SymbolGrid::new(vec![vec![c(1.0, 0.0), c(0.0, 1.0)]]).unwrap();
        assert!(matches!(
            equalize(&bins, &received, EqualizerMode::Zf, &cons),
            Err(Error::Singular(_))
        ));
        // MMSE with a positive ridge handles the same bin.
        assert!(equalize(
            &bins,
            &received,
            EqualizerMode::Mmse { noise_var: 1e-2 },
            &cons
        )
        .is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(VofdmConfig::new(0, 4, 0, Constellation::bpsk()).is_err());
        assert!(VofdmConfig::new(4, 4, 6, Constellation::bpsk()).is_err());
        assert!(VofdmConfig::new(4, 4, 8, Constellation::bpsk()).is_ok());
    }

    #[test]
    fn demodulate_rejects_short_input() {
        let cfg = VofdmConfig::new(2, 4, 2, Constellation::qpsk()).unwrap();
        let y = vec![c(0.0, 0.0); cfg.frame_len() - 1];
        assert!(demodulate(&cfg, &y).is_err());
    }
}
