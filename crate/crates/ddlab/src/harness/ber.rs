//! Frame-parallel Monte-Carlo engine and BER bookkeeping.
//!
//! Frame `f` of a simulation draws all of its randomness from sub-streams of
//! `RngStream(master_seed, f)`, so the result of a frame is independent of
//! execution order and worker count. Frames run in fixed-size batches; the
//! early-stopping check (enough bit errors) happens only at batch
//! boundaries, which keeps the set of simulated frames, and therefore the
//! output, identical for any number of workers. Only integer counters cross
//! frame boundaries, so the merge is order-independent.
//!
//! The stopping rule mildly biases the BER estimate at the stopping point;
//! the harness uses it for ordering claims (non-overlapping confidence
//! intervals), not absolute BER values.

use rayon::prelude::*;

/// Bits simulated and bit errors counted in one frame.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrameResult {
    pub bits: u64,
    pub errors: u64,
}

impl FrameResult {
    pub fn merge(self, other: FrameResult) -> FrameResult {
        FrameResult {
            bits: self.bits + other.bits,
            errors: self.errors + other.errors,
        }
    }
}

/// One Monte-Carlo measurement point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub experiment: String,
    pub snr_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub frames: u64,
    pub seed: u64,
}

impl BerRecord {
    pub fn from_counts(
        experiment: &str,
        snr_db: f64,
        bits: u64,
        errors: u64,
        frames: u64,
        seed: u64,
    ) -> Self {
        let ber = if bits == 0 { 0.0 } else { errors as f64 / bits as f64 };
        let (ci95_low, ci95_high) = wilson_interval(errors, bits);
        Self {
            experiment: experiment.to_string(),
            snr_db,
            bits,
            errors,
            ber,
            ci95_low,
            ci95_high,
            frames,
            seed,
        }
    }

    /// True when this record's 95% interval lies strictly below the other's.
    pub fn ci_below(&self, other: &BerRecord) -> bool {
        self.ci95_high < other.ci95_low
    }
}

/// 95% Wilson score interval for `errors` successes in `bits` trials.
pub fn wilson_interval(errors: u64, bits: u64) -> (f64, f64) {
    if bits == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64; // 97.5th normal percentile
    let n = bits as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Engine parameters. `batch` is the early-stopping granularity and must not
/// depend on the worker count.
#[derive(Debug, Clone)]
pub struct MonteCarlo {
    pub master_seed: u64,
    pub workers: usize,
    pub target_bit_errors: u64,
    pub max_frames: u64,
    pub batch: u64,
}

impl MonteCarlo {
    /// Simulate frames until the error target or the frame cap is reached.
    ///
    /// `frame_fn(f)` must derive all randomness from streams keyed by the
    /// frame index `f` and the master seed.
    pub fn run_point<F>(&self, frame_fn: F) -> (FrameResult, u64)
    where
        F: Fn(u64) -> FrameResult + Sync,
    {
        assert!(self.batch > 0, "batch must be positive");
        let mut total = FrameResult::default();
        let mut frames = 0u64;
        let pool = if self.workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(self.workers)
                    .build()
                    .expect("thread pool"),
            )
        } else {
            None
        };
        while frames < self.max_frames && total.errors < self.target_bit_errors {
            let hi = (frames + self.batch).min(self.max_frames);
            let chunk = match &pool {
                Some(pool) => pool.install(|| {
                    (frames..hi)
                        .into_par_iter()
                        .map(&frame_fn)
                        .reduce(FrameResult::default, FrameResult::merge)
                }),
                None => (frames..hi)
                    .map(&frame_fn)
                    .fold(FrameResult::default(), FrameResult::merge),
            };
            total = total.merge(chunk);
            frames = hi;
        }
        (total, frames)
    }
}

/// Render records as CSV with the fixed column set
/// `experiment,snr_db,bits,errors,ber,ci95_low,ci95_high,frames,seed`.
pub fn records_to_csv(records: &[BerRecord]) -> String {
    let mut out = String::from("experiment,snr_db,bits,errors,ber,ci95_low,ci95_high,frames,seed\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.snr_db,
            r.bits,
            r.errors,
            r.ber,
            r.ci95_low,
            r.ci95_high,
            r.frames,
            r.seed
        ));
    }
    out
}
