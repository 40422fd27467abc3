//! Numerical search for unitary codebooks maximizing the diversity product.
//!
//! Random restarts plus cyclic coordinate descent with a shrinking step.
//! 2x2 unitaries are parametrized by four phase angles,
//!
//! ```text
//! U = exp(j p0) * [  exp(j p1) cos t   exp(j p2) sin t ]
//!                 [ -exp(-j p2) sin t  exp(-j p1) cos t ]
//! ```
//!
//! which covers U(2); larger dimensions parametrize each codeword by a raw
//! complex matrix re-orthonormalized through Gram-Schmidt. The budget counts
//! objective evaluations, and the best-so-far trace is non-decreasing by
//! construction.

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::numerics::rng::RngStream;
use crate::stcode::dispersion::ExplicitCodebook;
use crate::stcode::diversity::{diversity_scan, DiversityReport};
use num_complex::Complex64;

/// Search output: the best codebook found, its independently recomputed
/// diversity report, and the best-so-far objective value after every
/// evaluation (non-decreasing).
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub codebook: ExplicitCodebook,
    pub report: DiversityReport,
    pub trace: Vec<f64>,
    pub evaluations: u64,
}

fn params_per_codeword(dim: usize) -> usize {
    if dim == 2 {
        4
    } else {
        2 * dim * dim
    }
}

fn unitary_from_params(dim: usize, p: &[f64]) -> ComplexMatrix {
    if dim == 2 {
        let (p0, t, p1, p2) = (p[0], p[1], p[2], p[3]);
        let (st, ct) = t.sin_cos();
        let g = Complex64::from_polar(1.0, p0);
        let e1 = Complex64::from_polar(1.0, p1);
        let e2 = Complex64::from_polar(1.0, p2);
        ComplexMatrix::from_rows(&[
            vec![g * e1 * ct, g * e2 * st],
            vec![-g * e2.conj() * st, g * e1.conj() * ct],
        ])
        .expect("2x2 unitary")
    } else {
        // Raw entries re-orthonormalized by modified Gram-Schmidt.
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| {
                        let base = 2 * (j * dim + i);
                        Complex64::new(p[base], p[base + 1])
                    })
                    .collect()
            })
            .collect();
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut v = cols.remove(0);
            let _ = j;
            for qi in q.iter() {
                let mut dot = Complex64::new(0.0, 0.0);
                for (a, b) in qi.iter().zip(v.iter()) {
                    dot += a.conj() * b;
                }
                for (a, b) in v.iter_mut().zip(qi.iter()) {
                    *a -= dot * b;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                // Degenerate direction: fall back to a canonical basis vector.
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[q.len()] = Complex64::new(1.0, 0.0);
                v = e;
                for qi in q.iter() {
                    let mut dot = Complex64::new(0.0, 0.0);
                    for (a, b) in qi.iter().zip(v.iter()) {
                        dot += a.conj() * b;
                    }
                    for (a, b) in v.iter_mut().zip(qi.iter()) {
                        *a -= dot * b;
                    }
                }
                let n2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for a in v.iter_mut() {
                    *a /= n2;
                }
            } else {
                for a in v.iter_mut() {
                    *a /= norm;
                }
            }
            q.push(v);
        }
        ComplexMatrix::from_fn(dim, dim, |r, c| q[c][r])
    }
}

fn build_codebook(l: usize, dim: usize, params: &[f64]) -> Vec<ComplexMatrix> {
    let per = params_per_codeword(dim);
    (0..l)
        .map(|i| unitary_from_params(dim, &params[i * per..(i + 1) * per]))
        .collect()
}

/// Diversity product of a codeword set: `min |det(Ci - Cj)|^(1/dim)`.
fn objective(codewords: &[ComplexMatrix], dim: usize) -> f64 {
    let mut min_det = f64::INFINITY;
    for i in 0..codewords.len() {
        for j in (i + 1)..codewords.len() {
            let det = codewords[i]
                .sub(&codewords[j])
                .and_then(|d| d.determinant())
                .unwrap_or(Complex64::new(0.0, 0.0));
            min_det = min_det.min(det.norm());
        }
    }
    min_det.powf(1.0 / dim as f64)
}

/// Search for a size-`l` codebook of `dim x dim` unitaries maximizing the
/// diversity product. Reproducible for a fixed `(rng, budget)`.
pub fn unitary_code_search(
    l: usize,
    dim: usize,
    rng: &mut RngStream,
    budget: u64,
) -> Result<SearchResult> {
    if l < 2 {
        return Err(Error::InvalidInput("codebook size must be >= 2".into()));
    }
    if dim < 2 {
        return Err(Error::InvalidInput("codeword dimension must be >= 2".into()));
    }
    if budget == 0 {
        return Err(Error::InvalidInput("search budget must be positive".into()));
    }
    let per = params_per_codeword(dim);
    let total_params = l * per;
    let restarts = 12u64.min(budget).max(1);
    let per_restart = (budget / restarts).max(1);

    let mut evaluations = 0u64;
    let mut trace = Vec::new();
    let mut global_best = f64::NEG_INFINITY;
    let mut global_params: Option<Vec<f64>> = None;

    'outer: for _restart in 0..restarts {
        let mut params: Vec<f64> = (0..total_params)
            .map(|_| (rng.next_f64() * 2.0 - 1.0) * std::f64::consts::PI)
            .collect();
        let mut current = objective(&build_codebook(l, dim, &params), dim);
        evaluations += 1;
        if current > global_best {
            global_best = current;
            global_params = Some(params.clone());
        }
        trace.push(global_best);
        if evaluations >= budget {
            break 'outer;
        }

        let mut step = 0.6f64;
        let mut spent_here = 1u64;
        while step > 1e-5 {
            let mut improved = false;
            for idx in 0..total_params {
                for dir in [1.0f64, -1.0] {
                    let saved = params[idx];
                    params[idx] = saved + dir * step;
                    let cand = objective(&build_codebook(l, dim, &params), dim);
                    evaluations += 1;
                    spent_here += 1;
                    if cand > current {
                        current = cand;
                        improved = true;
                        if current > global_best {
                            global_best = current;
                            global_params = Some(params.clone());
                        }
                        trace.push(global_best);
                        break;
                    }
                    params[idx] = saved;
                    trace.push(global_best);
                    if evaluations >= budget {
                        break 'outer;
                    }
                }
                if evaluations >= budget || spent_here >= per_restart {
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
            if evaluations >= budget || spent_here >= per_restart {
                break;
            }
        }
        if evaluations >= budget {
            break;
        }
    }

    let params = global_params.expect("at least one evaluation happened");
    let codewords = build_codebook(l, dim, &params);
    for (i, u) in codewords.iter().enumerate() {
        if !u.is_unitary(1e-10) {
            return Err(Error::NotUnitary(format!("search codeword {i}")));
        }
    }
    let report = diversity_scan(&codewords)?;
    let label_bits = (usize::BITS - (l - 1).leading_zeros()) as usize;
    let codebook = ExplicitCodebook::new(codewords, label_bits.max(1))?;
    Ok(SearchResult {
        codebook,
        report,
        trace,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stcode::diversity::diversity_report;

    #[test]
    fn pair_search_attains_the_antipodal_bound() {
        // For two unitaries the diversity product maxes at 2 (U2 = -U1).
        let mut rng = RngStream::new(0x5ea0, 0);
        let result = unitary_code_search(2, 2, &mut rng, 20_000).unwrap();
        assert!(
            result.report.diversity_product >= 2.0 - 1e-3,
            "best found {}",
            result.report.diversity_product
        );
        assert!(result.report.diversity_product <= 2.0 + 1e-9);
    }

    #[test]
    fn trace_is_monotone_and_result_reproducible() {
        let mut rng = RngStream::new(0x5ea1, 7);
        let a = unitary_code_search(4, 2, &mut rng, 5000).unwrap();
        for w in a.trace.windows(2) {
            assert!(w[1] >= w[0], "best-so-far trace must not decrease");
        }
        let mut rng2 = RngStream::new(0x5ea1, 7);
        let b = unitary_code_search(4, 2, &mut rng2, 5000).unwrap();
        assert_eq!(a.report.diversity_product, b.report.diversity_product);
        for (x, y) in a.codebook.codewords().iter().zip(b.codebook.codewords().iter()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn report_is_self_consistent() {
        let mut rng = RngStream::new(0x5ea2, 1);
        let result = unitary_code_search(3, 2, &mut rng, 3000).unwrap();
        let recomputed = diversity_report(&result.codebook).unwrap();
        assert_eq!(recomputed.min_abs_det, result.report.min_abs_det);
        assert_eq!(recomputed.argmin_pair, result.report.argmin_pair);
    }

    #[test]
    fn search_validates_arguments() {
        let mut rng = RngStream::new(1, 1);
        assert!(unitary_code_search(1, 2, &mut rng, 100).is_err());
        assert!(unitary_code_search(2, 1, &mut rng, 100).is_err());
        assert!(unitary_code_search(2, 2, &mut rng, 0).is_err());
    }

    #[test]
    fn higher_dimension_parametrization_stays_unitary() {
        let mut rng = RngStream::new(0x5ea3, 2);
        let result = unitary_code_search(2, 3, &mut rng, 800).unwrap();
        for u in result.codebook.codewords() {
            assert!(u.is_unitary(1e-10));
        }
    }
}
