//! Monte Carlo sampling of Student vectors through Gaussian subordination,
//! weighted walks of independent Student terms, and the empirical statistics
//! (Kolmogorov-Smirnov, binned chi-square, tail counts) used to cross-check
//! densities and tail claims from an independent direction.
//!
//! Batches are generated in fixed-size chunks, one counter-derived RNG
//! substream per chunk, so results are bit-identical for a given
//! (seed, spec) regardless of thread count.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::densities::{DensityError, MixtureDensity, StudentParams};
use crate::specfun::{gamma, reg_gamma_upper};
use crate::tol;

// rows per RNG substream; a chunk is the unit of parallel generation
const CHUNK: usize = 1 << 16;

#[derive(Debug, Error, PartialEq)]
pub enum SamplingError {
    #[error("sample count must be at least 1")]
    EmptyBatch,
    #[error("walk needs at least one term")]
    NoTerms,
    #[error("{degrees} degrees but {weights} weights")]
    LengthMismatch { degrees: usize, weights: usize },
    #[error("walk weights must be positive and sum to 1")]
    BadWeights,
    #[error("threshold must be nonnegative and finite, got {0}")]
    BadThreshold(f64),
    #[error("statistic needs univariate samples, got d = {0}")]
    NotUnivariate(usize),
    #[error("bin edges must be strictly increasing and nonempty")]
    BadBins,
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// Weighted walk Y = sum a_i X_i of independent d-variate Student vectors
/// with tail orders nu_i = n_i + 1/2 and a shared scale matrix.
#[derive(Debug, Clone)]
pub struct WalkSpec {
    degrees: Vec<u32>,
    weights: Vec<f64>,
    d: usize,
    // lower Cholesky factor of the scale matrix; None = identity
    chol: Option<DMatrix<f64>>,
}

impl WalkSpec {
    pub fn new(degrees: Vec<u32>, weights: Vec<f64>, d: usize) -> Result<Self, SamplingError> {
        Self::build(degrees, weights, d, None)
    }

    /// Walk with a common SPD scale matrix applied to every term.
    pub fn with_scale(
        degrees: Vec<u32>,
        weights: Vec<f64>,
        scale: &DMatrix<f64>,
    ) -> Result<Self, SamplingError> {
        // reuses the SPD validation and factorization of the density side
        let p = StudentParams::correlated(0.5, scale)?;
        Self::build(degrees, weights, p.dim(), Some(p.scale_factor()))
    }

    fn build(
        degrees: Vec<u32>,
        weights: Vec<f64>,
        d: usize,
        chol: Option<DMatrix<f64>>,
    ) -> Result<Self, SamplingError> {
        if degrees.is_empty() {
            return Err(SamplingError::NoTerms);
        }
        if degrees.len() != weights.len() {
            return Err(SamplingError::LengthMismatch {
                degrees: degrees.len(),
                weights: weights.len(),
            });
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite()))
            || (sum - 1.0).abs() > tol::WEIGHT_SUM_TOL
        {
            return Err(SamplingError::BadWeights);
        }
        if d == 0 {
            return Err(SamplingError::Density(DensityError::ZeroDimension));
        }
        Ok(WalkSpec {
            degrees,
            weights,
            d,
            chol,
        })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn description(&self) -> String {
        format!(
            "walk degrees={:?} weights={:?} d={} scale={}",
            self.degrees,
            self.weights,
            self.d,
            if self.chol.is_some() {
                "correlated"
            } else {
                "spherical"
            }
        )
    }
}

/// A generated batch: n rows of d coordinates, carrying the seed and spec
/// string needed to regenerate it bit-identically.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    points: Vec<f64>,
    d: usize,
    seed: u64,
    spec: String,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    seed: u64,
    spec: &'a str,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.points.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    /// Row-major coordinates, `len() * dim()` values.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        assert!(j < self.d, "column out of range");
        self.points.iter().skip(j).step_by(self.d).copied()
    }

    /// One row per sample, `x1..xd` header, LF line endings.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = (1..=self.d).map(|j| format!("x{j}")).collect();
        let mut out = header.join(",");
        out.push('\n');
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{}", v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON sidecar recording how the batch was produced.
    pub fn sidecar_json(&self) -> String {
        serde_json::to_string_pretty(&Sidecar {
            seed: self.seed,
            spec: &self.spec,
        })
        .expect("sidecar serializes")
    }
}

// One walk term per (tail order, weight); a single Student draw is the
// one-term walk with weight 1.
fn generate(
    terms: &[(f64, f64)],
    chol: Option<&DMatrix<f64>>,
    d: usize,
    n: usize,
    seed: u64,
) -> Vec<f64> {
    let gammas: Vec<Gamma<f64>> = terms
        .iter()
        .map(|(nu, _)| Gamma::new(*nu, 1.0).expect("tail order is positive"))
        .collect();
    let mut points = vec![0.0f64; n * d];
    points
        .par_chunks_mut(CHUNK * d)
        .enumerate()
        .for_each(|(chunk, buf)| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let mut z = vec![0.0f64; d];
            for row in buf.chunks_exact_mut(d) {
                for ((_, a), gamma_nu) in terms.iter().zip(&gammas) {
                    // T = 1/(4G) is inverse-Gamma; X = sqrt(2T) L Z
                    let g: f64 = gamma_nu.sample(&mut rng).max(f64::MIN_POSITIVE);
                    let fac = a * (0.5 / g).sqrt();
                    for zj in z.iter_mut() {
                        *zj = rng.sample(StandardNormal);
                    }
                    match chol {
                        None => {
                            for (xj, zj) in row.iter_mut().zip(&z) {
                                *xj += fac * zj;
                            }
                        }
                        Some(l) => {
                            for (j, xj) in row.iter_mut().enumerate() {
                                let mut acc = 0.0;
                                for (k, zk) in z.iter().enumerate().take(j + 1) {
                                    acc += l[(j, k)] * zk;
                                }
                                *xj += fac * acc;
                            }
                        }
                    }
                }
            }
        });
    points
}

/// Draws n vectors with the Student law of `p` by sampling the mixing time
/// T = 1/(4G), G Gamma(nu, 1), then X = sqrt(2T) L Z.
pub fn sample_student(
    p: &StudentParams,
    n: usize,
    seed: u64,
) -> Result<SampleBatch, SamplingError> {
    if n == 0 {
        return Err(SamplingError::EmptyBatch);
    }
    let chol = if p.is_spherical() {
        None
    } else {
        Some(p.scale_factor())
    };
    let spec = format!(
        "student nu={} d={} scale={}",
        p.nu(),
        p.dim(),
        if chol.is_some() {
            "correlated"
        } else {
            "spherical"
        }
    );
    let points = generate(&[(p.nu(), 1.0)], chol.as_ref(), p.dim(), n, seed);
    Ok(SampleBatch {
        points,
        d: p.dim(),
        seed,
        spec,
    })
}

/// Draws n independent copies of the weighted walk. A single term with
/// weight 1 consumes the RNG exactly like `sample_student`, so the
/// one-term walk reproduces it bit for bit.
pub fn sample_walk(w: &WalkSpec, n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    if n == 0 {
        return Err(SamplingError::EmptyBatch);
    }
    let terms: Vec<(f64, f64)> = w
        .degrees
        .iter()
        .zip(&w.weights)
        .map(|(ni, ai)| (*ni as f64 + 0.5, *ai))
        .collect();
    let points = generate(&terms, w.chol.as_ref(), w.d, n, seed);
    Ok(SampleBatch {
        points,
        d: w.d,
        seed,
        spec: w.description(),
    })
}

/// Fraction of samples with Euclidean norm above the threshold, with its
/// binomial standard error.
#[derive(Debug, Clone, Copy)]
pub struct TailCount {
    pub fraction: f64,
    pub std_error: f64,
}

pub fn empirical_tail_count(
    batch: &SampleBatch,
    threshold: f64,
) -> Result<TailCount, SamplingError> {
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(SamplingError::BadThreshold(threshold));
    }
    let n = batch.len();
    let t2 = threshold * threshold;
    let count = batch
        .rows()
        .filter(|row| row.iter().map(|v| v * v).sum::<f64>() > t2)
        .count();
    let p = count as f64 / n as f64;
    Ok(TailCount {
        fraction: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sided Kolmogorov-Smirnov test of a univariate batch against a CDF,
/// with the asymptotic p-value (exact enough for the n ~ 1e5 used here).
pub fn ks_test<F: Fn(f64) -> f64>(
    batch: &SampleBatch,
    cdf: F,
) -> Result<KsOutcome, SamplingError> {
    if batch.dim() != 1 {
        return Err(SamplingError::NotUnivariate(batch.dim()));
    }
    let mut xs = batch.points().to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut stat = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        let f = cdf(*x);
        stat = stat
            .max(f - i as f64 / n)
            .max((i + 1) as f64 / n - f);
    }
    Ok(KsOutcome {
        statistic: stat,
        p_value: kolmogorov_pvalue(n.sqrt() * stat),
    })
}

/// P(sup |B(t)| > lambda) for the Brownian bridge: the asymptotic null
/// distribution of sqrt(n) times the KS statistic.
pub fn kolmogorov_pvalue(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        // Jacobi-theta complement, instant for small lambda
        let mut sum = 0.0;
        for k in 1..=10u32 {
            let m = (2 * k - 1) as f64;
            sum += (-m * m * std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        }
        return 1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum;
    }
    let mut sum = 0.0;
    for k in 1..=200u32 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        if term == 0.0 {
            break;
        }
        sum += if k % 2 == 1 { term } else { -term };
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Binned goodness-of-fit chi-square against a CDF. Cells are
/// (-inf, e_0], (e_0, e_1], ..., (e_last, inf); the caller picks edges so
/// that every expected count is comfortably positive.
pub fn chi_square_bin_test<F: Fn(f64) -> f64>(
    batch: &SampleBatch,
    cdf: F,
    edges: &[f64],
) -> Result<ChiSquareOutcome, SamplingError> {
    if batch.dim() != 1 {
        return Err(SamplingError::NotUnivariate(batch.dim()));
    }
    if edges.is_empty() || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SamplingError::BadBins);
    }
    let cells = edges.len() + 1;
    let mut observed = vec![0usize; cells];
    for x in batch.points() {
        observed[edges.partition_point(|e| e < x)] += 1;
    }
    let n = batch.len() as f64;
    let mut stat = 0.0;
    let mut prev = 0.0;
    for (i, obs) in observed.iter().enumerate() {
        let next = if i < edges.len() { cdf(edges[i]) } else { 1.0 };
        let expected = n * (next - prev);
        prev = next;
        if !(expected > 0.0) {
            return Err(SamplingError::BadBins);
        }
        let diff = *obs as f64 - expected;
        stat += diff * diff / expected;
    }
    let dof = cells - 1;
    Ok(ChiSquareOutcome {
        statistic: stat,
        dof,
        p_value: reg_gamma_upper(dof as f64 / 2.0, stat / 2.0),
    })
}

/// CDF of the univariate Student law with tail order nu = n + 1/2, via the
/// antiderivative recurrence J_1 = atan x,
/// J_{k+1} = x/(2k (1+x^2)^k) + (2k-1)/(2k) J_k.
pub fn student_cdf_half_integer(n: u32, x: f64) -> f64 {
    let nu = n as f64 + 0.5;
    let a = gamma(nu + 0.5) / (gamma(nu) * std::f64::consts::PI.sqrt());
    let w = 1.0 + x * x;
    let mut j = x.atan();
    let mut wk = 1.0;
    for k in 1..=n as u64 {
        wk *= w;
        j = x / (2.0 * k as f64 * wk) + (2.0 * k as f64 - 1.0) / (2.0 * k as f64) * j;
    }
    (0.5 + a * j).clamp(0.0, 1.0)
}

/// CDF of a univariate scaled Bessel mixture: the convex combination of
/// half-integer Student CDFs at x/scale.
pub fn mixture_cdf(m: &MixtureDensity, x: f64) -> Result<f64, SamplingError> {
    if m.dim() != 1 {
        return Err(SamplingError::NotUnivariate(m.dim()));
    }
    let xs = x / m.scale();
    let f = m
        .mixture()
        .weights()
        .iter()
        .map(|(j, w)| crate::exactpoly::rational_to_f64(w) * student_cdf_half_integer(*j, xs))
        .sum();
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{expand_product, ProductSpec, Rational};
    use std::f64::consts::PI;

    fn student1(nu: f64) -> StudentParams {
        StudentParams::spherical(nu, 1).unwrap()
    }

    fn walk_mixture(degrees: &[u32], weights: &[(i64, i64)], scale: f64) -> MixtureDensity {
        let w: Vec<Rational> = weights
            .iter()
            .map(|(p, q)| Rational::new((*p).into(), (*q).into()))
            .collect();
        let spec = ProductSpec::new(degrees.to_vec(), w).unwrap();
        MixtureDensity::new(expand_product(&spec), scale, 1).unwrap()
    }

    #[test]
    fn walk_spec_validation() {
        assert!(matches!(
            WalkSpec::new(vec![], vec![], 1),
            Err(SamplingError::NoTerms)
        ));
        assert!(matches!(
            WalkSpec::new(vec![1, 2], vec![1.0], 1),
            Err(SamplingError::LengthMismatch { .. })
        ));
        assert!(matches!(
            WalkSpec::new(vec![1, 2], vec![0.5, 0.6], 1),
            Err(SamplingError::BadWeights)
        ));
        assert!(matches!(
            WalkSpec::new(vec![1, 2], vec![-0.5, 1.5], 1),
            Err(SamplingError::BadWeights)
        ));
        assert!(WalkSpec::new(vec![1, 2], vec![0.5, 0.5], 3).is_ok());
        // within the documented slack around 1
        assert!(WalkSpec::new(vec![0], vec![1.0 + 1e-13], 1).is_ok());
    }

    #[test]
    fn batches_are_reproducible_and_seed_sensitive() {
        let p = StudentParams::spherical(1.5, 2).unwrap();
        let a = sample_student(&p, 3000, 7).unwrap();
        let b = sample_student(&p, 3000, 7).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.len(), 3000);
        assert_eq!(a.dim(), 2);
        let c = sample_student(&p, 3000, 8).unwrap();
        assert_ne!(a.points(), c.points());
        // growing a batch keeps the shared prefix: chunk substreams are
        // derived from the chunk index, not the total size
        let big = sample_student(&p, 4000, 7).unwrap();
        assert_eq!(&big.points()[..3000 * 2], a.points());
    }

    #[test]
    fn one_term_walk_is_sample_student() {
        let w = WalkSpec::new(vec![0], vec![1.0], 1).unwrap();
        let a = sample_walk(&w, 2000, 11).unwrap();
        let b = sample_student(&student1(0.5), 2000, 11).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn kolmogorov_pvalue_reference_points() {
        // frozen from the theta-series definition
        let cases = [
            (0.5, 0.9639452436648751),
            (1.0, 0.2699996716773545),
            (1.3581, 0.04999963043166741),
            (2.0, 0.0006709252557796953),
        ];
        for (lam, want) in cases {
            let got = kolmogorov_pvalue(lam);
            assert!((got - want).abs() < 1e-13 * want.max(1e-3), "lambda={lam}");
        }
        assert_eq!(kolmogorov_pvalue(0.0), 1.0);
        assert!(kolmogorov_pvalue(0.15) > 1.0 - 1e-10);
        assert!(kolmogorov_pvalue(6.0) < 1e-12);
    }

    #[test]
    fn student_cdf_reference_points() {
        // frozen against 40-digit quadrature of the density
        assert!((student_cdf_half_integer(0, 1.0) - 0.75).abs() < 1e-15);
        let cases = [
            (1u32, 1.0, 0.9091549430918954),
            (1, 2.5, 0.9886430881277051),
            (2, 0.7, 0.9108506436506948),
            (2, 2.0, 0.9967168640862185),
            (3, 1.2, 0.9921995087506533),
        ];
        for (n, x, want) in cases {
            let got = student_cdf_half_integer(n, x);
            assert!((got - want).abs() < 1e-14, "n={n} x={x}");
            // symmetry
            let neg = student_cdf_half_integer(n, -x);
            assert!((neg - (1.0 - want)).abs() < 1e-14);
        }
        assert!(student_cdf_half_integer(4, 1e8) > 1.0 - 1e-12);
    }

    #[test]
    fn cauchy_batch_passes_ks() {
        let batch = sample_student(&student1(0.5), 200_000, 42).unwrap();
        let out = ks_test(&batch, |x| 0.5 + x.atan() / PI).unwrap();
        assert!(out.p_value > tol::KS_LEVEL, "p = {}", out.p_value);
    }

    #[test]
    fn ks_rejects_wrong_law() {
        let batch = sample_student(&student1(0.5), 50_000, 42).unwrap();
        let out = ks_test(&batch, |x| student_cdf_half_integer(1, x)).unwrap();
        assert!(out.p_value < 1e-9);
    }

    #[test]
    fn second_moment_matches_mixing_mean() {
        // E X^2 = 2 E T = 1/(2(nu-1)) = 1 at nu = 3/2
        let batch = sample_student(&student1(1.5), 500_000, 5).unwrap();
        let n = batch.len() as f64;
        let m2: f64 = batch.points().iter().map(|x| x * x).sum::<f64>() / n;
        let v: f64 = batch
            .points()
            .iter()
            .map(|x| (x * x - m2) * (x * x - m2))
            .sum::<f64>()
            / n;
        let se = (v / n).sqrt();
        assert!((m2 - 1.0).abs() < 3.0 * se, "m2 = {m2}, se = {se}");
    }

    #[test]
    fn scale_matrix_shapes_coordinate_variances() {
        // K = diag(1, 4): coordinate second moments K_jj/3 at nu = 5/2
        let k = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]);
        let p = StudentParams::correlated(2.5, &k).unwrap();
        let batch = sample_student(&p, 200_000, 3).unwrap();
        let n = batch.len() as f64;
        let mut m = [0.0f64; 2];
        let mut v = [0.0f64; 2];
        for j in 0..2 {
            m[j] = batch.column(j).map(|x| x * x).sum::<f64>() / n;
            v[j] = batch
                .column(j)
                .map(|x| (x * x - m[j]) * (x * x - m[j]))
                .sum::<f64>()
                / n;
        }
        for j in 0..2 {
            let want = k[(j, j)] / 3.0;
            let se = (v[j] / n).sqrt();
            assert!((m[j] - want).abs() < 3.0 * se, "j={j} m={} want={want}", m[j]);
        }
        let ratio = m[1] / m[0];
        let se_ratio = ratio * ((v[0] / n).sqrt() / m[0] + (v[1] / n).sqrt() / m[1]);
        assert!((ratio - 4.0).abs() < 3.0 * se_ratio, "ratio = {ratio}");
    }

    #[test]
    fn tail_counts_match_cauchy_survival() {
        let batch = sample_student(&student1(0.5), 200_000, 9).unwrap();
        let out = empirical_tail_count(&batch, 3.0).unwrap();
        let want = 2.0 / PI * (1.0f64 / 3.0).atan();
        assert!((out.fraction - want).abs() < 4.0 * out.std_error);
        // threshold 0 counts everything
        let all = empirical_tail_count(&batch, 0.0).unwrap();
        assert_eq!(all.fraction, 1.0);
        assert!(matches!(
            empirical_tail_count(&batch, -1.0),
            Err(SamplingError::BadThreshold(_))
        ));
    }

    #[test]
    fn walk_matches_mixture_under_ks() {
        let mix = walk_mixture(&[1, 1], &[(1, 2), (1, 2)], 1.0);
        let w = WalkSpec::new(vec![1, 1], vec![0.5, 0.5], 1).unwrap();
        let batch = sample_walk(&w, 200_000, 17).unwrap();
        let out = ks_test(&batch, |x| mixture_cdf(&mix, x).unwrap()).unwrap();
        assert!(out.p_value > tol::KS_LEVEL, "p = {}", out.p_value);
    }

    #[test]
    fn walk_matches_mixture_under_chi_square() {
        let mix = walk_mixture(&[1, 2], &[(1, 3), (2, 3)], 1.0);
        let w = WalkSpec::new(vec![1, 2], vec![1.0 / 3.0, 2.0 / 3.0], 1).unwrap();
        let batch = sample_walk(&w, 200_000, 23).unwrap();
        let edges: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.2).collect();
        let out = chi_square_bin_test(&batch, |x| mixture_cdf(&mix, x).unwrap(), &edges).unwrap();
        assert!(out.p_value > tol::KS_LEVEL, "p = {}", out.p_value);
        assert_eq!(out.dof, edges.len());
    }

    #[test]
    fn chi_square_rejects_wrong_law() {
        let batch = sample_student(&student1(1.5), 100_000, 29).unwrap();
        let edges: Vec<f64> = (-12..=12).map(|i| i as f64 * 0.5).collect();
        let out =
            chi_square_bin_test(&batch, |x| 0.5 + x.atan() / PI, &edges).unwrap();
        assert!(out.p_value < 1e-9);
    }

    #[test]
    fn csv_and_sidecar_formats() {
        let batch = sample_student(&StudentParams::spherical(0.5, 2).unwrap(), 3, 1).unwrap();
        let csv = batch.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x1,x2"));
        assert_eq!(lines.count(), 3);
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
        // values round-trip through the shortest decimal form
        let first = csv.lines().nth(1).unwrap();
        let parsed: Vec<f64> = first.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(&parsed[..], &batch.points()[..2]);

        let side = batch.sidecar_json();
        let v: serde_json::Value = serde_json::from_str(&side).unwrap();
        assert_eq!(v["seed"], 1);
        assert_eq!(v["spec"], "student nu=0.5 d=2 scale=spherical");
    }

    #[test]
    fn statistic_input_validation() {
        let batch = sample_student(&StudentParams::spherical(0.5, 2).unwrap(), 10, 1).unwrap();
        assert!(matches!(
            ks_test(&batch, |_| 0.5),
            Err(SamplingError::NotUnivariate(2))
        ));
        let uni = sample_student(&student1(0.5), 10, 1).unwrap();
        assert!(matches!(
            chi_square_bin_test(&uni, |_| 0.5, &[]),
            Err(SamplingError::BadBins)
        ));
        assert!(matches!(
            chi_square_bin_test(&uni, |_| 0.5, &[1.0, 1.0]),
            Err(SamplingError::BadBins)
        ));
        assert!(matches!(
            sample_student(&student1(0.5), 0, 1),
            Err(SamplingError::EmptyBatch)
        ));
    }
}
