//! Acceptance checks that tie the exact algebra, the two transform routes,
//! and the sampler to each other. Each criterion is a self-contained runner
//! returning a pass/fail verdict with the measured values; suites group the
//! criteria by the claim they exercise.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::densities::{MixtureDensity, StudentParams};
use crate::exactpoly::{
    bessel_coeff, bessel_poly, expand_product, factorial, ProductSpec, Rational, RationalPoly,
};
use crate::sampling::{ks_test, mixture_cdf, sample_student, sample_walk, WalkSpec};
use crate::specfun::{gamma, CharKernel};
use crate::tol;
use crate::transforms::{
    fourier_invert_density, fourier_mass_within, subordinated_density, subordinator_tail_scan,
    tail_ratio_scan, ConvolutionSpec, QuadratureConfig,
};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

const NAMES: [&str; 10] = [
    "exact mixture scan",
    "equal-weight minimum coefficient",
    "density tail ratio scan",
    "mixing density tail scan",
    "transform route agreement",
    "half-integer kernel bridge",
    "coefficient monotonicity",
    "polynomial exponential bound",
    "sampler goodness of fit",
    "density normalization",
];

const SUITES: [(&str, &[usize]); 5] = [
    ("theorem1", &[1, 9]),
    ("theorem2", &[3, 4, 5, 10]),
    ("corollary", &[2]),
    ("lemmas", &[6, 7, 8]),
    ("all", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

pub fn suite_criteria(suite: &str) -> Option<&'static [usize]> {
    SUITES.iter().find(|(n, _)| *n == suite).map(|(_, c)| *c)
}

pub fn run_suite(suite: &str) -> Option<Vec<CheckResult>> {
    Some(suite_criteria(suite)?.iter().map(|&k| run_criterion(k)).collect())
}

pub fn run_criterion(id: usize) -> CheckResult {
    assert!((1..=10).contains(&id), "criterion id out of range");
    let t0 = Instant::now();
    let body = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10][id - 1];
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("aborted: {e}")));
    CheckResult {
        id,
        name: NAMES[id - 1],
        passed,
        detail,
        seconds: t0.elapsed().as_secs_f64(),
    }
}

fn spec1(nu: f64, c: f64) -> Result<ConvolutionSpec, String> {
    let p = StudentParams::spherical(nu, 1).map_err(|e| e.to_string())?;
    ConvolutionSpec::new(p, c).map_err(|e| e.to_string())
}

// Nondecreasing degree tuples of size 1..=max_parts over 0..=max_deg.
fn degree_multisets(max_parts: usize, max_deg: u32) -> Vec<Vec<u32>> {
    fn fill(cur: &mut Vec<u32>, start: u32, left: usize, max_deg: u32, out: &mut Vec<Vec<u32>>) {
        for v in start..=max_deg {
            cur.push(v);
            out.push(cur.clone());
            if left > 1 {
                fill(cur, v, left - 1, max_deg, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::new(), 0, max_parts, max_deg, &mut out);
    out
}

/// Every degree multiset with up to 5 parts and degrees up to 8, with 20
/// seeded positive rational weight vectors each: the expanded mixture must
/// have nonnegative weights, exact unit sum, and full support on
/// [min n_i, sum n_i].
fn c1() -> Result<(bool, String), String> {
    let tuples = degree_multisets(5, 8);
    let total_runs = tuples.len() * 20;
    let failures: Vec<String> = tuples
        .par_iter()
        .enumerate()
        .filter_map(|(i, degs)| {
            let mut rng = ChaCha12Rng::seed_from_u64(i as u64);
            for _ in 0..20 {
                let nums: Vec<u64> = degs.iter().map(|_| rng.gen_range(1..=30)).collect();
                let total: u64 = nums.iter().sum();
                let weights: Vec<Rational> = nums
                    .iter()
                    .map(|n| Rational::new(BigInt::from(*n), BigInt::from(total)))
                    .collect();
                let spec = match ProductSpec::new(degs.clone(), weights) {
                    Ok(s) => s,
                    Err(e) => return Some(format!("{degs:?}: {e}")),
                };
                let mix = expand_product(&spec);
                let lo = *degs.iter().min().unwrap();
                let hi: u32 = degs.iter().sum();
                let full_support = mix.support() == Some((lo, hi))
                    && mix.weights().len() == (hi - lo + 1) as usize;
                if !mix.all_nonnegative() || !mix.weight_sum().is_one() || !full_support {
                    return Some(format!("{degs:?}: weights {:?}", mix.weights()));
                }
            }
            None
        })
        .collect();
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} degree tuples x 20 weight draws = {} exact expansions, all convex with full support",
                tuples.len(),
                total_runs
            )
        } else {
            format!("{} of {} runs violated: {}", failures.len(), total_runs, failures[0])
        },
    ))
}

/// Equal weights 1/N on N copies of degree n: the expanded weight at the
/// lowest index n must equal N^(-2n) exactly, for n <= 6, N <= 6.
fn c2() -> Result<(bool, String), String> {
    let mut worst = None;
    for parts in 1u32..=6 {
        for n in 0u32..=6 {
            let w = Rational::new(BigInt::one(), BigInt::from(parts));
            let spec = ProductSpec::new(vec![n; parts as usize], vec![w; parts as usize])
                .map_err(|e| e.to_string())?;
            let got = expand_product(&spec).weight(n);
            let want = Rational::new(
                BigInt::one(),
                num_traits::pow(BigInt::from(parts), 2 * n as usize),
            );
            if got != want {
                worst = Some(format!("n={n} N={parts}: got {got}, want {want}"));
            }
        }
    }
    match worst {
        Some(msg) => Ok((false, msg)),
        None => Ok((
            true,
            "42 equal-weight products match N^(-2n) exactly; \
             spot values (n=1,N=2) -> 1/4, (n=3,N=3) -> 1/729"
                .into(),
        )),
    }
}

/// Tail ratio f(x) x^(2nu+1) / (c A) within 1% of 1 at x = 50 for four
/// univariate cases; the nu = 1/2 case must track the exact Cauchy-stability
/// ratio x^2/(c^2 + x^2) pointwise.
fn c3() -> Result<(bool, String), String> {
    let cfg = QuadratureConfig::default();
    let xs = [5.0, 10.0, 20.0, 35.0, 50.0];
    let mut passed = true;
    let mut parts = Vec::new();
    for (nu, c) in [(1.5, 2.0), (1.5, 2.5), (0.5, 3.0), (1.0, 2.0)] {
        let rep =
            tail_ratio_scan(&spec1(nu, c)?, &xs, &cfg).map_err(|e| e.to_string())?;
        let ok = rep.converged && rep.final_deviation <= tol::TAIL_RATIO_BAND;
        let mut note = format!(
            "(nu={nu}, c={c}): |ratio-1| = {:.2e} at x=50",
            rep.final_deviation
        );
        let mut case_ok = ok;
        if nu == 0.5 {
            let worst = xs
                .iter()
                .zip(&rep.ratios)
                .map(|(x, r)| {
                    let exact = x * x / (c * c + x * x);
                    ((r - exact) / exact).abs()
                })
                .fold(0.0f64, f64::max);
            case_ok = case_ok && worst <= tol::CAUCHY_TAIL_REL;
            note.push_str(&format!(", exact-curve rel {:.2e}", worst));
        }
        passed &= case_ok;
        if !case_ok {
            note.push_str(" FAIL");
        }
        parts.push(note);
    }
    Ok((passed, parts.join("; ")))
}

/// Mixing density ratio h(t) t^(nu+1) / (c C) within 2% of 1 at t = 1e3,
/// scanned over the final decade; the nu = 1/2 family must match its
/// closed form exp(-c^2/(4t)) to 1e-5 relative. Inversion order follows
/// the route noise floor: 18 on the extended-precision half-integer path,
/// 16 on the double-precision generic path.
fn c4() -> Result<(bool, String), String> {
    let ts = [100.0, 316.22776601683796, 1000.0];
    let mut passed = true;
    let mut parts = Vec::new();
    for (nu, c, order) in [(0.5, 2.0, 18), (1.0, 2.5, 16), (1.5, 2.0, 18)] {
        let cfg = QuadratureConfig {
            laplace_order: order,
            ..QuadratureConfig::default()
        };
        let rep = subordinator_tail_scan(nu, c, &ts, &cfg).map_err(|e| e.to_string())?;
        let mut case_ok = rep.final_deviation <= tol::SUBORDINATOR_TAIL_BAND;
        let mut note = format!(
            "(nu={nu}, c={c}, order {order}): |ratio-1| = {:.2e} at t=1e3",
            rep.final_deviation
        );
        if nu == 0.5 {
            let worst = ts
                .iter()
                .zip(&rep.ratios)
                .map(|(t, r)| (r / (-c * c / (4.0 * t)).exp() - 1.0).abs())
                .fold(0.0f64, f64::max);
            case_ok = case_ok && worst <= tol::SUBORDINATOR_REL;
            note.push_str(&format!(", closed-form rel {:.2e}", worst));
        }
        passed &= case_ok;
        if !case_ok {
            note.push_str(" FAIL");
        }
        parts.push(note);
    }
    Ok((passed, parts.join("; ")))
}

/// Subordination and Fourier inversion agree to 1e-5 absolute on
/// x in [0, 20] for all nine univariate (nu, c) pairs.
fn c5() -> Result<(bool, String), String> {
    let cfg = QuadratureConfig::default();
    let xs: Vec<f64> = (0..=20).map(f64::from).collect();
    let mut worst = (0.0f64, 0.0, 0.0, 0.0);
    for nu in [0.5, 1.0, 1.5] {
        for c in [1.0, 2.0, 2.5] {
            let s = spec1(nu, c)?;
            // warm the mixing grid once, then fan out over the abscissas
            subordinated_density(&s, &[0.0], &cfg).map_err(|e| e.to_string())?;
            let diffs: Vec<(f64, f64)> = xs
                .par_iter()
                .map(|&x| -> Result<(f64, f64), String> {
                    let f = fourier_invert_density(&s, x, &cfg).map_err(|e| e.to_string())?;
                    let g = subordinated_density(&s, &[x], &cfg).map_err(|e| e.to_string())?;
                    Ok((x, (f.value - g.value).abs()))
                })
                .collect::<Result<_, _>>()?;
            for (x, diff) in diffs {
                if diff > worst.0 {
                    worst = (diff, nu, c, x);
                }
            }
        }
    }
    Ok((
        worst.0 <= tol::ROUTE_AGREEMENT_ABS,
        format!(
            "9 pairs x 21 points, max |subordinated - fourier| = {:.2e} at (nu={}, c={}, x={}), bound {:.0e}",
            worst.0,
            worst.1,
            worst.2,
            worst.3,
            tol::ROUTE_AGREEMENT_ABS
        ),
    ))
}

/// The Macdonald-function evaluation of the kernel agrees with the exact
/// polynomial form e^(-u) q_n(u) to 1e-10 relative for n <= 10 on a log
/// grid over [1e-2, 50].
fn c6() -> Result<(bool, String), String> {
    let us: Vec<f64> = (0..48)
        .map(|i| 1e-2 * (50.0f64 / 1e-2).powf(i as f64 / 47.0))
        .collect();
    let mut worst = (0.0f64, 0, 0.0);
    for n in 0u32..=10 {
        let kernel = CharKernel::new(n as f64 + 0.5).map_err(|e| e.to_string())?;
        let poly = bessel_poly(n);
        for &u in &us {
            let bridge = (-u).exp() * poly.eval_f64(u);
            let rel = ((kernel.eval_generic(u) - bridge) / bridge).abs();
            if rel > worst.0 {
                worst = (rel, n, u);
            }
        }
    }
    Ok((
        worst.0 <= tol::KERNEL_BRIDGE_REL,
        format!(
            "n <= 10, 48 points per order: max rel {:.2e} at (n={}, u={:.3}), bound {:.0e}",
            worst.0,
            worst.1,
            worst.2,
            tol::KERNEL_BRIDGE_REL
        ),
    ))
}

/// Exact coefficient comparisons for k <= 10, k <= n <= 40: every
/// alpha_k^(n) is at most 1/k!, the bound is attained exactly when k <= 1
/// (where the coefficient is constant), and for k >= 2 the sequence is
/// strictly increasing in n.
fn c7() -> Result<(bool, String), String> {
    for k in 0u32..=10 {
        let bound = Rational::new(BigInt::one(), factorial(k));
        for n in k..=40 {
            let a = bessel_coeff(n, k);
            let at_bound = a == bound;
            if a > bound || (k >= 2 && at_bound) || (k <= 1 && !at_bound) {
                return Ok((false, format!("alpha(n={n}, k={k}) = {a} violates the 1/k! bound")));
            }
            if n < 40 {
                let next = bessel_coeff(n + 1, k);
                let ok = if k <= 1 { next == a } else { next > a };
                if !ok {
                    return Ok((
                        false,
                        format!("alpha(., k={k}) not monotone at n={n}: {a} -> {next}"),
                    ));
                }
            }
        }
    }
    Ok((
        true,
        "alpha_k^(n) <= 1/k! exactly for k <= 10, k <= n <= 40; constant = 1 for k <= 1, \
         strictly increasing for k >= 2"
            .into(),
    ))
}

/// q_n(u) <= e^u for n <= 40 over [0, 50]: exact coefficient domination
/// alpha_k^(n) <= 1/k! for every k extends the bound to the whole interval,
/// and a 101-point half-integer grid pins q_n(u) under an exact positive
/// partial sum of e^u (a certified lower bound on the exponential).
fn c8() -> Result<(bool, String), String> {
    for n in 0u32..=40 {
        for k in 0..=n {
            if bessel_coeff(n, k) > Rational::new(BigInt::one(), factorial(k)) {
                return Ok((false, format!("coefficient (n={n}, k={k}) exceeds 1/k!")));
            }
        }
    }
    let polys: Vec<RationalPoly> = (0u32..=40).map(bessel_poly).collect();
    let bad: Vec<String> = (0u32..=100)
        .into_par_iter()
        .filter_map(|j| {
            let u = Rational::new(BigInt::from(j), BigInt::from(2));
            // positive Taylor partial sum: S < e^u, remainder < e^u * 1e-28
            // at u = 50 with 150 terms, far below 1 - k_nu(u) on this grid
            let mut term = Rational::one();
            let mut s = Rational::one();
            for m in 1u32..=150 {
                term = term * &u / Rational::from(BigInt::from(m));
                s += &term;
            }
            polys
                .iter()
                .enumerate()
                .find(|(_, q)| q.eval(&u) > s)
                .map(|(n, _)| format!("q_{n}({j}/2) exceeds the exponential lower bound"))
        })
        .collect();
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            "termwise coefficient domination for n <= 40 plus 101-point exact grid check".into()
        } else {
            bad[0].clone()
        },
    ))
}

/// KS tests against the Cauchy law (nu = 1/2) and against the two-term
/// walk mixture pass at the 1% level for n = 2e5 with at most one failure
/// in ten seeds each; the nu = 3/2 second moment sits within three
/// standard errors of 1.
fn c9() -> Result<(bool, String), String> {
    let cauchy = StudentParams::spherical(0.5, 1).map_err(|e| e.to_string())?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let spec = ProductSpec::new(vec![1, 1], vec![half.clone(), half]).map_err(|e| e.to_string())?;
    let mix = MixtureDensity::new(expand_product(&spec), 1.0, 1).map_err(|e| e.to_string())?;
    let walk = WalkSpec::new(vec![1, 1], vec![0.5, 0.5], 1).map_err(|e| e.to_string())?;

    let outcomes: Vec<(bool, bool)> = (0u64..10)
        .into_par_iter()
        .map(|seed| -> Result<(bool, bool), String> {
            let b1 = sample_student(&cauchy, 200_000, seed).map_err(|e| e.to_string())?;
            let k1 = ks_test(&b1, |x| 0.5 + x.atan() / std::f64::consts::PI)
                .map_err(|e| e.to_string())?;
            let b2 = sample_walk(&walk, 200_000, seed).map_err(|e| e.to_string())?;
            let k2 = ks_test(&b2, |x| mixture_cdf(&mix, x).expect("univariate mixture"))
                .map_err(|e| e.to_string())?;
            Ok((k1.p_value > tol::KS_LEVEL, k2.p_value > tol::KS_LEVEL))
        })
        .collect::<Result<_, _>>()?;
    let cauchy_fail = outcomes.iter().filter(|(a, _)| !a).count();
    let walk_fail = outcomes.iter().filter(|(_, b)| !b).count();

    let batch = sample_student(
        &StudentParams::spherical(1.5, 1).map_err(|e| e.to_string())?,
        500_000,
        12345,
    )
    .map_err(|e| e.to_string())?;
    let n = batch.len() as f64;
    let m2: f64 = batch.points().iter().map(|x| x * x).sum::<f64>() / n;
    let var: f64 = batch
        .points()
        .iter()
        .map(|x| (x * x - m2) * (x * x - m2))
        .sum::<f64>()
        / n;
    let se = (var / n).sqrt();
    let dev = (m2 - 1.0).abs() / se;

    let passed = cauchy_fail <= 1 && walk_fail <= 1 && dev <= 3.0;
    Ok((
        passed,
        format!(
            "KS failures in 10 seeds: {cauchy_fail} (cauchy), {walk_fail} (walk mixture); \
             second moment {m2:.5} is {dev:.2} standard errors from 1"
        ),
    ))
}

/// Total mass over [-500, 500] plus the analytic power-tail remainder
/// equals 1 to 1e-6 for every pair of the route-agreement matrix.
fn c10() -> Result<(bool, String), String> {
    let cfg = QuadratureConfig::default();
    let pairs: Vec<(f64, f64)> = [0.5, 1.0, 1.5]
        .iter()
        .flat_map(|&nu| [1.0, 2.0, 2.5].iter().map(move |&c| (nu, c)))
        .collect();
    let devs: Vec<(f64, f64, f64)> = pairs
        .par_iter()
        .map(|&(nu, c)| -> Result<(f64, f64, f64), String> {
            let s = spec1(nu, c)?;
            let x_max = 500.0;
            let within = fourier_mass_within(&s, x_max, &cfg).map_err(|e| e.to_string())?;
            let a_const = gamma(nu + 0.5) / (gamma(nu) * std::f64::consts::PI.sqrt());
            let tail = 2.0 * c * a_const / (2.0 * nu * x_max.powf(2.0 * nu));
            if !within.converged {
                return Err(format!("mass quadrature did not converge for nu={nu} c={c}"));
            }
            Ok((nu, c, (within.value + tail - 1.0).abs()))
        })
        .collect::<Result<_, _>>()?;
    let worst = devs
        .iter()
        .cloned()
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .unwrap();
    Ok((
        worst.2 <= tol::NORMALIZATION_ABS,
        format!(
            "9 pairs, worst |mass + remainder - 1| = {:.2e} at (nu={}, c={}), bound {:.0e}",
            worst.2,
            worst.0,
            worst.1,
            tol::NORMALIZATION_ABS
        ),
    ))
}
