//! Exact rational arithmetic for Bessel polynomials and for the convex
//! mixture decomposition of products of scaled Bessel polynomials.
//!
//! The polynomial q_n(u) = sum_k alpha_k^(n) u^k with
//! alpha_k^(n) = (-n)_k 2^k / ((-2n)_k k!) satisfies
//! k_{n+1/2}(u) = e^{-u} q_n(u) for the Student characteristic kernel, and a
//! product q_{n_1}(a_1 u) ... q_{n_N}(a_N u) with positive weights a_i summing
//! to 1 expands as a convex combination sum_j beta_j q_j(u). Everything here
//! is computed over arbitrary-precision rationals so that nonnegativity and
//! the unit sum of the beta_j are decided exactly, not up to rounding.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (normalization is maintained by the backing type).
pub type Rational = BigRational;

#[derive(Debug, Error)]
pub enum MixtureError {
    #[error("product needs at least one factor")]
    EmptySpec,
    #[error("{degrees} degrees but {weights} weights")]
    LengthMismatch { degrees: usize, weights: usize },
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error("weights must sum to 1, got {0}")]
    WeightSum(Rational),
    #[error("float weights must be finite and positive")]
    NonFiniteWeight,
    #[error("float weights sum to {0}, more than {tol} away from 1", tol = tol::WEIGHT_SUM_TOL)]
    FloatWeightSum(f64),
    #[error("invalid rational '{0}'")]
    InvalidRational(String),
    #[error("invalid mixture index '{0}'")]
    InvalidIndex(String),
    #[error("malformed mixture JSON: {0}")]
    Json(String),
}

/// Converts with correct rounding; infinite or indeterminate results map to
/// +-inf / NaN, which no exact-path caller produces.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=u64::from(n) {
        acc *= i;
    }
    acc
}

/// Dense polynomial over `Rational`. Trailing zeros are trimmed, so the zero
/// polynomial has an empty coefficient list and `degree()` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![Rational::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Coefficients by ascending degree, last entry nonzero.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    /// p(u) -> p(a u).
    pub fn scale_arg(&self, a: &Rational) -> Self {
        let mut pow = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c * &pow;
                pow *= a;
                r
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }
}

impl Add<&RationalPoly> for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            if let Some(b) = rhs.coeffs.get(i) {
                c += b;
            }
            out.push(c);
        }
        RationalPoly::from_coeffs(out)
    }
}

impl Mul<&RationalPoly> for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(out)
    }
}

/// alpha_k^(n) = (-n)_k 2^k / ((-2n)_k k!), the coefficient of u^k in q_n.
///
/// Both Pochhammer factors carry (-1)^k, so the value reduces to the positive
/// product 2^k n! (2n-k)! / ((n-k)! (2n)! k!).
pub fn bessel_coeff(n: u32, k: u32) -> Rational {
    assert!(k <= n, "coefficient index {k} out of range for degree {n}");
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..u64::from(k) {
        num *= 2 * (u64::from(n) - i);
        den *= (2 * u64::from(n) - i) * (i + 1);
    }
    Rational::new(num, den)
}

/// The degree-n Bessel polynomial q_n. All coefficients are positive and the
/// constant term is 1.
pub fn bessel_poly(n: u32) -> RationalPoly {
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut c = Rational::one();
    coeffs.push(c.clone());
    for k in 0..u64::from(n) {
        // alpha_{k+1} = alpha_k * 2(n-k) / ((2n-k)(k+1))
        let num = BigInt::from(2 * (u64::from(n) - k));
        let den = BigInt::from((2 * u64::from(n) - k) * (k + 1));
        c = c * Rational::new(num, den);
        coeffs.push(c.clone());
    }
    RationalPoly::from_coeffs(coeffs)
}

/// f64 coefficients of q_n, each correctly rounded from the exact value.
/// Cached; the kernel fast path and mixture evaluation hit this per node.
pub fn bessel_poly_f64(n: u32) -> Arc<[f64]> {
    static CACHE: OnceLock<RwLock<Vec<Arc<[f64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(Vec::new()));
    {
        let rows = cache.read().unwrap();
        if let Some(row) = rows.get(n as usize) {
            return row.clone();
        }
    }
    let mut rows = cache.write().unwrap();
    while rows.len() <= n as usize {
        let m = rows.len() as u32;
        let row: Vec<f64> = bessel_poly(m).coeffs().iter().map(rational_to_f64).collect();
        rows.push(row.into());
    }
    rows[n as usize].clone()
}

fn delta_cache() -> &'static RwLock<Vec<Vec<Rational>>> {
    static CACHE: OnceLock<RwLock<Vec<Vec<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

// Row n solves u^n = sum_j delta_j q_j. The change-of-basis matrix
// alpha_m^(j) is upper triangular with positive diagonal, so back
// substitution stays exact and never divides by zero.
fn solve_delta_row(n: usize, polys: &[RationalPoly]) -> Vec<Rational> {
    let mut delta = vec![Rational::zero(); n + 1];
    for m in (0..=n).rev() {
        let mut acc = if m == n {
            Rational::one()
        } else {
            Rational::zero()
        };
        for j in (m + 1)..=n {
            if !delta[j].is_zero() {
                acc -= &delta[j] * &polys[j].coeffs()[m];
            }
        }
        delta[m] = acc / &polys[m].coeffs()[m];
    }
    delta
}

fn with_delta_rows<R>(max_n: usize, f: impl FnOnce(&[Vec<Rational>]) -> R) -> R {
    let cache = delta_cache();
    {
        let rows = cache.read().unwrap();
        if rows.len() > max_n {
            return f(&rows);
        }
    }
    {
        let mut rows = cache.write().unwrap();
        if rows.len() <= max_n {
            let polys: Vec<RationalPoly> = (0..=max_n as u32).map(bessel_poly).collect();
            for n in rows.len()..=max_n {
                let row = solve_delta_row(n, &polys);
                rows.push(row);
            }
        }
    }
    let rows = cache.read().unwrap();
    f(&rows)
}

/// Coefficients delta_j with u^n = sum_j delta_j q_j(u), from the triangular
/// change-of-basis solve. Entries vanish for j < (n-1)/2; `carlitz_formula`
/// is the closed-form cross-check.
pub fn power_in_bessel_basis(n: u32) -> Vec<Rational> {
    with_delta_rows(n as usize, |rows| rows[n as usize].clone())
}

/// Carlitz's closed form for the same coefficients,
/// delta_j = ((n+1)!/2^n) (-1)^(n-j) (2j)! / ((n-j)! j! (2j+1-n)!) on
/// (n-1)/2 <= j <= n. The alternating factorials overflow fixed-width
/// arithmetic long before n = 40, hence exact integers here.
pub fn carlitz_formula(n: u32) -> Vec<Rational> {
    let lead = Rational::new(factorial(n + 1), BigInt::one() << n);
    let mut out = vec![Rational::zero(); n as usize + 1];
    for j in (n / 2)..=n {
        let num = factorial(2 * j);
        let den = factorial(n - j) * factorial(j) * factorial(2 * j + 1 - n);
        let mut v = &lead * Rational::new(num, den);
        if (n - j) % 2 == 1 {
            v = -v;
        }
        out[j as usize] = v;
    }
    out
}

/// Coefficients c_j with p(u) = sum_j c_j q_j(u); exact round trip with
/// `from_bessel_basis`.
pub fn to_bessel_basis(p: &RationalPoly) -> Vec<Rational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    with_delta_rows(deg, |rows| {
        let mut out = vec![Rational::zero(); deg + 1];
        for (n, pn) in p.coeffs().iter().enumerate() {
            if pn.is_zero() {
                continue;
            }
            for (j, d) in rows[n].iter().enumerate() {
                if !d.is_zero() {
                    out[j] += pn * d;
                }
            }
        }
        out
    })
}

pub fn from_bessel_basis(coeffs: &[Rational]) -> RationalPoly {
    let mut acc = RationalPoly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &bessel_poly(j as u32).scaled(c);
        }
    }
    acc
}

/// Degrees n_1..n_N and positive rational weights a_1..a_N with exact sum 1.
#[derive(Clone, Debug)]
pub struct ProductSpec {
    degrees: Vec<u32>,
    weights: Vec<Rational>,
}

impl ProductSpec {
    pub fn new(degrees: Vec<u32>, weights: Vec<Rational>) -> Result<Self, MixtureError> {
        if degrees.is_empty() {
            return Err(MixtureError::EmptySpec);
        }
        if degrees.len() != weights.len() {
            return Err(MixtureError::LengthMismatch {
                degrees: degrees.len(),
                weights: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(MixtureError::NonPositiveWeight);
        }
        let sum: Rational = weights.iter().sum();
        if !sum.is_one() {
            return Err(MixtureError::WeightSum(sum));
        }
        Ok(Self { degrees, weights })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

/// Finite map j -> beta_j representing the convex combination
/// sum_j beta_j q_j (equivalently sum_j beta_j f_{j+1/2} on the density
/// side). Zero weights are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BesselMixture {
    weights: BTreeMap<u32, Rational>,
}

#[derive(Serialize, Deserialize)]
struct MixtureJson {
    weights: BTreeMap<String, String>,
}

impl BesselMixture {
    pub fn from_weights(weights: BTreeMap<u32, Rational>) -> Self {
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Self { weights }
    }

    pub fn weights(&self) -> &BTreeMap<u32, Rational> {
        &self.weights
    }

    pub fn weight(&self, j: u32) -> Rational {
        self.weights.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Option<(u32, u32)> {
        let min = *self.weights.keys().next()?;
        let max = *self.weights.keys().next_back()?;
        Some((min, max))
    }

    pub fn weight_sum(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.weights.values().all(|w| !w.is_negative())
    }

    /// Nonnegative weights with exact unit sum.
    pub fn is_convex(&self) -> bool {
        self.all_nonnegative() && self.weight_sum().is_one()
    }

    /// sum_j beta_j e^{-scale u} q_j(scale u), the characteristic function of
    /// the mixture restricted to the positive half-axis.
    pub fn charfn(&self, scale: f64, u: f64) -> f64 {
        assert!(scale > 0.0 && u >= 0.0);
        let su = scale * u;
        // Past this point e^{-su} is a hard zero while q_j stays finite.
        if su > 1e6 {
            return 0.0;
        }
        let damp = (-su).exp();
        self.weights
            .iter()
            .map(|(&j, b)| {
                let q = bessel_poly_f64(j);
                let mut acc = 0.0;
                for c in q.iter().rev() {
                    acc = acc * su + c;
                }
                rational_to_f64(b) * damp * acc
            })
            .sum()
    }

    /// Rounds each weight to f64 and certifies the worst rounding error by
    /// re-lifting the floats and comparing exactly.
    pub fn to_float(&self) -> FloatMixture {
        let mut weights = BTreeMap::new();
        let mut max_abs_error = 0.0f64;
        for (&j, b) in &self.weights {
            let f = rational_to_f64(b);
            let err = (b - Rational::from_float(f).expect("finite weight")).abs();
            max_abs_error = max_abs_error.max(rational_to_f64(&err).next_up());
            weights.insert(j, f);
        }
        FloatMixture {
            weights,
            max_abs_error,
        }
    }

    pub fn to_json(&self) -> String {
        let weights = self
            .weights
            .iter()
            .map(|(j, w)| (j.to_string(), format!("{}/{}", w.numer(), w.denom())))
            .collect();
        serde_json::to_string_pretty(&MixtureJson { weights }).expect("string map serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, MixtureError> {
        let raw: MixtureJson =
            serde_json::from_str(s).map_err(|e| MixtureError::Json(e.to_string()))?;
        let mut weights = BTreeMap::new();
        for (j, w) in raw.weights {
            let j: u32 = j
                .parse()
                .map_err(|_| MixtureError::InvalidIndex(j.clone()))?;
            let w = Rational::from_str(&w).map_err(|_| MixtureError::InvalidRational(w))?;
            weights.insert(j, w);
        }
        Ok(Self::from_weights(weights))
    }

    /// Header `j,numerator,denominator,float_value`, one row per weight in
    /// index order, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,numerator,denominator,float_value\n");
        for (j, w) in &self.weights {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                j,
                w.numer(),
                w.denom(),
                rational_to_f64(w)
            );
        }
        out
    }
}

/// Float-mode mixture: weights rounded to f64 with a certified bound on the
/// worst absolute rounding error against the exact expansion.
#[derive(Clone, Debug)]
pub struct FloatMixture {
    weights: BTreeMap<u32, f64>,
    max_abs_error: f64,
}

impl FloatMixture {
    pub fn weights(&self) -> &BTreeMap<u32, f64> {
        &self.weights
    }

    pub fn weight(&self, j: u32) -> f64 {
        self.weights.get(&j).copied().unwrap_or(0.0)
    }

    pub fn max_abs_error(&self) -> f64 {
        self.max_abs_error
    }
}

/// Expands q_{n_1}(a_1 u) ... q_{n_N}(a_N u) = sum_j beta_j q_j(u) exactly.
///
/// With the weights summing to 1 the beta_j are nonnegative, sum to 1, and
/// are supported on [min n_i, sum n_i]; callers that treat those facts as a
/// claim under test should check the returned mixture rather than assume it.
pub fn expand_product(spec: &ProductSpec) -> BesselMixture {
    let mut prod = RationalPoly::one();
    for (&n, a) in spec.degrees().iter().zip(spec.weights()) {
        prod = &prod * &bessel_poly(n).scale_arg(a);
    }
    let coeffs = to_bessel_basis(&prod);
    let weights = coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j as u32, c))
        .collect();
    BesselMixture::from_weights(weights)
}

/// Exact expansion for float weights. Each weight is lifted to the rational
/// it denotes in binary, the vector is divided by its exact sum so the unit
/// sum holds exactly, and the expansion runs in exact arithmetic. Returns the
/// mixture together with the normalization defect |1 - sum(weights)|.
pub fn expand_product_lifted(
    degrees: &[u32],
    weights: &[f64],
) -> Result<(BesselMixture, f64), MixtureError> {
    if degrees.is_empty() {
        return Err(MixtureError::EmptySpec);
    }
    if degrees.len() != weights.len() {
        return Err(MixtureError::LengthMismatch {
            degrees: degrees.len(),
            weights: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(MixtureError::NonFiniteWeight);
    }
    let float_sum: f64 = weights.iter().sum();
    let lifted: Vec<Rational> = weights
        .iter()
        .map(|&w| Rational::from_float(w).expect("finite weight"))
        .collect();
    let sum: Rational = lifted.iter().sum();
    let defect = rational_to_f64(&(&sum - Rational::one()).abs());
    if defect > tol::WEIGHT_SUM_TOL {
        return Err(MixtureError::FloatWeightSum(float_sum));
    }
    let normalized = lifted.into_iter().map(|w| w / &sum).collect();
    let spec = ProductSpec::new(degrees.to_vec(), normalized)?;
    Ok((expand_product(&spec), defect))
}

/// Float-mode expansion with a certified rounding-error bound; see
/// `expand_product_lifted` for the weight handling.
pub fn expand_product_float(
    degrees: &[u32],
    weights: &[f64],
) -> Result<FloatMixture, MixtureError> {
    let (mix, _) = expand_product_lifted(degrees, weights)?;
    Ok(mix.to_float())
}

/// Smallest-index weight of the expansion of (q_n(u/N))^N: equals N^(-2n).
/// The closed form is asserted against the full expansion before returning.
pub fn uniform_product_min_weight(n: u32, parts: u32) -> Rational {
    assert!(parts >= 1, "need at least one factor");
    let closed = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(parts), 2 * n as usize));
    let w = Rational::new(BigInt::one(), BigInt::from(parts));
    let spec = ProductSpec::new(vec![n; parts as usize], vec![w; parts as usize])
        .expect("equal weights sum to 1");
    let mix = expand_product(&spec);
    assert_eq!(
        mix.weight(n),
        closed,
        "uniform product weight at the lowest index must match N^(-2n)"
    );
    closed
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    // Product form (1/k!) prod_{j=1}^{k-1} (n-j)/(n-j/2), an independent
    // route to the same coefficient.
    fn alpha_product_form(n: u32, k: u32) -> Rational {
        let mut acc = Rational::new(BigInt::one(), factorial(k));
        for j in 1..u64::from(k) {
            acc *= Rational::new(
                BigInt::from(2 * (u64::from(n) - j)),
                BigInt::from(2 * u64::from(n) - j),
            );
        }
        acc
    }

    #[test]
    fn coefficient_values() {
        assert_eq!(bessel_coeff(2, 2), rat(1, 3));
        assert_eq!(bessel_coeff(7, 0), rat(1, 1));
        assert_eq!(bessel_coeff(5, 3), rat(1, 9));
        assert_eq!(bessel_coeff(5, 3), alpha_product_form(5, 3));
    }

    #[test]
    fn coefficient_product_form_agrees() {
        for n in 1..=12 {
            for k in 1..=n {
                assert_eq!(bessel_coeff(n, k), alpha_product_form(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn coefficient_index_out_of_range() {
        bessel_coeff(3, 4);
    }

    #[test]
    fn low_degree_polynomials() {
        assert_eq!(bessel_poly(0).coeffs(), &[rat(1, 1)]);
        assert_eq!(bessel_poly(1).coeffs(), &[rat(1, 1), rat(1, 1)]);
        assert_eq!(
            bessel_poly(3).coeffs(),
            &[rat(1, 1), rat(1, 1), rat(2, 5), rat(1, 15)]
        );
    }

    #[test]
    fn poly_matches_coefficients() {
        for n in 0..=20 {
            let p = bessel_poly(n);
            assert_eq!(p.degree(), Some(n as usize));
            for k in 0..=n {
                assert_eq!(p.coeff(k as usize), bessel_coeff(n, k));
            }
        }
    }

    #[test]
    fn monomial_coefficients_small() {
        assert_eq!(power_in_bessel_basis(0), vec![rat(1, 1)]);
        assert_eq!(power_in_bessel_basis(1), vec![rat(-1, 1), rat(1, 1)]);
        assert_eq!(
            power_in_bessel_basis(2),
            vec![rat(0, 1), rat(-3, 1), rat(3, 1)]
        );
    }

    #[test]
    fn closed_form_agrees_with_triangular_solve() {
        for n in 0..=20 {
            assert_eq!(power_in_bessel_basis(n), carlitz_formula(n), "n={n}");
        }
    }

    #[test]
    fn closed_form_zero_region() {
        for n in 0..=20u32 {
            let row = carlitz_formula(n);
            for (j, v) in row.iter().enumerate() {
                if 2 * j + 1 < n as usize {
                    assert!(v.is_zero(), "n={n} j={j}");
                } else if n >= 1 && 2 * j + 1 >= n as usize && j <= n as usize {
                    // inside the band the entries alternate in sign
                    let expect_negative = (n as usize - j) % 2 == 1;
                    assert_eq!(v.is_negative(), expect_negative, "n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn basis_conversion_examples() {
        let p = RationalPoly::from_coeffs(vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(to_bessel_basis(&p), vec![rat(0, 1), rat(1, 1)]);

        let u2 = RationalPoly::from_coeffs(vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(to_bessel_basis(&u2), vec![rat(0, 1), rat(-3, 1), rat(3, 1)]);

        let q2_plus_q0 = &bessel_poly(2) + &bessel_poly(0);
        assert_eq!(
            to_bessel_basis(&q2_plus_q0),
            vec![rat(1, 1), rat(0, 1), rat(1, 1)]
        );
    }

    #[test]
    fn zero_polynomial_round_trip() {
        assert!(to_bessel_basis(&RationalPoly::zero()).is_empty());
        assert!(from_bessel_basis(&[]).is_zero());
    }

    #[test]
    fn expansion_examples() {
        let spec = ProductSpec::new(vec![1, 1], vec![rat(1, 2), rat(1, 2)]).unwrap();
        let mix = expand_product(&spec);
        assert_eq!(mix.weight(1), rat(1, 4));
        assert_eq!(mix.weight(2), rat(3, 4));
        assert_eq!(mix.support(), Some((1, 2)));

        let single = ProductSpec::new(vec![2], vec![rat(1, 1)]).unwrap();
        let mix = expand_product(&single);
        assert_eq!(mix.weights().len(), 1);
        assert_eq!(mix.weight(2), rat(1, 1));

        let spec = ProductSpec::new(vec![1, 1, 1], vec![rat(1, 3), rat(1, 3), rat(1, 3)]).unwrap();
        let mix = expand_product(&spec);
        assert_eq!(mix.weight(1), rat(1, 9));
        assert_eq!(mix.weight(2), rat(1, 3));
        assert_eq!(mix.weight(3), rat(5, 9));
        assert!(mix.is_convex());
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            ProductSpec::new(vec![], vec![]),
            Err(MixtureError::EmptySpec)
        ));
        assert!(matches!(
            ProductSpec::new(vec![1], vec![rat(1, 2), rat(1, 2)]),
            Err(MixtureError::LengthMismatch { .. })
        ));
        assert!(matches!(
            ProductSpec::new(vec![1, 1], vec![rat(1, 2), rat(-1, 2)]),
            Err(MixtureError::NonPositiveWeight)
        ));
        assert!(matches!(
            ProductSpec::new(vec![1, 1], vec![rat(1, 2), rat(1, 3)]),
            Err(MixtureError::WeightSum(_))
        ));
    }

    #[test]
    fn uniform_min_weight_values() {
        assert_eq!(uniform_product_min_weight(1, 2), rat(1, 4));
        assert_eq!(uniform_product_min_weight(0, 5), rat(1, 1));
        assert_eq!(uniform_product_min_weight(3, 3), rat(1, 729));
    }

    #[test]
    fn charfn_values() {
        let cauchy = BesselMixture::from_weights([(0, rat(1, 1))].into());
        assert!((cauchy.charfn(1.0, 1.0) - (-1.0f64).exp()).abs() < 1e-15);

        let mix = BesselMixture::from_weights([(1, rat(1, 4)), (2, rat(3, 4))].into());
        assert!((mix.charfn(1.0, 0.0) - 1.0).abs() < 1e-15);
        // (1/4) q_1(2) + (3/4) q_2(2) = 3/4 + 13/4 = 4
        let expect = 4.0 * (-2.0f64).exp();
        assert!((mix.charfn(1.0, 2.0) - expect).abs() < 1e-14 * expect);
        assert_eq!(mix.charfn(1.0, 2e6), 0.0);
    }

    #[test]
    fn float_mode_exact_halves() {
        let fm = expand_product_float(&[1, 1], &[0.5, 0.5]).unwrap();
        assert_eq!(fm.weight(1), 0.25);
        assert_eq!(fm.weight(2), 0.75);
        assert!(fm.max_abs_error() < 1e-15);
    }

    #[test]
    fn float_mode_lifts_and_normalizes() {
        let (mix, defect) = expand_product_lifted(&[1, 2], &[0.3, 0.7]).unwrap();
        assert!(defect <= tol::WEIGHT_SUM_TOL);
        assert!(mix.is_convex());
        let spec = ProductSpec::new(vec![1, 2], vec![rat(3, 10), rat(7, 10)]).unwrap();
        let exact = expand_product(&spec);
        for (j, w) in exact.weights() {
            let lifted = rational_to_f64(&mix.weight(*j));
            assert!((lifted - rational_to_f64(w)).abs() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn float_mode_rejects_bad_weights() {
        assert!(matches!(
            expand_product_float(&[1, 1], &[0.5, 0.6]),
            Err(MixtureError::FloatWeightSum(_))
        ));
        assert!(matches!(
            expand_product_float(&[1, 1], &[0.5, -0.5]),
            Err(MixtureError::NonFiniteWeight)
        ));
    }

    #[test]
    fn json_round_trip() {
        let spec = ProductSpec::new(vec![1, 1], vec![rat(1, 2), rat(1, 2)]).unwrap();
        let mix = expand_product(&spec);
        let json = mix.to_json();
        assert!(json.contains("\"1\": \"1/4\""));
        assert!(json.contains("\"2\": \"3/4\""));
        assert_eq!(BesselMixture::from_json(&json).unwrap(), mix);

        assert!(matches!(
            BesselMixture::from_json("{\"weights\": {\"x\": \"1/2\"}}"),
            Err(MixtureError::InvalidIndex(_))
        ));
        assert!(matches!(
            BesselMixture::from_json("{\"weights\": {\"1\": \"1/0\"}}"),
            Err(MixtureError::InvalidRational(_))
        ));
        assert!(matches!(
            BesselMixture::from_json("not json"),
            Err(MixtureError::Json(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let spec = ProductSpec::new(vec![1, 1], vec![rat(1, 2), rat(1, 2)]).unwrap();
        let csv = expand_product(&spec).to_csv();
        assert_eq!(
            csv,
            "j,numerator,denominator,float_value\n1,1,4,0.25\n2,3,4,0.75\n"
        );
    }

    #[test]
    fn coefficient_monotonicity_smoke() {
        // alpha_0 and alpha_1 are identically 1; strict growth starts at k=2.
        for k in 0..=6u32 {
            let bound = Rational::new(BigInt::one(), factorial(k));
            for n in k.max(1)..16 {
                let a = bessel_coeff(n, k);
                let b = bessel_coeff(n + 1, k);
                if k <= 1 {
                    assert_eq!(a, bound);
                    assert_eq!(b, bound);
                } else {
                    assert!(a < b, "k={k} n={n}");
                    assert!(b < bound, "k={k} n={n}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn basis_round_trip(coeffs in prop::collection::vec((-100i64..100, 1i64..60), 0..21)) {
            let p = RationalPoly::from_coeffs(
                coeffs.into_iter().map(|(n, d)| rat(n, d)).collect(),
            );
            let back = from_bessel_basis(&to_bessel_basis(&p));
            prop_assert_eq!(back, p);
        }

        #[test]
        fn expansion_is_convex_with_expected_support(
            picks in prop::collection::vec((0u32..5, 1u32..40), 1..4)
        ) {
            let degrees: Vec<u32> = picks.iter().map(|(n, _)| *n).collect();
            let raw: Vec<Rational> = picks
                .iter()
                .map(|(_, r)| Rational::from_integer(BigInt::from(*r)))
                .collect();
            let total: Rational = raw.iter().sum();
            let weights: Vec<Rational> = raw.into_iter().map(|r| r / &total).collect();
            let spec = ProductSpec::new(degrees.clone(), weights).unwrap();
            let mix = expand_product(&spec);

            prop_assert!(mix.weight_sum().is_one());
            prop_assert!(mix.all_nonnegative());
            let lo = *degrees.iter().min().unwrap();
            let hi: u32 = degrees.iter().sum();
            let (min, max) = mix.support().unwrap();
            prop_assert_eq!(min, lo);
            prop_assert_eq!(max, hi);
        }

        #[test]
        fn scaled_product_evaluates_like_mixture(x in 0.0f64..20.0) {
            // q_1(x/2)^2 against (1/4) q_1(x) + (3/4) q_2(x)
            let spec = ProductSpec::new(vec![1, 1], vec![rat(1, 2), rat(1, 2)]).unwrap();
            let mix = expand_product(&spec);
            let lhs = {
                let q1 = bessel_poly_f64(1);
                let h = q1[0] + q1[1] * (x / 2.0);
                h * h
            };
            let rhs: f64 = mix
                .weights()
                .iter()
                .map(|(&j, b)| {
                    let q = bessel_poly_f64(j);
                    let mut acc = 0.0;
                    for c in q.iter().rev() {
                        acc = acc * x + c;
                    }
                    rational_to_f64(b) * acc
                })
                .sum();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }
}
