//! Double-double arithmetic (~31 significant digits) for the Laplace
//! inversion sums, whose weights grow to ~1e11 and cancel almost completely.
//!
//! Only the operations that the inversion kernel needs are implemented:
//! +, -, *, /, sqrt, exp, ln and a real power. Everything stays on the
//! real axis and panics rather than returning NaN on domain errors, since
//! callers validate their inputs first.

use num_rational::BigRational;

use crate::exactpoly::rational_to_f64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const LN2: Dd = Dd {
    hi: 0.693_147_180_559_945_3,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

// requires |a| >= |b|
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Nearest double-double to an exact rational: hi is the nearest f64,
    /// lo the rounded remainder.
    pub fn from_rational(r: &BigRational) -> Self {
        let hi = rational_to_f64(r);
        if !hi.is_finite() {
            return Dd { hi, lo: 0.0 };
        }
        let hi_rat = BigRational::from_float(hi).expect("finite float converts");
        let lo = rational_to_f64(&(r - hi_rat));
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Self {
        let (s1, e1) = two_sum(self.hi, o.hi);
        let (s2, e2) = two_sum(self.lo, o.lo);
        let (hi, lo) = quick_two_sum(s1, e1 + s2);
        let (hi, lo) = quick_two_sum(hi, lo + e2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Self {
        self.add(o.neg())
    }

    #[inline]
    pub fn add_f64(self, o: f64) -> Self {
        let (s1, e1) = two_sum(self.hi, o);
        let (hi, lo) = quick_two_sum(s1, e1 + self.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, o: f64) -> Self {
        let (p, e) = two_prod(self.hi, o);
        let e = e + self.lo * o;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }

    #[inline]
    pub fn div_f64(self, o: f64) -> Self {
        self.div(Dd::from_f64(o))
    }

    pub fn sqrt(self) -> Self {
        assert!(self.hi >= 0.0, "sqrt of a negative double-double");
        if self.hi == 0.0 {
            return Dd::from_f64(0.0);
        }
        // one Newton step from the f64 square root squares its error
        let x0 = Dd::from_f64(self.hi.sqrt());
        self.div(x0).add(x0).mul_f64(0.5)
    }

    /// exp with range reduction against ln 2 and 2^-9 scaling; relative
    /// error a few units in the last double-double place.
    pub fn exp(self) -> Self {
        if self.hi < -745.0 {
            return Dd::from_f64(0.0);
        }
        assert!(self.hi < 709.0, "exp overflow in double-double");
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self.sub(LN2.mul_f64(k)).mul_f64(1.0 / 512.0);
        // |r| <= ln2/1024, so eleven Taylor terms reach ~1e-35
        let mut term = r;
        let mut sum = r.add_f64(1.0);
        for i in 2..=11 {
            term = term.mul(r).div_f64(i as f64);
            sum = sum.add(term);
        }
        for _ in 0..9 {
            sum = sum.mul(sum);
        }
        // scale by 2^k in two halves so the low part cannot hit subnormals
        // before the high part does
        let k = k as i32;
        let s1 = pow2(k / 2);
        let s2 = pow2(k - k / 2);
        Dd {
            hi: sum.hi * s1 * s2,
            lo: sum.lo * s1 * s2,
        }
    }

    pub fn ln(self) -> Self {
        assert!(self.hi > 0.0, "ln of a nonpositive double-double");
        // Newton on exp(y) = x, started from the f64 logarithm
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y.add(self.mul(y.neg().exp()).add_f64(-1.0));
        }
        y
    }

    // only the reference tests compose a general power today
    #[cfg(test)]
    pub fn powf(self, c: f64) -> Self {
        self.ln().mul_f64(c).exp()
    }
}

fn pow2(k: i32) -> f64 {
    f64::from_bits(((1023 + k) as u64) << 52)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn close(got: Dd, want_hi: f64, want_lo: f64, rel: f64) {
        let err = ((got.hi - want_hi) + (got.lo - want_lo)).abs();
        assert!(
            err <= rel * want_hi.abs(),
            "got ({:e}, {:e}), want ({:e}, {:e})",
            got.hi,
            got.lo,
            want_hi,
            want_lo
        );
    }

    #[test]
    fn exp_reference_pairs() {
        let cases = [
            (0.5, 1.6487212707001282, -4.731568479435833e-17),
            (1.0, 2.718281828459045, 1.4456468917292502e-16),
            (-1.0, 0.36787944117144233, -1.2428753672788363e-17),
            (3.75, 42.52108200006278, -3.2371687033598516e-16),
            (-20.25, 1.6052280551856116e-9, -3.657643988865463e-26),
            (0.001953125, 1.0019550335910028, 1.4880094000024225e-17),
            (40.0, 2.3538526683702e17, -14.592100089250966),
        ];
        for (x, hi, lo) in cases {
            close(Dd::from_f64(x).exp(), hi, lo, 1e-29);
        }
    }

    #[test]
    fn ln_reference_pairs() {
        let cases = [
            (2.0, 0.6931471805599453, 2.3190468138462996e-17),
            (0.7, -0.35667494393873245, 4.82556379937662e-18),
            (1234.5, 7.118421308785234, -1.865350488379875e-16),
            (1e-8, -18.420680743952367, 1.757527539535928e-15),
        ];
        for (x, hi, lo) in cases {
            let got = Dd::from_f64(x).ln();
            let err = ((got.hi - hi) + (got.lo - lo)).abs();
            assert!(err <= 1e-29 * hi.abs());
        }
    }

    #[test]
    fn sqrt_reference_pairs() {
        let cases = [
            (2.0, 1.4142135623730951, -9.667293313452913e-17),
            (0.0078125, 0.08838834764831845, -6.042058320908071e-18),
            (
                std::f64::consts::PI,
                1.7724538509055159,
                1.1083209154657142e-16,
            ),
        ];
        for (x, hi, lo) in cases {
            close(Dd::from_f64(x).sqrt(), hi, lo, 1e-30);
        }
    }

    #[test]
    fn pow_reference_pairs() {
        close(
            Dd::from_f64(1.25).powf(-7.3),
            0.1961358152848106,
            -6.967322610982051e-18,
            1e-28,
        );
        close(
            Dd::from_f64(0.875).powf(12.5),
            0.1884085740969795,
            3.272188054296614e-18,
            1e-28,
        );
    }

    #[test]
    fn field_identities() {
        let vals = [3.7e-8, 0.12, 1.0 + 1e-14, 17.25, 9.4e11];
        for &a in &vals {
            for &b in &vals {
                let x = Dd::from_f64(a);
                let y = Dd::from_f64(b);
                let back = x.add(y).sub(y);
                assert!((back.to_f64() - a).abs() <= 1e-30 * a.abs());
                let one = x.mul(y).div(y).div(x);
                assert!((one.add_f64(-1.0).to_f64()).abs() < 1e-30);
            }
        }
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &x in &[1e-8, 0.3, 1.0, 42.0, 1.7e9] {
            let d = Dd::from_f64(x);
            let back = d.ln().exp();
            assert!((back.to_f64() - x).abs() <= 1e-28 * x);
            let sq = d.sqrt();
            assert!((sq.mul(sq).to_f64() - x).abs() <= 1e-29 * x);
        }
    }

    #[test]
    fn rational_conversion_splits_remainder() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let d = Dd::from_rational(&third);
        assert_eq!(d.hi, 1.0 / 3.0);
        assert!(d.lo.abs() <= d.hi * f64::EPSILON);
        let residue = d.mul_f64(3.0).add_f64(-1.0).to_f64().abs();
        assert!(residue < 1e-32);
    }
}
