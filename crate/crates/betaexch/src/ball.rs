//! Outward-rounded real intervals and complex midpoint-radius balls.
//!
//! Every operation takes a working precision and rounds outward, so a true
//! value contained in the inputs is contained in the output. These types
//! appear only at the embedding boundary: field arithmetic stays exact and
//! balls enter when an algebraic number must be compared, floored, or
//! printed.

use crate::dyadic::{Dyadic, Round};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::fmt;

/// Closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RealInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        RealInterval::point(Dyadic::zero())
    }

    /// Outward enclosure of a rational at the given precision.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        RealInterval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RealInterval::point(Dyadic::from_int(n))
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Certified sign: `Some(s)` when every point in the interval has sign
    /// `s`, `None` when the interval straddles zero (sign 0 only for the
    /// exact point interval `[0,0]`).
    pub fn certified_sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, rhs: &RealInterval, prec: u32) -> RealInterval {
        RealInterval {
            lo: self.lo.add(&rhs.lo).round(prec, Round::Down),
            hi: self.hi.add(&rhs.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, rhs: &RealInterval, prec: u32) -> RealInterval {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &RealInterval, prec: u32) -> RealInterval {
        let candidates = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let lo = candidates.iter().min().unwrap().round(prec, Round::Down);
        let hi = candidates.iter().max().unwrap().round(prec, Round::Up);
        RealInterval { lo, hi }
    }

    /// Interval division; requires the divisor to exclude zero.
    pub fn div(&self, rhs: &RealInterval, prec: u32) -> RealInterval {
        assert!(!rhs.contains_zero(), "interval division by interval containing zero");
        let q = |a: &Dyadic, b: &Dyadic, dir: Round| a.div(b, prec, dir);
        let candidates = [
            q(&self.lo, &rhs.lo, Round::Down),
            q(&self.lo, &rhs.hi, Round::Down),
            q(&self.hi, &rhs.lo, Round::Down),
            q(&self.hi, &rhs.hi, Round::Down),
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let candidates_up = [
            q(&self.lo, &rhs.lo, Round::Up),
            q(&self.lo, &rhs.hi, Round::Up),
            q(&self.hi, &rhs.lo, Round::Up),
            q(&self.hi, &rhs.hi, Round::Up),
        ];
        let hi = candidates_up.iter().max().unwrap().clone();
        RealInterval { lo, hi }
    }

    /// Square root; requires a nonnegative lower endpoint (clamped at 0 if
    /// the interval dips infinitesimally below due to rounding).
    pub fn sqrt(&self, prec: u32) -> RealInterval {
        let lo = if self.lo.is_negative() { Dyadic::zero() } else { self.lo.clone() };
        RealInterval {
            lo: lo.sqrt(prec, Round::Down),
            hi: self.hi.sqrt(prec, Round::Up),
        }
    }

    /// Absolute-value enclosure.
    pub fn abs(&self) -> RealInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            RealInterval { lo: Dyadic::zero(), hi: m }
        }
    }

    /// Strict order between intervals: `Some(Less)` when `hi < rhs.lo`, etc.
    pub fn strictly_below(&self, rhs: &RealInterval) -> bool {
        self.hi < rhs.lo
    }

    /// Integer power by repeated squaring with outward rounding.
    pub fn pow_int(&self, mut n: u64, prec: u32) -> RealInterval {
        let mut base = self.clone();
        let mut acc = RealInterval::from_int(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            base = base.mul(&base, prec);
            n >>= 1;
        }
        acc
    }

    /// Decimal rendering `[lo, hi]` with outward rounding.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        (self.lo.to_decimal(digits, Round::Down), self.hi.to_decimal(digits, Round::Up))
    }
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

/// Complex ball: center `re + im·i` with radius `rad ≥ 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
}

impl ComplexBall {
    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic) -> Self {
        debug_assert!(!rad.is_negative());
        ComplexBall { re, im, rad }
    }

    pub fn exact_point(re: Dyadic, im: Dyadic) -> Self {
        ComplexBall { re, im, rad: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        ComplexBall::exact_point(Dyadic::zero(), Dyadic::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ComplexBall::exact_point(Dyadic::from_int(n), Dyadic::zero())
    }

    /// Enclosure of a real rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let iv = RealInterval::from_rational(r, prec);
        ComplexBall::from_real_interval(&iv)
    }

    /// Ball covering a real interval (center = midpoint, radius = half
    /// width rounded up).
    pub fn from_real_interval(iv: &RealInterval) -> Self {
        let mid = iv.midpoint();
        // Midpoint is exact dyadic, so half the width bounds the error.
        let rad = iv.hi.sub(&mid).max(mid.sub(&iv.lo));
        ComplexBall { re: mid, im: Dyadic::zero(), rad }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Round the center to `prec` bits, absorbing the rounding error into
    /// the radius.
    pub fn compress(&self, prec: u32) -> ComplexBall {
        let re = self.re.round(prec, Round::Down);
        let im = self.im.round(prec, Round::Down);
        let err = self
            .re
            .sub(&re)
            .abs()
            .add(&self.im.sub(&im).abs())
            .add(&self.rad)
            .round(prec, Round::Up);
        ComplexBall { re, im, rad: err }
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall { re: self.re.neg(), im: self.im.neg(), rad: self.rad.clone() }
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: self.im.neg(), rad: self.rad.clone() }
    }

    pub fn add(&self, rhs: &ComplexBall, prec: u32) -> ComplexBall {
        ComplexBall {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
            rad: self.rad.add(&rhs.rad),
        }
        .compress(prec)
    }

    pub fn sub(&self, rhs: &ComplexBall, prec: u32) -> ComplexBall {
        self.add(&rhs.neg(), prec)
    }

    /// Upper bound on the center magnitude via the 1-norm (cheap; within
    /// √2 of tight, which outward arithmetic tolerates).
    fn center_norm1(&self) -> Dyadic {
        self.re.abs().add(&self.im.abs())
    }

    pub fn mul(&self, rhs: &ComplexBall, prec: u32) -> ComplexBall {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        // |z1 z2 − c1 c2| ≤ |c1| r2 + |c2| r1 + r1 r2.
        let rad = self
            .center_norm1()
            .mul(&rhs.rad)
            .add(&rhs.center_norm1().mul(&self.rad))
            .add(&self.rad.mul(&rhs.rad));
        ComplexBall { re, im, rad }.compress(prec)
    }

    /// Multiply by an exact integer.
    pub fn mul_bigint(&self, k: &BigInt, prec: u32) -> ComplexBall {
        let kd = Dyadic::from_bigint(k);
        ComplexBall {
            re: self.re.mul(&kd),
            im: self.im.mul(&kd),
            rad: self.rad.mul(&kd.abs()),
        }
        .compress(prec)
    }

    /// Certified enclosure of `|z|` over the ball.
    pub fn modulus(&self, prec: u32) -> RealInterval {
        let sq = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let center_lo = sq.sqrt(prec, Round::Down);
        let center_hi = sq.sqrt(prec, Round::Up);
        let lo = center_lo.sub(&self.rad);
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        RealInterval {
            lo: lo.round(prec, Round::Down),
            hi: center_hi.add(&self.rad).round(prec, Round::Up),
        }
    }

    /// Certified enclosure of `|z|²` over the ball.
    pub fn modulus_sq(&self, prec: u32) -> RealInterval {
        let m = self.modulus(prec + 2);
        m.mul(&m, prec)
    }

    /// Enclosure of the real part as an interval.
    pub fn real_interval(&self) -> RealInterval {
        RealInterval { lo: self.re.sub(&self.rad), hi: self.re.add(&self.rad) }
    }

    /// Enclosure of the imaginary part as an interval.
    pub fn imag_interval(&self) -> RealInterval {
        RealInterval { lo: self.im.sub(&self.rad), hi: self.im.add(&self.rad) }
    }

    /// True when the two balls cannot intersect.
    pub fn certainly_disjoint(&self, rhs: &ComplexBall, prec: u32) -> bool {
        let dist_sq = {
            let dr = self.re.sub(&rhs.re);
            let di = self.im.sub(&rhs.im);
            dr.mul(&dr).add(&di.mul(&di))
        };
        let rsum = self.rad.add(&rhs.rad);
        // |c1 − c2| > r1 + r2  ⟺  |c1 − c2|² > (r1+r2)² (both nonnegative).
        dist_sq.sqrt(prec, Round::Down) > rsum.round(prec, Round::Up)
    }

    /// True when the ball certainly contains the given exact point.
    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        let dr = self.re.sub(re);
        let di = self.im.sub(im);
        let dist_sq = dr.mul(&dr).add(&di.mul(&di));
        dist_sq <= self.rad.mul(&self.rad)
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ball({} + {}i ± {})",
            self.re.to_f64(),
            self.im.to_f64(),
            self.rad.to_f64()
        )
    }
}

/// Horner evaluation of an integer polynomial over a complex ball.
pub fn eval_int_poly_ball(coeffs: &[BigInt], z: &ComplexBall, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, prec);
        acc = acc.add(
            &ComplexBall::exact_point(Dyadic::from_bigint(c), Dyadic::zero()),
            prec,
        );
    }
    acc
}

/// Horner evaluation of rational coefficients over a complex ball (used to
/// embed field elements: coefficients are power-basis coordinates).
pub fn eval_rat_coeffs_ball(coeffs: &[BigRational], z: &ComplexBall, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, prec);
        acc = acc.add(&ComplexBall::from_rational(c, prec), prec);
    }
    acc
}

/// Horner evaluation of rational coefficients over a real interval.
pub fn eval_rat_coeffs_interval(
    coeffs: &[BigRational],
    x: &RealInterval,
    prec: u32,
) -> RealInterval {
    let mut acc = RealInterval::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x, prec);
        acc = acc.add(&RealInterval::from_rational(c, prec), prec);
    }
    acc
}

/// `⌊log₂ x⌋` for a positive rational, decided exactly from bit lengths.
fn floor_log2(x: &BigRational) -> i64 {
    let n = x.numer();
    let d = x.denom();
    let k = n.bits() as i64 - d.bits() as i64;
    // x ∈ [2^{k−1}, 2^{k+1}), so the floor is k−1 or k: test 2^k ≤ x.
    let holds = if k >= 0 {
        (d << (k as usize)) <= *n
    } else {
        *d <= (n << ((-k) as usize))
    };
    if holds {
        k
    } else {
        k - 1
    }
}

/// Exact rational bounds `[lo, hi]` for `2·atanh(u)` with `0 ≤ u < 1`,
/// accurate to about `prec` bits: partial sum of the odd power series plus
/// an explicit geometric remainder bound.
fn atanh_twice_bounds(u: &BigRational, prec: u32) -> (BigRational, BigRational) {
    use num_traits::Zero;
    if u.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    debug_assert!(u.is_positive() && u.numer() < u.denom(), "need 0 < u < 1");
    let u2 = u * u;
    // Terms shrink at least geometrically by u² ≤ 1/9; this many terms
    // puts the remainder below 2^{−prec−4}.
    let terms = (prec as usize) / 3 + 4;
    let mut sum = BigRational::zero();
    let mut pow = u.clone(); // u^{2j+1}
    for j in 0..terms {
        sum += &pow / BigRational::from_integer(BigInt::from(2 * j as u64 + 1));
        pow *= &u2;
    }
    // 2·Σ_{j≥J} u^{2j+1}/(2j+1) ≤ 2·u^{2J+1} / ((2J+1)(1 − u²)).
    let rem = BigRational::from_integer(BigInt::from(2)) * &pow
        / (BigRational::from_integer(BigInt::from(2 * terms as u64 + 1))
            * (BigRational::from_integer(BigInt::from(1)) - &u2));
    let lo = &sum * BigRational::from_integer(BigInt::from(2));
    let hi = &lo + rem;
    (lo, hi)
}

/// Certified natural logarithm of a positive rational.
///
/// Range-reduces `x = m·2^e` with `m ∈ [1, 2)`, evaluates
/// `ln m = 2·atanh((m−1)/(m+1))` and `ln 2 = 2·atanh(1/3)` by exact
/// rational series with explicit remainders, and rounds outward once at
/// the end. Panics on nonpositive input.
pub fn ln_rational(x: &BigRational, prec: u32) -> RealInterval {
    assert!(x.is_positive(), "logarithm of a nonpositive rational");
    let e = floor_log2(x);
    // m = x · 2^{−e} ∈ [1, 2).
    let m = if e >= 0 {
        x / BigRational::from_integer(BigInt::from(1) << (e as usize))
    } else {
        x * BigRational::from_integer(BigInt::from(1) << ((-e) as usize))
    };
    let one = BigRational::from_integer(BigInt::from(1));
    let u = (&m - &one) / (&m + &one);
    let (mut lo, mut hi) = atanh_twice_bounds(&u, prec);
    if e != 0 {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let (l2lo, l2hi) = atanh_twice_bounds(&third, prec);
        let er = BigRational::from_integer(BigInt::from(e));
        if e > 0 {
            lo += &er * l2lo;
            hi += &er * l2hi;
        } else {
            lo += &er * l2hi;
            hi += &er * l2lo;
        }
    }
    RealInterval {
        lo: Dyadic::from_rational(&lo, prec, Round::Down),
        hi: Dyadic::from_rational(&hi, prec, Round::Up),
    }
}
