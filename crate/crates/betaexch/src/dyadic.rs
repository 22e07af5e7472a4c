//! Exact dyadic numbers: `mantissa · 2^exponent` with arbitrary-precision
//! mantissas.
//!
//! Addition, subtraction, and multiplication are exact. Division, square
//! root, and rounding take an explicit precision and a rounding direction,
//! so callers can build outward-rounded interval and ball arithmetic on
//! top. All directed operations guarantee `Down` results ≤ the true value
//! and `Up` results ≥ it.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward −∞ (result ≤ true value).
    Down,
    /// Toward +∞ (result ≥ true value).
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// An exact binary rational `mant · 2^exp`, canonical form: `mant` is odd
/// or zero (zero has `exp = 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Dyadic::new(n.clone(), 0)
    }

    /// Exact conversion from an `f64` (every finite float is dyadic).
    /// Returns `None` for NaN or infinity.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * mant as i64), exp))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Number of significant bits in the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: value lies in `[2^(b-1), 2^b)` in
    /// magnitude where `b` is the returned bound. Zero returns `None`.
    fn mag_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 + self.exp)
        }
    }

    /// Exact addition.
    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &rhs.mant << (rhs.exp - exp) as u64;
        Dyadic::new(a + b, exp)
    }

    /// Exact subtraction.
    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    /// Exact multiplication.
    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }

    /// Exact doubling/halving by powers of two.
    pub fn mul_pow2(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + e }
    }

    /// Directed rounding to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = (bits - prec as u64) as i64;
        let shifted = match dir {
            // BigInt shr is floor division by 2^k.
            Round::Down => &self.mant >> k as u64,
            Round::Up => -(&(-&self.mant) >> k as u64),
        };
        Dyadic::new(shifted, self.exp + k)
    }

    /// Directed division to `prec` significant bits.
    pub fn div(&self, rhs: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut num = self.mant.clone();
        let mut den = rhs.mant.clone();
        if den.sign() == Sign::Minus {
            num = -num;
            den = -den;
        }
        // Shift the numerator so the quotient carries ≥ prec+2 bits.
        let s = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        num <<= s as u64;
        let q = match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => -((-num).div_floor(&den)),
        };
        Dyadic::new(q, self.exp - rhs.exp - s).round(prec, dir)
    }

    /// Directed square root to `prec` significant bits. Panics on negative
    /// input.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "dyadic sqrt of negative value");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        if e.rem_euclid(2) != 0 {
            m <<= 1u64;
            e -= 1;
        }
        // Pre-shift so the integer root carries ≥ prec+1 bits.
        let half_bits = (m.bits() + 1) / 2;
        let t = (prec as i64 + 1 - half_bits as i64).max(0);
        m <<= (2 * t) as u64;
        let r = m.sqrt();
        let rounded = match dir {
            Round::Down => r,
            Round::Up => {
                if (&r * &r) == m {
                    r
                } else {
                    r + BigInt::one()
                }
            }
        };
        Dyadic::new(rounded, e / 2 - t).round(prec, dir)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed conversion from a rational to `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let num = Dyadic::from_bigint(r.numer());
        let den = Dyadic::from_bigint(r.denom());
        num.div(&den, prec, dir)
    }

    /// Approximate `f64` value (for display and plot columns only).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Reduce to ≤ 64 mantissa bits first so the conversion cannot blow up.
        let r = self.round(64, Round::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32)
    }

    /// Exact floor as a big integer.
    pub fn floor_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Decimal string with `digits` fractional digits, rounded in the given
    /// direction (used for certified decimal endpoints in reports).
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = Dyadic::new(&self.mant * &scale, self.exp);
        let int = match dir {
            Round::Down => scaled.floor_bigint(),
            Round::Up => -((scaled.neg()).floor_bigint()),
        };
        let neg = int.sign() == Sign::Minus;
        let digits_str = int.abs().to_string();
        let d = digits as usize;
        let padded = if digits_str.len() <= d {
            format!("0.{}{}", "0".repeat(d - digits_str.len()), digits_str)
        } else {
            let (i, f) = digits_str.split_at(digits_str.len() - d);
            format!("{i}.{f}")
        };
        if neg {
            format!("-{padded}")
        } else {
            padded
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitude ranges before aligning, so
        // wildly different exponents never force a huge shift.
        let (ma, mb) = (self.mag_exp().unwrap(), other.mag_exp().unwrap());
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let diff = self.sub(other);
        match diff.signum() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({}*2^{} ≈ {})", self.mant, self.exp, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
