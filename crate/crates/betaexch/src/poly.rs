//! Dense univariate polynomials, generic over the coefficient scalar.
//!
//! `Polynomial<T>` stores coefficients in ascending degree order. The
//! representation is canonical: the vector is empty for the zero polynomial
//! and otherwise ends in a nonzero coefficient. The scalar bound is
//! assembled from `num-traits`, so the same kernel serves exact integers
//! (`BigInt`), exact rationals (`BigRational`), and the floating complex
//! scalars used to seed root finding. Concrete aliases live at the crate
//! root.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Coefficient bound for the generic kernel: a commutative ring with
/// equality. Automatically implemented for every qualifying type.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Add<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Add<Output = Self>
{
}

/// Dense univariate polynomial with ascending coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Build from ascending coefficients, normalizing trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// The zero polynomial.
    pub fn zero_poly() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: T) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `c·X^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Polynomial::new(v)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree treating the zero polynomial as degree 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `X^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Ascending coefficient slice (canonical: no trailing zeros).
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Leading coefficient; panics on the zero polynomial.
    pub fn leading(&self) -> &T {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    /// Map coefficients into another scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation at a point of the same scalar type.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Coefficient-wise reversal: `X^deg · p(1/X)`. The reciprocal
    /// polynomial, whose roots are the inverses of the nonzero roots of `p`.
    pub fn reciprocal(&self) -> Polynomial<T> {
        let mut v = self.coeffs.clone();
        v.reverse();
        Polynomial::new(v)
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `p(−X)`: negate odd-degree coefficients.
    pub fn compose_neg(&self) -> Polynomial<T> {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + rhs.coeff(i));
        }
        Polynomial::new(v)
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - rhs.coeff(i));
        }
        Polynomial::new(v)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero_poly() || rhs.is_zero_poly() {
            return Polynomial::zero_poly();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = std::mem::replace(&mut v[i + j], T::zero());
                v[i + j] = t + a.clone() * b.clone();
            }
        }
        Polynomial::new(v)
    }
}

impl<T: Scalar + num_traits::FromPrimitive> Polynomial<T> {
    /// Formal derivative.
    pub fn derivative(&self) -> Polynomial<T> {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero_poly();
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let k = T::from_usize(i).expect("scalar holds small integers");
                k * c.clone()
            })
            .collect();
        Polynomial::new(v)
    }
}

impl<T: Scalar + Div<Output = T>> Polynomial<T> {
    /// Euclidean division by a nonzero divisor over a field scalar.
    /// Returns `(quotient, remainder)` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial<T>) -> (Polynomial<T>, Polynomial<T>) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Polynomial::zero_poly(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            let q = c / lead.clone();
            quot[i - dd] = q.clone();
            for (k, dc) in d.coeffs.iter().enumerate() {
                let t = std::mem::replace(&mut rem[i - dd + k], T::zero());
                rem[i - dd + k] = t - q.clone() * dc.clone();
            }
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Divide all coefficients by the leading one.
    pub fn monic(&self) -> Polynomial<T> {
        let lead = self.leading().clone();
        Polynomial::new(self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect())
    }

    /// Monic greatest common divisor by the Euclidean algorithm
    /// (normalizing each remainder to keep coefficient growth tame).
    pub fn gcd(&self, other: &Polynomial<T>) -> Polynomial<T> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero_poly() {
            let b_monic = b.monic();
            let (_, r) = a.div_rem(&b_monic);
            a = b_monic;
            b = r;
        }
        if a.is_zero_poly() {
            a
        } else {
            a.monic()
        }
    }
}

/// Integer polynomial with ascending coefficients.
pub type IntPoly = Polynomial<BigInt>;
/// Rational polynomial with ascending coefficients.
pub type RatPoly = Polynomial<BigRational>;

impl IntPoly {
    /// Parse from ascending (constant-term-first) integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Promote to rational coefficients.
    pub fn to_rational(&self) -> RatPoly {
        self.map(|c| BigRational::from(c.clone()))
    }

    /// Positive gcd of all coefficients (zero polynomial has content 0).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs() {
            g = g.gcd(c);
        }
        g
    }

    /// Divide out the content and normalize the leading coefficient to be
    /// positive. The zero polynomial maps to itself.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero_poly() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().sign() == num_bigint::Sign::Minus {
            g = -g;
        }
        self.map(|c| c / &g)
    }

    /// True when the leading coefficient is 1.
    pub fn is_monic(&self) -> bool {
        !self.is_zero_poly() && self.leading().is_one()
    }
}

impl RatPoly {
    /// Clear denominators and strip content: the primitive integer
    /// polynomial with the same roots.
    pub fn to_primitive_int(&self) -> IntPoly {
        if self.is_zero_poly() {
            return IntPoly::zero_poly();
        }
        let mut lcm = BigInt::one();
        for c in self.coeffs() {
            lcm = lcm.lcm(c.denom());
        }
        let scaled: Vec<BigInt> = self
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        Polynomial::new(scaled).primitive()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*X")?,
                _ => write!(f, "({c})*X^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_ints(c)
    }

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let p = ip(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ip(&[0, 0]).is_zero_poly());
        assert_eq!(ip(&[]).degree(), None);
    }

    #[test]
    fn arithmetic_basics() {
        let p = ip(&[-1, -1, 1]); // X^2 - X - 1
        let q = ip(&[1, 1]); // X + 1
        assert_eq!(&p + &q, ip(&[0, 0, 1]));
        assert_eq!(&p - &q, ip(&[-2, -2, 1]));
        assert_eq!(&q * &q, ip(&[1, 2, 1]));
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(5));
    }

    #[test]
    fn derivative_and_reciprocal() {
        let p = ip(&[-1, -1, 1]);
        assert_eq!(p.derivative(), ip(&[-1, 2]));
        assert_eq!(p.reciprocal(), ip(&[1, -1, -1]));
        // Palindrome stays fixed under reversal.
        let s = ip(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert_eq!(s.reciprocal(), s);
    }

    #[test]
    fn rational_division_and_gcd() {
        let p = ip(&[-1, -1, 1]).to_rational();
        let d = ip(&[1, 1]).to_rational();
        let (q, r) = p.div_rem(&d);
        // X^2 - X - 1 = (X + 1)(X - 2) + 1
        assert_eq!(q, ip(&[-2, 1]).to_rational());
        assert_eq!(r, ip(&[1]).to_rational());

        let a = ip(&[-1, 0, 1]).to_rational(); // (X-1)(X+1)
        let b = ip(&[1, 1]).to_rational();
        assert_eq!(a.gcd(&b), b.monic());
        // Coprime pair has gcd 1.
        let c = ip(&[-1, 1]).to_rational();
        let d2 = ip(&[1, 1]).to_rational();
        assert_eq!(c.gcd(&d2).degree(), Some(0));
    }

    #[test]
    fn primitive_integer_conversion() {
        let p = RatPoly::new(vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-1), BigInt::from(3)),
        ]);
        // 1/2 - X/3 scales to 3 - 2X, then sign-normalizes to -3 + 2X.
        assert_eq!(p.to_primitive_int(), ip(&[-3, 2]));
        // Content and sign normalization.
        assert_eq!(ip(&[-2, 0, -4]).primitive(), ip(&[1, 0, 2]));
    }

    #[test]
    fn compose_neg_flips_odd_coefficients() {
        let p = ip(&[1, 2, 3, 4]);
        assert_eq!(p.compose_neg(), ip(&[1, -2, 3, -4]));
    }
}
