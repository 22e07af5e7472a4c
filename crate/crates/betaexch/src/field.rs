//! Exact arithmetic in `Q(β)` for `β` a root of a monic squarefree integer
//! polynomial `p`.
//!
//! Elements are coordinate vectors in the power basis `1, β, …, β^(d−1)`
//! with arbitrary-precision rational entries. Multiplication reduces
//! modulo `p`; inversion runs the extended Euclidean algorithm in `Q[X]`
//! and surfaces a nontrivial factor of `p` as [`Error::ReducibleDetected`]
//! if one appears — irreducibility is never assumed up front, only
//! falsified lazily.

use crate::error::{Error, Result};
use crate::poly::{IntPoly, Polynomial, RatPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

/// A number field presented as `Q[X]/(p)` for monic squarefree integer `p`.
#[derive(Debug)]
pub struct NumberField {
    poly: IntPoly,
    degree: usize,
    /// `β^(d−1+j)` reduced to the power basis, for `j = 1..d−1`; used to
    /// fold products back below degree `d` without repeated division.
    high_powers: Vec<Vec<BigRational>>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl NumberField {
    /// Validate the defining polynomial and build the field.
    ///
    /// Requires a nonconstant monic polynomial with integer coefficients
    /// that is squarefree over `Q`. Irreducibility is checked lazily at
    /// inversion time.
    pub fn new(poly: IntPoly) -> Result<Arc<NumberField>> {
        let deg = match poly.degree() {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidConfig {
                    what: "defining polynomial must be nonconstant".into(),
                })
            }
        };
        if !poly.is_monic() {
            return Err(Error::NotMonic { lead: poly.leading().clone() });
        }
        let rp = poly.to_rational();
        let g = rp.gcd(&rp.derivative());
        if g.degree() != Some(0) {
            return Err(Error::NotSquarefree { gcd_degree: g.degree_or_zero() });
        }
        // Precompute β^(d), …, β^(2d−2) in the power basis.
        let mut high_powers = Vec::with_capacity(deg.saturating_sub(1));
        // β^d = −(p₀ + p₁β + … + p_{d−1}β^{d−1}).
        let mut cur: Vec<BigRational> = (0..deg)
            .map(|i| -BigRational::from(poly.coeff(i)))
            .collect();
        for _ in 0..deg.saturating_sub(1) {
            high_powers.push(cur.clone());
            // Multiply by β: shift up and fold the overflow through β^d.
            let overflow = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigRational::zero();
            if !overflow.is_zero() {
                for (i, hp) in high_powers[0].iter().enumerate() {
                    cur[i] += &overflow * hp;
                }
            }
        }
        Ok(Arc::new(NumberField { poly, degree: deg, high_powers }))
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The companion matrix of `p` as columns of the multiplication-by-β
    /// map on integer coordinate vectors: `col j` is `β·β^j` in the power
    /// basis. Entries are integers because `p` is monic.
    pub fn companion_columns(&self) -> Vec<Vec<BigInt>> {
        let d = self.degree;
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut col = vec![BigInt::zero(); d];
            if j + 1 < d {
                col[j + 1] = BigInt::one();
            } else {
                for i in 0..d {
                    col[i] = -self.poly.coeff(i);
                }
            }
            cols.push(col);
        }
        cols
    }

    /// The zero element.
    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            coords: vec![BigRational::zero(); self.degree],
            field: Arc::clone(self),
        }
    }

    /// The multiplicative identity.
    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    /// The distinguished generator β (the class of `X`).
    pub fn beta(self: &Arc<Self>) -> FieldElement {
        if self.degree == 1 {
            // β is the rational root −p₀.
            return self.from_rational(BigRational::from(-self.poly.coeff(0)));
        }
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[1] = BigRational::one();
        FieldElement { coords, field: Arc::clone(self) }
    }

    /// Embed a rational constant.
    pub fn from_rational(self: &Arc<Self>, r: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = r;
        FieldElement { coords, field: Arc::clone(self) }
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }

    /// Build an element from power-basis coordinates (length must equal
    /// the degree).
    pub fn element(self: &Arc<Self>, coords: Vec<BigRational>) -> Result<FieldElement> {
        if coords.len() != self.degree {
            return Err(Error::InvalidConfig {
                what: format!(
                    "coordinate vector length {} does not match field degree {}",
                    coords.len(),
                    self.degree
                ),
            });
        }
        Ok(FieldElement { coords, field: Arc::clone(self) })
    }

    /// Reduce arbitrary-length coordinates (a polynomial in β) to the
    /// power basis.
    fn reduce(self: &Arc<Self>, mut coeffs: Vec<BigRational>) -> FieldElement {
        let d = self.degree;
        for j in (d..coeffs.len()).rev() {
            let c = std::mem::replace(&mut coeffs[j], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            // β^j = high_powers[j − d] for j in d..2d−1.
            for (i, hp) in self.high_powers[j - d].iter().enumerate() {
                coeffs[i] += &c * hp;
            }
        }
        coeffs.truncate(d);
        coeffs.resize(d, BigRational::zero());
        FieldElement { coords: coeffs, field: Arc::clone(self) }
    }
}

/// An element of a [`NumberField`] in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    coords: Vec<BigRational>,
    field: Arc<NumberField>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl FieldElement {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The element as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn assert_same_field(&self, other: &FieldElement) {
        assert!(
            self.field == other.field,
            "field elements from different number fields"
        );
    }

    pub fn add(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement { coords, field: Arc::clone(&self.field) }
    }

    pub fn sub(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement { coords, field: Arc::clone(&self.field) }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().map(|c| -c).collect(),
            field: Arc::clone(&self.field),
        }
    }

    pub fn mul(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let d = self.field.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        self.field.reduce(prod)
    }

    pub fn mul_rational(&self, r: &BigRational) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().map(|c| c * r).collect(),
            field: Arc::clone(&self.field),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// `Q[X]`. A nontrivial gcd with the defining polynomial proves the
    /// field presentation reducible and is reported with the factor.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p: RatPoly = self.field.poly.to_rational();
        let a = Polynomial::new(self.coords.clone());
        // Extended Euclid: maintain s with s·a ≡ r (mod p).
        let mut r0 = p.clone();
        let mut r1 = a;
        let mut s0 = RatPoly::zero_poly();
        let mut s1 = Polynomial::constant(BigRational::one());
        while !r1.is_zero_poly() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            s0 = s1;
            r1 = r;
            s1 = s;
        }
        match r0.degree() {
            Some(0) => {
                let c = r0.coeff(0);
                let inv_poly = s0.scale(&(BigRational::one() / c));
                Ok(self.field.reduce(inv_poly.coeffs().to_vec()))
            }
            _ => Err(Error::ReducibleDetected {
                factor: r0.to_primitive_int().to_string(),
            }),
        }
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// `self · β^n` for `n ≥ 0` (repeated companion action; cheap because
    /// each β-multiply is a shift plus one basis fold).
    pub fn mul_beta_pow(&self, n: u64) -> FieldElement {
        let beta = self.field.beta();
        let mut acc = self.clone();
        // Square-and-multiply on β keeps this O(log n) field products.
        let mut base = beta;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power of the element.
    pub fn pow(&self, n: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// True when every coordinate is an integer, i.e. the element lies in
    /// `Z[β]` (the power basis is integral because `p` is monic).
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }

    /// Least common multiple of the coordinate denominators: the smallest
    /// positive integer `q` with `q·x ∈ Z[β]`.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in &self.coords {
            l = l.lcm(c.denom());
        }
        l.abs()
    }

    /// Coordinates scaled by the denominator lcm: an integer vector.
    pub fn scaled_integer_coords(&self) -> (BigInt, Vec<BigInt>) {
        let q = self.denominator_lcm();
        let coords = self
            .coords
            .iter()
            .map(|c| c.numer() * (&q / c.denom()))
            .collect();
        (q, coords)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = Polynomial::new(self.coords.clone());
        if poly.is_zero_poly() {
            write!(f, "0")
        } else {
            let s = poly.to_string().replace('X', "β");
            write!(f, "{s}")
        }
    }
}

/// Apply the companion matrix (multiplication by β) to an integer vector
/// modulo `q`: one step of the orbit used by the non-integrality decision.
pub fn companion_step_mod(cols: &[Vec<BigInt>], v: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    let d = v.len();
    let mut out = vec![BigInt::zero(); d];
    for (j, col) in cols.iter().enumerate() {
        if v[j].is_zero() {
            continue;
        }
        for i in 0..d {
            if col[i].is_zero() {
                continue;
            }
            out[i] += &v[j] * &col[i];
        }
    }
    for x in &mut out {
        *x = x.mod_floor(q);
    }
    out
}
