//! Certified evaluation of number-field elements at a chosen root of the
//! defining polynomial.
//!
//! An [`Embedding`] pins one root (by index in the canonical root order:
//! descending modulus, ties by ascending argument) and answers numeric
//! questions about field elements evaluated there — enclosures, signs,
//! floors, comparisons — by interval/ball arithmetic over a certified
//! root enclosure that is refined on demand.
//!
//! Sign and floor queries on a nonzero element terminate because a
//! nonzero element of a field presented by an irreducible polynomial
//! cannot vanish at a root. When refinement stalls, the element's
//! coordinate polynomial shares a factor with the defining polynomial;
//! that factor is extracted exactly and reported as a reducible
//! presentation instead of looping to the precision cap.

use crate::ball::{eval_rat_coeffs_ball, eval_rat_coeffs_interval, ComplexBall, RealInterval};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::poly::Polynomial;
use crate::roots::{isolate_roots, RootEnclosure};
use num_bigint::BigInt;
use num_traits::Signed;
use std::cmp::Ordering;
use std::sync::Arc;

/// Default initial enclosure radius: `2^-64`.
const INITIAL_RAD_EXP: i64 = -64;

/// One embedding `Q(β) → C`, fixed by a root index, refinable on demand.
pub struct Embedding {
    field: Arc<NumberField>,
    root_index: usize,
    enclosure: RootEnclosure,
    rad_exp: i64,
    prec_cap: u32,
}

impl Embedding {
    /// Isolate the roots of the defining polynomial and select one.
    pub fn new(field: &Arc<NumberField>, root_index: usize, prec_cap: u32) -> Result<Embedding> {
        let roots = isolate_roots(field.poly(), INITIAL_RAD_EXP, prec_cap)?;
        let enclosure = roots.into_iter().nth(root_index).ok_or(Error::OutOfRange {
            what: format!(
                "root index {root_index} out of range for degree {}",
                field.degree()
            ),
        })?;
        Ok(Embedding {
            field: Arc::clone(field),
            root_index,
            enclosure,
            rad_exp: INITIAL_RAD_EXP,
            prec_cap,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn prec_cap(&self) -> u32 {
        self.prec_cap
    }

    pub fn is_real(&self) -> bool {
        self.enclosure.is_real()
    }

    pub fn enclosure(&self) -> &RootEnclosure {
        &self.enclosure
    }

    /// Working precision matched to the current enclosure radius.
    fn prec(&self) -> u32 {
        ((-self.rad_exp).max(64) as u32).saturating_add(32)
    }

    /// Tighten the enclosure to radius at most `2^rad_exp`, tracking the
    /// same root across the re-isolation by ball intersection.
    pub fn refine_to(&mut self, rad_exp: i64) -> Result<()> {
        if rad_exp >= self.rad_exp {
            return Ok(());
        }
        let roots = isolate_roots(self.field.poly(), rad_exp, self.prec_cap)?;
        let old = self.enclosure.ball();
        let prec = self.prec();
        let matches: Vec<&RootEnclosure> = roots
            .iter()
            .filter(|r| !r.ball().certainly_disjoint(&old, prec))
            .collect();
        match matches.as_slice() {
            [single] => {
                self.enclosure = (*single).clone();
                self.rad_exp = rad_exp;
                Ok(())
            }
            _ => Err(Error::PrecisionExhausted {
                cap_bits: self.prec_cap,
                context: "root tracking across refinement became ambiguous".into(),
            }),
        }
    }

    /// One refinement step (double the enclosure accuracy). Errors at the
    /// precision cap.
    fn refine_step(&mut self) -> Result<()> {
        let next = self.rad_exp * 2;
        if -next > self.prec_cap as i64 {
            return Err(Error::PrecisionExhausted {
                cap_bits: self.prec_cap,
                context: "embedding refinement hit the precision cap".into(),
            });
        }
        self.refine_to(next)
    }

    /// Ball enclosure of `x` evaluated at the root.
    pub fn eval_ball(&self, x: &FieldElement, prec: u32) -> ComplexBall {
        eval_rat_coeffs_ball(x.coords(), &self.enclosure.ball(), prec)
    }

    /// Interval enclosure of `x` at a real root.
    pub fn eval_real(&self, x: &FieldElement, prec: u32) -> Result<RealInterval> {
        let iv = self.enclosure.real_interval().ok_or(Error::OutOfRange {
            what: "real evaluation at a non-real root".into(),
        })?;
        Ok(eval_rat_coeffs_interval(x.coords(), &iv, prec))
    }

    /// If `x`'s coordinate polynomial shares a nontrivial factor with the
    /// defining polynomial, the presentation is reducible: report the
    /// factor. Otherwise `x` cannot vanish at any root and refinement
    /// terminates.
    fn reject_shared_factor(&self, x: &FieldElement) -> Result<()> {
        let xp = Polynomial::new(x.coords().to_vec());
        let g = self.field.poly().to_rational().gcd(&xp);
        if g.degree_or_zero() >= 1 {
            return Err(Error::ReducibleDetected {
                factor: g.to_primitive_int().to_string(),
            });
        }
        Ok(())
    }

    /// Certified sign of `x` at a real root: −1, 0, or 1.
    pub fn sign_real(&mut self, x: &FieldElement) -> Result<i32> {
        if x.is_zero() {
            return Ok(0);
        }
        if let Some(r) = x.as_rational() {
            return Ok(if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            });
        }
        self.reject_shared_factor(x)?;
        loop {
            let iv = self.eval_real(x, self.prec())?;
            if let Some(s) = iv.certified_sign() {
                if s != 0 {
                    return Ok(s);
                }
            }
            self.refine_step()?;
        }
    }

    /// Certified comparison of two field elements at a real root.
    pub fn compare_real(&mut self, x: &FieldElement, y: &FieldElement) -> Result<Ordering> {
        Ok(match self.sign_real(&x.sub(y))? {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// Certified floor of `x` at a real root.
    pub fn floor_real(&mut self, x: &FieldElement) -> Result<BigInt> {
        if let Some(r) = x.as_rational() {
            return Ok(r.floor().to_integer());
        }
        // Irrational value (unless the presentation is reducible): the
        // interval eventually separates from every integer.
        let mut checked_factor = false;
        loop {
            let iv = self.eval_real(x, self.prec())?;
            let flo = iv.lo.floor_bigint();
            let fhi = iv.hi.floor_bigint();
            if flo == fhi {
                return Ok(flo);
            }
            if !checked_factor && iv.width() < Dyadic::one() {
                // Exactly one integer sits inside the interval; if x
                // equals it the presentation is reducible — detect that
                // exactly rather than refining forever.
                let k = self.field.from_rational(num_rational::BigRational::from(fhi));
                let diff = x.sub(&k);
                self.reject_shared_factor(&diff)?;
                checked_factor = true;
            }
            self.refine_step()?;
        }
    }

    /// Certified modulus enclosure of `x` at the root, refined until the
    /// interval width is at most `2^width_exp`.
    pub fn modulus_interval(&mut self, x: &FieldElement, width_exp: i64) -> Result<RealInterval> {
        if x.is_zero() {
            return Ok(RealInterval::zero());
        }
        let target = Dyadic::pow2(width_exp);
        loop {
            let m = self.eval_ball(x, self.prec()).modulus(self.prec());
            if m.width() <= target {
                return Ok(m);
            }
            self.refine_step()?;
        }
    }
}
