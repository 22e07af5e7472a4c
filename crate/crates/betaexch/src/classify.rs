//! Exact classification of the base: Pisot, Salem, quasi-Pisot,
//! quasi-Salem, or none of these.
//!
//! Definitions used (β a root of the monic squarefree defining
//! polynomial, all roots treated as its conjugates):
//! - Pisot: β real, β > 1, all other roots strictly inside the unit
//!   circle.
//! - Salem: β real, β > 1, all other roots of modulus ≤ 1 with at least
//!   one of modulus exactly 1.
//! - quasi-Pisot: the roots outside the closed unit disc are exactly β
//!   (real, either sign) or the conjugate pair {β, β̄}, and no root lies
//!   on the unit circle.
//! - quasi-Salem: the same outside condition, with at least one root on
//!   the unit circle.
//!
//! Every Pisot number is quasi-Pisot and every Salem number is
//! quasi-Salem; the reported kind is the most specific one.
//!
//! Modulus-vs-1 comparisons are decided exactly: the number of roots of
//! modulus exactly 1 is computed symbolically (no numerics), and the
//! enclosures of the remaining roots are refined until each certifies
//! `|z| < 1` or `|z| > 1`. Roots on the circle can never be separated
//! from 1, which is precisely how they are identified: refinement stops
//! when the number of undecided roots equals the symbolic count.

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::roots::{count_real_roots_between, isolate_roots, RootEnclosure};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Classification outcome, most specific kind first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    Pisot,
    Salem,
    QuasiPisot,
    QuasiSalem,
    None,
}

/// Full classification record. Roots are indexed in canonical order
/// (descending modulus, ties by ascending argument).
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub polynomial: String,
    pub kind: Kind,
    pub degree: usize,
    /// Number of roots of modulus exactly 1 (computed symbolically).
    pub unit_circle_count: usize,
    /// Number of roots certified strictly outside the closed unit disc.
    pub outside_count: usize,
    /// Canonical index of β when the kind is not `None`: the outside
    /// root if real, the upper-half member of the outside pair if
    /// complex.
    pub distinguished_root: Option<usize>,
    pub distinguished_real: bool,
    /// Certified decimal enclosures of each root's modulus, canonical
    /// order, outward rounded.
    pub moduli: Vec<[String; 2]>,
}

/// Number of roots of `p` on the unit circle, computed exactly.
///
/// Circle roots are common roots of `p` and its reciprocal. After
/// stripping `X ∓ 1`, the common factor is palindromic of even degree
/// `2m` and can be written `X^m q(X + 1/X)`; circle root pairs
/// `e^{±iθ}` correspond one-to-one to real roots of `q` in `(−2, 2)`,
/// counted by Sturm's method.
pub fn unit_circle_root_count(p: &IntPoly) -> usize {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return 0,
    };
    let _ = d;
    let rp = p.to_rational();
    let rec = p.reciprocal().to_rational();
    if rec.is_zero_poly() {
        return 0;
    }
    let g = rp.gcd(&rec);
    let mut h = g.to_primitive_int();
    if h.degree_or_zero() == 0 {
        return 0;
    }
    let mut count = 0usize;
    for root in [BigInt::one(), -BigInt::one()] {
        if h.eval(&root).is_zero() {
            count += 1;
            let divisor = IntPoly::new(vec![-root, BigInt::one()]).to_rational();
            let (q, r) = h.to_rational().div_rem(&divisor);
            debug_assert!(r.is_zero_poly());
            h = q.to_primitive_int();
        }
    }
    let deg_h = h.degree_or_zero();
    if deg_h == 0 {
        return count;
    }
    // The residual factor is palindromic of even degree.
    debug_assert_eq!(deg_h % 2, 0);
    debug_assert_eq!(h, h.reciprocal());
    let m = deg_h / 2;
    // q(y) = c_m + Σ_{j≥1} c_{m+j}·V_j(y), where V_j(y) = X^j + X^{−j}
    // under y = X + 1/X: V_0 = 2, V_1 = y, V_{j+1} = y·V_j − V_{j−1}.
    let y = IntPoly::from_ints(&[0, 1]);
    let mut v_prev = IntPoly::from_ints(&[2]);
    let mut v_cur = y.clone();
    let mut q = IntPoly::constant(h.coeff(m));
    for j in 1..=m {
        q = &q + &v_cur.scale(&h.coeff(m + j));
        if j < m {
            let v_next = &(&y * &v_cur) - &v_prev;
            v_prev = v_cur;
            v_cur = v_next;
        }
    }
    let two = BigRational::from(BigInt::from(2));
    count += 2 * count_real_roots_between(&q, &(-two.clone()), &two);
    count
}

/// Per-root decision against the unit circle.
#[derive(PartialEq, Eq, Clone, Copy)]
enum Disc {
    Outside,
    Inside,
    Undecided,
}

fn decide(root: &RootEnclosure, prec: u32) -> Disc {
    let m = root.modulus_interval(prec);
    let one = crate::dyadic::Dyadic::one();
    if m.lo > one {
        Disc::Outside
    } else if m.hi < one {
        Disc::Inside
    } else {
        Disc::Undecided
    }
}

/// Classify the polynomial's root configuration.
pub fn classify(p: &IntPoly, prec_cap: u32) -> Result<Classification> {
    let degree = p.degree().ok_or(Error::AllZero)?;
    if !p.is_monic() {
        return Err(Error::NotMonic {
            lead: p.leading().clone(),
        });
    }
    let ucount = unit_circle_root_count(p);
    let mut rad_exp: i64 = -64;
    loop {
        let roots = isolate_roots(p, rad_exp, prec_cap)?;
        let prec = (-rad_exp) as u32 + 32;
        let decisions: Vec<Disc> = roots.iter().map(|r| decide(r, prec)).collect();
        let undecided = decisions.iter().filter(|d| **d == Disc::Undecided).count();
        if undecided == ucount {
            return Ok(finish(p, degree, ucount, &roots, &decisions, prec));
        }
        rad_exp *= 2;
        if -rad_exp > prec_cap as i64 {
            return Err(Error::PrecisionExhausted {
                cap_bits: prec_cap,
                context: "separating root moduli from the unit circle".into(),
            });
        }
    }
}

fn finish(
    p: &IntPoly,
    degree: usize,
    ucount: usize,
    roots: &[RootEnclosure],
    decisions: &[Disc],
    prec: u32,
) -> Classification {
    let outside: Vec<usize> = decisions
        .iter()
        .enumerate()
        .filter(|(_, d)| **d == Disc::Outside)
        .map(|(i, _)| i)
        .collect();
    let moduli = roots
        .iter()
        .map(|r| {
            let m = r.modulus_interval(prec);
            let (lo, hi) = m.to_decimal(15);
            [lo, hi]
        })
        .collect();
    let (kind, distinguished) = match outside.as_slice() {
        [] => (Kind::None, None),
        [i] => {
            let r = &roots[*i];
            // A lone outside root must be real: complex roots pair up
            // with equal modulus.
            debug_assert!(r.is_real());
            // |β| > 1 certified, so the sign of the center is the sign
            // of the root.
            if r.center_re().is_positive() {
                if ucount == 0 {
                    (Kind::Pisot, Some(*i))
                } else {
                    (Kind::Salem, Some(*i))
                }
            } else if ucount == 0 {
                (Kind::QuasiPisot, Some(*i))
            } else {
                (Kind::QuasiSalem, Some(*i))
            }
        }
        [i, j] => {
            let (a, b) = (&roots[*i], &roots[*j]);
            if a.is_real() || b.is_real() {
                // Two real roots outside: not a conjugate pair.
                (Kind::None, None)
            } else {
                // Exactly two non-real roots outside are necessarily a
                // conjugate pair. Distinguish the upper-half member.
                let up = if a.center_im().is_positive() { *i } else { *j };
                if ucount == 0 {
                    (Kind::QuasiPisot, Some(up))
                } else {
                    (Kind::QuasiSalem, Some(up))
                }
            }
        }
        _ => (Kind::None, None),
    };
    let distinguished_real = distinguished.map(|i| roots[i].is_real()).unwrap_or(false);
    Classification {
        polynomial: p.to_string(),
        kind,
        degree,
        unit_circle_count: ucount,
        outside_count: outside.len(),
        distinguished_root: distinguished,
        distinguished_real,
        moduli,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_counts() {
        // Golden: no roots on the circle.
        assert_eq!(unit_circle_root_count(&IntPoly::from_ints(&[-1, -1, 1])), 0);
        // Cyclotomic X² + X + 1: both roots on the circle.
        assert_eq!(unit_circle_root_count(&IntPoly::from_ints(&[1, 1, 1])), 2);
        // X² − 1: ±1 both on the circle.
        assert_eq!(unit_circle_root_count(&IntPoly::from_ints(&[-1, 0, 1])), 2);
        // X − 1 and X + 1 singly.
        assert_eq!(unit_circle_root_count(&IntPoly::from_ints(&[-1, 1])), 1);
        assert_eq!(unit_circle_root_count(&IntPoly::from_ints(&[1, 1])), 1);
        // Lehmer: eight of the ten roots are on the circle.
        let lehmer = IntPoly::from_ints(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert_eq!(unit_circle_root_count(&lehmer), 8);
        // Salem quartic X⁴ − X³ − X² − X + 1: two on the circle.
        assert_eq!(
            unit_circle_root_count(&IntPoly::from_ints(&[1, -1, -1, -1, 1])),
            2
        );
        // Octic with two circle pairs.
        let octic = IntPoly::from_ints(&[1, -1, 1, 0, -1, 0, 1, -1, 1]);
        assert_eq!(unit_circle_root_count(&octic), 4);
        // X² + 2: none.
        assert_eq!(unit_circle_root_count(&IntPoly::from_ints(&[2, 0, 1])), 0);
    }

    fn kind_of(coeffs: &[i64]) -> Kind {
        classify(&IntPoly::from_ints(coeffs), 1 << 13).unwrap().kind
    }

    #[test]
    fn pisot_cases() {
        assert_eq!(kind_of(&[-1, -1, 1]), Kind::Pisot); // golden
        assert_eq!(kind_of(&[-2, 1]), Kind::Pisot); // X − 2
        assert_eq!(kind_of(&[-1, -2, 1]), Kind::Pisot); // silver 1+√2
    }

    #[test]
    fn quasi_pisot_cases() {
        // X + 2: β = −2, real negative.
        assert_eq!(kind_of(&[2, 1]), Kind::QuasiPisot);
        // Negated golden: roots −φ and φ − 1.
        assert_eq!(kind_of(&[-1, 1, 1]), Kind::QuasiPisot);
        // Complex pair ±i√2 outside, nothing else.
        assert_eq!(kind_of(&[2, 0, 1]), Kind::QuasiPisot);
    }

    #[test]
    fn salem_cases() {
        let lehmer = &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];
        assert_eq!(kind_of(lehmer), Kind::Salem);
        assert_eq!(kind_of(&[1, -1, -1, -1, 1]), Kind::Salem);
    }

    #[test]
    fn quasi_salem_octic() {
        let c = classify(&IntPoly::from_ints(&[1, -1, 1, 0, -1, 0, 1, -1, 1]), 1 << 13).unwrap();
        assert_eq!(c.kind, Kind::QuasiSalem);
        assert_eq!(c.unit_circle_count, 4);
        assert_eq!(c.outside_count, 2);
        assert!(!c.distinguished_real);
        let idx = c.distinguished_root.unwrap();
        // The distinguished root is the upper-half member of the pair.
        assert!(idx <= 1);
    }

    #[test]
    fn none_cases() {
        // Cyclotomic: everything on the circle.
        assert_eq!(kind_of(&[1, 1, 1]), Kind::None);
        // X² − 4: two real roots outside, not a conjugate pair.
        assert_eq!(kind_of(&[-4, 0, 1]), Kind::None);
        // (X²−3X+1)(X²+3X+1) = X⁴ − 7X² + 1: two reciprocal real pairs,
        // outside roots 2.618 and −2.618 are not conjugates.
        assert_eq!(kind_of(&[1, 0, -7, 0, 1]), Kind::None);
    }

    #[test]
    fn classification_record_contents() {
        let c = classify(&IntPoly::from_ints(&[-1, -1, 1]), 1 << 13).unwrap();
        assert_eq!(c.kind, Kind::Pisot);
        assert_eq!(c.degree, 2);
        assert_eq!(c.unit_circle_count, 0);
        assert_eq!(c.outside_count, 1);
        assert_eq!(c.distinguished_root, Some(0));
        assert!(c.distinguished_real);
        assert_eq!(c.moduli.len(), 2);
        // First root's modulus interval encloses φ ≈ 1.618.
        let lo: f64 = c.moduli[0][0].parse().unwrap();
        let hi: f64 = c.moduli[0][1].parse().unwrap();
        assert!(lo <= 1.61804 && 1.61803 <= hi);
        // JSON serialization works.
        let js = serde_json::to_string(&c).unwrap();
        assert!(js.contains("\"kind\":\"Pisot\""));
    }
}
