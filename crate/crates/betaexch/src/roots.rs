//! Certified root enclosures for monic squarefree integer polynomials.
//!
//! The pipeline is: seed all roots at once with a floating-point Aberth
//! iteration, polish in exact dyadic arithmetic with Newton steps, then
//! certify with Weierstrass discs. For candidates `z_1, …, z_d` and
//! `W_i = p(z_i) / ∏_{j≠i}(z_i − z_j)`, Lagrange interpolation of `p` at
//! the candidates shows every root lies in `⋃_i D(z_i, d·|W_i|)`, and a
//! homotopy argument shows a connected component made of `k` discs holds
//! exactly `k` roots. When all discs are pairwise disjoint, each holds
//! exactly one root. Real roots are recognised by exact conjugation
//! symmetry: a disc with real center maps to itself under conjugation, so
//! its unique root is fixed, hence real. Candidates are snapped to the
//! real axis (exactly as many as the Sturm real-root count) and the rest
//! are stored as exact conjugate mirror pairs, so realness and
//! non-realness are both certified, never assumed from the float seed.
//!
//! Nothing here trusts the float phase: a bad seed only makes
//! certification fail, which escalates the working precision and
//! ultimately surfaces as a precision-exhausted error.

use crate::ball::{ComplexBall, RealInterval};
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::poly::{IntPoly, RatPoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// A certified enclosure of a single simple root.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    center_re: Dyadic,
    center_im: Dyadic,
    radius: Dyadic,
    real: bool,
}

impl RootEnclosure {
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn center_re(&self) -> &Dyadic {
        &self.center_re
    }

    pub fn center_im(&self) -> &Dyadic {
        &self.center_im
    }

    pub fn radius(&self) -> &Dyadic {
        &self.radius
    }

    pub fn ball(&self) -> ComplexBall {
        ComplexBall::new(self.center_re.clone(), self.center_im.clone(), self.radius.clone())
    }

    /// For a real root, the certified interval containing it.
    pub fn real_interval(&self) -> Option<RealInterval> {
        if self.real {
            Some(RealInterval::new(
                self.center_re.sub(&self.radius),
                self.center_re.add(&self.radius),
            ))
        } else {
            None
        }
    }

    /// Certified enclosure of the root's modulus.
    pub fn modulus_interval(&self, prec: u32) -> RealInterval {
        self.ball().modulus(prec)
    }

    /// Exact squared modulus of the center (used for canonical ordering).
    pub fn center_mod_sq(&self) -> Dyadic {
        self.center_re.mul(&self.center_re).add(&self.center_im.mul(&self.center_im))
    }
}

/// Exact evaluation of an integer polynomial at a dyadic point.
pub fn eval_exact_real(p: &IntPoly, x: &Dyadic) -> Dyadic {
    let mut acc = Dyadic::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&Dyadic::from_bigint(c));
    }
    acc
}

/// Exact evaluation of an integer polynomial at an exact complex dyadic
/// point, returned as (re, im).
pub fn eval_exact_complex(p: &IntPoly, re: &Dyadic, im: &Dyadic) -> (Dyadic, Dyadic) {
    let mut ar = Dyadic::zero();
    let mut ai = Dyadic::zero();
    for c in p.coeffs().iter().rev() {
        let nr = ar.mul(re).sub(&ai.mul(im)).add(&Dyadic::from_bigint(c));
        let ni = ar.mul(im).add(&ai.mul(re));
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}

/// Sign of `p` at an exact dyadic point.
pub fn sign_at(p: &IntPoly, x: &Dyadic) -> i32 {
    eval_exact_real(p, x).signum()
}

// ---------------------------------------------------------------------------
// Sturm counting
// ---------------------------------------------------------------------------

/// Divide by the content only (no sign normalisation): Sturm chains need
/// positive scaling to preserve sign sequences.
fn to_int_positive_scale(rp: &RatPoly) -> IntPoly {
    if rp.is_zero_poly() {
        return IntPoly::zero_poly();
    }
    let mut l = BigInt::from(1);
    for c in rp.coeffs() {
        l = num_integer::lcm(l, c.denom().clone());
    }
    let l = l.abs();
    let ints: Vec<BigInt> = rp
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let ip = IntPoly::new(ints);
    let content = ip.content();
    if content.is_zero() || content == BigInt::from(1) {
        ip
    } else {
        IntPoly::new(ip.coeffs().iter().map(|c| c / &content).collect())
    }
}

/// Sturm chain of `p` with integer primitive elements (positive scaling
/// only, so the sign sequences match the rational chain).
pub fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = Vec::new();
    let f0 = to_int_positive_scale(&p.to_rational());
    if f0.is_zero_poly() {
        return chain;
    }
    chain.push(f0.clone());
    if f0.degree() == Some(0) {
        return chain;
    }
    let mut prev = f0.to_rational();
    let mut cur = p.to_rational().derivative();
    while !cur.is_zero_poly() {
        chain.push(to_int_positive_scale(&cur));
        let (_, r) = prev.div_rem(&cur);
        prev = cur;
        cur = -&r;
    }
    chain
}

fn variations(signs: impl IntoIterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at_rational(chain: &[IntPoly], x: &BigRational) -> usize {
    variations(chain.iter().map(|f| {
        let v = f.to_rational().eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }))
}

fn variations_at_infinity(chain: &[IntPoly], positive: bool) -> usize {
    variations(chain.iter().map(|f| {
        let lead = f.leading();
        let mut s = if lead.is_positive() {
            1
        } else if lead.is_negative() {
            -1
        } else {
            0
        };
        if !positive && f.degree_or_zero() % 2 == 1 {
            s = -s;
        }
        s
    }))
}

/// Number of distinct real roots of `p`.
pub fn real_root_count(p: &IntPoly) -> usize {
    let chain = sturm_chain(p);
    if chain.is_empty() || p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    variations_at_infinity(&chain, false) - variations_at_infinity(&chain, true)
}

/// Number of distinct real roots in the open interval `(a, b)`.
/// Requires `p(a) ≠ 0` and `p(b) ≠ 0`.
pub fn count_real_roots_between(p: &IntPoly, a: &BigRational, b: &BigRational) -> usize {
    assert!(a < b, "empty interval");
    let pa = p.to_rational().eval(a);
    let pb = p.to_rational().eval(b);
    assert!(
        !pa.is_zero() && !pb.is_zero(),
        "interval endpoints must not be roots"
    );
    let chain = sturm_chain(p);
    variations_at_rational(&chain, a) - variations_at_rational(&chain, b)
}

// ---------------------------------------------------------------------------
// Float seeding (heuristic only; certified downstream)
// ---------------------------------------------------------------------------

fn eval_c64(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + Complex64::new(c, 0.0);
    }
    (v, dv)
}

/// Simultaneous root approximation (Aberth–Ehrlich, Gauss–Seidel order).
/// Deterministic: fixed seeds, fixed iteration order, fixed stop rule.
fn aberth_seeds(p: &IntPoly) -> Option<Vec<Complex64>> {
    let d = p.degree()?;
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let lead = coeffs[d];
    let bound = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0_f64, f64::max);
    let radius = 0.7 * bound + 0.3;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64) / (d as f64) + 0.4 / (d as f64) + 0.17;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..400 {
        let mut largest = 0.0_f64;
        for i in 0..d {
            let (v, dv) = eval_c64(&coeffs, z[i]);
            if !v.is_finite() || !dv.is_finite() {
                return None;
            }
            let w = if dv.norm() > 0.0 { v / dv } else { v };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() < 1e-300 {
                        return None;
                    }
                    s += diff.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let corr = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= corr;
            let rel = corr.norm() / (1.0 + z[i].norm());
            largest = largest.max(rel);
        }
        if largest < 1e-14 {
            break;
        }
    }
    Some(z)
}

// ---------------------------------------------------------------------------
// Candidate structure with exact conjugate symmetry
// ---------------------------------------------------------------------------

/// Upper-half and real candidates; lower-half mirrors are implicit.
struct Candidates {
    /// Exactly the Sturm real-root count of these.
    real: Vec<Dyadic>,
    /// Strictly-upper-half candidates (re, im) with `im > 0` intended.
    upper: Vec<(Dyadic, Dyadic)>,
}

impl Candidates {
    /// All `d` candidates: reals, then each upper paired with its mirror.
    fn all(&self) -> Vec<(Dyadic, Dyadic)> {
        let mut v: Vec<(Dyadic, Dyadic)> = self
            .real
            .iter()
            .map(|r| (r.clone(), Dyadic::zero()))
            .collect();
        for (re, im) in &self.upper {
            v.push((re.clone(), im.clone()));
            v.push((re.clone(), im.neg()));
        }
        v
    }
}

fn build_candidates(seeds: &[Complex64], real_count: usize) -> Option<Candidates> {
    let d = seeds.len();
    if (d - real_count) % 2 != 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        seeds[a]
            .im
            .abs()
            .partial_cmp(&seeds[b].im.abs())
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let real: Vec<Dyadic> = order[..real_count]
        .iter()
        .map(|&i| Dyadic::from_f64(seeds[i].re))
        .collect::<Option<Vec<_>>>()?;
    let mut rest: Vec<Complex64> = order[real_count..].iter().map(|&i| seeds[i]).collect();
    let mut upper = Vec::new();
    while let Some(pos) = rest.iter().position(|z| z.im > 0.0) {
        let z = rest.swap_remove(pos);
        // Nearest remaining candidate to the conjugate is the mirror.
        let (pi, _) = rest
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - z.conj())
                    .norm()
                    .partial_cmp(&(*b - z.conj()).norm())
                    .unwrap_or(Ordering::Equal)
            })?;
        let w = rest.swap_remove(pi);
        let re = 0.5 * (z.re + w.re);
        let im = 0.5 * (z.im - w.im).abs();
        if im <= 0.0 {
            return None;
        }
        upper.push((Dyadic::from_f64(re)?, Dyadic::from_f64(im)?));
    }
    if !rest.is_empty() {
        return None;
    }
    Some(Candidates { real, upper })
}

// ---------------------------------------------------------------------------
// Dyadic Newton polish (heuristic only; certified downstream)
// ---------------------------------------------------------------------------

fn newton_polish_real(p: &IntPoly, dp: &IntPoly, x: &Dyadic, prec: u32) -> Dyadic {
    let mut z = x.round(prec, Round::Down);
    for _ in 0..3 {
        let v = eval_exact_real(p, &z);
        if v.is_zero() {
            return z;
        }
        let dv = eval_exact_real(dp, &z);
        if dv.is_zero() {
            return z;
        }
        let step = v.div(&dv, prec, Round::Down);
        z = z.sub(&step).round(prec, Round::Down);
    }
    z
}

fn newton_polish_complex(
    p: &IntPoly,
    dp: &IntPoly,
    re: &Dyadic,
    im: &Dyadic,
    prec: u32,
) -> (Dyadic, Dyadic) {
    let mut zr = re.round(prec, Round::Down);
    let mut zi = im.round(prec, Round::Down);
    for _ in 0..3 {
        let (vr, vi) = eval_exact_complex(p, &zr, &zi);
        if vr.is_zero() && vi.is_zero() {
            return (zr, zi);
        }
        let (dr, di) = eval_exact_complex(dp, &zr, &zi);
        let den = dr.mul(&dr).add(&di.mul(&di));
        if den.is_zero() {
            return (zr, zi);
        }
        // (v / dv) = (v · conj(dv)) / |dv|².
        let nr = vr.mul(&dr).add(&vi.mul(&di));
        let ni = vi.mul(&dr).sub(&vr.mul(&di));
        let sr = nr.div(&den, prec, Round::Down);
        let si = ni.div(&den, prec, Round::Down);
        zr = zr.sub(&sr).round(prec, Round::Down);
        zi = zi.sub(&si).round(prec, Round::Down);
    }
    (zr, zi)
}

// ---------------------------------------------------------------------------
// Weierstrass certification
// ---------------------------------------------------------------------------

/// Try to certify the candidate set at the given precision. Returns the
/// enclosures on success.
fn certify(p: &IntPoly, cands: &Candidates, prec: u32, rad_exp: i64) -> Option<Vec<RootEnclosure>> {
    let all = cands.all();
    let d = all.len();
    let wprec = 2 * prec + 32;
    let degree = Dyadic::from_int(d as i64);
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let (zr, zi) = &all[i];
        let (vr, vi) = eval_exact_complex(p, zr, zi);
        if vr.is_zero() && vi.is_zero() {
            radii.push(Dyadic::zero());
            continue;
        }
        // Exact denominator ∏_{j≠i}(z_i − z_j).
        let mut dr = Dyadic::one();
        let mut di = Dyadic::zero();
        for (j, (wr, wi)) in all.iter().enumerate() {
            if j == i {
                continue;
            }
            let er = zr.sub(wr);
            let ei = zi.sub(wi);
            if er.is_zero() && ei.is_zero() {
                return None; // coincident candidates
            }
            let nr = dr.mul(&er).sub(&di.mul(&ei));
            let ni = dr.mul(&ei).add(&di.mul(&er));
            dr = nr;
            di = ni;
        }
        // Upper bound on |W_i| = |p(z_i)| / |∏(z_i − z_j)| from exact
        // moduli with directed rounding.
        let num_mod = ComplexBall::exact_point(vr, vi).modulus(wprec);
        let den_mod = ComplexBall::exact_point(dr, di).modulus(wprec);
        if !den_mod.lo.is_positive() {
            return None;
        }
        let wmod = num_mod.hi.div(&den_mod.lo, wprec, Round::Up);
        let radius = degree.mul(&wmod).round(wprec, Round::Up);
        radii.push(radius);
    }
    // Radius target.
    let target = Dyadic::pow2(rad_exp);
    if radii.iter().any(|r| *r > target) {
        return None;
    }
    // Pairwise disjoint: |z_i − z_j|² > (R_i + R_j)², exact comparison.
    for i in 0..d {
        for j in (i + 1)..d {
            let dre = all[i].0.sub(&all[j].0);
            let dim = all[i].1.sub(&all[j].1);
            let dist_sq = dre.mul(&dre).add(&dim.mul(&dim));
            let rsum = radii[i].add(&radii[j]);
            if dist_sq <= rsum.mul(&rsum) {
                return None;
            }
        }
    }
    // Realness certificates.
    let n_real = cands.real.len();
    let mut out = Vec::with_capacity(d);
    for i in 0..n_real {
        let c = &all[i].0;
        let r = &radii[i];
        if !r.is_zero() {
            // Independent sign-change certificate for the real interval.
            let s1 = sign_at(p, &c.sub(r));
            let s2 = sign_at(p, &c.add(r));
            if s1 * s2 >= 0 {
                return None;
            }
        }
        out.push(RootEnclosure {
            center_re: c.clone(),
            center_im: Dyadic::zero(),
            radius: r.clone(),
            real: true,
        });
    }
    for k in 0..cands.upper.len() {
        let iu = n_real + 2 * k;
        let il = iu + 1;
        // Strictly off-axis: |im| − R > 0 for both mirror discs.
        for &idx in &[iu, il] {
            if all[idx].1.abs() <= radii[idx] {
                return None;
            }
            out.push(RootEnclosure {
                center_re: all[idx].0.clone(),
                center_im: all[idx].1.clone(),
                radius: radii[idx].clone(),
                real: false,
            });
        }
    }
    Some(out)
}

/// Exact comparator implementing the canonical order: descending center
/// modulus, ties by ascending argument in `(−π, π]`.
fn canonical_cmp(a: &RootEnclosure, b: &RootEnclosure) -> Ordering {
    let ma = a.center_mod_sq();
    let mb = b.center_mod_sq();
    match mb.cmp(&ma) {
        Ordering::Equal => {}
        o => return o,
    }
    // Argument classes in ascending order: (−π,0), {0}, (0,π), {π}.
    let class = |e: &RootEnclosure| -> u8 {
        if e.center_im.is_negative() {
            0
        } else if e.center_im.is_zero() {
            if e.center_re.is_negative() {
                3
            } else {
                1
            }
        } else {
            2
        }
    };
    let (ca, cb) = (class(a), class(b));
    match ca.cmp(&cb) {
        Ordering::Equal => {}
        o => return o,
    }
    if ca == 0 || ca == 2 {
        // Same open half-plane: arg(a) < arg(b) iff cross(a, b) > 0.
        let cross = a
            .center_re
            .mul(&b.center_im)
            .sub(&a.center_im.mul(&b.center_re));
        return if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        };
    }
    Ordering::Equal
}

/// Isolate all roots of a monic squarefree integer polynomial with
/// certified enclosures of radius at most `2^rad_exp`, escalating the
/// working precision up to `prec_cap` bits.
pub fn isolate_roots(p: &IntPoly, rad_exp: i64, prec_cap: u32) -> Result<Vec<RootEnclosure>> {
    let d = p.degree().ok_or(Error::AllZero)?;
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        // Monic linear: the root −c₀ is exact.
        let root = Dyadic::from_bigint(&(-p.coeff(0)));
        return Ok(vec![RootEnclosure {
            center_re: root,
            center_im: Dyadic::zero(),
            radius: Dyadic::zero(),
            real: true,
        }]);
    }
    let seeds = aberth_seeds(p).ok_or_else(|| Error::PrecisionExhausted {
        cap_bits: prec_cap,
        context: "floating-point root seeding failed".into(),
    })?;
    let r = real_root_count(p);
    let mut cands = build_candidates(&seeds, r).ok_or_else(|| Error::PrecisionExhausted {
        cap_bits: prec_cap,
        context: "conjugate pairing of root seeds failed".into(),
    })?;
    let dp = p.derivative();
    let mut prec: u32 = 64.min(prec_cap.max(8));
    loop {
        // Polish at this precision, keeping exact symmetry.
        cands.real = cands
            .real
            .iter()
            .map(|x| newton_polish_real(p, &dp, x, prec))
            .collect();
        cands.upper = cands
            .upper
            .iter()
            .map(|(re, im)| newton_polish_complex(p, &dp, re, im, prec))
            .collect();
        if let Some(mut out) = certify(p, &cands, prec, rad_exp) {
            out.sort_by(canonical_cmp);
            return Ok(out);
        }
        if prec >= prec_cap {
            return Err(Error::PrecisionExhausted {
                cap_bits: prec_cap,
                context: format!("root certification for degree {d} polynomial"),
            });
        }
        prec = (prec * 2).min(prec_cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn lehmer() -> IntPoly {
        IntPoly::from_ints(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    #[test]
    fn exact_evaluation() {
        let p = IntPoly::from_ints(&[-1, -1, 1]);
        assert_eq!(eval_exact_real(&p, &Dyadic::from_int(2)), Dyadic::from_int(1));
        assert_eq!(sign_at(&p, &Dyadic::from_int(2)), 1);
        assert_eq!(sign_at(&p, &Dyadic::from_int(1)), -1);
        // p(i) for p = X² + 2 is 1.
        let q = IntPoly::from_ints(&[2, 0, 1]);
        let (re, im) = eval_exact_complex(&q, &Dyadic::zero(), &Dyadic::from_int(1));
        assert_eq!(re, Dyadic::from_int(1));
        assert!(im.is_zero());
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(real_root_count(&IntPoly::from_ints(&[-1, -1, 1])), 2);
        assert_eq!(real_root_count(&IntPoly::from_ints(&[2, 0, 1])), 0);
        assert_eq!(real_root_count(&IntPoly::from_ints(&[-2, 0, 0, 1])), 1);
        assert_eq!(real_root_count(&lehmer()), 2);
        let golden = IntPoly::from_ints(&[-1, -1, 1]);
        assert_eq!(count_real_roots_between(&golden, &rat(0, 1), &rat(2, 1)), 1);
        assert_eq!(count_real_roots_between(&golden, &rat(-1, 1), &rat(0, 1)), 1);
        assert_eq!(count_real_roots_between(&golden, &rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(count_real_roots_between(&golden, &rat(-2, 1), &rat(-1, 1)), 0);
    }

    #[test]
    fn golden_roots_certified() {
        let p = IntPoly::from_ints(&[-1, -1, 1]);
        let roots = isolate_roots(&p, -80, 1 << 14).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.is_real()));
        // Sorted by descending modulus: φ first, then 1 − φ.
        let iv0 = roots[0].real_interval().unwrap();
        let iv1 = roots[1].real_interval().unwrap();
        // φ = 1.6180339887498948…
        assert!(iv0.contains_rational(&rat(1_618_033_988, 1_000_000_000)) || {
            // The interval is tiny; it must at least sit inside the
            // bracketing rationals.
            iv0.lo.to_rational() > rat(1_618_033_988, 1_000_000_000)
                && iv0.hi.to_rational() < rat(1_618_033_989, 1_000_000_000)
        });
        assert!(iv1.lo.to_rational() > rat(-619, 1000));
        assert!(iv1.hi.to_rational() < rat(-618, 1000));
        assert!(roots[0].radius().to_f64() <= 2f64.powi(-80));
    }

    #[test]
    fn pure_imaginary_pair_certified() {
        let p = IntPoly::from_ints(&[2, 0, 1]);
        let roots = isolate_roots(&p, -80, 1 << 14).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| !r.is_real()));
        // Equal center moduli (exact mirror), so order is by argument:
        // the lower-half root (arg −π/2) precedes the upper-half root.
        assert!(roots[0].center_im().is_negative());
        assert!(roots[1].center_im().is_positive());
        // The upper center's imaginary part squares to ≈ 2.
        let im = roots[1].center_im();
        let err = im.mul(im).sub(&Dyadic::from_int(2)).abs();
        assert!(err.to_f64() < 1e-20);
        // Real parts enclose 0.
        let ball = roots[1].ball();
        assert!(ball.real_interval().contains(&Dyadic::zero()));
    }

    #[test]
    fn exact_linear_and_integer_roots() {
        let p = IntPoly::from_ints(&[-2, 1]);
        let roots = isolate_roots(&p, -10, 256).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].is_real());
        assert!(roots[0].radius().is_zero());
        assert_eq!(roots[0].center_re(), &Dyadic::from_int(2));

        let q = IntPoly::from_ints(&[-4, 0, 1]);
        let roots = isolate_roots(&q, -60, 1 << 14).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.is_real()));
        let mut centers: Vec<f64> = roots.iter().map(|r| r.center_re().to_f64()).collect();
        centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((centers[0] + 2.0).abs() < 1e-15);
        assert!((centers[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lehmer_roots_certified() {
        let p = lehmer();
        let roots = isolate_roots(&p, -60, 1 << 14).unwrap();
        assert_eq!(roots.len(), 10);
        assert_eq!(roots.iter().filter(|r| r.is_real()).count(), 2);
        // Largest modulus root is the real one ≈ 1.17628.
        assert!(roots[0].is_real());
        let iv = roots[0].real_interval().unwrap();
        assert!(iv.lo.to_rational() > rat(117, 100));
        assert!(iv.hi.to_rational() < rat(118, 100));
        // Its reciprocal partner ≈ 0.85014 is also real and has the
        // smallest modulus, hence sorts last.
        assert!(roots[9].is_real());
        let iv = roots[9].real_interval().unwrap();
        assert!(iv.lo.to_rational() > rat(85, 100));
        assert!(iv.hi.to_rational() < rat(851, 1000));
        // The eight others pair off the real axis with modulus straddling 1.
        for r in &roots[1..9] {
            assert!(!r.is_real());
            let m = r.modulus_interval(96);
            assert!(m.contains(&Dyadic::from_int(1)));
        }
    }

    #[test]
    fn precision_cap_respected() {
        let p = IntPoly::from_ints(&[-1, -1, 1]);
        match isolate_roots(&p, -4000, 128) {
            Err(Error::PrecisionExhausted { cap_bits, .. }) => assert_eq!(cap_bits, 128),
            other => panic!("expected PrecisionExhausted, got {other:?}"),
        }
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let p = lehmer();
        let a = isolate_roots(&p, -60, 1 << 14).unwrap();
        let b = isolate_roots(&p, -60, 1 << 14).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.center_re(), y.center_re());
            assert_eq!(x.center_im(), y.center_im());
        }
    }
}
