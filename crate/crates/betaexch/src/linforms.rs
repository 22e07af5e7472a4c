//! Linear forms attached to an exchange sequence.
//!
//! Given reduced digits with vanishing weighted sum `Σ_k Ã_k ξ̃^k = 0` and a
//! unit `π`, the scaled coefficients
//!
//! ```text
//!   B_k = Ã_k (β − 1)^{D−k} / π,          0 ≤ k ≤ D,
//! ```
//!
//! must be algebraic integers for `1 ≤ k ≤ D` (the integrality hypothesis),
//! while `B_0 β^n` must stay non-integral for every `n ≥ 1` (the
//! non-integrality hypothesis). The shifted linear forms
//!
//! ```text
//!   Y_R = Σ_{k=1}^{D} B_k Σ_{m≥1} β^{−m} ρ(k; m+R)
//!       = −B_0 β^R − Σ_{k=1}^{D} B_k Σ_{j=0}^{R} β^{R−j} ρ(k; j)
//! ```
//!
//! are exact field elements, where `ρ(k; m)` is the k-fold convolution of the
//! exchange sequence. Strictly inside a gap of the (D−1)-fold sumset the
//! forms obey the division-free recursion `β·Y_{R−1} = B_D ρ(D; R) + Y_R`,
//! which forces `|Y_R| ≥ |B_D| / (2|β|)` at many shifts; counting the shifts
//! above that threshold is what drives the digit-exchange lower bound.
//!
//! Everything here is exact except the final threshold comparison, which is
//! certified by interval refinement (with an exact subfield fallback when the
//! embedding is real, so that exact ties are decided rather than reported as
//! failures).

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::ball::RealInterval;
use crate::dyadic::{Dyadic, Round};
use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::exchange::{ExchangeData, Sumset};
use crate::field::{companion_step_mod, FieldElement, NumberField};

/// The scaled relation coefficients `B_0, …, B_D`.
#[derive(Clone, Debug)]
pub struct BCoefficients {
    b: Vec<FieldElement>,
}

/// Compute `B_k = Ã_k (β − 1)^{D−k} / π` from the reduced coefficients and
/// check the integrality hypothesis: `B_k` must be an algebraic integer for
/// every `1 ≤ k ≤ D`. (`B_0` is deliberately exempt; its non-integrality is
/// the subject of [`check_hypothesis_iii`].)
pub fn compute_b(a_tilde: &[FieldElement], pi: &FieldElement) -> Result<BCoefficients> {
    if a_tilde.len() < 2 {
        return Err(Error::InvalidConfig {
            what: "coefficient list must have length D + 1 ≥ 2".into(),
        });
    }
    let d = a_tilde.len() - 1;
    if a_tilde[d].is_zero() {
        return Err(Error::InvalidConfig {
            what: "leading relation coefficient A_D must be nonzero".into(),
        });
    }
    if pi.is_zero() {
        return Err(Error::InvalidConfig {
            what: "unit π must be nonzero".into(),
        });
    }
    let field = a_tilde[0].field().clone();
    let pi_inv = pi.inv()?;
    let beta_minus_one = field.beta().sub(&field.one());
    // Powers (β − 1)^j for j = 0..=D.
    let mut pows = Vec::with_capacity(d + 1);
    pows.push(field.one());
    for j in 1..=d {
        let prev: &FieldElement = &pows[j - 1];
        pows.push(prev.mul(&beta_minus_one));
    }
    let mut b = Vec::with_capacity(d + 1);
    for (k, ak) in a_tilde.iter().enumerate() {
        b.push(ak.mul(&pows[d - k]).mul(&pi_inv));
    }
    for (k, bk) in b.iter().enumerate().skip(1) {
        if !bk.is_integral() {
            return Err(Error::HypothesisIiViolated { k });
        }
    }
    Ok(BCoefficients { b })
}

impl BCoefficients {
    /// Degree `D` of the relation.
    pub fn d(&self) -> usize {
        self.b.len() - 1
    }

    /// All coefficients `B_0, …, B_D` in order.
    pub fn all(&self) -> &[FieldElement] {
        &self.b
    }

    /// Coefficient `B_k`.
    pub fn b(&self, k: usize) -> &FieldElement {
        &self.b[k]
    }

    /// Constant coefficient `B_0`.
    pub fn b0(&self) -> &FieldElement {
        &self.b[0]
    }

    /// Leading coefficient `B_D` (nonzero by construction).
    pub fn b_d(&self) -> &FieldElement {
        &self.b[self.b.len() - 1]
    }

    /// The field the coefficients live in.
    pub fn field(&self) -> &Arc<NumberField> {
        self.b[0].field()
    }

    /// The element `B_D / (2β)`, whose absolute value at the embedding is
    /// the recursion threshold `|B_D| / (2|β|)`.
    pub fn threshold_element(&self) -> Result<FieldElement> {
        let field = self.field();
        let two_beta = field.beta().mul_rational(&BigRational::from_integer(BigInt::from(2)));
        self.b_d().div(&two_beta)
    }
}

/// Outcome of the exact non-integrality decision for `B_0`.
#[derive(Clone, Debug)]
pub struct HypothesisIiiReport {
    /// True when `B_0 β^n` is non-integral for every `n ≥ 1`.
    pub holds: bool,
    /// Least `n ≥ 1` with `B_0 β^n` integral, when the hypothesis fails.
    pub witness: Option<u64>,
    /// Whether `B_0` itself (the `n = 0` case, not part of the hypothesis)
    /// is integral. Reported separately for diagnostics.
    pub integral_at_zero: bool,
    /// Denominator modulus `q` used for the residue orbit.
    pub modulus: BigInt,
    /// Number of orbit steps examined before the decision.
    pub steps: u64,
}

/// Decide the non-integrality hypothesis exactly.
///
/// With `q` the least common denominator of `B_0`'s coordinates, `B_0 β^n`
/// is integral exactly when the coordinate vector of `q B_0 β^n` vanishes
/// mod `q`. Multiplication by `β` acts on integer coordinates through the
/// companion matrix of the defining polynomial, so the residues form an
/// eventually periodic orbit in `(Z/q)^d`; following it to its first repeat
/// decides every `n ≥ 1` at once. Terminates after at most `q^d` steps, in
/// practice at cycle closure.
pub fn check_hypothesis_iii(b0: &FieldElement) -> HypothesisIiiReport {
    let field = b0.field();
    let (q, coords) = b0.scaled_integer_coords();
    if q.is_one() {
        // B_0 is already integral, so B_0 β is an integer combination of
        // basis powers: the hypothesis fails immediately.
        return HypothesisIiiReport {
            holds: false,
            witness: Some(1),
            integral_at_zero: true,
            modulus: q,
            steps: 0,
        };
    }
    let cols = field.companion_columns();
    let mut v: Vec<BigInt> = coords
        .iter()
        .map(|c| num_integer::Integer::mod_floor(c, &q))
        .collect();
    let mut seen: HashMap<Vec<BigInt>, u64> = HashMap::new();
    seen.insert(v.clone(), 0);
    let mut n: u64 = 0;
    loop {
        v = companion_step_mod(&cols, &v, &q);
        n += 1;
        if v.iter().all(Zero::is_zero) {
            return HypothesisIiiReport {
                holds: false,
                witness: Some(n),
                integral_at_zero: false,
                modulus: q,
                steps: n,
            };
        }
        if seen.contains_key(&v) {
            // Orbit closed without ever reaching the zero residue: no
            // exponent n ≥ 1 can make B_0 β^n integral.
            return HypothesisIiiReport {
                holds: true,
                witness: None,
                integral_at_zero: false,
                modulus: q,
                steps: n,
            };
        }
        seen.insert(v.clone(), n);
    }
}

/// Table of the k-fold convolutions `ρ(k; m)` of an exchange sequence,
/// for `1 ≤ k ≤ D` and `0 ≤ m ≤ m_max`:
///
/// ```text
///   ρ(k; m) = Σ_{m_1 + … + m_k = m, m_i ∈ Γ} s_{m_1} ⋯ s_{m_k}.
/// ```
///
/// Values are stored as `i64`; construction verifies up front that the a
/// priori bound `(2T(m_max + 1))^D` fits, which also bounds every partial
/// sum of the convolution.
#[derive(Clone, Debug)]
pub struct RhoTable {
    d: usize,
    m_max: usize,
    /// `rows[k − 1][m] = ρ(k; m)`.
    rows: Vec<Vec<i64>>,
}

impl RhoTable {
    /// Build the table by iterated sparse convolution against the support.
    pub fn build(e: &ExchangeData, d: usize, m_max: usize) -> Result<RhoTable> {
        if d == 0 {
            return Err(Error::InvalidConfig {
                what: "convolution order D must be at least 1".into(),
            });
        }
        if m_max >= e.len() {
            return Err(Error::HorizonExceeded {
                index: m_max,
                horizon: e.len().saturating_sub(1),
            });
        }
        // |ρ(k; m)| and all its partial sums are at most (2T(m+1))^k.
        let two_t = BigInt::from(2) * e.bound();
        let a_priori = (&two_t * BigInt::from(m_max as u64 + 1)).pow(d as u32);
        if a_priori > BigInt::from(i64::MAX) {
            return Err(Error::OutOfRange {
                what: format!(
                    "convolution bound (2T(m+1))^D = {a_priori} exceeds the i64 range"
                ),
            });
        }
        let s: Vec<i64> = e.s()[..=m_max]
            .iter()
            .map(|x| {
                x.to_i64().ok_or(Error::OutOfRange {
                    what: "exchange value does not fit in i64".into(),
                })
            })
            .collect::<Result<_>>()?;
        let support: Vec<usize> = e
            .support()
            .iter()
            .copied()
            .take_while(|&j| j <= m_max)
            .collect();
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(d);
        rows.push(s.clone());
        for _ in 2..=d {
            let prev = rows.last().unwrap();
            let mut acc = vec![0i128; m_max + 1];
            for &j in &support {
                let sj = s[j] as i128;
                for m in j..=m_max {
                    acc[m] += prev[m - j] as i128 * sj;
                }
            }
            let row: Vec<i64> = acc
                .into_iter()
                .map(|x| {
                    i64::try_from(x).map_err(|_| Error::OutOfRange {
                        what: "convolution value overflowed its a priori bound".into(),
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        Ok(RhoTable { d, m_max, rows })
    }

    /// Convolution order bound `D`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Largest tabulated index.
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// `ρ(k; m)` for `1 ≤ k ≤ D`, `m ≤ m_max`.
    pub fn rho(&self, k: usize, m: usize) -> Result<i64> {
        if k == 0 || k > self.d {
            return Err(Error::OutOfRange {
                what: format!("convolution order k = {k} outside 1..={}", self.d),
            });
        }
        if m > self.m_max {
            return Err(Error::HorizonExceeded {
                index: m,
                horizon: self.m_max,
            });
        }
        Ok(self.rows[k - 1][m])
    }

    /// Full row `ρ(k; ·)`.
    pub fn row(&self, k: usize) -> &[i64] {
        &self.rows[k - 1]
    }
}

/// `Y_R` from the closed form
/// `−B_0 β^R − Σ_{k=1}^{D} B_k Σ_{j=0}^{R} β^{R−j} ρ(k; j)`,
/// evaluated exactly by a single Horner pass in `β`.
///
/// The accumulator is a coordinate vector of integers over one common
/// denominator, so each Horner step is gcd-free; the single rational
/// normalization happens once at the end. (Coordinate numerators grow
/// linearly in `R`, and per-step rational reduction would make large
/// samples quadratic in `R`.)
pub fn y_r_closed(b: &BCoefficients, rho: &RhoTable, r: usize) -> Result<FieldElement> {
    let field = b.field();
    let deg = field.degree();
    let d = b.d();
    let mut scale = b.b0().denominator_lcm();
    for k in 1..=d {
        scale = num_integer::Integer::lcm(&scale, &b.b(k).denominator_lcm());
    }
    let scale_rat = BigRational::from_integer(scale.clone());
    let int_vec = |x: &FieldElement| -> Vec<BigInt> {
        x.coords().iter().map(|c| (c * &scale_rat).to_integer()).collect()
    };
    let bk_int: Vec<Vec<BigInt>> = (1..=d).map(|k| int_vec(b.b(k))).collect();
    // Multiplication by β on integer coordinates: shift up by one basis
    // position, then reduce `β^deg` by the monic defining polynomial.
    let p_low: Vec<BigInt> = (0..deg).map(|i| field.poly().coeff(i)).collect();
    let mul_beta = |v: &mut Vec<BigInt>| {
        let top = v.pop().expect("coordinate vector is nonempty");
        v.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (vi, pi) in v.iter_mut().zip(&p_low) {
                *vi -= &top * pi;
            }
        }
    };
    let add_scaled_c = |v: &mut Vec<BigInt>, j: usize| -> Result<()> {
        for k in 1..=d {
            let c = rho.rho(k, j)?;
            if c != 0 {
                let c = BigInt::from(c);
                for (vi, bi) in v.iter_mut().zip(&bk_int[k - 1]) {
                    *vi += &c * bi;
                }
            }
        }
        Ok(())
    };
    // Horner on `(B_0 + C_0) β^r + C_1 β^{r−1} + … + C_r` with
    // `C_j = Σ_k B_k ρ(k; j)`; the closed form is the negative.
    let mut acc = int_vec(b.b0());
    add_scaled_c(&mut acc, 0)?;
    for j in 1..=r {
        mul_beta(&mut acc);
        add_scaled_c(&mut acc, j)?;
    }
    field.element(
        acc.into_iter()
            .map(|n| BigRational::new(-n, scale.clone()))
            .collect(),
    )
}

/// Streaming evaluator for `Y_0, Y_1, …` via the division-free recurrence
/// `Y_R = β Y_{R−1} − Σ_{k=1}^{D} B_k ρ(k; R)`, which is equivalent to the
/// closed form at every shift. Each step costs `O(D)` field operations.
pub struct YIter<'a> {
    b: &'a BCoefficients,
    rho: &'a RhoTable,
    beta: FieldElement,
    cur: FieldElement,
    r: usize,
}

impl<'a> YIter<'a> {
    /// Start at `R = 0` with `Y_0 = −B_0 − Σ_k B_k ρ(k; 0)`.
    pub fn new(b: &'a BCoefficients, rho: &'a RhoTable) -> Result<YIter<'a>> {
        let beta = b.field().beta();
        let mut acc = b.b0().clone();
        for k in 1..=b.d() {
            let c = rho.rho(k, 0)?;
            if c != 0 {
                acc = acc.add(&b.b(k).mul_rational(&BigRational::from_integer(BigInt::from(c))));
            }
        }
        Ok(YIter {
            b,
            rho,
            beta,
            cur: acc.neg(),
            r: 0,
        })
    }

    /// Current shift `R`.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Current value `Y_R`.
    pub fn value(&self) -> &FieldElement {
        &self.cur
    }

    /// Advance to `Y_{R+1}`.
    pub fn advance(&mut self) -> Result<()> {
        let next_r = self.r + 1;
        let mut v = self.cur.mul(&self.beta);
        for k in 1..=self.b.d() {
            let c = self.rho.rho(k, next_r)?;
            if c != 0 {
                v = v.sub(
                    &self
                        .b
                        .b(k)
                        .mul_rational(&BigRational::from_integer(BigInt::from(c))),
                );
            }
        }
        self.cur = v;
        self.r = next_r;
        Ok(())
    }
}

/// Exact nonvanishing check for a linear-form value. Returns `true` when
/// `Y_R ≠ 0`. A zero value forces `B_0 β^R` to be an algebraic integer
/// (every other term of the closed form is integral); if that implication
/// fails the internal state is inconsistent and the call errors.
pub fn check_y_nonzero(y: &FieldElement, r: usize, b: &BCoefficients) -> Result<bool> {
    if !y.is_zero() {
        return Ok(true);
    }
    let shifted = b.b0().mul_beta_pow(r as u64);
    if !shifted.is_integral() {
        return Err(Error::IdentityFailure {
            what: format!("Y_{r} vanished but B_0 β^{r} is not integral"),
        });
    }
    Ok(false)
}

/// Gap structure of the (D−1)-fold sumset of the exchange support inside
/// `[0, N)`: sorted boundaries `i(1) = 0 < i(2) < … < i(τ)` (the members of
/// `[0, N) ∩ (D−1)Γ`) together with the sentinel `i(τ+1) = N`, carving
/// `[0, N)` into `τ` half-open gap intervals `I_h = [i(h), i(h+1))`.
#[derive(Clone, Debug)]
pub struct GapStructure {
    /// `i(1), …, i(τ), i(τ+1) = N`.
    boundaries: Vec<usize>,
    n: usize,
}

/// Build the gap structure for order `d ≥ 1` over `[0, n)`.
pub fn gap_structure(e: &ExchangeData, d: usize, n: usize) -> Result<GapStructure> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidConfig {
            what: "gap structure needs D ≥ 1 and N ≥ 1".into(),
        });
    }
    let ss = Sumset::build(e.support(), d - 1, n);
    let mut boundaries: Vec<usize> = ss.members().to_vec();
    debug_assert_eq!(boundaries.first(), Some(&0), "0 is always a sumset member");
    boundaries.push(n);
    Ok(GapStructure { boundaries, n })
}

impl GapStructure {
    /// Number of gap intervals `τ`.
    pub fn tau(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Horizon `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Boundary `i(h)` for `1 ≤ h ≤ τ + 1`.
    pub fn boundary(&self, h: usize) -> Result<usize> {
        if h == 0 || h > self.boundaries.len() {
            return Err(Error::OutOfRange {
                what: format!("gap boundary index {h} outside 1..={}", self.boundaries.len()),
            });
        }
        Ok(self.boundaries[h - 1])
    }

    /// Interval `I_h = [i(h), i(h+1))` for `1 ≤ h ≤ τ`.
    pub fn interval(&self, h: usize) -> Result<(usize, usize)> {
        if h == 0 || h > self.tau() {
            return Err(Error::OutOfRange {
                what: format!("gap interval index {h} outside 1..={}", self.tau()),
            });
        }
        Ok((self.boundaries[h - 1], self.boundaries[h]))
    }

    /// Lengths of all gap intervals; they partition `[0, N)`, so the
    /// lengths sum to `N`.
    pub fn interval_lengths(&self) -> Vec<usize> {
        self.boundaries
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect()
    }

    /// The interval index `h` with `r ∈ I_h`, for `r < N`.
    pub fn locate(&self, r: usize) -> Option<usize> {
        if r >= self.n {
            return None;
        }
        // partition_point gives the count of boundaries ≤ r; the first
        // boundary is 0 ≤ r, so the count is ≥ 1 and equals h.
        Some(self.boundaries.partition_point(|&b| b <= r))
    }

    /// Whether `r` lies strictly inside `I_h`, i.e. `i(h) < r < i(h+1)`.
    pub fn is_interior(&self, r: usize, h: usize) -> Result<bool> {
        let (lo, hi) = self.interval(h)?;
        Ok(lo < r && r < hi)
    }
}

/// Check the gap recursion `β Y_{R−1} = B_D ρ(D; R) + Y_R` at a shift `R`
/// strictly inside gap interval `I_h`, by exact field arithmetic on the
/// closed-form values. Also verifies the side condition that the
/// lower-order convolutions `ρ(k; R)` vanish for `1 ≤ k ≤ D − 1`, which is
/// what licenses the recursion strictly inside a gap. Returns `false` if
/// either the side condition or the identity fails.
pub fn verify_recursion(
    r: usize,
    h: usize,
    b: &BCoefficients,
    rho: &RhoTable,
    gaps: &GapStructure,
) -> Result<bool> {
    if !gaps.is_interior(r, h)? {
        return Err(Error::NotInGapInterior { r, h });
    }
    for k in 1..b.d() {
        if rho.rho(k, r)? != 0 {
            return Ok(false);
        }
    }
    let y_prev = y_r_closed(b, rho, r - 1)?;
    let y_cur = y_r_closed(b, rho, r)?;
    let lhs = b.field().beta().mul(&y_prev);
    let c = rho.rho(b.d(), r)?;
    let rhs = b
        .b_d()
        .mul_rational(&BigRational::from_integer(BigInt::from(c)))
        .add(&y_cur);
    Ok(lhs.sub(&rhs).is_zero())
}

/// Decision of a single threshold comparison `|Y_R| ≥ C` vs `|Y_R| < C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdDecision {
    /// `|Y_R| ≥ C` (exact ties are counted here).
    AboveOrEqual,
    /// `|Y_R| < C`.
    Below,
}

/// Certified comparator against the recursion threshold `|B_D| / (2|β|)`.
///
/// At a real embedding both sides are elements of the field, so the
/// comparison is exact and total — ties included. At a complex embedding the
/// comparison refines interval enclosures of the two moduli until they
/// separate; an exact tie can never separate and is reported as
/// [`Error::ThresholdTieUnresolved`] at the precision cap rather than being
/// silently resolved either way.
pub struct ThresholdOracle {
    /// `B_D / (2β)`; its modulus at the embedding is the threshold.
    element: FieldElement,
    /// `|B_D / (2β)|` as a field element, when the embedding is real.
    real_abs: Option<FieldElement>,
}

impl ThresholdOracle {
    pub fn new(emb: &mut Embedding, b: &BCoefficients) -> Result<ThresholdOracle> {
        let element = b.threshold_element()?;
        let real_abs = if emb.is_real() {
            let s = emb.sign_real(&element)?;
            debug_assert_ne!(s, 0, "threshold element is nonzero");
            Some(if s >= 0 { element.clone() } else { element.neg() })
        } else {
            None
        };
        Ok(ThresholdOracle { element, real_abs })
    }

    /// The threshold as a certified interval, refined to width `2^width_exp`.
    pub fn interval(&self, emb: &mut Embedding, width_exp: i64) -> Result<RealInterval> {
        emb.modulus_interval(&self.element, width_exp)
    }

    /// Decide `|Y_R| ≥ C` exactly (real embedding) or by refinement
    /// (complex embedding).
    pub fn decide(
        &self,
        emb: &mut Embedding,
        r: usize,
        y: &FieldElement,
    ) -> Result<ThresholdDecision> {
        if let Some(c_abs) = &self.real_abs {
            let s = emb.sign_real(y)?;
            let y_abs = if s >= 0 { y.clone() } else { y.neg() };
            return Ok(match emb.compare_real(&y_abs, c_abs)? {
                std::cmp::Ordering::Less => ThresholdDecision::Below,
                _ => ThresholdDecision::AboveOrEqual,
            });
        }
        let cap = emb.prec_cap();
        let mut width_exp: i64 = -32;
        loop {
            let tie = |e: Error| match e {
                Error::PrecisionExhausted { .. } => Error::ThresholdTieUnresolved {
                    index: r,
                    cap_bits: cap,
                },
                other => other,
            };
            let ym = emb.modulus_interval(y, width_exp).map_err(tie)?;
            let cm = emb.modulus_interval(&self.element, width_exp).map_err(tie)?;
            if ym.lo > cm.hi {
                return Ok(ThresholdDecision::AboveOrEqual);
            }
            if ym.hi < cm.lo {
                return Ok(ThresholdDecision::Below);
            }
            width_exp *= 2;
            if -width_exp > cap as i64 {
                return Err(Error::ThresholdTieUnresolved {
                    index: r,
                    cap_bits: cap,
                });
            }
        }
    }
}

/// The threshold count `y_N = #\{R < N : |Y_R| ≥ |B_D|/(2|β|)\}`, computed
/// by streaming the recurrence and deciding each comparison with a
/// certified oracle.
pub fn y_n_count(
    emb: &mut Embedding,
    b: &BCoefficients,
    rho: &RhoTable,
    n: usize,
) -> Result<usize> {
    let oracle = ThresholdOracle::new(emb, b)?;
    let mut iter = YIter::new(b, rho)?;
    let mut count = 0usize;
    for r in 0..n {
        if r > 0 {
            iter.advance()?;
        }
        if oracle.decide(emb, r, iter.value())? == ThresholdDecision::AboveOrEqual {
            count += 1;
        }
    }
    Ok(count)
}

/// Interval power by repeated squaring with directed rounding.
fn iv_pow(iv: &RealInterval, mut n: u64, prec: u32) -> RealInterval {
    let mut base = iv.clone();
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

/// Consistency of the closed form against the defining series: the exact
/// difference between `Y_R` and the truncated series
/// `Σ_{k=1}^{D} B_k Σ_{m=1}^{M} β^{−m} ρ(k; m+R)` must be bounded by the
/// series tail `Σ_k |B_k| Σ_{m>M} |β|^{−m} (2T(m+R+1))^k`, estimated from
/// above by a certified geometric ratio bound. Requires the convolution
/// table to reach `R + M`, and `M` large enough that the tail ratio
/// `|β|^{−1} (1 + 1/(M+R+1))^D` is below 1.
pub fn verify_series_consistency(
    emb: &mut Embedding,
    b: &BCoefficients,
    e: &ExchangeData,
    rho: &RhoTable,
    r: usize,
    m_terms: usize,
) -> Result<bool> {
    let prec: u32 = 96;
    let field = b.field();
    let beta_inv = field.beta().inv()?;
    // Truncated series as an exact field element, by a backwards Horner
    // pass in β^{−1}.
    let mut acc = field.zero();
    for m in (1..=m_terms).rev() {
        for k in 1..=b.d() {
            let c = rho.rho(k, m + r)?;
            if c != 0 {
                acc = acc.add(&b.b(k).mul_rational(&BigRational::from_integer(BigInt::from(c))));
            }
        }
        acc = acc.mul(&beta_inv);
    }
    let diff = y_r_closed(b, rho, r)?.sub(&acc);

    // Upper bound for the tail. With u an upper bound on |β|^{−1} and
    // a_m = u^m (m+R+1)^k, consecutive terms satisfy a_{m+1}/a_m ≤ q for
    // q = u (1 + 1/(M+R+1))^k, so Σ_{m>M} a_m ≤ a_{M+1} / (1 − q).
    let beta_mod = emb.modulus_interval(&field.beta(), -(prec as i64))?;
    let one_iv = RealInterval::from_int(1);
    let u = one_iv.div(&beta_mod, prec);
    let two_t = BigInt::from(2) * e.bound();
    let mut tail_hi = Dyadic::zero();
    for k in 1..=b.d() {
        let bk_mod = emb.modulus_interval(b.b(k), -32)?;
        let ratio_base = RealInterval::from_rational(
            &(BigRational::one()
                + BigRational::new(BigInt::one(), BigInt::from((m_terms + r + 1) as u64))),
            prec,
        );
        let q = u.mul(&iv_pow(&ratio_base, k as u64, prec), prec);
        if !(q.hi < Dyadic::one()) {
            return Err(Error::OutOfRange {
                what: format!(
                    "series tail ratio not below 1 at truncation M = {m_terms}; increase M"
                ),
            });
        }
        let highest = BigRational::from_integer(&two_t * BigInt::from((m_terms + r + 2) as u64));
        let lead = iv_pow(&RealInterval::from_rational(&highest, prec), k as u64, prec)
            .mul(&iv_pow(&u, (m_terms + 1) as u64, prec), prec);
        let denom = RealInterval::new(
            Dyadic::one().sub(&q.hi),
            Dyadic::one().sub(&q.lo),
        );
        let term = bk_mod.mul(&lead, prec).div(&denom, prec);
        tail_hi = tail_hi.add(&term.hi).round(prec, Round::Up);
    }

    let cap = emb.prec_cap();
    let mut width_exp: i64 = -32;
    loop {
        let dm = emb.modulus_interval(&diff, width_exp)?;
        if dm.hi <= tail_hi {
            return Ok(true);
        }
        if dm.lo > tail_hi {
            return Ok(false);
        }
        width_exp *= 2;
        if -width_exp > cap as i64 {
            return Err(Error::PrecisionExhausted {
                cap_bits: cap,
                context: "series consistency comparison".into(),
            });
        }
    }
}
