//! Greedy β-expansions and digit-exchange statistics.
//!
//! For a real base β > 1 the greedy digits of ξ ∈ [0, 1] are
//! `t_n = ⌊β·x_{n−1}⌋` with `x_n = β·x_{n−1} − t_n` and `x_0 = ξ`; every
//! state is kept as an exact field element, and floors are certified, so
//! a digit is never mis-rounded. General bounded integer digit sequences
//! (including negative digits) can be ingested from files.
//!
//! The two statistics of interest are `γ(N)`, the number of indices
//! `n ≤ N` with `t_n ≠ t_{n+1}` (digit exchanges), and `ν(N)`, the
//! number of `n ≤ N` with `t_n ≠ 0`. For nonnegative digit sequences
//! they satisfy `ν(N) ≥ γ(N)/2 − 1`.

use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;
use std::path::Path;

/// Where a digit sequence came from; greedy sequences carry extra
/// invariants (nonnegative digits below the base).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigitSource {
    Greedy,
    User,
}

/// A finite digit sequence `t_1, …, t_len` with a certified bound
/// `|t_n| ≤ T`.
#[derive(Clone, Debug)]
pub struct DigitData {
    digits: Vec<BigInt>,
    bound: BigInt,
    source: DigitSource,
}

impl DigitData {
    /// Wrap a user-supplied sequence, validating the bound.
    pub fn new_user(digits: Vec<BigInt>, bound: BigInt) -> Result<DigitData> {
        if !bound.is_positive() {
            return Err(Error::InvalidConfig {
                what: "digit bound T must be a positive integer".into(),
            });
        }
        if let Some(bad) = digits.iter().position(|t| t.abs() > bound) {
            return Err(Error::DigitFile {
                what: format!("digit at index {} exceeds the bound T={}", bad + 1, bound),
            });
        }
        Ok(DigitData { digits, bound, source: DigitSource::User })
    }

    fn new_greedy(digits: Vec<BigInt>, bound: BigInt) -> DigitData {
        DigitData { digits, bound, source: DigitSource::Greedy }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// 1-based digit access: `digit(n)` is `t_n`.
    pub fn digit(&self, n: usize) -> &BigInt {
        &self.digits[n - 1]
    }

    pub fn digits(&self) -> &[BigInt] {
        &self.digits
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    pub fn source(&self) -> DigitSource {
        self.source
    }

    /// Index (1-based) of the first nonzero digit, if any.
    pub fn first_nonzero_index(&self) -> Option<usize> {
        self.digits.iter().position(|t| !t.is_zero()).map(|i| i + 1)
    }

    /// The sequence starting at 1-based index `from` (bound and source
    /// preserved): `tail(k)` has digits `t_k, t_{k+1}, …`.
    pub fn tail(&self, from: usize) -> DigitData {
        assert!(from >= 1 && from <= self.digits.len() + 1, "tail start out of range");
        DigitData {
            digits: self.digits[from - 1..].to_vec(),
            bound: self.bound.clone(),
            source: self.source,
        }
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.digits.len() < needed {
            Err(Error::InsufficientDigits { needed, available: self.digits.len() })
        } else {
            Ok(())
        }
    }

    /// `γ(N)`: number of `n ≤ N` with `t_n ≠ t_{n+1}`. Needs `N+1`
    /// digits.
    pub fn gamma(&self, n: usize) -> Result<usize> {
        self.require(n + 1)?;
        Ok((1..=n)
            .filter(|&k| self.digits[k - 1] != self.digits[k])
            .count())
    }

    /// `ν(N)`: number of `n ≤ N` with `t_n ≠ 0`.
    pub fn nu(&self, n: usize) -> Result<usize> {
        self.require(n)?;
        Ok(self.digits[..n].iter().filter(|t| !t.is_zero()).count())
    }

    /// Prefix table `γ(0), γ(1), …, γ(n_max)` in one pass.
    pub fn gamma_prefix(&self, n_max: usize) -> Result<Vec<usize>> {
        self.require(n_max + 1)?;
        let mut out = Vec::with_capacity(n_max + 1);
        let mut acc = 0usize;
        out.push(0);
        for k in 1..=n_max {
            if self.digits[k - 1] != self.digits[k] {
                acc += 1;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Prefix table `ν(0), ν(1), …, ν(n_max)` in one pass.
    pub fn nu_prefix(&self, n_max: usize) -> Result<Vec<usize>> {
        self.require(n_max)?;
        let mut out = Vec::with_capacity(n_max + 1);
        let mut acc = 0usize;
        out.push(0);
        for k in 1..=n_max {
            if !self.digits[k - 1].is_zero() {
                acc += 1;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// The explicit form of `ν ≥ γ/2 + O(1)`: true iff
    /// `ν(N) ≥ γ(N)/2 − 1`, i.e. `2ν(N) + 2 ≥ γ(N)`.
    pub fn check_gamma_nu_relation(&self, n: usize) -> Result<bool> {
        Ok(2 * self.nu(n)? + 2 >= self.gamma(n)?)
    }

    /// CSV rows `(N, gamma, nu)` for `1 ≤ N ≤ n_max`.
    pub fn stats_csv(&self, n_max: usize) -> Result<String> {
        let gamma = self.gamma_prefix(n_max)?;
        let nu = self.nu_prefix(n_max)?;
        let mut s = String::from("N,gamma,nu\n");
        for n in 1..=n_max {
            writeln!(s, "{},{},{}", n, gamma[n], nu[n]).expect("string write");
        }
        Ok(s)
    }

    /// Write the sequence with a `# T=` header, one digit per line.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut s = format!("# T={}\n", self.bound);
        for t in &self.digits {
            writeln!(s, "{t}").expect("string write");
        }
        std::fs::write(path, s)?;
        Ok(())
    }

    /// Read a digit file: one integer per line, optionally preceded by a
    /// `# T=<bound>` header. Without a header the bound is inferred as
    /// `max(1, max|t_n|)`.
    pub fn read_file(path: &Path) -> Result<DigitData> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines().peekable();
        let mut declared: Option<BigInt> = None;
        if let Some(first) = lines.peek() {
            let trimmed = first.trim();
            if let Some(rest) = trimmed.strip_prefix('#') {
                let rest = rest.trim();
                let value = rest.strip_prefix("T=").ok_or_else(|| Error::DigitFile {
                    what: format!("unrecognized header {trimmed:?}; expected '# T=<bound>'"),
                })?;
                let t: BigInt = value.trim().parse().map_err(|_| Error::DigitFile {
                    what: format!("invalid bound in header {trimmed:?}"),
                })?;
                if !t.is_positive() {
                    return Err(Error::DigitFile {
                        what: format!("bound T={t} must be positive"),
                    });
                }
                declared = Some(t);
                lines.next();
            }
        }
        let mut digits = Vec::new();
        for (i, line) in lines.enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let t: BigInt = trimmed.parse().map_err(|_| Error::DigitFile {
                what: format!("line {} is not an integer: {trimmed:?}", i + 2),
            })?;
            digits.push(t);
        }
        if digits.is_empty() {
            return Err(Error::DigitFile { what: "no digits in file".into() });
        }
        let max_abs = digits.iter().map(|t| t.abs()).max().unwrap_or_else(BigInt::zero);
        let bound = match declared {
            Some(t) => {
                if max_abs > t {
                    return Err(Error::DigitFile {
                        what: format!("digit magnitude {max_abs} exceeds declared bound T={t}"),
                    });
                }
                t
            }
            None => max_abs.max(BigInt::one()),
        };
        Ok(DigitData { digits, bound, source: DigitSource::User })
    }
}

/// Step-by-step greedy expansion with exact states.
pub struct GreedyExpansion<'a> {
    embedding: &'a mut Embedding,
    beta: FieldElement,
    state: FieldElement,
    /// `⌈β⌉ − 1`, the largest digit the greedy map can emit.
    max_digit: BigInt,
}

impl<'a> GreedyExpansion<'a> {
    /// Validate the domain and set up the iteration.
    ///
    /// Requires a real embedding with β > 1 and `0 ≤ ξ ≤ 1` (strictly
    /// `ξ < 1` when β is a rational integer).
    pub fn new(embedding: &'a mut Embedding, xi: &FieldElement) -> Result<GreedyExpansion<'a>> {
        if !embedding.is_real() {
            return Err(Error::OutOfRange {
                what: "greedy digits require a real base".into(),
            });
        }
        let field = embedding.field().clone();
        let beta = field.beta();
        if embedding.sign_real(&beta.sub(&field.one()))? <= 0 {
            return Err(Error::OutOfRange {
                what: "greedy digits require a base greater than 1".into(),
            });
        }
        if embedding.sign_real(xi)? < 0 {
            return Err(Error::OutOfRange {
                what: "expansion point must satisfy 0 ≤ ξ".into(),
            });
        }
        let xi_minus_one = xi.sub(&field.one());
        let upper = embedding.sign_real(&xi_minus_one)?;
        let integer_base = field.degree() == 1;
        if upper > 0 || (integer_base && upper == 0) {
            return Err(Error::OutOfRange {
                what: if integer_base {
                    "expansion point must satisfy ξ < 1 for an integer base".into()
                } else {
                    "expansion point must satisfy ξ ≤ 1".into()
                },
            });
        }
        // ⌈β⌉ − 1: equals ⌊β⌋ for irrational β, and β − 1 for integer β.
        let max_digit = if integer_base {
            beta.as_rational().expect("integer base").to_integer() - BigInt::one()
        } else {
            embedding.floor_real(&beta)?
        };
        Ok(GreedyExpansion {
            embedding,
            beta,
            state: xi.clone(),
            max_digit,
        })
    }

    /// Current state `x_n` (exact).
    pub fn state(&self) -> &FieldElement {
        &self.state
    }

    /// Largest digit the greedy map can emit, `⌈β⌉ − 1`.
    pub fn max_digit(&self) -> &BigInt {
        &self.max_digit
    }

    /// One greedy step: emit `t = ⌊β·x⌋` and replace `x` by `{β·x}`.
    pub fn next_digit(&mut self) -> Result<BigInt> {
        let y = self.state.mul(&self.beta);
        let t = self.embedding.floor_real(&y)?;
        let field = self.embedding.field().clone();
        self.state = y.sub(&field.from_rational(num_rational::BigRational::from(t.clone())));
        debug_assert!(t >= BigInt::zero() && t <= self.max_digit);
        Ok(t)
    }
}

/// Generate `count` greedy digits of ξ. The digit bound recorded in the
/// result is `max(1, ⌈β⌉ − 1)`.
pub fn greedy_digits(
    embedding: &mut Embedding,
    xi: &FieldElement,
    count: usize,
) -> Result<DigitData> {
    let mut iter = GreedyExpansion::new(embedding, xi)?;
    let mut digits = Vec::with_capacity(count);
    for _ in 0..count {
        digits.push(iter.next_digit()?);
    }
    let bound = iter.max_digit().clone().max(BigInt::one());
    Ok(DigitData::new_greedy(digits, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::poly::IntPoly;
    use num_rational::BigRational;
    use std::sync::Arc;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn user(v: &[i64]) -> DigitData {
        let digits = ints(v);
        let bound = digits
            .iter()
            .map(|t| t.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
            .max(BigInt::one());
        DigitData::new_user(digits, bound).unwrap()
    }

    fn golden_setup() -> (Arc<NumberField>, Embedding) {
        let f = NumberField::new(IntPoly::from_ints(&[-1, -1, 1])).unwrap();
        let e = Embedding::new(&f, 0, 1 << 14).unwrap();
        (f, e)
    }

    #[test]
    fn golden_half_digits_and_period() {
        let (f, mut e) = golden_setup();
        let xi = f.from_rational(BigRational::new(1.into(), 2.into()));
        let d = greedy_digits(&mut e, &xi, 9).unwrap();
        assert_eq!(d.digits(), ints(&[0, 1, 0, 0, 1, 0, 0, 1, 0]).as_slice());
        assert_eq!(d.source(), DigitSource::Greedy);
        assert_eq!(d.first_nonzero_index(), Some(2));
        // The state returns to 1/2 after 3 steps: periodic digits.
        let mut iter = GreedyExpansion::new(&mut e, &xi).unwrap();
        let x0 = iter.state().clone();
        for _ in 0..3 {
            iter.next_digit().unwrap();
        }
        assert_eq!(iter.state(), &x0);
    }

    #[test]
    fn binary_expansion_of_one_third() {
        let f = NumberField::new(IntPoly::from_ints(&[-2, 1])).unwrap();
        let mut e = Embedding::new(&f, 0, 1 << 12).unwrap();
        let xi = f.from_rational(BigRational::new(1.into(), 3.into()));
        let d = greedy_digits(&mut e, &xi, 6).unwrap();
        assert_eq!(d.digits(), ints(&[0, 1, 0, 1, 0, 1]).as_slice());
        assert_eq!(d.bound(), &BigInt::from(1));
    }

    #[test]
    fn zero_expands_to_zeros() {
        let (f, mut e) = golden_setup();
        let d = greedy_digits(&mut e, &f.zero(), 5).unwrap();
        assert_eq!(d.digits(), ints(&[0, 0, 0, 0, 0]).as_slice());
        assert_eq!(d.first_nonzero_index(), None);
    }

    #[test]
    fn domain_checks() {
        let (f, mut e) = golden_setup();
        let bad = f.from_rational(BigRational::new((-1).into(), 2.into()));
        assert!(matches!(
            greedy_digits(&mut e, &bad, 3),
            Err(Error::OutOfRange { .. })
        ));
        let bad = f.from_rational(BigRational::new(3.into(), 2.into()));
        assert!(matches!(
            greedy_digits(&mut e, &bad, 3),
            Err(Error::OutOfRange { .. })
        ));
        // ξ = 1 is allowed for irrational β: t₁ = ⌊φ⌋ = 1, then state φ−1.
        let d = greedy_digits(&mut e, &f.one(), 3).unwrap();
        assert_eq!(d.digits()[0], BigInt::from(1));
        // …but not for an integer base.
        let f2 = NumberField::new(IntPoly::from_ints(&[-2, 1])).unwrap();
        let mut e2 = Embedding::new(&f2, 0, 1 << 12).unwrap();
        assert!(matches!(
            greedy_digits(&mut e2, &f2.one(), 3),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn partial_sum_identity_holds_exactly() {
        // ξ − Σ_{k≤n} t_k β^{−k} = β^{−n}·x_n as exact field elements,
        // rearranged multiplicatively: β^n·ξ − Σ t_k β^{n−k} = x_n.
        let (f, mut e) = golden_setup();
        let xi = f.from_rational(BigRational::new(1.into(), 2.into()));
        let mut iter = GreedyExpansion::new(&mut e, &xi).unwrap();
        let mut digits = Vec::new();
        for _ in 0..12 {
            digits.push(iter.next_digit().unwrap());
        }
        let state = iter.state().clone();
        let n = digits.len() as u64;
        let mut lhs = xi.mul_beta_pow(n);
        for (k, t) in digits.iter().enumerate() {
            let term = f
                .from_rational(BigRational::from(t.clone()))
                .mul_beta_pow(n - (k as u64 + 1));
            lhs = lhs.sub(&term);
        }
        assert_eq!(lhs, state);
    }

    #[test]
    fn greedy_digit_bound_holds() {
        let (f, mut e) = golden_setup();
        let xi = f.from_rational(BigRational::new(7.into(), 13.into()));
        let d = greedy_digits(&mut e, &xi, 200).unwrap();
        for t in d.digits() {
            assert!(t >= &BigInt::zero() && t <= &BigInt::from(1));
        }
    }

    #[test]
    fn gamma_examples() {
        let d = user(&[0, 1, 0, 0, 1, 0]);
        assert_eq!(d.gamma(5).unwrap(), 4);
        let c = user(&[3, 3, 3, 3]);
        assert_eq!(c.gamma(3).unwrap(), 0);
        let alt = user(&[1, 2, 1, 2, 1, 2]);
        assert_eq!(alt.gamma(5).unwrap(), 5);
        assert!(matches!(
            d.gamma(6),
            Err(Error::InsufficientDigits { needed: 7, available: 6 })
        ));
    }

    #[test]
    fn nu_examples() {
        assert_eq!(user(&[0, 1, 0, 0, 1, 0]).nu(6).unwrap(), 2);
        assert_eq!(user(&[0; 10]).nu(10).unwrap(), 0);
        assert_eq!(user(&[1; 10]).nu(10).unwrap(), 10);
    }

    #[test]
    fn relation_examples() {
        assert!(user(&[0, 1, 0, 0, 1, 0]).check_gamma_nu_relation(5).unwrap());
        assert!(user(&[0; 8]).check_gamma_nu_relation(7).unwrap());
        assert!(user(&[1, 0, 1, 0]).check_gamma_nu_relation(3).unwrap());
    }

    #[test]
    fn prefix_tables_match_direct_counts() {
        let d = user(&[0, 1, 1, 0, 2, 2, 0, 1]);
        let gamma = d.gamma_prefix(7).unwrap();
        let nu = d.nu_prefix(7).unwrap();
        for n in 1..=7 {
            assert_eq!(gamma[n], d.gamma(n).unwrap());
            assert_eq!(nu[n], d.nu(n).unwrap());
        }
        let csv = d.stats_csv(3).unwrap();
        assert!(csv.starts_with("N,gamma,nu\n1,"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn digit_file_round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("digits.txt");
        let d = DigitData::new_user(ints(&[0, -2, 3, 0]), BigInt::from(3)).unwrap();
        d.write_file(&path).unwrap();
        let back = DigitData::read_file(&path).unwrap();
        assert_eq!(back.digits(), d.digits());
        assert_eq!(back.bound(), &BigInt::from(3));

        // Headerless file: bound inferred.
        std::fs::write(&path, "1\n0\n-4\n").unwrap();
        let inferred = DigitData::read_file(&path).unwrap();
        assert_eq!(inferred.bound(), &BigInt::from(4));

        // Bound violation.
        std::fs::write(&path, "# T=2\n3\n").unwrap();
        assert!(matches!(
            DigitData::read_file(&path),
            Err(Error::DigitFile { .. })
        ));

        // Bad header and bad line.
        std::fs::write(&path, "# bound 3\n1\n").unwrap();
        assert!(matches!(
            DigitData::read_file(&path),
            Err(Error::DigitFile { .. })
        ));
        std::fs::write(&path, "# T=2\nx\n").unwrap();
        assert!(matches!(
            DigitData::read_file(&path),
            Err(Error::DigitFile { .. })
        ));
    }
}
