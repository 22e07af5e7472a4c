//! Shared instance builders for the integration suites.
//!
//! Four concrete instances exercise every branch of the pipeline:
//!
//! * **golden** — degree-2 real base β = (1+√5)/2 (root of X²−X−1) with
//!   ξ = 1/2, relation −1 + 2ξ = 0, unit π = 2; greedy digits with the
//!   eventually periodic pattern 0, 1, 0.
//! * **b2** — rational base β = 2 (root of X−2) with ξ = 1/3, relation
//!   −1 + 3ξ = 0, unit π = 3; greedy digits alternate 0, 1.
//! * **complexquad** — complex quadratic base β = i√2 (root of X²+2) with
//!   ξ = (√21−3)/6 satisfying −1 + 3ξ + 3ξ² = 0, unit π = 3; digits are
//!   read from a file generated here by exact arithmetic in Q(√21).
//! * **forged** — the golden field with a digit file and a unit chosen so
//!   the non-integrality hypothesis fails with witness exponent 1.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, Sign};

/// Write a TOML config into `dir` and return its path.
fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("write config");
    path
}

fn checkpoints_list(checkpoints: &[usize]) -> String {
    let inner: Vec<String> = checkpoints.iter().map(|c| c.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

/// Golden instance: greedy digits of ξ = 1/2 in base (1+√5)/2.
pub fn write_golden(dir: &Path, n_max: usize, checkpoints: &[usize]) -> PathBuf {
    let body = format!(
        r#"[field]
polynomial = [-1, -1, 1]

[instance]
a = [["-1"], ["2"]]
pi = ["2"]
digit_bound = 1

[digits]
source = "greedy"
xi = ["1/2"]

[schedule]
n_max = {n_max}
checkpoints = {}
"#,
        checkpoints_list(checkpoints)
    );
    write_config(dir, "golden.toml", &body)
}

/// Rational base instance: greedy digits of ξ = 1/3 in base 2.
pub fn write_b2(dir: &Path, n_max: usize, checkpoints: &[usize]) -> PathBuf {
    let body = format!(
        r#"[field]
polynomial = [-2, 1]

[instance]
a = [["-1"], ["3"]]
pi = ["3"]
digit_bound = 1

[digits]
source = "greedy"
xi = ["1/3"]

[schedule]
n_max = {n_max}
checkpoints = {}
"#,
        checkpoints_list(checkpoints)
    );
    write_config(dir, "b2.toml", &body)
}

/// Digits of the base −2 expansion of ξ = (√21 − 3)/6:
/// `x_0 = ξ`, `d_{k+1} = [x_k < −1/6]`, `x_{k+1} = −2 x_k − d_{k+1}`,
/// which keeps every state in [−2/3, 1/3] and every digit in {0, 1}.
///
/// States are `(p + q√21)/6` with integer `p`, `q`. The comparison against
/// −1/6 needs the sign of `(p+1) + q√21`; when `p+1` and `q` have opposite
/// signs it is settled by the sign of `(p+1)² − 21q²`, recovered from the
/// running norm `m = p² − 21q²` which updates incrementally
/// (`m ← 4m + d(24p + 36)`), so each step costs time linear in the
/// integer sizes rather than a fresh big-integer multiplication.
pub fn minus_two_digits(count: usize) -> Vec<u8> {
    let mut p = BigInt::from(-3);
    let mut q = BigInt::from(1);
    let mut m = BigInt::from(-12); // p² − 21q²
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let u: BigInt = &p + 1;
        let (su, sq) = (u.sign(), q.sign());
        let sgn: i8 = if sq == Sign::NoSign {
            match su {
                Sign::Plus => 1,
                Sign::Minus => -1,
                Sign::NoSign => 0,
            }
        } else if su == sq || su == Sign::NoSign {
            if sq == Sign::Plus {
                1
            } else {
                -1
            }
        } else {
            // Opposite strict signs: sign of (p+1)² − 21q², never zero
            // because √21 is irrational and q ≠ 0.
            let t: BigInt = &m + (&p << 1usize) + 1;
            debug_assert!(t.sign() != Sign::NoSign, "exact tie is impossible");
            match (su == Sign::Plus, t.sign() == Sign::Plus) {
                (true, true) => 1,
                (true, false) => -1,
                (false, true) => -1,
                (false, false) => 1,
            }
        };
        let d = u8::from(sgn < 0);
        if d == 1 {
            m = (&m << 2usize) + (&p * BigInt::from(24)) + 36;
            p = -((&p) << 1usize) - 6;
        } else {
            m <<= 2usize;
            p = -((&p) << 1usize);
        }
        q = -(q << 1usize);
        out.push(d);
    }
    out
}

/// Cross-check the generated digits against a floating-point evaluation of
/// `Σ d_k (−2)^{−k} = (√21 − 3)/6` on a prefix (the tail after `k` terms is
/// at most `(2/3)·2^{−k}`).
pub fn assert_minus_two_digits_sane(digits: &[u8]) {
    let take = digits.len().min(52);
    let mut sum = 0.0f64;
    let mut pw = 1.0f64;
    for &d in &digits[..take] {
        pw /= -2.0;
        sum += f64::from(d) * pw;
    }
    let xi = (21.0f64.sqrt() - 3.0) / 6.0;
    let tol = (2.0 / 3.0) * 0.5f64.powi(take as i32 - 2) + 1e-12;
    assert!(
        (sum - xi).abs() < tol,
        "generated digits disagree with ξ: sum {sum} vs {xi}"
    );
}

/// Complex quadratic instance: digits `t_{2k} = d_k`, odd-index digits 0,
/// written to a file; the config reads the file. `n_digits` lines are
/// produced, so a schedule needs `n_max + 2 ≤ n_digits`.
pub fn write_complexquad(
    dir: &Path,
    n_digits: usize,
    n_max: usize,
    checkpoints: &[usize],
) -> PathBuf {
    let ds = minus_two_digits(n_digits / 2 + 1);
    assert_minus_two_digits_sane(&ds);
    let mut file = String::with_capacity(2 * n_digits + 8);
    file.push_str("# T=1\n");
    for n in 1..=n_digits {
        if n % 2 == 0 {
            let _ = writeln!(file, "{}", ds[n / 2 - 1]);
        } else {
            file.push_str("0\n");
        }
    }
    std::fs::write(dir.join("cq_digits.txt"), file).expect("write digit file");
    let body = format!(
        r#"[field]
polynomial = [2, 0, 1]

[instance]
a = [["-1"], ["3"], ["3"]]
pi = ["3"]
digit_bound = 1

[digits]
source = "file"
path = "cq_digits.txt"

[schedule]
n_max = {n_max}
checkpoints = {}
"#,
        checkpoints_list(checkpoints)
    );
    write_config(dir, "complexquad.toml", &body)
}

/// Forged instance over the golden field: the file digits 1, 0, 0, … are a
/// valid bounded sequence, but with relation coefficients (1, 1) and unit
/// π = 1 the scaled coefficient B₀ = β − 1 is an algebraic integer, so the
/// non-integrality hypothesis must be rejected with witness exponent 1.
pub fn write_forged(dir: &Path, n_max: usize) -> PathBuf {
    let mut file = String::from("# T=1\n1\n");
    for _ in 1..(n_max + 2) {
        file.push_str("0\n");
    }
    std::fs::write(dir.join("forged_digits.txt"), file).expect("write digit file");
    let body = format!(
        r#"[field]
polynomial = [-1, -1, 1]

[instance]
a = [["1"], ["1"]]
pi = ["1"]
digit_bound = 1

[digits]
source = "file"
path = "forged_digits.txt"

[schedule]
n_max = {n_max}
"#
    );
    write_config(dir, "forged.toml", &body)
}
