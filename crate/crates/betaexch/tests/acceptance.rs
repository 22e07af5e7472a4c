//! Acceptance gate: ten criteria, one test and one printed pass/fail line
//! each. Run `cargo test --test acceptance -- --nocapture` to see the lines
//! for passing criteria as well; a failing criterion prints its line and
//! panics with the same diagnostic.
//!
//! Every tolerance is pinned in code: classification calls get five seconds
//! each, the two full-horizon certified runs get ten minutes together, and
//! all arithmetic assertions are exact.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::TempDir;

use betaexch::classify::{classify, Kind};
use betaexch::config::Config;
use betaexch::constants::{
    admissible_threshold, check_count_bound, check_gap_distance, derive_constants,
    verify_y_lower_bound,
};
use betaexch::error::Error;
use betaexch::exchange::{exchange_sequence, lambda_count, telescoping_defect, Sumset};
use betaexch::expansion::DigitData;
use betaexch::field::NumberField;
use betaexch::linforms::{
    check_hypothesis_iii, compute_b, gap_structure, verify_recursion, RhoTable, YIter,
};
use betaexch::poly::IntPoly;
use betaexch::report::{analyze, run_verify, stream_linear_forms, Pipeline};

macro_rules! ensure {
    ($cond:expr, $($why:tt)*) => {
        if !$cond {
            return Err(format!($($why)*));
        }
    };
}

fn criterion(n: u32, what: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("criterion {n:2}: pass — {what}"),
        Err(why) => {
            println!("criterion {n:2}: FAIL — {what}: {why}");
            panic!("criterion {n} failed: {why}");
        }
    }
}

fn golden_pipeline(n_max: usize) -> (TempDir, Pipeline) {
    let td = TempDir::new().expect("tempdir");
    let path = common::write_golden(td.path(), n_max, &[n_max]);
    let cfg = Config::load(&path).expect("load config");
    let p = Pipeline::new(cfg, None, None).expect("pipeline");
    (td, p)
}

#[test]
fn criterion_01_classifier_corpus() {
    criterion(1, "classifier corpus with per-call budget", || {
        let cases: [(&str, &[i64], Kind); 4] = [
            ("X^2-X-1", &[-1, -1, 1], Kind::Pisot),
            ("X+2", &[2, 1], Kind::QuasiPisot),
            (
                "X^8-X^7+X^6-X^4+X^2-X+1",
                &[1, -1, 1, 0, -1, 0, 1, -1, 1],
                Kind::QuasiSalem,
            ),
            (
                "X^10+X^9-X^7-X^6-X^5-X^4-X^3+X+1",
                &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1],
                Kind::Salem,
            ),
        ];
        for (name, coeffs, want) in cases {
            let t0 = Instant::now();
            let c = classify(&IntPoly::from_ints(coeffs), 1 << 14)
                .map_err(|e| format!("{name}: {e}"))?;
            let dt = t0.elapsed();
            ensure!(
                c.kind == want,
                "{name}: classified {:?}, expected {want:?}",
                c.kind
            );
            ensure!(dt < Duration::from_secs(5), "{name}: took {dt:?}, budget 5s");
        }
        Ok(())
    });
}

#[test]
fn criterion_02_golden_expansion() {
    criterion(2, "golden digits are 0,1,0 periodic with two transitions per period", || {
        let n_max = 100_000usize;
        let (_td, p) = golden_pipeline(n_max);
        ensure!(p.digits.len() >= n_max + 2, "too few digits loaded");
        let pattern = [0i64, 1, 0];
        for n in 1..=(n_max + 2) {
            let want = BigInt::from(pattern[(n - 1) % 3]);
            ensure!(
                *p.digits.digit(n) == want,
                "digit t_{n} = {}, expected {want}",
                p.digits.digit(n)
            );
        }
        let gamma = p.digits.gamma_prefix(n_max).map_err(|e| e.to_string())?;
        for n in 1..=n_max {
            // Exactly two digit changes per period of three: γ(N) = N − ⌊N/3⌋,
            // which is within 1 of 2N/3.
            ensure!(
                gamma[n] == n - n / 3,
                "gamma({n}) = {}, expected {}",
                gamma[n],
                n - n / 3
            );
        }
        ensure!(gamma[n_max] == 66_667, "gamma(100000) = {}", gamma[n_max]);
        Ok(())
    });
}

#[test]
fn criterion_03_exact_identities() {
    criterion(3, "telescoping, gap recursion, and first linear-form values", || {
        // Telescoping identity on 1000 random bounded digit sequences.
        let field = NumberField::new(IntPoly::from_ints(&[-1, -1, 1])).map_err(|e| e.to_string())?;
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        for trial in 0..1000 {
            let bound = rng.gen_range(1..=3i64);
            let len = rng.gen_range(4..=28usize);
            let digits: Vec<BigInt> = (0..len)
                .map(|i| {
                    let mut t = rng.gen_range(-bound..=bound);
                    if i == 0 && t == 0 {
                        t = bound;
                    }
                    BigInt::from(t)
                })
                .collect();
            let dd = DigitData::new_user(digits, BigInt::from(bound)).map_err(|e| e.to_string())?;
            let e = exchange_sequence(&dd).map_err(|e| e.to_string())?;
            let m = rng.gen_range(1..=len);
            let defect = telescoping_defect(&field, &dd, &e, m).map_err(|e| e.to_string())?;
            ensure!(
                defect.is_zero(),
                "trial {trial}: telescoping defect nonzero at M = {m}"
            );
        }

        // Gap recursion at 100 random interior shifts of the golden instance.
        let (_td, p) = golden_pipeline(3000);
        let an = analyze(&p).map_err(|e| e.to_string())?;
        let rho = RhoTable::build(&an.exchange, an.b.d(), 2999).map_err(|e| e.to_string())?;
        let gaps = gap_structure(&an.exchange, an.b.d(), 2500).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let r = rng.gen_range(1..2499usize);
            let ok = verify_recursion(r, 1, &an.b, &rho, &gaps).map_err(|e| e.to_string())?;
            ensure!(ok, "golden gap recursion failed at shift {r}");
        }

        // Same recursion on a synthetic degree-2 relation over the golden
        // field: coefficients (1, β, 1) with unit 1 give integral scaled
        // coefficients, digits are a random 0/1 sequence.
        let digits: Vec<BigInt> = (0..400)
            .map(|i| BigInt::from(i32::from(i == 0 || rng.gen_bool(0.35))))
            .collect();
        let dd = DigitData::new_user(digits, BigInt::from(1)).map_err(|e| e.to_string())?;
        let e2 = exchange_sequence(&dd).map_err(|e| e.to_string())?;
        let a_tilde = vec![field.one(), field.beta(), field.one()];
        let b2 = compute_b(&a_tilde, &field.one()).map_err(|e| e.to_string())?;
        let rho2 = RhoTable::build(&e2, 2, 399).map_err(|e| e.to_string())?;
        let gaps2 = gap_structure(&e2, 2, 350).map_err(|e| e.to_string())?;
        let mut interior: Vec<(usize, usize)> = Vec::new();
        for h in 1..=gaps2.tau() {
            let (lo, hi) = gaps2.interval(h).map_err(|e| e.to_string())?;
            for r in (lo + 1)..hi {
                if r >= 1 {
                    interior.push((h, r));
                }
            }
        }
        ensure!(
            interior.len() >= 20,
            "synthetic instance has only {} interior shifts",
            interior.len()
        );
        for _ in 0..20 {
            let (h, r) = interior[rng.gen_range(0..interior.len())];
            let ok = verify_recursion(r, h, &b2, &rho2, &gaps2).map_err(|e| e.to_string())?;
            ensure!(ok, "synthetic gap recursion failed at shift {r} (gap {h})");
        }

        // First linear-form values of the golden instance, exactly.
        let mut it = YIter::new(&an.b, &rho).map_err(|e| e.to_string())?;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let y0 = p.field.from_rational(-half.clone());
        ensure!(it.value().sub(&y0).is_zero(), "Y_0 is not -1/2");
        it.advance().map_err(|e| e.to_string())?;
        let y1 = p
            .field
            .element(vec![BigRational::from_integer(BigInt::from(1)), -half])
            .map_err(|e| e.to_string())?;
        ensure!(it.value().sub(&y1).is_zero(), "Y_1 is not 1 - β/2");
        Ok(())
    });
}

#[test]
fn criterion_04_nonvanishing_and_forgery() {
    criterion(4, "linear forms never vanish; forged digits are rejected", || {
        let (_td, mut p) = golden_pipeline(10_001);
        let an = analyze(&p).map_err(|e| e.to_string())?;
        let r_max = an.np_max;
        ensure!(r_max >= 10_001, "reduced horizon too short: {r_max}");
        let rho = RhoTable::build(&an.exchange, an.b.d(), r_max - 1).map_err(|e| e.to_string())?;
        // The stream checks every Y_R ≠ 0 and errors on a vanishing value.
        let lf = stream_linear_forms(&mut p.emb, &an.b, &rho, r_max, None)
            .map_err(|e| format!("vanishing check failed: {e}"))?;
        ensure!(lf.rows.len() == r_max, "streamed {} shifts", lf.rows.len());

        let td = TempDir::new().map_err(|e| e.to_string())?;
        let forged = common::write_forged(td.path(), 120);
        let cfg = Config::load(&forged).map_err(|e| e.to_string())?;
        match run_verify(cfg, None, None) {
            Err(Error::HypothesisIiiViolated { witness }) => {
                ensure!(witness == 1, "witness exponent {witness}, expected 1");
            }
            Err(other) => return Err(format!("unexpected rejection: {other}")),
            Ok(_) => return Err("forged instance was accepted".into()),
        }
        Ok(())
    });
}

#[test]
fn criterion_05_non_integrality_decision() {
    criterion(5, "non-integrality orbit decision with witness", || {
        let (_td, p) = golden_pipeline(50);
        let an = analyze(&p).map_err(|e| e.to_string())?;
        // Unit π = 2: the hypothesis holds, decided within q^d = 4 orbit steps.
        let iii = check_hypothesis_iii(an.b.b0());
        ensure!(iii.holds, "expected the hypothesis to hold for unit 2");
        ensure!(iii.witness.is_none(), "unexpected witness");
        ensure!(iii.modulus == BigInt::from(2), "orbit modulus {}", iii.modulus);
        ensure!(iii.steps <= 4, "orbit took {} steps, bound q^d = 4", iii.steps);

        // Unit π = 1 on the same reduced relation: B₀ becomes integral, so
        // the hypothesis fails immediately with witness exponent 1.
        let b_unit = compute_b(&an.reduction.a_tilde, &p.field.one()).map_err(|e| e.to_string())?;
        let iii1 = check_hypothesis_iii(b_unit.b0());
        ensure!(!iii1.holds, "expected the hypothesis to fail for unit 1");
        ensure!(
            iii1.witness == Some(1),
            "witness {:?}, expected Some(1)",
            iii1.witness
        );
        ensure!(iii1.integral_at_zero, "B_0 should be integral for unit 1");
        Ok(())
    });
}

#[test]
fn criterion_06_certified_lower_bound() {
    criterion(6, "certified |Y_R| > R^-C7 on the full recheck range", || {
        let (_td, mut p) = golden_pipeline(10_001);
        let an = analyze(&p).map_err(|e| e.to_string())?;
        let t_big = p.cfg.digit_bound();
        let consts =
            derive_constants(&mut p.emb, &an.b, &t_big, an.reduction.n0).map_err(|e| e.to_string())?;
        ensure!(consts.c7 == 3, "C7 = {}, expected 3", consts.c7);
        ensure!(consts.c8 == 41, "C8 = {}, expected 41", consts.c8);
        let r_max = an.np_max;
        let rho = RhoTable::build(&an.exchange, an.b.d(), r_max - 1).map_err(|e| e.to_string())?;
        // With constants supplied, the stream re-certifies the polynomial
        // lower bound on every shift in [C8, 10^4] and errors on failure.
        let lf = stream_linear_forms(&mut p.emb, &an.b, &rho, r_max, Some(&consts))
            .map_err(|e| format!("lower-bound certification failed: {e}"))?;
        ensure!(
            lf.lower_checked == (41, 10_000),
            "recheck range {:?}, expected (41, 10000)",
            lf.lower_checked
        );
        // Negative control: a deliberately tiny value must fail the bound.
        let tiny = p.field.from_rational(BigRational::new(
            BigInt::from(1),
            BigInt::from(1_000_000_000i64),
        ));
        let ok = verify_y_lower_bound(&mut p.emb, &tiny, 100, consts.c7).map_err(|e| e.to_string())?;
        ensure!(!ok, "1e-9 passed the bound 100^-3");
        Ok(())
    });
}

#[test]
fn criterion_07_count_and_gap_bounds() {
    criterion(7, "threshold-count and gap-distance bounds at fixed horizons", || {
        let (_td, mut p) = golden_pipeline(10_000);
        let an = analyze(&p).map_err(|e| e.to_string())?;
        let t_big = p.cfg.digit_bound();
        let consts =
            derive_constants(&mut p.emb, &an.b, &t_big, an.reduction.n0).map_err(|e| e.to_string())?;
        let r_max = an.np_max;
        let rho = RhoTable::build(&an.exchange, an.b.d(), r_max - 1).map_err(|e| e.to_string())?;
        let lf = stream_linear_forms(&mut p.emb, &an.b, &rho, r_max, None)
            .map_err(|e| e.to_string())?;
        let expected_counts = [(100usize, 67usize), (1000, 667), (10_000, 6_667)];
        for (n, want) in expected_counts {
            let y_n = lambda_count(&lf.above, n);
            ensure!(y_n == want, "y_{n} = {y_n}, expected {want}");
            let lambda = an.exchange.lambda(n).map_err(|e| e.to_string())?;
            let ok = check_count_bound(y_n as u64, n as u64, lambda as u64, &consts)
                .map_err(|e| e.to_string())?;
            ensure!(ok, "count bound failed at N = {n}");

            // Distance from every admissible shift back to the previous
            // above-threshold shift, certified against 2·C10·log_|β| N.
            let gaps = gap_structure(&an.exchange, an.b.d(), n).map_err(|e| e.to_string())?;
            let mut max_distance: Option<usize> = None;
            for h in 1..=gaps.tau() {
                let (lo, hi) = gaps.interval(h).map_err(|e| e.to_string())?;
                let start = admissible_threshold(lo as u64, n as u64, &consts)
                    .map_err(|e| e.to_string())? as usize;
                for r in start..hi {
                    let idx = lf.above.partition_point(|&a| a <= r);
                    let prev = idx
                        .checked_sub(1)
                        .map(|i| lf.above[i])
                        .ok_or_else(|| format!("no above-threshold shift before {r}"))?;
                    let dist = r - prev;
                    if max_distance.map(|m| dist > m).unwrap_or(true) {
                        max_distance = Some(dist);
                    }
                }
            }
            if let Some(md) = max_distance {
                ensure!(md == 1, "max gap distance {md} at N = {n}, expected 1");
                let ok = check_gap_distance(md as u64, n as u64, &consts)
                    .map_err(|e| e.to_string())?;
                ensure!(ok, "gap-distance bound failed at N = {n}");
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_end_to_end() {
    criterion(8, "full certified runs at N = 100000 within ten minutes", || {
        let t0 = Instant::now();

        // Golden instance: greedy digits, real quadratic base, no shift.
        let td = TempDir::new().map_err(|e| e.to_string())?;
        let path = common::write_golden(td.path(), 100_000, &[100, 1000, 10_000, 100_000]);
        let cfg = Config::load(&path).map_err(|e| e.to_string())?;
        let art = run_verify(cfg, None, None).map_err(|e| format!("golden run: {e}"))?;
        let r = &art.report;
        ensure!(!r.horizon_clamped, "horizon unexpectedly clamped");
        ensure!(r.effective_n_max == 100_000, "horizon {}", r.effective_n_max);
        ensure!(r.hypotheses.integrality_ok, "integrality rejected");
        ensure!(r.hypotheses.non_integrality_holds, "non-integrality rejected");
        ensure!(r.reduction.delta == 0, "golden shift {}", r.reduction.delta);
        for row in &r.rows {
            ensure!(row.bound_holds, "headline bound failed at N = {}", row.n);
        }
        ensure!(
            r.rows.last().map(|row| row.gamma) == Some(66_667),
            "gamma at the last checkpoint"
        );
        ensure!(
            r.sweep.violations_in_claimed_range == 0,
            "{} violations in the claimed range",
            r.sweep.violations_in_claimed_range
        );
        ensure!(r.sweep.holds_from == Some(2), "holds_from {:?}", r.sweep.holds_from);
        ensure!(r.lemma_checks.telescoping_ok, "telescoping failed");
        ensure!(
            r.lemma_checks.stream_matches_closed == 4,
            "closed-form samples {}",
            r.lemma_checks.stream_matches_closed
        );
        ensure!(
            r.lemma_checks.recursion_verified >= 100,
            "recursions verified {}",
            r.lemma_checks.recursion_verified
        );
        ensure!(
            r.lemma_checks.count_bound.iter().all(|c| c.ok),
            "a count bound failed"
        );
        ensure!(
            r.lemma_checks.gap_bound.iter().all(|g| g.ok),
            "a gap bound failed"
        );

        // Complex quadratic instance: file digits, degree-2 relation,
        // leading zero digits force a reduction shift of 2.
        let td2 = TempDir::new().map_err(|e| e.to_string())?;
        let path2 = common::write_complexquad(td2.path(), 100_002, 100_000, &[100, 10_000, 100_000]);
        let cfg2 = Config::load(&path2).map_err(|e| e.to_string())?;
        let art2 = run_verify(cfg2, None, None).map_err(|e| format!("complex run: {e}"))?;
        let r2 = &art2.report;
        ensure!(!r2.horizon_clamped, "complex horizon unexpectedly clamped");
        ensure!(r2.reduction.n0 == 4, "first nonzero digit at {}", r2.reduction.n0);
        ensure!(r2.reduction.delta == 2, "shift {}", r2.reduction.delta);
        ensure!(r2.hypotheses.integrality_ok, "complex integrality rejected");
        ensure!(
            r2.hypotheses.non_integrality_holds,
            "complex non-integrality rejected"
        );
        ensure!(
            r2.hypotheses.orbit_modulus == "3",
            "orbit modulus {}",
            r2.hypotheses.orbit_modulus
        );
        for row in &r2.rows {
            ensure!(row.bound_holds, "complex bound failed at N = {}", row.n);
        }
        ensure!(
            r2.sweep.violations_in_claimed_range == 0,
            "complex violations {}",
            r2.sweep.violations_in_claimed_range
        );
        ensure!(
            r2.lemma_checks.count_bound.iter().all(|c| c.ok)
                && r2.lemma_checks.gap_bound.iter().all(|g| g.ok),
            "a complex lemma check failed"
        );

        let dt = t0.elapsed();
        ensure!(dt < Duration::from_secs(600), "took {dt:?}, budget 600s");
        Ok(())
    });
}

#[test]
fn criterion_09_nonzero_digits_vs_transitions() {
    criterion(9, "ν(N) ≥ γ(N)/2 − 1 on every greedy horizon", || {
        let n_max = 100_000usize;
        let td = TempDir::new().map_err(|e| e.to_string())?;
        let configs = [
            common::write_golden(td.path(), n_max, &[n_max]),
            common::write_b2(td.path(), n_max, &[n_max]),
        ];
        for path in configs {
            let cfg = Config::load(&path).map_err(|e| e.to_string())?;
            let p = Pipeline::new(cfg, None, None).map_err(|e| e.to_string())?;
            let gamma = p.digits.gamma_prefix(n_max).map_err(|e| e.to_string())?;
            let nu = p.digits.nu_prefix(n_max).map_err(|e| e.to_string())?;
            for n in 1..=n_max {
                // Integer form of ν ≥ γ/2 − 1.
                ensure!(
                    2 * nu[n] + 2 >= gamma[n],
                    "{}: ν({n}) = {} against γ({n}) = {}",
                    path.display(),
                    nu[n],
                    gamma[n]
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_sumset_growth() {
    criterion(10, "sumset counting function obeys power and chain bounds", || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0010);
        for trial in 0..1000 {
            let horizon = rng.gen_range(40..=240usize);
            let size = rng.gen_range(2..=10usize);
            let mut support = vec![0usize];
            while support.len() < size {
                support.push(rng.gen_range(1..horizon));
            }
            support.sort_unstable();
            support.dedup();
            let lam1 = Sumset::build(&support, 1, horizon).members().len();
            ensure!(lam1 == support.len(), "trial {trial}: base count");
            let mut prev = lam1;
            for k in 2..=4usize {
                let lk = Sumset::build(&support, k, horizon).members().len();
                ensure!(
                    lk <= lam1.pow(k as u32),
                    "trial {trial}: λ({k}Γ) = {lk} exceeds λ(Γ)^{k} = {}",
                    lam1.pow(k as u32)
                );
                ensure!(
                    lk <= prev * lam1,
                    "trial {trial}: λ({k}Γ) = {lk} exceeds λ({}Γ)·λ(Γ) = {}",
                    k - 1,
                    prev * lam1
                );
                prev = lk;
            }
        }
        Ok(())
    });
}
