//! Instance configuration: one TOML file fully reproduces a run.
//!
//! ```toml
//! [field]
//! polynomial = [-1, -1, 1]   # integer coefficients, constant term first
//! root_index = 0             # canonical root order: descending modulus,
//!                            # ties broken by argument
//! precision_cap = 16384      # optional, bits
//!
//! [instance]
//! a = [["-1"], ["2"]]        # A_0..A_D, each a coordinate vector of
//!                            # rationals "num/den" in the power basis
//! pi = ["2"]                 # nonzero multiplier, same format
//! digit_bound = 1            # T
//!
//! [digits]
//! source = "greedy"          # or "file"
//! xi = ["1/2"]               # greedy start value (coordinate vector)
//! # path = "digits.txt"      # file source: one integer per line,
//!                            # optional "# T=<bound>" header
//!
//! [schedule]
//! n_max = 1000
//! # checkpoints = [100, 1000]  # default: powers of 10 up to n_max
//! ```
//!
//! Coordinate vectors may be shorter than the field degree; missing high
//! coordinates are zero. Relative digit-file paths resolve against the
//! directory containing the config file.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::expansion::{greedy_digits, DigitData};
use crate::field::{FieldElement, NumberField};
use crate::poly::IntPoly;

pub const DEFAULT_PRECISION_CAP: u32 = 1 << 14;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub field: FieldSection,
    pub instance: InstanceSection,
    pub digits: DigitsSection,
    pub schedule: ScheduleSection,
    /// Directory of the config file, for resolving relative paths.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    /// Integer coefficients, constant term first; must be monic.
    pub polynomial: Vec<i64>,
    /// Which root is β, in canonical order.
    #[serde(default)]
    pub root_index: usize,
    /// Working-precision cap in bits.
    #[serde(default = "default_precision_cap")]
    pub precision_cap: u32,
}

fn default_precision_cap() -> u32 {
    DEFAULT_PRECISION_CAP
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSection {
    /// Vanishing-relation coefficients `A_0..A_D` as coordinate vectors.
    pub a: Vec<Vec<String>>,
    /// Nonzero multiplier `π` as a coordinate vector.
    pub pi: Vec<String>,
    /// Digit bound `T ≥ 1`.
    pub digit_bound: u64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DigitsSection {
    /// "greedy" or "file".
    pub source: String,
    /// Greedy start value ξ as a coordinate vector.
    pub xi: Option<Vec<String>>,
    /// Digit file path for the "file" source.
    pub path: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    /// Largest digit horizon N.
    pub n_max: usize,
    /// Horizons for emitted report rows; default: powers of 10 up to
    /// n_max, plus n_max itself.
    pub checkpoints: Option<Vec<usize>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig {
            what: format!("cannot read {}: {e}", path.display()),
        })?;
        let mut cfg: Config = toml::from_str(&text).map_err(|e| Error::InvalidConfig {
            what: format!("{}: {e}", path.display()),
        })?;
        cfg.base_dir = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.field.polynomial.len() < 2 {
            return Err(Error::InvalidConfig {
                what: "field.polynomial must have degree at least 1".into(),
            });
        }
        if self.instance.a.len() < 2 {
            return Err(Error::InvalidConfig {
                what: "instance.a must list A_0..A_D with D >= 1".into(),
            });
        }
        if self.instance.digit_bound == 0 {
            return Err(Error::InvalidConfig {
                what: "instance.digit_bound must be at least 1".into(),
            });
        }
        match self.digits.source.as_str() {
            "greedy" => {
                if self.digits.xi.is_none() {
                    return Err(Error::InvalidConfig {
                        what: "digits.source = \"greedy\" requires digits.xi".into(),
                    });
                }
            }
            "file" => {
                if self.digits.path.is_none() {
                    return Err(Error::InvalidConfig {
                        what: "digits.source = \"file\" requires digits.path".into(),
                    });
                }
            }
            other => {
                return Err(Error::InvalidConfig {
                    what: format!("unknown digits.source {other:?} (use \"greedy\" or \"file\")"),
                });
            }
        }
        if self.schedule.n_max < 2 {
            return Err(Error::InvalidConfig {
                what: "schedule.n_max must be at least 2".into(),
            });
        }
        if let Some(cps) = &self.schedule.checkpoints {
            if cps.iter().any(|&n| n < 1 || n > self.schedule.n_max) {
                return Err(Error::InvalidConfig {
                    what: "schedule.checkpoints must lie in [1, n_max]".into(),
                });
            }
        }
        Ok(())
    }

    pub fn build_field(&self) -> Result<Arc<NumberField>> {
        let coeffs: Vec<BigInt> = self.field.polynomial.iter().map(|&c| BigInt::from(c)).collect();
        NumberField::new(IntPoly::new(coeffs))
    }

    pub fn build_embedding(&self, field: &Arc<NumberField>) -> Result<Embedding> {
        Embedding::new(field, self.field.root_index, self.field.precision_cap)
    }

    pub fn element(&self, field: &Arc<NumberField>, coords: &[String]) -> Result<FieldElement> {
        let d = field.degree();
        if coords.len() > d {
            return Err(Error::InvalidConfig {
                what: format!(
                    "coordinate vector has {} entries but the field degree is {d}",
                    coords.len()
                ),
            });
        }
        let mut full = Vec::with_capacity(d);
        for c in coords {
            full.push(parse_rational(c)?);
        }
        full.resize(d, BigRational::zero());
        field.element(full)
    }

    pub fn a_elements(&self, field: &Arc<NumberField>) -> Result<Vec<FieldElement>> {
        self.instance
            .a
            .iter()
            .map(|coords| self.element(field, coords))
            .collect()
    }

    pub fn pi_element(&self, field: &Arc<NumberField>) -> Result<FieldElement> {
        let pi = self.element(field, &self.instance.pi)?;
        if pi.is_zero() {
            return Err(Error::InvalidConfig {
                what: "instance.pi must be nonzero".into(),
            });
        }
        Ok(pi)
    }

    pub fn digit_bound(&self) -> BigInt {
        BigInt::from(self.instance.digit_bound)
    }

    /// Load or generate at least `count` digits. File digits are
    /// re-validated against the configured bound; greedy digits require a
    /// real embedding and ξ ∈ [0, 1).
    pub fn load_digits(&self, emb: &mut Embedding, count: usize) -> Result<DigitData> {
        match self.digits.source.as_str() {
            "file" => {
                let raw = self.digits.path.as_ref().expect("validated");
                let mut path = PathBuf::from(raw);
                if path.is_relative() {
                    path = self.base_dir.join(path);
                }
                let data = DigitData::read_file(&path)?;
                let bound = self.digit_bound();
                for (i, t) in data.digits().iter().enumerate() {
                    if t.abs() > bound {
                        return Err(Error::DigitFile {
                            what: format!(
                                "digit {} at line {} exceeds the configured bound {}",
                                t,
                                i + 1,
                                bound
                            ),
                        });
                    }
                }
                DigitData::new_user(data.digits().to_vec(), bound)
            }
            "greedy" => {
                let field = emb.field().clone();
                let xi_coords = self.digits.xi.as_ref().expect("validated");
                let xi = self.element(&field, xi_coords)?;
                let digits = greedy_digits(emb, &xi, count)?;
                let bound = self.digit_bound();
                if digits.bound() > &bound {
                    return Err(Error::OutOfRange {
                        what: format!(
                            "greedy digits reach {} but the configured bound is {}",
                            digits.bound(),
                            bound
                        ),
                    });
                }
                DigitData::new_user(digits.digits().to_vec(), bound)
            }
            _ => unreachable!("validated"),
        }
    }

    /// Report-row horizons: explicit checkpoints, or powers of 10 capped
    /// at n_max (always including n_max).
    pub fn checkpoints(&self) -> Vec<usize> {
        let n_max = self.schedule.n_max;
        let mut cps = match &self.schedule.checkpoints {
            Some(v) => v.clone(),
            None => {
                let mut v = Vec::new();
                let mut n = 10usize;
                while n < n_max {
                    v.push(n);
                    match n.checked_mul(10) {
                        Some(next) => n = next,
                        None => break,
                    }
                }
                v
            }
        };
        cps.push(n_max);
        cps.sort_unstable();
        cps.dedup();
        cps
    }
}

/// Parse "num/den" or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |why: &str| Error::InvalidConfig {
        what: format!("cannot parse rational {s:?}: {why}"),
    };
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad("bad numerator"))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|_| bad("bad integer"))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Parse a comma-separated integer list in descending power order
/// ("1,-1,-1" is X²−X−1) into a constant-first polynomial. This is the
/// natural reading order for a polynomial typed on a command line; config
/// files use constant-first lists instead.
pub fn parse_polynomial_descending(s: &str) -> Result<IntPoly> {
    let mut coeffs = Vec::new();
    for part in s.split(',') {
        let c = BigInt::from_str(part.trim()).map_err(|_| Error::InvalidConfig {
            what: format!("cannot parse polynomial coefficient {:?}", part.trim()),
        })?;
        coeffs.push(c);
    }
    if coeffs.len() < 2 {
        return Err(Error::InvalidConfig {
            what: "polynomial must have degree at least 1".into(),
        });
    }
    coeffs.reverse();
    Ok(IntPoly::new(coeffs))
}

/// Render a field element's coordinates as the config/CSV coordinate
/// format: "num/den" entries joined by semicolons.
pub fn coords_string(x: &FieldElement) -> String {
    x.coords()
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            }
        })
        .collect::<Vec<_>>()
        .join(";")
}
