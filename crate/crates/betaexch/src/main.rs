//! Command-line front end: classification, expansion, exchange transform,
//! linear-form tables, constant derivation, and end-to-end verification.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use betaexch::classify::classify;
use betaexch::config::{parse_polynomial_descending, Config};
use betaexch::constants::derive_constants;
use betaexch::error::Result;
use betaexch::linforms::RhoTable;
use betaexch::report::{
    analyze, expansion_csv, run_verify, stream_linear_forms, write_atomic, Pipeline,
};

#[derive(Parser)]
#[command(
    name = "betaexch",
    version,
    about = "Exact beta-expansion digit-exchange statistics with certified bound verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the base: Pisot, Salem, quasi-Pisot, quasi-Salem, or none.
    Classify {
        /// Comma-separated integer coefficients, highest power first
        /// ("1,-1,-1" is X^2-X-1). Must be monic.
        polynomial: String,
        /// Working-precision cap in bits.
        #[arg(long, default_value_t = betaexch::config::DEFAULT_PRECISION_CAP)]
        precision_cap: u32,
        /// Write classification.json here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the digit sequence with running exchange statistics.
    Expand {
        #[arg(long)]
        config: PathBuf,
        /// Override the schedule horizon.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
    /// Emit the exchange sequence s and its support.
    Transform {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
    /// Emit the linear-form table with certified threshold decisions.
    Linearforms {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
    /// Derive and emit the full explicit-constant record.
    Constants {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
    /// Run the full pipeline and write report.json, linearforms.csv, and
    /// plot.csv.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
        /// Output directory (created if missing).
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
}

fn emit(out: &Option<PathBuf>, filename: &str, content: &str) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            write_atomic(&dir.join(filename), content)
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn big_to_json(v: &num_bigint::BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::Value::from(v.to_string()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Classify {
            polynomial,
            precision_cap,
            out,
        } => {
            let p = parse_polynomial_descending(&polynomial)?;
            let c = classify(&p, precision_cap)?;
            let text = format!("{}\n", serde_json::to_string_pretty(&c).expect("serialize"));
            emit(&out, "classification.json", &text)
        }
        Cmd::Expand {
            config,
            n_max,
            out,
            format,
            precision_cap,
        } => {
            let cfg = Config::load(&config)?;
            let p = Pipeline::new(cfg, n_max, precision_cap)?;
            match format {
                Format::Csv => {
                    let csv = expansion_csv(&p.digits, p.n_max)?;
                    emit(&out, "expansion.csv", &csv)
                }
                Format::Json => {
                    let gamma = p.digits.gamma_prefix(p.n_max)?;
                    let nu = p.digits.nu_prefix(p.n_max)?;
                    let digits: Vec<serde_json::Value> =
                        p.digits.digits()[..p.n_max].iter().map(big_to_json).collect();
                    let doc = json!({
                        "n_max": p.n_max,
                        "T": big_to_json(p.digits.bound()),
                        "digits": digits,
                        "gamma": &gamma[1..],
                        "nu": &nu[1..],
                    });
                    let text = format!("{}\n", serde_json::to_string_pretty(&doc).expect("serialize"));
                    emit(&out, "expansion.json", &text)
                }
            }
        }
        Cmd::Transform {
            config,
            n_max,
            out,
            format,
            precision_cap,
        } => {
            let cfg = Config::load(&config)?;
            let p = Pipeline::new(cfg, n_max, precision_cap)?;
            let an = analyze(&p)?;
            let np = an.np_max.min(an.exchange.len());
            match format {
                Format::Json => {
                    let s: Vec<serde_json::Value> =
                        an.exchange.s()[..np].iter().map(big_to_json).collect();
                    let gi: Vec<usize> = an
                        .exchange
                        .support()
                        .iter()
                        .copied()
                        .take_while(|&i| i < np)
                        .collect();
                    let doc = json!({
                        "n0": an.reduction.n0,
                        "s": s,
                        "gamma_indices": gi,
                        "T": big_to_json(an.exchange.bound()),
                    });
                    let text = format!("{}\n", serde_json::to_string_pretty(&doc).expect("serialize"));
                    emit(&out, "transform.json", &text)
                }
                Format::Csv => {
                    let mut csv = String::from("n,s_n\n");
                    for (n, v) in an.exchange.s()[..np].iter().enumerate() {
                        csv.push_str(&format!("{n},{v}\n"));
                    }
                    emit(&out, "transform.csv", &csv)
                }
            }
        }
        Cmd::Linearforms {
            config,
            n_max,
            out,
            format,
            precision_cap,
        } => {
            let cfg = Config::load(&config)?;
            let mut p = Pipeline::new(cfg, n_max, precision_cap)?;
            let an = analyze(&p)?;
            let r_max = an.np_max;
            let rho = RhoTable::build(&an.exchange, an.b.d(), r_max.saturating_sub(1).max(1))?;
            let lf = stream_linear_forms(&mut p.emb, &an.b, &rho, r_max, None)?;
            match format {
                Format::Csv => emit(&out, "linearforms.csv", &lf.csv()),
                Format::Json => {
                    let text = format!(
                        "{}\n",
                        serde_json::to_string_pretty(&lf.rows).expect("serialize")
                    );
                    emit(&out, "linearforms.json", &text)
                }
            }
        }
        Cmd::Constants {
            config,
            out,
            format,
            precision_cap,
        } => {
            let cfg = Config::load(&config)?;
            let mut p = Pipeline::new(cfg, None, precision_cap)?;
            let an = analyze(&p)?;
            let t = p.cfg.digit_bound();
            let c = derive_constants(&mut p.emb, &an.b, &t, an.reduction.n0)?;
            let rec = c.record();
            match format {
                Format::Json => {
                    let text = format!(
                        "{}\n",
                        serde_json::to_string_pretty(&rec).expect("serialize")
                    );
                    emit(&out, "constants.json", &text)
                }
                Format::Csv => {
                    let mut csv = String::from("name,value,formula,role\n");
                    for e in &rec.constants {
                        csv.push_str(&format!(
                            "{},\"{}\",\"{}\",\"{}\"\n",
                            e.name, e.value, e.formula, e.role
                        ));
                    }
                    for t in &rec.thresholds {
                        csv.push_str(&format!(
                            "threshold:{},{},\"{}\",\"validity threshold\"\n",
                            t.name, t.value, t.condition
                        ));
                    }
                    emit(&out, "constants.csv", &csv)
                }
            }
        }
        Cmd::Verify {
            config,
            n_max,
            out,
            precision_cap,
        } => {
            let cfg = Config::load(&config)?;
            let art = run_verify(cfg, n_max, precision_cap)?;
            std::fs::create_dir_all(&out)?;
            let report_text = format!(
                "{}\n",
                serde_json::to_string_pretty(&art.report).expect("serialize")
            );
            write_atomic(&out.join("report.json"), &report_text)?;
            write_atomic(&out.join("linearforms.csv"), &art.linearforms_csv)?;
            write_atomic(&out.join("plot.csv"), &art.plot_csv)?;
            let rep = &art.report;
            println!(
                "ok: N={} gamma={} claimed_from={} holds_from={} -> {}",
                rep.effective_n_max,
                rep.rows.last().map(|r| r.gamma).unwrap_or(0),
                rep.sweep.claimed_from,
                rep.sweep
                    .holds_from
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "none".into()),
                out.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code().clamp(1, 255) as u8;
            ExitCode::from(code)
        }
    }
}
