//! Command-line interface.
//!
//! Exit codes: 0 for a positive finding (consistent, flat, Einstein, ...),
//! 1 for a definitive negative finding (still a successful run), 2 for
//! usage or input errors, 3 for an internal invariant breach (selftest
//! failure, bridge disagreement, broken certificate).
//!
//! The truncation order is resolved in this precedence: `--order` flag,
//! `DIASTASIS_ORDER` environment variable, the stored window of a file
//! input, default 4. Subcommands that consume window (metric, bridge)
//! realize the input with the margin they need on top of that order.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use crate::calabi::{find_inducing_multiple, inducibility, InducibilityVerdict};
use crate::cone::{ConePotential, ConeVerdict};
use crate::corpus::{parse_rational, PotentialSpec};
use crate::curvature::{ricci_flat_check, ricci_report, sasaki_einstein_bridge};
use crate::error::{Error, Result};
use crate::report::{
    self, canonical_series_text, cone_value, inducibility_value, matrix_value,
    multiple_search_value, Report,
};
use crate::selftest;
use crate::series::HermitianSeries;

const DEFAULT_ORDER: u32 = 4;
const ORDER_ENV: &str = "DIASTASIS_ORDER";

fn rational_arg(text: &str) -> std::result::Result<BigRational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "diastasis",
    version,
    about = "Exact certification of projectively induced Kähler metrics, \
             cone lifts, and curvature reports"
)]
pub struct Cli {
    /// Write a deterministic JSON report to this path ('-' for stdout).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the truncated criterion for a potential.
    Analyze {
        /// Builtin name (e.g. fs:2, hyperbolic:1:3) or potential file path.
        potential: String,
        /// Truncation order.
        #[arg(long)]
        order: Option<u32>,
    },
    /// Scan integer multiples of a potential for the smallest consistent one.
    Multiple {
        potential: String,
        /// Largest multiple to try.
        #[arg(long, default_value_t = 5)]
        max_multiple: u32,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Lift a base potential to a cone of weight 1/DENOMINATOR and decide
    /// the criterion blockwise.
    Lift {
        psi: String,
        /// Cone weight is 1 / this integer.
        #[arg(long, default_value_t = 1)]
        denominator: u32,
        /// Number of radial blocks to check.
        #[arg(long, default_value_t = 3)]
        max_block: u32,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Rescale a cone's weight and compare verdicts before and after.
    Homothety {
        psi: String,
        /// Cone weight before rescaling.
        #[arg(long, default_value = "1", value_parser = rational_arg)]
        weight: BigRational,
        /// Homothety factor applied to the weight.
        #[arg(long, value_parser = rational_arg)]
        factor: BigRational,
        #[arg(long, default_value_t = 3)]
        max_block: u32,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Print the radial block matrices of a cone.
    Blocks {
        psi: String,
        #[arg(long, default_value = "1", value_parser = rational_arg)]
        weight: BigRational,
        #[arg(long, default_value_t = 3)]
        max_block: u32,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Recentred slice matrix of a cone at a rational slice position, with
    /// its exact deviation from the limit matrix.
    Epsilon {
        psi: String,
        #[arg(long, default_value = "1", value_parser = rational_arg)]
        weight: BigRational,
        /// Slice position (positive rational).
        #[arg(long, value_parser = rational_arg)]
        epsilon: BigRational,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Check Ricci-flatness of a potential (apex degeneracy allowed).
    Ricci {
        potential: String,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Detect an Einstein constant and verify it exactly.
    Einstein {
        potential: String,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Compare base Einstein constant against cone Ricci-flatness for
    /// chi = psi / DENOMINATOR.
    Bridge {
        psi: String,
        #[arg(long, default_value_t = 1)]
        denominator: u32,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Try to rescale a cone onto the standard flat germ.
    Flatness {
        psi: String,
        #[arg(long, default_value_t = 1)]
        denominator: u32,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Run the acceptance battery.
    Selftest,
}

/// Entry point for the binary.
pub fn run() -> i32 {
    execute(Cli::parse())
}

struct Emitter {
    json: Option<PathBuf>,
}

impl Emitter {
    /// Print a human line unless JSON goes to stdout.
    fn say(&self, line: &str) {
        if self.json.as_deref() != Some(std::path::Path::new("-")) {
            println!("{line}");
        }
    }

    fn finish(&self, report: &Report) -> Result<()> {
        if let Some(path) = &self.json {
            let text = report.to_json_string();
            if path.as_os_str() == "-" {
                print!("{text}");
            } else {
                std::fs::write(path, text)?;
            }
        }
        Ok(())
    }
}

/// Run a parsed invocation and return the exit code.
pub fn execute(cli: Cli) -> i32 {
    let emitter = Emitter { json: cli.json };
    match dispatch(cli.command, &emitter) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) | Error::ToleranceBreach { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn resolve_order(flag: Option<u32>, spec: &PotentialSpec) -> Result<u32> {
    if let Some(d) = flag {
        return Ok(d);
    }
    if let Ok(text) = std::env::var(ORDER_ENV) {
        return text.trim().parse::<u32>().map_err(|_| {
            Error::Parse(format!("{ORDER_ENV} must be a nonnegative integer, got {text:?}"))
        });
    }
    if let Some(d) = spec.natural_order()? {
        return Ok(d);
    }
    Ok(DEFAULT_ORDER)
}

fn verdict_lines(verdict: &InducibilityVerdict, vars: usize, emitter: &Emitter) {
    match verdict {
        InducibilityVerdict::ConsistentUpTo {
            order,
            rank_lower_bound,
        } => {
            emitter.say(&format!(
                "verdict: consistent up to order {order} (inducing dimension at least {rank_lower_bound})"
            ));
        }
        InducibilityVerdict::NotInduced { order, witness, value } => {
            emitter.say(&format!(
                "verdict: not projectively induced (order {order}, witness value {value})"
            ));
            let graded = crate::series::GradedOrder::new(vars);
            for (i, c) in witness.iter().enumerate() {
                if !c.is_zero() {
                    emitter.say(&format!("  witness {}: {c}", graded.monomial_at(i)));
                }
            }
        }
    }
}

fn base_parameters(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn dispatch(command: Command, emitter: &Emitter) -> Result<i32> {
    match command {
        Command::Analyze { potential, order } => {
            let spec = PotentialSpec::parse(&potential)?;
            let d = resolve_order(order, &spec)?;
            let phi = spec.realize(d)?;
            let analysis = inducibility(&phi, d)?;
            emitter.say(&format!(
                "analyze {potential}: n={}, order {d}, criterion matrix dim {}",
                phi.vars(),
                analysis.matrix_dim
            ));
            verdict_lines(&analysis.verdict, phi.vars(), emitter);
            let code = if analysis.verdict.is_consistent() { 0 } else { 1 };
            let report = Report::new(
                "analyze",
                base_parameters(&[
                    ("potential", potential),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&phi),
                inducibility_value(&analysis, phi.vars()),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Multiple {
            potential,
            max_multiple,
            order,
        } => {
            let spec = PotentialSpec::parse(&potential)?;
            let d = resolve_order(order, &spec)?;
            let phi = spec.realize(d)?;
            let search = find_inducing_multiple(&phi, max_multiple, d)?;
            for attempt in &search.attempts {
                match &attempt.verdict {
                    InducibilityVerdict::ConsistentUpTo { rank_lower_bound, .. } => emitter.say(
                        &format!(
                            "multiple {}: consistent (rank lower bound {rank_lower_bound})",
                            attempt.multiple
                        ),
                    ),
                    InducibilityVerdict::NotInduced { value, .. } => emitter.say(&format!(
                        "multiple {}: not induced (witness value {value})",
                        attempt.multiple
                    )),
                }
            }
            let code = match search.minimal {
                Some(k) => {
                    emitter.say(&format!("minimal inducing multiple: {k}"));
                    0
                }
                None => {
                    emitter.say(&format!(
                        "no inducing multiple up to {max_multiple} at order {d}"
                    ));
                    1
                }
            };
            let report = Report::new(
                "multiple",
                base_parameters(&[
                    ("potential", potential),
                    ("max_multiple", max_multiple.to_string()),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&phi),
                multiple_search_value(&search),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Lift {
            psi,
            denominator,
            max_block,
            order,
        } => {
            let spec = PotentialSpec::parse(&psi)?;
            let d = resolve_order(order, &spec)?;
            let base = spec.realize(d)?;
            let cone = ConePotential::lift(&base, denominator)?;
            let analysis = cone.cone_inducibility(max_block, d)?;
            emitter.say(&format!(
                "lift {psi}: cone weight {}, order {d}, blocks 1..{max_block}",
                cone.weight()
            ));
            for b in &analysis.blocks {
                match b.rank {
                    Some(r) => emitter.say(&format!("block {}: dim {}, rank {r}", b.block, b.dim)),
                    None => emitter.say(&format!("block {}: dim {}, not positive", b.block, b.dim)),
                }
            }
            let code = cone_code(&analysis.verdict, emitter);
            let report = Report::new(
                "lift",
                base_parameters(&[
                    ("psi", psi),
                    ("denominator", denominator.to_string()),
                    ("max_block", max_block.to_string()),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&base),
                cone_value(&analysis, base.vars()),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Homothety {
            psi,
            weight,
            factor,
            max_block,
            order,
        } => {
            let spec = PotentialSpec::parse(&psi)?;
            let d = resolve_order(order, &spec)?;
            let base = spec.realize(d)?;
            let cone = ConePotential::new(weight.clone(), base.clone())?;
            let before = cone.cone_inducibility(max_block, d)?;
            let scaled = cone.homothety(&factor)?;
            let after = scaled.cone_inducibility(max_block, d)?;
            emitter.say(&format!(
                "homothety {psi}: weight {weight} -> {}",
                scaled.weight()
            ));
            emitter.say(&format!(
                "before: {}",
                cone_summary(&before.verdict)
            ));
            emitter.say(&format!("after:  {}", cone_summary(&after.verdict)));
            let code = if after.verdict.is_consistent() { 0 } else { 1 };
            let report = Report::new(
                "homothety",
                base_parameters(&[
                    ("psi", psi),
                    ("weight", weight.to_string()),
                    ("factor", factor.to_string()),
                    ("max_block", max_block.to_string()),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&base),
                serde_json::json!({
                    "weight_before": weight.to_string(),
                    "weight_after": scaled.weight().to_string(),
                    "before": cone_value(&before, base.vars()),
                    "after": cone_value(&after, base.vars()),
                }),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Blocks {
            psi,
            weight,
            max_block,
            order,
        } => {
            let spec = PotentialSpec::parse(&psi)?;
            let d = resolve_order(order, &spec)?;
            let base = spec.realize(d)?;
            let cone = ConePotential::new(weight.clone(), base.clone())?;
            let blocks = cone.radial_blocks(max_block, d)?;
            emitter.say(&format!(
                "blocks {psi}: weight {weight}, order {d}, blocks 1..{max_block}"
            ));
            let mut block_values = Vec::new();
            for b in &blocks {
                emitter.say(&format!("block {}: dim {}", b.block, b.matrix.dim()));
                block_values.push(serde_json::json!({
                    "block": b.block,
                    "matrix": matrix_value(&b.matrix),
                }));
            }
            let report = Report::new(
                "blocks",
                base_parameters(&[
                    ("psi", psi),
                    ("weight", weight.to_string()),
                    ("max_block", max_block.to_string()),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&base),
                serde_json::json!({ "order": d, "blocks": block_values }),
            );
            emitter.finish(&report)?;
            Ok(0)
        }

        Command::Epsilon {
            psi,
            weight,
            epsilon,
            order,
        } => {
            let spec = PotentialSpec::parse(&psi)?;
            let d = resolve_order(order, &spec)?;
            let base = spec.realize(d)?;
            let cone = ConePotential::new(weight.clone(), base.clone())?;
            let submatrix = cone.epsilon_submatrix(&epsilon, d)?;
            let limit = cone.epsilon_limit_matrix(d)?;
            let deviation = submatrix.max_abs_sq_deviation(&limit)?;
            emitter.say(&format!(
                "epsilon {psi}: weight {weight}, slice position {epsilon}, order {d}"
            ));
            emitter.say(&format!(
                "matrix dim {}, squared deviation from limit {deviation}",
                submatrix.dim()
            ));
            let report = Report::new(
                "epsilon",
                base_parameters(&[
                    ("psi", psi),
                    ("weight", weight.to_string()),
                    ("epsilon", epsilon.to_string()),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&base),
                serde_json::json!({
                    "order": d,
                    "epsilon": epsilon.to_string(),
                    "matrix": matrix_value(&submatrix),
                    "limit_matrix": matrix_value(&limit),
                    "max_abs_sq_deviation": deviation.to_string(),
                }),
            );
            emitter.finish(&report)?;
            Ok(0)
        }

        Command::Ricci { potential, order } => {
            let spec = PotentialSpec::parse(&potential)?;
            let d = resolve_order(order, &spec)?;
            let (phi, check) = ricci_with_margin(&spec, d)?;
            if check.flat {
                emitter.say(&format!("Ricci potential vanishes up to order {d}"));
            } else if let Some((m, k, c)) = &check.first_obstruction {
                emitter.say(&format!(
                    "not Ricci-flat: first obstruction at {m}|{k} with coefficient {c}"
                ));
            }
            let code = if check.flat { 0 } else { 1 };
            let report = Report::new(
                "ricci",
                base_parameters(&[
                    ("potential", potential),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&phi),
                report::ricci_flat_value(&check),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Einstein { potential, order } => {
            let spec = PotentialSpec::parse(&potential)?;
            let d = resolve_order(order, &spec)?;
            let phi = spec.realize(d + 1)?;
            let analysis = ricci_report(&phi, d)?;
            match (&analysis.lambda, analysis.einstein) {
                (Some(l), true) => {
                    emitter.say(&format!("Einstein constant {l}, verified exactly to order {d}"))
                }
                (Some(l), false) => emitter.say(&format!(
                    "not Einstein: candidate constant {l} leaves {} residual terms",
                    analysis.residual_terms
                )),
                (None, _) => emitter.say("not Einstein: no real candidate constant"),
            }
            let code = if analysis.einstein { 0 } else { 1 };
            let report = Report::new(
                "einstein",
                base_parameters(&[
                    ("potential", potential),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&phi),
                report::ricci_report_value(&analysis),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Bridge {
            psi,
            denominator,
            order,
        } => {
            let spec = PotentialSpec::parse(&psi)?;
            let d = resolve_order(order, &spec)?;
            let vars = spec.vars()? as u32;
            let base = spec.realize(d + vars)?;
            let bridge = sasaki_einstein_bridge(&base, denominator, d)?;
            emitter.say(&format!(
                "bridge {psi}: chi = psi / {denominator}, base n={}, order {d}",
                bridge.base_vars
            ));
            match &bridge.base_report.lambda {
                Some(l) => emitter.say(&format!(
                    "base Einstein constant: {l} (target {}), verified: {}",
                    bridge.einstein_target, bridge.base_report.einstein
                )),
                None => emitter.say("base has no Einstein constant"),
            }
            emitter.say(&format!("cone Ricci-flat: {}", bridge.cone_ricci_flat));
            let code = if !bridge.consistent {
                emitter.say("INTERNAL BREACH: the two sides disagree");
                3
            } else if bridge.base_is_einstein_target {
                emitter.say("bridge holds: Einstein base matches Ricci-flat cone");
                0
            } else {
                emitter.say("bridge holds: neither side satisfied");
                1
            };
            let report = Report::new(
                "bridge",
                base_parameters(&[
                    ("psi", psi),
                    ("denominator", denominator.to_string()),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&base),
                report::bridge_value(&bridge),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Flatness {
            psi,
            denominator,
            order,
        } => {
            let spec = PotentialSpec::parse(&psi)?;
            let d = resolve_order(order, &spec)?;
            let base = spec.realize(d)?;
            let cone = ConePotential::lift(&base, denominator)?;
            let witness = cone.flatness_witness()?;
            emitter.say(&format!(
                "flatness {psi}: cone weight {} -- {}",
                cone.weight(),
                witness.note
            ));
            let code = if witness.is_flat { 0 } else { 1 };
            let report = Report::new(
                "flatness",
                base_parameters(&[
                    ("psi", psi),
                    ("denominator", denominator.to_string()),
                    ("order", d.to_string()),
                ]),
                &canonical_series_text(&base),
                report::flatness_value(&witness),
            );
            emitter.finish(&report)?;
            Ok(code)
        }

        Command::Selftest => {
            let outcomes = selftest::run_all();
            for outcome in &outcomes {
                emitter.say(&outcome.display_line());
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            emitter.say(&format!("selftest: {passed}/{} criteria passed", outcomes.len()));
            let all = passed == outcomes.len();
            let result = serde_json::json!({
                "passed": all,
                "criteria": outcomes.iter().map(|o| serde_json::json!({
                    "index": o.index,
                    "name": o.name,
                    "passed": o.passed,
                    "detail": o.detail,
                })).collect::<Vec<_>>(),
            });
            let report = Report::new("selftest", BTreeMap::new(), "", result);
            emitter.finish(&report)?;
            Ok(if all { 0 } else { 3 })
        }
    }
}

fn cone_summary(verdict: &ConeVerdict) -> String {
    match verdict {
        ConeVerdict::ConsistentUpTo {
            order,
            rank_lower_bound,
        } => format!("consistent up to order {order} (rank lower bound {rank_lower_bound})"),
        ConeVerdict::NotInduced {
            order,
            block,
            value,
            ..
        } => format!("not induced at order {order}, block {block} (witness value {value})"),
    }
}

fn cone_code(verdict: &ConeVerdict, emitter: &Emitter) -> i32 {
    emitter.say(&format!("verdict: {}", cone_summary(verdict)));
    if verdict.is_consistent() {
        0
    } else {
        1
    }
}

/// Run the Ricci-flatness check, widening the realization window when
/// content division consumes more than the uniform margin of one order.
fn ricci_with_margin(
    spec: &PotentialSpec,
    order: u32,
) -> Result<(HermitianSeries, crate::curvature::RicciFlatReport)> {
    let vars = spec.vars()? as u32;
    let mut windows = vec![order + 1, order + 1 + vars];
    if let Some(limit) = spec.natural_order()? {
        windows.retain(|w| *w <= limit);
        if windows.last() != Some(&limit) {
            windows.push(limit);
        }
    }
    let last = windows.len() - 1;
    for (i, w) in windows.iter().enumerate() {
        let phi = spec.realize(*w)?;
        match ricci_flat_check(&phi, order) {
            Ok(check) => return Ok((phi, check)),
            Err(Error::InsufficientOrder { .. }) if i < last => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal("window search exhausted".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).expect("argument parse")
    }

    #[test]
    fn analyze_exit_codes() {
        assert_eq!(execute(parse(&["diastasis", "analyze", "fs:2", "--order", "3"])), 0);
        assert_eq!(
            execute(parse(&["diastasis", "analyze", "perturbed_quartic", "--order", "3"])),
            1
        );
        assert_eq!(
            execute(parse(&["diastasis", "analyze", "fs:0", "--order", "3"])),
            2
        );
    }

    #[test]
    fn curvature_exit_codes() {
        assert_eq!(
            execute(parse(&["diastasis", "einstein", "fs:1", "--order", "3"])),
            0
        );
        assert_eq!(
            execute(parse(&["diastasis", "einstein", "perturbed_quartic", "--order", "3"])),
            1
        );
        assert_eq!(
            execute(parse(&["diastasis", "ricci", "flat:1", "--order", "3"])),
            0
        );
    }

    #[test]
    fn homothety_flips_verdict() {
        assert_eq!(
            execute(parse(&[
                "diastasis",
                "homothety",
                "fs:1",
                "--weight",
                "1/2",
                "--factor",
                "2",
                "--order",
                "3",
            ])),
            0
        );
    }

    #[test]
    fn epsilon_requires_rational_power() {
        assert_eq!(
            execute(parse(&[
                "diastasis", "epsilon", "fs:1", "--weight", "1/4", "--epsilon", "1/2",
                "--order", "3",
            ])),
            2
        );
        assert_eq!(
            execute(parse(&[
                "diastasis", "epsilon", "fs:1", "--weight", "1/4", "--epsilon", "1/16",
                "--order", "3",
            ])),
            0
        );
    }
}
