//! Built-in potential families, the name grammar, and the on-disk format.
//!
//! A potential argument is either a builtin name or a path to a JSON file:
//!
//! ```text
//! flat:N                     sum of |z_i|^2
//! fs:N[:Q]                   Q * log(1 + sum |z_i|^2), Q a positive rational
//! fubini_study:N[:Q]         alias of fs
//! hyperbolic:N[:Q]           -Q * log(1 - sum |z_i|^2)
//! perturbed_quartic          |z|^2 - |z|^4/4 in one variable
//! product:spec,spec[,...]    direct sum on disjoint variable blocks
//! anything else              path to a potential file
//! ```
//!
//! Builtins realize at any requested window from their closed forms; files
//! carry a stored window and refuse to fabricate orders beyond it.
//!
//! File format (version 1): every coefficient is listed, including both
//! members of each Hermitian pair, with rationals as strings.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::cone::flat_potential;
use crate::error::{Error, Result};
use crate::series::{Coefficient, HermitianSeries, MixedSeries, MultiIndex};

/// Parse a rational from decimal-free `p/q` or integer `p` text.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("invalid rational {text:?}: {e}")))
}

/// A potential source: a builtin family or a file path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PotentialSpec {
    Flat { vars: usize },
    FubiniStudy { vars: usize, scale: BigRational },
    Hyperbolic { vars: usize, scale: BigRational },
    PerturbedQuartic,
    Product(Vec<PotentialSpec>),
    File(PathBuf),
}

fn parse_vars(text: &str, head: &str) -> Result<usize> {
    let n: usize = text
        .parse()
        .map_err(|_| Error::Parse(format!("{head}: invalid variable count {text:?}")))?;
    if n == 0 {
        return Err(Error::Parse(format!(
            "{head}: variable count must be at least 1"
        )));
    }
    Ok(n)
}

fn parse_scale(text: Option<&str>, head: &str) -> Result<BigRational> {
    match text {
        None => Ok(BigRational::one()),
        Some(t) => {
            let q = parse_rational(t)?;
            if !q.is_positive() {
                return Err(Error::NonPositive {
                    what: format!("{head} scale"),
                    got: q.to_string(),
                });
            }
            Ok(q)
        }
    }
}

impl PotentialSpec {
    /// Parse a potential argument. Known builtin heads are parsed strictly
    /// (malformed arguments are errors, not paths); anything else is a path.
    pub fn parse(text: &str) -> Result<PotentialSpec> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty potential spec".into()));
        }
        let (head, rest) = match text.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (text, None),
        };
        match head {
            "flat" => {
                let rest = rest.ok_or_else(|| {
                    Error::Parse("flat: expected flat:N".into())
                })?;
                Ok(PotentialSpec::Flat {
                    vars: parse_vars(rest, "flat")?,
                })
            }
            "fs" | "fubini_study" => {
                let rest =
                    rest.ok_or_else(|| Error::Parse(format!("{head}: expected {head}:N[:Q]")))?;
                let (nv, scale) = match rest.split_once(':') {
                    Some((nv, q)) => (nv, Some(q)),
                    None => (rest, None),
                };
                Ok(PotentialSpec::FubiniStudy {
                    vars: parse_vars(nv, head)?,
                    scale: parse_scale(scale, head)?,
                })
            }
            "hyperbolic" => {
                let rest =
                    rest.ok_or_else(|| Error::Parse("hyperbolic: expected hyperbolic:N[:Q]".into()))?;
                let (nv, scale) = match rest.split_once(':') {
                    Some((nv, q)) => (nv, Some(q)),
                    None => (rest, None),
                };
                Ok(PotentialSpec::Hyperbolic {
                    vars: parse_vars(nv, "hyperbolic")?,
                    scale: parse_scale(scale, "hyperbolic")?,
                })
            }
            "perturbed_quartic" => {
                if rest.is_some() {
                    return Err(Error::Parse(
                        "perturbed_quartic takes no arguments".into(),
                    ));
                }
                Ok(PotentialSpec::PerturbedQuartic)
            }
            "product" => {
                let rest = rest
                    .ok_or_else(|| Error::Parse("product: expected product:spec,spec".into()))?;
                let factors: Vec<PotentialSpec> = rest
                    .split(',')
                    .map(|part| {
                        if part.trim_start().starts_with("product") {
                            Err(Error::Parse(
                                "product: nested products are not supported".into(),
                            ))
                        } else {
                            PotentialSpec::parse(part)
                        }
                    })
                    .collect::<Result<_>>()?;
                if factors.len() < 2 {
                    return Err(Error::Parse(
                        "product: needs at least two comma-separated factors".into(),
                    ));
                }
                Ok(PotentialSpec::Product(factors))
            }
            _ => Ok(PotentialSpec::File(PathBuf::from(text))),
        }
    }

    /// Number of variables the realized potential lives in.
    pub fn vars(&self) -> Result<usize> {
        match self {
            PotentialSpec::Flat { vars }
            | PotentialSpec::FubiniStudy { vars, .. }
            | PotentialSpec::Hyperbolic { vars, .. } => Ok(*vars),
            PotentialSpec::PerturbedQuartic => Ok(1),
            PotentialSpec::Product(fs) => fs.iter().map(|f| f.vars()).sum(),
            PotentialSpec::File(path) => Ok(read_potential_file(path)?.0.vars()),
        }
    }

    /// The order the source naturally carries: the stored window of a file,
    /// `None` for builtins (realizable at any window).
    pub fn natural_order(&self) -> Result<Option<u32>> {
        match self {
            PotentialSpec::File(path) => Ok(Some(read_potential_file(path)?.1)),
            PotentialSpec::Product(fs) => {
                let mut best: Option<u32> = None;
                for f in fs {
                    if let Some(d) = f.natural_order()? {
                        best = Some(best.map_or(d, |b| b.min(d)));
                    }
                }
                Ok(best)
            }
            _ => Ok(None),
        }
    }

    /// Realize the potential on a window of the given order.
    pub fn realize(&self, order: u32) -> Result<HermitianSeries> {
        match self {
            PotentialSpec::Flat { vars } => Ok(flat_potential(*vars, order)),
            PotentialSpec::FubiniStudy { vars, scale } => {
                let log = one_plus_norm(*vars, order, false).log()?;
                HermitianSeries::try_new(log.scalar_mul_rational(scale))
            }
            PotentialSpec::Hyperbolic { vars, scale } => {
                let log = one_plus_norm(*vars, order, true).log()?;
                HermitianSeries::try_new(log.scalar_mul_rational(&-scale.clone()))
            }
            PotentialSpec::PerturbedQuartic => HermitianSeries::from_terms(
                1,
                order,
                [
                    (
                        MultiIndex(vec![1]),
                        MultiIndex(vec![1]),
                        Coefficient::from_ints(1, 1),
                    ),
                    (
                        MultiIndex(vec![2]),
                        MultiIndex(vec![2]),
                        Coefficient::from_ints(-1, 4),
                    ),
                ],
            ),
            PotentialSpec::Product(factors) => {
                let total: usize = factors.iter().map(|f| f.vars()).sum::<Result<usize>>()?;
                let mut acc = HermitianSeries::zero(total, order);
                let mut offset = 0;
                for f in factors {
                    let part = f.realize(order)?;
                    let embedded = part.embed(total, offset)?;
                    offset += part.vars();
                    acc = acc.add(&embedded)?;
                }
                Ok(acc)
            }
            PotentialSpec::File(path) => {
                let (series, stored) = read_potential_file(path)?;
                if stored < order {
                    return Err(Error::InsufficientOrder {
                        what: format!("potential file {}", path.display()),
                        needed: order,
                        have: stored,
                    });
                }
                Ok(series.truncated(order))
            }
        }
    }
}

/// `1 + sum |z_i|^2`, or `1 - sum |z_i|^2` when `minus` is set.
fn one_plus_norm(vars: usize, order: u32, minus: bool) -> MixedSeries {
    let sign = if minus { -1 } else { 1 };
    let mut terms = vec![(
        MultiIndex::zero(vars),
        MultiIndex::zero(vars),
        Coefficient::from_ints(1, 1),
    )];
    for i in 0..vars {
        terms.push((
            MultiIndex::unit(vars, i),
            MultiIndex::unit(vars, i),
            Coefficient::from_ints(sign, 1),
        ));
    }
    MixedSeries::from_terms(vars, order, order, terms).expect("well-formed builtin")
}

/// A named member of the standard regression corpus.
#[derive(Debug, Clone)]
pub struct CorpusMember {
    pub name: &'static str,
    pub spec: PotentialSpec,
    pub potential: HermitianSeries,
}

/// The fixed eight-member corpus used by regression and property tests.
pub fn standard_corpus(order: u32) -> Result<Vec<CorpusMember>> {
    let specs: Vec<(&'static str, PotentialSpec)> = vec![
        ("flat_1", PotentialSpec::Flat { vars: 1 }),
        ("flat_2", PotentialSpec::Flat { vars: 2 }),
        (
            "fs_1",
            PotentialSpec::FubiniStudy {
                vars: 1,
                scale: BigRational::one(),
            },
        ),
        (
            "fs_2",
            PotentialSpec::FubiniStudy {
                vars: 2,
                scale: BigRational::one(),
            },
        ),
        (
            "fs_1_scale_1_2",
            PotentialSpec::FubiniStudy {
                vars: 1,
                scale: BigRational::new(1.into(), 2.into()),
            },
        ),
        (
            "hyperbolic_1",
            PotentialSpec::Hyperbolic {
                vars: 1,
                scale: BigRational::one(),
            },
        ),
        ("perturbed_quartic", PotentialSpec::PerturbedQuartic),
        (
            "product_fs1_flat1",
            PotentialSpec::Product(vec![
                PotentialSpec::FubiniStudy {
                    vars: 1,
                    scale: BigRational::one(),
                },
                PotentialSpec::Flat { vars: 1 },
            ]),
        ),
    ];
    specs
        .into_iter()
        .map(|(name, spec)| {
            let potential = spec.realize(order)?;
            Ok(CorpusMember {
                name,
                spec,
                potential,
            })
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct PotentialFile {
    version: u32,
    n: usize,
    d: u32,
    terms: Vec<FileTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FileTerm {
    m: Vec<u32>,
    k: Vec<u32>,
    re: String,
    im: String,
}

/// Write a potential to a version-1 JSON file, listing every stored
/// coefficient (both halves of each Hermitian pair) in graded order.
pub fn write_potential_file(path: &Path, series: &HermitianSeries) -> Result<()> {
    let terms = series
        .term_triples()
        .into_iter()
        .map(|(m, k, c)| FileTerm {
            m: m.0.clone(),
            k: k.0.clone(),
            re: c.re.to_string(),
            im: c.im.to_string(),
        })
        .collect();
    let file = PotentialFile {
        version: 1,
        n: series.vars(),
        d: series.order_bound(),
        terms,
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Internal(format!("serialize potential: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Read and validate a version-1 potential file; returns the series on its
/// stored window together with that window.
pub fn read_potential_file(path: &Path) -> Result<(HermitianSeries, u32)> {
    let text = std::fs::read_to_string(path)?;
    let file: PotentialFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if file.version != 1 {
        return Err(Error::Parse(format!(
            "{}: unsupported version {} (expected 1)",
            path.display(),
            file.version
        )));
    }
    if file.n == 0 {
        return Err(Error::Parse(format!(
            "{}: variable count must be at least 1",
            path.display()
        )));
    }
    let mut seen = BTreeSet::new();
    let mut triples = Vec::with_capacity(file.terms.len());
    for (i, term) in file.terms.iter().enumerate() {
        let where_ = |what: &str| {
            Error::Parse(format!("{}: term {i}: {what}", path.display()))
        };
        if term.m.len() != file.n || term.k.len() != file.n {
            return Err(where_(&format!(
                "index length must equal n = {}",
                file.n
            )));
        }
        let m = MultiIndex(term.m.clone());
        let k = MultiIndex(term.k.clone());
        if m.degree() > file.d || k.degree() > file.d {
            return Err(where_(&format!(
                "degree exceeds stored window d = {}",
                file.d
            )));
        }
        if !seen.insert((m.clone(), k.clone())) {
            return Err(where_(&format!("duplicate entry for {m} | {k}")));
        }
        let c = Coefficient::new(parse_rational(&term.re)?, parse_rational(&term.im)?);
        if c.is_zero() {
            continue;
        }
        triples.push((m, k, c));
    }
    let series = HermitianSeries::from_terms(file.n, file.d, triples)?;
    Ok((series, file.d))
}
