//! Tables of zeta-zero ordinates.
//!
//! File format: UTF-8 text, one decimal ordinate per line in strictly increasing order.
//! Blank lines are skipped and lines starting with `#` are comments; a comment of the form
//! `# source: ...` is kept as the table's provenance.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Ordinate of the first nontrivial zero, used where an empty table still needs a height.
pub const FIRST_ZERO_ORDINATE: f64 = 14.134_725_141_734_693;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    gammas: Vec<f64>,
    beta: f64,
    source: String,
}

impl ZeroTable {
    /// Validates `gammas` (strictly increasing, positive, finite) and wraps them with β = 1/2.
    pub fn new(gammas: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        for (i, &g) in gammas.iter().enumerate() {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("ordinate {g} is not a positive finite number"),
                });
            }
            if i > 0 && g <= gammas[i - 1] {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!(
                        "ordinates not strictly increasing: {} then {g}",
                        gammas[i - 1]
                    ),
                });
            }
        }
        Ok(Self {
            gammas,
            beta: 0.5,
            source: source.into(),
        })
    }

    pub fn empty() -> Self {
        Self {
            gammas: Vec::new(),
            beta: 0.5,
            source: "empty".into(),
        }
    }

    /// Replaces the common real part of the zeros. Only meaningful for robustness
    /// experiments: every numerical run assumes β = 1/2.
    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!(
                "zero real part must lie in (0, 1), got {beta}"
            )));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn max_ordinate(&self) -> Option<f64> {
        self.gammas.last().copied()
    }

    /// The first `count` zeros (or all of them, if fewer).
    pub fn truncated(&self, count: usize) -> Self {
        Self {
            gammas: self.gammas[..count.min(self.gammas.len())].to_vec(),
            beta: self.beta,
            source: self.source.clone(),
        }
    }

    /// Number of ordinates `<= t`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.gammas.partition_point(|&g| g <= t)
    }

    pub fn read<R: BufRead>(reader: R, source: &str, max_count: Option<usize>) -> Result<Self> {
        let mut gammas = Vec::new();
        let mut provenance = None;
        let mut prev: Option<f64> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(comment) = text.strip_prefix('#') {
                if provenance.is_none() {
                    if let Some(src) = comment.trim().strip_prefix("source:") {
                        provenance = Some(src.trim().to_string());
                    }
                }
                continue;
            }
            if max_count.is_some_and(|m| gammas.len() >= m) {
                break;
            }
            let g: f64 = text.parse().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("cannot parse {text:?} as a number: {e}"),
            })?;
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("ordinate {g} is not positive"),
                });
            }
            if let Some(p) = prev {
                if g <= p {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("ordinates not strictly increasing: {p} then {g}"),
                    });
                }
            }
            prev = Some(g);
            gammas.push(g);
        }
        Ok(Self {
            gammas,
            beta: 0.5,
            source: provenance.unwrap_or_else(|| source.to_string()),
        })
    }

    /// Writes the table in the file format; every ordinate round-trips bit-exactly.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# source: {}", self.source)?;
        for g in &self.gammas {
            writeln!(w, "{g}")?;
        }
        Ok(())
    }
}

/// Reads a zero file, keeping at most `max_count` ordinates.
pub fn load_zeros(path: impl AsRef<Path>, max_count: Option<usize>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let file = File::open(path)?;
    ZeroTable::read(BufReader::new(file), &path.display().to_string(), max_count)
}

/// Smooth Riemann–von Mangoldt count `(T/2π) log(T/2π) - T/2π + 7/8` of zeros with
/// `0 < γ <= T`.
pub fn zero_count_estimate(t: f64) -> Result<f64> {
    if !(t >= 2.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "zero-count estimate needs T >= 2, got {t}"
        )));
    }
    let x = t / (2.0 * PI);
    Ok(x * x.ln() - x + 0.875)
}

/// Density `log(u/2π) / 2π` of zero ordinates near height `u`.
pub fn zero_density(u: f64) -> f64 {
    (u / (2.0 * PI)).ln() / (2.0 * PI)
}
