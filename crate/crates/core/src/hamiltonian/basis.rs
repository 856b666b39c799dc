use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};

const STO3G_H: &str = include_str!("../../data/sto-3g-h.basis");

/// Contracted s-shell as read from a basis data file (unnormalized primitives).
#[derive(Debug, Clone, PartialEq)]
pub struct ShellData {
    pub element: String,
    pub shell: String,
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
}

impl ShellData {
    /// The bundled STO-3G hydrogen 1s shell.
    pub fn sto3g_hydrogen() -> Self {
        Self::parse(STO3G_H).expect("bundled basis file is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `ELEMENT SHELL` followed by `exponent coefficient` lines;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(String, String)> = None;
        let mut exponents = Vec::new();
        let mut coefficients = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| Error::Parse { line: i + 1, message };
            if header.is_none() {
                if toks.len() != 2 {
                    return Err(err(format!("expected `ELEMENT SHELL`, got `{line}`")));
                }
                if !toks[1].eq_ignore_ascii_case("s") {
                    return Err(err(format!("only s shells are supported, got `{}`", toks[1])));
                }
                header = Some((toks[0].to_string(), toks[1].to_uppercase()));
                continue;
            }
            if toks.len() != 2 {
                return Err(err(format!("expected `exponent coefficient`, got `{line}`")));
            }
            let e: f64 = toks[0]
                .parse()
                .map_err(|_| err(format!("bad exponent `{}`", toks[0])))?;
            let c: f64 = toks[1]
                .parse()
                .map_err(|_| err(format!("bad coefficient `{}`", toks[1])))?;
            if !(e > 0.0 && e.is_finite()) || !c.is_finite() {
                return Err(err(format!("invalid primitive `{line}`")));
            }
            exponents.push(e);
            coefficients.push(c);
        }
        let (element, shell) = header.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `ELEMENT SHELL` header".into(),
        })?;
        if exponents.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no primitives".into(),
            });
        }
        Ok(Self {
            element,
            shell,
            exponents,
            coefficients,
        })
    }
}

/// Normalized contracted s-type Gaussian centred on an atom. Coefficients
/// include the primitive normalization `(2a/π)^{3/4}` and the overall
/// contraction normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedGaussian {
    /// Centre (bohr). Atoms live on a line, so one coordinate suffices.
    pub center: f64,
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
}

impl ContractedGaussian {
    pub fn new(center_bohr: f64, shell: &ShellData) -> Self {
        let mut coefficients: Vec<f64> = shell
            .exponents
            .iter()
            .zip(&shell.coefficients)
            .map(|(a, d)| d * (2.0 * a / PI).powf(0.75))
            .collect();
        let mut g = Self {
            center: center_bohr,
            exponents: shell.exponents.clone(),
            coefficients: coefficients.clone(),
        };
        let norm = super::integrals::overlap(&g, &g).sqrt();
        coefficients.iter_mut().for_each(|c| *c /= norm);
        g.coefficients = coefficients;
        g
    }

    pub fn primitives(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.exponents.iter().copied().zip(self.coefficients.iter().copied())
    }
}
