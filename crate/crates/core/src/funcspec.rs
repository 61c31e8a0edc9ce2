//! Text form of the functions accepted by the command line and the demo.
//!
//! ```text
//! spec  := atom ('+' atom)*
//! atom  := name [':' number (',' number)*]
//! name  := poly | shifted-poly | power | const | exp | sin | cos
//! ```
//!
//! `poly` and `power` are written in powers of `(t - a)`, the others in
//! absolute `t`. `exp`, `sin` and `cos` default to a unit rate. A `+` only
//! separates atoms when a letter follows, so `poly:1e+3` is one atom.

use std::fmt;
use std::str::FromStr;

use crate::error::{FracError, Result};
use crate::series::{series_from_catalog, FracPowerSeries, PowerTerm, TaylorSeries};

const NAMES: [&str; 7] = ["poly", "shifted-poly", "power", "const", "exp", "sin", "cos"];

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub name: String,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuncSpec {
    pub atoms: Vec<Atom>,
}

fn parse_atom(text: &str) -> Result<Atom> {
    let text = text.trim();
    let (name, rest) = match text.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (text, None),
    };
    if !NAMES.contains(&name) {
        return Err(FracError::UnknownFunction(name.to_string()));
    }
    let mut params = match rest {
        Some(r) => r
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| FracError::Parse(format!("`{}` is not a number in `{text}`", p.trim())))
            })
            .collect::<Result<Vec<f64>>>()?,
        None => Vec::new(),
    };
    if params.is_empty() {
        match name {
            "exp" | "sin" | "cos" => params.push(1.0),
            _ => return Err(FracError::Parse(format!("`{name}` needs parameters, e.g. `{name}:1`"))),
        }
    }
    if let Some(p) = params.iter().find(|p| !p.is_finite()) {
        return Err(FracError::Parse(format!("parameter {p} is not finite")));
    }
    Ok(Atom { name: name.to_string(), params })
}

impl FromStr for FuncSpec {
    type Err = FracError;

    fn from_str(s: &str) -> Result<FuncSpec> {
        let mut pieces = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            let next_is_letter = bytes[i + 1..]
                .iter()
                .find(|c| !c.is_ascii_whitespace())
                .is_some_and(|c| c.is_ascii_alphabetic());
            if b == b'+' && next_is_letter {
                pieces.push(&s[start..i]);
                start = i + 1;
            }
        }
        pieces.push(&s[start..]);
        if pieces.iter().any(|p| p.trim().is_empty()) {
            return Err(FracError::Parse(format!("empty term in `{s}`")));
        }
        Ok(FuncSpec { atoms: pieces.into_iter().map(parse_atom).collect::<Result<_>>()? })
    }
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}:", atom.name)?;
            for (j, p) in atom.params.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

impl FuncSpec {
    pub fn parse(s: &str) -> Result<FuncSpec> {
        s.parse()
    }

    /// True when some `power` atom has an exponent that is not a
    /// non-negative integer, so the function has no Taylor data at `a`.
    pub fn has_fractional_power(&self) -> bool {
        self.atoms
            .iter()
            .any(|a| a.name == "power" && a.params.first().is_some_and(|p| *p < 0.0 || p.fract() != 0.0))
    }

    /// True when every atom is a polynomial, so the Taylor data are exact.
    pub fn is_polynomial(&self) -> bool {
        !self.has_fractional_power() && self.atoms.iter().all(|a| !matches!(a.name.as_str(), "exp" | "sin" | "cos"))
    }

    /// Taylor data at `center` with derivatives `0..=truncation`.
    pub fn to_taylor(&self, center: f64, truncation: usize) -> Result<TaylorSeries> {
        let mut acc: Option<TaylorSeries> = None;
        for atom in &self.atoms {
            let s = series_from_catalog(&atom.name, &atom.params, center, truncation)?;
            acc = Some(match acc {
                Some(prev) => prev.add(&s)?,
                None => s,
            });
        }
        acc.ok_or_else(|| FracError::Parse("empty function".into()))
    }

    /// Taylor data at `center` of the function whose relative atoms (`poly`,
    /// integer `power`) are written in powers of `(t - terminal)`.
    pub fn to_taylor_about(&self, terminal: f64, center: f64, truncation: usize) -> Result<TaylorSeries> {
        if terminal == center {
            return self.to_taylor(center, truncation);
        }
        let mut acc: Option<TaylorSeries> = None;
        for atom in &self.atoms {
            let s = match atom.name.as_str() {
                "poly" | "power" => series_from_catalog(&atom.name, &atom.params, terminal, truncation)?.recenter(center),
                _ => series_from_catalog(&atom.name, &atom.params, center, truncation)?,
            };
            acc = Some(match acc {
                Some(prev) => prev.add(&s)?,
                None => s,
            });
        }
        acc.ok_or_else(|| FracError::Parse("empty function".into()))
    }

    /// Power-sum form at `center`; fractional `power` atoms become single
    /// terms, everything else goes through [`FuncSpec::to_taylor`].
    pub fn to_power_series(&self, center: f64, truncation: usize) -> Result<FracPowerSeries> {
        let mut acc = FracPowerSeries::zero(center);
        for atom in &self.atoms {
            let part = match (atom.name.as_str(), atom.params.as_slice()) {
                ("power", [p]) if *p < 0.0 || p.fract() != 0.0 => {
                    FracPowerSeries::new(center, vec![PowerTerm { coeff: 1.0, exponent: *p }])
                }
                _ => series_from_catalog(&atom.name, &atom.params, center, truncation)?.to_power_series(),
            };
            acc = acc.plus(&part)?;
        }
        Ok(acc)
    }
}
