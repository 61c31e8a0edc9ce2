use std::fs;

use fracseries::funcspec::FuncSpec;
use fracseries::laplace::LaplaceSource;
use fracseries::{FracError, FracPowerSeries, TaylorSeries};

use crate::CliError;

/// A function given on the command line, either in the catalog grammar or as
/// `@path` to a serialized Taylor series.
pub enum Input {
    Spec(FuncSpec),
    Json(TaylorSeries),
}

impl Input {
    pub fn load(arg: &str) -> Result<Input, CliError> {
        match arg.strip_prefix('@') {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
                let s: TaylorSeries =
                    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{path}: {e}")))?;
                s.validate()?;
                Ok(Input::Json(s))
            }
            None => Ok(Input::Spec(FuncSpec::parse(arg)?)),
        }
    }

    /// The lower terminal: `--a` if given, else the file's center, else 0.
    pub fn center(&self, a: Option<f64>) -> f64 {
        match (a, self) {
            (Some(a), _) => a,
            (None, Input::Json(s)) => s.center,
            (None, Input::Spec(_)) => 0.0,
        }
    }

    pub fn has_fractional_power(&self) -> bool {
        matches!(self, Input::Spec(s) if s.has_fractional_power())
    }

    /// Taylor data at the terminal `a`.
    pub fn taylor(&self, a: f64, truncation: usize) -> Result<TaylorSeries, CliError> {
        self.taylor_about(a, a, truncation)
    }

    /// Taylor data at `center` for the function anchored at terminal `a`.
    /// File input is recentered when needed, which is exact for polynomials.
    pub fn taylor_about(&self, a: f64, center: f64, truncation: usize) -> Result<TaylorSeries, CliError> {
        match self {
            Input::Spec(s) => {
                if s.has_fractional_power() {
                    return Err(CliError::usage(format!(
                        "`{s}` has a fractional power and no Taylor data; only `laplace` accepts it"
                    )));
                }
                Ok(s.to_taylor_about(a, center, truncation)?)
            }
            Input::Json(s) if s.center == center => Ok(s.clone()),
            Input::Json(s) => Ok(s.recenter(center)),
        }
    }

    /// A transformable source at `center`: Taylor data when available, else
    /// the power-sum form.
    pub fn source(&self, center: f64, truncation: usize) -> Result<Box<dyn LaplaceSource>, CliError> {
        if self.has_fractional_power() {
            let Input::Spec(s) = self else { unreachable!() };
            let p: FracPowerSeries = s.to_power_series(center, truncation)?;
            Ok(Box::new(p))
        } else {
            Ok(Box::new(self.taylor(center, truncation)?))
        }
    }
}

/// `lo:hi:count`, evenly spaced and inclusive of both ends.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::usage(format!("grid `{text}` is not of the form lo:hi:count"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| if i + 1 == count { hi } else { lo + step * i as f64 }).collect())
}

pub fn check_grid(grid: &[f64], a: f64) -> Result<(), CliError> {
    match grid.iter().find(|&&t| t < a) {
        Some(t) => Err(FracError::Domain(format!("grid point {t} lies left of the terminal a = {a}")).into()),
        None => Ok(()),
    }
}
