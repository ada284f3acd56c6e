//! JSON literals for functions, tuples and subspaces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{synthesize, CircleFunction, CircleGrid};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Window};

/// `{"grid": N, "coeffs": [[j, re, im], ...]}` or `{"grid": N, "samples": [[re, im], ...]}`.
///
/// `grid` is optional; callers supply a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<LaurentPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

impl FunctionLiteral {
    pub fn parse(text: &str) -> Result<Self> {
        let lit: FunctionLiteral =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("function literal: {e}")))?;
        lit.validate()?;
        Ok(lit)
    }

    pub fn from_laurent(p: &LaurentPoly, grid: Option<CircleGrid>) -> Self {
        FunctionLiteral { grid: grid.map(|g| g.size()), coeffs: Some(p.clone()), samples: None }
    }

    pub fn from_function(f: &CircleFunction) -> Self {
        FunctionLiteral {
            grid: Some(f.grid().size()),
            coeffs: None,
            samples: Some(f.samples().iter().map(|c| [c.re, c.im]).collect()),
        }
    }

    fn validate(&self) -> Result<()> {
        match (&self.coeffs, &self.samples) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(Error::Parse("function literal needs exactly one of coeffs or samples".into())),
        }
    }

    /// Resolves the grid: explicit `grid`, else the sample count, else `default`.
    pub fn grid(&self, default: CircleGrid) -> Result<CircleGrid> {
        match (self.grid, &self.samples) {
            (Some(n), _) => CircleGrid::new(n),
            (None, Some(s)) => CircleGrid::new(s.len()),
            (None, None) => Ok(default),
        }
    }

    pub fn to_function(&self, default: CircleGrid) -> Result<CircleFunction> {
        self.validate()?;
        let grid = self.grid(default)?;
        match (&self.coeffs, &self.samples) {
            (Some(p), _) => synthesize(p, grid),
            (_, Some(s)) => CircleFunction::from_samples(
                grid,
                s.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            ),
            _ => unreachable!(),
        }
    }

    /// The exact series, available for coefficient literals only.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        self.coeffs.clone()
    }
}

/// `{"n": 2, "r": 2, "functions": [<function literal>, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFixture {
    pub n: usize,
    pub r: usize,
    pub functions: Vec<FunctionLiteral>,
}

/// Metric carried by a subspace fixture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricLiteral {
    /// The string `"l2"`.
    Named(String),
    Pullback { pullback: FunctionLiteral },
}

/// `{"window": [lo, hi], "generators": [...], "metric": "l2" | {"pullback": <literal>}}`.
///
/// With a pullback metric over `phi` the space is `phi * span(generators)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceFixture {
    pub window: Window,
    pub generators: Vec<FunctionLiteral>,
    #[serde(default = "default_metric")]
    pub metric: MetricLiteral,
}

fn default_metric() -> MetricLiteral {
    MetricLiteral::Named("l2".into())
}
