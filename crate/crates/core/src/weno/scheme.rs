use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{dot, Kernel, WeightParams, MAX_W};
use crate::coeffgen::{float_tables, CoeffError, FloatTables};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WenoError {
    #[error("invalid weight parameters: {0}")]
    InvalidParams(String),
    #[error("window has {got} samples, scheme needs {expected}")]
    WindowLength { expected: usize, got: usize },
    #[error("unknown scheme `{name}`{}", suggestion.as_ref().map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default())]
    UnknownScheme { name: String, suggestion: Option<String> },
    #[error("{family} has no order {order}")]
    BadOrder { family: &'static str, order: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Even-order central-upwind Z-type weights with an averaged downwind indicator.
    CentralUpwind,
    /// Odd-order upwind Z weights.
    UpwindZ,
    LinearCentral,
    LinearUpwind,
}

impl Family {
    fn prefix(self) -> &'static str {
        match self {
            Family::CentralUpwind => "za",
            Family::UpwindZ => "z",
            Family::LinearCentral => "ct",
            Family::LinearUpwind => "up",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Family::CentralUpwind => "WENO-ZA",
            Family::UpwindZ => "WENO-Z",
            Family::LinearCentral => "linear central",
            Family::LinearUpwind => "linear upwind",
        }
    }

    pub fn is_central(self) -> bool {
        matches!(self, Family::CentralUpwind | Family::LinearCentral)
    }
}

/// A scheme family, its substencil width `r` and weight parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeKind {
    pub family: Family,
    pub r: usize,
    #[serde(default)]
    pub params: WeightParams,
}

/// Z-type `τ` built from upwind `β`'s; known for `r ∈ {2, 3, 4}`.
pub(crate) fn z_tau(beta: &[f64]) -> f64 {
    match beta.len() {
        2 => (beta[0] - beta[1]).abs(),
        3 => (beta[0] - beta[2]).abs(),
        4 => (beta[0] - beta[1] - beta[2] + beta[3]).abs(),
        _ => f64::NAN,
    }
}

pub(crate) fn z_tau_supported(r: usize) -> Result<(), WenoError> {
    if (2..=4).contains(&r) {
        Ok(())
    } else {
        Err(WenoError::BadOrder { family: "WENO-Z", order: 2 * r - 1 })
    }
}

impl SchemeKind {
    pub fn za(order: usize) -> Result<Self, WenoError> {
        if order < 4 || order % 2 != 0 || order / 2 > crate::coeffgen::MAX_R {
            return Err(WenoError::BadOrder { family: "WENO-ZA", order });
        }
        Ok(Self { family: Family::CentralUpwind, r: order / 2, params: WeightParams::default() })
    }

    pub fn z(order: usize) -> Result<Self, WenoError> {
        if order % 2 != 1 {
            return Err(WenoError::BadOrder { family: "WENO-Z", order });
        }
        let r = order.div_ceil(2);
        z_tau_supported(r)?;
        let params = WeightParams { power: 2.0, ..WeightParams::default() };
        Ok(Self { family: Family::UpwindZ, r, params })
    }

    pub fn linear_central(order: usize) -> Result<Self, WenoError> {
        if order < 2 || order % 2 != 0 || order / 2 > crate::coeffgen::MAX_R {
            return Err(WenoError::BadOrder { family: "linear central", order });
        }
        Ok(Self { family: Family::LinearCentral, r: order / 2, params: WeightParams::default() })
    }

    pub fn linear_upwind(order: usize) -> Result<Self, WenoError> {
        if order % 2 != 1 || order.div_ceil(2) > crate::coeffgen::MAX_R {
            return Err(WenoError::BadOrder { family: "linear upwind", order });
        }
        Ok(Self { family: Family::LinearUpwind, r: order.div_ceil(2), params: WeightParams::default() })
    }

    pub fn with_params(self, params: WeightParams) -> Self {
        Self { params, ..self }
    }

    pub fn order(&self) -> usize {
        if self.family.is_central() {
            2 * self.r
        } else {
            2 * self.r - 1
        }
    }

    pub fn window_len(&self) -> usize {
        self.order()
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family.prefix(), self.order())
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.family.label(), self.order())
    }

    /// Short names accepted by [`FromStr`].
    pub fn catalog() -> Vec<String> {
        let mut names = Vec::new();
        for o in [4, 6, 8, 10, 12, 14, 16] {
            names.push(format!("za{o}"));
        }
        for o in [3, 5, 7] {
            names.push(format!("z{o}"));
        }
        for o in [2, 4, 6, 8, 10] {
            names.push(format!("ct{o}"));
        }
        for o in [1, 3, 5, 7, 9] {
            names.push(format!("up{o}"));
        }
        names
    }

    pub fn build(&self) -> Result<Scheme, WenoError> {
        Scheme::new(*self)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        let lower = lower.strip_prefix("weno").unwrap_or(&lower);
        let split = lower.find(|c: char| c.is_ascii_digit()).unwrap_or(lower.len());
        let (prefix, digits) = lower.split_at(split);
        let unknown = || WenoError::UnknownScheme { name: s.to_string(), suggestion: suggest(s) };
        let order: usize = digits.parse().map_err(|_| unknown())?;
        match prefix {
            "za" => Self::za(order),
            "z" => Self::z(order),
            "ct" | "central" => Self::linear_central(order),
            "up" | "upwind" => Self::linear_upwind(order),
            _ => Err(unknown()),
        }
    }
}

fn suggest(name: &str) -> Option<String> {
    let lower = name.to_ascii_lowercase();
    SchemeKind::catalog()
        .into_iter()
        .map(|c| (strsim::levenshtein(&lower, &c), c))
        .filter(|(d, _)| *d <= 3)
        .min_by_key(|(d, _)| *d)
        .map(|(_, c)| c)
}

/// Swappable interface reconstruction used by the flux layer.
///
/// `plus` receives `left + right` samples centred on the interface:
/// cells `i+1-left ..= i+right` for the interface `i+½`.
pub trait Reconstruct: Send + Sync {
    /// `(left, right)` sample counts on either side of the interface.
    fn extent(&self) -> (usize, usize);
    fn plus(&self, samples: &[f64], dx: f64) -> f64;
    fn name(&self) -> String;
}

/// A [`SchemeKind`] bound to its floating-point tables.
#[derive(Debug, Clone)]
pub struct Scheme {
    kind: SchemeKind,
    tables: Arc<FloatTables>,
    kernel: Arc<Kernel>,
}

impl Scheme {
    pub fn new(kind: SchemeKind) -> Result<Self, WenoError> {
        kind.params.validate()?;
        if kind.family == Family::UpwindZ {
            z_tau_supported(kind.r)?;
        }
        if kind.family == Family::CentralUpwind && kind.r < 2 {
            return Err(WenoError::BadOrder { family: "WENO-ZA", order: 2 * kind.r });
        }
        let tables = float_tables(kind.r)?;
        let kernel = Arc::new(Kernel::new(&tables));
        Ok(Self { kind, tables, kernel })
    }

    pub fn kind(&self) -> &SchemeKind {
        &self.kind
    }

    pub fn tables(&self) -> &FloatTables {
        &self.tables
    }

    pub fn window_len(&self) -> usize {
        self.kind.window_len()
    }

    /// Nonlinear weights for the window, or `None` for linear schemes.
    pub fn weights(&self, samples: &[f64], dx: f64) -> Option<Vec<f64>> {
        let mut omega = [0.0; MAX_W];
        let t = &*self.tables;
        match self.kind.family {
            Family::CentralUpwind => {
                self.kernel.central_weights(samples, dx, &self.kind.params, &mut omega);
                Some(omega[..=t.r].to_vec())
            }
            Family::UpwindZ => {
                self.kernel.upwind_weights(samples, dx, &self.kind.params, &mut omega);
                Some(omega[..t.r].to_vec())
            }
            _ => None,
        }
    }
}

impl Reconstruct for Scheme {
    fn extent(&self) -> (usize, usize) {
        let r = self.kind.r;
        if self.kind.family.is_central() {
            (r, r)
        } else {
            (r, r - 1)
        }
    }

    #[inline]
    fn plus(&self, w: &[f64], dx: f64) -> f64 {
        let t = &*self.tables;
        match self.kind.family {
            Family::LinearCentral => dot(&t.c_full, w),
            Family::LinearUpwind => dot(&t.c_upwind_full, w),
            Family::CentralUpwind => self.kernel.central_plus(w, dx, &self.kind.params),
            Family::UpwindZ => self.kernel.upwind_plus(w, dx, &self.kind.params),
        }
    }

    fn name(&self) -> String {
        self.kind.name()
    }
}
