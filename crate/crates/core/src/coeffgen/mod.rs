//! Exact-rational coefficient tables for central-upwind WENO schemes of
//! order `2r` and their upwind `(2r-1)` counterparts.
//!
//! Everything is derived from first principles: candidate and full-stencil
//! coefficients from cell-average interpolation, ideal weights from the
//! linear-combination identity, smoothness matrices from the derivative
//! seminorm over the central cell, and the global-indicator vectors from
//! repeated undivided differences. Nothing is copied from a table except
//! in [`published`], which exists only to check the derivation.

mod exact;
mod format;
pub mod published;
mod verify;

use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

pub use exact::to_f64;
pub use format::{write_csv, write_text, TableFormat};
pub use verify::{verify_tables, Check, VerificationReport};

/// Exact fraction, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Smallest supported substencil width.
pub const MIN_R: usize = 1;
/// Largest supported substencil width.
pub const MAX_R: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("substencil width r = {0} is outside the supported range {MIN_R}..={MAX_R}")]
    UnsupportedOrder(usize),
    #[error("substencil index {index} is invalid for r = {r}")]
    BadIndex { r: usize, index: usize },
    #[error("smoothness indicators and global indicators need r >= 2 (got r = {0})")]
    IndicatorUndefined(usize),
}

/// Which substencil a smoothness matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substencil {
    /// Upwind substencil `S_k`, `k < r`.
    Upwind(usize),
    /// Downwind substencil `S_r` (the `d` index).
    Downwind,
}

fn check_r(r: usize) -> Result<(), CoeffError> {
    if (MIN_R..=MAX_R).contains(&r) {
        Ok(())
    } else {
        Err(CoeffError::UnsupportedOrder(r))
    }
}

fn interface() -> Rational {
    exact::rat(1, 2)
}

fn offsets(first: i64, len: usize) -> Vec<i64> {
    (0..len as i64).map(|j| first + j).collect()
}

/// Candidate coefficients on `S_k = {x_{i-r+1+k}, …, x_{i+k}}` for the
/// interface value at `x_{i+½}`.
pub fn candidate_coeffs(r: usize, k: usize) -> Result<Vec<Rational>, CoeffError> {
    check_r(r)?;
    if k > r {
        return Err(CoeffError::BadIndex { r, index: k });
    }
    let first = -(r as i64) + 1 + k as i64;
    Ok(exact::point_value_coeffs(&offsets(first, r), &interface()))
}

/// Central coefficients on the full `2r`-point stencil.
pub fn full_stencil_coeffs(r: usize) -> Result<Vec<Rational>, CoeffError> {
    check_r(r)?;
    Ok(exact::point_value_coeffs(&offsets(1 - r as i64, 2 * r), &interface()))
}

/// Upwind coefficients on the `2r-1`-point stencil `S^{2r} \ {x_{i+r}}`.
pub fn upwind_stencil_coeffs(r: usize) -> Result<Vec<Rational>, CoeffError> {
    check_r(r)?;
    Ok(exact::point_value_coeffs(&offsets(1 - r as i64, 2 * r - 1), &interface()))
}

/// Ideal weights. `central` gives the `r+1` weights reproducing the `2r`
/// stencil; otherwise the `r` weights reproducing the `2r-1` upwind stencil.
pub fn ideal_weights(r: usize, central: bool) -> Result<Vec<Rational>, CoeffError> {
    check_r(r)?;
    let (target, count) = if central {
        (full_stencil_coeffs(r)?, r + 1)
    } else {
        (upwind_stencil_coeffs(r)?, r)
    };
    let subs: Vec<Vec<Rational>> = (0..count)
        .map(|k| candidate_coeffs(r, k))
        .collect::<Result<_, _>>()?;
    // Row j: Σ_k d_k c_k[j-k] = target[j]; the leading `count` rows are
    // lower triangular with nonzero diagonal.
    let a: Vec<Vec<Rational>> = (0..count)
        .map(|j| {
            (0..count)
                .map(|k| {
                    if j >= k && j - k < r {
                        subs[k][j - k].clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(exact::solve(&a, &target[..count]).expect("ideal-weight system is triangular and nonsingular"))
}

/// Symmetric matrix `B` with `β = fᵀ B f` for the substencil polynomial.
pub fn smoothness_matrix(r: usize, which: Substencil) -> Result<Vec<Vec<Rational>>, CoeffError> {
    check_r(r)?;
    if r < 2 {
        return Err(CoeffError::IndicatorUndefined(r));
    }
    let k = match which {
        Substencil::Upwind(k) if k < r => k,
        Substencil::Upwind(k) => return Err(CoeffError::BadIndex { r, index: k }),
        Substencil::Downwind => r,
    };
    Ok(smoothness_matrix_unchecked(r, k))
}

fn smoothness_matrix_unchecked(r: usize, k: usize) -> Vec<Vec<Rational>> {
    let first = -(r as i64) + 1 + k as i64;
    let a = exact::cell_average_matrix(&offsets(first, r));
    let to_monomial = exact::inverse(&a).expect("nonsingular");
    let gram = exact::derivative_gram(r - 1);
    let tmp = exact::matmul(&gram, &to_monomial);
    exact::matmul(&exact::transpose(&to_monomial), &tmp)
}

fn undivided_difference(order: usize) -> Vec<Rational> {
    let mut c = vec![Rational::one()];
    for _ in 0..order {
        let mut next = vec![Rational::zero(); c.len() + 1];
        for (j, v) in c.iter().enumerate() {
            next[j] -= v;
            next[j + 1] += v;
        }
        c = next;
    }
    c
}

/// Global-indicator vectors `(c_τ, c_τ′)`, both of length `2r`.
pub fn tau_vectors(r: usize) -> Result<(Vec<Rational>, Vec<Rational>), CoeffError> {
    check_r(r)?;
    if r < 2 {
        return Err(CoeffError::IndicatorUndefined(r));
    }
    Ok(tau_vectors_unchecked(r))
}

fn tau_vectors_unchecked(r: usize) -> (Vec<Rational>, Vec<Rational>) {
    let c_tau = undivided_difference(2 * r - 1);
    let mut c_tau_prime = undivided_difference(2 * r - 2);
    c_tau_prime.push(Rational::zero());
    (c_tau, c_tau_prime)
}

/// Every exact table a scheme of order `2r` (and its `2r-1` upwind
/// sibling) needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeTables {
    pub r: usize,
    pub c_full: Vec<Rational>,
    pub c_upwind_full: Vec<Rational>,
    pub c_sub: Vec<Vec<Rational>>,
    pub d_central: Vec<Rational>,
    pub d_upwind: Vec<Rational>,
    /// `B_0 … B_{r-1}` followed by `B_d` at index `r`.
    pub b: Vec<Vec<Vec<Rational>>>,
    pub c_tau: Vec<Rational>,
    pub c_tau_prime: Vec<Rational>,
}

impl SchemeTables {
    pub fn generate(r: usize) -> Result<Self, CoeffError> {
        check_r(r)?;
        let c_sub = (0..=r).map(|k| candidate_coeffs(r, k)).collect::<Result<_, _>>()?;
        let b = if r >= 2 {
            (0..=r).map(|k| smoothness_matrix_unchecked(r, k)).collect()
        } else {
            // constant reconstruction: the indicator vanishes identically
            vec![vec![vec![Rational::zero()]]; 2]
        };
        let (c_tau, c_tau_prime) = tau_vectors_unchecked(r);
        Ok(Self {
            r,
            c_full: full_stencil_coeffs(r)?,
            c_upwind_full: upwind_stencil_coeffs(r)?,
            c_sub,
            d_central: ideal_weights(r, true)?,
            d_upwind: ideal_weights(r, false)?,
            b,
            c_tau,
            c_tau_prime,
        })
    }

    pub fn b_downwind(&self) -> &Vec<Vec<Rational>> {
        &self.b[self.r]
    }

    pub fn to_float(&self) -> FloatTables {
        let v = |x: &[Rational]| x.iter().map(exact::to_f64).collect::<Vec<_>>();
        FloatTables {
            r: self.r,
            c_full: v(&self.c_full),
            c_upwind_full: v(&self.c_upwind_full),
            c_sub: self.c_sub.iter().flat_map(|c| v(c)).collect(),
            d_central: v(&self.d_central),
            d_upwind: v(&self.d_upwind),
            b: self
                .b
                .iter()
                .flat_map(|m| m.iter().flat_map(|row| v(row)))
                .collect(),
            c_tau: v(&self.c_tau),
            c_tau_prime: v(&self.c_tau_prime),
        }
    }
}

/// Nearest-double copies of [`SchemeTables`], laid out flat for the kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatTables {
    pub r: usize,
    pub c_full: Vec<f64>,
    pub c_upwind_full: Vec<f64>,
    /// `(r+1) × r`, row `k` is `c_sub[k]`.
    pub c_sub: Vec<f64>,
    pub d_central: Vec<f64>,
    pub d_upwind: Vec<f64>,
    /// `(r+1)` row-major `r × r` blocks; block `r` is `B_d`.
    pub b: Vec<f64>,
    pub c_tau: Vec<f64>,
    pub c_tau_prime: Vec<f64>,
}

impl FloatTables {
    #[inline]
    pub fn candidate(&self, k: usize) -> &[f64] {
        &self.c_sub[k * self.r..(k + 1) * self.r]
    }

    #[inline]
    pub fn smoothness(&self, k: usize) -> &[f64] {
        let rr = self.r * self.r;
        &self.b[k * rr..(k + 1) * rr]
    }
}

static EXACT: [OnceLock<SchemeTables>; MAX_R + 1] = [const { OnceLock::new() }; MAX_R + 1];
static FLOAT: [OnceLock<Arc<FloatTables>>; MAX_R + 1] = [const { OnceLock::new() }; MAX_R + 1];

/// Cached exact tables; generated on first use and frozen afterwards.
pub fn tables(r: usize) -> Result<&'static SchemeTables, CoeffError> {
    check_r(r)?;
    Ok(EXACT[r].get_or_init(|| SchemeTables::generate(r).expect("range checked")))
}

/// Cached floating-point tables.
pub fn float_tables(r: usize) -> Result<Arc<FloatTables>, CoeffError> {
    let exact = tables(r)?;
    Ok(FLOAT[r].get_or_init(|| Arc::new(exact.to_float())).clone())
}
